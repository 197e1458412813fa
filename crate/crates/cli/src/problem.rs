//! Problem-file parsing: one JSON document per invocation, all rationals
//! carried as exact "a/b" strings, unbounded interval ends as "-inf"/"inf".

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use annuli_core::annuli::Annulus;
use annuli_core::cochains::SemiGraph;
use annuli_core::newton::NewtonData;
use annuli_core::residues::LaurentExt;
use annuli_core::valnum::Endpoint;
use annuli_core::{LogInterval, Rat};
use serde::de::DeserializeOwned;
use serde::Deserialize;

/// Failures carry the exit code contract: 2 for malformed input, 3 for a
/// precondition the library rejected.
#[derive(Debug)]
pub struct CmdError {
    pub code: i32,
    pub msg: String,
}

impl fmt::Display for CmdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.msg)
    }
}

pub fn validation(msg: impl Into<String>) -> CmdError {
    CmdError { code: 2, msg: msg.into() }
}

pub fn domain(msg: impl fmt::Display) -> CmdError {
    CmdError { code: 3, msg: msg.to_string() }
}

pub fn parse_rat(s: &str) -> Result<Rat, CmdError> {
    Rat::from_str(s.trim())
        .map_err(|_| validation(format!("not an exact rational: {s:?} (use \"a/b\" or an integer string)")))
}

/// A rational in its string form; deserializes eagerly so field errors
/// name the offending value.
#[derive(Clone, Debug)]
pub struct RatStr(pub Rat);

impl<'de> Deserialize<'de> for RatStr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Rat::from_str(s.trim())
            .map(RatStr)
            .map_err(|_| serde::de::Error::custom(format!("not an exact rational: {s:?}")))
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnulusSpec {
    pub lo: String,
    pub hi: String,
    #[serde(default)]
    pub lo_closed: bool,
    #[serde(default)]
    pub hi_closed: bool,
    #[serde(default = "default_orientation")]
    pub orientation: i8,
}

fn default_orientation() -> i8 {
    1
}

impl AnnulusSpec {
    pub fn interval(&self) -> Result<LogInterval, CmdError> {
        let lo = match self.lo.trim() {
            "-inf" => {
                if self.lo_closed {
                    return Err(validation("annulus: an unbounded end cannot be closed"));
                }
                Endpoint::Unbounded
            }
            s => Endpoint::At { value: parse_rat(s)?, closed: self.lo_closed },
        };
        let hi = match self.hi.trim() {
            "inf" | "+inf" => {
                if self.hi_closed {
                    return Err(validation("annulus: an unbounded end cannot be closed"));
                }
                Endpoint::Unbounded
            }
            s => Endpoint::At { value: parse_rat(s)?, closed: self.hi_closed },
        };
        LogInterval::new(lo, hi)
            .map_err(|e| validation(format!("annulus: {e}")))
    }

    pub fn annulus(&self) -> Result<Annulus, CmdError> {
        if !matches!(self.orientation, 1 | -1) {
            return Err(validation("annulus: orientation must be 1 or -1"));
        }
        Annulus::new(self.interval()?, self.orientation)
            .ok_or_else(|| domain("annulus: skeleton interval is degenerate"))
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewtonTermSpec {
    pub degree: i64,
    pub mag: RatStr,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaurentTermSpec {
    pub degree: i64,
    pub coeff: RatStr,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub name: String,
    pub from: Option<String>,
    pub to: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema: u32,
    pub p: u64,
    pub annulus: Option<AnnulusSpec>,
    pub newton: Option<Vec<NewtonTermSpec>>,
    pub laurent: Option<Vec<LaurentTermSpec>>,
    pub semigraph: Option<GraphSpec>,
    #[serde(default)]
    pub params: serde_json::Value,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, CmdError> {
        let pf: ProblemFile =
            serde_json::from_str(text).map_err(|e| validation(format!("problem file: {e}")))?;
        if pf.schema != 1 {
            return Err(validation(format!("unsupported schema version {}", pf.schema)));
        }
        if !is_prime(pf.p) {
            return Err(validation(format!("p must be a prime, got {}", pf.p)));
        }
        Ok(pf)
    }

    /// Command-specific parameters, decoded strictly.
    pub fn params<T: DeserializeOwned>(&self) -> Result<T, CmdError> {
        let v = if self.params.is_null() {
            serde_json::Value::Object(serde_json::Map::new())
        } else {
            self.params.clone()
        };
        serde_json::from_value(v).map_err(|e| validation(format!("params: {e}")))
    }

    pub fn newton_data(&self) -> Result<NewtonData, CmdError> {
        let terms = self
            .newton
            .as_ref()
            .ok_or_else(|| validation("this command needs a \"newton\" block"))?;
        if terms.is_empty() {
            return Err(validation("newton data needs at least one term"));
        }
        let mut map: BTreeMap<i64, Rat> = BTreeMap::new();
        for t in terms {
            if map.insert(t.degree, t.mag.0.clone()).is_some() {
                return Err(validation(format!("newton: duplicate degree {}", t.degree)));
            }
        }
        Ok(NewtonData::from_pairs(&map.into_iter().collect::<Vec<_>>()))
    }

    pub fn laurent_data(&self) -> Result<LaurentExt, CmdError> {
        let terms = self
            .laurent
            .as_ref()
            .ok_or_else(|| validation("this command needs a \"laurent\" block"))?;
        let mut map: BTreeMap<i64, Rat> = BTreeMap::new();
        for t in terms {
            if map.insert(t.degree, t.coeff.0.clone()).is_some() {
                return Err(validation(format!("laurent: duplicate degree {}", t.degree)));
            }
        }
        Ok(LaurentExt::from_rat_coeffs(self.p, map.into_iter().collect()))
    }

    pub fn annulus_spec(&self) -> Result<&AnnulusSpec, CmdError> {
        self.annulus
            .as_ref()
            .ok_or_else(|| validation("this command needs an \"annulus\" block"))
    }

    pub fn graph(&self) -> Result<SemiGraph, CmdError> {
        let spec = self
            .semigraph
            .as_ref()
            .ok_or_else(|| validation("this command needs a \"semigraph\" block"))?;
        SemiGraph::new(
            spec.vertices.iter().cloned(),
            spec.edges.iter().map(|e| (e.name.clone(), e.from.clone(), e.to.clone())),
        )
        .map_err(|e| validation(format!("semigraph: {e}")))
    }
}
