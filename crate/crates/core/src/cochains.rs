//! Semi-graphs and harmonic cochains with values in Z/nZ.
//!
//! A semi-graph is a finite vertex set plus edges whose two branches are
//! each either attached to a vertex or open. A cochain assigns each edge
//! a value in a fixed reference orientation (from -> to); reversing the
//! orientation negates the value, so storing one orientation suffices. A
//! cochain is harmonic when the oriented sum at every vertex vanishes
//! mod n: a loop contributes once with each sign and hence nothing, and
//! open branches impose no constraint at all.
//!
//! The harmonic group is the kernel of the integer vertex-incidence
//! matrix mod n. One integer Smith normal form serves every modulus: if
//! U·M·V = diag(d_1, d_2, ...) then the kernel mod n is generated by the
//! columns V·(n/g_i)·e_i with g_i = gcd(d_i, n) (d_i = 0 past the rank),
//! and the nontrivial g_i are the invariant factors.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CochainError {
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("duplicate edge name {0}")]
    DuplicateEdge(String),
    #[error("cochain moduli differ: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("cochain is not harmonic")]
    NotHarmonic,
}

/// Edge endpoints in the reference orientation; None is an open branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeEnds {
    pub from: Option<String>,
    pub to: Option<String>,
}

impl EdgeEnds {
    pub fn is_open(&self) -> bool {
        self.from.is_none() || self.to.is_none()
    }

    pub fn is_loop(&self) -> bool {
        match (&self.from, &self.to) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiGraph {
    vertices: BTreeSet<String>,
    edges: BTreeMap<String, EdgeEnds>,
}

impl SemiGraph {
    pub fn new(
        vertices: impl IntoIterator<Item = String>,
        edges: impl IntoIterator<Item = (String, Option<String>, Option<String>)>,
    ) -> Result<Self, CochainError> {
        let vertices: BTreeSet<String> = vertices.into_iter().collect();
        let mut map = BTreeMap::new();
        for (name, from, to) in edges {
            for v in [&from, &to].into_iter().flatten() {
                if !vertices.contains(v) {
                    return Err(CochainError::UnknownVertex(v.clone()));
                }
            }
            if map.insert(name.clone(), EdgeEnds { from, to }).is_some() {
                return Err(CochainError::DuplicateEdge(name));
            }
        }
        Ok(SemiGraph { vertices, edges: map })
    }

    pub fn vertices(&self) -> &BTreeSet<String> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeMap<String, EdgeEnds> {
        &self.edges
    }

    pub fn edge(&self, name: &str) -> Result<&EdgeEnds, CochainError> {
        self.edges.get(name).ok_or_else(|| CochainError::UnknownEdge(name.to_string()))
    }

    /// Drop every edge with an open branch; vertices are kept.
    pub fn truncate(&self) -> SemiGraph {
        SemiGraph {
            vertices: self.vertices.clone(),
            edges: self.edges.iter().filter(|(_, e)| !e.is_open()).map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }

    /// True iff removing the edge (keeping its endpoints) disconnects its
    /// component. Edges with an open branch or loops never disconnect.
    pub fn is_bridge(&self, name: &str) -> Result<bool, CochainError> {
        let e = self.edge(name)?;
        let (Some(a), Some(b)) = (&e.from, &e.to) else { return Ok(false) };
        if a == b {
            return Ok(false);
        }
        // BFS from a avoiding the edge; bridge iff b becomes unreachable
        let mut seen: BTreeSet<&str> = BTreeSet::from([a.as_str()]);
        let mut queue = VecDeque::from([a.as_str()]);
        while let Some(v) = queue.pop_front() {
            for (en, ends) in &self.edges {
                if en == name {
                    continue;
                }
                if let (Some(x), Some(y)) = (&ends.from, &ends.to) {
                    for (s, t) in [(x, y), (y, x)] {
                        if s == v && seen.insert(t) {
                            queue.push_back(t);
                        }
                    }
                }
            }
        }
        Ok(!seen.contains(b.as_str()))
    }
}

/// Edge labels mod n in the reference orientation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cochain {
    n: u64,
    values: BTreeMap<String, i64>,
}

impl Cochain {
    pub fn new(n: u64, values: BTreeMap<String, i64>) -> Self {
        assert!(n >= 2, "modulus must be at least 2");
        let values = values.into_iter().map(|(k, v)| (k, v.rem_euclid(n as i64))).collect();
        Cochain { n, values }
    }

    pub fn zero(n: u64, g: &SemiGraph) -> Self {
        Self::new(n, g.edges.keys().map(|k| (k.clone(), 0)).collect())
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn values(&self) -> &BTreeMap<String, i64> {
        &self.values
    }

    pub fn value(&self, edge: &str) -> Result<i64, CochainError> {
        self.values.get(edge).copied().ok_or_else(|| CochainError::UnknownEdge(edge.to_string()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|&v| v == 0)
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain, CochainError> {
        if self.n != other.n {
            return Err(CochainError::ModulusMismatch { left: self.n, right: other.n });
        }
        let mut values = self.values.clone();
        for (k, v) in &other.values {
            *values.entry(k.clone()).or_insert(0) += v;
        }
        Ok(Cochain::new(self.n, values))
    }

    pub fn scale(&self, k: i64) -> Cochain {
        Cochain::new(self.n, self.values.iter().map(|(e, v)| (e.clone(), v * k)).collect())
    }
}

/// Oriented vertex sums; loops cancel themselves, open branches add nothing.
fn vertex_sums(g: &SemiGraph, c: &Cochain) -> Result<BTreeMap<String, i64>, CochainError> {
    let mut sums: BTreeMap<String, i64> = g.vertices.iter().map(|v| (v.clone(), 0)).collect();
    for (name, ends) in &g.edges {
        let val = c.value(name)?;
        if let Some(t) = &ends.to {
            *sums.get_mut(t).expect("endpoint vertex") += val;
        }
        if let Some(f) = &ends.from {
            *sums.get_mut(f).expect("endpoint vertex") -= val;
        }
    }
    Ok(sums)
}

pub fn is_harmonic(g: &SemiGraph, c: &Cochain) -> Result<bool, CochainError> {
    let n = c.n() as i64;
    Ok(vertex_sums(g, c)?.values().all(|s| s.rem_euclid(n) == 0))
}

/// The harmonic group as invariant factors plus matching generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmStructure {
    pub invariant_factors: Vec<u64>,
    pub generators: Vec<Cochain>,
}

impl HarmStructure {
    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Every element, by ranging each generator over its factor's order.
    /// Guarded for small groups only.
    pub fn elements(&self, g: &SemiGraph, n: u64) -> Vec<Cochain> {
        let size: u64 = self.invariant_factors.iter().product();
        assert!(size <= 1 << 16, "group too large to enumerate");
        let mut out = vec![Cochain::zero(n, g)];
        for (gen, &ord) in self.generators.iter().zip(&self.invariant_factors) {
            let mut next = Vec::with_capacity(out.len() * ord as usize);
            for base in &out {
                for k in 0..ord as i64 {
                    next.push(base.add(&gen.scale(k)).expect("same modulus"));
                }
            }
            out = next;
        }
        out.sort();
        out.dedup();
        out
    }
}

#[allow(clippy::needless_range_loop)] // i walks columns of v and a possibly shorter diag
pub fn harm_group(g: &SemiGraph, n: u64) -> HarmStructure {
    assert!(n >= 2, "modulus must be at least 2");
    let edge_names: Vec<&String> = g.edges.keys().collect();
    let verts: Vec<&String> = g.vertices.iter().collect();
    let vidx: BTreeMap<&str, usize> = verts.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    let mut m = vec![vec![0i128; edge_names.len()]; verts.len()];
    for (j, name) in edge_names.iter().enumerate() {
        let ends = &g.edges[*name];
        if let Some(t) = &ends.to {
            m[vidx[t.as_str()]][j] += 1;
        }
        if let Some(f) = &ends.from {
            m[vidx[f.as_str()]][j] -= 1;
        }
    }
    let (diag, v) = smith_normal_form(m, edge_names.len());
    let mut invariant_factors = Vec::new();
    let mut generators = Vec::new();
    for i in 0..edge_names.len() {
        let d = diag.get(i).copied().unwrap_or(0);
        let gi = gcd(d.unsigned_abs() as u64, n);
        if gi <= 1 {
            continue;
        }
        let mult = (n / gi) as i128;
        let values = edge_names
            .iter()
            .enumerate()
            .map(|(r, name)| {
                let entry = (v[r][i] * mult).rem_euclid(n as i128);
                ((*name).clone(), entry as i64)
            })
            .collect();
        invariant_factors.push(gi);
        generators.push(Cochain::new(n, values));
    }
    for c in &generators {
        debug_assert_eq!(is_harmonic(g, c), Ok(true));
    }
    HarmStructure { invariant_factors, generators }
}

/// True iff some harmonic cochain of the truncated graph is nonzero at e.
pub fn eval_surjective(g: &SemiGraph, n: u64, edge: &str) -> Result<bool, CochainError> {
    let tg = g.truncate();
    tg.edge(edge)?;
    let hs = harm_group(&tg, n);
    Ok(hs.generators.iter().any(|c| c.value(edge) != Ok(0)))
}

/// Reduce per-edge degrees mod n and report harmonicity.
pub fn theta_assemble(
    g: &SemiGraph,
    degrees: &BTreeMap<String, i64>,
    n: u64,
) -> Result<(Cochain, bool), CochainError> {
    for name in degrees.keys() {
        g.edge(name)?;
    }
    let mut values = BTreeMap::new();
    for name in g.edges.keys() {
        let d = degrees.get(name).copied().ok_or_else(|| CochainError::UnknownEdge(name.clone()))?;
        values.insert(name.clone(), d);
    }
    let c = Cochain::new(n, values);
    let harmonic = is_harmonic(g, &c)?;
    Ok((c, harmonic))
}

/// Extend a harmonic cochain of truncate(G) by zero over the open edges.
pub fn extend_zero(c: &Cochain, g: &SemiGraph) -> Result<Cochain, CochainError> {
    let tg = g.truncate();
    if !is_harmonic(&tg, c)? {
        return Err(CochainError::NotHarmonic);
    }
    let mut values = c.values().clone();
    for (name, ends) in g.edges() {
        if ends.is_open() {
            values.insert(name.clone(), 0);
        }
    }
    Ok(Cochain::new(c.n(), values))
}

/// Reference enumeration of every harmonic cochain: all n^{edges}
/// assignments, filtered. Only for small graphs.
pub fn enumerate_harmonic(g: &SemiGraph, n: u64) -> Vec<Cochain> {
    let names: Vec<&String> = g.edges.keys().collect();
    assert!(
        (n as f64).powi(names.len() as i32) <= 2e6,
        "enumeration space too large"
    );
    let mut out = Vec::new();
    let total = n.pow(names.len() as u32);
    for mut code in 0..total {
        let mut values = BTreeMap::new();
        for name in &names {
            values.insert((*name).clone(), (code % n) as i64);
            code /= n;
        }
        let c = Cochain::new(n, values);
        if is_harmonic(g, &c).expect("total by construction") {
            out.push(c);
        }
    }
    out.sort();
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Smith normal form of an integer matrix, returning the diagonal and the
/// column transform V with U·M·V diagonal. Row operations are not
/// tracked: kernel extraction only needs V.
#[allow(clippy::needless_range_loop)] // row ops touch two rows of one matrix
fn smith_normal_form(mut a: Vec<Vec<i128>>, cols: usize) -> (Vec<i128>, Vec<Vec<i128>>) {
    let rows = a.len();
    let mut v: Vec<Vec<i128>> = (0..cols).map(|i| (0..cols).map(|j| i128::from(i == j)).collect()).collect();
    let dim = rows.min(cols);
    let mut t = 0;
    while t < dim {
        // smallest-magnitude nonzero pivot in the trailing submatrix
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && pivot.is_none_or(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        swap_cols(&mut a, &mut v, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                let q = a[i][t].div_euclid(a[t][t]);
                if q != 0 {
                    for j in 0..cols {
                        a[i][j] -= q * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    // remainder is strictly smaller: promote it to pivot
                    a.swap(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let q = a[t][j].div_euclid(a[t][t]);
                if q != 0 {
                    for row in a.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    for row in v.iter_mut() {
                        row[j] -= q * row[t];
                    }
                }
                if a[t][j] != 0 {
                    swap_cols(&mut a, &mut v, t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility fix-up: pivot must divide the rest
            let mut fixed = true;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if a[i][j] % a[t][t] != 0 {
                        for jj in 0..cols {
                            a[t][jj] += a[i][jj];
                        }
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if a[t][t] < 0 {
            for row in a.iter_mut() {
                row[t] = -row[t];
            }
            for row in v.iter_mut() {
                row[t] = -row[t];
            }
        }
        t += 1;
    }
    let diag: Vec<i128> = (0..dim).map(|i| a[i][i]).collect();
    for w in diag.windows(2) {
        debug_assert!(w[0] == 0 || (w[1] % w[0] == 0), "invariant factor chain");
    }
    (diag, v)
}

fn swap_cols(a: &mut [Vec<i128>], v: &mut [Vec<i128>], x: usize, y: usize) {
    if x == y {
        return;
    }
    for row in a.iter_mut() {
        row.swap(x, y);
    }
    for row in v.iter_mut() {
        row.swap(x, y);
    }
}
