//! The curve system Γ(p,q) on Σ(p,q) with q = 2k, k odd.
//!
//! A curve is the boundary of the subsurface spanned by two adjacent upper
//! vertices `u, u+1` and a k-subset of the 2k lower vertices. Curves are
//! ordered by `u`, then by the lower set in colexicographic order, so the
//! system splits into `p − 1` contiguous blocks of C(2k,k) curves each.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_integer::binomial;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surface::{BoundaryWalk, Edge, InducedSubgraph, RibbonGraph, Vertex};

/// Largest system `enumerate_system` will materialize.
pub const MAX_CURVES: u64 = 1 << 24;

/// Largest k representable by a [`LowerSet`] (2k lower vertices in 64 bits).
pub const MAX_K: u64 = 31;

/// A set of lower vertices stored as a bitmask. For sets of equal size the
/// integer order of the masks is colexicographic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<u32>", try_from = "Vec<u32>")]
pub struct LowerSet(u64);

impl LowerSet {
    pub fn from_bits(bits: u64) -> Self {
        LowerSet(bits)
    }

    pub fn from_slice(vertices: &[u32]) -> Result<Self> {
        let mut bits = 0u64;
        for &v in vertices {
            if v >= 64 {
                return Err(Error::InvalidCurve(format!("lower vertex {v} out of range")));
            }
            if bits & (1 << v) != 0 {
                return Err(Error::InvalidCurve(format!("lower vertex {v} repeated")));
            }
            bits |= 1 << v;
        }
        Ok(LowerSet(bits))
    }

    pub fn bits(&self) -> u64 {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, l: usize) -> bool {
        l < 64 && self.0 & (1 << l) != 0
    }

    /// Elements in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let l = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(l)
            }
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Rank among k-subsets in colexicographic order (combinatorial number
    /// system).
    pub fn colex_rank(&self) -> u64 {
        self.iter()
            .enumerate()
            .map(|(i, c)| binomial(c as u64, i as u64 + 1))
            .sum()
    }
}

impl From<LowerSet> for Vec<u32> {
    fn from(s: LowerSet) -> Self {
        s.iter().map(|l| l as u32).collect()
    }
}

impl TryFrom<Vec<u32>> for LowerSet {
    type Error = Error;

    fn try_from(v: Vec<u32>) -> Result<Self> {
        LowerSet::from_slice(&v)
    }
}

/// Next k-subset in colex order (Gosper's hack).
fn next_subset(x: u64) -> u64 {
    let c = x & x.wrapping_neg();
    let r = x + c;
    (((r ^ x) >> 2) / c) | r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CurveId {
    /// The curve uses upper vertices `u` and `u + 1`.
    pub u: u32,
    pub lower_set: LowerSet,
}

impl CurveId {
    pub fn new(u: usize, lowers: &[u32]) -> Result<Self> {
        Ok(CurveId {
            u: u as u32,
            lower_set: LowerSet::from_slice(lowers)?,
        })
    }

    pub fn uppers(&self) -> [usize; 2] {
        [self.u as usize, self.u as usize + 1]
    }

    pub fn k(&self) -> usize {
        self.lower_set.len()
    }
}

/// Parses `u:l0,l1,…`, e.g. `0:0,1,2`.
impl FromStr for CurveId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad curve id {s:?}, expected u:l0,l1,..."));
        let (u, lowers) = s.trim().split_once(':').ok_or_else(bad)?;
        let u: usize = u.trim().parse().map_err(|_| bad())?;
        let lowers = lowers
            .split(',')
            .map(|l| l.trim().parse::<u32>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        CurveId::new(u, &lowers)
    }
}

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(u={}, {{", self.u)?;
        for (i, l) in self.lower_set.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSystem {
    pub p: usize,
    pub k: usize,
    pub curves: Vec<CurveId>,
}

impl CurveSystem {
    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn q(&self) -> usize {
        2 * self.k
    }

    /// C(2k,k): curves per upper pair.
    pub fn block_size(&self) -> usize {
        binomial(2 * self.k as u64, self.k as u64) as usize
    }

    pub fn index_of(&self, id: &CurveId) -> Option<usize> {
        if id.u as usize + 1 >= self.p
            || id.k() != self.k
            || id.lower_set.bits() >> self.q() != 0
        {
            return None;
        }
        Some(id.u as usize * self.block_size() + id.lower_set.colex_rank() as usize)
    }
}

/// m(p,q) = (p−1)·C(2k,k).
pub fn system_size(p: u64, k: u64) -> u128 {
    (p as u128 - 1) * binomial(2 * k as u128, k as u128)
}

fn check_k(k: u64) -> Result<()> {
    if k == 0 || k.is_multiple_of(2) {
        return Err(Error::EvenOrZeroK(k));
    }
    if k > MAX_K {
        return Err(Error::TooLarge(format!("k={k} exceeds {MAX_K}")));
    }
    Ok(())
}

pub fn enumerate_system(p: usize, k: usize) -> Result<CurveSystem> {
    if p < 2 {
        return Err(Error::InvalidParameter(format!("curve system needs p >= 2, got {p}")));
    }
    check_k(k as u64)?;
    let count = system_size(p as u64, k as u64);
    if count > MAX_CURVES as u128 {
        return Err(Error::TooLarge(format!("{count} curves exceeds {MAX_CURVES}")));
    }
    let q = 2 * k;
    let mut block = Vec::with_capacity(binomial(q, k));
    let mut x: u64 = (1u64 << k) - 1;
    while x >> q == 0 {
        block.push(LowerSet(x));
        x = next_subset(x);
    }
    let curves = (0..p - 1)
        .flat_map(|u| {
            block.iter().map(move |&lower_set| CurveId {
                u: u as u32,
                lower_set,
            })
        })
        .collect();
    Ok(CurveSystem { p, k, curves })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveWalk {
    pub id: CurveId,
    pub walk: BoundaryWalk,
}

/// Traversal count of each edge by a walk.
pub fn edge_traversals(walk: &BoundaryWalk) -> BTreeMap<Edge, usize> {
    let mut counts = BTreeMap::new();
    for s in &walk.steps {
        *counts.entry(s.edge).or_insert(0) += 1;
    }
    counts
}

/// Traces the boundary of the sub-ribbon-graph spanned by the curve's
/// vertices in `g`.
pub fn realize_curve(g: &RibbonGraph, id: &CurveId) -> Result<CurveWalk> {
    let k = id.k();
    check_k(k as u64)?;
    if g.q() != 2 * k {
        return Err(Error::InvalidCurve(format!(
            "{id} has k={k} but the surface has q={}",
            g.q()
        )));
    }
    if id.u as usize + 1 >= g.p() {
        return Err(Error::InvalidCurve(format!("{id} needs upper vertex {} < p={}", id.u + 1, g.p())));
    }
    if id.lower_set.bits() >> g.q() != 0 {
        return Err(Error::InvalidCurve(format!("{id} has a lower vertex >= q={}", g.q())));
    }
    let sub = InducedSubgraph::new(g, &id.uppers(), &id.lower_set.to_vec())?;
    let mut walks = sub.trace();
    if walks.len() != 1 {
        return Err(Error::DisconnectedCurve(walks.len()));
    }
    let walk = walks.pop().unwrap();
    let counts = edge_traversals(&walk);
    if counts.len() != 2 * k || counts.values().any(|&c| c != 2) {
        return Err(Error::InvalidCurve(format!("{id} does not traverse each sub-edge twice")));
    }
    Ok(CurveWalk { id: *id, walk })
}

/// A vertex in the defining set of exactly one of two curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Distinguisher {
    pub vertex: Vertex,
    /// True when the vertex belongs to the first curve.
    pub in_first: bool,
}

/// Upper differences are preferred over lower ones, smaller indices first,
/// and a vertex of `a` over one of `b`.
pub fn distinguishing_vertex(a: &CurveId, b: &CurveId) -> Result<Distinguisher> {
    if a == b {
        return Err(Error::IdenticalCurves);
    }
    let (ua, ub) = (a.uppers(), b.uppers());
    for (first, mine, theirs) in [(true, ua, ub), (false, ub, ua)] {
        if let Some(&u) = mine.iter().find(|u| !theirs.contains(u)) {
            return Ok(Distinguisher {
                vertex: Vertex::Upper(u),
                in_first: first,
            });
        }
    }
    for (first, mine, theirs) in [(true, a.lower_set, b.lower_set), (false, b.lower_set, a.lower_set)] {
        let only = mine.bits() & !theirs.bits();
        if only != 0 {
            return Ok(Distinguisher {
                vertex: Vertex::Lower(only.trailing_zeros() as usize),
                in_first: first,
            });
        }
    }
    unreachable!("distinct curves differ in some defining vertex")
}

/// Mod-2 homology class vanishes: every edge is traversed an even number of
/// times.
pub fn is_null_homologous(walk: &BoundaryWalk) -> bool {
    edge_traversals(walk).values().all(|c| c % 2 == 0)
}

#[derive(Serialize)]
struct CurveRow {
    index: usize,
    u: u32,
    lower_set: String,
}

/// CSV with columns `index,u,lower_set`; the lower set is space separated.
pub fn write_curves_csv<W: Write>(system: &CurveSystem, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for (index, c) in system.curves.iter().enumerate() {
        let lower_set = c
            .lower_set
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        w.serialize(CurveRow {
            index,
            u: c.u,
            lower_set,
        })
        .map_err(|e| Error::Output(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Output(e.to_string()))?;
    Ok(())
}
