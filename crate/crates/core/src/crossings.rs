//! Certified crossing upper bounds for pairs of curves in Γ(p,q).
//!
//! Curves whose upper pairs are disjoint can be made disjoint. Curves that
//! share one upper vertex cross at most 2k times there, and curves sharing
//! both upper vertices at most 4k times. Crossings at lower vertices are
//! removable and never counted.

use std::io::Write;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bounds::exact::ser_big;
use crate::curves::{CurveId, CurveSystem, CurveWalk};
use crate::error::{Error, Result};
use crate::surface::{Direction, RibbonGraph, Side};

/// |{u_a, u_a+1} ∩ {u_b, u_b+1}|.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OverlapClass(u8);

impl OverlapClass {
    pub fn value(&self) -> u8 {
        self.0
    }
}

pub fn upper_overlap(a: &CurveId, b: &CurveId) -> OverlapClass {
    match a.u.abs_diff(b.u) {
        0 => OverlapClass(2),
        1 => OverlapClass(1),
        _ => OverlapClass(0),
    }
}

/// 0, 2k or 4k according to the upper overlap.
pub fn coarse_pair_bound(a: &CurveId, b: &CurveId, k: u64) -> u64 {
    2 * k * upper_overlap(a, b).value() as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CrossingEntry {
    pub i: u32,
    pub j: u32,
    pub bound: u64,
}

/// Symmetric non-negative pair bounds, stored once per unordered pair with
/// `i < j`. Absent pairs are zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseCrossingMatrix {
    n: usize,
    entries: Vec<CrossingEntry>,
}

impl SparseCrossingMatrix {
    /// Zero bounds are dropped; self-pairs, out-of-range indices and repeated
    /// pairs are rejected.
    pub fn from_entries<I>(n: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, u64)>,
    {
        if n > u32::MAX as usize {
            return Err(Error::TooLarge(format!("{n} curves")));
        }
        let mut out = Vec::new();
        for (i, j, bound) in entries {
            if i == j || i >= n || j >= n {
                return Err(Error::InvalidParameter(format!("bad pair ({i}, {j}) for n={n}")));
            }
            if bound == 0 {
                continue;
            }
            let (i, j) = if i < j { (i, j) } else { (j, i) };
            out.push(CrossingEntry {
                i: i as u32,
                j: j as u32,
                bound,
            });
        }
        out.sort_unstable();
        if out.windows(2).any(|w| (w[0].i, w[0].j) == (w[1].i, w[1].j)) {
            return Err(Error::InvalidParameter("repeated pair".into()));
        }
        Ok(SparseCrossingMatrix { n, entries: out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[CrossingEntry] {
        &self.entries
    }

    pub fn nonzero_pairs(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        let (i, j) = if i < j { (i as u32, j as u32) } else { (j as u32, i as u32) };
        self.entries
            .binary_search_by(|e| (e.i, e.j).cmp(&(i, j)))
            .map(|idx| self.entries[idx].bound)
            .unwrap_or(0)
    }

    pub fn total(&self) -> u128 {
        self.entries.iter().map(|e| e.bound as u128).sum()
    }

    pub fn row_sums(&self) -> Vec<u128> {
        let mut sums = vec![0u128; self.n];
        for e in &self.entries {
            sums[e.i as usize] += e.bound as u128;
            sums[e.j as usize] += e.bound as u128;
        }
        sums
    }

    /// Neighbour lists `(index, bound)` in increasing index order.
    pub fn adjacency(&self) -> Vec<Vec<(usize, u64)>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.entries {
            adj[e.i as usize].push((e.j as usize, e.bound));
            adj[e.j as usize].push((e.i as usize, e.bound));
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        adj
    }
}

/// Overlapping pairs of a system in increasing `(i, j)` order, generated
/// block by block: pairs inside a `u`-block, then pairs against block `u+1`.
pub fn coarse_pairs(s: &CurveSystem) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
    let block = s.block_size();
    let k = s.k as u64;
    (0..s.len()).flat_map(move |i| {
        let u = i / block;
        let same = (i + 1)..((u + 1) * block);
        let next = if u + 2 < s.p {
            ((u + 1) * block)..((u + 2) * block)
        } else {
            0..0
        };
        same.map(move |j| (i, j, 4 * k))
            .chain(next.map(move |j| (i, j, 2 * k)))
    })
}

pub fn coarse_matrix(s: &CurveSystem) -> SparseCrossingMatrix {
    let entries = coarse_pairs(s)
        .map(|(i, j, bound)| CrossingEntry {
            i: i as u32,
            j: j as u32,
            bound,
        })
        .collect();
    SparseCrossingMatrix { n: s.len(), entries }
}

pub fn total_coarse(s: &CurveSystem) -> BigUint {
    let total: u128 = coarse_pairs(s).map(|(_, _, b)| b as u128).sum();
    BigUint::from(total)
}

/// 4k·m(p,q)²/(p−1).
pub fn coarse_total_bound(s: &CurveSystem) -> BigRational {
    let m = BigUint::from(s.len());
    let num = BigUint::from(4 * s.k) * &m * &m;
    BigRational::new(num.into(), BigUint::from(s.p - 1).into())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoarseTotal {
    pub curves: usize,
    pub nonzero_pairs: usize,
    #[serde(serialize_with = "ser_big")]
    pub total: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub bound_numer: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub bound_denom: BigUint,
    pub within_bound: bool,
}

pub fn coarse_summary(s: &CurveSystem) -> CoarseTotal {
    let total = total_coarse(s);
    let bound = coarse_total_bound(s);
    let within_bound = BigRational::from_integer(total.clone().into()) <= bound;
    CoarseTotal {
        curves: s.len(),
        nonzero_pairs: coarse_pairs(s).count(),
        total,
        bound_numer: bound.numer().to_biguint().unwrap_or_default(),
        bound_denom: bound.denom().to_biguint().unwrap_or_default(),
        within_bound,
    }
}

/// CSV with columns `i,j,bound`.
pub fn write_matrix_csv<W: Write>(mat: &SparseCrossingMatrix, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for e in &mat.entries {
        w.serialize(e).map_err(|e| Error::Output(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Output(e.to_string()))?;
    Ok(())
}

/// Parallel lanes of two curves along shared ribbons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaneAssignment {
    pub a: u32,
    pub b: u32,
}

impl LaneAssignment {
    /// The curve with the smaller system index takes lane 0.
    pub fn canonical(a_index: usize, b_index: usize) -> Self {
        if a_index <= b_index {
            LaneAssignment { a: 0, b: 1 }
        } else {
            LaneAssignment { a: 1, b: 0 }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Port {
    /// Position of the ribbon in the rotation at the vertex.
    pub position: u32,
    pub side: Side,
    pub lane: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chord {
    /// 0 for the first curve, 1 for the second.
    pub curve: u8,
    /// Port indices, `from < to`.
    pub from: usize,
    pub to: usize,
}

/// Passages of two curves through the disc of an upper vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChordDiagram {
    pub vertex: usize,
    pub ports: Vec<Port>,
    pub chords: Vec<Chord>,
}

fn interleaved(x: &Chord, y: &Chord) -> bool {
    (x.from < y.from && y.from < x.to && x.to < y.to) || (y.from < x.from && x.from < y.to && y.to < x.to)
}

impl ChordDiagram {
    /// Interleaving pairs between the two curves' chords.
    pub fn crossings(&self) -> u64 {
        let (a, b): (Vec<&Chord>, Vec<&Chord>) = self.chords.iter().partition(|c| c.curve == 0);
        a.iter()
            .map(|x| b.iter().filter(|y| interleaved(x, y)).count() as u64)
            .sum()
    }
}

fn passages(g: &RibbonGraph, w: &CurveWalk, v: usize, lane: u32) -> Vec<(Port, Port)> {
    let steps = &w.walk.steps;
    let n = steps.len();
    (0..n)
        .filter_map(|i| {
            let (arrive, leave) = (&steps[i], &steps[(i + 1) % n]);
            if arrive.direction != Direction::Up || arrive.edge.upper as usize != v {
                return None;
            }
            debug_assert_eq!(leave.direction, Direction::Down);
            let from = Port {
                position: g.position_at_upper(v, arrive.edge.lower as usize) as u32,
                side: arrive.side,
                lane,
            };
            let to = Port {
                position: g.position_at_upper(v, leave.edge.lower as usize) as u32,
                side: leave.side,
                lane,
            };
            Some((from, to))
        })
        .collect()
}

pub fn chord_diagram(
    g: &RibbonGraph,
    a: &CurveWalk,
    b: &CurveWalk,
    v: usize,
    lanes: LaneAssignment,
) -> Result<ChordDiagram> {
    if a.id == b.id {
        return Err(Error::IdenticalCurves);
    }
    if !a.id.uppers().contains(&v) || !b.id.uppers().contains(&v) {
        return Err(Error::VertexNotShared(v));
    }
    if lanes.a == lanes.b {
        return Err(Error::InvalidParameter("curves need distinct lanes".into()));
    }
    let pa = passages(g, a, v, lanes.a);
    let pb = passages(g, b, v, lanes.b);
    let mut ports: Vec<Port> = pa
        .iter()
        .chain(pb.iter())
        .flat_map(|&(x, y)| [x, y])
        .collect();
    ports.sort_unstable();
    let before = ports.len();
    ports.dedup();
    if ports.len() != before {
        return Err(Error::InvalidParameter(format!("port used twice at vertex {v}")));
    }
    let index = |p: &Port| ports.binary_search(p).expect("port registered");
    let chords = pa
        .iter()
        .map(|pair| (0u8, pair))
        .chain(pb.iter().map(|pair| (1u8, pair)))
        .map(|(curve, (x, y))| {
            let (s, t) = (index(x), index(y));
            Chord {
                curve,
                from: s.min(t),
                to: s.max(t),
            }
        })
        .collect();
    Ok(ChordDiagram {
        vertex: v,
        ports,
        chords,
    })
}

pub fn chord_crossings_at_vertex(
    g: &RibbonGraph,
    a: &CurveWalk,
    b: &CurveWalk,
    v: usize,
    lanes: LaneAssignment,
) -> Result<u64> {
    Ok(chord_diagram(g, a, b, v, lanes)?.crossings())
}

/// Chord crossings summed over the shared upper vertices of a pair.
pub fn chord_crossings_for_pair(
    g: &RibbonGraph,
    a: &CurveWalk,
    b: &CurveWalk,
    lanes: LaneAssignment,
) -> Result<Vec<(usize, u64)>> {
    a.id.uppers()
        .into_iter()
        .filter(|v| b.id.uppers().contains(v))
        .map(|v| Ok((v, chord_crossings_at_vertex(g, a, b, v, lanes)?)))
        .collect()
}

/// Exact ratio total/bound as an f64, for reporting only.
pub fn ratio_f64(total: &BigUint, bound: &BigRational) -> f64 {
    if bound.is_zero() {
        return 0.0;
    }
    let t = BigRational::from_integer(total.clone().into());
    (t / bound).to_f64().unwrap_or(f64::NAN)
}
