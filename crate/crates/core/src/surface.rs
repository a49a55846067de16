//! The fibre surface Σ(p,q) as a ribbon graph over K_{p,q}.
//!
//! Upper vertices `0..p` sit on one line, lower vertices `0..q` on the other,
//! and every pair `(u, l)` is joined by a ribbon. The default rotation system
//! orders the ribbons at an upper vertex by lower index and at a lower vertex
//! by upper index. Boundary circles are found by face tracing: a walk that
//! arrives at a vertex along an edge leaves along the rotation successor of
//! that edge.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of ribbons a surface may have.
pub const MAX_EDGES: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub upper: u32,
    pub lower: u32,
}

impl Edge {
    pub fn new(upper: usize, lower: usize) -> Self {
        Edge {
            upper: upper as u32,
            lower: lower as u32,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// From the upper vertex to the lower vertex.
    Down,
    Up,
}

/// Side of a ribbon. A boundary walk running down a ribbon follows its left
/// side and a walk running up follows its right side; around an upper vertex
/// the sides of ribbon `l` appear as left then right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Vertex {
    Upper(usize),
    Lower(usize),
}

/// One directed edge-side of a boundary walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Step {
    pub edge: Edge,
    pub side: Side,
    pub direction: Direction,
}

impl Step {
    pub fn along(edge: Edge, direction: Direction) -> Self {
        let side = match direction {
            Direction::Down => Side::Left,
            Direction::Up => Side::Right,
        };
        Step {
            edge,
            side,
            direction,
        }
    }

    pub fn tail(&self) -> Vertex {
        match self.direction {
            Direction::Down => Vertex::Upper(self.edge.upper as usize),
            Direction::Up => Vertex::Lower(self.edge.lower as usize),
        }
    }

    pub fn head(&self) -> Vertex {
        match self.direction {
            Direction::Down => Vertex::Lower(self.edge.lower as usize),
            Direction::Up => Vertex::Upper(self.edge.upper as usize),
        }
    }
}

/// A closed cyclic sequence of directed edge-sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryWalk {
    pub steps: Vec<Step>,
}

impl BoundaryWalk {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// True when consecutive steps meet head to tail (cyclically) and no
    /// directed edge-side repeats.
    pub fn is_closed_simple(&self) -> bool {
        if self.steps.is_empty() {
            return false;
        }
        let n = self.steps.len();
        let closes = (0..n).all(|i| self.steps[i].head() == self.steps[(i + 1) % n].tail());
        let mut seen: Vec<Step> = self.steps.clone();
        seen.sort_unstable();
        seen.dedup();
        closes && seen.len() == n
    }
}

/// K_{p,q} together with a rotation system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RibbonGraph {
    p: usize,
    q: usize,
    upper_rot: Vec<Vec<u32>>,
    lower_rot: Vec<Vec<u32>>,
    upper_pos: Vec<Vec<u32>>,
    lower_pos: Vec<Vec<u32>>,
}

fn check_size(p: usize, q: usize) -> Result<()> {
    if p == 0 || q == 0 {
        return Err(Error::InvalidParameter(format!(
            "surface needs p >= 1 and q >= 1, got p={p}, q={q}"
        )));
    }
    match p.checked_mul(q) {
        Some(e) if e <= MAX_EDGES => Ok(()),
        _ => Err(Error::TooLarge(format!(
            "p*q exceeds {MAX_EDGES} ribbons (p={p}, q={q})"
        ))),
    }
}

fn inverse(order: &[u32], len: usize) -> Result<Vec<u32>> {
    if order.len() != len {
        return Err(Error::InvalidRotation(format!(
            "rotation has {} entries, expected {len}",
            order.len()
        )));
    }
    let mut pos = vec![u32::MAX; len];
    for (i, &x) in order.iter().enumerate() {
        let x = x as usize;
        if x >= len || pos[x] != u32::MAX {
            return Err(Error::InvalidRotation(format!(
                "entry {x} out of range or repeated"
            )));
        }
        pos[x] = i as u32;
    }
    Ok(pos)
}

/// Builds Σ(p,q) with the sorted rotation system.
pub fn build_surface(p: usize, q: usize) -> Result<RibbonGraph> {
    check_size(p, q)?;
    let upper_rot = (0..p).map(|_| (0..q as u32).collect()).collect();
    let lower_rot = (0..q).map(|_| (0..p as u32).collect()).collect();
    RibbonGraph::from_rotations(p, q, upper_rot, lower_rot)
}

impl RibbonGraph {
    /// Builds K_{p,q} with explicit cyclic orders: `upper_rot[u]` lists the
    /// lower endpoints around upper vertex `u`, `lower_rot[l]` the upper
    /// endpoints around lower vertex `l`.
    pub fn from_rotations(
        p: usize,
        q: usize,
        upper_rot: Vec<Vec<u32>>,
        lower_rot: Vec<Vec<u32>>,
    ) -> Result<Self> {
        check_size(p, q)?;
        if upper_rot.len() != p || lower_rot.len() != q {
            return Err(Error::InvalidRotation(
                "one rotation per vertex required".into(),
            ));
        }
        let upper_pos = upper_rot
            .iter()
            .map(|r| inverse(r, q))
            .collect::<Result<Vec<_>>>()?;
        let lower_pos = lower_rot
            .iter()
            .map(|r| inverse(r, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(RibbonGraph {
            p,
            q,
            upper_rot,
            lower_rot,
            upper_pos,
            lower_pos,
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn vertex_count(&self) -> usize {
        self.p + self.q
    }

    pub fn edge_count(&self) -> usize {
        self.p * self.q
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.p).flat_map(move |u| (0..self.q).map(move |l| Edge::new(u, l)))
    }

    /// Cyclic order of lower endpoints around upper vertex `u`.
    pub fn upper_rotation(&self, u: usize) -> &[u32] {
        &self.upper_rot[u]
    }

    /// Cyclic order of upper endpoints around lower vertex `l`.
    pub fn lower_rotation(&self, l: usize) -> &[u32] {
        &self.lower_rot[l]
    }

    /// Position of ribbon `(u, l)` in the rotation at upper vertex `u`.
    pub fn position_at_upper(&self, u: usize, l: usize) -> usize {
        self.upper_pos[u][l] as usize
    }

    pub fn position_at_lower(&self, l: usize, u: usize) -> usize {
        self.lower_pos[l][u] as usize
    }

    /// Euler characteristic V − E.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64
    }
}

/// The complete bipartite subgraph on a choice of upper and lower vertices,
/// carrying the restriction of the ambient rotation system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedSubgraph<'g> {
    graph: &'g RibbonGraph,
    uppers: Vec<usize>,
    lowers: Vec<usize>,
    upper_local: Vec<Option<u32>>,
    lower_local: Vec<Option<u32>>,
}

impl<'g> InducedSubgraph<'g> {
    pub fn new(graph: &'g RibbonGraph, uppers: &[usize], lowers: &[usize]) -> Result<Self> {
        let mut uppers = uppers.to_vec();
        let mut lowers = lowers.to_vec();
        uppers.sort_unstable();
        uppers.dedup();
        lowers.sort_unstable();
        lowers.dedup();
        if uppers.is_empty() || lowers.is_empty() {
            return Err(Error::InvalidParameter("empty vertex set".into()));
        }
        if *uppers.last().unwrap() >= graph.p || *lowers.last().unwrap() >= graph.q {
            return Err(Error::InvalidParameter("vertex out of range".into()));
        }
        let mut upper_local = vec![None; graph.p];
        for (i, &u) in uppers.iter().enumerate() {
            upper_local[u] = Some(i as u32);
        }
        let mut lower_local = vec![None; graph.q];
        for (i, &l) in lowers.iter().enumerate() {
            lower_local[l] = Some(i as u32);
        }
        Ok(InducedSubgraph {
            graph,
            uppers,
            lowers,
            upper_local,
            lower_local,
        })
    }

    pub fn whole(graph: &'g RibbonGraph) -> Self {
        let uppers: Vec<usize> = (0..graph.p).collect();
        let lowers: Vec<usize> = (0..graph.q).collect();
        InducedSubgraph {
            graph,
            upper_local: (0..graph.p).map(|i| Some(i as u32)).collect(),
            lower_local: (0..graph.q).map(|i| Some(i as u32)).collect(),
            uppers,
            lowers,
        }
    }

    pub fn uppers(&self) -> &[usize] {
        &self.uppers
    }

    pub fn lowers(&self) -> &[usize] {
        &self.lowers
    }

    fn next_lower_at(&self, u: usize, l: usize) -> usize {
        let rot = &self.graph.upper_rot[u];
        let mut i = self.graph.upper_pos[u][l] as usize;
        loop {
            i = (i + 1) % rot.len();
            let cand = rot[i] as usize;
            if self.lower_local[cand].is_some() {
                return cand;
            }
        }
    }

    fn next_upper_at(&self, l: usize, u: usize) -> usize {
        let rot = &self.graph.lower_rot[l];
        let mut i = self.graph.lower_pos[l][u] as usize;
        loop {
            i = (i + 1) % rot.len();
            let cand = rot[i] as usize;
            if self.upper_local[cand].is_some() {
                return cand;
            }
        }
    }

    /// The step that follows `step` on its boundary circle.
    pub fn successor(&self, step: &Step) -> Step {
        let (u, l) = (step.edge.upper as usize, step.edge.lower as usize);
        match step.direction {
            Direction::Down => Step::along(Edge::new(self.next_upper_at(l, u), l), Direction::Up),
            Direction::Up => Step::along(Edge::new(u, self.next_lower_at(u, l)), Direction::Down),
        }
    }

    fn dart_index(&self, step: &Step) -> usize {
        let i = self.upper_local[step.edge.upper as usize].expect("upper vertex present") as usize;
        let j = self.lower_local[step.edge.lower as usize].expect("lower vertex present") as usize;
        let dir = match step.direction {
            Direction::Down => 0,
            Direction::Up => 1,
        };
        (i * self.lowers.len() + j) * 2 + dir
    }

    /// Face tracing. Walks start at the smallest unvisited directed edge-side
    /// in (upper, lower, down-before-up) order.
    pub fn trace(&self) -> Vec<BoundaryWalk> {
        let darts = self.uppers.len() * self.lowers.len() * 2;
        let mut visited = vec![false; darts];
        let mut walks = Vec::new();
        for &u in &self.uppers {
            for &l in &self.lowers {
                for dir in [Direction::Down, Direction::Up] {
                    let start = Step::along(Edge::new(u, l), dir);
                    if visited[self.dart_index(&start)] {
                        continue;
                    }
                    let mut steps = Vec::new();
                    let mut cur = start;
                    loop {
                        visited[self.dart_index(&cur)] = true;
                        steps.push(cur);
                        cur = self.successor(&cur);
                        if cur == start {
                            break;
                        }
                    }
                    walks.push(BoundaryWalk { steps });
                }
            }
        }
        walks
    }
}

/// Boundary circles of the surface, one walk per component.
pub fn trace_boundary(g: &RibbonGraph) -> Vec<BoundaryWalk> {
    InducedSubgraph::whole(g).trace()
}

/// χ = p + q − pq.
pub fn euler_characteristic(g: &RibbonGraph) -> i64 {
    g.euler_characteristic()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceSummary {
    pub chi: i64,
    pub boundary_components: usize,
    pub genus: u64,
}

pub fn surface_summary(g: &RibbonGraph) -> Result<SurfaceSummary> {
    let chi = euler_characteristic(g);
    let b = trace_boundary(g).len();
    let twice_genus = 2 - chi - b as i64;
    if twice_genus % 2 != 0 || twice_genus < 0 {
        return Err(Error::GenusParity(twice_genus));
    }
    Ok(SurfaceSummary {
        chi,
        boundary_components: b,
        genus: (twice_genus / 2) as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_counts() {
        let g = build_surface(3, 4).unwrap();
        assert_eq!(g.edge_count(), 12);
        assert_eq!(g.vertex_count(), 7);
        let g = build_surface(2, 3).unwrap();
        assert_eq!((g.edge_count(), g.vertex_count()), (6, 5));
        let g = build_surface(1, 1).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(surface_summary(&g).unwrap().genus, 0);
        assert_eq!(trace_boundary(&g).len(), 1);
    }

    #[test]
    fn rejects_zero() {
        assert!(build_surface(0, 3).is_err());
        assert!(build_surface(3, 0).is_err());
    }

    #[test]
    fn rotation_must_be_permutation() {
        let bad = RibbonGraph::from_rotations(2, 2, vec![vec![0, 0], vec![0, 1]], vec![vec![0, 1]; 2]);
        assert!(bad.is_err());
    }

    #[test]
    fn trefoil_surface_trace() {
        let g = build_surface(2, 3).unwrap();
        let walks = trace_boundary(&g);
        assert_eq!(walks.len(), 1);
        assert_eq!(walks[0].len(), 12);
        assert!(walks[0].is_closed_simple());
        // first walk starts down (0,0), up to 1, down to lower 1
        assert_eq!(walks[0].steps[0], Step::along(Edge::new(0, 0), Direction::Down));
        assert_eq!(walks[0].steps[1], Step::along(Edge::new(1, 0), Direction::Up));
        assert_eq!(walks[0].steps[2], Step::along(Edge::new(1, 1), Direction::Down));
    }

    #[test]
    fn annulus_trace() {
        let g = build_surface(2, 2).unwrap();
        let walks = trace_boundary(&g);
        assert_eq!(walks.len(), 2);
        assert!(walks.iter().all(|w| w.len() == 4 && w.is_closed_simple()));
        assert_eq!(
            surface_summary(&g).unwrap(),
            SurfaceSummary { chi: 0, boundary_components: 2, genus: 0 }
        );
    }

    #[test]
    fn summaries() {
        let s = surface_summary(&build_surface(3, 4).unwrap()).unwrap();
        assert_eq!(s, SurfaceSummary { chi: -5, boundary_components: 1, genus: 3 });
        let s = surface_summary(&build_surface(2, 3).unwrap()).unwrap();
        assert_eq!(s, SurfaceSummary { chi: -1, boundary_components: 1, genus: 1 });
    }

    #[test]
    fn diagonal_surfaces_have_p_components() {
        for p in 1..=6 {
            let g = build_surface(p, p).unwrap();
            assert_eq!(trace_boundary(&g).len(), p);
        }
    }

    #[test]
    fn side_follows_direction() {
        let e = Edge::new(0, 1);
        assert_eq!(Step::along(e, Direction::Down).side, Side::Left);
        assert_eq!(Step::along(e, Direction::Up).side, Side::Right);
    }

    #[test]
    fn broken_rotation_changes_boundary() {
        // swapping two ribbons at one upper vertex of Σ(2,3)
        let g = RibbonGraph::from_rotations(
            2,
            3,
            vec![vec![1, 0, 2], vec![0, 1, 2]],
            vec![vec![0, 1]; 3],
        )
        .unwrap();
        assert_ne!(trace_boundary(&g).len(), 1);
    }
}
