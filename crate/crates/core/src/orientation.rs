//! Indegree-capped orientations of an edge subset by path flipping.
//!
//! Vertices with more incoming edges than their cap are heavy, those at the
//! cap are full, the rest are light. While a heavy vertex exists, a
//! breadth-first search runs backwards along directed edges from all heavy
//! vertices, through full vertices only, to the nearest light vertex; the
//! path found is then reversed. Each flip removes exactly one violation. When
//! the search finds no light vertex, the visited set `U` receives more edges
//! from inside `U` than its caps allow, so no valid orientation exists.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tanner_graph::{Side, TannerGraph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrientedEdgeSet {
    /// Global edge indices.
    pub edges: Vec<usize>,
    /// `toward_b[i]` is true when `edges[i]` points at its B endpoint.
    pub toward_b: Vec<bool>,
    pub cap_a: usize,
    pub cap_b: usize,
    /// Incoming edge count per graph vertex.
    pub indegree: Vec<usize>,
}

impl OrientedEdgeSet {
    /// All edges directed A to B.
    pub fn a_to_b(graph: &TannerGraph, edges: &[usize], cap_a: usize, cap_b: usize) -> Result<OrientedEdgeSet> {
        Self::with_directions(graph, edges, vec![true; edges.len()], cap_a, cap_b)
    }

    pub fn with_directions(
        graph: &TannerGraph,
        edges: &[usize],
        toward_b: Vec<bool>,
        cap_a: usize,
        cap_b: usize,
    ) -> Result<OrientedEdgeSet> {
        if toward_b.len() != edges.len() {
            return Err(Error::LengthMismatch { expected: edges.len(), got: toward_b.len() });
        }
        let mut seen = vec![false; graph.num_edges()];
        for &e in edges {
            if e >= graph.num_edges() {
                return Err(Error::InvalidGraph(format!("edge {e} out of range")));
            }
            if std::mem::replace(&mut seen[e], true) {
                return Err(Error::InvalidGraph(format!("edge {e} listed twice")));
            }
        }
        let mut o = OrientedEdgeSet {
            edges: edges.to_vec(),
            toward_b,
            cap_a,
            cap_b,
            indegree: vec![0; graph.num_vertices()],
        };
        o.indegree = o.recount(graph);
        Ok(o)
    }

    /// `(tail, head)` of the i-th edge.
    pub fn arc(&self, graph: &TannerGraph, i: usize) -> (usize, usize) {
        let (a, b) = graph.endpoints(self.edges[i]);
        if self.toward_b[i] { (a, b) } else { (b, a) }
    }

    /// Head vertex of global edge `e`, if `e` is in the set.
    pub fn head_of(&self, graph: &TannerGraph, e: usize) -> Option<usize> {
        self.edges.iter().position(|&x| x == e).map(|i| self.arc(graph, i).1)
    }

    pub fn cap(&self, graph: &TannerGraph, v: usize) -> usize {
        match graph.side(v) {
            Side::A => self.cap_a,
            Side::B => self.cap_b,
        }
    }

    pub fn violations(&self, graph: &TannerGraph) -> usize {
        (0..graph.num_vertices()).map(|v| self.indegree[v].saturating_sub(self.cap(graph, v))).sum()
    }

    fn recount(&self, graph: &TannerGraph) -> Vec<usize> {
        let mut indegree = vec![0; graph.num_vertices()];
        for i in 0..self.edges.len() {
            indegree[self.arc(graph, i).1] += 1;
        }
        indegree
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrientationFailure {
    pub residual_violations: usize,
    /// Heavy and full vertices that reach a heavy vertex; no light vertex does.
    pub blocking_set: Vec<usize>,
    pub partial: OrientedEdgeSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrientOutcome {
    Oriented(OrientedEdgeSet),
    Failed(OrientationFailure),
}

impl OrientOutcome {
    pub fn oriented(&self) -> Option<&OrientedEdgeSet> {
        match self {
            OrientOutcome::Oriented(o) => Some(o),
            OrientOutcome::Failed(_) => None,
        }
    }
}

pub fn orient(graph: &TannerGraph, edges: &[usize], cap_a: usize, cap_b: usize) -> Result<OrientOutcome> {
    let mut o = OrientedEdgeSet::a_to_b(graph, edges, cap_a, cap_b)?;
    let nv = graph.num_vertices();
    let mut around: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (i, &e) in o.edges.iter().enumerate() {
        let (a, b) = graph.endpoints(e);
        around[a].push(i);
        around[b].push(i);
    }
    let mut violations = o.violations(graph);
    while violations > 0 {
        let status = |o: &OrientedEdgeSet, v: usize| o.indegree[v].cmp(&o.cap(graph, v));
        // via[x] = arc index leading from x towards a heavy vertex
        let mut via: Vec<Option<usize>> = vec![None; nv];
        let mut visited = vec![false; nv];
        let mut queue = VecDeque::new();
        for (v, seen) in visited.iter_mut().enumerate() {
            if status(&o, v).is_gt() {
                *seen = true;
                queue.push_back(v);
            }
        }
        let mut light = None;
        'search: while let Some(x) = queue.pop_front() {
            for &i in &around[x] {
                let (tail, head) = o.arc(graph, i);
                if head != x || visited[tail] {
                    continue;
                }
                visited[tail] = true;
                via[tail] = Some(i);
                match status(&o, tail) {
                    std::cmp::Ordering::Less => {
                        light = Some(tail);
                        break 'search;
                    }
                    std::cmp::Ordering::Equal => queue.push_back(tail),
                    std::cmp::Ordering::Greater => unreachable!("heavy vertices are seeded as visited"),
                }
            }
        }
        let Some(mut x) = light else {
            let blocking_set = (0..nv).filter(|&v| visited[v]).collect();
            return Ok(OrientOutcome::Failed(OrientationFailure {
                residual_violations: violations,
                blocking_set,
                partial: o,
            }));
        };
        o.indegree[x] += 1;
        while let Some(i) = via[x] {
            let head = o.arc(graph, i).1;
            o.toward_b[i] = !o.toward_b[i];
            x = head;
        }
        o.indegree[x] -= 1;
        let next = o.violations(graph);
        if next + 1 != violations {
            return Err(Error::Internal(format!("path flip changed violations from {violations} to {next}")));
        }
        violations = next;
    }
    Ok(OrientOutcome::Oriented(o))
}

/// Recomputes indegrees from the directions and checks them against the caps.
pub fn verify_orientation(graph: &TannerGraph, o: &OrientedEdgeSet) -> bool {
    if o.edges.iter().any(|&e| e >= graph.num_edges()) || o.toward_b.len() != o.edges.len() {
        return false;
    }
    let indegree = o.recount(graph);
    indegree == o.indegree && (0..graph.num_vertices()).all(|v| indegree[v] <= o.cap(graph, v))
}

/// Caps `⌊ρ_AΔ⌋`, `⌊ρ_BΔ⌋`, warning when either product is not an integer.
pub fn caps_from_fractions(rho_a: f64, rho_b: f64, delta: usize) -> (usize, usize) {
    let cap = |rho: f64, name: &str| {
        let x = rho * delta as f64;
        let floor = (x + 1e-9).floor();
        if (x - floor).abs() > 1e-9 {
            log::warn!("cap {name} = {x} is not an integer; using {floor}");
        }
        floor.max(0.0) as usize
    };
    (cap(rho_a, "A"), cap(rho_b, "B"))
}

/// Whether any of the `2^|Ê|` orientations respects the caps.
pub fn exists_orientation_exhaustive(graph: &TannerGraph, edges: &[usize], cap_a: usize, cap_b: usize) -> Result<bool> {
    if edges.len() > 24 {
        return Err(Error::EnumerationTooLarge { count: 1u128 << edges.len(), cap: 1 << 24 });
    }
    for mask in 0u32..(1u32 << edges.len()) {
        let dirs = (0..edges.len()).map(|i| mask >> i & 1 == 1).collect();
        let o = OrientedEdgeSet::with_directions(graph, edges, dirs, cap_a, cap_b)?;
        if o.violations(graph) == 0 {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::index::sample;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn empty_set_is_valid() {
        let g = TannerGraph::complete_bipartite(3).unwrap();
        let o = orient(&g, &[], 0, 0).unwrap();
        let o = o.oriented().unwrap();
        assert!(o.indegree.iter().all(|&d| d == 0));
        assert!(verify_orientation(&g, o));
    }

    #[test]
    fn star_points_away_from_center() {
        let g = TannerGraph::complete_bipartite(4).unwrap();
        let star = g.incident(0).to_vec();
        let o = orient(&g, &star, 0, 1).unwrap();
        let o = o.oriented().expect("outward star fits");
        assert_eq!(o.indegree[0], 0);
        assert!(verify_orientation(&g, o));
    }

    #[test]
    fn verify_rejects_overloaded_vertex() {
        let g = TannerGraph::complete_bipartite(2).unwrap();
        let o = OrientedEdgeSet::a_to_b(&g, &[0], 1, 0).unwrap();
        assert!(!verify_orientation(&g, &o));
    }

    #[test]
    fn k22_cycle_orientation_count() {
        // K_{2,2} is a 4-cycle; with caps 1 only the two cyclic orientations
        // give every vertex indegree exactly one, and any caps-1 orientation
        // of 4 edges on 4 vertices must do so.
        let g = TannerGraph::complete_bipartite(2).unwrap();
        let edges: Vec<usize> = (0..4).collect();
        let mut valid = 0;
        for mask in 0..16u32 {
            let dirs = (0..4).map(|i| mask >> i & 1 == 1).collect();
            let o = OrientedEdgeSet::with_directions(&g, &edges, dirs, 1, 1).unwrap();
            if verify_orientation(&g, &o) {
                assert!(o.indegree.iter().all(|&d| d == 1));
                valid += 1;
            }
        }
        assert_eq!(valid, 2);
        assert!(verify_orientation(&g, orient(&g, &edges, 1, 1).unwrap().oriented().unwrap()));
    }

    #[test]
    fn infeasible_reports_blocking_set() {
        // 9 edges of K_{3,3} with caps 1 give only 6 slots
        let g = TannerGraph::complete_bipartite(3).unwrap();
        let edges: Vec<usize> = (0..9).collect();
        match orient(&g, &edges, 1, 1).unwrap() {
            OrientOutcome::Failed(f) => {
                assert_eq!(f.residual_violations, 3);
                assert_eq!(f.blocking_set.len(), 6);
            }
            OrientOutcome::Oriented(_) => panic!("cannot orient"),
        }
    }

    #[test]
    fn rejects_duplicate_edges() {
        let g = TannerGraph::complete_bipartite(2).unwrap();
        assert!(orient(&g, &[1, 1], 1, 1).is_err());
        assert!(orient(&g, &[9], 1, 1).is_err());
    }

    #[test]
    fn matches_exhaustive_search() {
        let g = TannerGraph::complete_bipartite(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let k = rng.random_range(0..=12);
            let edges = sample(&mut rng, 16, k).into_vec();
            let ca = rng.random_range(0..3);
            let cb = rng.random_range(0..3);
            let found = orient(&g, &edges, ca, cb).unwrap();
            let exists = exists_orientation_exhaustive(&g, &edges, ca, cb).unwrap();
            assert_eq!(found.oriented().is_some(), exists);
            if let Some(o) = found.oriented() {
                assert!(verify_orientation(&g, o));
            }
        }
    }

    #[test]
    fn floors_fractional_caps() {
        assert_eq!(caps_from_fractions(0.25, 0.5, 8), (2, 4));
        assert_eq!(caps_from_fractions(0.3, 0.5, 5), (1, 2));
    }
}
