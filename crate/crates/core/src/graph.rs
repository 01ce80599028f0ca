//! Radius-limited communication graph.
//!
//! Agents `i != j` are neighbors iff `|p_i - p_j| <= R` (boundary inclusive),
//! tested on squared distances. Two builders produce identical graphs: an
//! O(N²) pair scan used as the reference, and a uniform grid with cell side
//! `R` that only tests pairs in adjacent cells.

use serde::{Deserialize, Serialize};

use crate::types::{SwarmState, Vec2};

/// Per-agent neighbor lists, each sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct NeighborGraph {
    neighbors: Vec<Vec<usize>>,
}

impl NeighborGraph {
    /// Build from explicit lists. Lists are sorted and deduplicated; symmetry is
    /// the caller's responsibility (see [`NeighborGraph::is_well_formed`]).
    pub fn from_lists(mut neighbors: Vec<Vec<usize>>) -> Self {
        for list in &mut neighbors {
            list.sort_unstable();
            list.dedup();
        }
        Self { neighbors }
    }

    /// Every agent adjacent to every other.
    pub fn complete(n: usize) -> Self {
        Self {
            neighbors: (0..n)
                .map(|i| (0..n).filter(|&j| j != i).collect())
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    pub fn lists(&self) -> &[Vec<usize>] {
        &self.neighbors
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Symmetric, irreflexive, sorted, in-range.
    pub fn is_well_formed(&self) -> bool {
        let n = self.len();
        self.neighbors.iter().enumerate().all(|(i, list)| {
            list.windows(2).all(|w| w[0] < w[1])
                && list
                    .iter()
                    .all(|&j| j < n && j != i && self.neighbors[j].binary_search(&i).is_ok())
        })
    }

    pub fn isolated_count(&self) -> usize {
        self.neighbors.iter().filter(|l| l.is_empty()).count()
    }

    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.len());
        for (i, list) in self.neighbors.iter().enumerate() {
            for &j in list.iter().filter(|&&j| j > i) {
                uf.union(i, j);
            }
        }
        uf.count()
    }
}

#[inline]
fn within(a: Vec2, b: Vec2, radius_sq: f64) -> bool {
    (a - b).norm_squared() <= radius_sq
}

/// Reference builder: test every unordered pair.
pub fn build_graph_bruteforce(state: &SwarmState, comm_radius: f64) -> NeighborGraph {
    let n = state.len();
    let r2 = comm_radius * comm_radius;
    let mut neighbors = vec![Vec::new(); n];
    for i in 0..n {
        let pi = state.agents[i].position;
        for j in (i + 1)..n {
            if within(pi, state.agents[j].position, r2) {
                neighbors[i].push(j);
                neighbors[j].push(i);
            }
        }
    }
    // Pushes happen in increasing j for row i and increasing i for row j, so
    // rows are already sorted.
    NeighborGraph { neighbors }
}

/// Grid builder with cell side `comm_radius`. Same output as
/// [`build_graph_bruteforce`].
pub fn build_graph_grid(state: &SwarmState, comm_radius: f64) -> NeighborGraph {
    let n = state.len();
    if n == 0 {
        return NeighborGraph::default();
    }
    let r2 = comm_radius * comm_radius;
    let (min_x, min_y) = state
        .positions()
        .fold((f64::INFINITY, f64::INFINITY), |(mx, my), p| {
            (mx.min(p.x), my.min(p.y))
        });
    let cell_of = |p: Vec2| -> (i64, i64) {
        (
            ((p.x - min_x) / comm_radius).floor() as i64,
            ((p.y - min_y) / comm_radius).floor() as i64,
        )
    };

    // Agents sorted by cell; each cell is a contiguous run.
    let cells: Vec<(i64, i64)> = state.positions().map(cell_of).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by_key(|&i| (cells[i], i));
    let sorted_cells: Vec<(i64, i64)> = order.iter().map(|&i| cells[i]).collect();

    let run = |cell: (i64, i64)| -> &[usize] {
        let start = sorted_cells.partition_point(|&c| c < cell);
        let end = start + sorted_cells[start..].partition_point(|&c| c == cell);
        &order[start..end]
    };

    let mut neighbors = vec![Vec::new(); n];
    for (i, list) in neighbors.iter_mut().enumerate() {
        let pi = state.agents[i].position;
        let (cx, cy) = cells[i];
        for dx in -1..=1 {
            for dy in -1..=1 {
                for &j in run((cx + dx, cy + dy)) {
                    if j != i && within(pi, state.agents[j].position, r2) {
                        list.push(j);
                    }
                }
            }
        }
        list.sort_unstable();
    }
    NeighborGraph { neighbors }
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    sets: usize,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        Self {
            parent: (0..len).collect(),
            size: vec![1; len],
            sets: len,
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true if the two elements were in different sets.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.sets -= 1;
        true
    }

    pub fn count(&self) -> usize {
        self.sets
    }
}
