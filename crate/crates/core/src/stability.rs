//! Binding graphs and τ-stability. Stability of an assembly is decided by the
//! global minimum cut of its weighted binding graph; disjoint unions get a
//! fast path through the interface strength between the two parts.

use thiserror::Error;

use crate::model::{
    Assembly, Direction, ModelError, Point, Supertile, Temperature, TileSet,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StabilityError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("precondition: operands must be τ-stable")]
    UnstableOperand,
}

/// The grid graph on an assembly's cells with one undirected edge per bound
/// pair of abutting tiles, weighted by the shared glue strength.
#[derive(Debug, Clone)]
pub struct BindingGraph {
    points: Vec<Point>,
    /// Edges as (index, index, weight) with the first index smaller.
    edges: Vec<(usize, usize, u32)>,
}

impl BindingGraph {
    pub fn vertex_count(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn edges(&self) -> &[(usize, usize, u32)] {
        &self.edges
    }

    pub fn edge_between(&self, a: Point, b: Point) -> Option<u32> {
        let ia = self.points.binary_search(&a).ok()?;
        let ib = self.points.binary_search(&b).ok()?;
        let (lo, hi) = if ia < ib { (ia, ib) } else { (ib, ia) };
        self.edges
            .iter()
            .find(|&&(u, v, _)| u == lo && v == hi)
            .map(|&(_, _, w)| w)
    }

    fn connected(&self) -> bool {
        if self.points.len() <= 1 {
            return true;
        }
        let n = self.points.len();
        let mut adj = vec![Vec::new(); n];
        for &(u, v, _) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == n
    }

    /// True when the graph is connected and free of bridges, i.e. every cut
    /// crosses at least two edges.
    fn two_edge_connected(&self) -> bool {
        let n = self.points.len();
        if n <= 1 {
            return true;
        }
        if !self.connected() {
            return false;
        }
        // Iterative bridge search (Tarjan low-link over an explicit stack).
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (ei, &(u, v, _)) in self.edges.iter().enumerate() {
            adj[u].push((v, ei));
            adj[v].push((u, ei));
        }
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![usize::MAX; n];
        let mut cursor = vec![0usize; n];
        let mut timer = 0usize;
        let mut stack: Vec<(usize, usize)> = Vec::new(); // (node, parent edge)
        disc[0] = 0;
        low[0] = 0;
        timer += 1;
        stack.push((0, usize::MAX));
        while let Some(&(u, pe)) = stack.last() {
            if cursor[u] < adj[u].len() {
                let (v, ei) = adj[u][cursor[u]];
                cursor[u] += 1;
                if ei == pe {
                    continue;
                }
                if disc[v] == usize::MAX {
                    disc[v] = timer;
                    low[v] = timer;
                    timer += 1;
                    stack.push((v, ei));
                } else {
                    low[u] = low[u].min(disc[v]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _)) = stack.last() {
                    if low[u] > disc[p] {
                        return false; // bridge between p and u
                    }
                    low[p] = low[p].min(low[u]);
                }
            }
        }
        true
    }

    pub fn min_edge_weight(&self) -> Option<u32> {
        self.edges.iter().map(|&(_, _, w)| w).min()
    }

    /// Global minimum cut weight. A single vertex has no cuts and reports
    /// `u64::MAX`; a disconnected graph reports 0.
    pub fn min_cut(&self) -> u64 {
        let n = self.points.len();
        if n <= 1 {
            return u64::MAX;
        }
        if !self.connected() {
            return 0;
        }
        stoer_wagner(n, &self.edges)
    }
}

/// Stoer–Wagner global minimum cut on an undirected weighted graph.
/// Quadratic-memory adjacency matrix; assemblies are small.
#[allow(clippy::needless_range_loop)]
pub(crate) fn stoer_wagner(n: usize, edges: &[(usize, usize, u32)]) -> u64 {
    debug_assert!(n >= 2);
    let mut w = vec![vec![0u64; n]; n];
    for &(u, v, c) in edges {
        w[u][v] += c as u64;
        w[v][u] += c as u64;
    }
    let mut active: Vec<usize> = (0..n).collect();
    let mut best = u64::MAX;
    while active.len() > 1 {
        // Maximum-adjacency order over the active vertices.
        let m = active.len();
        let mut weight_to_a = vec![0u64; m];
        let mut in_a = vec![false; m];
        let mut prev = 0usize;
        let mut last = 0usize;
        for it in 0..m {
            let mut sel = usize::MAX;
            for i in 0..m {
                if !in_a[i] && (sel == usize::MAX || weight_to_a[i] > weight_to_a[sel]) {
                    sel = i;
                }
            }
            in_a[sel] = true;
            if it == m - 1 {
                best = best.min(weight_to_a[sel]);
                prev = last;
                last = sel;
            } else {
                if it > 0 {
                    prev = last;
                }
                last = sel;
                for i in 0..m {
                    if !in_a[i] {
                        weight_to_a[i] += w[active[sel]][active[i]];
                    }
                }
            }
        }
        // Merge the last vertex into the one added before it.
        let (keep, gone) = (active[prev], active[last]);
        for i in 0..n {
            if i != keep && i != gone {
                let merged = w[keep][i] + w[gone][i];
                w[keep][i] = merged;
                w[i][keep] = merged;
            }
        }
        active.remove(last);
    }
    best
}

/// Builds the binding graph of `a` over `t`. Abutting tiles contribute an edge
/// only when both label and strength agree and the strength is positive;
/// mismatched glues simply contribute nothing.
pub fn binding_graph(a: &Assembly, tiles: &TileSet) -> BindingGraph {
    let points: Vec<Point> = a.cells().iter().map(|&(p, _)| p).collect();
    let mut edges = Vec::new();
    for (i, &(p, t)) in a.cells().iter().enumerate() {
        // North and east only, so each undirected edge appears once.
        for dir in [Direction::North, Direction::East] {
            let Some(q) = p.step(dir) else { continue };
            if let Some(u) = a.tile_at(q) {
                let s = tiles.bond_strength(t, dir, u);
                if s > 0 {
                    let j = points.binary_search(&q).expect("cell present");
                    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
                    edges.push((lo, hi, s));
                }
            }
        }
    }
    BindingGraph { points, edges }
}

/// τ-stability: every cut of the binding graph weighs at least τ. Fast paths:
/// singletons are always stable, disconnected graphs never are, a connected
/// graph whose edges all weigh ≥ τ is stable, and for τ ≤ 2 a bridgeless
/// connected graph is stable.
pub fn is_stable(a: &Assembly, tiles: &TileSet, tau: Temperature) -> bool {
    if a.len() == 1 {
        return true;
    }
    let g = binding_graph(a, tiles);
    let tau = tau.get();
    if !g.connected() {
        return false;
    }
    if tau == 1 {
        return true;
    }
    if g.min_edge_weight().is_some_and(|w| w >= tau) {
        return true;
    }
    if tau == 2 && g.two_edge_connected() {
        return true;
    }
    g.min_cut() >= tau as u64
}

/// Stability of a supertile, memoized per queried temperature.
pub fn supertile_is_stable(s: &Supertile, tiles: &TileSet, tau: Temperature) -> bool {
    if let Some(v) = s.cached_stability(tau.get()) {
        return v;
    }
    let v = is_stable(s.assembly(), tiles, tau);
    s.cache_stability(tau.get(), v);
    v
}

/// Total matched-glue strength across the interface between two disjoint
/// assemblies: the sum over abutting pairs (p ∈ a, q ∈ b) of their bond
/// strength.
pub fn interface_strength(
    a: &Assembly,
    b: &Assembly,
    tiles: &TileSet,
) -> Result<u64, StabilityError> {
    // Scanning the smaller side finds every abutting pair once and detects
    // any domain intersection.
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut sum = 0u64;
    for &(p, t) in small.cells().iter() {
        if large.contains(p) {
            return Err(StabilityError::Model(ModelError::Overlap(p.x, p.y)));
        }
        for dir in Direction::ALL {
            let Some(q) = p.step(dir) else { continue };
            if let Some(u) = large.tile_at(q) {
                sum += tiles.bond_strength(t, dir, u) as u64;
            }
        }
    }
    Ok(sum)
}

/// Fast union-stability: for disjoint τ-stable operands, the union is
/// τ-stable exactly when the interface strength reaches τ.
pub fn stable_union(
    a: &Assembly,
    b: &Assembly,
    tiles: &TileSet,
    tau: Temperature,
) -> Result<bool, StabilityError> {
    if !is_stable(a, tiles, tau) || !is_stable(b, tiles, tau) {
        return Err(StabilityError::UnstableOperand);
    }
    Ok(interface_strength(a, b, tiles)? >= tau.get() as u64)
}
