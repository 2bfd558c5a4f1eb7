//! Multigraphs and their chromatic polynomials.
//!
//! The chromatic polynomial is computed by deletion–contraction on simple
//! graphs (loops force zero, parallel edges collapse), factored over
//! connected components and blocks, and memoized on canonical forms so
//! isomorphic minors are only expanded once.

use std::sync::Arc;

use dashmap::DashMap;
use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::poly::IntPolynomial;

/// Largest block handled by the bitset deletion–contraction engine.
pub const MAX_BLOCK_VERTICES: usize = 64;

/// Parallel deletion–contraction kicks in above this many edges.
const PARALLEL_EDGE_THRESHOLD: usize = 18;

/// Leaf budget for one canonical-form search; beyond it the node is simply
/// not memoized.
const CANON_LEAF_BUDGET: usize = 20_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({u}, {v}) has an endpoint outside 0..{vertex_count}")]
    EndpointOutOfRange { u: usize, v: usize, vertex_count: usize },
    #[error("edge index {0} out of range")]
    EdgeOutOfRange(usize),
    #[error("a block with {0} vertices exceeds the {MAX_BLOCK_VERTICES}-vertex limit")]
    BlockTooLarge(usize),
}

/// An undirected multigraph on vertices `0..vertex_count`; loops allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        for &(u, v) in &edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(GraphError::EndpointOutOfRange { u, v, vertex_count });
            }
        }
        Ok(Self { vertex_count, edges })
    }

    pub fn empty(vertex_count: usize) -> Self {
        Self {
            vertex_count,
            edges: Vec::new(),
        }
    }

    pub fn complete(k: usize) -> Self {
        let edges = (0..k)
            .flat_map(|u| (u + 1..k).map(move |v| (u, v)))
            .collect();
        Self {
            vertex_count: k,
            edges,
        }
    }

    pub fn path(k: usize) -> Self {
        let edges = (1..k).map(|v| (v - 1, v)).collect();
        Self {
            vertex_count: k,
            edges,
        }
    }

    pub fn cycle(k: usize) -> Self {
        let edges = (0..k).map(|v| (v, (v + 1) % k)).collect();
        Self {
            vertex_count: k,
            edges,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_loop(&self) -> bool {
        self.edges.iter().any(|&(u, v)| u == v)
    }

    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.vertex_count;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
        Graph {
            vertex_count: self.vertex_count + other.vertex_count,
            edges,
        }
    }

    pub fn delete_edge(&self, index: usize) -> Result<Graph, GraphError> {
        if index >= self.edges.len() {
            return Err(GraphError::EdgeOutOfRange(index));
        }
        let mut edges = self.edges.clone();
        edges.remove(index);
        Ok(Graph {
            vertex_count: self.vertex_count,
            edges,
        })
    }

    /// Identifies the endpoints of edge `index` and drops that edge. Other
    /// edges parallel to it become loops. Contracting a loop deletes it.
    pub fn contract_edge(&self, index: usize) -> Result<Graph, GraphError> {
        let &(a, b) = self.edges.get(index).ok_or(GraphError::EdgeOutOfRange(index))?;
        if a == b {
            return self.delete_edge(index);
        }
        let (keep, gone) = (a.min(b), a.max(b));
        let relabel = |x: usize| {
            let x = if x == gone { keep } else { x };
            if x > gone {
                x - 1
            } else {
                x
            }
        };
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != index)
            .map(|(_, &(u, v))| (relabel(u), relabel(v)))
            .collect();
        Ok(Graph {
            vertex_count: self.vertex_count - 1,
            edges,
        })
    }

    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.vertex_count);
        for &(u, v) in &self.edges {
            uf.union(u, v);
        }
        uf.components()
    }

    /// Number of proper `q`-colorings by exhaustive backtracking. Intended
    /// as an independent check on small graphs.
    pub fn coloring_count_oracle(&self, q: u64) -> BigInt {
        if self.has_loop() {
            return BigInt::zero();
        }
        let n = self.vertex_count;
        // earlier[v] = neighbours of v with a smaller index
        let mut earlier: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(u, v) in &self.edges {
            let (lo, hi) = (u.min(v), u.max(v));
            if !earlier[hi].contains(&lo) {
                earlier[hi].push(lo);
            }
        }
        let mut colors = vec![0u64; n];
        fn go(v: usize, q: u64, earlier: &[Vec<usize>], colors: &mut [u64]) -> u128 {
            if v == colors.len() {
                return 1;
            }
            let mut total = 0u128;
            for c in 0..q {
                if earlier[v].iter().all(|&w| colors[w] != c) {
                    colors[v] = c;
                    total += go(v + 1, q, earlier, colors);
                }
            }
            total
        }
        BigInt::from(go(0, q, &earlier, &mut colors))
    }

    pub fn chromatic_polynomial(&self) -> Result<IntPolynomial, GraphError> {
        ChromaticSolver::new().chromatic_polynomial(self)
    }

    /// Connected components as vertex lists, each sorted.
    fn component_vertex_sets(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.vertex_count);
        for &(u, v) in &self.edges {
            uf.union(u, v);
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for v in 0..self.vertex_count {
            groups.entry(uf.find(v)).or_default().push(v);
        }
        groups.into_values().collect()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn components(&mut self) -> usize {
        (0..self.parent.len()).filter(|&v| self.find(v) == v).count()
    }
}

/// Simple graph on at most 64 vertices as adjacency bitmasks.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits {
    adj: Vec<u64>,
}

impl Bits {
    fn n(&self) -> usize {
        self.adj.len()
    }

    fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    fn induced(&self, mask: u64) -> Bits {
        let verts: Vec<usize> = (0..self.n()).filter(|&v| mask >> v & 1 == 1).collect();
        let adj = verts
            .iter()
            .map(|&v| {
                let mut row = 0u64;
                for (j, &w) in verts.iter().enumerate() {
                    if self.adj[v] >> w & 1 == 1 {
                        row |= 1 << j;
                    }
                }
                row
            })
            .collect();
        Bits { adj }
    }

    fn delete(&self, u: usize, v: usize) -> Bits {
        let mut adj = self.adj.clone();
        adj[u] &= !(1 << v);
        adj[v] &= !(1 << u);
        Bits { adj }
    }

    /// Merges `v` into `u` (`u < v`), dropping the edge between them.
    fn contract(&self, u: usize, v: usize) -> Bits {
        let squeeze = |m: u64| -> u64 {
            let low = m & ((1u64 << v) - 1);
            let high = if v + 1 < 64 { (m >> (v + 1)) << v } else { 0 };
            low | high
        };
        let mut adj = Vec::with_capacity(self.n() - 1);
        for w in 0..self.n() {
            if w == v {
                continue;
            }
            let mut row = self.adj[w];
            if w == u {
                row |= self.adj[v];
                row &= !(1 << u) & !(1 << v);
            } else if row >> v & 1 == 1 {
                row = (row & !(1 << v)) | (1 << u);
            }
            adj.push(squeeze(row));
        }
        Bits { adj }
    }

    fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        let full = if self.n() == 64 { u64::MAX } else { (1u64 << self.n()) - 1 };
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let mut next = 0u64;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.adj[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen == full
    }

    /// Vertex masks of the biconnected components (blocks), by Tarjan's
    /// lowpoint algorithm. Assumes the graph is connected.
    fn blocks(&self) -> Vec<u64> {
        let n = self.n();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut stack: Vec<(usize, usize)> = Vec::new();
        let mut blocks = Vec::new();
        let mut time = 0;
        // Iterative DFS: (vertex, parent, remaining neighbour mask)
        let mut dfs: Vec<(usize, usize, u64)> = Vec::new();
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = time;
            low[root] = time;
            time += 1;
            dfs.push((root, usize::MAX, self.adj[root]));
            while let Some(top) = dfs.last_mut() {
                let (v, parent, rest) = *top;
                if rest != 0 {
                    let w = rest.trailing_zeros() as usize;
                    top.2 &= rest - 1;
                    if disc[w] == usize::MAX {
                        stack.push((v, w));
                        disc[w] = time;
                        low[w] = time;
                        time += 1;
                        dfs.push((w, v, self.adj[w]));
                    } else if w != parent && disc[w] < disc[v] {
                        stack.push((v, w));
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    dfs.pop();
                    if parent != usize::MAX {
                        low[parent] = low[parent].min(low[v]);
                        if low[v] >= disc[parent] {
                            let mut mask = 0u64;
                            while let Some((a, b)) = stack.pop() {
                                mask |= 1 << a | 1 << b;
                                if (a, b) == (parent, v) {
                                    break;
                                }
                            }
                            blocks.push(mask);
                        }
                    }
                }
            }
        }
        blocks
    }
}

/// Canonical labelling key: vertex count plus relabelled adjacency rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    n: usize,
    rows: Vec<u64>,
}

/// Canonical form of the underlying simple graph (loops and parallel edges
/// ignored). Two graphs get the same form iff their simple graphs are
/// isomorphic. Graphs on more than 64 vertices are not supported.
pub fn canonical_form(g: &Graph) -> Option<CanonicalForm> {
    let bits = simple_bits(g)?;
    canon(&bits, usize::MAX)
}

fn simple_bits(g: &Graph) -> Option<Bits> {
    if g.vertex_count > 64 {
        return None;
    }
    let mut adj = vec![0u64; g.vertex_count];
    for &(u, v) in &g.edges {
        if u != v {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
    }
    Some(Bits { adj })
}

/// Colour refinement: split colour classes by neighbour-colour counts until
/// stable. Colours are renumbered by sorting invariant signatures, so the
/// result is isomorphism-equivariant.
fn refine(g: &Bits, colors: &mut Vec<usize>) {
    let n = g.n();
    let mut ranks = colors.clone();
    ranks.sort_unstable();
    ranks.dedup();
    for c in colors.iter_mut() {
        *c = ranks.binary_search(c).unwrap();
    }
    let mut classes = ranks.len();
    loop {
        let mut sigs: Vec<(usize, Vec<usize>, usize)> = (0..n)
            .map(|v| {
                let mut counts = vec![0usize; classes];
                let mut m = g.adj[v];
                while m != 0 {
                    let w = m.trailing_zeros() as usize;
                    m &= m - 1;
                    counts[colors[w]] += 1;
                }
                (colors[v], counts, v)
            })
            .collect();
        sigs.sort();
        let mut next = vec![0usize; n];
        let mut c = 0;
        for i in 0..n {
            if i > 0 && (sigs[i].0, &sigs[i].1) != (sigs[i - 1].0, &sigs[i - 1].1) {
                c += 1;
            }
            next[sigs[i].2] = c;
        }
        let new_classes = if n == 0 { 0 } else { c + 1 };
        *colors = next;
        if new_classes == classes {
            return;
        }
        classes = new_classes;
    }
}

fn distinct(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn canon(g: &Bits, leaf_budget: usize) -> Option<CanonicalForm> {
    let n = g.n();
    // Initial colouring by degree, ranked.
    let mut degs: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut sorted = degs.clone();
    sorted.sort_unstable();
    sorted.dedup();
    for d in degs.iter_mut() {
        *d = sorted.binary_search(d).unwrap();
    }
    let mut best: Option<Vec<u64>> = None;
    let mut leaves = 0usize;
    if !search(g, degs, &mut best, &mut leaves, leaf_budget) {
        return None;
    }
    best.map(|rows| CanonicalForm { n, rows })
}

fn search(
    g: &Bits,
    mut colors: Vec<usize>,
    best: &mut Option<Vec<u64>>,
    leaves: &mut usize,
    budget: usize,
) -> bool {
    refine(g, &mut colors);
    let n = g.n();
    let classes = distinct(&colors);
    if classes == n {
        *leaves += 1;
        if *leaves > budget {
            return false;
        }
        let mut rows = vec![0u64; n];
        for v in 0..n {
            let mut m = g.adj[v];
            let mut row = 0u64;
            while m != 0 {
                let w = m.trailing_zeros() as usize;
                m &= m - 1;
                row |= 1 << colors[w];
            }
            rows[colors[v]] = row;
        }
        if best.as_ref().is_none_or(|b| rows < *b) {
            *best = Some(rows);
        }
        return true;
    }
    // First non-singleton colour class.
    let mut sizes = vec![0usize; classes];
    for &c in &colors {
        sizes[c] += 1;
    }
    let target = (0..classes).find(|&c| sizes[c] > 1).unwrap();
    for v in 0..n {
        if colors[v] != target {
            continue;
        }
        let mut child: Vec<usize> = colors.iter().map(|&c| 2 * c + 1).collect();
        child[v] = 2 * target;
        if !search(g, child, best, leaves, budget) {
            return false;
        }
    }
    true
}

/// Deletion–contraction engine with a memo table shared across calls and
/// threads. Cached values are pure functions of the key, so concurrent
/// inserts of the same key are harmless.
#[derive(Clone, Default)]
pub struct ChromaticSolver {
    memo: Arc<DashMap<CanonicalForm, IntPolynomial>>,
}

impl ChromaticSolver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn chromatic_polynomial(&self, g: &Graph) -> Result<IntPolynomial, GraphError> {
        if g.has_loop() {
            return Ok(IntPolynomial::zero());
        }
        let mut result = IntPolynomial::one();
        for comp in g.component_vertex_sets() {
            let k = comp.len();
            let mut index = vec![usize::MAX; g.vertex_count];
            for (i, &v) in comp.iter().enumerate() {
                index[v] = i;
            }
            let mut simple: Vec<(usize, usize)> = g
                .edges
                .iter()
                .filter(|&&(u, _)| index[u] != usize::MAX)
                .map(|&(u, v)| {
                    let (a, b) = (index[u], index[v]);
                    (a.min(b), a.max(b))
                })
                .collect();
            simple.sort_unstable();
            simple.dedup();
            let chi = if simple.len() + 1 == k {
                tree_polynomial(k)
            } else if k > MAX_BLOCK_VERTICES {
                return Err(GraphError::BlockTooLarge(k));
            } else {
                let mut adj = vec![0u64; k];
                for &(a, b) in &simple {
                    adj[a] |= 1 << b;
                    adj[b] |= 1 << a;
                }
                self.connected(&Bits { adj })
            };
            result = &result * &chi;
        }
        Ok(result)
    }

    /// Chromatic polynomial of a connected simple graph: product over blocks
    /// divided by `q^(blocks - 1)`.
    fn connected(&self, g: &Bits) -> IntPolynomial {
        let n = g.n();
        let m = g.edge_count();
        if m + 1 == n || n <= 1 {
            return tree_polynomial(n);
        }
        let blocks = g.blocks();
        if blocks.len() == 1 {
            return self.biconnected(g);
        }
        let mut product = IntPolynomial::one();
        for &mask in &blocks {
            let block = g.induced(mask);
            product = &product * &self.biconnected(&block);
        }
        divide_by_q_power(&product, blocks.len() - 1)
    }

    fn biconnected(&self, g: &Bits) -> IntPolynomial {
        let n = g.n();
        let m = g.edge_count();
        if m + 1 == n {
            return tree_polynomial(n);
        }
        if m == n * (n - 1) / 2 {
            return falling_factorial(n);
        }
        if m == n && (0..n).all(|v| g.degree(v) == 2) {
            return cycle_polynomial(n);
        }
        let key = canon(g, CANON_LEAF_BUDGET);
        if let Some(hit) = key.as_ref().and_then(|k| self.memo.get(k)) {
            return hit.clone();
        }
        let (u, v) = pick_edge(g);
        let deleted = g.delete(u, v);
        let contracted = g.contract(u, v);
        let (a, b) = if m > PARALLEL_EDGE_THRESHOLD {
            rayon::join(|| self.general(&deleted), || self.general(&contracted))
        } else {
            (self.general(&deleted), self.general(&contracted))
        };
        let chi = &a - &b;
        if let Some(k) = key {
            self.memo.insert(k, chi.clone());
        }
        chi
    }

    /// Any simple graph on at most 64 vertices.
    fn general(&self, g: &Bits) -> IntPolynomial {
        if g.is_connected() {
            return self.connected(g);
        }
        let n = g.n();
        let mut seen = 0u64;
        let mut product = IntPolynomial::one();
        for start in 0..n {
            if seen >> start & 1 == 1 {
                continue;
            }
            let mut comp = 1u64 << start;
            let mut frontier = comp;
            while frontier != 0 {
                let mut next = 0u64;
                let mut f = frontier;
                while f != 0 {
                    let w = f.trailing_zeros() as usize;
                    f &= f - 1;
                    next |= g.adj[w];
                }
                frontier = next & !comp;
                comp |= next;
            }
            seen |= comp;
            product = &product * &self.connected(&g.induced(comp));
        }
        product
    }
}

/// Edge with the largest endpoint degree sum; ties go to the smallest pair.
fn pick_edge(g: &Bits) -> (usize, usize) {
    let mut best = (0usize, 0usize, 0usize);
    let mut found = false;
    for u in 0..g.n() {
        let mut m = g.adj[u] & !((1u64 << u) | ((1u64 << u) - 1));
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            let score = g.degree(u) + g.degree(v);
            if !found || score > best.0 {
                best = (score, u, v);
                found = true;
            }
        }
    }
    (best.1, best.2)
}

/// `q (q-1)^(k-1)`, and `1` for the empty graph.
fn tree_polynomial(k: usize) -> IntPolynomial {
    if k == 0 {
        return IntPolynomial::one();
    }
    &IntPolynomial::monomial(1) * &IntPolynomial::linear_root(1).pow(k as u32 - 1)
}

/// `q (q-1) ... (q-k+1)`.
fn falling_factorial(k: usize) -> IntPolynomial {
    (0..k).fold(IntPolynomial::one(), |acc, i| {
        &acc * &IntPolynomial::linear_root(i as i64)
    })
}

/// `(q-1)^k + (-1)^k (q-1)`.
fn cycle_polynomial(k: usize) -> IntPolynomial {
    let base = IntPolynomial::linear_root(1);
    let tail = if k.is_multiple_of(2) { base.clone() } else { -&base };
    &base.pow(k as u32) + &tail
}

fn divide_by_q_power(p: &IntPolynomial, k: usize) -> IntPolynomial {
    debug_assert!(p.coeffs().iter().take(k).all(Zero::is_zero));
    IntPolynomial::new(p.coeffs().iter().skip(k).cloned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::new(c.iter().copied())
    }

    fn random_graph(rng: &mut ChaCha8Rng, max_n: usize, p: f64) -> Graph {
        let n = rng.gen_range(1..=max_n);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(n, edges).unwrap()
    }

    fn oracle_interpolation(g: &Graph) -> IntPolynomial {
        let pts: Vec<(BigInt, BigInt)> = (0..=g.vertex_count() as u64)
            .map(|q| (BigInt::from(q), g.coloring_count_oracle(q)))
            .collect();
        IntPolynomial::interpolate(&pts).unwrap()
    }

    #[test]
    fn small_examples() {
        assert_eq!(Graph::empty(1).chromatic_polynomial().unwrap(), poly(&[0, 1]));
        assert_eq!(Graph::complete(3).chromatic_polynomial().unwrap(), poly(&[0, 2, -3, 1]));
        let looped = Graph::new(2, vec![(0, 1), (1, 1)]).unwrap();
        assert!(looped.chromatic_polynomial().unwrap().is_zero());
        assert_eq!(Graph::empty(0).chromatic_polynomial().unwrap(), IntPolynomial::one());
    }

    #[test]
    fn k3_matches_brute_force_interpolation() {
        let k3 = Graph::complete(3);
        assert_eq!(oracle_interpolation(&k3), poly(&[0, 2, -3, 1]));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(Graph::complete(3).coloring_count_oracle(2), BigInt::from(0));
        assert_eq!(Graph::complete(3).coloring_count_oracle(3), BigInt::from(6));
        assert_eq!(Graph::path(3).coloring_count_oracle(2), BigInt::from(2));
    }

    #[test]
    fn components() {
        let two_edges = Graph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(two_edges.component_count(), 2);
        assert_eq!(Graph::empty(3).component_count(), 3);
        assert_eq!(Graph::complete(4).component_count(), 1);
    }

    #[test]
    fn rejects_bad_endpoints() {
        assert_eq!(
            Graph::new(2, vec![(0, 2)]),
            Err(GraphError::EndpointOutOfRange { u: 0, v: 2, vertex_count: 2 })
        );
    }

    #[test]
    fn parallel_edges_collapse() {
        let multi = Graph::new(3, vec![(0, 1), (0, 1), (1, 2), (2, 0), (2, 0)]).unwrap();
        assert_eq!(multi.chromatic_polynomial().unwrap(), poly(&[0, 2, -3, 1]));
    }

    #[test]
    fn petersen_graph() {
        // Known: q(q-1)(q-2)(q^7 - 12q^6 + 67q^5 - 230q^4 + 529q^3 - 814q^2 + 775q - 352)
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        let g = Graph::new(10, edges).unwrap();
        let chi = g.chromatic_polynomial().unwrap();
        let expected = &falling_factorial(3)
            * &poly(&[-352, 775, -814, 529, -230, 67, -12, 1]);
        assert_eq!(chi, expected);
        assert_eq!(chi.evaluate(3), g.coloring_count_oracle(3));
    }

    #[test]
    fn matches_oracle_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..150 {
            let g = random_graph(&mut rng, 7, 0.5);
            let chi = g.chromatic_polynomial().unwrap();
            for q in 0..=g.vertex_count() as u64 {
                assert_eq!(chi.evaluate(q), g.coloring_count_oracle(q), "{g:?} q={q}");
            }
        }
    }

    #[test]
    fn deletion_contraction_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let mut g = random_graph(&mut rng, 8, 0.45);
            if g.edges().is_empty() {
                continue;
            }
            // sprinkle a parallel edge now and then
            if rng.gen_bool(0.3) {
                let e = g.edges()[0];
                g = Graph::new(g.vertex_count(), [g.edges(), &[e]].concat()).unwrap();
            }
            let idx = rng.gen_range(0..g.edges().len());
            let lhs = g.chromatic_polynomial().unwrap();
            let rhs = &g.delete_edge(idx).unwrap().chromatic_polynomial().unwrap()
                - &g.contract_edge(idx).unwrap().chromatic_polynomial().unwrap();
            assert_eq!(lhs, rhs, "{g:?} edge {idx}");
        }
    }

    #[test]
    fn disjoint_union_multiplies() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let a = random_graph(&mut rng, 5, 0.5);
            let b = random_graph(&mut rng, 5, 0.5);
            let u = a.disjoint_union(&b);
            assert_eq!(
                u.chromatic_polynomial().unwrap(),
                &a.chromatic_polynomial().unwrap() * &b.chromatic_polynomial().unwrap()
            );
        }
    }

    #[test]
    fn coefficients_are_log_concave() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let g = random_graph(&mut rng, 9, 0.4);
            let chi = g.chromatic_polynomial().unwrap();
            let seq = chi.coefficient_sequence().unwrap();
            assert!(seq.is_sign_alternating());
            let abs = seq.abs();
            assert!(abs.is_log_concave() && abs.has_no_internal_zeros(), "{chi}");
        }
    }

    #[test]
    fn blocks_of_bowtie() {
        // two triangles sharing vertex 2
        let g = Graph::new(5, vec![(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        let bits = simple_bits(&g).unwrap();
        let mut blocks = bits.blocks();
        blocks.sort_unstable();
        assert_eq!(blocks, vec![0b00111, 0b11100]);
        // chi = (q(q-1)(q-2))^2 / q
        let tri = falling_factorial(3);
        let expected = divide_by_q_power(&(&tri * &tri), 1);
        assert_eq!(g.chromatic_polynomial().unwrap(), expected);
    }

    #[test]
    fn canonical_form_is_label_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..60 {
            let g = random_graph(&mut rng, 9, 0.4);
            let n = g.vertex_count();
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let relabeled = Graph::new(
                n,
                g.edges().iter().map(|&(u, v)| (perm[u], perm[v])).collect(),
            )
            .unwrap();
            assert_eq!(canonical_form(&g), canonical_form(&relabeled));
        }
        assert_ne!(canonical_form(&Graph::path(4)), canonical_form(&Graph::cycle(4)));
    }

    #[test]
    fn solver_reuses_memo() {
        let solver = ChromaticSolver::new();
        let g = Graph::new(6, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3), (1, 4)])
            .unwrap();
        let first = solver.chromatic_polynomial(&g).unwrap();
        assert!(solver.memo_len() > 0);
        assert_eq!(solver.chromatic_polynomial(&g).unwrap(), first);
    }
}
