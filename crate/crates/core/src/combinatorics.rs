//! Combinatorics of an arrangement (the supports of its singular points), the incidence
//! graph and its cycle space, automorphism groups, isomorphisms, and the dual graph of the
//! blown-up arrangement used to decide combinatorial stability.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::perm::{Perm, PermGroup};

/// Line count plus the supports of all singular points (0-based, sorted, lexicographic).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Combinatorics {
    n: usize,
    supports: Vec<Vec<usize>>,
    /// `pair[i][j]` is the index of the support containing lines `i` and `j`.
    pair: Vec<Vec<usize>>,
}

/// Serialized form with 1-based line labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinatoricsDoc {
    pub n: usize,
    pub supports: Vec<Vec<usize>>,
}

impl Combinatorics {
    /// Validates and canonicalizes 0-based supports.
    pub fn new(n: usize, supports: Vec<Vec<usize>>) -> Result<Self> {
        let mut supports: Vec<Vec<usize>> = supports
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s
            })
            .collect();
        supports.sort();
        let mut pair = vec![vec![usize::MAX; n]; n];
        for (k, s) in supports.iter().enumerate() {
            if s.len() < 2 {
                return Err(Error::InvalidCombinatorics(format!("support {s:?} has fewer than 2 lines")));
            }
            if s.windows(2).any(|w| w[0] == w[1]) || s.last().is_some_and(|&x| x >= n) {
                return Err(Error::InvalidCombinatorics(format!("support {s:?} is malformed")));
            }
            for (a, &x) in s.iter().enumerate() {
                for &y in &s[a + 1..] {
                    if pair[x][y] != usize::MAX {
                        return Err(Error::InvalidCombinatorics(format!(
                            "lines {} and {} lie in two supports",
                            x + 1,
                            y + 1
                        )));
                    }
                    pair[x][y] = k;
                    pair[y][x] = k;
                }
            }
        }
        for (x, row) in pair.iter().enumerate() {
            for (y, &k) in row.iter().enumerate() {
                if x != y && k == usize::MAX {
                    return Err(Error::InvalidCombinatorics(format!(
                        "lines {} and {} lie in no support",
                        x + 1,
                        y + 1
                    )));
                }
            }
        }
        Ok(Combinatorics { n, supports, pair })
    }

    /// Builds combinatorics from 1-based supports, as printed in the literature.
    pub fn from_one_based(n: usize, supports: &[Vec<usize>]) -> Result<Self> {
        let zero: Vec<Vec<usize>> = supports
            .iter()
            .map(|s| {
                s.iter()
                    .map(|&x| x.checked_sub(1).ok_or_else(|| Error::InvalidCombinatorics("label 0".into())))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Self::new(n, zero)
    }

    pub fn from_doc(doc: &CombinatoricsDoc) -> Result<Self> {
        Self::from_one_based(doc.n, &doc.supports)
    }

    pub fn to_doc(&self) -> CombinatoricsDoc {
        CombinatoricsDoc {
            n: self.n,
            supports: self.supports.iter().map(|s| s.iter().map(|x| x + 1).collect()).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn supports(&self) -> &[Vec<usize>] {
        &self.supports
    }

    /// Index of the support containing two distinct lines.
    pub fn support_of_pair(&self, i: usize, j: usize) -> usize {
        self.pair[i][j]
    }

    /// Indices of the supports through line `l`, in support order.
    pub fn supports_on_line(&self, l: usize) -> Vec<usize> {
        (0..self.supports.len()).filter(|&k| self.supports[k].contains(&l)).collect()
    }

    /// Sorted multiset of the sizes of the supports through line `l`.
    pub fn line_profile(&self, l: usize) -> Vec<usize> {
        let mut p: Vec<usize> =
            self.supports.iter().filter(|s| s.contains(&l)).map(|s| s.len()).collect();
        p.sort_unstable();
        p
    }

    /// Supports with more than two lines.
    pub fn dense_supports(&self) -> Vec<usize> {
        (0..self.supports.len()).filter(|&k| self.supports[k].len() > 2).collect()
    }

    /// `σ·C`, matching [`Arrangement::permuted`]: support `S` of `C` becomes `σ^{-1}(S)`.
    pub fn permuted(&self, sigma: &Perm) -> Result<Combinatorics> {
        if sigma.degree() != self.n {
            return Err(Error::DegreeMismatch { expected: self.n, got: sigma.degree() });
        }
        let inv = sigma.inverse();
        Combinatorics::new(
            self.n,
            self.supports.iter().map(|s| s.iter().map(|&x| inv.image(x)).collect()).collect(),
        )
    }

    /// True when `σ` maps every support onto a support.
    pub fn is_automorphism(&self, sigma: &Perm) -> bool {
        sigma.degree() == self.n
            && self.supports.iter().all(|s| {
                let mut img: Vec<usize> = s.iter().map(|&x| sigma.image(x)).collect();
                img.sort_unstable();
                self.supports.binary_search(&img).is_ok()
            })
    }

    /// Number of edges of the incidence graph.
    pub fn edge_count(&self) -> usize {
        self.supports.iter().map(|s| s.len()).sum()
    }
}

/// Combinatorics of an arrangement.
pub fn comb_from_arrangement(a: &Arrangement) -> Combinatorics {
    let supports = a.singular_points().into_iter().map(|p| p.support).collect();
    Combinatorics::new(a.len(), supports).expect("singular points of an arrangement cover each pair once")
}

/// `σ·C`.
pub fn perm_act(sigma: &Perm, c: &Combinatorics) -> Result<Combinatorics> {
    c.permuted(sigma)
}

/// A vertex of the incidence graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Vertex {
    Point(usize),
    Line(usize),
}

/// An oriented edge `P → L` of the incidence graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub point: usize,
    pub line: usize,
}

/// The bipartite incidence graph between singular points and lines.
#[derive(Clone, Debug)]
pub struct IncidenceGraph {
    pub n_points: usize,
    pub n_lines: usize,
    /// Edges ordered lexicographically by (support, line).
    pub edges: Vec<Edge>,
    pub components: usize,
    /// First Betti number `E - V + components`.
    pub cycle_rank: usize,
    /// Cycle basis as signed edge vectors (`+1` when traversed from point to line).
    pub cycle_basis: Vec<Vec<i64>>,
}

impl IncidenceGraph {
    pub fn is_connected(&self) -> bool {
        self.components == 1
    }

    pub fn vertex_count(&self) -> usize {
        self.n_points + self.n_lines
    }

    /// Signed boundary of an edge vector at every vertex (points first, then lines).
    pub fn boundary(&self, cycle: &[i64]) -> Vec<i64> {
        let mut b = vec![0i64; self.vertex_count()];
        for (e, &c) in self.edges.iter().zip(cycle) {
            b[e.point] -= c;
            b[self.n_points + e.line] += c;
        }
        b
    }
}

/// Edges of the incidence graph ordered lexicographically by (support, line).
pub fn edges_of(c: &Combinatorics) -> Vec<Edge> {
    c.supports
        .iter()
        .enumerate()
        .flat_map(|(p, s)| s.iter().map(move |&l| Edge { point: p, line: l }))
        .collect()
}

/// Incidence graph, its cycle rank and a cycle basis from spanning-forest chords.
pub fn incidence_graph(c: &Combinatorics) -> IncidenceGraph {
    let edges = edges_of(c);
    let np = c.supports.len();
    let v = np + c.n;
    // adjacency: (neighbor, edge index, sign of traversal from this vertex)
    let mut adj: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); v];
    for (k, e) in edges.iter().enumerate() {
        let a = e.point;
        let b = np + e.line;
        adj[a].push((b, k, 1));
        adj[b].push((a, k, -1));
    }
    let mut parent: Vec<Option<(usize, usize, i64)>> = vec![None; v];
    let mut depth = vec![usize::MAX; v];
    let mut tree_edge = vec![false; edges.len()];
    let mut components = 0;
    for root in 0..v {
        if depth[root] != usize::MAX {
            continue;
        }
        components += 1;
        depth[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &(y, k, s) in &adj[x] {
                if depth[y] == usize::MAX {
                    depth[y] = depth[x] + 1;
                    parent[y] = Some((x, k, s));
                    tree_edge[k] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    let mut cycle_basis = Vec::new();
    for (k, e) in edges.iter().enumerate() {
        if tree_edge[k] {
            continue;
        }
        // chord traversed point -> line, then return to the point through the tree
        let mut vec = vec![0i64; edges.len()];
        vec[k] += 1;
        let (mut a, mut b) = (np + e.line, e.point);
        // path from a (line) up and from b (point) up until they meet
        let mut up_a = Vec::new();
        let mut up_b = Vec::new();
        while a != b {
            if depth[a] >= depth[b] {
                let (pa, ke, s) = parent[a].expect("non-root");
                up_a.push((ke, s));
                a = pa;
            } else {
                let (pb, ke, s) = parent[b].expect("non-root");
                up_b.push((ke, s));
                b = pb;
            }
        }
        // walking from the line vertex to the meeting point follows tree edges backwards
        for (ke, s) in up_a {
            vec[ke] -= s;
        }
        // from the meeting point down to the point vertex follows tree edges forwards
        for (ke, s) in up_b {
            vec[ke] += s;
        }
        cycle_basis.push(vec);
    }
    let cycle_rank = edges.len() + components - v;
    IncidenceGraph { n_points: np, n_lines: c.n, edges, components, cycle_rank, cycle_basis }
}

/// Generic backtracking search for structure-preserving bijections, shared by the
/// combinatorial and graph automorphism computations.
struct Search<'a> {
    n: usize,
    inv_a: &'a [Vec<usize>],
    inv_b: &'a [Vec<usize>],
    order: &'a [usize],
    consistent: &'a dyn Fn(&[usize], usize, usize) -> bool,
}

const UNSET: usize = usize::MAX;

impl Search<'_> {
    /// Finds a bijection extending `fixed`, or `None`.
    fn find(&self, fixed: &[(usize, usize)]) -> Option<Vec<usize>> {
        let mut map = vec![UNSET; self.n];
        let mut used = vec![false; self.n];
        for &(v, w) in fixed {
            if self.inv_a[v] != self.inv_b[w] || used[w] || !(self.consistent)(&map, v, w) {
                return None;
            }
            map[v] = w;
            used[w] = true;
        }
        let rest: Vec<usize> = self.order.iter().copied().filter(|&v| map[v] == UNSET).collect();
        if self.rec(&rest, 0, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }

    fn rec(&self, rest: &[usize], k: usize, map: &mut [usize], used: &mut [bool]) -> bool {
        if k == rest.len() {
            return true;
        }
        let v = rest[k];
        for w in 0..self.n {
            if used[w] || self.inv_a[v] != self.inv_b[w] || !(self.consistent)(map, v, w) {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if self.rec(rest, k + 1, map, used) {
                return true;
            }
            map[v] = UNSET;
            used[w] = false;
        }
        false
    }

    /// Automorphism group (`inv_a == inv_b`) through a pointwise-stabilizer chain along
    /// `order`: the order is the product of the basic orbit lengths.
    fn group(&self) -> PermGroup {
        let n = self.n;
        let base = self.order;
        let mut gens: Vec<Perm> = Vec::new();
        let mut order: u128 = 1;
        for k in (0..n).rev() {
            let b = base[k];
            let fixed: Vec<(usize, usize)> = base[..k].iter().map(|&x| (x, x)).collect();
            let level_gens: Vec<Perm> = gens.clone();
            let mut orbit = orbit_of(b, &level_gens);
            let candidates: Vec<usize> = (0..n)
                .filter(|&w| w != b && self.inv_a[b] == self.inv_a[w] && !base[..k].contains(&w))
                .collect();
            let mut local = level_gens;
            for w in candidates {
                if orbit.contains(&w) {
                    continue;
                }
                let mut f = fixed.clone();
                f.push((b, w));
                if let Some(map) = self.find(&f) {
                    let g = Perm::from_images(map).expect("bijection");
                    gens.push(g.clone());
                    local.push(g);
                    orbit = orbit_of(b, &local);
                }
            }
            order *= orbit.len() as u128;
        }
        PermGroup::new(n, gens, order)
    }
}

fn orbit_of(b: usize, gens: &[Perm]) -> Vec<usize> {
    let mut orbit = vec![b];
    let mut k = 0;
    while k < orbit.len() {
        let x = orbit[k];
        for g in gens {
            let y = g.image(x);
            if !orbit.contains(&y) {
                orbit.push(y);
            }
        }
        k += 1;
    }
    orbit
}

fn comb_consistency<'a>(a: &'a Combinatorics, b: &'a Combinatorics) -> impl Fn(&[usize], usize, usize) -> bool + 'a {
    move |map: &[usize], v: usize, w: usize| {
        for u in 0..a.n {
            let mu = map[u];
            if mu == UNSET || u == v {
                continue;
            }
            if mu == w {
                return false;
            }
            let sa = &a.supports[a.pair[u][v]];
            let sb = &b.supports[b.pair[mu][w]];
            if sa.len() != sb.len() {
                return false;
            }
            for &x in sa {
                if x != u && x != v && map[x] != UNSET && !sb.contains(&map[x]) {
                    return false;
                }
            }
        }
        true
    }
}

fn line_order(c: &Combinatorics) -> Vec<usize> {
    let profiles: Vec<Vec<usize>> = (0..c.n).map(|l| c.line_profile(l)).collect();
    let mut order: Vec<usize> = (0..c.n).collect();
    // rarest profile first, then richest in dense points
    order.sort_by_key(|&l| {
        let count = profiles.iter().filter(|p| **p == profiles[l]).count();
        (count, std::cmp::Reverse(profiles[l].iter().sum::<usize>()), l)
    });
    order
}

/// Full combinatorial automorphism group (backtracking over line images with line-profile
/// pruning).
pub fn comb_automorphisms(c: &Combinatorics) -> PermGroup {
    let profiles: Vec<Vec<usize>> = (0..c.n).map(|l| c.line_profile(l)).collect();
    let order = line_order(c);
    let consistent = comb_consistency(c, c);
    let search = Search { n: c.n, inv_a: &profiles, inv_b: &profiles, order: &order, consistent: &consistent };
    search.group()
}

/// A permutation `τ` with `τ(S) ∈ supports(C2)` for every support `S` of `C1`.
pub fn comb_isomorphism(c1: &Combinatorics, c2: &Combinatorics) -> Option<Perm> {
    if c1.n != c2.n || c1.supports.len() != c2.supports.len() {
        return None;
    }
    if c1 == c2 {
        return Some(Perm::identity(c1.n));
    }
    let pa: Vec<Vec<usize>> = (0..c1.n).map(|l| c1.line_profile(l)).collect();
    let pb: Vec<Vec<usize>> = (0..c2.n).map(|l| c2.line_profile(l)).collect();
    let mut sa = pa.clone();
    let mut sb = pb.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return None;
    }
    let order = line_order(c1);
    let consistent = comb_consistency(c1, c2);
    let search = Search { n: c1.n, inv_a: &pa, inv_b: &pb, order: &order, consistent: &consistent };
    search.find(&[]).map(|m| Perm::from_images(m).expect("bijection"))
}

/// A simple undirected graph given by its adjacency matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    pub adj: Vec<Vec<bool>>,
}

impl SimpleGraph {
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.iter().filter(|&&b| b).count()).sum::<usize>() / 2
    }

    fn invariants(&self) -> Vec<Vec<usize>> {
        let deg: Vec<usize> = self.adj.iter().map(|r| r.iter().filter(|&&b| b).count()).collect();
        (0..self.adj.len())
            .map(|v| {
                let mut nd: Vec<usize> = (0..self.adj.len()).filter(|&u| self.adj[v][u]).map(|u| deg[u]).collect();
                nd.sort_unstable();
                let mut inv = vec![deg[v]];
                inv.extend(nd);
                inv
            })
            .collect()
    }

    /// Automorphism group of the uncolored graph.
    pub fn automorphisms(&self) -> PermGroup {
        let n = self.adj.len();
        let inv = self.invariants();
        // breadth-first order from the vertex of rarest invariant keeps partial maps connected
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        let mut starts: Vec<usize> = (0..n).collect();
        starts.sort_by_key(|&v| (inv.iter().filter(|x| **x == inv[v]).count(), v));
        for s in starts {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                order.push(x);
                for (y, &adjacent) in self.adj[x].iter().enumerate() {
                    if adjacent && !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        let adj = &self.adj;
        let consistent = move |map: &[usize], v: usize, w: usize| {
            (0..n).all(|u| map[u] == UNSET || u == v || (map[u] != w && adj[u][v] == adj[map[u]][w]))
        };
        let search = Search { n, inv_a: &inv, inv_b: &inv, order: &order, consistent: &consistent };
        search.group()
    }
}

/// Dual graph of the blown-up arrangement and the stability verdict.
#[derive(Clone, Debug)]
pub struct BlowupReport {
    /// Vertices `0..n` are the lines, the rest are exceptional curves of dense points.
    pub graph: SimpleGraph,
    /// Support index of each exceptional vertex.
    pub exceptional: Vec<usize>,
    pub graph_aut_order: u128,
    pub comb_aut_order: u128,
    /// Every automorphism of the dual graph maps lines to lines.
    pub partition_preserved: bool,
    pub stable: bool,
}

/// Builds the dual graph of the blow-up (lines plus one vertex per dense point; line–line
/// edges for double points, line–exceptional edges for incidences with dense points) and
/// decides whether its automorphism group coincides with the combinatorial one.
pub fn blowup_stable(c: &Combinatorics) -> BlowupReport {
    let dense = c.dense_supports();
    let v = c.n + dense.len();
    let mut adj = vec![vec![false; v]; v];
    for s in &c.supports {
        if s.len() == 2 {
            adj[s[0]][s[1]] = true;
            adj[s[1]][s[0]] = true;
        }
    }
    for (k, &p) in dense.iter().enumerate() {
        for &l in &c.supports[p] {
            adj[l][c.n + k] = true;
            adj[c.n + k][l] = true;
        }
    }
    let graph = SimpleGraph { adj };
    let g_aut = graph.automorphisms();
    let c_aut = comb_automorphisms(c);
    let partition_preserved = g_aut.generators().iter().all(|g| (0..c.n).all(|l| g.image(l) < c.n));
    let restrictions_valid = g_aut
        .generators()
        .iter()
        .all(|g| g.restrict(c.n).is_some_and(|r| c.is_automorphism(&r)));
    let stable = partition_preserved && restrictions_valid && g_aut.order() == c_aut.order();
    BlowupReport {
        graph,
        exceptional: dense,
        graph_aut_order: g_aut.order(),
        comb_aut_order: c_aut.order(),
        partition_preserved,
        stable,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Combinatorics {
        Combinatorics::new(3, vec![vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap()
    }

    fn generic(n: usize) -> Combinatorics {
        let mut s = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                s.push(vec![i, j]);
            }
        }
        Combinatorics::new(n, s).unwrap()
    }

    #[test]
    fn rejects_bad_coverage() {
        assert!(Combinatorics::new(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(Combinatorics::new(3, vec![vec![0, 1, 2], vec![0, 1]]).is_err());
    }

    #[test]
    fn triangle_graph() {
        let g = incidence_graph(&triangle());
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edges.len(), 6);
        assert_eq!(g.cycle_rank, 1);
        assert_eq!(g.cycle_basis.len(), 1);
        assert!(g.boundary(&g.cycle_basis[0]).iter().all(|&x| x == 0));
    }

    #[test]
    fn generic_groups_and_stability() {
        for n in 3..=5 {
            let c = generic(n);
            let fact: u128 = (1..=n as u128).product();
            assert_eq!(comb_automorphisms(&c).order(), fact);
            let b = blowup_stable(&c);
            assert_eq!(b.graph.edge_count(), n * (n - 1) / 2);
            assert!(b.stable);
        }
    }

    #[test]
    fn transposition_fixes_triangle() {
        let t = Perm::from_cycles(3, "(1,2)").unwrap();
        assert_eq!(perm_act(&t, &triangle()).unwrap(), triangle());
        assert!(perm_act(&Perm::identity(4), &triangle()).is_err());
    }
}
