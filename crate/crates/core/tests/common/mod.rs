//! Shared oracles and generators for the integration suites. Everything here
//! is deliberately independent of the library's own algorithms: cycles come
//! from a DFS walk, determinants from cofactor expansion, minors from
//! brute-force dependency scans.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use feynmat::exact_linalg::{rat_int, QMatrix, Rat};
use feynmat::graph::FeynGraph;
use feynmat::poly::{Poly, PolyRing};
use feynmat::symanzik::edge_ring;

/// Tiny deterministic RNG (xorshift64*), so "random" suites are reproducible
/// forever, independent of any crate's generator.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn sign(&mut self) -> i64 {
        if self.next_u64() & 1 == 0 {
            1
        } else {
            -1
        }
    }
}

/// Cofactor-expansion determinant; the independent oracle for Bareiss.
pub fn cofactor_det(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    if n == 0 {
        return rat_int(1);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = rat_int(0);
    for (j, top) in m[0].iter().enumerate() {
        if feynmat::exact_linalg::Ring::is_zero(top) {
            continue;
        }
        let minor: Vec<Vec<Rat>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = top * cofactor_det(&minor);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Rank over F2 by bitmask elimination; the independent oracle for rank
/// comparisons. Entries are reduced mod 2.
pub fn f2_rank(m: &QMatrix) -> usize {
    let mut rows: Vec<u64> = (0..m.nrows())
        .map(|i| {
            let mut bits = 0u64;
            for j in 0..m.ncols() {
                let x = m.at(i, j);
                assert!(x.is_integer(), "f2 rank oracle needs integer entries");
                let two = num_bigint::BigInt::from(2);
                if x.numer() % &two != num_bigint::BigInt::from(0) {
                    bits |= 1 << j;
                }
            }
            bits
        })
        .collect();
    let mut rank = 0;
    for col in 0..m.ncols() {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i] & (1 << col) != 0) else {
            continue;
        };
        rows.swap(rank, p);
        for i in 0..rows.len() {
            if i != rank && rows[i] & (1 << col) != 0 {
                rows[i] ^= rows[rank];
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// All simple cycles of a graph as edge-label sets, by DFS over vertex paths.
/// Self-loops count as one-edge cycles; parallel edges as two-edge cycles.
pub fn simple_cycles(g: &FeynGraph) -> BTreeSet<BTreeSet<String>> {
    let mut cycles = BTreeSet::new();
    let edges = g.edges();
    // adjacency ignoring direction
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); g.vertices().len()];
    for (i, e) in edges.iter().enumerate() {
        if e.tail == e.head {
            cycles.insert([e.id.clone()].into_iter().collect());
            continue;
        }
        adj[e.tail].push((e.head, i));
        adj[e.head].push((e.tail, i));
    }
    // walk simple vertex paths from each start, closing back to the start
    fn dfs(
        adj: &[Vec<(usize, usize)>],
        edges: &[feynmat::graph::Edge],
        start: usize,
        v: usize,
        visited: &mut Vec<usize>,
        used_edges: &mut Vec<usize>,
        cycles: &mut BTreeSet<BTreeSet<String>>,
    ) {
        for &(w, ei) in &adj[v] {
            if used_edges.contains(&ei) {
                continue;
            }
            if w == start && !used_edges.is_empty() {
                let cycle: BTreeSet<String> = used_edges
                    .iter()
                    .chain([&ei])
                    .map(|&k| edges[k].id.clone())
                    .collect();
                cycles.insert(cycle);
                continue;
            }
            if visited.contains(&w) || w < start {
                continue;
            }
            visited.push(w);
            used_edges.push(ei);
            dfs(adj, edges, start, w, visited, used_edges, cycles);
            used_edges.pop();
            visited.pop();
        }
    }
    for start in 0..g.vertices().len() {
        let mut visited = vec![start];
        let mut used = Vec::new();
        dfs(
            &adj,
            edges,
            start,
            start,
            &mut visited,
            &mut used,
            &mut cycles,
        );
    }
    cycles
}

/// Circuits of the minor M / e computed from the circuits of M alone:
/// the minimal nonempty sets among {C \ {e}}.
pub fn contraction_circuits_oracle(
    circuits: &BTreeSet<BTreeSet<String>>,
    e: &str,
) -> BTreeSet<BTreeSet<String>> {
    let stripped: BTreeSet<BTreeSet<String>> = circuits
        .iter()
        .map(|c| c.iter().filter(|x| *x != e).cloned().collect())
        .filter(|c: &BTreeSet<String>| !c.is_empty())
        .collect();
    stripped
        .iter()
        .filter(|c| !stripped.iter().any(|d| *d != **c && d.is_subset(c)))
        .cloned()
        .collect()
}

/// Sum over spanning trees of the complementary edge monomials; the
/// matrix-tree oracle for the first Symanzik polynomial of a graph.
pub fn spanning_tree_psi(g: &FeynGraph) -> Poly {
    let ring = edge_ring(&g.edge_ids());
    let mut out = Poly::zero(&ring);
    for tree in g.spanning_trees().expect("connected fixture") {
        let powers: Vec<(usize, u32)> = (0..g.edges().len())
            .filter(|e| !tree.contains(e))
            .map(|e| (e, 1))
            .collect();
        out.add_assign(&Poly::monomial(&ring, &powers, rat_int(1)));
    }
    out
}

/// Random connected multigraph with `max_edges` edges at most; optional legs.
pub fn random_connected_graph(
    rng: &mut Rng,
    max_edges: usize,
    n_legs: usize,
    allow_self_loops: bool,
) -> FeynGraph {
    let nv = 2 + rng.below(4); // 2..=5 vertices
    let nv = nv.min(max_edges + 1);
    let vertices: Vec<String> = (1..=nv).map(|i| format!("v{i}")).collect();
    let mut edges: Vec<(String, String, String)> = Vec::new();
    // random spanning tree
    for i in 1..nv {
        let j = rng.below(i);
        let (t, h) = if rng.sign() > 0 { (j, i) } else { (i, j) };
        edges.push((
            format!("g{}", edges.len() + 1),
            format!("v{}", t + 1),
            format!("v{}", h + 1),
        ));
    }
    let extra = if max_edges > edges.len() {
        rng.below(max_edges - edges.len() + 1)
    } else {
        0
    };
    for _ in 0..extra {
        let t = rng.below(nv);
        let h = if allow_self_loops && rng.below(8) == 0 {
            t
        } else {
            rng.below(nv)
        };
        edges.push((
            format!("g{}", edges.len() + 1),
            format!("v{}", t + 1),
            format!("v{}", h + 1),
        ));
    }
    let legs: Vec<(String, String, String)> = (0..n_legs)
        .map(|k| {
            let v = rng.below(nv);
            (
                format!("p{}", k + 1),
                format!("v{}", v + 1),
                format!("q{}", k + 1),
            )
        })
        .collect();
    let edge_refs: Vec<(&str, &str, &str)> = edges
        .iter()
        .map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str()))
        .collect();
    let leg_refs: Vec<(&str, &str, &str)> = legs
        .iter()
        .map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str()))
        .collect();
    let vrefs: Vec<&str> = vertices.iter().map(|s| s.as_str()).collect();
    FeynGraph::build(&vrefs, &edge_refs, &leg_refs).expect("generated graph is well formed")
}

/// Random {-1,0,1} matrix with full row rank (retried until it has one).
pub fn random_unit_matrix(rng: &mut Rng, nrows: usize, ncols: usize) -> QMatrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..nrows)
            .map(|_| {
                (0..ncols)
                    .map(|_| match rng.below(3) {
                        0 => 0,
                        1 => 1,
                        _ => -1,
                    })
                    .collect()
            })
            .collect();
        let labels: Vec<String> = (0..ncols).map(|j| format!("m{}", j + 1)).collect();
        let m = QMatrix::from_integer_rows(rows, labels).unwrap();
        if m.rank() == nrows {
            return m;
        }
    }
}

/// Align a polynomial into another ring with the same variable names in a
/// possibly different order.
pub fn realign(p: &Poly, target: &std::sync::Arc<PolyRing>) -> Poly {
    let src = p.ring().clone();
    let map: Vec<usize> = src
        .vars()
        .iter()
        .map(|v| target.index_of(v).expect("variable present in target ring"))
        .collect();
    let mut out = Poly::zero(target);
    for (mono, coeff) in p.terms() {
        let powers: Vec<(usize, u32)> = mono
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (map[i], e))
            .collect();
        out.add_assign(&Poly::monomial(target, &powers, coeff.clone()));
    }
    out
}

/// Momentum expressions expanded against each other into a polynomial over
/// formal pair symbols; used to check dot-product identities symbolically.
pub fn dot_oracle_ring(symbols: &[String]) -> std::sync::Arc<PolyRing> {
    let mut vars = Vec::new();
    for (i, a) in symbols.iter().enumerate() {
        for b in &symbols[i..] {
            vars.push(format!("<{a}.{b}>"));
        }
    }
    PolyRing::new(vars).expect("pair symbols are distinct")
}

pub fn dot_expand(
    u: &feynmat::momentum::MomentumExpr,
    v: &feynmat::momentum::MomentumExpr,
    symbols: &[String],
    ring: &std::sync::Arc<PolyRing>,
) -> Poly {
    let mut out = Poly::zero(ring);
    let index: BTreeMap<String, usize> = symbols
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();
    for (s1, c1) in u.terms() {
        for (s2, c2) in v.terms() {
            let (i, j) = (index[&s1.to_string()], index[&s2.to_string()]);
            let (lo, hi) = (i.min(j), i.max(j));
            let name = format!("<{}.{}>", symbols[lo], symbols[hi]);
            let var = ring.index_of(&name).expect("pair symbol in ring");
            out.add_assign(&Poly::monomial(ring, &[(var, 1)], c1 * c2));
        }
    }
    out
}
