//! First and second Symanzik polynomials of represented matroids, by
//! independent methods that are cross-validated in the test suite.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact_linalg::{rat, rat_int, Rat};
use crate::graph::FeynGraph;
use crate::matroid::RepresentedMatroid;
use crate::poly::{poly_det, Poly, PolyRing};

/// Polynomial ring over the edge variables, in ground-set order.
pub fn edge_ring(ground: &[String]) -> Arc<PolyRing> {
    PolyRing::new(ground.to_vec()).expect("ground labels are distinct")
}

/// Name of the dot-product symbol for legs i and j (0-based in, 1-based out).
pub fn dot_symbol(i: usize, j: usize) -> String {
    let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
    if hi < 9 {
        format!("s{}{}", lo + 1, hi + 1)
    } else {
        format!("s{}_{}", lo + 1, hi + 1)
    }
}

/// Ring over internal edge variables followed by the dot symbols s_{ij}.
pub fn phi_ring(internal: &[String], n_legs: usize) -> Arc<PolyRing> {
    let mut vars = internal.to_vec();
    for i in 0..n_legs {
        for j in i..n_legs {
            vars.push(dot_symbol(i, j));
        }
    }
    PolyRing::new(vars).expect("edge labels and dot symbols are distinct")
}

/// First Symanzik polynomial as the block determinant
/// det [[Lambda, B^T], [-B, 0]] with Lambda = diag(a_e).
pub fn psi_block_det(m: &RepresentedMatroid<Rat>) -> Result<Poly> {
    let ring = edge_ring(m.ground());
    let e = m.size();
    let r = m.rank();
    if m.matrix().rank() != r {
        return Err(Error::State("representation is rank deficient".into()));
    }
    let n = e + r;
    let mut grid = vec![vec![Poly::zero(&ring); n]; n];
    for (i, row) in grid.iter_mut().enumerate().take(e) {
        row[i] = Poly::var(&ring, i);
    }
    for i in 0..e {
        for j in 0..r {
            // B^T block
            grid[i][e + j] = Poly::constant(&ring, m.matrix().at(j, i).clone());
        }
    }
    for i in 0..r {
        for j in 0..e {
            grid[e + i][j] = Poly::constant(&ring, -m.matrix().at(i, j));
        }
    }
    Ok(poly_det(&ring, grid))
}

/// First Symanzik polynomial as the weighted base expansion
/// sum over bases of det^2 * prod_{e not in base} a_e.
pub fn psi_base_expansion(m: &RepresentedMatroid<Rat>) -> Poly {
    let ring = edge_ring(m.ground());
    let mut out = Poly::zero(&ring);
    for (base, det) in m.base_dets() {
        let powers: Vec<(usize, u32)> = (0..m.size())
            .filter(|j| base.binary_search(j).is_err())
            .map(|j| (j, 1))
            .collect();
        out.add_assign(&Poly::monomial(&ring, &powers, &det * &det));
    }
    out
}

/// First Symanzik polynomial as the Gram determinant det(N^T Lambda N) where
/// the columns of N are the fundamental circuit vectors of the
/// lexicographically first base: for each non-base element its coordinates
/// over the base, with -1 in its own slot.
///
/// The fundamental basis is rescaled (one vector carries the base minor of
/// the representation) so that its Pluecker coordinates match those of the
/// representing matrix; this keeps the squared-minor weights aligned with the
/// base expansion even when the base minor is not +-1. For totally
/// unimodular representations the factor is 1 and the construction is the
/// plain circuit Gram matrix.
pub fn psi_circuit_gram(m: &RepresentedMatroid<Rat>) -> Result<Poly> {
    let ring = edge_ring(m.ground());
    let (std_m, perm) = m.standardize();
    let r = std_m.rank();
    let n = std_m.size();
    let loops = n - r;
    if loops == 0 {
        return Ok(Poly::one(&ring));
    }
    let base_cols: Vec<usize> = {
        let mut b = perm[..r].to_vec();
        b.sort_unstable();
        b
    };
    let rows: Vec<usize> = (0..r).collect();
    let base_minor = m.matrix().select(&rows, &base_cols).det()?;
    // null vectors in original ground indexing
    let mut null_vectors: Vec<Vec<Rat>> = Vec::with_capacity(loops);
    for k in 0..loops {
        let mut u = vec![rat_int(0); n];
        for i in 0..r {
            u[perm[i]] = std_m.matrix().at(i, r + k).clone();
        }
        u[perm[r + k]] = rat_int(-1);
        null_vectors.push(u);
    }
    let mut gram = vec![vec![Poly::zero(&ring); loops]; loops];
    for i in 0..loops {
        for j in i..loops {
            let mut entry = Poly::zero(&ring);
            for e in 0..n {
                let c = &null_vectors[i][e] * &null_vectors[j][e];
                if !num_traits::Zero::is_zero(&c) {
                    entry.add_assign(&Poly::monomial(&ring, &[(e, 1)], c));
                }
            }
            gram[i][j] = entry.clone();
            gram[j][i] = entry;
        }
    }
    Ok(poly_det(&ring, gram).scaled(&(&base_minor * &base_minor)))
}

/// Table of external dot products s_{ij} = q_i . q_j together with the
/// momentum-conservation substitutions used to push every polynomial into a
/// fixed basis of invariants.
#[derive(Clone, PartialEq, Debug)]
pub struct DotTable {
    legs: Vec<String>,
    subst: BTreeMap<(usize, usize), Vec<((usize, usize), Rat)>>,
}

impl DotTable {
    /// Keep all s_{ij} as independent symbols.
    pub fn raw(legs: Vec<String>) -> DotTable {
        DotTable {
            legs,
            subst: BTreeMap::new(),
        }
    }

    /// Use q_K = -(q_1 + .. + q_{K-1}) to eliminate every s_{iK}.
    /// Works for any number of legs.
    pub fn eliminate_last(legs: Vec<String>) -> DotTable {
        let k = legs.len();
        let mut subst = BTreeMap::new();
        if k >= 1 {
            let last = k - 1;
            for i in 0..last {
                // q_i . q_K = -sum_j q_i . q_j (j < K)
                let combo: Vec<((usize, usize), Rat)> = (0..last)
                    .map(|j| ((i.min(j), i.max(j)), rat_int(-1)))
                    .collect();
                subst.insert((i, last), combo);
            }
            // q_K . q_K = sum_{i,j < K} q_i . q_j
            let mut combo = Vec::new();
            for i in 0..last {
                combo.push(((i, i), rat_int(1)));
                for j in i + 1..last {
                    combo.push(((i, j), rat_int(2)));
                }
            }
            subst.insert((last, last), combo);
        }
        DotTable { legs, subst }
    }

    /// Express every cross product through the diagonal invariants q_i^2.
    /// Only possible for 2 or 3 legs, where the diagonal is a basis.
    pub fn diagonal(legs: Vec<String>) -> Result<DotTable> {
        let mut subst = BTreeMap::new();
        match legs.len() {
            2 => {
                // q2 = -q1
                subst.insert((0, 1), vec![((0, 0), rat_int(-1))]);
                subst.insert((1, 1), vec![((0, 0), rat_int(1))]);
            }
            3 => {
                // 2 q_i.q_j = q_k^2 - q_i^2 - q_j^2 for {i,j,k} = {1,2,3}
                let half = rat(1, 2);
                let m_half = rat(-1, 2);
                subst.insert(
                    (0, 1),
                    vec![
                        ((2, 2), half.clone()),
                        ((0, 0), m_half.clone()),
                        ((1, 1), m_half.clone()),
                    ],
                );
                subst.insert(
                    (0, 2),
                    vec![
                        ((1, 1), half.clone()),
                        ((0, 0), m_half.clone()),
                        ((2, 2), m_half.clone()),
                    ],
                );
                subst.insert(
                    (1, 2),
                    vec![((0, 0), half), ((1, 1), m_half.clone()), ((2, 2), m_half)],
                );
            }
            n => {
                return Err(Error::Domain(format!(
                    "diagonal dot basis needs 2 or 3 legs, got {n}"
                )))
            }
        }
        Ok(DotTable { legs, subst })
    }

    /// Diagonal basis when possible, otherwise eliminate the last leg.
    pub fn auto(legs: Vec<String>) -> DotTable {
        match legs.len() {
            2 | 3 => DotTable::diagonal(legs).expect("2 or 3 legs"),
            _ => DotTable::eliminate_last(legs),
        }
    }

    pub fn legs(&self) -> &[String] {
        &self.legs
    }

    pub fn n_legs(&self) -> usize {
        self.legs.len()
    }

    /// Apply the conservation substitutions to a polynomial living in a ring
    /// that contains the s_{ij} variables.
    pub fn reduce(&self, p: &Poly) -> Poly {
        let ring = p.ring().clone();
        let mut out = p.clone();
        for ((i, j), combo) in &self.subst {
            let Some(idx) = ring.index_of(&dot_symbol(*i, *j)) else {
                continue;
            };
            let mut replacement = Poly::zero(&ring);
            for ((a, b), c) in combo {
                let target = ring
                    .index_of(&dot_symbol(*a, *b))
                    .expect("basis dot symbol present in ring");
                replacement.add_assign(&Poly::monomial(&ring, &[(target, 1)], c.clone()));
            }
            out = out.substitute(idx, &replacement);
        }
        out
    }
}

/// Global sign for the quadratic-in-momenta extraction, fixed once by
/// calibration against the dunce's cap golden value and guarded by the
/// 2-forest oracle.
const PHI_SIGN: i64 = -1;

/// An extended representation: internal columns plus one labeled column per
/// external leg.
pub struct ExtendedRep<'a> {
    pub matroid: &'a RepresentedMatroid<Rat>,
    /// Internal edge labels, in the order their variables should appear.
    pub internal: Vec<String>,
    /// (column label, leg index) for each external column.
    pub legs: Vec<(String, usize)>,
}

/// Second Symanzik polynomial from an extended representation: the terms of
/// the extended first Symanzik polynomial quadratic in the external momenta.
///
/// Concretely: every base of the extended matroid containing exactly two
/// external columns i, j contributes sign * weight * s_{ij} times the product
/// of the internal edge variables outside the base.
pub fn phi_second_rep(ext: &ExtendedRep, dots: &DotTable) -> Result<Poly> {
    if ext.legs.len() < 2 {
        return Err(Error::Domain(format!(
            "second Symanzik polynomial needs at least 2 external legs, got {}",
            ext.legs.len()
        )));
    }
    let m = ext.matroid;
    let ring = phi_ring(&ext.internal, dots.n_legs());
    let col_of = |label: &String| -> Result<usize> {
        m.matrix()
            .label_index(label)
            .ok_or_else(|| Error::Lookup(format!("column `{label}`")))
    };
    let mut internal_cols = Vec::new();
    for l in &ext.internal {
        internal_cols.push(col_of(l)?);
    }
    let mut leg_of_col: BTreeMap<usize, usize> = BTreeMap::new();
    for (label, leg) in &ext.legs {
        leg_of_col.insert(col_of(label)?, *leg);
    }
    let sign = rat_int(PHI_SIGN);
    let mut out = Poly::zero(&ring);
    for (base, det) in m.base_dets() {
        let ext_in_base: Vec<usize> = base
            .iter()
            .filter_map(|c| leg_of_col.get(c).copied())
            .collect();
        if ext_in_base.len() != 2 {
            continue;
        }
        let (li, lj) = (ext_in_base[0], ext_in_base[1]);
        let s_idx = ring
            .index_of(&dot_symbol(li, lj))
            .expect("dot symbol in ring");
        let mut powers = vec![(s_idx, 1)];
        for (pos, &c) in internal_cols.iter().enumerate() {
            if base.binary_search(&c).is_err() {
                powers.push((pos, 1));
            }
        }
        out.add_assign(&Poly::monomial(&ring, &powers, &sign * &det * &det));
    }
    Ok(dots.reduce(&out))
}

/// Second Symanzik polynomial of a graph with external legs: the legs become
/// edges to one new vertex, and the extraction above runs on the cycle
/// matroid of that extended graph.
pub fn phi_second_graph(g: &FeynGraph, dots: &DotTable) -> Result<Poly> {
    if g.externals().len() < 2 {
        return Err(Error::Domain(format!(
            "second Symanzik polynomial needs at least 2 external legs, got {}",
            g.externals().len()
        )));
    }
    let ext_graph = g.extended_graph()?;
    let matroid = ext_graph.cycle_matroid();
    let ext = ExtendedRep {
        matroid: &matroid,
        internal: g.edge_ids(),
        legs: g
            .externals()
            .iter()
            .enumerate()
            .map(|(i, l)| (l.id.clone(), i))
            .collect(),
    };
    phi_second_rep(&ext, dots)
}

/// Independent oracle for the second Symanzik polynomial of a graph: a sum
/// over spanning 2-forests of the squared momentum entering one side of the
/// bipartition times the complementary edge variables. The side with fewer
/// legs is used; ties pick the side holding the lowest-indexed leg.
pub fn phi_2forest_oracle(g: &FeynGraph, dots: &DotTable) -> Result<Poly> {
    if g.externals().len() < 2 {
        return Err(Error::Domain(format!(
            "second Symanzik oracle needs at least 2 external legs, got {}",
            g.externals().len()
        )));
    }
    let ring = phi_ring(&g.edge_ids(), dots.n_legs());
    let mut out = Poly::zero(&ring);
    for forest in g.two_forests()? {
        let legs_in = |part: &std::collections::BTreeSet<usize>| -> Vec<usize> {
            g.externals()
                .iter()
                .enumerate()
                .filter(|(_, l)| part.contains(&l.vertex))
                .map(|(i, _)| i)
                .collect()
        };
        let (l0, l1) = (legs_in(&forest.parts.0), legs_in(&forest.parts.1));
        let side = if l0.len() < l1.len() {
            l0
        } else if l1.len() < l0.len() {
            l1
        } else if l0.contains(&l0.iter().chain(l1.iter()).min().copied().unwrap_or(0)) {
            l0
        } else {
            l1
        };
        let complement: Vec<(usize, u32)> = (0..g.edges().len())
            .filter(|e| !forest.edges.contains(e))
            .map(|e| (e, 1))
            .collect();
        // (sum of side momenta)^2 expanded into s symbols
        for (pos, &i) in side.iter().enumerate() {
            for &j in &side[pos..] {
                let coeff = if i == j { rat_int(1) } else { rat_int(2) };
                let s_idx = ring.index_of(&dot_symbol(i, j)).expect("dot symbol");
                let mut powers = complement.clone();
                powers.push((s_idx, 1));
                out.add_assign(&Poly::monomial(&ring, &powers, coeff));
            }
        }
    }
    Ok(dots.reduce(&out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FeynGraph;

    fn dunce_cap() -> FeynGraph {
        FeynGraph::build(
            &["v1", "v2", "v3"],
            &[
                ("a", "v1", "v3"),
                ("b", "v1", "v2"),
                ("c", "v3", "v2"),
                ("d", "v3", "v2"),
            ],
            &[("e1", "v1", "q1"), ("e2", "v2", "q2"), ("e3", "v3", "q3")],
        )
        .unwrap()
    }

    fn triangle() -> FeynGraph {
        FeynGraph::build(
            &["v1", "v2", "v3"],
            &[("a", "v1", "v2"), ("b", "v2", "v3"), ("c", "v3", "v1")],
            &[],
        )
        .unwrap()
    }

    fn bubble() -> FeynGraph {
        FeynGraph::build(
            &["v1", "v2"],
            &[("a", "v1", "v2"), ("b", "v1", "v2")],
            &[("e1", "v1", "q1"), ("e2", "v2", "q2")],
        )
        .unwrap()
    }

    /// (a+b)(c+d) + cd in the ring over a, b, c, d.
    fn dunce_cap_psi(ring: &Arc<PolyRing>) -> Poly {
        let v = |i| Poly::var(ring, i);
        v(0).plus(&v(1))
            .times(&v(2).plus(&v(3)))
            .plus(&v(2).times(&v(3)))
    }

    #[test]
    fn dunce_cap_first_symanzik_three_ways() {
        let m = dunce_cap().cycle_matroid();
        let expansion = psi_base_expansion(&m);
        let want = dunce_cap_psi(expansion.ring());
        assert_eq!(expansion, want);
        assert_eq!(expansion.num_terms(), 5);
        assert_eq!(psi_block_det(&m).unwrap(), want);
        assert_eq!(psi_circuit_gram(&m).unwrap(), want);
    }

    #[test]
    fn dunce_cap_gram_matrix_is_the_displayed_one() {
        // with base {a, b}, the two fundamental circuit vectors give
        // det [[a+b+c, a+b], [a+b, a+b+d]]
        let m = dunce_cap().cycle_matroid();
        let (std_m, perm) = m.standardize();
        assert_eq!(perm, vec![0, 1, 2, 3]);
        assert_eq!(std_m.rank(), 2);
        let g = psi_circuit_gram(&m).unwrap();
        assert_eq!(g, dunce_cap_psi(g.ring()));
    }

    #[test]
    fn triangle_and_bubble_psi() {
        let tri = triangle().cycle_matroid();
        let p = psi_base_expansion(&tri);
        assert_eq!(p.to_string(), "a + b + c");
        assert_eq!(psi_block_det(&tri).unwrap(), p);
        assert_eq!(psi_circuit_gram(&tri).unwrap(), p);

        let bub = bubble().cycle_matroid();
        assert_eq!(psi_base_expansion(&bub).to_string(), "a + b");
    }

    #[test]
    fn zero_loop_psi_is_one() {
        let path = FeynGraph::build(
            &["v1", "v2", "v3"],
            &[("a", "v1", "v2"), ("b", "v2", "v3")],
            &[],
        )
        .unwrap()
        .cycle_matroid();
        assert_eq!(psi_base_expansion(&path).to_string(), "1");
        assert_eq!(psi_block_det(&path).unwrap().to_string(), "1");
        assert_eq!(psi_circuit_gram(&path).unwrap().to_string(), "1");
    }

    #[test]
    fn dunce_cap_second_symanzik_golden() {
        let g = dunce_cap();
        let dots = DotTable::diagonal(vec!["q1".into(), "q2".into(), "q3".into()]).unwrap();
        let phi = phi_second_graph(&g, &dots).unwrap();
        // s11*a*b*(c+d) + s22*b*c*d + s33*a*c*d
        let ring = phi.ring().clone();
        let idx = |name: &str| ring.index_of(name).unwrap();
        let mono = |edges: &[&str], s: &str| {
            let mut powers: Vec<(usize, u32)> = edges.iter().map(|e| (idx(e), 1)).collect();
            powers.push((idx(s), 1));
            Poly::monomial(&ring, &powers, rat_int(1))
        };
        let want = mono(&["a", "b", "c"], "s11")
            .plus(&mono(&["a", "b", "d"], "s11"))
            .plus(&mono(&["b", "c", "d"], "s22"))
            .plus(&mono(&["a", "c", "d"], "s33"));
        assert_eq!(phi, want);
        let oracle = phi_2forest_oracle(&g, &dots).unwrap();
        assert_eq!(phi, oracle);
    }

    #[test]
    fn bubble_second_symanzik() {
        let g = bubble();
        let dots = DotTable::diagonal(vec!["q1".into(), "q2".into()]).unwrap();
        let phi = phi_second_graph(&g, &dots).unwrap();
        assert_eq!(phi.to_string(), "a*b*s11");
        assert_eq!(phi, phi_2forest_oracle(&g, &dots).unwrap());
    }

    #[test]
    fn single_external_is_a_domain_error() {
        let g = FeynGraph::build(
            &["v1", "v2"],
            &[("a", "v1", "v2"), ("b", "v1", "v2")],
            &[("e1", "v1", "q1")],
        )
        .unwrap();
        let dots = DotTable::raw(vec!["q1".into()]);
        assert!(matches!(phi_second_graph(&g, &dots), Err(Error::Domain(_))));
    }

    #[test]
    fn eliminate_last_agrees_with_diagonal_for_three_legs() {
        let g = dunce_cap();
        let d1 = DotTable::diagonal(vec!["q1".into(), "q2".into(), "q3".into()]).unwrap();
        let d2 = DotTable::eliminate_last(vec!["q1".into(), "q2".into(), "q3".into()]);
        // both reductions must agree with their own oracle
        assert_eq!(
            phi_second_graph(&g, &d1).unwrap(),
            phi_2forest_oracle(&g, &d1).unwrap()
        );
        assert_eq!(
            phi_second_graph(&g, &d2).unwrap(),
            phi_2forest_oracle(&g, &d2).unwrap()
        );
    }

    #[test]
    fn psi_is_homogeneous_of_loop_degree() {
        for g in [dunce_cap(), triangle(), bubble()] {
            let m = g.cycle_matroid();
            let p = psi_base_expansion(&m);
            let loops = (m.size() - m.rank()) as u32;
            assert!(p.is_homogeneous_of_degree(loops));
        }
    }
}
