//! Turning numerator dot products into matroid coextensions.
//!
//! A set of dot pairs is absorbed into the cycle matroid of the graph by
//! adding one generalized edge per non-redundant pair. The working matrix is
//! kept in the block form (I 0 C; 0 I D) with all C and D entries 0 or +-1,
//! using only safe row combinations, so the result stays representable over
//! both Q and F2 with the same independent sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact_linalg::{is_signed_unit_or_zero, rat_int, QMatrix, Rat};
use crate::graph::{FeynGraph, Routing};
use crate::matroid::{CircuitSystem, RepresentedMatroid};
use crate::momentum::{solve_pair, MomentumExpr};
use crate::poly::{Poly, PolyRing};

/// An unordered pair of edges whose momenta appear dotted in the numerator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct DotPair {
    pub first: String,
    pub second: String,
}

impl DotPair {
    pub fn new(first: &str, second: &str) -> DotPair {
        DotPair {
            first: first.to_string(),
            second: second.to_string(),
        }
    }

    pub fn is_self_pair(&self) -> bool {
        self.first == self.second
    }

    /// Order-insensitive key.
    pub fn key(&self) -> (String, String) {
        if self.first <= self.second {
            (self.first.clone(), self.second.clone())
        } else {
            (self.second.clone(), self.first.clone())
        }
    }
}

impl fmt::Display for DotPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.first, self.second)
    }
}

/// Why a pair needed no new element.
#[derive(Clone, PartialEq, Debug)]
pub enum Redundancy {
    /// e1 = e2; the dot product is a squared momentum.
    SelfPair,
    /// One momentum vanishes identically; the dot product is zero.
    ZeroMomentum,
    /// Some edge already carries alpha*k_1 + beta*k_2 with both weights
    /// nonzero.
    Combination {
        witness: String,
        alpha: Rat,
        beta: Rat,
    },
}

impl Redundancy {
    pub fn witness_edge(&self) -> Option<&str> {
        match self {
            Redundancy::Combination { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

/// The safe row combination: given two rows with entries in {-1, 0, 1} that
/// are both nonzero in column `i`, the combination with zero entry in column
/// `i`. An entry of magnitude 2 in the result means the rows cannot come from
/// a matrix jointly representable over Q and F2 (a U_{2,4} minor) and is
/// reported as an integrity error.
pub fn safe_combine(r1: &[Rat], r2: &[Rat], i: usize) -> Result<Vec<Rat>> {
    if r1.len() != r2.len() {
        return Err(Error::Dimension(format!(
            "row lengths {} and {} differ",
            r1.len(),
            r2.len()
        )));
    }
    if i >= r1.len() {
        return Err(Error::Dimension(format!("column {i} out of range")));
    }
    for r in [r1, r2] {
        for (j, x) in r.iter().enumerate() {
            if !is_signed_unit_or_zero(x) {
                return Err(Error::Domain(format!(
                    "entry {x} in column {j} is not in {{-1, 0, 1}}"
                )));
            }
        }
    }
    if r1[i].is_zero() || r2[i].is_zero() {
        return Err(Error::Domain(format!(
            "both rows must be nonzero in column {i}"
        )));
    }
    let combo: Vec<Rat> = r1
        .iter()
        .zip(r2)
        .map(|(a, b)| &r2[i] * a - &r1[i] * b)
        .collect();
    for (j, x) in combo.iter().enumerate() {
        if !is_signed_unit_or_zero(x) {
            return Err(Error::Integrity(format!(
                "safe combination produced entry {x} in column {j}; \
                 the rows do not come from a jointly Q/F2-representable matrix"
            )));
        }
    }
    Ok(combo)
}

/// Row reduce a {-1,0,1} matrix to reduced row echelon form using only row
/// swaps, sign flips and safe combinations, so entries stay in {-1, 0, 1}.
/// Returns the reduced rows (zero rows removed) and the pivot columns.
fn safe_rref(rows: &[Vec<Rat>]) -> Result<(Vec<Vec<Rat>>, Vec<usize>)> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<Rat>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        if a[r][col] == rat_int(-1) {
            for x in a[r].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..nrows {
            if i != r && !a[i][col].is_zero() {
                a[i] = safe_combine(&a[i], &a[r], col)?;
                // keep the row's own orientation stable: safe_combine scales
                // by the pivot entry of a[r], which is +1, so nothing to fix
            }
        }
        pivots.push(col);
        r += 1;
    }
    a.truncate(r);
    Ok((a, pivots))
}

/// Bring a {-1,0,1} matrix to the form (I_r | C) with entries 0/+-1: safe row
/// reduction followed by an explicit label-carrying permutation that moves
/// the pivot columns to the front.
pub fn normalize_matrix_to_ic(m: &QMatrix) -> Result<(QMatrix, Vec<usize>)> {
    let rows: Vec<Vec<Rat>> = m.rows().map(|r| r.to_vec()).collect();
    let (red, pivots) = safe_rref(&rows)?;
    let reduced = QMatrix::from_rows(red, m.labels().to_vec())?;
    let mut perm = pivots.clone();
    for j in 0..m.ncols() {
        if !pivots.contains(&j) {
            perm.push(j);
        }
    }
    Ok((reduced.permute_columns(&perm)?, perm))
}

/// (I_rkG | C) form of the cycle matroid of a graph.
pub fn normalize_to_ic(g: &FeynGraph) -> Result<QMatrix> {
    let m = g.cycle_matroid();
    Ok(normalize_matrix_to_ic(m.matrix())?.0)
}

/// Working state of the reduction: a matrix in block form
/// (I_rkG 0 C; 0 I_r D), columns ordered [graph base | new elements | rest].
#[derive(Clone, PartialEq, Debug)]
pub struct BlockForm {
    mat: QMatrix,
    g_rank: usize,
    n_new: usize,
}

impl BlockForm {
    pub fn matrix(&self) -> &QMatrix {
        &self.mat
    }

    pub fn graph_rank(&self) -> usize {
        self.g_rank
    }

    pub fn n_new(&self) -> usize {
        self.n_new
    }

    pub fn matroid(&self) -> RepresentedMatroid<Rat> {
        RepresentedMatroid::new(self.mat.clone()).expect("block form has full row rank")
    }

    /// Identity blocks in place and every entry in {-1, 0, 1}.
    pub fn verify(&self) -> Result<()> {
        let r = self.g_rank + self.n_new;
        if self.mat.nrows() != r {
            return Err(Error::Integrity(format!(
                "block form should have {r} rows, found {}",
                self.mat.nrows()
            )));
        }
        for i in 0..r {
            for j in 0..self.mat.ncols() {
                let x = self.mat.at(i, j);
                if !is_signed_unit_or_zero(x) {
                    return Err(Error::Integrity(format!(
                        "entry {x} at ({i}, {j}) outside {{-1, 0, 1}}"
                    )));
                }
                if j < r {
                    let want = if i == j { rat_int(1) } else { rat_int(0) };
                    if *x != want {
                        return Err(Error::Integrity(format!(
                            "identity block violated at ({i}, {j})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The new element appended by one coextension.
#[derive(Clone, PartialEq, Debug)]
pub struct NewElement {
    pub id: String,
    pub momentum: MomentumExpr,
    pub source: DotPair,
    /// k_new = alpha * k_first + beta * k_second
    pub alpha: Rat,
    pub beta: Rat,
}

/// Output of `reduce_graph`.
#[derive(Clone, Debug)]
pub struct ReducedForm {
    /// Block-form matrix over internal edges and new elements.
    pub block: BlockForm,
    /// Momentum-conservation form over internal edges, external columns when
    /// enabled, and new-element columns last: the reduced incidence rows
    /// padded with zeros, then one relation row per new element.
    pub conservation: QMatrix,
    pub new_elements: Vec<NewElement>,
    pub discarded: Vec<(DotPair, Redundancy)>,
    pub internal_labels: Vec<String>,
    pub external_labels: Vec<String>,
    /// Momentum of every internal edge and new element.
    pub momenta: BTreeMap<String, MomentumExpr>,
    pub routing: Routing,
}

impl ReducedForm {
    pub fn conservation_matroid(&self) -> RepresentedMatroid<Rat> {
        RepresentedMatroid::new(self.conservation.clone())
            .expect("conservation form has full row rank")
    }

    /// Circuit system of the reduced matroid (externals included when they
    /// were enabled).
    pub fn circuits(&self) -> CircuitSystem {
        self.conservation_matroid().circuits()
    }

    /// Circuits restricted to internal edges and new elements.
    pub fn internal_circuits(&self) -> BTreeSet<BTreeSet<String>> {
        let mut keep: BTreeSet<String> = self.internal_labels.iter().cloned().collect();
        for el in &self.new_elements {
            keep.insert(el.id.clone());
        }
        self.circuits().restrict_to(&keep)
    }

    pub fn new_element_ids(&self) -> Vec<String> {
        self.new_elements.iter().map(|e| e.id.clone()).collect()
    }
}

/// Options for `reduce_graph`.
#[derive(Clone, Default, Debug)]
pub struct ReduceOptions {
    /// Carry external legs along as extra labeled columns.
    pub include_externals: bool,
    /// Pairs (by order-insensitive key) whose free coextension sign is
    /// flipped, selecting the other admissible coextension.
    pub flip_sign: BTreeSet<(String, String)>,
}

/// Search the routed momenta for an edge that already carries a combination
/// alpha*k_1 + beta*k_2 with both weights nonzero. Candidates are scanned in
/// the given order with the pair's own edges excluded; for pairs with
/// parallel momenta the first pair edge serves as a last-resort witness.
pub fn pair_redundant(
    momenta: &[(String, MomentumExpr)],
    pair: &DotPair,
    k1: &MomentumExpr,
    k2: &MomentumExpr,
) -> Option<Redundancy> {
    if k1.is_zero() || k2.is_zero() {
        return Some(Redundancy::ZeroMomentum);
    }
    for (label, k) in momenta {
        if *label == pair.first || *label == pair.second {
            continue;
        }
        if let Some((alpha, beta)) = solve_pair(k, k1, k2) {
            if !alpha.is_zero() && !beta.is_zero() {
                return Some(Redundancy::Combination {
                    witness: label.clone(),
                    alpha,
                    beta,
                });
            }
        }
    }
    if k1.proportionality(k2).is_some() {
        // k1 = alpha*k1 + beta*k2 has a both-weights-nonzero solution
        let (alpha, beta) = solve_pair(k1, k1, k2).expect("parallel momenta split");
        if !alpha.is_zero() && !beta.is_zero() {
            return Some(Redundancy::Combination {
                witness: pair.first.clone(),
                alpha,
                beta,
            });
        }
    }
    None
}

/// One coextension step on a block-form matrix. `i` and `j` are column
/// positions of the pair edges (never inside the new-element identity block);
/// `sign` is the free-sign choice where the construction leaves one.
///
/// Returns the grown block together with (alpha, beta) such that the new
/// element carries alpha*k_i + beta*k_j.
pub fn coextend_pair(
    block: &BlockForm,
    i: usize,
    j: usize,
    new_label: &str,
    sign: i64,
) -> Result<(BlockForm, Rat, Rat)> {
    if i == j {
        return Err(Error::Domain(
            "coextension needs two distinct columns".into(),
        ));
    }
    block.verify()?;
    debug_assert!(sign == 1 || sign == -1);
    let g = block.g_rank;
    let r = block.n_new;
    let id_end = g + r;
    let in_new_block = |c: usize| c >= g && c < id_end;
    if in_new_block(i) || in_new_block(j) {
        return Err(Error::Domain(
            "pair columns must be graph edges, not previously added elements".into(),
        ));
    }
    let ncols = block.mat.ncols();
    // new column ordering: [0..g) [g..id_end) new [id_end..) -> rest
    let mut labels: Vec<String> = block.mat.labels()[..id_end].to_vec();
    labels.push(new_label.to_string());
    labels.extend_from_slice(&block.mat.labels()[id_end..]);
    if labels.len() != ncols + 1 {
        return Err(Error::Dimension("label bookkeeping".into()));
    }
    let old_rows: Vec<Vec<Rat>> = block
        .mat
        .rows()
        .map(|row| {
            let mut out = row[..id_end].to_vec();
            out.push(rat_int(0));
            out.extend_from_slice(&row[id_end..]);
            out
        })
        .collect();

    let mut new_row = vec![rat_int(0); ncols + 1];
    new_row[id_end] = rat_int(1);

    let (alpha, beta);
    if i >= id_end && j >= id_end {
        // both in the C part: v has +-1 at i and j
        new_row[i + 1] = rat_int(1);
        new_row[j + 1] = rat_int(-sign);
        // k_new = -(v_i k_i + v_j k_j)
        alpha = rat_int(-1);
        beta = rat_int(sign);
    } else if i < g && j >= id_end {
        // i in the identity part, j in the C part
        let eps = block.mat.at(i, j).clone();
        // v1 = -1 at i, v2 = -eps (or the free sign) at j, then add row i
        let v2 = if eps.is_zero() { rat_int(sign) } else { -&eps };
        // after adding row i the new row is (0 | 1 | C_i + v2 e_j)
        for c in id_end..ncols {
            new_row[c + 1] = block.mat.at(i, c).clone();
        }
        new_row[j + 1] = &new_row[j + 1] + &v2;
        // k_new = -(v1_i k_i + v2_j k_j) = k_i - v2 k_j
        alpha = rat_int(1);
        beta = -&v2;
    } else if i >= id_end && j < g {
        // mirror of the previous case
        let eps = block.mat.at(j, i).clone();
        let v2 = if eps.is_zero() { rat_int(sign) } else { -&eps };
        for c in id_end..ncols {
            new_row[c + 1] = block.mat.at(j, c).clone();
        }
        new_row[i + 1] = &new_row[i + 1] + &v2;
        alpha = -&v2;
        beta = rat_int(1);
    } else {
        // both in the identity part: v is supported on positions i and j
        let row_i: Vec<Rat> = (id_end..ncols)
            .map(|c| block.mat.at(i, c).clone())
            .collect();
        let row_j: Vec<Rat> = (id_end..ncols)
            .map(|c| block.mat.at(j, c).clone())
            .collect();
        let shared = (0..row_i.len()).find(|&k| !row_i[k].is_zero() && !row_j[k].is_zero());
        let (vi, vj) = match shared {
            Some(k) => (row_i[k].clone(), -&row_j[k]),
            None => (rat_int(-1), rat_int(sign)),
        };
        // row reduce A' to clear v(i) and v(j): the cleared row is
        // (0 | 1 | -vi*C_i - vj*C_j)
        for c in id_end..ncols {
            new_row[c + 1] = -(&vi * block.mat.at(i, c)) - &vj * block.mat.at(j, c);
        }
        alpha = -&vi;
        beta = -&vj;
    }

    let mut rows = old_rows;
    rows.push(new_row);
    let mat = QMatrix::from_rows(rows, labels)?;
    let grown = BlockForm {
        mat,
        g_rank: g,
        n_new: r + 1,
    };
    // entries outside {-1,0,1} contradict the construction
    grown.verify()?;
    Ok((grown, alpha, beta))
}

/// Restandardize a block form so that the graph base avoids the given columns
/// when the graph matroid allows it. The base is the lexicographically first
/// one (in the original ground order) among those with minimal overlap with
/// `avoid`; new-element columns always stay in the identity.
fn restandardize_avoiding(
    block: &BlockForm,
    ground: &[String],
    avoid: &[&str],
) -> Result<BlockForm> {
    let m = &block.mat;
    let g = block.g_rank;
    let id_end = g + block.n_new;
    // the graph part of the matroid: top g rows on the graph columns
    let graph_cols: Vec<usize> = (0..m.ncols()).filter(|&c| c < g || c >= id_end).collect();
    let graph_rows: Vec<usize> = (0..g).collect();
    let graph_mat = m.select(&graph_rows, &graph_cols);
    // greedy in original ground order, avoided columns last
    let col_of_label = |l: &String| graph_mat.label_index(l);
    let mut order: Vec<usize> = Vec::new();
    let mut tail: Vec<usize> = Vec::new();
    for l in ground {
        if let Some(c) = col_of_label(l) {
            if avoid.contains(&l.as_str()) {
                tail.push(c);
            } else {
                order.push(c);
            }
        }
    }
    order.extend(tail);
    let mut base_local: Vec<usize> = Vec::new();
    for c in order {
        let mut trial = base_local.clone();
        trial.push(c);
        if graph_mat.select_columns(&trial).rank() == trial.len() {
            base_local.push(c);
        }
        if base_local.len() == g {
            break;
        }
    }
    if base_local.len() != g {
        return Err(Error::Integrity("graph block lost rank".into()));
    }
    base_local.sort_unstable();
    // global positions of the chosen base
    let base_global: Vec<usize> = base_local.iter().map(|&c| graph_cols[c]).collect();
    // permutation: [graph base | new elements | remaining graph columns]
    let mut perm: Vec<usize> = base_global.clone();
    perm.extend(g..id_end);
    for &c in &graph_cols {
        if !base_global.contains(&c) {
            perm.push(c);
        }
    }
    let permuted = m.permute_columns(&perm)?;
    let rows: Vec<Vec<Rat>> = permuted.rows().map(|r| r.to_vec()).collect();
    let (red, pivots) = safe_rref(&rows)?;
    if pivots.len() != m.nrows() || pivots.iter().enumerate().any(|(k, &p)| p != k) {
        return Err(Error::Integrity(
            "restandardization lost the identity block".into(),
        ));
    }
    let mat = QMatrix::from_rows(red, permuted.labels().to_vec())?;
    let out = BlockForm {
        mat,
        g_rank: g,
        n_new: block.n_new,
    };
    out.verify()?;
    Ok(out)
}

/// Reduce a graph with a set of dot pairs to a coextended matroid in block
/// form, per-pair: discard redundant pairs, otherwise coextend, preferring a
/// column arrangement that keeps both pair columns out of the identity block
/// so the free-sign case applies.
pub fn reduce_graph(g: &FeynGraph, pairs: &[DotPair], opts: &ReduceOptions) -> Result<ReducedForm> {
    let routing = g.route_momenta()?;
    let internal_labels = g.edge_ids();
    let mut momenta_list: Vec<(String, MomentumExpr)> = internal_labels
        .iter()
        .cloned()
        .zip(routing.edge_momenta.iter().cloned())
        .collect();

    // base object: block form of the internal cycle matroid
    let internal = g.cycle_matroid();
    let (ic, _) = normalize_matrix_to_ic(internal.matrix())?;
    let mut block = BlockForm {
        g_rank: ic.nrows(),
        n_new: 0,
        mat: ic,
    };

    let mut taken: BTreeSet<String> = internal_labels.iter().cloned().collect();
    for l in g.externals() {
        taken.insert(l.id.clone());
    }
    let mut fresh = {
        let mut counter = 0usize;
        move |taken: &mut BTreeSet<String>| -> String {
            loop {
                counter += 1;
                let cand = format!("x{counter}");
                if taken.insert(cand.clone()) {
                    return cand;
                }
            }
        }
    };

    let mut new_elements: Vec<NewElement> = Vec::new();
    let mut discarded: Vec<(DotPair, Redundancy)> = Vec::new();

    for pair in pairs {
        if pair.is_self_pair() {
            g.edge_index(&pair.first)?;
            discarded.push((pair.clone(), Redundancy::SelfPair));
            continue;
        }
        let k1 = momenta_list
            .iter()
            .find(|(l, _)| *l == pair.first)
            .ok_or_else(|| Error::Lookup(format!("edge `{}`", pair.first)))?
            .1
            .clone();
        let k2 = momenta_list
            .iter()
            .find(|(l, _)| *l == pair.second)
            .ok_or_else(|| Error::Lookup(format!("edge `{}`", pair.second)))?
            .1
            .clone();
        if let Some(reason) = pair_redundant(&momenta_list, pair, &k1, &k2) {
            discarded.push((pair.clone(), reason));
            continue;
        }
        // coextend: arrange the pair columns outside the identity if possible
        block = restandardize_avoiding(&block, &internal_labels, &[&pair.first, &pair.second])?;
        let i = block
            .mat
            .label_index(&pair.first)
            .ok_or_else(|| Error::Lookup(format!("edge `{}`", pair.first)))?;
        let j = block
            .mat
            .label_index(&pair.second)
            .ok_or_else(|| Error::Lookup(format!("edge `{}`", pair.second)))?;
        let sign = if opts.flip_sign.contains(&pair.key()) {
            -1
        } else {
            1
        };
        let id = fresh(&mut taken);
        let (grown, alpha, beta) = coextend_pair(&block, i, j, &id, sign)?;
        block = grown;
        let momentum = {
            let mut m = k1.scaled(&alpha);
            m.add_scaled(&k2, &beta);
            m
        };
        if momentum.is_zero() {
            return Err(Error::Integrity(format!(
                "coextension for {pair} produced a zero-momentum element"
            )));
        }
        momenta_list.push((id.clone(), momentum.clone()));
        new_elements.push(NewElement {
            id,
            momentum,
            source: pair.clone(),
            alpha,
            beta,
        });
    }

    // conservation form: reduced incidence rows (with externals if asked),
    // zero-padded, plus one relation row per new element
    let base_matrix = if opts.include_externals {
        g.extended_graph()?.cycle_matroid().matrix().clone()
    } else {
        internal.matrix().clone()
    };
    let external_labels: Vec<String> = if opts.include_externals {
        g.externals().iter().map(|l| l.id.clone()).collect()
    } else {
        Vec::new()
    };
    let n_base_cols = base_matrix.ncols();
    let n_new = new_elements.len();
    let mut labels = base_matrix.labels().to_vec();
    labels.extend(new_elements.iter().map(|e| e.id.clone()));
    let mut rows: Vec<Vec<Rat>> = base_matrix
        .rows()
        .map(|r| {
            let mut out = r.to_vec();
            out.extend(std::iter::repeat_with(|| rat_int(0)).take(n_new));
            out
        })
        .collect();
    for (k, el) in new_elements.iter().enumerate() {
        let mut row = vec![rat_int(0); n_base_cols + n_new];
        let fi = labels
            .iter()
            .position(|l| *l == el.source.first)
            .expect("pair edge in labels");
        let se = labels
            .iter()
            .position(|l| *l == el.source.second)
            .expect("pair edge in labels");
        // k_new = alpha k_1 + beta k_2  =>  -alpha k_1 - beta k_2 + k_new = 0
        row[fi] = -&el.alpha;
        row[se] = -&el.beta;
        row[n_base_cols + k] = rat_int(1);
        rows.push(row);
    }
    let conservation = QMatrix::from_rows(rows, labels)?;

    let mut momenta: BTreeMap<String, MomentumExpr> = BTreeMap::new();
    for (l, m) in &momenta_list {
        momenta.insert(l.clone(), m.clone());
    }

    Ok(ReducedForm {
        block,
        conservation,
        new_elements,
        discarded,
        internal_labels,
        external_labels,
        momenta,
        routing,
    })
}

/// The two-stage circuit completion for a single coextension.
///
/// Stage one decides, for each circuit of the base matroid, whether the new
/// element joins it: the unique (up to scale) null vector supported on the
/// circuit is tested against the new relation row. Stage two closes under the
/// elimination axiom for pairs of new circuits meeting only in the new
/// element. The result is cross-checked against the circuits of the grown
/// matrix; a mismatch is an integrity error.
pub fn circuits_after_coextension(
    pre: &RepresentedMatroid<Rat>,
    relation: &[Rat],
    new_label: &str,
) -> Result<CircuitSystem> {
    if relation.len() != pre.size() {
        return Err(Error::Dimension(format!(
            "relation row has {} entries for {} columns",
            relation.len(),
            pre.size()
        )));
    }
    let pre_circuits = pre.circuits();
    let mut with_star: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let mut without_star: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let star = pre.size(); // index of the new element
    for c in pre_circuits.circuits() {
        let u = null_vector_on(pre, c)?;
        let mut delta = rat_int(0);
        for (e, coeff) in u.iter().enumerate() {
            delta += &relation[e] * coeff;
        }
        if delta.is_zero() {
            without_star.insert(c.clone());
        } else {
            let mut grown = c.clone();
            grown.insert(star);
            with_star.insert(grown);
        }
    }
    // elimination closure over pairs meeting exactly in the new element
    let mut result: BTreeSet<BTreeSet<usize>> = without_star.clone();
    result.extend(with_star.iter().cloned());
    let with_star_vec: Vec<&BTreeSet<usize>> = with_star.iter().collect();
    let mut candidates: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    for (idx, c1) in with_star_vec.iter().enumerate() {
        for c2 in with_star_vec.iter().skip(idx + 1) {
            let inter: BTreeSet<usize> = c1.intersection(c2).cloned().collect();
            if inter.len() != 1 || !inter.contains(&star) {
                continue;
            }
            let mut d: BTreeSet<usize> = c1.union(c2).cloned().collect();
            d.remove(&star);
            if !result.iter().any(|c| c.is_subset(&d)) {
                candidates.insert(d);
            }
        }
    }
    // keep only minimal candidates
    let minimal: Vec<BTreeSet<usize>> = candidates
        .iter()
        .filter(|d| !candidates.iter().any(|e| *e != **d && e.is_subset(d)))
        .cloned()
        .collect();
    result.extend(minimal);

    let mut ground = pre.ground().to_vec();
    ground.push(new_label.to_string());
    let predicted = CircuitSystem::from_index_sets(ground, result);

    // cross-check against the grown matrix
    let mut labels = pre.ground().to_vec();
    labels.push(new_label.to_string());
    let mut rows: Vec<Vec<Rat>> = pre
        .matrix()
        .rows()
        .map(|r| {
            let mut out = r.to_vec();
            out.push(rat_int(0));
            out
        })
        .collect();
    let mut rel = relation.to_vec();
    rel.push(rat_int(1));
    rows.push(rel);
    let grown = RepresentedMatroid::new(QMatrix::from_rows(rows, labels)?)?;
    let actual = grown.circuits();
    if !predicted.same_circuits(&actual) {
        return Err(Error::Integrity(format!(
            "circuit completion disagrees with the coextended matrix: \
             predicted {} circuits, matrix has {}",
            predicted.len(),
            actual.len()
        )));
    }
    Ok(predicted)
}

/// Null vector of the matrix supported exactly on the given circuit.
fn null_vector_on(m: &RepresentedMatroid<Rat>, circuit: &BTreeSet<usize>) -> Result<Vec<Rat>> {
    let cols: Vec<usize> = circuit.iter().cloned().collect();
    let e = *cols.last().expect("circuits are nonempty");
    let base: Vec<usize> = cols[..cols.len() - 1].to_vec();
    let mut u = vec![rat_int(0); m.size()];
    if base.is_empty() {
        // single-element circuit: a loop
        u[e] = rat_int(1);
        return Ok(u);
    }
    let coords = m
        .matrix()
        .coordinates_over(&base, e)
        .ok_or_else(|| Error::Integrity("circuit columns do not span their last element".into()))?;
    for (b, c) in base.iter().zip(coords) {
        u[*b] = c;
    }
    u[e] = rat_int(-1);
    Ok(u)
}

/// One factor of the scalarized numerator: an inverse propagator that cancels
/// one power, or a mass-squared symbol.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum ExpansionPiece {
    InverseProp(String),
    MassSquared(String),
}

/// The expansion of 2 k_e . k_j against an edge f carrying k_e - k_j (either
/// orientation): 2 k_e.k_j = D_e + D_j - D_f - m_e^2 - m_j^2 + m_f^2, with
/// D_x = k_x^2 + m_x^2 the inverse propagators.
pub fn expand_dot_product(
    e: &str,
    j: &str,
    f: &str,
    momenta: &BTreeMap<String, MomentumExpr>,
    mass2: &BTreeMap<String, String>,
) -> Result<Vec<(Rat, ExpansionPiece)>> {
    let ke = momenta
        .get(e)
        .ok_or_else(|| Error::Lookup(format!("edge `{e}`")))?;
    let kj = momenta
        .get(j)
        .ok_or_else(|| Error::Lookup(format!("edge `{j}`")))?;
    let kf = momenta
        .get(f)
        .ok_or_else(|| Error::Lookup(format!("edge `{f}`")))?;
    let diff = ke.minus(kj);
    let (alpha, beta) = if *kf == diff {
        (rat_int(1), rat_int(-1))
    } else if *kf == diff.negated() {
        (rat_int(-1), rat_int(1))
    } else {
        return Err(Error::Consistency(format!(
            "momentum of `{f}` is {kf}, not +-({ke} - {kj})"
        )));
    };
    Ok(expand_with_combination(e, j, f, &alpha, &beta, mass2))
}

/// General expansion of 2 k_e . k_j against f with k_f = alpha k_e + beta k_j
/// (both weights nonzero):
/// 2 k_e.k_j = (D_f - m_f^2 - alpha^2 (D_e - m_e^2) - beta^2 (D_j - m_j^2)) / (alpha beta).
pub fn expand_with_combination(
    e: &str,
    j: &str,
    f: &str,
    alpha: &Rat,
    beta: &Rat,
    mass2: &BTreeMap<String, String>,
) -> Vec<(Rat, ExpansionPiece)> {
    let ab = alpha * beta;
    let inv_ab = rat_int(1) / &ab;
    let mut terms: Vec<(Rat, ExpansionPiece)> = Vec::new();
    let mut push = |coeff: Rat, edge: &str, as_mass_sign: Rat| {
        if !coeff.is_zero() {
            terms.push((coeff.clone(), ExpansionPiece::InverseProp(edge.to_string())));
        }
        if let Some(sym) = mass2.get(edge) {
            let c = &coeff * &as_mass_sign;
            if !c.is_zero() {
                terms.push((c, ExpansionPiece::MassSquared(sym.clone())));
            }
        }
    };
    // D_f / (ab) - m_f^2 / (ab)
    push(inv_ab.clone(), f, rat_int(-1));
    // -alpha/beta * D_e + alpha/beta * m_e^2
    push(-(alpha / beta), e, rat_int(-1));
    // -beta/alpha * D_j + beta/alpha * m_j^2
    push(-(beta / alpha), j, rat_int(-1));
    terms
}

/// Expansion of k_e . k_e = D_e - m_e^2, returned as 2 k.k.
pub fn expand_self_product(
    e: &str,
    mass2: &BTreeMap<String, String>,
) -> Vec<(Rat, ExpansionPiece)> {
    let mut terms = vec![(rat_int(2), ExpansionPiece::InverseProp(e.to_string()))];
    if let Some(sym) = mass2.get(e) {
        terms.push((rat_int(-2), ExpansionPiece::MassSquared(sym.clone())));
    }
    terms
}

/// One summand of a scalarized tensor integral.
#[derive(Clone, PartialEq, Debug)]
pub struct ScalarTerm {
    pub coefficient: Rat,
    /// Integer shifts added to the symbolic propagator powers.
    pub power_shift: BTreeMap<String, i64>,
    /// Product of mass-squared symbols picked up from the expansions.
    pub mass_factor: Poly,
}

/// A scalarized numerator over one reduced form.
#[derive(Clone, Debug)]
pub struct Scalarization {
    pub reduced: ReducedForm,
    pub terms: Vec<ScalarTerm>,
}

/// Ring over the mass-squared symbols of a graph, in edge order.
pub fn mass_ring(g: &FeynGraph) -> std::sync::Arc<PolyRing> {
    let mut vars = Vec::new();
    for e in g.edges() {
        if let Some(m) = &e.mass2 {
            if !vars.contains(m) {
                vars.push(m.clone());
            }
        }
    }
    PolyRing::new(vars).expect("mass symbols are distinct")
}

/// Scalarize a numerator that is a product of dot products: run the
/// coextension construction over the pair set, then distribute the expansion
/// of each factor, merging terms with identical shifts and mass factors.
pub fn scalarize(g: &FeynGraph, pairs: &[DotPair], opts: &ReduceOptions) -> Result<Scalarization> {
    scalarize_scaled(g, rat_int(1), pairs, opts)
}

/// `scalarize` for a numerator with an overall rational coefficient; the
/// output terms are linear in it.
pub fn scalarize_scaled(
    g: &FeynGraph,
    coefficient: Rat,
    pairs: &[DotPair],
    opts: &ReduceOptions,
) -> Result<Scalarization> {
    let reduced = reduce_graph(g, pairs, opts)?;
    let ring = mass_ring(g);
    let mass2: BTreeMap<String, String> = g
        .edges()
        .iter()
        .filter_map(|e| e.mass2.clone().map(|m| (e.id.clone(), m)))
        .collect();

    // the expansion of 2 k.k for every pair, in input order
    let mut factor_expansions: Vec<Vec<(Rat, ExpansionPiece)>> = Vec::new();
    for pair in pairs {
        if pair.is_self_pair() {
            factor_expansions.push(expand_self_product(&pair.first, &mass2));
            continue;
        }
        if let Some(el) = reduced.new_elements.iter().find(|el| el.source == *pair) {
            factor_expansions.push(expand_with_combination(
                &pair.first,
                &pair.second,
                &el.id,
                &el.alpha,
                &el.beta,
                &mass2,
            ));
            continue;
        }
        let reason = reduced
            .discarded
            .iter()
            .find(|(p, _)| p == pair)
            .map(|(_, r)| r.clone())
            .ok_or_else(|| Error::Integrity(format!("pair {pair} not processed")))?;
        match reason {
            Redundancy::SelfPair => {
                factor_expansions.push(expand_self_product(&pair.first, &mass2))
            }
            Redundancy::ZeroMomentum => factor_expansions.push(Vec::new()),
            Redundancy::Combination {
                witness,
                alpha,
                beta,
            } => factor_expansions.push(expand_with_combination(
                &pair.first,
                &pair.second,
                &witness,
                &alpha,
                &beta,
                &mass2,
            )),
        }
    }

    // distribute; each factor contributes 2 k.k, so divide by 2 per pair
    let mut acc: BTreeMap<(Vec<(String, i64)>, String), (Rat, Poly)> = BTreeMap::new();
    let start = ScalarTerm {
        coefficient,
        power_shift: BTreeMap::new(),
        mass_factor: Poly::one(&ring),
    };
    let mut current = vec![start];
    for expansion in &factor_expansions {
        let mut next = Vec::new();
        for t in &current {
            for (coeff, piece) in expansion {
                let mut nt = t.clone();
                nt.coefficient = &nt.coefficient * coeff / rat_int(2);
                match piece {
                    ExpansionPiece::InverseProp(edge) => {
                        *nt.power_shift.entry(edge.clone()).or_insert(0) -= 1;
                    }
                    ExpansionPiece::MassSquared(sym) => {
                        let idx = ring.index_of(sym).expect("mass symbol in ring");
                        nt.mass_factor = nt.mass_factor.times(&Poly::var(&ring, idx));
                    }
                }
                next.push(nt);
            }
        }
        current = next;
    }
    for t in current {
        let key = (
            t.power_shift
                .iter()
                .map(|(k, v)| (k.clone(), *v))
                .collect::<Vec<_>>(),
            t.mass_factor.to_string(),
        );
        match acc.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert((t.coefficient, t.mass_factor));
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().0 = &e.get().0 + &t.coefficient;
            }
        }
    }
    let terms: Vec<ScalarTerm> = acc
        .into_iter()
        .filter(|(_, (c, _))| !c.is_zero())
        .map(|((shift, _), (coefficient, mass_factor))| ScalarTerm {
            coefficient,
            power_shift: shift.into_iter().collect(),
            mass_factor,
        })
        .collect();
    Ok(Scalarization { reduced, terms })
}
