//! Matroids as circuit systems and as represented matroids.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::exact_linalg::{
    int_sub_det, is_signed_unit_or_zero, rat_int, ExactMatrix, Field, Gf2, QMatrix, Rat, Ring,
};
use crate::util::combinations;

/// A matroid presented by its ground set and its circuits.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CircuitSystem {
    ground: Vec<String>,
    circuits: BTreeSet<BTreeSet<usize>>,
}

/// Which circuit axiom failed, with the witnessing sets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CircuitViolation {
    /// Axiom (1): the empty set is not a circuit.
    EmptyCircuit,
    /// Axiom (2): no circuit properly contains another.
    Containment {
        inner: BTreeSet<String>,
        outer: BTreeSet<String>,
    },
    /// Axiom (3): elimination of a shared element must leave a circuit.
    Elimination {
        c1: BTreeSet<String>,
        c2: BTreeSet<String>,
        shared: String,
    },
}

impl CircuitViolation {
    pub fn axiom(&self) -> u8 {
        match self {
            CircuitViolation::EmptyCircuit => 1,
            CircuitViolation::Containment { .. } => 2,
            CircuitViolation::Elimination { .. } => 3,
        }
    }
}

impl fmt::Display for CircuitViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CircuitViolation::EmptyCircuit => write!(f, "axiom 1: empty circuit"),
            CircuitViolation::Containment { inner, outer } => write!(
                f,
                "axiom 2: {{{}}} contained in {{{}}}",
                inner.iter().cloned().collect::<Vec<_>>().join(","),
                outer.iter().cloned().collect::<Vec<_>>().join(",")
            ),
            CircuitViolation::Elimination { c1, c2, shared } => write!(
                f,
                "axiom 3: no circuit inside ({{{}}} u {{{}}}) \\ {}",
                c1.iter().cloned().collect::<Vec<_>>().join(","),
                c2.iter().cloned().collect::<Vec<_>>().join(","),
                shared
            ),
        }
    }
}

impl CircuitSystem {
    pub fn new(ground: Vec<String>, circuits: Vec<Vec<String>>) -> Result<CircuitSystem> {
        let mut sets = BTreeSet::new();
        for c in circuits {
            let mut set = BTreeSet::new();
            for label in c {
                let idx = ground
                    .iter()
                    .position(|g| *g == label)
                    .ok_or_else(|| Error::Lookup(format!("circuit element `{label}`")))?;
                set.insert(idx);
            }
            sets.insert(set);
        }
        Ok(CircuitSystem {
            ground,
            circuits: sets,
        })
    }

    pub fn from_index_sets(ground: Vec<String>, circuits: BTreeSet<BTreeSet<usize>>) -> Self {
        CircuitSystem { ground, circuits }
    }

    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    pub fn circuits(&self) -> &BTreeSet<BTreeSet<usize>> {
        &self.circuits
    }

    pub fn len(&self) -> usize {
        self.circuits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circuits.is_empty()
    }

    /// Circuits as label sets, the representation-independent view.
    pub fn label_sets(&self) -> BTreeSet<BTreeSet<String>> {
        self.circuits
            .iter()
            .map(|c| c.iter().map(|&i| self.ground[i].clone()).collect())
            .collect()
    }

    /// Same circuits as label sets, regardless of ground ordering.
    pub fn same_circuits(&self, other: &CircuitSystem) -> bool {
        self.label_sets() == other.label_sets()
    }

    /// Restriction to the elements with the given labels.
    pub fn restrict_to(&self, labels: &BTreeSet<String>) -> BTreeSet<BTreeSet<String>> {
        self.label_sets()
            .into_iter()
            .filter(|c| c.iter().all(|e| labels.contains(e)))
            .collect()
    }

    /// Check the three circuit axioms; `None` means the system is a matroid.
    pub fn validate(&self) -> Option<CircuitViolation> {
        let lbl = |c: &BTreeSet<usize>| -> BTreeSet<String> {
            c.iter().map(|&i| self.ground[i].clone()).collect()
        };
        for c in &self.circuits {
            if c.is_empty() {
                return Some(CircuitViolation::EmptyCircuit);
            }
        }
        let all: Vec<&BTreeSet<usize>> = self.circuits.iter().collect();
        for (i, c1) in all.iter().enumerate() {
            for c2 in all.iter().skip(i + 1) {
                if c1.is_subset(c2) || c2.is_subset(c1) {
                    let (inner, outer) = if c1.is_subset(c2) { (c1, c2) } else { (c2, c1) };
                    return Some(CircuitViolation::Containment {
                        inner: lbl(inner),
                        outer: lbl(outer),
                    });
                }
            }
        }
        for c1 in &all {
            for c2 in &all {
                if c1 == c2 {
                    continue;
                }
                for &e in c1.intersection(c2) {
                    let mut union: BTreeSet<usize> = c1.union(c2).cloned().collect();
                    union.remove(&e);
                    let ok = self.circuits.iter().any(|c3| c3.is_subset(&union));
                    if !ok {
                        return Some(CircuitViolation::Elimination {
                            c1: lbl(c1),
                            c2: lbl(c2),
                            shared: self.ground[e].clone(),
                        });
                    }
                }
            }
        }
        None
    }
}

impl fmt::Display for CircuitSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.circuits {
            let names: Vec<&str> = c.iter().map(|&i| self.ground[i].as_str()).collect();
            writeln!(f, "{{{}}}", names.join(", "))?;
        }
        Ok(())
    }
}

/// Scalars usable as represented-matroid entries. The optional exact-integer
/// view switches the subset-determinant enumeration to a checked i128 fast
/// path; prime-field scalars never take it.
pub trait MatroidScalar: Field {
    fn as_exact_int(&self) -> Option<i128>;
}

impl MatroidScalar for Rat {
    fn as_exact_int(&self) -> Option<i128> {
        if self.is_integer() {
            i128::try_from(self.numer().clone()).ok()
        } else {
            None
        }
    }
}

impl<const P: u32> MatroidScalar for crate::exact_linalg::Gf<P> {
    fn as_exact_int(&self) -> Option<i128> {
        None
    }
}

/// Whether a representing matrix is in standard (I_r | D) form.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MatroidForm {
    Standard,
    FreeForm,
}

/// A matroid given by a full-row-rank representing matrix over a field.
#[derive(Clone, PartialEq, Debug)]
pub struct RepresentedMatroid<K = Rat> {
    mat: ExactMatrix<K>,
}

/// A base together with its squared-subdeterminant weight.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightedBase {
    pub base: BTreeSet<usize>,
    pub weight: Rat,
}

impl<K: MatroidScalar> RepresentedMatroid<K> {
    /// Wrap a matrix that already has full row rank.
    pub fn new(mat: ExactMatrix<K>) -> Result<Self> {
        if mat.rank() != mat.nrows() {
            return Err(Error::State(format!(
                "matrix has rank {} but {} rows; row reduce first",
                mat.rank(),
                mat.nrows()
            )));
        }
        Ok(RepresentedMatroid { mat })
    }

    /// Row reduce and drop zero rows, then wrap.
    pub fn from_row_space(mat: &ExactMatrix<K>) -> Self {
        let (red, _) = mat.rref();
        RepresentedMatroid { mat: red }
    }

    pub fn matrix(&self) -> &ExactMatrix<K> {
        &self.mat
    }

    pub fn rank(&self) -> usize {
        self.mat.nrows()
    }

    pub fn size(&self) -> usize {
        self.mat.ncols()
    }

    pub fn ground(&self) -> &[String] {
        self.mat.labels()
    }

    pub fn form(&self) -> MatroidForm {
        let r = self.rank();
        if self.size() < r {
            return MatroidForm::FreeForm;
        }
        for i in 0..r {
            for j in 0..r {
                let want = if i == j { K::one() } else { K::zero() };
                if self.mat.at(i, j) != &want {
                    return MatroidForm::FreeForm;
                }
            }
        }
        MatroidForm::Standard
    }

    fn int_grid(&self) -> Option<Vec<Vec<i128>>> {
        let mut grid = Vec::with_capacity(self.rank());
        for i in 0..self.rank() {
            let mut row = Vec::with_capacity(self.size());
            for j in 0..self.size() {
                row.push(self.mat.at(i, j).as_exact_int()?);
            }
            grid.push(row);
        }
        Some(grid)
    }

    /// All bases (independent r-subsets of columns), as sorted index vectors.
    pub fn base_set(&self) -> BTreeSet<Vec<usize>> {
        let r = self.rank();
        let rows: Vec<usize> = (0..r).collect();
        let mut out = BTreeSet::new();
        match self.int_grid() {
            Some(grid) => {
                for cols in combinations(self.size(), r) {
                    let d = int_sub_det(&grid, &rows, &cols);
                    let nonzero = match d {
                        Some(v) => v != 0,
                        // overflow: settle it exactly in the field
                        None => !self.mat.select(&rows, &cols).det().unwrap().is_zero(),
                    };
                    if nonzero {
                        out.insert(cols);
                    }
                }
            }
            None => {
                for cols in combinations(self.size(), r) {
                    if !self.mat.select(&rows, &cols).det().unwrap().is_zero() {
                        out.insert(cols);
                    }
                }
            }
        }
        out
    }

    /// Circuits: the minimal dependent column-label sets.
    ///
    /// For every base B and every e not in B, the fundamental circuit of e
    /// with respect to B is {e} plus the base elements b for which the
    /// exchange (B \ b) + e is again a base, so a single pass over the base
    /// table answers everything.
    pub fn circuits(&self) -> CircuitSystem {
        let bases = self.base_set();
        let mut circuits: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        // Loops (zero columns) are one-element circuits and lie in no base.
        for j in 0..self.size() {
            if (0..self.rank()).all(|i| self.mat.at(i, j).is_zero()) {
                circuits.insert([j].into_iter().collect());
            }
        }
        for base in &bases {
            for e in 0..self.size() {
                if base.binary_search(&e).is_ok() {
                    continue;
                }
                let mut circuit: BTreeSet<usize> = [e].into_iter().collect();
                for (pos, &b) in base.iter().enumerate() {
                    let mut exchanged = base.clone();
                    exchanged[pos] = e;
                    exchanged.sort_unstable();
                    if bases.contains(&exchanged) {
                        circuit.insert(b);
                    }
                }
                if circuit.len() > 1 {
                    circuits.insert(circuit);
                } else if !(0..self.rank()).all(|i| self.mat.at(i, e).is_zero()) {
                    // a nonzero column outside every exchange would mean a
                    // dependency bug; the zero-column case was handled above
                    debug_assert!(false, "nonzero column {e} with empty fundamental circuit");
                }
            }
        }
        CircuitSystem::from_index_sets(self.ground().to_vec(), circuits)
    }

    /// Rank of the column subset.
    pub fn rank_of(&self, cols: &[usize]) -> usize {
        if cols.is_empty() {
            return 0;
        }
        if let Some(grid) = self.int_grid() {
            let sub: Vec<Vec<i128>> = (0..self.rank())
                .map(|i| cols.iter().map(|&j| grid[i][j]).collect())
                .collect();
            if let Some(r) = crate::exact_linalg::int_rank(&sub) {
                return r;
            }
        }
        self.mat.select_columns(cols).rank()
    }

    /// Bridgeless test: every element lies in at least one circuit, i.e.
    /// no element is a coloop.
    pub fn is_1pi(&self) -> bool {
        let n = self.size();
        let r = self.rank();
        (0..n).all(|e| {
            let rest: Vec<usize> = (0..n).filter(|&j| j != e).collect();
            self.rank_of(&rest) == r
        })
    }

    pub fn coloops(&self) -> Vec<usize> {
        let n = self.size();
        let r = self.rank();
        (0..n)
            .filter(|&e| {
                let rest: Vec<usize> = (0..n).filter(|&j| j != e).collect();
                self.rank_of(&rest) < r
            })
            .collect()
    }

    pub fn loops(&self) -> Vec<usize> {
        (0..self.size())
            .filter(|&j| (0..self.rank()).all(|i| self.mat.at(i, j).is_zero()))
            .collect()
    }

    /// The lexicographically first base in ground-set order.
    pub fn lex_first_base(&self) -> Vec<usize> {
        let mut base = Vec::new();
        for j in 0..self.size() {
            let mut trial = base.clone();
            trial.push(j);
            if self.rank_of(&trial) == trial.len() {
                base.push(j);
            }
            if base.len() == self.rank() {
                break;
            }
        }
        base
    }

    /// Permute the lexicographically first base to the front and row reduce,
    /// giving the standard form (I_r | D). Returns the column permutation
    /// used (new position -> old index).
    pub fn standardize(&self) -> (RepresentedMatroid<K>, Vec<usize>) {
        let base = self.lex_first_base();
        let mut perm = base.clone();
        for j in 0..self.size() {
            if base.binary_search(&j).is_err() {
                perm.push(j);
            }
        }
        let permuted = self.mat.permute_columns(&perm).expect("valid permutation");
        let (red, _) = permuted.rref();
        (RepresentedMatroid { mat: red }, perm)
    }

    /// Dual matroid of a standard-form representation (I_r | D), namely
    /// (-D^T | I_m). Labels follow their elements: the identity block of the
    /// dual carries the labels of D and vice versa.
    pub fn dual(&self) -> Result<RepresentedMatroid<K>> {
        if self.form() != MatroidForm::Standard {
            return Err(Error::State(
                "dual needs standard form (I_r | D); call standardize first".into(),
            ));
        }
        let r = self.rank();
        let m = self.size() - r;
        let mut rows = Vec::with_capacity(m);
        for i in 0..m {
            let mut row = Vec::with_capacity(self.size());
            for j in 0..r {
                row.push(self.mat.at(j, r + i).neg());
            }
            for j in 0..m {
                row.push(if i == j { K::one() } else { K::zero() });
            }
            rows.push(row);
        }
        let mat = ExactMatrix::from_rows(rows, self.ground().to_vec())?;
        RepresentedMatroid::new(mat)
    }

    /// Delete an element (drop its column, then restore full row rank).
    pub fn delete(&self, label: &str) -> Result<RepresentedMatroid<K>> {
        let e = self
            .mat
            .label_index(label)
            .ok_or_else(|| Error::Lookup(label.to_string()))?;
        let cols: Vec<usize> = (0..self.size()).filter(|&j| j != e).collect();
        let sub = self.mat.select_columns(&cols);
        Ok(RepresentedMatroid::from_row_space(&sub))
    }

    /// Contract an element: pivot on the first row with a nonzero entry in
    /// its column, then drop that row and the column. Contracting a loop is
    /// the same as deleting it.
    pub fn contract(&self, label: &str) -> Result<RepresentedMatroid<K>> {
        let e = self
            .mat
            .label_index(label)
            .ok_or_else(|| Error::Lookup(label.to_string()))?;
        let Some(pivot) = (0..self.rank()).find(|&i| !self.mat.at(i, e).is_zero()) else {
            return self.delete(label);
        };
        let inv = self.mat.at(pivot, e).inv().expect("nonzero pivot");
        let mut rows = Vec::with_capacity(self.rank() - 1);
        for i in 0..self.rank() {
            if i == pivot {
                continue;
            }
            let f = self.mat.at(i, e).mul(&inv);
            let mut row = Vec::with_capacity(self.size() - 1);
            for j in 0..self.size() {
                if j == e {
                    continue;
                }
                row.push(self.mat.at(i, j).sub(&f.mul(self.mat.at(pivot, j))));
            }
            rows.push(row);
        }
        let labels: Vec<String> = self
            .ground()
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != e)
            .map(|(_, l)| l.clone())
            .collect();
        let mat = ExactMatrix::from_rows(rows, labels)?;
        RepresentedMatroid::new(mat)
    }

    /// Contract a set of elements, in the given order.
    pub fn contract_all(&self, labels: &[&str]) -> Result<RepresentedMatroid<K>> {
        let mut m = self.clone();
        for l in labels {
            m = m.contract(l)?;
        }
        Ok(m)
    }
}

impl RepresentedMatroid<Rat> {
    /// Nonzero r-by-r subdeterminants by base, exact.
    pub fn base_dets(&self) -> BTreeMap<Vec<usize>, Rat> {
        let r = self.rank();
        let rows: Vec<usize> = (0..r).collect();
        let mut out = BTreeMap::new();
        let grid = self.int_grid();
        for cols in combinations(self.size(), r) {
            let det = match &grid {
                Some(g) => match int_sub_det(g, &rows, &cols) {
                    Some(v) => rat_int(0) + Rat::from_integer(v.into()),
                    None => self.mat.select(&rows, &cols).det().unwrap(),
                },
                None => self.mat.select(&rows, &cols).det().unwrap(),
            };
            if !Ring::is_zero(&det) {
                out.insert(cols, det);
            }
        }
        out
    }

    /// All bases with weight = squared subdeterminant. For totally
    /// unimodular representations every weight is 1.
    pub fn bases_with_weights(&self) -> Vec<WeightedBase> {
        self.base_dets()
            .into_iter()
            .map(|(cols, det)| WeightedBase {
                base: cols.into_iter().collect(),
                weight: &det * &det,
            })
            .collect()
    }

    /// Regularity test for {-1, 0, 1} matrices: the matroid over Q must
    /// coincide with the matroid of the same grid over F2. A matroid
    /// representable over F2 and a characteristic-zero field is regular.
    pub fn is_regular_by_binary_test(&self) -> Result<bool> {
        for i in 0..self.rank() {
            for j in 0..self.size() {
                if !is_signed_unit_or_zero(self.mat.at(i, j)) {
                    return Err(Error::Domain(format!(
                        "entry {} at ({i}, {j}) is not in {{-1, 0, 1}}",
                        self.mat.at(i, j)
                    )));
                }
            }
        }
        let f2: ExactMatrix<Gf2> = self.mat.cast_to_gf::<2>()?;
        let rank_q = self.rank();
        let rank_f2 = f2.rank();
        if rank_q != rank_f2 {
            return Ok(false);
        }
        let binary = RepresentedMatroid::<Gf2>::from_row_space(&f2);
        Ok(self.base_set() == binary.base_set())
    }

    /// Same independent sets over Q and over F2; used to certify that a
    /// construction step preserved the joint representation.
    pub fn jointly_represents_over_f2(&self) -> Result<bool> {
        self.is_regular_by_binary_test()
    }
}

/// Convenience: matroid of a labeled {-1,0,1} integer matrix.
pub fn matroid_from_integer_rows(
    rows: Vec<Vec<i64>>,
    labels: Vec<String>,
) -> Result<RepresentedMatroid<Rat>> {
    let m = QMatrix::from_integer_rows(rows, labels)?;
    Ok(RepresentedMatroid::from_row_space(&m))
}
