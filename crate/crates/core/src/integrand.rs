//! Emission of Feynman integrands from represented matroids: the
//! momentum-space form (delta functions and propagators with symbolic powers)
//! and the parametric form (first and second Symanzik polynomials plus the
//! power list). No integration is performed.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_linalg::{QMatrix, Rat};
use crate::matroid::RepresentedMatroid;
use crate::momentum::MomentumExpr;
use crate::poly::Poly;
use crate::symanzik::{phi_second_rep, psi_base_expansion, DotTable, ExtendedRep};
use crate::tensor_reduce::ReducedForm;
use crate::util::natural_cmp;

/// Symbolic propagator power: a free exponent symbol plus an integer shift.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PowerSpec {
    pub symbol: String,
    pub shift: i64,
}

impl PowerSpec {
    pub fn render(&self) -> String {
        match self.shift.cmp(&0) {
            std::cmp::Ordering::Equal => self.symbol.clone(),
            std::cmp::Ordering::Greater => format!("{} + {}", self.symbol, self.shift),
            std::cmp::Ordering::Less => format!("{} - {}", self.symbol, -self.shift),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PropagatorDoc {
    pub edge: String,
    pub momentum: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass2: Option<String>,
    pub power: PowerSpec,
}

/// Momentum-space integrand: one delta factor per matrix row, one propagator
/// per internal column.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct MomentumSpaceDoc {
    pub integration_momenta: Vec<String>,
    pub deltas: Vec<String>,
    pub propagators: Vec<PropagatorDoc>,
    /// Momenta left free after the delta constraints: columns minus rank.
    pub free_momenta: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct TermDoc {
    pub coeff: String,
    pub monomial: BTreeMap<String, u32>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PolyDoc {
    pub text: String,
    pub terms: Vec<TermDoc>,
}

impl PolyDoc {
    pub fn from_poly(p: &Poly) -> PolyDoc {
        let ring = p.ring().clone();
        let terms = p
            .terms()
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .map(|(m, c)| {
                let monomial: BTreeMap<String, u32> = m
                    .exponents()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| (ring.vars()[i].clone(), e))
                    .collect();
                TermDoc {
                    coeff: c.to_string(),
                    monomial,
                }
            })
            .collect();
        PolyDoc {
            text: p.to_string(),
            terms,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ParametricDoc {
    pub psi: PolyDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<PolyDoc>,
    pub powers: Vec<(String, PowerSpec)>,
}

/// Input description for momentum-space emission from a bare matrix.
pub struct EmissionInput<'a> {
    pub matrix: &'a QMatrix,
    /// Labels of external columns, mapped to the symbol printed in deltas.
    pub external_symbols: BTreeMap<String, String>,
    /// Routed momenta for propagator display; columns without an entry fall
    /// back to the per-edge variable `k_<label>`.
    pub momenta: BTreeMap<String, MomentumExpr>,
    /// Integer power shifts per edge.
    pub shifts: BTreeMap<String, i64>,
    /// Mass-squared symbols per edge.
    pub mass2: BTreeMap<String, String>,
}

fn render_coeff_times(c: &Rat, var: &str) -> String {
    let mag = c.abs();
    if mag.is_one() {
        var.to_string()
    } else {
        format!("{mag}*{var}")
    }
}

/// Emit the momentum-space integrand of a labeled matrix.
///
/// The emission is normalized so that matrices equivalent under row
/// operations, zero-row removal, +-1 column scalings and label-preserving
/// column swaps all serialize identically: columns are put in natural label
/// order, the matrix is row reduced, and each non-pivot column's sign is
/// fixed by its first nonzero entry.
pub fn momentum_space(input: &EmissionInput) -> Result<MomentumSpaceDoc> {
    let m = input.matrix;
    for l in input.external_symbols.keys() {
        if m.label_index(l).is_none() {
            return Err(Error::Schema(format!(
                "external column `{l}` not in matrix"
            )));
        }
    }
    // canonical column order
    let mut order: Vec<usize> = (0..m.ncols()).collect();
    order.sort_by(|&a, &b| natural_cmp(m.label(a), m.label(b)));
    let sorted = m.permute_columns(&order)?;
    let (mut red, pivots) = sorted.rref();
    // Gauge-fix the +-1 column-scaling freedom. In the rref a flip of column
    // j multiplies entry (i, j) by d_j and, if j is the pivot of row i, the
    // whole row by d_j as well. Fix row and column gauges greedily along a
    // row-major scan so the first undecided entry of every row and column
    // comes out positive; the result no longer depends on the input signs.
    let pivot_cols: BTreeSet<usize> = pivots.iter().copied().collect();
    let mut row_gauge: Vec<Option<bool>> = vec![None; red.nrows()]; // true = flip
    let mut col_gauge: Vec<Option<bool>> = vec![None; red.ncols()];
    for i in 0..red.nrows() {
        for j in 0..red.ncols() {
            if pivot_cols.contains(&j) || red.at(i, j).is_zero() {
                continue;
            }
            let negative = red.at(i, j).is_negative();
            match (row_gauge[i], col_gauge[j]) {
                (None, None) => {
                    row_gauge[i] = Some(false);
                    col_gauge[j] = Some(negative);
                }
                (Some(r), None) => col_gauge[j] = Some(negative != r),
                (None, Some(c)) => row_gauge[i] = Some(negative != c),
                (Some(_), Some(_)) => {}
            }
        }
    }
    for i in 0..red.nrows() {
        for j in 0..red.ncols() {
            let flip = row_gauge[i].unwrap_or(false) != col_gauge[j].unwrap_or(false);
            if flip && !pivot_cols.contains(&j) {
                let v = -red.at(i, j);
                red.set(i, j, v);
            }
        }
    }
    let var_of = |label: &str| -> String {
        match input.external_symbols.get(label) {
            Some(sym) => sym.clone(),
            None => format!("k_{label}"),
        }
    };
    let mut deltas = Vec::new();
    for i in 0..red.nrows() {
        let mut parts = String::new();
        for j in 0..red.ncols() {
            let c = red.at(i, j);
            if c.is_zero() {
                continue;
            }
            let body = render_coeff_times(c, &var_of(red.label(j)));
            if parts.is_empty() {
                if c.is_negative() {
                    parts.push('-');
                }
                parts.push_str(&body);
            } else if c.is_negative() {
                parts.push_str(&format!(" - {body}"));
            } else {
                parts.push_str(&format!(" + {body}"));
            }
        }
        deltas.push(format!("delta({parts})"));
    }
    let mut integration_momenta = Vec::new();
    let mut propagators = Vec::new();
    for j in 0..red.ncols() {
        let label = red.label(j).to_string();
        if input.external_symbols.contains_key(&label) {
            continue;
        }
        integration_momenta.push(format!("k_{label}"));
        let momentum = match input.momenta.get(&label) {
            Some(e) => e.to_string(),
            None => format!("k_{label}"),
        };
        propagators.push(PropagatorDoc {
            edge: label.clone(),
            momentum,
            mass2: input.mass2.get(&label).cloned(),
            power: PowerSpec {
                symbol: format!("nu_{label}"),
                shift: input.shifts.get(&label).copied().unwrap_or(0),
            },
        });
    }
    // deltas fix as many internal momenta as the internal columns have rank;
    // what is left over is the loop number of the internal matroid
    let internal_cols: Vec<usize> = (0..red.ncols())
        .filter(|&j| !input.external_symbols.contains_key(red.label(j)))
        .collect();
    let internal_rank = red.select_columns(&internal_cols).rank();
    let free_momenta = propagators.len().saturating_sub(internal_rank);
    Ok(MomentumSpaceDoc {
        integration_momenta,
        deltas,
        propagators,
        free_momenta,
    })
}

/// Momentum-space document of a reduced form (externals included when they
/// were enabled during reduction).
pub fn momentum_space_of_reduced(
    rf: &ReducedForm,
    leg_symbols: &BTreeMap<String, String>,
    shifts: &BTreeMap<String, i64>,
    mass2: &BTreeMap<String, String>,
) -> Result<MomentumSpaceDoc> {
    let input = EmissionInput {
        matrix: &rf.conservation,
        external_symbols: rf
            .external_labels
            .iter()
            .map(|l| {
                (
                    l.clone(),
                    leg_symbols.get(l).cloned().unwrap_or_else(|| l.clone()),
                )
            })
            .collect(),
        momenta: rf.momenta.clone(),
        shifts: shifts.clone(),
        mass2: mass2.clone(),
    };
    momentum_space(&input)
}

/// Parametric integrand of an extended representation: first Symanzik
/// polynomial of the internal restriction, second Symanzik polynomial when at
/// least two external columns are present.
pub fn parametric(
    matroid: &RepresentedMatroid<Rat>,
    internal: &[String],
    legs: &[(String, usize)],
    dots: &DotTable,
    shifts: &BTreeMap<String, i64>,
) -> Result<ParametricDoc> {
    // restrict to internal columns for psi
    let cols: Vec<usize> = internal
        .iter()
        .map(|l| {
            matroid
                .matrix()
                .label_index(l)
                .ok_or_else(|| Error::Lookup(format!("column `{l}`")))
        })
        .collect::<Result<_>>()?;
    let sub = matroid.matrix().select_columns(&cols);
    let internal_matroid = RepresentedMatroid::from_row_space(&sub);
    let psi = psi_base_expansion(&internal_matroid);
    let phi = if legs.len() >= 2 {
        let ext = ExtendedRep {
            matroid,
            internal: internal.to_vec(),
            legs: legs.to_vec(),
        };
        Some(PolyDoc::from_poly(&phi_second_rep(&ext, dots)?))
    } else {
        None
    };
    let powers = internal
        .iter()
        .map(|l| {
            (
                l.clone(),
                PowerSpec {
                    symbol: format!("nu_{l}"),
                    shift: shifts.get(l).copied().unwrap_or(0),
                },
            )
        })
        .collect();
    Ok(ParametricDoc {
        psi: PolyDoc::from_poly(&psi),
        phi,
        powers,
    })
}
