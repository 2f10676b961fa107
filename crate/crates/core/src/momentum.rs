//! Linear momentum expressions over loop and external symbols.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::exact_linalg::{anon_labels, rat_int, QMatrix, Rat};

/// A momentum symbol: an independent loop momentum or a declared external.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum MomSym {
    Loop(u32),
    Ext(String),
}

impl fmt::Display for MomSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MomSym::Loop(i) => write!(f, "l{i}"),
            MomSym::Ext(s) => write!(f, "{s}"),
        }
    }
}

/// Linear combination of momentum symbols with rational coefficients.
/// Routing always produces integer coefficients; rational scalars appear only
/// transiently when solving for redundant dot pairs.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct MomentumExpr(BTreeMap<MomSym, Rat>);

impl MomentumExpr {
    pub fn zero() -> Self {
        MomentumExpr(BTreeMap::new())
    }

    pub fn sym(s: MomSym) -> Self {
        let mut m = BTreeMap::new();
        m.insert(s, rat_int(1));
        MomentumExpr(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, s: &MomSym) -> Rat {
        self.0.get(s).cloned().unwrap_or_else(|| rat_int(0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MomSym, &Rat)> {
        self.0.iter()
    }

    pub fn add_scaled(&mut self, other: &MomentumExpr, c: &Rat) {
        if c.is_zero() {
            return;
        }
        for (s, k) in &other.0 {
            let v = self.coeff(s) + k * c;
            if v.is_zero() {
                self.0.remove(s);
            } else {
                self.0.insert(s.clone(), v);
            }
        }
    }

    pub fn plus(&self, other: &MomentumExpr) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &rat_int(1));
        out
    }

    pub fn minus(&self, other: &MomentumExpr) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &rat_int(-1));
        out
    }

    pub fn scaled(&self, c: &Rat) -> Self {
        let mut out = MomentumExpr::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn negated(&self) -> Self {
        self.scaled(&rat_int(-1))
    }

    /// `other = c * self` for some nonzero scalar c.
    pub fn proportionality(&self, other: &MomentumExpr) -> Option<Rat> {
        if self.is_zero() || other.is_zero() {
            return None;
        }
        let (s0, c0) = self.0.iter().next().unwrap();
        let ratio = other.coeff(s0) / c0;
        if ratio.is_zero() {
            return None;
        }
        if other == &self.scaled(&ratio) {
            Some(ratio)
        } else {
            None
        }
    }
}

impl fmt::Display for MomentumExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (s, c) in &self.0 {
            let mag = c.abs();
            let body = if mag.is_one() {
                s.to_string()
            } else {
                format!("{mag}*{s}")
            };
            if first {
                if c.is_negative() {
                    write!(f, "-{body}")?;
                } else {
                    write!(f, "{body}")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - {body}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}

/// Solve `target = alpha * u + beta * v` exactly in the symbol space.
///
/// For independent `u`, `v` the solution is unique or absent. For dependent
/// nonzero momenta the solution family is cut down deterministically: the
/// symmetric representative `alpha = beta` when it exists, otherwise the
/// antisymmetric one.
pub fn solve_pair(target: &MomentumExpr, u: &MomentumExpr, v: &MomentumExpr) -> Option<(Rat, Rat)> {
    if u.is_zero() || v.is_zero() {
        return None;
    }
    if let Some(c) = u.proportionality(v) {
        // v = c*u, target must be gamma*u
        let gamma = u.proportionality(target)?;
        let minus_one = rat_int(-1);
        if c != minus_one {
            let s = &gamma / (rat_int(1) + &c);
            return Some((s.clone(), s));
        }
        let half = &gamma / rat_int(2);
        return Some((half.clone(), -half));
    }
    // independent: set up the symbol-basis linear system [u v | target]
    let mut syms: Vec<MomSym> = Vec::new();
    for e in [u, v, target] {
        for (s, _) in e.terms() {
            if !syms.contains(s) {
                syms.push(s.clone());
            }
        }
    }
    let rows: Vec<Vec<Rat>> = syms
        .iter()
        .map(|s| vec![u.coeff(s), v.coeff(s), target.coeff(s)])
        .collect();
    let m = QMatrix::from_rows(rows, anon_labels(3)).expect("well-formed system");
    let coords = m.coordinates_over(&[0, 1], 2)?;
    Some((coords[0].clone(), coords[1].clone()))
}
