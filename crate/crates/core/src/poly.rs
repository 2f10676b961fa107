//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Monomials are exponent vectors over a fixed, ordered variable list and are
//! kept in graded lexicographic order, so printed output is reproducible
//! byte for byte.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exact_linalg::{rat_int, Rat, Ring};

/// Ordered variable table shared by the polynomials of one computation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyRing {
    vars: Vec<String>,
}

impl PolyRing {
    pub fn new(vars: Vec<String>) -> Result<Arc<PolyRing>> {
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::Schema(format!("duplicate variable `{v}`")));
            }
        }
        Ok(Arc::new(PolyRing { vars }))
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn index_of(&self, var: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == var)
    }
}

/// Exponent vector; compared in graded lexicographic order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mono(Vec<u32>);

impl Mono {
    fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn quotient(other: &Mono, by: &Mono) -> Mono {
        Mono(other.0.iter().zip(&by.0).map(|(a, b)| a - b).collect())
    }

    fn product(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial over `PolyRing` with `Rat` coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly {
    ring: Arc<PolyRing>,
    terms: BTreeMap<Mono, Rat>,
}

impl Poly {
    pub fn zero(ring: &Arc<PolyRing>) -> Poly {
        Poly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Rat) -> Poly {
        let mut p = Poly::zero(ring);
        if !c.is_zero() {
            p.terms.insert(Mono(vec![0; ring.len()]), c);
        }
        p
    }

    pub fn one(ring: &Arc<PolyRing>) -> Poly {
        Poly::constant(ring, rat_int(1))
    }

    pub fn var(ring: &Arc<PolyRing>, index: usize) -> Poly {
        let mut exps = vec![0; ring.len()];
        exps[index] = 1;
        let mut p = Poly::zero(ring);
        p.terms.insert(Mono(exps), rat_int(1));
        p
    }

    pub fn monomial(ring: &Arc<PolyRing>, powers: &[(usize, u32)], coeff: Rat) -> Poly {
        let mut exps = vec![0; ring.len()];
        for &(i, e) in powers {
            exps[i] += e;
        }
        let mut p = Poly::zero(ring);
        if !coeff.is_zero() {
            p.terms.insert(Mono(exps), coeff);
        }
        p
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, mono_exps: &[u32]) -> Rat {
        self.terms
            .get(&Mono(mono_exps.to_vec()))
            .cloned()
            .unwrap_or_else(|| rat_int(0))
    }

    fn assert_same_ring(&self, other: &Poly) {
        assert!(
            self.ring == other.ring,
            "polynomial ring mismatch: {:?} vs {:?}",
            self.ring.vars,
            other.ring.vars
        );
    }

    fn insert(&mut self, m: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Poly) {
        self.assert_same_ring(other);
        for (m, c) in &other.terms {
            self.insert(m.clone(), c.clone());
        }
    }

    pub fn plus(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn minus(&self, other: &Poly) -> Poly {
        self.plus(&other.negated())
    }

    pub fn negated(&self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn times(&self, other: &Poly) -> Poly {
        self.assert_same_ring(other);
        let mut out = Poly::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.insert(m1.product(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scaled(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one(&self.ring);
        for _ in 0..e {
            out = out.times(self);
        }
        out
    }

    pub fn leading(&self) -> Option<(&Mono, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total()).max()
    }

    /// True when every term has the same total degree `d`.
    pub fn is_homogeneous_of_degree(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.total() == d)
    }

    /// Degree of a term in the variables listed in `vars`.
    fn partial_degree(m: &Mono, vars: &[usize]) -> u32 {
        vars.iter().map(|&i| m.0[i]).sum()
    }

    /// Terms whose total degree in `vars` is exactly `d`.
    pub fn select_degree_in(&self, vars: &[usize], d: u32) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| Self::partial_degree(m, vars) == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Substitute `replacement` for the variable at `index`.
    pub fn substitute(&self, index: usize, replacement: &Poly) -> Poly {
        self.assert_same_ring(replacement);
        let mut out = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.0[index];
            let mut rest = m.clone();
            rest.0[index] = 0;
            let mut term = Poly::zero(&self.ring);
            term.insert(rest, c.clone());
            if e > 0 {
                term = term.times(&replacement.pow(e));
            }
            out.add_assign(&term);
        }
        out
    }

    /// For a polynomial multilinear in the variables `vars`, flip each of
    /// those exponents e -> 1 - e in every term. This realizes
    /// `(prod_v v) * p(v <- 1/v)` without leaving the polynomial ring.
    pub fn complement_transform(&self, vars: &[usize]) -> Result<Poly> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            for &i in vars {
                if exps[i] > 1 {
                    return Err(Error::Domain(format!(
                        "not multilinear in `{}`",
                        self.ring.vars[i]
                    )));
                }
                exps[i] = 1 - exps[i];
            }
            terms.insert(Mono(exps), c.clone());
        }
        Ok(Poly {
            ring: self.ring.clone(),
            terms,
        })
    }

    /// Render one monomial in `coeff * v1^e1 * v2 ...` form.
    fn format_term(&self, m: &Mono, c: &Rat) -> String {
        let mut factors = Vec::new();
        for (i, &e) in m.0.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(self.ring.vars[i].clone()),
                _ => factors.push(format!("{}^{}", self.ring.vars[i], e)),
            }
        }
        let vars = factors.join("*");
        if vars.is_empty() {
            format!("{c}")
        } else if c.is_one() {
            vars
        } else if (-c).is_one() {
            format!("-{vars}")
        } else {
            format!("{c}*{vars}")
        }
    }
}

impl Ring for Poly {
    fn zero() -> Self {
        panic!("Poly::zero needs a ring; use Poly::zero(&ring)")
    }
    fn one() -> Self {
        panic!("Poly::one needs a ring; use Poly::one(&ring)")
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn neg(&self) -> Self {
        self.negated()
    }
    fn add(&self, rhs: &Self) -> Self {
        self.plus(rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.minus(rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.times(rhs)
    }
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.ring);
        let (dm, dc) = rhs.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        while let Some((lm, lc)) = rem.leading() {
            if !dm.divides(lm) {
                return None;
            }
            let qm = Mono::quotient(lm, &dm);
            let qc = lc / &dc;
            let mut t = Poly::zero(&self.ring);
            t.insert(qm, qc);
            rem = rem.minus(&t.times(rhs));
            quot.add_assign(&t);
        }
        Some(quot)
    }
}

impl fmt::Display for Poly {
    /// Terms in descending graded-lex order, `+`/`-` separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if first {
                write!(f, "{}", self.format_term(m, c))?;
                first = false;
            } else if c.is_negative() {
                write!(f, " - {}", self.format_term(m, &-c))?;
            } else {
                write!(f, " + {}", self.format_term(m, c))?;
            }
        }
        Ok(())
    }
}

/// Determinant of a square grid of polynomials (fraction-free elimination).
pub fn poly_det(ring: &Arc<PolyRing>, grid: Vec<Vec<Poly>>) -> Poly {
    let n = grid.len();
    if n == 0 {
        return Poly::one(ring);
    }
    debug_assert!(grid.iter().all(|r| r.len() == n));
    let mut a = grid;
    let mut sign_flip = false;
    let mut prev = Poly::one(ring);
    for k in 0..n {
        let Some(pivot_row) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Poly::zero(ring);
        };
        if pivot_row != k {
            a.swap(pivot_row, k);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[k][k].times(&a[i][j]).minus(&a[i][k].times(&a[k][j]));
                a[i][j] = num
                    .exact_div(&prev)
                    .expect("fraction-free elimination divides exactly");
            }
            a[i][k] = Poly::zero(ring);
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign_flip {
        d.negated()
    } else {
        d
    }
}
