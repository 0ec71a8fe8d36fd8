//! Multivariate polynomials with exact rational coefficients.
//!
//! A [`Poly`] carries its ordered variable list; monomials are exponent vectors
//! over that list. Printing uses graded lexicographic order (highest degree
//! first, ties broken by the variable order) and is accepted back by
//! [`parse_poly`].

pub mod groebner;
mod parse;
pub mod solve;
pub mod univariate;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{QMatrix, Q};

pub use parse::{parse_poly, parse_poly_auto, ParseError};

/// Exponent vector over a variable list.
pub type Monomial = Vec<u32>;

/// Shared, ordered variable names.
pub type VarList = Arc<[String]>;

pub fn var_list<S: AsRef<str>>(names: &[S]) -> VarList {
    names.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().into()
}

/// Names `prefix0, prefix1, ...`.
pub fn indexed_vars(prefix: &str, n: usize) -> VarList {
    (0..n).map(|i| format!("{prefix}{i}")).collect::<Vec<_>>().into()
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    vars: VarList,
    terms: BTreeMap<Monomial, Q>,
}

pub fn degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

/// Graded lexicographic comparison; `Greater` means `a` is the larger monomial.
pub fn grlex_cmp(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    degree(a).cmp(&degree(b)).then_with(|| a.cmp(b))
}

impl Poly {
    pub fn zero(vars: VarList) -> Self {
        Poly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: VarList, c: Q) -> Self {
        let mut p = Self::zero(vars);
        let n = p.nvars();
        p.add_term(vec![0; n], c);
        p
    }

    pub fn var(vars: VarList, i: usize) -> Self {
        let n = vars.len();
        assert!(i < n, "variable index out of range");
        let mut m = vec![0; n];
        m[i] = 1;
        let mut p = Self::zero(vars);
        p.add_term(m, Q::one());
        p
    }

    /// Linear form `Σ coeffs[i]·z_i`.
    pub fn linear(vars: VarList, coeffs: &[Q]) -> Self {
        assert_eq!(coeffs.len(), vars.len());
        let n = vars.len();
        let mut p = Self::zero(vars);
        for (i, c) in coeffs.iter().enumerate() {
            let mut m = vec![0; n];
            m[i] = 1;
            p.add_term(m, c.clone());
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Q)>>(vars: VarList, terms: I) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.len(), p.nvars(), "monomial length does not match variable count");
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &VarList {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    /// Terms in graded lexicographic order, largest first.
    pub fn terms_grlex(&self) -> Vec<(&Monomial, &Q)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|a, b| grlex_cmp(b.0, a.0));
        t
    }

    pub fn coeff(&self, m: &[u32]) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| degree(m)).max()
    }

    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|m| degree(m) == d)
    }

    pub fn same_ring(&self, other: &Poly) -> bool {
        Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars
    }

    fn check_ring(&self, other: &Poly) {
        assert!(self.same_ring(other), "polynomials over different variable lists");
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check_ring(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.check_ring(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, s: &Q) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.vars.clone());
        }
        Poly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check_ring(other);
        let mut out = Poly::zero(self.vars.clone());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    /// Multiplies by a monomial.
    pub fn mul_monomial(&self, m: &[u32]) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(t, c)| (t.iter().zip(m).map(|(a, b)| a + b).collect(), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::constant(self.vars.clone(), Q::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        assert_eq!(point.len(), self.nvars(), "evaluation point has wrong length");
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                if e > 0 {
                    t *= num::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.vars.clone());
        for (m, c) in &self.terms {
            if m[i] > 0 {
                let mut d = m.clone();
                d[i] -= 1;
                out.add_term(d, c * Q::from_integer(m[i].into()));
            }
        }
        out
    }

    /// Replaces variable `i` by `images[i]`; the result lives over the images' ring.
    pub fn compose(&self, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.nvars() {
            return Err(Error::DimensionMismatch { context: "Poly::compose", expected: self.nvars(), found: images.len() });
        }
        let Some(first) = images.first() else {
            // No variables: self is a constant.
            return Ok(self.clone());
        };
        let target = first.vars.clone();
        if images.iter().any(|p| !p.same_ring(first)) {
            return Err(Error::Precondition("compose: images over different rings".into()));
        }
        // Cache powers of each image.
        let max_exp: Vec<u32> = (0..self.nvars()).map(|i| self.terms.keys().map(|m| m[i]).max().unwrap_or(0)).collect();
        let powers: Vec<Vec<Poly>> = images
            .iter()
            .zip(&max_exp)
            .map(|(img, &e)| {
                let mut v = vec![Poly::constant(target.clone(), Q::one())];
                for k in 1..=e as usize {
                    let next = v[k - 1].mul(img);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Poly::zero(target.clone());
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target.clone(), c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&powers[i][e as usize]);
                }
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// `P∘T`: every variable column `z` is replaced by `Tz`.
    pub fn substitute_linear(&self, t: &QMatrix) -> Result<Poly> {
        let n = self.nvars();
        if t.nrows() != n || t.ncols() != n {
            return Err(Error::DimensionMismatch { context: "substitute_linear", expected: n, found: t.nrows().max(t.ncols()) });
        }
        if t.determinant()?.is_zero() {
            return Err(Error::Singular("substitute_linear"));
        }
        Ok(self.substitute_linear_unchecked(t))
    }

    /// Same as [`Poly::substitute_linear`] without the invertibility check; also
    /// accepts rectangular `T` (n × m), giving a polynomial in `m` variables named by `target`.
    pub fn substitute_linear_into(&self, t: &QMatrix, target: VarList) -> Result<Poly> {
        if t.nrows() != self.nvars() || t.ncols() != target.len() {
            return Err(Error::DimensionMismatch { context: "substitute_linear_into", expected: self.nvars(), found: t.nrows() });
        }
        let images: Vec<Poly> = (0..t.nrows()).map(|i| Poly::linear(target.clone(), t.row(i))).collect();
        if images.is_empty() {
            return Ok(Poly::from_terms(target.clone(), self.terms.values().map(|c| (vec![0; target.len()], c.clone()))));
        }
        self.compose(&images)
    }

    fn substitute_linear_unchecked(&self, t: &QMatrix) -> Poly {
        self.substitute_linear_into(t, self.vars.clone()).expect("square substitution")
    }

    /// Reinterprets the polynomial over a different variable list of the same length.
    pub fn with_vars(&self, vars: VarList) -> Result<Poly> {
        if vars.len() != self.nvars() {
            return Err(Error::DimensionMismatch { context: "Poly::with_vars", expected: self.nvars(), found: vars.len() });
        }
        Ok(Poly { vars, terms: self.terms.clone() })
    }

    /// Keeps only the variables listed in `keep` (in that order); fails if a dropped variable occurs.
    pub fn restrict_vars(&self, keep: &[usize]) -> Result<Poly> {
        let vars: VarList = keep.iter().map(|&i| self.vars[i].clone()).collect::<Vec<_>>().into();
        let mut out = Poly::zero(vars);
        for (m, c) in &self.terms {
            let kept: u32 = keep.iter().map(|&i| m[i]).sum();
            if kept != degree(m) {
                return Err(Error::Precondition("restrict_vars: a dropped variable occurs".into()));
            }
            out.add_term(keep.iter().map(|&i| m[i]).collect(), c.clone());
        }
        Ok(out)
    }

    /// Largest bit length among numerators and denominators.
    pub fn max_coeff_bits(&self) -> u64 {
        self.terms.values().map(|c| c.numer().bits().max(c.denom().bits())).max().unwrap_or(0)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, vars: &[String], m: &[u32]) -> fmt::Result {
    let mut first = true;
    for (v, &e) in vars.iter().zip(m) {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "{v}")?;
        } else {
            write!(f, "{v}^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms_grlex().into_iter().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            let constant = degree(m) == 0;
            if constant {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write_monomial(f, &self.vars, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.vars.join(","), self)
    }
}
