//! Dense univariate polynomials over the rationals and exact rational root finding.
//!
//! Real roots of the square-free part are isolated with a Sturm sequence. Each
//! isolating interval is then shrunk below `1/L²` (with `L` the leading
//! coefficient of the primitive integer form): a rational root `p/q` must have
//! `q | L`, two such fractions are at least `1/L²` apart, so the simplest
//! fraction in the interval is the only candidate left to test.

use num::{BigInt, Integer, One, Signed, Zero};

use crate::exactlin::Q;

/// Coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly(Vec<Q>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| Q::from_integer(x.into())).collect())
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Q> {
        self.0.last()
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * Q::from_integer(BigInt::from(i))).collect())
    }

    pub fn monic(&self) -> UniPoly {
        match self.lead() {
            Some(l) => {
                let inv = l.recip();
                UniPoly(self.0.iter().map(|c| c * &inv).collect())
            }
            None => self.clone(),
        }
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.0.clone();
        let lead_inv = d.lead().unwrap().recip();
        let mut quo = vec![Q::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let f = r.last().unwrap() * &lead_inv;
            if !f.is_zero() {
                for (i, c) in d.0.iter().enumerate() {
                    r[k + i] -= &f * c;
                }
                quo[k] = f;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (UniPoly::new(quo), UniPoly::new(r))
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn squarefree_part(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Integer coefficients with content 1 and positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let l = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|c| c.numer() * (&l / c.denom())).collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() {
            return ints;
        }
        if ints.last().is_some_and(Signed::is_negative) {
            g = -g;
        }
        ints.into_iter().map(|c| c / &g).collect()
    }
}

/// Rational roots (sorted, distinct) and whether non-rational roots exist over the closure.
pub fn rational_roots(p: &UniPoly) -> (Vec<Q>, bool) {
    let Some(deg) = p.degree() else {
        // The zero polynomial vanishes everywhere; callers never ask for it.
        return (Vec::new(), false);
    };
    if deg == 0 {
        return (Vec::new(), false);
    }
    let sf = p.squarefree_part();
    let sf_deg = sf.degree().unwrap();
    let mut roots = real_rational_roots(&sf);
    roots.sort();
    roots.dedup();
    let irrational = roots.len() < sf_deg;
    (roots, irrational)
}

fn sturm_chain(p: &UniPoly) -> Vec<UniPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(UniPoly::new(r.0.into_iter().map(|c| -c).collect()));
    }
    chain
}

fn sign_changes(chain: &[UniPoly], x: &Q) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for f in chain {
        let v = f.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Simplest fraction (smallest denominator) in the closed interval `[a, b]`.
pub fn simplest_between(a: &Q, b: &Q) -> Q {
    debug_assert!(a <= b);
    if !a.is_positive() && !b.is_negative() {
        return Q::zero();
    }
    if b.is_negative() {
        return -simplest_between(&-b, &-a);
    }
    let fl = a.floor();
    if &fl == a {
        return a.clone();
    }
    let up = &fl + Q::one();
    if &up <= b {
        return up;
    }
    let inner = simplest_between(&(b - &fl).recip(), &(a - &fl).recip());
    fl + inner.recip()
}

fn real_rational_roots(sf: &UniPoly) -> Vec<Q> {
    let ints = sf.primitive_integer();
    let lead = ints.last().unwrap().abs();
    let width_goal = Q::new(BigInt::one(), &lead * &lead);
    let chain = sturm_chain(sf);
    // Cauchy bound.
    let l = sf.lead().unwrap().abs();
    let bound = Q::one() + sf.0.iter().map(|c| c.abs() / &l).max().unwrap();
    let mut roots = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((a, b)) = stack.pop() {
        let count = sign_changes(&chain, &a) - sign_changes(&chain, &b);
        if count == 0 {
            continue;
        }
        if count == 1 {
            let (a, b) = shrink_single(sf, a, b, &width_goal, &mut roots);
            let r = simplest_between(&a, &b);
            if sf.eval(&r).is_zero() {
                roots.push(r);
            }
            continue;
        }
        let mut m = (&a + &b) / Q::from_integer(2.into());
        while sf.eval(&m).is_zero() {
            roots.push(m.clone());
            m = (&m + &b) / Q::from_integer(2.into());
        }
        stack.push((a, m.clone()));
        stack.push((m, b));
    }
    roots
}

/// Bisects an interval holding exactly one root (sign change) until narrower than `goal`.
fn shrink_single(sf: &UniPoly, mut a: Q, mut b: Q, goal: &Q, roots: &mut Vec<Q>) -> (Q, Q) {
    let two = Q::from_integer(2.into());
    let mut fa_pos = sf.eval(&a).is_positive();
    while &(&b - &a) >= goal {
        let m = (&a + &b) / &two;
        let fm = sf.eval(&m);
        if fm.is_zero() {
            roots.push(m.clone());
            return (m.clone(), m);
        }
        if fm.is_positive() == fa_pos {
            a = m;
            fa_pos = fm.is_positive();
        } else {
            b = m;
        }
    }
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{q, qf};

    #[test]
    fn roots_of_simple_polys() {
        // (x - 1)(x + 1)
        assert_eq!(rational_roots(&UniPoly::from_i64(&[-1, 0, 1])), (vec![q(-1), q(1)], false));
        // x^2 + 1
        assert_eq!(rational_roots(&UniPoly::from_i64(&[1, 0, 1])), (vec![], true));
        // x^2 - 2
        assert_eq!(rational_roots(&UniPoly::from_i64(&[-2, 0, 1])), (vec![], true));
        // (2x - 3)^2 (x)
        assert_eq!(rational_roots(&UniPoly::from_i64(&[0, 9, -12, 4])), (vec![q(0), qf(3, 2)], false));
    }

    #[test]
    fn roots_with_large_denominators() {
        // (7919 x - 104729)(x^2 - 3)
        let p = UniPoly::from_i64(&[3 * 104729, -3 * 7919, -104729, 7919]);
        assert_eq!(rational_roots(&p), (vec![qf(104729, 7919)], true));
    }

    #[test]
    fn simplest_fraction() {
        assert_eq!(simplest_between(&qf(3, 10), &qf(2, 5)), qf(1, 3));
        assert_eq!(simplest_between(&qf(-2, 5), &qf(-3, 10)), qf(-1, 3));
        assert_eq!(simplest_between(&qf(-1, 5), &qf(1, 5)), q(0));
        assert_eq!(simplest_between(&qf(5, 2), &qf(7, 2)), q(3));
    }
}
