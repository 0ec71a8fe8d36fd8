//! Rational points of zero-dimensional ideals.
//!
//! Works in the finite-dimensional quotient: the minimal polynomial of a
//! coordinate comes from the first linear dependence among normal forms of its
//! powers. Each rational root is pinned by adding `x - r` and the process
//! repeats until every coordinate reduces to a constant.

use num::Zero;

use super::groebner::{groebner_basis, is_zero_dimensional, normal_form, standard_monomials, GroebnerLimits, Ideal, LimitExceeded, MonomialOrder};
use super::univariate::{rational_roots, UniPoly};
use super::{Monomial, Poly};
use crate::exactlin::{solve_linear, QMatrix, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroDimSolutions {
    /// Every rational solution, sorted. `irrational` is set when other solutions
    /// exist over the algebraic closure.
    Points { points: Vec<Vec<Q>>, irrational: bool },
    PositiveDimensional,
    /// No rational solution; `irrational` says whether the variety is nonempty.
    NoRationalPoint { irrational: bool },
}

/// Rational solutions of the system. Positive-dimensional systems are reported
/// as such without further work.
pub fn rational_points_zero_dim(ideal: &Ideal, limits: &GroebnerLimits) -> Result<ZeroDimSolutions, LimitExceeded> {
    let gb = groebner_basis(&ideal.with_order(MonomialOrder::Grlex), limits)?;
    if gb.contains_unit() {
        return Ok(ZeroDimSolutions::NoRationalPoint { irrational: false });
    }
    if !is_zero_dimensional(&gb) {
        return Ok(ZeroDimSolutions::PositiveDimensional);
    }
    let mut points = Vec::new();
    let mut irrational = false;
    descend(&gb, limits, &mut points, &mut irrational)?;
    points.sort();
    points.dedup();
    for p in &points {
        debug_assert!(ideal.generators().iter().all(|g| g.eval(p).is_zero()));
    }
    if points.is_empty() {
        Ok(ZeroDimSolutions::NoRationalPoint { irrational })
    } else {
        Ok(ZeroDimSolutions::Points { points, irrational })
    }
}

fn descend(gb: &Ideal, limits: &GroebnerLimits, out: &mut Vec<Vec<Q>>, irrational: &mut bool) -> Result<(), LimitExceeded> {
    if gb.contains_unit() {
        return Ok(());
    }
    let vars = gb.vars().clone();
    let n = vars.len();
    let mut values = Vec::with_capacity(n);
    let mut open = None;
    for i in 0..n {
        let nf = normal_form(&Poly::var(vars.clone(), i), gb);
        match nf.total_degree() {
            None => values.push(Q::zero()),
            Some(0) => values.push(nf.coeff(&vec![0; n])),
            Some(_) => {
                open = Some(i);
                break;
            }
        }
    }
    let Some(v) = open else {
        out.push(values);
        return Ok(());
    };
    let basis = standard_monomials(gb).expect("zero-dimensional");
    let minpoly = minimal_polynomial(gb, &basis, v);
    let (roots, irr) = rational_roots(&minpoly);
    *irrational |= irr;
    for r in roots {
        let mut gens = gb.generators().to_vec();
        let mut pin = Poly::var(vars.clone(), v);
        pin.add_term(vec![0; n], -r);
        gens.push(pin);
        let sub = groebner_basis(&Ideal::new(vars.clone(), gens, MonomialOrder::Grlex), limits)?;
        descend(&sub, limits, out, irrational)?;
    }
    Ok(())
}

fn coordinates(p: &Poly, basis: &[Monomial]) -> Vec<Q> {
    basis.iter().map(|m| p.coeff(m)).collect()
}

/// Minimal polynomial of multiplication by `x_v` on the quotient.
fn minimal_polynomial(gb: &Ideal, basis: &[Monomial], v: usize) -> UniPoly {
    let vars = gb.vars().clone();
    let x = Poly::var(vars.clone(), v);
    let mut power = Poly::constant(vars, num::One::one());
    let mut cols: Vec<Vec<Q>> = Vec::new();
    loop {
        let c = coordinates(&power, basis);
        if !cols.is_empty() {
            let m = QMatrix::from_cols(&cols, basis.len()).expect("consistent sizes");
            if let Some(sol) = solve_linear(&m, &c).expect("consistent sizes") {
                let mut coeffs: Vec<Q> = sol.into_iter().map(|s| -s).collect();
                coeffs.push(num::One::one());
                return UniPoly::new(coeffs);
            }
        } else if c.iter().all(Zero::is_zero) {
            return UniPoly::new(vec![num::One::one()]);
        }
        cols.push(c);
        power = normal_form(&power.mul(&x), gb);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{q, qf};
    use crate::polyring::{parse_poly, var_list};

    fn solve(vars: &[&str], gens: &[&str]) -> ZeroDimSolutions {
        let v = var_list(vars);
        let ideal = Ideal::new(v.clone(), gens.iter().map(|g| parse_poly(g, &v).unwrap()).collect(), MonomialOrder::Grlex);
        rational_points_zero_dim(&ideal, &GroebnerLimits::default()).unwrap()
    }

    #[test]
    fn finite_rational_sets() {
        assert_eq!(
            solve(&["x", "y"], &["x^2 - 1", "y - x"]),
            ZeroDimSolutions::Points { points: vec![vec![q(-1), q(-1)], vec![q(1), q(1)]], irrational: false }
        );
        assert_eq!(
            solve(&["x", "y"], &["2*x - 1", "y^2 - 2"]),
            ZeroDimSolutions::NoRationalPoint { irrational: true }
        );
        assert_eq!(
            solve(&["x", "y"], &["x*y - 1", "x^2 - 4", "y^2 - 1/4", "x - 4*y"]),
            ZeroDimSolutions::Points { points: vec![vec![q(-2), qf(-1, 2)], vec![q(2), qf(1, 2)]], irrational: false }
        );
    }

    #[test]
    fn mixed_and_degenerate_cases() {
        assert_eq!(
            solve(&["x", "y"], &["x^3 - 2*x", "y"]),
            ZeroDimSolutions::Points { points: vec![vec![q(0), q(0)]], irrational: true }
        );
        assert_eq!(solve(&["x", "y"], &["x*y"]), ZeroDimSolutions::PositiveDimensional);
        assert_eq!(solve(&["x"], &["x", "x - 1"]), ZeroDimSolutions::NoRationalPoint { irrational: false });
    }
}
