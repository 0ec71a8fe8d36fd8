//! Buchberger's algorithm with the Gebauer–Möller pair criteria.
//!
//! Coefficients are kept as primitive integer polynomials during the run
//! (pseudo-reduction), and the final reduced basis is returned monic over the
//! rationals. S-pairs are processed by increasing degree of their lcm, ties
//! broken by the monomial order and then by insertion index, so runs are
//! reproducible.

use std::cmp::Ordering;

use num::integer::Integer;
use num::{BigInt, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{degree, Monomial, Poly, VarList};
use crate::exactlin::{rref_rows, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    /// Graded lexicographic.
    Grlex,
    /// Pure lexicographic in the declared variable order (first variable largest).
    Lex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Grlex => degree(a).cmp(&degree(b)).then_with(|| a.cmp(b)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct GroebnerLimits {
    pub max_pair_reductions: usize,
    pub max_coeff_bits: u64,
}

impl Default for GroebnerLimits {
    fn default() -> Self {
        GroebnerLimits { max_pair_reductions: 20_000, max_coeff_bits: 4096 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroebnerStats {
    pub reductions: usize,
    pub basis_len: usize,
    pub max_coeff_bits: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("Gröbner limit exceeded ({what}) after {} S-pair reductions; basis size {}, max coefficient bits {}", stats.reductions, stats.basis_len, stats.max_coeff_bits)]
pub struct LimitExceeded {
    pub what: &'static str,
    pub stats: GroebnerStats,
}

/// Generators over a shared variable list, tagged with a monomial order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    vars: VarList,
    generators: Vec<Poly>,
    order: MonomialOrder,
}

impl Ideal {
    /// Zero generators are dropped.
    pub fn new(vars: VarList, generators: Vec<Poly>, order: MonomialOrder) -> Self {
        for g in &generators {
            assert!(g.vars()[..] == vars[..], "generator over a different variable list");
        }
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal { vars, generators, order }
    }

    pub fn vars(&self) -> &VarList {
        &self.vars
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn with_order(&self, order: MonomialOrder) -> Ideal {
        Ideal { order, ..self.clone() }
    }

    /// True when a nonzero constant is among the generators.
    pub fn contains_unit(&self) -> bool {
        self.generators.iter().any(|g| g.total_degree() == Some(0))
    }

    pub fn leading_monomial(&self, p: &Poly) -> Option<Monomial> {
        leading_term(p, self.order).map(|(m, _)| m)
    }
}

pub fn leading_term(p: &Poly, order: MonomialOrder) -> Option<(Monomial, Q)> {
    p.terms().max_by(|a, b| order.cmp(a.0, b.0)).map(|(m, c)| (m.clone(), c.clone()))
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm_mono(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

fn mono_sub(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn mono_add(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

// ---------------------------------------------------------------------------
// Integer polynomials used inside the run.

#[derive(Clone, Debug)]
struct IPoly {
    /// Sorted by the monomial order, largest first; no zero coefficients.
    terms: Vec<(Monomial, BigInt)>,
}

impl IPoly {
    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn lc(&self) -> &BigInt {
        &self.terms[0].1
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn from_poly(p: &Poly, order: MonomialOrder) -> IPoly {
        let l = p.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let mut terms: Vec<(Monomial, BigInt)> = p.terms().map(|(m, c)| (m.clone(), c.numer() * (&l / c.denom()))).collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut f = IPoly { terms };
        f.make_primitive();
        f
    }

    fn make_primitive(&mut self) {
        if self.terms.is_empty() {
            return;
        }
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if self.terms[0].1.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for (_, c) in self.terms.iter_mut() {
                *c /= &g;
            }
        }
    }

    fn max_bits(&self) -> u64 {
        self.terms.iter().map(|(_, c)| c.bits()).max().unwrap_or(0)
    }

    fn to_poly(&self, vars: &VarList) -> Poly {
        let lc = Q::from_integer(self.lc().clone());
        Poly::from_terms(vars.clone(), self.terms.iter().map(|(m, c)| (m.clone(), Q::from_integer(c.clone()) / &lc)))
    }
}

/// `a·f − b·(x^shift·g)`, both inputs sorted largest first.
fn combine(
    f: &[(Monomial, BigInt)],
    a: &BigInt,
    g: &[(Monomial, BigInt)],
    shift: &[u32],
    b: &BigInt,
    order: MonomialOrder,
) -> Vec<(Monomial, BigInt)> {
    let mut out = Vec::with_capacity(f.len() + g.len());
    let mut i = 0;
    let mut j = 0;
    let gs: Vec<Monomial> = g.iter().map(|(m, _)| mono_add(m, shift)).collect();
    while i < f.len() || j < g.len() {
        let ord = if i == f.len() {
            Ordering::Less
        } else if j == g.len() {
            Ordering::Greater
        } else {
            order.cmp(&f[i].0, &gs[j])
        };
        match ord {
            Ordering::Greater => {
                out.push((f[i].0.clone(), a * &f[i].1));
                i += 1;
            }
            Ordering::Less => {
                out.push((gs[j].clone(), -(b * &g[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let c = a * &f[i].1 - b * &g[j].1;
                if !c.is_zero() {
                    out.push((f[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

struct Run<'a> {
    order: MonomialOrder,
    limits: &'a GroebnerLimits,
    stats: GroebnerStats,
}

impl Run<'_> {
    fn exceeded(&self, what: &'static str) -> LimitExceeded {
        LimitExceeded { what, stats: self.stats }
    }

    fn note_bits(&mut self, bits: u64) -> Result<(), LimitExceeded> {
        self.stats.max_coeff_bits = self.stats.max_coeff_bits.max(bits);
        if bits > self.limits.max_coeff_bits {
            return Err(self.exceeded("coefficient bit length"));
        }
        Ok(())
    }

    /// Full pseudo-reduction of `f` modulo `basis`.
    fn reduce(&mut self, f: IPoly, basis: &[&IPoly]) -> Result<IPoly, LimitExceeded> {
        let mut done: Vec<(Monomial, BigInt)> = Vec::new();
        let mut rest = f.terms;
        let mut start = 0;
        while start < rest.len() {
            let m = &rest[start].0;
            if let Some(g) = basis.iter().find(|g| divides(g.lm(), m)) {
                let c = &rest[start].1;
                let gcd = c.gcd(g.lc());
                let a = g.lc() / &gcd;
                let b = c / &gcd;
                let shift = mono_sub(m, g.lm());
                rest = combine(&rest[start..], &a, &g.terms, &shift, &b, self.order);
                start = 0;
                if !a.is_one() {
                    for t in done.iter_mut() {
                        t.1 *= &a;
                    }
                }
                if let Some((_, c)) = rest.first() {
                    // Cheap guard against runaway growth mid-reduction.
                    if c.bits() > 4 * self.limits.max_coeff_bits {
                        return Err(self.exceeded("coefficient bit length"));
                    }
                }
            } else {
                done.push(rest[start].clone());
                start += 1;
            }
        }
        let mut out = IPoly { terms: done };
        out.make_primitive();
        self.note_bits(out.max_bits())?;
        Ok(out)
    }

    fn spoly(&self, f: &IPoly, g: &IPoly) -> IPoly {
        let l = lcm_mono(f.lm(), g.lm());
        let gcd = f.lc().gcd(g.lc());
        let a = g.lc() / &gcd;
        let b = f.lc() / &gcd;
        let sf = mono_sub(&l, f.lm());
        let sg = mono_sub(&l, g.lm());
        let fs: Vec<(Monomial, BigInt)> = f.terms.iter().map(|(m, c)| (mono_add(m, &sf), c.clone())).collect();
        let mut out = IPoly { terms: combine(&fs, &a, &g.terms, &sg, &b, self.order) };
        out.make_primitive();
        out
    }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Gebauer–Möller update of the active set and pair list after adding `h`.
fn update(polys: &[IPoly], active: &mut Vec<usize>, pairs: &mut Vec<Pair>, h: usize) {
    let lh = polys[h].lm().clone();
    let cands: Vec<usize> = active.clone();
    let mut kept: Vec<usize> = Vec::new();
    for (idx, &g1) in cands.iter().enumerate() {
        let lg1 = polys[g1].lm();
        let l1 = lcm_mono(&lh, lg1);
        if coprime(&lh, lg1) {
            kept.push(g1);
            continue;
        }
        let dominated = cands[idx + 1..].iter().chain(kept.iter()).any(|&g2| divides(&lcm_mono(&lh, polys[g2].lm()), &l1));
        if !dominated {
            kept.push(g1);
        }
    }
    let new_pairs: Vec<Pair> = kept
        .into_iter()
        .filter(|&g| !coprime(&lh, polys[g].lm()))
        .map(|g| Pair { i: g, j: h, lcm: lcm_mono(&lh, polys[g].lm()) })
        .collect();
    pairs.retain(|p| {
        !divides(&lh, &p.lcm)
            || lcm_mono(polys[p.i].lm(), &lh) == p.lcm
            || lcm_mono(polys[p.j].lm(), &lh) == p.lcm
    });
    pairs.extend(new_pairs);
    active.retain(|&g| !divides(&lh, polys[g].lm()));
    active.push(h);
}

/// Gaussian elimination of the generators over their monomials.
fn linear_interreduce(gens: &[Poly], order: MonomialOrder) -> Vec<Poly> {
    let Some(first) = gens.first() else { return Vec::new() };
    let vars = first.vars().clone();
    let mut monos: Vec<Monomial> = gens.iter().flat_map(|g| g.terms().map(|(m, _)| m.clone())).collect();
    monos.sort_by(|a, b| order.cmp(b, a));
    monos.dedup();
    let index: std::collections::HashMap<&Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let rows: Vec<Vec<Q>> = gens
        .iter()
        .map(|g| {
            let mut r = vec![Q::zero(); monos.len()];
            for (m, c) in g.terms() {
                r[index[m]] = c.clone();
            }
            r
        })
        .collect();
    let (red, _) = rref_rows(&rows, monos.len());
    red.into_iter()
        .map(|r| Poly::from_terms(vars.clone(), r.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (monos[i].clone(), c))))
        .collect()
}

/// Reduced Gröbner basis of `ideal` under its monomial order.
pub fn groebner_basis(ideal: &Ideal, limits: &GroebnerLimits) -> Result<Ideal, LimitExceeded> {
    groebner_basis_with_stats(ideal, limits).map(|(gb, _)| gb)
}

pub fn groebner_basis_with_stats(ideal: &Ideal, limits: &GroebnerLimits) -> Result<(Ideal, GroebnerStats), LimitExceeded> {
    let order = ideal.order;
    let vars = ideal.vars.clone();
    let mut run = Run { order, limits, stats: GroebnerStats::default() };

    let mut inputs: Vec<IPoly> =
        linear_interreduce(&ideal.generators, order).iter().map(|p| IPoly::from_poly(p, order)).collect();
    inputs.sort_by(|a, b| order.cmp(a.lm(), b.lm()));

    let mut polys: Vec<IPoly> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    for f in inputs {
        let basis: Vec<&IPoly> = active.iter().map(|&i| &polys[i]).collect();
        let r = run.reduce(f, &basis)?;
        if r.is_zero() {
            continue;
        }
        let unit = degree(r.lm()) == 0;
        polys.push(r);
        let h = polys.len() - 1;
        if unit {
            return Ok(unit_ideal(&vars, order, run.stats));
        }
        update(&polys, &mut active, &mut pairs, h);
    }

    while !pairs.is_empty() {
        let best = (0..pairs.len())
            .min_by(|&a, &b| {
                let (pa, pb) = (&pairs[a], &pairs[b]);
                degree(&pa.lcm)
                    .cmp(&degree(&pb.lcm))
                    .then_with(|| order.cmp(&pa.lcm, &pb.lcm))
                    .then_with(|| (pa.i, pa.j).cmp(&(pb.i, pb.j)))
            })
            .expect("nonempty");
        let pair = pairs.swap_remove(best);
        run.stats.reductions += 1;
        if run.stats.reductions > limits.max_pair_reductions {
            run.stats.basis_len = active.len();
            return Err(run.exceeded("S-pair reductions"));
        }
        let s = run.spoly(&polys[pair.i], &polys[pair.j]);
        let basis: Vec<&IPoly> = active.iter().map(|&i| &polys[i]).collect();
        let r = run.reduce(s, &basis)?;
        if r.is_zero() {
            continue;
        }
        let unit = degree(r.lm()) == 0;
        polys.push(r);
        let h = polys.len() - 1;
        if unit {
            return Ok(unit_ideal(&vars, order, run.stats));
        }
        update(&polys, &mut active, &mut pairs, h);
    }

    // Interreduce tails; leading monomials of the active set are already minimal.
    let mut reduced: Vec<IPoly> = Vec::with_capacity(active.len());
    for (k, &i) in active.iter().enumerate() {
        let others: Vec<&IPoly> = active.iter().enumerate().filter(|&(l, _)| l != k).map(|(_, &j)| &polys[j]).collect();
        let g = &polys[i];
        let head = IPoly { terms: vec![g.terms[0].clone()] };
        let tail = IPoly { terms: g.terms[1..].to_vec() };
        let mut t = run.reduce_tail(head, tail, &others)?;
        t.make_primitive();
        reduced.push(t);
    }
    reduced.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    run.stats.basis_len = reduced.len();
    let gens = reduced.iter().map(|p| p.to_poly(&vars)).collect();
    Ok((Ideal { vars, generators: gens, order }, run.stats))
}

impl Run<'_> {
    /// Reduces the tail of `head + tail` while keeping the head term.
    fn reduce_tail(&mut self, head: IPoly, tail: IPoly, basis: &[&IPoly]) -> Result<IPoly, LimitExceeded> {
        // The head is never a divisor candidate; it only gets rescaled.
        let mut done: Vec<(Monomial, BigInt)> = head.terms;
        let mut rest = tail.terms;
        let mut start = 0;
        while start < rest.len() {
            let m = &rest[start].0;
            if let Some(g) = basis.iter().find(|g| divides(g.lm(), m)) {
                let c = &rest[start].1;
                let gcd = c.gcd(g.lc());
                let a = g.lc() / &gcd;
                let b = c / &gcd;
                let shift = mono_sub(m, g.lm());
                rest = combine(&rest[start..], &a, &g.terms, &shift, &b, self.order);
                start = 0;
                if !a.is_one() {
                    for t in done.iter_mut() {
                        t.1 *= &a;
                    }
                }
            } else {
                done.push(rest[start].clone());
                start += 1;
            }
        }
        let out = IPoly { terms: done };
        self.note_bits(out.max_bits())?;
        Ok(out)
    }
}

fn unit_ideal(vars: &VarList, order: MonomialOrder, mut stats: GroebnerStats) -> (Ideal, GroebnerStats) {
    stats.basis_len = 1;
    (Ideal { vars: vars.clone(), generators: vec![Poly::constant(vars.clone(), Q::one())], order }, stats)
}

// ---------------------------------------------------------------------------
// Quotient-ring helpers for reduced bases.

/// Normal form of `p` modulo a reduced (monic) Gröbner basis.
pub fn normal_form(p: &Poly, gb: &Ideal) -> Poly {
    let order = gb.order;
    let leads: Vec<(Monomial, &Poly)> = gb.generators.iter().map(|g| (gb.leading_monomial(g).expect("nonzero"), g)).collect();
    let mut rem = Poly::zero(p.vars().clone());
    let mut f = p.clone();
    while let Some((m, c)) = leading_term(&f, order) {
        if let Some((lm, g)) = leads.iter().find(|(lm, _)| divides(lm, &m)) {
            let shift = mono_sub(&m, lm);
            let lc = g.coeff(lm);
            f = f.sub(&g.mul_monomial(&shift).scale(&(&c / lc)));
        } else {
            rem.add_term(m.clone(), c.clone());
            f.add_term(m, -c);
        }
    }
    rem
}

/// Zero-dimensionality test: every variable has a pure power among the leading monomials.
pub fn is_zero_dimensional(gb: &Ideal) -> bool {
    let n = gb.vars.len();
    let leads: Vec<Monomial> = gb.generators.iter().filter_map(|g| gb.leading_monomial(g)).collect();
    (0..n).all(|i| leads.iter().any(|m| m[i] > 0 && m.iter().enumerate().all(|(j, &e)| j == i || e == 0)))
}

/// Monomials outside the leading-term ideal; `None` when there are infinitely many.
pub fn standard_monomials(gb: &Ideal) -> Option<Vec<Monomial>> {
    if !is_zero_dimensional(gb) {
        return None;
    }
    let n = gb.vars.len();
    let leads: Vec<Monomial> = gb.generators.iter().filter_map(|g| gb.leading_monomial(g)).collect();
    let standard = |m: &Monomial| !leads.iter().any(|l| divides(l, m));
    let mut out = Vec::new();
    let one = vec![0u32; n];
    if !standard(&one) {
        return Some(out);
    }
    let mut queue = std::collections::VecDeque::from([one.clone()]);
    let mut seen = std::collections::HashSet::from([one]);
    while let Some(m) = queue.pop_front() {
        for i in 0..n {
            let mut next = m.clone();
            next[i] += 1;
            if standard(&next) && seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
        out.push(m);
    }
    out.sort_by(|a, b| gb.order.cmp(a, b));
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{parse_poly, var_list};

    fn ideal(vars: &[&str], gens: &[&str], order: MonomialOrder) -> Ideal {
        let v = var_list(vars);
        Ideal::new(v.clone(), gens.iter().map(|g| parse_poly(g, &v).unwrap()).collect(), order)
    }

    fn gens_str(i: &Ideal) -> Vec<String> {
        i.generators().iter().map(|g| g.to_string()).collect()
    }

    #[test]
    fn single_linear_generator() {
        let gb = groebner_basis(&ideal(&["x"], &["x - 1"], MonomialOrder::Lex), &GroebnerLimits::default()).unwrap();
        assert_eq!(gens_str(&gb), vec!["x - 1"]);
    }

    #[test]
    fn monomial_ideal_is_already_reduced() {
        // S(x^2, xy) = y·x^2 − x·xy = 0, so {x^2, xy} is its own reduced basis.
        let gb = groebner_basis(&ideal(&["x", "y"], &["x^2", "x*y"], MonomialOrder::Lex), &GroebnerLimits::default()).unwrap();
        assert_eq!(gens_str(&gb), vec!["x*y", "x^2"]);
    }

    #[test]
    fn linear_system() {
        let gb = groebner_basis(&ideal(&["x", "y"], &["x + y", "x - y"], MonomialOrder::Lex), &GroebnerLimits::default()).unwrap();
        assert_eq!(gens_str(&gb), vec!["y", "x"]);
    }

    #[test]
    fn textbook_example() {
        // Cox–Little–O'Shea: {x^3 - 2xy, x^2 y - 2y^2 + x} under grlex.
        let gb = groebner_basis(
            &ideal(&["x", "y"], &["x^3 - 2*x*y", "x^2*y - 2*y^2 + x"], MonomialOrder::Grlex),
            &GroebnerLimits::default(),
        )
        .unwrap();
        assert_eq!(gens_str(&gb), vec!["y^2 - 1/2*x", "x*y", "x^2"]);
    }

    #[test]
    fn unit_ideal_detected() {
        let gb = groebner_basis(&ideal(&["x", "y"], &["x*y - 1", "x"], MonomialOrder::Grlex), &GroebnerLimits::default()).unwrap();
        assert!(gb.contains_unit());
    }

    #[test]
    fn limits_are_enforced() {
        let limits = GroebnerLimits { max_pair_reductions: 0, max_coeff_bits: 4096 };
        let err = groebner_basis(
            &ideal(&["x", "y"], &["x^3 - 2*x*y", "x^2*y - 2*y^2 + x"], MonomialOrder::Grlex),
            &limits,
        )
        .unwrap_err();
        assert_eq!(err.what, "S-pair reductions");
    }

    #[test]
    fn standard_monomials_of_point_ideal() {
        let gb = groebner_basis(&ideal(&["x", "y"], &["x^2 - 1", "y - x"], MonomialOrder::Grlex), &GroebnerLimits::default()).unwrap();
        assert!(is_zero_dimensional(&gb));
        let sm = standard_monomials(&gb).unwrap();
        assert_eq!(sm.len(), 2);
        let v = gb.vars().clone();
        let nf = normal_form(&parse_poly("x^3 + y", &v).unwrap(), &gb);
        assert_eq!(nf.to_string(), "2*y");
    }
}
