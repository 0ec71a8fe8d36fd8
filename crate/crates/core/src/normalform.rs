//! Recognition of cubics of the shape
//! `x0²y0 + x0(x1y1 + … + xkyk + c_{k+1}x_{k+1}² + … + c_s x_s²) + Q3(x1..xk)`
//! with `Q3` non-degenerated, and construction of the coordinate change.
//!
//! New coordinates are always ordered `x0, x1..xs, y1..yr, y0`; the transform
//! `T` satisfies `C∘T = normal_poly` where the columns of `T` are the new basis
//! vectors written in the input coordinates.

use std::time::{Duration, Instant};

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{kernel_basis, solve_linear, vec_add, vec_scale, vec_sub, QMatrix, Subspace, Q};
use crate::forms::{
    degenerate_space, essential_split, factor_rank_one, polarize, quad_radical, rank_one_points, CubicForm, QuadForm,
    RankOnePoint, RankOneSearch, UndecidedReason,
};
use crate::polyring::groebner::GroebnerLimits;
use crate::polyring::{Poly, VarList};

/// `C∘T = x0²y0 + x0·B + C3` with `B`, `C3` on the middle coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitData {
    pub b: QuadForm,
    pub c3: CubicForm,
    /// The coefficient of `x0²y0` before `y0` absorbed it.
    pub c_scale: Q,
    pub transform: QMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KernelFailure {
    KGeqOne,
    K2NotInK3,
    RankCondition,
}

impl KernelFailure {
    pub fn code(self) -> &'static str {
        match self {
            KernelFailure::KGeqOne => "KGeqOne",
            KernelFailure::K2NotInK3 => "K2NotInK3",
            KernelFailure::RankCondition => "RankCondition",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelConditions {
    pub k: usize,
    /// `rank B − k`; negative values only occur on failure.
    pub s: i64,
    pub k2: Subspace,
    pub k3: Subspace,
    pub failure: Option<KernelFailure>,
}

impl KernelConditions {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalBasis {
    /// Columns `a1..ak, x_{k+1}..x_s, b1..bk, K2 basis`.
    pub transform: QMatrix,
    pub k: usize,
    pub s: usize,
    pub square_coeffs: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFormCertificate {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub transform: QMatrix,
    pub square_coeffs: Vec<Q>,
    pub normal_poly: Poly,
    /// `C∘T = scalar · normal_poly`.
    pub scalar: Q,
    /// The rank-one point used, in input coordinates.
    pub point: RankOnePoint,
}

impl NormalFormCertificate {
    /// `r = n − 1 − s`, the number of `y` coordinates besides `y0`.
    pub fn r(&self) -> usize {
        self.n - 1 - self.s
    }

    pub fn unique(&self) -> bool {
        self.k + self.s + 1 == self.n
    }

    /// Indices of the middle coordinates within the normal coordinates.
    pub fn h_dim(&self) -> usize {
        self.n - 1
    }

    /// The middle quadratic form, `Σ xᵢyᵢ + Σ c_j x_j²`.
    pub fn quad_part(&self) -> QuadForm {
        let h = self.h_dim();
        let mut m = QMatrix::zeros(h, h);
        let half = Q::new(1.into(), 2.into());
        for i in 0..self.k {
            m.set(i, self.s + i, half.clone());
            m.set(self.s + i, i, half.clone());
        }
        for (j, c) in self.square_coeffs.iter().enumerate() {
            m.set(self.k + j, self.k + j, c.clone());
        }
        QuadForm::from_matrix(m).expect("symmetric")
    }

    /// The part of the normal form free of `x0` and `y0`, over the middle coordinates.
    pub fn cubic_part(&self) -> CubicForm {
        let n1 = self.n + 1;
        let vars: VarList = self.normal_poly.vars()[1..self.n].to_vec().into();
        let mut p = Poly::zero(vars);
        for (m, c) in self.normal_poly.terms() {
            if m[0] == 0 && m[n1 - 1] == 0 {
                p.add_term(m[1..self.n].to_vec(), c.clone());
            }
        }
        CubicForm::new(p).expect("homogeneous part")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NoReason {
    NoRankOnePoint,
    K2NotInK3,
    RankCondition,
    TooFewVariables,
}

impl NoReason {
    pub fn code(self) -> &'static str {
        match self {
            NoReason::NoRankOnePoint => "NoRankOnePoint",
            NoReason::K2NotInK3 => "K2NotInK3",
            NoReason::RankCondition => "RankCondition",
            NoReason::TooFewVariables => "TooFewVariables",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Admits { certificate: Box<NormalFormCertificate>, unique: bool, pair_count_hint: usize },
    No(NoReason),
    Reducible,
    Undecided(UndecidedReason),
}

impl Verdict {
    pub fn code(&self) -> &'static str {
        match self {
            Verdict::Admits { .. } => "admits",
            Verdict::No(_) => "no",
            Verdict::Reducible => "reducible",
            Verdict::Undecided(_) => "undecided",
        }
    }

    pub fn certificate(&self) -> Option<&NormalFormCertificate> {
        match self {
            Verdict::Admits { certificate, .. } => Some(certificate),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Recognition {
    pub verdict: Verdict,
    /// Rational rank-one points of the reduced form that were tried.
    pub candidates: usize,
    pub elapsed: Duration,
}

/// Names `x0, x1..xs, y1..yr, y0`.
pub fn normal_vars(s: usize, r: usize) -> VarList {
    let mut names = vec!["x0".to_string()];
    names.extend((1..=s).map(|i| format!("x{i}")));
    names.extend((1..=r).map(|i| format!("y{i}")));
    names.push("y0".to_string());
    names.into()
}

fn split_vars(h: usize) -> VarList {
    let mut names = vec!["x0".to_string()];
    names.extend((1..=h).map(|i| format!("m{i}")));
    names.push("y0".to_string());
    names.into()
}

fn basis_matrix(cols: &[Vec<Q>], n: usize) -> QMatrix {
    QMatrix::from_cols(cols, n).expect("column lengths")
}

fn bad(msg: impl Into<String>) -> Error {
    Error::BadCertificate(msg.into())
}

pub fn split_at_point(c: &CubicForm, r: &RankOnePoint) -> Result<SplitData> {
    let n1 = c.dim();
    if n1 < 3 {
        return Err(bad("too few variables"));
    }
    let h = n1 - 2;
    let checked = factor_rank_one(&polarize(c), r.p.clone()).ok_or_else(|| bad("not a rank-one point"))?;
    if checked.ell != r.ell || checked.c != r.c || r.c.is_zero() {
        return Err(bad("rank-one data does not match the form"));
    }
    let j = r.ell.iter().position(|x| !x.is_zero()).ok_or_else(|| bad("zero linear form"))?;
    let mut u0 = vec![Q::zero(); n1];
    u0[j] = r.ell[j].recip();
    let ell_ker = kernel_basis(&QMatrix::from_rows(std::slice::from_ref(&r.ell), n1)?);
    let middle = Subspace::span(n1, std::slice::from_ref(&r.p)).complement_from(ell_ker.basis());
    debug_assert_eq!(middle.len(), h);

    let mut cols = vec![u0.clone()];
    cols.extend(middle.iter().cloned());
    cols.push(r.p.clone());
    let t0 = basis_matrix(&cols, n1);
    let vars = split_vars(h);
    let p0 = c.poly().substitute_linear(&t0)?.with_vars(vars.clone())?;

    let mono = |x0: u32, y0: u32| {
        let mut m = vec![0u32; n1];
        m[0] = x0;
        m[n1 - 1] = y0;
        m
    };
    let cc = p0.coeff(&mono(2, 1));
    if cc != r.c {
        return Err(bad("x0²y0 coefficient differs from the rank-one scale"));
    }
    for (m, _) in p0.terms() {
        let ey = m[n1 - 1];
        if ey >= 2 || (ey == 1 && m[0] != 2) {
            return Err(bad("y0 occurs outside x0²y0"));
        }
    }
    let a = p0.coeff(&mono(3, 0));
    let ls: Vec<Q> = (1..=h)
        .map(|i| {
            let mut m = vec![0u32; n1];
            m[0] = 2;
            m[i] = 1;
            p0.coeff(&m)
        })
        .collect();
    // y0 ← c·y0 + a·x0 + L(μ): in basis terms u0 −= (a/c)p, m_i −= (L_i/c)p, p ← p/c.
    let cinv = r.c.recip();
    let mut cols2 = vec![vec_sub(&u0, &vec_scale(&r.p, &(&a * &cinv)))];
    for (mi, li) in middle.iter().zip(&ls) {
        cols2.push(vec_sub(mi, &vec_scale(&r.p, &(li * &cinv))));
    }
    cols2.push(vec_scale(&r.p, &cinv));
    let transform = basis_matrix(&cols2, n1);
    let p1 = c.poly().substitute_linear(&transform)?.with_vars(vars.clone())?;

    let mid_vars: VarList = vars[1..=h].to_vec().into();
    let mut bpoly = Poly::zero(mid_vars.clone());
    let mut c3 = Poly::zero(mid_vars);
    for (m, coef) in p1.terms() {
        match (m[0], m[n1 - 1]) {
            (2, 1) if coef.is_one() => {}
            (1, 0) => bpoly.add_term(m[1..=h].to_vec(), coef.clone()),
            (0, 0) => c3.add_term(m[1..=h].to_vec(), coef.clone()),
            _ => return Err(bad(format!("unexpected term after absorbing y0 (coefficient {coef})"))),
        }
    }
    if p1.coeff(&mono(2, 1)) != Q::one() {
        return Err(bad("x0²y0 coefficient is not 1 after absorbing"));
    }
    Ok(SplitData { b: QuadForm::from_poly(&bpoly)?, c3: CubicForm::new(c3)?, c_scale: r.c.clone(), transform })
}

/// Radical of `B̃` restricted to the subspace `w`, as a subspace of the ambient space.
fn restricted_radical(b: &QuadForm, w: &Subspace) -> Subspace {
    let basis = w.basis();
    if basis.is_empty() {
        return Subspace::zero(b.dim());
    }
    let rows: Vec<Vec<Q>> = basis.iter().map(|u| basis.iter().map(|v| b.bilinear(u, v)).collect()).collect();
    let gram = QMatrix::from_rows(&rows, basis.len()).expect("square");
    let ker = kernel_basis(&gram);
    let vecs: Vec<Vec<Q>> = ker
        .basis()
        .iter()
        .map(|coef| {
            let mut v = vec![Q::zero(); b.dim()];
            for (c, u) in coef.iter().zip(basis) {
                if !c.is_zero() {
                    v = vec_add(&v, &vec_scale(u, c));
                }
            }
            v
        })
        .collect();
    Subspace::span(b.dim(), &vecs)
}

pub fn kernel_conditions(b: &QuadForm, c3: &CubicForm) -> Result<KernelConditions> {
    let h = b.dim();
    if c3.dim() != h {
        return Err(Error::DimensionMismatch { context: "kernel_conditions", expected: h, found: c3.dim() });
    }
    let k2 = quad_radical(b);
    let k3 = degenerate_space(c3);
    let k = h - k3.dim();
    let s = (h - k2.dim()) as i64 - k as i64;
    let failure = if k < 1 {
        Some(KernelFailure::KGeqOne)
    } else if !k2.is_subspace_of(&k3) {
        Some(KernelFailure::K2NotInK3)
    } else if restricted_radical(b, &k3).dim() != k2.dim() + k {
        Some(KernelFailure::RankCondition)
    } else {
        None
    };
    Ok(KernelConditions { k, s, k2, k3, failure })
}

/// Symmetric Gram–Schmidt on a space where `B` is non-degenerate.
fn diagonalize(b: &QuadForm, basis: &[Vec<Q>]) -> Result<(Vec<Vec<Q>>, Vec<Q>)> {
    let mut rest: Vec<Vec<Q>> = basis.to_vec();
    let mut out = Vec::new();
    let mut coeffs = Vec::new();
    while !rest.is_empty() {
        let pick = match rest.iter().position(|v| !b.bilinear(v, v).is_zero()) {
            Some(i) => rest.remove(i),
            None => {
                let (i, j) = (0..rest.len())
                    .flat_map(|i| (i + 1..rest.len()).map(move |j| (i, j)))
                    .find(|&(i, j)| !b.bilinear(&rest[i], &rest[j]).is_zero())
                    .ok_or_else(|| Error::Precondition("quadratic form degenerate on the square block".into()))?;
                let v = vec_add(&rest[i], &rest[j]);
                rest.remove(i);
                v
            }
        };
        let cw = b.bilinear(&pick, &pick);
        rest = rest
            .into_iter()
            .map(|v| {
                let f = b.bilinear(&v, &pick) / &cw;
                vec_sub(&v, &vec_scale(&pick, &f))
            })
            .collect();
        out.push(pick);
        coeffs.push(cw);
    }
    Ok((out, coeffs))
}

pub fn build_normal_basis(b: &QuadForm, c3: &CubicForm) -> Result<NormalBasis> {
    let kc = kernel_conditions(b, c3)?;
    if let Some(f) = kc.failure {
        return Err(Error::Precondition(format!("kernel conditions fail: {}", f.code())));
    }
    let h = b.dim();
    let k = kc.k;
    let s = kc.s as usize;
    let w = restricted_radical(b, &kc.k3);
    let ys = kc.k2.complement_from(w.basis());
    let xs_raw = w.complement_from(kc.k3.basis());
    let (xs, square_coeffs) = diagonalize(b, &xs_raw)?;
    debug_assert_eq!(ys.len(), k);
    debug_assert_eq!(xs.len() + k, s);

    // a_i with B̃(a_i, b_j) = ½δ_ij.
    let pairing = QMatrix::from_rows(&ys.iter().map(|y| b.matrix().mul_vec(y).expect("dims")).collect::<Vec<_>>(), h)?;
    let half = Q::new(1.into(), 2.into());
    let mut a_vecs = Vec::with_capacity(k);
    for i in 0..k {
        let mut rhs = vec![Q::zero(); k];
        rhs[i] = half.clone();
        let a = solve_linear(&pairing, &rhs)?.ok_or_else(|| Error::Precondition("pairing with Y not surjective".into()))?;
        a_vecs.push(a);
    }
    for a in a_vecs.iter_mut() {
        for (x, cx) in xs.iter().zip(&square_coeffs) {
            let f = b.bilinear(a, x) / cx;
            if !f.is_zero() {
                *a = vec_sub(a, &vec_scale(x, &f));
            }
        }
    }
    let gram: Vec<Vec<Q>> = a_vecs.iter().map(|u| a_vecs.iter().map(|v| b.bilinear(u, v)).collect()).collect();
    let a_vecs: Vec<Vec<Q>> = a_vecs
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let mut v = a.clone();
            for (m, y) in ys.iter().enumerate() {
                if !gram[i][m].is_zero() {
                    v = vec_sub(&v, &vec_scale(y, &gram[i][m]));
                }
            }
            v
        })
        .collect();

    let mut cols = a_vecs;
    cols.extend(xs);
    cols.extend(ys);
    cols.extend(kc.k2.basis().iter().cloned());
    let transform = basis_matrix(&cols, h);
    debug_assert!(!transform.determinant().map(|d| d.is_zero()).unwrap_or(true));
    Ok(NormalBasis { transform, k, s, square_coeffs })
}

fn assemble(c: &CubicForm, split: &SplitData, nb: &NormalBasis, point: RankOnePoint) -> Result<NormalFormCertificate> {
    let n1 = c.dim();
    let h = n1 - 2;
    let mut block = QMatrix::identity(n1);
    for i in 0..h {
        for j in 0..h {
            block.set(i + 1, j + 1, nb.transform.get(i, j).clone());
        }
    }
    let transform = split.transform.try_mul(&block)?;
    let r = h - nb.s;
    let normal_poly = c.poly().substitute_linear(&transform)?.with_vars(normal_vars(nb.s, r))?;
    Ok(NormalFormCertificate {
        n: n1 - 1,
        k: nb.k,
        s: nb.s,
        transform,
        square_coeffs: nb.square_coeffs.clone(),
        normal_poly,
        scalar: Q::one(),
        point,
    })
}

/// Runs the full recognition pipeline.
pub fn recognize(c: &CubicForm, limits: &GroebnerLimits) -> Result<Recognition> {
    let start = Instant::now();
    if c.is_zero() {
        return Err(Error::ZeroForm);
    }
    let done = |verdict, candidates| Ok(Recognition { verdict, candidates, elapsed: start.elapsed() });
    if c.dim() < 3 {
        return done(Verdict::No(NoReason::TooFewVariables), 0);
    }
    let es = essential_split(c)?;
    let (points, incomplete) = match rank_one_points(&es.reduced, limits) {
        RankOneSearch::NoPoint => return done(Verdict::No(NoReason::NoRankOnePoint), 0),
        RankOneSearch::Undecided(reason) => return done(Verdict::Undecided(reason), 0),
        RankOneSearch::Points { points, incomplete } => (points, incomplete),
    };
    let tri = polarize(c);
    let d = es.kept.len();
    let mut last: Option<NoReason> = None;
    let mut saw_reducible = false;
    for rp in &points {
        let mut z = rp.p.clone();
        z.resize(c.dim(), Q::zero());
        let mut p = es.embed.mul_vec(&z)?;
        let lead = p.iter().find(|x| !x.is_zero()).cloned().expect("nonzero point");
        p = vec_scale(&p, &lead.recip());
        debug_assert_eq!(d, rp.p.len());
        let lifted = factor_rank_one(&tri, p).ok_or_else(|| bad("lifted point lost the rank-one property"))?;
        let split = split_at_point(c, &lifted)?;
        let kc = kernel_conditions(&split.b, &split.c3)?;
        match kc.failure {
            Some(KernelFailure::KGeqOne) => saw_reducible = true,
            Some(KernelFailure::K2NotInK3) => last = Some(NoReason::K2NotInK3),
            Some(KernelFailure::RankCondition) => last = Some(NoReason::RankCondition),
            None => {
                let nb = build_normal_basis(&split.b, &split.c3)?;
                let cert = assemble(c, &split, &nb, lifted)?;
                if !verify_certificate(c, &cert) {
                    return Err(bad("constructed certificate failed verification"));
                }
                let unique = cert.unique();
                return done(
                    Verdict::Admits { certificate: Box::new(cert), unique, pair_count_hint: if unique { 1 } else { 2 } },
                    points.len(),
                );
            }
        }
    }
    let verdict = if saw_reducible {
        Verdict::Reducible
    } else if let Some(reason) = incomplete {
        Verdict::Undecided(reason)
    } else {
        Verdict::No(last.expect("at least one candidate"))
    };
    done(verdict, points.len())
}

/// Independent check of a certificate against the input cubic.
pub fn verify_certificate(c: &CubicForm, cert: &NormalFormCertificate) -> bool {
    let n1 = cert.n + 1;
    let (k, s) = (cert.k, cert.s);
    if c.dim() != n1 || cert.transform.nrows() != n1 || cert.transform.ncols() != n1 {
        return false;
    }
    if k < 1 || k > s || s + k + 1 > cert.n || cert.square_coeffs.len() != s - k {
        return false;
    }
    if cert.scalar.is_zero() || cert.square_coeffs.iter().any(Zero::is_zero) {
        return false;
    }
    let r = cert.n - 1 - s;
    let vars = normal_vars(s, r);
    if cert.normal_poly.vars()[..] != vars[..] {
        return false;
    }
    let Ok(moved) = c.poly().substitute_linear(&cert.transform) else {
        return false;
    };
    let Ok(moved) = moved.with_vars(vars.clone()) else {
        return false;
    };
    if moved != cert.normal_poly.scale(&cert.scalar) {
        return false;
    }
    // Shape: x0²y0 + x0(Σ xᵢyᵢ + Σ c_j x_j²) + Q3(x1..xk).
    let mut expected = Poly::zero(vars.clone());
    let mono = |idx: &[usize]| {
        let mut m = vec![0u32; n1];
        for &i in idx {
            m[i] += 1;
        }
        m
    };
    expected.add_term(mono(&[0, 0, n1 - 1]), Q::one());
    for i in 1..=k {
        expected.add_term(mono(&[0, i, s + i]), Q::one());
    }
    for (j, cj) in cert.square_coeffs.iter().enumerate() {
        let idx = k + 1 + j;
        expected.add_term(mono(&[0, idx, idx]), cj.clone());
    }
    let rest = cert.normal_poly.sub(&expected);
    let mut q3 = Poly::zero(vars[1..=k].to_vec().into());
    for (m, coef) in rest.terms() {
        if m.iter().enumerate().any(|(i, &e)| e > 0 && !(1..=k).contains(&i)) {
            return false;
        }
        q3.add_term(m[1..=k].to_vec(), coef.clone());
    }
    match CubicForm::new(q3) {
        Ok(q3) => degenerate_space(&q3).is_zero(),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{q, unit_vector};
    use crate::polyring::{parse_poly, var_list};

    fn cubic(vars: &[&str], text: &str) -> CubicForm {
        CubicForm::new(parse_poly(text, &var_list(vars)).unwrap()).unwrap()
    }

    fn quad(vars: &[&str], text: &str) -> QuadForm {
        QuadForm::from_poly(&parse_poly(text, &var_list(vars)).unwrap()).unwrap()
    }

    const EX2: [&str; 4] = ["x0", "x1", "y1", "y0"];
    const EX2_TEXT: &str = "x0^2*y0 + x0*x1*y1 + x1^3";

    fn ex2_point() -> RankOnePoint {
        RankOnePoint { p: unit_vector(4, 3), ell: unit_vector(4, 0), c: q(1) }
    }

    #[test]
    fn split_example_two() {
        let c = cubic(&EX2, EX2_TEXT);
        let sd = split_at_point(&c, &ex2_point()).unwrap();
        assert_eq!(sd.b.to_poly(var_list(&["m1", "m2"])).to_string(), "m1*m2");
        assert_eq!(sd.c3.poly().to_string(), "m1^3");
        assert_eq!(sd.transform, QMatrix::identity(4));
        assert_eq!(sd.c_scale, q(1));
    }

    #[test]
    fn split_scrambled_example_two() {
        let c = cubic(&EX2, EX2_TEXT);
        let mut t = QMatrix::identity(4);
        t.set(1, 0, q(1));
        let scrambled = c.substitute_linear(&t).unwrap();
        let r = match rank_one_points(&scrambled, &GroebnerLimits::default()) {
            RankOneSearch::Points { mut points, .. } => points.remove(0),
            other => panic!("{other:?}"),
        };
        let sd = split_at_point(&scrambled, &r).unwrap();
        let moved = scrambled.poly().substitute_linear(&sd.transform).unwrap();
        let vars = moved.vars().clone();
        let expect = parse_poly("x0^2*y0", &vars).unwrap();
        let b = sd.b.to_poly(vars[1..3].to_vec().into());
        assert_eq!(b.total_degree(), Some(2));
        assert_eq!(moved.coeff(&[2, 0, 0, 1]), expect.coeff(&[2, 0, 0, 1]));
        assert!(kernel_conditions(&sd.b, &sd.c3).unwrap().ok());
    }

    #[test]
    fn split_rejects_too_few_variables() {
        let c = cubic(&["x0", "y0"], "x0^2*y0 + x0^3");
        let r = RankOnePoint { p: vec![q(0), q(1)], ell: vec![q(1), q(0)], c: q(1) };
        assert!(matches!(split_at_point(&c, &r), Err(Error::BadCertificate(_))));
    }

    #[test]
    fn kernel_condition_examples() {
        let kc = kernel_conditions(&quad(&["x1", "y1"], "x1*y1"), &cubic(&["x1", "y1"], "x1^3")).unwrap();
        assert_eq!((kc.k, kc.s, kc.failure), (1, 1, None));
        let kc = kernel_conditions(&quad(&["x1", "y1", "z"], "x1*y1"), &cubic(&["x1", "y1", "z"], "x1^3 + z^3")).unwrap();
        assert_eq!(kc.failure, Some(KernelFailure::K2NotInK3));
        assert_eq!(kc.k2, Subspace::span(3, &[unit_vector(3, 2)]));
        assert_eq!(kc.k3, Subspace::span(3, &[unit_vector(3, 1)]));
        let kc = kernel_conditions(&quad(&["x1", "y1", "x2"], "x1*y1 + x2^2"), &cubic(&["x1", "y1", "x2"], "x2^3")).unwrap();
        assert_eq!(kc.k, 1);
        assert_eq!(kc.failure, Some(KernelFailure::RankCondition));
    }

    #[test]
    fn normal_basis_examples() {
        let nb = build_normal_basis(&quad(&["x1", "y1"], "x1*y1"), &cubic(&["x1", "y1"], "x1^3")).unwrap();
        assert_eq!((nb.k, nb.s), (1, 1));
        assert!(nb.square_coeffs.is_empty());
        assert_eq!(nb.transform, QMatrix::identity(2));

        let v = ["x1", "y1", "y2"];
        let nb = build_normal_basis(&quad(&v, "x1*y1"), &cubic(&v, "x1^3")).unwrap();
        assert_eq!((nb.k, nb.s), (1, 1));
        assert_eq!(nb.transform, QMatrix::identity(3));

        // The a-block Gram is nonzero before correction.
        let v = ["x1", "y1"];
        let b = quad(&v, "x1*y1 + x1^2");
        let c3 = cubic(&v, "x1^3");
        let nb = build_normal_basis(&b, &c3).unwrap();
        let moved = b.to_poly(var_list(&v)).substitute_linear(&nb.transform).unwrap();
        assert_eq!(moved.to_string(), "x1*y1");
        assert_eq!(c3.poly().substitute_linear(&nb.transform).unwrap().to_string(), "x1^3");
    }

    #[test]
    fn recognize_examples() {
        let lim = GroebnerLimits::default();
        let c = cubic(&EX2, EX2_TEXT);
        let rec = recognize(&c, &lim).unwrap();
        match &rec.verdict {
            Verdict::Admits { certificate, unique, .. } => {
                assert_eq!((certificate.k, certificate.s, certificate.n), (1, 1, 3));
                assert!(*unique);
                assert_eq!(certificate.normal_poly.to_string(), "x0^2*y0 + x0*x1*y1 + x1^3");
                assert!(verify_certificate(&c, certificate));
            }
            other => panic!("{other:?}"),
        }
        let fermat = cubic(&EX2, "x0^3 + x1^3 + y1^3 + y0^3");
        assert_eq!(recognize(&fermat, &lim).unwrap().verdict, Verdict::No(NoReason::NoRankOnePoint));
        let red = cubic(&["x0", "x1", "y0"], "x0^2*y0 + x0*x1^2");
        assert_eq!(recognize(&red, &lim).unwrap().verdict, Verdict::Reducible);
        let rank = cubic(&["x0", "x1", "y1", "x2", "y0"], "x0^2*y0 + x0*x1*y1 + x0*x2^2 + x2^3");
        assert_eq!(recognize(&rank, &lim).unwrap().verdict, Verdict::No(NoReason::RankCondition));
    }

    #[test]
    fn certificate_tampering_detected() {
        let c = cubic(&EX2, EX2_TEXT);
        let rec = recognize(&c, &GroebnerLimits::default()).unwrap();
        let cert = rec.verdict.certificate().unwrap().clone();
        let mut t = cert.clone();
        t.transform.set(1, 2, q(5));
        assert!(!verify_certificate(&c, &t));
        let mut t = cert.clone();
        let y1 = t.normal_poly.vars().iter().position(|v| v == "y1").unwrap();
        let mut m = vec![0u32; 4];
        m[0] = 1;
        m[y1] = 2;
        t.normal_poly.add_term(m, q(1));
        assert!(!verify_certificate(&c, &t));
    }
}
