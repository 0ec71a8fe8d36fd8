//! Cubic and quadratic forms as symmetric tensors.
//!
//! Polarization uses the convention `Q̃(v,v,v) = Q(v)`. The Hessian pencil is
//! `M(p)_{ij} = 6·Q̃(e_i, e_j, p)`, so that `3·Q̃(p,v,v) = ½·vᵀM(p)v`.

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{kernel_basis, QMatrix, Subspace, Q};
use crate::polyring::groebner::{GroebnerLimits, Ideal, LimitExceeded, MonomialOrder};
use crate::polyring::solve::{rational_points_zero_dim, ZeroDimSolutions};
use crate::polyring::{Poly, VarList};

/// A homogeneous cubic (or the zero form) over named coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicForm {
    poly: Poly,
}

impl CubicForm {
    pub fn new(poly: Poly) -> Result<Self> {
        if !poly.is_homogeneous(3) {
            return Err(Error::NotDegreeThree);
        }
        Ok(CubicForm { poly })
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }

    pub fn vars(&self) -> &VarList {
        self.poly.vars()
    }

    pub fn dim(&self) -> usize {
        self.poly.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn eval(&self, v: &[Q]) -> Q {
        self.poly.eval(v)
    }

    pub fn substitute_linear(&self, t: &QMatrix) -> Result<CubicForm> {
        Ok(CubicForm { poly: self.poly.substitute_linear(t)? })
    }

    /// `Q(v) = Q̃(v,v,v)`.
    pub fn from_trilinear(t: &SymTrilinear, vars: VarList) -> Result<CubicForm> {
        let d = t.dim();
        if vars.len() != d {
            return Err(Error::DimensionMismatch { context: "CubicForm::from_trilinear", expected: d, found: vars.len() });
        }
        let mut poly = Poly::zero(vars);
        for i in 0..d {
            for j in i..d {
                for l in j..d {
                    let v = t.get(i, j, l);
                    if v.is_zero() {
                        continue;
                    }
                    let mut m = vec![0u32; d];
                    m[i] += 1;
                    m[j] += 1;
                    m[l] += 1;
                    poly.add_term(m.clone(), v * Q::from_integer(permutations(&m).into()));
                }
            }
        }
        Ok(CubicForm { poly })
    }
}

/// Number of distinct orderings of the index multiset of a degree-3 monomial.
fn permutations(m: &[u32]) -> i64 {
    let fact = |e: u32| -> i64 { (1..=e as i64).product() };
    6 / m.iter().map(|&e| fact(e)).product::<i64>()
}

/// Dense symmetric tensor `Q̃(e_i, e_j, e_l)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymTrilinear {
    dim: usize,
    data: Vec<Q>,
}

impl SymTrilinear {
    pub fn zeros(dim: usize) -> Self {
        SymTrilinear { dim, data: vec![Q::zero(); dim * dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn idx(&self, i: usize, j: usize, l: usize) -> usize {
        (i * self.dim + j) * self.dim + l
    }

    pub fn get(&self, i: usize, j: usize, l: usize) -> &Q {
        &self.data[self.idx(i, j, l)]
    }

    /// Sets all six symmetric positions.
    pub fn set_sym(&mut self, i: usize, j: usize, l: usize, v: Q) {
        for (a, b, c) in [(i, j, l), (i, l, j), (j, i, l), (j, l, i), (l, i, j), (l, j, i)] {
            let k = self.idx(a, b, c);
            self.data[k] = v.clone();
        }
    }

    pub fn is_symmetric(&self) -> bool {
        let d = self.dim;
        (0..d).all(|i| {
            (0..d).all(|j| (0..d).all(|l| self.get(i, j, l) == self.get(j, i, l) && self.get(i, j, l) == self.get(i, l, j)))
        })
    }

    pub fn eval(&self, u: &[Q], v: &[Q], w: &[Q]) -> Q {
        let d = self.dim;
        let mut acc = Q::zero();
        for (i, ui) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, vj) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let uv = ui * vj;
                for (l, wl) in w.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                    let t = &self.data[(i * d + j) * d + l];
                    if !t.is_zero() {
                        acc += &uv * wl * t;
                    }
                }
            }
        }
        acc
    }

    /// The symmetric matrix `Q̃(·, ·, p)`.
    pub fn contract(&self, p: &[Q]) -> QMatrix {
        let d = self.dim;
        let mut m = QMatrix::zeros(d, d);
        for i in 0..d {
            for j in i..d {
                let mut acc = Q::zero();
                for (l, pl) in p.iter().enumerate() {
                    if !pl.is_zero() {
                        acc += pl * self.get(i, j, l);
                    }
                }
                m.set(i, j, acc.clone());
                m.set(j, i, acc);
            }
        }
        m
    }

    /// Restriction to the span of the given columns, in the given order.
    pub fn pullback(&self, basis: &[Vec<Q>]) -> SymTrilinear {
        let k = basis.len();
        let mut out = SymTrilinear::zeros(k);
        for i in 0..k {
            for j in i..k {
                for l in j..k {
                    out.set_sym(i, j, l, self.eval(&basis[i], &basis[j], &basis[l]));
                }
            }
        }
        out
    }
}

/// A quadratic form `B(v) = vᵀ B̃ v` with `B̃` symmetric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadForm {
    matrix: QMatrix,
}

impl QuadForm {
    pub fn from_matrix(matrix: QMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { context: "QuadForm", expected: matrix.nrows(), found: matrix.ncols() });
        }
        if !matrix.is_symmetric() {
            return Err(Error::Precondition("quadratic form matrix must be symmetric".into()));
        }
        Ok(QuadForm { matrix })
    }

    pub fn from_poly(p: &Poly) -> Result<Self> {
        if !p.is_homogeneous(2) {
            return Err(Error::Precondition("quadratic form must be homogeneous of degree 2".into()));
        }
        let d = p.nvars();
        let mut m = QMatrix::zeros(d, d);
        let half = Q::new(1.into(), 2.into());
        for (mono, c) in p.terms() {
            let idx: Vec<usize> = mono.iter().enumerate().flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize)).collect();
            let (i, j) = (idx[0], idx[1]);
            if i == j {
                m.set(i, i, c.clone());
            } else {
                m.set(i, j, c * &half);
                m.set(j, i, c * &half);
            }
        }
        Ok(QuadForm { matrix: m })
    }

    pub fn to_poly(&self, vars: VarList) -> Poly {
        let d = self.dim();
        let mut p = Poly::zero(vars);
        for i in 0..d {
            for j in i..d {
                let c = self.matrix.get(i, j);
                if c.is_zero() {
                    continue;
                }
                let mut m = vec![0u32; d];
                m[i] += 1;
                m[j] += 1;
                p.add_term(m, if i == j { c.clone() } else { c * Q::from_integer(2.into()) });
            }
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn bilinear(&self, u: &[Q], v: &[Q]) -> Q {
        self.matrix.bilinear(u, v)
    }
}

/// A point where the Hessian pencil has rank one and annihilates the point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOnePoint {
    /// First nonzero coordinate is 1.
    pub p: Vec<Q>,
    /// First nonzero coefficient is 1.
    pub ell: Vec<Q>,
    /// `3·Q̃(p,v,v) = c·ell(v)²`.
    pub c: Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UndecidedReason {
    /// The chart with this pivot has infinitely many solutions.
    PositiveDimensional { pivot: usize },
    /// The chart with this pivot has solutions, none rational.
    IrrationalOnly { pivot: usize },
    Limit(LimitExceeded),
}

impl std::fmt::Display for UndecidedReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            UndecidedReason::PositiveDimensional { pivot } => write!(f, "positive-dimensional rank-one locus in chart {pivot}"),
            UndecidedReason::IrrationalOnly { pivot } => write!(f, "only irrational rank-one points in chart {pivot}"),
            UndecidedReason::Limit(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RankOneSearch {
    /// Rational points in canonical order. `incomplete` records a chart that
    /// could not be settled; the points found are still valid.
    Points { points: Vec<RankOnePoint>, incomplete: Option<UndecidedReason> },
    NoPoint,
    Undecided(UndecidedReason),
}

pub fn polarize(c: &CubicForm) -> SymTrilinear {
    let d = c.dim();
    let mut t = SymTrilinear::zeros(d);
    for (m, coef) in c.poly.terms() {
        let idx: Vec<usize> = m.iter().enumerate().flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize)).collect();
        let v = coef / Q::from_integer(permutations(m).into());
        t.set_sym(idx[0], idx[1], idx[2], v);
    }
    t
}

/// Directions `α` with `Σ αᵢ ∂C/∂zᵢ = 0`; zero exactly when `C` is non-degenerated.
pub fn degenerate_space(c: &CubicForm) -> Subspace {
    degenerate_space_of(&polarize(c))
}

pub fn degenerate_space_of(t: &SymTrilinear) -> Subspace {
    let d = t.dim();
    let mut rows = Vec::new();
    for j in 0..d {
        for l in j..d {
            let row: Vec<Q> = (0..d).map(|i| t.get(i, j, l).clone()).collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return Subspace::full(d);
    }
    kernel_basis(&QMatrix::from_rows(&rows, d).expect("row lengths"))
}

/// Result of removing degenerate directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EssentialSplit {
    /// The form in the first `d` new coordinates, named after the chosen standard vectors.
    pub reduced: CubicForm,
    /// Columns: the standard-basis complement of `unused`, then the basis of `unused`.
    pub embed: QMatrix,
    pub unused: Subspace,
    /// Original coordinate index behind each reduced coordinate.
    pub kept: Vec<usize>,
}

pub fn essential_split(c: &CubicForm) -> Result<EssentialSplit> {
    if c.is_zero() {
        return Err(Error::ZeroForm);
    }
    let n = c.dim();
    let unused = degenerate_space(c);
    let comp = unused.standard_complement();
    let kept: Vec<usize> = comp.iter().map(|v| v.iter().position(|x| !x.is_zero()).expect("unit vector")).collect();
    let mut cols = comp.clone();
    cols.extend(unused.basis().iter().cloned());
    let embed = QMatrix::from_cols(&cols, n)?;
    let moved = c.poly.substitute_linear(&embed)?;
    let reduced_vars: VarList = kept.iter().map(|&i| c.vars()[i].clone()).collect::<Vec<_>>().into();
    let reduced = moved.restrict_vars(&(0..kept.len()).collect::<Vec<_>>())?.with_vars(reduced_vars)?;
    Ok(EssentialSplit { reduced: CubicForm { poly: reduced }, embed, unused, kept })
}

pub fn hessian_at(c: &CubicForm, p: &[Q]) -> Result<QMatrix> {
    if p.len() != c.dim() {
        return Err(Error::DimensionMismatch { context: "hessian_at", expected: c.dim(), found: p.len() });
    }
    Ok(polarize(c).contract(p).scale(&Q::from_integer(6.into())))
}

/// Rank-one points of the Hessian pencil, chart by chart.
///
/// Chart `t` fixes `p_t = 1` and `p_j = 0` for `j < t`, so each projective
/// point is found exactly once, already in canonical form.
pub fn rank_one_points(c: &CubicForm, limits: &GroebnerLimits) -> RankOneSearch {
    let d = c.dim();
    let tri = polarize(c);
    let mut points = Vec::new();
    let mut incomplete = None;
    for pivot in 0..d {
        let free: Vec<usize> = (pivot + 1..d).collect();
        let vars: VarList = free.iter().map(|&i| c.vars()[i].clone()).collect::<Vec<_>>().into();
        let nf = free.len();
        // p as linear polynomials in the free coordinates.
        let coords: Vec<Poly> = (0..d)
            .map(|i| {
                if i == pivot {
                    Poly::constant(vars.clone(), Q::one())
                } else if i > pivot {
                    Poly::var(vars.clone(), i - pivot - 1)
                } else {
                    Poly::zero(vars.clone())
                }
            })
            .collect();
        let mut m = vec![vec![Poly::zero(vars.clone()); d]; d];
        for i in 0..d {
            for j in i..d {
                let mut e = Poly::zero(vars.clone());
                for (l, pl) in coords.iter().enumerate() {
                    let t = tri.get(i, j, l);
                    if !t.is_zero() && !pl.is_zero() {
                        e = e.add(&pl.scale(&(t * Q::from_integer(6.into()))));
                    }
                }
                m[i][j] = e.clone();
                m[j][i] = e;
            }
        }
        let mut gens = Vec::new();
        for i in 0..d {
            let mut e = Poly::zero(vars.clone());
            for j in 0..d {
                e = e.add(&m[i][j].mul(&coords[j]));
            }
            gens.push(e);
        }
        for i in 0..d {
            for k in i + 1..d {
                for j in 0..d {
                    for l in j + 1..d {
                        gens.push(m[i][j].mul(&m[k][l]).sub(&m[i][l].mul(&m[k][j])));
                    }
                }
            }
        }
        let ideal = Ideal::new(vars.clone(), gens, MonomialOrder::Grlex);
        let sols = match rational_points_zero_dim(&ideal, limits) {
            Ok(s) => s,
            Err(e) => return RankOneSearch::Undecided(UndecidedReason::Limit(e)),
        };
        let found = match sols {
            ZeroDimSolutions::Points { points, irrational } => {
                if irrational && incomplete.is_none() {
                    incomplete = Some(UndecidedReason::IrrationalOnly { pivot });
                }
                points
            }
            ZeroDimSolutions::PositiveDimensional => {
                incomplete.get_or_insert(UndecidedReason::PositiveDimensional { pivot });
                continue;
            }
            ZeroDimSolutions::NoRationalPoint { irrational } => {
                if irrational {
                    incomplete.get_or_insert(UndecidedReason::IrrationalOnly { pivot });
                }
                continue;
            }
        };
        debug_assert!(found.iter().all(|s| s.len() == nf));
        for sol in found {
            let mut p = vec![Q::zero(); d];
            p[pivot] = Q::one();
            for (k, &i) in free.iter().enumerate() {
                p[i] = sol[k].clone();
            }
            if let Some(r) = factor_rank_one(&tri, p) {
                points.push(r);
            }
        }
    }
    match (points.is_empty(), incomplete) {
        (true, None) => RankOneSearch::NoPoint,
        (true, Some(reason)) => RankOneSearch::Undecided(reason),
        (false, incomplete) => RankOneSearch::Points { points, incomplete },
    }
}

/// Writes `M(p) = 2c·ℓℓᵀ`; `None` when `M(p)` is not of rank one.
pub fn factor_rank_one(tri: &SymTrilinear, p: Vec<Q>) -> Option<RankOnePoint> {
    let m = tri.contract(&p).scale(&Q::from_integer(6.into()));
    let d = m.nrows();
    let j0 = (0..d).find(|&j| !m.get(j, j).is_zero())?;
    let pivot = m.get(j0, j0).clone();
    let ell: Vec<Q> = m.row(j0).iter().map(|x| x / &pivot).collect();
    let c = pivot / Q::from_integer(2.into());
    for i in 0..d {
        for j in 0..d {
            if *m.get(i, j) != Q::from_integer(2.into()) * &c * &ell[i] * &ell[j] {
                return None;
            }
        }
    }
    if !m.mul_vec(&p).ok()?.iter().all(Zero::is_zero) {
        return None;
    }
    Some(RankOnePoint { p, ell, c })
}

/// Checks the defining identities of a rank-one point against `C`.
pub fn is_rank_one_point(c: &CubicForm, r: &RankOnePoint) -> bool {
    let d = c.dim();
    if r.p.len() != d || r.ell.len() != d || r.c.is_zero() {
        return false;
    }
    let first_one = |v: &[Q]| v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_one());
    if !first_one(&r.p) || !first_one(&r.ell) {
        return false;
    }
    factor_rank_one(&polarize(c), r.p.clone()).is_some_and(|f| f.ell == r.ell && f.c == r.c)
}

pub fn quad_radical(b: &QuadForm) -> Subspace {
    kernel_basis(b.matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{q, qf, unit_vector};
    use crate::polyring::{parse_poly, var_list};

    fn cubic(vars: &[&str], text: &str) -> CubicForm {
        CubicForm::new(parse_poly(text, &var_list(vars)).unwrap()).unwrap()
    }

    const EX2: [&str; 4] = ["x0", "x1", "y1", "y0"];

    #[test]
    fn polarization_conventions() {
        let t = polarize(&cubic(&["x0", "x1", "y1"], "x0*x1*y1"));
        assert_eq!(t.get(0, 1, 2), &qf(1, 6));
        let t = polarize(&cubic(&["x1"], "x1^3"));
        assert_eq!(t.get(0, 0, 0), &q(1));
        let t = polarize(&cubic(&["x0", "y0"], "x0^2*y0"));
        assert_eq!(t.get(0, 0, 1), &qf(1, 3));
        assert_eq!(t.get(1, 0, 0), &qf(1, 3));
        assert!(t.is_symmetric());
    }

    #[test]
    fn polarization_round_trip() {
        let c = cubic(&EX2, "x0^2*y0 + x0*x1*y1 + x1^3 - 2/3*y0^3 + 5*x1*y1^2");
        let t = polarize(&c);
        assert_eq!(CubicForm::from_trilinear(&t, c.vars().clone()).unwrap(), c);
        let v = vec![q(2), qf(-1, 3), q(5), q(7)];
        assert_eq!(t.eval(&v, &v, &v), c.eval(&v));
    }

    #[test]
    fn degenerate_directions() {
        let fermat = cubic(&EX2, "x0^3 + x1^3 + y1^3 + y0^3");
        assert!(degenerate_space(&fermat).is_zero());
        let ext = cubic(&["x0", "x1", "y1", "y0", "y2"], "x0^2*y0 + x0*x1*y1 + x1^3");
        assert_eq!(degenerate_space(&ext), Subspace::span(5, &[unit_vector(5, 4)]));
        let c = cubic(&["x0", "x1", "x2"], "x1^3");
        assert_eq!(degenerate_space(&c), Subspace::span(3, &[unit_vector(3, 0), unit_vector(3, 2)]));
    }

    #[test]
    fn essential_split_examples() {
        let ex2 = cubic(&EX2, "x0^2*y0 + x0*x1*y1 + x1^3");
        let s = essential_split(&ex2).unwrap();
        assert_eq!(s.reduced, ex2);
        assert_eq!(s.embed, QMatrix::identity(4));
        assert!(s.unused.is_zero());

        let ext = cubic(&["x0", "x1", "y1", "y0", "y2"], "x0^2*y0 + x0*x1*y1 + x1^3");
        let s = essential_split(&ext).unwrap();
        assert_eq!(s.reduced, ex2);
        assert_eq!(s.unused, Subspace::span(5, &[unit_vector(5, 4)]));

        let s = essential_split(&cubic(&["x0", "x1"], "x0^3 + 3*x0^2*x1 + 3*x0*x1^2 + x1^3")).unwrap();
        assert_eq!(s.reduced.poly().to_string(), "x0^3");
        assert_eq!(s.unused, Subspace::span(2, &[vec![q(1), q(-1)]]));

        assert!(matches!(essential_split(&cubic(&["x"], "0")), Err(Error::ZeroForm)));
    }

    #[test]
    fn hessian_examples() {
        let ex2 = cubic(&EX2, "x0^2*y0 + x0*x1*y1 + x1^3");
        let h = hessian_at(&ex2, &unit_vector(4, 3)).unwrap();
        let mut expect = QMatrix::zeros(4, 4);
        expect.set(0, 0, q(2));
        assert_eq!(h, expect);
        assert!(hessian_at(&ex2, &[q(0), q(0), q(0), q(0)]).unwrap().is_zero());
        let fermat = cubic(&EX2, "x0^3 + x1^3 + y1^3 + y0^3");
        let h = hessian_at(&fermat, &unit_vector(4, 1)).unwrap();
        let mut expect = QMatrix::zeros(4, 4);
        expect.set(1, 1, q(6));
        assert_eq!(h, expect);
    }

    #[test]
    fn rank_one_search() {
        let lim = GroebnerLimits::default();
        let ex2 = cubic(&EX2, "x0^2*y0 + x0*x1*y1 + x1^3");
        match rank_one_points(&ex2, &lim) {
            RankOneSearch::Points { points, incomplete: None } => {
                assert_eq!(points.len(), 1);
                assert_eq!(points[0].p, unit_vector(4, 3));
                assert_eq!(points[0].ell, unit_vector(4, 0));
                assert_eq!(points[0].c, q(1));
                assert!(is_rank_one_point(&ex2, &points[0]));
            }
            other => panic!("{other:?}"),
        }
        let fermat = cubic(&EX2, "x0^3 + x1^3 + y1^3 + y0^3");
        assert_eq!(rank_one_points(&fermat, &lim), RankOneSearch::NoPoint);
        let ex1 = cubic(&["x0", "x1", "x2", "x3"], "x0^3 + x1*x2*x3");
        assert_eq!(rank_one_points(&ex1, &lim), RankOneSearch::NoPoint);
    }

    #[test]
    fn radical_examples() {
        let v2 = var_list(&["x1", "y1"]);
        assert!(quad_radical(&QuadForm::from_poly(&parse_poly("x1*y1", &v2).unwrap()).unwrap()).is_zero());
        let v3 = var_list(&["x1", "y1", "y2"]);
        let b = QuadForm::from_poly(&parse_poly("x1*y1", &v3).unwrap()).unwrap();
        assert_eq!(quad_radical(&b), Subspace::span(3, &[unit_vector(3, 2)]));
        assert_eq!(b.to_poly(v3.clone()).to_string(), "x1*y1");
        let zero = QuadForm::from_poly(&Poly::zero(v3)).unwrap();
        assert_eq!(quad_radical(&zero), Subspace::full(3));
    }
}
