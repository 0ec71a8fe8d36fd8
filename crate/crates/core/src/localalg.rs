//! Local-algebra pairs `(R, H)` with `R = ⟨1⟩ ⊕ H ⊕ ⟨b0⟩`.
//!
//! A pair is always stored in its adapted basis: index 0 is the unit, indices
//! `1..n` span `H`, index `n` is `b0`. The dual coordinates are `x0` (unit),
//! one coordinate per `H` basis vector, and `y0` (`b0`).
//!
//! The cubic of a pair is `Q(v) = Q̃(v,v,v)` with
//! `Q̃(1,1,1) = 0`, `Q̃(a,1,1) = A·y0(a)`, `Q̃(a,a',1) = −½A·y0(aa')`,
//! `Q̃(a,a',a'') = A·y0(aa'a'')` and `A = 1/3`, which makes the coefficient of
//! `x0²y0` equal to 1.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{is_zero_vec, solve_linear, unit_vector, vec_add, vec_scale, QMatrix, Subspace, Q};
use crate::forms::{polarize, CubicForm, QuadForm, SymTrilinear};
use crate::normalform::NormalFormCertificate;
use crate::polyring::{Poly, VarList};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPair {
    labels: Vec<String>,
    coords: Vec<String>,
    /// `table[i * dim + j]` is `e_i · e_j`.
    table: Vec<Vec<Q>>,
}

/// Default coordinate names `x0, x1..x_{n-1}, y0`.
pub fn pair_coords(dim: usize) -> Vec<String> {
    let mut v: Vec<String> = (0..dim - 1).map(|i| format!("x{i}")).collect();
    v.push("y0".into());
    v
}

fn default_labels(dim: usize) -> Vec<String> {
    let mut v = vec!["1".to_string()];
    v.extend((1..dim - 1).map(|i| format!("h{i}")));
    v.push("b0".into());
    v
}

fn third() -> Q {
    Q::new(1.into(), 3.into())
}

impl AlgebraPair {
    /// `products[i][j] = e_i · e_j` in the adapted basis.
    pub fn new(labels: Vec<String>, coords: Vec<String>, products: Vec<Vec<Vec<Q>>>) -> Result<Self> {
        let dim = labels.len();
        if dim < 2 {
            return Err(Error::InvalidPair("dimension must be at least 2".into()));
        }
        if coords.len() != dim {
            return Err(Error::DimensionMismatch { context: "AlgebraPair coords", expected: dim, found: coords.len() });
        }
        if products.len() != dim {
            return Err(Error::DimensionMismatch { context: "AlgebraPair table", expected: dim, found: products.len() });
        }
        let mut table = Vec::with_capacity(dim * dim);
        for row in products {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { context: "AlgebraPair table row", expected: dim, found: row.len() });
            }
            for v in row {
                if v.len() != dim {
                    return Err(Error::DimensionMismatch { context: "AlgebraPair product", expected: dim, found: v.len() });
                }
                table.push(v);
            }
        }
        Ok(AlgebraPair { labels, coords, table })
    }

    /// Default labels `1, h1.., b0` and coordinates `x0.., y0`.
    pub fn from_table(products: Vec<Vec<Vec<Q>>>) -> Result<Self> {
        let dim = products.len();
        if dim < 2 {
            return Err(Error::InvalidPair("dimension must be at least 2".into()));
        }
        Self::new(default_labels(dim), pair_coords(dim), products)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// `n = dim − 1`; `b0` has index `n`.
    pub fn n(&self) -> usize {
        self.dim() - 1
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn coord_vars(&self) -> VarList {
        self.coords.clone().into()
    }

    pub fn with_coords(mut self, coords: Vec<String>) -> Result<Self> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch { context: "AlgebraPair coords", expected: self.dim(), found: coords.len() });
        }
        self.coords = coords;
        Ok(self)
    }

    pub fn product(&self, i: usize, j: usize) -> &[Q] {
        &self.table[i * self.dim() + j]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Q> {
        unit_vector(self.dim(), i)
    }

    pub fn mul(&self, u: &[Q], v: &[Q]) -> Vec<Q> {
        let d = self.dim();
        let mut out = vec![Q::zero(); d];
        for (i, ui) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, vj) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let w = ui * vj;
                for (o, p) in out.iter_mut().zip(self.product(i, j)) {
                    if !p.is_zero() {
                        *o += &w * p;
                    }
                }
            }
        }
        out
    }

    pub fn y0(&self, v: &[Q]) -> Q {
        v[self.n()].clone()
    }

    /// Rewrites the structure constants in the basis given by the columns of `p`.
    fn change_basis(&self, p: &QMatrix, labels: Vec<String>) -> Result<AlgebraPair> {
        let inv = p.inverse()?;
        let d = self.dim();
        let cols: Vec<Vec<Q>> = (0..d).map(|j| p.col(j)).collect();
        let mut products = vec![vec![Vec::new(); d]; d];
        for i in 0..d {
            for j in 0..d {
                products[i][j] = inv.mul_vec(&self.mul(&cols[i], &cols[j]))?;
            }
        }
        AlgebraPair::new(labels, self.coords.clone(), products)
    }
}

/// `m/m², m²/m³, …` dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HilbertProfile(pub Vec<usize>);

impl fmt::Display for HilbertProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn span_products(p: &AlgebraPair, a: &Subspace, b: &Subspace) -> Subspace {
    let mut vecs = Vec::new();
    for u in a.basis() {
        for v in b.basis() {
            let w = p.mul(u, v);
            if !is_zero_vec(&w) {
                vecs.push(w);
            }
        }
    }
    Subspace::span(p.dim(), &vecs)
}

fn max_ideal(p: &AlgebraPair) -> Subspace {
    let vecs: Vec<Vec<Q>> = (1..p.dim()).map(|i| p.basis_vector(i)).collect();
    Subspace::span(p.dim(), &vecs)
}

fn h_space(p: &AlgebraPair) -> Subspace {
    let vecs: Vec<Vec<Q>> = (1..p.n()).map(|i| p.basis_vector(i)).collect();
    Subspace::span(p.dim(), &vecs)
}

/// `[m, m², m³, …]` up to and excluding the first zero power; `None` if `m` is not nilpotent.
fn m_powers(p: &AlgebraPair) -> Option<Vec<Subspace>> {
    let m = max_ideal(p);
    let mut out = vec![m.clone()];
    loop {
        let next = span_products(p, out.last().unwrap(), &m);
        if next.is_zero() {
            return Some(out);
        }
        if out.len() > p.dim() || next == *out.last().unwrap() {
            return None;
        }
        out.push(next);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairReport {
    pub checks: Vec<Check>,
    /// The pair with `b0` moved into `m³` when needed; present when the
    /// structural checks pass.
    pub normalized: Option<AlgebraPair>,
    degree_failure: bool,
}

impl PairReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// The error corresponding to the first failure, if any.
    pub fn error(&self) -> Option<Error> {
        let first = self.failures().into_iter().next()?;
        let msg = format!("{}: {}", first.name, first.detail);
        if self.degree_failure && self.checks.iter().filter(|c| !c.passed).all(|c| DEGREE_CHECKS.contains(&c.name.as_str())) {
            Some(Error::DegreeMismatch(msg))
        } else {
            Some(Error::InvalidPair(msg))
        }
    }
}

const DEGREE_CHECKS: [&str; 3] = ["b0_in_m3", "y0_m4_zero", "degree3_witness"];

fn check(name: &str, passed: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), passed, detail: detail.into() }
}

pub fn validate_pair(p: &AlgebraPair) -> PairReport {
    let d = p.dim();
    let n = p.n();
    let mut checks = Vec::new();
    let first_bad = |f: &dyn Fn(usize, usize) -> bool| -> Option<(usize, usize)> {
        (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).find(|&(i, j)| !f(i, j))
    };
    let lbl = |i: usize| p.labels[i].as_str();

    let comm = first_bad(&|i, j| p.product(i, j) == p.product(j, i));
    checks.push(check("commutative", comm.is_none(), comm.map_or("ok".into(), |(i, j)| format!("{}·{} ≠ {}·{}", lbl(i), lbl(j), lbl(j), lbl(i)))));
    let unital = first_bad(&|i, j| i != 0 || (p.product(0, j) == p.basis_vector(j).as_slice() && p.product(j, 0) == p.basis_vector(j).as_slice()));
    checks.push(check("unital", unital.is_none(), unital.map_or("ok".into(), |(_, j)| format!("1·{} ≠ {}", lbl(j), lbl(j)))));
    let mut assoc = None;
    'outer: for i in 0..d {
        for j in 0..d {
            let ij = p.product(i, j).to_vec();
            for l in 0..d {
                let left = p.mul(&ij, &p.basis_vector(l));
                let right = p.mul(&p.basis_vector(i), p.product(j, l));
                if left != right {
                    assoc = Some((i, j, l));
                    break 'outer;
                }
            }
        }
    }
    checks.push(check(
        "associative",
        assoc.is_none(),
        assoc.map_or("ok".into(), |(i, j, l)| format!("({}·{})·{} ≠ {}·({}·{})", lbl(i), lbl(j), lbl(l), lbl(i), lbl(j), lbl(l))),
    ));
    let closed = first_bad(&|i, j| i == 0 || j == 0 || p.product(i, j)[0].is_zero());
    checks.push(check("m_closed", closed.is_none(), closed.map_or("ok".into(), |(i, j)| format!("{}·{} has a unit component", lbl(i), lbl(j)))));
    let nonnil = (1..d).find(|&i| {
        let mut v = p.basis_vector(i);
        for _ in 0..d {
            v = p.mul(&v, &p.basis_vector(i));
        }
        !is_zero_vec(&v)
    });
    checks.push(check("local", nonnil.is_none(), nonnil.map_or("ok".into(), |i| format!("{} is not nilpotent", lbl(i)))));

    let structural = checks.iter().all(|c| c.passed);
    if !structural {
        for name in ["generates", "b0_in_m3", "y0_m4_zero", "degree3_witness"] {
            checks.push(check(name, false, "not evaluated: structural check failed"));
        }
        return PairReport { checks, normalized: None, degree_failure: false };
    }

    // H generates R.
    let h = h_space(p);
    let mut gen = Subspace::span(d, &[p.basis_vector(0)]).sum(&h);
    loop {
        let next = gen.sum(&span_products(p, &gen, &h));
        if next == gen {
            break;
        }
        gen = next;
    }
    checks.push(check("generates", gen.dim() == d, format!("span of monomials in H has dimension {} of {d}", gen.dim())));

    let powers = m_powers(p).expect("nilpotent by the local check");
    let m3 = powers.get(2).cloned().unwrap_or_else(|| Subspace::zero(d));
    let b0 = p.basis_vector(n);
    let mut normalized = p.clone();
    if m3.contains(&b0) {
        checks.push(check("b0_in_m3", true, "ok"));
    } else if let Some(v) = m3.basis().iter().find(|v| !v[n].is_zero()) {
        let mut cols: Vec<Vec<Q>> = (0..n).map(|i| p.basis_vector(i)).collect();
        cols.push(v.clone());
        let pm = QMatrix::from_cols(&cols, d).expect("square");
        normalized = p.change_basis(&pm, p.labels.clone()).expect("invertible: v has a b0 component");
        checks.push(check("b0_in_m3", true, "b0 re-chosen inside m³"));
    } else {
        checks.push(check("b0_in_m3", false, "m³ is contained in ⟨1⟩⊕H; no complement of H inside m³"));
        checks.push(check("y0_m4_zero", false, "not evaluated"));
        checks.push(check("degree3_witness", false, "not evaluated"));
        return PairReport { checks, normalized: Some(normalized), degree_failure: true };
    }
    let q = &normalized;
    let m4 = m_powers(q).expect("nilpotent").get(3).cloned().unwrap_or_else(|| Subspace::zero(d));
    let bad4 = m4.basis().iter().find(|v| !v[n].is_zero());
    checks.push(check("y0_m4_zero", bad4.is_none(), if bad4.is_some() { "y0 does not vanish on m⁴" } else { "ok" }));
    let mut witness = None;
    'w: for i in 1..n {
        for j in i..n {
            let ij = q.product(i, j).to_vec();
            for l in j..n {
                if !q.y0(&q.mul(&ij, &q.basis_vector(l))).is_zero() {
                    witness = Some((i, j, l));
                    break 'w;
                }
            }
        }
    }
    checks.push(check(
        "degree3_witness",
        witness.is_some(),
        witness.map_or("y0 vanishes on all triple products of H".into(), |(i, j, l)| {
            format!("y0({}·{}·{}) ≠ 0", q.labels[i], q.labels[j], q.labels[l])
        }),
    ));
    let degree_failure = checks.iter().any(|c| !c.passed && DEGREE_CHECKS.contains(&c.name.as_str()));
    PairReport { checks, normalized: Some(normalized), degree_failure }
}

fn validated(p: &AlgebraPair) -> Result<AlgebraPair> {
    let report = validate_pair(p);
    if let Some(e) = report.error() {
        return Err(e);
    }
    Ok(report.normalized.expect("structural checks passed"))
}

/// The polarization of the pair's cubic, without validation.
pub fn pair_trilinear(p: &AlgebraPair) -> SymTrilinear {
    let d = p.dim();
    let a = third();
    let half_a = &a / Q::from_integer(2.into());
    let mut t = SymTrilinear::zeros(d);
    for i in 0..d {
        for j in i..d {
            for l in j..d {
                let idx = [i, j, l];
                let m: Vec<usize> = idx.iter().copied().filter(|&x| x != 0).collect();
                let v = match m.len() {
                    0 => Q::zero(),
                    1 => &a * p.y0(&p.basis_vector(m[0])),
                    2 => -(&half_a * p.y0(p.product(m[0], m[1]))),
                    _ => &a * p.y0(&p.mul(p.product(m[0], m[1]), &p.basis_vector(m[2]))),
                };
                if !v.is_zero() {
                    t.set_sym(i, j, l, v);
                }
            }
        }
    }
    t
}

/// The cubic of a validated pair, in the pair's coordinates.
pub fn cubic_from_pair(p: &AlgebraPair) -> Result<CubicForm> {
    let q = validated(p)?;
    CubicForm::from_trilinear(&pair_trilinear(&q), q.coord_vars())
}

/// Splits the pair's cubic as `x0²y0 + x0·Q2 + Q3` and returns `(Q2, Q3)` on `H`.
pub fn induced_forms(p: &AlgebraPair) -> Result<(QuadForm, CubicForm)> {
    let c = cubic_from_pair(p)?;
    let n = p.n();
    let vars: VarList = p.coords[1..n].to_vec().into();
    let mut q2 = Poly::zero(vars.clone());
    let mut q3 = Poly::zero(vars);
    for (m, coef) in c.poly().terms() {
        match (m[0], m[n]) {
            (1, 0) => q2.add_term(m[1..n].to_vec(), coef.clone()),
            (0, 0) => q3.add_term(m[1..n].to_vec(), coef.clone()),
            _ => {}
        }
    }
    Ok((QuadForm::from_poly(&q2)?, CubicForm::new(q3)?))
}

/// Product rule on the normal form: the `b0`-component of `ab` is `−2B̃(a,b)`,
/// the `H`-component `h` solves `−2B̃(h,·) = 3·C̃3(a,b,·)` with `K2`
/// coordinates zero, and `b0·m = 0`.
pub fn algebra_from_normal_form(cert: &NormalFormCertificate) -> Result<AlgebraPair> {
    let h = cert.h_dim();
    let d = cert.n + 1;
    let b = cert.quad_part();
    let c3 = polarize(&cert.cubic_part());
    let f2 = b.matrix().scale(&Q::from_integer((-2).into()));
    let three = Q::from_integer(3.into());
    let mut products = vec![vec![vec![Q::zero(); d]; d]; d];
    for j in 0..d {
        products[0][j] = unit_vector(d, j);
        products[j][0] = unit_vector(d, j);
    }
    for i in 0..h {
        for j in i..h {
            let rhs: Vec<Q> = (0..h).map(|l| &three * c3.get(i, j, l)).collect();
            let hpart = solve_linear(&f2, &rhs)?
                .ok_or_else(|| Error::BadCertificate("cubic part not in the image of the quadratic part".into()))?;
            let mut v = vec![Q::zero(); d];
            v[1..=h].clone_from_slice(&hpart);
            v[d - 1] = -(Q::from_integer(2.into()) * b.matrix().get(i, j));
            products[i + 1][j + 1] = v.clone();
            products[j + 1][i + 1] = v;
        }
    }
    let coords: Vec<String> = cert.normal_poly.vars().to_vec();
    AlgebraPair::new(default_labels(d), coords, products)
}

pub fn hilbert_profile(p: &AlgebraPair) -> Result<HilbertProfile> {
    let powers = m_powers(p).ok_or_else(|| Error::InvalidPair("maximal ideal is not nilpotent".into()))?;
    let mut dims: Vec<usize> = powers.iter().map(Subspace::dim).collect();
    dims.push(0);
    Ok(HilbertProfile(dims.windows(2).map(|w| w[0] - w[1]).collect()))
}

pub fn mult_operator(p: &AlgebraPair, a: &[Q]) -> Result<QMatrix> {
    let d = p.dim();
    if a.len() != d {
        return Err(Error::DimensionMismatch { context: "mult_operator", expected: d, found: a.len() });
    }
    if !a[0].is_zero() {
        return Err(Error::Precondition("mult_operator: element is not in m".into()));
    }
    let cols: Vec<Vec<Q>> = (0..d).map(|j| p.mul(a, &p.basis_vector(j))).collect();
    QMatrix::from_cols(&cols, d)
}

/// Searches for a `K2`-valued symmetric cocycle `Δ` that is not a coboundary and
/// whose deformed product `u∘v = uv + Δ(u,v)` changes the Hilbert profile.
pub fn second_structure(p: &AlgebraPair, cert: &NormalFormCertificate) -> Result<Option<AlgebraPair>> {
    let d = p.dim();
    if d != cert.n + 1 {
        return Err(Error::DimensionMismatch { context: "second_structure", expected: cert.n + 1, found: d });
    }
    let n = p.n();
    // K2 coordinates are y_{k+1}..y_r, i.e. pair indices s+k+1 ..= n-1.
    let k2: Vec<usize> = (cert.s + cert.k + 1..n).collect();
    if k2.is_empty() {
        return Ok(None);
    }
    let base: Vec<usize> = (1..=n).filter(|i| !k2.contains(i)).collect();
    let pairs: Vec<(usize, usize)> = base.iter().enumerate().flat_map(|(a, &i)| base[a..].iter().map(move |&j| (i, j))).collect();
    let nk = k2.len();
    let unknowns = pairs.len() * nk;
    let var = |i: usize, j: usize, t: usize| -> Option<usize> {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        pairs.iter().position(|&pr| pr == (i, j)).map(|pos| pos * nk + t)
    };
    // Δ(v, e_z) for a vector v as a linear expression: coefficient rows per target t.
    let delta_expr = |v: &[Q], z: usize| -> Vec<Vec<Q>> {
        let mut rows = vec![vec![Q::zero(); unknowns]; nk];
        for (u, vu) in v.iter().enumerate() {
            if vu.is_zero() {
                continue;
            }
            for (t, row) in rows.iter_mut().enumerate() {
                if let Some(x) = var(u, z, t) {
                    row[x] += vu;
                }
            }
        }
        rows
    };
    let mut constraints: Vec<Vec<Q>> = Vec::new();
    for u in 1..=n {
        for v in 1..=n {
            for z in 1..=n {
                // Δ(uv, z) − Δ(u, vz) = 0, written with Δ symmetric.
                let left = delta_expr(p.product(u, v), z);
                let right = delta_expr(p.product(v, z), u);
                for (l, r) in left.into_iter().zip(right) {
                    let row: Vec<Q> = l.iter().zip(&r).map(|(a, b)| a - b).collect();
                    if !is_zero_vec(&row) {
                        constraints.push(row);
                    }
                }
            }
        }
    }
    let cocycles = if constraints.is_empty() {
        Subspace::full(unknowns)
    } else {
        crate::exactlin::kernel_basis(&QMatrix::from_rows(&constraints, unknowns)?)
    };
    // Coboundaries Δ(u,v) = (uv)_c · k_t.
    let mut cob = Vec::new();
    for c in 1..=n {
        for t in 0..nk {
            let mut v = vec![Q::zero(); unknowns];
            for (pos, &(i, j)) in pairs.iter().enumerate() {
                v[pos * nk + t] = p.product(i, j)[c].clone();
            }
            if !is_zero_vec(&v) {
                cob.push(v);
            }
        }
    }
    let coboundaries = Subspace::span(unknowns, &cob);
    let fresh = coboundaries.complement_from(cocycles.basis());
    if fresh.is_empty() {
        return Ok(None);
    }
    let old_profile = hilbert_profile(p)?;
    let old_cubic = cubic_from_pair(p)?;
    for cand in candidates(&fresh) {
        let mut products: Vec<Vec<Vec<Q>>> = (0..d).map(|i| (0..d).map(|j| p.product(i, j).to_vec()).collect()).collect();
        for (pos, &(i, j)) in pairs.iter().enumerate() {
            for (t, &kt) in k2.iter().enumerate() {
                let c = &cand[pos * nk + t];
                if !c.is_zero() {
                    products[i][j][kt] += c;
                    if i != j {
                        products[j][i][kt] += c;
                    }
                }
            }
        }
        let q = AlgebraPair::new(p.labels.clone(), p.coords.clone(), products)?;
        let report = validate_pair(&q);
        if !report.ok() || report.normalized.as_ref() != Some(&q) {
            continue;
        }
        if hilbert_profile(&q)? == old_profile {
            continue;
        }
        if cubic_from_pair(&q)? != old_cubic {
            continue;
        }
        return Ok(Some(q));
    }
    Ok(None)
}

/// Each fresh cocycle, then sums of pairs, then a weighted sum of all.
fn candidates(fresh: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut out: Vec<Vec<Q>> = fresh.to_vec();
    for i in 0..fresh.len() {
        for j in i + 1..fresh.len() {
            out.push(vec_add(&fresh[i], &fresh[j]));
        }
    }
    if fresh.len() > 2 {
        let mut all = vec![Q::zero(); fresh[0].len()];
        for (w, f) in fresh.iter().enumerate() {
            all = vec_add(&all, &vec_scale(f, &Q::from_integer((w as i64 + 1).into())));
        }
        out.push(all);
    }
    out
}

// ---------------------------------------------------------------------------
// Document format.

/// `H` given as basis labels or as spanning coordinate vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HSpec {
    Labels(Vec<String>),
    Vectors(Vec<Vec<String>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub value: Vec<String>,
}

/// Serialized pair. Missing products are zero, except products with the unit,
/// which default to the unit law.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDocument {
    pub dim: usize,
    pub basis: Vec<String>,
    pub unit: String,
    #[serde(rename = "H")]
    pub h: HSpec,
    pub b0: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<String>>,
    pub products: Vec<ProductEntry>,
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Q> {
    let t = s.trim();
    let bad = || Error::Document(format!("malformed rational {s:?}"));
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a, b),
        None => (t, "1"),
    };
    let num: num::BigInt = num.parse().map_err(|_| bad())?;
    let den: num::BigInt = den.parse().map_err(|_| bad())?;
    if den <= num::BigInt::zero() {
        return Err(Error::Document(format!("denominator must be positive in {s:?}")));
    }
    Ok(Q::new(num, den))
}

fn parse_vector(v: &[String], dim: usize, what: &str) -> Result<Vec<Q>> {
    if v.len() != dim {
        return Err(Error::Document(format!("{what}: expected {dim} coordinates, found {}", v.len())));
    }
    v.iter().map(|s| parse_rational(s)).collect()
}

impl AlgebraDocument {
    pub fn to_pair(&self) -> Result<AlgebraPair> {
        let d = self.dim;
        if d < 2 || self.basis.len() != d {
            return Err(Error::Document(format!("dim {} does not match {} basis labels", d, self.basis.len())));
        }
        let mut index = BTreeMap::new();
        for (i, l) in self.basis.iter().enumerate() {
            if index.insert(l.as_str(), i).is_some() {
                return Err(Error::Document(format!("duplicate basis label {l:?}")));
            }
        }
        let find = |l: &str| index.get(l).copied().ok_or_else(|| Error::Document(format!("unknown basis label {l:?}")));
        let unit = find(&self.unit)?;
        let b0 = find(&self.b0)?;
        let (h_vecs, h_labels): (Vec<Vec<Q>>, Vec<String>) = match &self.h {
            HSpec::Labels(ls) => {
                let mut vs = Vec::new();
                for l in ls {
                    vs.push(unit_vector(d, find(l)?));
                }
                (vs, ls.clone())
            }
            HSpec::Vectors(vs) => {
                let parsed = vs.iter().map(|v| parse_vector(v, d, "H vector")).collect::<Result<Vec<_>>>()?;
                (parsed, (1..=vs.len()).map(|i| format!("h{i}")).collect())
            }
        };
        if h_vecs.len() + 2 != d {
            return Err(Error::Document(format!("H must have {} vectors, found {}", d - 2, h_vecs.len())));
        }
        let mut table: Vec<Vec<Option<Vec<Q>>>> = vec![vec![None; d]; d];
        for e in &self.products {
            let (i, j) = (find(&e.left)?, find(&e.right)?);
            if table[i][j].is_some() {
                return Err(Error::Document(format!("duplicate product {}·{}", e.left, e.right)));
            }
            table[i][j] = Some(parse_vector(&e.value, d, "product")?);
        }
        let mut products = vec![vec![Vec::new(); d]; d];
        for i in 0..d {
            for j in 0..d {
                products[i][j] = match (&table[i][j], &table[j][i]) {
                    (Some(v), _) | (None, Some(v)) => v.clone(),
                    (None, None) if i == unit => unit_vector(d, j),
                    (None, None) if j == unit => unit_vector(d, i),
                    (None, None) => vec![Q::zero(); d],
                };
            }
        }
        let raw = AlgebraPair { labels: self.basis.clone(), coords: pair_coords(d), table: products.into_iter().flatten().collect() };
        let mut cols = vec![unit_vector(d, unit)];
        cols.extend(h_vecs);
        cols.push(unit_vector(d, b0));
        let pm = QMatrix::from_cols(&cols, d)?;
        if pm.determinant()?.is_zero() {
            return Err(Error::Document("unit, H and b0 do not form a basis".into()));
        }
        let mut labels = vec![self.unit.clone()];
        labels.extend(h_labels);
        labels.push(self.b0.clone());
        let pair = raw.change_basis(&pm, labels)?;
        match &self.coords {
            Some(c) => pair.with_coords(c.clone()),
            None => Ok(pair),
        }
    }

    pub fn from_pair(p: &AlgebraPair) -> AlgebraDocument {
        let d = p.dim();
        let mut products = Vec::new();
        for i in 1..d {
            for j in i..d {
                let v = p.product(i, j);
                if !is_zero_vec(v) {
                    products.push(ProductEntry {
                        left: p.labels[i].clone(),
                        right: p.labels[j].clone(),
                        value: v.iter().map(|x| x.to_string()).collect(),
                    });
                }
            }
        }
        AlgebraDocument {
            dim: d,
            basis: p.labels.clone(),
            unit: p.labels[0].clone(),
            h: HSpec::Labels(p.labels[1..d - 1].to_vec()),
            b0: p.labels[d - 1].clone(),
            coords: Some(p.coords.clone()),
            products,
        }
    }
}

pub fn parse_algebra_document(text: &str) -> Result<AlgebraPair> {
    let doc: AlgebraDocument = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
    doc.to_pair()
}

/// Truncated polynomial algebra `k[a]/(a^len)` in the basis `1, a, …, a^{len−1}`.
pub fn chain_algebra_products(len: usize) -> Vec<Vec<Vec<Q>>> {
    let mut out = vec![vec![vec![Q::zero(); len]; len]; len];
    for i in 0..len {
        for j in 0..len {
            if i + j < len {
                out[i][j][i + j] = Q::one();
            }
        }
    }
    out
}
