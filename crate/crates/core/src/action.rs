//! The unipotent group action attached to a pair and its exact checks.
//!
//! `H` acts on `R` by `v ↦ exp(a)·v`. In the adapted basis this is the matrix
//! `exp(Σ tᵢ M_{hᵢ})`, a polynomial in `t1..t(n−1)` because `m` is nilpotent.

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{Subspace, Q};
use crate::forms::{polarize, CubicForm};
use crate::localalg::{mult_operator, validate_pair, AlgebraPair, Check};
use crate::polyring::{var_list, Poly, VarList};

/// Square matrix of polynomials over a common ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    size: usize,
    vars: VarList,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(vars: VarList, size: usize) -> Self {
        PolyMatrix { size, entries: vec![Poly::zero(vars.clone()); size * size], vars }
    }

    pub fn identity(vars: VarList, size: usize) -> Self {
        let mut m = Self::zeros(vars.clone(), size);
        for i in 0..size {
            m.entries[i * size + i] = Poly::constant(vars.clone(), Q::one());
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn vars(&self) -> &VarList {
        &self.vars
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.size + j]
    }

    pub fn col(&self, j: usize) -> Vec<Poly> {
        (0..self.size).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect();
        PolyMatrix { size: self.size, vars: self.vars.clone(), entries }
    }

    pub fn scale(&self, s: &Q) -> PolyMatrix {
        PolyMatrix { size: self.size, vars: self.vars.clone(), entries: self.entries.iter().map(|e| e.scale(s)).collect() }
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        let n = self.size;
        let mut out = Self::zeros(self.vars.clone(), n);
        for i in 0..n {
            for l in 0..n {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] = out.entries[i * n + j].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.vars.clone(), self.size)
    }

    /// Substitutes every ring variable; `images` live in the target ring.
    pub fn compose(&self, images: &[Poly]) -> Result<PolyMatrix> {
        let vars = images.first().map(|p| p.vars().clone()).unwrap_or_else(|| self.vars.clone());
        let entries = self.entries.iter().map(|e| e.compose(images)).collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix { size: self.size, vars, entries })
    }

    /// Evaluates at a rational parameter point.
    pub fn eval(&self, point: &[Q]) -> Vec<Vec<Q>> {
        (0..self.size).map(|i| (0..self.size).map(|j| self.get(i, j).eval(point)).collect()).collect()
    }

    pub fn entry_strings(&self) -> Vec<Vec<String>> {
        (0..self.size).map(|i| (0..self.size).map(|j| self.get(i, j).to_string()).collect()).collect()
    }

    fn exp_nilpotent(&self) -> PolyMatrix {
        let mut sum = Self::identity(self.vars.clone(), self.size);
        let mut term = Self::identity(self.vars.clone(), self.size);
        for j in 1..=self.size + 1 {
            term = term.mul(self).scale(&Q::new(1.into(), (j as i64).into()));
            if term.is_zero() {
                return sum;
            }
            sum = sum.add(&term);
        }
        panic!("exp of a matrix that is not nilpotent")
    }
}

pub fn parameter_names(count: usize) -> VarList {
    let names: Vec<String> = (1..=count).map(|i| format!("t{i}")).collect();
    var_list(&names)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionRealization {
    pub n: usize,
    pub params: VarList,
    /// `exp(Σ tᵢ M_{hᵢ})`.
    pub matrix: PolyMatrix,
    /// `exp(tᵢ M_{hᵢ})` for each `i`.
    pub generators: Vec<PolyMatrix>,
}

impl ActionRealization {
    pub fn at(&self, t: &[Q]) -> Vec<Vec<Q>> {
        self.matrix.eval(t)
    }

    pub fn identity_at_zero(&self) -> bool {
        let zero = vec![Q::zero(); self.params.len()];
        let id: Vec<Vec<Q>> =
            (0..self.n + 1).map(|i| (0..self.n + 1).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect();
        self.at(&zero) == id
    }

    /// `E(t + t') = E(t)·E(t')` and `E(t)·E(t') = E(t')·E(t)` as polynomial identities.
    pub fn group_law_holds(&self) -> bool {
        let h = self.params.len();
        let mut names: Vec<String> = self.params.to_vec();
        names.extend((1..=h).map(|i| format!("s{i}")));
        let ring = var_list(&names);
        let t: Vec<Poly> = (0..h).map(|i| Poly::var(ring.clone(), i)).collect();
        let s: Vec<Poly> = (0..h).map(|i| Poly::var(ring.clone(), h + i)).collect();
        let sum: Vec<Poly> = t.iter().zip(&s).map(|(a, b)| a.add(b)).collect();
        let (Ok(et), Ok(es), Ok(ets)) = (self.matrix.compose(&t), self.matrix.compose(&s), self.matrix.compose(&sum)) else {
            return false;
        };
        let prod = et.mul(&es);
        prod == ets && prod == es.mul(&et)
    }

    /// Each `exp(tᵢ M_{hᵢ}) − I` is nilpotent.
    pub fn generators_unipotent(&self) -> bool {
        self.generators.iter().all(|g| {
            let id = PolyMatrix::identity(self.params.clone(), self.n + 1);
            let u = g.add(&id.scale(&-Q::one()));
            let mut p = u.clone();
            for _ in 0..self.n + 1 {
                p = p.mul(&u);
            }
            p.is_zero()
        })
    }

    /// The product of the one-parameter subgroups equals the full matrix.
    pub fn generators_compose_to_matrix(&self) -> bool {
        let mut prod = PolyMatrix::identity(self.params.clone(), self.n + 1);
        for g in &self.generators {
            prod = prod.mul(g);
        }
        prod == self.matrix
    }
}

fn usable(p: &AlgebraPair) -> Result<AlgebraPair> {
    let report = validate_pair(p);
    if let Some(e) = report.error() {
        return Err(e);
    }
    Ok(report.normalized.expect("valid pair"))
}

fn operator_poly(p: &AlgebraPair, params: &VarList, i: usize) -> Result<PolyMatrix> {
    let m = mult_operator(p, &p.basis_vector(i))?;
    let d = p.dim();
    let mut out = PolyMatrix::zeros(params.clone(), d);
    let t = Poly::var(params.clone(), i - 1);
    for r in 0..d {
        for c in 0..d {
            let v = m.get(r, c);
            if !v.is_zero() {
                out.entries[r * d + c] = t.scale(v);
            }
        }
    }
    Ok(out)
}

pub fn generator_matrices(p: &AlgebraPair) -> Result<ActionRealization> {
    let p = usable(p)?;
    let n = p.n();
    let params = parameter_names(n - 1);
    let ops = (1..n).map(|i| operator_poly(&p, &params, i)).collect::<Result<Vec<_>>>()?;
    let mut total = PolyMatrix::zeros(params.clone(), n + 1);
    for o in &ops {
        total = total.add(o);
    }
    Ok(ActionRealization {
        n,
        matrix: total.exp_nilpotent(),
        generators: ops.iter().map(PolyMatrix::exp_nilpotent).collect(),
        params,
    })
}

/// `Q(exp(Σ tᵢhᵢ)·1) ≡ 0` in `t`.
pub fn orbit_membership_identity(p: &AlgebraPair, c: &CubicForm) -> Result<bool> {
    if c.dim() != p.dim() {
        return Err(Error::DimensionMismatch { context: "orbit_membership_identity", expected: p.dim(), found: c.dim() });
    }
    if c.is_zero() {
        return Err(Error::ZeroForm);
    }
    let action = generator_matrices(p)?;
    Ok(c.poly().compose(&action.matrix.col(0))?.is_zero())
}

/// `Q̃(aα,α',α'') + Q̃(α,aα',α'') + Q̃(α,α',aα'') = 0` for `a` in the `H` basis and
/// all basis triples.
pub fn polar_identity_check(p: &AlgebraPair, c: &CubicForm) -> bool {
    let p = usable(p).unwrap_or_else(|_| p.clone());
    polar_identity_for(&p, c, 1..p.n())
}

/// The same identity with `a` ranging over the given basis indices.
pub fn polar_identity_for(p: &AlgebraPair, c: &CubicForm, generators: impl IntoIterator<Item = usize>) -> bool {
    let d = p.dim();
    if c.dim() != d {
        return false;
    }
    let tri = polarize(c);
    let e = |i: usize| p.basis_vector(i);
    for a in generators {
        let ae: Vec<Vec<Q>> = (0..d).map(|i| p.mul(&e(a), &e(i))).collect();
        for i in 0..d {
            for j in i..d {
                for l in j..d {
                    let v = tri.eval(&ae[i], &e(j), &e(l)) + tri.eval(&e(i), &ae[j], &e(l)) + tri.eval(&e(i), &e(j), &ae[l]);
                    if !v.is_zero() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn alg_mul(p: &AlgebraPair, u: &[Poly], v: &[Poly]) -> Vec<Poly> {
    let d = p.dim();
    let ring = u[0].vars().clone();
    let mut out = vec![Poly::zero(ring); d];
    for i in 0..d {
        if u[i].is_zero() {
            continue;
        }
        for j in 0..d {
            if v[j].is_zero() {
                continue;
            }
            let uv = u[i].mul(&v[j]);
            for (o, c) in out.iter_mut().zip(p.product(i, j)) {
                if !c.is_zero() {
                    *o = o.add(&uv.scale(c));
                }
            }
        }
    }
    out
}

/// `Σ_j coeff(j)·u^j` for `j ≥ 1`, stopping at the first zero power.
fn alg_series(p: &AlgebraPair, u: &[Poly], coeff: impl Fn(usize) -> Q) -> Vec<Poly> {
    let mut power = u.to_vec();
    let mut sum: Vec<Poly> = u.iter().map(|x| x.scale(&coeff(1))).collect();
    for j in 2..=p.dim() + 1 {
        power = alg_mul(p, &power, u);
        if power.iter().all(Poly::is_zero) {
            break;
        }
        sum = sum.iter().zip(&power).map(|(s, x)| s.add(&x.scale(&coeff(j)))).collect();
    }
    sum
}

/// Effectiveness, orbit dimension and generation.
pub fn open_orbit_check(p: &AlgebraPair) -> Vec<Check> {
    let report = validate_pair(p);
    let generates = report.check("generates").cloned().expect("always reported");
    let Some(q) = report.normalized.filter(|_| report.checks.iter().take(5).all(|c| c.passed)) else {
        let skip = |name: &str| Check { name: name.into(), passed: false, detail: "pair is not a local algebra".into() };
        return vec![skip("effective"), skip("orbit_dimension"), generates];
    };
    let n = q.n();
    let d = q.dim();

    // log(exp(a)) = a for the generic a = Σ tᵢhᵢ, so exp(a) = 1 forces a = 0.
    let params = parameter_names(n - 1);
    let mut a = vec![Poly::zero(params.clone()); d];
    for i in 1..n {
        a[i] = Poly::var(params.clone(), i - 1);
    }
    let fact = |j: usize| (1..=j as i64).fold(Q::one(), |acc, k| acc * Q::from_integer(k.into()));
    let exp_minus_one = alg_series(&q, &a, |j| fact(j).recip());
    let log = alg_series(&q, &exp_minus_one, |j| {
        let v = Q::new(1.into(), (j as i64).into());
        if j % 2 == 0 {
            -v
        } else {
            v
        }
    });
    let effective = log == a;

    let images: Vec<Vec<Q>> = (1..n).map(|i| q.basis_vector(i)[1..].to_vec()).collect();
    let rank = Subspace::span(d - 1, &images).dim();
    vec![
        Check {
            name: "effective".into(),
            passed: effective,
            detail: if effective { "log(exp(a)) = a".into() } else { "log(exp(a)) ≠ a".into() },
        },
        Check {
            name: "orbit_dimension".into(),
            passed: rank == n - 1,
            detail: format!("differential rank {rank} of {}", n - 1),
        },
        generates,
    ]
}

/// `Q(φ(x)) − Q(x)` for a substitution `φ` given by its coordinate images.
pub fn substitution_residual(c: &CubicForm, images: &[Poly]) -> Result<Poly> {
    if images.len() != c.dim() {
        return Err(Error::DimensionMismatch { context: "substitution_residual", expected: c.dim(), found: images.len() });
    }
    let ring = images[0].vars().clone();
    let offset = ring.len() - c.dim();
    if ring[offset..] != c.vars()[..] {
        return Err(Error::Precondition("substitution ring must end with the form's variables".into()));
    }
    let ids: Vec<Poly> = (0..c.dim()).map(|i| Poly::var(ring.clone(), offset + i)).collect();
    Ok(c.poly().compose(images)?.sub(&c.poly().compose(&ids)?))
}

/// Result of substituting the printed `(t1,t2)`-family for
/// `x0(x0y0 + x1y1) + x1³` into the form.
#[derive(Clone, Debug)]
pub struct FamilyDiagnostic {
    /// Entries exactly as printed, including the `x0` inside the `y1` row.
    pub printed: Poly,
    /// The `y1` row read linearly as `−2t1x1 − 2(t2 + t1²/2)x0`.
    pub linear: Poly,
}

impl FamilyDiagnostic {
    pub fn printed_invariant(&self) -> bool {
        self.printed.is_zero()
    }

    pub fn linear_invariant(&self) -> bool {
        self.linear.is_zero()
    }
}

pub fn printed_family_diagnostic() -> Result<FamilyDiagnostic> {
    let ring = var_list(&["t1", "t2", "x0", "x1", "y1", "y0"]);
    let form = crate::polyring::parse_poly("x0^2*y0 + x0*x1*y1 + x1^3", &var_list(&["x0", "x1", "y1", "y0"]))?;
    let c = CubicForm::new(form)?;
    let p = |s: &str| crate::polyring::parse_poly(s, &ring);
    let x0 = p("x0")?;
    let x1 = p("x1 + t1*x0")?;
    let y0 = p("y0 - 1/2*t1*y1 + t2*x1 + 1/2*t1^2*x1 + t1*t2*x0 + 1/3*t1^3*x0")?;
    let printed_y1 = p("y1 - 2*t1*x1 - 2*t2*x0 - t1^2*x0^2")?;
    let linear_y1 = p("y1 - 2*t1*x1 - 2*t2*x0 - t1^2*x0")?;
    Ok(FamilyDiagnostic {
        printed: substitution_residual(&c, &[x0.clone(), x1.clone(), printed_y1, y0.clone()])?,
        linear: substitution_residual(&c, &[x0, x1, linear_y1, y0])?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{q, qf};
    use crate::localalg::{algebra_from_normal_form, chain_algebra_products, cubic_from_pair};
    use crate::normalform::{recognize, Verdict};
    use crate::polyring::groebner::GroebnerLimits;
    use crate::polyring::parse_poly;

    fn ex2_pair() -> AlgebraPair {
        let vars = var_list(&["x0", "x1", "y1", "y0"]);
        let c = CubicForm::new(parse_poly("x0^2*y0 + x0*x1*y1 + x1^3", &vars).unwrap()).unwrap();
        let Verdict::Admits { certificate, .. } = recognize(&c, &GroebnerLimits::default()).unwrap().verdict else {
            panic!()
        };
        algebra_from_normal_form(&certificate).unwrap()
    }

    #[test]
    fn example_two_action() {
        let p = ex2_pair();
        let act = generator_matrices(&p).unwrap();
        assert!(act.identity_at_zero());
        assert!(act.group_law_holds());
        assert!(act.generators_unipotent());
        assert!(act.generators_compose_to_matrix());
        // exp(t1h1 + t2h2)·1 = 1 + t1h1 + (t2 − 3t1²/2)h2 + (t1³/2 − t1t2)b0.
        let col: Vec<String> = act.matrix.col(0).iter().map(|x| x.to_string()).collect();
        assert_eq!(col, ["1", "t1", "-3/2*t1^2 + t2", "1/2*t1^3 - t1*t2"]);
        assert!((0..4).all(|i| act.matrix.get(i, i).to_string() == "1"));
        assert!(act.matrix.entries.iter().all(|e| e.total_degree().unwrap_or(0) <= 3));

        let c = cubic_from_pair(&p).unwrap();
        assert!(orbit_membership_identity(&p, &c).unwrap());
        assert!(polar_identity_check(&p, &c));
        let fermat = CubicForm::new(parse_poly("x0^3 + x1^3 + y1^3 + y0^3", c.vars()).unwrap()).unwrap();
        assert!(!orbit_membership_identity(&p, &fermat).unwrap());
        assert!(open_orbit_check(&p).iter().all(|c| c.passed));
    }

    #[test]
    fn polar_identity_boundaries() {
        let p = ex2_pair();
        let c = cubic_from_pair(&p).unwrap();
        let mut perturbed = c.poly().clone();
        perturbed.add_term(vec![0, 3, 0, 0], q(1));
        assert!(!polar_identity_check(&p, &CubicForm::new(perturbed).unwrap()));
        assert!(!polar_identity_for(&p, &c, [p.n()]));
        let zero = CubicForm::new(Poly::zero(c.vars().clone())).unwrap();
        assert!(orbit_membership_identity(&p, &zero).is_err());
    }

    #[test]
    fn chain_shift_exponential() {
        let p = AlgebraPair::from_table(chain_algebra_products(4)).unwrap();
        let act = generator_matrices(&p).unwrap();
        let g = &act.generators[0];
        let fact = [1, 1, 2, 6];
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i >= j { format!("{}", qf(1, fact[i - j])) } else { "0".into() };
                let got = g.get(i, j).eval(&[q(1), q(0)]).to_string();
                assert_eq!(got, expect, "({i},{j})");
                if i >= j {
                    assert_eq!(g.get(i, j).total_degree().unwrap(), (i - j) as u32);
                }
            }
        }
    }

    #[test]
    fn generation_failure_is_reported() {
        // k[a]/(a^5) with H spanned by a^2, a^3, a^4 and b0 = a.
        let mut products = chain_algebra_products(5);
        let perm = [0, 2, 3, 4, 1];
        let mut permuted = products.clone();
        for i in 0..5 {
            for j in 0..5 {
                permuted[i][j] = perm.iter().map(|&k| products[perm[i]][perm[j]][k].clone()).collect();
            }
        }
        products = permuted;
        let p = AlgebraPair::from_table(products).unwrap();
        let checks = open_orbit_check(&p);
        assert!(!checks.iter().find(|c| c.name == "generates").unwrap().passed);
        assert!(generator_matrices(&p).is_err());
    }

    #[test]
    fn printed_family() {
        let d = printed_family_diagnostic().unwrap();
        assert!(!d.printed_invariant());
        assert!(!d.printed.is_homogeneous(4));
        assert!(!d.linear_invariant());
    }
}
