#![allow(dead_code)]

use addcubic::cli::scramble_matrix;
use addcubic::exactlin::{QMatrix, Q};
use addcubic::forms::{degenerate_space, CubicForm};
use addcubic::normalform::normal_vars;
use addcubic::polyring::Poly;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(rng: &mut ChaCha8Rng, nonzero: bool) -> Q {
    loop {
        let p: i64 = rng.gen_range(-3..=3);
        if nonzero && p == 0 {
            continue;
        }
        return Q::new(p.into(), rng.gen_range(1i64..=3).into());
    }
}

/// A normal-form instance with known invariants.
#[derive(Clone, Debug)]
pub struct Instance {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub square_coeffs: Vec<Q>,
    pub normal: CubicForm,
}

impl Instance {
    pub fn unique(&self) -> bool {
        self.k + self.s + 1 == self.n
    }
}

/// All `(n, k, s)` with `1 ≤ k ≤ s`, `s + k + 1 ≤ n ≤ max_n`.
pub fn shapes(max_n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for n in 3..=max_n {
        for s in 1..n {
            for k in 1..=s {
                if s + k < n {
                    out.push((n, k, s));
                }
            }
        }
    }
    out
}

fn cubic_monomials(k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for a in 0..k {
        for b in a..k {
            for c in b..k {
                let mut m = vec![0u32; k];
                m[a] += 1;
                m[b] += 1;
                m[c] += 1;
                out.push(m);
            }
        }
    }
    out
}

pub fn random_instance(rng: &mut ChaCha8Rng, n: usize, k: usize, s: usize) -> Instance {
    assert!(1 <= k && k <= s && s + k < n);
    let r = n - 1 - s;
    let vars = normal_vars(s, r);
    let q3 = loop {
        let sub: Vec<String> = vars[1..=k].to_vec();
        let mut p = Poly::zero(sub.into());
        for m in cubic_monomials(k) {
            if k == 1 || rng.gen_bool(0.6) {
                p.add_term(m, small_rational(rng, k == 1));
            }
        }
        if let Ok(c) = CubicForm::new(p) {
            if !c.is_zero() && degenerate_space(&c).is_zero() {
                break c;
            }
        }
    };
    let mut poly = Poly::zero(vars.clone());
    let mono = |idx: &[usize]| {
        let mut m = vec![0u32; n + 1];
        for &i in idx {
            m[i] += 1;
        }
        m
    };
    poly.add_term(mono(&[0, 0, n]), Q::from_integer(1.into()));
    for i in 1..=k {
        poly.add_term(mono(&[0, i, s + i]), Q::from_integer(1.into()));
    }
    let square_coeffs: Vec<Q> = (k + 1..=s).map(|_| small_rational(rng, true)).collect();
    for (j, c) in square_coeffs.iter().enumerate() {
        let i = k + 1 + j;
        poly.add_term(mono(&[0, i, i]), c.clone());
    }
    for (m, c) in q3.poly().terms() {
        let mut full = vec![0u32; n + 1];
        full[1..=k].copy_from_slice(m);
        poly.add_term(full, c.clone());
    }
    Instance { n, k, s, square_coeffs, normal: CubicForm::new(poly).unwrap() }
}

/// Random shape with `n ≤ max_n`, optionally forcing uniqueness.
pub fn random_shaped_instance(rng: &mut ChaCha8Rng, max_n: usize, unique: Option<bool>) -> Instance {
    let all: Vec<_> = shapes(max_n).into_iter().filter(|&(n, k, s)| unique.is_none_or(|u| (k + s + 1 == n) == u)).collect();
    let (n, k, s) = all[rng.gen_range(0..all.len())];
    random_instance(rng, n, k, s)
}

pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> QMatrix {
    scramble_matrix(n, rng.gen())
}
