//! Exact coprimality of homogeneous polynomials.
//!
//! Two variables: dehomogenize and take a univariate GCD, checking the point
//! at infinity separately. Three or more: shear so that both polynomials are
//! monic in the last variable, then decide whether the resultant in that
//! variable vanishes identically by evaluating it on a grid large enough to
//! detect any nonzero polynomial of its degree.

use crate::jet::{Jet, MultiIndex};
use crate::scalar::Scalar;

/// Dense univariate polynomial, `coeffs[k]` multiplies `t^k`.
pub type UPoly<S> = Vec<S>;

fn trim<S: Scalar>(p: &mut UPoly<S>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn upoly_mul<S: Scalar>(a: &[S], b: &[S]) -> UPoly<S> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![S::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j].mul_add_assign(x, y);
        }
    }
    trim(&mut out);
    out
}

fn upoly_rem<S: Scalar>(a: &[S], b: &[S]) -> UPoly<S> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = b[db].inv().expect("nonzero leading coefficient");
    while r.len() > db {
        let dr = r.len() - 1;
        let factor = r[dr].mul_ref(&lead_inv);
        for (k, bk) in b.iter().enumerate() {
            let idx = dr - db + k;
            r[idx] = r[idx].clone() - factor.mul_ref(bk);
        }
        trim(&mut r);
    }
    r
}

/// Degree of the GCD of two univariate polynomials; `None` when both vanish.
pub fn upoly_gcd_degree<S: Scalar>(a: &[S], b: &[S]) -> Option<usize> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = upoly_rem(&a, &b);
        a = b;
        b = r;
    }
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

/// Total degree of a nonzero homogeneous jet.
fn hom_degree<S: Scalar>(f: &Jet<S>) -> u32 {
    f.terms().next().map(|(k, _)| k.degree()).unwrap_or(0)
}

/// `true` when two homogeneous polynomials share no common factor of
/// positive degree. Zero shares every factor with everything, so `0` is
/// coprime only to nonzero constants.
pub fn coprime_homogeneous<S: Scalar>(f: &Jet<S>, g: &Jet<S>) -> bool {
    assert_eq!(f.nvars(), g.nvars(), "dimension mismatch");
    if f.is_zero() || g.is_zero() {
        let other = if f.is_zero() { g } else { f };
        return !other.is_zero() && hom_degree(other) == 0;
    }
    let (df, dg) = (hom_degree(f), hom_degree(g));
    if df == 0 || dg == 0 {
        return true;
    }
    match f.nvars() {
        1 => false,
        2 => coprime_binary(f, g, df, dg),
        _ => coprime_by_resultant(f, g, df, dg),
    }
}

fn coprime_binary<S: Scalar>(f: &Jet<S>, g: &Jet<S>, df: u32, dg: u32) -> bool {
    let deh = |p: &Jet<S>, d: u32| {
        let mut u = vec![S::zero(); d as usize + 1];
        for (k, c) in p.terms() {
            u[k.get(0) as usize] = c.clone();
        }
        u
    };
    let (uf, ug) = (deh(f, df), deh(g, dg));
    // y divides a form exactly when its pure x-power coefficient vanishes.
    if uf[df as usize].is_zero() && ug[dg as usize].is_zero() {
        return false;
    }
    upoly_gcd_degree(&uf, &ug) == Some(0)
}

/// Evaluates `p(a + c·t, t)` as a univariate polynomial in `t`, where the
/// last variable is `t` and the others are `a_i + c_i t`.
fn restrict_to_line<S: Scalar>(p: &Jet<S>, a: &[S], c: &[S]) -> UPoly<S> {
    let n = p.nvars();
    let mut out: UPoly<S> = Vec::new();
    for (k, coef) in p.terms() {
        let mut term: UPoly<S> = vec![coef.clone()];
        for i in 0..n - 1 {
            let lin = vec![a[i].clone(), c[i].clone()];
            for _ in 0..k.get(i) {
                term = upoly_mul(&term, &lin);
            }
        }
        let mut shifted = vec![S::zero(); k.get(n - 1) as usize];
        shifted.extend(term);
        if shifted.len() > out.len() {
            out.resize(shifted.len(), S::zero());
        }
        for (o, s) in out.iter_mut().zip(shifted) {
            o.add_assign_ref(&s);
        }
    }
    trim(&mut out);
    out
}

fn eval_point<S: Scalar>(p: &Jet<S>, pt: &[S]) -> S {
    let mut acc = S::zero();
    for (k, coef) in p.terms() {
        let mut v = coef.clone();
        for (i, &e) in k.exps().iter().enumerate() {
            for _ in 0..e {
                v = v.mul_ref(&pt[i]);
            }
        }
        acc.add_assign_ref(&v);
    }
    acc
}

/// Points of `{0, …, bound}^dim` in lexicographic order.
fn grid(dim: usize, bound: u32) -> impl Iterator<Item = Vec<u32>> {
    let total = (bound as u64 + 1).pow(dim as u32);
    (0..total).map(move |mut idx| {
        let mut v = vec![0u32; dim];
        for slot in v.iter_mut().rev() {
            *slot = (idx % (bound as u64 + 1)) as u32;
            idx /= bound as u64 + 1;
        }
        v
    })
}

fn coprime_by_resultant<S: Scalar>(f: &Jet<S>, g: &Jet<S>, df: u32, dg: u32) -> bool {
    let n = f.nvars();
    let to_s = |v: &[u32]| v.iter().map(|&x| S::from_i64(x as i64)).collect::<Vec<S>>();
    // A shear making both monic in the last variable exists on this grid
    // because f·g restricted to z_n = 1 is a nonzero polynomial of degree
    // at most df + dg.
    let shear = grid(n - 1, df + dg)
        .map(|c| to_s(&c))
        .find(|c| {
            let mut pt = c.clone();
            pt.push(S::one());
            !eval_point(f, &pt).is_zero() && !eval_point(g, &pt).is_zero()
        })
        .expect("shear search is exhaustive");
    for a in grid(n - 1, df * dg) {
        let a = to_s(&a);
        let rf = restrict_to_line(f, &a, &shear);
        let rg = restrict_to_line(g, &a, &shear);
        if upoly_gcd_degree(&rf, &rg) == Some(0) {
            return true;
        }
    }
    false
}

/// Exact quotient `p / z_var`, if `z_var` divides `p`.
pub fn div_by_var<S: Scalar>(p: &Jet<S>, var: usize) -> Option<Jet<S>> {
    p.div_monomial(&MultiIndex::unit(p.nvars(), var))
}
