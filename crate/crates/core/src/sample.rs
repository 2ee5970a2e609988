//! Seeded random generators for tests and property checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diffeo::Diffeo;
use crate::field::VectorField;
use crate::jet::{Jet, MultiIndex};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rational `p/q` with `|p| ≤ bound`, `1 ≤ q ≤ bound`.
pub fn rational(rng: &mut impl Rng, bound: i64) -> BigRational {
    let p = rng.gen_range(-bound..=bound);
    let q = rng.gen_range(1..=bound.max(1));
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn scalar<S: Scalar>(rng: &mut impl Rng, bound: i64) -> S {
    S::from_rational(&rational(rng, bound))
}

pub fn nonzero_scalar<S: Scalar>(rng: &mut impl Rng, bound: i64) -> S {
    loop {
        let c: S = scalar(rng, bound);
        if !c.is_zero() {
            return c;
        }
    }
}

/// Homogeneous of degree `deg`; each monomial present with probability
/// `density`, and never identically zero.
pub fn homogeneous<S: Scalar>(
    rng: &mut impl Rng,
    nvars: usize,
    order: u32,
    deg: u32,
    density: f64,
) -> Jet<S> {
    let monos = MultiIndex::all_of_degree(nvars, deg);
    loop {
        let mut terms = Vec::new();
        for m in &monos {
            if rng.gen_bool(density) {
                terms.push((m.clone(), scalar::<S>(rng, 3)));
            }
        }
        let j = Jet::from_terms(nvars, order, terms);
        if !j.is_zero() || deg > order {
            return j;
        }
    }
}

/// Terms of degrees `lo..=hi`, sparse.
pub fn jet<S: Scalar>(rng: &mut impl Rng, nvars: usize, order: u32, lo: u32, hi: u32) -> Jet<S> {
    let mut out = Jet::zero(nvars, order);
    for d in lo..=hi.min(order) {
        let h = homogeneous(rng, nvars, order, d, 0.4);
        out = &out + &h;
    }
    out
}

/// A field in 𝒳_k: vanishing order exactly `k + 1`.
pub fn field<S: Scalar>(rng: &mut impl Rng, nvars: usize, order: u32, k: u32) -> VectorField<S> {
    loop {
        let comps = (0..nvars)
            .map(|_| jet(rng, nvars, order, k + 1, order))
            .collect();
        let x = VectorField::new(comps).expect("same shape");
        if x.order_of_vanishing() == Some(k + 1) {
            return x;
        }
    }
}

/// A homogeneous field of degree `deg`.
pub fn homogeneous_field<S: Scalar>(
    rng: &mut impl Rng,
    nvars: usize,
    order: u32,
    deg: u32,
) -> VectorField<S> {
    loop {
        let comps = (0..nvars)
            .map(|_| homogeneous(rng, nvars, order, deg, 0.5))
            .collect();
        let x = VectorField::new(comps).expect("same shape");
        if !x.is_zero() {
            return x;
        }
    }
}

/// Tangent to the identity with order exactly `k`.
pub fn tangent_diffeo<S: Scalar>(
    rng: &mut impl Rng,
    nvars: usize,
    order: u32,
    k: u32,
) -> Diffeo<S> {
    field(rng, nvars, order, k).exp().expect("nilpotent")
}

/// An invertible linear part plus random higher-order terms.
pub fn diffeo<S: Scalar>(rng: &mut impl Rng, nvars: usize, order: u32) -> Diffeo<S> {
    let lin = loop {
        let m = Matrix::from_rows(
            (0..nvars)
                .map(|_| (0..nvars).map(|_| scalar::<S>(rng, 2)).collect())
                .collect(),
        );
        if !m.determinant().is_zero() {
            break m;
        }
    };
    let comps = (0..nvars)
        .map(|i| {
            let linear = Jet::from_terms(
                nvars,
                order,
                (0..nvars).map(|j| (MultiIndex::unit(nvars, j), lin.get(i, j).clone())),
            );
            &linear + &jet(rng, nvars, order, 2, order)
        })
        .collect();
    Diffeo::new(comps).expect("invertible")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Qi;

    #[test]
    fn seeded_and_well_formed() {
        let a: Diffeo<Qi> = diffeo(&mut rng(7), 2, 6);
        let b: Diffeo<Qi> = diffeo(&mut rng(7), 2, 6);
        assert_eq!(a, b);
        let f: Diffeo<Qi> = tangent_diffeo(&mut rng(3), 3, 6, 2);
        assert_eq!(f.tangency_order(), crate::diffeo::TangencyOrder::Order(2));
    }
}
