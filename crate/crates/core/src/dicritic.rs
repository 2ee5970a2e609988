//! Dicritic and regular dicritic predicates.
//!
//! A field of vanishing order `k + 1 ≥ 2` is dicritic when its leading
//! homogeneous part is `f(z)·R` for a homogeneous `f` of degree `k`. It is
//! regular dicritic when moreover `f` is coprime to
//! `z_j p^{(i)} − z_i p^{(j)}` for some pair `i < j`, where `p` is the
//! degree-`k + 2` part.

use crate::diffeo::{Diffeo, TangencyOrder};
use crate::field::VectorField;
use crate::jet::{Jet, MultiIndex};
use crate::poly::coprime_homogeneous;
use crate::scalar::Scalar;

/// If the homogeneous tuple `p` (all of degree `deg`) equals `f · z`, returns
/// `f`.
fn radial_factor<S: Scalar>(p: &[Jet<S>]) -> Option<Jet<S>> {
    let n = p.len();
    let f = p[0].div_monomial(&MultiIndex::unit(n, 0))?;
    for (i, pi) in p.iter().enumerate() {
        let zi = Jet::var(n, pi.order(), i);
        if *pi != &zi * &f {
            return None;
        }
    }
    Some(f)
}

impl<S: Scalar> VectorField<S> {
    /// `(k, f)` when the leading part is `f(z)·R` with `deg f = k ≥ 1`.
    pub fn dicritic_factor(&self) -> Option<(u32, Jet<S>)> {
        let d = self.order_of_vanishing()?;
        if d < 2 {
            return None;
        }
        let lead = self.homogeneous_part(d);
        radial_factor(lead.components()).map(|f| (d - 1, f))
    }

    pub fn is_dicritic(&self) -> bool {
        self.dicritic_factor().is_some()
    }

    /// A pair `(i, j)` witnessing regularity, if any. Needs the degree
    /// `k + 2` part, so fields whose `k + 2` exceeds the jet order are never
    /// reported regular.
    pub fn regular_dicritic_witness(&self) -> Option<(usize, usize)> {
        let (k, f) = self.dicritic_factor()?;
        if k + 2 > self.order() {
            return None;
        }
        let n = self.nvars();
        let lifted: Vec<Jet<S>> = self
            .homogeneous_part(k + 2)
            .components()
            .iter()
            .map(|c| c.with_order(k + 3))
            .collect();
        let f = f.with_order(k + 3);
        for i in 0..n {
            for j in i + 1..n {
                let zi = Jet::var(n, k + 3, i);
                let zj = Jet::var(n, k + 3, j);
                let h = &(&zj * &lifted[i]) - &(&zi * &lifted[j]);
                if coprime_homogeneous(&f, &h) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_regular_dicritic(&self) -> bool {
        self.regular_dicritic_witness().is_some()
    }
}

impl<S: Scalar> Diffeo<S> {
    /// `(k, f)` when `self` is tangent to the identity with order `k` and its
    /// leading term is `f(z)·z`.
    pub fn dicritic_factor(&self) -> Option<(u32, Jet<S>)> {
        let TangencyOrder::Order(k) = self.tangency_order() else {
            return None;
        };
        let disp: Vec<Jet<S>> = self
            .displacement()
            .iter()
            .map(|c| c.homogeneous_part(k + 1))
            .collect();
        radial_factor(&disp).map(|f| (k, f))
    }

    pub fn is_dicritic(&self) -> bool {
        self.dicritic_factor().is_some()
    }

    /// Regular dicritic in the sense of its infinitesimal generator.
    pub fn is_regular_dicritic(&self) -> bool {
        self.is_tangent_to_identity() && self.log().is_ok_and(|x| x.is_regular_dicritic())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::xy::poly;
    use crate::scalar::Qi;

    type F = VectorField<Qi>;

    fn field(n: u32, a: &[(i64, u32, u32)], b: &[(i64, u32, u32)]) -> F {
        F::new(vec![poly(n, a), poly(n, b)]).unwrap()
    }

    #[test]
    fn dicritic_detection() {
        let n = 6;
        let f: Jet<Qi> = poly(n, &[(1, 1, 0), (1, 0, 1)]);
        assert!(F::scaled_radial(&f).is_dicritic());
        let d = field(n, &[(1, 2, 0)], &[(1, 1, 1)]);
        assert_eq!(d.dicritic_factor(), Some((1, poly(n, &[(1, 1, 0)]))));
        assert!(!field(n, &[(1, 2, 1)], &[]).is_dicritic());
        assert!(!F::radial(2, n).is_dicritic());
    }

    #[test]
    fn regularity() {
        let n = 6;
        let f: Jet<Qi> = poly(n, &[(1, 1, 0), (1, 0, 1)]);
        // y p1 − x p2 = x^4 with p = (0, −x^3)
        let x = F::scaled_radial(&f)
            .try_add(&field(n, &[], &[(-1, 3, 0)]))
            .unwrap();
        assert!(x.is_dicritic());
        assert!(x.is_regular_dicritic());
        assert!(!F::scaled_radial(&f).is_regular_dicritic());
        // x^2 d/dx + xy d/dy has f = x and no cubic part.
        assert!(!field(n, &[(1, 2, 0)], &[(1, 1, 1)]).is_regular_dicritic());
    }

    #[test]
    fn diffeo_variants() {
        let n = 6;
        let f: Jet<Qi> = poly(n, &[(1, 1, 0), (1, 0, 1)]);
        let x = F::scaled_radial(&f)
            .try_add(&field(n, &[], &[(-1, 3, 0)]))
            .unwrap();
        let g = x.exp().unwrap();
        assert_eq!(g.dicritic_factor(), Some((1, f)));
        assert!(g.is_regular_dicritic());
        assert!(!Diffeo::<Qi>::identity(2, n).is_dicritic());
    }
}
