//! Planar diffeomorphisms preserving a pair of closed forms with poles on
//! the axes, and a checker for linear transformation laws on such pairs.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::diffeo::Diffeo;
use crate::error::{Error, Result};
use crate::forms::OneForm;
use crate::jet::{Jet, MultiIndex};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// A generator together with the closed forms it preserves.
#[derive(Clone, Debug)]
pub struct NormalForm<S> {
    pub diffeo: Diffeo<S>,
    pub forms: [OneForm<S>; 2],
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

/// `u^(num/den)` for a unit `u`, where `root` is the chosen value of
/// `u(0)^(num/den)`; the choice is checked.
pub fn unit_power<S: Scalar>(u: &Jet<S>, num: i64, den: i64, root: &S) -> Result<Jet<S>> {
    if den == 0 {
        return Err(bad("zero exponent denominator"));
    }
    let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
    let u0 = u.constant_term();
    let u0inv = u0.inv().ok_or(Error::NotAUnit)?;
    let lhs = root.powi(den).ok_or_else(|| bad("zero root"))?;
    if Some(lhs) != u0.powi(num) {
        return Err(bad(format!("supplied root is not u(0)^({num}/{den})")));
    }
    let w = &u.scale(&u0inv) - &Jet::one(u.nvars(), u.order());
    let alpha = BigRational::new(BigInt::from(num), BigInt::from(den));
    Ok(w.binomial_power(&alpha)?.scale(root))
}

fn mono<S: Scalar>(order: u32, a: u32, b: u32) -> Jet<S> {
    Jet::monomial(2, order, MultiIndex::new([a, b]), S::one())
}

/// `d(1/(x^n y^m))`
pub fn polar_form<S: Scalar>(order: u32, n: u32, m: u32) -> Result<OneForm<S>> {
    OneForm::log_exact(order, &S::zero(), &S::zero(), n, m, &Jet::one(2, order))
}

/// `1 + k x^n y^m`
fn one_plus<S: Scalar>(order: u32, k: &S, n: u32, m: u32) -> Jet<S> {
    &Jet::one(2, order) + &mono::<S>(order, n, m).scale(k)
}

/// `(x·U₂^{m/D} U₁^{−q/D}, y·U₁^{p/D} U₂^{−n/D})` with `U₁ = 1 + k₁x^n y^m`,
/// `U₂ = 1 + k₂x^p y^q` and `D = nq − pm`. It shifts `1/(x^n y^m)` by `k₁`
/// and `1/(x^p y^q)` by `k₂`, so both polar forms are invariant.
pub fn family_a<S: Scalar>(
    order: u32,
    (n, m): (u32, u32),
    (p, q): (u32, u32),
    k1: &S,
    k2: &S,
) -> Result<NormalForm<S>> {
    let d = i64::from(n) * i64::from(q) - i64::from(p) * i64::from(m);
    if d == 0 {
        return Err(bad("D = nq - pm vanishes"));
    }
    let u1 = one_plus(order, k1, n, m);
    let u2 = one_plus(order, k2, p, q);
    let one = S::one();
    let u = &unit_power(&u2, m.into(), d, &one)? * &unit_power(&u1, -i64::from(q), d, &one)?;
    let v = &unit_power(&u1, p.into(), d, &one)? * &unit_power(&u2, -i64::from(n), d, &one)?;
    let diffeo = Diffeo::new(vec![
        &mono::<S>(order, 1, 0) * &u,
        &mono::<S>(order, 0, 1) * &v,
    ])?;
    Ok(NormalForm {
        diffeo,
        forms: [polar_form(order, n, m)?, polar_form(order, p, q)?],
    })
}

/// `(a x, r y (1 + k x^n y^m)^{−1/m})` with `r = a^{−n/m}` supplied.
/// Preserves `d(1/(x^n y^m))` and `dx/x`.
pub fn family_b<S: Scalar>(
    order: u32,
    a: &S,
    root: &S,
    (n, m): (u32, u32),
    k: &S,
) -> Result<NormalForm<S>> {
    if m == 0 {
        return Err(bad("m must be positive"));
    }
    if a.is_zero() {
        return Err(bad("a must be nonzero"));
    }
    let an = a.powi(-i64::from(n)).expect("nonzero");
    if root.powi(m.into()) != Some(an) {
        return Err(bad("root is not a^(-n/m)"));
    }
    let w = mono::<S>(order, n, m).scale(k);
    let y = &mono::<S>(order, 0, 1).scale(root)
        * &w.binomial_power(&BigRational::new((-1).into(), m.into()))?;
    let diffeo = Diffeo::new(vec![mono::<S>(order, 1, 0).scale(a), y])?;
    Ok(NormalForm {
        diffeo,
        forms: [polar_form(order, n, m)?, OneForm::log_dz(2, order, 0)],
    })
}

/// `(r x (1 + k x^n y^m)^{−1/n}, b y)` with `r = b^{−m/n}` supplied.
/// Preserves `d(1/(x^n y^m))` and `dy/y`.
pub fn family_c<S: Scalar>(
    order: u32,
    b: &S,
    root: &S,
    (n, m): (u32, u32),
    k: &S,
) -> Result<NormalForm<S>> {
    if n == 0 {
        return Err(bad("n must be positive"));
    }
    if b.is_zero() {
        return Err(bad("b must be nonzero"));
    }
    let bm = b.powi(-i64::from(m)).expect("nonzero");
    if root.powi(n.into()) != Some(bm) {
        return Err(bad("root is not b^(-m/n)"));
    }
    let w = mono::<S>(order, n, m).scale(k);
    let x = &mono::<S>(order, 1, 0).scale(root)
        * &w.binomial_power(&BigRational::new((-1).into(), n.into()))?;
    let diffeo = Diffeo::new(vec![x, mono::<S>(order, 0, 1).scale(b)])?;
    Ok(NormalForm {
        diffeo,
        forms: [polar_form(order, n, m)?, OneForm::log_dz(2, order, 1)],
    })
}

/// Parameters of a diffeomorphism acting linearly on
/// `ω₁ = d(1/(x^n y^m))`, `ω₂ = d(1/(x^p y^q))` by
/// `g^*ω₁ = a₁ω₁ + b₁ω₂`, `g^*ω₂ = a₂ω₁ + b₂ω₂`.
#[derive(Clone, Debug)]
pub struct PolarLaw<S> {
    pub nm: (u32, u32),
    pub pq: (u32, u32),
    /// `[[a₁, b₁], [a₂, b₂]]`
    pub law: Matrix<S>,
    pub k1: S,
    pub k2: S,
    /// `a₁^{−q/D} b₂^{m/D}` and `a₁^{p/D} b₂^{−n/D}`, chosen by the caller.
    pub roots: (S, S),
}

/// The generator realizing a [`PolarLaw`]:
/// `g = (x·U₂^{m/D} U₁^{−q/D}, y·U₁^{p/D} U₂^{−n/D})` with
/// `U₁ = a₁ + b₁x^{n−p}y^{m−q} + k₁x^n y^m` and
/// `U₂ = b₂ + a₂x^{p−n}y^{q−m} + k₂x^p y^q`.
pub fn pure_polar_generator<S: Scalar>(order: u32, law: &PolarLaw<S>) -> Result<NormalForm<S>> {
    let (n, m) = law.nm;
    let (p, q) = law.pq;
    let d = i64::from(n) * i64::from(q) - i64::from(p) * i64::from(m);
    if d == 0 {
        return Err(bad("D = nq - pm vanishes"));
    }
    if (law.law.rows(), law.law.cols()) != (2, 2) {
        return Err(bad("law must be a 2x2 matrix"));
    }
    let (a1, b1) = (law.law.get(0, 0), law.law.get(0, 1));
    let (a2, b2) = (law.law.get(1, 0), law.law.get(1, 1));
    let cross = |c: &S, dx: i64, dy: i64| -> Result<Jet<S>> {
        if c.is_zero() {
            return Ok(Jet::zero(2, order));
        }
        if dx < 0 || dy < 0 {
            return Err(bad(
                "off-diagonal law entry needs a non-negative exponent shift",
            ));
        }
        Ok(mono::<S>(order, dx as u32, dy as u32).scale(c))
    };
    let (n_, m_, p_, q_) = (i64::from(n), i64::from(m), i64::from(p), i64::from(q));
    let u1 = &(&Jet::constant(2, order, a1.clone()) + &cross(b1, n_ - p_, m_ - q_)?)
        + &mono::<S>(order, n, m).scale(&law.k1);
    let u2 = &(&Jet::constant(2, order, b2.clone()) + &cross(a2, p_ - n_, q_ - m_)?)
        + &mono::<S>(order, p, q).scale(&law.k2);
    let c1 = u1.constant_term();
    let c2 = u2.constant_term();
    // Split each supplied root over the two unit factors.
    let one = S::one();
    let powers = |u: &Jet<S>, c: &S, num: i64| -> Result<Jet<S>> {
        let scaled = u.scale(&c.inv().ok_or(Error::NotAUnit)?);
        unit_power(&scaled, num, d, &one)
    };
    let (ru, rv) = &law.roots;
    let want_u = c1.powi(-q_).and_then(|x| c2.powi(m_).map(|y| x * y));
    let want_v = c1.powi(p_).and_then(|x| c2.powi(-n_).map(|y| x * y));
    let root_ok = |r: &S, want: Option<S>| -> bool {
        let (e, r) = if d < 0 {
            (-d, r.inv())
        } else {
            (d, Some(r.clone()))
        };
        r.and_then(|r| r.powi(e)) == want && want.is_some()
    };
    if !root_ok(ru, want_u) || !root_ok(rv, want_v) {
        return Err(bad(
            "supplied roots do not match the constant terms of the law",
        ));
    }
    let u = (&powers(&u2, &c2, m_)? * &powers(&u1, &c1, -q_)?).scale(ru);
    let v = (&powers(&u1, &c1, p_)? * &powers(&u2, &c2, -n_)?).scale(rv);
    let diffeo = Diffeo::new(vec![
        &mono::<S>(order, 1, 0) * &u,
        &mono::<S>(order, 0, 1) * &v,
    ])?;
    Ok(NormalForm {
        diffeo,
        forms: [polar_form(order, n, m)?, polar_form(order, p, q)?],
    })
}

/// Whether every generator satisfies `g^*ω_j = a_j ω₁ + b_j ω₂` for its
/// declared matrix `[[a₁, b₁], [a₂, b₂]]`.
pub fn verify_linear_law<S: Scalar>(
    gens: &[Diffeo<S>],
    w1: &OneForm<S>,
    w2: &OneForm<S>,
    laws: &[Matrix<S>],
) -> Result<bool> {
    if gens.len() != laws.len() {
        return Err(Error::Arity {
            expected: gens.len(),
            got: laws.len(),
        });
    }
    if w1.nvars() != 2 || w2.nvars() != 2 {
        return Err(Error::WrongDimension(2));
    }
    for (g, a) in gens.iter().zip(laws) {
        if g.nvars() != 2 {
            return Err(Error::WrongDimension(2));
        }
        if (a.rows(), a.cols()) != (2, 2) {
            return Err(bad("law must be a 2x2 matrix"));
        }
        for (j, w) in [w1, w2].into_iter().enumerate() {
            let lhs = w.pullback(g)?;
            let rhs = w1.scale(a.get(j, 0)).add(&w2.scale(a.get(j, 1)))?;
            if !lhs.eq_verified(&rhs) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `α dx/x + β dy/y`
pub fn simple_pole_form<S: Scalar>(order: u32, alpha: &S, beta: &S) -> OneForm<S> {
    OneForm::log_dz(2, order, 0)
        .scale(alpha)
        .add(&OneForm::log_dz(2, order, 1).scale(beta))
        .expect("compatible forms")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::xy::{poly, x, y};
    use crate::scalar::Qi;
    use num_traits::{One, Zero};

    fn preserves(nf: &NormalForm<Qi>) -> bool {
        nf.forms
            .iter()
            .all(|w| w.pullback(&nf.diffeo).unwrap().eq_verified(w))
    }

    #[test]
    fn unit_power_roots() {
        let n = 5;
        let u = poly::<Qi>(n, &[(4, 0, 0), (4, 1, 0)]);
        let s = unit_power(&u, 1, 2, &Qi::int(2)).unwrap();
        assert_eq!(&s * &s, u);
        assert!(unit_power(&u, 1, 2, &Qi::int(3)).is_err());
        let s = unit_power(&u, 1, 2, &Qi::int(-2)).unwrap();
        assert_eq!(&s * &s, u);
    }

    #[test]
    fn family_b_trivial_and_basic() {
        let n = 6;
        let id = family_b(n, &Qi::one(), &Qi::one(), (2, 3), &Qi::zero()).unwrap();
        assert!(id.diffeo.is_identity());
        let g = family_b(n, &Qi::one(), &Qi::one(), (1, 1), &Qi::one()).unwrap();
        let expect = &y::<Qi>(n)
            * &poly::<Qi>(n, &[(1, 1, 1)])
                .binomial_power(&BigRational::from_integer((-1).into()))
                .unwrap();
        assert_eq!(g.diffeo.component(1), &expect);
        assert_eq!(g.diffeo.component(0), &x::<Qi>(n));
        assert!(preserves(&g));
        let g = family_b(n, &Qi::int(4), &Qi::ratio(1, 2), (1, 2), &Qi::int(3)).unwrap();
        assert!(preserves(&g));
        assert!(family_b(n, &Qi::int(4), &Qi::int(2), (1, 2), &Qi::int(3)).is_err());
    }

    #[test]
    fn families_preserve_and_commute() {
        let n = 8;
        let a1 = family_a(n, (1, 2), (2, 1), &Qi::int(2), &Qi::ratio(-1, 3)).unwrap();
        let a2 = family_a(n, (1, 2), (2, 1), &Qi::int(-5), &Qi::int(1)).unwrap();
        assert!(preserves(&a1) && preserves(&a2));
        assert!(a1.diffeo.commutator(&a2.diffeo).unwrap().is_identity());
        let c1 = family_c(n, &Qi::int(9), &Qi::ratio(1, 3), (2, 1), &Qi::int(1)).unwrap();
        let c2 = family_c(n, &Qi::one(), &Qi::one(), (2, 1), &Qi::int(7)).unwrap();
        assert!(preserves(&c1) && preserves(&c2));
        assert!(c1.diffeo.commutator(&c2.diffeo).unwrap().is_identity());
        assert!(family_a(n, (1, 2), (2, 4), &Qi::one(), &Qi::one()).is_err());
    }

    #[test]
    fn pure_polar_law() {
        let n = 7;
        let law = PolarLaw {
            nm: (2, 1),
            pq: (1, 1),
            law: Matrix::from_rows(vec![
                vec![Qi::one(), Qi::int(2)],
                vec![Qi::zero(), Qi::one()],
            ]),
            k1: Qi::int(1),
            k2: Qi::int(-2),
            roots: (Qi::one(), Qi::one()),
        };
        let g = pure_polar_generator(n, &law).unwrap();
        let [w1, w2] = &g.forms;
        assert!(verify_linear_law(&[g.diffeo.clone()], w1, w2, &[law.law.clone()]).unwrap());
        let id = Matrix::identity(2);
        assert!(!verify_linear_law(&[g.diffeo.clone()], w1, w2, &[id]).unwrap());
    }

    #[test]
    fn simple_poles_force_linear() {
        let n = 6;
        let w1 = simple_pole_form(n, &Qi::one(), &Qi::int(2));
        let w2 = simple_pole_form(n, &Qi::int(3), &Qi::ratio(1, 2));
        let lin = Diffeo::new(vec![
            x::<Qi>(n).scale(&Qi::int(3)),
            y::<Qi>(n).scale(&Qi::int(-1)),
        ])
        .unwrap();
        let id = Matrix::identity(2);
        assert!(verify_linear_law(&[lin], &w1, &w2, &[id.clone()]).unwrap());
        let g = Diffeo::new(vec![poly(n, &[(1, 1, 0), (1, 2, 0)]), y::<Qi>(n)]).unwrap();
        assert!(!verify_linear_law(&[g], &w1, &w2, &[id]).unwrap());
    }
}
