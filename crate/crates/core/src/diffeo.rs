//! Formal diffeomorphisms fixing the origin, and the exp/log correspondence
//! with vector fields.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{check_tuple, VectorField};
use crate::jet::{default_var_names, Jet, MultiIndex};
use crate::linalg::Matrix;
use crate::scalar::{Qi, Scalar};

/// An `n`-tuple of jets with zero constant terms and invertible linear part.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Diffeo<S = Qi> {
    comps: Vec<Jet<S>>,
}

/// How far a diffeomorphism is from the identity.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum TangencyOrder {
    /// The linear part is not the identity.
    NotTangent,
    /// `f = z + f_{k+1} + …` with `f_{k+1} ≠ 0`.
    Order(u32),
    /// Equal to the identity at the jet order.
    Identity,
}

impl fmt::Display for TangencyOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TangencyOrder::NotTangent => f.write_str("not tangent to identity"),
            TangencyOrder::Order(k) => write!(f, "{k}"),
            TangencyOrder::Identity => f.write_str("identity"),
        }
    }
}

fn apply_matrix<S: Scalar>(m: &Matrix<S>, v: &[Jet<S>]) -> Vec<Jet<S>> {
    (0..m.rows())
        .map(|i| {
            let mut acc = Jet::zero(v[0].nvars(), v[0].order());
            for (j, vj) in v.iter().enumerate() {
                let c = m.get(i, j);
                if !c.is_zero() {
                    acc = &acc + &vj.scale(c);
                }
            }
            acc
        })
        .collect()
}

fn identity_comps<S: Scalar>(nvars: usize, order: u32) -> Vec<Jet<S>> {
    (0..nvars).map(|i| Jet::var(nvars, order, i)).collect()
}

impl<S: Scalar> Diffeo<S> {
    pub fn new(comps: Vec<Jet<S>>) -> Result<Self> {
        check_tuple(&comps)?;
        if comps.iter().any(|c| !c.constant_term().is_zero()) {
            return Err(Error::NonzeroConstantTerm);
        }
        let d = Diffeo { comps };
        if d.linear_part().determinant().is_zero() {
            return Err(Error::SingularLinearPart);
        }
        Ok(d)
    }

    pub fn identity(nvars: usize, order: u32) -> Self {
        Diffeo {
            comps: identity_comps(nvars, order),
        }
    }

    /// The linear map `z ↦ M z`.
    pub fn linear(m: &Matrix<S>, order: u32) -> Result<Self> {
        let n = m.rows();
        Self::new(apply_matrix(m, &identity_comps(n, order)))
    }

    /// `λ · Id`
    pub fn homothety(nvars: usize, order: u32, lambda: &S) -> Result<Self> {
        Self::new(
            identity_comps(nvars, order)
                .iter()
                .map(|c| c.scale(lambda))
                .collect(),
        )
    }

    pub fn nvars(&self) -> usize {
        self.comps.len()
    }

    pub fn order(&self) -> u32 {
        self.comps[0].order()
    }

    pub fn components(&self) -> &[Jet<S>] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &Jet<S> {
        &self.comps[i]
    }

    /// The Jacobian at the origin.
    pub fn linear_part(&self) -> Matrix<S> {
        Matrix::from_rows(self.comps.iter().map(Jet::linear_coeffs).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.comps
            .iter()
            .enumerate()
            .all(|(i, c)| *c == Jet::var(c.nvars(), c.order(), i))
    }

    /// `f − Id`, componentwise.
    pub fn displacement(&self) -> Vec<Jet<S>> {
        self.comps
            .iter()
            .enumerate()
            .map(|(i, c)| c - &Jet::var(c.nvars(), c.order(), i))
            .collect()
    }

    /// The homogeneous degree-`deg` part of each component.
    pub fn homogeneous_part(&self, deg: u32) -> Vec<Jet<S>> {
        self.comps.iter().map(|c| c.homogeneous_part(deg)).collect()
    }

    pub fn tangency_order(&self) -> TangencyOrder {
        if !self.linear_part().is_identity() {
            return TangencyOrder::NotTangent;
        }
        match self
            .displacement()
            .iter()
            .filter_map(Jet::order_of_vanishing)
            .min()
        {
            None => TangencyOrder::Identity,
            Some(d) => TangencyOrder::Order(d - 1),
        }
    }

    pub fn is_tangent_to_identity(&self) -> bool {
        self.tangency_order() != TangencyOrder::NotTangent
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        self.comps[0].check_compatible(&other.comps[0])
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Diffeo {
            comps: Jet::compose_all(&self.comps, &other.comps),
        })
    }

    /// `g ∘ self` applied to a single jet `g`.
    pub fn pull_jet(&self, g: &Jet<S>) -> Result<Jet<S>> {
        g.compose(&self.comps)
    }

    /// Compositional inverse by the fixed point `g = A⁻¹(z − H(g))`, where
    /// `A` is the linear part and `H` the nonlinear remainder. Each pass fixes
    /// one more degree.
    pub fn inverse(&self) -> Self {
        let n = self.nvars();
        let order = self.order();
        let a = self.linear_part();
        let a_inv = a
            .inverse()
            .expect("linear part is invertible by construction");
        let lin = apply_matrix(&a, &identity_comps(n, order));
        let h: Vec<Jet<S>> = self.comps.iter().zip(&lin).map(|(c, l)| c - l).collect();
        let z = identity_comps::<S>(n, order);
        let mut g = apply_matrix(&a_inv, &z);
        if h.iter().all(Jet::is_zero) {
            return Diffeo { comps: g };
        }
        // h starts in degree 2, so degree d of h∘g only sees g through d − 1.
        for d in 2..=order {
            let hg = Jet::compose_all(&h, &g);
            let rhs: Vec<Jet<S>> = z
                .iter()
                .zip(&hg)
                .map(|(zi, hi)| (zi - hi).truncated(d))
                .collect();
            g = apply_matrix(&a_inv, &rhs);
        }
        Diffeo { comps: g }
    }

    /// `self^e`, with negative exponents through the inverse.
    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity(self.nvars(), self.order());
        let mut b = base;
        let mut e = e.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&b).expect("same shape");
            }
            e >>= 1;
            if e > 0 {
                b = b.compose(&b).expect("same shape");
            }
        }
        acc
    }

    /// `f ∘ g ∘ f⁻¹ ∘ g⁻¹`
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let fg = self.compose(other)?;
        let inv = other.compose(self)?.inverse();
        fg.compose(&inv)
    }

    /// Infinitesimal generator: the field `X` with `exp(X) = self`.
    ///
    /// Computed as the logarithm of the composition operator `g ↦ g∘f`,
    /// which is unipotent on the jet space: with `h_0 = z_i` and
    /// `h_j = h_{j−1}∘f − h_{j−1}`, `X(z_i) = Σ (−1)^{j+1} h_j / j`.
    pub fn log(&self) -> Result<VectorField<S>> {
        let n = self.nvars();
        let order = self.order();
        let a = self.linear_part();
        if !a.sub(&Matrix::identity(n)).is_nilpotent() {
            return Err(Error::NotUnipotent);
        }
        let cap = MultiIndex::all_in_degrees(n, 1, order).len() + 1;
        let mut comps = Vec::with_capacity(n);
        for i in 0..n {
            let mut h = Jet::var(n, order, i);
            let mut acc = Jet::zero(n, order);
            let mut j = 0;
            loop {
                j += 1;
                h = &h.compose_unchecked(&self.comps) - &h;
                if h.is_zero() {
                    break;
                }
                if j > cap {
                    return Err(Error::Inconsistent(
                        "composition operator is not unipotent".into(),
                    ));
                }
                let sign = if j % 2 == 1 { 1 } else { -1 };
                acc = &acc
                    + &h.scale(&S::from_rational(&num_rational::BigRational::new(
                        sign.into(),
                        (j as i64).into(),
                    )));
            }
            comps.push(acc);
        }
        VectorField::new(comps)
    }

    /// `(Dg · X) ∘ g⁻¹`
    pub fn pushforward(&self, x: &VectorField<S>) -> Result<VectorField<S>> {
        self.comps[0].check_compatible(x.component(0))?;
        let inv = self.inverse();
        let comps = self
            .comps
            .iter()
            .map(|gi| Ok(x.apply(gi)?.compose_unchecked(&inv.comps)))
            .collect::<Result<Vec<_>>>()?;
        VectorField::new(comps)
    }

    /// The scalar `c` with `g_* X = c X`, if it exists.
    pub fn projective_factor(&self, x: &VectorField<S>) -> Result<Option<S>> {
        if x.is_zero() {
            return Err(Error::ZeroField);
        }
        let y = self.pushforward(x)?;
        Ok(scalar_ratio(x, &y))
    }

    /// The time `r` with `self = exp(r X)`, if it exists.
    pub fn flow_membership(&self, x: &VectorField<S>) -> Result<Option<S>> {
        if !self.is_tangent_to_identity() {
            return Err(Error::Precondition(
                "diffeomorphism is not tangent to the identity".into(),
            ));
        }
        if x.order_of_vanishing().map_or(true, |d| d < 2) {
            return Err(Error::Precondition(
                "field must be nonzero with vanishing order at least 2".into(),
            ));
        }
        if self.is_identity() {
            return Ok(Some(S::zero()));
        }
        let disp = VectorField::new(self.displacement())?;
        let (i, idx, xc) = lowest_coefficient(x).expect("nonzero field");
        let r = disp.component(i).coeff(&idx) / xc;
        if r.is_zero() {
            return Ok(None);
        }
        let candidate = x.exp_t(&r)?;
        Ok((candidate == *self).then_some(r))
    }

    pub fn display_with(&self, names: &[String]) -> String {
        let parts: Vec<String> = self.comps.iter().map(|c| c.display_with(names)).collect();
        format!("({})", parts.join(", "))
    }
}

/// First nonzero coefficient of lowest degree: `(component, monomial, value)`.
fn lowest_coefficient<S: Scalar>(x: &VectorField<S>) -> Option<(usize, MultiIndex, S)> {
    let mut best: Option<(usize, MultiIndex, S)> = None;
    for (i, c) in x.components().iter().enumerate() {
        if let Some((k, v)) = c.terms().next() {
            if best
                .as_ref()
                .map_or(true, |(_, bk, _)| k.degree() < bk.degree())
            {
                best = Some((i, k.clone(), v.clone()));
            }
        }
    }
    best
}

/// The scalar `c` with `y = c x`, if one exists; `x` must be nonzero.
pub fn scalar_ratio<S: Scalar>(x: &VectorField<S>, y: &VectorField<S>) -> Option<S> {
    let (i, idx, xc) = lowest_coefficient(x)?;
    let c = y.component(i).coeff(&idx) / xc;
    (x.scale(&c) == *y).then_some(c)
}

impl<S: Scalar> VectorField<S> {
    pub fn exp(&self) -> Result<Diffeo<S>> {
        self.exp_t(&S::one())
    }

    /// The time-`t` flow `exp(t X)`.
    pub fn exp_t(&self, t: &S) -> Result<Diffeo<S>> {
        Diffeo::new(self.exp_t_components(t)?)
    }
}

impl<S: Scalar> fmt::Display for Diffeo<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&default_var_names(self.nvars())))
    }
}
