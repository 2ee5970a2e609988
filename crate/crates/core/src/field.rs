//! Formal vector fields, viewed as derivations of the jet ring.

use std::fmt;

use crate::error::{Error, Result};
use crate::jet::{default_var_names, needs_parens, Jet, MultiIndex};
use crate::linalg::Matrix;
use crate::scalar::{Qi, Scalar};

/// `Σ a_i(z) ∂/∂z_i`, stored as the coefficient jets `a_i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VectorField<S = Qi> {
    comps: Vec<Jet<S>>,
}

impl<S: Scalar> VectorField<S> {
    /// One component per variable, all of the same dimension and order.
    pub fn new(comps: Vec<Jet<S>>) -> Result<Self> {
        check_tuple(&comps)?;
        Ok(VectorField { comps })
    }

    pub fn zero(nvars: usize, order: u32) -> Self {
        VectorField {
            comps: vec![Jet::zero(nvars, order); nvars],
        }
    }

    /// `∂/∂z_var`
    pub fn coordinate(nvars: usize, order: u32, var: usize) -> Self {
        let mut comps = vec![Jet::zero(nvars, order); nvars];
        comps[var] = Jet::one(nvars, order);
        VectorField { comps }
    }

    /// The radial field `Σ z_i ∂/∂z_i`.
    pub fn radial(nvars: usize, order: u32) -> Self {
        VectorField {
            comps: (0..nvars).map(|i| Jet::var(nvars, order, i)).collect(),
        }
    }

    /// `f · R`
    pub fn scaled_radial(f: &Jet<S>) -> Self {
        Self::radial(f.nvars(), f.order()).mul_jet(f)
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

    pub fn into_components(self) -> Vec<Jet<S>> {
        self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Jet::is_zero)
    }

    /// Minimum vanishing order of the components; `None` for the zero field.
    /// A field lies in the `k`-th stratum when this is `k + 1`.
    pub fn order_of_vanishing(&self) -> Option<u32> {
        self.comps.iter().filter_map(Jet::order_of_vanishing).min()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        self.comps[0].check_compatible(&other.comps[0])
    }

    fn check_jet(&self, g: &Jet<S>) -> Result<()> {
        self.comps[0].check_compatible(g)
    }

    /// `X(g) = Σ X_i ∂g/∂z_i`
    pub fn apply(&self, g: &Jet<S>) -> Result<Jet<S>> {
        self.check_jet(g)?;
        let mut acc = Jet::zero(g.nvars(), g.order());
        for (i, xi) in self.comps.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let d = g.partial(i)?;
            if d.is_zero() {
                continue;
            }
            acc = &acc + &(xi * &d);
        }
        Ok(acc)
    }

    /// `[X, Y] = DX·Y − DY·X`, i.e. `[X, Y]_i = Y(X_i) − X(Y_i)`.
    ///
    /// This is the bracket of the diffeomorphism group: the commutator
    /// `exp(X)∘exp(Y)∘exp(−X)∘exp(−Y)` has leading part `[X, Y]`, and
    /// `[fR, gR] = (deg f − deg g)·f·g·R`. It is the negative of the
    /// commutator of `X` and `Y` as derivations.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(xi, yi)| Ok(&other.apply(xi)? - &self.apply(yi)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(VectorField { comps })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Jet<S>, &Jet<S>) -> Jet<S>) -> Self {
        VectorField {
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        VectorField {
            comps: self.comps.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// `f · X`; panics on a dimension or order mismatch.
    pub fn mul_jet(&self, f: &Jet<S>) -> Self {
        VectorField {
            comps: self.comps.iter().map(|a| a * f).collect(),
        }
    }

    pub fn homogeneous_part(&self, deg: u32) -> Self {
        VectorField {
            comps: self.comps.iter().map(|a| a.homogeneous_part(deg)).collect(),
        }
    }

    pub fn truncated(&self, deg: u32) -> Self {
        VectorField {
            comps: self.comps.iter().map(|a| a.truncated(deg)).collect(),
        }
    }

    pub fn with_order(&self, order: u32) -> Self {
        VectorField {
            comps: self.comps.iter().map(|a| a.with_order(order)).collect(),
        }
    }

    /// `A[i][j]` is the coefficient of `z_j` in `X_i`.
    pub fn linear_part(&self) -> Matrix<S> {
        Matrix::from_rows(self.comps.iter().map(Jet::linear_coeffs).collect())
    }

    /// Whether `exp` is defined: no constant term and a nilpotent linear
    /// part, so the derivation is nilpotent on the jet space.
    pub fn check_exp_defined(&self) -> Result<()> {
        if self.comps.iter().any(|c| !c.constant_term().is_zero()) {
            return Err(Error::Precondition(
                "field does not vanish at the origin".into(),
            ));
        }
        if !self.linear_part().is_nilpotent() {
            return Err(Error::NonNilpotent);
        }
        Ok(())
    }

    /// `exp(t·X)(z_i) = Σ_j t^j/j! X^j(z_i)`, truncated at the jet order.
    pub fn exp_t_components(&self, t: &S) -> Result<Vec<Jet<S>>> {
        self.check_exp_defined()?;
        let n = self.nvars();
        let order = self.order();
        // The derivation is nilpotent on a space of this dimension.
        let cap = MultiIndex::all_in_degrees(n, 1, order).len() + 1;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut term = Jet::var(n, order, i);
            let mut acc = term.clone();
            let mut j = 0;
            loop {
                j += 1;
                term = self.apply(&term)?;
                if term.is_zero() {
                    break;
                }
                if j > cap {
                    return Err(Error::Inconsistent("derivation failed to terminate".into()));
                }
                term = term.scale(&(t.clone() / S::from_i64(j as i64)));
                acc = &acc + &term;
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Renders as `x*y d/dx - y^2 d/dy` using the given variable names.
    pub fn display_with(&self, names: &[String]) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = format!("d/d{}", names[i]);
            let s = c.display_with(names);
            let term = if c.len() == 1 && !needs_parens(&s) {
                if s == "1" {
                    d
                } else if s == "-1" {
                    format!("-{d}")
                } else {
                    format!("{s} {d}")
                }
            } else {
                format!("({s}) {d}")
            };
            parts.push(term);
        }
        join_signed(&parts)
    }
}

/// Joins rendered summands with ` + ` / ` - `; empty input renders as `0`.
pub(crate) fn join_signed(parts: &[String]) -> String {
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        if let Some(rest) = p.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(p);
        }
    }
    out
}

pub(crate) fn check_tuple<S: Scalar>(comps: &[Jet<S>]) -> Result<()> {
    let Some(first) = comps.first() else {
        return Err(Error::Arity {
            expected: 1,
            got: 0,
        });
    };
    if comps.len() != first.nvars() {
        return Err(Error::Arity {
            expected: first.nvars(),
            got: comps.len(),
        });
    }
    for c in comps {
        first.check_compatible(c)?;
    }
    Ok(())
}

impl<S: Scalar> fmt::Display for VectorField<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&default_var_names(self.nvars())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::xy::{poly, x, y};
    use num_traits::One;

    type F = VectorField<Qi>;

    fn field(n: u32, a: &[(i64, u32, u32)], b: &[(i64, u32, u32)]) -> F {
        F::new(vec![poly(n, a), poly(n, b)]).unwrap()
    }

    #[test]
    fn derivation_action() {
        let n = 5;
        let x2_dy = field(n, &[], &[(1, 2, 0)]);
        assert_eq!(x2_dy.apply(&y(n)).unwrap(), poly(n, &[(1, 2, 0)]));
        assert!(x2_dy.apply(&Jet::one(2, n)).unwrap().is_zero());
        // Euler identity for a homogeneous quadratic.
        let f: Jet<Qi> = poly(n, &[(1, 2, 0), (3, 1, 1)]);
        let r = F::radial(2, n);
        assert_eq!(r.apply(&f).unwrap(), f.scale(&Qi::int(2)));
    }

    #[test]
    fn brackets_of_commuting_pairs() {
        let n = 8;
        let x_: F = field(n, &[(1, 1, 1)], &[(-1, 0, 2)]);
        assert!(x_.bracket(&x_).unwrap().is_zero());
        // a = 5
        let y_ = field(n, &[(5, 2, 2)], &[(-5, 1, 3)]);
        assert!(x_.bracket(&y_).unwrap().is_zero());
    }

    #[test]
    fn radial_bracket_formula() {
        let n = 7;
        let f = x::<Qi>(n);
        let g: Jet<Qi> = poly(n, &[(1, 0, 2)]);
        let lhs = F::scaled_radial(&f).bracket(&F::scaled_radial(&g)).unwrap();
        let rhs = F::scaled_radial(&(&f * &g)).scale(&Qi::int(-1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn exp_of_simple_fields() {
        let n = 5;
        let x2_dy = field(n, &[], &[(1, 2, 0)]);
        let e = x2_dy.exp_t_components(&Qi::one()).unwrap();
        assert_eq!(e, vec![x(n), poly(n, &[(1, 0, 1), (1, 2, 0)])]);
        let z = F::zero(2, n).exp_t_components(&Qi::one()).unwrap();
        assert_eq!(z, vec![x(n), y(n)]);
        let lin = field(n, &[(1, 1, 0)], &[]);
        assert_eq!(lin.exp_t_components(&Qi::one()), Err(Error::NonNilpotent));
        // Nilpotent linear part y d/dx: exp is the shear (x + y, y).
        let shear = field(n, &[(1, 0, 1)], &[]);
        let e = shear.exp_t_components(&Qi::one()).unwrap();
        assert_eq!(e[0], poly(n, &[(1, 1, 0), (1, 0, 1)]));
    }

    #[test]
    fn rendering() {
        let n = 5;
        let f = field(n, &[(1, 1, 1)], &[(-1, 0, 2)]);
        assert_eq!(f.to_string(), "x*y d/dx - y^2 d/dy");
        let g = field(n, &[(1, 2, 0), (3, 1, 1)], &[(1, 0, 0)]);
        assert_eq!(g.to_string(), "(x^2 + 3*x*y) d/dx + d/dy");
        assert_eq!(F::zero(2, n).to_string(), "0");
    }
}
