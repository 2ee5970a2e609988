//! Truncated multivariate power series.
//!
//! A [`Jet`] is a power series in `nvars` variables with every monomial of
//! total degree above `order` discarded. Coefficients are stored sparsely and
//! iterate in graded order (degree first; inside a degree, higher powers of
//! earlier variables first, so `x^2 < x*y < y^2`).
//!
//! Mixing jets of different dimension or order is always an error. The
//! operator impls (`+`, `-`, `*`) panic on mismatch; the `try_*` methods
//! return [`Error`] instead.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::scalar::{binomial, Qi, Scalar};

/// Exponent vector of a monomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(SmallVec<[u32; 4]>);

impl MultiIndex {
    pub fn new(exps: impl IntoIterator<Item = u32>) -> Self {
        MultiIndex(exps.into_iter().collect())
    }

    pub fn zero(nvars: usize) -> Self {
        MultiIndex(SmallVec::from_elem(0, nvars))
    }

    /// The exponent of the single variable `z_var`.
    pub fn unit(nvars: usize, var: usize) -> Self {
        let mut m = Self::zero(nvars);
        m.0[var] = 1;
        m
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, var: usize) -> u32 {
        self.0[var]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, if every exponent stays non-negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        let mut out = SmallVec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(MultiIndex(out))
    }

    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Every multi-index in `nvars` variables of total degree exactly `deg`,
    /// in ascending order.
    pub fn all_of_degree(nvars: usize, deg: u32) -> Vec<MultiIndex> {
        fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if cur.len() + 1 == n {
                cur.push(left);
                out.push(MultiIndex::new(cur.iter().copied()));
                cur.pop();
                return;
            }
            for e in (0..=left).rev() {
                cur.push(e);
                rec(n, left - e, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if deg == 0 {
                out.push(MultiIndex::zero(0));
            }
            return out;
        }
        rec(nvars, deg, &mut Vec::with_capacity(nvars), &mut out);
        out
    }

    /// Multi-indices of total degree in `lo..=hi`, ascending.
    pub fn all_in_degrees(nvars: usize, lo: u32, hi: u32) -> Vec<MultiIndex> {
        (lo..=hi)
            .flat_map(|d| Self::all_of_degree(nvars, d))
            .collect()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Variable names used when nothing else is specified: `x, y` in two
/// variables, `z1, …, zn` otherwise.
pub fn default_var_names(nvars: usize) -> Vec<String> {
    if nvars == 2 {
        vec!["x".into(), "y".into()]
    } else {
        (1..=nvars).map(|i| format!("z{i}")).collect()
    }
}

/// `powers[i][e] = subst_i^e` for the exponents a set of jets needs.
struct SubstPowers<S> {
    nvars: usize,
    order: u32,
    powers: Vec<Vec<Jet<S>>>,
}

impl<S: Scalar> SubstPowers<S> {
    fn new(subst: &[Jet<S>], fs: &[Jet<S>]) -> Self {
        let (m, order) = (subst[0].nvars, subst[0].order);
        let mut max_exp = vec![0u32; subst.len()];
        for f in fs {
            for k in f.terms.keys() {
                for (i, e) in k.exps().iter().enumerate() {
                    max_exp[i] = max_exp[i].max(*e);
                }
            }
        }
        let powers = subst
            .iter()
            .zip(&max_exp)
            .map(|(s, &me)| {
                let mut v = vec![Jet::one(m, order)];
                for e in 1..=me {
                    let next = if e > order {
                        Jet::zero(m, order)
                    } else {
                        v[e as usize - 1].mul_unchecked(s)
                    };
                    v.push(next);
                }
                v
            })
            .collect();
        SubstPowers {
            nvars: m,
            order,
            powers,
        }
    }
}

/// A power series truncated above total degree `order`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Jet<S = Qi> {
    nvars: usize,
    order: u32,
    terms: BTreeMap<MultiIndex, S>,
}

impl<S: Scalar> Jet<S> {
    pub fn zero(nvars: usize, order: u32) -> Self {
        Jet {
            nvars,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, order: u32, c: S) -> Self {
        let mut j = Self::zero(nvars, order);
        if !c.is_zero() {
            j.terms.insert(MultiIndex::zero(nvars), c);
        }
        j
    }

    pub fn one(nvars: usize, order: u32) -> Self {
        Self::constant(nvars, order, S::one())
    }

    /// The coordinate function `z_var`.
    pub fn var(nvars: usize, order: u32, var: usize) -> Self {
        assert!(var < nvars, "variable index out of range");
        Self::monomial(nvars, order, MultiIndex::unit(nvars, var), S::one())
    }

    /// `c·z^idx`, or zero if the degree exceeds `order`.
    pub fn monomial(nvars: usize, order: u32, idx: MultiIndex, c: S) -> Self {
        assert_eq!(idx.nvars(), nvars, "multi-index arity");
        let mut j = Self::zero(nvars, order);
        if idx.degree() <= order && !c.is_zero() {
            j.terms.insert(idx, c);
        }
        j
    }

    /// Builds a jet from terms; repeated indices are summed and terms above
    /// `order` dropped.
    pub fn from_terms(
        nvars: usize,
        order: u32,
        terms: impl IntoIterator<Item = (MultiIndex, S)>,
    ) -> Self {
        let mut j = Self::zero(nvars, order);
        for (idx, c) in terms {
            assert_eq!(idx.nvars(), nvars, "multi-index arity");
            if idx.degree() <= order {
                j.add_term(idx, &c);
            }
        }
        j
    }

    fn add_term(&mut self, idx: MultiIndex, c: &S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(idx) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Nonzero terms in graded order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &S)> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, idx: &MultiIndex) -> S {
        self.terms.get(idx).cloned().unwrap_or_else(S::zero)
    }

    pub fn constant_term(&self) -> S {
        self.coeff(&MultiIndex::zero(self.nvars))
    }

    /// Largest degree carrying a nonzero coefficient.
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|k| k.degree())
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), &-v.clone());
        }
        Ok(out)
    }

    /// Cauchy product truncated at `order`.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let mut acc = BTreeMap::new();
        self.mul_into(other, &mut acc);
        acc.retain(|_, v: &mut S| !v.is_zero());
        Jet {
            nvars: self.nvars,
            order: self.order,
            terms: acc,
        }
    }

    /// Adds the truncated product into `acc`.
    fn mul_into(&self, other: &Self, acc: &mut BTreeMap<MultiIndex, S>) {
        let n = self.order;
        let rhs: Vec<(&MultiIndex, &S, u32)> = other
            .terms
            .iter()
            .map(|(k, v)| (k, v, k.degree()))
            .collect();
        for (ka, ca) in &self.terms {
            let da = ka.degree();
            if da > n {
                break;
            }
            for (kb, cb, db) in &rhs {
                if da + db > n {
                    break;
                }
                acc.entry(ka.add(kb))
                    .or_insert_with(S::zero)
                    .mul_add_assign(ca, cb);
            }
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars, self.order);
        }
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| (k.clone(), v.mul_ref(c)))
            .collect();
        Jet {
            nvars: self.nvars,
            order: self.order,
            terms,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars, self.order);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Multiply by the monomial `z^idx`.
    pub fn mul_monomial(&self, idx: &MultiIndex) -> Self {
        Self::from_terms(
            self.nvars,
            self.order,
            self.terms.iter().map(|(k, v)| (k.add(idx), v.clone())),
        )
    }

    /// Exact division by `z^idx`, if every term is divisible.
    pub fn div_monomial(&self, idx: &MultiIndex) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (k, v) in &self.terms {
            terms.insert(k.checked_sub(idx)?, v.clone());
        }
        Some(Jet {
            nvars: self.nvars,
            order: self.order,
            terms,
        })
    }

    /// The homogeneous component of degree `deg`.
    pub fn homogeneous_part(&self, deg: u32) -> Self {
        Jet {
            nvars: self.nvars,
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.degree() == deg)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Drops every term of degree above `deg`, keeping the jet order.
    pub fn truncated(&self, deg: u32) -> Self {
        Jet {
            nvars: self.nvars,
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.degree() <= deg)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Reinterprets the jet at another order. Lowering the order truncates;
    /// raising it treats the stored terms as an exact polynomial.
    pub fn with_order(&self, order: u32) -> Self {
        Jet {
            nvars: self.nvars,
            order,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.degree() <= order)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Substitutes `subst[i]` for `z_i`. Every substituted jet must have zero
    /// constant term; the result lives in the substituted jets' ring.
    pub fn compose(&self, subst: &[Jet<S>]) -> Result<Self> {
        if subst.len() != self.nvars {
            return Err(Error::Arity {
                expected: self.nvars,
                got: subst.len(),
            });
        }
        let Some(first) = subst.first() else {
            return Ok(self.clone());
        };
        for s in subst {
            first.check_compatible(s)?;
            if !s.constant_term().is_zero() {
                return Err(Error::NonzeroConstantTerm);
            }
        }
        if first.order != self.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: first.order,
            });
        }
        Ok(self.compose_unchecked(subst))
    }

    pub(crate) fn compose_unchecked(&self, subst: &[Jet<S>]) -> Self {
        let pw = SubstPowers::new(subst, std::slice::from_ref(self));
        self.compose_powers(&pw)
    }

    /// Composes every jet of `fs` with the same substitution, sharing the
    /// powers of the substituted jets.
    pub(crate) fn compose_all(fs: &[Jet<S>], subst: &[Jet<S>]) -> Vec<Self> {
        let pw = SubstPowers::new(subst, fs);
        fs.iter().map(|f| f.compose_powers(&pw)).collect()
    }

    fn compose_powers(&self, pw: &SubstPowers<S>) -> Self {
        let (m, order) = (pw.nvars, pw.order);
        let last = self.nvars - 1;
        // Group by the exponents of all but the last variable; each group is
        // a combination of powers of the last substituted jet.
        let mut groups: BTreeMap<&[u32], BTreeMap<MultiIndex, S>> = BTreeMap::new();
        for (k, c) in &self.terms {
            if k.degree() > order {
                continue;
            }
            let e = k.exps();
            let acc = groups.entry(&e[..last]).or_default();
            for (km, cm) in &pw.powers[last][e[last] as usize].terms {
                acc.entry(km.clone())
                    .or_insert_with(S::zero)
                    .mul_add_assign(c, cm);
            }
        }
        let mut out: BTreeMap<MultiIndex, S> = BTreeMap::new();
        for (prefix, combo) in groups {
            let combo = Jet {
                nvars: m,
                order,
                terms: combo,
            };
            let mut mono: Option<Jet<S>> = None;
            for (i, &e) in prefix.iter().enumerate() {
                if e > 0 {
                    let p = &pw.powers[i][e as usize];
                    mono = Some(match mono {
                        None => p.clone(),
                        Some(acc) => acc.mul_unchecked(p),
                    });
                }
            }
            match mono {
                None => {
                    for (k, c) in combo.terms {
                        out.entry(k).or_insert_with(S::zero).add_assign_ref(&c);
                    }
                }
                Some(mono) => mono.mul_into(&combo, &mut out),
            }
        }
        out.retain(|_, v| !v.is_zero());
        Jet {
            nvars: m,
            order,
            terms: out,
        }
    }

    /// Formal partial derivative. The result keeps the order of `self`; its
    /// degree-`order` component is always zero because that information is
    /// not available.
    pub fn partial(&self, var: usize) -> Result<Self> {
        if var >= self.nvars {
            return Err(Error::VariableIndex {
                index: var,
                nvars: self.nvars,
            });
        }
        let mut terms = BTreeMap::new();
        for (k, v) in &self.terms {
            let e = k.get(var);
            if e == 0 {
                continue;
            }
            let mut nk = k.clone();
            nk.0[var] -= 1;
            terms.insert(nk, v.mul_ref(&S::from_i64(e as i64)));
        }
        Ok(Jet {
            nvars: self.nvars,
            order: self.order,
            terms,
        })
    }

    /// `z_var · ∂/∂z_var`, which preserves degrees and loses no precision.
    pub fn euler(&self, var: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(k, _)| k.get(var) > 0)
            .map(|(k, v)| (k.clone(), v.mul_ref(&S::from_i64(k.get(var) as i64))))
            .collect();
        Jet {
            nvars: self.nvars,
            order: self.order,
            terms,
        }
    }

    /// `(1 + u)^alpha` via the generalized binomial series; `u` must vanish
    /// at the origin.
    pub fn binomial_power(&self, alpha: &BigRational) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut acc = Self::one(self.nvars, self.order);
        let mut upow = Self::one(self.nvars, self.order);
        for j in 1..=self.order {
            upow = upow.mul_unchecked(self);
            if upow.is_zero() {
                break;
            }
            let c = S::from_rational(&binomial(alpha, j));
            acc = acc.try_add(&upow.scale(&c))?;
        }
        Ok(acc)
    }

    /// Multiplicative inverse of a unit.
    pub fn invert_unit(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let c0_inv = c0.inv().ok_or(Error::NotAUnit)?;
        // self = c0 (1 + w), 1/(1 + w) = Σ (-w)^j
        let mut w = self.scale(&c0_inv);
        w.terms.remove(&MultiIndex::zero(self.nvars));
        let neg_w = -w;
        let mut acc = Self::one(self.nvars, self.order);
        let mut p = Self::one(self.nvars, self.order);
        for _ in 1..=self.order {
            p = p.mul_unchecked(&neg_w);
            if p.is_zero() {
                break;
            }
            acc = acc.try_add(&p)?;
        }
        Ok(acc.scale(&c0_inv))
    }

    /// Least degree with a nonzero coefficient; `None` stands for +∞ (the
    /// zero jet).
    pub fn order_of_vanishing(&self) -> Option<u32> {
        self.terms.keys().next().map(|k| k.degree())
    }

    /// Coefficients of the degree-one part, indexed by variable.
    pub fn linear_coeffs(&self) -> Vec<S> {
        (0..self.nvars)
            .map(|i| self.coeff(&MultiIndex::unit(self.nvars, i)))
            .collect()
    }

    /// Converts every coefficient into another scalar type.
    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Jet<T> {
        Jet::from_terms(
            self.nvars,
            self.order,
            self.terms.iter().map(|(k, v)| (k.clone(), f(v))),
        )
    }

    /// Renders the jet with the given variable names.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let t = render_term(c, k, names);
            if i == 0 {
                out.push_str(&t);
            } else if let Some(rest) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&t);
            }
        }
        out
    }
}

/// Renders `z^idx` as `x^2*y`, or `""` for the constant monomial.
pub fn render_monomial(idx: &MultiIndex, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in idx.exps().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(format!("{}^{}", names[i], e)),
        }
    }
    parts.join("*")
}

/// `true` when a rendered scalar needs parentheses to be used as a factor.
pub fn needs_parens(rendered: &str) -> bool {
    rendered
        .char_indices()
        .any(|(i, ch)| i > 0 && (ch == '+' || ch == '-'))
}

fn render_term<S: Scalar>(c: &S, idx: &MultiIndex, names: &[String]) -> String {
    let cs = c.to_string();
    let cs = if needs_parens(&cs) {
        format!("({cs})")
    } else {
        cs
    };
    if idx.is_zero() {
        return cs;
    }
    let m = render_monomial(idx, names);
    if c.is_one() {
        m
    } else if (-c.clone()).is_one() {
        format!("-{m}")
    } else {
        format!("{cs}*{m}")
    }
}

impl<S: Scalar> fmt::Display for Jet<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&default_var_names(self.nvars)))
    }
}

impl<S: Scalar> Add for &Jet<S> {
    type Output = Jet<S>;
    fn add(self, rhs: &Jet<S>) -> Jet<S> {
        self.try_add(rhs).expect("jet addition")
    }
}

impl<S: Scalar> Sub for &Jet<S> {
    type Output = Jet<S>;
    fn sub(self, rhs: &Jet<S>) -> Jet<S> {
        self.try_sub(rhs).expect("jet subtraction")
    }
}

impl<S: Scalar> Mul for &Jet<S> {
    type Output = Jet<S>;
    fn mul(self, rhs: &Jet<S>) -> Jet<S> {
        self.try_mul(rhs).expect("jet multiplication")
    }
}

impl<S: Scalar> Add for Jet<S> {
    type Output = Jet<S>;
    fn add(self, rhs: Jet<S>) -> Jet<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Sub for Jet<S> {
    type Output = Jet<S>;
    fn sub(self, rhs: Jet<S>) -> Jet<S> {
        &self - &rhs
    }
}

impl<S: Scalar> Mul for Jet<S> {
    type Output = Jet<S>;
    fn mul(self, rhs: Jet<S>) -> Jet<S> {
        &self * &rhs
    }
}

impl<S: Scalar> Neg for Jet<S> {
    type Output = Jet<S>;
    fn neg(mut self) -> Jet<S> {
        for v in self.terms.values_mut() {
            *v = -v.clone();
        }
        self
    }
}

impl<S: Scalar> Neg for &Jet<S> {
    type Output = Jet<S>;
    fn neg(self) -> Jet<S> {
        -self.clone()
    }
}

/// Shorthand constructors for two-variable jets, used heavily in tests.
pub mod xy {
    use super::*;

    pub fn x<S: Scalar>(order: u32) -> Jet<S> {
        Jet::var(2, order, 0)
    }

    pub fn y<S: Scalar>(order: u32) -> Jet<S> {
        Jet::var(2, order, 1)
    }

    /// `c·x^a·y^b`
    pub fn mono<S: Scalar>(order: u32, c: S, a: u32, b: u32) -> Jet<S> {
        Jet::monomial(2, order, MultiIndex::new([a, b]), c)
    }

    /// Builds `Σ c·x^a·y^b` from integer triples `(c, a, b)`.
    pub fn poly<S: Scalar>(order: u32, terms: &[(i64, u32, u32)]) -> Jet<S> {
        Jet::from_terms(
            2,
            order,
            terms
                .iter()
                .map(|&(c, a, b)| (MultiIndex::new([a, b]), S::from_i64(c))),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::xy::*;
    use super::*;
    use num_traits::One;

    type J = Jet<Qi>;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn graded_order() {
        let a = MultiIndex::new([2, 0]);
        let b = MultiIndex::new([1, 1]);
        let c = MultiIndex::new([0, 2]);
        let d = MultiIndex::new([3, 0]);
        assert!(a < b && b < c && c < d);
        assert_eq!(
            MultiIndex::all_of_degree(2, 2),
            vec![a.clone(), b.clone(), c.clone()]
        );
        assert_eq!(MultiIndex::all_in_degrees(3, 1, 3).len(), 3 + 6 + 10);
    }

    #[test]
    fn additive_inverse_and_sum() {
        let n = 4;
        let x: J = x(n);
        assert!((&x + &(-x.clone())).is_zero());
        let one = J::one(2, n);
        let lhs = &(&one + &x) + &poly(n, &[(1, 2, 0)]);
        assert_eq!(lhs, poly(n, &[(1, 0, 0), (1, 1, 0), (1, 2, 0)]));
    }

    #[test]
    fn truncated_products() {
        let n = 2;
        let xy_: J = &x(n) * &y(n);
        assert_eq!(xy_, poly(n, &[(1, 1, 1)]));
        let a: J = poly(n, &[(1, 0, 0), (1, 1, 0)]);
        let b: J = poly(n, &[(1, 0, 0), (-1, 1, 0)]);
        assert_eq!(&a * &b, poly(n, &[(1, 0, 0), (-1, 2, 0)]));
        // Everything beyond the order disappears.
        let c: J = poly(n, &[(1, 2, 0)]);
        assert!((&c * &c).is_zero());
    }

    #[test]
    fn mismatches_are_rejected() {
        let a: J = x(3);
        let b: J = x(4);
        assert_eq!(
            a.try_add(&b),
            Err(Error::OrderMismatch { left: 3, right: 4 })
        );
        let c: J = Jet::var(3, 3, 0);
        assert_eq!(
            a.try_mul(&c),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn composition() {
        let n = 5;
        let g: J = poly(n, &[(1, 2, 0)]);
        let out = g
            .compose(&[poly(n, &[(1, 1, 0), (1, 0, 1)]), y(n)])
            .unwrap();
        assert_eq!(out, poly(n, &[(1, 2, 0), (2, 1, 1), (1, 0, 2)]));
        let h: J = poly(n, &[(1, 0, 1), (3, 2, 1), (-1, 1, 0)]);
        assert_eq!(h.compose(&[x(n), y(n)]).unwrap(), h);
        // y + x^2 composed with the inverse map (x, y - x^2) is y.
        let g: J = poly(n, &[(1, 0, 1), (1, 2, 0)]);
        let inv = [x(n), poly(n, &[(1, 0, 1), (-1, 2, 0)])];
        assert_eq!(g.compose(&inv).unwrap(), y(n));
    }

    #[test]
    fn composition_rejects_constant_terms() {
        let n = 3;
        let g: J = x(n);
        let bad = poly(n, &[(1, 0, 0), (1, 1, 0)]);
        assert_eq!(g.compose(&[bad, y(n)]), Err(Error::NonzeroConstantTerm));
        assert!(matches!(g.compose(&[x(n)]), Err(Error::Arity { .. })));
    }

    #[test]
    fn partial_derivatives() {
        let n = 4;
        let f: J = poly(n, &[(1, 2, 1)]);
        assert_eq!(f.partial(0).unwrap(), poly(n, &[(2, 1, 1)]));
        assert!(J::constant(2, n, Qi::int(7)).partial(0).unwrap().is_zero());
        let g: J = poly(n, &[(1, 2, 0), (3, 1, 1)]);
        assert_eq!(g.partial(0).unwrap(), poly(n, &[(2, 1, 0), (3, 0, 1)]));
        assert!(matches!(g.partial(2), Err(Error::VariableIndex { .. })));
    }

    #[test]
    fn binomial_series() {
        let n = 2;
        let u: J = x(n);
        assert_eq!(u.binomial_power(&q(1, 1)).unwrap(), &J::one(2, n) + &u);
        let half = u.binomial_power(&q(1, 2)).unwrap();
        // Oracle: squaring the square root returns 1 + x.
        assert_eq!(&half * &half, &J::one(2, n) + &u);
        assert_eq!(
            half,
            J::from_terms(
                2,
                n,
                [
                    (MultiIndex::new([0, 0]), Qi::one()),
                    (MultiIndex::new([1, 0]), Qi::ratio(1, 2)),
                    (MultiIndex::new([2, 0]), Qi::ratio(-1, 8)),
                ]
            )
        );
        assert_eq!(
            J::one(2, n).binomial_power(&q(1, 2)),
            Err(Error::NonzeroConstantTerm)
        );
    }

    #[test]
    fn unit_inversion() {
        let n = 3;
        assert_eq!(J::one(2, n).invert_unit().unwrap(), J::one(2, n));
        let u: J = poly(n, &[(1, 0, 0), (-1, 1, 0)]);
        assert_eq!(
            u.invert_unit().unwrap(),
            poly(n, &[(1, 0, 0), (1, 1, 0), (1, 2, 0), (1, 3, 0)])
        );
        assert_eq!(x::<Qi>(n).invert_unit(), Err(Error::NotAUnit));
    }

    #[test]
    fn vanishing_order() {
        let n = 5;
        assert_eq!(poly::<Qi>(n, &[(1, 2, 1)]).order_of_vanishing(), Some(3));
        assert_eq!(J::zero(2, n).order_of_vanishing(), None);
    }

    #[test]
    fn rendering() {
        let n = 4;
        let g: J = poly(n, &[(1, 2, 0), (3, 1, 1), (-1, 0, 2), (2, 0, 0)]);
        assert_eq!(g.to_string(), "2 + x^2 + 3*x*y - y^2");
        let c = J::monomial(2, n, MultiIndex::new([1, 0]), Qi::new(q(1, 2), q(1, 1)));
        assert_eq!(c.to_string(), "(1/2+i)*x");
        assert_eq!(J::zero(2, n).to_string(), "0");
        assert_eq!(J::var(3, n, 2).to_string(), "z3");
    }

    #[test]
    fn rational_and_float_coefficients() {
        let n = 3;
        let a: Jet<BigRational> = poly(n, &[(1, 0, 0), (-1, 1, 0)]);
        let inv = a.invert_unit().unwrap();
        assert_eq!((&a * &inv), Jet::one(2, n));
        let b: Jet<f64> = poly(n, &[(1, 0, 0), (-1, 1, 0)]);
        let binv = b.invert_unit().unwrap();
        assert_eq!(binv.coeff(&MultiIndex::new([3, 0])), 1.0);
    }
}
