//! Formal meromorphic functions as quotients of jets, with explicit
//! bookkeeping of how many degrees of each jet are actually known.
//!
//! Truncation interacts badly with division: a numerator known up to degree
//! `N` divided by `x^3` is only known up to degree `N − 3`. Every jet inside a
//! [`MeroJet`] therefore carries a precision, and comparisons only look at
//! degrees that are determined by the inputs.

use std::collections::BTreeMap;
use std::fmt;

use crate::diffeo::Diffeo;
use crate::error::{Error, Result};
use crate::jet::{default_var_names, needs_parens, Jet, MultiIndex};
use crate::scalar::{Qi, Scalar};

/// Precision marker for jets that are exact polynomials.
pub const EXACT: i64 = i64::MAX;

fn padd(p: i64, d: i64) -> i64 {
    if p == EXACT || d == EXACT {
        EXACT
    } else {
        p + d
    }
}

fn ord_or_exact<S: Scalar>(j: &Jet<S>) -> i64 {
    j.order_of_vanishing().map_or(EXACT, i64::from)
}

/// A jet together with the degree up to which its coefficients are correct.
///
/// `prec == EXACT` means the jet is a polynomial stored without loss. A
/// negative precision means nothing is known.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PJet<S = Qi> {
    jet: Jet<S>,
    prec: i64,
}

impl<S: Scalar> PJet<S> {
    /// A jet known through its own order.
    pub fn known(jet: Jet<S>) -> Self {
        let p = i64::from(jet.order());
        PJet { jet, prec: p }
    }

    /// A polynomial stored without truncation.
    pub fn exact(jet: Jet<S>) -> Self {
        PJet { jet, prec: EXACT }
    }

    pub fn with_prec(jet: Jet<S>, prec: i64) -> Self {
        let mut p = PJet { jet, prec };
        p.clip();
        p
    }

    fn clip(&mut self) {
        if self.prec != EXACT {
            let n = i64::from(self.jet.order());
            if self.prec > n {
                self.prec = n;
            }
            self.jet = if self.prec < 0 {
                Jet::zero(self.jet.nvars(), self.jet.order())
            } else {
                self.jet.truncated(self.prec as u32)
            };
        }
    }

    pub fn jet(&self) -> &Jet<S> {
        &self.jet
    }

    /// `None` for exact polynomials.
    pub fn precision(&self) -> Option<i64> {
        (self.prec != EXACT).then_some(self.prec)
    }

    pub fn is_exact(&self) -> bool {
        self.prec == EXACT
    }

    fn order(&self) -> i64 {
        i64::from(self.jet.order())
    }

    /// Zero in every known degree.
    pub fn is_known_zero(&self) -> bool {
        self.jet.is_zero()
    }

    /// Nonzero in some known degree.
    pub fn is_known_nonzero(&self) -> bool {
        !self.jet.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::with_prec(&self.jet + &o.jet, self.prec.min(o.prec))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::with_prec(&self.jet - &o.jet, self.prec.min(o.prec))
    }

    pub fn neg(&self) -> Self {
        PJet {
            jet: -&self.jet,
            prec: self.prec,
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        PJet {
            jet: self.jet.scale(c),
            prec: self.prec,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order();
        let fits = |a: &Jet<S>, b: &Jet<S>| {
            i64::from(a.max_degree().unwrap_or(0)) + i64::from(b.max_degree().unwrap_or(0)) <= n
        };
        let prec = if self.is_exact() && o.is_exact() && fits(&self.jet, &o.jet) {
            EXACT
        } else {
            padd(self.prec, ord_or_exact(&o.jet))
                .min(padd(o.prec, ord_or_exact(&self.jet)))
                .min(n)
        };
        Self::with_prec(&self.jet * &o.jet, prec)
    }

    pub fn partial(&self, var: usize) -> Result<Self> {
        let d = self.jet.partial(var)?;
        let p = if self.is_exact() {
            EXACT
        } else {
            self.prec - 1
        };
        Ok(Self::with_prec(d, p))
    }

    pub fn mul_monomial(&self, idx: &MultiIndex) -> Self {
        let deg = i64::from(idx.degree());
        let n = self.order();
        let prec = if self.is_exact() && i64::from(self.jet.max_degree().unwrap_or(0)) + deg <= n {
            EXACT
        } else {
            padd(self.prec, deg).min(n)
        };
        Self::with_prec(self.jet.mul_monomial(idx), prec)
    }

    /// Exact division by a monomial; `None` if a known term is not divisible.
    pub fn div_monomial(&self, idx: &MultiIndex) -> Option<Self> {
        let q = self.jet.div_monomial(idx)?;
        let p = if self.is_exact() {
            EXACT
        } else {
            self.prec - i64::from(idx.degree())
        };
        Some(Self::with_prec(q, p))
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &Diffeo<S>) -> Result<Self> {
        let c = self.jet.compose(g.components())?;
        Ok(Self::with_prec(c, self.prec.min(self.order())))
    }

    /// Multiplicative inverse of a unit.
    pub fn invert_unit(&self) -> Result<Self> {
        let inv = self.jet.invert_unit()?;
        let constant = self.jet.len() == 1 && self.jet.max_degree() == Some(0);
        let p = if self.is_exact() && constant {
            EXACT
        } else {
            self.prec.min(self.order())
        };
        Ok(Self::with_prec(inv, p))
    }

    /// Componentwise minimum of the exponents of the known terms.
    fn monomial_gcd(&self) -> MultiIndex {
        let n = self.jet.nvars();
        let mut min: Option<Vec<u32>> = None;
        for (k, _) in self.jet.terms() {
            min = Some(match min {
                None => k.exps().to_vec(),
                Some(m) => m.iter().zip(k.exps()).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        min.map_or_else(|| MultiIndex::zero(n), MultiIndex::new)
    }
}

/// A quotient `num / den` of jets.
#[derive(Clone, Debug)]
pub struct MeroJet<S = Qi> {
    num: PJet<S>,
    den: PJet<S>,
}

impl<S: Scalar> MeroJet<S> {
    /// Both jets known through the jet order.
    pub fn new(num: Jet<S>, den: Jet<S>) -> Result<Self> {
        Self::from_parts(PJet::known(num), PJet::known(den))
    }

    /// Both jets are exact polynomials.
    pub fn exact(num: Jet<S>, den: Jet<S>) -> Result<Self> {
        Self::from_parts(PJet::exact(num), PJet::exact(den))
    }

    pub fn from_parts(num: PJet<S>, den: PJet<S>) -> Result<Self> {
        num.jet.check_compatible(&den.jet)?;
        if !den.is_known_nonzero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(MeroJet { num, den })
    }

    pub fn from_jet(j: Jet<S>) -> Self {
        let one = Jet::one(j.nvars(), j.order());
        MeroJet {
            num: PJet::known(j),
            den: PJet::exact(one),
        }
    }

    pub fn from_exact_jet(j: Jet<S>) -> Self {
        let one = Jet::one(j.nvars(), j.order());
        MeroJet {
            num: PJet::exact(j),
            den: PJet::exact(one),
        }
    }

    pub fn constant(nvars: usize, order: u32, c: S) -> Self {
        Self::from_exact_jet(Jet::constant(nvars, order, c))
    }

    pub fn zero(nvars: usize, order: u32) -> Self {
        Self::constant(nvars, order, S::zero())
    }

    /// `c / z^a`
    pub fn inverse_monomial(nvars: usize, order: u32, c: S, a: MultiIndex) -> Result<Self> {
        Self::exact(
            Jet::constant(nvars, order, c),
            Jet::monomial(nvars, order, a, S::one()),
        )
    }

    pub fn num(&self) -> &PJet<S> {
        &self.num
    }

    pub fn den(&self) -> &PJet<S> {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.jet.nvars()
    }

    pub fn order(&self) -> u32 {
        self.num.jet.order()
    }

    fn build(num: PJet<S>, den: PJet<S>) -> Result<Self> {
        if !den.is_known_nonzero() {
            return Err(Error::Precondition(
                "denominator is lost to truncation; raise the jet order".into(),
            ));
        }
        Ok(MeroJet { num, den })
    }

    fn check_compatible(&self, o: &Self) -> Result<()> {
        self.num.jet.check_compatible(&o.num.jet)
    }

    fn single_monomial_den(&self) -> Option<(MultiIndex, S)> {
        if self.den.jet.len() != 1 {
            return None;
        }
        let (k, c) = self.den.jet.terms().next()?;
        Some((k.clone(), c.clone()))
    }

    /// Rewrites `self` over the denominator `z^target` when its denominator
    /// is `c·z^a` with `a ≤ target`.
    fn over_monomial(&self, target: &MultiIndex) -> Option<PJet<S>> {
        let (a, c) = self.single_monomial_den()?;
        let extra = target.checked_sub(&a)?;
        let cinv = c.inv()?;
        Some(self.num.mul_monomial(&extra).scale(&cinv))
    }

    fn combine(&self, o: &Self, sign: bool) -> Result<Self> {
        self.check_compatible(o)?;
        let pick = |a: &PJet<S>, b: &PJet<S>| if sign { a.add(b) } else { a.sub(b) };
        if self.den == o.den {
            return Self::build(pick(&self.num, &o.num), self.den.clone());
        }
        if let (Some((a, _)), Some((b, _))) = (self.single_monomial_den(), o.single_monomial_den())
        {
            let lcm = MultiIndex::new(a.exps().iter().zip(b.exps()).map(|(x, y)| *x.max(y)));
            let (Some(p), Some(q)) = (self.over_monomial(&lcm), o.over_monomial(&lcm)) else {
                unreachable!("lcm is divisible by both");
            };
            let den = PJet::exact(Jet::monomial(self.nvars(), self.order(), lcm, S::one()));
            return Self::build(pick(&p, &q), den);
        }
        let num = pick(&self.num.mul(&o.den), &o.num.mul(&self.den));
        Self::build(num, self.den.mul(&o.den))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.combine(o, true)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.combine(o, false)
    }

    pub fn neg(&self) -> Self {
        MeroJet {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        MeroJet {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        if o.den.jet.is_one_jet() {
            return Self::build(self.num.mul(&o.num), self.den.clone());
        }
        if self.den.jet.is_one_jet() {
            return Self::build(self.num.mul(&o.num), o.den.clone());
        }
        Self::build(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn mul_jet(&self, j: &Jet<S>) -> Result<Self> {
        self.mul(&Self::from_jet(j.clone()))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        if !o.num.is_known_nonzero() {
            return Err(Error::ZeroDenominator);
        }
        if self.den == o.den {
            return Self::build(self.num.clone(), o.num.clone());
        }
        Self::build(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    /// Quotient rule with the monomial part of the denominator split off:
    /// for `N / (z^a w)`,
    /// `∂_i = ((z_i ∂_i N − a_i N) w − z_i N ∂_i w) / (z^{a+e_i} w²)`.
    /// This keeps denominators far smaller than the naive `D²`.
    pub fn partial(&self, var: usize) -> Result<Self> {
        let n = self.nvars();
        let a = self.den.monomial_gcd();
        let w = self
            .den
            .div_monomial(&a)
            .expect("monomial gcd divides the denominator");
        let ei = MultiIndex::unit(n, var);
        let ai = S::from_i64(i64::from(a.get(var)));
        let zi_dn = self.num.partial(var)?.mul_monomial(&ei);
        let first = zi_dn.sub(&self.num.scale(&ai));
        if w.jet.len() == 1 && w.jet.max_degree() == Some(0) {
            // w is a constant: ∂_i = (z_i ∂_i N − a_i N) / (z^{a+e_i} w)
            let den = w.mul_monomial(&a.add(&ei));
            return Self::build(first, den);
        }
        let zi_dw = w.partial(var)?.mul_monomial(&ei);
        let num = first.mul(&w).sub(&self.num.mul(&zi_dw));
        let den = w.mul(&w).mul_monomial(&a.add(&ei));
        Self::build(num, den)
    }

    /// `self ∘ g`
    pub fn compose(&self, g: &Diffeo<S>) -> Result<Self> {
        Self::build(self.num.compose(g)?, self.den.compose(g)?)
    }

    /// Whether the numerator vanishes in every known degree.
    pub fn is_zero(&self) -> bool {
        self.num.is_known_zero()
    }

    /// Equality at the verifiable order. Uses exact Laurent expansions when
    /// both sides have monomial-times-unit denominators, cross
    /// multiplication otherwise.
    pub fn eq_verified(&self, o: &Self) -> bool {
        if self.check_compatible(o).is_err() {
            return false;
        }
        if self.den == o.den {
            return self.num.sub(&o.num).is_known_zero();
        }
        if let (Some(a), Some(b)) = (self.to_laurent(), o.to_laurent()) {
            return a.eq_verified(&b);
        }
        self.num
            .mul(&o.den)
            .sub(&o.num.mul(&self.den))
            .is_known_zero()
    }

    /// The Laurent expansion, when the denominator is `z^a` times a unit.
    pub fn to_laurent(&self) -> Option<Laurent<S>> {
        let a = self.den.monomial_gcd();
        let w = self.den.div_monomial(&a)?;
        if w.jet.constant_term().is_zero() {
            return None;
        }
        let winv = w.invert_unit().ok()?;
        let r = self.num.mul(&winv);
        let shift: Vec<i64> = a.exps().iter().map(|&e| -i64::from(e)).collect();
        let known = if r.is_exact() {
            None
        } else {
            Some(r.prec - i64::from(a.degree()))
        };
        let terms = r
            .jet
            .terms()
            .map(|(k, c)| {
                let e: Vec<i64> = k
                    .exps()
                    .iter()
                    .zip(&shift)
                    .map(|(x, s)| i64::from(*x) + s)
                    .collect();
                (LaurentIndex(e), c.clone())
            })
            .collect();
        Some(Laurent {
            nvars: self.nvars(),
            terms,
            known,
        })
    }

    /// Converts to a jet when the denominator is a unit.
    pub fn to_jet(&self) -> Option<PJet<S>> {
        if self.den.jet.constant_term().is_zero() {
            return None;
        }
        Some(self.num.mul(&self.den.invert_unit().ok()?))
    }

    /// Cancels the largest monomial dividing numerator and denominator, and
    /// collapses the quotient to a constant when the numerator is a known
    /// multiple of the denominator.
    pub fn reduced(&self) -> Self {
        let (a, b) = (self.num.monomial_gcd(), self.den.monomial_gcd());
        let g = if self.num.is_known_zero() {
            b
        } else {
            MultiIndex::new(a.exps().iter().zip(b.exps()).map(|(x, y)| *x.min(y)))
        };
        let (Some(num), Some(den)) = (self.num.div_monomial(&g), self.den.div_monomial(&g)) else {
            return self.clone();
        };
        let val = i64::from(den.jet.order_of_vanishing().unwrap_or(0));
        let prec = if num.is_exact() && den.is_exact() {
            EXACT
        } else {
            num.prec.min(den.prec) - val
        };
        let one = PJet::exact(Jet::one(self.nvars(), self.order()));
        if let Some((k, c)) = den.jet.terms().next() {
            let r = num.jet.coeff(k) / c.clone();
            let scaled = den.jet.scale(&r);
            let matches = if num.is_exact() {
                scaled == num.jet
            } else {
                scaled.truncated(num.prec.max(0) as u32) == num.jet
            };
            if matches && prec >= 0 {
                let c = PJet::with_prec(Jet::constant(self.nvars(), self.order(), r), prec);
                return MeroJet { num: c, den: one };
            }
        }
        MeroJet { num, den }
    }

    pub fn display_with(&self, names: &[String]) -> String {
        let num = self.num.jet.display_with(names);
        if self.den.jet.is_one_jet() {
            return num;
        }
        let den = self.den.jet.display_with(names);
        let wrap = |s: String, j: &Jet<S>| {
            let single = j.len() == 1 && !needs_parens(&s) && !s.starts_with('-');
            if single && !s.contains('*') {
                s
            } else {
                format!("({s})")
            }
        };
        format!("{}/{}", wrap(num, &self.num.jet), wrap(den, &self.den.jet))
    }
}

impl<S: Scalar> fmt::Display for MeroJet<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&default_var_names(self.nvars())))
    }
}

trait OneJet {
    fn is_one_jet(&self) -> bool;
}

impl<S: Scalar> OneJet for Jet<S> {
    fn is_one_jet(&self) -> bool {
        self.len() == 1 && self.max_degree() == Some(0) && self.constant_term().is_one()
    }
}

/// Exponent vector of a Laurent monomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LaurentIndex(pub Vec<i64>);

impl LaurentIndex {
    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl Ord for LaurentIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for LaurentIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite Laurent series `Σ c_e z^e` (`e ∈ ℤⁿ`) whose terms are known up to
/// total degree `known` (`None` when exact).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent<S = Qi> {
    nvars: usize,
    terms: BTreeMap<LaurentIndex, S>,
    known: Option<i64>,
}

impl<S: Scalar> Laurent<S> {
    pub fn zero(nvars: usize) -> Self {
        Laurent {
            nvars,
            terms: BTreeMap::new(),
            known: None,
        }
    }

    pub fn from_terms(
        nvars: usize,
        known: Option<i64>,
        terms: impl IntoIterator<Item = (Vec<i64>, S)>,
    ) -> Self {
        let mut l = Laurent {
            nvars,
            terms: BTreeMap::new(),
            known,
        };
        for (e, c) in terms {
            l.add_term(LaurentIndex(e), &c);
        }
        l.clip();
        l
    }

    fn add_term(&mut self, e: LaurentIndex, c: &S) {
        let slot = self.terms.entry(e.clone()).or_insert_with(S::zero);
        slot.add_assign_ref(c);
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    fn clip(&mut self) {
        if let Some(k) = self.known {
            self.terms.retain(|e, _| e.degree() <= k);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn known_degree(&self) -> Option<i64> {
        self.known
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &S)> + '_ {
        self.terms.iter().map(|(k, v)| (k.0.as_slice(), v))
    }

    pub fn coeff(&self, e: &[i64]) -> S {
        self.terms
            .get(&LaurentIndex(e.to_vec()))
            .cloned()
            .unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn min_known(a: Option<i64>, b: Option<i64>) -> Option<i64> {
        match (a, b) {
            (None, x) | (x, None) => x,
            (Some(x), Some(y)) => Some(x.min(y)),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.known = Self::min_known(self.known, o.known);
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c);
        }
        out.clip();
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        Laurent {
            nvars: self.nvars,
            terms: if c.is_zero() {
                BTreeMap::new()
            } else {
                self.terms
                    .iter()
                    .map(|(k, v)| (k.clone(), v.mul_ref(c)))
                    .collect()
            },
            known: self.known,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-S::one()))
    }

    /// Exact term-by-term derivative; the known degree drops by one.
    pub fn partial(&self, var: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(k, _)| k.0[var] != 0)
            .map(|(k, v)| {
                let mut e = k.0.clone();
                let c = v.mul_ref(&S::from_i64(e[var]));
                e[var] -= 1;
                (e, c)
            });
        Laurent::from_terms(self.nvars, self.known.map(|k| k - 1), terms)
    }

    /// Multiplies by `z^e`.
    pub fn shift(&self, e: &[i64]) -> Self {
        let d: i64 = e.iter().sum();
        Laurent::from_terms(
            self.nvars,
            self.known.map(|k| k + d),
            self.terms
                .iter()
                .map(|(k, v)| (k.0.iter().zip(e).map(|(a, b)| a + b).collect(), v.clone())),
        )
    }

    /// Equality in every degree known on both sides.
    pub fn eq_verified(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }
}
