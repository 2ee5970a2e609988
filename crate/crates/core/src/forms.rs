//! Formal meromorphic one-forms and fields with meromorphic coefficients.

use std::fmt;

use crate::diffeo::Diffeo;
use crate::error::{Error, Result};
use crate::field::{join_signed, VectorField};
use crate::jet::{default_var_names, needs_parens, Jet, MultiIndex};
use crate::mero::{Laurent, MeroJet, PJet};
use crate::scalar::{Qi, Scalar};

/// `Σ R_i dz_i` with meromorphic coefficients.
#[derive(Clone, Debug)]
pub struct OneForm<S = Qi> {
    coeffs: Vec<MeroJet<S>>,
}

/// Numerators over one shared denominator.
fn common_den<S: Scalar>(items: &[MeroJet<S>]) -> (Vec<PJet<S>>, PJet<S>) {
    if items.iter().all(|m| m.den() == items[0].den()) {
        return (
            items.iter().map(|m| m.num().clone()).collect(),
            items[0].den().clone(),
        );
    }
    let monos: Option<Vec<(MultiIndex, S)>> = items
        .iter()
        .map(|m| {
            let d = m.den().jet();
            (d.len() == 1 && m.den().is_exact())
                .then(|| d.terms().next().map(|(k, c)| (k.clone(), c.clone())))
                .flatten()
        })
        .collect();
    if let Some(monos) = monos {
        let nv = items[0].nvars();
        let lcm = MultiIndex::new(
            (0..nv).map(|i| monos.iter().map(|(a, _)| a.get(i)).max().unwrap_or(0)),
        );
        let nums = items
            .iter()
            .zip(&monos)
            .map(|(m, (a, c))| {
                let extra = lcm.checked_sub(a).expect("lcm");
                m.num()
                    .mul_monomial(&extra)
                    .scale(&c.inv().expect("nonzero"))
            })
            .collect();
        let den = PJet::exact(Jet::monomial(nv, items[0].order(), lcm, S::one()));
        return (nums, den);
    }
    let mut den = items[0].den().clone();
    let mut nums: Vec<PJet<S>> = vec![items[0].num().clone()];
    for m in &items[1..] {
        if *m.den() == den {
            nums.push(m.num().clone());
            continue;
        }
        for n in nums.iter_mut() {
            *n = n.mul(m.den());
        }
        nums.push(m.num().mul(&den));
        den = den.mul(m.den());
    }
    (nums, den)
}

impl<S: Scalar> OneForm<S> {
    pub fn new(coeffs: Vec<MeroJet<S>>) -> Result<Self> {
        let Some(first) = coeffs.first() else {
            return Err(Error::Arity {
                expected: 1,
                got: 0,
            });
        };
        if coeffs.len() != first.nvars() {
            return Err(Error::Arity {
                expected: first.nvars(),
                got: coeffs.len(),
            });
        }
        for c in &coeffs {
            first.num().jet().check_compatible(c.num().jet())?;
        }
        Ok(OneForm { coeffs })
    }

    pub fn zero(nvars: usize, order: u32) -> Self {
        OneForm {
            coeffs: vec![MeroJet::zero(nvars, order); nvars],
        }
    }

    /// `dz_var`
    pub fn dz(nvars: usize, order: u32, var: usize) -> Self {
        let mut f = Self::zero(nvars, order);
        f.coeffs[var] = MeroJet::constant(nvars, order, S::one());
        f
    }

    /// `dz_var / z_var`
    pub fn log_dz(nvars: usize, order: u32, var: usize) -> Self {
        let mut f = Self::zero(nvars, order);
        f.coeffs[var] =
            MeroJet::inverse_monomial(nvars, order, S::one(), MultiIndex::unit(nvars, var))
                .expect("monomial denominator");
        f
    }

    /// `dT = Σ ∂T/∂z_i dz_i`
    pub fn differential(t: &MeroJet<S>) -> Result<Self> {
        let coeffs = (0..t.nvars())
            .map(|i| t.partial(i))
            .collect::<Result<Vec<_>>>()?;
        Ok(OneForm { coeffs })
    }

    /// `λ dx/x + μ dy/y + d(f / (x^n y^m))` with `f` an exact polynomial.
    pub fn log_exact(order: u32, lambda: &S, mu: &S, n: u32, m: u32, f: &Jet<S>) -> Result<Self> {
        if f.nvars() != 2 {
            return Err(Error::WrongDimension(2));
        }
        let t = MeroJet::from_parts(
            PJet::exact(f.with_order(order)),
            PJet::exact(Jet::monomial(2, order, MultiIndex::new([n, m]), S::one())),
        )?;
        let exact = Self::differential(&t)?;
        Self::log_dz(2, order, 0)
            .scale(lambda)
            .add(&Self::log_dz(2, order, 1).scale(mu))?
            .add(&exact)
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn order(&self) -> u32 {
        self.coeffs[0].order()
    }

    pub fn coeffs(&self) -> &[MeroJet<S>] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &MeroJet<S> {
        &self.coeffs[i]
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        Ok(OneForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a.add(b))
                .collect::<Result<Vec<_>>>()?,
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        OneForm {
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// The same form with every coefficient over one denominator.
    pub fn with_common_denominator(&self) -> Self {
        let (nums, den) = common_den(&self.coeffs);
        OneForm {
            coeffs: nums
                .into_iter()
                .map(|n| MeroJet::from_parts(n, den.clone()).expect("nonzero denominator"))
                .collect(),
        }
    }

    /// Laurent expansions of all coefficients, if every denominator is a
    /// monomial times a unit.
    pub fn laurent(&self) -> Option<Vec<Laurent<S>>> {
        self.coeffs.iter().map(MeroJet::to_laurent).collect()
    }

    /// `dω = 0` in every verifiable degree.
    pub fn is_closed(&self) -> bool {
        let n = self.nvars();
        if let Some(ls) = self.laurent() {
            return (0..n)
                .all(|i| (i + 1..n).all(|j| ls[i].partial(j).eq_verified(&ls[j].partial(i))));
        }
        // Over one denominator D the condition ∂_j(N_i/D) = ∂_i(N_j/D) is
        // (∂_j N_i − ∂_i N_j)·D − N_i ∂_j D + N_j ∂_i D = 0.
        let (nums, d) = common_den(&self.coeffs);
        (0..n).all(|i| {
            (i + 1..n).all(|j| {
                let r = (|| -> Result<bool> {
                    let t = nums[i].partial(j)?.sub(&nums[j].partial(i)?).mul(&d);
                    let u = nums[i].mul(&d.partial(j)?);
                    let v = nums[j].mul(&d.partial(i)?);
                    Ok(t.sub(&u).add(&v).is_known_zero())
                })();
                r.unwrap_or(false)
            })
        })
    }

    /// `g^*ω = Σ_i (Σ_j R_j(g) ∂g_j/∂z_i) dz_i`
    pub fn pullback(&self, g: &Diffeo<S>) -> Result<Self> {
        if g.nvars() != self.nvars() {
            return Err(Error::DimensionMismatch {
                left: self.nvars(),
                right: g.nvars(),
            });
        }
        self.coeffs[0]
            .num()
            .jet()
            .check_compatible(g.component(0))?;
        let (nums, den) = common_den(&self.coeffs);
        let den_g = den.compose(g)?;
        let nums_g = nums
            .iter()
            .map(|p| p.compose(g))
            .collect::<Result<Vec<_>>>()?;
        let n = self.nvars();
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = PJet::exact(Jet::zero(n, self.order()));
            for (j, nj) in nums_g.iter().enumerate() {
                let dg = PJet::known(g.component(j).clone()).partial(i)?;
                acc = acc.add(&nj.mul(&dg));
            }
            coeffs.push(MeroJet::from_parts(acc, den_g.clone())?);
        }
        Ok(OneForm { coeffs })
    }

    /// `ω(X)`
    pub fn apply(&self, x: &VectorField<S>) -> Result<MeroJet<S>> {
        self.apply_mero(&MeroField::from_field(x))
    }

    pub fn apply_mero(&self, x: &MeroField<S>) -> Result<MeroJet<S>> {
        if x.nvars() != self.nvars() {
            return Err(Error::DimensionMismatch {
                left: self.nvars(),
                right: x.nvars(),
            });
        }
        let mut acc = MeroJet::zero(self.nvars(), self.order());
        for (r, xi) in self.coeffs.iter().zip(x.components()) {
            acc = acc.add(&r.mul(xi)?)?;
        }
        Ok(acc)
    }

    /// Coefficientwise equality at the verifiable order.
    pub fn eq_verified(&self, o: &Self) -> bool {
        self.nvars() == o.nvars()
            && self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .all(|(a, b)| a.eq_verified(b))
    }

    pub fn display_with(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = c.display_with(names);
            let d = format!("d{}", names[i]);
            parts.push(if s == "1" {
                d
            } else if s == "-1" {
                format!("-{d}")
            } else if needs_parens(&s) {
                format!("({s}) {d}")
            } else {
                format!("{s} {d}")
            });
        }
        join_signed(&parts)
    }
}

impl<S: Scalar> fmt::Display for OneForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&default_var_names(self.nvars())))
    }
}

/// A vector field whose coefficients are meromorphic.
#[derive(Clone, Debug)]
pub struct MeroField<S = Qi> {
    comps: Vec<MeroJet<S>>,
}

impl<S: Scalar> MeroField<S> {
    pub fn new(comps: Vec<MeroJet<S>>) -> Self {
        MeroField { comps }
    }

    pub fn from_field(x: &VectorField<S>) -> Self {
        MeroField {
            comps: x
                .components()
                .iter()
                .map(|c| MeroJet::from_jet(c.clone()))
                .collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[MeroJet<S>] {
        &self.comps
    }

    /// `X(T) = Σ X_i ∂T/∂z_i`
    pub fn apply(&self, t: &MeroJet<S>) -> Result<MeroJet<S>> {
        let mut acc = MeroJet::zero(t.nvars(), t.order());
        for (i, xi) in self.comps.iter().enumerate() {
            acc = acc.add(&xi.mul(&t.partial(i)?)?)?;
        }
        Ok(acc)
    }

    /// Same convention as [`VectorField::bracket`].
    pub fn bracket(&self, o: &Self) -> Result<Self> {
        let comps = self
            .comps
            .iter()
            .zip(&o.comps)
            .map(|(xi, yi)| o.apply(xi)?.sub(&self.apply(yi)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(MeroField { comps })
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(MeroJet::is_zero)
    }

    pub fn eq_verified(&self, o: &Self) -> bool {
        self.comps.len() == o.comps.len()
            && self
                .comps
                .iter()
                .zip(&o.comps)
                .all(|(a, b)| a.eq_verified(b))
    }

    /// An ordinary field, when every denominator is a unit. Coefficients
    /// are truncated to the degrees that are actually known.
    pub fn to_vector_field(&self) -> Option<VectorField<S>> {
        let comps: Option<Vec<PJet<S>>> = self.comps.iter().map(MeroJet::to_jet).collect();
        let comps = comps?;
        let p = comps.iter().filter_map(PJet::precision).min();
        let jets = comps
            .into_iter()
            .map(|c| match p {
                Some(p) if p < 0 => Jet::zero(c.jet().nvars(), c.jet().order()),
                Some(p) => c.jet().truncated(p as u32),
                None => c.jet().clone(),
            })
            .collect();
        VectorField::new(jets).ok()
    }

    pub fn display_with(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = c.display_with(names);
            let d = format!("d/d{}", names[i]);
            parts.push(if s == "1" {
                d
            } else if needs_parens(&s) || s.contains(' ') {
                format!("({s}) {d}")
            } else {
                format!("{s} {d}")
            });
        }
        join_signed(&parts)
    }
}

impl<S: Scalar> fmt::Display for MeroField<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&default_var_names(self.nvars())))
    }
}

/// Whether `X(T) = 0` in every verifiable degree.
pub fn verify_first_integral<S: Scalar>(x: &VectorField<S>, t: &MeroJet<S>) -> Result<bool> {
    if x.nvars() != t.nvars() {
        return Err(Error::DimensionMismatch {
            left: x.nvars(),
            right: t.nvars(),
        });
    }
    // X(N/D) vanishes iff X(N)·D − N·X(D) does.
    let apply = |p: &PJet<S>| -> Result<PJet<S>> {
        let mut acc = PJet::exact(Jet::zero(p.jet().nvars(), p.jet().order()));
        for (i, xi) in x.components().iter().enumerate() {
            acc = acc.add(&PJet::known(xi.clone()).mul(&p.partial(i)?));
        }
        Ok(acc)
    };
    let lhs = apply(t.num())?.mul(t.den());
    let rhs = t.num().mul(&apply(t.den())?);
    Ok(lhs.sub(&rhs).is_known_zero())
}

fn check_plane<S: Scalar>(w: &OneForm<S>) -> Result<()> {
    if w.nvars() != 2 {
        return Err(Error::WrongDimension(2));
    }
    Ok(())
}

/// Laurent expansions of a closed planar form with axis poles, after the
/// forbidden `x^{-1}y^j dx` and `x^i y^{-1} dy` terms are checked.
fn closed_laurent<S: Scalar>(w: &OneForm<S>) -> Result<(Laurent<S>, Laurent<S>)> {
    check_plane(w)?;
    let mut ls = w.laurent().ok_or(Error::NonMonomialDenominator)?;
    if !w.is_closed() {
        return Err(Error::NotClosed);
    }
    let q = ls.pop().expect("two coefficients");
    let p = ls.pop().expect("two coefficients");
    for (e, c) in p.terms() {
        if e[0] == -1 && e[1] != 0 && !c.is_zero() {
            return Err(Error::ForbiddenLaurentTerm {
                exponents: e.to_vec(),
            });
        }
    }
    for (e, c) in q.terms() {
        if e[1] == -1 && e[0] != 0 && !c.is_zero() {
            return Err(Error::ForbiddenLaurentTerm {
                exponents: e.to_vec(),
            });
        }
    }
    Ok((p, q))
}

/// The residue of a closed planar form along the axis `{z_axis = 0}`:
/// the `x^{-1}y^0` coefficient of the `dx` part for `axis = 0`, the
/// `x^0 y^{-1}` coefficient of the `dy` part for `axis = 1`.
pub fn residue_along_axis<S: Scalar>(w: &OneForm<S>, axis: usize) -> Result<S> {
    let (p, q) = closed_laurent(w)?;
    match axis {
        0 => Ok(p.coeff(&[-1, 0])),
        1 => Ok(q.coeff(&[0, -1])),
        _ => Err(Error::VariableIndex {
            index: axis,
            nvars: 2,
        }),
    }
}

/// `ω = λ dx/x + μ dy/y + d(f / (x^n y^m))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegrationResult<S = Qi> {
    pub lambda: S,
    pub mu: S,
    pub n: u32,
    pub m: u32,
    /// `f`, with its `x^n y^m` coefficient normalized to zero.
    pub primitive: Jet<S>,
    /// Degree through which `primitive` is determined; `None` if exact.
    pub known_degree: Option<i64>,
}

impl<S: Scalar> IntegrationResult<S> {
    /// Rebuilds the form from the decomposition.
    pub fn reconstruct(&self) -> Result<OneForm<S>> {
        OneForm::log_exact(
            self.primitive.order(),
            &self.lambda,
            &self.mu,
            self.n,
            self.m,
            &self.primitive,
        )
    }
}

/// Splits a closed planar form with poles on the axes into residue terms and
/// an exact part. Terms `c x^a y^b dx` integrate to `c/(a+1) x^{a+1} y^b`;
/// the `x^0` terms of the primitive come from the `dy` part, and the rest of
/// the `dy` part must agree with the derivative of the result.
pub fn integrate_closed<S: Scalar>(w: &OneForm<S>) -> Result<IntegrationResult<S>> {
    let (p, q) = closed_laurent(w)?;
    let lambda = p.coeff(&[-1, 0]);
    let mu = q.coeff(&[0, -1]);
    let mut prim: Vec<(Vec<i64>, S)> = Vec::new();
    for (e, c) in p.terms() {
        if e[0] == -1 {
            continue;
        }
        prim.push((vec![e[0] + 1, e[1]], c.clone() / S::from_i64(e[0] + 1)));
    }
    for (e, c) in q.terms() {
        if e[0] == 0 && e[1] != -1 {
            prim.push((vec![0, e[1] + 1], c.clone() / S::from_i64(e[1] + 1)));
        }
    }
    let known = match (p.known_degree(), q.known_degree()) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => Some(a.min(b)),
    };
    let big_f = Laurent::from_terms(2, known.map(|k| k + 1), prim);
    // The dy part is a consistency check on the primitive.
    let residue_free = q.sub(&Laurent::from_terms(2, None, [(vec![0, -1], mu.clone())]));
    if !big_f.partial(1).eq_verified(&residue_free) {
        return Err(Error::Inconsistent(
            "dx and dy integrations disagree on a closed form".into(),
        ));
    }
    let n = big_f.terms().map(|(e, _)| -e[0]).max().unwrap_or(0).max(0);
    let m = big_f.terms().map(|(e, _)| -e[1]).max().unwrap_or(0).max(0);
    let shifted = big_f.shift(&[n, m]);
    let order = w.order();
    let primitive = Jet::from_terms(
        2,
        order,
        shifted.terms().map(|(e, c)| {
            (
                MultiIndex::new(e.iter().map(|&v| u32::try_from(v).expect("non-negative"))),
                c.clone(),
            )
        }),
    );
    Ok(IntegrationResult {
        lambda,
        mu,
        n: n as u32,
        m: m as u32,
        primitive,
        known_degree: shifted.known_degree(),
    })
}

fn check_pair<S: Scalar>(x1: &VectorField<S>, x2: &VectorField<S>) -> Result<()> {
    if x1.nvars() != 2 || x2.nvars() != 2 {
        return Err(Error::WrongDimension(2));
    }
    Ok(())
}

/// `Q = A₁B₂ − A₂B₁` for `X_j = A_j ∂/∂x + B_j ∂/∂y`.
pub fn frame_determinant<S: Scalar>(x1: &VectorField<S>, x2: &VectorField<S>) -> Result<Jet<S>> {
    check_pair(x1, x2)?;
    let (a1, b1) = (x1.component(0), x1.component(1));
    let (a2, b2) = (x2.component(0), x2.component(1));
    a1.try_mul(b2)?.try_sub(&a2.try_mul(b1)?)
}

/// The forms `ω₁ = (B₂ dx − A₂ dy)/Q` and `ω₂ = (−B₁ dx + A₁ dy)/Q` dual to
/// a commuting independent pair.
pub fn dual_closed_forms<S: Scalar>(
    x1: &VectorField<S>,
    x2: &VectorField<S>,
) -> Result<(OneForm<S>, OneForm<S>)> {
    let q = frame_determinant(x1, x2)?;
    if q.is_zero() {
        return Err(Error::DependentFields);
    }
    if !x1.bracket(x2)?.is_zero() {
        return Err(Error::NonzeroBracket);
    }
    let (a1, b1) = (x1.component(0), x1.component(1));
    let (a2, b2) = (x2.component(0), x2.component(1));
    let mk = |p: &Jet<S>, r: &Jet<S>| -> Result<OneForm<S>> {
        OneForm::new(vec![
            MeroJet::new(p.clone(), q.clone())?,
            MeroJet::new(r.clone(), q.clone())?,
        ])
    };
    Ok((mk(b2, &-a2)?, mk(&-b1, a1)?))
}

/// Both sides of the cancellation that makes the dual forms closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CancellationCertificate<S = Qi> {
    /// `Q²(∂D/∂x − ∂C/∂y)` for `ω = C dx + D dy`.
    pub numerator: Jet<S>,
    /// The same quantity written as a combination of the bracket equations.
    pub bracket_combination: Jet<S>,
    /// Whether the two agree in every degree below the jet order.
    pub holds: bool,
}

fn cancellation<S: Scalar>(
    xa: &VectorField<S>,
    xb: &VectorField<S>,
) -> Result<CancellationCertificate<S>> {
    let (aa, ba) = (xa.component(0), xa.component(1));
    let (ab, bb) = (xb.component(0), xb.component(1));
    let q = &(aa * bb) - &(ab * ba);
    let numerator = &(&(&(ab * &q.partial(0)?) - &(&q * &ab.partial(0)?))
        + &(bb * &q.partial(1)?))
        - &(&q * &bb.partial(1)?);
    let eq1 = &xb.apply(aa)? - &xa.apply(ab)?;
    let eq2 = &xa.apply(bb)? - &xb.apply(ba)?;
    let bracket_combination = &(bb * &eq1) + &(ab * &eq2);
    let top = numerator.order().saturating_sub(1);
    let holds = numerator.truncated(top) == bracket_combination.truncated(top);
    Ok(CancellationCertificate {
        numerator,
        bracket_combination,
        holds,
    })
}

/// Certificates for `ω₁` and `ω₂`; when the fields commute both bracket
/// combinations vanish, so both numerators do.
pub fn cancellation_certificates<S: Scalar>(
    x1: &VectorField<S>,
    x2: &VectorField<S>,
) -> Result<[CancellationCertificate<S>; 2]> {
    check_pair(x1, x2)?;
    Ok([cancellation(x1, x2)?, cancellation(x2, x1)?])
}

fn jet_ratio<S: Scalar>(a: &Jet<S>, b: &Jet<S>) -> Option<S> {
    let (k, c) = a.terms().next()?;
    let r = b.coeff(k) / c.clone();
    (a.scale(&r) == *b).then_some(r)
}

/// The fields dual to a pair of planar one-forms.
pub fn dual_frame<S: Scalar>(
    w1: &OneForm<S>,
    w2: &OneForm<S>,
) -> Result<(MeroField<S>, MeroField<S>)> {
    check_plane(w1)?;
    check_plane(w2)?;
    let all = [
        w1.coeff(0).clone(),
        w1.coeff(1).clone(),
        w2.coeff(0).clone(),
        w2.coeff(1).clone(),
    ];
    let (p, d) = common_den(&all);
    let det = p[0].mul(&p[3]).sub(&p[1].mul(&p[2]));
    if !det.is_known_nonzero() {
        return Err(Error::SingularCoefficients);
    }
    let fields = |a: PJet<S>, b: PJet<S>, c: PJet<S>, e: PJet<S>| {
        // X1 = D (p22, −p21)/det, X2 = D (−p12, p11)/det
        ([a.clone(), b.neg()], [c.neg(), e.clone()])
    };
    let (c1, c2) = fields(p[3].clone(), p[2].clone(), p[1].clone(), p[0].clone());
    // When det = r·D the common factor cancels exactly.
    if let Some(r) = jet_ratio(d.jet(), det.jet()) {
        let rinv = r.inv().expect("nonzero ratio");
        let one = PJet::exact(Jet::one(2, w1.order()));
        let mk = |c: &[PJet<S>; 2]| -> Result<MeroField<S>> {
            Ok(MeroField::new(vec![
                MeroJet::from_parts(c[0].scale(&rinv), one.clone())?,
                MeroJet::from_parts(c[1].scale(&rinv), one.clone())?,
            ]))
        };
        return Ok((mk(&c1)?, mk(&c2)?));
    }
    let mk = |c: &[PJet<S>; 2]| -> Result<MeroField<S>> {
        Ok(MeroField::new(vec![
            MeroJet::from_parts(c[0].mul(&d), det.clone())?,
            MeroJet::from_parts(c[1].mul(&d), det.clone())?,
        ]))
    };
    Ok((mk(&c1)?, mk(&c2)?))
}
