//! Finitely generated subgroups of the jet group: exact checks where the
//! question is decidable from generators, bounded witness searches
//! elsewhere.
//!
//! Words are enumerated breadth-first over the free group on the generators
//! and hash-consed on their order-`N` jets. A refutation always carries a
//! word that evaluates to a non-identity jet; "no witness" is reported as
//! [`Verdict::Inconclusive`] unless an exact argument applies.

use std::cell::OnceCell;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::Hash;

use crate::diffeo::{Diffeo, TangencyOrder};
use crate::error::{Error, Result};
use crate::field::VectorField;
use crate::forms::frame_determinant;
use crate::jet::MultiIndex;
use crate::linalg::{EchelonBasis, Matrix};
use crate::scalar::Scalar;

/// A word over the generators, kept as a tree so commutators print as such.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Word {
    Gen(usize),
    Inv(Box<Word>),
    Mul(Box<Word>, Box<Word>),
    Comm(Box<Word>, Box<Word>),
}

impl Word {
    pub fn gen(i: usize) -> Self {
        Word::Gen(i)
    }

    pub fn inv(self) -> Self {
        match self {
            Word::Inv(w) => *w,
            w => Word::Inv(Box::new(w)),
        }
    }

    pub fn mul(self, o: Word) -> Self {
        Word::Mul(Box::new(self), Box::new(o))
    }

    pub fn comm(self, o: Word) -> Self {
        Word::Comm(Box::new(self), Box::new(o))
    }

    /// Number of generator letters after expanding commutators.
    pub fn letters(&self) -> usize {
        match self {
            Word::Gen(_) => 1,
            Word::Inv(w) => w.letters(),
            Word::Mul(a, b) => a.letters() + b.letters(),
            Word::Comm(a, b) => 2 * (a.letters() + b.letters()),
        }
    }

    /// `a*b` is `a∘b` and `[a, b]` is `a∘b∘a⁻¹∘b⁻¹`.
    pub fn eval<S: Scalar>(&self, gens: &[Diffeo<S>]) -> Result<Diffeo<S>> {
        Ok(match self {
            Word::Gen(i) => gens
                .get(*i)
                .cloned()
                .ok_or_else(|| Error::InvalidParameter(format!("no generator {i}")))?,
            Word::Inv(w) => w.eval(gens)?.inverse(),
            Word::Mul(a, b) => a.eval(gens)?.compose(&b.eval(gens)?)?,
            Word::Comm(a, b) => a.eval(gens)?.commutator(&b.eval(gens)?)?,
        })
    }

    pub fn render(&self, names: &[String]) -> String {
        match self {
            Word::Gen(i) => names
                .get(*i)
                .cloned()
                .unwrap_or_else(|| format!("g{}", i + 1)),
            Word::Inv(w) => match **w {
                Word::Gen(_) | Word::Comm(..) => format!("{}^-1", w.render(names)),
                _ => format!("({})^-1", w.render(names)),
            },
            Word::Mul(a, b) => format!("{}*{}", a.render(names), b.render(names)),
            Word::Comm(a, b) => format!("[{}, {}]", a.render(names), b.render(names)),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Verdict {
    Proved,
    Refuted,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Proved => "proved",
            Verdict::Refuted => "refuted",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Certificate {
    pub verdict: Verdict,
    pub witness: Option<Word>,
    /// Tangency order of the evaluated witness.
    pub witness_order: Option<TangencyOrder>,
    pub detail: Vec<String>,
}

impl Certificate {
    pub fn proved(detail: impl Into<String>) -> Self {
        Certificate {
            verdict: Verdict::Proved,
            witness: None,
            witness_order: None,
            detail: vec![detail.into()],
        }
    }

    pub fn inconclusive(detail: impl Into<String>) -> Self {
        Certificate {
            verdict: Verdict::Inconclusive,
            witness: None,
            witness_order: None,
            detail: vec![detail.into()],
        }
    }

    pub fn refuted(w: Word, order: TangencyOrder, detail: impl Into<String>) -> Self {
        Certificate {
            verdict: Verdict::Refuted,
            witness: Some(w),
            witness_order: Some(order),
            detail: vec![detail.into()],
        }
    }

    fn note(mut self, s: impl Into<String>) -> Self {
        self.detail.push(s.into());
        self
    }
}

/// Generators plus the search bounds.
#[derive(Clone, Debug)]
pub struct GroupSpec<S> {
    pub generators: Vec<Diffeo<S>>,
    pub names: Vec<String>,
    /// Longest generator word enumerated.
    pub word_bound: usize,
    /// Deepest level of the derived and lower central series probed.
    pub depth_bound: usize,
    /// Most distinct elements kept at any level of a search.
    pub element_cap: usize,
}

impl<S: Scalar> GroupSpec<S> {
    pub fn new(generators: Vec<Diffeo<S>>) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::InvalidParameter("empty generator list".into()));
        };
        for g in &generators[1..] {
            if g.nvars() != first.nvars() {
                return Err(Error::DimensionMismatch {
                    left: first.nvars(),
                    right: g.nvars(),
                });
            }
            if g.order() != first.order() {
                return Err(Error::OrderMismatch {
                    left: first.order(),
                    right: g.order(),
                });
            }
        }
        let names = (1..=generators.len()).map(|i| format!("g{i}")).collect();
        Ok(GroupSpec {
            generators,
            names,
            word_bound: 4,
            depth_bound: 3,
            element_cap: 48,
        })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.generators.len());
        self.names = names;
        self
    }

    pub fn with_bounds(mut self, word_bound: usize, depth_bound: usize) -> Self {
        self.word_bound = word_bound;
        self.depth_bound = depth_bound;
        self
    }

    pub fn with_element_cap(mut self, cap: usize) -> Self {
        self.element_cap = cap;
        self
    }

    pub fn nvars(&self) -> usize {
        self.generators[0].nvars()
    }

    pub fn order(&self) -> u32 {
        self.generators[0].order()
    }

    pub fn render(&self, w: &Word) -> String {
        w.render(&self.names)
    }
}

/// The matrix of `[h] ↦ [h∘f]` on the monomials of degrees `1..=N`, in the
/// graded order. Columns are images. Since `h∘(f∘g) = (h∘f)∘g`, the map is
/// an anti-homomorphism: `M(f∘g) = M(g)·M(f)`.
pub fn jet_matrix<S: Scalar>(f: &Diffeo<S>) -> Matrix<S> {
    let n = f.nvars();
    let order = f.order();
    let basis = MultiIndex::all_in_degrees(n, 1, order);
    let pos: HashMap<&MultiIndex, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut m = Matrix::zero(basis.len(), basis.len());
    for (j, b) in basis.iter().enumerate() {
        let img = crate::jet::Jet::monomial(n, order, b.clone(), S::one())
            .compose_unchecked(f.components());
        for (k, c) in img.terms() {
            m.set(pos[k], j, c.clone());
        }
    }
    m
}

/// A group element with its word and a cached inverse.
#[derive(Clone, Debug)]
pub struct Element<S> {
    pub word: Word,
    pub map: Diffeo<S>,
    inv: OnceCell<Diffeo<S>>,
}

impl<S: Scalar> Element<S> {
    fn new(word: Word, map: Diffeo<S>) -> Self {
        let inv = OnceCell::from(map.inverse());
        Element { word, map, inv }
    }

    fn with_inverse(word: Word, map: Diffeo<S>, inv: Diffeo<S>) -> Self {
        Element {
            word,
            map,
            inv: OnceCell::from(inv),
        }
    }

    fn inv(&self) -> &Diffeo<S> {
        self.inv.get_or_init(|| self.map.inverse())
    }

    fn commutator(&self, o: &Self) -> Self {
        let map = self.commutator_map(o);
        self.commutator_from(o, map)
    }

    fn commutator_map(&self, o: &Self) -> Diffeo<S> {
        let c = |a: &Diffeo<S>, b: &Diffeo<S>| a.compose(b).expect("same shape");
        c(&c(&self.map, &o.map), &c(self.inv(), o.inv()))
    }

    /// `[self, o]` from its map; the inverse is computed on first use.
    fn commutator_from(&self, o: &Self, map: Diffeo<S>) -> Self {
        Element {
            word: self.word.clone().comm(o.word.clone()),
            map,
            inv: OnceCell::new(),
        }
    }
}

/// Distinct non-identity elements given by reduced words of length at most
/// `word_bound`, in breadth-first order, at most `element_cap` of them.
pub fn enumerate<S: Scalar + Hash + Eq>(spec: &GroupSpec<S>) -> Vec<Element<S>> {
    let gens: Vec<Element<S>> = spec
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| Element::new(Word::gen(i), g.clone()))
        .collect();
    // Letters: 2i is generator i, 2i+1 its inverse.
    let letter = |l: usize| -> (Word, &Diffeo<S>, &Diffeo<S>) {
        let g = &gens[l / 2];
        if l % 2 == 0 {
            (g.word.clone(), &g.map, g.inv())
        } else {
            (g.word.clone().inv(), g.inv(), &g.map)
        }
    };
    let id = Diffeo::identity(spec.nvars(), spec.order());
    let mut seen: HashSet<Diffeo<S>> = HashSet::from([id.clone()]);
    let mut out = Vec::new();
    let mut frontier: Vec<(Option<usize>, Element<S>)> = vec![(
        None,
        Element::with_inverse(Word::gen(usize::MAX), id.clone(), id),
    )];
    for len in 1..=spec.word_bound {
        let mut next = Vec::new();
        for (last, e) in &frontier {
            for l in 0..2 * gens.len() {
                if last.is_some_and(|p| p ^ 1 == l) {
                    continue;
                }
                let (w, m, mi) = letter(l);
                let map = e.map.compose(m).expect("same shape");
                if !seen.insert(map.clone()) {
                    continue;
                }
                let word = if len == 1 { w } else { e.word.clone().mul(w) };
                let inv = mi.compose(e.inv()).expect("same shape");
                let el = Element::with_inverse(word, map, inv);
                out.push(el.clone());
                if out.len() >= spec.element_cap {
                    return out;
                }
                next.push((Some(l), el));
            }
        }
        frontier = next;
    }
    out
}

fn refute<S: Scalar>(e: &Element<S>, what: &str) -> Certificate {
    Certificate::refuted(e.word.clone(), e.map.tangency_order(), what)
}

/// Exact: the generated group is abelian iff the generators commute.
pub fn is_abelian<S: Scalar>(spec: &GroupSpec<S>) -> Result<Certificate> {
    let g = &spec.generators;
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            let c = g[i].commutator(&g[j])?;
            if !c.is_identity() {
                let w = Word::gen(i).comm(Word::gen(j));
                return Ok(Certificate::refuted(
                    w,
                    c.tangency_order(),
                    format!("{} and {} do not commute", spec.names[i], spec.names[j]),
                ));
            }
        }
    }
    Ok(Certificate::proved("all generators commute pairwise"))
}

/// A tangent-to-identity generator whose generator field is regular
/// dicritic, with that field.
pub fn regular_dicritic_generator<S: Scalar>(
    spec: &GroupSpec<S>,
) -> Result<Option<(usize, VectorField<S>)>> {
    for (i, g) in spec.generators.iter().enumerate() {
        if !matches!(g.tangency_order(), TangencyOrder::Order(_)) {
            continue;
        }
        let x = g.log()?;
        if x.is_regular_dicritic() {
            return Ok(Some((i, x)));
        }
    }
    Ok(None)
}

/// Like [`regular_dicritic_generator`], falling back to the enumerated
/// tangent-to-identity words.
pub fn regular_dicritic_element<S: Scalar + Hash + Eq>(
    spec: &GroupSpec<S>,
) -> Result<Option<(Word, VectorField<S>)>> {
    if let Some((i, x)) = regular_dicritic_generator(spec)? {
        return Ok(Some((Word::gen(i), x)));
    }
    for e in enumerate(spec) {
        if e.map.is_tangent_to_identity() {
            let x = e.map.log()?;
            if x.is_regular_dicritic() {
                return Ok(Some((e.word, x)));
            }
        }
    }
    Ok(None)
}

/// Factors `c_g` with `g_*X = c_g X` for every generator, or the index of
/// the first generator without one.
pub fn projective_factors<S: Scalar>(
    spec: &GroupSpec<S>,
    x: &VectorField<S>,
) -> Result<std::result::Result<Vec<S>, usize>> {
    let mut out = Vec::new();
    for (i, g) in spec.generators.iter().enumerate() {
        match g.projective_factor(x)? {
            Some(c) => out.push(c),
            None => return Ok(Err(i)),
        }
    }
    Ok(Ok(out))
}

/// Search for non-commuting tangent-to-identity elements, without using
/// any criterion beyond the enumeration itself.
fn quasi_abelian_search<S: Scalar + Hash + Eq>(spec: &GroupSpec<S>) -> Result<Certificate> {
    if spec.generators.iter().all(Diffeo::is_tangent_to_identity) {
        return Ok(is_abelian(spec)?.note("every generator is tangent to the identity"));
    }
    let tangent: Vec<Element<S>> = enumerate(spec)
        .into_iter()
        .filter(|e| e.map.is_tangent_to_identity())
        .collect();
    for i in 0..tangent.len() {
        for j in i + 1..tangent.len() {
            let m = tangent[i].commutator_map(&tangent[j]);
            if !m.is_identity() {
                let c = tangent[i].commutator_from(&tangent[j], m);
                return Ok(refute(
                    &c,
                    "two tangent-to-identity elements do not commute",
                ));
            }
        }
    }
    Ok(Certificate::inconclusive(format!(
        "{} tangent-to-identity elements within word length {} commute (at most {} elements enumerated)",
        tangent.len(),
        spec.word_bound,
        spec.element_cap
    )))
}

/// Whether the tangent-to-identity subgroup is abelian.
///
/// Exact when every generator is tangent to the identity. Otherwise a
/// non-commuting pair of enumerated tangent elements refutes; and a proof
/// is given when a tangent generator has a regular dicritic generator field
/// that every generator rescales.
pub fn is_quasi_abelian<S: Scalar + Hash + Eq>(spec: &GroupSpec<S>) -> Result<Certificate> {
    let search = quasi_abelian_search(spec)?;
    if search.verdict != Verdict::Inconclusive {
        return Ok(search);
    }
    if let Some((i, x)) = regular_dicritic_generator(spec)? {
        if projective_factors(spec, &x)?.is_ok() {
            return Ok(Certificate::proved(format!(
                "the generator field of {} is regular dicritic and projectively invariant",
                spec.names[i]
            ))
            .note(search.detail[0].clone()));
        }
    }
    Ok(search)
}

/// Nontrivial commutators `[a, b]` over pairs from `left × right`, deduplicated.
fn commutator_pool<S: Scalar + Hash + Eq>(
    left: &[Element<S>],
    right: &[Element<S>],
    same: bool,
    cap: usize,
) -> Vec<Element<S>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, a) in left.iter().enumerate() {
        let start = if same { i + 1 } else { 0 };
        for b in &right[start.min(right.len())..] {
            let m = a.commutator_map(b);
            if m.is_identity() || !seen.insert(m.clone()) {
                continue;
            }
            out.push(a.commutator_from(b, m));
            if out.len() >= cap {
                return out;
            }
        }
    }
    out
}

/// The element of least tangency order, first in search order on ties.
fn lowest<S: Scalar>(pool: &[Element<S>]) -> Option<&Element<S>> {
    pool.iter().min_by_key(|e| e.map.tangency_order())
}

/// For each depth `d = 1..=depth_bound`, a certificate for `G^(d) = {Id}`.
///
/// Level 0 is the enumerated words; level `d` holds the distinct commutators
/// of pairs from level `d−1`. A nontrivial element at level `d` refutes;
/// the reported witness has the least tangency order found, so along a
/// tangent-to-identity group the witness orders strictly increase.
pub fn derived_series_probe<S: Scalar + Hash + Eq>(
    spec: &GroupSpec<S>,
) -> Result<Vec<Certificate>> {
    let abelian = is_abelian(spec)?.verdict == Verdict::Proved;
    let mut pool = enumerate(spec);
    let mut out = Vec::new();
    for d in 1..=spec.depth_bound {
        if abelian {
            out.push(Certificate::proved("the generators commute"));
            continue;
        }
        pool = commutator_pool(&pool, &pool, true, spec.element_cap);
        out.push(match lowest(&pool) {
            Some(e) => refute(e, &format!("nontrivial element of derived subgroup {d}")),
            None => Certificate::inconclusive(format!(
                "no nontrivial commutator at depth {d} from words of length at most {} (at most {} elements per level)",
                spec.word_bound, spec.element_cap
            )),
        });
    }
    Ok(out)
}

/// For each depth `d = 1..=depth_bound`, a certificate for `C^(d+1) G = {Id}`
/// where `C^1 G = G` and `C^(d+1) G = [G, C^d G]`.
pub fn lower_central_probe<S: Scalar + Hash + Eq>(spec: &GroupSpec<S>) -> Result<Vec<Certificate>> {
    let abelian = is_abelian(spec)?.verdict == Verdict::Proved;
    let base = enumerate(spec);
    let mut pool = base.clone();
    let mut out = Vec::new();
    for d in 1..=spec.depth_bound {
        if abelian {
            out.push(Certificate::proved("the generators commute"));
            continue;
        }
        pool = commutator_pool(&base, &pool, false, spec.element_cap);
        out.push(match lowest(&pool) {
            Some(e) => refute(e, &format!("nontrivial element of central term {}", d + 1)),
            None => Certificate::inconclusive(format!(
                "no nontrivial commutator at depth {d} from words of length at most {} (at most {} elements per level)",
                spec.word_bound, spec.element_cap
            )),
        });
    }
    Ok(out)
}

/// `f₁, f₂, f₃ = [f₁, f₂], …, f_n = [f_{n−1}, f_{n−2}]` until a term is the
/// identity at the jet order (included as the last entry).
pub fn commutator_chain<S: Scalar>(
    f1: &Diffeo<S>,
    f2: &Diffeo<S>,
) -> Result<Vec<(Word, TangencyOrder)>> {
    let a = Element::new(Word::gen(0), f1.clone());
    let b = Element::new(Word::gen(1), f2.clone());
    let mut out = vec![
        (a.word.clone(), a.map.tangency_order()),
        (b.word.clone(), b.map.tangency_order()),
    ];
    let (mut prev, mut cur) = (a, b);
    let limit = 2 * f1.order() as usize + 4;
    for _ in 0..limit {
        if cur.map.is_identity() || prev.map.is_identity() {
            break;
        }
        let next = cur.commutator(&prev);
        out.push((next.word.clone(), next.map.tangency_order()));
        prev = cur;
        cur = next;
    }
    Ok(out)
}

/// Both sides of an equivalence evaluated at the bounds.
#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub sides: Vec<(String, Certificate)>,
    /// Whether the sides agree, treating "no witness" as true.
    pub agree: bool,
}

fn holds(c: &Certificate) -> bool {
    c.verdict != Verdict::Refuted
}

/// Quasi-abelian vs. projective invariance of the generator field of a
/// regular dicritic element (a generator if possible). Contradicting exact verdicts are an error.
pub fn projective_equivalence_check<S: Scalar + Hash + Eq>(
    spec: &GroupSpec<S>,
) -> Result<EquivalenceReport> {
    let (word, x) = regular_dicritic_element(spec)?.ok_or_else(|| {
        Error::Precondition("no element with a regular dicritic generator field".into())
    })?;
    let name = spec.render(&word);
    let qa = quasi_abelian_search(spec)?;
    let proj = match projective_factors(spec, &x)? {
        Ok(cs) => Certificate::proved(format!(
            "factors on the generator field of {}: {}",
            name,
            cs.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        )),
        Err(j) => Certificate::refuted(
            Word::gen(j),
            spec.generators[j].tangency_order(),
            format!(
                "{} does not rescale the generator field of {}",
                spec.names[j], name
            ),
        ),
    };
    let agree = holds(&qa) == holds(&proj);
    if !agree && qa.verdict != Verdict::Inconclusive {
        return Err(Error::Inconsistent(
            "quasi-abelian verdict contradicts projective invariance".into(),
        ));
    }
    Ok(EquivalenceReport {
        sides: vec![
            ("quasi-abelian".into(), qa),
            ("projectively invariant".into(), proj),
        ],
        agree,
    })
}

/// Abelian vs. every nontrivial element having the tangency order of a
/// dicritic generator, plus a lower central series probe.
pub fn uniform_order_equivalence_check<S: Scalar + Hash + Eq>(
    spec: &GroupSpec<S>,
) -> Result<EquivalenceReport> {
    if !spec.generators.iter().all(Diffeo::is_tangent_to_identity) {
        return Err(Error::Precondition(
            "every generator must be tangent to the identity".into(),
        ));
    }
    let (di, k) = spec
        .generators
        .iter()
        .enumerate()
        .find_map(|(i, g)| match (g.is_dicritic(), g.tangency_order()) {
            (true, TangencyOrder::Order(k)) => Some((i, k)),
            _ => None,
        })
        .ok_or_else(|| Error::Precondition("no dicritic generator".into()))?;
    let abelian = is_abelian(spec)?;
    // Every generator in one flow of the dicritic generator's field makes
    // every nontrivial element exp(tX), t ≠ 0, whose order is exactly k.
    let x = spec.generators[di].log()?;
    let mut in_flow = true;
    for g in &spec.generators {
        if g.flow_membership(&x)?.is_none() {
            in_flow = false;
            break;
        }
    }
    let uniform = if in_flow {
        Certificate::proved(format!(
            "every generator lies in the flow of the generator field of {}",
            spec.names[di]
        ))
    } else {
        let bad = enumerate(spec)
            .into_iter()
            .find(|e| e.map.tangency_order() != TangencyOrder::Order(k));
        match bad {
            Some(e) => refute(&e, &format!("tangency order differs from {k}")),
            None => Certificate::inconclusive(format!(
                "all enumerated elements have tangency order {k}"
            )),
        }
    };
    let central = lower_central_probe(spec)?;
    let nilpotent = match central.iter().position(|c| c.verdict != Verdict::Refuted) {
        _ if abelian.verdict == Verdict::Proved => Certificate::proved("abelian"),
        Some(d) => central[d].clone(),
        None => {
            let last = central.last().cloned();
            Certificate::inconclusive(format!(
                "nontrivial lower central terms through depth {}",
                spec.depth_bound
            ))
            .note(
                last.and_then(|c| c.witness)
                    .map(|w| format!("deepest witness {}", spec.render(&w)))
                    .unwrap_or_default(),
            )
        }
    };
    let agree = holds(&abelian) == holds(&uniform);
    if !agree && uniform.verdict != Verdict::Inconclusive {
        return Err(Error::Inconsistent(
            "abelian verdict contradicts the tangency-order verdict".into(),
        ));
    }
    Ok(EquivalenceReport {
        sides: vec![
            ("abelian".into(), abelian),
            (format!("uniform tangency order {k}"), uniform),
            ("nilpotent".into(), nilpotent),
        ],
        agree,
    })
}

/// The scalar `λ` with `h = λ·Id`, if `h` is a homothety.
pub fn homothety_ratio<S: Scalar>(h: &Diffeo<S>) -> Option<S> {
    let a = h.linear_part();
    let l = a.get(0, 0).clone();
    let lin = Diffeo::homothety(h.nvars(), h.order(), &l).ok()?;
    (lin == *h).then_some(l)
}

/// Metabelian certificate for `⟨f, λ·Id⟩` with `f` dicritic and tangent to
/// the identity: `[f, h²]` and `[f², h]` must commute with `[f, h]`, and the
/// generator field of `[f, h]` must be rescaled by `f` and `h`.
pub fn metabelian_criterion_check<S: Scalar>(f: &Diffeo<S>, h: &Diffeo<S>) -> Result<Certificate> {
    let TangencyOrder::Order(k) = f.tangency_order() else {
        return Err(Error::Precondition(
            "f must be tangent to the identity and nontrivial".into(),
        ));
    };
    if !f.is_dicritic() {
        return Err(Error::Precondition("f is not dicritic".into()));
    }
    let lambda =
        homothety_ratio(h).ok_or_else(|| Error::Precondition("h is not a homothety".into()))?;
    let regular = f.is_regular_dicritic();
    let reg_note = format!("f regular dicritic: {regular}");
    if lambda.is_one() {
        return Ok(Certificate::proved("h is the identity, so the group is cyclic").note(reg_note));
    }
    let lk = lambda.powi(k.into()).expect("nonzero");
    if lk.is_one() || (lk.clone() * lambda.clone()).is_one() {
        return Err(Error::Precondition(format!(
            "lambda^{k} or lambda^{} equals 1",
            k + 1
        )));
    }
    let names = ["f".to_string(), "h".to_string()];
    let (wf, wh) = (Word::gen(0), Word::gen(1));
    let c1 = f.commutator(h)?;
    let c2 = f.commutator(&h.compose(h)?)?;
    let c3 = f.compose(f)?.commutator(h)?;
    let w1 = wf.clone().comm(wh.clone());
    let w2 = wf.clone().comm(wh.clone().mul(wh.clone()));
    let w3 = wf.clone().mul(wf).comm(wh);
    for (c, w) in [(&c2, w2), (&c3, w3)] {
        let d = c.commutator(&c1)?;
        if !d.is_identity() {
            let w = w.comm(w1.clone());
            return Ok(Certificate::refuted(
                w.clone(),
                d.tangency_order(),
                format!("{} is nontrivial", w.render(&names)),
            )
            .note(reg_note));
        }
    }
    if c1.is_identity() {
        return Ok(Certificate::proved("f and h commute").note(reg_note));
    }
    let x = c1.log()?;
    match (f.projective_factor(&x)?, h.projective_factor(&x)?) {
        (Some(a), Some(b)) => Ok(Certificate::proved(format!(
            "the generator field of [f, h] is rescaled by f ({a}) and h ({b})"
        ))
        .note(reg_note)),
        _ => Ok(Certificate::inconclusive(
            "commutation conditions hold but the generator field of [f, h] is not projectively invariant",
        )
        .note(reg_note)),
    }
}

/// Coordinates of a field on the basis (component, monomial of degree ≤ N).
fn field_coords<S: Scalar>(x: &VectorField<S>) -> Vec<S> {
    let n = x.nvars();
    let basis = MultiIndex::all_in_degrees(n, 0, x.order());
    x.components()
        .iter()
        .flat_map(|c| basis.iter().map(move |m| c.coeff(m)))
        .collect()
}

/// The constants with `g_*X = s₁X + t₁Y` and `g_*Y = s₂X + t₂Y`, as
/// `[[s₁, t₁], [s₂, t₂]]`, when they exist.
pub fn metabelian_transform_matrix<S: Scalar>(
    g: &Diffeo<S>,
    x: &VectorField<S>,
    y: &VectorField<S>,
) -> Result<Option<Matrix<S>>> {
    if frame_determinant(x, y)?.is_zero() {
        return Err(Error::DependentFields);
    }
    if !x.bracket(y)?.is_zero() {
        return Err(Error::NonzeroBracket);
    }
    let cx = field_coords(x);
    let cy = field_coords(y);
    let a = Matrix::from_rows(
        cx.iter()
            .zip(&cy)
            .map(|(p, q)| vec![p.clone(), q.clone()])
            .collect(),
    );
    let mut rows = Vec::new();
    for f in [x, y] {
        let img = field_coords(&g.pushforward(f)?);
        match a.solve(&img) {
            Some(st) => rows.push(st),
            None => return Ok(None),
        }
    }
    Ok(Some(Matrix::from_rows(rows)))
}

/// A basis of the Lie algebra generated by some fields, truncated at the
/// jet order.
#[derive(Clone, Debug)]
pub struct LieSpan<S> {
    pub basis: Vec<VectorField<S>>,
    /// Rounds of bracketing needed before the span stopped growing.
    pub closure_depth: usize,
}

fn span_of<S: Scalar>(
    fields: impl IntoIterator<Item = VectorField<S>>,
    dim: usize,
    cap: usize,
) -> Result<(EchelonBasis<S>, Vec<VectorField<S>>)> {
    let mut ech = EchelonBasis::new(dim);
    let mut basis = Vec::new();
    for f in fields {
        if ech.insert(&field_coords(&f)) {
            basis.push(f);
            if basis.len() > cap {
                return Err(Error::ClosureTooLarge(cap));
            }
        }
    }
    Ok((ech, basis))
}

/// Closes `fields` under the bracket. Every field must have zero constant
/// term and nilpotent linear part, so brackets commute with truncation.
pub fn lie_closure<S: Scalar>(fields: &[VectorField<S>], cap: usize) -> Result<LieSpan<S>> {
    let Some(first) = fields.first() else {
        return Ok(LieSpan {
            basis: Vec::new(),
            closure_depth: 0,
        });
    };
    for f in fields {
        f.check_exp_defined()?;
        first.component(0).check_compatible(f.component(0))?;
    }
    let dim = field_coords(first).len();
    let (mut ech, mut basis) = span_of(fields.iter().cloned(), dim, cap)?;
    let mut fresh = 0;
    let mut depth = 0;
    while fresh < basis.len() {
        let end = basis.len();
        let mut added = false;
        for i in fresh..end {
            for j in 0..i {
                let b = basis[j].bracket(&basis[i])?;
                if ech.insert(&field_coords(&b)) {
                    basis.push(b);
                    added = true;
                    if basis.len() > cap {
                        return Err(Error::ClosureTooLarge(cap));
                    }
                }
            }
        }
        fresh = end;
        if added {
            depth += 1;
        }
    }
    Ok(LieSpan {
        basis,
        closure_depth: depth,
    })
}

impl<S: Scalar> LieSpan<S> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Least `l` with the `l`-th derived algebra zero; `None` if the derived
    /// series stabilizes at a nonzero algebra.
    pub fn derived_length(&self) -> Result<Option<usize>> {
        let mut cur = self.basis.clone();
        let mut len = 0;
        while !cur.is_empty() {
            let dim = field_coords(&cur[0]).len();
            let mut brackets = Vec::new();
            for i in 0..cur.len() {
                for j in i + 1..cur.len() {
                    brackets.push(cur[i].bracket(&cur[j])?);
                }
            }
            let (_, next) = span_of(brackets, dim, usize::MAX)?;
            if next.len() == cur.len() {
                return Ok(None);
            }
            cur = next;
            len += 1;
        }
        Ok(Some(len))
    }
}

/// Derived length of the truncated Lie algebra generated by `fields`.
pub fn lie_derived_length<S: Scalar>(span: &LieSpan<S>) -> Result<Option<usize>> {
    span.derived_length()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::xy::{poly, x, y};
    use crate::scalar::Qi;
    use num_traits::One;

    type D = Diffeo<Qi>;
    type F = VectorField<Qi>;

    fn field(n: u32, a: &[(i64, u32, u32)], b: &[(i64, u32, u32)]) -> F {
        F::new(vec![poly(n, a), poly(n, b)]).unwrap()
    }

    fn linear(n: u32, rows: [[i64; 2]; 2]) -> D {
        D::linear(
            &Matrix::from_rows(
                rows.iter()
                    .map(|r| r.iter().map(|&v| Qi::int(v)).collect())
                    .collect(),
            ),
            n,
        )
        .unwrap()
    }

    #[test]
    fn jet_matrix_is_anti_homomorphism() {
        let n = 4;
        let f = D::new(vec![
            poly(n, &[(1, 1, 0), (1, 0, 2)]),
            poly(n, &[(2, 0, 1), (1, 2, 0)]),
        ])
        .unwrap();
        let g = D::new(vec![
            poly(n, &[(1, 1, 0), (-1, 1, 1)]),
            poly(n, &[(1, 0, 1), (3, 3, 0)]),
        ])
        .unwrap();
        let fg = f.compose(&g).unwrap();
        assert_eq!(jet_matrix(&fg), jet_matrix(&g).mul(&jet_matrix(&f)));
        assert!(jet_matrix(&D::identity(2, n)).is_identity());
        let u = field(n, &[(1, 2, 0)], &[(1, 1, 1)]).exp().unwrap();
        let m = jet_matrix(&u);
        assert!(m.sub(&Matrix::identity(m.rows())).is_nilpotent());
    }

    #[test]
    fn linear_pair_is_not_abelian() {
        let n = 5;
        let f = linear(n, [[2, 0], [0, 4]]);
        let g = linear(n, [[1, 0], [1, 1]]);
        let spec = GroupSpec::new(vec![f, g]).unwrap();
        let c = is_abelian(&spec).unwrap();
        assert_eq!(c.verdict, Verdict::Refuted);
        let w = c.witness.unwrap();
        assert_eq!(spec.render(&w), "[g1, g2]");
        assert!(!w.eval(&spec.generators).unwrap().is_identity());
    }

    #[test]
    fn enumeration_dedups() {
        let n = 4;
        let f = field(n, &[(1, 2, 0)], &[]).exp().unwrap();
        let spec = GroupSpec::new(vec![f.clone(), f])
            .unwrap()
            .with_bounds(3, 1);
        let els = enumerate(&spec);
        // f^±1, f^±2, f^±3
        assert_eq!(els.len(), 6);
        for e in &els {
            assert_eq!(e.word.eval(&spec.generators).unwrap(), e.map);
        }
    }

    #[test]
    fn fibonacci_chain() {
        let n = 10;
        let f1 = F::scaled_radial(&x(n)).exp().unwrap();
        let f2 = F::scaled_radial(&(&x(n) * &y(n))).exp().unwrap();
        let chain = commutator_chain(&f1, &f2).unwrap();
        let orders: Vec<_> = chain.iter().map(|(_, o)| *o).collect();
        use TangencyOrder::*;
        assert_eq!(
            orders,
            vec![Order(1), Order(2), Order(3), Order(5), Order(8), Identity]
        );
    }

    #[test]
    fn lie_lengths() {
        let n = 8;
        let a = field(n, &[(1, 2, 0)], &[]);
        let b = field(n, &[], &[(1, 2, 0)]);
        let span = lie_closure(&[a.clone(), b], 200).unwrap();
        assert_eq!(span.derived_length().unwrap(), Some(2));
        let single = lie_closure(&[a], 10).unwrap();
        assert_eq!(single.derived_length().unwrap(), Some(1));
        assert!(lie_closure(&[field(n, &[(1, 1, 0)], &[])], 10).is_err());
    }

    #[test]
    fn transform_matrix() {
        let n = 6;
        let xf = field(n, &[(1, 2, 0)], &[]);
        let yf = field(n, &[], &[(1, 0, 2)]);
        let h = D::homothety(2, n, &Qi::int(2)).unwrap();
        let m = metabelian_transform_matrix(&h, &xf, &yf).unwrap().unwrap();
        let c = Qi::ratio(1, 2);
        assert_eq!(
            m,
            Matrix::from_rows(vec![vec![c.clone(), Qi::int(0)], vec![Qi::int(0), c]])
        );
        let swap = linear(n, [[0, 1], [1, 0]]);
        let m = metabelian_transform_matrix(&swap, &xf, &yf)
            .unwrap()
            .unwrap();
        assert_eq!(
            m,
            Matrix::from_rows(vec![
                vec![Qi::int(0), Qi::one()],
                vec![Qi::one(), Qi::int(0)]
            ])
        );
        let shear = linear(n, [[1, 0], [1, 1]]);
        assert!(metabelian_transform_matrix(&shear, &xf, &yf)
            .unwrap()
            .is_none());
    }
}
