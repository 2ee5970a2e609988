use jetform::groups::*;
use jetform::jet::xy::{poly, x, y};
use jetform::sample;
use jetform::{Diffeo, Error, Jet, Matrix, MultiIndex, Qi, TangencyOrder, VectorField};
use num_traits::{One, Zero};

type D = Diffeo<Qi>;
type F = VectorField<Qi>;

fn field(n: u32, a: &[(i64, u32, u32)], b: &[(i64, u32, u32)]) -> F {
    F::new(vec![poly(n, a), poly(n, b)]).unwrap()
}

fn spec(gens: Vec<D>) -> GroupSpec<Qi> {
    GroupSpec::new(gens).unwrap()
}

fn linear(n: u32, rows: [[i64; 2]; 2]) -> D {
    let m = Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&v| Qi::int(v)).collect())
            .collect(),
    );
    D::linear(&m, n).unwrap()
}

/// `xR + y³∂x` is regular dicritic and `diag(i, −1)` rescales it by `−i`.
fn rescaled_regular(n: u32) -> (F, D) {
    let xf = F::scaled_radial(&x(n))
        .try_add(&field(n, &[(1, 0, 3)], &[]))
        .unwrap();
    let m = Matrix::from_rows(vec![
        vec![Qi::i(), Qi::zero()],
        vec![Qi::zero(), Qi::int(-1)],
    ]);
    (xf, D::linear(&m, n).unwrap())
}

#[test]
fn linear_and_tangent_pairs_are_invariant_but_not_abelian() {
    let n = 8;
    let f = linear(n, [[2, 0], [0, 4]]);
    let g = linear(n, [[1, 0], [1, 1]]);
    let x2 = field(n, &[], &[(1, 2, 0)]);
    assert_eq!(
        x2.exp().unwrap(),
        D::new(vec![x(n), poly(n, &[(1, 0, 1), (1, 2, 0)])]).unwrap()
    );
    for h in [&f, &g] {
        assert_eq!(h.pushforward(&x2).unwrap(), x2);
    }
    let c = is_abelian(&spec(vec![f, g])).unwrap();
    assert_eq!(c.verdict, Verdict::Refuted);

    let f = field(n, &[(1, 2, 1)], &[]).exp().unwrap();
    let g = field(n, &[(1, 3, 2)], &[]).exp().unwrap();
    let inv = field(n, &[(-1, 1, 1)], &[(1, 0, 2)]);
    for h in [&f, &g] {
        assert_eq!(h.pushforward(&inv).unwrap(), inv);
    }
    let c = is_abelian(&spec(vec![f, g])).unwrap();
    assert_eq!(c.verdict, Verdict::Refuted);
}

#[test]
fn single_generator_is_abelian() {
    let f = sample::diffeo::<Qi>(&mut sample::rng(1), 2, 5);
    assert_eq!(is_abelian(&spec(vec![f])).unwrap().verdict, Verdict::Proved);
}

#[test]
fn abelian_verdict_survives_random_words() {
    let n = 6;
    let xf = field(n, &[(1, 2, 0), (1, 0, 3)], &[(1, 1, 1)]);
    let gens: Vec<D> = [1, 2, -3]
        .iter()
        .map(|&t| xf.exp_t(&Qi::ratio(t, 2)).unwrap())
        .collect();
    let s = spec(gens).with_bounds(3, 1);
    assert_eq!(is_abelian(&s).unwrap().verdict, Verdict::Proved);
    let els = enumerate(&s);
    for a in els.iter().take(12) {
        for b in els.iter().take(12) {
            assert!(a.map.commutator(&b.map).unwrap().is_identity());
        }
    }
}

#[test]
fn jet_matrix_faithful_and_compatible_with_commutators() {
    let mut rng = sample::rng(11);
    for _ in 0..6 {
        let f = sample::diffeo::<Qi>(&mut rng, 2, 4);
        let g = sample::diffeo::<Qi>(&mut rng, 2, 4);
        assert_eq!(jet_matrix(&f) == jet_matrix(&g), f == g);
        let (mf, mg) = (jet_matrix(&f), jet_matrix(&g));
        let (mfi, mgi) = (mf.inverse().unwrap(), mg.inverse().unwrap());
        // Anti-homomorphism: the word f∘g∘f⁻¹∘g⁻¹ maps to the reversed product.
        let expected = mgi.mul(&mfi).mul(&mg).mul(&mf);
        assert_eq!(jet_matrix(&f.commutator(&g).unwrap()), expected);
    }
}

#[test]
fn projective_equivalence_both_sides() {
    let n = 6;
    let (xf, h) = rescaled_regular(n);
    assert!(xf.is_regular_dicritic());
    let f = xf.exp().unwrap();

    let r = projective_equivalence_check(&spec(vec![f.clone()])).unwrap();
    assert!(r.agree);
    assert!(r.sides.iter().all(|(_, c)| c.verdict == Verdict::Proved));

    let s = spec(vec![f.clone(), h.clone()]).with_bounds(4, 1);
    let r = projective_equivalence_check(&s).unwrap();
    assert!(r.agree);
    assert_eq!(r.sides[1].1.verdict, Verdict::Proved);
    assert_ne!(r.sides[0].1.verdict, Verdict::Refuted);
    assert_eq!(h.projective_factor(&xf).unwrap(), Some(-Qi::i()));
    assert_eq!(is_quasi_abelian(&s).unwrap().verdict, Verdict::Proved);

    // A scalar λ·Id never rescales a regular dicritic field.
    let lam = D::homothety(2, n, &Qi::int(2)).unwrap();
    let s = spec(vec![f.clone(), lam]).with_bounds(3, 1);
    let r = projective_equivalence_check(&s).unwrap();
    assert!(r.agree);
    assert!(r.sides.iter().all(|(_, c)| c.verdict == Verdict::Refuted));

    let breaker = field(n, &[], &[(1, 2, 0)]).exp().unwrap();
    let s = spec(vec![f, h, breaker]).with_bounds(3, 1);
    let r = projective_equivalence_check(&s).unwrap();
    assert!(r.agree);
    assert!(r.sides.iter().all(|(_, c)| c.verdict == Verdict::Refuted));
    let w = r.sides[0].1.witness.clone().unwrap();
    assert!(!w.eval(&s.generators).unwrap().is_identity());
}

#[test]
fn projective_equivalence_needs_regular_dicritic() {
    let n = 6;
    let f = F::scaled_radial(&x(n)).exp().unwrap();
    assert!(matches!(
        projective_equivalence_check(&spec(vec![f])),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn uniform_order_equivalence_checks() {
    let n = 8;
    let xf = F::scaled_radial(&(&x(n) + &y(n)))
        .try_add(&field(n, &[(1, 0, 3)], &[]))
        .unwrap();
    let flow: Vec<D> = [1, 2, -1]
        .iter()
        .map(|&t| xf.exp_t(&Qi::ratio(t, 3)).unwrap())
        .collect();
    let r = uniform_order_equivalence_check(&spec(flow).with_bounds(3, 2)).unwrap();
    assert!(r.agree);
    assert_eq!(r.sides[0].1.verdict, Verdict::Proved);
    assert_eq!(r.sides[1].1.verdict, Verdict::Proved);
    assert_eq!(r.sides[1].0, "uniform tangency order 1");

    let f1 = F::scaled_radial(&x(n)).exp().unwrap();
    let f2 = F::scaled_radial(&(&x(n) * &y(n))).exp().unwrap();
    let r = uniform_order_equivalence_check(&spec(vec![f1.clone(), f2.clone()]).with_bounds(3, 2))
        .unwrap();
    assert!(r.agree);
    assert_eq!(r.sides[0].1.verdict, Verdict::Refuted);
    assert_eq!(r.sides[1].1.verdict, Verdict::Refuted);
    assert_ne!(r.sides[1].1.witness_order, Some(TangencyOrder::Order(1)));

    let lin = linear(n, [[2, 0], [0, 2]]);
    assert!(matches!(
        uniform_order_equivalence_check(&spec(vec![f1, lin])),
        Err(Error::Precondition(_))
    ));
    let plain = field(n, &[(1, 0, 2)], &[]).exp().unwrap();
    assert!(matches!(
        uniform_order_equivalence_check(&spec(vec![plain])),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn mixed_order_witnesses_grow() {
    let n = 12;
    let f1 = F::scaled_radial(&x(n)).exp().unwrap();
    let f2 = F::scaled_radial(&(&x(n) * &y(n))).exp().unwrap();
    let s = spec(vec![f1.clone(), f2.clone()])
        .with_bounds(2, 3)
        .with_element_cap(16);
    let probe = derived_series_probe(&s).unwrap();
    let orders: Vec<TangencyOrder> = probe
        .iter()
        .take_while(|c| c.verdict == Verdict::Refuted)
        .map(|c| c.witness_order.unwrap())
        .collect();
    assert!(orders.len() >= 2);
    assert!(orders.windows(2).all(|w| w[0] < w[1]));

    let chain = commutator_chain(&f1, &f2).unwrap();
    let ps: Vec<u32> = chain
        .iter()
        .filter_map(|(_, o)| match o {
            TangencyOrder::Order(p) => Some(*p),
            _ => None,
        })
        .collect();
    assert_eq!(ps, vec![1, 2, 3, 5, 8]);
    assert!(ps.windows(3).all(|w| w[2] == w[0] + w[1]));
    assert_eq!(chain.last().unwrap().1, TangencyOrder::Identity);
}

fn solvable_not_metabelian(n: u32) -> GroupSpec<Qi> {
    let g1 = field(n, &[(1, 2, 0)], &[]).exp().unwrap();
    let g2 = D::new(vec![x(n), poly(n, &[(1, 0, 1), (1, 3, 0)])]).unwrap();
    let g3 = D::new(vec![x(n), poly(n, &[(1, 0, 1), (1, 1, 1)])]).unwrap();
    spec(vec![g1, g2, g3])
}

#[test]
fn solvable_group_is_not_metabelian() {
    let s = solvable_not_metabelian(8).with_bounds(6, 3);
    assert_eq!(is_quasi_abelian(&s).unwrap().verdict, Verdict::Refuted);
    let probe = derived_series_probe(&s).unwrap();
    assert_eq!(probe[0].verdict, Verdict::Refuted);
    assert_eq!(probe[1].verdict, Verdict::Refuted);
    assert_eq!(probe[2].verdict, Verdict::Inconclusive);
    let w = probe[1].witness.clone().unwrap();
    assert!(!w.eval(&s.generators).unwrap().is_identity());
}

#[test]
fn metabelian_criterion_checks() {
    let n = 8;
    let f = F::scaled_radial(&x(n)).exp().unwrap();
    let h = D::homothety(2, n, &Qi::int(2)).unwrap();
    let c = metabelian_criterion_check(&f, &h).unwrap();
    assert_eq!(c.verdict, Verdict::Proved);
    let id = D::identity(2, n);
    assert_eq!(
        metabelian_criterion_check(&f, &id).unwrap().verdict,
        Verdict::Proved
    );
    let flip = D::homothety(2, n, &Qi::int(-1)).unwrap();
    assert!(matches!(
        metabelian_criterion_check(&f, &flip),
        Err(Error::Precondition(_))
    ));
    let lin = linear(n, [[2, 0], [0, 3]]);
    assert!(matches!(
        metabelian_criterion_check(&f, &lin),
        Err(Error::Precondition(_))
    ));
    let plain = field(n, &[(1, 0, 2)], &[]).exp().unwrap();
    assert!(matches!(
        metabelian_criterion_check(&plain, &h),
        Err(Error::Precondition(_))
    ));

    // A regular dicritic f with h = 2·Id: the conditions fail.
    let xf = F::scaled_radial(&(&x(n) + &y(n)))
        .try_add(&field(n, &[], &[(-1, 3, 0)]))
        .unwrap();
    assert!(xf.is_regular_dicritic());
    let c = metabelian_criterion_check(&xf.exp().unwrap(), &h).unwrap();
    assert_eq!(c.verdict, Verdict::Refuted);
    let w = c.witness.unwrap();
    let gens = [xf.exp().unwrap(), h];
    assert!(!w.eval(&gens).unwrap().is_identity());
}

#[test]
fn commuting_with_regular_dicritic_means_flow() {
    let n = 7;
    let xf = F::scaled_radial(&(&x(n) + &y(n)))
        .try_add(&field(n, &[], &[(-1, 3, 0)]))
        .unwrap();
    let f = xf.exp().unwrap();
    let gens: Vec<D> = [2, -1, 5]
        .iter()
        .map(|&t| xf.exp_t(&Qi::ratio(t, 3)).unwrap())
        .collect();
    for g in &gens {
        assert!(g.commutator(&f).unwrap().is_identity());
        assert!(g.flow_membership(&xf).unwrap().is_some());
        assert_eq!(g.pushforward(&xf).unwrap(), xf);
    }
    // Generators commuting with f: abelian, and each leaves log f invariant.
    assert_eq!(is_abelian(&spec(gens)).unwrap().verdict, Verdict::Proved);
}

fn nilpotent_span(
    rng: &mut impl rand::Rng,
    nvars: usize,
    n: u32,
    count: usize,
) -> Vec<VectorField<Qi>> {
    let xv = Jet::<Qi>::var(nvars, n, 0);
    let p = &xv * &xv;
    (0..count)
        .map(|_| {
            let a: Qi = sample::scalar(rng, 3);
            let mut comps = vec![p.scale(&a)];
            let q = sample::jet::<Qi>(&mut *rng, 1, n, 2, n);
            comps.push(Jet::from_terms(
                nvars,
                n,
                q.terms().map(|(m, c)| {
                    let mut e = vec![0; nvars];
                    e[0] = m.get(0);
                    (MultiIndex::new(e), c.clone())
                }),
            ));
            if nvars == 3 {
                let r = sample::jet::<Qi>(&mut *rng, 2, n, 2, n);
                comps.push(Jet::from_terms(
                    3,
                    n,
                    r.terms()
                        .map(|(m, c)| (MultiIndex::new([m.get(0), m.get(1), 0]), c.clone())),
                ));
            }
            VectorField::new(comps).unwrap()
        })
        .collect()
}

#[test]
fn nilpotent_spans_have_short_derived_series() {
    let mut rng = sample::rng(5);
    for nvars in [2usize, 3] {
        let n = if nvars == 2 { 8 } else { 6 };
        for trial in 0..3 {
            let mut fields = nilpotent_span(&mut rng, nvars, n, 3);
            if trial == 2 {
                let phi = sample::tangent_diffeo::<Qi>(&mut rng, nvars, n, 1);
                fields = fields.iter().map(|f| phi.pushforward(f).unwrap()).collect();
            }
            let span = lie_closure(&fields, 400).unwrap();
            let len = span.derived_length().unwrap().unwrap();
            assert!(len <= nvars, "derived length {len} in {nvars} variables");
        }
    }
}

#[test]
fn commuting_quadratic_pair_spans_abelian_algebra() {
    let n = 7;
    let xf = field(n, &[(1, 2, 0), (3, 1, 1)], &[(3, 1, 1), (1, 0, 2)]);
    let yf = field(
        n,
        &[(3, 3, 0), (-5, 2, 1), (1, 1, 2), (1, 0, 3)],
        &[(1, 3, 0), (1, 2, 1), (-5, 1, 2), (3, 0, 3)],
    );
    assert!(xf.bracket(&yf).unwrap().is_zero());
    let span = lie_closure(&[xf, yf], 10).unwrap();
    assert_eq!(span.dim(), 2);
    assert_eq!(lie_derived_length(&span).unwrap(), Some(1));
}

#[test]
fn closure_cap() {
    let n = 10;
    let a = F::new(vec![poly(n, &[(1, 2, 0)]), Jet::zero(2, n)]).unwrap();
    let b = F::new(vec![Jet::zero(2, n), poly(n, &[(1, 0, 2), (1, 3, 0)])]).unwrap();
    assert!(matches!(
        lie_closure(&[a, b], 3),
        Err(Error::ClosureTooLarge(3))
    ));
}

#[test]
fn transform_matrices() {
    let n = 6;
    let xf = field(n, &[(1, 2, 0)], &[]);
    let yf = field(n, &[], &[(1, 0, 2)]);
    let g = xf
        .exp()
        .unwrap()
        .compose(&yf.exp_t(&Qi::int(3)).unwrap())
        .unwrap();
    let m = metabelian_transform_matrix(&g, &xf, &yf).unwrap().unwrap();
    assert!(m.is_identity());

    // The x^k·R, y^k·R pair is dependent over the fraction field.
    let k = 2;
    let a = F::scaled_radial(&poly(n, &[(1, k, 0)]));
    let b = F::scaled_radial(&poly(n, &[(1, 0, k)]));
    assert!(a.bracket(&b).unwrap().is_zero());
    assert_eq!(
        metabelian_transform_matrix(&g, &a, &b),
        Err(Error::DependentFields)
    );

    let c = field(n, &[], &[(1, 2, 0)]);
    assert_eq!(
        metabelian_transform_matrix(&g, &xf, &c),
        Err(Error::NonzeroBracket)
    );
    let _ = (Qi::one(), Qi::zero());
}
