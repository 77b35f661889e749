use klein_core::bundles::{
    classify_rank2, complexify, is_isomorphic, normalize_desc, stability, BundleDesc, ComplexAtom, Rank2Stratum,
    RealAtom, Stability,
};
use klein_core::holonomy::{parallel_transport, realness_sign, realness_sign_integrated, PathSpec};
use klein_core::moduli::{
    canonical_key, construct_stable_real, exists_stable, fixed_locus_delta, moduli_descriptor, LocusTag, ModuliKind,
};
use klein_core::picard::{torsion_subgroup, FixedClassKind};
use klein_core::torus::normalize;
use klein_core::{
    Connection64, ExactLineBundle, ExactPoint, FloatPoint, KleinBottle, Rational, Scalar, Sign,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn rational_unit(max_den: i64) -> impl Strategy<Value = Rational> {
    (1..=max_den).prop_flat_map(|d| (0..d).prop_map(move |n| Rational::new(n, d)))
}

fn point(max_den: i64) -> impl Strategy<Value = ExactPoint> {
    (rational_unit(max_den), rational_unit(max_den)).prop_map(|(a, b)| ExactPoint::new(a, b).unwrap())
}

fn line(max_den: i64, degrees: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = ExactLineBundle> {
    (degrees, point(max_den)).prop_map(|(d, p)| ExactLineBundle::new(d, p))
}

fn fixed_line(max_den: i64) -> impl Strategy<Value = ExactLineBundle> {
    (-4i64..=4, rational_unit(max_den), any::<bool>()).prop_map(|(n, a, real)| {
        let b = if real { Rational::from_integer(0) } else { Rational::new(1, 2) };
        ExactLineBundle::new(2 * n, ExactPoint::new(a, b).unwrap())
    })
}

fn real_line(max_den: i64) -> impl Strategy<Value = ExactLineBundle> {
    (-3i64..=3, rational_unit(max_den))
        .prop_map(|(n, a)| ExactLineBundle::new(2 * n, ExactPoint::new(a, Rational::from_integer(0)).unwrap()))
}

fn complex_atom(max_den: i64) -> impl Strategy<Value = ComplexAtom> {
    prop_oneof![
        line(max_den, -3..=3).prop_map(ComplexAtom::Line),
        line(max_den, -2..=2).prop_map(ComplexAtom::Ext2),
        ((2u32..=3), (-4i64..=4), point(max_den)).prop_filter_map("coprime", |(r, d, p)| ComplexAtom::stable(r, d, p).ok()),
    ]
}

fn real_atom(max_den: i64) -> impl Strategy<Value = RealAtom> {
    prop_oneof![
        real_line(max_den).prop_map(|l| RealAtom::real_line(l).unwrap()),
        real_line(max_den).prop_map(|l| RealAtom::self_ext(l).unwrap()),
        ((1u32..=5), (-3i64..=3), rational_unit(max_den))
            .prop_filter_map("coprime, even", |(r, n, t)| RealAtom::real_stable(r, 2 * n, t).ok()),
        complex_atom(max_den).prop_map(RealAtom::ConjPair),
    ]
}

fn real_desc(max_den: i64) -> impl Strategy<Value = BundleDesc> {
    prop::collection::vec(real_atom(max_den), 1..4).prop_map(BundleDesc::Real)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn circular_gap(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(1.0);
    d.min(1.0 - d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn sigma_is_a_free_involution(p in point(48)) {
        prop_assert_eq!(p.sigma().sigma(), p.clone());
        prop_assert_ne!(p.sigma(), p);
    }

    #[test]
    fn float_sigma_is_an_involution(a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let p = FloatPoint::new(a, b).unwrap();
        let q = p.sigma().sigma();
        prop_assert!(circular_gap(*q.a(), a) <= 1e-12);
        prop_assert!(circular_gap(*q.b(), b) <= 1e-12);
    }

    #[test]
    fn normalize_is_additive(
        tau in 0.2f64..5.0,
        z in (-5.0f64..5.0, -5.0f64..5.0),
        w in (-5.0f64..5.0, -5.0f64..5.0),
    ) {
        let x = KleinBottle::standard(tau).unwrap();
        let sum = normalize(z.0 + w.0, z.1 + w.1, &x).unwrap();
        let parts = normalize(z.0, z.1, &x).unwrap() + normalize(w.0, w.1, &x).unwrap();
        prop_assert!(circular_gap(*sum.a(), *parts.a()) <= 1e-12);
        prop_assert!(circular_gap(*sum.b(), *parts.b()) <= 1e-12);
    }

    #[test]
    fn normal_form_is_idempotent(tau in 0.1f64..10.0, prime in any::<bool>()) {
        use klein_core::Convention;
        let conv = if prime { Convention::SigmaPrime } else { Convention::SigmaStandard };
        let (once, _) = KleinBottle::new(tau, conv).unwrap().normal_form();
        let (twice, _) = once.normal_form();
        prop_assert_eq!(once, twice);
        prop_assert_eq!(once.convention(), Convention::SigmaStandard);
    }

    #[test]
    fn sigma_conj_is_an_involutive_automorphism(l1 in line(24, -5..=5), l2 in line(24, -5..=5)) {
        prop_assert_eq!(l1.sigma_conj().sigma_conj(), l1.clone());
        prop_assert_eq!(l1.tensor(&l2).sigma_conj(), l1.sigma_conj().tensor(&l2.sigma_conj()));
    }

    #[test]
    fn classification_matches_the_obstruction_sign(l in line(24, -6..=6), tau in 0.25f64..4.0) {
        let x = KleinBottle::standard(tau).unwrap();
        match l.classify_fixed().unwrap() {
            FixedClassKind::RealizableReal => prop_assert_eq!(realness_sign(&l, &x), Ok(Sign::Plus)),
            FixedClassKind::FixedNotReal => prop_assert_eq!(realness_sign(&l, &x), Ok(Sign::Minus)),
            FixedClassKind::NotFixed => prop_assert!(realness_sign(&l, &x).is_err()),
        }
    }

    #[test]
    fn tensoring_by_a_real_class_keeps_the_kind(l in line(24, -6..=6), a in rational_unit(24)) {
        let real = ExactLineBundle::new(0, ExactPoint::new(a, Rational::from_integer(0)).unwrap());
        prop_assert_eq!(real.classify_fixed(), Ok(FixedClassKind::RealizableReal));
        prop_assert_eq!(l.tensor(&real).classify_fixed(), l.classify_fixed());
        let trivial = torsion_subgroup(1, true).unwrap();
        for g in trivial.elements() {
            let l2 = l.tensor(&ExactLineBundle::new(0, g.clone()));
            prop_assert_eq!(l2.classify_fixed(), l.classify_fixed());
        }
    }

    #[test]
    fn closed_loops_are_unitary(
        z0 in (-1.0f64..1.0, -2.0f64..2.0),
        tau in 0.25f64..4.0,
        corners in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..4),
    ) {
        let conn = Connection64::new(Complex64::new(z0.0, z0.1), tau).unwrap();
        let mut pts: Vec<Complex64> = vec![Complex64::new(0.0, 0.0)];
        pts.extend(corners.iter().map(|&(re, im)| Complex64::new(re, im)));
        pts.push(Complex64::new(0.0, 0.0));
        let h = parallel_transport(&conn, &PathSpec::poly_line(pts, 200)).unwrap();
        prop_assert!((h.norm() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn holonomy_is_multiplicative_in_z0(
        z in (-1.0f64..1.0, -2.0f64..2.0),
        w in (-1.0f64..1.0, -2.0f64..2.0),
        tau in 0.25f64..4.0,
    ) {
        let h = |re: f64, im: f64| {
            let c = Connection64::new(Complex64::new(re, im), tau).unwrap();
            parallel_transport(&c, &PathSpec::unit_loop(1000)).unwrap()
        };
        let lhs = h(z.0 + w.0, z.1 + w.1);
        let rhs = h(z.0, z.1) * h(w.0, w.1);
        prop_assert!((lhs - rhs).norm() <= 1e-9);
    }

    #[test]
    fn obstruction_sign_is_multiplicative(l1 in fixed_line(24), l2 in fixed_line(24), tau in 0.25f64..4.0) {
        let x = KleinBottle::standard(tau).unwrap();
        let s = |l: &ExactLineBundle| realness_sign(l, &x).unwrap();
        prop_assert_eq!(s(&l1.tensor(&l2)), s(&l1) * s(&l2));
    }

    #[test]
    fn integrated_sign_agrees_with_closed_form(l in fixed_line(12), tau in 0.25f64..4.0) {
        let x = KleinBottle::standard(tau).unwrap();
        prop_assert_eq!(realness_sign_integrated(&l, &x, 400), realness_sign(&l, &x));
    }

    #[test]
    fn normalization_is_idempotent_and_faithful(d in real_desc(12)) {
        let n = normalize_desc(&d).unwrap();
        prop_assert_eq!(normalize_desc(&n).unwrap(), n.clone());
        prop_assert_eq!(n.rank(), d.rank());
        prop_assert_eq!(n.degree(), d.degree());
        prop_assert!(is_isomorphic(&d, &n).unwrap());
        prop_assert_eq!(stability(&n).unwrap(), stability(&d).unwrap());
    }

    #[test]
    fn complexification_preserves_rank_and_degree(d in real_desc(12)) {
        let c = complexify(&d).unwrap();
        prop_assert_eq!(c.rank(), d.rank());
        prop_assert_eq!(c.degree(), d.degree());
    }

    #[test]
    fn stable_bundles_have_gcd_one_or_two(d in real_desc(12)) {
        if stability(&d).unwrap() == Stability::Stable {
            let g = gcd(i64::from(d.rank()), d.degree());
            prop_assert!(g == 1 || g == 2, "rank {} degree {}", d.rank(), d.degree());
        }
    }

    #[test]
    fn isomorphism_is_symmetric_and_reflexive(d1 in real_desc(6), d2 in real_desc(6)) {
        prop_assert!(is_isomorphic(&d1, &d1).unwrap());
        prop_assert_eq!(is_isomorphic(&d1, &d2).unwrap(), is_isomorphic(&d2, &d1).unwrap());
    }

    #[test]
    fn atom_order_does_not_matter(d in real_desc(8), seed in any::<u64>()) {
        let BundleDesc::Real(mut atoms) = d.clone() else { unreachable!() };
        let k = atoms.len();
        atoms.rotate_left((seed as usize) % k);
        prop_assert!(is_isomorphic(&d, &BundleDesc::Real(atoms)).unwrap());
    }

    #[test]
    fn conjugating_the_pair_member_is_invisible(f in complex_atom(12)) {
        let a = BundleDesc::Real(vec![RealAtom::ConjPair(f.clone())]);
        let b = BundleDesc::Real(vec![RealAtom::ConjPair(f.conj())]);
        prop_assert!(is_isomorphic(&a, &b).unwrap());
        prop_assert_eq!(f.conj().conj(), f);
    }

    #[test]
    fn tensor_commutes_with_conjugation(f in complex_atom(12), m in line(12, -3..=3)) {
        prop_assert_eq!(f.tensor_line(&m).conj(), f.conj().tensor_line(&m.sigma_conj()));
    }

    #[test]
    fn rank2_twists_untwist(l in line(12, -7..=7)) {
        let desc = BundleDesc::Real(vec![RealAtom::ConjPair(ComplexAtom::Line(l.clone()))]);
        let class = classify_rank2(&desc).unwrap();
        let reduced_degree = desc.degree() - 4 * class.twist;
        prop_assert!(reduced_degree == 0 || reduced_degree == 2);
        if l.degree() % 2 != 0 {
            let is_s22 = matches!(class.stratum, Rank2Stratum::Stable22 { .. });
            prop_assert!(is_s22);
        }
    }

    #[test]
    fn moduli_dimension_matches_gcd(r in 1u32..=10, d in -10i64..=10) {
        let m = moduli_descriptor(r, d).unwrap();
        let g = gcd(i64::from(r), d);
        prop_assert_eq!(m.kind == ModuliKind::Empty, !exists_stable(r, d));
        if m.kind != ModuliKind::Empty {
            prop_assert_eq!(m.dimension as i64, g);
        }
    }

    #[test]
    fn construction_is_r_to_one(idx in 0usize..4, k in 0i64..120) {
        let (r, d) = [(3u32, 2i64), (5, 2), (3, 4), (7, -6)][idx];
        let t = Rational::new(k, 120);
        let key = construct_stable_real(r, d, t).unwrap().key;
        let shifted = construct_stable_real(r, d, t + Rational::new(1, i64::from(r))).unwrap().key;
        prop_assert_eq!(key, shifted);
    }

    #[test]
    fn locus_tags_agree_with_signs(k in 0usize..3, p in point(60)) {
        let r = [1u32, 3, 5][k];
        let x = KleinBottle::standard(1.5).unwrap();
        let locus = fixed_locus_delta(r).unwrap();
        if let Some(tag) = locus.tag_of(&p) {
            let lift = locus.lift(&p).unwrap();
            let expected = match tag {
                LocusTag::Real => Sign::Plus,
                LocusTag::Obstructed => Sign::Minus,
            };
            prop_assert_eq!(realness_sign(&lift, &x), Ok(expected));
        }
    }

    #[test]
    fn punctured_quotient_rejects_only_the_real_circle(p in point(24)) {
        let on_real = *p.b().wrap(&Rational::from_integer(1)).numer() == 0;
        prop_assert_eq!(canonical_key(2, 0, &p).is_err(), on_real);
        prop_assert_eq!(canonical_key(2, 4, &p).is_err(), on_real);
        prop_assert!(canonical_key(2, 2, &p).is_ok());
    }
}
