use hitlaw::cfrac::{
    expand, gauss_map_exact, natural_extension, renormalization_interval, Alpha, CircleArc,
};
use hitlaw::distfn::{
    cf_breakpoints, cf_hitting, cf_return, forward_transform, inverse_transform, sup_distance,
    uniform_grid, validate_class_f, validate_class_ftilde, PiecewiseLinear, StepFn,
};
use hitlaw::dynsys::{Frac64, Point, System, TargetSet};
use hitlaw::hitstat::{
    decompose_exact, empirical_distributions, verify_star_identities, SamplingPlan,
};
use hitlaw::scalar::Rational;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use proptest::prelude::*;

const DEN: i64 = 256;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Nondecreasing step function with values in `[0, 1]`, possibly not
/// reaching 1.
fn step_fn() -> impl Strategy<Value = StepFn<Rational>> {
    prop::collection::btree_map(1..(8 * DEN), 0..=DEN, 1..40).prop_map(|jumps| {
        let mut values: Vec<i64> = jumps.values().copied().collect();
        values.sort_unstable();
        StepFn::new(
            jumps.keys().map(|&t| r(t, DEN)).collect(),
            values.iter().map(|&v| r(v, DEN)).collect(),
        )
        .unwrap()
    })
}

/// Concave piecewise linear function from the origin with slopes in `[0, 1]`.
fn concave_fn() -> impl Strategy<Value = PiecewiseLinear<Rational>> {
    prop::collection::vec((0..=DEN, 1..=DEN), 1..30).prop_map(|mut segs| {
        segs.sort_unstable_by_key(|s| std::cmp::Reverse(s.0));
        let mut knots = vec![(r(0, 1), r(0, 1))];
        let (mut t, mut y) = (r(0, 1), r(0, 1));
        for (s, len) in segs {
            t += r(len, DEN);
            y += r(s, DEN) * r(len, DEN);
            knots.push((t, y));
        }
        PiecewiseLinear::new(knots).unwrap()
    })
}

fn periodic_alpha() -> impl Strategy<Value = Alpha> {
    (
        prop::collection::vec(1u64..6, 0..3),
        prop::collection::vec(1u64..6, 1..4),
    )
        .prop_map(|(prefix, period)| Alpha::periodic(prefix, period).unwrap())
}

fn finite_system() -> impl Strategy<Value = (System, TargetSet)> {
    (2u64..300)
        .prop_flat_map(|n| {
            let shifts: Vec<u64> = (1..n).filter(|r| num_integer::gcd(*r, n) == 1).collect();
            (
                Just(n),
                prop::sample::select(shifts),
                prop::collection::btree_set(0..n, 1..=(n as usize).min(40)),
            )
        })
        .prop_map(|(n, shift, residues)| {
            let residues: Vec<u64> = residues.into_iter().collect();
            (
                System::finite(n, shift).unwrap(),
                TargetSet::subset(n, &residues).unwrap(),
            )
        })
}

fn big(x: u128) -> BigInt {
    BigInt::from(x)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn inverse_undoes_forward(s in step_fn()) {
        let back = inverse_transform(&forward_transform(&s)).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn inverse_undoes_forward_in_f64(s in step_fn()) {
        // dyadic inputs keep every float operation exact
        let s = s.map_scalar(|x| x.to_f64().unwrap()).unwrap();
        let back = inverse_transform(&forward_transform(&s)).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn forward_undoes_inverse_at_knots(f in concave_fn()) {
        let g = forward_transform(&inverse_transform(&f).unwrap());
        for (t, y) in f.knots() {
            prop_assert_eq!(g.eval(t), *y);
        }
        prop_assert!(g.same_function(&f));
    }

    #[test]
    fn forward_maps_return_laws_to_hitting_laws(s in step_fn()) {
        let f = forward_transform(&s);
        let slopes = f.slopes();
        prop_assert!(slopes.windows(2).all(|w| w[1] <= w[0]));
        let report = validate_class_ftilde(&s, None);
        if report.member() {
            prop_assert!(validate_class_f(&f).member());
        }
        if s.final_value() == r(1, 1) {
            let member = s.complement_integral().unwrap() <= r(1, 1);
            prop_assert_eq!(report.member(), member);
        }
    }

    #[test]
    fn cf_return_is_the_inverse_of_cf_hitting(theta in 0.01f64..1.0, omega in 0.0f64..0.99) {
        let hit = cf_hitting(theta, omega).unwrap();
        let ret = cf_return(theta, omega).unwrap();
        prop_assert_eq!(&inverse_transform(&hit).unwrap(), &ret);
        let grid = uniform_grid(0.0, 3.0, 0.01).unwrap();
        prop_assert!(sup_distance(&forward_transform(&ret), &hit, &grid).unwrap() < 1e-12);
        let (t1, t2) = cf_breakpoints(theta, omega);
        prop_assert!((hit.eval(&t2) - 1.0).abs() < 1e-12);
        if t1 > 0.0 {
            prop_assert_eq!(ret.left_limit(&t1), 0.0);
        }
        let mid = ret.eval(&((t1 + t2) / 2.0));
        prop_assert!((mid - theta / (1.0 + theta)).abs() < 1e-12);
        prop_assert_eq!(ret.eval(&t2), 1.0);
    }

    #[test]
    fn convergents_follow_the_recursion(alpha in periodic_alpha()) {
        let st = expand(&alpha, 25).unwrap();
        for k in 2..st.convergents.len() {
            let a = st.digits[k - 2] as u128;
            prop_assert_eq!(st.p(k), a * st.p(k - 1) + st.p(k - 2));
            prop_assert_eq!(st.q(k), a * st.q(k - 1) + st.q(k - 2));
        }
    }

    #[test]
    fn convergents_alternate_around_alpha(alpha in periodic_alpha()) {
        let st = expand(&alpha, 12).unwrap();
        let x = alpha.to_rational();
        let mut last_sign = 0;
        for k in 1..st.convergents.len() - 1 {
            let (p, q) = (big(st.p(k)), big(st.q(k)));
            let diff = BigRational::new(p, q.clone()) - &x;
            let sign = if diff.is_positive() { 1 } else { -1 };
            prop_assert_ne!(sign, last_sign);
            last_sign = sign;
            let bound = BigRational::new(BigInt::from(1), q * big(st.q(k + 1)));
            prop_assert!(diff.abs() < bound);
        }
    }

    #[test]
    fn theta_is_the_gauss_tail(num in 1u64..u64::MAX, order in 1usize..12) {
        let x = BigRational::new(BigInt::from(num), BigInt::from(u64::MAX));
        let alpha = Alpha::rational(x.clone()).unwrap();
        prop_assume!(alpha.digits().count() > order + 1);
        let point = natural_extension(&alpha, 0.0, order).unwrap();
        let mut tail = x;
        for _ in 0..order {
            tail = gauss_map_exact(&tail);
        }
        prop_assert!((point.theta - tail.to_f64().unwrap()).abs() < 2f64.powi(-40));
    }

    #[test]
    fn renormalization_arcs_shrink(alpha in periodic_alpha(), z in any::<u64>()) {
        let lengths: Vec<f64> = (3..13)
            .map(|n| renormalization_interval(&alpha, Frac64(z), n).unwrap())
            .map(|arc| {
                prop_assert!(arc.contains(Frac64(z)));
                prop_assert_eq!(TargetSet::Arc(arc).measure(), arc.length());
                Ok(arc.length())
            })
            .collect::<Result<_, _>>()?;
        prop_assert!(lengths.windows(2).all(|w| w[1] < w[0]));
        prop_assert!(*lengths.last().unwrap() < 0.05);
    }

    #[test]
    fn finite_rotation_is_a_bijection(n in 1u64..500, r in 0u64..500) {
        prop_assume!(num_integer::gcd(n, r % n.max(1)) == 1 || n == 1);
        let s = System::finite(n, r % n).unwrap();
        let mut image: Vec<u64> = (0..n)
            .map(|v| match s.step(Point::Residue(v)) {
                Point::Residue(w) => w,
                p => panic!("{p:?}"),
            })
            .collect();
        image.sort_unstable();
        prop_assert_eq!(image, (0..n).collect::<Vec<_>>());
    }

    #[test]
    fn iteration_is_a_group_action(x in any::<u64>(), a in 0u64..1 << 40, b in 0u64..1 << 40, shift in any::<u64>()) {
        let rot = System::rotation(Alpha::golden());
        let p = Point::Circle(Frac64(x));
        prop_assert_eq!(
            rot.iterate_to(p, a + b).unwrap(),
            rot.iterate_to(rot.iterate_to(p, a).unwrap(), b).unwrap()
        );
        let (a, b) = (a % 32, b % 32);
        let d = System::Doubling;
        prop_assert_eq!(
            d.iterate_to(p, a + b).unwrap(),
            d.iterate_to(d.iterate_to(p, a).unwrap(), b).unwrap()
        );
        let f = System::finite(1_000_003, shift % 1_000_003).unwrap();
        let q = Point::Residue(x % 1_000_003);
        prop_assume!(shift % 1_000_003 != 0);
        prop_assert_eq!(
            f.iterate_to(q, a + b).unwrap(),
            f.iterate_to(f.iterate_to(q, a).unwrap(), b).unwrap()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_decomposition_satisfies_duality((s, u) in finite_system()) {
        let d = decompose_exact(&s, &u).unwrap();
        prop_assert_eq!(d.check_identities(), Ok(()));
        let masses: Vec<Rational> = (1..=d.max_time()).map(|k| d.u(k)).collect();
        prop_assert!(masses.windows(2).all(|w| w[1] <= w[0]));
        let report = verify_star_identities(&d);
        prop_assert!(report.holds(), "{:?}", report);
        prop_assert_eq!(&report.bound, &d.mu_u);
        prop_assert!(forward_transform(&d.return_law()).same_function(&d.interpolated_hitting_law()));
        prop_assert!(validate_class_f(&d.interpolated_hitting_law()).member());
    }

    #[test]
    fn exhaustive_sweep_reproduces_exact_laws((s, u) in finite_system()) {
        let n = match s { System::FiniteRotation { modulus, .. } => modulus as usize, _ => unreachable!() };
        let e = empirical_distributions(&s, &u, &SamplingPlan::new(n, 0)).unwrap();
        let d = decompose_exact(&s, &u).unwrap();
        let exact_f = d.hitting_law().map_scalar(|x| x.to_f64().unwrap()).unwrap();
        let grid = uniform_grid(0.0, 2.0, 0.01).unwrap();
        prop_assert_eq!(e.f.len(), exact_f.len());
        for i in 0..e.f.len() {
            prop_assert!((e.f.breakpoints()[i] - exact_f.breakpoints()[i]).abs() < 1e-12);
            prop_assert!((e.f.values()[i] - exact_f.values()[i]).abs() < 1e-12);
        }
        prop_assert!((e.kac - 1.0).abs() < 1e-9);
        let dual = sup_distance(&forward_transform(&e.ftilde), &e.f, &grid).unwrap();
        prop_assert!(dual <= e.mu_u + 1e-12, "{} > {}", dual, e.mu_u);
    }
}

#[test]
fn rotation_preserves_arc_frequencies() {
    let s = System::rotation(Alpha::golden());
    let arc = CircleArc::from_endpoints(0.1, 0.45).unwrap();
    let u = TargetSet::Arc(arc);
    let m = 100_000;
    let points = s.sample_points(m, 8);
    let before = points.iter().filter(|p| u.contains(**p)).count() as f64 / m as f64;
    let after = points.iter().filter(|p| u.contains(s.step(**p))).count() as f64 / m as f64;
    let p = u.measure();
    assert!((before - after).abs() <= 4.0 * (p * (1.0 - p) / m as f64).sqrt());
}

#[test]
fn empirical_kac_within_band() {
    let s = System::rotation(Alpha::golden());
    let u = TargetSet::Arc(CircleArc::from_endpoints(0.3, 0.32).unwrap());
    let e = empirical_distributions(&s, &u, &SamplingPlan::new(100_000, 12)).unwrap();
    assert_eq!(e.nothit, 0.0);
    let band = 5.0 / (e.conditional_samples as f64).sqrt();
    assert!((e.kac - 1.0).abs() <= band, "{} vs band {band}", e.kac);
    assert!((e.f.final_value() + e.nothit - 1.0).abs() < 1e-12);
}
