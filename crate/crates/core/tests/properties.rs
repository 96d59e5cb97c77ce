use k3fix::cyclotomic::{divisors, gcd, q, qf, ramanujan_sum, CyclotomicNumber};
use k3fix::elliptic::{fiber_configuration, fiber_multiset, Poly, WeierstrassFamily};
use k3fix::lefschetz::{
    all_dims, chi_from_dims, enumerate_type_counts, lefschetz_rhs, oracle_type_counts, DimsMode, EulerProfile,
    TypeCountConstraints, TypeCountVector,
};
use k3fix::localtypes::{aggregation_map, power_map, LocalType, PowerImage};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn cyclo(order: u32) -> impl Strategy<Value = CyclotomicNumber> {
    prop::collection::vec((-9i64..=9, 1i64..=5), order as usize)
        .prop_map(move |v| CyclotomicNumber::new(order, v.into_iter().map(|(a, b)| qf(a, b)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn emitted_type_counts_have_zero_residual(
        (n, k) in prop_oneof![Just((14u32, 2u32)), Just((21, 3))],
        base in prop::collection::vec(0u32..=6, 3),
        alpha in 0i64..=2,
        on_curve in 0u32..=4,
    ) {
        let c = TypeCountConstraints::against_base(n, k, &base, alpha, on_curve);
        let agg = aggregation_map(n, k);
        for v in enumerate_type_counts(n, &c).unwrap() {
            prop_assert!(v.residual().is_zero(), "{v}");
            for (&j, idx) in &agg.groups {
                let t: u32 = idx.iter().map(|&i| v.m[i as usize - 1]).sum();
                prop_assert!(t <= base[j as usize - 1]);
            }
            let on: u32 = agg.on_curve.iter().map(|&i| v.m[i as usize - 1]).sum();
            prop_assert_eq!(on, on_curve);
        }
    }

    #[test]
    fn residual_vanishes_only_on_solutions(m in prop::collection::vec(0u32..=6, 6), alpha in 0i64..=2) {
        let v = TypeCountVector::new(14, m.clone(), alpha).unwrap();
        let sols = enumerate_type_counts(14, &TypeCountConstraints::euler_box(14, alpha)).unwrap();
        let inside = m.iter().sum::<u32>() as i64 + 2 * alpha <= 24;
        if inside {
            prop_assert_eq!(v.residual().is_zero(), sols.contains(&v));
        }
    }

    #[test]
    fn dims_vectors_add_up(n in prop::sample::select(vec![14u32, 21, 28, 42]), pick in any::<prop::sample::Index>()) {
        let all = all_dims(n, DimsMode::Purely);
        let d = pick.get(&all);
        prop_assert_eq!(d.weighted_total(), 22);
        prop_assert_eq!(chi_from_dims(d, n), 24);
        prop_assert_eq!(chi_from_dims(d, 0), 24);
        let p = EulerProfile::from_dims(d);
        prop_assert_eq!(p.of_order(1), Some(24));
    }

    #[test]
    fn ramanujan_closed_form(d in 1u32..=60, m in -120i64..=120) {
        let mut s = CyclotomicNumber::zero(d);
        for k in (1..=d).filter(|&k| gcd(k, d) == 1) {
            s = &s + &CyclotomicNumber::zeta(d, k as i64 * m);
        }
        prop_assert_eq!(s, CyclotomicNumber::from_rational(d, q(ramanujan_sum(d, m))));
    }

    #[test]
    fn power_map_is_transitive(n in 3u32..=60, k1 in 1u32..=60, k2 in 1u32..=60, i in 1u32..=29) {
        prop_assume!(i <= LocalType::max_index(n));
        let direct = power_map(n, k1 * k2, i);
        let stepwise = match power_map(n, k1, i) {
            PowerImage::OnFixedCurve => PowerImage::OnFixedCurve,
            PowerImage::Type(t) => power_map(t.order, k2, t.index),
        };
        prop_assert_eq!(direct, stepwise);
    }

    #[test]
    fn cyclotomic_field_laws(a in cyclo(14), b in cyclo(14), c in cyclo(14)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            prop_assert!((&a * &a.inverse().unwrap()).is_one());
        }
        let e = |x: &CyclotomicNumber| x.embed(42).unwrap();
        prop_assert_eq!(e(&(&a * &b)), &e(&a) * &e(&b));
        let (x, y) = (&a * &b).to_complex();
        let ((ar, ai), (br, bi)) = (a.to_complex(), b.to_complex());
        prop_assert!((x - (ar * br - ai * bi)).abs() < 1e-6 * (1.0 + x.abs()));
        prop_assert!((y - (ar * bi + ai * br)).abs() < 1e-6 * (1.0 + y.abs()));
    }

    #[test]
    fn polynomial_division(a in prop::collection::vec(-5i64..=5, 0..9), b in prop::collection::vec(-5i64..=5, 1..5)) {
        let (pa, pb) = (Poly::from_ints(1, &a), Poly::from_ints(1, &b));
        prop_assume!(!pb.is_zero());
        let (qt, r) = pa.div_rem(&pb).unwrap();
        prop_assert_eq!(qt.mul(&pb).add(&r), pa.clone());
        prop_assert!(r.is_zero() || r.degree() < pb.degree());
        let g = pa.gcd(&pb).unwrap();
        prop_assert!(pa.div_rem(&g).unwrap().1.is_zero());
        prop_assert!(pb.div_rem(&g).unwrap().1.is_zero());
    }

    #[test]
    fn fibers_survive_translation(
        a in prop::collection::vec(-3i64..=3, 0..=9),
        b in prop::collection::vec(-3i64..=3, 0..=13),
        shift in -2i64..=2,
    ) {
        let f = WeierstrassFamily::new("p", Poly::from_ints(1, &a), Poly::from_ints(1, &b)).unwrap();
        let Ok(fibers) = fiber_configuration(&f) else { return Ok(()) };
        prop_assert_eq!(fibers.iter().map(|x| x.euler()).sum::<u32>(), 24);
        // substitute t -> t + shift; the point at infinity stays put
        let sub = |p: &Poly| {
            let lin = Poly::from_ints(1, &[shift, 1]);
            let mut out = Poly::zero(1);
            for (i, c) in p.coeffs().iter().enumerate() {
                out = out.add(&lin.pow(i as u32).scale(c));
            }
            out
        };
        let g = WeierstrassFamily::new("p", sub(&f.a), sub(&f.b)).unwrap();
        prop_assert_eq!(fiber_multiset(&fiber_configuration(&g).unwrap()), fiber_multiset(&fibers));
    }
}

#[test]
fn oracle_matches_exact_enumeration() {
    for n in [7u32, 14] {
        let float = oracle_type_counts(n, &[0, 1, 2], TOL);
        let mut exact = vec![];
        for a in 0..=2 {
            exact.extend(enumerate_type_counts(n, &TypeCountConstraints::euler_box(n, a)).unwrap());
        }
        exact.sort();
        assert_eq!(float, exact, "order {n}");
    }
}

#[test]
fn ramanujan_over_divisors_of_42() {
    for d in divisors(42) {
        for m in 0..42 {
            let mut s = CyclotomicNumber::zero(d);
            for k in (1..=d).filter(|&k| gcd(k, d) == 1) {
                s = &s + &CyclotomicNumber::zeta(d, k as i64 * m);
            }
            assert_eq!(
                s,
                CyclotomicNumber::from_rational(d, q(ramanujan_sum(d, m))),
                "c_{d}({m})"
            );
        }
    }
}

#[test]
fn lefschetz_rhs_is_one_plus_conjugate() {
    for n in [7u32, 14, 21, 28, 42] {
        let want = &CyclotomicNumber::one(n) + &CyclotomicNumber::zeta(n, n as i64 - 1);
        assert_eq!(lefschetz_rhs(n), want);
    }
}
