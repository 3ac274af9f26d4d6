use mub_core::field::FieldCtx;
use mub_core::mub::{construct_complete_mubs, verify_unbiased, MubFamily};
use mub_core::paths::{
    assignment_stats, enumerate_paths, in_gamma, is_reduced, reduce, reduce_with, ClosedPath, PathAssignment,
    ReductionOrder,
};
use mub_core::rng::rng_from_seed;
use mub_core::sampling::{draw_sample, gram, trace_moment};
use mub_core::spectra::{eigenvalues_hermitian, ks_distance, mp_cdf, mp_pdf, Esd, MpParams};
use proptest::prelude::*;
use std::sync::OnceLock;

fn family(n: u64) -> &'static MubFamily {
    static CACHE: OnceLock<Vec<(u64, MubFamily)>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        [2u64, 3, 5, 7, 9, 11, 13, 25].iter().map(|&n| (n, construct_complete_mubs(n).unwrap())).collect()
    });
    &all.iter().find(|(k, _)| *k == n).unwrap().1
}

fn paths_up_to(l: usize) -> &'static [ClosedPath] {
    static CACHE: OnceLock<Vec<ClosedPath>> = OnceLock::new();
    let all = CACHE.get_or_init(|| (1..=7).flat_map(|l| enumerate_paths(l).unwrap()).collect());
    let end = all.partition_point(|g| g.len() <= l);
    &all[..end]
}

fn reduced_paths() -> Vec<ClosedPath> {
    paths_up_to(6).iter().filter(|g| g.len() > 1 && is_reduced(g)).cloned().collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn field_multiplication_is_associative_and_invertible(
        pk in prop::sample::select(vec![(3u64, 2u32), (5, 2), (3, 3), (7, 2), (11, 2), (3, 4)]),
        a in 0u32..1000, b in 0u32..1000, c in 0u32..1000,
    ) {
        let f = FieldCtx::new(pk.0, pk.1).unwrap();
        let q = f.order();
        let (x, y, z) = (f.from_index(a % q), f.from_index(b % q), f.from_index(c % q));
        prop_assert_eq!(f.mul(&f.mul(&x, &y), &z), f.mul(&x, &f.mul(&y, &z)));
        prop_assert_eq!(f.mul(&x, &f.add(&y, &z)), f.add(&f.mul(&x, &y), &f.mul(&x, &z)));
        prop_assert_eq!(f.trace(&f.add(&x, &y)), (f.trace(&x) + f.trace(&y)) % f.characteristic());
        if !f.is_zero(&x) {
            prop_assert_eq!(f.mul(&x, &f.inv(&x).unwrap()), f.one());
        }
    }

    #[test]
    fn gram_invariants_and_trace_moments(
        n in prop::sample::select(vec![3u64, 5, 7, 11, 13]),
        p in 1usize..12,
        seed in any::<u64>(),
    ) {
        let fam = family(n);
        let sample = draw_sample(fam, p, &mut rng_from_seed(seed)).unwrap();
        let g = gram(&sample);
        prop_assert!(g.matrix().hermitian_defect() <= 1e-12);
        for i in 0..p {
            prop_assert!((g.matrix()[(i, i)] - 1.0).norm() <= 1e-12);
        }
        let spectrum = eigenvalues_hermitian(&g, 1e-9).unwrap();
        prop_assert!((spectrum.sum() - p as f64).abs() <= 1e-8);
        prop_assert!(spectrum.values().iter().all(|&x| x >= -1e-8));
        let rank = spectrum.values().iter().filter(|&&x| x > 1e-8).count();
        prop_assert!(rank <= n as usize);
        for l in 1..=6u32 {
            let direct = trace_moment(&g, l as usize).unwrap();
            prop_assert!((direct - spectrum.moment(l)).abs() <= 1e-8 * direct.max(1.0), "l = {}", l);
        }
    }

    #[test]
    fn rows_are_bitwise_pool_vectors(n in prop::sample::select(vec![2u64, 9, 25]), seed in any::<u64>()) {
        let fam = family(n);
        let s = draw_sample(fam, 4, &mut rng_from_seed(seed)).unwrap();
        for (i, &at) in s.provenance().iter().enumerate() {
            prop_assert_eq!(s.row(i), fam.vector(at));
        }
    }

    #[test]
    fn mp_cdf_matches_midpoint_integral(y in 0.05f64..0.95, t in 0.0f64..1.0) {
        // Midpoint rule in theta, where the substituted integrand is smooth.
        let mp = MpParams::new(y).unwrap();
        let (a, b) = (mp.a(), mp.b());
        let x = a + (b - a) * t;
        let theta_max = t.sqrt().asin();
        let steps = 4000;
        let h = theta_max / steps as f64;
        let integral: f64 = (0..steps)
            .map(|k| {
                let th = (k as f64 + 0.5) * h;
                let u = a + (b - a) * th.sin().powi(2);
                mp_pdf(&mp, u) * 2.0 * (b - a) * th.sin() * th.cos() * h
            })
            .sum();
        prop_assert!((mp_cdf(&mp, x) - integral).abs() <= 1e-8);
    }

    #[test]
    fn esd_is_a_distribution(values in prop::collection::vec(-1.0f64..5.0, 1..40), x in -2.0f64..6.0, dx in 0.0f64..2.0) {
        let esd = Esd::from_values(values.clone());
        prop_assert!(esd.cdf(x) <= esd.cdf(x + dx));
        prop_assert_eq!(esd.cdf(-10.0), 0.0);
        prop_assert_eq!(esd.cdf(10.0), 1.0);
        let v = values[0];
        let k = values.iter().filter(|&&w| w == v).count();
        prop_assert!((esd.cdf(v) - esd.cdf_left(v) - k as f64 / values.len() as f64).abs() < 1e-12);
        let mp = MpParams::new(0.5).unwrap();
        let d = ks_distance(&esd, &mp);
        prop_assert!((0.0..=1.0).contains(&d));
        prop_assert_eq!(d, ks_distance(&esd, &mp));
    }

    #[test]
    fn reduction_trace_invariants(idx in 0usize..1000) {
        let all = paths_up_to(7);
        let g = &all[idx * all.len() / 1000];
        prop_assert!(g.is_canonical());
        prop_assert!(g.vertex_count() <= g.len());
        let t = reduce(g);
        prop_assert_eq!(t.reduced.len(), g.len() - t.repeats - t.singletons);
        prop_assert_eq!(t.reduced.vertex_count(), g.vertex_count() - t.singletons);
        prop_assert!(is_reduced(&t.reduced));
        prop_assert_eq!(in_gamma(g), reduce_with(g, ReductionOrder::LastPosition).ends_in_loop());
        if in_gamma(g) {
            prop_assert_eq!(g.len(), g.vertex_count() + t.repeats);
        }
    }

    #[test]
    fn assignment_stats_ranges(idx in 0usize..1000, vectors in prop::collection::vec(0usize..12, 7)) {
        let all = paths_up_to(6);
        let g = &all[idx * all.len() / 1000];
        let s = assignment_stats(g, &PathAssignment::new(vectors)).unwrap();
        prop_assert!(s.crossings <= g.len());
        prop_assert!(1 <= s.distinct && s.distinct <= g.vertex_count());
    }

    #[test]
    fn crossings_lower_bound_on_reduced_paths(
        idx in 0usize..1000,
        width in 2usize..12,
        raw in prop::collection::vec(0usize..12, 6),
    ) {
        let reduced = reduced_paths();
        let g = &reduced[idx * reduced.len() / 1000];
        let vectors: Vec<usize> = raw.iter().map(|x| x % width).collect();
        let s = assignment_stats(g, &PathAssignment::new(vectors)).unwrap();
        prop_assume!(s.distinct >= 2);
        let v = g.vertex_count();
        prop_assert!(s.crossings >= s.distinct.max((3 * s.distinct).saturating_sub(v)), "{} {:?}", g, s);
    }
}

#[test]
fn supported_families_are_unbiased() {
    for n in [2u64, 3, 5, 7, 9, 11, 13, 25] {
        let r = verify_unbiased(family(n), 1e-10);
        assert!(r.pass, "n = {n}: {r:?}");
    }
}
