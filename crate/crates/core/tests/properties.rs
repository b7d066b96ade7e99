mod common;

use common::{first_violated_prefix, random_spectrum, random_state};
use loccxform::oracle::random_unitary;
use loccxform::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn spectrum(max_n: usize) -> impl Strategy<Value = Spectrum> {
    prop::collection::vec(0.0f64..1.0, 1..=max_n).prop_filter_map("nonzero", |w| {
        let s: f64 = w.iter().sum();
        (s > 1e-3).then(|| Spectrum::new(w.iter().map(|x| x / s).collect()).unwrap())
    })
}

fn sup_weak_p(a: &Spectrum, b: &Spectrum) -> f64 {
    if weak_submajorizes(a, b, 1.0) {
        return 1.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if weak_submajorizes(a, b, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 256,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn aligned_fidelity_is_symmetric(a in spectrum(5), b in spectrum(5)) {
        let (x, y) = (aligned_fidelity(&a, &b), aligned_fidelity(&b, &a));
        prop_assert!((x - y).abs() <= 1e-15);
        prop_assert!((0.0..=1.0).contains(&x));
        prop_assert!((aligned_fidelity(&a, &a) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn tensor_commutes(a in spectrum(4), b in spectrum(4)) {
        let (ab, ba) = (tensor(&a, &b), tensor(&b, &a));
        prop_assert!(ab.approx_eq(&ba, 1e-15));
        prop_assert_eq!(ab.len(), a.len() * b.len());
        prop_assert!((monotones(&ab).at(1) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn majorization_matches_prefix_sums(a in spectrum(5), b in spectrum(5)) {
        let v = majorizes(&a, &b);
        prop_assert_eq!(v.failing_index, first_violated_prefix(a.probs(), b.probs()));
        prop_assert_eq!(v.deterministic, v.margin >= -1e-10);
    }

    #[test]
    fn conclusive_one_iff_majorized(a in spectrum(5), b in spectrum(5)) {
        let p = conclusive_probability(&a, &b);
        prop_assert_eq!(p >= 1.0 - 1e-12, majorizes(&a, &b).deterministic);
    }

    #[test]
    fn conclusive_is_sup_of_weak_submajorization(a in spectrum(5), b in spectrum(5)) {
        prop_assert!((conclusive_probability(&a, &b) - sup_weak_p(&a, &b)).abs() <= 1e-9);
    }

    #[test]
    fn shared_bell_pair_never_hurts(a in spectrum(3), b in spectrum(3)) {
        let bell = Spectrum::uniform(2).unwrap();
        let with = conclusive_probability(&tensor(&a, &bell), &tensor(&b, &bell));
        prop_assert!(with >= conclusive_probability(&a, &b) - 1e-10);
    }

    #[test]
    fn staircase_invariants(a in spectrum(6), b in spectrum(6)) {
        let st = build_staircase(&a, &b).unwrap();
        let segs = st.segments();
        prop_assert_eq!(segs.last().unwrap().l, 1);
        for w in segs.windows(2) {
            prop_assert!(w[0].l > w[1].l);
            prop_assert!(w[0].r < w[1].r);
        }
        prop_assert!(segs[0].l <= st.dim());
        prop_assert!(segs[0].r >= 0.0);
        prop_assert!(segs.iter().all(|s| s.a >= 0.0 && s.b > 0.0));
        let sa: f64 = segs.iter().map(|s| s.a).sum();
        let sb: f64 = segs.iter().map(|s| s.b).sum();
        let srb: f64 = segs.iter().map(|s| s.r * s.b).sum();
        prop_assert!((sa - 1.0).abs() <= 1e-12 && (sb - 1.0).abs() <= 1e-12);
        prop_assert!((srb - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn report_is_self_consistent(a in spectrum(5), b in spectrum(5)) {
        let r = optimal_fidelity(&a, &b).unwrap();
        prop_assert!((r.f_opt - aligned_fidelity(&r.xi, &b)).abs() <= 1e-12);
        prop_assert!((r.trace_distance - 2.0 * (1.0 - r.f_opt).sqrt()).abs() <= 1e-12);
        prop_assert!(r.f_opt >= r.conclusive_p - 1e-12);
        prop_assert!(majorizes(&a, &r.xi).deterministic);
        prop_assert!(r.f_opt >= aligned_fidelity(&a, &b) - 1e-12);
    }

    #[test]
    fn uniform_target_leaves_state_alone(a in spectrum(5)) {
        let n = a.len();
        let r = optimal_fidelity(&a, &Spectrum::uniform(n).unwrap()).unwrap();
        prop_assert!(r.xi.approx_eq(&a, 1e-12));
        prop_assert!((r.f_opt - concentration_fidelity(&a, n).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn concentration_fidelity_is_monotone(a in spectrum(5), b in spectrum(5)) {
        if majorizes(&a, &b).deterministic {
            let n = a.len().max(b.len());
            prop_assert!(
                concentration_fidelity(&a, n).unwrap() >= concentration_fidelity(&b, n).unwrap() - 1e-10
            );
        }
    }

    #[test]
    fn trivial_catalyst_is_a_noop(a in spectrum(4), b in spectrum(4)) {
        let one = Spectrum::new(vec![1.0]).unwrap();
        let rep = catalysis_check(&a, &b, &one).unwrap();
        prop_assert_eq!(rep.convertible_bare, rep.convertible_with_catalyst);
        prop_assert!(rep.delta_t.abs() <= 1e-9);
        prop_assert!(rep.delta_t <= 2.0);
    }

    #[test]
    fn robustness_interval_is_ordered(a in spectrum(4), b in spectrum(4), eps in 0.0f64..=2.0) {
        let iv = robustness_interval(&a, &b, eps).unwrap();
        prop_assert!(0.0 <= iv.lower && iv.lower <= iv.upper && iv.upper <= 2.0);
    }

    #[test]
    fn single_precision_tracks_double(a in spectrum(4), b in spectrum(4)) {
        let a32 = Spectrum32::new(a.probs().iter().map(|x| *x as f32).collect()).unwrap();
        let b32 = Spectrum32::new(b.probs().iter().map(|x| *x as f32).collect()).unwrap();
        let (f64v, f32v) = (
            optimal_fidelity(&a, &b).unwrap().f_opt,
            optimal_fidelity(&a32, &b32).unwrap().f_opt,
        );
        prop_assert!((f64v - f32v as f64).abs() <= 1e-4, "{} vs {}", f64v, f32v);
    }
}

#[test]
fn spectrum_invariant_under_local_unitaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=4 {
        for _ in 0..25 {
            let st = random_state(&mut rng, n);
            let before = schmidt_spectrum(&st).unwrap();
            let u = random_unitary(n, &mut rng);
            let v = random_unitary(n, &mut rng);
            let rotated = State::from_matrix(&(&u * st.to_matrix() * v.transpose())).unwrap();
            let after = schmidt_spectrum(&rotated).unwrap();
            assert!(before.approx_eq(&after, 1e-10), "{before:?} {after:?}");
        }
    }
}

#[test]
fn weak_submajorization_binary_search_example() {
    let a = Spectrum::new(vec![0.55, 0.25, 0.2]).unwrap();
    let b = Spectrum::new(vec![0.5, 0.4, 0.1]).unwrap();
    assert!((sup_weak_p(&a, &b) - 0.9).abs() < 1e-9);
    let _ = random_spectrum(&mut ChaCha8Rng::seed_from_u64(0), 3);
}
