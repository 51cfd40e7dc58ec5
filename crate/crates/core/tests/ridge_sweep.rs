//! Cross-checks of the rotating-line sweep against the O(N³)
//! brute-force enumeration, plus the sweep's self-consistency
//! contracts.

use greedylab_core::dictionary::{ridge2d_argmax, Dictionary, DictionaryElement, RidgeDictionary};
use greedylab_core::space::{HVector, SampleSet};
use greedylab_oracle::halfplane_brute_max;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn random_residual(rng: &mut ChaCha20Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

#[test]
fn sweep_matches_brute_force_exactly_on_random_instances() {
    let mut rng = ChaCha20Rng::seed_from_u64(2024);
    for case in 0..60 {
        let n = rng.gen_range(1..=60);
        let samples = SampleSet::generate(n, rng.gen());
        let r = random_residual(&mut rng, n);
        let fast = ridge2d_argmax(&HVector::dense(r.clone()), &samples).unwrap();
        let brute = halfplane_brute_max(samples.points(), &r);
        assert_eq!(
            fast.value, brute,
            "case {case}: sweep {} vs brute {} on n={n}",
            fast.value, brute
        );
    }
}

#[test]
fn sweep_matches_brute_force_on_structured_residuals() {
    // Sparse and signed residual patterns exercise ties and empty-ish
    // optima.
    let mut rng = ChaCha20Rng::seed_from_u64(513);
    for _ in 0..20 {
        let n = rng.gen_range(2..=40);
        let samples = SampleSet::generate(n, rng.gen());
        let mut r = vec![0.0; n];
        for _ in 0..rng.gen_range(1..=n) {
            let i = rng.gen_range(0..n);
            r[i] = if rng.gen() { 1.0 } else { -1.0 };
        }
        let fast = ridge2d_argmax(&HVector::dense(r.clone()), &samples).unwrap();
        let brute = halfplane_brute_max(samples.points(), &r);
        assert_eq!(fast.value, brute);
    }
}

#[test]
fn sweep_handles_grids_with_many_collinear_points() {
    // A 5x5 lattice has collinear runs through every pivot.
    let mut points = Vec::new();
    for i in 0..5 {
        for j in 0..5 {
            points.push([0.1 + 0.2 * i as f64, 0.1 + 0.2 * j as f64]);
        }
    }
    let samples = SampleSet::with_points(points);
    let mut rng = ChaCha20Rng::seed_from_u64(77);
    for _ in 0..10 {
        let r = random_residual(&mut rng, 25);
        let fast = ridge2d_argmax(&HVector::dense(r.clone()), &samples).unwrap();
        let brute = halfplane_brute_max(samples.points(), &r);
        assert_eq!(fast.value, brute);
    }
}

#[test]
fn returned_elements_are_self_consistent_and_bounded() {
    let mut rng = ChaCha20Rng::seed_from_u64(31);
    for _ in 0..25 {
        let n = rng.gen_range(1..=80);
        let samples = SampleSet::generate(n, rng.gen());
        let dict = RidgeDictionary::new(&samples);
        let r = HVector::dense(random_residual(&mut rng, n));
        let sel = dict.argmax(&r).unwrap();
        let DictionaryElement::Ridge { direction, offset, captured } = &sel.element else {
            panic!("ridge dictionaries return ridge elements")
        };

        // The captured list is exactly the set the halfplane captures.
        let derived: Vec<usize> = samples
            .points()
            .iter()
            .enumerate()
            .filter(|(_, p)| direction[0] * p[0] + direction[1] * p[1] + offset >= 0.0)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(&derived, captured);

        // Re-evaluating the captured set reproduces the value.
        let rs = r.as_dense().unwrap();
        let direct: f64 = captured.iter().map(|&i| rs[i]).sum();
        assert!(((direct / n as f64).abs() - sel.value).abs() <= 1e-12);

        // The realized atom is a unit-bounded dictionary element.
        let atom = dict.realize(&sel.element).unwrap();
        assert!(samples.space().norm(&atom).unwrap() <= 1.0 + 1e-9);
    }
}

#[test]
fn sweep_value_dominates_every_single_point_split() {
    // Lower bound sanity: each {i} alone is achievable, so the optimum
    // is at least max |r_i|/N.
    let mut rng = ChaCha20Rng::seed_from_u64(8);
    let n = 50;
    let samples = SampleSet::generate(n, 4242);
    let r = random_residual(&mut rng, n);
    let sel = ridge2d_argmax(&HVector::dense(r.clone()), &samples).unwrap();
    let single_best = r.iter().map(|x| x.abs()).fold(0.0f64, f64::max) / n as f64;
    assert!(sel.value >= single_best - 1e-15);
}
