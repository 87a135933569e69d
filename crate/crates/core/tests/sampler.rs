use sphtet::sampling::{sample_one, Lcg64};
use sphtet::*;

/// Acceptance rate of the default configuration, measured on seed 42:
/// 1000 samples take 1003 candidates. Only `det G < 1e-6` or an edge
/// within 0.05 of 0 or π is rejected, so nearly every draw is kept.
#[test]
fn default_acceptance_rate() {
    let config = SampleConfig::new(42, 1000);
    let attempts: usize = (0..config.count)
        .map(|i| sample_one(&config, i).unwrap().attempts)
        .sum();
    assert_eq!(attempts, 1003);
    let rate = config.count as f64 / attempts as f64;
    println!(
        "acceptance rate {rate:.4} ({attempts} candidates for {} samples)",
        config.count
    );
}

#[test]
fn samples_respect_config() {
    let config = SampleConfig {
        min_margin: 1e-3,
        length_band: (0.2, 2.9),
        ..SampleConfig::new(7, 200)
    };
    for l in sample_tetrahedra(&config).unwrap() {
        assert_eq!(validate_lengths(&l), TetValidity::Valid);
        assert!(gram_det(&l) >= 1e-3);
        assert!(l.0.iter().all(|&x| 0.2 < x && x < 2.9));
    }
}

#[test]
fn different_seeds_differ() {
    let a = sample_tetrahedra(&SampleConfig::new(1, 3)).unwrap();
    let b = sample_tetrahedra(&SampleConfig::new(2, 3)).unwrap();
    assert!(a.iter().zip(&b).all(|(x, y)| x != y));
}

#[test]
fn first_sample_is_pinned() {
    // frozen output of the documented generator; changing the stream
    // changes every population-based check
    let l = sample_tetrahedra(&SampleConfig::new(1, 1)).unwrap()[0];
    let expected = [
        1.4247978514542061,
        1.0895521977200955,
        1.9542644479130749,
        0.34001882003174055,
        0.5974347696423231,
        0.9180591947314565,
    ];
    assert_eq!(l.0, expected);
}

#[test]
fn large_perturbations_usually_leave_the_domain() {
    let regular = TetLengths::splat(std::f64::consts::FRAC_PI_3);
    let outcomes: Vec<_> = (0..200).map(|seed| perturb(&regular, 2.0, seed)).collect();
    let rejected = outcomes
        .iter()
        .filter(|r| matches!(r, Err(GeometryError::NotRealizable(_))))
        .count();
    assert!(rejected > 150, "{rejected} of 200");
    for l in outcomes.iter().flatten() {
        assert_eq!(validate_lengths(l), TetValidity::Valid);
    }
}

#[test]
fn substreams_are_independent_of_order() {
    let mut a = Lcg64::substream(3, 10);
    let _ = Lcg64::substream(3, 9).next_u64();
    let mut b = Lcg64::substream(3, 10);
    assert_eq!(a.next_u64(), b.next_u64());
}
