use hemivar_core::hybrid::draw_perturbation;
use hemivar_core::rng::seeded;

/// Kolmogorov-Smirnov statistic of `samples` against U[0, 1].
fn ks_uniform(samples: &mut [f64]) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let lo = x - k as f64 / n;
            let hi = (k + 1) as f64 / n - x;
            lo.max(hi)
        })
        .fold(0.0, f64::max)
}

#[test]
fn perturbation_step_is_uniform() {
    let n = 100_000;
    let mut rng = seeded(42);
    let mut mu: Vec<f64> = (0..n).map(|_| draw_perturbation(&mut rng, 7, false).1).collect();
    assert!(mu.iter().all(|m| (0.0..=1.0).contains(m)));
    // asymptotic critical value at level 0.01
    let critical = 1.628 / (n as f64).sqrt();
    let d = ks_uniform(&mut mu);
    assert!(d < critical, "KS statistic {d} exceeds {critical}");
}

#[test]
fn perturbation_index_is_uniform() {
    let n = 100_000;
    let dim = 10;
    let mut rng = seeded(43);
    let mut counts = vec![0usize; dim];
    for _ in 0..n {
        counts[draw_perturbation(&mut rng, dim, false).0] += 1;
    }
    let p = 1.0 / dim as f64;
    let mean = n as f64 * p;
    let sd = (n as f64 * p * (1.0 - p)).sqrt();
    for (i, &c) in counts.iter().enumerate() {
        assert!(
            (c as f64 - mean).abs() <= 3.0 * sd,
            "index {i} drawn {c} times, expected {mean} ± {}",
            3.0 * sd
        );
    }
}

#[test]
fn ks_statistic_detects_a_shift() {
    let mut shifted: Vec<f64> = (0..1000).map(|k| (k as f64 / 1000.0).powi(2)).collect();
    assert!(ks_uniform(&mut shifted) > 1.628 / 1000f64.sqrt());
}
