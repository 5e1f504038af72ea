//! Sample statistics of the generators against their analytic values.

use fracwave::stats::linear_fit;
use fracwave::synth::{
    analytic_h_binomial, fgn_autocovariance, gen_binomial_cascade, gen_fbm, gen_fgn,
    GeneratorSpec,
};

fn autocovariance(x: &[f64], lag: usize) -> f64 {
    let n = x.len();
    let mean = x.iter().sum::<f64>() / n as f64;
    (0..n - lag).map(|i| (x[i] - mean) * (x[i + lag] - mean)).sum::<f64>() / n as f64
}

#[test]
fn half_hurst_noise_is_uncorrelated() {
    for seed in 0..3 {
        let x = gen_fgn(0.5, 16, seed).unwrap();
        let r1 = autocovariance(x.samples(), 1) / autocovariance(x.samples(), 0);
        assert!(r1.abs() <= 0.02, "seed {seed}: {r1}");
    }
}

#[test]
fn low_lag_covariances_match_the_model() {
    // gamma(1) = (2^1.4 - 2) / 2 and gamma(2) = (3^1.4 - 2^2.4 + 1) / 2 at H = 0.7
    let g1 = (2f64.powf(1.4) - 2.0) / 2.0;
    let g2 = (3f64.powf(1.4) - 2f64.powf(2.4) + 1.0) / 2.0;
    assert!((fgn_autocovariance(0.7, 1) - g1).abs() < 1e-15);
    assert!((fgn_autocovariance(0.7, 2) - g2).abs() < 1e-15);
    for seed in 0..3 {
        let x = gen_fgn(0.7, 16, seed).unwrap();
        for (lag, want) in [(1, g1), (2, g2)] {
            let got = autocovariance(x.samples(), lag);
            assert!((got - want).abs() <= 0.02, "seed {seed} lag {lag}: {got} vs {want}");
        }
    }
}

#[test]
fn moments_of_unit_fgn() {
    let n = 1 << 16;
    for h in [0.3, 0.5, 0.7] {
        // the standard error of the mean of fGn is n^(H - 1)
        let mean_bound = f64::max(0.02, 3.0 * (n as f64).powf(h - 1.0));
        for seed in 0..5 {
            let x = gen_fgn(h, 16, seed).unwrap();
            assert!(x.mean().abs() <= mean_bound, "H={h} seed={seed}: mean {}", x.mean());
            assert!((x.variance() - 1.0).abs() <= 0.05, "H={h} seed={seed}: var {}", x.variance());
        }
    }
}

#[test]
fn fbm_increment_variance_scales_as_power_law() {
    for (h, seed) in [(0.3, 1u64), (0.5, 2), (0.7, 3)] {
        let b = gen_fbm(h, 16, seed).unwrap();
        let y = b.samples();
        let lags: Vec<usize> = (1..=64).collect();
        let lx: Vec<f64> = lags.iter().map(|&t| (t as f64).ln()).collect();
        let ly: Vec<f64> = lags
            .iter()
            .map(|&t| {
                let m = (0..y.len() - t).map(|i| (y[i + t] - y[i]).powi(2)).sum::<f64>()
                    / (y.len() - t) as f64;
                m.ln()
            })
            .collect();
        let slope = linear_fit(&lx, &ly).unwrap().slope;
        assert!((slope - 2.0 * h).abs() <= 0.1, "H={h}: slope {slope}");
    }
}

#[test]
fn fbm_is_the_running_sum_of_fgn() {
    let noise = gen_fgn(0.6, 10, 4).unwrap();
    let walk = gen_fbm(0.6, 10, 4).unwrap();
    let mut acc = 0.0;
    for (n, w) in noise.samples().iter().zip(walk.samples()) {
        acc += n;
        assert_eq!(acc, *w);
    }
}

#[test]
fn analytic_cascade_exponent_limits() {
    let a: f64 = 0.75;
    assert_eq!(analytic_h_binomial(1.0, a), 1.0);
    // h(q) - 1/q approaches -log2(a) from above as q grows
    let asymptote = -a.log2();
    let h10 = analytic_h_binomial(10.0, a);
    assert!((h10 - 0.1 - asymptote).abs() <= 0.06, "{h10}");
    for q in [-4.0, 0.5, 3.0, 9.0] {
        assert!((analytic_h_binomial(q, a) - analytic_h_binomial(q, 1.0 - a)).abs() < 1e-12);
    }
}

#[test]
fn cascade_by_hand() {
    assert_eq!(gen_binomial_cascade(0.75, 1, None).unwrap().samples(), &[0.75, 0.25]);
    let x = gen_binomial_cascade(0.75, 3, None).unwrap();
    let b = 0.25f64;
    let a = 0.75f64;
    let want = [
        a * a * a,
        a * a * b,
        a * a * b,
        a * b * b,
        a * a * b,
        a * b * b,
        a * b * b,
        b * b * b,
    ];
    for (g, w) in x.samples().iter().zip(want) {
        assert!((g - w).abs() < 1e-16);
    }
}

#[test]
fn spec_strings_are_deterministic() {
    for s in ["fgn:H=0.7,n=12,seed=42", "fbm:H=0.3,n=10,seed=1", "white:n=8,seed=7", "cascade:a=0.6,n=9,shuffle=5"] {
        let spec = GeneratorSpec::parse(s).unwrap();
        assert_eq!(spec.generate().unwrap(), spec.generate().unwrap(), "{s}");
        assert_eq!(spec.to_string(), s);
    }
}
