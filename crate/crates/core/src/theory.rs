//! Information-theoretic limits for low-energy coding of equiprobable data.

use crate::error::{Error, Result};

/// Absolute tolerance on the probability returned by [`inverse_entropy`].
pub const INVERSE_TOLERANCE: f64 = 1e-9;

/// One point on the optimal rate vs. energy-reduction curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffPoint {
    pub ones_fraction: f64,
    pub rate: f64,
    pub energy_reduction_pct: f64,
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} = {x} is outside [0, 1]")))
    }
}

/// Binary entropy `H(f)` in bits, with `H(0) = H(1) = 0`.
pub fn binary_entropy(f: f64) -> Result<f64> {
    check_unit("f", f)?;
    Ok(entropy_unchecked(f))
}

fn entropy_unchecked(f: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(f) + term(1.0 - f)
}

/// The unique `f` in `[0, 0.5]` with `H(f) = rate`, found by bisection.
pub fn inverse_entropy(rate: f64) -> Result<f64> {
    check_unit("rate", rate)?;
    // Endpoints are exact; near 1/2 H is too flat for bisection to resolve f.
    if rate == 1.0 {
        return Ok(0.5);
    }
    if rate == 0.0 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    // H is increasing on [0, 0.5]; bisect well past the stated tolerance so
    // that H(f) also lands close to `rate` where H is steep.
    while hi - lo > INVERSE_TOLERANCE * 1e-4 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if entropy_unchecked(mid) < rate {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Energy reduction (percent) of ideal coding at ones-fraction `f` and rate
/// `rate`, against the uncoded baseline of one 1 per two dataword bits.
pub fn energy_reduction_pct(f: f64, rate: f64) -> f64 {
    100.0 * (1.0 - 2.0 * f / rate)
}

/// Samples the optimal trade-off curve at `sample_count` uniformly spaced
/// ones-fractions in `(0, 0.5]`, in increasing `f`.
pub fn tradeoff_curve(sample_count: usize) -> Result<Vec<TradeoffPoint>> {
    if sample_count < 2 {
        return Err(Error::invalid("tradeoff curve needs at least 2 samples"));
    }
    Ok((1..=sample_count)
        .map(|i| {
            let f = 0.5 * i as f64 / sample_count as f64;
            let rate = entropy_unchecked(f);
            TradeoffPoint { ones_fraction: f, rate, energy_reduction_pct: energy_reduction_pct(f, rate) }
        })
        .collect())
}

/// Expected 1s when sending `n_bits` of data whose information rate is
/// `rate`, either perfectly compressed (`n·R/2`) or perfectly line coded
/// (`H⁻¹(R)·n`). Returns `(compression, coding)`.
pub fn compression_vs_coding(rate: f64, n_bits: f64) -> Result<(f64, f64)> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::invalid(format!("rate = {rate} is outside (0, 1]")));
    }
    if !(n_bits > 0.0 && n_bits.is_finite()) {
        return Err(Error::invalid(format!("bit count {n_bits} must be positive")));
    }
    Ok((n_bits * rate / 2.0, inverse_entropy(rate)? * n_bits))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from an independent 40-digit root finder.
    const INV_0_1: f64 = 0.012_986_862_055_517_785;
    const INV_0_5: f64 = 0.110_027_864_438_359_55;
    const INV_0_8: f64 = 0.243_003_853_808_953_9;
    const H_0_2430: f64 = 0.799_993_682_366_683_4;

    #[test]
    fn entropy_anchors() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.2430).unwrap() - H_0_2430).abs() < 1e-12);
    }

    #[test]
    fn entropy_rejects_out_of_range() {
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.5).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
        assert!(inverse_entropy(1.01).is_err());
    }

    #[test]
    fn inverse_anchors() {
        assert!((inverse_entropy(1.0).unwrap() - 0.5).abs() < INVERSE_TOLERANCE);
        assert!((inverse_entropy(0.1).unwrap() - INV_0_1).abs() < INVERSE_TOLERANCE);
        assert!((inverse_entropy(0.5).unwrap() - INV_0_5).abs() < INVERSE_TOLERANCE);
        assert!((inverse_entropy(0.8).unwrap() - INV_0_8).abs() < INVERSE_TOLERANCE);
        assert_eq!(inverse_entropy(0.0).unwrap(), 0.0);
    }

    #[test]
    fn inverse_composes_to_identity_on_grid() {
        for i in 0..=10_000 {
            let r = i as f64 / 10_000.0;
            let f = inverse_entropy(r).unwrap();
            assert!((0.0..=0.5).contains(&f));
            assert!((binary_entropy(f).unwrap() - r).abs() < 1e-8, "R = {r}");
        }
    }

    #[test]
    fn entropy_is_symmetric() {
        for i in 0..=1000 {
            let f = i as f64 / 1000.0;
            assert!((binary_entropy(f).unwrap() - binary_entropy(1.0 - f).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn curve_endpoint_and_monotone() {
        let curve = tradeoff_curve(500).unwrap();
        let last = curve.last().unwrap();
        assert_eq!(last.ones_fraction, 0.5);
        assert_eq!(last.rate, 1.0);
        assert!(last.energy_reduction_pct.abs() < 1e-12);
        for w in curve.windows(2) {
            assert!(w[1].rate > w[0].rate);
            assert!(w[1].energy_reduction_pct < w[0].energy_reduction_pct);
        }
        for p in &curve {
            assert!((p.energy_reduction_pct - 100.0 * (1.0 - 2.0 * p.ones_fraction / p.rate)).abs() < 1e-9);
        }
        assert!(tradeoff_curve(1).is_err());
    }

    #[test]
    fn curve_point_near_rate_0_8() {
        let curve = tradeoff_curve(10_000).unwrap();
        let p = curve.iter().min_by(|a, b| (a.rate - 0.8).abs().total_cmp(&(b.rate - 0.8).abs())).unwrap();
        assert!((p.energy_reduction_pct - 39.2).abs() <= 1.5);
    }

    #[test]
    fn compression_vs_coding_examples() {
        let (comp, code) = compression_vs_coding(0.1, 1000.0).unwrap();
        assert!((comp - 50.0).abs() < 1e-9);
        assert!((code - 13.0).abs() < 0.5);

        let (comp, code) = compression_vs_coding(1.0, 100.0).unwrap();
        assert!((comp - 50.0).abs() < 1e-9);
        assert!((code - 50.0).abs() < 1e-6);

        let (comp, code) = compression_vs_coding(0.5, 1000.0).unwrap();
        assert!((comp - 250.0).abs() < 1e-9);
        assert!((code - 1000.0 * INV_0_5).abs() < 1e-5);

        assert!(compression_vs_coding(0.0, 10.0).is_err());
        assert!(compression_vs_coding(0.5, 0.0).is_err());
    }

    #[test]
    fn coding_uses_fewer_ones_than_compression() {
        for i in 1..1000 {
            let r = i as f64 / 1000.0;
            let (comp, code) = compression_vs_coding(r, 1.0).unwrap();
            assert!(code <= comp, "R = {r}");
        }
    }
}
