//! Tail sums of power series, used wherever a coefficient vector carries an
//! analytic power-law tail instead of a materialized suffix.

/// Sum of `k^{-q}` over all integers `k > m`, for `q > 1`.
///
/// The first block of terms is summed directly; the remainder is evaluated
/// with an Euler-Maclaurin expansion whose truncation error is far below
/// `f64` resolution for the block size used here.
pub(crate) fn tail_power_sum(m: usize, q: f64) -> f64 {
    assert!(q > 1.0, "tail power sum requires exponent > 1, got {q}");
    const EXPLICIT_TERMS: usize = 512;
    let mut sum = 0.0;
    for k in (m + 1)..=(m + EXPLICIT_TERMS) {
        sum += (k as f64).powf(-q);
    }
    // Remainder over k > m + EXPLICIT_TERMS, expanded about a = m + EXPLICIT_TERMS + 1:
    // sum_{k >= a} k^-q = a^{1-q}/(q-1) + a^-q/2 + q a^{-q-1}/12 - q(q+1)(q+2) a^{-q-3}/720 + ...
    let a = (m + EXPLICIT_TERMS + 1) as f64;
    let fa = a.powf(-q);
    let remainder = a * fa / (q - 1.0) + fa / 2.0 + q * fa / (12.0 * a)
        - q * (q + 1.0) * (q + 2.0) * fa / (720.0 * a * a * a);
    sum + remainder
}

#[cfg(test)]
mod tests {
    use super::tail_power_sum;

    /// Direct summation, smallest terms first so the accumulation stays
    /// accurate. Only usable when the terms reach f64 negligibility within
    /// the index cap, i.e. for reasonably fast decay.
    fn brute_force(m: usize, q: f64) -> f64 {
        let first = ((m + 1) as f64).powf(-q);
        let mut hi = m + 1;
        while (hi as f64).powf(-q) > 1e-22 * first && hi < 50_000_000 {
            hi *= 2;
        }
        let mut sum = 0.0;
        for k in (m + 1..=hi).rev() {
            sum += (k as f64).powf(-q);
        }
        sum
    }

    #[test]
    fn matches_brute_force_fast_decay() {
        for &(m, q) in &[(0usize, 6.0), (5, 6.0), (64, 6.0), (1024, 6.0), (0, 3.0), (17, 4.0)] {
            let exact = brute_force(m, q);
            let got = tail_power_sum(m, q);
            assert!(
                (got - exact).abs() <= 1e-13 * exact.max(1e-300),
                "m={m} q={q}: got {got}, brute force {exact}"
            );
        }
    }

    #[test]
    fn slow_decay_brackets_and_telescopes() {
        for &(m, q) in &[(0usize, 1.2), (10, 1.5), (64, 2.0)] {
            let got = tail_power_sum(m, q);
            // Integral bracket for a decreasing positive summand.
            let integral = ((m + 1) as f64).powf(1.0 - q) / (q - 1.0);
            let upper = ((m + 1) as f64).powf(-q) + integral;
            assert!(got >= integral && got <= upper, "m={m} q={q}: {got}");
            // Splitting off an explicit window must be consistent.
            let window: f64 = ((m + 1)..=(m + 1000)).rev().map(|k| (k as f64).powf(-q)).sum();
            let rest = tail_power_sum(m + 1000, q);
            assert!(
                (got - (window + rest)).abs() <= 1e-12 * got,
                "m={m} q={q}: {got} vs {}",
                window + rest
            );
        }
    }

    #[test]
    fn zeta_references() {
        // zeta(2) = pi^2/6, zeta(4) = pi^4/90, zeta(6) = pi^6/945.
        let pi = std::f64::consts::PI;
        for (q, zeta) in [
            (2.0, pi * pi / 6.0),
            (4.0, pi.powi(4) / 90.0),
            (6.0, pi.powi(6) / 945.0),
        ] {
            let got = tail_power_sum(0, q);
            assert!((got - zeta).abs() < 1e-14 * zeta, "q={q}: {got} vs {zeta}");
        }
    }
}
