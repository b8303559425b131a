//! Portable elementary functions for the deterministic generators.
//!
//! The matrix generators must be bit-identical across platforms, so they
//! cannot call libm (`ln`, `exp`, `powf` are not guaranteed to round the
//! same way everywhere). These replacements use only IEEE-exact operations
//! (+, -, *, /, sqrt, rounding, bit manipulation) plus polynomial evaluation
//! in a fixed order, which makes every result reproducible bit-for-bit.
//! Accuracy is a few ulps, which is far more than the generators need.

const LN2_HI: f64 = 6.931_471_803_691_238e-1;
const LN2_LO: f64 = 1.908_214_929_270_588e-10;

/// Natural logarithm for finite positive `x`.
pub(crate) fn ln(x: f64) -> f64 {
    debug_assert!(x > 0.0 && x.is_finite());
    let mut x = x;
    let mut e_extra = 0i64;
    // Scale subnormals into the normal range first.
    if x < f64::MIN_POSITIVE {
        x *= 2f64.powi(54);
        e_extra = -54;
    }
    let bits = x.to_bits();
    let mut e = ((bits >> 52) & 0x7ff) as i64 - 1023 + e_extra;
    let mut m = f64::from_bits((bits & 0x000f_ffff_ffff_ffff) | 0x3ff0_0000_0000_0000);
    // Keep m in [0.75, 1.5) so the atanh argument stays small.
    if m > 1.5 {
        m *= 0.5;
        e += 1;
    }
    let t = (m - 1.0) / (m + 1.0);
    let t2 = t * t;
    // ln(m) = 2 t (1 + t^2/3 + t^4/5 + ...); |t| <= 0.2 so 12 terms suffice.
    let mut s = 1.0 / 25.0;
    for k in (1..12).rev() {
        s = s * t2 + 1.0 / (2.0 * k as f64 + 1.0);
    }
    s = s * t2 + 1.0;
    let ef = e as f64;
    ef * LN2_HI + (2.0 * t * s + ef * LN2_LO)
}

/// Base-2 exponential for moderate `x` (|x| well below 1000).
pub(crate) fn exp2(x: f64) -> f64 {
    debug_assert!(x.is_finite());
    let k = x.round();
    let r = x - k;
    // 2^r = e^(r ln 2) with |r ln 2| <= 0.347; 14 Taylor terms suffice.
    let w = r * LN2_HI + r * LN2_LO;
    let mut s = 1.0 / 87_178_291_200.0; // 1/14!
    for n in (1..14).rev() {
        s = s * w + 1.0 / factorial(n);
    }
    s = s * w + 1.0;
    let ki = (k as i64).clamp(-1074, 1024);
    scale_by_pow2(s, ki)
}

/// Powers of ten, used for logarithmically equispaced singular values.
pub(crate) fn pow10(x: f64) -> f64 {
    exp2(x * std::f64::consts::LOG2_10)
}

fn factorial(n: i32) -> f64 {
    let mut f = 1.0;
    for i in 2..=n {
        f *= i as f64;
    }
    f
}

/// Multiply by 2^k exactly (with gradual underflow for very small results).
fn scale_by_pow2(x: f64, k: i64) -> f64 {
    if (-1022..=1023).contains(&k) {
        x * f64::from_bits(((1023 + k) as u64) << 52)
    } else if k > 1023 {
        x * f64::from_bits(2046u64 << 52) * 2f64.powi((k - 1023) as i32)
    } else {
        x * f64::from_bits(1u64 << 52) * 2f64.powi((k + 1022) as i32) * 2f64.powi(-52)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_matches_std() {
        let mut x = 1.3e-8;
        while x < 1e12 {
            let rel = (ln(x) - x.ln()).abs() / x.ln().abs().max(1e-300);
            assert!(rel < 1e-14, "x = {x}, rel = {rel}");
            x *= 1.618;
        }
        assert_eq!(ln(1.0), 0.0);
        let rel = (ln(1e-310) - 1e-310f64.ln()).abs() / 1e-310f64.ln().abs();
        assert!(rel < 1e-14);
    }

    #[test]
    fn exp2_matches_std() {
        let mut x = -60.0;
        while x < 60.0 {
            let rel = (exp2(x) - x.exp2()).abs() / x.exp2();
            assert!(rel < 1e-14, "x = {x}, rel = {rel}");
            x += 0.7137;
        }
        assert_eq!(exp2(0.0), 1.0);
        assert_eq!(exp2(10.0), 1024.0);
    }

    #[test]
    fn pow10_hits_decades() {
        for t in -16..=16 {
            let rel = (pow10(t as f64) - 10f64.powi(t)).abs() / 10f64.powi(t);
            assert!(rel < 1e-14, "t = {t}, rel = {rel}");
        }
    }
}
