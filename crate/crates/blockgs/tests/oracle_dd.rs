//! Exact-rational oracle checks for the double-double scalar and the
//! bit-level rounding oracle for demotion.
//!
//! Every finite f64 is an exact rational, so `BigRational` arithmetic gives
//! an error-free reference for add/mul/div; sqrt is verified through its
//! square. The sample streams are deterministic, so these bounds are frozen,
//! not flaky.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, One, Signed, Zero};

use blockgs::rng::CounterRng;
use blockgs::DoubleDouble;

fn rational(x: f64) -> BigRational {
    assert!(x.is_finite());
    if x == 0.0 {
        return BigRational::zero();
    }
    let (mantissa, exponent, sign) = Float::integer_decode(x);
    let mut r = BigRational::from_integer(BigInt::from(mantissa));
    if sign < 0 {
        r = -r;
    }
    if exponent >= 0 {
        r * BigRational::from_integer(BigInt::one() << exponent as usize)
    } else {
        r / BigRational::from_integer(BigInt::one() << (-exponent) as usize)
    }
}

fn dd_rational(x: DoubleDouble) -> BigRational {
    rational(x.hi) + rational(x.lo)
}

/// Random full-precision double-double in roughly [2^-9, 2^9).
fn random_dd(rng: &mut CounterRng) -> DoubleDouble {
    let a = (rng.next_f64() - 0.5) * 2f64.powi((rng.next_u64() % 19) as i32 - 9);
    let b = (rng.next_f64() - 0.5) * 2f64.powi((rng.next_u64() % 19) as i32 - 9);
    // A product of two doubles fills both limbs.
    let v = DoubleDouble::from_f64(a) * DoubleDouble::from_f64(b);
    if v.hi == 0.0 {
        DoubleDouble::ONE
    } else {
        v
    }
}

fn relative_error(computed: DoubleDouble, exact: &BigRational) -> BigRational {
    if exact.is_zero() {
        return BigRational::zero();
    }
    ((dd_rational(computed) - exact) / exact).abs()
}

const SAMPLES: usize = 100_000;

#[test]
fn dd_add_within_2_pow_minus_104() {
    let bound = rational(2f64.powi(-104));
    let mut rng = CounterRng::new(0xadd);
    let mut max = BigRational::zero();
    for _ in 0..SAMPLES {
        let x = random_dd(&mut rng);
        let y = random_dd(&mut rng);
        let err = relative_error(x + y, &(dd_rational(x) + dd_rational(y)));
        if err > max {
            max = err;
        }
    }
    assert!(max <= bound, "max relative add error {max} > 2^-104");
}

#[test]
fn dd_mul_within_2_pow_minus_104() {
    let bound = rational(2f64.powi(-104));
    let mut rng = CounterRng::new(0x301);
    let mut max = BigRational::zero();
    for _ in 0..SAMPLES {
        let x = random_dd(&mut rng);
        let y = random_dd(&mut rng);
        let err = relative_error(x * y, &(dd_rational(x) * dd_rational(y)));
        if err > max {
            max = err;
        }
    }
    assert!(max <= bound, "max relative mul error {max} > 2^-104");
}

#[test]
fn dd_div_within_2_pow_minus_104() {
    let bound = rational(2f64.powi(-104));
    let mut rng = CounterRng::new(0xd17);
    let mut max = BigRational::zero();
    for _ in 0..SAMPLES {
        let x = random_dd(&mut rng);
        let y = random_dd(&mut rng);
        let err = relative_error(x / y, &(dd_rational(x) / dd_rational(y)));
        if err > max {
            max = err;
        }
    }
    assert!(max <= bound, "max relative div error {max} > 2^-104");
}

#[test]
fn dd_sqrt_square_within_2_pow_minus_103() {
    // (sqrt(a)(1+d))^2 = a(1+2d), so the squared check doubles the budget.
    let bound = rational(2f64.powi(-103));
    let mut rng = CounterRng::new(0x509);
    let mut max = BigRational::zero();
    for _ in 0..SAMPLES {
        let x = random_dd(&mut rng).abs();
        if x.hi == 0.0 {
            continue;
        }
        let r = x.sqrt();
        let err = relative_error(r * r, &dd_rational(x));
        if err > max {
            max = err;
        }
    }
    assert!(max <= bound, "max relative sqrt^2 error {max} > 2^-103");
}

#[test]
fn dd_subtraction_survives_cancellation() {
    // 1 + 2^-60 minus 1 must recover 2^-60 exactly.
    let a = DoubleDouble::new(1.0, 2f64.powi(-60));
    let b = DoubleDouble::ONE;
    let d = a - b;
    assert_eq!(d.hi, 2f64.powi(-60));
    assert_eq!(d.lo, 0.0);
}

// ---------------------------------------------------------------------------
// Bit-level rounding oracle for f64 -> f32 demotion
// ---------------------------------------------------------------------------

/// Manual round-to-nearest-even by mantissa decomposition.
fn round_f64_to_f32_manual(x: f64) -> f32 {
    if x.is_nan() {
        return f32::NAN;
    }
    if x.is_infinite() {
        return if x > 0.0 { f32::INFINITY } else { f32::NEG_INFINITY };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { -0.0 } else { 0.0 };
    }
    let neg = x < 0.0;
    let a = x.abs();
    let exp = a.log2().floor() as i32;
    // Clamp into f32's normal/subnormal split.
    let (exp, subnormal) = if exp < -126 { (-126, true) } else { (exp, false) };
    let scale = 2f64.powi(exp);
    let frac = a / scale; // in [1, 2) for normals, (0, 1) for subnormals
    let units = frac * 2f64.powi(23);
    let floor = units.floor();
    let rem = units - floor;
    let mut mant = floor as u64;
    // Ties to even.
    if rem > 0.5 || (rem == 0.5 && mant % 2 == 1) {
        mant += 1;
    }
    let mut value = (mant as f64) * 2f64.powi(-23) * scale;
    if !subnormal && exp > 127 {
        value = f64::INFINITY;
    }
    let out = if value > f32::MAX as f64 {
        f32::INFINITY
    } else {
        value as f32
    };
    if neg {
        -out
    } else {
        out
    }
}

#[test]
fn demote_matches_bit_level_rounding_oracle() {
    let mut rng = CounterRng::new(0xcafe);
    for i in 0..10_000 {
        // Mix magnitudes: ordinary, near-subnormal, near-overflow.
        let scale = match i % 5 {
            0 => 1.0,
            1 => 2f64.powi(-120),
            2 => 2f64.powi(-135), // f32-subnormal range
            3 => 2f64.powi(100),
            _ => 2f64.powi(127),
        };
        let x = (rng.next_f64() * 2.0 - 1.0) * scale;
        let via_cast = x as f32;
        let via_oracle = round_f64_to_f32_manual(x);
        assert_eq!(
            via_cast.to_bits(),
            via_oracle.to_bits(),
            "x = {x:e}: cast {via_cast:e} vs oracle {via_oracle:e}"
        );
    }
}
