//! Scalar precisions and conversions between them.
//!
//! Three precisions are supported: IEEE single (`f32`), IEEE double (`f64`),
//! and an emulated extended precision ([`DoubleDouble`]) built from an
//! unevaluated sum of two doubles. The double-double format carries at least
//! 104 mantissa bits, so the pair (double, double_double) is usable wherever
//! a "working, twice-working" precision pair is called for, alongside the
//! hardware (single, double) pair.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A named scalar precision with a known unit roundoff.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrecisionId {
    Single,
    Double,
    DoubleDouble,
}

impl PrecisionId {
    /// Unit roundoff of the precision: 2^-24, 2^-53, or 2^-104.
    pub fn unit_roundoff(self) -> f64 {
        match self {
            PrecisionId::Single => f32::UNIT_ROUNDOFF,
            PrecisionId::Double => f64::UNIT_ROUNDOFF,
            PrecisionId::DoubleDouble => DoubleDouble::UNIT_ROUNDOFF,
        }
    }

    /// Name used in configuration files.
    pub fn name(self) -> &'static str {
        match self {
            PrecisionId::Single => "single",
            PrecisionId::Double => "double",
            PrecisionId::DoubleDouble => "double_double",
        }
    }

    /// Inverse of [`PrecisionId::name`].
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "single" => Some(PrecisionId::Single),
            "double" => Some(PrecisionId::Double),
            "double_double" => Some(PrecisionId::DoubleDouble),
            _ => None,
        }
    }
}

impl fmt::Display for PrecisionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A (low, high) working-precision contract for two-precision runs.
///
/// Invariant: `unit_roundoff(high) <= unit_roundoff(low)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPair {
    low: PrecisionId,
    high: PrecisionId,
}

/// Error returned when a pair's high precision is coarser than its low one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvalidPair {
    pub low: PrecisionId,
    pub high: PrecisionId,
}

impl fmt::Display for InvalidPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "invalid precision pair ({}, {}): high precision must be at least as fine as low",
            self.low, self.high
        )
    }
}

impl std::error::Error for InvalidPair {}

impl PrecisionPair {
    pub fn new(low: PrecisionId, high: PrecisionId) -> Result<Self, InvalidPair> {
        if high.unit_roundoff() <= low.unit_roundoff() {
            Ok(PrecisionPair { low, high })
        } else {
            Err(InvalidPair { low, high })
        }
    }

    pub fn low(self) -> PrecisionId {
        self.low
    }

    pub fn high(self) -> PrecisionId {
        self.high
    }
}

/// Round a value, given in the pair's high precision, into its low precision.
///
/// Rounding is to nearest, ties to even; NaN and infinities pass through,
/// and overflow produces an infinity of the correct sign. Values already
/// representable in the low precision are returned unchanged.
pub fn demote(x: f64, pair: PrecisionPair) -> f64 {
    match pair.low {
        PrecisionId::Single => x as f32 as f64,
        // Double and double-double both hold any f64 exactly.
        PrecisionId::Double | PrecisionId::DoubleDouble => x,
    }
}

/// Widen a low-precision value into the pair's high precision (always exact).
pub fn promote(x: f64, _pair: PrecisionPair) -> f64 {
    x
}

/// The scalar abstraction all dense kernels are generic over.
///
/// Every operation rounds into the implementing precision, so running a
/// kernel with `T = f32` performs genuine single-precision arithmetic even
/// though inputs fed to it may originate from doubles.
pub trait Scalar:
    Copy
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const UNIT_ROUNDOFF: f64;
    const ZERO: Self;
    const ONE: Self;

    /// Round an f64 into this precision.
    fn from_f64(x: f64) -> Self;

    /// Round this value to the nearest f64.
    fn to_f64(self) -> f64;

    fn sqrt(self) -> Self;
    fn abs(self) -> Self;
    fn is_nan(self) -> bool;
    fn is_finite(self) -> bool;
}

impl Scalar for f32 {
    const UNIT_ROUNDOFF: f64 = 5.960_464_477_539_063e-8; // 2^-24
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;

    fn from_f64(x: f64) -> Self {
        x as f32
    }

    fn to_f64(self) -> f64 {
        self as f64
    }

    fn sqrt(self) -> Self {
        self.sqrt()
    }

    fn abs(self) -> Self {
        self.abs()
    }

    fn is_nan(self) -> bool {
        self.is_nan()
    }

    fn is_finite(self) -> bool {
        self.is_finite()
    }
}

impl Scalar for f64 {
    const UNIT_ROUNDOFF: f64 = 1.110_223_024_625_156_5e-16; // 2^-53
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;

    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn sqrt(self) -> Self {
        self.sqrt()
    }

    fn abs(self) -> Self {
        self.abs()
    }

    fn is_nan(self) -> bool {
        self.is_nan()
    }

    fn is_finite(self) -> bool {
        self.is_finite()
    }
}

// ---------------------------------------------------------------------------
// Double-double arithmetic
// ---------------------------------------------------------------------------

/// An extended-precision scalar stored as the unevaluated sum `hi + lo`.
///
/// Invariant: `|lo| <= ulp(hi) / 2` after every operation (renormalized).
/// Arithmetic relies on error-free transformations (Knuth's TwoSum, Dekker's
/// TwoProd) and keeps the relative error of each operation below 2^-104.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

/// Error-free addition: returns `(s, e)` with `s + e == a + b` exactly.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let v = s - a;
    let e = (a - (s - v)) + (b - v);
    (s, e)
}

/// Fast TwoSum, valid when `|a| >= |b|`.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Dekker split into 26 + 26 bits; exact for |a| < 2^996.
#[inline]
fn split(a: f64) -> (f64, f64) {
    let t = 134_217_729.0 * a; // 2^27 + 1
    let hi = t - (t - a);
    (hi, a - hi)
}

/// Error-free multiplication: returns `(p, e)` with `p + e == a * b` exactly.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, e)
}

impl DoubleDouble {
    pub const ZERO: Self = DoubleDouble { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = DoubleDouble { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Self {
        let (s, e) = quick_two_sum(hi, lo);
        DoubleDouble { hi: s, lo: e }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    /// Square root via a Karp-Markstein step followed by one Newton
    /// correction in double-double, which pins the error to the format.
    ///
    /// Negative input yields a NaN pair so domain errors propagate instead
    /// of halting the caller.
    pub fn sqrt(self) -> Self {
        if self.hi == 0.0 && self.lo == 0.0 {
            return DoubleDouble::ZERO;
        }
        if self.hi < 0.0 || self.hi.is_nan() {
            return DoubleDouble {
                hi: f64::NAN,
                lo: f64::NAN,
            };
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let err = (self - DoubleDouble::from_f64(ax) * DoubleDouble::from_f64(ax)).hi * (x * 0.5);
        let s = DoubleDouble::new(ax, err);
        let correction = (self - s * s).to_f64() * (x * 0.5);
        s + DoubleDouble::from_f64(correction)
    }

    pub fn is_nan(self) -> bool {
        self.hi.is_nan() || self.lo.is_nan()
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }
}

impl Add for DoubleDouble {
    type Output = Self;

    #[inline]
    fn add(self, rhs: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        DoubleDouble { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;

    #[inline]
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;

    #[inline]
    fn mul(self, rhs: Self) -> Self {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;

    /// Long division with two corrections (accurate to the format).
    fn div(self, rhs: Self) -> Self {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * DoubleDouble::from_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * DoubleDouble::from_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        let (hi, lo) = quick_two_sum(s, e + q3);
        DoubleDouble { hi, lo }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;

    #[inline]
    fn neg(self) -> Self {
        DoubleDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(std::cmp::Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:e} + {:e})", self.hi, self.lo)
    }
}

impl Scalar for DoubleDouble {
    const UNIT_ROUNDOFF: f64 = 4.930_380_657_631_324e-32; // 2^-104
    const ZERO: Self = DoubleDouble::ZERO;
    const ONE: Self = DoubleDouble::ONE;

    fn from_f64(x: f64) -> Self {
        DoubleDouble::from_f64(x)
    }

    fn to_f64(self) -> f64 {
        self.to_f64()
    }

    fn sqrt(self) -> Self {
        self.sqrt()
    }

    fn abs(self) -> Self {
        self.abs()
    }

    fn is_nan(self) -> bool {
        self.is_nan()
    }

    fn is_finite(self) -> bool {
        self.is_finite()
    }
}

// ---------------------------------------------------------------------------
// Precision-to-precision conversion
// ---------------------------------------------------------------------------

/// Rounding conversion from another scalar precision.
///
/// Widening conversions (single to double, double to double-double, and every
/// identity) are exact; narrowing ones round to nearest. The identity cases
/// matter: a degenerate (P, P) pair must convert losslessly so the
/// two-precision algorithms collapse bit-for-bit onto their uniform
/// counterparts.
pub trait ConvertFrom<S: Scalar>: Scalar {
    fn convert_from(x: S) -> Self;
}

impl ConvertFrom<f32> for f32 {
    fn convert_from(x: f32) -> f32 {
        x
    }
}

impl ConvertFrom<f32> for f64 {
    fn convert_from(x: f32) -> f64 {
        x as f64
    }
}

impl ConvertFrom<f32> for DoubleDouble {
    fn convert_from(x: f32) -> DoubleDouble {
        DoubleDouble::from_f64(x as f64)
    }
}

impl ConvertFrom<f64> for f32 {
    fn convert_from(x: f64) -> f32 {
        x as f32
    }
}

impl ConvertFrom<f64> for f64 {
    fn convert_from(x: f64) -> f64 {
        x
    }
}

impl ConvertFrom<f64> for DoubleDouble {
    fn convert_from(x: f64) -> DoubleDouble {
        DoubleDouble::from_f64(x)
    }
}

impl ConvertFrom<DoubleDouble> for f32 {
    fn convert_from(x: DoubleDouble) -> f32 {
        x.to_f64() as f32
    }
}

impl ConvertFrom<DoubleDouble> for f64 {
    fn convert_from(x: DoubleDouble) -> f64 {
        x.to_f64()
    }
}

impl ConvertFrom<DoubleDouble> for DoubleDouble {
    fn convert_from(x: DoubleDouble) -> DoubleDouble {
        x
    }
}
