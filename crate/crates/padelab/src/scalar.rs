//! Coefficient arithmetic for the two computation backends.
//!
//! Everything downstream (polynomials, series, solvers) is written over
//! [`Scalar`], which is either an exact complex rational (error-free
//! arithmetic, used whenever the inputs are rational) or a complex
//! high-precision binary float at a configured number of decimal digits
//! (never below 30; see [`crate::tolerances::DEFAULT_DIGITS`]).
//!
//! Mixing backends in one operation promotes the exact operand to the float
//! operand's precision. Well-formed pipelines keep a single backend
//! throughout; promotion exists so that unavoidable float quantities
//! (normalization constants derived from irrational roots) can still be
//! applied to exact data without ceremony.

use std::cell::RefCell;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact rational real/imaginary part.
pub type Rat = BigRational;
/// Exact complex rational.
pub type CRat = Complex<BigRational>;
/// Double-precision complex, used for reporting and seeding only.
pub type C64 = Complex<f64>;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Convert a decimal-digit precision request to mantissa bits, with guard.
pub fn digits_to_bits(digits: u32) -> usize {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 32
}

/// Which arithmetic a run uses. The float precision is a global run
/// parameter, carried here in decimal digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Float { digits: u32 },
}

impl Backend {
    pub fn bits(&self) -> usize {
        match self {
            Backend::Exact => digits_to_bits(crate::tolerances::DEFAULT_DIGITS),
            Backend::Float { digits } => digits_to_bits(*digits),
        }
    }

    pub fn digits(&self) -> u32 {
        match self {
            Backend::Exact => crate::tolerances::DEFAULT_DIGITS,
            Backend::Float { digits } => *digits,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Backend::Exact => Scalar::Exact(CRat::new(Rat::zero(), Rat::zero())),
            Backend::Float { .. } => Scalar::Float(CBig::zero(self.bits())),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> Scalar {
        self.from_rat_pair(Rat::from(BigInt::from(v)), Rat::zero())
    }

    /// Build a scalar from exact rational parts, converting when the backend
    /// is float.
    pub fn from_rat_pair(&self, re: Rat, im: Rat) -> Scalar {
        match self {
            Backend::Exact => Scalar::Exact(CRat::new(re, im)),
            Backend::Float { .. } => {
                let bits = self.bits();
                Scalar::Float(CBig::new(bf_from_rat(&re, bits), bf_from_rat(&im, bits)))
            }
        }
    }

    pub fn from_crat(&self, v: &CRat) -> Scalar {
        self.from_rat_pair(v.re.clone(), v.im.clone())
    }

    pub fn from_c64(&self, v: C64) -> Scalar {
        match self {
            Backend::Exact => Scalar::Exact(CRat::new(
                f64_to_rat(v.re).expect("finite value"),
                f64_to_rat(v.im).expect("finite value"),
            )),
            Backend::Float { .. } => {
                let bits = self.bits();
                Scalar::Float(CBig::from_f64s(v.re, v.im, bits))
            }
        }
    }
}

/// Complex number over high-precision binary floats. Precision is carried by
/// the component values; binary operations use the larger operand precision.
#[derive(Debug, Clone)]
pub struct CBig {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl CBig {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        CBig { re, im }
    }

    pub fn zero(bits: usize) -> Self {
        CBig::new(BigFloat::from_f64(0.0, bits), BigFloat::from_f64(0.0, bits))
    }

    pub fn one(bits: usize) -> Self {
        CBig::new(BigFloat::from_f64(1.0, bits), BigFloat::from_f64(0.0, bits))
    }

    pub fn from_f64s(re: f64, im: f64, bits: usize) -> Self {
        CBig::new(BigFloat::from_f64(re, bits), BigFloat::from_f64(im, bits))
    }

    pub fn bits(&self) -> usize {
        self.re
            .precision()
            .unwrap_or(0)
            .max(self.im.precision().unwrap_or(0))
            .max(64)
    }

    fn op_bits(&self, o: &CBig) -> usize {
        self.bits().max(o.bits())
    }

    pub fn add(&self, o: &CBig) -> CBig {
        let p = self.op_bits(o);
        CBig::new(self.re.add(&o.re, p, RM), self.im.add(&o.im, p, RM))
    }

    pub fn sub(&self, o: &CBig) -> CBig {
        let p = self.op_bits(o);
        CBig::new(self.re.sub(&o.re, p, RM), self.im.sub(&o.im, p, RM))
    }

    pub fn mul(&self, o: &CBig) -> CBig {
        let p = self.op_bits(o);
        let ac = self.re.mul(&o.re, p, RM);
        let bd = self.im.mul(&o.im, p, RM);
        let ad = self.re.mul(&o.im, p, RM);
        let bc = self.im.mul(&o.re, p, RM);
        CBig::new(ac.sub(&bd, p, RM), ad.add(&bc, p, RM))
    }

    pub fn div(&self, o: &CBig) -> CBig {
        let p = self.op_bits(o);
        let den = o.norm_sqr();
        let ac = self.re.mul(&o.re, p, RM);
        let bd = self.im.mul(&o.im, p, RM);
        let bc = self.im.mul(&o.re, p, RM);
        let ad = self.re.mul(&o.im, p, RM);
        CBig::new(
            ac.add(&bd, p, RM).div(&den, p, RM),
            bc.sub(&ad, p, RM).div(&den, p, RM),
        )
    }

    pub fn neg(&self) -> CBig {
        CBig::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> CBig {
        CBig::new(self.re.clone(), self.im.neg())
    }

    pub fn norm_sqr(&self) -> BigFloat {
        let p = self.bits();
        let rr = self.re.mul(&self.re, p, RM);
        let ii = self.im.mul(&self.im, p, RM);
        rr.add(&ii, p, RM)
    }

    pub fn abs(&self) -> BigFloat {
        let p = self.bits();
        self.norm_sqr().sqrt(p, RM)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn to_c64(&self) -> C64 {
        C64::new(bf_to_f64(&self.re), bf_to_f64(&self.im))
    }

    pub fn scale_re(&self, s: &BigFloat) -> CBig {
        let p = self.bits().max(s.precision().unwrap_or(64));
        CBig::new(self.re.mul(s, p, RM), self.im.mul(s, p, RM))
    }

    /// Natural log of the modulus, computed from exponent fields so that
    /// values far outside the double range still yield a finite answer.
    pub fn ln_abs(&self) -> f64 {
        let h = self.to_c64().norm();
        if h.is_finite() && h != 0.0 && h > f64::MIN_POSITIVE {
            return h.ln();
        }
        let ns = self.norm_sqr();
        bf_ln_abs(&ns) / 2.0
    }
}

/// A coefficient value in one of the two backends.
#[derive(Debug, Clone)]
pub enum Scalar {
    Exact(CRat),
    Float(CBig),
}

impl Scalar {
    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(v) => v.re.is_zero() && v.im.is_zero(),
            Scalar::Float(v) => v.is_zero(),
        }
    }

    /// View under the float backend at the given precision.
    pub fn to_cbig(&self, bits: usize) -> CBig {
        match self {
            Scalar::Exact(v) => CBig::new(bf_from_rat(&v.re, bits), bf_from_rat(&v.im, bits)),
            Scalar::Float(v) => v.clone(),
        }
    }

    pub fn to_c64(&self) -> C64 {
        match self {
            Scalar::Exact(v) => C64::new(rat_to_f64(&v.re), rat_to_f64(&v.im)),
            Scalar::Float(v) => v.to_c64(),
        }
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Exact(v) => Scalar::Exact(v.conj()),
            Scalar::Float(v) => Scalar::Float(v.conj()),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(v) => Scalar::Exact(-v.clone()),
            Scalar::Float(v) => Scalar::Float(v.neg()),
        }
    }

    /// |self|² as an exact rational when possible.
    pub fn norm_sqr_rat(&self) -> Option<Rat> {
        match self {
            Scalar::Exact(v) => Some(&v.re * &v.re + &v.im * &v.im),
            Scalar::Float(_) => None,
        }
    }

    pub fn abs_f64(&self) -> f64 {
        let c = self.to_c64();
        let h = c.norm();
        if h.is_finite() && (h == 0.0 || h > f64::MIN_POSITIVE) && !self.is_ln_abs_risky() {
            h
        } else {
            self.ln_abs().exp()
        }
    }

    fn is_ln_abs_risky(&self) -> bool {
        // to_c64 saturates; detect saturation by comparing against the log.
        let c = self.to_c64();
        !(c.re.is_finite() && c.im.is_finite())
    }

    /// Natural log of the modulus, exact-bit-length based for rationals so
    /// that no intermediate ever under- or overflows.
    pub fn ln_abs(&self) -> f64 {
        match self {
            Scalar::Exact(v) => {
                if self.is_zero() {
                    return f64::NEG_INFINITY;
                }
                let ns = &v.re * &v.re + &v.im * &v.im;
                rat_ln_abs(&ns) / 2.0
            }
            Scalar::Float(v) => {
                if v.is_zero() {
                    return f64::NEG_INFINITY;
                }
                v.ln_abs()
            }
        }
    }

    pub fn pow_usize(&self, e: usize) -> Scalar {
        let mut acc = match self {
            Scalar::Exact(_) => Scalar::Exact(CRat::new(Rat::from(BigInt::from(1)), Rat::zero())),
            Scalar::Float(v) => Scalar::Float(CBig::one(v.bits())),
        };
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Exact(v) => {
                let ns = &v.re * &v.re + &v.im * &v.im;
                Scalar::Exact(CRat::new(&v.re / &ns, -(&v.im / &ns)))
            }
            Scalar::Float(v) => Scalar::Float(CBig::one(v.bits()).div(v)),
        }
    }

    fn promote(a: &Scalar, b: &Scalar) -> (ScalarPair, usize) {
        match (a, b) {
            (Scalar::Exact(x), Scalar::Exact(y)) => (ScalarPair::Exact(x.clone(), y.clone()), 0),
            (Scalar::Float(x), Scalar::Float(y)) => {
                let p = x.op_bits(y);
                (ScalarPair::Float(x.clone(), y.clone()), p)
            }
            (Scalar::Exact(x), Scalar::Float(y)) => {
                let p = y.bits();
                (
                    ScalarPair::Float(
                        CBig::new(bf_from_rat(&x.re, p), bf_from_rat(&x.im, p)),
                        y.clone(),
                    ),
                    p,
                )
            }
            (Scalar::Float(x), Scalar::Exact(y)) => {
                let p = x.bits();
                (
                    ScalarPair::Float(
                        x.clone(),
                        CBig::new(bf_from_rat(&y.re, p), bf_from_rat(&y.im, p)),
                    ),
                    p,
                )
            }
        }
    }
}

enum ScalarPair {
    Exact(CRat, CRat),
    Float(CBig, CBig),
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $exact:expr, $float:ident) => {
        impl std::ops::$trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match Scalar::promote(self, rhs).0 {
                    ScalarPair::Exact(a, b) => Scalar::Exact($exact(a, b)),
                    ScalarPair::Float(a, b) => Scalar::Float(a.$float(&b)),
                }
            }
        }
        impl std::ops::$trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add, |a: CRat, b: CRat| a + b, add);
scalar_binop!(Sub, sub, |a: CRat, b: CRat| a - b, sub);
scalar_binop!(Mul, mul, |a: CRat, b: CRat| a * b, mul);
scalar_binop!(Div, div, |a: CRat, b: CRat| a / b, div);

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(&self)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => {
                let d = self - other;
                d.is_zero()
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(v) => {
                if v.im.is_zero() {
                    write!(f, "{}", v.re)
                } else {
                    write!(f, "{}{:+}i", v.re, v.im)
                }
            }
            Scalar::Float(v) => {
                let c = v.to_c64();
                if c.im == 0.0 {
                    write!(f, "{}", c.re)
                } else {
                    write!(f, "{}{:+}i", c.re, c.im)
                }
            }
        }
    }
}

/// Parse `p/q`, integer, or decimal text (optional exponent) to an exact
/// rational.
pub fn parse_rational(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty number".into());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in {s:?}"))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in {s:?}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Rat::new(n, d));
    }
    // decimal with optional exponent: [-]ddd[.ddd][e[-]dd]
    let (mant, exp10) = match s.to_ascii_lowercase().split_once('e') {
        Some((m, e)) => {
            let e: i64 = e.parse().map_err(|_| format!("bad exponent in {s:?}"))?;
            (m.to_string(), e)
        }
        None => (s.to_string(), 0),
    };
    let (int_part, frac_part) = match mant.split_once('.') {
        Some((i, fr)) => (i.to_string(), fr.to_string()),
        None => (mant.clone(), String::new()),
    };
    let digits = format!("{int_part}{frac_part}");
    let n: BigInt = if digits == "-" || digits == "+" || digits.is_empty() {
        return Err(format!("bad number {s:?}"));
    } else {
        digits.parse().map_err(|_| format!("bad number {s:?}"))?
    };
    let shift = frac_part.len() as i64 - exp10;
    let ten = BigInt::from(10);
    Ok(if shift >= 0 {
        Rat::new(n, num_traits::pow(ten, shift as usize))
    } else {
        Rat::new(n * num_traits::pow(ten, (-shift) as usize), BigInt::from(1))
    })
}

/// Exact rational from a finite double (doubles are dyadic rationals).
pub fn f64_to_rat(v: f64) -> Option<Rat> {
    if !v.is_finite() {
        return None;
    }
    Some(Rat::from_float(v).expect("finite"))
}

/// Rational to double without routing through potentially overflowing
/// integer conversions: both parts are reduced to ~64 significant bits and
/// the remaining scale is applied as a power of two.
pub fn rat_to_f64(r: &Rat) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    let num = r.numer().abs();
    let den = r.denom().abs();
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    let nsh = (nb - 64).max(0);
    let dsh = (db - 64).max(0);
    let ntop = (&num >> (nsh as usize)).to_f64().unwrap_or(f64::INFINITY);
    let dtop = (&den >> (dsh as usize)).to_f64().unwrap_or(f64::INFINITY);
    let scale = nsh - dsh;
    if scale > 1_060 {
        return sign * f64::INFINITY;
    }
    if scale < -1_060 {
        return 0.0 * sign;
    }
    sign * (ntop / dtop) * pow2(scale as i32)
}

fn pow2(e: i32) -> f64 {
    if e >= 0 {
        let mut v = 1.0f64;
        let mut k = e;
        while k >= 512 {
            v *= 2f64.powi(512);
            k -= 512;
        }
        v * 2f64.powi(k)
    } else {
        1.0 / pow2(-e)
    }
}

/// ln of a positive rational via bit lengths; immune to f64 range limits.
pub fn rat_ln_abs(r: &Rat) -> f64 {
    assert!(!r.is_zero(), "log of zero");
    bigint_ln_abs(r.numer()) - bigint_ln_abs(r.denom())
}

fn bigint_ln_abs(v: &BigInt) -> f64 {
    let a = v.abs();
    let b = a.bits() as i64;
    if b <= 64 {
        return a.to_f64().unwrap().ln();
    }
    let sh = b - 64;
    let top = (&a >> (sh as usize)).to_f64().unwrap();
    top.ln() + sh as f64 * std::f64::consts::LN_2
}

/// BigFloat from an exact rational at the given precision.
pub fn bf_from_rat(r: &Rat, bits: usize) -> BigFloat {
    if r.is_zero() {
        return BigFloat::from_f64(0.0, bits);
    }
    let n = bf_from_bigint(r.numer(), bits + 32);
    let d = bf_from_bigint(r.denom(), bits + 32);
    n.div(&d, bits, RM)
}

fn bf_from_bigint(v: &BigInt, bits: usize) -> BigFloat {
    with_consts(|cc| BigFloat::parse(&v.to_string(), Radix::Dec, bits, RM, cc))
}

/// BigFloat to double, saturating far outside the double range.
pub fn bf_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    let (words, _n, sign, exp, _inexact) = x.as_raw_parts().expect("finite value");
    let sgn = if sign.is_negative() { -1.0 } else { 1.0 };
    let msw = *words.last().expect("nonzero mantissa") as f64;
    let next = if words.len() >= 2 {
        words[words.len() - 2] as f64
    } else {
        0.0
    };
    let mant = msw / 2f64.powi(64) + next / 2f64.powi(128);
    if exp > 1_060 {
        return sgn * f64::INFINITY;
    }
    if exp < -1_060 {
        return sgn * 0.0;
    }
    sgn * mant * pow2(exp)
}

/// ln|x| for a BigFloat via its binary exponent; finite for any nonzero x.
pub fn bf_ln_abs(x: &BigFloat) -> f64 {
    assert!(!x.is_zero(), "log of zero");
    let (words, _n, _sign, exp, _inexact) = x.as_raw_parts().expect("finite value");
    let msw = *words.last().expect("nonzero mantissa") as f64;
    let next = if words.len() >= 2 {
        words[words.len() - 2] as f64
    } else {
        0.0
    };
    let mant = msw / 2f64.powi(64) + next / 2f64.powi(128);
    mant.ln() + exp as f64 * std::f64::consts::LN_2
}

/// Shortest round-trip decimal for report output.
pub fn fmt_f64(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else if v.is_nan() {
        "nan".into()
    } else {
        format!("{v}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn exact_field_ops() {
        let b = Backend::Exact;
        let a = b.from_rat_pair(rat(1, 2), rat(1, 3));
        let c = b.from_rat_pair(rat(-2, 5), rat(0, 1));
        let prod = &a * &c;
        let back = &prod / &c;
        assert_eq!(back, a);
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn float_ops_track_precision() {
        let b = Backend::Float { digits: 40 };
        let x = b.from_rat_pair(rat(1, 3), rat(0, 1));
        let y = &x * &x;
        let err = (y.to_c64().re - 1.0 / 9.0).abs();
        assert!(err < 1e-15);
        assert!(x.to_cbig(b.bits()).bits() >= digits_to_bits(40) - 64);
    }

    #[test]
    fn promotion_exact_into_float() {
        let e = Backend::Exact.from_int(3);
        let f = Backend::Float { digits: 35 }.from_int(4);
        let s = &e + &f;
        assert!(matches!(s, Scalar::Float(_)));
        assert!((s.to_c64().re - 7.0).abs() < 1e-12);
    }

    #[test]
    fn ln_abs_handles_extreme_magnitudes() {
        // 3^-600 underflows a double; the log path must not.
        let tiny = Backend::Exact
            .from_rat_pair(Rat::new(BigInt::from(1), num_traits::pow(BigInt::from(3), 600)), Rat::zero());
        let expected = -600.0 * 3f64.ln();
        assert!((tiny.ln_abs() - expected).abs() < 1e-6 * expected.abs());

        let huge = Backend::Exact
            .from_rat_pair(Rat::from(num_traits::pow(BigInt::from(7), 400)), Rat::zero());
        let expected = 400.0 * 7f64.ln();
        assert!((huge.ln_abs() - expected).abs() < 1e-6 * expected);
    }

    #[test]
    fn rat_to_f64_huge_ratio() {
        let v = Rat::new(
            num_traits::pow(BigInt::from(10), 400) + BigInt::from(1),
            num_traits::pow(BigInt::from(10), 400),
        );
        assert!((rat_to_f64(&v) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-2").unwrap(), rat(-2, 1));
        assert_eq!(parse_rational("0.125").unwrap(), rat(1, 8));
        assert_eq!(parse_rational("2.5e-2").unwrap(), rat(1, 40));
        assert_eq!(parse_rational("1e3").unwrap(), rat(1000, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn bigfloat_round_trips() {
        let bits = digits_to_bits(30);
        let x = bf_from_rat(&rat(22, 7), bits);
        assert!((bf_to_f64(&x) - 22.0 / 7.0).abs() < 1e-14);
        let l = bf_ln_abs(&x);
        assert!((l - (22.0f64 / 7.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn cbig_division() {
        let bits = digits_to_bits(30);
        let a = CBig::from_f64s(1.0, 2.0, bits);
        let d = CBig::from_f64s(3.0, -1.0, bits);
        let q = a.div(&d);
        let back = q.mul(&d);
        let err = (back.to_c64() - C64::new(1.0, 2.0)).norm();
        assert!(err < 1e-20);
    }

    #[test]
    fn pow_and_inv() {
        let b = Backend::Exact;
        let z = b.from_rat_pair(rat(1, 2), rat(1, 2));
        let p = z.pow_usize(4);
        // (1/2 + i/2)^2 = i/2; squared again = -1/4.
        assert_eq!(p, b.from_rat_pair(rat(-1, 4), rat(0, 1)));
        let w = &z.inv() * &z;
        assert_eq!(w, b.one());
    }
}
