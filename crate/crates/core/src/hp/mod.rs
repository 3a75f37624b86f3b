//! Arbitrary-precision dyadic floating point.
//!
//! A `Dyadic` is mant * 2^exp with both parts explicit. Addition,
//! subtraction, and multiplication are exact; rounding (to nearest, ties to
//! even) happens only where requested or where an operation cannot be exact
//! (division, square root). This keeps error tracking honest: a pipeline
//! rounds exactly where its author said it would.
//!
//! The transcendental surface is only what the quadrature and conformal-map
//! code needs: pi, sqrt, sin/cos. Gauss-Legendre nodes live in [`gauss`].

pub mod func;
pub mod gauss;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

#[derive(Clone, Debug)]
pub struct Dyadic {
    pub mant: BigInt,
    pub exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_i64(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        if let Some(tz) = self.mant.trailing_zeros() {
            if tz > 0 {
                self.mant >>= tz;
                self.exp += tz as i64;
            }
        }
    }

    /// Significant bits of the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.magnitude().bits()
    }

    /// floor(log2 |x|) + 1: position of the leading bit. Zero input: i64::MIN.
    pub fn mag2(&self) -> i64 {
        if self.is_zero() {
            return i64::MIN;
        }
        self.exp + self.bits() as i64
    }

    pub fn add(&self, o: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let (lo, hi) = if self.exp <= o.exp { (self, o) } else { (o, self) };
        let shifted = &hi.mant << ((hi.exp - lo.exp) as u64);
        Dyadic::new(shifted + &lo.mant, lo.exp)
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn sub(&self, o: &Dyadic) -> Dyadic {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Dyadic) -> Dyadic {
        if self.is_zero() || o.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: &self.mant * &o.mant, exp: self.exp + o.exp }
    }

    pub fn mul_i64(&self, k: i64) -> Dyadic {
        Dyadic::new(&self.mant * k, self.exp)
    }

    pub fn shl(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    /// Round to `prec` significant bits, nearest, ties to even.
    pub fn round(&self, prec: u32) -> Dyadic {
        let bits = self.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let drop = bits - prec as u64;
        let (sign, mag) = (self.mant.sign(), self.mant.magnitude());
        let high = mag >> drop;
        let low = mag - (&high << drop);
        let half = BigUint::one() << (drop - 1);
        let round_up = match low.cmp(&half) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => high.is_odd(),
        };
        let high = if round_up { high + 1u32 } else { high };
        let mant = BigInt::from_biguint(sign, high);
        Dyadic::new(mant, self.exp + drop as i64)
    }

    /// self / o, correctly rounded to `prec` bits (nearest, ties to even).
    pub fn div(&self, o: &Dyadic, prec: u32) -> Dyadic {
        assert!(!o.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let want = prec as i64 + 2;
        let s = (want + o.bits() as i64 - self.bits() as i64).max(0) as u64;
        let num = &self.mant << s;
        let (q, r) = num.div_rem(&o.mant);
        // div_rem truncates toward zero, so |q| = floor(|num/den|) and the
        // sticky bit is simply r != 0.
        let exp = self.exp - o.exp - s as i64;
        round_with_sticky(q, exp, !r.is_zero(), prec)
    }

    /// Square root, correctly rounded to `prec` bits. Panics on negatives.
    pub fn sqrt(&self, prec: u32) -> Dyadic {
        assert!(!self.is_negative(), "dyadic sqrt of negative value");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let want = 2 * (prec as i64 + 2);
        let mut s = (want - self.bits() as i64).max(0);
        if (self.exp - s) % 2 != 0 {
            s += 1;
        }
        let t: BigUint = (self.mant.magnitude() << (s as u64)).clone();
        let r = num_integer::Roots::sqrt(&t);
        let exact = (&r * &r) == t;
        round_with_sticky(BigInt::from(r), (self.exp - s) / 2, !exact, prec)
    }

    pub fn cmp_val(&self, o: &Dyadic) -> Ordering {
        let d = self.sub(o);
        if d.mant.is_zero() {
            Ordering::Equal
        } else if d.mant.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.bits();
        let (take, shift) = if bits > 53 { (bits - 53, bits as i64 - 53) } else { (0, 0) };
        let top = &self.mant >> take;
        let top: f64 = {
            let (s, mag) = (top.sign(), top.magnitude());
            let v = mag.iter_u64_digits().next().unwrap_or(0) as f64;
            if s == Sign::Minus {
                -v
            } else {
                v
            }
        };
        top * f64::exp2((self.exp + shift) as f64)
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Dyadic {
        Dyadic::new(r.numer().clone(), 0).div(&Dyadic::new(r.denom().clone(), 0), prec)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Fixed-point decimal string with exactly `digits` places after the
    /// point, rounded to nearest with ties to even. Deterministic.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scaled = &self.mant * BigInt::from(10u32).pow(digits as u32);
        let (sign, mag) = (scaled.sign(), scaled.magnitude().clone());
        let int = if self.exp >= 0 {
            mag << self.exp as u64
        } else {
            let shift = (-self.exp) as u64;
            let high = &mag >> shift;
            let low = mag - (&high << shift);
            let half = BigUint::one() << (shift - 1);
            match low.cmp(&half) {
                Ordering::Greater => high + 1u32,
                Ordering::Less => high,
                Ordering::Equal => {
                    if high.is_odd() {
                        high + 1u32
                    } else {
                        high
                    }
                }
            }
        };
        let neg = sign == Sign::Minus && !int.is_zero();
        let s = int.to_string();
        let s = if s.len() <= digits {
            format!("0.{}{}", "0".repeat(digits - s.len()), s)
        } else {
            let (a, b) = s.split_at(s.len() - digits);
            if digits == 0 {
                a.to_string()
            } else {
                format!("{a}.{b}")
            }
        };
        if neg {
            format!("-{s}")
        } else {
            s
        }
    }
}

fn round_with_sticky(mant: BigInt, exp: i64, sticky: bool, prec: u32) -> Dyadic {
    let bits = mant.magnitude().bits();
    if bits <= prec as u64 {
        // at most prec bits survived; sticky can only matter for the tie
        // pattern, which needs dropped bits, so the value is already exact
        // enough: a sticky with no dropped bits means the true value sits
        // strictly between representable neighbours closer to mant.
        return Dyadic::new(mant, exp);
    }
    let drop = bits - prec as u64;
    let (sign, mag) = (mant.sign(), mant.magnitude());
    let high = mag >> drop;
    let low = mag - (&high << drop);
    let half = BigUint::one() << (drop - 1);
    let round_up = match low.cmp(&half) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => sticky || high.is_odd(),
    };
    let high = if round_up { high + 1u32 } else { high };
    Dyadic::new(BigInt::from_biguint(sign, high), exp + drop as i64)
}

#[derive(Clone, Debug)]
pub struct HpComplex {
    pub re: Dyadic,
    pub im: Dyadic,
}

impl HpComplex {
    pub fn new(re: Dyadic, im: Dyadic) -> Self {
        HpComplex { re, im }
    }

    pub fn zero() -> Self {
        HpComplex { re: Dyadic::zero(), im: Dyadic::zero() }
    }

    pub fn from_re(re: Dyadic) -> Self {
        HpComplex { re, im: Dyadic::zero() }
    }

    pub fn add(&self, o: &HpComplex) -> HpComplex {
        HpComplex { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &HpComplex) -> HpComplex {
        HpComplex { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn neg(&self) -> HpComplex {
        HpComplex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> HpComplex {
        HpComplex { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &HpComplex) -> HpComplex {
        HpComplex {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn scale(&self, k: &Dyadic) -> HpComplex {
        HpComplex { re: self.re.mul(k), im: self.im.mul(k) }
    }

    pub fn abs2(&self) -> Dyadic {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn abs(&self, prec: u32) -> Dyadic {
        self.abs2().sqrt(prec)
    }

    pub fn div(&self, o: &HpComplex, prec: u32) -> HpComplex {
        let den = o.abs2();
        let num = self.mul(&o.conj());
        HpComplex { re: num.re.div(&den, prec), im: num.im.div(&den, prec) }
    }

    pub fn recip(&self, prec: u32) -> HpComplex {
        HpComplex::from_re(Dyadic::one()).div(self, prec)
    }

    /// Principal square root (branch cut on the negative real axis).
    pub fn sqrt(&self, prec: u32) -> HpComplex {
        if self.re.is_zero() && self.im.is_zero() {
            return HpComplex::zero();
        }
        let g = prec + 8;
        let r = self.abs(g);
        let two = Dyadic::from_i64(2);
        if self.im.is_zero() {
            if self.re.is_negative() {
                let t = self.re.neg().sqrt(prec);
                return HpComplex { re: Dyadic::zero(), im: t };
            }
            return HpComplex { re: self.re.sqrt(prec), im: Dyadic::zero() };
        }
        // t = sqrt((r + |re|)/2); the other component is |im|/(2t)
        let t = r.add(&self.re.abs()).div(&two, g).sqrt(g);
        let u = self.im.abs().div(&t.mul(&two), g);
        let (re, im) = if self.re.is_negative() { (u, t) } else { (t, u) };
        let im = if self.im.is_negative() { im.neg() } else { im };
        HpComplex { re: re.round(prec), im: im.round(prec) }
    }

    pub fn round(&self, prec: u32) -> HpComplex {
        HpComplex { re: self.re.round(prec), im: self.im.round(prec) }
    }

    pub fn to_f64s(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn dy(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    #[test]
    fn add_aligns_exponents_exactly() {
        let a = dy(3, -2); // 0.75
        let b = dy(5, -4); // 0.3125
        assert_eq!(a.add(&b).to_f64(), 1.0625);
    }

    #[test]
    fn round_ties_to_even() {
        // 0b1011 rounded to 3 bits: tie at dropped bit, low bit of kept part
        // is 1 (odd) so rounds up to 0b110 << 1
        let x = dy(0b1011, 0);
        let r = x.round(3);
        assert_eq!(r.to_f64(), 12.0);
        // 0b1101 to 3 bits: tie, kept 0b110 even, stays
        let y = dy(0b1101, 0);
        assert_eq!(y.round(3).to_f64(), 12.0);
    }

    #[test]
    fn div_matches_known_quotient() {
        let a = dy(1, 0);
        let b = dy(3, 0);
        let q = a.div(&b, 80);
        let back = q.mul(&b).sub(&a);
        assert!(back.mag2() < -78);
    }

    #[test]
    fn sqrt_squares_back() {
        let x = dy(2, 0);
        let s = x.sqrt(120);
        let err = s.mul(&s).sub(&x);
        assert!(err.mag2() < -116, "err mag {}", err.mag2());
        assert!((s.to_f64() - 1.4142135623730951).abs() < 1e-15);
    }

    #[test]
    fn decimal_printing_is_fixed_width() {
        assert_eq!(dy(1, -1).to_decimal(4), "0.5000");
        assert_eq!(dy(-3, -2).to_decimal(3), "-0.750");
        assert_eq!(dy(1, 4).to_decimal(2), "16.00");
        assert_eq!(Dyadic::zero().to_decimal(3), "0.000");
        // 1/3 at high precision prints a deterministic truncation
        let third = dy(1, 0).div(&dy(3, 0), 200);
        assert_eq!(third.to_decimal(10), "0.3333333333");
    }

    #[test]
    fn complex_sqrt_principal_branch() {
        let z = HpComplex::new(dy(0, 0), dy(2, 0)); // 2i
        let s = z.sqrt(100);
        let (re, im) = s.to_f64s();
        assert!((re - 1.0).abs() < 1e-14 && (im - 1.0).abs() < 1e-14);
        let w = HpComplex::new(dy(-4, 0), dy(0, 0));
        let sw = w.sqrt(100);
        let (re, im) = sw.to_f64s();
        assert!(re.abs() < 1e-14 && (im - 2.0).abs() < 1e-14);
        // negative imaginary part keeps the root in the lower half plane
        let v = HpComplex::new(dy(0, 0), dy(-2, 0));
        let sv = v.sqrt(100);
        let (re, im) = sv.to_f64s();
        assert!((re - 1.0).abs() < 1e-14 && (im + 1.0).abs() < 1e-14);
    }

    #[test]
    fn rational_round_trip() {
        let r = BigRational::new(BigInt::from(22), BigInt::from(7));
        let d = Dyadic::from_rational(&r, 100);
        let diff = d.to_rational() - r;
        assert!(diff.numer().magnitude().bits() as i64
            - (diff.denom().magnitude().bits() as i64)
            < -95);
    }
}
