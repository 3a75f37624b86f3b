//! pi and circular functions for dyadic values.

use super::Dyadic;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::sync::Mutex;

static PI_CACHE: Mutex<Option<(u32, Dyadic)>> = Mutex::new(None);

/// pi rounded to `prec` bits. Machin's formula with integer series, cached.
pub fn pi(prec: u32) -> Dyadic {
    let mut cache = PI_CACHE.lock().unwrap();
    if let Some((p, v)) = cache.as_ref() {
        if *p >= prec {
            return v.round(prec);
        }
    }
    let g = prec + 32;
    // pi = 16 atan(1/5) - 4 atan(1/239), all scaled by 2^g
    let a5 = atan_inv_scaled(5, g);
    let a239 = atan_inv_scaled(239, g);
    let scaled = (a5 << 4u32) - (a239 << 2u32);
    let v = Dyadic::new(scaled, -(g as i64)).round(prec + 8);
    *cache = Some((prec + 8, v.clone()));
    v.round(prec)
}

/// floor(atan(1/m) * 2^g) up to a few ulps.
fn atan_inv_scaled(m: u64, g: u32) -> BigInt {
    let m2 = BigInt::from(m) * BigInt::from(m);
    let mut term = (BigInt::from(1) << g) / BigInt::from(m);
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    let mut sign = true;
    while !term.is_zero() {
        let t = &term / BigInt::from(2 * k + 1);
        if sign {
            sum += t;
        } else {
            sum -= t;
        }
        term /= &m2;
        k += 1;
        sign = !sign;
    }
    sum
}

/// (sin x, cos x) rounded to `prec` bits. Intended for |x| up to a few
/// hundred; the argument reduction budget assumes a moderate multiple of pi.
pub fn sin_cos(x: &Dyadic, prec: u32) -> (Dyadic, Dyadic) {
    let g = prec + 48;
    let half_pi = pi(g).div(&Dyadic::from_i64(2), g);
    let q_f = x.div(&half_pi, 64).to_f64().round();
    assert!(q_f.abs() < 9.0e15, "argument too large for reduction");
    let q = q_f as i64;
    let r = x.sub(&half_pi.mul_i64(q)).round(g);
    debug_assert!(r.mag2() <= 1, "reduced argument must be near [-pi/4, pi/4]");
    let (s, c) = sin_cos_taylor(&r, g);
    let (s, c) = match q.rem_euclid(4) {
        0 => (s, c),
        1 => (c, s.neg()),
        2 => (s.neg(), c.neg()),
        _ => (c.neg(), s),
    };
    (s.round(prec), c.round(prec))
}

/// Taylor evaluation on a reduced argument, |r| <= pi/4 + slack.
fn sin_cos_taylor(r: &Dyadic, g: u32) -> (Dyadic, Dyadic) {
    let r2 = r.mul(r).round(g);
    let mut sin = r.round(g);
    let mut term = sin.clone();
    let mut k = 1i64;
    loop {
        term = term.mul(&r2).div(&Dyadic::from_i64((2 * k) * (2 * k + 1)), g).neg();
        if term.is_zero() || term.mag2() < -(g as i64) - 2 {
            break;
        }
        sin = sin.add(&term).round(g);
        k += 1;
    }
    let mut cos = Dyadic::one();
    let mut term = Dyadic::one();
    let mut k = 1i64;
    loop {
        term = term.mul(&r2).div(&Dyadic::from_i64((2 * k - 1) * (2 * k)), g).neg();
        if term.is_zero() || term.mag2() < -(g as i64) - 2 {
            break;
        }
        cos = cos.add(&term).round(g);
        k += 1;
    }
    (sin, cos)
}
