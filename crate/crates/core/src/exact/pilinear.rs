//! Exact values of the form (p/q) * pi + (r/s).
//!
//! The lens curve's remainder energies all live in this two-dimensional
//! rational vector space, so they can be carried exactly and printed without
//! any floating-point commitment. Sign queries refine an interval enclosure
//! of pi until it separates; that terminates because pi is irrational.

use crate::hp::{func, Dyadic};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiLinear {
    pub pi_coeff: BigRational,
    pub const_coeff: BigRational,
}

impl PiLinear {
    pub fn zero() -> Self {
        PiLinear { pi_coeff: BigRational::zero(), const_coeff: BigRational::zero() }
    }

    pub fn from_rational(c: BigRational) -> Self {
        PiLinear { pi_coeff: BigRational::zero(), const_coeff: c }
    }

    pub fn pi_times(c: BigRational) -> Self {
        PiLinear { pi_coeff: c, const_coeff: BigRational::zero() }
    }

    pub fn add(&self, o: &PiLinear) -> PiLinear {
        PiLinear {
            pi_coeff: &self.pi_coeff + &o.pi_coeff,
            const_coeff: &self.const_coeff + &o.const_coeff,
        }
    }

    pub fn sub(&self, o: &PiLinear) -> PiLinear {
        PiLinear {
            pi_coeff: &self.pi_coeff - &o.pi_coeff,
            const_coeff: &self.const_coeff - &o.const_coeff,
        }
    }

    pub fn neg(&self) -> PiLinear {
        PiLinear { pi_coeff: -&self.pi_coeff, const_coeff: -&self.const_coeff }
    }

    pub fn scale(&self, c: &BigRational) -> PiLinear {
        PiLinear { pi_coeff: &self.pi_coeff * c, const_coeff: &self.const_coeff * c }
    }

    pub fn is_zero(&self) -> bool {
        self.pi_coeff.is_zero() && self.const_coeff.is_zero()
    }

    /// Evaluate to a dyadic float at `prec` bits.
    pub fn to_dyadic(&self, prec: u32) -> Dyadic {
        let g = prec + 16;
        let pi = func::pi(g);
        let a = Dyadic::from_rational(&self.pi_coeff, g);
        let b = Dyadic::from_rational(&self.const_coeff, g);
        pi.mul(&a).add(&b).round(prec)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_dyadic(96).to_f64()
    }

    /// Exact sign: -1, 0, or +1.
    pub fn signum(&self) -> i32 {
        if self.pi_coeff.is_zero() {
            return sign_of(&self.const_coeff);
        }
        // sign(c*pi + d) = sign(c) * sign(pi - (-d/c))
        let target = -(&self.const_coeff / &self.pi_coeff);
        let c_sign = sign_of(&self.pi_coeff);
        // pi is irrational, so pi != target and refinement separates them
        let mut prec = 64u32;
        loop {
            let p = func::pi(prec);
            // p carries at most one ulp of error at prec bits; pad by two
            let err_exp = p.mag2() - prec as i64 + 1;
            let err = BigRational::new(BigInt::one(), BigInt::one() << (-err_exp).max(0) as u64);
            let p_rat = p.to_rational();
            if target < &p_rat - &err {
                return c_sign;
            }
            if target > &p_rat + &err {
                return -c_sign;
            }
            prec *= 2;
            assert!(prec <= 1 << 20, "sign refinement runaway");
        }
    }
}

fn sign_of(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_negative() {
        -1
    } else {
        1
    }
}

/// Prints exactly "(p/q)*pi+(r/s)"; numerators carry the signs.
impl fmt::Display for PiLinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}/{})*pi+({}/{})",
            self.pi_coeff.numer(),
            self.pi_coeff.denom(),
            self.const_coeff.numer(),
            self.const_coeff.denom()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn display_format_is_stable() {
        let x = PiLinear { pi_coeff: rat(1, 4), const_coeff: rat(-1, 2) };
        assert_eq!(x.to_string(), "(1/4)*pi+(-1/2)");
        assert_eq!(PiLinear::zero().to_string(), "(0/1)*pi+(0/1)");
    }

    #[test]
    fn float_value() {
        // pi/4 - 1/2 = 0.285398...
        let x = PiLinear { pi_coeff: rat(1, 4), const_coeff: rat(-1, 2) };
        assert!((x.to_f64() - 0.2853981633974483).abs() < 1e-15);
    }

    #[test]
    fn sign_refinement() {
        // pi - 22/7 < 0 needs a few correct digits
        let x = PiLinear { pi_coeff: rat(1, 1), const_coeff: rat(-22, 7) };
        assert_eq!(x.signum(), -1);
        // pi - 3 > 0
        let y = PiLinear { pi_coeff: rat(1, 1), const_coeff: rat(-3, 1) };
        assert_eq!(y.signum(), 1);
        // pi - 355/113 < 0 (famous close approximant)
        let z = PiLinear { pi_coeff: rat(1, 1), const_coeff: rat(-355, 113) };
        assert_eq!(z.signum(), -1);
        // -2*pi + 7 = 0.716... > 0, negative pi coefficient path
        let w = PiLinear { pi_coeff: rat(-2, 1), const_coeff: rat(7, 1) };
        assert_eq!(w.signum(), 1);
        assert_eq!(PiLinear::zero().signum(), 0);
        assert_eq!(PiLinear::from_rational(rat(-3, 5)).signum(), -1);
    }
}
