//! Big-integer backend for the kernel's product-heavy verification paths.
//!
//! The fraction tree and the cross-multiplied route comparison multiply
//! integers thousands of limbs wide. With the default `gmp` feature those
//! products run on the system GMP through `rug`, roughly 3x faster than
//! num-bigint at that size; without it the same call sites compile against
//! num-bigint and the build stays pure Rust. Both types implement the
//! arithmetic operators on owned values and Ord, so only construction,
//! multiplication and exact division need shims.

use num_bigint::BigUint;

#[cfg(feature = "gmp")]
pub(crate) type Z = rug::Integer;
#[cfg(not(feature = "gmp"))]
pub(crate) type Z = BigUint;

#[cfg(feature = "gmp")]
pub(crate) fn from_limbs(limbs: &[u64]) -> Z {
    Z::from_digits(limbs, rug::integer::Order::Lsf)
}
#[cfg(not(feature = "gmp"))]
pub(crate) fn from_limbs(limbs: &[u64]) -> Z {
    crate::limb::to_biguint(limbs)
}

pub(crate) fn from_biguint(b: &BigUint) -> Z {
    let limbs: Vec<u64> = b.iter_u64_digits().collect();
    from_limbs(&limbs)
}

#[cfg(feature = "gmp")]
pub(crate) fn to_biguint(z: &Z) -> BigUint {
    crate::limb::to_biguint(&z.to_digits::<u64>(rug::integer::Order::Lsf))
}
#[cfg(not(feature = "gmp"))]
pub(crate) fn to_biguint(z: &Z) -> BigUint {
    z.clone()
}

#[cfg(feature = "gmp")]
pub(crate) fn mul(a: &Z, b: &Z) -> Z {
    Z::from(a * b)
}
#[cfg(not(feature = "gmp"))]
pub(crate) fn mul(a: &Z, b: &Z) -> Z {
    a * b
}

/// a / b for b dividing a; checked in debug builds.
#[cfg(feature = "gmp")]
pub(crate) fn div_exact(a: &Z, b: &Z) -> Z {
    debug_assert!(a.is_divisible(b));
    Z::from(a.div_exact_ref(b))
}
#[cfg(not(feature = "gmp"))]
pub(crate) fn div_exact(a: &Z, b: &Z) -> Z {
    use num_integer::Integer;
    let (q, r) = a.div_rem(b);
    debug_assert!(num_traits::Zero::is_zero(&r));
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_ops() {
        let b = BigUint::from(0xFFFF_FFFF_FFFF_FFFFu64) * BigUint::from(12345u32) + 7u32;
        let z = from_biguint(&b);
        assert_eq!(to_biguint(&z), b);

        let p = mul(&z, &Z::from(1000u64));
        assert_eq!(to_biguint(&p), &b * 1000u32);
        assert_eq!(to_biguint(&div_exact(&p, &Z::from(8u64))), &b * 125u32);

        let limbs = [u64::MAX, 3, 0];
        assert_eq!(to_biguint(&from_limbs(&limbs)), crate::limb::to_biguint(&limbs));
    }
}
