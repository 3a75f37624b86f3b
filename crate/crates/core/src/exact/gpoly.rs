//! The polynomial family G_n attached to the lens curve.
//!
//! G_n(z) = 2^-n * sum_{j=0}^{floor((n-1)/2)} C(n,j) z^(n-2j), with G_0 = 0.
//! Only every other power appears, and all coefficients share the scale
//! 2^-n, so a G_n is stored as the integer row [C(n,0), C(n,1), ...] plus n.
//!
//! Under the reflection z -> 1/z these polynomials give the tail of the
//! degree-n Faber polynomial of the lens: the exterior remainder is
//! E_n(z) = G_n(1/z). That indexing is pinned by tests against the
//! independently computed Faber expansion.
//!
//! Two routes build G_n: the binomial row directly, and the coupled
//! recurrence G_{n+1} = phi(z) G_n + (z a_n - a_{n+1})/2 driven by the
//! a-sequence, where phi(z) = (z + 1/z)/2. Route agreement is an integer
//! comparison on rows.

use super::seq::ARec;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LensPolynomial {
    pub n: u64,
    /// row[j] = C(n, j) for j = 0 ..= floor((n-1)/2); empty when n = 0
    pub row: Vec<BigUint>,
}

impl LensPolynomial {
    /// Degree-n member via the explicit binomial row.
    pub fn explicit(n: u64) -> Self {
        if n == 0 {
            return LensPolynomial { n: 0, row: vec![] };
        }
        let top = (n - 1) / 2;
        let mut row = Vec::with_capacity(top as usize + 1);
        let mut c = BigUint::one();
        row.push(c.clone());
        for j in 1..=top {
            c = c * (n + 1 - j) / j;
            row.push(c.clone());
        }
        LensPolynomial { n, row }
    }

    /// Coefficient of z^e as an exact rational (zero off the support).
    pub fn coeff(&self, e: i64) -> BigRational {
        let n = self.n as i64;
        if e < 1 || e > n || (n - e) % 2 != 0 {
            return BigRational::zero();
        }
        let j = ((n - e) / 2) as usize;
        if j >= self.row.len() {
            return BigRational::zero();
        }
        BigRational::new(BigInt::from(self.row[j].clone()), BigInt::one() << self.n)
    }

    /// Exponents with nonzero coefficients, descending.
    pub fn support(&self) -> Vec<i64> {
        (0..self.row.len() as i64).map(|j| self.n as i64 - 2 * j).collect()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        if self.row.is_empty() {
            return BigRational::zero();
        }
        let mut acc = BigRational::zero();
        let x2 = x * x;
        // Horner over the sparse row, highest exponent first
        for c in &self.row {
            acc = acc * &x2 + BigRational::from(BigInt::from(c.clone()));
        }
        let low = self.n as i64 - 2 * (self.row.len() as i64 - 1);
        for _ in 0..low {
            acc *= x;
        }
        acc / BigRational::from(BigInt::one() << self.n)
    }

    /// G_n(1/z) coefficient map: exponent -> rational, for remainder tails.
    pub fn reflected_coeffs(&self) -> Vec<(i64, BigRational)> {
        self.support().into_iter().map(|e| (-e, self.coeff(e))).collect()
    }
}

/// Streams G_n by the coupled recurrence, holding the scaled integer rows.
///
/// With H_n = 2^n G_n the step reads, coefficient-wise over exponents,
/// H_{n+1}(z) = (z + 1/z) H_n(z) + z * A_n - B_n, where A_n = 2^n a_n and
/// B_n = 2^n a_{n+1}; one of the two is always zero, and B_n is integral
/// because central binomial coefficients are even.
pub struct GRecurrence {
    pub current: LensPolynomial,
    a: ARec,
}

impl GRecurrence {
    pub fn new() -> Self {
        GRecurrence { current: LensPolynomial { n: 0, row: vec![] }, a: ARec::new() }
    }

    pub fn step(&mut self) {
        let n = self.current.n;
        let old = &self.current.row;
        let top_new = ((n + 1) - 1) / 2;
        let mut row = vec![BigUint::zero(); top_new as usize + 1];
        // (z + 1/z) H_n: Pascal shift on rows
        for (j, c) in old.iter().enumerate() {
            // z * H contributes at the same j; H / z at j+1
            if j < row.len() {
                row[j] += c;
            }
            if j + 1 < row.len() {
                row[j + 1] += c;
            }
        }
        if n % 2 == 0 {
            // z * A_n lands on exponent 1 = (n+1) - 2*(n/2)
            let a_int = self.a_scaled(n);
            let j = (n / 2) as usize;
            if j < row.len() {
                row[j] += a_int;
            }
        } else {
            // -B_n would land on exponent 0, which the row never stores;
            // the recurrence instead cancels the 1/z spill of the lowest
            // old term. Both effects are invisible in this representation,
            // but the cancellation must be checked: the spill coefficient
            // equals 2^n a_{n+1} exactly.
            let spill = old.last().cloned().unwrap_or_default();
            let b_int = self.a_scaled(n + 1) / 2u32;
            assert_eq!(spill, b_int, "constant-term cancellation at n={}", n + 1);
        }
        self.current = LensPolynomial { n: n + 1, row };
    }

    /// 2^m a_m = C(m, m/2) for even m (zero for odd), tracked via ARec.
    fn a_scaled(&mut self, m: u64) -> BigUint {
        if m % 2 != 0 {
            return BigUint::zero();
        }
        while self.a.n < m {
            self.a.step();
        }
        assert_eq!(self.a.n, m, "a-stream overshot");
        crate::limb::to_biguint(&self.a.num) << (m - self.a.exp2)
    }
}
