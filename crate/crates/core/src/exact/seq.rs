//! The two coefficient sequences of the lens curve and their dual-route
//! evaluation.
//!
//! For even n, `a(n)` is the constant term of the degree-n Faber polynomial,
//! a(n) = 2^-n * C(n, n/2), and `b(n)` is the chord moment
//! b(n) = 2^-n * sum_{j=0}^{n/2} C(n+1, j) / (n+1-2j).
//! Odd indices vanish. Each sequence has two independent evaluation routes
//! (recurrence vs direct formula); the batch checker runs both and compares
//! exactly. Nothing here is floating point.
//!
//! Representations are chosen so no big-by-big gcd ever runs:
//! - a(n) = u / 2^d with u odd (canonical by construction),
//! - b(n) = t / (2^n * lcm(1,3,...,n+1)) with t an integer.
//!
//! That b-denominator shape holds because the explicit sum has only odd
//! denominators n+1-2j <= n+1 and the 2^n scale; it makes equality checks
//! between the two b routes a plain integer comparison.

use super::bigz::{self, Z};
use crate::limb::{self, SmallDivisor};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Smallest-prime-factor sieve; `spf[m]` = least prime factor of m (m >= 2).
pub(crate) struct Sieve {
    spf: Vec<u32>,
}

impl Sieve {
    pub fn new(limit: usize) -> Self {
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        Sieve { spf }
    }

    /// If m is a prime power p^k (k >= 1), returns p, else None. m >= 2.
    pub fn prime_power_base(&self, m: u64) -> Option<u64> {
        let p = self.spf[m as usize] as u64;
        let mut r = m;
        while r % p == 0 {
            r /= p;
        }
        (r == 1).then_some(p)
    }
}

/// Running lcm(1, 3, 5, ..., n+1) for even n, stepped by 2.
///
/// lcm(odds <= m) gains a factor p exactly when m is an odd prime power p^k,
/// so each step multiplies by a machine-word factor.
pub(crate) struct OddLcm {
    pub n: u64,
    pub value: BigUint,
    /// value / previous value: p if n+1 is an odd prime power p^k, else 1.
    pub step_factor: u64,
    sieve: std::sync::Arc<Sieve>,
}

impl OddLcm {
    pub fn new(sieve: std::sync::Arc<Sieve>) -> Self {
        OddLcm { n: 0, value: BigUint::one(), step_factor: 1, sieve }
    }

    pub fn step(&mut self) {
        self.n += 2;
        let m = self.n + 1;
        self.step_factor = self.sieve.prime_power_base(m).unwrap_or(1);
        if self.step_factor != 1 {
            self.value *= self.step_factor;
        }
    }
}

/// a(n) for even n via the recurrence a(n) = (n-1)/n * a(n-2), held as an odd
/// numerator over a power of two.
pub(crate) struct ARec {
    pub n: u64,
    /// odd numerator of a(n)
    pub num: Vec<u64>,
    /// a(n) = num / 2^exp2
    pub exp2: u64,
}

impl ARec {
    pub fn new() -> Self {
        ARec { n: 0, num: vec![1], exp2: 0 }
    }

    pub fn step(&mut self) {
        self.n += 2;
        let n = self.n;
        let t = n.trailing_zeros() as u64;
        let m = n >> t;
        limb::mul_small_in_place(&mut self.num, n - 1);
        if m != 1 {
            let r = limb::div_small_in_place(&mut self.num, m);
            assert_eq!(r, 0, "odd part of n must divide (n-1) * a-numerator");
            while self.num.last() == Some(&0) {
                self.num.pop();
            }
        }
        self.exp2 += t;
    }

    pub fn to_rational(&self) -> BigRational {
        ratio_over_pow2(BigInt::from(limb::to_biguint(&self.num)), self.exp2)
    }
}

/// a(n) for even n via the central binomial coefficient itself:
/// C(n, n/2) stepped as C(n, n/2) = C(n-2, n/2-1) * n(n-1) / (n/2)^2.
pub(crate) struct ABinomial {
    pub n: u64,
    pub binom: Vec<u64>,
}

impl ABinomial {
    pub fn new() -> Self {
        ABinomial { n: 0, binom: vec![1] }
    }

    pub fn step(&mut self) {
        self.n += 2;
        let n = self.n;
        limb::mul_small_in_place(&mut self.binom, n * (n - 1));
        let h = n / 2;
        let r = limb::div_small_in_place(&mut self.binom, h * h);
        assert_eq!(r, 0, "central binomial step must divide exactly");
        while self.binom.last() == Some(&0) {
            self.binom.pop();
        }
    }

    /// Split C(n, n/2) = odd * 2^v; a(n) = odd / 2^(n-v).
    pub fn odd_and_exp2(&self) -> (Vec<u64>, u64) {
        let mut v = 0u64;
        let mut limbs = self.binom.clone();
        while limbs.first() == Some(&0) {
            limbs.remove(0);
            v += 64;
        }
        let tz = limbs[0].trailing_zeros() as u64;
        if tz > 0 {
            v += tz;
            let len = limbs.len();
            for i in 0..len {
                let high = if i + 1 < len { limbs[i + 1] } else { 0 };
                limbs[i] = (limbs[i] >> tz) | (high << (64 - tz));
            }
            while limbs.last() == Some(&0) {
                limbs.pop();
            }
        }
        (limbs, self.n - v)
    }
}

/// b(n) for even n via the recurrence b(n) = (n b(n-2) + a(n)) / (n+1),
/// carried as the integer t(n) = b(n) * 2^n * lcm(1,3,...,n+1).
///
/// In that form the step reads
///   t(n) = [ 4n * r * t(n-2) + a_num(n) * 2^(n - a_exp2(n)) * lcm ] / (n+1),
/// where r is the lcm step factor. The division by the odd number n+1 is
/// exact; a nonzero remainder would mean the two b routes cannot agree and is
/// reported as a step failure rather than silently truncated.
pub(crate) struct BRec {
    pub n: u64,
    pub t: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonIntegralStep {
    pub n: u64,
}

impl std::fmt::Display for NonIntegralStep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "recurrence step at n={} left a nonzero remainder", self.n)
    }
}

impl std::error::Error for NonIntegralStep {}

impl BRec {
    pub fn new() -> Self {
        BRec { n: 0, t: vec![1] }
    }

    /// Advance to n+2 using the already-stepped a-sequence and lcm stream
    /// (both must sit at the same n as the result).
    pub fn step(&mut self, a: &ARec, lcm: &OddLcm) -> Result<(), NonIntegralStep> {
        let n = self.n + 2;
        debug_assert_eq!(a.n, n);
        debug_assert_eq!(lcm.n, n);
        limb::mul_small_in_place(&mut self.t, 4 * n * lcm.step_factor);

        // a-term: a_num * lcm, shifted up by the power-of-two deficit.
        let shift = n - a.exp2;
        let a_term = limb::to_biguint(&a.num) * &lcm.value << shift;
        limb::add_in_place(&mut self.t, &limb::from_biguint(&a_term));

        let r = limb::div_small_in_place(&mut self.t, n + 1);
        if r != 0 {
            return Err(NonIntegralStep { n });
        }
        while self.t.last() == Some(&0) {
            self.t.pop();
        }
        self.n = n;
        Ok(())
    }

    pub fn to_rational(&self, lcm: &OddLcm) -> BigRational {
        debug_assert_eq!(self.n, lcm.n);
        let den = BigInt::from(lcm.value.clone() << self.n);
        BigRational::new(BigInt::from(limb::to_biguint(&self.t)), den)
    }
}

/// Direct evaluation of the explicit b sum, independent of the recurrence.
///
/// The sum S(n) = sum_{j=0}^{n/2} C(n+1,j) / (n+1-2j) is consumed in
/// adjacent pairs,
///   C_j/d0 + C_{j+1}/d1 = C_j * [(j+1) d1 + (n+1-j) d0] / ((j+1) d0 d1),
/// whose combined numerator factor and divisor both fit a machine word for
/// n <= 2^20. Each pair is split Euclidean-style into an integer part and a
/// remainder fraction with a word-sized denominator: the integer parts
/// accumulate into one big integer, and the at most n/4 remainder fractions
/// are summed exactly by a product tree. Everything stays exact; no rounding
/// happens anywhere. The trailing lone term (present when n/2 is even) has
/// denominator 1 and joins the integer part directly.
pub(crate) struct BExplicit {
    c: Vec<u64>,
    term: Vec<u64>,
    term2: Vec<u64>,
    scratch: Vec<u64>,
    scratch2: Vec<u64>,
    acc: Vec<u64>,
    rems: Vec<(u64, u64)>,
    // TEMP probe counters
    pub t_loop: std::time::Duration,
    pub t_tree: std::time::Duration,
}

/// Combined numerator factor, pair denominator, advance numerator and
/// advance divisor for the pair at columns (j, j + 1).
fn pair_consts(n: u64, j: u64) -> (u64, u64, u64, u64) {
    let d0 = n + 1 - 2 * j;
    let d1 = d0 - 2;
    (
        (j + 1) * d1 + (n + 1 - j) * d0,
        (j + 1) * d0 * d1,
        (n + 1 - j) * (n - j),
        (j + 1) * (j + 2),
    )
}

fn trim_zeros(x: &mut Vec<u64>) {
    while x.last() == Some(&0) {
        x.pop();
    }
}

/// S(n) = q_sum + rem_num / rem_den, with 0 <= rem_num/rem_den < n/4 + 1.
pub(crate) struct ExplicitParts {
    q_sum: Z,
    rem_num: Z,
    rem_den: Z,
}

impl ExplicitParts {
    /// Does lcm * S(n) equal `t`? Pure integer cross-multiplication.
    pub fn matches(&self, t: &[u64], lcm: &BigUint) -> bool {
        let t = bigz::from_limbs(t);
        let lcm = bigz::from_biguint(lcm);
        let lq = bigz::mul(&lcm, &self.q_sum);
        if t < lq {
            return false;
        }
        bigz::mul(&(t - lq), &self.rem_den) == bigz::mul(&lcm, &self.rem_num)
    }

    /// lcm * S(n) as an integer. The division is exact because every
    /// lcm * C_j / d_j is an integer.
    pub fn value(&self, lcm: &BigUint) -> BigUint {
        let lcm = bigz::from_biguint(lcm);
        let frac = bigz::div_exact(&bigz::mul(&lcm, &self.rem_num), &self.rem_den);
        bigz::to_biguint(&(bigz::mul(&lcm, &self.q_sum) + frac))
    }
}

impl BExplicit {
    pub fn new() -> Self {
        BExplicit {
            c: Vec::new(),
            term: Vec::new(),
            term2: Vec::new(),
            scratch: Vec::new(),
            scratch2: Vec::new(),
            acc: Vec::new(),
            rems: Vec::new(),
            t_loop: std::time::Duration::ZERO,
            t_tree: std::time::Duration::ZERO,
        }
    }

    pub fn eval_parts(&mut self, n: u64) -> ExplicitParts {
        assert!(n % 2 == 0);
        assert!(n <= 1 << 20, "pair-combination bounds assume n <= 2^20");
        let half = n / 2;

        self.c.clear();
        self.c.push(1);
        self.acc.clear();
        self.rems.clear();

        let probe_start = std::time::Instant::now();
        let mut j = 0u64;
        // Two pairs per iteration. The second pair's numerators have to wait
        // for the first advance, but the three remaining divisions (two pair
        // denominators, one advance) are independent, so they run as one
        // interleaved pass that overlaps their serial dependency chains.
        while j + 3 <= half {
            let (ka, dda, adva, dca) = pair_consts(n, j);
            let (kb, ddb, advb, dcb) = pair_consts(n, j + 2);
            // pass 1: termA = C*ka, scratch = C*adva
            limb::dual_mul(&self.c, ka, &mut self.term, adva, &mut self.scratch);
            // pass 2: scratch becomes C', termB = C'*kb, scratch2 = C'*advb
            limb::exact_div_then_dual_mul(
                &mut self.scratch,
                &limb::ExactDivisor::new(dca),
                kb,
                &mut self.term2,
                advb,
                &mut self.scratch2,
            );
            // pass 3: both pair divisions plus the second advance
            let (ra, rb) = limb::interleaved_divs(
                &mut self.term,
                &SmallDivisor::new(dda),
                &mut self.term2,
                &SmallDivisor::new(ddb),
                &mut self.scratch2,
                &limb::ExactDivisor::new(dcb),
            );
            limb::add_in_place(&mut self.acc, &self.term);
            limb::add_in_place(&mut self.acc, &self.term2);
            if ra != 0 {
                self.rems.push((ra, dda));
            }
            if rb != 0 {
                self.rems.push((rb, ddb));
            }
            std::mem::swap(&mut self.c, &mut self.scratch2);
            trim_zeros(&mut self.c);
            j += 4;
        }
        // leftover pair when the pair count is odd
        while j + 1 <= half {
            let (k, dd, adv, dc) = pair_consts(n, j);
            limb::dual_mul(&self.c, k, &mut self.term, adv, &mut self.scratch);
            let r = SmallDivisor::new(dd).div_in_place(&mut self.term);
            limb::add_in_place(&mut self.acc, &self.term);
            if r != 0 {
                self.rems.push((r, dd));
            }
            limb::ExactDivisor::new(dc).div_in_place(&mut self.scratch);
            std::mem::swap(&mut self.c, &mut self.scratch);
            trim_zeros(&mut self.c);
            j += 2;
        }
        if j == half {
            // lone final term, d = 1
            limb::add_in_place(&mut self.acc, &self.c);
        }
        self.t_loop += probe_start.elapsed();

        let probe_start = std::time::Instant::now();
        let (rem_num, rem_den) = fraction_tree(&self.rems);
        self.t_tree += probe_start.elapsed();
        ExplicitParts { q_sum: bigz::from_limbs(&self.acc), rem_num, rem_den }
    }

    /// t(n) for even n; `lcm` must be lcm(1,3,...,n+1).
    pub fn eval(&mut self, n: u64, lcm: &BigUint) -> BigUint {
        self.eval_parts(n).value(lcm)
    }
}

/// Exact sum of word-sized fractions by pairwise combination.
fn fraction_tree(leaves: &[(u64, u64)]) -> (Z, Z) {
    if leaves.is_empty() {
        return (Z::from(0u64), Z::from(1u64));
    }
    // First combination level in u128: denominators stay below 2^59 (the
    // n <= 2^20 bound), so cross products fit with room to spare. Halves
    // the number of heap integers the tree ever allocates.
    let mut nodes: Vec<(Z, Z)> = Vec::with_capacity(leaves.len() / 2 + 1);
    let mut it = leaves.chunks_exact(2);
    for ch in &mut it {
        let (r0, d0) = (ch[0].0 as u128, ch[0].1 as u128);
        let (r1, d1) = (ch[1].0 as u128, ch[1].1 as u128);
        nodes.push((Z::from(r0 * d1 + r1 * d0), Z::from(d0 * d1)));
    }
    if let [(r, d)] = it.remainder() {
        nodes.push((Z::from(*r), Z::from(*d)));
    }
    while nodes.len() > 1 {
        let mut next = Vec::with_capacity(nodes.len() / 2 + 1);
        let mut it = nodes.chunks_exact(2);
        for ch in &mut it {
            let (a, b) = (&ch[0], &ch[1]);
            next.push((bigz::mul(&a.0, &b.1) + bigz::mul(&b.0, &a.1), bigz::mul(&a.1, &b.1)));
        }
        if let [last] = it.remainder() {
            next.push(last.clone());
        }
        nodes = next;
    }
    nodes.pop().unwrap()
}

/// Explicit b sum as a plain rational, the slow reference route used to
/// validate `BExplicit` at small n.
pub(crate) fn b_explicit_rational(n: u64) -> BigRational {
    assert!(n % 2 == 0);
    let mut c = BigInt::one(); // C(n+1, j)
    let mut sum = BigRational::zero();
    for j in 0..=(n / 2) {
        if j > 0 {
            c = c * BigInt::from(n + 2 - j) / BigInt::from(j);
        }
        sum += BigRational::new(c.clone(), BigInt::from(n + 1 - 2 * j));
    }
    sum / ratio_pow2(n)
}

/// num / 2^exp as a canonical rational.
pub(crate) fn ratio_over_pow2(num: BigInt, exp: u64) -> BigRational {
    BigRational::new(num, BigInt::one() << exp)
}

fn ratio_pow2(exp: u64) -> BigRational {
    BigRational::from(BigInt::one() << exp)
}
