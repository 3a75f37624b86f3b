//! Little-endian u64-limb helpers for the hot exact-arithmetic kernels.
//!
//! num-bigint covers general arithmetic; these routines exist for the inner
//! loops where per-call allocation or generic dispatch would dominate:
//! in-place multiply/divide by a machine word and carry-propagating
//! accumulation. Division uses the reciprocal-based 2-by-1 word division of
//! Moller and Granlund ("Improved division by invariant integers", IEEE
//! Trans. Computers 60(2), 2011), which avoids the hardware 128/64 divide on
//! every limb.

use num_bigint::BigUint;

/// Reciprocal v = floor((2^128 - 1) / d) - 2^64 for a normalized divisor
/// (top bit set). Requires d >= 2^63.
#[inline]
fn reciprocal(d: u64) -> u64 {
    debug_assert!(d >= 1 << 63);
    ((u128::MAX / d as u128) - (1u128 << 64)) as u64
}

/// Quotient and remainder of (hi:lo) / d for normalized d with hi < d.
#[inline]
fn div_2by1(hi: u64, lo: u64, d: u64, v: u64) -> (u64, u64) {
    debug_assert!(hi < d);
    let q = (v as u128) * (hi as u128) + (((hi as u128) << 64) | lo as u128);
    let mut q1 = (q >> 64) as u64;
    let q0 = q as u64;
    q1 = q1.wrapping_add(1);
    let mut r = lo.wrapping_sub(q1.wrapping_mul(d));
    // First correction is taken about half the time, so a mask beats a
    // branch; the second is rare enough to leave branched.
    let mask = ((r > q0) as u64).wrapping_neg();
    q1 = q1.wrapping_add(mask);
    r = r.wrapping_add(d & mask);
    if r >= d {
        q1 += 1;
        r -= d;
    }
    (q1, r)
}

/// Precomputed state for repeated division by the same word.
#[derive(Clone, Copy)]
pub struct SmallDivisor {
    d: u64,
    shift: u32,
    recip: u64,
}

impl SmallDivisor {
    pub fn new(d: u64) -> Self {
        assert!(d > 0, "division by zero");
        let shift = d.leading_zeros();
        let dn = d << shift;
        SmallDivisor { d, shift, recip: reciprocal(dn) }
    }

    #[inline]
    pub fn divisor(&self) -> u64 {
        self.d
    }

    /// x /= d in place, returning the remainder. x is little-endian.
    pub fn div_in_place(&self, x: &mut [u64]) -> u64 {
        let s = self.shift;
        let dn = self.d << s;
        let v = self.recip;
        if s == 0 {
            let mut r = 0u64;
            for limb in x.iter_mut().rev() {
                let (q, nr) = div_2by1(r, *limb, dn, v);
                *limb = q;
                r = nr;
            }
            return r;
        }
        // Divide the virtually left-shifted numerator by the normalized
        // divisor; quotient limbs are unchanged by the common shift and the
        // final remainder shifts back down.
        let mut r = if x.is_empty() { 0 } else { x[x.len() - 1] >> (64 - s) };
        for i in (0..x.len()).rev() {
            let lo_fill = if i == 0 { 0 } else { x[i - 1] >> (64 - s) };
            let yi = (x[i] << s) | lo_fill;
            let (q, nr) = div_2by1(r, yi, dn, v);
            x[i] = q;
            r = nr;
        }
        r >> s
    }
}

/// x /= d, returning the remainder.
pub fn div_small_in_place(x: &mut [u64], d: u64) -> u64 {
    SmallDivisor::new(d).div_in_place(x)
}

/// Division by a word that is known to divide the input exactly.
///
/// Jebelean's method ("An algorithm for exact division", J. Symbolic
/// Computation 15, 1993): write d = 2^s * m with m odd, shift the input
/// right by s, then multiply limb-by-limb with the inverse of m modulo
/// 2^64. No quotient corrections, and the loop-carried dependency is one
/// multiply instead of a 2-by-1 divide.
#[derive(Clone, Copy)]
pub struct ExactDivisor {
    odd: u64,
    shift: u32,
    inv: u64,
}

impl ExactDivisor {
    pub fn new(d: u64) -> Self {
        assert!(d > 0, "division by zero");
        let shift = d.trailing_zeros();
        let odd = d >> shift;
        // Newton lift of the inverse mod 2^64. The seed 3m XOR 2 is correct
        // to 5 bits; each step doubles that, so four steps reach 80.
        let mut inv = odd.wrapping_mul(3) ^ 2;
        for _ in 0..4 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(odd.wrapping_mul(inv)));
        }
        debug_assert_eq!(odd.wrapping_mul(inv), 1);
        ExactDivisor { odd, shift, inv }
    }

    /// x /= d in place. The quotient keeps x's limb count (top limbs may
    /// become zero). Debug builds verify divisibility; release builds
    /// produce garbage on non-multiples.
    pub fn div_in_place(&self, x: &mut [u64]) {
        let s = self.shift;
        let m = self.odd;
        let inv = self.inv;
        let len = x.len();
        if len == 0 {
            return;
        }
        debug_assert!(s == 0 || x[0] & ((1u64 << s) - 1) == 0, "2-part does not divide");
        let mut h: u64 = 0;
        let mut borrow: u64 = 0;
        if s == 0 {
            for i in 0..len {
                let (t1, b1) = x[i].overflowing_sub(h);
                let (t, b2) = t1.overflowing_sub(borrow);
                let q = t.wrapping_mul(inv);
                x[i] = q;
                h = ((q as u128 * m as u128) >> 64) as u64;
                borrow = (b1 | b2) as u64;
            }
        } else {
            for i in 0..len {
                // Shift the dividend on the fly; x[i + 1] is still unwritten
                // when iteration i reads it.
                let hi_fill = if i + 1 < len { x[i + 1] << (64 - s) } else { 0 };
                let y = (x[i] >> s) | hi_fill;
                let (t1, b1) = y.overflowing_sub(h);
                let (t, b2) = t1.overflowing_sub(borrow);
                let q = t.wrapping_mul(inv);
                x[i] = q;
                h = ((q as u128 * m as u128) >> 64) as u64;
                borrow = (b1 | b2) as u64;
            }
        }
        debug_assert!(h == 0 && borrow == 0, "divisor does not divide the input");
    }
}

/// out_k = x * k and out_m = x * m in one pass over x.
pub fn dual_mul(x: &[u64], k: u64, out_k: &mut Vec<u64>, m: u64, out_m: &mut Vec<u64>) {
    let len = x.len();
    out_k.clear();
    out_k.resize(len + 1, 0);
    out_m.clear();
    out_m.resize(len + 1, 0);
    let mut ck: u64 = 0;
    let mut cm: u64 = 0;
    for ((&xi, ok), om) in x.iter().zip(out_k.iter_mut()).zip(out_m.iter_mut()) {
        let t = xi as u128 * k as u128 + ck as u128;
        *ok = t as u64;
        ck = (t >> 64) as u64;
        let z = xi as u128 * m as u128 + cm as u128;
        *om = z as u64;
        cm = (z >> 64) as u64;
    }
    out_k[len] = ck;
    out_m[len] = cm;
    if ck == 0 {
        out_k.pop();
    }
    if cm == 0 {
        out_m.pop();
    }
}

/// Exact division feeding two multiplies in the same pass: ex becomes
/// ex / de in place, and each emerging quotient limb q is consumed right
/// away to build out_k = (ex / de) * k and out_m = (ex / de) * m. Saves a
/// full read-write pass over the row compared to dividing first.
pub fn exact_div_then_dual_mul(
    ex: &mut [u64],
    de: &ExactDivisor,
    k: u64,
    out_k: &mut Vec<u64>,
    m: u64,
    out_m: &mut Vec<u64>,
) {
    let len = ex.len();
    out_k.clear();
    out_k.resize(len + 1, 0);
    out_m.clear();
    out_m.resize(len + 1, 0);
    let (me, inve, se) = (de.odd, de.inv, de.shift);
    debug_assert!(se == 0 || len == 0 || ex[0] & ((1u64 << se) - 1) == 0);
    let mut h: u64 = 0;
    let mut borrow: u64 = 0;
    let mut ck: u64 = 0;
    let mut cm: u64 = 0;
    for i in 0..len {
        let hi_fill = if i + 1 < len { (ex[i + 1] << 1) << (63 - se) } else { 0 };
        let y = (ex[i] >> se) | hi_fill;
        let (t1, b1) = y.overflowing_sub(h);
        let (t, b2) = t1.overflowing_sub(borrow);
        let q = t.wrapping_mul(inve);
        ex[i] = q;
        h = ((q as u128 * me as u128) >> 64) as u64;
        borrow = (b1 | b2) as u64;

        let tk = q as u128 * k as u128 + ck as u128;
        out_k[i] = tk as u64;
        ck = (tk >> 64) as u64;
        let tm = q as u128 * m as u128 + cm as u128;
        out_m[i] = tm as u64;
        cm = (tm >> 64) as u64;
    }
    debug_assert!(h == 0 && borrow == 0, "divisor does not divide ex");
    out_k[len] = ck;
    out_m[len] = cm;
    while out_k.last() == Some(&0) {
        out_k.pop();
    }
    while out_m.last() == Some(&0) {
        out_m.pop();
    }
}

/// Three divisions fused into one pass: term_a / da and term_b / db
/// (quotients in place, remainders returned) plus the exact ex / de.
/// Each division is a serial dependency chain of 10-15 cycles per limb;
/// running three chains in one loop lets them overlap, so the pass costs
/// about one chain instead of three.
pub fn interleaved_divs(
    term_a: &mut [u64],
    da: &SmallDivisor,
    term_b: &mut [u64],
    db: &SmallDivisor,
    ex: &mut [u64],
    de: &ExactDivisor,
) -> (u64, u64) {
    let (la, lb, le) = (term_a.len(), term_b.len(), ex.len());
    debug_assert!(de.shift == 0 || le == 0 || ex[0] & ((1u64 << de.shift) - 1) == 0);

    // term divisions walk high to low with on-the-fly normalization; the
    // (prev >> 1) >> (63 - s) form stays defined at s = 0.
    let (sa, dan, va) = (da.shift, da.d << da.shift, da.recip);
    let (sb, dbn, vb) = (db.shift, db.d << db.shift, db.recip);
    let mut ra = if la == 0 { 0 } else { (term_a[la - 1] >> 1) >> (63 - sa) };
    let mut rb = if lb == 0 { 0 } else { (term_b[lb - 1] >> 1) >> (63 - sb) };
    // exact division walks low to high
    let (me, inve, se) = (de.odd, de.inv, de.shift);
    let mut h: u64 = 0;
    let mut borrow: u64 = 0;

    let n = la.max(lb).max(le);
    for i in 0..n {
        if i < la {
            let idx = la - 1 - i;
            let lo_fill = if idx == 0 { 0 } else { (term_a[idx - 1] >> 1) >> (63 - sa) };
            let yi = (term_a[idx] << sa) | lo_fill;
            let (q, nr) = div_2by1(ra, yi, dan, va);
            term_a[idx] = q;
            ra = nr;
        }
        if i < lb {
            let idx = lb - 1 - i;
            let lo_fill = if idx == 0 { 0 } else { (term_b[idx - 1] >> 1) >> (63 - sb) };
            let yi = (term_b[idx] << sb) | lo_fill;
            let (q, nr) = div_2by1(rb, yi, dbn, vb);
            term_b[idx] = q;
            rb = nr;
        }
        if i < le {
            let hi_fill = if i + 1 < le { (ex[i + 1] << 1) << (63 - se) } else { 0 };
            let y = (ex[i] >> se) | hi_fill;
            let (t1, b1) = y.overflowing_sub(h);
            let (t, b2) = t1.overflowing_sub(borrow);
            let q = t.wrapping_mul(inve);
            ex[i] = q;
            h = ((q as u128 * me as u128) >> 64) as u64;
            borrow = (b1 | b2) as u64;
        }
    }
    debug_assert!(h == 0 && borrow == 0, "divisor does not divide ex");
    (ra >> sa, rb >> sb)
}

/// x *= m in place; pushes a carry limb if needed.
pub fn mul_small_in_place(x: &mut Vec<u64>, m: u64) {
    let mut carry: u64 = 0;
    for limb in x.iter_mut() {
        let t = (*limb as u128) * (m as u128) + carry as u128;
        *limb = t as u64;
        carry = (t >> 64) as u64;
    }
    if carry != 0 {
        x.push(carry);
    }
}

/// acc += term, with acc implicitly zero-extended. Grows acc if the carry
/// spills past its end.
pub fn add_in_place(acc: &mut Vec<u64>, term: &[u64]) {
    if acc.len() < term.len() {
        acc.resize(term.len(), 0);
    }
    let mut carry = false;
    for (a, &t) in acc.iter_mut().zip(term.iter()) {
        let (s1, c1) = a.overflowing_add(t);
        let (s2, c2) = s1.overflowing_add(carry as u64);
        *a = s2;
        carry = c1 || c2;
    }
    if carry {
        for a in acc.iter_mut().skip(term.len()) {
            let (s, c) = a.overflowing_add(1);
            *a = s;
            if !c {
                return;
            }
        }
        acc.push(1);
    }
}

/// Number of significant limbs (index one past the top nonzero limb).
pub fn sig_len(x: &[u64]) -> usize {
    let mut n = x.len();
    while n > 0 && x[n - 1] == 0 {
        n -= 1;
    }
    n
}

pub fn to_biguint(x: &[u64]) -> BigUint {
    let mut digits = Vec::with_capacity(x.len() * 2);
    for &limb in x {
        digits.push(limb as u32);
        digits.push((limb >> 32) as u32);
    }
    BigUint::new(digits)
}

pub fn from_biguint(x: &BigUint) -> Vec<u64> {
    x.iter_u64_digits().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use num_traits::One;

    fn rand_limbs(seed: &mut u64, len: usize) -> Vec<u64> {
        (0..len)
            .map(|_| {
                // xorshift64*
                *seed ^= *seed << 13;
                *seed ^= *seed >> 7;
                *seed ^= *seed << 17;
                seed.wrapping_mul(0x2545F4914F6CDD1D)
            })
            .collect()
    }

    #[test]
    fn div_small_matches_bigint() {
        let mut seed = 0x9E3779B97F4A7C15u64;
        for len in [1usize, 2, 3, 7, 40] {
            for d in [1u64, 2, 3, 5, 17, 20001, u64::MAX, 1 << 63, (1 << 62) + 1] {
                let x = rand_limbs(&mut seed, len);
                let big = to_biguint(&x);
                let (q_ref, r_ref) = (big.clone() / d, big % d);
                let mut limbs = x.clone();
                let r = div_small_in_place(&mut limbs, d);
                assert_eq!(to_biguint(&limbs), q_ref, "quotient, d={d} len={len}");
                assert_eq!(BigUint::from(r), r_ref, "remainder, d={d} len={len}");
            }
        }
    }

    #[test]
    fn mul_small_matches_bigint() {
        let mut seed = 42;
        for len in [1usize, 2, 5, 33] {
            for m in [0u64, 1, 2, 3, 0xFFFF_FFFF, u64::MAX] {
                let x = rand_limbs(&mut seed, len);
                let mut limbs = x.clone();
                mul_small_in_place(&mut limbs, m);
                assert_eq!(to_biguint(&limbs), to_biguint(&x) * m);
            }
        }
    }

    #[test]
    fn exact_div_matches_bigint() {
        let mut seed = 0xDEADBEEFCAFEu64;
        for len in [1usize, 2, 3, 8, 50] {
            for d in [1u64, 2, 3, 6, 24, 97, 1 << 13, 20001 * 19999, u64::MAX, (1 << 63) + 1] {
                let q = rand_limbs(&mut seed, len);
                // build an exact multiple, then recover q
                let prod = to_biguint(&q) * d;
                let mut limbs = from_biguint(&prod);
                ExactDivisor::new(d).div_in_place(&mut limbs);
                assert_eq!(to_biguint(&limbs), to_biguint(&q), "d={d} len={len}");
            }
        }
    }

    #[test]
    fn dual_mul_matches_two_singles() {
        let mut seed = 7;
        for len in [1usize, 4, 31] {
            let x = rand_limbs(&mut seed, len);
            let (mut a, mut b) = (Vec::new(), Vec::new());
            dual_mul(&x, 0x1234_5678_9ABC, &mut a, u64::MAX, &mut b);
            assert_eq!(to_biguint(&a), to_biguint(&x) * 0x1234_5678_9ABCu64);
            assert_eq!(to_biguint(&b), to_biguint(&x) * u64::MAX);
        }
        let (mut a, mut b) = (vec![9u64], vec![9u64]);
        dual_mul(&[], 3, &mut a, 5, &mut b);
        assert!(a.is_empty() && b.is_empty());
    }

    // Per-pass cost probe; run with
    //   cargo test -p faberlens --lib pass_cost_probe -- --ignored --nocapture
    #[test]
    #[ignore]
    fn pass_cost_probe() {
        use std::time::Instant;
        let mut seed = 0x1234_5678_9ABC_DEF0u64;
        let w = 230usize;
        let reps = 200_000u32;
        let base = rand_limbs(&mut seed, w);
        let de = ExactDivisor::new(123457);
        let da = SmallDivisor::new((1 << 40) + 7);
        let db = SmallDivisor::new((1 << 39) + 11);
        let (k, m) = ((1 << 41) + 3u64, (1 << 40) + 9u64);

        let mult = from_biguint(&(to_biguint(&base) * 123457u64));
        let (mut t1, mut t2) = (Vec::new(), Vec::new());
        let mut acc = vec![0u64; w + 8];

        let t = Instant::now();
        for _ in 0..reps {
            dual_mul(&base, k, &mut t1, m, &mut t2);
        }
        let d_dual = t.elapsed().as_secs_f64();

        let t = Instant::now();
        let mut e = mult.clone();
        for _ in 0..reps {
            e.copy_from_slice(&mult);
            de.div_in_place(&mut e);
        }
        let d_exact = t.elapsed().as_secs_f64();

        let t = Instant::now();
        for _ in 0..reps {
            e.copy_from_slice(&mult);
            exact_div_then_dual_mul(&mut e, &de, k, &mut t1, m, &mut t2);
        }
        let d_fused = t.elapsed().as_secs_f64();

        let t = Instant::now();
        let mut u1 = base.clone();
        let mut u2 = base.clone();
        for _ in 0..reps {
            u1.copy_from_slice(&base);
            u2.copy_from_slice(&base);
            da.div_in_place(&mut u1);
            db.div_in_place(&mut u2);
            e.copy_from_slice(&mult);
            de.div_in_place(&mut e);
        }
        let d_sep3 = t.elapsed().as_secs_f64();

        let t = Instant::now();
        for _ in 0..reps {
            u1.copy_from_slice(&base);
            u2.copy_from_slice(&base);
            e.copy_from_slice(&mult);
            interleaved_divs(&mut u1, &da, &mut u2, &db, &mut e, &de);
        }
        let d_il3 = t.elapsed().as_secs_f64();

        let t = Instant::now();
        for _ in 0..reps {
            add_in_place(&mut acc, &base);
        }
        let d_add = t.elapsed().as_secs_f64();

        let per = |d: f64| d / reps as f64 / w as f64 * 2.1e9; // cycles/limb at 2.1GHz
        eprintln!("dual_mul        {:6.2} c/limb", per(d_dual));
        eprintln!("exact_div       {:6.2} c/limb (copy included)", per(d_exact));
        eprintln!("fused exdiv+mul {:6.2} c/limb (copy included)", per(d_fused));
        eprintln!("3 divs separate {:6.2} c/limb (copies included)", per(d_sep3));
        eprintln!("3 divs fused    {:6.2} c/limb (copies included)", per(d_il3));
        eprintln!("add_in_place    {:6.2} c/limb", per(d_add));
    }

    #[test]
    fn fused_exact_div_mul_matches_sequential() {
        let mut seed = 0x5555AAAA5555u64;
        for len in [1usize, 3, 9, 37] {
            for de in [1u64, 5, 12, 1 << 9, (1 << 40) + 9] {
                let q = rand_limbs(&mut seed, len);
                let mut e = from_biguint(&(to_biguint(&q) * de));
                let (k, m) = (0xDEAD_BEEFu64, (1 << 41) + 3);
                let (mut ok, mut om) = (Vec::new(), Vec::new());
                exact_div_then_dual_mul(&mut e, &ExactDivisor::new(de), k, &mut ok, m, &mut om);
                assert_eq!(to_biguint(&e), to_biguint(&q), "quotient de={de} len={len}");
                assert_eq!(to_biguint(&ok), to_biguint(&q) * k);
                assert_eq!(to_biguint(&om), to_biguint(&q) * m);
            }
        }
    }

    #[test]
    fn interleaved_matches_separate_divisions() {
        let mut seed = 0xABCDEF0123u64;
        for (la, lb, lq) in [(1usize, 1usize, 1usize), (4, 5, 3), (12, 11, 13), (40, 38, 41)] {
            for (da, db, de) in [(3u64, 7u64, 6u64), (20001, 999983, 24), ((1 << 40) + 5, (1 << 39) + 1, 1 << 13)] {
                let a = rand_limbs(&mut seed, la);
                let b = rand_limbs(&mut seed, lb);
                let q = rand_limbs(&mut seed, lq);
                let e = from_biguint(&(to_biguint(&q) * de));

                let (mut a1, mut b1, mut e1) = (a.clone(), b.clone(), e.clone());
                let ra_ref = div_small_in_place(&mut a1, da);
                let rb_ref = div_small_in_place(&mut b1, db);
                ExactDivisor::new(de).div_in_place(&mut e1);

                let (mut a2, mut b2, mut e2) = (a, b, e);
                let (ra, rb) = interleaved_divs(
                    &mut a2,
                    &SmallDivisor::new(da),
                    &mut b2,
                    &SmallDivisor::new(db),
                    &mut e2,
                    &ExactDivisor::new(de),
                );
                assert_eq!((ra, rb), (ra_ref, rb_ref));
                assert_eq!(a2, a1);
                assert_eq!(b2, b1);
                assert_eq!(e2, e1);
            }
        }
    }

    #[test]
    fn add_carries_across_and_grows() {
        let mut acc = vec![u64::MAX, u64::MAX];
        add_in_place(&mut acc, &[1]);
        assert_eq!(acc, vec![0, 0, 1]);

        let mut acc = vec![5u64];
        add_in_place(&mut acc, &[u64::MAX, u64::MAX, 7]);
        assert_eq!(to_biguint(&acc), to_biguint(&[u64::MAX, u64::MAX, 7]) + 5u32);
    }

    #[test]
    fn biguint_round_trip() {
        let one: BigUint = One::one();
        let x = (one << 200u32) - BigUint::from(12345u32);
        assert_eq!(to_biguint(&from_biguint(&x)), x);
    }
}
