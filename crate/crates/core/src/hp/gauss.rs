//! Gauss-Legendre rules at dyadic precision, cached per (order, precision).

use super::Dyadic;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

#[derive(Debug)]
pub struct GlRule {
    /// nodes on (-1, 1), ascending
    pub nodes: Vec<Dyadic>,
    pub weights: Vec<Dyadic>,
}

static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Arc<GlRule>>>> = OnceLock::new();

pub fn gl_rule(q: usize, prec: u32) -> Arc<GlRule> {
    assert!(q >= 1);
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().unwrap().get(&(q, prec)) {
        return r.clone();
    }
    let rule = Arc::new(compute(q, prec));
    cache.lock().unwrap().insert((q, prec), rule.clone());
    rule
}

/// P_q(x) and P_{q-1}(x), rounded at g bits per recurrence step.
fn legendre_pair(q: usize, x: &Dyadic, g: u32) -> (Dyadic, Dyadic) {
    let mut pm = Dyadic::one();
    let mut p = x.round(g);
    if q == 1 {
        return (p, pm);
    }
    for k in 2..=q as i64 {
        let next = x
            .mul(&p)
            .mul_i64(2 * k - 1)
            .sub(&pm.mul_i64(k - 1))
            .div(&Dyadic::from_i64(k), g);
        pm = p;
        p = next;
    }
    (p, pm)
}

fn compute(q: usize, prec: u32) -> GlRule {
    let g = prec + 32;
    let one = Dyadic::one();
    // The cosine seed is only about 2^-6 accurate for small q, and Newton
    // doubles correct bits per step; one extra step as margin.
    let newton_steps = {
        let mut t = 1u32;
        while 6u64 << t < g as u64 + 8 {
            t += 1;
        }
        t + 1
    };
    let mut nodes = vec![Dyadic::zero(); q];
    let mut weights = vec![Dyadic::zero(); q];
    for i in 0..q / 2 {
        let seed = (std::f64::consts::PI * (i as f64 + 0.75) / (q as f64 + 0.5)).cos();
        let mut x = dyadic_from_f64(seed);
        for _ in 0..newton_steps {
            let (p, pm) = legendre_pair(q, &x, g);
            // P'_q = q (x P_q - P_{q-1}) / (x^2 - 1)
            let den = x.mul(&x).sub(&one);
            let dp = x.mul(&p).sub(&pm).mul_i64(q as i64).div(&den, g);
            x = x.sub(&p.div(&dp, g)).round(g);
        }
        // derivative at the settled node, for the weight
        let (p, pm) = legendre_pair(q, &x, g);
        let den = x.mul(&x).sub(&one);
        let dp = x.mul(&p).sub(&pm).mul_i64(q as i64).div(&den, g);
        let w = Dyadic::from_i64(2).div(&den.neg().mul(&dp.mul(&dp)), g);
        // seeds descend from +1; store ascending
        nodes[q - 1 - i] = x.round(prec);
        weights[q - 1 - i] = w.round(prec);
        nodes[i] = nodes[q - 1 - i].neg();
        weights[i] = weights[q - 1 - i].clone();
    }
    if q % 2 == 1 {
        let x = Dyadic::zero();
        let (_, pm) = legendre_pair(q, &x, g);
        // P'_q(0) = q * (x P_q - P_{q-1}) / (x^2 - 1) = q * P_{q-1}(0)
        let dp = pm.mul_i64(q as i64);
        let w = Dyadic::from_i64(2).div(&dp.mul(&dp), g);
        nodes[q / 2] = x;
        weights[q / 2] = w.round(prec);
    }
    GlRule { nodes, weights }
}

pub fn dyadic_from_f64(v: f64) -> Dyadic {
    assert!(v.is_finite());
    if v == 0.0 {
        return Dyadic::zero();
    }
    let bits = v.to_bits();
    let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
    let biased = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, exp) = if biased == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), biased - 1075)
    };
    Dyadic::new(num_bigint::BigInt::from(sign * mant as i64), exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_point_nodes_match_reference() {
        let r = gl_rule(5, 160);
        let known = [
            -0.906179845938664,
            -0.538469310105683,
            0.0,
            0.538469310105683,
            0.906179845938664,
        ];
        for (n, k) in r.nodes.iter().zip(known) {
            assert!((n.to_f64() - k).abs() < 1e-14, "node {} vs {}", n.to_f64(), k);
        }
        let wsum: f64 = r.weights.iter().map(|w| w.to_f64()).sum();
        assert!((wsum - 2.0).abs() < 1e-14);
    }

    #[test]
    fn integrates_high_degree_monomial_exactly() {
        // q = 7 integrates degree 13; check x^12 -> 2/13
        let prec = 192;
        let r = gl_rule(7, prec);
        let mut acc = Dyadic::zero();
        for (x, w) in r.nodes.iter().zip(&r.weights) {
            let mut p = Dyadic::one();
            for _ in 0..12 {
                p = p.mul(x).round(prec);
            }
            acc = acc.add(&p.mul(w)).round(prec + 16);
        }
        let expect = Dyadic::from_i64(2).div(&Dyadic::from_i64(13), prec);
        assert!(acc.sub(&expect).abs().mag2() < -(prec as i64) + 24);
    }

    #[test]
    fn legendre_eval_known_point() {
        let x = dyadic_from_f64(0.5);
        let (p, pm) = legendre_pair(5, &x, 160);
        assert!((p.to_f64() - 0.08984375).abs() < 1e-14, "P5(0.5) = {}", p.to_f64());
        assert!((pm.to_f64() - -0.2890625).abs() < 1e-14, "P4(0.5) = {}", pm.to_f64());
    }

    #[test]
    fn f64_round_trip() {
        for v in [0.0, 1.0, -2.5, 0.1, f64::MIN_POSITIVE, 1e300] {
            assert_eq!(dyadic_from_f64(v).to_f64(), v);
        }
    }
}
