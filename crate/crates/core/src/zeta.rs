//! Riemann and Hurwitz zeta functions, their `s`-derivative and the digamma function,
//! evaluated by Euler–Maclaurin summation.

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `B_{2j} / (2j)!` for `j = 1..=15`.
const BERNOULLI_OVER_FACT: [f64; 15] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0,
    77683.0 / 14101100039391805440000.0,
    -236364091.0 / 1693824136731743669452800000.0,
    657931.0 / 186134520519971831808000000.0,
    -3392780147.0 / 37893265687455865519472640000000.0,
    1723168255201.0 / 759790291646040068357842010112000000.0,
];

/// Bernoulli numbers `B_{2j}` for `j = 1..=8`.
const BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

fn shift_for(s: f64, a: f64) -> usize {
    // At non-positive integers the Euler–Maclaurin tail terminates, so no shift is needed.
    if s <= 0.0 && s == s.round() {
        return 0;
    }
    let target = 10.0 + s.abs();
    if a >= target {
        0
    } else {
        (target - a).ceil() as usize
    }
}

/// `ζ(s, a) = Σ_{k≥0} (k + a)^{-s}`, analytically continued; `s ≠ 1`, `a > 0`.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    assert!(a > 0.0, "Hurwitz zeta needs a > 0");
    assert!((s - 1.0).abs() > 1e-14, "Hurwitz zeta has a pole at s = 1");
    let m = shift_for(s, a);
    let mut direct = 0.0;
    for k in (0..m).rev() {
        direct += (a + k as f64).powf(-s);
    }
    let big = a + m as f64;
    let mut tail = big.powf(1.0 - s) / (s - 1.0) + 0.5 * big.powf(-s);
    let mut poch = s;
    let mut pw = big.powf(-s - 1.0);
    for (j, b) in BERNOULLI_OVER_FACT.iter().enumerate() {
        let term = b * poch * pw;
        tail += term;
        if poch == 0.0 || term.abs() < 1e-18 * tail.abs() {
            break;
        }
        let i = 2 * j as i32 + 1;
        poch *= (s + i as f64) * (s + i as f64 + 1.0);
        pw /= big * big;
    }
    direct + tail
}

/// `∂ζ(s, a)/∂s`; `s ≠ 1`, `a > 0`.
pub fn hurwitz_zeta_deriv(s: f64, a: f64) -> f64 {
    assert!(a > 0.0, "Hurwitz zeta needs a > 0");
    assert!((s - 1.0).abs() > 1e-14, "Hurwitz zeta has a pole at s = 1");
    let m = if a >= 10.0 + s.abs() {
        0
    } else {
        (10.0 + s.abs() - a).ceil() as usize
    };
    let mut direct = 0.0;
    for k in (0..m).rev() {
        let x = a + k as f64;
        direct -= x.ln() * x.powf(-s);
    }
    let big = a + m as f64;
    let lb = big.ln();
    let mut tail = -lb * big.powf(1.0 - s) / (s - 1.0)
        - big.powf(1.0 - s) / ((s - 1.0) * (s - 1.0))
        - 0.5 * lb * big.powf(-s);
    for (j, b) in BERNOULLI_OVER_FACT.iter().enumerate() {
        let top = 2 * j + 1;
        let factors: Vec<f64> = (0..top).map(|i| s + i as f64).collect();
        let poch: f64 = factors.iter().product();
        let dpoch: f64 = (0..top)
            .map(|i| {
                factors
                    .iter()
                    .enumerate()
                    .filter(|(l, _)| *l != i)
                    .map(|(_, f)| *f)
                    .product::<f64>()
            })
            .sum();
        let pw = big.powf(-s - top as f64);
        let term = b * (dpoch - poch * lb) * pw;
        tail += term;
        if term.abs() < 1e-18 * tail.abs().max(1e-300) && poch != 0.0 {
            break;
        }
    }
    direct + tail
}

/// Riemann zeta function for real `s ≠ 1`.
pub fn riemann_zeta(s: f64) -> f64 {
    hurwitz_zeta(s, 1.0)
}

/// `ζ'(s)` for real `s ≠ 1`.
pub fn riemann_zeta_deriv(s: f64) -> f64 {
    hurwitz_zeta_deriv(s, 1.0)
}

/// Digamma `ψ(x)` for `x > 0`.
pub fn digamma(mut x: f64) -> f64 {
    assert!(x > 0.0, "digamma needs x > 0");
    let mut acc = 0.0;
    while x < 12.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let mut series = 0.0;
    let mut pw = inv2;
    for (k, b) in BERNOULLI.iter().enumerate() {
        series += b / (2.0 * (k + 1) as f64) * pw;
        pw *= inv2;
    }
    acc + x.ln() - 0.5 / x - series
}

/// `H_n = Σ_{k=1}^n 1/k`.
pub fn harmonic(n: u64) -> f64 {
    (1..=n).rev().map(|k| 1.0 / k as f64).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn riemann_special_values() {
        assert!((riemann_zeta(2.0) - PI * PI / 6.0).abs() < 1e-15);
        assert!((riemann_zeta(4.0) - PI.powi(4) / 90.0).abs() < 1e-15);
        assert!((riemann_zeta(0.0) + 0.5).abs() < 1e-15);
        assert!((riemann_zeta(-1.0) + 1.0 / 12.0).abs() < 1e-15);
        assert!(riemann_zeta(-2.0).abs() < 1e-15);
        assert!((riemann_zeta(-3.0) - 1.0 / 120.0).abs() < 1e-15);
    }

    #[test]
    fn riemann_zeta_at_pi_against_direct_sum() {
        // Direct partial sum plus Euler–Maclaurin-free integral tail bound.
        let n = 200_000u64;
        let mut s = 0.0;
        for k in (1..=n).rev() {
            s += (k as f64).powf(-PI);
        }
        let x = n as f64 + 0.5;
        s += x.powf(1.0 - PI) / (PI - 1.0);
        assert!((riemann_zeta(PI) - s).abs() < 1e-13);
    }

    #[test]
    fn hurwitz_matches_shifted_riemann() {
        for s in [-2.5, -1.0, 0.0, 0.5, 2.0, 3.7] {
            let direct: f64 = (1..=40).map(|k| (k as f64).powf(-s)).sum();
            let lhs = hurwitz_zeta(s, 41.0);
            let rhs = riemann_zeta(s) - direct;
            assert!((lhs - rhs).abs() < 1e-11 * rhs.abs().max(1.0), "s={s}");
        }
    }

    #[test]
    fn hurwitz_negative_integers_are_bernoulli_polynomials() {
        // ζ(-1, a) = -B₂(a)/2 with B₂(a) = a² - a + 1/6.
        let a = 33.0;
        let exact = -(a * a - a + 1.0 / 6.0) / 2.0;
        assert!((hurwitz_zeta(-1.0, a) - exact).abs() < 1e-12 * exact.abs());
        // ζ(0, a) = 1/2 - a.
        assert!((hurwitz_zeta(0.0, a) - (0.5 - a)).abs() < 1e-13);
    }

    #[test]
    fn derivative_against_central_difference() {
        for (s, a) in [(2.5, 1.0), (-1.5, 7.0), (0.3, 40.0), (-3.2, 65.0)] {
            let h = 1e-5;
            let fd = (hurwitz_zeta(s + h, a) - hurwitz_zeta(s - h, a)) / (2.0 * h);
            let d = hurwitz_zeta_deriv(s, a);
            assert!(
                (fd - d).abs() < 1e-7 * d.abs().max(1.0),
                "s={s} a={a}: {fd} vs {d}"
            );
        }
        // ζ'(0) = -log(2π)/2.
        assert!((riemann_zeta_deriv(0.0) + (2.0 * PI).ln() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn digamma_values() {
        assert!((digamma(1.0) + EULER_GAMMA).abs() < 1e-15);
        for n in [1u64, 5, 33, 100] {
            assert!((digamma(n as f64 + 1.0) - (harmonic(n) - EULER_GAMMA)).abs() < 1e-14);
        }
        assert!((digamma(0.5) + EULER_GAMMA + 2.0 * 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn laurent_constant_of_zeta_at_one() {
        // ζ(1+h) - 1/h → γ.
        let s = 1.0 + 1e-6;
        let h = s - 1.0;
        assert!((riemann_zeta(s) - 1.0 / h - EULER_GAMMA).abs() < 1e-6);
    }
}
