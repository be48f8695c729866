//! Zeta-regularized spectral sums: weighted traces, the canonical trace and the
//! Wodzicki residue read off the pole at `z = 0`.

use crate::asym::Asym;
use crate::error::{Error, Result};
use crate::modes::BlockBandOperator;
use crate::weight::{DiagonalWeight, Ray};
use crate::zeta::{digamma, hurwitz_zeta, hurwitz_zeta_deriv};
use crate::{CMat, C64};

const EXP_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineConfig {
    /// Number of series terms kept in every factor expansion.
    pub depth: usize,
    /// Modes summed exactly before the asymptotic tail takes over.
    pub head_cutoff: i64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            depth: 16,
            head_cutoff: 32,
        }
    }
}

impl EngineConfig {
    /// Exact head length for an operator whose factors reach `radius` modes: the tail
    /// expansions converge like `(radius/N)^depth`, so `N` grows until that is negligible.
    pub fn cutoff_for(&self, radius: i64) -> i64 {
        let r = radius.max(1) as f64;
        let needed = (r * 10f64.powf(16.0 / self.depth.max(1) as f64))
            .ceil()
            .min(16384.0) as i64;
        self.head_cutoff.max(6 * radius).max(needed)
    }
}

/// Laurent data at `z = 0`: constant term and residue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularizedValue {
    pub finite_part: C64,
    pub pole_residue: C64,
    pub is_entire: bool,
}

impl RegularizedValue {
    fn new(finite_part: C64, pole_residue: C64) -> Self {
        Self {
            finite_part,
            pole_residue,
            is_entire: pole_residue.norm() < 1e-12,
        }
    }
}

/// Diagonal fibre traces `c_n`: exact values for `|n| ≤ cutoff` and ray expansions beyond.
#[derive(Debug, Clone)]
pub struct DiagonalTraceData {
    pub cutoff: i64,
    pub head: Vec<C64>,
    pub plus: Asym<C64>,
    pub minus: Asym<C64>,
}

/// Neumaier-compensated sum in a fixed order.
pub fn stable_sum(values: impl IntoIterator<Item = C64>) -> C64 {
    let (mut s_re, mut c_re, mut s_im, mut c_im) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let step = |s: &mut f64, c: &mut f64, x: f64| {
        let t = *s + x;
        if s.abs() >= x.abs() {
            *c += (*s - t) + x;
        } else {
            *c += (x - t) + *s;
        }
        *s = t;
    };
    for v in values {
        step(&mut s_re, &mut c_re, v.re);
        step(&mut s_im, &mut c_im, v.im);
    }
    C64::new(s_re + c_re, s_im + c_im)
}

impl DiagonalTraceData {
    pub fn from_operator(a: &BlockBandOperator, cfg: &EngineConfig) -> Result<Self> {
        let cutoff = cfg.cutoff_for(a.validity_radius());
        let head = (-cutoff..=cutoff).map(|n| a.diag_trace(n)).collect();
        Ok(Self {
            cutoff,
            head,
            plus: a.diag_trace_expansion(Ray::Plus, cfg.depth)?,
            minus: a.diag_trace_expansion(Ray::Minus, cfg.depth)?,
        })
    }

    /// Data from an explicit sequence `c_n` with its ray expansions.
    pub fn from_fn(cutoff: i64, c: impl Fn(i64) -> C64, plus: Asym<C64>, minus: Asym<C64>) -> Self {
        Self {
            cutoff,
            head: (-cutoff..=cutoff).map(c).collect(),
            plus,
            minus,
        }
    }

    pub fn value(&self, n: i64) -> Option<C64> {
        if n.abs() > self.cutoff {
            return None;
        }
        Some(self.head[(n + self.cutoff) as usize])
    }

    fn head_sum(&self) -> C64 {
        // Pair n and -n so that symmetric cancellations happen before accumulation.
        let mid = self.cutoff as usize;
        let vals = (0..=mid).map(|i| {
            if i == 0 {
                self.head[mid]
            } else {
                self.head[mid + i] + self.head[mid - i]
            }
        });
        stable_sum(vals)
    }

    fn rays(&self) -> [(Ray, &Asym<C64>); 2] {
        [(Ray::Plus, &self.plus), (Ray::Minus, &self.minus)]
    }

    fn scale(&self) -> f64 {
        self.rays()
            .iter()
            .flat_map(|(_, a)| a.terms.iter().map(|t| t.c.norm()))
            .fold(0.0, f64::max)
    }

    fn check_remainder(&self) -> Result<()> {
        for (_, a) in self.rays() {
            if a.rem >= -1.0 - EXP_EPS {
                return Err(Error::Depth(format!(
                    "tail remainder O(|n|^{}) is not summable; raise the expansion depth",
                    a.rem
                )));
            }
        }
        Ok(())
    }
}

fn integer_at_least(x: f64, min: i64) -> Option<usize> {
    let r = x.round();
    if (x - r).abs() < EXP_EPS && r as i64 >= min {
        Some((r as i64 - min) as usize)
    } else {
        None
    }
}

/// Laurent data of `z ↦ Σ_n c_n μ_n^{-z}` at `z = 0`.
pub fn finite_part_sum(data: &DiagonalTraceData, q: &DiagonalWeight) -> Result<RegularizedValue> {
    data.check_remainder()?;
    let ord = q.order();
    let a = (data.cutoff + 1) as f64;
    let tol = 1e-12 * data.scale().max(1e-300);
    let mut finite = vec![data.head_sum()];
    let mut residue = C64::new(0.0, 0.0);
    let psi = digamma(a);
    for (ray, asym) in data.rays() {
        let max_i = asym
            .terms
            .iter()
            .filter_map(|t| integer_at_least(t.exp + 1.0, 0))
            .max()
            .unwrap_or(0);
        let l = q.log_profile(ray, 0, max_i + 1);
        for t in &asym.terms {
            let peel = integer_at_least(t.exp + 1.0, 0);
            if t.log > 0 {
                if t.c.norm() <= tol {
                    continue;
                }
                if peel.is_some() {
                    return Err(Error::LogPole(t.exp));
                }
                finite.push(-t.c * hurwitz_zeta_deriv(-t.exp, a));
                continue;
            }
            if (t.exp + 1.0).abs() < EXP_EPS {
                residue += t.c / ord;
                finite.push(-t.c * psi);
            } else {
                finite.push(t.c * hurwitz_zeta(-t.exp, a));
            }
            if let Some(i) = peel {
                finite.push(-t.c * l[i] / ord);
            }
        }
    }
    Ok(RegularizedValue::new(stable_sum(finite), residue))
}

/// Value at `z = 0` of the unweighted continuation `Σ_n c_n |n|^{-z}`, defined when no
/// exponent sits at `-1`.
pub fn continued_sum(data: &DiagonalTraceData) -> Result<C64> {
    data.check_remainder()?;
    let a = (data.cutoff + 1) as f64;
    let tol = 1e-12 * data.scale().max(1e-300);
    let mut parts = vec![data.head_sum()];
    for (_, asym) in data.rays() {
        for t in &asym.terms {
            if (t.exp + 1.0).abs() < EXP_EPS {
                if t.c.norm() <= tol {
                    continue;
                }
                return Err(Error::IntegerOrder(t.exp));
            }
            if t.log > 0 {
                parts.push(-t.c * hurwitz_zeta_deriv(-t.exp, a));
            } else {
                parts.push(t.c * hurwitz_zeta(-t.exp, a));
            }
        }
    }
    Ok(stable_sum(parts))
}

pub fn weighted_trace_value(
    a: &BlockBandOperator,
    q: &DiagonalWeight,
    cfg: &EngineConfig,
) -> Result<RegularizedValue> {
    finite_part_sum(&DiagonalTraceData::from_operator(a, cfg)?, q)
}

/// `tr^Q(A)`: finite part at `z = 0` of `TR(A Q^{-z})` with the pole subtracted.
pub fn weighted_trace(
    a: &BlockBandOperator,
    q: &DiagonalWeight,
    cfg: &EngineConfig,
) -> Result<C64> {
    Ok(weighted_trace_value(a, q, cfg)?.finite_part)
}

/// `res(A) = ord Q · Res_{z=0} TR(A Q^{-z})`.
pub fn wres_from_modes(
    a: &BlockBandOperator,
    q: &DiagonalWeight,
    cfg: &EngineConfig,
) -> Result<C64> {
    Ok(weighted_trace_value(a, q, cfg)?.pole_residue * q.order())
}

/// Residue read directly off the `|n|^{-1}` coefficients of the diagonal on both rays.
pub fn residue_density(a: &BlockBandOperator, cfg: &EngineConfig) -> Result<C64> {
    let mut acc = C64::new(0.0, 0.0);
    for ray in Ray::both() {
        let e = a.diag_trace_expansion(ray, cfg.depth)?;
        if e.rem >= -1.0 - EXP_EPS {
            return Err(Error::Depth("residue coefficient not resolved".into()));
        }
        if let Some(c) = e.coeff_at(-1.0) {
            acc += c;
        }
    }
    Ok(acc)
}

/// Canonical trace of an operator of non-integer order.
pub fn canonical_trace(a: &BlockBandOperator, cfg: &EngineConfig) -> Result<C64> {
    let ord = a.order(cfg.depth)?;
    if ord.is_finite() && (ord - ord.round()).abs() < EXP_EPS && ord >= -1.0 - EXP_EPS {
        return Err(Error::IntegerOrder(ord));
    }
    continued_sum(&DiagonalTraceData::from_operator(a, cfg)?)
}

/// `tr^{Q₁}(A) - tr^{Q₂}(A)` against `-q⁻¹ res(A (log Q₁ - log Q₂))`.
pub fn weight_dependence(
    a: &BlockBandOperator,
    q1: &DiagonalWeight,
    q2: &DiagonalWeight,
    cfg: &EngineConfig,
) -> Result<(C64, C64)> {
    let ord = q1.order();
    if (ord - q2.order()).abs() > EXP_EPS {
        return Err(Error::OrderMismatch(ord, q2.order()));
    }
    let lhs = weighted_trace(a, q1, cfg)? - weighted_trace(a, q2, cfg)?;
    let dlog = BlockBandOperator::log_quotient(a.block_size(), q1, q2);
    let rhs = -residue_density(&a.compose(&dlog)?, cfg)? / ord;
    Ok((lhs, rhs))
}

/// Invertible conjugator `C = g · M_{e^{ikt}}` with constant invertible `g`.
#[derive(Debug, Clone)]
pub struct Conjugator {
    pub matrix: CMat,
    pub shift: i64,
}

impl Conjugator {
    pub fn operator(&self) -> BlockBandOperator {
        BlockBandOperator::multiplication(self.matrix.nrows(), [(self.shift, self.matrix.clone())])
    }

    pub fn inverse(&self) -> Result<BlockBandOperator> {
        let inv = self
            .matrix
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Unsupported("conjugator matrix is singular".into()))?;
        Ok(BlockBandOperator::multiplication(
            inv.nrows(),
            [(-self.shift, inv)],
        ))
    }

    /// `C⁻¹QC`, again diagonal: eigenvalue `μ_{n+k}` at mode `n`.
    pub fn conjugate_weight(&self, q: &DiagonalWeight) -> DiagonalWeight {
        q.with_shift(self.shift)
    }
}

/// `tr^{C⁻¹QC}(A)` against `tr^Q(CAC⁻¹)`.
pub fn covariance_check(
    a: &BlockBandOperator,
    q: &DiagonalWeight,
    c: &Conjugator,
    cfg: &EngineConfig,
) -> Result<(C64, C64)> {
    let lhs = weighted_trace(a, &c.conjugate_weight(q), cfg)?;
    let conj = c.operator().compose(a)?.compose(&c.inverse()?)?;
    let rhs = weighted_trace(&conj, q, cfg)?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asym::Mono;
    use crate::modes::Factor;
    use crate::zeta::{riemann_zeta, EULER_GAMMA};
    use std::f64::consts::PI;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn mono(exp: f64, v: f64) -> Asym<C64> {
        Asym::new(
            vec![Mono {
                exp,
                log: 0,
                c: c(v),
            }],
            f64::NEG_INFINITY,
        )
    }

    #[test]
    fn constant_sequence_has_zero_weighted_trace() {
        let data = DiagonalTraceData::from_fn(32, |_| c(3.0), mono(0.0, 3.0), mono(0.0, 3.0));
        let v = finite_part_sum(&data, &DiagonalWeight::laplacian()).unwrap();
        // 3·(1 + 2ζ(0)) = 0
        let oracle = 3.0 * (1.0 + 2.0 * riemann_zeta(0.0));
        assert!((v.finite_part - oracle).norm() < 1e-12);
        assert!(v.is_entire);
    }

    #[test]
    fn inverse_abs_gives_euler_gamma() {
        let f = |n: i64| {
            if n == 0 {
                c(0.0)
            } else {
                c(1.0 / n.abs() as f64)
            }
        };
        let data = DiagonalTraceData::from_fn(40, f, mono(-1.0, 1.0), mono(-1.0, 1.0));
        let v = finite_part_sum(&data, &DiagonalWeight::laplacian()).unwrap();
        assert!((v.pole_residue - c(1.0)).norm() < 1e-14);
        assert!((v.finite_part - c(2.0 * EULER_GAMMA)).norm() < 1e-12);
    }

    #[test]
    fn inverse_square_is_absolutely_convergent() {
        let f = |n: i64| {
            if n == 0 {
                c(0.0)
            } else {
                c(1.0 / (n * n) as f64)
            }
        };
        let data = DiagonalTraceData::from_fn(16, f, mono(-2.0, 1.0), mono(-2.0, 1.0));
        let v = finite_part_sum(&data, &DiagonalWeight::abs_power(1.0, 2.0).unwrap()).unwrap();
        assert!((v.finite_part - c(PI * PI / 3.0)).norm() < 1e-13);
        assert!(v.is_entire);
    }

    #[test]
    fn identity_trace_vanishes_for_laplacian_weight() {
        let cfg = EngineConfig::default();
        let id = BlockBandOperator::identity(3);
        let v = weighted_trace_value(&id, &DiagonalWeight::laplacian(), &cfg).unwrap();
        assert!(v.finite_part.norm() < 1e-12);
        assert!(v.is_entire);
    }

    #[test]
    fn sign_trace_is_kernel_contribution() {
        // Σ_{n≥0} μ^{-z} - Σ_{n<0} μ^{-z} = 1 for every symmetric weight.
        let cfg = EngineConfig::default();
        let eps = BlockBandOperator::epsilon_sign(2);
        for q in [
            DiagonalWeight::laplacian(),
            DiagonalWeight::abs_power(1.0, 2.0).unwrap(),
            DiagonalWeight::abs_d(),
        ] {
            let v = weighted_trace(&eps, &q, &cfg).unwrap();
            assert!((v - c(2.0)).norm() < 1e-12, "{}: {v}", q.describe());
        }
    }

    #[test]
    fn residue_of_inverse_abs_is_twice_dimension() {
        let cfg = EngineConfig::default();
        for d in 1..=3 {
            let a = BlockBandOperator::weight_power(d, &DiagonalWeight::abs_d(), -1.0);
            for q in [
                DiagonalWeight::laplacian(),
                DiagonalWeight::abs_power(0.0, 4.0).unwrap(),
                DiagonalWeight::abs_power(1.0, 2.0).unwrap(),
            ] {
                let r = wres_from_modes(&a, &q, &cfg).unwrap();
                assert!((r - c(2.0 * d as f64)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn canonical_trace_of_non_integer_power() {
        let cfg = EngineConfig::default();
        let a = BlockBandOperator::weight_power(1, &DiagonalWeight::abs_d(), -PI);
        let v = canonical_trace(&a, &cfg).unwrap();
        assert!((v - c(1.0 + 2.0 * riemann_zeta(PI))).norm() < 1e-12);
        let b = BlockBandOperator::weight_power(1, &DiagonalWeight::abs_d(), 0.5);
        assert!(
            (canonical_trace(&b, &cfg).unwrap() - c(1.0 + 2.0 * riemann_zeta(-0.5))).norm() < 1e-12
        );
        assert!(matches!(
            canonical_trace(&BlockBandOperator::identity(1), &cfg),
            Err(Error::IntegerOrder(_))
        ));
    }

    #[test]
    fn ordinary_trace_for_trace_class() {
        let cfg = EngineConfig::default();
        let w = DiagonalWeight::abs_power(1.0, 1.0).unwrap();
        let a = BlockBandOperator::weight_power(1, &w, -2.5)
            .compose(&BlockBandOperator::diagonal(1, Factor::Sign))
            .unwrap();
        let direct: f64 = (-100_000i64..=100_000)
            .map(|n| w.mu(n).powf(-2.5) * if n >= 0 { 1.0 } else { -1.0 })
            .sum();
        let v = weighted_trace(&a, &DiagonalWeight::laplacian(), &cfg).unwrap();
        assert!((v - c(direct)).norm() < 1e-10);
    }

    #[test]
    fn weight_dependence_of_identity() {
        // tr^{n²}(I) = 0 and tr^{(|n|+1)²}(I) = 2ζ(0) - 1 = -2.
        let cfg = EngineConfig::default();
        let a = BlockBandOperator::identity(1);
        let (lhs, rhs) = weight_dependence(
            &a,
            &DiagonalWeight::laplacian(),
            &DiagonalWeight::abs_power(1.0, 2.0).unwrap(),
            &cfg,
        )
        .unwrap();
        assert!((lhs - c(2.0)).norm() < 1e-12, "{lhs}");
        assert!((lhs - rhs).norm() < 1e-12, "{lhs} vs {rhs}");
    }

    #[test]
    fn log_terms_away_from_poles_continue() {
        // Σ_{n≥1} log n · n^{-3} = -ζ'(3).
        let data = DiagonalTraceData::from_fn(
            20,
            |n| {
                if n > 0 {
                    c((n as f64).ln() / (n as f64).powi(3))
                } else {
                    c(0.0)
                }
            },
            Asym::new(
                vec![Mono {
                    exp: -3.0,
                    log: 1,
                    c: c(1.0),
                }],
                f64::NEG_INFINITY,
            ),
            Asym::zero(),
        );
        let v = continued_sum(&data).unwrap();
        assert!((v + c(crate::zeta::riemann_zeta_deriv(3.0))).norm() < 1e-13);
    }
}
