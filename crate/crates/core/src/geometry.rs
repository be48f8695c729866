//! Left-invariant geometry of the current group `H^s(S¹, G)` and of the based loop group
//! at `s = 1/2`: Levi-Civita connection, curvature, Ricci, Kähler connection and the
//! weighted first Chern form.

use std::sync::Arc;

use crate::cocycles::{lambda_d, lambda_pullback, radul, DiracData, Polarization};
use crate::error::{Error, Result};
use crate::lie::{LieAlgebraData, LoopElement};
use crate::modes::{BlockBandOperator, Quadrant};
use crate::traces::{residue_density, stable_sum, weighted_trace, EngineConfig};
use crate::weight::DiagonalWeight;
use crate::C64;

#[derive(Debug, Clone)]
pub struct GeometryConfig {
    pub algebra: Arc<LieAlgebraData>,
    /// Sobolev index of the metric `⟨Q^s ·, ·⟩₀`.
    pub s: f64,
    /// `Q₀ + P`, eigenvalues `μ_n`.
    pub weight: DiagonalWeight,
    pub polarization: Polarization,
    pub engine: EngineConfig,
    /// Largest mode used by truncation oracles and order fits.
    pub truncation: i64,
}

impl GeometryConfig {
    pub fn new(algebra: Arc<LieAlgebraData>, s: f64) -> Self {
        Self {
            algebra,
            s,
            weight: DiagonalWeight::laplacian(),
            polarization: Polarization::KernelPlus,
            engine: EngineConfig::default(),
            truncation: 256,
        }
    }

    pub fn with_s(&self, s: f64) -> Self {
        Self { s, ..self.clone() }
    }

    fn d(&self) -> usize {
        self.algebra.dim()
    }

    fn dirac(&self) -> DiracData {
        DiracData::new(self.d(), self.polarization, self.engine)
    }

    fn require_kahler(&self) -> Result<()> {
        if (self.s - 0.5).abs() > 1e-12 {
            return Err(Error::Config(format!(
                "the Kähler connection lives at s = 1/2, got s = {}",
                self.s
            )));
        }
        Ok(())
    }

    /// `Q^p` applied to a loop: `z^n a ↦ μ_n^p z^n a`.
    pub fn q_power(&self, u: &LoopElement, p: f64) -> LoopElement {
        u.map_modes(|n| self.weight.mu(n).powf(p))
    }
}

fn check_algebra(cfg: &GeometryConfig, u: &LoopElement) -> Result<()> {
    if u.algebra().as_ref() != cfg.algebra.as_ref() {
        return Err(Error::AlgebraMismatch);
    }
    Ok(())
}

/// `θ^s(U) = ½(ad_U + Q^{-s} ad_U Q^s - Q^{-s} ad_{Q^s U})`.
pub fn theta_s(u: &LoopElement, cfg: &GeometryConfig) -> Result<BlockBandOperator> {
    check_algebra(cfg, u)?;
    let d = cfg.d();
    let ad = BlockBandOperator::ad(u);
    let qm = BlockBandOperator::weight_power(d, &cfg.weight, -cfg.s);
    let qp = BlockBandOperator::weight_power(d, &cfg.weight, cfg.s);
    let conj = qm.compose(&ad)?.compose(&qp)?;
    let third = qm.compose(&BlockBandOperator::ad(&cfg.q_power(u, cfg.s)))?;
    Ok(ad.add(&conj)?.sub(&third)?.scale(C64::new(0.5, 0.0)))
}

/// `θ^s(U) W` evaluated on loops directly.
pub fn theta_apply(u: &LoopElement, w: &LoopElement, cfg: &GeometryConfig) -> Result<LoopElement> {
    let s = cfg.s;
    let a = u.bracket(w)?;
    let b = cfg.q_power(&u.bracket(&cfg.q_power(w, s))?, -s);
    let c = cfg.q_power(&cfg.q_power(u, s).bracket(w)?, -s);
    Ok(a.add(&b)?.sub(&c)?.scale(C64::new(0.5, 0.0)))
}

/// `Ω^s(U,V) = [θ(U), θ(V)] - θ([U,V])`.
pub fn curvature_s(
    u: &LoopElement,
    v: &LoopElement,
    cfg: &GeometryConfig,
) -> Result<BlockBandOperator> {
    theta_s(u, cfg)?
        .commutator(&theta_s(v, cfg)?)?
        .sub(&theta_s(&u.bracket(v)?, cfg)?)
}

/// `Ω^s(U,V) W` on loops.
pub fn curvature_apply(
    u: &LoopElement,
    v: &LoopElement,
    w: &LoopElement,
    cfg: &GeometryConfig,
) -> Result<LoopElement> {
    let a = theta_apply(u, &theta_apply(v, w, cfg)?, cfg)?;
    let b = theta_apply(v, &theta_apply(u, w, cfg)?, cfg)?;
    let c = theta_apply(&u.bracket(v)?, w, cfg)?;
    a.sub(&b)?.sub(&c)
}

/// `L_W: Z ↦ θ(Z) W = -½(ad_W + Q^{-s} ad_{Q^s W} - Q^{-s} ad_W Q^s) Z`.
fn right_theta(w: &LoopElement, cfg: &GeometryConfig) -> Result<BlockBandOperator> {
    let d = cfg.d();
    let ad = BlockBandOperator::ad(w);
    let qm = BlockBandOperator::weight_power(d, &cfg.weight, -cfg.s);
    let qp = BlockBandOperator::weight_power(d, &cfg.weight, cfg.s);
    let second = qm.compose(&BlockBandOperator::ad(&cfg.q_power(w, cfg.s)))?;
    let third = qm.compose(&ad)?.compose(&qp)?;
    Ok(ad.add(&second)?.sub(&third)?.scale(C64::new(-0.5, 0.0)))
}

/// `R^s(X,Y): Z ↦ Ω^s(Z, X) Y` as a band operator in `Z`.
pub fn riemann_operator(
    x: &LoopElement,
    y: &LoopElement,
    cfg: &GeometryConfig,
) -> Result<BlockBandOperator> {
    check_algebra(cfg, x)?;
    check_algebra(cfg, y)?;
    let w = theta_apply(x, y, cfg)?;
    let ly = right_theta(y, cfg)?;
    let first = right_theta(&w, cfg)?;
    let second = theta_s(x, cfg)?.compose(&ly)?;
    let third = ly.compose(&BlockBandOperator::ad(x))?;
    first.sub(&second)?.add(&third)
}

/// Column `Ω^s(z^m e_i, X) Y` of the Riemann operator, built on loops.
pub fn riemann_column(
    x: &LoopElement,
    y: &LoopElement,
    m: i64,
    i: usize,
    cfg: &GeometryConfig,
) -> Result<LoopElement> {
    let z = LoopElement::basis_monomial(cfg.algebra.clone(), m, i, C64::new(1.0, 0.0));
    curvature_apply(&z, x, y, cfg)
}

/// Diagonal fibre traces `Σ_i ⟨e_i^*, Ω(z^m e_i, X)Y⟩_m` from loop-level columns.
pub fn riemann_diagonal(
    x: &LoopElement,
    y: &LoopElement,
    m: i64,
    cfg: &GeometryConfig,
) -> Result<C64> {
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..cfg.d() {
        acc += riemann_column(x, y, m, i, cfg)?.coeff(m)[i];
    }
    Ok(acc)
}

/// Value at `h = 0` of the interpolating polynomial through `(h_i, v_i)` (Neville).
pub fn extrapolate_to_zero(points: &[(f64, f64)]) -> f64 {
    let mut p: Vec<f64> = points.iter().map(|(_, v)| *v).collect();
    let h: Vec<f64> = points.iter().map(|(h, _)| *h).collect();
    let n = p.len();
    for level in 1..n {
        for i in 0..(n - level) {
            let (hi, hj) = (h[i], h[i + level]);
            p[i] = (hj * p[i] - hi * p[i + 1]) / (hj - hi);
        }
    }
    p[0]
}

/// Cutoffs `M·j/8` for `j = 2..=8` used by the truncation oracles.
fn cutoffs(top: i64) -> Vec<i64> {
    (2..=8).map(|j| top * j / 8).collect()
}

/// Partial sums of `c_n` over `lo ≤ n`, `|n| ≤ M` for each cutoff, extrapolated in `1/M`.
fn extrapolated_sum(
    top: i64,
    lo: i64,
    c: impl Fn(i64) -> Result<C64> + Sync + Send,
) -> Result<C64> {
    if top < 16 {
        return Err(Error::Config(format!(
            "truncation {top} too small for extrapolation"
        )));
    }
    let values = crate::exec::map_indexed((lo.max(-top)..=top).collect(), c)?;
    let cuts = cutoffs(top);
    let sums: Vec<C64> = cuts
        .iter()
        .map(|m| {
            stable_sum(
                values
                    .iter()
                    .filter(|(n, _)| n.abs() <= *m)
                    .map(|(_, v)| *v),
            )
        })
        .collect();
    let part = |f: fn(&C64) -> f64| {
        let pts: Vec<(f64, f64)> = cuts
            .iter()
            .zip(&sums)
            .map(|(m, s)| (1.0 / *m as f64, f(s)))
            .collect();
        extrapolate_to_zero(&pts)
    };
    Ok(C64::new(part(|z| z.re), part(|z| z.im)))
}

/// Weighted Ricci form `tr^{Q̄}(tr_g R^s(X,Y))` from the band expansions.
pub fn ricci(x: &LoopElement, y: &LoopElement, cfg: &GeometryConfig) -> Result<C64> {
    ricci_with_weight(x, y, &cfg.weight, cfg)
}

pub fn ricci_with_weight(
    x: &LoopElement,
    y: &LoopElement,
    trace_weight: &DiagonalWeight,
    cfg: &GeometryConfig,
) -> Result<C64> {
    let r = riemann_operator(x, y, cfg)?.fibre_trace();
    weighted_trace(&r, trace_weight, &cfg.engine)
}

/// Ordinary-trace Ricci form from loop-level columns, partial sums extrapolated in `1/M`.
pub fn ricci_truncated(x: &LoopElement, y: &LoopElement, cfg: &GeometryConfig) -> Result<C64> {
    extrapolated_sum(cfg.truncation, -cfg.truncation, |m| {
        riemann_diagonal(x, y, m, cfg)
    })
}

/// Wodzicki residue of the Riemann operator.
pub fn riemann_residue(x: &LoopElement, y: &LoopElement, cfg: &GeometryConfig) -> Result<C64> {
    residue_density(&riemann_operator(x, y, cfg)?, &cfg.engine)
}

/// Leading decay exponent from entries at `±M/2` and `±M`: `log₂(f(M)/f(M/2))` with `f`
/// the largest entry norm over all bands and both rays.  Entries at rounding level
/// relative to the operator's coefficients count as zero and give `-∞`.
pub fn fit_order(op: &BlockBandOperator, m: i64) -> f64 {
    let scale: f64 = op
        .bands()
        .flat_map(|(_, ts)| ts.iter().map(|t| t.coeff.norm()))
        .fold(0.0, f64::max);
    let f = |n: i64| -> f64 {
        op.band_indices()
            .iter()
            .flat_map(|k| [op.entry(*k, n), op.entry(*k, -n)])
            .map(|e| e.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    };
    let (hi, lo) = (f(m), f(m / 2));
    if lo <= 1e-12 * scale || hi <= 1e-12 * scale {
        return f64::NEG_INFINITY;
    }
    (hi / lo).log2()
}

/// `φ(Z) = [θ^{1/2}(Z)]₊₊`.
pub fn phi(z: &LoopElement, cfg: &GeometryConfig) -> Result<BlockBandOperator> {
    cfg.require_kahler()?;
    Ok(cfg.dirac().block(&theta_s(z, cfg)?, Quadrant::PlusPlus))
}

/// `T_X = (ad_X)₊₊`.
pub fn toeplitz(x: &LoopElement, polarization: Polarization) -> BlockBandOperator {
    let dd = DiracData::new(x.algebra().dim(), polarization, EngineConfig::default());
    dd.block(&BlockBandOperator::ad(x), Quadrant::PlusPlus)
}

/// `D⁻¹ T_U D` on `H₊`, with `D⁻¹` the inverse of `|D₀| + P`.
pub fn conjugated_toeplitz(
    u: &LoopElement,
    polarization: Polarization,
) -> Result<BlockBandOperator> {
    let d = u.algebra().dim();
    let w = DiagonalWeight::abs_d();
    let t = toeplitz(u, polarization);
    BlockBandOperator::weight_power(d, &w, -1.0)
        .compose(&t)?
        .compose(&BlockBandOperator::d0(d))
}

fn check_polarized(x: &LoopElement, positive: bool) -> Result<()> {
    let bad = x.modes().any(|(n, _)| if positive { n < 0 } else { n > 0 });
    if bad {
        return Err(Error::Unsupported(format!(
            "loop is not in H{}",
            if positive { "₊" } else { "₋" }
        )));
    }
    Ok(())
}

/// `Ω(X, Ȳ) = [φ(X), φ(Ȳ)] - φ([X, Ȳ])` for `X ∈ H₊`, `Ȳ ∈ H₋`.
pub fn complex_curvature(
    x: &LoopElement,
    ybar: &LoopElement,
    cfg: &GeometryConfig,
) -> Result<BlockBandOperator> {
    check_polarized(x, true)?;
    check_polarized(ybar, false)?;
    phi(x, cfg)?
        .commutator(&phi(ybar, cfg)?)?
        .sub(&phi(&x.bracket(ybar)?, cfg)?)
}

/// `r₁(X, Ȳ) = tr^Q(Ω(X, Ȳ))` through the zeta engine.
pub fn first_chern(x: &LoopElement, ybar: &LoopElement, cfg: &GeometryConfig) -> Result<C64> {
    first_chern_with_weight(x, ybar, &cfg.weight, cfg)
}

pub fn first_chern_with_weight(
    x: &LoopElement,
    ybar: &LoopElement,
    trace_weight: &DiagonalWeight,
    cfg: &GeometryConfig,
) -> Result<C64> {
    let omega = complex_curvature(x, ybar, cfg)?.fibre_trace();
    weighted_trace(&omega, trace_weight, &cfg.engine)
}

/// `r₁` as an ordinary trace over `H₊` with Richardson extrapolation of partial sums.
pub fn first_chern_truncated(
    x: &LoopElement,
    ybar: &LoopElement,
    cfg: &GeometryConfig,
) -> Result<C64> {
    let omega = complex_curvature(x, ybar, cfg)?.fibre_trace();
    extrapolated_sum(cfg.truncation, 0, |n| Ok(omega.diag_trace(n)))
}

/// The four numbers that the Kähler identities equate, plus the `tr^Q φ([X,Ȳ])` check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChernIdentities {
    pub first_chern: C64,
    pub radul_phi: C64,
    pub lambda: C64,
    pub minus_i_omega: C64,
    pub trace_phi_bracket: C64,
}

pub fn chern_identities(
    x: &LoopElement,
    ybar: &LoopElement,
    cfg: &GeometryConfig,
) -> Result<ChernIdentities> {
    let first_chern = first_chern(x, ybar, cfg)?;
    let radul_phi = radul(&phi(x, cfg)?, &phi(ybar, cfg)?, &cfg.weight, &cfg.engine)?;
    let lambda = lambda_d(
        &BlockBandOperator::ad(x),
        &BlockBandOperator::ad(ybar),
        &cfg.dirac(),
    )?;
    let minus_i_omega = x.symplectic(ybar)? * C64::new(0.0, -1.0);
    let trace_phi_bracket =
        weighted_trace(&phi(&x.bracket(ybar)?, cfg)?, &cfg.weight, &cfg.engine)?;
    Ok(ChernIdentities {
        first_chern,
        radul_phi,
        lambda,
        minus_i_omega,
        trace_phi_bracket,
    })
}

/// `δ(ad*λ^D)(X, Y, Z)`.
pub fn closedness_lambda(
    x: &LoopElement,
    y: &LoopElement,
    z: &LoopElement,
    dd: &DiracData,
) -> Result<C64> {
    lambda_pullback(dd.clone())
        .coboundary()?
        .eval(&[x.clone(), y.clone(), z.clone()])
}

/// `(-tr^{Q₀}[θ₀, ω₀], (1/ord Q₀) res([log Q₀, θ₀] ω₀))`.
pub fn covariant_trace_variation(
    theta: &BlockBandOperator,
    omega: &BlockBandOperator,
    q: &DiagonalWeight,
    cfg: &EngineConfig,
) -> Result<(C64, C64)> {
    let lhs = -weighted_trace(&theta.commutator(omega)?, q, cfg)?;
    let rhs = residue_density(&theta.log_commutator(q).compose(omega)?, cfg)? / q.order();
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn su2() -> Arc<LieAlgebraData> {
        Arc::new(LieAlgebraData::su2())
    }

    fn mono(alg: &Arc<LieAlgebraData>, n: i64, i: usize) -> LoopElement {
        LoopElement::basis_monomial(alg.clone(), n, i, C64::new(1.0, 0.0))
    }

    #[test]
    fn theta_matches_loop_application() {
        let alg = su2();
        let cfg = GeometryConfig::new(alg.clone(), 1.0);
        let u = mono(&alg, 2, 0).add(&mono(&alg, -1, 1)).unwrap();
        let th = theta_s(&u, &cfg).unwrap();
        for m in -5..=5 {
            for i in 0..3 {
                let w = mono(&alg, m, i);
                let direct = theta_apply(&u, &w, &cfg).unwrap();
                for (k, v) in direct.modes() {
                    let band = th.entry(k - m, m).column(i).into_owned();
                    assert!((band - v).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn theta_of_constant_loop_at_mode_zero() {
        let alg = su2();
        let cfg = GeometryConfig::new(alg.clone(), 1.0);
        let th = theta_s(&mono(&alg, 0, 0), &cfg).unwrap();
        let half = alg.ad_matrix(&alg.basis(0)) * C64::new(0.5, 0.0);
        assert!((th.entry(0, 0) - &half).norm() < 1e-15);
        // Away from mode 0 the weight no longer cancels: ½ad(2 - μ_n^{-s}).
        let expect = alg.ad_matrix(&alg.basis(0)) * C64::new(0.5 * (2.0 - 1.0 / 9.0), 0.0);
        assert!((th.entry(0, 3) - expect).norm() < 1e-15);
    }

    #[test]
    fn riemann_operator_matches_columns() {
        let alg = su2();
        let cfg = GeometryConfig::new(alg.clone(), 1.0);
        let x = mono(&alg, 1, 0);
        let y = mono(&alg, -1, 1).add(&mono(&alg, 0, 2)).unwrap();
        let r = riemann_operator(&x, &y, &cfg).unwrap();
        for m in -6..=6 {
            for i in 0..3 {
                let col = riemann_column(&x, &y, m, i, &cfg).unwrap();
                for (k, v) in col.modes() {
                    let e = r.entry(k - m, m).column(i).into_owned();
                    assert!((e - v).norm() < 1e-13, "m={m} i={i} k={k}");
                }
            }
        }
    }

    #[test]
    fn lemma7_away_from_the_kernel() {
        let alg = su2();
        let mut cfg = GeometryConfig::new(alg.clone(), 0.5);
        cfg.polarization = Polarization::KernelExcluded;
        for n in 1..=3 {
            let u = mono(&alg, n, 0);
            let lhs = phi(&u, &cfg).unwrap();
            let rhs = conjugated_toeplitz(&u, cfg.polarization).unwrap();
            assert!(lhs.max_entry_diff(&rhs, 40) < 1e-14);
            let v = mono(&alg, -n, 1);
            let lhs = phi(&v, &cfg).unwrap();
            assert!(lhs.max_entry_diff(&toeplitz(&v, cfg.polarization), 40) < 1e-14);
        }
    }

    #[test]
    fn first_chern_of_basic_pair() {
        let alg = su2();
        let cfg = GeometryConfig::new(alg.clone(), 0.5);
        let ids = chern_identities(&mono(&alg, 1, 0), &mono(&alg, -1, 0), &cfg).unwrap();
        for v in [
            ids.first_chern,
            ids.radul_phi,
            ids.lambda,
            ids.minus_i_omega,
        ] {
            assert!((v - C64::new(2.0, 0.0)).norm() < 1e-9, "{ids:?}");
        }
        assert!(ids.trace_phi_bracket.norm() < 1e-12);
    }

    #[test]
    fn neville_recovers_polynomial_tails() {
        // S(M) = 3 + 2/M - 5/M² + 7/M³
        let pts: Vec<(f64, f64)> = [64.0, 96.0, 128.0, 160.0]
            .iter()
            .map(|m| (1.0 / m, 3.0 + 2.0 / m - 5.0 / (m * m) + 7.0 / (m * m * m)))
            .collect();
        assert!((extrapolate_to_zero(&pts) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn abelian_curvature_vanishes() {
        let alg = Arc::new(LieAlgebraData::abelian(2));
        let cfg = GeometryConfig::new(alg.clone(), 0.5);
        let om = complex_curvature(&mono(&alg, 2, 0), &mono(&alg, -1, 1), &cfg).unwrap();
        assert!(om.is_zero());
    }
}
