//! Bilinear functionals built from weighted traces: Radul and Schwinger cocycles, signed
//! traces, the polarization cocycle `λ^D`, `ω^D`, and Chevalley–Eilenberg coboundaries.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lie::LoopElement;
use crate::modes::{BlockBandOperator, Factor, Quadrant};
use crate::traces::{residue_density, weighted_trace, EngineConfig};
use crate::weight::{DiagonalWeight, Ray};
use crate::C64;

/// Where the kernel mode `n = 0` of `D₀` sits in the splitting `H = H₊ ⊕ H₋`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Polarization {
    /// `H₊ = span{n ≥ 0}`, `ε(D)e₀ = e₀`.
    #[default]
    KernelPlus,
    /// `H₊ = span{n > 0}`; the zero mode belongs to neither half.
    KernelExcluded,
}

impl Polarization {
    pub fn plus_factor(self) -> Factor {
        match self {
            Polarization::KernelPlus => Factor::Pos,
            Polarization::KernelExcluded => Factor::RayPow {
                exp: 0.0.into(),
                ray: Ray::Plus,
            },
        }
    }

    pub fn minus_factor(self) -> Factor {
        Factor::Neg
    }

    pub fn contains_plus(self, n: i64) -> bool {
        match self {
            Polarization::KernelPlus => n >= 0,
            Polarization::KernelExcluded => n > 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Polarization::KernelPlus => "kernel-plus",
            Polarization::KernelExcluded => "kernel-excluded",
        }
    }
}

/// First-order `D = D₀` data: the weight `|D| + P_D`, the splitting and the engine settings.
#[derive(Debug, Clone)]
pub struct DiracData {
    pub d: usize,
    pub weight: DiagonalWeight,
    pub polarization: Polarization,
    pub cfg: EngineConfig,
}

impl DiracData {
    pub fn new(d: usize, polarization: Polarization, cfg: EngineConfig) -> Self {
        Self {
            d,
            weight: DiagonalWeight::abs_d(),
            polarization,
            cfg,
        }
    }

    /// `ε(D)`.
    pub fn epsilon(&self) -> BlockBandOperator {
        let plus = BlockBandOperator::diagonal(self.d, self.polarization.plus_factor());
        let minus = BlockBandOperator::diagonal(self.d, self.polarization.minus_factor());
        plus.sub(&minus).expect("same block size")
    }

    pub fn block(&self, a: &BlockBandOperator, q: Quadrant) -> BlockBandOperator {
        let (p, m) = (
            self.polarization.plus_factor(),
            self.polarization.minus_factor(),
        );
        let (target, source) = match q {
            Quadrant::PlusPlus => (p.clone(), p),
            Quadrant::PlusMinus => (p, m),
            Quadrant::MinusPlus => (m, p),
            Quadrant::MinusMinus => (m.clone(), m),
        };
        a.restrict(target, source)
    }

    fn tr(&self, a: &BlockBandOperator) -> Result<C64> {
        weighted_trace(a, &self.weight, &self.cfg)
    }

    fn res(&self, a: &BlockBandOperator) -> Result<C64> {
        residue_density(a, &self.cfg)
    }
}

/// Anything carrying a Lie bracket that cochains can be evaluated on.
pub trait Bracket: Sized {
    fn lie_bracket(&self, other: &Self) -> Result<Self>;
}

impl Bracket for BlockBandOperator {
    fn lie_bracket(&self, other: &Self) -> Result<Self> {
        self.commutator(other)
    }
}

impl Bracket for LoopElement {
    fn lie_bracket(&self, other: &Self) -> Result<Self> {
        self.bracket(other)
    }
}

type Evaluator<T> = Arc<dyn Fn(&[T]) -> Result<C64> + Send + Sync>;

/// Multilinear functional of a fixed degree with trivial coefficients.
#[derive(Clone)]
pub struct Cochain<T> {
    degree: usize,
    label: String,
    eval: Evaluator<T>,
}

impl<T> std::fmt::Debug for Cochain<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Cochain({}, degree {})", self.label, self.degree)
    }
}

impl<T: Bracket + Clone + Send + Sync + 'static> Cochain<T> {
    pub fn new(
        degree: usize,
        label: impl Into<String>,
        eval: impl Fn(&[T]) -> Result<C64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            degree,
            label: label.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, args: &[T]) -> Result<C64> {
        if args.len() != self.degree {
            return Err(Error::Unsupported(format!(
                "cochain {} of degree {} evaluated on {} arguments",
                self.label,
                self.degree,
                args.len()
            )));
        }
        (self.eval)(args)
    }

    /// `(δc)(x₁,…,x_{n+1}) = Σ_{i<j} (-1)^{i+j+1} c([x_i,x_j], x₁,…,x̂_i,…,x̂_j,…)`,
    /// normalized so that `δ tr = (A,B) ↦ tr[A,B]`.
    pub fn coboundary(&self) -> Result<Self> {
        if self.degree > 2 {
            return Err(Error::Unsupported(format!(
                "coboundary of a degree {} cochain",
                self.degree
            )));
        }
        let inner = self.clone();
        let n = self.degree + 1;
        Ok(Self::new(
            n,
            format!("δ({})", self.label),
            move |x: &[T]| {
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..n {
                    for j in (i + 1)..n {
                        let mut args = Vec::with_capacity(n - 1);
                        args.push(x[i].lie_bracket(&x[j])?);
                        args.extend(
                            x.iter()
                                .enumerate()
                                .filter(|(l, _)| *l != i && *l != j)
                                .map(|(_, v)| v.clone()),
                        );
                        let sign = if (i + j) % 2 == 1 { 1.0 } else { -1.0 };
                        acc += inner.eval(&args)? * sign;
                    }
                }
                Ok(acc)
            },
        ))
    }
}

/// `c_R^Q(A,B) = tr^Q[A,B]`.
pub fn radul(
    a: &BlockBandOperator,
    b: &BlockBandOperator,
    q: &DiagonalWeight,
    cfg: &EngineConfig,
) -> Result<C64> {
    weighted_trace(&a.commutator(b)?, q, cfg)
}

/// `-(1/ord Q) res([log Q, A] B)`.
pub fn radul_residue_form(
    a: &BlockBandOperator,
    b: &BlockBandOperator,
    q: &DiagonalWeight,
    cfg: &EngineConfig,
) -> Result<C64> {
    let prod = a.log_commutator(q).compose(b)?;
    Ok(-crate::traces::wres_from_modes(&prod, q, cfg)? / q.order())
}

/// `c_S^D(A,B) = ½ tr^{|D|}(ε[ε,A][ε,B])`.
pub fn schwinger(a: &BlockBandOperator, b: &BlockBandOperator, dd: &DiracData) -> Result<C64> {
    let eps = dd.epsilon();
    let prod = eps
        .compose(&eps.commutator(a)?)?
        .compose(&eps.commutator(b)?)?;
    Ok(dd.tr(&prod)? * 0.5)
}

/// Ordinary trace `½ tr(ε[ε,A][ε,B])` of the finite-rank product, summed entry by entry.
pub fn schwinger_finite(
    a: &BlockBandOperator,
    b: &BlockBandOperator,
    dd: &DiracData,
) -> Result<C64> {
    let eps = dd.epsilon();
    let prod = eps
        .compose(&eps.commutator(a)?)?
        .compose(&eps.commutator(b)?)?;
    if !prod.is_finite_rank(dd.cfg.depth)? {
        return Err(Error::Unsupported(
            "Schwinger product is not finite rank".into(),
        ));
    }
    let r = prod.validity_radius() + 2;
    Ok((-r..=r).map(|n| prod.diag_trace(n)).sum::<C64>() * 0.5)
}

/// `c̄_S(A,B) = (c_S(A,B) - c_S(B,A))/2`.
pub fn mean_schwinger(a: &BlockBandOperator, b: &BlockBandOperator, dd: &DiracData) -> Result<C64> {
    Ok((schwinger(a, b, dd)? - schwinger(b, a, dd)?) * 0.5)
}

/// `tr_ε(A) = tr^{|D|}(ε(D) A)`.
pub fn signed_trace(a: &BlockBandOperator, dd: &DiracData) -> Result<C64> {
    dd.tr(&dd.epsilon().compose(a)?)
}

/// `c_TR(A,B) = tr^{|D|}[εA, B]`.
pub fn c_tr(a: &BlockBandOperator, b: &BlockBandOperator, dd: &DiracData) -> Result<C64> {
    dd.tr(&dd.epsilon().compose(a)?.commutator(b)?)
}

/// `c̃_TR(A,B) = tr^{|D|}[Aε, B]`.
pub fn c_tr_tilde(a: &BlockBandOperator, b: &BlockBandOperator, dd: &DiracData) -> Result<C64> {
    dd.tr(&a.compose(&dd.epsilon())?.commutator(b)?)
}

/// `c̄_TR = (c_TR + c̃_TR)/2`.
pub fn c_tr_bar(a: &BlockBandOperator, b: &BlockBandOperator, dd: &DiracData) -> Result<C64> {
    Ok((c_tr(a, b, dd)? + c_tr_tilde(a, b, dd)?) * 0.5)
}

/// `res(ε(D)[A, [log|D|, B]])`.
pub fn obstruction_residue(
    a: &BlockBandOperator,
    b: &BlockBandOperator,
    dd: &DiracData,
) -> Result<C64> {
    let inner = b.log_commutator(&dd.weight);
    let op = dd.epsilon().compose(&a.commutator(&inner)?)?;
    dd.res(&op)
}

/// `λ^D(A,B) = tr^{|D|}([A₊₊, B₊₊] - [A,B]₊₊)`.
pub fn lambda_d(a: &BlockBandOperator, b: &BlockBandOperator, dd: &DiracData) -> Result<C64> {
    let app = dd.block(a, Quadrant::PlusPlus);
    let bpp = dd.block(b, Quadrant::PlusPlus);
    let op = app
        .commutator(&bpp)?
        .sub(&dd.block(&a.commutator(b)?, Quadrant::PlusPlus))?;
    dd.tr(&op)
}

/// `j(C) = [[0, -C*], [C, 0]]` for the `H₊ → H₋` part of `C`.
pub fn j_embed(c: &BlockBandOperator, dd: &DiracData) -> Result<BlockBandOperator> {
    let cmp = dd.block(c, Quadrant::MinusPlus);
    let other = c.sub(&cmp)?;
    if !other.is_zero() && !other.is_finite_rank(dd.cfg.depth)? {
        return Err(Error::Unsupported(
            "j-embedding needs an operator from H₊ to H₋".into(),
        ));
    }
    if other.max_entry_diff(
        &BlockBandOperator::zero(c.block_size()),
        other.validity_radius() + 2,
    ) > 0.0
    {
        return Err(Error::Unsupported(
            "j-embedding needs an operator from H₊ to H₋".into(),
        ));
    }
    cmp.sub(&cmp.adjoint())
}

/// `ω^D(A,B) = -i tr^{|D|}(A*B - B*A)`.
pub fn omega_d(a: &BlockBandOperator, b: &BlockBandOperator, dd: &DiracData) -> Result<C64> {
    let op = a.adjoint().compose(b)?.sub(&b.adjoint().compose(a)?)?;
    Ok(dd.tr(&op)? * C64::new(0.0, -1.0))
}

/// `A ↦ res((log Q₁ - log Q₂) A)`.
pub fn log_difference_residue(
    q1: &DiagonalWeight,
    q2: &DiagonalWeight,
    cfg: EngineConfig,
) -> Cochain<BlockBandOperator> {
    let (q1, q2) = (q1.clone(), q2.clone());
    Cochain::new(
        1,
        "res((log Q1 - log Q2)·)",
        move |x: &[BlockBandOperator]| {
            let l = BlockBandOperator::log_quotient(x[0].block_size(), &q1, &q2);
            residue_density(&l.compose(&x[0])?, &cfg)
        },
    )
}

/// Weighted trace as a 1-cochain.
pub fn weighted_trace_cochain(q: &DiagonalWeight, cfg: EngineConfig) -> Cochain<BlockBandOperator> {
    let q = q.clone();
    Cochain::new(
        1,
        format!("tr^{}", q.describe()),
        move |x: &[BlockBandOperator]| weighted_trace(&x[0], &q, &cfg),
    )
}

/// Radul cocycle as a 2-cochain.
pub fn radul_cochain(q: &DiagonalWeight, cfg: EngineConfig) -> Cochain<BlockBandOperator> {
    let q = q.clone();
    Cochain::new(2, "radul", move |x: &[BlockBandOperator]| {
        radul(&x[0], &x[1], &q, &cfg)
    })
}

/// Pull-back `(X, Y) ↦ λ^D(ad_X, ad_Y)` to the loop algebra.
pub fn lambda_pullback(dd: DiracData) -> Cochain<LoopElement> {
    Cochain::new(2, "ad*λ^D", move |x: &[LoopElement]| {
        lambda_d(
            &BlockBandOperator::ad(&x[0]),
            &BlockBandOperator::ad(&x[1]),
            &dd,
        )
    })
}
