//! Banded operators on the Fourier modes of `L²(S¹, ℂ^d)`.
//!
//! Every band entry is stored as an exact finite sum of constant `d×d` matrices times
//! scalar functions of the source mode `n`, each function being a product of elementary
//! factors evaluated at shifted arguments `n + c`.  Exact values are available at every
//! mode, and asymptotic expansions on either ray follow from the factor expansions.

use std::collections::{BTreeMap, HashMap};

use ordered_float::OrderedFloat;

use crate::asym::{Asym, Mono};
use crate::error::{Error, Result};
use crate::lie::LoopElement;
use crate::weight::{DiagonalWeight, Ray, WeightKind};
use crate::zeta;
use crate::{CMat, C64};

type OF = OrderedFloat<f64>;

const DROP_REL: f64 = 1e-14;

/// Scalar function of a mode index `m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    /// `m`
    Mode,
    /// `+1` for `m ≥ 0`, `-1` otherwise.
    Sign,
    /// `[m ≥ 0]`
    Pos,
    /// `[m < 0]`
    Neg,
    /// `[m ≠ 0]`
    NonZero,
    /// `|m|^exp` for `m` strictly on `ray`, zero elsewhere.
    RayPow { exp: OF, ray: Ray },
    /// `μ(m)^power`
    WeightPow { weight: DiagonalWeight, power: OF },
    /// `log μ(m)`
    WeightLog { weight: DiagonalWeight },
    /// `log μ(m + step) - log μ(m)`
    LogRatio { weight: DiagonalWeight, step: i64 },
    /// `log μ(m) - log ν(m)`
    LogQuot {
        num: DiagonalWeight,
        den: DiagonalWeight,
    },
}

impl Factor {
    pub fn eval(&self, m: i64) -> f64 {
        match self {
            Factor::Mode => m as f64,
            Factor::Sign => {
                if m >= 0 {
                    1.0
                } else {
                    -1.0
                }
            }
            Factor::Pos => (m >= 0) as i32 as f64,
            Factor::Neg => (m < 0) as i32 as f64,
            Factor::NonZero => (m != 0) as i32 as f64,
            Factor::RayPow { exp, ray } => {
                if ray.contains(m) {
                    (m.abs() as f64).powf(exp.0)
                } else {
                    0.0
                }
            }
            Factor::WeightPow { weight, power } => weight.mu(m).powf(power.0),
            Factor::WeightLog { weight } => weight.log_mu(m),
            Factor::LogRatio { weight, step } => weight.log_mu(m + step) - weight.log_mu(m),
            Factor::LogQuot { num, den } => num.log_mu(m) - den.log_mu(m),
        }
    }

    /// Expansion of `n ↦ f(n + c)` as `n → ±∞` along `ray`, with `len` series terms.
    pub fn expansion(&self, ray: Ray, c: i64, len: usize) -> Asym<f64> {
        let sg = ray.sign();
        let one = |v: f64| {
            if v == 0.0 {
                Asym::zero()
            } else {
                Asym::new(
                    vec![Mono {
                        exp: 0.0,
                        log: 0,
                        c: v,
                    }],
                    f64::NEG_INFINITY,
                )
            }
        };
        match self {
            Factor::Mode => Asym::from_series(1.0, &[sg, c as f64], true),
            Factor::Sign => one(sg),
            Factor::Pos => one((ray == Ray::Plus) as i32 as f64),
            Factor::Neg => one((ray == Ray::Minus) as i32 as f64),
            Factor::NonZero => one(1.0),
            Factor::RayPow { exp, ray: r } => {
                if *r != ray {
                    return Asym::zero();
                }
                let s = crate::asym::series::pow(&[1.0, sg * c as f64], exp.0, len);
                let exact = exp.0.fract() == 0.0 && exp.0 >= 0.0 && (exp.0 as usize) < len;
                Asym::from_series(exp.0, &s, exact)
            }
            Factor::WeightPow { weight, power } => weight.pow_expansion(ray, c, power.0, len),
            Factor::WeightLog { weight } => weight.log_expansion(ray, c, len),
            Factor::LogRatio { weight, step } => weight.log_ratio_expansion(ray, c, *step, len),
            Factor::LogQuot { num, den } => num.log_quotient_expansion(den, ray, c, len),
        }
    }

    /// Distance beyond `|c|` after which the expansion represents the factor.
    fn reach(&self) -> i64 {
        fn weight_reach(w: &DiagonalWeight) -> i64 {
            let own = match w.kind() {
                WeightKind::AbsPower { offset, .. } => offset.0.ceil() as i64,
                WeightKind::EvenPoly { coeffs } => {
                    let deg = coeffs.len() - 1;
                    let top = coeffs[deg].0;
                    coeffs[..deg]
                        .iter()
                        .enumerate()
                        .map(|(i, c)| (c.0 / top).powf(1.0 / (2 * (deg - i)) as f64).ceil() as i64)
                        .max()
                        .unwrap_or(0)
                }
            };
            own + w.shift().abs() + 1
        }
        match self {
            Factor::WeightPow { weight, .. } | Factor::WeightLog { weight } => weight_reach(weight),
            Factor::LogRatio { weight, step } => weight_reach(weight) + step.abs(),
            Factor::LogQuot { num, den } => weight_reach(num).max(weight_reach(den)),
            _ => 1,
        }
    }
}

/// A factor evaluated at `n + shift`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shifted {
    pub factor: Factor,
    pub shift: i64,
}

/// `coeff · Π f_i(n + c_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub factors: Vec<Shifted>,
    pub coeff: CMat,
}

impl Term {
    pub fn scalar(&self, n: i64) -> f64 {
        let mut v = 1.0;
        for f in &self.factors {
            v *= f.factor.eval(n + f.shift);
            if v == 0.0 {
                break;
            }
        }
        v
    }
}

/// Simplifies a product of factors all evaluated at the same argument.
/// Returns `None` when the product vanishes identically.
fn simplify_bucket(factors: Vec<Factor>) -> Option<(Vec<Factor>, f64)> {
    let mut sign_parity = false;
    let (mut pos, mut neg, mut nonzero) = (false, false, false);
    let mut ray_pow: Option<(f64, Ray)> = None;
    let mut weight_pows: BTreeMap<DiagonalWeight, f64> = BTreeMap::new();
    let mut rest = Vec::new();
    for f in factors {
        match f {
            Factor::Sign => sign_parity = !sign_parity,
            Factor::Pos => pos = true,
            Factor::Neg => neg = true,
            Factor::NonZero => nonzero = true,
            Factor::RayPow { exp, ray } => match ray_pow {
                None => ray_pow = Some((exp.0, ray)),
                Some((e, r)) if r == ray => ray_pow = Some((e + exp.0, r)),
                Some(_) => return None,
            },
            Factor::WeightPow { weight, power } => {
                *weight_pows.entry(weight).or_insert(0.0) += power.0;
            }
            Factor::LogRatio { step: 0, .. } => return None,
            other => rest.push(other),
        }
    }
    if pos && neg {
        return None;
    }
    let mut scale = 1.0;
    let mut out = rest;
    if let Some((e, ray)) = ray_pow {
        if (ray == Ray::Plus && neg) || (ray == Ray::Minus && pos) {
            return None;
        }
        if sign_parity {
            scale *= ray.sign();
        }
        out.push(Factor::RayPow { exp: e.into(), ray });
    } else if pos {
        out.push(Factor::Pos);
        if nonzero {
            out.push(Factor::NonZero);
        }
    } else if neg {
        if sign_parity {
            scale = -scale;
        }
        out.push(Factor::Neg);
    } else {
        if sign_parity {
            out.push(Factor::Sign);
        }
        if nonzero {
            out.push(Factor::NonZero);
        }
    }
    for (weight, power) in weight_pows {
        if power != 0.0 {
            out.push(Factor::WeightPow {
                weight,
                power: power.into(),
            });
        }
    }
    out.sort();
    Some((out, scale))
}

fn normalize_factors(factors: Vec<Shifted>) -> Option<(Vec<Shifted>, f64)> {
    let mut buckets: BTreeMap<i64, Vec<Factor>> = BTreeMap::new();
    for f in factors {
        buckets.entry(f.shift).or_default().push(f.factor);
    }
    let mut out = Vec::new();
    let mut scale = 1.0;
    for (shift, fs) in buckets {
        let (fs, s) = simplify_bucket(fs)?;
        scale *= s;
        out.extend(fs.into_iter().map(|factor| Shifted { factor, shift }));
    }
    out.sort();
    Some((out, scale))
}

/// Squared Hilbert–Schmidt norm, or the flag that it diverges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HsNorm {
    Finite(f64),
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quadrant {
    PlusPlus,
    PlusMinus,
    MinusPlus,
    MinusMinus,
}

/// Banded operator; `entry(k, n)` maps mode `n` to mode `n + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockBandOperator {
    d: usize,
    bands: BTreeMap<i64, Vec<Term>>,
}

struct Accumulator {
    d: usize,
    terms: BTreeMap<(i64, Vec<Shifted>), (CMat, f64)>,
}

impl Accumulator {
    fn new(d: usize) -> Self {
        Self {
            d,
            terms: BTreeMap::new(),
        }
    }

    fn push(&mut self, k: i64, factors: Vec<Shifted>, coeff: CMat) {
        let Some((factors, s)) = normalize_factors(factors) else {
            return;
        };
        let coeff = if s == 1.0 {
            coeff
        } else {
            coeff * C64::new(s, 0.0)
        };
        let norm = coeff.norm();
        if norm == 0.0 {
            return;
        }
        let e = self
            .terms
            .entry((k, factors))
            .or_insert_with(|| (CMat::zeros(self.d, self.d), 0.0));
        e.0 += coeff;
        e.1 += norm;
    }

    fn finish(self) -> BlockBandOperator {
        let mut bands: BTreeMap<i64, Vec<Term>> = BTreeMap::new();
        for ((k, factors), (coeff, total)) in self.terms {
            let norm = coeff.norm();
            if norm == 0.0 || norm <= DROP_REL * total {
                continue;
            }
            bands.entry(k).or_default().push(Term { factors, coeff });
        }
        BlockBandOperator { d: self.d, bands }
    }
}

fn id(d: usize) -> CMat {
    CMat::identity(d, d)
}

impl BlockBandOperator {
    pub fn zero(d: usize) -> Self {
        Self {
            d,
            bands: BTreeMap::new(),
        }
    }

    pub fn from_terms(d: usize, terms: impl IntoIterator<Item = (i64, Term)>) -> Result<Self> {
        let mut acc = Accumulator::new(d);
        for (k, t) in terms {
            if t.coeff.nrows() != d || t.coeff.ncols() != d {
                return Err(Error::Dimension {
                    expected: d,
                    got: t.coeff.nrows(),
                });
            }
            acc.push(k, t.factors, t.coeff);
        }
        Ok(acc.finish())
    }

    pub fn identity(d: usize) -> Self {
        Self::multiplication(d, [(0, id(d))])
    }

    /// Diagonal operator `f(n)·Id`.
    pub fn diagonal(d: usize, factor: Factor) -> Self {
        let mut acc = Accumulator::new(d);
        acc.push(0, vec![Shifted { factor, shift: 0 }], id(d));
        acc.finish()
    }

    /// Multiplication by the matrix-valued trigonometric polynomial `Σ f_k e^{ikt}`.
    pub fn multiplication(d: usize, coeffs: impl IntoIterator<Item = (i64, CMat)>) -> Self {
        let mut acc = Accumulator::new(d);
        for (k, m) in coeffs {
            assert_eq!(m.nrows(), d, "coefficient block size");
            acc.push(k, Vec::new(), m);
        }
        acc.finish()
    }

    /// Multiplication by `e^{ikt}`.
    pub fn shift(d: usize, k: i64) -> Self {
        Self::multiplication(d, [(k, id(d))])
    }

    /// `D₀ = -i d/dt`, eigenvalue `n` on `e^{int}`.
    pub fn d0(d: usize) -> Self {
        Self::diagonal(d, Factor::Mode)
    }

    /// `(Q + P_Q)^s` for a diagonal weight.
    pub fn weight_power(d: usize, weight: &DiagonalWeight, s: f64) -> Self {
        if s == 0.0 {
            return Self::identity(d);
        }
        Self::diagonal(
            d,
            Factor::WeightPow {
                weight: weight.clone(),
                power: s.into(),
            },
        )
    }

    pub fn log_weight(d: usize, weight: &DiagonalWeight) -> Self {
        Self::diagonal(
            d,
            Factor::WeightLog {
                weight: weight.clone(),
            },
        )
    }

    /// Diagonal `log Q₁ - log Q₂`.
    pub fn log_quotient(d: usize, num: &DiagonalWeight, den: &DiagonalWeight) -> Self {
        if num == den {
            return Self::zero(d);
        }
        Self::diagonal(
            d,
            Factor::LogQuot {
                num: num.clone(),
                den: den.clone(),
            },
        )
    }

    /// `ε(D₀)`: `+1` on modes `n ≥ 0`, `-1` on `n < 0`.
    pub fn epsilon_sign(d: usize) -> Self {
        Self::diagonal(d, Factor::Sign)
    }

    pub fn projector(d: usize, ray_plus: bool) -> Self {
        Self::diagonal(d, if ray_plus { Factor::Pos } else { Factor::Neg })
    }

    /// `ad_X` as a multiplication operator with blocks `ad_{a_k}`.
    pub fn ad(x: &LoopElement) -> Self {
        let alg = x.algebra();
        Self::multiplication(alg.dim(), x.modes().map(|(k, a)| (k, alg.ad_matrix(a))))
    }

    pub fn block_size(&self) -> usize {
        self.d
    }

    pub fn bands(&self) -> impl Iterator<Item = (i64, &[Term])> {
        self.bands.iter().map(|(k, t)| (*k, t.as_slice()))
    }

    pub fn band_indices(&self) -> Vec<i64> {
        self.bands.keys().copied().collect()
    }

    pub fn term_count(&self) -> usize {
        self.bands.values().map(|b| b.len()).sum()
    }

    pub fn bandwidth(&self) -> i64 {
        self.bands.keys().map(|k| k.abs()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.bands.is_empty()
    }

    /// Mode radius beyond which all band expansions represent the entries.
    pub fn validity_radius(&self) -> i64 {
        let mut r = self.bandwidth();
        for terms in self.bands.values() {
            for t in terms {
                for f in &t.factors {
                    r = r.max(f.shift.abs() + f.factor.reach());
                }
            }
        }
        r
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.d != other.d {
            return Err(Error::Dimension {
                expected: self.d,
                got: other.d,
            });
        }
        Ok(())
    }

    pub fn entry(&self, k: i64, n: i64) -> CMat {
        let mut out = CMat::zeros(self.d, self.d);
        if let Some(terms) = self.bands.get(&k) {
            for t in terms {
                let s = t.scalar(n);
                if s != 0.0 {
                    out += &t.coeff * C64::new(s, 0.0);
                }
            }
        }
        out
    }

    /// Fibre trace of the diagonal entry at mode `n`.
    pub fn diag_trace(&self, n: i64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        if let Some(terms) = self.bands.get(&0) {
            for t in terms {
                let s = t.scalar(n);
                if s != 0.0 {
                    acc += t.coeff.trace() * s;
                }
            }
        }
        acc
    }

    fn term_expansion(
        t: &Term,
        ray: Ray,
        len: usize,
        cache: &mut HashMap<(Shifted, Ray), Asym<f64>>,
    ) -> Result<Asym<f64>> {
        let mut acc = Asym::new(
            vec![Mono {
                exp: 0.0,
                log: 0,
                c: 1.0,
            }],
            f64::NEG_INFINITY,
        );
        for f in &t.factors {
            let e = cache
                .entry((f.clone(), ray))
                .or_insert_with(|| f.factor.expansion(ray, f.shift, len));
            acc = acc.mul(e)?;
            if acc.is_exact_zero(0.0) {
                break;
            }
        }
        Ok(acc)
    }

    /// Matrix-valued expansion of band `k` along `ray`.
    pub fn band_expansion(&self, k: i64, ray: Ray, len: usize) -> Result<Asym<CMat>> {
        let mut out: Asym<CMat> = Asym::zero();
        let mut cache = HashMap::new();
        if let Some(terms) = self.bands.get(&k) {
            for t in terms {
                let s = Self::term_expansion(t, ray, len, &mut cache)?;
                out = out.add(&s.map(|c| &t.coeff * C64::new(*c, 0.0)));
            }
        }
        Ok(out)
    }

    /// Expansion of the fibre trace of the diagonal along `ray`.
    pub fn diag_trace_expansion(&self, ray: Ray, len: usize) -> Result<Asym<C64>> {
        let mut out: Asym<C64> = Asym::zero();
        let mut cache = HashMap::new();
        if let Some(terms) = self.bands.get(&0) {
            for t in terms {
                let tr = t.coeff.trace();
                let s = Self::term_expansion(t, ray, len, &mut cache)?;
                out = out.add(&s.map(|c| tr * *c));
            }
        }
        Ok(out)
    }

    /// Order read off the band expansions: the largest exponent with a nonzero coefficient.
    /// Finite-rank operators report `-∞`.
    pub fn order(&self, len: usize) -> Result<f64> {
        let mut ord = f64::NEG_INFINITY;
        for k in self.bands.keys() {
            for ray in Ray::both() {
                let e = self.band_expansion(*k, ray, len)?;
                let scale = e.terms.iter().map(|t| t.c.norm()).fold(0.0, f64::max);
                if let Some(l) = e.lead(1e-12 * scale.max(1e-300)) {
                    ord = ord.max(l);
                } else if e.rem > f64::NEG_INFINITY {
                    ord = ord.max(e.rem);
                }
            }
        }
        Ok(ord)
    }

    /// True when every band vanishes identically far out on both rays.
    pub fn is_finite_rank(&self, len: usize) -> Result<bool> {
        for k in self.bands.keys() {
            for ray in Ray::both() {
                let e = self.band_expansion(*k, ray, len)?;
                let scale: f64 = self
                    .bands
                    .get(k)
                    .map(|ts| ts.iter().map(|t| t.coeff.norm()).sum())
                    .unwrap_or(0.0);
                if !e.is_exact_zero(1e-13 * scale.max(1e-300)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn map_terms(&self, f: impl Fn(i64, &Term) -> Vec<(i64, Vec<Shifted>, CMat)>) -> Self {
        let mut acc = Accumulator::new(self.d);
        for (k, terms) in &self.bands {
            for t in terms {
                for (k2, fs, c) in f(*k, t) {
                    acc.push(k2, fs, c);
                }
            }
        }
        acc.finish()
    }

    pub fn scale(&self, s: C64) -> Self {
        if s == C64::new(0.0, 0.0) {
            return Self::zero(self.d);
        }
        self.map_terms(|k, t| vec![(k, t.factors.clone(), &t.coeff * s)])
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut acc = Accumulator::new(self.d);
        for op in [self, other] {
            for (k, terms) in &op.bands {
                for t in terms {
                    acc.push(*k, t.factors.clone(), t.coeff.clone());
                }
            }
        }
        Ok(acc.finish())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// `entry_{AB}(k,n) = Σ_{k₁+k₂=k} entry_A(k₁, n+k₂)·entry_B(k₂, n)`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut acc = Accumulator::new(self.d);
        for (k1, ta) in &self.bands {
            for (k2, tb) in &other.bands {
                for a in ta {
                    for b in tb {
                        let mut fs: Vec<Shifted> = a
                            .factors
                            .iter()
                            .map(|f| Shifted {
                                factor: f.factor.clone(),
                                shift: f.shift + k2,
                            })
                            .collect();
                        fs.extend(b.factors.iter().cloned());
                        acc.push(k1 + k2, fs, &a.coeff * &b.coeff);
                    }
                }
            }
        }
        Ok(acc.finish())
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    /// `entry_{A*}(-k, n+k) = entry_A(k, n)^H`.
    pub fn adjoint(&self) -> Self {
        self.map_terms(|k, t| {
            let fs = t
                .factors
                .iter()
                .map(|f| Shifted {
                    factor: f.factor.clone(),
                    shift: f.shift - k,
                })
                .collect();
            vec![(-k, fs, t.coeff.adjoint())]
        })
    }

    /// Restriction to one quadrant of the splitting `H₊ = span{n ≥ 0}`, `H₋ = span{n < 0}`.
    pub fn block(&self, q: Quadrant) -> Self {
        let (target, source) = match q {
            Quadrant::PlusPlus => (Factor::Pos, Factor::Pos),
            Quadrant::PlusMinus => (Factor::Pos, Factor::Neg),
            Quadrant::MinusPlus => (Factor::Neg, Factor::Pos),
            Quadrant::MinusMinus => (Factor::Neg, Factor::Neg),
        };
        self.restrict(target, source)
    }

    /// Multiplies band entries by `target(n+k)·source(n)`.
    pub fn restrict(&self, target: Factor, source: Factor) -> Self {
        self.map_terms(|k, t| {
            let mut fs = t.factors.clone();
            fs.push(Shifted {
                factor: target.clone(),
                shift: k,
            });
            fs.push(Shifted {
                factor: source.clone(),
                shift: 0,
            });
            vec![(k, fs, t.coeff.clone())]
        })
    }

    /// Compression away from the zero mode, on both source and target.
    pub fn without_zero_mode(&self) -> Self {
        self.restrict(Factor::NonZero, Factor::NonZero)
    }

    /// `[log Q, A]`, entries `(log μ_{n+k} - log μ_n)·entry_A(k,n)`.
    pub fn log_commutator(&self, weight: &DiagonalWeight) -> Self {
        self.map_terms(|k, t| {
            if k == 0 {
                return Vec::new();
            }
            let mut fs = t.factors.clone();
            fs.push(Shifted {
                factor: Factor::LogRatio {
                    weight: weight.clone(),
                    step: k,
                },
                shift: 0,
            });
            vec![(k, fs, t.coeff.clone())]
        })
    }

    /// Partial trace over the fibre: the scalar operator with entries `tr entry(k, n)`.
    pub fn fibre_trace(&self) -> Self {
        let mut acc = Accumulator::new(1);
        for (k, terms) in &self.bands {
            for t in terms {
                acc.push(
                    *k,
                    t.factors.clone(),
                    CMat::from_element(1, 1, t.coeff.trace()),
                );
            }
        }
        acc.finish()
    }

    /// Dense matrix on modes `|n| ≤ m`, block index `(n + m)·d`.
    pub fn truncate(&self, m: i64) -> CMat {
        let d = self.d;
        let size = (2 * m + 1) as usize * d;
        let mut out = CMat::zeros(size, size);
        for k in self.bands.keys() {
            for n in -m..=m {
                let t = n + k;
                if t.abs() > m {
                    continue;
                }
                let e = self.entry(*k, n);
                let (r0, c0) = ((t + m) as usize * d, (n + m) as usize * d);
                out.view_mut((r0, c0), (d, d)).copy_from(&e);
            }
        }
        out
    }

    /// Largest entry difference against `other` over modes `|n| ≤ m`.
    pub fn max_entry_diff(&self, other: &Self, m: i64) -> f64 {
        let mut ks: Vec<i64> = self.band_indices();
        ks.extend(other.band_indices());
        ks.sort();
        ks.dedup();
        let mut worst: f64 = 0.0;
        for k in ks {
            for n in -m..=m {
                let diff = self.entry(k, n) - other.entry(k, n);
                worst = worst.max(diff.iter().map(|z| z.norm()).fold(0.0, f64::max));
            }
        }
        worst
    }

    /// Squared Hilbert–Schmidt norm with respect to the fibre metric `g` (identity if `None`).
    pub fn hs_norm_squared(&self, metric: Option<&CMat>, len: usize) -> Result<HsNorm> {
        let frob = |e: &CMat| -> f64 {
            match metric {
                None => e.norm_squared(),
                Some(g) => {
                    let ginv = g.clone().try_inverse().expect("fibre metric is invertible");
                    (ginv * e.adjoint() * g * e).trace().re
                }
            }
        };
        if self.is_finite_rank(len)? {
            let r = self.validity_radius() + 2;
            let mut total = 0.0;
            for k in self.bands.keys() {
                for n in -r..=r {
                    total += frob(&self.entry(*k, n));
                }
            }
            return Ok(HsNorm::Finite(total));
        }
        if self.order(len)? >= -0.5 {
            return Ok(HsNorm::Infinite);
        }
        let cutoff = (6 * self.validity_radius()).max(64);
        let mut total = 0.0;
        for k in self.bands.keys() {
            for n in -cutoff..=cutoff {
                total += frob(&self.entry(*k, n));
            }
            for ray in Ray::both() {
                let e = self.band_expansion(*k, ray, len)?;
                if e.has_log(0.0) {
                    return Err(Error::Unsupported(
                        "log terms in a Hilbert–Schmidt norm".into(),
                    ));
                }
                let sq: Asym<f64> = e.mul_with(&e, |a, b| match metric {
                    None => a.zip_map(b, |x, y| (x.conj() * y).re).sum(),
                    Some(g) => {
                        let ginv = g.clone().try_inverse().expect("fibre metric is invertible");
                        (ginv * a.adjoint() * g * b).trace().re
                    }
                })?;
                if sq.rem >= -1.0 {
                    return Err(Error::Depth("norm tail remainder not summable".into()));
                }
                for t in &sq.terms {
                    total += t.c * zeta::hurwitz_zeta(-t.exp, (cutoff + 1) as f64);
                }
            }
        }
        Ok(HsNorm::Finite(total))
    }
}
