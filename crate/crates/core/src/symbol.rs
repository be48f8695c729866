//! Classical symbols on the circle: homogeneous components on the two rays `ξ = ±1`,
//! each a matrix-valued trigonometric polynomial in `x`.

use std::collections::BTreeMap;

use crate::asym::{Asym, Mono};
use crate::error::{Error, Result};
use crate::modes::{BlockBandOperator, Factor, Shifted, Term};
use crate::weight::{DiagonalWeight, Ray};
use crate::{CMat, C64};

const EXP_EPS: f64 = 1e-9;

/// `Σ_l c_l e^{ilx}` with `d×d` coefficients.
pub type TrigPoly = BTreeMap<i64, CMat>;

fn poly_add(a: &mut TrigPoly, b: &TrigPoly, s: C64) {
    for (l, c) in b {
        let e = a
            .entry(*l)
            .or_insert_with(|| CMat::zeros(c.nrows(), c.ncols()));
        *e += c * s;
    }
}

/// `a(x) · D_x^k b(x)` with `D_x = -i ∂_x`.
fn poly_mul_deriv(a: &TrigPoly, b: &TrigPoly, k: u32) -> TrigPoly {
    let mut out = TrigPoly::new();
    for (la, ca) in a {
        for (lb, cb) in b {
            let w = (*lb as f64).powi(k as i32);
            if w == 0.0 {
                continue;
            }
            let e = out
                .entry(la + lb)
                .or_insert_with(|| CMat::zeros(ca.nrows(), cb.ncols()));
            *e += ca * cb * C64::new(w, 0.0);
        }
    }
    out
}

fn poly_clean(p: &mut TrigPoly) {
    p.retain(|_, c| c.iter().any(|z| z.norm() > 0.0));
}

fn ray_index(ray: Ray) -> usize {
    match ray {
        Ray::Plus => 0,
        Ray::Minus => 1,
    }
}

/// Falling factorial `m (m-1) ⋯ (m-k+1)`.
fn falling(m: f64, k: u32) -> f64 {
    (0..k).map(|i| m - i as f64).product()
}

/// Symbol `σ ~ Σ_j |ξ|^{α-j} σ_{α-j}(x, sign ξ)`, valid for `j < depth()`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalSymbol1D {
    d: usize,
    order: f64,
    components: Vec<[TrigPoly; 2]>,
}

impl ClassicalSymbol1D {
    pub fn new(d: usize, order: f64, components: Vec<[TrigPoly; 2]>) -> Result<Self> {
        for c in components
            .iter()
            .flat_map(|p| p.iter())
            .flat_map(|p| p.values())
        {
            if c.nrows() != d || c.ncols() != d {
                return Err(Error::Dimension {
                    expected: d,
                    got: c.nrows(),
                });
            }
        }
        let mut s = Self {
            d,
            order,
            components,
        };
        for pair in &mut s.components {
            pair.iter_mut().for_each(poly_clean);
        }
        Ok(s)
    }

    pub fn block_size(&self) -> usize {
        self.d
    }

    pub fn order(&self) -> f64 {
        self.order
    }

    /// Number of valid homogeneous components.
    pub fn depth(&self) -> usize {
        self.components.len()
    }

    /// Component `σ_{α-j}(·, ray)`.
    pub fn component(&self, j: usize, ray: Ray) -> Option<&TrigPoly> {
        self.components.get(j).map(|p| &p[ray_index(ray)])
    }

    fn single(d: usize, order: f64, depth: usize, plus: TrigPoly, minus: TrigPoly) -> Self {
        let mut components = vec![[TrigPoly::new(), TrigPoly::new()]; depth.max(1)];
        components[0] = [plus, minus];
        Self::new(d, order, components).expect("consistent block size")
    }

    /// Multiplication by `Σ_k f_k e^{ikx}`; order 0.
    pub fn multiplication(
        d: usize,
        coeffs: impl IntoIterator<Item = (i64, CMat)>,
        depth: usize,
    ) -> Self {
        let p: TrigPoly = coeffs.into_iter().collect();
        Self::single(d, 0.0, depth, p.clone(), p)
    }

    /// Symbol of `D₀`: `ξ`.
    pub fn d0(d: usize, depth: usize) -> Self {
        let id = CMat::identity(d, d);
        Self::single(d, 1.0, depth, [(0, id.clone())].into(), [(0, -id)].into())
    }

    /// Symbol of `ε(D₀)`: `sign ξ`.
    pub fn epsilon(d: usize, depth: usize) -> Self {
        let id = CMat::identity(d, d);
        Self::single(d, 0.0, depth, [(0, id.clone())].into(), [(0, -id)].into())
    }

    /// Symbol of the Fourier multiplier `μ(ξ)^s`, read off the weight's profile.
    pub fn weight_power(d: usize, weight: &DiagonalWeight, s: f64, depth: usize) -> Self {
        let id = CMat::identity(d, d);
        let order = weight.order() * s;
        let mut components = vec![[TrigPoly::new(), TrigPoly::new()]; depth.max(1)];
        for ray in Ray::both() {
            let e = weight.pow_expansion(ray, 0, s, depth);
            for t in &e.terms {
                let j = (order - t.exp).round() as usize;
                if j < components.len() {
                    components[j][ray_index(ray)].insert(0, &id * C64::new(t.c, 0.0));
                }
            }
        }
        Self::new(d, order, components).expect("consistent block size")
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = self.clone();
        for pair in &mut out.components {
            for p in pair.iter_mut() {
                for c in p.values_mut() {
                    *c *= s;
                }
            }
        }
        out
    }

    /// Sum of two symbols whose orders differ by an integer.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::Dimension {
                expected: self.d,
                got: other.d,
            });
        }
        let gap = self.order - other.order;
        if (gap - gap.round()).abs() > EXP_EPS {
            return Err(Error::Unsupported(
                "sum of symbols with non-integer order gap".into(),
            ));
        }
        let (hi, lo) = if gap >= 0.0 {
            (self, other)
        } else {
            (other, self)
        };
        let off = gap.abs().round() as usize;
        let depth = hi.depth().min(lo.depth() + off);
        let mut components = hi.components[..depth].to_vec();
        for (j, pair) in components.iter_mut().enumerate().skip(off) {
            for (dst, src) in pair.iter_mut().zip(&lo.components[j - off]) {
                poly_add(dst, src, C64::new(1.0, 0.0));
            }
        }
        Self::new(self.d, hi.order, components)
    }

    /// `σ_{AB} ~ Σ_k (1/k!) ∂_ξ^k σ_A · D_x^k σ_B`, truncated at `depth` components.
    pub fn star_compose(&self, other: &Self, depth: usize) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::Dimension {
                expected: self.d,
                got: other.d,
            });
        }
        let avail = self.depth().min(other.depth());
        if depth > avail {
            return Err(Error::Depth(format!(
                "requested {depth} symbol components, inputs carry {avail}"
            )));
        }
        let mut components = vec![[TrigPoly::new(), TrigPoly::new()]; depth];
        for ray in Ray::both() {
            let r = ray_index(ray);
            for (j, slot) in components.iter_mut().enumerate() {
                let mut acc = TrigPoly::new();
                for a in 0..=j {
                    for k in 0..=(j - a) {
                        let b = j - a - k;
                        let ff = falling(self.order - a as f64, k as u32)
                            * ray.sign().powi(k as i32)
                            / (1..=k).map(|i| i as f64).product::<f64>();
                        if ff == 0.0 {
                            continue;
                        }
                        let prod = poly_mul_deriv(
                            &self.components[a][r],
                            &other.components[b][r],
                            k as u32,
                        );
                        poly_add(&mut acc, &prod, C64::new(ff, 0.0));
                    }
                }
                slot[r] = acc;
            }
        }
        Self::new(self.d, self.order + other.order, components)
    }

    fn index_of_degree(&self, degree: f64) -> Option<usize> {
        let j = self.order - degree;
        if (j - j.round()).abs() < EXP_EPS && j.round() >= 0.0 {
            Some(j.round() as usize)
        } else {
            None
        }
    }

    /// `res σ = Σ_{ξ=±1} (1/2π) ∫ tr σ_{-1}(x, ξ) dx`.
    pub fn wodzicki_residue(&self) -> Result<C64> {
        let Some(j) = self.index_of_degree(-1.0) else {
            return Ok(C64::new(0.0, 0.0));
        };
        if j >= self.depth() {
            return Err(Error::Depth(format!(
                "residue needs component {j}, symbol carries {}",
                self.depth()
            )));
        }
        Ok(self.components[j]
            .iter()
            .filter_map(|p| p.get(&0))
            .map(|c| c.trace())
            .sum())
    }

    /// `σ_{α-j}(·,-1) = (-1)^{α-j} σ_{α-j}(·,+1)` for every stored component.
    pub fn is_odd_class(&self) -> Result<bool> {
        if (self.order - self.order.round()).abs() > EXP_EPS {
            return Err(Error::Unsupported(
                "odd class needs an integer order".into(),
            ));
        }
        let alpha = self.order.round() as i64;
        for (j, [plus, minus]) in self.components.iter().enumerate() {
            let sign = if (alpha - j as i64).rem_euclid(2) == 0 {
                1.0
            } else {
                -1.0
            };
            let keys: std::collections::BTreeSet<i64> =
                plus.keys().chain(minus.keys()).copied().collect();
            for l in keys {
                let p = plus
                    .get(&l)
                    .cloned()
                    .unwrap_or_else(|| CMat::zeros(self.d, self.d));
                let m = minus
                    .get(&l)
                    .cloned()
                    .unwrap_or_else(|| CMat::zeros(self.d, self.d));
                let scale = p.norm().max(m.norm()).max(1.0);
                if (m - p * C64::new(sign, 0.0)).norm() > 1e-12 * scale {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Band operator with entries `Σ_j c_{k,j}^± |n|^{α-j}` for `±n > 0` and zero at `n = 0`;
    /// differs from any operator with this symbol by a smoothing operator.
    pub fn to_operator(&self) -> BlockBandOperator {
        let mut terms = Vec::new();
        for (j, pair) in self.components.iter().enumerate() {
            for ray in Ray::both() {
                for (l, c) in &pair[ray_index(ray)] {
                    let factors = vec![Shifted {
                        factor: Factor::RayPow {
                            exp: (self.order - j as f64).into(),
                            ray,
                        },
                        shift: 0,
                    }];
                    terms.push((
                        *l,
                        Term {
                            factors,
                            coeff: c.clone(),
                        },
                    ));
                }
            }
        }
        BlockBandOperator::from_terms(self.d, terms).expect("consistent block size")
    }

    /// Reads the symbol of order `order` off the band expansions of `op`.
    pub fn from_operator(op: &BlockBandOperator, order: f64, depth: usize) -> Result<Self> {
        let d = op.block_size();
        let mut components = vec![[TrigPoly::new(), TrigPoly::new()]; depth];
        for k in op.band_indices() {
            for ray in Ray::both() {
                let e: Asym<CMat> = op.band_expansion(k, ray, depth + 2)?;
                if e.rem > order - depth as f64 + EXP_EPS {
                    return Err(Error::Depth(format!(
                        "band {k} resolved only to O(|n|^{})",
                        e.rem
                    )));
                }
                for Mono { exp, log, c } in &e.terms {
                    if c.iter().all(|z| z.norm() < 1e-14) {
                        continue;
                    }
                    let j = order - exp;
                    if *log > 0 || (j - j.round()).abs() > EXP_EPS || j.round() < 0.0 {
                        return Err(Error::Unsupported(format!(
                            "band {k} term |n|^{exp} (log power {log}) is not classical of order {order}"
                        )));
                    }
                    let j = j.round() as usize;
                    if j < depth {
                        components[j][ray_index(ray)].insert(k, c.clone());
                    }
                }
            }
        }
        Self::new(d, order, components)
    }
}

/// Generators available on both sides of the symbol/mode bridge.
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    /// Multiplication by `Σ_k f_k e^{ikt}`.
    Mult(Vec<(i64, CMat)>),
    /// `D₀`.
    D0,
    /// `ε(D₀)`.
    Eps,
    /// `μ(D₀)^s` for a diagonal weight.
    WeightPow(DiagonalWeight, f64),
}

impl Generator {
    pub fn order(&self) -> f64 {
        match self {
            Generator::Mult(_) | Generator::Eps => 0.0,
            Generator::D0 => 1.0,
            Generator::WeightPow(w, s) => w.order() * s,
        }
    }

    pub fn to_band(&self, d: usize) -> BlockBandOperator {
        match self {
            Generator::Mult(c) => BlockBandOperator::multiplication(d, c.iter().cloned()),
            Generator::D0 => BlockBandOperator::d0(d),
            Generator::Eps => BlockBandOperator::epsilon_sign(d),
            Generator::WeightPow(w, s) => BlockBandOperator::weight_power(d, w, *s),
        }
    }

    pub fn to_symbol(&self, d: usize, depth: usize) -> ClassicalSymbol1D {
        match self {
            Generator::Mult(c) => ClassicalSymbol1D::multiplication(d, c.iter().cloned(), depth),
            Generator::D0 => ClassicalSymbol1D::d0(d, depth),
            Generator::Eps => ClassicalSymbol1D::epsilon(d, depth),
            Generator::WeightPow(w, s) => ClassicalSymbol1D::weight_power(d, w, *s, depth),
        }
    }
}

/// Composition of generators, left to right.
pub fn word_to_band(d: usize, word: &[Generator]) -> Result<BlockBandOperator> {
    let mut acc = BlockBandOperator::identity(d);
    for g in word {
        acc = acc.compose(&g.to_band(d))?;
    }
    Ok(acc)
}

pub fn word_to_symbol(d: usize, word: &[Generator], depth: usize) -> Result<ClassicalSymbol1D> {
    let mut acc = ClassicalSymbol1D::multiplication(d, [(0, CMat::identity(d, d))], depth);
    for g in word {
        acc = acc.star_compose(&g.to_symbol(d, depth), depth)?;
    }
    Ok(acc)
}
