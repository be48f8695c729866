//! Finite-dimensional Lie algebras and the loop algebra of Fourier polynomials.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::{CMat, CVec, C64};

const JACOBI_TOL: f64 = 1e-10;

/// Structure constants `[e_i, e_j] = Σ_k c[i][j][k] e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebraData {
    dim: usize,
    c: Vec<f64>,
    labels: Vec<String>,
}

#[derive(Deserialize)]
struct AlgebraFile {
    dim: usize,
    entries: Vec<(usize, usize, usize, f64)>,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

impl LieAlgebraData {
    /// Builds an algebra from sparse structure constants, checking antisymmetry and Jacobi.
    pub fn from_entries(
        dim: usize,
        entries: &[(usize, usize, usize, f64)],
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidAlgebra("dimension must be positive".into()));
        }
        let mut c = vec![0.0; dim * dim * dim];
        for &(i, j, k, v) in entries {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::InvalidAlgebra(format!(
                    "index ({i},{j},{k}) out of range for dimension {dim}"
                )));
            }
            c[(i * dim + j) * dim + k] = v;
        }
        let labels = match labels {
            Some(l) if l.len() == dim => l,
            Some(l) => {
                return Err(Error::InvalidAlgebra(format!(
                    "{} labels for dimension {dim}",
                    l.len()
                )))
            }
            None => (1..=dim).map(|i| format!("e{i}")).collect(),
        };
        let alg = Self { dim, c, labels };
        alg.validate()?;
        Ok(alg)
    }

    /// su(2) in the basis with `[e_i, e_j] = Σ ε_ijk e_k`.
    pub fn su2() -> Self {
        let mut entries = Vec::new();
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            entries.push((i, j, k, 1.0));
            entries.push((j, i, k, -1.0));
        }
        Self::from_entries(3, &entries, None).expect("su(2) constants are valid")
    }

    /// Abelian algebra of dimension `dim`; its Killing form vanishes.
    pub fn abelian(dim: usize) -> Self {
        Self::from_entries(dim, &[], None).expect("abelian algebra is valid")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: AlgebraFile =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("algebra file: {e}")))?;
        if file.entries.is_empty() {
            return Err(Error::Config(
                "algebra file lists no structure constants".into(),
            ));
        }
        Self::from_entries(file.dim, &file.entries, file.labels)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.dim + j) * self.dim + k]
    }

    fn validate(&self) -> Result<()> {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    if (self.constant(i, j, k) + self.constant(j, i, k)).abs() > 0.0 {
                        return Err(Error::InvalidAlgebra(format!(
                            "structure constants not antisymmetric at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        for a in 0..d {
            for b in 0..d {
                for e in 0..d {
                    let (x, y, z) = (self.basis(a), self.basis(b), self.basis(e));
                    let jac = self.bracket(&x, &self.bracket(&y, &z))
                        + self.bracket(&y, &self.bracket(&z, &x))
                        + self.bracket(&z, &self.bracket(&x, &y));
                    if jac.camax() > JACOBI_TOL {
                        return Err(Error::InvalidAlgebra(format!(
                            "Jacobi identity fails on ({a},{b},{e})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// True when the Killing form is negative definite.
    pub fn is_compact_semisimple(&self) -> bool {
        self.killing_gram().cholesky().is_some()
    }

    pub fn require_compact(&self) -> Result<()> {
        if self.is_compact_semisimple() {
            Ok(())
        } else {
            Err(Error::InvalidAlgebra(
                "Killing form is not negative definite".into(),
            ))
        }
    }

    pub fn basis(&self, i: usize) -> CVec {
        let mut v = CVec::zeros(self.dim);
        v[i] = C64::new(1.0, 0.0);
        v
    }

    /// Matrix of `ad_a` acting on coefficient vectors.
    pub fn ad_matrix(&self, a: &CVec) -> CMat {
        let d = self.dim;
        let mut m = CMat::zeros(d, d);
        for i in 0..d {
            if a[i] == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..d {
                for k in 0..d {
                    let c = self.constant(i, j, k);
                    if c != 0.0 {
                        m[(k, j)] += a[i] * c;
                    }
                }
            }
        }
        m
    }

    pub fn bracket(&self, a: &CVec, b: &CVec) -> CVec {
        let d = self.dim;
        let mut out = CVec::zeros(d);
        for i in 0..d {
            for j in 0..d {
                let p = a[i] * b[j];
                if p == C64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..d {
                    let c = self.constant(i, j, k);
                    if c != 0.0 {
                        out[k] += p * c;
                    }
                }
            }
        }
        out
    }

    /// Gram matrix of the minus-Killing form, `-tr(ad_i ad_j)`.
    pub fn killing_gram(&self) -> DMatrix<f64> {
        let d = self.dim;
        let ads: Vec<CMat> = (0..d).map(|i| self.ad_matrix(&self.basis(i))).collect();
        DMatrix::from_fn(d, d, |i, j| -(&ads[i] * &ads[j]).trace().re)
    }

    /// Minus-Killing inner product `⟨a,b⟩ = -tr(ad_a ad_b)`, bilinear.
    pub fn killing_inner(&self, a: &CVec, b: &CVec) -> Result<C64> {
        self.check_len(a)?;
        self.check_len(b)?;
        Ok(-(self.ad_matrix(a) * self.ad_matrix(b)).trace())
    }

    /// Hermitian norm squared `⟨ā, a⟩`.
    pub fn norm_sqr(&self, a: &CVec) -> f64 {
        let conj = a.map(|z| z.conj());
        -(self.ad_matrix(&conj) * self.ad_matrix(a)).trace().re
    }

    fn check_len(&self, a: &CVec) -> Result<()> {
        if a.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: a.len(),
            });
        }
        Ok(())
    }
}

/// Finite Fourier series `X = Σ a_n z^n` with Lie-algebra coefficients.
#[derive(Debug, Clone)]
pub struct LoopElement {
    algebra: Arc<LieAlgebraData>,
    coeffs: BTreeMap<i64, CVec>,
}

impl PartialEq for LoopElement {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra && self.coeffs == other.coeffs
    }
}

impl LoopElement {
    pub fn zero(algebra: Arc<LieAlgebraData>) -> Self {
        Self {
            algebra,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_modes(
        algebra: Arc<LieAlgebraData>,
        modes: impl IntoIterator<Item = (i64, CVec)>,
    ) -> Result<Self> {
        let mut x = Self::zero(algebra);
        for (n, v) in modes {
            x.algebra.check_len(&v)?;
            x.add_mode(n, &v);
        }
        Ok(x)
    }

    /// `z^n a`.
    pub fn monomial(algebra: Arc<LieAlgebraData>, n: i64, a: CVec) -> Result<Self> {
        Self::from_modes(algebra, [(n, a)])
    }

    /// `coef · z^n e_i`.
    pub fn basis_monomial(algebra: Arc<LieAlgebraData>, n: i64, i: usize, coef: C64) -> Self {
        let v = algebra.basis(i) * coef;
        Self::monomial(algebra, n, v).expect("basis vector has the algebra dimension")
    }

    pub fn algebra(&self) -> &Arc<LieAlgebraData> {
        &self.algebra
    }

    pub fn modes(&self) -> impl Iterator<Item = (i64, &CVec)> {
        self.coeffs.iter().map(|(n, v)| (*n, v))
    }

    pub fn coeff(&self, n: i64) -> CVec {
        self.coeffs
            .get(&n)
            .cloned()
            .unwrap_or_else(|| CVec::zeros(self.algebra.dim()))
    }

    pub fn degree(&self) -> i64 {
        self.coeffs.keys().map(|n| n.abs()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_mode(&mut self, n: i64, v: &CVec) {
        let e = self.coeffs.entry(n).or_insert_with(|| CVec::zeros(v.len()));
        *e += v;
        if e.iter().all(|z| *z == C64::new(0.0, 0.0)) {
            self.coeffs.remove(&n);
        }
    }

    fn same_algebra(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        let mut out = self.clone();
        for (n, v) in &other.coeffs {
            out.add_mode(*n, v);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = Self::zero(self.algebra.clone());
        for (n, v) in &self.coeffs {
            out.add_mode(*n, &(v * s));
        }
        out
    }

    /// Multiplies mode `n` by `f(n)`.
    pub fn map_modes(&self, f: impl Fn(i64) -> f64) -> Self {
        let mut out = Self::zero(self.algebra.clone());
        for (n, v) in &self.coeffs {
            out.add_mode(*n, &(v * C64::new(f(*n), 0.0)));
        }
        out
    }

    /// Keeps modes satisfying `keep`.
    pub fn filter_modes(&self, keep: impl Fn(i64) -> bool) -> Self {
        Self {
            algebra: self.algebra.clone(),
            coeffs: self
                .coeffs
                .iter()
                .filter(|(n, _)| keep(**n))
                .map(|(n, v)| (*n, v.clone()))
                .collect(),
        }
    }

    /// Pointwise bracket: `([X,Y])_n = Σ_{p+q=n} [a_p, b_q]`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        let mut out = Self::zero(self.algebra.clone());
        for (p, a) in &self.coeffs {
            for (q, b) in &other.coeffs {
                out.add_mode(p + q, &self.algebra.bracket(a, b));
            }
        }
        Ok(out)
    }

    /// `ω(X,Y) = Σ_n (i n)⟨a_n, b_{-n}⟩`, the average of `⟨X', Y⟩` over the circle.
    pub fn symplectic(&self, other: &Self) -> Result<C64> {
        self.same_algebra(other)?;
        let mut acc = C64::new(0.0, 0.0);
        for (n, a) in &self.coeffs {
            if let Some(b) = other.coeffs.get(&-n) {
                acc += C64::new(0.0, *n as f64) * self.algebra.killing_inner(a, b)?;
            }
        }
        Ok(acc)
    }

    /// Pointwise complex conjugate `X̄`, i.e. `ā_{-n}` at mode `n`.
    pub fn conj(&self) -> Self {
        Self {
            algebra: self.algebra.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(n, v)| (-n, v.map(|z| z.conj())))
                .collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut m: f64 = 0.0;
        let keys: std::collections::BTreeSet<i64> = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .copied()
            .collect();
        for n in keys {
            let d = self.coeff(n) - other.coeff(n);
            m = m.max(d.iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
        m
    }
}

pub fn killing_inner(algebra: &LieAlgebraData, a: &CVec, b: &CVec) -> Result<C64> {
    algebra.killing_inner(a, b)
}

pub fn loop_bracket(x: &LoopElement, y: &LoopElement) -> Result<LoopElement> {
    x.bracket(y)
}

pub fn symplectic_form(x: &LoopElement, y: &LoopElement) -> Result<C64> {
    x.symplectic(y)
}

pub fn real_vector(values: &[f64]) -> CVec {
    DVector::from_iterator(values.len(), values.iter().map(|v| Complex64::new(*v, 0.0)))
}
