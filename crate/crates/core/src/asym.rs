//! Asymptotic expansions along one ray of the mode lattice.
//!
//! An [`Asym`] is a finite sum of monomials `c · |n|^exp · (log |n|)^log` together with a
//! remainder exponent `rem`: the neglected tail is `O(|n|^rem)`.  `rem = -∞` marks an exact
//! expansion.

use std::ops::{Add, Mul};

use crate::error::{Error, Result};
use crate::{CMat, C64};

const EXP_EPS: f64 = 1e-9;

pub trait Coef: Clone + Add<Output = Self> {
    fn scaled(&self, s: f64) -> Self;
    fn magnitude(&self) -> f64;
}

impl Coef for f64 {
    fn scaled(&self, s: f64) -> Self {
        self * s
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Coef for C64 {
    fn scaled(&self, s: f64) -> Self {
        self * s
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl Coef for CMat {
    fn scaled(&self, s: f64) -> Self {
        self * C64::new(s, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mono<T> {
    pub exp: f64,
    pub log: u8,
    pub c: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Asym<T> {
    pub terms: Vec<Mono<T>>,
    pub rem: f64,
}

impl<T: Coef> Asym<T> {
    pub fn zero() -> Self {
        Self {
            terms: Vec::new(),
            rem: f64::NEG_INFINITY,
        }
    }

    pub fn new(terms: Vec<Mono<T>>, rem: f64) -> Self {
        let mut a = Self { terms, rem };
        a.normalize();
        a
    }

    fn normalize(&mut self) {
        self.terms
            .sort_by(|a, b| b.exp.partial_cmp(&a.exp).unwrap().then(b.log.cmp(&a.log)));
        let mut out: Vec<Mono<T>> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            if t.exp <= self.rem + EXP_EPS {
                continue;
            }
            match out.last_mut() {
                Some(last) if (last.exp - t.exp).abs() < EXP_EPS && last.log == t.log => {
                    last.c = last.c.clone() + t.c;
                }
                _ => out.push(t),
            }
        }
        self.terms = out;
    }

    /// Drops monomials whose coefficient is below `tol` in magnitude.
    pub fn pruned(mut self, tol: f64) -> Self {
        self.terms.retain(|t| t.c.magnitude() > tol);
        self
    }

    /// Largest exponent carrying a coefficient above `tol`.
    pub fn lead(&self, tol: f64) -> Option<f64> {
        self.terms
            .iter()
            .find(|t| t.c.magnitude() > tol)
            .map(|t| t.exp)
    }

    /// Exponent bound used for remainder propagation.
    fn bound(&self) -> f64 {
        let lead = self
            .terms
            .first()
            .map(|t| t.exp)
            .unwrap_or(f64::NEG_INFINITY);
        lead.max(self.rem)
    }

    pub fn is_exact_zero(&self, tol: f64) -> bool {
        self.rem == f64::NEG_INFINITY && self.terms.iter().all(|t| t.c.magnitude() <= tol)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::new(terms, self.rem.max(other.rem))
    }

    pub fn map<U: Coef>(&self, f: impl Fn(&T) -> U) -> Asym<U> {
        Asym {
            terms: self
                .terms
                .iter()
                .map(|t| Mono {
                    exp: t.exp,
                    log: t.log,
                    c: f(&t.c),
                })
                .collect(),
            rem: self.rem,
        }
    }

    pub fn has_log(&self, tol: f64) -> bool {
        self.terms
            .iter()
            .any(|t| t.log > 0 && t.c.magnitude() > tol)
    }

    /// Coefficient of `|n|^exp` without log factor.
    pub fn coeff_at(&self, exp: f64) -> Option<&T> {
        self.terms
            .iter()
            .find(|t| t.log == 0 && (t.exp - exp).abs() < EXP_EPS)
            .map(|t| &t.c)
    }

    /// Evaluates the retained terms at `|n| = x`.
    pub fn eval(&self, x: f64) -> Option<T> {
        let lx = x.ln();
        let mut acc: Option<T> = None;
        for t in &self.terms {
            let w = x.powf(t.exp) * lx.powi(t.log as i32);
            let v = t.c.scaled(w);
            acc = Some(match acc {
                Some(a) => a + v,
                None => v,
            });
        }
        acc
    }
}

impl<T: Coef> Asym<T> {
    /// Product with a coefficient type that multiplies `T` into `T`.
    pub fn mul_with<U: Coef, V: Coef>(
        &self,
        other: &Asym<U>,
        f: impl Fn(&T, &U) -> V,
    ) -> Result<Asym<V>> {
        let rem = (self.rem + other.bound()).max(other.rem + self.bound());
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let exp = a.exp + b.exp;
                if exp <= rem + EXP_EPS {
                    continue;
                }
                let log = a.log + b.log;
                if log > 1 {
                    return Err(Error::LogPower);
                }
                terms.push(Mono {
                    exp,
                    log,
                    c: f(&a.c, &b.c),
                });
            }
        }
        Ok(Asym::new(terms, rem))
    }
}

impl Asym<f64> {
    /// `|n|^lead · Σ_j s_j |n|^{-j}` from power-series coefficients `s`.
    pub fn from_series(lead: f64, s: &[f64], exact: bool) -> Self {
        let terms = s
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(j, c)| Mono {
                exp: lead - j as f64,
                log: 0,
                c: *c,
            })
            .collect();
        let rem = if exact {
            f64::NEG_INFINITY
        } else {
            lead - s.len() as f64
        };
        Self::new(terms, rem)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_with(other, |a, b| a * b)
    }
}

impl<T: Coef> Mul<f64> for &Asym<T> {
    type Output = Asym<T>;
    fn mul(self, s: f64) -> Asym<T> {
        self.map(|c| c.scaled(s))
    }
}

/// Truncated power series in `x`, stored as coefficients `s[0..len]`.
pub mod series {
    pub fn mul(a: &[f64], b: &[f64], len: usize) -> Vec<f64> {
        let mut out = vec![0.0; len];
        for (i, x) in a.iter().enumerate().take(len) {
            if *x == 0.0 {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(len - i) {
                out[i + j] += x * y;
            }
        }
        out
    }

    /// `f^beta` for `f[0] > 0`.
    pub fn pow(f: &[f64], beta: f64, len: usize) -> Vec<f64> {
        let f0 = f[0];
        assert!(f0 > 0.0, "power series base must start positive");
        let mut h = vec![0.0; len];
        if len == 0 {
            return h;
        }
        h[0] = f0.powf(beta);
        for n in 1..len {
            let mut acc = 0.0;
            for k in 1..=n.min(f.len() - 1) {
                acc += (beta * k as f64 - (n - k) as f64) * f[k] * h[n - k];
            }
            h[n] = acc / (n as f64 * f0);
        }
        h
    }

    /// `log f` for `f[0] > 0`.
    pub fn log(f: &[f64], len: usize) -> Vec<f64> {
        let f0 = f[0];
        assert!(f0 > 0.0, "log series needs a positive constant term");
        let mut g = vec![0.0; len];
        if len == 0 {
            return g;
        }
        g[0] = f0.ln();
        let fk = |k: usize| if k < f.len() { f[k] } else { 0.0 };
        for n in 1..len {
            let mut acc = n as f64 * fk(n);
            for k in 1..n {
                acc -= fk(k) * (n - k) as f64 * g[n - k];
            }
            g[n] = acc / (n as f64 * f0);
        }
        g
    }

    pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
        let len = a.len().max(b.len());
        (0..len)
            .map(|i| a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0))
            .collect()
    }
}
