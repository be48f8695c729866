//! Positive diagonal weights `Q e_n = μ_n e_n` on the Fourier modes.

use ordered_float::OrderedFloat;

use crate::asym::{series, Asym, Mono};
use crate::error::{Error, Result};

type OF = OrderedFloat<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ray {
    Plus,
    Minus,
}

impl Ray {
    pub fn sign(self) -> f64 {
        match self {
            Ray::Plus => 1.0,
            Ray::Minus => -1.0,
        }
    }

    pub fn both() -> [Ray; 2] {
        [Ray::Plus, Ray::Minus]
    }

    pub fn contains(self, m: i64) -> bool {
        match self {
            Ray::Plus => m > 0,
            Ray::Minus => m < 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WeightKind {
    /// `(|m| + offset)^order`.
    AbsPower { offset: OF, order: OF },
    /// `Σ_i c_i m^{2i}`.
    EvenPoly { coeffs: Vec<OF> },
}

/// `μ_n = f(n + shift)`, with `kernel` replacing a vanishing eigenvalue.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagonalWeight {
    kind: WeightKind,
    shift: i64,
    kernel: OF,
}

impl DiagonalWeight {
    pub fn abs_power(offset: f64, order: f64) -> Result<Self> {
        if order <= 0.0 || offset < 0.0 {
            return Err(Error::Unsupported(format!(
                "weight (|n|+{offset})^{order} is not a positive elliptic weight"
            )));
        }
        Ok(Self {
            kind: WeightKind::AbsPower {
                offset: offset.into(),
                order: order.into(),
            },
            shift: 0,
            kernel: 1.0.into(),
        })
    }

    /// `max(n², 1)`, i.e. `Δ + P` on the circle.
    pub fn laplacian() -> Self {
        Self::abs_power(0.0, 2.0).unwrap()
    }

    /// `max(|n|, 1)`, i.e. `|D₀| + P`.
    pub fn abs_d() -> Self {
        Self::abs_power(0.0, 1.0).unwrap()
    }

    /// `Σ_i c_i n^{2i}`; the constant term may vanish only through the kernel convention.
    pub fn even_poly(coeffs: &[f64]) -> Result<Self> {
        let top = coeffs.iter().rposition(|c| *c != 0.0);
        match top {
            Some(t) if t > 0 && coeffs[t] > 0.0 && coeffs.iter().all(|c| *c >= 0.0) => {}
            _ => {
                return Err(Error::Unsupported(
                    "even polynomial weight needs non-negative coefficients and positive degree"
                        .into(),
                ))
            }
        }
        let coeffs = coeffs[..=top.unwrap()]
            .iter()
            .map(|c| OF::from(*c))
            .collect();
        Ok(Self {
            kind: WeightKind::EvenPoly { coeffs },
            shift: 0,
            kernel: 1.0.into(),
        })
    }

    pub fn with_shift(&self, shift: i64) -> Self {
        Self {
            shift: self.shift + shift,
            ..self.clone()
        }
    }

    pub fn with_kernel(&self, kernel: f64) -> Self {
        Self {
            kernel: kernel.into(),
            ..self.clone()
        }
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub fn order(&self) -> f64 {
        match &self.kind {
            WeightKind::AbsPower { order, .. } => order.0,
            WeightKind::EvenPoly { coeffs } => 2.0 * (coeffs.len() - 1) as f64,
        }
    }

    /// Whether the weight's symbol is a polynomial in `ξ` (odd class).
    pub fn is_odd_class(&self) -> bool {
        match &self.kind {
            WeightKind::AbsPower { offset, order } => {
                offset.0 == 0.0 && order.0.fract() == 0.0 && (order.0 as i64) % 2 == 0
            }
            WeightKind::EvenPoly { .. } => true,
        }
    }

    pub fn mu(&self, n: i64) -> f64 {
        let m = n + self.shift;
        let v = match &self.kind {
            WeightKind::AbsPower { offset, order } => {
                if m == 0 && offset.0 == 0.0 {
                    0.0
                } else {
                    (m.abs() as f64 + offset.0).powf(order.0)
                }
            }
            WeightKind::EvenPoly { coeffs } => {
                let m2 = (m as f64) * (m as f64);
                coeffs.iter().rev().fold(0.0, |acc, c| acc * m2 + c.0)
            }
        };
        if v > 0.0 {
            v
        } else {
            self.kernel.0
        }
    }

    pub fn log_mu(&self, n: i64) -> f64 {
        self.mu(n).ln()
    }

    /// Power series `P(x)` with `μ(n + c) = |n|^q P(1/|n|)` for `n` far out on `ray`.
    pub fn profile(&self, ray: Ray, c: i64, len: usize) -> Vec<f64> {
        let u = ray.sign() * (c + self.shift) as f64;
        match &self.kind {
            WeightKind::AbsPower { offset, order } => {
                series::pow(&[1.0, u + offset.0], order.0, len)
            }
            WeightKind::EvenPoly { coeffs } => {
                let deg = coeffs.len() - 1;
                let mut p = vec![0.0; 2 * deg + 1];
                for (i, ci) in coeffs.iter().enumerate() {
                    if ci.0 == 0.0 {
                        continue;
                    }
                    let bin = series::pow(&[1.0, u], 2.0 * i as f64, 2 * i + 1);
                    let off = 2 * (deg - i);
                    for (j, b) in bin.iter().enumerate() {
                        p[off + j] += ci.0 * b;
                    }
                }
                p.resize(len.max(p.len()), 0.0);
                p.truncate(len.max(1));
                p
            }
        }
    }

    /// Degree of `P` when it is a polynomial in `x`.
    fn profile_degree(&self) -> Option<usize> {
        match &self.kind {
            WeightKind::AbsPower { order, .. } if order.0.fract() == 0.0 => Some(order.0 as usize),
            WeightKind::AbsPower { .. } => None,
            WeightKind::EvenPoly { coeffs } => Some(2 * (coeffs.len() - 1)),
        }
    }

    /// Expansion of `μ(n + c)^s` on `ray`.
    pub fn pow_expansion(&self, ray: Ray, c: i64, s: f64, len: usize) -> Asym<f64> {
        let q = self.order();
        let p = self.profile(ray, c, len);
        let ps = series::pow(&p, s, len);
        let exact = s.fract() == 0.0
            && s >= 0.0
            && self
                .profile_degree()
                .is_some_and(|deg| deg * (s as usize) < len);
        Asym::from_series(q * s, &ps, exact)
    }

    /// Power series of `log P(x)`.
    pub fn log_profile(&self, ray: Ray, c: i64, len: usize) -> Vec<f64> {
        series::log(&self.profile(ray, c, len), len)
    }

    /// Expansion of `log μ(n + c)` on `ray`.
    pub fn log_expansion(&self, ray: Ray, c: i64, len: usize) -> Asym<f64> {
        let mut a = Asym::from_series(0.0, &self.log_profile(ray, c, len), false);
        a = a.add(&Asym::new(
            vec![Mono {
                exp: 0.0,
                log: 1,
                c: self.order(),
            }],
            f64::NEG_INFINITY,
        ));
        a
    }

    /// Expansion of `log μ(n + c + step) - log μ(n + c)`; free of log terms.
    pub fn log_ratio_expansion(&self, ray: Ray, c: i64, step: i64, len: usize) -> Asym<f64> {
        let d = series::sub(
            &self.log_profile(ray, c + step, len),
            &self.log_profile(ray, c, len),
        );
        Asym::from_series(0.0, &d, false)
    }

    /// Expansion of `log μ(n + c) - log ν(n + c)`.
    pub fn log_quotient_expansion(&self, other: &Self, ray: Ray, c: i64, len: usize) -> Asym<f64> {
        let d = series::sub(
            &self.log_profile(ray, c, len),
            &other.log_profile(ray, c, len),
        );
        let mut a = Asym::from_series(0.0, &d, false);
        let dq = self.order() - other.order();
        if dq != 0.0 {
            a = a.add(&Asym::new(
                vec![Mono {
                    exp: 0.0,
                    log: 1,
                    c: dq,
                }],
                f64::NEG_INFINITY,
            ));
        }
        a
    }

    pub fn describe(&self) -> String {
        let base = match &self.kind {
            WeightKind::AbsPower { offset, order } if offset.0 == 0.0 => {
                format!("max(|n|,1)^{}", order.0)
            }
            WeightKind::AbsPower { offset, order } => format!("(|n|+{})^{}", offset.0, order.0),
            WeightKind::EvenPoly { coeffs } => coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| c.0 != 0.0)
                .map(|(i, c)| {
                    if i == 0 {
                        format!("{}", c.0)
                    } else {
                        format!("{}n^{}", c.0, 2 * i)
                    }
                })
                .collect::<Vec<_>>()
                .join("+"),
        };
        if self.shift == 0 {
            base
        } else {
            format!("{base} at n{:+}", self.shift)
        }
    }
}
