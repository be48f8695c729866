//! Single quantities on parsed operands.

use std::str::FromStr;
use std::sync::Arc;

use crate::cocycles::{lambda_d, radul, schwinger, DiracData, Polarization};
use crate::error::{Error, Result};
use crate::geometry::{first_chern, ricci, GeometryConfig};
use crate::lie::LieAlgebraData;
use crate::modes::BlockBandOperator;
use crate::parse::{parse_loop, parse_operator, split_operands};
use crate::traces::{canonical_trace, residue_density, weighted_trace, EngineConfig};
use crate::weight::DiagonalWeight;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// Weighted trace `tr^Q(A)`.
    Trace,
    /// Residue `res(A)`.
    Residue,
    /// Canonical trace `TR(A)`.
    Canonical,
    Radul,
    Schwinger,
    Lambda,
    FirstChern,
    Ricci,
    Symplectic,
}

impl Quantity {
    pub const ALL: [(&'static str, Quantity); 9] = [
        ("tr", Quantity::Trace),
        ("res", Quantity::Residue),
        ("TR", Quantity::Canonical),
        ("radul", Quantity::Radul),
        ("schwinger", Quantity::Schwinger),
        ("lambda", Quantity::Lambda),
        ("first_chern", Quantity::FirstChern),
        ("ricci", Quantity::Ricci),
        ("symplectic", Quantity::Symplectic),
    ];

    pub fn name(self) -> &'static str {
        Self::ALL
            .iter()
            .find(|(_, q)| *q == self)
            .map(|(n, _)| *n)
            .unwrap()
    }

    fn arity(self) -> usize {
        match self {
            Quantity::Trace | Quantity::Residue | Quantity::Canonical => 1,
            _ => 2,
        }
    }
}

impl FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .find(|(n, _)| *n == s)
            .map(|(_, q)| *q)
            .ok_or_else(|| Error::Parse(format!("unknown quantity `{s}`")))
    }
}

#[derive(Debug, Clone)]
pub struct ComputeConfig {
    pub algebra: Arc<LieAlgebraData>,
    pub engine: EngineConfig,
    pub polarization: Polarization,
    /// Weight for `tr` and `radul`.
    pub weight: DiagonalWeight,
    /// Sobolev index for `ricci`.
    pub s: f64,
}

/// Evaluates `quantity` on an operand string such as `"(z^1 e1, z^-1 e1)"`.
pub fn compute(quantity: Quantity, operands: &str, cfg: &ComputeConfig) -> Result<C64> {
    let parts = split_operands(operands);
    if parts.len() != quantity.arity() {
        return Err(Error::Parse(format!(
            "{} takes {} operand(s), got {}",
            quantity.name(),
            quantity.arity(),
            parts.len()
        )));
    }
    let alg = &cfg.algebra;
    let op = |i: usize| parse_operator(&parts[i], alg);
    let lp = |i: usize| parse_loop(&parts[i], alg);
    let dd = || DiracData::new(alg.dim(), cfg.polarization, cfg.engine);
    let geom = |s: f64| {
        let mut g = GeometryConfig::new(alg.clone(), s);
        g.engine = cfg.engine;
        g.polarization = cfg.polarization;
        g
    };
    match quantity {
        Quantity::Trace => weighted_trace(&op(0)?, &cfg.weight, &cfg.engine),
        Quantity::Residue => residue_density(&op(0)?, &cfg.engine),
        Quantity::Canonical => canonical_trace(&op(0)?, &cfg.engine),
        Quantity::Radul => radul(&op(0)?, &op(1)?, &cfg.weight, &cfg.engine),
        Quantity::Schwinger => schwinger(&op(0)?, &op(1)?, &dd()),
        Quantity::Lambda => lambda_d(
            &BlockBandOperator::ad(&lp(0)?),
            &BlockBandOperator::ad(&lp(1)?),
            &dd(),
        ),
        Quantity::FirstChern => first_chern(&lp(0)?, &lp(1)?, &geom(0.5)),
        Quantity::Ricci => ricci(&lp(0)?, &lp(1)?, &geom(cfg.s)),
        Quantity::Symplectic => lp(0)?.symplectic(&lp(1)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ComputeConfig {
        ComputeConfig {
            algebra: Arc::new(LieAlgebraData::su2()),
            engine: EngineConfig::default(),
            polarization: Polarization::KernelPlus,
            weight: DiagonalWeight::laplacian(),
            s: 1.0,
        }
    }

    #[test]
    fn documented_examples() {
        let c = cfg();
        let r1 = compute(Quantity::FirstChern, "(z^1 e1, z^-1 e1)", &c).unwrap();
        assert!((r1 - C64::new(2.0, 0.0)).norm() < 1e-9);
        let res = compute(Quantity::Residue, "|D+P|^-1", &c).unwrap();
        assert!((res - C64::new(6.0, 0.0)).norm() < 1e-12);
        let w = compute(Quantity::Symplectic, "(z e1, z e1)", &c).unwrap();
        assert_eq!(w, C64::new(0.0, 0.0));
    }

    #[test]
    fn arity_is_checked() {
        assert!(matches!(
            compute(Quantity::Radul, "D", &cfg()),
            Err(Error::Parse(_))
        ));
        assert!("nope".parse::<Quantity>().is_err());
    }
}
