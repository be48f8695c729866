//! Named verification suites: each check evaluates both sides of an identity on a fixed,
//! seeded corpus and is reported as a [`CheckReport`].

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cocycles::{
    c_tr, c_tr_bar, c_tr_tilde, j_embed, lambda_d, log_difference_residue, mean_schwinger,
    obstruction_residue, omega_d, radul, radul_cochain, radul_residue_form, schwinger,
    schwinger_finite, weighted_trace_cochain, Cochain, DiracData, Polarization,
};
use crate::error::{Error, Result};
use crate::exec;
use crate::geometry::{
    chern_identities, closedness_lambda, complex_curvature, conjugated_toeplitz,
    covariant_trace_variation, curvature_s, first_chern_truncated, first_chern_with_weight,
    fit_order, phi, ricci, ricci_truncated, ricci_with_weight, riemann_operator, riemann_residue,
    theta_apply, theta_s, toeplitz, ChernIdentities, GeometryConfig,
};
use crate::lie::{LieAlgebraData, LoopElement};
use crate::modes::{BlockBandOperator, HsNorm, Quadrant};
use crate::report::CheckReport;
use crate::symbol::{word_to_band, word_to_symbol, Generator};
use crate::traces::{
    canonical_trace, covariance_check, finite_part_sum, weight_dependence, weighted_trace,
    wres_from_modes, Conjugator, DiagonalTraceData, EngineConfig,
};
use crate::weight::DiagonalWeight;
use crate::zeta::{riemann_zeta, EULER_GAMMA};
use crate::{CMat, C64};

pub const SUITES: [&str; 6] = [
    "traces",
    "radul",
    "schwinger",
    "lambda",
    "loopgeom",
    "chern",
];

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub algebra: Arc<LieAlgebraData>,
    /// Largest mode used by truncation paths and order fits.
    pub truncation: i64,
    pub engine: EngineConfig,
    /// Overrides every per-check tolerance when set.
    pub tol: Option<f64>,
    pub polarization: Polarization,
    pub seed: u64,
    /// Report `runtime_ms = 0` so reruns are byte-identical.
    pub stable: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            algebra: Arc::new(LieAlgebraData::su2()),
            truncation: 256,
            engine: EngineConfig::default(),
            tol: None,
            polarization: Polarization::KernelPlus,
            seed: 0x5eed,
            stable: false,
        }
    }
}

impl SuiteConfig {
    fn d(&self) -> usize {
        self.algebra.dim()
    }

    fn dirac(&self) -> DiracData {
        DiracData::new(self.d(), self.polarization, self.engine)
    }

    fn geometry(&self, s: f64) -> GeometryConfig {
        let mut g = GeometryConfig::new(self.algebra.clone(), s);
        g.polarization = self.polarization;
        g.engine = self.engine;
        g.truncation = self.truncation;
        g
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

type CheckFn = Box<dyn Fn() -> Result<(C64, C64)> + Send + Sync>;

struct Check {
    id: String,
    anchor: &'static str,
    tol: f64,
    run: CheckFn,
}

fn check(
    id: impl Into<String>,
    anchor: &'static str,
    tol: f64,
    run: impl Fn() -> Result<(C64, C64)> + Send + Sync + 'static,
) -> Check {
    Check {
        id: id.into(),
        anchor,
        tol,
        run: Box::new(run),
    }
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Runs a named suite, or every suite for `"all"`.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    if cfg.d() == 0 {
        return Err(Error::Config("the Lie algebra is empty".into()));
    }
    if cfg.truncation < 16 {
        return Err(Error::Config(format!(
            "truncation {} is below 16",
            cfg.truncation
        )));
    }
    let names: Vec<&str> = match name {
        "all" => SUITES.to_vec(),
        n if SUITES.contains(&n) => vec![n],
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    let mut checks = Vec::new();
    for n in names {
        checks.extend(build(n, cfg)?);
    }
    Ok(run_checks(&checks, cfg))
}

fn build(name: &str, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    match name {
        "traces" => Ok(traces_suite(cfg)),
        "radul" => Ok(radul_suite(cfg)),
        "schwinger" => Ok(schwinger_suite(cfg)),
        "lambda" => {
            cfg.algebra.require_compact()?;
            Ok(lambda_suite(cfg))
        }
        "loopgeom" => {
            cfg.algebra.require_compact()?;
            Ok(loopgeom_suite(cfg))
        }
        "chern" => {
            cfg.algebra.require_compact()?;
            Ok(chern_suite(cfg))
        }
        other => Err(Error::UnknownSuite(other.to_string())),
    }
}

fn run_checks(checks: &[Check], cfg: &SuiteConfig) -> Vec<CheckReport> {
    exec::map(checks, |c| {
        let start = Instant::now();
        let out = (c.run)();
        let ms = if cfg.stable {
            0
        } else {
            start.elapsed().as_millis() as u64
        };
        let tol = cfg.tol.unwrap_or(c.tol);
        match out {
            Ok((lhs, rhs)) => CheckReport::new(c.id.clone(), c.anchor, lhs, rhs, tol, ms),
            Err(_) => CheckReport::errored(c.id.clone(), c.anchor, tol, ms),
        }
    })
}

// ---------------------------------------------------------------- corpora

fn rand_mat(rng: &mut ChaCha8Rng, d: usize) -> CMat {
    CMat::from_fn(d, d, |_, _| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

fn rand_poly(rng: &mut ChaCha8Rng, d: usize, deg: i64) -> Vec<(i64, CMat)> {
    (-deg..=deg).map(|k| (k, rand_mat(rng, d))).collect()
}

/// Random loop with Fourier modes in `[-deg, deg]`; real coefficients if `real`.
pub fn rand_loop(
    rng: &mut ChaCha8Rng,
    alg: &Arc<LieAlgebraData>,
    deg: i64,
    real: bool,
) -> LoopElement {
    let d = alg.dim();
    let mut x = LoopElement::zero(alg.clone());
    for n in -deg..=deg {
        for i in 0..d {
            let c = if real {
                C64::new(rng.gen_range(-1.0..1.0), 0.0)
            } else {
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            };
            x = x
                .add(&LoopElement::basis_monomial(alg.clone(), n, i, c))
                .expect("same algebra");
        }
    }
    x
}

fn mono(alg: &Arc<LieAlgebraData>, n: i64, i: usize) -> LoopElement {
    LoopElement::basis_monomial(alg.clone(), n, i, re(1.0))
}

/// Words in the generators of the symbol/mode bridge, all of order at most 1.
fn word_corpus(cfg: &SuiteConfig) -> Vec<(String, Vec<Generator>)> {
    let d = cfg.d();
    let mut rng = cfg.rng(1);
    let mut f = || Generator::Mult(rand_poly(&mut rng, d, 2));
    let lap = DiagonalWeight::laplacian();
    let absd = DiagonalWeight::abs_d();
    let shifted = DiagonalWeight::abs_power(1.0, 2.0).expect("valid weight");
    vec![
        (
            "inv_abs".into(),
            vec![Generator::WeightPow(absd.clone(), -1.0)],
        ),
        (
            "f_lap_half".into(),
            vec![f(), Generator::WeightPow(lap.clone(), -0.5)],
        ),
        (
            "f_d0_lapinv_g".into(),
            vec![
                f(),
                Generator::D0,
                Generator::WeightPow(lap.clone(), -1.0),
                f(),
            ],
        ),
        (
            "eps_f_inv_abs".into(),
            vec![
                Generator::Eps,
                f(),
                Generator::WeightPow(absd.clone(), -1.0),
            ],
        ),
        (
            "d0_f_lapinv_g_eps".into(),
            vec![
                Generator::D0,
                f(),
                Generator::WeightPow(lap.clone(), -1.0),
                f(),
                Generator::Eps,
            ],
        ),
        (
            "f_d0sq_lap".into(),
            vec![
                f(),
                Generator::D0,
                Generator::D0,
                Generator::WeightPow(lap.clone(), -1.5),
            ],
        ),
        (
            "lap_f_abs".into(),
            vec![
                Generator::WeightPow(lap.clone(), 0.5),
                f(),
                Generator::WeightPow(absd.clone(), -2.0),
            ],
        ),
        (
            "f_shifted".into(),
            vec![f(), Generator::WeightPow(shifted, -0.5)],
        ),
        ("f_d0".into(), vec![f(), Generator::D0]),
        ("f_frac".into(), vec![Generator::WeightPow(absd, -0.7), f()]),
    ]
}

fn weight_pairs() -> Vec<(&'static str, DiagonalWeight, DiagonalWeight)> {
    vec![
        (
            "lap/shifted",
            DiagonalWeight::laplacian(),
            DiagonalWeight::abs_power(1.0, 2.0).unwrap(),
        ),
        (
            "lap/poly",
            DiagonalWeight::laplacian(),
            DiagonalWeight::even_poly(&[1.0, 1.0]).unwrap(),
        ),
        (
            "abs/shifted",
            DiagonalWeight::abs_d(),
            DiagonalWeight::abs_power(2.0, 1.0).unwrap(),
        ),
    ]
}

// ---------------------------------------------------------------- traces

fn traces_suite(cfg: &SuiteConfig) -> Vec<Check> {
    let d = cfg.d();
    let eng = cfg.engine;
    let mut out = Vec::new();
    let lap = DiagonalWeight::laplacian();

    for (i, c) in [re(1.0), re(-2.5), C64::new(3.0, 1.0)]
        .into_iter()
        .enumerate()
    {
        let lap = lap.clone();
        out.push(check(
            format!("traces.constant_identity[{i}]"),
            "weighted trace of a constant multiple of the identity",
            1e-12,
            move || {
                let a = BlockBandOperator::identity(d).scale(c);
                let oracle = c * (d as f64) * (1.0 + 2.0 * riemann_zeta(0.0));
                Ok((weighted_trace(&a, &lap, &eng)?, oracle))
            },
        ));
    }

    for (name, q) in [("abs", DiagonalWeight::abs_d()), ("lap", lap.clone())] {
        out.push(check(
            format!("traces.inverse_abs_finite_part[{name}]"),
            "finite part of the harmonic spectral sum",
            1e-12,
            move || {
                let a = BlockBandOperator::weight_power(1, &DiagonalWeight::abs_d(), -1.0);
                let v = finite_part_sum(&DiagonalTraceData::from_operator(&a, &eng)?, &q)?;
                Ok((v.finite_part, re(1.0 + 2.0 * EULER_GAMMA)))
            },
        ));
    }

    out.push(check(
        "traces.trace_class",
        "weighted trace reduces to the ordinary trace",
        1e-10,
        move || {
            let a = BlockBandOperator::weight_power(d, &DiagonalWeight::abs_d(), -2.0);
            let exact = (d as f64) * (1.0 + PI * PI / 3.0);
            Ok((
                weighted_trace(&a, &DiagonalWeight::laplacian(), &eng)?,
                re(exact),
            ))
        },
    ));

    let residue_weights = [
        ("lap", lap.clone()),
        ("abs", DiagonalWeight::abs_d()),
        ("shifted", DiagonalWeight::abs_power(1.0, 2.0).unwrap()),
        (
            "quartic",
            DiagonalWeight::even_poly(&[1.0, 0.0, 1.0]).unwrap(),
        ),
    ];
    for (qn, q) in residue_weights.clone() {
        out.push(check(
            format!("traces.residue_inverse_abs[{qn}]"),
            "residue normalization of |D+P|^-1",
            1e-9,
            move || {
                let a = BlockBandOperator::weight_power(d, &DiagonalWeight::abs_d(), -1.0);
                Ok((wres_from_modes(&a, &q, &eng)?, re(2.0 * d as f64)))
            },
        ));
    }
    for (wn, word) in word_corpus(cfg) {
        for (qn, q) in &residue_weights[..2] {
            let (word, q) = (word.clone(), q.clone());
            out.push(check(
                format!("traces.residue_symbol[{wn},{qn}]"),
                "spectral residue against the symbol residue",
                1e-9,
                move || {
                    let a = word_to_band(d, &word)?;
                    let sym = word_to_symbol(d, &word, eng.depth)?;
                    Ok((wres_from_modes(&a, &q, &eng)?, sym.wodzicki_residue()?))
                },
            ));
        }
    }

    for (wn, word) in word_corpus(cfg) {
        for (pn, q1, q2) in weight_pairs() {
            let word = word.clone();
            out.push(check(
                format!("traces.weight_dependence[{wn},{pn}]"),
                "weight dependence of weighted traces",
                1e-8,
                move || weight_dependence(&word_to_band(d, &word)?, &q1, &q2, &eng),
            ));
        }
    }

    let mut rng = cfg.rng(2);
    let conjugators: Vec<Conjugator> = [0i64, 1, -2]
        .iter()
        .map(|k| Conjugator {
            matrix: rand_mat(&mut rng, d) + CMat::identity(d, d) * re(3.0),
            shift: *k,
        })
        .collect();
    for (wn, word) in word_corpus(cfg).into_iter().take(5) {
        for (ci, c) in conjugators.iter().enumerate() {
            for (qn, q) in [
                ("lap", lap.clone()),
                ("shifted", DiagonalWeight::abs_power(1.0, 2.0).unwrap()),
            ] {
                let (word, c) = (word.clone(), c.clone());
                out.push(check(
                    format!("traces.covariance[{wn},c{ci},{qn}]"),
                    "covariance of weighted traces under conjugation",
                    1e-9,
                    move || covariance_check(&word_to_band(d, &word)?, &q, &c, &eng),
                ));
            }
        }
    }

    out.push(check(
        "traces.canonical_pi",
        "canonical trace of |D+P|^-pi",
        1e-9,
        move || {
            let a = BlockBandOperator::weight_power(d, &DiagonalWeight::abs_d(), -PI);
            Ok((
                canonical_trace(&a, &eng)?,
                re(d as f64 * (1.0 + 2.0 * riemann_zeta(PI))),
            ))
        },
    ));
    let mut rng = cfg.rng(3);
    let pairs: Vec<(Vec<Generator>, Vec<Generator>)> = vec![
        (
            vec![
                Generator::WeightPow(lap.clone(), 0.3),
                Generator::Mult(rand_poly(&mut rng, d, 2)),
            ],
            vec![Generator::Mult(rand_poly(&mut rng, d, 1)), Generator::D0],
        ),
        (
            vec![
                Generator::WeightPow(DiagonalWeight::abs_d(), -0.5),
                Generator::Mult(rand_poly(&mut rng, d, 2)),
            ],
            vec![
                Generator::Mult(rand_poly(&mut rng, d, 2)),
                Generator::D0,
                Generator::D0,
            ],
        ),
        (
            vec![
                Generator::Mult(rand_poly(&mut rng, d, 1)),
                Generator::WeightPow(lap.clone(), -0.35),
            ],
            vec![Generator::Eps, Generator::Mult(rand_poly(&mut rng, d, 2))],
        ),
    ];
    for (i, (wa, wb)) in pairs.into_iter().enumerate() {
        out.push(check(
            format!("traces.canonical_commutator[{i}]"),
            "canonical trace vanishes on commutators",
            1e-9,
            move || {
                let a = word_to_band(d, &wa)?;
                let b = word_to_band(d, &wb)?;
                Ok((canonical_trace(&a.commutator(&b)?, &eng)?, re(0.0)))
            },
        ));
    }

    let mut rng = cfg.rng(4);
    let odd: Vec<Vec<Generator>> = vec![
        vec![Generator::D0, Generator::Mult(rand_poly(&mut rng, d, 2))],
        vec![
            Generator::Mult(rand_poly(&mut rng, d, 1)),
            Generator::D0,
            Generator::Mult(rand_poly(&mut rng, d, 1)),
            Generator::D0,
        ],
        vec![Generator::Mult(rand_poly(&mut rng, d, 2))],
    ];
    for (i, word) in odd.into_iter().enumerate() {
        for (qn, q2) in [
            ("poly1", DiagonalWeight::even_poly(&[1.0, 1.0]).unwrap()),
            ("poly4", DiagonalWeight::even_poly(&[4.0, 1.0]).unwrap()),
        ] {
            let word = word.clone();
            let lap = lap.clone();
            out.push(check(
                format!("traces.odd_class_weight[{i},{qn}]"),
                "weighted traces of odd-class operators are weight independent",
                1e-8,
                move || {
                    let a = word_to_band(d, &word)?;
                    Ok((
                        weighted_trace(&a, &lap, &eng)?,
                        weighted_trace(&a, &q2, &eng)?,
                    ))
                },
            ));
        }
    }
    out
}

// ---------------------------------------------------------------- radul

/// Operator pairs whose orders add up to zero, so that the Radul cocycle is generically nonzero.
fn radul_pairs(cfg: &SuiteConfig) -> Vec<(String, Vec<Generator>, Vec<Generator>)> {
    let d = cfg.d();
    let mut rng = cfg.rng(12);
    let mut out = Vec::new();
    let first_order: Vec<(String, Vec<Generator>)> = (0..2)
        .map(|i| {
            (
                format!("f_d0_{i}"),
                vec![Generator::Mult(rand_poly(&mut rng, d, 2)), Generator::D0],
            )
        })
        .collect();
    for (i, (wn, w)) in word_corpus(cfg).into_iter().enumerate() {
        let ord: f64 = w.iter().map(Generator::order).sum();
        if (ord + 1.0).abs() > 1e-12 {
            continue;
        }
        for (fname, f) in &first_order {
            if (i + fname.len()) % 2 == 0 || out.len() < 4 {
                out.push((format!("{fname},{wn}"), f.clone(), w.clone()));
            }
            out.push((format!("{wn},{fname}"), w.clone(), f.clone()));
        }
    }
    for i in 0..6 {
        let mut a = vec![Generator::Mult(rand_poly(&mut rng, d, 2))];
        if i % 2 == 1 {
            a.insert(0, Generator::Eps);
        }
        let b = vec![Generator::Mult(rand_poly(&mut rng, d, 2))];
        out.push((format!("mult_{i}"), a, b));
    }
    out
}

fn radul_suite(cfg: &SuiteConfig) -> Vec<Check> {
    let d = cfg.d();
    let eng = cfg.engine;
    let pairs = radul_pairs(cfg);
    let mut out = Vec::new();
    let weights = [
        ("lap", DiagonalWeight::laplacian()),
        ("abs", DiagonalWeight::abs_d()),
        ("shifted", DiagonalWeight::abs_power(1.0, 2.0).unwrap()),
    ];
    for (k, (pn, wa, wb)) in pairs.iter().cloned().enumerate() {
        let (qn, q) = weights[k % weights.len()].clone();
        out.push(check(
            format!("radul.residue_form[{pn},{qn}]"),
            "Radul cocycle as a residue",
            1e-8,
            move || {
                let a = word_to_band(d, &wa)?;
                let b = word_to_band(d, &wb)?;
                Ok((
                    radul(&a, &b, &q, &eng)?,
                    radul_residue_form(&a, &b, &q, &eng)?,
                ))
            },
        ));
    }

    let mut rng = cfg.rng(5);
    for (pn, wa, wb) in pairs.iter().cloned().step_by(4) {
        out.push(check(
            format!("radul.coboundary_of_trace[{pn}]"),
            "Radul cocycle is the coboundary of the weighted trace",
            1e-12,
            move || {
                let a = word_to_band(d, &wa)?;
                let b = word_to_band(d, &wb)?;
                let q = DiagonalWeight::laplacian();
                let lhs = weighted_trace_cochain(&q, eng)
                    .coboundary()?
                    .eval(&[a.clone(), b.clone()])?;
                Ok((lhs, radul_cochain(&q, eng).eval(&[a, b])?))
            },
        ));
    }
    for i in 0..5 {
        let mut ops: Vec<BlockBandOperator> = (0..3)
            .map(|_| BlockBandOperator::multiplication(d, rand_poly(&mut rng, d, 1)))
            .collect();
        let ops2 = ops.clone();
        ops[0] = ops[0]
            .compose(&BlockBandOperator::d0(d))
            .expect("same block size");
        out.push(check(
            format!("radul.cocycle[{i}]"),
            "Radul cocycle is closed",
            1e-9,
            move || {
                let c = radul_cochain(&DiagonalWeight::laplacian(), eng).coboundary()?;
                Ok((c.eval(&ops)?, re(0.0)))
            },
        ));
        let cochain = random_cochain(&mut rng, d);
        out.push(check(
            format!("radul.delta_squared[{i}]"),
            "coboundary squares to zero",
            1e-12,
            move || Ok((cochain.coboundary()?.coboundary()?.eval(&ops2)?, re(0.0))),
        ));
    }

    for (i, (pn, q1, q2)) in weight_pairs().into_iter().enumerate() {
        for j in 0..2 {
            let (name, wa, wb) =
                pairs[(pairs.len() - 1 - 2 * i - j) * (1 + j) % pairs.len()].clone();
            let (q1, q2) = (q1.clone(), q2.clone());
            out.push(check(
                format!("radul.weight_change[{pn},{name}]"),
                "Radul cocycles for two weights differ by a coboundary",
                1e-8,
                move || {
                    let a = word_to_band(d, &wa)?;
                    let b = word_to_band(d, &wb)?;
                    let lhs = radul(&a, &b, &q1, &eng)? - radul(&a, &b, &q2, &eng)?;
                    let rhs = log_difference_residue(&q1, &q2, eng)
                        .coboundary()?
                        .eval(&[a, b])?
                        * (-1.0 / q1.order());
                    Ok((lhs, rhs))
                },
            ));
        }
    }
    out
}

/// Linear functional `A ↦ Σ tr(W_{k,n} A_{k,n})` over a window of band entries.
pub fn random_cochain(rng: &mut ChaCha8Rng, d: usize) -> Cochain<BlockBandOperator> {
    let weights: Vec<(i64, i64, CMat)> = (-2..=2)
        .flat_map(|k| (-3..=3).map(move |n| (k, n)))
        .map(|(k, n)| (k, n, rand_mat(rng, d)))
        .collect();
    Cochain::new(
        1,
        "random window functional",
        move |x: &[BlockBandOperator]| {
            Ok(weights
                .iter()
                .map(|(k, n, w)| (w * x[0].entry(*k, *n)).trace())
                .sum())
        },
    )
}

// ---------------------------------------------------------------- schwinger

fn mult_pairs(
    cfg: &SuiteConfig,
    salt: u64,
    count: usize,
) -> Vec<(BlockBandOperator, BlockBandOperator)> {
    let d = cfg.d();
    let mut rng = cfg.rng(salt);
    (0..count)
        .map(|i| {
            let deg = 1 + (i as i64 % 3);
            (
                BlockBandOperator::multiplication(d, rand_poly(&mut rng, d, deg)),
                BlockBandOperator::multiplication(d, rand_poly(&mut rng, d, deg)),
            )
        })
        .collect()
}

/// Pairs outside the restricted algebra, of positive order.
fn unrestricted_pairs(cfg: &SuiteConfig) -> Vec<(BlockBandOperator, BlockBandOperator)> {
    let d = cfg.d();
    let dd = cfg.dirac();
    let mut rng = cfg.rng(6);
    let z = |k: i64| BlockBandOperator::multiplication(d, [(k, CMat::identity(d, d))]);
    let d0 = BlockBandOperator::d0(d);
    let eps = dd.epsilon();
    let first = (
        eps.compose(&z(1)).unwrap().compose(&d0).unwrap(),
        z(-1).compose(&d0).unwrap(),
    );
    let mut out = vec![first];
    for _ in 0..4 {
        let f = BlockBandOperator::multiplication(d, rand_poly(&mut rng, d, 2));
        let g = BlockBandOperator::multiplication(d, rand_poly(&mut rng, d, 2));
        out.push((
            eps.compose(&f).unwrap().compose(&d0).unwrap(),
            g.compose(&d0).unwrap().compose(&d0).unwrap(),
        ));
    }
    out
}

fn schwinger_suite(cfg: &SuiteConfig) -> Vec<Check> {
    let dd = Arc::new(cfg.dirac());
    let mut out = Vec::new();
    for (i, (a, b)) in mult_pairs(cfg, 7, 10).into_iter().enumerate() {
        let (a, b) = (Arc::new(a), Arc::new(b));
        let (a1, b1, dd1) = (a.clone(), b.clone(), dd.clone());
        out.push(check(
            format!("schwinger.finite_rank[{i}]"),
            "Schwinger cocycle equals the finite-rank trace",
            1e-12,
            move || {
                Ok((
                    schwinger(&a1, &b1, &dd1)?,
                    schwinger_finite(&a1, &b1, &dd1)?,
                ))
            },
        ));
        let (a1, b1, dd1) = (a.clone(), b.clone(), dd.clone());
        out.push(check(
            format!("schwinger.antisymmetry[{i}]"),
            "Schwinger cocycle is antisymmetric",
            1e-12,
            move || Ok((schwinger(&a1, &b1, &dd1)?, -schwinger(&b1, &a1, &dd1)?)),
        ));
        let (a1, b1, dd1) = (a.clone(), b.clone(), dd.clone());
        out.push(check(
            format!("schwinger.obstruction[{i}]"),
            "obstruction residue on the restricted algebra",
            1e-12,
            move || Ok((obstruction_residue(&a1, &b1, &dd1)?, re(0.0))),
        ));
        let (a1, b1, dd1) = (a.clone(), b.clone(), dd.clone());
        out.push(check(
            format!("schwinger.signed_trace_cocycle[{i}]"),
            "mean signed-trace cocycle against the Schwinger cocycle",
            1e-9,
            move || Ok((c_tr_bar(&a1, &b1, &dd1)?, schwinger(&a1, &b1, &dd1)?)),
        ));
    }

    for (i, (a, b)) in unrestricted_pairs(cfg).into_iter().enumerate() {
        let (a, b) = (Arc::new(a), Arc::new(b));
        let (a1, b1, dd1) = (a.clone(), b.clone(), dd.clone());
        out.push(check(
            format!("schwinger.defect[{i}]"),
            "symmetric part of the signed-trace cocycle as a residue",
            1e-8,
            move || {
                let lhs = c_tr(&a1, &b1, &dd1)? + c_tr(&b1, &a1, &dd1)?;
                Ok((lhs, -obstruction_residue(&a1, &b1, &dd1)?))
            },
        ));
        let (a1, b1, dd1) = (a.clone(), b.clone(), dd.clone());
        out.push(check(
            format!("schwinger.exchange[{i}]"),
            "exchange of the two signed-trace cocycles",
            1e-8,
            move || {
                let lhs = c_tr(&b1, &a1, &dd1)? + c_tr_tilde(&a1, &b1, &dd1)?;
                let comm = dd1.epsilon().commutator(&b1.compose(&a1)?)?;
                Ok((lhs, weighted_trace(&comm, &dd1.weight, &dd1.cfg)?))
            },
        ));
    }

    for (i, (a, b)) in mult_pairs(cfg, 8, 5).into_iter().enumerate() {
        let dd1 = dd.clone();
        let dd2 = dd.clone();
        let dd3 = dd.clone();
        let (a2, b2) = (a.clone(), b.clone());
        let (a3, b3) = (a.clone(), b.clone());
        out.push(check(
            format!("schwinger.j_commutator[{i}]"),
            "commutator of the sign with the j-embedding",
            1e-12,
            move || {
                let c = dd1.block(&a, Quadrant::MinusPlus);
                let j = j_embed(&c, &dd1)?;
                let lhs = dd1.epsilon().commutator(&j)?;
                let rhs = c.add(&c.adjoint())?.scale(re(-2.0));
                Ok((re(lhs.max_entry_diff(&rhs, 16)), re(0.0)))
            },
        ));
        out.push(check(
            format!("schwinger.j_pullback[{i}]"),
            "Schwinger cocycle pulled back along the j-embedding",
            1e-10,
            move || {
                let ca = dd2.block(&a2, Quadrant::MinusPlus);
                let cb = dd2.block(&b2, Quadrant::MinusPlus);
                let lhs = mean_schwinger(&j_embed(&ca, &dd2)?, &j_embed(&cb, &dd2)?, &dd2)?;
                let op = ca
                    .adjoint()
                    .compose(&cb)?
                    .sub(&cb.adjoint().compose(&ca)?)?;
                Ok((lhs, weighted_trace(&op, &dd2.weight, &dd2.cfg)? * 2.0))
            },
        ));
        out.push(check(
            format!("schwinger.j_symplectic[{i}]"),
            "Schwinger pull-back against the symplectic form",
            1e-10,
            move || {
                let ca = dd3.block(&a3, Quadrant::MinusPlus);
                let cb = dd3.block(&b3, Quadrant::MinusPlus);
                let lhs = mean_schwinger(&j_embed(&ca, &dd3)?, &j_embed(&cb, &dd3)?, &dd3)?;
                Ok((lhs, omega_d(&ca, &cb, &dd3)? * C64::new(0.0, 2.0)))
            },
        ));
    }
    out
}

// ---------------------------------------------------------------- lambda

fn lambda_suite(cfg: &SuiteConfig) -> Vec<Check> {
    let alg = cfg.algebra.clone();
    let d = cfg.d();
    let dd = Arc::new(cfg.dirac());
    let mut out = Vec::new();
    for n in 1..=5i64 {
        for a in 0..d {
            for b in 0..d {
                let (alg, dd) = (alg.clone(), dd.clone());
                out.push(check(
                    format!("lambda.formula[n={n},a={a},b={b}]"),
                    "lambda cocycle on adjoint monomials",
                    1e-12,
                    move || {
                        let x = BlockBandOperator::ad(&mono(&alg, n, a));
                        let y = BlockBandOperator::ad(&mono(&alg, -n, b));
                        let k = alg.killing_inner(&alg.basis(a), &alg.basis(b))?;
                        Ok((lambda_d(&x, &y, &dd)?, k * n as f64))
                    },
                ));
            }
        }
    }
    for (n, p) in [(1i64, 2i64), (2, 1), (3, 5), (4, 2)] {
        for a in 0..d.min(2) {
            let (alg, dd) = (alg.clone(), dd.clone());
            out.push(check(
                format!("lambda.off_diagonal[n={n},p={p},a={a}]"),
                "lambda cocycle on mismatched modes",
                1e-12,
                move || {
                    let x = BlockBandOperator::ad(&mono(&alg, n, a));
                    let y = BlockBandOperator::ad(&mono(&alg, -p, a));
                    Ok((lambda_d(&x, &y, &dd)?, re(0.0)))
                },
            ));
        }
    }

    let mut rng = cfg.rng(9);
    for i in 0..10 {
        let xs: Vec<LoopElement> = (0..3)
            .map(|_| rand_loop(&mut rng, &alg, 2, false))
            .collect();
        let dd = dd.clone();
        out.push(check(
            format!("lambda.closedness[{i}]"),
            "pulled-back lambda cocycle is closed",
            1e-12,
            move || Ok((closedness_lambda(&xs[0], &xs[1], &xs[2], &dd)?, re(0.0))),
        ));
    }

    let mut rng = cfg.rng(10);
    let gram = CMat::from_fn(d, d, |i, j| re(alg.killing_gram()[(i, j)]));
    let plus_count = match cfg.polarization {
        Polarization::KernelPlus => 0,
        Polarization::KernelExcluded => 1,
    };
    for i in 0..20 {
        let deg = 1 + (i as i64 % 6);
        let x = rand_loop(&mut rng, &alg, deg, false);
        let (alg, dd, gram) = (alg.clone(), dd.clone(), gram.clone());
        out.push(check(
            format!("lambda.hs_identity[{i}]"),
            "Hilbert-Schmidt norm of the off-diagonal adjoint block",
            1e-12,
            move || {
                let blk = dd.block(&BlockBandOperator::ad(&x), Quadrant::PlusMinus);
                let lhs = match blk.hs_norm_squared(Some(&gram), dd.cfg.depth)? {
                    HsNorm::Finite(v) => v,
                    HsNorm::Infinite => f64::INFINITY,
                };
                let rhs: f64 = x
                    .modes()
                    .filter(|(k, _)| *k > 0)
                    .map(|(k, a)| (k - plus_count) as f64 * alg.norm_sqr(a))
                    .sum();
                Ok((re(lhs), re(rhs)))
            },
        ));
    }
    out
}

// ---------------------------------------------------------------- loop geometry

fn ricci_pairs(alg: &Arc<LieAlgebraData>) -> Vec<(&'static str, LoopElement, LoopElement)> {
    let d = alg.dim();
    let e = |n: i64, i: usize| mono(alg, n, i % d);
    let x = e(1, 0).add(&e(-1, 0)).unwrap();
    let y = e(1, 0)
        .add(&e(-1, 0))
        .unwrap()
        .add(&e(2, 1))
        .unwrap()
        .add(&e(-2, 1))
        .unwrap();
    vec![("xx", x.clone(), x.clone()), ("xy", x, y)]
}

fn loopgeom_suite(cfg: &SuiteConfig) -> Vec<Check> {
    let alg = cfg.algebra.clone();
    let d = cfg.d();
    let mut out = Vec::new();

    {
        let g = cfg.geometry(1.0);
        let alg = alg.clone();
        out.push(check(
            "loopgeom.theta_constant",
            "connection of a constant loop on the constant modes",
            1e-12,
            move || {
                let th = theta_s(&mono(&alg, 0, 0), &g)?;
                let half = alg.ad_matrix(&alg.basis(0)) * re(0.5);
                Ok((re((th.entry(0, 0) - half).norm()), re(0.0)))
            },
        ));
    }
    let mut rng = cfg.rng(11);
    for s in [0.5, 1.0, 1.5] {
        let g = cfg.geometry(s);
        let u = rand_loop(&mut rng, &alg, 2, true);
        out.push(check(
            format!("loopgeom.theta_band[s={s}]"),
            "Levi-Civita connection as a band operator",
            1e-12,
            move || {
                let th = theta_s(&u, &g)?;
                let mut worst = 0.0f64;
                for m in -6..=6 {
                    for i in 0..d {
                        let w = mono(&g.algebra, m, i);
                        for (k, v) in theta_apply(&u, &w, &g)?.modes() {
                            let col = th.entry(k - m, m).column(i).into_owned();
                            worst = worst.max((col - v).norm());
                        }
                    }
                }
                Ok((re(worst), re(0.0)))
            },
        ));
    }

    for s in [0.5, 1.0, 1.5, 2.0] {
        for (pn, x, y) in ricci_pairs(&alg) {
            let g = cfg.geometry(s);
            out.push(check(
                format!("loopgeom.ricci_paths[s={s},{pn}]"),
                "Ricci curvature by zeta regularization and by truncation",
                1e-8,
                move || Ok((ricci(&x, &y, &g)?, ricci_truncated(&x, &y, &g)?)),
            ));
        }
    }
    for s in [0.3, 0.5, 1.0, 1.5, 2.0] {
        for (pn, x, y) in ricci_pairs(&alg) {
            let g = cfg.geometry(s);
            out.push(check(
                format!("loopgeom.riemann_residue[s={s},{pn}]"),
                "residue of the Riemann curvature operator",
                1e-8,
                move || Ok((riemann_residue(&x, &y, &g)?, re(0.0))),
            ));
        }
    }
    for s in [1.0, 2.0] {
        for (pn, x, y) in ricci_pairs(&alg) {
            let g = cfg.geometry(s);
            out.push(check(
                format!("loopgeom.odd_class_ricci[s={s},{pn}]"),
                "Ricci curvature across odd-class weights",
                1e-8,
                move || {
                    let q2 = DiagonalWeight::even_poly(&[1.0, 1.0])?;
                    Ok((ricci(&x, &y, &g)?, ricci_with_weight(&x, &y, &q2, &g)?))
                },
            ));
        }
    }

    let m = cfg.truncation;
    let (x, y) = {
        let p = ricci_pairs(&alg);
        (p[1].1.clone(), p[1].2.clone())
    };
    for (s, target, fibre) in [
        (0.5, -1.0, false),
        (0.5, -2.0, true),
        (0.75, -2.0, true),
        (0.3, -1.2, true),
        (2.0, -2.0, true),
    ] {
        let g = cfg.geometry(s);
        let (x, y) = (x.clone(), y.clone());
        out.push(check(
            format!(
                "loopgeom.order_fit[s={s},{}]",
                if fibre { "trace" } else { "full" }
            ),
            "decay order of the Riemann curvature",
            0.05,
            move || {
                let r = riemann_operator(&x, &y, &g)?;
                let r = if fibre { r.fibre_trace() } else { r };
                Ok((re(fit_order(&r, m)), re(target)))
            },
        ));
    }
    for (fibre, target) in [(false, -1.0), (true, -2.0)] {
        let g = cfg.geometry(0.5);
        let alg = alg.clone();
        out.push(check(
            format!(
                "loopgeom.order_fit[chern,{}]",
                if fibre { "trace" } else { "full" }
            ),
            "decay order of the Kähler curvature",
            0.05,
            move || {
                let b = if fibre { 0 } else { 1 % alg.dim() };
                let om = complex_curvature(&mono(&alg, 3, 0), &mono(&alg, -3, b), &g)?;
                let om = if fibre { om.fibre_trace() } else { om };
                Ok((re(fit_order(&om, m)), re(target)))
            },
        ));
    }

    for n in 1..=3i64 {
        let mut g = cfg.geometry(0.5);
        g.polarization = Polarization::KernelExcluded;
        let alg = alg.clone();
        out.push(check(
            format!("loopgeom.toeplitz[n={n}]"),
            "Kähler connection through Toeplitz operators",
            1e-12,
            move || {
                let u = mono(&alg, n, 0);
                let e1 = phi(&u, &g)?.max_entry_diff(&conjugated_toeplitz(&u, g.polarization)?, 40);
                let v = mono(&alg, -n, 1 % alg.dim());
                let e2 = phi(&v, &g)?.max_entry_diff(&toeplitz(&v, g.polarization), 40);
                Ok((re(e1.max(e2)), re(0.0)))
            },
        ));
    }

    {
        let g = cfg.geometry(0.5);
        let alg = alg.clone();
        out.push(check(
            "loopgeom.trace_variation",
            "trace variation along the connection",
            1e-7,
            move || {
                let th = theta_s(&mono(&alg, 1, 0), &g)?;
                let om = curvature_s(&mono(&alg, 1, 0), &mono(&alg, -1, 1 % alg.dim()), &g)?;
                covariant_trace_variation(&th, &om, &g.weight, &g.engine)
            },
        ));
        let g = cfg.geometry(0.5);
        let alg = cfg.algebra.clone();
        out.push(check(
            "loopgeom.trace_variation_self",
            "trace variation along the connection",
            1e-7,
            move || {
                let th = theta_s(&mono(&alg, 1, 0), &g)?;
                covariant_trace_variation(&th, &th, &g.weight, &g.engine)
            },
        ));
    }
    out
}

// ---------------------------------------------------------------- chern

/// Check tag, anchor and the pair of chain members it compares.
type Link = (
    &'static str,
    &'static str,
    fn(&ChernIdentities) -> (C64, C64),
);

fn chern_suite(cfg: &SuiteConfig) -> Vec<Check> {
    let alg = cfg.algebra.clone();
    let d = cfg.d();
    let mut out = Vec::new();
    for n in 1..=5i64 {
        for a in 0..d {
            for b in 0..d {
                let links: [Link; 3] = [
                    (
                        "first_chern_radul",
                        "first Chern form against the Radul cocycle of the connection",
                        |i| (i.first_chern, i.radul_phi),
                    ),
                    (
                        "radul_lambda",
                        "Radul cocycle of the connection against the lambda cocycle",
                        |i| (i.radul_phi, i.lambda),
                    ),
                    (
                        "lambda_symplectic",
                        "lambda cocycle against the Kähler form",
                        |i| (i.lambda, i.minus_i_omega),
                    ),
                ];
                for (tag, anchor, pick) in links {
                    let g = cfg.geometry(0.5);
                    let alg = alg.clone();
                    out.push(check(
                        format!("chern.{tag}[n={n},a={a},b={b}]"),
                        anchor,
                        1e-6,
                        move || {
                            Ok(pick(&chern_identities(
                                &mono(&alg, n, a),
                                &mono(&alg, -n, b),
                                &g,
                            )?))
                        },
                    ));
                }
                let g = cfg.geometry(0.5);
                let alg2 = alg.clone();
                out.push(check(
                    format!("chern.truncated[n={n},a={a},b={b}]"),
                    "first Chern form by truncation and extrapolation",
                    1e-5,
                    move || {
                        let x = mono(&alg2, n, a);
                        let y = mono(&alg2, -n, b);
                        Ok((
                            first_chern_truncated(&x, &y, &g)?,
                            x.symplectic(&y)? * C64::new(0.0, -1.0),
                        ))
                    },
                ));
            }
        }
    }
    for n in -2..=2i64 {
        for i in 0..2usize {
            let g = cfg.geometry(0.5);
            let alg = alg.clone();
            out.push(check(
                format!("chern.phi_traceless[n={n},a={i}]"),
                "weighted trace of the Kähler connection",
                1e-9,
                move || {
                    let p = phi(&mono(&alg, n, i % alg.dim()), &g)?;
                    Ok((weighted_trace(&p, &g.weight, &g.engine)?, re(0.0)))
                },
            ));
        }
    }
    for n in 1..=3i64 {
        let g = cfg.geometry(0.5);
        let alg = alg.clone();
        out.push(check(
            format!("chern.weight_independence[n={n}]"),
            "first Chern form across weights",
            1e-8,
            move || {
                let x = mono(&alg, n, 0);
                let y = mono(&alg, -n, 0);
                let q2 = DiagonalWeight::abs_power(1.0, 2.0)?;
                Ok((
                    first_chern_with_weight(&x, &y, &g.weight, &g)?,
                    first_chern_with_weight(&x, &y, &q2, &g)?,
                ))
            },
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_rejected() {
        let cfg = SuiteConfig::default();
        assert_eq!(
            run_suite("nope", &cfg),
            Err(Error::UnknownSuite("nope".into()))
        );
    }

    #[test]
    fn traces_suite_contains_constant_identity_check() {
        let reports = run_suite("traces", &SuiteConfig::default()).unwrap();
        let r = reports
            .iter()
            .find(|r| r.check_id.starts_with("traces.constant_identity"))
            .unwrap();
        assert!(r.passed());
    }

    #[test]
    fn lambda_suite_passes() {
        let reports = run_suite("lambda", &SuiteConfig::default()).unwrap();
        assert!(reports.len() >= 15);
        for r in &reports {
            assert!(r.passed(), "{r:?}");
        }
    }
}
