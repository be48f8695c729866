//! Dense truncations against the banded representation.

use wtrace::cocycles::{schwinger, schwinger_finite, DiracData, Polarization};
use wtrace::modes::BlockBandOperator;
use wtrace::traces::EngineConfig;
use wtrace::{CMat, C64};

fn mult(d: usize, seed: f64) -> BlockBandOperator {
    let blk = |k: i64| {
        CMat::from_fn(d, d, |i, j| {
            C64::new(
                (seed * (1 + i + 2 * j) as f64 + k as f64).sin(),
                (seed + k as f64 * 0.7 + i as f64).cos(),
            )
        })
    };
    BlockBandOperator::multiplication(d, (-2..=2).map(|k| (k, blk(k))))
}

#[test]
fn identity_truncates_to_identity() {
    let m = 6;
    let t = BlockBandOperator::identity(2).truncate(m);
    assert_eq!(t, CMat::identity(26, 26));
}

#[test]
fn sign_operator_truncation() {
    let d = 2;
    let t = BlockBandOperator::epsilon_sign(d).truncate(1);
    let mut expected = CMat::identity(3 * d, 3 * d);
    for i in 0..d {
        expected[(i, i)] = C64::new(-1.0, 0.0);
    }
    assert_eq!(t, expected);
}

#[test]
fn truncation_respects_products_away_from_the_boundary() {
    let d = 2;
    let a = mult(d, 0.3).compose(&BlockBandOperator::d0(d)).unwrap();
    let b = mult(d, 1.1);
    let m = 20;
    let exact = a.compose(&b).unwrap().truncate(m);
    let naive = a.truncate(m) * b.truncate(m);
    let width = (a.bandwidth() + b.bandwidth()) as usize * d;
    let size = exact.nrows();
    for r in 0..size {
        for c in 0..size {
            let inner = r >= width && c >= width && r < size - width && c < size - width;
            let diff = (exact[(r, c)] - naive[(r, c)]).norm();
            if inner {
                assert!(diff < 1e-12, "entry ({r}, {c}) differs by {diff}");
            }
        }
    }
}

#[test]
fn schwinger_matches_dense_trace() {
    let d = 2;
    let dd = DiracData::new(d, Polarization::KernelPlus, EngineConfig::default());
    let (a, b) = (mult(d, 0.4), mult(d, 2.3));
    let m = 10;
    let eps = BlockBandOperator::epsilon_sign(d).truncate(m);
    let (ta, tb) = (a.truncate(m), b.truncate(m));
    let ca = &eps * &ta - &ta * &eps;
    let cb = &eps * &tb - &tb * &eps;
    let dense = (&eps * ca * cb).trace() * 0.5;
    assert!((schwinger(&a, &b, &dd).unwrap() - dense).norm() < 1e-12);
    assert!((schwinger_finite(&a, &b, &dd).unwrap() - dense).norm() < 1e-12);
}
