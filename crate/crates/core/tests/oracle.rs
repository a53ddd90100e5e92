use std::sync::Arc;

use coha_core::dtseries::dt_report;
use coha_core::freeness::Freeness;
use coha_core::{DimVector, Quiver};

fn suite() -> Vec<(&'static str, Quiver)> {
    vec![
        ("S1", Quiver::loops(0)),
        ("S2", Quiver::loops(2)),
        ("S3", Quiver::from_arrows(2, &[(0, 1, 1), (1, 0, 1)]).unwrap()),
        ("S4", Quiver::from_arrows(2, &[(0, 1, 2), (1, 0, 2)]).unwrap()),
    ]
}

fn check(name: &str, q: Quiver, qtrunc: i64) {
    let n = q.vertex_count();
    let (_, pleth) = dt_report(&q, &DimVector::new(vec![4; n]), Some(4), qtrunc).unwrap();
    let mut fr = Freeness::new(Arc::new(q)).unwrap();
    for gamma in pleth.gammas() {
        if gamma.is_zero() {
            continue;
        }
        let (lo, hi) = pleth.window(&gamma).unwrap();
        if hi < lo {
            continue;
        }
        let lin = fr.prim_dims(&gamma, hi).unwrap();
        for k in lo..=hi {
            assert_eq!(lin.get(&gamma, k), pleth.get(&gamma, k), "{name} γ={gamma} k={k}");
        }
    }
}

#[test]
fn oracle_s1() { let (n, q) = suite().remove(0); check(n, q, 16); }
#[test]
fn oracle_s2() { let (n, q) = suite().remove(1); check(n, q, 16); }
#[test]
fn oracle_s3() { let (n, q) = suite().remove(2); check(n, q, 16); }
#[test]
fn oracle_s4() { let (n, q) = suite().remove(3); check(n, q, 16); }
