use coha_core::cblegs::{attach_legs, is_generic, lambda_from_eigenvalues, sample_generic, EigenData};
use coha_core::exactalg::Rational;
use coha_core::{DimVector, Quiver};
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn half_quivers() -> Vec<Quiver> {
    vec![
        Quiver::loops(0),
        Quiver::loops(1),
        Quiver::from_arrows(2, &[(0, 1, 1)]).unwrap(),
        Quiver::from_arrows(2, &[(0, 1, 2)]).unwrap(),
    ]
}

fn gammas(q0: &Quiver) -> Vec<DimVector> {
    let bound = DimVector::new(vec![4; q0.vertex_count()]);
    DimVector::all_below(&bound).into_iter().filter(|g| (1..=4).contains(&g.total())).collect()
}

#[test]
fn lambda_pairs_to_zero_with_tilde_gamma() {
    for q0 in half_quivers() {
        let q = q0.double();
        let gs = gammas(&q0);
        for seed in 0..100u64 {
            let gamma = &gs[seed as usize % gs.len()];
            let t = sample_generic(&q, gamma, seed).unwrap();
            let legs = attach_legs(&q, &q0, gamma).unwrap();
            assert_eq!(legs.tilde_quiver, legs.half_quiver.double());
            let lambda = lambda_from_eigenvalues(&t, &legs).unwrap();
            let pairing = legs
                .tilde_gamma
                .entries()
                .iter()
                .zip(&lambda)
                .fold(Rational::zero(), |acc, (&g, l)| acc + Rational::from_integer(g.into()) * l);
            assert!(pairing.is_zero());
        }
    }
}

#[test]
fn genericity_is_permutation_invariant_and_certified() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for q0 in half_quivers() {
        let q = q0.double();
        for gamma in gammas(&q0) {
            for _ in 0..10 {
                // Small range so that failures are common.
                let mut t: Vec<Vec<Rational>> = gamma
                    .entries()
                    .iter()
                    .map(|&g| (0..g).map(|_| Rational::from_integer(rng.gen_range(-2..=2).into())).collect())
                    .collect();
                let tr = t.iter().flatten().fold(Rational::zero(), |a, x| a + x);
                let last = t.iter_mut().rev().find(|v| !v.is_empty()).unwrap();
                *last.last_mut().unwrap() -= tr;
                let data = EigenData::new(t.clone());
                let report = is_generic(&data, &q, &gamma).unwrap();
                match &report.witness {
                    Some(w) => assert!(!report.generic && w.replay(&data)),
                    None => assert!(report.generic),
                }
                for v in t.iter_mut() {
                    v.shuffle(&mut rng);
                }
                let shuffled = is_generic(&EigenData::new(t), &q, &gamma).unwrap();
                assert_eq!(shuffled.generic, report.generic);
            }
        }
    }
}

#[test]
fn single_eigenvalue_is_generic() {
    let q0 = Quiver::from_arrows(2, &[(0, 1, 1)]).unwrap();
    let t = EigenData::new(vec![vec![Rational::zero()], vec![]]);
    assert!(is_generic(&t, &q0.double(), &DimVector::new(vec![1, 0])).unwrap().generic);
}
