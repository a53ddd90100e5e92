use std::collections::HashMap;
use std::sync::Arc;

use coha_core::coha::{basis, twist_sign, CohaElement, ShuffleKernel};
use coha_core::exactalg::{rat, ColoredPoly};
use coha_core::{DimVector, Quiver, SignForm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CASES: usize = 200;
/// Cap on `|γ₁ + γ₂ + γ₃|` for associativity triples.
const TRIPLE_TOTAL: u32 = 6;

fn suite() -> Vec<(&'static str, Arc<Quiver>)> {
    vec![
        ("S1", Quiver::loops(0)),
        ("S2", Quiver::loops(2)),
        ("S3", Quiver::from_arrows(2, &[(0, 1, 1), (1, 0, 1)]).unwrap()),
        ("S4", Quiver::from_arrows(2, &[(0, 1, 2), (1, 0, 2)]).unwrap()),
    ]
    .into_iter()
    .map(|(n, q)| (n, Arc::new(q)))
    .collect()
}

struct Products {
    quiver: Arc<Quiver>,
    psi: SignForm,
    kernels: HashMap<(DimVector, DimVector), ShuffleKernel>,
}

impl Products {
    fn new(quiver: Arc<Quiver>) -> Self {
        let psi = quiver.sign_form().unwrap();
        Products { quiver, psi, kernels: HashMap::new() }
    }

    fn untwisted(&mut self, a: &ColoredPoly, b: &ColoredPoly) -> ColoredPoly {
        let key = (a.gamma().clone(), b.gamma().clone());
        let q = self.quiver.clone();
        let kern = self
            .kernels
            .entry(key)
            .or_insert_with(|| ShuffleKernel::new(q, a.gamma(), b.gamma()).unwrap());
        kern.apply(a, b).expect("polynomiality certificate")
    }

    fn twisted(&mut self, a: &ColoredPoly, b: &ColoredPoly) -> ColoredPoly {
        let s = twist_sign(&self.psi, a.gamma(), b.gamma());
        self.untwisted(a, b).scale(&s)
    }
}

fn random_gamma(rng: &mut ChaCha8Rng, n: usize, max_total: u32) -> DimVector {
    loop {
        let g: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=max_total)).collect();
        let t: u32 = g.iter().sum();
        if (1..=max_total).contains(&t) {
            return DimVector::new(g);
        }
    }
}

/// A non-zero homogeneous element of polynomial degree at most 3, with its `k`.
fn random_element(rng: &mut ChaCha8Rng, q: &Arc<Quiver>) -> (ColoredPoly, i64) {
    random_element_within(rng, q, 3)
}

fn random_element_within(rng: &mut ChaCha8Rng, q: &Arc<Quiver>, max_total: u32) -> (ColoredPoly, i64) {
    let gamma = random_gamma(rng, q.vertex_count(), max_total.min(3));
    let chi = q.euler_form(&gamma, &gamma).unwrap();
    let k = chi + 2 * rng.gen_range(0..=3);
    let b = basis(q, &gamma, k).unwrap();
    loop {
        let mut p = ColoredPoly::zero(&gamma);
        for e in &b {
            let c = rng.gen_range(-3..=3);
            p = p.add(&e.poly().scale(&rat(c))).unwrap();
        }
        if !p.is_zero() {
            let el = CohaElement::new(q.clone(), p.clone()).unwrap();
            assert_eq!(el.bidegree(), Some((gamma.clone(), k)));
            return (p, k);
        }
    }
}

fn sign(odd: bool) -> i64 {
    if odd {
        -1
    } else {
        1
    }
}

#[test]
fn associativity() {
    for (name, q) in suite() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut pr = Products::new(q.clone());
        for case in 0..CASES {
            let (a, _) = random_element_within(&mut rng, &q, TRIPLE_TOTAL - 2);
            let (b, _) = random_element_within(&mut rng, &q, TRIPLE_TOTAL - 1 - a.gamma().total());
            let (c, _) = random_element_within(&mut rng, &q, TRIPLE_TOTAL - a.gamma().total() - b.gamma().total());
            let ab = pr.untwisted(&a, &b);
            let bc = pr.untwisted(&b, &c);
            assert_eq!(pr.untwisted(&ab, &c), pr.untwisted(&a, &bc), "{name} case {case}");
            let ab = pr.twisted(&a, &b);
            let bc = pr.twisted(&b, &c);
            assert_eq!(pr.twisted(&ab, &c), pr.twisted(&a, &bc), "{name} twisted case {case}");
        }
    }
}

#[test]
fn untwisted_supercommutativity() {
    for (name, q) in suite() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut pr = Products::new(q.clone());
        for case in 0..CASES {
            let (a, _) = random_element(&mut rng, &q);
            let (b, _) = random_element(&mut rng, &q);
            let chi = q.euler_form(a.gamma(), b.gamma()).unwrap();
            let ab = pr.untwisted(&a, &b);
            let ba = pr.untwisted(&b, &a).scale(&rat(sign(chi.rem_euclid(2) == 1)));
            assert_eq!(ab, ba, "{name} case {case}");
        }
    }
}

#[test]
fn twisted_supercommutativity() {
    for (name, q) in suite() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut pr = Products::new(q.clone());
        for case in 0..CASES {
            let (a, k1) = random_element(&mut rng, &q);
            let (b, k2) = random_element(&mut rng, &q);
            let ab = pr.twisted(&a, &b);
            let ba = pr.twisted(&b, &a).scale(&rat(sign((k1 * k2).rem_euclid(2) == 1)));
            assert_eq!(ab, ba, "{name} case {case}");
        }
    }
}

#[test]
fn degrees_add() {
    for (name, q) in suite() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let mut pr = Products::new(q.clone());
        for _ in 0..50 {
            let (a, k1) = random_element(&mut rng, &q);
            let (b, k2) = random_element(&mut rng, &q);
            let p = CohaElement::new(q.clone(), pr.untwisted(&a, &b)).unwrap();
            if let Some((g, k)) = p.bidegree() {
                assert_eq!(g, a.gamma() + b.gamma(), "{name}");
                assert_eq!(k, k1 + k2, "{name}");
            }
        }
    }
}
