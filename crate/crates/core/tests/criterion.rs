use coha_core::dtseries::dt_report;
use coha_core::roots::{dt_nonvanishing, nonvanishing_certificate, RootKind};
use coha_core::{DimVector, Quiver};

fn half_quivers() -> Vec<(&'static str, Quiver)> {
    vec![
        ("point", Quiver::loops(0)),
        ("loop", Quiver::loops(1)),
        ("a2", Quiver::from_arrows(2, &[(0, 1, 1)]).unwrap()),
        ("kronecker", Quiver::from_arrows(2, &[(0, 1, 2)]).unwrap()),
    ]
}

#[test]
fn roots_decide_nonvanishing() {
    for (name, q0) in half_quivers() {
        let n = q0.vertex_count();
        let bound = DimVector::new(vec![4; n]);
        let (report, _) = dt_report(&q0.double(), &bound, Some(4), 30).unwrap();
        for entry in &report.omega {
            if entry.gamma.is_zero() {
                continue;
            }
            let root = dt_nonvanishing(&q0, &entry.gamma).unwrap();
            assert_eq!(root, entry.nonvanishing, "{name} γ={} window {:?}", entry.gamma, entry.window);
        }
    }
}

#[test]
fn loop_quiver_gives_imaginary_roots() {
    for n in 1..=4 {
        let cert = nonvanishing_certificate(&Quiver::loops(1), &DimVector::new(vec![n])).unwrap();
        assert_eq!(cert.kind, RootKind::Imaginary);
    }
}
