use lagmark::lattice::{self, Lattice2};
use lagmark::Quad;
use proptest::prelude::*;

fn q(s: &str) -> Quad {
    s.parse().unwrap()
}

fn surd() -> impl Strategy<Value = Quad> {
    (-10i64..10, 2i64..30, 1i64..5)
        .prop_filter("non-square", |(_, d, _)| {
            let r = (*d as f64).sqrt() as i64;
            r * r != *d
        })
        .prop_map(|(a, d, c)| Quad::from_parts(a.into(), 1.into(), d.into(), c.into()).unwrap())
}

fn unimodular() -> impl Strategy<Value = [[i64; 2]; 2]> {
    prop::collection::vec(0usize..2, 1..8).prop_map(|steps| {
        let mut m = [[1i64, 0], [0, 1]];
        for s in steps {
            m = if s == 0 {
                [[m[0][0] + m[0][1], m[0][1]], [m[1][0] + m[1][1], m[1][1]]]
            } else {
                [[m[0][0], m[0][1] + m[0][0]], [m[1][0], m[1][1] + m[1][0]]]
            };
        }
        m
    })
}

fn norm2(v: &(Quad, Quad)) -> f64 {
    v.0.to_f64().powi(2) + v.1.to_f64().powi(2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn reduction_is_basis_independent(a in surd(), m in unimodular()) {
        let x = Lattice2::unipotent(&a);
        let y = x.change_basis(m).unwrap();
        let rx = x.reduce().unwrap();
        let ry = y.reduce().unwrap();
        prop_assert_eq!(&rx.systole_sq, &ry.systole_sq);
        prop_assert!(norm2(&rx.b1) <= norm2(&rx.b2) + 1e-9);
        let dot = rx.b1.0.to_f64() * rx.b2.0.to_f64() + rx.b1.1.to_f64() * rx.b2.1.to_f64();
        prop_assert!(2.0 * dot.abs() <= norm2(&rx.b1) + 1e-9);
    }

    #[test]
    fn decomposition_recomposes(a in surd(), m in unimodular()) {
        let x = Lattice2::unipotent(&a).change_basis(m).unwrap();
        let d = lattice::decompose(&x).unwrap();
        let g = x.matrix();
        let gf = [[g[0][0].to_f64(), g[0][1].to_f64()], [g[1][0].to_f64(), g[1][1].to_f64()]];
        prop_assert!(lattice::same_lattice(gf, d.matrix(), 1e-6));
    }
}

#[test]
fn lattice_and_perron_agree_on_quadratic_irrationals() {
    let tol = lagmark::numeric::rational::rat(1, 1 << 40);
    for s in ["(1+sqrt(5))/2", "sqrt(2)", "sqrt(3)", "(3+sqrt(21))/6", "sqrt(7)", "(2+sqrt(10))/3"] {
        let a = q(s);
        let l = lattice::lagrange_via_lattice(&a, 100_000).unwrap();
        let p = lagmark::spectrum::lagrange_of_surd(&a, &tol).unwrap();
        assert!(l.estimate.overlaps(&p.value), "{s}: {} vs {}", l.estimate, p.value);
        assert!(l.tail_max <= l.running_max);
    }
}

#[test]
fn non_unimodular_input_is_rejected() {
    let two = Quad::from_int(2);
    assert!(Lattice2::new(two.clone(), Quad::from_int(0), Quad::from_int(0), two).is_err());
    assert!(Lattice2::identity().holonomy(2, 4).is_err());
}
