//! Scratch probe: how the invariant directions sit inside the basis span.
use qlie_core::qlie::{AlgebraKind, QLieBasis, SymbolicFamilies};
use qlie_core::rmat;
use qlie_core::scalar::Scalar;
use qlie_core::uq::{self, AlgebraElement, Rep};

fn main() {
    for n in 2..=3usize {
        let basis = QLieBasis::new(n, AlgebraKind::Gl).unwrap();
        let elements = basis.symbolic_elements();
        let fams = SymbolicFamilies::new(n);
        let mut cas_t = AlgebraElement::zero(n);
        let mut cas_v = AlgebraElement::zero(n);
        for i in 1..=n {
            let g = rmat::casimir_coefficient(n, i);
            cas_t = cas_t.sum(&fams.t[(i - 1) * n + (i - 1)].scale(&g));
            cas_v = cas_v.sum(&fams.v[(i - 1) * n + (i - 1)].scale(&g));
        }
        let pi = Rep::vector(n);
        let pipi = Rep::tensor(&pi, &pi).unwrap();
        let reps = [pi, pipi];
        let show = |name: &str, x: &AlgebraElement| {
            match uq::expand_in_span(x, &elements, &reps) {
                Ok(coeffs) => {
                    print!("n={n} {name} =");
                    for (k, c) in coeffs.iter().enumerate() {
                        if !c.is_zero() {
                            print!("  ({c}) {}", basis.labels()[k]);
                        }
                    }
                    println!();
                }
                Err(e) => println!("n={n} {name}: {e}"),
            }
        };
        show("C", &cas_t);
        show("B", &cas_v);
        for i in 1..=n {
            let half = Scalar::rational(1, 2);
            let plain = fams.t[(i - 1) * n + (i - 1)]
                .sum(&fams.v[(i - 1) * n + (i - 1)])
                .scale(&half);
            show(&format!("(T_{i}{i}+V_{i}{i})/2"), &plain);
        }
    }
}
