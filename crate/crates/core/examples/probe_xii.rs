//! Scratch probe: true expansion of the diagonal symmetrized generators.
use qlie_core::qlie::{AlgebraKind, QLieBasis, SymbolicFamilies};
use qlie_core::rmat;
use qlie_core::scalar::Scalar;
use qlie_core::uq::{self, AlgebraElement, Rep};

fn main() {
    for n in 2..=3usize {
        let basis = QLieBasis::new(n, AlgebraKind::Gl).unwrap();
        let elements = basis.symbolic_elements();
        let fams = SymbolicFamilies::new(n);
        let mut casimir_t = AlgebraElement::zero(n);
        let mut casimir_v = AlgebraElement::zero(n);
        for i in 1..=n {
            let g = rmat::casimir_coefficient(n, i);
            casimir_t = casimir_t.sum(&fams.t[(i - 1) * n + (i - 1)].scale(&g));
            casimir_v = casimir_v.sum(&fams.v[(i - 1) * n + (i - 1)].scale(&g));
        }
        let pi = Rep::vector(n);
        let pipi = Rep::tensor(&pi, &pi).unwrap();
        let reps = [pi, pipi];
        for i in 1..=n {
            let half = Scalar::rational(1, 2);
            let mut xii = fams.t[(i - 1) * n + (i - 1)]
                .sum(&fams.v[(i - 1) * n + (i - 1)])
                .scale(&half);
            let w = Scalar::rational(1, 2) * Scalar::q_pow(i as i64);
            xii = xii.sum(&casimir_t.sum(&casimir_v).scale(&-w));
            match uq::expand_in_span(&xii, &elements, &reps) {
                Ok(coeffs) => {
                    print!("n={n} true X_{i}{i} =");
                    for (k, c) in coeffs.iter().enumerate() {
                        if !c.is_zero() {
                            print!("  ({c}) {}", basis.labels()[k]);
                        }
                    }
                    println!();
                }
                Err(e) => println!("n={n} i={i}: {e}"),
            }
        }
        for i in 1..=n {
            print!("n={n} disp X_{i}{i} =");
            for (l, c) in qlie_core::qlie::xii_expansion(i, n) {
                print!("  ({c}) {l}");
            }
            println!();
        }
    }
}
