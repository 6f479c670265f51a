//! Numerical R-matrices for the mixed representation pairs, built from the
//! universal R-matrix images, with their certificates.
//!
//! All bodies follow one convention: for representations `rho1`, `rho2`,
//! the body entry `(i, j, k, l)` is `(rho1_ik ⊗ rho2_jl)(R)` — first-out,
//! second-out, first-in, second-in. Images of the transposed universal
//! element are index permutations of plain images and are exposed through
//! the `transposed` flag where useful.
//!
//! The `pi pi*` body has a closed form; the `pi* rho` bodies come from the
//! first-leg evaluation of the universal element, whose matrix elements are
//! the rescaled units `Ê` weighted by `q^(i-k)` on the upper triangle.

use std::fmt;

use crate::linalg::{contract_pair, rank, solve_exact, LinalgError, Matrix, Tensor4};
use crate::scalar::Scalar;
use crate::uq::{self, Letter, Rep};

/// Which pair of representations a body belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RPair {
    PiPiStar,
    PiStarPi,
    PiStarPiStar,
}

impl fmt::Display for RPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RPair::PiPiStar => "pi_pistar",
            RPair::PiStarPi => "pistar_pi",
            RPair::PiStarPiStar => "pistar_pistar",
        };
        write!(f, "{s}")
    }
}

/// The bar involution on indices, `bar(i) = n + 1 - i` (1-based).
pub fn bar(n: usize, i: usize) -> usize {
    n + 1 - i
}

/// A labeled R-matrix body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RMatrix {
    pub pair: RPair,
    pub n: usize,
    /// True when this is the image of the transposed universal element.
    pub transposed: bool,
    pub body: Tensor4,
}

/// The closed-form `pi pi*` body:
/// `delta_ik delta_jl + delta_ij delta_kl ((q^-1 - 1) delta_ik - (q - q^-1) q^(k-i) [i > k])`.
pub fn r_pi_pistar(n: usize) -> RMatrix {
    assert!(n >= 2);
    let body = Tensor4::from_fn([n, n, n, n], |i0, j0, k0, l0| {
        let (i, j, k, l) = (i0 + 1, j0 + 1, k0 + 1, l0 + 1);
        let mut v = Scalar::zero();
        if i == k && j == l {
            v += &Scalar::one();
        }
        if i == j && k == l {
            if i == k {
                v += &(Scalar::q_pow(-1) - Scalar::one());
            } else if i > k {
                v -= &(Scalar::q_minus_qinv() * Scalar::q_pow(k as i64 - i as i64));
            }
        }
        v
    });
    RMatrix { pair: RPair::PiPiStar, n, transposed: false, body }
}

/// Second-leg representation choice for [`r_pistar_rho`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondLeg {
    Pi,
    PiStar,
}

/// Body of `(pi* ⊗ rho)(R)` (or of the transposed element): the first-leg
/// matrix elements of the universal R are `q^(i-k) Ê_ik` on `i <= k`, and
/// `q^(k-i) Ê_ik` on `k <= i` for the transposed element.
pub fn r_pistar_rho(n: usize, rho: SecondLeg, transposed: bool) -> RMatrix {
    assert!(n >= 2);
    let rep = match rho {
        SecondLeg::Pi => Rep::vector(n),
        SecondLeg::PiStar => Rep::twisted_dual(n),
    };
    let mut body = Tensor4::zeros([n, n, n, n]);
    for i in 1..=n {
        for k in 1..=n {
            let supported = if transposed { k <= i } else { i <= k };
            if !supported {
                continue;
            }
            let weight = if transposed {
                Scalar::q_pow(k as i64 - i as i64)
            } else {
                Scalar::q_pow(i as i64 - k as i64)
            };
            let img = rep.element_image(&uq::scaled_matrix_unit(n, i, k));
            for j in 1..=n {
                for l in 1..=n {
                    let v = img.at(j - 1, l - 1);
                    if v.is_zero() {
                        continue;
                    }
                    *body.at_mut(i - 1, j - 1, k - 1, l - 1) = &weight * v;
                }
            }
        }
    }
    let pair = match rho {
        SecondLeg::Pi => RPair::PiStarPi,
        SecondLeg::PiStar => RPair::PiStarPiStar,
    };
    RMatrix { pair, n, transposed, body }
}

pub fn r_pistar_pi(n: usize) -> RMatrix {
    r_pistar_rho(n, SecondLeg::Pi, false)
}

pub fn r_pistar_pistar(n: usize) -> RMatrix {
    r_pistar_rho(n, SecondLeg::PiStar, false)
}

/// Result of an intertwining check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntertwineReport {
    pub pass: bool,
    pub first_failure: Option<String>,
}

impl RMatrix {
    fn leg_reps(&self) -> (Rep, Rep) {
        match self.pair {
            RPair::PiPiStar => (Rep::vector(self.n), Rep::twisted_dual(self.n)),
            RPair::PiStarPi => (Rep::twisted_dual(self.n), Rep::vector(self.n)),
            RPair::PiStarPiStar => (Rep::twisted_dual(self.n), Rep::twisted_dual(self.n)),
        }
    }

    /// Check `R (rho1 ⊗ rho2)(Δ g) = (rho1 ⊗ rho2)(Δᵀ g) R` for every
    /// generator letter `g` (transposed bodies intertwine the other way
    /// around). Failure is data, not an error.
    pub fn check_intertwining(&self) -> IntertwineReport {
        let n = self.n;
        let (r1, r2) = self.leg_reps();
        let r = self.body.as_matrix();
        let mut gens: Vec<Letter> = Vec::new();
        for i in 1..n {
            gens.push(Letter::Raise(i));
            gens.push(Letter::Lower(i));
        }
        for i in 1..=n {
            gens.push(Letter::Cartan(i));
        }
        for g in gens {
            let legs = uq::coproduct_letter(n, &g);
            let mut delta = Matrix::zeros(r.rows(), r.cols());
            let mut delta_t = Matrix::zeros(r.rows(), r.cols());
            for (lw, rw) in &legs {
                delta = delta.add(&r1.word_image(lw).kron(&r2.word_image(rw)));
                delta_t = delta_t.add(&r1.word_image(rw).kron(&r2.word_image(lw)));
            }
            let (lhs, rhs) = if self.transposed {
                (r.matmul(&delta_t), delta.matmul(&r))
            } else {
                (r.matmul(&delta), delta_t.matmul(&r))
            };
            if lhs != rhs {
                return IntertwineReport { pass: false, first_failure: Some(format!("{g:?}")) };
            }
        }
        IntertwineReport { pass: true, first_failure: None }
    }

    /// Exact inverse body (errors if singular).
    pub fn inverse_body(&self) -> Result<Tensor4, LinalgError> {
        let m = self.body.as_matrix();
        let inv = solve_exact(&m, &Matrix::identity(m.rows()))?;
        Ok(Tensor4::from_matrix(&inv, self.body.dims()))
    }

    /// True when every entry has a classical limit and the `q = 1` body is
    /// the identity tensor.
    pub fn classical_limit_is_identity(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let Ok(v) = self.body.at(i, j, k, l).classical_limit() else {
                            return false;
                        };
                        let expect = if i == k && j == l {
                            num::BigRational::from(num::BigInt::from(1))
                        } else {
                            num::BigRational::from(num::BigInt::from(0))
                        };
                        if v != expect {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// All entries with 1-based indices in lexicographic order.
    pub fn entries_sorted(&self) -> Vec<([usize; 4], Scalar)> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * n * n * n);
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    for l in 1..=n {
                        out.push(([i, j, k, l], self.body.at(i - 1, j - 1, k - 1, l - 1).clone()));
                    }
                }
            }
        }
        out
    }
}

/// Coefficient of `T_ii` in the invariant direction of the tensor-operator
/// module: `(1 - q^-2) q^i / (q^2n - 1)`.
pub fn casimir_coefficient(n: usize, i: usize) -> Scalar {
    let num = (Scalar::one() - Scalar::q_pow(-1) * Scalar::q_pow(-1)) * Scalar::q_pow(i as i64);
    (num / (Scalar::q_pow(n as i64) * Scalar::q_pow(n as i64) - Scalar::one())).unwrap()
}

/// Report of the rank-one projector extracted from the square of the
/// `pi pi*` body under barred contraction.
#[derive(Debug, Clone)]
pub struct ProjectorReport {
    pub n: usize,
    pub body: Tensor4,
    /// `M = R·R - id` satisfies `M^2 = (q^(-2n) - 1) M`.
    pub coefficient_exact: bool,
    pub idempotent: bool,
    pub rank: usize,
    /// The traceless coefficient arrays annihilate the projector rows.
    pub annihilates_traceless: bool,
}

impl ProjectorReport {
    pub fn pass(&self) -> bool {
        self.coefficient_exact && self.idempotent && self.rank == 1 && self.annihilates_traceless
    }
}

/// Build and certify the projector from the contraction
/// `sum_kl R_(s r kbar lbar) R_(l k i j) = delta_(rbar i) delta_(sbar j) + (q^(-2n) - 1) P_(rbar sbar i j)`.
pub fn projector_identity(n: usize) -> ProjectorReport {
    let r = r_pi_pistar(n);
    // M_(u v)(i j) = LHS - delta, with u = bar(r), v = bar(s).
    let mut m = Tensor4::zeros([n, n, n, n]);
    for u in 1..=n {
        for v in 1..=n {
            let (rr, s) = (bar(n, u), bar(n, v));
            for i in 1..=n {
                for j in 1..=n {
                    let mut acc = Scalar::zero();
                    for k in 1..=n {
                        for l in 1..=n {
                            let a = r.body.at(s - 1, rr - 1, bar(n, k) - 1, bar(n, l) - 1);
                            if a.is_zero() {
                                continue;
                            }
                            let b = r.body.at(l - 1, k - 1, i - 1, j - 1);
                            if b.is_zero() {
                                continue;
                            }
                            acc += &(a * b);
                        }
                    }
                    if u == i && v == j {
                        acc -= &Scalar::one();
                    }
                    *m.at_mut(u - 1, v - 1, i - 1, j - 1) = acc;
                }
            }
        }
    }
    let coeff = Scalar::q_pow(-2 * n as i64) - Scalar::one();
    // M^2 = coeff * M pins the displayed coefficient given idempotency.
    let m_sq = contract_pair(&m, &m, &[(2, 0), (3, 1)]).unwrap().into_tensor4();
    let coefficient_exact = m_sq == m.scale(&coeff);
    let p = m.scale(&coeff.inv().unwrap());
    let p_sq = contract_pair(&p, &p, &[(2, 0), (3, 1)]).unwrap().into_tensor4();
    let idempotent = p_sq == p;
    let p_rank = rank(&p.as_matrix());
    // Traceless arrays: coefficient of T_kl in the traceless part of T_uv is
    // delta_uk delta_vl - delta_uv q^u gamma_k delta_kl.
    let mut annihilates = true;
    'outer: for k in 1..=n {
        for l in 1..=n {
            for i in 1..=n {
                for j in 1..=n {
                    // sum_uv theta^(uv)_(kl) P_(uv)(ij)
                    let mut acc = p.at(k - 1, l - 1, i - 1, j - 1).clone();
                    if k == l {
                        let gk = casimir_coefficient(n, k);
                        for u in 1..=n {
                            let w = Scalar::q_pow(u as i64) * &gk;
                            acc -= &(&w * p.at(u - 1, u - 1, i - 1, j - 1));
                        }
                    }
                    if !acc.is_zero() {
                        annihilates = false;
                        break 'outer;
                    }
                }
            }
        }
    }
    ProjectorReport {
        n,
        body: p,
        coefficient_exact,
        idempotent,
        rank: p_rank,
        annihilates_traceless: annihilates,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Scalar {
        Scalar::q()
    }

    #[test]
    fn closed_form_entries() {
        let r = r_pi_pistar(2);
        assert_eq!(r.body.at(0, 0, 0, 0), &Scalar::q_pow(-1));
        assert_eq!(
            r.body.at(1, 1, 0, 0),
            &(-(Scalar::q_minus_qinv() * Scalar::q_pow(-1)))
        );
        assert_eq!(r.body.at(0, 1, 0, 1), &Scalar::one());
    }

    #[test]
    fn universal_body_slices() {
        let n = 3;
        let r = r_pistar_pi(n);
        // Diagonal slice i = k: pi(q^(-E_ii)) block.
        for i in 1..=n {
            for j in 1..=n {
                let expect = if i == j { Scalar::q_pow(-1) } else { Scalar::one() };
                assert_eq!(r.body.at(i - 1, j - 1, i - 1, j - 1), &expect);
            }
        }
        // Upper slice i < k: -(q - q^-1) q^(i-k) times the unit pattern.
        let v = r.body.at(0, 0, 1, 1); // i=1, k=2, unit e_12 at (j,l) = (1,2)
        assert_eq!(v, &(-(Scalar::q_minus_qinv() * Scalar::q_pow(-1))));
        // Lower slice i > k vanishes for the untransposed element.
        assert!(r.body.at(1, 0, 0, 0).is_zero());
    }

    #[test]
    fn closed_form_matches_universal_reconstruction() {
        // (pi_ik ⊗ pistar_jl)(R) = [l <= j] q^(l-j) pi(Ê_jl)_ik.
        for n in 2..=4 {
            let closed = r_pi_pistar(n);
            let pi = Rep::vector(n);
            let rebuilt = Tensor4::from_fn([n, n, n, n], |i0, j0, k0, l0| {
                let (j, l) = (j0 + 1, l0 + 1);
                if l > j {
                    return Scalar::zero();
                }
                let img = pi.element_image(&uq::scaled_matrix_unit(n, j, l));
                Scalar::q_pow(l as i64 - j as i64) * img.at(i0, k0)
            });
            assert_eq!(closed.body, rebuilt, "n = {n}");
        }
    }

    #[test]
    fn transposed_body_is_index_permutation() {
        // (pistar_ik ⊗ pi_jl)(R^T) = (R_pi_pistar)_(j i l k).
        let n = 3;
        let t = r_pistar_rho(n, SecondLeg::Pi, true);
        let plain = r_pi_pistar(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        assert_eq!(t.body.at(i, j, k, l), plain.body.at(j, i, l, k));
                    }
                }
            }
        }
    }

    #[test]
    fn intertwining_certificates() {
        for n in 2..=3 {
            for r in [r_pi_pistar(n), r_pistar_pi(n), r_pistar_pistar(n)] {
                let report = r.check_intertwining();
                assert!(report.pass, "{} n={n}: {:?}", r.pair, report.first_failure);
            }
            let t = r_pistar_rho(n, SecondLeg::PiStar, true);
            assert!(t.check_intertwining().pass);
        }
    }

    #[test]
    fn identity_tensor_fails_intertwining() {
        let n = 2;
        let fake = RMatrix {
            pair: RPair::PiPiStar,
            n,
            transposed: false,
            body: Tensor4::identity_pair(n),
        };
        let report = fake.check_intertwining();
        assert!(!report.pass);
        assert_eq!(report.first_failure.as_deref(), Some("Raise(1)"));
    }

    #[test]
    fn inverse_reproduces_identity() {
        let r = r_pi_pistar(3);
        let inv = r.inverse_body().unwrap();
        let prod = contract_pair(&r.body, &inv, &[(2, 0), (3, 1)]).unwrap().into_tensor4();
        assert_eq!(prod, Tensor4::identity_pair(3));
    }

    #[test]
    fn classical_limits_are_identity() {
        for n in 2..=3 {
            assert!(r_pi_pistar(n).classical_limit_is_identity());
            assert!(r_pistar_pi(n).classical_limit_is_identity());
            assert!(r_pistar_pistar(n).classical_limit_is_identity());
        }
    }

    #[test]
    fn bar_is_an_involution() {
        for n in 2..=5 {
            for i in 1..=n {
                assert_eq!(bar(n, bar(n, i)), i);
            }
        }
    }

    #[test]
    fn casimir_coefficients_sum_against_q_powers() {
        // sum_i gamma_i q^i = 1; this is what makes the traceless parts of
        // the diagonal generators sum to zero.
        for n in 2..=4 {
            let mut acc = Scalar::zero();
            for i in 1..=n {
                acc += &(casimir_coefficient(n, i) * Scalar::q_pow(i as i64));
            }
            assert_eq!(acc, Scalar::one());
        }
        let _ = q();
    }

    #[test]
    fn projector_certificates() {
        for n in 2..=3 {
            let rep = projector_identity(n);
            assert!(rep.coefficient_exact, "coefficient n={n}");
            assert!(rep.idempotent, "idempotent n={n}");
            assert_eq!(rep.rank, 1, "rank n={n}");
            assert!(rep.annihilates_traceless, "traceless n={n}");
        }
    }
}
