use faer::Mat;
use quasifree::channels::{apply_schrodinger, ChannelKind, QuasiFreeChannel};
use quasifree::entropy::*;
use quasifree::fock::{self, FockOperator};
use quasifree::linalg::{self, identity, kron, max_abs_diff};
use quasifree::oracle::{dense_relative_entropy, dense_renyi, dense_von_neumann, sorted_spectrum};
use quasifree::random::*;
use quasifree::scalar::CMat;
use quasifree::symbols::{mix_symbols, Symbol};
use quasifree::{Complex64, Error};

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[test]
fn split_isomorphisms_are_associative() {
    let s12 = fock::split_isomorphism::<f64>(1, 1).unwrap();
    let s23 = s12.clone();
    let left = kron(&s12, &identity(2)) * fock::split_isomorphism::<f64>(2, 1).unwrap();
    let right = kron(&identity(2), &s23) * fock::split_isomorphism::<f64>(1, 2).unwrap();
    assert!(max_abs_diff(&left, &right) < 1e-12);

    for (d1, d2, d3) in [(1, 2, 1), (2, 1, 2), (1, 1, 3)] {
        let (n1, n2, n3) = (1 << d1, 1 << d2, 1 << d3);
        let left = kron(
            &fock::split_isomorphism::<f64>(d1, d2).unwrap(),
            &identity(n3),
        ) * fock::split_isomorphism::<f64>(d1 + d2, d3).unwrap();
        let right = kron(
            &identity(n1),
            &fock::split_isomorphism::<f64>(d2, d3).unwrap(),
        ) * fock::split_isomorphism::<f64>(d1, d2 + d3).unwrap();
        assert!(max_abs_diff(&left, &right) < 1e-12);
        assert_eq!(left.nrows(), n1 * n2 * n3);
    }
}

#[test]
fn wedge_inner_product_is_a_determinant() {
    let mut rng = seeded(31);
    for d in 1..=5 {
        for k in 1..=d.min(3) {
            let phis: Vec<Vec<Complex64>> = (0..k).map(|_| gaussian_vector(&mut rng, d)).collect();
            let psis: Vec<Vec<Complex64>> = (0..k).map(|_| gaussian_vector(&mut rng, d)).collect();
            let lhs = linalg::inner(
                &fock::wedge_vector(d, &phis).unwrap(),
                &fock::wedge_vector(d, &psis).unwrap(),
            );
            let gram = Mat::from_fn(k, k, |i, j| linalg::inner(&phis[i], &psis[j]));
            let rhs = linalg::determinant(&gram);
            assert!((lhs - rhs).norm() < 1e-10, "d={d} k={k}");
        }
    }
}

#[test]
fn wedge_is_associative_on_vectors() {
    let mut rng = seeded(4);
    let d = 4;
    let vs: Vec<Vec<Complex64>> = (0..3).map(|_| gaussian_vector(&mut rng, d)).collect();
    let whole = fock::wedge_vector(d, &vs).unwrap();
    // a*(φ1) applied to φ2 ∧ φ3.
    let tail = fock::wedge_vector(d, &vs[1..]).unwrap();
    let lifted = linalg::mat_vec(fock::creation_operator(&vs[0]).unwrap().matrix(), &tail);
    let gap = whole
        .iter()
        .zip(&lifted)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(gap < 1e-12);
}

#[test]
fn exp_element_sector_blocks_are_minors() {
    let mut rng = seeded(9);
    let d = 4;
    let x: CMat<f64> = gaussian_matrix(&mut rng, d, d);
    let e = fock::exp_element(&x).unwrap();
    let basis = fock::FockBasis::new(d).unwrap();
    for r in 0..basis.dim() {
        for col in 0..basis.dim() {
            let rows = basis.subset(r);
            let cols = basis.subset(col);
            let expect = if rows.len() != cols.len() {
                c(0.0)
            } else if rows.is_empty() {
                c(1.0)
            } else {
                let m = Mat::from_fn(rows.len(), cols.len(), |i, j| x[(rows[i], cols[j])]);
                linalg::determinant(&m)
            };
            assert!((e.matrix()[(r, col)] - expect).norm() < 1e-10);
        }
    }
}

#[test]
fn density_matrix_matches_exponential_form() {
    // ρ_Q = det(1 - Q) E(Q (1 - Q)⁻¹) for Q < 1.
    let mut rng = seeded(12);
    for d in 1..=5 {
        let q = random_symbol_in::<f64, _>(&mut rng, d, 0.0, 0.9).unwrap();
        let one = identity::<f64>(d);
        let rest = &one - q.matrix();
        let arg = q.matrix() * linalg::solve(&rest, &one);
        let closed = fock::exp_element(&arg)
            .unwrap()
            .scaled(linalg::determinant(&rest));
        let rho = fock::density_matrix(&q).unwrap();
        assert!(max_abs_diff(closed.matrix(), rho.matrix()) < 1e-9, "d={d}");
    }
}

#[test]
fn density_matrix_is_gauge_invariant_and_normalized() {
    let mut rng = seeded(6);
    for d in 1..=6 {
        let q = random_symbol::<f64, _>(&mut rng, d).unwrap();
        let rho = fock::density_matrix(&q).unwrap();
        let n = fock::number_operator::<f64>(d).unwrap();
        let comm = rho.matrix() * n.matrix() - n.matrix() * rho.matrix();
        assert!(linalg::max_abs(&comm) < 1e-12);
        assert!((rho.trace() - c(1.0)).norm() < 1e-10);
        // Two-point function: tr(ρ a*_j a_i) = Q_ij.
        for i in 0..d {
            for j in 0..d {
                let ai = fock::mode_creation::<f64>(d, i).unwrap().adjoint();
                let aj = fock::mode_creation::<f64>(d, j).unwrap();
                let v = linalg::trace(&(rho.matrix() * aj.matrix() * ai.matrix()));
                assert!((v - q.matrix()[(i, j)]).norm() < 1e-10);
            }
        }
    }
}

#[test]
fn product_of_states_has_direct_sum_symbol() {
    let mut rng = seeded(15);
    for (d1, d2) in [(1, 1), (2, 1), (1, 3), (2, 2)] {
        let q1 = random_symbol::<f64, _>(&mut rng, d1).unwrap();
        let q2 = random_symbol::<f64, _>(&mut rng, d2).unwrap();
        let joint = fock::wedge_state_product(
            &fock::density_matrix(&q1).unwrap(),
            &fock::density_matrix(&q2).unwrap(),
        )
        .unwrap();
        let sum = fock::density_matrix(&q1.direct_sum(&q2)).unwrap();
        assert!(max_abs_diff(joint.matrix(), sum.matrix()) < 1e-12);
        let marginal = fock::trace_out_tail(&sum, d1).unwrap();
        assert!(
            max_abs_diff(
                marginal.matrix(),
                fock::density_matrix(&q1).unwrap().matrix()
            ) < 1e-12
        );
    }
}

#[test]
fn k_particle_projectors_are_pure_quasi_free_states() {
    let mut rng = seeded(19);
    for d in 1..=4 {
        for k in 0..=d {
            let p = random_projector::<f64, _>(&mut rng, d, k).unwrap();
            let spec = p.spectral().unwrap();
            let vecs: Vec<Vec<Complex64>> = (0..k)
                .map(|j| linalg::column(&spec.eigenvectors, j))
                .collect();
            let proj = fock::k_particle_projector(d, &vecs).unwrap();
            let rho = fock::density_matrix(&p).unwrap();
            assert!(max_abs_diff(proj.matrix(), rho.matrix()) < 1e-10);
            assert!(von_neumann_entropy(&p).unwrap().abs() < 1e-10);
        }
    }
}

#[test]
fn entropies_match_dense_spectra() {
    let mut rng = seeded(21);
    for d in 1..=6 {
        let q = random_symbol::<f64, _>(&mut rng, d).unwrap();
        let rho = fock::density_matrix(&q).unwrap();
        for p in [0.5, 2.0, 3.0] {
            assert!((renyi_entropy(&q, p).unwrap() - dense_renyi(&rho, p).unwrap()).abs() < 1e-9);
        }
        assert!((von_neumann_entropy(&q).unwrap() - dense_von_neumann(&rho).unwrap()).abs() < 1e-9);
    }
    for d in 1..=5 {
        let q1 = random_interior_symbol::<f64, _>(&mut rng, d, 0.05).unwrap();
        let q2 = random_interior_symbol::<f64, _>(&mut rng, d, 0.05).unwrap();
        let dense = dense_relative_entropy(
            &fock::density_matrix(&q1).unwrap(),
            &fock::density_matrix(&q2).unwrap(),
        )
        .unwrap();
        assert!((relative_entropy(&q1, &q2).unwrap() - dense).abs() < 1e-8);
    }
}

#[test]
fn renyi_tends_to_von_neumann() {
    let mut rng = seeded(2);
    for d in 1..=6 {
        let q = random_interior_symbol::<f64, _>(&mut rng, d, 0.05).unwrap();
        let s = von_neumann_entropy(&q).unwrap();
        for eps in [1e-3, 1e-4] {
            assert!((renyi_entropy(&q, 1.0 + eps).unwrap() - s).abs() <= 10.0 * eps);
        }
    }
}

#[test]
fn entropies_are_unitarily_invariant_and_additive() {
    let mut rng = seeded(14);
    for d in 1..=6 {
        let q1 = random_interior_symbol::<f64, _>(&mut rng, d, 0.02).unwrap();
        let q2 = random_interior_symbol::<f64, _>(&mut rng, d, 0.02).unwrap();
        let u: CMat<f64> = random_unitary(&mut rng, d);
        let rot = |q: &Symbol<f64>| {
            Symbol::new(&linalg::hermitian_part(&(u.adjoint() * q.matrix() * &u))).unwrap()
        };
        let (r1, r2) = (rot(&q1), rot(&q2));
        assert!(
            (von_neumann_entropy(&q1).unwrap() - von_neumann_entropy(&r1).unwrap()).abs() < 1e-10
        );
        assert!(
            (renyi_entropy(&q1, 2.0).unwrap() - renyi_entropy(&r1, 2.0).unwrap()).abs() < 1e-10
        );
        assert!(
            (relative_entropy(&q1, &q2).unwrap() - relative_entropy(&r1, &r2).unwrap()).abs()
                < 1e-10
        );

        let sum = von_neumann_entropy(&q1.direct_sum(&q2)).unwrap();
        assert!(
            (sum - von_neumann_entropy(&q1).unwrap() - von_neumann_entropy(&q2).unwrap()).abs()
                < 1e-10
        );
    }
}

#[test]
fn relative_entropy_kernel_condition() {
    let q1 = Symbol::<f64>::diagonal(&[0.5, 0.3]).unwrap();
    let q2 = Symbol::<f64>::diagonal(&[0.0, 0.3]).unwrap();
    assert!(matches!(
        relative_entropy(&q1, &q2),
        Err(Error::KernelConditionViolated)
    ));
    let q1 = Symbol::<f64>::diagonal(&[0.0, 0.3]).unwrap();
    let q2 = Symbol::<f64>::diagonal(&[0.0, 0.6]).unwrap();
    let rho1 = fock::density_matrix(&q1).unwrap();
    let rho2 = fock::density_matrix(&q2).unwrap();
    // Dense reference restricted to the common support.
    let w1 = fock::occupation_weights(&[0.0, 0.3]).unwrap();
    let w2 = fock::occupation_weights(&[0.0, 0.6]).unwrap();
    let expect: f64 = w1
        .iter()
        .zip(&w2)
        .filter(|(a, _)| **a > 0.0)
        .map(|(a, b): (&f64, &f64)| a * (a / b).ln())
        .sum();
    assert!((relative_entropy(&q1, &q2).unwrap() - expect).abs() < 1e-12);
    assert_eq!(rho1.modes(), rho2.modes());
}

#[test]
fn unitary_channel_preserves_entropy() {
    let mut rng = seeded(33);
    for d in 1..=6 {
        let u: CMat<f64> = random_unitary(&mut rng, d);
        let ch = QuasiFreeChannel::lambda(u, Mat::zeros(d, d)).unwrap();
        let q = random_symbol::<f64, _>(&mut rng, d).unwrap();
        let out = apply_schrodinger(&ch, &q).unwrap();
        assert!(
            (von_neumann_entropy(&out).unwrap() - von_neumann_entropy(&q).unwrap()).abs() < 1e-10
        );
    }
}

#[test]
fn trace_preservation_and_unitality() {
    let mut rng = seeded(27);
    for kind in [ChannelKind::Lambda, ChannelKind::Gamma] {
        for d in 1..=4 {
            let ch = random_channel::<f64, _>(&mut rng, d, kind).unwrap();
            let q = random_symbol::<f64, _>(&mut rng, d).unwrap();
            let out = quasifree::stinespring_schrodinger(&ch, &fock::density_matrix(&q).unwrap())
                .unwrap();
            assert!((out.trace() - c(1.0)).norm() < 1e-9);
            let unit = quasifree::apply_heisenberg_exp(&ch, &identity(d))
                .unwrap()
                .densify()
                .unwrap();
            assert!(
                max_abs_diff(
                    unit.matrix(),
                    FockOperator::<f64>::identity(d).unwrap().matrix()
                ) < 1e-10
            );
        }
    }
}

#[test]
fn mixtures_follow_the_rank_rule() {
    let mut rng = seeded(44);
    for d in 1..=5 {
        let (q1, q2) = random_rank_one_pair::<f64, _>(&mut rng, d).unwrap();
        for lambda in [0.2, 0.5, 0.9] {
            let mix = mix_symbols(&q1, &q2, lambda).unwrap();
            let dense = linalg::scale(fock::density_matrix(&q1).unwrap().matrix(), c(lambda))
                + linalg::scale(fock::density_matrix(&q2).unwrap().matrix(), c(1.0 - lambda));
            assert!(max_abs_diff(fock::density_matrix(&mix).unwrap().matrix(), &dense) < 1e-9);
        }
    }
    for d in 2..=5 {
        let (q1, q2) = random_rank_two_pair::<f64, _>(&mut rng, d).unwrap();
        assert!(matches!(
            mix_symbols(&q1, &q2, 0.5),
            Err(Error::NotQuasiFreeMixture { rank: 2 })
        ));
        let naive = Symbol::new(&linalg::scale(&(q1.matrix() + q2.matrix()), c(0.5))).unwrap();
        let dense = linalg::scale(
            &(fock::density_matrix(&q1).unwrap().matrix()
                + fock::density_matrix(&q2).unwrap().matrix()),
            c(0.5),
        );
        assert!(max_abs_diff(fock::density_matrix(&naive).unwrap().matrix(), &dense) >= 1e-6);
    }
}

#[test]
fn exp_spectrum_of_nilpotent_and_hermitian() {
    let mut rng = seeded(1);
    let n = Mat::from_fn(3, 3, |i, j| if j == i + 1 { c(1.0) } else { c(0.0) });
    let spec = fock::exp_spectrum(&n).unwrap();
    assert_eq!(spec.len(), 8);
    assert!((spec[0] - c(1.0)).norm() < 1e-12);
    assert!(spec[1..].iter().all(|z| z.norm() < 1e-12));
    let dense = sorted_spectrum(&linalg::hermitian_part(
        fock::exp_element(&n).unwrap().matrix(),
    ))
    .unwrap();
    assert_eq!(dense.len(), 8);

    let g: CMat<f64> = gaussian_matrix(&mut rng, 4, 4);
    let psd = &g * g.adjoint();
    let e = fock::exp_element(&psd).unwrap();
    let mut formula: Vec<f64> = fock::exp_spectrum(&psd)
        .unwrap()
        .iter()
        .map(|z| z.re)
        .collect();
    formula.sort_by(f64::total_cmp);
    let dense = sorted_spectrum(e.matrix()).unwrap();
    let scale = formula.last().copied().unwrap();
    for (a, b) in formula.iter().zip(&dense) {
        assert!((a - b).abs() < 1e-10 * scale.max(1.0));
    }
    assert!(dense[0] >= -1e-10);
}
