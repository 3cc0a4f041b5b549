mod common;

use btlab::operators::{hermitian_eigenvalues, is_hermitian, operator_norm, toeplitz_exact, ExactOperator};
use btlab::rational::{real, Coeff};
use btlab::semiclassics::{norm_defect, DirectAssembly, Probe};
use btlab::symbolic::{sup_norm, SupNormBudget};
use btlab::CanonicalSymbol;
use common::{rand_complex, rand_real};

#[test]
fn toeplitz_is_linear() {
    for seed in 0..8 {
        let (f, g) = (rand_complex(seed), rand_complex(seed + 50));
        let a = Coeff::new(real(2, 3).re, real(-1, 5).re);
        for m in [0, 3, 9] {
            let lhs = ExactOperator::toeplitz(&f.scale(&a).add(&g), m);
            let rhs = ExactOperator::toeplitz(&f, m).scale(&a).add(&ExactOperator::toeplitz(&g, m)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn real_symbols_give_hermitian_matrices() {
    for seed in 0..10 {
        let f = rand_real(seed);
        for m in [1, 6, 17] {
            assert!(is_hermitian(&toeplitz_exact(&f, m).entries, 1e-14));
        }
    }
}

#[test]
fn positive_symbols_give_positive_operators() {
    for seed in 0..10 {
        let f = rand_real(seed);
        let square = f.multiply(&f);
        for m in [2, 8, 20] {
            let eig = hermitian_eigenvalues(&toeplitz_exact(&square, m).entries).unwrap();
            assert!(eig[0] > -1e-12, "seed {seed}, m = {m}: {}", eig[0]);
        }
    }
}

#[test]
fn toeplitz_is_a_contraction() {
    let budget = SupNormBudget::default();
    for seed in 0..10 {
        let f = rand_real(seed);
        let sup = sup_norm(&f, budget).value;
        for m in [1, 5, 12, 30] {
            let norm = operator_norm(&toeplitz_exact(&f, m).entries).unwrap();
            assert!(norm <= sup + 1e-9, "seed {seed}, m = {m}: {norm} > {sup}");
        }
    }
}

#[test]
fn f0_norm_defect_is_one_over_m_plus_two() {
    for m in [1, 2, 7, 40] {
        let d = norm_defect(&CanonicalSymbol::f0(), m).unwrap();
        assert!((d - 1.0 / (m as f64 + 2.0)).abs() < 1e-13);
    }
}

#[test]
fn complex_symbols_are_rejected_by_real_probes() {
    let probe = Probe::new(&DirectAssembly);
    let f = rand_complex(3);
    assert!(probe.dirac_defect(&f, &f, 4).is_err());
    assert!(probe.tuynman_defect(&f, 4).is_err());
    assert!(probe.spectral_moment(&f, 4, 1).is_err());
}

#[test]
fn conjugation_exchanges_with_adjoint() {
    for seed in 0..5 {
        let f = rand_complex(seed);
        for m in [0, 4, 11] {
            assert_eq!(
                ExactOperator::toeplitz(&f, m).adjoint(),
                ExactOperator::toeplitz(&f.conjugate(), m)
            );
        }
    }
}
