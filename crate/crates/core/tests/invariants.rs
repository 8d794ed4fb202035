use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use su11::displacement::{
    matrix_element_hyp, matrix_element_sum, matrix_table, DisplacementParams,
};
use su11::realizations::{nbs, squeeze_sector_matrix_element, Sector};
use su11::states::{bgcs, dns, pcs};
use su11::BargmannIndex;

fn k_strategy() -> impl Strategy<Value = BargmannIndex> {
    prop::sample::select(vec![0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.25])
        .prop_map(|k| BargmannIndex::new(k).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pcs_rotates_with_the_phase_of_alpha(k in k_strategy(), a in 0.0..0.9f64, phi in -PI..PI, turn in -PI..PI) {
        let base = pcs(Complex64::from_polar(a, phi), k, 128).unwrap();
        let turned = pcs(Complex64::from_polar(a, phi + turn), k, 128).unwrap();
        for (n, (x, y)) in base.coeffs().iter().zip(turned.coeffs()).enumerate() {
            prop_assert!((x * Complex64::from_polar(1.0, n as f64 * turn) - y).norm() < 1e-13);
        }
    }

    #[test]
    fn coherent_states_are_normalized(k in k_strategy(), a in 0.0..0.8f64, b in 0.0..6.0f64, phi in -PI..PI) {
        prop_assert!(pcs(Complex64::from_polar(a, phi), k, 256).unwrap().norm_deficit().abs() < 1e-12);
        prop_assert!(bgcs(Complex64::from_polar(b, phi), k, 256).unwrap().norm_deficit().abs() < 1e-12);
    }

    #[test]
    fn sum_and_hypergeometric_paths_agree(
        k in k_strategy(), r in 0.05..1.2f64, theta in -PI..PI, n in 0usize..16, m in 0usize..16,
    ) {
        let p = DisplacementParams::new(r, theta).unwrap();
        let a = matrix_element_sum(n, m, k, &p);
        let b = matrix_element_hyp(n, m, k, &p).unwrap();
        prop_assert!((a - b).norm() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn table_matches_the_folded_sum(k in k_strategy(), r in 0.05..1.0f64, theta in -PI..PI) {
        let p = DisplacementParams::new(r, theta).unwrap();
        let t = matrix_table(k, &p, 64);
        for n in 0..12 {
            for m in 0..12 {
                prop_assert!((t.get(n, m) - matrix_element_sum(n, m, k, &p)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn opposite_displacements_cancel(k in k_strategy(), r in 0.05..0.6f64, theta in -PI..PI) {
        let dim = 128;
        let fwd = matrix_table(k, &DisplacementParams::new(r, theta).unwrap(), dim);
        let back = matrix_table(k, &DisplacementParams::new(r, theta + PI).unwrap(), dim);
        let prod = back.compose(&fwd);
        for n in 0..16 {
            for m in 0..16 {
                let want = if n == m { 1.0 } else { 0.0 };
                prop_assert!((prod.get(n, m) - want).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn displaced_number_states_are_normalized(k in k_strategy(), r in 0.0..1.0f64, theta in -PI..PI, m in 0usize..20) {
        let s = dns(&DisplacementParams::new(r, theta).unwrap(), m, k, 256).unwrap();
        prop_assert!(s.norm_deficit().abs() < 1e-10);
    }

    #[test]
    fn negative_binomial_states_are_normalized(big_m in 0.1..6.0f64, a in 0.0..0.7f64, phi in -PI..PI) {
        let f = nbs(Complex64::from_polar(a, phi), big_m, 256).unwrap();
        prop_assert!(f.norm_deficit().abs() < 1e-12);
    }

    #[test]
    fn squeeze_sector_elements_match_general_form(
        odd in any::<bool>(), r in 0.1..1.5f64, theta in -PI..PI, n in 0usize..11, m in 0usize..11,
    ) {
        let sector = if odd { Sector::Odd } else { Sector::Even };
        let p = DisplacementParams::new(r, theta).unwrap();
        let a = squeeze_sector_matrix_element(n, m, sector, &p).unwrap();
        let b = matrix_element_sum(n, m, sector.k(), &p);
        prop_assert!((a - b).norm() <= 1e-9 * b.norm());
    }
}
