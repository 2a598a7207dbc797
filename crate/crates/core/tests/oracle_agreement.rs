//! Cross-module checks: Gaussian formulas against the Fock engine, and the
//! capacity, allocation and conversion layers against each other.

use approx::assert_abs_diff_eq;
use bosonic_core::allocation::{optimal_allocation, AllocationChannel, AllocationProblem};
use bosonic_core::capacities::{
    capacity_by_coherent_info, coherent_information_gaussian, family_capacity,
};
use bosonic_core::code_conversion::{et_to_pc, et_to_qc, qc_to_pc, CodeParams, Task};
use bosonic_core::fock_oracle::{
    channel_output_and_env, thermal_coherent_information, thermal_density_matrix,
    von_neumann_entropy, FockFamily,
};
use bosonic_core::gaussian_channels::{apply, apply_complementary, pure_loss};
use bosonic_core::gaussian_core::{entropy, g_entropy, thermal_state_by_photons};
use bosonic_core::{Family, GaussianState};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fock_and_gaussian_loss_agree(eta in 0.5f64..=1.0, n in 0.0f64..2.0) {
        let fock = thermal_coherent_information(FockFamily::PureLoss { eta }, n, 40).unwrap();
        let gauss = family_capacity(Family::PureLoss { eta }, n).unwrap();
        prop_assert!((fock.value - gauss).abs() <= 1e-6, "{} vs {}", fock.value, gauss);
    }

    #[test]
    fn fock_and_gaussian_amplifier_agree(kappa in 1.0f64..2.5, n in 0.0f64..1.0) {
        let fock = thermal_coherent_information(FockFamily::Amplifier { kappa }, n, 40).unwrap();
        let gauss = family_capacity(Family::Amplifier { kappa }, n).unwrap();
        prop_assert!((fock.value - gauss).abs() <= 1e-6, "{} vs {}", fock.value, gauss);
    }

    #[test]
    fn photon_bookkeeping_matches(eta in 0.0f64..=1.0, n in 0.0f64..3.0) {
        let rho = thermal_density_matrix(n, 30).unwrap();
        let out = channel_output_and_env(FockFamily::PureLoss { eta }, &rho, 30).unwrap();
        let ch = pure_loss(eta, 1).unwrap();
        let input = thermal_state_by_photons(&[n]).unwrap();
        let g_out = apply(&ch, &input).unwrap().mean_photon_numbers()[0];
        let g_env = apply_complementary(&ch, &input).unwrap().mean_photon_numbers()[0];
        prop_assert!((out.output.mean_photon_number(0).unwrap() - g_out).abs() <= 1e-8);
        prop_assert!((out.environment.mean_photon_number(0).unwrap() - g_env).abs() <= 1e-8);
    }

    #[test]
    fn thermal_entropies_agree(n in 0.0f64..5.0) {
        let fock = von_neumann_entropy(&thermal_density_matrix(n, 20).unwrap());
        let gauss = entropy(&thermal_state_by_photons(&[n]).unwrap()).unwrap();
        prop_assert!((fock - gauss).abs() <= 1e-8);
        prop_assert!((gauss - g_entropy(n).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn coherent_info_route_matches_closed_form(eta in 0.5f64..=1.0, n in 0.0f64..20.0) {
        let ch = pure_loss(eta, 1).unwrap();
        let via_ci = capacity_by_coherent_info(&ch, n).unwrap().value;
        let closed = family_capacity(Family::PureLoss { eta }, n).unwrap();
        prop_assert!((via_ci - closed).abs() <= 1e-9);
    }

    #[test]
    fn allocation_beats_even_split(eta in 0.55f64..0.99, kappa in 1.1f64..3.0, p in 0.1f64..5.0) {
        let problem = AllocationProblem {
            channels: vec![
                AllocationChannel { family: Family::PureLoss { eta }, omega: 1.0 },
                AllocationChannel { family: Family::Amplifier { kappa }, omega: 1.0 },
            ],
            budget: p,
        };
        let best = optimal_allocation(&problem).unwrap();
        let even = family_capacity(Family::PureLoss { eta }, p / 2.0).unwrap()
            + family_capacity(Family::Amplifier { kappa }, p / 2.0).unwrap();
        prop_assert!(best.capacity >= even - 1e-9);
        let spent: f64 = best.photons.iter().sum();
        prop_assert!(spent <= p * (1.0 + 1e-8) + 1e-12);
    }
}

#[test]
fn displaced_input_lowers_coherent_information() {
    let ch = pure_loss(0.78, 1).unwrap();
    let thermal = thermal_state_by_photons(&[1.0]).unwrap();
    // Same energy, but half of it spent on a coherent displacement.
    let half = thermal_state_by_photons(&[0.5]).unwrap();
    let displaced: GaussianState = half
        .displaced(&nalgebra::DVector::from_vec(vec![1.0, 0.0]))
        .unwrap();
    assert_abs_diff_eq!(displaced.mean_photon_numbers()[0], 1.0, epsilon = 1e-12);
    let ci_th = coherent_information_gaussian(&ch, &thermal).unwrap();
    let ci_d = coherent_information_gaussian(&ch, &displaced).unwrap();
    assert!(ci_d < ci_th);
}

#[test]
fn conversion_chain_composes() {
    let et = CodeParams::new(12, 4096, 3.0, 0.001, Task::EntanglementAvg).unwrap();
    let chain = et_to_pc(&et, 0.3).unwrap();
    let manual = qc_to_pc(&et_to_qc(&et, 0.3).unwrap().code).unwrap();
    assert_eq!(chain[1].code, manual.code);
    assert_eq!(chain[1].code.n, 12);
    assert_eq!(chain[1].code.task, Task::PrivateUniform);
}
