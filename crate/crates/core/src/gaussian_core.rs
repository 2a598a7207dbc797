//! Symplectic linear algebra for Gaussian states.
//!
//! Quadratures are ordered `q_1..q_m, p_1..p_m` and the covariance matrix is
//! normalised so that the vacuum has `V = I`. With that convention a thermal
//! mode of mean photon number `N` has the block `(2N + 1) I_2`, and the
//! symplectic form is `[[0, I_m], [-I_m, 0]]`.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Tolerance on the smallest eigenvalue of `V + iΩ`.
pub const STATE_PSD_TOL: f64 = 1e-9;
/// Relative tolerance used when collapsing `±ν` eigenvalue pairs.
pub const PAIRING_TOL: f64 = 1e-8;
/// Symplectic eigenvalues below `1 - NU_TOL` are rejected.
pub const NU_TOL: f64 = 1e-9;

pub(crate) type C64 = Complex<f64>;

/// The symplectic form for `m` modes in `qq..pp` ordering.
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * modes, 2 * modes);
    for j in 0..modes {
        omega[(j, modes + j)] = 1.0;
        omega[(modes + j, j)] = -1.0;
    }
    omega
}

/// Entropy in bits of a thermal mode with mean photon number `x`:
/// `(x + 1) log2(x + 1) - x log2 x`.
pub fn g_entropy(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("g(x) needs x >= 0, got {x}")));
    }
    Ok(g_unchecked(x))
}

pub(crate) fn g_unchecked(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return f64::INFINITY;
    }
    (x + 1.0) * (x + 1.0).log2() - x * x.log2()
}

/// Derivative of `g`: `log2(1 + 1/x)`, infinite at zero.
pub(crate) fn g_prime(x: f64) -> f64 {
    if x <= 0.0 {
        return f64::INFINITY;
    }
    (1.0 / x).ln_1p() / std::f64::consts::LN_2
}

/// Mean photon number of a harmonic mode of frequency `omega` at inverse
/// temperature `beta`.
pub fn thermal_photon_number(omega: f64, beta: f64) -> f64 {
    1.0 / (beta * omega).exp_m1()
}

/// A Gaussian state described by its first and second moments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Builds a state, symmetrising `cov` and checking the uncertainty
    /// relation `V + iΩ ≥ 0`.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let n = cov.nrows();
        if n != cov.ncols() || !n.is_multiple_of(2) || n == 0 {
            return Err(Error::Shape(format!(
                "covariance must be a non-empty square matrix of even dimension, got {}x{}",
                cov.nrows(),
                cov.ncols()
            )));
        }
        if mean.len() != n {
            return Err(Error::Shape(format!(
                "mean has length {} but covariance is {n}x{n}",
                mean.len()
            )));
        }
        if cov.iter().chain(mean.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidState("non-finite moment".into()));
        }
        let asym = (&cov - cov.transpose()).amax();
        if asym > 1e-9 * cov.amax().max(1.0) {
            return Err(Error::InvalidState(format!(
                "covariance is not symmetric (max asymmetry {asym:e})"
            )));
        }
        let cov = (&cov + cov.transpose()) * 0.5;
        let margin = uncertainty_margin(&cov);
        if margin < -STATE_PSD_TOL {
            return Err(Error::InvalidState(format!(
                "V + iΩ has eigenvalue {margin:e} < -{STATE_PSD_TOL:e}"
            )));
        }
        Ok(Self { mean, cov })
    }

    pub fn vacuum(modes: usize) -> Self {
        Self {
            mean: DVector::zeros(2 * modes),
            cov: DMatrix::identity(2 * modes, 2 * modes),
        }
    }

    /// Single-mode squeezed thermal state, displaced by `mean = (q, p)`.
    /// The `q` quadrature is squeezed for `r > 0`.
    pub fn squeezed_thermal(thermal_photons: f64, r: f64, mean: [f64; 2]) -> Result<Self> {
        if !(thermal_photons >= 0.0) || !r.is_finite() {
            return Err(Error::Domain(format!(
                "squeezed thermal state needs N >= 0 and finite r, got N={thermal_photons}, r={r}"
            )));
        }
        let v = 2.0 * thermal_photons + 1.0;
        let cov = DMatrix::from_diagonal(&DVector::from_vec(vec![
            v * (-2.0 * r).exp(),
            v * (2.0 * r).exp(),
        ]));
        Self::new(DVector::from_vec(mean.to_vec()), cov)
    }

    pub fn num_modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// The same state displaced by `xi` in phase space.
    pub fn displaced(&self, xi: &DVector<f64>) -> Result<Self> {
        if xi.len() != self.mean.len() {
            return Err(Error::Shape(format!(
                "displacement has length {}, state has {}",
                xi.len(),
                self.mean.len()
            )));
        }
        Ok(Self {
            mean: &self.mean + xi,
            cov: self.cov.clone(),
        })
    }

    /// Mean photon number `⟨a_j† a_j⟩` of each mode.
    pub fn mean_photon_numbers(&self) -> Vec<f64> {
        let m = self.num_modes();
        (0..m)
            .map(|j| {
                let (q, p) = (j, m + j);
                (self.cov[(q, q)] + self.cov[(p, p)] - 2.0) / 4.0
                    + (self.mean[q].powi(2) + self.mean[p].powi(2)) / 2.0
            })
            .collect()
    }
}

/// Smallest eigenvalue of the Hermitian matrix `V + iΩ`.
pub fn uncertainty_margin(cov: &DMatrix<f64>) -> f64 {
    let m = cov.nrows() / 2;
    let omega = symplectic_form(m);
    let h = DMatrix::from_fn(cov.nrows(), cov.ncols(), |i, j| {
        C64::new(cov[(i, j)], omega[(i, j)])
    });
    min_hermitian_eigenvalue(h)
}

pub(crate) fn min_hermitian_eigenvalue(h: DMatrix<C64>) -> f64 {
    SymmetricEigen::new(h)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Energy observable `G = Σ ω_j a_j† a_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyObservable {
    frequencies: Vec<f64>,
}

impl EnergyObservable {
    pub fn new(frequencies: Vec<f64>) -> Result<Self> {
        if frequencies.is_empty() {
            return Err(Error::Domain(
                "energy observable needs at least one mode".into(),
            ));
        }
        if let Some(w) = frequencies.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::Domain(format!(
                "frequencies must be positive, got {w}"
            )));
        }
        Ok(Self { frequencies })
    }

    /// Total photon number on `modes` modes (all frequencies 1).
    pub fn photon_number(modes: usize) -> Self {
        Self {
            frequencies: vec![1.0; modes],
        }
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn num_modes(&self) -> usize {
        self.frequencies.len()
    }
}

/// Williamson symplectic eigenvalues of `cov`, sorted in decreasing order.
///
/// `iVΩ` is similar to the Hermitian matrix `i V^{1/2} Ω V^{1/2}`, whose
/// eigenvalues are `±ν_j`. Positive and negative halves are matched up and
/// averaged.
pub fn symplectic_eigenvalues(cov: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = cov.nrows();
    if n != cov.ncols() || !n.is_multiple_of(2) || n == 0 {
        return Err(Error::Shape(format!(
            "symplectic eigenvalues need a square matrix of even dimension, got {}x{}",
            cov.nrows(),
            cov.ncols()
        )));
    }
    let m = n / 2;
    let sym = (cov + cov.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    if let Some(&bad) = eig.eigenvalues.iter().find(|&&l| !(l > 0.0)) {
        return Err(Error::InvalidState(format!(
            "covariance is not positive definite (eigenvalue {bad:e})"
        )));
    }
    let sqrt_diag = DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
    let root = &eig.eigenvectors * sqrt_diag * eig.eigenvectors.transpose();
    let kernel = &root * symplectic_form(m) * &root;
    let herm = DMatrix::from_fn(n, n, |i, j| C64::new(0.0, kernel[(i, j)]));
    let spectrum = SymmetricEigen::new(herm).eigenvalues;

    let mut pos: Vec<f64> = spectrum.iter().copied().filter(|&l| l >= 0.0).collect();
    let mut neg: Vec<f64> = spectrum
        .iter()
        .copied()
        .filter(|&l| l < 0.0)
        .map(f64::abs)
        .collect();
    if pos.len() != m || neg.len() != m {
        return Err(Error::NumericalDegeneracy(format!(
            "spectrum of iVΩ is not split into {m} ± pairs ({} positive, {} negative)",
            pos.len(),
            neg.len()
        )));
    }
    pos.sort_by(|a, b| b.total_cmp(a));
    neg.sort_by(|a, b| b.total_cmp(a));

    let mut nus = Vec::with_capacity(m);
    for (a, b) in pos.into_iter().zip(neg) {
        let scale = a.max(b);
        if (a - b).abs() > PAIRING_TOL * scale {
            return Err(Error::NumericalDegeneracy(format!(
                "eigenvalue pair ({a}, -{b}) mismatched beyond {PAIRING_TOL:e}"
            )));
        }
        let nu = 0.5 * (a + b);
        if nu < 1.0 - NU_TOL {
            return Err(Error::InvalidState(format!(
                "symplectic eigenvalue {nu} below 1"
            )));
        }
        nus.push(nu.max(1.0));
    }
    Ok(nus)
}

/// Von Neumann entropy in bits, `Σ_j g((ν_j - 1)/2)`. Never reads the mean.
pub fn entropy(state: &GaussianState) -> Result<f64> {
    Ok(symplectic_eigenvalues(state.cov())?
        .into_iter()
        .map(|nu| g_unchecked((nu - 1.0) / 2.0))
        .sum())
}

/// Thermal state `exp(-βG)/Tr exp(-βG)`. `beta = +∞` gives the vacuum.
pub fn thermal_state(obs: &EnergyObservable, beta: f64) -> Result<GaussianState> {
    if !(beta > 0.0) {
        return Err(Error::Domain(format!(
            "inverse temperature must be > 0, got {beta}"
        )));
    }
    let photons: Vec<f64> = obs
        .frequencies()
        .iter()
        .map(|&w| thermal_photon_number(w, beta))
        .collect();
    thermal_state_by_photons(&photons)
}

/// Product thermal state with the given mean photon number per mode.
pub fn thermal_state_by_photons(mean_photons: &[f64]) -> Result<GaussianState> {
    if mean_photons.is_empty() {
        return Err(Error::Domain(
            "thermal state needs at least one mode".into(),
        ));
    }
    if let Some(n) = mean_photons.iter().find(|n| !(**n >= 0.0 && n.is_finite())) {
        return Err(Error::Domain(format!(
            "mean photon numbers must be >= 0, got {n}"
        )));
    }
    let m = mean_photons.len();
    let diag: Vec<f64> = mean_photons
        .iter()
        .chain(mean_photons)
        .map(|n| 2.0 * n + 1.0)
        .collect();
    Ok(GaussianState {
        mean: DVector::zeros(2 * m),
        cov: DMatrix::from_diagonal(&DVector::from_vec(diag)),
    })
}

/// `Tr{Gρ} = Σ_j ω_j ⟨a_j† a_j⟩`.
pub fn mean_energy(state: &GaussianState, obs: &EnergyObservable) -> Result<f64> {
    if state.num_modes() != obs.num_modes() {
        return Err(Error::Shape(format!(
            "state has {} modes, observable has {}",
            state.num_modes(),
            obs.num_modes()
        )));
    }
    Ok(state
        .mean_photon_numbers()
        .iter()
        .zip(obs.frequencies())
        .map(|(n, w)| n * w)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn tmsv(cosh2r: f64) -> DMatrix<f64> {
        let c = cosh2r;
        let s = (c * c - 1.0).sqrt();
        #[rustfmt::skip]
        let v = DMatrix::from_row_slice(4, 4, &[
            c,  s,  0.0, 0.0,
            s,  c,  0.0, 0.0,
            0.0, 0.0, c, -s,
            0.0, 0.0, -s, c,
        ]);
        v
    }

    // Independent route: moduli of the complex eigenvalues of the real
    // matrix VΩ, via the real Schur form.
    fn brute_force_nus(cov: &DMatrix<f64>) -> Vec<f64> {
        let m = cov.nrows() / 2;
        let prod = cov * symplectic_form(m);
        let mut mods: Vec<f64> = prod
            .complex_eigenvalues()
            .iter()
            .map(|z| z.norm())
            .collect();
        mods.sort_by(|a, b| b.total_cmp(a));
        mods.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
    }

    #[test]
    fn g_values() {
        assert_eq!(g_entropy(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(g_entropy(1.0).unwrap(), 2.0, epsilon = 1e-15);
        // (1.78) log2 1.78 - 0.78 log2 0.78
        let direct = 1.78 * 1.78f64.ln() / 2f64.ln() - 0.78 * 0.78f64.ln() / 2f64.ln();
        assert_abs_diff_eq!(g_entropy(0.78).unwrap(), direct, epsilon = 1e-14);
        assert_abs_diff_eq!(g_entropy(0.78).unwrap(), 1.7604, epsilon = 1e-4);
        assert!(g_entropy(1e-300).unwrap() >= 0.0);
        assert!(matches!(g_entropy(-0.1), Err(Error::Domain(_))));
        assert!(g_entropy(f64::NAN).is_err());
    }

    #[test]
    fn g_monotone_and_concave_on_grid() {
        let grid: Vec<f64> = (0..400).map(|k| k as f64 * 0.05).collect();
        for w in grid.windows(2) {
            assert!(g_unchecked(w[0]) < g_unchecked(w[1]));
        }
        for x in &grid {
            for y in &grid {
                let mid = g_unchecked(0.5 * (x + y));
                assert!(mid >= 0.5 * (g_unchecked(*x) + g_unchecked(*y)) - 1e-12);
            }
        }
    }

    #[test]
    fn g_prime_matches_central_difference() {
        for &x in &[0.05, 0.3, 1.0, 4.0, 50.0] {
            let h = 1e-6;
            let fd = (g_unchecked(x + h) - g_unchecked(x - h)) / (2.0 * h);
            assert_abs_diff_eq!(g_prime(x), fd, epsilon = 1e-6);
        }
        assert!(g_prime(0.0).is_infinite());
    }

    #[test]
    fn symplectic_eigenvalue_examples() {
        let vac = symplectic_eigenvalues(&DMatrix::identity(2, 2)).unwrap();
        assert_abs_diff_eq!(vac[0], 1.0, epsilon = 1e-12);
        let scaled = symplectic_eigenvalues(&(DMatrix::identity(2, 2) * 3.0)).unwrap();
        assert_abs_diff_eq!(scaled[0], 3.0, epsilon = 1e-12);

        let v = tmsv(3.0);
        let bf = brute_force_nus(&v);
        assert_abs_diff_eq!(bf[0], 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(bf[1], 1.0, epsilon = 1e-9);
        let nus = symplectic_eigenvalues(&v).unwrap();
        assert_eq!(nus.len(), 2);
        assert_abs_diff_eq!(nus[0], 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(nus[1], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn symplectic_eigenvalue_shape_errors() {
        assert!(matches!(
            symplectic_eigenvalues(&DMatrix::identity(3, 3)),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            symplectic_eigenvalues(&DMatrix::zeros(2, 4)),
            Err(Error::Shape(_))
        ));
        // Violates the uncertainty relation.
        assert!(symplectic_eigenvalues(&(DMatrix::identity(2, 2) * 0.5)).is_err());
    }

    #[test]
    fn mixed_multimode_matches_brute_force() {
        // Thermal (N = 0.5, 2) then a 45-degree rotation mixing q1, q2 and p1, p2.
        let base = thermal_state_by_photons(&[0.5, 2.0]).unwrap();
        let (c, s) = (
            std::f64::consts::FRAC_1_SQRT_2,
            std::f64::consts::FRAC_1_SQRT_2,
        );
        #[rustfmt::skip]
        let rot = DMatrix::from_row_slice(4, 4, &[
            c, -s, 0.0, 0.0,
            s,  c, 0.0, 0.0,
            0.0, 0.0, c, -s,
            0.0, 0.0, s,  c,
        ]);
        let v = &rot * base.cov() * rot.transpose();
        let nus = symplectic_eigenvalues(&v).unwrap();
        let bf = brute_force_nus(&v);
        assert_abs_diff_eq!(nus[0], 5.0, epsilon = 1e-10);
        assert_abs_diff_eq!(nus[1], 2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(nus[0], bf[0], epsilon = 1e-10);
        assert_abs_diff_eq!(nus[1], bf[1], epsilon = 1e-10);
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&GaussianState::vacuum(1)).unwrap(), 0.0);
        let t1 = thermal_state_by_photons(&[1.0]).unwrap();
        assert_abs_diff_eq!(entropy(&t1).unwrap(), 2.0, epsilon = 1e-12);
        let t = thermal_state_by_photons(&[0.22]).unwrap();
        assert_abs_diff_eq!(entropy(&t).unwrap(), g_unchecked(0.22), epsilon = 1e-12);
        assert_abs_diff_eq!(entropy(&t).unwrap(), 0.8306, epsilon = 1e-4);
        let pure = GaussianState::new(DVector::zeros(4), tmsv(3.0)).unwrap();
        assert_abs_diff_eq!(entropy(&pure).unwrap(), 0.0, epsilon = 1e-8);
    }

    #[test]
    fn thermal_examples() {
        let obs = EnergyObservable::new(vec![1.0]).unwrap();
        let cold = thermal_state(&obs, f64::INFINITY).unwrap();
        assert_eq!(cold.cov(), &DMatrix::<f64>::identity(2, 2));
        let t = thermal_state(&obs, 2f64.ln()).unwrap();
        assert_abs_diff_eq!(t.cov()[(0, 0)], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(t.cov()[(1, 1)], 3.0, epsilon = 1e-12);

        let obs2 = EnergyObservable::new(vec![1.0, 2.0]).unwrap();
        let t2 = thermal_state(&obs2, 1.0).unwrap();
        let n = t2.mean_photon_numbers();
        let e = std::f64::consts::E;
        assert_abs_diff_eq!(n[0], 1.0 / (e - 1.0), epsilon = 1e-14);
        assert_abs_diff_eq!(n[1], 1.0 / (e * e - 1.0), epsilon = 1e-14);

        assert!(matches!(thermal_state(&obs, 0.0), Err(Error::Domain(_))));
        assert!(matches!(thermal_state(&obs, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn thermal_by_photons_examples() {
        assert_eq!(
            thermal_state_by_photons(&[0.0]).unwrap(),
            GaussianState::vacuum(1)
        );
        let t = thermal_state_by_photons(&[0.5, 2.0]).unwrap();
        assert_eq!(t.cov()[(0, 0)], 2.0);
        assert_eq!(t.cov()[(2, 2)], 2.0);
        assert_eq!(t.cov()[(1, 1)], 5.0);
        assert_eq!(t.cov()[(3, 3)], 5.0);
        assert!(thermal_state_by_photons(&[-0.1]).is_err());
    }

    #[test]
    fn mean_energy_examples() {
        let obs = EnergyObservable::new(vec![1.0]).unwrap();
        assert_eq!(mean_energy(&GaussianState::vacuum(1), &obs).unwrap(), 0.0);
        let t = thermal_state_by_photons(&[1.0]).unwrap();
        assert_abs_diff_eq!(mean_energy(&t, &obs).unwrap(), 1.0, epsilon = 1e-15);
        let coherent = GaussianState::new(
            DVector::from_vec(vec![2f64.sqrt(), 0.0]),
            DMatrix::identity(2, 2),
        )
        .unwrap();
        assert_abs_diff_eq!(mean_energy(&coherent, &obs).unwrap(), 1.0, epsilon = 1e-15);
        let obs2 = EnergyObservable::photon_number(2);
        assert!(matches!(mean_energy(&t, &obs2), Err(Error::Shape(_))));
    }

    #[test]
    fn invalid_states_rejected() {
        assert!(GaussianState::new(DVector::zeros(2), DMatrix::identity(2, 2) * 0.9).is_err());
        assert!(GaussianState::new(DVector::zeros(3), DMatrix::identity(2, 2)).is_err());
        let mut asym = DMatrix::identity(2, 2);
        asym[(0, 1)] = 0.3;
        assert!(GaussianState::new(DVector::zeros(2), asym).is_err());
        assert!(EnergyObservable::new(vec![1.0, 0.0]).is_err());
        assert!(EnergyObservable::new(vec![]).is_err());
    }

    #[test]
    fn thermal_round_trip() {
        let obs = EnergyObservable::new(vec![0.3, 1.0, 2.5]).unwrap();
        for &beta in &[0.1, 0.7, 2.0, 9.0] {
            let t = thermal_state(&obs, beta).unwrap();
            let expected: f64 = obs
                .frequencies()
                .iter()
                .map(|w| w / ((beta * w).exp() - 1.0))
                .sum();
            assert_abs_diff_eq!(mean_energy(&t, &obs).unwrap(), expected, epsilon = 1e-12);
        }
    }

    fn single_mode_cov() -> impl Strategy<Value = DMatrix<f64>> {
        // Rotated squeezed thermal: always a valid covariance.
        (0.0f64..5.0, -1.5f64..1.5, 0.0f64..std::f64::consts::PI).prop_map(|(n, r, th)| {
            let v = 2.0 * n + 1.0;
            let d = DMatrix::from_diagonal(&DVector::from_vec(vec![
                v * (2.0 * r).exp(),
                v * (-2.0 * r).exp(),
            ]));
            let (c, s) = (th.cos(), th.sin());
            let rot = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
            &rot * d * rot.transpose()
        })
    }

    proptest! {
        #[test]
        fn single_mode_nu_is_sqrt_det(cov in single_mode_cov()) {
            let nus = symplectic_eigenvalues(&cov).unwrap();
            let det = cov.determinant();
            prop_assert!((nus[0] - det.sqrt()).abs() <= 1e-10 * det.sqrt().max(1.0));
        }

        #[test]
        fn valid_states_satisfy_uncertainty(cov in single_mode_cov()) {
            let s = GaussianState::new(DVector::zeros(2), cov).unwrap();
            prop_assert!(uncertainty_margin(s.cov()) >= -STATE_PSD_TOL);
            let h = entropy(&s).unwrap();
            prop_assert!(h >= 0.0);
        }

        #[test]
        fn entropy_ignores_mean(cov in single_mode_cov(), q in -5.0f64..5.0, p in -5.0f64..5.0) {
            let s0 = GaussianState::new(DVector::zeros(2), cov.clone()).unwrap();
            let s1 = GaussianState::new(DVector::from_vec(vec![q, p]), cov).unwrap();
            prop_assert_eq!(entropy(&s0).unwrap(), entropy(&s1).unwrap());
        }

        #[test]
        fn g_monotone(x in 0.0f64..100.0, dx in 1e-6f64..10.0) {
            prop_assert!(g_unchecked(x) < g_unchecked(x + dx));
        }
    }

    #[test]
    fn pure_states_have_zero_entropy() {
        for &r in &[0.0, 0.3, 1.0] {
            let s = GaussianState::squeezed_thermal(0.0, r, [0.0, 0.0]).unwrap();
            let h = entropy(&s).unwrap();
            assert!(h.abs() < 1e-9, "r={r}: {h}");
            assert!(symplectic_eigenvalues(s.cov()).unwrap()[0] <= 1.0 + 1e-9);
        }
    }
}
