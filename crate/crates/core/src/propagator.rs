//! Linear input-output maps `ξ(t) = M(t) ξ(0)` on the operator vector
//! `ξ = (a₁, a₁†, …, a_N, a_N†, S, S†)`.
//!
//! Heisenberg equations for `H = iħ Σₙ kₙ (aₙ†S† − aₙS)` with `[S, S†] = a`:
//!
//! ```text
//! d aₙ/dt = kₙ S†        d S/dt = a Σₙ kₙ aₙ†
//! ```
//!
//! The second line is where the rescaled commutator enters
//! (`[aₙ†S†, S] = −a aₙ†`); with `[S, S†] = 1` the N=1 solution would not have
//! the `√a` / `1/√a` asymmetry between its two rows. Differentiating twice gives
//! `S̈ = β² S` with `β² = a Σ kₙ²`, and only the symmetric combination
//! `Σ kₙ aₙ` couples to `S†`, so for any N:
//!
//! ```text
//! S(t)  = cosh(βt) S(0) + (a/β) sinh(βt) Σₙ kₙ aₙ†(0)
//! aₙ(t) = (kₙ/β) sinh(βt) S†(0) + aₙ(0) + (kₙ a/β²)(cosh(βt) − 1) Σₘ kₘ aₘ(0)
//! ```
//!
//! which collapses to the familiar two-mode squeezer for N=1 and to the
//! three-mode solution for N=2.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::ModelConfig;

/// Fixed ordering `[a₁, a₁†, …, a_N, a_N†, S, S†]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OperatorBasis {
    n_stokes: usize,
}

impl OperatorBasis {
    pub fn new(n_stokes: usize) -> Self {
        Self { n_stokes }
    }

    pub fn n_stokes(&self) -> usize {
        self.n_stokes
    }

    pub fn dim(&self) -> usize {
        2 * (self.n_stokes + 1)
    }

    /// Index of `aₙ` (zero-based mode).
    pub fn stokes(&self, mode: usize) -> usize {
        debug_assert!(mode < self.n_stokes);
        2 * mode
    }

    /// Index of `S`.
    pub fn spin(&self) -> usize {
        2 * self.n_stokes
    }

    /// Index of the adjoint partner of operator `i`.
    pub fn adjoint(i: usize) -> usize {
        i ^ 1
    }

    /// `K[i][j] = [ξᵢ, ξⱼ]`: `[aₙ, aₙ†] = 1`, `[S, S†] = boson_factor`.
    pub fn commutator_gram(&self, boson_factor: f64) -> DMatrix<f64> {
        let mut k = DMatrix::zeros(self.dim(), self.dim());
        for m in 0..=self.n_stokes {
            let c = if m == self.n_stokes { boson_factor } else { 1.0 };
            k[(2 * m, 2 * m + 1)] = c;
            k[(2 * m + 1, 2 * m)] = -c;
        }
        k
    }

    /// Permutation exchanging every operator with its adjoint.
    pub fn adjoint_swap(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim(), self.dim(), |i, j| if j == Self::adjoint(i) { 1.0 } else { 0.0 })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BogoliubovTransform {
    pub matrix: DMatrix<f64>,
    /// Evolution time in units of the couplings.
    pub time: f64,
    pub config: ModelConfig,
}

impl BogoliubovTransform {
    pub fn basis(&self) -> OperatorBasis {
        OperatorBasis::new(self.config.n_stokes())
    }

    /// `max_i Σ_j |(M K Mᵀ − K)_ij|`.
    pub fn commutator_defect(&self) -> f64 {
        let k = self.basis().commutator_gram(self.config.boson_factor());
        let d = &self.matrix * &k * self.matrix.transpose() - k;
        inf_norm(&d)
    }

    /// Largest deviation from `P M P = M` with `P` the adjoint swap.
    pub fn conjugation_defect(&self) -> f64 {
        let p = self.basis().adjoint_swap();
        (&p * &self.matrix * &p - &self.matrix).amax()
    }
}

/// Max row sum of absolute values.
pub fn inf_norm(m: &DMatrix<f64>) -> f64 {
    m.row_iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// `sinh(βt)/β`, finite as β → 0.
fn sinh_over(beta: f64, t: f64) -> f64 {
    let x = beta * t;
    if x.abs() < 1e-3 {
        t * (1.0 + x * x / 6.0 + x.powi(4) / 120.0)
    } else {
        x.sinh() / beta
    }
}

/// `(cosh(βt) − 1)/β²`, finite as β → 0.
fn cosh_minus_one_over(beta: f64, t: f64) -> f64 {
    let x = beta * t;
    if x.abs() < 1e-3 {
        0.5 * t * t * (1.0 + x * x / 12.0 + x.powi(4) / 360.0)
    } else {
        let h = (0.5 * x).sinh() / beta;
        2.0 * h * h
    }
}

/// Closed-form transform for any number of Stokes modes.
pub fn analytic_transform(config: &ModelConfig, t: f64) -> BogoliubovTransform {
    let basis = OperatorBasis::new(config.n_stokes());
    let a = config.boson_factor();
    let ks = config.couplings();
    let beta = config.collective_rate();
    let sh = sinh_over(beta, t);
    let ch1 = cosh_minus_one_over(beta, t);
    let ch = if (beta * t).abs() < 1e-3 { 1.0 + beta * beta * ch1 } else { (beta * t).cosh() };

    let s = basis.spin();
    let mut m = DMatrix::zeros(basis.dim(), basis.dim());
    m[(s, s)] = ch;
    m[(s + 1, s + 1)] = ch;
    for (n, &kn) in ks.iter().enumerate() {
        let an = basis.stokes(n);
        m[(s, an + 1)] = a * kn * sh;
        m[(s + 1, an)] = a * kn * sh;
        m[(an, s + 1)] = kn * sh;
        m[(an + 1, s)] = kn * sh;
        for (j, &kj) in ks.iter().enumerate() {
            let aj = basis.stokes(j);
            let delta = if n == j { 1.0 } else { 0.0 };
            m[(an, aj)] = delta + a * kn * kj * ch1;
            m[(an + 1, aj + 1)] = delta + a * kn * kj * ch1;
        }
    }
    BogoliubovTransform { matrix: m, time: t, config: config.clone() }
}

/// Constant generator `A` of `dξ/dt = A ξ`, derived row by row from the
/// Heisenberg equations.
pub fn generator(config: &ModelConfig) -> DMatrix<f64> {
    let basis = OperatorBasis::new(config.n_stokes());
    let a = config.boson_factor();
    let s = basis.spin();
    let mut g = DMatrix::zeros(basis.dim(), basis.dim());
    for (n, &k) in config.couplings().iter().enumerate() {
        let an = basis.stokes(n);
        g[(an, s + 1)] = k; // ȧₙ = kₙ S†
        g[(an + 1, s)] = k;
        g[(s, an + 1)] = a * k; // Ṡ = a Σ kₙ aₙ†
        g[(s + 1, an)] = a * k;
    }
    g
}

/// `M(t) = exp(A t)` by Padé scaling-and-squaring; an oracle independent of
/// the closed form.
pub fn numeric_transform(config: &ModelConfig, t: f64) -> Result<BogoliubovTransform> {
    let m = (generator(config) * t).exp();
    if let Some(bad) = m.iter().find(|v| !v.is_finite()) {
        return Err(Error::Numerical(format!(
            "matrix exponential produced {bad} (t = {t}, β = {})",
            config.collective_rate()
        )));
    }
    Ok(BogoliubovTransform { matrix: m, time: t, config: config.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_config;
    use proptest::prelude::*;

    fn max_rel_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
        let scale = a.amax().max(b.amax()).max(1.0);
        (a - b).amax() / scale
    }

    #[test]
    fn identity_at_zero() {
        for ks in [vec![1.0], vec![1.0, -2.0], vec![0.3, 0.5, 4.0]] {
            let c = build_config(0.1, &ks).unwrap();
            let id = DMatrix::identity(2 * ks.len() + 2, 2 * ks.len() + 2);
            assert_eq!(analytic_transform(&c, 0.0).matrix, id);
            assert!((numeric_transform(&c, 0.0).unwrap().matrix - &id).amax() < 1e-15);
        }
    }

    #[test]
    fn two_mode_squeezer_row() {
        let c = build_config(0.0, &[1.0]).unwrap();
        let m = analytic_transform(&c, 1.0);
        let s = 2;
        assert!((m.matrix[(s, s)] - 1.54308063).abs() < 1e-8);
        assert!((m.matrix[(s, 1)] - 1.17520119).abs() < 1e-8);
        let n = numeric_transform(&c, 1.0).unwrap();
        assert!((m.matrix.clone() - n.matrix).amax() < 1e-9);
    }

    #[test]
    fn matches_written_bipartite_solution() {
        let c = build_config(0.2, &[1.3]).unwrap();
        let a = c.boson_factor();
        let t = 0.9;
        let x = 1.3 * a.sqrt() * t;
        let m = analytic_transform(&c, t).matrix;
        assert!((m[(2, 2)] - x.cosh()).abs() < 1e-14);
        assert!((m[(2, 1)] - a.sqrt() * x.sinh()).abs() < 1e-14);
        assert!((m[(0, 3)] - x.sinh() / a.sqrt()).abs() < 1e-14);
        assert!((m[(0, 0)] - x.cosh()).abs() < 1e-14);
    }

    #[test]
    fn matches_written_tripartite_solution() {
        let (k1, k2) = (1.0, 0.5);
        let c = build_config(0.05, &[k1, k2]).unwrap();
        let a = c.boson_factor();
        let beta = ((k1 * k1 + k2 * k2) * a).sqrt();
        let t = 1.7;
        let (sh, ch) = ((beta * t).sinh(), (beta * t).cosh());
        let m = analytic_transform(&c, t).matrix;
        let s = 4;
        let close = |x: f64, y: f64| assert!((x - y).abs() < 1e-12 * y.abs().max(1.0), "{x} vs {y}");
        close(m[(s, s)], ch);
        close(m[(s, 1)], k1 * a / beta * sh);
        close(m[(s, 3)], k2 * a / beta * sh);
        close(m[(0, s + 1)], k1 / beta * sh);
        close(m[(0, 0)], k1 * k1 * a / (beta * beta) * (ch - 1.0) + 1.0);
        close(m[(0, 2)], k1 * k2 * a / (beta * beta) * (ch - 1.0));
        close(m[(2, s + 1)], k2 / beta * sh);
        close(m[(2, 0)], k1 * k2 * a / (beta * beta) * (ch - 1.0));
        close(m[(2, 2)], k2 * k2 * a / (beta * beta) * (ch - 1.0) + 1.0);
    }

    #[test]
    fn equal_coupling_cross_terms() {
        let c = build_config(0.0, &[1.0, 1.0]).unwrap();
        for t in [0.1, 0.7, 2.5] {
            let m = analytic_transform(&c, t).matrix;
            let expected = ((2.0f64).sqrt() * t).cosh() / 2.0 - 0.5;
            assert!((m[(0, 2)] - expected).abs() < 1e-12);
            assert!((m[(2, 0)] - expected).abs() < 1e-12);
            let n = numeric_transform(&c, t).unwrap().matrix;
            assert!((n[(0, 2)] - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_couplings_is_identity() {
        let c = build_config(0.3, &[0.0, 0.0]).unwrap();
        let m = analytic_transform(&c, 5.0).matrix;
        assert_eq!(m, DMatrix::identity(6, 6));
    }

    #[test]
    fn small_beta_series_is_smooth() {
        for beta_t in [1e-6, 9.99e-4, 1.001e-3, 1e-2] {
            let c = build_config(0.0, &[beta_t]).unwrap();
            let m = analytic_transform(&c, 1.0).matrix;
            assert!((m[(2, 2)] - beta_t.cosh()).abs() < 1e-15);
            assert!((m[(2, 1)] - beta_t.sinh()).abs() < 1e-15);
        }
    }

    #[test]
    fn three_mode_semigroup() {
        let c = build_config(1.0 / 20.0, &[1.0, 1.0, 1.0]).unwrap();
        let m7 = numeric_transform(&c, 0.7).unwrap().matrix;
        let m43 = numeric_transform(&c, 0.4).unwrap().matrix * numeric_transform(&c, 0.3).unwrap().matrix;
        assert!((m7 - m43).amax() < 1e-9);
    }

    #[test]
    fn negative_time_inverts() {
        let c = build_config(0.1, &[1.0, -0.4]).unwrap();
        let prod = analytic_transform(&c, 1.3).matrix * analytic_transform(&c, -1.3).matrix;
        assert!((prod - DMatrix::identity(6, 6)).amax() < 1e-12);
    }

    #[test]
    fn gram_layout() {
        let k = OperatorBasis::new(2).commutator_gram(0.5);
        assert_eq!(k[(0, 1)], 1.0);
        assert_eq!(k[(3, 2)], -1.0);
        assert_eq!(k[(4, 5)], 0.5);
        assert_eq!(k[(5, 4)], -0.5);
        assert_eq!(k.iter().filter(|v| **v != 0.0).count(), 6);
    }

    fn config_strategy() -> impl Strategy<Value = (ModelConfig, f64)> {
        (0.0f64..0.5, prop::collection::vec(-10.0f64..10.0, 1..=5), 0.0f64..3.0)
            .prop_map(|(r, ks, t)| (build_config(r, &ks).unwrap(), t))
    }

    proptest! {
        // Relative to ‖M‖²: at βt ~ 60 the entries are ~1e26 and no f64 matrix
        // can meet an absolute 1e-10 bound.
        #[test]
        fn commutators_preserved((c, t) in config_strategy()) {
            let m = analytic_transform(&c, t);
            let scale = inf_norm(&m.matrix).powi(2).max(1.0);
            prop_assert!(m.commutator_defect() / scale <= 1e-13);
            prop_assert_eq!(m.conjugation_defect(), 0.0);
        }

        #[test]
        fn analytic_matches_numeric((c, t) in config_strategy()) {
            let a = analytic_transform(&c, t).matrix;
            let n = numeric_transform(&c, t).unwrap().matrix;
            prop_assert!(max_rel_diff(&a, &n) <= 1e-11, "{}", max_rel_diff(&a, &n));
        }

        #[test]
        fn semigroup((c, t1) in config_strategy(), t2 in 0.0f64..1.5) {
            let sum = analytic_transform(&c, t1 + t2).matrix;
            let prod = analytic_transform(&c, t1).matrix * analytic_transform(&c, t2).matrix;
            prop_assert!(max_rel_diff(&sum, &prod) <= 1e-12);
        }

        #[test]
        fn moderate_range_is_absolute(
            r in 0.0f64..0.5, ks in prop::collection::vec(-1.0f64..1.0, 1..=3), t in 0.0f64..2.0,
        ) {
            let c = build_config(r, &ks).unwrap();
            let m = analytic_transform(&c, t);
            prop_assert!(m.commutator_defect() <= 1e-10);
            let n = numeric_transform(&c, t).unwrap();
            prop_assert!((m.matrix - n.matrix).amax() <= 1e-9);
        }

        #[test]
        fn reduces_to_single_mode(r in 0.0f64..0.5, k in -10.0f64..10.0, extra in 1usize..4, t in 0.0f64..3.0) {
            let mut ks = vec![0.0; extra + 1];
            ks[0] = k;
            let big = analytic_transform(&build_config(r, &ks).unwrap(), t).matrix;
            let small = analytic_transform(&build_config(r, &[k]).unwrap(), t).matrix;
            let bb = OperatorBasis::new(extra + 1);
            // embed: indices 0,1 are mode 1, 2,3 are the spin in the small basis
            let map = |i: usize| if i < 2 { i } else { bb.spin() + i - 2 };
            let mut expected = DMatrix::identity(bb.dim(), bb.dim());
            for i in 0..4 {
                for j in 0..4 {
                    expected[(map(i), map(j))] = small[(i, j)];
                }
            }
            prop_assert!(max_rel_diff(&big, &expected) <= 1e-12);
        }

        #[test]
        fn relabeling_equivariance(r in 0.0f64..0.5, ks in prop::collection::vec(-3.0f64..3.0, 2..=4), t in 0.0f64..2.0) {
            let n = ks.len();
            let mut perm: Vec<usize> = (0..n).collect();
            perm.rotate_left(1);
            let permuted: Vec<f64> = perm.iter().map(|&i| ks[i]).collect();
            let m = analytic_transform(&build_config(r, &ks).unwrap(), t).matrix;
            let mp = analytic_transform(&build_config(r, &permuted).unwrap(), t).matrix;
            let basis = OperatorBasis::new(n);
            // new mode q is old mode perm[q]
            let old = |i: usize| if i < basis.spin() { 2 * perm[i / 2] + i % 2 } else { i };
            let mut diff = 0.0f64;
            for i in 0..basis.dim() {
                for j in 0..basis.dim() {
                    diff = diff.max((mp[(i, j)] - m[(old(i), old(j))]).abs());
                }
            }
            prop_assert!(diff <= 1e-12 * m.amax().max(1.0));
        }
    }
}
