//! Centered second moments of the operator vector and their quadrature form.
//!
//! Stokes modes start in vacuum. The spin starts in the coherent spin state
//! `(cosθ|1⟩ + sinθ|2⟩)^⊗N_a`; per atom `⟨σσ†⟩ = cos²θ`, `⟨σ†σ⟩ = sin²θ`,
//! `⟨σσ⟩ = 0` and `⟨σ⟩ = cosθ sinθ`, so the collective fluctuations are
//!
//! ```text
//! ⟨δS δS†⟩ = cos⁴θ   ⟨δS† δS⟩ = sin⁴θ   ⟨δS δS⟩ = ⟨δS† δS†⟩ = −sin²θ cos²θ
//! ```
//!
//! independently of `N_a`. This is a minimum-uncertainty state with
//! `Var(x_s) = a²` and `Var(p_s) = 1`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelConfig;
use crate::propagator::{BogoliubovTransform, OperatorBasis};

/// Initial spin fluctuations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinInit {
    /// Exact moments of the coherent spin state.
    #[default]
    Css,
    /// Vacuum of the rescaled boson `S/√a`: `⟨δSδS†⟩ = a`, nothing else.
    Vacuum,
}

impl fmt::Display for SpinInit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpinInit::Css => "css",
            SpinInit::Vacuum => "vacuum",
        })
    }
}

impl FromStr for SpinInit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "css" => Ok(SpinInit::Css),
            "vacuum" => Ok(SpinInit::Vacuum),
            other => Err(Error::Config(format!("unknown spin init `{other}` (css|vacuum)"))),
        }
    }
}

/// A mode of the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Zero-based Stokes mode.
    Stokes(usize),
    Spin,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Stokes(i) => write!(f, "{}", i + 1),
            Mode::Spin => f.write_str("s"),
        }
    }
}

/// `C_ij = ⟨δξᵢ δξⱼ⟩`, operator ordered, in [`OperatorBasis`] ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentMatrix {
    pub matrix: DMatrix<f64>,
    pub config: ModelConfig,
    pub time: f64,
}

impl MomentMatrix {
    pub fn basis(&self) -> OperatorBasis {
        OperatorBasis::new(self.config.n_stokes())
    }

    /// `max |C − Cᵀ − K|`; zero for any physical state.
    pub fn commutator_defect(&self) -> f64 {
        let k = self.basis().commutator_gram(self.config.boson_factor());
        (&self.matrix - self.matrix.transpose() - k).amax()
    }
}

pub fn initial_moments(config: &ModelConfig) -> MomentMatrix {
    initial_moments_with(config, SpinInit::Css)
}

pub fn initial_moments_with(config: &ModelConfig, init: SpinInit) -> MomentMatrix {
    let basis = OperatorBasis::new(config.n_stokes());
    let mut c = DMatrix::zeros(basis.dim(), basis.dim());
    for n in 0..config.n_stokes() {
        let i = basis.stokes(n);
        c[(i, i + 1)] = 1.0;
    }
    let s = basis.spin();
    match init {
        SpinInit::Css => {
            let (c2, s2) = (config.cos2_theta(), config.sin2_theta());
            c[(s, s + 1)] = c2 * c2;
            c[(s + 1, s)] = s2 * s2;
            c[(s, s)] = -s2 * c2;
            c[(s + 1, s + 1)] = -s2 * c2;
        }
        SpinInit::Vacuum => c[(s, s + 1)] = config.boson_factor(),
    }
    MomentMatrix { matrix: c, config: config.clone(), time: 0.0 }
}

/// `C(t) = M C₀ Mᵀ`.
pub fn propagate(c0: &MomentMatrix, m: &BogoliubovTransform) -> Result<MomentMatrix> {
    if c0.matrix.shape() != m.matrix.shape() {
        return Err(Error::Contract(format!(
            "moment matrix is {:?} but transform is {:?}",
            c0.matrix.shape(),
            m.matrix.shape()
        )));
    }
    if c0.config != m.config {
        return Err(Error::Contract("moments and transform use different configurations".into()));
    }
    Ok(MomentMatrix {
        matrix: &m.matrix * &c0.matrix * m.matrix.transpose(),
        config: c0.config.clone(),
        time: c0.time + m.time,
    })
}

/// Symmetrized covariance over `(x₁, p₁, …, x_N, p_N, x_s, p_s)` with
/// `x = a + a†`, `p = −i(a − a†)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureCovariance {
    pub matrix: DMatrix<f64>,
    n_stokes: usize,
}

impl QuadratureCovariance {
    pub fn n_stokes(&self) -> usize {
        self.n_stokes
    }

    fn slot(&self, mode: Mode) -> Result<usize> {
        match mode {
            Mode::Stokes(i) if i < self.n_stokes => Ok(2 * i),
            Mode::Stokes(i) => Err(Error::ModeIndex { index: i, n_stokes: self.n_stokes }),
            Mode::Spin => Ok(2 * self.n_stokes),
        }
    }

    pub fn x(&self, mode: Mode) -> Result<usize> {
        self.slot(mode)
    }

    pub fn p(&self, mode: Mode) -> Result<usize> {
        self.slot(mode).map(|i| i + 1)
    }

    /// Symmetrized covariance of two quadratures by index.
    pub fn cov(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)]
    }

    /// Variance of `Σ cᵢ qᵢ` for `(index, coefficient)` terms.
    pub fn variance(&self, terms: &[(usize, f64)]) -> f64 {
        terms
            .iter()
            .flat_map(|&(i, ci)| terms.iter().map(move |&(j, cj)| ci * cj * self.matrix[(i, j)]))
            .sum()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.matrix.clone().symmetric_eigenvalues().min()
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }

    /// `Var(x)·Var(p)` for one mode.
    pub fn uncertainty_product(&self, mode: Mode) -> Result<f64> {
        let (x, p) = (self.x(mode)?, self.p(mode)?);
        Ok(self.matrix[(x, x)] * self.matrix[(p, p)])
    }
}

/// `Σ = Re(T C Tᵀ)` with `T` the per-mode `(a, a†) → (x, p)` map.
pub fn to_quadratures(c: &MomentMatrix) -> QuadratureCovariance {
    let dim = c.matrix.nrows();
    let i = Complex64::i();
    let mut t = DMatrix::<Complex64>::zeros(dim, dim);
    for m in 0..dim / 2 {
        t[(2 * m, 2 * m)] = 1.0.into();
        t[(2 * m, 2 * m + 1)] = 1.0.into();
        t[(2 * m + 1, 2 * m)] = -i;
        t[(2 * m + 1, 2 * m + 1)] = i;
    }
    let cc = c.matrix.map(Complex64::from);
    let sigma = (&t * cc * t.transpose()).map(|z| z.re);
    QuadratureCovariance { matrix: (&sigma + sigma.transpose()) * 0.5, n_stokes: c.config.n_stokes() }
}

/// Moments at time `t` from scratch.
pub fn moments_at(config: &ModelConfig, init: SpinInit, t: f64) -> MomentMatrix {
    let m = crate::propagator::analytic_transform(config, t);
    propagate(&initial_moments_with(config, init), &m).expect("shapes agree by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_config;
    use crate::propagator::analytic_transform;
    use proptest::prelude::*;

    /// Brute-force CSS moments of `S = N^{-1/2} Σ |1⟩⟨2|ᵢ` on the full
    /// 2^N-dimensional product space.
    fn brute_force_css(n_atoms: usize, theta: f64) -> (f64, f64, f64) {
        let dim = 1usize << n_atoms;
        let (s, c) = theta.sin_cos();
        // bit i set = atom i in |2⟩
        let psi: Vec<f64> = (0..dim)
            .map(|b| (0..n_atoms).map(|i| if b >> i & 1 == 1 { s } else { c }).product())
            .collect();
        let norm = (n_atoms as f64).sqrt();
        let lower = |v: &[f64]| {
            let mut out = vec![0.0; dim];
            for (b, &amp) in v.iter().enumerate() {
                for i in 0..n_atoms {
                    if b >> i & 1 == 1 {
                        out[b & !(1 << i)] += amp / norm;
                    }
                }
            }
            out
        };
        let raise = |v: &[f64]| {
            let mut out = vec![0.0; dim];
            for (b, &amp) in v.iter().enumerate() {
                for i in 0..n_atoms {
                    if b >> i & 1 == 0 {
                        out[b | 1 << i] += amp / norm;
                    }
                }
            }
            out
        };
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let s_psi = lower(&psi);
        let sd_psi = raise(&psi);
        let mean = dot(&psi, &s_psi);
        let ssd = dot(&sd_psi, &sd_psi) - mean * mean; // ⟨S S†⟩ = ‖S†ψ‖²
        let sds = dot(&s_psi, &s_psi) - mean * mean;
        let ss = dot(&psi, &lower(&s_psi)) - mean * mean;
        (ssd, sds, ss)
    }

    #[test]
    fn css_moments_match_brute_force() {
        let c = build_config(1.0 / 20.0, &[1.0]).unwrap();
        let m = initial_moments(&c).matrix;
        assert!((m[(2, 3)] - 0.995018684).abs() < 1e-8);
        assert!((m[(3, 2)] - 6.2189e-6).abs() < 1e-9);
        assert!((m[(2, 2)] + 0.002487546).abs() < 1e-8);
        for n_atoms in [2, 3, 5] {
            let (ssd, sds, ss) = brute_force_css(n_atoms, c.theta());
            assert!((ssd - m[(2, 3)]).abs() < 1e-12, "N_a={n_atoms}");
            assert!((sds - m[(3, 2)]).abs() < 1e-12);
            assert!((ss - m[(2, 2)]).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_angle_spin_is_vacuum_like() {
        let m = initial_moments(&build_config(0.0, &[1.0]).unwrap()).matrix;
        assert_eq!((m[(2, 3)], m[(3, 2)], m[(2, 2)]), (1.0, 0.0, 0.0));
    }

    #[test]
    fn normal_minus_antinormal_is_boson_factor() {
        for r in [0.0, 0.02, 0.3, 0.9] {
            for init in [SpinInit::Css, SpinInit::Vacuum] {
                let c = build_config(r, &[1.0, 2.0]).unwrap();
                let m = initial_moments_with(&c, init);
                assert!((m.matrix[(4, 5)] - m.matrix[(5, 4)] - c.boson_factor()).abs() < 1e-15);
                assert!(m.commutator_defect() < 1e-15);
            }
        }
    }

    #[test]
    fn initial_quadratures() {
        let c = build_config(1.0 / 20.0, &[1.0]).unwrap();
        let q = to_quadratures(&initial_moments(&c));
        let (x1, p1) = (q.x(Mode::Stokes(0)).unwrap(), q.p(Mode::Stokes(0)).unwrap());
        assert!((q.cov(x1, x1) - 1.0).abs() < 1e-15);
        assert!((q.cov(p1, p1) - 1.0).abs() < 1e-15);
        assert_eq!(q.cov(x1, p1), 0.0);
        let (xs, ps) = (q.x(Mode::Spin).unwrap(), q.p(Mode::Spin).unwrap());
        let a = c.boson_factor();
        assert!((q.cov(xs, xs) - a * a).abs() < 1e-14);
        assert!((q.cov(xs, xs) - 0.99005).abs() < 1e-5);
        assert!((q.cov(ps, ps) - 1.0).abs() < 1e-14);
        assert!((q.uncertainty_product(Mode::Spin).unwrap() - a * a).abs() < 1e-10);
        assert!(matches!(q.x(Mode::Stokes(1)), Err(Error::ModeIndex { index: 1, n_stokes: 1 })));
    }

    #[test]
    fn identity_propagation() {
        let c = build_config(0.2, &[1.0, 0.5]).unwrap();
        let c0 = initial_moments(&c);
        let id = analytic_transform(&c, 0.0);
        assert_eq!(propagate(&c0, &id).unwrap().matrix, c0.matrix);
    }

    #[test]
    fn contract_errors() {
        let c1 = build_config(0.2, &[1.0]).unwrap();
        let c2 = build_config(0.2, &[1.0, 1.0]).unwrap();
        let c3 = build_config(0.1, &[1.0]).unwrap();
        let c0 = initial_moments(&c1);
        assert!(matches!(propagate(&c0, &analytic_transform(&c2, 1.0)), Err(Error::Contract(_))));
        assert!(matches!(propagate(&c0, &analytic_transform(&c3, 1.0)), Err(Error::Contract(_))));
    }

    #[test]
    fn difference_quadrature_squeezes() {
        // a = 1: x₁ − x_s scales as e^{-t}
        let c = build_config(0.0, &[1.0]).unwrap();
        let q = to_quadratures(&moments_at(&c, SpinInit::Css, 1.0));
        let (x1, xs) = (q.x(Mode::Stokes(0)).unwrap(), q.x(Mode::Spin).unwrap());
        let v = q.variance(&[(x1, 1.0), (xs, -1.0)]);
        assert!((v - 2.0 * (-2.0f64).exp()).abs() < 1e-8);
        assert!((v - 0.27067057).abs() < 1e-8);
    }

    #[test]
    fn spin_init_parsing() {
        assert_eq!("css".parse::<SpinInit>().unwrap(), SpinInit::Css);
        assert_eq!("vacuum".parse::<SpinInit>().unwrap(), SpinInit::Vacuum);
        assert!("squeezed".parse::<SpinInit>().is_err());
        assert_eq!(SpinInit::Vacuum.to_string(), "vacuum");
    }

    proptest! {
        #[test]
        fn physical_at_all_times(
            r in 0.0f64..0.5, ks in prop::collection::vec(-2.0f64..2.0, 1..=3),
            t in 0.0f64..2.0, vacuum in any::<bool>(),
        ) {
            let init = if vacuum { SpinInit::Vacuum } else { SpinInit::Css };
            let c = build_config(r, &ks).unwrap();
            let c0 = initial_moments_with(&c, init);
            let ct = moments_at(&c, init, t);
            let scale = ct.matrix.amax().max(1.0);
            prop_assert!(ct.commutator_defect() <= 1e-12 * scale);
            let q0 = to_quadratures(&c0);
            let q = to_quadratures(&ct);
            prop_assert!(q.min_eigenvalue() >= -1e-10 * scale);
            let a = c.boson_factor();
            prop_assert!(q.uncertainty_product(Mode::Spin).unwrap() >= a * a * (1.0 - 1e-10));
            prop_assert!(q0.min_eigenvalue() > 0.0);
            for i in 0..q.matrix.nrows() {
                prop_assert!(q.cov(i, i) >= 0.0);
            }
        }

        // det Σ(t) = det Σ(0) since tr A = 0; kept to βt ≲ 3 where the
        // determinant is well conditioned.
        #[test]
        fn purity_preserved(
            r in 0.0f64..0.5, ks in prop::collection::vec(-1.0f64..1.0, 1..=3), t in 0.0f64..2.0,
        ) {
            let c = build_config(r, &ks).unwrap();
            let d0 = to_quadratures(&initial_moments(&c)).determinant();
            let dt = to_quadratures(&moments_at(&c, SpinInit::Css, t)).determinant();
            prop_assert!((dt - d0).abs() <= 1e-8, "{d0} {dt}");
        }
    }
}
