//! Rank-one Gaussian measurements and the statistics of their outcomes.
//!
//! A measurement with POVM covariance `μ` applied to a state `σ` produces
//! Gaussian outcomes with covariance `σ + μ`. Conditioning the A outcomes on
//! the B outcomes gives a Schur complement whose determinant drives every
//! entropy in this crate.
//!
//! Near the homodyne end (`L → 0`) the POVM covariance has entries of order
//! `1/L` and the textbook `Ã - C̃ B̃⁻¹ C̃ᵀ` loses every significant digit. The
//! [`ConditioningKernel`] instead expands each determinant as a sum of
//! nonnegative terms that are polynomial in the squeezing parameters, so it
//! stays accurate all the way down to `L = 0`.

use core::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::linalg::{cholesky_in_place, Mat2, Mat4};
use crate::math;
use crate::symplectic::{beamsplitter, phase_rotation, symmetrize4, CovMat2, TwoModeCov};

/// Smallest admissible squeezing parameter; stands in for homodyne (`L = 0`).
pub const L_MIN: f64 = 1e-9;

/// `ln(2πe)`, the per-mode constant of a Gaussian differential entropy.
pub const LN_2PI_E: f64 = 2.837_877_066_409_345_6;

/// Condition number above which a block is treated as singular.
pub const SINGULAR_CONDITION: f64 = 1e14;

/// Single-mode rank-one Gaussian measurement: squeezed-vacuum POVM seed with
/// squeezing `l` along angle `theta`.
///
/// `l = 1` is heterodyne; `l → 0` is homodyne of the quadrature at `theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalMeasurement {
    theta: f64,
    l: f64,
}

impl LocalMeasurement {
    /// `theta` is reduced into `[0, π)`; `l` must lie in `[L_MIN, 1]`.
    pub fn new(theta: f64, l: f64) -> Result<Self> {
        if !(L_MIN..=1.0).contains(&l) {
            return Err(Error::Domain {
                what: "measurement squeezing L",
                value: l,
            });
        }
        if !theta.is_finite() {
            return Err(Error::Domain {
                what: "measurement angle",
                value: theta,
            });
        }
        Ok(LocalMeasurement {
            theta: math::wrap(theta, 0.0, PI),
            l,
        })
    }

    pub fn heterodyne() -> Self {
        LocalMeasurement { theta: 0.0, l: 1.0 }
    }

    /// Closest admissible stand-in for homodyne detection at `theta`.
    pub fn near_homodyne(theta: f64) -> Self {
        LocalMeasurement {
            theta: math::wrap(theta, 0.0, PI),
            l: L_MIN,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn povm_cov(&self) -> CovMat2 {
        local_povm_cov(self)
    }
}

/// Two-mode measurement: phase shifts, a beamsplitter, then two local
/// measurements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointMeasurement {
    pub phi_a: f64,
    pub phi_b: f64,
    pub eta: f64,
    pub ma: LocalMeasurement,
    pub mb: LocalMeasurement,
}

impl JointMeasurement {
    pub fn new(
        phi_a: f64,
        phi_b: f64,
        eta: f64,
        ma: LocalMeasurement,
        mb: LocalMeasurement,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::Domain {
                what: "beamsplitter transmissivity",
                value: eta,
            });
        }
        if !phi_a.is_finite() || !phi_b.is_finite() {
            return Err(Error::Domain {
                what: "phase shift",
                value: if phi_a.is_finite() { phi_b } else { phi_a },
            });
        }
        Ok(JointMeasurement {
            phi_a,
            phi_b,
            eta,
            ma,
            mb,
        })
    }

    /// The embedding of a product of local measurements (`φ = 0`, `η = 1`).
    pub fn local(ma: LocalMeasurement, mb: LocalMeasurement) -> Self {
        JointMeasurement {
            phi_a: 0.0,
            phi_b: 0.0,
            eta: 1.0,
            ma,
            mb,
        }
    }

    /// Balanced beamsplitter followed by orthogonally squeezed detectors; the
    /// POVM seed is a two-mode squeezed state.
    pub fn two_mode_squeezed(l: f64) -> Result<Self> {
        Self::new(
            0.0,
            0.0,
            0.5,
            LocalMeasurement::new(0.0, l)?,
            LocalMeasurement::new(FRAC_PI_2, l)?,
        )
    }

    pub(crate) fn raw(&self) -> RawJoint {
        RawJoint {
            phi_a: self.phi_a,
            phi_b: self.phi_b,
            eta: self.eta,
            theta_a: self.ma.theta,
            theta_b: self.mb.theta,
            l_a: self.ma.l,
            l_b: self.mb.l,
        }
    }
}

/// Joint measurement parameters without the `L ≥ L_MIN` restriction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct RawJoint {
    pub phi_a: f64,
    pub phi_b: f64,
    pub eta: f64,
    pub theta_a: f64,
    pub theta_b: f64,
    pub l_a: f64,
    pub l_b: f64,
}

impl RawJoint {
    pub fn from_slice(p: &[f64]) -> Self {
        RawJoint {
            phi_a: p[0],
            phi_b: p[1],
            eta: p[2].clamp(0.0, 1.0),
            theta_a: p[3],
            theta_b: p[4],
            l_a: p[5],
            l_b: p[6],
        }
    }

    /// Orthonormal columns `W` with `μ_J = W diag(L_A, 1/L_A, L_B, 1/L_B) Wᵀ`.
    fn frame(&self) -> Mat4 {
        let s = beamsplitter(self.eta.clamp(0.0, 1.0)).unwrap_or(Mat4::IDENTITY)
            * phase_rotation(self.phi_a, self.phi_b);
        let q = phase_rotation(self.theta_a, self.theta_b);
        s.transpose() * q
    }
}

/// Covariance of a conditional outcome distribution for mode A.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalCov {
    m: CovMat2,
}

impl ConditionalCov {
    fn from_matrix(m: Mat2) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::Singular {
                condition_number: f64::INFINITY,
            });
        }
        Ok(ConditionalCov {
            m: CovMat2::new(m)?,
        })
    }

    pub fn matrix(&self) -> &Mat2 {
        self.m.matrix()
    }

    pub fn cov(&self) -> &CovMat2 {
        &self.m
    }

    pub fn det(&self) -> f64 {
        self.m.det()
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> (f64, f64) {
        self.m.eigenvalues()
    }
}

/// `R(θ) diag(L, 1/L) R(θ)ᵀ`, the covariance of a squeezed vacuum.
pub fn local_povm_cov(m: &LocalMeasurement) -> CovMat2 {
    let r = Mat2::rotation(m.theta);
    CovMat2::new_unchecked(r * Mat2::diag(m.l, 1.0 / m.l) * r.transpose())
}

/// `Rᵀ(φ_A, φ_B) Bᵀ(η) (μ_A ⊕ μ_B) B(η) R(φ_A, φ_B)`.
pub fn joint_povm_cov(m: &JointMeasurement) -> Mat4 {
    let local = Mat4::direct_sum(
        local_povm_cov(&m.ma).matrix(),
        local_povm_cov(&m.mb).matrix(),
    );
    let s = beamsplitter(m.eta).unwrap_or(Mat4::IDENTITY) * phase_rotation(m.phi_a, m.phi_b);
    symmetrize4(&s.congruence(&local))
}

/// Outcome covariance `σ + μ`. `μ = 0` gives the Wigner-function covariance.
pub fn outcome_cov(state: &TwoModeCov, mu: &Mat4) -> Result<TwoModeCov> {
    let asym = mu.asymmetry();
    if !(asym <= crate::symplectic::SYMMETRY_TOL * mu_scale(mu)) {
        return Err(Error::SymmetryViolation {
            max_asymmetry: asym,
        });
    }
    state.plus(mu)
}

fn mu_scale(mu: &Mat4) -> f64 {
    mu.0.iter()
        .flatten()
        .fold(1.0f64, |acc, v| acc.max(math::abs(*v)))
}

/// Textbook Schur complement `Ã - C̃ B̃⁻¹ C̃ᵀ` of an outcome covariance, with
/// the 2×2 inverse in closed form.
pub fn schur_complement(outcome: &TwoModeCov) -> Result<ConditionalCov> {
    let b = outcome.b().matrix();
    let cond = b.condition_number();
    if !(cond <= SINGULAR_CONDITION) {
        return Err(Error::Singular {
            condition_number: cond,
        });
    }
    let b_inv = b.inverse().ok_or(Error::Singular {
        condition_number: f64::INFINITY,
    })?;
    let c = outcome.c();
    ConditionalCov::from_matrix(*outcome.a().matrix() - *c * b_inv * c.transpose())
}

/// Conditional covariance of A's outcomes after a joint measurement.
pub fn conditional_cov_joint(state: &TwoModeCov, m: &JointMeasurement) -> Result<ConditionalCov> {
    ConditioningKernel::new(state)?.joint_cov(&m.raw())
}

/// Like [`conditional_cov_joint`] but with the flagged detectors replaced by
/// exact homodyne (`L = 0`), evaluated in closed form.
pub fn conditional_cov_joint_homodyne_limit(
    state: &TwoModeCov,
    m: &JointMeasurement,
    homodyne: [bool; 2],
) -> Result<ConditionalCov> {
    let mut raw = m.raw();
    if homodyne[0] {
        raw.l_a = 0.0;
    }
    if homodyne[1] {
        raw.l_b = 0.0;
    }
    ConditioningKernel::new(state)?.joint_cov(&raw)
}

/// Conditional covariance `A + μ_A - C (B + μ_B)⁻¹ Cᵀ` after local measurements.
pub fn conditional_cov_local(
    state: &TwoModeCov,
    ma: &LocalMeasurement,
    mb: &LocalMeasurement,
) -> Result<ConditionalCov> {
    let x = conditioned_on_b(state, mb.theta, mb.l)?;
    ConditionalCov::from_matrix(x + *local_povm_cov(ma).matrix())
}

/// `A - C (B + μ_B)⁻¹ Cᵀ`: covariance of A's state after measuring B.
///
/// `(B + μ_B)⁻¹` is assembled from `L·adj(B + μ_B)` and `L·det(B + μ_B)`,
/// both polynomial in `L`, so `l = 0` (homodyne) is exact.
pub(crate) fn conditioned_on_b(state: &TwoModeCov, theta: f64, l: f64) -> Result<Mat2> {
    let b = state.b().matrix();
    let (s, c) = math::sin_cos(theta);
    let e1 = [c, s];
    let e2 = [-s, c];
    let adj_b = b.adjugate();
    // L·adj(μ_B) = e1 e1ᵀ + L² e2 e2ᵀ
    let scaled_adj = adj_b.scale(l) + outer(e1).scale(1.0) + outer(e2).scale(l * l);
    let scaled_det = l * b.det() + l * l * adj_b.quad_form(e1) + adj_b.quad_form(e2) + l;
    if !(scaled_det > 0.0) {
        return Err(Error::Singular {
            condition_number: f64::INFINITY,
        });
    }
    let cm = state.c();
    let x = *state.a().matrix() - (*cm * scaled_adj * cm.transpose()).scale(1.0 / scaled_det);
    Ok(symmetrize2(&x))
}

/// `ln det(X + μ_A)` for a local measurement on A, expanded so no `1/L`
/// appears before the final division.
pub(crate) fn ln_det_plus_local(x: &Mat2, theta: f64, l: f64) -> f64 {
    let (s, c) = math::sin_cos(theta);
    let f1 = [c, s];
    let f2 = [-s, c];
    let adj = x.adjugate();
    let scaled = l * x.det() + l * l * adj.quad_form(f1) + adj.quad_form(f2) + l;
    math::ln(scaled) - math::ln(l)
}

fn outer(v: [f64; 2]) -> Mat2 {
    Mat2::new(v[0] * v[0], v[0] * v[1], v[1] * v[0], v[1] * v[1])
}

fn symmetrize2(m: &Mat2) -> Mat2 {
    let off = 0.5 * (m.0[0][1] + m.0[1][0]);
    Mat2::new(m.0[0][0], off, off, m.0[1][1])
}

/// Covariances with a Gaussian differential entropy.
pub trait GaussianCovariance {
    fn modes(&self) -> usize;
    fn determinant(&self) -> f64;
}

impl GaussianCovariance for CovMat2 {
    fn modes(&self) -> usize {
        1
    }
    fn determinant(&self) -> f64 {
        self.det()
    }
}

impl GaussianCovariance for ConditionalCov {
    fn modes(&self) -> usize {
        1
    }
    fn determinant(&self) -> f64 {
        self.det()
    }
}

impl GaussianCovariance for TwoModeCov {
    fn modes(&self) -> usize {
        2
    }
    fn determinant(&self) -> f64 {
        self.det()
    }
}

/// Differential entropy in nats: `½ ln det + k ln(2πe)` for `k` modes.
pub fn gaussian_entropy<C: GaussianCovariance + ?Sized>(cov: &C) -> Result<f64> {
    entropy_from_det(cov.determinant(), cov.modes())
}

pub fn entropy_from_det(det: f64, modes: usize) -> Result<f64> {
    if !(det > 0.0) || !det.is_finite() {
        return Err(Error::Domain {
            what: "covariance determinant",
            value: det,
        });
    }
    Ok(0.5 * math::ln(det) + modes as f64 * LN_2PI_E)
}

/// Either a pair of local measurements or one joint measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Measurement {
    Local(LocalMeasurement, LocalMeasurement),
    Joint(JointMeasurement),
}

/// `H(Ã|B̃)` from the conditional covariance.
pub fn conditional_entropy(state: &TwoModeCov, measurement: &Measurement) -> Result<f64> {
    let cond = match measurement {
        Measurement::Local(ma, mb) => conditional_cov_local(state, ma, mb)?,
        Measurement::Joint(m) => conditional_cov_joint(state, m)?,
    };
    gaussian_entropy(&cond)
}

/// `H(Ã,B̃) - H(B̃)` from the full outcome distribution; agrees with
/// [`conditional_entropy`] for well-conditioned measurements.
pub fn conditional_entropy_from_joint(
    state: &TwoModeCov,
    measurement: &Measurement,
) -> Result<f64> {
    let mu = match measurement {
        Measurement::Local(ma, mb) => {
            Mat4::direct_sum(local_povm_cov(ma).matrix(), local_povm_cov(mb).matrix())
        }
        Measurement::Joint(m) => joint_povm_cov(m),
    };
    let outcome = outcome_cov(state, &mu)?;
    Ok(gaussian_entropy(&outcome)? - gaussian_entropy(outcome.b())?)
}

/// Factorizations of a state reused across many conditional evaluations.
///
/// For a measurement frame `W` (orthonormal columns) and squeezing values
/// `λ = (L_A, 1/L_A, L_B, 1/L_B)`, every principal minor of `σ + W Λ Wᵀ`
/// restricted to rows `I` equals
/// `det P · Σ_T λ_T · det(H_Tᵀ H_T)` with `P = σ[I, I]` and `H = chol(P)⁻¹ W[I, :]`.
/// Each Gram determinant is a sum of squares, so every term is nonnegative.
/// Multiplying through by `L_A L_B` turns the weights into polynomials.
#[derive(Debug, Clone)]
pub struct ConditioningKernel {
    full: RowBlock,
    b_only: RowBlock,
    /// Rows `{v} ∪ B` for v = e₁, e₂, (e₁+e₂)/√2.
    bordered: [RowBlock; 3],
}

#[derive(Debug, Clone)]
struct RowBlock {
    /// Row selector applied to the 4-dimensional outcome space.
    rows: [[f64; 4]; 4],
    n: usize,
    chol: [[f64; 4]; 4],
    det_p: f64,
}

impl RowBlock {
    fn new(sigma: &Mat4, rows: [[f64; 4]; 4], n: usize) -> Result<Self> {
        let mut p = [[0.0; 4]; 4];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for k in 0..4 {
                    for l in 0..4 {
                        acc += rows[i][k] * sigma.0[k][l] * rows[j][l];
                    }
                }
                p[i][j] = acc;
            }
        }
        let mut chol = [[0.0; 4]; 4];
        if !cholesky_in_place(&p, &mut chol, n) {
            return Err(Error::NotPositiveDefinite {
                what: "state covariance",
            });
        }
        let det_p = (0..n).map(|i| chol[i][i] * chol[i][i]).product();
        Ok(RowBlock {
            rows,
            n,
            chol,
            det_p,
        })
    }

    /// `L_A L_B · det((σ + W Λ Wᵀ)[I, I])`.
    fn scaled_det(&self, w: &Mat4, l: [f64; 2]) -> f64 {
        let n = self.n;
        // G = rows · W, then H = chol⁻¹ G by forward substitution
        let mut h = [[0.0; 4]; 4];
        for i in 0..n {
            for j in 0..4 {
                let g: f64 = (0..4).map(|k| self.rows[i][k] * w.0[k][j]).sum();
                let mut v = g;
                for k in 0..i {
                    v -= self.chol[i][k] * h[k][j];
                }
                h[i][j] = v / self.chol[i][i];
            }
        }
        let minors = Minors::of(&h, n);
        let mut total = 0.0;
        for cols in 0u32..16 {
            let size = cols.count_ones() as usize;
            if size > n {
                continue;
            }
            let weight = pair_weight(cols, l[0]) * pair_weight(cols >> 2, l[1]);
            if weight == 0.0 {
                continue;
            }
            total += weight * minors.gram_det(n, cols);
        }
        self.det_p * total
    }
}

/// Scaled weight of one measured mode: columns `2p` (weight `L`) and `2p+1`
/// (weight `1/L`), multiplied by `L`.
#[inline]
fn pair_weight(cols: u32, l: f64) -> f64 {
    let small = if cols & 1 != 0 { l } else { 1.0 };
    let large = if cols & 2 != 0 { 1.0 } else { l };
    small * large
}

/// Every square minor of an `n × 4` matrix, indexed by row and column
/// bitmasks.
struct Minors([[f64; 16]; 16]);

impl Minors {
    /// Laplace expansion along the first selected row; removing a bit lowers
    /// a mask, so ascending order visits each smaller minor first.
    fn of(h: &[[f64; 4]; 4], n: usize) -> Self {
        let mut m = [[0.0; 16]; 16];
        m[0][0] = 1.0;
        for k in 1..=n {
            for &rows in MASKS_BY_SIZE[k] {
                if rows >= 1 << n {
                    continue;
                }
                let first = rows.trailing_zeros() as usize;
                let rest = rows & (rows - 1);
                for &cols in MASKS_BY_SIZE[k] {
                    let mut det = 0.0;
                    let mut sign = 1.0;
                    for (j, hj) in h[first].iter().enumerate() {
                        if cols & (1 << j) != 0 {
                            det += sign * hj * m[rest][cols & !(1 << j)];
                            sign = -sign;
                        }
                    }
                    m[rows][cols] = det;
                }
            }
        }
        Minors(m)
    }

    /// `det(H[:, T]ᵀ H[:, T])` by Cauchy–Binet: a sum of squared minors.
    fn gram_det(&self, n: usize, cols: u32) -> f64 {
        MASKS_BY_SIZE[cols.count_ones() as usize]
            .iter()
            .filter(|&&r| r < 1 << n)
            .map(|&r| {
                let d = self.0[r][cols as usize];
                d * d
            })
            .sum()
    }
}

/// Subsets of `{0, 1, 2, 3}` as bitmasks, grouped by size, ascending.
const MASKS_BY_SIZE: [&[usize]; 5] = [
    &[0],
    &[1, 2, 4, 8],
    &[3, 5, 6, 9, 10, 12],
    &[7, 11, 13, 14],
    &[15],
];

impl ConditioningKernel {
    pub fn new(state: &TwoModeCov) -> Result<Self> {
        let sigma = state.matrix();
        let e = |i: usize| {
            let mut v = [0.0; 4];
            v[i] = 1.0;
            v
        };
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let full = RowBlock::new(&sigma, [e(0), e(1), e(2), e(3)], 4)?;
        let b_only = RowBlock::new(&sigma, [e(2), e(3), [0.0; 4], [0.0; 4]], 2)?;
        let bordered = [
            RowBlock::new(&sigma, [e(0), e(2), e(3), [0.0; 4]], 3)?,
            RowBlock::new(&sigma, [e(1), e(2), e(3), [0.0; 4]], 3)?,
            RowBlock::new(&sigma, [[h, h, 0.0, 0.0], e(2), e(3), [0.0; 4]], 3)?,
        ];
        Ok(ConditioningKernel {
            full,
            b_only,
            bordered,
        })
    }

    /// `ln det σ̃_{A,J}`.
    pub(crate) fn joint_ln_det(&self, m: &RawJoint) -> f64 {
        let w = m.frame();
        let l = [m.l_a, m.l_b];
        math::ln(self.full.scaled_det(&w, l)) - math::ln(self.b_only.scaled_det(&w, l))
    }

    pub(crate) fn joint_cov(&self, m: &RawJoint) -> Result<ConditionalCov> {
        let w = m.frame();
        let l = [m.l_a, m.l_b];
        let denom = self.b_only.scaled_det(&w, l);
        if !(denom > 0.0) || !denom.is_finite() {
            return Err(Error::Singular {
                condition_number: f64::INFINITY,
            });
        }
        let [s11, s22, suu] = [0, 1, 2].map(|k| self.bordered[k].scaled_det(&w, l) / denom);
        // uᵀ S u = (s11 + s22)/2 + s12 for u = (1, 1)/√2
        let s12 = suu - 0.5 * (s11 + s22);
        ConditionalCov::from_matrix(Mat2::new(s11, s12, s12, s22))
    }

    /// `ln det σ̃_{A,J}` for a validated joint measurement.
    pub fn ln_det_joint(&self, m: &JointMeasurement) -> f64 {
        self.joint_ln_det(&m.raw())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{E, FRAC_PI_2};

    fn tmsv_family(a: f64, t: f64) -> TwoModeCov {
        let c = t * (a * a - 1.0).sqrt();
        TwoModeCov::standard(a, a, c, -c).unwrap()
    }

    #[test]
    fn ln_2pi_e_constant() {
        assert!((LN_2PI_E - (2.0 * PI * E).ln()).abs() < 1e-15);
    }

    #[test]
    fn local_povm_examples() {
        let het = local_povm_cov(&LocalMeasurement::heterodyne());
        assert!(het.matrix().max_abs_diff(&Mat2::IDENTITY) < 1e-15);
        let m = local_povm_cov(&LocalMeasurement::new(0.0, 0.5).unwrap());
        assert!(m.matrix().max_abs_diff(&Mat2::diag(0.5, 2.0)) < 1e-15);
        let m = local_povm_cov(&LocalMeasurement::new(FRAC_PI_2, 0.5).unwrap());
        assert!(m.matrix().max_abs_diff(&Mat2::diag(2.0, 0.5)) < 1e-15);
        assert!((m.det() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn local_measurement_validation() {
        assert!(LocalMeasurement::new(0.0, 0.0).is_err());
        assert!(LocalMeasurement::new(0.0, 1.5).is_err());
        let m = LocalMeasurement::new(PI + 0.25, 0.3).unwrap();
        assert!((m.theta() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn joint_povm_examples() {
        let het = LocalMeasurement::heterodyne();
        let local = JointMeasurement::local(het, het);
        assert!(joint_povm_cov(&local).max_abs_diff(&Mat4::IDENTITY) < 1e-15);

        let balanced = JointMeasurement::new(0.0, 0.0, 0.5, het, het).unwrap();
        assert!(joint_povm_cov(&balanced).max_abs_diff(&Mat4::IDENTITY) < 1e-15);

        let l = 0.3;
        let mu = joint_povm_cov(&JointMeasurement::two_mode_squeezed(l).unwrap());
        let diag = 0.5 * (1.0 / l + l);
        let off = 0.5 * (1.0 / l - l);
        let expected = Mat4::from_blocks(
            &Mat2::scaled_identity(diag),
            &Mat2::diag(off, -off),
            &Mat2::diag(off, -off),
            &Mat2::scaled_identity(diag),
        );
        assert!(mu.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn outcome_cov_examples() {
        let s99 = 99f64.sqrt();
        let state = TwoModeCov::standard(10.0, 10.0, s99, -s99).unwrap();
        assert_eq!(outcome_cov(&state, &Mat4::ZERO).unwrap(), state);
        let plus = outcome_cov(&state, &Mat4::IDENTITY).unwrap();
        assert!(plus.a().matrix().max_abs_diff(&Mat2::scaled_identity(11.0)) < 1e-15);
        assert!(plus.c().max_abs_diff(&Mat2::diag(s99, -s99)) < 1e-15);
        let id = TwoModeCov::standard(1.0, 1.0, 0.0, 0.0).unwrap();
        let two = outcome_cov(&id, &Mat4::IDENTITY).unwrap();
        assert!(two.matrix().max_abs_diff(&Mat4::diag([2.0; 4])) < 1e-15);
    }

    #[test]
    fn product_state_joint_reduces_to_effective_local() {
        let state = TwoModeCov::standard(3.0, 2.0, 0.0, 0.0).unwrap();
        let m = JointMeasurement::new(
            0.3,
            1.1,
            0.4,
            LocalMeasurement::new(0.2, 0.6).unwrap(),
            LocalMeasurement::new(1.3, 0.25).unwrap(),
        )
        .unwrap();
        let mu = joint_povm_cov(&m);
        let (mu_a, mu_c, mu_b) = (mu.block(0, 0), mu.block(0, 1), mu.block(1, 1));
        let inner = (*state.b().matrix() + mu_b).inverse().unwrap();
        let mu_eff = mu_a - mu_c * inner * mu_c.transpose();
        let expected = *state.a().matrix() + mu_eff;
        let got = conditional_cov_joint(&state, &m).unwrap();
        assert!(got.matrix().max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn joint_conditional_closed_forms() {
        // entangled branch: 2(a - t√(a²-1)) I at the homodyne limit
        let a: f64 = 10.0;
        let state = tmsv_family(a, 0.96);
        let m = JointMeasurement::two_mode_squeezed(L_MIN).unwrap();
        let got = conditional_cov_joint(&state, &m).unwrap();
        let expected = 2.0 * (a - 0.96 * (a * a - 1.0).sqrt());
        assert!((expected - 0.896_241_207_552_896_9).abs() < 1e-12);
        assert!(got.matrix().max_abs_diff(&Mat2::scaled_identity(expected)) < 1e-7);
        let exact = conditional_cov_joint_homodyne_limit(&state, &m, [true, true]).unwrap();
        assert!(
            exact
                .matrix()
                .max_abs_diff(&Mat2::scaled_identity(expected))
                < 1e-12
        );

        // separable branch: (1+a)(1-t²) I at the printed optimal L
        let t: f64 = 0.3;
        let state = tmsv_family(a, t);
        let l = (1.0 - a * t * t - a - t * t + 2.0 * t * (a * a - 1.0).sqrt())
            / (1.0 + t * t - a * (1.0 - t * t));
        let got = conditional_cov_joint(&state, &JointMeasurement::two_mode_squeezed(l).unwrap())
            .unwrap();
        assert!(got.matrix().max_abs_diff(&Mat2::scaled_identity(10.01)) < 1e-10);
    }

    #[test]
    fn local_conditional_examples() {
        let het = LocalMeasurement::heterodyne();
        let prod = TwoModeCov::standard(4.0, 2.0, 0.0, 0.0).unwrap();
        let got = conditional_cov_local(&prod, &het, &het).unwrap();
        assert!(got.matrix().max_abs_diff(&Mat2::scaled_identity(5.0)) < 1e-14);

        let got = conditional_cov_local(&tmsv_family(10.0, 0.5), &het, &het).unwrap();
        assert!(got.matrix().max_abs_diff(&Mat2::scaled_identity(8.75)) < 1e-12);

        // asymmetric family b = 3, v = 1, s = -1
        let state = TwoModeCov::standard(4.0, 3.0, 1.0, -1.0).unwrap();
        let got = conditional_cov_local(&state, &het, &het).unwrap();
        assert!(got.matrix().max_abs_diff(&Mat2::scaled_identity(4.75)) < 1e-12);
    }

    #[test]
    fn local_and_joint_routes_agree_at_unit_transmissivity() {
        let state = TwoModeCov::standard(3.0, 2.5, 1.2, -0.7)
            .unwrap()
            .transformed(&phase_rotation(0.3, 1.7))
            .unwrap();
        for (ta, la, tb, lb) in [
            (0.1, 0.4, 2.0, 0.9),
            (1.0, 1.0, 0.0, 0.05),
            (2.9, 0.02, 0.7, 0.3),
        ] {
            let ma = LocalMeasurement::new(ta, la).unwrap();
            let mb = LocalMeasurement::new(tb, lb).unwrap();
            let local = conditional_cov_local(&state, &ma, &mb).unwrap();
            let joint = conditional_cov_joint(&state, &JointMeasurement::local(ma, mb)).unwrap();
            let scale = local.matrix().0[0][0]
                .abs()
                .max(local.matrix().0[1][1].abs());
            assert!(
                local.matrix().max_abs_diff(joint.matrix()) < 1e-12 * scale.max(1.0),
                "{local:?} vs {joint:?}"
            );
        }
    }

    #[test]
    fn entropy_examples() {
        let id = CovMat2::isotropic(1.0).unwrap();
        assert!((gaussian_entropy(&id).unwrap() - 2.837_877_066_409_345).abs() < 1e-12);
        let four = CovMat2::isotropic(4.0).unwrap();
        assert!((gaussian_entropy(&four).unwrap() - (4f64.ln() + LN_2PI_E)).abs() < 1e-12);
        let two = TwoModeCov::standard(1.0, 1.0, 0.0, 0.0).unwrap();
        assert!((gaussian_entropy(&two).unwrap() - 2.0 * LN_2PI_E).abs() < 1e-12);
        assert!(entropy_from_det(0.0, 1).is_err());
        assert!(entropy_from_det(-1.0, 2).is_err());
    }

    #[test]
    fn conditional_entropy_examples() {
        let het = LocalMeasurement::heterodyne();
        let a = 3.0;
        let prod = TwoModeCov::standard(a, 2.0, 0.0, 0.0).unwrap();
        let h = conditional_entropy(&prod, &Measurement::Local(het, het)).unwrap();
        assert!((h - ((a + 1.0f64).ln() + LN_2PI_E)).abs() < 1e-12);
        let h =
            conditional_entropy(&tmsv_family(10.0, 0.5), &Measurement::Local(het, het)).unwrap();
        assert!((h - (8.75f64.ln() + LN_2PI_E)).abs() < 1e-12);
    }

    #[test]
    fn schur_complement_detects_singular_block() {
        let mut m = Mat4::IDENTITY;
        m.0[2][2] = 1e15;
        m.0[3][3] = 1e-1;
        let outcome = TwoModeCov::from_matrix(&m).unwrap();
        assert!(matches!(
            schur_complement(&outcome),
            Err(Error::Singular { .. })
        ));
    }
}
