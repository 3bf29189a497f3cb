//! Two-mode covariance matrices and the symplectic algebra acting on them.
//!
//! Units: the vacuum covariance is the identity, so the uncertainty relation
//! reads "every symplectic eigenvalue is at least 1".

use crate::error::{Error, Result};
use crate::linalg::{Mat2, Mat4};
use crate::math;

/// Tolerance on `|M - Mᵀ|` for inputs declared symmetric.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Slack on the uncertainty bound `ν ≥ 1`, so pure states survive rounding.
pub const PHYSICALITY_TOL: f64 = 1e-9;

/// Symmetric, positive-definite covariance matrix of one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovMat2(Mat2);

impl CovMat2 {
    pub fn new(m: Mat2) -> Result<Self> {
        let asym = m.asymmetry();
        if !(asym <= SYMMETRY_TOL) {
            return Err(Error::SymmetryViolation {
                max_asymmetry: asym,
            });
        }
        let (lo, _) = m.symmetric_eigenvalues();
        if !(lo > 0.0) {
            return Err(Error::NotPositiveDefinite {
                what: "single-mode covariance",
            });
        }
        Ok(CovMat2(symmetrize2(&m)))
    }

    /// `s·I`, e.g. a thermal state of variance `s`.
    pub fn isotropic(s: f64) -> Result<Self> {
        Self::new(Mat2::scaled_identity(s))
    }

    pub(crate) fn new_unchecked(m: Mat2) -> Self {
        CovMat2(m)
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn det(&self) -> f64 {
        self.0.det()
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> (f64, f64) {
        self.0.symmetric_eigenvalues()
    }
}

/// Two-mode covariance `[[A, C], [Cᵀ, B]]`.
///
/// Construction checks symmetry and that the diagonal blocks are positive
/// definite; physicality is a separate check, see [`physicality_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeCov {
    a: CovMat2,
    b: CovMat2,
    c: Mat2,
}

impl TwoModeCov {
    pub fn new(a: CovMat2, b: CovMat2, c: Mat2) -> Self {
        TwoModeCov { a, b, c }
    }

    /// Split a full 4×4 matrix into blocks, checking symmetry.
    pub fn from_matrix(m: &Mat4) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NotPositiveDefinite {
                what: "covariance with non-finite entries",
            });
        }
        let asym = m.asymmetry();
        if !(asym <= SYMMETRY_TOL) {
            return Err(Error::SymmetryViolation {
                max_asymmetry: asym,
            });
        }
        Ok(TwoModeCov {
            a: CovMat2::new(m.block(0, 0))?,
            b: CovMat2::new(m.block(1, 1))?,
            c: m.block(0, 1),
        })
    }

    /// Standard-form covariance `A = a·I`, `B = b·I`, `C = diag(c, d)`.
    pub fn standard(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Ok(TwoModeCov {
            a: CovMat2::isotropic(a)?,
            b: CovMat2::isotropic(b)?,
            c: Mat2::diag(c, d),
        })
    }

    /// Two-mode squeezed vacuum with squeezing `r`.
    pub fn two_mode_squeezed_vacuum(r: f64) -> Self {
        let (ch, sh) = (libm::cosh(2.0 * r), libm::sinh(2.0 * r));
        TwoModeCov {
            a: CovMat2::new_unchecked(Mat2::scaled_identity(ch)),
            b: CovMat2::new_unchecked(Mat2::scaled_identity(ch)),
            c: Mat2::diag(sh, -sh),
        }
    }

    pub fn a(&self) -> &CovMat2 {
        &self.a
    }

    pub fn b(&self) -> &CovMat2 {
        &self.b
    }

    pub fn c(&self) -> &Mat2 {
        &self.c
    }

    pub fn matrix(&self) -> Mat4 {
        Mat4::from_blocks(
            self.a.matrix(),
            &self.c,
            &self.c.transpose(),
            self.b.matrix(),
        )
    }

    pub fn det(&self) -> f64 {
        self.matrix().det()
    }

    /// `S σ Sᵀ`, symmetrized to remove rounding asymmetry.
    pub fn transformed(&self, s: &Mat4) -> Result<Self> {
        let m = *s * self.matrix() * s.transpose();
        TwoModeCov::from_matrix(&symmetrize4(&m))
    }

    /// Blockwise `σ + μ` with `μ` symmetric.
    pub fn plus(&self, mu: &Mat4) -> Result<Self> {
        TwoModeCov::from_matrix(&symmetrize4(&(self.matrix() + *mu)))
    }

    /// Partial transpose on mode B (`p_B → -p_B`). May be unphysical.
    pub fn partial_transpose(&self) -> Mat4 {
        let flip = Mat4::diag([1.0, 1.0, 1.0, -1.0]);
        flip * self.matrix() * flip
    }

    /// Local-symplectic invariants `(det A, det B, det C, det σ)`.
    pub fn invariants(&self) -> [f64; 4] {
        [self.a.det(), self.b.det(), self.c.det(), self.det()]
    }

    pub fn symplectic_eigenvalues(&self) -> (f64, f64) {
        spectrum(&self.matrix())
    }
}

/// Standard-form parameters `(a, b, c, d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardFormParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl StandardFormParams {
    /// Validated parameters: `a, b ≥ 1` and a physical induced covariance.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        for (what, v) in [("standard-form a", a), ("standard-form b", b)] {
            if !(v >= 1.0 - PHYSICALITY_TOL) || !v.is_finite() {
                return Err(Error::Domain { what, value: v });
            }
        }
        if !c.is_finite() || !d.is_finite() {
            return Err(Error::Domain {
                what: "standard-form correlation",
                value: if c.is_finite() { d } else { c },
            });
        }
        let p = StandardFormParams { a, b, c, d };
        let cov = p.covariance();
        if !physicality_check(&cov) {
            let (_, nu_min) = cov.symplectic_eigenvalues();
            return Err(Error::Unphysical {
                min_symplectic_eigenvalue: nu_min,
            });
        }
        Ok(p)
    }

    pub fn covariance(&self) -> TwoModeCov {
        TwoModeCov {
            a: CovMat2::new_unchecked(Mat2::scaled_identity(self.a)),
            b: CovMat2::new_unchecked(Mat2::scaled_identity(self.b)),
            c: Mat2::diag(self.c, self.d),
        }
    }

    /// True when `c ≥ |d|` (and hence `c ≥ 0`).
    pub fn is_canonical(&self) -> bool {
        self.c >= math::abs(self.d)
    }
}

/// The fundamental symplectic form `J = J₁ ⊕ J₁`, `J₁ = [[0, 1], [-1, 0]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticForm {
    j: Mat4,
}

impl Default for SymplecticForm {
    fn default() -> Self {
        let j1 = Mat2::new(0.0, 1.0, -1.0, 0.0);
        SymplecticForm {
            j: Mat4::direct_sum(&j1, &j1),
        }
    }
}

impl SymplecticForm {
    pub fn matrix(&self) -> &Mat4 {
        &self.j
    }

    /// Largest entry of `|Sᵀ J S - J|`.
    pub fn symplectic_defect(&self, s: &Mat4) -> f64 {
        s.congruence(&self.j).max_abs_diff(&self.j)
    }
}

/// Beamsplitter of transmissivity `eta`.
pub fn beamsplitter(eta: f64) -> Result<Mat4> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::Domain {
            what: "beamsplitter transmissivity",
            value: eta,
        });
    }
    let t = math::sqrt(eta);
    let r = math::sqrt(1.0 - eta);
    Ok(Mat4([
        [t, 0.0, -r, 0.0],
        [0.0, t, 0.0, -r],
        [r, 0.0, t, 0.0],
        [0.0, r, 0.0, t],
    ]))
}

/// Independent phase rotations on the two modes.
pub fn phase_rotation(phi_a: f64, phi_b: f64) -> Mat4 {
    Mat4::direct_sum(&Mat2::rotation(phi_a), &Mat2::rotation(phi_b))
}

/// Single-mode squeezers `diag(e^{-r}, e^{r})` on each mode.
pub fn squeezer(r_a: f64, r_b: f64) -> Mat4 {
    let (ea, eb) = (libm::exp(r_a), libm::exp(r_b));
    Mat4::diag([1.0 / ea, ea, 1.0 / eb, eb])
}

/// Symplectic spectrum `(ν₁, ν₂)`, `ν₁ ≥ ν₂`, of a symmetric 4×4 matrix.
pub fn symplectic_eigenvalues(cov: &TwoModeCov) -> (f64, f64) {
    cov.symplectic_eigenvalues()
}

/// As [`symplectic_eigenvalues`] for a raw matrix, rejecting asymmetric input.
pub fn symplectic_eigenvalues_of(m: &Mat4) -> Result<(f64, f64)> {
    let asym = m.asymmetry();
    if !(asym <= SYMMETRY_TOL) {
        return Err(Error::SymmetryViolation {
            max_asymmetry: asym,
        });
    }
    Ok(spectrum(m))
}

// For σ = LLᵀ the antisymmetric K = LᵀJL is similar to Jσ, so its eigenvalues
// are ±iν₁, ±iν₂. With k the upper-triangle entries of K,
// ν₁ ± ν₂ = |(k01 ± k23, k02 ∓ k13, k03 ± k12)|, sums of squares that stay
// accurate when ν₁ = ν₂ (pure states).
fn spectrum(m: &Mat4) -> (f64, f64) {
    let Some(l) = m.cholesky() else {
        return spectrum_from_invariants(m);
    };
    let k = l.transpose() * *SymplecticForm::default().matrix() * l;
    let k = k.0;
    let norm3 = |x: f64, y: f64, z: f64| math::hypot(math::hypot(x, y), z);
    let sum = norm3(k[0][1] + k[2][3], k[0][2] - k[1][3], k[0][3] + k[1][2]);
    let diff = norm3(k[0][1] - k[2][3], k[0][2] + k[1][3], k[0][3] - k[1][2]);
    let (hi, lo) = if sum >= diff {
        (sum, diff)
    } else {
        (diff, sum)
    };
    (0.5 * (hi + lo), 0.5 * (hi - lo))
}

// (Jσ)² has eigenvalues -ν₁², -ν₂² (each twice), so ν₁² + ν₂² = -tr((Jσ)²)/2
// and ν₁²ν₂² = det σ. Used only for matrices without a Cholesky factor.
fn spectrum_from_invariants(m: &Mat4) -> (f64, f64) {
    let js = *SymplecticForm::default().matrix() * *m;
    let sum_sq = -0.5 * (js * js).trace();
    let prod_sq = m.det();
    let disc = (sum_sq * sum_sq - 4.0 * prod_sq).max(0.0);
    let hi_sq = 0.5 * (sum_sq + math::sqrt(disc));
    let lo_sq = if hi_sq > 0.0 { prod_sq / hi_sq } else { 0.0 };
    (math::sqrt(hi_sq.max(0.0)), math::sqrt(lo_sq.max(0.0)))
}

/// Positive definite and compatible with the uncertainty relation.
pub fn physicality_check(cov: &TwoModeCov) -> bool {
    if !cov.matrix().is_positive_definite() {
        return false;
    }
    let (_, nu_min) = cov.symplectic_eigenvalues();
    nu_min >= 1.0 - PHYSICALITY_TOL
}

/// `Ok(())` for physical states, otherwise the violated eigenvalue.
pub fn require_physical(cov: &TwoModeCov) -> Result<()> {
    if physicality_check(cov) {
        Ok(())
    } else if !cov.matrix().is_positive_definite() {
        Err(Error::NotPositiveDefinite {
            what: "two-mode covariance",
        })
    } else {
        Err(Error::Unphysical {
            min_symplectic_eigenvalue: cov.symplectic_eigenvalues().1,
        })
    }
}

/// Reduce a physical covariance to standard form with `c ≥ |d|`.
///
/// Uses the four local-symplectic invariants: `a² = det A`, `b² = det B`,
/// `cd = det C` and `(ab - c²)(ab - d²) = det σ`.
pub fn standard_form_reduce(cov: &TwoModeCov) -> Result<StandardFormParams> {
    require_physical(cov)?;
    let [det_a, det_b, det_c, det_s] = cov.invariants();
    let a = math::sqrt(det_a);
    let b = math::sqrt(det_b);
    let ab = a * b;
    // c² + d² and c²d² are the sum and product of the roots
    let sum = (ab * ab + det_c * det_c - det_s) / ab;
    let prod = det_c * det_c;
    let scale = (sum * sum).max(prod).max(1.0);
    let disc = sum * sum - 4.0 * prod;
    if sum < -1e-9 * math::sqrt(scale) || disc < -1e-9 * scale {
        return Err(Error::NoStandardForm { discriminant: disc });
    }
    let c_sq = 0.5 * (sum.max(0.0) + math::sqrt(disc.max(0.0)));
    let d_sq = if c_sq > 0.0 { prod / c_sq } else { 0.0 };
    let c = math::sqrt(c_sq);
    let d = libm::copysign(math::sqrt(d_sq), det_c);
    let d = if det_c == 0.0 { 0.0 } else { d };
    Ok(StandardFormParams { a, b, c, d })
}

/// PPT test: the partial transpose flips `d → -d`.
pub fn is_entangled(p: &StandardFormParams) -> bool {
    is_entangled_cov(&p.covariance())
}

/// PPT test on an arbitrary covariance.
pub fn is_entangled_cov(cov: &TwoModeCov) -> bool {
    let (_, nu_min) = spectrum(&cov.partial_transpose());
    nu_min < 1.0 - PHYSICALITY_TOL
}

fn symmetrize2(m: &Mat2) -> Mat2 {
    let off = 0.5 * (m.0[0][1] + m.0[1][0]);
    Mat2::new(m.0[0][0], off, off, m.0[1][1])
}

pub(crate) fn symmetrize4(m: &Mat4) -> Mat4 {
    let mut out = *m;
    for i in 0..4 {
        for j in (i + 1)..4 {
            let v = 0.5 * (m.0[i][j] + m.0[j][i]);
            out.0[i][j] = v;
            out.0[j][i] = v;
        }
    }
    out
}
