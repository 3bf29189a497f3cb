//! Operational Gaussian discord, Gaussian quantum discord and Gaussian
//! Rényi-2 discord, plus closed forms for three reference families.
//!
//! All minimizations work on `ln det` of a conditional covariance, which is
//! smooth and well scaled. Search spaces:
//!
//! * local: `(θ_A, θ_B, L_A, L_B)`,
//! * joint: `(φ_A, φ_B, η, θ_A, θ_B, L_A, L_B)`,
//! * B-side only (GQD, Rényi-2): `(θ_B, L_B)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::error::{Error, Result};
use crate::math;
use crate::measurement::{
    conditioned_on_b, ln_det_plus_local, ConditioningKernel, JointMeasurement, LocalMeasurement,
    RawJoint, LN_2PI_E, L_MIN,
};
use crate::optimize::{minimize_with, MinimizeOptions, OptResult, SearchSpace};
use crate::symplectic::{require_physical, TwoModeCov};

/// Tolerance below zero inside which a computed OGD is reported as zero.
pub const OGD_CLAMP: f64 = 1e-9;

/// Guard band for closed-form branch thresholds.
const BRANCH_GUARD: f64 = 1e-12;

/// `F(x) = (x+1)/2 ln((x+1)/2) − (x−1)/2 ln((x−1)/2)`, the entropy of a
/// single-mode thermal state with symplectic eigenvalue `x`.
pub fn entropy_f(x: f64) -> Result<f64> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "symplectic eigenvalue",
            value: x,
        });
    }
    Ok(entropy_f_unchecked(x))
}

fn entropy_f_unchecked(x: f64) -> f64 {
    let p = 0.5 * (x + 1.0);
    let m = 0.5 * (x - 1.0);
    let tail = if m > 0.0 { m * math::ln(m) } else { 0.0 };
    p * math::ln(p) - tail
}

/// Von Neumann entropy `F` for eigenvalues that may sit a rounding error
/// below 1 on pure states.
fn entropy_f_rounded(x: f64) -> f64 {
    entropy_f_unchecked(x.max(1.0))
}

pub fn local_space() -> SearchSpace {
    SearchSpace::new(
        vec![(0.0, PI), (0.0, PI), (L_MIN, 1.0), (L_MIN, 1.0)],
        vec![true, true, false, false],
    )
    .expect("static bounds")
}

/// `φ_B` spans a full period `2π`: shifting only one phase by `π` flips the
/// sign of the cross block of the POVM covariance.
pub fn joint_space() -> SearchSpace {
    SearchSpace::new(
        vec![
            (0.0, PI),
            (0.0, 2.0 * PI),
            (0.0, 1.0),
            (0.0, PI),
            (0.0, PI),
            (L_MIN, 1.0),
            (L_MIN, 1.0),
        ],
        vec![true, true, false, true, true, false, false],
    )
    .expect("static bounds")
}

pub fn b_side_space() -> SearchSpace {
    SearchSpace::new(vec![(0.0, PI), (L_MIN, 1.0)], vec![true, false]).expect("static bounds")
}

/// `ln det σ̃_{A,L}` as a function of `(θ_A, θ_B, L_A, L_B)`.
pub fn local_objective(state: &TwoModeCov) -> impl Fn(&[f64]) -> f64 + '_ {
    move |p: &[f64]| match conditioned_on_b(state, p[1], p[3]) {
        Ok(x) => ln_det_plus_local(&x, p[0], p[2]),
        Err(_) => f64::NAN,
    }
}

/// `ln det σ̃_{A,J}` as a function of `(φ_A, φ_B, η, θ_A, θ_B, L_A, L_B)`.
pub fn joint_objective(state: &TwoModeCov) -> Result<impl Fn(&[f64]) -> f64> {
    let kernel = ConditioningKernel::new(state)?;
    Ok(move |p: &[f64]| kernel.joint_ln_det(&RawJoint::from_slice(p)))
}

/// `ln det σ_A` of A's state after measuring B with `(θ_B, L_B)`.
pub fn b_side_objective(state: &TwoModeCov) -> impl Fn(&[f64]) -> f64 + '_ {
    move |p: &[f64]| match conditioned_on_b(state, p[0], p[1]) {
        Ok(x) => math::ln(x.det()),
        Err(_) => f64::NAN,
    }
}

/// `F(√det σ_A)`, the GQD objective over `(θ_B, L_B)`.
pub fn gqd_objective(state: &TwoModeCov) -> impl Fn(&[f64]) -> f64 + '_ {
    move |p: &[f64]| match conditioned_on_b(state, p[0], p[1]) {
        Ok(x) => entropy_f_rounded(math::sqrt(x.det())),
        Err(_) => f64::NAN,
    }
}

/// Optimal pair of local measurements.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalOptimum {
    /// `min ln det σ̃_{A,L}`.
    pub ln_det: f64,
    pub ma: LocalMeasurement,
    pub mb: LocalMeasurement,
    pub result: OptResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointOptimum {
    /// `min ln det σ̃_{A,J}`.
    pub ln_det: f64,
    pub measurement: JointMeasurement,
    pub result: OptResult,
}

/// Minimize `ln det σ̃_{A,L}` over pairs of local measurements.
pub fn local_minimum(state: &TwoModeCov, seed: u64) -> Result<LocalOptimum> {
    let objective = local_objective(state);
    let space = local_space();
    let options = MinimizeOptions::default().with_warm_start(vec![0.0, 0.0, 1.0, 1.0]);
    let mut result = minimize_with(&objective, &space, seed, &options)?;
    let candidates = heterodyne_snaps(&result.argmin, &[(0, 2), (1, 3)]);
    canonicalize(&objective, &mut result, candidates);
    let p = &result.argmin;
    Ok(LocalOptimum {
        ln_det: result.value,
        ma: LocalMeasurement::new(p[0], p[2])?,
        mb: LocalMeasurement::new(p[1], p[3])?,
        result,
    })
}

/// Minimize `ln det σ̃_{A,J}` over joint measurements. The local optimum, if
/// given, seeds the search through its `η = 1` embedding, so the joint
/// minimum never exceeds it.
pub fn joint_minimum(
    state: &TwoModeCov,
    seed: u64,
    local: Option<&LocalOptimum>,
) -> Result<JointOptimum> {
    let objective = joint_objective(state)?;
    let space = joint_space();
    let mut options = MinimizeOptions::default()
        .with_warm_start(vec![0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0])
        .with_warm_start(vec![0.0, 0.0, 0.5, 0.0, 0.5 * PI, 1.0, 1.0]);
    if let Some(lo) = local {
        options = options.with_warm_start(embed_local(&lo.ma, &lo.mb));
    }
    let mut result = minimize_with(&objective, &space, seed, &options)?;
    let mut candidates = Vec::new();
    if let Some(lo) = local {
        candidates.push(embed_local(&lo.ma, &lo.mb));
    }
    candidates.extend(heterodyne_snaps(&result.argmin, &[(3, 5), (4, 6)]));
    candidates.extend(two_mode_squeezed_candidates(&objective, seed)?);
    canonicalize(&objective, &mut result, candidates);
    let p = &result.argmin;
    let measurement = JointMeasurement::new(
        p[0],
        p[1],
        p[2],
        LocalMeasurement::new(p[3], p[5])?,
        LocalMeasurement::new(p[4], p[6])?,
    )?;
    Ok(JointOptimum {
        ln_det: result.value,
        measurement,
        result,
    })
}

fn embed_local(ma: &LocalMeasurement, mb: &LocalMeasurement) -> Vec<f64> {
    vec![0.0, 0.0, 1.0, ma.theta(), mb.theta(), ma.l(), mb.l()]
}

/// Objective increase accepted when swapping a found minimizer for a
/// structured representative of the same minimum.
pub const CANONICAL_TOL: f64 = 1e-12;

/// Degenerate minima (flat squeezing directions, continuous families of
/// equivalent joint measurements) leave the raw argmin arbitrary. Replace it
/// with the first candidate whose objective is within [`CANONICAL_TOL`] of
/// the best value found, or strictly better.
fn canonicalize<F: Fn(&[f64]) -> f64>(
    objective: &F,
    result: &mut OptResult,
    candidates: Vec<Vec<f64>>,
) {
    let best = result.value;
    for trial in candidates {
        let v = objective(&trial);
        if v.is_finite() && v <= best + CANONICAL_TOL {
            result.argmin = trial;
            result.value = v;
            return;
        }
    }
}

/// `x` with all `(θ, L)` pairs set to heterodyne `(0, 1)`, then with each
/// pair set alone.
fn heterodyne_snaps(x: &[f64], pairs: &[(usize, usize)]) -> Vec<Vec<f64>> {
    let snap = |which: &[(usize, usize)]| {
        let mut t = x.to_vec();
        for &(theta, l) in which {
            t[theta] = 0.0;
            t[l] = 1.0;
        }
        t
    };
    let mut out = vec![snap(pairs)];
    out.extend(pairs.iter().map(|p| snap(core::slice::from_ref(p))));
    out
}

/// Best balanced-beamsplitter measurements with orthogonal detector angles
/// (two-mode squeezed POVM seeds), one per angle assignment.
fn two_mode_squeezed_candidates<F: Fn(&[f64]) -> f64>(
    objective: &F,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    let space = SearchSpace::new(vec![(L_MIN, 1.0), (L_MIN, 1.0)], vec![false, false])?;
    let mut out = Vec::new();
    for (theta_a, theta_b) in [(0.0, 0.5 * PI), (0.5 * PI, 0.0)] {
        let embed = |l: &[f64]| vec![0.0, 0.0, 0.5, theta_a, theta_b, l[0], l[1]];
        let options = MinimizeOptions {
            starts: Some(4),
            ..MinimizeOptions::default()
        }
        .with_warm_start(vec![1.0, 1.0])
        .with_warm_start(vec![L_MIN, L_MIN]);
        let r = minimize_with(|l: &[f64]| objective(&embed(l)), &space, seed, &options)?;
        // equal squeezing on both detectors when that is just as good
        let mut l = r.argmin.clone();
        let mean = 0.5 * (l[0] + l[1]);
        if objective(&embed(&[mean, mean])) <= r.value + CANONICAL_TOL {
            l = vec![mean, mean];
        }
        out.push(embed(&l));
    }
    Ok(out)
}

/// Everything computed for one state.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscordReport {
    pub ogd: f64,
    /// Set when a slightly negative OGD was reported as zero.
    pub ogd_clamped: bool,
    pub gqd: f64,
    pub renyi2: f64,
    /// `H^(min)_GL(Ã|B̃)` in nats.
    pub hmin_local: f64,
    /// `H^(min)_GJ(Ã|B̃)` in nats.
    pub hmin_joint: f64,
    pub opt_local: (LocalMeasurement, LocalMeasurement),
    pub opt_joint: JointMeasurement,
    pub det_local: f64,
    pub det_joint: f64,
}

/// Minimal local and joint conditional entropies and their difference.
pub fn ogd(state: &TwoModeCov, seed: u64) -> Result<DiscordReport> {
    require_physical(state)?;
    let local = local_minimum(state, seed)?;
    let joint = joint_minimum(state, seed, Some(&local))?;
    let (ogd, ogd_clamped) = ogd_from_ln_dets(local.ln_det, joint.ln_det);
    Ok(DiscordReport {
        ogd,
        ogd_clamped,
        gqd: gqd(state, seed)?,
        renyi2: renyi2_discord(state, seed)?,
        hmin_local: 0.5 * local.ln_det + LN_2PI_E,
        hmin_joint: 0.5 * joint.ln_det + LN_2PI_E,
        opt_local: (local.ma, local.mb),
        opt_joint: joint.measurement,
        det_local: math::exp(local.ln_det),
        det_joint: math::exp(joint.ln_det),
    })
}

/// OGD value alone, skipping GQD and Rényi-2.
pub fn ogd_value(state: &TwoModeCov, seed: u64) -> Result<(f64, LocalOptimum, JointOptimum)> {
    require_physical(state)?;
    let local = local_minimum(state, seed)?;
    let joint = joint_minimum(state, seed, Some(&local))?;
    Ok((ogd_from_ln_dets(local.ln_det, joint.ln_det).0, local, joint))
}

fn ogd_from_ln_dets(ln_det_local: f64, ln_det_joint: f64) -> (f64, bool) {
    let raw = 0.5 * (ln_det_local - ln_det_joint);
    if raw < 0.0 && raw >= -OGD_CLAMP {
        (0.0, true)
    } else {
        (raw, false)
    }
}

/// Minimum over `(θ_B, L_B)` of `ln det σ_A`.
pub fn b_side_minimum(state: &TwoModeCov, seed: u64) -> Result<OptResult> {
    let objective = b_side_objective(state);
    let options = MinimizeOptions::default().with_warm_start(vec![0.0, 1.0]);
    let mut result = minimize_with(&objective, &b_side_space(), seed, &options)?;
    let candidates = heterodyne_snaps(&result.argmin, &[(0, 1)]);
    canonicalize(&objective, &mut result, candidates);
    Ok(result)
}

/// `S(A|B) = F(ν₁) + F(ν₂) − F(√det B)`.
pub fn quantum_conditional_entropy(state: &TwoModeCov) -> f64 {
    let (nu1, nu2) = state.symplectic_eigenvalues();
    entropy_f_rounded(nu1) + entropy_f_rounded(nu2) - entropy_f_rounded(math::sqrt(state.b().det()))
}

/// Gaussian quantum discord `min F(√det σ_A) − S(A|B)`.
pub fn gqd(state: &TwoModeCov, seed: u64) -> Result<f64> {
    require_physical(state)?;
    // F is increasing, so the minimizer of ln det σ_A also minimizes F.
    let best = b_side_minimum(state, seed)?;
    let h = entropy_f_rounded(math::sqrt(math::exp(best.value)));
    Ok(h - quantum_conditional_entropy(state))
}

/// Gaussian Rényi-2 discord `min ½ ln det σ_A − ½ ln(det σ / det B)`.
pub fn renyi2_discord(state: &TwoModeCov, seed: u64) -> Result<f64> {
    require_physical(state)?;
    let best = b_side_minimum(state, seed)?;
    Ok(0.5 * best.value - 0.5 * (math::ln(state.det()) - math::ln(state.b().det())))
}

/// Reference families of standard-form states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyParams {
    /// `a = b`, `c = −d = t √(a² − 1)`.
    SymmetricT { a: f64, t: f64 },
    /// `a = b = c + 1`, `d = q c`; `q = 1` is the CC state and `q = −1` the CA
    /// state.
    CcCa { c: f64, q: f64 },
    /// `a = b + v`, `c = |s|`, `d = s`.
    Asymmetric { b: f64, v: f64, s: f64 },
}

impl FamilyParams {
    pub fn validate(&self) -> Result<()> {
        let domain = |what, value: f64, ok: bool| {
            if ok && value.is_finite() {
                Ok(())
            } else {
                Err(Error::Domain { what, value })
            }
        };
        match *self {
            FamilyParams::SymmetricT { a, t } => {
                domain("a", a, a >= 1.0)?;
                domain("t", t, (0.0..=1.0).contains(&t))
            }
            FamilyParams::CcCa { c, q } => {
                domain("c", c, c > 0.0)?;
                domain("q", q, (-1.0..=1.0).contains(&q))
            }
            FamilyParams::Asymmetric { b, v, s } => {
                domain("b", b, b >= 1.0)?;
                domain("v", v, v >= 0.0)?;
                domain("s", s, math::abs(s) <= b - 1.0)
            }
        }
    }

    /// Standard-form parameters `(a, b, c, d)`.
    pub fn standard_form(&self) -> Result<[f64; 4]> {
        self.validate()?;
        Ok(match *self {
            FamilyParams::SymmetricT { a, t } => {
                let c = t * math::sqrt(a * a - 1.0);
                [a, a, c, -c]
            }
            FamilyParams::CcCa { c, q } => [c + 1.0, c + 1.0, c, q * c],
            FamilyParams::Asymmetric { b, v, s } => [b + v, b, math::abs(s), s],
        })
    }

    pub fn state(&self) -> Result<TwoModeCov> {
        let [a, b, c, d] = self.standard_form()?;
        TwoModeCov::standard(a, b, c, d)
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilyParams::SymmetricT { .. } => "symmetric_t",
            FamilyParams::CcCa { .. } => "cc_ca",
            FamilyParams::Asymmetric { .. } => "asymmetric",
        }
    }

    /// Parameter names in declaration order.
    pub fn param_names(&self) -> &'static [&'static str] {
        match self {
            FamilyParams::SymmetricT { .. } => &["a", "t"],
            FamilyParams::CcCa { .. } => &["c", "q"],
            FamilyParams::Asymmetric { .. } => &["b", "v", "s"],
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            FamilyParams::SymmetricT { a, t } => vec![a, t],
            FamilyParams::CcCa { c, q } => vec![c, q],
            FamilyParams::Asymmetric { b, v, s } => vec![b, v, s],
        }
    }
}

/// Regime of a closed-form result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Joint measurement with finite two-mode squeezing beats local ones.
    Squeezed,
    /// Balanced beamsplitter followed by two homodyne detectors.
    Homodyne,
    /// Local measurements are optimal; the OGD vanishes.
    Vanishing,
}

impl Branch {
    pub fn label(&self) -> &'static str {
        match self {
            Branch::Squeezed => "squeezed",
            Branch::Homodyne => "homodyne",
            Branch::Vanishing => "vanishing",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedForm {
    pub ogd: f64,
    pub det_local: f64,
    pub det_joint: f64,
    pub branch: Branch,
}

/// Analytic OGD and optimal determinants for a reference family.
pub fn closed_form_ogd(family: &FamilyParams) -> Result<ClosedForm> {
    family.validate()?;
    Ok(match *family {
        FamilyParams::SymmetricT { a, t } => symmetric_closed_form(a, t),
        FamilyParams::CcCa { c, q } => cc_ca_closed_form(c, q),
        FamilyParams::Asymmetric { b, v, s } => asymmetric_closed_form(b, v, s),
    })
}

fn symmetric_closed_form(a: f64, t: f64) -> ClosedForm {
    let local = 1.0 + a + t * t - a * t * t;
    let threshold = math::sqrt((a - 1.0) / (a + 1.0));
    let (joint, branch) = if t < threshold - BRANCH_GUARD {
        ((1.0 + a) * (1.0 - t * t), Branch::Squeezed)
    } else {
        (
            2.0 * a - 2.0 * t * math::sqrt(a * a - 1.0),
            Branch::Homodyne,
        )
    };
    ClosedForm {
        ogd: math::ln(local) - math::ln(joint),
        det_local: local * local,
        det_joint: joint * joint,
        branch,
    }
}

/// Threshold `(1 + 2c)^{-1/2}` separating the homodyne and heterodyne B-side
/// local optima; also the onset of vanishing OGD for `q ≥` it.
pub fn cc_ca_threshold(c: f64) -> f64 {
    1.0 / math::sqrt(1.0 + 2.0 * c)
}

/// Optimal local squeezings `(L_A, L_B)` for the CC/CA family.
pub fn cc_ca_local_squeezing(c: f64, q: f64) -> (f64, f64) {
    let aq = math::abs(q);
    let l_b = if aq > cc_ca_threshold(c) {
        let num = (1.0 + c) * (q * q - 1.0) + c * aq * math::sqrt(4.0 + 2.0 * c - 2.0 * c * q * q);
        let den = (1.0 + c) * (1.0 + c) - (1.0 + c * c) * q * q;
        num / den
    } else {
        0.0
    };
    let (f1, f2) = cc_ca_local_factors(c, q, l_b);
    (math::sqrt(f1 / f2), l_b)
}

/// `det σ̃_{A,L} = (f₁ + L_A)(f₂ + 1/L_A)`.
fn cc_ca_local_factors(c: f64, q: f64, l_b: f64) -> (f64, f64) {
    let f1 = 1.0 + c * (1.0 + l_b) / (1.0 + c + l_b);
    let f2 = 1.0 + c - c * c * q * q * l_b / ((1.0 + c) * l_b + 1.0);
    (f1, f2)
}

pub fn cc_ca_local_det(c: f64, q: f64, l_a: f64, l_b: f64) -> f64 {
    let (f1, f2) = cc_ca_local_factors(c, q, l_b);
    (f1 + l_a) * (f2 + 1.0 / l_a)
}

/// Optimal squeezing of the two-mode squeezed joint measurement.
pub fn cc_ca_joint_squeezing(c: f64, q: f64) -> f64 {
    (q - 1.0 + math::sqrt(4.0 + 4.0 * c - 4.0 * c * q * q)) / (3.0 + 2.0 * c * (1.0 - q) - q)
}

pub fn cc_ca_joint_det(c: f64, q: f64, l: f64) -> f64 {
    let num = 4.0
        * (1.0 + l)
        * (1.0 + l + 2.0 * c * l)
        * (1.0 + l + c * l - c * q * l)
        * (1.0 + c + l + c * q);
    let den = 1.0 + 2.0 * l + 2.0 * c * l + l * l;
    num / (den * den)
}

fn cc_ca_closed_form(c: f64, q: f64) -> ClosedForm {
    let (l_a, l_b) = cc_ca_local_squeezing(c, q);
    let det_local = cc_ca_local_det(c, q, l_a, l_b);
    if q >= cc_ca_threshold(c) - BRANCH_GUARD {
        return ClosedForm {
            ogd: 0.0,
            det_local,
            det_joint: det_local,
            branch: Branch::Vanishing,
        };
    }
    let det_joint = cc_ca_joint_det(c, q, cc_ca_joint_squeezing(c, q));
    ClosedForm {
        ogd: 0.5 * (math::ln(det_local) - math::ln(det_joint)),
        det_local,
        det_joint,
        branch: Branch::Squeezed,
    }
}

/// Isotropic conditional variances `(local, joint)` for the asymmetric family.
pub fn asymmetric_conditional_variances(b: f64, v: f64, s: f64) -> (f64, f64) {
    let local = 1.0 + b + v - s * s / (1.0 + b);
    let joint = if s < 0.0 {
        1.0 + b + v - s * s / (b - 1.0)
    } else {
        local
    };
    (local, joint)
}

/// Optimal joint squeezing `(b − 1 + s)/(b − 1 − s)` for `s < 0`.
pub fn asymmetric_joint_squeezing(b: f64, s: f64) -> f64 {
    (b - 1.0 + s) / (b - 1.0 - s)
}

fn asymmetric_closed_form(b: f64, v: f64, s: f64) -> ClosedForm {
    let (local, joint) = asymmetric_conditional_variances(b, v, s);
    let (ogd, branch) = if s >= -BRANCH_GUARD {
        (0.0, Branch::Vanishing)
    } else {
        let den = (1.0 + b) * (b * b - s * s - 1.0 - v + b * v);
        (math::ln(1.0 + 2.0 * s * s / den), Branch::Squeezed)
    };
    ClosedForm {
        ogd,
        det_local: local * local,
        det_joint: joint * joint,
        branch,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_f_examples() {
        assert_eq!(entropy_f(1.0).unwrap(), 0.0);
        assert!((entropy_f(3.0).unwrap() - 2.0 * 2f64.ln()).abs() < 1e-15);
        let f5 = 3.0 * 3f64.ln() - 2.0 * 2f64.ln();
        assert!((entropy_f(5.0).unwrap() - f5).abs() < 1e-14);
        assert!(entropy_f(0.999).is_err());
    }

    #[test]
    fn symmetric_closed_form_at_t_one_is_arccosh() {
        for a in [1.5, 2.0, 10.0, 50.0] {
            let cf = closed_form_ogd(&FamilyParams::SymmetricT { a, t: 1.0 }).unwrap();
            assert!((cf.ogd - a.acosh()).abs() < 1e-12, "a={a}");
            assert_eq!(cf.branch, Branch::Homodyne);
        }
    }

    #[test]
    fn symmetric_closed_form_is_continuous_at_kink() {
        let a: f64 = 10.0;
        let th = ((a - 1.0) / (a + 1.0)).sqrt();
        let lo = closed_form_ogd(&FamilyParams::SymmetricT { a, t: th - 1e-9 }).unwrap();
        let hi = closed_form_ogd(&FamilyParams::SymmetricT { a, t: th + 1e-9 }).unwrap();
        assert_eq!(lo.branch, Branch::Squeezed);
        assert_eq!(hi.branch, Branch::Homodyne);
        assert!((lo.ogd - hi.ogd).abs() < 1e-7);
        assert!((th - (9.0f64 / 11.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn ca_state_closed_form() {
        let cf = closed_form_ogd(&FamilyParams::CcCa { c: 9.0, q: -1.0 }).unwrap();
        assert!((cf.det_local - (40.0f64 / 11.0).powi(2)).abs() < 1e-12);
        assert!((cf.det_joint - 4.0).abs() < 1e-12);
        assert!((cf.ogd - (20.0f64 / 11.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn cc_ca_threshold_continuity() {
        let th = cc_ca_threshold(9.0);
        assert!((th - 1.0 / 19f64.sqrt()).abs() < 1e-15);
        for q in [th, th + 1e-9, 0.5, 1.0] {
            let cf = closed_form_ogd(&FamilyParams::CcCa { c: 9.0, q }).unwrap();
            assert_eq!(cf.ogd, 0.0);
            assert_eq!(cf.branch, Branch::Vanishing);
            assert_eq!(cf.det_local, cf.det_joint);
        }
    }

    #[test]
    fn cc_ca_joint_det_matches_two_mode_squeezed_measurement() {
        for q in [-1.0, -0.3, 0.0, 0.6, 1.0] {
            let state = FamilyParams::CcCa { c: 9.0, q }.state().unwrap();
            let objective = joint_objective(&state).unwrap();
            for l in [1e-3, 0.2, 0.7, 1.0] {
                let kernel = objective(&[0.0, 0.0, 0.5, 0.0, 0.5 * PI, l, l]).exp();
                let printed = cc_ca_joint_det(9.0, q, l);
                assert!((kernel - printed).abs() < 1e-10 * printed, "q={q} l={l}");
            }
        }
    }

    #[test]
    fn cc_ca_local_det_matches_objective() {
        for q in [-1.0, -0.6, 0.1, 0.8] {
            let state = FamilyParams::CcCa { c: 9.0, q }.state().unwrap();
            let (la, lb) = cc_ca_local_squeezing(9.0, q);
            let v = local_objective(&state)(&[0.0, 0.0, la.min(1.0), lb.max(L_MIN)]).exp();
            let printed = cc_ca_local_det(9.0, q, la, lb.max(L_MIN));
            assert!((v - printed).abs() < 1e-8 * printed, "q={q}");
        }
    }

    #[test]
    fn cc_state_joint_matches_local() {
        let c = 9.0;
        let l = cc_ca_joint_squeezing(c, 1.0);
        assert!((l - 1.0).abs() < 1e-15);
        let (la, lb) = cc_ca_local_squeezing(c, 1.0);
        assert!((cc_ca_joint_det(c, 1.0, l) - cc_ca_local_det(c, 1.0, la, lb)).abs() < 1e-12);
    }

    #[test]
    fn asymmetric_closed_form_matches_variances() {
        for (b, v, s) in [(3.0, 0.0, -1.0), (2.0, 10.0, -0.5), (10.0, 1.0, -9.0)] {
            let cf = closed_form_ogd(&FamilyParams::Asymmetric { b, v, s }).unwrap();
            let (l, j) = asymmetric_conditional_variances(b, v, s);
            assert!((cf.ogd - (l / j).ln()).abs() < 1e-12);
            assert!((cf.det_local - l * l).abs() < 1e-9 * l * l);
        }
        let pos = closed_form_ogd(&FamilyParams::Asymmetric {
            b: 3.0,
            v: 1.0,
            s: 2.0,
        })
        .unwrap();
        assert_eq!(pos.ogd, 0.0);
        assert_eq!(pos.branch, Branch::Vanishing);
    }

    #[test]
    fn family_validation() {
        assert!(FamilyParams::SymmetricT { a: 0.5, t: 0.0 }
            .validate()
            .is_err());
        assert!(FamilyParams::SymmetricT { a: 2.0, t: 1.1 }
            .validate()
            .is_err());
        assert!(FamilyParams::CcCa { c: 0.0, q: 0.0 }.validate().is_err());
        assert!(FamilyParams::Asymmetric {
            b: 2.0,
            v: 0.0,
            s: -1.5
        }
        .validate()
        .is_err());
        assert!(closed_form_ogd(&FamilyParams::CcCa { c: 9.0, q: 2.0 }).is_err());
    }

    #[test]
    fn product_state_measures_vanish() {
        let state = TwoModeCov::standard(4.0, 2.0, 0.0, 0.0).unwrap();
        let r = ogd(&state, 0).unwrap();
        assert!(r.ogd.abs() <= 1e-9);
        assert!(r.gqd.abs() <= 1e-9);
        assert!(r.renyi2.abs() <= 1e-9);
        assert!((r.hmin_local - r.hmin_joint - r.ogd).abs() < 1e-12);
    }

    #[test]
    fn tmsv_ogd_is_twice_squeezing() {
        let state = TwoModeCov::two_mode_squeezed_vacuum(0.5);
        let r = ogd(&state, 0).unwrap();
        assert!((r.ogd - 1.0).abs() < 1e-5, "{}", r.ogd);
    }

    #[test]
    fn symmetric_local_optimum_is_heterodyne() {
        let state = FamilyParams::SymmetricT { a: 10.0, t: 0.5 }
            .state()
            .unwrap();
        let lo = local_minimum(&state, 0).unwrap();
        assert!((lo.ln_det - 2.0 * 8.75f64.ln()).abs() < 1e-10);
        assert!((lo.ma.l() - 1.0).abs() < 1e-5 && (lo.mb.l() - 1.0).abs() < 1e-5);
    }

    #[test]
    fn cc_joint_optimum_equals_local() {
        let state = FamilyParams::CcCa { c: 9.0, q: 1.0 }.state().unwrap();
        let lo = local_minimum(&state, 0).unwrap();
        let jo = joint_minimum(&state, 0, None).unwrap();
        assert!(
            (lo.ln_det - jo.ln_det).abs() < 1e-9,
            "{} {}",
            lo.ln_det,
            jo.ln_det
        );
        assert!((lo.ln_det - 2.0 * (40.0f64 / 11.0).ln()).abs() < 1e-9);
    }

    #[test]
    fn renyi_vanishes_without_p_correlations() {
        let state = TwoModeCov::standard(2.0, 2.0, 1.0, 0.0).unwrap();
        assert!(renyi2_discord(&state, 0).unwrap().abs() < 1e-9);
    }

    #[test]
    fn gqd_orders_cc_above_ca() {
        let cc = FamilyParams::CcCa { c: 9.0, q: 1.0 }.state().unwrap();
        let ca = FamilyParams::CcCa { c: 9.0, q: -1.0 }.state().unwrap();
        assert!(gqd(&cc, 0).unwrap() > gqd(&ca, 0).unwrap());
    }
}
