//! Gaussian signal encoding on mode A and the information B's holder can
//! extract with local or joint measurements.
//!
//! A classical Gaussian signal of variance `V_s` displaces both quadratures of
//! A, turning `σ` into `σ + V_s (I ⊕ 0)`. After a measurement with POVM
//! covariance `μ` only the A block of the outcome covariance changes, so the
//! conditional covariance becomes `σ̃_A + V_s I` and
//! `I = ½ ln det(σ̃_A + V_s I) − ½ ln det σ̃_A`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::discord::{joint_space, local_space, ogd_value};
use crate::error::{Error, Result};
use crate::linalg::{Mat2, Mat4};
use crate::math;
use crate::measurement::{
    conditioned_on_b, ln_det_plus_local, ConditioningKernel, JointMeasurement, LocalMeasurement,
    RawJoint,
};
use crate::optimize::{minimize_with, MinimizeOptions};
use crate::symplectic::{require_physical, TwoModeCov};

/// Signal variances used when none are given.
pub const DEFAULT_SCHEDULE: [f64; 5] = [1.0, 1e2, 1e4, 1e6, 1e8];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EncodedState {
    pub base: TwoModeCov,
    pub vs: f64,
}

impl EncodedState {
    pub fn covariance(&self) -> TwoModeCov {
        let shift = Mat4::direct_sum(&Mat2::scaled_identity(self.vs), &Mat2::ZERO);
        self.base
            .plus(&shift)
            .expect("adding classical noise keeps the matrix valid")
    }
}

fn check_vs(vs: f64) -> Result<()> {
    if vs > 0.0 && vs.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "signal variance",
            value: vs,
        })
    }
}

/// Encode a signal of variance `vs` on mode A.
pub fn encode(state: &TwoModeCov, vs: f64) -> Result<EncodedState> {
    check_vs(vs)?;
    require_physical(state)?;
    Ok(EncodedState { base: *state, vs })
}

/// Mutual information of a heterodyne-type measurement with squeezing `l_a`
/// on a single mode with isotropic variance `a`: two parallel Gaussian
/// channels.
pub fn mutual_info_single_mode(a: f64, l_a: f64, vs: f64) -> Result<f64> {
    if !(a >= 1.0) || !a.is_finite() {
        return Err(Error::Domain {
            what: "mode variance",
            value: a,
        });
    }
    if !(l_a > 0.0 && l_a <= 1.0) {
        return Err(Error::Domain {
            what: "measurement squeezing L",
            value: l_a,
        });
    }
    check_vs(vs)?;
    Ok(0.5 * math::ln_1p(vs / (a + l_a)) + 0.5 * math::ln_1p(vs / (a + 1.0 / l_a)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MutualInfoReport {
    pub vs: f64,
    pub i_local: f64,
    pub i_joint: f64,
    /// `i_joint − i_local`.
    pub gap: f64,
    /// Eigenvalues of the optimal local conditional covariance of the base
    /// state, ascending.
    pub eig_local: (f64, f64),
    pub eig_joint: (f64, f64),
    pub opt_local: (LocalMeasurement, LocalMeasurement),
    pub opt_joint: JointMeasurement,
}

/// Best local and joint mutual informations at signal variance `vs`.
pub fn mutual_info_report(state: &TwoModeCov, vs: f64, seed: u64) -> Result<MutualInfoReport> {
    let encoded = encode(state, vs)?;
    let shifted = encoded.covariance();

    let local_info = |p: &[f64]| -> f64 {
        match conditioned_on_b(state, p[1], p[3]) {
            Ok(x) => {
                let xs = x + Mat2::scaled_identity(vs);
                0.5 * (ln_det_plus_local(&xs, p[0], p[2]) - ln_det_plus_local(&x, p[0], p[2]))
            }
            Err(_) => f64::NAN,
        }
    };
    let options = MinimizeOptions::default().with_warm_start(vec![0.0, 0.0, 1.0, 1.0]);
    let local = minimize_with(|p| -local_info(p), &local_space(), seed, &options)?;
    let lp = &local.argmin;
    let ma = LocalMeasurement::new(lp[0], lp[2])?;
    let mb = LocalMeasurement::new(lp[1], lp[3])?;
    let i_local = -local.value;

    let base_kernel = ConditioningKernel::new(state)?;
    let shifted_kernel = ConditioningKernel::new(&shifted)?;
    let joint_info = |p: &[f64]| -> f64 {
        let raw = RawJoint::from_slice(p);
        0.5 * (shifted_kernel.joint_ln_det(&raw) - base_kernel.joint_ln_det(&raw))
    };
    let embedded = vec![0.0, 0.0, 1.0, lp[0], lp[1], lp[2], lp[3]];
    let options = MinimizeOptions::default()
        .with_warm_start(embedded.clone())
        .with_warm_start(vec![0.0, 0.0, 0.5, 0.0, 0.5 * PI, 1.0, 1.0]);
    let mut joint = minimize_with(|p| -joint_info(p), &joint_space(), seed, &options)?;
    let at_local = -joint_info(&embedded);
    if at_local < joint.value {
        joint.argmin = embedded;
        joint.value = at_local;
    }
    let jp = &joint.argmin;
    let opt_joint = JointMeasurement::new(
        jp[0],
        jp[1],
        jp[2],
        LocalMeasurement::new(jp[3], jp[5])?,
        LocalMeasurement::new(jp[4], jp[6])?,
    )?;
    let i_joint = -joint.value;

    let eig_local = crate::measurement::conditional_cov_local(state, &ma, &mb)?.eigenvalues();
    let eig_joint = base_kernel
        .joint_cov(&RawJoint::from_slice(jp))?
        .eigenvalues();
    Ok(MutualInfoReport {
        vs,
        i_local,
        i_joint,
        gap: i_joint - i_local,
        eig_local,
        eig_joint,
        opt_local: (ma, mb),
        opt_joint,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergencePoint {
    pub vs: f64,
    pub i_local: f64,
    pub i_joint: f64,
    pub gap: f64,
    /// `|gap − ogd|`.
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    pub ogd: f64,
    pub points: Vec<ConvergencePoint>,
}

/// Strategy gap along an increasing schedule of signal variances, compared
/// with the state's OGD.
pub fn ogd_convergence(
    state: &TwoModeCov,
    schedule: &[f64],
    seed: u64,
) -> Result<ConvergenceStudy> {
    if schedule.is_empty() {
        return Err(Error::InvalidConfig("empty signal-variance schedule"));
    }
    for w in schedule.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::InvalidConfig(
                "signal-variance schedule must increase",
            ));
        }
    }
    for &vs in schedule {
        check_vs(vs)?;
    }
    let (ogd, _, _) = ogd_value(state, seed)?;
    let points = schedule
        .iter()
        .map(|&vs| {
            let r = mutual_info_report(state, vs, seed)?;
            Ok(ConvergencePoint {
                vs,
                i_local: r.i_local,
                i_joint: r.i_joint,
                gap: r.gap,
                distance: math::abs(r.gap - ogd),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceStudy { ogd, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encode_examples() {
        let vac = TwoModeCov::standard(1.0, 1.0, 0.0, 0.0).unwrap();
        let e = encode(&vac, 3.0).unwrap().covariance();
        assert!(e.matrix().max_abs_diff(&Mat4::diag([4.0, 4.0, 1.0, 1.0])) < 1e-15);

        let s = TwoModeCov::standard(10.0, 10.0, 5.0, -5.0).unwrap();
        let e = encode(&s, 100.0).unwrap().covariance();
        assert!(e.a().matrix().max_abs_diff(&Mat2::scaled_identity(110.0)) < 1e-12);
        assert_eq!(e.b(), s.b());
        assert_eq!(e.c(), s.c());

        let tiny = encode(&s, 1e-300).unwrap().covariance();
        assert!(tiny.matrix().max_abs_diff(&s.matrix()) < 1e-15);
        assert!(encode(&s, 0.0).is_err());
        assert!(encode(&s, -1.0).is_err());
    }

    #[test]
    fn single_mode_examples() {
        let v = mutual_info_single_mode(1.0, 1.0, 3.0).unwrap();
        assert!((v - 2.5f64.ln()).abs() < 1e-15);
        assert!(
            mutual_info_single_mode(10.0, 1.0, 90.0).unwrap()
                > mutual_info_single_mode(10.0, 0.5, 90.0).unwrap()
        );
        assert!(mutual_info_single_mode(10.0, 1.0, 1e-12).unwrap() < 1e-12);
        assert!(mutual_info_single_mode(0.5, 1.0, 1.0).is_err());
        assert!(mutual_info_single_mode(2.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn product_state_has_no_gap() {
        let s = TwoModeCov::standard(4.0, 2.0, 0.0, 0.0).unwrap();
        let r = mutual_info_report(&s, 10.0, 0).unwrap();
        assert!(r.gap.abs() <= 1e-9, "{}", r.gap);
        // heterodyne on an isotropic mode of variance 4
        let expect = mutual_info_single_mode(4.0, 1.0, 10.0).unwrap();
        assert!((r.i_local - expect).abs() < 1e-10);
    }

    #[test]
    fn schedule_must_increase() {
        let s = TwoModeCov::standard(4.0, 2.0, 0.0, 0.0).unwrap();
        assert!(ogd_convergence(&s, &[10.0, 1.0], 0).is_err());
        assert!(ogd_convergence(&s, &[], 0).is_err());
    }
}
