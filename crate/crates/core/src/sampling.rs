//! Random physical states and measurements for property checks.

use core::f64::consts::PI;

use rand::Rng;

use crate::linalg::{Mat2, Mat4};
use crate::measurement::{JointMeasurement, LocalMeasurement};
use crate::symplectic::{beamsplitter, phase_rotation, squeezer, CovMat2, TwoModeCov};

/// Ranges for [`random_state`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateSampler {
    /// Symplectic eigenvalues are drawn from `[1, 1 + thermal_spread]`.
    pub thermal_spread: f64,
    /// Single-mode squeezing parameters are drawn from `[-max, max]`.
    pub max_squeezing: f64,
}

impl Default for StateSampler {
    fn default() -> Self {
        StateSampler {
            thermal_spread: 4.0,
            max_squeezing: 0.8,
        }
    }
}

impl StateSampler {
    /// `S (ν₁ I ⊕ ν₂ I) Sᵀ` for a random symplectic `S` built from squeezers,
    /// phase rotations and a beamsplitter.
    pub fn state<R: Rng + ?Sized>(&self, rng: &mut R) -> TwoModeCov {
        let nu1 = 1.0 + self.thermal_spread * rng.random::<f64>();
        let nu2 = 1.0 + self.thermal_spread * rng.random::<f64>();
        let mut r = || self.max_squeezing * (2.0 * rng.random::<f64>() - 1.0);
        let (s1, s2, s3, s4) = (r(), r(), r(), r());
        let mut angle = || PI * rng.random::<f64>();
        let (p1, p2, p3, p4) = (angle(), angle(), angle(), angle());
        let eta = rng.random::<f64>();
        let s = phase_rotation(p3, p4)
            * squeezer(s3, s4)
            * beamsplitter(eta).expect("eta in [0, 1)")
            * phase_rotation(p1, p2)
            * squeezer(s1, s2);
        let thermal = TwoModeCov::new(
            CovMat2::new_unchecked(Mat2::scaled_identity(nu1)),
            CovMat2::new_unchecked(Mat2::scaled_identity(nu2)),
            Mat2::ZERO,
        );
        thermal
            .transformed(&s)
            .expect("symplectic image of a thermal state")
    }

    /// Random state with `C = 0`.
    pub fn product_state<R: Rng + ?Sized>(&self, rng: &mut R) -> TwoModeCov {
        let mut single = || {
            let nu = 1.0 + self.thermal_spread * rng.random::<f64>();
            let r = self.max_squeezing * (2.0 * rng.random::<f64>() - 1.0);
            let rot = Mat2::rotation(PI * rng.random::<f64>());
            let sq = squeezer(r, 0.0).block(0, 0);
            let s = rot * sq;
            CovMat2::new_unchecked((s * s.transpose()).scale(nu))
        };
        TwoModeCov::new(single(), single(), Mat2::ZERO)
    }
}

/// `R(θ_A) ⊕ R(θ_B)` with uniform angles.
pub fn random_local_rotation<R: Rng + ?Sized>(rng: &mut R) -> Mat4 {
    phase_rotation(
        2.0 * PI * rng.random::<f64>(),
        2.0 * PI * rng.random::<f64>(),
    )
}

/// Joint measurement with uniform angles and `η`, and squeezing drawn
/// log-uniformly from `[l_min, 1]`.
pub fn random_joint_measurement<R: Rng + ?Sized>(rng: &mut R, l_min: f64) -> JointMeasurement {
    let mut l = || libm::exp(libm::log(l_min) * rng.random::<f64>());
    let (la, lb) = (l(), l());
    let mut angle = || PI * rng.random::<f64>();
    let (ta, tb, pa) = (angle(), angle(), angle());
    let pb = 2.0 * PI * rng.random::<f64>();
    let eta = rng.random::<f64>();
    JointMeasurement::new(
        pa,
        pb,
        eta,
        LocalMeasurement::new(ta, la).expect("l in range"),
        LocalMeasurement::new(tb, lb).expect("l in range"),
    )
    .expect("eta in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::physicality_check;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sampled_states_are_physical() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let sampler = StateSampler::default();
        for _ in 0..200 {
            assert!(physicality_check(&sampler.state(&mut rng)));
            let p = sampler.product_state(&mut rng);
            assert!(physicality_check(&p));
            assert_eq!(*p.c(), Mat2::ZERO);
        }
    }
}
