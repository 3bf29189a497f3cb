//! Fixed-size real matrices used throughout the crate.
//!
//! Everything here is 2×2 or 4×4 and stack allocated. The 4×4 matrices are
//! indexed in the quadrature order `(x_A, p_A, x_B, p_B)`.

use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::math;

/// A real 2×2 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat2(pub [[f64; 2]; 2]);

/// A real 4×4 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat4(pub [[f64; 4]; 4]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[0.0; 2]; 2]);
    pub const IDENTITY: Mat2 = Mat2([[1.0, 0.0], [0.0, 1.0]]);

    pub const fn new(m00: f64, m01: f64, m10: f64, m11: f64) -> Self {
        Mat2([[m00, m01], [m10, m11]])
    }

    pub const fn diag(d0: f64, d1: f64) -> Self {
        Mat2([[d0, 0.0], [0.0, d1]])
    }

    pub fn scaled_identity(s: f64) -> Self {
        Self::diag(s, s)
    }

    /// Counter-clockwise rotation `[[cos, -sin], [sin, cos]]`.
    pub fn rotation(angle: f64) -> Self {
        let (s, c) = math::sin_cos(angle);
        Mat2([[c, -s], [s, c]])
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    /// Adjugate. Linear in the matrix for the 2×2 case.
    pub fn adjugate(&self) -> Self {
        let m = &self.0;
        Mat2([[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]])
    }

    /// Closed-form inverse, `None` when the determinant is zero or not finite.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        Some(self.adjugate().scale(1.0 / det))
    }

    pub fn scale(&self, s: f64) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    /// `vᵀ M v`.
    pub fn quad_form(&self, v: [f64; 2]) -> f64 {
        let m = &self.0;
        v[0] * (m[0][0] * v[0] + m[0][1] * v[1]) + v[1] * (m[1][0] * v[0] + m[1][1] * v[1])
    }

    /// Largest absolute difference between `M` and `Mᵀ`.
    pub fn asymmetry(&self) -> f64 {
        math::abs(self.0[0][1] - self.0[1][0])
    }

    /// Eigenvalues of the symmetric part, ascending.
    pub fn symmetric_eigenvalues(&self) -> (f64, f64) {
        let m = &self.0;
        let off = 0.5 * (m[0][1] + m[1][0]);
        let mean = 0.5 * (m[0][0] + m[1][1]);
        let half_diff = 0.5 * (m[0][0] - m[1][1]);
        let radius = math::hypot(half_diff, off);
        (mean - radius, mean + radius)
    }

    /// 1-norm condition number estimate from the closed-form inverse.
    pub fn condition_number(&self) -> f64 {
        match self.inverse() {
            Some(inv) => self.norm1() * inv.norm1(),
            None => f64::INFINITY,
        }
    }

    fn norm1(&self) -> f64 {
        let m = &self.0;
        let c0 = math::abs(m[0][0]) + math::abs(m[1][0]);
        let c1 = math::abs(m[0][1]) + math::abs(m[1][1]);
        c0.max(c1)
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max(math::abs(self.0[i][j] - other.0[i][j]));
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }
}

impl Mat4 {
    pub const ZERO: Mat4 = Mat4([[0.0; 4]; 4]);
    pub const IDENTITY: Mat4 = Mat4([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]);

    pub fn diag(d: [f64; 4]) -> Self {
        let mut m = Mat4::ZERO;
        for (i, v) in d.into_iter().enumerate() {
            m.0[i][i] = v;
        }
        m
    }

    /// Assemble `[[a, c], [d, b]]` from 2×2 blocks.
    pub fn from_blocks(a: &Mat2, c: &Mat2, d: &Mat2, b: &Mat2) -> Self {
        let mut m = Mat4::ZERO;
        for i in 0..2 {
            for j in 0..2 {
                m.0[i][j] = a.0[i][j];
                m.0[i][j + 2] = c.0[i][j];
                m.0[i + 2][j] = d.0[i][j];
                m.0[i + 2][j + 2] = b.0[i][j];
            }
        }
        m
    }

    /// Block-diagonal `a ⊕ b`.
    pub fn direct_sum(a: &Mat2, b: &Mat2) -> Self {
        Self::from_blocks(a, &Mat2::ZERO, &Mat2::ZERO, b)
    }

    /// The 2×2 block at block coordinates `(bi, bj)`, each in `{0, 1}`.
    pub fn block(&self, bi: usize, bj: usize) -> Mat2 {
        let (r, c) = (2 * bi, 2 * bj);
        Mat2([
            [self.0[r][c], self.0[r][c + 1]],
            [self.0[r + 1][c], self.0[r + 1][c + 1]],
        ])
    }

    pub fn transpose(&self) -> Self {
        let mut t = Mat4::ZERO;
        for i in 0..4 {
            for j in 0..4 {
                t.0[i][j] = self.0[j][i];
            }
        }
        t
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        out.0.iter_mut().flatten().for_each(|v| *v *= s);
        out
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> f64 {
        det_small(&self.0, 4)
    }

    /// `Mᵀ · X · M`.
    pub fn congruence(&self, x: &Mat4) -> Mat4 {
        self.transpose() * *x * *self
    }

    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in (i + 1)..4 {
                worst = worst.max(math::abs(self.0[i][j] - self.0[j][i]));
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Mat4) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max(math::abs(self.0[i][j] - other.0[i][j]));
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }

    /// Lower Cholesky factor, `None` unless strictly positive definite.
    pub fn cholesky(&self) -> Option<Mat4> {
        let mut l = [[0.0; 4]; 4];
        cholesky_in_place(&self.0, &mut l, 4).then_some(Mat4(l))
    }

    pub fn is_positive_definite(&self) -> bool {
        self.cholesky().is_some()
    }
}

impl Index<(usize, usize)> for Mat4 {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Mat4 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.0[i][j]
    }
}

impl Index<(usize, usize)> for Mat2 {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        self + rhs.scale(-1.0)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(-1.0)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }
}

impl Add for Mat4 {
    type Output = Mat4;
    fn add(self, rhs: Mat4) -> Mat4 {
        let mut out = self;
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }
}

impl Sub for Mat4 {
    type Output = Mat4;
    fn sub(self, rhs: Mat4) -> Mat4 {
        self + rhs.scale(-1.0)
    }
}

impl Mul for Mat4 {
    type Output = Mat4;
    fn mul(self, rhs: Mat4) -> Mat4 {
        let mut out = [[0.0; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..4).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        Mat4(out)
    }
}

/// Determinant of the leading `n×n` part of `m`, `n ≤ 4`.
pub(crate) fn det_small(m: &[[f64; 4]; 4], n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => {
            let mut a = *m;
            let mut det = 1.0;
            for col in 0..n {
                let pivot = (col..n)
                    .max_by(|&i, &j| math::abs(a[i][col]).total_cmp(&math::abs(a[j][col])))
                    .unwrap_or(col);
                if a[pivot][col] == 0.0 {
                    return 0.0;
                }
                if pivot != col {
                    a.swap(pivot, col);
                    det = -det;
                }
                det *= a[col][col];
                for row in (col + 1)..n {
                    let factor = a[row][col] / a[col][col];
                    for k in col..n {
                        a[row][k] -= factor * a[col][k];
                    }
                }
            }
            det
        }
    }
}

/// Cholesky of the leading `n×n` block of a symmetric matrix. Returns false
/// if a pivot is not strictly positive.
pub(crate) fn cholesky_in_place(a: &[[f64; 4]; 4], l: &mut [[f64; 4]; 4], n: usize) -> bool {
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[i][j];
            for k in 0..j {
                sum -= l[i][k] * l[j][k];
            }
            if i == j {
                if !(sum > 0.0) || !sum.is_finite() {
                    return false;
                }
                l[i][i] = math::sqrt(sum);
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_matches_cofactor_expansion() {
        let m = Mat4([
            [2.0, 1.0, 0.5, 0.0],
            [1.0, 3.0, 0.0, 0.25],
            [0.5, 0.0, 4.0, 1.0],
            [0.0, 0.25, 1.0, 5.0],
        ]);
        // cofactor expansion along the first row
        let minor = |skip_col: usize| {
            let mut sub = [[0.0; 4]; 4];
            for (r, row) in (1..4).enumerate() {
                let mut c = 0;
                for col in 0..4 {
                    if col != skip_col {
                        sub[r][c] = m.0[row][col];
                        c += 1;
                    }
                }
            }
            sub[0][0] * (sub[1][1] * sub[2][2] - sub[1][2] * sub[2][1])
                - sub[0][1] * (sub[1][0] * sub[2][2] - sub[1][2] * sub[2][0])
                + sub[0][2] * (sub[1][0] * sub[2][1] - sub[1][1] * sub[2][0])
        };
        let expected: f64 = (0..4)
            .map(|j| if j % 2 == 0 { 1.0 } else { -1.0 } * m.0[0][j] * minor(j))
            .sum();
        assert!((m.det() - expected).abs() < 1e-12);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        assert!(Mat4::diag([1.0, 1.0, -1.0, 1.0]).cholesky().is_none());
        let l = Mat4::diag([4.0, 9.0, 1.0, 16.0]).cholesky().unwrap();
        assert_eq!(l, Mat4::diag([2.0, 3.0, 1.0, 4.0]));
    }

    #[test]
    fn mat2_inverse_and_eigenvalues() {
        let m = Mat2::new(2.0, 1.0, 1.0, 2.0);
        let inv = m.inverse().unwrap();
        assert!((m * inv).max_abs_diff(&Mat2::IDENTITY) < 1e-15);
        let (lo, hi) = m.symmetric_eigenvalues();
        assert!((lo - 1.0).abs() < 1e-15 && (hi - 3.0).abs() < 1e-15);
        assert!(Mat2::new(1.0, 2.0, 2.0, 4.0).inverse().is_none());
    }
}
