//! Minimal dense complex matrices: just enough linear algebra for 4x4
//! correction unitaries and small reduced density matrices.

use num_complex::Complex64;

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(dim: usize) -> Self {
        CMat {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = CMat::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds from rows of (re, im) pairs; panics if the shape is not square.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "non-square matrix");
        CMat {
            dim,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn mul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMat {
        let n = self.dim;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, c: Complex64) -> CMat {
        CMat {
            dim: self.dim,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn sub(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.dim, rhs.dim);
        CMat {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// max |self - c I|, the distance from a scalar matrix.
    pub fn max_abs_sub_scalar(&self, c: Complex64) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { c } else { Complex64::new(0.0, 0.0) };
                worst = worst.max((self[(i, j)] - want).norm());
            }
        }
        worst
    }

    /// Kronecker product (self ⊗ rhs).
    pub fn kron(&self, rhs: &CMat) -> CMat {
        let (n, m) = (self.dim, rhs.dim);
        let mut out = CMat::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self[(i, j)];
                for k in 0..m {
                    for l in 0..m {
                        out[(i * m + k, j * m + l)] = a * rhs[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// max |U†U − I|; zero for a unitary matrix.
    pub fn unitarity_defect(&self) -> f64 {
        self.adjoint()
            .mul(self)
            .max_abs_sub_scalar(Complex64::new(1.0, 0.0))
    }

    /// Eigenvalues of a Hermitian matrix via cyclic Jacobi rotations,
    /// ascending. The input is assumed Hermitian; the strictly lower triangle
    /// is ignored in the ordinary sense (full conjugations are applied).
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let n = self.dim;
        let mut a = self.clone();
        for _sweep in 0..200 {
            let mut off = 0.0f64;
            for p in 0..n {
                for q in (p + 1)..n {
                    off = off.max(a[(p, q)].norm());
                }
            }
            if off < 1e-14 {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    if apq.norm() < 1e-15 {
                        continue;
                    }
                    // Phase so the off-diagonal element becomes real, then a
                    // real Jacobi rotation zeroing it.
                    let phase = apq / apq.norm();
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    let theta = 0.5 * (2.0 * apq.norm()).atan2(app - aqq);
                    let (c, s) = (theta.cos(), theta.sin());
                    // Column rotation: [vp, vq] -> [c vp + s phase* vq? ...]
                    // U = [[c, -s*phase],[s*conj(phase)... ]] chosen so that
                    // U† A U has zero (p,q) entry.
                    let u_pp = Complex64::new(c, 0.0);
                    let u_pq = -phase * s;
                    let u_qp = phase.conj() * s;
                    let u_qq = Complex64::new(c, 0.0);
                    // A <- U† A U, touching only rows/cols p and q.
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = akp * u_pp + akq * u_qp;
                        a[(k, q)] = akp * u_pq + akq * u_qq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
                        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
                    }
                }
            }
        }
        let mut eigs: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
        eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
        eigs
    }

    /// Phase-normalized quantized key: two matrices equal up to a global
    /// phase produce the same key. Used to deduplicate Clifford dictionaries.
    pub fn phase_canonical_key(&self) -> Vec<(i64, i64)> {
        let max = self.max_abs();
        let pivot = self
            .data
            .iter()
            .find(|v| v.norm() >= max - 1e-6)
            .copied()
            .unwrap_or(Complex64::new(1.0, 0.0));
        let phase = pivot / pivot.norm();
        self.data
            .iter()
            .map(|v| {
                let w = v / phase;
                ((w.re * 1e6).round() as i64, (w.im * 1e6).round() as i64)
            })
            .collect()
    }

    /// True when self = e^{iφ} rhs for some real φ, within `tol` max-norm.
    pub fn equal_up_to_phase(&self, rhs: &CMat, tol: f64) -> bool {
        if self.dim != rhs.dim {
            return false;
        }
        let max = rhs.max_abs();
        if max < 1e-12 {
            return self.max_abs() < tol;
        }
        let idx = rhs
            .data
            .iter()
            .position(|v| v.norm() >= max - 1e-6)
            .unwrap();
        let num = self.data[idx];
        let den = rhs.data[idx];
        if num.norm() < 1e-12 {
            return false;
        }
        let phase = num / den;
        if (phase.norm() - 1.0).abs() > 1e-6 {
            return false;
        }
        self.data
            .iter()
            .zip(&rhs.data)
            .all(|(a, b)| (a - b * phase).norm() <= tol)
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eigenvalues_of_pauli_z() {
        let mut m = CMat::zeros(2);
        m[(0, 0)] = c(1.0, 0.0);
        m[(1, 1)] = c(-1.0, 0.0);
        let e = m.hermitian_eigenvalues();
        assert!((e[0] + 1.0).abs() < 1e-12);
        assert!((e[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_of_complex_hermitian() {
        // [[2, i],[-i, 2]] has eigenvalues 1 and 3.
        let mut m = CMat::zeros(2);
        m[(0, 0)] = c(2.0, 0.0);
        m[(0, 1)] = c(0.0, 1.0);
        m[(1, 0)] = c(0.0, -1.0);
        m[(1, 1)] = c(2.0, 0.0);
        let e = m.hermitian_eigenvalues();
        assert!((e[0] - 1.0).abs() < 1e-12, "{e:?}");
        assert!((e[1] - 3.0).abs() < 1e-12, "{e:?}");
    }

    #[test]
    fn eigenvalues_of_rank_one_projector() {
        // |+><+| ⊗ |0><0| padded: 4x4 with eigenvalues {0,0,0,1}.
        let mut m = CMat::zeros(4);
        for i in 0..2 {
            for j in 0..2 {
                m[(i, j)] = c(0.5, 0.0);
            }
        }
        let e = m.hermitian_eigenvalues();
        assert!((e[3] - 1.0).abs() < 1e-12, "{e:?}");
        assert!(e[..3].iter().all(|v| v.abs() < 1e-12), "{e:?}");
    }

    #[test]
    fn phase_key_identifies_global_phase() {
        let mut m = CMat::identity(4);
        m[(2, 3)] = c(0.3, -0.4);
        let rotated = m.scale(Complex64::from_polar(1.0, 1.234));
        assert_eq!(m.phase_canonical_key(), rotated.phase_canonical_key());
        assert!(m.equal_up_to_phase(&rotated, 1e-12));
        let other = CMat::identity(4);
        assert_ne!(m.phase_canonical_key(), other.phase_canonical_key());
    }
}
