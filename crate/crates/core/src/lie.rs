//! Lie algebras given by structure constants in a frame of left-invariant fields.

use crate::error::{GeometryError, Result};
use crate::tensor::{check_dim, max_abs, DenseTensor, Variance, DEFAULT_EPSILON};

/// Pivot threshold for the rank-revealing elimination in [`LieFrameAlgebra::derived_subalgebra`].
pub const PIVOT_THRESHOLD: f64 = 1e-9;

/// `[X_i, X_j] = Σ_k c^k_ij X_k`, stored as a (1,2) tensor indexed `[k, i, j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LieFrameAlgebra {
    c: DenseTensor,
}

impl LieFrameAlgebra {
    pub fn new(c: DenseTensor) -> Result<Self> {
        check_dim(c.dim())?;
        if c.variance() != [Variance::Contra, Variance::Co, Variance::Co] {
            return Err(GeometryError::ShapeMismatch(format!(
                "structure constants must be a (1,2) tensor, got {:?}",
                c.variance()
            )));
        }
        let n = c.dim();
        let mut defect: f64 = 0.0;
        for k in 0..n {
            for i in 0..n {
                for j in 0..=i {
                    defect = defect.max((c.get(&[k, i, j]) + c.get(&[k, j, i])).abs());
                }
            }
        }
        if defect > DEFAULT_EPSILON * c.max_abs().max(1.0) {
            return Err(GeometryError::NotAntisymmetric(defect));
        }
        Ok(Self { c })
    }

    pub fn abelian(dim: usize) -> Result<Self> {
        Self::new(DenseTensor::zeros(
            dim,
            &[Variance::Contra, Variance::Co, Variance::Co],
        )?)
    }

    /// Builds the algebra from the brackets `[X_i, X_j] = coeffs` (0-based
    /// indices); the `[X_j, X_i]` entries are filled in by antisymmetry.
    pub fn from_brackets(dim: usize, brackets: &[(usize, usize, Vec<f64>)]) -> Result<Self> {
        let mut c = DenseTensor::zeros(dim, &[Variance::Contra, Variance::Co, Variance::Co])?;
        for (i, j, coeffs) in brackets {
            let (i, j) = (*i, *j);
            if i >= dim || j >= dim {
                return Err(GeometryError::ShapeMismatch(format!(
                    "bracket index ({i}, {j}) out of range for dim {dim}"
                )));
            }
            if coeffs.len() != dim {
                return Err(GeometryError::DimensionMismatch {
                    expected: dim,
                    actual: coeffs.len(),
                });
            }
            if i == j {
                if max_abs(coeffs) > 0.0 {
                    return Err(GeometryError::NotAntisymmetric(max_abs(coeffs)));
                }
                continue;
            }
            for (k, &v) in coeffs.iter().enumerate() {
                c.set(&[k, i, j], v);
                c.set(&[k, j, i], -v);
            }
        }
        Self::new(c)
    }

    pub fn dim(&self) -> usize {
        self.c.dim()
    }

    pub fn structure_constants(&self) -> &DenseTensor {
        &self.c
    }

    pub fn constant(&self, k: usize, i: usize, j: usize) -> f64 {
        self.c.get(&[k, i, j])
    }

    /// `[X_i, X_j]` as frame components.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<f64> {
        (0..self.dim()).map(|k| self.c.get(&[k, i, j])).collect()
    }

    pub fn bracket(&self, u: &[f64], v: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        for w in [u, v] {
            if w.len() != n {
                return Err(GeometryError::DimensionMismatch {
                    expected: n,
                    actual: w.len(),
                });
            }
        }
        let mut out = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                let w = u[i] * v[j];
                if w == 0.0 {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o += w * self.c.get(&[k, i, j]);
                }
            }
        }
        Ok(out)
    }

    /// Largest component of the cyclic sum
    /// `[[X_i,X_j],X_k] + [[X_j,X_k],X_i] + [[X_k,X_i],X_j]` over basis triples.
    pub fn jacobi_defect(&self) -> f64 {
        let n = self.dim();
        let e = |i: usize| unit(n, i);
        let br = |u: &[f64], v: &[f64]| self.bracket(u, v).expect("dimensions agree");
        let mut defect: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let a = br(&self.bracket_basis(i, j), &e(k));
                    let b = br(&self.bracket_basis(j, k), &e(i));
                    let c = br(&self.bracket_basis(k, i), &e(j));
                    for m in 0..n {
                        defect = defect.max((a[m] + b[m] + c[m]).abs());
                    }
                }
            }
        }
        defect
    }

    /// Orthonormal (Euclidean in frame components) basis of `span{[X_i, X_j]}`.
    pub fn derived_subalgebra(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let images = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j)));
        orthonormal_span(images.map(|(i, j)| self.bracket_basis(i, j)), PIVOT_THRESHOLD)
    }

    /// Orthonormal basis of the 1-forms annihilating the derived subalgebra,
    /// i.e. the closed 1-forms with constant frame components.
    pub fn closed_one_forms(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let derived = self.derived_subalgebra();
        let k = derived.len();
        let all = orthonormal_span(derived.into_iter().chain((0..n).map(|i| unit(n, i))), PIVOT_THRESHOLD);
        all.into_iter().skip(k).collect()
    }

    /// Max |α([X_i, X_j])| over basis pairs.
    pub fn closedness_defect(&self, alpha: &[f64]) -> f64 {
        let n = self.dim();
        let mut m: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                let v: f64 = (0..n).map(|k| alpha[k] * self.c.get(&[k, i, j])).sum();
                m = m.max(v.abs());
            }
        }
        m
    }
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}

/// Modified Gram-Schmidt with reorthogonalization. Vectors whose residual
/// norm falls below `threshold` (relative to their own scale) are dropped.
fn orthonormal_span(vectors: impl Iterator<Item = Vec<f64>>, threshold: f64) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let scale = norm(&v);
        if scale <= threshold {
            continue;
        }
        let mut r = v;
        for _ in 0..2 {
            for b in &basis {
                let p = dot(&r, b);
                r.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
            }
        }
        let rn = norm(&r);
        if rn > threshold * scale.max(1.0) {
            basis.push(r.into_iter().map(|x| x / rn).collect());
        }
    }
    basis
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
