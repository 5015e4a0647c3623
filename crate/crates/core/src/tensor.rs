//! Dense tensors over a fixed finite frame.
//!
//! Every geometric object in this crate is a tensor whose components are
//! taken with respect to one frame `{X_1, ..., X_dim}`. Components are stored
//! row-major: the first slot varies slowest. Slot variance is tracked so that
//! contractions can refuse to pair two covariant slots without a metric.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;

use crate::error::{GeometryError, Result};

/// Default relative tolerance for component comparisons.
pub const DEFAULT_EPSILON: f64 = 1e-9;

/// Largest supported tensor rank (the (0,4) curvature tensor).
pub const MAX_RANK: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variance {
    Co,
    Contra,
}

use Variance::{Co, Contra};

/// Checks the frame-size invariant: even and at least 4.
pub fn check_dim(dim: usize) -> Result<()> {
    if dim < 4 || !dim.is_multiple_of(2) {
        return Err(GeometryError::BadDimension(dim));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    dim: usize,
    variance: Vec<Variance>,
    data: Vec<f64>,
}

impl DenseTensor {
    pub fn zeros(dim: usize, variance: &[Variance]) -> Result<Self> {
        check_dim(dim)?;
        if variance.len() > MAX_RANK {
            return Err(GeometryError::RankOverflow(variance.len()));
        }
        Ok(Self {
            dim,
            variance: variance.to_vec(),
            data: vec![0.0; dim.pow(variance.len() as u32)],
        })
    }

    pub fn from_vec(dim: usize, variance: &[Variance], data: Vec<f64>) -> Result<Self> {
        let mut t = Self::zeros(dim, variance)?;
        if data.len() != t.data.len() {
            return Err(GeometryError::LengthMismatch {
                expected: t.data.len(),
                actual: data.len(),
            });
        }
        t.data = data;
        Ok(t)
    }

    /// Builds a tensor by evaluating `f` on every multi-index.
    pub fn from_fn(dim: usize, variance: &[Variance], mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let mut t = Self::zeros(dim, variance)?;
        let rank = t.rank();
        for flat in 0..t.data.len() {
            let idx = t.multi_index(flat);
            t.data[flat] = f(&idx[..rank]);
        }
        Ok(t)
    }

    pub fn scalar(dim: usize, value: f64) -> Result<Self> {
        Self::from_vec(dim, &[], vec![value])
    }

    pub fn covector(components: &[f64]) -> Result<Self> {
        Self::from_vec(components.len(), &[Co], components.to_vec())
    }

    pub fn vector(components: &[f64]) -> Result<Self> {
        Self::from_vec(components.len(), &[Contra], components.to_vec())
    }

    /// A rank-2 tensor from a row-major square matrix.
    pub fn from_rows(rows: &[Vec<f64>], variance: [Variance; 2]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(GeometryError::ShapeMismatch(format!(
                "matrix rows must all have length {dim}"
            )));
        }
        Self::from_vec(dim, &variance, rows.concat())
    }

    pub fn identity_map(dim: usize) -> Result<Self> {
        Self::from_fn(dim, &[Contra, Co], |i| delta(i[0], i[1]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.variance.len()
    }

    pub fn variance(&self) -> &[Variance] {
        &self.variance
    }

    pub fn components(&self) -> &[f64] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank(), "index arity does not match rank");
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.dim, "index {i} out of range");
            acc * self.dim + i
        })
    }

    /// Decodes a flat offset; only the first `rank` entries are meaningful.
    pub fn multi_index(&self, mut flat: usize) -> [usize; MAX_RANK] {
        let mut idx = [0; MAX_RANK];
        for slot in (0..self.rank()).rev() {
            idx[slot] = flat % self.dim;
            flat /= self.dim;
        }
        idx
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: f64) {
        let o = self.offset(idx);
        self.data[o] = value;
    }

    pub fn add_at(&mut self, idx: &[usize], value: f64) {
        let o = self.offset(idx);
        self.data[o] += value;
    }

    /// Value of a rank-0 tensor.
    pub fn as_scalar(&self) -> f64 {
        assert_eq!(self.rank(), 0, "as_scalar on a rank-{} tensor", self.rank());
        self.data[0]
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.data)
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.dim == other.dim && self.variance == other.variance
    }

    fn require_same_shape(&self, other: &Self) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(GeometryError::ShapeMismatch(format!(
                "dim {} {:?} vs dim {} {:?}",
                self.dim, self.variance, other.dim, other.variance
            )))
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.require_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| f64::max(m, (a - b).abs())))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        Self {
            dim: self.dim,
            variance: self.variance.clone(),
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            dim: self.dim,
            variance: self.variance.clone(),
            data: self.data.iter().map(|&a| f(a)).collect(),
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        self.map(|a| a * factor)
    }

    /// Reorders slots: `result(x_0, .., x_{r-1}) = self(x_{perm[0]}, .., x_{perm[r-1]})`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let rank = self.rank();
        let mut seen = [false; MAX_RANK];
        if perm.len() != rank || perm.iter().any(|&p| p >= rank || std::mem::replace(&mut seen[p], true)) {
            return Err(GeometryError::ShapeMismatch(format!(
                "{perm:?} is not a permutation of {rank} slots"
            )));
        }
        let mut variance = self.variance.clone();
        for (s, &p) in perm.iter().enumerate() {
            variance[p] = self.variance[s];
        }
        let mut out = Self {
            dim: self.dim,
            variance,
            data: vec![0.0; self.data.len()],
        };
        let mut src = [0; MAX_RANK];
        for flat in 0..out.data.len() {
            let idx = out.multi_index(flat);
            for (s, &p) in perm.iter().enumerate() {
                src[s] = idx[p];
            }
            out.data[flat] = self.get(&src[..rank]);
        }
        Ok(out)
    }

    /// Contracts `vec` (contravariant components) into covariant `slot`.
    pub fn insert_vector(&self, slot: usize, vec: &[f64]) -> Result<Self> {
        self.check_slot(slot)?;
        if self.variance[slot] != Co {
            return Err(GeometryError::VarianceMismatch(slot, slot));
        }
        if vec.len() != self.dim {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim,
                actual: vec.len(),
            });
        }
        let mut variance = self.variance.clone();
        variance.remove(slot);
        let mut out = Self::zeros(self.dim, &variance)?;
        let mut src = [0; MAX_RANK];
        for flat in 0..out.data.len() {
            let idx = out.multi_index(flat);
            let mut acc = 0.0;
            for (m, &v) in vec.iter().enumerate() {
                if v == 0.0 {
                    continue;
                }
                src[..slot].copy_from_slice(&idx[..slot]);
                src[slot] = m;
                src[slot + 1..self.rank()].copy_from_slice(&idx[slot..self.rank() - 1]);
                acc += v * self.get(&src[..self.rank()]);
            }
            out.data[flat] = acc;
        }
        Ok(out)
    }

    /// Fully evaluates a covariant tensor on one vector per slot.
    pub fn evaluate(&self, vectors: &[&[f64]]) -> Result<f64> {
        if vectors.len() != self.rank() {
            return Err(GeometryError::ShapeMismatch(format!(
                "{} arguments for a rank-{} tensor",
                vectors.len(),
                self.rank()
            )));
        }
        let mut t = self.clone();
        for v in vectors.iter().rev() {
            t = t.insert_vector(t.rank() - 1, v)?;
        }
        Ok(t.as_scalar())
    }

    /// Lowers or raises `slot` with the metric so it ends up with `target` variance.
    pub fn with_slot_variance(&self, slot: usize, target: Variance, metric: &MetricTensor) -> Result<Self> {
        self.check_slot(slot)?;
        if metric.dim() != self.dim {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim,
                actual: metric.dim(),
            });
        }
        if self.variance[slot] == target {
            return Ok(self.clone());
        }
        let m = match target {
            Co => metric.g(),
            Contra => metric.inv(),
        };
        let mut variance = self.variance.clone();
        variance[slot] = target;
        let rank = self.rank();
        let mut src = [0; MAX_RANK];
        Self::from_fn(self.dim, &variance, |idx| {
            src[..rank].copy_from_slice(idx);
            (0..self.dim)
                .map(|l| {
                    src[slot] = l;
                    m.get(&[idx[slot], l]) * self.get(&src[..rank])
                })
                .sum()
        })
    }

    fn check_slot(&self, slot: usize) -> Result<()> {
        if slot >= self.rank() {
            return Err(GeometryError::SlotOutOfRange {
                slot,
                rank: self.rank(),
            });
        }
        Ok(())
    }

    /// Max |t_ij - t_ji| for a rank-2 tensor.
    pub fn asymmetry(&self) -> f64 {
        assert_eq!(self.rank(), 2, "asymmetry is defined for rank-2 tensors");
        let mut m: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..i {
                m = m.max((self.get(&[i, j]) - self.get(&[j, i])).abs());
            }
        }
        m
    }

    pub(crate) fn to_matrix(&self) -> DMatrix<f64> {
        assert_eq!(self.rank(), 2);
        DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }
}

impl Add for &DenseTensor {
    type Output = DenseTensor;

    /// Panics on shape mismatch; use [`DenseTensor::checked_add`] otherwise.
    fn add(self, rhs: Self) -> DenseTensor {
        self.checked_add(rhs).expect("tensor shapes must agree")
    }
}

impl Sub for &DenseTensor {
    type Output = DenseTensor;

    fn sub(self, rhs: Self) -> DenseTensor {
        self.checked_sub(rhs).expect("tensor shapes must agree")
    }
}

impl Mul<f64> for &DenseTensor {
    type Output = DenseTensor;

    fn mul(self, rhs: f64) -> DenseTensor {
        self.scaled(rhs)
    }
}

impl Neg for &DenseTensor {
    type Output = DenseTensor;

    fn neg(self) -> DenseTensor {
        self.scaled(-1.0)
    }
}

pub fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

pub fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, v| f64::max(m, v.abs()))
}

/// A Riemannian metric together with its cached inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricTensor {
    g: DenseTensor,
    g_inv: DenseTensor,
}

impl MetricTensor {
    pub fn new(g: DenseTensor) -> Result<Self> {
        let g_inv = invert_metric(&g)?;
        Ok(Self { g, g_inv })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new(DenseTensor::from_fn(dim, &[Co, Co], |i| delta(i[0], i[1]))?)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(DenseTensor::from_rows(rows, [Co, Co])?)
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn g(&self) -> &DenseTensor {
        &self.g
    }

    pub fn inv(&self) -> &DenseTensor {
        &self.g_inv
    }

    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += u[i] * self.g.get(&[i, j]) * v[j];
            }
        }
        acc
    }

    /// Covariant components `g_ij v^j`.
    pub fn lower(&self, v: &[f64]) -> Vec<f64> {
        mat_vec(&self.g, v)
    }

    /// Contravariant components `g^ij w_j`.
    pub fn raise(&self, w: &[f64]) -> Vec<f64> {
        mat_vec(&self.g_inv, w)
    }
}

fn mat_vec(m: &DenseTensor, v: &[f64]) -> Vec<f64> {
    let n = m.dim();
    (0..n).map(|i| (0..n).map(|j| m.get(&[i, j]) * v[j]).sum()).collect()
}

/// Inverse of a symmetric positive definite metric.
pub fn invert_metric(g: &DenseTensor) -> Result<DenseTensor> {
    check_dim(g.dim())?;
    if g.variance() != [Co, Co] {
        return Err(GeometryError::ShapeMismatch(format!(
            "metric must be a (0,2) tensor, got {:?}",
            g.variance()
        )));
    }
    let asym = g.asymmetry();
    if asym > DEFAULT_EPSILON * g.max_abs().max(1.0) {
        return Err(GeometryError::NotSymmetric(asym));
    }
    let m = g.to_matrix();
    let sym = (&m + m.transpose()) * 0.5;
    let chol = match sym.clone().cholesky() {
        Some(c) => c,
        None => {
            let min = sym.symmetric_eigenvalues().min();
            return Err(GeometryError::NotPositiveDefinite(min));
        }
    };
    let min = sym.symmetric_eigenvalues().min();
    if min <= DEFAULT_EPSILON * g.max_abs() {
        return Err(GeometryError::NotPositiveDefinite(min));
    }
    let inv = chol.inverse();
    let inv = (&inv + inv.transpose()) * 0.5;
    DenseTensor::from_fn(g.dim(), &[Contra, Contra], |i| inv[(i[0], i[1])])
}

/// Contracts `slot_a` with `slot_b`.
///
/// A covariant/contravariant pair is traced directly. Two covariant slots are
/// traced through `g_inv`, which must then be supplied.
pub fn trace_contract(
    t: &DenseTensor,
    slot_a: usize,
    slot_b: usize,
    g_inv: Option<&DenseTensor>,
) -> Result<DenseTensor> {
    let rank = t.rank();
    for s in [slot_a, slot_b] {
        if s >= rank {
            return Err(GeometryError::SlotOutOfRange { slot: s, rank });
        }
    }
    if slot_a == slot_b {
        return Err(GeometryError::ShapeMismatch(format!(
            "cannot contract slot {slot_a} with itself"
        )));
    }
    let (va, vb) = (t.variance()[slot_a], t.variance()[slot_b]);
    let weight: Box<dyn Fn(usize, usize) -> f64> = match (va, vb) {
        (Co, Co) => {
            let gi = g_inv.ok_or(GeometryError::VarianceMismatch(slot_a, slot_b))?;
            if gi.dim() != t.dim() || gi.variance() != [Contra, Contra] {
                return Err(GeometryError::ShapeMismatch(
                    "inverse metric must be a (2,0) tensor of matching dimension".into(),
                ));
            }
            Box::new(move |i, j| gi.get(&[i, j]))
        }
        (Co, Contra) | (Contra, Co) => Box::new(delta),
        (Contra, Contra) => return Err(GeometryError::VarianceMismatch(slot_a, slot_b)),
    };
    let kept: Vec<usize> = (0..rank).filter(|&s| s != slot_a && s != slot_b).collect();
    let variance: Vec<Variance> = kept.iter().map(|&s| t.variance()[s]).collect();
    let dim = t.dim();
    let mut src = [0; MAX_RANK];
    DenseTensor::from_fn(dim, &variance, |idx| {
        for (k, &s) in kept.iter().enumerate() {
            src[s] = idx[k];
        }
        let mut acc = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                let w = weight(i, j);
                if w == 0.0 {
                    continue;
                }
                src[slot_a] = i;
                src[slot_b] = j;
                acc += w * t.get(&src[..rank]);
            }
        }
        acc
    })
}

/// Relative closeness: `max|a - b| <= eps * max(1, max|a|, max|b|)`.
pub fn tensor_close(a: &DenseTensor, b: &DenseTensor, eps: f64) -> Result<bool> {
    let diff = a.max_abs_diff(b)?;
    Ok(diff <= eps * 1f64.max(a.max_abs()).max(b.max_abs()))
}

/// Relative deviation on the same scale used by [`tensor_close`].
pub fn relative_deviation(a: &DenseTensor, b: &DenseTensor) -> Result<f64> {
    let diff = a.max_abs_diff(b)?;
    Ok(diff / 1f64.max(a.max_abs()).max(b.max_abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn eye(dim: usize, s: f64) -> DenseTensor {
        DenseTensor::from_fn(dim, &[Co, Co], |i| s * delta(i[0], i[1])).unwrap()
    }

    #[test]
    fn rejects_bad_dimensions_and_ranks() {
        assert_eq!(DenseTensor::zeros(3, &[Co]), Err(GeometryError::BadDimension(3)));
        assert_eq!(DenseTensor::zeros(2, &[Co]), Err(GeometryError::BadDimension(2)));
        assert_eq!(DenseTensor::zeros(4, &[Co; 5]), Err(GeometryError::RankOverflow(5)));
        assert!(matches!(
            DenseTensor::from_vec(4, &[Co, Co], vec![0.0; 15]),
            Err(GeometryError::LengthMismatch {
                expected: 16,
                actual: 15
            })
        ));
        assert_eq!(DenseTensor::zeros(6, &[Co, Co, Co]).unwrap().len(), 216);
    }

    #[test]
    fn inverse_of_identity_and_scaled_identity() {
        let inv = invert_metric(&eye(4, 1.0)).unwrap();
        assert_eq!(inv.components(), eye(4, 1.0).components());
        let inv = invert_metric(&eye(4, 2.0)).unwrap();
        assert!(inv
            .components()
            .iter()
            .zip(eye(4, 0.5).components())
            .all(|(a, b)| (a - b).abs() < 1e-15));
    }

    #[test]
    fn inverse_error_paths() {
        let mut g = eye(4, 1.0);
        g.set(&[0, 1], 0.5);
        assert!(matches!(invert_metric(&g), Err(GeometryError::NotSymmetric(_))));
        let g = DenseTensor::from_fn(4, &[Co, Co], |i| {
            if i[0] == i[1] {
                if i[0] == 2 {
                    -1.0
                } else {
                    1.0
                }
            } else {
                0.0
            }
        })
        .unwrap();
        assert!(matches!(invert_metric(&g), Err(GeometryError::NotPositiveDefinite(_))));
        let g = DenseTensor::from_fn(4, &[Co, Co], |i| if i[0] == i[1] && i[0] != 3 { 1.0 } else { 0.0 }).unwrap();
        assert!(matches!(invert_metric(&g), Err(GeometryError::NotPositiveDefinite(_))));
        let g = DenseTensor::from_fn(4, &[Co, Contra], |i| delta(i[0], i[1])).unwrap();
        assert!(matches!(invert_metric(&g), Err(GeometryError::ShapeMismatch(_))));
    }

    #[test]
    fn traces() {
        let id = DenseTensor::identity_map(4).unwrap();
        assert_eq!(trace_contract(&id, 0, 1, None).unwrap().as_scalar(), 4.0);

        let g = MetricTensor::from_rows(&[
            vec![2.0, 0.3, 0.0, 0.1],
            vec![0.3, 1.5, 0.2, 0.0],
            vec![0.0, 0.2, 1.0, 0.4],
            vec![0.1, 0.0, 0.4, 3.0],
        ])
        .unwrap();
        let tr = trace_contract(g.g(), 0, 1, Some(g.inv())).unwrap().as_scalar();
        assert!((tr - 4.0).abs() < 1e-12);
    }

    #[test]
    fn trace_error_paths() {
        let t = DenseTensor::zeros(4, &[Co, Co, Co]).unwrap();
        assert!(matches!(
            trace_contract(&t, 0, 3, None),
            Err(GeometryError::SlotOutOfRange { slot: 3, rank: 3 })
        ));
        assert!(matches!(
            trace_contract(&t, 0, 1, None),
            Err(GeometryError::VarianceMismatch(0, 1))
        ));
        let t = DenseTensor::zeros(4, &[Contra, Contra]).unwrap();
        let gi = eye(4, 1.0);
        assert!(matches!(
            trace_contract(&t, 0, 1, Some(&gi)),
            Err(GeometryError::VarianceMismatch(0, 1))
        ));
    }

    #[test]
    fn closeness() {
        let t = eye(4, 3.0);
        assert!(tensor_close(&t, &t, 0.0).unwrap());
        let z = DenseTensor::zeros(4, &[Co, Co]).unwrap();
        let mut one = z.clone();
        one.set(&[1, 2], 1.0);
        assert!(!tensor_close(&z, &one, 1e-9).unwrap());
        let v = DenseTensor::zeros(4, &[Co]).unwrap();
        assert!(matches!(
            tensor_close(&z, &v, 1e-9),
            Err(GeometryError::ShapeMismatch(_))
        ));
    }

    #[test]
    fn permutation_and_evaluation() {
        let t = DenseTensor::from_fn(4, &[Co, Co, Co], |i| (i[0] * 16 + i[1] * 4 + i[2]) as f64).unwrap();
        let p = t.permuted(&[1, 0, 2]).unwrap();
        assert_eq!(p.get(&[1, 2, 3]), t.get(&[2, 1, 3]));
        let p = t.permuted(&[2, 0, 1]).unwrap();
        // result(x0,x1,x2) = t(x2,x0,x1)
        assert_eq!(p.get(&[1, 2, 3]), t.get(&[3, 1, 2]));
        assert!(t.permuted(&[0, 0, 1]).is_err());

        let e = |k: usize| -> Vec<f64> { (0..4).map(|i| delta(i, k)).collect() };
        let val = t.evaluate(&[&e(1), &e(2), &e(3)]).unwrap();
        assert_eq!(val, t.get(&[1, 2, 3]));
    }

    fn spd_metric() -> impl Strategy<Value = DenseTensor> {
        proptest::collection::vec(-1.0f64..1.0, 16).prop_map(|a| {
            // A Aᵀ + I is symmetric positive definite.
            DenseTensor::from_fn(4, &[Co, Co], |i| {
                (0..4).map(|k| a[i[0] * 4 + k] * a[i[1] * 4 + k]).sum::<f64>() + delta(i[0], i[1])
            })
            .unwrap()
        })
    }

    fn rank3() -> impl Strategy<Value = DenseTensor> {
        proptest::collection::vec(-5.0f64..5.0, 64).prop_map(|d| DenseTensor::from_vec(4, &[Co, Co, Co], d).unwrap())
    }

    proptest! {
        #[test]
        fn double_inverse_reproduces_metric(g in spd_metric()) {
            let inv = invert_metric(&g).unwrap();
            let as_co = DenseTensor::from_vec(4, &[Co, Co], inv.components().to_vec()).unwrap();
            let back = invert_metric(&as_co).unwrap();
            let back = DenseTensor::from_vec(4, &[Co, Co], back.components().to_vec()).unwrap();
            prop_assert!(tensor_close(&g, &back, 1e-9).unwrap());
        }

        #[test]
        fn inverse_times_metric_is_identity(g in spd_metric()) {
            let inv = invert_metric(&g).unwrap();
            for i in 0..4 {
                for j in 0..4 {
                    let p: f64 = (0..4).map(|k| g.get(&[i, k]) * inv.get(&[k, j])).sum();
                    prop_assert!((p - delta(i, j)).abs() < 1e-9);
                }
            }
        }

        #[test]
        fn trace_is_linear(t1 in rank3(), t2 in rank3(), a in -3.0f64..3.0, b in -3.0f64..3.0, g in spd_metric()) {
            let gi = invert_metric(&g).unwrap();
            let combo = &(&t1 * a) + &(&t2 * b);
            let lhs = trace_contract(&combo, 0, 2, Some(&gi)).unwrap();
            let rhs = &(&trace_contract(&t1, 0, 2, Some(&gi)).unwrap() * a)
                + &(&trace_contract(&t2, 0, 2, Some(&gi)).unwrap() * b);
            prop_assert!(tensor_close(&lhs, &rhs, 1e-9).unwrap());
        }

        #[test]
        fn closeness_is_symmetric(t1 in rank3(), t2 in rank3(), eps in 0.0f64..2.0) {
            prop_assert_eq!(tensor_close(&t1, &t2, eps).unwrap(), tensor_close(&t2, &t1, eps).unwrap());
        }
    }
}
