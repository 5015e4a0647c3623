//! Levi-Civita calculus in a frame: Koszul coefficients, the tensor
//! `F = g((∇P)·,·)`, the Lee form, curvature and its traces, and the
//! curvature-like operators `π₁`, `ψ₁` and the Weyl tensor.
//!
//! Everything is evaluated at a single point of a frame whose brackets have
//! constant structure constants. Directional derivatives of frame-constant
//! components vanish, so covariant derivatives reduce to connection
//! corrections; the only derivatives carried explicitly are the metric
//! derivatives exposed by [`FramePoint::metric_derivative`].

use crate::error::{GeometryError, Result};
use crate::lie::LieFrameAlgebra;
use crate::structure::{nijenhuis_tensor, FramePoint};
use crate::tensor::{trace_contract, DenseTensor, MetricTensor, Variance, MAX_RANK};

use Variance::{Co, Contra};

/// Connection coefficients `∇_{X_i} X_j = Σ_k Γ^k_ij X_k`, indexed `[k, i, j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionCoeffs {
    gamma: DenseTensor,
    torsion_free: bool,
}

impl ConnectionCoeffs {
    pub fn new(gamma: DenseTensor, torsion_free: bool) -> Result<Self> {
        if gamma.variance() != [Contra, Co, Co] {
            return Err(GeometryError::ShapeMismatch(format!(
                "connection coefficients must be a (1,2) array, got {:?}",
                gamma.variance()
            )));
        }
        Ok(Self { gamma, torsion_free })
    }

    pub fn gamma(&self) -> &DenseTensor {
        &self.gamma
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion_free
    }

    pub fn dim(&self) -> usize {
        self.gamma.dim()
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.gamma.get(&[k, i, j])
    }

    /// Frame components of `∇_{X_i} X_j`.
    pub fn derivative_of(&self, i: usize, j: usize) -> Vec<f64> {
        (0..self.dim()).map(|k| self.get(k, i, j)).collect()
    }

    /// `g(∇_{X_i} X_j, X_k)` indexed `[i, j, k]`.
    pub fn lowered(&self, metric: &MetricTensor) -> DenseTensor {
        let n = self.dim();
        let g = metric.g();
        DenseTensor::from_fn(n, &[Co, Co, Co], |x| {
            (0..n).map(|l| self.get(l, x[0], x[1]) * g.get(&[l, x[2]])).sum()
        })
        .expect("dimension already validated")
    }

    /// Torsion `T(X_i, X_j) = ∇_i X_j - ∇_j X_i - [X_i, X_j]` indexed `[k, i, j]`.
    pub fn torsion(&self, alg: &LieFrameAlgebra) -> DenseTensor {
        DenseTensor::from_fn(self.dim(), &[Contra, Co, Co], |x| {
            let (k, i, j) = (x[0], x[1], x[2]);
            self.get(k, i, j) - self.get(k, j, i) - alg.constant(k, i, j)
        })
        .expect("dimension already validated")
    }

    pub fn torsion_defect(&self, alg: &LieFrameAlgebra) -> f64 {
        self.torsion(alg).max_abs()
    }

    /// Max |∇g| including the metric derivatives of `inst`.
    pub fn compatibility_defect(&self, inst: &impl FramePoint) -> f64 {
        covariant_derivative_with(self, inst.metric().g(), inst.metric_derivative())
            .expect("rank 3 result")
            .max_abs()
    }

    /// Coefficients `Γ + Σ_l g^{kl} Q_{ijl}` for a (0,3) difference tensor `Q`.
    pub fn shifted_by_lowered(&self, q: &DenseTensor, metric: &MetricTensor, torsion_free: bool) -> Self {
        let n = self.dim();
        let gi = metric.inv();
        let gamma = DenseTensor::from_fn(n, &[Contra, Co, Co], |x| {
            let (k, i, j) = (x[0], x[1], x[2]);
            self.get(k, i, j) + (0..n).map(|l| gi.get(&[k, l]) * q.get(&[i, j, l])).sum::<f64>()
        })
        .expect("dimension already validated");
        Self { gamma, torsion_free }
    }
}

/// Levi-Civita coefficients from the Koszul formula in a non-holonomic frame:
///
/// `2g(∇_i X_j, X_k) = X_i g_jk + X_j g_ik - X_k g_ij
///                     + g([X_i,X_j],X_k) - g([X_j,X_k],X_i) + g([X_k,X_i],X_j)`.
pub fn levi_civita_coeffs(inst: &impl FramePoint) -> Result<ConnectionCoeffs> {
    let n = inst.dim();
    let alg = inst.algebra();
    let g = inst.metric().g();
    let gi = inst.metric().inv();
    let dg = inst.metric_derivative();
    if !gi.components().iter().all(|v| v.is_finite()) {
        return Err(GeometryError::SingularMetric);
    }
    // g([X_a, X_b], X_c)
    let bracket_g =
        |a: usize, b: usize, c: usize| -> f64 { (0..n).map(|m| alg.constant(m, a, b) * g.get(&[m, c])).sum() };
    let lowered = DenseTensor::from_fn(n, &[Co, Co, Co], |x| {
        let (i, j, k) = (x[0], x[1], x[2]);
        let mut v = bracket_g(i, j, k) - bracket_g(j, k, i) + bracket_g(k, i, j);
        if let Some(dg) = dg {
            v += dg.get(&[i, j, k]) + dg.get(&[j, i, k]) - dg.get(&[k, i, j]);
        }
        0.5 * v
    })?;
    let gamma = DenseTensor::from_fn(n, &[Contra, Co, Co], |x| {
        let (l, i, j) = (x[0], x[1], x[2]);
        (0..n).map(|k| gi.get(&[l, k]) * lowered.get(&[i, j, k])).sum()
    })?;
    ConnectionCoeffs::new(gamma, true)
}

/// Covariant derivative of a tensor with frame-constant components.
///
/// The derivative slot is prepended: `result[i, a, b, ..] = (∇_{X_i} t)[a, b, ..]`.
pub fn covariant_derivative(conn: &ConnectionCoeffs, t: &DenseTensor) -> Result<DenseTensor> {
    covariant_derivative_with(conn, t, None)
}

/// As [`covariant_derivative`], adding the frame derivatives
/// `frame_derivative[i, a, ..] = X_i(t[a, ..])` of the components.
pub fn covariant_derivative_with(
    conn: &ConnectionCoeffs,
    t: &DenseTensor,
    frame_derivative: Option<&DenseTensor>,
) -> Result<DenseTensor> {
    let rank = t.rank();
    if rank + 1 > MAX_RANK {
        return Err(GeometryError::RankOverflow(rank + 1));
    }
    if conn.dim() != t.dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: conn.dim(),
            actual: t.dim(),
        });
    }
    let n = t.dim();
    let mut variance = vec![Co];
    variance.extend_from_slice(t.variance());
    if let Some(d) = frame_derivative {
        if d.dim() != n || d.variance() != variance.as_slice() {
            return Err(GeometryError::ShapeMismatch(
                "frame derivative must match the covariant derivative's shape".into(),
            ));
        }
    }
    let mut src = [0; MAX_RANK];
    DenseTensor::from_fn(n, &variance, |x| {
        let i = x[0];
        let idx = &x[1..];
        let mut acc = frame_derivative.map_or(0.0, |d| d.get(x));
        for (slot, var) in t.variance().iter().enumerate() {
            src[..rank].copy_from_slice(idx);
            for m in 0..n {
                src[slot] = m;
                let c = match var {
                    // -t(.., ∇_i X_a, ..)
                    Co => -conn.get(m, i, idx[slot]),
                    // +Γ^a_{im} t(.., m, ..)
                    Contra => conn.get(idx[slot], i, m),
                };
                if c != 0.0 {
                    acc += c * t.get(&src[..rank]);
                }
            }
        }
        acc
    })
}

/// `F(x, y, z) = g((∇_x P) y, z)` indexed `[x, y, z]`.
pub fn structure_tensor_f(inst: &impl FramePoint, conn: &ConnectionCoeffs) -> DenseTensor {
    let n = inst.dim();
    let g = inst.metric().g();
    // [i, l, j] = (∇_i P)^l_j
    let dp = covariant_derivative(conn, inst.structure().tensor()).expect("rank 3 result");
    DenseTensor::from_fn(n, &[Co, Co, Co], |x| {
        (0..n).map(|l| dp.get(&[x[0], l, x[1]]) * g.get(&[l, x[2]])).sum()
    })
    .expect("dimension already validated")
}

/// The Lee form `θ(x) = g^{ij} F(e_i, e_j, x)` and its dual vector `Ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct LeeForm {
    pub theta: DenseTensor,
    pub omega: DenseTensor,
}

impl LeeForm {
    pub fn from_theta(theta: Vec<f64>, metric: &MetricTensor) -> Self {
        let omega = metric.raise(&theta);
        Self {
            theta: DenseTensor::covector(&theta).expect("dimension already validated"),
            omega: DenseTensor::vector(&omega).expect("dimension already validated"),
        }
    }

    pub fn theta(&self) -> &[f64] {
        self.theta.components()
    }

    pub fn omega(&self) -> &[f64] {
        self.omega.components()
    }

    /// `θ(Ω) = g(Ω, Ω)`.
    pub fn norm_sq(&self) -> f64 {
        self.theta().iter().zip(self.omega()).map(|(a, b)| a * b).sum()
    }
}

pub fn lee_form(inst: &impl FramePoint, f: &DenseTensor) -> LeeForm {
    let theta = trace_contract(f, 0, 1, Some(inst.metric().inv()))
        .expect("F is a (0,3) tensor")
        .components()
        .to_vec();
    LeeForm::from_theta(theta, inst.metric())
}

/// `F - (1/2n){g(x,y)θ(z) + g(x,z)θ(y) - g(x,Py)θ(Pz) - g(x,Pz)θ(Py)}`.
pub fn w1_residual_tensor(inst: &impl FramePoint, f: &DenseTensor, lee: &LeeForm) -> DenseTensor {
    let n = inst.dim();
    let g = inst.metric().g();
    let p = inst.structure();
    let th = lee.theta();
    let th_p = p.pull_back(th);
    let gp = |a: usize, b: usize| -> f64 { (0..n).map(|k| g.get(&[a, k]) * p.get(k, b)).sum() };
    let two_n = 2.0 * inst.half_dim();
    DenseTensor::from_fn(n, &[Co, Co, Co], |i| {
        let (x, y, z) = (i[0], i[1], i[2]);
        let model = g.get(&[x, y]) * th[z] + g.get(&[x, z]) * th[y] - gp(x, y) * th_p[z] - gp(x, z) * th_p[y];
        f.get(i) - model / two_n
    })
    .expect("dimension already validated")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassFlags {
    pub is_w0: bool,
    pub is_w1: bool,
    pub is_product: bool,
    pub f_max: f64,
    pub w1_residual: f64,
    pub nijenhuis_max: f64,
}

/// Membership in W₀ (F = 0), W₁ (the g⊗θ form of F) and W₁⊕W₂ (N = 0).
pub fn class_flags(inst: &impl FramePoint, eps: f64) -> Result<ClassFlags> {
    let conn = levi_civita_coeffs(inst)?;
    let f = structure_tensor_f(inst, &conn);
    let lee = lee_form(inst, &f);
    let f_max = f.max_abs();
    let w1_residual = w1_residual_tensor(inst, &f, &lee).max_abs();
    let nijenhuis_max = nijenhuis_tensor(inst).max_abs();
    let c_scale = inst.algebra().structure_constants().max_abs().max(1.0);
    Ok(ClassFlags {
        is_w0: f_max <= eps,
        is_w1: w1_residual <= eps * f_max.max(1.0),
        is_product: nijenhuis_max <= eps * c_scale,
        f_max,
        w1_residual,
        nijenhuis_max,
    })
}

/// `R(X_i,X_j)X_k = Σ_l R^l_ijk X_l`, indexed `[l, i, j, k]`:
/// `R^l_ijk = Σ_m (Γ^m_jk Γ^l_im - Γ^m_ik Γ^l_jm - c^m_ij Γ^l_mk)`.
pub fn curvature_operator(conn: &ConnectionCoeffs, alg: &LieFrameAlgebra) -> DenseTensor {
    let n = conn.dim();
    DenseTensor::from_fn(n, &[Contra, Co, Co, Co], |x| {
        let (l, i, j, k) = (x[0], x[1], x[2], x[3]);
        (0..n)
            .map(|m| {
                conn.get(m, j, k) * conn.get(l, i, m)
                    - conn.get(m, i, k) * conn.get(l, j, m)
                    - alg.constant(m, i, j) * conn.get(l, m, k)
            })
            .sum()
    })
    .expect("dimension already validated")
}

/// `R(x, y, z, w) = g(R(x, y) z, w)` indexed `[x, y, z, w]`.
pub fn curvature_tensor(conn: &ConnectionCoeffs, alg: &LieFrameAlgebra, metric: &MetricTensor) -> DenseTensor {
    lower_curvature(&curvature_operator(conn, alg), metric)
}

/// Lowers the `[l, i, j, k]` operator to `[i, j, k, l]`.
pub fn lower_curvature(op: &DenseTensor, metric: &MetricTensor) -> DenseTensor {
    let n = op.dim();
    let g = metric.g();
    DenseTensor::from_fn(n, &[Co, Co, Co, Co], |x| {
        (0..n).map(|m| op.get(&[m, x[0], x[1], x[2]]) * g.get(&[m, x[3]])).sum()
    })
    .expect("dimension already validated")
}

/// Raises the last slot of a (0,4) tensor; this is the variance in which
/// conformal comparisons are made.
pub fn raise_last(t: &DenseTensor, metric: &MetricTensor) -> DenseTensor {
    t.with_slot_variance(3, Contra, metric).expect("rank-4 tensor")
}

#[derive(Debug, Clone, PartialEq)]
pub struct RicciScalar {
    pub rho: DenseTensor,
    pub tau: f64,
}

/// `ρ(y,z) = g^{ij} R(e_i,y,z,e_j)` and `τ = g^{ij} ρ(e_i,e_j)`.
pub fn ricci_and_scalar(r: &DenseTensor, g_inv: &DenseTensor) -> Result<RicciScalar> {
    let rho = trace_contract(r, 0, 3, Some(g_inv))?;
    let tau = trace_contract(&rho, 0, 1, Some(g_inv))?.as_scalar();
    Ok(RicciScalar { rho, tau })
}

/// `k(u, v) = R(u, v, v, u) / (g(u,u) g(v,v) - g(u,v)²)`.
pub fn sectional_curvature(r: &DenseTensor, metric: &MetricTensor, u: &[f64], v: &[f64]) -> Result<f64> {
    let n = metric.dim();
    for w in [u, v] {
        if w.len() != n {
            return Err(GeometryError::DimensionMismatch {
                expected: n,
                actual: w.len(),
            });
        }
    }
    let denom = metric.inner(u, u) * metric.inner(v, v) - metric.inner(u, v).powi(2);
    if denom <= 1e-12 * metric.inner(u, u) * metric.inner(v, v) || denom == 0.0 {
        return Err(GeometryError::DegeneratePlane(denom));
    }
    Ok(r.evaluate(&[u, v, v, u])? / denom)
}

/// Sectional curvatures of the basis planes `(X_i, X_j)`, `i < j`.
pub fn basis_sectional_curvatures(r: &DenseTensor, metric: &MetricTensor) -> Vec<((usize, usize), f64)> {
    let n = metric.dim();
    let e = |i: usize| crate::lie::unit(n, i);
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let k = sectional_curvature(r, metric, &e(i), &e(j)).expect("basis planes are non-degenerate");
            out.push(((i, j), k));
        }
    }
    out
}

/// `π₁(x,y,z,w) = g(y,z)g(x,w) - g(x,z)g(y,w)`.
pub fn pi1_tensor(metric: &MetricTensor) -> DenseTensor {
    let g = metric.g();
    DenseTensor::from_fn(metric.dim(), &[Co, Co, Co, Co], |i| {
        let (x, y, z, w) = (i[0], i[1], i[2], i[3]);
        g.get(&[y, z]) * g.get(&[x, w]) - g.get(&[x, z]) * g.get(&[y, w])
    })
    .expect("dimension already validated")
}

/// `ψ₁(S)` together with the asymmetry of its argument.
///
/// `ψ₁(S)` only has the curvature symmetries when `S` is symmetric; a
/// nonzero `s_asymmetry` flags that the result should not be read as a
/// curvature-like tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct Psi1 {
    pub tensor: DenseTensor,
    pub s_asymmetry: f64,
}

/// `ψ₁(S)(x,y,z,w) = g(y,z)S(x,w) - g(x,z)S(y,w) + S(y,z)g(x,w) - S(x,z)g(y,w)`.
pub fn psi1_operator(metric: &MetricTensor, s: &DenseTensor) -> Psi1 {
    let g = metric.g();
    let tensor = DenseTensor::from_fn(metric.dim(), &[Co, Co, Co, Co], |i| {
        let (x, y, z, w) = (i[0], i[1], i[2], i[3]);
        g.get(&[y, z]) * s.get(&[x, w]) - g.get(&[x, z]) * s.get(&[y, w]) + s.get(&[y, z]) * g.get(&[x, w])
            - s.get(&[x, z]) * g.get(&[y, w])
    })
    .expect("dimension already validated");
    Psi1 {
        tensor,
        s_asymmetry: s.asymmetry(),
    }
}

/// `W = R - (1/2(n-1)) {ψ₁(ρ) - (τ/(2n-1)) π₁}` with `dim = 2n`.
pub fn weyl_tensor(r: &DenseTensor, rho: &DenseTensor, tau: f64, metric: &MetricTensor) -> DenseTensor {
    let n = (metric.dim() / 2) as f64;
    let psi = psi1_operator(metric, rho).tensor;
    let pi = pi1_tensor(metric);
    let correction = &psi - &(&pi * (tau / (2.0 * n - 1.0)));
    r - &(&correction * (1.0 / (2.0 * (n - 1.0))))
}

/// Defects of the algebraic curvature identities of a (0,4) tensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureSymmetries {
    pub skew12: f64,
    pub skew34: f64,
    pub pair: f64,
    pub bianchi: f64,
}

impl CurvatureSymmetries {
    pub fn max(&self) -> f64 {
        self.skew12.max(self.skew34).max(self.pair).max(self.bianchi)
    }
}

pub fn curvature_symmetries(l: &DenseTensor) -> CurvatureSymmetries {
    let n = l.dim();
    let mut s = CurvatureSymmetries {
        skew12: 0.0,
        skew34: 0.0,
        pair: 0.0,
        bianchi: 0.0,
    };
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for w in 0..n {
                    let v = l.get(&[x, y, z, w]);
                    s.skew12 = s.skew12.max((v + l.get(&[y, x, z, w])).abs());
                    s.skew34 = s.skew34.max((v + l.get(&[x, y, w, z])).abs());
                    s.pair = s.pair.max((v - l.get(&[z, w, x, y])).abs());
                    s.bianchi = s.bianchi.max((v + l.get(&[y, z, x, w]) + l.get(&[z, x, y, w])).abs());
                }
            }
        }
    }
    s
}

/// Max |g^{ij} W(e_i, y, z, e_j)| over all (y, z): the Weyl tensor's trace.
pub fn ricci_trace_defect(w: &DenseTensor, metric: &MetricTensor) -> f64 {
    trace_contract(w, 0, 3, Some(metric.inv()))
        .expect("rank-4 tensor")
        .max_abs()
}
