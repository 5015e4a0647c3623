//! Natural connections of a W₁ manifold: the torsion family, the connection
//! `D` with torsion `T(x,y,z) = (1/2n){g(y,z)θ(Px) - g(x,z)θ(Py)}`, its
//! curvature and the relations tying it to the Levi-Civita curvature.

use crate::error::{GeometryError, Result};
use crate::levi_civita::{
    class_flags, covariant_derivative, covariant_derivative_with, curvature_operator, curvature_symmetries,
    curvature_tensor, lee_form, levi_civita_coeffs, pi1_tensor, psi1_operator, ricci_and_scalar, structure_tensor_f,
    weyl_tensor, ConnectionCoeffs, LeeForm,
};
use crate::lie::LieFrameAlgebra;
use crate::structure::{FramePoint, ProductStructure};
use crate::tensor::{delta, DenseTensor, MetricTensor, Variance};

use Variance::{Co, Contra};

/// The two free parameters of the natural torsion family.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TorsionParams {
    pub lambda_p: f64,
    pub mu_p: f64,
}

impl TorsionParams {
    pub fn new(lambda_p: f64, mu_p: f64) -> Self {
        Self { lambda_p, mu_p }
    }

    /// Parameters of the canonical connection, `(0, -1/4n)`.
    pub fn canonical(half_dim: f64) -> Self {
        Self::new(0.0, -1.0 / (4.0 * half_dim))
    }
}

/// A connection `∇' = ∇ + Q` with its (0,3) difference tensor and torsion.
#[derive(Debug, Clone, PartialEq)]
pub struct NaturalConnection {
    pub coeffs: ConnectionCoeffs,
    pub q: DenseTensor,
    pub t: DenseTensor,
}

impl NaturalConnection {
    /// Max |∇'g| and max |∇'P|.
    pub fn naturality_defects(&self, inst: &impl FramePoint) -> (f64, f64) {
        let dg = covariant_derivative_with(&self.coeffs, inst.metric().g(), inst.metric_derivative())
            .expect("rank 3 result")
            .max_abs();
        let dp = covariant_derivative(&self.coeffs, inst.structure().tensor())
            .expect("rank 3 result")
            .max_abs();
        (dg, dp)
    }

    /// Max |Q(x,y,z) + Q(x,z,y)|.
    pub fn skew_defect(&self) -> f64 {
        let q = &self.q;
        (q + &q.permuted(&[0, 2, 1]).expect("rank 3")).max_abs()
    }

    /// Max |T(x,y,z) - Q(x,y,z) + Q(y,x,z)|.
    pub fn torsion_split_defect(&self) -> f64 {
        let q = &self.q;
        let swapped = q.permuted(&[1, 0, 2]).expect("rank 3");
        (&(&self.t - q) + &swapped).max_abs()
    }

    /// Max deviation between the stored torsion and the torsion recomputed
    /// from the coefficients.
    pub fn torsion_reconstruction_defect(&self, alg: &LieFrameAlgebra, metric: &MetricTensor) -> f64 {
        let recomputed = lower_torsion(&self.coeffs.torsion(alg), metric);
        (&recomputed - &self.t).max_abs()
    }
}

/// `T(x,y,z) = g(T(x,y),z)` from the `[k, i, j]` vector form.
pub fn lower_torsion(t: &DenseTensor, metric: &MetricTensor) -> DenseTensor {
    let n = t.dim();
    let g = metric.g();
    DenseTensor::from_fn(n, &[Co, Co, Co], |x| {
        (0..n).map(|k| t.get(&[k, x[0], x[1]]) * g.get(&[k, x[2]])).sum()
    })
    .expect("dimension already validated")
}

/// `[k, i, j]` form of a (0,3) torsion: `T(X_i, X_j) = Σ_k T^k_ij X_k`.
pub fn raise_torsion(t: &DenseTensor, metric: &MetricTensor) -> DenseTensor {
    let n = t.dim();
    let gi = metric.inv();
    DenseTensor::from_fn(n, &[Contra, Co, Co], |x| {
        (0..n).map(|l| gi.get(&[x[0], l]) * t.get(&[x[1], x[2], l])).sum()
    })
    .expect("dimension already validated")
}

fn g_p(metric: &MetricTensor, p: &ProductStructure, a: usize, b: usize) -> f64 {
    (0..metric.dim()).map(|k| metric.g().get(&[a, k]) * p.get(k, b)).sum()
}

/// Fails with `NotW1` when `inst` is outside the class, returning the residual.
pub fn require_w1(inst: &impl FramePoint, eps: f64) -> Result<()> {
    let flags = class_flags(inst, eps)?;
    if flags.is_w1 {
        Ok(())
    } else {
        Err(GeometryError::NotW1(flags.w1_residual))
    }
}

/// Torsion of a natural connection on a W₁ manifold, as a (0,3) tensor.
pub fn torsion_family(inst: &impl FramePoint, theta: &[f64], params: TorsionParams) -> DenseTensor {
    let n = inst.dim();
    let metric = inst.metric();
    let g = metric.g();
    let p = inst.structure();
    let tp = p.pull_back(theta);
    let two_n = 2.0 * inst.half_dim();
    DenseTensor::from_fn(n, &[Co, Co, Co], |i| {
        let (x, y, z) = (i[0], i[1], i[2]);
        let gyz = g.get(&[y, z]);
        let gxz = g.get(&[x, z]);
        let gypz = g_p(metric, p, y, z);
        let gxpz = g_p(metric, p, x, z);
        (gyz * tp[x] - gxz * tp[y]) / two_n
            + params.lambda_p * (gyz * theta[x] - gxz * theta[y] + gypz * tp[x] - gxpz * tp[y])
            + params.mu_p * (gypz * theta[x] - gxpz * theta[y] + gyz * tp[x] - gxz * tp[y])
    })
    .expect("dimension already validated")
}

/// As [`torsion_family`], refusing instances outside W₁.
pub fn torsion_family_checked(
    inst: &impl FramePoint,
    theta: &[f64],
    params: TorsionParams,
    eps: f64,
) -> Result<DenseTensor> {
    require_w1(inst, eps)?;
    Ok(torsion_family(inst, theta, params))
}

/// Recovers a metric connection from its torsion:
/// `Q(x,y,z) = ½{T(x,y,z) - T(y,z,x) + T(z,x,y)}`.
pub fn connection_from_torsion(inst: &impl FramePoint, t: &DenseTensor) -> Result<NaturalConnection> {
    let lc = levi_civita_coeffs(inst)?;
    let q = DenseTensor::from_fn(inst.dim(), &[Co, Co, Co], |i| {
        let (x, y, z) = (i[0], i[1], i[2]);
        0.5 * (t.get(&[x, y, z]) - t.get(&[y, z, x]) + t.get(&[z, x, y]))
    })?;
    let coeffs = lc.shifted_by_lowered(&q, inst.metric(), false);
    Ok(NaturalConnection {
        coeffs,
        q,
        t: t.clone(),
    })
}

/// `Q(x,y,z) = (1/2n){g(x,y)θ(Pz) - g(x,z)θ(Py)}`.
pub fn difference_tensor_d(inst: &impl FramePoint, theta: &[f64]) -> DenseTensor {
    let g = inst.metric().g();
    let tp = inst.structure().pull_back(theta);
    let two_n = 2.0 * inst.half_dim();
    DenseTensor::from_fn(inst.dim(), &[Co, Co, Co], |i| {
        let (x, y, z) = (i[0], i[1], i[2]);
        (g.get(&[x, y]) * tp[z] - g.get(&[x, z]) * tp[y]) / two_n
    })
    .expect("dimension already validated")
}

/// `T(x,y,z) = (1/2n){g(y,z)θ(Px) - g(x,z)θ(Py)}`.
pub fn torsion_of_d(inst: &impl FramePoint, theta: &[f64]) -> DenseTensor {
    torsion_family(inst, theta, TorsionParams::default())
}

/// `T(x,y) = (1/2n){θ(Px)y - θ(Py)x}` indexed `[k, i, j]`.
pub fn torsion_of_d_vector(inst: &impl FramePoint, theta: &[f64]) -> DenseTensor {
    let tp = inst.structure().pull_back(theta);
    let two_n = 2.0 * inst.half_dim();
    DenseTensor::from_fn(inst.dim(), &[Contra, Co, Co], |x| {
        let (k, i, j) = (x[0], x[1], x[2]);
        (tp[i] * delta(k, j) - tp[j] * delta(k, i)) / two_n
    })
    .expect("dimension already validated")
}

/// The connection `D` built from the Lee form without a W₁ check.
pub fn connection_d_unchecked(inst: &impl FramePoint) -> Result<(NaturalConnection, LeeForm)> {
    let lc = levi_civita_coeffs(inst)?;
    let lee = lee_form(inst, &structure_tensor_f(inst, &lc));
    let q = difference_tensor_d(inst, lee.theta());
    let t = torsion_of_d(inst, lee.theta());
    let coeffs = lc.shifted_by_lowered(&q, inst.metric(), false);
    Ok((NaturalConnection { coeffs, q, t }, lee))
}

/// The connection `D_x y = ∇_x y + (1/2n){g(x,y)PΩ - θ(Py)x}`.
pub fn connection_d(inst: &impl FramePoint, eps: f64) -> Result<(NaturalConnection, LeeForm)> {
    require_w1(inst, eps)?;
    connection_d_unchecked(inst)
}

/// Max |(D_xθ)y - (∇_xθ)y + (1/2n){g(x,y)θ(PΩ) - θ(Py)θ(x)}|.
pub fn lee_derivative_relation(inst: &impl FramePoint, d: &NaturalConnection, lee: &LeeForm) -> Result<f64> {
    let lc = levi_civita_coeffs(inst)?;
    let d_theta = covariant_derivative(&d.coeffs, &lee.theta)?;
    let lc_theta = covariant_derivative(&lc, &lee.theta)?;
    let model = lee_model(inst, lee);
    let diff = &(&d_theta - &lc_theta) + &model;
    Ok(diff.max_abs())
}

/// `(1/2n){g(x,y)θ(PΩ) - θ(Py)θ(x)}` as a (0,2) tensor.
fn lee_model(inst: &impl FramePoint, lee: &LeeForm) -> DenseTensor {
    let g = inst.metric().g();
    let th = lee.theta();
    let tp = inst.structure().pull_back(th);
    let th_p_omega: f64 = tp.iter().zip(lee.omega()).map(|(a, b)| a * b).sum();
    let two_n = 2.0 * inst.half_dim();
    DenseTensor::from_fn(inst.dim(), &[Co, Co], |i| {
        (g.get(&[i[0], i[1]]) * th_p_omega - tp[i[1]] * th[i[0]]) / two_n
    })
    .expect("dimension already validated")
}

/// Defects of the torsion identities of `D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorsionIdentities {
    /// Max |Σ_cyc T(x,y,z)|.
    pub cyclic: f64,
    /// Max |Σ_cyc T(Px,Py,z)|.
    pub cyclic_p: f64,
    /// Max |θ(P T(x,y))|.
    pub lee_annihilates: f64,
    /// Max |Σ_cyc T(T(x,y),z)|.
    pub iterated_cyclic: f64,
    /// Max |Q(x,y,z) - T(z,y,x)|.
    pub q_transpose: f64,
}

impl TorsionIdentities {
    pub fn max(&self) -> f64 {
        self.cyclic
            .max(self.cyclic_p)
            .max(self.lee_annihilates)
            .max(self.iterated_cyclic)
            .max(self.q_transpose)
    }
}

pub fn torsion_identities(inst: &impl FramePoint, d: &NaturalConnection, theta: &[f64]) -> TorsionIdentities {
    let n = inst.dim();
    let p = inst.structure();
    let t = &d.t;
    let tv = raise_torsion(t, inst.metric());
    let tp = p.pull_back(theta);
    // T(Px, Py, z)
    let tpp = DenseTensor::from_fn(n, &[Co, Co, Co], |i| {
        let mut acc = 0.0;
        for a in 0..n {
            for b in 0..n {
                acc += p.get(a, i[0]) * p.get(b, i[1]) * t.get(&[a, b, i[2]]);
            }
        }
        acc
    })
    .expect("dimension already validated");
    // T(T(X_i, X_j), X_l) as [k, i, j, l]
    let tt = DenseTensor::from_fn(n, &[Contra, Co, Co, Co], |x| {
        (0..n)
            .map(|m| tv.get(&[m, x[1], x[2]]) * tv.get(&[x[0], m, x[3]]))
            .sum()
    })
    .expect("dimension already validated");
    let mut out = TorsionIdentities {
        cyclic: 0.0,
        cyclic_p: 0.0,
        lee_annihilates: 0.0,
        iterated_cyclic: 0.0,
        q_transpose: 0.0,
    };
    for x in 0..n {
        for y in 0..n {
            let v: f64 = (0..n).map(|k| tp[k] * tv.get(&[k, x, y])).sum();
            out.lee_annihilates = out.lee_annihilates.max(v.abs());
            for z in 0..n {
                let c = t.get(&[x, y, z]) + t.get(&[y, z, x]) + t.get(&[z, x, y]);
                out.cyclic = out.cyclic.max(c.abs());
                let c = tpp.get(&[x, y, z]) + tpp.get(&[y, z, x]) + tpp.get(&[z, x, y]);
                out.cyclic_p = out.cyclic_p.max(c.abs());
                out.q_transpose = out.q_transpose.max((d.q.get(&[x, y, z]) - t.get(&[z, y, x])).abs());
                for k in 0..n {
                    let c = tt.get(&[k, x, y, z]) + tt.get(&[k, y, z, x]) + tt.get(&[k, z, x, y]);
                    out.iterated_cyclic = out.iterated_cyclic.max(c.abs());
                }
            }
        }
    }
    out
}

/// Curvature `R'` of a natural connection, as a (0,4) tensor.
pub fn curvature_rprime(d: &NaturalConnection, alg: &LieFrameAlgebra, metric: &MetricTensor) -> DenseTensor {
    curvature_tensor(&d.coeffs, alg, metric)
}

/// `S(x,y) = (D_xθ)(Py) + (θ(Ω)/4n) g(x,y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct STensor {
    pub s: DenseTensor,
    pub trace_s: f64,
}

pub fn s_tensor(inst: &impl FramePoint, d: &NaturalConnection, lee: &LeeForm) -> Result<STensor> {
    let n = inst.dim();
    let g = inst.metric().g();
    let gi = inst.metric().inv();
    let p = inst.structure();
    let d_theta = covariant_derivative(&d.coeffs, &lee.theta)?;
    let c = lee.norm_sq() / (4.0 * inst.half_dim());
    let s = DenseTensor::from_fn(n, &[Co, Co], |i| {
        let (x, y) = (i[0], i[1]);
        (0..n).map(|a| d_theta.get(&[x, a]) * p.get(a, y)).sum::<f64>() + c * g.get(&[x, y])
    })?;
    let mut trace_s = 0.0;
    for i in 0..n {
        for j in 0..n {
            trace_s += gi.get(&[i, j]) * s.get(&[i, j]);
        }
    }
    Ok(STensor { s, trace_s })
}

/// Max |R - R' + (1/2n)ψ₁(S)|.
pub fn verify_curvature_relation(
    r: &DenseTensor,
    r_prime: &DenseTensor,
    s: &STensor,
    metric: &MetricTensor,
    half_dim: f64,
) -> f64 {
    let psi = psi1_operator(metric, &s.s).tensor;
    (&(r - r_prime) + &(&psi * (1.0 / (2.0 * half_dim)))).max_abs()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicciScalarResiduals {
    pub ricci_residual: f64,
    pub scalar_residual: f64,
}

/// Residuals of `ρ = ρ' - (1/2n){g·tr S + 2(n-1)S}` and `τ = τ' - ((2n-1)/n) tr S`.
pub fn ricci_scalar_relation(
    rho: &DenseTensor,
    rho_prime: &DenseTensor,
    tau: f64,
    tau_prime: f64,
    s: &STensor,
    metric: &MetricTensor,
    half_dim: f64,
) -> RicciScalarResiduals {
    let n = half_dim;
    let correction = &(metric.g() * s.trace_s) + &(&s.s * (2.0 * (n - 1.0)));
    let ricci = &(rho - rho_prime) + &(&correction * (1.0 / (2.0 * n)));
    RicciScalarResiduals {
        ricci_residual: ricci.max_abs(),
        scalar_residual: (tau - tau_prime + (2.0 * n - 1.0) / n * s.trace_s).abs(),
    }
}

/// Defects of the Riemannian P-tensor identities of a (0,4) tensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PTensorReport {
    pub skew12: f64,
    pub skew34: f64,
    pub bianchi: f64,
    pub p_invariance: f64,
    pub verdict: bool,
}

pub fn is_riemannian_p_tensor(l: &DenseTensor, p: &ProductStructure, eps: f64) -> PTensorReport {
    let n = l.dim();
    let sym = curvature_symmetries(l);
    let mut p_invariance: f64 = 0.0;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for w in 0..n {
                    let mut pp = 0.0;
                    for a in 0..n {
                        for b in 0..n {
                            pp += p.get(a, z) * p.get(b, w) * l.get(&[x, y, a, b]);
                        }
                    }
                    p_invariance = p_invariance.max((pp - l.get(&[x, y, z, w])).abs());
                }
            }
        }
    }
    let tol = eps * l.max_abs().max(1.0);
    PTensorReport {
        skew12: sym.skew12,
        skew34: sym.skew34,
        bianchi: sym.bianchi,
        p_invariance,
        verdict: sym.skew12.max(sym.skew34).max(sym.bianchi).max(p_invariance) <= tol,
    }
}

/// Whether `R'` is a Riemannian P-tensor, observed from both sides of the
/// criterion `(D_yθ)(Pz) = (D_zθ)(Py)` and its Levi-Civita form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PCurvatureReport {
    /// Max |(D_yθ)(Pz) - (D_zθ)(Py)|.
    pub dtheta_symmetry_defect: f64,
    /// First-Bianchi defect of `R'`.
    pub bianchi_defect_rprime: f64,
    /// Max |(∇_xθ)(Py) - (∇_yθ)(Px)|: closedness of `θ∘P`.
    pub closedness_defect: f64,
    pub equivalence_holds: bool,
    pub closedness_agrees: bool,
}

pub fn p_curvature_criterion(
    inst: &impl FramePoint,
    d: &NaturalConnection,
    lee: &LeeForm,
    eps: f64,
) -> Result<PCurvatureReport> {
    let lc = levi_civita_coeffs(inst)?;
    let p = inst.structure();
    let rp = curvature_rprime(d, inst.algebra(), inst.metric());
    let sym_defect = |dt: &DenseTensor| -> f64 {
        let n = dt.dim();
        let a = DenseTensor::from_fn(n, &[Co, Co], |i| {
            (0..n).map(|k| dt.get(&[i[0], k]) * p.get(k, i[1])).sum()
        })
        .expect("dimension already validated");
        a.asymmetry()
    };
    let dtheta_symmetry_defect = sym_defect(&covariant_derivative(&d.coeffs, &lee.theta)?);
    let closedness_defect = sym_defect(&covariant_derivative(&lc, &lee.theta)?);
    let bianchi_defect_rprime = curvature_symmetries(&rp).bianchi;
    let scale = lee.norm_sq().max(1.0);
    let tol = eps * scale;
    let crit = dtheta_symmetry_defect <= tol;
    Ok(PCurvatureReport {
        dtheta_symmetry_defect,
        bianchi_defect_rprime,
        closedness_defect,
        equivalence_holds: crit == (bianchi_defect_rprime <= tol),
        closedness_agrees: crit == (closedness_defect <= tol),
    })
}

/// Parallelism of the torsion of `D`, observed three ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParallelTorsionReport {
    /// Max |(D_xT)(y,z)| on the vector-valued torsion.
    pub dt_defect: f64,
    /// Max |(D_xθ)y|.
    pub dtheta_defect: f64,
    /// Max |(∇_xθ)y - (1/2n){g(x,y)θ(PΩ) - θ(Py)θ(x)}|.
    pub cor52_defect: f64,
    pub verdict: bool,
    pub equivalence_holds: bool,
}

pub fn has_parallel_torsion(
    inst: &impl FramePoint,
    d: &NaturalConnection,
    lee: &LeeForm,
    eps: f64,
) -> Result<ParallelTorsionReport> {
    let lc = levi_civita_coeffs(inst)?;
    let tv = d.coeffs.torsion(inst.algebra());
    let dt_defect = covariant_derivative(&d.coeffs, &tv)?.max_abs();
    let dtheta_defect = covariant_derivative(&d.coeffs, &lee.theta)?.max_abs();
    let cor52 = &covariant_derivative(&lc, &lee.theta)? - &lee_model(inst, lee);
    let cor52_defect = cor52.max_abs();
    let tol = eps * lee.norm_sq().max(1.0);
    let verdict = dt_defect <= tol;
    Ok(ParallelTorsionReport {
        dt_defect,
        dtheta_defect,
        cor52_defect,
        verdict,
        equivalence_holds: verdict == (dtheta_defect <= tol) && verdict == (cor52_defect <= tol),
    })
}

/// Max |(∇_i R)^l_{jkm}| for a (1,3) operator indexed `[l, j, k, m]`.
pub fn curvature_operator_derivative_max(conn: &ConnectionCoeffs, op: &DenseTensor) -> f64 {
    let n = op.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for l in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for m in 0..n {
                        let mut acc = 0.0;
                        for a in 0..n {
                            acc += conn.get(l, i, a) * op.get(&[a, j, k, m])
                                - conn.get(a, i, j) * op.get(&[l, a, k, m])
                                - conn.get(a, i, k) * op.get(&[l, j, a, m])
                                - conn.get(a, i, m) * op.get(&[l, j, k, a]);
                        }
                        worst = worst.max(acc.abs());
                    }
                }
            }
        }
    }
    worst
}

/// Residuals of the flat, parallel-torsion consequences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatParallelResiduals {
    /// |R + (θ(Ω)/4n²)π₁|
    pub curvature: f64,
    /// |ρ + ((2n-1)/4n²)θ(Ω)g|
    pub ricci: f64,
    /// |τ + ((2n-1)/2n)θ(Ω)|
    pub scalar: f64,
    /// Max |DR|.
    pub dr: f64,
    /// `τ < 0`; `None` when θ vanishes.
    pub tau_negative: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatDReport {
    pub rprime_max: f64,
    pub is_flat: bool,
    /// Max |W| when `D` is flat.
    pub weyl_max: Option<f64>,
    pub torsion_parallel: bool,
    /// Max |R - R' + (θ(Ω)/4n²)π₁| when the torsion is parallel.
    pub parallel_curvature_residual: Option<f64>,
    /// Present only when `D` is flat with parallel torsion.
    pub flat_parallel: Option<FlatParallelResiduals>,
}

pub fn flat_d_report(inst: &impl FramePoint, d: &NaturalConnection, lee: &LeeForm, eps: f64) -> Result<FlatDReport> {
    let metric = inst.metric();
    let alg = inst.algebra();
    let n = inst.half_dim();
    let lc = levi_civita_coeffs(inst)?;
    let r_op = curvature_operator(&lc, alg);
    let r = curvature_tensor(&lc, alg, metric);
    let rp = curvature_rprime(d, alg, metric);
    let rs = ricci_and_scalar(&r, metric.inv())?;
    let rprime_max = rp.max_abs();
    let scale = r.max_abs().max(1.0);
    let is_flat = rprime_max <= eps * scale;
    let weyl_max = is_flat.then(|| weyl_tensor(&r, &rs.rho, rs.tau, metric).max_abs());
    let torsion_parallel = has_parallel_torsion(inst, d, lee, eps)?.verdict;
    let norm = lee.norm_sq();
    let pi = pi1_tensor(metric);
    let parallel_curvature_residual =
        torsion_parallel.then(|| (&(&r - &rp) + &(&pi * (norm / (4.0 * n * n)))).max_abs());
    let flat_parallel = (is_flat && torsion_parallel).then(|| FlatParallelResiduals {
        curvature: (&r + &(&pi * (norm / (4.0 * n * n)))).max_abs(),
        ricci: (&rs.rho + &(metric.g() * ((2.0 * n - 1.0) / (4.0 * n * n) * norm))).max_abs(),
        scalar: (rs.tau + (2.0 * n - 1.0) / (2.0 * n) * norm).abs(),
        dr: curvature_operator_derivative_max(&d.coeffs, &r_op),
        tau_negative: (norm > eps).then_some(rs.tau < 0.0),
    });
    Ok(FlatDReport {
        rprime_max,
        is_flat,
        weyl_max,
        torsion_parallel,
        parallel_curvature_residual,
        flat_parallel,
    })
}

/// Max |W - W'| with each Weyl tensor built from its own curvature data.
#[allow(clippy::too_many_arguments)]
pub fn weyl_invariance_check(
    r: &DenseTensor,
    rho: &DenseTensor,
    tau: f64,
    r_prime: &DenseTensor,
    rho_prime: &DenseTensor,
    tau_prime: f64,
    metric: &MetricTensor,
) -> f64 {
    let w = weyl_tensor(r, rho, tau, metric);
    let wp = weyl_tensor(r_prime, rho_prime, tau_prime, metric);
    (&w - &wp).max_abs()
}

/// Every quantity of the `∇ → D` comparison for one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct DAnalysis {
    pub lc: ConnectionCoeffs,
    pub d: NaturalConnection,
    pub lee: LeeForm,
    pub r: DenseTensor,
    pub r_prime: DenseTensor,
    pub rho: DenseTensor,
    pub tau: f64,
    pub rho_prime: DenseTensor,
    pub tau_prime: f64,
    pub s: STensor,
}

impl DAnalysis {
    pub fn new(inst: &impl FramePoint) -> Result<Self> {
        let metric = inst.metric();
        let alg = inst.algebra();
        let lc = levi_civita_coeffs(inst)?;
        let (d, lee) = connection_d_unchecked(inst)?;
        let r = curvature_tensor(&lc, alg, metric);
        let r_prime = curvature_rprime(&d, alg, metric);
        let rs = ricci_and_scalar(&r, metric.inv())?;
        let rsp = ricci_and_scalar(&r_prime, metric.inv())?;
        let s = s_tensor(inst, &d, &lee)?;
        Ok(Self {
            lc,
            d,
            lee,
            r,
            r_prime,
            rho: rs.rho,
            tau: rs.tau,
            rho_prime: rsp.rho,
            tau_prime: rsp.tau,
            s,
        })
    }

    pub fn curvature_relation(&self, metric: &MetricTensor) -> f64 {
        let n = (metric.dim() / 2) as f64;
        verify_curvature_relation(&self.r, &self.r_prime, &self.s, metric, n)
    }

    pub fn ricci_scalar(&self, metric: &MetricTensor) -> RicciScalarResiduals {
        let n = (metric.dim() / 2) as f64;
        ricci_scalar_relation(&self.rho, &self.rho_prime, self.tau, self.tau_prime, &self.s, metric, n)
    }

    pub fn weyl_invariance(&self, metric: &MetricTensor) -> f64 {
        weyl_invariance_check(
            &self.r,
            &self.rho,
            self.tau,
            &self.r_prime,
            &self.rho_prime,
            self.tau_prime,
            metric,
        )
    }
}
