//! Conformal change `ḡ = e^{2u} g` in the frame-constant model.
//!
//! `u` is represented by its differential `α = du`, whose frame components
//! are constant, and is normalized to vanish at the evaluation point. There
//! `ḡ = g` while the frame derivatives of `ḡ` are `X_i(ḡ_jk) = 2α_i g_jk`.
//! Closedness of `α` means it annihilates every bracket.

use crate::error::{GeometryError, Result};
use crate::levi_civita::{
    class_flags, curvature_operator, levi_civita_coeffs, raise_last, ricci_and_scalar, weyl_tensor, ClassFlags,
    ConnectionCoeffs, LeeForm,
};
use crate::lie::LieFrameAlgebra;
use crate::natural::{connection_d_unchecked, NaturalConnection};
use crate::structure::{FramePoint, ProductStructure, RpmInstance};
use crate::tensor::{delta, DenseTensor, MetricTensor, Variance};

use Variance::{Co, Contra};

/// A closed 1-form `α = du` with constant frame components.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalDeformation {
    alpha: DenseTensor,
}

impl ConformalDeformation {
    /// Fails with `NotClosed` unless `α([X_i, X_j]) = 0` for all `i, j`.
    pub fn new(alg: &LieFrameAlgebra, alpha: &[f64], eps: f64) -> Result<Self> {
        if alpha.len() != alg.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: alg.dim(),
                actual: alpha.len(),
            });
        }
        let defect = alg.closedness_defect(alpha);
        let scale = crate::tensor::max_abs(alpha).max(1.0) * alg.structure_constants().max_abs().max(1.0);
        if defect > eps * scale {
            return Err(GeometryError::NotClosed(defect));
        }
        Ok(Self {
            alpha: DenseTensor::covector(alpha)?,
        })
    }

    pub fn alpha(&self) -> &[f64] {
        self.alpha.components()
    }

    pub fn alpha_tensor(&self) -> &DenseTensor {
        &self.alpha
    }

    /// `u` vanishes at the evaluation point, so `e^{2u} = 1` there.
    pub fn basepoint_normalized(&self) -> bool {
        true
    }

    /// `L = grad u = g^{-1} α`.
    pub fn gradient(&self, metric: &MetricTensor) -> Vec<f64> {
        metric.raise(self.alpha())
    }

    /// The deformed instance at the evaluation point.
    pub fn apply(&self, inst: &RpmInstance) -> DeformedInstance {
        DeformedInstance::new(inst.clone(), self.clone())
    }
}

/// `(M, P, e^{2u} g)` seen at the point where `u = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformedInstance {
    base: RpmInstance,
    deformation: ConformalDeformation,
    metric_derivative: DenseTensor,
}

impl DeformedInstance {
    pub fn new(base: RpmInstance, deformation: ConformalDeformation) -> Self {
        let g = base.metric().g().clone();
        let a = deformation.alpha().to_vec();
        let metric_derivative = DenseTensor::from_fn(g.dim(), &[Co, Co, Co], |x| 2.0 * a[x[0]] * g.get(&[x[1], x[2]]))
            .expect("dimension already validated");
        Self {
            base,
            deformation,
            metric_derivative,
        }
    }

    pub fn base(&self) -> &RpmInstance {
        &self.base
    }

    pub fn deformation(&self) -> &ConformalDeformation {
        &self.deformation
    }
}

impl FramePoint for DeformedInstance {
    fn algebra(&self) -> &LieFrameAlgebra {
        self.base.algebra()
    }

    fn metric(&self) -> &MetricTensor {
        self.base.metric()
    }

    fn structure(&self) -> &ProductStructure {
        self.base.structure()
    }

    fn metric_derivative(&self) -> Option<&DenseTensor> {
        Some(&self.metric_derivative)
    }
}

/// `∇̄_x y = ∇_x y + α(x)y + α(y)x - g(x,y)L`.
pub fn transform_levi_civita(
    conn: &ConnectionCoeffs,
    def: &ConformalDeformation,
    metric: &MetricTensor,
) -> ConnectionCoeffs {
    let a = def.alpha();
    let l = def.gradient(metric);
    let g = metric.g();
    let gamma = DenseTensor::from_fn(conn.dim(), &[Contra, Co, Co], |x| {
        let (k, i, j) = (x[0], x[1], x[2]);
        conn.get(k, i, j) + a[i] * delta(k, j) + a[j] * delta(k, i) - g.get(&[i, j]) * l[k]
    })
    .expect("dimension already validated");
    ConnectionCoeffs::new(gamma, conn.is_torsion_free()).expect("shape preserved")
}

/// `θ̄(x) = θ(x) + 2n α(Px)` and `Ω̄ = Ω + 2n PL` at the evaluation point.
pub fn transform_lee(
    lee: &LeeForm,
    def: &ConformalDeformation,
    p: &ProductStructure,
    metric: &MetricTensor,
) -> LeeForm {
    let two_n = metric.dim() as f64;
    let ap = p.pull_back(def.alpha());
    let pl = p.apply(&def.gradient(metric));
    let theta: Vec<f64> = lee.theta().iter().zip(&ap).map(|(t, a)| t + two_n * a).collect();
    let omega: Vec<f64> = lee.omega().iter().zip(&pl).map(|(o, v)| o + two_n * v).collect();
    LeeForm {
        theta: DenseTensor::covector(&theta).expect("dimension already validated"),
        omega: DenseTensor::vector(&omega).expect("dimension already validated"),
    }
}

/// `D̄_x y = D_x y + α(x) y`.
pub fn transform_d(d: &NaturalConnection, def: &ConformalDeformation) -> ConnectionCoeffs {
    let a = def.alpha();
    let c = &d.coeffs;
    let gamma = DenseTensor::from_fn(c.dim(), &[Contra, Co, Co], |x| {
        let (k, i, j) = (x[0], x[1], x[2]);
        c.get(k, i, j) + a[i] * delta(k, j)
    })
    .expect("dimension already validated");
    ConnectionCoeffs::new(gamma, false).expect("shape preserved")
}

/// Max |R̄' - R'| between the curvature operators of `D̄` and `D`.
pub fn verify_thm_7_1(d: &NaturalConnection, def: &ConformalDeformation, alg: &LieFrameAlgebra) -> f64 {
    let before = curvature_operator(&d.coeffs, alg);
    let after = curvature_operator(&transform_d(d, def), alg);
    (&after - &before).max_abs()
}

fn weyl_13(inst: &impl FramePoint) -> Result<DenseTensor> {
    let metric = inst.metric();
    let lc = levi_civita_coeffs(inst)?;
    let r = crate::levi_civita::curvature_tensor(&lc, inst.algebra(), metric);
    let rs = ricci_and_scalar(&r, metric.inv())?;
    Ok(raise_last(&weyl_tensor(&r, &rs.rho, rs.tau, metric), metric))
}

/// Max |W̄ - W| of the (1,3) Weyl tensors, each computed from scratch.
pub fn verify_weyl_conformal(inst: &RpmInstance, def: &ConformalDeformation) -> Result<f64> {
    let before = weyl_13(inst)?;
    let after = weyl_13(&def.apply(inst))?;
    Ok((&after - &before).max_abs())
}

/// Every conformal check for one instance and deformation.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalReport {
    /// Max |Γ̄ (transformation law) - Γ̄ (Koszul on the deformed instance)|.
    pub levi_civita_law: f64,
    /// Torsion defect of the transformed Levi-Civita coefficients.
    pub levi_civita_torsion: f64,
    /// Compatibility defect with `ḡ`, including its frame derivatives.
    pub levi_civita_compatibility: f64,
    /// Max |θ̄ (transformation law) - θ̄ (from scratch)|.
    pub lee_law: f64,
    /// Max |ḡ(Ω̄, ·) - θ̄|.
    pub lee_duality: f64,
    /// Max |D + α⊗id - D̄ (from scratch)|.
    pub d_law: f64,
    pub thm_7_1: f64,
    pub weyl: f64,
    pub flags: ClassFlags,
}

pub fn conformal_report(inst: &RpmInstance, def: &ConformalDeformation, eps: f64) -> Result<ConformalReport> {
    let metric = inst.metric();
    let deformed = def.apply(inst);
    let lc = levi_civita_coeffs(inst)?;
    let (d, lee) = connection_d_unchecked(inst)?;
    let (d_bar, lee_bar) = connection_d_unchecked(&deformed)?;

    let lc_law = transform_levi_civita(&lc, def, metric);
    let lc_scratch = levi_civita_coeffs(&deformed)?;
    let lee_law = transform_lee(&lee, def, inst.structure(), metric);
    let lowered = metric.lower(lee_law.omega());
    let lee_duality = lowered
        .iter()
        .zip(lee_law.theta())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    Ok(ConformalReport {
        levi_civita_law: (lc_law.gamma() - lc_scratch.gamma()).max_abs(),
        levi_civita_torsion: lc_law.torsion_defect(inst.algebra()),
        levi_civita_compatibility: lc_law.compatibility_defect(&deformed),
        lee_law: (&lee_law.theta - &lee_bar.theta).max_abs(),
        lee_duality,
        d_law: (transform_d(&d, def).gamma() - d_bar.coeffs.gamma()).max_abs(),
        thm_7_1: verify_thm_7_1(&d, def, inst.algebra()),
        weyl: verify_weyl_conformal(inst, def)?,
        flags: class_flags(&deformed, eps)?,
    })
}
