//! Almost product structures, the manifold instance, and its structural checks.

use crate::error::{GeometryError, Result};
use crate::lie::{unit, LieFrameAlgebra};
use crate::tensor::{delta, DenseTensor, MetricTensor, Variance};

/// The (1,1) tensor `P`, indexed `[k, j]` so that `P X_j = Σ_k P^k_j X_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductStructure {
    p: DenseTensor,
}

impl ProductStructure {
    pub fn new(p: DenseTensor) -> Result<Self> {
        if p.variance() != [Variance::Contra, Variance::Co] {
            return Err(GeometryError::ShapeMismatch(format!(
                "product structure must be a (1,1) tensor, got {:?}",
                p.variance()
            )));
        }
        Ok(Self { p })
    }

    /// Row `k`, column `j` holds `P^k_j`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(DenseTensor::from_rows(rows, [Variance::Contra, Variance::Co])?)
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        Self::new(DenseTensor::from_fn(
            entries.len(),
            &[Variance::Contra, Variance::Co],
            |i| entries[i[0]] * delta(i[0], i[1]),
        )?)
    }

    pub fn tensor(&self) -> &DenseTensor {
        &self.p
    }

    pub fn dim(&self) -> usize {
        self.p.dim()
    }

    pub fn get(&self, k: usize, j: usize) -> f64 {
        self.p.get(&[k, j])
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n).map(|k| (0..n).map(|j| self.get(k, j) * v[j]).sum()).collect()
    }

    /// Components of the 1-form `x ↦ w(Px)`.
    pub fn pull_back(&self, w: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n).map(|j| (0..n).map(|k| w[k] * self.get(k, j)).sum()).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }
}

/// Data needed to evaluate the calculus at one point of the frame.
///
/// Implementors with frame-constant metric components return `None` from
/// [`FramePoint::metric_derivative`]. Conformally deformed instances supply
/// the frame derivatives `X_i(g_jk)` at the base point.
pub trait FramePoint {
    fn algebra(&self) -> &LieFrameAlgebra;
    fn metric(&self) -> &MetricTensor;
    fn structure(&self) -> &ProductStructure;

    /// `X_i(g_jk)` indexed `[i, j, k]`.
    fn metric_derivative(&self) -> Option<&DenseTensor> {
        None
    }

    fn dim(&self) -> usize {
        self.algebra().dim()
    }

    /// `n` with `dim = 2n`.
    fn half_dim(&self) -> f64 {
        (self.dim() / 2) as f64
    }
}

/// A Riemannian almost product manifold modelled on a Lie group with a
/// left-invariant metric and structure.
#[derive(Debug, Clone, PartialEq)]
pub struct RpmInstance {
    alg: LieFrameAlgebra,
    metric: MetricTensor,
    p: ProductStructure,
}

impl RpmInstance {
    pub fn new(alg: LieFrameAlgebra, metric: MetricTensor, p: ProductStructure) -> Result<Self> {
        let n = alg.dim();
        for d in [metric.dim(), p.dim()] {
            if d != n {
                return Err(GeometryError::DimensionMismatch { expected: n, actual: d });
            }
        }
        Ok(Self { alg, metric, p })
    }

    pub fn with_structure(&self, p: ProductStructure) -> Result<Self> {
        Self::new(self.alg.clone(), self.metric.clone(), p)
    }

    pub fn with_algebra(&self, alg: LieFrameAlgebra) -> Result<Self> {
        Self::new(alg, self.metric.clone(), self.p.clone())
    }
}

impl FramePoint for RpmInstance {
    fn algebra(&self) -> &LieFrameAlgebra {
        &self.alg
    }

    fn metric(&self) -> &MetricTensor {
        &self.metric
    }

    fn structure(&self) -> &ProductStructure {
        &self.p
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructureCheck {
    pub name: &'static str,
    pub magnitude: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<StructureCheck>,
}

impl ValidationReport {
    pub fn defects(&self) -> Vec<&StructureCheck> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&StructureCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Measures every axiom of a Riemannian almost product manifold.
pub fn validate_structure(inst: &impl FramePoint, eps: f64) -> ValidationReport {
    let n = inst.dim();
    let p = inst.structure();
    let g = inst.metric().g();
    let scale = g.max_abs().max(1.0);

    let mut p_sq: f64 = 0.0;
    let mut compat: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let pp: f64 = (0..n).map(|k| p.get(i, k) * p.get(k, j)).sum();
            p_sq = p_sq.max((pp - delta(i, j)).abs());
            let mut pgp = 0.0;
            for a in 0..n {
                for b in 0..n {
                    pgp += p.get(a, i) * g.get(&[a, b]) * p.get(b, j);
                }
            }
            compat = compat.max((pgp - g.get(&[i, j])).abs());
        }
    }
    let trace = p.trace().abs();
    let jacobi = inst.algebra().jacobi_defect();
    let jac_scale = inst.algebra().structure_constants().max_abs().powi(2).max(1.0);
    let symmetry = g.asymmetry();
    let min_eig = g.to_matrix().symmetric_eigenvalues().min();

    let check = |name, magnitude: f64, tolerance: f64| StructureCheck {
        name,
        magnitude,
        tolerance,
        pass: magnitude <= tolerance,
    };
    ValidationReport {
        checks: vec![
            check("p_squared_identity", p_sq, eps),
            check("p_metric_compatibility", compat, eps * scale),
            check("p_trace_zero", trace, eps),
            check("jacobi_identity", jacobi, eps * jac_scale),
            check("metric_symmetry", symmetry, eps * scale),
            // shortfall of the smallest eigenvalue below the threshold
            check("metric_positive_definite", (eps * scale - min_eig).max(0.0), 0.0),
        ],
    }
}

/// `g̃(x, y) = g(x, Py)`.
pub fn associated_metric(inst: &impl FramePoint) -> DenseTensor {
    let n = inst.dim();
    let g = inst.metric().g();
    let p = inst.structure();
    DenseTensor::from_fn(n, &[Variance::Co, Variance::Co], |i| {
        (0..n).map(|k| g.get(&[i[0], k]) * p.get(k, i[1])).sum()
    })
    .expect("dimension already validated")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// Eigenvalue sign count of a symmetric rank-2 tensor.
pub fn signature(t: &DenseTensor, threshold: f64) -> Signature {
    let m = t.to_matrix();
    let m = (&m + m.transpose()) * 0.5;
    let eig = m.symmetric_eigenvalues();
    let scale = threshold * t.max_abs().max(1.0);
    Signature {
        positive: eig.iter().filter(|&&e| e > scale).count(),
        negative: eig.iter().filter(|&&e| e < -scale).count(),
        zero: eig.iter().filter(|&&e| e.abs() <= scale).count(),
    }
}

/// `N(x,y) = [Px,Py] + [x,y] - P[Px,y] - P[x,Py]`, indexed `[k, i, j]`.
pub fn nijenhuis_tensor(inst: &impl FramePoint) -> DenseTensor {
    let n = inst.dim();
    let alg = inst.algebra();
    let p = inst.structure();
    let br = |u: &[f64], v: &[f64]| alg.bracket(u, v).expect("dimensions agree");
    let mut out =
        DenseTensor::zeros(n, &[Variance::Contra, Variance::Co, Variance::Co]).expect("dimension already validated");
    for i in 0..n {
        let xi = unit(n, i);
        let pxi = p.apply(&xi);
        for j in 0..n {
            let xj = unit(n, j);
            let pxj = p.apply(&xj);
            let a = br(&pxi, &pxj);
            let b = br(&xi, &xj);
            let c = p.apply(&br(&pxi, &xj));
            let d = p.apply(&br(&xi, &pxj));
            for k in 0..n {
                out.set(&[k, i, j], a[k] + b[k] - c[k] - d[k]);
            }
        }
    }
    out
}

/// Max |[PX_i, PX_j] + [X_i, X_j]| over basis pairs.
pub fn abelian_defect(inst: &impl FramePoint) -> f64 {
    let n = inst.dim();
    let alg = inst.algebra();
    let p = inst.structure();
    let mut m: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let a = alg
                .bracket(&p.apply(&unit(n, i)), &p.apply(&unit(n, j)))
                .expect("dimensions agree");
            let b = alg.bracket_basis(i, j);
            for k in 0..n {
                m = m.max((a[k] + b[k]).abs());
            }
        }
    }
    m
}

pub fn is_abelian_structure(inst: &impl FramePoint, eps: f64) -> bool {
    abelian_defect(inst) <= eps
}
