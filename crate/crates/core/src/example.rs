//! The four-dimensional Lie group family with `PX_1 = X_3`, `PX_2 = X_4`,
//! orthonormal frame and brackets
//!
//! ```text
//! [X1,X2] = -[X3,X4] = λ1 X1 + λ2 X2 + λ3 X3 + λ4 X4
//! [X1,X3] =  [X2,X4] = λ4 X1 - λ3 X2 + λ2 X3 - λ1 X4
//! [X2,X3] =  [X1,X4] = 0
//! ```
//!
//! together with its closed-form tables, written as polynomials in λ.

use crate::levi_civita::{basis_sectional_curvatures, class_flags, pi1_tensor, weyl_tensor, ConnectionCoeffs};
use crate::lie::LieFrameAlgebra;
use crate::natural::{has_parallel_torsion, p_curvature_criterion, DAnalysis};
use crate::structure::{FramePoint, ProductStructure, RpmInstance};
use crate::tensor::{DenseTensor, MetricTensor, Variance};

use Variance::{Co, Contra};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExampleParams {
    pub lam: [f64; 4],
}

impl ExampleParams {
    pub fn new(lam: [f64; 4]) -> Self {
        Self { lam }
    }

    /// All λ vanish: the structure is parallel and `D = ∇`.
    pub fn is_trivial(&self) -> bool {
        self.lam.iter().all(|l| *l == 0.0)
    }

    fn sum_sq(&self) -> f64 {
        self.lam.iter().map(|l| l * l).sum()
    }
}

pub fn example_algebra(params: &ExampleParams) -> LieFrameAlgebra {
    let [l1, l2, l3, l4] = params.lam;
    let a = vec![l1, l2, l3, l4];
    let b = vec![l4, -l3, l2, -l1];
    LieFrameAlgebra::from_brackets(
        4,
        &[
            (0, 1, a.clone()),
            (2, 3, a.iter().map(|v| -v).collect()),
            (0, 2, b.clone()),
            (1, 3, b),
        ],
    )
    .expect("the family is antisymmetric by construction")
}

pub fn example_structure() -> ProductStructure {
    ProductStructure::from_rows(&[
        vec![0.0, 0.0, 1.0, 0.0],
        vec![0.0, 0.0, 0.0, 1.0],
        vec![1.0, 0.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0, 0.0],
    ])
    .expect("4x4 rows")
}

pub fn build_example(params: &ExampleParams) -> RpmInstance {
    RpmInstance::new(
        example_algebra(params),
        MetricTensor::identity(4).expect("dimension 4"),
        example_structure(),
    )
    .expect("dimensions agree")
}

/// Closed-form component tables of the family.
#[derive(Debug, Clone, PartialEq)]
pub struct GoldenTables {
    /// Levi-Civita coefficients `[k, i, j]`.
    pub nabla: DenseTensor,
    /// Curvature `R(X_i, X_j, X_k, X_l)`.
    pub r: DenseTensor,
    pub rho: DenseTensor,
    pub tau: f64,
    pub theta: Vec<f64>,
    /// `k(X1,X3)`, `k(X2,X4)`.
    pub k_inv: [f64; 2],
    /// `k(X1,X2)`, `k(X1,X4)`, `k(X2,X3)`, `k(X3,X4)`.
    pub k_anti: [f64; 4],
    /// Coefficients of `D`, `[k, i, j]`.
    pub d: DenseTensor,
    /// Torsion of `D`, `[k, i, j]`.
    pub t_d: DenseTensor,
}

fn vector_table(entries: &[((usize, usize), [f64; 4])]) -> DenseTensor {
    let mut t = DenseTensor::zeros(4, &[Contra, Co, Co]).expect("dimension 4");
    for ((i, j), v) in entries {
        for (k, c) in v.iter().enumerate() {
            t.set(&[k, i - 1, j - 1], *c);
        }
    }
    t
}

/// Fills a (0,4) table from representatives using the skew symmetries in
/// each pair and the pair exchange.
fn complete_curvature(entries: &[([usize; 4], f64)]) -> DenseTensor {
    let mut t = DenseTensor::zeros(4, &[Co; 4]).expect("dimension 4");
    for ([i, j, k, s], v) in entries {
        let (i, j, k, s) = (i - 1, j - 1, k - 1, s - 1);
        for (idx, sign) in [
            ([i, j, k, s], 1.0),
            ([j, i, k, s], -1.0),
            ([i, j, s, k], -1.0),
            ([j, i, s, k], 1.0),
        ] {
            let [a, b, c, d] = idx;
            t.set(&[a, b, c, d], sign * v);
            t.set(&[c, d, a, b], sign * v);
        }
    }
    t
}

pub fn golden_tables(params: &ExampleParams) -> GoldenTables {
    let [l1, l2, l3, l4] = params.lam;

    let nabla = vector_table(&[
        ((1, 1), [0.0, -l1, -l4, 0.0]),
        ((4, 4), [0.0, -l1, -l4, 0.0]),
        ((2, 2), [l2, 0.0, 0.0, l3]),
        ((3, 3), [l2, 0.0, 0.0, l3]),
        ((1, 2), [l1, 0.0, l3, 0.0]),
        ((3, 4), [-l1, 0.0, -l3, 0.0]),
        ((2, 1), [0.0, -l2, 0.0, -l4]),
        ((4, 3), [0.0, l2, 0.0, l4]),
        ((1, 3), [l4, -l3, 0.0, 0.0]),
        ((2, 4), [l4, -l3, 0.0, 0.0]),
        ((3, 1), [0.0, 0.0, -l2, l1]),
        ((4, 2), [0.0, 0.0, -l2, l1]),
    ]);

    let r = complete_curvature(&[
        ([1, 2, 1, 2], l1 * l1 + l2 * l2),
        ([1, 3, 1, 3], l2 * l2 + l4 * l4),
        ([1, 4, 1, 4], l1 * l1 + l4 * l4),
        ([2, 3, 2, 3], l2 * l2 + l3 * l3),
        ([2, 4, 2, 4], l1 * l1 + l3 * l3),
        ([3, 4, 3, 4], l3 * l3 + l4 * l4),
        ([1, 2, 1, 3], l1 * l4),
        ([2, 4, 3, 4], l1 * l4),
        ([1, 2, 1, 4], l2 * l4),
        ([2, 3, 4, 3], l2 * l4),
        ([1, 2, 3, 2], l1 * l3),
        ([1, 4, 3, 4], l1 * l3),
        ([1, 2, 4, 2], l2 * l3),
        ([1, 3, 4, 3], l2 * l3),
        ([1, 3, 4, 1], l1 * l2),
        ([2, 3, 4, 2], l1 * l2),
        ([1, 3, 3, 2], l3 * l4),
        ([1, 4, 4, 2], l3 * l4),
    ]);

    let (s1, s2, s3, s4) = (l1 * l1, l2 * l2, l3 * l3, l4 * l4);
    let mut rho = DenseTensor::zeros(4, &[Co, Co]).expect("dimension 4");
    for ((i, j), v) in [
        ((1, 1), -2.0 * (s1 + s2 + s4)),
        ((2, 2), -2.0 * (s1 + s2 + s3)),
        ((3, 3), -2.0 * (s2 + s3 + s4)),
        ((4, 4), -2.0 * (s1 + s3 + s4)),
        ((1, 2), 2.0 * l3 * l4),
        ((1, 3), -2.0 * l1 * l3),
        ((1, 4), -2.0 * l2 * l3),
        ((3, 4), 2.0 * l1 * l2),
        ((2, 3), -2.0 * l1 * l4),
        ((2, 4), -2.0 * l2 * l4),
    ] {
        rho.set(&[i - 1, j - 1], v);
        rho.set(&[j - 1, i - 1], v);
    }

    let d = vector_table(&[
        ((1, 1), [0.0, 0.0, 0.0, -l3]),
        ((1, 2), [0.0, 0.0, l3, 0.0]),
        ((1, 3), [0.0, -l3, 0.0, 0.0]),
        ((1, 4), [l3, 0.0, 0.0, 0.0]),
        ((2, 1), [0.0, 0.0, 0.0, -l4]),
        ((2, 2), [0.0, 0.0, l4, 0.0]),
        ((2, 3), [0.0, -l4, 0.0, 0.0]),
        ((2, 4), [l4, 0.0, 0.0, 0.0]),
        ((3, 2), [0.0, 0.0, -l1, 0.0]),
        ((3, 1), [0.0, 0.0, 0.0, l1]),
        ((3, 4), [-l1, 0.0, 0.0, 0.0]),
        ((3, 3), [0.0, l1, 0.0, 0.0]),
        ((4, 2), [0.0, 0.0, -l2, 0.0]),
        ((4, 1), [0.0, 0.0, 0.0, l2]),
        ((4, 4), [-l2, 0.0, 0.0, 0.0]),
        ((4, 3), [0.0, l2, 0.0, 0.0]),
    ]);

    let torsion = [
        ((1, 2), [-l1, -l2, 0.0, 0.0]),
        ((1, 3), [-l4, 0.0, -l2, 0.0]),
        ((1, 4), [l3, 0.0, 0.0, -l2]),
        ((2, 3), [0.0, -l4, l1, 0.0]),
        ((2, 4), [0.0, l3, 0.0, l1]),
        ((3, 4), [0.0, 0.0, l3, l4]),
    ];
    let mut entries: Vec<((usize, usize), [f64; 4])> = torsion.to_vec();
    entries.extend(torsion.iter().map(|((i, j), v)| ((*j, *i), v.map(|c| -c))));
    let t_d = vector_table(&entries);

    GoldenTables {
        nabla,
        r,
        rho,
        tau: -6.0 * (s1 + s2 + s3 + s4),
        theta: vec![4.0 * l4, -4.0 * l3, -4.0 * l2, 4.0 * l1],
        k_inv: [-(s2 + s4), -(s1 + s3)],
        k_anti: [-(s1 + s2), -(s1 + s4), -(s2 + s3), -(s3 + s4)],
        d,
        t_d,
    }
}

/// `max|a - b| / max(1, max|a|, max|b|)` over paired components.
fn relative(a: &[f64], b: &[f64]) -> f64 {
    let scale = a.iter().chain(b).fold(1.0f64, |m, v| m.max(v.abs()));
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChecklistItem {
    pub name: &'static str,
    pub defect: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ChecklistItem {
    fn at_most(name: &'static str, defect: f64, tolerance: f64) -> Self {
        Self {
            name,
            defect,
            tolerance,
            pass: defect <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExampleReport {
    pub params: ExampleParams,
    pub epsilon: f64,
    /// Relative deviation of each computed table from its closed form.
    pub deviations: Vec<(&'static str, f64)>,
    pub checklist: Vec<ChecklistItem>,
    pub degenerate: bool,
    /// `max|R - (τ/12)π₁|`, reported when all `λ_i²` agree.
    pub space_form_residual: Option<f64>,
    pub analysis: DAnalysis,
}

impl ExampleReport {
    pub fn pass(&self) -> bool {
        self.deviations.iter().all(|(_, d)| *d <= self.epsilon) && self.checklist.iter().all(|c| c.pass)
    }
}

fn connection_components(c: &ConnectionCoeffs) -> &[f64] {
    c.gamma().components()
}

/// Runs the full pipeline on the family member and compares it with the
/// closed-form tables and the expected theorem outcomes.
pub fn verify_paper_example(params: &ExampleParams, eps: f64) -> ExampleReport {
    let inst = build_example(params);
    let metric = inst.metric();
    let golden = golden_tables(params);
    let a = DAnalysis::new(&inst).expect("the example metric is positive definite");

    let sectional = basis_sectional_curvatures(&a.r, metric);
    let k = |i: usize, j: usize| {
        sectional
            .iter()
            .find(|(p, _)| *p == (i, j))
            .map(|(_, v)| *v)
            .expect("basis plane present")
    };
    let k_inv = [k(0, 2), k(1, 3)];
    let k_anti = [k(0, 1), k(0, 3), k(1, 2), k(2, 3)];
    let torsion = a.d.coeffs.torsion(inst.algebra());

    let deviations = vec![
        (
            "nabla",
            relative(connection_components(&a.lc), golden.nabla.components()),
        ),
        ("R", relative(a.r.components(), golden.r.components())),
        ("rho", relative(a.rho.components(), golden.rho.components())),
        ("tau", relative(&[a.tau], &[golden.tau])),
        ("theta", relative(a.lee.theta(), &golden.theta)),
        ("k_inv", relative(&k_inv, &golden.k_inv)),
        ("k_anti", relative(&k_anti, &golden.k_anti)),
        ("D", relative(connection_components(&a.d.coeffs), golden.d.components())),
        ("T_D", relative(torsion.components(), golden.t_d.components())),
    ];

    let degenerate = params.is_trivial();
    let scale = params.sum_sq().max(1.0);
    let tol = eps * scale;
    let weyl = weyl_tensor(&a.r, &a.rho, a.tau, metric).max_abs();
    let rs = a.ricci_scalar(metric);
    let parallel = has_parallel_torsion(&inst, &a.d, &a.lee, eps).expect("example is well formed");
    let p_crit = p_curvature_criterion(&inst, &a.d, &a.lee, eps).expect("example is well formed");
    let flags = class_flags(&inst, eps).expect("example is well formed");

    let checklist = vec![
        ChecklistItem {
            name: "scalar_curvature_negative",
            defect: a.tau.max(0.0),
            tolerance: 0.0,
            pass: degenerate || a.tau < 0.0,
        },
        ChecklistItem::at_most("weyl_zero", weyl, tol),
        ChecklistItem::at_most("d_flat", a.r_prime.max_abs(), tol),
        ChecklistItem {
            name: "torsion_parallel_iff_trivial",
            defect: parallel.dt_defect,
            tolerance: tol,
            pass: parallel.verdict == degenerate && parallel.equivalence_holds,
        },
        ChecklistItem::at_most("curvature_relation", a.curvature_relation(metric), tol),
        ChecklistItem::at_most("ricci_scalar_relation", rs.ricci_residual.max(rs.scalar_residual), tol),
        ChecklistItem::at_most("weyl_invariance", a.weyl_invariance(metric), tol),
        ChecklistItem {
            name: "p_tensor_criterion",
            defect: p_crit.dtheta_symmetry_defect,
            tolerance: tol,
            pass: p_crit.equivalence_holds && p_crit.closedness_agrees,
        },
        ChecklistItem::at_most("w1_class", flags.w1_residual, tol),
        ChecklistItem::at_most("product_class", flags.nijenhuis_max, tol),
    ];

    let squares = params.lam.map(|l| l * l);
    let equal_squares = squares.iter().all(|s| (s - squares[0]).abs() <= tol);
    let space_form_residual = equal_squares.then(|| (&a.r - &(&pi1_tensor(metric) * (a.tau / 12.0))).max_abs());

    ExampleReport {
        params: *params,
        epsilon: eps,
        deviations,
        checklist,
        degenerate,
        space_form_residual,
        analysis: a,
    }
}

/// A condition decided both from λ and from computed curvatures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlagPair {
    pub algebraic: bool,
    pub computed: bool,
}

impl FlagPair {
    pub fn agree(&self) -> bool {
        self.algebraic == self.computed
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SectionalFlags {
    pub const_invariant: FlagPair,
    pub const_anti_invariant: FlagPair,
    pub const_sectional: FlagPair,
}

impl SectionalFlags {
    pub fn agree(&self) -> bool {
        self.const_invariant.agree() && self.const_anti_invariant.agree() && self.const_sectional.agree()
    }
}

fn spread(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::MIN, f64::max);
    let min = values.iter().cloned().fold(f64::MAX, f64::min);
    max - min
}

/// Constancy of the invariant, anti-invariant and all basis-plane
/// sectional curvatures.
pub fn theorem_9_2_flags(params: &ExampleParams, eps: f64) -> SectionalFlags {
    let inst = build_example(params);
    let a = DAnalysis::new(&inst).expect("the example metric is positive definite");
    let ks = basis_sectional_curvatures(&a.r, inst.metric());
    let k = |i: usize, j: usize| {
        ks.iter()
            .find(|(p, _)| *p == (i, j))
            .map(|(_, v)| *v)
            .expect("basis plane")
    };
    let inv = [k(0, 2), k(1, 3)];
    let anti = [k(0, 1), k(0, 3), k(1, 2), k(2, 3)];
    let all: Vec<f64> = ks.iter().map(|(_, v)| *v).collect();

    let tol = eps * params.sum_sq().max(1.0);
    let [s1, s2, s3, s4] = params.lam.map(|l| l * l);
    SectionalFlags {
        const_invariant: FlagPair {
            algebraic: (s1 - s2 + s3 - s4).abs() <= tol,
            computed: spread(&inv) <= tol,
        },
        const_anti_invariant: FlagPair {
            algebraic: (s1 - s3).abs() <= tol && (s2 - s4).abs() <= tol,
            computed: spread(&anti) <= tol,
        },
        const_sectional: FlagPair {
            algebraic: spread(&[s1, s2, s3, s4]) <= tol,
            computed: spread(&all) <= tol,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{is_abelian_structure, validate_structure};
    use crate::tensor::tensor_close;
    use proptest::prelude::*;

    #[test]
    fn family_members_are_valid() {
        for lam in [[1.0, 2.0, 3.0, 4.0], [0.0; 4], [-1.5, 0.25, 2.0, -3.0]] {
            let inst = build_example(&ExampleParams::new(lam));
            assert!(validate_structure(&inst, 1e-9).is_valid());
            assert!(is_abelian_structure(&inst, 1e-9));
            let f = class_flags(&inst, 1e-9).unwrap();
            assert!(f.is_w1 && f.is_product);
            assert_eq!(f.is_w0, lam == [0.0; 4]);
        }
    }

    #[test]
    fn bracket_spot_value() {
        let alg = example_algebra(&ExampleParams::new([1.0, 0.0, 0.0, 0.0]));
        assert_eq!(alg.bracket_basis(0, 2), vec![0.0, 0.0, 0.0, -1.0]);
    }

    #[test]
    fn table_spot_values() {
        let g = golden_tables(&ExampleParams::new([1.0, 2.0, 3.0, 4.0]));
        assert_eq!(g.tau, -180.0);
        assert_eq!(g.theta, vec![16.0, -12.0, -8.0, 4.0]);
        assert_eq!(g.rho.get(&[0, 0]), -42.0);
        assert_eq!(g.rho.get(&[0, 1]), 24.0);
        let g = golden_tables(&ExampleParams::new([1.0; 4]));
        assert_eq!(g.k_inv, [-2.0, -2.0]);
        let g = golden_tables(&ExampleParams::new([0.0; 4]));
        for t in [&g.nabla, &g.r, &g.rho, &g.d, &g.t_d] {
            assert_eq!(t.max_abs(), 0.0);
        }
        assert_eq!(g.tau, 0.0);
    }

    #[test]
    fn completed_curvature_table_has_curvature_symmetries() {
        let g = golden_tables(&ExampleParams::new([0.3, -1.1, 2.0, 0.7]));
        let s = crate::levi_civita::curvature_symmetries(&g.r);
        assert!(s.skew12 == 0.0 && s.skew34 == 0.0 && s.pair == 0.0);
    }

    #[test]
    fn ricci_contracted_from_table() {
        let p = ExampleParams::new([1.0, 2.0, 3.0, 4.0]);
        let g = golden_tables(&p);
        let gi = MetricTensor::identity(4).unwrap();
        let rho = crate::tensor::trace_contract(&g.r, 0, 3, Some(gi.inv())).unwrap();
        assert!(tensor_close(&rho, &g.rho, 1e-12).unwrap());
    }

    #[test]
    fn example_reports() {
        let rep = verify_paper_example(&ExampleParams::new([1.0, 2.0, 3.0, 4.0]), 1e-9);
        assert!(rep.pass(), "{:?}", rep.deviations);
        assert!(!rep.degenerate);
        assert_eq!(rep.space_form_residual, None);

        let rep = verify_paper_example(&ExampleParams::new([0.0; 4]), 1e-9);
        assert!(rep.pass() && rep.degenerate);
        assert_eq!(rep.analysis.tau, 0.0);
    }

    #[test]
    fn equal_squares_are_not_a_space_form() {
        // Equal λ² make the six basis-plane curvatures agree, but R still has
        // mixed components such as R(X1,X2,X1,X3) = λ1λ4 where π₁ vanishes.
        let rep = verify_paper_example(&ExampleParams::new([1.0; 4]), 1e-9);
        assert!(rep.pass());
        assert_eq!(rep.analysis.tau, -24.0);
        assert_eq!(rep.space_form_residual, Some(1.0));
    }

    #[test]
    fn sectional_flag_cases() {
        let f = theorem_9_2_flags(&ExampleParams::new([1.0, 2.0, 2.0, 1.0]), 1e-9);
        assert!(f.agree() && f.const_invariant.algebraic && !f.const_sectional.algebraic);
        let f = theorem_9_2_flags(&ExampleParams::new([1.0, 2.0, 1.0, 2.0]), 1e-9);
        assert!(f.agree() && f.const_anti_invariant.algebraic && !f.const_invariant.algebraic);
        let f = theorem_9_2_flags(&ExampleParams::new([1.0, -1.0, 1.0, 1.0]), 1e-9);
        assert!(f.agree() && f.const_sectional.computed);
    }

    proptest! {
        #[test]
        fn random_family_members_match_tables(lam in proptest::array::uniform4(-3.0f64..3.0)) {
            let p = ExampleParams::new(lam);
            let rep = verify_paper_example(&p, 1e-9);
            prop_assert!(rep.pass(), "{:?} {:?}", rep.deviations, rep.checklist);
            prop_assert!(theorem_9_2_flags(&p, 1e-9).agree());
            prop_assert!(build_example(&p).algebra().jacobi_defect() <= 1e-9);
        }
    }
}
