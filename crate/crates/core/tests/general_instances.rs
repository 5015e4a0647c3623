//! Invariants on instances outside the example family: a product of two
//! copies of the affine algebra with random P-compatible metrics.

#![allow(clippy::needless_range_loop)]

use proptest::prelude::*;
use rpm_geometry::levi_civita::{
    curvature_symmetries, curvature_tensor, levi_civita_coeffs, ricci_and_scalar, ricci_trace_defect,
    sectional_curvature, weyl_tensor,
};
use rpm_geometry::natural::{connection_d_unchecked, curvature_rprime, is_riemannian_p_tensor};
use rpm_geometry::structure::validate_structure;
use rpm_geometry::{DenseTensor, FramePoint, LieFrameAlgebra, MetricTensor, ProductStructure, RpmInstance};

fn affine_pair() -> LieFrameAlgebra {
    LieFrameAlgebra::from_brackets(4, &[(0, 1, vec![0.0, 1.0, 0.0, 0.0]), (2, 3, vec![0.0, 0.0, 0.0, 1.0])]).unwrap()
}

fn swap() -> ProductStructure {
    ProductStructure::from_rows(&[
        vec![0.0, 0.0, 1.0, 0.0],
        vec![0.0, 0.0, 0.0, 1.0],
        vec![1.0, 0.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0, 0.0],
    ])
    .unwrap()
}

/// `AᵀA + I`, averaged over `P` so that `g(Px, Py) = g(x, y)`.
fn compatible_metric(a: &[f64; 16], p: &ProductStructure) -> MetricTensor {
    let mut g = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            g[i][j] = (0..4).map(|k| a[4 * k + i] * a[4 * k + j]).sum::<f64>() + if i == j { 1.0 } else { 0.0 };
        }
    }
    let rows: Vec<Vec<f64>> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| {
                    let mut pgp = 0.0;
                    for a in 0..4 {
                        for b in 0..4 {
                            pgp += p.get(a, i) * g[a][b] * p.get(b, j);
                        }
                    }
                    0.5 * (g[i][j] + pgp)
                })
                .collect()
        })
        .collect();
    MetricTensor::from_rows(&rows).unwrap()
}

fn instance(a: &[f64; 16]) -> RpmInstance {
    let p = swap();
    RpmInstance::new(affine_pair(), compatible_metric(a, &p), p).unwrap()
}

fn entries() -> impl Strategy<Value = [f64; 16]> {
    proptest::array::uniform16(-1.0f64..1.0)
}

#[test]
fn random_compatible_metrics_validate() {
    let inst = instance(&[0.3; 16]);
    assert!(validate_structure(&inst, 1e-9).is_valid());
}

proptest! {
    #[test]
    fn levi_civita_is_torsion_free_and_metric(a in entries()) {
        let inst = instance(&a);
        let lc = levi_civita_coeffs(&inst).unwrap();
        prop_assert!(lc.torsion_defect(inst.algebra()) <= 1e-9);
        prop_assert!(lc.compatibility_defect(&inst) <= 1e-9);
    }

    #[test]
    fn curvature_identities(a in entries()) {
        let inst = instance(&a);
        let lc = levi_civita_coeffs(&inst).unwrap();
        let r = curvature_tensor(&lc, inst.algebra(), inst.metric());
        prop_assert!(curvature_symmetries(&r).max() <= 1e-9);
        let rs = ricci_and_scalar(&r, inst.metric().inv()).unwrap();
        prop_assert!(rs.rho.asymmetry() <= 1e-9);
        let w = weyl_tensor(&r, &rs.rho, rs.tau, inst.metric());
        prop_assert!(curvature_symmetries(&w).max() <= 1e-9);
        prop_assert!(ricci_trace_defect(&w, inst.metric()) <= 1e-9);
    }

    #[test]
    fn sectional_curvature_depends_only_on_the_plane(a in entries(), u in proptest::array::uniform4(-1.0f64..1.0), v in proptest::array::uniform4(-1.0f64..1.0)) {
        let inst = instance(&a);
        let lc = levi_civita_coeffs(&inst).unwrap();
        let r = curvature_tensor(&lc, inst.algebra(), inst.metric());
        let g = inst.metric();
        if let Ok(k) = sectional_curvature(&r, g, &u, &v) {
            // k is unchanged when v is replaced by v + t·u
            let w: Vec<f64> = v.iter().zip(&u).map(|(x, y)| x + 0.7 * y).collect();
            let k2 = sectional_curvature(&r, g, &u, &w).unwrap();
            prop_assert!((k - k2).abs() <= 1e-7 * k.abs().max(1.0));
        }
    }

    #[test]
    fn d_preserves_metric_and_rprime_is_skew(a in entries()) {
        let inst = instance(&a);
        let (d, _) = connection_d_unchecked(&inst).unwrap();
        // Dg = 0 holds off W₁ too; DP = 0 needs the W₁ form of F, so it is not asserted here.
        let (dg, _) = d.naturality_defects(&inst);
        prop_assert!(dg <= 1e-9);
        let rp = curvature_rprime(&d, inst.algebra(), inst.metric());
        let rep = is_riemannian_p_tensor(&rp, inst.structure(), 1e-9);
        prop_assert!(rep.skew12 <= 1e-9 && rep.skew34 <= 1e-9);
    }
}

#[test]
fn metric_inverse_is_cached_consistently() {
    let inst = instance(&[
        0.1, -0.2, 0.3, 0.0, 0.5, 0.1, 0.0, 0.2, -0.4, 0.0, 0.3, 0.1, 0.0, 0.2, 0.0, 0.6,
    ]);
    let g = inst.metric();
    let prod = DenseTensor::from_fn(4, &[rpm_geometry::Variance::Contra, rpm_geometry::Variance::Co], |x| {
        (0..4).map(|k| g.inv().get(&[x[0], k]) * g.g().get(&[k, x[1]])).sum()
    })
    .unwrap();
    let id = DenseTensor::identity_map(4).unwrap();
    assert!((&prod - &id).max_abs() <= 1e-12);
}
