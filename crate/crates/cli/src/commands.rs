//! The three verification commands. Each builds a [`Report`]; printing and
//! exit status are left to the caller.

use rpm_geometry::conformal::{conformal_report, ConformalDeformation, ConformalReport};
use rpm_geometry::example::{theorem_9_2_flags, verify_paper_example, ExampleParams};
use rpm_geometry::levi_civita::{
    basis_sectional_curvatures, class_flags, curvature_symmetries, levi_civita_coeffs, ricci_trace_defect, weyl_tensor,
};
use rpm_geometry::natural::{
    flat_d_report, has_parallel_torsion, is_riemannian_p_tensor, lee_derivative_relation, p_curvature_criterion,
    torsion_identities, DAnalysis,
};
use rpm_geometry::sampling::{random_closed_alpha, seeded_rng};
use rpm_geometry::structure::{is_abelian_structure, validate_structure};
use rpm_geometry::{FramePoint, GeometryError, RpmInstance};
use serde_json::json;

use crate::instance::Loaded;
use crate::report::{verdict, Check, Report};

/// Why a command produced no full report.
#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error("{message}")]
    NotClosed { message: String },

    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn sum_sq(values: &[f64]) -> f64 {
    values.iter().map(|v| v * v).sum()
}

/// Size of the structure constants and metric, used to scale tolerances.
fn instance_scale(inst: &impl FramePoint) -> f64 {
    let c = inst.algebra().structure_constants().max_abs();
    let g = inst.metric().g().max_abs().max(inst.metric().inv().max_abs());
    (1.0 + c * c) * g.max(1.0).powi(2)
}

fn sectional_table(r: &rpm_geometry::DenseTensor, inst: &impl FramePoint) -> Vec<serde_json::Value> {
    basis_sectional_curvatures(r, inst.metric())
        .into_iter()
        .map(|((i, j), k)| json!({ "plane": [i + 1, j + 1], "k": k }))
        .collect()
}

pub fn verify_paper(lambda: [f64; 4], eps: f64, seed: u64) -> Result<Report, CommandError> {
    let params = ExampleParams::new(lambda);
    let loaded = crate::instance::builtin(lambda);
    let inst = &loaded.instance;
    let rep = verify_paper_example(&params, eps);
    let mut report = Report::new("verify-paper", loaded.description.clone(), eps);

    if rep.degenerate {
        report.notice(
            "degenerate case: all λ vanish, so the algebra is abelian, θ = 0, D = ∇ and every curvature is zero",
        );
    }
    for (name, dev) in &rep.deviations {
        report.check(Check::at_most(format!("table_{name}"), *dev, eps));
    }
    for item in &rep.checklist {
        if item.pass == verdict(item.defect, item.tolerance) {
            report.check(Check::at_most(item.name, item.defect, item.tolerance));
        } else {
            report.check(Check::condition(item.name, item.pass));
            report.table(&format!("{}_defect", item.name), item.defect);
        }
    }

    let flags = theorem_9_2_flags(&params, eps);
    report.flag("const_invariant_sectional", flags.const_invariant.algebraic);
    report.flag("const_anti_invariant_sectional", flags.const_anti_invariant.algebraic);
    report.flag("const_sectional", flags.const_sectional.algebraic);
    report.check(Check::condition("sectional_flags_agree", flags.agree()));
    if let Some(res) = rep.space_form_residual {
        report.table("space_form_residual", res);
        if res <= eps * (1.0 + sum_sq(&lambda)) {
            report.notice("all λ² agree and R = (τ/12)π₁ holds");
        } else {
            report.notice(format!(
                "all λ² agree: the basis-plane sectional curvatures coincide, but max|R - (τ/12)π₁| = {res:.3e}, \
                 so the sectional curvature is not constant over all planes"
            ));
        }
    }

    // conformal invariance with a seeded closed 1-form
    let mut rng = seeded_rng(seed);
    let alpha = random_closed_alpha(inst.algebra(), &mut rng);
    // closed by construction; gate on roundoff, not on the user's epsilon
    let def = ConformalDeformation::new(inst.algebra(), &alpha, rpm_geometry::DEFAULT_EPSILON)?;
    let conf = conformal_report(inst, &def, eps)?;
    let tol = eps * (1.0 + sum_sq(&lambda) + sum_sq(&alpha));
    report.table("conformal_alpha", &alpha);
    conformal_checks(&mut report, &conf, tol, true);

    let a = &rep.analysis;
    report.table("theta", a.lee.theta());
    report.table("tau", a.tau);
    report.tensor("rho", &a.rho);
    report.table("sectional", sectional_table(&a.r, inst));
    report.table(
        "deviations",
        rep.deviations
            .iter()
            .map(|(n, d)| json!({ "table": n, "relative": d }))
            .collect::<Vec<_>>(),
    );
    Ok(report)
}

fn conformal_checks(report: &mut Report, conf: &ConformalReport, tol: f64, base_is_w1: bool) {
    report.check(Check::at_most("conformal_levi_civita_law", conf.levi_civita_law, tol));
    report.check(Check::at_most(
        "conformal_levi_civita_torsion",
        conf.levi_civita_torsion,
        tol,
    ));
    report.check(Check::at_most(
        "conformal_levi_civita_compatibility",
        conf.levi_civita_compatibility,
        tol,
    ));
    report.check(Check::at_most("conformal_lee_law", conf.lee_law, tol));
    report.check(Check::at_most("conformal_lee_duality", conf.lee_duality, tol));
    report.check(Check::at_most("conformal_weyl", conf.weyl, tol));
    if base_is_w1 {
        report.check(Check::at_most("conformal_d_law", conf.d_law, tol));
        report.check(Check::at_most("conformal_d_curvature", conf.thm_7_1, tol));
        report.check(Check::condition("conformal_w1_closure", conf.flags.is_w1));
    }
}

pub fn analyze(loaded: &Loaded, eps: f64) -> Result<Report, CommandError> {
    let inst = &loaded.instance;
    let mut report = Report::new("analyze", loaded.description.clone(), eps);
    if !structure_checks(&mut report, inst, eps) {
        report.notice("structure validation failed; curvature analysis skipped");
        return Ok(report);
    }
    let scale = instance_scale(inst);
    let tol = eps * scale;
    let metric = inst.metric();
    let alg = inst.algebra();

    let flags = class_flags(inst, eps)?;
    report.flag("w0", flags.is_w0);
    report.flag("w1", flags.is_w1);
    report.flag("w1_plus_w2", flags.is_product);
    report.flag("abelian_structure", is_abelian_structure(inst, eps));
    report.table(
        "class_residuals",
        json!({ "f_max": flags.f_max, "w1": flags.w1_residual, "nijenhuis": flags.nijenhuis_max }),
    );

    let lc = levi_civita_coeffs(inst)?;
    report.check(Check::at_most("levi_civita_torsion_free", lc.torsion_defect(alg), tol));
    report.check(Check::at_most("levi_civita_metric", lc.compatibility_defect(inst), tol));

    let a = DAnalysis::new(inst)?;
    report.check(Check::at_most(
        "curvature_symmetries",
        curvature_symmetries(&a.r).max(),
        tol,
    ));
    let w = weyl_tensor(&a.r, &a.rho, a.tau, metric);
    report.check(Check::at_most("weyl_trace_free", ricci_trace_defect(&w, metric), tol));

    report.table("theta", a.lee.theta());
    report.tensor("gamma", a.lc.gamma());
    report.tensor("R", &a.r);
    report.tensor("rho", &a.rho);
    report.table("tau", a.tau);
    report.table("sectional", sectional_table(&a.r, inst));
    report.tensor("weyl", &w);

    if !flags.is_w1 {
        report.notice("instance is not of class W1: the connection D is not natural, D-based checks skipped");
        return Ok(report);
    }

    let tol = tol * (1.0 + a.lee.norm_sq());
    let (dg, dp) = a.d.naturality_defects(inst);
    report.check(Check::at_most("d_metric", dg, tol));
    report.check(Check::at_most("d_structure", dp, tol));
    report.check(Check::at_most("d_skew", a.d.skew_defect(), tol));
    report.check(Check::at_most("d_torsion_split", a.d.torsion_split_defect(), tol));
    report.check(Check::at_most(
        "d_torsion_reconstruction",
        a.d.torsion_reconstruction_defect(alg, metric),
        tol,
    ));
    report.check(Check::at_most(
        "torsion_identities",
        torsion_identities(inst, &a.d, a.lee.theta()).max(),
        tol,
    ));
    report.check(Check::at_most(
        "lee_derivative_relation",
        lee_derivative_relation(inst, &a.d, &a.lee)?,
        tol,
    ));
    report.check(Check::at_most("curvature_relation", a.curvature_relation(metric), tol));
    let rs = a.ricci_scalar(metric);
    report.check(Check::at_most("ricci_relation", rs.ricci_residual, tol));
    report.check(Check::at_most("scalar_relation", rs.scalar_residual, tol));
    report.check(Check::at_most("weyl_invariance", a.weyl_invariance(metric), tol));

    let p_crit = p_curvature_criterion(inst, &a.d, &a.lee, eps)?;
    report.check(Check::condition(
        "p_tensor_criterion",
        p_crit.equivalence_holds && p_crit.closedness_agrees,
    ));
    let parallel = has_parallel_torsion(inst, &a.d, &a.lee, eps)?;
    report.check(Check::condition(
        "parallel_torsion_equivalence",
        parallel.equivalence_holds,
    ));
    let p_tensor = is_riemannian_p_tensor(&a.r_prime, inst.structure(), tol);
    let flat = flat_d_report(inst, &a.d, &a.lee, eps)?;
    report.flag("rprime_is_p_tensor", p_tensor.verdict);
    report.flag("parallel_torsion", parallel.verdict);
    report.flag("d_flat", flat.is_flat);
    if let Some(wm) = flat.weyl_max {
        report.check(Check::at_most("flat_d_weyl_zero", wm, tol));
    }
    if let Some(r) = flat.parallel_curvature_residual {
        report.check(Check::at_most("parallel_torsion_curvature", r, tol));
    }
    if let Some(fp) = flat.flat_parallel {
        report.check(Check::at_most("flat_parallel_curvature", fp.curvature, tol));
        report.check(Check::at_most("flat_parallel_ricci", fp.ricci, tol));
        report.check(Check::at_most("flat_parallel_scalar", fp.scalar, tol));
        report.check(Check::at_most("flat_parallel_dr", fp.dr, tol));
        if let Some(neg) = fp.tau_negative {
            report.check(Check::condition("flat_parallel_tau_negative", neg));
        }
    }

    report.tensor("D", a.d.coeffs.gamma());
    report.tensor("T", &a.d.t);
    report.tensor("Rprime", &a.r_prime);
    report.tensor("S", &a.s.s);
    report.table("trace_S", a.s.trace_s);
    Ok(report)
}

/// Adds the axiom checks; returns whether all of them pass.
fn structure_checks(report: &mut Report, inst: &RpmInstance, eps: f64) -> bool {
    let v = validate_structure(inst, eps);
    for c in &v.checks {
        report.check(Check::at_most(c.name, c.magnitude, c.tolerance).structural());
    }
    v.is_valid()
}

pub fn conformal(loaded: &Loaded, alpha: &[f64], eps: f64) -> Result<Report, CommandError> {
    let inst = &loaded.instance;
    let mut report = Report::new("conformal", loaded.description.clone(), eps);
    report.table("alpha", alpha);
    if !structure_checks(&mut report, inst, eps) {
        report.notice("structure validation failed; conformal checks skipped");
        return Ok(report);
    }
    let def = match ConformalDeformation::new(inst.algebra(), alpha, eps) {
        Ok(d) => d,
        Err(GeometryError::NotClosed(defect)) => {
            return Err(CommandError::NotClosed {
                message: not_closed_message(inst, alpha, defect),
            })
        }
        Err(e) => return Err(e.into()),
    };
    let conf = conformal_report(inst, &def, eps)?;
    let base_w1 = class_flags(inst, eps)?.is_w1;
    if !base_w1 {
        report.notice("base instance is not of class W1: D-based conformal checks skipped");
    }
    let tol = eps * instance_scale(inst) * (1.0 + sum_sq(alpha));
    conformal_checks(&mut report, &conf, tol, base_w1);
    report.flag("deformed_w1", conf.flags.is_w1);
    report.table("gradient", def.gradient(inst.metric()));
    Ok(report)
}

fn not_closed_message(inst: &RpmInstance, alpha: &[f64], defect: f64) -> String {
    let mut msg = format!(
        "α is not closed (defect {defect:.3e}): a closed 1-form must vanish on the derived subalgebra, spanned by"
    );
    for v in inst.algebra().derived_subalgebra() {
        let value: f64 = v.iter().zip(alpha).map(|(a, b)| a * b).sum();
        let comps: Vec<String> = v.iter().map(|x| format!("{:.4}", x + 0.0)).collect();
        msg.push_str(&format!("\n  ({})   α on it = {value:.4}", comps.join(", ")));
    }
    msg
}
