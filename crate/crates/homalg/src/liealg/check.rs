use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::json;

use crate::complexes::{cohomology, CohomologySpace};
use crate::derived::VerificationReport;
use crate::exactla::{vecops, Scalar};

use super::{ce_complex, ce_cup, KoszulResolution, LieAlgebra, LieError, LieModule, LieSubalgebraPair};

pub const MAX_ESCALATIONS: usize = 3;

#[derive(Clone, Debug)]
pub struct HochschildOptions {
    pub n_pbw: usize,
    /// Run against a Koszul complex whose `∂_1` has the wrong sign.
    pub negate_koszul_d1: bool,
    /// Negate `α ∧ β` whenever `deg β > 0`.
    pub flip_cup_sign: bool,
}

impl Default for HochschildOptions {
    fn default() -> Self {
        HochschildOptions { n_pbw: 2, negate_koszul_d1: false, flip_cup_sign: false }
    }
}

#[derive(Clone, Debug)]
pub struct HochschildRun {
    pub report: VerificationReport,
    /// The PBW truncation every lift was finally computed and verified in.
    pub n_pbw: usize,
    pub escalations: usize,
}

/// `Θ_p = (-1)^{p(p+1)/2}` identifies CE cochains with `Hom_U(U ⊗ ⋀^p, −)`.
fn theta(p: usize) -> i64 {
    (p * (p + 1) / 2) as i64
}

fn signed(v: &[Scalar], e: i64) -> Vec<Scalar> {
    v.iter().map(|c| c.clone().signed(e)).collect()
}

pub fn hochschild_multiplicative_check(
    g: &Arc<LieAlgebra>,
    v: &LieModule,
    window: usize,
    n_pbw: usize,
) -> Result<VerificationReport, LieError> {
    let opts = HochschildOptions { n_pbw, ..Default::default() };
    Ok(hochschild_multiplicative_check_with(g, v, window, &opts)?.report)
}

/// Wedge products of CE classes against Yoneda products of their images in
/// `Ext_U(k, −)`, retried with `N + 2` whenever a lift leaves the truncation.
pub fn hochschild_multiplicative_check_with(
    g: &Arc<LieAlgebra>,
    v: &LieModule,
    window: usize,
    opts: &HochschildOptions,
) -> Result<HochschildRun, LieError> {
    if v.algebra() != g {
        return Err(LieError::CoefficientMismatch);
    }
    let (mut report, n_pbw, escalations) = escalate(opts.n_pbw, |n| run(g, v, window, n, opts))?;
    if escalations > 0 {
        report.warnings.push(format!("PBW truncation raised from {} to {n_pbw}", opts.n_pbw));
    }
    Ok(HochschildRun { report, n_pbw, escalations })
}

/// Retries `attempt` with `N → N + 2` on overflow, at most `MAX_ESCALATIONS` times.
fn escalate<T>(start: usize, mut attempt: impl FnMut(usize) -> Result<T, LieError>) -> Result<(T, usize, usize), LieError> {
    let mut n = start.max(1);
    let mut escalations = 0;
    loop {
        match attempt(n) {
            Ok(t) => return Ok((t, n, escalations)),
            Err(LieError::TruncationOverflow(d)) if escalations < MAX_ESCALATIONS => {
                n = (n + 2).max(d);
                escalations += 1;
            }
            Err(e) => return Err(e),
        }
    }
}

fn run(g: &Arc<LieAlgebra>, v: &LieModule, window: usize, n: usize, opts: &HochschildOptions) -> Result<VerificationReport, LieError> {
    let f = g.field();
    let trivial = LieModule::trivial(g.clone(), 1);
    let pair = LieSubalgebraPair::absolute(g.clone());
    let mut report = VerificationReport::new(
        "hochschild-multiplicative",
        format!("dim 𝔤 = {}, dim V = {}, field {}", g.dim(), v.dim(), f.label()),
    );
    report.hypothesis("characteristic 0", f.characteristic() == 0, "");
    report.hypothesis("absolute case", true, "𝔨 = 0");
    let koszul = KoszulResolution::new(g, n, opts.negate_koszul_d1)?;
    let top = g.dim().min(window);
    let ce_v = ce_complex(&pair, v)?;
    let ce_k = ce_complex(&pair, &trivial)?;
    let hom_v = koszul.hom_complex(v);
    let hom_k = koszul.hom_complex(&trivial);

    // Θ is a chain isomorphism CE → Hom_U(Koszul, −), checked as matrices.
    for (name, ce, hom) in [("V", &ce_v, &hom_v), ("k", &ce_k, &hom_k)] {
        for p in 0..top {
            let lhs = hom.d(p as i64).signed(theta(p));
            let rhs = ce.complex.d(p as i64).signed(theta(p + 1));
            report.checks += 1;
            if lhs != rhs {
                report.fail(json!({"stage": "theta", "coefficients": name, "degree": p}));
            }
        }
    }

    let hv: Vec<CohomologySpace> = (0..=top).map(|p| cohomology(&ce_v.complex, p as i64)).collect();
    let hk: Vec<CohomologySpace> = (0..=top).map(|p| cohomology(&ce_k.complex, p as i64)).collect();
    let ext_v: Vec<CohomologySpace> = (0..=top).map(|p| cohomology(&hom_v, p as i64)).collect();
    let rho_words = koszul.pbw().represent(v);
    let mut lifts = BTreeMap::new();
    for p in 0..=top {
        for q in 0..=(top - p) {
            report.degrees_checked.push(vec![p as i64, q as i64]);
            for (bi, beta) in hk[p].reps().iter().enumerate() {
                let key = (p, bi);
                if !lifts.contains_key(&key) {
                    let lift = koszul.lift(&signed(beta, theta(p)), p, top - p)?;
                    report.checks += 1;
                    if !koszul.verify_lift(&lift)? {
                        report.fail(json!({"stage": "lift", "degree": p, "class": bi}));
                    }
                    lifts.insert(key, lift);
                }
                let lift = &lifts[&key];
                for (ai, alpha) in hv[q].reps().iter().enumerate() {
                    let mut wedge = ce_cup(&ce_v.wedge, f, v.dim(), alpha, q, beta, p)?;
                    if opts.flip_cup_sign && p > 0 {
                        wedge = vecops::neg(&wedge);
                    }
                    let lhs = ext_v[p + q].classify(&signed(&wedge, theta(p + q)));
                    let prod = koszul.compose(v, &rho_words, &signed(alpha, theta(q)), q, lift);
                    report.checks += 1;
                    if !vecops::is_zero(&hom_v.apply_d((p + q) as i64, &prod)) {
                        report.fail(json!({"stage": "yoneda cocycle", "p": p, "q": q}));
                        continue;
                    }
                    let rhs = ext_v[p + q].classify(&prod);
                    if lhs != rhs {
                        report.fail(json!({
                            "stage": "product",
                            "p": p,
                            "q": q,
                            "alpha": ai,
                            "beta": bi,
                            "wedge": lhs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                            "yoneda": rhs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                        }));
                    }
                }
            }
        }
    }
    Ok(report)
}
