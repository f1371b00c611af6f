use std::sync::Arc;

use homalg::cechposet::{self, cech_multiplicative_check_with, GodementInstance};
use homalg::derived::{free_resolution, lemma_check, prop1_harness, strong_prop2_check, Mutation, RightResolution, Status, VerificationReport};
use homalg::groupcoh::{self, em_multiplicative_check_with, EmInstance, EmSetup, GModule, StandardResolution};
use homalg::liealg::{hochschild_multiplicative_check_with, HochschildOptions};

use crate::input::{MutationName, Problem};
use crate::{CliError, Theory, Timer};

pub const CHECKS: &[&str] = &["em-multiplicative", "cech-multiplicative", "hochschild-multiplicative", "sign-lemma", "prop1", "prop2"];

pub fn default_check(t: Theory) -> &'static str {
    match t {
        Theory::Group => "em-multiplicative",
        Theory::Cech => "cech-multiplicative",
        Theory::Lie => "hochschild-multiplicative",
        Theory::Engine => "sign-lemma",
    }
}

/// Fail beats a failed hypothesis, which beats a pass.
pub fn overall(reports: &[VerificationReport]) -> Status {
    if reports.iter().any(|r| r.status == Status::Fail) {
        Status::Fail
    } else if reports.iter().any(|r| r.status == Status::HypothesisFailed) {
        Status::HypothesisFailed
    } else {
        Status::Pass
    }
}

fn unsupported(check: &str, p: &Problem) -> CliError {
    let theory = match p {
        Problem::Group { .. } => "group",
        Problem::Engine { .. } => "engine",
        Problem::Cech { .. } => "cech",
        Problem::Lie { .. } => "lie",
    };
    if CHECKS.contains(&check) {
        CliError::input(format!("check {check:?} does not apply to theory {theory}"))
    } else {
        CliError::input(format!("unknown check {check:?}; expected one of {}", CHECKS.join(", ")))
    }
}

fn no_mutation(m: Option<Mutation>, check: &str) -> Result<(), CliError> {
    match m {
        Some(m) => Err(CliError::input(format!("mutation {m:?} is not supported by {check}"))),
        None => Ok(()),
    }
}

pub fn run_verify(p: &Problem, check: &str, window: usize, timer: &mut Timer) -> Result<Vec<VerificationReport>, CliError> {
    let reports = match (check, p) {
        ("em-multiplicative", Problem::Group { module, mutation }) => {
            let mut opts = groupcoh::default_options(module.group().order(), window);
            opts.mutation = *mutation;
            vec![em_multiplicative_check_with(module, &opts)?]
        }
        ("cech-multiplicative", Problem::Cech { sheaf, cover, mutation }) => {
            let mut opts = cechposet::default_options(sheaf.poset().size(), window);
            opts.mutation = *mutation;
            let mut r = cech_multiplicative_check_with(sheaf, cover, &opts)?;
            r.warnings.push("finite poset models only; smooth de Rham comparisons are out of scope".into());
            vec![r]
        }
        ("hochschild-multiplicative", Problem::Lie { module, pair, n_pbw, mutation }) => {
            if !pair.is_absolute() {
                let mut r = VerificationReport::new("hochschild-multiplicative", format!("dim 𝔨 = {}", pair.k.dim()));
                r.hypothesis("absolute case", false, "the Yoneda comparison is only checked for 𝔨 = 0");
                vec![r]
            } else {
                let opts = HochschildOptions {
                    n_pbw: n_pbw.unwrap_or(HochschildOptions::default().n_pbw),
                    negate_koszul_d1: *mutation == Some(MutationName::NegateKoszulD1),
                    flip_cup_sign: *mutation == Some(MutationName::FlipCupSign),
                };
                let run = hochschild_multiplicative_check_with(module.algebra(), module, window, &opts)?;
                vec![run.report]
            }
        }
        ("sign-lemma", Problem::Group { module, mutation } | Problem::Engine { module, mutation }) => {
            no_mutation(*mutation, check)?;
            sign_lemma(module, window, timer)?
        }
        ("prop1", Problem::Group { module, mutation } | Problem::Engine { module, mutation }) => {
            let mut opts = groupcoh::default_options(module.group().order(), window);
            opts.mutation = *mutation;
            let inst = EmInstance { setup: EmSetup::new(module, window)? };
            vec![prop1_harness(&inst, &opts)?]
        }
        ("prop1", Problem::Cech { sheaf, mutation, .. }) => {
            let mut opts = cechposet::default_options(sheaf.poset().size(), window);
            opts.mutation = *mutation;
            vec![prop1_harness(&GodementInstance::new(sheaf, window)?, &opts)?]
        }
        ("prop2", Problem::Group { module, mutation }) => {
            no_mutation(*mutation, check)?;
            vec![EmSetup::new(module, window)?.prop2_report()?]
        }
        ("prop2", Problem::Engine { module, mutation }) => {
            no_mutation(*mutation, check)?;
            let s = EmSetup::new(module, window)?;
            vec![strong_prop2_check(&s.p, s.res_v.as_ref(), &s.inv_v, window, None)?]
        }
        ("prop2", Problem::Cech { sheaf, mutation, .. }) => {
            no_mutation(*mutation, check)?;
            let (a, b) = GodementInstance::new(sheaf, window)?.prop2_reports()?;
            vec![a, b]
        }
        _ => return Err(unsupported(check, p)),
    };
    timer.stage(check);
    Ok(reports)
}

/// `can = (−1)^{n(n+1)/2} ψ` for `n = 1..=window` on the standard resolution of `V`.
fn sign_lemma(v: &GModule, window: usize, timer: &mut Timer) -> Result<Vec<VerificationReport>, CliError> {
    if window == 0 {
        return Err(CliError::input("sign-lemma needs window ≥ 1"));
    }
    let alg = v.group_algebra();
    let dense = Arc::new(StandardResolution::new(v, &alg, window + 1).to_dense()?);
    let p = Arc::new(free_resolution(dense.object(), window + 2)?);
    timer.stage("resolutions");
    (1..=window).map(|n| Ok(lemma_check(&p, &dense, n)?)).collect()
}
