use std::sync::Arc;

use homalg::cechposet::{cech_complex, cech_cup, SheafOnPoset};
use homalg::complexes::{cohomology, CochainComplex, CohomologySpace};
use homalg::derived::{free_resolution, yoneda, ExtSpace, HomIntoResolution};
use homalg::exactla::Scalar;
use homalg::groupcoh::{em_cup, GModule, InvariantCochains, StandardResolution};
use homalg::liealg::{ce_complex, LieModule};
use serde_json::{json, Value};

use crate::input::Problem;
use crate::{CliError, Timer};

/// `H^n` for `n ≤ window`; degrees the complex does not reach are `None`.
fn spaces(c: &CochainComplex, window: usize) -> Vec<Option<CohomologySpace>> {
    (0..=window as i64).map(|n| (n >= c.lo() && n <= c.hi()).then(|| cohomology(c, n))).collect()
}

fn dims(h: &[Option<CohomologySpace>]) -> Vec<usize> {
    h.iter().map(|s| s.as_ref().map_or(0, |s| s.dim)).collect()
}

fn coords(v: &[Scalar]) -> Vec<String> {
    v.iter().map(|c| c.to_string()).collect()
}

/// Products of the basis classes `α ∈ H^p(V)` and `β ∈ H^q(k)`, `p + q ≤ window`,
/// in the basis of `H^{p+q}(V)`.
fn table(
    hv: &[Option<CohomologySpace>],
    hk: &[Option<CohomologySpace>],
    mut cup: impl FnMut(&[Scalar], usize, &[Scalar], usize) -> Result<Vec<Scalar>, CliError>,
) -> Result<Vec<Value>, CliError> {
    let mut out = Vec::new();
    for p in 0..hv.len() {
        for q in 0..hv.len() - p {
            let (Some(a), Some(b)) = (&hv[p], &hk[q]) else { continue };
            for (i, alpha) in a.reps().iter().enumerate() {
                for (j, beta) in b.reps().iter().enumerate() {
                    let product = match &hv[p + q] {
                        Some(target) => target.classify(&cup(alpha, p, beta, q)?),
                        None => Vec::new(),
                    };
                    out.push(json!({"left": [p, i], "right": [q, j], "product": coords(&product)}));
                }
            }
        }
    }
    Ok(out)
}

pub fn run_compute(p: &Problem, window: usize, ring: bool, timer: &mut Timer) -> Result<Value, CliError> {
    let (dims, table) = match p {
        Problem::Group { module, .. } => group(module, window, ring, timer)?,
        Problem::Engine { module, .. } => engine(module, window, ring, timer)?,
        Problem::Cech { sheaf, cover, .. } => {
            let cs = cech_complex(sheaf, cover, window + 1)?;
            let hv = spaces(&cs.complex, window);
            timer.stage("cohomology");
            let table = if ring {
                let ck = cech_complex(&SheafOnPoset::constant(sheaf.poset().clone(), sheaf.field()), cover, window + 1)?;
                let hk = spaces(&ck.complex, window);
                let t = table(&hv, &hk, |a, p, b, q| Ok(cech_cup(&cs, &ck, a, p, b, q)?))?;
                timer.stage("ring");
                Some(t)
            } else {
                None
            };
            (dims(&hv), table)
        }
        Problem::Lie { module, pair, .. } => {
            let ce_v = ce_complex(pair, module)?;
            let hv = spaces(&ce_v.complex, window);
            timer.stage("cohomology");
            let table = if ring {
                let ce_k = ce_complex(pair, &LieModule::trivial(module.algebra().clone(), 1))?;
                let hk = spaces(&ce_k.complex, window);
                let t = table(&hv, &hk, |a, p, b, q| Ok(ce_v.cup(&ce_k, a, p, b, q)?))?;
                timer.stage("ring");
                Some(t)
            } else {
                None
            };
            (dims(&hv), table)
        }
    };
    let mut out = json!({"dims": dims});
    if let Some(t) = table {
        out["ring"] = Value::Array(t);
    }
    Ok(out)
}

type Computed = (Vec<usize>, Option<Vec<Value>>);

/// Invariant cochains of the standard resolution, `F(h_1..h_n) = f(e, h_1..h_n)`.
fn group(v: &GModule, window: usize, ring: bool, timer: &mut Timer) -> Result<Computed, CliError> {
    let alg = v.group_algebra();
    let inv = |w: &GModule| InvariantCochains::new(&Arc::new(StandardResolution::new(w, &alg, window + 1)));
    let inv_v = inv(v);
    let hv = spaces(inv_v.complex(), window);
    timer.stage("cohomology");
    if !ring {
        return Ok((dims(&hv), None));
    }
    let k = GModule::trivial(v.group().clone(), v.field(), 1);
    let inv_k = inv(&k);
    let hk = spaces(inv_k.complex(), window);
    let t = table(&hv, &hk, |a, p, b, q| Ok(em_cup(v.group(), v.field(), v.dim(), a, p, b, q)?))?;
    timer.stage("ring");
    Ok((dims(&hv), Some(t)))
}

/// `Ext_{k[G]}(k, V)` through a minimal free resolution; products are Yoneda composites.
fn engine(v: &GModule, window: usize, ring: bool, timer: &mut Timer) -> Result<Computed, CliError> {
    let alg = v.group_algebra();
    let k = GModule::trivial(v.group().clone(), v.field(), 1);
    let kmod = Arc::new(k.as_module(&alg));
    let vmod = Arc::new(v.as_module(&alg));
    let p = Arc::new(free_resolution(&kmod, window + 2)?);
    let ext_v = ExtSpace::new(&p, &vmod);
    let dims = (0..=window).map(|n| ext_v.dim(n)).collect::<Result<Vec<_>, _>>()?;
    timer.stage("ext");
    if !ring {
        return Ok((dims, None));
    }
    let ext_k = ExtSpace::new(&p, &kmod);
    let mut out = Vec::new();
    for a in 0..=window {
        for b in 0..=window - a {
            for i in 0..ext_v.dim(a)? {
                for j in 0..ext_k.dim(b)? {
                    let prod = yoneda(&ext_v.class(a, i)?, &ext_k.class(b, j)?)?;
                    let c = ext_v.classify(a + b, &prod.cocycle)?;
                    out.push(json!({"left": [a, i], "right": [b, j], "product": coords(&c)}));
                }
            }
        }
    }
    timer.stage("ring");
    Ok((dims, Some(out)))
}
