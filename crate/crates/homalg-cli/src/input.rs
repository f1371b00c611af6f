use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use homalg::cechposet::{corpus, face_poset, CoverJson, FinPoset, OpenCover, SheafJson, SheafOnPoset, SpaceJson};
use homalg::derived::Mutation;
use homalg::exactla::{FieldSpec, Matrix, Scalar};
use homalg::groupcoh::{sign_module_f2, FinGroup, GModule, GModuleJson, GroupJson};
use homalg::liealg::{LieAlgebra, LieJson, LieModule, LieModuleJson, LieSubalgebraPair};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::{CliError, Theory};

/// Mutations accepted in input files; which ones apply depends on the theory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MutationName {
    FlipCupSign,
    BreakPhi,
    FlipProductSign,
    NegateKoszulD1,
}

impl MutationName {
    fn harness(self) -> Result<Mutation, CliError> {
        match self {
            MutationName::FlipCupSign => Ok(Mutation::FlipCupSign),
            MutationName::BreakPhi => Ok(Mutation::BreakPhi),
            MutationName::FlipProductSign => Ok(Mutation::FlipProductSign),
            MutationName::NegateKoszulD1 => Err(CliError::input("negate-koszul-d1 only applies to Lie inputs")),
        }
    }
}

pub enum Problem {
    Group { module: GModule, mutation: Option<Mutation> },
    Cech { sheaf: SheafOnPoset, cover: OpenCover, mutation: Option<Mutation> },
    Lie { module: LieModule, pair: LieSubalgebraPair, n_pbw: Option<usize>, mutation: Option<MutationName> },
    Engine { module: GModule, mutation: Option<Mutation> },
}

impl Problem {
    pub fn field(&self) -> FieldSpec {
        match self {
            Problem::Group { module, .. } | Problem::Engine { module, .. } => module.field(),
            Problem::Cech { sheaf, .. } => sheaf.field(),
            Problem::Lie { module, .. } => module.field(),
        }
    }
}

/// Reads every file as a JSON object and merges them; a key given twice must agree.
pub fn load_documents(paths: &[impl AsRef<Path>]) -> Result<Map<String, Value>, CliError> {
    let mut merged = Map::new();
    for p in paths {
        let p = p.as_ref();
        let text = std::fs::read_to_string(p).map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
        let doc: Value = serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
        let Value::Object(obj) = doc else {
            return Err(CliError::input(format!("{}: expected a JSON object", p.display())));
        };
        for (k, v) in obj {
            match merged.get(&k) {
                Some(old) if *old != v => return Err(CliError::input(format!("key {k:?} given twice with different values"))),
                _ => {
                    merged.insert(k, v);
                }
            }
        }
    }
    Ok(merged)
}

fn field_of(doc: &Map<String, Value>, cli: Option<FieldSpec>) -> Result<Option<FieldSpec>, CliError> {
    let own = match doc.get("field") {
        Some(v) => Some(parse::<FieldSpec>(v, "field")?),
        None => None,
    };
    agree(cli, own)
}

/// The field fixed so far, and the one a component brings with it; they must not conflict.
fn agree(a: Option<FieldSpec>, b: Option<FieldSpec>) -> Result<Option<FieldSpec>, CliError> {
    match (a, b) {
        (Some(x), Some(y)) if x != y => Err(CliError::input(format!("field conflict: {x} vs {y}"))),
        (x, y) => Ok(x.or(y)),
    }
}

fn parse<T: DeserializeOwned>(v: &Value, what: &str) -> Result<T, CliError> {
    serde_json::from_value(v.clone()).map_err(|e| CliError::input(format!("{what}: {e}")))
}

fn mutation(doc: &Map<String, Value>) -> Result<Option<MutationName>, CliError> {
    doc.get("mutation").map(|v| parse::<MutationName>(v, "mutation")).transpose()
}

pub fn problem(theory: Theory, doc: &Map<String, Value>, cli_field: Option<FieldSpec>) -> Result<Problem, CliError> {
    let field = field_of(doc, cli_field)?;
    let known: &[&str] = match theory {
        Theory::Group | Theory::Engine => &["group", "module", "field", "mutation"],
        Theory::Cech => &["space", "sheaf", "cover", "field", "mutation"],
        Theory::Lie => &["algebra", "module", "subalgebra", "field", "mutation", "n_pbw"],
    };
    if let Some(k) = doc.keys().find(|k| !known.contains(&k.as_str())) {
        return Err(CliError::input(format!("unknown key {k:?} for theory {theory}")));
    }
    match theory {
        Theory::Group | Theory::Engine => {
            let g = Arc::new(group(doc.get("group").ok_or_else(|| CliError::input("missing \"group\""))?)?);
            let module = gmodule(g, doc.get("module"), field)?;
            let mutation = mutation(doc)?.map(MutationName::harness).transpose()?;
            Ok(if theory == Theory::Group { Problem::Group { module, mutation } } else { Problem::Engine { module, mutation } })
        }
        Theory::Cech => {
            let poset = Arc::new(space(doc.get("space").ok_or_else(|| CliError::input("missing \"space\""))?)?);
            let sheaf = sheaf(poset.clone(), doc.get("sheaf"), field)?;
            let cover = match doc.get("cover") {
                None => OpenCover::stars(&poset),
                Some(Value::String(s)) if s == "stars" => OpenCover::stars(&poset),
                Some(v) => OpenCover::from_json(&poset, &parse::<CoverJson>(v, "cover")?)?,
            };
            let mutation = mutation(doc)?.map(MutationName::harness).transpose()?;
            Ok(Problem::Cech { sheaf, cover, mutation })
        }
        Theory::Lie => {
            let g = Arc::new(lie_algebra(doc.get("algebra").ok_or_else(|| CliError::input("missing \"algebra\""))?, field)?);
            let module = match doc.get("module") {
                None => LieModule::trivial(g.clone(), 1),
                Some(Value::String(s)) if s == "trivial" => LieModule::trivial(g.clone(), 1),
                Some(Value::String(s)) if s == "adjoint" => LieModule::adjoint(g.clone()),
                Some(v) => LieModule::from_json(g.clone(), &parse::<LieModuleJson>(v, "module")?)?,
            };
            let pair = match doc.get("subalgebra") {
                None => LieSubalgebraPair::absolute(g.clone()),
                Some(v) => {
                    let rows: Vec<Vec<String>> = parse(v, "subalgebra")?;
                    LieSubalgebraPair::new(g.clone(), &literal_matrix(g.field(), g.dim(), &rows)?)?
                }
            };
            let n_pbw = doc.get("n_pbw").map(|v| parse::<usize>(v, "n_pbw")).transpose()?;
            let mutation = mutation(doc)?;
            if matches!(mutation, Some(MutationName::BreakPhi | MutationName::FlipProductSign)) {
                return Err(CliError::input("Lie inputs accept the mutations negate-koszul-d1 and flip-cup-sign"));
            }
            Ok(Problem::Lie { module, pair, n_pbw, mutation })
        }
    }
}

/// `"Z/n"`, `"S3"` or an explicit multiplication table.
fn group(v: &Value) -> Result<FinGroup, CliError> {
    if let Value::String(s) = v {
        if s == "S3" {
            return Ok(FinGroup::symmetric3());
        }
        let n = s
            .strip_prefix("Z/")
            .and_then(|n| n.parse::<usize>().ok())
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::input(format!("unknown group {s:?}")))?;
        return Ok(FinGroup::cyclic(n));
    }
    Ok(FinGroup::from_json(&parse::<GroupJson>(v, "group")?)?)
}

fn gmodule(g: Arc<FinGroup>, v: Option<&Value>, field: Option<FieldSpec>) -> Result<GModule, CliError> {
    let named = |f: Option<FieldSpec>| f.unwrap_or(FieldSpec::Rationals);
    match v {
        None => Ok(GModule::trivial(g, named(field), 1)),
        Some(Value::String(s)) => match s.as_str() {
            "trivial" => Ok(GModule::trivial(g, named(field), 1)),
            "regular" => Ok(GModule::regular(g, named(field))),
            "sign-f2" => {
                agree(field, Some(FieldSpec::PrimeField(2)))?;
                Ok(sign_module_f2(g)?)
            }
            _ => Err(CliError::input(format!("unknown module {s:?}"))),
        },
        Some(v) => {
            let j: GModuleJson = parse(v, "module")?;
            agree(field, Some(j.field))?;
            Ok(GModule::from_json(g, &j)?)
        }
    }
}

/// `"circle"`, `"sphere"`, `"torus"`, `{facets}` or `{poset}`.
fn space(v: &Value) -> Result<FinPoset, CliError> {
    let facets = match v {
        Value::String(s) => match s.as_str() {
            "circle" => corpus::circle(),
            "sphere" => corpus::sphere(),
            "torus" => corpus::torus(),
            _ => return Err(CliError::input(format!("unknown space {s:?}"))),
        },
        _ => return Ok(FinPoset::from_json(&parse::<SpaceJson>(v, "space")?)?),
    };
    Ok(face_poset(&facets)?)
}

fn sheaf(poset: Arc<FinPoset>, v: Option<&Value>, field: Option<FieldSpec>) -> Result<SheafOnPoset, CliError> {
    let f = field.unwrap_or(FieldSpec::Rationals);
    match v {
        None => Ok(SheafOnPoset::constant(poset, f)),
        Some(Value::String(s)) if s == "constant" => Ok(SheafOnPoset::constant(poset, f)),
        Some(Value::Object(o)) if o.contains_key("skyscraper") => {
            let point = match &o["skyscraper"] {
                Value::Number(n) => n.as_u64().map(|n| n as usize).filter(|&n| n < poset.size()),
                Value::String(l) => poset.labels().iter().position(|x| x == l),
                _ => None,
            }
            .ok_or_else(|| CliError::input(format!("bad skyscraper point {}", o["skyscraper"])))?;
            Ok(SheafOnPoset::skyscraper(poset, f, point))
        }
        Some(v) => {
            let j: SheafJson = parse(v, "sheaf")?;
            agree(field, Some(j.field))?;
            Ok(SheafOnPoset::from_json(poset, &j)?)
        }
    }
}

/// `"abelian:n"`, `"heisenberg"`, `"sl2"` or explicit structure constants.
fn lie_algebra(v: &Value, field: Option<FieldSpec>) -> Result<LieAlgebra, CliError> {
    let f = field.unwrap_or(FieldSpec::Rationals);
    if let Value::String(s) = v {
        let g = match s.as_str() {
            "heisenberg" => LieAlgebra::heisenberg(f),
            "sl2" => LieAlgebra::sl2(f),
            _ => {
                let n = s
                    .strip_prefix("abelian:")
                    .and_then(|n| n.parse::<usize>().ok())
                    .ok_or_else(|| CliError::input(format!("unknown Lie algebra {s:?}")))?;
                LieAlgebra::abelian(f, n)
            }
        };
        return Ok(g?);
    }
    let j: LieJson = parse(v, "algebra")?;
    agree(field, Some(j.field))?;
    Ok(LieAlgebra::from_json(&j)?)
}

/// Row-major literals with `rows` rows.
fn literal_matrix(f: FieldSpec, rows: usize, lit: &[Vec<String>]) -> Result<Matrix, CliError> {
    if lit.len() != rows {
        return Err(CliError::input(format!("expected {rows} rows, got {}", lit.len())));
    }
    let cols = lit.first().map_or(0, |r| r.len());
    let parsed: Vec<Vec<Scalar>> = lit
        .iter()
        .map(|r| {
            if r.len() != cols {
                return Err(CliError::input("ragged matrix"));
            }
            r.iter().map(|s| f.parse_scalar(s).map_err(|e| CliError::input(e.to_string()))).collect()
        })
        .collect::<Result<_, _>>()?;
    Ok(Matrix::from_rows(f, cols, &parsed))
}

/// Canonical echo of the problem, independent of file layout.
pub fn describe(p: &Problem) -> Value {
    let mut m = BTreeMap::new();
    m.insert("field", Value::String(p.field().label()));
    match p {
        Problem::Group { module, mutation } | Problem::Engine { module, mutation } => {
            let g = module.group();
            m.insert("group", serde_json::to_value(g.to_json()).expect("group json"));
            m.insert("module", serde_json::to_value(module.to_json("G")).expect("module json"));
            m.insert("mutation", serde_json::to_value(mutation).expect("mutation json"));
        }
        Problem::Cech { sheaf, cover, mutation } => {
            let poset = sheaf.poset();
            m.insert("space_size", Value::from(poset.size()));
            m.insert("cover", serde_json::to_value(cover.opens()).expect("cover json"));
            m.insert("stalks", serde_json::to_value(sheaf.stalks()).expect("stalks json"));
            m.insert("constant", Value::Bool(sheaf.is_constant_k()));
            m.insert("mutation", serde_json::to_value(mutation).expect("mutation json"));
        }
        Problem::Lie { module, pair, n_pbw, mutation } => {
            m.insert("algebra", serde_json::to_value(module.algebra().to_json()).expect("lie json"));
            m.insert("module", serde_json::to_value(module.to_json()).expect("module json"));
            m.insert("subalgebra", serde_json::to_value(pair.k.basis.to_string_rows()).expect("rows"));
            m.insert("n_pbw", serde_json::to_value(n_pbw).expect("n_pbw"));
            m.insert("mutation", serde_json::to_value(mutation).expect("mutation json"));
        }
    }
    serde_json::to_value(m).expect("problem json")
}
