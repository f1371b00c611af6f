use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::derived::{AlgebraSpec, ModuleOverAlgebra};
use crate::exactla::{FieldSpec, Matrix, Scalar};

use super::{FinGroup, GroupError};

/// A finite-dimensional representation `ρ: G → GL(V)` over a field.
#[derive(Clone, Debug)]
pub struct GModule {
    group: Arc<FinGroup>,
    field: FieldSpec,
    dim: usize,
    action: Vec<Matrix>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GModuleJson {
    #[serde(default)]
    pub group_ref: String,
    pub field: FieldSpec,
    pub dim: usize,
    /// Row-major integer or rational literals, keyed by element label.
    pub action: BTreeMap<String, Vec<Vec<String>>>,
}

impl GModule {
    /// Checks `ρ(e) = 1` and `ρ(gh) = ρ(g)ρ(h)`.
    pub fn new(group: Arc<FinGroup>, field: FieldSpec, dim: usize, action: Vec<Matrix>) -> Result<Self, GroupError> {
        if action.len() != group.order() {
            return Err(GroupError::BadModule("one matrix per group element".into()));
        }
        if action.iter().any(|m| m.rows() != dim || m.cols() != dim || m.field() != field) {
            return Err(GroupError::BadModule("matrices must be dim × dim over the module field".into()));
        }
        if action[group.identity()] != Matrix::identity(field, dim) {
            return Err(GroupError::BadModule("identity does not act trivially".into()));
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                if action[group.mul(g, h)] != action[g].mul(&action[h]) {
                    return Err(GroupError::BadModule(format!("rho({g}{h}) != rho({g}) rho({h})")));
                }
            }
        }
        Ok(GModule { group, field, dim, action })
    }

    pub fn trivial(group: Arc<FinGroup>, field: FieldSpec, dim: usize) -> Self {
        let action = vec![Matrix::identity(field, dim); group.order()];
        GModule { group, field, dim, action }
    }

    /// `k[G]` with `g` permuting the basis by left multiplication.
    pub fn regular(group: Arc<FinGroup>, field: FieldSpec) -> Self {
        let m = group.order();
        let action = (0..m)
            .map(|g| {
                let mut a = Matrix::zeros(field, m, m);
                for h in 0..m {
                    a.set(group.mul(g, h), h, &field.one());
                }
                a
            })
            .collect();
        GModule { group, field, dim: m, action }
    }

    /// Generated by single matrices per listed element, extended multiplicatively.
    pub fn from_generators(group: Arc<FinGroup>, field: FieldSpec, dim: usize, gens: &[(usize, Matrix)]) -> Result<Self, GroupError> {
        let m = group.order();
        let mut act: Vec<Option<Matrix>> = vec![None; m];
        act[group.identity()] = Some(Matrix::identity(field, dim));
        let mut frontier = vec![group.identity()];
        while let Some(x) = frontier.pop() {
            for (g, a) in gens {
                let y = group.mul(*g, x);
                let val = a.mul(act[x].as_ref().unwrap());
                match &act[y] {
                    Some(v) if *v != val => return Err(GroupError::BadModule("generators do not define a representation".into())),
                    Some(_) => {}
                    None => {
                        act[y] = Some(val);
                        frontier.push(y);
                    }
                }
            }
        }
        let action: Option<Vec<Matrix>> = act.into_iter().collect();
        let action = action.ok_or_else(|| GroupError::BadModule("generators do not generate the group".into()))?;
        Self::new(group, field, dim, action)
    }

    pub fn from_json(group: Arc<FinGroup>, j: &GModuleJson) -> Result<Self, GroupError> {
        let mut gens = Vec::new();
        for (label, rows) in &j.action {
            let g = group.label_index(label).ok_or_else(|| GroupError::BadModule(format!("unknown element {label:?}")))?;
            if rows.len() != j.dim || rows.iter().any(|r| r.len() != j.dim) {
                return Err(GroupError::BadModule(format!("matrix for {label:?} is not {0}×{0}", j.dim)));
            }
            let ents: Result<Vec<Scalar>, _> = rows.iter().flatten().map(|s| j.field.parse_scalar(s)).collect();
            let ents = ents.map_err(|e| GroupError::BadModule(e.to_string()))?;
            gens.push((g, Matrix::from_entries(j.field, j.dim, j.dim, &ents)));
        }
        Self::from_generators(group, j.field, j.dim, &gens)
    }

    pub fn to_json(&self, group_ref: &str) -> GModuleJson {
        let action = (0..self.group.order())
            .map(|g| (self.group.labels()[g].clone(), self.action[g].to_string_rows()))
            .collect();
        GModuleJson { group_ref: group_ref.into(), field: self.field, dim: self.dim, action }
    }

    pub fn group(&self) -> &Arc<FinGroup> {
        &self.group
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rho(&self, g: usize) -> &Matrix {
        &self.action[g]
    }

    pub fn is_trivial(&self) -> bool {
        self.action.iter().all(|a| *a == Matrix::identity(self.field, self.dim))
    }

    pub fn group_algebra(&self) -> Arc<AlgebraSpec> {
        Arc::new(AlgebraSpec::group_algebra(self.field, self.group.table(), self.group.identity()).expect("group algebra"))
    }

    /// The same representation as a module over `k[G]` (basis of `k[G]` = group elements).
    pub fn as_module(&self, algebra: &Arc<AlgebraSpec>) -> ModuleOverAlgebra {
        ModuleOverAlgebra::dense(algebra.clone(), self.action.clone()).expect("representation is a module")
    }

    /// `V^G` as the columns of a basis matrix.
    pub fn fixed_space(&self) -> Matrix {
        let mut stacked = Matrix::zeros(self.field, 0, self.dim);
        for a in &self.action {
            stacked = stacked.vstack(&a.sub(&Matrix::identity(self.field, self.dim)));
        }
        stacked.kernel_basis()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_rep_of_z2_fixes_the_sum() {
        let g = Arc::new(FinGroup::cyclic(2));
        let f2 = FieldSpec::PrimeField(2);
        let r = GModule::regular(g, f2);
        let fix = r.fixed_space();
        assert_eq!(fix.cols(), 1);
        assert_eq!(fix.col(0), vec![f2.one(), f2.one()]);
    }

    #[test]
    fn rejects_non_representations() {
        let g = Arc::new(FinGroup::cyclic(3));
        let q = FieldSpec::Rationals;
        let bad = Matrix::from_i64_rows(q, &[vec![2]]);
        assert!(GModule::from_generators(g, q, 1, &[(1, bad)]).is_err());
    }

    #[test]
    fn json_by_generators() {
        let g = Arc::new(FinGroup::symmetric3());
        let j: GModuleJson = serde_json::from_value(serde_json::json!({
            "group_ref": "s3", "field": "Fp:2", "dim": 2,
            "action": {"021": [["1","1"],["0","1"]], "102": [["1","1"],["0","1"]]}
        }))
        .unwrap();
        let m = GModule::from_json(g.clone(), &j).unwrap();
        assert_eq!(m.fixed_space().cols(), 1);
        let back = GModule::from_json(g, &m.to_json("s3")).unwrap();
        assert_eq!(back.rho(3), m.rho(3));
    }
}
