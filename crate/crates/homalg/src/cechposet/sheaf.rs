use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::derived::{AlgebraSpec, BlockAction, ModuleOverAlgebra};
use crate::exactla::{kernel, FieldSpec, Matrix, Scalar, Subspace};

use super::{CechError, FinPoset};

/// A sheaf on the Alexandrov space of a poset: stalks `S_x` and restrictions
/// `S_x → S_y` for `x ≤ y`, functorial.
#[derive(Clone, Debug)]
pub struct SheafOnPoset {
    poset: Arc<FinPoset>,
    field: FieldSpec,
    stalks: Vec<usize>,
    restr: HashMap<(usize, usize), Matrix>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SheafJson {
    pub field: FieldSpec,
    pub stalks: Vec<usize>,
    /// Keys `"x<y"` for covering pairs; row-major literals.
    #[serde(default)]
    pub restrictions: BTreeMap<String, Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CoverJson {
    pub opens: Vec<Vec<usize>>,
}

impl SheafOnPoset {
    /// From restrictions along covering pairs; missing ones are zero. Every
    /// composite along chains of covers between the same endpoints must agree.
    pub fn new(
        poset: Arc<FinPoset>,
        field: FieldSpec,
        stalks: Vec<usize>,
        covering: &HashMap<(usize, usize), Matrix>,
    ) -> Result<Self, CechError> {
        let n = poset.size();
        if stalks.len() != n {
            return Err(CechError::BadSheaf("one stalk dimension per point".into()));
        }
        for (&(x, y), m) in covering {
            if x >= n || y >= n || !poset.covers(x, y) {
                return Err(CechError::BadSheaf(format!("{x}<{y} is not a covering pair")));
            }
            if m.rows() != stalks[y] || m.cols() != stalks[x] || m.field() != field {
                return Err(CechError::BadSheaf(format!("restriction {x}<{y} has the wrong shape")));
            }
        }
        let cov = |x: usize, y: usize| covering.get(&(x, y)).cloned().unwrap_or_else(|| Matrix::zeros(field, stalks[y], stalks[x]));
        // pairs by increasing length of the interval
        let mut pairs = poset.pairs();
        let span = |&(x, y): &(usize, usize)| (0..n).filter(|&z| poset.leq(x, z) && poset.leq(z, y)).count();
        pairs.sort_by_key(span);
        let mut restr: HashMap<(usize, usize), Matrix> = HashMap::new();
        for (x, y) in pairs {
            if x == y {
                restr.insert((x, y), Matrix::identity(field, stalks[x]));
                continue;
            }
            let mut val: Option<Matrix> = None;
            for z in (0..n).filter(|&z| poset.covers(x, z) && poset.leq(z, y)) {
                let m = restr[&(z, y)].mul(&cov(x, z));
                match &val {
                    None => val = Some(m),
                    Some(v) if *v != m => return Err(CechError::NotFunctorial(x, y)),
                    _ => {}
                }
            }
            restr.insert((x, y), val.expect("an interval has a cover"));
        }
        Ok(SheafOnPoset { poset, field, stalks, restr })
    }

    pub fn constant(poset: Arc<FinPoset>, field: FieldSpec) -> Self {
        let n = poset.size();
        let cov = poset
            .pairs()
            .into_iter()
            .filter(|&(x, y)| poset.covers(x, y))
            .map(|p| (p, Matrix::identity(field, 1)))
            .collect();
        Self::new(poset, field, vec![1; n], &cov).expect("constant sheaf")
    }

    /// Pushforward of `k` from `point`: stalk `k` on the closure `{x ≤ point}`.
    pub fn skyscraper(poset: Arc<FinPoset>, field: FieldSpec, point: usize) -> Self {
        let n = poset.size();
        let stalks = (0..n).map(|x| usize::from(poset.leq(x, point))).collect();
        let mut cov = HashMap::new();
        for x in 0..n {
            for y in 0..n {
                if poset.covers(x, y) && poset.leq(y, point) {
                    cov.insert((x, y), Matrix::identity(field, 1));
                }
            }
        }
        Self::new(poset, field, stalks, &cov).expect("skyscraper")
    }

    pub fn from_json(poset: Arc<FinPoset>, j: &SheafJson) -> Result<Self, CechError> {
        let mut cov = HashMap::new();
        for (key, rows) in &j.restrictions {
            let (a, b) = key.split_once('<').ok_or_else(|| CechError::BadSheaf(format!("bad key {key:?}")))?;
            let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| CechError::BadSheaf(format!("bad key {key:?}")));
            let (x, y) = (parse(a)?, parse(b)?);
            let r = rows.len();
            let c = rows.first().map_or(0, |v| v.len());
            let ents: Result<Vec<Scalar>, _> = rows.iter().flatten().map(|s| j.field.parse_scalar(s)).collect();
            let ents = ents.map_err(|e| CechError::BadSheaf(e.to_string()))?;
            if ents.len() != r * c {
                return Err(CechError::BadSheaf(format!("ragged matrix for {key:?}")));
            }
            cov.insert((x, y), Matrix::from_entries(j.field, r, c, &ents));
        }
        Self::new(poset, j.field, j.stalks.clone(), &cov)
    }

    pub fn poset(&self) -> &Arc<FinPoset> {
        &self.poset
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn stalk(&self, x: usize) -> usize {
        self.stalks[x]
    }

    pub fn stalks(&self) -> &[usize] {
        &self.stalks
    }

    pub fn restriction(&self, x: usize, y: usize) -> &Matrix {
        &self.restr[&(x, y)]
    }

    pub fn is_constant_k(&self) -> bool {
        self.stalks.iter().all(|&d| d == 1) && self.restr.values().all(|m| m.get(0, 0).is_one())
    }

    /// Compatible families `(s_x)_{x∈U}`, coordinates ordered as `U`.
    pub fn global_sections(&self, u: &[usize]) -> Result<Subspace, CechError> {
        if !self.poset.is_up_set(u) {
            return Err(CechError::NotOpen(u.to_vec()));
        }
        let mut off = HashMap::new();
        let mut total = 0;
        for &x in u {
            off.insert(x, total);
            total += self.stalks[x];
        }
        let mut eqs = Matrix::zeros(self.field, 0, total);
        for &x in u {
            for &y in u {
                if self.poset.covers(x, y) && self.stalks[y] > 0 {
                    let mut blk = Matrix::zeros(self.field, self.stalks[y], total);
                    blk.set_block(0, off[&x], self.restriction(x, y));
                    blk.set_block(0, off[&y], &Matrix::identity(self.field, self.stalks[y]).neg());
                    eqs = eqs.vstack(&blk);
                }
            }
        }
        Ok(kernel(&eqs))
    }

    /// The sheaf as a module over the incidence algebra of `pairs` (basis `e_{x→y}`).
    pub fn as_module(&self, algebra: &Arc<AlgebraSpec>, pairs: &[(usize, usize)]) -> ModuleOverAlgebra {
        let n = self.poset.size();
        let mut offsets = Vec::with_capacity(n);
        let mut acc = 0;
        for x in 0..n {
            offsets.push(acc);
            acc += self.stalks[x];
        }
        let mut pool = Vec::new();
        let mut ops = Vec::new();
        for &(x, y) in pairs {
            if self.stalks[x] > 0 && self.stalks[y] > 0 {
                pool.push(self.restriction(x, y).clone());
                ops.push(vec![(x, y, pool.len() - 1)]);
            } else {
                ops.push(vec![]);
            }
        }
        let ba = BlockAction { offsets, sizes: self.stalks.clone(), pool, ops };
        ModuleOverAlgebra::blocks(algebra.clone(), ba).expect("stalk blocks are adapted")
    }
}

/// The incidence algebra of all pairs `x ≤ y`, with that basis order.
pub fn incidence_algebra(poset: &FinPoset, field: FieldSpec) -> (Arc<AlgebraSpec>, Vec<(usize, usize)>) {
    let pairs = poset.pairs();
    let a = AlgebraSpec::incidence_algebra(field, &pairs).expect("a poset is transitive");
    (Arc::new(a), pairs)
}

/// Up-sets covering the poset; intersections are computed on demand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenCover {
    opens: Vec<Vec<usize>>,
}

impl OpenCover {
    pub fn new(poset: &FinPoset, opens: Vec<Vec<usize>>) -> Result<Self, CechError> {
        let mut seen = vec![false; poset.size()];
        let mut out = Vec::new();
        for mut u in opens {
            u.sort_unstable();
            u.dedup();
            if u.iter().any(|&x| x >= poset.size()) || !poset.is_up_set(&u) {
                return Err(CechError::NotOpen(u));
            }
            for &x in &u {
                seen[x] = true;
            }
            out.push(u);
        }
        if seen.iter().any(|s| !s) {
            return Err(CechError::NotACover);
        }
        Ok(OpenCover { opens: out })
    }

    /// Minimal opens of the minimal points (vertex stars for a face poset).
    pub fn stars(poset: &FinPoset) -> Self {
        Self::new(poset, poset.minimal().into_iter().map(|v| poset.up_set(v)).collect()).expect("stars cover")
    }

    pub fn from_json(poset: &FinPoset, j: &CoverJson) -> Result<Self, CechError> {
        Self::new(poset, j.opens.clone())
    }

    pub fn len(&self) -> usize {
        self.opens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.opens.is_empty()
    }

    pub fn opens(&self) -> &[Vec<usize>] {
        &self.opens
    }

    pub fn intersection(&self, idx: &[usize]) -> Vec<usize> {
        let mut it = idx.iter();
        let mut cur = self.opens[*it.next().expect("nonempty index")].clone();
        for &i in it {
            cur.retain(|x| self.opens[i].binary_search(x).is_ok());
        }
        cur
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cechposet::face_poset;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn circle() -> Arc<FinPoset> {
        Arc::new(face_poset(&[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap())
    }

    #[test]
    fn sections_examples() {
        let p = circle();
        let c = SheafOnPoset::constant(p.clone(), Q);
        let all: Vec<usize> = (0..p.size()).collect();
        assert_eq!(c.global_sections(&all).unwrap().dim(), 1);
        let two = Arc::new(FinPoset::new(vec![vec![true, false], vec![false, true]]).unwrap());
        assert_eq!(SheafOnPoset::constant(two, Q).global_sections(&[0, 1]).unwrap().dim(), 2);
        let top = p.maximal()[0];
        let sky = SheafOnPoset::skyscraper(p.clone(), Q, top);
        assert_eq!(sky.global_sections(&all).unwrap().dim(), 1);
        let other: Vec<usize> = p.up_set(p.maximal()[1]);
        assert_eq!(sky.global_sections(&other).unwrap().dim(), 0);
        assert!(c.global_sections(&[0]).is_err());
    }

    #[test]
    fn functoriality_is_enforced() {
        // the square 0 < 1, 2 < 3 with restrictions composing to different maps
        let leq = vec![
            vec![true, true, true, true],
            vec![false, true, false, true],
            vec![false, false, true, true],
            vec![false, false, false, true],
        ];
        let p = Arc::new(FinPoset::new(leq).unwrap());
        let one = Matrix::identity(Q, 1);
        let two = Matrix::from_i64_rows(Q, &[vec![2]]);
        let mut cov: HashMap<(usize, usize), Matrix> =
            [((0, 1), one.clone()), ((0, 2), one.clone()), ((1, 3), one.clone()), ((2, 3), one.clone())].into();
        assert!(SheafOnPoset::new(p.clone(), Q, vec![1; 4], &cov).is_ok());
        cov.insert((2, 3), two);
        assert!(matches!(SheafOnPoset::new(p, Q, vec![1; 4], &cov), Err(CechError::NotFunctorial(0, 3))));
    }

    #[test]
    fn module_is_a_module() {
        let p = circle();
        let (alg, pairs) = incidence_algebra(&p, Q);
        let m = SheafOnPoset::constant(p, Q).as_module(&alg, &pairs);
        m.check_axioms().unwrap();
    }

    #[test]
    fn covers_are_validated() {
        let p = circle();
        let s = OpenCover::stars(&p);
        assert_eq!(s.len(), 3);
        assert_eq!(s.intersection(&[0, 1]).len(), 1);
        assert!(s.intersection(&[0, 1, 2]).is_empty());
        assert!(matches!(OpenCover::new(&p, vec![p.up_set(0)]), Err(CechError::NotACover)));
    }
}
