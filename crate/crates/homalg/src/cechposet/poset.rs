use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::CechError;

/// A finite poset on `0..size`; opens of the associated space are the up-sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinPoset {
    leq: Vec<Vec<bool>>,
    labels: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PosetJson {
    pub size: usize,
    pub leq: Vec<Vec<bool>>,
}

/// `{facets: [[v…]…]}` or `{poset: {size, leq}}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum SpaceJson {
    Facets { facets: Vec<Vec<usize>> },
    Poset { poset: PosetJson },
}

impl FinPoset {
    pub fn new(leq: Vec<Vec<bool>>) -> Result<Self, CechError> {
        let n = leq.len();
        if leq.iter().any(|r| r.len() != n) {
            return Err(CechError::BadPoset("relation matrix must be square".into()));
        }
        for x in 0..n {
            if !leq[x][x] {
                return Err(CechError::BadPoset(format!("not reflexive at {x}")));
            }
            for y in 0..n {
                if x != y && leq[x][y] && leq[y][x] {
                    return Err(CechError::BadPoset(format!("not antisymmetric at ({x},{y})")));
                }
                for z in 0..n {
                    if leq[x][y] && leq[y][z] && !leq[x][z] {
                        return Err(CechError::BadPoset(format!("not transitive at ({x},{y},{z})")));
                    }
                }
            }
        }
        let labels = (0..n).map(|i| i.to_string()).collect();
        Ok(FinPoset { leq, labels })
    }

    pub fn from_json(j: &SpaceJson) -> Result<Self, CechError> {
        match j {
            SpaceJson::Facets { facets } => face_poset(facets),
            SpaceJson::Poset { poset } => {
                if poset.leq.len() != poset.size {
                    return Err(CechError::BadPoset("size does not match the relation".into()));
                }
                Self::new(poset.leq.clone())
            }
        }
    }

    pub fn size(&self) -> usize {
        self.leq.len()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq[x][y]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `y` covers `x`: `x < y` with nothing strictly between.
    pub fn covers(&self, x: usize, y: usize) -> bool {
        self.lt(x, y) && !(0..self.size()).any(|z| self.lt(x, z) && self.lt(z, y))
    }

    /// All pairs `x ≤ y`, lexicographic.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        (0..n).flat_map(|x| (0..n).filter(move |&y| self.leq[x][y]).map(move |y| (x, y))).collect()
    }

    pub fn up_set(&self, x: usize) -> Vec<usize> {
        (0..self.size()).filter(|&y| self.leq[x][y]).collect()
    }

    pub fn is_up_set(&self, u: &[usize]) -> bool {
        let s: BTreeSet<usize> = u.iter().copied().collect();
        u.iter().all(|&x| (0..self.size()).all(|y| !self.leq[x][y] || s.contains(&y)))
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.size()).filter(|&x| !(0..self.size()).any(|y| self.lt(x, y))).collect()
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.size()).filter(|&x| !(0..self.size()).any(|y| self.lt(y, x))).collect()
    }

    /// Strict chains `y_0 < ⋯ < y_n` with every `y_i` in `domain` (sorted ascending).
    pub fn chains_in(&self, domain: &[usize], n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n + 1);
        fn rec(p: &FinPoset, dom: &[usize], n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == n + 1 {
                out.push(cur.clone());
                return;
            }
            for &y in dom {
                if cur.last().map_or(true, |&l| p.lt(l, y)) {
                    cur.push(y);
                    rec(p, dom, n, cur, out);
                    cur.pop();
                }
            }
        }
        rec(self, domain, n, &mut cur, &mut out);
        out
    }

    /// The longest strict chain has `height + 1` elements.
    pub fn height(&self) -> usize {
        let all: Vec<usize> = (0..self.size()).collect();
        (0..self.size()).take_while(|&n| !self.chains_in(&all, n).is_empty()).last().unwrap_or(0)
    }
}

/// Nonempty faces of a simplicial complex ordered by inclusion; elements are
/// listed by dimension, then lexicographically.
pub fn face_poset(facets: &[Vec<usize>]) -> Result<FinPoset, CechError> {
    if facets.is_empty() || facets.iter().any(|f| f.is_empty()) {
        return Err(CechError::BadPoset("facets must be nonempty".into()));
    }
    let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
    for f in facets {
        let mut v = f.clone();
        v.sort_unstable();
        v.dedup();
        let k = v.len();
        for mask in 1u64..(1 << k) {
            faces.insert((0..k).filter(|i| mask >> i & 1 == 1).map(|i| v[i]).collect());
        }
    }
    let mut faces: Vec<Vec<usize>> = faces.into_iter().collect();
    faces.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    let n = faces.len();
    let sets: Vec<BTreeSet<usize>> = faces.iter().map(|f| f.iter().copied().collect()).collect();
    let leq = (0..n).map(|i| (0..n).map(|j| sets[i].is_subset(&sets[j])).collect()).collect();
    let mut p = FinPoset::new(leq)?;
    p.labels = faces
        .iter()
        .map(|f| f.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
        .collect();
    Ok(p)
}

/// Index of each chain in a fixed list.
#[derive(Clone, Debug, Default)]
pub struct ChainIndex {
    pub chains: Vec<Vec<usize>>,
    pos: HashMap<Vec<usize>, usize>,
}

impl ChainIndex {
    pub fn new(chains: Vec<Vec<usize>>) -> Self {
        let pos = chains.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        ChainIndex { chains, pos }
    }

    pub fn get(&self, c: &[usize]) -> Option<usize> {
        self.pos.get(c).copied()
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }
}
