use serde::{Deserialize, Serialize};

use super::GroupError;

/// A finite group by its multiplication table on `0..order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinGroup {
    mul: Vec<Vec<usize>>,
    identity: usize,
    inv: Vec<usize>,
    labels: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupJson {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl FinGroup {
    pub fn from_table(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self, GroupError> {
        let m = table.len();
        if m == 0 || table.iter().any(|r| r.len() != m || r.iter().any(|&x| x >= m)) {
            return Err(GroupError::BadTable("table must be square with entries in 0..order".into()));
        }
        let identity = (0..m)
            .find(|&e| (0..m).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| GroupError::BadTable("no identity".into()))?;
        let mut inv = vec![0; m];
        for g in 0..m {
            inv[g] = (0..m)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or_else(|| GroupError::BadTable(format!("element {g} has no inverse")))?;
        }
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupError::BadTable(format!("not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        let labels = labels.unwrap_or_else(|| (0..m).map(|i| i.to_string()).collect());
        if labels.len() != m {
            return Err(GroupError::BadTable("one label per element".into()));
        }
        Ok(FinGroup { mul: table, identity, inv, labels })
    }

    pub fn cyclic(n: usize) -> Self {
        let t = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        let labels = (0..n).map(|i| if i == 0 { "e".to_string() } else { format!("g{i}") }).collect();
        Self::from_table(t, Some(labels)).expect("cyclic group")
    }

    /// `S_3` as permutations of `{0,1,2}` in lexicographic order of their images.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        // (στ)(i) = σ(τ(i))
        let t = perms.iter().map(|s| perms.iter().map(|t| idx([s[t[0]], s[t[1]], s[t[2]]])).collect()).collect();
        let labels = perms.iter().map(|p| format!("{}{}{}", p[0], p[1], p[2])).collect();
        Self::from_table(t, Some(labels)).expect("S3")
    }

    pub fn from_json(j: &GroupJson) -> Result<Self, GroupError> {
        if j.table.len() != j.order {
            return Err(GroupError::BadTable("order does not match the table".into()));
        }
        Self::from_table(j.table.clone(), j.labels.clone())
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson { order: self.order(), table: self.mul.clone(), labels: Some(self.labels.clone()) }
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, l: &str) -> Option<usize> {
        self.labels.iter().position(|x| x == l)
    }

    /// Sign of a permutation group element, when the labels are permutation words.
    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..self.order()).all(|b| self.mul(a, b) == self.mul(b, a)))
    }
}

/// Tuples in `G^len`, lexicographic, first entry most significant.
#[derive(Clone, Copy, Debug)]
pub struct Tuples {
    pub m: usize,
    pub len: usize,
}

impl Tuples {
    pub fn count(&self) -> usize {
        self.m.pow(self.len as u32)
    }

    pub fn decode(&self, mut idx: usize, out: &mut [usize]) {
        for i in (0..self.len).rev() {
            out[i] = idx % self.m;
            idx /= self.m;
        }
    }

    pub fn encode(&self, t: impl IntoIterator<Item = usize>) -> usize {
        t.into_iter().fold(0, |acc, g| acc * self.m + g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_is_a_nonabelian_group_of_order_6() {
        let g = FinGroup::symmetric3();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        assert_eq!(g.identity(), 0);
        for a in 0..6 {
            assert_eq!(g.mul(a, g.inv(a)), 0);
        }
    }

    #[test]
    fn rejects_non_groups() {
        assert!(FinGroup::from_table(vec![vec![0, 1], vec![1, 1]], None).is_err());
        assert!(FinGroup::from_table(vec![vec![0, 1], vec![0, 1]], None).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = FinGroup::cyclic(3);
        let s = serde_json::to_string(&g.to_json()).unwrap();
        assert_eq!(FinGroup::from_json(&serde_json::from_str(&s).unwrap()).unwrap(), g);
    }

    #[test]
    fn tuple_codec() {
        let t = Tuples { m: 3, len: 4 };
        let mut buf = [0; 4];
        for i in 0..t.count() {
            t.decode(i, &mut buf);
            assert_eq!(t.encode(buf), i);
        }
    }
}
