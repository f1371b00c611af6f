use std::collections::HashMap;
use std::sync::Arc;

use crate::exactla::{vecops, FieldSpec, Matrix, Scalar};

use super::{LieAlgebra, LieError, LieModule};

type Sparse = Vec<(usize, Scalar)>;

/// PBW basis of `U(𝔤)` up to total degree `N`: nondecreasing words
/// `x_{i_1}⋯x_{i_k}`, ordered by degree, then lexicographically. Elements are
/// dense coordinate vectors, so `F_M U` is a prefix.
#[derive(Clone, Debug)]
pub struct Pbw {
    g: Arc<LieAlgebra>,
    n: usize,
    words: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    /// `filtered[M]` = number of words of degree `≤ M`.
    filtered: Vec<usize>,
    /// `left[i][w] = x_i · x_w` and `right[i][w] = x_w · x_i` for `deg w < N`.
    left: Vec<Vec<Sparse>>,
    right: Vec<Vec<Sparse>>,
}

fn words_of_degree(d: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for w in words_of_degree(d, k - 1) {
        let start = w.last().copied().unwrap_or(0);
        for i in start..d {
            let mut v = w.clone();
            v.push(i);
            out.push(v);
        }
    }
    out
}

fn add_sparse(acc: &mut HashMap<usize, Scalar>, terms: &[(usize, Scalar)], c: &Scalar) {
    for (k, v) in terms {
        let e = acc.entry(*k).or_insert_with(|| c.field().zero());
        *e += &(v * c);
    }
}

fn finish(acc: HashMap<usize, Scalar>) -> Sparse {
    let mut v: Sparse = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    v.sort_by_key(|t| t.0);
    v
}

impl Pbw {
    pub fn new(g: Arc<LieAlgebra>, n: usize) -> Self {
        let d = g.dim();
        let mut words = Vec::new();
        let mut filtered = Vec::new();
        for k in 0..=n {
            words.extend(words_of_degree(d, k));
            filtered.push(words.len());
        }
        let index: HashMap<Vec<usize>, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let mut p = Pbw { g, n, words, index, filtered, left: vec![], right: vec![] };
        let below = if n == 0 { 0 } else { p.filtered[n - 1] };
        let mut lmemo: HashMap<(usize, usize), Sparse> = HashMap::new();
        let mut rmemo: HashMap<(usize, usize), Sparse> = HashMap::new();
        for w in 0..below {
            for i in 0..d {
                p.left_rec(i, w, &mut lmemo);
                p.right_rec(w, i, &mut lmemo, &mut rmemo);
            }
        }
        p.left = (0..d).map(|i| (0..below).map(|w| lmemo[&(i, w)].clone()).collect()).collect();
        p.right = (0..d).map(|i| (0..below).map(|w| rmemo[&(w, i)].clone()).collect()).collect();
        p
    }

    fn left_rec(&self, i: usize, w: usize, memo: &mut HashMap<(usize, usize), Sparse>) -> Sparse {
        if let Some(r) = memo.get(&(i, w)) {
            return r.clone();
        }
        let f = self.g.field();
        let word = &self.words[w];
        let out = if word.first().is_none_or(|&j| i <= j) {
            let mut v = vec![i];
            v.extend_from_slice(word);
            vec![(self.index[&v], f.one())]
        } else {
            // x_i x_j r = x_j (x_i r) + [x_i, x_j] r
            let j = word[0];
            let rest = self.index[&word[1..].to_vec()];
            let mut acc = HashMap::new();
            for (t, c) in self.left_rec(i, rest, memo) {
                let jt = self.left_rec(j, t, memo);
                add_sparse(&mut acc, &jt, &c);
            }
            for (m, c) in self.g.structure(i, j).iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let mt = self.left_rec(m, rest, memo);
                add_sparse(&mut acc, &mt, c);
            }
            finish(acc)
        };
        memo.insert((i, w), out.clone());
        out
    }

    fn right_rec(
        &self,
        w: usize,
        i: usize,
        lmemo: &mut HashMap<(usize, usize), Sparse>,
        rmemo: &mut HashMap<(usize, usize), Sparse>,
    ) -> Sparse {
        if let Some(r) = rmemo.get(&(w, i)) {
            return r.clone();
        }
        let f = self.g.field();
        let word = &self.words[w];
        let out = if word.last().is_none_or(|&l| l <= i) {
            let mut v = word.clone();
            v.push(i);
            vec![(self.index[&v], f.one())]
        } else {
            // r x_l x_i = (r x_i) x_l + r [x_l, x_i]
            let l = *word.last().unwrap();
            let rest = self.index[&word[..word.len() - 1].to_vec()];
            let mut acc = HashMap::new();
            for (t, c) in self.right_rec(rest, i, lmemo, rmemo) {
                let tl = self.right_rec(t, l, lmemo, rmemo);
                add_sparse(&mut acc, &tl, &c);
            }
            for (m, c) in self.g.structure(l, i).iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let rm = self.right_rec(rest, m, lmemo, rmemo);
                add_sparse(&mut acc, &rm, c);
            }
            finish(acc)
        };
        rmemo.insert((w, i), out.clone());
        out
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.g
    }

    pub fn field(&self) -> FieldSpec {
        self.g.field()
    }

    pub fn truncation(&self) -> usize {
        self.n
    }

    /// `dim F_M U(𝔤)`, for `M ≤ N`.
    pub fn filtered_dim(&self, m: usize) -> usize {
        self.filtered[m.min(self.n)]
    }

    pub fn dim(&self) -> usize {
        self.words.len()
    }

    pub fn word(&self, w: usize) -> &[usize] {
        &self.words[w]
    }

    pub fn word_degree(&self, w: usize) -> usize {
        self.words[w].len()
    }

    /// Largest degree of a nonzero coefficient (0 for the zero element).
    pub fn degree(&self, u: &[Scalar]) -> usize {
        u.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(w, _)| self.words[w].len()).max().unwrap_or(0)
    }

    pub fn one(&self) -> Vec<Scalar> {
        vecops::unit(self.field(), self.dim(), 0)
    }

    fn apply(&self, table: &[Sparse], u: &[Scalar]) -> Result<Vec<Scalar>, LieError> {
        let mut out = vecops::zeros(self.field(), self.dim());
        for (w, c) in u.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let terms = table.get(w).ok_or(LieError::TruncationOverflow(self.words[w].len() + 1))?;
            for (t, v) in terms {
                out[*t] += &(v * c);
            }
        }
        Ok(out)
    }

    /// `x_i · u`.
    pub fn mul_gen_left(&self, i: usize, u: &[Scalar]) -> Result<Vec<Scalar>, LieError> {
        self.apply(&self.left[i], u)
    }

    /// `u · x_i`.
    pub fn mul_gen_right(&self, u: &[Scalar], i: usize) -> Result<Vec<Scalar>, LieError> {
        self.apply(&self.right[i], u)
    }

    pub(crate) fn right_terms(&self, w: usize, i: usize) -> &[(usize, Scalar)] {
        &self.right[i][w]
    }

    /// `u · v` by repeated left multiplication with the letters of `u`'s words.
    pub fn mul(&self, u: &[Scalar], v: &[Scalar]) -> Result<Vec<Scalar>, LieError> {
        let mut out = vecops::zeros(self.field(), self.dim());
        for (w, c) in u.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let mut acc = v.to_vec();
            for &i in self.words[w].iter().rev() {
                acc = self.mul_gen_left(i, &acc)?;
            }
            vecops::axpy(&mut out, c, &acc);
        }
        Ok(out)
    }

    /// `ρ(x_w) = ρ(x_{i_1})⋯ρ(x_{i_k})` for every word.
    pub fn represent(&self, v: &LieModule) -> Vec<Matrix> {
        let mut out: Vec<Matrix> = Vec::with_capacity(self.dim());
        for w in &self.words {
            let m = match w.split_first() {
                None => Matrix::identity(self.field(), v.dim()),
                Some((&i, rest)) => v.rho(i).mul(&out[self.index[&rest.to_vec()]]),
            };
            out.push(m);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn gen(p: &Pbw, i: usize) -> Vec<Scalar> {
        p.mul_gen_left(i, &p.one()).unwrap()
    }

    #[test]
    fn sizes_and_ordering() {
        let p = Pbw::new(Arc::new(LieAlgebra::heisenberg(Q).unwrap()), 3);
        assert_eq!((0..=3).map(|m| p.filtered_dim(m)).collect::<Vec<_>>(), vec![1, 4, 10, 20]);
        assert_eq!(p.word(1), &[0]);
        assert_eq!(p.word(4), &[0, 0]);
    }

    #[test]
    fn heisenberg_relation() {
        let p = Pbw::new(Arc::new(LieAlgebra::heisenberg(Q).unwrap()), 4);
        let (x, y, z) = (gen(&p, 0), gen(&p, 1), gen(&p, 2));
        let yx = p.mul(&y, &x).unwrap();
        let xy = p.mul(&x, &y).unwrap();
        assert_eq!(vecops::sub(&xy, &yx), z);
        assert_eq!(p.mul_gen_right(&y, 0).unwrap(), yx);
        assert_eq!(p.degree(&yx), 2);
    }

    #[test]
    fn associativity_and_overflow_on_sl2() {
        let s = Arc::new(LieAlgebra::sl2(Q).unwrap());
        let p = Pbw::new(s.clone(), 5);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let small = p.filtered_dim(1);
        let rnd = |rng: &mut ChaCha8Rng| -> Vec<Scalar> {
            (0..p.dim()).map(|w| if w < small { Q.from_i64(rng.gen_range(-2..3)) } else { Q.zero() }).collect()
        };
        for _ in 0..20 {
            let (a, b, c) = (rnd(&mut rng), rnd(&mut rng), rnd(&mut rng));
            let ab_c = p.mul(&p.mul(&a, &b).unwrap(), &c).unwrap();
            let a_bc = p.mul(&a, &p.mul(&b, &c).unwrap()).unwrap();
            assert_eq!(ab_c, a_bc);
        }
        let top = p.filtered_dim(4);
        let e5 = vecops::unit(Q, p.dim(), top);
        assert_eq!(p.mul_gen_left(0, &e5), Err(LieError::TruncationOverflow(6)));
        // [x_i, x_j] = x_i x_j - x_j x_i for every pair
        for i in 0..3 {
            for j in 0..3 {
                let comm = vecops::sub(&p.mul(&gen(&p, i), &gen(&p, j)).unwrap(), &p.mul(&gen(&p, j), &gen(&p, i)).unwrap());
                let mut want = vecops::zeros(Q, p.dim());
                for (m, c) in s.structure(i, j).iter().enumerate() {
                    want[m + 1] = c.clone();
                }
                assert_eq!(comm, want);
            }
        }
    }

    #[test]
    fn representation_is_multiplicative() {
        let s = Arc::new(LieAlgebra::sl2(Q).unwrap());
        let p = Pbw::new(s.clone(), 3);
        let ad = LieModule::adjoint(s);
        let rho = p.represent(&ad);
        let ev = |u: &[Scalar]| -> Matrix {
            let mut m = Matrix::zeros(Q, 3, 3);
            for (w, c) in u.iter().enumerate() {
                m = m.add(&rho[w].scale(c));
            }
            m
        };
        let f = gen(&p, 2);
        let e = gen(&p, 0);
        let fe = p.mul(&f, &e).unwrap();
        assert_eq!(ev(&fe), ad.rho(2).mul(ad.rho(0)));
    }
}
