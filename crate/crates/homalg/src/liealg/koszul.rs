use std::collections::HashMap;
use std::sync::Arc;

use crate::complexes::CochainComplex;
use crate::exactla::{vecops, FieldSpec, LinearSolver, Matrix, Scalar};

use super::ce::sign;
use super::{LieAlgebra, LieError, LieModule, Pbw, Wedge};

/// `∂(1 ⊗ x_S)` as `(letter, T, c)`: `c · x_letter ⊗ x_T`, `letter = None` for `1`.
type Term = (Option<usize>, usize, Scalar);

/// `U(𝔤) ⊗ ⋀^i 𝔤 → k` truncated at PBW degree `N`, coordinates `(word, subset)`
/// with the word outer so that `F_M U ⊗ ⋀^i` is a prefix.
#[derive(Clone, Debug)]
pub struct KoszulResolution {
    pbw: Arc<Pbw>,
    wedge: Wedge,
    /// `terms[i][s] = ∂(1 ⊗ x_s)` for `s ∈ ⋀^i`.
    terms: Vec<Vec<Vec<Term>>>,
    negate_first: bool,
}

/// `F_i(1 ⊗ x_w)` for `w ∈ ⋀^{p+i}`, `0 ≤ i ≤ q`, lifting a scalar `p`-cocycle.
#[derive(Clone, Debug)]
pub struct KoszulLift {
    pub p: usize,
    pub cocycle: Vec<Scalar>,
    pub maps: Vec<Vec<Vec<Scalar>>>,
}

/// The standard resolution with `d²` and filtered exactness checked up to degree `N`.
pub fn koszul_resolution(g: &Arc<LieAlgebra>, n_pbw: usize) -> Result<KoszulResolution, LieError> {
    KoszulResolution::new(g, n_pbw, false)
}

impl KoszulResolution {
    /// `negate_first` flips the sign of `∂_1`; the result is still an exact complex.
    pub fn new(g: &Arc<LieAlgebra>, n_pbw: usize, negate_first: bool) -> Result<Self, LieError> {
        if n_pbw == 0 {
            return Err(LieError::TruncationOverflow(1));
        }
        let f = g.field();
        let wedge = Wedge::new(g.dim());
        let mut terms = vec![vec![]];
        for i in 1..=g.dim() {
            let flip = negate_first && i == 1;
            let level = wedge.subsets[i]
                .iter()
                .map(|s| {
                    let mut out: Vec<Term> = Vec::new();
                    for k in 0..s.len() {
                        let rest: Vec<usize> = s.iter().enumerate().filter(|&(a, _)| a != k).map(|(_, &x)| x).collect();
                        out.push((Some(s[k]), wedge.index(&rest), sign(f, (k % 2 == 1) ^ flip)));
                    }
                    for k in 0..s.len() {
                        for l in k + 1..s.len() {
                            let rest: Vec<usize> =
                                s.iter().enumerate().filter(|&(a, _)| a != k && a != l).map(|(_, &x)| x).collect();
                            for (m, c) in g.structure(s[k], s[l]).iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                                if let Some((odd, t)) = Wedge::insert(m, &rest) {
                                    out.push((None, wedge.index(&t), c * &sign(f, odd ^ ((k + l) % 2 == 1) ^ flip)));
                                }
                            }
                        }
                    }
                    out
                })
                .collect();
            terms.push(level);
        }
        let r = KoszulResolution { pbw: Arc::new(Pbw::new(g.clone(), n_pbw)), wedge, terms, negate_first };
        if let Some(i) = r.d_squared_defect() {
            return Err(LieError::KoszulDefect(format!("∂∘∂ ≠ 0 out of degree {i}")));
        }
        if let Some((i, m)) = r.exactness_defect() {
            return Err(LieError::KoszulDefect(format!("not exact in degree {i} at filtration {m}")));
        }
        Ok(r)
    }

    pub fn field(&self) -> FieldSpec {
        self.pbw.field()
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        self.pbw.algebra()
    }

    pub fn pbw(&self) -> &Pbw {
        &self.pbw
    }

    pub fn wedge(&self) -> &Wedge {
        &self.wedge
    }

    pub fn truncation(&self) -> usize {
        self.pbw.truncation()
    }

    pub fn is_mutated(&self) -> bool {
        self.negate_first
    }

    pub fn top(&self) -> usize {
        self.wedge.d
    }

    /// Length of a coordinate vector of `U ⊗ ⋀^i`.
    pub fn term_dim(&self, i: usize) -> usize {
        self.pbw.dim() * self.wedge.count(i)
    }

    /// The generator coefficients of `∂(1 ⊗ x_s)`.
    pub fn generator_boundary(&self, i: usize, s: usize) -> &[(Option<usize>, usize, Scalar)] {
        &self.terms[i][s]
    }

    /// `∂_i` on `F_m U ⊗ ⋀^i`, landing in `F_{m+1} U ⊗ ⋀^{i-1}`; `ε` for `i = 0`.
    pub fn boundary_matrix(&self, i: usize, m: usize) -> Result<Matrix, LieError> {
        let f = self.field();
        let p = &self.pbw;
        if m >= p.truncation() {
            return Err(LieError::TruncationOverflow(m + 1));
        }
        let cols = p.filtered_dim(m) * self.wedge.count(i);
        if i == 0 {
            let mut e = Matrix::zeros(f, 1, cols);
            e.set(0, 0, &f.one());
            return Ok(e);
        }
        let ns = self.wedge.count(i);
        let nt = self.wedge.count(i - 1);
        let mut out = Matrix::zeros(f, p.filtered_dim(m + 1) * nt, cols);
        for w in 0..p.filtered_dim(m) {
            for s in 0..ns {
                let col = w * ns + s;
                for (letter, t, c) in &self.terms[i][s] {
                    match letter {
                        None => out.add_at(w * nt + t, col, c),
                        Some(l) => {
                            for (u, v) in p.right_terms(w, *l) {
                                out.add_at(u * nt + t, col, &(v * c));
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `∂_i` on a full coordinate vector.
    pub fn boundary(&self, i: usize, x: &[Scalar]) -> Result<Vec<Scalar>, LieError> {
        let f = self.field();
        let p = &self.pbw;
        if i == 0 {
            return Ok(vec![x[0].clone()]);
        }
        let ns = self.wedge.count(i);
        let nt = self.wedge.count(i - 1);
        let mut out = vecops::zeros(f, self.term_dim(i - 1));
        for (idx, c) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let (w, s) = (idx / ns, idx % ns);
            for (letter, t, e) in &self.terms[i][s] {
                let ce = c * e;
                match letter {
                    None => out[w * nt + t] += &ce,
                    Some(l) => {
                        if p.word_degree(w) >= p.truncation() {
                            return Err(LieError::TruncationOverflow(p.word_degree(w) + 1));
                        }
                        for (u, v) in p.right_terms(w, *l) {
                            out[u * nt + t] += &(v * &ce);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn d_squared_defect(&self) -> Option<usize> {
        let n = self.truncation();
        for i in 1..=self.top() {
            for m in 0..n.saturating_sub(1) {
                let lo = self.boundary_matrix(i - 1, m + 1).ok()?;
                let hi = self.boundary_matrix(i, m).ok()?;
                if !lo.mul(&hi).is_zero() {
                    return Some(i);
                }
            }
        }
        None
    }

    /// Cycles in `F_M ⊗ ⋀^i` bound from `F_{M-1} ⊗ ⋀^{i+1}`, for `M < N`.
    fn exactness_defect(&self) -> Option<(usize, usize)> {
        let n = self.truncation();
        for i in 0..=self.top() {
            for m in 0..n {
                let d = self.boundary_matrix(i, m).ok()?;
                let cycles = d.cols() - d.rank();
                let bounds = if m == 0 || i == self.top() { 0 } else { self.boundary_matrix(i + 1, m - 1).ok()?.rank() };
                if cycles != bounds {
                    return Some((i, m));
                }
            }
        }
        None
    }

    /// `D f = -(-1)^p f∘∂_{p+1}` on `Hom_U(U ⊗ ⋀^p, V) = Hom(⋀^p, V)`, evaluated
    /// on the generator boundaries with `f(x_l ⊗ x_S) = ρ(x_l) f(x_S)`.
    pub fn hom_differential(&self, v: &LieModule, p: usize) -> Matrix {
        let f = self.field();
        let dv = v.dim();
        let ns = self.wedge.count(p);
        let mut out = Matrix::zeros(f, self.wedge.count(p + 1) * dv, ns * dv);
        if p >= self.top() {
            return out;
        }
        let s = sign(f, p % 2 == 0);
        for (t, terms) in self.terms[p + 1].iter().enumerate() {
            for (letter, src, c) in terms {
                let blk = match letter {
                    None => Matrix::identity(f, dv),
                    Some(l) => v.rho(*l).clone(),
                };
                out.add_block(t * dv, src * dv, &blk.scale(&(c * &s)));
            }
        }
        out
    }

    pub fn hom_complex(&self, v: &LieModule) -> CochainComplex {
        let dv = v.dim();
        let dims = (0..=self.top()).map(|p| self.wedge.count(p) * dv).collect();
        let diffs = (0..self.top()).map(|p| self.hom_differential(v, p)).collect();
        CochainComplex::new(self.field(), 0, dims, diffs).expect("hom shapes")
    }

    /// `x_l · F(1 ⊗ x_S)` on the `U`-slices of a vector in `U ⊗ ⋀^i`.
    fn left_letter(&self, l: usize, i: usize, x: &[Scalar]) -> Result<Vec<Scalar>, LieError> {
        let ns = self.wedge.count(i);
        let nw = self.pbw.dim();
        let mut out = vecops::zeros(self.field(), x.len());
        for s in 0..ns {
            let slice: Vec<Scalar> = (0..nw).map(|w| x[w * ns + s].clone()).collect();
            if vecops::is_zero(&slice) {
                continue;
            }
            let y = self.pbw.mul_gen_left(l, &slice)?;
            for (w, c) in y.into_iter().enumerate() {
                out[w * ns + s] = c;
            }
        }
        Ok(out)
    }

    fn max_word_degree(&self, x: &[Scalar], i: usize) -> Option<usize> {
        let ns = self.wedge.count(i).max(1);
        x.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(idx, _)| self.pbw.word_degree(idx / ns)).max()
    }

    /// `(-1)^p F_{i-1}(∂(1 ⊗ x_w))`, the target `∂ F_i(1 ⊗ x_w)` must hit.
    fn lift_target(&self, lift: &KoszulLift, i: usize, w: usize) -> Result<Vec<Scalar>, LieError> {
        let f = self.field();
        let p = lift.p;
        let mut want = vecops::zeros(f, self.term_dim(i - 1));
        for (letter, s, c) in &self.terms[p + i][w] {
            let prev = &lift.maps[i - 1][*s];
            let img = match letter {
                None => prev.clone(),
                Some(l) => self.left_letter(*l, i - 1, prev)?,
            };
            vecops::axpy(&mut want, c, &img);
        }
        Ok(vecops::scale(&f.one().signed(p as i64), &want))
    }

    /// Degreewise solve of `∂ F_i = (-1)^p F_{i-1} ∂`, `ε F_0 = f`, for `i ≤ q`,
    /// first in the least admissible filtration, then in `F_{N-1}`.
    pub fn lift(&self, f_cocycle: &[Scalar], p: usize, q: usize) -> Result<KoszulLift, LieError> {
        let f = self.field();
        let n = self.truncation();
        let mut lift = KoszulLift { p, cocycle: f_cocycle.to_vec(), maps: Vec::new() };
        lift.maps.push(
            f_cocycle
                .iter()
                .map(|c| {
                    let mut v = vecops::zeros(f, self.term_dim(0));
                    v[0] = c.clone();
                    v
                })
                .collect(),
        );
        let mut solvers: HashMap<usize, LinearSolver> = HashMap::new();
        for i in 1..=q {
            if p + i > self.top() {
                lift.maps.push(vec![]);
                continue;
            }
            let mut level = Vec::new();
            for w in 0..self.wedge.count(p + i) {
                let want = self.lift_target(&lift, i, w)?;
                let Some(deg) = self.max_word_degree(&want, i - 1) else {
                    level.push(vecops::zeros(f, self.term_dim(i)));
                    continue;
                };
                if deg > n {
                    return Err(LieError::TruncationOverflow(deg));
                }
                let mut found = None;
                for m in [deg.max(1) - 1, n - 1] {
                    let solver = solvers.entry(m).or_insert_with(|| {
                        LinearSolver::new(&self.boundary_matrix(i, m).expect("m < N"))
                    });
                    let rows = self.pbw.filtered_dim(m + 1) * self.wedge.count(i - 1);
                    if want[rows..].iter().any(|c| !c.is_zero()) {
                        continue;
                    }
                    if let Some(x) = solver.solve(&want[..rows]) {
                        let mut full = x;
                        full.resize(self.term_dim(i), f.zero());
                        found = Some(full);
                        break;
                    }
                }
                level.push(found.ok_or(LieError::LiftFailed(i))?);
            }
            lift.maps.push(level);
            solvers.clear();
        }
        Ok(lift)
    }

    /// Recomputes every square of the lift exactly.
    pub fn verify_lift(&self, lift: &KoszulLift) -> Result<bool, LieError> {
        for (w, img) in lift.maps[0].iter().enumerate() {
            if self.boundary(0, img)? != vec![lift.cocycle[w].clone()] {
                return Ok(false);
            }
        }
        for i in 1..lift.maps.len() {
            for (w, img) in lift.maps[i].iter().enumerate() {
                if self.boundary(i, img)? != self.lift_target(lift, i, w)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `e ∘ F_q` for a `V`-valued `q`-cochain `e`, as a cochain on `⋀^{p+q}`.
    pub fn compose(&self, v: &LieModule, rho_words: &[Matrix], e: &[Scalar], q: usize, lift: &KoszulLift) -> Vec<Scalar> {
        let f = self.field();
        let dv = v.dim();
        let ns = self.wedge.count(q);
        let Some(level) = lift.maps.get(q) else {
            return vec![];
        };
        let mut out = vecops::zeros(f, self.wedge.count(lift.p + q) * dv);
        for (w, img) in level.iter().enumerate() {
            for (idx, c) in img.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let (u, s) = (idx / ns, idx % ns);
                let val = rho_words[u].mul_vec(&e[s * dv..(s + 1) * dv]);
                for a in 0..dv {
                    out[w * dv + a] += &(&val[a] * c);
                }
            }
        }
        out
    }
}
