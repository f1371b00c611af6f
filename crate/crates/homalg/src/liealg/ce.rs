use std::collections::HashMap;
use std::sync::Arc;

use crate::complexes::CochainComplex;
use crate::exactla::{kernel, vecops, FieldSpec, LinearSolver, Matrix, Scalar};

use super::{k_semisimplicity_check, LieAlgebra, LieError, LieModule, LieSubalgebraPair};

/// Increasing index tuples of `{0..d-1}` by size, lexicographic within a size.
#[derive(Clone, Debug)]
pub struct Wedge {
    pub d: usize,
    pub subsets: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl Wedge {
    pub fn new(d: usize) -> Self {
        let mut subsets = vec![Vec::new(); d + 1];
        for mask in 0u32..(1 << d) {
            let s: Vec<usize> = (0..d).filter(|&i| mask >> i & 1 == 1).collect();
            subsets[s.len()].push(s);
        }
        for s in &mut subsets {
            s.sort();
        }
        let index = subsets.iter().map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()).collect();
        Wedge { d, subsets, index }
    }

    pub fn count(&self, p: usize) -> usize {
        self.subsets.get(p).map_or(0, |s| s.len())
    }

    pub fn index(&self, s: &[usize]) -> usize {
        self.index[s.len()][s]
    }

    /// `x_m ∧ x_S = sign · x_{S∪m}` (None when `m ∈ S`).
    pub fn insert(m: usize, s: &[usize]) -> Option<(bool, Vec<usize>)> {
        let pos = s.partition_point(|&x| x < m);
        if s.get(pos) == Some(&m) {
            return None;
        }
        let mut out = s.to_vec();
        out.insert(pos, m);
        Some((pos % 2 == 1, out))
    }

    /// Whether sorting the concatenation `a ++ b` (disjoint, each increasing) is odd.
    pub fn shuffle_odd(a: &[usize], b: &[usize]) -> bool {
        let inv: usize = a.iter().map(|&x| b.iter().filter(|&&y| y < x).count()).sum();
        inv % 2 == 1
    }
}

pub(crate) fn sign(f: FieldSpec, odd: bool) -> Scalar {
    if odd {
        -f.one()
    } else {
        f.one()
    }
}

/// The absolute differential on `Hom(⋀^p 𝔤, V)`, coordinates `(subset, v)` with `v` fastest:
/// `(dω)(x_{t_0},…,x_{t_p}) = Σ_k (-1)^k x_{t_k}·ω(…) + Σ_{k<l} (-1)^{k+l} ω([x_{t_k},x_{t_l}], …)`.
pub fn ce_differential(g: &LieAlgebra, v: &LieModule, w: &Wedge, p: usize) -> Matrix {
    let f = g.field();
    let dv = v.dim();
    let mut m = Matrix::zeros(f, w.count(p + 1) * dv, w.count(p) * dv);
    for (ti, t) in w.subsets[p + 1].iter().enumerate() {
        for k in 0..t.len() {
            let rest: Vec<usize> = t.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &x)| x).collect();
            let si = w.index(&rest);
            let blk = v.rho(t[k]).scale(&sign(f, k % 2 == 1));
            m.add_block(ti * dv, si * dv, &blk);
        }
        for k in 0..t.len() {
            for l in k + 1..t.len() {
                let rest: Vec<usize> = t.iter().enumerate().filter(|&(i, _)| i != k && i != l).map(|(_, &x)| x).collect();
                for (mm, c) in g.structure(t[k], t[l]).iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    if let Some((odd, s)) = Wedge::insert(mm, &rest) {
                        let coef = c * &sign(f, odd ^ ((k + l) % 2 == 1));
                        let si = w.index(&s);
                        for a in 0..dv {
                            m.add_at(ti * dv + a, si * dv + a, &coef);
                        }
                    }
                }
            }
        }
    }
    m
}

/// Chevalley–Eilenberg cochains of `(𝔤, 𝔨)` with values in `V`: the `𝔨`-basic
/// forms (`ι_y ω = 0`, `θ_y ω = 0` for `y ∈ 𝔨`) inside `Hom(⋀𝔤, V)`.
#[derive(Clone, Debug)]
pub struct CeComplex {
    pub pair: LieSubalgebraPair,
    pub module: LieModule,
    pub wedge: Wedge,
    /// Columns embed the relative cochains into the absolute ones.
    pub bases: Vec<Matrix>,
    pub complex: CochainComplex,
}

impl CeComplex {
    pub fn field(&self) -> FieldSpec {
        self.module.field()
    }

    pub fn embed(&self, p: usize, c: &[Scalar]) -> Vec<Scalar> {
        self.bases[p].mul_vec(c)
    }

    pub fn restrict(&self, p: usize, full: &[Scalar]) -> Option<Vec<Scalar>> {
        LinearSolver::new(&self.bases[p]).solve(full)
    }

    /// `α ∧ β` for `α` in this complex (degree `p`) and a scalar form `β` of `other`.
    pub fn cup(&self, other: &CeComplex, alpha: &[Scalar], p: usize, beta: &[Scalar], q: usize) -> Result<Vec<Scalar>, LieError> {
        if other.module.dim() != 1 || !other.module.is_trivial() || other.pair.g != self.pair.g {
            return Err(LieError::CoefficientMismatch);
        }
        if alpha.len() != self.bases[p].cols() || beta.len() != other.bases[q].cols() {
            return Err(LieError::CoefficientMismatch);
        }
        if p + q >= self.bases.len() {
            return Ok(vec![]);
        }
        let full = ce_cup(&self.wedge, self.field(), self.module.dim(), &self.embed(p, alpha), p, &other.embed(q, beta), q)?;
        Ok(self.restrict(p + q, &full).expect("basic forms are closed under wedge"))
    }
}

fn interior_and_lie(pair: &LieSubalgebraPair, v: &LieModule, w: &Wedge, p: usize) -> Matrix {
    let g = &pair.g;
    let f = g.field();
    let dv = v.dim();
    let n = w.count(p) * dv;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for y in pair.k.basis.columns() {
        // ι_y: (ι_y ω)(S') = Σ_m y_m ω(x_m ∧ S')
        if p > 0 {
            for s in &w.subsets[p - 1] {
                for a in 0..dv {
                    let mut row = vecops::zeros(f, n);
                    for (mm, ym) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                        if let Some((odd, t)) = Wedge::insert(mm, s) {
                            row[w.index(&t) * dv + a] += &(ym * &sign(f, odd));
                        }
                    }
                    rows.push(row);
                }
            }
        }
        // θ_y ω(S) = ρ(y) ω(S) - Σ_k ω(…, [y, x_{s_k}], …)
        let ry = v.rho_of(&y);
        let ady: Vec<Vec<Scalar>> = (0..g.dim()).map(|j| g.bracket(&y, &vecops::unit(f, g.dim(), j))).collect();
        for (si, s) in w.subsets[p].iter().enumerate() {
            for a in 0..dv {
                let mut row = vecops::zeros(f, n);
                for b in 0..dv {
                    row[si * dv + b] += &ry.get(a, b);
                }
                for k in 0..s.len() {
                    let rest: Vec<usize> = s.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &x)| x).collect();
                    for (mm, c) in ady[s[k]].iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                        // x_m in slot k equals (-1)^k x_m ∧ rest
                        if let Some((odd, t)) = Wedge::insert(mm, &rest) {
                            row[w.index(&t) * dv + a] -= &(c * &sign(f, odd ^ (k % 2 == 1)));
                        }
                    }
                }
                rows.push(row);
            }
        }
    }
    Matrix::from_rows(f, n, &rows)
}

/// Degrees `0..=dim 𝔤`; checks `𝔨`-semisimplicity of `𝔤` and `V` in the relative case.
pub fn ce_complex(pair: &LieSubalgebraPair, v: &LieModule) -> Result<CeComplex, LieError> {
    let g = &pair.g;
    if v.algebra() != g {
        return Err(LieError::CoefficientMismatch);
    }
    if !pair.is_absolute() {
        let adj = LieModule::adjoint(g.clone());
        if !k_semisimplicity_check(pair, &adj)? || !k_semisimplicity_check(pair, v)? {
            return Err(LieError::NotKSemisimple);
        }
    }
    let f = g.field();
    let w = Wedge::new(g.dim());
    let dv = v.dim();
    let top = g.dim();
    let bases: Vec<Matrix> = (0..=top)
        .map(|p| if pair.is_absolute() { Matrix::identity(f, w.count(p) * dv) } else { kernel(&interior_and_lie(pair, v, &w, p)).basis })
        .collect();
    let diffs: Vec<Matrix> = (0..top)
        .map(|p| {
            let d = ce_differential(g, v, &w, p);
            if pair.is_absolute() {
                return d;
            }
            let img = d.mul(&bases[p]);
            bases[p + 1].solve_matrix(&img).expect("d preserves basic forms")
        })
        .collect();
    for p in 1..top {
        if !diffs[p].mul(&diffs[p - 1]).is_zero() {
            return Err(LieError::NotALieAlgebra(format!("d∘d ≠ 0 in degree {p}")));
        }
    }
    let complex = CochainComplex::new(f, 0, bases.iter().map(|b| b.cols()).collect(), diffs).expect("ce shapes");
    Ok(CeComplex { pair: pair.clone(), module: v.clone(), wedge: w, bases, complex })
}

/// `(α ∧ β)(x_T) = Σ_{A ⊔ B = T} ±α(x_A) β(x_B)` with the shuffle sign, `α` `V`-valued, `β` scalar.
pub fn ce_cup(w: &Wedge, f: FieldSpec, dimv: usize, alpha: &[Scalar], p: usize, beta: &[Scalar], q: usize) -> Result<Vec<Scalar>, LieError> {
    if alpha.len() != w.count(p) * dimv || beta.len() != w.count(q) {
        return Err(LieError::CoefficientMismatch);
    }
    let n = p + q;
    let mut out = vecops::zeros(f, w.count(n) * dimv);
    if n > w.d {
        return Ok(vec![]);
    }
    for (ti, t) in w.subsets[n].iter().enumerate() {
        for (ai, a) in w.subsets[p].iter().enumerate() {
            if !a.iter().all(|x| t.contains(x)) {
                continue;
            }
            let b: Vec<usize> = t.iter().copied().filter(|x| !a.contains(x)).collect();
            let bv = &beta[w.index(&b)];
            if bv.is_zero() {
                continue;
            }
            let c = bv * &sign(f, Wedge::shuffle_odd(a, &b));
            for k in 0..dimv {
                let av = &alpha[ai * dimv + k];
                if !av.is_zero() {
                    out[ti * dimv + k] += &(av * &c);
                }
            }
        }
    }
    Ok(out)
}

/// `H_CE(𝔤; k)` of the absolute complex with trivial coefficients.
pub fn trivial_ce(g: &Arc<LieAlgebra>) -> CeComplex {
    ce_complex(&LieSubalgebraPair::absolute(g.clone()), &LieModule::trivial(g.clone(), 1)).expect("absolute trivial complex")
}
