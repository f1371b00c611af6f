use std::sync::Arc;

use super::{CochainComplex, ComplexError};
use crate::exactla::{FieldSpec, Matrix, Scalar};

/// One summand `Hom(A^p, B^{n+p})` of `⟨A,B⟩^n`, stored column-major at `offset`:
/// the entry `(t, s)` of the component matrix sits at `offset + s * rows + t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomBlock {
    pub p: i64,
    pub offset: usize,
    pub rows: usize,
    pub cols: usize,
}

/// `⟨A,B⟩` together with the coordinate layout of each degree.
#[derive(Clone, Debug)]
pub struct HomComplex {
    pub complex: CochainComplex,
    pub source: Arc<CochainComplex>,
    pub target: Arc<CochainComplex>,
    blocks: Vec<Vec<HomBlock>>,
}

/// A graded map of degree `n`: components `A^p -> B^{n+p}` for `p` in the source window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    pub source: Arc<CochainComplex>,
    pub target: Arc<CochainComplex>,
    pub degree: i64,
    components: Vec<Matrix>,
}

impl GradedMap {
    pub fn zero(source: Arc<CochainComplex>, target: Arc<CochainComplex>, degree: i64) -> Self {
        let f = source.field();
        let components = source
            .degrees()
            .map(|p| Matrix::zeros(f, target.dim(degree + p), source.dim(p)))
            .collect();
        GradedMap { source, target, degree, components }
    }

    pub fn identity(c: Arc<CochainComplex>) -> Self {
        let f = c.field();
        let components = c.degrees().map(|p| Matrix::identity(f, c.dim(p))).collect();
        GradedMap { source: c.clone(), target: c, degree: 0, components }
    }

    /// Builds from explicit components; `comp(p)` must have shape `B^{n+p} x A^p`.
    pub fn from_fn(
        source: Arc<CochainComplex>,
        target: Arc<CochainComplex>,
        degree: i64,
        mut comp: impl FnMut(i64) -> Matrix,
    ) -> Self {
        let mut g = Self::zero(source, target, degree);
        for p in g.source.clone().degrees() {
            g.set_component(p, comp(p));
        }
        g
    }

    pub fn field(&self) -> FieldSpec {
        self.source.field()
    }

    pub fn component(&self, p: i64) -> Matrix {
        if p < self.source.lo() || p > self.source.hi() {
            Matrix::zeros(self.field(), self.target.dim(self.degree + p), self.source.dim(p))
        } else {
            self.components[(p - self.source.lo()) as usize].clone()
        }
    }

    pub fn component_ref(&self, p: i64) -> Option<&Matrix> {
        if p < self.source.lo() || p > self.source.hi() {
            None
        } else {
            Some(&self.components[(p - self.source.lo()) as usize])
        }
    }

    pub fn set_component(&mut self, p: i64, m: Matrix) {
        let shape = (self.target.dim(self.degree + p), self.source.dim(p));
        assert_eq!((m.rows(), m.cols()), shape, "component shape mismatch at p = {p}");
        if p >= self.source.lo() && p <= self.source.hi() {
            let lo = self.source.lo();
            self.components[(p - lo) as usize] = m;
        } else {
            assert!(m.rows() == 0 || m.cols() == 0);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Matrix::is_zero)
    }

    fn zip(&self, o: &GradedMap, f: impl Fn(&Matrix, &Matrix) -> Matrix) -> GradedMap {
        assert_eq!(self.degree, o.degree, "degree mismatch");
        let components = self.components.iter().zip(&o.components).map(|(a, b)| f(a, b)).collect();
        GradedMap { source: self.source.clone(), target: self.target.clone(), degree: self.degree, components }
    }

    pub fn add(&self, o: &GradedMap) -> GradedMap {
        self.zip(o, Matrix::add)
    }

    pub fn sub(&self, o: &GradedMap) -> GradedMap {
        self.zip(o, Matrix::sub)
    }

    pub fn scale(&self, c: &Scalar) -> GradedMap {
        let components = self.components.iter().map(|m| m.scale(c)).collect();
        GradedMap { source: self.source.clone(), target: self.target.clone(), degree: self.degree, components }
    }

    /// `df = d∘f - (-1)^n f∘d`, a map of degree `n + 1`.
    pub fn differential(&self) -> GradedMap {
        let n = self.degree;
        let (a, b) = (&self.source, &self.target);
        GradedMap::from_fn(a.clone(), b.clone(), n + 1, |p| {
            let left = b.d(n + p).mul(&self.component(p));
            let right = self.component(p + 1).mul(&a.d(p));
            left.sub(&right.signed(n))
        })
    }

    /// Cocycle condition `d_B∘f^p = (-1)^n f^{p+1}∘d_A` for all `p`.
    pub fn is_chain_map(&self) -> bool {
        self.differential().is_zero()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let comps: Vec<serde_json::Value> = self
            .source
            .degrees()
            .map(|p| {
                let m = self.component(p);
                serde_json::json!({
                    "p": p,
                    "rows": m.rows(),
                    "cols": m.cols(),
                    "entries": m.entries().iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({ "degree": self.degree, "components": comps })
    }
}

/// Componentwise composition `(g∘f)^p = g^{p+m}∘f^p`, of degree `deg f + deg g`.
pub fn compose(g: &GradedMap, f: &GradedMap) -> Result<GradedMap, ComplexError> {
    if f.target != g.source {
        return Err(ComplexError::Malformed("composition: target of f is not the source of g".into()));
    }
    let m = f.degree;
    Ok(GradedMap::from_fn(f.source.clone(), g.target.clone(), m + g.degree, |p| {
        g.component(p + m).mul(&f.component(p))
    }))
}

impl HomComplex {
    pub fn blocks(&self, n: i64) -> &[HomBlock] {
        if n < self.complex.lo() || n > self.complex.hi() {
            &[]
        } else {
            &self.blocks[(n - self.complex.lo()) as usize]
        }
    }

    pub fn dim(&self, n: i64) -> usize {
        self.complex.dim(n)
    }

    /// Coordinates of a graded map.
    pub fn to_vector(&self, f: &GradedMap) -> Vec<Scalar> {
        let field = self.complex.field();
        let mut v = vec![field.zero(); self.dim(f.degree)];
        for b in self.blocks(f.degree) {
            if let Some(m) = f.component_ref(b.p) {
                for s in 0..b.cols {
                    for t in 0..b.rows {
                        v[b.offset + s * b.rows + t] = m.get(t, s);
                    }
                }
            }
        }
        v
    }

    pub fn from_vector(&self, n: i64, v: &[Scalar]) -> GradedMap {
        assert_eq!(v.len(), self.dim(n), "coordinate vector length");
        let mut g = GradedMap::zero(self.source.clone(), self.target.clone(), n);
        for b in self.blocks(n) {
            let mut m = Matrix::zeros(self.complex.field(), b.rows, b.cols);
            for s in 0..b.cols {
                for t in 0..b.rows {
                    let x = &v[b.offset + s * b.rows + t];
                    if !x.is_zero() {
                        m.set(t, s, x);
                    }
                }
            }
            g.set_component(b.p, m);
        }
        g
    }
}

/// `⟨A,B⟩^n = ⊕_p Hom(A^p, B^{n+p})` with `df = d∘f - (-1)^n f∘d`.
///
/// Blocks are ordered by increasing source degree `p`; inside a block the
/// coordinates are column-major over (source index, target index).
pub fn hom_complex(a: &Arc<CochainComplex>, b: &Arc<CochainComplex>) -> HomComplex {
    assert_eq!(a.field(), b.field(), "hom_complex: field mismatch");
    let field = a.field();
    let lo = b.lo() - a.hi();
    let hi = b.hi() - a.lo();
    let mut blocks = Vec::new();
    let mut dims = Vec::new();
    for n in lo..=hi {
        let mut off = 0;
        let mut bl = Vec::new();
        for p in a.degrees() {
            let (rows, cols) = (b.dim(n + p), a.dim(p));
            if rows * cols > 0 {
                bl.push(HomBlock { p, offset: off, rows, cols });
                off += rows * cols;
            }
        }
        dims.push(off);
        blocks.push(bl);
    }
    let mut diffs = Vec::new();
    for n in lo..hi {
        let k = (n - lo) as usize;
        let mut d = Matrix::zeros(field, dims[k + 1], dims[k]);
        let tgt_blocks = &blocks[k + 1];
        let find = |p: i64| tgt_blocks.iter().find(|bb| bb.p == p).copied();
        let sign = if n.rem_euclid(2) == 0 { -field.one() } else { field.one() };
        for blk in &blocks[k] {
            let p = blk.p;
            // d_B^{n+p} ∘ E_{ts} lands in block p of degree n+1
            if let (Some(db), Some(tb)) = (b.d_ref(n + p), find(p)) {
                for s in 0..blk.cols {
                    for t in 0..blk.rows {
                        let col = blk.offset + s * blk.rows + t;
                        for t2 in 0..tb.rows {
                            let x = db.get(t2, t);
                            if !x.is_zero() {
                                d.add_at(tb.offset + s * tb.rows + t2, col, &x);
                            }
                        }
                    }
                }
            }
            // -(-1)^n E_{ts} ∘ d_A^{p-1} lands in block p-1 of degree n+1
            if let (Some(da), Some(tb)) = (a.d_ref(p - 1), find(p - 1)) {
                for s in 0..blk.cols {
                    for t in 0..blk.rows {
                        let col = blk.offset + s * blk.rows + t;
                        for s2 in 0..tb.cols {
                            let x = da.get(s, s2);
                            if !x.is_zero() {
                                d.add_at(tb.offset + s2 * tb.rows + t, col, &(&sign * &x));
                            }
                        }
                    }
                }
            }
        }
        diffs.push(d);
    }
    let complex = CochainComplex::new(field, lo, dims, diffs).expect("hom complex shapes");
    HomComplex { complex, source: a.clone(), target: b.clone(), blocks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::testutil::random_complex;
    use crate::complexes::{cohomology, shift};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn k0() -> Arc<CochainComplex> {
        Arc::new(CochainComplex::concentrated(Q, 0, 1))
    }

    fn kk() -> Arc<CochainComplex> {
        Arc::new(CochainComplex::checked(Q, 0, vec![1, 1], vec![Matrix::identity(Q, 1)]).unwrap())
    }

    #[test]
    fn one_point_hom() {
        let h = hom_complex(&k0(), &k0());
        assert_eq!((h.complex.lo(), h.complex.hi()), (0, 0));
        assert_eq!(h.dim(0), 1);
    }

    #[test]
    fn hom_from_unit_is_target() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let b = Arc::new(random_complex(&mut rng, Q, -1, &[2, 3, 2]));
        let h = hom_complex(&k0(), &b);
        for n in -1..=1 {
            assert_eq!(h.dim(n), b.dim(n));
            if n < 1 {
                assert_eq!(h.complex.d(n), b.d(n));
            }
        }
    }

    #[test]
    fn hom_of_cone_of_identity() {
        // oracle: the four blocks of d written out by hand
        let h = hom_complex(&kk(), &kk());
        assert_eq!((h.dim(-1), h.dim(0), h.dim(1)), (1, 2, 1));
        // degree -1: f = E (A^1 -> B^0); df block p=0: d_B∘f = 1, block p=1: -(-1)^{-1} f∘d_A = 1
        let dm1 = h.complex.d(-1);
        assert_eq!(dm1, Matrix::from_i64_rows(Q, &[vec![1], vec![1]]));
        // degree 0: f = (a on p=0, b on p=1); df on p=0 = d∘a - b∘d = a - b
        let d0 = h.complex.d(0);
        assert_eq!(d0, Matrix::from_i64_rows(Q, &[vec![1, -1]]));
        assert_eq!(cohomology(&h.complex, 0).dim, 0);
        assert_eq!(h.complex.d(0).mul(&dm1), Matrix::zeros(Q, 1, 1));
    }

    #[test]
    fn cocycles_are_chain_maps_to_shift() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let f = if rng.gen_bool(0.5) { Q } else { FieldSpec::PrimeField(3) };
            let a = Arc::new(random_complex(&mut rng, f, 0, &[1, 2, 1]));
            let b = Arc::new(random_complex(&mut rng, f, -1, &[2, 2, 1]));
            let h = hom_complex(&a, &b);
            for n in h.complex.degrees() {
                let z = h.complex.d(n).kernel_basis();
                for j in 0..z.cols() {
                    let g = h.from_vector(n, &z.col(j));
                    assert!(g.is_chain_map());
                    // as a degree-0 map A -> B[n]: d_{B[n]}∘g = g∘d_A
                    let bn = shift(&b, n);
                    for p in a.degrees() {
                        let lhs = bn.d(p).mul(&g.component(p));
                        let rhs = g.component(p + 1).mul(&a.d(p));
                        assert_eq!(lhs, rhs);
                    }
                }
                // the assembled differential agrees with GradedMap::differential
                for j in 0..h.dim(n) {
                    let e = crate::exactla::vecops::unit(f, h.dim(n), j);
                    let g = h.from_vector(n, &e);
                    assert_eq!(h.to_vector(&g.differential()), h.complex.apply_d(n, &e));
                }
            }
        }
    }

    #[test]
    fn evaluation_is_a_chain_map() {
        // d(g∘f) = dg∘f + (-1)^{|g|} g∘df
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f2 = FieldSpec::PrimeField(5);
        let a = Arc::new(random_complex(&mut rng, f2, 0, &[2, 2]));
        let b = Arc::new(random_complex(&mut rng, f2, 0, &[1, 2, 1]));
        let c = Arc::new(random_complex(&mut rng, f2, -1, &[2, 1, 2]));
        let hab = hom_complex(&a, &b);
        let hbc = hom_complex(&b, &c);
        for m in hab.complex.degrees() {
            for q in hbc.complex.degrees() {
                for i in 0..hab.dim(m) {
                    for j in 0..hbc.dim(q) {
                        let f = hab.from_vector(m, &crate::exactla::vecops::unit(f2, hab.dim(m), i));
                        let g = hbc.from_vector(q, &crate::exactla::vecops::unit(f2, hbc.dim(q), j));
                        let lhs = compose(&g, &f).unwrap().differential();
                        let r1 = compose(&g.differential(), &f).unwrap();
                        let r2 = compose(&g, &f.differential()).unwrap().scale(&f2.one().signed(q));
                        assert_eq!(lhs, r1.add(&r2));
                    }
                }
            }
        }
    }
}
