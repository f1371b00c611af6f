use crate::exactla::{vecops, FieldSpec, Scalar};

use super::group::Tuples;
use super::{FinGroup, GroupError};

/// Cup product of invariant cochains in the coordinates of `InvariantCochains`:
/// `α ∈ Inv^p(W)`, `β ∈ Inv^q(k)`, and
/// `(α∪β)(h_1..h_{p+q}) = α(h_1..h_p) β(h_p⁻¹h_{p+1}, …, h_p⁻¹h_{p+q})` (`h_0 = e`).
pub fn em_cup(
    g: &FinGroup,
    field: FieldSpec,
    dimw: usize,
    alpha: &[Scalar],
    p: usize,
    beta: &[Scalar],
    q: usize,
) -> Result<Vec<Scalar>, GroupError> {
    let m = g.order();
    let (ta, tb, tc) = (Tuples { m, len: p }, Tuples { m, len: q }, Tuples { m, len: p + q });
    if alpha.len() != ta.count() * dimw || beta.len() != tb.count() {
        return Err(GroupError::CoefficientMismatch(format!(
            "expected {} and {} coordinates, got {} and {}",
            ta.count() * dimw,
            tb.count(),
            alpha.len(),
            beta.len()
        )));
    }
    let mut out = vecops::zeros(field, tc.count() * dimw);
    let mut h = vec![0; p + q];
    for t in 0..tc.count() {
        tc.decode(t, &mut h);
        let a = ta.encode(h[..p].iter().copied());
        let last = if p == 0 { g.identity() } else { h[p - 1] };
        let li = g.inv(last);
        let b = &beta[tb.encode(h[p..].iter().map(|&x| g.mul(li, x)))];
        if b.is_zero() {
            continue;
        }
        for c in 0..dimw {
            out[t * dimw + c] = &alpha[a * dimw + c] * b;
        }
    }
    Ok(out)
}

/// `(f∪ξ)(g_0..g_{n+m}) = f(g_0..g_n) ξ(g_n..g_{n+m})` for homogeneous `f ∈ I^n(W)`
/// and `ξ ∈ I^m(k)`, scattered from the support of `ξ`.
pub fn homogeneous_cup(field: FieldSpec, order: usize, dimw: usize, f: &[Scalar], n: usize, xi: &[Scalar], m: usize) -> Vec<Scalar> {
    let head = Tuples { m: order, len: n };
    let tail = Tuples { m: order, len: m + 1 };
    let out_t = Tuples { m: order, len: n + m + 1 };
    debug_assert_eq!(f.len(), order * head.count() * dimw);
    debug_assert_eq!(xi.len(), tail.count());
    let mut out = vecops::zeros(field, out_t.count() * dimw);
    let mut tb = vec![0; m + 1];
    for (s, x) in xi.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        tail.decode(s, &mut tb);
        for pre in 0..head.count() {
            // f at (prefix, t_0); output at (prefix, t)
            let fi = (pre * order + tb[0]) * dimw;
            let oi = (pre * tail.count() + s) * dimw;
            for c in 0..dimw {
                out[oi + c] = &f[fi + c] * x;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::cohomology;
    use crate::groupcoh::invariants::InvariantCochains;
    use crate::groupcoh::standard::{coboundary, StandardResolution};
    use crate::groupcoh::{sign_module_f2, GModule};
    use crate::derived::HomIntoResolution;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn rand_vec(rng: &mut ChaCha8Rng, f: FieldSpec, n: usize) -> Vec<Scalar> {
        (0..n).map(|_| f.from_i64(rng.gen_range(-2..3))).collect()
    }

    #[test]
    fn unit_and_square_of_the_generator() {
        let g = Arc::new(FinGroup::cyclic(2));
        let f2 = FieldSpec::PrimeField(2);
        let k = GModule::trivial(g.clone(), f2, 1);
        let alg = k.group_algebra();
        let res = Arc::new(StandardResolution::new(&k, &alg, 3));
        let inv = InvariantCochains::new(&res);
        let h1 = cohomology(inv.complex(), 1);
        let x = h1.rep(0);
        assert_eq!(em_cup(&g, f2, 1, &x, 1, &[f2.one()], 0).unwrap(), x);
        let xx = em_cup(&g, f2, 1, &x, 1, &x, 1).unwrap();
        let h2 = cohomology(inv.complex(), 2);
        assert!(vecops::is_zero(&inv.complex().apply_d(2, &xx)));
        assert!(!vecops::is_zero(&h2.classify(&xx)));
    }

    #[test]
    fn mismatched_coefficients_are_rejected() {
        let g = FinGroup::cyclic(2);
        let f2 = FieldSpec::PrimeField(2);
        assert!(matches!(em_cup(&g, f2, 1, &[f2.one()], 1, &[f2.one()], 0), Err(GroupError::CoefficientMismatch(_))));
    }

    #[test]
    fn leibniz_and_descent_on_random_cochains() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for (g, w) in [
            (Arc::new(FinGroup::cyclic(3)), None),
            (Arc::new(FinGroup::symmetric3()), Some(())),
        ] {
            let w = match w {
                None => GModule::regular(g.clone(), FieldSpec::PrimeField(3)),
                Some(()) => sign_module_f2(g.clone()).unwrap(),
            };
            let f = w.field();
            let k = GModule::trivial(g.clone(), f, 1);
            let alg = w.group_algebra();
            let iw = InvariantCochains::new(&Arc::new(StandardResolution::new(&w, &alg, 3)));
            let ik = InvariantCochains::new(&Arc::new(StandardResolution::new(&k, &alg, 3)));
            for (p, q) in [(0, 1), (1, 1), (1, 0), (0, 2), (2, 0)] {
                for _ in 0..3 {
                    let a = rand_vec(&mut rng, f, iw.complex().dim(p));
                    let b = rand_vec(&mut rng, f, ik.complex().dim(q));
                    let (pu, qu) = (p as usize, q as usize);
                    let lhs = iw.complex().apply_d(p + q, &em_cup(&g, f, w.dim(), &a, pu, &b, qu).unwrap());
                    let da = iw.complex().apply_d(p, &a);
                    let db = ik.complex().apply_d(q, &b);
                    let mut rhs = em_cup(&g, f, w.dim(), &da, pu + 1, &b, qu).unwrap();
                    let t2 = em_cup(&g, f, w.dim(), &a, pu, &db, qu + 1).unwrap();
                    vecops::axpy(&mut rhs, &f.one().signed(p), &t2);
                    assert_eq!(lhs, rhs);
                    // the invariant formula is the homogeneous one restricted to g_0 = e
                    let hom = homogeneous_cup(f, g.order(), w.dim(), &iw.embed(pu, &a), pu, &ik.embed(qu, &b), qu);
                    assert_eq!(iw.restrict(pu + qu, &hom), em_cup(&g, f, w.dim(), &a, pu, &b, qu).unwrap());
                }
            }
        }
    }

    #[test]
    fn homogeneous_leibniz() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = FieldSpec::PrimeField(3);
        let m: usize = 3;
        for (n, k) in [(0usize, 1usize), (1, 1), (2, 0)] {
            let a = rand_vec(&mut rng, f, m.pow(n as u32 + 1) * 2);
            let x = rand_vec(&mut rng, f, m.pow(k as u32 + 1));
            let lhs = coboundary(f, m, 2, n + k, &homogeneous_cup(f, m, 2, &a, n, &x, k));
            let mut rhs = homogeneous_cup(f, m, 2, &coboundary(f, m, 2, n, &a), n + 1, &x, k);
            let t2 = homogeneous_cup(f, m, 2, &a, n, &coboundary(f, m, 1, k, &x), k + 1);
            vecops::axpy(&mut rhs, &f.one().signed(n as i64), &t2);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn cup_descends_and_is_associative_on_classes() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g = Arc::new(FinGroup::cyclic(3));
        let f = FieldSpec::PrimeField(3);
        let k = GModule::trivial(g.clone(), f, 1);
        let alg = k.group_algebra();
        let ik = InvariantCochains::new(&Arc::new(StandardResolution::new(&k, &alg, 5)));
        let c = ik.complex();
        let cup = |a: &[Scalar], p: usize, b: &[Scalar], q: usize| em_cup(&g, f, 1, a, p, b, q).unwrap();
        for (p, q) in [(1usize, 1usize), (1, 2), (2, 2)] {
            let a = cohomology(c, p as i64).rep(0);
            let b = cohomology(c, q as i64).rep(0);
            let hn = cohomology(c, (p + q) as i64);
            let base = hn.classify(&cup(&a, p, &b, q));
            let t = rand_vec(&mut rng, f, c.dim(q as i64 - 1));
            let mut b2 = b.clone();
            vecops::add_into(&mut b2, &c.apply_d(q as i64 - 1, &t));
            assert!(vecops::is_zero(&c.apply_d((p + q) as i64, &cup(&a, p, &b2, q))));
            assert_eq!(hn.classify(&cup(&a, p, &b2, q)), base);
            for r in [1usize, 2] {
                if p + q + r > 5 {
                    continue;
                }
                let z = cohomology(c, r as i64).rep(0);
                let left = cup(&cup(&a, p, &b, q), p + q, &z, r);
                let right = cup(&a, p, &cup(&b, q, &z, r), q + r);
                assert_eq!(left, right);
            }
        }
    }
}
