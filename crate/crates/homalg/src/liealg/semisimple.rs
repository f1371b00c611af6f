use crate::exactla::{EchelonBasis, Matrix, Scalar};

use super::{LieError, LieModule, LieSubalgebraPair};

/// Whether `V` is semisimple over `𝔨`: the unital algebra spanned by words in
/// `ρ(𝔨)` has nondegenerate trace form (its radical, in characteristic 0).
pub fn k_semisimplicity_check(pair: &LieSubalgebraPair, v: &LieModule) -> Result<bool, LieError> {
    let f = v.field();
    if f.characteristic() != 0 {
        return Err(LieError::CharacteristicNotZero);
    }
    if pair.is_absolute() || v.dim() == 0 {
        return Ok(true);
    }
    let n = v.dim();
    let gens: Vec<Matrix> = pair.k.basis.columns().iter().map(|y| v.rho_of(y)).collect();
    let mut span = EchelonBasis::new(f, n * n);
    let mut algebra: Vec<Matrix> = Vec::new();
    let mut frontier = vec![Matrix::identity(f, n)];
    while let Some(m) = frontier.pop() {
        if !span.insert(&m.entries()) {
            continue;
        }
        for g in &gens {
            frontier.push(g.mul(&m));
        }
        algebra.push(m);
    }
    let k = algebra.len();
    let mut gram = Matrix::zeros(f, k, k);
    for i in 0..k {
        for j in i..k {
            let t = trace(&algebra[i].mul(&algebra[j]));
            gram.set(i, j, &t);
            gram.set(j, i, &t);
        }
    }
    Ok(gram.rank() == k)
}

fn trace(m: &Matrix) -> Scalar {
    let mut t = m.field().zero();
    for i in 0..m.rows() {
        t += &m.get(i, i);
    }
    t
}
