//! Cochain complexes with finite windows, shifts, cohomology, hom-complexes
//! and tensor products.

mod cohomology;
mod hom;
mod tensor;

pub use cohomology::{cohomology, CohomologySpace};
pub use hom::{compose, hom_complex, GradedMap, HomBlock, HomComplex};
pub use tensor::{tensor, TensorComplex};

use serde::{Deserialize, Serialize};

use crate::exactla::{FieldSpec, Matrix, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("d^(n+1)∘d^n is nonzero for n = {0}")]
    NotAComplex(i64),
    #[error("differential in degree {degree} has shape {got:?}, expected {expected:?}")]
    BadShape { degree: i64, got: (usize, usize), expected: (usize, usize) },
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("malformed complex: {0}")]
    Malformed(String),
}

/// A bounded cochain complex: `dims[n - lo]` is the dimension in degree `n`,
/// `diffs[n - lo]` is `d^n : C^n -> C^{n+1}` for `lo <= n < hi`.
#[derive(Clone, PartialEq, Eq)]
pub struct CochainComplex {
    field: FieldSpec,
    lo: i64,
    hi: i64,
    dims: Vec<usize>,
    diffs: Vec<Matrix>,
}

impl CochainComplex {
    pub fn new(field: FieldSpec, lo: i64, dims: Vec<usize>, diffs: Vec<Matrix>) -> Result<Self, ComplexError> {
        if dims.is_empty() {
            return Err(ComplexError::Malformed("empty window".into()));
        }
        let hi = lo + dims.len() as i64 - 1;
        if diffs.len() + 1 != dims.len() {
            return Err(ComplexError::Malformed(format!(
                "{} degrees need {} differentials, got {}",
                dims.len(),
                dims.len() - 1,
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.field() != field {
                return Err(ComplexError::FieldMismatch(field, d.field()));
            }
            let expected = (dims[k + 1], dims[k]);
            if (d.rows(), d.cols()) != expected {
                return Err(ComplexError::BadShape { degree: lo + k as i64, got: (d.rows(), d.cols()), expected });
            }
        }
        Ok(CochainComplex { field, lo, hi, dims, diffs })
    }

    /// Like `new` but also checks `d∘d = 0`.
    pub fn checked(field: FieldSpec, lo: i64, dims: Vec<usize>, diffs: Vec<Matrix>) -> Result<Self, ComplexError> {
        let c = Self::new(field, lo, dims, diffs)?;
        c.validate()?;
        Ok(c)
    }

    /// A single space of dimension `dim` in `degree`.
    pub fn concentrated(field: FieldSpec, degree: i64, dim: usize) -> Self {
        CochainComplex { field, lo: degree, hi: degree, dims: vec![dim], diffs: vec![] }
    }

    pub fn zero(field: FieldSpec) -> Self {
        Self::concentrated(field, 0, 0)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }
    pub fn lo(&self) -> i64 {
        self.lo
    }
    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    pub fn dim(&self, n: i64) -> usize {
        if n < self.lo || n > self.hi {
            0
        } else {
            self.dims[(n - self.lo) as usize]
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `d^n`, the zero matrix of the right shape outside the window.
    pub fn d(&self, n: i64) -> Matrix {
        if n >= self.lo && n < self.hi {
            self.diffs[(n - self.lo) as usize].clone()
        } else {
            Matrix::zeros(self.field, self.dim(n + 1), self.dim(n))
        }
    }

    pub fn d_ref(&self, n: i64) -> Option<&Matrix> {
        if n >= self.lo && n < self.hi {
            Some(&self.diffs[(n - self.lo) as usize])
        } else {
            None
        }
    }

    pub fn apply_d(&self, n: i64, v: &[Scalar]) -> Vec<Scalar> {
        match self.d_ref(n) {
            Some(m) => m.mul_vec(v),
            None => vec![self.field.zero(); self.dim(n + 1)],
        }
    }

    pub fn validate(&self) -> Result<(), ComplexError> {
        for n in self.lo..self.hi - 1 {
            if !self.d(n + 1).mul(&self.d(n)).is_zero() {
                return Err(ComplexError::NotAComplex(n));
            }
        }
        Ok(())
    }

    /// Same complex on a wider window (zero spaces added).
    pub fn widen(&self, lo: i64, hi: i64) -> Self {
        let lo = lo.min(self.lo);
        let hi = hi.max(self.hi);
        let dims: Vec<usize> = (lo..=hi).map(|n| self.dim(n)).collect();
        let diffs: Vec<Matrix> = (lo..hi).map(|n| self.d(n)).collect();
        CochainComplex { field: self.field, lo, hi, dims, diffs }
    }

    /// The subcomplex of degrees `lo..=hi` (brutal truncation on both sides).
    pub fn restrict(&self, lo: i64, hi: i64) -> Self {
        let dims: Vec<usize> = (lo..=hi).map(|n| self.dim(n)).collect();
        let diffs: Vec<Matrix> = (lo..hi).map(|n| self.d(n)).collect();
        CochainComplex { field: self.field, lo, hi, dims, diffs }
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            field: self.field,
            lo: self.lo,
            hi: self.hi,
            dims: self.dims.clone(),
            differentials: self.diffs.iter().map(|m| m.entries().iter().map(|s| s.to_string()).collect()).collect(),
        }
    }

    pub fn from_json(j: &ComplexJson) -> Result<Self, ComplexError> {
        if j.hi < j.lo || j.dims.len() as i64 != j.hi - j.lo + 1 {
            return Err(ComplexError::Malformed("window and dims disagree".into()));
        }
        let mut diffs = Vec::new();
        for (k, e) in j.differentials.iter().enumerate() {
            let (r, c) = (j.dims.get(k + 1).copied().unwrap_or(0), j.dims[k]);
            if e.len() != r * c {
                return Err(ComplexError::Malformed(format!("differential {k} has {} entries, expected {}", e.len(), r * c)));
            }
            let vals: Result<Vec<Scalar>, _> = e.iter().map(|s| j.field.parse_scalar(s)).collect();
            let vals = vals.map_err(|e| ComplexError::Malformed(e.to_string()))?;
            diffs.push(Matrix::from_entries(j.field, r, c, &vals));
        }
        Self::checked(j.field, j.lo, j.dims.clone(), diffs)
    }
}

impl std::fmt::Debug for CochainComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CochainComplex[{}..{}] dims {:?} over {}", self.lo, self.hi, self.dims, self.field)
    }
}

/// Serialized form: differentials are row-major entry lists, one per degree `lo..hi`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ComplexJson {
    pub field: FieldSpec,
    pub lo: i64,
    pub hi: i64,
    pub dims: Vec<usize>,
    pub differentials: Vec<Vec<String>>,
}

/// `C[n]`: dims `C^{n+p}`, differential `(-1)^n d`.
pub fn shift(c: &CochainComplex, n: i64) -> CochainComplex {
    let diffs = c.diffs.iter().map(|m| m.signed(n)).collect();
    CochainComplex { field: c.field, lo: c.lo - n, hi: c.hi - n, dims: c.dims.clone(), diffs }
}

pub fn validate(c: &CochainComplex) -> Result<(), ComplexError> {
    c.validate()
}


#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn id1() -> Matrix {
        Matrix::identity(Q, 1)
    }

    #[test]
    fn validate_examples() {
        let z = CochainComplex::new(Q, 0, vec![1, 1, 1], vec![Matrix::zeros(Q, 1, 1), Matrix::zeros(Q, 1, 1)]).unwrap();
        assert!(z.validate().is_ok());
        let bad = CochainComplex::new(Q, 0, vec![1, 1, 1], vec![id1(), id1()]).unwrap();
        assert_eq!(bad.validate(), Err(ComplexError::NotAComplex(0)));
        let ok = CochainComplex::new(Q, 0, vec![1, 1, 0], vec![id1(), Matrix::zeros(Q, 0, 1)]).unwrap();
        assert!(ok.validate().is_ok());
    }

    #[test]
    fn shift_examples() {
        let c = CochainComplex::checked(Q, 0, vec![1, 1], vec![id1()]).unwrap();
        assert_eq!(shift(&c, 0), c);
        let s1 = shift(&c, 1);
        assert_eq!(s1.lo(), -1);
        assert_eq!(s1.d(-1), id1().neg());
        let s2 = shift(&s1, 1);
        assert_eq!(s2, shift(&c, 2));
        assert_eq!(s2.d(-2), id1());
    }

    #[test]
    fn json_round_trip() {
        let c = CochainComplex::checked(
            FieldSpec::PrimeField(3),
            -1,
            vec![2, 1],
            vec![Matrix::from_i64_rows(FieldSpec::PrimeField(3), &[vec![1, 2]])],
        )
        .unwrap();
        let j = serde_json::to_string(&c.to_json()).unwrap();
        assert!(j.contains("\"Fp:3\""));
        let back: ComplexJson = serde_json::from_str(&j).unwrap();
        assert_eq!(CochainComplex::from_json(&back).unwrap(), c);
    }
}
