//! 4×4 matrices over GF(q).
//!
//! Matrices share their field through an `Arc`, so cloning a matrix is cheap
//! and two matrices can be checked for living over the same field before they
//! are combined.
//!
//! The canonical byte encoding is row-major: each of the 16 entries is
//! written as `ceil((2m+1)/8)` little-endian bytes of its bit-polynomial.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Mul;
use std::sync::Arc;

use thiserror::Error;

use crate::gf2m::{FieldElement, FieldError, FieldParams};
use crate::orderstats::divisors;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatError {
    #[error("matrices are over different fields")]
    FieldMismatch,
    #[error("matrix is singular")]
    Singular,
    #[error("no order found (bound {bound}, hints {hints:?})")]
    OrderNotFound { bound: u64, hints: Vec<u64> },
    #[error("encoding has {found} bytes, expected {expected}")]
    EncodingLength { found: usize, expected: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone)]
pub struct Mat4 {
    entries: [[FieldElement; 4]; 4],
    field: Arc<FieldParams>,
}

impl Mat4 {
    pub fn identity(field: &Arc<FieldParams>) -> Self {
        let mut entries = [[FieldElement::ZERO; 4]; 4];
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = FieldElement::ONE;
        }
        Mat4 {
            entries,
            field: Arc::clone(field),
        }
    }

    pub fn from_entries(field: &Arc<FieldParams>, entries: [[FieldElement; 4]; 4]) -> Result<Self, MatError> {
        for e in entries.iter().flatten() {
            field.element(e.bits() as u64)?;
        }
        Ok(Mat4 {
            entries,
            field: Arc::clone(field),
        })
    }

    /// Builds a matrix from raw bit-polynomials, validating each entry.
    pub fn from_bits(field: &Arc<FieldParams>, rows: [[u64; 4]; 4]) -> Result<Self, MatError> {
        let mut entries = [[FieldElement::ZERO; 4]; 4];
        for (i, row) in rows.iter().enumerate() {
            for (j, &b) in row.iter().enumerate() {
                entries[i][j] = field.element(b)?;
            }
        }
        Ok(Mat4 {
            entries,
            field: Arc::clone(field),
        })
    }

    pub fn field(&self) -> &Arc<FieldParams> {
        &self.field
    }

    pub fn entries(&self) -> &[[FieldElement; 4]; 4] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> FieldElement {
        self.entries[row][col]
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, &e)| e == if i == j { FieldElement::ONE } else { FieldElement::ZERO })
        })
    }

    fn same_field(&self, other: &Mat4) -> bool {
        Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field
    }

    pub fn mat_mul(&self, rhs: &Mat4) -> Result<Mat4, MatError> {
        if !self.same_field(rhs) {
            return Err(MatError::FieldMismatch);
        }
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &Mat4) -> Mat4 {
        let f = &*self.field;
        let mut out = [[FieldElement::ZERO; 4]; 4];
        for (i, row) in self.entries.iter().enumerate() {
            for (k, &a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, o) in out[i].iter_mut().enumerate() {
                    *o = f.add(*o, f.mul(a, rhs.entries[k][j]));
                }
            }
        }
        Mat4 {
            entries: out,
            field: Arc::clone(&self.field),
        }
    }

    /// Gauss–Jordan inverse.
    pub fn mat_inv(&self) -> Result<Mat4, MatError> {
        let f = &*self.field;
        let mut a = self.entries;
        let mut b = Mat4::identity(&self.field).entries;
        for col in 0..4 {
            let pivot = (col..4).find(|&r| !a[r][col].is_zero()).ok_or(MatError::Singular)?;
            a.swap(col, pivot);
            b.swap(col, pivot);
            let s = f.inv(a[col][col])?;
            for j in 0..4 {
                a[col][j] = f.mul(a[col][j], s);
                b[col][j] = f.mul(b[col][j], s);
            }
            for r in 0..4 {
                let factor = a[r][col];
                if r == col || factor.is_zero() {
                    continue;
                }
                for j in 0..4 {
                    a[r][j] = f.add(a[r][j], f.mul(factor, a[col][j]));
                    b[r][j] = f.add(b[r][j], f.mul(factor, b[col][j]));
                }
            }
        }
        Ok(Mat4 {
            entries: b,
            field: Arc::clone(&self.field),
        })
    }

    /// `self^k` by square-and-multiply.
    pub fn pow(&self, mut k: u64) -> Mat4 {
        let mut base = self.clone();
        let mut acc = Mat4::identity(&self.field);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// `g · self · g⁻¹`.
    pub fn conjugate_by(&self, g: &Mat4, g_inv: &Mat4) -> Mat4 {
        g.mul_unchecked(self).mul_unchecked(g_inv)
    }

    pub fn bytes_per_entry(field: &FieldParams) -> usize {
        field.degree().div_ceil(8) as usize
    }

    pub fn encode(&self) -> Vec<u8> {
        let width = Self::bytes_per_entry(&self.field);
        let mut out = Vec::with_capacity(16 * width);
        for e in self.entries.iter().flatten() {
            out.extend_from_slice(&e.bits().to_le_bytes()[..width]);
        }
        out
    }

    pub fn decode(field: &Arc<FieldParams>, bytes: &[u8]) -> Result<Mat4, MatError> {
        let width = Self::bytes_per_entry(field);
        if bytes.len() != 16 * width {
            return Err(MatError::EncodingLength {
                found: bytes.len(),
                expected: 16 * width,
            });
        }
        let mut entries = [[FieldElement::ZERO; 4]; 4];
        for (idx, chunk) in bytes.chunks(width).enumerate() {
            let mut buf = [0u8; 8];
            buf[..width].copy_from_slice(chunk);
            entries[idx / 4][idx % 4] = field.element(u64::from_le_bytes(buf))?;
        }
        Ok(Mat4 {
            entries,
            field: Arc::clone(field),
        })
    }

    /// Packs the 16 entries into a `u128` when the field degree is ≤ 8.
    pub fn packed_key(&self) -> Option<u128> {
        let d = self.field.degree();
        if d > 8 {
            return None;
        }
        Some(
            self.entries
                .iter()
                .flatten()
                .fold(0u128, |acc, e| (acc << d) | e.bits() as u128),
        )
    }

    /// Least k ≥ 1 with `self^k = I`.
    ///
    /// With hints, only divisors of the hinted values are tried, smallest
    /// first. Without hints, multiplies up to `bound` times.
    pub fn element_order(&self, hint_orders: &[u64], bound: u64) -> Result<u64, MatError> {
        if hint_orders.is_empty() {
            let mut x = self.clone();
            for k in 1..=bound {
                if x.is_identity() {
                    return Ok(k);
                }
                x = x.mul_unchecked(self);
            }
        } else {
            let mut candidates: Vec<u64> = hint_orders
                .iter()
                .filter(|&&h| h > 0)
                .flat_map(|&h| divisors(h))
                .collect();
            candidates.sort_unstable();
            candidates.dedup();
            if let Some(k) = candidates.into_iter().find(|&k| self.pow(k).is_identity()) {
                return Ok(k);
            }
        }
        Err(MatError::OrderNotFound {
            bound,
            hints: hint_orders.to_vec(),
        })
    }

    /// True iff the order of `self` is exactly `k`.
    pub fn has_order(&self, k: u64) -> bool {
        self.pow(k).is_identity() && divisors(k).into_iter().filter(|&d| d < k).all(|d| !self.pow(d).is_identity())
    }
}

impl PartialEq for Mat4 {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries && self.same_field(other)
    }
}

impl Eq for Mat4 {}

impl Hash for Mat4 {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.entries.hash(state);
    }
}

impl fmt::Debug for Mat4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat4[")?;
        for (i, row) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let bits: Vec<String> = row.iter().map(|e| format!("{:x}", e.bits())).collect();
            write!(f, "{}", bits.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Panics if the operands live over different fields; use
/// [`Mat4::mat_mul`] for the checked version.
impl Mul for &Mat4 {
    type Output = Mat4;

    fn mul(self, rhs: &Mat4) -> Mat4 {
        self.mat_mul(rhs).expect("matrix field mismatch")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suzuki::make_w;

    fn gf8() -> Arc<FieldParams> {
        Arc::new(FieldParams::new(1).unwrap())
    }

    #[test]
    fn identity_is_neutral() {
        let f = gf8();
        let i = Mat4::identity(&f);
        let a = Mat4::from_bits(&f, [[1, 2, 3, 4], [5, 6, 7, 0], [1, 1, 0, 2], [3, 0, 5, 7]]).unwrap();
        assert_eq!(&i * &a, a);
        assert_eq!(&a * &i, a);
        assert!(i.is_identity());
        assert!(!a.is_identity());
    }

    #[test]
    fn inverse_round_trip() {
        let f = gf8();
        let i = Mat4::identity(&f);
        assert_eq!(i.mat_inv().unwrap(), i);
        let a = make_w(&f, FieldElement::ONE, f.element(0b110).unwrap());
        let ai = a.mat_inv().unwrap();
        assert!((&a * &ai).is_identity());
        assert!((&ai * &a).is_identity());
        assert_eq!(ai.mat_inv().unwrap(), a);
        // needs a row swap
        let p = Mat4::from_bits(&f, [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 3], [0, 0, 5, 0]]).unwrap();
        assert!((&p * &p.mat_inv().unwrap()).is_identity());
    }

    #[test]
    fn singular_is_rejected() {
        let f = gf8();
        let s = Mat4::from_bits(&f, [[1, 2, 3, 4], [2, 4, 6, 3], [0, 0, 1, 0], [0, 0, 0, 1]]).unwrap();
        // row 2 = x · row 1
        assert_eq!(s.mat_inv().unwrap_err(), MatError::Singular);
    }

    #[test]
    fn field_mismatch_is_an_error() {
        let a = Mat4::identity(&gf8());
        let b = Mat4::identity(&Arc::new(FieldParams::with_modulus(1, 0b1101).unwrap()));
        assert_eq!(a.mat_mul(&b).unwrap_err(), MatError::FieldMismatch);
        assert_ne!(a, b);
        // separately allocated but equal fields are compatible
        let c = Mat4::identity(&gf8());
        assert!(a.mat_mul(&c).is_ok());
    }

    #[test]
    fn encode_identity_gf8() {
        let f = gf8();
        let bytes = Mat4::identity(&f).encode();
        assert_eq!(
            bytes,
            vec![1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1]
        );
    }

    #[test]
    fn encode_wide_entries_little_endian() {
        let f = Arc::new(FieldParams::new(4).unwrap()); // degree 9, two bytes per entry
        let mut rows = [[0u64; 4]; 4];
        rows[0][0] = 0x1ab;
        let a = Mat4::from_bits(&f, rows).unwrap();
        let bytes = a.encode();
        assert_eq!(bytes.len(), 32);
        assert_eq!(&bytes[..2], &[0xab, 0x01]);
        assert_eq!(Mat4::decode(&f, &bytes).unwrap(), a);
        assert!(a.packed_key().is_none());
    }

    #[test]
    fn decode_rejects_bad_input() {
        let f = gf8();
        assert!(matches!(
            Mat4::decode(&f, &[0u8; 15]),
            Err(MatError::EncodingLength { found: 15, expected: 16 })
        ));
        let mut bytes = Mat4::identity(&f).encode();
        bytes[3] = 9;
        assert!(matches!(Mat4::decode(&f, &bytes), Err(MatError::Field(_))));
    }

    #[test]
    fn order_examples() {
        let f = gf8();
        let i = Mat4::identity(&f);
        assert_eq!(i.element_order(&[], 10).unwrap(), 1);
        assert_eq!(i.element_order(&[4, 7], 10).unwrap(), 1);
        for b in f.elements().filter(|b| !b.is_zero()) {
            let w = make_w(&f, FieldElement::ZERO, b);
            assert_eq!(w.element_order(&[4, 7, 13, 5], 0).unwrap(), 2);
            assert_eq!(w.element_order(&[], 100).unwrap(), 2);
        }
        for a in f.elements().filter(|a| !a.is_zero()) {
            for b in f.elements() {
                let w = make_w(&f, a, b);
                assert_eq!(w.element_order(&[], 100).unwrap(), 4);
                assert!(w.has_order(4));
                assert!(!w.has_order(2));
            }
        }
    }

    #[test]
    fn order_not_found() {
        let f = gf8();
        let w = make_w(&f, FieldElement::ONE, FieldElement::ZERO);
        assert!(matches!(
            w.element_order(&[7, 13], 0),
            Err(MatError::OrderNotFound { .. })
        ));
        assert!(matches!(
            w.element_order(&[], 3),
            Err(MatError::OrderNotFound { bound: 3, .. })
        ));
    }
}
