//! Sz(q) as a group of 4×4 matrices over GF(q), q = 2^(2m+1).
//!
//! The 2-subgroup W consists of the lower-unitriangular matrices
//!
//! ```text
//!             | 1                 0         0  0 |
//!   w(a, b) = | a                 1         0  0 |
//!             | b                 π(a)      1  0 |
//!             | a²π(a)+ab+π(b)    aπ(a)+b   a  1 |
//! ```
//!
//! with group law w(a,b)·w(c,d) = w(a+c, b+d+π(a)c). Together with a torus
//! element d(λ) and the antidiagonal involution τ they generate the whole
//! group; that claim is checked by closure rather than assumed.

use std::sync::Arc;

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::gf2m::{FieldElement, FieldError, FieldParams};
use crate::matgrp::Mat4;
use crate::oracle::{self, OracleError};
use crate::orderstats::{self, OrderStats};

/// Closed forms are supported up to this `m` (q = 2^31).
pub const MAX_M: u32 = 15;

#[derive(Debug, Error)]
pub enum SuzukiError {
    #[error("m must be in 1..={max} (got {m}); q = 2 is outside Sz(q), q ≥ 8")]
    InvalidM { m: u32, max: u32 },
    #[error("q = {0} is not of the form 2^(2m+1) with m ≥ 1")]
    InvalidQ(u64),
    #[error("field has m = {field_m} but group parameters have m = {group_m}")]
    FieldMismatch { field_m: u32, group_m: u32 },
    #[error("generator certification failed: closure has {found} elements, expected {expected}")]
    ClosureSize { found: BigUint, expected: BigUint },
    #[error("generator certification failed: element orders {found:?} differ from the spectrum {expected:?}")]
    Spectrum { found: Vec<u64>, expected: Vec<u64> },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("generator certification failed: {0}")]
    Oracle(#[from] OracleError),
}

/// Numeric parameters of Sz(q).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuzukiParams {
    pub m: u32,
    pub q: u64,
    /// √(2q) = 2^(m+1)
    pub s: u64,
    /// q + s + 1
    pub u1: u64,
    /// q − s + 1
    pub u2: u64,
    /// q − 1
    pub v: u64,
    /// q²
    pub w_order: u64,
    #[serde(serialize_with = "orderstats::ser_decimal")]
    pub group_order: BigUint,
}

impl SuzukiParams {
    /// (q²+1)(q−1), the odd part of the group order.
    pub fn odd_part(&self) -> BigUint {
        BigUint::from(self.w_order + 1) * self.v
    }

    /// The maximal cyclic orders 4, q−1, q+s+1, q−s+1.
    pub fn spectrum_hints(&self) -> [u64; 4] {
        [4, self.v, self.u1, self.u2]
    }
}

pub fn make_params(m: u32) -> Result<SuzukiParams, SuzukiError> {
    if m == 0 || m > MAX_M {
        return Err(SuzukiError::InvalidM { m, max: MAX_M });
    }
    let q = 1u64 << (2 * m + 1);
    let s = 1u64 << (m + 1);
    let w_order = q * q;
    let group_order = BigUint::from(w_order) * (w_order + 1) * (q - 1);
    Ok(SuzukiParams {
        m,
        q,
        s,
        u1: q + s + 1,
        u2: q - s + 1,
        v: q - 1,
        w_order,
        group_order,
    })
}

/// Parameters from the field size q instead of m.
pub fn params_from_q(q: u64) -> Result<SuzukiParams, SuzukiError> {
    if !q.is_power_of_two() || q.trailing_zeros().is_multiple_of(2) {
        return Err(SuzukiError::InvalidQ(q));
    }
    let m = (q.trailing_zeros() - 1) / 2;
    if m == 0 {
        return Err(SuzukiError::InvalidQ(q));
    }
    make_params(m)
}

/// Number of conjugates of each member of the partition {W, U1, U2, V}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionClassCounts {
    #[serde(serialize_with = "orderstats::ser_decimal")]
    pub n_w: BigUint,
    #[serde(serialize_with = "orderstats::ser_decimal")]
    pub n_u1: BigUint,
    #[serde(serialize_with = "orderstats::ser_decimal")]
    pub n_u2: BigUint,
    #[serde(serialize_with = "orderstats::ser_decimal")]
    pub n_v: BigUint,
}

impl PartitionClassCounts {
    /// Nontrivial elements covered by all conjugates; equals |G| − 1 for a
    /// partition.
    pub fn coverage(&self, p: &SuzukiParams) -> BigUint {
        &self.n_w * (p.w_order - 1) + &self.n_u1 * (p.u1 - 1) + &self.n_u2 * (p.u2 - 1) + &self.n_v * (p.v - 1)
    }
}

/// Conjugate counts from the normalizer indices: |N(W)| has index q²+1,
/// |N(U_i):U_i| = 4 and |N(V):V| = 2.
pub fn closed_form_subgroup_counts(p: &SuzukiParams) -> PartitionClassCounts {
    let g = &p.group_order;
    PartitionClassCounts {
        n_w: BigUint::from(p.w_order + 1),
        n_u1: g / (4 * p.u1),
        n_u2: g / (4 * p.u2),
        n_v: g / (2 * p.v),
    }
}

/// The matrix w(a, b) of the subgroup W.
pub fn make_w(field: &Arc<FieldParams>, a: FieldElement, b: FieldElement) -> Mat4 {
    let f = &**field;
    let pa = f.frobenius_twist(a);
    let pb = f.frobenius_twist(b);
    let a_pa = f.mul(a, pa);
    let corner = f.add(f.add(f.mul(f.square(a), pa), f.mul(a, b)), pb);
    let o = FieldElement::ONE;
    let z = FieldElement::ZERO;
    Mat4::from_entries(
        field,
        [
            [o, z, z, z],
            [a, o, z, z],
            [b, pa, o, z],
            [corner, f.add(a_pa, b), a, o],
        ],
    )
    .expect("entries come from the field")
}

/// d(λ) = diag(λ^(1+2^m), λ^(2^m), λ^(−2^m), λ^(−1−2^m)).
pub fn torus_element(field: &Arc<FieldParams>, lambda: FieldElement) -> Result<Mat4, FieldError> {
    let f = &**field;
    let e = 1u64 << f.m();
    let li = f.inv(lambda)?;
    let diag = [f.pow(lambda, 1 + e), f.pow(lambda, e), f.pow(li, e), f.pow(li, 1 + e)];
    let mut entries = [[FieldElement::ZERO; 4]; 4];
    for (i, d) in diag.into_iter().enumerate() {
        entries[i][i] = d;
    }
    Ok(Mat4::from_entries(field, entries).expect("entries come from the field"))
}

/// The antidiagonal involution τ.
pub fn tau(field: &Arc<FieldParams>) -> Mat4 {
    let mut entries = [[FieldElement::ZERO; 4]; 4];
    for (i, row) in entries.iter_mut().enumerate() {
        row[3 - i] = FieldElement::ONE;
    }
    Mat4::from_entries(field, entries).expect("entries come from the field")
}

/// {w(1,0), w(0,1), d(λ), τ} with λ the smallest generator of GF(q)*.
/// Not certified; see [`standard_generators`].
pub fn candidate_generators(field: &Arc<FieldParams>) -> Vec<Mat4> {
    let lambda = field.primitive_element();
    vec![
        make_w(field, FieldElement::ONE, FieldElement::ZERO),
        make_w(field, FieldElement::ZERO, FieldElement::ONE),
        torus_element(field, lambda).expect("primitive element is nonzero"),
        tau(field),
    ]
}

/// Generators of W: w(x^i, 0) and w(0, x^i) over the polynomial basis.
pub fn w_generators(field: &Arc<FieldParams>) -> Vec<Mat4> {
    field
        .basis()
        .flat_map(|e| [make_w(field, e, FieldElement::ZERO), make_w(field, FieldElement::ZERO, e)])
        .collect()
}

/// Enumerates the closure of the candidate generators and checks its size
/// and element orders against |Sz(q)| and the closed-form spectrum. Returns
/// the census on success.
pub fn certify_generators(
    p: &SuzukiParams,
    field: &Arc<FieldParams>,
    generators: &[Mat4],
    limit: u64,
) -> Result<OrderStats, SuzukiError> {
    if field.m() != p.m {
        return Err(SuzukiError::FieldMismatch {
            field_m: field.m(),
            group_m: p.m,
        });
    }
    let census = oracle::closure_census(generators, limit, &p.spectrum_hints())?;
    if census.total() != &p.group_order {
        return Err(SuzukiError::ClosureSize {
            found: census.total().clone(),
            expected: p.group_order.clone(),
        });
    }
    let expected = orderstats::spectrum_closed_form(p);
    let found = census.spectrum();
    if found != expected {
        return Err(SuzukiError::Spectrum {
            found: found.iter().copied().collect(),
            expected: expected.iter().copied().collect(),
        });
    }
    Ok(census)
}

/// A certified generating set of Sz(q). Fails if the closure of the
/// candidates is not exactly Sz(q).
pub fn standard_generators(p: &SuzukiParams, field: &Arc<FieldParams>, limit: u64) -> Result<Vec<Mat4>, SuzukiError> {
    let gens = candidate_generators(field);
    certify_generators(p, field, &gens, limit)?;
    Ok(gens)
}
