//! Arithmetic in the binary field GF(2^(2m+1)).
//!
//! Elements are bit-polynomials in a polynomial basis: bit `i` of an element
//! is the coefficient of x^i, reduced modulo an explicitly stored irreducible
//! modulus of degree 2m+1. The field also carries the Suzuki twist
//! π: x ↦ x^(2^(m+1)), whose square is the Frobenius map x ↦ x².
//!
//! ```text
//! 0b1011    → x³ + x + 1        (GF(8))
//! 0b100101  → x⁵ + x² + 1       (GF(32))
//! ```

use std::fmt;

use thiserror::Error;

/// Largest supported `m`; the field degree 2m+1 must fit in 31 bits so that
/// unreduced products fit in a `u64`.
pub const MAX_FIELD_M: u32 = 15;

/// Fields up to this degree get log/antilog tables for multiplication.
const TABLE_MAX_DEGREE: u32 = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("m must be in 1..={max}, got {m}")]
    InvalidM { m: u32, max: u32 },
    #[error("modulus {modulus:#x} has degree {found}, expected {expected}")]
    ModulusDegree {
        modulus: u64,
        found: u32,
        expected: u32,
    },
    #[error("modulus {0:#x} is reducible over GF(2)")]
    Reducible(u64),
    #[error("element {bits:#x} does not belong to GF(2^{degree})")]
    Mismatch { bits: u64, degree: u32 },
    #[error("division by zero")]
    DivisionByZero,
}

/// An element of GF(2^(2m+1)) as a reduced bit-polynomial.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

#[derive(Clone)]
struct LogTables {
    // exp has length 2(q-1) so that exp[log a + log b] needs no reduction
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Parameters of GF(q), q = 2^(2m+1).
#[derive(Clone)]
pub struct FieldParams {
    m: u32,
    degree: u32,
    modulus: u64,
    twist_exponent: u64,
    tables: Option<LogTables>,
}

impl fmt::Debug for FieldParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldParams")
            .field("m", &self.m)
            .field("degree", &self.degree)
            .field("modulus", &format_args!("{:#x}", self.modulus))
            .field("twist_exponent", &self.twist_exponent)
            .finish()
    }
}

impl PartialEq for FieldParams {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldParams {}

impl FieldParams {
    /// GF(2^(2m+1)) with the default modulus from [`find_modulus`].
    pub fn new(m: u32) -> Result<Self, FieldError> {
        check_m(m)?;
        Self::with_modulus(m, find_modulus(m))
    }

    /// GF(2^(2m+1)) with a caller-chosen modulus, which must be irreducible
    /// of degree 2m+1.
    pub fn with_modulus(m: u32, modulus: u64) -> Result<Self, FieldError> {
        check_m(m)?;
        let degree = 2 * m + 1;
        let found = poly_degree(modulus).unwrap_or(0);
        if found != degree {
            return Err(FieldError::ModulusDegree {
                modulus,
                found,
                expected: degree,
            });
        }
        if !is_irreducible(modulus) {
            return Err(FieldError::Reducible(modulus));
        }
        let mut params = FieldParams {
            m,
            degree,
            modulus,
            twist_exponent: 1u64 << (m + 1),
            tables: None,
        };
        if degree <= TABLE_MAX_DEGREE {
            params.tables = Some(params.build_tables());
        }
        Ok(params)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn twist_exponent(&self) -> u64 {
        self.twist_exponent
    }

    /// Field size q = 2^(2m+1).
    pub fn order(&self) -> u64 {
        1u64 << self.degree
    }

    /// Validates `bits` as an element of this field.
    pub fn element(&self, bits: u64) -> Result<FieldElement, FieldError> {
        if bits >> self.degree != 0 {
            return Err(FieldError::Mismatch {
                bits,
                degree: self.degree,
            });
        }
        Ok(FieldElement(bits as u32))
    }

    /// All q elements in increasing bit order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order() as u32).map(FieldElement)
    }

    /// The basis monomials 1, x, ..., x^(2m).
    pub fn basis(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.degree).map(|i| FieldElement(1 << i))
    }

    #[inline]
    pub fn contains(&self, a: FieldElement) -> bool {
        a.0 >> self.degree == 0
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(self.contains(a) && self.contains(b));
        FieldElement(a.0 ^ b.0)
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(self.contains(a) && self.contains(b));
        match &self.tables {
            Some(t) => {
                if a.0 == 0 || b.0 == 0 {
                    FieldElement::ZERO
                } else {
                    FieldElement(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
                }
            }
            None => self.mul_shift_xor(a, b),
        }
    }

    /// Shift-and-xor product followed by reduction. Used directly for large
    /// fields and to build the log tables for small ones.
    pub fn mul_shift_xor(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(poly_mulmod(a.0 as u64, b.0 as u64, self.modulus) as u32)
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    /// `a^k`, with `pow(0, 0) = 1`.
    pub fn pow(&self, a: FieldElement, mut k: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            k >>= 1;
        }
        acc
    }

    /// Multiplicative inverse as `a^(q-2)`.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(a, self.order() - 2))
    }

    /// π(a) = a^(2^(m+1)), computed as m+1 squarings.
    pub fn frobenius_twist(&self, a: FieldElement) -> FieldElement {
        (0..=self.m).fold(a, |x, _| self.square(x))
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: FieldElement) -> Result<u64, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let n = self.order() - 1;
        let mut ord = n;
        for (p, _) in factor_u64(n) {
            while ord.is_multiple_of(p) && self.pow(a, ord / p) == FieldElement::ONE {
                ord /= p;
            }
        }
        Ok(ord)
    }

    /// The smallest element (in bit order) generating GF(q)*.
    pub fn primitive_element(&self) -> FieldElement {
        let n = self.order() - 1;
        let primes: Vec<u64> = factor_u64(n).into_iter().map(|(p, _)| p).collect();
        (2..self.order() as u32)
            .map(FieldElement)
            .find(|&a| {
                primes
                    .iter()
                    .all(|&p| self.pow_shift_xor(a, n / p) != FieldElement::ONE)
            })
            .expect("GF(q)* is cyclic")
    }

    fn pow_shift_xor(&self, a: FieldElement, mut k: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_shift_xor(acc, base);
            }
            base = self.mul_shift_xor(base, base);
            k >>= 1;
        }
        acc
    }

    fn build_tables(&self) -> LogTables {
        let q = self.order() as usize;
        let g = self.primitive_element();
        let mut exp = vec![0u32; 2 * (q - 1)];
        let mut log = vec![0u32; q];
        let mut x = FieldElement::ONE;
        for i in 0..q - 1 {
            exp[i] = x.0;
            exp[i + q - 1] = x.0;
            log[x.0 as usize] = i as u32;
            x = self.mul_shift_xor(x, g);
        }
        LogTables { exp, log }
    }
}

fn check_m(m: u32) -> Result<(), FieldError> {
    if m == 0 || m > MAX_FIELD_M {
        return Err(FieldError::InvalidM {
            m,
            max: MAX_FIELD_M,
        });
    }
    Ok(())
}

/// Degree of a bit-polynomial, `None` for zero.
pub fn poly_degree(p: u64) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(63 - p.leading_zeros())
    }
}

/// Product of `a` and `b` reduced modulo `modulus` (degree ≤ 32).
pub fn poly_mulmod(a: u64, b: u64, modulus: u64) -> u64 {
    let d = poly_degree(modulus).expect("nonzero modulus");
    let mut a = poly_rem(a, modulus);
    let mut b = poly_rem(b, modulus);
    let mut r = 0u64;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> d & 1 == 1 {
            a ^= modulus;
        }
    }
    r
}

/// Remainder of polynomial division over GF(2).
pub fn poly_rem(mut a: u64, modulus: u64) -> u64 {
    let d = poly_degree(modulus).expect("nonzero modulus");
    while let Some(da) = poly_degree(a) {
        if da < d {
            break;
        }
        a ^= modulus << (da - d);
    }
    a
}

pub fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// Rabin's test: f of degree d is irreducible iff x^(2^d) ≡ x (mod f) and
/// gcd(x^(2^(d/p)) - x, f) = 1 for every prime p dividing d.
pub fn is_irreducible(f: u64) -> bool {
    let d = match poly_degree(f) {
        Some(d) if (1..=32).contains(&d) => d,
        _ => return false,
    };
    if d == 1 {
        return true;
    }
    let x = poly_rem(0b10, f);
    let frob = |k: u32| (0..k).fold(x, |acc, _| poly_mulmod(acc, acc, f));
    if frob(d) != x {
        return false;
    }
    factor_u64(d as u64)
        .into_iter()
        .all(|(p, _)| poly_gcd(f, frob(d / p as u32) ^ x) == 1)
}

/// The numerically smallest irreducible polynomial of degree 2m+1.
pub fn find_modulus(m: u32) -> u64 {
    let d = 2 * m + 1;
    assert!(d <= 32, "degree {d} out of range");
    ((1u64 << d) | 1..1u64 << (d + 1))
        .step_by(2)
        .find(|&f| is_irreducible(f))
        .expect("irreducible polynomials exist in every degree")
}

fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}
