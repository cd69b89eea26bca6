//! Divisibility constraints every finite group satisfies:
//!
//! * Frobenius: n | |G(n)| for every n dividing |G|.
//! * φ(i) | m_i, i | Σ_{j|i} m_j, and m_i is even for i > 2.
//! * Weisner: the number of elements whose order is a multiple of t is zero
//!   or a multiple of the largest divisor of |G| prime to t.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use super::{coprime_part, divisors_big, euler_phi, ser_decimal, type_function, OrderStats};

/// Outcome of one lemma applied across many arguments.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub name: String,
    pub checked: usize,
    pub violations: Vec<String>,
}

impl LemmaReport {
    fn new(name: &str) -> Self {
        LemmaReport {
            name: name.to_string(),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn frobenius_check(s: &OrderStats) -> LemmaReport {
    let mut report = LemmaReport::new("frobenius");
    if s.total().is_zero() {
        report.violations.push("total is zero".into());
        return report;
    }
    for n in divisors_big(s.total()) {
        report.checked += 1;
        let g = type_function(s, &n);
        if !(&g % &n).is_zero() {
            report.violations.push(format!("{n} does not divide |G({n})| = {g}"));
        }
    }
    report
}

pub fn totient_divisor_check(s: &OrderStats) -> LemmaReport {
    let mut report = LemmaReport::new("totient-divisor-sum");
    for (&i, c) in s.counts() {
        report.checked += 1;
        if i == 0 {
            report.violations.push("element order 0".into());
            continue;
        }
        let phi = euler_phi(i);
        if !(c % phi).is_zero() {
            report.violations.push(format!("phi({i}) = {phi} does not divide m_{i} = {c}"));
        }
        let g = type_function(s, &BigUint::from(i));
        if !(&g % i).is_zero() {
            report.violations.push(format!("{i} does not divide sum of m_j over j | {i} = {g}"));
        }
        if i > 2 && c.bit(0) {
            report.violations.push(format!("m_{i} = {c} is odd"));
        }
    }
    report
}

/// f(t) with its Weisner modulus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeisnerCount {
    pub t: u64,
    #[serde(serialize_with = "ser_decimal")]
    pub f: BigUint,
    #[serde(serialize_with = "ser_decimal")]
    pub coprime_part: BigUint,
    pub passed: bool,
}

pub fn weisner_count(s: &OrderStats, t: u64) -> WeisnerCount {
    assert!(t >= 1, "t must be positive");
    let f: BigUint = s.counts().iter().filter(|(&i, _)| i % t == 0).map(|(_, c)| c).sum();
    let cp = coprime_part(s.total(), &BigUint::from(t));
    let passed = f.is_zero() || (!cp.is_zero() && (&f % &cp).is_zero());
    WeisnerCount {
        t,
        f,
        coprime_part: cp,
        passed,
    }
}

/// Weisner's condition for every divisor t > 1 of |G| that fits in 64 bits.
pub fn weisner_check(s: &OrderStats) -> LemmaReport {
    let mut report = LemmaReport::new("weisner");
    if s.total().is_zero() {
        report.violations.push("total is zero".into());
        return report;
    }
    for t in divisors_big(s.total()).iter().skip(1).filter_map(|t| u64::try_from(t).ok()) {
        report.checked += 1;
        let w = weisner_count(s, t);
        if !w.passed {
            report.violations.push(format!(
                "f({t}) = {} is neither 0 nor a multiple of {}",
                w.f, w.coprime_part
            ));
        }
    }
    report
}
