//! Element-order statistics: the counts m_i of elements of each order i,
//! the spectrum, the type function, closed forms for Sz(q), the classical
//! divisibility constraints, and the prime graph.

mod arith;
mod graph;
mod lemmas;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::suzuki::SuzukiParams;

pub use arith::{
    coprime_part, divisors, divisors_big, euler_phi, factorize, factorize_big, multiplicative_order, odd_part,
    pow_mod,
};
pub use graph::{prime_graph, GraphError, PrimeGraph};
pub use lemmas::{frobenius_check, totient_divisor_check, weisner_check, weisner_count, LemmaReport, WeisnerCount};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StatsError {
    #[error("counts sum to {sum}, total is {total}")]
    SumMismatch { sum: BigUint, total: BigUint },
    #[error("m_1 = {0}, expected 1")]
    Identity(BigUint),
    #[error("m_{order} = {count} is odd")]
    OddCount { order: u64, count: BigUint },
    #[error("element order 0 is not allowed")]
    ZeroOrder,
    #[error("invalid decimal integer {0:?}")]
    Parse(String),
}

pub(crate) fn ser_decimal<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_str_radix(10))
}

pub(crate) fn parse_decimal(s: &str) -> Result<BigUint, StatsError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(StatsError::Parse(s.to_string()));
    }
    BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| StatsError::Parse(s.to_string()))
}

/// Counts of elements by order, with the group order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderStats {
    counts: BTreeMap<u64, BigUint>,
    total: BigUint,
}

impl OrderStats {
    /// No invariant checks; see [`OrderStats::check_invariants`].
    pub fn new(counts: BTreeMap<u64, BigUint>, total: BigUint) -> Self {
        OrderStats { counts, total }
    }

    /// Stats whose total is the sum of the counts.
    pub fn from_counts(counts: BTreeMap<u64, BigUint>) -> Self {
        let total = counts.values().sum();
        OrderStats { counts, total }
    }

    pub fn counts(&self) -> &BTreeMap<u64, BigUint> {
        &self.counts
    }

    pub fn counts_mut(&mut self) -> &mut BTreeMap<u64, BigUint> {
        &mut self.counts
    }

    pub fn total(&self) -> &BigUint {
        &self.total
    }

    /// m_i, zero when absent.
    pub fn count(&self, order: u64) -> BigUint {
        self.counts.get(&order).cloned().unwrap_or_default()
    }

    /// Orders with a nonzero count.
    pub fn spectrum(&self) -> Spectrum {
        Spectrum {
            orders: self
                .counts
                .iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(&i, _)| i)
                .collect(),
        }
    }

    /// The set nse(G) of nonzero counts.
    pub fn nse_set(&self) -> BTreeSet<BigUint> {
        self.counts.values().filter(|c| !c.is_zero()).cloned().collect()
    }

    pub fn check_invariants(&self) -> Result<(), StatsError> {
        if self.counts.contains_key(&0) {
            return Err(StatsError::ZeroOrder);
        }
        let sum: BigUint = self.counts.values().sum();
        if sum != self.total {
            return Err(StatsError::SumMismatch {
                sum,
                total: self.total.clone(),
            });
        }
        let m1 = self.count(1);
        if !m1.is_one() {
            return Err(StatsError::Identity(m1));
        }
        for (&i, c) in self.counts.range(3..) {
            if c.bit(0) {
                return Err(StatsError::OddCount {
                    order: i,
                    count: c.clone(),
                });
            }
        }
        Ok(())
    }

    /// Keys whose counts differ between `self` and `other` (absent = 0).
    pub fn diff(&self, other: &OrderStats) -> Vec<(u64, BigUint, BigUint)> {
        let keys: BTreeSet<u64> = self.counts.keys().chain(other.counts.keys()).copied().collect();
        keys.into_iter()
            .filter_map(|k| {
                let (a, b) = (self.count(k), other.count(k));
                (a != b).then_some((k, a, b))
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("stats serialize")
    }
}

impl fmt::Display for OrderStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>12}  count", "order")?;
        for (i, c) in &self.counts {
            writeln!(f, "{:>12}  {}", i, c)?;
        }
        write!(f, "{:>12}  {}", "total", self.total)
    }
}

struct DecimalCounts<'a>(&'a BTreeMap<u64, BigUint>);

impl Serialize for DecimalCounts<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (i, c) in self.0 {
            map.serialize_entry(&i.to_string(), &c.to_str_radix(10))?;
        }
        map.end()
    }
}

/// `{"total": "<decimal>", "counts": {"<order>": "<decimal>"}}`, orders
/// ascending numerically.
impl Serialize for OrderStats {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("total", &self.total.to_str_radix(10))?;
        map.serialize_entry("counts", &DecimalCounts(&self.counts))?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for OrderStats {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            total: String,
            counts: BTreeMap<String, String>,
        }
        let raw = Raw::deserialize(d)?;
        let total = parse_decimal(&raw.total).map_err(D::Error::custom)?;
        let mut counts = BTreeMap::new();
        for (k, v) in raw.counts {
            let order: u64 = k.parse().map_err(|_| D::Error::custom(format!("invalid order {k:?}")))?;
            counts.insert(order, parse_decimal(&v).map_err(D::Error::custom)?);
        }
        Ok(OrderStats { counts, total })
    }
}

/// A divisor-closed set of element orders.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Spectrum {
    orders: BTreeSet<u64>,
}

impl Spectrum {
    /// The divisor closure of `maximal`.
    pub fn from_maximal(maximal: impl IntoIterator<Item = u64>) -> Self {
        Spectrum {
            orders: maximal.into_iter().filter(|&n| n > 0).flat_map(divisors).collect(),
        }
    }

    pub fn orders(&self) -> &BTreeSet<u64> {
        &self.orders
    }

    pub fn iter(&self) -> impl Iterator<Item = &u64> {
        self.orders.iter()
    }

    pub fn contains(&self, i: u64) -> bool {
        self.orders.contains(&i)
    }

    pub fn is_divisor_closed(&self) -> bool {
        self.orders.iter().all(|&i| divisors(i).into_iter().all(|d| self.orders.contains(&d)))
    }

    /// Elements not dividing any other element.
    pub fn maximal(&self) -> Vec<u64> {
        self.orders
            .iter()
            .copied()
            .filter(|&i| !self.orders.iter().any(|&j| j != i && j % i == 0))
            .collect()
    }
}

impl FromIterator<u64> for Spectrum {
    /// Takes the orders as given; use [`Spectrum::from_maximal`] for closure.
    fn from_iter<T: IntoIterator<Item = u64>>(iter: T) -> Self {
        Spectrum {
            orders: iter.into_iter().collect(),
        }
    }
}

/// Divisors of 4, q−1, q+s+1 and q−s+1.
pub fn spectrum_closed_form(p: &SuzukiParams) -> Spectrum {
    Spectrum::from_maximal(p.spectrum_hints())
}

/// Exact element-order counts of Sz(q):
///
/// * m_2 = (q−1)(q²+1), m_4 = q(q−1)(q²+1);
/// * i > 1 dividing q±s+1: m_i = φ(i)·q²(q∓s+1)(q−1)/4;
/// * i > 1 dividing q−1:   m_i = φ(i)·q²(q²+1)/2.
pub fn nse_closed_form(p: &SuzukiParams) -> OrderStats {
    let q = BigUint::from(p.q);
    let q2 = BigUint::from(p.w_order);
    let qm1 = BigUint::from(p.v);
    let mut counts = BTreeMap::new();
    counts.insert(1u64, BigUint::one());
    counts.insert(2, &qm1 * (&q2 + 1u32));
    counts.insert(4, &q * &qm1 * (&q2 + 1u32));

    // the divisor comes from one torus order, the cofactor is the other one
    let cyclic = [(p.u1, p.u2), (p.u2, p.u1)];
    for (source, cofactor) in cyclic {
        let per_generator = &q2 * cofactor * &qm1 / 4u32;
        for i in divisors(source).into_iter().skip(1) {
            let prev = counts.insert(i, &per_generator * euler_phi(i));
            assert!(prev.is_none(), "torus orders share divisor {i}");
        }
    }
    let per_generator = &q2 * (&q2 + 1u32) / 2u32;
    for i in divisors(p.v).into_iter().skip(1) {
        let prev = counts.insert(i, &per_generator * euler_phi(i));
        assert!(prev.is_none(), "q-1 shares divisor {i} with q±s+1");
    }

    let stats = OrderStats::from_counts(counts);
    assert_eq!(stats.total, p.group_order, "closed-form counts do not sum to |Sz(q)|");
    stats
}

/// |G(n)| = Σ_{j | n} m_j.
pub fn type_function(s: &OrderStats, n: &BigUint) -> BigUint {
    s.counts
        .iter()
        .filter(|(&j, _)| (n % j).is_zero())
        .map(|(_, c)| c)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suzuki::make_params;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn stats(pairs: &[(u64, u64)]) -> OrderStats {
        OrderStats::from_counts(pairs.iter().map(|&(i, c)| (i, big(c))).collect())
    }

    #[test]
    fn spectrum_examples() {
        let s1 = spectrum_closed_form(&make_params(1).unwrap());
        assert_eq!(s1.orders().iter().copied().collect::<Vec<_>>(), vec![1, 2, 4, 5, 7, 13]);
        let s2 = spectrum_closed_form(&make_params(2).unwrap());
        assert_eq!(s2.orders().iter().copied().collect::<Vec<_>>(), vec![1, 2, 4, 5, 25, 31, 41]);
        assert!(s1.is_divisor_closed() && s2.is_divisor_closed());
        assert_eq!(s2.maximal(), vec![4, 25, 31, 41]);
        let not_closed: Spectrum = [1, 6].into_iter().collect();
        assert!(!not_closed.is_divisor_closed());
    }

    #[test]
    fn nse_m1() {
        let got = nse_closed_form(&make_params(1).unwrap());
        let want = stats(&[(1, 1), (2, 455), (4, 3640), (5, 5824), (7, 12480), (13, 6720)]);
        assert_eq!(got, want);
        assert_eq!(got.total(), &big(29120));
        got.check_invariants().unwrap();
    }

    #[test]
    fn nse_m2() {
        let got = nse_closed_form(&make_params(2).unwrap());
        let want = stats(&[
            (1, 1),
            (2, 31775),
            (4, 1016800),
            (5, 1301504),
            (25, 6507520),
            (31, 15744000),
            (41, 7936000),
        ]);
        assert_eq!(got, want);
        assert_eq!(got.total(), &big(32537600));
    }

    #[test]
    fn sign_convention_pairs_divisor_with_other_torus() {
        // order 13 divides q+s+1 and must carry the cofactor q−s+1 = 5
        let p = make_params(1).unwrap();
        let s = nse_closed_form(&p);
        assert_eq!(s.count(13), big(12 * 64 * 5 * 7 / 4));
        assert_eq!(s.count(5), big(4 * 64 * 13 * 7 / 4));
    }

    #[test]
    fn closed_form_identities_m1_to_8() {
        for m in 1..=8 {
            let p = make_params(m).unwrap();
            let s = nse_closed_form(&p);
            let sum: BigUint = s.counts().values().sum();
            assert_eq!(sum, p.group_order);
            let q4 = BigUint::from(p.q).pow(4);
            assert_eq!(type_function(&s, &big(4)), q4);
            s.check_invariants().unwrap();
            // m_2 is the only odd value above 1
            let odd: Vec<_> = s.nse_set().into_iter().filter(|c| c.bit(0) && !c.is_one()).collect();
            assert_eq!(odd, vec![s.count(2)]);
            // q² | m_i away from the 2-part
            for (&i, c) in s.counts() {
                if ![1, 2, 4].contains(&i) {
                    assert!((c % p.w_order).is_zero(), "m = {m}, i = {i}");
                }
            }
            assert_eq!(s.spectrum(), spectrum_closed_form(&p));
        }
    }

    #[test]
    fn type_function_examples() {
        let s = nse_closed_form(&make_params(1).unwrap());
        assert_eq!(type_function(&s, &big(1)), big(1));
        assert_eq!(type_function(&s, &big(4)), big(4096));
        assert_eq!(type_function(&s, &big(29120)), big(29120));
        assert_eq!(type_function(&s, &big(3)), big(1));
    }

    #[test]
    fn invariant_violations() {
        assert!(matches!(
            OrderStats::new(stats(&[(1, 1)]).counts().clone(), big(2)).check_invariants(),
            Err(StatsError::SumMismatch { .. })
        ));
        assert!(matches!(
            stats(&[(1, 2)]).check_invariants(),
            Err(StatsError::Identity(_))
        ));
        assert!(matches!(
            stats(&[(1, 1), (3, 3)]).check_invariants(),
            Err(StatsError::OddCount { order: 3, .. })
        ));
        stats(&[(1, 1), (2, 1)]).check_invariants().unwrap();
    }

    #[test]
    fn json_schema_and_round_trip() {
        let s = nse_closed_form(&make_params(1).unwrap());
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(
            text,
            r#"{"total":"29120","counts":{"1":"1","2":"455","4":"3640","5":"5824","7":"12480","13":"6720"}}"#
        );
        let back: OrderStats = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        // values beyond 64 bits survive
        let big_stats = nse_closed_form(&make_params(8).unwrap());
        let back: OrderStats = serde_json::from_str(&serde_json::to_string(&big_stats).unwrap()).unwrap();
        assert_eq!(back, big_stats);
        assert!(serde_json::from_str::<OrderStats>(r#"{"total":"-1","counts":{}}"#).is_err());
        assert!(serde_json::from_str::<OrderStats>(r#"{"total":"1","counts":{"x":"1"}}"#).is_err());
    }

    #[test]
    fn diff_lists_changed_keys() {
        let a = stats(&[(1, 1), (2, 3)]);
        let b = stats(&[(1, 1), (2, 1), (3, 2)]);
        assert_eq!(a.diff(&b), vec![(2, big(3), big(1)), (3, big(0), big(2))]);
        assert!(a.diff(&a).is_empty());
    }
}
