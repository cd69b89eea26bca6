//! Decides whether a candidate profile (|G|, nse(G)) matches some Sz(q).
//!
//! A profile is accepted when its order is |Sz(q)| for some q, its nse set
//! equals that of Sz(q), and the arithmetic facts that force a group with
//! that profile to be Sz(q) all hold for this q: 2 is isolated in the prime
//! graph, neither Frobenius nor 2-Frobenius splittings are possible, and no
//! smaller Suzuki group can appear as the simple section.
//!
//! Only these profile-level certificates are checked. Arguments that range
//! over unknown multiplicities of a hypothetical group are not decidable
//! from (|G|, nse(G)) alone and are out of reach here.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::orderstats::{multiplicative_order, nse_closed_form, odd_part, parse_decimal, spectrum_closed_form};
use crate::suzuki::{make_params, SuzukiParams};

pub const REPORT_NOTE: &str = "ACCEPT means the profile is consistent with Sz(q) and every arithmetic \
certificate needed to conclude G = Sz(q) holds; it is not an independent isomorphism proof. \
Conditions quantified over unknown element-order multiplicities of G are not checked.";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GateError {
    #[error("malformed profile: {0}")]
    Input(String),
    #[error("nse set has {0} odd values above 1, expected exactly one")]
    Ambiguous(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Nse {
    Set(BTreeSet<BigUint>),
    Map(BTreeMap<u64, BigUint>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateProfile {
    pub order: BigUint,
    pub nse: Nse,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Decimal {
    Str(String),
    Num(u64),
}

impl Decimal {
    fn parse(self) -> Result<BigUint, GateError> {
        match self {
            Decimal::Num(n) => Ok(BigUint::from(n)),
            Decimal::Str(s) => parse_decimal(&s).map_err(|e| GateError::Input(e.to_string())),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProfile {
    order: Decimal,
    nse_set: Option<Vec<Decimal>>,
    nse_map: Option<BTreeMap<String, Decimal>>,
}

impl CandidateProfile {
    pub fn from_set(order: BigUint, set: impl IntoIterator<Item = BigUint>) -> Self {
        CandidateProfile {
            order,
            nse: Nse::Set(set.into_iter().collect()),
        }
    }

    pub fn from_map(order: BigUint, map: BTreeMap<u64, BigUint>) -> Self {
        CandidateProfile {
            order,
            nse: Nse::Map(map),
        }
    }

    /// Parses `{"order": "...", "nse_set": [...]}` or
    /// `{"order": "...", "nse_map": {"<order>": "<count>"}}`. Integers may be
    /// decimal strings or JSON numbers.
    pub fn from_json(text: &str) -> Result<Self, GateError> {
        let raw: RawProfile = serde_json::from_str(text).map_err(|e| GateError::Input(e.to_string()))?;
        let order = raw.order.parse()?;
        let nse = match (raw.nse_set, raw.nse_map) {
            (Some(set), None) => Nse::Set(set.into_iter().map(Decimal::parse).collect::<Result<_, _>>()?),
            (None, Some(map)) => {
                let mut out = BTreeMap::new();
                for (k, v) in map {
                    let i: u64 = k
                        .parse()
                        .map_err(|_| GateError::Input(format!("invalid element order {k:?}")))?;
                    out.insert(i, v.parse()?);
                }
                Nse::Map(out)
            }
            _ => return Err(GateError::Input("exactly one of nse_set and nse_map is required".into())),
        };
        Ok(CandidateProfile { order, nse })
    }

    pub fn validate(&self) -> Result<(), GateError> {
        if self.order.is_zero() {
            return Err(GateError::Input("order must be positive".into()));
        }
        match &self.nse {
            Nse::Set(set) => {
                if set.is_empty() {
                    return Err(GateError::Input("nse set is empty".into()));
                }
                if set.iter().any(Zero::is_zero) {
                    return Err(GateError::Input("nse values must be positive".into()));
                }
            }
            Nse::Map(map) => {
                if map.is_empty() {
                    return Err(GateError::Input("nse map is empty".into()));
                }
                if map.contains_key(&0) {
                    return Err(GateError::Input("element order 0".into()));
                }
                if map.values().any(Zero::is_zero) {
                    return Err(GateError::Input("counts must be positive".into()));
                }
                let sum: BigUint = map.values().sum();
                if sum != self.order {
                    return Err(GateError::Input(format!("counts sum to {sum}, order is {}", self.order)));
                }
            }
        }
        Ok(())
    }

    pub fn nse_set(&self) -> BTreeSet<BigUint> {
        match &self.nse {
            Nse::Set(s) => s.clone(),
            Nse::Map(m) => m.values().cloned().collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Accept,
    Reject,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accept => "ACCEPT",
            Verdict::Reject => "REJECT",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GateReport {
    pub verdict: Verdict,
    pub inferred_m: Option<u32>,
    pub checks: Vec<Check>,
    pub note: String,
}

impl GateReport {
    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn suzuki_order(m: u32) -> BigUint {
    let q = BigUint::one() << (2 * m + 1);
    let q2 = &q * &q;
    &q2 * (&q2 + 1u32) * (q - 1u32)
}

/// The m ≥ 1 with order = 2^(4m+2)(2^(4m+2)+1)(2^(2m+1)−1), if any.
pub fn infer_q(order: &BigUint) -> Option<u32> {
    let mut m = 1u32;
    while (BigUint::one() << (4 * m + 2)) <= *order {
        if suzuki_order(m) == *order {
            return Some(m);
        }
        m += 1;
    }
    None
}

/// The unique odd value above 1, taken as the number of involutions.
pub fn identify_m2(nse_set: &BTreeSet<BigUint>) -> Result<BigUint, GateError> {
    let odd: Vec<&BigUint> = nse_set.iter().filter(|c| c.bit(0) && !c.is_one()).collect();
    match odd.as_slice() {
        [m2] => Ok((*m2).clone()),
        other => Err(GateError::Ambiguous(other.len())),
    }
}

pub fn nse_match_check(profile: &CandidateProfile, m: u32) -> Check {
    const NAME: &str = "nse_match";
    let Ok(p) = make_params(m) else {
        return Check::new(NAME, false, format!("m = {m} is out of range"));
    };
    let expected = nse_closed_form(&p);
    let want = expected.nse_set();
    let got = profile.nse_set();
    if got != want {
        let missing: Vec<String> = want.difference(&got).map(|n| n.to_string()).collect();
        let extra: Vec<String> = got.difference(&want).map(|n| n.to_string()).collect();
        return Check::new(
            NAME,
            false,
            format!("nse set differs: missing [{}], unexpected [{}]", missing.join(", "), extra.join(", ")),
        );
    }
    if let Nse::Map(map) = &profile.nse {
        if map != expected.counts() {
            let bad: Vec<String> = expected
                .counts()
                .keys()
                .chain(map.keys())
                .collect::<BTreeSet<_>>()
                .into_iter()
                .filter(|i| map.get(i) != expected.counts().get(i))
                .map(|i| i.to_string())
                .collect();
            return Check::new(NAME, false, format!("counts differ at orders [{}]", bad.join(", ")));
        }
        return Check::new(NAME, true, format!("{} counts match m_i(Sz(q)) key by key", map.len()));
    }
    Check::new(NAME, true, format!("{} values match nse(Sz(q))", want.len()))
}

fn identify_m2_check(profile: &CandidateProfile, p: &SuzukiParams) -> Check {
    const NAME: &str = "identify_m2";
    let expected = BigUint::from(p.v) * (p.w_order + 1);
    match identify_m2(&profile.nse_set()) {
        Ok(m2) if m2 == expected => Check::new(NAME, true, format!("m_2 = {m2} = (q-1)(q^2+1)")),
        Ok(m2) => Check::new(NAME, false, format!("m_2 = {m2}, expected (q-1)(q^2+1) = {expected}")),
        Err(e) => Check::new(NAME, false, e.to_string()),
    }
}

/// 2 is isolated in the prime graph: q² divides every m_i with i ∉ {1,2,4},
/// (q²+1)(q−1) is the odd part of |Sz(q)|, and m_2 + m_4 = (q²+1)(q−1)·r
/// with r odd.
pub fn isolation_certificate(m: u32) -> Check {
    const NAME: &str = "isolation_certificate";
    let Ok(p) = make_params(m) else {
        return Check::new(NAME, false, format!("m = {m} is out of range"));
    };
    let stats = nse_closed_form(&p);
    let not_divisible: Vec<u64> = stats
        .counts()
        .iter()
        .filter(|(i, c)| ![1, 2, 4].contains(*i) && !(*c % p.w_order).is_zero())
        .map(|(&i, _)| i)
        .collect();
    let odd = p.odd_part();
    let odd_ok = odd_part(&p.group_order) == odd;
    let f2 = stats.count(2) + stats.count(4);
    let r_ok = (&f2 % &odd).is_zero() && (&f2 / &odd).bit(0);
    let r = &f2 / &odd;
    let passed = not_divisible.is_empty() && odd_ok && r_ok;
    Check::new(
        NAME,
        passed,
        format!(
            "q^2 | m_i for i not in {{1,2,4}}: {}; odd part of |G| = {odd}: {}; f(2) = {f2} = {odd}*{r}, r odd: {}",
            if not_divisible.is_empty() {
                "yes".to_string()
            } else {
                format!("no, fails at {not_divisible:?}")
            },
            yes_no(odd_ok),
            yes_no(r_ok)
        ),
    )
}

/// Neither {|K|, |H|} = {q², (q²+1)(q−1)} assignment allows |H| | |K|−1.
pub fn frobenius_exclusion(m: u32) -> Check {
    const NAME: &str = "frobenius_exclusion";
    let Ok(p) = make_params(m) else {
        return Check::new(NAME, false, format!("m = {m} is out of range"));
    };
    let two = BigUint::from(p.w_order);
    let odd = p.odd_part();
    let kernel_two = ((&two - 1u32) % &odd).is_zero();
    let kernel_odd = ((&odd - 1u32) % &two).is_zero();
    Check::new(
        NAME,
        !kernel_two && !kernel_odd,
        format!(
            "|K| = {two}, |H| = {odd}: H | K-1 {}; |K| = {odd}, |H| = {two}: H | K-1 {}",
            yes_no(kernel_two),
            yes_no(kernel_odd)
        ),
    )
}

/// The multiplicative order of 2 modulo (q²+1)(q−1) exceeds 4m+2, so no
/// 2-group of order at most q² can be a Frobenius kernel acted on by a
/// complement of that order.
pub fn two_frobenius_exclusion(m: u32) -> Check {
    const NAME: &str = "two_frobenius_exclusion";
    let Ok(p) = make_params(m) else {
        return Check::new(NAME, false, format!("m = {m} is out of range"));
    };
    let modulus = p.odd_part().to_u64().expect("(q^2+1)(q-1) < 2^64 for supported m");
    let ord = multiplicative_order(2, modulus).expect("modulus is odd");
    let bound = 4 * m as u64 + 2;
    Check::new(
        NAME,
        ord > bound,
        format!("ord(2 mod {modulus}) = {ord}, must exceed {bound}"),
    )
}

/// For every m′ < m, (q²+1)(q−1) does not divide (q′²+1)(q′−1).
pub fn simple_section_check(m: u32) -> Check {
    const NAME: &str = "simple_section";
    let Ok(p) = make_params(m) else {
        return Check::new(NAME, false, format!("m = {m} is out of range"));
    };
    let odd = p.odd_part();
    let dividing: Vec<u32> = (1..m)
        .filter(|&k| {
            let pk = make_params(k).expect("k < m");
            (pk.odd_part() % &odd).is_zero()
        })
        .collect();
    let detail = if m == 1 {
        "no smaller Suzuki group".to_string()
    } else if dividing.is_empty() {
        format!("{odd} divides no (q'^2+1)(q'-1) with m' < {m}")
    } else {
        format!("{odd} divides the odd part for m' in {dividing:?}")
    };
    Check::new(NAME, dividing.is_empty(), detail)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Runs every check. Malformed input is an error; everything else ends in
/// a report.
pub fn run_gate(profile: &CandidateProfile) -> Result<GateReport, GateError> {
    profile.validate()?;
    let mut checks = Vec::new();
    let inferred_m = infer_q(&profile.order);
    match inferred_m {
        None => checks.push(Check::new(
            "infer_q",
            false,
            format!("{} is not |Sz(q)| for any q = 2^(2m+1)", profile.order),
        )),
        Some(m) => match make_params(m) {
            Err(e) => checks.push(Check::new("infer_q", false, e.to_string())),
            Ok(p) => {
                checks.push(Check::new("infer_q", true, format!("order = |Sz({})|, m = {m}", p.q)));
                checks.push(identify_m2_check(profile, &p));
                checks.push(nse_match_check(profile, m));
                checks.push(isolation_certificate(m));
                checks.push(frobenius_exclusion(m));
                checks.push(two_frobenius_exclusion(m));
                checks.push(simple_section_check(m));
            }
        },
    }
    let verdict = if checks.iter().all(|c| c.passed) {
        Verdict::Accept
    } else {
        Verdict::Reject
    };
    Ok(GateReport {
        verdict,
        inferred_m,
        checks,
        note: REPORT_NOTE.to_string(),
    })
}

/// The profile (|Sz(q)|, nse(Sz(q))).
pub fn suzuki_profile(m: u32) -> Option<CandidateProfile> {
    let p = make_params(m).ok()?;
    let stats = nse_closed_form(&p);
    Some(CandidateProfile::from_set(p.group_order.clone(), stats.nse_set()))
}

/// Sanity: the closed-form spectrum, for report rendering.
pub fn spectrum_for(m: u32) -> Option<Vec<u64>> {
    make_params(m).ok().map(|p| spectrum_closed_form(&p).iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn set(v: &[u64]) -> BTreeSet<BigUint> {
        v.iter().map(|&n| big(n)).collect()
    }

    const SZ8: [u64; 6] = [1, 455, 3640, 5824, 6720, 12480];

    #[test]
    fn infer_q_examples() {
        assert_eq!(infer_q(&big(29120)), Some(1));
        assert_eq!(infer_q(&big(32537600)), Some(2));
        assert_eq!(infer_q(&big(29121)), None);
        assert_eq!(infer_q(&big(20160)), None);
        assert_eq!(infer_q(&big(1)), None);
        for m in 1..=8 {
            assert_eq!(infer_q(&make_params(m).unwrap().group_order), Some(m));
        }
    }

    #[test]
    fn identify_m2_examples() {
        assert_eq!(identify_m2(&set(&SZ8)).unwrap(), big(455));
        let s32 = suzuki_profile(2).unwrap().nse_set();
        assert_eq!(identify_m2(&s32).unwrap(), big(31775));
        assert_eq!(identify_m2(&set(&[1, 6, 8])), Err(GateError::Ambiguous(0)));
        assert_eq!(identify_m2(&set(&[1, 3, 5])), Err(GateError::Ambiguous(2)));
        for m in 1..=8 {
            let p = make_params(m).unwrap();
            let stats = nse_closed_form(&p);
            assert_eq!(identify_m2(&stats.nse_set()).unwrap(), stats.count(2));
        }
    }

    #[test]
    fn nse_match_examples() {
        let ok = CandidateProfile::from_set(big(29120), set(&SZ8));
        assert!(nse_match_check(&ok, 1).passed);
        let bad = CandidateProfile::from_set(big(29120), set(&[1, 455, 3640, 5824, 6721, 12480]));
        let c = nse_match_check(&bad, 1);
        assert!(!c.passed);
        assert!(c.detail.contains("6721"));
        let full = nse_closed_form(&make_params(1).unwrap()).counts().clone();
        assert!(nse_match_check(&CandidateProfile::from_map(big(29120), full.clone()), 1).passed);
        // same value set, counts attached to the wrong orders
        let mut swapped = full;
        let (a, b) = (swapped[&5].clone(), swapped[&7].clone());
        swapped.insert(5, b);
        swapped.insert(7, a);
        let c = nse_match_check(&CandidateProfile::from_map(big(29120), swapped), 1);
        assert!(!c.passed);
        assert!(c.detail.contains("[5, 7]"));
    }

    #[test]
    fn isolation_examples() {
        let c = isolation_certificate(1);
        assert!(c.passed, "{}", c.detail);
        assert!(c.detail.contains("455*9"));
        let c = isolation_certificate(2);
        assert!(c.passed, "{}", c.detail);
        assert!(c.detail.contains("31775*33"));
    }

    #[test]
    fn exclusion_examples() {
        assert!(frobenius_exclusion(1).passed);
        assert!(frobenius_exclusion(2).passed);
        let c = two_frobenius_exclusion(1);
        assert!(c.passed);
        assert!(c.detail.contains("ord(2 mod 455) = 12"));
        let c = two_frobenius_exclusion(2);
        assert!(c.detail.contains("ord(2 mod 31775) = 20"));
        assert!(simple_section_check(1).passed);
        assert!(simple_section_check(2).passed);
        assert!(simple_section_check(3).passed);
    }

    #[test]
    fn certificates_hold_m1_to_8() {
        for m in 1..=8 {
            for c in [
                isolation_certificate(m),
                frobenius_exclusion(m),
                two_frobenius_exclusion(m),
                simple_section_check(m),
            ] {
                assert!(c.passed, "m = {m}: {} {}", c.name, c.detail);
            }
        }
    }

    #[test]
    fn gate_accepts_suzuki_profiles() {
        for m in 1..=8 {
            let r = run_gate(&suzuki_profile(m).unwrap()).unwrap();
            assert_eq!(r.verdict, Verdict::Accept, "m = {m}");
            assert_eq!(r.inferred_m, Some(m));
            assert_eq!(r.checks.len(), 7);
        }
    }

    #[test]
    fn gate_rejects() {
        for i in 0..SZ8.len() {
            let mut v = SZ8;
            v[i] += 1;
            let r = run_gate(&CandidateProfile::from_set(big(29120), set(&v))).unwrap();
            assert_eq!(r.verdict, Verdict::Reject, "perturbed index {i}");
            assert!(r.failed_checks().any(|c| c.name == "nse_match"));
        }
        let r = run_gate(&CandidateProfile::from_set(big(20160), set(&SZ8))).unwrap();
        assert_eq!(r.verdict, Verdict::Reject);
        assert_eq!(r.inferred_m, None);
        assert_eq!(r.checks.len(), 1);
        assert_eq!(r.checks[0].name, "infer_q");
    }

    #[test]
    fn malformed_profiles() {
        assert!(run_gate(&CandidateProfile::from_set(big(0), set(&SZ8))).is_err());
        assert!(run_gate(&CandidateProfile::from_set(big(29120), set(&[0, 1]))).is_err());
        let map = BTreeMap::from([(1, big(1)), (2, big(3))]);
        assert!(matches!(
            run_gate(&CandidateProfile::from_map(big(29120), map)),
            Err(GateError::Input(_))
        ));
    }

    #[test]
    fn profile_json() {
        let p = CandidateProfile::from_json(r#"{"order": "29120", "nse_set": ["1", "455", "3640", "5824", "6720", "12480"]}"#)
            .unwrap();
        assert_eq!(p, CandidateProfile::from_set(big(29120), set(&SZ8)));
        let p = CandidateProfile::from_json(r#"{"order": 4, "nse_map": {"1": "1", "2": 1, "4": "2"}}"#).unwrap();
        assert_eq!(p.nse, Nse::Map(BTreeMap::from([(1, big(1)), (2, big(1)), (4, big(2))])));
        for bad in [
            "",
            "{}",
            r#"{"order": "29120"}"#,
            r#"{"order": "-5", "nse_set": []}"#,
            r#"{"order": "8", "nse_set": ["1"], "nse_map": {}}"#,
            r#"{"order": "8", "nse_map": {"x": "1"}}"#,
            r#"{"order": "8", "nse_set": ["1"], "extra": 1}"#,
        ] {
            assert!(CandidateProfile::from_json(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn report_serializes() {
        let r = run_gate(&suzuki_profile(1).unwrap()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["verdict"], "ACCEPT");
        assert_eq!(v["inferred_m"], 1);
        assert_eq!(v["checks"].as_array().unwrap().len(), 7);
    }
}
