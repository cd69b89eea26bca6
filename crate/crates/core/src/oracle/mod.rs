//! Brute-force ground truth for small Suzuki groups.
//!
//! [`enumerate_group`] closes a generating set breadth-first and keeps every
//! element, sorted by canonical encoding. [`closure_census`] performs the
//! same closure but keeps only compact keys and tallies element orders on
//! the fly, which is what makes Sz(32) reachable in a few GB.

mod partition;

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::hash::Hash;
use std::sync::Arc;

use num_bigint::BigUint;
use thiserror::Error;

use crate::gf2m::FieldParams;
use crate::matgrp::{Mat4, MatError};
use crate::orderstats::{OrderStats, Spectrum};
use crate::suzuki::{make_w, w_generators};

pub use partition::{verify_partition, PartitionReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("no generators given")]
    EmptyGenerators,
    #[error("closure exceeds the limit of {limit} elements")]
    LimitExceeded { limit: u64 },
    #[error("no element of order {0} in the table")]
    NotFound(u64),
    #[error("element is not in the table")]
    NotInTable,
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// Breadth-first closure from the identity, calling `visit` once per new
/// element (identity first). Returns the closure size.
fn bfs_closure<K, F, V>(generators: &[Mat4], limit: u64, key: F, mut visit: V) -> Result<u64, OracleError>
where
    K: Hash + Eq,
    F: Fn(&Mat4) -> K,
    V: FnMut(&Mat4) -> Result<(), OracleError>,
{
    let first = generators.first().ok_or(OracleError::EmptyGenerators)?;
    for g in generators {
        if g.field() != first.field() {
            return Err(MatError::FieldMismatch.into());
        }
        g.mat_inv()?;
    }
    let identity = Mat4::identity(first.field());
    let mut seen: HashSet<K> = HashSet::new();
    seen.insert(key(&identity));
    visit(&identity)?;
    let mut frontier = VecDeque::from([identity]);
    while let Some(x) = frontier.pop_front() {
        for g in generators {
            let y = &x * g;
            if seen.insert(key(&y)) {
                if seen.len() as u64 > limit {
                    return Err(OracleError::LimitExceeded { limit });
                }
                visit(&y)?;
                frontier.push_back(y);
            }
        }
    }
    Ok(seen.len() as u64)
}

/// Order statistics of ⟨generators⟩ without retaining the elements.
///
/// `hints` are the maximal element orders; an element whose order divides
/// none of them is reported as an error.
pub fn closure_census(generators: &[Mat4], limit: u64, hints: &[u64]) -> Result<OrderStats, OracleError> {
    let mut counts: HashMap<u64, u64> = HashMap::new();
    let mut tally = |x: &Mat4| -> Result<(), OracleError> {
        *counts.entry(x.element_order(hints, limit)?).or_default() += 1;
        Ok(())
    };
    let packed = generators.first().is_some_and(|g| g.field().degree() <= 8);
    let size = if packed {
        bfs_closure(generators, limit, |x| x.packed_key().expect("degree ≤ 8"), &mut tally)?
    } else {
        bfs_closure(generators, limit, Mat4::encode, &mut tally)?
    };
    let stats = OrderStats::from_counts(counts.into_iter().map(|(k, v)| (k, BigUint::from(v))).collect());
    debug_assert_eq!(stats.total(), &BigUint::from(size));
    Ok(stats)
}

/// Every element of a finite matrix group, sorted by canonical encoding.
#[derive(Clone, Debug)]
pub struct ElementTable {
    elements: Vec<Mat4>,
    index: HashMap<Vec<u8>, u32>,
    generators: Vec<Mat4>,
}

impl ElementTable {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Mat4] {
        &self.elements
    }

    pub fn get(&self, idx: u32) -> &Mat4 {
        &self.elements[idx as usize]
    }

    pub fn generators(&self) -> &[Mat4] {
        &self.generators
    }

    pub fn field(&self) -> &Arc<FieldParams> {
        self.elements[0].field()
    }

    pub fn index_of(&self, x: &Mat4) -> Option<u32> {
        self.index.get(&x.encode()).copied()
    }

    pub fn identity_index(&self) -> u32 {
        self.index_of(&Mat4::identity(self.field())).expect("tables contain the identity")
    }

    fn conjugate_index(&self, idx: u32, g: &Mat4, g_inv: &Mat4) -> u32 {
        self.index_of(&self.get(idx).conjugate_by(g, g_inv))
            .expect("table is closed under conjugation")
    }

    /// Orders of all elements, in table order.
    pub fn element_orders(&self, hints: &[u64]) -> Result<Vec<u64>, OracleError> {
        let bound = self.len() as u64;
        self.elements
            .iter()
            .map(|x| x.element_order(hints, bound).map_err(OracleError::from))
            .collect()
    }
}

pub fn enumerate_group(generators: &[Mat4], limit: u64) -> Result<ElementTable, OracleError> {
    let mut elements = Vec::new();
    bfs_closure(generators, limit, Mat4::encode, |x| {
        elements.push(x.clone());
        Ok(())
    })?;
    let mut keyed: Vec<(Vec<u8>, Mat4)> = elements.into_iter().map(|x| (x.encode(), x)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    let index = keyed.iter().enumerate().map(|(i, (k, _))| (k.clone(), i as u32)).collect();
    Ok(ElementTable {
        elements: keyed.into_iter().map(|(_, x)| x).collect(),
        index,
        generators: generators.to_vec(),
    })
}

/// Census of a table. With a spectrum hint only divisors of its maximal
/// elements are tried; without one, orders are found by repeated
/// multiplication.
pub fn empirical_order_stats(t: &ElementTable, spec_hint: Option<&Spectrum>) -> Result<OrderStats, OracleError> {
    let hints = spec_hint.map(Spectrum::maximal).unwrap_or_default();
    let mut counts: HashMap<u64, u64> = HashMap::new();
    for k in t.element_orders(&hints)? {
        *counts.entry(k).or_default() += 1;
    }
    Ok(OrderStats::from_counts(
        counts.into_iter().map(|(k, v)| (k, BigUint::from(v))).collect(),
    ))
}

/// A subgroup of an [`ElementTable`], stored as table indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupHandle {
    pub members: BTreeSet<u32>,
    pub cyclic_generator: Option<Mat4>,
    /// Generates the subgroup; empty means "all members".
    pub generators: Vec<Mat4>,
}

impl SubgroupHandle {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    fn generating_set<'a>(&'a self, t: &'a ElementTable) -> Vec<&'a Mat4> {
        if self.generators.is_empty() {
            self.members.iter().map(|&i| t.get(i)).collect()
        } else {
            self.generators.iter().collect()
        }
    }

    /// Exhaustive closure check.
    pub fn is_closed(&self, t: &ElementTable) -> bool {
        self.members.iter().all(|&a| {
            self.members.iter().all(|&b| {
                t.index_of(&(t.get(a) * t.get(b)))
                    .is_some_and(|c| self.members.contains(&c))
            })
        })
    }
}

/// ⟨x⟩ inside the table.
pub fn cyclic_subgroup(t: &ElementTable, x: &Mat4) -> Result<SubgroupHandle, OracleError> {
    let mut members = BTreeSet::new();
    let mut y = Mat4::identity(x.field());
    loop {
        if !members.insert(t.index_of(&y).ok_or(OracleError::NotInTable)?) {
            break;
        }
        y = &y * x;
    }
    Ok(SubgroupHandle {
        members,
        cyclic_generator: Some(x.clone()),
        generators: vec![x.clone()],
    })
}

/// The cyclic subgroup generated by the first element of order `k` in
/// encoding order.
pub fn find_cyclic_subgroup(t: &ElementTable, k: u64) -> Result<SubgroupHandle, OracleError> {
    let x = t
        .elements
        .iter()
        .find(|x| x.has_order(k))
        .ok_or(OracleError::NotFound(k))?;
    cyclic_subgroup(t, x)
}

/// The subgroup W = {w(a, b)} of the table's field.
pub fn w_subgroup(t: &ElementTable) -> Result<SubgroupHandle, OracleError> {
    let field = t.field();
    let mut members = BTreeSet::new();
    for a in field.elements() {
        for b in field.elements() {
            members.insert(t.index_of(&make_w(field, a, b)).ok_or(OracleError::NotInTable)?);
        }
    }
    Ok(SubgroupHandle {
        members,
        cyclic_generator: None,
        generators: w_generators(field),
    })
}

pub fn normalizer(t: &ElementTable, h: &SubgroupHandle) -> SubgroupHandle {
    let gens = h.generating_set(t);
    let members = t
        .elements
        .iter()
        .enumerate()
        .filter(|(_, g)| {
            let g_inv = g.mat_inv().expect("group elements are invertible");
            gens.iter().all(|x| {
                t.index_of(&x.conjugate_by(g, &g_inv))
                    .is_some_and(|i| h.members.contains(&i))
            })
        })
        .map(|(i, _)| i as u32)
        .collect();
    SubgroupHandle {
        members,
        cyclic_generator: None,
        generators: Vec::new(),
    }
}

pub fn centralizer(t: &ElementTable, x: &Mat4) -> SubgroupHandle {
    let members = t
        .elements
        .iter()
        .enumerate()
        .filter(|(_, g)| *g * x == x * *g)
        .map(|(i, _)| i as u32)
        .collect();
    SubgroupHandle {
        members,
        cyclic_generator: None,
        generators: Vec::new(),
    }
}

/// All conjugates gHg⁻¹ of `h`, found by closing under conjugation by the
/// table's generators. Each conjugate is a sorted list of member indices.
pub fn conjugates(t: &ElementTable, h: &SubgroupHandle) -> Vec<Vec<u32>> {
    let gens: Vec<(Mat4, Mat4)> = t
        .generators
        .iter()
        .map(|g| (g.clone(), g.mat_inv().expect("generators are invertible")))
        .collect();
    let start: Vec<u32> = h.members.iter().copied().collect();
    let mut seen: HashSet<Vec<u32>> = HashSet::from([start.clone()]);
    let mut out = vec![start.clone()];
    let mut frontier = VecDeque::from([start]);
    while let Some(set) = frontier.pop_front() {
        for (g, g_inv) in &gens {
            let mut image: Vec<u32> = set.iter().map(|&i| t.conjugate_index(i, g, g_inv)).collect();
            image.sort_unstable();
            if seen.insert(image.clone()) {
                out.push(image.clone());
                frontier.push_back(image);
            }
        }
    }
    out.sort();
    out
}

/// W generated by the basis elements of the field, as used for the
/// degree-5 representation-independence census.
pub fn w_census(field: &Arc<FieldParams>, limit: u64) -> Result<OrderStats, OracleError> {
    closure_census(&w_generators(field), limit, &[4])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2m::FieldElement;
    use crate::orderstats::{nse_closed_form, spectrum_closed_form};
    use crate::suzuki::{make_params, standard_generators};
    use std::sync::OnceLock;

    fn gf8() -> Arc<FieldParams> {
        Arc::new(FieldParams::new(1).unwrap())
    }

    fn sz8() -> &'static ElementTable {
        static TABLE: OnceLock<ElementTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            let f = gf8();
            let p = make_params(1).unwrap();
            let gens = standard_generators(&p, &f, 1 << 20).unwrap();
            enumerate_group(&gens, 1 << 20).unwrap()
        })
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn trivial_group() {
        let f = gf8();
        let t = enumerate_group(&[Mat4::identity(&f)], 10).unwrap();
        assert_eq!(t.len(), 1);
        let s = empirical_order_stats(&t, None).unwrap();
        assert_eq!(s, OrderStats::from_counts([(1, big(1))].into()));
    }

    #[test]
    fn empty_generators_and_limit() {
        assert_eq!(enumerate_group(&[], 10).unwrap_err(), OracleError::EmptyGenerators);
        let f = gf8();
        assert_eq!(
            enumerate_group(&w_generators(&f), 63).unwrap_err(),
            OracleError::LimitExceeded { limit: 63 }
        );
        assert_eq!(enumerate_group(&w_generators(&f), 64).unwrap().len(), 64);
    }

    #[test]
    fn w_table_census() {
        let f = gf8();
        let t = enumerate_group(&w_generators(&f), 1000).unwrap();
        assert_eq!(t.len(), 64);
        let s = empirical_order_stats(&t, None).unwrap();
        assert_eq!(s, OrderStats::from_counts([(1, big(1)), (2, big(7)), (4, big(56))].into()));
        assert_eq!(s.spectrum().orders().iter().max(), Some(&4));
        assert_eq!(w_census(&f, 1000).unwrap(), s);
    }

    #[test]
    fn unipotent_pair_generates_only_cyclic_four() {
        // w(1,0)² = w(0,1), so these two alone give a cyclic group of order 4
        let f = gf8();
        let gens = [
            make_w(&f, FieldElement::ONE, FieldElement::ZERO),
            make_w(&f, FieldElement::ZERO, FieldElement::ONE),
        ];
        assert_eq!(enumerate_group(&gens, 100).unwrap().len(), 4);
    }

    #[test]
    fn sz8_table_and_census() {
        let t = sz8();
        assert_eq!(t.len(), 29120);
        let p = make_params(1).unwrap();
        let spec = spectrum_closed_form(&p);
        let hinted = empirical_order_stats(t, Some(&spec)).unwrap();
        let unhinted = empirical_order_stats(t, None).unwrap();
        assert_eq!(hinted, unhinted);
        assert_eq!(hinted, nse_closed_form(&p));
        assert_eq!(hinted.spectrum(), spec);
        let sorted = t.elements().windows(2).all(|w| w[0].encode() < w[1].encode());
        assert!(sorted);
    }

    #[test]
    fn streaming_census_matches_table() {
        let p = make_params(1).unwrap();
        let f = gf8();
        let gens = standard_generators(&p, &f, 1 << 20).unwrap();
        let s = closure_census(&gens, 1 << 20, &p.spectrum_hints()).unwrap();
        assert_eq!(s, empirical_order_stats(sz8(), None).unwrap());
    }

    #[test]
    fn cyclic_subgroups() {
        let t = sz8();
        for k in [13u64, 7, 5, 4, 2] {
            let h = find_cyclic_subgroup(t, k).unwrap();
            assert_eq!(h.order() as u64, k);
            assert!(h.is_closed(t));
        }
        let one = find_cyclic_subgroup(t, 1).unwrap();
        assert_eq!(one.members, BTreeSet::from([t.identity_index()]));
        assert_eq!(find_cyclic_subgroup(t, 3).unwrap_err(), OracleError::NotFound(3));
    }

    #[test]
    fn normalizer_orders() {
        let t = sz8();
        let n13 = normalizer(t, &find_cyclic_subgroup(t, 13).unwrap());
        assert_eq!(n13.order(), 52);
        let n5 = normalizer(t, &find_cyclic_subgroup(t, 5).unwrap());
        assert_eq!(n5.order(), 20);
        let n7 = normalizer(t, &find_cyclic_subgroup(t, 7).unwrap());
        assert_eq!(n7.order(), 14);
        let w = w_subgroup(t).unwrap();
        assert_eq!(w.order(), 64);
        assert!(w.is_closed(t));
        let nw = normalizer(t, &w);
        assert_eq!(nw.order(), 448);
        assert_eq!(t.len() / nw.order(), 65);
        assert!(nw.is_closed(t));
    }

    #[test]
    fn centralizers() {
        let t = sz8();
        let id = Mat4::identity(t.field());
        assert_eq!(centralizer(t, &id).order(), t.len());
        for k in [13u64, 5] {
            let h = find_cyclic_subgroup(t, k).unwrap();
            let x = h.cyclic_generator.clone().unwrap();
            assert_eq!(centralizer(t, &x).members, h.members);
        }
    }

    #[test]
    fn sylow_counting() {
        // m_p = φ(p) · (number of conjugates of a cyclic subgroup of order p)
        let t = sz8();
        let s = empirical_order_stats(t, None).unwrap();
        for (p, phi) in [(5u64, 4u64), (7, 6), (13, 12)] {
            let n = conjugates(t, &find_cyclic_subgroup(t, p).unwrap()).len() as u64;
            assert_eq!(big(n * phi), s.count(p), "p = {p}");
        }
    }

    #[test]
    fn order_is_conjugation_invariant() {
        use rand::{Rng, SeedableRng};
        let t = sz8();
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..1000 {
            let a = t.get(rng.gen_range(0..t.len() as u32));
            let g = t.get(rng.gen_range(0..t.len() as u32));
            let conj = a.conjugate_by(g, &g.mat_inv().unwrap());
            assert_eq!(a.element_order(&[], 100).unwrap(), conj.element_order(&[], 100).unwrap());
        }
    }

    #[test]
    fn associativity_spot_check() {
        use rand::{Rng, SeedableRng};
        let t = sz8();
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..1000 {
            let [a, b, c] = [0; 3].map(|_| t.get(rng.gen_range(0..t.len() as u32)));
            assert_eq!(&(a * b) * c, a * &(b * c));
        }
    }

    #[test]
    fn encodings_are_injective_on_sz8() {
        let t = sz8();
        let keys: HashSet<Vec<u8>> = t.elements().iter().map(Mat4::encode).collect();
        assert_eq!(keys.len(), 29120);
        let packed: HashSet<u128> = t.elements().iter().map(|x| x.packed_key().unwrap()).collect();
        assert_eq!(packed.len(), 29120);
        for x in t.elements().iter().step_by(97) {
            assert_eq!(&Mat4::decode(t.field(), &x.encode()).unwrap(), x);
        }
    }
}
