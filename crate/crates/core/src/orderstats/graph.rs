//! Prime graph (Gruenberg–Kegel graph) of a spectrum.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use super::{factorize, factorize_big, Spectrum};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("spectrum prime {0} does not divide the group order")]
    PrimeOutsideOrder(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeGraph {
    pub vertices: BTreeSet<u64>,
    pub edges: BTreeSet<(u64, u64)>,
    /// Components ordered by their smallest prime, so the component of 2
    /// (if any) comes first.
    pub components: Vec<BTreeSet<u64>>,
    #[serde(serialize_with = "ser_decimal_vec")]
    pub order_components: Vec<BigUint>,
}

fn ser_decimal_vec<S: serde::Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|n| n.to_str_radix(10)))
}

impl PrimeGraph {
    pub fn is_isolated(&self, p: u64) -> bool {
        self.vertices.contains(&p) && !self.edges.iter().any(|&(a, b)| a == p || b == p)
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Vertices are the primes dividing `order`; {p, r} is an edge iff p·r is
/// in the spectrum. Order components multiply the full prime-power parts of
/// `order` over each component.
pub fn prime_graph(spec: &Spectrum, order: &BigUint) -> Result<PrimeGraph, GraphError> {
    let order_factors: BTreeMap<u64, u32> = factorize_big(order).into_iter().collect();
    for &i in spec.iter() {
        for (p, _) in factorize(i) {
            if !order_factors.contains_key(&p) {
                return Err(GraphError::PrimeOutsideOrder(p));
            }
        }
    }
    let primes: Vec<u64> = order_factors.keys().copied().collect();
    let mut edges = BTreeSet::new();
    let mut dsu = Dsu::new(primes.len());
    for (a, &p) in primes.iter().enumerate() {
        for (b, &r) in primes.iter().enumerate().skip(a + 1) {
            if p.checked_mul(r).is_some_and(|pr| spec.contains(pr)) {
                edges.insert((p, r));
                dsu.union(a, b);
            }
        }
    }
    let mut groups: BTreeMap<usize, BTreeSet<u64>> = BTreeMap::new();
    for (idx, &p) in primes.iter().enumerate() {
        groups.entry(dsu.find(idx)).or_default().insert(p);
    }
    let mut components: Vec<BTreeSet<u64>> = groups.into_values().collect();
    components.sort_by_key(|c| *c.iter().next().expect("nonempty"));
    let order_components = components
        .iter()
        .map(|c| {
            c.iter()
                .fold(BigUint::one(), |acc, p| acc * BigUint::from(*p).pow(order_factors[p]))
        })
        .collect();
    Ok(PrimeGraph {
        vertices: primes.into_iter().collect(),
        edges,
        components,
        order_components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orderstats::spectrum_closed_form;
    use crate::suzuki::make_params;

    fn set(v: &[u64]) -> BTreeSet<u64> {
        v.iter().copied().collect()
    }

    #[test]
    fn sz8_graph() {
        let p = make_params(1).unwrap();
        let g = prime_graph(&spectrum_closed_form(&p), &p.group_order).unwrap();
        assert_eq!(g.vertices, set(&[2, 5, 7, 13]));
        assert!(g.edges.is_empty());
        assert_eq!(g.components, vec![set(&[2]), set(&[5]), set(&[7]), set(&[13])]);
        let oc: Vec<u64> = g.order_components.iter().map(|n| u64::try_from(n).unwrap()).collect();
        assert_eq!(oc, vec![64, 5, 7, 13]);
        assert!(g.is_isolated(2));
    }

    #[test]
    fn sz32_graph() {
        let p = make_params(2).unwrap();
        let g = prime_graph(&spectrum_closed_form(&p), &p.group_order).unwrap();
        assert_eq!(g.vertices, set(&[2, 5, 31, 41]));
        assert!(g.edges.is_empty());
        assert_eq!(g.component_count(), 4);
        let product: BigUint = g.order_components.iter().product();
        assert_eq!(product, p.group_order);
        let oc: Vec<u64> = g.order_components.iter().map(|n| u64::try_from(n).unwrap()).collect();
        assert_eq!(oc, vec![1024, 25, 31, 41]);
    }

    #[test]
    fn two_isolated_for_m_up_to_8() {
        for m in 1..=8 {
            let p = make_params(m).unwrap();
            let g = prime_graph(&spectrum_closed_form(&p), &p.group_order).unwrap();
            assert!(g.is_isolated(2), "m = {m}");
            let product: BigUint = g.order_components.iter().product();
            assert_eq!(product, p.group_order);
        }
    }

    #[test]
    fn edge_from_composite_order() {
        let spec = Spectrum::from_maximal([6, 5]);
        let g = prime_graph(&spec, &BigUint::from(60u32)).unwrap();
        assert_eq!(g.edges, BTreeSet::from([(2, 3)]));
        assert_eq!(g.components, vec![set(&[2, 3]), set(&[5])]);
        let oc: Vec<u64> = g.order_components.iter().map(|n| u64::try_from(n).unwrap()).collect();
        assert_eq!(oc, vec![12, 5]);
        assert!(!g.is_isolated(2));
    }

    #[test]
    fn rejects_foreign_prime() {
        let spec = Spectrum::from_maximal([7]);
        assert_eq!(
            prime_graph(&spec, &BigUint::from(10u32)),
            Err(GraphError::PrimeOutsideOrder(7))
        );
    }
}
