use serde::Serialize;

use num_traits::ToPrimitive;

use super::{conjugates, find_cyclic_subgroup, normalizer, w_subgroup, ElementTable, SubgroupHandle};
use crate::suzuki::{closed_form_subgroup_counts, SuzukiParams};

/// Brute-force check that the conjugates of W, U1, U2 and V partition the
/// group. All fields are plain integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    pub n_w: u64,
    pub n_u1: u64,
    pub n_u2: u64,
    pub n_v: u64,
    pub expected_n_w: u64,
    pub expected_n_u1: u64,
    pub expected_n_u2: u64,
    pub expected_n_v: u64,
    /// |G| − 1
    pub nontrivial: u64,
    /// nontrivial elements lying in at least one conjugate
    pub covered: u64,
    /// nontrivial elements lying in two or more conjugates; zero iff all
    /// pairwise intersections of distinct conjugates are trivial
    pub double_covered: u64,
    pub uncovered: u64,
    /// elements of order 2 or 4 not lying in exactly one conjugate of W
    pub even_order_outside_w: u64,
    pub w_normalizer_index: u64,
}

impl PartitionReport {
    pub fn passed(&self) -> bool {
        self.n_w == self.expected_n_w
            && self.n_u1 == self.expected_n_u1
            && self.n_u2 == self.expected_n_u2
            && self.n_v == self.expected_n_v
            && self.covered == self.nontrivial
            && self.double_covered == 0
            && self.uncovered == 0
            && self.even_order_outside_w == 0
            && self.w_normalizer_index == self.expected_n_w
    }
}

const CLASS_W: u8 = 1;

pub fn verify_partition(t: &ElementTable, p: &SuzukiParams) -> PartitionReport {
    let expected = closed_form_subgroup_counts(p);
    let to_u64 = |n: &num_bigint::BigUint| n.to_u64().unwrap_or(u64::MAX);
    let mut report = PartitionReport {
        expected_n_w: to_u64(&expected.n_w),
        expected_n_u1: to_u64(&expected.n_u1),
        expected_n_u2: to_u64(&expected.n_u2),
        expected_n_v: to_u64(&expected.n_v),
        nontrivial: t.len() as u64 - 1,
        ..Default::default()
    };

    let reps: [Option<SubgroupHandle>; 4] = [
        w_subgroup(t).ok(),
        find_cyclic_subgroup(t, p.u1).ok(),
        find_cyclic_subgroup(t, p.u2).ok(),
        find_cyclic_subgroup(t, p.v).ok(),
    ];
    let identity = t.identity_index();
    let mut cover = vec![0u32; t.len()];
    // which class (1 = W, 2 = U1, ...) last covered each element
    let mut class = vec![0u8; t.len()];
    for (k, rep) in reps.iter().enumerate() {
        let Some(h) = rep else { continue };
        let orbit = conjugates(t, h);
        let n = orbit.len() as u64;
        match k {
            0 => report.n_w = n,
            1 => report.n_u1 = n,
            2 => report.n_u2 = n,
            _ => report.n_v = n,
        }
        for member in orbit.iter().flatten().filter(|&&i| i != identity) {
            cover[*member as usize] += 1;
            class[*member as usize] = k as u8 + 1;
        }
    }
    for (i, &c) in cover.iter().enumerate() {
        if i as u32 == identity {
            continue;
        }
        match c {
            0 => report.uncovered += 1,
            1 => report.covered += 1,
            _ => {
                report.covered += 1;
                report.double_covered += 1;
            }
        }
    }
    for (i, x) in t.elements().iter().enumerate() {
        let even = x.has_order(2) || x.has_order(4);
        if even && (cover[i] != 1 || class[i] != CLASS_W) {
            report.even_order_outside_w += 1;
        }
    }
    if let Some(w) = &reps[0] {
        report.w_normalizer_index = (t.len() / normalizer(t, w).order()) as u64;
    }
    report
}
