//! Full subgroup lattice by cyclic extension.
//!
//! Starting from the trivial subgroup, every known subgroup `H` is joined
//! with each cyclic subgroup of prime-power order not already inside it.
//! Every subgroup is generated by its elements of prime-power order, so
//! adjoining them one at a time reaches all of them, non-solvable ones
//! included. Results are deduplicated on their member sets.

use std::collections::HashSet;
use std::sync::Arc;

use super::{Bitset, Elem, FiniteGroup, SubgroupSet};
use crate::error::GroupError;
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeLimits {
    /// Largest group order for which the full lattice is attempted.
    pub max_order: usize,
    /// Abort once this many subgroups have been found.
    pub max_subgroups: usize,
}

impl Default for LatticeLimits {
    fn default() -> Self {
        LatticeLimits { max_order: 512, max_subgroups: 2_000_000 }
    }
}

const CHUNK: usize = 512;

fn is_prime_power(mut n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            return n == 1;
        }
        p += 1;
    }
    true
}

impl FiniteGroup {
    /// Generators of the distinct cyclic subgroups of prime-power order,
    /// each the least element generating its subgroup.
    fn prime_power_cyclic_generators(&self) -> Vec<Elem> {
        let mut seen: HashSet<Bitset> = HashSet::new();
        let mut out = Vec::new();
        for x in self.elements() {
            if !is_prime_power(self.element_order(x)) {
                continue;
            }
            let mut b = Bitset::new(self.order());
            let mut p = 0;
            loop {
                b.insert(p);
                p = self.mul(p, x);
                if p == 0 {
                    break;
                }
            }
            if seen.insert(b) {
                out.push(x);
            }
        }
        out
    }

    /// `⟨H, c⟩`.
    pub(crate) fn join(&self, h: &SubgroupSet, c: Elem) -> SubgroupSet {
        let normalizes = h.generators().iter().all(|&x| h.contains(self.conjugate(x, c)));
        let mut members = h.members().clone();
        let mut gens = h.generators().to_vec();
        gens.push(c);
        if normalizes {
            // ⟨H, c⟩ = ∪ H c^i
            let base = h.elements();
            let mut p = c;
            let mut cosets = 1;
            while !h.contains(p) {
                for &y in &base {
                    members.insert(self.mul(y, p));
                }
                p = self.mul(p, c);
                cosets += 1;
            }
            SubgroupSet::from_parts(members, gens, base.len() * cosets)
        } else {
            let mut list = h.elements();
            self.close(&mut members, &mut list, &gens);
            SubgroupSet::from_parts(members, gens, list.len())
        }
    }

    /// Every subgroup, sorted by order and then by member set. Cached after
    /// the first successful call.
    pub fn subgroup_lattice(&self, limits: &LatticeLimits) -> Result<Arc<Vec<SubgroupSet>>, GroupError> {
        if let Some(l) = self.lattice.lock().expect("lattice cache poisoned").as_ref() {
            return Ok(Arc::clone(l));
        }
        if self.order() > limits.max_order {
            return Err(GroupError::LatticeBudget(format!(
                "order {} exceeds lattice order cap {}",
                self.order(),
                limits.max_order
            )));
        }
        let cyclic = self.prime_power_cyclic_generators();
        let trivial = SubgroupSet::trivial(self);
        let mut seen: HashSet<Bitset> = HashSet::new();
        seen.insert(trivial.members().clone());
        let mut all = vec![trivial.clone()];
        let mut layer = vec![trivial];
        while !layer.is_empty() {
            let mut next = Vec::new();
            for chunk in layer.chunks(CHUNK) {
                let found: Vec<Vec<SubgroupSet>> = par::map(chunk, |h| {
                    cyclic
                        .iter()
                        .filter(|&&c| !h.contains(c))
                        .map(|&c| self.join(h, c))
                        .collect()
                });
                for j in found.into_iter().flatten() {
                    if seen.insert(j.members().clone()) {
                        all.push(j.clone());
                        next.push(j);
                        if all.len() > limits.max_subgroups {
                            return Err(GroupError::LatticeBudget(format!(
                                "more than {} subgroups",
                                limits.max_subgroups
                            )));
                        }
                    }
                }
            }
            layer = next;
        }
        all.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members().cmp(b.members())));
        let all = Arc::new(all);
        *self.lattice.lock().expect("lattice cache poisoned") = Some(Arc::clone(&all));
        Ok(all)
    }

    /// Subgroups `H` with `|G:H| ≤ n`, each exactly once.
    pub fn subgroups_of_index_at_most(
        &self,
        n: usize,
        limits: &LatticeLimits,
    ) -> Result<Vec<SubgroupSet>, GroupError> {
        assert!(n >= 1, "index bound must be positive");
        if n == 1 {
            return Ok(vec![SubgroupSet::whole(self)]);
        }
        let lattice = self.subgroup_lattice(limits)?;
        Ok(lattice
            .iter()
            .filter(|h| self.order() / h.order() <= n)
            .cloned()
            .collect())
    }
}
