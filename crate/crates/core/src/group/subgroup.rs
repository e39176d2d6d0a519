use std::hash::{Hash, Hasher};

use super::{Bitset, Elem, FiniteGroup};
use crate::error::GroupError;

/// A subgroup stored as a membership set plus a generating witness.
#[derive(Clone, Debug)]
pub struct SubgroupSet {
    members: Bitset,
    generators: Vec<Elem>,
    order: usize,
}

impl PartialEq for SubgroupSet {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for SubgroupSet {}

impl Hash for SubgroupSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.members.hash(state);
    }
}

impl SubgroupSet {
    /// The subgroup generated by `gens`.
    pub fn generated(g: &FiniteGroup, gens: &[Elem]) -> Self {
        let mut members = Bitset::new(g.order());
        let mut list = Vec::new();
        g.close(&mut members, &mut list, gens);
        let mut generators: Vec<Elem> = gens.iter().copied().filter(|&x| x != 0).collect();
        generators.dedup();
        SubgroupSet { order: list.len(), members, generators }
    }

    pub fn whole(g: &FiniteGroup) -> Self {
        SubgroupSet {
            members: Bitset::full(g.order()),
            generators: g.generators().to_vec(),
            order: g.order(),
        }
    }

    pub fn trivial(g: &FiniteGroup) -> Self {
        let mut members = Bitset::new(g.order());
        members.insert(0);
        SubgroupSet { members, generators: Vec::new(), order: 1 }
    }

    /// Wraps a membership set already known to be a subgroup.
    pub(crate) fn from_closed_members(g: &FiniteGroup, members: Bitset) -> Self {
        let generators = g.greedy_generators(&members);
        let order = members.count();
        SubgroupSet { members, generators, order }
    }

    pub(crate) fn from_parts(members: Bitset, generators: Vec<Elem>, order: usize) -> Self {
        SubgroupSet { members, generators, order }
    }

    /// Checks that `elems` is closed under the group operation.
    pub fn from_elements(g: &FiniteGroup, elems: &[Elem]) -> Result<Self, GroupError> {
        let mut target = Bitset::new(g.order());
        for &e in elems {
            if e >= g.order() {
                return Err(GroupError::BadElement(e));
            }
            target.insert(e);
        }
        let gens = g.greedy_generators(&target);
        let h = SubgroupSet::generated(g, &gens);
        if h.members != target {
            return Err(GroupError::Format("element set is not closed under multiplication".into()));
        }
        Ok(h)
    }

    #[inline]
    pub fn contains(&self, x: Elem) -> bool {
        self.members.contains(x)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn members(&self) -> &Bitset {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        self.members.iter()
    }

    pub fn elements(&self) -> Vec<Elem> {
        self.members.iter().collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_subgroup_of(&self, other: &SubgroupSet) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn index_in(&self, g: &FiniteGroup) -> usize {
        g.order() / self.order
    }

    pub fn intersection(&self, g: &FiniteGroup, other: &SubgroupSet) -> SubgroupSet {
        let mut m = self.members.clone();
        m.intersect_with(&other.members);
        SubgroupSet::from_closed_members(g, m)
    }

    pub fn is_normal_in(&self, g: &FiniteGroup) -> bool {
        g.generators()
            .iter()
            .all(|&s| self.generators.iter().all(|&h| self.contains(g.conjugate(h, s))))
    }

    /// Verifies the subgroup invariants exhaustively: identity, closure
    /// under products and inverses, the stored order, and that the
    /// generators generate exactly this set.
    pub fn check_invariants(&self, g: &FiniteGroup) -> bool {
        if !self.contains(0) || self.members.count() != self.order || !g.order().is_multiple_of(self.order) {
            return false;
        }
        let elems = self.elements();
        for &a in &elems {
            if !self.contains(g.inv(a)) {
                return false;
            }
            for &b in &elems {
                if !self.contains(g.mul(a, b)) {
                    return false;
                }
            }
        }
        SubgroupSet::generated(g, &self.generators).members == self.members
    }
}

/// Terms γ1 ⊇ γ2 ⊇ … of a lower central series.
///
/// The list stops at the first trivial term, or repeats the stable term
/// once when the series stalls above the identity.
#[derive(Debug, Clone)]
pub struct LowerCentralSeries {
    terms: Vec<SubgroupSet>,
}

impl LowerCentralSeries {
    pub fn terms(&self) -> &[SubgroupSet] {
        &self.terms
    }

    pub fn orders(&self) -> Vec<usize> {
        self.terms.iter().map(|t| t.order()).collect()
    }

    /// `Some(c)` with `γ_{c+1} = 1`, or `None` when not nilpotent.
    pub fn nilpotency_class(&self) -> Option<usize> {
        let last = self.terms.last().expect("series has at least one term");
        last.is_trivial().then(|| self.terms.len() - 1)
    }

    /// γ_k for k ≥ 1, following stabilization past the stored terms.
    pub fn term(&self, k: usize) -> &SubgroupSet {
        assert!(k >= 1);
        let i = (k - 1).min(self.terms.len() - 1);
        &self.terms[i]
    }
}

impl FiniteGroup {
    /// `C_G(x)`.
    pub fn centralizer(&self, x: Elem) -> SubgroupSet {
        let mut m = Bitset::new(self.order());
        for h in self.elements() {
            if self.mul(h, x) == self.mul(x, h) {
                m.insert(h);
            }
        }
        SubgroupSet::from_closed_members(self, m)
    }

    /// `C_G(S)`: elements commuting with every element of `s`.
    pub fn centralizer_of_set(&self, s: &SubgroupSet) -> SubgroupSet {
        let mut m = Bitset::new(self.order());
        for h in self.elements() {
            if s.generators().iter().all(|&x| self.mul(h, x) == self.mul(x, h)) {
                m.insert(h);
            }
        }
        SubgroupSet::from_closed_members(self, m)
    }

    pub fn center(&self) -> SubgroupSet {
        self.centralizer_of_set(&SubgroupSet::whole(self))
    }

    /// `[A, B]`, generated by all `[a, b]` with `a ∈ A`, `b ∈ B`.
    pub fn commutator_subgroup(&self, a: &SubgroupSet, b: &SubgroupSet) -> SubgroupSet {
        let mut comms = Bitset::new(self.order());
        let bs = b.elements();
        for x in a.iter() {
            for &y in &bs {
                comms.insert(self.commutator(x, y));
            }
        }
        let gens = self.greedy_generators(&comms);
        SubgroupSet::generated(self, &gens)
    }

    pub fn lower_central_series(&self) -> LowerCentralSeries {
        self.lower_central_series_of(&SubgroupSet::whole(self))
    }

    /// Lower central series of the subgroup `n` (commutators taken inside `n`).
    pub fn lower_central_series_of(&self, n: &SubgroupSet) -> LowerCentralSeries {
        let mut terms = vec![n.clone()];
        loop {
            let last = terms.last().unwrap();
            if last.is_trivial() {
                break;
            }
            let next = self.commutator_subgroup(last, n);
            let stable = next == *last;
            terms.push(next);
            if stable {
                break;
            }
        }
        LowerCentralSeries { terms }
    }

    pub fn nilpotency_class(&self) -> Option<usize> {
        self.lower_central_series().nilpotency_class()
    }

    /// Derived series G ⊇ G' ⊇ G'' ⊇ …, stopping at the first repeat or the trivial group.
    pub fn derived_series(&self) -> Vec<SubgroupSet> {
        let mut terms = vec![SubgroupSet::whole(self)];
        loop {
            let last = terms.last().unwrap();
            if last.is_trivial() {
                break;
            }
            let next = self.commutator_subgroup(last, last);
            let stable = next == *last;
            terms.push(next);
            if stable {
                break;
            }
        }
        terms
    }

    /// Kernel of the action of `G` on the right cosets of `h` by right
    /// multiplication, built from the coset permutations themselves.
    pub fn coset_action_kernel(&self, h: &SubgroupSet) -> SubgroupSet {
        const UNSET: u32 = u32::MAX;
        let mut coset_of = vec![UNSET; self.order()];
        let mut reps = Vec::new();
        for x in self.elements() {
            if coset_of[x] != UNSET {
                continue;
            }
            let c = reps.len() as u32;
            reps.push(x);
            for y in h.iter() {
                coset_of[self.mul(y, x)] = c;
            }
        }
        let mut m = Bitset::new(self.order());
        for g in self.elements() {
            if reps
                .iter()
                .enumerate()
                .all(|(c, &r)| coset_of[self.mul(r, g)] as usize == c)
            {
                m.insert(g);
            }
        }
        SubgroupSet::from_closed_members(self, m)
    }
}
