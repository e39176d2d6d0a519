use super::{Elem, FiniteGroup, Source, SubgroupSet};
use crate::error::GroupError;

/// `G/N` as a first-class group together with the projection `G → G/N`.
#[derive(Debug)]
pub struct Quotient<'a> {
    pub parent: &'a FiniteGroup,
    pub kernel: SubgroupSet,
    pub group: FiniteGroup,
    projection: Vec<u32>,
}

impl<'a> Quotient<'a> {
    pub fn project(&self, g: Elem) -> Elem {
        self.projection[g] as usize
    }

    pub fn projection(&self) -> &[u32] {
        &self.projection
    }
}

impl FiniteGroup {
    /// Coset group `G/N`. Cosets are numbered by their least element, so the
    /// identity coset is 0. Fails unless `n` is normal.
    pub fn quotient(&self, n: &SubgroupSet) -> Result<Quotient<'_>, GroupError> {
        if !n.is_normal_in(self) {
            return Err(GroupError::NotNormal);
        }
        const UNSET: u32 = u32::MAX;
        let mut projection = vec![UNSET; self.order()];
        let mut reps = Vec::new();
        let kernel_elems = n.elements();
        for x in self.elements() {
            if projection[x] != UNSET {
                continue;
            }
            let c = reps.len() as u32;
            reps.push(x);
            for &y in &kernel_elems {
                projection[self.mul(y, x)] = c;
            }
        }
        let m = reps.len();
        let mut table = vec![0u32; m * m];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                table[i * m + j] = projection[self.mul(a, b)];
            }
        }
        let group = FiniteGroup::from_trusted_table(m, table, Source::Family("quotient".into()), None);
        Ok(Quotient { parent: self, kernel: n.clone(), group, projection })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s4_mod_klein_four_is_s3() {
        let s4 = FiniteGroup::from_permutation_generators(4, &[vec![2, 1, 3, 4], vec![2, 3, 4, 1]]).unwrap();
        // V4 = {e, (12)(34), (13)(24), (14)(23)}
        let find = |img: [usize; 4]| {
            s4.elements()
                .find(|&x| s4.label(x) == perm_label(&img))
                .unwrap()
        };
        let a = find([2, 1, 4, 3]);
        let b = find([3, 4, 1, 2]);
        let v4 = SubgroupSet::generated(&s4, &[a, b]);
        assert_eq!(v4.order(), 4);
        let q = s4.quotient(&v4).unwrap();
        assert_eq!(q.group.order(), 6);
        assert_eq!(q.group.conjugacy_classes().len(), 3);
        q.group.check_axioms().unwrap();
        for x in s4.elements() {
            for y in s4.elements() {
                assert_eq!(q.project(s4.mul(x, y)), q.group.mul(q.project(x), q.project(y)));
            }
        }
    }

    fn perm_label(img: &[usize; 4]) -> String {
        let p: Vec<u32> = img.iter().map(|&i| (i - 1) as u32).collect();
        super::super::cycle_notation(&p)
    }

    #[test]
    fn non_normal_rejected() {
        let s3 = FiniteGroup::from_permutation_generators(3, &[vec![2, 1, 3], vec![2, 3, 1]]).unwrap();
        let t = SubgroupSet::generated(&s3, &[s3.generators()[0]]);
        assert_eq!(s3.quotient(&t).unwrap_err(), GroupError::NotNormal);
        let q = s3.quotient(&SubgroupSet::trivial(&s3)).unwrap();
        assert_eq!(q.group.order(), 6);
    }
}
