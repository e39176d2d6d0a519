use super::{Elem, FiniteGroup};

/// Partition of a group into conjugation orbits.
///
/// Classes are numbered by their least element, so class 0 is `{identity}`
/// and each representative is the least index in its class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClasses {
    class_of: Vec<u32>,
    representatives: Vec<Elem>,
    sizes: Vec<usize>,
}

impl ConjugacyClasses {
    pub(crate) fn compute(g: &FiniteGroup) -> Self {
        const UNSET: u32 = u32::MAX;
        let mut class_of = vec![UNSET; g.order()];
        let mut representatives = Vec::new();
        let mut sizes = Vec::new();
        let mut orbit = Vec::new();
        for x in g.elements() {
            if class_of[x] != UNSET {
                continue;
            }
            let c = representatives.len() as u32;
            representatives.push(x);
            class_of[x] = c;
            orbit.clear();
            orbit.push(x);
            let mut head = 0;
            while head < orbit.len() {
                let y = orbit[head];
                for &s in g.generators() {
                    let z = g.conjugate(y, s);
                    if class_of[z] == UNSET {
                        class_of[z] = c;
                        orbit.push(z);
                    }
                }
                head += 1;
            }
            sizes.push(orbit.len());
        }
        ConjugacyClasses { class_of, representatives, sizes }
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    #[inline]
    pub fn class_of(&self, g: Elem) -> usize {
        self.class_of[g] as usize
    }

    pub fn representatives(&self) -> &[Elem] {
        &self.representatives
    }

    pub fn representative(&self, c: usize) -> Elem {
        self.representatives[c]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn size(&self, c: usize) -> usize {
        self.sizes[c]
    }

    /// Members of class `c`, ascending.
    pub fn members(&self, c: usize) -> Vec<Elem> {
        (0..self.class_of.len()).filter(|&g| self.class_of[g] as usize == c).collect()
    }
}
