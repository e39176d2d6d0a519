//! Concrete finite groups on the index set `0..order`, with `0` the identity.
//!
//! Permutations act on the right: for permutations `a` and `b` in image
//! notation, `a·b` first applies `a`, then `b`. Commutators are
//! `[a, b] = a⁻¹ b⁻¹ a b`.
//!
//! Groups of order at most [`TABLE_LIMIT`] keep a dense multiplication table;
//! larger permutation groups keep the permutation images and a hashed
//! image-to-index map.

mod bitset;
mod classes;
pub mod io;
mod lattice;
mod quotient;
mod subgroup;

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use bitset::Bitset;
pub use classes::ConjugacyClasses;
pub use lattice::LatticeLimits;
pub use quotient::Quotient;
pub use subgroup::{LowerCentralSeries, SubgroupSet};

use crate::error::GroupError;

pub type Elem = usize;

/// Largest order stored as a dense multiplication table.
pub const TABLE_LIMIT: usize = 4096;
/// Default cap on the order of a group closed from permutation generators.
pub const DEFAULT_ORDER_CAP: usize = 200_000;
/// Orders up to this bound get an exhaustive associativity check.
const EXHAUSTIVE_ASSOC_LIMIT: usize = 256;
const RANDOM_ASSOC_TRIPLES: usize = 200_000;

/// Where a group came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Generators,
    Table,
    Family(String),
}

enum Mult {
    Table(Vec<u32>),
    Perm {
        degree: usize,
        images: Vec<u32>,
        index: HashMap<Vec<u32>, u32>,
    },
}

pub struct FiniteGroup {
    order: usize,
    mult: Mult,
    inverse: Vec<u32>,
    labels: Option<Vec<String>>,
    source: Source,
    generators: Vec<Elem>,
    classes: OnceLock<ConjugacyClasses>,
    element_orders: OnceLock<Vec<u32>>,
    lattice: Mutex<Option<Arc<Vec<SubgroupSet>>>>,
    kernels: Mutex<HashMap<i64, Arc<Vec<u64>>>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("source", &self.source)
            .field("generators", &self.generators)
            .finish()
    }
}

impl FiniteGroup {
    /// Closes `gens` (1-based image lists of length `degree`) under composition.
    pub fn from_permutation_generators(
        degree: usize,
        gens: &[Vec<usize>],
    ) -> Result<Self, GroupError> {
        Self::from_permutation_generators_capped(degree, gens, DEFAULT_ORDER_CAP)
    }

    pub fn from_permutation_generators_capped(
        degree: usize,
        gens: &[Vec<usize>],
        cap: usize,
    ) -> Result<Self, GroupError> {
        let mut zero_based: Vec<Vec<u32>> = Vec::with_capacity(gens.len());
        for (i, g) in gens.iter().enumerate() {
            if g.len() != degree {
                return Err(GroupError::MalformedPermutation {
                    index: i,
                    reason: format!("expected {degree} images, got {}", g.len()),
                });
            }
            let mut seen = vec![false; degree];
            let mut p = Vec::with_capacity(degree);
            for &img in g {
                if img == 0 || img > degree {
                    return Err(GroupError::MalformedPermutation {
                        index: i,
                        reason: format!("image {img} outside 1..={degree}"),
                    });
                }
                if std::mem::replace(&mut seen[img - 1], true) {
                    return Err(GroupError::MalformedPermutation {
                        index: i,
                        reason: format!("image {img} repeated"),
                    });
                }
                p.push((img - 1) as u32);
            }
            zero_based.push(p);
        }

        // Breadth-first closure, identity first.
        let identity: Vec<u32> = (0..degree as u32).collect();
        let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut elements: Vec<Vec<u32>> = vec![identity.clone()];
        index.insert(identity, 0);
        let mut head = 0;
        while head < elements.len() {
            for g in &zero_based {
                let prod: Vec<u32> = elements[head].iter().map(|&i| g[i as usize]).collect();
                if let Entry::Vacant(e) = index.entry(prod) {
                    if elements.len() >= cap {
                        return Err(GroupError::OrderCapExceeded { cap });
                    }
                    elements.push(e.key().clone());
                    e.insert((elements.len() - 1) as u32);
                }
            }
            head += 1;
        }
        let mut gen_idx = Vec::with_capacity(zero_based.len());
        for g in &zero_based {
            let i = index[g] as usize;
            if i != 0 && !gen_idx.contains(&i) {
                gen_idx.push(i);
            }
        }

        let order = elements.len();
        let compose = |a: &[u32], b: &[u32]| -> Vec<u32> { a.iter().map(|&i| b[i as usize]).collect() };
        let inverse: Vec<u32> = elements
            .iter()
            .map(|p| {
                let mut inv = vec![0u32; degree];
                for (i, &img) in p.iter().enumerate() {
                    inv[img as usize] = i as u32;
                }
                index[&inv]
            })
            .collect();
        let labels = if order <= TABLE_LIMIT {
            Some(elements.iter().map(|p| cycle_notation(p)).collect())
        } else {
            None
        };
        let mult = if order <= TABLE_LIMIT {
            let mut table = vec![0u32; order * order];
            for (a, pa) in elements.iter().enumerate() {
                for (b, pb) in elements.iter().enumerate() {
                    table[a * order + b] = index[&compose(pa, pb)];
                }
            }
            Mult::Table(table)
        } else {
            Mult::Perm {
                degree,
                images: elements.concat(),
                index,
            }
        };
        Ok(Self::assemble(order, mult, inverse, labels, Source::Generators, Some(gen_idx)))
    }

    /// Validates and wraps a Cayley table (`table[g][h] = g·h`).
    pub fn from_cayley_table(table: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::NotLatinSquare("empty table".into()));
        }
        if n > TABLE_LIMIT {
            return Err(GroupError::OrderCapExceeded { cap: TABLE_LIMIT });
        }
        let mut flat = Vec::with_capacity(n * n);
        for (r, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotLatinSquare(format!(
                    "row {r} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for &x in row {
                if x >= n {
                    return Err(GroupError::BadElement(x));
                }
                flat.push(x as u32);
            }
        }
        for r in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for c in 0..n {
                let x = flat[r * n + c] as usize;
                if std::mem::replace(&mut row_seen[x], true) {
                    return Err(GroupError::NotLatinSquare(format!("row {r} repeats {x}")));
                }
                let y = flat[c * n + r] as usize;
                if std::mem::replace(&mut col_seen[y], true) {
                    return Err(GroupError::NotLatinSquare(format!("column {r} repeats {y}")));
                }
            }
        }
        for g in 0..n {
            if flat[g] as usize != g || flat[g * n] as usize != g {
                return Err(GroupError::NoIdentity);
            }
        }
        let at = |a: usize, b: usize| flat[a * n + b] as usize;
        if n <= EXHAUSTIVE_ASSOC_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = at(a, b);
                    for c in 0..n {
                        if at(ab, c) != at(a, at(b, c)) {
                            return Err(GroupError::NotAssociative(a, b, c));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_a550c);
            for _ in 0..RANDOM_ASSOC_TRIPLES {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if at(at(a, b), c) != at(a, at(b, c)) {
                    return Err(GroupError::NotAssociative(a, b, c));
                }
            }
        }
        let inverse = (0..n)
            .map(|a| (0..n).find(|&b| at(a, b) == 0).expect("latin row contains identity") as u32)
            .collect();
        Ok(Self::assemble(n, Mult::Table(flat), inverse, None, Source::Table, None))
    }

    /// Wraps a table that is a group by construction.
    pub(crate) fn from_trusted_table(
        order: usize,
        table: Vec<u32>,
        source: Source,
        labels: Option<Vec<String>>,
    ) -> Self {
        debug_assert_eq!(table.len(), order * order);
        let mut inverse = vec![0u32; order];
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] == 0 {
                    inverse[a] = b as u32;
                    break;
                }
            }
        }
        Self::assemble(order, Mult::Table(table), inverse, labels, source, None)
    }

    fn assemble(
        order: usize,
        mult: Mult,
        inverse: Vec<u32>,
        labels: Option<Vec<String>>,
        source: Source,
        generators: Option<Vec<Elem>>,
    ) -> Self {
        let mut g = FiniteGroup {
            order,
            mult,
            inverse,
            labels,
            source,
            generators: Vec::new(),
            classes: OnceLock::new(),
            element_orders: OnceLock::new(),
            lattice: Mutex::new(None),
            kernels: Mutex::new(HashMap::new()),
        };
        g.generators = match generators {
            Some(gens) => gens,
            None => {
                let all = Bitset::full(order);
                g.greedy_generators(&all)
            }
        };
        g
    }

    pub(crate) fn with_source(mut self, source: Source) -> Self {
        self.source = source;
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn label(&self, g: Elem) -> String {
        match &self.labels {
            Some(l) => l[g].clone(),
            None => format!("#{g}"),
        }
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    pub fn has_table(&self) -> bool {
        matches!(self.mult, Mult::Table(_))
    }

    /// Row-major multiplication table, when one is stored.
    pub fn table(&self) -> Option<&[u32]> {
        match &self.mult {
            Mult::Table(t) => Some(t),
            Mult::Perm { .. } => None,
        }
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.mult {
            Mult::Table(t) => t[a * self.order + b] as usize,
            Mult::Perm { degree, images, index } => {
                let pa = &images[a * degree..(a + 1) * degree];
                let pb = &images[b * degree..(b + 1) * degree];
                let prod: Vec<u32> = pa.iter().map(|&i| pb[i as usize]).collect();
                index[&prod] as usize
            }
        }
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a] as usize
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    #[inline]
    pub fn commutator(&self, a: Elem, b: Elem) -> Elem {
        let ia = self.inv(a);
        let ib = self.inv(b);
        self.mul(self.mul(ia, ib), self.mul(a, b))
    }

    /// `h⁻¹ g h`.
    #[inline]
    pub fn conjugate(&self, g: Elem, h: Elem) -> Elem {
        self.mul(self.mul(self.inv(h), g), h)
    }

    pub fn element_order(&self, g: Elem) -> usize {
        self.element_orders()[g] as usize
    }

    pub fn element_orders(&self) -> &[u32] {
        self.element_orders.get_or_init(|| {
            (0..self.order)
                .map(|g| {
                    let mut x = g;
                    let mut k = 1u32;
                    while x != 0 {
                        x = self.mul(x, g);
                        k += 1;
                    }
                    k
                })
                .collect()
        })
    }

    /// `g^e` for any integer exponent, reducing `e` modulo the order of `g`.
    pub fn pow(&self, g: Elem, e: i64) -> Elem {
        let ord = self.element_order(g) as i64;
        let r = e.rem_euclid(ord);
        self.pow_unsigned(g, r as u64)
    }

    fn pow_unsigned(&self, g: Elem, mut e: u64) -> Elem {
        let mut acc = 0;
        let mut base = g;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The map `x ↦ x^e` over all elements.
    pub fn power_map(&self, e: i64) -> Vec<u32> {
        self.elements().map(|x| self.pow(x, e) as u32).collect()
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> u64 {
        self.element_orders()
            .iter()
            .fold(1u64, |acc, &o| num_integer::lcm(acc, o as u64))
    }

    pub fn is_abelian(&self) -> bool {
        let gens = &self.generators;
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn conjugacy_classes(&self) -> &ConjugacyClasses {
        self.classes.get_or_init(|| ConjugacyClasses::compute(self))
    }

    /// Checks the group axioms: exhaustively for small orders, on seeded
    /// random triples otherwise. Returns the first failing triple.
    pub fn check_axioms(&self) -> Result<(), GroupError> {
        for g in self.elements() {
            if self.mul(0, g) != g || self.mul(g, 0) != g {
                return Err(GroupError::NoIdentity);
            }
            if self.mul(self.inv(g), g) != 0 || self.mul(g, self.inv(g)) != 0 {
                return Err(GroupError::NotLatinSquare(format!("inverse of {g} is wrong")));
            }
        }
        let n = self.order;
        if n <= EXHAUSTIVE_ASSOC_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Err(GroupError::NotAssociative(a, b, c));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0xa550c);
            for _ in 0..20_000 {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                    return Err(GroupError::NotAssociative(a, b, c));
                }
            }
        }
        Ok(())
    }

    /// Closure of `members ∪ gens` under right multiplication by `gens`,
    /// where `members` is already closed under the old generators.
    pub(crate) fn close(&self, bits: &mut Bitset, members: &mut Vec<Elem>, gens: &[Elem]) {
        if !bits.contains(0) {
            bits.insert(0);
            members.push(0);
        }
        let mut head = 0;
        while head < members.len() {
            let m = members[head];
            for &s in gens {
                let p = self.mul(m, s);
                if bits.insert(p) {
                    members.push(p);
                }
            }
            head += 1;
        }
    }

    /// A short generating set for the subgroup with membership `target`,
    /// picked greedily in index order.
    pub(crate) fn greedy_generators(&self, target: &Bitset) -> Vec<Elem> {
        let mut bits = Bitset::new(self.order);
        bits.insert(0);
        let mut members = vec![0];
        let mut gens = Vec::new();
        for g in target.iter() {
            if !bits.contains(g) {
                gens.push(g);
                self.close(&mut bits, &mut members, &gens);
            }
        }
        gens
    }

    pub(crate) fn cached_kernel(&self, exponent: i64, build: impl FnOnce() -> Vec<u64>) -> Arc<Vec<u64>> {
        if let Some(k) = self.kernels.lock().expect("kernel cache poisoned").get(&exponent) {
            return Arc::clone(k);
        }
        let k = Arc::new(build());
        self.kernels
            .lock()
            .expect("kernel cache poisoned")
            .entry(exponent)
            .or_insert(k)
            .clone()
    }
}

/// Cycle notation for a 0-based image list, printed 1-based.
fn cycle_notation(p: &[u32]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] as usize == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        let mut first = true;
        while !seen[i] {
            seen[i] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&(i + 1).to_string());
            first = false;
            i = p[i] as usize;
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}
