//! Exact and sampled word-map distributions.
//!
//! A distribution is stored as integer tuple counts per conjugacy class over
//! the total `|G|^arity`, so every probability is an exact rational and the
//! masses sum to exactly one.
//!
//! The dynamic program for chain words `[[x1^b, x2^e2], …, xk^ek]` walks the
//! recursion one fresh variable at a time. Word-map distributions are class
//! functions, and the class of `[a, x^e]` for uniform `x` depends only on the
//! class of `a`, so with `T_e(c, c') = #{x : [rep(c), x^e] ∈ c'}`:
//!
//! ```text
//! count_1(c)     = #{x : x^b ∈ c}
//! count_{i+1}(c') = Σ_c count_i(c) · T_e(c, c')
//! ```

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, WordError};
use crate::group::{Elem, FiniteGroup};
use crate::par;
use crate::rational::{self, Rational};
use crate::word::{advance, ChainWord, CompiledWord, Word};

pub const RECORD_VERSION: u32 = 1;

/// `P_{G,w}` as exact tuple counts per conjugacy class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDistribution {
    group_order: usize,
    arity: usize,
    representatives: Vec<Elem>,
    sizes: Vec<usize>,
    counts: Vec<BigUint>,
    total: BigUint,
}

impl ClassDistribution {
    fn new(g: &FiniteGroup, arity: usize, counts: Vec<BigUint>) -> Self {
        let classes = g.conjugacy_classes();
        let d = ClassDistribution {
            group_order: g.order(),
            arity,
            representatives: classes.representatives().to_vec(),
            sizes: classes.sizes().to_vec(),
            counts,
            total: BigUint::from(g.order()).pow(arity as u32),
        };
        debug_assert!(d.is_normalized());
        d
    }

    pub fn num_classes(&self) -> usize {
        self.counts.len()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn representatives(&self) -> &[Elem] {
        &self.representatives
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Number of tuples whose value lies in class `c`.
    pub fn count(&self, c: usize) -> &BigUint {
        &self.counts[c]
    }

    pub fn total(&self) -> &BigUint {
        &self.total
    }

    /// Probability that the word value lies in class `c`.
    pub fn mass(&self, c: usize) -> Rational {
        rational::from_counts(&self.counts[c], &self.total)
    }

    /// Probability of any single element of class `c`.
    pub fn element_prob(&self, c: usize) -> Rational {
        self.mass(c) / BigRational::from_integer(self.sizes[c].into())
    }

    /// `Σ_c count(c) = |G|^arity`.
    pub fn is_normalized(&self) -> bool {
        self.counts.iter().sum::<BigUint>() == self.total
    }

    /// Element of largest probability, ties broken by least index.
    pub fn max_point(&self) -> (Elem, Rational) {
        let mut best = 0;
        for c in 1..self.num_classes() {
            // count(c)/size(c) > count(best)/size(best), or equal with a smaller representative
            let lhs = &self.counts[c] * BigUint::from(self.sizes[best]);
            let rhs = &self.counts[best] * BigUint::from(self.sizes[c]);
            if lhs > rhs || (lhs == rhs && self.representatives[c] < self.representatives[best]) {
                best = c;
            }
        }
        (self.representatives[best], self.element_prob(best))
    }

    /// Total mass of classes whose size (the centralizer index of their
    /// elements) is strictly below `threshold`.
    pub fn centralizer_index_tail(&self, threshold: &Rational) -> Rational {
        let mut acc = BigUint::zero();
        for c in 0..self.num_classes() {
            if &BigRational::from_integer(self.sizes[c].into()) < threshold {
                acc += &self.counts[c];
            }
        }
        rational::from_counts(&acc, &self.total)
    }

    pub fn to_record(&self, group: &str, word: &str) -> DistributionRecord {
        DistributionRecord {
            version: RECORD_VERSION,
            group: group.to_string(),
            word: word.to_string(),
            group_order: self.group_order,
            classes: (0..self.num_classes())
                .map(|c| {
                    let m = self.mass(c);
                    ClassMass {
                        representative: self.representatives[c],
                        size: self.sizes[c],
                        numerator: m.numer().to_string(),
                        denominator: m.denom().to_string(),
                    }
                })
                .collect(),
        }
    }
}

/// Serialized distribution: one entry per class with its exact mass.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionRecord {
    pub version: u32,
    pub group: String,
    pub word: String,
    pub group_order: usize,
    pub classes: Vec<ClassMass>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassMass {
    pub representative: Elem,
    pub size: usize,
    pub numerator: String,
    pub denominator: String,
}

impl DistributionRecord {
    pub fn mass(&self, class: usize) -> Option<Rational> {
        let c = self.classes.get(class)?;
        rational::parse(&format!("{}/{}", c.numerator, c.denominator))
    }
}

/// Number of tuples for exhaustive counting, if it fits the budget.
fn tuple_budget(g: &FiniteGroup, arity: usize, budget: u64) -> Result<u64, WordError> {
    let needed = (g.order() as u128).checked_pow(arity as u32).unwrap_or(u128::MAX);
    if needed > budget as u128 {
        return Err(WordError::Budget { needed, budget });
    }
    Ok(needed as u64)
}

/// `|w_G^{-1}(g)|` for every element `g`, by enumerating all tuples.
///
/// Tuples run in mixed-radix order; the leading digit is split across workers
/// and the integer counts are summed, so the result does not depend on the
/// number of workers.
pub fn fiber_counts_bruteforce(g: &FiniteGroup, w: &Word, budget: u64) -> Result<Vec<u64>, WordError> {
    let arity = w.arity();
    tuple_budget(g, arity, budget)?;
    let n = g.order();
    let compiled = CompiledWord::new(w, g);
    if arity == 0 {
        let mut counts = vec![0u64; n];
        counts[compiled.eval(g, &[])] = 1;
        return Ok(counts);
    }
    Ok(par::sum_counts(n, n, |lead, counts| {
        let mut tuple = vec![0usize; arity];
        tuple[0] = lead;
        loop {
            counts[compiled.eval(g, &tuple)] += 1;
            if !advance(&mut tuple[1..], n) {
                break;
            }
        }
    }))
}

pub fn exact_distribution_bruteforce(g: &FiniteGroup, w: &Word, budget: u64) -> Result<ClassDistribution, WordError> {
    let fibers = fiber_counts_bruteforce(g, w, budget)?;
    let classes = g.conjugacy_classes();
    let mut counts = vec![0u64; classes.len()];
    for (x, &f) in fibers.iter().enumerate() {
        counts[classes.class_of(x)] += f;
    }
    Ok(ClassDistribution::new(g, w.arity(), counts.into_iter().map(BigUint::from).collect()))
}

/// `T_e(c, c')`, flattened row-major over classes and cached on the group.
fn transition_kernel(g: &FiniteGroup, e: i64) -> std::sync::Arc<Vec<u64>> {
    g.cached_kernel(e, || {
        let classes = g.conjugacy_classes();
        let k = classes.len();
        let powers = g.power_map(e);
        let rows = par::map(classes.representatives(), |&a| {
            let mut row = vec![0u64; k];
            for &y in &powers {
                row[classes.class_of(g.commutator(a, y as usize))] += 1;
            }
            row
        });
        debug_assert_eq!(rows.len(), k);
        rows.concat()
    })
}

fn chain_counts(g: &FiniteGroup, chain: &ChainWord) -> Vec<BigUint> {
    let classes = g.conjugacy_classes();
    let k = classes.len();
    let mut counts = vec![BigUint::zero(); k];
    for x in g.elements() {
        counts[classes.class_of(g.pow(x, chain.base))] += 1u32;
    }
    for &e in &chain.steps {
        let t = transition_kernel(g, e);
        let mut next = vec![BigUint::zero(); k];
        for (c, cnt) in counts.iter().enumerate() {
            if cnt.is_zero() {
                continue;
            }
            for (c2, &m) in t[c * k..(c + 1) * k].iter().enumerate() {
                if m != 0 {
                    next[c2] += cnt * m;
                }
            }
        }
        counts = next;
    }
    counts
}

/// Class-function DP. Only accepts chain words.
pub fn exact_distribution_dp(g: &FiniteGroup, w: &Word) -> Result<ClassDistribution, WordError> {
    let chain = w
        .chain_form()
        .ok_or_else(|| WordError::NotChain(w.to_string()))?;
    Ok(ClassDistribution::new(g, chain.arity(), chain_counts(g, &chain)))
}

/// DP for chain words, brute force otherwise. The DP is charged
/// `|G| · classes` operations per step for its transition kernels.
pub fn exact_distribution(g: &FiniteGroup, w: &Word, budget: u64) -> Result<ClassDistribution, WordError> {
    match w.chain_form() {
        Some(chain) => {
            let n = g.order() as u128;
            let needed = n + n * g.conjugacy_classes().len() as u128 * chain.steps.len() as u128;
            if needed > budget as u128 {
                return Err(WordError::Budget { needed, budget });
            }
            Ok(ClassDistribution::new(g, chain.arity(), chain_counts(g, &chain)))
        }
        None => exact_distribution_bruteforce(g, w, budget),
    }
}

/// `P_{G,w}(x)`.
pub fn prob_at(g: &FiniteGroup, w: &Word, x: Elem, budget: u64) -> Result<Rational, Error> {
    if x >= g.order() {
        return Err(crate::GroupError::BadElement(x).into());
    }
    let d = exact_distribution(g, w, budget)?;
    Ok(d.element_prob(g.conjugacy_classes().class_of(x)))
}

/// `Pr_k(G) = P_{G,w_k}(1)`.
pub fn pr_k(g: &FiniteGroup, k: usize) -> Rational {
    let d = exact_distribution_dp(g, &Word::lower_central(k)).expect("w_k is a chain word");
    d.element_prob(0)
}

pub fn max_point(g: &FiniteGroup, w: &Word, budget: u64) -> Result<(Elem, Rational), WordError> {
    Ok(exact_distribution(g, w, budget)?.max_point())
}

/// `Prob(|G : C_G(w(g_1..g_k))| < threshold)`.
pub fn centralizer_index_tail(g: &FiniteGroup, w: &Word, threshold: &Rational, budget: u64) -> Result<Rational, WordError> {
    Ok(exact_distribution(g, w, budget)?.centralizer_index_tail(threshold))
}

/// Hoeffding half-width `sqrt(ln(2/α) / (2n))`.
pub fn hoeffding_radius(samples: u64, alpha: f64) -> f64 {
    ((2.0 / alpha).ln() / (2.0 * samples as f64)).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub successes: u64,
    pub samples: u64,
    pub alpha: f64,
    pub radius: f64,
    pub seed: u64,
}

impl Estimate {
    pub fn point(&self) -> Rational {
        rational::ratio(self.successes, self.samples)
    }

    pub fn point_f64(&self) -> f64 {
        self.successes as f64 / self.samples as f64
    }

    /// Whether `|point − p| ≤ radius`.
    pub fn covers(&self, p: &Rational) -> bool {
        (self.point_f64() - p.to_f64().unwrap_or(f64::NAN)).abs() <= self.radius
    }
}

const SAMPLE_CHUNK: u64 = 4096;

/// Seeded Monte Carlo estimate of `P_{G,w}(target)`.
///
/// Sample `i` draws its tuple from a ChaCha8 stream selected by `i`, so the
/// draws do not depend on how samples are spread over workers.
pub fn monte_carlo(g: &FiniteGroup, w: &Word, target: Elem, samples: u64, alpha: f64, seed: u64) -> Result<Estimate, Error> {
    if samples == 0 {
        return Err(Error::Parameters("samples must be at least 1".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Parameters(format!("confidence α = {alpha} must lie in (0, 1)")));
    }
    if target >= g.order() {
        return Err(crate::GroupError::BadElement(target).into());
    }
    let compiled = CompiledWord::new(w, g);
    let arity = w.arity();
    let n = g.order();
    let key = ChaCha8Rng::seed_from_u64(seed).get_seed();
    let chunks = samples.div_ceil(SAMPLE_CHUNK) as usize;
    let hits = par::sum_counts(chunks, 1, |chunk, acc| {
        let start = chunk as u64 * SAMPLE_CHUNK;
        let end = (start + SAMPLE_CHUNK).min(samples);
        let mut tuple = vec![0usize; arity];
        for i in start..end {
            let mut rng = ChaCha8Rng::from_seed(key);
            rng.set_stream(i);
            for t in tuple.iter_mut() {
                *t = rng.gen_range(0..n);
            }
            if compiled.eval(g, &tuple) == target {
                acc[0] += 1;
            }
        }
    });
    Ok(Estimate {
        successes: hits[0],
        samples,
        alpha,
        radius: hoeffding_radius(samples, alpha),
        seed,
    })
}
