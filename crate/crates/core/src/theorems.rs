//! `G(S_n)`, `L(n)`, and checkers for the nilpotency statements about
//! groups in which a word takes some value with large probability.
//!
//! `G(S_n)`, the intersection of the kernels of all homomorphisms
//! `G → S_n`, is computed as the intersection of all subgroups of index at
//! most `n`. The two agree: the kernel of `φ: G → S_n` is the intersection
//! of the stabilisers of the `n` points, each of index at most `n`; and a
//! subgroup `H` of index `m ≤ n` contains the kernel of the coset action
//! `G → S_m ≤ S_n`. [`FiniteGroup::coset_action_kernel`] gives an
//! independent route used for cross-checking.
//!
//! Every check in a [`TheoremReport`] keeps both exact sides as text, so a
//! report can be re-validated with [`TheoremReport::recheck`] without
//! touching the group again.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, GroupError};
use crate::group::{FiniteGroup, LatticeLimits, SubgroupSet};
use crate::prob;
use crate::rational::{self, ratio, Rational};
use crate::word::{Word, DEFAULT_BUDGET};

pub const REPORT_VERSION: u32 = 1;

/// `lcm(1, …, n)`, the exponent of `S_n`.
pub fn l_of_n(n: u64) -> BigUint {
    assert!(n >= 1, "L(n) needs n ≥ 1");
    (2..=n).fold(BigUint::one(), |acc, i| acc.lcm(&BigUint::from(i)))
}

/// Work limits for the checkers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Cap on group operations per distribution or identity check.
    pub max_ops: u64,
    pub lattice: LatticeLimits,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_ops: DEFAULT_BUDGET, lattice: LatticeLimits::default() }
    }
}

impl Budget {
    pub fn with_ops(max_ops: u64) -> Self {
        Budget { max_ops, ..Budget::default() }
    }
}

#[derive(Debug, Clone)]
pub struct SnResidual {
    pub n: u64,
    /// `N = G(S_n)`.
    pub residual: SubgroupSet,
    /// `M = C_G(N)`.
    pub centralizer: SubgroupSet,
    /// Number of subgroups of index at most `n` that were intersected.
    pub contributing_subgroups: usize,
}

/// `G(S_n)` and its centraliser. Any `n ≥ |G|` gives the trivial subgroup.
pub fn g_sn(g: &FiniteGroup, n: u64, limits: &LatticeLimits) -> Result<SnResidual, GroupError> {
    assert!(n >= 1, "G(S_n) needs n ≥ 1");
    let bound = n.min(g.order() as u64) as usize;
    let subgroups = g.subgroups_of_index_at_most(bound, limits)?;
    let mut residual = SubgroupSet::whole(g);
    for h in &subgroups {
        if !residual.is_subgroup_of(h) {
            residual = residual.intersection(g, h);
        }
    }
    let centralizer = g.centralizer_of_set(&residual);
    Ok(SnResidual { n, residual, centralizer, contributing_subgroups: subgroups.len() })
}

/// `⌊k/ε⌋` style quotients, saturating at `u64::MAX`.
fn floor_u64(r: &Rational) -> u64 {
    rational::floor_nonneg(r).to_u64().unwrap_or(u64::MAX)
}

/// `n(1, ε) = ⌊2/ε²⌋`, `n(k+1, ε) = max(n(k, ε/2), ⌊2/ε⌋)`, i.e. the
/// recursion with `δ = ε/2` at each step.
pub fn n_schedule(k: usize, eps: &Rational) -> BigUint {
    assert!(k >= 1, "schedule needs k ≥ 1");
    assert!(eps > &Rational::zero(), "schedule needs ε > 0");
    let two = ratio(2, 1);
    if k == 1 {
        return rational::floor_nonneg(&(&two / (eps * eps)));
    }
    let inner = n_schedule(k - 1, &(eps / &two));
    inner.max(rational::floor_nonneg(&(&two / eps)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Epsilon {
    /// The largest point mass of the relevant distribution.
    Auto,
    Value(Rational),
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Epsilon::Auto => write!(f, "auto"),
            Epsilon::Value(r) => write!(f, "{}", rational::to_text(r)),
        }
    }
}

impl std::str::FromStr for Epsilon {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        if s.trim() == "auto" {
            return Ok(Epsilon::Auto);
        }
        rational::parse(s)
            .map(Epsilon::Value)
            .ok_or_else(|| Error::Parameters(format!("bad ε `{s}`: expected `auto` or a rational")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Delta {
    Value(Rational),
    /// `δ = ε / d`.
    EpsOver(u64),
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Delta::Value(r) => write!(f, "{}", rational::to_text(r)),
            Delta::EpsOver(d) => write!(f, "eps/{d}"),
        }
    }
}

impl std::str::FromStr for Delta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        if let Some(d) = t.strip_prefix("eps/") {
            return d
                .parse::<u64>()
                .ok()
                .filter(|&d| d >= 1)
                .map(Delta::EpsOver)
                .ok_or_else(|| Error::Parameters(format!("bad δ `{s}`")));
        }
        rational::parse(t)
            .map(Delta::Value)
            .ok_or_else(|| Error::Parameters(format!("bad δ `{s}`: expected a rational or `eps/<d>`")))
    }
}

impl Delta {
    fn resolve(&self, eps: &Rational) -> Rational {
        match self {
            Delta::Value(r) => r.clone(),
            Delta::EpsOver(d) => eps / ratio(*d as i64, 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremTag {
    Finite,
    Lemma1,
    Prop2,
    Structure,
    Squares,
    IdentityCertificate,
}

impl fmt::Display for TheoremTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TheoremTag::Finite => "finite",
            TheoremTag::Lemma1 => "lemma1",
            TheoremTag::Prop2 => "prop2",
            TheoremTag::Structure => "structure",
            TheoremTag::Squares => "squares",
            TheoremTag::IdentityCertificate => "identity-certificate",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HypothesisStatus {
    Satisfied,
    Violated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The hypothesis does not hold, so nothing was asserted.
    Vacuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Gt,
    Ge,
    Lt,
    Le,
    Eq,
    /// `lhs` divides `rhs` (nonnegative integers).
    Divides,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Gt => ">",
            Relation::Ge => "≥",
            Relation::Lt => "<",
            Relation::Le => "≤",
            Relation::Eq => "=",
            Relation::Divides => "|",
        }
    }
}

/// One exact comparison `lhs REL rhs`, sides stored as `"num/den"` or
/// integer text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub lhs: String,
    pub relation: Relation,
    pub rhs: String,
    pub holds: bool,
}

impl Check {
    fn rational(name: &str, lhs: &Rational, relation: Relation, rhs: &Rational) -> Check {
        let mut c = Check {
            name: name.to_string(),
            lhs: rational::to_text(lhs),
            relation,
            rhs: rational::to_text(rhs),
            holds: false,
        };
        c.holds = c.evaluate().expect("sides were produced from rationals");
        c
    }

    fn integer(name: &str, lhs: impl Into<BigUint>, relation: Relation, rhs: impl Into<BigUint>) -> Check {
        let mut c = Check {
            name: name.to_string(),
            lhs: lhs.into().to_string(),
            relation,
            rhs: rhs.into().to_string(),
            holds: false,
        };
        c.holds = c.evaluate().expect("sides were produced from integers");
        c
    }

    /// Recomputes the relation from the stored sides.
    pub fn evaluate(&self) -> Option<bool> {
        if self.relation == Relation::Divides {
            let a: BigUint = self.lhs.parse().ok()?;
            let b: BigUint = self.rhs.parse().ok()?;
            return Some(if a.is_zero() { b.is_zero() } else { (&b % &a).is_zero() });
        }
        let a = rational::parse(&self.lhs)?;
        let b = rational::parse(&self.rhs)?;
        Some(match self.relation {
            Relation::Gt => a > b,
            Relation::Ge => a >= b,
            Relation::Lt => a < b,
            Relation::Le => a <= b,
            Relation::Eq => a == b,
            Relation::Divides => unreachable!(),
        })
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} {} {}", self.name, self.lhs, self.relation.symbol(), self.rhs)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inputs {
    pub group: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// As requested: `auto` or a rational.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witnesses {
    /// The ε actually used.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
    /// Element (label) at which the relevant distribution is largest.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schedule: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contributing_subgroups: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_series: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_class: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub centralizer_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quotient_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quotient_exponent: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_of_n: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_mod_exponent: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub version: u32,
    pub theorem: TheoremTag,
    pub inputs: Inputs,
    pub hypothesis: HypothesisStatus,
    pub witnesses: Witnesses,
    pub checks: Vec<Check>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure_detail: Option<String>,
}

impl TheoremReport {
    fn new(theorem: TheoremTag, inputs: Inputs) -> Self {
        TheoremReport {
            version: REPORT_VERSION,
            theorem,
            inputs,
            hypothesis: HypothesisStatus::Satisfied,
            witnesses: Witnesses::default(),
            checks: Vec::new(),
            verdict: Verdict::Pass,
            failure_detail: None,
        }
    }

    fn violate(&mut self, why: String) {
        self.hypothesis = HypothesisStatus::Violated;
        self.failure_detail.get_or_insert(format!("hypothesis violated: {why}"));
    }

    /// Sets the verdict from the hypothesis and the checks.
    fn conclude(mut self) -> Self {
        if self.hypothesis == HypothesisStatus::Violated {
            self.verdict = Verdict::Vacuous;
            return self;
        }
        match self.checks.iter().find(|c| !c.holds) {
            Some(c) => {
                self.verdict = Verdict::Fail;
                self.failure_detail = Some(format!("{c} does not hold"));
            }
            None => self.verdict = Verdict::Pass,
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Re-evaluates every stored check and the verdict derived from them.
    pub fn recheck(&self) -> bool {
        let all = self.checks.iter().all(|c| c.evaluate() == Some(c.holds));
        let expected = match self.hypothesis {
            HypothesisStatus::Violated => Verdict::Vacuous,
            HypothesisStatus::Satisfied if self.checks.iter().all(|c| c.holds) => Verdict::Pass,
            HypothesisStatus::Satisfied => Verdict::Fail,
        };
        all && expected == self.verdict
    }

    /// One line of JSON.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialise")
    }

    pub fn from_json_line(line: &str) -> Result<Self, Error> {
        serde_json::from_str(line).map_err(|e| Error::Parameters(format!("bad report line: {e}")))
    }
}

fn positive(name: &str, r: &Rational) -> Result<(), Error> {
    if r > &Rational::zero() {
        Ok(())
    } else {
        Err(Error::Parameters(format!("{name} must be positive, got {}", rational::to_text(r))))
    }
}

/// Resolves `ε` against the distribution of `w`, recording the witness
/// and flagging an unattained explicit value.
fn resolve_epsilon(
    g: &FiniteGroup,
    w: &Word,
    eps: &Epsilon,
    budget: &Budget,
    report: &mut TheoremReport,
) -> Result<Rational, Error> {
    let (at, best) = prob::max_point(g, w, budget.max_ops)?;
    let value = match eps {
        Epsilon::Auto => best.clone(),
        Epsilon::Value(v) => {
            positive("ε", v)?;
            if v > &best {
                report.violate(format!(
                    "no element has probability ≥ {} under {w} (largest is {})",
                    rational::to_text(v),
                    rational::to_text(&best)
                ));
            }
            v.clone()
        }
    };
    report.witnesses.epsilon = Some(rational::to_text(&value));
    report.witnesses.epsilon_witness = Some(g.label(at));
    Ok(value)
}

fn residual_witnesses(g: &FiniteGroup, res: &SnResidual, report: &mut TheoremReport) {
    let series = g.lower_central_series_of(&res.residual);
    report.witnesses.n = Some(res.n.to_string());
    report.witnesses.contributing_subgroups = Some(res.contributing_subgroups);
    report.witnesses.residual_order = Some(res.residual.order());
    report.witnesses.residual_series = Some(series.orders());
    report.witnesses.residual_class = series.nilpotency_class();
}

/// Class of `N` below `bound`: `|γ_bound(N)| = 1`.
fn class_below(g: &FiniteGroup, n: &SubgroupSet, bound: usize, name: &str) -> Check {
    let series = g.lower_central_series_of(n);
    Check::integer(name, series.term(bound).order(), Relation::Eq, 1u32)
}

/// If `P_{G,w_k}(g) ≥ ε` for some `g`, then with `n = ⌊k/ε⌋` and
/// `N = G(S_n)`: `N` is nilpotent of class `< k` and `exponent(G/N)`
/// divides `L(n)`.
pub fn verify_theorem_finite(
    g: &FiniteGroup,
    group_id: &str,
    k: usize,
    eps: &Epsilon,
    budget: &Budget,
) -> Result<TheoremReport, Error> {
    if k == 0 {
        return Err(Error::Parameters("k must be at least 1".into()));
    }
    let w = Word::lower_central(k);
    let mut report = TheoremReport::new(
        TheoremTag::Finite,
        Inputs { group: group_id.into(), word: Some(w.to_string()), k: Some(k), epsilon: Some(eps.to_string()), delta: None },
    );
    let e = resolve_epsilon(g, &w, eps, budget, &mut report)?;
    let n = floor_u64(&(ratio(k as i64, 1) / &e));
    if n == 0 {
        return Err(Error::Parameters("ε must be at most k".into()));
    }
    let res = g_sn(g, n, &budget.lattice)?;
    residual_witnesses(g, &res, &mut report);
    report.checks.push(class_below(g, &res.residual, k, &format!("|γ_{k}(N)|")));
    let q = g.quotient(&res.residual)?;
    let exp = q.group.exponent();
    let (l, name) = lcm_for_divisibility(n, exp);
    report.witnesses.quotient_order = Some(q.group.order());
    report.witnesses.quotient_exponent = Some(exp);
    report.witnesses.l_of_n = Some(l.to_string());
    report.checks.push(Check::integer(&format!("exponent(G/N) | {name}"), exp, Relation::Divides, l));
    Ok(report.conclude())
}

/// Past this, `L(n)` is replaced by `L(min(n, e))`: an exponent `e` divides
/// `L(n)` exactly when it divides `L(min(n, e))`.
const LCM_TEXT_LIMIT: u64 = 5000;

fn lcm_for_divisibility(n: u64, exponent: u64) -> (BigUint, String) {
    if n <= LCM_TEXT_LIMIT {
        (l_of_n(n), "L(n)".into())
    } else {
        let m = n.min(exponent.max(1));
        (l_of_n(m), format!("L({m})"))
    }
}

fn fresh_commutator(w: &Word) -> Word {
    Word::commutator(w, &Word::var(w.arity() as u32 + 1))
}

/// Shared hypothesis handling for the δ-statements: `ε` against
/// `w' = [w, x_fresh]`, then `0 < δ < ε`.
fn delta_setup(
    g: &FiniteGroup,
    w: &Word,
    eps: &Epsilon,
    delta: &Delta,
    budget: &Budget,
    report: &mut TheoremReport,
) -> Result<(Rational, Rational), Error> {
    let w_prime = fresh_commutator(w);
    let e = resolve_epsilon(g, &w_prime, eps, budget, report)?;
    let d = delta.resolve(&e);
    positive("δ", &d)?;
    report.witnesses.delta = Some(rational::to_text(&d));
    if d >= e {
        report.violate(format!("δ = {} is not below ε = {}", rational::to_text(&d), rational::to_text(&e)));
    }
    Ok((e, d))
}

/// If `P_{G,[w,x]}(g) ≥ ε` for some `g` and `0 < δ < ε`, then
/// `Prob(|G : C_G(w(g_1, …))| < 1/δ) > ε − δ`.
pub fn verify_lemma1(
    g: &FiniteGroup,
    group_id: &str,
    w: &Word,
    eps: &Epsilon,
    delta: &Delta,
    budget: &Budget,
) -> Result<TheoremReport, Error> {
    let mut report = TheoremReport::new(
        TheoremTag::Lemma1,
        Inputs {
            group: group_id.into(),
            word: Some(w.to_string()),
            k: None,
            epsilon: Some(eps.to_string()),
            delta: Some(delta.to_string()),
        },
    );
    let (e, d) = delta_setup(g, w, eps, delta, budget, &mut report)?;
    let threshold = Rational::one() / &d;
    let tail = prob::centralizer_index_tail(g, w, &threshold, budget.max_ops)?;
    report.checks.push(Check::rational("Prob(|G:C(w)| < 1/δ) > ε − δ", &tail, Relation::Gt, &(&e - &d)));
    Ok(report.conclude())
}

/// With the hypotheses of [`verify_lemma1`], `n = ⌊1/δ⌋`, `N = G(S_n)` and
/// `M = C_G(N)`: `P_{G/M,w}(1) > ε − δ`.
pub fn verify_prop2(
    g: &FiniteGroup,
    group_id: &str,
    w: &Word,
    eps: &Epsilon,
    delta: &Delta,
    budget: &Budget,
) -> Result<TheoremReport, Error> {
    let mut report = TheoremReport::new(
        TheoremTag::Prop2,
        Inputs {
            group: group_id.into(),
            word: Some(w.to_string()),
            k: None,
            epsilon: Some(eps.to_string()),
            delta: Some(delta.to_string()),
        },
    );
    let (e, d) = delta_setup(g, w, eps, delta, budget, &mut report)?;
    let n = floor_u64(&(Rational::one() / &d)).max(1);
    let res = g_sn(g, n, &budget.lattice)?;
    residual_witnesses(g, &res, &mut report);
    report.witnesses.centralizer_order = Some(res.centralizer.order());
    let q = g.quotient(&res.centralizer)?;
    report.witnesses.quotient_order = Some(q.group.order());
    let p = prob::prob_at(&q.group, w, q.group.identity(), budget.max_ops)?;
    report.checks.push(Check::rational("P_{G/M,w}(1) > ε − δ", &p, Relation::Gt, &(&e - &d)));
    Ok(report.conclude())
}

/// If `P_{G,[x1²,x2,…,xk]}(g) ≥ ε` for some `g`, then `G(S_n)` with
/// `n = n(k, ε)` from [`n_schedule`] is nilpotent of class at most `k`.
pub fn verify_theorem_structure(
    g: &FiniteGroup,
    group_id: &str,
    k: usize,
    eps: &Epsilon,
    budget: &Budget,
) -> Result<TheoremReport, Error> {
    if k == 0 {
        return Err(Error::Parameters("k must be at least 1".into()));
    }
    let w = Word::square_commutator(k);
    let mut report = TheoremReport::new(
        TheoremTag::Structure,
        Inputs { group: group_id.into(), word: Some(w.to_string()), k: Some(k), epsilon: Some(eps.to_string()), delta: None },
    );
    let e = resolve_epsilon(g, &w, eps, budget, &mut report)?;
    let n = n_schedule(k, &e);
    let n_eff = n.to_u64().unwrap_or(u64::MAX).max(1);
    let res = g_sn(g, n_eff, &budget.lattice)?;
    residual_witnesses(g, &res, &mut report);
    report.witnesses.n = Some(n.to_string());
    report.witnesses.schedule = Some("n(1,ε) = ⌊2/ε²⌋; n(k+1,ε) = max(n(k,ε/2), ⌊2/ε⌋)".into());
    report.checks.push(class_below(g, &res.residual, k + 1, &format!("|γ_{}(N)|", k + 1)));
    Ok(report.conclude())
}

/// `Pr_2(G) ≥ ε²` where `ε` is the largest point mass of `x1²`.
pub fn verify_squares_inequality(g: &FiniteGroup, group_id: &str, budget: &Budget) -> Result<TheoremReport, Error> {
    let w = Word::power_of(1, 2);
    let mut report = TheoremReport::new(
        TheoremTag::Squares,
        Inputs { group: group_id.into(), word: Some(w.to_string()), k: None, epsilon: Some("auto".into()), delta: None },
    );
    let e = resolve_epsilon(g, &w, &Epsilon::Auto, budget, &mut report)?;
    let commuting = prob::prob_at(g, &Word::lower_central(2), g.identity(), budget.max_ops)?;
    report.checks.push(Check::rational("Pr_2(G) ≥ ε²", &commuting, Relation::Ge, &(&e * &e)));
    Ok(report.conclude())
}

/// Under the hypothesis of [`verify_theorem_finite`], `G` satisfies
/// `[x1^c, …, xk^c]` with `c = L(⌊k/ε⌋)`. Checked through the full image of
/// the word, which must be `{1}`.
pub fn certify_identity(
    g: &FiniteGroup,
    group_id: &str,
    k: usize,
    eps: &Epsilon,
    budget: &Budget,
) -> Result<TheoremReport, Error> {
    if k == 0 {
        return Err(Error::Parameters("k must be at least 1".into()));
    }
    let wk = Word::lower_central(k);
    let mut report = TheoremReport::new(
        TheoremTag::IdentityCertificate,
        Inputs { group: group_id.into(), word: Some(wk.to_string()), k: Some(k), epsilon: Some(eps.to_string()), delta: None },
    );
    let e = resolve_epsilon(g, &wk, eps, budget, &mut report)?;
    let n = floor_u64(&(ratio(k as i64, 1) / &e));
    if n == 0 {
        return Err(Error::Parameters("ε must be at most k".into()));
    }
    // x^c depends only on c modulo the exponent.
    let exp = g.exponent();
    let (c, _) = lcm_for_divisibility(n, exp);
    let c_text = if n <= LCM_TEXT_LIMIT { c.to_string() } else { format!("L({n})") };
    let c_red = (&c % BigUint::from(exp)).to_u64().expect("reduced below the exponent");
    report.witnesses.n = Some(n.to_string());
    report.witnesses.c = Some(c_text);
    report.witnesses.c_mod_exponent = Some(c_red);
    let w = Word::powered_lower_central(k, c_red as i64);
    let image = w.value_set(g, budget.max_ops)?;
    report.checks.push(Check::integer("|image of [x1^c, …, xk^c]|", image.len(), Relation::Eq, 1u32));
    Ok(report.conclude())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::GroupSpec;

    fn build(id: &str) -> FiniteGroup {
        id.parse::<GroupSpec>().unwrap().build().unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        ratio(n, d)
    }

    #[test]
    fn lcm_values() {
        assert_eq!(l_of_n(1), BigUint::from(1u32));
        assert_eq!(l_of_n(4), BigUint::from(12u32));
        assert_eq!(l_of_n(5), BigUint::from(60u32));
        assert_eq!(l_of_n(6), BigUint::from(60u32));
        // naive oracle
        for n in 1..=20u64 {
            let mut m = 1u64;
            while !(1..=n).all(|i| m.is_multiple_of(i)) {
                m += 1;
            }
            assert_eq!(l_of_n(n), BigUint::from(m));
        }
    }

    #[test]
    fn residuals_of_s4() {
        let s4 = build("S:4");
        let lim = LatticeLimits::default();
        assert_eq!(g_sn(&s4, 1, &lim).unwrap().residual.order(), 24);
        let a4 = g_sn(&s4, 2, &lim).unwrap();
        assert_eq!(a4.residual.order(), 12);
        assert_eq!(a4.contributing_subgroups, 2);
        assert_eq!(a4.residual.iter().filter(|&x| s4.element_order(x) == 3).count(), 8);
        let v4 = g_sn(&s4, 3, &lim).unwrap();
        assert_eq!(v4.residual.order(), 4);
        assert!(v4.residual.iter().all(|x| s4.mul(x, x) == 0));
        assert!(g_sn(&s4, 4, &lim).unwrap().residual.is_trivial());
        assert!(g_sn(&s4, 1000, &lim).unwrap().residual.is_trivial());
    }

    #[test]
    fn residual_matches_kernel_intersection() {
        let lim = LatticeLimits::default();
        for id in ["S:3", "D:4", "Dic:2", "A:4", "S:4", "P:[S:3,C:2]", "D:6"] {
            let g = build(id);
            for n in 1..=5u64 {
                let res = g_sn(&g, n, &lim).unwrap();
                let mut kernels = SubgroupSet::whole(&g);
                for h in g.subgroups_of_index_at_most(n as usize, &lim).unwrap() {
                    kernels = kernels.intersection(&g, &g.coset_action_kernel(&h));
                }
                assert_eq!(res.residual, kernels, "{id} n={n}");
                assert!(res.residual.is_normal_in(&g));
            }
        }
    }

    #[test]
    fn schedule_values() {
        assert_eq!(n_schedule(1, &q(1, 1)), BigUint::from(2u32));
        assert_eq!(n_schedule(1, &q(1, 2)), BigUint::from(8u32));
        assert_eq!(n_schedule(2, &q(1, 1)), BigUint::from(8u32));
        assert_eq!(n_schedule(1, &q(3, 4)), BigUint::from(3u32));
    }

    #[test]
    fn finite_theorem_fixtures() {
        let b = Budget::default();
        let s3 = build("S:3");
        let r = verify_theorem_finite(&s3, "S:3", 2, &Epsilon::Auto, &b).unwrap();
        assert_eq!(r.witnesses.epsilon.as_deref(), Some("1/2"));
        assert_eq!(r.witnesses.n.as_deref(), Some("4"));
        assert_eq!(r.witnesses.residual_order, Some(1));
        assert_eq!(r.witnesses.quotient_exponent, Some(6));
        assert_eq!(r.witnesses.l_of_n.as_deref(), Some("12"));
        assert!(r.passed() && r.recheck());

        let d4 = build("D:4");
        let r = verify_theorem_finite(&d4, "D:4", 2, &Epsilon::Auto, &b).unwrap();
        assert_eq!(r.witnesses.epsilon.as_deref(), Some("5/8"));
        assert_eq!(r.witnesses.n.as_deref(), Some("3"));
        assert_eq!(r.witnesses.residual_order, Some(2));
        assert_eq!(r.witnesses.quotient_exponent, Some(2));
        assert!(r.passed());

        let c1 = build("C:1");
        assert!(verify_theorem_finite(&c1, "C:1", 1, &Epsilon::Auto, &b).unwrap().passed());
        let c6 = build("C:6");
        let r = verify_theorem_finite(&c6, "C:6", 3, &Epsilon::Auto, &b).unwrap();
        assert_eq!(r.witnesses.n.as_deref(), Some("3"));
        assert!(r.passed());
    }

    #[test]
    fn unattained_epsilon_is_vacuous() {
        let s3 = build("S:3");
        let r = verify_theorem_finite(&s3, "S:3", 2, &Epsilon::Value(q(3, 4)), &Budget::default()).unwrap();
        assert_eq!(r.hypothesis, HypothesisStatus::Violated);
        assert_eq!(r.verdict, Verdict::Vacuous);
        assert!(r.failure_detail.is_some());
        assert!(r.recheck());
    }

    #[test]
    fn lemma_fixtures() {
        let b = Budget::default();
        let x1 = Word::var(1);
        let s3 = build("S:3");
        let r = verify_lemma1(&s3, "S:3", &x1, &Epsilon::Value(q(1, 2)), &Delta::Value(q(1, 4)), &b).unwrap();
        assert_eq!(r.checks[0].lhs, "1/1");
        assert!(r.passed());
        let q8 = build("Dic:2");
        let r = verify_lemma1(&q8, "Dic:2", &x1, &Epsilon::Auto, &Delta::Value(q(1, 8)), &b).unwrap();
        assert_eq!(r.witnesses.epsilon.as_deref(), Some("5/8"));
        assert_eq!(r.checks[0].lhs, "1/1");
        assert_eq!(r.checks[0].rhs, "1/2");
        assert!(r.passed());
        let r = verify_lemma1(&q8, "Dic:2", &x1, &Epsilon::Auto, &Delta::Value(q(5, 8)), &b).unwrap();
        assert_eq!(r.verdict, Verdict::Vacuous);
    }

    #[test]
    fn prop2_fixtures() {
        let b = Budget::default();
        let x1 = Word::var(1);
        // C_G(G(S_3)) = C_{S3}(1) = S3, so the quotient is trivial.
        let s3 = build("S:3");
        let r = verify_prop2(&s3, "S:3", &x1, &Epsilon::Value(q(1, 2)), &Delta::Value(q(1, 3)), &b).unwrap();
        assert_eq!(r.witnesses.residual_order, Some(1));
        assert_eq!(r.witnesses.centralizer_order, Some(6));
        assert_eq!(r.witnesses.quotient_order, Some(1));
        assert!(r.passed());
        let d4 = build("D:4");
        let r = verify_prop2(&d4, "D:4", &x1, &Epsilon::Value(q(5, 8)), &Delta::Value(q(1, 2)), &b).unwrap();
        assert_eq!(r.witnesses.residual_order, Some(2));
        assert_eq!(r.witnesses.quotient_order, Some(1));
        assert!(r.passed());
    }

    #[test]
    fn structure_and_squares() {
        let b = Budget::default();
        let q8 = build("Dic:2");
        let r = verify_theorem_structure(&q8, "Dic:2", 1, &Epsilon::Auto, &b).unwrap();
        assert_eq!(r.witnesses.epsilon.as_deref(), Some("3/4"));
        assert_eq!(r.witnesses.n.as_deref(), Some("3"));
        assert_eq!(r.witnesses.residual_order, Some(2));
        assert!(r.passed());
        let d4 = build("D:4");
        assert!(verify_theorem_structure(&d4, "D:4", 2, &Epsilon::Auto, &b).unwrap().passed());

        let r = verify_squares_inequality(&q8, "Dic:2", &b).unwrap();
        assert_eq!(r.checks[0].lhs, "5/8");
        assert_eq!(r.checks[0].rhs, "9/16");
        assert!(r.passed());
        let s3 = build("S:3");
        let r = verify_squares_inequality(&s3, "S:3", &b).unwrap();
        // four elements square to 1: the identity and three transpositions
        assert_eq!(r.witnesses.epsilon.as_deref(), Some("2/3"));
        assert_eq!(r.checks[0].lhs, "1/2");
        assert_eq!(r.checks[0].rhs, "4/9");
        assert!(r.passed());
    }

    #[test]
    fn identity_certificates() {
        let b = Budget::default();
        let s3 = build("S:3");
        let r = certify_identity(&s3, "S:3", 2, &Epsilon::Value(q(1, 2)), &b).unwrap();
        assert_eq!(r.witnesses.c.as_deref(), Some("12"));
        assert_eq!(r.witnesses.c_mod_exponent, Some(0));
        assert!(r.passed());
        let d4 = build("D:4");
        let r = certify_identity(&d4, "D:4", 2, &Epsilon::Value(q(5, 8)), &b).unwrap();
        assert_eq!(r.witnesses.c.as_deref(), Some("6"));
        assert_eq!(r.witnesses.c_mod_exponent, Some(2));
        assert!(r.passed());
        // the image check is not vacuous: c = 1 would fail on D4
        let w = Word::powered_lower_central(2, 1);
        assert!(w.value_set(&d4, u64::MAX).unwrap().len() > 1);
    }

    #[test]
    fn reports_round_trip_and_recheck() {
        let d4 = build("D:4");
        let r = verify_theorem_finite(&d4, "D:4", 2, &Epsilon::Auto, &Budget::default()).unwrap();
        let line = r.to_json_line();
        assert!(!line.contains('\n'));
        let back = TheoremReport::from_json_line(&line).unwrap();
        assert_eq!(back, r);
        assert!(back.recheck());
        let mut tampered = back.clone();
        tampered.checks[1].rhs = "5".into();
        assert!(!tampered.recheck());
    }

    #[test]
    fn parameter_parsing() {
        assert_eq!("auto".parse::<Epsilon>().unwrap(), Epsilon::Auto);
        assert_eq!("5/8".parse::<Epsilon>().unwrap(), Epsilon::Value(q(5, 8)));
        assert_eq!("eps/4".parse::<Delta>().unwrap(), Delta::EpsOver(4));
        assert!("eps/0".parse::<Delta>().is_err());
        assert!("x".parse::<Epsilon>().is_err());
    }
}
