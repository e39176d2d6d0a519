//! Free-group words over `x1, x2, …` and their evaluation on finite groups.
//!
//! Text grammar:
//!
//! ```text
//! product := factor (('*')? factor)*
//! factor  := atom ('^' integer)?
//! atom    := 'x' digits | '1' | '(' product ')' | '[' product (',' product)+ ']'
//! ```
//!
//! `[u, v] = u⁻¹ v⁻¹ u v`, and `[u, v, w]` is `[[u, v], w]`.

use std::fmt;
use std::str::FromStr;

use crate::error::WordError;
use crate::group::{Elem, FiniteGroup};

/// Default cap on group operations for exhaustive evaluation.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    /// 1-based variable index.
    pub var: u32,
    pub exp: i64,
}

/// A freely reduced word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

/// `[[x1^base, x2^e2], …, xk^ek]`, the shape the class-function DP handles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainWord {
    pub base: i64,
    pub steps: Vec<i64>,
}

impl ChainWord {
    pub fn arity(&self) -> usize {
        1 + self.steps.len()
    }
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    /// `x_var`.
    pub fn var(var: u32) -> Self {
        Word::power_of(var, 1)
    }

    /// `x_var^exp`.
    pub fn power_of(var: u32, exp: i64) -> Self {
        assert!(var >= 1, "variables start at x1");
        Word::from_letters([Letter { var, exp }])
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if l.exp == 0 {
                continue;
            }
            match out.last_mut() {
                Some(top) if top.var == l.var => {
                    top.exp += l.exp;
                    if top.exp == 0 {
                        out.pop();
                    }
                }
                _ => out.push(l),
            }
        }
        Word { letters: out }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Highest variable index occurring, 0 for the identity word.
    pub fn arity(&self) -> usize {
        self.letters.iter().map(|l| l.var as usize).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &Word) -> Word {
        Word::from_letters(self.letters.iter().chain(&other.letters).copied())
    }

    pub fn inverse(&self) -> Word {
        Word::from_letters(self.letters.iter().rev().map(|l| Letter { var: l.var, exp: -l.exp }))
    }

    pub fn pow(&self, e: i64) -> Word {
        if let [l] = self.letters.as_slice() {
            return Word::from_letters([Letter { var: l.var, exp: l.exp.saturating_mul(e) }]);
        }
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `[u, v] = u⁻¹ v⁻¹ u v`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.inverse().mul(&v.inverse()).mul(u).mul(v)
    }

    /// Renames every variable `x_i` to `x_{i+offset}`.
    pub fn shift_vars(&self, offset: u32) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .map(|l| Letter { var: l.var + offset, exp: l.exp })
                .collect(),
        }
    }

    /// `[u, v']` where `v'` is `v` with its variables moved past those of `u`.
    pub fn shifted_commutator(u: &Word, v: &Word) -> Word {
        Word::commutator(u, &v.shift_vars(u.arity() as u32))
    }

    /// Recognizes `[[x1^b, x2^e2], …, xk^ek]` with variables in order.
    pub fn chain_form(&self) -> Option<ChainWord> {
        let mut steps = Vec::new();
        let mut letters: &[Letter] = &self.letters;
        loop {
            let k = letters.iter().map(|l| l.var).max()?;
            if letters.len() == 1 {
                if k != 1 {
                    return None;
                }
                steps.reverse();
                return Some(ChainWord { base: letters[0].exp, steps });
            }
            // letters = u⁻¹ x_k^-e u x_k^e with u free of x_k
            if letters.len() < 4 || !letters.len().is_multiple_of(2) {
                return None;
            }
            let m = (letters.len() - 2) / 2;
            let last = letters[letters.len() - 1];
            let mid = letters[m];
            let u = &letters[m + 1..2 * m + 1];
            if last.var != k || mid.var != k || mid.exp != -last.exp {
                return None;
            }
            if u.iter().any(|l| l.var >= k) || u.iter().map(|l| l.var).max() != Some(k - 1) {
                return None;
            }
            let u_inv = u.iter().rev().map(|l| Letter { var: l.var, exp: -l.exp });
            if !letters[..m].iter().copied().eq(u_inv) {
                return None;
            }
            steps.push(last.exp);
            letters = u;
        }
    }

    /// Substitutes `assignment[i-1]` for `x_i` and multiplies out.
    pub fn evaluate(&self, g: &FiniteGroup, assignment: &[Elem]) -> Result<Elem, WordError> {
        if assignment.len() < self.arity() {
            return Err(WordError::ShortAssignment { got: assignment.len(), arity: self.arity() });
        }
        Ok(self.letters.iter().fold(g.identity(), |acc, l| {
            g.mul(acc, g.pow(assignment[l.var as usize - 1], l.exp))
        }))
    }

    /// Whether `w` evaluates to the identity on every tuple of `g`.
    ///
    /// Chain words are decided by propagating the set of attainable values
    /// (at most `arity·|G|²` operations); other words enumerate all
    /// `|G|^arity` tuples. Either way the answer is exact.
    pub fn is_identity_of(&self, g: &FiniteGroup, budget: u64) -> Result<bool, WordError> {
        if self.is_identity() {
            return Ok(true);
        }
        if let Some(chain) = self.chain_form() {
            let cost = (chain.arity() as u128) * (g.order() as u128).pow(2);
            if cost > budget as u128 {
                return Err(WordError::Budget { needed: cost, budget });
            }
            return Ok(chain_values(g, &chain) == [g.identity()]);
        }
        self.is_identity_exhaustive(g, budget)
    }

    /// Tuple-by-tuple check of `is_identity_of`.
    pub fn is_identity_exhaustive(&self, g: &FiniteGroup, budget: u64) -> Result<bool, WordError> {
        let compiled = CompiledWord::new(self, g);
        let arity = self.arity();
        let needed = (g.order() as u128).checked_pow(arity as u32).unwrap_or(u128::MAX);
        if needed > budget as u128 {
            return Err(WordError::Budget { needed, budget });
        }
        let n = g.order();
        let mut tuple = vec![0usize; arity];
        loop {
            if compiled.eval(g, &tuple) != 0 {
                return Ok(false);
            }
            if !advance(&mut tuple, n) {
                return Ok(true);
            }
        }
    }

    /// The image `w(G^k)`, sorted. Chain words use value-set propagation
    /// (cost `arity·|G|²`); other words enumerate all tuples.
    pub fn value_set(&self, g: &FiniteGroup, budget: u64) -> Result<Vec<Elem>, WordError> {
        if self.is_identity() {
            return Ok(vec![g.identity()]);
        }
        if let Some(chain) = self.chain_form() {
            let cost = (chain.arity() as u128) * (g.order() as u128).pow(2);
            if cost > budget as u128 {
                return Err(WordError::Budget { needed: cost, budget });
            }
            return Ok(chain_values(g, &chain));
        }
        let arity = self.arity();
        let needed = (g.order() as u128).checked_pow(arity as u32).unwrap_or(u128::MAX);
        if needed > budget as u128 {
            return Err(WordError::Budget { needed, budget });
        }
        let compiled = CompiledWord::new(self, g);
        let mut seen = crate::group::Bitset::new(g.order());
        let mut tuple = vec![0usize; arity];
        loop {
            seen.insert(compiled.eval(g, &tuple));
            if !advance(&mut tuple, g.order()) {
                return Ok(seen.iter().collect());
            }
        }
    }

    /// `w_k = [x1, …, xk]`.
    pub fn lower_central(k: usize) -> Word {
        assert!(k >= 1);
        (2..=k as u32).fold(Word::var(1), |w, i| Word::commutator(&w, &Word::var(i)))
    }

    /// `δ_1 = x1`, `δ_{k+1} = [δ_k(x1..), δ_k(x_{2^{k-1}+1}..)]`.
    pub fn derived(k: usize) -> Word {
        assert!(k >= 1);
        (1..k).fold(Word::var(1), |d, _| Word::shifted_commutator(&d, &d))
    }

    /// `x1²` for k = 1, otherwise `[x1², x2, …, xk]`.
    pub fn square_commutator(k: usize) -> Word {
        assert!(k >= 1);
        (2..=k as u32).fold(Word::power_of(1, 2), |w, i| Word::commutator(&w, &Word::var(i)))
    }

    /// `[x1^c, …, xk^c]`.
    pub fn powered_lower_central(k: usize, c: i64) -> Word {
        assert!(k >= 1);
        (2..=k as u32).fold(Word::power_of(1, c), |w, i| Word::commutator(&w, &Word::power_of(i, c)))
    }

    /// Parses the text grammar or a shortcut `wk:<k>`, `dk:<k>`, `sq:<k>`.
    pub fn parse(text: &str) -> Result<Word, WordError> {
        let t = text.trim();
        for (prefix, build) in [
            ("wk:", Word::lower_central as fn(usize) -> Word),
            ("dk:", Word::derived),
            ("sq:", Word::square_commutator),
        ] {
            if let Some(rest) = t.strip_prefix(prefix) {
                let k: usize = rest.trim().parse().map_err(|_| WordError::Syntax {
                    pos: prefix.len(),
                    msg: format!("expected a positive integer after `{prefix}`"),
                })?;
                if k == 0 {
                    return Err(WordError::Syntax { pos: prefix.len(), msg: "k must be positive".into() });
                }
                return Ok(build(k));
            }
        }
        Parser { src: text.as_bytes(), pos: 0 }.parse_all()
    }
}

/// Odometer step over `0..n` digits, last digit fastest. False on wrap-around.
pub(crate) fn advance(tuple: &mut [usize], n: usize) -> bool {
    for d in tuple.iter_mut().rev() {
        *d += 1;
        if *d < n {
            return true;
        }
        *d = 0;
    }
    false
}

/// Every value `[[x1^b, x2^e2], …]` takes on `g`, ascending.
fn chain_values(g: &FiniteGroup, chain: &ChainWord) -> Vec<Elem> {
    let mut current = crate::group::Bitset::new(g.order());
    for x in g.elements() {
        current.insert(g.pow(x, chain.base));
    }
    for &e in &chain.steps {
        let ys: Vec<Elem> = {
            let mut b = crate::group::Bitset::new(g.order());
            for x in g.elements() {
                b.insert(g.pow(x, e));
            }
            b.iter().collect()
        };
        let mut next = crate::group::Bitset::new(g.order());
        for s in current.iter() {
            for &y in &ys {
                next.insert(g.commutator(s, y));
            }
        }
        current = next;
    }
    current.iter().collect()
}

/// A word with its powers pre-tabulated for one group.
pub(crate) struct CompiledWord {
    steps: Vec<(usize, usize)>,
    powers: Vec<Vec<u32>>,
}

impl CompiledWord {
    pub(crate) fn new(w: &Word, g: &FiniteGroup) -> Self {
        let mut exps: Vec<i64> = Vec::new();
        let mut steps = Vec::with_capacity(w.letters.len());
        for l in &w.letters {
            let slot = match exps.iter().position(|&e| e == l.exp) {
                Some(i) => i,
                None => {
                    exps.push(l.exp);
                    exps.len() - 1
                }
            };
            steps.push((l.var as usize - 1, slot));
        }
        let powers = exps.iter().map(|&e| g.power_map(e)).collect();
        CompiledWord { steps, powers }
    }

    #[inline]
    pub(crate) fn eval(&self, g: &FiniteGroup, tuple: &[Elem]) -> Elem {
        match g.table() {
            Some(t) => {
                let n = g.order();
                self.steps.iter().fold(0usize, |acc, &(v, p)| {
                    t[acc * n + self.powers[p][tuple[v]] as usize] as usize
                })
            }
            None => self
                .steps
                .iter()
                .fold(0usize, |acc, &(v, p)| g.mul(acc, self.powers[p][tuple[v]] as usize)),
        }
    }
}

impl FromStr for Word {
    type Err = WordError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::parse(s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, WordError> {
        Err(WordError::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse_all(mut self) -> Result<Word, WordError> {
        if self.peek().is_none() {
            return self.err("empty word");
        }
        let w = self.product()?;
        match self.peek() {
            None => Ok(w),
            Some(c) => self.err(format!("unexpected `{}`", c as char)),
        }
    }

    fn product(&mut self) -> Result<Word, WordError> {
        let mut w = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    w = w.mul(&self.factor()?);
                }
                Some(b'x' | b'(' | b'[' | b'1') => w = w.mul(&self.factor()?),
                _ => return Ok(w),
            }
        }
    }

    fn factor(&mut self) -> Result<Word, WordError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.integer()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Option<&str> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn integer(&mut self) -> Result<i64, WordError> {
        let neg = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        self.skip_ws();
        let at = self.pos;
        let Some(d) = self.digits() else {
            return self.err("expected an integer exponent");
        };
        let v: i64 = d
            .parse()
            .map_err(|_| WordError::Syntax { pos: at, msg: "exponent out of range".into() })?;
        Ok(if neg { -v } else { v })
    }

    fn atom(&mut self) -> Result<Word, WordError> {
        match self.peek() {
            Some(b'x') => {
                let at = self.pos;
                self.pos += 1;
                let Some(d) = self.digits() else {
                    return self.err("expected a variable index after `x`");
                };
                let var: u32 = d
                    .parse()
                    .map_err(|_| WordError::Syntax { pos: at, msg: "variable index out of range".into() })?;
                if var == 0 {
                    return Err(WordError::ZeroVariable { pos: at });
                }
                Ok(Word::var(var))
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Word::identity())
            }
            Some(b'(') => {
                self.pos += 1;
                let w = self.product()?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(w)
            }
            Some(b'[') => {
                self.pos += 1;
                let mut w = self.product()?;
                let mut parts = 1;
                loop {
                    match self.peek() {
                        Some(b',') => {
                            self.pos += 1;
                            let v = self.product()?;
                            w = Word::commutator(&w, &v);
                            parts += 1;
                        }
                        Some(b']') if parts >= 2 => {
                            self.pos += 1;
                            return Ok(w);
                        }
                        Some(b']') => return self.err("a commutator needs at least two entries"),
                        _ => return self.err("expected `,` or `]`"),
                    }
                }
            }
            Some(c) => self.err(format!("unexpected `{}`", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Splits `letters` as `u⁻¹ v⁻¹ u v` with both parts nonempty.
fn split_commutator(letters: &[Letter]) -> Option<(&[Letter], &[Letter])> {
    let n = letters.len();
    if n < 4 || !n.is_multiple_of(2) {
        return None;
    }
    let half = n / 2;
    for a in 1..half {
        let b = half - a;
        let u = &letters[a + b..2 * a + b];
        let v = &letters[2 * a + b..];
        let is_inv = |x: &[Letter], y: &[Letter]| {
            x.iter()
                .copied()
                .eq(y.iter().rev().map(|l| Letter { var: l.var, exp: -l.exp }))
        };
        if is_inv(&letters[..a], u) && is_inv(&letters[a..a + b], v) {
            return Some((u, v));
        }
    }
    None
}

/// Entries of a left-normed bracket `[p1, p2, …]`, if `letters` is one.
fn bracket_parts(letters: &[Letter]) -> Option<Vec<&[Letter]>> {
    let (u, v) = split_commutator(letters)?;
    let mut parts = bracket_parts(u).unwrap_or_else(|| vec![u]);
    parts.push(v);
    Some(parts)
}

fn write_letters(f: &mut fmt::Formatter<'_>, letters: &[Letter]) -> fmt::Result {
    if letters.is_empty() {
        return f.write_str("1");
    }
    if let Some(parts) = bracket_parts(letters) {
        f.write_str("[")?;
        for (i, p) in parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write_letters(f, p)?;
        }
        return f.write_str("]");
    }
    for (i, l) in letters.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        if l.exp == 1 {
            write!(f, "x{}", l.var)?;
        } else {
            write!(f, "x{}^{}", l.var, l.exp)?;
        }
    }
    Ok(())
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.letters)
    }
}
