//! Built-in group families and the catalog used by sweeps.
//!
//! Spec ids:
//!
//! | id          | group                                   | order          |
//! |-------------|-----------------------------------------|----------------|
//! | `C:n`       | cyclic                                  | n              |
//! | `D:n`       | dihedral, symmetries of an n-gon        | 2n             |
//! | `Dic:n`     | dicyclic (`Dic:2` is the quaternion group) | 4n          |
//! | `S:n`,`A:n` | symmetric / alternating on n points     | n!, n!/2       |
//! | `EA:p,k`    | elementary abelian `(Z/p)^k`            | p^k            |
//! | `H:p`       | Heisenberg, unitriangular 3×3 over F_p  | p³             |
//! | `UT:n,p`    | unitriangular n×n over F_p              | p^(n(n−1)/2)   |
//! | `P:[a,b,…]` | direct product                          | product        |
//! | `table:path`, `perm:path` | group files               |                |
//!
//! `D:n` always has order `2n`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, GroupError};
use crate::group::{io, FiniteGroup, Source, DEFAULT_ORDER_CAP, TABLE_LIMIT};

pub const DEFAULT_MANIFEST: &str = include_str!("../data/catalog.manifest");

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Cyclic(usize),
    Dihedral(usize),
    Dicyclic(usize),
    Symmetric(usize),
    Alternating(usize),
    ElementaryAbelian { p: usize, k: usize },
    Heisenberg(usize),
    Unitriangular { n: usize, p: usize },
    Product(Vec<GroupSpec>),
    TableFile(PathBuf),
    PermFile(PathBuf),
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

impl GroupSpec {
    pub fn family(&self) -> &'static str {
        match self {
            GroupSpec::Cyclic(_) => "cyclic",
            GroupSpec::Dihedral(_) => "dihedral",
            GroupSpec::Dicyclic(_) => "dicyclic",
            GroupSpec::Symmetric(_) => "symmetric",
            GroupSpec::Alternating(_) => "alternating",
            GroupSpec::ElementaryAbelian { .. } => "elementary-abelian",
            GroupSpec::Heisenberg(_) => "heisenberg",
            GroupSpec::Unitriangular { .. } => "unitriangular",
            GroupSpec::Product(_) => "direct-product",
            GroupSpec::TableFile(_) | GroupSpec::PermFile(_) => "file",
        }
    }

    /// Order implied by the parameters; `None` for files.
    pub fn order(&self) -> Option<u128> {
        let pow = |b: usize, e: usize| (b as u128).checked_pow(e as u32);
        match self {
            GroupSpec::Cyclic(n) => Some(*n as u128),
            GroupSpec::Dihedral(n) => Some(2 * *n as u128),
            GroupSpec::Dicyclic(n) => Some(4 * *n as u128),
            GroupSpec::Symmetric(n) => Some(factorial(*n)),
            GroupSpec::Alternating(n) => Some(if *n < 2 { 1 } else { factorial(*n) / 2 }),
            GroupSpec::ElementaryAbelian { p, k } => pow(*p, *k),
            GroupSpec::Heisenberg(p) => pow(*p, 3),
            GroupSpec::Unitriangular { n, p } => pow(*p, n * n.saturating_sub(1) / 2),
            GroupSpec::Product(fs) => fs.iter().try_fold(1u128, |acc, f| acc.checked_mul(f.order()?)),
            GroupSpec::TableFile(_) | GroupSpec::PermFile(_) => None,
        }
    }

    fn check_params(&self) -> Result<(), String> {
        let positive = |n: usize, what: &str| if n >= 1 { Ok(()) } else { Err(format!("{what} must be ≥ 1")) };
        let prime = |p: usize| if is_prime(p) { Ok(()) } else { Err(format!("{p} is not prime")) };
        match self {
            GroupSpec::Cyclic(n)
            | GroupSpec::Dihedral(n)
            | GroupSpec::Dicyclic(n)
            | GroupSpec::Symmetric(n)
            | GroupSpec::Alternating(n) => positive(*n, "n"),
            GroupSpec::ElementaryAbelian { p, k } => prime(*p).and(positive(*k, "k")),
            GroupSpec::Heisenberg(p) => prime(*p),
            GroupSpec::Unitriangular { n, p } => prime(*p).and(positive(*n, "n")),
            GroupSpec::Product(fs) => {
                if fs.is_empty() {
                    return Err("a product needs at least one factor".into());
                }
                fs.iter().try_for_each(|f| f.check_params())
            }
            GroupSpec::TableFile(_) | GroupSpec::PermFile(_) => Ok(()),
        }
    }

    /// Builds the group deterministically.
    pub fn build(&self) -> Result<FiniteGroup, Error> {
        let id = self.to_string();
        let spec_err = |msg: String| Error::Spec { spec: id.clone(), msg };
        self.check_params().map_err(spec_err)?;
        if let Some(order) = self.order() {
            let cap = match self {
                GroupSpec::Symmetric(_) | GroupSpec::Alternating(_) => DEFAULT_ORDER_CAP,
                _ => TABLE_LIMIT,
            };
            if order > cap as u128 {
                return Err(GroupError::OrderCapExceeded { cap }.into());
            }
        }
        let g = match self {
            GroupSpec::Cyclic(n) => cyclic(*n),
            GroupSpec::Dihedral(n) => dihedral(*n),
            GroupSpec::Dicyclic(n) => dicyclic(*n),
            GroupSpec::Symmetric(n) => symmetric(*n)?,
            GroupSpec::Alternating(n) => alternating(*n)?,
            GroupSpec::ElementaryAbelian { p, k } => elementary_abelian(*p, *k),
            GroupSpec::Heisenberg(p) => unitriangular(3, *p),
            GroupSpec::Unitriangular { n, p } => unitriangular(*n, *p),
            GroupSpec::Product(fs) => {
                let built = fs.iter().map(|f| f.build()).collect::<Result<Vec<_>, _>>()?;
                direct_product(&built)?
            }
            GroupSpec::TableFile(path) => io::load_cayley_table(path)?,
            GroupSpec::PermFile(path) => io::load_permutation_generators(path)?,
        };
        Ok(g.with_source(Source::Family(id)))
    }
}

/// Splits at top-level commas that start a new spec (followed by a letter).
fn split_factors(s: &str) -> Vec<&str> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'[' => depth += 1,
            b']' => depth -= 1,
            b',' if depth == 0 && bytes.get(i + 1).is_some_and(|c| c.is_ascii_alphabetic()) => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let err = |msg: &str| Error::Spec { spec: s.to_string(), msg: msg.to_string() };
        let (tag, rest) = s.split_once(':').ok_or_else(|| err("expected `FAMILY:PARAMS`"))?;
        let ints = |want: usize| -> Result<Vec<usize>, Error> {
            let v: Vec<usize> = rest
                .split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| err("parameters must be non-negative integers"))?;
            if v.len() != want {
                return Err(err(&format!("expected {want} parameter(s)")));
            }
            Ok(v)
        };
        let spec = match tag {
            "C" => GroupSpec::Cyclic(ints(1)?[0]),
            "D" => GroupSpec::Dihedral(ints(1)?[0]),
            "Dic" => GroupSpec::Dicyclic(ints(1)?[0]),
            "S" => GroupSpec::Symmetric(ints(1)?[0]),
            "A" => GroupSpec::Alternating(ints(1)?[0]),
            "EA" => {
                let v = ints(2)?;
                GroupSpec::ElementaryAbelian { p: v[0], k: v[1] }
            }
            "H" => GroupSpec::Heisenberg(ints(1)?[0]),
            "UT" => {
                let v = ints(2)?;
                GroupSpec::Unitriangular { n: v[0], p: v[1] }
            }
            "P" => {
                let inner = rest
                    .strip_prefix('[')
                    .and_then(|r| r.strip_suffix(']'))
                    .ok_or_else(|| err("a product is written P:[spec,spec,…]"))?;
                let factors = split_factors(inner)
                    .into_iter()
                    .map(GroupSpec::from_str)
                    .collect::<Result<Vec<_>, _>>()?;
                GroupSpec::Product(factors)
            }
            "table" => GroupSpec::TableFile(PathBuf::from(rest)),
            "perm" => GroupSpec::PermFile(PathBuf::from(rest)),
            _ => return Err(err(&format!("unknown family `{tag}`"))),
        };
        spec.check_params().map_err(|m| err(&m))?;
        Ok(spec)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "C:{n}"),
            GroupSpec::Dihedral(n) => write!(f, "D:{n}"),
            GroupSpec::Dicyclic(n) => write!(f, "Dic:{n}"),
            GroupSpec::Symmetric(n) => write!(f, "S:{n}"),
            GroupSpec::Alternating(n) => write!(f, "A:{n}"),
            GroupSpec::ElementaryAbelian { p, k } => write!(f, "EA:{p},{k}"),
            GroupSpec::Heisenberg(p) => write!(f, "H:{p}"),
            GroupSpec::Unitriangular { n, p } => write!(f, "UT:{n},{p}"),
            GroupSpec::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|x| x.to_string()).collect();
                write!(f, "P:[{}]", parts.join(","))
            }
            GroupSpec::TableFile(p) => write!(f, "table:{}", p.display()),
            GroupSpec::PermFile(p) => write!(f, "perm:{}", p.display()),
        }
    }
}

/// Parses a manifest: one spec id per line, `#` comments.
pub fn parse_manifest(text: &str) -> Result<Vec<GroupSpec>, Error> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(GroupSpec::from_str)
        .collect()
}

/// Built-in catalog with the default manifest.
pub fn catalog(max_order: usize) -> Vec<GroupSpec> {
    catalog_with_manifest(max_order, DEFAULT_MANIFEST).expect("default manifest parses")
}

/// All built-in family members and manifest entries of order at most
/// `max_order`, sorted by order and then id, without duplicates.
///
/// Families: `C:n` (n ≥ 1), `D:n` (n ≥ 2), `Dic:n` (n ≥ 2), `EA:p,k`
/// (k ≥ 2), `S:n` (n ≥ 3), `A:n` (n ≥ 4), `H:p` (p ≥ 3), `UT:n,p` (n ≥ 4).
/// Smaller parameters duplicate other entries.
pub fn catalog_with_manifest(max_order: usize, manifest: &str) -> Result<Vec<GroupSpec>, Error> {
    let m = max_order as u128;
    let mut specs: Vec<GroupSpec> = Vec::new();
    specs.extend((1..=max_order).map(GroupSpec::Cyclic));
    specs.extend((2..=max_order / 2).map(GroupSpec::Dihedral));
    specs.extend((2..=max_order / 4).map(GroupSpec::Dicyclic));
    for p in (2..=max_order).filter(|&p| is_prime(p)) {
        let mut k = 2;
        while (p as u128).pow(k as u32) <= m {
            specs.push(GroupSpec::ElementaryAbelian { p, k });
            k += 1;
        }
        if p >= 3 && (p as u128).pow(3) <= m {
            specs.push(GroupSpec::Heisenberg(p));
        }
        let mut n = 4;
        while (GroupSpec::Unitriangular { n, p }).order().is_some_and(|o| o <= m) {
            specs.push(GroupSpec::Unitriangular { n, p });
            n += 1;
        }
    }
    let mut n = 3;
    while factorial(n) <= m {
        specs.push(GroupSpec::Symmetric(n));
        n += 1;
    }
    let mut n = 4;
    while factorial(n) / 2 <= m {
        specs.push(GroupSpec::Alternating(n));
        n += 1;
    }
    for spec in parse_manifest(manifest)? {
        let order = match spec.order() {
            Some(o) => o,
            None => spec.build()?.order() as u128,
        };
        if order <= m {
            specs.push(spec);
        }
    }
    let mut keyed: Vec<(u128, String, GroupSpec)> = specs
        .into_iter()
        .map(|s| {
            let o = s.order().unwrap_or_else(|| s.build().map(|g| g.order() as u128).unwrap_or(u128::MAX));
            (o, s.to_string(), s)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    keyed.dedup_by(|a, b| a.1 == b.1);
    Ok(keyed.into_iter().map(|(_, _, s)| s).collect())
}

fn table_from(order: usize, mul: impl Fn(usize, usize) -> usize) -> Vec<u32> {
    let mut t = Vec::with_capacity(order * order);
    for a in 0..order {
        for b in 0..order {
            t.push(mul(a, b) as u32);
        }
    }
    t
}

fn cyclic(n: usize) -> FiniteGroup {
    let labels = (0..n).map(|i| if i == 0 { "e".into() } else { format!("a^{i}") }).collect();
    FiniteGroup::from_trusted_table(n, table_from(n, |a, b| (a + b) % n), Source::Table, Some(labels))
}

/// Elements `r^i s^j` at index `i + n·j`.
fn dihedral(n: usize) -> FiniteGroup {
    let order = 2 * n;
    let mul = |a: usize, b: usize| {
        let (i, s1) = (a % n, a / n);
        let (j, s2) = (b % n, b / n);
        let rot = if s1 == 0 { (i + j) % n } else { (i + n - j) % n };
        rot + n * ((s1 + s2) % 2)
    };
    let labels = (0..order)
        .map(|x| match (x % n, x / n) {
            (0, 0) => "e".to_string(),
            (i, 0) => format!("r^{i}"),
            (0, _) => "s".to_string(),
            (i, _) => format!("r^{i} s"),
        })
        .collect();
    FiniteGroup::from_trusted_table(order, table_from(order, mul), Source::Table, Some(labels))
}

/// `⟨a, x | a^{2n}, x² = a^n, x⁻¹ a x = a⁻¹⟩`, elements `a^i x^j` at index `i + 2n·j`.
fn dicyclic(n: usize) -> FiniteGroup {
    let m = 2 * n;
    let order = 2 * m;
    let mul = |u: usize, v: usize| {
        let (i, j) = (u % m, u / m);
        let (k, l) = (v % m, v / m);
        match (j, l) {
            (0, _) => (i + k) % m + m * l,
            (1, 0) => (i + m - k) % m + m,
            _ => (i + m - k + n) % m,
        }
    };
    let labels = (0..order)
        .map(|u| match (u % m, u / m) {
            (0, 0) => "e".to_string(),
            (i, 0) => format!("a^{i}"),
            (0, _) => "x".to_string(),
            (i, _) => format!("a^{i} x"),
        })
        .collect();
    FiniteGroup::from_trusted_table(order, table_from(order, mul), Source::Table, Some(labels))
}

fn cycle(n: usize, points: &[usize]) -> Vec<usize> {
    let mut p: Vec<usize> = (1..=n).collect();
    for w in 0..points.len() {
        p[points[w] - 1] = points[(w + 1) % points.len()];
    }
    p
}

fn symmetric(n: usize) -> Result<FiniteGroup, GroupError> {
    let gens = if n < 2 {
        vec![]
    } else {
        vec![cycle(n, &[1, 2]), cycle(n, &(1..=n).collect::<Vec<_>>())]
    };
    FiniteGroup::from_permutation_generators(n, &gens)
}

fn alternating(n: usize) -> Result<FiniteGroup, GroupError> {
    let gens = if n < 3 {
        vec![]
    } else if n % 2 == 1 {
        vec![cycle(n, &[1, 2, 3]), cycle(n, &(1..=n).collect::<Vec<_>>())]
    } else {
        vec![cycle(n, &[1, 2, 3]), cycle(n, &(2..=n).collect::<Vec<_>>())]
    };
    FiniteGroup::from_permutation_generators(n, &gens)
}

fn digits(mut x: usize, p: usize, len: usize) -> Vec<usize> {
    let mut d = Vec::with_capacity(len);
    for _ in 0..len {
        d.push(x % p);
        x /= p;
    }
    d
}

fn undigits(d: &[usize], p: usize) -> usize {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

fn elementary_abelian(p: usize, k: usize) -> FiniteGroup {
    let order = p.pow(k as u32);
    let mul = |a: usize, b: usize| {
        let s: Vec<usize> = digits(a, p, k).iter().zip(digits(b, p, k)).map(|(x, y)| (x + y) % p).collect();
        undigits(&s, p)
    };
    let labels = (0..order)
        .map(|a| {
            let d: Vec<String> = digits(a, p, k).iter().map(|x| x.to_string()).collect();
            format!("({})", d.join(","))
        })
        .collect();
    FiniteGroup::from_trusted_table(order, table_from(order, mul), Source::Table, Some(labels))
}

/// Upper unitriangular matrices; the above-diagonal entries, row-major, are
/// the base-`p` digits of the element index.
fn unitriangular(n: usize, p: usize) -> FiniteGroup {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let order = p.pow(slots.len() as u32);
    let to_matrix = |x: usize| {
        let mut m = vec![vec![0usize; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        for (&(i, j), d) in slots.iter().zip(digits(x, p, slots.len())) {
            m[i][j] = d;
        }
        m
    };
    let mats: Vec<Vec<Vec<usize>>> = (0..order).map(to_matrix).collect();
    let mul = |a: usize, b: usize| {
        let (x, y) = (&mats[a], &mats[b]);
        let d: Vec<usize> = slots
            .iter()
            .map(|&(i, j)| (i..=j).map(|l| x[i][l] * y[l][j]).sum::<usize>() % p)
            .collect();
        undigits(&d, p)
    };
    let labels = (0..order)
        .map(|x| {
            let d: Vec<String> = digits(x, p, slots.len()).iter().map(|v| v.to_string()).collect();
            format!("[{}]", d.join(""))
        })
        .collect();
    FiniteGroup::from_trusted_table(order, table_from(order, mul), Source::Table, Some(labels))
}

/// Componentwise product; the element `(g_1, …, g_r)` has index
/// `g_1 + |G_1|·(g_2 + |G_2|·(…))`.
fn direct_product(factors: &[FiniteGroup]) -> Result<FiniteGroup, GroupError> {
    let order = factors.iter().map(|f| f.order()).product::<usize>();
    if order > TABLE_LIMIT {
        return Err(GroupError::OrderCapExceeded { cap: TABLE_LIMIT });
    }
    let split = |mut x: usize| {
        factors
            .iter()
            .map(|f| {
                let c = x % f.order();
                x /= f.order();
                c
            })
            .collect::<Vec<_>>()
    };
    let join = |parts: &[usize]| {
        factors
            .iter()
            .zip(parts)
            .rev()
            .fold(0, |acc, (f, &c)| acc * f.order() + c)
    };
    let comps: Vec<Vec<usize>> = (0..order).map(split).collect();
    let mul = |a: usize, b: usize| {
        let parts: Vec<usize> = factors
            .iter()
            .zip(comps[a].iter().zip(&comps[b]))
            .map(|(f, (&x, &y))| f.mul(x, y))
            .collect();
        join(&parts)
    };
    let labels = comps
        .iter()
        .map(|c| {
            let l: Vec<String> = factors.iter().zip(c).map(|(f, &x)| f.label(x)).collect();
            format!("({})", l.join(", "))
        })
        .collect();
    Ok(FiniteGroup::from_trusted_table(order, table_from(order, mul), Source::Table, Some(labels)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(id: &str) -> FiniteGroup {
        id.parse::<GroupSpec>().unwrap().build().unwrap()
    }

    #[test]
    fn ids_round_trip() {
        for id in ["C:1", "D:4", "Dic:2", "S:4", "A:5", "EA:2,3", "H:3", "UT:4,2", "P:[S:3,C:2]", "P:[UT:4,2,C:2]", "P:[P:[C:2,C:3],D:3]"] {
            let spec: GroupSpec = id.parse().unwrap();
            assert_eq!(spec.to_string(), id);
        }
        let nested: GroupSpec = "P:[UT:4,2,C:2]".parse().unwrap();
        assert_eq!(
            nested,
            GroupSpec::Product(vec![GroupSpec::Unitriangular { n: 4, p: 2 }, GroupSpec::Cyclic(2)])
        );
    }

    #[test]
    fn bad_ids() {
        for id in ["X:3", "C", "C:x", "EA:4,2", "EA:2", "H:6", "C:0", "P:S:3", "P:[]"] {
            assert!(id.parse::<GroupSpec>().is_err(), "{id} should be rejected");
        }
        assert!(matches!(
            "S:9".parse::<GroupSpec>().unwrap().build(),
            Err(Error::Group(GroupError::OrderCapExceeded { .. }))
        ));
        assert!(matches!(
            "C:5000".parse::<GroupSpec>().unwrap().build(),
            Err(Error::Group(GroupError::OrderCapExceeded { .. }))
        ));
    }

    #[test]
    fn orders_match_builds() {
        for spec in catalog(64) {
            let g = spec.build().unwrap();
            assert_eq!(Some(g.order() as u128), spec.order(), "{spec}");
        }
    }

    #[test]
    fn quaternion_group() {
        let q8 = build("Dic:2");
        assert_eq!(q8.order(), 8);
        assert_eq!(q8.conjugacy_classes().len(), 5);
        assert_eq!(q8.exponent(), 4);
        assert_eq!(q8.elements().filter(|&x| q8.element_order(x) == 2).count(), 1);
        q8.check_axioms().unwrap();
    }

    #[test]
    fn heisenberg_series() {
        let h = build("H:3");
        assert_eq!(h.order(), 27);
        assert_eq!(h.lower_central_series().orders(), vec![27, 3, 1]);
        assert_eq!(h.nilpotency_class(), Some(2));
    }

    #[test]
    fn unitriangular_class() {
        let g = build("UT:4,2");
        assert_eq!(g.order(), 64);
        assert_eq!(g.nilpotency_class(), Some(3));
        assert_eq!(build("UT:5,2").nilpotency_class(), Some(4));
    }

    #[test]
    fn trivial_and_small_families() {
        assert_eq!(build("C:1").order(), 1);
        assert_eq!(build("D:1").order(), 2);
        assert_eq!(build("Dic:1").exponent(), 4);
        assert_eq!(build("S:1").order(), 1);
        assert_eq!(build("A:3").order(), 3);
        assert_eq!(build("A:4").order(), 12);
        assert_eq!(build("S:5").order(), 120);
        assert!(build("D:3").nilpotency_class().is_none());
    }

    #[test]
    fn builds_are_deterministic() {
        for id in ["P:[S:3,C:2]", "S:4", "UT:4,2"] {
            let a = build(id);
            let b = build(id);
            assert_eq!(a.table(), b.table());
        }
    }

    #[test]
    fn catalog_contents() {
        assert_eq!(catalog(1), vec![GroupSpec::Cyclic(1)]);
        let ids: Vec<String> = catalog(8).iter().map(|s| s.to_string()).collect();
        for id in ["Dic:2", "D:4", "C:8", "EA:2,3"] {
            assert!(ids.contains(&id.to_string()), "{id} missing");
        }
        let ids27: Vec<String> = catalog(27).iter().map(|s| s.to_string()).collect();
        assert!(ids27.contains(&"H:3".to_string()));
        let ids128: Vec<String> = catalog(128).iter().map(|s| s.to_string()).collect();
        for id in ["S:3", "S:4", "A:4", "A:5", "H:3", "H:5", "UT:4,2", "P:[D:4,C:2]"] {
            assert!(ids128.contains(&id.to_string()), "{id} missing");
        }
        let orders: Vec<u128> = catalog(128).iter().map(|s| s.order().unwrap()).collect();
        assert!(orders.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn every_small_catalog_group_satisfies_axioms() {
        for spec in catalog(128) {
            let g = spec.build().unwrap();
            g.check_axioms().unwrap_or_else(|e| panic!("{spec}: {e}"));
        }
    }
}
