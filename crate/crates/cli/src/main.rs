//! `wordprob`: word-map distributions, `Pr_k` sweeps and theorem checks on
//! finite groups.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 bad input, 3 budget
//! exceeded.

mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use render::{decimal, Doc, Format, Table};
use wordprob_core::corpus::{self, GroupSpec};
use wordprob_core::group::LatticeLimits;
use wordprob_core::prob;
use wordprob_core::rational;
use wordprob_core::spectrum::{self, ResultCache, SpectrumFilter};
use wordprob_core::theorems::{self, Budget, Delta, Epsilon, TheoremReport, Verdict};
use wordprob_core::{Error, FiniteGroup, Word};

pub const CACHE_ENV: &str = "WORDPROB_CACHE";

#[derive(Parser, Debug)]
#[command(name = "wordprob", version, about = "Word maps on finite groups")]
struct Cli {
    /// Worker threads; 0 picks one per core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Maximum group operations per task.
    #[arg(long, global = true, default_value_t = wordprob_core::word::DEFAULT_BUDGET)]
    budget: u64,
    /// Seed for Monte Carlo sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    output: Format,
    /// Results cache for `spectrum` (line-delimited JSON).
    #[arg(long, global = true, env = CACHE_ENV)]
    cache: Option<PathBuf>,
    /// Catalog manifest replacing the built-in product list.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Distribution of a word map over conjugacy classes.
    Dist {
        #[arg(long)]
        group: String,
        /// Word text, or a shortcut `wk:<k>`, `dk:<k>`, `sq:<k>`.
        #[arg(long)]
        word: String,
    },
    /// `Pr_k(G)`, the probability that `[g1, …, gk] = 1`.
    Prk {
        #[arg(long)]
        group: String,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Method::Dp)]
        method: Method,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Check a theorem on one group or on the catalog.
    Verify(VerifyArgs),
    /// `Pr_k` over the catalog, with distinct values and the maximum.
    Spectrum {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        max_order: usize,
        #[arg(long, default_value = "all")]
        filter: String,
    },
    /// `G(S_n)`, the intersection of all subgroups of index at most `n`.
    Gsn {
        #[arg(long)]
        group: String,
        #[arg(long)]
        n: u64,
    },
    /// Lower central series.
    Lcs {
        #[arg(long)]
        group: String,
    },
    /// Monte Carlo estimate of `P_{G,w}(target)` with a Hoeffding interval.
    Estimate {
        #[arg(long)]
        group: String,
        #[arg(long)]
        word: String,
        /// Element label or index; defaults to the identity.
        #[arg(long)]
        target: Option<String>,
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Exact,
    Dp,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Theorem {
    Finite,
    Lemma1,
    Prop2,
    Structure,
    Squares,
    Identity,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    theorem: Theorem,
    #[arg(long, required_unless_present = "all", conflicts_with = "all")]
    group: Option<String>,
    /// Sweep every catalog group up to `--max-order`.
    #[arg(long, requires = "max_order")]
    all: bool,
    #[arg(long)]
    max_order: Option<usize>,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// `auto` or a rational.
    #[arg(long, default_value = "auto")]
    epsilon: String,
    /// A rational or `eps/<d>`.
    #[arg(long, default_value = "eps/2")]
    delta: String,
    /// Word for lemma1 and prop2; defaults to `wk:<k>`.
    #[arg(long)]
    word: Option<String>,
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_budget() { 3 } else { 2 };
        Failure { code, message: e.to_string() }
    }
}

impl From<wordprob_core::GroupError> for Failure {
    fn from(e: wordprob_core::GroupError) -> Self {
        Error::from(e).into()
    }
}

impl From<wordprob_core::WordError> for Failure {
    fn from(e: wordprob_core::WordError) -> Self {
        Error::from(e).into()
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

struct Ctx {
    budget: Budget,
    seed: u64,
    manifest: Option<String>,
}

impl Ctx {
    fn group(&self, id: &str) -> Result<(String, FiniteGroup), Failure> {
        let spec: GroupSpec = id.parse()?;
        let g = spec.build()?;
        Ok((spec.to_string(), g))
    }

    fn catalog(&self, max_order: usize) -> Result<Vec<GroupSpec>, Failure> {
        match &self.manifest {
            Some(text) => Ok(corpus::catalog_with_manifest(max_order, text)?),
            None => Ok(corpus::catalog(max_order)),
        }
    }
}

fn parse_word(text: &str) -> Result<Word, Failure> {
    Ok(Word::parse(text)?)
}

fn cmd_dist(ctx: &Ctx, group: &str, word: &str) -> Result<Doc, Failure> {
    let (id, g) = ctx.group(group)?;
    let w = parse_word(word)?;
    let d = prob::exact_distribution(&g, &w, ctx.budget.max_ops)?;
    let record = d.to_record(&id, &w.to_string());
    let mut table = Table::new(&["class", "representative", "size", "mass", "element_prob", "element_prob_decimal"]);
    for c in 0..d.num_classes() {
        let p = rational::to_text(&d.element_prob(c));
        table.push(vec![
            c.to_string(),
            g.label(d.representatives()[c]),
            d.sizes()[c].to_string(),
            rational::to_text(&d.mass(c)),
            p.clone(),
            decimal(&p),
        ]);
    }
    let (at, best) = d.max_point();
    let notes = vec![
        format!("group {id} (order {}), word {w}", g.order()),
        format!("P(1) = {}", rational::to_text(&d.element_prob(0))),
        format!("max point {} at {}", rational::to_text(&best), g.label(at)),
    ];
    let json = serde_json::to_value(&record).expect("records serialise");
    Ok(Doc { json: vec![json], table, notes })
}

fn cmd_prk(ctx: &Ctx, group: &str, k: usize, method: Method, samples: Option<u64>, alpha: Option<f64>) -> Result<Doc, Failure> {
    if k == 0 {
        return Err(input_error("k must be at least 1"));
    }
    let (id, g) = ctx.group(group)?;
    let w = Word::lower_central(k);
    let mut table = Table::new(&["group", "k", "method", "value", "decimal", "radius"]);
    let json = match method {
        Method::Exact | Method::Dp => {
            let d = match method {
                Method::Exact => prob::exact_distribution_bruteforce(&g, &w, ctx.budget.max_ops)?,
                _ => prob::exact_distribution(&g, &w, ctx.budget.max_ops)?,
            };
            let v = rational::to_text(&d.element_prob(0));
            let m = if method == Method::Exact { "exact" } else { "dp" };
            table.push(vec![id.clone(), k.to_string(), m.into(), v.clone(), decimal(&v), String::new()]);
            json!({"group": id, "k": k, "method": m, "value": v})
        }
        Method::Mc => {
            let samples = samples.ok_or_else(|| input_error("--method mc needs --samples"))?;
            let alpha = alpha.ok_or_else(|| input_error("--method mc needs --alpha"))?;
            let e = prob::monte_carlo(&g, &w, g.identity(), samples, alpha, ctx.seed)?;
            let v = rational::to_text(&e.point());
            table.push(vec![id.clone(), k.to_string(), "mc".into(), v.clone(), decimal(&v), format!("{:.12}", e.radius)]);
            json!({"group": id, "k": k, "method": "mc", "value": v, "estimate": e})
        }
    };
    Ok(Doc { json: vec![json], table, notes: Vec::new() })
}

fn run_theorem(ctx: &Ctx, args: &VerifyArgs, id: &str, g: &FiniteGroup) -> Result<TheoremReport, Error> {
    let eps: Epsilon = args.epsilon.parse()?;
    let delta: Delta = args.delta.parse()?;
    let word = || -> Result<Word, Error> {
        let text = args.word.clone().unwrap_or_else(|| format!("wk:{}", args.k));
        Ok(Word::parse(&text)?)
    };
    let b = &ctx.budget;
    match args.theorem {
        Theorem::Finite => theorems::verify_theorem_finite(g, id, args.k, &eps, b),
        Theorem::Lemma1 => theorems::verify_lemma1(g, id, &word()?, &eps, &delta, b),
        Theorem::Prop2 => theorems::verify_prop2(g, id, &word()?, &eps, &delta, b),
        Theorem::Structure => theorems::verify_theorem_structure(g, id, args.k, &eps, b),
        Theorem::Squares => theorems::verify_squares_inequality(g, id, b),
        Theorem::Identity => theorems::certify_identity(g, id, args.k, &eps, b),
    }
}

fn cmd_verify(ctx: &Ctx, args: &VerifyArgs) -> Result<(Doc, bool), Failure> {
    let targets: Vec<(String, FiniteGroup)> = match (&args.group, args.all) {
        (Some(group), _) => vec![ctx.group(group)?],
        (None, true) => {
            let max = args.max_order.expect("clap enforces --max-order");
            ctx.catalog(max)?
                .iter()
                .map(|s| Ok((s.to_string(), s.build()?)))
                .collect::<Result<_, Failure>>()?
        }
        (None, false) => return Err(input_error("give --group or --all")),
    };
    // reports are computed in parallel but kept in catalog order
    let reports: Vec<Result<TheoremReport, Error>> = {
        use rayon::prelude::*;
        targets.par_iter().map(|(id, g)| run_theorem(ctx, args, id, g)).collect()
    };
    let reports = reports.into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(&["group", "theorem", "hypothesis", "verdict", "checks", "detail"]);
    for r in &reports {
        let checks: Vec<String> = r.checks.iter().map(|c| c.to_string()).collect();
        table.push(vec![
            r.inputs.group.clone(),
            r.theorem.to_string(),
            format!("{:?}", r.hypothesis).to_lowercase(),
            format!("{:?}", r.verdict).to_lowercase(),
            checks.join("; "),
            r.failure_detail.clone().unwrap_or_default(),
        ]);
    }
    let failed = failures(&reports);
    let vacuous = reports.iter().filter(|r| r.verdict == Verdict::Vacuous).count();
    let mut notes = vec![format!(
        "{} report(s): {} pass, {} fail, {} vacuous",
        reports.len(),
        reports.iter().filter(|r| r.passed()).count(),
        failed.len(),
        vacuous
    )];
    if let Some(first) = failed.first() {
        notes.push(format!(
            "first failure: {} — {}",
            first.inputs.group,
            first.failure_detail.as_deref().unwrap_or("")
        ));
    }
    let json = reports.iter().map(|r| serde_json::to_value(r).expect("reports serialise")).collect();
    Ok((Doc { json, table, notes }, failed.is_empty()))
}

/// Reports that decide exit code 1. Vacuous reports do not count.
fn failures(reports: &[TheoremReport]) -> Vec<&TheoremReport> {
    reports.iter().filter(|r| r.verdict == Verdict::Fail).collect()
}

fn cmd_spectrum(ctx: &Ctx, k: usize, max_order: usize, filter: &str, cache_path: Option<&PathBuf>) -> Result<Doc, Failure> {
    let filter: SpectrumFilter = filter.parse()?;
    let specs = ctx.catalog(max_order)?;
    let mut cache = match cache_path {
        Some(p) => ResultCache::open(p)?,
        None => ResultCache::in_memory(),
    };
    let (s, stats) = spectrum::sweep(&specs, k, max_order, filter, &mut cache, ctx.budget.max_ops)?;
    eprintln!("spectrum: computed {}, reused {} from cache", stats.computed, stats.reused);
    let mut table = Table::new(&["group", "order", "value", "decimal", "budget_exceeded"]);
    for r in &s.rows {
        let v = r.value.clone().unwrap_or_default();
        table.push(vec![r.group.clone(), r.order.to_string(), v.clone(), decimal(&v), r.budget_exceeded.to_string()]);
    }
    let notes = vec![
        format!("k = {k}, max order {max_order}, {} group(s)", s.rows.len()),
        format!("distinct values: {}", s.values.join(", ")),
        match &s.maximum {
            Some(m) => format!("maximum {m} attained by {}", s.attained_by.join(", ")),
            None => "no groups passed the filter".into(),
        },
    ];
    let json = serde_json::to_value(&s).expect("spectra serialise");
    Ok(Doc { json: vec![json], table, notes })
}

fn labels(g: &FiniteGroup, elems: impl Iterator<Item = usize>) -> Vec<String> {
    elems.map(|x| g.label(x)).collect()
}

fn cmd_gsn(ctx: &Ctx, group: &str, n: u64) -> Result<Doc, Failure> {
    if n == 0 {
        return Err(input_error("n must be at least 1"));
    }
    let (id, g) = ctx.group(group)?;
    let res = theorems::g_sn(&g, n, &ctx.budget.lattice)?;
    let series = g.lower_central_series_of(&res.residual);
    let members = labels(&g, res.residual.iter());
    let mut table = Table::new(&["quantity", "value"]);
    let class = series.nilpotency_class().map(|c| c.to_string()).unwrap_or_else(|| "not nilpotent".into());
    for (q, v) in [
        ("group", id.clone()),
        ("n", n.to_string()),
        ("subgroups of index <= n", res.contributing_subgroups.to_string()),
        ("|N|", res.residual.order().to_string()),
        ("N", members.join(" ")),
        ("N normal", res.residual.is_normal_in(&g).to_string()),
        ("class of N", class.clone()),
        ("|C_G(N)|", res.centralizer.order().to_string()),
    ] {
        table.push(vec![q.to_string(), v]);
    }
    let json = json!({
        "group": id,
        "n": n,
        "contributing_subgroups": res.contributing_subgroups,
        "residual_order": res.residual.order(),
        "residual": members,
        "residual_normal": res.residual.is_normal_in(&g),
        "residual_class": series.nilpotency_class(),
        "centralizer_order": res.centralizer.order(),
    });
    Ok(Doc { json: vec![json], table, notes: Vec::new() })
}

fn cmd_lcs(ctx: &Ctx, group: &str) -> Result<Doc, Failure> {
    let (id, g) = ctx.group(group)?;
    let series = g.lower_central_series();
    let mut table = Table::new(&["term", "order"]);
    for (i, o) in series.orders().iter().enumerate() {
        table.push(vec![format!("gamma_{}", i + 1), o.to_string()]);
    }
    let class = series.nilpotency_class();
    let notes = vec![match class {
        Some(c) => format!("{id}: nilpotent of class {c}"),
        None => format!("{id}: not nilpotent"),
    }];
    let json = json!({"group": id, "orders": series.orders(), "nilpotency_class": class});
    Ok(Doc { json: vec![json], table, notes })
}

fn cmd_estimate(ctx: &Ctx, group: &str, word: &str, target: Option<&str>, samples: u64, alpha: f64) -> Result<Doc, Failure> {
    let (id, g) = ctx.group(group)?;
    let w = parse_word(word)?;
    let t = match target {
        None => g.identity(),
        Some(text) => match text.parse::<usize>() {
            Ok(i) if i < g.order() => i,
            _ => g
                .elements()
                .find(|&x| g.label(x) == text)
                .ok_or_else(|| input_error(format!("no element `{text}` in {id}")))?,
        },
    };
    let e = prob::monte_carlo(&g, &w, t, samples, alpha, ctx.seed)?;
    let p = e.point_f64();
    let v = rational::to_text(&e.point());
    let mut table = Table::new(&["group", "word", "target", "estimate", "decimal", "radius", "low", "high", "samples", "seed"]);
    table.push(vec![
        id.clone(),
        w.to_string(),
        g.label(t),
        v.clone(),
        decimal(&v),
        format!("{:.12}", e.radius),
        format!("{:.12}", (p - e.radius).max(0.0)),
        format!("{:.12}", (p + e.radius).min(1.0)),
        samples.to_string(),
        ctx.seed.to_string(),
    ]);
    let json = json!({"group": id, "word": w.to_string(), "target": g.label(t), "estimate": e, "value": v});
    Ok(Doc { json: vec![json], table, notes: Vec::new() })
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| input_error(format!("thread pool: {e}")))?;
    }
    let manifest = match &cli.manifest {
        Some(p) => Some(
            std::fs::read_to_string(p).map_err(|e| input_error(format!("{}: {e}", p.display())))?,
        ),
        None => None,
    };
    let ctx = Ctx {
        budget: Budget { max_ops: cli.budget, lattice: LatticeLimits::default() },
        seed: cli.seed,
        manifest,
    };
    // threads are left out: they never change results
    let config = json!({
        "budget": cli.budget,
        "seed": cli.seed,
        "output": cli.output,
        "cache": cli.cache.as_ref().map(|p| p.display().to_string()),
        "manifest": cli.manifest.as_ref().map(|p| p.display().to_string()),
    });
    let mut ok = true;
    let doc = match &cli.command {
        Command::Dist { group, word } => cmd_dist(&ctx, group, word)?,
        Command::Prk { group, k, method, samples, alpha } => cmd_prk(&ctx, group, *k, *method, *samples, *alpha)?,
        Command::Verify(args) => {
            let (doc, passed) = cmd_verify(&ctx, args)?;
            ok = passed;
            doc
        }
        Command::Spectrum { k, max_order, filter } => cmd_spectrum(&ctx, *k, *max_order, filter, cli.cache.as_ref())?,
        Command::Gsn { group, n } => cmd_gsn(&ctx, group, *n)?,
        Command::Lcs { group } => cmd_lcs(&ctx, group)?,
        Command::Estimate { group, word, target, samples, alpha } => {
            cmd_estimate(&ctx, group, word, target.as_deref(), *samples, *alpha)?
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match render::emit(&doc, cli.output, &config, &mut out).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            return Err(Failure { code: 2, message: format!("writing output: {e}") });
        }
        _ => {}
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
