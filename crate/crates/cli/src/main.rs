use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use shiish_core::arrangement::{build_arrangement, enumerate_regions_capped, region_record, RegionRecord};
use shiish_core::graphs::{build_gkn, build_rooted, dfs_burn, BurnReport};
use shiish_core::parking::{classify, count_tail_parkers, parks_all_tail};
use shiish_core::verify::{verify_all, CROSS_VALIDATE_MAX_N};
use shiish_core::word::all_words_capped;
use shiish_core::{Error, Word};

const MAX_N_VAR: &str = "SHIISH_MAX_N";
const DEFAULT_REGION_MAX_N: usize = 6;
const DEFAULT_WORD_MAX_N: usize = 7;

const EXIT_USAGE: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "shiish", version, about = "Regions, labels and parking functions of the arrangements between Shi and Ish")]
struct Cli {
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate the regions of A^k_n with their labels.
    Regions {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: KArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify a word: parking, Ish, k-partial, centre, sigma.
    Check {
        word: String,
        #[arg(long, default_value = "all")]
        k: KArg,
        /// Include burning traces for every requested k.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the burning algorithm on the rooted graph of A^k_n.
    Burn {
        word: String,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export G^k_n (or the rooted graph with --rooted) as DOT.
    Graph {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        rooted: bool,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-validate every characterization up to n-max and reproduce the worked examples.
    Verify {
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, alias = "json")]
        out: Option<PathBuf>,
    },
    /// Region counts and T_k, closed form and (within budget) brute force.
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "all")]
        k: KArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum KArg {
    All,
    One(usize),
}

impl std::str::FromStr for KArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "all" {
            return Ok(KArg::All);
        }
        s.parse().map(KArg::One).map_err(|_| format!("expected an integer or \"all\", got {s:?}"))
    }
}

impl KArg {
    fn values(self, n: usize) -> anyhow::Result<Vec<usize>> {
        match self {
            KArg::All => Ok((2..=n).collect()),
            KArg::One(k) => {
                if k < 2 || k > n {
                    return Err(Error::InvalidK { n, k }.into());
                }
                Ok(vec![k])
            }
        }
    }
}

/// A run that completed but whose checks failed.
#[derive(Debug)]
struct VerificationFailed;

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("verification failed")
    }
}

impl std::error::Error for VerificationFailed {}

fn max_n(default: usize) -> anyhow::Result<usize> {
    match std::env::var(MAX_N_VAR) {
        Ok(v) => v.trim().parse().with_context(|| format!("{MAX_N_VAR} must be a non-negative integer, got {v:?}")),
        Err(_) => Ok(default),
    }
}

fn within_budget(what: &'static str, n: usize, default: usize) -> anyhow::Result<usize> {
    let cap = max_n(default)?;
    if n > cap {
        return Err(Error::BudgetExceeded { what, n, cap }.into());
    }
    Ok(cap)
}

fn emit(out: &Option<PathBuf>, mut body: String) -> anyhow::Result<()> {
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match out {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn pretty(value: &impl serde::Serialize) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

fn unsupported(format: Format, command: &str) -> anyhow::Error {
    anyhow::anyhow!(Error::Parse { input: format!("{format:?}").to_lowercase(), reason: format!("format not supported by {command}") })
}

fn parse_word(s: &str) -> anyhow::Result<Word> {
    Ok(s.parse::<Word>()?)
}

fn cmd_regions(n: usize, k: KArg, format: Format, out: &Option<PathBuf>) -> anyhow::Result<()> {
    let ks = k.values(n)?;
    let cap = within_budget("region enumeration", n, DEFAULT_REGION_MAX_N)?;
    let mut per_k: BTreeMap<usize, Vec<RegionRecord>> = BTreeMap::new();
    for &k in &ks {
        let spec = build_arrangement(n, k)?;
        let regions = enumerate_regions_capped(&spec, cap)?;
        per_k.insert(k, regions.iter().map(|(r, l)| region_record(&spec, r, l)).collect());
    }
    let single = ks.len() == 1;
    let body = match format {
        Format::Json if single => pretty(&per_k[&ks[0]])?,
        Format::Json => pretty(&per_k.iter().map(|(k, v)| (k.to_string(), v)).collect::<BTreeMap<_, _>>())?,
        Format::Csv => {
            let mut s = String::from(if single { "label\n" } else { "k,label\n" });
            for (k, records) in &per_k {
                for r in records {
                    if !single {
                        s.push_str(&format!("{k},"));
                    }
                    let label = r.label.to_string();
                    if label.contains(',') {
                        s.push_str(&format!("\"{label}\"\n"));
                    } else {
                        s.push_str(&format!("{label}\n"));
                    }
                }
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (k, records) in &per_k {
                s.push_str(&format!("A^{k}_{n}: {} regions\n", records.len()));
                for r in records {
                    s.push_str(&format!("{} {} w={} H={:?} I={:?}\n", r.signs, r.label, r.w, r.h, r.i));
                }
            }
            s
        }
        Format::Dot => return Err(unsupported(format, "regions")),
    };
    emit(out, body)
}

fn burn_text(r: &BurnReport) -> String {
    let pairs = |v: &[(usize, usize)]| v.iter().map(|(i, j)| format!("({i},{j})")).collect::<Vec<_>>().join(" ");
    format!(
        "burnt: {}\ntree: {}\ndamp: {}\nsuccess: {}",
        r.burnt.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
        pairs(&r.tree),
        pairs(&r.damp),
        r.success
    )
}

fn cmd_check(word: &str, k: KArg, trace: bool, format: Format, out: &Option<PathBuf>) -> anyhow::Result<()> {
    let a = parse_word(word)?;
    let n = a.n();
    if n < 2 {
        return Err(Error::InvalidN { n, min: 2 }.into());
    }
    let ks = k.values(n)?;
    let report = classify(&a, &ks)?;
    let mut burns = BTreeMap::new();
    if trace {
        for &k in &ks {
            burns.insert(k.to_string(), dfs_burn(&build_rooted(n, k)?, &a)?);
        }
    }
    let body = match format {
        Format::Json => {
            let mut value = serde_json::to_value(&report)?;
            if trace {
                value["burn"] = serde_json::to_value(&burns)?;
            }
            pretty(&value)?
        }
        Format::Text => {
            let mut s = format!("word: {a}\nparking: {}\nish: {}\n", report.parking, report.ish);
            let centre: Vec<String> = report.centre.members().iter().map(ToString::to_string).collect();
            s.push_str(&format!("centre: {{{}}}\n", centre.join(",")));
            for (k, partial) in &report.partial {
                s.push_str(&format!("partial k={k}: {partial}\n"));
            }
            match (&report.sigma, report.sigma_k) {
                (Some(sigma), Some(k)) => s.push_str(&format!("sigma (k={k}): {sigma}\n")),
                _ => s.push_str("sigma: none\n"),
            }
            for (k, r) in &burns {
                s.push_str(&format!("burn k={k}\n{}\n", burn_text(r)));
            }
            s
        }
        Format::Csv | Format::Dot => return Err(unsupported(format, "check")),
    };
    emit(out, body)
}

fn cmd_burn(word: &str, k: usize, format: Format, out: &Option<PathBuf>) -> anyhow::Result<()> {
    let a = parse_word(word)?;
    let report = dfs_burn(&build_rooted(a.n(), k)?, &a)?;
    let body = match format {
        Format::Json => pretty(&report)?,
        Format::Text => burn_text(&report),
        Format::Csv | Format::Dot => return Err(unsupported(format, "burn")),
    };
    emit(out, body)
}

fn cmd_graph(n: usize, k: usize, rooted: bool, format: Format, out: &Option<PathBuf>) -> anyhow::Result<()> {
    if format != Format::Dot && format != Format::Json {
        return Err(unsupported(format, "graph"));
    }
    let name = if rooted { format!("rooted_G_{k}_{n}") } else { format!("G_{k}_{n}") };
    let body = if rooted {
        let g = build_rooted(n, k)?;
        match format {
            Format::Dot => g.to_dot(&name),
            _ => pretty(&json!({
                "n": n,
                "k": k,
                "neighbors": (0..=n).map(|i| g.neighbors(i).to_vec()).collect::<Vec<_>>(),
            }))?,
        }
    } else {
        let g = build_gkn(n, k)?;
        match format {
            Format::Dot => g.to_dot(&name),
            _ => pretty(&json!({
                "n": n,
                "k": k,
                "arcs": g.arcs().map(|(u, v, m)| json!([u, v, m])).collect::<Vec<_>>(),
            }))?,
        }
    };
    emit(out, body)
}

fn cmd_verify(n_max: usize, format: Format, out: &Option<PathBuf>) -> anyhow::Result<()> {
    within_budget("verification", n_max, CROSS_VALIDATE_MAX_N)?;
    let report = verify_all(n_max)?;
    let body = match format {
        Format::Json => pretty(&report)?,
        Format::Text => report.to_string(),
        Format::Csv | Format::Dot => return Err(unsupported(format, "verify")),
    };
    emit(out, body)?;
    if !report.pass {
        return Err(VerificationFailed.into());
    }
    Ok(())
}

fn cmd_count(n: usize, k: KArg, format: Format, out: &Option<PathBuf>) -> anyhow::Result<()> {
    if n < 2 {
        return Err(Error::InvalidN { n, min: 2 }.into());
    }
    let ks = k.values(n)?;
    let region_cap = max_n(DEFAULT_REGION_MAX_N)?;
    let word_cap = max_n(DEFAULT_WORD_MAX_N)?;
    let regions_formula = (n as u128 + 1)
        .checked_pow(n as u32 - 1)
        .ok_or(Error::Overflow("(n+1)^(n-1)"))?;
    let mut rows = Vec::new();
    for k in ks {
        let regions = if n <= region_cap {
            Some(enumerate_regions_capped(&build_arrangement(n, k)?, region_cap)?.len() as u128)
        } else {
            None
        };
        let tail_bruteforce = if n <= word_cap {
            let mut count = 0u128;
            for a in all_words_capped(n, word_cap)? {
                if parks_all_tail(&a, k)? {
                    count += 1;
                }
            }
            Some(count)
        } else {
            None
        };
        rows.push(json!({
            "n": n,
            "k": k,
            "regions": regions.map(|r| r.to_string()),
            "regions_formula": regions_formula.to_string(),
            "tail_bruteforce": tail_bruteforce.map(|t| t.to_string()),
            "tail_formula": count_tail_parkers(n, k)?.to_string(),
        }));
    }
    let body = match format {
        Format::Json => pretty(&rows)?,
        Format::Csv | Format::Text => {
            let sep = if format == Format::Csv { "," } else { " " };
            let cols = ["n", "k", "regions", "regions_formula", "tail_bruteforce", "tail_formula"];
            let mut s = cols.join(sep) + "\n";
            for row in &rows {
                let cells: Vec<String> = cols
                    .iter()
                    .map(|c| match &row[*c] {
                        Value::String(v) => v.clone(),
                        Value::Null => "-".to_string(),
                        v => v.to_string(),
                    })
                    .collect();
                s.push_str(&cells.join(sep));
                s.push('\n');
            }
            s
        }
        Format::Dot => return Err(unsupported(format, "count")),
    };
    emit(out, body)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(workers) = cli.workers {
        if workers == 0 {
            bail!(Error::Parse { input: "0".into(), reason: "--workers must be positive".into() });
        }
        rayon::ThreadPoolBuilder::new().num_threads(workers).build_global()?;
    }
    match &cli.command {
        Command::Regions { n, k, format, out } => cmd_regions(*n, *k, *format, out),
        Command::Check { word, k, trace, format, out } => cmd_check(word, *k, *trace, *format, out),
        Command::Burn { word, k, format, out } => cmd_burn(word, *k, *format, out),
        Command::Graph { n, k, rooted, format, out } => cmd_graph(*n, *k, *rooted, *format, out),
        Command::Verify { n_max, format, out } => cmd_verify(*n_max, *format, out),
        Command::Count { n, k, format, out } => cmd_count(*n, *k, *format, out),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.is::<VerificationFailed>() {
        return EXIT_VERIFY;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::BudgetExceeded { .. }) | Some(Error::Overflow(_)) => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
