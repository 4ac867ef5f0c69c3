use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use regmap::analysis::{analyze, dual};
use regmap::descent::{crosscheck, load_census, read_counts, store::summary_text};
use regmap::verify::{self, VerificationReport};
use regmap::{preset, todd_coxeter, Census, CensusConfig, CosetTable, EnumerationLimits, Presentation, Word};

#[derive(Parser)]
#[command(name = "regmap", version, about = "Regular maps with 2-group automorphism groups")]
struct Cli {
    /// Abort coset enumeration beyond this many cosets.
    #[arg(long, global = true, default_value_t = 1 << 22)]
    max_cosets: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Group order and the orders of r0 r1, r1 r2, r0 r2.
    Order(Input),
    /// Map invariants as JSON.
    Analyze(Input),
    /// Invariants of the dual map as JSON.
    Dual(Input),
    /// Enumerate all quotients of order 2^k for k up to --max-exp.
    Census(CensusArgs),
    /// Compare per-order proper-map counts with a counts file.
    Crosscheck(CrosscheckArgs),
    /// Check one claim and write JSON report lines.
    Verify(VerifyArgs),
}

/// A presentation: a named preset or a relator file.
#[derive(Args, Clone)]
struct Input {
    /// Preset family name, e.g. G4 or thm32_case2.
    #[arg(long, conflicts_with = "file")]
    preset: Option<String>,
    /// Order exponent for single-parameter presets.
    #[arg(long, requires = "preset")]
    n: Option<u32>,
    /// Full parameter list, e.g. 12,4,8.
    #[arg(long, value_delimiter = ',', requires = "preset", conflicts_with = "n")]
    params: Vec<u32>,
    /// Presentation file, one relator per line.
    file: Option<PathBuf>,
}

impl Input {
    fn presentation(&self) -> Result<Presentation> {
        match (&self.preset, &self.file) {
            (Some(name), _) => {
                let params: Vec<u32> = match self.n {
                    Some(n) => vec![n],
                    None => self.params.clone(),
                };
                Ok(preset(name, &params)?)
            }
            (None, Some(path)) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                Ok(Presentation::from_text(&text)?)
            }
            (None, None) => bail!("give --preset NAME or a presentation file"),
        }
    }

    fn table(&self, limits: &EnumerationLimits) -> Result<CosetTable> {
        Ok(todd_coxeter(&self.presentation()?, &[], limits)?)
    }
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long)]
    max_exp: u32,
    #[arg(long)]
    out: PathBuf,
    /// Continue from complete levels already in --out.
    #[arg(long)]
    resume: bool,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct CrosscheckArgs {
    /// CSV with header `order_exp,count`.
    counts: PathBuf,
    /// Census directory written by `census`.
    #[arg(long, default_value = "census")]
    census: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Append report lines to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Census directory; built in memory when absent.
    #[arg(long, global = true)]
    census: Option<PathBuf>,
    #[command(subcommand)]
    claim: Claim,
}

#[derive(Subcommand)]
enum Claim {
    /// Permutation model of H6(n).
    #[command(name = "thm43-perms")]
    Thm43Perms {
        #[arg(long)]
        n: u32,
    },
    /// Existence of a map of type (2^s, 2^t) at order 2^n.
    Thm32 {
        #[arg(long)]
        n: u32,
        #[arg(long, required_unless_present = "all", requires = "t")]
        s: Option<u32>,
        #[arg(long, required_unless_present = "all", requires = "s")]
        t: Option<u32>,
        /// Every legal (s, t).
        #[arg(long, conflicts_with_all = ["s", "t"])]
        all: bool,
    },
    /// No map of type (s, t) with s + t > n and s < t at order 2^n.
    Nonexistence {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        t: u32,
    },
    /// No map with s + t > n and s != t at any order up to 2^max_n.
    Conjecture34 {
        #[arg(long)]
        max_n: u32,
    },
    /// Maps of type (n-2, n-2) and (n-3, n-3) against G1..G6.
    Classification {
        #[arg(long)]
        n: u32,
    },
    /// Central quotient of a map with s + t > n.
    Lemma42(Input),
    /// Commutator identities in a map's group.
    Lemma31(Input),
}

fn census_for(dir: Option<&Path>, max_exp: u32) -> Result<Census> {
    let census = match dir {
        Some(d) => load_census(d, max_exp).with_context(|| format!("loading census from {}", d.display()))?,
        None => regmap::run_census(&CensusConfig::new(max_exp))?,
    };
    census.level(max_exp).with_context(|| format!("census does not reach order 2^{max_exp}"))?;
    Ok(census)
}

fn run_verify(args: &VerifyArgs, limits: &EnumerationLimits) -> Result<Vec<VerificationReport>> {
    let census = args.census.as_deref();
    Ok(match &args.claim {
        Claim::Thm43Perms { n } => vec![verify::verify_thm43_perms(*n)?],
        Claim::Thm32 { n, s, t, all } => {
            let pairs = if *all { verify::thm32_grid(*n) } else { vec![(s.unwrap(), t.unwrap())] };
            if pairs.is_empty() {
                bail!("no legal (s, t) at n = {n}");
            }
            pairs
                .into_iter()
                .map(|(s, t)| verify::verify_thm32(*n, s, t, limits))
                .collect::<Result<_, _>>()?
        }
        Claim::Nonexistence { n, s, t } => vec![verify::verify_nonexistence(*n, *s, *t, &census_for(census, *n)?)?],
        Claim::Conjecture34 { max_n } => vec![verify::verify_conjecture34(*max_n, &census_for(census, *max_n)?)?],
        Claim::Classification { n } => {
            vec![verify::verify_classification(*n, &census_for(census, *n)?, limits)?]
        }
        Claim::Lemma42(input) => vec![verify::verify_lemma42(&input.table(limits)?)?],
        Claim::Lemma31(input) => verify::verify_lemma31(&input.table(limits)?).into(),
    })
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    let limits = EnumerationLimits::with_max_cosets(cli.max_cosets);
    match cli.command {
        Command::Order(input) => {
            let t = input.table(&limits)?;
            println!("order {}", t.len());
            for (label, w) in [("r0 r1", [0, 1]), ("r1 r2", [1, 2]), ("r0 r2", [0, 2])] {
                println!("o({label}) {}", t.element_order(&Word::from_indices(&w))?);
            }
        }
        Command::Analyze(input) => {
            let t = input.table(&limits)?;
            let mut v = serde_json::to_value(analyze(&t)?)?;
            v["canonical_key_digest"] = t.canonicalize()?.digest().into();
            print_json(&v)?;
        }
        Command::Dual(input) => {
            let t = input.table(&limits)?;
            let d = dual(&t);
            let mut v = serde_json::to_value(analyze(&d)?)?;
            v["canonical_key_digest"] = d.canonicalize()?.digest().into();
            v["self_dual"] = (d.canonicalize()? == t.canonicalize()?).into();
            print_json(&v)?;
        }
        Command::Census(args) => {
            if args.resume && !args.out.is_dir() {
                bail!("--resume needs an existing census directory");
            }
            if args.threads == Some(0) {
                bail!("--threads must be positive");
            }
            let mut cfg = CensusConfig::new(args.max_exp);
            cfg.out_dir = Some(args.out);
            cfg.resume = args.resume;
            cfg.threads = args.threads;
            let census = regmap::run_census(&cfg)?;
            print!("{}", summary_text(&census));
            return Ok(census.is_complete());
        }
        Command::Crosscheck(args) => {
            let counts = read_counts(&args.counts)?;
            let top = counts.iter().map(|&(k, _)| k).max().unwrap_or(0);
            let census = load_census(&args.census, top)?;
            let mut ok = true;
            println!("order_exp,expected,found,status");
            for row in crosscheck(&census, &counts) {
                let (found, status) = match row.found {
                    Some(f) if row.matches() => (f.to_string(), "match"),
                    Some(f) => (f.to_string(), "MISMATCH"),
                    None => ("-".to_string(), "beyond census"),
                };
                ok &= row.found.is_none() || row.matches();
                println!("{},{},{found},{status}", row.order_exp, row.expected);
            }
            return Ok(ok);
        }
        Command::Verify(args) => {
            let reports = run_verify(&args, &limits)?;
            if let Some(path) = &args.out {
                let mut f = fs::OpenOptions::new().create(true).append(true).open(path)?;
                for r in &reports {
                    writeln!(f, "{}", r.to_json())?;
                }
            }
            for r in &reports {
                println!("{r}");
            }
            return Ok(reports.iter().all(VerificationReport::ok));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
