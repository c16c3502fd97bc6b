use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use verba::bound::{
    parse_quantity, seed_db, Context, Db, RuleId, DEFAULT_ITERATION_CAP, DEFAULT_SEEDS,
};
use verba::group::cache::{cache_clear, cache_info, load_or_compute, CacheOutcome};
use verba::group::FiniteGroup;
use verba::identity::{self, Operand, RewriteCertificate};
use verba::parse::{parse_expr, Expr};
use verba::verbal::{template_by_name, DEFAULT_ENUMERATION_BUDGET};
use verba::{experiments, Alphabet, Error, Result, Word};

#[derive(Parser)]
#[command(name = "verba", version, about = "Verbal length and commutator calculus in free and finite groups")]
struct Cli {
    /// Distance-table cache directory [env: VERBA_CACHE_DIR]
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Maximum number of template instances enumerated in a finite group
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
    budget: u128,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Freely reduce a word expression
    Reduce { expr: String },
    /// Check whether two expressions are equal in the free group
    Verify { lhs: String, rhs: String },
    /// Produce a rewrite certificate
    Rewrite {
        #[command(subcommand)]
        rule: Rule,
        /// Also write the certificate to this file
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Check a certificate file
    Check { file: PathBuf },
    /// W-length in a finite group
    Wlength(WlengthArgs),
    /// Propagate bounds from a facts file
    Bound(BoundArgs),
    /// Facts about the permutation representation rho_n
    Cover {
        #[arg(long)]
        n: usize,
    },
    /// Registered experiments
    Experiment {
        #[command(subcommand)]
        action: ExperimentAction,
    },
    /// Manage the distance-table cache
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum Rule {
    /// g^n h^n = (gh)^n times n-1 conjugated commutators
    HerdPowers { g: String, h: String, n: u32 },
    /// (w1...wm)^k = w1^k times (m-1)k conjugates
    RotateProduct {
        k: u32,
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// (g1^a1...gm^am)^-1 (g1^b1...gm^bm) as m conjugates
    TelescopeLine {
        /// Comma-separated words
        #[arg(long, value_delimiter = ',', required = true)]
        g: Vec<String>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        a: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        b: Vec<i64>,
    },
    /// [a,b]^(2^n) = [a^(2^n), b] times 2^n-1 gamma_3-words
    SquareToGamma3 { a: String, b: String, n: u32 },
    /// g^m k^m (gk)^-m as m(m-1)/2 conjugates of [g,k]
    Gamma3Triangle { g: String, k: String, m: u32 },
    /// [g,[a,b]] as two factors; write a or b as [u,v] to get beta_2 tags
    HallWittSplit { g: String, a: String, b: String },
    /// [x,[y,z]][x,[y,z]^n] = [x,[y,z]^(n+1)] times one beta_2-word
    OddballStep { x: String, y: String, z: String, n: u32 },
    /// [x,[y,z]]^n = [x,[y,z]^n] times n-1 beta_2-words
    OddballPower { x: String, y: String, z: String, n: u32 },
    /// Culler's identity as two commutators
    Culler,
    /// [x,y^k]^3 as two [x,y^k]-words
    CullerPower { k: u32 },
    /// ([x,y]^2)^6 as five [x,y]^2-words
    CullerChainXy2,
    /// Culler's identity in the cover shape [*,y^2]^* [*,y]^*
    CullerCoverShape,
}

#[derive(Args)]
struct WlengthArgs {
    /// S<n>, A<n>, SL2_<p> or table:<path>
    #[arg(long)]
    group: String,
    /// gammaN, betaN, surfaceG or w:<word>
    #[arg(long)]
    template: String,
    /// Element as a value string (permutations) or entries (matrices)
    #[arg(long)]
    element: Option<String>,
    /// Comma-separated variables of a w: template
    #[arg(long, value_delimiter = ',')]
    vars: Option<Vec<String>>,
}

#[derive(Args)]
struct BoundArgs {
    /// Facts files [default: $VERBA_SEEDS, else the built-in seeds]
    #[arg(long)]
    facts: Vec<PathBuf>,
    /// Quantities to derive, e.g. "SL [x,y]^2 | w:[x,y]^2"
    #[arg(long, required = true)]
    declare: Vec<String>,
    /// Context for declarations that do not name one
    #[arg(long, default_value = "FREE")]
    context: String,
    /// Comma-separated rule subset, e.g. R3,R5
    #[arg(long, value_delimiter = ',')]
    rules: Option<Vec<String>>,
    #[arg(long, default_value_t = DEFAULT_ITERATION_CAP)]
    cap: usize,
    /// One key=value line per fact instead of derivation trees
    #[arg(long)]
    records: bool,
}

#[derive(Subcommand)]
enum ExperimentAction {
    List,
    Run {
        name: String,
        /// Also write the report to this file
        #[arg(long)]
        report: Option<PathBuf>,
        /// Seed facts file [default: $VERBA_SEEDS, else the built-in seeds]
        #[arg(long)]
        seeds: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    Clear,
    Info,
}

/// Exit status: 0 success, 1 failed check, 2 usage, 3 budget.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Inconsistent { .. } => 1,
        Error::Resource { .. } | Error::IterationCap(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}: {}", e.code(), e.to_string().replace('\n', " "));
            ExitCode::from(exit_code(&e))
        }
    }
}

fn cache_dir(cli: &Option<PathBuf>) -> PathBuf {
    if let Some(d) = cli {
        return d.clone();
    }
    if let Some(d) = std::env::var_os("VERBA_CACHE_DIR") {
        return PathBuf::from(d);
    }
    match std::env::var_os("HOME") {
        Some(h) => PathBuf::from(h).join(".cache").join("verba"),
        None => std::env::temp_dir().join("verba-cache"),
    }
}

fn seeds_text(explicit: &[PathBuf]) -> Result<String> {
    let paths: Vec<PathBuf> = if explicit.is_empty() {
        std::env::var_os("VERBA_SEEDS").map(PathBuf::from).into_iter().collect()
    } else {
        explicit.to_vec()
    };
    if paths.is_empty() {
        return Ok(DEFAULT_SEEDS.to_string());
    }
    let mut text = String::new();
    for p in paths {
        text.push_str(&fs::read_to_string(&p).map_err(|e| Error::Io {
            path: p.display().to_string(),
            source: e,
        })?);
        text.push('\n');
    }
    Ok(text)
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<()> {
    if let Some(p) = path {
        fs::write(p, text).map_err(|e| Error::Io {
            path: p.display().to_string(),
            source: e,
        })?;
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Reduce { expr } => {
            let mut a = Alphabet::new();
            let w = a.parse(&expr)?;
            println!("{}", a.format(&w));
            Ok(0)
        }
        Command::Verify { lhs, rhs } => {
            let mut a = Alphabet::new();
            let (l, r) = (a.parse(&lhs)?, a.parse(&rhs)?);
            let ok = identity::verify_identity(&l, &r);
            if ok {
                println!("PASS");
            } else {
                println!("FAIL: lhs rhs^-1 = {}", a.format(&l.mul(&r.inverse())));
            }
            Ok(if ok { 0 } else { 1 })
        }
        Command::Rewrite { rule, out } => {
            let mut a = Alphabet::with_names(&["x", "y"]);
            let cert = rewrite(rule, &mut a)?;
            let text = cert.to_text(&a);
            print!("{text}");
            write_out(&out, &text)?;
            Ok(if cert.verify() { 0 } else { 1 })
        }
        Command::Check { file } => {
            let text = fs::read_to_string(&file).map_err(|e| Error::Io {
                path: file.display().to_string(),
                source: e,
            })?;
            let mut a = Alphabet::new();
            let cert = RewriteCertificate::from_text(&text, &mut a)?;
            match cert.check() {
                Ok(()) => {
                    println!("PASS {} factors", cert.factors.len());
                    Ok(0)
                }
                Err(why) => {
                    println!("FAIL {why}");
                    Ok(1)
                }
            }
        }
        Command::Wlength(args) => wlength(args, &cache_dir(&cli.cache_dir), cli.budget),
        Command::Bound(args) => bound(args),
        Command::Cover { n } => {
            let report = verba::cover::cover_invariants(n)?;
            print!("{report}");
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Experiment { action } => match action {
            ExperimentAction::List => {
                for line in experiments::list() {
                    println!("{line}");
                }
                Ok(0)
            }
            ExperimentAction::Run { name, report, seeds } => {
                let seeds = seeds_text(&seeds.into_iter().collect::<Vec<_>>())?;
                let r = experiments::run_with_seeds(&name, &seeds)?;
                let text = r.to_string();
                print!("{text}");
                write_out(&report, &text)?;
                Ok(if r.passed() { 0 } else { 1 })
            }
        },
        Command::Cache { action } => {
            let dir = cache_dir(&cli.cache_dir);
            match action {
                CacheAction::Clear => println!("removed {} tables from {}", cache_clear(&dir)?, dir.display()),
                CacheAction::Info => {
                    let (n, bytes) = cache_info(&dir)?;
                    println!("{}: {n} tables, {bytes} bytes", dir.display());
                }
            }
            Ok(0)
        }
    }
}

fn operand(text: &str, a: &mut Alphabet) -> Result<Operand> {
    match parse_expr(text)?.simplified() {
        Expr::Bracket(u, v) => Ok(Operand::Bracket(u.eval(a), v.eval(a))),
        e => Ok(Operand::Plain(e.eval(a))),
    }
}

fn rewrite(rule: Rule, a: &mut Alphabet) -> Result<RewriteCertificate> {
    let mut w = |s: &str| -> Result<Word> { a.parse(s) };
    match rule {
        Rule::HerdPowers { g, h, n } => identity::herd_powers(&w(&g)?, &w(&h)?, n),
        Rule::RotateProduct { k, words } => {
            let ws = words.iter().map(|s| w(s)).collect::<Result<Vec<_>>>()?;
            identity::rotate_product(&ws, k)
        }
        Rule::TelescopeLine { g, a: lo, b: hi } => {
            let gs = g.iter().map(|s| w(s)).collect::<Result<Vec<_>>>()?;
            identity::telescope_line(&gs, &lo, &hi)
        }
        Rule::SquareToGamma3 { a: x, b, n } => identity::square_to_gamma3(&w(&x)?, &w(&b)?, n),
        Rule::Gamma3Triangle { g, k, m } => identity::gamma3_triangle(&w(&g)?, &w(&k)?, m),
        Rule::HallWittSplit { g, a: x, b } => {
            let g = w(&g)?;
            let (x, b) = (operand(&x, a)?, operand(&b, a)?);
            identity::hall_witt_split(&g, &x, &b)
        }
        Rule::OddballStep { x, y, z, n } => identity::oddball_step(&w(&x)?, &w(&y)?, &w(&z)?, n),
        Rule::OddballPower { x, y, z, n } => identity::oddball_power(&w(&x)?, &w(&y)?, &w(&z)?, n),
        Rule::Culler => Ok(identity::culler_certificate()),
        Rule::CullerPower { k } => identity::culler_power_certificate(k),
        Rule::CullerChainXy2 => Ok(identity::culler_chain_xy2()),
        Rule::CullerCoverShape => Ok(identity::culler_cover_shape()),
    }
}

fn wlength(args: WlengthArgs, dir: &std::path::Path, budget: u128) -> Result<u8> {
    let g = FiniteGroup::load(&args.group)?;
    let mut a = Alphabet::new();
    let t = template_by_name(&args.template, args.vars.as_deref(), &mut a)?;
    let (table, outcome) = load_or_compute(dir, &g, &t, budget)?;
    if let CacheOutcome::Recomputed { warning } = outcome {
        eprintln!("warning: corrupt cache entry recomputed: {warning}");
    }
    match args.element {
        Some(e) => {
            let id = g.element_by_description(&e)?;
            match table.distance(id) {
                Some(d) => println!("{d}"),
                None => println!("UNREACHABLE"),
            }
        }
        None => {
            println!("group {} order {} template {}", g.spec(), g.order(), t.name());
            println!("verbal subgroup order {}", table.reachable().count());
            let hist: Vec<String> = table.histogram().iter().map(|(d, n)| format!("{d}:{n}")).collect();
            println!("histogram {{{}}}", hist.join(", "));
        }
    }
    Ok(0)
}

fn bound(args: BoundArgs) -> Result<u8> {
    let context = Context::parse(&args.context)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown context '{}'", args.context)))?;
    let rules: BTreeSet<RuleId> = match &args.rules {
        None => RuleId::all(),
        Some(names) => names
            .iter()
            .map(|n| RuleId::parse(n).ok_or_else(|| Error::InvalidArgument(format!("unknown rule '{n}'"))))
            .collect::<Result<_>>()?,
    };
    let mut db = Db::new();
    seed_db(&mut db, &seeds_text(&args.facts)?)?;
    let mut targets = Vec::new();
    for d in &args.declare {
        let q = parse_quantity(d, context, db.alphabet_mut())?;
        db.declare(q.clone())?;
        targets.push(q);
    }
    db.propagate(&rules, args.cap)?;
    if args.records {
        for line in db.fact_records() {
            println!("{line}");
        }
        return Ok(0);
    }
    for q in &targets {
        print!("{}", db.explain(q)?);
    }
    Ok(0)
}
