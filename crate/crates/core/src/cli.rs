//! Command-line surface. Every command is deterministic given its
//! configuration: reports go to stdout as JSON (or aligned text behind
//! --pretty), diagnostics and cache notices go to stderr.
//!
//! Exit codes: 0 success, 1 verification failure (with a structured report
//! on stdout), 2 usage or configuration errors.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::bounds::{assemble_total, evaluate_bounds, star_vectors, BoundContext};
use crate::cache::{Cache, CacheEvent};
use crate::error::{Error, Result};
use crate::families::{
    brute_force_max, classify, from_set_system, simple_construction, verify, MatchingFamily,
    SetSystem,
};
use crate::incidence::IncidenceStructure;
use crate::projective::ProjectiveSpace;
use crate::report::{bound_report_json, search_report_json, verify_report_json, RationalJson};
use crate::ring::Modulus;
use crate::spectra::{predicted_spectrum, verify_spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "matchbound",
    version,
    about = "Projective graphs over Z_m: exact spectra, expanding-property bounds, matching families"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Cache directory for large matrices (MATCHBOUND_CACHE is the default).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Parallel workers for batch verification.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    /// Aligned text tables instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct SpaceArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub m: u64,
}

#[derive(Debug, Args)]
pub struct SemiprimeArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub q: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit the canonically ordered point list of the projective space.
    Points(SpaceArgs),
    /// Build the projective graph, export A and B, print a summary.
    Graph {
        #[command(flatten)]
        space: SpaceArgs,
        /// Also write A_*.csv and B_*.csv into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Predicted spectrum of B, rank-verified against the actual matrix.
    Spectra {
        #[command(flatten)]
        space: SpaceArgs,
        /// Skip the exact rank verification and report predictions only.
        #[arg(long)]
        no_verify: bool,
    },
    /// Evaluate the bound chain at x (default: floor(ell^0.625)).
    Bounds {
        #[command(flatten)]
        semiprime: SemiprimeArgs,
        #[arg(long)]
        x: Option<u64>,
        /// Epsilon of the (8+epsilon) report envelope, as a decimal.
        #[arg(long, default_value = "0")]
        epsilon: String,
    },
    /// Verify family files: matching conditions plus type classification.
    Verify {
        files: Vec<PathBuf>,
    },
    /// Construct a family (simple binomial or from a set system).
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Exact maximum family size by exhaustive search.
    Search {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u32,
        /// Allowed cross products, comma separated (default: all nonzero).
        #[arg(long)]
        s: Option<String>,
        /// Candidate-count guard.
        #[arg(long, default_value_t = 512)]
        limit: u64,
    },
    /// Emit the reference ordered point tables for m = 2, 3, 6 at n = 3.
    Figure1,
    /// Exhaustive cross-check of the occupancy maximization.
    OracleF {
        #[command(flatten)]
        semiprime: SemiprimeArgs,
        #[arg(long)]
        x: u64,
        /// Cap override for the first-factor occupancies (default kappa_q).
        #[arg(long)]
        cap_q: Option<u64>,
        /// Cap override for the second-factor occupancies (default kappa_p).
        #[arg(long)]
        cap_p: Option<u64>,
        /// Enumeration guard per side.
        #[arg(long, default_value_t = 2_000_000)]
        limit: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConstructKind {
    /// All 0/1 vectors of weight m-1 paired with their complements.
    Simple {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u32,
    },
    /// Characteristic vectors of a ({0}, S)-set system file.
    SetSystem {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        m: u64,
    },
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn parse_epsilon(text: &str) -> Result<BigRational> {
    let trimmed = text.trim();
    let (whole, frac) = match trimmed.split_once('.') {
        Some((w, f)) => (w, f),
        None => (trimmed, ""),
    };
    let whole: BigInt = whole
        .parse()
        .map_err(|_| Error::InvariantViolation(format!("bad epsilon: {text}")))?;
    let mut value = BigRational::from_integer(whole);
    if !frac.is_empty() {
        let digits: BigInt = frac
            .parse()
            .map_err(|_| Error::InvariantViolation(format!("bad epsilon: {text}")))?;
        let scale = BigInt::from(10u8).pow(frac.len() as u32);
        value += BigRational::new(digits, scale);
    }
    Ok(value)
}

/// Runs one parsed invocation; the return value is the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    if cli.workers == 0 {
        return Err(Error::InvariantViolation("workers must be >= 1".into()));
    }
    let cache = Cache::resolve(cli.cache_dir.clone());
    match cli.command {
        Command::Points(args) => cmd_points(&args, cli.format, cli.pretty),
        Command::Graph { space, out } => cmd_graph(&space, out, &cache, cli.pretty),
        Command::Spectra { space, no_verify } => cmd_spectra(&space, no_verify, cli.pretty),
        Command::Bounds {
            semiprime,
            x,
            epsilon,
        } => cmd_bounds(&semiprime, x, &epsilon, cli.pretty),
        Command::Verify { files } => cmd_verify(&files, cli.workers),
        Command::Construct { kind } => cmd_construct(&kind),
        Command::Search { m, n, s, limit } => cmd_search(m, n, s.as_deref(), limit),
        Command::Figure1 => {
            print!("{}", figure1_text()?);
            Ok(0)
        }
        Command::OracleF {
            semiprime,
            x,
            cap_q,
            cap_p,
            limit,
        } => cmd_oracle_f(&semiprime, x, cap_q, cap_p, limit),
    }
}

fn cmd_points(args: &SpaceArgs, format: OutputFormat, pretty: bool) -> Result<i32> {
    let space = ProjectiveSpace::build(args.n, Modulus::new(args.m)?)?;
    if pretty {
        print!("{}", tuple_lines(&space));
        return Ok(0);
    }
    match format {
        OutputFormat::Csv => print!("{}", space.points_csv()),
        OutputFormat::Json => println!("{}", serde_json::to_string(&space.points_json())?),
    }
    Ok(0)
}

fn tuple_lines(space: &ProjectiveSpace) -> String {
    let mut out = String::new();
    for p in space.points() {
        let inner: Vec<String> = p.entries().iter().map(|e| e.to_string()).collect();
        let _ = writeln!(out, "({})", inner.join(", "));
    }
    out
}

/// The reference ordered point tables for (n, m) in (3,2), (3,3), (3,6).
pub fn figure1_text() -> Result<String> {
    let mut out = String::new();
    for (i, m) in [2u64, 3, 6].into_iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "P_{{3,{m}}}");
        let space = ProjectiveSpace::build(3, Modulus::new(m)?)?;
        out.push_str(&tuple_lines(&space));
    }
    Ok(out)
}

fn cmd_graph(
    args: &SpaceArgs,
    out: Option<PathBuf>,
    cache: &Cache,
    pretty: bool,
) -> Result<i32> {
    let (n, m) = (args.n, args.m);
    let a_name = format!("A_n{n}_m{m}.csv");
    let b_name = format!("B_n{n}_m{m}.csv");
    let summary_name = format!("graph_n{n}_m{m}.json");

    // One lazy build shared by all three artifacts; cache hits skip it.
    let mut built: Option<IncidenceStructure> = None;
    let mut events = Vec::new();
    let mut artifact = |name: &str, pick: &dyn Fn(&IncidenceStructure) -> Vec<u8>,
                        built: &mut Option<IncidenceStructure>|
     -> Result<Vec<u8>> {
        let (bytes, event) = cache.load_or_store(name, || {
            if built.is_none() {
                let space = ProjectiveSpace::build(n, Modulus::new(m)?)?;
                *built = Some(IncidenceStructure::build(space)?);
            }
            Ok(pick(built.as_ref().expect("just built")))
        })?;
        events.push((name.to_string(), event));
        Ok(bytes)
    };

    let a_csv = artifact(&a_name, &|inc| inc.adjacency().to_csv().into_bytes(), &mut built)?;
    let b_csv = artifact(&b_name, &|inc| inc.gram().to_csv().into_bytes(), &mut built)?;
    let summary = artifact(
        &summary_name,
        &|inc| {
            let mut bytes = serde_json::to_vec_pretty(&inc.summary()).expect("serializable");
            bytes.push(b'\n');
            bytes
        },
        &mut built,
    )?;

    for (name, event) in &events {
        if *event == CacheEvent::Poisoned {
            eprintln!("warning: cache entry {name} had a digest mismatch; recomputed");
        }
    }
    if let Some(dir) = out {
        std::fs::create_dir_all(&dir)?;
        std::fs::write(dir.join(&a_name), &a_csv)?;
        std::fs::write(dir.join(&b_name), &b_csv)?;
    }
    if pretty {
        let summary: crate::incidence::IncidenceSummary = serde_json::from_slice(&summary)?;
        println!(
            "G_{{{},{}}}  ell = {}  degree = {}  diagonal check: {}",
            summary.n, summary.m, summary.ell, summary.degree,
            if summary.diagonal_check { "ok" } else { "FAILED" }
        );
        return Ok(if summary.diagonal_check { 0 } else { 1 });
    }
    print!("{}", String::from_utf8_lossy(&summary));
    let summary: crate::incidence::IncidenceSummary = serde_json::from_slice(&summary)?;
    Ok(if summary.diagonal_check { 0 } else { 1 })
}

fn cmd_spectra(args: &SpaceArgs, no_verify: bool, pretty: bool) -> Result<i32> {
    let modulus = Modulus::new(args.m)?;
    if no_verify {
        let lines = predicted_spectrum(args.n, &modulus);
        if pretty {
            for line in &lines {
                println!("lambda = {:>8}  multiplicity = {}", line.eigenvalue, line.multiplicity);
            }
        } else {
            print_json(&serde_json::json!({
                "n": args.n,
                "m": args.m,
                "lines": lines,
                "verified": false,
            }))?;
        }
        return Ok(0);
    }
    let space = ProjectiveSpace::build(args.n, modulus)?;
    let inc = IncidenceStructure::build(space)?;
    let verification = verify_spectrum(&inc);
    if pretty {
        for line in &verification.lines {
            println!(
                "lambda = {:>8}  multiplicity = {:>5}  rank(B - lambda I) = {:>5}  {}",
                line.eigenvalue,
                line.multiplicity,
                line.rank,
                if line.verified { "ok" } else { "MISMATCH" }
            );
        }
    } else {
        print_json(&verification)?;
    }
    Ok(if verification.all_verified { 0 } else { 1 })
}

fn cmd_bounds(args: &SemiprimeArgs, x: Option<u64>, epsilon: &str, pretty: bool) -> Result<i32> {
    let epsilon = parse_epsilon(epsilon)?;
    let probe = BoundContext::new(args.n, args.p, args.q, 0)?;
    let x = x.unwrap_or_else(|| crate::arith::floor_pow_5_8(probe.ell));
    let ctx = BoundContext { x, ..probe };
    let report = evaluate_bounds(&ctx)?;
    let total = assemble_total(&report, &epsilon)?;
    let json = bound_report_json(&report, &total);
    if pretty {
        println!(
            "n = {}, p = {}, q = {}, x = {}", json.n, json.p, json.q, json.x
        );
        println!("kappa_p = {}, kappa_q = {}", json.kappa_p, json.kappa_q);
        println!("Delta            = {}/{}", json.delta.num, json.delta.den);
        println!("|psi|^2 upper    = {}/{}", json.psi_upper.num, json.psi_upper.den);
        println!("|N(X)| lower     = {}/{}", json.expanding_lower.num, json.expanding_lower.den);
        println!("family bound     = {}/{}", json.family_bound.num, json.family_bound.den);
        println!("total k bound    = {}/{}", json.total_bound.num, json.total_bound.den);
        println!("Dvir baseline    = {}", json.baseline_dvir);
        println!("ratio to target  = {}", json.ratio_to_target);
    } else {
        print_json(&json)?;
    }
    Ok(0)
}

fn verify_one(path: &PathBuf) -> Result<(crate::report::VerifyReportJson, bool)> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let fam = MatchingFamily::from_json(&value)?;
    let outcome = verify(&fam)?;
    let classes = classify(&fam);
    Ok((verify_report_json(&fam, &outcome, &classes), outcome.ok))
}

fn cmd_verify(files: &[PathBuf], workers: usize) -> Result<i32> {
    if files.is_empty() {
        return Err(Error::InvariantViolation(
            "verify needs at least one family file".into(),
        ));
    }
    let results: Vec<Result<(crate::report::VerifyReportJson, bool)>> = if workers <= 1 {
        files.iter().map(verify_one).collect()
    } else {
        // Fan out across a bounded pool; results keep input order.
        std::thread::scope(|scope| {
            let chunk = files.len().div_ceil(workers);
            let handles: Vec<_> = files
                .chunks(chunk)
                .map(|batch| scope.spawn(move || batch.iter().map(verify_one).collect::<Vec<_>>()))
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("verification worker panicked"))
                .collect()
        })
    };
    let mut all_ok = true;
    let mut reports = Vec::new();
    for result in results {
        let (report, ok) = result?;
        all_ok &= ok;
        reports.push(report);
    }
    if reports.len() == 1 {
        print_json(&reports[0])?;
    } else {
        print_json(&reports)?;
    }
    Ok(if all_ok { 0 } else { 1 })
}

fn cmd_construct(kind: &ConstructKind) -> Result<i32> {
    let fam = match kind {
        ConstructKind::Simple { m, n } => simple_construction(*m, *n)?,
        ConstructKind::SetSystem { input, m } => {
            let text = std::fs::read_to_string(input)?;
            let sys: SetSystem = serde_json::from_str(&text)?;
            from_set_system(&sys, *m)?
        }
    };
    debug_assert!(verify(&fam)?.ok);
    println!("{}", serde_json::to_string_pretty(&fam.to_json())?);
    Ok(0)
}

fn cmd_search(m: u64, n: u32, s: Option<&str>, limit: u64) -> Result<i32> {
    let s_set: Option<BTreeSet<u64>> = match s {
        None => None,
        Some(text) => Some(
            text.split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::InvariantViolation(format!("bad S entry: {tok}")))
                })
                .collect::<Result<BTreeSet<u64>>>()?,
        ),
    };
    let result = brute_force_max(m, n, s_set, limit)?;
    print_json(&search_report_json(m, n, &result))?;
    Ok(0)
}

fn cmd_oracle_f(
    args: &SemiprimeArgs,
    x: u64,
    cap_q: Option<u64>,
    cap_p: Option<u64>,
    limit: u64,
) -> Result<i32> {
    let mut ctx = BoundContext::new(args.n, args.p, args.q, x)?;
    if let (Some(kq), Some(kp)) = (cap_q, cap_p) {
        ctx = ctx.with_caps(kq, kp);
    } else if cap_q.is_some() || cap_p.is_some() {
        return Err(Error::InvariantViolation(
            "cap overrides must be given for both sides".into(),
        ));
    }
    let stars = star_vectors(&ctx)?;
    let f_star = crate::bounds::f_value(&ctx, &stars.a_star, &stars.b_star)?;

    // Exhaustive norm maximization per side; F is monotone in each squared
    // norm, so the sides maximize independently.
    let max_a = max_norm_enumerated(ctx.ell1 as usize, ctx.kappa_q, x, limit)?;
    let max_b = max_norm_enumerated(ctx.ell2 as usize, ctx.kappa_p, x, limit)?;
    let star_a: u128 = stars.a_star.iter().map(|&v| (v as u128) * v as u128).sum();
    let star_b: u128 = stars.b_star.iter().map(|&v| (v as u128) * v as u128).sum();
    let agree = max_a.0 == star_a && max_b.0 == star_b;
    print_json(&serde_json::json!({
        "x": x,
        "f_star": RationalJson::from(&f_star),
        "a_star_norm_sq": star_a.to_string(),
        "max_a_norm_sq": max_a.0.to_string(),
        "b_star_norm_sq": star_b.to_string(),
        "max_b_norm_sq": max_b.0.to_string(),
        "vectors_enumerated": (max_a.1 + max_b.1),
        "agree": agree,
    }))?;
    Ok(if agree { 0 } else { 1 })
}

/// Max squared norm over monotone capped weight-x vectors, with the count
/// of vectors enumerated. Errors out beyond `limit` enumerations.
fn max_norm_enumerated(len: usize, cap: u64, x: u64, limit: u64) -> Result<(u128, u64)> {
    fn recur(
        len: usize,
        max_entry: u64,
        remaining: u64,
        acc: u128,
        best: &mut u128,
        count: &mut u64,
        limit: u64,
    ) -> Result<()> {
        if len == 0 {
            if remaining == 0 {
                *count += 1;
                if *count > limit {
                    return Err(Error::LimitExceeded {
                        required: *count,
                        limit,
                    });
                }
                *best = (*best).max(acc);
            }
            return Ok(());
        }
        let slots_left = (len - 1) as u64;
        for v in (0..=max_entry.min(remaining)).rev() {
            if remaining - v <= slots_left * v {
                recur(
                    len - 1,
                    v,
                    remaining - v,
                    acc + (v as u128) * v as u128,
                    best,
                    count,
                    limit,
                )?;
            }
        }
        Ok(())
    }
    if x > cap * len as u64 {
        return Err(Error::XOutOfRange {
            x,
            min: 0,
            max: cap * len as u64,
        });
    }
    let mut best = 0u128;
    let mut count = 0u64;
    recur(len, cap, x, 0, &mut best, &mut count, limit)?;
    Ok((best, count))
}
