//! Command-line front end: verify registered identities, scan congruences,
//! and tabulate paircranks against series coefficients.
//!
//! Exit codes: 0 when everything passes, 1 on a mathematical mismatch,
//! 2 on a usage or configuration error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use sptpairs::bailey;
use sptpairs::registry::{
    congruence_scan, histogram_matches_series, residue_class_sums, CongruenceScan, DepthProfile,
    Outcome, Registry, VerificationReport, VerifyError,
};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

const PROFILE_ENV: &str = "SPTPAIRS_PROFILE";
/// Enumeration cap for the crank tabulation (brute force gets slow beyond it).
const CRANK_CAP: i64 = 40;

#[derive(Parser)]
#[command(
    name = "sptpairs",
    about = "Exact q-series verification for spt-type partition-pair identities and congruences",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify registered identities by truncated series comparison.
    Verify(VerifyArgs),
    /// Check the six partition-pair congruences with residue-class evidence.
    Congruences(CongruenceArgs),
    /// Tabulate a paircrank histogram against the series coefficients.
    Cranks(CrankArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Verify a single identity by id.
    #[arg(long, conflicts_with_all = ["all", "filter"])]
    id: Option<String>,
    /// Verify every identity whose id contains this substring.
    #[arg(long, conflicts_with = "all")]
    filter: Option<String>,
    /// Verify the whole registry.
    #[arg(long)]
    all: bool,
    /// Depth profile; defaults to the SPTPAIRS_PROFILE env var, then quick.
    #[arg(long)]
    profile: Option<String>,
    /// Override the verification depth (coefficients up to depth + 5 compared).
    #[arg(long)]
    depth: Option<i64>,
    /// Also run entries tagged `deep` (hour-scale certificate checks).
    #[arg(long)]
    include_deep: bool,
    /// Number of parallel verification jobs.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// List registered identity ids and exit.
    #[arg(long)]
    list: bool,
    /// Verify an external registry file instead of the built-in one.
    #[arg(long)]
    registry: Option<PathBuf>,
}

#[derive(Args)]
struct CongruenceArgs {
    /// Largest argument checked in each progression.
    #[arg(long, default_value_t = 100)]
    n_max: i64,
    /// Depth for the root-of-unity coefficient-vanishing checks.
    #[arg(long, default_value_t = 60)]
    vanishing_depth: i64,
    /// Cap for the residue-class (M-value) evidence tables.
    #[arg(long, default_value_t = 20)]
    class_cap: i64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CrankArgs {
    /// Partition-pair family, 1..=4.
    #[arg(long)]
    family: u8,
    /// The number being partitioned.
    #[arg(long)]
    n: i64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Congruences(args) => cmd_congruences(args),
        Command::Cranks(args) => cmd_cranks(args),
    }
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {}", msg);
    ExitCode::from(2)
}

fn resolve_profile(arg: &Option<String>) -> Result<DepthProfile, String> {
    let source = arg
        .clone()
        .or_else(|| std::env::var(PROFILE_ENV).ok())
        .unwrap_or_else(|| "quick".into());
    DepthProfile::parse(&source)
        .ok_or_else(|| format!("unknown profile '{}' (expected quick or certificate)", source))
}

fn configure_jobs(jobs: Option<usize>) -> Result<(), String> {
    if let Some(n) = jobs {
        if n == 0 {
            return Err("--jobs must be at least 1".into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn write_out(path: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| e.to_string()),
        None => {
            print!("{}", content);
            std::io::stdout().flush().ok();
            Ok(())
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> ExitCode {
    let registry = match &args.registry {
        Some(path) => match Registry::from_file(path) {
            Ok(r) => r,
            Err(e) => return usage_error(&e.to_string()),
        },
        None => Registry::builtin(),
    };
    if args.list {
        let mut out = String::new();
        for spec in registry.entries() {
            out.push_str(&format!(
                "{}  (depth {}, certificate {}{})\n",
                spec.id,
                spec.default_depth,
                spec.certificate_depth,
                if spec.tags.is_empty() {
                    String::new()
                } else {
                    format!(", tags: {}", spec.tags.join(" "))
                }
            ));
        }
        return match write_out(&args.output, &out) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => usage_error(&e),
        };
    }
    let profile = match resolve_profile(&args.profile) {
        Ok(p) => p,
        Err(e) => return usage_error(&e),
    };
    if args.depth.is_some_and(|d| d < 0) {
        return usage_error("--depth must be non-negative");
    }
    if let Err(e) = configure_jobs(args.jobs) {
        return usage_error(&e);
    }
    let reports: Vec<VerificationReport> = if let Some(id) = &args.id {
        match registry.verify(id, profile, args.depth) {
            Ok(report) => vec![report],
            Err(VerifyError::UnknownTheorem(id)) => {
                return usage_error(&format!("unknown theorem id '{}'", id))
            }
            Err(e) => return usage_error(&e.to_string()),
        }
    } else if args.all || args.filter.is_some() {
        let filter = args.filter.as_deref();
        if let Some(f) = filter {
            if registry.matching(f).is_empty() {
                return usage_error(&format!("filter '{}' matches no identities", f));
            }
        }
        if let Some(depth) = args.depth {
            // a depth override applies entry by entry
            let mut reports = Vec::new();
            for spec in registry.entries() {
                let keep = filter.map(|f| spec.id.contains(f)).unwrap_or(true)
                    && (args.include_deep || !spec.has_tag("deep"));
                if keep {
                    reports.push(
                        registry
                            .verify(&spec.id, profile, Some(depth))
                            .expect("id from registry"),
                    );
                }
            }
            reports
        } else {
            registry.run_all(profile, filter, args.include_deep)
        }
    } else {
        return usage_error("choose one of --id, --filter, or --all (or --list)");
    };

    let rendered = match args.format {
        Format::Text => render_reports_text(&reports),
        Format::Json => match serde_json::to_string_pretty(&reports) {
            Ok(s) => s + "\n",
            Err(e) => return usage_error(&e.to_string()),
        },
        Format::Csv => render_reports_csv(&reports),
    };
    if let Err(e) = write_out(&args.output, &rendered) {
        return usage_error(&e);
    }
    if reports.iter().all(|r| r.outcome.is_pass()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn render_reports_text(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    for r in reports {
        match &r.outcome {
            Outcome::Pass => out.push_str(&format!(
                "PASS {} (<= q^{}, {} coefficients, {} ms)\n",
                r.id, r.depth, r.coefficients, r.ms
            )),
            Outcome::Fail { witness } => out.push_str(&format!(
                "FAIL {} at q^{}: lhs = {}, rhs = {} ({} ms)\n",
                r.id, witness.exponent, witness.lhs, witness.rhs, r.ms
            )),
            Outcome::Error { message } => {
                out.push_str(&format!("ERROR {}: {} ({} ms)\n", r.id, message, r.ms))
            }
        }
    }
    let passed = reports.iter().filter(|r| r.outcome.is_pass()).count();
    out.push_str(&format!("{}/{} passed\n", passed, reports.len()));
    out
}

fn render_reports_csv(reports: &[VerificationReport]) -> String {
    let mut out = String::from("id,depth,outcome,exponent,lhs,rhs,coefficients,ms\n");
    for r in reports {
        let (outcome, e, l, rr) = match &r.outcome {
            Outcome::Pass => ("pass", String::new(), String::new(), String::new()),
            Outcome::Fail { witness } => (
                "fail",
                witness.exponent.clone(),
                witness.lhs.clone(),
                witness.rhs.clone(),
            ),
            Outcome::Error { message } => ("error", String::new(), message.clone(), String::new()),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.id, r.depth, outcome, e, l, rr, r.coefficients, r.ms
        ));
    }
    out
}

fn cmd_congruences(args: CongruenceArgs) -> ExitCode {
    if args.n_max < 1 {
        return usage_error("--n-max must be at least 1");
    }
    let scans: Vec<CongruenceScan> = bailey::CONGRUENCES
        .iter()
        .map(|&(family, modulus, residue)| {
            congruence_scan(
                family,
                modulus,
                residue,
                args.n_max,
                Some(args.vanishing_depth),
            )
        })
        .collect();
    let all_ok = scans
        .iter()
        .all(|s| s.all_divisible && s.vanishing_holds != Some(false));

    let rendered = match args.format {
        Format::Json => match serde_json::to_string_pretty(&scans) {
            Ok(s) => s + "\n",
            Err(e) => return usage_error(&e.to_string()),
        },
        Format::Csv => {
            let mut out = String::from("i,ell,r,n,pp_i,residue\n");
            for s in &scans {
                for inst in &s.instances {
                    out.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        s.family, s.modulus, s.residue, inst.n, inst.value, inst.residue
                    ));
                }
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for s in &scans {
                out.push_str(&format!(
                    "pp_{}({}n+{}) mod {}: {} over {} instances (arguments <= {}){}\n",
                    s.family,
                    s.modulus,
                    s.residue,
                    s.modulus,
                    if s.all_divisible { "PASS" } else { "FAIL" },
                    s.instances.len(),
                    s.n_max,
                    match s.vanishing_holds {
                        Some(true) => format!(
                            "; coefficient vanishing at zeta_{} to q^{}: PASS",
                            s.modulus,
                            s.vanishing_depth.unwrap()
                        ),
                        Some(false) => format!(
                            "; coefficient vanishing at zeta_{} to q^{}: FAIL",
                            s.modulus,
                            s.vanishing_depth.unwrap()
                        ),
                        None => String::new(),
                    }
                ));
            }
            // residue-class evidence: the class sums M_i(k, l, n) agree on
            // each congruence progression
            out.push_str("\nresidue-class evidence (class sums of M_i(m, n) mod l):\n");
            for &(family, modulus, residue) in &bailey::CONGRUENCES {
                let cap = args.class_cap;
                let f = bailey::pp_direct_bivariate(family, cap + 1);
                let mut arg = if residue == 0 { modulus } else { residue };
                while arg <= cap {
                    let sums = residue_class_sums(&f, modulus, arg);
                    let equal = sums.windows(2).all(|w| w[0] == w[1]);
                    out.push_str(&format!(
                        "  i={} l={} n={}: [{}] {}\n",
                        family,
                        modulus,
                        arg,
                        sums.iter()
                            .map(|s| s.to_string())
                            .collect::<Vec<_>>()
                            .join(", "),
                        if equal { "equal" } else { "NOT EQUAL" }
                    ));
                    arg += modulus;
                }
            }
            out
        }
    };
    if let Err(e) = write_out(&args.output, &rendered) {
        return usage_error(&e);
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_cranks(args: CrankArgs) -> ExitCode {
    if !(1..=4).contains(&args.family) {
        return usage_error("--family must be 1..=4");
    }
    if args.n < 1 {
        return usage_error("--n must be at least 1");
    }
    if args.n > CRANK_CAP {
        return usage_error(&format!("--n exceeds the enumeration cap ({})", CRANK_CAP));
    }
    let (hist, agrees) = histogram_matches_series(args.family, args.n);
    let rendered = match args.format {
        Format::Json => {
            let hist_json: Vec<(i64, String)> =
                hist.iter().map(|(m, c)| (*m, c.to_string())).collect();
            let value = serde_json::json!({
                "family": args.family,
                "n": args.n,
                "histogram": hist_json,
                "series_agreement": agrees,
            });
            format!("{}\n", serde_json::to_string_pretty(&value).unwrap())
        }
        Format::Csv => {
            let mut out = String::from("m,count\n");
            for (m, c) in &hist {
                out.push_str(&format!("{},{}\n", m, c));
            }
            out
        }
        Format::Text => {
            let total: sptpairs::Int = hist.values().cloned().sum();
            let mut out = format!(
                "paircrank_{} histogram for n = {} ({} pairs):\n",
                args.family, args.n, total
            );
            if hist.is_empty() {
                out.push_str("  (empty)\n");
            }
            for (m, c) in &hist {
                out.push_str(&format!("  m = {:>4}: {}\n", m, c));
            }
            out.push_str(&format!(
                "series coefficients M_{}(m, {}) agree: {}\n",
                args.family,
                args.n,
                if agrees { "yes" } else { "NO" }
            ));
            out
        }
    };
    print!("{}", rendered);
    if agrees {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
