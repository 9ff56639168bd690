use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use mertens_core::constants::{ratio_table, rh_refinement_diagnostic, ConstantsTable};
use mertens_core::expansion::{generate_r4, generate_sk, r2_expansion, r3_expansion, Expansion};
use mertens_core::oracle::{r3_identity, r4_identity, rk_sieve, sk_recursive, OracleResult};
use mertens_core::polylog::{polylog_bound_suite, default_grid};
use mertens_core::primes::PrimeStore;
use mertens_core::zetaprime::{eta_coeffs, prime_zeta, zeta};
use mertens_core::HPReal;

use crate::config::{parse_count, ConfigLayer, OutputFormat, RunConfig};
use crate::emit::{render, Provenance, Table};
use crate::error::CliError;
use crate::suites::{self, Ctx, SuiteReport};

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "mertens", version, about = "Higher Mertens constants, almost-prime expansions and their checks")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Working precision in bits.
    #[arg(long, global = true, env = "MERTENS_PREC_BITS")]
    prec: Option<u32>,

    /// Sieve limit for the prime store (accepts forms like 1e8).
    #[arg(long, global = true, value_parser = parse_count)]
    prime_limit: Option<u64>,

    /// Directory for the prime store cache.
    #[arg(long, global = true, env = "MERTENS_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    /// Shorthand for `--format json`.
    #[arg(long, global = true, conflicts_with = "format")]
    json: bool,

    /// Flat `key = value` config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads (default: all logical cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Prime store management.
    #[command(subcommand)]
    Primes(PrimesCmd),
    /// Higher Mertens constants.
    #[command(subcommand)]
    Constants(ConstantsCmd),
    /// Zeta, prime zeta and eta coefficients.
    #[command(subcommand)]
    Zeta(ZetaCmd),
    /// Asymptotic expansions of S_k and R_k.
    #[command(subcommand)]
    Expand(ExpandCmd),
    /// Brute-force evaluations at finite x.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Negative-order polylogarithm bounds.
    #[command(subcommand)]
    Polylog(PolylogCmd),
    /// Verification suites.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Debug, Subcommand)]
enum PrimesCmd {
    /// Sieve and cache prefix sums up to the prime limit.
    Build {
        #[arg(long, value_parser = parse_count)]
        limit: Option<u64>,
    },
}

#[derive(Debug, Subcommand)]
enum ConstantsCmd {
    /// alpha_j with error budgets.
    Alpha {
        /// A single index.
        #[arg(long, conflicts_with = "jmax")]
        j: Option<usize>,
        #[arg(long, default_value_t = 10)]
        jmax: usize,
    },
    /// alpha_j against its leading asymptotic j! 2^j / (2 j^2).
    Table {
        #[arg(long, default_value_t = 26)]
        jmax: usize,
    },
}

#[derive(Debug, Subcommand)]
enum ZetaCmd {
    /// zeta(s) and P(s) for real s > 1.
    Eval {
        #[arg(long)]
        s: String,
    },
    /// Taylor coefficients eta_j of -zeta'/zeta - 1/(s-1) at s = 1.
    Eta {
        #[arg(long, default_value_t = 20)]
        jmax: usize,
    },
}

#[derive(Debug, Args)]
struct ExpandArgs {
    #[arg(long)]
    k: u32,
    /// Truncation order in 1/log x.
    #[arg(long, default_value_t = 3)]
    n: u32,
    /// Evaluate at x instead of listing coefficients.
    #[arg(long, value_parser = parse_count)]
    x: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum ExpandCmd {
    /// S_k(x), ordered k-tuples of primes.
    Sk(ExpandArgs),
    /// R_k(x), integers with exactly k prime factors.
    Rk(ExpandArgs),
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long)]
    k: u32,
    #[arg(long, value_parser = parse_count)]
    x: u64,
}

#[derive(Debug, Subcommand)]
enum OracleCmd {
    /// R_k(x) from an Omega sieve.
    Rk(OracleArgs),
    /// S_k(x) by recursion over prime prefix sums.
    Sk(OracleArgs),
    /// R_3 and R_4 decompositions at finite x.
    IdentitySuite {
        #[arg(long, value_delimiter = ',', value_parser = parse_count, default_value = "1e4,1e5,1e6")]
        x: Vec<u64>,
    },
}

#[derive(Debug, Subcommand)]
enum PolylogCmd {
    /// Bounds relating Li_{-k}(1/x) to the integral of t^k x^-t.
    Verify {
        #[arg(long, default_value_t = 200)]
        kmax: u32,
    },
}

#[derive(Debug, Subcommand)]
enum VerifyCmd {
    /// Every acceptance criterion, or reduced module suites with --quick.
    All {
        #[arg(long)]
        quick: bool,
    },
}

/// Significant decimal digits worth printing at `prec` bits.
fn digits(prec: u32) -> usize {
    ((prec as f64 * std::f64::consts::LOG10_2) as usize).saturating_sub(4).max(10)
}

fn fixed(v: &HPReal, prec: u32) -> String {
    // keep `digits` significant digits for values of modest size
    let mag = v.abs().to_f64();
    let int_digits = if mag >= 1.0 { mag.log10().floor() as usize + 1 } else { 0 };
    v.fmt_fixed(digits(prec).saturating_sub(int_digits).max(1))
}

fn sci(v: &HPReal) -> String {
    v.fmt_sci(3)
}

struct Out<'a> {
    cfg: &'a RunConfig,
    w: &'a mut dyn Write,
}

impl Out<'_> {
    fn provenance(&self) -> Provenance {
        Provenance::new(self.cfg.prec_bits, self.cfg.prime_limit)
    }

    fn table(&mut self, command: &str, table: &Table, prov: Provenance) -> Result<()> {
        let s = render(table, self.cfg.output_format, command, &prov);
        self.w.write_all(s.as_bytes())?;
        Ok(())
    }
}

fn oracle_table(r: &OracleResult) -> Table {
    let mut t = Table::new(["quantity", "x", "k", "value", "abs_error_budget"]);
    t.push([
        r.quantity.clone(),
        r.x.to_string(),
        r.k_or_j.to_string(),
        fixed(&r.value, 100),
        sci(&r.abs_error_budget),
    ]);
    t
}

fn expansion_table(e: &Expansion, prec: u32) -> Table {
    let mut t = Table::new(["llx_pow", "inv_log_pow", "coeff"]);
    for term in e.terms() {
        t.push([term.llx_pow.to_string(), term.lx_pow.to_string(), fixed(&term.coeff, prec)]);
    }
    t
}

fn expansion_for(kind: &str, a: &ExpandArgs, consts: &ConstantsTable) -> Result<Expansion> {
    Ok(match (kind, a.k) {
        ("sk", k) => generate_sk(k, a.n, consts)?,
        ("rk", 2) => r2_expansion(a.n, consts)?,
        ("rk", 3) => r3_expansion(a.n, consts)?,
        ("rk", 4) => generate_r4(a.n, consts)?,
        (_, k) => return Err(CliError::Usage(format!("R_k expansions are available for k in 2..=4, not {k}"))),
    })
}

fn suite_output(out: &mut Out, command: &str, reports: &[SuiteReport], prov: Provenance) -> Result<()> {
    if out.cfg.output_format == OutputFormat::Text {
        for r in reports {
            writeln!(out.w, "{}", r.line())?;
        }
    } else {
        let mut t = Table::new(["suite", "name", "result", "summary"]);
        for r in reports {
            t.push([r.id.clone(), r.name.clone(), if r.passed { "pass" } else { "fail" }.into(), r.summary.clone()]);
        }
        out.table(command, &t, prov)?;
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        for r in reports.iter().filter(|r| !r.passed) {
            for d in &r.details {
                log::warn!("{}: {d}", r.id);
            }
        }
        return Err(CliError::VerificationFailed {
            failed,
            total: reports.len(),
        });
    }
    Ok(())
}

fn dispatch(cmd: Command, cfg: &RunConfig, w: &mut dyn Write) -> Result<()> {
    let prec = cfg.prec_bits;
    let mut out = Out { cfg, w };
    match cmd {
        Command::Primes(PrimesCmd::Build { limit }) => {
            let limit = limit.unwrap_or(cfg.prime_limit);
            std::fs::create_dir_all(&cfg.cache_dir)?;
            let store = PrimeStore::open(limit, prec, &cfg.cache_dir)?;
            let mut t = Table::new(["limit", "prime_count", "sum_recip_primes", "cache_dir"]);
            t.push([
                store.limit().to_string(),
                store.prime_count(store.limit())?.to_string(),
                fixed(&store.mertens_prefix(store.limit())?, prec),
                cfg.cache_dir.display().to_string(),
            ]);
            let prov = out.provenance().with("limit", store.limit());
            out.table("primes build", &t, prov)
        }
        Command::Constants(ConstantsCmd::Alpha { j, jmax }) => {
            let (lo, hi) = match j {
                Some(0) => return Err(CliError::Usage("alpha_j needs j >= 1".into())),
                Some(j) => (j, j),
                None => (1, jmax),
            };
            let c = ConstantsTable::build(hi, 2, prec)?;
            let mut t = Table::new(["j", "alpha", "abs_error_budget"]);
            for j in lo..=hi {
                let budget = c.budget(&format!("alpha[{j}]")).map_or("-".into(), sci);
                t.push([j.to_string(), fixed(c.alpha(j)?, prec), budget]);
            }
            let prov = out.provenance().with("jmax", hi);
            out.table("constants alpha", &t, prov)
        }
        Command::Constants(ConstantsCmd::Table { jmax }) => {
            let rows = ratio_table(jmax, prec)?;
            let diag = rh_refinement_diagnostic(&rows);
            let mut t = Table::new(["j", "ratio", "ratio_cut6", "rh_diagnostic"]);
            for ((j, r), (_, d)) in rows.iter().zip(&diag) {
                let cut = (r.to_f64() * 1e6).floor() / 1e6;
                t.push([j.to_string(), fixed(r, prec), format!("{cut:.6}"), format!("{d:.6e}")]);
            }
            let prov = out.provenance().with("jmax", jmax);
            out.table("constants table", &t, prov)
        }
        Command::Zeta(ZetaCmd::Eval { s }) => {
            let sv = HPReal::parse(&s, prec)?;
            let mut t = Table::new(["s", "zeta", "prime_zeta"]);
            t.push([s, fixed(&zeta(&sv)?, prec), fixed(&prime_zeta(&sv)?, prec)]);
            let prov = out.provenance();
            out.table("zeta eval", &t, prov)
        }
        Command::Zeta(ZetaCmd::Eta { jmax }) => {
            let e = eta_coeffs(jmax, prec)?;
            let mut t = Table::new(["j", "eta"]);
            for (j, v) in e.values.iter().enumerate() {
                t.push([j.to_string(), fixed(v, prec)]);
            }
            let prov = out.provenance().with("jmax", jmax);
            out.table("zeta eta", &t, prov)
        }
        Command::Expand(sub) => {
            let (kind, a) = match &sub {
                ExpandCmd::Sk(a) => ("sk", a),
                ExpandCmd::Rk(a) => ("rk", a),
            };
            let consts = ConstantsTable::build((a.n as usize).max(1), 4, prec)?;
            let e = expansion_for(kind, a, &consts)?;
            let mut prov = out.provenance().with("k", a.k).with("n", a.n);
            if kind == "rk" && a.k == 4 && a.n >= 3 {
                prov = prov.with("t_j_for_j_ge_3", "computed, no published closed form");
            }
            let command = format!("expand {kind}");
            match a.x {
                Some(x) => {
                    let v = e.eval(&HPReal::from_u64(x, prec))?;
                    let mut t = Table::new(["x", "n", "value"]);
                    t.push([x.to_string(), a.n.to_string(), fixed(&v, prec)]);
                    out.table(&command, &t, prov.with("x", x))
                }
                None => out.table(&command, &expansion_table(&e, prec), prov),
            }
        }
        Command::Oracle(OracleCmd::Rk(a)) => {
            let r = rk_sieve(a.k, a.x)?;
            let prov = out.provenance().with("x", a.x);
            out.table("oracle rk", &oracle_table(&r), prov)
        }
        Command::Oracle(OracleCmd::Sk(a)) => {
            let r = sk_recursive(a.k, a.x)?;
            let prov = out.provenance().with("x", a.x);
            out.table("oracle sk", &oracle_table(&r), prov)
        }
        Command::Oracle(OracleCmd::IdentitySuite { x }) => {
            let tol = cfg.tolerance("identities", 1e-10);
            let mut t = Table::new(["identity", "x", "lhs", "rhs", "abs_diff", "budget", "holds"]);
            let mut failed = 0;
            for &xv in &x {
                for chk in [r3_identity(xv)?, r4_identity(xv)?] {
                    let ok = chk.holds() && chk.diff < tol;
                    failed += !ok as usize;
                    t.push([
                        chk.name.clone(),
                        xv.to_string(),
                        fixed(&chk.lhs, 100),
                        fixed(&chk.rhs, 100),
                        format!("{:.3e}", chk.diff),
                        format!("{:.3e}", chk.budget),
                        ok.to_string(),
                    ]);
                }
            }
            let prov = out.provenance().with("tolerance", tol);
            out.table("oracle identity-suite", &t, prov)?;
            if failed > 0 {
                return Err(CliError::VerificationFailed {
                    failed,
                    total: t.rows.len(),
                });
            }
            Ok(())
        }
        Command::Polylog(PolylogCmd::Verify { kmax }) => {
            let grid = default_grid(prec);
            let rep = polylog_bound_suite(&grid, kmax, prec)?;
            let mut t = Table::new(["check", "x", "cases", "failures", "detail"]);
            for (name, checks) in [
                ("sum_vs_integral", &rep.sum_vs_integral),
                ("integral_sandwich", &rep.integral_sandwich),
            ] {
                for g in &grid {
                    let mine: Vec<_> = checks.iter().filter(|c| c.x == g.label).collect();
                    let bad = mine.iter().filter(|c| !c.holds).count();
                    t.push([name.into(), g.label.clone(), mine.len().to_string(), bad.to_string(), String::new()]);
                }
            }
            let bad = rep.stirling.iter().filter(|c| !c.holds).count();
            t.push(["stirling".into(), "-".into(), rep.stirling.len().to_string(), bad.to_string(), String::new()]);
            for (x, mid, last) in &rep.ratio_tail {
                t.push([
                    "ratio_tail".into(),
                    x.clone(),
                    "2".into(),
                    "0".into(),
                    format!("|ratio-1| {mid:.3e} at k={} and {last:.3e} at k={kmax}", kmax / 2),
                ]);
            }
            t.push([
                "polylog_constant".into(),
                rep.polylog_constant_at.1.clone(),
                "1".into(),
                "0".into(),
                format!("max {:.6} at j={}", rep.polylog_constant, rep.polylog_constant_at.0),
            ]);
            let prov = out.provenance().with("kmax", kmax);
            out.table("polylog verify", &t, prov)?;
            if !rep.all_pass {
                let failed = rep.failures().len();
                return Err(CliError::VerificationFailed {
                    failed,
                    total: rep.sum_vs_integral.len() + rep.integral_sandwich.len() + rep.stirling.len(),
                });
            }
            Ok(())
        }
        Command::Verify(VerifyCmd::All { quick }) => {
            let ctx = Ctx::new(cfg.clone());
            let (reports, name) = if quick {
                (suites::quick(&ctx)?, "verify all --quick")
            } else {
                (suites::acceptance(&ctx)?, "verify all")
            };
            let prov = out.provenance().with("mode", if quick { "quick" } else { "full" });
            suite_output(&mut out, name, &reports, prov)
        }
    }
}

fn resolve(g: &GlobalArgs) -> Result<RunConfig> {
    let file = match &g.config {
        Some(p) => ConfigLayer::load(p)?,
        None => ConfigLayer::default(),
    };
    let flags = ConfigLayer {
        prec_bits: g.prec,
        prime_limit: g.prime_limit,
        cache_dir: g.cache_dir.clone(),
        output_format: if g.json { Some(OutputFormat::Json) } else { g.format },
        threads: g.threads,
        suite_tolerances: Default::default(),
    };
    RunConfig::resolve(&[&file, &flags])
}

/// Runs one invocation, writing results to `out` and diagnostics to
/// `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 {
                write!(out, "{}", e.render())
            } else {
                write!(err, "{}", e.render())
            };
            return code;
        }
    };
    let result = resolve(&cli.global).and_then(|cfg| {
        let mut pool = rayon::ThreadPoolBuilder::new();
        if let Some(n) = cfg.threads {
            pool = pool.num_threads(n);
        }
        let pool = pool.build().map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
        // commands write into a buffer so the pool needs no handle on `out`
        let mut buf = Vec::new();
        let r = pool.install(|| dispatch(cli.command, &cfg, &mut buf));
        out.write_all(&buf)?;
        r
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
