//! Command-line surface: exact correlator evaluation, table enumeration,
//! W_r rendering, and the verification suites, with optional JSON-lines
//! cache persistence.

use std::collections::HashSet;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::cache;
use crate::closedforms;
use crate::correlators::Engine;
use crate::scalar::fmt_rat;
use crate::smallphase;
use crate::wrpoly;
use crate::{Error, Rat, Result};

#[derive(Parser, Debug)]
#[command(name = "rspin", version, about = "Exact r-spin intersection numbers")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Output {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute a single correlator ⟨τ_{n1,m1}...⟩_g.
    Compute {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        genus: u32,
        /// Insertions as "n,m;n,m;..." (order-insensitive).
        #[arg(long)]
        ins: String,
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        output: Output,
        /// Truncation depth override for the operator root.
        #[arg(long)]
        depth: Option<u32>,
    },
    /// Enumerate all admissible correlators with g <= gmax, s <= smax.
    Table {
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 1)]
        gmax: u32,
        #[arg(long, default_value_t = 2)]
        smax: u32,
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        output: Output,
        #[arg(long)]
        depth: Option<u32>,
    },
    /// Print the universal differential polynomial W_r(z).
    Wr {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long)]
        depth: Option<u32>,
    },
    /// Run a named verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        r: Option<u32>,
        #[arg(long)]
        gmax: Option<u32>,
        #[arg(long)]
        smax: Option<u32>,
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long)]
        depth: Option<u32>,
    },
}

/// Entry point; returns the process exit code (0 ok, 1 verification
/// failure, 2 usage error).
pub fn run<I, S>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // clap renders its own message; --help/--version are "errors"
            // with exit code 0
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(out, "{e}");
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(Error::Usage(msg)) => {
            let _ = writeln!(out, "error: {msg}");
            2
        }
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            1
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Compute {
            r,
            genus,
            ins,
            cache,
            output,
            depth,
        } => {
            check_r(r)?;
            let ins = parse_insertions(&ins, r)?;
            let mut engine = engine_for(r, depth, cache.as_deref())?;
            let loaded = match cache.as_deref() {
                Some(p) => cache::load_correlators(p, &mut engine)?,
                None => HashSet::new(),
            };
            let val = engine.correlator(genus, &ins);
            if let Some(p) = cache.as_deref() {
                cache::append_correlators(p, &engine, &loaded)?;
            }
            emit_record(out, output, r, genus, &ins, &val, true)?;
            Ok(0)
        }
        Command::Table {
            r,
            gmax,
            smax,
            cache,
            output,
            depth,
        } => {
            check_r(r)?;
            let mut engine = engine_for(r, depth, cache.as_deref())?;
            let loaded = match cache.as_deref() {
                Some(p) => cache::load_correlators(p, &mut engine)?,
                None => HashSet::new(),
            };
            if output == Output::Csv {
                writeln!(out, "r,g,ins,value").map_err(io_err)?;
            }
            for (g, ins) in admissible_keys(r, gmax, smax) {
                let val = engine.correlator(g, &ins);
                emit_record(out, output, r, g, &ins, &val, false)?;
            }
            if let Some(p) = cache.as_deref() {
                cache::append_correlators(p, &engine, &loaded)?;
            }
            Ok(0)
        }
        Command::Wr { r, cache, depth } => {
            check_r(r)?;
            let wr = cache::wr_cached(
                cache.as_deref().map(wr_cache_path).as_deref(),
                r,
                depth.unwrap_or(r + 2),
            )?;
            write!(out, "{wr}").map_err(io_err)?;
            Ok(0)
        }
        Command::Verify {
            suite,
            r,
            gmax,
            smax,
            cache,
            depth,
        } => {
            let _ = smax;
            verify(&suite, r, gmax, cache.as_deref(), depth, out)
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Cache(format!("write: {e}"))
}

fn check_r(r: u32) -> Result<()> {
    if r < 2 {
        return Err(Error::Usage(format!("r must be >= 2, got {r}")));
    }
    Ok(())
}

/// The W_r cache lives beside the correlator cache with a `.wr` suffix.
fn wr_cache_path(cache: &Path) -> PathBuf {
    let mut os = cache.as_os_str().to_os_string();
    os.push(".wr");
    PathBuf::from(os)
}

fn engine_for(r: u32, depth: Option<u32>, cache: Option<&Path>) -> Result<Engine> {
    let depth = depth.unwrap_or(r + 2);
    if depth < r + 2 {
        return Err(Error::Usage(format!(
            "depth must be at least r+2 = {}",
            r + 2
        )));
    }
    let wr = cache::wr_cached(cache.map(wr_cache_path).as_deref(), r, depth)?;
    Ok(Engine::with_wr(wr))
}

/// Parse "n,m;n,m;..." into insertion pairs.
pub fn parse_insertions(s: &str, r: u32) -> Result<Vec<(u32, u32)>> {
    let mut out = Vec::new();
    for part in s.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (n, m) = part
            .split_once(',')
            .ok_or_else(|| Error::Usage(format!("malformed insertion '{part}', expected n,m")))?;
        let n: u32 = n
            .trim()
            .parse()
            .map_err(|_| Error::Usage(format!("bad descendent index '{n}'")))?;
        let m: u32 = m
            .trim()
            .parse()
            .map_err(|_| Error::Usage(format!("bad spin index '{m}'")))?;
        if m > r - 1 {
            return Err(Error::Usage(format!(
                "spin index {m} out of range 0..{}",
                r - 1
            )));
        }
        out.push((n, m));
    }
    if out.is_empty() {
        return Err(Error::Usage("no insertions given".into()));
    }
    Ok(out)
}

fn emit_record(
    out: &mut dyn Write,
    output: Output,
    r: u32,
    g: u32,
    ins: &[(u32, u32)],
    val: &Rat,
    bare_text: bool,
) -> Result<()> {
    match output {
        Output::Text => {
            if bare_text {
                writeln!(out, "{}", fmt_rat(val)).map_err(io_err)?;
            } else {
                let taus: Vec<String> = ins
                    .iter()
                    .map(|(n, m)| format!("tau_{{{n},{m}}}"))
                    .collect();
                writeln!(out, "<{}>_{} = {}", taus.join(" "), g, fmt_rat(val)).map_err(io_err)?;
            }
        }
        Output::Json => {
            let rec = serde_json::json!({
                "r": r, "g": g, "ins": ins, "val": fmt_rat(val),
            });
            writeln!(out, "{rec}").map_err(io_err)?;
        }
        Output::Csv => {
            let ins_s: Vec<String> = ins.iter().map(|(n, m)| format!("{n},{m}")).collect();
            writeln!(out, "{},{},\"{}\",{}", r, g, ins_s.join(";"), fmt_rat(val))
                .map_err(io_err)?;
        }
    }
    Ok(())
}

/// All admissible keys with g <= gmax, s <= smax, spin indices in [0, r-2],
/// sorted deterministically.
pub fn admissible_keys(r: u32, gmax: u32, smax: u32) -> Vec<(u32, Vec<(u32, u32)>)> {
    let mut keys = Vec::new();
    for g in 0..=gmax {
        let smin = if g == 0 { 3 } else { 1 };
        for s in smin..=smax {
            let total = (r as i64 + 1) * (2 * g as i64 - 2) + (r * s) as i64;
            if total < 0 {
                continue;
            }
            let mut acc: Vec<(u32, u32)> = Vec::new();
            collect_keys(r, s, total, (0, 0), &mut acc, &mut |ins| {
                keys.push((g, ins.to_vec()));
            });
        }
    }
    keys
}

fn collect_keys(
    r: u32,
    slots: u32,
    total: i64,
    min_pair: (u32, u32),
    acc: &mut Vec<(u32, u32)>,
    sink: &mut impl FnMut(&[(u32, u32)]),
) {
    if slots == 0 {
        if total == 0 {
            sink(acc);
        }
        return;
    }
    let nmax = total / r as i64;
    for n in min_pair.0 as i64..=nmax {
        let m_lo = if n == min_pair.0 as i64 {
            min_pair.1
        } else {
            0
        };
        for m in m_lo..=(r - 2) {
            let code = r as i64 * n + m as i64;
            if code > total {
                break;
            }
            acc.push((n as u32, m));
            collect_keys(r, slots - 1, total - code, (n as u32, m), acc, sink);
            acc.pop();
        }
    }
}

type CheckLine = (String, bool);

fn verify(
    suite: &str,
    r: Option<u32>,
    gmax: Option<u32>,
    cache: Option<&Path>,
    depth: Option<u32>,
    out: &mut dyn Write,
) -> Result<i32> {
    let lines: Vec<CheckLine> = match suite.to_ascii_lowercase().as_str() {
        "euler" => suite_euler(gmax.unwrap_or(8)),
        "crossoracle" => suite_crossoracle(r.unwrap_or(4), gmax.unwrap_or(2), cache, depth)?,
        "conjecture" => {
            let r = r.unwrap_or(5);
            check_r(r)?;
            let mut engine = engine_for(r, depth, cache)?;
            let report = smallphase::conjecture_scan(&mut engine)?;
            writeln!(out, "{}", serde_json::to_string(&report).expect("report is serializable"))
                .map_err(io_err)?;
            vec![(
                format!("conjecture scan r={r}: {} correlators checked", report.checked),
                report.clean(),
            )]
        }
        "appendixa" => suite_appendix_a(),
        "appendixb" => suite_appendix_b(r.unwrap_or(7)),
        "appendixc" => suite_appendix_c(gmax.unwrap_or(20)),
        "onepoint" => suite_onepoint(r.unwrap_or(5), gmax.unwrap_or(3)),
        "boussinesq" => suite_boussinesq(gmax.unwrap_or(8)),
        other => {
            return Err(Error::Usage(format!(
                "unknown suite '{other}' (expected euler, crossoracle, conjecture, appendixa, appendixb, appendixc, onepoint, boussinesq)"
            )))
        }
    };
    let mut failures = 0;
    for (line, ok) in &lines {
        writeln!(out, "{} {}", line, if *ok { "OK" } else { "FAIL" }).map_err(io_err)?;
        if !ok {
            failures += 1;
        }
    }
    writeln!(
        out,
        "suite {suite}: {} checks, {} failures",
        lines.len(),
        failures
    )
    .map_err(io_err)?;
    Ok(if failures == 0 { 0 } else { 1 })
}

/// Run a check that may hard-error (panic) on mismatch, converting the
/// panic into a FAIL line.
fn guarded<T>(label: String, f: impl FnOnce() -> (T, bool)) -> (String, bool)
where
    T: std::fmt::Display,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok((detail, ok)) => (format!("{label} ({detail})"), ok),
        Err(_) => (format!("{label} (hard error)"), false),
    }
}

fn suite_euler(gmax: u32) -> Vec<CheckLine> {
    (1..=gmax)
        .map(|g| {
            guarded(format!("g={g}"), || {
                let v = closedforms::euler_characteristic(g);
                (fmt_rat(&v), true)
            })
        })
        .collect()
}

fn suite_crossoracle(
    r: u32,
    gmax: u32,
    cache: Option<&Path>,
    depth: Option<u32>,
) -> Result<Vec<CheckLine>> {
    check_r(r)?;
    let mut engine = engine_for(r, depth, cache)?;
    let mut lines = Vec::new();
    for (n, m, g) in closedforms::admissible_onepoints(r, gmax) {
        let line = guarded(format!("r={r} <tau_{{{n},{m}}}>_{g}"), || {
            let k = closedforms::onepoint_k(r, n, m, g).expect("gamma arguments are regular");
            let p =
                closedforms::onepoint_partition(r, n, m, g).expect("gamma arguments are regular");
            let e = engine.correlator(g, &[(n, m)]);
            let ok = k == p && p == e;
            (fmt_rat(&e), ok)
        });
        lines.push(line);
    }
    Ok(lines)
}

fn suite_appendix_a() -> Vec<CheckLine> {
    let mut lines = Vec::new();
    for n in 1..=8 {
        lines.push(guarded(format!("eqcomb symbolic n={n}"), || {
            (
                "polynomial identity".to_string(),
                wrpoly::appendix_a_symbolic(n),
            )
        }));
    }
    for n in 1..=14 {
        lines.push(guarded(format!("eqcomb numeric n={n}"), || {
            (
                "random rational specialization".to_string(),
                wrpoly::appendix_a_numeric(n, 0xA11CE + n as u64),
            )
        }));
    }
    lines.push(guarded("multinomial form |c| <= 6".into(), || {
        (
            "all index vectors".to_string(),
            wrpoly::appendix_a_multinomial(6),
        )
    }));
    lines.push(guarded("Lagrange inversion n<=10 k<=3".into(), || {
        (
            "random truncated series".to_string(),
            closedforms::lagrange_identity_check(10, 3, 0xFEED),
        )
    }));
    lines
}

fn suite_appendix_b(rmax: u32) -> Vec<CheckLine> {
    let mut lines = Vec::new();
    for r in 2..=rmax.max(2) {
        lines.push(guarded(format!("W_{r} coefficient laws"), || {
            let wr = wrpoly::build_wr(r).expect("depth r+2 suffices");
            for k in 1..=(r / 2) {
                wrpoly::coefficient_law_check(&wr, k);
            }
            for i in 2..=r {
                wrpoly::appendix_b_check(&wr, i);
            }
            (format!("{} monomials", wr.num_terms()), true)
        }));
    }
    lines
}

fn suite_appendix_c(nmax: u32) -> Vec<CheckLine> {
    let mut lines = Vec::new();
    for n in 2..=nmax.max(2) {
        lines.push(guarded(format!("f_{n}(0) = -B_{n}/{n}"), || {
            (fmt_rat(&closedforms::appendix_c_f(n)), true)
        }));
    }
    for u in 2..=10 {
        lines.push(guarded(
            format!("harmonic-Bernoulli identity u={u}"),
            || ("".to_string(), closedforms::eq11_check(u)),
        ));
    }
    lines
}

fn suite_onepoint(r: u32, gmax: u32) -> Vec<CheckLine> {
    closedforms::admissible_onepoints(r, gmax)
        .into_iter()
        .map(|(n, m, g)| {
            guarded(
                format!("r={r} <tau_{{{n},{m}}}>_{g} K vs partition"),
                || {
                    let k = closedforms::onepoint_k(r, n, m, g).expect("regular");
                    let p = closedforms::onepoint_partition(r, n, m, g).expect("regular");
                    (fmt_rat(&k), k == p)
                },
            )
        })
        .collect()
}

fn suite_boussinesq(mmax: u32) -> Vec<CheckLine> {
    vec![guarded(
        format!("recursion + Lagrange inversion m <= {mmax}"),
        || {
            let (a, b) = closedforms::boussinesq(mmax.max(4));
            let detail = format!(
                "a1..a4 = {}, {}, {}, {}; b1..b4 = {}, {}, {}, {}",
                fmt_rat(&a[0]),
                fmt_rat(&a[1]),
                fmt_rat(&a[2]),
                fmt_rat(&a[3]),
                fmt_rat(&b[0]),
                fmt_rat(&b[1]),
                fmt_rat(&b[2]),
                fmt_rat(&b[3])
            );
            (detail, true)
        },
    )]
}
