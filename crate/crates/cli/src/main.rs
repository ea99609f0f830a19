use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thetaglue_core::bivar::{check_recurrence_h, check_recurrence_rho, h_closed_poly, h_poly, rho_closed_poly, rho_poly};
use thetaglue_core::lattices::audit::{niemeier_audit, render_niemeier, render_specializations, specialization_report};
use thetaglue_core::lattices::glue::generators;
use thetaglue_core::lattices::{
    theorem_expr, theta_by_cosets, theta_by_enumeration, theta_by_theorem_with, LatticeError, LatticeSpec,
    RangeReading,
};
use thetaglue_core::modforms::{e4_divisor_sum, Family};
use thetaglue_core::symexpand::counting::count_checks;
use thetaglue_core::symexpand::{Role, SymExpr, SymPattern, SymSlot};
use thetaglue_core::{ModformCache, QExp, QSeries, ThetaKind};

/// Largest accepted `--order`.
const MAX_ORDER: u32 = 4096;

#[derive(Parser)]
#[command(name = "thetaglue", version, about = "Exact theta series of glued D_n lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Plain,
    Csv,
    Qs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Reading {
    Displayed,
    Derivation,
}

impl From<Reading> for RangeReading {
    fn from(r: Reading) -> Self {
        match r {
            Reading::Displayed => RangeReading::Displayed,
            Reading::Derivation => RangeReading::Derivation,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AuditKind {
    Specializations,
    Niemeier,
    Counts,
}

#[derive(Subcommand)]
enum Command {
    /// Print one series: theta2, theta3, theta4, E4, Delta24, h:<n>, rho:<n>.
    Series {
        name: String,
        /// Truncation in integer powers of q.
        #[arg(long, default_value_t = 32)]
        order: u32,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the theta, E4, h_n and rho_n identities up to --nmax.
    Identities {
        #[arg(long, default_value_t = 10)]
        nmax: u32,
        #[arg(long, default_value_t = 32)]
        order: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Theta series of a glued lattice by several methods, with a diff.
    LatticeTheta {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 32)]
        order: u32,
        /// Comma list drawn from cosets, theorem, enum.
        #[arg(long, default_value = "cosets,theorem")]
        methods: String,
        /// Truncation for the enumeration method; defaults to --order.
        #[arg(long)]
        enum_order: Option<u32>,
        /// Summation range used for the rho-rho-h sum of the even family.
        #[arg(long, value_enum, default_value_t = Reading::Displayed)]
        reading: Reading,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the summands of a sym pattern or of a lattice theorem.
    SymExpand {
        /// Slots such as "h:2:+1,rho:1:-1,rho:1:-1" (role:block size:shift).
        #[arg(long, conflicts_with = "spec")]
        pattern: Option<String>,
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Reading::Displayed)]
        reading: Reading,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reports: specializations, niemeier, counts.
    Audit {
        #[arg(value_enum)]
        kind: AuditKind,
        #[arg(long, default_value_t = 32)]
        order: u32,
        #[arg(long, default_value_t = 8)]
        lmax: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<LatticeError> for Failure {
    fn from(e: LatticeError) -> Self {
        let code = match e {
            LatticeError::InvalidSpec(_) => 2,
            LatticeError::BoundsTooLarge { .. } => 4,
            _ => 1,
        };
        Failure::new(code, e.to_string())
    }
}

/// Output text plus exit code.
struct Outcome {
    text: String,
    code: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match &cli.command {
        Command::Series { out, .. }
        | Command::Identities { out, .. }
        | Command::LatticeTheta { out, .. }
        | Command::SymExpand { out, .. }
        | Command::Audit { out, .. } => out.clone(),
    };
    match run(cli.command) {
        Ok(outcome) => {
            if let Err(e) = emit(&outcome.text, out.as_ref()) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(outcome.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())
        }
    }
}

fn run(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Series { name, order, format, .. } => run_series(&name, order, format),
        Command::Identities { nmax, order, .. } => run_identities(nmax, order),
        Command::LatticeTheta { spec, order, methods, enum_order, reading, format, .. } => {
            run_lattice_theta(&spec, order, &methods, enum_order, reading.into(), format)
        }
        Command::SymExpand { pattern, spec, reading, .. } => run_sym_expand(pattern.as_deref(), spec.as_ref(), reading.into()),
        Command::Audit { kind, order, lmax, .. } => run_audit(kind, order, lmax),
    }
}

fn check_order(order: u32) -> Result<(), Failure> {
    if order == 0 || order > MAX_ORDER {
        return Err(Failure::new(3, format!("order must be between 1 and {MAX_ORDER}, got {order}")));
    }
    Ok(())
}

fn cache_for(order: u32) -> Result<ModformCache, Failure> {
    check_order(order)?;
    ModformCache::with_order(order).map_err(|e| Failure::new(1, e.to_string()))
}

fn render(s: &QSeries, format: Format) -> String {
    match format {
        Format::Plain => format!("{s}\n"),
        Format::Csv => s.to_csv(),
        Format::Qs => s.to_qs_text(),
    }
}

fn run_series(name: &str, order: u32, format: Format) -> Result<Outcome, Failure> {
    let lower = name.to_ascii_lowercase();
    let index = |prefix: &str| -> Option<Result<i64, Failure>> {
        lower.strip_prefix(prefix).map(|n| n.parse::<i64>().map_err(|_| Failure::new(2, format!("bad index in {name:?}"))))
    };
    enum Which {
        Theta(ThetaKind),
        E4,
        Delta,
        H(i64),
        Rho(i64),
    }
    let which = match lower.as_str() {
        "theta2" => Which::Theta(ThetaKind::Two),
        "theta3" => Which::Theta(ThetaKind::Three),
        "theta4" => Which::Theta(ThetaKind::Four),
        "e4" => Which::E4,
        "delta24" => Which::Delta,
        _ => match (index("h:"), index("rho:")) {
            (Some(n), _) => Which::H(n?),
            (_, Some(n)) => Which::Rho(n?),
            _ => return Err(Failure::new(2, format!("unknown series {name:?}"))),
        },
    };
    let cache = cache_for(order)?;
    let series = match which {
        Which::Theta(k) => cache.theta(k),
        Which::E4 => (*cache.e4()).clone(),
        Which::Delta => (*cache.delta24()).clone(),
        Which::H(n) => (*cache.h(n).map_err(|e| Failure::new(2, e.to_string()))?).clone(),
        Which::Rho(n) => (*cache.rho(n).map_err(|e| Failure::new(2, e.to_string()))?).clone(),
    };
    Ok(Outcome { text: render(&series, format), code: 0 })
}

fn run_identities(nmax: u32, order: u32) -> Result<Outcome, Failure> {
    if nmax < 3 {
        return Err(Failure::new(3, format!("--nmax must be at least 3, got {nmax}")));
    }
    let cache = cache_for(order)?;
    let mut rows: Vec<(bool, String)> = Vec::new();
    let q = |r: Result<bool, String>| r.unwrap_or(false);

    let quartic = &cache.theta_pow(ThetaKind::Two, 4) + &cache.theta_pow(ThetaKind::Four, 4);
    rows.push((quartic.agrees_with(&cache.theta_pow(ThetaKind::Three, 4)), "theta2^4 + theta4^4 = theta3^4".into()));
    rows.push((cache.e4().agrees_with(&e4_divisor_sum(cache.trunc())), "E4 from theta powers = 1 + 240 sum sigma3".into()));
    for n in 0..=nmax {
        if n >= 1 {
            rows.push((q(h_closed_poly(n).map(|c| c == h_poly(n)).map_err(|e| e.to_string())), format!("h_{n} closed form in Z[a,b]")));
            let series = cache.h_closed(n).map_err(|e| e.to_string()).and_then(|c| {
                cache.h(n as i64).map(|d| d.agrees_with(&c)).map_err(|e| e.to_string())
            });
            rows.push((q(series), format!("h_{n} closed form as series")));
        }
        let poly = rho_poly(n as i64).and_then(|d| rho_closed_poly(n).map(|c| c == d)).map_err(|e| e.to_string());
        rows.push((q(poly), format!("rho_{n} closed form in Z[a,b]")));
        let series = cache.rho_closed(n).map_err(|e| e.to_string()).and_then(|c| {
            cache.rho(n as i64).map(|d| d.agrees_with(&c)).map_err(|e| e.to_string())
        });
        rows.push((q(series), format!("rho_{n} closed form as series")));
        if n >= 3 {
            rows.push((check_recurrence_h(n) == Ok(true), format!("h recurrence n={n} in Z[a,b]")));
            rows.push((check_recurrence_rho(n) == Ok(true), format!("rho recurrence n={n} in Z[a,b]")));
            rows.push((cache.check_recurrence(Family::H, n as i64) == Ok(true), format!("h recurrence n={n} as series")));
            rows.push((cache.check_recurrence(Family::Rho, n as i64) == Ok(true), format!("rho recurrence n={n} as series")));
        }
    }
    let mut text = String::new();
    for (ok, label) in &rows {
        let _ = writeln!(text, "{}\t{label}", if *ok { "PASS" } else { "FAIL" });
    }
    let failed = rows.iter().filter(|(ok, _)| !ok).count();
    let _ = writeln!(text, "{} checks, {failed} failed", rows.len());
    Ok(Outcome { text, code: if failed == 0 { 0 } else { 1 } })
}

fn read_spec(path: &PathBuf) -> Result<LatticeSpec, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
    Ok(LatticeSpec::parse(&text)?)
}

fn describe_spec(spec: &LatticeSpec, text: &mut String) {
    let dims: Vec<String> = spec.dims().iter().map(|n| n.to_string()).collect();
    let _ = writeln!(text, "# {spec}");
    let _ = writeln!(text, "# n_i = {}  rank = {}", dims.join(","), spec.rank());
    for g in generators(spec) {
        let _ = writeln!(text, "# glue generator {g}");
    }
}

fn run_lattice_theta(
    path: &PathBuf,
    order: u32,
    methods: &str,
    enum_order: Option<u32>,
    reading: RangeReading,
    format: Format,
) -> Result<Outcome, Failure> {
    let spec = read_spec(path)?;
    let cache = cache_for(order)?;
    let mut wanted = Vec::new();
    for m in methods.split(',').map(str::trim).filter(|m| !m.is_empty()) {
        match m {
            "cosets" | "theorem" | "enum" => wanted.push(m),
            other => return Err(Failure::new(2, format!("unknown method {other:?}"))),
        }
    }
    if wanted.is_empty() {
        return Err(Failure::new(2, "no methods requested"));
    }
    let mut text = String::new();
    describe_spec(&spec, &mut text);
    let mut results: Vec<(&str, QSeries)> = Vec::new();
    for m in &wanted {
        let s = match *m {
            "cosets" => theta_by_cosets(&spec, &cache)?,
            "theorem" => theta_by_theorem_with(&spec, &cache, reading)?,
            _ => {
                let t = enum_order.unwrap_or(order);
                check_order(t)?;
                theta_by_enumeration(&spec, QExp::from_power(t))?
            }
        };
        let _ = writeln!(text, "## {m}");
        text.push_str(&render(&s, format));
        results.push((m, s));
    }
    let mut agree = true;
    for pair in results.windows(2) {
        let (a, sa) = &pair[0];
        let (b, sb) = &pair[1];
        let diff = sa.diff(sb);
        if diff.is_empty() {
            let _ = writeln!(text, "# {a} = {b} below q^{}", sa.trunc().min(sb.trunc()));
        } else {
            agree = false;
            let _ = writeln!(text, "# {a} != {b} at {} exponents", diff.len());
            for (e, x, y) in diff {
                let _ = writeln!(text, "#   q^{e}: {a} {x}  {b} {y}");
            }
        }
    }
    Ok(Outcome { text, code: if agree { 0 } else { 1 } })
}

fn parse_pattern(s: &str) -> Result<SymPattern, Failure> {
    let bad = || Failure::new(2, format!("bad pattern {s:?}; expected role:size:shift,..."));
    let mut slots = Vec::new();
    for part in s.split(',') {
        let fields: Vec<&str> = part.trim().split(':').collect();
        if fields.len() != 3 {
            return Err(bad());
        }
        let role = match fields[0].to_ascii_lowercase().as_str() {
            "h" => Role::H,
            "rho" => Role::Rho,
            _ => return Err(bad()),
        };
        let block_size: usize = fields[1].parse().map_err(|_| bad())?;
        let shift: i64 = fields[2].trim_start_matches('+').parse().map_err(|_| bad())?;
        if block_size == 0 {
            return Err(bad());
        }
        slots.push(SymSlot { role, block_size, shift });
    }
    Ok(SymPattern::new(slots))
}

fn run_sym_expand(pattern: Option<&str>, spec: Option<&PathBuf>, reading: RangeReading) -> Result<Outcome, Failure> {
    let expr = match (pattern, spec) {
        (Some(p), _) => {
            let p = parse_pattern(p)?;
            let mut e = SymExpr::new(p.arity());
            e.push_sym(p);
            e
        }
        (None, Some(path)) => theorem_expr(&read_spec(path)?, reading),
        (None, None) => return Err(Failure::new(2, "give --pattern or --spec")),
    };
    let monos = expr.monomials().map_err(|e| Failure::new(2, e.to_string()))?;
    let mut text = String::new();
    let _ = writeln!(text, "# {} summands over m1..m{}", monos.len(), expr.k);
    for t in &expr.terms {
        let _ = writeln!(text, "# {t}");
    }
    for m in &monos {
        let _ = writeln!(text, "{m}");
    }
    Ok(Outcome { text, code: 0 })
}

fn run_audit(kind: AuditKind, order: u32, lmax: u32) -> Result<Outcome, Failure> {
    let mut text = String::new();
    let failed = match kind {
        AuditKind::Specializations => {
            let cache = cache_for(order)?;
            let rows = specialization_report(6, &cache)?;
            text.push_str(&render_specializations(&rows));
            rows.iter().filter(|r| r.asserted && !r.matched()).count()
        }
        AuditKind::Niemeier => {
            let cache = cache_for(order)?;
            let rows = niemeier_audit(&cache)?;
            text.push_str(&render_niemeier(&rows));
            rows.iter().filter(|r| !r.passed()).count()
        }
        AuditKind::Counts => {
            if lmax == 0 {
                return Err(Failure::new(3, "--lmax must be at least 1"));
            }
            let mut failed = 0;
            for l in 1..=lmax as i64 {
                for r in count_checks(l) {
                    let status = match (r.holds(), r.asserted) {
                        (true, _) => "PASS",
                        (false, true) => {
                            failed += 1;
                            "FAIL"
                        }
                        (false, false) => "DIFFERS (informational)",
                    };
                    let _ = writeln!(text, "{status}\t{}\t{} vs {}", r.label, r.lhs, r.rhs);
                }
            }
            failed
        }
    };
    let _ = writeln!(text, "{failed} asserted checks failed");
    Ok(Outcome { text, code: if failed == 0 { 0 } else { 1 } })
}
