use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use cclab::algebra::rational::{fmt_rational, parse_rational};
use cclab::algebra::{LinearMap, Rational, Vars};
use cclab::catalogue::{Catalogue, CatalogueKey};
use cclab::curvature::{curvature, numeric_r_check, ROutcome};
use cclab::hilbert::{comparison_table, hanli_crossover, render_table, threshold_report, Quadratic};
use cclab::paper_check::paper_check;
use cclab::parser::{parse_system, parse_system_file};
use cclab::report::{analyze, cycle_section, to_canonical_json, AnalysisReport, ScanConfig};
use cclab::singularity::{find_equilibria, singular_locus, DivergenceStatus};
use cclab::PlanarSystem;

#[derive(Parser)]
#[command(name = "cclab", version, about = "Curvature criterion lab for planar polynomial vector fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ScanArgs {
    /// Section radii scanned for returns.
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_hyphen_values = true)]
    r_range: Option<Vec<f64>>,
    /// Number of scan cells.
    #[arg(long, value_name = "N")]
    scan: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Full report: curvature, singular locus, criteria (A)/(B), limit cycles, verdict.
    Analyze {
        /// Catalogue key (s1, s1a, s2, center) or path to a system file.
        input: String,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Scalar curvature, optionally evaluated at a point.
    Curvature {
        input: String,
        #[arg(long, num_args = 2, value_names = ["PX", "PY"], allow_hyphen_values = true)]
        at: Option<Vec<String>>,
        #[arg(long)]
        json: bool,
    },
    /// Certified real zero set of the metric determinant and divergence status.
    Singularities {
        input: String,
        #[arg(long)]
        json: bool,
    },
    /// Limit cycles around a rational equilibrium.
    Cycles {
        input: String,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Exact change of variables `(x, y) = M (u, v) + offset`.
    Transform {
        input: String,
        /// Matrix entries a b c d, row major: x = a u + b v + e, y = c u + d v + f.
        #[arg(long, num_args = 4, value_names = ["A", "B", "C", "D"], required = true, allow_hyphen_values = true)]
        map: Vec<String>,
        #[arg(long, num_args = 2, value_names = ["E", "F"], allow_hyphen_values = true)]
        offset: Option<Vec<String>>,
        /// Names of the new variables.
        #[arg(long, num_args = 2, value_names = ["U", "V"], default_values = ["u", "v"])]
        vars: Vec<String>,
    },
    /// Growth comparison against the claimed Hilbert-number bound.
    Hilbert(HilbertArgs),
    /// Reproduces every catalogued fact and prints PASS/FAIL per fact.
    PaperCheck {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
#[command(group(ArgGroup::new("mode").required(true).multiple(false)))]
struct HilbertArgs {
    /// Minimal k with S_k above the claimed bound.
    #[arg(long, group = "mode")]
    threshold: bool,
    /// Rows k = 2..K of the comparison table.
    #[arg(long, value_name = "K", group = "mode")]
    table: Option<u32>,
    /// Eventual crossover of the asymptotic lower bound with a n^2 + b n + c.
    #[arg(long, num_args = 3, value_names = ["A", "B", "C"], allow_hyphen_values = true, group = "mode")]
    crossover: Option<Vec<String>>,
    #[arg(long)]
    json: bool,
}

/// Failure classes mapped onto the exit-code contract.
enum Failure {
    /// Bad input: unreadable file, parse error, invalid arguments.
    Input(String),
    /// The analysis itself failed or a check did not pass.
    Analysis(String),
}

type CmdResult = Result<String, Failure>;

fn input_err(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

fn analysis_err(e: impl std::fmt::Display) -> Failure {
    Failure::Analysis(e.to_string())
}

/// Rationals written as `a`, `a/b` or a finite decimal such as `-0.25`.
fn parse_number(s: &str) -> Result<Rational, Failure> {
    if let Some(r) = parse_rational(s) {
        return Ok(r);
    }
    let bad = || Failure::Input(format!("`{s}` is not a rational number"));
    let (int, frac) = s.trim().split_once('.').ok_or_else(bad)?;
    if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let negative = int.starts_with('-');
    let whole: BigInt = match int.trim_start_matches(['-', '+']) {
        "" => BigInt::zero(),
        d => d.parse().map_err(|_| bad())?,
    };
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    let digits: BigInt = frac.parse().map_err(|_| bad())?;
    let mag = Rational::new(whole * &scale + digits, scale);
    Ok(if negative { -mag } else { mag })
}

fn load_system(input: &str) -> Result<PlanarSystem, Failure> {
    if let Ok(key) = input.parse::<CatalogueKey>() {
        return Catalogue::load().and_then(|c| c.system(key)).map_err(input_err);
    }
    let path = PathBuf::from(input);
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Failure::Input(format!("`{input}` is neither a catalogue key nor a readable file: {e}")))?;
    let source = parse_system_file(&text).map_err(input_err)?;
    let sys = parse_system(&source).map_err(input_err)?;
    Ok(match sys.label {
        Some(_) => sys,
        None => {
            let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            sys.with_label(stem)
        }
    })
}

fn scan_config(args: &ScanArgs) -> Result<ScanConfig, Failure> {
    let mut cfg = ScanConfig::default();
    if let Some(r) = &args.r_range {
        let (a, b) = (r[0], r[1]);
        if !(a.is_finite() && b.is_finite() && 0.0 < a && a < b) {
            return Err(Failure::Input(format!("--r-range needs 0 < a < b, got {a} {b}")));
        }
        cfg.r_range = (a, b);
    }
    if let Some(n) = args.scan {
        if n < 2 {
            return Err(Failure::Input("--scan needs at least 2 cells".into()));
        }
        cfg.n_scan = n;
    }
    Ok(cfg)
}

fn json<T: Serialize>(v: &T) -> CmdResult {
    to_canonical_json(v).map_err(analysis_err)
}

fn render_analysis(r: &AnalysisReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "system: {} (degree {}, vars {} {})", r.label, r.degree, r.vars[0], r.vars[1]);
    let _ = writeln!(s, "  d{} = {}", r.vars[0], r.p);
    let _ = writeln!(s, "  d{} = {}", r.vars[1], r.q);
    let _ = writeln!(
        s,
        "curvature: numerator with {} terms of degree {}, reduced denominator 2*G11^{}*G22^{}",
        r.curvature.numerator_terms, r.curvature.numerator_degree, r.curvature.reduced_exponents.0, r.curvature.reduced_exponents.1
    );
    let complete = if r.equilibria_complete { "" } else { " (incomplete)" };
    let _ = writeln!(s, "equilibria{complete}:");
    for e in &r.equilibria {
        let at = match &e.point.exact {
            Some([x, y]) => format!("({x}, {y})"),
            None => format!("({:.10}, {:.10})", e.point.approx.0, e.point.approx.1),
        };
        let value = e.r_value.as_deref().map(|v| format!("R = {v}, ")).unwrap_or_default();
        let _ = writeln!(s, "  {at}: {value}{:?}", e.sign);
    }
    let l = &r.singular_locus;
    let _ = writeln!(
        s,
        "singular locus: {} point(s), {} certified divergence(s){}",
        l.points.len(),
        l.certified_divergences,
        if l.fully_resolved { "" } else { ", not fully resolved" }
    );
    let _ = writeln!(
        s,
        "assertion (A): {:?}; (B) count {}",
        r.assertion.assertion_a, r.assertion.assertion_b_count
    );
    if let Some(c) = &r.cycles {
        s.push_str(&render_cycles_body(c));
    }
    let _ = writeln!(s, "verdict: {}", r.verdict);
    for n in r.notes.iter().chain(&r.assertion.notes) {
        let _ = writeln!(s, "note: {n}");
    }
    s
}

fn render_cycles_body(c: &cclab::report::CycleSection) -> String {
    let mut s = String::new();
    if c.radial_form.matched {
        let _ = writeln!(s, "radial form: r' = r f(r^2), f(s) = {}", c.radial_form.f);
    }
    let g = &c.ground_truth;
    let _ = writeln!(s, "limit cycles: {}{}", g.cycle_count, if g.center_flag { " (center: continuum of periodic orbits)" } else { "" });
    for cy in &g.cycles {
        let _ = writeln!(s, "  r = {:.12}  {:?}  period {:.10}  [{:?}]", cy.radius, cy.stability, cy.period, cy.source);
    }
    if let Some(n) = &c.numeric {
        let radii: Vec<String> = n.radii().iter().map(|r| format!("{r:.10}")).collect();
        let _ = writeln!(s, "numeric scan: {} cycle(s) [{}]", n.cycle_count, radii.join(", "));
        if let Some((a, b)) = n.annulus {
            let _ = writeln!(s, "  annulus covered: ({a:.6}, {b:.6}), {} invalid cell(s)", n.invalid_cells.len());
        }
    }
    for note in &c.notes {
        let _ = writeln!(s, "note: {note}");
    }
    s
}

fn cmd_curvature(input: &str, at: Option<&[String]>, as_json: bool) -> CmdResult {
    #[derive(Serialize)]
    struct Out {
        label: String,
        numerator: String,
        denominator: String,
        reduced_numerator: String,
        reduced_exponents: (u32, u32),
        at: Option<[String; 2]>,
        value: Option<ROutcome>,
        numeric_check: Option<f64>,
    }
    let sys = load_system(input)?;
    let c = curvature(&sys).map_err(analysis_err)?;
    let point = at.map(|a| Ok::<_, Failure>([parse_number(&a[0])?, parse_number(&a[1])?])).transpose()?;
    let value = point.as_ref().map(|p| c.evaluate(p));
    let numeric_check = point
        .as_ref()
        .and_then(|p| numeric_r_check(&sys, (cclab::algebra::rational::to_f64(&p[0]), cclab::algebra::rational::to_f64(&p[1]))).ok());
    let out = Out {
        label: sys.label_or_default(),
        numerator: c.r.numerator.to_string(),
        denominator: c.r.denominator.to_string(),
        reduced_numerator: c.reduced.numerator.to_string(),
        reduced_exponents: c.reduced_exponents,
        at: point.as_ref().map(|p| [fmt_rational(&p[0]), fmt_rational(&p[1])]),
        value,
        numeric_check,
    };
    if as_json {
        return json(&out);
    }
    let mut s = String::new();
    let _ = writeln!(s, "R = N / D for {}", out.label);
    let _ = writeln!(s, "N = {}", out.numerator);
    let _ = writeln!(s, "D = {}", out.denominator);
    let (a, b) = out.reduced_exponents;
    let _ = writeln!(s, "reduced: R = N' / (2*G11^{a}*G22^{b}), N' = {}", out.reduced_numerator);
    if let (Some([x, y]), Some(v)) = (&out.at, &out.value) {
        let shown = match v {
            ROutcome::Value(q) => fmt_rational(q),
            ROutcome::SingularDenominator => "diverges (denominator vanishes, numerator does not)".into(),
            ROutcome::Indeterminate => "indeterminate (numerator and denominator vanish)".into(),
        };
        let _ = writeln!(s, "R({x}, {y}) = {shown}");
        if let Some(f) = out.numeric_check {
            let _ = writeln!(s, "finite-difference check: {f:.12e}");
        }
    }
    Ok(s)
}

fn cmd_singularities(input: &str, as_json: bool) -> CmdResult {
    let sys = load_system(input)?;
    let locus = singular_locus(&sys).map_err(analysis_err)?;
    if as_json {
        return json(&locus);
    }
    let mut s = String::new();
    for sub in &locus.subsystems {
        let _ = writeln!(s, "subsystem {}: {} = 0, {} = 0", sub.index, sub.f, sub.g);
        let _ = writeln!(s, "  outcome: {} ({} real point(s))", sub.outcome, sub.points);
        if let Some(r) = &sub.degenerate_reason {
            let _ = writeln!(s, "  degenerate: {r}");
        }
    }
    for p in &locus.points {
        let at = match &p.point.exact {
            Some([x, y]) => format!("({x}, {y})"),
            None => format!("({:.10}, {:.10})", p.point.approx.0, p.point.approx.1),
        };
        let status = match p.status {
            DivergenceStatus::Certified => "|R| diverges (certified)",
            DivergenceStatus::Indeterminate => "indeterminate",
            DivergenceStatus::Removable => "removable",
        };
        let _ = writeln!(s, "{at}: {status}");
    }
    let _ = writeln!(
        s,
        "{} point(s), {} certified divergence(s){}",
        locus.points.len(),
        locus.certified_divergences,
        if locus.fully_resolved { "" } else { "; locus not fully resolved" }
    );
    Ok(s)
}

fn cmd_cycles(input: &str, scan: &ScanArgs, as_json: bool) -> CmdResult {
    let cfg = scan_config(scan)?;
    let sys = load_system(input)?;
    let eq = find_equilibria(&sys).map_err(analysis_err)?;
    let rational: Vec<[Rational; 2]> = eq.points.iter().filter_map(|p| p.exact()).collect();
    let section = cycle_section(&sys, &rational, cfg).map_err(analysis_err)?;
    if as_json {
        return json(&section);
    }
    Ok(render_cycles_body(&section))
}

fn cmd_transform(input: &str, map: &[String], offset: Option<&[String]>, vars: &[String]) -> CmdResult {
    let sys = load_system(input)?;
    let m: Vec<Rational> = map.iter().map(|s| parse_number(s)).collect::<Result<_, _>>()?;
    let offset = match offset {
        Some(o) => [parse_number(&o[0])?, parse_number(&o[1])?],
        None => [Rational::zero(), Rational::zero()],
    };
    let lm = LinearMap { matrix: [[m[0].clone(), m[1].clone()], [m[2].clone(), m[3].clone()]], offset };
    let ident = |v: &str| v.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if !(ident(&vars[0]) && ident(&vars[1])) || vars[0] == vars[1] {
        return Err(Failure::Input(format!("invalid variable names `{}` `{}`", vars[0], vars[1])));
    }
    let new_vars = Vars::new(vars[0].as_str(), vars[1].as_str());
    let t = sys
        .transform(&lm, new_vars)
        .ok_or_else(|| Failure::Input("the matrix is singular".into()))?;
    let mut s = String::new();
    if let Some(l) = &t.label {
        let _ = writeln!(s, "label = {l}");
    }
    let _ = writeln!(s, "vars: {} {}", t.vars.0, t.vars.1);
    let _ = writeln!(s, "d{} = {}", t.vars.0, t.p);
    let _ = writeln!(s, "d{} = {}", t.vars.1, t.q);
    Ok(s)
}

fn cmd_hilbert(h: &HilbertArgs) -> CmdResult {
    if h.threshold {
        let r = threshold_report().map_err(analysis_err)?;
        if h.json {
            return json(&r);
        }
        return Ok(format!(
            "{}\nminimal k = {}; checked through k = {}\n  k = {}: S = {}, claimed = {}\n  k = {}: S = {}, claimed = {}\n",
            r.threshold,
            r.threshold,
            r.verified_through,
            r.before.k,
            r.before.s_k,
            r.before.claimed,
            r.at.k,
            r.at.s_k,
            r.at.claimed
        ));
    }
    if let Some(k) = h.table {
        if k < 2 {
            return Err(Failure::Input("--table needs K >= 2".into()));
        }
        let rows = comparison_table(k).map_err(analysis_err)?;
        return if h.json { json(&rows) } else { Ok(render_table(&rows)) };
    }
    let c = h.crossover.as_deref().expect("clap enforces one of the options");
    let q = Quadratic::new(parse_number(&c[0])?, parse_number(&c[1])?, parse_number(&c[2])?);
    let r = hanli_crossover(&q).map_err(input_err)?;
    if h.json {
        return json(&r);
    }
    let mut s = format!(
        "n* = {} ({} bits, {} under precision doubling)\n",
        r.n,
        r.precision_bits,
        if r.stable_under_doubling { "stable" } else { "NOT stable" }
    );
    let _ = writeln!(s, "margin at n*: {}", r.margin_at);
    if let Some(m) = &r.margin_before {
        let _ = writeln!(s, "margin at n* - 1: {m}");
    }
    for n in &r.notes {
        let _ = writeln!(s, "note: {n}");
    }
    Ok(s)
}

fn cmd_paper_check(as_json: bool) -> CmdResult {
    let cat = Catalogue::load().map_err(input_err)?;
    let report = paper_check(&cat);
    let text = if as_json { json(&report)? } else { report.render() };
    if report.all_pass() {
        Ok(text)
    } else {
        print!("{text}");
        Err(Failure::Analysis(format!("{} check(s) failed", report.failed)))
    }
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Analyze { input, json: as_json, scan } => {
            let cfg = scan_config(&scan)?;
            let sys = load_system(&input)?;
            let report = analyze(&sys, Some(cfg)).map_err(analysis_err)?;
            if as_json {
                json(&report)
            } else {
                Ok(render_analysis(&report))
            }
        }
        Command::Curvature { input, at, json } => cmd_curvature(&input, at.as_deref(), json),
        Command::Singularities { input, json } => cmd_singularities(&input, json),
        Command::Cycles { input, json, scan } => cmd_cycles(&input, &scan, json),
        Command::Transform { input, map, offset, vars } => cmd_transform(&input, &map, offset.as_deref(), &vars),
        Command::Hilbert(h) => cmd_hilbert(&h),
        Command::PaperCheck { json } => cmd_paper_check(json),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Analysis(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
