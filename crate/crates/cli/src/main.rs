use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use teich3::curves::candidate_geodesics;
use teich3::modular;
use teich3::systole::{
    classify_cell_with, k_systole, klein_extremal_systole, nonorientable_systole, orientable_systole,
    slice_closed_form, slice_extremum, systole_with, KSystole,
};
use teich3::verify::{Level, Verifier, DEFAULT_SEED};
use teich3::{CellId, FundamentalDomain, GeodesicClass, Point, SliceSpec, Tolerances};

#[derive(Parser)]
#[command(name = "teich3", version, about = "Systoles and cells on the Teichmüller space of the closed non-orientable surface of Euler characteristic -1")]
struct Cli {
    /// TOML file of tolerances; unknown keys are an error.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Wall tolerance for typed coordinates, overriding the config.
    #[arg(long, global = true)]
    eps: Option<f64>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct PointArgs {
    #[arg(long, allow_hyphen_values = true)]
    theta: f64,
    #[arg(long, allow_hyphen_values = true)]
    l1: f64,
    #[arg(long, allow_hyphen_values = true)]
    lx: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Move a point into the fundamental domain and report its cell and systole.
    Reduce(PointArgs),
    /// List the simple closed geodesics up to a length.
    Lengths {
        #[command(flatten)]
        point: PointArgs,
        /// Longest length listed; defaults to twice the systole.
        #[arg(long)]
        max_len: Option<f64>,
    },
    /// Systole, orientable and one-sided systoles, 2- and 3-systoles.
    Systole(PointArgs),
    /// Cell of a point of the fundamental domain; points outside it are reduced first.
    Classify(PointArgs),
    /// Run the acceptance checks.
    Verify {
        #[arg(long, value_enum, default_value = "fast")]
        level: LevelArg,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate systoles over a grid or a random sample of (θ₁, x, z), x = cosh²(l₁/2), z = cosh²(l_X/2).
    Scan(ScanArgs),
    /// Maximize the systole on a slice of bordered surfaces.
    Slice {
        #[arg(value_enum)]
        kind: SliceKind,
        #[arg(long)]
        b1: f64,
        #[arg(long)]
        b2: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Fast,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum SliceKind {
    Torus,
    Klein,
    Pp,
}

#[derive(Args, Clone)]
struct ScanArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    theta_min: f64,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    theta_max: f64,
    #[arg(long, default_value_t = 0.1)]
    theta_step: f64,
    #[arg(long, default_value_t = 1.5)]
    x_min: f64,
    #[arg(long, default_value_t = 6.0)]
    x_max: f64,
    #[arg(long, default_value_t = 0.5)]
    x_step: f64,
    #[arg(long, default_value_t = 1.5)]
    z_min: f64,
    #[arg(long, default_value_t = 6.0)]
    z_max: f64,
    #[arg(long, default_value_t = 0.5)]
    z_step: f64,
    /// Sample this many points uniformly in the box instead of the grid.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Check(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Check(m) | Failure::Io(m) => m,
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("teich3: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn load_tolerances(cli: &Cli) -> Result<Tolerances, Failure> {
    let mut tol = match &cli.config {
        None => Tolerances::default(),
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            toml::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        }
    };
    if let Some(eps) = cli.eps {
        tol.cli_wall = eps;
    }
    tol.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(tol)
}

fn run(cli: &Cli) -> Outcome {
    let tol = load_tolerances(cli)?;
    match &cli.command {
        Command::Reduce(p) => reduce(cli, &tol, point(p)?),
        Command::Lengths { point: p, max_len } => lengths(cli, &tol, point(p)?, *max_len),
        Command::Systole(p) => systoles(cli, &tol, point(p)?),
        Command::Classify(p) => classify(cli, &tol, point(p)?),
        Command::Verify { level, seed, out } => verify(cli, &tol, *level, *seed, out.as_deref()),
        Command::Scan(args) => scan(&tol, args),
        Command::Slice { kind, b1, b2 } => slice(cli, *kind, *b1, *b2),
    }
}

fn point(a: &PointArgs) -> Result<Point, Failure> {
    Point::new(a.theta, a.l1, a.lx).map_err(|e| Failure::Usage(e.to_string()))
}

fn emit<T: Serialize>(cli: &Cli, value: &T, text: impl FnOnce() -> String) -> Outcome {
    let s = if cli.json {
        serde_json::to_string_pretty(value).map_err(|e| Failure::Io(e.to_string()))?
    } else {
        text()
    };
    let mut out = io::stdout().lock();
    writeln!(out, "{s}").map_err(|e| Failure::Io(e.to_string()))
}

fn names(classes: &[GeodesicClass]) -> Vec<String> {
    classes.iter().map(|c| c.to_string()).collect()
}

#[derive(Serialize)]
struct ReduceReport {
    input: Point,
    reduced: Point,
    matrix: [[i64; 2]; 2],
    word: Option<String>,
    cell: CellId,
    systole: f64,
    cosh_systole: f64,
    realized_by: Vec<String>,
}

fn reduce_report(tol: &Tolerances, p: Point) -> Result<ReduceReport, Failure> {
    let red = modular::reduce_with(&p, tol.cli_wall);
    let q = red.point;
    let cell = classify_cell_with(&q, tol.cli_wall).map_err(|e| Failure::Usage(e.to_string()))?;
    let s = systole_with(&p, tol.cli_wall);
    let word = modular::find_word(&red.mapping, 12).map(|w| {
        if w.is_empty() {
            "identity".to_string()
        } else {
            teich3::MappingClass::from_word(&w).word_string().unwrap_or_default()
        }
    });
    Ok(ReduceReport {
        input: p,
        reduced: q,
        matrix: red.mapping.normalized(),
        word,
        cell,
        systole: s.value,
        cosh_systole: s.value.cosh(),
        realized_by: names(&s.classes),
    })
}

fn reduce(cli: &Cli, tol: &Tolerances, p: Point) -> Outcome {
    let r = reduce_report(tol, p)?;
    emit(cli, &r, || {
        format!(
            "reduced: theta1 = {:.10}, l1 = {:.10}, lX = {:.10}\nmatrix: {:?}{}\ncell: {}\nsystole: {:.10} (cosh {:.10})\nrealized by ({}): {}",
            r.reduced.theta1,
            r.reduced.l1,
            r.reduced.lx,
            r.matrix,
            r.word.as_ref().map(|w| format!(" = {w}")).unwrap_or_default(),
            r.cell,
            r.systole,
            r.cosh_systole,
            r.realized_by.len(),
            r.realized_by.join(", ")
        )
    })
}

#[derive(Serialize)]
struct LengthRow {
    class: String,
    orientable: bool,
    length: f64,
}

fn lengths(cli: &Cli, tol: &Tolerances, p: Point, max_len: Option<f64>) -> Outcome {
    let cap = match max_len {
        Some(m) if m > 0.0 && m.is_finite() => m,
        Some(m) => return Err(Failure::Usage(format!("--max-len {m} must be positive"))),
        None => 2.0 * systole_with(&p, tol.cli_wall).value,
    };
    let rows: Vec<LengthRow> = candidate_geodesics(cap, &p)
        .into_iter()
        .map(|(c, l)| LengthRow { class: c.to_string(), orientable: c.is_orientable(), length: l })
        .collect();
    emit(cli, &rows, || {
        rows.iter()
            .map(|r| format!("{:>10}  {:.10}  {}", r.class, r.length, if r.orientable { "two-sided" } else { "one-sided" }))
            .collect::<Vec<_>>()
            .join("\n")
    })
}

#[derive(Serialize)]
struct SystoleReport {
    systole: f64,
    systole_classes: Vec<String>,
    orientable: f64,
    orientable_classes: Vec<String>,
    nonorientable: f64,
    nonorientable_classes: Vec<String>,
    two_systole: Option<f64>,
    two_system: Vec<String>,
    three_systole: Option<f64>,
}

fn systoles(cli: &Cli, tol: &Tolerances, p: Point) -> Outcome {
    let s = systole_with(&p, tol.cli_wall);
    let o = orientable_systole(&p);
    let n = nonorientable_systole(&p);
    let k2 = k_systole(&p, 2).map_err(|e| Failure::Usage(e.to_string()))?;
    let k3 = k_systole(&p, 3).map_err(|e| Failure::Usage(e.to_string()))?;
    let two_system = match &k2 {
        KSystole::Finite { system, .. } => names(system),
        KSystole::Unbounded => Vec::new(),
    };
    let r = SystoleReport {
        systole: s.value,
        systole_classes: names(&s.classes),
        orientable: o.value,
        orientable_classes: names(&o.classes),
        nonorientable: n.value,
        nonorientable_classes: names(&n.classes),
        two_systole: k2.value(),
        two_system,
        three_systole: k3.value(),
    };
    emit(cli, &r, || {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.10}")).unwrap_or_else(|| "unbounded".into());
        format!(
            "systole: {:.10} [{}]\norientable: {:.10} [{}]\none-sided: {:.10} [{}]\n2-systole: {} [{}]\n3-systole: {}",
            r.systole,
            r.systole_classes.join(", "),
            r.orientable,
            r.orientable_classes.join(", "),
            r.nonorientable,
            r.nonorientable_classes.join(", "),
            opt(r.two_systole),
            r.two_system.join(", "),
            opt(r.three_systole)
        )
    })
}

#[derive(Serialize)]
struct ClassifyReport {
    in_domain: bool,
    reduced: Point,
    cell: CellId,
    vertex: bool,
    systoles: Vec<String>,
}

fn classify(cli: &Cli, tol: &Tolerances, p: Point) -> Outcome {
    let in_domain = FundamentalDomain { eps: tol.cli_wall }.contains(&p);
    let q = if in_domain { p } else { modular::reduce_with(&p, tol.cli_wall).point };
    let cell = classify_cell_with(&q, tol.cli_wall).map_err(|e| Failure::Usage(e.to_string()))?;
    let r = ClassifyReport { in_domain, reduced: q, cell, vertex: cell.is_vertex(), systoles: names(&cell.systoles()) };
    emit(cli, &r, || {
        let note = if in_domain { "" } else { " (after reduction)" };
        format!("{}{note}: systoles {}", r.cell, r.systoles.join(", "))
    })
}

#[derive(Serialize)]
struct VerifyReport {
    level: Level,
    seed: u64,
    passed: bool,
    failed: Vec<String>,
    checks: Vec<teich3::verify::CheckReport>,
}

fn verify(cli: &Cli, tol: &Tolerances, level: LevelArg, seed: u64, out: Option<&Path>) -> Outcome {
    let level = match level {
        LevelArg::Fast => Level::Fast,
        LevelArg::Full => Level::Full,
    };
    let checks = Verifier::new(level, *tol, seed).run_all();
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{} ({})", c.name, c.failed_parts().join(", ")))
        .collect();
    let report = VerifyReport { level, seed, passed: failed.is_empty(), failed: failed.clone(), checks };
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(&report).map_err(|e| Failure::Io(e.to_string()))?;
        fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    }
    emit(cli, &report, || report.checks.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("\n"))?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("failed: {}", failed.join("; "))))
    }
}

pub const CSV_HEADER: [&str; 10] = ["theta1", "x", "z", "l1", "lX", "cell", "systole", "sys_or", "sys_nonor", "sys2"];

fn axis(lo: f64, hi: f64, step: f64, name: &str) -> Result<Vec<f64>, Failure> {
    if !(step > 0.0 && step.is_finite() && lo.is_finite() && hi.is_finite()) {
        return Err(Failure::Usage(format!("{name}: step must be positive and bounds finite")));
    }
    if hi < lo {
        return Ok(Vec::new());
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| lo + i as f64 * step).collect())
}

fn scan_points(a: &ScanArgs) -> Result<Vec<(f64, f64, f64)>, Failure> {
    if a.x_min <= 1.0 || a.z_min <= 1.0 {
        return Err(Failure::Usage("x and z must exceed 1".into()));
    }
    if let Some(n) = a.random {
        if a.theta_max < a.theta_min || a.x_max < a.x_min || a.z_max < a.z_min {
            return Ok(Vec::new());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        let mut draw = |lo: f64, hi: f64| if hi > lo { rng.gen_range(lo..hi) } else { lo };
        return Ok((0..n).map(|_| (draw(a.theta_min, a.theta_max), draw(a.x_min, a.x_max), draw(a.z_min, a.z_max))).collect());
    }
    let thetas = axis(a.theta_min, a.theta_max, a.theta_step, "theta")?;
    let xs = axis(a.x_min, a.x_max, a.x_step, "x")?;
    let zs = axis(a.z_min, a.z_max, a.z_step, "z")?;
    let mut pts = Vec::with_capacity(thetas.len() * xs.len() * zs.len());
    for &t in &thetas {
        for &x in &xs {
            for &z in &zs {
                pts.push((t, x, z));
            }
        }
    }
    Ok(pts)
}

fn scan_row(tol: &Tolerances, (theta, x, z): (f64, f64, f64)) -> [String; 10] {
    let p = Point::from_xz(theta, x, z).expect("x, z > 1 checked");
    // grid coordinates are exact, so the library wall tolerance applies
    let red = modular::reduce_with(&p, tol.wall);
    let cell = classify_cell_with(&red.point, tol.wall).map(|c| c.to_string()).unwrap_or_default();
    let sys2 = k_systole(&p, 2).ok().and_then(|k| k.value()).unwrap_or(f64::NAN);
    [
        theta.to_string(),
        x.to_string(),
        z.to_string(),
        p.l1.to_string(),
        p.lx.to_string(),
        cell,
        systole_with(&p, tol.wall).value.to_string(),
        orientable_systole(&p).value.to_string(),
        nonorientable_systole(&p).value.to_string(),
        sys2.to_string(),
    ]
}

fn scan(tol: &Tolerances, a: &ScanArgs) -> Outcome {
    let pts = scan_points(a)?;
    // rayon keeps the order of an indexed collect
    let rows: Vec<[String; 10]> = pts.par_iter().map(|&q| scan_row(tol, q)).collect();
    let sink: Box<dyn Write> = match &a.out {
        Some(path) => Box::new(fs::File::create(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    let io_err = |e: csv::Error| Failure::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(io_err)?;
    for r in &rows {
        w.write_record(r).map_err(io_err)?;
    }
    w.flush().map_err(|e| Failure::Io(e.to_string()))
}

#[derive(Serialize)]
struct SliceReport {
    spec: SliceSpec,
    maximizer: Point,
    systole: f64,
    realized_by: Vec<String>,
    closed_form: f64,
    difference: f64,
    /// Klein only: the value from 2(C − 1)²(C + 1) = cosh²(b₁/4), C = cosh(s/2).
    klein_relation: Option<f64>,
}

fn slice(cli: &Cli, kind: SliceKind, b1: f64, b2: Option<f64>) -> Outcome {
    let spec = match (kind, b2) {
        (SliceKind::Torus, None) => SliceSpec::Torus { b1 },
        (SliceKind::Klein, None) => SliceSpec::Klein { b1 },
        (SliceKind::Pp, Some(b2)) => SliceSpec::ProjectivePlane { b1, b2 },
        (SliceKind::Pp, None) => return Err(Failure::Usage("pp needs --b2".into())),
        (_, Some(_)) => return Err(Failure::Usage("--b2 only applies to pp".into())),
    };
    let e = slice_extremum(&spec).map_err(|e| Failure::Usage(e.to_string()))?;
    let closed = slice_closed_form(&spec);
    let r = SliceReport {
        spec,
        maximizer: e.point,
        systole: e.systole.value,
        realized_by: names(&e.systole.classes),
        closed_form: closed,
        difference: e.systole.value - closed,
        klein_relation: matches!(spec, SliceSpec::Klein { .. }).then(|| klein_extremal_systole(b1)),
    };
    emit(cli, &r, || {
        let mut s = format!(
            "maximizer: theta1 = {:.10}, l1 = {:.10}, lX = {:.10}\noptimized systole: {:.10} (cosh {:.10}, cosh(s/2) {:.10}) [{}]\nclosed form:       {:.10} (cosh {:.10}, cosh(s/2) {:.10})\ndifference: {:.3e}",
            r.maximizer.theta1,
            r.maximizer.l1,
            r.maximizer.lx,
            r.systole,
            r.systole.cosh(),
            (r.systole / 2.0).cosh(),
            r.realized_by.join(", "),
            r.closed_form,
            r.closed_form.cosh(),
            (r.closed_form / 2.0).cosh(),
            r.difference
        );
        if let Some(k) = r.klein_relation {
            s.push_str(&format!("\nrelation 2(C-1)^2(C+1) = cosh^2(b1/4): {k:.10} (difference {:.3e})", r.systole - k));
        }
        s
    })
}
