use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use stfan_core::groupcore::LatticeVector;
use stfan_core::moduli::{connectivity_path, ingredient_distance, CapSequence, IngredientList};
use stfan_core::oracle::{census, enumerate_solutions, geometric_equiv_check, write_census_csv, EnumerationSpec};
use stfan_core::polygeom::{
    family_distance, render_svg, DensitySpec, Marker, Point, PrimitiveSemitoricPolygon, Scene,
};
use stfan_core::rational::format_q;
use stfan_core::semitoric::{normalize, replay_trace, validate_semitoric, CornerLabel, SemitoricFan};
use stfan_core::toricfan::{fulton_reduce, replay_toric, validate_toric, ToricFan};
use stfan_core::Error;

#[derive(Parser)]
#[command(name = "stfan", version, about = "Toric and semitoric fans, polygons and ingredient metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a fan or polygon file; exit 0 if valid, 1 if not.
    Validate { input: PathBuf },
    /// Reduce a toric fan to its minimal model by reverse corner chops.
    Reduce {
        input: PathBuf,
        /// Where to write the trace as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Replay the trace and re-validate every intermediate fan.
        #[arg(long)]
        verify: bool,
    },
    /// Transform a semitoric fan into the standard fan of its complexity.
    Normalize {
        input: PathBuf,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        verify: bool,
    },
    /// List the words with lift (I, 12) of length d and entries in [-bound, bound].
    Enumerate {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        bound: i64,
        /// Write a census (weight, winding, minimal model) as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also compare lifts with geometric validity for every kernel word.
        #[arg(long)]
        check: bool,
    },
    /// Distance between two ingredient lists, or two primitive polygons.
    Distance {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        metric: MetricArgs,
    },
    /// Sample a path between two ingredient lists of the same component.
    Path {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        metric: MetricArgs,
    },
    /// Draw fans and polygons as SVG.
    Render {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(clap::Args)]
struct MetricArgs {
    #[arg(long, value_enum, default_value_t = Measure::Expabsx)]
    measure: Measure,
    #[arg(long, value_enum, default_value_t = Caps::Geometric)]
    caps: Caps,
    /// Number of stored caps minus one.
    #[arg(long, default_value_t = 6)]
    degree: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Measure {
    Lebesgue,
    Expabsx,
}

#[derive(Clone, Copy, ValueEnum)]
enum Caps {
    /// b_n = 2^-n
    Geometric,
}

impl MetricArgs {
    fn density(&self) -> DensitySpec {
        match self.measure {
            Measure::Lebesgue => DensitySpec::Lebesgue,
            Measure::Expabsx => DensitySpec::ExpAbsX,
        }
    }

    fn caps(&self) -> CapSequence {
        match self.caps {
            Caps::Geometric => CapSequence::geometric(self.degree),
        }
    }

    fn describe(&self) -> Value {
        let caps = self.caps();
        json!({
            "measure": self.density(),
            "caps": "geometric",
            "cap_degree": caps.degree(),
            "series_tail_bound": caps.tail_bound(),
        })
    }
}

/// Exit code 1 for invalid objects and mismatches, 2 for unreadable input.
enum Failure {
    Invalid(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(m) => Failure::Input(m),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Parses the shape of `v`, reporting shape errors as unreadable input.
fn shape<T: for<'de> Deserialize<'de>>(v: &Value, what: &str) -> Result<T, Failure> {
    T::deserialize(v).map_err(|e| Failure::Input(format!("not a {what}: {e}")))
}

/// Parses `v` with validation; shape errors are input errors, failed checks are invalid objects.
fn parse_checked<T: for<'de> Deserialize<'de>, R: for<'de> Deserialize<'de>>(v: &Value, what: &str) -> Result<T, Failure> {
    shape::<R>(v, what)?;
    T::deserialize(v).map_err(|e| Failure::Invalid(format!("invalid {what}: {e}")))
}

fn write_file(path: &Path, contents: &str) -> Outcome {
    fs::write(path, contents).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("values serialize"));
}

#[derive(Deserialize)]
struct RawFan {
    vectors: Vec<LatticeVector>,
    #[serde(default)]
    labels: Option<Vec<CornerLabel>>,
}

// Shapes only, used to tell malformed input from objects that fail validation.
#[allow(dead_code)]
#[derive(Deserialize)]
struct RawPolygon {
    vertices: Vec<Point>,
    #[serde(default)]
    markers: Vec<Marker>,
}

#[allow(dead_code)]
#[derive(Deserialize)]
struct RawIngredients {
    m_f: usize,
    polygon: RawPolygon,
    h: Vec<f64>,
    series: Vec<Value>,
}

fn read_semitoric(path: &Path) -> Result<SemitoricFan, Failure> {
    let raw: RawFan = shape(&read_json(path)?, "fan")?;
    let fan = match raw.labels {
        Some(labels) => SemitoricFan::new(raw.vectors, labels),
        None => SemitoricFan::toric(raw.vectors),
    };
    Ok(fan?)
}

fn validate(input: &Path) -> Outcome {
    let v = read_json(input)?;
    let (valid, report) = if v.get("vectors").is_some() {
        let raw: RawFan = shape(&v, "fan")?;
        match raw.labels {
            Some(labels) => {
                let r = validate_semitoric(&raw.vectors, &labels);
                (r.valid, json!({"kind": "semitoric_fan", "valid": r.valid, "complexity": r.complexity,
                    "failure": r.failure.map(|f| f.to_string())}))
            }
            None => {
                let r = validate_toric(&raw.vectors);
                (r.valid, json!({"kind": "toric_fan", "valid": r.valid, "d": r.d,
                    "failure": r.failure.map(|f| f.to_string())}))
            }
        }
    } else if v.get("vertices").is_some() {
        shape::<RawPolygon>(&v, "polygon")?;
        match PrimitiveSemitoricPolygon::deserialize(&v) {
            Ok(p) => (true, json!({"kind": "polygon", "valid": true, "vertices": p.polygon().len(),
                "complexity": p.complexity()})),
            Err(e) => (false, json!({"kind": "polygon", "valid": false, "failure": e.to_string()})),
        }
    } else {
        return Err(Failure::Input("expected a fan (\"vectors\") or a polygon (\"vertices\")".into()));
    };
    print_json(&report);
    if valid {
        Ok(())
    } else {
        Err(Failure::Invalid(report["failure"].as_str().unwrap_or("invalid").to_string()))
    }
}

fn reduce(input: &Path, trace_out: Option<&Path>, verify: bool) -> Outcome {
    let raw: RawFan = shape(&read_json(input)?, "fan")?;
    if raw.labels.as_ref().is_some_and(|l| l.iter().any(|x| !x.is_delzant())) {
        return Err(Failure::Invalid("reduce takes a toric fan; use normalize for semitoric fans".into()));
    }
    let fan = ToricFan::new(raw.vectors)?;
    let red = fulton_reduce(&fan)?;
    if verify {
        let end = replay_toric(&fan, &red.trace)?;
        if end != red.reduced {
            return Err(Failure::Invalid("replayed trace does not reach the reduced fan".into()));
        }
        let back = replay_toric(&red.reduced, &red.forward_trace())?;
        if !back.sl2_equivalent(&fan) {
            return Err(Failure::Invalid("forward replay does not rebuild the input".into()));
        }
    }
    if let Some(path) = trace_out {
        write_file(path, &serde_json::to_string_pretty(&red).expect("reduction serializes"))?;
    }
    println!("{}, {} moves", red.model, red.trace.len());
    Ok(())
}

fn normalize_cmd(input: &Path, trace_out: Option<&Path>, verify: bool) -> Outcome {
    let fan = read_semitoric(input)?;
    let n = normalize(&fan)?;
    if verify {
        let end = replay_trace(&fan, &n.trace)?;
        if end.rotated(n.rotation) != n.fan {
            return Err(Failure::Invalid("replayed trace does not reach the standard fan".into()));
        }
    }
    if let Some(path) = trace_out {
        write_file(path, &serde_json::to_string_pretty(&n).expect("normalization serializes"))?;
    }
    println!("standard c={}, {} moves", n.complexity, n.trace.len());
    Ok(())
}

fn enumerate(d: usize, bound: i64, csv_out: Option<&Path>, check: bool) -> Outcome {
    let spec = EnumerationSpec::new(d, bound)?;
    let words = enumerate_solutions(spec)?;
    if let Some(path) = csv_out {
        let mut buf = Vec::new();
        write_census_csv(&census(spec)?, &mut buf)?;
        write_file(path, &String::from_utf8(buf).expect("csv is utf-8"))?;
    }
    let mut out = json!({"d": d, "bound": bound, "count": words.len(), "words": words});
    if check {
        let report = geometric_equiv_check(spec)?;
        let clean = report.counterexamples.is_empty() && report.winding_mismatches.is_empty();
        out["check"] = serde_json::to_value(&report).expect("report serializes");
        print_json(&out);
        if !clean {
            return Err(Failure::Invalid("lift and geometric validity disagree".into()));
        }
        return Ok(());
    }
    print_json(&out);
    Ok(())
}

enum Operand {
    Ingredients(IngredientList),
    Polygon(PrimitiveSemitoricPolygon),
}

fn read_operand(path: &Path) -> Result<Operand, Failure> {
    let v = read_json(path)?;
    if v.get("polygon").is_some() {
        Ok(Operand::Ingredients(parse_checked::<IngredientList, RawIngredients>(&v, "ingredient list")?))
    } else {
        Ok(Operand::Polygon(parse_checked::<PrimitiveSemitoricPolygon, RawPolygon>(&v, "polygon")?))
    }
}

fn distance(a: &Path, b: &Path, metric: &MetricArgs) -> Outcome {
    let mut out = metric.describe();
    match (read_operand(a)?, read_operand(b)?) {
        (Operand::Ingredients(x), Operand::Ingredients(y)) => {
            out["distance"] = json!(ingredient_distance(&x, &y, metric.density(), &metric.caps())?);
        }
        (Operand::Polygon(x), Operand::Polygon(y)) => {
            let d = family_distance(&x, &y, metric.density())?;
            out["distance"] = json!(d.to_f64());
            if let Some(q) = d.exact() {
                out["exact"] = json!(format_q(q));
            }
        }
        _ => return Err(Failure::Invalid("cannot compare an ingredient list with a bare polygon".into())),
    }
    print_json(&out);
    Ok(())
}

fn path_cmd(a: &Path, b: &Path, steps: usize, out: &Path, metric: &MetricArgs) -> Outcome {
    let (Operand::Ingredients(x), Operand::Ingredients(y)) = (read_operand(a)?, read_operand(b)?) else {
        return Err(Failure::Invalid("path takes two ingredient lists".into()));
    };
    let path = connectivity_path(&x, &y, steps)?;
    write_file(out, &serde_json::to_string(&path).expect("path serializes"))?;
    let mut worst: f64 = 0.0;
    for w in path.windows(2) {
        worst = worst.max(ingredient_distance(&w[0], &w[1], metric.density(), &metric.caps())?);
    }
    let mut summary = metric.describe();
    summary["samples"] = json!(path.len());
    summary["max_step_distance"] = json!(worst);
    print_json(&summary);
    Ok(())
}

fn render(input: &Path, out: &Path) -> Outcome {
    let v = read_json(input)?;
    let scene = if v.get("polygons").is_some() || v.get("fans").is_some() {
        Scene::deserialize(&v).map_err(|e| Failure::Invalid(format!("invalid scene: {e}")))?
    } else if v.get("vectors").is_some() {
        Scene { fans: vec![read_semitoric(input)?], ..Scene::default() }
    } else {
        let p = parse_checked::<PrimitiveSemitoricPolygon, RawPolygon>(&v, "polygon")?;
        Scene { polygons: vec![p], ..Scene::default() }
    };
    write_file(out, &render_svg(&scene))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate { input } => validate(&input),
        Command::Reduce { input, trace, verify } => reduce(&input, trace.as_deref(), verify),
        Command::Normalize { input, trace, verify } => normalize_cmd(&input, trace.as_deref(), verify),
        Command::Enumerate { d, bound, csv, check } => enumerate(d, bound, csv.as_deref(), check),
        Command::Distance { a, b, metric } => distance(&a, &b, &metric),
        Command::Path { a, b, steps, out, metric } => path_cmd(&a, &b, steps, &out, &metric),
        Command::Render { input, out } => render(&input, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("stfan: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("stfan: {msg}");
            ExitCode::from(2)
        }
    }
}
