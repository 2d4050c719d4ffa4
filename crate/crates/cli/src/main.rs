//! Command-line front end: spectra, characters, operator application, the
//! Poisson solver, Weyl integration, and the verification suites.
//!
//! Every command prints a result document {"status", "payload",
//! "diagnostics"} (JSON canonical; CSV is a projection for tabular
//! payloads). Exit codes: 0 ok, 2 invalid input or schema violation,
//! 3 incompatible right-hand side, 4 verification failure.

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sonharm::error::Error;
use sonharm::radial::LaplacianForm;
use sonharm::spectral::{apply_l_grid, solve_poisson};
use sonharm::verify::{run_suite, Suite, SuiteReport};
use sonharm::{
    character_parts, enumerate_dominant, ClassFunctionGrid, DominantWeight, GroupDim,
    SpectralLine, TorusAngles, WeylDensity,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "sonharm",
    about = "Harmonic analysis for class functions on SO(n)",
    version
)]
struct Cli {
    /// Ambient dimension n (a single integer, or a range like 3..5 for verify)
    #[arg(long, global = true)]
    n: Option<String>,
    /// Seed for the randomized suites
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Grid points per dimension (defaults depend on the torus rank)
    #[arg(long = "grid", global = true)]
    grid: Option<usize>,
    /// Output format (JSON is canonical, CSV is a projection)
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result document to a file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Table of dominant weights with eigenvalues and dimensions
    Spectrum {
        #[arg(long = "kappa-max")]
        kappa_max: f64,
    },
    /// Evaluate a character at torus angles
    Character {
        /// Comma-separated integer weight, e.g. 1,0
        #[arg(long)]
        weight: String,
        /// Comma-separated angles in radians, e.g. 0.3,1.1
        #[arg(long)]
        theta: String,
    },
    /// Apply the radial Laplacian to a grid file
    #[command(name = "apply-L")]
    ApplyL {
        #[arg(long)]
        form: String,
        /// Input ClassFunctionGrid JSON file
        #[arg(long)]
        input: PathBuf,
        /// Spectral cutoff used to fill nodes on the singular set
        #[arg(long = "kappa-max", default_value_t = 50.0)]
        kappa_max: f64,
    },
    /// Solve -Lφ = η spectrally from a grid file
    Solve {
        #[arg(long = "kappa-max")]
        kappa_max: f64,
        #[arg(long)]
        input: PathBuf,
    },
    /// Weyl-integrate a grid file
    Integrate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Run a named verification suite
    Verify {
        /// eigen | orth | forms | ambient | fonda | all
        #[arg(long)]
        suite: String,
    },
}

struct Outcome {
    payload: Value,
    diagnostics: Vec<String>,
    /// CSV projection rows (header first), when the payload is tabular.
    csv: Option<Vec<String>>,
    /// A bare artifact (grid or expansion JSON). With --output the artifact
    /// itself goes to the file, schema-conformant, and the result document
    /// goes to stdout.
    artifact: Option<String>,
    exit: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(outcome) => outcome,
        Err(e) => {
            let exit = match e {
                Error::IncompatibleRHS(_) => 3,
                _ => 2,
            };
            Outcome {
                payload: json!({ "message": e.to_string() }),
                diagnostics: Vec::new(),
                csv: None,
                artifact: None,
                exit,
            }
        }
    };
    let status = if outcome.exit == 0 { "ok" } else { "error" };
    let mut payload = outcome.payload.clone();
    // Artifact-producing commands write the bare artifact to --output so the
    // file conforms to the grid/expansion schema; the result document then
    // reports where it went.
    if let (Some(path), Some(artifact)) = (&cli.output, &outcome.artifact) {
        if let Err(e) = std::fs::write(path, format!("{artifact}\n")) {
            eprintln!("cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
        payload = json!({ "written_to": path.to_string_lossy() });
    } else if let Some(artifact) = &outcome.artifact {
        let doc: Value = serde_json::from_str(artifact).expect("artifact is valid JSON");
        if let Some(map) = payload.as_object_mut() {
            map.insert("artifact".to_string(), doc);
        }
    }
    let text = match (cli.format, &outcome.csv) {
        (Format::Csv, Some(rows)) => rows.join("\n") + "\n",
        _ => {
            let doc = json!({
                "status": status,
                "payload": payload,
                "diagnostics": outcome.diagnostics,
            });
            serde_json::to_string_pretty(&doc).expect("serialization") + "\n"
        }
    };
    match &cli.output {
        Some(path) if outcome.artifact.is_none() => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        _ => print!("{text}"),
    }
    ExitCode::from(outcome.exit)
}

fn run(cli: &Cli) -> sonharm::Result<Outcome> {
    match &cli.cmd {
        Cmd::Spectrum { kappa_max } => cmd_spectrum(cli, *kappa_max),
        Cmd::Character { weight, theta } => cmd_character(cli, weight, theta),
        Cmd::ApplyL {
            form,
            input,
            kappa_max,
        } => cmd_apply_l(cli, form, input, *kappa_max),
        Cmd::Solve { kappa_max, input } => cmd_solve(cli, *kappa_max, input),
        Cmd::Integrate { input } => cmd_integrate(cli, input),
        Cmd::Verify { suite } => cmd_verify(cli, suite),
    }
}

fn parse_single_n(cli: &Cli) -> sonharm::Result<GroupDim> {
    let raw = cli
        .n
        .as_deref()
        .ok_or_else(|| Error::InvalidInput("--n is required".into()))?;
    let n: usize = raw
        .parse()
        .map_err(|_| Error::InvalidInput(format!("--n must be an integer, got '{raw}'")))?;
    GroupDim::new(n)
}

fn parse_n_range(cli: &Cli) -> sonharm::Result<Vec<usize>> {
    let raw = cli.n.as_deref().unwrap_or("3..5");
    if let Some((a, b)) = raw.split_once("..") {
        let lo: usize = a
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad range '{raw}'")))?;
        let hi: usize = b
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad range '{raw}'")))?;
        if lo < 3 || hi < lo {
            return Err(Error::InvalidInput(format!("bad range '{raw}'")));
        }
        Ok((lo..=hi).collect())
    } else {
        let n: usize = raw
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad range '{raw}'")))?;
        Ok(vec![n])
    }
}

fn parse_weight(group: GroupDim, raw: &str) -> sonharm::Result<DominantWeight> {
    let lambda: Vec<i64> = raw
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad weight entry '{s}'")))
        })
        .collect::<sonharm::Result<_>>()?;
    DominantWeight::new(group, lambda)
}

fn parse_theta(group: GroupDim, raw: &str) -> sonharm::Result<TorusAngles> {
    let theta: Vec<f64> = raw
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad angle '{s}'")))
        })
        .collect::<sonharm::Result<_>>()?;
    TorusAngles::new(group, theta)
}

fn density_diagnostics(group: GroupDim, diagnostics: &mut Vec<String>) {
    let density = WeylDensity::new(group);
    if let Some(ratio) = density.normalization_mismatch() {
        diagnostics.push(format!(
            "weyl density normalization: empirical constant differs from the closed form by \
             factor {ratio:.6} (n={}); the normalized density is used",
            group.n()
        ));
    }
}

fn cmd_spectrum(cli: &Cli, kappa_max: f64) -> sonharm::Result<Outcome> {
    let group = parse_single_n(cli)?;
    let lines = enumerate_dominant(group, kappa_max)?;
    let rows: Vec<Value> = lines
        .iter()
        .map(|l| {
            Ok(json!({
                "lambda": l.lambda(),
                "kappa": l.kappa(),
                "dim": sonharm::dimension(l)?,
            }))
        })
        .collect::<sonharm::Result<_>>()?;
    let mut csv = vec!["lambda,kappa,dim".to_string()];
    for l in &lines {
        let lam: Vec<String> = l.lambda().iter().map(|x| x.to_string()).collect();
        csv.push(format!("\"{}\",{},{}", lam.join(","), l.kappa(), l.dim()));
    }
    Ok(Outcome {
        payload: json!({
            "n": group.n(),
            "kappa_max": kappa_max,
            "lines": rows,
        }),
        diagnostics: Vec::new(),
        csv: Some(csv),
        artifact: None,
        exit: 0,
    })
}

fn cmd_character(cli: &Cli, weight: &str, theta: &str) -> sonharm::Result<Outcome> {
    let group = parse_single_n(cli)?;
    let w = parse_weight(group, weight)?;
    let line = SpectralLine::new(w);
    let angles = parse_theta(group, theta)?;
    let value = sonharm::character(&line, &angles)?;
    let parts = character_parts(&line, &angles)?;
    let mut diagnostics = Vec::new();
    if !line.is_self_dual() {
        diagnostics.push(
            "representation is not self-dual: its character is complex; `value` is the \
             orthonormal real combination (√2·Re for λ_p > 0, √2·Im for λ_p < 0)"
                .to_string(),
        );
    }
    let csv = vec![
        "lambda,theta,value,kappa".to_string(),
        format!(
            "\"{}\",\"{}\",{},{}",
            line.lambda()
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(","),
            angles
                .theta()
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(","),
            value,
            line.kappa()
        ),
    ];
    Ok(Outcome {
        payload: json!({
            "n": group.n(),
            "lambda": line.lambda(),
            "theta": angles.theta(),
            "value": value,
            "char_re": parts.re,
            "char_im": parts.im,
            "kappa": line.kappa(),
            "dim": line.dim(),
        }),
        diagnostics,
        csv: Some(csv),
        artifact: None,
        exit: 0,
    })
}

fn read_grid(cli: &Cli, path: &PathBuf) -> sonharm::Result<ClassFunctionGrid> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    let grid = ClassFunctionGrid::from_json(&text)?;
    if let Some(raw) = cli.n.as_deref() {
        let n: usize = raw
            .parse()
            .map_err(|_| Error::InvalidInput(format!("--n must be an integer, got '{raw}'")))?;
        if n != grid.grid().group().n() {
            return Err(Error::InvalidInput(format!(
                "--n {} does not match the grid file (n={})",
                n,
                grid.grid().group().n()
            )));
        }
    }
    if let Some(points) = cli.grid {
        if points != grid.grid().points() {
            return Err(Error::InvalidInput(format!(
                "--grid {} does not match the grid file (N={})",
                points,
                grid.grid().points()
            )));
        }
    }
    Ok(grid)
}

fn cmd_apply_l(
    cli: &Cli,
    form: &str,
    input: &PathBuf,
    kappa_max: f64,
) -> sonharm::Result<Outcome> {
    let form = LaplacianForm::parse(form)?;
    let grid = read_grid(cli, input)?;
    let mut diagnostics = Vec::new();
    density_diagnostics(grid.grid().group(), &mut diagnostics);
    let report = apply_l_grid(&grid, form, kappa_max)?;
    if report.fallback_nodes > 0 {
        diagnostics.push(format!(
            "{} nodes on or near the singular set were filled through the eigen-expansion \
             route (κ ≤ {kappa_max})",
            report.fallback_nodes
        ));
    }
    Ok(Outcome {
        payload: json!({ "form": form.name() }),
        diagnostics,
        csv: None,
        artifact: Some(report.output.to_json()),
        exit: 0,
    })
}

fn cmd_solve(cli: &Cli, kappa_max: f64, input: &PathBuf) -> sonharm::Result<Outcome> {
    let eta = read_grid(cli, input)?;
    let mut diagnostics = Vec::new();
    density_diagnostics(eta.grid().group(), &mut diagnostics);
    let outcome = solve_poisson(&eta, kappa_max)?;
    diagnostics.push(format!(
        "out-of-band truncation residual ‖η - P_κ η‖₂ = {:.6e}",
        outcome.out_of_band_residual
    ));
    Ok(Outcome {
        payload: json!({ "kappa_max": kappa_max }),
        diagnostics,
        csv: None,
        artifact: Some(outcome.solution.to_json()),
        exit: 0,
    })
}

fn cmd_integrate(cli: &Cli, input: &PathBuf) -> sonharm::Result<Outcome> {
    let grid = read_grid(cli, input)?;
    let mut diagnostics = Vec::new();
    density_diagnostics(grid.grid().group(), &mut diagnostics);
    let value = sonharm::integrate_class(&grid);
    Ok(Outcome {
        payload: json!({
            "n": grid.grid().group().n(),
            "N": grid.grid().points(),
            "integral": value,
        }),
        diagnostics,
        csv: Some(vec!["integral".to_string(), format!("{value}")]),
        artifact: None,
        exit: 0,
    })
}

fn suite_to_json(report: &SuiteReport) -> Value {
    json!({
        "suite": report.suite,
        "passed": report.passed(),
        "max_residual": report.max_residual(),
        "checks": report.checks.iter().map(|c| json!({
            "label": c.label,
            "residual": c.residual,
            "tolerance": c.tolerance,
            "pass": c.pass,
        })).collect::<Vec<_>>(),
    })
}

fn cmd_verify(cli: &Cli, suite: &str) -> sonharm::Result<Outcome> {
    let suite = Suite::parse(suite)?;
    let ns = parse_n_range(cli)?;
    let report = run_suite(suite, &ns, cli.seed)?;
    let mut csv = vec!["label,residual,tolerance,pass".to_string()];
    for c in &report.checks {
        csv.push(format!(
            "\"{}\",{},{},{}",
            c.label, c.residual, c.tolerance, c.pass
        ));
    }
    let exit = if report.passed() { 0 } else { 4 };
    Ok(Outcome {
        payload: suite_to_json(&report),
        diagnostics: Vec::new(),
        csv: Some(csv),
        artifact: None,
        exit,
    })
}
