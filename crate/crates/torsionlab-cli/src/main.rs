use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use torsionlab::experiments::{
    exp_coarea, exp_convex_refined, exp_curvilinear_divergence, exp_cusp, exp_exponent, exp_polygon_finiteness,
    exp_regular_polygon, exp_sector_constant, exp_sector_equivalence, exp_solve, exp_sublevel_chain, write_outputs,
    Check, ConvexFamily, ExperimentConfig, ExperimentReport, MeshConfig, Table, TestFunction,
};
use torsionlab::geometry::{make_l_shape, make_regular_polygon, unit_square, DomainSpec, Polygon};
use torsionlab::measures::beta_integral;
use torsionlab::solver::{FieldRecord, ScalarField};
use torsionlab::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_ASSERTION: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "torsionlab", version, about = "Torsion function and beta-integral experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory for results.csv, results.json and plotdata/.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed recorded with the outputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug, Clone)]
struct MeshArgs {
    /// Coarsest target element size.
    #[arg(long, default_value_t = 0.1)]
    h0: f64,
    /// Number of meshes in the refinement sequence.
    #[arg(long, default_value_t = 3)]
    levels: usize,
    /// Grading ratio at corners.
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    /// Graded layers per corner.
    #[arg(long, default_value_t = 4)]
    depth: usize,
}

impl MeshArgs {
    fn config(&self) -> MeshConfig {
        MeshConfig { h0: self.h0, levels: self.levels, q: self.q, depth: self.depth }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum FunctionKind {
    Paraboloid,
    Quartic,
    Anisotropic,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum FamilyKind {
    Regular,
    Rectangles,
    Truncated,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Regular N-gons of inradius 1 against the disc limit.
    RegularPolygon {
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [8, 16, 32, 64])]
        n: Vec<usize>,
        #[command(flatten)]
        mesh: MeshArgs,
    },
    /// Sector equivalence I/(θ^{1−2β} r^{2(1−β)}).
    Sector {
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        /// Half-apertures in radians.
        #[arg(long, value_delimiter = ',', default_values_t = [PI / 6.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0])]
        theta: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0])]
        r: Vec<f64>,
        #[command(flatten)]
        mesh: MeshArgs,
    },
    /// Polygon finiteness with per-corner budgets.
    Polygon {
        /// Preset (square, l-shape, hexagon), a JSON domain spec, or a path to one.
        #[arg(long, default_value = "l-shape")]
        domain: String,
        #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.5, 0.75])]
        beta: Vec<f64>,
        #[command(flatten)]
        mesh: MeshArgs,
    },
    /// Truncated integrals on the curvilinear triangle.
    Curvilinear {
        #[arg(long, default_value_t = 0.75)]
        beta0: f64,
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        /// Truncation abscissae, decreasing.
        #[arg(long, value_delimiter = ',')]
        delta: Option<Vec<f64>>,
        #[command(flatten)]
        mesh: MeshArgs,
    },
    /// Power cusps against the finiteness criterion.
    Cusp {
        #[arg(long, value_delimiter = ',', default_values_t = [1.5, 2.0, 3.0])]
        p: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])]
        beta: Vec<f64>,
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        /// Exit with status 2 when any case is divergent.
        #[arg(long)]
        fail_on_divergent: bool,
        #[command(flatten)]
        mesh: MeshArgs,
    },
    /// Sublevel-set chain for a convex test function.
    Sublevel {
        #[arg(long, value_enum, default_value_t = FunctionKind::Paraboloid)]
        function: FunctionKind,
        /// Only used by the anisotropic function.
        #[arg(long, default_value_t = 1e-3)]
        epsilon: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.5, 1.0])]
        t: Vec<f64>,
        #[command(flatten)]
        mesh: MeshArgs,
    },
    /// Refined bound across a family of convex polygons.
    ConvexRefined {
        #[arg(long, value_enum, default_value_t = FamilyKind::Regular)]
        family: FamilyKind,
        /// N for regular, ε for rectangles, j for truncated triangles.
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        #[command(flatten)]
        mesh: MeshArgs,
    },
    /// Coarea identity for the distance function on a convex polygon.
    Coarea {
        #[arg(long, default_value = "square")]
        domain: String,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long, default_value_t = 0.25)]
        t: f64,
    },
    /// Corner exponents α(n, θ).
    Exponent {
        #[arg(long, value_delimiter = ',', default_values_t = [2, 3, 4, 5])]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [PI / 6.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0])]
        theta: Vec<f64>,
    },
    /// Closed-form sector constants against quadrature.
    SectorConstant {
        #[arg(long, value_delimiter = ',', default_values_t = [PI / 6.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0])]
        theta: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.5, 0.75])]
        beta: Vec<f64>,
    },
    /// Solve the torsion problem and store the fields as JSON.
    Solve {
        #[arg(long)]
        domain: String,
        #[command(flatten)]
        mesh: MeshArgs,
    },
    /// β-integral of a stored field.
    BetaIntegral {
        /// Field JSON written by `solve`.
        #[arg(long)]
        field: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = [0.5])]
        beta: Vec<f64>,
    },
}

fn parse_domain(text: &str) -> Result<DomainSpec, Error> {
    let preset = |p: Polygon| DomainSpec::Polygon { vertices: p.vertices().to_vec() };
    match text {
        "square" => return Ok(preset(unit_square())),
        "l-shape" => return Ok(preset(make_l_shape())),
        "hexagon" => return Ok(preset(make_regular_polygon(6, 1.0)?)),
        _ => {}
    }
    let body = if text.trim_start().starts_with('{') {
        text.to_string()
    } else {
        std::fs::read_to_string(text).map_err(|e| Error::InvalidArgument(format!("cannot read domain {text}: {e}")))?
    };
    serde_json::from_str(&body).map_err(|e| Error::InvalidArgument(format!("bad domain spec: {e}")))
}

fn integral_values(values: &[f64], what: &str) -> Result<Vec<usize>, Error> {
    values
        .iter()
        .map(|&v| {
            if v >= 1.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(Error::InvalidArgument(format!("{what} must be positive integers, got {v}")))
            }
        })
        .collect()
}

struct Run {
    report: ExperimentReport,
    config: ExperimentConfig,
}

fn config(name: &str, betas: &[f64], mesh: Option<&MeshArgs>, params: Value) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(name);
    c.betas = betas.to_vec();
    if let Some(m) = mesh {
        c.mesh = m.config();
    }
    if let Value::Object(map) = params {
        c.params = map;
    }
    c
}

fn run(cmd: &Command, out: Option<&Path>) -> Result<Run, Error> {
    let (report, config) = match cmd {
        Command::RegularPolygon { beta, n, mesh } => {
            let c = config("regular-polygon", &[*beta], Some(mesh), json!({ "n": n }));
            (exp_regular_polygon(*beta, n, &mesh.config())?, c)
        }
        Command::Sector { beta, theta, r, mesh } => {
            let c = config("sector", &[*beta], Some(mesh), json!({ "theta": theta, "r": r, "closure": "arc" }));
            (exp_sector_equivalence(*beta, theta, r, &mesh.config())?, c)
        }
        Command::Polygon { domain, beta, mesh } => {
            let spec = parse_domain(domain)?;
            let poly = spec.build()?.polygon;
            let mut c = config("polygon", beta, Some(mesh), json!({}));
            c.domain = Some(spec);
            (exp_polygon_finiteness(&poly, beta, &mesh.config())?, c)
        }
        Command::Curvilinear { beta0, epsilon, delta, mesh } => {
            let deltas = delta.clone().unwrap_or_else(|| (0..9).map(|k| 0.1 * 10f64.powf(-(k as f64) / 4.0)).collect());
            let mut c = config("curvilinear", &[*beta0], Some(mesh), json!({ "epsilon": epsilon, "delta": deltas }));
            c.domain = Some(DomainSpec::Curvilinear { beta: *beta0, epsilon: *epsilon, m: 128 });
            (exp_curvilinear_divergence(*beta0, &deltas, *epsilon, &mesh.config())?, c)
        }
        Command::Cusp { p, beta, epsilon, eta, fail_on_divergent, mesh } => {
            let c = config(
                "cusp",
                beta,
                Some(mesh),
                json!({ "p": p, "epsilon": epsilon, "eta": eta, "fail_on_divergent": fail_on_divergent }),
            );
            (exp_cusp(p, beta, *epsilon, *eta, &mesh.config(), *fail_on_divergent)?, c)
        }
        Command::Sublevel { function, epsilon, t, mesh } => {
            let f = match function {
                FunctionKind::Paraboloid => TestFunction::Paraboloid,
                FunctionKind::Quartic => TestFunction::Quartic,
                FunctionKind::Anisotropic => TestFunction::Anisotropic { epsilon: *epsilon },
            };
            let c = config("sublevel", &[0.5], Some(mesh), json!({ "function": f, "t": t }));
            (exp_sublevel_chain(&f, t, &mesh.config())?, c)
        }
        Command::ConvexRefined { family, values, beta, mesh } => {
            let fam = match family {
                FamilyKind::Regular => ConvexFamily::Regular(integral_values(
                    values.as_deref().unwrap_or(&[4.0, 6.0, 8.0, 12.0, 16.0]),
                    "N",
                )?),
                FamilyKind::Rectangles => {
                    ConvexFamily::ThinRectangles(values.clone().unwrap_or(vec![0.5, 0.25, 0.125, 0.0625]))
                }
                FamilyKind::Truncated => ConvexFamily::TruncatedTriangles(integral_values(
                    values.as_deref().unwrap_or(&[2.0, 4.0, 8.0, 16.0]),
                    "j",
                )?),
            };
            let c = config("convex-refined", &[*beta], Some(mesh), json!({ "family": fam }));
            (exp_convex_refined(&fam, *beta, &mesh.config())?, c)
        }
        Command::Coarea { domain, alpha, t } => {
            let spec = parse_domain(domain)?;
            let poly = spec.build()?.polygon;
            let mut c = config("coarea", &[], None, json!({ "alpha": alpha, "t": t }));
            c.domain = Some(spec);
            (exp_coarea(&poly, *alpha, *t)?, c)
        }
        Command::Exponent { n, theta } => {
            let c = config("exponent", &[], None, json!({ "n": n, "theta": theta }));
            (exp_exponent(n, theta)?, c)
        }
        Command::SectorConstant { theta, beta } => {
            let c = config("sector-constant", beta, None, json!({ "theta": theta }));
            (exp_sector_constant(theta, beta)?, c)
        }
        Command::Solve { domain, mesh } => {
            let spec = parse_domain(domain)?;
            let (report, fields) = exp_solve(&spec, &mesh.config())?;
            if let Some(dir) = out {
                std::fs::create_dir_all(dir.join("fields"))?;
                for (l, f) in fields.iter().enumerate() {
                    let text = serde_json::to_string(&f.to_record()).expect("fields serialise");
                    std::fs::write(dir.join("fields").join(format!("level{l}.json")), text)?;
                }
            }
            let mut c = config("solve", &[], Some(mesh), json!({}));
            c.domain = Some(spec);
            (report, c)
        }
        Command::BetaIntegral { field, beta } => {
            let text = std::fs::read_to_string(field)?;
            let rec: FieldRecord =
                serde_json::from_str(&text).map_err(|e| Error::InvalidArgument(format!("bad field file: {e}")))?;
            let f = ScalarField::from_record(rec)?;
            let mut table = Table::new(&["beta", "value", "tainted", "h", "residual"]);
            for &b in beta {
                let r = beta_integral(&f, b)?;
                table.push(vec![b.into(), r.value.into(), r.tainted.into(), f.h.into(), f.residual.into()]);
            }
            let mut report = ExperimentReport::new("beta-integral", table);
            report.checks.push(Check::new(
                "no-clamping",
                f.clamped == 0,
                format!("{} clamped nodal values", f.clamped),
            ));
            let c = config("beta-integral", beta, None, json!({ "field": field }));
            (report, c)
        }
    };
    Ok(Run { report, config })
}

fn summary(report: &ExperimentReport) {
    println!("{}: {}", report.experiment, if report.passed() { "PASS" } else { "FAIL" });
    for c in &report.checks {
        println!("  [{}] {}: {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail);
    }
    for n in &report.notes {
        println!("  note: {n}");
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli.command, cli.out.as_deref()) {
        Ok(Run { report, mut config }) => {
            config.seed = cli.seed;
            config.out_dir = cli.out.as_ref().map(|p| p.display().to_string());
            if let Some(dir) = &cli.out {
                if let Err(e) = write_outputs(&report, &config, dir) {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_USAGE);
                }
            }
            summary(&report);
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_ASSERTION)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_USAGE })
        }
    }
}
