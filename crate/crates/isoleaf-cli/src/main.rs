use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex;
use serde_json::json;

use isoleaf::leaf_atlas::AnyAtlas;
use isoleaf::period_algebra::{AnyCharacter, LatticeElement};
use isoleaf::render::{render_atlas, Style};
use isoleaf::teich_numeric::{chamber_trace, leaf_to_teich, Periods, TraceConfig};
use isoleaf::veech::veech_group;

#[derive(Parser, Debug)]
#[command(name = "isoleaf", version, about = "Isoperiodic leaves of H(1,1,-2)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify the leaf through a character.
    Classify(CharArgs),
    #[command(subcommand)]
    Atlas(AtlasCmd),
    /// Print the Veech group descriptor as JSON.
    Veech(CharArgs),
    #[command(subcommand)]
    Teich(TeichCmd),
    /// Draw an atlas as SVG.
    Render {
        #[arg(long)]
        atlas: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Debug, Clone)]
struct CharArgs {
    /// First period as `x,y`; entries `p` or `p/q`.
    #[arg(long, allow_hyphen_values = true)]
    g1: String,
    #[arg(long, allow_hyphen_values = true)]
    g2: String,
    #[arg(long, value_enum)]
    field: Field,
    /// Radicand for `--field quadratic`.
    #[arg(long)]
    d: Option<u64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Field {
    Gaussian,
    Rational,
    Quadratic,
}

impl Field {
    fn name(self) -> &'static str {
        match self {
            Field::Gaussian => "gaussian",
            Field::Rational => "rational",
            Field::Quadratic => "quadratic",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Positive,
    Negative,
    Arithmetic,
    Nonarith,
}

#[derive(Subcommand, Debug)]
enum AtlasCmd {
    /// Build a truncated atlas and write it as JSON.
    Build {
        #[arg(long, value_enum, conflicts_with_all = ["g1", "g2", "field"])]
        kind: Option<Kind>,
        #[arg(long, allow_hyphen_values = true, requires_all = ["g2", "field"])]
        g1: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        g2: Option<String>,
        #[arg(long, value_enum)]
        field: Option<Field>,
        /// Radicand; with `--kind nonarith` selects θ = √D − ⌊√D⌋.
        #[arg(long)]
        d: Option<u64>,
        #[arg(long, visible_alias = "kmax", default_value_t = 4)]
        bound: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the invariant suite; exit 1 on any failure.
    Check {
        file: PathBuf,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    Stats { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum TeichCmd {
    /// CSV trace of the cylinder chamber `CC_u`.
    Trace {
        #[arg(long, allow_hyphen_values = true, default_value = "1,0")]
        g1: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0,1")]
        g2: String,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, default_value_t = 16.0)]
        tmax: f64,
        /// Spacing of the samples `t = 0, dt, 2dt, …`.
        #[arg(long, default_value_t = 1.0)]
        dt: f64,
        #[arg(long, default_value_t = 1e-9)]
        precision: f64,
    },
    /// Map a leaf coordinate `z_rel` to `τ`.
    Invert {
        #[arg(long, allow_hyphen_values = true, default_value = "1,0")]
        g1: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0,1")]
        g2: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0,1")]
        tau_guess: String,
        #[arg(long, default_value_t = 1e-9)]
        precision: f64,
    },
}

/// Usage errors exit 2, failed checks and solver failures exit 1.
#[derive(Debug)]
enum Failure {
    Usage(anyhow::Error),
    Run(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Run(e)
    }
}

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

fn character(a: &CharArgs) -> Result<AnyCharacter, Failure> {
    AnyCharacter::parse(a.field.name(), a.d, &a.g1, &a.g2).map_err(|e| usage(anyhow!("bad character: {e}")))
}

fn normalized(chi: &AnyCharacter) -> String {
    let c = chi.classification();
    match c.kind {
        "Positive" => "(1, i)".into(),
        "Negative" => "(1, -i)".into(),
        "ArithReal" => format!("Z*{}", c.parameter.unwrap_or_default()),
        _ => format!("(1, {})", c.parameter.unwrap_or_default()),
    }
}

fn log_run(chi: &AnyCharacter, bound: Option<u64>) {
    let bound = bound.map(|b| b.to_string()).unwrap_or_else(|| "none".into());
    eprintln!("character {} normalized {} bound {bound}", chi.to_json(), normalized(chi));
}

fn atlas_character(a: &AnyAtlas) -> &AnyCharacter {
    match a {
        AnyAtlas::Rational(a) => &a.character,
        AnyAtlas::Quadratic(a) => &a.character,
    }
}

fn load_atlas(path: &PathBuf) -> Result<AnyAtlas, Failure> {
    let s = fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(usage)?;
    let a = AnyAtlas::from_json_str(&s).map_err(|e| usage(anyhow!("{}: {e}", path.display())))?;
    log_run(atlas_character(&a), Some(a.stats().bound));
    Ok(a)
}

fn float_pair(s: &str) -> Result<Complex<f64>, Failure> {
    let (x, y) = s.split_once(',').ok_or_else(|| usage(anyhow!("expected x,y: {s}")))?;
    let p = |t: &str| t.trim().parse::<f64>().map_err(|_| usage(anyhow!("not a number: {t}")));
    Ok(Complex::new(p(x)?, p(y)?))
}

fn int_pair(s: &str) -> Result<LatticeElement, Failure> {
    let (x, y) = s.split_once(',').ok_or_else(|| usage(anyhow!("expected p,q: {s}")))?;
    let p = |t: &str| t.trim().parse::<i64>().map_err(|_| usage(anyhow!("not an integer: {t}")));
    Ok(LatticeElement::new(p(x)?, p(y)?))
}

fn positive_precision(p: f64) -> Result<f64, Failure> {
    if p.is_finite() && p > 0.0 {
        Ok(p)
    } else {
        Err(usage(anyhow!("--precision must be positive")))
    }
}

fn isqrt(d: u64) -> u64 {
    let mut r = (d as f64).sqrt() as u64;
    while r * r > d {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= d {
        r += 1;
    }
    r
}

fn kind_character(kind: Kind, d: Option<u64>) -> Result<AnyCharacter, Failure> {
    let parsed = match kind {
        Kind::Positive => AnyCharacter::parse("gaussian", None, "1,0", "0,1"),
        Kind::Negative => AnyCharacter::parse("gaussian", None, "1,0", "0,-1"),
        Kind::Arithmetic => AnyCharacter::parse("rational", None, "1,0", "0,0"),
        Kind::Nonarith => {
            let d = d.unwrap_or(2);
            AnyCharacter::parse("quadratic", Some(d), "1,0", &format!("-{},1", isqrt(d)))
        }
    };
    parsed.map_err(|e| usage(anyhow!("bad character: {e}")))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Classify(a) => {
            let chi = character(&a)?;
            log_run(&chi, None);
            println!("{}", chi.classification());
        }
        Command::Veech(a) => {
            let chi = character(&a)?;
            log_run(&chi, None);
            let v = veech_group(&chi).map_err(|e| Failure::Run(e.into()))?;
            println!("{}", serde_json::to_string_pretty(&v.to_json()).expect("json"));
        }
        Command::Atlas(AtlasCmd::Build { kind, g1, g2, field, d, bound, out }) => {
            let chi = match (kind, g1, g2, field) {
                (Some(k), ..) => kind_character(k, d)?,
                (None, Some(g1), Some(g2), Some(field)) => character(&CharArgs { g1, g2, field, d })?,
                _ => return Err(usage(anyhow!("give --kind or all of --g1, --g2, --field"))),
            };
            log_run(&chi, Some(bound));
            let atlas = AnyAtlas::build(&chi, bound).map_err(|e| Failure::Run(e.into()))?;
            fs::write(&out, atlas.to_json_string()).with_context(|| format!("writing {}", out.display()))?;
            let s = atlas.stats();
            eprintln!("wrote {} ({} chambers, {} segments)", out.display(), s.chambers, s.segments);
        }
        Command::Atlas(AtlasCmd::Check { file, json }) => {
            let atlas = load_atlas(&file)?;
            let report = atlas.check();
            if json {
                println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("json"));
            } else {
                print!("{report}");
                for l in report.lines.iter().filter(|l| !l.pass) {
                    println!("counterexample {}", json!({ "check": l.name, "detail": l.detail }));
                }
            }
            if !report.passed() {
                return Err(Failure::Run(anyhow!("atlas check failed")));
            }
        }
        Command::Atlas(AtlasCmd::Stats { file }) => {
            let atlas = load_atlas(&file)?;
            println!("{}", serde_json::to_string_pretty(&atlas.stats()).expect("json"));
        }
        Command::Teich(TeichCmd::Trace { g1, g2, u, tmax, dt, precision }) => {
            let chi = AnyCharacter::parse("gaussian", None, &g1, &g2)
                .map_err(|e| usage(anyhow!("bad character: {e}")))?;
            let u = int_pair(&u)?;
            let precision = positive_precision(precision)?;
            if !(dt > 0.0 && tmax >= 0.0 && tmax.is_finite()) {
                return Err(usage(anyhow!("need dt > 0 and tmax >= 0")));
            }
            log_run(&chi, None);
            let n = (tmax / dt).floor() as usize;
            let ts: Vec<f64> = (0..=n).map(|k| k as f64 * dt).collect();
            let cfg = TraceConfig { precision, ..TraceConfig::default() };
            let trace = chamber_trace(&chi, u, &ts, &cfg).map_err(|e| Failure::Run(e.into()))?;
            print!("{}", trace.csv());
        }
        Command::Teich(TeichCmd::Invert { g1, g2, z, tau_guess, precision }) => {
            let g = Periods::new(float_pair(&g1)?, float_pair(&g2)?);
            let z = float_pair(&z)?;
            let tau_guess = float_pair(&tau_guess)?;
            let precision = positive_precision(precision)?;
            eprintln!("periods ({}, {}) precision {precision}", g.g1, g.g2);
            let s = leaf_to_teich(&g, z, tau_guess, precision).map_err(|e| Failure::Run(e.into()))?;
            let out = json!({
                "tau": [s.tau.tau.re, s.tau.tau.im],
                "z0": [s.z0.re, s.z0.im],
                "z_rel": [s.z_rel.re, s.z_rel.im],
                "residual": s.residual,
                "iterations": s.iterations,
            });
            println!("{out}");
        }
        Command::Render { atlas, out } => {
            let a = load_atlas(&atlas)?;
            let svg = render_atlas(&a, &Style::default()).map_err(|e| Failure::Run(e.into()))?;
            fs::write(&out, svg).with_context(|| format!("writing {}", out.display()))?;
        }
    }
    Ok(())
}

fn init_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("ISOLEAF_THREADS") else { return Ok(()) };
    let n: usize = v.parse().map_err(|_| usage(anyhow!("ISOLEAF_THREADS must be a positive integer")))?;
    if n == 0 {
        return Err(usage(anyhow!("ISOLEAF_THREADS must be a positive integer")));
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Run(e.into()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match init_threads().and_then(|_| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn isqrt_floors() {
        assert_eq!(isqrt(2), 1);
        assert_eq!(isqrt(9), 3);
        assert_eq!(isqrt(15), 3);
    }

    #[test]
    fn nonarith_kind_gives_theta_in_unit_interval() {
        let chi = kind_character(Kind::Nonarith, Some(3)).unwrap();
        assert_eq!(chi.classification().kind, "NonArithReal");
    }
}
