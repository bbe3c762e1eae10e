use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use kneading_core::entropy::{entropy_from_adm, entropy_from_neg, markov_from_map, markov_from_orbit_map, Method};
use kneading_core::families::{default_tol, kneading_data_of, Family, MapSpec};
use kneading_core::scan::{emit_raster, find_bone_on_segment, scan_isentropes, BoneQuery, ScanSpec, Segment, Sidecar};
use kneading_core::symbolic::{check_kneading_admissible, KneadingData, Shape};
use kneading_core::{Error, Result};

/// Longest folding orbit followed when building a Markov partition.
const MARKOV_ORBIT: usize = 256;

#[derive(Parser, Debug)]
#[command(name = "kneading", version, about = "Kneading data and topological entropy of interval maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Kneading sequences of a map and their admissibility.
    Kneading {
        map: PathBuf,
        #[arg(long, default_value_t = 16)]
        depth: usize,
    },
    /// Topological entropy of a map.
    Entropy {
        map: PathBuf,
        #[arg(long, value_enum, default_value_t = EntropyMethod::Adm)]
        method: EntropyMethod,
        #[arg(long, default_value_t = 16)]
        depth: usize,
    },
    /// Markov matrix and growth number from a closed orbit table.
    Markov { orbit: PathBuf },
    /// Entropy raster over the parameter triangle.
    Scan {
        #[arg(long, value_enum)]
        family: ScanFamily,
        #[arg(long, allow_hyphen_values = true)]
        shape: Shape,
        #[arg(long, default_value_t = 41)]
        res: usize,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, value_enum, default_value_t = ScanMethod::Adm)]
        method: ScanMethod,
    },
    /// Parameters in a range where the turning point is periodic.
    Bone {
        #[arg(long, value_enum)]
        family: BoneFamily,
        #[arg(long)]
        period: usize,
        #[arg(long, value_parser = parse_range)]
        range: (f64, f64),
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 16)]
        depth: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EntropyMethod {
    Adm,
    Neg,
    Markov,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScanFamily {
    Cubic,
    Sawtooth,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScanMethod {
    Adm,
    Neg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BoneFamily {
    Tent,
    Quadratic,
    Sawtooth,
}

#[derive(Debug, Deserialize)]
struct OrbitTable {
    points: Vec<f64>,
    images: Vec<f64>,
}

#[derive(Serialize)]
struct KneadingOutput<'a> {
    shape: &'a Shape,
    depth: usize,
    sequences: Vec<String>,
    admissible: bool,
    violation: Option<String>,
}

fn parse_range(s: &str) -> std::result::Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected lo,hi")?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("{lo:?}: {e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("{hi:?}: {e}"))?;
    if !(lo < hi) {
        return Err(format!("empty range {lo},{hi}"));
    }
    Ok((lo, hi))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn print(value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Numeric(e.to_string()))?;
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(Error::Io {
            path: PathBuf::from("<stdout>"),
            source: e,
        }),
        _ => Ok(()),
    }
}

fn kneading_of(spec: &MapSpec, symbols: usize) -> Result<KneadingData> {
    let map = spec.build()?;
    kneading_data_of(&map, symbols, default_tol(&map))
}

fn sequences(k: &KneadingData) -> Vec<String> {
    k.sequences().iter().map(ToString::to_string).collect()
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Kneading { map, depth } => {
            let spec: MapSpec = read_json(&map)?;
            let k = kneading_of(&spec, depth)?;
            let report = check_kneading_admissible(&k);
            print(&KneadingOutput {
                shape: k.shape(),
                depth,
                sequences: sequences(&k),
                admissible: report.admissible,
                violation: report.violation.map(|v| format!("{v:?}")),
            })
        }
        Command::Entropy { map, method, depth } => {
            let spec: MapSpec = read_json(&map)?;
            match method {
                EntropyMethod::Adm => {
                    let k = kneading_of(&spec, depth + 8)?;
                    let e = entropy_from_adm(&k, depth)?;
                    print(&json!({ "estimate": e, "kneading": sequences(&k) }))
                }
                EntropyMethod::Neg => {
                    let k = kneading_of(&spec, 4 * depth + 8)?;
                    let e = entropy_from_neg(&k, depth)?;
                    print(&json!({ "estimate": e, "kneading": sequences(&k) }))
                }
                EntropyMethod::Markov => {
                    let r = markov_from_map(&spec.build()?, MARKOV_ORBIT)?;
                    print(&json!({ "estimate": r.entropy, "gamma": r.gamma, "matrix": r.matrix }))
                }
            }
        }
        Command::Markov { orbit } => {
            let table: OrbitTable = read_json(&orbit)?;
            print(&markov_from_orbit_map(&table.points, &table.images)?)
        }
        Command::Scan {
            family,
            shape,
            res,
            depth,
            out,
            workers,
            method,
        } => {
            let family = match family {
                ScanFamily::Cubic => Family::Cubic,
                ScanFamily::Sawtooth => Family::Sawtooth,
            };
            let method = match method {
                ScanMethod::Adm => Method::Adm,
                ScanMethod::Neg => Method::Neg,
            };
            let workers = workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, usize::from));
            let raster = scan_isentropes(ScanSpec::new(family, shape, res, depth, method, workers)?)?;
            let files = emit_raster(&raster, &out)?;
            print(&json!({
                "files": files,
                "elapsed_seconds": raster.elapsed().as_secs_f64(),
                "workers": workers,
                "summary": Sidecar::of(&raster),
            }))
        }
        Command::Bone {
            family,
            period,
            range: (lo, hi),
            tol,
            depth,
        } => {
            let family = match family {
                BoneFamily::Tent => Family::Tent,
                BoneFamily::Quadratic => Family::Quadratic,
                BoneFamily::Sawtooth => Family::Sawtooth,
            };
            let query = BoneQuery {
                family,
                shape: "+-".parse()?,
                segment: Segment::new(vec![lo], vec![hi])?,
                critical_index: 1,
                period,
                depth,
                tol,
            };
            print(&find_bone_on_segment(&query)?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
