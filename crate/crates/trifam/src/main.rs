use std::fs::File;
use std::io::{self, BufReader, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use trifam::bound;
use trifam::clique::{bron_kerbosch_oracle, build_graph, dimacs_string, max_clique};
use trifam::family::{depth, f_count, family_to_string, is_intersecting_family, read_family};
use trifam::geom::fmt_rat;
use trifam::inductive::certified_upper_bound;
use trifam::mc::{check_thm4, discretized_check, CircleDistribution, FamilyPredicate};
use trifam::pointset::{
    choose_anchor, gen_near_regular, gen_random_general, gen_three_cluster, pointset_to_string,
    read_pointset, PointSet,
};
use trifam::replacement::run_replacement;
use trifam::strips::{double_count_certificate, enumerate_nontrivial_strips};
use trifam::{Error, Mode, Result};

#[derive(Parser)]
#[command(name = "trifam", about = "Intersecting families of spanned triangles", version)]
struct Cli {
    /// Seed for every randomized operation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Intersection mode: open interiors or closed triangles.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Open)]
    mode: ModeArg,
    /// Force single-threaded execution (the default; kept for scripting).
    #[arg(long, global = true)]
    single_thread: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Open,
    Closed,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Open => Mode::Open,
            ModeArg::Closed => Mode::Closed,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    NearRegular,
    RandomGeneral,
    ThreeCluster,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a point set and print it.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long)]
        n: usize,
        /// Coordinate bound for random-general generation.
        #[arg(long, default_value_t = 1000)]
        bound: i64,
        /// Cluster spread in turns for three-cluster generation.
        #[arg(long, default_value_t = 0.02)]
        spread: f64,
    },
    /// Print a general-position anchor for a point set.
    Anchor {
        #[arg(long, default_value = "-")]
        points: String,
    },
    /// Check that a family is pairwise intersecting; exit 1 with the
    /// violating pair otherwise.
    Verify {
        #[arg(long, default_value = "-")]
        points: String,
        #[arg(long)]
        family: String,
    },
    /// Number of spanned triangles strictly containing a point.
    Depth {
        #[arg(long, default_value = "-")]
        points: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Table of the extremal counts F(n).
    FnTable {
        #[arg(long, default_value_t = 3)]
        from: usize,
        #[arg(long, default_value_t = 12)]
        to: usize,
    },
    /// Enumerate the nontrivial strips of a convex point set.
    Strips {
        #[arg(long, default_value = "-")]
        points: String,
    },
    /// Double-counting certificate for an intersecting family.
    CertifyDc {
        #[arg(long, default_value = "-")]
        points: String,
        #[arg(long)]
        family: String,
    },
    /// Run the replacement procedure and print its trace.
    Replace {
        #[arg(long, default_value = "-")]
        points: String,
        #[arg(long)]
        family: String,
    },
    /// Inductive peeling certificate concluding |F| <= F(n).
    CertifyPeel {
        #[arg(long, default_value = "-")]
        points: String,
        #[arg(long)]
        family: String,
    },
    /// Exact maximum intersecting family (branch and bound).
    Solve {
        #[arg(long, default_value = "-")]
        points: String,
        /// Node-count budget for the search.
        #[arg(long, default_value_t = 200_000_000)]
        budget: u64,
    },
    /// Reference maximum size by exhaustive clique enumeration (small hosts).
    Oracle {
        #[arg(long, default_value = "-")]
        points: String,
    },
    /// Export the triangle intersection graph in DIMACS format.
    ExportDimacs {
        #[arg(long, default_value = "-")]
        points: String,
        /// Output path; - for stdout.
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Monte Carlo quarter-bound check for the fixed-point family.
    Mc {
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// Fixed point, as "x,y" inside the unit disk.
        #[arg(long, default_value = "0,0")]
        point: String,
        /// Piecewise-constant measure "b0,b1,...,bk:w1,...,wk"; omit for uniform.
        #[arg(long)]
        measure: Option<String>,
    },
    /// Two-stage (point set, then triple) estimate of the same measure.
    Discretize {
        #[arg(long, default_value_t = 30)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value = "0,0")]
        point: String,
        #[arg(long)]
        measure: Option<String>,
    },
    /// Certify an upper bound with a named strategy.
    Bound {
        #[arg(long, default_value = "-")]
        points: String,
        #[arg(long)]
        family: String,
        /// Strategy name; see --method list.
        #[arg(long, default_value = "peel")]
        method: String,
        /// List the registered strategies and exit.
        #[arg(long)]
        list: bool,
    },
}

fn load_points(path: &str) -> Result<PointSet> {
    if path == "-" {
        let stdin = io::stdin();
        read_pointset(stdin.lock())
    } else {
        read_pointset(BufReader::new(File::open(path)?))
    }
}

fn load_family(path: &str, mode: Mode) -> Result<trifam::Family> {
    if path == "-" {
        let stdin = io::stdin();
        read_family(stdin.lock(), mode)
    } else {
        read_family(BufReader::new(File::open(path)?), mode)
    }
}

fn parse_point_f64(s: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::InvalidArg(format!("expected x,y but got '{s}'")));
    }
    let x: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArg(format!("bad coordinate '{}'", parts[0])))?;
    let y: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArg(format!("bad coordinate '{}'", parts[1])))?;
    Ok((x, y))
}

fn parse_measure(spec: Option<&str>) -> Result<CircleDistribution> {
    let Some(spec) = spec else {
        return Ok(CircleDistribution::Uniform);
    };
    let (breaks, weights) = spec
        .split_once(':')
        .ok_or_else(|| Error::InvalidArg("measure spec needs breaks:weights".into()))?;
    let parse_list = |s: &str| -> Result<Vec<f64>> {
        s.split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidArg(format!("bad number '{v}' in measure spec")))
            })
            .collect()
    };
    CircleDistribution::piecewise(parse_list(breaks)?, parse_list(weights)?)
}

fn parse_rat_arg(s: &str) -> Result<trifam::Rat> {
    trifam::pointset::parse_rat(s, 0)
}

fn run(cli: Cli) -> Result<()> {
    let mode: Mode = cli.mode.into();
    let mut out = io::stdout().lock();
    match cli.command {
        Command::Gen { kind, n, bound, spread } => {
            let ps = match kind {
                GenKind::NearRegular => gen_near_regular(n),
                GenKind::RandomGeneral => gen_random_general(n, bound, cli.seed)?,
                GenKind::ThreeCluster => gen_three_cluster(n, spread)?,
            };
            out.write_all(pointset_to_string(&ps).as_bytes())?;
        }
        Command::Anchor { points } => {
            let ps = load_points(&points)?;
            let anchor = choose_anchor(&ps);
            writeln!(out, "{} {}", fmt_rat(&anchor.point.x), fmt_rat(&anchor.point.y))?;
        }
        Command::Verify { points, family } => {
            let ps = load_points(&points)?;
            let fam = load_family(&family, mode)?;
            match is_intersecting_family(&ps, &fam)? {
                None => writeln!(out, "intersecting: {} triangles", fam.len())?,
                Some((a, b)) => return Err(Error::NotIntersecting(a, b)),
            }
        }
        Command::Depth { points, x, y } => {
            let ps = load_points(&points)?;
            let p = trifam::Point::new(parse_rat_arg(&x)?, parse_rat_arg(&y)?);
            writeln!(out, "depth={}", depth(&ps, &p)?)?;
        }
        Command::FnTable { from, to } => {
            if from < 3 || to < from {
                return Err(Error::InvalidArg("need 3 <= from <= to".into()));
            }
            for n in from..=to {
                writeln!(out, "{} {}", n, f_count(n)?)?;
            }
        }
        Command::Strips { points } => {
            let ps = load_points(&points)?;
            let strips = enumerate_nontrivial_strips(&ps)?;
            writeln!(out, "nontrivial-strips: {}", strips.len())?;
            for (i, s) in strips.iter().enumerate() {
                let path: Vec<String> = s.path.iter().map(|v| v.to_string()).collect();
                let tris: Vec<String> = s.triangles.iter().map(|t| t.to_string()).collect();
                writeln!(
                    out,
                    "strip {i}: step={} path={} triangles={}",
                    s.step,
                    path.join(","),
                    tris.join(" ")
                )?;
            }
        }
        Command::CertifyDc { points, family } => {
            let ps = load_points(&points)?;
            let fam = load_family(&family, mode)?;
            let anchor = choose_anchor(&ps);
            let cert = double_count_certificate(&ps, &anchor, &fam)?;
            out.write_all(cert.render().as_bytes())?;
        }
        Command::Replace { points, family } => {
            let ps = load_points(&points)?;
            let fam = load_family(&family, mode)?;
            let anchor = choose_anchor(&ps);
            let trace = run_replacement(&ps, &fam, &anchor)?;
            out.write_all(trace.render().as_bytes())?;
        }
        Command::CertifyPeel { points, family } => {
            let ps = load_points(&points)?;
            let fam = load_family(&family, mode)?;
            let cert = certified_upper_bound(&ps, &fam)?;
            out.write_all(cert.render().as_bytes())?;
        }
        Command::Solve { points, budget } => {
            let ps = load_points(&points)?;
            let g = build_graph(&ps, mode)?;
            let res = max_clique(&ps, &g, budget)?;
            out.write_all(family_to_string(&res.best).as_bytes())?;
            writeln!(out, "{}", res.summary())?;
        }
        Command::Oracle { points } => {
            let ps = load_points(&points)?;
            let g = build_graph(&ps, mode)?;
            writeln!(out, "max={}", bron_kerbosch_oracle(&g)?)?;
        }
        Command::ExportDimacs { points, out: path } => {
            let ps = load_points(&points)?;
            let g = build_graph(&ps, mode)?;
            let text = dimacs_string(&g);
            if path == "-" {
                out.write_all(text.as_bytes())?;
            } else {
                File::create(&path)?.write_all(text.as_bytes())?;
            }
        }
        Command::Mc { samples, point, measure } => {
            let (x, y) = parse_point_f64(&point)?;
            let dist = parse_measure(measure.as_deref())?;
            let pred = FamilyPredicate::ContainsFixedPoint { x, y };
            let report = check_thm4(&pred, &dist, samples, cli.seed)?;
            out.write_all(report.render().as_bytes())?;
        }
        Command::Discretize { n, trials, point, measure } => {
            let (x, y) = parse_point_f64(&point)?;
            let dist = parse_measure(measure.as_deref())?;
            let pred = FamilyPredicate::ContainsFixedPoint { x, y };
            let report = discretized_check(&pred, &dist, n, trials, cli.seed)?;
            out.write_all(report.render().as_bytes())?;
        }
        Command::Bound { points, family, method, list } => {
            if list {
                for m in bound::registry() {
                    writeln!(out, "{}: {}", m.name(), m.description())?;
                }
                return Ok(());
            }
            let ps = load_points(&points)?;
            let fam = load_family(&family, mode)?;
            let anchor = choose_anchor(&ps);
            let m = bound::lookup(&method)?;
            let outcome = m.certify(&ps, &anchor, &fam)?;
            out.write_all(outcome.transcript.as_bytes())?;
            writeln!(
                out,
                "bound-method={} size={} bound={} ok={}",
                m.name(),
                outcome.family_size,
                outcome.bound,
                outcome.family_size <= outcome.bound
            )?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

