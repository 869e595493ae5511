//! `waistlab`: runs the verification experiments and writes JSON reports
//! (plus optional CSV tables for plotting).

pub mod config;
pub mod doc;
pub mod suite;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use waist_core::content::{lower_minkowski_content, SetRef};
use waist_core::filling::{boundary, fill, CoverLedger, Mod2Chain};
use waist_core::fibrations::{explore_even_sphere, FiberMap, VerifyOptions};
use waist_core::integral_geometry::crofton_volume;
use waist_core::isoperimetry::{boundary_content, isoperimetric_bound, BinaryField};
use waist_core::mesh::SubmanifoldMesh;
use waist_core::report::BoundRef;
use waist_core::spaces::Space;
use waist_core::sweepout::{algebraic_family_check, cup_bound_check, interpolating_family_check};
use waist_core::{Error, Result};

use config::{parse_config, parse_list, Params};
use doc::{join, num, Record, ReportDocument, Table};
use suite::Section;

pub const WORKERS_ENV: &str = "WAISTLAB_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "waistlab", version, about = "Numerical checks of waist, width, isoperimetric and filling inequalities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// key = value file with [section] headers; flags override it
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// seed for every stochastic quantity
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// worker threads (default: $WAISTLAB_WORKERS, then all cores)
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// JSON report path (default: stdout)
    #[arg(long, short = 'o', global = true)]
    pub out: Option<PathBuf>,
    /// directory for CSV tables
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fiber volumes of explicit maps against waist bounds
    Waist {
        #[command(subcommand)]
        cmd: WaistCmd,
    },
    /// Integral-geometric volume of a mesh in a sphere
    Crofton {
        #[command(subcommand)]
        cmd: CroftonCmd,
    },
    /// Minkowski content from neighborhood volumes
    Content {
        #[command(subcommand)]
        cmd: ContentCmd,
    },
    /// Lipschitz and determinant certificates of the transport maps
    Transport {
        #[command(subcommand)]
        cmd: TransportCmd,
    },
    /// Widths and central sections of convex bodies
    Convex {
        #[command(subcommand)]
        cmd: ConvexCmd,
    },
    /// Boundary content of half-volume sets in tori and boxes
    Iso {
        #[command(subcommand)]
        cmd: IsoCmd,
    },
    /// Bent sweepout families on the cubical grid
    Sweepout {
        #[command(subcommand)]
        cmd: SweepoutCmd,
    },
    /// Fillings of relative mod-2 cycles
    Fill {
        #[command(subcommand)]
        cmd: FillCmd,
    },
    /// The full acceptance matrix with pinned seeds
    Suite {
        /// comma-separated criteria to run
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum WaistCmd {
    Verify {
        #[arg(long)]
        map: Option<String>,
        #[arg(long)]
        bound: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        resolution: Option<usize>,
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        mesh_tolerance: Option<f64>,
    },
    Profile {
        #[arg(long)]
        map: Option<String>,
    },
    /// Search even maps of the 2-sphere (exploratory, asserts nothing)
    Explore {
        #[arg(long)]
        candidates: Option<usize>,
        #[arg(long)]
        resolution: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CroftonCmd {
    Estimate {
        /// mesh file, or builtin:great-circle / builtin:s1-in-s3
        #[arg(long)]
        mesh: Option<String>,
        #[arg(long)]
        codim: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        /// known volume to compare against
        #[arg(long)]
        expect: Option<f64>,
        #[arg(long)]
        rel_tol: Option<f64>,
    },
}

#[derive(Subcommand, Debug)]
pub enum ContentCmd {
    Minkowski {
        /// sphere:n, cube:n, euclidean:n, torus:a1,..,an, rp:n
        #[arg(long)]
        space: Option<String>,
        #[arg(long)]
        mesh: Option<String>,
        #[arg(long)]
        codim: Option<usize>,
        /// decreasing t values, comma separated
        #[arg(long)]
        schedule: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum TransportCmd {
    Check {
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        pairs: Option<usize>,
        #[arg(long)]
        tolerance: Option<f64>,
    },
}

#[derive(Subcommand, Debug)]
pub enum ConvexCmd {
    Width {
        /// cube:n, ball:n, cross:n, box:h1,..,hn, pball:n,p
        #[arg(long)]
        body: Option<String>,
        #[arg(long)]
        iterations: Option<usize>,
    },
    Section {
        #[arg(long)]
        body: Option<String>,
        #[arg(long)]
        codim: Option<usize>,
        #[arg(long)]
        sections: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
    },
    Zhang {
        #[arg(long)]
        body: Option<String>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum IsoCmd {
    Torus {
        #[arg(long)]
        lengths: Option<String>,
        #[arg(long)]
        resolution: Option<usize>,
        /// binary field file instead of the half slab
        #[arg(long)]
        field: Option<PathBuf>,
        #[arg(long)]
        tolerance: Option<f64>,
    },
    Box {
        #[arg(long)]
        lengths: Option<String>,
        #[arg(long)]
        resolution: Option<usize>,
        #[arg(long)]
        sets: Option<usize>,
        #[arg(long)]
        field: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum SweepoutCmd {
    Bend {
        /// grid sizes, e.g. 2..8 or 2,4
        #[arg(long)]
        ell: Option<String>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        resolution: Option<usize>,
    },
    Cup {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        resolution: Option<usize>,
    },
    Algebraic {
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        members: Option<usize>,
        #[arg(long)]
        lines: Option<usize>,
        /// curves through random points instead of random coefficients
        #[arg(long)]
        interpolating: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum FillCmd {
    Demo {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        instances: Option<usize>,
        #[arg(long)]
        max_edge: Option<f64>,
        /// fill this chain file instead of random cycles
        #[arg(long)]
        cycle: Option<PathBuf>,
        /// write the output ledger as CSV (with --cycle)
        #[arg(long)]
        ledger_out: Option<PathBuf>,
        /// write the filling chain (with --cycle)
        #[arg(long)]
        filling_out: Option<PathBuf>,
    },
    Assign {
        #[arg(long)]
        per_k: Option<usize>,
    },
    Partition {
        #[arg(long)]
        count: Option<usize>,
    },
}

pub struct Output {
    pub doc: ReportDocument,
    pub tables: Vec<Table>,
}

/// Exit status for an error: 2 for anything the caller got wrong.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_) | Error::Parse { .. } | Error::Domain(_) | Error::Unsupported(_) => 2,
        _ => 1,
    }
}

pub fn worker_count(flag: Option<usize>, file: &BTreeMap<String, String>) -> Result<usize> {
    let from_env = std::env::var(WORKERS_ENV).ok();
    let raw = flag.map(|w| w.to_string()).or_else(|| file.get("workers").cloned()).or(from_env);
    match raw {
        Some(s) => match s.trim().parse::<usize>() {
            Ok(w) if w > 0 => Ok(w),
            _ => Err(Error::Usage(format!("worker count must be a positive integer, got `{s}`"))),
        },
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn read(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_mesh(spec: &str) -> Result<SubmanifoldMesh> {
    match spec.strip_prefix("builtin:") {
        Some(name) => Ok(suite::builtin_mesh(name)?.0),
        None => SubmanifoldMesh::parse(&read(std::path::Path::new(spec))?),
    }
}

fn parse_space(spec: &str) -> Result<Space> {
    let bad = || Error::Usage(format!("bad space `{spec}` (sphere:n, cube:n, euclidean:n, torus:a1,..,an, rp:n)"));
    let (kind, rest) = spec.split_once(':').ok_or_else(bad)?;
    let int = || rest.trim().parse::<usize>().map_err(|_| bad());
    match kind {
        "sphere" => Ok(Space::Sphere(int()?)),
        "cube" => Ok(Space::cube(int()?, 1.0)),
        "euclidean" => Ok(Space::Euclidean(int()?)),
        "rp" => Ok(Space::RealProjective(int()?)),
        "torus" => Space::torus(parse_list(rest)?),
        _ => Err(bad()),
    }
}

fn bound_tag(s: &str) -> Result<BoundRef> {
    s.parse()
}

/// Runs one command and builds its report. Threads must be configured by
/// the caller.
pub fn run(cli: &Cli) -> Result<Output> {
    let start = Instant::now();
    let file = match &cli.common.config {
        Some(p) => parse_config(&read(p)?)?,
        None => BTreeMap::new(),
    };
    let c = &cli.common;
    let (scope, mut p): (String, Params);
    macro_rules! scoped {
        ($s:expr) => {{
            scope = $s.to_string();
            p = Params::new(file.clone(), &scope);
        }};
    }
    let section: Section = match &cli.command {
        Command::Waist { cmd } => match cmd {
            WaistCmd::Verify { map, bound, samples, resolution, tolerance, mesh_tolerance } => {
                scoped!("waist.verify");
                let name: String = p.req("map", map.clone())?;
                let tag: String = p.req("bound", bound.clone())?;
                let r = bound_tag(&tag)?;
                let stochastic = matches!(r, BoundRef::RpnNuT | BoundRef::CpnNuT);
                let seed = if stochastic { p.seed(c.seed)? } else { p.get("seed", c.seed, 1)? };
                let d = VerifyOptions::default();
                let opts = VerifyOptions {
                    resolution: p.opt("resolution", *resolution)?,
                    samples: p.get("samples", *samples, d.samples)?,
                    seed,
                    tolerance: p.get("tolerance", *tolerance, d.tolerance)?,
                    mesh_tolerance: p.get("mesh_tolerance", *mesh_tolerance, d.mesh_tolerance)?,
                    t_schedule: d.t_schedule,
                };
                Section { records: vec![suite::waist_record(&FiberMap::by_name(&name)?, r, &opts)?], tables: vec![] }
            }
            WaistCmd::Profile { map } => {
                scoped!("waist.profile");
                let name: String = p.req("map", map.clone())?;
                let seed = p.get("seed", c.seed, 1)?;
                let (r, t) = suite::profile_table(&FiberMap::by_name(&name)?, seed)?;
                Section { records: vec![r], tables: vec![t] }
            }
            WaistCmd::Explore { candidates, resolution } => {
                scoped!("waist.explore");
                let seed = p.seed(c.seed)?;
                let e = explore_even_sphere(p.get("candidates", *candidates, 20)?, p.get("resolution", *resolution, 24)?, seed)?;
                let r = Record::new("explore:even-s2", &[BoundRef::Rp2TwoPi]).measured(e.best_sup).seed(seed).detail(e);
                Section { records: vec![r], tables: vec![] }
            }
        },
        Command::Crofton { cmd: CroftonCmd::Estimate { mesh, codim, samples, expect, rel_tol } } => {
            scoped!("crofton.estimate");
            let spec: String = p.req("mesh", mesh.clone())?;
            let m = load_mesh(&spec)?;
            let natural = (m.ambient - 1).checked_sub(m.dim).ok_or_else(|| Error::Usage("mesh dimension exceeds sphere".into()))?;
            let k = p.get("codim", *codim, natural)?;
            let samples = p.get("samples", *samples, 10_000)?;
            let seed = p.seed(c.seed)?;
            let est = crofton_volume(&m, k, samples, seed)?;
            let mut r = Record::new(format!("crofton:{spec}"), &[BoundRef::OddMapCrofton])
                .estimate(&est.report)
                .detail(serde_json::json!({ "perturbed": est.perturbed, "max_edge": est.max_edge }));
            let truth = match p.opt("expect", *expect)? {
                Some(v) => Some(v),
                None => spec.strip_prefix("builtin:").map(|b| suite::builtin_mesh(b).map(|x| x.2)).transpose()?,
            };
            if let Some(t) = truth {
                let tol = p.get("rel_tol", *rel_tol, 0.02)?;
                r = r.bound(t).pass((est.report.value - t).abs() <= tol * t);
            }
            Section { records: vec![r], tables: vec![] }
        }
        Command::Content { cmd: ContentCmd::Minkowski { space, mesh, codim, schedule, samples } } => {
            scoped!("content.minkowski");
            let sp = parse_space(&p.req::<String>("space", space.clone())?)?;
            let spec: String = p.req("mesh", mesh.clone())?;
            let m = load_mesh(&spec)?;
            let natural = sp.intrinsic_dim().checked_sub(m.dim).ok_or_else(|| Error::Usage("mesh dimension exceeds space".into()))?;
            let k = p.get("codim", *codim, natural)?;
            let ts: Vec<f64> = parse_list(&p.get("schedule", schedule.clone(), "0.04,0.02,0.01".to_string())?)?;
            let seed = p.seed(c.seed)?;
            let rep = lower_minkowski_content(&sp, &SetRef::Mesh(&m), k, &ts, p.get("samples", *samples, 200_000)?, seed)?;
            let mut t = Table::new("minkowski", &["mesh", "t", "ratio", "intercept", "slope"]);
            for (ti, ri) in rep.schedule.iter().zip(&rep.ratios) {
                t.push(vec![spec.clone(), num(*ti), num(*ri), num(rep.estimate.value), num(rep.slope)]);
            }
            let r = Record::new(format!("minkowski:{spec}"), &[BoundRef::SphereWaist])
                .estimate(&rep.estimate)
                .bound(m.volume())
                .detail(&rep);
            Section { records: vec![r], tables: vec![t] }
        }
        Command::Transport { cmd: TransportCmd::Check { points, pairs, tolerance } } => {
            scoped!("transport.check");
            let seed = p.seed(c.seed)?;
            let mut records = suite::transport(
                p.get("points", *points, 1000)?,
                p.get("pairs", *pairs, 100)?,
                seed,
                p.get("tolerance", *tolerance, 1e-6)?,
            )?;
            records.extend(suite::archimedes()?);
            records.push(suite::pullback(64)?);
            Section { records, tables: vec![] }
        }
        Command::Convex { cmd } => match cmd {
            ConvexCmd::Width { body, iterations } => {
                scoped!("convex.width");
                let b: String = p.req("body", body.clone())?;
                let kb = suite::body_by_name(&b)?;
                let its = p.get("iterations", *iterations, 64)?;
                let r = if kb.symmetric {
                    suite::width_record(&b, &kb, its)?
                } else {
                    let (w, u) = waist_core::convex::width(&kb, its)?;
                    Record::new(format!("width:{b}"), &[BoundRef::WidthInscribed]).measured(w).detail(serde_json::json!({ "direction": u }))
                };
                Section { records: vec![r], tables: vec![] }
            }
            ConvexCmd::Section { body, codim, sections, samples } => {
                scoped!("convex.section");
                let b: String = p.req("body", body.clone())?;
                let kb = suite::body_by_name(&b)?;
                let k = p.get("codim", *codim, 1)?;
                let count = p.get("sections", *sections, 100)?;
                let samples = p.get("samples", *samples, 100_000)?;
                let seed = p.seed(c.seed)?;
                let n = kb.dim();
                if k == 0 || k >= n {
                    return Err(Error::Usage("need 1 <= codim < n".into()));
                }
                let record = if b.starts_with("cube:") && k == 1 {
                    suite::vaaler(n, count, samples, seed)?
                } else {
                    let mut rng = waist_core::rng::stream(seed, 0);
                    let mut t = Table::new("sections", &["index", "value", "std_error"]);
                    let mut min = f64::INFINITY;
                    for i in 0..count {
                        let f = waist_core::integral_geometry::random_frame(n, n - k, &mut rng);
                        let e = waist_core::convex::central_section_volume(&kb, &f, samples, waist_core::rng::child_seed(seed, i as u64 + 1))?;
                        min = min.min(e.value);
                        t.push(vec![i.to_string(), num(e.value), num(e.std_error)]);
                    }
                    return finish(cli, &scope, p.echo, vec![Record::new(format!("sections:{b}:k={k}"), &[BoundRef::ZhangSection]).measured(min).seed(seed)], vec![t], start);
                };
                Section { records: vec![record], tables: vec![] }
            }
            ConvexCmd::Zhang { body, k, restarts, samples } => {
                scoped!("convex.zhang");
                let b: String = p.req("body", body.clone())?;
                let kb = suite::body_by_name(&b)?;
                let k = p.get("k", *k, 1)?;
                let seed = p.seed(c.seed)?;
                let r = suite::zhang_record(&b, &kb, k, p.get("restarts", *restarts, 3)?, p.get("samples", *samples, 100_000)?, seed)?;
                Section { records: vec![r], tables: vec![] }
            }
        },
        Command::Iso { cmd } => match cmd {
            IsoCmd::Torus { lengths, resolution, field, tolerance } => {
                scoped!("iso.torus");
                let tol = p.get("tolerance", *tolerance, 0.05)?;
                match field {
                    Some(path) => {
                        let f = BinaryField::read_from(&mut std::io::Cursor::new(read(path)?))?;
                        Section { records: vec![field_record(&f, &path.display().to_string())?], tables: vec![] }
                    }
                    None => {
                        let l: Vec<f64> = parse_list(&p.get("lengths", lengths.clone(), "1,2".to_string())?)?;
                        let res = p.get("resolution", *resolution, 256)?;
                        Section { records: vec![suite::half_slab(&l, res, tol)?], tables: vec![] }
                    }
                }
            }
            IsoCmd::Box { lengths, resolution, sets, field } => {
                scoped!("iso.box");
                match field {
                    Some(path) => {
                        let f = BinaryField::read_from(&mut std::io::Cursor::new(read(path)?))?;
                        Section { records: vec![field_record(&f, &path.display().to_string())?], tables: vec![] }
                    }
                    None => {
                        let l: Vec<f64> = parse_list(&p.get("lengths", lengths.clone(), "1,1".to_string())?)?;
                        let res = p.get("resolution", *resolution, 64)?;
                        let sets = p.get("sets", *sets, 50)?;
                        let seed = p.seed(c.seed)?;
                        let mut records = Vec::new();
                        for i in 0..sets {
                            let f = BinaryField::random_half(l.clone(), vec![res; l.len()], false, waist_core::rng::child_seed(seed, i as u64))?;
                            records.push(field_record(&f, &format!("random-{i}"))?.seed(seed));
                        }
                        Section { records, tables: vec![] }
                    }
                }
            }
        },
        Command::Sweepout { cmd } => match cmd {
            SweepoutCmd::Bend { ell, trials, resolution } => {
                scoped!("sweepout.bend");
                let ells: Vec<usize> = parse_list(&p.get("ell", ell.clone(), "2..8".to_string())?)?;
                let trials = p.get("trials", *trials, 10)?;
                let res = p.opt("resolution", *resolution)?;
                let seed = p.seed(c.seed)?;
                suite::bending(&ells, trials, seed, res)?
            }
            SweepoutCmd::Cup { n, k, ell, trials, resolution } => {
                scoped!("sweepout.cup");
                let (n, k, ell) = (p.get("n", *n, 2)?, p.get("k", *k, 1)?, p.get("ell", *ell, 4)?);
                let trials = p.get("trials", *trials, 3)?;
                let res = p.opt("resolution", *resolution)?;
                let seed = p.seed(c.seed)?;
                let cup = cup_bound_check(n, k, ell, trials, seed, res)?;
                let mut t = Table::new("cup_trials", &["n", "k", "ell", "p", "trial", "z1", "z2", "total", "upper", "lower"]);
                for r in &cup.rows {
                    t.push(vec![
                        n.to_string(),
                        k.to_string(),
                        ell.to_string(),
                        cup.p.to_string(),
                        r.trial.to_string(),
                        num(r.z1),
                        num(r.z2),
                        num(r.total),
                        num(cup.upper),
                        num(cup.lower),
                    ]);
                }
                let r = Record::new(format!("cup:n={n},k={k},ell={ell}"), &[BoundRef::CupUpper, BoundRef::CupLower])
                    .measured(cup.max_total)
                    .bound(cup.upper)
                    .seed(seed)
                    .pass(cup.pass)
                    .detail(&cup);
                Section { records: vec![r], tables: vec![t] }
            }
            SweepoutCmd::Algebraic { degree, members, lines, interpolating } => {
                scoped!("sweepout.algebraic");
                let d = p.get("degree", *degree, 3)?;
                let members = p.get("members", *members, 5)?;
                let lines = p.get("lines", *lines, 20_000)?;
                let seed = p.seed(c.seed)?;
                p.echo.insert("interpolating".into(), interpolating.to_string());
                let a = if *interpolating {
                    interpolating_family_check(d, members, lines, seed)?
                } else {
                    algebraic_family_check(d, members, lines, seed)?
                };
                let r = Record::new(format!("algebraic:d={d}"), &[a.bound_ref]).measured(a.max).bound(a.bound).seed(seed).pass(a.pass).detail(&a);
                Section { records: vec![r], tables: vec![] }
            }
        },
        Command::Fill { cmd } => match cmd {
            FillCmd::Demo { n, k, instances, max_edge, cycle, ledger_out, filling_out } => {
                scoped!("fill.demo");
                let max_edge = p.get("max_edge", *max_edge, 0.3)?;
                match cycle {
                    Some(path) => fill_file(path, max_edge, ledger_out.as_deref(), filling_out.as_deref())?,
                    None => {
                        let dims = match (p.opt("n", *n)?, p.opt("k", *k)?) {
                            (Some(n), Some(k)) => vec![(n, k)],
                            (None, None) => waist_core::filling::FILL_DIMS.to_vec(),
                            _ => return Err(Error::Usage("give both --n and --k, or neither".into())),
                        };
                        let instances = p.get("instances", *instances, 1)?;
                        let seed = p.seed(c.seed)?;
                        let mut s = suite::filling(instances, &dims, max_edge, 0, 0, seed)?;
                        s.records.retain(|r| !r.id.starts_with("filling:star") && !r.id.starts_with("filling:partition"));
                        s
                    }
                }
            }
            FillCmd::Assign { per_k } => {
                scoped!("fill.assign");
                let per_k = p.get("per_k", *per_k, 10)?;
                let seed = p.seed(c.seed)?;
                let mut s = suite::filling(0, &[(1, 0)], 0.3, per_k, 0, seed)?;
                s.records.retain(|r| r.id.starts_with("filling:star"));
                s.tables.clear();
                s
            }
            FillCmd::Partition { count } => {
                scoped!("fill.partition");
                let count = p.get("count", *count, 8)?;
                let seed = p.seed(c.seed)?;
                let mut s = suite::filling(0, &[(1, 0)], 0.3, 0, count, seed)?;
                s.records.retain(|r| r.id.starts_with("filling:partition"));
                s.tables.clear();
                s
            }
        },
        Command::Suite { only } => {
            scoped!("suite");
            let seed = p.get("seed", c.seed, 1)?;
            let only: Option<String> = p.opt("only", only.clone())?;
            let names: Option<Vec<String>> = only.map(|o| o.split(',').map(|s| s.trim().to_string()).collect());
            suite::run_suite(seed, names.as_deref())?
        }
    };
    finish(cli, &scope, p.echo, section.records, section.tables, start)
}

fn finish(
    _cli: &Cli,
    scope: &str,
    echo: BTreeMap<String, String>,
    records: Vec<Record>,
    tables: Vec<Table>,
    start: Instant,
) -> Result<Output> {
    let command = scope.replace('.', " ");
    Ok(Output { doc: ReportDocument::new(&command, echo, records, start.elapsed().as_secs_f64()), tables })
}

fn field_record(f: &BinaryField, name: &str) -> Result<Record> {
    let r = boundary_content(f, &[3.0, 2.0, 1.0], 4)?;
    let bound = isoperimetric_bound(f);
    let tag = if f.periodic { BoundRef::TorusIsoperimetry } else { BoundRef::BoxIsoperimetry };
    let half = (f.fraction() - 0.5).abs() <= 1.0 / f.cells.len() as f64;
    let pass = !half || r.estimate.value >= 0.95 * bound;
    Ok(Record::new(format!("iso:{name}"), &[tag])
        .estimate(&r.estimate)
        .bound(bound)
        .pass(pass)
        .detail(serde_json::json!({ "fraction": f.fraction(), "half_volume": half, "floor": 0.95 * bound, "report": r })))
}

fn fill_file(path: &std::path::Path, max_edge: f64, ledger_out: Option<&std::path::Path>, filling_out: Option<&std::path::Path>) -> Result<Section> {
    let z = Mod2Chain::parse(&read(path)?)?;
    let cover = suite::cover_for(&z.to_mesh(), max_edge)?;
    let led = CoverLedger::new(cover, z.dim);
    let r = fill(&z, &led)?;
    let write = |p: &std::path::Path, s: String| Ok::<(), Error>(std::fs::write(p, s)?);
    if let Some(p) = ledger_out {
        write(p, r.ledger.to_csv())?;
    }
    if let Some(p) = filling_out {
        write(p, r.filling.to_text())?;
    }
    let ok = boundary(&r.filling) == r.refined;
    let bound = waist_core::filling::ledger_constant(z.dim);
    let ratio = if led.weight > 0.0 { r.ledger.weight / led.weight } else { 0.0 };
    let cuts: Vec<String> = r.cuts.iter().map(|(a, t)| format!("x{a}={t}")).collect();
    let records = vec![
        Record::new(format!("fill:{}", path.display()), &[BoundRef::FillingBoundary]).pass(ok).detail(serde_json::json!({
            "input_simplices": z.len(),
            "refined_simplices": r.refined.len(),
            "filling_simplices": r.filling.len(),
            "cuts": cuts,
        })),
        Record::new("fill:ledger-ratio", &[BoundRef::FillingLedger]).measured(ratio).bound(bound).pass(ratio <= bound * (1.0 + 1e-12)),
    ];
    let mut t = Table::new("fill_ledger", &["corner", "edge", "k", "weight"]);
    for c in &r.ledger.cover.cubes {
        t.push(vec![join(&c.corner), num(c.edge), r.ledger.k.to_string(), num(c.edge.powi(r.ledger.k as i32))]);
    }
    Ok(Section { records, tables: vec![t] })
}
