//! The acceptance matrix: one named criterion per verified bound, each a
//! list of records closed by a summary record `<name>` with the verdict.

use std::f64::consts::PI;
use std::time::Instant;

use serde::Serialize;
use waist_core::content::greedy_cover;
use waist_core::convex::{inscribed_touching_pair, min_section_search, width, BodyKind, ConvexBody};
use waist_core::fibrations::{verify_waist_bound, waist_profile, FiberMap, VerifyOptions};
use waist_core::filling::partition::partition_check;
use waist_core::filling::star::star_check;
use waist_core::filling::{fill_check, FILL_DIMS};
use waist_core::integral_geometry::{crofton_volume, random_frame};
use waist_core::isoperimetry::{boundary_content, isoperimetric_bound, BinaryField};
use waist_core::mesh::{circle_mesh, SubmanifoldMesh};
use waist_core::report::BoundRef;
use waist_core::rng::{child_seed, stream};
use waist_core::spaces::sphere_volume;
use waist_core::sweepout::{bend_check, BendReport};
use waist_core::transport::{density_rho_m, integrate_mu_m, lipschitz_check, pullback_equality_case};
use waist_core::{Error, Result};

use crate::doc::{join, num, Record, Table, Timing};

pub const CRITERIA: &[&str] = &[
    "vaaler",
    "crofton",
    "transport",
    "archimedes",
    "pullback",
    "fibrations",
    "torus",
    "parallelotope",
    "convex",
    "bending",
    "filling",
];

/// Wall-clock budget per criterion in seconds, where one is stated.
pub fn budget(name: &str) -> Option<f64> {
    match name {
        "vaaler" | "filling" => Some(60.0),
        "bending" => Some(120.0),
        "crofton" => Some(10.0),
        _ => None,
    }
}

#[derive(Default)]
pub struct Section {
    pub records: Vec<Record>,
    pub tables: Vec<Table>,
}

pub fn run_suite(seed: u64, only: Option<&[String]>) -> Result<Section> {
    if let Some(names) = only {
        if let Some(bad) = names.iter().find(|n| !CRITERIA.contains(&n.as_str())) {
            return Err(Error::Usage(format!("unknown criterion `{bad}`; known: {}", CRITERIA.join(", "))));
        }
    }
    let mut out = Section::default();
    for (i, &name) in CRITERIA.iter().enumerate() {
        if only.is_some_and(|o| !o.iter().any(|n| n == name)) {
            continue;
        }
        let s = child_seed(seed, i as u64);
        let start = Instant::now();
        let mut sec = criterion(name, s)?;
        let pass = sec.records.iter().all(|r| r.pass != Some(false));
        let mut refs: Vec<BoundRef> = Vec::new();
        for r in sec.records.iter().flat_map(|r| r.bound_ref.iter()) {
            if !refs.contains(r) {
                refs.push(*r);
            }
        }
        let mut summary = Record::new(name, &refs).pass(pass).seed(s);
        summary.timing = Some(Timing { wall_seconds: start.elapsed().as_secs_f64() });
        out.records.append(&mut sec.records);
        out.records.push(summary);
        out.tables.append(&mut sec.tables);
    }
    Ok(out)
}

fn criterion(name: &str, seed: u64) -> Result<Section> {
    let records = match name {
        "vaaler" => (2..=6).map(|n| vaaler(n, 100, 100_000, child_seed(seed, n as u64))).collect::<Result<_>>()?,
        "crofton" => vec![crofton_builtin("great-circle", 10_000, seed)?, crofton_builtin("s1-in-s3", 10_000, seed)?],
        "transport" => transport(1000, 100, seed, 1e-6)?,
        "archimedes" => archimedes()?,
        "pullback" => vec![pullback(64)?],
        "fibrations" => fibrations(seed)?,
        "torus" => torus(seed)?,
        "parallelotope" => vec![parallelotope(50, 64, seed)?],
        "convex" => {
            let mut r = widths(seed)?;
            r.extend(zhang(&[2, 3, 4, 5], seed)?);
            r
        }
        "bending" => return bending(&[2, 3, 4, 5, 6, 7, 8], 10, seed, None),
        "filling" => return filling(200, &FILL_DIMS, 0.3, 10, 8, seed),
        _ => unreachable!("criteria are validated"),
    };
    Ok(Section { records, tables: vec![] })
}

// ------------------------------------------------------------ builders

pub fn vaaler(n: usize, sections: usize, samples: usize, seed: u64) -> Result<Record> {
    let cube = ConvexBody::cube(n, 1.0);
    let mut rng = stream(seed, 0);
    let mut worst: Option<waist_core::report::EstimateReport> = None;
    let mut failures = 0;
    for i in 0..sections {
        let frame = random_frame(n, n - 1, &mut rng);
        let e = waist_core::convex::central_section_volume(&cube, &frame, samples, child_seed(seed, i as u64 + 1))?;
        if e.value < 1.0 - 3.0 * e.std_error {
            failures += 1;
        }
        if worst.as_ref().is_none_or(|w| e.value < w.value) {
            worst = Some(e);
        }
    }
    let worst = worst.ok_or_else(|| Error::Usage("need at least one section".into()))?;
    #[derive(Serialize)]
    struct D {
        n: usize,
        sections: usize,
        samples_per_section: usize,
        failures: usize,
    }
    Ok(Record::new(format!("vaaler:n={n}"), &[BoundRef::CubeVaaler])
        .estimate(&worst)
        .bound(1.0)
        .pass(failures == 0)
        .detail(D { n, sections, samples_per_section: samples, failures }))
}

pub fn builtin_mesh(name: &str) -> Result<(SubmanifoldMesh, usize, f64)> {
    // mesh, codimension in its sphere, exact volume
    match name {
        "great-circle" => Ok((circle_mesh(&[0.0; 3], 1.0, &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], 1024), 1, 2.0 * PI)),
        "s1-in-s3" => Ok((circle_mesh(&[0.0; 4], 1.0, &[1.0, 0.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0], 1024), 2, 2.0 * PI)),
        _ => Err(Error::Usage(format!("unknown builtin mesh `{name}` (great-circle, s1-in-s3)"))),
    }
}

pub fn crofton_builtin(name: &str, samples: usize, seed: u64) -> Result<Record> {
    let (mesh, k, truth) = builtin_mesh(name)?;
    let est = crofton_volume(&mesh, k, samples, seed)?;
    let rel = (est.report.value - truth).abs() / truth;
    Ok(Record::new(format!("crofton:{name}"), &[BoundRef::OddMapCrofton])
        .estimate(&est.report)
        .bound(truth)
        .pass(rel <= 0.02)
        .detail(serde_json::json!({ "relative_error": rel, "tolerance": 0.02, "perturbed": est.perturbed, "max_edge": est.max_edge })))
}

pub fn transport(points: usize, pairs: usize, seed: u64, tol: f64) -> Result<Vec<Record>> {
    Ok(lipschitz_check(points, pairs, seed, tol)?
        .into_iter()
        .map(|r| {
            let mut refs = vec![BoundRef::TransportLipschitz];
            if r.pairs > 0 {
                refs.push(BoundRef::TransportDeterminant);
            }
            Record::new(format!("transport:{}", r.map), &refs)
                .measured(r.max_singular_value)
                .bound(1.0)
                .seed(seed)
                .pass(r.lipschitz_ok && r.determinant_ok)
                .detail(r)
        })
        .collect())
}

pub fn archimedes() -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for (n, m) in [(1i64, 1i64), (2, 1), (1, 2)] {
        let v: f64 = integrate_mu_m(n, m)?;
        let s: f64 = sphere_volume(n + m)?;
        let rel = (v - s).abs() / s;
        out.push(
            Record::new(format!("archimedes:n={n},m={m}"), &[BoundRef::ArchimedesMu])
                .measured(v)
                .bound(s)
                .pass(rel <= 0.005)
                .detail(serde_json::json!({ "relative_error": rel, "tolerance": 0.005 })),
        );
    }
    // ρ″_m(y) ≤ ρ″_{m'}(y) ≤ e^{−π|y|²} for m < m' at every test point
    let mut points = Vec::new();
    for dim in 1..=3 {
        for i in 0..=30 {
            let r = i as f64 * 0.05;
            let mut y = vec![0.0; dim];
            for (j, c) in y.iter_mut().enumerate() {
                *c = r / (dim as f64).sqrt() * if j % 2 == 0 { 1.0 } else { -1.0 };
            }
            points.push(y);
        }
    }
    let ms = [10i64, 100, 1000];
    let mut violations = 0;
    let mut worst_gap: f64 = 0.0;
    for y in &points {
        let vals: Vec<f64> = ms.iter().map(|&m| density_rho_m(m, y)).collect::<Result<_>>()?;
        let limit = (-PI * y.iter().map(|x| x * x).sum::<f64>()).exp();
        let chain: Vec<f64> = vals.iter().copied().chain(std::iter::once(limit)).collect();
        if chain.windows(2).any(|w| w[0] > w[1]) {
            violations += 1;
        }
        worst_gap = worst_gap.max(limit - vals[2]);
    }
    out.push(
        Record::new("archimedes:rho-monotone", &[BoundRef::RhoMonotone])
            .measured(violations as f64)
            .bound(0.0)
            .pass(violations == 0)
            .detail(serde_json::json!({ "m": ms, "points": points.len(), "largest_gap_at_m_1000": worst_gap })),
    );
    Ok(out)
}

pub fn pullback(res: usize) -> Result<Record> {
    let (lhs, rhs) = pullback_equality_case(res)?;
    let target = 4.0 * PI;
    let (el, er) = ((lhs - target).abs() / target, (rhs - target).abs() / target);
    Ok(Record::new("pullback:n=2,m=1", &[BoundRef::PullbackEquality])
        .measured(rhs)
        .bound(target)
        .pass(el <= 0.005 && er <= 0.005)
        .detail(serde_json::json!({ "weighted_length": lhs, "preimage_area": rhs, "resolution": res, "tolerance": 0.005 })))
}

pub fn waist_record(map: &FiberMap, bound_ref: BoundRef, opts: &VerifyOptions) -> Result<Record> {
    let c = verify_waist_bound(map, bound_ref, opts)?;
    Ok(Record::new(format!("waist:{}:{}", c.map, bound_ref), &[bound_ref])
        .measured(c.measured_sup)
        .bound(c.bound)
        .seed(opts.seed)
        .pass(c.pass)
        .detail(c))
}

fn fibrations(seed: u64) -> Result<Vec<Record>> {
    let opts = VerifyOptions { seed, ..VerifyOptions::default() };
    let cases = [
        ("hopf3", BoundRef::HopfTight, 2.0 * PI),
        ("hopf7", BoundRef::HopfTight, 2.0 * PI * PI),
        ("rp7-hopf", BoundRef::HopfTight, PI * PI),
        ("rp3-hopf", BoundRef::HopfTight, PI),
        ("abs-z1-rp3", BoundRef::Rp3PiSquared, PI * PI),
    ];
    let mut out = Vec::new();
    for (name, r, expected) in cases {
        let c = verify_waist_bound(&FiberMap::by_name(name)?, r, &opts)?;
        let analytic_ok = (c.measured_sup - expected).abs() <= 1e-6 * expected;
        let at_ok = name != "abs-z1-rp3" || (c.measured_at[0] - 0.5f64.sqrt()).abs() <= 1e-5;
        out.push(
            Record::new(format!("fibration:{name}"), &[r])
                .measured(c.measured_sup)
                .bound(expected)
                .seed(seed)
                .pass(c.pass && analytic_ok && at_ok)
                .detail(c),
        );
    }
    Ok(out)
}

fn torus(seed: u64) -> Result<Vec<Record>> {
    let opts = VerifyOptions { seed, ..VerifyOptions::default() };
    let map = FiberMap::by_name("torus:1,2,3;keep=2")?;
    let c = verify_waist_bound(&map, BoundRef::TorusProduct, &opts)?;
    let mut out = vec![Record::new("torus:projection-1,2,3", &[BoundRef::TorusProduct])
        .measured(c.measured_sup)
        .bound(2.0)
        .pass(c.pass && (c.measured_sup - 2.0).abs() <= 1e-12)
        .detail(c)];
    for lengths in [vec![1.0], vec![2.0], vec![1.0, 1.0], vec![1.0, 2.0]] {
        out.push(half_slab(&lengths, 256, 0.05)?);
    }
    Ok(out)
}

pub fn half_slab(lengths: &[f64], res: usize, tol: f64) -> Result<Record> {
    let n = lengths.len();
    let axis = (0..n).max_by(|&a, &b| lengths[a].total_cmp(&lengths[b]).then(b.cmp(&a))).unwrap();
    let f = BinaryField::half_slab(lengths.to_vec(), vec![res; n], axis, true)?;
    let r = boundary_content(&f, &[3.0, 2.0, 1.0], 4)?;
    let bound = isoperimetric_bound(&f);
    let rel = (r.estimate.value - bound).abs() / bound;
    Ok(Record::new(format!("torus:half-slab-{}", join(lengths).replace(' ', "x")), &[BoundRef::TorusIsoperimetry])
        .estimate(&r.estimate)
        .bound(bound)
        .pass(rel <= tol)
        .detail(serde_json::json!({ "relative_error": rel, "tolerance": tol, "resolution": res, "report": r })))
}

pub fn parallelotope(sets: usize, res: usize, seed: u64) -> Result<Record> {
    let mut worst = f64::INFINITY;
    let mut failures = 0;
    let mut values = Vec::new();
    for i in 0..sets {
        let f = BinaryField::random_half(vec![1.0, 1.0], vec![res, res], false, child_seed(seed, i as u64))?;
        let r = boundary_content(&f, &[3.0, 2.0, 1.0], 4)?;
        let bound = isoperimetric_bound(&f);
        if r.estimate.value < 0.95 * bound {
            failures += 1;
        }
        worst = worst.min(r.estimate.value);
        values.push(r.estimate.value);
    }
    Ok(Record::new("parallelotope:random-halves", &[BoundRef::BoxIsoperimetry])
        .measured(worst)
        .bound(0.95)
        .seed(seed)
        .pass(failures == 0)
        .detail(serde_json::json!({ "sets": sets, "resolution": res, "failures": failures, "values": values })))
}

pub fn body_by_name(spec: &str) -> Result<ConvexBody> {
    let bad = || Error::Usage(format!("bad body `{spec}` (cube:n, ball:n, cross:n, box:h1,h2,.., pball:n,p)"));
    let (kind, rest) = spec.split_once(':').ok_or_else(bad)?;
    let nums: Vec<f64> = rest.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
    let n = || -> Result<usize> {
        let v = nums[0];
        if v >= 1.0 && v.fract() == 0.0 {
            Ok(v as usize)
        } else {
            Err(bad())
        }
    };
    match kind {
        "cube" => Ok(ConvexBody::cube(n()?, 1.0)),
        "ball" => Ok(ConvexBody::ball(n()?, 1.0)),
        "cross" => Ok(ConvexBody::cross_polytope(n()?)),
        "box" => ConvexBody::new(BodyKind::Boxed { half_widths: nums }),
        "pball" if nums.len() == 2 => ConvexBody::new(BodyKind::PBall { n: n()?, p: nums[1], radius: 1.0 }),
        _ => Err(bad()),
    }
}

pub fn width_record(name: &str, body: &ConvexBody, iterations: usize) -> Result<Record> {
    let (w, u) = width(body, iterations)?;
    let (r, contact) = inscribed_touching_pair(body)?;
    Ok(Record::new(format!("width:{name}"), &[BoundRef::WidthInscribed])
        .measured(w)
        .bound(2.0 * r)
        .pass((w - 2.0 * r).abs() <= 1e-6)
        .detail(serde_json::json!({ "width": w, "direction": u, "inradius": r, "contact": contact, "tolerance": 1e-6 })))
}

fn widths(seed: u64) -> Result<Vec<Record>> {
    let mut rng = stream(seed, 0);
    let mut bodies: Vec<String> =
        ["cube:2", "cube:3", "ball:3", "cross:2", "cross:3", "cross:4", "pball:3,3"].iter().map(|s| s.to_string()).collect();
    use rand::Rng;
    for _ in 0..3 {
        let h: Vec<String> = (0..3).map(|_| num(0.25 + rng.random::<f64>())).collect();
        bodies.push(format!("box:{}", h.join(",")));
    }
    bodies.iter().map(|b| width_record(b, &body_by_name(b)?, 64)).collect()
}

pub fn zhang_record(name: &str, body: &ConvexBody, k: usize, restarts: usize, samples: usize, seed: u64) -> Result<Record> {
    let s = min_section_search(body, k, restarts, samples, seed)?;
    Ok(Record::new(format!("zhang:{name}:k={k}"), &[BoundRef::ZhangSection])
        .estimate(&s.best)
        .bound(s.bound)
        .pass(s.pass)
        .detail(s))
}

fn zhang(dims: &[usize], seed: u64) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for &n in dims {
        for kind in ["cube", "cross"] {
            let name = format!("{kind}:{n}");
            let body = body_by_name(&name)?;
            let ks = if n > 2 { vec![1, n - 1] } else { vec![1] };
            for k in ks {
                out.push(zhang_record(&name, &body, k, 3, 100_000, child_seed(seed, (n * 10 + k) as u64))?);
            }
        }
    }
    Ok(out)
}

pub fn bend_table() -> Table {
    Table::new(
        "bending_trials",
        &["ell", "p", "trial", "epsilon", "z1", "z2", "total", "z1_bound", "z2_bound", "total_bound", "total_floor"],
    )
}

pub fn bend_rows(t: &mut Table, b: &BendReport) {
    for r in &b.cup.rows {
        t.push(vec![
            b.cup.ell.to_string(),
            b.cup.p.to_string(),
            r.trial.to_string(),
            num(r.epsilon),
            num(r.z1),
            num(r.z2),
            num(r.total),
            num(b.z1_bound),
            num(b.z2_bound),
            num(b.total_bound),
            num(b.total_floor),
        ]);
    }
}

pub fn bending(ells: &[usize], trials: usize, seed: u64, resolution: Option<usize>) -> Result<Section> {
    let mut table = bend_table();
    let mut records = Vec::new();
    for &ell in ells {
        let b = bend_check(ell, trials, child_seed(seed, ell as u64), resolution)?;
        bend_rows(&mut table, &b);
        records.push(
            Record::new(
                format!("bending:ell={ell}"),
                &[BoundRef::BendingZ1, BoundRef::BendingZ2, BoundRef::BendingTotal, BoundRef::CupLower],
            )
            .measured(b.cup.max_total)
            .bound(b.total_bound)
            .seed(child_seed(seed, ell as u64))
            .pass(b.pass)
            .detail(&b),
        );
    }
    Ok(Section { records, tables: vec![table] })
}

pub fn filling(instances: usize, dims: &[(usize, usize)], max_edge: f64, per_k: usize, partitions: usize, seed: u64) -> Result<Section> {
    let c = fill_check(instances, dims, max_edge, child_seed(seed, 1))?;
    let mut table = Table::new("fill_ratios", &["instance", "n", "k", "input_weight", "output_weight", "ratio", "bound"]);
    for r in &c.rows {
        table.push(vec![
            r.instance.to_string(),
            r.n.to_string(),
            r.k.to_string(),
            num(r.input_weight),
            num(r.output_weight),
            num(r.ratio),
            num(r.bound),
        ]);
    }
    let bad = |f: &dyn Fn(&waist_core::filling::FillRow) -> bool| -> Vec<usize> {
        c.rows.iter().filter(|r| !f(r)).map(|r| r.instance).collect()
    };
    let mut records = vec![
        Record::new("filling:boundary", &[BoundRef::FillingBoundary])
            .measured(c.rows.iter().filter(|r| r.boundary_ok).count() as f64)
            .bound(instances as f64)
            .seed(seed)
            .pass(c.boundary_pass)
            .detail(serde_json::json!({ "instances": instances, "failed": bad(&|r| r.boundary_ok) })),
        ratio_record(&c, seed, bad(&|r| r.ratio_ok)),
        Record::new("filling:independence", &[BoundRef::FillingIndependence])
            .measured(c.rows.iter().filter(|r| r.independent).count() as f64)
            .bound(instances as f64)
            .seed(seed)
            .pass(c.independence_pass)
            .detail(serde_json::json!({ "failed": bad(&|r| r.independent) })),
    ];
    let stars = star_check(per_k, child_seed(seed, 2))?;
    for k in 1..=3 {
        let of_k: Vec<_> = stars.iter().filter(|s| s.dim == k).collect();
        let max = of_k.iter().map(|s| s.max_n_v).max().unwrap_or(0);
        records.push(
            Record::new(format!("filling:star-assignment:k={k}"), &[BoundRef::StarAssignment])
                .measured(max as f64)
                .bound(((1usize << k) - 1) as f64)
                .seed(seed)
                .pass(of_k.iter().all(|s| s.pass))
                .detail(&of_k),
        );
    }
    let parts = partition_check(partitions, child_seed(seed, 3))?;
    records.push(
        Record::new("filling:partition-identity", &[BoundRef::PartitionIdentity])
            .measured(parts.iter().filter(|p| p.pass).count() as f64)
            .bound(partitions as f64)
            .seed(seed)
            .pass(parts.iter().all(|p| p.pass))
            .detail(parts.iter().map(|p| serde_json::json!({ "n": p.n, "m": p.m, "parts": p.parts, "pass": p.pass })).collect::<Vec<_>>()),
    );
    Ok(Section { records, tables: vec![table] })
}

/// Cover of a chain by the greedy grid cover (used by `fill demo` on files).
/// With a single k the raw worst ratio is reported against 2^{k+2} - 2;
/// mixed k falls back to the worst ratio as a fraction of its own bound.
fn ratio_record(c: &waist_core::filling::FillCheck, seed: u64, failed: Vec<usize>) -> Record {
    let r = Record::new("filling:ledger-ratio", &[BoundRef::FillingLedger]).seed(seed).pass(c.ratio_pass);
    let single = c.rows.first().filter(|f| c.rows.iter().all(|r| r.k == f.k));
    match single {
        Some(f) => r
            .measured(c.rows.iter().map(|r| r.ratio).fold(0.0, f64::max))
            .bound(f.bound)
            .detail(serde_json::json!({ "measured_is": "max ratio", "failed": failed })),
        None => r
            .measured(c.max_ratio_fraction)
            .bound(1.0)
            .detail(serde_json::json!({ "measured_is": "max ratio / (2^{k+2}-2)", "failed": failed })),
    }
}

pub fn cover_for(mesh: &SubmanifoldMesh, max_edge: f64) -> Result<waist_core::content::CubeCover> {
    greedy_cover(mesh, max_edge)
}

pub fn profile_table(map: &FiberMap, seed: u64) -> Result<(Record, Table)> {
    let prof = waist_profile(map, &map.default_grid(seed))?;
    let mut t = Table::new("waist_profile", &["map", "y", "volume"]);
    for (y, v) in &prof.points {
        t.push(vec![map.name(), join(y), num(*v)]);
    }
    let r = Record::new(format!("profile:{}", map.name()), &[natural_bound(map)]).measured(prof.max).seed(seed).detail(&prof);
    Ok((r, t))
}

/// The bound a map's fiber volumes are usually compared against.
pub fn natural_bound(map: &FiberMap) -> BoundRef {
    match map {
        FiberMap::AbsZ1OnS3 | FiberMap::AbsZ1OnRp3 => BoundRef::Rp3PiSquared,
        FiberMap::X1SquaredOnRp2 => BoundRef::Rp2TwoPi,
        FiberMap::TorusProjection { .. } => BoundRef::TorusProduct,
        FiberMap::LinearProjection { .. } => BoundRef::SphereWaist,
        _ => BoundRef::HopfTight,
    }
}
