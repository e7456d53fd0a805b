use std::cell::OnceCell;
use std::fs;
use std::path::Path;
use std::time::Instant;

use contraction_core::analysis::{equivalence_audit, projection_halfdist_audit};
use contraction_core::contraction::{hat_from_separation, HatGraph, SeparationEngine};
use contraction_core::hyperbolic::{
    bgi_from_q_audit, closest_point_audit, diameter_scan, four_point_delta, geodesic_image_audit,
    qi_embedding_audit, quadrangle_estimate_audit, sample_triangles, sample_tuples, triangle_one_thin_audit,
    Quarters, SampleSpec,
};
use contraction_core::metric::{all_pairs_distances, DistanceMatrix, MetricGraph, Segment, Vertex};
use contraction_core::spaces::{cone_vs_hat_audit, load_space, make_family, save_space, Family, SpaceInstance};
use log::info;
use serde_json::{json, Value};

use crate::args::{AuditArgs, ConeArgs, DichotomyArgs, GenArgs, RunArgs};
use crate::cache::Cache;
use crate::report::{AuditReport, AuditResult, Status};
use crate::CliError;

pub const AUDITS: &[&str] = &[
    "one-thin-triangles",
    "closest-point-17",
    "bgi-27q2",
    "quadrangle-estimate",
    "qi-embedding",
    "projection-halfdist",
    "geodesic-image",
    "equivalence",
    "hat-dominated",
];

/// Quadruples sampled for four-point constants when not exhaustive.
const DELTA_SAMPLES: usize = 200_000;

pub fn cmd_gen(a: &GenArgs) -> Result<std::path::PathBuf, CliError> {
    let inst = make_family(a.family, a.size, a.cap_vertices)?;
    fs::create_dir_all(&a.out).map_err(|e| CliError::io(&a.out, e))?;
    let name = format!("{}-{}.space", a.family, a.size).replace(':', "_");
    let path = a.out.join(name);
    save_space(&inst, &path)?;
    Ok(path)
}

/// A loaded space with its distances and, on demand, its contraction space.
struct Ctx<'a> {
    args: &'a RunArgs,
    inst: SpaceInstance,
    d: DistanceMatrix,
    cache: Option<Cache>,
    hat: OnceCell<(HatGraph, DistanceMatrix)>,
}

impl<'a> Ctx<'a> {
    fn new(args: &'a RunArgs) -> Result<Self, CliError> {
        let inst = load_instance(&args.space, args.cap_vertices)?;
        check_sweep(&inst.graph, args.sweep_cap)?;
        let cache = Cache::from_env();
        let d = distances(cache.as_ref(), &inst.graph)?;
        Ok(Ctx {
            args,
            inst,
            d,
            cache,
            hat: OnceCell::new(),
        })
    }

    fn g(&self) -> &MetricGraph {
        &self.inst.graph
    }

    fn hat(&self) -> Result<&(HatGraph, DistanceMatrix), CliError> {
        if let Some(h) = self.hat.get() {
            return Ok(h);
        }
        let (g, gauge, mode) = (self.g(), self.args.gauge, self.args.mode);
        let engine = SeparationEngine::new(g, &self.d, gauge, mode);
        let cached = self.cache.as_ref().and_then(|c| c.load_memo(g, &gauge, mode));
        if let Some(recs) = &cached {
            info!("loaded {} memo records", engine.import_memo(recs));
        }
        let sep = engine.separation_matrix();
        if let Some(c) = &self.cache {
            let recs = engine.export_memo();
            if cached.as_ref() != Some(&recs) {
                c.store_memo(g, &gauge, mode, &recs);
            }
        }
        let hat = hat_from_separation(g, &sep, gauge, mode);
        let hd = distances(self.cache.as_ref(), &hat.combined())?;
        Ok(self.hat.get_or_init(|| (hat, hd)))
    }

    fn segment(&self) -> Result<Segment, CliError> {
        let segs = &self.inst.segments;
        let (name, vs) = match &self.args.segment {
            Some(name) => segs
                .get_key_value(name)
                .ok_or_else(|| CliError::Input(format!("space has no segment {name:?}")))?,
            None => segs
                .iter()
                .next()
                .ok_or_else(|| CliError::Input("space has no designated segment".into()))?,
        };
        info!("auditing against segment {name}");
        Ok(Segment::new(self.g(), &self.d, vs.clone())?)
    }

    fn segment_name(&self) -> Option<String> {
        self.args
            .segment
            .clone()
            .or_else(|| self.inst.segments.keys().next().cloned())
    }

    /// Every vertex when exhaustive or small enough, otherwise a seeded
    /// sample.
    fn vertex_sample(&self) -> Vec<Vertex> {
        let n = self.g().vertex_count();
        if self.args.exhaustive || n <= self.args.samples {
            return (0..n).collect();
        }
        let mut vs: Vec<Vertex> = sample_tuples::<1>(n, self.args.samples, self.args.seed)
            .into_iter()
            .map(|[v]| v)
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    fn delta_spec(&self) -> SampleSpec {
        if self.args.exhaustive {
            SampleSpec::Exhaustive
        } else {
            SampleSpec::Auto {
                seed: self.args.seed,
                samples: DELTA_SAMPLES,
            }
        }
    }
}

fn load_instance(spec: &str, cap: usize) -> Result<SpaceInstance, CliError> {
    let path = Path::new(spec);
    if path.is_file() {
        return Ok(load_space(path)?);
    }
    let (fam, size) = spec.rsplit_once(':').ok_or_else(|| {
        CliError::Input(format!("{spec:?} is neither a space file nor FAMILY:SIZE"))
    })?;
    let family: Family = fam.parse()?;
    let size = size
        .parse()
        .map_err(|_| CliError::Input(format!("bad size {size:?} in {spec:?}")))?;
    Ok(make_family(family, size, cap)?)
}

fn check_sweep(g: &MetricGraph, cap: usize) -> Result<(), CliError> {
    let n = g.vertex_count();
    if n > cap {
        return Err(contraction_core::Error::CapExceeded {
            what: "sweep".into(),
            needed: n,
            cap,
        }
        .into());
    }
    Ok(())
}

fn distances(cache: Option<&Cache>, g: &MetricGraph) -> Result<DistanceMatrix, CliError> {
    if let Some(d) = cache.and_then(|c| c.load_distances(g)) {
        info!("distance cache hit");
        return Ok(d);
    }
    let d = all_pairs_distances(g)?;
    if let Some(c) = cache {
        c.store_distances(g, &d);
    }
    Ok(d)
}

fn base_config(command: &str, a: &RunArgs) -> serde_json::Map<String, Value> {
    // worker count and output directory are left out: they must not change
    // the report
    let v = json!({
        "command": command,
        "space": a.space,
        "gauge": a.gauge.to_string(),
        "mode": a.mode.to_string(),
        "seed": a.seed,
        "samples": a.samples,
        "exhaustive": a.exhaustive,
        "segment": a.segment,
        "cap_vertices": a.cap_vertices,
        "sweep_cap": a.sweep_cap,
        "timing": a.timing,
    });
    match v {
        Value::Object(m) => m,
        _ => unreachable!(),
    }
}

fn timed(
    timing: bool,
    f: impl FnOnce() -> Result<AuditResult, CliError>,
) -> Result<AuditResult, CliError> {
    let start = Instant::now();
    let mut r = f()?;
    if timing {
        r.millis = Some(start.elapsed().as_millis() as u64);
    }
    Ok(r)
}

pub fn cmd_hat(a: &RunArgs) -> Result<AuditReport, CliError> {
    let mut report = AuditReport::new(base_config("hat", a).into());
    let ctx = Ctx::new(a)?;
    let r = timed(a.timing, || {
        let (hat, hd) = ctx.hat()?;
        if let Some(out) = &a.out {
            write_file(&out.join("hat.txt"), &hat.to_text())?;
        }
        Ok(AuditResult::new("hat", Status::Pass)
            .constant("vertices", ctx.g().vertex_count())
            .constant("base_edges", ctx.g().edge_count())
            .constant("cone_edges", hat.cone_edges.len())
            .constant("new_edges", hat.new_edge_count())
            .constant("base_diameter", ctx.d.diameter())
            .constant("hat_diameter", hd.diameter()))
    })?;
    report.results.push(r);
    Ok(report)
}

pub fn cmd_delta(a: &RunArgs) -> Result<AuditReport, CliError> {
    let mut report = AuditReport::new(base_config("delta", a).into());
    let ctx = Ctx::new(a)?;
    let spec = ctx.delta_spec();
    report
        .results
        .push(timed(a.timing, || Ok(AuditResult::new("delta-base", Status::Pass).constants_from(four_point_delta(&ctx.d, spec))))?);
    report.results.push(timed(a.timing, || {
        let (_, hd) = ctx.hat()?;
        Ok(AuditResult::new("delta-hat", Status::Pass).constants_from(four_point_delta(hd, spec)))
    })?);
    Ok(report)
}

pub fn cmd_audit(a: &AuditArgs) -> Result<AuditReport, CliError> {
    for name in &a.names {
        if !AUDITS.contains(&name.as_str()) {
            return Err(CliError::Input(format!(
                "unknown audit {name:?}; known audits: {}",
                AUDITS.join(", ")
            )));
        }
    }
    if !(a.q_cap >= 1.0) {
        return Err(CliError::Input("--q-cap must be at least 1".into()));
    }
    let mut config = base_config("audit", &a.run);
    config.insert("audits".into(), json!(a.names));
    config.insert("q_cap".into(), json!(a.q_cap));
    config.insert("estimate_radius".into(), json!(a.estimate_radius));
    let mut report = AuditReport::new(config.into());
    let ctx = Ctx::new(&a.run)?;
    for name in &a.names {
        info!("running {name}");
        let r = timed(a.run.timing, || run_audit(&ctx, a, name))?;
        report.results.push(r);
    }
    Ok(report)
}

fn run_audit(ctx: &Ctx<'_>, a: &AuditArgs, name: &str) -> Result<AuditResult, CliError> {
    let (g, d) = (ctx.g(), &ctx.d);
    let args = &a.run;
    let res = AuditResult::new(name, Status::Pass);
    Ok(match name {
        "one-thin-triangles" => {
            let (_, hd) = ctx.hat()?;
            let tris = sample_triangles(g.vertex_count(), args.samples, args.seed);
            res.constant("triangles", tris.len())
                .violations(&triangle_one_thin_audit(g, d, hd, &tris))
        }
        "closest-point-17" => {
            let seg = ctx.segment()?;
            let (_, hd) = ctx.hat()?;
            let vs = ctx.vertex_sample();
            let viol = closest_point_audit(d, hd, &seg, &args.gauge, &vs)?;
            res.constant("segment", ctx.segment_name())
                .constant("vertices", vs.len())
                .constant("bound", 17)
                .violations(&viol)
        }
        "bgi-27q2" => {
            let seg = ctx.segment()?;
            let (_, hd) = ctx.hat()?;
            let cap = Quarters((a.q_cap * 4.0).floor() as u32);
            let rep = bgi_from_q_audit(g, d, hd, &seg, cap);
            let status = match rep.passed {
                Some(true) => Status::Pass,
                Some(false) => Status::Fail,
                None => Status::NotApplicable,
            };
            AuditResult::new(name, status)
                .constant("segment", ctx.segment_name())
                .constants_from(rep)
        }
        "quadrangle-estimate" => {
            let (_, hd) = ctx.hat()?;
            let rep = quadrangle_estimate_audit(
                g,
                d,
                hd,
                &args.gauge,
                a.estimate_radius,
                args.samples,
                args.seed,
                ctx.delta_spec(),
            )?;
            let status = if rep.applicable {
                Status::Pass
            } else {
                Status::NotApplicable
            };
            let viol = rep.violations.clone();
            AuditResult::new(name, status)
                .constant("radius", a.estimate_radius)
                .constant("delta", rep.delta)
                .constant("delta_source", "measured four-point constant of the contraction space")
                .constant("k", rep.k)
                .constant("threshold", rep.threshold)
                .constant("applicable", rep.applicable)
                .constant("checked", rep.checked)
                .violations(&viol)
        }
        "qi-embedding" => {
            let seg = ctx.segment()?;
            let (_, hd) = ctx.hat()?;
            let fit = qi_embedding_audit(d, hd, seg.vertices());
            let status = if fit.dominated { Status::Pass } else { Status::Fail };
            AuditResult::new(name, status)
                .constant("segment", ctx.segment_name())
                .constants_from(fit)
        }
        "projection-halfdist" => {
            let seg = ctx.segment()?;
            let vs = ctx.vertex_sample();
            res.constant("segment", ctx.segment_name())
                .constant("vertices", vs.len())
                .violations(&projection_halfdist_audit(d, &seg, &vs))
        }
        "geodesic-image" => {
            let (hat, hd) = ctx.hat()?;
            let pairs: Vec<(Vertex, Vertex)> = sample_tuples::<2>(g.vertex_count(), args.samples, args.seed)
                .into_iter()
                .map(|[x, y]| (x, y))
                .collect();
            let rep = geodesic_image_audit(g, d, hat, hd, &pairs);
            res.constant("hausdorff", rep.hausdorff)
                .constant("pairs", rep.pairs)
                .violations(&rep.violations)
        }
        "equivalence" => {
            let seg = ctx.segment()?;
            let rep = equivalence_audit(g, d, &seg);
            let status = if rep.implication_holds { Status::Pass } else { Status::Fail };
            AuditResult::new(name, status)
                .constant("segment", ctx.segment_name())
                .constants_from(rep)
        }
        "hat-dominated" => {
            let (_, hd) = ctx.hat()?;
            let n = g.vertex_count();
            let viol: Vec<(Vertex, Vertex)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|&(u, v)| hd.get(u, v) > d.get(u, v))
                .collect();
            res.violations(&viol)
        }
        _ => unreachable!("audit names are validated up front"),
    })
}

pub fn cmd_dichotomy(a: &DichotomyArgs) -> Result<AuditReport, CliError> {
    let r = &a.run;
    let family: Family = r.space.parse()?;
    let mut config = base_config("dichotomy", r);
    config.insert("sizes".into(), json!(a.sizes));
    let mut report = AuditReport::new(config.into());
    let cap = r.cap_vertices.min(r.sweep_cap);
    for &size in &a.sizes {
        let res = timed(r.timing, || {
            let row = diameter_scan(family, &[size], &r.gauge, r.mode, cap)?;
            Ok(AuditResult::new(format!("diameter:{size}"), Status::Pass).constants_from(&row[0]))
        })?;
        report.results.push(res);
    }
    Ok(report)
}

pub fn cmd_cone_compare(a: &ConeArgs) -> Result<AuditReport, CliError> {
    let r = &a.run;
    let mut config = base_config("cone-compare", r);
    config.insert("core_depth".into(), json!(a.core_depth));
    let mut report = AuditReport::new(config.into());
    let inst = load_instance(&r.space, r.cap_vertices)?;
    check_sweep(&inst.graph, r.sweep_cap)?;
    let depth = match a.core_depth {
        Some(c) => c,
        None => inst
            .param
            .parse::<u32>()
            .ok()
            .and_then(|radius| radius.checked_sub(2))
            .ok_or_else(|| CliError::Input("cannot infer the core depth; pass --core-depth".into()))?,
    };
    let res = timed(r.timing, || {
        let c = cone_vs_hat_audit(&inst, &r.gauge, r.mode, depth)?;
        let status = if c.passed { Status::Pass } else { Status::Fail };
        let mut viol: Vec<Value> = c
            .intra_sheet_separated
            .iter()
            .map(|p| json!({"claim": "intra-sheet anti-contracting", "pair": p}))
            .collect();
        viol.extend(
            c.far_not_separated_at_zero
                .iter()
                .map(|p| json!({"claim": "far pair separated at radius 0", "pair": p})),
        );
        let mut res = AuditResult::new("cone-compare", status).constants_from(&c);
        res.constants.remove("intra_sheet_separated");
        res.constants.remove("far_not_separated_at_zero");
        res.violations = viol;
        Ok(res)
    })?;
    report.results.push(res);
    Ok(report)
}

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Writes `report.json` and `report.csv` into `out`, or the JSON to stdout.
pub fn emit(report: &AuditReport, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(dir) => {
            write_file(&dir.join("report.json"), &report.to_json())?;
            write_file(&dir.join("report.csv"), &report.to_csv())?;
            for r in &report.results {
                eprintln!("{}: {}", r.name, serde_json::to_value(r.status).unwrap().as_str().unwrap());
            }
        }
        None => print!("{}", report.to_json()),
    }
    Ok(())
}
