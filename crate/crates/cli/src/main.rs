mod args;
mod output;

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use clap::Parser;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use typreal::certify::{
    boundary_univalence_certify, local_univalence_scan, typical_reality_check, Outcome,
};
use typreal::measures::MeasureFile;
use typreal::region::Region;
use typreal::search::{
    coefficient_extremes, conjecture::goodman_check, conjecture_scan, critical_t_for_boundary_point, nonconvexity_witness,
    picard_preimages, proposition_measure, proposition_residual, radius_estimate, scaled_critical_t, theorem5_collision,
    witness::ft_derivative_norm, ConjectureId, ExtremeGrid, RadiusConfig, RadiusKind, WitnessKind, WitnessReport,
};
use typreal::series::DEFAULT_ORDER;
use typreal::shear::shear;
use typreal::{Error, MapRegistry, PlaneMap};

use args::{Cli, Command, KindArg, MapArgs, WitnessKindArg};

enum Failure {
    /// Bad configuration: exit code 2.
    Usage(String),
    /// Evaluation failure, falsification or failed search: exit code 1.
    Math(String),
}

type Run = Result<(Value, bool), Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn math(e: impl ToString) -> Failure {
    Failure::Math(e.to_string())
}

/// Input errors become usage failures, everything else is mathematical.
fn classify(e: Error) -> Failure {
    match e {
        Error::InvalidInput(_) | Error::InvalidMeasure(_) | Error::Domain(_) => usage(e),
        other => math(other),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let (name, config, out) = describe(&cli.command);
    let result = match &cli.command {
        Command::Render(a) => render(a),
        Command::Certify(a) => certify(a),
        Command::Radius(a) => radius(a),
        Command::Conjecture(a) => conjecture(a),
        Command::Witness(a) => witness(a),
        Command::Demo(a) => demo(a),
    };
    match result {
        Ok((value, ok)) => {
            let doc = json!({ "command": name, "config": config, "result": value });
            let text = serde_json::to_string_pretty(&doc).expect("report serializes") + "\n";
            if let Err(e) = emit(out.as_deref(), &text) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Math(msg)) => {
            let doc = json!({ "command": name, "config": config, "error": msg });
            eprintln!("{}", serde_json::to_string_pretty(&doc).expect("report serializes"));
            ExitCode::from(1)
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("config serializes")
}

/// Command name, resolved configuration and JSON output path.
fn describe(cmd: &Command) -> (&'static str, Value, Option<std::path::PathBuf>) {
    match cmd {
        Command::Render(a) => ("render", to_value(a), None),
        Command::Certify(a) => ("certify", to_value(a), a.out.clone()),
        Command::Radius(a) => ("radius", to_value(a), a.out.clone()),
        Command::Conjecture(a) => ("conjecture", to_value(a), a.out.clone()),
        Command::Witness(a) => ("witness", to_value(a), a.out.clone()),
        Command::Demo(a) => ("demo", to_value(a), a.out.clone()),
    }
}

fn emit(path: Option<&Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn build_map(a: &MapArgs) -> Result<(Arc<dyn PlaneMap>, Region), Failure> {
    let region: Region = a.region.parse().map_err(usage)?;
    let map: Arc<dyn PlaneMap> = match (&a.f, &a.measures) {
        (Some(spec), _) => MapRegistry::default().build(spec).map_err(classify)?,
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let (mu, nu) = MeasureFile::from_json(&text).and_then(|m| m.measures()).map_err(usage)?;
            Arc::new(shear(&mu, &nu, DEFAULT_ORDER).map_err(classify)?)
        }
        (None, None) => return Err(usage("either --f or --measures is required")),
    };
    Ok((map, region))
}

/// Lattice points of the region where the map is trusted, plus real points.
fn reality_grid(map: &dyn PlaneMap, region: &Region) -> Vec<Complex64> {
    let limit = map.max_modulus();
    let mut pts: Vec<Complex64> = region.grid(60).into_iter().filter(|z| z.norm() <= limit).collect();
    let (lo, hi) = region.bounding_box();
    for k in 0..51 {
        let x = Complex64::new(lo.re + (hi.re - lo.re) * (k as f64 + 0.5) / 51.0, 0.0);
        if region.contains(x) && x.norm() <= limit {
            pts.push(x);
        }
    }
    pts
}

fn render(a: &args::RenderArgs) -> Run {
    let (map, region) = build_map(&a.map)?;
    if a.n < 3 {
        return Err(usage("--n must be at least 3"));
    }
    let trusted = region.within_modulus(map.max_modulus());
    let zs = trusted.contour(a.n).points;
    let rows = zs.iter().map(|&z| Ok((z, map.eval(z)?))).collect::<Result<Vec<_>, Error>>().map_err(math)?;
    let cloud: Vec<Complex64> = trusted
        .grid(a.grid)
        .into_iter()
        .filter(|z| z.norm() <= map.max_modulus())
        .filter_map(|z| map.eval(z).ok())
        .collect();
    let boundary: Vec<Complex64> = rows.iter().map(|r| r.1).collect();
    let svg_path = a.out.with_extension("svg");
    let csv_path = a.out.with_extension("csv");
    let title = format!("{} on {}", map.name(), region);
    fs::write(&svg_path, output::svg(&boundary, &cloud, &title)).map_err(usage)?;
    fs::write(&csv_path, output::csv(&rows)).map_err(usage)?;
    let simple = typreal::geometry::is_simple(&typreal::region::Polyline::new(boundary, true));
    Ok((
        json!({
            "svg": svg_path.display().to_string(),
            "csv": csv_path.display().to_string(),
            "boundary_points": rows.len(),
            "cloud_points": cloud.len(),
            "boundary_image_simple": simple,
        }),
        true,
    ))
}

fn certify(a: &args::CertifyArgs) -> Run {
    let (map, region) = build_map(&a.map)?;
    let verdict = boundary_univalence_certify(&*map, &region, a.n).map_err(classify)?;
    let reality = typical_reality_check(&*map, &reality_grid(&*map, &region)).map_err(math)?;
    let scan = local_univalence_scan(&*map, &region, 100).map_err(math)?;
    let ok = match (verdict.outcome, a.expect_collision) {
        (Outcome::Collision, expect) => expect,
        (_, true) => false,
        (_, false) => true,
    };
    Ok((json!({ "map": map.name(), "verdict": verdict, "typical_reality": reality, "local_scan": scan }), ok))
}

fn radius(a: &args::RadiusArgs) -> Run {
    let kind = match a.kind {
        KindArg::Ru => RadiusKind::Ru,
        KindArg::LensFamily => RadiusKind::LensFamily,
    };
    let bracket = radius_estimate(&RadiusConfig::new(kind, a.samples, a.n, a.seed)).map_err(classify)?;
    Ok((to_value(&bracket), true))
}

fn conjecture(a: &args::ConjectureArgs) -> Run {
    let id: ConjectureId = a.id.parse().map_err(usage)?;
    let report = conjecture_scan(id, a.samples, a.n, a.seed).map_err(classify)?;
    Ok((to_value(&report), true))
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| usage(format!("this witness needs {flag}")))
}

fn witness(a: &args::WitnessArgs) -> Run {
    let z = a.z.as_deref().map(output::parse_complex).transpose().map_err(usage)?;
    let report = match a.kind {
        WitnessKindArg::Critical => {
            let z0 = need(z, "--z")?;
            let t = critical_t_for_boundary_point(z0).map_err(classify)?;
            let r = ft_derivative_norm(t, z0).map_err(math)?;
            WitnessReport::new(WitnessKind::CriticalPoint).param("t", t).point(z0).residual(r)
        }
        WitnessKindArg::Scaled => {
            let z0 = need(z, "--z")?;
            scaled_critical_t(z0).map_err(classify)?.report(z0)
        }
        WitnessKindArg::Proposition => {
            let alpha = need(a.alpha, "--alpha")?;
            let nu = proposition_measure(alpha).map_err(classify)?;
            let r = proposition_residual(&nu, alpha).map_err(math)?;
            let lambda = nu.atoms().iter().find(|x| x.t == 1.0).map(|x| x.w).unwrap_or(0.0);
            WitnessReport::new(WitnessKind::CriticalPoint)
                .param("alpha", alpha)
                .param("lambda", lambda)
                .point(Complex64::from_polar(1.0, alpha))
                .residual(r)
        }
        WitnessKindArg::Nonconvexity => {
            let (s, t, lambda) = (need(a.s, "--s")?, need(a.t, "--t")?, need(a.lambda, "--lambda")?);
            nonconvexity_witness(s, t, lambda).map_err(classify)?.report(s, t, lambda)
        }
        WitnessKindArg::Theorem5 => theorem5_collision(need(a.alpha, "--alpha")?).map_err(classify)?,
    };
    let ok = report.max_residual() < 1e-8;
    Ok((to_value(&report), ok))
}

fn demo(a: &args::DemoArgs) -> Run {
    let both = !a.picard && !a.goodman;
    let mut out = serde_json::Map::new();
    let mut ok = true;
    if a.picard || both {
        let w = output::parse_complex(&a.w).map_err(usage)?;
        let pts = picard_preimages(w, a.delta, a.k).map_err(classify)?;
        let rows: Vec<Value> = pts
            .iter()
            .map(|z| {
                let r = typreal::kernels::picard_map(*z).map(|(v, _)| (v - w).norm()).unwrap_or(f64::INFINITY);
                json!({ "z": [z.re, z.im], "abs_z_plus_1": (z + 1.0).norm(), "residual": r })
            })
            .collect();
        out.insert("picard".into(), json!({ "w": [w.re, w.im], "delta": a.delta, "preimages": rows }));
    }
    if a.goodman || both {
        let g = goodman_check(a.n).map_err(classify)?;
        ok &= g.certified_inner && g.collision.is_some();
        out.insert("goodman".into(), to_value(&g));
        let c = coefficient_extremes(2, ExtremeGrid::default()).map_err(classify)?;
        out.insert("coefficients_n2".into(), to_value(&c));
    }
    Ok((Value::Object(out), ok))
}
