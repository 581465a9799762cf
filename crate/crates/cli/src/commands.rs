use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use quasirect::fock::{analytic_to_fock, fidelity, run_protocol_oracle, write_fock_vector, FockSpace};
use quasirect::observables::{
    flatness_report, husimi_q, position_density, FlatnessReport, GridResult, PhaseSpaceGrid, PositionGrid,
};
use quasirect::output::{fmt_f64, grid_csv, grid_json, write_atomic, Parameters};
use quasirect::protocol::build_superposition;
use quasirect::{dyadic_schedule, Exec, PulseSchedule, SqueezeParameter, SuperpositionState};
use serde_json::json;

use crate::config::{RunConfig, TauSpec};
use crate::{Failure, EXIT_VERIFY_FAILED};

pub const FIDELITY_TOLERANCE: f64 = 1e-8;
pub const PROBABILITY_TOLERANCE: f64 = 1e-8;
pub const DENSITY_INTEGRAL_TOLERANCE: f64 = 1e-6;
pub const Q_INTEGRAL_TOLERANCE: f64 = 1e-5;

struct Point {
    r: SqueezeParameter,
    tau_spec: TauSpec,
    tau: f64,
    schedule: PulseSchedule,
    state: SuperpositionState,
}

fn point(r: f64, tau_spec: TauSpec, pulses: usize) -> Result<Point, Failure> {
    let r = SqueezeParameter::new(r)?;
    let tau = tau_spec.resolve(r.value());
    let schedule = dyadic_schedule(pulses, tau)?;
    let state = build_superposition(&schedule, r)?;
    Ok(Point { r, tau_spec, tau, schedule, state })
}

fn single(cfg: &RunConfig) -> Result<Point, Failure> {
    let (r, tau) = cfg.point();
    point(r, tau, cfg.pulses)
}

fn params(p: &Point) -> Parameters {
    Parameters::new()
        .with("r", p.r.value())
        .with("tau_tag", p.tau_spec.to_string())
        .with("tau", p.tau)
        .with("pulses", p.schedule.pulses())
        .with("components", p.state.len())
        .with("norm_constant", p.state.norm_constant())
}

fn prepare_dir(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::config(format!("cannot create output directory {}: {e}", dir.display())))
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), Failure> {
    let path = dir.join(name);
    write_atomic(&path, contents.as_bytes())?;
    println!("wrote {}", path.display());
    Ok(())
}

fn density_of(cfg: &RunConfig, p: &Point, exec: Exec) -> Result<(GridResult, FlatnessReport), Failure> {
    let grid = cfg.position_grid.unwrap_or_else(|| PositionGrid::auto(&p.state));
    let result = position_density(&p.state, &grid, exec)?;
    let flat = flatness_report(&result, cfg.coverage)?;
    Ok((result, flat))
}

fn warn_support(what: &str, result: &GridResult) {
    if !result.covers_support() {
        eprintln!("warning: {what} grid integral {:.6} suggests the grid misses probability", result.integral_estimate);
    }
}

pub fn simulate(cfg: &RunConfig) -> Result<(), Failure> {
    let p = single(cfg)?;
    let success = p.state.norm_constant().powi(2);
    println!("components = {}", p.state.len());
    println!("norm_constant = {}", fmt_f64(p.state.norm_constant()));
    println!("success_probability = {}", fmt_f64(success));
    prepare_dir(&cfg.out_dir)?;
    let prm = params(&p).with("success_probability", success);
    if cfg.format.csv() {
        let mut s = String::from("# superposition components\n");
        for (k, v) in prm.iter() {
            let v = match v {
                serde_json::Value::Number(n) if n.is_f64() => fmt_f64(n.as_f64().unwrap()),
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            writeln!(s, "# {k} = {v}").unwrap();
        }
        s.push_str("amplitude,weight_re,weight_im\n");
        for c in p.state.components() {
            writeln!(s, "{},{},{}", fmt_f64(c.amplitude), fmt_f64(c.weight.re), fmt_f64(c.weight.im)).unwrap();
        }
        write(&cfg.out_dir, "summary.csv", &s)?;
    }
    if cfg.format.json() {
        let doc = json!({
            "parameters": prm.iter().map(|(k, v)| (k.to_string(), v.clone())).collect::<serde_json::Map<_, _>>(),
            "pulse_areas": p.schedule.areas(),
            "components": p.state.components().iter().map(|c| json!({
                "amplitude": c.amplitude,
                "weight_re": c.weight.re,
                "weight_im": c.weight.im,
            })).collect::<Vec<_>>(),
        });
        let text = serde_json::to_string_pretty(&doc).map_err(quasirect::Error::from)? + "\n";
        write(&cfg.out_dir, "summary.json", &text)?;
    }
    Ok(())
}

fn flatness_params(prm: Parameters, f: &FlatnessReport) -> Parameters {
    prm.with("coverage", f.coverage)
        .with("center_of_mass", f.center_of_mass)
        .with("plateau_lo", f.plateau_window.0)
        .with("plateau_hi", f.plateau_window.1)
        .with("plateau_mass", f.plateau_mass)
        .with("ripple", f.ripple)
}

pub fn density(cfg: &RunConfig) -> Result<(), Failure> {
    let p = single(cfg)?;
    let (result, flat) = density_of(cfg, &p, Exec::Parallel)?;
    warn_support("position", &result);
    println!("integral_estimate = {}", fmt_f64(result.integral_estimate));
    println!("plateau_window = [{}, {}]", fmt_f64(flat.plateau_window.0), fmt_f64(flat.plateau_window.1));
    println!("ripple = {}", fmt_f64(flat.ripple));
    prepare_dir(&cfg.out_dir)?;
    let prm = params(&p);
    if cfg.format.csv() {
        write(&cfg.out_dir, "density.csv", &grid_csv(&result, &flatness_params(prm.clone(), &flat)))?;
    }
    if cfg.format.json() {
        write(&cfg.out_dir, "density.json", &grid_json(&result, &prm, Some(&flat))?)?;
    }
    Ok(())
}

pub fn husimi(cfg: &RunConfig) -> Result<(), Failure> {
    let p = single(cfg)?;
    let grid = cfg.phase_space_grid.unwrap_or_else(|| PhaseSpaceGrid::auto(&p.state));
    let result = husimi_q(&p.state, &grid, Exec::Parallel)?;
    warn_support("phase-space", &result);
    println!("integral_estimate = {}", fmt_f64(result.integral_estimate));
    prepare_dir(&cfg.out_dir)?;
    let prm = params(&p);
    if cfg.format.csv() {
        write(&cfg.out_dir, "husimi.csv", &grid_csv(&result, &prm))?;
    }
    if cfg.format.json() {
        write(&cfg.out_dir, "husimi.json", &grid_json(&result, &prm, None)?)?;
    }
    Ok(())
}

fn check_line(name: &str, value: f64, bound: f64, pass: bool) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("{tag} {name}: {} (bound {bound:e})", fmt_f64(value));
}

pub fn verify(cfg: &RunConfig, dump_fock: bool) -> Result<(), Failure> {
    let p = single(cfg)?;
    let space = FockSpace::new(cfg.oracle)?;
    let oracle = run_protocol_oracle(&p.schedule, p.r, &space)?;
    let analytic = analytic_to_fock(&p.state, &space)?;
    let f = fidelity(&oracle.state, &analytic);
    let p_analytic = p.state.norm_constant().powi(2);
    let dp = (oracle.cumulative_probability - p_analytic).abs();

    let pos = cfg.position_grid.unwrap_or_else(|| PositionGrid::auto(&p.state));
    let density = position_density(&p.state, &pos, Exec::Parallel)?;
    let phase = cfg.phase_space_grid.unwrap_or_else(|| PhaseSpaceGrid::auto(&p.state));
    let q = husimi_q(&p.state, &phase, Exec::Parallel)?;
    let di = (density.integral_estimate - 1.0).abs();
    let qi = (q.integral_estimate - 1.0).abs();

    println!("dimension = {}", space.dimension());
    println!("max_tail_mass = {:e}", oracle.max_tail_mass);
    let checks = [
        ("fidelity deficit", 1.0 - f, FIDELITY_TOLERANCE),
        ("success probability mismatch", dp, PROBABILITY_TOLERANCE),
        ("density integral error", di, DENSITY_INTEGRAL_TOLERANCE),
        ("husimi integral error", qi, Q_INTEGRAL_TOLERANCE),
    ];
    let mut ok = true;
    for (name, value, bound) in checks {
        let pass = value <= bound;
        ok &= pass;
        check_line(name, value, bound, pass);
    }
    println!("fidelity = {}", fmt_f64(f));
    println!("oracle_probability = {}", fmt_f64(oracle.cumulative_probability));
    println!("analytic_probability = {}", fmt_f64(p_analytic));

    if dump_fock {
        prepare_dir(&cfg.out_dir)?;
        let mut buf = Vec::new();
        write_fock_vector(&mut buf, &oracle.state).map_err(quasirect::Error::from)?;
        let path = cfg.out_dir.join("oracle_state.txt");
        write_atomic(&path, &buf)?;
        println!("wrote {}", path.display());
    }

    if ok {
        println!("verify: PASS");
        Ok(())
    } else {
        Err(Failure { code: EXIT_VERIFY_FAILED, message: "verify: one or more checks failed".into() })
    }
}

struct SweepRow {
    r: f64,
    tau_spec: TauSpec,
    tau: f64,
    integral: f64,
    flat: FlatnessReport,
}

pub fn sweep(cfg: &RunConfig) -> Result<(), Failure> {
    let pairs: Vec<(f64, TauSpec)> = cfg.r.iter().flat_map(|&r| cfg.tau.iter().map(move |&t| (r, t))).collect();
    let rows: Vec<Result<SweepRow, Failure>> = Exec::Parallel.map(&pairs, |&(r, t)| {
        let p = point(r, t, cfg.pulses)?;
        // Per-point grids run sequentially; the sweep itself is the parallel axis.
        let (result, flat) = density_of(cfg, &p, Exec::Sequential)?;
        Ok(SweepRow { r, tau_spec: t, tau: p.tau, integral: result.integral_estimate, flat })
    });
    let rows: Vec<SweepRow> = rows.into_iter().collect::<Result<_, _>>()?;

    prepare_dir(&cfg.out_dir)?;
    if cfg.format.csv() {
        let mut s = String::from("# flatness sweep\n");
        writeln!(s, "# pulses = {}", cfg.pulses).unwrap();
        writeln!(s, "# coverage = {}", fmt_f64(cfg.coverage)).unwrap();
        s.push_str("r,tau_tag,tau,integral_estimate,center_of_mass,plateau_lo,plateau_hi,plateau_mass,ripple\n");
        for w in &rows {
            writeln!(
                s,
                "{},{},{},{},{},{},{},{},{}",
                fmt_f64(w.r),
                w.tau_spec,
                fmt_f64(w.tau),
                fmt_f64(w.integral),
                fmt_f64(w.flat.center_of_mass),
                fmt_f64(w.flat.plateau_window.0),
                fmt_f64(w.flat.plateau_window.1),
                fmt_f64(w.flat.plateau_mass),
                fmt_f64(w.flat.ripple),
            )
            .unwrap();
        }
        write(&cfg.out_dir, "sweep.csv", &s)?;
    }
    if cfg.format.json() {
        let doc = json!({
            "pulses": cfg.pulses,
            "coverage": cfg.coverage,
            "rows": rows.iter().map(|w| json!({
                "r": w.r,
                "tau_tag": w.tau_spec.to_string(),
                "tau": w.tau,
                "integral_estimate": w.integral,
                "flatness": w.flat,
            })).collect::<Vec<_>>(),
        });
        let text = serde_json::to_string_pretty(&doc).map_err(quasirect::Error::from)? + "\n";
        write(&cfg.out_dir, "sweep.json", &text)?;
    }
    for w in &rows {
        println!("r = {:<6} tau = {:<10} ripple = {}", w.r, w.tau_spec.to_string(), fmt_f64(w.flat.ripple));
    }
    Ok(())
}
