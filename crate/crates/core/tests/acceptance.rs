//! Acceptance checks, one line per criterion. Runs as a plain binary so the
//! verdicts show up in `cargo test` output; exits non-zero if any fails.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, Vector3, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stationkeep::allocation::{apply_angle_logic, build_transformation, weighted_pseudoinverse};
use stationkeep::angle::rad;
use stationkeep::control::{select_lambda, ControllerKind};
use stationkeep::harness::{export_report, load_matrix, run_experiment_matrix, ExportFormat, MatrixReport};
use stationkeep::sim::{run_station_keeping, run_sysid_maneuver, Maneuver, Pose, Scenario, SensorModels, SimConfig};
use stationkeep::vehicle::{coriolis_matrix, mass_matrix, rotation_matrix, thrust_from_command, thruster_arms, VehicleParams};
use stationkeep::wind::{synthesize_wind, turbulence_stats, PsdWindow, WindSynthesis};

type Check = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn matrix_structure() -> Check {
    let start = Instant::now();
    let p = VehicleParams::default();
    let m = mass_matrix(&p).map_err(|e| e.to_string())?;
    let sym = (m - m.transpose()).abs().max();
    let pd = m.cholesky().is_some();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst_j, mut worst_c) = (0.0f64, 0.0f64);
    for _ in 0..1_000_000 {
        let psi = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let j = rotation_matrix(psi);
        worst_j = worst_j.max((j.transpose() * j - nalgebra::Matrix3::identity()).abs().max());
        let nu = Vector3::new(rng.random_range(-3.0..3.0), rng.random_range(-2.0..2.0), rng.random_range(-1.0..1.0));
        let c = coriolis_matrix(&p, &nu);
        worst_c = worst_c.max((c + c.transpose()).abs().max());
    }
    let elapsed = start.elapsed();
    ensure(
        worst_j < 1e-12 && sym == 0.0 && pd && worst_c < 1e-12 && elapsed < Duration::from_secs(10),
        format!("max |J'J-I| {worst_j:.1e}, M sym {sym:.1e} pd {pd}, max |C+C'| {worst_c:.1e}, {elapsed:.2?}"),
    )
}

fn thrust_calibration() -> Check {
    let knots = [
        (-100.0, -102.0),
        (-90.0, -84.0),
        (-80.0, -66.0),
        (-70.0, -44.0),
        (-60.0, -31.0),
        (-50.0, -13.0),
        (-40.0, -9.0),
        (-30.0, -4.0),
        (20.0, 29.0),
        (30.0, 34.0),
        (40.0, 78.0),
        (50.0, 110.0),
        (60.0, 144.0),
        (70.0, 175.0),
        (80.0, 203.0),
        (90.0, 228.0),
        (100.0, 254.0),
    ];
    let mut exact = 0;
    for (c, t) in knots {
        if thrust_from_command(c).map_err(|e| e.to_string())? == t {
            exact += 1;
        }
    }
    let mut prev = f64::NEG_INFINITY;
    let mut monotone = true;
    for i in 0..=10_000 {
        let t = thrust_from_command(-100.0 + 200.0 * i as f64 / 10_000.0).map_err(|e| e.to_string())?;
        monotone &= t >= prev;
        prev = t;
    }
    ensure(exact == 17 && monotone, format!("{exact}/17 knots exact, monotone over 10001 points: {monotone}"))
}

fn lambda_selection() -> Check {
    let s = select_lambda(0.8, 4.0, 2.0).map_err(|e| e.to_string())?;
    let ok = (s.rotation - 1.676).abs() < 5e-4
        && (s.sampling - 0.8).abs() < 1e-12
        && (s.rise_time - 0.1667).abs() < 5e-5
        && s.selected == s.rise_time
        && (s.selected - 0.16).abs() < 0.01;
    ensure(ok, format!("({:.4}, {:.4}, {:.4}) -> {:.4}", s.rotation, s.sampling, s.rise_time, s.selected))
}

fn allocation() -> Check {
    let arms = thruster_arms(&VehicleParams::default());
    let t = build_transformation(&arms).map_err(|e| e.to_string())?;
    let pinv = weighted_pseudoinverse(&t, &[1.0; 4]).map_err(|e| e.to_string())?;
    // null space of T from its SVD, independent of the library's helper
    let svd = nalgebra::SVD::new(DMatrix::from_fn(4, 4, |r, c| if r < 3 { t[(r, c)] } else { 0.0 }), false, true);
    let v_t = svd.v_t.ok_or("svd failed")?;
    let idx = svd.singular_values.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
    let null = Vector4::from_fn(|i, _| v_t[(idx, i)]);

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut worst_exact, mut beaten) = (0.0f64, 0usize);
    for _ in 0..10_000 {
        let tau = DMatrix::from_column_slice(
            3,
            1,
            &[rng.random_range(-150.0..150.0), rng.random_range(-60.0..60.0), rng.random_range(-100.0..100.0)],
        );
        let f = &pinv * &tau;
        worst_exact = worst_exact.max((&t * &f - &tau).norm());
        let norm = f.norm_squared();
        for _ in 0..1_000 {
            let k = rng.random_range(-200.0..200.0);
            let alt = Vector4::from_fn(|i, _| f[i] + k * null[i]);
            if alt.norm_squared() < norm - 1e-9 {
                beaten += 1;
            }
        }
    }
    let f = &pinv * DMatrix::from_column_slice(3, 1, &[0.0, 100.0, 0.0]);
    let expected = [71.0, 50.0, -71.0, 50.0];
    let worked = (0..4).all(|i| (f[i] - expected[i]).abs() <= 0.1);
    ensure(
        worst_exact < 1e-6 && beaten == 0 && worked,
        format!(
            "max |Tf-tau| {worst_exact:.1e}, cheaper alternatives {beaten}, tau=(0,100,0) -> ({:.2}, {:.2}, {:.2}, {:.2})",
            f[0], f[1], f[2], f[3]
        ),
    )
}

fn angle_logic() -> Check {
    let limit = rad(45.0);
    let mut mismatches = Vec::new();
    for i in -1800i32..=1800 {
        let d = i as f64 / 10.0;
        let (exp_angle, exp_thrust, exp_zero) = if i.abs() <= 450 {
            (d, 100.0, false)
        } else if i.abs() >= 1350 {
            (if d > 0.0 { d - 180.0 } else { d + 180.0 }, -100.0, false)
        } else {
            (45.0f64.copysign(d), 0.0, true)
        };
        let (a, t, z) = apply_angle_logic(rad(d), 100.0, limit);
        // +/-180 both reverse to a straight-ahead azimuth
        let angle_ok = (a.to_degrees() - exp_angle).abs() < 1e-9 || (i.abs() == 1800 && a.abs() < 1e-9);
        if !(angle_ok && t == exp_thrust && z == exp_zero) {
            mismatches.push(d);
        }
    }
    let (a, t, z) = apply_angle_logic(rad(160.0), 100.0, limit);
    let reversal = (a.to_degrees() + 20.0).abs() < 1e-9 && t == -100.0 && !z;
    ensure(
        mismatches.is_empty() && reversal,
        format!("3601 angles, mismatches {:?}, 160 deg -> ({:.1} deg, {t})", &mismatches[..mismatches.len().min(5)], a.to_degrees()),
    )
}

fn undisturbed_regulation() -> Check {
    let mut details = Vec::new();
    let mut ok = true;
    for kind in ControllerKind::ALL {
        let scenario = Scenario {
            controller: kind,
            initial_offset: Pose { x_m: 3.0, y_m: 4.0, heading_deg: 45.0 },
            ..Scenario::default()
        };
        let cfg = SimConfig { sensors: SensorModels::ideal(), ..SimConfig::default() };
        let start = Instant::now();
        let log = run_station_keeping(&scenario, &cfg).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        let (pos, hdg) = log
            .rows
            .iter()
            .filter(|r| r.t_s >= 120.0)
            .fold((0.0f64, 0.0f64), |a, r| (a.0.max(r.err_x_m.hypot(r.err_y_m)), a.1.max(r.err_psi_rad.abs().to_degrees())));
        ok &= pos < 0.5 && hdg < 5.0 && elapsed < Duration::from_secs(5) && log.rows.last().map(|r| r.t_s) == Some(699.75);
        details.push(format!("{kind} {pos:.3} m/{hdg:.2} deg in {elapsed:.2?}"));
    }
    ensure(ok, format!("worst after 120 s: {}", details.join(", ")))
}

fn mean(report: &MatrixReport, scenario: &str, kind: ControllerKind, ff: bool) -> Result<(f64, f64), String> {
    report
        .row(scenario, kind, ff)
        .map(|r| (r.mean_position_m, r.mean_heading_deg))
        .ok_or_else(|| format!("missing summary row {scenario}/{kind}/{ff}"))
}

fn ordering(report: &MatrixReport) -> Check {
    let pd = mean(report, "location2", ControllerKind::Pd, false)?;
    let bs = mean(report, "location2", ControllerKind::Backstepping, false)?;
    let sm = mean(report, "location2", ControllerKind::Sliding, false)?;
    let bs_ff = mean(report, "location2", ControllerKind::Backstepping, true)?;
    ensure(
        sm.1 <= bs.1 && sm.1 <= pd.1 && bs_ff.0 < bs.0,
        format!(
            "heading sliding {:.2} / backstepping {:.2} / pd {:.2} deg; backstepping position {:.3} -> {:.3} m with feedforward",
            sm.1, bs.1, pd.1, bs.0, bs_ff.0
        ),
    )
}

fn relative_change(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale < 1e-9 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn feedforward_neutral(report: &MatrixReport) -> Check {
    let off = mean(report, "location1", ControllerKind::Sliding, false)?;
    let on = mean(report, "location1", ControllerKind::Sliding, true)?;
    let dp = relative_change(off.0, on.0);
    let dh = relative_change(off.1, on.1);
    ensure(
        dp < 0.25 && dh < 0.25,
        format!(
            "position {:.4} vs {:.4} m ({:.1}%), heading {:.4} vs {:.4} deg ({:.1}%)",
            off.0,
            on.0,
            100.0 * dp,
            off.1,
            on.1,
            100.0 * dh
        ),
    )
}

fn wind_statistics() -> Check {
    let mut worst = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::INFINITY);
    for seed in 0..20 {
        let spec = WindSynthesis {
            mean_speed: 2.43,
            mean_direction: 0.0,
            intensity: 0.15,
            cutoff_hz: 0.03,
            direction_std: 0.0,
            duration: 700.0,
            dt: 1.0,
        };
        let speeds: Vec<f64> =
            synthesize_wind(seed, &spec).map_err(|e| e.to_string())?.iter().map(|s| s.wind.speed).collect();
        let stats = turbulence_stats(&speeds, 1.0, PsdWindow::Rectangular).map_err(|e| e.to_string())?;
        worst.0 = worst.0.min(stats.intensity);
        worst.1 = worst.1.max(stats.intensity);
        worst.2 = worst.2.min(stats.energy_fraction_below(0.03));
        worst.3 = worst.3.min(stats.length_scale.unwrap_or(0.0));
    }
    ensure(
        worst.0 >= 0.135 && worst.1 <= 0.165 && worst.2 >= 0.9 && worst.3 >= 70.0,
        format!(
            "20 seeds: intensity {:.4}..{:.4}, min energy below cutoff {:.3}, min length scale {:.1} m",
            worst.0, worst.1, worst.2, worst.3
        ),
    )
}

fn sysid_consistency() -> Check {
    let p = VehicleParams::default();
    let force = 254.0;
    let (a, b) = (p.quadratic_drag.x_uu, p.linear_drag.x_u);
    let root = (-b + (b * b + 4.0 * a * force).sqrt()) / (2.0 * a);
    let run = match Maneuver::standard("acceleration").map_err(|e| e.to_string())? {
        Maneuver::Acceleration { run_s, .. } => run_s,
        _ => unreachable!(),
    };
    let log = run_sysid_maneuver(&Maneuver::standard("acceleration").map_err(|e| e.to_string())?, &p, 0.05, 1)
        .map_err(|e| e.to_string())?;
    let terminal = log.rows.iter().rev().find(|r| r.t_s < run).map(|r| r.u_mps).ok_or("empty log")?;
    let coast: Vec<f64> = log.rows.iter().filter(|r| r.t_s >= run).map(|r| r.u_mps).collect();
    let monotone = coast.windows(2).all(|w| w[1] <= w[0]) && coast.last() < coast.first();
    let err = (terminal - root).abs() / root;
    ensure(
        err < 0.005 && monotone,
        format!("terminal {terminal:.4} m/s vs root {root:.4} ({:.3}%), coast monotone {monotone}", 100.0 * err),
    )
}

fn determinism(first: &MatrixReport) -> Check {
    let matrix = load_matrix(configs().join("matrix.toml")).map_err(|e| e.to_string())?;
    let second = run_experiment_matrix(&matrix, None).map_err(|e| e.to_string())?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let a = export_report(first, dir.path().join("a"), ExportFormat::Csv).map_err(|e| e.to_string())?;
    let b = export_report(&second, dir.path().join("b"), ExportFormat::Csv).map_err(|e| e.to_string())?;
    let (a, b) = (std::fs::read(a).map_err(|e| e.to_string())?, std::fs::read(b).map_err(|e| e.to_string())?);
    ensure(a == b, format!("{} cells, summary tables {} bytes, identical: {}", first.cells.len(), a.len(), a == b))
}

fn main() {
    let start = Instant::now();
    let report = load_matrix(configs().join("matrix.toml")).and_then(|m| run_experiment_matrix(&m, None));
    let with_report = |f: fn(&MatrixReport) -> Check| -> Check {
        match &report {
            Ok(r) => f(r),
            Err(e) => Err(format!("matrix run failed: {e}")),
        }
    };
    let results: Vec<(u32, &str, Check)> = vec![
        (1, "matrix structure", matrix_structure()),
        (2, "thrust calibration", thrust_calibration()),
        (3, "bandwidth selection", lambda_selection()),
        (4, "allocation exactness and optimality", allocation()),
        (5, "azimuth logic sweep", angle_logic()),
        (6, "undisturbed regulation", undisturbed_regulation()),
        (7, "beam-sea controller ordering", with_report(ordering)),
        (8, "feedforward under aligned wind", with_report(feedforward_neutral)),
        (9, "wind synthesis statistics", wind_statistics()),
        (10, "identification run consistency", sysid_consistency()),
        (11, "matrix determinism", with_report(determinism)),
    ];
    let mut failed = 0;
    for (n, name, result) in &results {
        match result {
            Ok(d) => println!("criterion {n:>2} PASS  {name}: {d}"),
            Err(d) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name}: {d}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed ({:.1?})", results.len() - failed, start.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
