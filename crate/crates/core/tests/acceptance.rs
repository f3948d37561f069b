//! Acceptance suite. Runs every criterion in order on the calling thread and
//! prints one PASS/FAIL line per criterion; exits non-zero if any fail.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use bimodal_hs::eval::{
    bound_curve, empirical_risk, fit_bound_constant, loglog_slope, scaling_study, BoundCurveConfig, MRule,
    ScalingConfig,
};
use bimodal_hs::instance::{
    build_fingerprint, generate, parse_dataset, parse_witness, serialize_dataset, serialize_witness, InstanceParams,
    Mode,
};
use bimodal_hs::learners::{brute_force_erm, multimodal_decode, Budget};
use bimodal_hs::rng::seeded;
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn max_direction_deviation(h: &bimodal_hs::instance::Hypothesis, w: &bimodal_hs::instance::Witness) -> f64 {
    h.directions()
        .zip(&w.directions)
        .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max)
}

fn decoder_proper() -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..500u64 {
        let n = 1 + (i as usize % 16);
        let params = InstanceParams::planted(Mode::Proper, n, 0.25, 10_000 + i).map_err(|e| e.to_string())?;
        let (d, w) = generate(&params, 30 * n).map_err(|e| e.to_string())?;
        let h = multimodal_decode(&d).map_err(|e| format!("seed {i}: {e}"))?;
        let risk = empirical_risk(&h, &d.xs(), &d.zs()).map_err(|e| e.to_string())?;
        check(risk == 0.0, format!("instance {i} (n = {n}) has training risk {risk}"))?;
        let dev = max_direction_deviation(&h, &w);
        check(
            dev <= 1e-8,
            format!("instance {i} (n = {n}) direction deviation {dev:e}"),
        )?;
        worst = worst.max(dev);
    }
    Ok(format!("500/500 zero risk, max direction deviation {worst:.2e}"))
}

fn decoder_improper() -> Outcome {
    let mut worst = 0.0f64;
    let mut runs = 0;
    for &n in &[4usize, 9, 16, 25] {
        for s in 0..100u64 {
            let params = InstanceParams::planted(Mode::Improper, n, 0.25, 20_000 + s).map_err(|e| e.to_string())?;
            let (d, w) = generate(&params, 10 * n).map_err(|e| e.to_string())?;
            let h = multimodal_decode(&d).map_err(|e| format!("n = {n}, seed {s}: {e}"))?;
            let k = (n as f64).sqrt() as usize - 1;
            check(h.k() == k, format!("n = {n}: expected {k} halfspaces, got {}", h.k()))?;
            let risk = empirical_risk(&h, &d.xs(), &d.zs()).map_err(|e| e.to_string())?;
            check(risk == 0.0, format!("n = {n}, seed {s}: training risk {risk}"))?;
            let dev = max_direction_deviation(&h, &w);
            check(dev <= 1e-8, format!("n = {n}, seed {s}: direction deviation {dev:e}"))?;
            worst = worst.max(dev);
            runs += 1;
        }
    }
    Ok(format!("{runs}/{runs} zero risk, max direction deviation {worst:.2e}"))
}

fn construction_invariants() -> Outcome {
    let mut rng = seeded(31_337);
    let trials = 1000;
    let mut worst_orth = 0.0f64;
    let mut worst_fixed = 0.0f64;
    for t in 0..trials {
        let (mode, n) = if t % 2 == 0 {
            (Mode::Proper, rng.random_range(1..=24usize))
        } else {
            let s = rng.random_range(2..=6usize);
            (Mode::Improper, s * s)
        };
        let params = InstanceParams::planted(mode, n, 0.25, rng.random()).map_err(|e| e.to_string())?;
        let layout = params.layout().map_err(|e| e.to_string())?;
        let q = build_fingerprint(mode, n, &params.directions).map_err(|e| e.to_string())?;

        let orth = q.orthogonality_error();
        check(orth <= 1e-12, format!("trial {t}: orthogonality error {orth:e}"))?;
        worst_orth = worst_orth.max(orth);

        for r in &params.directions {
            let x = r.padded(layout.ambient);
            let qx = q.mul_vec(&x).map_err(|e| e.to_string())?;
            let dev = qx.iter().zip(x.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            check(dev <= 1e-12, format!("trial {t}: fixed-point deviation {dev:e}"))?;
            worst_fixed = worst_fixed.max(dev);
        }

        let mut params = params;
        params.thresholds = Some((0..layout.k).map(|_| rng.random_range(-1.0..1.0)).collect());
        let (d, w) = generate(&params, 1).map_err(|e| e.to_string())?;
        let x = &d.rows[0].x;
        let mut zeroed = x.clone();
        zeroed[layout.label_dim..].iter_mut().for_each(|v| *v = 0.0);
        let mut noisy = x.clone();
        noisy[layout.label_dim..]
            .iter_mut()
            .for_each(|v| *v = rng.random_range(-50.0..50.0));
        let h = w.planted_hypothesis().map_err(|e| e.to_string())?;
        let z = h.predict(x).map_err(|e| e.to_string())?;
        check(
            z == d.rows[0].z,
            format!("trial {t}: planted label disagrees with the dataset"),
        )?;
        check(
            h.predict(&zeroed).map_err(|e| e.to_string())? == z && h.predict(&noisy).map_err(|e| e.to_string())? == z,
            format!("trial {t}: label depends on trailing coordinates"),
        )?;
    }
    Ok(format!(
        "{trials} trials each, max orthogonality error {worst_orth:.2e}, max fixed-point deviation {worst_fixed:.2e}, 0 locality failures"
    ))
}

fn runtime_scaling() -> Outcome {
    let ns = vec![8usize, 16, 32, 64, 128];
    let cfg = ScalingConfig::new(Mode::Proper, ns.clone(), MRule::TimesAmbient(10));
    let rows = scaling_study(&cfg).map_err(|e| e.to_string())?;
    let times: Vec<f64> = rows.iter().map(|r| r.decoder_ms).collect();
    let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let slope = loglog_slope(&xs, &times).map_err(|e| e.to_string())?;
    let timing = times.iter().map(|t| format!("{t:.3}")).collect::<Vec<_>>().join("/");
    check(slope <= 3.2, format!("decoder slope {slope:.3} > 3.2 (ms {timing})"))?;

    let budget = Budget::with_time_limit(Duration::from_secs(60));
    let small = InstanceParams::planted(Mode::Proper, 1, 0.25, 41).map_err(|e| e.to_string())?;
    let (d, _) = generate(&small, 14).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let h = brute_force_erm(&d.xs(), &d.zs(), 2, budget).map_err(|e| format!("ambient 3, m = 14: {e}"))?;
    let small_ms = start.elapsed().as_secs_f64() * 1e3;
    let risk = empirical_risk(&h, &d.xs(), &d.zs()).map_err(|e| e.to_string())?;
    check(risk == 0.0, format!("ambient 3, m = 14: brute force risk {risk}"))?;

    let large = InstanceParams::planted(Mode::Proper, 2, 0.25, 42).map_err(|e| e.to_string())?;
    let (d, _) = generate(&large, 30).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let large_result = brute_force_erm(&d.xs(), &d.zs(), 2, budget);
    let large_s = start.elapsed().as_secs_f64();
    let timed_out = matches!(large_result, Err(bimodal_hs::Error::BudgetExceeded { .. }));
    check(
        timed_out,
        format!("ambient 6, m = 30: brute force finished inside the 60 s budget ({large_s:.1} s)"),
    )?;
    Ok(format!(
        "decoder slope {slope:.3} (ms {timing}); brute force ambient 3 in {small_ms:.1} ms, ambient 6 exceeded 60 s"
    ))
}

fn generalization_bound() -> Outcome {
    let grid = vec![50usize, 150, 500, 1500, 5000];
    let cfg = BoundCurveConfig::new(Mode::Proper, 5, grid.clone(), 20);
    let rows = bound_curve(&cfg).map_err(|e| e.to_string())?;
    check(
        rows.iter().all(|r| r.bound.is_some()),
        "a decoded hypothesis was inconsistent with its training sample",
    )?;
    let medians: Vec<f64> = grid
        .iter()
        .map(|&m| {
            let mut v: Vec<f64> = rows.iter().filter(|r| r.m == m).map(|r| r.test_risk).collect();
            v.sort_by(f64::total_cmp);
            0.5 * (v[9] + v[10])
        })
        .collect();
    let med = medians.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>().join("/");
    check(
        medians.windows(2).all(|w| w[1] <= w[0]),
        format!("median test risk not non-increasing: {med}"),
    )?;
    let c_fit = fit_bound_constant(&rows);
    check(c_fit <= 5.0, format!("C_fit = {c_fit:.4} > 5"))?;
    Ok(format!("medians {med}, C_fit = {c_fit:.4}"))
}

fn oracle_equivalence() -> Outcome {
    for i in 0..50u64 {
        let m = 8 + (i as usize % 7);
        let params = InstanceParams::planted(Mode::Proper, 1, 0.4, 50_000 + i).map_err(|e| e.to_string())?;
        let (d, _) = generate(&params, m).map_err(|e| e.to_string())?;
        let xs = d.xs();
        let zs = d.zs();
        let bf = brute_force_erm(&xs, &zs, 2, Budget::unlimited()).map_err(|e| format!("instance {i}: {e}"))?;
        let dec = multimodal_decode(&d).map_err(|e| format!("instance {i}: {e}"))?;
        let r_bf = empirical_risk(&bf, &xs, &zs).map_err(|e| e.to_string())?;
        let r_dec = empirical_risk(&dec, &xs, &zs).map_err(|e| e.to_string())?;
        check(
            r_bf == 0.0 && r_dec == 0.0,
            format!("instance {i} (m = {m}): brute force {r_bf}, decoder {r_dec}"),
        )?;
    }
    Ok("50/50 instances: brute force risk 0 = decoder risk 0".into())
}

fn round_trip_and_faults() -> Outcome {
    for s in 0..100u64 {
        let (mode, n) = if s % 4 == 3 {
            (Mode::Improper, 9)
        } else {
            (Mode::Proper, 1 + s as usize % 6)
        };
        let params = InstanceParams::planted(mode, n, 0.3, 60_000 + s).map_err(|e| e.to_string())?;
        let (d, w) = generate(&params, 5 + s as usize).map_err(|e| e.to_string())?;
        let dt = serialize_dataset(&d);
        let wt = serialize_witness(&w);
        let d2 = parse_dataset(&dt).map_err(|e| format!("seed {s}: {e}"))?;
        let w2 = parse_witness(&wt).map_err(|e| format!("seed {s}: {e}"))?;
        check(d2 == d && w2 == w, format!("seed {s}: parse(serialize(x)) != x"))?;
        check(
            serialize_dataset(&d2) == dt && serialize_witness(&w2) == wt,
            format!("seed {s}: re-serialization differs"),
        )?;
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let params = InstanceParams::planted(Mode::Proper, 3, 0.3, 7).map_err(|e| e.to_string())?;
    let (d, w) = generate(&params, 40).map_err(|e| e.to_string())?;
    let clean_d = serialize_dataset(&d);
    let clean_w = serialize_witness(&w);

    let flipped = {
        let mut d = d.clone();
        d.rows[4].z = d.rows[4].z.flipped();
        serialize_dataset(&d)
    };
    let corrupted_y = {
        let mut d = d.clone();
        d.rows[9].y[2] += 0.5;
        serialize_dataset(&d)
    };
    let broken_header = clean_d.replacen("mode=proper n=3", "mode=proper n=three", 1);
    let non_orthogonal = {
        let mut w = w.clone();
        w.q[(0, 1)] += 1e-3;
        serialize_witness(&w)
    };
    let truncated = {
        let mut t = clean_d.trim_end().to_string();
        let cut = t.rfind(" | ").expect("row separator");
        t.truncate(cut);
        t + "\n"
    };
    let faults = [
        (
            "flipped label",
            flipped,
            clean_w.clone(),
            "realizability check failed at row 5",
        ),
        (
            "corrupted y",
            corrupted_y,
            clean_w.clone(),
            "y=Qx check failed at row 10",
        ),
        ("broken header", broken_header, clean_w.clone(), "format check failed"),
        ("non-orthogonal Q", clean_d.clone(), non_orthogonal, "check failed"),
        ("truncated row", truncated, clean_w.clone(), "format check failed"),
    ];
    let bin = env!("CARGO_BIN_EXE_bimodal-hs");
    let dp = dir.path().join("d.txt");
    let wp = dir.path().join("w.txt");
    let verify = |data: &str, witness: &str| -> Result<(Option<i32>, String), String> {
        std::fs::write(&dp, data).map_err(|e| e.to_string())?;
        std::fs::write(&wp, witness).map_err(|e| e.to_string())?;
        let o = Command::new(bin)
            .args([
                "verify",
                "--data",
                dp.to_str().unwrap(),
                "--witness",
                wp.to_str().unwrap(),
            ])
            .output()
            .map_err(|e| e.to_string())?;
        Ok((
            o.status.code(),
            String::from_utf8_lossy(&o.stdout).into_owned() + &String::from_utf8_lossy(&o.stderr),
        ))
    };
    let (code, text) = verify(&clean_d, &clean_w)?;
    check(
        code == Some(0) && text.contains("all checks passed (5/5)"),
        format!("clean files: {text}"),
    )?;
    for (name, data, witness, expect) in &faults {
        let (code, text) = verify(data, witness)?;
        check(code == Some(4), format!("{name}: exit {code:?}, output {text}"))?;
        check(
            text.contains(expect),
            format!("{name}: output lacks '{expect}': {text}"),
        )?;
    }
    Ok("100/100 round trips, 5/5 injected faults exit 4".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("decoder correctness, proper mode", decoder_proper),
        ("decoder correctness, improper mode", decoder_improper),
        ("construction invariants", construction_invariants),
        ("runtime scaling", runtime_scaling),
        ("generalization bound", generalization_bound),
        ("oracle equivalence", oracle_equivalence),
        ("round trip and fault detection", round_trip_and_faults),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({secs:.1} s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({secs:.1} s): {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
