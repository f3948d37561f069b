use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use super::{BaselineArgs, BenchArgs, BoundCurveArgs, CliError, DecodeArgs, GenArgs, VerifyArgs};
use crate::error::Error;
use crate::eval::{
    bound_curve as bound_curve_rows, bound_curve_csv, empirical_risk, fit_bound_constant, run_experiment, scaling_csv,
    scaling_study, BoundCurveConfig, Cell, ExperimentConfig, MRule, ScalingConfig,
};
use crate::instance::{
    generate, parse_dataset, parse_witness, serialize_dataset, serialize_hypothesis, serialize_witness, Dataset,
    InstanceParams, Layout, Witness,
};
use crate::learners::{
    brute_force_erm, local_search, multimodal_decode, recover_directions, single_halfspace_baseline, Budget,
    LearnerKind, LocalSearchConfig,
};
use crate::rng::seeded;

type CmdResult = Result<(), CliError>;

/// Q must be orthogonal to this accuracy.
const ORTHOGONALITY_TOL: f64 = 1e-12;
/// Per-coordinate tolerance for `y = Qx` and for recovered directions.
const MATCH_TOL: f64 = 1e-8;

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn write_file(path: &Path, text: &str) -> CmdResult {
    std::fs::write(path, text).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn emit(out: &mut dyn Write, text: &str) -> CmdResult {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Io("<stdout>".into(), e))
}

fn emit_to(path: Option<&Path>, out: &mut dyn Write, text: &str) -> CmdResult {
    match path {
        Some(p) => write_file(p, text),
        None => emit(out, text),
    }
}

fn load_dataset(path: &Path) -> Result<Dataset, CliError> {
    Ok(parse_dataset(&read(path)?)?)
}

fn load_witness(path: &Path) -> Result<Witness, CliError> {
    Ok(parse_witness(&read(path)?)?)
}

pub(super) fn gen(a: GenArgs, out: &mut dyn Write) -> CmdResult {
    let params = InstanceParams::planted(a.mode, a.n, a.pos, a.seed)?;
    if a.m == 0 {
        return Err(CliError::Usage("--m must be >= 1".into()));
    }
    let (d, w) = generate(&params, a.m)?;
    write_file(&a.out, &serialize_dataset(&d))?;
    write_file(&a.witness, &serialize_witness(&w))?;
    emit(
        out,
        &format!(
            "mode={} n={} ambient={} m={} positive_fraction={:.6}\n",
            d.mode,
            d.n_base,
            d.ambient_dim,
            d.m(),
            d.positive_fraction()
        ),
    )
}

pub(super) fn decode(a: DecodeArgs, out: &mut dyn Write) -> CmdResult {
    let d = load_dataset(&a.data)?;
    let w = a.witness.as_deref().map(load_witness).transpose()?;
    let start = Instant::now();
    let h = multimodal_decode(&d)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let risk = empirical_risk(&h, &d.xs(), &d.zs())?;
    write_file(&a.out, &serialize_hypothesis(&h))?;
    let mut line = format!("train_risk={risk:.6} wall_ms={wall_ms:.3}\n");
    if let Some(w) = w {
        if w.mode != d.mode || w.n_base != d.n_base {
            return Err(CliError::Usage("witness does not describe this dataset".into()));
        }
        let dev = h
            .directions()
            .zip(&w.directions)
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max);
        line.push_str(&format!("max_direction_deviation={dev:e}\n"));
    }
    emit(out, &line)
}

pub(super) fn baseline(a: BaselineArgs, out: &mut dyn Write) -> CmdResult {
    let d = load_dataset(&a.data)?;
    let xs = d.xs();
    let zs = d.zs();
    let start = Instant::now();
    let mut status = "ok";
    let h = match a.learner {
        LearnerKind::Decoder => {
            return Err(CliError::Usage(
                "baseline learners are bruteforce, localsearch and perceptron".into(),
            ))
        }
        LearnerKind::BruteForce => {
            let budget = match a.time_limit {
                Some(s) if s > 0.0 && s.is_finite() => Budget::with_time_limit(Duration::from_secs_f64(s)),
                Some(_) => return Err(CliError::Usage("--time-limit must be positive".into())),
                None => Budget::unlimited(),
            };
            match brute_force_erm(&xs, &zs, a.k, budget) {
                Err(Error::BudgetExceeded { best, .. }) => {
                    status = "budget-exceeded";
                    *best
                }
                other => other?,
            }
        }
        LearnerKind::LocalSearch => {
            let cfg = LocalSearchConfig::new(a.k, a.restarts, a.iters);
            local_search(&xs, &zs, &cfg, &mut seeded(a.seed))?.hypothesis
        }
        LearnerKind::Perceptron => single_halfspace_baseline(&xs, &zs, a.passes)?,
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let risk = empirical_risk(&h, &xs, &zs)?;
    write_file(&a.out, &serialize_hypothesis(&h))?;
    emit(
        out,
        &format!(
            "learner={} status={status} train_risk={risk:.6} wall_ms={wall_ms:.3}\n",
            a.learner
        ),
    )
}

pub(super) fn verify(a: VerifyArgs, out: &mut dyn Write) -> CmdResult {
    let fail = |check: &str, detail: String| CliError::Verify(format!("{check} check failed{detail}"));

    let (d, w) = match (load_dataset(&a.data), load_witness(&a.witness)) {
        (Ok(d), Ok(w)) => (d, w),
        (Err(CliError::Io(p, e)), _) | (_, Err(CliError::Io(p, e))) => return Err(CliError::Io(p, e)),
        (Err(e), _) | (_, Err(e)) => return Err(fail("format", format!(": {}", e.message()))),
    };
    if w.mode != d.mode || w.n_base != d.n_base {
        return Err(fail("format", ": witness does not describe this dataset".into()));
    }
    emit(out, "format: ok\n")?;
    let layout = Layout::new(d.mode, d.n_base)?;
    let planted = w.planted_hypothesis()?;

    for (i, r) in d.rows.iter().enumerate() {
        let qx = w.q.mul_vec(&r.x)?;
        let scale = r.x.iter().fold(1.0, |acc: f64, v| acc.max(v.abs()));
        if qx.iter().zip(&r.y).any(|(a, b)| (a - b).abs() > MATCH_TOL * scale) {
            return Err(fail("y=Qx", format!(" at row {}", i + 1)));
        }
    }
    emit(out, "y=Qx: ok\n")?;

    for (i, r) in d.rows.iter().enumerate() {
        if planted.predict_unchecked(&r.x) != r.z {
            return Err(fail("realizability", format!(" at row {}", i + 1)));
        }
    }
    emit(out, "realizability: ok\n")?;

    let orth = w.q.orthogonality_error();
    if orth > ORTHOGONALITY_TOL {
        return Err(fail("orthogonality", format!(": max |QᵀQ - I| = {orth:e}")));
    }
    emit(out, "orthogonality: ok\n")?;

    let recovered =
        recover_directions(&w.q, layout.mode, layout.n).map_err(|e| fail("fingerprint", format!(": {e}")))?;
    let dev = recovered
        .iter()
        .zip(&w.directions)
        .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max);
    if dev > MATCH_TOL {
        return Err(fail("fingerprint", format!(": direction deviation {dev:e}")));
    }
    emit(out, "fingerprint: ok\nall checks passed (5/5)\n")
}

struct Grid {
    ns: Vec<usize>,
    ms: Vec<MRule>,
}

fn parse_grid(items: &[String]) -> Result<Grid, CliError> {
    let mut ns = None;
    let mut ms = None;
    for item in items {
        let bad = || CliError::Usage(format!("bad grid entry '{item}' (expected n=<list> or m=<list>)"));
        let (key, list) = item.split_once('=').ok_or_else(bad)?;
        let parts = list.split(',').map(str::trim).filter(|s| !s.is_empty());
        match key {
            "n" => {
                ns = Some(
                    parts
                        .map(|p| p.parse::<usize>().map_err(|_| bad()))
                        .collect::<Result<Vec<_>, _>>()?,
                )
            }
            "m" => {
                ms = Some(
                    parts
                        .map(|p| p.parse::<MRule>().map_err(|_| bad()))
                        .collect::<Result<Vec<_>, _>>()?,
                )
            }
            _ => return Err(bad()),
        }
    }
    let ns = ns
        .filter(|v| !v.is_empty())
        .ok_or_else(|| CliError::Usage("grid needs n=<list>".into()))?;
    let ms = ms.filter(|v| !v.is_empty()).unwrap_or_else(|| vec![MRule::default()]);
    Ok(Grid { ns, ms })
}

pub(super) fn bench(a: BenchArgs, out: &mut dyn Write) -> CmdResult {
    let grid = parse_grid(&a.grid)?;
    if !(a.time_limit > 0.0 && a.time_limit.is_finite()) {
        return Err(CliError::Usage("--time-limit must be positive".into()));
    }
    let budget = Budget::with_time_limit(Duration::from_secs_f64(a.time_limit));
    if a.scaling {
        let [rule] = grid.ms[..] else {
            return Err(CliError::Usage("a scaling study takes a single m rule".into()));
        };
        let mut cfg = ScalingConfig::new(a.mode, grid.ns, rule);
        cfg.repeats = a.repeats;
        cfg.seed = a.master_seed;
        cfg.positive_target = a.pos;
        cfg.brute_force = a.with_bruteforce.then_some(budget);
        let rows = scaling_study(&cfg)?;
        return emit_to(a.out.as_deref(), out, &scaling_csv(&rows));
    }
    let mut cells = Vec::new();
    for &n in &grid.ns {
        let ambient = Layout::new(a.mode, n).map_or(0, |l| l.ambient);
        for &rule in &grid.ms {
            cells.push(Cell {
                mode: a.mode,
                n,
                m: rule.m_for(ambient),
            });
        }
    }
    let mut cfg = ExperimentConfig::new(a.learners, cells, a.seeds, a.master_seed);
    cfg.n_test = a.n_test;
    cfg.positive_target = a.pos;
    cfg.jobs = a.jobs;
    cfg.baseline.brute_force_budget = budget;
    let report = run_experiment(&cfg)?;
    emit_to(a.out.as_deref(), out, &report.to_csv())
}

pub(super) fn bound_curve(a: BoundCurveArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let mut cfg = BoundCurveConfig::new(a.mode, a.n, a.m, a.seeds);
    cfg.n_test = a.n_test;
    cfg.master_seed = a.master_seed;
    cfg.delta = a.delta;
    cfg.positive_target = a.pos;
    let rows = bound_curve_rows(&cfg)?;
    emit_to(a.out.as_deref(), out, &bound_curve_csv(&rows))?;
    writeln!(err, "c_fit={:.6}", fit_bound_constant(&rows)).map_err(|e| CliError::Io("<stderr>".into(), e))
}
