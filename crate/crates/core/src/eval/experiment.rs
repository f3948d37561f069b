use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::eval::{empirical_risk, estimate_population_risk, format_sig, vc_bound};
use crate::instance::{generate, Dataset, Hypothesis, InstanceParams, Mode, Witness};
use crate::learners::{
    brute_force_erm, local_search, multimodal_decode, single_halfspace_baseline, Budget, LearnerKind, LocalSearchConfig,
};
use crate::rng::{derive_seed, seeded};

pub const REPORT_HEADER: &str = "learner,mode,n,ambient,m,seed,status,train_risk,test_risk,wall_ms,bound";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cell {
    pub mode: Mode,
    pub n: usize,
    pub m: usize,
}

/// Knobs for the unimodal learners.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BaselineSettings {
    pub k: usize,
    pub restarts: usize,
    pub iters: usize,
    pub passes: usize,
    pub brute_force_budget: Budget,
}

impl Default for BaselineSettings {
    fn default() -> Self {
        Self {
            k: 2,
            restarts: 10,
            iters: 500,
            passes: 100,
            brute_force_budget: Budget::with_time_limit(Duration::from_secs(60)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub learners: Vec<LearnerKind>,
    pub cells: Vec<Cell>,
    /// Replicates per cell.
    pub seeds: usize,
    pub master_seed: u64,
    pub n_test: usize,
    pub positive_target: f64,
    pub delta: f64,
    /// Constant handed to [`vc_bound`] for consistent hypotheses.
    pub bound_constant: f64,
    pub baseline: BaselineSettings,
    /// Worker threads; 1 runs everything on the calling thread.
    pub jobs: usize,
}

impl ExperimentConfig {
    pub fn new(learners: Vec<LearnerKind>, cells: Vec<Cell>, seeds: usize, master_seed: u64) -> Self {
        Self {
            learners,
            cells,
            seeds,
            master_seed,
            n_test: 10_000,
            positive_target: 0.25,
            delta: 0.05,
            bound_constant: 1.0,
            baseline: BaselineSettings::default(),
            jobs: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub learner: LearnerKind,
    pub mode: Mode,
    pub n: usize,
    pub ambient: usize,
    pub m: usize,
    pub seed: u64,
    /// `ok` or the error status of the failed step.
    pub status: String,
    pub train_risk: Option<f64>,
    pub test_risk: Option<f64>,
    pub wall_ms: f64,
    pub bound: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExperimentReport {
    pub rows: Vec<ReportRow>,
}

impl ExperimentReport {
    pub fn to_csv(&self) -> String {
        report_csv(&self.rows)
    }
}

pub fn report_csv(rows: &[ReportRow]) -> String {
    let mut out = String::from(REPORT_HEADER);
    out.push('\n');
    let risk = |r: Option<f64>| r.map(|v| format!("{v:.6}")).unwrap_or_default();
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.learner,
            r.mode,
            r.n,
            r.ambient,
            r.m,
            r.seed,
            r.status,
            risk(r.train_risk),
            risk(r.test_risk),
            format_sig(r.wall_ms, 6),
            r.bound.map(|b| format_sig(b, 6)).unwrap_or_default(),
        ));
    }
    out
}

/// Runs every (cell, replicate, learner) triple.
///
/// Replicate `s` of cell `i` uses seed `derive_seed(derive_seed(master, i), s)`
/// and all learners of one replicate share the same planted instance. Rows
/// are ordered by cell, then replicate, then learner, whatever `jobs` is.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    if config.learners.is_empty() || config.cells.is_empty() || config.seeds == 0 {
        return Err(Error::invalid("experiment needs at least one learner, cell and seed"));
    }
    if config.n_test == 0 {
        return Err(Error::invalid("n_test must be >= 1"));
    }
    vc_bound(1, 2, config.delta, config.bound_constant)?;

    let units: Vec<(Cell, u64)> = config
        .cells
        .iter()
        .enumerate()
        .flat_map(|(i, cell)| {
            let cell_seed = derive_seed(config.master_seed, i as u64);
            (0..config.seeds as u64).map(move |s| (*cell, derive_seed(cell_seed, s)))
        })
        .collect();

    let run = |&(cell, seed): &(Cell, u64)| run_unit(config, cell, seed);
    let groups: Vec<Vec<ReportRow>> = if config.jobs <= 1 {
        units.iter().map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
        pool.install(|| units.par_iter().map(run).collect())
    };
    Ok(ExperimentReport {
        rows: groups.into_iter().flatten().collect(),
    })
}

fn run_unit(config: &ExperimentConfig, cell: Cell, seed: u64) -> Vec<ReportRow> {
    let blank = |learner: LearnerKind, ambient: usize, status: &str| ReportRow {
        learner,
        mode: cell.mode,
        n: cell.n,
        ambient,
        m: cell.m,
        seed,
        status: status.to_string(),
        train_risk: None,
        test_risk: None,
        wall_ms: 0.0,
        bound: None,
    };
    let instance =
        InstanceParams::planted(cell.mode, cell.n, config.positive_target, seed).and_then(|p| generate(&p, cell.m));
    let (dataset, witness) = match instance {
        Ok(v) => v,
        Err(e) => {
            let ambient = crate::instance::Layout::new(cell.mode, cell.n).map_or(0, |l| l.ambient);
            return config.learners.iter().map(|&l| blank(l, ambient, e.status())).collect();
        }
    };
    config
        .learners
        .iter()
        .map(|&learner| {
            let mut row = blank(learner, dataset.ambient_dim, "ok");
            let start = Instant::now();
            let trained = train(learner, &dataset, &config.baseline, seed);
            row.wall_ms = start.elapsed().as_secs_f64() * 1e3;
            let h = match trained {
                Ok(h) => h,
                Err(Error::BudgetExceeded { best, .. }) => {
                    row.status = "budget-exceeded".into();
                    *best
                }
                Err(e) => {
                    row.status = e.status().into();
                    return row;
                }
            };
            if let Err(e) = measure(&mut row, &h, &dataset, &witness, config, seed) {
                row.status = e.status().into();
            }
            row
        })
        .collect()
}

fn train(learner: LearnerKind, d: &Dataset, b: &BaselineSettings, seed: u64) -> Result<Hypothesis> {
    let xs = d.xs();
    let zs = d.zs();
    match learner {
        LearnerKind::Decoder => multimodal_decode(d),
        LearnerKind::BruteForce => brute_force_erm(&xs, &zs, b.k, b.brute_force_budget),
        LearnerKind::LocalSearch => {
            let cfg = LocalSearchConfig::new(b.k, b.restarts, b.iters);
            Ok(local_search(&xs, &zs, &cfg, &mut seeded(derive_seed(seed, 2)))?.hypothesis)
        }
        LearnerKind::Perceptron => single_halfspace_baseline(&xs, &zs, b.passes),
    }
}

fn measure(
    row: &mut ReportRow,
    h: &Hypothesis,
    d: &Dataset,
    w: &Witness,
    config: &ExperimentConfig,
    seed: u64,
) -> Result<()> {
    let train = empirical_risk(h, &d.xs(), &d.zs())?;
    let params = w.params(config.positive_target, seed);
    let test = estimate_population_risk(h, &params, config.n_test, &mut seeded(derive_seed(seed, 3)))?;
    row.train_risk = Some(train);
    row.test_risk = Some(test);
    if train == 0.0 && d.m() >= 2 {
        row.bound = Some(vc_bound(d.ambient_dim, d.m(), config.delta, config.bound_constant)?);
    }
    Ok(())
}
