//! Config-driven experiment runners.
//!
//! Each `cmd_*` function computes its result, writes plot-ready artifacts
//! into an output directory and returns the in-memory values. Numbers are
//! written with shortest round-trip formatting, so re-parsing an artifact
//! reproduces the computed value exactly.
//!
//! Config files are TOML:
//!
//! ```toml
//! mechanism = "vcg"
//!
//! [channel]
//! p_max = 1.0
//! abcd = [2.0, 0.2, 1.0, 0.1]      # or gains = [[g00, g01], [g10, g11]], gains[tx][rx]
//!
//! [learning]
//! t_max = 100000
//! seeds = [0, 1, 2]
//!
//! [sweep]
//! parameter = "bd"                  # "bd" (symmetric), "b" or "d"
//! db_start = -20.0
//! db_end = 20.0
//! steps = 41
//! ```

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelGains;
use crate::error::{Error, Result};
use crate::game::{
    build_utility_table, is_correlated_equilibrium, pure_nash, CeVerdict, JointDistribution, Mechanism, UtilityRow,
    UtilityTable, DEFAULT_CE_EPS,
};
use crate::learning::{run_on_table, LearningConfig, LearningRun};
use crate::region::{
    area_power_control, area_timeshare_ac, area_timeshare_via_b, classify_frontier, enumerate_corners, sample_frontier,
    CornerSet, Curvature, FrontierSample, Hull, HullVertex, DEFAULT_AREA_GRID,
};

pub const DEFAULT_FRONTIER_GRID: usize = 257;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    #[serde(default = "one")]
    pub p_max: f64,
    /// Two-user shorthand `[a, b, c, d]`.
    pub abcd: Option<[f64; 4]>,
    /// Full matrix, `gains[tx][rx]`.
    pub gains: Option<Vec<Vec<f64>>>,
}

fn one() -> f64 {
    1.0
}

impl ChannelSpec {
    pub fn build(&self) -> Result<ChannelGains> {
        match (&self.abcd, &self.gains) {
            (Some([a, b, c, d]), None) => ChannelGains::two_user(*a, *b, *c, *d, self.p_max),
            (None, Some(m)) => ChannelGains::new(m.clone(), self.p_max),
            (Some(_), Some(_)) => Err(Error::Config("give either channel.abcd or channel.gains, not both".into())),
            (None, None) => Err(Error::Config("channel needs abcd or gains".into())),
        }
        .map_err(|e| match e {
            Error::InvalidInput(msg) => Error::Config(msg),
            other => other,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LearningSpec {
    #[serde(default = "default_t_max")]
    pub t_max: usize,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    pub mu: Option<f64>,
    /// Defaults to the second half of the run; 0 is the full history.
    pub window: Option<usize>,
    pub initial_p: Option<Vec<f64>>,
    #[serde(default = "default_learn_eps")]
    pub ce_eps: f64,
}

fn default_t_max() -> usize {
    100_000
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_learn_eps() -> f64 {
    0.05
}

impl Default for LearningSpec {
    fn default() -> Self {
        Self {
            t_max: default_t_max(),
            seeds: default_seeds(),
            mu: None,
            window: None,
            initial_p: None,
            ce_eps: default_learn_eps(),
        }
    }
}

impl LearningSpec {
    pub fn config_for(&self, seed: u64) -> LearningConfig {
        let mut c = LearningConfig::new(self.t_max, seed);
        c.mu = self.mu;
        if let Some(w) = self.window {
            c.window = w;
        }
        c.initial_p = self.initial_p.clone();
        c.ce_eps = self.ce_eps;
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParameter {
    /// Both cross gains together, `b = d`.
    #[serde(rename = "bd")]
    Symmetric,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "d")]
    D,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default = "default_sweep_param")]
    pub parameter: SweepParameter,
    #[serde(default = "default_db_start")]
    pub db_start: f64,
    #[serde(default = "default_db_end")]
    pub db_end: f64,
    #[serde(default = "default_steps")]
    pub steps: usize,
}

fn default_sweep_param() -> SweepParameter {
    SweepParameter::Symmetric
}

fn default_db_start() -> f64 {
    -20.0
}

fn default_db_end() -> f64 {
    20.0
}

fn default_steps() -> usize {
    41
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            parameter: default_sweep_param(),
            db_start: default_db_start(),
            db_end: default_db_end(),
            steps: default_steps(),
        }
    }
}

impl SweepSpec {
    pub fn db_values(&self) -> Result<Vec<f64>> {
        if self.steps == 0 || !(self.db_start.is_finite() && self.db_end.is_finite()) {
            return Err(Error::Config("sweep needs finite bounds and at least one step".into()));
        }
        if self.steps == 1 {
            return Ok(vec![self.db_start]);
        }
        let span = self.db_end - self.db_start;
        Ok((0..self.steps).map(|k| self.db_start + span * k as f64 / (self.steps - 1) as f64).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default = "default_frontier_grid")]
    pub frontier: usize,
    #[serde(default = "default_area_grid")]
    pub area: usize,
}

fn default_frontier_grid() -> usize {
    DEFAULT_FRONTIER_GRID
}

fn default_area_grid() -> usize {
    DEFAULT_AREA_GRID
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { frontier: DEFAULT_FRONTIER_GRID, area: DEFAULT_AREA_GRID }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_mechanism")]
    pub mechanism: Mechanism,
    pub channel: Option<ChannelSpec>,
    #[serde(default)]
    pub learning: LearningSpec,
    #[serde(default)]
    pub sweep: SweepSpec,
    #[serde(default)]
    pub grid: GridSpec,
    /// Tolerance for `ce-check`.
    #[serde(default = "default_ce_eps")]
    pub ce_eps: f64,
    /// Pmf file for `ce-check`, relative to the working directory.
    pub pmf_file: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
}

fn default_mechanism() -> Mechanism {
    Mechanism::Vcg
}

fn default_ce_eps() -> f64 {
    DEFAULT_CE_EPS
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Config for a two-user channel with `p_max = 1` and defaults elsewhere.
    pub fn two_user(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self {
            mechanism: Mechanism::Vcg,
            channel: Some(ChannelSpec { p_max: 1.0, abcd: Some([a, b, c, d]), gains: None }),
            learning: LearningSpec::default(),
            sweep: SweepSpec::default(),
            grid: GridSpec::default(),
            ce_eps: DEFAULT_CE_EPS,
            pmf_file: None,
            out_dir: None,
        }
    }

    pub fn gains(&self) -> Result<ChannelGains> {
        self.channel.as_ref().ok_or_else(|| Error::Config("missing [channel] section".into()))?.build()
    }
}

/// Power ratio in dB to linear.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

fn create(out: &Path, name: &str) -> Result<BufWriter<File>> {
    fs::create_dir_all(out)?;
    Ok(BufWriter::new(File::create(out.join(name))?))
}

fn write_json<T: Serialize>(out: &Path, name: &str, value: &T) -> Result<()> {
    let mut w = create(out, name)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    std::io::Write::write_all(&mut w, b"\n")?;
    Ok(())
}

fn num(v: f64) -> String {
    v.to_string()
}

fn bit_columns(prefix: &str, n: usize) -> impl Iterator<Item = String> + '_ {
    (1..=n).map(move |i| format!("{prefix}{i}"))
}

/// `corners.csv`: `index, b1..bn, r1..rn`.
pub fn cmd_corners(config: &ExperimentConfig, out: &Path) -> Result<CornerSet> {
    let corners = enumerate_corners(&config.gains()?)?;
    let n = corners.users();
    let mut w = csv::Writer::from_writer(create(out, "corners.csv")?);
    let mut header = vec!["index".to_string()];
    header.extend(bit_columns("b", n));
    header.extend(bit_columns("r", n));
    w.write_record(&header)?;
    for (profile, rate) in corners.iter() {
        let mut row = vec![profile.index().to_string()];
        row.extend(profile.bits().iter().map(|&b| u8::from(b).to_string()));
        row.extend(rate.iter().copied().map(num));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(corners)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierCurvature {
    /// User 1 pinned at full power, user 0 sweeping (A to B).
    pub ab: Curvature,
    /// User 0 pinned at full power, user 1 sweeping (C to B).
    pub bc: Curvature,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionReport {
    pub users: usize,
    pub curvature: Option<FrontierCurvature>,
    pub hull: Hull,
    /// Whether the all-on corner is a hull vertex.
    pub all_on_on_hull: bool,
}

fn write_frontier(out: &Path, name: &str, sample: &FrontierSample) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(out, name)?);
    w.write_record(["k", "p1", "p2", "r1", "r2"])?;
    for (k, (p, r)) in sample.points.iter().enumerate() {
        let p = p.as_slice();
        w.write_record([k.to_string(), num(p[0]), num(p[1]), num(r[0]), num(r[1])])?;
    }
    w.flush()?;
    Ok(())
}

/// Two users: `frontier_ab.csv`, `frontier_bc.csv` (`k, p1, p2, r1, r2`)
/// and `region.json`. Three users: `region.json` with hull facets only.
pub fn cmd_region(config: &ExperimentConfig, out: &Path) -> Result<RegionReport> {
    let gains = config.gains()?;
    let users = gains.users();
    if users > 3 {
        return Err(Error::UnsupportedDimension { op: "region", users });
    }
    let corners = enumerate_corners(&gains)?;
    let hull = corners.hull()?;
    let all_on = (1 << users) - 1;
    let curvature = if users == 2 {
        let ab = sample_frontier(&gains, 1, config.grid.frontier)?;
        let bc = sample_frontier(&gains, 0, config.grid.frontier)?;
        write_frontier(out, "frontier_ab.csv", &ab)?;
        write_frontier(out, "frontier_bc.csv", &bc)?;
        Some(FrontierCurvature { ab: classify_frontier(&ab)?, bc: classify_frontier(&bc)? })
    } else {
        None
    };
    let report =
        RegionReport { users, curvature, all_on_on_hull: hull.contains_vertex(HullVertex::Point(all_on)), hull };
    write_json(out, "region.json", &report)?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub db: f64,
    pub area_pc: f64,
    pub area_b: f64,
    pub area_ac: f64,
    pub gain_pct: f64,
}

fn sweep_gains(config: &ExperimentConfig, linear: f64) -> Result<ChannelGains> {
    let base = match &config.channel {
        Some(spec) => Some(spec.build()?.require_two_users("area sweep")?),
        None => None,
    };
    let p_max = config.channel.as_ref().map_or(1.0, |c| c.p_max);
    match (config.sweep.parameter, base) {
        (SweepParameter::Symmetric, Some((a, _, c, _))) => ChannelGains::two_user(a, linear, c, linear, p_max),
        (SweepParameter::Symmetric, None) => ChannelGains::symmetric(1.0, linear, p_max),
        (SweepParameter::B, Some((a, _, c, d))) => ChannelGains::two_user(a, linear, c, d, p_max),
        (SweepParameter::D, Some((a, b, c, _))) => ChannelGains::two_user(a, b, c, linear, p_max),
        (_, None) => Err(Error::Config("sweeping b or d alone needs an explicit [channel]".into())),
    }
}

/// `area_sweep.csv`: `db, area_pc, area_b, area_ac, gain_pct`, one row per
/// swept cross gain (in dB).
pub fn cmd_area_sweep(config: &ExperimentConfig, out: &Path) -> Result<Vec<SweepRow>> {
    let grid = config.grid.area;
    let rows = config
        .sweep
        .db_values()?
        .into_par_iter()
        .map(|db| {
            let gains = sweep_gains(config, db_to_linear(db))?;
            let area_pc = area_power_control(&gains, grid)?;
            let area_b = area_timeshare_via_b(&gains)?;
            if area_pc <= 0.0 {
                return Err(Error::Degenerate("power-control area is zero".into()));
            }
            Ok(SweepRow {
                db,
                area_pc,
                area_b,
                area_ac: area_timeshare_ac(&gains)?,
                gain_pct: 100.0 * (area_b - area_pc) / area_pc,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut w = csv::Writer::from_writer(create(out, "area_sweep.csv")?);
    w.write_record(["db", "area_pc", "area_b", "area_ac", "gain_pct"])?;
    for r in &rows {
        w.write_record([num(r.db), num(r.area_pc), num(r.area_b), num(r.area_ac), num(r.gain_pct)])?;
    }
    w.flush()?;
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedSummary {
    pub seed: u64,
    pub theta: Vec<f64>,
    pub silence_mass: f64,
    pub ce_holds: bool,
    pub ce_residual: f64,
    pub avg_regret: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnSummary {
    pub mechanism: Mechanism,
    pub t_max: usize,
    pub window: usize,
    pub mu: f64,
    pub seeds: Vec<u64>,
    /// Mean over seeds of the empirical mass on each nontrivial profile.
    pub theta: Vec<f64>,
    pub theta_std: Vec<f64>,
    /// Worst (smallest) equilibrium residual over seeds.
    pub ce_residual: f64,
    /// Per user, the largest final average regret over seeds.
    pub avg_regret: Vec<f64>,
    pub nash_profiles: Vec<usize>,
    pub per_seed: Vec<SeedSummary>,
}

fn mean_std(columns: &[Vec<f64>], len: usize) -> (Vec<f64>, Vec<f64>) {
    let count = columns.len().max(1) as f64;
    let mut mean = vec![0.0; len];
    for col in columns {
        mean.iter_mut().zip(col).for_each(|(m, v)| *m += v);
    }
    mean.iter_mut().for_each(|m| *m /= count);
    let mut var = vec![0.0; len];
    for col in columns {
        var.iter_mut().zip(col.iter().zip(&mean)).for_each(|(s, (v, m))| *s += (v - m).powi(2));
    }
    (mean, var.into_iter().map(|v| (v / count).sqrt()).collect())
}

/// Summarize per-seed runs of one game.
pub fn summarize_runs(table: &UtilityTable, spec: &LearningSpec, runs: &[(u64, LearningRun)]) -> LearnSummary {
    let users = table.users();
    let per_seed: Vec<SeedSummary> = runs
        .iter()
        .map(|(seed, r)| SeedSummary {
            seed: *seed,
            theta: r.theta(),
            silence_mass: r.silence_mass(),
            ce_holds: r.ce.holds(),
            ce_residual: r.ce.residual(),
            avg_regret: r.max_average_regret(),
        })
        .collect();
    let len = (1 << users) - 1;
    let thetas: Vec<Vec<f64>> = per_seed.iter().map(|s| s.theta.clone()).collect();
    let (theta, theta_std) = mean_std(&thetas, len);
    let avg_regret = (0..users).map(|i| per_seed.iter().map(|s| s.avg_regret[i]).fold(0.0, f64::max)).collect();
    let window = spec.config_for(0).window;
    LearnSummary {
        mechanism: table.mechanism(),
        t_max: spec.t_max,
        window: if window == 0 { spec.t_max } else { window },
        mu: runs.first().map_or(0.0, |(_, r)| r.mu),
        seeds: runs.iter().map(|(s, _)| *s).collect(),
        theta,
        theta_std,
        ce_residual: per_seed.iter().map(|s| s.ce_residual).fold(f64::INFINITY, f64::min),
        avg_regret,
        nash_profiles: pure_nash(table).into_iter().map(|p| p.index()).collect(),
        per_seed,
    }
}

/// Run every configured seed in parallel, without writing artifacts.
pub fn learn_runs(table: &UtilityTable, spec: &LearningSpec) -> Result<Vec<(u64, LearningRun)>> {
    if spec.seeds.is_empty() {
        return Err(Error::Config("learning.seeds must not be empty".into()));
    }
    spec.seeds.par_iter().map(|&seed| run_on_table(table, &spec.config_for(seed)).map(|r| (seed, r))).collect()
}

/// `trajectory_seed<S>.csv` per seed (see [`Trajectory::write_csv`]) and
/// `learn_summary.json`.
///
/// [`Trajectory::write_csv`]: crate::learning::Trajectory::write_csv
pub fn cmd_learn(config: &ExperimentConfig, out: &Path) -> Result<LearnSummary> {
    let table = build_utility_table(&config.gains()?, config.mechanism)?;
    let runs = learn_runs(&table, &config.learning)?;
    runs.par_iter()
        .try_for_each(|(seed, r)| r.trajectory.write_csv(create(out, &format!("trajectory_seed{seed}.csv"))?))?;
    let summary = summarize_runs(&table, &config.learning, &runs);
    write_json(out, "learn_summary.json", &summary)?;
    Ok(summary)
}

/// Parse a pmf: numbers separated by whitespace or commas, `#` comments.
pub fn parse_pmf(text: &str) -> Result<JointDistribution> {
    let values = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split(|c: char| c == ',' || c.is_whitespace()))
        .filter(|tok| !tok.is_empty())
        .map(|tok| tok.parse::<f64>().map_err(|_| Error::Config(format!("malformed pmf entry {tok:?}"))))
        .collect::<Result<Vec<_>>>()?;
    JointDistribution::new(values)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CeReport {
    pub mechanism: Mechanism,
    pub pmf: Vec<f64>,
    pub eps: f64,
    #[serde(flatten)]
    pub verdict: CeVerdict,
}

/// `ce_check.json` with the verdict and, when violated, the witness.
pub fn cmd_ce_check(config: &ExperimentConfig, pmf_path: &Path, out: &Path) -> Result<CeReport> {
    let text = fs::read_to_string(pmf_path).map_err(|e| Error::Config(format!("{}: {e}", pmf_path.display())))?;
    let pmf = parse_pmf(&text)?;
    let table = build_utility_table(&config.gains()?, config.mechanism)?;
    if pmf.users() != table.users() {
        return Err(Error::invalid(format!("pmf covers {} users, channel has {}", pmf.users(), table.users())));
    }
    let verdict = is_correlated_equilibrium(&table, &pmf, config.ce_eps);
    let report = CeReport { mechanism: config.mechanism, pmf: pmf.as_slice().to_vec(), eps: config.ce_eps, verdict };
    write_json(out, "ce_check.json", &report)?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub mechanism: Mechanism,
    pub users: usize,
    pub rows: Vec<UtilityRow>,
    pub nash_profiles: Vec<usize>,
}

/// `utility_table.csv` (`index, b1..bn, u1..un`) and `utility_table.json`
/// with the pure Nash profiles.
pub fn cmd_vcg_table(config: &ExperimentConfig, out: &Path) -> Result<TableReport> {
    let table = build_utility_table(&config.gains()?, config.mechanism)?;
    let n = table.users();
    let mut w = csv::Writer::from_writer(create(out, "utility_table.csv")?);
    let mut header = vec!["index".to_string()];
    header.extend(bit_columns("b", n));
    header.extend(bit_columns("u", n));
    w.write_record(&header)?;
    for p in table.profiles() {
        let mut row = vec![p.index().to_string()];
        row.extend(p.bits().iter().map(|&b| u8::from(b).to_string()));
        row.extend(table.utilities(p).iter().copied().map(num));
        w.write_record(&row)?;
    }
    w.flush()?;
    let report = TableReport {
        mechanism: table.mechanism(),
        users: n,
        rows: table.rows(),
        nash_profiles: pure_nash(&table).into_iter().map(|p| p.index()).collect(),
    };
    write_json(out, "utility_table.json", &report)?;
    Ok(report)
}
