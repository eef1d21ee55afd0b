//! Command implementations behind the `vestige` binary. Each writes into an
//! [`OutputDir`] and commits only on success.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::{
    run_alpha_study, run_appendix_grid, run_table1, write_scenarios_csv, AlphaStudyOptions, GridOptions,
    ScenarioResult, Table1Options,
};
use crate::inference::{param, run_mcmc, FitResult, McmcSettings};
use crate::io::{find_preset, load_config, load_dataset, write_dataset_to, OutputDir};
use crate::model::{Family, ModelConfig, SurveyDataset};
use crate::rng::stream_rng;
use crate::survey::{simulate_survey, simulate_tp_data, SurveyDesign};

/// Overrides shared by every command.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: u64,
    pub chains: Option<usize>,
    pub iterations: Option<usize>,
    pub out_dir: PathBuf,
}

impl RunOptions {
    /// Applies seed, chain and iteration overrides. A shortened run keeps
    /// burn-in at a quarter of the iterations if the old one no longer fits.
    pub fn apply(&self, mut s: McmcSettings) -> McmcSettings {
        s.seed = self.seed;
        if let Some(c) = self.chains {
            s.n_chains = c;
        }
        if let Some(n) = self.iterations {
            s.n_iterations = n;
            if s.burn_in >= n {
                s.burn_in = n / 4;
            }
        }
        s
    }
}

/// Where a fit's data and model come from.
#[derive(Debug, Clone)]
pub enum FitSource {
    Files { dataset: PathBuf, config: PathBuf },
    Preset { name: String, dataset: Option<PathBuf> },
}

fn resolve(source: &FitSource, family: Option<Family>) -> Result<(SurveyDataset, ModelConfig, McmcSettings)> {
    match source {
        FitSource::Files { dataset, config } => {
            let cfg = load_config(config)?;
            let mut model = cfg.model.to_model_config()?;
            if let Some(f) = family {
                model = model.with_family(f, None);
            }
            Ok((load_dataset(dataset)?, model, cfg.mcmc))
        }
        FitSource::Preset { name, dataset } => {
            let preset = find_preset(name)?;
            Ok((
                preset.dataset(dataset.as_deref())?,
                preset.model_config(family)?,
                McmcSettings::default(),
            ))
        }
    }
}

const SUMMARY_PARAMS: [&str; 6] = [
    param::T,
    param::G,
    param::LAMBDA_G,
    param::LAMBDA_N,
    param::ALPHA,
    param::PHI,
];

pub const SUMMARY_CSV_HEADER: [&str; 8] = ["parameter", "mean", "sd", "q2_5", "median", "q97_5", "ess", "rhat"];

fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| v.to_string())
}

pub fn write_summary_csv<W: Write>(out: W, fit: &FitResult) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_CSV_HEADER)?;
    for name in SUMMARY_PARAMS {
        if let Some(s) = fit.summary(name) {
            w.write_record([
                name.to_string(),
                s.mean.to_string(),
                s.sd.to_string(),
                s.q2_5.to_string(),
                s.median.to_string(),
                s.q97_5.to_string(),
                opt(s.ess),
                opt(s.rhat),
            ])?;
        }
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

/// Human-readable posterior table.
pub fn format_summary(fit: &FitResult) -> String {
    let mut s = format!(
        "{:<10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>8} {:>7}\n",
        "param", "mean", "sd", "2.5%", "median", "97.5%", "ess", "rhat"
    );
    for name in SUMMARY_PARAMS {
        if let Some(p) = fit.summary(name) {
            s += &format!(
                "{:<10} {:>10.3} {:>10.3} {:>10.3} {:>10.3} {:>10.3} {:>8} {:>7}\n",
                name,
                p.mean,
                p.sd,
                p.q2_5,
                p.median,
                p.q97_5,
                p.ess.map_or("-".into(), |e| format!("{e:.0}")),
                p.rhat.map_or("-".into(), |r| format!("{r:.3}")),
            );
        }
    }
    s += &format!("DIC {:.3} (Dbar {:.3}, pD {:.3})\n", fit.dic, fit.dbar, fit.p_d);
    s
}

pub struct FitOutput {
    pub fit: FitResult,
    pub files: Vec<PathBuf>,
}

/// Writes `fit.json` and `summary.csv`.
pub fn fit(source: &FitSource, family: Option<Family>, opts: &RunOptions) -> Result<FitOutput> {
    let (data, model, settings) = resolve(source, family)?;
    let fit = run_mcmc(&data, &model, &opts.apply(settings))?;
    let mut out = OutputDir::create(&opts.out_dir)?;
    out.write_json("fit.json", &fit)?;
    out.write_with("summary.csv", |b| write_summary_csv(b, &fit))?;
    Ok(FitOutput {
        fit,
        files: out.commit(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DicComparison {
    pub poisson: f64,
    pub negbin: f64,
    pub winner: Family,
}

/// Fits both families to the same data with the same seed.
pub fn compare_dic(source: &FitSource, opts: &RunOptions) -> Result<(DicComparison, Vec<PathBuf>)> {
    let (data, model, settings) = resolve(source, None)?;
    let settings = opts.apply(settings);
    let poisson = run_mcmc(&data, &model.with_family(Family::Poisson, None), &settings)?;
    let negbin = run_mcmc(&data, &model.with_family(Family::NegativeBinomial, None), &settings)?;
    let cmp = DicComparison {
        poisson: poisson.dic,
        negbin: negbin.dic,
        winner: if negbin.dic < poisson.dic {
            Family::NegativeBinomial
        } else {
            Family::Poisson
        },
    };
    let mut out = OutputDir::create(&opts.out_dir)?;
    out.write_json("dic.json", &cmp)?;
    Ok((cmp, out.commit()))
}

/// Parameters of a triple Poisson simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TpParams {
    pub lambda_g: f64,
    pub lambda_n: f64,
    pub alpha: f64,
    pub coverage: Vec<f64>,
    #[serde(default = "one")]
    pub n_replicates: usize,
    #[serde(default = "poisson")]
    pub family: Family,
    #[serde(default)]
    pub phi: Option<f64>,
}

fn one() -> usize {
    1
}

fn poisson() -> Family {
    Family::Poisson
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TpTruth {
    pub seed: u64,
    pub groups: u64,
    pub total: u64,
    pub params: TpParams,
}

fn read_toml<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {}", path.display(), e.to_string().trim_end())))
}

/// Writes `dataset.csv` and `truth.json`.
pub fn simulate_tp(params_path: &Path, opts: &RunOptions) -> Result<(TpTruth, Vec<PathBuf>)> {
    let params: TpParams = read_toml(params_path)?;
    let mut rng = stream_rng(opts.seed, 0);
    let sim = simulate_tp_data(
        params.lambda_g,
        params.lambda_n,
        params.alpha,
        &params.coverage,
        params.n_replicates,
        params.family,
        params.phi,
        &mut rng,
    )?;
    let truth = TpTruth {
        seed: opts.seed,
        groups: sim.groups,
        total: sim.total,
        params,
    };
    let mut out = OutputDir::create(&opts.out_dir)?;
    out.write_with("dataset.csv", |b| write_dataset_to(b, &sim.data))?;
    out.write_json("truth.json", &truth)?;
    Ok((truth, out.commit()))
}

pub const DISTANCE_CSV_HEADER: [&str; 3] = ["transect", "transect_length_m", "distance_m"];

/// Writes `distances.csv`, `counts.csv` (dataset format) and `survey.json`.
pub fn simulate_survey_cmd(design_path: &Path, opts: &RunOptions) -> Result<Vec<PathBuf>> {
    let design: SurveyDesign = read_toml(design_path)?;
    let sim = simulate_survey(&design, &mut stream_rng(opts.seed, 0))?;
    let data = sim.to_dataset()?;
    let mut out = OutputDir::create(&opts.out_dir)?;
    out.write_with("distances.csv", |b| {
        let mut w = csv::Writer::from_writer(b);
        w.write_record(DISTANCE_CSV_HEADER)?;
        for (i, (len, ds)) in sim.distances.transect_lengths_m.iter().zip(&sim.distances.distances_m).enumerate() {
            for d in ds {
                w.write_record([(i + 1).to_string(), len.to_string(), d.to_string()])?;
            }
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    })?;
    out.write_with("counts.csv", |b| write_dataset_to(b, &data))?;
    out.write_json("survey.json", &sim)?;
    Ok(out.commit())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Table1,
    AlphaStudy,
    AppendixGrid,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Table1 => "table1",
            Experiment::AlphaStudy => "alpha-study",
            Experiment::AppendixGrid => "appendix-grid",
        }
    }
}

/// Simulations at full scale for the table and the α study.
pub const BASE_SIMULATIONS: usize = 50;

fn scaled(scale: f64) -> Result<usize> {
    if !(scale > 0.0 && scale <= 1.0) {
        return Err(Error::Config(format!("scale must lie in (0, 1], got {scale}")));
    }
    Ok(((BASE_SIMULATIONS as f64 * scale).round() as usize).max(1))
}

/// Writes `<name>.csv` and `<name>.json`.
pub fn experiment(which: Experiment, scale: f64, opts: &RunOptions) -> Result<(Vec<ScenarioResult>, Vec<PathBuf>)> {
    let settings = opts.apply(McmcSettings::experiment());
    let results = match which {
        Experiment::Table1 => run_table1(scaled(scale)?, &settings, &Table1Options::default())?
            .all()
            .cloned()
            .collect(),
        Experiment::AlphaStudy => {
            let opts = AlphaStudyOptions {
                n_simulations: scaled(scale)?,
                ..AlphaStudyOptions::default()
            };
            run_alpha_study(&settings, &opts)?.all().into_iter().cloned().collect()
        }
        Experiment::AppendixGrid => run_appendix_grid(scale, &settings, &GridOptions::default())?,
    };
    let mut out = OutputDir::create(&opts.out_dir)?;
    out.write_with(&format!("{}.csv", which.name()), |b| write_scenarios_csv(b, &results))?;
    out.write_json(&format!("{}.json", which.name()), &results)?;
    Ok((results, out.commit()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(out: &Path, seed: u64) -> RunOptions {
        RunOptions {
            seed,
            chains: Some(2),
            iterations: Some(2_000),
            out_dir: out.to_path_buf(),
        }
    }

    #[test]
    fn preset_fit_is_deterministic() {
        let tmp = tempfile::tempdir().unwrap();
        let src = FitSource::Preset {
            name: "peccary".into(),
            dataset: None,
        };
        let a = fit(&src, None, &quick(&tmp.path().join("a"), 5)).unwrap();
        let b = fit(&src, None, &quick(&tmp.path().join("b"), 5)).unwrap();
        for (x, y) in a.files.iter().zip(&b.files) {
            assert_eq!(std::fs::read(x).unwrap(), std::fs::read(y).unwrap());
        }
        assert!(format_summary(&a.fit).contains("DIC"));
    }

    #[test]
    fn failed_fit_leaves_nothing() {
        let tmp = tempfile::tempdir().unwrap();
        let out = tmp.path().join("out");
        let src = FitSource::Preset {
            name: "sika-a".into(),
            dataset: None,
        };
        let err = fit(&src, None, &quick(&out, 1)).err().unwrap();
        assert_eq!(err.exit_code(), 2);
        assert!(!out.exists());
    }

    #[test]
    fn iteration_override_keeps_burn_in_valid() {
        let o = RunOptions {
            iterations: Some(100),
            ..RunOptions::default()
        };
        let s = o.apply(McmcSettings::default());
        assert_eq!(s.burn_in, 25);
        s.validate().unwrap();
    }

    #[test]
    fn simulate_tp_outputs() {
        let tmp = tempfile::tempdir().unwrap();
        let p = tmp.path().join("p.toml");
        std::fs::write(&p, "lambda_g = 10.0\nlambda_n = 5.0\nalpha = 20.0\ncoverage = [0.01, 0.02]\nn_replicates = 3\n").unwrap();
        let (truth, files) = simulate_tp(&p, &quick(&tmp.path().join("o"), 3)).unwrap();
        let data = load_dataset(&files[0]).unwrap();
        assert_eq!((data.n_sites(), data.n_replicates()), (2, 3));
        assert!(truth.total > 0);
        std::fs::write(&p, "lambda_g = 10.0\nlambda_n = 5.0\nalpha = 20.0\ncoverage = [0.01]\nbogus = 1\n").unwrap();
        assert_eq!(simulate_tp(&p, &quick(&tmp.path().join("x"), 3)).unwrap_err().exit_code(), 1);
    }
}
