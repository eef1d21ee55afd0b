//! Every JSON file the commands emit must validate against the schema
//! shipped under docs/schemas.

use std::path::{Path, PathBuf};

use serde_json::Value;
use vestige::commands::{self, Experiment, FitSource, RunOptions};

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../docs/schemas")
        .join(format!("{name}.schema.json"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn check(file: &Path, schema_name: &str) {
    let v: Value = serde_json::from_str(&std::fs::read_to_string(file).unwrap()).unwrap();
    let errors: Vec<String> = schema(schema_name).iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{} vs {schema_name}: {errors:?}", file.display());
}

fn opts(dir: PathBuf) -> RunOptions {
    RunOptions {
        seed: 11,
        chains: Some(2),
        iterations: Some(2_000),
        out_dir: dir,
    }
}

fn find<'a>(files: &'a [PathBuf], name: &str) -> &'a Path {
    files.iter().find(|f| f.ends_with(name)).unwrap()
}

#[test]
fn fit_and_dic_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let src = FitSource::Preset {
        name: "peccary".into(),
        dataset: None,
    };
    let out = commands::fit(&src, None, &opts(tmp.path().join("fit"))).unwrap();
    check(find(&out.files, "fit.json"), "fit_result");
    let poisson = commands::fit(
        &src,
        Some(vestige::model::Family::Poisson),
        &opts(tmp.path().join("fit_p")),
    )
    .unwrap();
    check(find(&poisson.files, "fit.json"), "fit_result");
    let (_, files) = commands::compare_dic(&src, &opts(tmp.path().join("dic"))).unwrap();
    check(find(&files, "dic.json"), "dic_comparison");
}

#[test]
fn simulation_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let tp = tmp.path().join("tp.toml");
    std::fs::write(
        &tp,
        "lambda_g = 10.0\nlambda_n = 5.0\nalpha = 20.0\ncoverage = [0.01, 0.02]\nfamily = \"negbin\"\nphi = 0.2\n",
    )
    .unwrap();
    let (_, files) = commands::simulate_tp(&tp, &opts(tmp.path().join("tp"))).unwrap();
    check(find(&files, "truth.json"), "tp_truth");

    let design = tmp.path().join("design.toml");
    std::fs::write(
        &design,
        toml::to_string(&vestige::survey::SurveyDesign::default()).unwrap(),
    )
    .unwrap();
    let files = commands::simulate_survey_cmd(&design, &opts(tmp.path().join("sv"))).unwrap();
    check(find(&files, "survey.json"), "survey_simulation");
    let counts = vestige::io::load_dataset(find(&files, "counts.csv")).unwrap();
    assert_eq!(counts.n_sites(), 2);
}

#[test]
fn experiment_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let o = RunOptions {
        iterations: Some(1_000),
        ..opts(tmp.path().join("exp"))
    };
    let (results, files) = commands::experiment(Experiment::AlphaStudy, 0.1, &o).unwrap();
    assert_eq!(results.len(), 3);
    check(find(&files, "alpha-study.json"), "scenario_results");
}
