//! Acceptance criteria. Each test prints one PASS/FAIL line.

use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::Instant;

use vestige::experiments::{
    run_alpha_study, run_appendix_grid, run_table1, AlphaStudyOptions, GridOptions, ScenarioResult,
    Table1Options, Table1Result,
};
use vestige::inference::{
    enumerate_posterior, gibbs_update_alpha, gibbs_update_lambda_g, gibbs_update_lambda_n, param,
    run_mcmc, McmcSettings,
};
use vestige::io::find_preset;
use vestige::model::{
    accumulate_vestiges, steady_state_alpha, DecayParams, Family, LatentState, ModelConfig,
    PriorSpec, SurveyDataset,
};
use vestige::rng::{derive_seed, stream_rng};
use vestige::survey::simulate_tp_data;

fn report(n: u32, pass: bool, detail: &str) {
    println!(
        "criterion {n:>2} [PRIMARY] {}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {n} failed: {detail}");
}

struct Table1Run {
    result: Table1Result,
    seconds: f64,
}

fn table1() -> &'static Table1Run {
    static RUN: OnceLock<Table1Run> = OnceLock::new();
    RUN.get_or_init(|| {
        let start = Instant::now();
        let settings = McmcSettings::experiment().with_seed(20_240_601);
        let result = run_table1(50, &settings, &Table1Options::default()).expect("table 1 run");
        let seconds = start.elapsed().as_secs_f64();
        for r in result.all() {
            println!(
                "    {:<4} mean relative bias {:+.3} (CI bias {:+.3}, {:+.3}; coverage {:.2}; failed {})",
                r.label, r.mean_relative_bias, r.rel_bias_ci_lower, r.rel_bias_ci_upper, r.coverage_rate, r.n_failed
            );
        }
        Table1Run { result, seconds }
    })
}

fn bias(t: &Table1Result, label: &str) -> f64 {
    t.get(label).unwrap().mean_relative_bias
}

#[test]
fn criterion_01_ds1_unbiased() {
    let run = table1();
    let ds1 = bias(&run.result, "DS1");
    report(
        1,
        ds1.abs() <= 0.05 && run.seconds < 300.0,
        &format!(
            "|DS1 bias| = {:.4} <= 0.05 over 50 surveys; whole table {:.0} s",
            ds1.abs(),
            run.seconds
        ),
    );
}

#[test]
fn criterion_02_ds_misspecification_trend() {
    let t = &table1().result;
    let published = [("DS3", 0.062), ("DS4", 0.147), ("DS5", 0.265), ("DS6", 0.359), ("DS7", 0.436)];
    // the published column holds bias magnitudes |(N̂ − N)/N|
    let within = published.iter().all(|(l, p)| (bias(t, l).abs() - p).abs() <= 0.10);
    let mags: Vec<f64> = ["DS4", "DS5", "DS6", "DS7"].iter().map(|l| bias(t, l).abs()).collect();
    let increasing = mags.windows(2).all(|w| w[1] > w[0]);
    let detail = published
        .iter()
        .map(|(l, p)| format!("{l} {:.3} (published {p})", bias(t, l).abs()))
        .collect::<Vec<_>>()
        .join(", ");
    report(2, within && increasing, &format!("{detail}; increasing DS4→DS7: {increasing}"));
}

#[test]
fn criterion_03_tp_rows() {
    let t = &table1().result;
    let tp: Vec<(String, f64)> = t.tp.iter().map(|r| (r.label.clone(), r.mean_relative_bias)).collect();
    let ok = tp.iter().all(|(_, b)| b.abs() <= 0.35);
    let detail = tp.iter().map(|(l, b)| format!("{l} {b:+.3}")).collect::<Vec<_>>().join(", ");
    report(3, ok, &format!("|bias| <= 0.35 required: {detail}"));
}

#[test]
fn criterion_04_alpha_knowledge() {
    let settings = McmcSettings::experiment().with_seed(35_086);
    let r = run_alpha_study(&settings, &AlphaStudyOptions::default()).expect("alpha study");
    for s in r.all() {
        println!(
            "    {:<14} bias {:+.3} coverage {:.2} mean width {:.1}",
            s.label, s.mean_relative_bias, s.coverage_rate, s.mean_interval_width
        );
    }
    let narrow = r.fixed_correct.mean_interval_width < 0.5 * r.uniform.mean_interval_width;
    let covers = r.fixed_correct.coverage_rate >= 0.80;
    let misses = 1.0 - r.fixed_wrong.coverage_rate >= 0.60;
    report(
        4,
        narrow && covers && misses,
        &format!(
            "(i) width fixed {:.1} vs uniform {:.1}; (ii) fixed-correct coverage {:.2}; (iii) fixed-wrong miss rate {:.2}",
            r.fixed_correct.mean_interval_width,
            r.uniform.mean_interval_width,
            r.fixed_correct.coverage_rate,
            1.0 - r.fixed_wrong.coverage_rate
        ),
    );
}

#[test]
fn criterion_05_peccary() {
    let preset = find_preset("peccary").unwrap();
    let data = preset.dataset(None).unwrap();
    let config = preset.model_config(Some(Family::NegativeBinomial)).unwrap();
    let fit = run_mcmc(&data, &config, &McmcSettings::default().with_seed(44)).unwrap();
    let t = fit.total();
    let ok = (30.0..=60.0).contains(&t.mean) && t.q2_5 <= 44.0 && 44.0 <= t.q97_5;
    report(
        5,
        ok,
        &format!(
            "T mean {:.1} in [30, 60], 95% CrI ({:.0}, {:.0}) contains 44 (published 44, (16, 87))",
            t.mean, t.q2_5, t.q97_5
        ),
    );
}

#[test]
fn criterion_06_enumeration_oracle() {
    let start = Instant::now();
    let data = SurveyDataset::from_counts(&[0.5], vec![vec![6, 9]]).unwrap();
    let config = ModelConfig::poisson(PriorSpec::fixed(3.0), PriorSpec::fixed(4.0), PriorSpec::fixed(2.0));
    let exact = enumerate_posterior(&data, &config, 30, 150).unwrap().marginal_total();
    let settings = McmcSettings {
        n_chains: 4,
        n_iterations: 20_000,
        burn_in: 2_000,
        seed: 6,
        ..McmcSettings::default()
    };
    let fit = run_mcmc(&data, &config, &settings).unwrap();
    let draws: Vec<f64> = fit.chains[param::T].iter().flatten().copied().collect();
    let mut freq = vec![0.0; exact.len()];
    let mut outside = 0.0;
    for &t in &draws {
        match freq.get_mut(t as usize) {
            Some(f) => *f += 1.0,
            None => outside += 1.0,
        }
    }
    let n = draws.len() as f64;
    let tv = 0.5 * (freq.iter().zip(&exact).map(|(f, p)| (f / n - p).abs()).sum::<f64>() + outside / n);
    let secs = start.elapsed().as_secs_f64();
    report(6, tv <= 0.05 && secs < 60.0, &format!("TV(MCMC, exact) = {tv:.4} <= 0.05 in {secs:.1} s"));
}

fn moments(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    (m, xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0))
}

#[test]
fn criterion_07_conjugacy() {
    const DRAWS: usize = 100_000;
    let data = SurveyDataset::from_counts(&[0.02, 0.05, 0.03], vec![vec![7, 4], vec![12, 15], vec![9, 5]]).unwrap();
    let config = ModelConfig::poisson(PriorSpec::gamma(2.0, 0.5), PriorSpec::gamma(3.0, 1.5), PriorSpec::gamma(1.5, 0.2));
    let state = LatentState {
        groups: 7,
        total: 40,
        lambda_g: 5.0,
        lambda_n: 6.0,
        alpha: 10.0,
        phi: None,
    };
    let sum_y = data.total_count() as f64;
    let sum_nu = data.total_coverage();
    // (name, analytic shape, analytic rate)
    let cases: [(&str, f64, f64); 3] = [
        ("lambda_G", 2.0 + 7.0, 0.5 + 1.0),
        ("lambda_N", 3.0 + 40.0, 1.5 + 7.0),
        ("alpha", 1.5 + sum_y, 0.2 + 40.0 * sum_nu),
    ];
    let mut rng = stream_rng(7, 0);
    let mut worst: f64 = 0.0;
    let mut detail = Vec::new();
    for (name, shape, rate) in cases {
        let xs: Vec<f64> = (0..DRAWS)
            .map(|_| match name {
                "lambda_G" => gibbs_update_lambda_g(&state, &config, &mut rng),
                "lambda_N" => gibbs_update_lambda_n(&state, &config, &mut rng),
                _ => gibbs_update_alpha(&state, &data, &config, &mut rng),
            })
            .map(Option::unwrap)
            .collect();
        let (m, v) = moments(&xs);
        let (em, ev) = (shape / rate, shape / rate / rate);
        let err = ((m - em) / em).abs().max(((v - ev) / ev).abs());
        worst = worst.max(err);
        detail.push(format!("{name} mean {m:.4}/{em:.4} var {v:.4}/{ev:.4}"));
    }
    report(7, worst <= 0.03, &format!("worst relative error {worst:.4} <= 0.03; {}", detail.join("; ")));
}

#[test]
fn criterion_08_steady_state() {
    const REPLICATES: usize = 10_000;
    const TOTAL: u64 = 10;
    let mut worst: f64 = 0.0;
    let mut detail = Vec::new();
    for (i, (beta, delta)) in [(1.0, 0.1), (15.0, 0.5), (8.0, 1.0)].into_iter().enumerate() {
        let decay = DecayParams::new(beta, delta).unwrap();
        let day = (10.0 / delta as f64).ceil() as usize;
        let mut rng = stream_rng(8, i as u64);
        let mean = (0..REPLICATES)
            .map(|_| accumulate_vestiges(&decay, TOTAL, day, &mut rng).unwrap()[day - 1] as f64)
            .sum::<f64>()
            / REPLICATES as f64;
        let expected = steady_state_alpha(&decay).unwrap() * TOTAL as f64;
        let err = ((mean - expected) / expected).abs();
        worst = worst.max(err);
        detail.push(format!("(β {beta}, δ {delta}) day {day}: {mean:.2} vs {expected:.2}"));
    }
    report(8, worst <= 0.02, &format!("worst relative error {worst:.4} <= 0.02; {}", detail.join("; ")));
}

#[test]
fn criterion_09_dic_prefers_negbin() {
    const PAIRS: usize = 20;
    let flat = PriorSpec::gamma(0.01, 0.01);
    let poisson = ModelConfig::poisson(flat, flat, PriorSpec::fixed(20.0));
    let negbin = poisson.with_family(Family::NegativeBinomial, Some(flat));
    let mut wins = 0;
    let mut gaps = Vec::new();
    for k in 0..PAIRS {
        let mut rng = stream_rng(9_002, k as u64);
        let sim = simulate_tp_data(10.0, 5.0, 20.0, &[0.01; 10], 1, Family::NegativeBinomial, Some(0.2), &mut rng)
            .unwrap();
        let settings = McmcSettings::experiment().with_seed(derive_seed(9_003, k as u64));
        let p = run_mcmc(&sim.data, &poisson, &settings).unwrap();
        let n = run_mcmc(&sim.data, &negbin, &settings).unwrap();
        if n.dic < p.dic {
            wins += 1;
        }
        gaps.push(p.dic - n.dic);
    }
    gaps.sort_by(f64::total_cmp);
    report(
        9,
        wins * 10 >= PAIRS * 9,
        &format!(
            "NB has lower DIC in {wins}/{PAIRS} fits (>= 18 required); median DIC gap {:.1}",
            gaps[PAIRS / 2]
        ),
    );
}

fn key(r: &ScenarioResult, drop: &[&str]) -> String {
    r.factors
        .iter()
        .filter(|(k, _)| !drop.contains(&k.as_str()))
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(",")
}

#[test]
fn criterion_10_appendix_grid() {
    let start = Instant::now();
    let settings = McmcSettings::experiment().with_seed(288);
    let cells = run_appendix_grid(0.1, &settings, &GridOptions::default()).expect("grid");
    let secs = start.elapsed().as_secs_f64();
    let dump = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("appendix_grid.json");
    if let Ok(file) = std::fs::File::create(&dump) {
        let _ = vestige::experiments::write_scenarios_json(file, &cells);
        println!("    per-cell results in {}", dump.display());
    }
    let f = |r: &ScenarioResult, k: &str| r.factors[k].clone();

    // (a) prior insensitivity under fixed, correct α, judged on the Poisson
    // family; negative binomial cells with few transects are known to be
    // prior sensitive and are reported for information only
    let mut groups: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for r in cells.iter().filter(|r| f(r, "alpha") == "fixed_correct") {
        groups.entry(key(r, &["prior"])).or_default().push(r.mean_relative_bias);
    }
    let spread = |g: &Vec<f64>| {
        g.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - g.iter().cloned().fold(f64::INFINITY, f64::min)
    };
    let (worst_key, worst) = groups
        .iter()
        .filter(|(k, _)| k.contains("family=poisson"))
        .map(|(k, g)| (k.clone(), spread(g)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    let worst_all = groups.values().map(spread).fold(0.0, f64::max);
    let a_ok = worst <= 0.15;

    // (b) informative-but-wrong priors hurt more at λ = 10 than at λ = 5
    let mean_abs = |lambda: &str| {
        let xs: Vec<f64> = cells
            .iter()
            .filter(|r| {
                f(r, "alpha") == "uniform"
                    && f(r, "prior") == "gamma3"
                    && f(r, "lambda_n") == lambda
                    && f(r, "lambda_g") == lambda
            })
            .map(|r| r.mean_relative_bias.abs())
            .collect();
        xs.iter().sum::<f64>() / xs.len() as f64
    };
    let (b10, b5) = (mean_abs("10"), mean_abs("5"));
    let b_ok = b10 > b5;

    // (c) Poisson: 10 sites × 10 replicates against 100 sites × 1
    let by_key: BTreeMap<String, &ScenarioResult> = cells
        .iter()
        .filter(|r| f(r, "family") == "poisson" && f(r, "design") == "100x1")
        .map(|r| (key(r, &["design"]), r))
        .collect();
    let c_diff = cells
        .iter()
        .filter(|r| f(r, "family") == "poisson" && f(r, "design") == "10x10")
        .map(|r| (r.mean_relative_bias - by_key[&key(r, &["design"])].mean_relative_bias).abs())
        .fold(0.0, f64::max);
    let c_ok = c_diff <= 0.1;

    report(
        10,
        a_ok && b_ok && c_ok,
        &format!(
            "{} cells in {secs:.0} s; (a) max Poisson prior spread {worst:.3} <= 0.15 [{worst_key}] (all families {worst_all:.3}); \
             (b) gamma3/uniform-α mean |bias| {b10:.3} at λ=10 vs {b5:.3} at λ=5; (c) max |10x10 − 100x1| {c_diff:.3} <= 0.1",
            cells.len()
        ),
    );
}
