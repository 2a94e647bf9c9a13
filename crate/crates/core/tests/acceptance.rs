//! Acceptance suite: one test per release criterion, each printing a
//! pass line with its runtime. Criteria 8–10 share two full benchmark
//! runs (the second exists to verify reproducibility).
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! per-criterion lines.

mod common;

use chrono::NaiveDate;
use chronocast::boxjenkins::{
    adf_test, difference, fit as arima_fit, forecast as arima_forecast, ljung_box, undifference,
    ArimaOrder,
};
use chronocast::checkpoint::ModelCheckpoint;
use chronocast::data::{describe, ingest_carbon_monitor, window_and_split, TimeSeries};
use chronocast::forest::{ForestConfig, ForestModel};
use chronocast::grey;
use chronocast::harness::{
    forecast_future, run_experiment, ExperimentConfig, ExperimentOutcome, ModelKind, Profile,
};
use chronocast::lstm::LstmNet;
use chronocast::metrics::{evaluate, Scale};
use chronocast::neural::{
    adam_step, train, Activation, AdamConfig, AdamState, DenseNet, GradientModel, LayerSpec,
    TrainConfig, WindowPredictor,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

fn fixture_path() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/china_co2_daily_synthetic.csv")
}

fn fixture_series() -> TimeSeries {
    let file = std::fs::File::open(fixture_path()).expect("fixture CSV present");
    ingest_carbon_monitor(file).expect("fixture parses")
}

fn pass(criterion: usize, name: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    println!("criterion {criterion:02} ({name}): PASS in {elapsed:.2?}");
    assert!(
        elapsed <= budget,
        "criterion {criterion} exceeded its runtime budget: {elapsed:.2?} > {budget:.2?}"
    );
}

// ------------------------------------------------------------ criterion 1

#[test]
#[allow(clippy::approx_constant)] // 3.14 is the published standard deviation
fn criterion_01_descriptive_statistics() {
    let started = Instant::now();
    let series = fixture_series();
    let stats = describe(&series).unwrap();

    assert_eq!(stats.count, 1004);
    let within = |value: f64, printed: f64, tol: f64| {
        assert!(
            (value - printed).abs() <= tol,
            "{value} vs printed {printed} (tol {tol})"
        );
    };
    within(stats.maximum, 38.1, 0.005);
    within(stats.minimum, 20.6, 0.005);
    within(stats.mean, 29.89, 0.005);
    within(stats.median, 30.2, 0.005);
    within(stats.range, 17.5, 0.005);
    within(stats.standard_deviation, 3.14, 0.005);
    within(stats.standard_error, 0.10, 0.005);
    within(stats.total, 30013.4, 0.05);
    within(stats.skewness, -0.42, 0.05);
    within(stats.kurtosis, 0.68, 0.05);

    pass(1, "descriptive statistics", started, Duration::from_secs(1));
}

// ------------------------------------------------------------ criterion 2

/// Independent re-implementation: naive loops, no shared code path.
fn naive_metrics(actual: &[f64], predicted: &[f64]) -> (f64, f64, f64, f64, f64) {
    let n = actual.len() as f64;
    let mut se = 0.0;
    let mut ae = 0.0;
    let mut pe = 0.0;
    for i in 0..actual.len() {
        se += (actual[i] - predicted[i]) * (actual[i] - predicted[i]);
        ae += (predicted[i] - actual[i]).abs();
        pe += ((predicted[i] - actual[i]) / actual[i]).abs();
    }
    let mut mean = 0.0;
    for &a in actual {
        mean += a;
    }
    mean /= n;
    let mut tss = 0.0;
    for &a in actual {
        tss += (a - mean) * (a - mean);
    }
    (se / n, (se / n).sqrt(), ae / n, pe / n * 100.0, 1.0 - se / tss)
}

#[test]
fn criterion_02_metric_oracle_suite() {
    let started = Instant::now();

    // hand-computed fixed case
    let m = evaluate(&[1.0, 2.0, 3.0, 4.0], &[2.0, 3.0, 4.0, 5.0]).unwrap();
    assert_eq!(m.mse, 1.0);
    assert_eq!(m.rmse, 1.0);
    assert_eq!(m.mae, 1.0);
    let expected_mape = (100.0 + 50.0 + 100.0 / 3.0 + 25.0) / 4.0;
    assert!((m.mape_percent.unwrap() - expected_mape).abs() < 1e-12);
    assert!((m.r2.unwrap() - 0.2).abs() < 1e-12);

    // 1000 randomized instances against the naive loops
    let mut rng = ChaCha8Rng::seed_from_u64(20220930);
    for _ in 0..1000 {
        let n = rng.gen_range(2..60);
        let actual: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..100.0)).collect();
        let predicted: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..100.0)).collect();
        let m = evaluate(&actual, &predicted).unwrap();
        let (mse, rmse, mae, mape, r2) = naive_metrics(&actual, &predicted);
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
        assert!(close(m.mse, mse));
        assert!(close(m.rmse, rmse));
        assert!(close(m.mae, mae));
        assert!(close(m.mape_percent.unwrap(), mape));
        assert!(close(m.r2.unwrap(), r2));
    }

    pass(2, "metric oracle suite", started, Duration::from_secs(5));
}

// ------------------------------------------------------------ criterion 3

#[test]
fn criterion_03_grey_model_suite() {
    let started = Instant::now();

    // degenerate constant series forecasts the constant
    let constant = grey::fit(&[5.0; 6]).unwrap();
    assert!(constant.a.abs() < 1e-9);
    for v in constant.forecast(5) {
        assert!((v - 5.0).abs() < 1e-9);
    }

    // self-consistency: members of the exact-fit family (series satisfying
    // the discrete grey equation) are recovered to 1e-6 across |a| < 0.5
    for &(a, b, x1) in &[
        (-0.45, 3.0, 2.0),
        (-0.2, 1.5, 1.0),
        (-0.01, 2.0, 1.9),
        (0.01, 2.0, 2.1),
        (0.25, 5.0, 4.0),
        (0.45, 9.0, 5.0),
    ] {
        let mut values = vec![x1];
        let mut acc = x1;
        for _ in 1..14 {
            let next = (b - a * acc) / (1.0 + a / 2.0);
            values.push(next);
            acc += next;
        }
        assert!(values.iter().all(|&v| v > 0.0), "family member positive");
        let refit = grey::fit(&values).unwrap();
        assert!((refit.a - a).abs() < 1e-6, "a {} vs {}", refit.a, a);
        assert!((refit.b - b).abs() < 1e-6, "b {} vs {}", refit.b, b);
    }

    // positive-scaling equivariance to 1e-9 relative
    let base = [2.0, 2.6, 3.1, 4.0, 5.2, 6.1, 7.4];
    let c = 812.5;
    let scaled: Vec<f64> = base.iter().map(|v| v * c).collect();
    let m1 = grey::fit(&base).unwrap();
    let m2 = grey::fit(&scaled).unwrap();
    assert!((m1.a - m2.a).abs() <= 1e-9 * m1.a.abs().max(1.0));
    assert!((m2.b - c * m1.b).abs() <= 1e-9 * (c * m1.b).abs());
    for (p1, p2) in m1.forecast(6).iter().zip(m2.forecast(6)) {
        assert!((p2 - c * p1).abs() <= 1e-9 * (c * p1).abs());
    }

    // least-squares coefficients match an explicit normal-equation oracle
    let values = [1.3, 2.1, 2.8, 3.9, 5.2, 6.0];
    let model = grey::fit(&values).unwrap();
    let acc = grey::accumulate(&values);
    let z = grey::adjacent_means(&acc).unwrap();
    // oracle: solve [Σz² -Σz; -Σz m] (a b)ᵀ = (-Σzy  Σy)ᵀ by 2×2 inverse
    let m = z.len() as f64;
    let y = &values[1..];
    let szz: f64 = z.iter().map(|v| v * v).sum();
    let sz: f64 = z.iter().sum();
    let szy: f64 = z.iter().zip(y).map(|(zi, yi)| zi * yi).sum();
    let sy: f64 = y.iter().sum();
    let det = szz * m - sz * sz;
    let a_oracle = (-szy * m + sz * sy) / det;
    let b_oracle = (szz * sy - sz * szy) / det;
    assert!((model.a - a_oracle).abs() < 1e-9, "{} vs {}", model.a, a_oracle);
    assert!((model.b - b_oracle).abs() < 1e-9, "{} vs {}", model.b, b_oracle);

    pass(3, "grey model suite", started, Duration::from_secs(5));
}

// ------------------------------------------------------------ criterion 4

#[test]
fn criterion_04_box_jenkins_suite() {
    let started = Instant::now();

    // differencing round-trips to 1e-10 absolute over the full grid
    let mut g = common::Gaussian::new(17);
    let y: Vec<f64> = (0..80)
        .map(|t| 30.0 + (t as f64 * 0.21).sin() * 4.0 + g.next() * 0.5)
        .collect();
    for d in [0usize, 1, 2] {
        for seasonal_d in [0usize, 1] {
            for s in [0usize, 4, 7] {
                let sd = if s == 0 { 0 } else { seasonal_d };
                let (diffed, state) = difference(&y, d, sd, s).unwrap();
                let back = undifference(&diffed, &state).unwrap();
                for (a, b) in y.iter().zip(&back) {
                    assert!((a - b).abs() <= 1e-10, "(d,D,s)=({d},{sd},{s})");
                }
            }
        }
    }

    // ARIMA(0,1,0) forecasts the last observation exactly
    let model = arima_fit(&y, ArimaOrder::new(0, 1, 0), None).unwrap();
    for v in arima_forecast(&model, 6, None).unwrap() {
        assert_eq!(v, *y.last().unwrap());
    }

    // MA(3) forecasts are constant beyond lag 3
    let ma3 = arima_fit(&y, ArimaOrder::new(0, 0, 3), None).unwrap();
    let f = arima_forecast(&ma3, 9, None).unwrap();
    for v in &f[3..9] {
        assert!((v - ma3.intercept).abs() < 1e-12);
    }

    // CSS recovery on simulated processes, frozen seeds
    let ma = common::simulate_ma1(0.5, 5000, 11);
    let theta_hat = arima_fit(&ma, ArimaOrder::new(0, 0, 1), None).unwrap().ma[0];
    assert!((0.45..=0.55).contains(&theta_hat), "theta_hat = {theta_hat}");

    let ar = common::simulate_ar1(0.7, 5000, 12);
    let ar_model = arima_fit(&ar, ArimaOrder::new(1, 0, 0), None).unwrap();
    let phi_hat = ar_model.ar[0];
    assert!((0.65..=0.75).contains(&phi_hat), "phi_hat = {phi_hat}");

    // SARIMAX with null seasonal structure and no exog is bit-identical
    let plain = arima_fit(&y, ArimaOrder::new(1, 1, 1), None).unwrap();
    let nulled = arima_fit(&y, ArimaOrder::new(1, 1, 1).with_seasonal(0, 0, 0, 0), None).unwrap();
    assert_eq!(plain, nulled);
    assert_eq!(
        arima_forecast(&plain, 7, None).unwrap(),
        arima_forecast(&nulled, 7, None).unwrap()
    );

    // ADF Monte-Carlo, frozen seed base: random walks keep the unit-root
    // null at least 95% of the time, white noise rejects at least 95%
    let mut rw_fail_to_reject = 0;
    let mut wn_reject = 0;
    for k in 0..200u64 {
        if !adf_test(&common::simulate_random_walk(2000, 1000 + k), None)
            .unwrap()
            .reject_unit_root
        {
            rw_fail_to_reject += 1;
        }
        if adf_test(&common::white_noise(2000, 1500 + k), None).unwrap().reject_unit_root {
            wn_reject += 1;
        }
    }
    assert!(rw_fail_to_reject >= 190, "random walk fail-to-reject {rw_fail_to_reject}/200");
    assert!(wn_reject >= 190, "white noise reject {wn_reject}/200");

    // Ljung-Box: white noise passes ≥ 90% over seeds; residuals of a
    // well-specified AR(1) fit pass; the raw AR(1) series fails
    let mut lb_passes = 0;
    for k in 0..200u64 {
        if ljung_box(&common::white_noise(2000, 9000 + k), 10).unwrap().passes {
            lb_passes += 1;
        }
    }
    assert!(lb_passes >= 180, "white-noise Ljung-Box pass rate {lb_passes}/200");
    assert!(ljung_box(&ar_model.residuals, 10).unwrap().passes);
    assert!(!ljung_box(&ar, 10).unwrap().passes);

    pass(4, "box-jenkins suite", started, Duration::from_secs(120));
}

// ------------------------------------------------------------ criterion 5

fn dense_gradcheck(config_index: u64) {
    let hidden = [4, 6, 8, 12][(config_index % 4) as usize];
    let activation =
        [Activation::Relu, Activation::Tanh, Activation::Sigmoid][(config_index % 3) as usize];
    let specs = vec![
        LayerSpec::new(3, hidden, activation),
        LayerSpec::new(hidden, hidden, activation),
        LayerSpec::new(hidden, 1, Activation::Linear),
    ];

    let mut rng = ChaCha8Rng::seed_from_u64(4000 + config_index);
    let windows: Vec<Vec<f64>> =
        (0..6).map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
    let targets: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let refs: Vec<&[f64]> = windows.iter().map(Vec::as_slice).collect();

    // relu kinks invalidate central differences; scan for a margin-clear seed
    let net = (0..2000u64)
        .map(|s| DenseNet::new(specs.clone(), 5000 * config_index + s).unwrap())
        .find(|net| {
            let (_, cache) = net.forward(&refs).unwrap();
            net.relu_kink_margin(&cache) > 2e-4
        })
        .expect("kink-free seed in range");

    let mut analytic = vec![0.0; net.param_count()];
    net.batch_loss_and_grad(&refs, &targets, &mut analytic);
    let loss = |net: &DenseNet| -> f64 {
        refs.iter()
            .zip(&targets)
            .map(|(w, &t)| (net.predict_window(w) - t).powi(2))
            .sum::<f64>()
            / refs.len() as f64
    };
    let mut params = vec![0.0; net.param_count()];
    net.read_params(&mut params);
    let h = 1e-5;
    for k in 0..params.len() {
        let mut plus = params.clone();
        plus[k] += h;
        let mut minus = params.clone();
        minus[k] -= h;
        let mut np = net.clone();
        np.write_params(&plus);
        let mut nm = net.clone();
        nm.write_params(&minus);
        let numeric = (loss(&np) - loss(&nm)) / (2.0 * h);
        let tol =
            if analytic[k].abs() < 1e-3 { 1e-7 } else { analytic[k].abs() * 1e-5 };
        assert!(
            (numeric - analytic[k]).abs() < tol.max(1e-9),
            "dense config {config_index} param {k}: {numeric} vs {}",
            analytic[k]
        );
    }
}

fn lstm_gradcheck(config_index: u64) {
    let relu_hidden = config_index.is_multiple_of(2);
    let mut rng = ChaCha8Rng::seed_from_u64(7000 + config_index);
    let windows: Vec<Vec<f64>> =
        (0..4).map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
    let targets: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let refs: Vec<&[f64]> = windows.iter().map(Vec::as_slice).collect();

    // the margin must only clear the finite-difference displacement,
    // h = 1e-5 times an O(1) sensitivity, so 2e-4 is a 20x buffer
    let net = (0..2000u64)
        .map(|s| LstmNet::new(1, &[4, 4], relu_hidden, 3, 5000 * config_index + s).unwrap())
        .find(|net| {
            !relu_hidden
                || refs
                    .iter()
                    .map(|w| net.forward_sequence(w).unwrap().1.relu_kink_margin())
                    .fold(f64::INFINITY, f64::min)
                    > 2e-4
        })
        .expect("kink-free seed in range");

    let mut analytic = vec![0.0; net.param_count()];
    net.batch_loss_and_grad(&refs, &targets, &mut analytic);
    let loss = |net: &LstmNet| -> f64 {
        refs.iter()
            .zip(&targets)
            .map(|(w, &t)| (net.forward_sequence(w).unwrap().0 - t).powi(2))
            .sum::<f64>()
            / refs.len() as f64
    };
    let mut params = vec![0.0; net.param_count()];
    net.read_params(&mut params);
    let h = 1e-5;
    for k in 0..params.len() {
        let mut plus = params.clone();
        plus[k] += h;
        let mut minus = params.clone();
        minus[k] -= h;
        let mut np = net.clone();
        np.write_params(&plus);
        let mut nm = net.clone();
        nm.write_params(&minus);
        let numeric = (loss(&np) - loss(&nm)) / (2.0 * h);
        let tol =
            if analytic[k].abs() < 1e-3 { 1e-7 } else { analytic[k].abs() * 1e-5 };
        assert!(
            (numeric - analytic[k]).abs() < tol.max(1e-9),
            "lstm config {config_index} param {k}: {numeric} vs {}",
            analytic[k]
        );
    }
}

#[test]
fn criterion_05_gradient_checks() {
    let started = Instant::now();
    for config_index in 0..20u64 {
        dense_gradcheck(config_index);
        lstm_gradcheck(config_index);
    }
    pass(5, "gradient checks (20 dense + 20 lstm configs)", started, Duration::from_secs(60));
}

// ------------------------------------------------------------ criterion 6

#[test]
fn criterion_06_architecture_invariants() {
    let started = Instant::now();
    let ann = DenseNet::zeroed(vec![
        LayerSpec::new(3, 12, Activation::Relu),
        LayerSpec::new(12, 12, Activation::Relu),
        LayerSpec::new(12, 1, Activation::Linear),
    ])
    .unwrap();
    assert_eq!(ann.param_count(), 217);

    let lstm = LstmNet::zeroed(1, &[50, 50], true, 3).unwrap();
    assert_eq!(lstm.param_count(), 30651);

    pass(6, "architecture parameter counts", started, Duration::from_secs(1));
}

// ------------------------------------------------------------ criterion 7

#[test]
fn criterion_07_learning_sanity() {
    let started = Instant::now();

    // dense net drives train MSE below 1e-4 on the linear-target task
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let windows: Vec<Vec<f64>> =
        (0..1000).map(|_| (0..3).map(|_| rng.gen_range(0.0..1.0)).collect()).collect();
    let targets: Vec<f64> =
        windows.iter().map(|w| 0.5 * w[0] + 0.3 * w[1] + 0.2 * w[2]).collect();
    let refs: Vec<&[f64]> = windows.iter().map(Vec::as_slice).collect();
    let mut net = DenseNet::new(
        vec![
            LayerSpec::new(3, 12, Activation::Relu),
            LayerSpec::new(12, 12, Activation::Relu),
            LayerSpec::new(12, 1, Activation::Linear),
        ],
        7,
    )
    .unwrap();
    let adam_cfg = AdamConfig::default();
    let mut state = AdamState::new(net.param_count());
    let mut params = vec![0.0; net.param_count()];
    net.read_params(&mut params);
    let mut grad = vec![0.0; net.param_count()];
    let order: Vec<usize> = (0..refs.len()).collect();
    for _ in 0..300 {
        for chunk in order.chunks(32) {
            let bw: Vec<&[f64]> = chunk.iter().map(|&i| refs[i]).collect();
            let bt: Vec<f64> = chunk.iter().map(|&i| targets[i]).collect();
            net.batch_loss_and_grad(&bw, &bt, &mut grad);
            adam_step(&mut params, &grad, &mut state, &adam_cfg);
            net.write_params(&params);
        }
    }
    let ann_mse: f64 = refs
        .iter()
        .zip(&targets)
        .map(|(w, &t)| (net.predict_window(w) - t).powi(2))
        .sum::<f64>()
        / refs.len() as f64;
    assert!(ann_mse < 1e-4, "ann train mse {ann_mse}");

    // LSTM one-step MAPE under 5% on a noiseless sine, held-out split,
    // measured on the physical scale (the normalized scale has exact
    // zeros at the training minimum)
    let start = NaiveDate::from_ymd_opt(2021, 1, 1).unwrap();
    let sine: Vec<f64> = (0..420)
        .map(|t| 0.5 + 0.25 * (2.0 * std::f64::consts::PI * t as f64 / 30.0).sin())
        .collect();
    let series = TimeSeries::from_start_date(start, sine).unwrap();
    let prepared = window_and_split(&series, 3, (0.8, 0.1, 0.1)).unwrap();
    let mut lstm = LstmNet::new(1, &[12], true, 3, 91).unwrap();
    let cfg = TrainConfig { epochs: 300, batch_size: 32, shuffle_seed: 5, ..Default::default() };
    train(&mut lstm, &prepared, &cfg).unwrap();
    let split = prepared.split().clone();
    let (tw, tt) = prepared.range_samples(&split.test);
    let normalizer = prepared.normalizer();
    let lstm_mape: f64 = tw
        .iter()
        .zip(&tt)
        .map(|(w, &t)| {
            let p = normalizer.denormalize(lstm.predict_window(w));
            let a = normalizer.denormalize(t);
            ((p - a) / a).abs()
        })
        .sum::<f64>()
        / tt.len() as f64
        * 100.0;
    assert!(lstm_mape < 5.0, "lstm sine one-step MAPE {lstm_mape}%");

    // random forest explains the smooth synthetic target on its train set
    let mut rng = ChaCha8Rng::seed_from_u64(2222);
    let rows: Vec<Vec<f64>> = (0..2000)
        .map(|_| (0..3).map(|_| rng.gen_range(0.0..3.0)).collect())
        .collect();
    let forest_targets: Vec<f64> = rows.iter().map(|r| r[0].sin() + 0.5 * r[1]).collect();
    let forest_refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
    let forest =
        ForestModel::fit_samples(&forest_refs, &forest_targets, ForestConfig::default()).unwrap();
    let mean = forest_targets.iter().sum::<f64>() / forest_targets.len() as f64;
    let sse: f64 = forest_refs
        .iter()
        .zip(&forest_targets)
        .map(|(r, &t)| (forest.predict(r) - t).powi(2))
        .sum();
    let tss: f64 = forest_targets.iter().map(|&t| (t - mean).powi(2)).sum();
    let forest_r2 = 1.0 - sse / tss;
    assert!(forest_r2 > 0.95, "forest train R² {forest_r2}");

    pass(7, "learning sanity (ann, lstm, forest)", started, Duration::from_secs(300));
}

// ----------------------------------------------------- criteria 8, 9, 10

static SHARED_RUNS: OnceLock<(ExperimentOutcome, ExperimentOutcome, Duration)> = OnceLock::new();

fn shared_runs() -> &'static (ExperimentOutcome, ExperimentOutcome, Duration) {
    SHARED_RUNS.get_or_init(|| {
        let series = fixture_series();
        let cfg = ExperimentConfig::paper(Profile::Ci);
        let started = Instant::now();
        let first = run_experiment(&series, &cfg).expect("benchmark run succeeds");
        let first_duration = started.elapsed();
        let second = run_experiment(&series, &cfg).expect("benchmark rerun succeeds");
        (first, second, first_duration)
    })
}

#[test]
fn criterion_08_ml_beats_statistical() {
    let started = Instant::now();
    let (outcome, _, first_duration) = shared_runs();

    let normalized = |name: &str| {
        outcome
            .table
            .rows
            .iter()
            .find(|r| r.model == name && r.scale == Scale::Normalized)
            .unwrap_or_else(|| panic!("row for {name}"))
    };
    let statistical = ["gm11", "arima", "sarimax"];
    let machine_learning = ["ann", "random_forest", "lstm"];

    for ml in machine_learning {
        let ml_row = normalized(ml);
        for stat in statistical {
            let stat_row = normalized(stat);
            assert!(
                ml_row.mse < stat_row.mse,
                "{ml} mse {} not below {stat} mse {}",
                ml_row.mse,
                stat_row.mse
            );
            assert!(
                ml_row.r2.unwrap() > stat_row.r2.unwrap(),
                "{ml} r2 {} not above {stat} r2 {}",
                ml_row.r2.unwrap(),
                stat_row.r2.unwrap()
            );
        }
    }
    for stat in statistical {
        let r2 = normalized(stat).r2.unwrap();
        assert!(r2 <= 0.1, "{stat} r2 {r2} above 0.1");
    }
    assert!(
        *first_duration <= Duration::from_secs(900),
        "benchmark run took {first_duration:.2?}"
    );

    pass(8, "ML beats statistical on the fixture", started, Duration::from_secs(1800));
}

#[test]
fn criterion_09_reproducibility() {
    let started = Instant::now();
    let (first, second, _) = shared_runs();

    // emulate two CLI runs: serialize with different timestamps, strip the
    // excluded field, compare bytes
    let render = |outcome: &ExperimentOutcome, stamp: u64| {
        let mut table = outcome.table.clone();
        table.meta.generated_at_unix = Some(stamp);
        table
            .to_json_pretty()
            .lines()
            .filter(|line| !line.contains("generated_at_unix"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let a = render(first, 1);
    let b = render(second, 2);
    assert_eq!(a.len(), b.len());
    assert!(a == b, "comparison.json differs between identical-seed runs");

    pass(9, "byte-identical reruns", started, Duration::from_secs(60));
}

#[test]
fn criterion_10_forecast_protocol() {
    let started = Instant::now();
    let (outcome, _, _) = shared_runs();

    let lstm = outcome
        .models
        .iter()
        .find(|m| m.kind == ModelKind::Lstm)
        .expect("lstm outcome present");
    assert!(matches!(lstm.checkpoint.model, ModelCheckpoint::Lstm { .. }));

    let forecast = forecast_future(&lstm.checkpoint, 92).unwrap();
    assert_eq!(forecast.values.len(), 92);
    assert_eq!(forecast.dates[0], NaiveDate::from_ymd_opt(2022, 10, 1).unwrap());
    assert_eq!(forecast.dates[91], NaiveDate::from_ymd_opt(2022, 12, 31).unwrap());

    // all finite, inside [0.5·min, 2·max] of the historical physical range
    let series = fixture_series();
    let min = series.values().iter().copied().fold(f64::INFINITY, f64::min);
    let max = series.values().iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for &v in &forecast.values {
        assert!(v.is_finite());
        assert!(v >= 0.5 * min && v <= 2.0 * max, "forecast value {v} outside bounds");
    }

    pass(10, "92-day forecast protocol", started, Duration::from_secs(60));
}
