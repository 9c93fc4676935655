use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use srosi::harness::*;
use srosi::srolp::{inventory_problem, InventoryParams};
use srosi::weights::ScheduleParams;
use srosi::Error;
use std::f64::consts::PI;

fn newsvendor_config(methods: &[&str], eps: Vec<f64>) -> ExperimentConfig {
    let methods = methods.iter().map(|m| m.parse().unwrap()).collect();
    let mut cfg =
        ExperimentConfig::new(GeneratorSpec { kind: GeneratorKind::Newsvendor, seed: 7 }, methods, eps, vec![6, 10], 3);
    cfg.test_queries = 3;
    cfg.test_draws = 20;
    cfg.threads = 1;
    cfg
}

#[test]
fn newsvendor_generator_matches_its_law() {
    assert_eq!(newsvendor_oracle(0.3), (0.8, 0.25));
    let data = gen_newsvendor(500, 1);
    for (g, x) in data.gammas.iter().zip(&data.xis) {
        assert!((0.0..1.0).contains(&g[0]));
        assert!(x[0] >= g[0] && x[0] < g[0] + 1.0);
    }
    assert_eq!(gen_newsvendor(50, 3), gen_newsvendor(50, 3));
    assert_ne!(gen_newsvendor(50, 3), gen_newsvendor(50, 4));
    // Conditional mean at a fixed feature, within three standard errors.
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let draws: Vec<f64> = (0..4000).map(|_| NewsvendorGen.sample_xi(&[0.4], &mut rng)[0]).collect();
    let mean = draws.iter().sum::<f64>() / draws.len() as f64;
    let se = (1.0f64 / 12.0).sqrt() / (draws.len() as f64).sqrt();
    assert!((mean - 0.9).abs() < 3.0 * se, "mean {mean}");
}

#[test]
fn inventory_generator_shape_and_formula() {
    let (data, prob) = gen_inventory(30, 5).unwrap();
    assert_eq!(data.stage_dims, vec![1; 12]);
    assert!(data.xis.iter().flatten().all(|&v| v >= 0.0));
    assert_eq!((prob.d_x(), prob.d_y(), prob.m()), (24, 12, 24));
    assert_eq!(prob, inventory_problem(&InventoryParams::two_supplier()).unwrap());
    let d = seasonal_demand(&[0.0, 0.0, 0.0], &[0.0; 12]);
    for (k, v) in d.iter().enumerate() {
        let t = (k + 1) as f64;
        assert!((v - (100.0 + 30.0 * (2.0 * PI * t / 12.0).sin())).abs() < 1e-12);
    }
    assert_eq!(gen_inventory(30, 5).unwrap().0, data);
}

#[test]
fn portfolio_generator_moments() {
    assert!(portfolio_mean(&[0.0; 3]).iter().all(|&m| m == 0.0));
    let root = portfolio_cov_sqrt();
    // The square root reproduces the documented covariance.
    for i in 0..PORTFOLIO_ASSETS {
        for j in 0..PORTFOLIO_ASSETS {
            let s: f64 = (0..PORTFOLIO_ASSETS).map(|k| root[i][k] * root[k][j]).sum();
            let expect = if i == j { 0.02f64.powi(2) } else { 0.2 * 0.02f64.powi(2) };
            assert!((s - expect).abs() < 1e-15, "({i},{j}) {s}");
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let gamma = [0.3, -0.7, 1.1];
    let m = portfolio_mean(&gamma);
    let reps = 4000;
    let draws: Vec<Vec<f64>> = (0..reps).map(|_| PortfolioGen.sample_xi(&gamma, &mut rng)).collect();
    for a in 0..PORTFOLIO_ASSETS {
        let mean = draws.iter().map(|d| d[a]).sum::<f64>() / reps as f64;
        let sd = (draws.iter().map(|d| (d[a] - mean).powi(2)).sum::<f64>() / (reps - 1) as f64).sqrt();
        assert!((mean - m[a]).abs() < 3.0 * 0.02 / (reps as f64).sqrt(), "asset {a} mean {mean}");
        assert!((sd - 0.02).abs() < 3.0 * 0.02 / (2.0 * reps as f64).sqrt(), "asset {a} sd {sd}");
    }
    let data = gen_portfolio(20, 1);
    assert_eq!(data.d_xi(), PORTFOLIO_ASSETS);
    assert_eq!(gen_portfolio(20, 1), data);
}

#[test]
fn shipment_generator_shape_and_costs() {
    let (data, prob) = gen_shipment(10, 2).unwrap();
    assert_eq!(data.stage_dims, vec![SHIPMENT_LOCATIONS]);
    assert!(data.xis.iter().flatten().all(|&v| v >= 0.0));
    let c = shipment_costs();
    assert_eq!(c[0][0], 1.0);
    assert!((c[0][6] - 2.8).abs() < 1e-12);
    assert!((c[1][2] - 1.3).abs() < 1e-12);
    assert!((c[3][0] - 1.9).abs() < 1e-12);
    assert!(prob.validate().is_ok());
}

#[test]
fn csv_round_trips() {
    let rows = vec![
        ResultRow {
            method: "SROSI-knn".into(),
            n: 50,
            eps: 0.25,
            params: "k=4".into(),
            rep: 3,
            oos_cost: Some(-1.5e-3),
            solve_s: 0.125,
            status: STATUS_OK.into(),
        },
        ResultRow {
            method: "SAA".into(),
            n: 50,
            eps: 0.0,
            params: String::new(),
            rep: 3,
            oos_cost: None,
            solve_s: 0.5,
            status: "failed: linear program ended with status Infeasible".into(),
        },
    ];
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert_eq!(text.lines().next().unwrap(), RESULT_HEADER);
    assert_eq!(read_csv::<ResultRow, _>(buf.as_slice()).unwrap(), rows);

    let conc = vec![ConcentrationRow { n: 50, rep: 0, d1: 0.123456789, eps: 0.5 }];
    let mut buf = Vec::new();
    write_csv(&conc, &mut buf).unwrap();
    assert_eq!(read_csv::<ConcentrationRow, _>(buf.as_slice()).unwrap(), conc);
}

#[test]
fn experiment_is_deterministic() {
    let cfg = newsvendor_config(&["SAA", "SRO", "PtP-knn", "SROSI-kernel"], vec![0.05, 0.1]);
    let a = run_experiment(&cfg).unwrap();
    let b = run_experiment(&ExperimentConfig { threads: 2, ..cfg.clone() }).unwrap();
    assert_eq!(a.len(), 2 * 3 * 4);
    assert!(a.iter().all(|r| r.is_ok()), "{a:?}");
    let strip = |rows: &[ResultRow]| {
        rows.iter().map(|r| (r.method.clone(), r.n, r.eps, r.params.clone(), r.rep, r.oos_cost)).collect::<Vec<_>>()
    };
    assert_eq!(strip(&a), strip(&b));
    for r in &a {
        let m: Method = r.method.parse().unwrap();
        assert_eq!(m.robust(), r.eps > 0.0, "{r:?}");
    }
}

#[test]
fn knn_with_all_samples_matches_uniform_weights() {
    let mut cfg = newsvendor_config(&["SRO", "SROSI-knn"], vec![0.1]);
    cfg.weights.knn_k = vec![KnnRule::Fixed(usize::MAX)];
    let rows = run_experiment(&cfg).unwrap();
    for pair in rows.chunks(2) {
        assert_eq!(pair[0].method, "SRO");
        assert!((pair[0].oos_cost.unwrap() - pair[1].oos_cost.unwrap()).abs() < 1e-9, "{pair:?}");
    }
}

#[test]
fn saa_only_config_runs() {
    let cfg = newsvendor_config(&["SAA"], vec![0.0]);
    let rows = run_experiment(&cfg).unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.is_ok() && r.eps == 0.0 && r.oos_cost.unwrap() >= 0.0));
}

#[test]
fn config_json_round_trip_and_errors() {
    let cfg = newsvendor_config(&["SAA", "SROSI-rf"], vec![0.1]);
    assert_eq!(ExperimentConfig::from_json(&cfg.to_json().unwrap()).unwrap(), cfg);
    let minimal = r#"{"version":1,"generator":{"kind":"portfolio","seed":1},"methods":["SAA","PtP-cart"],"n_grid":[20],"reps":2}"#;
    let parsed = ExperimentConfig::from_json(minimal).unwrap();
    assert_eq!(parsed.test_queries, 20);
    assert_eq!(parsed.validation_fraction, 0.25);

    let bad_version = minimal.replace("\"version\":1", "\"version\":2");
    assert!(matches!(ExperimentConfig::from_json(&bad_version), Err(Error::Parse(_))));
    let unknown = minimal.replace("\"reps\":2", "\"reps\":2,\"colour\":1");
    assert!(ExperimentConfig::from_json(&unknown).is_err());
    let bad_method = minimal.replace("PtP-cart", "PtP-svm");
    assert!(ExperimentConfig::from_json(&bad_method).is_err());
    for (from, to) in [
        ("\"reps\":2", "\"reps\":0"),
        ("\"n_grid\":[20]", "\"n_grid\":[]"),
        ("\"methods\":[\"SAA\",\"PtP-cart\"]", "\"methods\":[\"SRO\"]"),
        ("\"reps\":2", "\"reps\":2,\"validation_fraction\":1.5"),
        ("\"reps\":2", "\"reps\":2,\"norm\":\"l2\""),
        ("\"reps\":2", "\"reps\":2,\"portfolio\":{\"alpha\":1.5,\"lambda\":1}"),
    ] {
        let text = minimal.replace(from, to);
        assert!(matches!(ExperimentConfig::from_json(&text), Err(Error::InvalidParameter(_))), "{text}");
    }
}

#[test]
fn method_names_round_trip() {
    let all: Vec<Method> = [Method::Saa, Method::Sro]
        .into_iter()
        .chain(WeightKind::ALL.iter().flat_map(|&k| [Method::PtP(k), Method::Srosi(k)]))
        .collect();
    assert_eq!(all.len(), 10);
    for m in all {
        assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
    }
    assert_eq!(Method::Srosi(WeightKind::Rf).to_string(), "SROSI-rf");
    assert!("saa".parse::<Method>().is_err());
    assert_eq!(KnnRule::Power { scale: 1.0, power: 0.5 }.k(30), 6);
    assert_eq!(KnnRule::Fixed(0).k(5), 1);
    assert_eq!(KnnRule::Fixed(9).k(5), 5);
}

#[test]
fn sign_test_counts_and_p_values() {
    let t = sign_test(&[1.0, 2.0, 3.0, 4.0], &[2.0, 3.0, 3.0, 5.0], 0.0).unwrap();
    assert_eq!((t.wins, t.losses, t.ties), (3, 0, 1));
    assert!((t.p_value - 0.125).abs() < 1e-12);
    let t = sign_test(&[0.0; 10], &[1.0; 10], 0.0).unwrap();
    assert!((t.p_value - 0.5f64.powi(10)).abs() < 1e-15);
    let t = sign_test(&[1.0, 0.0], &[0.0, 1.0], 0.0).unwrap();
    assert!((t.p_value - 0.75).abs() < 1e-12);
    assert_eq!(sign_test(&[1.0], &[0.0], 0.0).unwrap().p_value, 1.0);
    assert!(sign_test(&[1.0], &[], 0.0).is_err());
}

#[test]
fn concentration_single_sample_is_a_cdf_integral() {
    let schedule = ScheduleParams::Knn { k1: 1.0, k3: 1.0, delta: 0.75, p: 0.08 };
    let rows = run_concentration(&[1], 5, schedule, 3).unwrap();
    for r in &rows {
        let xi = gen_newsvendor(1, replication_seed(3, 1, r.rep)).xis[0][0];
        let (a, b) = (STUDY_QUERY, STUDY_QUERY + 1.0);
        // ∫ |1{t ≥ ξ} − F_U(t)| dt for U[a, b] and a point mass ξ.
        let expect = if xi <= a {
            a - xi + 0.5
        } else if xi >= b {
            xi - b + 0.5
        } else {
            0.5 * ((xi - a).powi(2) + (b - xi).powi(2))
        };
        assert!((r.d1 - expect).abs() < 1e-12, "{r:?} vs {expect}");
    }
    let rows = run_concentration(&[20, 80], 4, schedule, 4).unwrap();
    assert!(rows.iter().all(|r| r.d1 >= 0.0 && r.eps > 0.0));
    assert!(run_concentration(&[], 4, schedule, 4).is_err());
}

#[test]
fn convergence_rows_carry_the_oracle() {
    let schedule = ScheduleParams::Kernel { k1: 1.0, k4: 1.0, delta: 0.3, p: 0.1 };
    let rows = run_convergence(&[10, 40], 3, schedule, 5).unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.v_star == 0.25 && r.v_hat >= 0.0));
    let invalid = ScheduleParams::Knn { k1: 1.0, k3: 1.0, delta: 0.4, p: 0.1 };
    assert!(run_convergence(&[10], 1, invalid, 5).is_err());
}
