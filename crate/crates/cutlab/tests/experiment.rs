use cutlab::config::{ExperimentConfig, GraphSpec};
use cutlab::experiment::{error_count, run_experiment};
use cutlab::heuristics::heuristic_report;
use cutlab::record::{read_csv, to_csv_string, MetricsRecord};
use cutlab::report::{emit_report, plots, PLOT_FILES};
use cutlab::Error;

fn small_config() -> ExperimentConfig {
    ExperimentConfig::from_toml(
        r#"
        seed = 11
        p = [1, 2, 3]
        seeds = 2
        restarts = 2

        [[graph]]
        id = "K4"
        family = "complete"
        n = 4

        [[graph]]
        id = "T5"
        family = "rary_tree"
        arity = 2
        n = 5
        "#,
    )
    .unwrap()
}

fn parse_big(s: &Option<String>) -> f64 {
    s.as_deref().unwrap().parse().unwrap()
}

#[test]
fn cell_count() {
    let mut cfg = small_config();
    cfg.p = vec![1];
    cfg.seeds = 1;
    cfg.graphs.truncate(1);
    let records = run_experiment(&cfg).unwrap();
    assert_eq!(records.len(), 5);
    assert_eq!(error_count(&records), 0);
    let kinds: Vec<&str> = records.iter().map(|r| r.perturbation.as_str()).collect();
    assert_eq!(kinds, ["base", "shadow:1", "shadow:2", "pendant", "delete"]);
}

#[test]
fn records_satisfy_metric_definitions() {
    let records = run_experiment(&small_config()).unwrap();
    assert_eq!(records.len(), 2 * 5 * 3 * 2);
    assert_eq!(error_count(&records), 0);
    for r in &records {
        let ar = r.ar.unwrap();
        assert!(ar > 0.0 && ar <= 1.0, "{r:?}");
        assert!(r.f_star.unwrap() <= r.maxcut.unwrap() as f64 + 1e-9);
        let (ab, ap) = (parse_big(&r.aut_order_base), parse_big(&r.aut_order_pert));
        let (mb, mp) = (r.mu_base.unwrap(), r.mu_pert.unwrap());
        assert!((r.i_prime.unwrap() - mb / mp).abs() <= 1e-12);
        let isp = r.i_sym_prime.unwrap();
        assert!(r.i_sym.unwrap() > 0.0 && isp > 0.0);
        assert!((isp * mp * ab - mb * ap).abs() <= 1e-9 * (mb * ap).max(1.0));
        if r.perturbation.starts_with("shadow") {
            assert_eq!(r.i_sym.unwrap(), ap / ab);
            assert!((r.ar_transfer.unwrap() - r.ar.unwrap()).abs() <= 0.05);
        }
        if r.perturbation == "base" {
            assert_eq!(r.i_prime, Some(1.0));
            // Same angles, re-evaluated after wrapping into the angle box.
            assert!((r.ar_transfer.unwrap() - r.ar.unwrap()).abs() <= 1e-12);
        }
        if r.perturbation == "delete" {
            assert!(r.aut_del_max.is_some());
        } else {
            assert!(r.aut_del_max.is_none());
        }
    }
    let k4_pendant = records
        .iter()
        .find(|r| r.graph_id == "K4" && r.perturbation == "pendant")
        .unwrap();
    assert_eq!(k4_pendant.aut_order_pert.as_deref(), Some("6"));
    assert_eq!(k4_pendant.aut_predicted.as_deref(), Some("6"));
    assert_eq!(k4_pendant.maxcut, Some(5));
}

#[test]
fn warm_start_chains_never_lose_ground() {
    let records = run_experiment(&small_config()).unwrap();
    for r in records.iter().filter(|r| r.p > 1) {
        let prev = records
            .iter()
            .find(|q| {
                q.graph_id == r.graph_id
                    && q.perturbation == r.perturbation
                    && q.seed_index == r.seed_index
                    && q.p + 1 == r.p
            })
            .unwrap();
        assert!(r.f_star.unwrap() >= prev.f_star.unwrap() - 1e-9, "{r:?}");
    }
}

#[test]
fn reruns_are_identical_and_thread_independent() {
    let cfg = small_config();
    let a = to_csv_string(&run_experiment(&cfg).unwrap()).unwrap();
    let b = to_csv_string(&run_experiment(&cfg).unwrap()).unwrap();
    assert_eq!(a, b);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let c = pool.install(|| to_csv_string(&run_experiment(&cfg).unwrap()).unwrap());
    assert_eq!(a, c);
}

#[test]
fn csv_round_trip() {
    let records = run_experiment(&small_config()).unwrap();
    let text = to_csv_string(&records).unwrap();
    assert_eq!(read_csv(text.as_bytes()).unwrap(), records);
}

#[test]
fn report_files_and_order_independence() {
    let records = run_experiment(&small_config()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let emitted = emit_report(&records, dir.path()).unwrap();
    assert_eq!(emitted.plots.len(), 4);
    assert!(emitted.summary.is_some());
    let names: Vec<String> = emitted
        .plots
        .iter()
        .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
        .collect();
    assert_eq!(names, PLOT_FILES);
    for p in &emitted.plots {
        let svg = std::fs::read_to_string(p).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(!svg.contains("NaN"));
    }
    let reread = cutlab::record::load_csv(&emitted.csv).unwrap();
    assert_eq!(reread, records);

    let report = heuristic_report(&records).unwrap();
    let mut shuffled: Vec<MetricsRecord> = records.clone();
    shuffled.reverse();
    shuffled.rotate_left(17);
    assert_eq!(heuristic_report(&shuffled).unwrap(), report);
    assert_eq!(plots(&shuffled).unwrap().len(), 4);

    assert_eq!(report.error_rows, 0);
    assert!(report.bounds.iter().all(|b| !b.sound_violated));
    let k4 = report
        .bounds
        .iter()
        .find(|b| b.graph_id == "K4" && b.perturbation == "base")
        .unwrap();
    assert!(k4.literal_violated && (k4.literal - 2.0).abs() < 1e-9);
    for s in report.symmetry.iter().filter(|s| s.perturbation == "shadow:2") {
        assert_eq!(s.doubled, Some(true));
    }
    assert!(report.maxcut_table.iter().all(|m| m.best_ar >= m.best_mu));
}

#[test]
fn insufficient_data() {
    assert!(matches!(
        emit_report(&[], std::path::Path::new("unused")),
        Err(Error::Core(cutlab_core::Error::InsufficientData(_)))
    ));
    let mut cfg = small_config();
    cfg.p = vec![2];
    let records = run_experiment(&cfg).unwrap();
    assert!(matches!(
        heuristic_report(&records),
        Err(Error::Core(cutlab_core::Error::InsufficientData(_)))
    ));
    let dir = tempfile::tempdir().unwrap();
    let emitted = emit_report(&records, dir.path()).unwrap();
    assert!(emitted.summary.is_none());
    assert_eq!(emitted.plots.len(), 4);
}

#[test]
fn cell_failures_are_recorded_not_fatal() {
    let mut cfg = small_config();
    cfg.p = vec![1];
    cfg.seeds = 1;
    let mut single_edge = GraphSpec::new("complete");
    single_edge.id = Some("K2".into());
    single_edge.n = Some(2);
    cfg.graphs.push(single_edge);
    let records = run_experiment(&cfg).unwrap();
    let failed: Vec<&MetricsRecord> = records.iter().filter(|r| r.is_error()).collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0].graph_id, "K2");
    assert_eq!(failed[0].perturbation, "delete");
    assert!(failed[0].error.as_deref().unwrap().starts_with("ZeroCut"));
    assert!(records.iter().filter(|r| r.graph_id != "K2").all(|r| !r.is_error()));
}

#[test]
fn invalid_configs_are_rejected_up_front() {
    let mut cfg = small_config();
    cfg.seeds = 0;
    assert!(matches!(run_experiment(&cfg), Err(Error::Config(_))));
    let mut cfg = small_config();
    cfg.graphs[0].family = "hypercube".into();
    assert!(run_experiment(&cfg).is_err());
}
