//! The experiment sweep: graphs × variants × p × seeds.
//!
//! Work runs in three parallel stages. Per-variant quantities (MaxCut,
//! automorphism orders, spectrum) are computed once per (graph, variant).
//! The optimizer then runs one chain per (graph, variant, seed), walking p
//! upward with warm starts. Finally every row gets its seed means, indices
//! and the transferred ratio.
//!
//! Seeds are derived from labels, never from scheduling, so the output does
//! not depend on the thread count. The optimizer seed of a cell depends on
//! (graph id, p, seed index) but not on the variant, so base and perturbed
//! graphs start from the same random angles.

use std::collections::HashMap;
use std::time::Instant;

use cutlab_core::autgroup::{aut_order, predict, Prediction, PredictionRule};
use cutlab_core::graph::{apply_perturbation, enumerate_edge_deletions, Graph, Perturbation};
use cutlab_core::maxcut::brute_force_maxcut;
use cutlab_core::metrics::{approx_symmetry_index, mean_ar, quotient_i_prime, symmetry_index};
use cutlab_core::qaoa::{expectation, optimize, ratio, AngleSet, OptimizerConfig};
use cutlab_core::rng::derive_seed;
use cutlab_core::spectral::{check_radius_preservation, eigen_decomposition};
use cutlab_core::BigUint;
use rayon::prelude::*;

use crate::config::{ExperimentConfig, Variant};
use crate::error::Result;
use crate::record::MetricsRecord;

/// FNV-1a, used to turn labels into seed path components.
pub fn label_hash(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

pub fn perturbation_seed(root: u64, graph_id: &str, variant: Variant) -> u64 {
    derive_seed(root, &[label_hash(graph_id), label_hash(&variant.to_string())])
}

pub fn optimizer_seed(root: u64, graph_id: &str, p: usize, seed_index: usize) -> u64 {
    derive_seed(root, &[label_hash(graph_id), p as u64, seed_index as u64])
}

fn describe(e: &cutlab_core::Error) -> String {
    format!("{}: {e}", e.kind())
}

/// What is known about one (graph, variant) pair before any optimization.
#[derive(Debug, Clone)]
pub struct VariantData {
    pub graph: Graph,
    pub maxcut: usize,
    pub aut: BigUint,
    pub aut_predicted: Option<BigUint>,
    pub aut_del_max: Option<BigUint>,
    pub rho: f64,
    pub lambda_min: f64,
}

/// Builds the variant graph and its exact invariants. A closed-form order
/// that disagrees with enumeration, or a shadow perturbation that moves the
/// spectral radius, is an error.
pub fn analyze_variant(
    base: &Graph,
    variant: Variant,
    seed: u64,
) -> Result<VariantData, cutlab_core::Error> {
    let graph = match variant {
        Variant::Base => base.clone(),
        Variant::Perturbed(kind) => {
            let pert = Perturbation::new(kind, seed);
            check_radius_preservation(base, &pert)?;
            apply_perturbation(base, &pert)?
        }
    };
    let maxcut = brute_force_maxcut(&graph)?.value;
    let aut = aut_order(&graph)?.order;
    let mut aut_predicted = None;
    for rule in PredictionRule::ALL {
        if let Prediction::Value(v) = predict(&graph, rule)? {
            if v != aut {
                return Err(cutlab_core::Error::RelationViolated(format!(
                    "closed form gives {v} automorphisms, enumeration {aut}"
                )));
            }
            aut_predicted = Some(v);
        }
    }
    let aut_del_max = match variant {
        Variant::Perturbed(cutlab_core::graph::PerturbationKind::DeleteEdge(_)) => {
            let orders: Vec<BigUint> = enumerate_edge_deletions(base)?
                .par_iter()
                .map(|g| aut_order(g).map(|r| r.order))
                .collect::<Result<_, _>>()?;
            orders.into_iter().max()
        }
        _ => None,
    };
    let (rho, lambda_min) = if graph.n() == 0 {
        (0.0, 0.0)
    } else {
        let spec = eigen_decomposition(&graph)?;
        (spec.spectral_radius(), spec.lambda_min())
    };
    Ok(VariantData {
        graph,
        maxcut,
        aut,
        aut_predicted,
        aut_del_max,
        rho,
        lambda_min,
    })
}

/// One optimizer cell of a chain.
#[derive(Debug, Clone)]
struct CellRun {
    outcome: Result<(f64, f64, AngleSet), String>,
    runtime_ms: Option<u64>,
}

fn run_chain(
    cfg: &ExperimentConfig,
    graph_id: &str,
    data: &VariantData,
    seed_index: usize,
    layers: &[usize],
    optimizer: &OptimizerConfig,
) -> Vec<CellRun> {
    let mut previous: Option<AngleSet> = None;
    layers
        .iter()
        .map(|&p| {
            let seed = optimizer_seed(cfg.seed, graph_id, p, seed_index);
            let warm = previous.take().filter(|w| cfg.warm_start && w.p() + 1 == p);
            let clock = Instant::now();
            let outcome = optimize(&data.graph, p, seed, cfg.restarts, warm.as_ref(), optimizer)
                .and_then(|run| Ok((run.f_star, ratio(run.f_star, data.maxcut)?, run.angles)))
                .map_err(|e| describe(&e));
            let runtime_ms = cfg.timing.then(|| clock.elapsed().as_millis() as u64);
            if let Ok((_, _, angles)) = &outcome {
                previous = Some(angles.clone());
            }
            CellRun {
                outcome,
                runtime_ms,
            }
        })
        .collect()
}

/// Seed mean and spread of the ratios of one (graph, variant, p) cell;
/// `None` if any seed failed.
fn cell_summary(runs: &[&CellRun]) -> Option<(f64, f64)> {
    let ars: Option<Vec<f64>> = runs
        .iter()
        .map(|r| r.outcome.as_ref().ok().map(|o| o.1))
        .collect();
    let s = mean_ar(&ars?).ok()?;
    Some((s.mean, s.std))
}

/// Runs the whole sweep. Configuration problems are returned as errors;
/// failures inside a cell land in that row's `error` column.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<MetricsRecord>> {
    cfg.validate()?;
    let variants = cfg.variants()?;
    let layers = cfg.layers();
    let optimizer = cfg.optimizer.to_core();
    let bases: Vec<(String, Graph)> = (0..cfg.graphs.len())
        .map(|i| Ok((cfg.graph_id(i), cfg.graphs[i].build()?)))
        .collect::<Result<_>>()?;

    let pairs: Vec<(usize, usize)> = (0..bases.len())
        .flat_map(|g| (0..variants.len()).map(move |v| (g, v)))
        .collect();
    let statics: Vec<Result<VariantData, String>> = pairs
        .par_iter()
        .map(|&(g, v)| {
            let (id, base) = &bases[g];
            let seed = perturbation_seed(cfg.seed, id, variants[v]);
            analyze_variant(base, variants[v], seed).map_err(|e| describe(&e))
        })
        .collect();
    let stat = |g: usize, v: usize| &statics[g * variants.len() + v];

    let chains: Vec<(usize, usize, usize)> = pairs
        .iter()
        .flat_map(|&(g, v)| (0..cfg.seeds).map(move |s| (g, v, s)))
        .collect();
    let runs: Vec<Vec<CellRun>> = chains
        .par_iter()
        .map(|&(g, v, s)| match stat(g, v) {
            Ok(data) => run_chain(cfg, &bases[g].0, data, s, &layers, &optimizer),
            Err(_) => Vec::new(),
        })
        .collect();
    let run_at = |g: usize, v: usize, s: usize, pi: usize| -> Option<&CellRun> {
        runs[(g * variants.len() + v) * cfg.seeds + s].get(pi)
    };

    let mut summaries: HashMap<(usize, usize, usize), (f64, f64)> = HashMap::new();
    for &(g, v) in &pairs {
        for pi in 0..layers.len() {
            let cell: Option<Vec<&CellRun>> = (0..cfg.seeds).map(|s| run_at(g, v, s, pi)).collect();
            if let Some(summary) = cell.as_deref().and_then(cell_summary) {
                summaries.insert((g, v, pi), summary);
            }
        }
    }

    let mut rows: Vec<(usize, usize, usize, usize)> = Vec::new();
    for &(g, v) in &pairs {
        for pi in 0..layers.len() {
            for s in 0..cfg.seeds {
                rows.push((g, v, pi, s));
            }
        }
    }
    let records = rows
        .par_iter()
        .map(|&(g, v, pi, s)| {
            let (id, base) = &bases[g];
            let p = layers[pi];
            let mut rec = MetricsRecord {
                graph_id: id.clone(),
                family: base.meta().family.tag().into(),
                n: base.n(),
                edges: base.edge_count(),
                perturbation: variants[v].to_string(),
                perturbation_detail: None,
                p,
                seed_index: s,
                seed: optimizer_seed(cfg.seed, id, p, s),
                restarts: cfg.restarts,
                f_star: None,
                maxcut: None,
                ar: None,
                aut_order_base: None,
                aut_order_pert: None,
                aut_predicted: None,
                aut_del_max: None,
                mu_base: None,
                mu_pert: None,
                sigma_pert: None,
                i_prime: None,
                i_sym: None,
                i_sym_prime: None,
                ar_transfer: None,
                rho: None,
                lambda_min: None,
                runtime_ms: None,
                error: None,
            };
            let data = match stat(g, v) {
                Ok(d) => d,
                Err(e) => {
                    rec.error = Some(e.clone());
                    return rec;
                }
            };
            rec.n = data.graph.n();
            rec.edges = data.graph.edge_count();
            rec.perturbation_detail = data.graph.meta().perturbation_string();
            rec.maxcut = Some(data.maxcut);
            rec.aut_order_pert = Some(data.aut.to_string());
            rec.aut_predicted = data.aut_predicted.as_ref().map(BigUint::to_string);
            rec.aut_del_max = data.aut_del_max.as_ref().map(BigUint::to_string);
            rec.rho = Some(data.rho);
            rec.lambda_min = Some(data.lambda_min);
            let base_data = stat(g, 0).as_ref().ok();
            rec.aut_order_base = base_data.map(|b| b.aut.to_string());

            let mut errors: Vec<String> = Vec::new();
            match run_at(g, v, s, pi) {
                Some(cell) => {
                    rec.runtime_ms = cell.runtime_ms;
                    match &cell.outcome {
                        Ok((f, ar, _)) => {
                            rec.f_star = Some(*f);
                            rec.ar = Some(*ar);
                        }
                        Err(e) => errors.push(e.clone()),
                    }
                }
                None => errors.push("optimizer did not run for this layer count".into()),
            }
            if let Some(b) = base_data {
                match symmetry_index(b.maxcut, data.maxcut, &b.aut, &data.aut) {
                    Ok(x) => rec.i_sym = Some(x),
                    Err(e) => errors.push(describe(&e)),
                }
                let base_angles = run_at(g, 0, s, pi).and_then(|c| c.outcome.as_ref().ok());
                if let Some((_, _, angles)) = base_angles {
                    let transfer = expectation(&data.graph, angles)
                        .and_then(|f| ratio(f, data.maxcut));
                    match transfer {
                        Ok(x) => rec.ar_transfer = Some(x),
                        Err(e) => errors.push(describe(&e)),
                    }
                }
            }
            let mu_base = summaries.get(&(g, 0, pi)).map(|m| m.0);
            let mu_pert = summaries.get(&(g, v, pi));
            rec.mu_base = mu_base;
            rec.mu_pert = mu_pert.map(|m| m.0);
            rec.sigma_pert = mu_pert.map(|m| m.1);
            if let (Some(mb), Some(mp), Some(b)) = (rec.mu_base, rec.mu_pert, base_data) {
                match quotient_i_prime(mb, mp) {
                    Ok(x) => rec.i_prime = Some(x),
                    Err(e) => errors.push(describe(&e)),
                }
                match approx_symmetry_index(mb, mp, &b.aut, &data.aut) {
                    Ok(x) => rec.i_sym_prime = Some(x),
                    Err(e) => errors.push(describe(&e)),
                }
            }
            if !errors.is_empty() {
                errors.dedup();
                rec.error = Some(errors.join("; "));
            }
            rec
        })
        .collect();
    Ok(records)
}

/// Rows that carry an error.
pub fn error_count(records: &[MetricsRecord]) -> usize {
    records.iter().filter(|r| r.is_error()).count()
}

pub fn first_error(records: &[MetricsRecord]) -> Option<&MetricsRecord> {
    records.iter().find(|r| r.is_error())
}

