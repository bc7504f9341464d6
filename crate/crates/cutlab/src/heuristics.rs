//! Summary statistics over experiment rows.
//!
//! Everything here is computed from the rows alone, so a CSV written by one
//! run can be summarized later. Rows with errors are skipped. Groups are
//! keyed and sorted by label, and sums run over sorted values, so the report
//! does not depend on row order.

use std::collections::{BTreeMap, BTreeSet};

use cutlab_core::spectral::bounds_from_spectrum;
use cutlab_core::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::record::MetricsRecord;

/// Largest |AR_base − AR_shadow| still attributed to optimizer noise.
pub const AR_NOISE: f64 = 0.02;
/// Largest spread of I′ across p still counted as flat.
pub const SPREAD_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Thresholds {
    pub ar_noise: f64,
    pub spread_limit: f64,
}

/// Max minus min across p of the quotient and the approximate index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Flatness {
    pub graph_id: String,
    pub perturbation: String,
    pub p_values: Vec<usize>,
    pub i_prime_spread: Option<f64>,
    pub i_sym_prime_spread: Option<f64>,
    pub flat: bool,
}

/// A shadow row against the base row of the same (graph, p, seed).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShadowDelta {
    pub graph_id: String,
    pub perturbation: String,
    pub p: usize,
    pub seed_index: usize,
    pub ar_base: f64,
    pub ar_shadow: f64,
    pub delta: f64,
    pub mu_delta: Option<f64>,
    pub within_noise: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryRow {
    pub graph_id: String,
    pub perturbation: String,
    pub aut_base: String,
    pub aut_pert: String,
    pub aut_ratio: f64,
    pub i_sym: Option<f64>,
    /// Mean over p of `μ_pert − μ_base`.
    pub mean_mu_delta: Option<f64>,
    /// For two shadow nodes: whether the order exactly doubled.
    pub doubled: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsRow {
    pub graph_id: String,
    pub perturbation: String,
    pub maxcut: usize,
    pub literal: f64,
    pub sound: f64,
    pub literal_violated: bool,
    pub sound_violated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantOrder {
    pub perturbation: String,
    pub order: String,
}

/// Automorphism orders of one graph under every variant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AutTableRow {
    pub graph_id: String,
    pub family: String,
    pub n: usize,
    pub orders: Vec<VariantOrder>,
    pub del_max: Option<String>,
}

/// MaxCut and best ratios of one (graph, variant). `best_mu` is the largest
/// seed mean over p; `best_ar` the largest single-seed ratio over p.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaxcutTableRow {
    pub graph_id: String,
    pub perturbation: String,
    pub maxcut: usize,
    pub best_mu: Option<f64>,
    pub best_mu_p: Option<usize>,
    pub best_ar: Option<f64>,
}

/// Seed means averaged across every graph of a family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyMean {
    pub family: String,
    pub perturbation: String,
    pub p: usize,
    pub graphs: usize,
    pub mean_mu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeuristicReport {
    pub thresholds: Thresholds,
    pub rows: usize,
    pub error_rows: usize,
    pub flatness: Vec<Flatness>,
    pub shadow: Vec<ShadowDelta>,
    pub symmetry: Vec<SymmetryRow>,
    pub bounds: Vec<BoundsRow>,
    pub aut_table: Vec<AutTableRow>,
    pub maxcut_table: Vec<MaxcutTableRow>,
    pub family_means: Vec<FamilyMean>,
}

fn sorted_sum(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    xs.into_iter().sum()
}

fn spread(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let xs: Vec<f64> = xs.collect();
    let max = xs.iter().copied().reduce(f64::max)?;
    let min = xs.iter().copied().reduce(f64::min)?;
    Some(max - min)
}

fn big(s: &str) -> Option<BigUint> {
    s.parse().ok()
}

fn big_ratio(a: &BigUint, b: &BigUint) -> f64 {
    // Orders in the report fit comfortably in f64's exponent range.
    let to_f = |x: &BigUint| x.to_string().parse::<f64>().unwrap_or(f64::INFINITY);
    to_f(a) / to_f(b)
}

type Key = (String, String);

pub fn heuristic_report(records: &[MetricsRecord]) -> Result<HeuristicReport> {
    let ok: Vec<&MetricsRecord> = records.iter().filter(|r| !r.is_error()).collect();
    let ps: BTreeSet<usize> = ok.iter().map(|r| r.p).collect();
    if ps.len() < 2 {
        return Err(Error::Core(cutlab_core::Error::InsufficientData(format!(
            "need rows for at least 2 values of p, got {}",
            ps.len()
        ))));
    }

    let mut groups: BTreeMap<Key, Vec<&MetricsRecord>> = BTreeMap::new();
    for r in &ok {
        groups
            .entry((r.graph_id.clone(), r.perturbation.clone()))
            .or_default()
            .push(r);
    }
    // (graph, perturbation, p) -> one row carrying the cell aggregates.
    let mut cells: BTreeMap<(String, String, usize), &MetricsRecord> = BTreeMap::new();
    for r in &ok {
        cells
            .entry((r.graph_id.clone(), r.perturbation.clone(), r.p))
            .and_modify(|c| {
                if r.seed_index < c.seed_index {
                    *c = r;
                }
            })
            .or_insert(r);
    }
    let cell_rows = |key: &Key| -> Vec<&MetricsRecord> {
        cells
            .range((key.0.clone(), key.1.clone(), 0)..=(key.0.clone(), key.1.clone(), usize::MAX))
            .map(|(_, r)| *r)
            .collect()
    };

    let flatness = groups
        .keys()
        .map(|key| {
            let rows = cell_rows(key);
            let i_prime_spread = spread(rows.iter().filter_map(|r| r.i_prime));
            let i_sym_prime_spread = spread(rows.iter().filter_map(|r| r.i_sym_prime));
            Flatness {
                graph_id: key.0.clone(),
                perturbation: key.1.clone(),
                p_values: rows.iter().map(|r| r.p).collect(),
                flat: i_prime_spread.is_some_and(|s| s <= SPREAD_LIMIT),
                i_prime_spread,
                i_sym_prime_spread,
            }
        })
        .collect();

    let base_ar: BTreeMap<(&str, usize, usize), f64> = ok
        .iter()
        .filter(|r| r.perturbation == "base")
        .filter_map(|r| Some(((r.graph_id.as_str(), r.p, r.seed_index), r.ar?)))
        .collect();
    let mut shadow: Vec<ShadowDelta> = ok
        .iter()
        .filter(|r| r.perturbation.starts_with("shadow"))
        .filter_map(|r| {
            let ar_base = *base_ar.get(&(r.graph_id.as_str(), r.p, r.seed_index))?;
            let ar_shadow = r.ar?;
            let delta = (ar_base - ar_shadow).abs();
            let mu_delta = Some((r.mu_base? - r.mu_pert?).abs());
            Some(ShadowDelta {
                graph_id: r.graph_id.clone(),
                perturbation: r.perturbation.clone(),
                p: r.p,
                seed_index: r.seed_index,
                ar_base,
                ar_shadow,
                delta,
                mu_delta,
                within_noise: delta <= AR_NOISE && mu_delta.is_some_and(|d| d <= AR_NOISE),
            })
        })
        .collect();
    shadow.sort_by(|a, b| {
        (&a.graph_id, &a.perturbation, a.p, a.seed_index)
            .cmp(&(&b.graph_id, &b.perturbation, b.p, b.seed_index))
    });

    let symmetry = groups
        .iter()
        .filter_map(|(key, rows)| {
            let first = rows[0];
            let (aut_base, aut_pert) = (first.aut_order_base.clone()?, first.aut_order_pert.clone()?);
            let (b, p) = (big(&aut_base)?, big(&aut_pert)?);
            let deltas: Vec<f64> = cell_rows(key)
                .iter()
                .filter_map(|r| Some(r.mu_pert? - r.mu_base?))
                .collect();
            let count = deltas.len();
            Some(SymmetryRow {
                graph_id: key.0.clone(),
                perturbation: key.1.clone(),
                aut_ratio: big_ratio(&p, &b),
                i_sym: first.i_sym,
                mean_mu_delta: (count > 0).then(|| sorted_sum(deltas) / count as f64),
                doubled: (key.1 == "shadow:2").then(|| p == b * 2u32),
                aut_base,
                aut_pert,
            })
        })
        .collect();

    let bounds = groups
        .iter()
        .filter_map(|(key, rows)| {
            let r = rows[0];
            let b = bounds_from_spectrum(r.n, r.edges, r.rho?, r.lambda_min?, r.maxcut?);
            Some(BoundsRow {
                graph_id: key.0.clone(),
                perturbation: key.1.clone(),
                maxcut: b.maxcut,
                literal: b.literal,
                sound: b.sound,
                literal_violated: b.literal_violated,
                sound_violated: b.sound_violated,
            })
        })
        .collect();

    let mut aut_table: BTreeMap<String, AutTableRow> = BTreeMap::new();
    for (key, rows) in &groups {
        let r = rows[0];
        let entry = aut_table.entry(key.0.clone()).or_insert_with(|| AutTableRow {
            graph_id: key.0.clone(),
            family: r.family.clone(),
            n: 0,
            orders: Vec::new(),
            del_max: None,
        });
        if key.1 == "base" {
            entry.n = r.n;
        }
        if let Some(order) = &r.aut_order_pert {
            entry.orders.push(VariantOrder {
                perturbation: key.1.clone(),
                order: order.clone(),
            });
        }
        if r.aut_del_max.is_some() {
            entry.del_max = r.aut_del_max.clone();
        }
    }

    let maxcut_table = groups
        .iter()
        .filter_map(|(key, rows)| {
            let best_cell = cell_rows(key)
                .into_iter()
                .filter_map(|r| Some((r.mu_pert?, r.p)))
                .max_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
            Some(MaxcutTableRow {
                graph_id: key.0.clone(),
                perturbation: key.1.clone(),
                maxcut: rows[0].maxcut?,
                best_mu: best_cell.map(|c| c.0),
                best_mu_p: best_cell.map(|c| c.1),
                best_ar: rows.iter().filter_map(|r| r.ar).reduce(f64::max),
            })
        })
        .collect();

    let mut by_family: BTreeMap<(String, String, usize), Vec<f64>> = BTreeMap::new();
    for ((_, perturbation, p), r) in &cells {
        if let Some(mu) = r.mu_pert {
            by_family
                .entry((r.family.clone(), perturbation.clone(), *p))
                .or_default()
                .push(mu);
        }
    }
    let family_means = by_family
        .into_iter()
        .map(|((family, perturbation, p), mus)| FamilyMean {
            family,
            perturbation,
            p,
            graphs: mus.len(),
            mean_mu: sorted_sum(mus.clone()) / mus.len() as f64,
        })
        .collect();

    Ok(HeuristicReport {
        thresholds: Thresholds {
            ar_noise: AR_NOISE,
            spread_limit: SPREAD_LIMIT,
        },
        rows: records.len(),
        error_rows: records.len() - ok.len(),
        flatness,
        shadow,
        symmetry,
        bounds,
        aut_table: aut_table.into_values().collect(),
        maxcut_table,
        family_means,
    })
}
