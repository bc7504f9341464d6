//! Result files: the CSV, a JSON summary and four SVG charts.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::heuristics::heuristic_report;
use crate::record::{save_csv, MetricsRecord};
use crate::svg::{render, Group, Panel, Series};

pub const CSV_FILE: &str = "results.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const PLOT_FILES: [&str; 4] = [
    "i_prime_vs_p.svg",
    "symmetry_indices.svg",
    "i_prime_by_perturbation.svg",
    "symmetry_counts.svg",
];

/// Labels in order of first appearance.
fn ordered<'a>(labels: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for l in labels {
        if !out.iter().any(|o| o == l) {
            out.push(l.to_string());
        }
    }
    out
}

/// The lowest-seed row of each (graph, perturbation, p) cell; cell
/// aggregates are identical across its seeds.
fn cells(records: &[MetricsRecord]) -> BTreeMap<(&str, &str, usize), &MetricsRecord> {
    let mut out: BTreeMap<(&str, &str, usize), &MetricsRecord> = BTreeMap::new();
    for r in records.iter().filter(|r| !r.is_error()) {
        let key = (r.graph_id.as_str(), r.perturbation.as_str(), r.p);
        match out.get(&key) {
            Some(c) if c.seed_index <= r.seed_index => {}
            _ => {
                out.insert(key, r);
            }
        }
    }
    out
}

fn mean(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    Some(v.iter().sum::<f64>() / v.len() as f64)
}

fn log10_order(s: &str) -> Option<f64> {
    // Digit count plus the leading digits; exact enough for a chart.
    let digits = s.len();
    let lead: f64 = s.get(..digits.min(15))?.parse().ok()?;
    Some(lead.log10() + digits.saturating_sub(15) as f64)
}

/// Renders the four charts, in `PLOT_FILES` order.
pub fn plots(records: &[MetricsRecord]) -> Result<Vec<String>> {
    if records.is_empty() {
        return Err(Error::Core(cutlab_core::Error::InsufficientData(
            "no records to plot".into(),
        )));
    }
    let graphs = ordered(records.iter().map(|r| r.graph_id.as_str()));
    let perturbations = ordered(records.iter().map(|r| r.perturbation.as_str()));
    let families = ordered(records.iter().map(|r| r.family.as_str()));
    let family_of: BTreeMap<&str, &str> = records
        .iter()
        .map(|r| (r.graph_id.as_str(), r.family.as_str()))
        .collect();
    let cells = cells(records);
    let perturbed: Vec<&String> = perturbations.iter().filter(|p| *p != "base").collect();
    let rows_of = |g: &str, pert: &str| -> Vec<&MetricsRecord> {
        cells
            .range((g, pert, 0)..=(g, pert, usize::MAX))
            .map(|(_, r)| *r)
            .collect()
    };

    let lines = perturbed
        .iter()
        .map(|pert| Panel::Lines {
            title: format!("I' across p, {pert}"),
            x_label: "p".into(),
            y_label: "I' = mu_base / mu_pert".into(),
            series: graphs
                .iter()
                .map(|g| Series {
                    label: g.clone(),
                    points: rows_of(g, pert)
                        .iter()
                        .filter_map(|r| Some((r.p as f64, r.i_prime?)))
                        .collect(),
                })
                .filter(|s| !s.points.is_empty())
                .collect(),
        })
        .collect::<Vec<_>>();

    let indices = perturbed
        .iter()
        .map(|pert| Panel::Bars {
            title: format!("Symmetry indices, {pert}"),
            y_label: "index".into(),
            bar_labels: vec!["I_sym".into(), "I'_sym at largest p".into()],
            groups: graphs
                .iter()
                .map(|g| {
                    let rows = rows_of(g, pert);
                    Group {
                        label: g.clone(),
                        values: vec![
                            rows.first().and_then(|r| r.i_sym),
                            rows.last().and_then(|r| r.i_sym_prime),
                        ],
                    }
                })
                .collect(),
        })
        .collect::<Vec<_>>();

    let by_family = |value: &dyn Fn(&str, &str) -> Option<f64>,
                     title: &str,
                     y_label: &str,
                     bars: &[String]| {
        families
            .iter()
            .map(|fam| Panel::Bars {
                title: format!("{title}, {fam}"),
                y_label: y_label.into(),
                bar_labels: bars.to_vec(),
                groups: graphs
                    .iter()
                    .filter(|g| family_of.get(g.as_str()) == Some(&fam.as_str()))
                    .map(|g| Group {
                        label: g.clone(),
                        values: bars.iter().map(|b| value(g, b)).collect(),
                    })
                    .collect(),
            })
            .collect::<Vec<_>>()
    };
    let perturbed_labels: Vec<String> = perturbed.iter().map(|s| s.to_string()).collect();
    let i_prime_bars = by_family(
        &|g, pert| {
            let xs: Vec<f64> = rows_of(g, pert).iter().filter_map(|r| r.i_prime).collect();
            mean(&xs)
        },
        "Mean I' over p",
        "I'",
        &perturbed_labels,
    );
    let counts = by_family(
        &|g, pert| {
            let first = rows_of(g, pert).into_iter().next()?;
            log10_order(first.aut_order_pert.as_deref()?)
        },
        "Automorphisms",
        "log10 |Aut|",
        &perturbations,
    );

    Ok(vec![
        render("I' against the number of layers", &lines, 2),
        render("Symmetry index and approximate index", &indices, 2),
        render("I' per perturbation", &i_prime_bars, 2),
        render("Automorphism group orders", &counts, 2),
    ])
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn write_plots(records: &[MetricsRecord], dir: &Path) -> Result<Vec<PathBuf>> {
    let docs = plots(records)?;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    PLOT_FILES
        .iter()
        .zip(docs)
        .map(|(name, doc)| {
            let path = dir.join(name);
            write(&path, &doc)?;
            Ok(path)
        })
        .collect()
}

/// The summary as pretty JSON, or `None` when the rows cover a single p.
pub fn summary_json(records: &[MetricsRecord]) -> Result<Option<String>> {
    match heuristic_report(records) {
        Ok(report) => Ok(Some(serde_json::to_string_pretty(&report)? + "\n")),
        Err(Error::Core(cutlab_core::Error::InsufficientData(_))) => Ok(None),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Emitted {
    pub csv: PathBuf,
    pub summary: Option<PathBuf>,
    pub plots: Vec<PathBuf>,
}

/// Writes the CSV, the summary and the charts into `dir`.
pub fn emit_report(records: &[MetricsRecord], dir: &Path) -> Result<Emitted> {
    if records.is_empty() {
        return Err(Error::Core(cutlab_core::Error::InsufficientData(
            "no records".into(),
        )));
    }
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let csv = dir.join(CSV_FILE);
    save_csv(records, &csv)?;
    let summary = match summary_json(records)? {
        Some(text) => {
            let path = dir.join(SUMMARY_FILE);
            write(&path, &text)?;
            Some(path)
        }
        None => None,
    };
    let plots = write_plots(records, dir)?;
    Ok(Emitted { csv, summary, plots })
}
