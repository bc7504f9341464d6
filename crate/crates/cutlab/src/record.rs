//! Experiment rows and their CSV form.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One (graph, perturbation, p, seed) cell of an experiment.
///
/// Automorphism orders are decimal strings since they can exceed `u64`.
/// Fields that could not be computed are empty in the CSV; the reason is in
/// `error`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub graph_id: String,
    pub family: String,
    /// Nodes of the graph this cell simulates.
    pub n: usize,
    pub edges: usize,
    /// Variant token from the config (`base`, `shadow:2`, `delete`, ...).
    pub perturbation: String,
    /// The resolved perturbation history, e.g. `delete:2-5`.
    pub perturbation_detail: Option<String>,
    pub p: usize,
    pub seed_index: usize,
    pub seed: u64,
    pub restarts: usize,
    pub f_star: Option<f64>,
    pub maxcut: Option<usize>,
    pub ar: Option<f64>,
    pub aut_order_base: Option<String>,
    pub aut_order_pert: Option<String>,
    /// Closed-form order where a prediction rule applies.
    pub aut_predicted: Option<String>,
    /// Largest order over every single-edge deletion of the base graph.
    pub aut_del_max: Option<String>,
    pub mu_base: Option<f64>,
    pub mu_pert: Option<f64>,
    pub sigma_pert: Option<f64>,
    pub i_prime: Option<f64>,
    pub i_sym: Option<f64>,
    pub i_sym_prime: Option<f64>,
    /// AR on this cell's graph with the base graph's optimal angles.
    pub ar_transfer: Option<f64>,
    pub rho: Option<f64>,
    pub lambda_min: Option<f64>,
    pub runtime_ms: Option<u64>,
    pub error: Option<String>,
}

/// Column names in CSV order.
pub const COLUMNS: [&str; 28] = [
    "graph_id",
    "family",
    "n",
    "edges",
    "perturbation",
    "perturbation_detail",
    "p",
    "seed_index",
    "seed",
    "restarts",
    "f_star",
    "maxcut",
    "ar",
    "aut_order_base",
    "aut_order_pert",
    "aut_predicted",
    "aut_del_max",
    "mu_base",
    "mu_pert",
    "sigma_pert",
    "i_prime",
    "i_sym",
    "i_sym_prime",
    "ar_transfer",
    "rho",
    "lambda_min",
    "runtime_ms",
    "error",
];

impl MetricsRecord {
    pub fn is_error(&self) -> bool {
        self.error.is_some()
    }
}

pub fn write_csv<W: Write>(records: &[MetricsRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if records.is_empty() {
        w.write_record(header())?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<MetricsRecord>> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    if headers.iter().ne(header()) {
        return Err(Error::Format(format!(
            "unexpected CSV columns: {}",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    r.deserialize().map(|row| Ok(row?)).collect()
}

pub fn to_csv_string(records: &[MetricsRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(records, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}

pub fn save_csv(records: &[MetricsRecord], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(records, std::io::BufWriter::new(file))
}

pub fn load_csv(path: &Path) -> Result<Vec<MetricsRecord>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(std::io::BufReader::new(file))
}

fn header() -> impl Iterator<Item = &'static str> {
    COLUMNS.into_iter()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn sample() -> MetricsRecord {
        MetricsRecord {
            graph_id: "K4".into(),
            family: "complete".into(),
            n: 6,
            edges: 6,
            perturbation: "shadow:2".into(),
            perturbation_detail: Some("shadow:2".into()),
            p: 2,
            seed_index: 1,
            seed: u64::MAX - 7,
            restarts: 4,
            f_star: Some(3.9999999871234),
            maxcut: Some(4),
            ar: Some(0.1 + 0.2),
            aut_order_base: Some("24".into()),
            aut_order_pert: Some("48".into()),
            aut_predicted: Some("48".into()),
            aut_del_max: None,
            mu_base: Some(0.99),
            mu_pert: Some(1.0 / 3.0),
            sigma_pert: Some(0.0),
            i_prime: Some(2.97),
            i_sym: Some(2.0),
            i_sym_prime: Some(5.94),
            ar_transfer: Some(1e-300),
            rho: Some(3.0000000000000004),
            lambda_min: Some(-1.0),
            runtime_ms: None,
            error: None,
        }
    }

    #[test]
    fn header_matches_fields() {
        let text = to_csv_string(&[sample()]).unwrap();
        assert_eq!(text.lines().next().unwrap(), COLUMNS.join(","));
        assert_eq!(to_csv_string(&[]).unwrap().trim_end(), COLUMNS.join(","));
    }

    #[test]
    fn round_trip() {
        let mut failed = sample();
        failed.f_star = None;
        failed.ar = None;
        failed.error = Some("TooLarge: too big, really".into());
        failed.perturbation_detail = None;
        let records = vec![sample(), failed];
        let text = to_csv_string(&records).unwrap();
        assert_eq!(read_csv(text.as_bytes()).unwrap(), records);
    }

    #[test]
    fn rejects_foreign_columns() {
        assert!(read_csv("a,b\n1,2\n".as_bytes()).is_err());
    }
}
