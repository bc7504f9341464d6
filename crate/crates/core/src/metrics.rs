//! Aggregate metrics over QAOA runs and symmetry counts.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Mean and population standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
    pub count: usize,
}

/// Mean approximation ratio over seeds, with its spread.
pub fn mean_ar(ars: &[f64]) -> Result<Summary> {
    if ars.is_empty() {
        return Err(Error::EmptyInput);
    }
    let count = ars.len();
    let mean = ars.iter().sum::<f64>() / count as f64;
    let var = ars.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / count as f64;
    Ok(Summary {
        mean,
        std: libm::sqrt(var),
        count,
    })
}

/// `μ_base / μ_pert`.
pub fn quotient_i_prime(mu_base: f64, mu_pert: f64) -> Result<f64> {
    if !(mu_pert > 0.0) {
        return Err(Error::DivisionByZero("mean ratio of the perturbed graph"));
    }
    Ok(mu_base / mu_pert)
}

/// `a / b` for big integers, reduced before conversion.
fn big_ratio(a: &BigUint, b: &BigUint) -> f64 {
    let g = a.gcd(b);
    let (a, b) = (a / &g, b / &g);
    match (a.to_f64(), b.to_f64()) {
        (Some(x), Some(y)) if x.is_finite() && y.is_finite() => x / y,
        // Scale both down to the same magnitude when either overflows.
        _ => {
            let shift = a.bits().max(b.bits()).saturating_sub(1000);
            let x = (a >> shift).to_f64().unwrap_or(f64::INFINITY);
            let y = (b >> shift).to_f64().unwrap_or(f64::INFINITY);
            x / y
        }
    }
}

/// `(MaxCut_base · |Aut_pert|) / (MaxCut_pert · |Aut_base|)`.
pub fn symmetry_index(
    maxcut_base: usize,
    maxcut_pert: usize,
    aut_base: &BigUint,
    aut_pert: &BigUint,
) -> Result<f64> {
    if maxcut_pert == 0 {
        return Err(Error::DivisionByZero("MaxCut of the perturbed graph"));
    }
    if aut_base.is_zero() {
        return Err(Error::DivisionByZero("automorphism count of the base graph"));
    }
    let num = BigUint::from(maxcut_base) * aut_pert;
    let den = BigUint::from(maxcut_pert) * aut_base;
    Ok(big_ratio(&num, &den))
}

/// `(μ_base · |Aut_pert|) / (μ_pert · |Aut_base|)`.
pub fn approx_symmetry_index(
    mu_base: f64,
    mu_pert: f64,
    aut_base: &BigUint,
    aut_pert: &BigUint,
) -> Result<f64> {
    if aut_base.is_zero() {
        return Err(Error::DivisionByZero("automorphism count of the base graph"));
    }
    Ok(quotient_i_prime(mu_base, mu_pert)? * big_ratio(aut_pert, aut_base))
}
