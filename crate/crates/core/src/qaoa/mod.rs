//! Dense statevector QAOA for MaxCut.
//!
//! Basis states are little-endian: bit `i` of the index is the value of
//! qubit (node) `i`. The cost layer is the diagonal `exp(-iγ C)` with `C` the
//! cut size of each basis state; the mixer is `exp(-iβ X)` on every qubit.

mod nelder_mead;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::maxcut::{brute_force_maxcut, mask_cut, CutSolution};
use crate::rng;

pub use nelder_mead::{minimize, Minimum, NelderMeadConfig};

/// Largest graph the simulator accepts.
pub const SIMULATOR_CAP: usize = 16;

/// Slack for expectations that overshoot the exact optimum by rounding.
pub const AR_TOLERANCE: f64 = 1e-9;

const TWO_PI: f64 = 2.0 * PI;

fn wrap(x: f64, period: f64) -> f64 {
    let r = libm::fmod(x, period);
    let r = if r < 0.0 { r + period } else { r };
    if r >= period {
        0.0
    } else {
        r
    }
}

/// Layer angles: `gamma[k] ∈ [0, 2π)`, `beta[k] ∈ [0, π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleSet {
    gamma: Vec<f64>,
    beta: Vec<f64>,
}

impl AngleSet {
    /// Reduces each angle modulo its period. The expectation is unchanged:
    /// cut sizes are integers, and `exp(-i(β+π)X) = -exp(-iβX)`.
    pub fn new(gamma: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        if gamma.len() != beta.len() {
            return Err(Error::LengthMismatch {
                expected: gamma.len(),
                got: beta.len(),
            });
        }
        if gamma.is_empty() {
            return Err(Error::InvalidParameter("need at least one layer".into()));
        }
        if gamma.iter().chain(&beta).any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("angles must be finite".into()));
        }
        Ok(Self {
            gamma: gamma.into_iter().map(|g| wrap(g, TWO_PI)).collect(),
            beta: beta.into_iter().map(|b| wrap(b, PI)).collect(),
        })
    }

    pub fn zeros(p: usize) -> Result<Self> {
        Self::new(vec![0.0; p], vec![0.0; p])
    }

    /// `[γ_1, ..., γ_p, β_1, ..., β_p]`.
    pub fn from_flat(x: &[f64]) -> Result<Self> {
        if x.len() % 2 != 0 {
            return Err(Error::InvalidParameter("odd angle vector".into()));
        }
        let p = x.len() / 2;
        Self::new(x[..p].to_vec(), x[p..].to_vec())
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.gamma.iter().chain(&self.beta).copied().collect()
    }

    pub fn p(&self) -> usize {
        self.gamma.len()
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// Appends an identity layer `γ = β = 0`.
    pub fn extended(&self) -> Self {
        let mut next = self.clone();
        next.gamma.push(0.0);
        next.beta.push(0.0);
        next
    }
}

fn check_size(n: usize) -> Result<()> {
    if n > SIMULATOR_CAP {
        return Err(Error::TooLarge {
            what: "statevector simulation",
            n,
            cap: SIMULATOR_CAP,
        });
    }
    Ok(())
}

/// Cut size of every basis state, as an exact integer.
pub fn cost_levels(g: &Graph) -> Result<Vec<u32>> {
    check_size(g.n())?;
    let adj = g.adjacency_masks();
    Ok((0..1u64 << g.n())
        .map(|x| mask_cut(&adj, x) as u32)
        .collect())
}

/// The cost observable's diagonal.
pub fn build_cost_diagonal(g: &Graph) -> Result<Vec<f64>> {
    Ok(cost_levels(g)?.into_iter().map(f64::from).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|+>^n`.
    pub fn uniform(n: usize) -> Result<Self> {
        check_size(n)?;
        let dim = 1usize << n;
        let a = 1.0 / libm::sqrt(dim as f64);
        Ok(Self {
            n,
            amplitudes: vec![Complex64::new(a, 0.0); dim],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.amplitudes.iter().map(|a| a.norm_sqr()).sum())
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `exp(-iγ C)` for integer cut levels.
    fn apply_cost(&mut self, levels: &[u32], max_level: u32, gamma: f64) {
        let phases: Vec<Complex64> = (0..=max_level)
            .map(|k| {
                let t = -gamma * f64::from(k);
                Complex64::new(libm::cos(t), libm::sin(t))
            })
            .collect();
        for (a, &k) in self.amplitudes.iter_mut().zip(levels) {
            *a *= phases[k as usize];
        }
    }

    /// `exp(-iβ X)` on every qubit.
    fn apply_mixer(&mut self, beta: f64) {
        let (c, s) = (libm::cos(beta), libm::sin(beta));
        let c = Complex64::new(c, 0.0);
        let mis = Complex64::new(0.0, -s);
        for q in 0..self.n {
            let stride = 1usize << q;
            for block in self.amplitudes.chunks_exact_mut(stride << 1) {
                let (lo, hi) = block.split_at_mut(stride);
                for (a0, a1) in lo.iter_mut().zip(hi) {
                    let (x, y) = (*a0, *a1);
                    *a0 = c * x + mis * y;
                    *a1 = mis * x + c * y;
                }
            }
        }
    }
}

/// Precomputed cost levels for repeated evaluation on one graph.
#[derive(Debug, Clone)]
pub struct Simulator {
    n: usize,
    levels: Vec<u32>,
    max_level: u32,
}

impl Simulator {
    pub fn new(g: &Graph) -> Result<Self> {
        let levels = cost_levels(g)?;
        Ok(Self {
            n: g.n(),
            max_level: g.edge_count() as u32,
            levels,
        })
    }

    pub fn evolve(&self, angles: &AngleSet) -> StateVector {
        let mut state = StateVector::uniform(self.n).expect("size checked");
        for (&gamma, &beta) in angles.gamma.iter().zip(&angles.beta) {
            state.apply_cost(&self.levels, self.max_level, gamma);
            state.apply_mixer(beta);
        }
        state
    }

    /// `<ψ|C|ψ>`.
    pub fn expectation(&self, angles: &AngleSet) -> f64 {
        self.expectation_raw(&angles.gamma, &angles.beta)
    }

    fn expectation_raw(&self, gamma: &[f64], beta: &[f64]) -> f64 {
        let mut state = StateVector::uniform(self.n).expect("size checked");
        for (&g, &b) in gamma.iter().zip(beta) {
            state.apply_cost(&self.levels, self.max_level, g);
            state.apply_mixer(b);
        }
        // Rayleigh quotient: dividing by the computed norm cancels the
        // rounding drift of the gates, which otherwise scales with |E|.
        let (mut num, mut den) = (Neumaier::default(), Neumaier::default());
        for (a, &k) in state.amplitudes.iter().zip(&self.levels) {
            let w = a.norm_sqr();
            num.add(w * f64::from(k));
            den.add(w);
        }
        num.total() / den.total()
    }
}

/// Compensated summation.
#[derive(Default)]
struct Neumaier {
    sum: f64,
    carry: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        self.carry += if self.sum.abs() >= x.abs() {
            (self.sum - t) + x
        } else {
            (x - t) + self.sum
        };
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

pub fn evolve(g: &Graph, angles: &AngleSet) -> Result<StateVector> {
    Ok(Simulator::new(g)?.evolve(angles))
}

pub fn expectation(g: &Graph, angles: &AngleSet) -> Result<f64> {
    Ok(Simulator::new(g)?.expectation(angles))
}

/// Gates of one QAOA layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerGates {
    /// One `ZZ` phase per edge.
    pub zz: Vec<(usize, usize)>,
    /// One `RX` per qubit.
    pub rx: Vec<usize>,
}

/// Gate count of the circuit: initial Hadamards, then `p` layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitShape {
    pub qubits: usize,
    pub hadamard: usize,
    pub rx: usize,
    pub zz: usize,
    pub layers: Vec<LayerGates>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShapeDelta {
    pub hadamard: i64,
    pub rx: i64,
    pub zz: i64,
}

impl CircuitShape {
    /// Gate-count change from `self` to `other`.
    pub fn delta(&self, other: &CircuitShape) -> ShapeDelta {
        let d = |a: usize, b: usize| b as i64 - a as i64;
        ShapeDelta {
            hadamard: d(self.hadamard, other.hadamard),
            rx: d(self.rx, other.rx),
            zz: d(self.zz, other.zz),
        }
    }
}

pub fn circuit_shape(g: &Graph, p: usize) -> Result<CircuitShape> {
    if p == 0 {
        return Err(Error::InvalidParameter("p must be >= 1".into()));
    }
    let layer = LayerGates {
        zz: g.edges().to_vec(),
        rx: (0..g.n()).collect(),
    };
    Ok(CircuitShape {
        qubits: g.n(),
        hadamard: g.n(),
        rx: g.n() * p,
        zz: g.edge_count() * p,
        layers: vec![layer; p],
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub nelder_mead: NelderMeadConfig,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            nelder_mead: NelderMeadConfig::default(),
        }
    }
}

/// One local optimization.
#[derive(Debug, Clone, PartialEq)]
pub struct StartOutcome {
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    pub warm: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerTrace {
    /// Index into `starts` of the returned optimum.
    pub best_start: usize,
    pub iterations: usize,
    pub converged: bool,
    pub starts: Vec<StartOutcome>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QaoaRun {
    pub graph_id: String,
    pub p: usize,
    pub angles: AngleSet,
    pub f_star: f64,
    /// Set once the exact MaxCut is known, see [`approximation_ratio`].
    pub ar: Option<f64>,
    pub seed: u64,
    pub restarts: usize,
    pub trace: OptimizerTrace,
}

/// Multi-start maximization of the expectation over `p` layers.
///
/// `restarts` starting points are drawn uniformly from the angle box with the
/// stream seeded by `seed`. A warm start with `p - 1` layers is extended by an
/// identity layer (one with `p` layers is used as is) and run after the
/// random starts. The best final value wins, ties going to the earliest
/// start.
pub fn optimize(
    g: &Graph,
    p: usize,
    seed: u64,
    restarts: usize,
    warm_start: Option<&AngleSet>,
    config: &OptimizerConfig,
) -> Result<QaoaRun> {
    if p == 0 {
        return Err(Error::InvalidParameter("p must be >= 1".into()));
    }
    if restarts == 0 {
        return Err(Error::InvalidParameter("restarts must be >= 1".into()));
    }
    let sim = Simulator::new(g)?;
    let mut stream = rng::stream(seed);
    let mut starts: Vec<(Vec<f64>, bool)> = (0..restarts)
        .map(|_| {
            let gamma: Vec<f64> = (0..p).map(|_| stream.gen::<f64>() * TWO_PI).collect();
            let beta: Vec<f64> = (0..p).map(|_| stream.gen::<f64>() * PI).collect();
            (gamma.into_iter().chain(beta).collect(), false)
        })
        .collect();
    if let Some(w) = warm_start {
        let w = match w.p() {
            q if q + 1 == p => w.extended(),
            q if q == p => w.clone(),
            q => {
                return Err(Error::LengthMismatch {
                    expected: p - 1,
                    got: q,
                })
            }
        };
        starts.push((w.to_flat(), true));
    }

    let mut best: Option<(usize, Vec<f64>, f64)> = None;
    let mut outcomes = Vec::with_capacity(starts.len());
    for (i, (x0, warm)) in starts.iter().enumerate() {
        let m = minimize(
            |x| -sim.expectation_raw(&x[..p], &x[p..]),
            x0,
            &config.nelder_mead,
        );
        let value = -m.value;
        outcomes.push(StartOutcome {
            value,
            iterations: m.iterations,
            evaluations: m.evaluations,
            converged: m.converged,
            warm: *warm,
        });
        if best.as_ref().map_or(true, |b| value > b.2) {
            best = Some((i, m.x, value));
        }
    }
    let (best_start, x, f_star) = best.expect("at least one start");
    Ok(QaoaRun {
        graph_id: String::new(),
        p,
        angles: AngleSet::from_flat(&x)?,
        f_star,
        ar: None,
        seed,
        restarts,
        trace: OptimizerTrace {
            best_start,
            iterations: outcomes[best_start].iterations,
            converged: outcomes[best_start].converged,
            starts: outcomes,
        },
    })
}

/// `F* / MaxCut`, clamped to 1 when rounding pushes it just above.
pub fn approximation_ratio(run: &QaoaRun, opt: &CutSolution) -> Result<f64> {
    ratio(run.f_star, opt.value)
}

pub fn ratio(f: f64, maxcut: usize) -> Result<f64> {
    if maxcut == 0 {
        return Err(Error::ZeroCut);
    }
    let r = f / maxcut as f64;
    if r > 1.0 + AR_TOLERANCE {
        return Err(Error::RelationViolated(alloc::format!(
            "expectation {f} exceeds MaxCut {maxcut}"
        )));
    }
    Ok(r.min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transfer {
    pub expectation: f64,
    pub ar: f64,
}

/// Evaluates the source run's angles on `target`.
pub fn transfer_parameters(source: &QaoaRun, target: &Graph) -> Result<Transfer> {
    let expectation = expectation(target, &source.angles)?;
    let maxcut = brute_force_maxcut(target)?.value;
    Ok(Transfer {
        expectation,
        ar: ratio(expectation, maxcut)?,
    })
}
