//! One run of exact (phase-matched) amplitude amplification.
//!
//! A run applies `J + 1` iterations of
//!
//! ```text
//! Q = -[I - (1 - e^{i phi}) |psi0><psi0|] . [I - (1 - e^{i phi}) P_marked]
//! ```
//!
//! to the uniform superposition `|psi0>`, with
//!
//! ```text
//! beta = asin(sqrt(m / N))
//! J    = ceil((pi/2 - beta) / (2 beta))
//! phi  = 2 asin(sin(pi / (4J + 6)) / sin beta)
//! ```
//!
//! after which all amplitude sits on the marked states. The overall minus
//! sign of the diffusion is a global phase and is dropped.
//!
//! Both operators preserve the span of the uniform marked superposition and
//! the uniform unmarked superposition, so every run can be simulated either
//! on the full statevector or on that two-dimensional subspace.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::ProblemInstance;

/// Everything needed to run one exact search on an `(N, m)` instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LongParams {
    pub n_states: usize,
    pub n_marked: usize,
    /// `asin(sqrt(m / N))`, in `(0, pi/2]`.
    pub beta: f64,
    pub j: u64,
    /// `J + 1`; also the oracle queries spent by one run. Zero when `m = N`.
    pub iterations: u64,
    /// Matched phase, in `(0, pi]`. Unused (zero) when `iterations == 0`.
    pub phi: f64,
}

impl LongParams {
    pub fn for_counts(n_states: usize, n_marked: usize) -> Result<Self> {
        if n_states == 0 || n_marked == 0 || n_marked > n_states {
            return Err(Error::InvalidProblem(format!(
                "need 1 <= m <= N, got m={n_marked}, N={n_states}"
            )));
        }
        if n_marked == n_states {
            return Ok(Self {
                n_states,
                n_marked,
                beta: FRAC_PI_2,
                j: 0,
                iterations: 0,
                phi: 0.0,
            });
        }
        let beta = (n_marked as f64 / n_states as f64).sqrt().asin();
        // Any J at or above the threshold is exact; the slack only absorbs
        // rounding when the threshold is an integer.
        let threshold = (FRAC_PI_2 - beta) / (2.0 * beta);
        let j = (threshold - 1e-12).ceil().max(0.0) as u64;
        let ratio = (PI / (4 * j + 6) as f64).sin() / beta.sin();
        let phi = 2.0 * ratio.min(1.0).asin();
        Ok(Self {
            n_states,
            n_marked,
            beta,
            j,
            iterations: j + 1,
            phi,
        })
    }

    pub fn matches(&self, problem: &ProblemInstance) -> bool {
        self.n_states == problem.n_states() && self.n_marked == problem.n_marked()
    }

    pub(crate) fn check(&self, problem: &ProblemInstance) -> Result<()> {
        if self.matches(problem) {
            Ok(())
        } else {
            Err(Error::ParamsMismatch {
                params_states: self.n_states,
                params_marked: self.n_marked,
                states: problem.n_states(),
                marked: problem.n_marked(),
            })
        }
    }
}

pub fn derive_long_params(problem: &ProblemInstance) -> LongParams {
    LongParams::for_counts(problem.n_states(), problem.n_marked())
        .expect("a valid problem always yields parameters")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    /// One amplitude per basis state.
    Full,
    /// Amplitudes on the normalized uniform marked / unmarked superpositions.
    Subspace,
}

#[derive(Debug, Clone, PartialEq)]
pub enum QuantumState {
    Full(Vec<Complex64>),
    Subspace {
        marked: Complex64,
        unmarked: Complex64,
    },
}

/// Components of the uniform superposition along the marked and unmarked
/// axes: `(sqrt(m/N), sqrt((N-m)/N))`.
fn uniform_components(problem: &ProblemInstance) -> (f64, f64) {
    let n = problem.n_states() as f64;
    let m = problem.n_marked() as f64;
    ((m / n).sqrt(), ((n - m) / n).sqrt())
}

pub fn prepare_uniform(problem: &ProblemInstance, representation: Representation) -> QuantumState {
    match representation {
        Representation::Full => {
            let amp = 1.0 / (problem.n_states() as f64).sqrt();
            QuantumState::Full(vec![Complex64::new(amp, 0.0); problem.n_states()])
        }
        Representation::Subspace => {
            let (a, b) = uniform_components(problem);
            QuantumState::Subspace {
                marked: Complex64::new(a, 0.0),
                unmarked: Complex64::new(b, 0.0),
            }
        }
    }
}

impl QuantumState {
    pub fn representation(&self) -> Representation {
        match self {
            QuantumState::Full(_) => Representation::Full,
            QuantumState::Subspace { .. } => Representation::Subspace,
        }
    }

    /// Multiplies every marked amplitude by `e^{i phi}`.
    pub fn apply_oracle_phase(&mut self, problem: &ProblemInstance, phi: f64) {
        let rot = Complex64::from_polar(1.0, phi);
        match self {
            QuantumState::Full(amps) => {
                for &t in problem.marked() {
                    amps[t] *= rot;
                }
            }
            QuantumState::Subspace { marked, .. } => *marked *= rot,
        }
    }

    /// Applies `I - (1 - e^{i phi}) |psi0><psi0|`.
    pub fn apply_diffusion_phase(&mut self, problem: &ProblemInstance, phi: f64) {
        let c = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, phi);
        match self {
            QuantumState::Full(amps) => {
                let inv_sqrt_n = 1.0 / (amps.len() as f64).sqrt();
                let overlap: Complex64 = amps.iter().sum::<Complex64>() * inv_sqrt_n;
                let shift = c * overlap * inv_sqrt_n;
                for a in amps.iter_mut() {
                    *a -= shift;
                }
            }
            QuantumState::Subspace { marked, unmarked } => {
                let (sa, sb) = uniform_components(problem);
                let overlap = *marked * sa + *unmarked * sb;
                *marked -= c * overlap * sa;
                *unmarked -= c * overlap * sb;
            }
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        match self {
            QuantumState::Full(amps) => amps.iter().map(|a| a.norm_sqr()).sum(),
            QuantumState::Subspace { marked, unmarked } => marked.norm_sqr() + unmarked.norm_sqr(),
        }
    }

    /// Total probability of measuring some marked state.
    pub fn marked_probability(&self, problem: &ProblemInstance) -> f64 {
        match self {
            QuantumState::Full(amps) => problem.marked().iter().map(|&t| amps[t].norm_sqr()).sum(),
            QuantumState::Subspace { marked, .. } => marked.norm_sqr(),
        }
    }

    /// Projection onto the (marked, unmarked) uniform-superposition basis.
    pub fn subspace_components(&self, problem: &ProblemInstance) -> (Complex64, Complex64) {
        match self {
            QuantumState::Full(amps) => {
                let m = problem.n_marked();
                let rest = problem.n_states() - m;
                let marked_sum: Complex64 = problem.marked().iter().map(|&t| amps[t]).sum();
                let total: Complex64 = amps.iter().sum();
                let a = marked_sum / (m as f64).sqrt();
                let b = if rest == 0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    (total - marked_sum) / (rest as f64).sqrt()
                };
                (a, b)
            }
            QuantumState::Subspace { marked, unmarked } => (*marked, *unmarked),
        }
    }

    /// Upper bound on the largest pairwise difference between marked
    /// amplitudes (twice the largest deviation from their mean). Always zero
    /// in the subspace form.
    pub fn marked_amplitude_spread(&self, problem: &ProblemInstance) -> f64 {
        match self {
            QuantumState::Full(amps) => {
                let m = problem.n_marked() as f64;
                let mean: Complex64 = problem.marked().iter().map(|&t| amps[t]).sum::<Complex64>() / m;
                2.0 * problem
                    .marked()
                    .iter()
                    .map(|&t| (amps[t] - mean).norm())
                    .fold(0.0, f64::max)
            }
            QuantumState::Subspace { .. } => 0.0,
        }
    }

    /// Measures the state in the computational basis given a uniform variate
    /// `u` in `[0, 1)`, by inverse CDF over the squared magnitudes.
    pub fn measure(&self, problem: &ProblemInstance, u: f64) -> usize {
        match self {
            QuantumState::Full(amps) => {
                let total: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
                let target = u * total;
                let mut acc = 0.0;
                let mut last_nonzero = 0;
                for (i, a) in amps.iter().enumerate() {
                    let p = a.norm_sqr();
                    if p > 0.0 {
                        last_nonzero = i;
                    }
                    acc += p;
                    if acc > target {
                        return i;
                    }
                }
                last_nonzero
            }
            QuantumState::Subspace { marked, unmarked } => {
                // Amplitude is uniform within each block, so pick the block
                // by weight and then a member uniformly.
                let pm = marked.norm_sqr();
                let total = pm + unmarked.norm_sqr();
                let target = u * total;
                let m = problem.n_marked();
                let rest = problem.n_states() - m;
                if target < pm || rest == 0 {
                    let k = ((target / pm) * m as f64) as usize;
                    problem.sorted_marked()[k.min(m - 1)]
                } else {
                    let k = (((target - pm) / (total - pm)) * rest as f64) as usize;
                    problem.nth_unmarked(k.min(rest - 1))
                }
            }
        }
    }
}

/// A state being searched, together with the number of oracle calls spent
/// on it so far.
#[derive(Debug, Clone)]
pub struct SearchRegister<'p> {
    problem: &'p ProblemInstance,
    state: QuantumState,
    queries: u64,
}

impl<'p> SearchRegister<'p> {
    pub fn uniform(problem: &'p ProblemInstance, representation: Representation) -> Self {
        Self {
            problem,
            state: prepare_uniform(problem, representation),
            queries: 0,
        }
    }

    /// One oracle call.
    pub fn apply_oracle_phase(&mut self, phi: f64) {
        self.state.apply_oracle_phase(self.problem, phi);
        self.queries += 1;
    }

    pub fn apply_diffusion_phase(&mut self, phi: f64) {
        self.state.apply_diffusion_phase(self.problem, phi);
    }

    /// Oracle then diffusion, both with phase `phi`.
    pub fn iterate(&mut self, phi: f64) {
        self.apply_oracle_phase(phi);
        self.apply_diffusion_phase(phi);
    }

    pub fn state(&self) -> &QuantumState {
        &self.state
    }

    pub fn into_state(self) -> QuantumState {
        self.state
    }

    pub fn queries(&self) -> u64 {
        self.queries
    }
}

/// Runs all iterations of one search and returns the final register.
pub fn evolve<'p>(
    problem: &'p ProblemInstance,
    params: &LongParams,
    representation: Representation,
) -> Result<SearchRegister<'p>> {
    params.check(problem)?;
    let mut reg = SearchRegister::uniform(problem, representation);
    for _ in 0..params.iterations {
        reg.iterate(params.phi);
    }
    Ok(reg)
}

/// One full run on the statevector followed by a measurement.
/// Returns `(measured_index, queries_used)`.
pub fn run_long_once<R: Rng + ?Sized>(
    problem: &ProblemInstance,
    params: &LongParams,
    rng: &mut R,
) -> Result<(usize, u64)> {
    run_long_once_in(problem, params, Representation::Full, rng)
}

pub fn run_long_once_in<R: Rng + ?Sized>(
    problem: &ProblemInstance,
    params: &LongParams,
    representation: Representation,
    rng: &mut R,
) -> Result<(usize, u64)> {
    let reg = evolve(problem, params, representation)?;
    let u: f64 = rng.random();
    Ok((reg.state().measure(problem, u), reg.queries()))
}

/// Probability that one run ends on a marked state (no sampling).
pub fn success_probability(problem: &ProblemInstance, params: &LongParams) -> Result<f64> {
    success_probability_in(problem, params, Representation::Subspace)
}

pub fn success_probability_in(
    problem: &ProblemInstance,
    params: &LongParams,
    representation: Representation,
) -> Result<f64> {
    let reg = evolve(problem, params, representation)?;
    Ok(reg.state().marked_probability(problem))
}

/// Marked-state probability after each of `iterations` iterations with a
/// fixed phase; element 0 is the initial state.
pub fn success_trajectory(problem: &ProblemInstance, phi: f64, iterations: u64) -> Vec<f64> {
    let mut state = prepare_uniform(problem, Representation::Subspace);
    let mut out = Vec::with_capacity(iterations as usize + 1);
    out.push(state.marked_probability(problem));
    for _ in 0..iterations {
        state.apply_oracle_phase(problem, phi);
        state.apply_diffusion_phase(problem, phi);
        out.push(state.marked_probability(problem));
    }
    out
}

/// One `(N, m)` cell of the exactness survey.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactnessCase {
    pub n_states: usize,
    pub n_marked: usize,
    pub iterations: u64,
    pub success_full: f64,
    pub success_subspace: f64,
    /// Largest marked-amplitude spread seen across all iterations (full form).
    pub symmetry_spread: f64,
    /// Largest `|1 - norm|` seen across all operator applications (both forms).
    pub norm_drift: f64,
}

impl ExactnessCase {
    pub fn deviation(&self) -> f64 {
        (1.0 - self.success_full)
            .abs()
            .max((1.0 - self.success_subspace).abs())
    }
}

/// Marked counts surveyed for a given `N`: `1, 2, 3, N/4, N/2, N`, deduplicated.
pub fn survey_marked_counts(n_states: usize) -> Vec<usize> {
    let mut ms: Vec<usize> = [1, 2, 3, n_states / 4, n_states / 2, n_states]
        .into_iter()
        .filter(|&m| m >= 1 && m <= n_states)
        .collect();
    ms.sort_unstable();
    ms.dedup();
    ms
}

/// Runs one exact search per representation and records how close it comes
/// to certainty.
pub fn exactness_case(n_states: usize, n_marked: usize) -> Result<ExactnessCase> {
    let problem = ProblemInstance::with_marked_count(n_states, n_marked, 0.5)?;
    let params = derive_long_params(&problem);
    let mut drift = 0f64;
    let mut spread = 0f64;

    let mut full = SearchRegister::uniform(&problem, Representation::Full);
    let mut sub = SearchRegister::uniform(&problem, Representation::Subspace);
    for _ in 0..params.iterations {
        for reg in [&mut full, &mut sub] {
            reg.apply_oracle_phase(params.phi);
            drift = drift.max((1.0 - reg.state().norm_sqr()).abs());
            reg.apply_diffusion_phase(params.phi);
            drift = drift.max((1.0 - reg.state().norm_sqr()).abs());
        }
        spread = spread.max(full.state().marked_amplitude_spread(&problem));
    }
    Ok(ExactnessCase {
        n_states,
        n_marked,
        iterations: params.iterations,
        success_full: full.state().marked_probability(&problem),
        success_subspace: sub.state().marked_probability(&problem),
        symmetry_spread: spread,
        norm_drift: drift,
    })
}

/// [`exactness_case`] for every `N = 2^k`, `4 <= N <= max_n`, and the
/// marked counts of [`survey_marked_counts`].
pub fn exactness_survey(max_n: usize) -> Result<Vec<ExactnessCase>> {
    use rayon::prelude::*;
    let cells: Vec<(usize, usize)> = (2..usize::BITS)
        .map(|k| 1usize << k)
        .take_while(|&n| n <= max_n)
        .flat_map(|n| survey_marked_counts(n).into_iter().map(move |m| (n, m)))
        .collect();
    cells
        .into_par_iter()
        .map(|(n, m)| exactness_case(n, m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn problem(n: usize, m: usize) -> ProblemInstance {
        ProblemInstance::with_marked_count(n, m, 0.01).unwrap()
    }

    #[test]
    fn all_marked_needs_no_iterations() {
        let p = derive_long_params(&problem(4, 4));
        assert_eq!(p.iterations, 0);
        assert_eq!(p.j, 0);
        assert_abs_diff_eq!(p.beta, FRAC_PI_2);
    }

    #[test]
    fn params_for_single_target_in_four() {
        let p = derive_long_params(&problem(4, 1));
        assert_abs_diff_eq!(p.beta, PI / 6.0, epsilon = 1e-15);
        assert_eq!(p.j, 1);
        assert_eq!(p.iterations, 2);
        // 2 asin(sin(pi/10) / 0.5), evaluated independently.
        assert_abs_diff_eq!(p.phi, 1.3324788649850303, epsilon = 1e-12);
    }

    #[test]
    fn params_for_four_targets_in_1024() {
        let p = derive_long_params(&problem(1024, 4));
        assert_abs_diff_eq!(p.beta, (1.0f64 / 16.0).asin(), epsilon = 1e-15);
        assert_abs_diff_eq!(p.beta, 0.06254076179649139, epsilon = 1e-15);
        assert_eq!(p.j, 13);
        assert_eq!(p.iterations, 14);
        let grover = PI / 4.0 * (1024.0f64 / 4.0).sqrt();
        assert!((p.iterations as f64 - grover).abs() <= 2.0);
    }

    #[test]
    fn phase_stays_well_defined() {
        for n in [2usize, 3, 5, 16, 100, 1000, 4096] {
            for m in 1..n.min(40) {
                let p = LongParams::for_counts(n, m).unwrap();
                assert!(p.beta > 0.0 && p.beta <= FRAC_PI_2);
                assert!((PI / (4 * p.j + 6) as f64).sin() <= p.beta.sin() + 1e-15);
                assert!(p.phi > 0.0 && p.phi <= PI, "n={n} m={m} phi={}", p.phi);
            }
        }
    }

    #[test]
    fn uniform_states() {
        let p = problem(4, 1);
        match prepare_uniform(&p, Representation::Full) {
            QuantumState::Full(a) => {
                assert!(a.iter().all(|z| (*z - Complex64::new(0.5, 0.0)).norm() < 1e-15))
            }
            _ => unreachable!(),
        }
        let (a, b) = prepare_uniform(&p, Representation::Subspace).subspace_components(&p);
        assert_abs_diff_eq!(a.re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(b.re, 3f64.sqrt() / 2.0, epsilon = 1e-15);
        let p = problem(1024, 4);
        let (a, _) = prepare_uniform(&p, Representation::Subspace).subspace_components(&p);
        assert_abs_diff_eq!(a.re, 1.0 / 16.0, epsilon = 1e-15);
    }

    #[test]
    fn zero_phase_oracle_is_identity_and_pi_negates() {
        let p = problem(8, 3);
        let s0 = prepare_uniform(&p, Representation::Full);
        let mut s = s0.clone();
        s.apply_oracle_phase(&p, 0.0);
        assert_eq!(s, s0);
        s.apply_oracle_phase(&p, PI);
        let (QuantumState::Full(a), QuantumState::Full(b)) = (&s, &s0) else {
            unreachable!()
        };
        for i in 0..8 {
            let expect = if p.is_marked(i) { -b[i] } else { b[i] };
            assert!((a[i] - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn zero_phase_diffusion_is_identity() {
        let p = problem(8, 3);
        let mut s = prepare_uniform(&p, Representation::Full);
        s.apply_oracle_phase(&p, 0.7);
        let before = s.clone();
        s.apply_diffusion_phase(&p, 0.0);
        assert_eq!(s, before);
    }

    #[test]
    fn pi_diffusion_inverts_about_mean() {
        let p = problem(8, 2);
        let mut s = prepare_uniform(&p, Representation::Full);
        s.apply_oracle_phase(&p, PI);
        let QuantumState::Full(before) = s.clone() else { unreachable!() };
        let mean: Complex64 = before.iter().sum::<Complex64>() / 8.0;
        s.apply_diffusion_phase(&p, PI);
        let QuantumState::Full(after) = s else { unreachable!() };
        // I - 2|psi0><psi0| maps a -> a - 2 mean; the textbook form is its negation.
        for (x, y) in before.iter().zip(&after) {
            assert!((*y - (*x - 2.0 * mean)).norm() < 1e-15);
        }
    }

    #[test]
    fn full_and_subspace_agree_per_operator() {
        let p = problem(16, 2);
        let mut full = prepare_uniform(&p, Representation::Full);
        let mut sub = prepare_uniform(&p, Representation::Subspace);
        full.apply_oracle_phase(&p, 1.0);
        sub.apply_oracle_phase(&p, 1.0);
        let (fa, fb) = full.subspace_components(&p);
        let (sa, sb) = sub.subspace_components(&p);
        assert!((fa - sa).norm() <= 1e-12 && (fb - sb).norm() <= 1e-12);
        full.apply_diffusion_phase(&p, 1.0);
        sub.apply_diffusion_phase(&p, 1.0);
        let (fa, fb) = full.subspace_components(&p);
        let (sa, sb) = sub.subspace_components(&p);
        assert!((fa - sa).norm() <= 1e-12 && (fb - sb).norm() <= 1e-12);
    }

    #[test]
    fn single_target_found_with_certainty() {
        let p = ProblemInstance::new(4, vec![3], 0.01).unwrap();
        let params = derive_long_params(&p);
        let reg = evolve(&p, &params, Representation::Full).unwrap();
        let QuantumState::Full(a) = reg.state() else { unreachable!() };
        assert!(a[3].norm_sqr() >= 1.0 - 1e-9);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            assert_eq!(run_long_once(&p, &params, &mut rng).unwrap(), (3, 2));
        }
    }

    #[test]
    fn all_marked_measures_uniformly() {
        let p = problem(4, 4);
        let params = derive_long_params(&p);
        let mut counts = [0usize; 4];
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..4000 {
            let (i, q) = run_long_once(&p, &params, &mut rng).unwrap();
            assert_eq!(q, 0);
            counts[i] += 1;
        }
        assert!(counts.iter().all(|&c| (850..1150).contains(&c)), "{counts:?}");
        assert_eq!(success_probability(&p, &params).unwrap(), 1.0);
    }

    #[test]
    fn success_is_exact_for_small_cases() {
        for (n, m) in [(4, 1), (1024, 3), (1024, 2), (37, 5)] {
            let p = problem(n, m);
            let params = derive_long_params(&p);
            let sub = success_probability(&p, &params).unwrap();
            let full = success_probability_in(&p, &params, Representation::Full).unwrap();
            assert!((1.0 - sub).abs() <= 1e-9, "n={n} m={m} p={sub}");
            assert!((full - sub).abs() <= 1e-9);
        }
    }

    #[test]
    fn standard_grover_anchor() {
        // sin^2(3 beta) = 1 at beta = pi/6.
        let p = problem(4, 1);
        let traj = success_trajectory(&p, PI, 1);
        assert_abs_diff_eq!(traj[1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn mismatched_params_are_rejected() {
        let p = problem(16, 2);
        let other = LongParams::for_counts(16, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            run_long_once(&p, &other, &mut rng),
            Err(Error::ParamsMismatch { .. })
        ));
    }

    #[test]
    fn subspace_measure_covers_unmarked_block() {
        let p = ProblemInstance::new(6, vec![4, 1], 0.1).unwrap();
        let s = QuantumState::Subspace {
            marked: Complex64::new(0.0, 0.0),
            unmarked: Complex64::new(1.0, 0.0),
        };
        let got: Vec<usize> = [0.0, 0.26, 0.51, 0.99].iter().map(|&u| s.measure(&p, u)).collect();
        assert_eq!(got, vec![0, 2, 3, 5]);
    }
}
