//! Full enumeration of the conserved-density state space on tiny rings,
//! exact stationary vectors, and the Gibbs comparison used to validate the
//! simulator in the reversible equal-density case.

use std::collections::HashMap;

use crate::linalg::gth_stationary;
use crate::ring::{EdgeClass, ModelParams, RingConfig, Species};
use crate::{ModelError, Result};

/// All configurations with the given species counts, with an index lookup.
pub struct StateSpace {
    pub states: Vec<RingConfig>,
    pub index: HashMap<u64, usize>,
}

/// Enumerate the component (guarded: ring size ≤ 13; 1680 states for (3,3,3)).
pub fn enumerate(params: &ModelParams) -> Result<StateSpace> {
    if params.ring_size() > 13 {
        return Err(ModelError::GuardViolation(format!(
            "state-space enumeration limited to rings of ≤ 13 sites (got {})",
            params.ring_size()
        )));
    }
    let mut states = Vec::new();
    let mut current = Vec::with_capacity(params.ring_size() as usize);
    let mut remaining = [params.n_a, params.n_b, params.n_c];
    fn rec(
        current: &mut Vec<Species>,
        remaining: &mut [u32; 3],
        size: usize,
        out: &mut Vec<RingConfig>,
    ) {
        if current.len() == size {
            let snapshot = current.clone();
            out.push(RingConfig::from_slot_fn(size as u32, |p| snapshot[p]));
            return;
        }
        for s in Species::ALL {
            if remaining[s.index()] > 0 {
                remaining[s.index()] -= 1;
                current.push(s);
                rec(current, remaining, size, out);
                current.pop();
                remaining[s.index()] += 1;
            }
        }
    }
    rec(
        &mut current,
        &mut remaining,
        params.ring_size() as usize,
        &mut states,
    );
    let index = states
        .iter()
        .enumerate()
        .map(|(i, c)| (c.pack_key(), i))
        .collect();
    Ok(StateSpace { states, index })
}

/// Exact stationary distribution of the swap dynamics, via GTH elimination
/// of the embedded jump chain (`π(x) ∝ ν(x)/λ(x)`).
pub fn stationary_distribution(params: &ModelParams, space: &StateSpace) -> Vec<f64> {
    let n = space.states.len();
    let q = params.q();
    let size = params.ring_size() as i64;
    let mut total_rates = vec![0.0f64; n];
    let mut p = vec![0.0f64; n * n];
    for (i, cfg) in space.states.iter().enumerate() {
        let mut lambda = 0.0;
        for e in 0..size {
            let rate = match cfg.classify_edge(e) {
                EdgeClass::Red => q,
                EdgeClass::Blue => 1.0,
                EdgeClass::Black => continue,
            };
            lambda += rate;
            let nb = cfg.transpose(e, e + 1);
            let j = space.index[&nb.pack_key()];
            p[i * n + j] += rate;
        }
        total_rates[i] = lambda;
        for j in 0..n {
            p[i * n + j] /= lambda;
        }
    }
    let nu = gth_stationary(&mut p, n);
    let mut pi: Vec<f64> = nu
        .iter()
        .zip(&total_rates)
        .map(|(v, l)| v / l)
        .collect();
    let total: f64 = pi.iter().sum();
    for v in &mut pi {
        *v /= total;
    }
    pi
}

/// Gibbs weights `e^{-β(H - H_min)} / Z` over the enumerated space.
pub fn gibbs_distribution(params: &ModelParams, space: &StateSpace) -> Vec<f64> {
    let energies: Vec<f64> = space
        .states
        .iter()
        .map(|c| {
            let h = c.hamiltonian();
            *h.numer() as f64 / *h.denom() as f64
        })
        .collect();
    let h_min = energies.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut w: Vec<f64> = energies
        .iter()
        .map(|h| (-(params.beta) * (h - h_min)).exp())
        .collect();
    let z: f64 = w.iter().sum();
    for v in &mut w {
        *v /= z;
    }
    w
}

/// Largest relative deviation `max |a_i - b_i| / b_i`.
pub fn max_relative_error(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| ((x - y) / y).abs())
        .fold(0.0, f64::max)
}

/// Total-variation distance between two distributions.
pub fn tv_distance(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}
