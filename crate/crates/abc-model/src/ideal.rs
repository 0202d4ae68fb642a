//! The absorbing ideal chain among the metastable pair configurations, its
//! absorption probabilities, and the limiting trace-process rates.
//!
//! From a meeting inside a minimal block, the detached pair of foreign
//! particles performs a slow random walk: it moves to a neighboring pair
//! state or dissolves toward a segregated configuration. The transient
//! states form a single ring (the pair transported once around advances the
//! segregated anchor by three), each interior state touching one absorber
//! and each block corner touching two. The discrete jump chain is exactly:
//!
//! * interior state: `3/10` to each pair-neighbor, `2/5` to its absorber;
//! * corner state: `3/14` to each pair-neighbor, `2/7` to each of its two
//!   absorbers.
//!
//! All rows sum to one exactly; an exact-rational solve is kept alongside
//! the double-precision one for small chains.

use std::collections::BTreeMap;

use num::{BigRational, ToPrimitive};

use crate::families::ConfigId;
use crate::linalg::{CyclicTridiag, Scalar};
use crate::ring::{ModelParams, Species};
use crate::{ModelError, Result};

/// One transient state of the ideal chain: the pair sits in the block of
/// species `gamma` belonging to the segregated background anchored at
/// `anchor`, at offset `i` (`i = 1` is the block corner, shared with the
/// next anchor).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransientState {
    pub anchor: i32,
    pub gamma: Species,
    pub i: u32,
    pub corner: bool,
}

/// The ideal absorbing chain for one minimal species `alpha`.
#[derive(Debug, Clone)]
pub struct IdealChain {
    pub params: ModelParams,
    pub alpha: Species,
    /// Transient states in pair-transport order; ring adjacency is list
    /// adjacency (wrapping).
    pub states: Vec<TransientState>,
    /// Ring positions of the start states `ξ^0_{α,i}`, `i = 1..=M-1`
    /// (`start[i-1]`).
    pub start: Vec<usize>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Build the chain for a species realizing the minimal block size.
pub fn build_ideal_chain(params: &ModelParams, alpha: Species) -> Result<IdealChain> {
    let m = params.m_min();
    if params.count(alpha) != m {
        return Err(ModelError::InvalidParams(format!(
            "ideal chain requires N_{} = M = {m}",
            alpha.letter()
        )));
    }
    if m < 3 {
        return Err(ModelError::InvalidParams(
            "metastability analysis requires M ≥ 3".into(),
        ));
    }
    let ring = params.ring_size() as u64;
    let blocks = (ring / gcd(ring, 3)) * 3; // lcm(ring, 3)
    let mut states = Vec::new();
    for b in 0..blocks {
        let anchor = params.wrap_site(b as i64);
        let gamma = alpha.shift(-(b as i64));
        let n_gamma = params.count(gamma);
        for i in (2..=n_gamma - 2).rev() {
            states.push(TransientState {
                anchor,
                gamma,
                i,
                corner: false,
            });
        }
        states.push(TransientState {
            anchor,
            gamma,
            i: 1,
            corner: true,
        });
    }
    // Start lookups: ξ^0_{α,i}. Block 0 lists i = N_α-2 … 2 then the corner
    // (i = 1); i = N_α-1 is the corner of the last block.
    let n_alpha = params.count(alpha);
    let mut start = Vec::with_capacity((m - 1) as usize);
    for i in 1..=m - 1 {
        let pos = if i == 1 {
            (n_alpha - 3) as usize
        } else if i == n_alpha - 1 {
            states.len() - 1
        } else {
            (n_alpha - 2 - i) as usize
        };
        start.push(pos);
    }
    debug_assert!(verify_ring(params, &states));
    Ok(IdealChain {
        params: *params,
        alpha,
        states,
        start,
    })
}

// Consecutive listed states must be pair-transport neighbors; a corner's
// label seen from the next block must obey the double-label rule.
fn verify_ring(params: &ModelParams, states: &[TransientState]) -> bool {
    let l = states.len();
    for w in 0..l {
        let a = states[w];
        let b = states[(w + 1) % l];
        let ok = if a.anchor == b.anchor && a.gamma == b.gamma {
            a.i == b.i + 1
        } else {
            // crossing a corner: a = (k, γ, 1), b = (k+1, γ-1, N_{γ-1}-2 …)
            a.i == 1
                && params.wrap_site(a.anchor as i64 + 1) == b.anchor
                && b.gamma == a.gamma.pred()
                && b.i == params.count(b.gamma) - 2
        };
        if !ok {
            return false;
        }
    }
    true
}

impl IdealChain {
    pub fn transient_count(&self) -> usize {
        self.states.len()
    }

    /// Jump probability from state `s` to each ring neighbor.
    fn move_prob<S: Scalar>(&self, s: usize) -> S {
        if self.states[s].corner {
            S::from_ratio(3, 14)
        } else {
            S::from_ratio(3, 10)
        }
    }

    /// Absorbers of state `s` with their probabilities.
    fn absorbers<S: Scalar>(&self, s: usize) -> Vec<(i32, S)> {
        let st = self.states[s];
        if st.corner {
            vec![
                (st.anchor, S::from_ratio(2, 7)),
                (
                    self.params.wrap_site(st.anchor as i64 + 1),
                    S::from_ratio(2, 7),
                ),
            ]
        } else {
            vec![(st.anchor, S::from_ratio(2, 5))]
        }
    }

    fn solve_rows<S: Scalar>(&self) -> Vec<BTreeMap<i32, S>> {
        let l = self.states.len();
        // Transposed system: A^T[s][s±1] = -P(s±1 → s).
        let a = CyclicTridiag {
            diag: vec![S::one(); l],
            sub: (0..l)
                .map(|s| S::zero() - self.move_prob::<S>((s + l - 1) % l))
                .collect(),
            sup: (0..l)
                .map(|s| S::zero() - self.move_prob::<S>((s + 1) % l))
                .collect(),
        };
        self.start
            .iter()
            .map(|&s0| {
                let mut e = vec![S::zero(); l];
                e[s0] = S::one();
                let y = a.solve(&e);
                let mut row: BTreeMap<i32, S> = BTreeMap::new();
                for (s, w) in y.iter().enumerate() {
                    if *w == S::zero() {
                        continue;
                    }
                    for (k, p) in self.absorbers::<S>(s) {
                        let entry = row.entry(k).or_insert_with(S::zero);
                        *entry = entry.clone() + w.clone() * p;
                    }
                }
                row
            })
            .collect()
    }
}

/// Absorption probabilities `p(i, k)`: chance that the chain started from
/// `ξ^0_{α,i}` is absorbed at the segregated configuration anchored at `k`.
#[derive(Debug, Clone)]
pub struct AbsorptionTable {
    pub alpha: Species,
    pub m: u32,
    /// `rows[i-1][k]`, `i = 1..=M-1`, `k ∈ [-N, N]`.
    pub rows: Vec<BTreeMap<i32, f64>>,
    /// Exact companion, computed when the transient ring has ≤ 64 states.
    pub exact: Option<Vec<BTreeMap<i32, BigRational>>>,
}

/// Threshold below which the exact-rational solve runs alongside doubles.
pub const EXACT_LIMIT: usize = 64;

pub fn absorption_solve(chain: &IdealChain) -> AbsorptionTable {
    let rows = chain.solve_rows::<f64>();
    let exact =
        (chain.transient_count() <= EXACT_LIMIT).then(|| chain.solve_rows::<BigRational>());
    AbsorptionTable {
        alpha: chain.alpha,
        m: chain.params.m_min(),
        rows,
        exact,
    }
}

impl AbsorptionTable {
    pub fn p(&self, i: u32, k: i32) -> f64 {
        self.rows[(i - 1) as usize].get(&k).copied().unwrap_or(0.0)
    }

    pub fn row_sum(&self, i: u32) -> f64 {
        self.rows[(i - 1) as usize].values().sum()
    }

    /// `g(k) = Σ_{i=1}^{M-1} p(i, k)`.
    pub fn g(&self, k: i32) -> f64 {
        self.rows
            .iter()
            .map(|r| r.get(&k).copied().unwrap_or(0.0))
            .sum()
    }

    pub fn g_exact(&self, k: i32) -> Option<BigRational> {
        use num::Zero;
        self.exact.as_ref().map(|rows| {
            rows.iter()
                .map(|r| r.get(&k).cloned().unwrap_or_else(BigRational::zero))
                .sum()
        })
    }

    /// All anchors carrying mass in some row.
    pub fn anchors(&self) -> Vec<i32> {
        let mut ks: Vec<i32> = self.rows.iter().flat_map(|r| r.keys().copied()).collect();
        ks.sort_unstable();
        ks.dedup();
        ks
    }
}

/// Closed-form prefactor of the boundary reduction:
/// `g(k) = (3/2 - 2/(3^{M-2}+1)) (p(1,k) + p(M-1,k))`.
pub fn g_prefactor(m: u32) -> f64 {
    1.5 - 2.0 / (3f64.powi(m as i32 - 2) + 1.0)
}

/// Coefficients of the interior closed form `p(i,k) = h1·3^i + h2·3^{-i}`,
/// solved from the `i = 1` and `i = M-1` instances.
pub fn interior_coefficients(m: u32, p1: f64, pm1: f64) -> (f64, f64) {
    let t = 3f64.powi(m as i32 - 1);
    // [3, 1/3; t, 1/t] [h1, h2]^T = [p1, pm1]^T
    let det = 3.0 / t - t / 3.0;
    let h1 = (p1 / t - pm1 / 3.0) / det;
    let h2 = (3.0 * pm1 - t * p1) / det;
    (h1, h2)
}

/// `g(k)` from the boundary values alone.
pub fn g_closed(m: u32, p1: f64, pm1: f64) -> f64 {
    g_prefactor(m) * (p1 + pm1)
}

/// Limiting trace-process rates `r(k)` (in `e^{-Mβ}` units) and their total.
#[derive(Debug, Clone)]
pub struct RateVector {
    pub params: ModelParams,
    /// Keyed by displacement `k ∈ [-N, N] \ {0}`.
    pub rates: BTreeMap<i32, f64>,
    pub lambda: f64,
}

impl RateVector {
    pub fn r(&self, k: i32) -> f64 {
        self.rates.get(&k).copied().unwrap_or(0.0)
    }
}

/// `r(k) = (d/2)·1{|k| = 1} + (2/3) Σ_{α minimal} g_α(k)`, for every `k ≠ 0`.
pub fn limit_rates(params: &ModelParams) -> Result<RateVector> {
    let tables: Vec<AbsorptionTable> = params
        .minimal_species()
        .into_iter()
        .map(|alpha| Ok(absorption_solve(&build_ideal_chain(params, alpha)?)))
        .collect::<Result<_>>()?;
    let d = params.degeneracy() as f64;
    let n = params.n() as i32;
    let mut rates = BTreeMap::new();
    for k in -n..=n {
        if k == 0 {
            continue;
        }
        let mut r = if k.abs() == 1 { d / 2.0 } else { 0.0 };
        for t in &tables {
            r += 2.0 / 3.0 * t.g(k);
        }
        rates.insert(k, r);
    }
    let lambda = rates.values().sum();
    Ok(RateVector {
        params: *params,
        rates,
        lambda,
    })
}

/// Meeting-position weights `q_i` (`2/3` interior, `1/3` at the block ends)
/// and the normalized limit profile `(1/2M, 1/M, …, 1/M, 1/2M)`.
pub fn meeting_distribution(m: u32) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 3);
    let q: Vec<f64> = (0..=m)
        .map(|i| if i == 0 || i == m { 1.0 / 3.0 } else { 2.0 / 3.0 })
        .collect();
    let total: f64 = q.iter().sum();
    let profile = q.iter().map(|v| v / total).collect();
    (q, profile)
}

/// Limiting jump rates of the trace on the enlarged metastable set: rows
/// from segregated states are in `e^{-Mβ}` units, rows from pair states in
/// `e^{-β}` units. Keys are canonical identifiers.
#[derive(Debug, Clone)]
pub struct LimitRateTables {
    pub from_omega: BTreeMap<i32, Vec<(ConfigId, f64)>>,
    pub from_xi: Vec<(ConfigId, Vec<(ConfigId, f64)>)>,
}

pub fn r1_matrices(params: &ModelParams) -> Result<LimitRateTables> {
    if params.m_min() < 3 {
        return Err(ModelError::InvalidParams("requires M ≥ 3".into()));
    }
    let d = params.degeneracy() as f64;
    let n = params.n() as i64;
    let minimal = params.minimal_species();
    let mut from_omega = BTreeMap::new();
    let mut from_xi = Vec::new();
    for k in -n..=n {
        let mut row = vec![
            (
                ConfigId::Omega {
                    k: params.wrap_site(k - 1),
                },
                d / 2.0,
            ),
            (
                ConfigId::Omega {
                    k: params.wrap_site(k + 1),
                },
                d / 2.0,
            ),
        ];
        for &alpha in &minimal {
            for i in 1..params.count(alpha) {
                let id = ConfigId::Xi {
                    k: k as i32,
                    alpha,
                    i,
                }
                .canonical(params);
                row.push((id, 2.0 / 3.0));
            }
        }
        from_omega.insert(k as i32, row);
        // Rows from pair states. Each physical state is visited once: the
        // corner between the blocks of (k, α) and (k+1, α-1) carries the
        // label (k, α, 1); interiors are 2 ≤ i ≤ N_α-2.
        for alpha in Species::ALL {
            // corner
            let prev = alpha.pred();
            let key = ConfigId::Xi {
                k: k as i32,
                alpha,
                i: 1,
            }
            .canonical(params);
            let row = vec![
                (
                    ConfigId::Xi {
                        k: k as i32,
                        alpha,
                        i: 2,
                    }
                    .canonical(params),
                    0.5,
                ),
                (
                    ConfigId::Xi {
                        k: params.wrap_site(k + 1),
                        alpha: prev,
                        i: params.count(prev) - 2,
                    }
                    .canonical(params),
                    0.5,
                ),
                (ConfigId::Omega { k: k as i32 }, 2.0 / 3.0),
                (
                    ConfigId::Omega {
                        k: params.wrap_site(k + 1),
                    },
                    2.0 / 3.0,
                ),
            ];
            from_xi.push((key, row));
            // interiors
            for i in 2..=params.count(alpha) - 2 {
                let id = ConfigId::Xi {
                    k: k as i32,
                    alpha,
                    i,
                };
                let mut row: Vec<(ConfigId, f64)> = Vec::new();
                for j in [i - 1, i + 1] {
                    row.push((
                        ConfigId::Xi {
                            k: k as i32,
                            alpha,
                            i: j,
                        }
                        .canonical(params),
                        0.5,
                    ));
                }
                row.push((ConfigId::Omega { k: k as i32 }, 2.0 / 3.0));
                from_xi.push((id, row));
            }
        }
    }
    Ok(LimitRateTables { from_omega, from_xi })
}

/// Serializable export of an absorption table.
#[derive(serde::Serialize)]
pub struct AbsorptionExport {
    pub params: ModelParams,
    pub alpha: char,
    pub entries: Vec<AbsorptionEntry>,
    pub g: Vec<GEntry>,
}

#[derive(serde::Serialize)]
pub struct AbsorptionEntry {
    pub i: u32,
    pub k: i32,
    pub p: f64,
}

#[derive(serde::Serialize)]
pub struct GEntry {
    pub k: i32,
    pub g: f64,
}

pub fn export_table(params: &ModelParams, table: &AbsorptionTable) -> AbsorptionExport {
    let mut entries = Vec::new();
    for (idx, row) in table.rows.iter().enumerate() {
        for (&k, &p) in row {
            entries.push(AbsorptionEntry {
                i: idx as u32 + 1,
                k,
                p,
            });
        }
    }
    let n = params.n() as i32;
    let g = (-n..=n)
        .filter(|&k| k != 0)
        .map(|k| GEntry { k, g: table.g(k) })
        .collect();
    AbsorptionExport {
        params: *params,
        alpha: table.alpha.letter(),
        entries,
        g,
    }
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::One;

    fn params(a: u32, b: u32, c: u32) -> ModelParams {
        ModelParams::new(a, b, c, 1.0).unwrap()
    }

    #[test]
    fn ring_sizes() {
        // Full pair-transport orbit: Σ_blocks (N_γ - 2) over lcm(2N+1, 3)
        // block crossings.
        let chain = build_ideal_chain(&params(3, 3, 3), Species::A).unwrap();
        assert_eq!(chain.transient_count(), 9);
        let chain = build_ideal_chain(&params(5, 7, 9), Species::A).unwrap();
        assert_eq!(chain.transient_count(), 105);
        // 3 ∤ ring size: the orbit covers every pair state,
        // (2N+1) · Σ_α (N_α - 2) of them.
        let chain = build_ideal_chain(&params(3, 3, 5), Species::A).unwrap();
        assert_eq!(chain.transient_count(), 11 * (1 + 1 + 3));
    }

    #[test]
    fn requires_minimal_species() {
        assert!(build_ideal_chain(&params(5, 7, 9), Species::B).is_err());
        assert!(build_ideal_chain(&params(5, 7, 9), Species::C).is_err());
    }

    #[test]
    fn row_probabilities_sum_to_one() {
        // interior: 3/10 + 3/10 + 2/5; corner: 3/14 + 3/14 + 2/7 + 2/7.
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(q(3, 10) + q(3, 10) + q(2, 5), BigRational::one());
        assert_eq!(q(3, 14) + q(3, 14) + q(2, 7) + q(2, 7), BigRational::one());
    }

    #[test]
    fn absorption_rows_sum_to_one() {
        for p in [params(3, 3, 3), params(5, 7, 9), params(3, 4, 6)] {
            let alpha = p.minimal_species()[0];
            let chain = build_ideal_chain(&p, alpha).unwrap();
            let table = absorption_solve(&chain);
            for i in 1..p.m_min() {
                assert!((table.row_sum(i) - 1.0).abs() < 1e-12, "i={i}");
            }
            if let Some(exact) = &table.exact {
                for row in exact {
                    let sum: BigRational = row.values().cloned().sum();
                    assert_eq!(sum, BigRational::one());
                }
            }
        }
    }

    #[test]
    fn exact_and_double_agree() {
        let p = params(3, 3, 3);
        let chain = build_ideal_chain(&p, Species::A).unwrap();
        let table = absorption_solve(&chain);
        let exact = table.exact.as_ref().unwrap();
        for (row, erow) in table.rows.iter().zip(exact) {
            for (k, v) in row {
                let e = rational_to_f64(erow.get(k).unwrap());
                assert!((v - e).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn interior_recurrence_residual_vanishes() {
        // p(i,k) = 3/10 p(i-1,k) + 3/10 p(i+1,k) for 2 ≤ i ≤ M-2.
        let p = params(7, 7, 7);
        let chain = build_ideal_chain(&p, Species::B).unwrap();
        let table = absorption_solve(&chain);
        for k in table.anchors() {
            if k == 0 {
                // The start block's own absorber enters the first-step
                // analysis at k = 0; the recurrence is a k ≠ 0 statement.
                continue;
            }
            for i in 2..=p.m_min() - 2 {
                let res = table.p(i, k) - 0.3 * table.p(i - 1, k) - 0.3 * table.p(i + 1, k);
                assert!(res.abs() < 1e-14, "k={k} i={i} res={res}");
            }
        }
    }

    #[test]
    fn closed_form_matches_direct_sum() {
        for m in [3u32, 5, 9, 13] {
            let p = params(m, m, m);
            let chain = build_ideal_chain(&p, Species::A).unwrap();
            let table = absorption_solve(&chain);
            let n = p.n() as i32;
            for k in -n..=n {
                if k == 0 {
                    continue;
                }
                let direct = table.g(k);
                let closed = g_closed(m, table.p(1, k), table.p(m - 1, k));
                assert!(
                    (direct - closed).abs() < 1e-12,
                    "m={m} k={k}: {direct} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn interior_coefficients_reproduce_row() {
        let p = params(9, 9, 9);
        let chain = build_ideal_chain(&p, Species::A).unwrap();
        let table = absorption_solve(&chain);
        for k in [1i32, -1, 2] {
            let (h1, h2) = interior_coefficients(9, table.p(1, k), table.p(8, k));
            for i in 1..9u32 {
                let predicted = h1 * 3f64.powi(i as i32) + h2 * 3f64.powi(-(i as i32));
                assert!((predicted - table.p(i, k)).abs() < 1e-12, "k={k} i={i}");
            }
        }
    }

    #[test]
    fn decay_bound_holds() {
        let p = params(5, 5, 5);
        let chain = build_ideal_chain(&p, Species::A).unwrap();
        let table = absorption_solve(&chain);
        let m = 5i32;
        for k in table.anchors() {
            if k == 0 {
                continue;
            }
            let bound = (3f64 / 5.0).powi((m - 2) * (k.abs() - 1));
            for i in 1..5u32 {
                assert!(table.p(i, k) <= bound + 1e-15, "k={k} i={i}");
            }
        }
    }

    #[test]
    fn boundary_absorption_near_half() {
        // |p(1,1) - 1/2| ≤ (3/5)^{M-3} for M in 6..=14.
        for m in 6u32..=14 {
            let p = if m % 2 == 1 {
                params(m, m, m)
            } else {
                params(m, m, m + 1)
            };
            let chain = build_ideal_chain(&p, Species::A).unwrap();
            let table = absorption_solve(&chain);
            let dev = (table.p(1, 1) - 0.5).abs();
            assert!(dev <= (3f64 / 5.0).powi(m as i32 - 3), "M={m}: {dev}");
        }
    }

    #[test]
    fn g_limit_three_quarters_nearest() {
        // |g(±1) - 3/4| ≤ 5 (3/5)^{M-2}; |g(k)| ≤ 5 (3/5)^{M-2} beyond.
        for m in 6u32..=14 {
            let p = if m % 2 == 1 {
                params(m, m, m)
            } else {
                params(m, m, m + 1)
            };
            let chain = build_ideal_chain(&p, Species::A).unwrap();
            let table = absorption_solve(&chain);
            let env = 5.0 * (3f64 / 5.0).powi(m as i32 - 2);
            assert!((table.g(1) - 0.75).abs() <= env, "M={m}");
            assert!((table.g(-1) - 0.75).abs() <= env, "M={m}");
            for k in table.anchors() {
                if k.abs() >= 2 {
                    assert!(table.g(k).abs() <= env, "M={m} k={k}");
                }
            }
        }
    }

    #[test]
    fn limit_rates_positive_and_symmetric() {
        let p = params(3, 3, 3);
        let rv = limit_rates(&p).unwrap();
        for (&k, &r) in &rv.rates {
            assert!(r > 0.0, "r({k}) = {r}");
            assert!((r - rv.r(-k)).abs() < 1e-12);
        }
        // Reflection symmetry with equal minimal blocks: Σ k r(k) = 0.
        let first_moment: f64 = rv.rates.iter().map(|(&k, &r)| k as f64 * r).sum();
        assert!(first_moment.abs() < 1e-12);
    }

    #[test]
    fn first_moment_vanishes_when_two_minimal_blocks_equal() {
        let p = params(4, 4, 5);
        let rv = limit_rates(&p).unwrap();
        let first_moment: f64 = rv.rates.iter().map(|(&k, &r)| k as f64 * r).sum();
        assert!(first_moment.abs() < 1e-12, "{first_moment}");
    }

    #[test]
    fn equal_density_nearest_rate_approaches_degeneracy() {
        // r(±1) → d/2 + (2/3)·d·(3/4) = d for large equal blocks.
        let p = params(13, 13, 13);
        let rv = limit_rates(&p).unwrap();
        assert!((rv.r(1) - 3.0).abs() < 1e-3, "{}", rv.r(1));
        assert!((rv.r(-1) - 3.0).abs() < 1e-3);
    }

    #[test]
    fn meeting_profile() {
        let (q, profile) = meeting_distribution(3);
        let total: f64 = q.iter().sum();
        assert!((total - 2.0).abs() < 1e-15); // (2M)/3 at M=3
        let expect = [1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0];
        for (a, b) in profile.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
        let (_, profile) = meeting_distribution(8);
        assert!((profile[0] - 1.0 / 16.0).abs() < 1e-15);
        assert!((profile[3] - 1.0 / 8.0).abs() < 1e-15);
        assert!((profile.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn r1_row_totals() {
        let p = params(5, 7, 9);
        let tables = r1_matrices(&p).unwrap();
        let d = 1.0;
        let m = 5.0;
        for row in tables.from_omega.values() {
            let total: f64 = row.iter().map(|(_, r)| r).sum();
            let expect = 2.0 * (d / 2.0) + 2.0 / 3.0 * d * (m - 1.0);
            assert!((total - expect).abs() < 1e-12);
        }
        for (id, row) in &tables.from_xi {
            assert!(matches!(id, ConfigId::Xi { .. }));
            let total: f64 = row.iter().map(|(_, r)| r).sum();
            // Corners feed two segregated targets (4 entries), interiors one.
            let expect = match row.len() {
                4 => 0.5 + 0.5 + 2.0 / 3.0 + 2.0 / 3.0,
                3 => 0.5 + 0.5 + 2.0 / 3.0,
                other => panic!("unexpected row width {other}"),
            };
            assert!((total - expect).abs() < 1e-12);
        }
    }
}
