//! The segregated configurations `ω_k` and the metastable families
//! `ζ^k_{α,i}` (two detached particles meeting inside a block) and
//! `ξ^k_{α,i}` (the meeting pair interchanged), plus an O(N) recognizer.

use serde::{Deserialize, Serialize};

use crate::ring::{EdgeClass, ModelParams, RingConfig, Species};
use crate::{ModelError, Result};

/// Position of the first particle of species `α` in the unrolled `ω_0`.
pub fn block_start(params: &ModelParams, alpha: Species) -> i64 {
    match alpha {
        Species::A => 0,
        Species::B => params.n_a as i64,
        Species::C => (params.n_a + params.n_b) as i64,
    }
}

/// The segregated configuration with pure blocks `A`, `B`, `C` clockwise,
/// anchored so that the `A`-block starts at site `k`.
pub fn make_omega(params: &ModelParams, k: i64) -> RingConfig {
    let na = params.n_a as usize;
    let nb = params.n_b as usize;
    let size = params.ring_size();
    let shift = k.rem_euclid(size as i64) as usize;
    RingConfig::from_slot_fn(size, |p| {
        let u = (p + size as usize - shift) % size as usize;
        if u < na {
            Species::A
        } else if u < na + nb {
            Species::B
        } else {
            Species::C
        }
    })
}

/// `ζ^k_{α,i} = Θ^k σ^{f_{α+1}, f_α+i} σ^{f_α-1, f_α-1+i} ω_0`:
/// two detached particles of the neighboring species have met inside the
/// `α`-block, the meeting offset being `i ∈ [0, N_α]`.
pub fn make_zeta(params: &ModelParams, k: i64, alpha: Species, i: u32) -> Result<RingConfig> {
    let n_alpha = params.count(alpha);
    if i > n_alpha {
        return Err(ModelError::OutOfRange(format!(
            "zeta offset {i} outside [0, {n_alpha}]"
        )));
    }
    let f = block_start(params, alpha);
    let f_next = block_start_wrapped(params, alpha.succ());
    let i = i as i64;
    let mut c = make_omega(params, 0);
    c.transpose_in_place(f - 1, f - 1 + i);
    c.transpose_in_place(f_next, f + i);
    Ok(c.shift(k))
}

// block_start of α+1 measured as f_α + N_α even when α = C (wraps past 2N).
fn block_start_wrapped(params: &ModelParams, alpha_next: Species) -> i64 {
    if alpha_next == Species::A {
        params.ring_size() as i64
    } else {
        block_start(params, alpha_next)
    }
}

/// `ξ^k_{α,i} = Θ^k σ^{f_α+i-1, f_α+i} ζ^0_{α,i}`: the meeting pair of
/// `ζ^k_{α,i}` interchanged (a rate-1 jump), `i ∈ [1, N_α-1]`.
pub fn make_xi(params: &ModelParams, k: i64, alpha: Species, i: u32) -> Result<RingConfig> {
    let n_alpha = params.count(alpha);
    if i == 0 || i >= n_alpha {
        return Err(ModelError::OutOfRange(format!(
            "xi offset {i} outside [1, {}]",
            n_alpha - 1
        )));
    }
    let f = block_start(params, alpha);
    let i64i = i as i64;
    let mut c = make_zeta(params, 0, alpha, i)?;
    c.transpose_in_place(f + i64i - 1, f + i64i);
    Ok(c.shift(k))
}

/// Tagged identifier for the special configurations, in canonical form.
///
/// Double labels (`ζ^k_{α,N_α} = ζ^{k-1}_{α+1,0}`, `ξ^k_{α,N_α-1} =
/// ξ^{k-1}_{α+1,1}`) are resolved to the representative with the smallest
/// anchor `k` in `[-N, N]`, ties broken by species order `A < B < C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConfigId {
    Omega { k: i32 },
    Zeta { k: i32, alpha: Species, i: u32 },
    Xi { k: i32, alpha: Species, i: u32 },
    Other,
}

impl ConfigId {
    pub fn canonical(self, params: &ModelParams) -> ConfigId {
        match self {
            ConfigId::Zeta { k, alpha, i } => {
                let mut reps = vec![(k, alpha, i)];
                if i == params.count(alpha) {
                    reps.push((params.wrap_site(k as i64 - 1), alpha.succ(), 0));
                }
                if i == 0 {
                    let prev = alpha.pred();
                    reps.push((params.wrap_site(k as i64 + 1), prev, params.count(prev)));
                }
                let (k, alpha, i) = pick_canonical(reps);
                ConfigId::Zeta { k, alpha, i }
            }
            ConfigId::Xi { k, alpha, i } => {
                let mut reps = vec![(k, alpha, i)];
                if i == params.count(alpha) - 1 {
                    reps.push((params.wrap_site(k as i64 - 1), alpha.succ(), 1));
                }
                if i == 1 {
                    let prev = alpha.pred();
                    reps.push((
                        params.wrap_site(k as i64 + 1),
                        prev,
                        params.count(prev) - 1,
                    ));
                }
                let (k, alpha, i) = pick_canonical(reps);
                ConfigId::Xi { k, alpha, i }
            }
            other => other,
        }
    }
}

fn pick_canonical(reps: Vec<(i32, Species, u32)>) -> (i32, Species, u32) {
    reps.into_iter()
        .min_by_key(|&(k, alpha, _)| (k, alpha.index()))
        .unwrap()
}

/// Identify a configuration as `ω_k`, `ζ^k_{α,i}`, `ξ^k_{α,i}` (canonical
/// form) or `Other`. Round-trips with the constructors.
pub fn recognize(params: &ModelParams, config: &RingConfig) -> ConfigId {
    if !config.matches(params) {
        return ConfigId::Other;
    }
    let (red, blue) = config.edge_counts();
    if blue == 0 && red == 3 {
        if let Some(k) = segregated_anchor(params, config) {
            return ConfigId::Omega { k };
        }
    }
    // Zeta: the meeting pair (α-1, α+1) is a blue edge. Interior instances
    // have 3 red / 3 blue edges, the crossing instances 2 / 2.
    if (red == 3 && blue == 3) || (red == 2 && blue == 2) {
        let size = config.len() as i64;
        for p in 0..size {
            if config.classify_edge(p) != EdgeClass::Blue {
                continue;
            }
            let left = config.get(p);
            let alpha = left.succ(); // pair is (α-1, α+1)
            if let Some(id) = try_match_zeta(params, config, p, alpha) {
                return id.canonical(params);
            }
        }
    }
    // Xi: the interchanged pair (α+1, α-1) is a red edge; 6 red, 0 blue.
    if red == 6 && blue == 0 {
        let size = config.len() as i64;
        for p in 0..size {
            if config.classify_edge(p) != EdgeClass::Red {
                continue;
            }
            let left = config.get(p);
            let alpha = left.pred(); // pair is (α+1, α-1)
            if let Some(id) = try_match_xi(params, config, p, alpha) {
                return id.canonical(params);
            }
        }
    }
    ConfigId::Other
}

/// Anchor of a segregated configuration, or None.
///
/// A configuration with matching counts, exactly three non-black edges, all
/// red, is necessarily some `ω_k`: three boundaries mean three maximal runs,
/// and red boundaries force the cyclic run order `A → B → C`.
pub fn segregated_anchor(params: &ModelParams, config: &RingConfig) -> Option<i32> {
    if !config.matches(params) || config.edge_counts() != (3, 0) {
        return None;
    }
    let size = config.len() as i64;
    for p in 0..size {
        if config.get(p) == Species::A && config.get(p - 1) != Species::A {
            let k = params.wrap_site(p);
            debug_assert_eq!(*config, make_omega(params, k as i64));
            return Some(k);
        }
    }
    None
}

fn try_match_zeta(
    params: &ModelParams,
    config: &RingConfig,
    pair_left: i64,
    alpha: Species,
) -> Option<ConfigId> {
    // In ζ^k_{α,i} the pair sits at sites (k+f_α+i-1, k+f_α+i); counting the
    // α-particles clockwise from the pair up to the first non-α site gives
    // r = N_α - i, from which k follows.
    let n_alpha = params.count(alpha) as i64;
    let mut r = 0i64;
    let mut p = pair_left + 2;
    while config.get(p) == alpha && r <= n_alpha {
        r += 1;
        p += 1;
    }
    let i = n_alpha - r;
    if !(0..=n_alpha).contains(&i) {
        return None;
    }
    let k = params.wrap_site(pair_left + 1 - block_start(params, alpha) - i);
    let candidate = make_zeta(params, k as i64, alpha, i as u32).ok()?;
    (candidate == *config).then_some(ConfigId::Zeta {
        k,
        alpha,
        i: i as u32,
    })
}

fn try_match_xi(
    params: &ModelParams,
    config: &RingConfig,
    pair_left: i64,
    alpha: Species,
) -> Option<ConfigId> {
    let n_alpha = params.count(alpha) as i64;
    let mut r = 0i64;
    let mut p = pair_left + 2;
    while config.get(p) == alpha && r <= n_alpha {
        r += 1;
        p += 1;
    }
    let i = n_alpha - r;
    if !(1..n_alpha).contains(&i) {
        return None;
    }
    let k = params.wrap_site(pair_left + 1 - block_start(params, alpha) - i);
    let candidate = make_xi(params, k as i64, alpha, i as u32).ok()?;
    (candidate == *config).then_some(ConfigId::Xi {
        k,
        alpha,
        i: i as u32,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_layout_small() {
        let params = ModelParams::new(3, 3, 3, 1.0).unwrap();
        let w0 = make_omega(&params, 0);
        assert_eq!(w0.to_marked_string(), "|AAABBBCCC");
        let w1 = make_omega(&params, 1);
        assert_eq!(w1, w0.shift(1));
        assert_eq!(w1.to_marked_string(), "|CAAABBBCC");
    }

    #[test]
    fn omega_center_example() {
        // σ^{2,3} on ω_0 for (3,3,3) puts a B inside the A block.
        let params = ModelParams::new(3, 3, 3, 1.0).unwrap();
        let c = make_omega(&params, 0).transpose(2, 3);
        assert_eq!(c.to_marked_string(), "|AABABBCCC");
    }

    #[test]
    fn omega_equal_density_energy_is_m_squared() {
        for m in [3u32, 5, 7] {
            let params = ModelParams::new(m, m, m, 1.0).unwrap();
            for k in -(params.n() as i64)..=params.n() as i64 {
                let h = make_omega(&params, k).hamiltonian();
                assert_eq!(h, num::rational::Ratio::new((m * m) as i64, 1));
            }
        }
    }

    #[test]
    fn omega_has_three_red_edges_no_blue() {
        let params = ModelParams::new(8, 5, 12, 1.0).unwrap();
        for k in [-12i64, 0, 3, 12] {
            assert_eq!(make_omega(&params, k).edge_counts(), (3, 0));
        }
    }

    #[test]
    fn omega_333_red_edges_at_block_boundaries() {
        let params = ModelParams::new(3, 3, 3, 1.0).unwrap();
        let w0 = make_omega(&params, 0);
        for e in 0..9i64 {
            let expect = if e == 2 || e == 5 || e == 8 {
                EdgeClass::Red
            } else {
                EdgeClass::Black
            };
            assert_eq!(w0.classify_edge(e), expect, "edge {e}");
        }
    }

    #[test]
    fn zeta_double_representation() {
        let params = ModelParams::new(8, 5, 12, 1.0).unwrap();
        // ζ^k_{α,N_α} = ζ^{k-1}_{α+1,0} site by site, every k and α.
        for k in -12i64..=12 {
            for alpha in Species::ALL {
                let lhs = make_zeta(&params, k, alpha, params.count(alpha)).unwrap();
                let rhs = make_zeta(&params, k - 1, alpha.succ(), 0).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        // Spec'd instance: ζ^2_{B,0} = ζ^3_{A,8}.
        assert_eq!(
            make_zeta(&params, 2, Species::B, 0).unwrap(),
            make_zeta(&params, 3, Species::A, 8).unwrap()
        );
    }

    #[test]
    fn xi_double_representation() {
        let params = ModelParams::new(8, 5, 12, 1.0).unwrap();
        for k in -12i64..=12 {
            for alpha in Species::ALL {
                let lhs = make_xi(&params, k, alpha, params.count(alpha) - 1).unwrap();
                let rhs = make_xi(&params, k - 1, alpha.succ(), 1).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        assert_eq!(
            make_xi(&params, 2, Species::B, 1).unwrap(),
            make_xi(&params, 3, Species::A, 7).unwrap()
        );
    }

    #[test]
    fn zeta_edge_census() {
        let params = ModelParams::new(8, 5, 12, 1.0).unwrap();
        // Interior meeting: 3 red and 3 blue edges.
        let z = make_zeta(&params, 2, Species::B, 2).unwrap();
        assert_eq!(z.edge_counts(), (3, 3));
        // Crossing instance: 2 red, 2 blue.
        let z0 = make_zeta(&params, 2, Species::B, 0).unwrap();
        assert_eq!(z0.edge_counts(), (2, 2));
        // Xi instances have 6 red edges and no blue ones.
        let x = make_xi(&params, 2, Species::B, 2).unwrap();
        assert_eq!(x.edge_counts(), (6, 0));
    }

    #[test]
    fn zeta_blue_moves_split_two_retreats_one_pair_swap() {
        // Of ζ^2_{B,2}'s three blue edges, exactly one leads to ξ^2_{B,2}
        // (out of the attraction basin) and two retreat toward ω_2.
        let params = ModelParams::new(8, 5, 12, 1.0).unwrap();
        let z = make_zeta(&params, 2, Species::B, 2).unwrap();
        let mut to_xi = 0;
        let mut retreats = 0;
        for e in -12i64..=12 {
            if z.classify_edge(e) == EdgeClass::Blue {
                let nb = z.transpose(e, e + 1);
                match recognize(&params, &nb) {
                    ConfigId::Xi { .. } => to_xi += 1,
                    _ => retreats += 1,
                }
            }
        }
        assert_eq!(to_xi, 1);
        assert_eq!(retreats, 2);
    }

    #[test]
    fn recognize_round_trips() {
        for params in [
            ModelParams::new(3, 3, 3, 1.0).unwrap(),
            ModelParams::new(8, 5, 12, 1.0).unwrap(),
            ModelParams::new(3, 4, 6, 1.0).unwrap(),
        ] {
            let n = params.n() as i64;
            for k in -n..=n {
                assert_eq!(
                    recognize(&params, &make_omega(&params, k)),
                    ConfigId::Omega { k: k as i32 }
                );
                for alpha in Species::ALL {
                    for i in 0..=params.count(alpha) {
                        let z = make_zeta(&params, k, alpha, i).unwrap();
                        let id = recognize(&params, &z);
                        let expect = ConfigId::Zeta {
                            k: k as i32,
                            alpha,
                            i,
                        }
                        .canonical(&params);
                        assert_eq!(id, expect, "zeta k={k} alpha={alpha:?} i={i}");
                        if i >= 1 && i < params.count(alpha) {
                            let x = make_xi(&params, k, alpha, i).unwrap();
                            let id = recognize(&params, &x);
                            let expect = ConfigId::Xi {
                                k: k as i32,
                                alpha,
                                i,
                            }
                            .canonical(&params);
                            assert_eq!(id, expect, "xi k={k} alpha={alpha:?} i={i}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn recognize_canonicalizes_double_labels() {
        let params = ModelParams::new(8, 5, 12, 1.0).unwrap();
        let a = recognize(&params, &make_xi(&params, 2, Species::B, 1).unwrap());
        let b = recognize(&params, &make_xi(&params, 3, Species::A, 7).unwrap());
        assert_eq!(a, b);
        assert!(matches!(a, ConfigId::Xi { .. }));
    }

    #[test]
    fn recognize_rejects_scrambled_configs() {
        let params = ModelParams::new(3, 3, 3, 1.0).unwrap();
        // Two independent swaps away from every ω_k.
        let c = make_omega(&params, 0).transpose(1, 2).transpose(5, 7);
        assert_eq!(recognize(&params, &c), ConfigId::Other);
    }
}
