//! Breadth-first exploration of the slow-move neighborhood of a segregated
//! configuration, with the blue-move decomposition used by the basin
//! analysis. Oracle-grade code for tiny rings and shallow depths.

use std::collections::HashMap;

use crate::families::make_omega;
use crate::ring::{EdgeClass, ModelParams, RingConfig};
use crate::{ModelError, Result};

/// One explored configuration with its neighbor decomposition.
#[derive(Debug, Clone)]
pub struct BallNode {
    pub config: RingConfig,
    /// Red-move distance from the anchor `ω_k`.
    pub distance: u32,
    /// Number of red edges `|R(ω)|`.
    pub red: u32,
    /// Blue moves that fall back into the explored basin (`|B*_k(ω)|`).
    pub blue_back: u32,
    /// Blue moves that leave the basin (`|D*_k(ω)|`).
    pub blue_out: Vec<RingConfig>,
}

/// Result of [`bfs_neighborhood`]: nodes grouped by red-move distance.
#[derive(Debug, Clone)]
pub struct RedBall {
    pub levels: Vec<Vec<BallNode>>,
}

impl RedBall {
    pub fn level(&self, n: usize) -> &[BallNode] {
        &self.levels[n]
    }

    pub fn total(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = &BallNode> {
        self.levels.iter().flatten()
    }
}

/// All configurations reachable from `ω` by one red move, with the edge used.
pub fn red_neighbors(config: &RingConfig) -> Vec<RingConfig> {
    neighbors_of_class(config, EdgeClass::Red)
}

/// All configurations reachable from `ω` by one blue move.
pub fn blue_neighbors(config: &RingConfig) -> Vec<RingConfig> {
    neighbors_of_class(config, EdgeClass::Blue)
}

fn neighbors_of_class(config: &RingConfig, class: EdgeClass) -> Vec<RingConfig> {
    let size = config.len() as i64;
    (0..size)
        .filter(|&e| config.classify_edge(e) == class)
        .map(|e| config.transpose(e, e + 1))
        .collect()
}

/// Explore red-move reachability from `ω_k` up to `depth`, decomposing each
/// node's blue moves into basin-returning (`B*_k`) and basin-leaving (`D*_k`)
/// moves. Basin membership is decided against the previously explored level,
/// which is exact for `depth ≤ M`.
///
/// Guarded: requires `2N+1 ≤ 13` or `depth ≤ M` to bound memory.
pub fn bfs_neighborhood(params: &ModelParams, k: i64, depth: u32) -> Result<RedBall> {
    if params.ring_size() > 13 && depth > params.m_min() {
        return Err(ModelError::GuardViolation(format!(
            "red-ball exploration needs ring ≤ 13 sites or depth ≤ M = {} (got ring {}, depth {})",
            params.m_min(),
            params.ring_size(),
            depth
        )));
    }
    let root = make_omega(params, k);
    let mut seen: HashMap<u64, u32> = HashMap::new();
    seen.insert(root.pack_key(), 0);
    let mut levels: Vec<Vec<RingConfig>> = vec![vec![root]];
    for d in 1..=depth {
        let mut next = Vec::new();
        for cfg in &levels[(d - 1) as usize] {
            for nb in red_neighbors(cfg) {
                let key = nb.pack_key();
                if !seen.contains_key(&key) {
                    seen.insert(key, d);
                    next.push(nb);
                }
            }
        }
        levels.push(next);
    }
    // Decompose blue moves level by level against the level below.
    let ball = RedBall {
        levels: levels
            .iter()
            .enumerate()
            .map(|(d, configs)| {
                configs
                    .iter()
                    .map(|cfg| {
                        let mut blue_back = 0;
                        let mut blue_out = Vec::new();
                        for nb in blue_neighbors(cfg) {
                            let back = d > 0
                                && seen.get(&nb.pack_key()).copied() == Some(d as u32 - 1);
                            if back {
                                blue_back += 1;
                            } else {
                                blue_out.push(nb);
                            }
                        }
                        BallNode {
                            red: red_neighbors(cfg).len() as u32,
                            distance: d as u32,
                            blue_back,
                            blue_out,
                            config: cfg.clone(),
                        }
                    })
                    .collect()
            })
            .collect(),
    };
    Ok(ball)
}

/// Packed keys of every configuration within red-move depth `M` of `ω_0`.
/// Shift-invariance makes one ball per parameter set sufficient.
pub fn red_ball_keys(params: &ModelParams, depth: u32) -> Result<std::collections::HashSet<u64>> {
    let ball = bfs_neighborhood(params, 0, depth)?;
    Ok(ball.iter().map(|n| n.config.pack_key()).collect())
}
