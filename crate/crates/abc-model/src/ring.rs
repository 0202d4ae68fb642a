//! Ring configurations, nearest-neighbor swap moves, edge classification and
//! the conserved-density energy function.
//!
//! Sites live on the discrete ring `Λ_N = {-N, …, N}` of odd size `2N+1`.
//! Internally a configuration is stored as a contiguous vector indexed by
//! `0..2N+1`; the bijection is `site j ↦ j mod (2N+1)`, so public APIs speak
//! `Λ_N` while storage stays contiguous.

use num::rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::{ModelError, Result};

/// Particle species. The cyclic successor order is `A → B → C → A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Species {
    A,
    B,
    C,
}

impl Species {
    pub const ALL: [Species; 3] = [Species::A, Species::B, Species::C];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> Species {
        Species::ALL[i.rem_euclid(3)]
    }

    /// Cyclic successor: `A → B → C → A`.
    #[inline]
    pub fn succ(self) -> Species {
        Species::from_index(self.index() + 1)
    }

    /// Cyclic predecessor.
    #[inline]
    pub fn pred(self) -> Species {
        Species::from_index(self.index() + 2)
    }

    /// Successor applied `n` times (`n` may be negative).
    #[inline]
    pub fn shift(self, n: i64) -> Species {
        Species::from_index((self.index() as i64 + n).rem_euclid(3) as usize)
    }

    pub fn letter(self) -> char {
        match self {
            Species::A => 'A',
            Species::B => 'B',
            Species::C => 'C',
        }
    }

    pub fn from_letter(c: char) -> Option<Species> {
        match c {
            'A' => Some(Species::A),
            'B' => Some(Species::B),
            'C' => Some(Species::C),
            _ => None,
        }
    }
}

/// Classification of a ring edge by the swap rate of the pair it joins.
///
/// `Red` pairs `(α, α+1)` swap at rate `e^{-β}`, `Blue` pairs `(α+1, α)` swap
/// at rate `1`, `Black` joins equal species and never swaps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeClass {
    Red,
    Blue,
    Black,
}

impl EdgeClass {
    /// Class of the ordered pair `(left, right)`.
    #[inline]
    pub fn of(left: Species, right: Species) -> EdgeClass {
        if left == right {
            EdgeClass::Black
        } else if right == left.succ() {
            EdgeClass::Red
        } else {
            EdgeClass::Blue
        }
    }
}

/// Block sizes and inverse temperature defining one model instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n_a: u32,
    pub n_b: u32,
    pub n_c: u32,
    pub beta: f64,
}

impl ModelParams {
    pub fn new(n_a: u32, n_b: u32, n_c: u32, beta: f64) -> Result<ModelParams> {
        let p = ModelParams { n_a, n_b, n_c, beta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_a == 0 || self.n_b == 0 || self.n_c == 0 {
            return Err(ModelError::InvalidParams(
                "particle counts must be positive".into(),
            ));
        }
        if (self.n_a + self.n_b + self.n_c) % 2 == 0 {
            return Err(ModelError::InvalidParams(
                "ring size must be odd (N_A + N_B + N_C = 2N + 1)".into(),
            ));
        }
        if !(self.beta >= 0.0) {
            return Err(ModelError::InvalidParams(
                "beta must be nonnegative".into(),
            ));
        }
        Ok(())
    }

    /// Number of particles of one species.
    #[inline]
    pub fn count(&self, s: Species) -> u32 {
        match s {
            Species::A => self.n_a,
            Species::B => self.n_b,
            Species::C => self.n_c,
        }
    }

    /// Ring size `2N + 1`.
    #[inline]
    pub fn ring_size(&self) -> u32 {
        self.n_a + self.n_b + self.n_c
    }

    /// Half-width `N` of the ring `{-N, …, N}`.
    #[inline]
    pub fn n(&self) -> u32 {
        (self.ring_size() - 1) / 2
    }

    /// Minimal block size `M`.
    #[inline]
    pub fn m_min(&self) -> u32 {
        self.n_a.min(self.n_b).min(self.n_c)
    }

    /// Maximal block size `M*`.
    #[inline]
    pub fn m_max(&self) -> u32 {
        self.n_a.max(self.n_b).max(self.n_c)
    }

    /// Number of species realizing the minimal block size (1, 2 or 3).
    #[inline]
    pub fn degeneracy(&self) -> u32 {
        let m = self.m_min();
        Species::ALL.iter().filter(|&&s| self.count(s) == m).count() as u32
    }

    /// Species whose block size equals the minimum, in `A < B < C` order.
    pub fn minimal_species(&self) -> Vec<Species> {
        let m = self.m_min();
        Species::ALL
            .iter()
            .copied()
            .filter(|&s| self.count(s) == m)
            .collect()
    }

    /// Swap rate `q = e^{-β}` of the slow moves.
    #[inline]
    pub fn q(&self) -> f64 {
        (-self.beta).exp()
    }

    /// Diffusive time scale `θ_β = e^{Mβ} N² / (2d)`.
    pub fn theta_beta(&self) -> f64 {
        let n = self.n() as f64;
        (self.m_min() as f64 * self.beta).exp() * n * n / (2.0 * self.degeneracy() as f64)
    }

    /// Wrap an integer site index to its representative in `[-N, N]`.
    #[inline]
    pub fn wrap_site(&self, j: i64) -> i32 {
        let l = self.ring_size() as i64;
        let n = self.n() as i64;
        let mut r = j.rem_euclid(l);
        if r > n {
            r -= l;
        }
        r as i32
    }

    /// Storage slot (`0..2N+1`) of a site index.
    #[inline]
    pub fn slot(&self, j: i64) -> usize {
        j.rem_euclid(self.ring_size() as i64) as usize
    }
}

/// Occupancy of the ring: one particle per site.
///
/// Equality and hashing are by site content; species counts are cached and
/// conserved by every swap.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingConfig {
    sites: Vec<Species>,
    counts: [u32; 3],
}

impl RingConfig {
    /// Build from a function of the storage slot `0..2N+1`
    /// (slot `p` is site `p`, with sites beyond `N` wrapping to negatives).
    pub fn from_slot_fn(size: u32, f: impl Fn(usize) -> Species) -> RingConfig {
        let sites: Vec<Species> = (0..size as usize).map(f).collect();
        let mut counts = [0u32; 3];
        for &s in &sites {
            counts[s.index()] += 1;
        }
        RingConfig { sites, counts }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.sites.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// Species at site `j` (any integer; wrapped mod ring size).
    #[inline]
    pub fn get(&self, j: i64) -> Species {
        self.sites[j.rem_euclid(self.sites.len() as i64) as usize]
    }

    #[inline]
    pub fn get_slot(&self, p: usize) -> Species {
        self.sites[p]
    }

    pub fn counts(&self) -> [u32; 3] {
        self.counts
    }

    pub fn matches(&self, params: &ModelParams) -> bool {
        self.sites.len() == params.ring_size() as usize
            && self.counts == [params.n_a, params.n_b, params.n_c]
    }

    /// Exchange the particles at sites `i` and `j` (`σ^{i,j}`), returning the
    /// new configuration. Species counts are conserved.
    pub fn transpose(&self, i: i64, j: i64) -> RingConfig {
        let mut out = self.clone();
        out.transpose_in_place(i, j);
        out
    }

    #[inline]
    pub fn transpose_in_place(&mut self, i: i64, j: i64) {
        let l = self.sites.len() as i64;
        let a = i.rem_euclid(l) as usize;
        let b = j.rem_euclid(l) as usize;
        self.sites.swap(a, b);
    }

    /// Shift operator `Θ^k`: `(Θ^k ω)(i) = ω(i - k)`.
    pub fn shift(&self, k: i64) -> RingConfig {
        let l = self.sites.len() as i64;
        let sites: Vec<Species> = (0..l)
            .map(|i| self.get(i - k))
            .collect();
        RingConfig {
            sites,
            counts: self.counts,
        }
    }

    /// Class of edge `k`, the edge joining sites `k` and `k+1`
    /// (edge `N` wraps to site `-N`).
    #[inline]
    pub fn classify_edge(&self, k: i64) -> EdgeClass {
        EdgeClass::of(self.get(k), self.get(k + 1))
    }

    /// Swap rate of edge `k`: `e^{-β}` for red, `1` for blue, `0` for black.
    pub fn jump_rate(&self, k: i64, beta: f64) -> f64 {
        match self.classify_edge(k) {
            EdgeClass::Red => (-beta).exp(),
            EdgeClass::Blue => 1.0,
            EdgeClass::Black => 0.0,
        }
    }

    /// Numbers of (red, blue) edges.
    pub fn edge_counts(&self) -> (u32, u32) {
        let mut red = 0;
        let mut blue = 0;
        for p in 0..self.sites.len() {
            match EdgeClass::of(self.sites[p], self.sites[(p + 1) % self.sites.len()]) {
                EdgeClass::Red => red += 1,
                EdgeClass::Blue => blue += 1,
                EdgeClass::Black => {}
            }
        }
        (red, blue)
    }

    /// Exact energy `H(ω) = (1/(2N+1)) Σ_k Σ_{i=1}^{2N} i·1{(ω(k), ω(k+i)) red-ordered}`.
    ///
    /// The double sum of indicators times `i` is an integer; the division by
    /// the ring size happens once at the end, so increments under single swaps
    /// are exact (`±1` or `0` at equal densities).
    pub fn hamiltonian(&self) -> Ratio<i64> {
        let l = self.sites.len();
        let mut num: i64 = 0;
        for k in 0..l {
            let a = self.sites[k];
            for i in 1..l {
                let b = self.sites[(k + i) % l];
                if b == a.succ() {
                    num += i as i64;
                }
            }
        }
        Ratio::new(num, l as i64)
    }

    /// Pack into a `u64` key, 2 bits per site. Only valid for rings of at
    /// most 32 sites; used for hashing and memoization on small instances.
    pub fn pack_key(&self) -> u64 {
        debug_assert!(self.sites.len() <= 32);
        let mut key = 0u64;
        for (p, &s) in self.sites.iter().enumerate() {
            key |= (s.index() as u64) << (2 * p);
        }
        key
    }

    /// Text rendering: characters run clockwise from site 0, with `|` marking
    /// the wrap boundary just before site 0.
    pub fn to_marked_string(&self) -> String {
        let mut s = String::with_capacity(self.sites.len() + 1);
        s.push('|');
        for &x in &self.sites {
            s.push(x.letter());
        }
        s
    }

    /// Parse the `to_marked_string` format (the leading `|` is optional).
    pub fn parse(text: &str) -> Result<RingConfig> {
        let body = text.strip_prefix('|').unwrap_or(text);
        let sites: Option<Vec<Species>> = body.chars().map(Species::from_letter).collect();
        let sites = sites.ok_or_else(|| {
            ModelError::Invalid(format!("invalid configuration string {text:?}"))
        })?;
        if sites.is_empty() {
            return Err(ModelError::Invalid("empty configuration string".into()));
        }
        let mut counts = [0u32; 3];
        for &s in &sites {
            counts[s.index()] += 1;
        }
        Ok(RingConfig { sites, counts })
    }
}

impl std::fmt::Display for RingConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_marked_string())
    }
}
