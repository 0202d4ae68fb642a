//! Event-driven continuous-time simulation of the swap dynamics.
//!
//! Only two rate values exist (`1` for blue edges, `e^{-β}` for red ones), so
//! edge selection uses a two-bucket decomposition: pick the bucket with
//! probability proportional to `count × rate`, then uniformly inside it.
//! Each event changes the classes of at most three edges, which are updated
//! incrementally; the bucket totals are integer counts, so the total rate is
//! exact at all times and merely audited periodically.
//!
//! Time and jump selection consume two independent RNG streams derived from
//! the seed, so the expected-holding-time mode walks the exact same jump
//! sequence as the sampled mode.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exec::{derive_seed, replica_map};
use crate::families::{make_omega, recognize, segregated_anchor, ConfigId};
use crate::ring::{EdgeClass, ModelParams, RingConfig, Species};
use crate::{ModelError, Result};

const AUDIT_INTERVAL: u64 = 1 << 20;

/// How the clock advances per event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeMode {
    /// Sample `Exponential(total rate)` holding times.
    Sampled,
    /// Advance by the conditional expectation `1 / total rate` given the
    /// jump path (variance-reduction fast path; same jump-chain law).
    Expected,
}

/// Stop conditions, composable by OR (first satisfied wins).
pub enum StopCondition {
    MaxTime(f64),
    MaxEvents(u64),
    /// Stop as soon as the configuration satisfies the predicate (checked at
    /// start and after every event).
    HitSet(Box<dyn Fn(&RingConfig) -> bool + Send + Sync>),
    /// Stop at the first satisfying configuration after at least one jump.
    FirstReturn(Box<dyn Fn(&RingConfig) -> bool + Send + Sync>),
}

/// One recorded jump: when, which edge, and the class the swapped edge has
/// after the move (red moves leave a blue edge behind and vice versa).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub time: f64,
    /// Edge index in `[-N, N]`.
    pub edge: i32,
    pub class_after: EdgeClass,
}

/// A simulated trajectory: seed, initial configuration, and the jump events.
/// Replaying the events from the initial configuration reproduces the final
/// configuration exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct EventLog {
    pub params: ModelParams,
    pub seed: u64,
    pub initial_id: ConfigId,
    pub initial: RingConfig,
    pub events: Vec<Event>,
}

impl EventLog {
    /// Re-apply all events to the initial configuration.
    pub fn replay_final(&self) -> RingConfig {
        let mut c = self.initial.clone();
        for ev in &self.events {
            c.transpose_in_place(ev.edge as i64, ev.edge as i64 + 1);
        }
        c
    }
}

/// Outcome of a bounded simulation run.
#[derive(Debug, Clone)]
pub struct SimResult {
    pub final_config: RingConfig,
    pub elapsed: f64,
    pub events: u64,
    pub log: EventLog,
}

// Kahan-compensated accumulator for the clock.
#[derive(Debug, Clone, Copy, Default)]
struct Kahan {
    sum: f64,
    c: f64,
}

impl Kahan {
    #[inline]
    fn add(&mut self, x: f64) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }
}

// Constant-time insert/remove index set over edge slots.
#[derive(Debug, Clone)]
struct SlotSet {
    members: Vec<u32>,
    pos: Vec<u32>,
}

const ABSENT: u32 = u32::MAX;

impl SlotSet {
    fn new(capacity: usize) -> SlotSet {
        SlotSet {
            members: Vec::with_capacity(capacity),
            pos: vec![ABSENT; capacity],
        }
    }

    #[inline]
    fn len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    fn insert(&mut self, x: u32) {
        if self.pos[x as usize] == ABSENT {
            self.pos[x as usize] = self.members.len() as u32;
            self.members.push(x);
        }
    }

    #[inline]
    fn remove(&mut self, x: u32) {
        let p = self.pos[x as usize];
        if p == ABSENT {
            return;
        }
        let last = *self.members.last().unwrap();
        self.members[p as usize] = last;
        self.pos[last as usize] = p;
        self.members.pop();
        self.pos[x as usize] = ABSENT;
    }

    #[inline]
    fn get(&self, i: usize) -> u32 {
        self.members[i]
    }
}

/// Live simulation state: configuration, active-edge buckets, clock and the
/// two RNG streams. Sendable between threads, never shared mutably.
pub struct SimState {
    params: ModelParams,
    config: RingConfig,
    reds: SlotSet,
    blues: SlotSet,
    q: f64,
    clock: Kahan,
    events: u64,
    rng_time: ChaCha8Rng,
    rng_choice: ChaCha8Rng,
    mode: TimeMode,
}

impl SimState {
    pub fn new(params: &ModelParams, init: RingConfig, seed: u64, mode: TimeMode) -> SimState {
        assert!(
            init.matches(params),
            "initial configuration inconsistent with parameters"
        );
        let size = params.ring_size() as usize;
        let mut reds = SlotSet::new(size);
        let mut blues = SlotSet::new(size);
        for e in 0..size {
            match EdgeClass::of(init.get_slot(e), init.get_slot((e + 1) % size)) {
                EdgeClass::Red => reds.insert(e as u32),
                EdgeClass::Blue => blues.insert(e as u32),
                EdgeClass::Black => {}
            }
        }
        SimState {
            params: *params,
            config: init,
            reds,
            blues,
            q: params.q(),
            clock: Kahan::default(),
            events: 0,
            rng_time: ChaCha8Rng::seed_from_u64(derive_seed(seed, 0x7414)),
            rng_choice: ChaCha8Rng::seed_from_u64(derive_seed(seed, 0xc401)),
            mode,
        }
    }

    #[inline]
    pub fn total_rate(&self) -> f64 {
        self.blues.len() as f64 + self.reds.len() as f64 * self.q
    }

    #[inline]
    pub fn config(&self) -> &RingConfig {
        &self.config
    }

    #[inline]
    pub fn clock(&self) -> f64 {
        self.clock.sum
    }

    #[inline]
    pub fn events(&self) -> u64 {
        self.events
    }

    #[inline]
    pub fn active_counts(&self) -> (usize, usize) {
        (self.reds.len(), self.blues.len())
    }

    /// Execute one event. Returns `(dt, edge slot, class of the move taken)`.
    /// The move class is the class of the chosen edge *before* the swap.
    #[inline]
    pub fn step(&mut self) -> (f64, u32, EdgeClass) {
        let nb = self.blues.len() as f64;
        let total = nb + self.reds.len() as f64 * self.q;
        if total <= 0.0 {
            // Impossible on this state space: every configuration with all
            // three species present has at least one non-black edge.
            panic!("total jump rate vanished; corrupt state");
        }
        let dt = match self.mode {
            TimeMode::Sampled => {
                let u: f64 = self.rng_time.gen::<f64>();
                let u = if u <= 0.0 { f64::MIN_POSITIVE } else { u };
                -u.ln() / total
            }
            TimeMode::Expected => 1.0 / total,
        };
        let pick: f64 = self.rng_choice.gen::<f64>() * total;
        let (edge, class) = if pick < nb {
            let i = (pick as usize).min(self.blues.len() - 1);
            (self.blues.get(i), EdgeClass::Blue)
        } else {
            let i = (((pick - nb) / self.q) as usize).min(self.reds.len() - 1);
            (self.reds.get(i), EdgeClass::Red)
        };
        self.apply_swap(edge);
        self.clock.add(dt);
        self.events += 1;
        if self.events % AUDIT_INTERVAL == 0 {
            self.audit();
        }
        (dt, edge, class)
    }

    #[inline]
    fn apply_swap(&mut self, edge: u32) {
        let size = self.config.len();
        let e = edge as usize;
        self.config.transpose_in_place(e as i64, e as i64 + 1);
        let prev = (e + size - 1) % size;
        let next = (e + 1) % size;
        for slot in [prev, e, next] {
            let class = EdgeClass::of(
                self.config.get_slot(slot),
                self.config.get_slot((slot + 1) % size),
            );
            let s = slot as u32;
            match class {
                EdgeClass::Red => {
                    self.blues.remove(s);
                    self.reds.insert(s);
                }
                EdgeClass::Blue => {
                    self.reds.remove(s);
                    self.blues.insert(s);
                }
                EdgeClass::Black => {
                    self.reds.remove(s);
                    self.blues.remove(s);
                }
            }
        }
    }

    /// Recount edge classes from the configuration and check the incremental
    /// bookkeeping.
    pub fn audit(&self) {
        let size = self.config.len();
        let mut red = 0usize;
        let mut blue = 0usize;
        for e in 0..size {
            match EdgeClass::of(self.config.get_slot(e), self.config.get_slot((e + 1) % size)) {
                EdgeClass::Red => red += 1,
                EdgeClass::Blue => blue += 1,
                EdgeClass::Black => {}
            }
        }
        assert_eq!(
            (red, blue),
            (self.reds.len(), self.blues.len()),
            "active-edge bookkeeping diverged from configuration"
        );
    }

    /// Cheap segregation test: exactly three active edges, all red.
    #[inline]
    pub fn is_segregated(&self) -> bool {
        self.blues.len() == 0 && self.reds.len() == 3
    }
}

fn storage_edge_to_lambda(params: &ModelParams, slot: u32) -> i32 {
    params.wrap_site(slot as i64)
}

fn run_with_stops(
    params: &ModelParams,
    init: RingConfig,
    stops: &[StopCondition],
    seed: u64,
    mode: TimeMode,
) -> SimResult {
    let initial_id = recognize(params, &init);
    let mut state = SimState::new(params, init.clone(), seed, mode);
    let mut events = Vec::new();
    let satisfied = |state: &SimState, jumped: bool| -> bool {
        stops.iter().any(|s| match s {
            StopCondition::MaxTime(t) => state.clock() >= *t,
            StopCondition::MaxEvents(n) => state.events() >= *n,
            StopCondition::HitSet(p) => p(state.config()),
            StopCondition::FirstReturn(p) => jumped && p(state.config()),
        })
    };
    if !satisfied(&state, false) {
        loop {
            let (_dt, edge, class) = state.step();
            let class_after = match class {
                EdgeClass::Red => EdgeClass::Blue,
                EdgeClass::Blue => EdgeClass::Red,
                EdgeClass::Black => unreachable!(),
            };
            events.push(Event {
                time: state.clock(),
                edge: storage_edge_to_lambda(params, edge),
                class_after,
            });
            if satisfied(&state, true) {
                break;
            }
        }
    }
    SimResult {
        final_config: state.config().clone(),
        elapsed: state.clock(),
        events: state.events(),
        log: EventLog {
            params: *params,
            seed,
            initial_id,
            initial: init,
            events,
        },
    }
}

/// Simulate with sampled exponential holding times.
pub fn simulate(
    params: &ModelParams,
    init: RingConfig,
    stops: &[StopCondition],
    seed: u64,
) -> SimResult {
    run_with_stops(params, init, stops, seed, TimeMode::Sampled)
}

/// Simulate the same jump chain with the clock advanced by expected holding
/// times `1/total_rate` instead of sampled exponentials.
pub fn embedded_mode(
    params: &ModelParams,
    init: RingConfig,
    stops: &[StopCondition],
    seed: u64,
) -> SimResult {
    run_with_stops(params, init, stops, seed, TimeMode::Expected)
}

/// One trace-transition sample: the run from `ω_start` to the first visit of
/// a different segregated configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionSample {
    /// Signed ring displacement `k' - k` wrapped to `(-N, N]`.
    pub displacement: i32,
    /// Total elapsed time in model units.
    pub elapsed: f64,
    /// Time spent at the start configuration (the trace-clock holding time).
    pub holding: f64,
    pub events: u64,
    /// Identity `(α, i)` of the first configuration at red-move distance `M`
    /// from the start anchor, when that configuration is a meeting state,
    /// expressed in the representation anchored at the start.
    pub meeting: Option<(Species, u32)>,
    pub censored: bool,
}

/// Run `n_samples` independent excursions from `ω_{start_k}` until the first
/// return to a *different* segregated configuration.
///
/// Requires `M ≥ 3`. Warns (via the returned flag) when `N e^{-β} ≥ 0.5`,
/// where the metastable approximation degrades. Samples are generated
/// replica-parallel with per-sample seeds; results are independent of thread
/// count.
pub fn run_transitions(
    params: &ModelParams,
    start_k: i64,
    n_samples: usize,
    seed: u64,
    event_cap: u64,
) -> Result<TransitionBatch> {
    if params.m_min() < 3 {
        return Err(ModelError::InvalidParams(
            "trace-transition sampling needs M ≥ 3".into(),
        ));
    }
    let regime_warning = params.n() as f64 * params.q() >= 0.5;
    let samples = replica_map(n_samples, |idx| {
        sample_transition(params, start_k, derive_seed(seed, idx as u64), event_cap)
    });
    Ok(TransitionBatch {
        samples,
        regime_warning,
    })
}

/// Sequential variant of [`run_transitions`] (same output; used by benches).
pub fn run_transitions_seq(
    params: &ModelParams,
    start_k: i64,
    n_samples: usize,
    seed: u64,
    event_cap: u64,
) -> Result<TransitionBatch> {
    if params.m_min() < 3 {
        return Err(ModelError::InvalidParams(
            "trace-transition sampling needs M ≥ 3".into(),
        ));
    }
    let regime_warning = params.n() as f64 * params.q() >= 0.5;
    let samples = crate::exec::replica_map_seq(n_samples, |idx| {
        sample_transition(params, start_k, derive_seed(seed, idx as u64), event_cap)
    });
    Ok(TransitionBatch {
        samples,
        regime_warning,
    })
}

#[derive(Debug, Clone)]
pub struct TransitionBatch {
    pub samples: Vec<TransitionSample>,
    /// Set when `N e^{-β} ≥ 0.5` (limit-rate comparison unreliable).
    pub regime_warning: bool,
}

fn sample_transition(
    params: &ModelParams,
    start_k: i64,
    seed: u64,
    event_cap: u64,
) -> TransitionSample {
    let m = params.m_min();
    let start = make_omega(params, start_k);
    let start_anchor = params.wrap_site(start_k);
    let mut state = SimState::new(params, start.clone(), seed, TimeMode::Sampled);
    let mut holding = 0.0f64;
    let mut at_start = true;
    let mut depth: u32 = 0;
    let mut tracking = true;
    let mut meeting: Option<(Species, u32)> = None;
    loop {
        if state.events() >= event_cap {
            return TransitionSample {
                displacement: 0,
                elapsed: state.clock(),
                holding,
                events: state.events(),
                meeting,
                censored: true,
            };
        }
        let (dt, _edge, class) = state.step();
        if at_start {
            holding += dt;
        }
        // Track the red-move distance from the start anchor until the first
        // visit to distance M. Below distance M every blue move returns
        // toward the anchor, so the ±1 bookkeeping is exact.
        if tracking {
            match class {
                EdgeClass::Red => depth += 1,
                EdgeClass::Blue => depth -= 1,
                EdgeClass::Black => unreachable!(),
            }
            if depth == m {
                if let ConfigId::Zeta { k, alpha, i } = recognize(params, state.config()) {
                    meeting = fold_meeting(params, start_anchor, k, alpha, i);
                }
                tracking = false;
            }
        }
        if state.is_segregated() {
            let anchor = segregated_anchor(params, state.config())
                .expect("three red edges and no blue ones must be segregated");
            at_start = anchor == start_anchor;
            if !at_start {
                let diff = params.wrap_site(anchor as i64 - start_anchor as i64);
                return TransitionSample {
                    displacement: diff,
                    elapsed: state.clock(),
                    holding,
                    events: state.events(),
                    meeting,
                    censored: false,
                };
            }
            depth = 0;
        } else {
            at_start = false;
        }
    }
}

/// Express a canonical meeting label in the representation anchored at
/// `start`: `ζ^k_{α,i}` has the alternate labels `ζ^{k-1}_{α+1,0}` (i = N_α)
/// and `ζ^{k+1}_{α-1,N_{α-1}}` (i = 0).
fn fold_meeting(
    params: &ModelParams,
    start: i32,
    k: i32,
    alpha: Species,
    i: u32,
) -> Option<(Species, u32)> {
    if k == start {
        return Some((alpha, i));
    }
    if i == 0 && params.wrap_site(k as i64 + 1) == start {
        let prev = alpha.pred();
        return Some((prev, params.count(prev)));
    }
    if i == params.count(alpha) && params.wrap_site(k as i64 - 1) == start {
        return Some((alpha.succ(), 0));
    }
    None
}

// ---------------------------------------------------------------------------
// Event-log serialization: JSON header (length-prefixed) + binary frames.
// Frame: zigzag-varint edge index, f64 little-endian time.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct LogHeader {
    format_version: u32,
    params: ModelParams,
    seed: u64,
    initial_id: ConfigId,
    initial_sites: String,
    n_events: u64,
}

const LOG_FORMAT_VERSION: u32 = 1;

fn zigzag(v: i64) -> u64 {
    ((v << 1) ^ (v >> 63)) as u64
}

fn unzigzag(v: u64) -> i64 {
    ((v >> 1) as i64) ^ -((v & 1) as i64)
}

fn push_varint(buf: &mut Vec<u8>, mut v: u64) {
    while v >= 0x80 {
        buf.push((v as u8) | 0x80);
        v >>= 7;
    }
    buf.push(v as u8);
}

fn read_varint(data: &[u8], pos: &mut usize) -> Result<u64> {
    let mut v = 0u64;
    let mut shift = 0;
    loop {
        let b = *data
            .get(*pos)
            .ok_or_else(|| ModelError::Invalid("truncated varint".into()))?;
        *pos += 1;
        v |= ((b & 0x7f) as u64) << shift;
        if b & 0x80 == 0 {
            return Ok(v);
        }
        shift += 7;
        if shift >= 64 {
            return Err(ModelError::Invalid("varint overflow".into()));
        }
    }
}

/// Serialize an event log to bytes: `u32` header length, JSON header, frames.
pub fn write_event_log(log: &EventLog) -> Vec<u8> {
    let header = LogHeader {
        format_version: LOG_FORMAT_VERSION,
        params: log.params,
        seed: log.seed,
        initial_id: log.initial_id,
        initial_sites: log.initial.to_marked_string(),
        n_events: log.events.len() as u64,
    };
    let hdr = serde_json::to_vec(&header).expect("header serialization");
    let mut out = Vec::with_capacity(hdr.len() + log.events.len() * 10 + 4);
    out.extend_from_slice(&(hdr.len() as u32).to_le_bytes());
    out.extend_from_slice(&hdr);
    for ev in &log.events {
        push_varint(&mut out, zigzag(ev.edge as i64));
        out.extend_from_slice(&ev.time.to_le_bytes());
    }
    out
}

/// Parse the [`write_event_log`] format.
pub fn read_event_log(data: &[u8]) -> Result<EventLog> {
    if data.len() < 4 {
        return Err(ModelError::Invalid("truncated log".into()));
    }
    let hdr_len = u32::from_le_bytes(data[0..4].try_into().unwrap()) as usize;
    let hdr: LogHeader = serde_json::from_slice(
        data.get(4..4 + hdr_len)
            .ok_or_else(|| ModelError::Invalid("truncated header".into()))?,
    )
    .map_err(|e| ModelError::Invalid(format!("bad header: {e}")))?;
    if hdr.format_version != LOG_FORMAT_VERSION {
        return Err(ModelError::Invalid(format!(
            "unsupported log format version {}",
            hdr.format_version
        )));
    }
    let initial = RingConfig::parse(&hdr.initial_sites)?;
    let mut pos = 4 + hdr_len;
    let mut events = Vec::with_capacity(hdr.n_events as usize);
    let mut config = initial.clone();
    for _ in 0..hdr.n_events {
        let edge = unzigzag(read_varint(data, &mut pos)?) as i32;
        let t = data
            .get(pos..pos + 8)
            .ok_or_else(|| ModelError::Invalid("truncated frame".into()))?;
        pos += 8;
        let time = f64::from_le_bytes(t.try_into().unwrap());
        config.transpose_in_place(edge as i64, edge as i64 + 1);
        events.push(Event {
            time,
            edge,
            class_after: config.classify_edge(edge as i64),
        });
    }
    Ok(EventLog {
        params: hdr.params,
        seed: hdr.seed,
        initial_id: hdr.initial_id,
        initial,
        events,
    })
}
