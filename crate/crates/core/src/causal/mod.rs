//! Causal-order protocols: the causal-inequality game, the quantum switch
//! and its clock-dependent variant, gravitational time dilation as a source
//! of signal ordering, and the Bell test for temporal order.

mod game;
mod gravity;
mod switch;
mod temporal_bell;

pub use game::{
    causal_game_classical_max, causal_game_simulate, CausalGameStrategy, CausalOrder,
    ClassicalGameMax, GameEstimate, Guess, CAUSAL_BOUND, MAX_GAME_ALPHABET,
};
pub use gravity::{
    gravitational_switch, metric_factor, proper_time, signal_order, time_deficit,
    GravSwitchOutcome, GravitationalScenario, OrderVerdict, SignalOrder,
};
pub use switch::{
    quantum_switch, quantum_switch_clock_broken, switch_map, ClockBroken, SwitchBranch,
    SwitchOutcome, SwitchSpec,
};
pub use temporal_bell::{temporal_bell_protocol, TemporalBellBranch, TemporalBellOutcome};
