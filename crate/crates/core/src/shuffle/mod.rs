//! Deck dynamics, coin pools, card traces, collisions and the coupling.

mod coin;
mod collide;
mod coupling;
mod deck;
mod dynamics;
mod router;
mod trace;

pub use coin::{
    coins_from_bits, keyed_rng, Coin, CoinSource, CoinStream, CoinTape, PoolLabel, Pools, Role, RoleSet,
    ScriptedPools, SeededPools,
};
pub use collide::{detect_collisions, first_match_after, is_collision_pair, CollisionEvent, MatchResult};
pub use coupling::{
    coupled_run, coupled_run_with, replay_worked_example, route_pi, route_prime, worked_example_expected,
    CoupleConfig, CoupleError, CoupledSim, CoupledState, CoupledStep, CouplingReport, Decoupling,
    DecouplingCause, PoolCounters, WorkedExample, WorkedExampleMismatch, WorkedRow,
};
pub use deck::{perm_sign, DeckError, DeckState, ReferenceDeck};
pub use dynamics::{next_position, prev_position, run, run_inverse, step, ShuffleError};
pub use router::{route_coins, route_three, RouteRecord};
pub use trace::{
    classify, compare_cards, movement_bound, track_card, verify_movement_bound, verify_movement_identity,
    BoundCheck, BoundViolation, CardTrace, CoinUse, Counters, IdentityViolation,
};
