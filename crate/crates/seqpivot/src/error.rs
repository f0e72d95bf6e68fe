use thiserror::Error;

/// Errors surfaced by the toolkit. Configuration and domain violations are
/// distinguished from [`Error::InternalInvariant`], which signals a bug: a
/// condition the theory guarantees cannot occur. Payload values are
/// pre-rendered so the enum stays small on the happy path.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid rational: {0}")]
    InvalidRational(String),

    #[error("need at least 2 players, got {0}")]
    PlayerCount(usize),

    #[error("project cost must be positive, got {0}")]
    NonPositiveCost(String),

    #[error("type {value} outside [0, {cost}]")]
    TypeOutOfRange { value: String, cost: String },

    #[error("expected {expected} values, got {got}")]
    WrongLength { expected: usize, got: usize },

    #[error("player index {index} out of range 1..={n}")]
    PlayerIndex { index: usize, n: usize },

    #[error("prefix has {got} entries, player {player} expects {expected}")]
    PrefixLength {
        player: usize,
        expected: usize,
        got: usize,
    },

    #[error("cannot compose strategies of players {left} and {right}")]
    PlayerMismatch { left: usize, right: usize },

    #[error("tabulated strategy has no entry for prefix {prefix}, own type {own}")]
    OffGridLookup { prefix: String, own: String },

    #[error("not a permutation of 1..={n}: {order:?}")]
    InvalidOrder { order: Vec<usize>, n: usize },

    #[error("{n} players means {n}! orders; refusing to enumerate beyond n = {limit}")]
    TooManyOrders { n: usize, limit: usize },

    #[error("grid would have {profiles} profiles, above the {limit} limit")]
    GridTooLarge { profiles: u128, limit: u128 },

    #[error("grid needs at least one step")]
    ZeroSteps,

    #[error("unknown strategy id: {0}")]
    UnknownStrategy(String),

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),

    #[error("configuration error: {0}")]
    Config(String),
}
