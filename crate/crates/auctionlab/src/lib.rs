//! Auction mechanisms, reserve-price learning and strategic bidding.
//!
//! The crate covers four layers of the single-item auction stack:
//!
//! * [`dist`] / [`mech`] / [`equil`]: the Bayesian groundwork. Value
//!   distributions with virtual values and ironing, one-shot mechanism
//!   execution (Vickrey, lazy/eager reserves, L-level floors, Myerson,
//!   boosted second price, first price) and classical equilibrium
//!   cross-checks (first-price best response and symmetric equilibrium,
//!   revenue equivalence, Bulow–Klemperer).
//! * [`batch`]: learning mechanisms from value samples. Empirical and
//!   guarded monopoly prices, ERM over reserve classes, L-level and boosted
//!   searches, contextual partition reserves, sample-complexity sweeps.
//! * [`online`] / [`bidlearn`]: sequential learning on both sides of the
//!   market: UCB/EXP3 bandits, posted-price learners, cautious search,
//!   reserve learning in repeated second-price auctions, learning to bid
//!   with unknown value or mechanism, and budget pacing by dual descent.
//! * [`strat`] / [`dynamic`]: strategic play. Bid shading against
//!   mechanism-learning sellers (virtual-value thresholding, linear shading,
//!   thresholded-class Nash, shading in the Myerson auction) and dynamic
//!   seller-vs-buyer games (exploiting mean-based bidders, entry fees,
//!   two-phase pricing against discounted buyers).
//!
//! [`harness`] orchestrates seeded, replicated experiments behind the
//! `auctionlab` CLI; every run is deterministic given its master seed.
//!
//! See the `examples/` directory for one runnable walk-through per
//! capability (`cargo run --release --example revenue_uplift`, ...).

pub mod batch;
pub mod bidlearn;
pub mod dist;
pub mod dynamic;
pub mod equil;
pub mod error;
pub mod harness;
pub mod mech;
pub mod num;
pub mod online;
pub mod rng;
pub mod strat;

pub use error::{Error, Result};
