//! Message identification toolkit.
//!
//! A receiver that expects one particular message `u` only has to decide
//! whether `u` was sent. The sender therefore transmits a short word instead
//! of the whole message:
//!
//! * [`identify_code`]: an index `i` and the tag `c_i = (u, g^[i])`, where
//!   `g^[i]` is a column of a random linear code derived from a shared key.
//! * [`identify_prng`]: a random seed `σ` and the tags `τ = u·G(σ)`, where
//!   `G(σ)` is expanded from `σ` by a generator (a nonlinear default, or an
//!   LFSR that is broken by [`identify_prng::lfsr_attack`]).
//!
//! [`bounds`] holds the rate and bound calculators, [`experiments`] the
//! Monte Carlo and exhaustive checks of the false-acceptance probability,
//! and [`wire_net`] the bit-exact word format and a UDP caller/responder.

pub mod bits;
pub mod bounds;
pub mod error;
pub mod experiments;
pub mod gf;
pub mod identify_code;
pub mod identify_prng;
pub mod message;
pub mod scheme;
pub mod verdict;
pub mod wire_net;

pub use error::{Error, Result};
pub use gf::{Field, FieldElement, FieldVector};
pub use message::Message;
pub use scheme::{IdentWord, Scheme};
pub use verdict::{Malformed, Rejection, Verdict};
