//! Live teaching session over a WebSocket.
//!
//! [`TeachSession`] is the transport-free state machine: it proposes the
//! learner's next action with every candidate, takes one piece of feedback
//! per proposal, applies at most one update and advances the world.
//! [`router`] and [`serve`] put a single session at a time behind `/ws`
//! using the JSON messages in [`protocol`].

pub mod protocol;
mod server;
mod session;

pub use protocol::{
    parse_client, Ack, Candidate, ClientMessage, Envelope, ErrorCode, ErrorReply, Export, Mode, Proposal,
    ServerMessage, Welcome, PROTOCOL_VERSION,
};
pub use server::{router, serve, serve_listener};
pub use session::{replay, TeachSession};
