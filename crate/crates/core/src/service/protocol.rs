//! Wire format of the teaching session, version 1.
//!
//! Every message is a JSON object carrying `v`, `type`, `session` and `seq`
//! next to its payload:
//!
//! ```json
//! {"v": 1, "type": "feedback", "session": "session-1", "seq": 3,
//!  "proposal": 2, "feedback": {"kind": "action", "teacher_index": 12}}
//! ```
//!
//! Clients send `hello`, `feedback` and `export`; the server answers with
//! `hello`, `propose`, `ack`, `export` and `error`.

use serde::{Deserialize, Serialize};

use crate::feedback::Feedback;
use crate::learner::Weights;
use crate::world::{FeatureVector, MapDocument};

pub const PROTOCOL_VERSION: u32 = 1;

/// How the session advances between proposals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Mode {
    /// Each step waits for feedback or an explicit skip.
    #[default]
    Stepper,
    /// A proposal left unanswered for `auto_advance_ms` counts as a skip.
    Timed { auto_advance_ms: u64 },
}

/// Fields shared by every message.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub v: u32,
    pub session: Option<String>,
    pub seq: u64,
    #[serde(flatten)]
    pub body: T,
}

impl<T> Envelope<T> {
    pub fn new(session: Option<String>, seq: u64, body: T) -> Self {
        Self {
            v: PROTOCOL_VERSION,
            session,
            seq,
            body,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ClientMessage {
    Hello {
        #[serde(default)]
        mode: Mode,
    },
    Feedback {
        proposal: u64,
        feedback: Feedback,
    },
    Export {},
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ServerMessage {
    Hello(Welcome),
    Propose(Proposal),
    Ack(Ack),
    Export(Export),
    Error(ErrorReply),
}

impl ServerMessage {
    pub fn kind(&self) -> &'static str {
        match self {
            ServerMessage::Hello(_) => "hello",
            ServerMessage::Propose(_) => "propose",
            ServerMessage::Ack(_) => "ack",
            ServerMessage::Export(_) => "export",
            ServerMessage::Error(_) => "error",
        }
    }
}

/// Sent once when a session starts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Welcome {
    pub mode: Mode,
    pub k: usize,
    pub feature_names: Vec<String>,
    pub map: MapDocument,
    pub weights: Weights,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub index: usize,
    pub curvature: f64,
    /// Polyline from the robot pose through every sample.
    pub points: Vec<[f64; 2]>,
    pub features: FeatureVector,
    pub score: f64,
    /// Collides with an obstacle; never chosen, not valid as feedback.
    pub blocked: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Proposal {
    pub proposal: u64,
    pub t: usize,
    pub pose: [f64; 3],
    /// Reference path from the tracked segment onward.
    pub path_window: Vec<[f64; 2]>,
    pub candidates: Vec<Candidate>,
    pub chosen: usize,
    /// A random unblocked candidate other than `chosen`, for preference queries.
    pub alternative: Option<usize>,
    pub weights_digest: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ack {
    pub proposal: u64,
    pub t: usize,
    /// Whether a weight update was applied (false for a skip).
    pub updated: bool,
    pub hinge_loss: Option<f64>,
    pub weights: Weights,
    pub weights_digest: String,
    pub reset: bool,
    pub corrections: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Export {
    pub steps: usize,
    /// Trial CSV with the experiment harness header.
    pub csv: String,
    /// Feedback in step order, enough to replay the session.
    pub feedback: Vec<Feedback>,
    pub final_weights: Weights,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    Busy,
    Malformed,
    UnsupportedVersion,
    StaleProposal,
    InvalidFeedback,
    NoSession,
    Config,
    Internal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReply {
    pub code: ErrorCode,
    pub message: String,
}

impl ErrorReply {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

/// Parses a client message, checking the version first so that a future
/// schema is reported as such rather than as malformed.
pub fn parse_client(text: &str) -> Result<Envelope<ClientMessage>, ErrorReply> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| ErrorReply::new(ErrorCode::Malformed, e.to_string()))?;
    match value.get("v").and_then(serde_json::Value::as_u64) {
        Some(v) if v == u64::from(PROTOCOL_VERSION) => {}
        Some(v) => {
            return Err(ErrorReply::new(
                ErrorCode::UnsupportedVersion,
                format!("protocol version {v} is not supported"),
            ))
        }
        None => return Err(ErrorReply::new(ErrorCode::Malformed, "missing numeric field `v`")),
    }
    serde_json::from_value(value).map_err(|e| ErrorReply::new(ErrorCode::Malformed, e.to_string()))
}
