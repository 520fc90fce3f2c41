//! Online learning from a variety of noisy corrective feedback.
//!
//! A teacher's preferences are latent. Every piece of feedback they give
//! (a better action, a pairwise preference, a semantic command such as
//! "avoid doors", or a coactive improvement) is turned into a pseudo-loss
//! over the robot's candidate actions, upper bounded by a convex hinge
//! surrogate, and minimized with online gradient descent.
//!
//! The crate is organized as:
//!
//! - [`world`]: 2D kinematic navigation simulator (maps, arc actions, features).
//! - [`feedback`]: feedback types and their pseudo-losses.
//! - [`learner`]: linear policy, hinge surrogate, update rules, behavior cloning.
//! - [`teacher`]: programmatic teachers with latent weights and noise.
//! - [`harness`]: trials, sweeps, metrics and CSV output.
//! - [`service`]: live teaching session served over a WebSocket.
//!
//! Runnable walkthroughs live in this crate's `examples/` directory.

pub mod error;
pub mod feedback;
pub mod harness;
pub mod learner;
pub mod service;
pub mod teacher;
pub mod world;

pub use error::{Error, Result};
pub use feedback::{Feedback, FeedbackKind, PseudoLoss};
pub use learner::Weights;
pub use teacher::{Channel, Teacher};
pub use world::{FeatureVector, Map, Pose};
