use std::net::SocketAddr;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;
use std::time::Duration;

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::response::Response;
use axum::routing::get;
use axum::Router;
use futures::{SinkExt, StreamExt};
use tokio::net::TcpListener;
use tokio::sync::mpsc;
use tokio::time::Instant;

use super::protocol::{parse_client, ClientMessage, Envelope, ErrorCode, ErrorReply, Mode, ServerMessage};
use super::session::TeachSession;
use crate::error::{Error, Result};
use crate::harness::ExperimentConfig;

const QUEUE_DEPTH: usize = 64;

#[derive(Clone)]
struct AppState {
    config: Arc<ExperimentConfig>,
    active: Arc<AtomicBool>,
    sessions_started: Arc<AtomicU64>,
}

/// Releases the single-session slot when the session loop ends.
struct ActiveGuard(Arc<AtomicBool>);

impl Drop for ActiveGuard {
    fn drop(&mut self) {
        self.0.store(false, Ordering::Release);
    }
}

/// Router serving the teaching protocol at `/ws`. One session at a time;
/// every session starts from `config`.
pub fn router(config: ExperimentConfig) -> Router {
    let state = AppState {
        config: Arc::new(config),
        active: Arc::new(AtomicBool::new(false)),
        sessions_started: Arc::new(AtomicU64::new(0)),
    };
    Router::new().route("/ws", get(upgrade)).with_state(state)
}

/// Serves on an already-bound listener until the task is dropped.
pub async fn serve_listener(listener: TcpListener, config: ExperimentConfig) -> Result<()> {
    let addr = listener.local_addr().ok();
    tracing::info!(?addr, "teaching service listening");
    axum::serve(listener, router(config))
        .await
        .map_err(|e| Error::Protocol(format!("server stopped: {e}")))
}

pub async fn serve(config: ExperimentConfig, addr: SocketAddr) -> Result<()> {
    config.validate()?;
    config.load_map()?;
    let listener = TcpListener::bind(addr)
        .await
        .map_err(|e| Error::Config(format!("cannot bind {addr}: {e}")))?;
    serve_listener(listener, config).await
}

async fn upgrade(ws: WebSocketUpgrade, State(state): State<AppState>) -> Response {
    ws.on_upgrade(move |socket| connection(socket, state))
}

/// Outgoing message before the writer stamps `seq`.
struct Outgoing {
    session: Option<String>,
    body: ServerMessage,
}

fn error_code(e: &Error) -> ErrorCode {
    match e {
        Error::StaleProposal { .. } => ErrorCode::StaleProposal,
        Error::InvalidArgument(_) | Error::NoSemanticSignal => ErrorCode::InvalidFeedback,
        Error::Protocol(_) => ErrorCode::Malformed,
        Error::Config(_) | Error::MapParse { .. } | Error::MapValidation(_) | Error::Io { .. } => ErrorCode::Config,
        Error::Busy => ErrorCode::Busy,
        _ => ErrorCode::Internal,
    }
}

async fn connection(socket: WebSocket, state: AppState) {
    let (mut sink, mut stream) = socket.split();
    let (out_tx, mut out_rx) = mpsc::channel::<Outgoing>(QUEUE_DEPTH);

    let writer = tokio::spawn(async move {
        let mut seq = 0;
        while let Some(msg) = out_rx.recv().await {
            let text = serde_json::to_string(&Envelope::new(msg.session, seq, msg.body)).expect("messages serialize");
            seq += 1;
            if sink.send(Message::Text(text.into())).await.is_err() {
                break;
            }
        }
    });

    let reply_error = |code, message: String| Outgoing {
        session: None,
        body: ServerMessage::Error(ErrorReply::new(code, message)),
    };
    let mut inbox: Option<(String, mpsc::Sender<Envelope<ClientMessage>>)> = None;

    while let Some(Ok(frame)) = stream.next().await {
        let text = match frame {
            Message::Text(t) => t,
            Message::Close(_) => break,
            _ => continue,
        };
        let msg = match parse_client(text.as_str()) {
            Ok(m) => m,
            Err(e) => {
                let _ = out_tx.send(reply_error(e.code, e.message)).await;
                continue;
            }
        };
        if let Some((id, tx)) = &inbox {
            if msg.session.as_deref().is_some_and(|s| s != id) {
                let _ = out_tx
                    .send(reply_error(ErrorCode::NoSession, format!("unknown session {:?}", msg.session)))
                    .await;
                continue;
            }
            if tx.send(msg).await.is_err() {
                break;
            }
            continue;
        }
        match msg.body {
            ClientMessage::Hello { mode } => {
                if state
                    .active
                    .compare_exchange(false, true, Ordering::AcqRel, Ordering::Acquire)
                    .is_err()
                {
                    let _ = out_tx.send(reply_error(ErrorCode::Busy, Error::Busy.to_string())).await;
                    continue;
                }
                let guard = ActiveGuard(state.active.clone());
                let n = state.sessions_started.fetch_add(1, Ordering::Relaxed) + 1;
                let id = format!("session-{n}");
                match TeachSession::start(id.clone(), (*state.config).clone(), mode) {
                    Ok(session) => {
                        tracing::info!(session = %id, ?mode, "session started");
                        let (tx, rx) = mpsc::channel(QUEUE_DEPTH);
                        tokio::spawn(run_session(session, rx, out_tx.clone(), guard));
                        inbox = Some((id, tx));
                    }
                    Err(e) => {
                        drop(guard);
                        let _ = out_tx.send(reply_error(error_code(&e), e.to_string())).await;
                    }
                }
            }
            ClientMessage::Feedback { .. } | ClientMessage::Export {} => {
                let _ = out_tx
                    .send(reply_error(ErrorCode::NoSession, "send hello first".into()))
                    .await;
            }
        }
    }
    // dropping the inbox sender ends the session loop, which frees the slot
    drop(inbox);
    drop(out_tx);
    let _ = writer.await;
}

/// Owns the session; the only consumer of its inbound queue.
async fn run_session(
    mut session: TeachSession,
    mut inbox: mpsc::Receiver<Envelope<ClientMessage>>,
    out: mpsc::Sender<Outgoing>,
    _guard: ActiveGuard,
) {
    let id = session.id().to_string();
    let send = |body: ServerMessage| Outgoing {
        session: Some(id.clone()),
        body,
    };
    let auto_advance = match session.mode() {
        Mode::Stepper => None,
        Mode::Timed { auto_advance_ms } => Some(Duration::from_millis(auto_advance_ms)),
    };

    if out.send(send(ServerMessage::Hello(session.welcome()))).await.is_err() {
        return;
    }
    let mut deadline = auto_advance.map(|d| Instant::now() + d);
    match session.propose() {
        Ok(p) => {
            if out.send(send(ServerMessage::Propose(p))).await.is_err() {
                return;
            }
        }
        Err(e) => {
            let _ = out
                .send(send(ServerMessage::Error(ErrorReply::new(error_code(&e), e.to_string()))))
                .await;
            return;
        }
    }

    loop {
        let next = match deadline {
            Some(at) => match tokio::time::timeout_at(at, inbox.recv()).await {
                Ok(m) => m.map(|m| m.body),
                // silence within the window counts as a skip
                Err(_) => session.pending_proposal().map(|proposal| ClientMessage::Feedback {
                    proposal,
                    feedback: crate::feedback::Feedback::None,
                }),
            },
            None => inbox.recv().await.map(|m| m.body),
        };
        let Some(body) = next else { break };
        let replies = match body {
            ClientMessage::Feedback { proposal, feedback } => match session.submit(proposal, feedback) {
                Ok(ack) => {
                    let mut r = vec![ServerMessage::Ack(ack)];
                    match session.propose() {
                        Ok(p) => {
                            deadline = auto_advance.map(|d| Instant::now() + d);
                            r.push(ServerMessage::Propose(p));
                        }
                        Err(e) => r.push(ServerMessage::Error(ErrorReply::new(error_code(&e), e.to_string()))),
                    }
                    r
                }
                Err(e) => vec![ServerMessage::Error(ErrorReply::new(error_code(&e), e.to_string()))],
            },
            ClientMessage::Export {} => vec![ServerMessage::Export(session.export())],
            ClientMessage::Hello { .. } => vec![ServerMessage::Error(ErrorReply::new(
                ErrorCode::Malformed,
                "session already started on this connection",
            ))],
        };
        for r in replies {
            if out.send(send(r)).await.is_err() {
                tracing::info!(session = %id, "client gone");
                return;
            }
        }
    }
    tracing::info!(session = %id, steps = session.steps(), "session closed");
}
