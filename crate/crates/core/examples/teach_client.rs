//! Starts the teaching service on a local port and talks to it over a real
//! WebSocket: hello, twenty answered proposals, export.
//!
//! ```bash
//! cargo run --example teach_client
//! ```

use corrlearn::harness::ExperimentConfig;
use corrlearn::service::{serve_listener, ClientMessage, Envelope, Mode, ServerMessage};
use corrlearn::Feedback;
use futures::{SinkExt, StreamExt};
use tokio_tungstenite::tungstenite::Message;

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await?;
    let addr = listener.local_addr()?;
    tokio::spawn(serve_listener(listener, ExperimentConfig::default()));

    let (mut ws, _) = tokio_tungstenite::connect_async(format!("ws://{addr}/ws")).await?;
    let mut seq = 0;
    let mut session = None;
    let mut send = |session: Option<String>, body: ClientMessage| {
        seq += 1;
        Message::Text(serde_json::to_string(&Envelope::new(session, seq, body)).unwrap().into())
    };
    ws.send(send(None, ClientMessage::Hello { mode: Mode::Stepper })).await?;

    let mut answered = 0;
    while let Some(frame) = ws.next().await {
        let Message::Text(text) = frame? else { continue };
        let msg: Envelope<ServerMessage> = serde_json::from_str(&text)?;
        match msg.body {
            ServerMessage::Hello(w) => {
                session = msg.session;
                println!("joined {:?}: k={} map {}x{}", session, w.k, w.map.grid[0].len(), w.map.grid.len());
            }
            ServerMessage::Propose(p) if answered < 20 => {
                // alternate between skipping and pointing at the straightest open arc
                let fb = if answered % 2 == 0 {
                    Feedback::None
                } else {
                    let straight = p
                        .candidates
                        .iter()
                        .filter(|c| !c.blocked)
                        .min_by(|a, b| a.curvature.abs().total_cmp(&b.curvature.abs()))
                        .map(|c| c.index)
                        .unwrap_or(p.chosen);
                    Feedback::Action { teacher_index: straight }
                };
                ws.send(send(session.clone(), ClientMessage::Feedback { proposal: p.proposal, feedback: fb }))
                    .await?;
                answered += 1;
            }
            ServerMessage::Propose(_) => ws.send(send(session.clone(), ClientMessage::Export {})).await?,
            ServerMessage::Ack(a) => println!("ack {:>2} updated={:<5} digest {}", a.proposal, a.updated, &a.weights_digest[..12]),
            ServerMessage::Export(e) => {
                println!("export: {} steps, final weights {:?}", e.steps, e.final_weights.0);
                break;
            }
            ServerMessage::Error(e) => println!("error {:?}: {}", e.code, e.message),
        }
    }
    ws.close(None).await?;
    Ok(())
}
