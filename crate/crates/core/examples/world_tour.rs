//! Loads a bundled map, lays out the 64 arc candidates at the start pose,
//! prints a few feature vectors, then drives the teacher's own policy.
//!
//! ```bash
//! cargo run --example world_tour -- [houseA|houseB|houseC]
//! ```

use corrlearn::harness::observe;
use corrlearn::world::{step, ActionSpace, WorldState, DEFAULT_CLIP};
use corrlearn::{FeatureVector, Map, Teacher};

fn main() -> anyhow::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "houseC".into());
    let map = Map::bundled(&name)?;
    println!(
        "{name}: {}x{} cells at {} m, {} doors, {} stairs, {} chairs, path {:.1} m",
        map.width(),
        map.height(),
        map.resolution(),
        map.doors().len(),
        map.stairs().len(),
        map.chairs().len(),
        map.path().length()
    );

    let space = ActionSpace::default();
    let mut state = WorldState::new(&map);
    let obs = observe(&map, &state, &space, DEFAULT_CLIP)?;
    println!("{} of {} candidates are collision free\n", obs.selectable.len(), space.k);
    println!("{:>5} {:>9}  {}", "index", "curvature", FeatureVector::NAMES.join(" "));
    for i in [0, 16, 31, 32, 47, 63] {
        let f: Vec<String> = obs.features[i].0.iter().map(|v| format!("{v:.2}")).collect();
        println!("{i:>5} {:>9.3}  {}", obs.trajectories[i].curvature, f.join(" "));
    }

    let teacher = match name.as_str() {
        "houseA" => Teacher::avoid_stairs_stay_right(),
        "houseB" => Teacher::avoid_stairs_and_chairs(),
        _ => Teacher::avoid_doors(),
    };
    for _ in 0..2000 {
        let obs = observe(&map, &state, &space, DEFAULT_CLIP)?;
        let best = teacher.latent_eval(&obs.features, &obs.selectable)?.best_index;
        state = step(&map, &state, &obs.trajectories[best], &space).state;
    }
    println!(
        "\nteacher policy, 2000 steps: {} laps, {} resets, now at ({:.2}, {:.2})",
        state.arrivals, state.reset_count, state.pose.x, state.pose.y
    );
    Ok(())
}
