//! Stops a learner mid-stream, writes its moment state to disk, reloads it
//! and finishes the stream; the result is bit-identical to an uninterrupted run.
//!
//! cargo run --example snapshot

use nrrls::data::gen_stream;
use nrrls::model::{Hyperparams, NrRls};

fn main() -> nrrls::Result<()> {
    let stream = gen_stream(500, 6, 0.3, 21);
    let hp = Hyperparams::new(6);

    let mut straight = NrRls::new(hp)?;
    for s in &stream {
        straight.step(s)?;
    }

    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("state.txt");
    let mut first = NrRls::new(hp)?;
    for s in &stream[..250] {
        first.step(s)?;
    }
    first.save(&path)?;

    let mut resumed = NrRls::load(&path)?;
    for s in &stream[250..] {
        resumed.step(s)?;
    }
    println!("snapshot size {} bytes", std::fs::metadata(&path).map(|m| m.len()).unwrap_or(0));
    println!("identical state after resume: {}", resumed.same_state(&straight));
    println!("w = {:?}", resumed.coefficients().as_slice());
    Ok(())
}
