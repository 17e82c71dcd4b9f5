//! One path of the uniform walk on F(a, b) and the end it converges to.

use zntree::walk::{boundary_point, sample_path, stable_prefixes};
use zntree::workspace::Workspace;

fn main() -> zntree::Result<()> {
    let ws = Workspace::free2();
    let path = sample_path(&ws.measure, 42, 10_000)?;
    println!("|tau_n| / n = {:.4}", path.drift());
    for (i, s) in stable_prefixes(&path)?.iter().step_by(6) {
        println!("step {i:>5}: stable prefix of length {}", s.len());
    }
    let end = boundary_point(&path)?;
    let head = end.deepest().prefix(&"(12)".parse().unwrap())?;
    println!("end {}... (type {}, resolved to {})", ws.group.format(&head), end.declared_type(), end.resolution());
    Ok(())
}
