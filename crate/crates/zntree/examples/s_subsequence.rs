//! Walks on the notmin group: ends of type 2 and the subsequence of
//! positions whose inverse heads keep overlapping longer.

use zntree::walk::{detect_s_subsequence, run_ensemble, sample_walk, WalkOptions};
use zntree::workspace::Workspace;

fn main() -> zntree::Result<()> {
    let ws = Workspace::notmin();
    let path = sample_walk(&ws.measure, 3, 0, 10_000, &WalkOptions::default())?;
    let ev = detect_s_subsequence(&path, &ws.measure)?;
    println!("{}", ev.diagnostics);
    for e in &ev.profile {
        println!("  i = {:>5}  hbar {:>4}  junction {:>2}", e.index, e.hbar, e.backward);
    }
    let ens = run_ensemble(&ws.measure, 40, 10_000, 3, true, &WalkOptions::default())?;
    println!("type-2 fraction {:.3}, S found on {:.3}", ens.type_fraction(2), ens.s_rate());
    Ok(())
}
