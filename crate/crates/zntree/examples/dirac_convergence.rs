//! Translates of the stationary measure by the walk concentrate on the
//! cone around the walk's own end.

use zntree::walk::{dirac_convergence_profile, empirical_cone_measure, sample_walk, WalkOptions};
use zntree::workspace::Workspace;

fn main() -> zntree::Result<()> {
    let ws = Workspace::free2();
    let nu = empirical_cone_measure(&ws.measure, 400, 3000, 1, 11)?;
    let opts = WalkOptions { window: 0.25, extra_checkpoints: vec![1000] };
    for w in 0..3 {
        let path = sample_walk(&ws.measure, 99, w, 4000, &opts)?;
        let prof = dirac_convergence_profile(&path, &nu, 1, 1000)?;
        let line: Vec<String> = prof.iter().map(|(i, m)| format!("{i}:{m:.2}")).collect();
        println!("walk {w}: {}", line.join(" "));
    }
    Ok(())
}
