//! Empirical stationary measure on cones and its stationarity residuals.

use zntree::walk::{cone_apexes, empirical_cone_measure, stationarity_residual};
use zntree::workspace::Workspace;

fn main() -> zntree::Result<()> {
    let ws = Workspace::free2();
    let nu = empirical_cone_measure(&ws.measure, 1000, 3000, 2, 7)?;
    for (apex, mass) in nu.table.iter().filter(|(a, _)| !a.is_empty()) {
        println!("nu(U_{}) = {mass:.4}", ws.group.format(apex));
    }
    let res = stationarity_residual(&ws.group, &nu, &ws.measure, &cone_apexes(1, 2, 1))?;
    for r in res {
        println!("residual at {}: {:.4} ({:.4} s.e.)", ws.group.format(&r.apex), r.value, r.standard_error);
    }
    Ok(())
}
