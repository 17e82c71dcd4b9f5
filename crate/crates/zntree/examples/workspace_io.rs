//! Workspaces as JSON, and result tables with their provenance sidecar.

use serde_json::json;
use zntree::output::{fmt_f64, Recorder, Table};
use zntree::workspace::{Workspace, WorkspaceConfig};

fn main() -> zntree::Result<()> {
    let text = r#"{
        "dimension": 2,
        "alphabet": ["a", "b"],
        "generators": [{"name": "t", "word": "(a)^(0,1)"}, {"name": "b", "word": "b"}],
        "measure": [{"element": "t", "weight": 0.4}, {"element": "t^-1", "weight": 0.4},
                    {"element": "b", "weight": 0.1}, {"element": "b^-1", "weight": 0.1}]
    }"#;
    let ws = Workspace::from_json(text)?;
    println!("{} generators, measure on {} elements", ws.group.generators().len(), ws.measure.support().len());
    assert_eq!(WorkspaceConfig::from_json(&ws.config.to_json())?, ws.config);

    let mut rec = Recorder::new("example tables");
    let mut t = Table::new("weights", &["element", "weight"]);
    for (g, w) in ws.measure.support() {
        t.push(vec![ws.group.format(&g.word), fmt_f64(*w)]);
    }
    rec.add(t);
    let dir = std::env::temp_dir().join("zntree-example");
    let side = rec.write(&dir, serde_json::to_value(&ws.config).unwrap(), json!({}))?;
    println!("wrote {}", side.display());
    Ok(())
}
