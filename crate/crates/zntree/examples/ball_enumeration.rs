//! Spheres of the word metric, with shortest witnesses.

use zntree::workspace::Workspace;

fn main() -> zntree::Result<()> {
    for ws in [Workspace::free2(), Workspace::notmin()] {
        let ball = ws.group.ball_enumerate(4)?;
        let sizes: Vec<usize> = (0..=4).map(|s| ball.sphere(s).len()).collect();
        println!("n = {}: sphere sizes {sizes:?}", ws.dim());
        let last = &ball.sphere(4)[0];
        let witness = last.expression.as_ref().unwrap();
        println!("  {} = {}", ws.group.format_expression(witness), ws.group.format(&last.word));
    }
    Ok(())
}
