//! Classes of an explored `Z^2`-tree and the rescaled metric built on them.

use zntree::boundary::{dbar, TreeOfTrees};
use zntree::workspace::Workspace;
use zntree::Word;

fn main() -> zntree::Result<()> {
    let ws = Workspace::notmin();
    let ball = ws.group.ball_enumerate(ws.config.depth)?;
    let words: Vec<Word> = ball.elements.iter().map(|e| e.word.clone()).collect();
    let tree = TreeOfTrees::build(2, words.iter())?;
    println!("{} classes over {} levels", tree.class_count(), tree.levels().len());

    let p = |s: &str| ws.parse_point(s);
    for (x, y) in [("a", "b"), ("u5 * b", "u5 * a"), ("u5^+inf", "b"), ("u5^+inf", "u5^-inf")] {
        let d = dbar(&tree, &p(x)?, &p(y)?)?;
        println!("d({x}, {y}) = {:.12} (tail {:.3e}, {} classes)", d.value, d.tail_sum, d.trace.len());
        for t in &d.trace {
            println!("    level {} index {} scale {:.3e} inner {:.4}", t.class.level, t.class.index, t.scale, t.inner);
        }
    }
    Ok(())
}
