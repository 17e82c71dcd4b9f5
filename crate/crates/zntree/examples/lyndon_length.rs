//! The word length as a Lyndon length function: overlaps from lengths
//! agree with longest common prefixes.

use zntree::word::c_len;
use zntree::workspace::Workspace;

fn main() -> zntree::Result<()> {
    let ws = Workspace::notmin();
    let g = &ws.group;
    let ball = g.ball_enumerate(2)?;
    let mut checked = 0;
    for x in ball.up_to(2) {
        for y in ball.up_to(2) {
            let q = g.mult_words(&x.word.invert(), &y.word)?;
            let twice = &(x.word.len() + y.word.len()) - q.len();
            let c = twice.half().expect("(L4): overlaps are lattice points");
            assert_eq!(c, c_len(&x.word, &y.word)?);
            checked += 1;
        }
    }
    println!("c(x, y) = com length on {checked} pairs of the radius-2 ball");
    let x = g.eval("u5 * b")?;
    let y = g.eval("u5 * a")?;
    println!("c({}, {}) = {}", g.format(&x), g.format(&y), g.lyndon_c(&x, &y)?);
    Ok(())
}
