//! Gromov products and the visual ultrametric on the compactified
//! simplicial tree of F(a, b).

use zntree::boundary::{ball_in_compactification, d_ultra, gromov, Point};
use zntree::workspace::Workspace;
use zntree::Word;

fn main() -> zntree::Result<()> {
    let ws = Workspace::free2();
    let p = |s: &str| ws.parse_point(s);
    let pts = [p("a b a")?, p("a b b")?, p("a^+inf")?, p("(a b)^+inf")?, p("b | a^-inf")?];
    for x in &pts {
        for y in &pts {
            print!("{:>10.6} ", d_ultra(x, y)?);
        }
        println!();
    }
    let g = gromov(&pts[0], &pts[1], &Word::empty(1))?;
    println!("(aba . abb)_e = {g:?}");
    let ball = ball_in_compactification(&pts[2], (-3.0f64).exp())?;
    println!("ball of radius e^-3 around a^+inf: {ball:?}");
    let inside = Point::Vertex(ws.group.eval("a^5")?);
    println!("contains a^5: {}", ball.contains(&inside)?);
    Ok(())
}
