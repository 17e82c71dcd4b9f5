//! A group of `Z^2`-words acting on its universal tree: vertices, edge
//! labels, heights and an axis.

use zntree::group::{dist, hbar, sigma, Edge, Vertex};
use zntree::workspace::Workspace;

fn main() -> zntree::Result<()> {
    let ws = Workspace::notmin();
    let g = &ws.group;
    let u5 = g.eval("u5")?;
    let ab = g.eval("a * b")?;
    println!("u5 = {}, a*b = {}", g.format(&u5), g.format(&ab));
    println!("u5 and a commute: {}", g.eval("u5 * a")? == g.eval("a * u5")?);

    let v = Vertex::new(g.eval("u5 * b")?);
    let moved = g.act(&ab, &v)?;
    println!("(a*b) . <{}> = <{}>", g.format(&v.prefix), g.format(&moved.prefix));
    println!("d = {} before and {} after", dist(&Vertex::base(2), &v)?, dist(&g.act(&ab, &Vertex::base(2))?, &moved)?);
    println!("hbar(v) = {}", hbar(&v));

    let e = Edge { origin: Vertex::new(g.eval("u5")?), terminus: v.clone() };
    let label = sigma(&e)?;
    let label_moved = sigma(&g.act_edge(&ab, &e)?)?;
    println!("edge label {} is preserved: {}", g.alphabet().letter_name(label), label == label_moved);

    for p in g.axis_segment(&ab, 2)? {
        println!("axis of a*b: <{}>", g.format(&p.prefix));
    }
    Ok(())
}
