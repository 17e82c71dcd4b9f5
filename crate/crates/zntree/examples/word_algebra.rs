//! Parsing, products, common prefixes and cyclic decompositions of
//! `Z^2`-words.

use zntree::word::{c_len, com};
use zntree::Alphabet;

fn main() -> zntree::Result<()> {
    let al = Alphabet::new(&["a", "b"])?;
    let w = |s: &str| al.parse(2, s);

    // An infinite run of `a` of extent (0, 1), followed by `b`.
    let u = w("(a)^(0,1) b")?;
    let v = w("b^-1 (a)^(-3,1)")?;
    println!("u = {}  |u| = {}", al.format(&u), u.len());
    println!("v = {}  |v| = {}", al.format(&v), v.len());

    let uv = u.mult(&v)?;
    println!("u * v = {}  |u*v| = {}", al.format(&uv), uv.len());
    println!("cancellation c(u^-1, v) = {}", u.cancellation(&v)?);

    let x = w("a b (a b)^(2,1)")?;
    let y = w("a b a a")?;
    println!("com(x, y) = {}  of length {}", al.format(&com(&x, &y)?), c_len(&x, &y)?);

    let z = w("b a b^-1")?;
    let (c, core) = z.cyclic_decomposition()?;
    println!("{} = c^-1 core c with c = {}, core = {}", al.format(&z), al.format(&c), al.format(&core));

    let (p, s) = u.split(&"(5,0)".parse().unwrap())?;
    println!("split u at (5,0): {} | {}", al.format(&p), al.format(&s));
    Ok(())
}
