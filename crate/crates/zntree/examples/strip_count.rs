//! Group elements between two ends, counted by word length.

use zntree::walk::strip_count;
use zntree::workspace::Workspace;

fn main() -> zntree::Result<()> {
    let free = Workspace::free2();
    let s = strip_count(&free.group, &free.parse_end("a^-inf")?, &free.parse_end("a^+inf")?, 8)?;
    println!("F(a,b) axis: {:?}", s.counts);

    let ws = Workspace::notmin();
    let s = strip_count(&ws.group, &ws.parse_end("u5^-inf")?, &ws.parse_end("u5^+inf")?, 8)?;
    println!("notmin u5 line: {:?}", s.counts);
    println!("  with hbar <= k: {:?}", s.filtered);
    println!("  log-log slope {:.3}, criterion slope {:.4}", s.slope, s.criterion_slope);
    Ok(())
}
