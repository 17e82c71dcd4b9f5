//! Canonical block form.
//!
//! Blocks are pushed left to right onto an output stack. Where the boundary
//! between two runs is ambiguous the left run keeps as many letters as it
//! can, then the right periodic run reaches back into any finite letters
//! still sitting in between.

use super::{materialize, rotate_left, Block, Letter};
use crate::error::Result;
use crate::lattice::{Int, ZnVec};

/// Shortest `d` with `p = (p[..d])^(k/d)`.
pub(crate) fn primitive_root(p: &[Letter]) -> &[Letter] {
    let k = p.len();
    for d in 1..k {
        if k.is_multiple_of(d) && (d..k).all(|i| p[i] == p[i - d]) {
            return &p[..d];
        }
    }
    p
}

/// Brings a single valid block to its canonical shape; `None` when empty.
fn prepare(b: Block) -> Result<Option<Block>> {
    match b {
        Block::Finite(ls) => Ok((!ls.is_empty()).then_some(Block::Finite(ls))),
        Block::Periodic { period, extent } => {
            if extent.is_zero() {
                return Ok(None);
            }
            if extent.on_first_axis() {
                return Ok(Some(Block::Finite(materialize(&period, 0, extent.first())?)));
            }
            let root = primitive_root(&period);
            let period = if root.len() < period.len() {
                root.to_vec()
            } else {
                period
            };
            Ok(Some(Block::Periodic { period, extent }))
        }
    }
}

fn add_first(v: &mut ZnVec, t: usize) {
    let n = v.dim();
    *v = &*v + &ZnVec::axis_int(n, Int::from(t));
}

fn sub_first(v: &mut ZnVec, t: usize) {
    let n = v.dim();
    *v = &*v - &ZnVec::axis_int(n, Int::from(t));
}

/// Pushes one prepared block, merging with the stack top as needed.
pub(crate) fn push(out: &mut Vec<Block>, b: Block) {
    match b {
        Block::Finite(ls) => match out.last_mut() {
            None => out.push(Block::Finite(ls)),
            Some(Block::Finite(prev)) => prev.extend_from_slice(&ls),
            Some(Block::Periodic { period, extent }) => {
                let k = period.len();
                let j0 = extent.first().rem_euclid(k);
                let t = ls
                    .iter()
                    .enumerate()
                    .take_while(|(t, l)| **l == period[(j0 + t) % k])
                    .count();
                if t > 0 {
                    add_first(extent, t);
                }
                if t == 0 {
                    out.push(Block::Finite(ls));
                } else if t < ls.len() {
                    out.push(Block::Finite(ls[t..].to_vec()));
                }
            }
        },
        Block::Periodic {
            period: mut q,
            extent: mut f,
        } => {
            let l = q.len();
            if let Some(Block::Finite(prev)) = out.last_mut() {
                let m = prev
                    .iter()
                    .rev()
                    .enumerate()
                    .take_while(|(m, x)| **x == q[l - 1 - (m % l)])
                    .count();
                if m > 0 {
                    q = rotate_left(&q, l - m % l);
                    add_first(&mut f, m);
                    let keep = prev.len() - m;
                    prev.truncate(keep);
                    if keep == 0 {
                        out.pop();
                    }
                }
            }
            if let Some(Block::Periodic { period: p, extent: e }) = out.last_mut() {
                let k = p.len();
                let j0 = e.first().rem_euclid(k);
                let limit = k + l;
                let t = (0..limit)
                    .take_while(|&t| p[(j0 + t) % k] == q[t % l])
                    .count();
                if t == limit {
                    *e = &*e + &f;
                    return;
                }
                if t > 0 {
                    add_first(e, t);
                    q = rotate_left(&q, t % l);
                    sub_first(&mut f, t);
                }
            }
            out.push(Block::Periodic {
                period: q,
                extent: f,
            });
        }
    }
}

/// Canonical form of a reduced block list of dimension `n`.
pub(crate) fn normalize(n: usize, blocks: Vec<Block>) -> Result<Vec<Block>> {
    let mut out = Vec::with_capacity(blocks.len());
    for b in blocks {
        debug_assert!(b.extent(n).dim() == n);
        if let Some(b) = prepare(b)? {
            push(&mut out, b);
        }
    }
    Ok(out)
}

/// Re-pushes `blocks[from..]` onto the canonical prefix `blocks[..from]`.
/// The re-pushed blocks must already be prepared.
pub(crate) fn renormalize_from(blocks: &mut Vec<Block>, from: usize) {
    if from >= blocks.len() {
        return;
    }
    let tail = blocks.split_off(from);
    for b in tail {
        push(blocks, b);
    }
}
