//! Longest common initial segment by a block-aligned scan.

use super::{Block, Letter, Word};
use crate::error::{Error, Result};
use crate::lattice::{Int, LatticeError, ZnVec};

/// Cursor into a word: block index and local offset inside that block.
struct Cursor<'a> {
    w: &'a Word,
    i: usize,
    off: ZnVec,
}

/// What remains of the current row of a block.
enum Row {
    /// `count` letters, then the block (or the row) ends.
    Finite(u64),
    Infinite,
}

impl<'a> Cursor<'a> {
    fn new(w: &'a Word) -> Cursor<'a> {
        Cursor {
            w,
            i: 0,
            off: ZnVec::zero(w.dim()),
        }
    }

    fn done(&self) -> bool {
        self.i >= self.w.blocks.len()
    }

    fn block(&self) -> &'a Block {
        &self.w.blocks[self.i]
    }

    fn remaining(&self) -> ZnVec {
        &self.block().extent(self.w.dim()) - &self.off
    }

    fn row(&self) -> Row {
        let r = self.remaining();
        if r.on_first_axis() {
            Row::Finite(match r.first() {
                Int::Small(v) => *v as u64,
                Int::Big(_) => u64::MAX,
            })
        } else {
            Row::Infinite
        }
    }

    /// Letter `t` steps after the cursor, `t` within the current row.
    fn ahead(&self, phase: usize, t: usize) -> Letter {
        match self.block() {
            Block::Finite(ls) => ls[phase + t],
            Block::Periodic { period, .. } => period[(phase + t) % period.len()],
        }
    }

    /// Index into the letters (finite) or the period (periodic).
    fn phase(&self) -> usize {
        match self.block() {
            Block::Finite(_) => self.off.first().to_i64().expect("finite offset") as usize,
            Block::Periodic { period, .. } => self.off.first().rem_euclid(period.len()),
        }
    }

    fn advance(&mut self, d: &ZnVec) {
        self.off = &self.off + d;
        if self.off == self.block().extent(self.w.dim()) {
            self.i += 1;
            self.off = ZnVec::zero(self.w.dim());
        }
    }
}

fn same_pattern(p: &[Letter], jp: usize, q: &[Letter], jq: usize) -> bool {
    let k = p.len();
    k == q.len() && (0..k).all(|t| p[(jp + t) % k] == q[(jq + t) % k])
}

/// Outcome of comparing two inequivalent periodic rows that agreed on
/// `matched` letters out of at most `bound` examined. Agreement over the
/// whole bound contradicts the periodicity lemma for primitive periods, so
/// it is reported rather than trusted.
pub(crate) fn resolve_periodic_overlap(matched: usize, bound: usize) -> Result<usize> {
    if matched < bound {
        Ok(matched)
    } else {
        Err(Error::NoCommonMax)
    }
}

/// `c(u, v) = |com(u, v)|`.
pub fn c_len(u: &Word, v: &Word) -> Result<ZnVec> {
    let n = u.dim();
    if v.dim() != n {
        return Err(LatticeError::DimensionMismatch {
            left: n,
            right: v.dim(),
        }
        .into());
    }
    let mut s = ZnVec::zero(n);
    let mut cu = Cursor::new(u);
    let mut cv = Cursor::new(v);
    let axis = |t: u64| ZnVec::axis_int(n, Int::from(t as usize));
    while !cu.done() && !cv.done() {
        let (ju, jv) = (cu.phase(), cv.phase());
        if let (Block::Periodic { period: p, .. }, Block::Periodic { period: q, .. }) =
            (cu.block(), cv.block())
        {
            if same_pattern(p, ju, q, jv) {
                let (ru, rv) = (cu.remaining(), cv.remaining());
                let d = ru.lesser(&rv).clone();
                s = &s + &d;
                cu.advance(&d);
                cv.advance(&d);
                continue;
            }
            let bound = (p.len() + q.len()) as u64;
            let limit = match (cu.row(), cv.row()) {
                (Row::Finite(a), Row::Finite(b)) => a.min(b).min(bound),
                (Row::Finite(a), Row::Infinite) | (Row::Infinite, Row::Finite(a)) => a.min(bound),
                (Row::Infinite, Row::Infinite) => bound,
            };
            let m = (0..limit as usize)
                .take_while(|&t| cu.ahead(ju, t) == cv.ahead(jv, t))
                .count() as u64;
            if m < limit {
                return Ok(&s + &axis(m));
            }
            if limit == bound {
                resolve_periodic_overlap(m as usize, bound as usize)?;
            }
            let d = axis(limit);
            s = &s + &d;
            cu.advance(&d);
            cv.advance(&d);
            continue;
        }
        // At least one side is a finite run, so the scan length is bounded
        // by a materialized letter count.
        let limit = match (cu.row(), cv.row()) {
            (Row::Finite(a), Row::Finite(b)) => a.min(b),
            (Row::Finite(a), Row::Infinite) | (Row::Infinite, Row::Finite(a)) => a,
            (Row::Infinite, Row::Infinite) => unreachable!("finite blocks have finite rows"),
        };
        let m = (0..limit as usize)
            .take_while(|&t| cu.ahead(ju, t) == cv.ahead(jv, t))
            .count() as u64;
        if m < limit {
            return Ok(&s + &axis(m));
        }
        let d = axis(limit);
        s = &s + &d;
        cu.advance(&d);
        cv.advance(&d);
    }
    Ok(s)
}

/// `com(u, v)`, the longest common initial segment.
pub fn com(u: &Word, v: &Word) -> Result<Word> {
    let c = c_len(u, v)?;
    u.prefix(&c)
}
