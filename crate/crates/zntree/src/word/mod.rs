//! Reduced `Z^n`-words in canonical block form.
//!
//! A word is a finite list of blocks. A finite block is a plain run of
//! letters; a periodic block repeats a cyclically reduced primitive period
//! over an extent that leaves the first axis, so at least one of its rows is
//! infinite. The letter at local position `β` of a periodic block is
//! `period[(β_1 - 1) mod k]`: it depends on the first coordinate only.
//!
//! Values are kept canonical (see [`normalize`]) so structural equality is
//! equality of letter functions.

mod com;
mod normalize;
mod parse;

use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::{Int, ZnVec};

pub use com::{c_len, com};
pub(crate) use parse::is_identifier;
pub use parse::{parse_expression, parse_word, Alphabet, WordDisplay};

/// Longest run of letters that a periodic cut may expand into.
pub const MAX_MATERIALIZED: usize = 1 << 24;

/// A letter `x_i` (positive code `i + 1`) or its inverse (negative code).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(i32);

impl Letter {
    /// The positive letter for symbol index `i`.
    pub fn new(i: usize) -> Letter {
        Letter(i as i32 + 1)
    }

    pub fn from_code(code: i32) -> Letter {
        assert!(code != 0, "letter code 0 is reserved");
        Letter(code)
    }

    pub fn code(self) -> i32 {
        self.0
    }

    pub fn inv(self) -> Letter {
        Letter(-self.0)
    }

    /// Symbol index in the alphabet.
    pub fn index(self) -> usize {
        (self.0.unsigned_abs() - 1) as usize
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_positive() {
            write!(f, "x{}", self.index())
        } else {
            write!(f, "x{}^-1", self.index())
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Block {
    /// A nonempty run of letters; its extent is `(len, 0, ..., 0)`.
    Finite(Vec<Letter>),
    /// `period` repeated over `extent`, phase 0 at the block start.
    Periodic { period: Vec<Letter>, extent: ZnVec },
}

impl Block {
    pub fn extent(&self, n: usize) -> ZnVec {
        match self {
            Block::Finite(ls) => ZnVec::axis_int(n, Int::from(ls.len())),
            Block::Periodic { extent, .. } => extent.clone(),
        }
    }

    pub fn first_letter(&self) -> Letter {
        match self {
            Block::Finite(ls) => ls[0],
            Block::Periodic { period, .. } => period[0],
        }
    }

    pub fn last_letter(&self) -> Letter {
        match self {
            Block::Finite(ls) => ls[ls.len() - 1],
            Block::Periodic { period, extent } => {
                let k = period.len();
                period[(extent.first().rem_euclid(k) + k - 1) % k]
            }
        }
    }

    /// Letter at a local position given by its first coordinate (1-based).
    fn letter_at_first(&self, b1: &Int) -> Letter {
        match self {
            Block::Finite(ls) => ls[(b1.to_i64().expect("finite index") - 1) as usize],
            Block::Periodic { period, .. } => {
                let k = period.len();
                period[(b1.rem_euclid(k) + k - 1) % k]
            }
        }
    }

    fn inverse(&self) -> Block {
        match self {
            Block::Finite(ls) => Block::Finite(ls.iter().rev().map(|l| l.inv()).collect()),
            Block::Periodic { period, extent } => {
                let k = period.len();
                let e = extent.first().rem_euclid(k);
                let q = (0..k)
                    .map(|j| period[(e + 2 * k - 1 - j) % k].inv())
                    .collect();
                Block::Periodic {
                    period: q,
                    extent: extent.clone(),
                }
            }
        }
    }

    /// Cut at local offset `lambda` in `[0, extent]`.
    fn cut(&self, n: usize, lambda: &ZnVec) -> Result<(Option<Block>, Option<Block>)> {
        match self {
            Block::Finite(ls) => {
                let m = lambda.first().to_i64().expect("finite cut") as usize;
                let left = (m > 0).then(|| Block::Finite(ls[..m].to_vec()));
                let right = (m < ls.len()).then(|| Block::Finite(ls[m..].to_vec()));
                Ok((left, right))
            }
            Block::Periodic { period, extent } => {
                let k = period.len();
                let left = if lambda.is_zero() {
                    None
                } else if lambda.on_first_axis() {
                    Some(Block::Finite(materialize(period, 0, lambda.first())?))
                } else {
                    Some(Block::Periodic {
                        period: period.clone(),
                        extent: lambda.clone(),
                    })
                };
                let rest = extent - lambda;
                let shift = lambda.first().rem_euclid(k);
                let right = if rest.is_zero() {
                    None
                } else if rest.on_first_axis() {
                    Some(Block::Finite(materialize(period, shift, rest.first())?))
                } else {
                    Some(Block::Periodic {
                        period: rotate_left(period, shift),
                        extent: rest,
                    })
                };
                debug_assert!(n == extent.dim());
                Ok((left, right))
            }
        }
    }
}

pub(crate) fn rotate_left(p: &[Letter], s: usize) -> Vec<Letter> {
    let k = p.len();
    (0..k).map(|j| p[(j + s) % k]).collect()
}

/// `count` letters of the periodic pattern starting at phase `start`.
fn materialize(period: &[Letter], start: usize, count: &Int) -> Result<Vec<Letter>> {
    let c = match count.to_i64() {
        Some(c) if c >= 0 && (c as usize) <= MAX_MATERIALIZED => c as usize,
        _ => return Err(Error::TooLong(count.to_string())),
    };
    let k = period.len();
    Ok((0..c).map(|t| period[(start + t) % k]).collect())
}

/// True iff the finite letter sequence has no cancelling neighbours.
pub fn letters_reduced(ls: &[Letter]) -> bool {
    ls.windows(2).all(|w| w[1] != w[0].inv())
}

/// True iff the period can be repeated without cancellation.
pub fn period_cyclically_reduced(p: &[Letter]) -> bool {
    !p.is_empty() && letters_reduced(p) && p[0] != p[p.len() - 1].inv()
}

/// An unnormalized block sequence, used for inputs whose reducedness is
/// still in question.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawWord {
    pub n: usize,
    pub blocks: Vec<Block>,
}

impl RawWord {
    /// Checks every intra-block successor pair and every junction.
    pub fn is_reduced(&self) -> bool {
        let mut prev: Option<Letter> = None;
        for b in &self.blocks {
            let ok = match b {
                Block::Finite(ls) => letters_reduced(ls),
                Block::Periodic { period, .. } => period_cyclically_reduced(period),
            };
            if !ok {
                return false;
            }
            if let Some(l) = prev {
                if b.first_letter() == l.inv() {
                    return false;
                }
            }
            prev = Some(b.last_letter());
        }
        true
    }

    pub fn len(&self) -> ZnVec {
        self.blocks
            .iter()
            .fold(ZnVec::zero(self.n), |acc, b| &acc + &b.extent(self.n))
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Normalizes into a [`Word`], failing if the letter function cancels.
    pub fn into_word(self) -> Result<Word> {
        Word::from_blocks(self.n, self.blocks)
    }
}

/// A reduced `Z^n`-word in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    // Field order matters for the derived order: length first.
    len: ZnVec,
    blocks: Vec<Block>,
}

impl Word {
    pub fn empty(n: usize) -> Word {
        Word {
            len: ZnVec::zero(n),
            blocks: Vec::new(),
        }
    }

    pub fn letter(n: usize, l: Letter) -> Word {
        Word {
            len: ZnVec::unit(n),
            blocks: vec![Block::Finite(vec![l])],
        }
    }

    /// A finite word; errors if the letters cancel.
    pub fn from_letters(n: usize, ls: &[Letter]) -> Result<Word> {
        if !letters_reduced(ls) {
            return Err(Error::NotReduced(format!("{ls:?}")));
        }
        Ok(Word::from_reduced_letters(n, ls.to_vec()))
    }

    pub(crate) fn from_reduced_letters(n: usize, ls: Vec<Letter>) -> Word {
        debug_assert!(letters_reduced(&ls));
        if ls.is_empty() {
            return Word::empty(n);
        }
        Word {
            len: ZnVec::axis_int(n, Int::from(ls.len())),
            blocks: vec![Block::Finite(ls)],
        }
    }

    /// A single periodic run; `period` must be cyclically reduced and the
    /// extent non-negative.
    pub fn periodic(n: usize, period: &[Letter], extent: &ZnVec) -> Result<Word> {
        Word::from_blocks(
            n,
            vec![Block::Periodic {
                period: period.to_vec(),
                extent: extent.clone(),
            }],
        )
    }

    /// Validates and normalizes an arbitrary block list.
    pub fn from_blocks(n: usize, blocks: Vec<Block>) -> Result<Word> {
        let mut kept = Vec::with_capacity(blocks.len());
        for b in blocks {
            match &b {
                Block::Finite(ls) if ls.is_empty() => continue,
                Block::Periodic { period, extent } => {
                    if extent.dim() != n {
                        return Err(crate::lattice::LatticeError::DimensionMismatch {
                            left: n,
                            right: extent.dim(),
                        }
                        .into());
                    }
                    if period.is_empty() {
                        return Err(Error::EmptyWord);
                    }
                    if !period_cyclically_reduced(period) {
                        return Err(Error::NotCyclicallyReduced(format!("{period:?}")));
                    }
                    if extent.is_negative() {
                        return Err(Error::OutOfRange {
                            position: extent.to_string(),
                            low: ZnVec::zero(n).to_string(),
                            high: "+inf".into(),
                        });
                    }
                    if extent.is_zero() {
                        continue;
                    }
                }
                _ => {}
            }
            kept.push(b);
        }
        let raw = RawWord { n, blocks: kept };
        if !raw.is_reduced() {
            return Err(Error::NotReduced(format!("{:?}", raw.blocks)));
        }
        let blocks = normalize::normalize(n, raw.blocks)?;
        Ok(Word::assemble(n, blocks))
    }

    fn assemble(n: usize, blocks: Vec<Block>) -> Word {
        let len = blocks
            .iter()
            .fold(ZnVec::zero(n), |acc, b| &acc + &b.extent(n));
        Word { len, blocks }
    }

    pub fn dim(&self) -> usize {
        self.len.dim()
    }

    /// `|w|`.
    pub fn len(&self) -> &ZnVec {
        &self.len
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn to_raw(&self) -> RawWord {
        RawWord {
            n: self.dim(),
            blocks: self.blocks.clone(),
        }
    }

    /// The letters when the word is a single finite run (or empty).
    pub fn as_letters(&self) -> Option<&[Letter]> {
        match self.blocks.as_slice() {
            [] => Some(&[]),
            [Block::Finite(ls)] => Some(ls),
            _ => None,
        }
    }

    pub fn first_letter(&self) -> Option<Letter> {
        self.blocks.first().map(Block::first_letter)
    }

    pub fn last_letter(&self) -> Option<Letter> {
        self.blocks.last().map(Block::last_letter)
    }

    fn check_dim(&self, v: &ZnVec) -> Result<()> {
        if v.dim() == self.dim() {
            Ok(())
        } else {
            Err(crate::lattice::LatticeError::DimensionMismatch {
                left: self.dim(),
                right: v.dim(),
            }
            .into())
        }
    }

    /// The letter `w(β)` for `β` in `[1, |w|]`.
    pub fn char_at(&self, beta: &ZnVec) -> Result<Letter> {
        self.check_dim(beta)?;
        let n = self.dim();
        let one = ZnVec::unit(n);
        if !beta.in_segment(&one, &self.len) {
            return Err(Error::OutOfRange {
                position: beta.to_string(),
                low: one.to_string(),
                high: self.len.to_string(),
            });
        }
        let mut start = ZnVec::zero(n);
        for b in &self.blocks {
            let end = &start + &b.extent(n);
            if beta <= &end {
                let local = beta - &start;
                return Ok(b.letter_at_first(local.first()));
            }
            start = end;
        }
        unreachable!("position inside the word lies in some block")
    }

    /// `w^{-1}`.
    pub fn invert(&self) -> Word {
        let n = self.dim();
        let blocks: Vec<Block> = self.blocks.iter().rev().map(Block::inverse).collect();
        let blocks = normalize::normalize(n, blocks).expect("inverse of a canonical word");
        Word {
            len: self.len.clone(),
            blocks,
        }
    }

    /// `u ∘ v`, failing at a cancelling junction.
    pub fn concat(&self, v: &Word) -> Result<Word> {
        self.check_dim(v.len())?;
        if let (Some(x), Some(y)) = (self.last_letter(), v.first_letter()) {
            if y == x.inv() {
                return Err(Error::NotReduced(format!("junction {x:?} {y:?}")));
            }
        }
        Ok(self.concat_unchecked(v))
    }

    /// The raw block concatenation, reduced or not.
    pub fn raw_concat(&self, v: &Word) -> RawWord {
        let mut blocks = self.blocks.clone();
        blocks.extend(v.blocks.iter().cloned());
        RawWord {
            n: self.dim(),
            blocks,
        }
    }

    /// Concatenation for a junction already known to be reduced.
    pub(crate) fn concat_unchecked(&self, v: &Word) -> Word {
        let mut out = self.clone();
        out.append_unchecked(v.blocks.iter().cloned());
        out
    }

    fn append_unchecked(&mut self, blocks: impl IntoIterator<Item = Block>) {
        let n = self.dim();
        for b in blocks {
            self.len = &self.len + &b.extent(n);
            normalize::push(&mut self.blocks, b);
        }
    }

    fn range_error(&self, alpha: &ZnVec) -> Error {
        Error::OutOfRange {
            position: alpha.to_string(),
            low: ZnVec::zero(self.dim()).to_string(),
            high: self.len.to_string(),
        }
    }

    fn check_cut(&self, alpha: &ZnVec) -> Result<()> {
        self.check_dim(alpha)?;
        if alpha.is_negative() || alpha > &self.len {
            return Err(self.range_error(alpha));
        }
        Ok(())
    }

    /// Index of the block holding the cut at `alpha`, its start, and the
    /// local cut offset, found by scanning from the back.
    fn locate_from_back(&self, alpha: &ZnVec) -> (usize, ZnVec) {
        let n = self.dim();
        let mut start = self.len.clone();
        for i in (0..self.blocks.len()).rev() {
            start = &start - &self.blocks[i].extent(n);
            if &start <= alpha {
                return (i, alpha - &start);
            }
        }
        (0, alpha.clone())
    }

    /// `(w_α, w̃_α)` with `|w_α| = α`.
    pub fn split(&self, alpha: &ZnVec) -> Result<(Word, Word)> {
        self.check_cut(alpha)?;
        let n = self.dim();
        let mut start = ZnVec::zero(n);
        let mut idx = self.blocks.len();
        let mut local = ZnVec::zero(n);
        for (i, b) in self.blocks.iter().enumerate() {
            let end = &start + &b.extent(n);
            if alpha <= &end {
                idx = i;
                local = alpha - &start;
                break;
            }
            start = end;
        }
        if idx == self.blocks.len() {
            return Ok((self.clone(), Word::empty(n)));
        }
        let (l, r) = self.blocks[idx].cut(n, &local)?;
        let mut left: Vec<Block> = self.blocks[..idx].to_vec();
        let from = left.len().saturating_sub(1);
        left.extend(l);
        normalize::renormalize_from(&mut left, from);
        let mut right: Vec<Block> = r.into_iter().collect();
        right.extend(self.blocks[idx + 1..].iter().cloned());
        let right = normalize::normalize(n, right)?;
        let left = Word {
            len: alpha.clone(),
            blocks: left,
        };
        let right = Word {
            len: &self.len - alpha,
            blocks: right,
        };
        Ok((left, right))
    }

    /// `w_α`.
    pub fn prefix(&self, alpha: &ZnVec) -> Result<Word> {
        let mut w = self.clone();
        w.truncate(alpha)?;
        Ok(w)
    }

    /// `w̃_α`, the part after position `alpha`.
    pub fn suffix_from(&self, alpha: &ZnVec) -> Result<Word> {
        self.check_cut(alpha)?;
        let n = self.dim();
        let (idx, local) = self.locate_from_back(alpha);
        if self.blocks.is_empty() {
            return Ok(Word::empty(n));
        }
        let r = match &self.blocks[idx] {
            Block::Finite(ls) => {
                let m = local.first().to_i64().expect("finite cut") as usize;
                (m < ls.len()).then(|| Block::Finite(ls[m..].to_vec()))
            }
            b => b.cut(n, &local)?.1,
        };
        let mut right: Vec<Block> = r.into_iter().collect();
        right.extend(self.blocks[idx + 1..].iter().cloned());
        let blocks = normalize::normalize(n, right)?;
        Ok(Word {
            len: &self.len - alpha,
            blocks,
        })
    }

    /// The final piece of length `m`.
    pub fn suffix_of_len(&self, m: &ZnVec) -> Result<Word> {
        self.check_dim(m)?;
        if m.is_negative() || m > &self.len {
            return Err(self.range_error(m));
        }
        self.suffix_from(&(&self.len - m))
    }

    /// Truncates in place to the prefix of length `alpha`.
    pub fn truncate(&mut self, alpha: &ZnVec) -> Result<()> {
        self.check_cut(alpha)?;
        if alpha == &self.len {
            return Ok(());
        }
        let n = self.dim();
        let (idx, local) = self.locate_from_back(alpha);
        if let Block::Finite(ls) = &mut self.blocks[idx] {
            // Dropping the end of a letter run keeps the form canonical.
            let m = local.first().to_i64().expect("finite cut") as usize;
            ls.truncate(m);
            let keep = if m == 0 { idx } else { idx + 1 };
            self.blocks.truncate(keep);
            self.len = alpha.clone();
            return Ok(());
        }
        let (l, _) = self.blocks[idx].cut(n, &local)?;
        self.blocks.truncate(idx);
        let from = self.blocks.len().saturating_sub(1);
        self.blocks.extend(l);
        normalize::renormalize_from(&mut self.blocks, from);
        self.len = alpha.clone();
        Ok(())
    }

    /// True iff `self` is an initial segment of `other`.
    pub fn is_prefix_of(&self, other: &Word) -> Result<bool> {
        if self.len() > other.len() {
            return Ok(false);
        }
        Ok(&c_len(self, other)? == self.len())
    }

    /// `v(1)^{-1} != v(|v|)`.
    pub fn is_cyclically_reduced(&self) -> Result<bool> {
        match (self.first_letter(), self.last_letter()) {
            (Some(f), Some(l)) => Ok(f.inv() != l),
            _ => Err(Error::EmptyWord),
        }
    }

    /// `(c, u)` with `w = c^{-1} ∘ u ∘ c` and `u` cyclically reduced.
    pub fn cyclic_decomposition(&self) -> Result<(Word, Word)> {
        if self.is_empty() {
            return Err(Error::EmptyWord);
        }
        let d = c_len(self, &self.invert())?;
        cdr_from_overlap(self, &d)
    }

    /// The product `u ∗ v`.
    pub fn mult(&self, v: &Word) -> Result<Word> {
        self.check_dim(v.len())?;
        let c = self.cancellation(v)?;
        let left = self.prefix(&(&self.len - &c))?;
        let right = v.suffix_from(&c)?;
        Ok(left.concat_unchecked(&right))
    }

    /// `c(u^{-1}, v)` computed from the tail of `u` only.
    pub fn cancellation(&self, v: &Word) -> Result<ZnVec> {
        let m = self.len.lesser(v.len()).clone();
        let tail = self.suffix_of_len(&m)?;
        c_len(&tail.invert(), v)
    }

    /// In-place `self = self ∗ g`.
    pub fn mul_assign_right(&mut self, g: &Word) -> Result<()> {
        self.check_dim(g.len())?;
        let c = self.cancellation(g)?;
        let keep = &self.len - &c;
        self.truncate(&keep)?;
        if &c == g.len() {
            return Ok(());
        }
        if c.is_zero() {
            self.append_unchecked(g.blocks.iter().cloned());
        } else {
            let rest = g.suffix_from(&c)?;
            self.append_unchecked(rest.blocks);
        }
        Ok(())
    }

    /// Height of the length, `ℏ` of the word seen as a vertex.
    pub fn height(&self) -> Int {
        self.len.height().clone()
    }
}

/// Finishes a cyclic decomposition once the overlap `d = c(w, w^{-1})` is
/// known; split out so the defensive failure path can be exercised.
pub(crate) fn cdr_from_overlap(w: &Word, d: &ZnVec) -> Result<(Word, Word)> {
    if &d.scale_i64(2) >= w.len() {
        return Err(Error::NotInCdr);
    }
    let (head, rest) = w.split(d)?;
    let middle = rest.prefix(&(rest.len() - d))?;
    if !middle.is_cyclically_reduced()? {
        return Err(Error::NotInCdr);
    }
    Ok((head.invert(), middle))
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word[{}; ", self.len)?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            match b {
                Block::Finite(ls) => write!(f, "{ls:?}")?,
                Block::Periodic { period, extent } => write!(f, "({period:?})^{extent}")?,
            }
        }
        write!(f, "]")
    }
}
