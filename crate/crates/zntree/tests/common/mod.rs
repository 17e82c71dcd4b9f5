//! Independent reference models used by the integration tests.
//!
//! The finite model works on explicit letter arrays with textbook free
//! reduction. Infinite words are only ever probed through `char_at` at
//! sampled positions, so nothing here shares code paths with the block
//! algebra under test.

#![allow(dead_code)]

use rand::Rng;
use zntree::word::{Block, Letter, Word};
use zntree::ZnVec;

/// Free reduction of a letter sequence (codes `±(i+1)`).
pub fn reduce(ls: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(ls.len());
    for &x in ls {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub fn naive_inv(ls: &[i32]) -> Vec<i32> {
    ls.iter().rev().map(|x| -x).collect()
}

pub fn naive_com(u: &[i32], v: &[i32]) -> Vec<i32> {
    u.iter()
        .zip(v.iter())
        .take_while(|(a, b)| a == b)
        .map(|(a, _)| *a)
        .collect()
}

pub fn naive_mult(u: &[i32], v: &[i32]) -> Vec<i32> {
    let mut all = u.to_vec();
    all.extend_from_slice(v);
    reduce(&all)
}

/// `(c, u)` with `w = c^{-1} u c`, by peeling matching end letters.
pub fn naive_cyclic(w: &[i32]) -> (Vec<i32>, Vec<i32>) {
    let mut i = 0;
    let mut j = w.len();
    while j > i + 1 && w[i] == -w[j - 1] {
        i += 1;
        j -= 1;
    }
    let c = naive_inv(&w[..i]);
    (c, w[i..j].to_vec())
}

pub fn random_reduced<R: Rng>(rng: &mut R, symbols: i32, max_len: usize) -> Vec<i32> {
    let len = rng.random_range(0..=max_len);
    let mut out: Vec<i32> = Vec::with_capacity(len);
    while out.len() < len {
        let s = rng.random_range(1..=symbols);
        let x = if rng.random_bool(0.5) { s } else { -s };
        if out.last() != Some(&-x) {
            out.push(x);
        }
    }
    out
}

pub fn to_word(n: usize, ls: &[i32]) -> Word {
    let letters: Vec<Letter> = ls.iter().map(|&c| Letter::from_code(c)).collect();
    Word::from_letters(n, &letters).expect("reduced input")
}

pub fn from_word(w: &Word) -> Vec<i32> {
    w.as_letters()
        .expect("finite word")
        .iter()
        .map(|l| l.code())
        .collect()
}

fn random_letter<R: Rng>(rng: &mut R, symbols: i32) -> Letter {
    let s = rng.random_range(1..=symbols);
    Letter::from_code(if rng.random_bool(0.5) { s } else { -s })
}

fn random_period<R: Rng>(rng: &mut R, symbols: i32, max_len: usize) -> Vec<Letter> {
    loop {
        let k = rng.random_range(1..=max_len);
        let mut p: Vec<Letter> = Vec::with_capacity(k);
        while p.len() < k {
            let x = random_letter(rng, symbols);
            if p.last().map(|l| l.inv()) != Some(x) {
                p.push(x);
            }
        }
        if p[0] != p[k - 1].inv() {
            return p;
        }
    }
}

fn block_first(b: &Block) -> Letter {
    b.first_letter()
}

fn block_last(b: &Block) -> Letter {
    b.last_letter()
}

/// A random reduced `Z^2` word with at most `max_blocks` blocks: finite
/// runs of 1..=4 letters and periodic runs with periods of 1..=3 letters
/// and extents `(e1, e2)`, `e1` in `[-20, 20]`, `e2` in `[1, 3]`.
pub fn random_z2_word<R: Rng>(rng: &mut R, symbols: i32, max_blocks: usize) -> Word {
    let count = rng.random_range(0..=max_blocks);
    let mut blocks: Vec<Block> = Vec::new();
    while blocks.len() < count {
        let b = if rng.random_bool(0.5) {
            let len = rng.random_range(1..=4);
            let mut ls: Vec<Letter> = Vec::with_capacity(len);
            while ls.len() < len {
                let x = random_letter(rng, symbols);
                if ls.last().map(|l| l.inv()) != Some(x) {
                    ls.push(x);
                }
            }
            Block::Finite(ls)
        } else {
            Block::Periodic {
                period: random_period(rng, symbols, 3),
                extent: ZnVec::from_i64s(&[rng.random_range(-20..=20), rng.random_range(1..=3)]),
            }
        };
        if let Some(prev) = blocks.last() {
            if block_first(&b) == block_last(prev).inv() {
                continue;
            }
        }
        blocks.push(b);
    }
    Word::from_blocks(2, blocks).expect("generated word is reduced")
}

/// Positions of `w` worth probing: around every block boundary, plus random
/// points in every row.
pub fn sample_positions<R: Rng>(rng: &mut R, w: &Word, count: usize) -> Vec<ZnVec> {
    let n = w.dim();
    assert_eq!(n, 2);
    let len = w.len().clone();
    if len.is_zero() {
        return Vec::new();
    }
    let one = ZnVec::unit(n);
    let mut anchors: Vec<ZnVec> = vec![ZnVec::zero(n)];
    let mut start = ZnVec::zero(n);
    for b in w.blocks() {
        start = &start + &b.extent(n);
        anchors.push(start.clone());
    }
    let mut out = Vec::with_capacity(count);
    let mut guard = 0;
    while out.len() < count && guard < count * 50 {
        guard += 1;
        let base = if rng.random_bool(0.6) {
            anchors[rng.random_range(0..anchors.len())].clone()
        } else {
            let h = len.coord(1).to_i64().unwrap();
            ZnVec::from_i64s(&[0, rng.random_range(0..=h)])
        };
        let delta = rng.random_range(-8i64..=8);
        let beta = &base + &ZnVec::from_i64s(&[delta, 0]);
        if beta.in_segment(&one, &len) {
            out.push(beta);
        }
    }
    out
}

/// Pointwise agreement of two words at the given positions.
pub fn agree_at(u: &Word, v: &Word, at: &[ZnVec]) -> bool {
    u.len() == v.len() && at.iter().all(|b| u.char_at(b).unwrap() == v.char_at(b).unwrap())
}
