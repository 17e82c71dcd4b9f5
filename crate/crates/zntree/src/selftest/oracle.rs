//! Reference models that share no code with the library.
//!
//! Words are arrays of nonzero letter codes (`-c` is the inverse of `c`).
//! This file is also compiled into the integration tests, so it uses only
//! `std`.

#![allow(dead_code)]

/// Free reduction by a stack.
pub fn reduce(w: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub fn is_reduced(w: &[i32]) -> bool {
    w.windows(2).all(|p| p[0] != -p[1])
}

pub fn invert(w: &[i32]) -> Vec<i32> {
    w.iter().rev().map(|x| -x).collect()
}

pub fn mult(u: &[i32], v: &[i32]) -> Vec<i32> {
    let mut all = u.to_vec();
    all.extend_from_slice(v);
    reduce(&all)
}

/// Longest common prefix.
pub fn com(u: &[i32], v: &[i32]) -> Vec<i32> {
    u.iter().zip(v).take_while(|(a, b)| a == b).map(|(a, _)| *a).collect()
}

pub fn split(w: &[i32], k: usize) -> (Vec<i32>, Vec<i32>) {
    (w[..k].to_vec(), w[k..].to_vec())
}

/// `(c, core)` with `w = c^{-1} core c` and `core` cyclically reduced.
pub fn cyclic_decomposition(w: &[i32]) -> (Vec<i32>, Vec<i32>) {
    let n = w.len();
    let mut k = 0;
    while 2 * k + 1 < n && w[k] == -w[n - 1 - k] {
        k += 1;
    }
    (invert(&w[..k]), w[k..n - k].to_vec())
}

/// Reduced words of length at most `k` over `rank` letters, visited depth
/// first.
pub fn for_each_reduced(rank: i32, k: usize, visit: &mut dyn FnMut(&[i32])) {
    fn go(rank: i32, k: usize, cur: &mut Vec<i32>, visit: &mut dyn FnMut(&[i32])) {
        visit(cur);
        if cur.len() == k {
            return;
        }
        for c in (1..=rank).flat_map(|c| [c, -c]) {
            if cur.last() == Some(&-c) {
                continue;
            }
            cur.push(c);
            go(rank, k, cur, visit);
            cur.pop();
        }
    }
    go(rank, k, &mut Vec::new(), visit);
}

/// Elements of the free group whose base-point image lies on the line
/// through the ends of `letter^{±∞}`, counted by word length up to `k`.
pub fn axis_line_count(rank: i32, letter: i32, k: usize) -> usize {
    let mut count = 0;
    for_each_reduced(rank, k, &mut |w| {
        if w.iter().all(|&x| x == letter || x == -letter) {
            count += 1;
        }
    });
    count
}

/// Probability that the uniform nearest-neighbour walk on the free group of
/// the given rank ever visits a fixed neighbour of its start. First-step
/// analysis gives `q = p + (2r - 1) p q^2` with `p = 1 / 2r`; the walk is
/// transient, so `q` is the smaller root.
pub fn hit_neighbour(rank: u32) -> f64 {
    let p = 1.0 / (2 * rank) as f64;
    let a = (2 * rank - 1) as f64 * p;
    (1.0 - (1.0 - 4.0 * a * p).sqrt()) / (2.0 * a)
}

/// Harmonic mass of a cone at depth `m >= 1` for the same walk.
///
/// With `β` the chance of ending inside the cone when started at its apex,
/// the first-step system is `β = (1 - q) + q · (q β)`, and reaching the apex
/// from the start has probability `q^m`.
pub fn harmonic_cone_mass(rank: u32, m: u32) -> f64 {
    let q = hit_neighbour(rank);
    let beta = (1.0 - q) / (1.0 - q * q);
    q.powi(m as i32) * beta
}

/// Speed of the word length: away from the identity the length goes up
/// with probability `(2r - 1) / 2r` and down otherwise.
pub fn drift(rank: u32) -> f64 {
    let up = (2 * rank - 1) as f64 / (2 * rank) as f64;
    up - (1.0 - up)
}

/// Least-squares slope of `y` on `x`.
pub fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Median of a nonempty sample.
pub fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.total_cmp(b));
    let m = s.len() / 2;
    if s.len() % 2 == 1 {
        s[m]
    } else {
        0.5 * (s[m - 1] + s[m])
    }
}

/// Distance in units in the last place between two finite floats.
pub fn ulps(a: f64, b: f64) -> u64 {
    fn key(x: f64) -> i64 {
        let bits = x.to_bits() as i64;
        if bits < 0 {
            i64::MIN - bits
        } else {
            bits
        }
    }
    key(a).abs_diff(key(b))
}
