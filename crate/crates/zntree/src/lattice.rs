//! The ordered abelian group `Z^n` under the right lexicographic order.
//!
//! Coordinates are [`Int`] values: machine integers that escalate to
//! arbitrary precision on overflow, so order comparisons never wrap.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use smallvec::SmallVec;
use thiserror::Error;

/// Errors raised by lattice arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("cannot parse lattice vector {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// A signed integer that is stored inline while it fits in `i64`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Int {
    Small(i64),
    /// Only used for values outside the `i64` range.
    Big(Box<BigInt>),
}

impl Int {
    pub const ZERO: Int = Int::Small(0);
    pub const ONE: Int = Int::Small(1);

    fn from_big(b: BigInt) -> Int {
        match b.to_i64() {
            Some(v) => Int::Small(v),
            None => Int::Big(Box::new(b)),
        }
    }

    pub fn to_big(&self) -> BigInt {
        match self {
            Int::Small(v) => BigInt::from(*v),
            Int::Big(b) => (**b).clone(),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Int::Small(v) => Some(*v),
            Int::Big(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }

    pub fn signum(&self) -> i32 {
        match self {
            Int::Small(v) => v.signum() as i32,
            Int::Big(b) => {
                if b.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    /// Euclidean remainder modulo a positive machine modulus.
    pub fn rem_euclid(&self, m: usize) -> usize {
        assert!(m > 0, "modulus must be positive");
        match self {
            Int::Small(v) => v.rem_euclid(m as i64) as usize,
            Int::Big(b) => {
                let m_big = BigInt::from(m);
                let r = ((&**b % &m_big) + &m_big) % &m_big;
                r.to_usize().expect("remainder fits")
            }
        }
    }

    pub fn abs(&self) -> Int {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Int {
        Int::Small(v)
    }
}

impl From<usize> for Int {
    fn from(v: usize) -> Int {
        match i64::try_from(v) {
            Ok(x) => Int::Small(x),
            Err(_) => Int::from_big(BigInt::from(v)),
        }
    }
}

impl Ord for Int {
    fn cmp(&self, other: &Int) -> Ordering {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Int {
    fn partial_cmp(&self, other: &Int) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Int {
    type Output = Int;
    fn add(self, rhs: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(s) = a.checked_add(*b) {
                return Int::Small(s);
            }
        }
        Int::from_big(self.to_big() + rhs.to_big())
    }
}

impl Sub for &Int {
    type Output = Int;
    fn sub(self, rhs: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(s) = a.checked_sub(*b) {
                return Int::Small(s);
            }
        }
        Int::from_big(self.to_big() - rhs.to_big())
    }
}

impl Mul for &Int {
    type Output = Int;
    fn mul(self, rhs: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(s) = a.checked_mul(*b) {
                return Int::Small(s);
            }
        }
        Int::from_big(self.to_big() * rhs.to_big())
    }
}

impl Neg for Int {
    type Output = Int;
    fn neg(self) -> Int {
        if let Int::Small(a) = self {
            if let Some(s) = a.checked_neg() {
                return Int::Small(s);
            }
        }
        Int::from_big(-self.to_big())
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::Small(v) => write!(f, "{v}"),
            Int::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Int {
    type Err = LatticeError;
    fn from_str(s: &str) -> Result<Int, LatticeError> {
        let t = s.trim();
        if let Ok(v) = t.parse::<i64>() {
            return Ok(Int::Small(v));
        }
        t.parse::<BigInt>()
            .map(Int::from_big)
            .map_err(|_| LatticeError::Parse {
                text: s.to_string(),
                reason: "not an integer".into(),
            })
    }
}

/// An element `(a_1, ..., a_n)` of `Z^n`.
///
/// `Ord` is the right lexicographic order: the last coordinate dominates.
/// Comparing or combining vectors of different dimension panics; the
/// `try_*` methods report [`LatticeError::DimensionMismatch`] instead.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZnVec(SmallVec<[Int; 2]>);

impl ZnVec {
    pub fn zero(n: usize) -> ZnVec {
        assert!(n >= 1, "dimension must be at least 1");
        ZnVec(std::iter::repeat_n(Int::ZERO, n).collect())
    }

    /// The minimal positive element `(1, 0, ..., 0)`.
    pub fn unit(n: usize) -> ZnVec {
        ZnVec::axis(n, 1)
    }

    /// `(k, 0, ..., 0)`.
    pub fn axis(n: usize, k: i64) -> ZnVec {
        let mut v = ZnVec::zero(n);
        v.0[0] = Int::Small(k);
        v
    }

    pub fn axis_int(n: usize, k: Int) -> ZnVec {
        let mut v = ZnVec::zero(n);
        v.0[0] = k;
        v
    }

    pub fn from_i64s(coords: &[i64]) -> ZnVec {
        assert!(!coords.is_empty(), "dimension must be at least 1");
        ZnVec(coords.iter().map(|&c| Int::Small(c)).collect())
    }

    pub fn from_ints(coords: Vec<Int>) -> ZnVec {
        assert!(!coords.is_empty(), "dimension must be at least 1");
        ZnVec(coords.into_iter().collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coord(&self, i: usize) -> &Int {
        &self.0[i]
    }

    pub fn coords(&self) -> &[Int] {
        &self.0
    }

    pub fn first(&self) -> &Int {
        &self.0[0]
    }

    /// The last coordinate `a_n`.
    pub fn height(&self) -> &Int {
        &self.0[self.0.len() - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Int::is_zero)
    }

    /// True iff every coordinate beyond the first vanishes.
    pub fn on_first_axis(&self) -> bool {
        self.0[1..].iter().all(Int::is_zero)
    }

    /// 0-based index of the highest nonzero coordinate, if any.
    pub fn top_index(&self) -> Option<usize> {
        self.0.iter().rposition(|c| !c.is_zero())
    }

    /// Sign in the right lexicographic order.
    pub fn signum(&self) -> i32 {
        match self.top_index() {
            Some(i) => self.0[i].signum(),
            None => 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    fn check(&self, other: &ZnVec) -> Result<(), LatticeError> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(LatticeError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            })
        }
    }

    pub fn try_cmp(&self, other: &ZnVec) -> Result<Ordering, LatticeError> {
        self.check(other)?;
        for i in (0..self.dim()).rev() {
            match self.0[i].cmp(&other.0[i]) {
                Ordering::Equal => continue,
                o => return Ok(o),
            }
        }
        Ok(Ordering::Equal)
    }

    pub fn try_add(&self, other: &ZnVec) -> Result<ZnVec, LatticeError> {
        self.check(other)?;
        Ok(ZnVec(
            self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn try_sub(&self, other: &ZnVec) -> Result<ZnVec, LatticeError> {
        self.check(other)?;
        Ok(ZnVec(
            self.0.iter().zip(other.0.iter()).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn scale(&self, m: &Int) -> ZnVec {
        ZnVec(self.0.iter().map(|a| a * m).collect())
    }

    pub fn scale_i64(&self, m: i64) -> ZnVec {
        self.scale(&Int::Small(m))
    }

    pub fn succ(&self) -> ZnVec {
        self + &ZnVec::unit(self.dim())
    }

    pub fn pred(&self) -> ZnVec {
        self - &ZnVec::unit(self.dim())
    }

    /// `alpha <= self <= beta`.
    pub fn try_in_segment(&self, alpha: &ZnVec, beta: &ZnVec) -> Result<bool, LatticeError> {
        Ok(alpha.try_cmp(self)? != Ordering::Greater && self.try_cmp(beta)? != Ordering::Greater)
    }

    pub fn in_segment(&self, alpha: &ZnVec, beta: &ZnVec) -> bool {
        self.try_in_segment(alpha, beta).expect("dimension mismatch")
    }

    /// Exact halving; `None` when some coordinate is odd.
    pub fn half(&self) -> Option<ZnVec> {
        let two = BigInt::from(2);
        let mut out = SmallVec::new();
        for c in &self.0 {
            match c {
                Int::Small(v) => {
                    if v % 2 != 0 {
                        return None;
                    }
                    out.push(Int::Small(v / 2));
                }
                Int::Big(b) => {
                    if !(&**b % &two).is_zero() {
                        return None;
                    }
                    out.push(Int::from_big(&**b / &two));
                }
            }
        }
        Some(ZnVec(out))
    }

    pub fn lesser<'a>(&'a self, other: &'a ZnVec) -> &'a ZnVec {
        if self <= other {
            self
        } else {
            other
        }
    }

    /// First coordinate as `f64` when the vector lies on the first axis.
    pub fn first_axis_f64(&self) -> Option<f64> {
        if !self.on_first_axis() {
            return None;
        }
        match self.first() {
            Int::Small(v) => Some(*v as f64),
            Int::Big(b) => b.to_f64(),
        }
    }
}

impl Ord for ZnVec {
    fn cmp(&self, other: &ZnVec) -> Ordering {
        self.try_cmp(other).expect("dimension mismatch")
    }
}

impl PartialOrd for ZnVec {
    fn partial_cmp(&self, other: &ZnVec) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &ZnVec {
    type Output = ZnVec;
    fn add(self, rhs: &ZnVec) -> ZnVec {
        self.try_add(rhs).expect("dimension mismatch")
    }
}

impl Sub for &ZnVec {
    type Output = ZnVec;
    fn sub(self, rhs: &ZnVec) -> ZnVec {
        self.try_sub(rhs).expect("dimension mismatch")
    }
}

impl Neg for &ZnVec {
    type Output = ZnVec;
    fn neg(self) -> ZnVec {
        ZnVec(self.0.iter().map(|a| -a.clone()).collect())
    }
}

impl fmt::Display for ZnVec {
    /// `(a1,...,an)`; one-dimensional vectors print as a bare integer.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for ZnVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ZnVec {
    type Err = LatticeError;
    /// Accepts `(a1,...,an)` or a bare integer for `n = 1`.
    fn from_str(s: &str) -> Result<ZnVec, LatticeError> {
        let t = s.trim();
        let inner = match t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            Some(inner) => inner,
            None => t,
        };
        let coords = inner
            .split(',')
            .map(|p| p.parse::<Int>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| LatticeError::Parse {
                text: s.to_string(),
                reason: "expected (a1,...,an) or an integer".into(),
            })?;
        Ok(ZnVec::from_ints(coords))
    }
}
