//! Ends of the tree, Gromov products and the compactification metrics.
//!
//! Base point for every product and metric is `ε`. Symbolic ends are rays
//! `base ∘ tail ∘ tail ∘ ...`; empirical ends are finite chains of prefixes
//! produced by walks and carry only the resolution of their deepest prefix.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::Vertex;
use crate::lattice::{Int, ZnVec};
use crate::word::{c_len, Block, Word};

/// Repetition cap when two rays are compared by doubling.
const RAY_DOUBLINGS: u32 = 7;

/// An end known from a walk: each chain entry is a prefix of the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalEnd {
    chain: Vec<Word>,
    declared_type: usize,
}

impl EmpiricalEnd {
    pub fn new(chain: Vec<Word>, declared_type: usize) -> Result<EmpiricalEnd> {
        if chain.is_empty() {
            return Err(Error::InvalidBoundaryPoint("empty chain".into()));
        }
        for w in chain.windows(2) {
            if w[0].len() >= w[1].len() || !w[0].is_prefix_of(&w[1])? {
                return Err(Error::InvalidBoundaryPoint("chain is not monotone".into()));
            }
        }
        Ok(EmpiricalEnd {
            chain,
            declared_type,
        })
    }

    pub fn chain(&self) -> &[Word] {
        &self.chain
    }

    pub fn deepest(&self) -> &Word {
        self.chain.last().expect("nonempty chain")
    }

    /// Length of the deepest known prefix.
    pub fn resolution(&self) -> &ZnVec {
        self.deepest().len()
    }

    pub fn declared_type(&self) -> usize {
        self.declared_type
    }

    /// Drops all but the deepest prefix. The end it determines is unchanged.
    pub fn compact(mut self) -> EmpiricalEnd {
        let deep = self.chain.pop().expect("nonempty chain");
        self.chain = vec![deep];
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundaryPoint {
    Symbolic { base: Word, tail: Word },
    Empirical(EmpiricalEnd),
}

/// How a ray meets a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Overlap {
    /// Common prefix of finite length.
    Finite(ZnVec),
    /// The whole ray is an initial part of the word's geodesic from `ε`.
    Through,
}

/// How two rays meet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RayRelation {
    Diverge(ZnVec),
    Same,
    /// The first ray is an initial part of the second.
    FirstInside,
    SecondInside,
}

impl BoundaryPoint {
    /// Validates `base ∘ tail^k` for all `k`.
    pub fn symbolic(base: Word, tail: Word) -> Result<BoundaryPoint> {
        if tail.is_empty() {
            return Err(Error::InvalidBoundaryPoint("empty tail".into()));
        }
        if base.dim() != tail.dim() {
            return Err(Error::InvalidBoundaryPoint("dimension mismatch".into()));
        }
        if !tail.is_cyclically_reduced()? {
            return Err(Error::InvalidBoundaryPoint("tail is not cyclically reduced".into()));
        }
        base.concat(&tail)
            .map_err(|_| Error::InvalidBoundaryPoint("base and tail cancel".into()))?;
        Ok(BoundaryPoint::Symbolic { base, tail })
    }

    /// The end of `ε, a, a^2, ...` for a cyclically reduced `a`.
    pub fn power_end(tail: Word) -> Result<BoundaryPoint> {
        let n = tail.dim();
        BoundaryPoint::symbolic(Word::empty(n), tail)
    }

    pub fn dim(&self) -> usize {
        match self {
            BoundaryPoint::Symbolic { base, .. } => base.dim(),
            BoundaryPoint::Empirical(e) => e.deepest().dim(),
        }
    }

    /// `base ∘ tail^m`.
    pub fn ray_prefix(&self, m: u64) -> Result<Word> {
        match self {
            BoundaryPoint::Symbolic { base, tail } => {
                let mut out = base.clone();
                let mut sq = tail.clone();
                let mut e = m;
                let mut pow = Word::empty(base.dim());
                while e > 0 {
                    if e & 1 == 1 {
                        pow = pow.concat_unchecked(&sq);
                    }
                    e >>= 1;
                    if e > 0 {
                        sq = sq.concat_unchecked(&sq);
                    }
                }
                out = out.concat_unchecked(&pow);
                Ok(out)
            }
            BoundaryPoint::Empirical(_) => Err(Error::Resolution(
                "empirical ends have no closed-form ray".into(),
            )),
        }
    }

    /// The `k` with the ray isometric to `[0, ∞)` in `Z^k`.
    pub fn end_type(&self) -> usize {
        match self {
            BoundaryPoint::Symbolic { tail, .. } => {
                tail.len().top_index().expect("nonempty tail") + 1
            }
            BoundaryPoint::Empirical(e) => e.declared_type(),
        }
    }

    /// `g · ω`, available when the cancellation of `g` stops inside a
    /// finite piece of the ray.
    pub fn translate(&self, g: &Word) -> Result<BoundaryPoint> {
        match self {
            BoundaryPoint::Symbolic { tail, .. } => {
                for j in 0..=RAY_DOUBLINGS + 3 {
                    let m = 1u64 << j;
                    let r = self.ray_prefix(m)?;
                    let c = g.cancellation(&r)?;
                    if &c < r.len() {
                        let base = g.mult(&r)?;
                        return BoundaryPoint::symbolic(base, tail.clone());
                    }
                }
                Err(Error::Resolution("translation absorbs the whole ray".into()))
            }
            BoundaryPoint::Empirical(e) => {
                let mut chain = Vec::new();
                for w in e.chain() {
                    let c = g.cancellation(w)?;
                    if &c < w.len() {
                        let img = g.mult(w)?;
                        if chain.last().is_none_or(|p: &Word| p.len() < img.len()) {
                            chain.push(img);
                        }
                    }
                }
                if chain.is_empty() {
                    return Err(Error::Resolution("translation absorbs the whole chain".into()));
                }
                Ok(BoundaryPoint::Empirical(EmpiricalEnd::new(chain, e.declared_type())?))
            }
        }
    }

    /// `c(ray, q)`.
    pub fn overlap_word(&self, q: &Word) -> Result<Overlap> {
        match self {
            BoundaryPoint::Empirical(e) => {
                let p = e.deepest();
                let c = c_len(p, q)?;
                if &c < p.len() {
                    Ok(Overlap::Finite(c))
                } else {
                    Err(Error::Resolution(format!(
                        "chain of length {} does not separate the end from the word",
                        p.len()
                    )))
                }
            }
            BoundaryPoint::Symbolic { base, tail } => {
                let m = self.separating_repetitions(base, tail, q);
                let r = self.ray_prefix(m)?;
                let c = c_len(&r, q)?;
                if &c < r.len() {
                    return Ok(Overlap::Finite(c));
                }
                if tail.len().on_first_axis() && q.len() > r.len() {
                    return Ok(Overlap::Through);
                }
                // Only reachable for ends of intermediate type in dimension
                // three or more; double until the word is outgrown or the cap.
                let mut m = m;
                for _ in 0..RAY_DOUBLINGS {
                    m *= 2;
                    let r = self.ray_prefix(m)?;
                    let c = c_len(&r, q)?;
                    if &c < r.len() {
                        return Ok(Overlap::Finite(c));
                    }
                }
                Ok(Overlap::Through)
            }
        }
    }

    /// Repetitions after which the ray either leaves `q` or provably runs
    /// along it forever.
    fn separating_repetitions(&self, base: &Word, tail: &Word, q: &Word) -> u64 {
        let n = base.dim();
        let tl = tail.len();
        let top = tl.top_index().expect("nonempty tail");
        // Coordinate `top` of the ray grows without bound; all coordinates
        // above it stay at those of `base`.
        let step = tl.coord(top).to_i64().unwrap_or(i64::MAX).max(1);
        let base_top = base.len().coord(top).to_i64().unwrap_or(0);
        let q_top = q.len().coord(top).to_i64().unwrap_or(i64::MAX / 4);
        let mut need = ((q_top - base_top).max(0) / step) as u64 + 2;
        if top == 0 {
            // The ray lives in one row. Past the last block boundary of `q`
            // in that row, `q` is periodic there, and agreement over one
            // period of each side persists.
            let row: Vec<Int> = base.len().coords()[1..].to_vec();
            let mut col = base.len().first().to_i64().unwrap_or(0);
            let mut maxp = 1i64;
            let mut start = ZnVec::zero(n);
            for b in q.blocks() {
                if let Block::Periodic { period, .. } = b {
                    maxp = maxp.max(period.len() as i64);
                }
                let end = &start + &b.extent(n);
                for p in [&start, &end] {
                    if p.coords()[1..] == row[..] {
                        col = col.max(p.first().to_i64().unwrap_or(0));
                    }
                }
                start = end;
            }
            let bound = col + 2 * (step + maxp) - base.len().first().to_i64().unwrap_or(0);
            need = need.max((bound.max(0) / step) as u64 + 2);
        }
        need
    }

    /// Relation between two rays.
    pub fn relation(&self, other: &BoundaryPoint) -> Result<RayRelation> {
        match (self, other) {
            (BoundaryPoint::Empirical(_), _) | (_, BoundaryPoint::Empirical(_)) => {
                let (p, q) = (self.finite_proxy(), other.finite_proxy());
                let c = c_len(p, q)?;
                if &c < p.len() && &c < q.len() {
                    Ok(RayRelation::Diverge(c))
                } else {
                    Err(Error::Resolution(
                        "empirical ends are compared through cones only".into(),
                    ))
                }
            }
            _ => {
                let mut last = (ZnVec::zero(self.dim()), ZnVec::zero(self.dim()));
                for j in 0..=RAY_DOUBLINGS {
                    let m = 1u64 << j;
                    let a = self.ray_prefix(m)?;
                    let b = other.ray_prefix(m)?;
                    let c = c_len(&a, &b)?;
                    if &c < a.len() && &c < b.len() {
                        return Ok(RayRelation::Diverge(c));
                    }
                    last = (a.len().clone(), b.len().clone());
                }
                // Use exact overlaps when one ray stays in a row.
                for (x, y, inside) in [
                    (self, other, RayRelation::FirstInside),
                    (other, self, RayRelation::SecondInside),
                ] {
                    if let BoundaryPoint::Symbolic { tail, .. } = x {
                        if tail.len().on_first_axis() {
                            let deep = y.ray_prefix(1u64 << RAY_DOUBLINGS)?;
                            if x.limit_order(y) == std::cmp::Ordering::Less
                                && x.overlap_word(&deep)? == Overlap::Through
                            {
                                return Ok(inside);
                            }
                        }
                    }
                }
                let _ = last;
                Ok(match self.limit_order(other) {
                    std::cmp::Ordering::Equal => RayRelation::Same,
                    std::cmp::Ordering::Less => RayRelation::FirstInside,
                    std::cmp::Ordering::Greater => RayRelation::SecondInside,
                })
            }
        }
    }

    /// Compares the limiting lengths of two rays, with `+∞` in the growing
    /// coordinate, in right lexicographic order.
    fn limit_order(&self, other: &BoundaryPoint) -> std::cmp::Ordering {
        let key = |p: &BoundaryPoint| -> (usize, Vec<Int>) {
            match p {
                BoundaryPoint::Symbolic { base, tail } => {
                    let top = tail.len().top_index().unwrap();
                    (top, base.len().coords()[top + 1..].to_vec())
                }
                BoundaryPoint::Empirical(e) => {
                    let top = e.declared_type().saturating_sub(1);
                    (top, e.resolution().coords()[top + 1..].to_vec())
                }
            }
        };
        let (ta, ca) = key(self);
        let (tb, cb) = key(other);
        let n = self.dim();
        for i in (0..n).rev() {
            let va = if i > ta { Some(&ca[i - ta - 1]) } else { None };
            let vb = if i > tb { Some(&cb[i - tb - 1]) } else { None };
            let o = match (i == ta, i == tb) {
                (true, true) => std::cmp::Ordering::Equal,
                (true, false) => std::cmp::Ordering::Greater,
                (false, true) => std::cmp::Ordering::Less,
                (false, false) => match (va, vb) {
                    (Some(x), Some(y)) => x.cmp(y),
                    _ => std::cmp::Ordering::Equal,
                },
            };
            if o != std::cmp::Ordering::Equal {
                return o;
            }
            if i == ta || i == tb {
                return o;
            }
        }
        std::cmp::Ordering::Equal
    }

    fn finite_proxy(&self) -> &Word {
        match self {
            BoundaryPoint::Empirical(e) => e.deepest(),
            BoundaryPoint::Symbolic { base, .. } => base,
        }
    }

    /// `ω ∈ U_x`: the apex is an initial segment of the ray.
    pub fn in_cone(&self, apex: &Word) -> Result<bool> {
        match self {
            BoundaryPoint::Empirical(e) => {
                let p = e.deepest();
                if apex.len() <= p.len() {
                    apex.is_prefix_of(p)
                } else {
                    let c = c_len(p, apex)?;
                    if &c < p.len() {
                        Ok(false)
                    } else {
                        Err(Error::Resolution(format!(
                            "cone apex of length {} beyond resolution {}",
                            apex.len(),
                            p.len()
                        )))
                    }
                }
            }
            BoundaryPoint::Symbolic { .. } => Ok(match self.overlap_word(apex)? {
                Overlap::Finite(c) => &c == apex.len(),
                Overlap::Through => false,
            }),
        }
    }
}

/// A point of the compactified tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Vertex(Word),
    End(BoundaryPoint),
}

impl Point {
    pub fn vertex(v: &Vertex) -> Point {
        Point::Vertex(v.prefix.clone())
    }

    pub fn dim(&self) -> usize {
        match self {
            Point::Vertex(w) => w.dim(),
            Point::End(e) => e.dim(),
        }
    }
}

/// `c(p, q)` for arbitrary points; `None` when the points are the same end
/// or one end lies on the geodesic from `ε` to the other point.
fn point_overlap(p: &Point, q: &Point) -> Result<Option<ZnVec>> {
    Ok(match (p, q) {
        (Point::Vertex(a), Point::Vertex(b)) => Some(c_len(a, b)?),
        (Point::End(e), Point::Vertex(w)) | (Point::Vertex(w), Point::End(e)) => {
            match e.overlap_word(w)? {
                Overlap::Finite(c) => Some(c),
                Overlap::Through => None,
            }
        }
        (Point::End(a), Point::End(b)) => match a.relation(b)? {
            RayRelation::Diverge(c) => Some(c),
            _ => None,
        },
    })
}

/// A value of `½ Z^n`, stored doubled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfZn {
    pub doubled: ZnVec,
}

impl HalfZn {
    pub fn from_integral(v: ZnVec) -> HalfZn {
        HalfZn {
            doubled: v.scale_i64(2),
        }
    }

    pub fn to_integral(&self) -> Option<ZnVec> {
        self.doubled.half()
    }
}

impl std::fmt::Display for HalfZn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.to_integral() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "{}/2", self.doubled),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gromov {
    Finite(HalfZn),
    /// The two points are the same end.
    Infinite,
}

/// `(x · y)_w = |w| - c(x,w) - c(y,w) + c(x,y)` (twice the usual half-sum
/// divided out; always integral in a tree).
pub fn gromov(x: &Point, y: &Point, w: &Word) -> Result<Gromov> {
    let wp = Point::Vertex(w.clone());
    let cxy = match point_overlap(x, y)? {
        Some(c) => c,
        None => return Ok(Gromov::Infinite),
    };
    let cxw = point_overlap(x, &wp)?
        .ok_or_else(|| Error::InvalidBoundaryPoint("end between ε and the base point".into()))?;
    let cyw = point_overlap(y, &wp)?
        .ok_or_else(|| Error::InvalidBoundaryPoint("end between ε and the base point".into()))?;
    let v = &(&(w.len() - &cxw) - &cyw) + &cxy;
    Ok(Gromov::Finite(HalfZn::from_integral(v)))
}

fn points_equal(x: &Point, y: &Point) -> Result<bool> {
    Ok(match (x, y) {
        (Point::Vertex(a), Point::Vertex(b)) => a == b,
        (Point::End(a), Point::End(b)) => {
            if let (BoundaryPoint::Empirical(_), _) | (_, BoundaryPoint::Empirical(_)) = (a, b) {
                false
            } else {
                a.relation(b)? == RayRelation::Same
            }
        }
        _ => false,
    })
}

/// `e^{-k}` for a first-axis Gromov value `(k, 0, ..., 0)`.
fn exp_of(g: &Gromov) -> Result<f64> {
    match g {
        Gromov::Infinite => Ok(0.0),
        Gromov::Finite(h) => {
            let v = h.to_integral().expect("integral product");
            match v.first_axis_f64() {
                Some(k) => Ok((-k).exp()),
                // Infinitely far inside the subtree: the same point seen
                // through two representatives.
                None if v.is_positive() => Ok(0.0),
                None => Err(Error::CrossClass),
            }
        }
    }
}

fn in_base_class(p: &Point) -> bool {
    match p {
        Point::Vertex(w) => w.len().on_first_axis(),
        Point::End(BoundaryPoint::Symbolic { base, tail }) => {
            base.len().on_first_axis() && tail.len().on_first_axis()
        }
        Point::End(BoundaryPoint::Empirical(e)) => {
            e.declared_type() == 1 && e.resolution().on_first_axis()
        }
    }
}

/// `d(x,y) = e^{-(x·y)_ε}` for `x != y`, `0` for `x = y`, on the
/// compactified subtree through `ε`.
pub fn d_ultra(x: &Point, y: &Point) -> Result<f64> {
    if !in_base_class(x) || !in_base_class(y) {
        return Err(Error::CrossClass);
    }
    if points_equal(x, y)? {
        return Ok(0.0);
    }
    let n = x.dim();
    exp_of(&gromov(x, y, &Word::empty(n))?)
}

/// A region `B_δ(x)` of the compactified simplicial tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Region {
    Whole,
    /// `T(ε, z) ∪ ∂T(ε, z)`: everything whose geodesic from `ε` passes `z`.
    Cone { apex: Word },
    Singleton(Point),
}

/// Balls of the ultrametric on a one-dimensional workspace.
pub fn ball_in_compactification(x: &Point, delta: f64) -> Result<Region> {
    if x.dim() != 1 {
        return Err(Error::UnsupportedDimension(x.dim()));
    }
    if delta.is_nan() || delta <= 0.0 {
        return Ok(Region::Singleton(x.clone()));
    }
    let r = -delta.ln();
    let rounded = r.round();
    let m = if (r - rounded).abs() <= 4.0 * f64::EPSILON * r.abs().max(1.0) {
        rounded
    } else {
        r.ceil()
    };
    if m <= 0.0 {
        return Ok(Region::Whole);
    }
    let m = m as u64;
    let len = ZnVec::from_i64s(&[m as i64]);
    match x {
        Point::Vertex(w) => {
            if w.len() < &len {
                Ok(Region::Singleton(x.clone()))
            } else {
                Ok(Region::Cone {
                    apex: w.prefix(&len)?,
                })
            }
        }
        Point::End(e) => {
            let w = match e {
                BoundaryPoint::Symbolic { tail, base } => {
                    let reps = m / tail.len().first().to_i64().unwrap().max(1) as u64 + 1;
                    let _ = base;
                    e.ray_prefix(reps)?
                }
                BoundaryPoint::Empirical(emp) => emp.deepest().clone(),
            };
            if w.len() < &len {
                return Err(Error::Resolution("end known below the ball radius".into()));
            }
            Ok(Region::Cone {
                apex: w.prefix(&len)?,
            })
        }
    }
}

impl Region {
    pub fn contains(&self, p: &Point) -> Result<bool> {
        match self {
            Region::Whole => Ok(true),
            Region::Singleton(x) => points_equal(x, p),
            Region::Cone { apex } => match p {
                Point::Vertex(w) => apex.is_prefix_of(w),
                Point::End(e) => e.in_cone(apex),
            },
        }
    }
}

/// `ℏ`-level of the class of prefixes of `x` at height `j`, named by its
/// base vertex: the prefix through the first periodic block reaching height
/// `j`, continued along that block's period to column 0 of row `j`.
pub fn class_key(x: &Word, j: u64) -> Result<Word> {
    let n = x.dim();
    if j == 0 {
        return Ok(Word::empty(n));
    }
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    let mut pre: Vec<Block> = Vec::new();
    let mut start = ZnVec::zero(n);
    for b in x.blocks() {
        let end = &start + &b.extent(n);
        let h_end = end.height().to_i64().unwrap_or(i64::MAX) as u64;
        if h_end >= j {
            let Block::Periodic { period, .. } = b else {
                unreachable!("only periodic blocks raise the height")
            };
            let h0 = start.height().to_i64().unwrap_or(0) as u64;
            let mut ext = ZnVec::zero(n);
            let mut coords = ext.coords().to_vec();
            coords[n - 1] = Int::from((j - h0) as usize);
            ext = ZnVec::from_ints(coords);
            pre.push(Block::Periodic {
                period: period.clone(),
                extent: ext,
            });
            return Word::from_blocks(n, pre);
        }
        pre.push(b.clone());
        start = end;
    }
    Err(Error::OutOfRange {
        position: j.to_string(),
        low: "0".into(),
        high: x.len().height().to_string(),
    })
}

fn height_u64(v: &ZnVec) -> u64 {
    v.height().to_i64().expect("height fits").max(0) as u64
}

/// Identifier of a class in the canonical enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassId {
    pub level: u64,
    /// 1-based position inside the level; unexplored classes met along
    /// ends get one past the explored count.
    pub index: u64,
    pub virtual_class: bool,
}

impl ClassId {
    /// `1` for the class of `ε`, else `2^{-(level + index)}`.
    pub fn scale(&self) -> f64 {
        if self.level == 0 {
            1.0
        } else {
            (-((self.level + self.index) as f64)).exp2()
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClassRecord {
    pub key: Word,
    /// Index of the parent class in the previous level.
    pub parent: Option<u64>,
    /// Explored vertices whose own class this is.
    pub vertex_count: usize,
}

/// Explored classes grouped by level, numbered breadth first.
#[derive(Clone, Debug)]
pub struct TreeOfTrees {
    n: usize,
    levels: Vec<Vec<ClassRecord>>,
    lookup: HashMap<Word, (u64, u64)>,
}

impl TreeOfTrees {
    pub fn build<'a>(n: usize, vertices: impl IntoIterator<Item = &'a Word>) -> Result<TreeOfTrees> {
        if n < 2 {
            let mut lookup = HashMap::new();
            lookup.insert(Word::empty(n), (0, 1));
            let count = vertices.into_iter().count();
            return Ok(TreeOfTrees {
                n,
                levels: vec![vec![ClassRecord {
                    key: Word::empty(n),
                    parent: None,
                    vertex_count: count,
                }]],
                lookup,
            });
        }
        let mut parent_of: Vec<HashMap<Word, Word>> = vec![HashMap::new()];
        let mut counts: HashMap<Word, usize> = HashMap::new();
        parent_of[0].insert(Word::empty(n), Word::empty(n));
        for x in vertices {
            let h = height_u64(x.len());
            let mut prev = Word::empty(n);
            for j in 1..=h {
                let key = class_key(x, j)?;
                while parent_of.len() <= j as usize {
                    parent_of.push(HashMap::new());
                }
                parent_of[j as usize].entry(key.clone()).or_insert(prev);
                prev = key;
            }
            *counts.entry(prev).or_insert(0) += 1;
        }
        let mut levels: Vec<Vec<ClassRecord>> = Vec::new();
        let mut lookup: HashMap<Word, (u64, u64)> = HashMap::new();
        for (j, map) in parent_of.into_iter().enumerate() {
            let mut recs: Vec<(Option<u64>, Word)> = map
                .into_iter()
                .map(|(k, p)| {
                    let parent = if j == 0 { None } else { Some(lookup[&p].1) };
                    (parent, k)
                })
                .collect();
            recs.sort();
            let mut level = Vec::with_capacity(recs.len());
            for (i, (parent, key)) in recs.into_iter().enumerate() {
                lookup.insert(key.clone(), (j as u64, i as u64 + 1));
                let vertex_count = counts.get(&key).copied().unwrap_or(0);
                level.push(ClassRecord {
                    key,
                    parent,
                    vertex_count,
                });
            }
            levels.push(level);
        }
        Ok(TreeOfTrees { n, levels, lookup })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn levels(&self) -> &[Vec<ClassRecord>] {
        &self.levels
    }

    pub fn class_count(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    /// Number of adjacencies (every class but the base one has a parent).
    pub fn gluing_count(&self) -> usize {
        self.class_count().saturating_sub(1)
    }

    pub fn explored_at(&self, level: u64) -> u64 {
        self.levels.get(level as usize).map_or(0, |l| l.len() as u64)
    }

    pub fn max_level(&self) -> u64 {
        self.levels.len() as u64 - 1
    }

    pub fn find(&self, key: &Word) -> Option<ClassId> {
        self.lookup.get(key).map(|&(level, index)| ClassId {
            level,
            index,
            virtual_class: false,
        })
    }

    fn class_for(&self, key: &Word, level: u64, allow_virtual: bool) -> Result<ClassId> {
        match self.find(key) {
            Some(id) => Ok(id),
            None if allow_virtual => Ok(ClassId {
                level,
                index: self.explored_at(level) + 1,
                virtual_class: true,
            }),
            None => Err(Error::ExplorationNeeded(format!(
                "level {level}, base vertex {key:?}"
            ))),
        }
    }
}

/// One summand of a `dbar` evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceEntry {
    pub class: ClassId,
    pub scale: f64,
    pub inner: f64,
    pub contribution: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DbarValue {
    pub value: f64,
    /// Upper bound on the truncation error (nonzero for empirical ends).
    pub error_bound: f64,
    pub trace: Vec<TraceEntry>,
    /// Closed-form remainder for `Z^n`-type ends.
    pub tail_sum: f64,
}

/// A representative inside one class: a word, or an end of that class.
#[derive(Clone, Debug)]
enum Rep {
    Word(Word),
    End(BoundaryPoint),
}

impl Rep {
    fn point(&self) -> Point {
        match self {
            Rep::Word(w) => Point::Vertex(w.clone()),
            Rep::End(e) => Point::End(e.clone()),
        }
    }
}

/// The levels a point passes through, with its class keys.
struct Profile {
    point: Point,
    /// Own level; `None` for ends climbing every level.
    top: Option<u64>,
    allow_virtual: bool,
    /// Set for empirical ends: analysis stops at this level.
    truncated_at: Option<u64>,
}

impl Profile {
    fn new(p: &Point) -> Result<Profile> {
        Ok(match p {
            Point::Vertex(w) => Profile {
                point: p.clone(),
                top: Some(height_u64(w.len())),
                allow_virtual: false,
                truncated_at: None,
            },
            Point::End(e @ BoundaryPoint::Symbolic { base, tail }) => {
                let climbing = !tail.len().height().is_zero();
                let _ = e;
                Profile {
                    point: p.clone(),
                    top: if climbing {
                        None
                    } else {
                        Some(height_u64(base.len()))
                    },
                    allow_virtual: true,
                    truncated_at: None,
                }
            }
            Point::End(BoundaryPoint::Empirical(emp)) => {
                let h = height_u64(emp.resolution());
                Profile {
                    point: Point::Vertex(emp.deepest().clone()),
                    top: Some(h),
                    allow_virtual: true,
                    truncated_at: if emp.declared_type() == emp.deepest().dim() {
                        Some(h)
                    } else {
                        None
                    },
                }
            }
        })
    }

    /// A word long enough to read the class key at level `j`.
    fn carrier(&self, j: u64) -> Result<Word> {
        match &self.point {
            Point::Vertex(w) => Ok(w.clone()),
            Point::End(e @ BoundaryPoint::Symbolic { base, tail }) => {
                let th = height_u64(tail.len());
                let bh = height_u64(base.len());
                let m = j.saturating_sub(bh).checked_div(th).map_or(1, |q| q + 2);
                e.ray_prefix(m)
            }
            Point::End(BoundaryPoint::Empirical(e)) => Ok(e.deepest().clone()),
        }
    }

    fn key(&self, j: u64) -> Result<Word> {
        class_key(&self.carrier(j)?, j)
    }

    /// The point itself as seen from its own class.
    fn own_rep(&self) -> Rep {
        match &self.point {
            Point::Vertex(w) => Rep::Word(w.clone()),
            Point::End(e) => Rep::End(e.clone()),
        }
    }

    /// Representative at level `j` on the way up toward the point.
    fn rep_at(&self, j: u64) -> Result<Rep> {
        if Some(j) == self.top {
            Ok(self.own_rep())
        } else {
            Ok(Rep::Word(self.key(j + 1)?))
        }
    }
}

/// Distance inside one class, between two representatives.
fn class_distance(key: &Word, p: &Rep, q: &Rep) -> Result<f64> {
    if let (Rep::Word(a), Rep::Word(b)) = (p, q) {
        if a == b {
            return Ok(0.0);
        }
    }
    exp_of(&gromov(&p.point(), &q.point(), key)?)
}

struct Acc<'t> {
    tree: &'t TreeOfTrees,
    trace: Vec<TraceEntry>,
    value: f64,
}

impl Acc<'_> {
    fn add(&mut self, key: &Word, level: u64, allow_virtual: bool, p: &Rep, q: &Rep) -> Result<f64> {
        let class = self.tree.class_for(key, level, allow_virtual)?;
        let inner = class_distance(key, p, q)?;
        let scale = class.scale();
        let contribution = scale * inner;
        self.trace.push(TraceEntry {
            class,
            scale,
            inner,
            contribution,
        });
        self.value += contribution;
        Ok(inner)
    }
}

/// The recursive metric on the explored compactified `Z^2`-tree (and the
/// ultrametric when `n = 1`).
pub fn dbar(tree: &TreeOfTrees, x: &Point, y: &Point) -> Result<DbarValue> {
    let n = tree.dim();
    if x.dim() != n || y.dim() != n {
        return Err(Error::Workspace("point dimension differs from the tree".into()));
    }
    if n == 1 {
        let v = d_ultra(x, y)?;
        return Ok(DbarValue {
            value: v,
            error_bound: 0.0,
            trace: vec![TraceEntry {
                class: ClassId {
                    level: 0,
                    index: 1,
                    virtual_class: false,
                },
                scale: 1.0,
                inner: v,
                contribution: v,
            }],
            tail_sum: 0.0,
        });
    }
    if n > 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    let px = Profile::new(x)?;
    let py = Profile::new(y)?;
    if points_equal(&px.point, &py.point)? {
        return Ok(DbarValue {
            value: 0.0,
            error_bound: 0.0,
            trace: Vec::new(),
            tail_sum: 0.0,
        });
    }
    // Level of the class where the two geodesics from ε part.
    let meet = match point_overlap(&px.point, &py.point)? {
        Some(c) => height_u64(&c),
        None => match (px.top, py.top) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => unreachable!("distinct climbing ends diverge"),
        },
    };
    let mut acc = Acc {
        tree,
        trace: Vec::new(),
        value: 0.0,
    };
    let mkey = px.key(meet)?;
    debug_assert_eq!(mkey, py.key(meet)?);
    let rx = px.rep_at(meet)?;
    let ry = py.rep_at(meet)?;
    acc.add(&mkey, meet, px.allow_virtual || py.allow_virtual, &rx, &ry)?;
    let mut tail_sum = 0.0;
    let mut error_bound = 0.0;
    let eps = Rep::Word(Word::empty(n));
    for p in [&px, &py] {
        match p.top {
            Some(top) => {
                for j in meet + 1..=top {
                    let key = p.key(j)?;
                    let out = p.rep_at(j)?;
                    acc.add(&key, j, p.allow_virtual, &eps, &out)?;
                }
                if p.truncated_at.is_some() {
                    error_bound += (-((top as f64) - 1.0)).exp2();
                }
            }
            None => {
                tail_sum += climb(&mut acc, p, meet)?;
            }
        }
    }
    acc.value += tail_sum;
    Ok(DbarValue {
        value: acc.value,
        error_bound,
        trace: acc.trace,
        tail_sum,
    })
}

/// Adds explicit levels above `meet` along a climbing end and returns the
/// closed-form sum of the periodic remainder.
fn climb(acc: &mut Acc<'_>, p: &Profile, meet: u64) -> Result<f64> {
    let (base, tail) = match &p.point {
        Point::End(BoundaryPoint::Symbolic { base, tail }) => (base, tail),
        _ => unreachable!("only symbolic ends climb"),
    };
    let n = base.dim();
    let eps = Rep::Word(Word::empty(n));
    let t = height_u64(tail.len());
    let inner_at = |j: u64| -> Result<f64> {
        let key = p.key(j)?;
        class_distance(&key, &eps, &Rep::Word(p.key(j + 1)?))
    };
    let mut explicit_to = (acc.tree.max_level() + 1)
        .max(height_u64(base.len()) + 2 * t)
        .max(meet);
    for _ in 0..16 {
        let first: Vec<f64> = (1..=t).map(|i| inner_at(explicit_to + i)).collect::<Result<_>>()?;
        let second: Vec<f64> =
            (1..=t).map(|i| inner_at(explicit_to + t + i)).collect::<Result<_>>()?;
        if first == second {
            for j in meet + 1..=explicit_to {
                let key = p.key(j)?;
                let out = Rep::Word(p.key(j + 1)?);
                acc.add(&key, j, true, &eps, &out)?;
            }
            // Beyond the explored levels every class is the first (virtual)
            // one of its level, so the scale halves per level.
            let period: f64 = first
                .iter()
                .enumerate()
                .map(|(i, d)| d * (-((explicit_to + 1 + i as u64 + 1) as f64)).exp2())
                .sum();
            return Ok(period / (1.0 - (-(t as f64)).exp2()));
        }
        explicit_to += t;
    }
    Err(Error::Resolution("class pattern along the end is not periodic".into()))
}

/// The geodesic line between two distinct ends.
#[derive(Clone, Debug)]
pub struct Line {
    pub a: BoundaryPoint,
    pub b: BoundaryPoint,
    /// Where the rays from `ε` to the two ends part.
    pub junction: Word,
}

pub fn line_between(a: &BoundaryPoint, b: &BoundaryPoint) -> Result<Line> {
    let c = match a.relation(b)? {
        RayRelation::Diverge(c) => c,
        RayRelation::Same => return Err(Error::IdenticalEnds),
        _ => {
            return Err(Error::InvalidBoundaryPoint(
                "one end lies on the ray to the other".into(),
            ))
        }
    };
    let junction = match a {
        BoundaryPoint::Symbolic { .. } => {
            let mut m = 1;
            loop {
                let r = a.ray_prefix(m)?;
                if r.len() >= &c {
                    break r.prefix(&c)?;
                }
                m *= 2;
            }
        }
        BoundaryPoint::Empirical(e) => e.deepest().prefix(&c)?,
    };
    Ok(Line {
        a: a.clone(),
        b: b.clone(),
        junction,
    })
}

impl Line {
    /// `v ∈ (a, b)`: `v` extends the junction along one of the two rays.
    pub fn contains(&self, v: &Word) -> Result<bool> {
        if v.len() < self.junction.len() {
            return Ok(false);
        }
        for e in [&self.a, &self.b] {
            if e.in_cone(v)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}
