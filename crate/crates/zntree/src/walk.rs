//! Random walks driven by a finitely supported measure, and the boundary
//! statistics read off them.
//!
//! Walk `i` of an ensemble draws from a ChaCha8 stream selected by `i` under
//! the master seed, so outputs never depend on scheduling or thread count.

use std::collections::{BTreeMap, HashSet};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::boundary::{BoundaryPoint, EmpiricalEnd, Line};
use crate::error::{Error, Result};
use crate::group::{Group, GroupElement};
use crate::lattice::ZnVec;
use crate::word::{c_len, Letter, Word};

/// Tolerance on the total weight of a measure.
pub const WEIGHT_TOLERANCE: f64 = 1e-12;

/// A probability measure with finite support.
#[derive(Clone, Debug)]
pub struct Measure {
    support: Vec<(GroupElement, f64)>,
}

impl Measure {
    /// Normalizes positive weights; repeated elements are merged.
    pub fn new(pairs: Vec<(GroupElement, f64)>) -> Result<Measure> {
        if pairs.is_empty() {
            return Err(Error::InvalidMeasure("empty support".into()));
        }
        let mut support: Vec<(GroupElement, f64)> = Vec::new();
        for (g, w) in pairs {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidMeasure(format!("weight {w} is not positive")));
            }
            match support.iter_mut().find(|(h, _)| h.word == g.word) {
                Some((_, acc)) => *acc += w,
                None => support.push((g, w)),
            }
        }
        let total: f64 = support.iter().map(|(_, w)| w).sum();
        for (_, w) in &mut support {
            *w /= total;
        }
        Ok(Measure { support })
    }

    /// Equal weight on every generator and inverse.
    pub fn uniform_symmetric(group: &Group) -> Measure {
        let pairs = group.gen_powers().map(|g| (group.generator(g), 1.0)).collect();
        Measure::new(pairs).expect("generators give a valid support")
    }

    pub fn support(&self) -> &[(GroupElement, f64)] {
        &self.support
    }

    pub fn weights(&self) -> Vec<f64> {
        self.support.iter().map(|(_, w)| *w).collect()
    }

    /// `μ̌(g) = μ(g^{-1})`.
    pub fn reflect(&self, group: &Group) -> Measure {
        Measure {
            support: self
                .support
                .iter()
                .map(|(g, w)| (group.inv(g), *w))
                .collect(),
        }
    }

    /// Weight of `g`, zero off the support.
    pub fn weight_of(&self, g: &Word) -> f64 {
        self.support
            .iter()
            .find(|(h, _)| &h.word == g)
            .map_or(0.0, |(_, w)| *w)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nondegeneracy {
    Confirmed,
    /// Not found within the horizon; the property is only semi-decidable.
    Unknown,
}

/// Searches products of at most `horizon` support elements for every
/// generator and inverse.
pub fn check_nondegenerate(group: &Group, mu: &Measure, horizon: usize) -> Nondegeneracy {
    let mut wanted: HashSet<Word> = group.gen_powers().map(|g| group.gen_word(g).clone()).collect();
    let mut frontier: HashSet<Word> = HashSet::new();
    frontier.insert(Word::empty(group.dim()));
    let mut seen = frontier.clone();
    for _ in 0..horizon {
        let mut next = HashSet::new();
        for w in &frontier {
            for (g, _) in mu.support() {
                let Ok(p) = group.mult_words(w, &g.word) else {
                    continue;
                };
                wanted.remove(&p);
                if seen.insert(p.clone()) {
                    next.insert(p);
                }
            }
        }
        if wanted.is_empty() {
            return Nondegeneracy::Confirmed;
        }
        frontier = next;
    }
    Nondegeneracy::Unknown
}

/// Knobs shared by every walk.
#[derive(Clone, Debug)]
pub struct WalkOptions {
    /// Fraction of the path, counted from the end, over which the end
    /// estimator takes the common prefix.
    pub window: f64,
    /// Extra step indices at which `τ_i` is kept.
    pub extra_checkpoints: Vec<usize>,
}

impl Default for WalkOptions {
    fn default() -> Self {
        WalkOptions {
            window: 0.25,
            extra_checkpoints: Vec::new(),
        }
    }
}

/// A sampled path: increments as support indices, `τ_i` kept at checkpoints.
#[derive(Clone, Debug)]
pub struct WalkPath {
    pub seed: u64,
    pub stream: u64,
    pub increments: Vec<u32>,
    pub checkpoints: Vec<(usize, Word)>,
    pub window: f64,
}

impl WalkPath {
    pub fn steps(&self) -> usize {
        self.increments.len()
    }

    pub fn last(&self) -> &Word {
        &self.checkpoints.last().expect("τ_0 is always kept").1
    }

    pub fn at(&self, i: usize) -> Option<&Word> {
        self.checkpoints
            .binary_search_by_key(&i, |(j, _)| *j)
            .ok()
            .map(|k| &self.checkpoints[k].1)
    }

    /// `|τ_steps| / steps` on the first axis for `n = 1`, `ℏ / steps` above.
    pub fn drift(&self) -> f64 {
        let steps = self.steps().max(1) as f64;
        let w = self.last();
        let v = if w.dim() == 1 {
            w.len().first().to_i64().unwrap_or(i64::MAX) as f64
        } else {
            w.height().to_i64().unwrap_or(i64::MAX) as f64
        };
        v / steps
    }

    /// Calls `visit(i, τ_i)` for every step, recomputing from the increments.
    pub fn replay(&self, mu: &Measure, mut visit: impl FnMut(usize, &Word) -> Result<()>) -> Result<()> {
        let mut tau = Word::empty(self.last().dim());
        visit(0, &tau)?;
        for (i, &s) in self.increments.iter().enumerate() {
            tau.mul_assign_right(&mu.support()[s as usize].0.word)?;
            visit(i + 1, &tau)?;
        }
        Ok(())
    }
}

/// Step indices kept: powers of two, 16 evenly spaced points over the final
/// eighth, the start of the end window, the midpoint and any extras.
pub fn checkpoint_ladder(steps: usize, window: f64, extra: &[usize]) -> Vec<usize> {
    let mut out = vec![0, steps];
    let mut p = 1;
    while p <= steps {
        out.push(p);
        p *= 2;
    }
    let eighth = steps / 8;
    for j in 0..16 {
        out.push(steps - eighth + (eighth * j) / 15);
    }
    out.push(window_start(steps, window));
    out.push(steps / 2);
    out.extend(extra.iter().copied().filter(|&e| e <= steps));
    out.sort_unstable();
    out.dedup();
    out
}

fn window_start(steps: usize, window: f64) -> usize {
    let w = window.clamp(0.0, 1.0);
    ((steps as f64) * (1.0 - w)).ceil() as usize
}

/// The RNG of walk `stream` under `seed`.
pub fn walk_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One path of the walk; `stream` selects the walk inside an ensemble.
pub fn sample_walk(
    mu: &Measure,
    seed: u64,
    stream: u64,
    steps: usize,
    opts: &WalkOptions,
) -> Result<WalkPath> {
    let n = mu.support()[0].0.word.dim();
    let dist = WeightedIndex::new(mu.weights())
        .map_err(|e| Error::InvalidMeasure(e.to_string()))?;
    let mut rng = walk_rng(seed, stream);
    let ladder = checkpoint_ladder(steps, opts.window, &opts.extra_checkpoints);
    let mut next = 0usize;
    let mut tau = Word::empty(n);
    let mut increments = Vec::with_capacity(steps);
    let mut checkpoints = Vec::with_capacity(ladder.len());
    for i in 0..=steps {
        if i > 0 {
            let s = dist.sample(&mut rng);
            increments.push(s as u32);
            tau.mul_assign_right(&mu.support()[s].0.word)?;
        }
        if ladder.get(next) == Some(&i) {
            checkpoints.push((i, tau.clone()));
            next += 1;
        }
    }
    Ok(WalkPath {
        seed,
        stream,
        increments,
        checkpoints,
        window: opts.window,
    })
}

/// Single path on stream 0.
pub fn sample_path(mu: &Measure, seed: u64, steps: usize) -> Result<WalkPath> {
    sample_walk(mu, seed, 0, steps, &WalkOptions::default())
}

/// Stable prefixes `S_t = com(τ_t, τ_{t'} for all kept t' ≥ t)`, one per
/// checkpoint, computed from the back.
pub fn stable_prefixes(path: &WalkPath) -> Result<Vec<(usize, Word)>> {
    let mut out: Vec<(usize, Word)> = Vec::with_capacity(path.checkpoints.len());
    let mut acc: Option<Word> = None;
    for (i, w) in path.checkpoints.iter().rev() {
        let s = match &acc {
            None => w.clone(),
            Some(a) => {
                let c = c_len(w, a)?;
                a.prefix(&c)?
            }
        };
        out.push((*i, s.clone()));
        acc = Some(s);
    }
    out.reverse();
    Ok(out)
}

/// The empirical end of a path: the chain of distinct stable prefixes up to
/// the start of the end window.
pub fn boundary_point(path: &WalkPath) -> Result<EmpiricalEnd> {
    let steps = path.steps();
    let start = window_start(steps, path.window);
    let stable = stable_prefixes(path)?;
    let mut chain: Vec<Word> = Vec::new();
    let mut early = None;
    for (i, s) in &stable {
        if *i > start {
            break;
        }
        if *i <= steps / 2 {
            early = Some(s.clone());
        }
        if !s.is_empty() && chain.last().is_none_or(|p| p.len() < s.len()) {
            chain.push(s.clone());
        }
    }
    let Some(deep) = chain.last().cloned() else {
        return Err(Error::Inconclusive(format!(
            "no stable prefix across the final {} of {} steps",
            path.window, steps
        )));
    };
    let early = early.unwrap_or_else(|| Word::empty(deep.dim()));
    let growth = deep.len() - early.len();
    let Some(top) = growth.top_index() else {
        return Err(Error::Inconclusive(format!(
            "stable prefix did not grow after step {}; partial chain of {} prefixes",
            steps / 2,
            chain.len()
        )));
    };
    EmpiricalEnd::new(chain, top + 1)
}

/// Inverse heads are compared over this many letters.
const HEAD_LETTERS: i64 = 32;

/// One accepted element of an `𝔖` chain.
#[derive(Clone, Debug, PartialEq)]
pub struct SEntry {
    pub index: usize,
    pub hbar: i64,
    /// `c(τ_i, ω)` with the estimated end.
    pub forward: ZnVec,
    /// Common initial letters of `τ_i^{-1}` and the previous chain element.
    pub backward: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SEvidence {
    /// Empty unless a chain of at least three elements was found.
    pub indices: Vec<usize>,
    pub profile: Vec<SEntry>,
    pub diagnostics: String,
}

impl SEvidence {
    pub fn found(&self) -> bool {
        !self.indices.is_empty()
    }
}

fn inverse_head(w: &Word) -> Result<Vec<Letter>> {
    let n = w.dim();
    let cap = ZnVec::axis(n, HEAD_LETTERS);
    let tail = if w.len() > &cap {
        w.suffix_of_len(&cap)?
    } else if w.len().on_first_axis() {
        w.clone()
    } else {
        w.suffix_of_len(&cap)?
    };
    Ok(tail.invert().as_letters().expect("first-axis piece").to_vec())
}

fn common_letters(a: &[Letter], b: &[Letter]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Greedy search for a subsequence with `ℏ(τ_i)` strictly increasing, the
/// junctions `c(τ_i, ω)` strictly increasing, and the junctions between
/// consecutive `τ_i^{-1}` strictly increasing.
pub fn detect_s_subsequence(path: &WalkPath, mu: &Measure) -> Result<SEvidence> {
    let target = match boundary_point(path) {
        Ok(e) => e.deepest().clone(),
        Err(_) => path.last().clone(),
    };
    let mut profile: Vec<SEntry> = Vec::new();
    let mut last_head: Vec<Letter> = Vec::new();
    let mut last_backward: Option<usize> = None;
    path.replay(mu, |i, tau| {
        if tau.is_empty() {
            return Ok(());
        }
        let hbar = tau.height().to_i64().unwrap_or(i64::MAX);
        if let Some(prev) = profile.last() {
            if hbar <= prev.hbar {
                return Ok(());
            }
        }
        let head = inverse_head(tau)?;
        let backward = common_letters(&head, &last_head);
        // A junction at the cap could never be exceeded.
        if !profile.is_empty() && backward >= HEAD_LETTERS as usize {
            return Ok(());
        }
        if last_backward.is_some_and(|b| backward <= b) {
            return Ok(());
        }
        let forward = c_len(tau, &target)?;
        if let Some(prev) = profile.last() {
            if forward <= prev.forward {
                return Ok(());
            }
        }
        if !profile.is_empty() {
            last_backward = Some(backward);
        }
        last_head = head;
        profile.push(SEntry {
            index: i,
            hbar,
            forward,
            backward,
        });
        Ok(())
    })?;
    let found = profile.len() >= 3;
    let diagnostics = format!(
        "{} chain elements over {} steps; hbar {} -> {}",
        profile.len(),
        path.steps(),
        profile.first().map_or(0, |e| e.hbar),
        profile.last().map_or(0, |e| e.hbar)
    );
    Ok(SEvidence {
        indices: if found {
            profile.iter().map(|e| e.index).collect()
        } else {
            Vec::new()
        },
        profile,
        diagnostics,
    })
}

/// Per-walk summary row.
#[derive(Clone, Debug)]
pub struct WalkSummary {
    pub walk: u64,
    pub steps: usize,
    pub final_len: ZnVec,
    pub final_hbar: i64,
    pub drift: f64,
    /// `None` when the end estimator was inconclusive.
    pub end_type: Option<usize>,
    pub stable_depth: Option<ZnVec>,
    pub s_found: Option<bool>,
}

/// Output of an ensemble run, in walk order.
#[derive(Clone, Debug)]
pub struct Ensemble {
    pub summaries: Vec<WalkSummary>,
    pub ends: Vec<Option<EmpiricalEnd>>,
}

impl Ensemble {
    pub fn inconclusive(&self) -> usize {
        self.ends.iter().filter(|e| e.is_none()).count()
    }

    pub fn mean_drift(&self) -> f64 {
        let n = self.summaries.len().max(1) as f64;
        self.summaries.iter().map(|s| s.drift).sum::<f64>() / n
    }

    /// Fraction of conclusive paths whose end has `Z^k` type.
    pub fn type_fraction(&self, k: usize) -> f64 {
        let conclusive: Vec<usize> = self.summaries.iter().filter_map(|s| s.end_type).collect();
        if conclusive.is_empty() {
            return 0.0;
        }
        conclusive.iter().filter(|&&t| t == k).count() as f64 / conclusive.len() as f64
    }

    pub fn s_rate(&self) -> f64 {
        let n = self.summaries.len().max(1) as f64;
        self.summaries.iter().filter(|s| s.s_found == Some(true)).count() as f64 / n
    }
}

/// Runs `walks` independent paths in parallel.
pub fn run_ensemble(
    mu: &Measure,
    walks: usize,
    steps: usize,
    master_seed: u64,
    detect_s: bool,
    opts: &WalkOptions,
) -> Result<Ensemble> {
    let rows: Vec<Result<(WalkSummary, Option<EmpiricalEnd>)>> = (0..walks as u64)
        .into_par_iter()
        .map(|w| {
            let path = sample_walk(mu, master_seed, w, steps, opts)?;
            let end = boundary_point(&path).ok().map(EmpiricalEnd::compact);
            let s_found = if detect_s {
                Some(detect_s_subsequence(&path, mu)?.found())
            } else {
                None
            };
            let last = path.last();
            Ok((
                WalkSummary {
                    walk: w,
                    steps,
                    final_len: last.len().clone(),
                    final_hbar: last.height().to_i64().unwrap_or(i64::MAX),
                    drift: path.drift(),
                    end_type: end.as_ref().map(|e| e.declared_type()),
                    stable_depth: end.as_ref().map(|e| e.resolution().clone()),
                    s_found,
                },
                end,
            ))
        })
        .collect();
    let mut summaries = Vec::with_capacity(walks);
    let mut ends = Vec::with_capacity(walks);
    for r in rows {
        let (s, e) = r?;
        summaries.push(s);
        ends.push(e);
    }
    Ok(Ensemble { summaries, ends })
}

/// Cone probabilities of a measure on the boundary.
pub trait ConeMass {
    /// `ν(U_apex)`.
    fn mass(&self, apex: &Word) -> Result<f64>;
}

/// `h · U_x` written with cones seen from `ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConeSet {
    Whole,
    Cone(Word),
    Complement(Word),
}

/// With `q = h ∗ x`: `U_q` unless `q` lies on `[ε, h]`, in which case the
/// complement of the cone at the next vertex of `[q, h]`.
pub fn translate_cone(h: &Word, x: &Word) -> Result<ConeSet> {
    if x.is_empty() {
        return Ok(ConeSet::Whole);
    }
    let q = h.mult(x)?;
    if q.is_prefix_of(h)? {
        let s = h.prefix(&q.len().succ())?;
        Ok(ConeSet::Complement(s))
    } else {
        Ok(ConeSet::Cone(q))
    }
}

impl ConeSet {
    pub fn mass(&self, nu: &dyn ConeMass) -> Result<f64> {
        match self {
            ConeSet::Whole => Ok(1.0),
            ConeSet::Cone(q) => nu.mass(q),
            ConeSet::Complement(s) => Ok(1.0 - nu.mass(s)?),
        }
    }

    pub fn contains(&self, end: &EmpiricalEnd) -> Result<bool> {
        let e = BoundaryPoint::Empirical(end.clone());
        match self {
            ConeSet::Whole => Ok(true),
            ConeSet::Cone(q) => e.in_cone(q),
            ConeSet::Complement(s) => Ok(!e.in_cone(s)?),
        }
    }
}

/// Apexes of cones tabulated at a given depth: reduced first-axis words of
/// `1..=depth` letters.
pub fn cone_apexes(n: usize, symbols: usize, depth: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut level: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &level {
            for i in 0..symbols {
                for l in [Letter::new(i), Letter::new(i).inv()] {
                    if w.last().is_some_and(|p| p.inv() == l) {
                        continue;
                    }
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        for w in &next {
            out.push(Word::from_letters(n, w).expect("reduced by construction"));
        }
        level = next;
    }
    out
}

/// Empirical stationary measure: end frequencies per cone.
#[derive(Clone, Debug)]
pub struct ConeMeasure {
    pub depth: usize,
    pub table: BTreeMap<Word, f64>,
    pub samples: usize,
    pub inconclusive: usize,
    /// The ends behind the table, in walk order.
    pub ends: Vec<EmpiricalEnd>,
}

impl ConeMass for ConeMeasure {
    fn mass(&self, apex: &Word) -> Result<f64> {
        let depth = apex.len();
        if !depth.on_first_axis() || depth.first().to_i64().unwrap_or(i64::MAX) > self.depth as i64 {
            return Err(Error::Resolution(format!(
                "cone at {apex:?} is deeper than the tabulated depth {}",
                self.depth
            )));
        }
        Ok(self.table.get(apex).copied().unwrap_or(0.0))
    }
}

/// Largest inconclusive fraction before an ensemble is rejected.
pub const MAX_INCONCLUSIVE: f64 = 0.10;

impl ConeMeasure {
    pub fn from_ends(ends: &[Option<EmpiricalEnd>], depth: usize) -> Result<ConeMeasure> {
        let total = ends.len();
        let good: Vec<EmpiricalEnd> = ends.iter().flatten().cloned().collect();
        let inconclusive = total - good.len();
        if total == 0 || inconclusive as f64 > MAX_INCONCLUSIVE * total as f64 {
            return Err(Error::Experiment(format!(
                "{inconclusive} of {total} paths inconclusive"
            )));
        }
        let n = good[0].deepest().dim();
        let mut counts: BTreeMap<Word, usize> = BTreeMap::new();
        for e in &good {
            let p = e.deepest();
            for k in 0..=depth {
                let a = ZnVec::axis(n, k as i64);
                if &a > p.len() {
                    return Err(Error::Resolution(format!(
                        "end resolved to {} only, below depth {depth}",
                        p.len()
                    )));
                }
                *counts.entry(p.prefix(&a)?).or_insert(0) += 1;
            }
        }
        let m = good.len() as f64;
        Ok(ConeMeasure {
            depth,
            table: counts.into_iter().map(|(k, c)| (k, c as f64 / m)).collect(),
            samples: good.len(),
            inconclusive,
            ends: good,
        })
    }

    /// `(h · ν̂)(U_apex)`, the fraction of sampled ends `ω` with `h·ω` in the
    /// cone, decided from each end's deepest prefix.
    pub fn translated_mass(&self, h: &Word, apex: &Word) -> Result<f64> {
        let h_inv = h.invert();
        let mut hits = 0usize;
        for e in &self.ends {
            if translated_in_cone(h, &h_inv, e.deepest(), apex)? {
                hits += 1;
            }
        }
        Ok(hits as f64 / self.samples.max(1) as f64)
    }
}

/// Whether `h·ω ∈ U_apex` for an end `ω` known through its prefix `p`.
fn translated_in_cone(h: &Word, h_inv: &Word, p: &Word, apex: &Word) -> Result<bool> {
    let c = c_len(h_inv, p)?;
    if &c == p.len() {
        return Err(Error::Resolution(
            "translation absorbs the known prefix of an end".into(),
        ));
    }
    let keep = h.len() - &c;
    if &keep >= apex.len() {
        return apex.is_prefix_of(h);
    }
    let image = h.prefix(&keep)?.concat_unchecked(&p.suffix_from(&c)?);
    let img = BoundaryPoint::Empirical(EmpiricalEnd::new(vec![image], 0)?);
    img.in_cone(apex)
}

/// `ν̂` from an ensemble of walks.
pub fn empirical_cone_measure(
    mu: &Measure,
    walks: usize,
    steps: usize,
    depth: usize,
    master_seed: u64,
) -> Result<ConeMeasure> {
    let ens = run_ensemble(mu, walks, steps, master_seed, false, &WalkOptions::default())?;
    ConeMeasure::from_ends(&ens.ends, depth)
}

/// One row of a stationarity check.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub apex: Word,
    pub value: f64,
    /// Monte-Carlo standard error; zero for exact measures.
    pub standard_error: f64,
}

fn depth_error(group: &Group, g: &Word, x: &Word, e: Error) -> Error {
    Error::Resolution(format!(
        "depth shortfall at g = {}, x = {}: {e}",
        group.format(g),
        group.format(x)
    ))
}

/// `|ν(U_x) - Σ_g μ(g) ν(g^{-1} U_x)|` for an exact cone measure.
pub fn stationarity_residual_exact(
    group: &Group,
    nu: &dyn ConeMass,
    mu: &Measure,
    apexes: &[Word],
) -> Result<Vec<Residual>> {
    apexes
        .iter()
        .map(|x| {
            let mut rhs = 0.0;
            for (g, w) in mu.support() {
                let set = translate_cone(&g.word.invert(), x)?;
                rhs += w * set.mass(nu).map_err(|e| depth_error(group, &g.word, x, e))?;
            }
            Ok(Residual {
                apex: x.clone(),
                value: (nu.mass(x)? - rhs).abs(),
                standard_error: 0.0,
            })
        })
        .collect()
}

/// The same residual for `ν̂`, as the mean of a per-end statistic, with its
/// standard error.
pub fn stationarity_residual(
    group: &Group,
    nu: &ConeMeasure,
    mu: &Measure,
    apexes: &[Word],
) -> Result<Vec<Residual>> {
    let m = nu.ends.len();
    if m < 2 {
        return Err(Error::Experiment("too few ends for a standard error".into()));
    }
    let mut out = Vec::with_capacity(apexes.len());
    for x in apexes {
        let lhs = ConeSet::Cone(x.clone());
        let sets: Vec<(ConeSet, f64, &Word)> = mu
            .support()
            .iter()
            .map(|(g, w)| Ok((translate_cone(&g.word.invert(), x)?, *w, &g.word)))
            .collect::<Result<_>>()?;
        let mut sum = 0.0;
        let mut sq = 0.0;
        for e in &nu.ends {
            let mut f = if lhs.contains(e)? { 1.0 } else { 0.0 };
            for (set, w, g) in &sets {
                if set.contains(e).map_err(|err| depth_error(group, g, x, err))? {
                    f -= w;
                }
            }
            sum += f;
            sq += f * f;
        }
        let mean = sum / m as f64;
        let var = ((sq - m as f64 * mean * mean) / (m as f64 - 1.0)).max(0.0);
        out.push(Residual {
            apex: x.clone(),
            value: mean.abs(),
            standard_error: (var / m as f64).sqrt(),
        });
    }
    Ok(out)
}

/// `(τ_i · ν̂)(U)` for the depth-`d` cone `U` around the path's own end, at
/// every checkpoint up to `upto`.
pub fn dirac_convergence_profile(
    path: &WalkPath,
    nu: &ConeMeasure,
    d: usize,
    upto: usize,
) -> Result<Vec<(usize, f64)>> {
    let end = boundary_point(path)?;
    let p = end.deepest();
    let a = ZnVec::axis(p.dim(), d as i64);
    if &a > p.len() {
        return Err(Error::Resolution(format!("end resolved below depth {d}")));
    }
    let apex = p.prefix(&a)?;
    path.checkpoints
        .iter()
        .filter(|(i, _)| *i >= 1 && *i <= upto)
        .map(|(i, tau)| Ok((*i, nu.translated_mass(tau, &apex)?)))
        .collect()
}

/// Least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Strip sizes `|S(a,b) ∩ B_G(k)|` for `k = 1..=k_max`.
#[derive(Clone, Debug)]
pub struct StripCounts {
    pub counts: Vec<u64>,
    /// Only elements with `ℏ(g) ≤ k`.
    pub filtered: Vec<u64>,
    /// Log-log least-squares slope of `counts` against `k`.
    pub slope: f64,
    /// `(1/k) log filtered[k]`.
    pub criterion: Vec<f64>,
    /// Least-squares slope of `criterion` over `k ≥ TREND_FROM` with a
    /// nonempty filtered set; NaN with fewer than three such `k`.
    pub criterion_slope: f64,
}

/// First `k` of the criterion trend.
pub const TREND_FROM: usize = 4;

/// Counts ball elements `g` with `g·ε` on the line `(a, b)`.
pub fn strip_count(
    group: &Group,
    a: &BoundaryPoint,
    b: &BoundaryPoint,
    k_max: usize,
) -> Result<StripCounts> {
    let line = crate::boundary::line_between(a, b)?;
    let mut per_sphere_all = vec![0u64; k_max + 1];
    let mut per_sphere_filtered = vec![vec![0u64; k_max + 1]; k_max + 1];
    let mut matcher = LineMatcher::new(&line)?;
    group.for_each_sphere(k_max, |s, elems| {
        for g in elems {
            if matcher.contains(&g.word)? {
                per_sphere_all[s] += 1;
                let h = g.word.height().to_i64().unwrap_or(i64::MAX);
                // Counted at every k ≥ max(s, ℏ(g)).
                let from = (h.max(0) as usize).max(s);
                if from <= k_max {
                    per_sphere_filtered[s][from] += 1;
                }
            }
        }
        Ok(())
    })?;
    let mut counts = Vec::with_capacity(k_max);
    let mut filtered = Vec::with_capacity(k_max);
    let (mut acc, mut acc_f) = (per_sphere_all[0], 0u64);
    for s in 0..=k_max {
        acc_f += per_sphere_filtered.iter().map(|row| row[s]).sum::<u64>();
        if s >= 1 {
            acc += per_sphere_all[s];
            counts.push(acc);
            filtered.push(acc_f);
        }
    }
    let ks: Vec<f64> = (1..=k_max).map(|k| k as f64).collect();
    let slope = ls_slope(
        &ks.iter().map(|k| k.ln()).collect::<Vec<_>>(),
        &counts.iter().map(|&c| (c.max(1) as f64).ln()).collect::<Vec<_>>(),
    );
    let criterion: Vec<f64> = filtered
        .iter()
        .zip(&ks)
        .map(|(&c, k)| (c.max(1) as f64).ln() / k)
        .collect();
    // Empty filtered sets have no logarithm and stay out of the fit.
    let (tk, tc): (Vec<f64>, Vec<f64>) = (TREND_FROM..=k_max)
        .filter(|&k| filtered[k - 1] > 0)
        .map(|k| (ks[k - 1], criterion[k - 1]))
        .unzip();
    let criterion_slope = if tk.len() >= 3 { ls_slope(&tk, &tc) } else { f64::NAN };
    Ok(StripCounts {
        counts,
        filtered,
        slope,
        criterion,
        criterion_slope,
    })
}

/// Membership on a fixed line, with long ray prefixes cached.
struct LineMatcher<'l> {
    line: &'l Line,
    rays: Vec<Word>,
}

impl<'l> LineMatcher<'l> {
    fn new(line: &'l Line) -> Result<LineMatcher<'l>> {
        let mut rays = Vec::new();
        for e in [&line.a, &line.b] {
            if let BoundaryPoint::Symbolic { .. } = e {
                rays.push(e.ray_prefix(64)?);
            }
        }
        Ok(LineMatcher { line, rays })
    }

    fn contains(&mut self, v: &Word) -> Result<bool> {
        if v.len() < self.line.junction.len() {
            return Ok(false);
        }
        let mut decided = true;
        for r in &self.rays {
            if v.len() <= r.len() {
                if v.is_prefix_of(r)? {
                    return Ok(true);
                }
            } else {
                decided = false;
            }
        }
        if decided && self.rays.len() == 2 {
            return Ok(false);
        }
        self.line.contains(v)
    }
}
