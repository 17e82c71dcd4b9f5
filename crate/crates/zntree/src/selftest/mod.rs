//! Reduced-scale oracle and invariant suites behind `zntree selftest`.
//!
//! Every suite compares library output with an independent model from
//! [`oracle`] or with an algebraic law. The report text is deterministic for
//! a fixed seed, so its hash identifies a run.

pub mod oracle;

use rand::seq::IndexedRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::boundary::{d_ultra, dbar, BoundaryPoint, Point, RayRelation, TreeOfTrees};
use crate::error::{Error, Result};
use crate::group::{dist, hbar_pair, median, sigma, Edge, Group, Vertex};
use crate::lattice::ZnVec;
use crate::walk::{
    cone_apexes, run_ensemble, stationarity_residual_exact, strip_count, ConeMass, ConeMeasure,
    WalkOptions,
};
use crate::word::{Block, Letter, Word};
use crate::workspace::Workspace;

/// Outcome of one suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checks: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    pub fn render(&self) -> String {
        let mut s = format!("selftest seed {}\n", self.seed);
        for r in &self.suites {
            let status = if r.passed() { "PASS" } else { "FAIL" };
            s.push_str(&format!(
                "{status} {:<20} checks={} failures={}\n",
                r.name, r.checks, r.failures
            ));
            if let Some(f) = &r.first_failure {
                s.push_str(&format!("     first failure: {f}\n"));
            }
        }
        s
    }

    /// SHA-256 of the rendered report, hex encoded.
    pub fn hash(&self) -> String {
        Sha256::digest(self.render().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

#[derive(Default)]
struct Tally {
    checks: u64,
    failures: u64,
    first: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    fn finish(self, name: &'static str) -> SuiteResult {
        SuiteResult {
            name,
            checks: self.checks,
            failures: self.failures,
            first_failure: self.first,
        }
    }
}

type Suite = fn(&mut ChaCha8Rng, &mut Tally) -> Result<()>;

const SUITES: &[(&str, Suite)] = &[
    ("word-oracle", word_oracle),
    ("periodic-laws", periodic_laws),
    ("lyndon-axioms", lyndon_axioms),
    ("ultrametric", ultrametric),
    ("dbar-axioms", dbar_axioms),
    ("equivariance", equivariance),
    ("drift-harmonic", drift_harmonic),
    ("stationarity-exact", stationarity_exact),
    ("strip-axis", strip_axis),
    ("thread-invariance", thread_invariance),
];

/// Runs every suite; each gets its own stream of the seed.
pub fn run(seed: u64) -> Report {
    let suites = SUITES
        .iter()
        .enumerate()
        .map(|(i, (name, suite))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut t = Tally::default();
            if let Err(e) = suite(&mut rng, &mut t) {
                t.check(false, || format!("error: {e}"));
            }
            t.finish(name)
        })
        .collect();
    Report { seed, suites }
}

// ---------------------------------------------------------------------------
// Sampling helpers, shared with the integration tests through the library.

/// Letter codes of a finite word.
pub fn codes(w: &Word) -> Vec<i32> {
    w.as_letters()
        .expect("finite word")
        .iter()
        .map(|l| l.code())
        .collect()
}

pub fn from_codes(n: usize, c: &[i32]) -> Word {
    let ls: Vec<Letter> = c.iter().map(|&x| Letter::from_code(x)).collect();
    Word::from_letters(n, &ls).expect("reduced codes")
}

/// A uniformly random reduced code word with `len` letters.
pub fn random_reduced(rng: &mut impl Rng, symbols: i32, len: usize) -> Vec<i32> {
    let mut w: Vec<i32> = Vec::with_capacity(len);
    while w.len() < len {
        let s = rng.random_range(1..=symbols);
        let c = if rng.random_bool(0.5) { s } else { -s };
        if w.last() != Some(&-c) {
            w.push(c);
        }
    }
    w
}

/// A random cyclically reduced code word with `1..=max_len` letters.
pub fn random_cyclic(rng: &mut impl Rng, symbols: i32, max_len: usize) -> Vec<i32> {
    loop {
        let len = rng.random_range(1..=max_len);
        let w = random_reduced(rng, symbols, len);
        if w[0] != -w[len - 1] || len == 1 {
            return w;
        }
    }
}

/// A random canonical `Z^2`-word with at most `max_blocks` blocks, first
/// coordinates of periodic extents in `[-max_first, max_first]` and total
/// height at most `max_height`.
pub fn random_z2_word(
    rng: &mut impl Rng,
    max_blocks: usize,
    max_first: i64,
    max_height: i64,
) -> Word {
    loop {
        let nb = rng.random_range(0..=max_blocks);
        let mut budget = max_height;
        let mut blocks = Vec::with_capacity(nb);
        for _ in 0..nb {
            if budget > 0 && rng.random_bool(0.5) {
                let h = rng.random_range(1..=budget);
                budget -= h;
                let period: Vec<Letter> = random_cyclic(rng, 2, 3)
                    .into_iter()
                    .map(Letter::from_code)
                    .collect();
                let extent = ZnVec::from_i64s(&[rng.random_range(-max_first..=max_first), h]);
                blocks.push(Block::Periodic { period, extent });
            } else {
                let len = rng.random_range(1..=5);
                let ls = random_reduced(rng, 2, len).into_iter().map(Letter::from_code).collect();
                blocks.push(Block::Finite(ls));
            }
        }
        if let Ok(w) = Word::from_blocks(2, blocks) {
            return w;
        }
    }
}

/// A random position in `[1, len]` of a `Z^2`-word; unbounded rows are
/// sampled within `spread` of their known end.
pub fn random_position(rng: &mut impl Rng, len: &ZnVec, spread: i64) -> ZnVec {
    let l1 = len.coord(0).to_i64().expect("small");
    let h = len.coord(1).to_i64().expect("small");
    if h == 0 {
        return ZnVec::from_i64s(&[rng.random_range(1..=l1), 0]);
    }
    let b2 = rng.random_range(0..=h);
    let b1 = if b2 == 0 {
        rng.random_range(1..=1 + spread)
    } else if b2 == h {
        rng.random_range(l1 - spread..=l1)
    } else {
        rng.random_range(-spread..=spread)
    };
    ZnVec::from_i64s(&[b1, b2])
}

/// `|u| + 1 - β`, the mirror position.
pub fn mirror(len: &ZnVec, beta: &ZnVec) -> ZnVec {
    &(len + &ZnVec::unit(len.dim())) - beta
}

/// Checks the product, cancellation and inversion laws of one pair of
/// `Z^2`-words at `samples` positions each; returns `None` when the product
/// is not defined for the pair.
pub fn check_pair_laws(
    rng: &mut impl Rng,
    u: &Word,
    v: &Word,
    samples: usize,
    report: &mut dyn FnMut(bool, String),
) -> Option<()> {
    let c = u.cancellation(v).ok()?;
    let uv = u.mult(v).ok()?;
    let lu = u.len();
    let lv = v.len();
    let expected = &(lu + lv) - &c.scale_i64(2);
    report(uv.len() == &expected, format!("|uv| law for {u:?} * {v:?}"));
    report(u.invert().invert() == *u, format!("involution of {u:?}"));
    if let Ok(inv) = v.invert().mult(&u.invert()) {
        report(uv.invert() == inv, format!("(uv)^-1 for {u:?} * {v:?}"));
    }
    if !lu.is_zero() {
        let ui = u.invert();
        for _ in 0..samples {
            let b = random_position(rng, lu, 25);
            let ok = ui.char_at(&b).ok() == u.char_at(&mirror(lu, &b)).ok().map(Letter::inv);
            report(ok, format!("invert at {b} of {u:?}"));
        }
    }
    if !c.is_zero() {
        for _ in 0..samples {
            let g = random_position(rng, &c, 25);
            let ok = u.char_at(&mirror(lu, &g)).ok() == v.char_at(&g).ok().map(Letter::inv);
            report(ok, format!("cancellation at {g} of {u:?} * {v:?}"));
        }
    }
    if &c < lu && &c < lv {
        let at_u = &(lu - &c);
        let ok = u.char_at(at_u).ok() != v.char_at(&c.succ()).ok().map(Letter::inv);
        report(ok, format!("maximal cancellation for {u:?} * {v:?}"));
    }
    if !uv.len().is_zero() {
        let keep = lu - &c;
        let shift = &c - &keep;
        for _ in 0..samples {
            let b = random_position(rng, uv.len(), 25);
            let want = if b <= keep {
                u.char_at(&b).ok()
            } else {
                v.char_at(&(&b + &shift)).ok()
            };
            report(uv.char_at(&b).ok() == want, format!("product at {b} of {u:?} * {v:?}"));
        }
    }
    Some(())
}

/// `c(x, y) = (l(x) + l(y) - l(x^{-1} y)) / 2` from lengths alone; `None`
/// when the defect is odd.
pub fn lyndon_c(group: &Group, x: &Word, y: &Word) -> Result<Option<ZnVec>> {
    let q = group.mult_words(&x.invert(), y)?;
    let twice = &(x.len() + y.len()) - q.len();
    Ok(twice.half())
}

/// `(x, y) -> exp(-(x·y))` computed from letter arrays. Rays are cut at 64
/// letters, far beyond the bases and periods sampled here.
pub fn naive_ultra(x: &Point, y: &Point) -> f64 {
    let letters = |p: &Point| -> (Vec<i32>, bool) {
        match p {
            Point::Vertex(w) => (codes(w), false),
            Point::End(e) => {
                let mut r = codes(&e.ray_prefix(64).expect("finite ray"));
                r.truncate(64);
                (r, true)
            }
        }
    };
    let (a, ea) = letters(x);
    let (b, eb) = letters(y);
    if a == b && ea == eb {
        return 0.0;
    }
    (-(oracle::com(&a, &b).len() as f64)).exp()
}

/// The exact harmonic measure of the uniform walk on a free group.
#[derive(Clone, Copy, Debug)]
pub struct FreeHarmonic {
    pub rank: u32,
}

impl ConeMass for FreeHarmonic {
    fn mass(&self, apex: &Word) -> Result<f64> {
        let m = apex
            .len()
            .first()
            .to_i64()
            .filter(|_| apex.len().on_first_axis())
            .ok_or_else(|| Error::Resolution(format!("cone at {apex:?}")))?;
        Ok(if m == 0 {
            1.0
        } else {
            oracle::harmonic_cone_mass(self.rank, m as u32)
        })
    }
}

// ---------------------------------------------------------------------------
// Suites.

fn word_oracle(rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    for _ in 0..2000 {
        let lu = rng.random_range(0..=64);
        let lv = rng.random_range(0..=64);
        let u = random_reduced(rng, 2, lu);
        let v = random_reduced(rng, 2, lv);
        let (wu, wv) = (from_codes(1, &u), from_codes(1, &v));
        t.check(codes(&crate::word::com(&wu, &wv)?) == oracle::com(&u, &v), || {
            format!("com {u:?} {v:?}")
        });
        t.check(codes(&wu.mult(&wv)?) == oracle::mult(&u, &v), || {
            format!("mult {u:?} {v:?}")
        });
        t.check(codes(&wu.invert()) == oracle::invert(&u), || format!("invert {u:?}"));
        let k = rng.random_range(0..=lu);
        let (p, s) = wu.split(&ZnVec::from_i64s(&[k as i64]))?;
        t.check((codes(&p), codes(&s)) == oracle::split(&u, k), || {
            format!("split {u:?} at {k}")
        });
        if !u.is_empty() {
            let (c, core) = wu.cyclic_decomposition()?;
            t.check((codes(&c), codes(&core)) == oracle::cyclic_decomposition(&u), || {
                format!("cyclic decomposition {u:?}")
            });
        }
    }
    Ok(())
}

fn periodic_laws(rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    for _ in 0..300 {
        let u = random_z2_word(rng, 6, 20, 3);
        let v = random_z2_word(rng, 6, 20, 3);
        let mut rng2 = ChaCha8Rng::seed_from_u64(rng.next_u64());
        check_pair_laws(&mut rng2, &u, &v, 32, &mut |ok, msg| t.check(ok, || msg));
    }
    Ok(())
}

fn sample<'a, T>(rng: &mut impl Rng, v: &'a [T]) -> &'a T {
    v.choose(rng).expect("nonempty sample set")
}

fn lyndon_axioms(rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let ws = Workspace::notmin();
    let ball = ws.group.ball_enumerate(3)?;
    let words: Vec<Word> = ball.elements.iter().map(|e| e.word.clone()).collect();
    let zero = ZnVec::zero(2);
    let e = Word::empty(2);
    t.check(e.len().is_zero(), || "l(1) = 0".into());
    for _ in 0..1000 {
        let xyz = [sample(rng, &words), sample(rng, &words), sample(rng, &words)];
        for x in xyz {
            t.check(x.len() >= &zero, || format!("l({x:?}) >= 0"));
            t.check(x.invert().len() == x.len(), || format!("l(x) = l(x^-1) for {x:?}"));
        }
        let c = |a: &Word, b: &Word| lyndon_c(&ws.group, a, b);
        for (x, y, z) in [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)] {
            let (x, y, z) = (xyz[x], xyz[y], xyz[z]);
            let (Some(cxy), Some(cxz), Some(cyz)) = (c(x, y)?, c(x, z)?, c(y, z)?) else {
                t.check(false, || format!("odd Lyndon defect among {x:?} {y:?} {z:?}"));
                continue;
            };
            if cxy > cxz {
                t.check(cxz == cyz, || format!("(L3) for {x:?} {y:?} {z:?}"));
            }
            t.check(cxy >= zero && &cxy <= x.len().lesser(y.len()), || {
                format!("0 <= c <= min for {x:?} {y:?}")
            });
            let xy = ws.group.mult_words(x, y)?;
            t.check(xy.len() <= &(x.len() + y.len()), || {
                format!("l(xy) <= l(x) + l(y) for {x:?} {y:?}")
            });
        }
    }
    Ok(())
}

fn random_free_end(rng: &mut impl Rng) -> BoundaryPoint {
    loop {
        let bl = rng.random_range(0..=6);
        let base = from_codes(1, &random_reduced(rng, 2, bl));
        let tail = from_codes(1, &random_cyclic(rng, 2, 4));
        if let Ok(e) = BoundaryPoint::symbolic(base, tail) {
            return e;
        }
    }
}

fn ultrametric(rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let ends: Vec<Point> = (0..30).map(|_| Point::End(random_free_end(rng))).collect();
    let point = |rng: &mut ChaCha8Rng| -> Point {
        if rng.random_bool(0.2) {
            sample(rng, &ends).clone()
        } else {
            let len = rng.random_range(0..=12);
            Point::Vertex(from_codes(1, &random_reduced(rng, 2, len)))
        }
    };
    for _ in 0..1000 {
        let (x, y, z) = (point(rng), point(rng), point(rng));
        let dxy = d_ultra(&x, &y)?;
        let dyz = d_ultra(&y, &z)?;
        let dxz = d_ultra(&x, &z)?;
        t.check(dxy == naive_ultra(&x, &y), || format!("d({x:?}, {y:?}) = {dxy}"));
        t.check(d_ultra(&x, &x)? == 0.0, || format!("d(x, x) for {x:?}"));
        t.check(dxy <= 1.0, || format!("d <= 1 for {x:?} {y:?}"));
        let m = dxy.max(dyz);
        t.check(dxz <= m || oracle::ulps(dxz, m) <= 4, || {
            format!("strong triangle for {x:?} {y:?} {z:?}")
        });
    }
    Ok(())
}

/// Vertices of the notmin tree explored to the workspace depth, plus ends
/// of cyclically reduced elements.
fn notmin_points(ws: &Workspace, depth: usize) -> Result<(TreeOfTrees, Vec<Point>)> {
    let ball = ws.group.ball_enumerate(depth)?;
    let words: Vec<Word> = ball.elements.iter().map(|e| e.word.clone()).collect();
    let tree = TreeOfTrees::build(2, words.iter())?;
    let mut pts: Vec<Point> = words.iter().cloned().map(Point::Vertex).collect();
    for w in words.iter().skip(1).take(40) {
        if w.is_cyclically_reduced()? {
            pts.push(Point::End(BoundaryPoint::power_end(w.clone())?));
        }
    }
    Ok((tree, pts))
}

fn dbar_axioms(rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let ws = Workspace::notmin();
    let (tree, pts) = notmin_points(&ws, ws.config.depth)?;
    let rel = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
    for _ in 0..500 {
        let (x, y, z) = (sample(rng, &pts), sample(rng, &pts), sample(rng, &pts));
        let dxy = dbar(&tree, x, y)?.value;
        let dyx = dbar(&tree, y, x)?.value;
        let dyz = dbar(&tree, y, z)?.value;
        let dxz = dbar(&tree, x, z)?.value;
        t.check(rel(dxy, dyx), || format!("symmetry {x:?} {y:?}: {dxy} vs {dyx}"));
        t.check(dxz <= (dxy + dyz) * (1.0 + 1e-12), || {
            format!("triangle {x:?} {y:?} {z:?}")
        });
        t.check((0.0..=2.0).contains(&dxy), || format!("diameter {x:?} {y:?}: {dxy}"));
        t.check(dbar(&tree, x, x)?.value == 0.0, || format!("d(x, x) for {x:?}"));
    }
    Ok(())
}

/// A random oriented edge on the geodesic from `ε` to `w`.
pub fn random_edge(rng: &mut impl Rng, w: &Word) -> Option<Edge> {
    if w.is_empty() {
        return None;
    }
    let alpha = random_position(rng, w.len(), 10);
    let terminus = Vertex::new(w.prefix(&alpha).ok()?);
    let origin = Vertex::new(w.prefix(&alpha.pred()).ok()?);
    let e = Edge { origin, terminus };
    Some(if rng.random_bool(0.5) { e.reversed() } else { e })
}

fn equivariance(rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let ws = Workspace::notmin();
    let g = &ws.group;
    let ball = g.ball_enumerate(3)?;
    let words: Vec<Word> = ball.elements.iter().map(|e| e.word.clone()).collect();
    for _ in 0..1000 {
        let h = sample(rng, &words);
        let w = sample(rng, &words);
        if let Some(e) = random_edge(rng, w) {
            let moved = g.act_edge(h, &e)?;
            t.check(sigma(&moved)? == sigma(&e)?, || format!("sigma of {h:?} . {e:?}"));
        }
        let u = Vertex::new(sample(rng, &words).clone());
        let v = Vertex::new(sample(rng, &words).clone());
        let d = dist(&u, &v)?;
        t.check(dist(&g.act(h, &u)?, &g.act(h, &v)?)? == d, || {
            format!("isometry of {h:?} on {u:?} {v:?}")
        });
        let third = Vertex::new(sample(rng, &words).clone());
        let y = median(&u, &v, &third)?;
        let split = &hbar_pair(&u, &y)? + &hbar_pair(&y, &v)?;
        t.check(hbar_pair(&u, &v)? == split, || format!("hbar additivity {u:?} {y:?} {v:?}"));
    }
    Ok(())
}

fn drift_harmonic(_rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let ws = Workspace::free2();
    let walks = 300;
    let ens = run_ensemble(&ws.measure, walks, 2000, 7, false, &WalkOptions::default())?;
    let drifts: Vec<f64> = ens.summaries.iter().map(|s| s.drift).collect();
    let mean = drifts.iter().sum::<f64>() / walks as f64;
    let var = drifts.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (walks - 1) as f64;
    let se = (var / walks as f64).sqrt();
    let want = oracle::drift(2);
    t.check((mean - want).abs() <= 4.0 * se, || format!("drift {mean} vs {want} (se {se})"));
    let nu = ConeMeasure::from_ends(&ens.ends, 2)?;
    for apex in cone_apexes(1, 2, 2) {
        let m = apex.len().first().to_i64().expect("small") as u32;
        let p = oracle::harmonic_cone_mass(2, m);
        let se = (p * (1.0 - p) / nu.samples as f64).sqrt();
        let got = nu.table.get(&apex).copied().unwrap_or(0.0);
        t.check((got - p).abs() <= 4.0 * se, || format!("cone {apex:?}: {got} vs {p}"));
    }
    Ok(())
}

fn stationarity_exact(_rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let ws = Workspace::free2();
    let nu = FreeHarmonic { rank: 2 };
    let res = stationarity_residual_exact(&ws.group, &nu, &ws.measure, &cone_apexes(1, 2, 2))?;
    for r in res {
        t.check(r.value <= 1e-12, || format!("residual {} at {:?}", r.value, r.apex));
    }
    Ok(())
}

fn strip_axis(_rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let ws = Workspace::free2();
    let a = ws.parse_end("a^+inf")?;
    let b = ws.parse_end("a^-inf")?;
    t.check(a.relation(&b)? != RayRelation::Same, || "distinct axis ends".into());
    let k = 8;
    let s = strip_count(&ws.group, &a, &b, k)?;
    for (i, &c) in s.counts.iter().enumerate() {
        let want = oracle::axis_line_count(2, 1, i + 1) as u64;
        t.check(c == want, || format!("strip count at k = {}: {c} vs {want}", i + 1));
    }
    Ok(())
}

fn thread_invariance(_rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let ws = Workspace::notmin();
    let run = |threads: usize| -> Result<String> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Experiment(e.to_string()))?;
        pool.install(|| {
            let e = run_ensemble(&ws.measure, 12, 600, 3, true, &WalkOptions::default())?;
            Ok(format!("{:?}", e.summaries))
        })
    };
    let one = run(1)?;
    t.check(one == run(3)?, || "ensemble differs between 1 and 3 threads".into());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_is_deterministic() {
        let a = run(5);
        assert!(a.passed(), "{}", a.render());
        assert_eq!(a.hash(), run(5).hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn free_group_constants() {
        assert!((oracle::hit_neighbour(2) - 1.0 / 3.0).abs() < 1e-15);
        assert!((oracle::harmonic_cone_mass(2, 1) - 0.25).abs() < 1e-15);
        assert!((oracle::harmonic_cone_mass(2, 2) - 1.0 / 12.0).abs() < 1e-15);
        assert_eq!(oracle::drift(2), 0.5);
        assert_eq!(oracle::axis_line_count(2, 1, 5), 11);
    }

    #[test]
    fn words() {
        assert_eq!(oracle::reduce(&[1, 2, -2, -1, 1]), vec![1]);
        assert_eq!(oracle::cyclic_decomposition(&[1, 2, -1]), (vec![-1], vec![2]));
        assert_eq!(oracle::com(&[1, 2, 1], &[1, 2, 2]), vec![1, 2]);
        assert_eq!(oracle::ulps(1.0, 1.0 + f64::EPSILON), 1);
    }
}
