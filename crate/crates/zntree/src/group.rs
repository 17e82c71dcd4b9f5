//! Groups of `Z^n`-words under `∗`, and their universal tree.
//!
//! Vertices of the tree are canonical prefixes of group elements; the base
//! vertex is `ε`. Distances, medians and labels are read off the words.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{Int, ZnVec};
use crate::word::{c_len, parse_expression, Alphabet, Letter, Word};

/// A generator occurrence in an expression: index and sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenPower {
    pub index: usize,
    pub inverse: bool,
}

impl GenPower {
    /// Position in the canonical generator order `g0, g0^-1, g1, ...`.
    pub fn rank(self) -> usize {
        2 * self.index + usize::from(self.inverse)
    }

    pub fn from_rank(r: usize) -> GenPower {
        GenPower {
            index: r / 2,
            inverse: r % 2 == 1,
        }
    }

    pub fn inv(self) -> GenPower {
        GenPower {
            index: self.index,
            inverse: !self.inverse,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub word: Word,
    /// A witness in the generators, when known.
    pub expression: Option<Vec<GenPower>>,
}

impl GroupElement {
    pub fn new(word: Word) -> GroupElement {
        GroupElement {
            word,
            expression: None,
        }
    }
}

/// A tree vertex, named by its canonical prefix word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub prefix: Word,
}

impl Vertex {
    pub fn new(prefix: Word) -> Vertex {
        Vertex { prefix }
    }

    pub fn base(n: usize) -> Vertex {
        Vertex::new(Word::empty(n))
    }

    pub fn len(&self) -> &ZnVec {
        self.prefix.len()
    }

    pub fn is_base(&self) -> bool {
        self.prefix.is_empty()
    }
}

/// An oriented edge between vertices at distance `(1, 0, ..., 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub origin: Vertex,
    pub terminus: Vertex,
}

impl Edge {
    pub fn reversed(&self) -> Edge {
        Edge {
            origin: self.terminus.clone(),
            terminus: self.origin.clone(),
        }
    }

    /// Positive edges point away from `ε`.
    pub fn is_positive(&self) -> bool {
        self.terminus.len() > self.origin.len()
    }
}

/// A finitely generated group of `Z^n`-words.
#[derive(Clone, Debug)]
pub struct Group {
    n: usize,
    alphabet: Alphabet,
    names: Vec<String>,
    gens: Vec<Word>,
    /// Generators and inverses in rank order.
    gen_words: Vec<Word>,
}

impl Group {
    pub fn new(n: usize, alphabet: Alphabet, gens: Vec<(String, Word)>) -> Result<Group> {
        if gens.is_empty() {
            return Err(Error::Workspace("no generators".into()));
        }
        let mut names = Vec::new();
        let mut words = Vec::new();
        for (name, w) in gens {
            if !crate::word::is_identifier(&name) {
                return Err(Error::Workspace(format!("invalid generator name {name:?}")));
            }
            if names.contains(&name) {
                return Err(Error::Workspace(format!("duplicate generator {name:?}")));
            }
            if w.dim() != n {
                return Err(Error::Workspace(format!("generator {name} has wrong dimension")));
            }
            if w.is_empty() {
                return Err(Error::Workspace(format!("generator {name} is the identity")));
            }
            w.cyclic_decomposition().map_err(|e| {
                Error::Workspace(format!("generator {name} admits no cyclic decomposition: {e}"))
            })?;
            names.push(name);
            words.push(w);
        }
        let gen_words = words.iter().flat_map(|w| [w.clone(), w.invert()]).collect();
        Ok(Group {
            n,
            alphabet,
            names,
            gens: words,
            gen_words,
        })
    }

    /// The free group on the alphabet, letters as generators.
    pub fn free(n: usize, alphabet: Alphabet) -> Result<Group> {
        let gens = (0..alphabet.len())
            .map(|i| (alphabet.names()[i].clone(), Word::letter(n, Letter::new(i))))
            .collect();
        Group::new(n, alphabet, gens)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn generators(&self) -> &[Word] {
        &self.gens
    }

    pub fn gen_word(&self, g: GenPower) -> &Word {
        &self.gen_words[g.rank()]
    }

    /// All generators and inverses in rank order.
    pub fn gen_powers(&self) -> impl Iterator<Item = GenPower> {
        (0..2 * self.gens.len()).map(GenPower::from_rank)
    }

    pub fn format(&self, w: &Word) -> String {
        self.alphabet.format(w)
    }

    pub fn format_expression(&self, e: &[GenPower]) -> String {
        if e.is_empty() {
            return "ε".into();
        }
        e.iter()
            .map(|g| {
                if g.inverse {
                    format!("{}^-1", self.names[g.index])
                } else {
                    self.names[g.index].clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" * ")
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            word: Word::empty(self.n),
            expression: Some(Vec::new()),
        }
    }

    pub fn generator(&self, g: GenPower) -> GroupElement {
        GroupElement {
            word: self.gen_word(g).clone(),
            expression: Some(vec![g]),
        }
    }

    /// `u ∗ v` with failures reported as a presentation problem.
    pub fn mult_words(&self, u: &Word, v: &Word) -> Result<Word> {
        u.mult(v).map_err(|e| match e {
            Error::NoCommonMax => Error::ProductUndefined {
                left: self.format(u),
                right: self.format(v),
            },
            other => other,
        })
    }

    pub fn mult(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        let word = self.mult_words(&g.word, &h.word)?;
        let expression = match (&g.expression, &h.expression) {
            (Some(a), Some(b)) => Some(a.iter().chain(b.iter()).copied().collect()),
            _ => None,
        };
        Ok(GroupElement { word, expression })
    }

    pub fn inv(&self, g: &GroupElement) -> GroupElement {
        GroupElement {
            word: g.word.invert(),
            expression: g
                .expression
                .as_ref()
                .map(|e| e.iter().rev().map(|x| x.inv()).collect()),
        }
    }

    /// Evaluates an expression over generator names (then letters).
    pub fn eval(&self, text: &str) -> Result<Word> {
        let n = self.n;
        let resolve = |name: &str| {
            if let Some(i) = self.names.iter().position(|m| m == name) {
                return Some(self.gens[i].clone());
            }
            self.alphabet.lookup(name).map(|l| Word::letter(n, l))
        };
        parse_expression(text, n, &resolve)
    }

    /// Parses a plain word over the alphabet.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        self.alphabet.parse(self.n, text)
    }

    /// `c(x,y) = (l(x) + l(y) - l(x^{-1} y)) / 2`, cross-checked against the
    /// common-prefix length.
    pub fn lyndon_c(&self, x: &Word, y: &Word) -> Result<ZnVec> {
        let q = self.mult_words(&x.invert(), y)?;
        let twice = &(x.len() + y.len()) - q.len();
        let c = twice
            .half()
            .unwrap_or_else(|| panic!("odd Lyndon defect {twice}"));
        let direct = c_len(x, y)?;
        assert_eq!(c, direct, "Lyndon formula disagrees with com");
        Ok(c)
    }

    /// The vertex `⟨α, g⟩`.
    pub fn vertex_of(&self, g: &Word, alpha: &ZnVec) -> Result<Vertex> {
        Ok(Vertex::new(g.prefix(alpha)?))
    }

    /// `g · v`.
    pub fn act(&self, g: &Word, v: &Vertex) -> Result<Vertex> {
        Ok(Vertex::new(self.mult_words(g, &v.prefix)?))
    }

    pub fn act_edge(&self, g: &Word, e: &Edge) -> Result<Edge> {
        Ok(Edge {
            origin: self.act(g, &e.origin)?,
            terminus: self.act(g, &e.terminus)?,
        })
    }

    /// Value of `g` as a metric ball element: `ℏ(g) = height(|g|)`.
    pub fn hbar_element(&self, g: &Word) -> Int {
        g.height()
    }
}

/// `d(u, v) = |u| + |v| - 2 c(u, v)`.
pub fn dist(u: &Vertex, v: &Vertex) -> Result<ZnVec> {
    let c = c_len(&u.prefix, &v.prefix).map_err(malformed)?;
    Ok(&(u.len() + v.len()) - &c.scale_i64(2))
}

fn malformed(e: Error) -> Error {
    match e {
        Error::NoCommonMax => Error::Workspace("vertices without a common prefix".into()),
        other => other,
    }
}

/// The median `Y(x, y, z)`: the deepest of the three pairwise meets.
pub fn median(x: &Vertex, y: &Vertex, z: &Vertex) -> Result<Vertex> {
    let cands = [(x, y), (y, z), (x, z)];
    let mut best: Option<(ZnVec, &Vertex)> = None;
    for (p, q) in cands {
        let c = c_len(&p.prefix, &q.prefix).map_err(malformed)?;
        if best.as_ref().is_none_or(|(b, _)| &c > b) {
            best = Some((c, p));
        }
    }
    let (c, p) = best.expect("three candidates");
    Ok(Vertex::new(p.prefix.prefix(&c)?))
}

/// `ξ(v)`: the last letter of the prefix.
pub fn edge_label(v: &Vertex) -> Result<Letter> {
    v.prefix.last_letter().ok_or(Error::EmptyWord)
}

/// `σ(e)`: `ξ(t)` on positive edges, `ξ(o)^{-1}` on negative ones.
pub fn sigma(e: &Edge) -> Result<Letter> {
    if e.is_positive() {
        edge_label(&e.terminus)
    } else {
        Ok(edge_label(&e.origin)?.inv())
    }
}

/// `ℏ(v) = height(|v|)`.
pub fn hbar(v: &Vertex) -> Int {
    v.len().height().clone()
}

/// `ℏ(a, b) = height(d(a, b))`.
pub fn hbar_pair(a: &Vertex, b: &Vertex) -> Result<Int> {
    Ok(dist(a, b)?.height().clone())
}

/// `x ∈ Γ(v1, v2)`, i.e. `v2 ∈ [v1, x]`.
pub fn in_cone(x: &Vertex, v1: &Vertex, v2: &Vertex) -> Result<bool> {
    Ok(&median(v1, v2, x)? == v2)
}

/// Labels read along the geodesic from `a` to `b`, when the path is finite
/// (its length lies on the first axis).
pub fn path_label(a: &Vertex, b: &Vertex) -> Result<Option<Vec<Letter>>> {
    let c = c_len(&a.prefix, &b.prefix)?;
    let up = a.prefix.suffix_from(&c)?;
    let down = b.prefix.suffix_from(&c)?;
    match (up.invert().as_letters(), down.as_letters()) {
        (Some(u), Some(d)) => Ok(Some(u.iter().chain(d.iter()).copied().collect())),
        _ => Ok(None),
    }
}

impl Group {
    /// Sample vertices `g^k · c^{-1}`, `|k| <= radius`, on the axis of `g`,
    /// each checked against the characteristic-set definition.
    pub fn axis_segment(&self, g: &Word, radius: usize) -> Result<Vec<Vertex>> {
        if g.is_empty() {
            return Err(Error::EmptyWord);
        }
        let (c, _) = g.cyclic_decomposition()?;
        let p0 = Vertex::new(c.invert());
        let gi = g.invert();
        let mut out = vec![p0.clone()];
        let (mut fwd, mut back) = (p0.clone(), p0);
        for _ in 0..radius {
            fwd = self.act(g, &fwd)?;
            back = self.act(&gi, &back)?;
            out.push(fwd.clone());
            out.push(back.clone());
        }
        for p in &out {
            let before = self.act(&gi, p)?;
            let after = self.act(g, p)?;
            assert_eq!(&median(&before, &after, p)?, p, "axis point off the axis");
        }
        out.sort();
        Ok(out)
    }
}

/// The ball `B_G(k)` split into spheres.
#[derive(Clone, Debug)]
pub struct Ball {
    pub elements: Vec<GroupElement>,
    /// `spheres[s]` is the index range of the elements at word length `s`.
    pub spheres: Vec<std::ops::Range<usize>>,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn radius(&self) -> usize {
        self.spheres.len() - 1
    }

    pub fn sphere(&self, s: usize) -> &[GroupElement] {
        &self.elements[self.spheres[s].clone()]
    }

    /// Elements of word length at most `k`.
    pub fn up_to(&self, k: usize) -> &[GroupElement] {
        &self.elements[..self.spheres[k.min(self.radius())].end]
    }

    pub fn word_length(&self, idx: usize) -> usize {
        self.spheres
            .iter()
            .position(|r| r.contains(&idx))
            .expect("index inside the ball")
    }
}

impl Group {
    fn next_sphere(
        &self,
        current: &[GroupElement],
        seen: &dyn Fn(&Word) -> bool,
    ) -> Result<Vec<GroupElement>> {
        let gens: Vec<GenPower> = self.gen_powers().collect();
        let products: Vec<Vec<Word>> = current
            .par_iter()
            .map(|p| {
                gens.iter()
                    .map(|&g| self.mult_words(&p.word, self.gen_word(g)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut fresh: HashMap<Word, ()> = HashMap::new();
        let mut out = Vec::new();
        for (p, row) in current.iter().zip(products) {
            for (&g, w) in gens.iter().zip(row) {
                if seen(&w) || fresh.contains_key(&w) {
                    continue;
                }
                fresh.insert(w.clone(), ());
                let mut e = p.expression.clone().expect("ball elements carry witnesses");
                e.push(g);
                out.push(GroupElement {
                    word: w,
                    expression: Some(e),
                });
            }
        }
        Ok(out)
    }

    /// Breadth-first enumeration of `B_G(k)`. Each element keeps its
    /// lexicographically least shortest witness; output order is sphere by
    /// sphere, and by witness inside a sphere.
    pub fn ball_enumerate(&self, k: usize) -> Result<Ball> {
        let mut index: HashMap<Word, usize> = HashMap::new();
        let id = self.identity();
        index.insert(id.word.clone(), 0);
        let mut elements = vec![id];
        let mut spheres = Vec::new();
        spheres.push(0..1);
        for _ in 0..k {
            let cur = spheres.last().unwrap().clone();
            let next = self.next_sphere(&elements[cur], &|w| index.contains_key(w))?;
            let start = elements.len();
            for e in next {
                index.insert(e.word.clone(), elements.len());
                elements.push(e);
            }
            spheres.push(start..elements.len());
        }
        Ok(Ball { elements, spheres })
    }

    /// Streams spheres `0..=k` to `visit` keeping only three in memory.
    pub fn for_each_sphere(
        &self,
        k: usize,
        mut visit: impl FnMut(usize, &[GroupElement]) -> Result<()>,
    ) -> Result<()> {
        let mut older: Vec<GroupElement> = Vec::new();
        let mut prev: Vec<GroupElement> = Vec::new();
        let mut cur = vec![self.identity()];
        visit(0, &cur)?;
        for s in 1..=k {
            let mut seen: HashMap<&Word, ()> = HashMap::new();
            for e in older.iter().chain(prev.iter()).chain(cur.iter()) {
                seen.insert(&e.word, ());
            }
            let next = self.next_sphere(&cur, &|w| seen.contains_key(w))?;
            drop(seen);
            visit(s, &next)?;
            older = std::mem::take(&mut prev);
            prev = std::mem::replace(&mut cur, next);
        }
        Ok(())
    }
}

impl fmt::Display for GenPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "g{}^-1", self.index)
        } else {
            write!(f, "g{}", self.index)
        }
    }
}
