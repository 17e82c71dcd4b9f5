//! Workspace files: the group, its default measure, exploration depth and
//! seed, as JSON.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::boundary::BoundaryPoint;
use crate::error::{Error, Result};
use crate::group::{Group, GroupElement};
use crate::walk::Measure;
use crate::word::{Alphabet, Word};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorDef {
    pub name: String,
    /// A word over the alphabet.
    pub word: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureEntry {
    /// An expression over generator names.
    pub element: String,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceConfig {
    pub dimension: usize,
    pub alphabet: Vec<String>,
    pub generators: Vec<GeneratorDef>,
    /// Absent means uniform on generators and inverses.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<Vec<MeasureEntry>>,
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_depth() -> usize {
    3
}

/// A loaded workspace.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub config: WorkspaceConfig,
    pub group: Group,
    pub measure: Measure,
}

impl WorkspaceConfig {
    pub fn from_json(text: &str) -> Result<WorkspaceConfig> {
        serde_json::from_str(text).map_err(|e| Error::Workspace(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn build(self) -> Result<Workspace> {
        if self.dimension == 0 {
            return Err(Error::Workspace("dimension must be positive".into()));
        }
        let names: Vec<&str> = self.alphabet.iter().map(String::as_str).collect();
        let alphabet = Alphabet::new(&names).map_err(|e| Error::Workspace(e.to_string()))?;
        let mut gens = Vec::new();
        for g in &self.generators {
            let w = alphabet
                .parse(self.dimension, &g.word)
                .map_err(|e| Error::Workspace(format!("generator {}: {e}", g.name)))?;
            gens.push((g.name.clone(), w));
        }
        let group = Group::new(self.dimension, alphabet, gens)?;
        let measure = match &self.measure {
            None => Measure::uniform_symmetric(&group),
            Some(entries) => {
                let pairs = entries
                    .iter()
                    .map(|m| {
                        let w = group
                            .eval(&m.element)
                            .map_err(|e| Error::Workspace(format!("measure element {:?}: {e}", m.element)))?;
                        Ok((GroupElement::new(w), m.weight))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Measure::new(pairs).map_err(|e| Error::Workspace(e.to_string()))?
            }
        };
        Ok(Workspace {
            config: self,
            group,
            measure,
        })
    }
}

impl Workspace {
    pub fn load(path: &Path) -> Result<Workspace> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Workspace(format!("{}: {e}", path.display())))?;
        WorkspaceConfig::from_json(&text)?.build()
    }

    pub fn from_json(text: &str) -> Result<Workspace> {
        WorkspaceConfig::from_json(text)?.build()
    }

    /// Free group of rank 2 on `a, b` acting on a simplicial tree.
    pub fn free2() -> Workspace {
        Workspace::from_json(include_str!("../workspaces/free2.json")).expect("bundled workspace")
    }

    /// Rank-2 example whose generators `a` and `u5 = (a)^(0,5)` commute.
    pub fn notmin() -> Workspace {
        Workspace::from_json(include_str!("../workspaces/notmin.json")).expect("bundled workspace")
    }

    pub fn dim(&self) -> usize {
        self.group.dim()
    }

    /// A point of the compactified tree in text form: an expression (a
    /// vertex), `EXPR^+inf` / `EXPR^-inf` (the end of `ε, g^{±1}, g^{±2}, ...`
    /// for a cyclically reduced `g`), or `BASE | TAIL^+inf`.
    pub fn parse_point(&self, text: &str) -> Result<crate::boundary::Point> {
        use crate::boundary::Point;
        let t = text.trim();
        let end = t
            .strip_suffix("^+inf")
            .map(|r| (r, false))
            .or_else(|| t.strip_suffix("^-inf").map(|r| (r, true)));
        let Some((body, negative)) = end else {
            return Ok(Point::Vertex(self.group.eval(t)?));
        };
        let (base, tail) = match body.split_once('|') {
            Some((b, tl)) => (self.group.eval(b.trim())?, tl.trim()),
            None => (Word::empty(self.dim()), body.trim()),
        };
        let tail = strip_parens(tail);
        let mut tail = self.group.eval(tail)?;
        if negative {
            tail = tail.invert();
        }
        Ok(Point::End(BoundaryPoint::symbolic(base, tail)?))
    }

    /// Like [`Workspace::parse_point`] but requires an end.
    pub fn parse_end(&self, text: &str) -> Result<BoundaryPoint> {
        match self.parse_point(text)? {
            crate::boundary::Point::End(e) => Ok(e),
            crate::boundary::Point::Vertex(_) => Err(Error::InvalidBoundaryPoint(format!(
                "{text:?} is a vertex; write EXPR^+inf or EXPR^-inf"
            ))),
        }
    }
}

fn strip_parens(s: &str) -> &str {
    let t = s.trim();
    if t.starts_with('(') && t.ends_with(')') {
        // Only when the outer pair matches itself.
        let mut depth = 0i32;
        for (i, ch) in t.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 && i + 1 != t.len() {
                        return t;
                    }
                }
                _ => {}
            }
        }
        return &t[1..t.len() - 1];
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::Point;

    #[test]
    fn bundled_workspaces_load() {
        let f = Workspace::free2();
        assert_eq!(f.dim(), 1);
        assert_eq!(f.measure.support().len(), 4);
        let m = Workspace::notmin();
        assert_eq!(m.dim(), 2);
        assert_eq!(m.measure.support().len(), 6);
    }

    #[test]
    fn config_round_trip() {
        let m = Workspace::notmin();
        let again = WorkspaceConfig::from_json(&m.config.to_json()).unwrap();
        assert_eq!(again, m.config);
    }

    #[test]
    fn corrupted_workspace_is_rejected() {
        let e = Workspace::from_json("{\"dimension\": 2, \"alphabet\": [\"a\"]").unwrap_err();
        assert!(matches!(e, Error::Workspace(_)));
        assert_eq!(e.exit_code(), 2);
        let bad_gen = r#"{"dimension":1,"alphabet":["a"],"generators":[{"name":"x","word":"a a^-1"}]}"#;
        assert!(Workspace::from_json(bad_gen).is_err());
    }

    #[test]
    fn point_syntax() {
        let m = Workspace::notmin();
        assert!(matches!(m.parse_point("u5 * b").unwrap(), Point::Vertex(_)));
        let e = m.parse_end("u5^+inf").unwrap();
        assert_eq!(e.end_type(), 2);
        let e = m.parse_end("b | a^-inf").unwrap();
        assert_eq!(e.end_type(), 1);
        let e = m.parse_end("(a * b)^+inf").unwrap();
        assert!(e.in_cone(&m.group.eval("a b a").unwrap()).unwrap());
        assert!(m.parse_end("a").is_err());
    }
}
