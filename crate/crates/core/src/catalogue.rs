//! Built-in example systems, their recorded facts, and transcriptions of the displayed
//! curvature expressions.
//!
//! Everything is read from a data directory so that a corrected transcription needs no
//! rebuild. The directory is taken from `CCLAB_DATA_DIR`, then the crate's own `data/`;
//! copies embedded at build time are the last resort.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Poly2, Vars};
use crate::dynamics::Stability;
use crate::parser::{parse_polynomial, parse_system, parse_system_file, ParseDiagnostic, SystemSource};
use crate::system::PlanarSystem;

pub const DATA_DIR_ENV: &str = "CCLAB_DATA_DIR";

const EMBEDDED_SYSTEMS: [(&str, &str); 4] = [
    ("s1", include_str!("../data/catalogue/s1.sys")),
    ("s1a", include_str!("../data/catalogue/s1a.sys")),
    ("s2", include_str!("../data/catalogue/s2.sys")),
    ("center", include_str!("../data/catalogue/center.sys")),
];
const EMBEDDED_FACTS: &str = include_str!("../data/catalogue/facts.json");
const EMBEDDED_FIXTURES: &str = include_str!("../data/fixtures/transcriptions.fix");

#[derive(Debug, Error)]
pub enum CatalogueError {
    #[error("unknown catalogue key `{0}` (expected s1, s1a, s2 or center)")]
    UnknownKey(String),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{file}: {diag}")]
    Parse { file: String, diag: ParseDiagnostic },
    #[error("facts file: {0}")]
    Facts(#[from] serde_json::Error),
    #[error("fixture file line {line}: {message}")]
    Fixture { line: usize, message: String },
    #[error("no facts recorded for `{0}`")]
    MissingFacts(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CatalogueKey {
    S1,
    S1a,
    S2,
    Center,
}

impl CatalogueKey {
    pub const ALL: [CatalogueKey; 4] = [CatalogueKey::S1, CatalogueKey::S1a, CatalogueKey::S2, CatalogueKey::Center];

    pub fn as_str(self) -> &'static str {
        match self {
            CatalogueKey::S1 => "s1",
            CatalogueKey::S1a => "s1a",
            CatalogueKey::S2 => "s2",
            CatalogueKey::Center => "center",
        }
    }
}

impl fmt::Display for CatalogueKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CatalogueKey {
    type Err = CatalogueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CatalogueKey::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| CatalogueError::UnknownKey(s.into()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Paper,
    Derived,
    Trivial,
}

/// A fact recorded about a catalogue system.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnownFact {
    pub id: String,
    #[serde(flatten)]
    pub claim: Claim,
    pub tag: Provenance,
    pub citation: String,
}

/// Rationals and points are written as strings such as `"-80/289"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Claim {
    RAtEquilibrium { point: [String; 2], value: String },
    Cycles {
        count: usize,
        #[serde(default)]
        radii: Vec<String>,
        #[serde(default)]
        stability: Vec<Stability>,
        #[serde(default)]
        center: bool,
    },
    /// Coefficients of `f(s)` in ascending order.
    RadialForm { f: Vec<i64> },
    SingularPoints { points: Vec<[String; 2]> },
    AssertionA { holds: bool },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogueEntry {
    pub key: CatalogueKey,
    pub source: SystemSource,
    pub facts: Vec<KnownFact>,
}

impl CatalogueEntry {
    pub fn system(&self) -> Result<PlanarSystem, CatalogueError> {
        parse_system(&self.source).map_err(|diag| CatalogueError::Parse { file: format!("{}.sys", self.key), diag })
    }

    pub fn fact(&self, id: &str) -> Option<&KnownFact> {
        self.facts.iter().find(|f| f.id == id)
    }
}

/// `R = R1 / R2` as transcribed, before parsing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcription {
    pub key: String,
    pub vars: (String, String),
    pub r1: String,
    pub r2: String,
}

impl Transcription {
    pub fn parse(&self) -> Result<(Poly2, Poly2), CatalogueError> {
        let vars = Vars::new(self.vars.0.clone(), self.vars.1.clone());
        let p = |text: &str, which: &str| {
            parse_polynomial(text, &vars)
                .map_err(|diag| CatalogueError::Parse { file: format!("fixture {}.{which}", self.key), diag })
        };
        Ok((p(&self.r1, "R1")?, p(&self.r2, "R2")?))
    }
}

/// Section being read: key, declared variables, raw values by name.
type Section = (String, Option<(String, String)>, BTreeMap<String, String>);

/// Parses the `[key]` / `vars:` / `R1 =` / `R2 =` fixture format. Indented lines continue
/// the previous value.
pub fn parse_fixtures(text: &str) -> Result<BTreeMap<String, Transcription>, CatalogueError> {
    let mut out = BTreeMap::new();
    let mut current: Option<Section> = None;
    let mut last_key: Option<String> = None;
    let err = |line: usize, message: &str| CatalogueError::Fixture { line, message: message.into() };
    let finish = |cur: Section,
                  out: &mut BTreeMap<String, Transcription>,
                  line: usize| {
        let (key, vars, mut vals) = cur;
        let (Some(r1), Some(r2)) = (vals.remove("R1"), vals.remove("R2")) else {
            return Err(err(line, &format!("section [{key}] needs both R1 and R2")));
        };
        let vars = vars.unwrap_or(("x".into(), "y".into()));
        out.insert(key.clone(), Transcription { key, vars, r1, r2 });
        Ok(())
    };
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        if line.starts_with(char::is_whitespace) {
            let (Some(cur), Some(k)) = (current.as_mut(), last_key.as_ref()) else {
                return Err(err(line_no, "continuation line outside a value"));
            };
            let v = cur.2.get_mut(k).expect("last key present");
            v.push(' ');
            v.push_str(line.trim());
            continue;
        }
        let t = line.trim();
        if let Some(name) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            if let Some(cur) = current.take() {
                finish(cur, &mut out, line_no)?;
            }
            current = Some((name.trim().to_string(), None, BTreeMap::new()));
            last_key = None;
            continue;
        }
        let Some(cur) = current.as_mut() else {
            return Err(err(line_no, "entry before the first [section]"));
        };
        if let Some(rest) = t.strip_prefix("vars:") {
            let names: Vec<&str> = rest.split_whitespace().collect();
            if names.len() != 2 {
                return Err(err(line_no, "`vars:` expects exactly two names"));
            }
            cur.1 = Some((names[0].into(), names[1].into()));
            last_key = None;
            continue;
        }
        let Some((k, v)) = t.split_once('=') else {
            return Err(err(line_no, "expected `R1 = ...` or `R2 = ...`"));
        };
        let k = k.trim();
        if k != "R1" && k != "R2" {
            return Err(err(line_no, &format!("unknown key `{k}`")));
        }
        if cur.2.insert(k.to_string(), v.trim().to_string()).is_some() {
            return Err(err(line_no, &format!("duplicate key `{k}`")));
        }
        last_key = Some(k.to_string());
    }
    if let Some(cur) = current.take() {
        finish(cur, &mut out, text.lines().count())?;
    }
    Ok(out)
}

/// Where the catalogue was loaded from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "path")]
pub enum DataOrigin {
    Directory(PathBuf),
    Embedded,
}

/// The complete catalogue: systems, facts and transcriptions.
#[derive(Clone, Debug, PartialEq)]
pub struct Catalogue {
    pub origin: DataOrigin,
    pub entries: BTreeMap<CatalogueKey, CatalogueEntry>,
    pub transcriptions: BTreeMap<String, Transcription>,
}

impl Catalogue {
    /// Resolves the data directory as described in the module docs.
    pub fn load() -> Result<Self, CatalogueError> {
        if let Some(dir) = std::env::var_os(DATA_DIR_ENV) {
            return Catalogue::from_dir(Path::new(&dir));
        }
        let bundled = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
        if bundled.join("catalogue").is_dir() {
            return Catalogue::from_dir(&bundled);
        }
        Catalogue::embedded()
    }

    pub fn embedded() -> Result<Self, CatalogueError> {
        let systems = EMBEDDED_SYSTEMS.iter().map(|(k, text)| (k.to_string(), text.to_string())).collect();
        Catalogue::assemble(DataOrigin::Embedded, systems, EMBEDDED_FACTS, EMBEDDED_FIXTURES)
    }

    pub fn from_dir(dir: &Path) -> Result<Self, CatalogueError> {
        let read = |p: PathBuf| std::fs::read_to_string(&p).map_err(|source| CatalogueError::Io { path: p, source });
        let systems = CatalogueKey::ALL
            .iter()
            .map(|k| Ok((k.to_string(), read(dir.join("catalogue").join(format!("{k}.sys")))?)))
            .collect::<Result<Vec<_>, CatalogueError>>()?;
        let facts = read(dir.join("catalogue").join("facts.json"))?;
        let fixtures = read(dir.join("fixtures").join("transcriptions.fix"))?;
        Catalogue::assemble(DataOrigin::Directory(dir.to_path_buf()), systems, &facts, &fixtures)
    }

    fn assemble(
        origin: DataOrigin,
        systems: Vec<(String, String)>,
        facts: &str,
        fixtures: &str,
    ) -> Result<Self, CatalogueError> {
        let mut facts: BTreeMap<String, Vec<KnownFact>> = serde_json::from_str(facts)?;
        let entries = systems
            .into_iter()
            .map(|(k, text)| {
                let key: CatalogueKey = k.parse()?;
                let source = parse_system_file(&text)
                    .map_err(|diag| CatalogueError::Parse { file: format!("{k}.sys"), diag })?;
                let facts = facts.remove(&k).ok_or_else(|| CatalogueError::MissingFacts(k.clone()))?;
                Ok((key, CatalogueEntry { key, source, facts }))
            })
            .collect::<Result<BTreeMap<_, _>, CatalogueError>>()?;
        Ok(Catalogue { origin, entries, transcriptions: parse_fixtures(fixtures)? })
    }

    pub fn entry(&self, key: CatalogueKey) -> &CatalogueEntry {
        &self.entries[&key]
    }

    pub fn system(&self, key: CatalogueKey) -> Result<PlanarSystem, CatalogueError> {
        self.entry(key).system()
    }
}
