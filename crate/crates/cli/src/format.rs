//! The JSON connection file format.
//!
//! A file holds either an explicit matrix or a constructor:
//!
//! ```json
//! {"rank": 1, "matrix": [[["0/1"]]]}
//! {"constructor": {"hypergeometric": {"alpha": ["0/1", "1/2"]}}}
//! ```
//!
//! Matrix entries are polynomials in `h`, low degree first. Constructors
//! refer to other connections either by path (relative to the referring
//! file) or inline.

use std::fs;
use std::path::{Path, PathBuf};

use irrhodge_core::algebra::{format_rational, parse_rational, Poly, PolyMatrix, Rational};
use irrhodge_core::connection::{Connection, FilteredSpace};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<Vec<String>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constructor: Option<Constructor>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum Constructor {
    Hypergeometric { alpha: Vec<String> },
    Filtered { levels: Vec<String> },
    Tensor(Vec<Source>),
    Sum(Vec<Source>),
    Dual(Source),
    Wedge { of: Source, r: usize },
    Tate { of: Source, ell: i64 },
    Exp { of: Source, c: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Source {
    Path(String),
    Inline(Box<ConnectionFile>),
}

/// Explicit-matrix file for `m`.
pub fn to_file(m: &Connection) -> ConnectionFile {
    let a = m.action();
    let matrix = (0..a.rows())
        .map(|i| {
            (0..a.cols())
                .map(|j| {
                    let p = &a[(i, j)];
                    if p.is_zero() {
                        vec!["0/1".to_string()]
                    } else {
                        p.coeffs().iter().map(format_rational).collect()
                    }
                })
                .collect()
        })
        .collect();
    ConnectionFile { rank: Some(m.rank()), label: m.label().map(str::to_string), matrix: Some(matrix), constructor: None }
}

pub fn emit(m: &Connection) -> String {
    let mut s = serde_json::to_string_pretty(&to_file(m)).expect("connection files serialize");
    s.push('\n');
    s
}

pub fn parse_str(text: &str, base: Option<&Path>) -> Result<Connection, CliError> {
    let file: ConnectionFile =
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    Resolver { stack: Vec::new() }.build(&file, base, "$")
}

pub fn parse_file(path: &Path) -> Result<Connection, CliError> {
    let mut r = Resolver { stack: Vec::new() };
    r.load(path, "$")
}

struct Resolver {
    stack: Vec<PathBuf>,
}

impl Resolver {
    fn load(&mut self, path: &Path, at: &str) -> Result<Connection, CliError> {
        let canon = fs::canonicalize(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        if self.stack.contains(&canon) {
            let chain: Vec<String> = self.stack.iter().chain([&canon]).map(|p| p.display().to_string()).collect();
            return Err(CliError::Cycle(format!("at {at}: {}", chain.join(" -> "))));
        }
        let text = fs::read_to_string(&canon).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let file: ConnectionFile = serde_json::from_str(&text).map_err(|e| {
            CliError::Parse(format!("{} line {} column {}: {e}", path.display(), e.line(), e.column()))
        })?;
        self.stack.push(canon.clone());
        let out = self.build(&file, canon.parent(), "$");
        self.stack.pop();
        out.map_err(|e| e.within(&path.display().to_string()))
    }

    fn source(&mut self, s: &Source, base: Option<&Path>, at: &str) -> Result<Connection, CliError> {
        match s {
            Source::Inline(f) => self.build(f, base, at),
            Source::Path(p) => match base {
                Some(b) => self.load(&b.join(p), at),
                None => Err(CliError::Parse(format!("at {at}: file reference {p:?} without a base directory"))),
            },
        }
    }

    fn build(&mut self, f: &ConnectionFile, base: Option<&Path>, at: &str) -> Result<Connection, CliError> {
        let m = match (&f.matrix, &f.constructor) {
            (Some(rows), None) => parse_matrix(rows, at)?,
            (None, Some(c)) => self.construct(c, base, &format!("{at}.constructor"))?,
            (Some(_), Some(_)) => return Err(CliError::Parse(format!("at {at}: both matrix and constructor given"))),
            (None, None) => return Err(CliError::Parse(format!("at {at}: neither matrix nor constructor given"))),
        };
        if let Some(r) = f.rank {
            if r != m.rank() {
                return Err(CliError::Core(irrhodge_core::Error::Shape(format!(
                    "at {at}: declared rank {r} but the connection has rank {}",
                    m.rank()
                ))));
            }
        }
        Ok(match &f.label {
            Some(l) => m.with_label(l),
            None => m,
        })
    }

    fn construct(&mut self, c: &Constructor, base: Option<&Path>, at: &str) -> Result<Connection, CliError> {
        Ok(match c {
            Constructor::Hypergeometric { alpha } => {
                Connection::hypergeometric(&rationals(alpha, &format!("{at}.hypergeometric.alpha"))?)?
            }
            Constructor::Filtered { levels } => {
                let levels = rationals(levels, &format!("{at}.filtered.levels"))?;
                Connection::from_filtered_space(&FilteredSpace::from_levels(&levels)?)?
            }
            Constructor::Tensor(list) | Constructor::Sum(list) => {
                let tensor = matches!(c, Constructor::Tensor(_));
                let name = if tensor { "tensor" } else { "sum" };
                let mut it = list.iter().enumerate();
                let Some((_, first)) = it.next() else {
                    return Err(CliError::Parse(format!("at {at}.{name}: empty list")));
                };
                let mut acc = self.source(first, base, &format!("{at}.{name}[0]"))?;
                for (i, s) in it {
                    let next = self.source(s, base, &format!("{at}.{name}[{i}]"))?;
                    acc = if tensor { acc.tensor(&next) } else { acc.direct_sum(&next) };
                }
                acc
            }
            Constructor::Dual(s) => self.source(s, base, &format!("{at}.dual"))?.dual(),
            Constructor::Wedge { of, r } => self.source(of, base, &format!("{at}.wedge.of"))?.wedge(*r)?,
            Constructor::Tate { of, ell } => self.source(of, base, &format!("{at}.tate.of"))?.tate_twist(*ell),
            Constructor::Exp { of, c } => {
                let c = rational(c, &format!("{at}.exp.c"))?;
                self.source(of, base, &format!("{at}.exp.of"))?.exponential_twist(&c)
            }
        })
    }
}

pub fn rational(s: &str, at: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|e| CliError::Parse(format!("at {at}: {e}")))
}

fn rationals(v: &[String], at: &str) -> Result<Vec<Rational>, CliError> {
    v.iter().enumerate().map(|(i, s)| rational(s, &format!("{at}[{i}]"))).collect()
}

fn parse_matrix(rows: &[Vec<Vec<String>>], at: &str) -> Result<Connection, CliError> {
    let r = rows.len();
    let mut entries = Vec::with_capacity(r * r);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != r {
            return Err(CliError::Core(irrhodge_core::Error::Shape(format!(
                "at {at}.matrix[{i}]: row has {} entries, expected {r}",
                row.len()
            ))));
        }
        for (j, p) in row.iter().enumerate() {
            entries.push(Poly::new(rationals(p, &format!("{at}.matrix[{i}][{j}]"))?));
        }
    }
    Ok(Connection::new(r, PolyMatrix::new(r, r, entries)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use irrhodge_core::algebra::rational::{int, rat};

    #[test]
    fn explicit_and_constructed() {
        let m = parse_str(r#"{"rank":1,"matrix":[[["0/1"]]]}"#, None).unwrap();
        assert_eq!(m, Connection::trivial(1));
        let h = parse_str(r#"{"constructor":{"hypergeometric":{"alpha":["0/1","0/1"]}}}"#, None).unwrap();
        assert_eq!(h, Connection::hypergeometric(&[int(0), int(0)]).unwrap());
        let t = parse_str(
            r#"{"constructor":{"tate":{"of":{"constructor":{"dual":{"rank":1,"matrix":[[["1/2","3"]]]}}},"ell":2}}}"#,
            None,
        )
        .unwrap();
        assert_eq!(t.action()[(0, 0)], Poly::new(vec![rat(-1, 2), int(-1)]));
    }

    #[test]
    fn errors() {
        let e = parse_str(r#"{"rank":1,"matrix":[[["1/0"]]]}"#, None).unwrap_err();
        assert_eq!(e.name(), "E_PARSE");
        assert!(e.to_string().contains("matrix[0][0][0]"));
        let e = parse_str(r#"{"rank":1,"matrix":[[["1"]]], "extra": 1}"#, None).unwrap_err();
        assert!(e.to_string().contains("line 1"));
        assert_eq!(parse_str(r#"{"rank":2,"matrix":[[["1"]]]}"#, None).unwrap_err().name(), "E_SHAPE");
        assert_eq!(parse_str(r#"{"matrix":[[["1"],["0"]]]}"#, None).unwrap_err().name(), "E_SHAPE");
        let e = parse_str(r#"{"constructor":{"hypergeometric":{"alpha":["1/2","0"]}}}"#, None).unwrap_err();
        assert_eq!(e.name(), "E_BAD_ALPHA");
        assert_eq!(parse_str(r#"{"constructor":{"dual":"x.json"}}"#, None).unwrap_err().name(), "E_PARSE");
    }

    #[test]
    fn round_trip() {
        let h = Connection::hypergeometric(&[rat(1, 3), rat(1, 2)]).unwrap().with_label("h");
        assert_eq!(parse_str(&emit(&h), None).unwrap(), h);
        assert_eq!(emit(&h), emit(&parse_str(&emit(&h), None).unwrap()));
    }

    #[test]
    fn file_references_and_cycles() {
        let dir = std::env::temp_dir().join(format!("irrhodge-format-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        fs::write(dir.join("a.json"), r#"{"constructor":{"tensor":["b.json","b.json"]}}"#).unwrap();
        fs::write(dir.join("b.json"), r#"{"constructor":{"filtered":{"levels":["0","1"]}}}"#).unwrap();
        assert_eq!(parse_file(&dir.join("a.json")).unwrap().rank(), 4);
        fs::write(dir.join("c.json"), r#"{"constructor":{"dual":"d.json"}}"#).unwrap();
        fs::write(dir.join("d.json"), r#"{"constructor":{"wedge":{"of":"c.json","r":1}}}"#).unwrap();
        assert_eq!(parse_file(&dir.join("c.json")).unwrap_err().name(), "E_CYCLE");
        fs::remove_dir_all(&dir).unwrap();
    }
}
