//! The built-in corpus, embedded from `corpus/`.

use irrhodge_core::algebra::parse_rational;
use irrhodge_core::algebra::Rational;
use irrhodge_core::connection::Connection;

use crate::format::{parse_str, Constructor, ConnectionFile};

const FILES: &[(&str, &str)] = &[
    ("control-irrational", include_str!("../corpus/control-irrational.json")),
    ("control-irregular", include_str!("../corpus/control-irregular.json")),
    ("dual-hyp-0-1_3-1_2", include_str!("../corpus/dual-hyp-0-1_3-1_2.json")),
    ("exp-hyp-0-0", include_str!("../corpus/exp-hyp-0-0.json")),
    ("filtered-0-0-1", include_str!("../corpus/filtered-0-0-1.json")),
    ("filtered-0-1-2", include_str!("../corpus/filtered-0-1-2.json")),
    ("filtered-0-1-2-3", include_str!("../corpus/filtered-0-1-2-3.json")),
    ("filtered-m1-2", include_str!("../corpus/filtered-m1-2.json")),
    ("hyp-0", include_str!("../corpus/hyp-0.json")),
    ("hyp-0-0", include_str!("../corpus/hyp-0-0.json")),
    ("hyp-0-0-0", include_str!("../corpus/hyp-0-0-0.json")),
    ("hyp-0-0-0-0", include_str!("../corpus/hyp-0-0-0-0.json")),
    ("hyp-0-0-0-0-0", include_str!("../corpus/hyp-0-0-0-0-0.json")),
    ("hyp-0-1_2", include_str!("../corpus/hyp-0-1_2.json")),
    ("hyp-0-1_3-1_2", include_str!("../corpus/hyp-0-1_3-1_2.json")),
    ("hyp-0-1_3-2_3", include_str!("../corpus/hyp-0-1_3-2_3.json")),
    ("hyp-1_3-1_3", include_str!("../corpus/hyp-1_3-1_3.json")),
    ("hyp-1_5-2_5-3_5-4_5-4_5", include_str!("../corpus/hyp-1_5-2_5-3_5-4_5-4_5.json")),
    ("rank-one-exp", include_str!("../corpus/rank-one-exp.json")),
    ("rank-one-tate-1", include_str!("../corpus/rank-one-tate-1.json")),
    ("rank-one-tate-m2", include_str!("../corpus/rank-one-tate-m2.json")),
    ("sum-hyp-0-0-tate", include_str!("../corpus/sum-hyp-0-0-tate.json")),
    ("trivial", include_str!("../corpus/trivial.json")),
];

#[derive(Clone, Debug)]
pub struct Entry {
    pub name: &'static str,
    pub text: &'static str,
    pub connection: Connection,
}

fn load(name: &'static str, text: &'static str) -> Entry {
    let connection = parse_str(text, None).unwrap_or_else(|e| panic!("corpus file {name}: {e}"));
    Entry { name, text, connection }
}

/// Every regular, rational-exponent object of the corpus.
pub fn objects() -> Vec<Entry> {
    FILES.iter().filter(|(n, _)| !n.starts_with("control-")).map(|(n, t)| load(n, t)).collect()
}

/// The negative controls: one irregular, one with irrational exponents.
pub fn controls() -> Vec<Entry> {
    FILES.iter().filter(|(n, _)| n.starts_with("control-")).map(|(n, t)| load(n, t)).collect()
}

pub fn get(name: &str) -> Option<Entry> {
    FILES.iter().find(|(n, _)| *n == name).map(|(n, t)| load(n, t))
}

/// The `alpha` of every hypergeometric corpus file.
pub fn hypergeometric_alphas() -> Vec<(&'static str, Vec<Rational>)> {
    FILES
        .iter()
        .filter_map(|(n, t)| {
            let f: ConnectionFile = serde_json::from_str(t).ok()?;
            match f.constructor? {
                Constructor::Hypergeometric { alpha } => {
                    Some((*n, alpha.iter().map(|a| parse_rational(a).unwrap()).collect()))
                }
                _ => None,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_loads() {
        assert_eq!(objects().len() + controls().len(), FILES.len());
        assert_eq!(controls().len(), 2);
        assert!(hypergeometric_alphas().iter().any(|(_, a)| a.len() == 5));
        assert!(get("trivial").is_some());
    }
}
