//! Verification suites: each compares the direct pipeline with an
//! independent route and records one [`Check`] per comparison.

use irrhodge_core::algebra::rational::{ceil_i64, floor_i64, frac, int};
use irrhodge_core::algebra::{format_rational, Rational};
use irrhodge_core::connection::{Connection, FilteredSpace};
use irrhodge_core::formulas::{convolve_spectra, grassmannian_d, verify_hypergeom, wedge_spectrum};
use irrhodge_core::hodge::{analyze, check_duality_formula, check_tensor_formula, spectrum, HodgeAnalysis, Spectrum};
use irrhodge_core::rescale::{
    check_nilpotency, check_strictness, default_window, grading_oracle, rescaled_dual_check, rescaled_v_piece,
    RescaledModule,
};
use irrhodge_core::Result;
use serde::Serialize;
use serde_json::{json, Value};

use crate::corpus;
use crate::random;

pub const SUITES: &[&str] = &["hypergeom", "tensor", "dual", "rescale", "wedge", "filtered", "properties"];

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub pass: bool,
    /// Reported without counting towards the verdict.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub informational: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(checks: Vec<Check>) -> Self {
        Report { pass: checks.iter().all(|c| c.pass || c.informational), checks }
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass && !c.informational).collect()
    }
}

/// A named connection to run the suites on.
#[derive(Clone, Debug)]
pub struct Object {
    pub name: String,
    pub connection: Connection,
}

pub fn corpus_objects() -> Vec<Object> {
    corpus::objects().into_iter().map(|e| Object { name: e.name.to_string(), connection: e.connection }).collect()
}

pub fn spectrum_json(s: &Spectrum) -> Value {
    Value::Array(
        s.entries.iter().map(|(b, k)| json!({"jump": format_rational(b), "multiplicity": k})).collect(),
    )
}

fn rationals_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|b| Value::String(format_rational(b))).collect())
}

fn check(suite: &str, name: impl Into<String>, run: impl FnOnce() -> Result<(bool, Value)>) -> Check {
    let (pass, detail) = run().unwrap_or_else(|e| (false, json!({"error": e.to_string()})));
    Check { suite: suite.to_string(), name: name.into(), pass, informational: false, detail }
}

/// Per-case comparison with the jumps `k + mu alpha_k`, then one check that
/// the sign and shift found are the same for the whole family.
pub fn hypergeom(alphas: &[(String, Vec<Rational>)]) -> Vec<Check> {
    let mut out = Vec::new();
    let mut found = Vec::new();
    for (name, alpha) in alphas {
        out.push(check("hypergeom", name.clone(), || {
            let r = verify_hypergeom(alpha, None)?;
            if let Some(m) = &r.matched {
                found.push(m.clone());
            }
            Ok((
                r.is_match(),
                json!({
                    "alpha": rationals_json(alpha),
                    "computed": spectrum_json(&r.computed),
                    "expected": spectrum_json(&r.expected),
                    "sign": r.matched.as_ref().map(|m| m.0),
                    "shift": r.matched.as_ref().map(|m| format_rational(&m.1)),
                }),
            ))
        }));
    }
    found.dedup();
    out.push(Check {
        suite: "hypergeom".into(),
        name: "normalization constant across the family".into(),
        pass: found.len() <= 1,
        informational: false,
        detail: Value::Array(found.iter().map(|(s, t)| json!({"sign": s, "shift": format_rational(t)})).collect()),
    });
    out
}

pub fn corpus_hypergeom_alphas() -> Vec<(String, Vec<Rational>)> {
    corpus::hypergeometric_alphas().into_iter().map(|(n, a)| (n.to_string(), a)).collect()
}

fn tensor_check(name: String, a: &Connection, b: &Connection) -> Check {
    check("tensor", name, || {
        let rep = check_tensor_formula(a, b, None)?;
        let conv = convolve_spectra(&spectrum(a, None)?, &spectrum(b, None)?);
        let direct = spectrum(&a.tensor(b), None)?;
        Ok((
            rep.ok() && conv == direct,
            json!({
                "points": rep.points,
                "subspaces_equal": rep.subspaces_equal,
                "hn_ranks_equal": rep.hn_ranks_equal,
                "v_adapted_ok": rep.v_adapted_ok,
                "spectrum": spectrum_json(&direct),
                "convolution": spectrum_json(&conv),
            }),
        ))
    })
}

/// Corpus pairs with rank product at most `max_product`, then `random_pairs`
/// seeded random pairs of rank at most 3.
pub fn tensor(objects: &[Object], max_product: usize, random_pairs: usize, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for (i, a) in objects.iter().enumerate() {
        for b in &objects[i..] {
            if a.connection.rank() * b.connection.rank() <= max_product {
                out.push(tensor_check(format!("{} x {}", a.name, b.name), &a.connection, &b.connection));
            }
        }
    }
    let mut rng = random::rng(seed);
    for i in 0..random_pairs {
        let a = random::connection(&mut rng, 3);
        let b = random::connection(&mut rng, 3);
        out.push(tensor_check(format!("random pair {i}"), &a, &b));
    }
    out
}

pub fn dual(objects: &[Object]) -> Vec<Check> {
    objects
        .iter()
        .map(|o| {
            check("dual", o.name.clone(), || {
                let rep = check_duality_formula(&o.connection, None)?;
                Ok((
                    rep.ok(),
                    json!({
                        "points": rep.points,
                        "annihilators_equal": rep.annihilators_equal,
                        "spectrum_negated": rep.spectrum_negated,
                    }),
                ))
            })
        })
        .collect()
}

fn class_part(s: &Spectrum, alpha: &Rational) -> Spectrum {
    Spectrum { entries: s.entries.iter().filter(|(b, _)| frac(b) == *alpha).cloned().collect() }
}

fn rescale_one(a: &HodgeAnalysis, dual_max_rank: usize) -> Result<(bool, Value)> {
    let k = default_window(a);
    let spec = a.spectrum();
    let mut classes = Vec::new();
    let mut oracle_ok = true;
    for alpha in a.v_filtration().jumps01() {
        let oracle = grading_oracle(a, alpha, k)?;
        let direct = class_part(&spec, alpha);
        oracle_ok &= oracle == direct;
        classes.push(json!({
            "alpha": format_rational(alpha),
            "oracle": spectrum_json(&oracle),
            "direct": spectrum_json(&direct),
        }));
    }
    let (m, mu) = a.range().unwrap_or((int(0), int(0)));
    let strict = check_strictness(a, &(&m - int(1)), &(&mu + int(1)))?;
    let rm = RescaledModule::new(a.connection(), k)?;
    let nu_max = a.v_filtration().nilpotency_bound().max(1);
    let mut nilpotent = true;
    for beta in a.v_filtration().jumps_between(&m, &mu) {
        let piece = rescaled_v_piece(a, &beta, k)?;
        nilpotent &= check_nilpotency(a, &rm, &piece, nu_max)?.is_some();
    }
    let dual = if a.rank() <= dual_max_rank { Some(rescaled_dual_check(a.connection(), 2)?) } else { None };
    Ok((
        oracle_ok && strict && nilpotent && dual != Some(false),
        json!({
            "window": k,
            "classes": classes,
            "strictness": strict,
            "nilpotency": nilpotent,
            "nilpotency_bound": nu_max,
            "dual": dual,
        }),
    ))
}

pub fn rescale(objects: &[Object]) -> Vec<Check> {
    objects.iter().map(|o| check("rescale", o.name.clone(), || rescale_one(&analyze(&o.connection, None)?, 3))).collect()
}

/// Exterior powers against the Grassmannian counts, and `spectrum(wedge(m, 2))`
/// against the combinatorial wedge on the corpus.
pub fn wedge(r: usize, n: usize, objects: &[Object]) -> Vec<Check> {
    let mut out = Vec::new();
    let base = Spectrum::from_values((0..=n as i64).map(int));
    out.push(check("wedge", format!("grassmannian r={r} n={n}"), || {
        let w = wedge_spectrum(&base, r)?;
        let d = grassmannian_d(r, n)?;
        let dims: Vec<(Rational, usize)> = d.iter().map(|&(p, k)| (int(p as i64), k)).collect();
        Ok((
            w.entries == dims,
            json!({
                "wedge": spectrum_json(&w),
                "d_p": d.iter().map(|(p, k)| json!({"p": p, "d": k})).collect::<Vec<_>>(),
            }),
        ))
    }));
    out.push(check("wedge", format!("filtered space 0..{n}, power {r}"), || {
        let levels: Vec<Rational> = (0..=n as i64).map(int).collect();
        let m = Connection::from_filtered_space(&FilteredSpace::from_levels(&levels)?)?;
        let direct = spectrum(&m.wedge(r)?, None)?;
        let comb = wedge_spectrum(&base, r)?;
        Ok((direct == comb, json!({"spectrum": spectrum_json(&direct), "combinatorial": spectrum_json(&comb)})))
    }));
    for o in objects.iter().filter(|o| (2..=4).contains(&o.connection.rank())) {
        let mut c = check("wedge", format!("{} power 2", o.name), || {
            let s = spectrum(&o.connection, None)?;
            let direct = spectrum(&o.connection.wedge(2)?, None)?;
            let comb = wedge_spectrum(&s, 2)?;
            Ok((direct == comb, json!({"spectrum": spectrum_json(&direct), "combinatorial": spectrum_json(&comb)})))
        });
        // Only asserted when every graded piece is one-dimensional.
        c.informational = spectrum(&o.connection, None).is_ok_and(|s| s.entries.iter().any(|(_, k)| *k > 1));
        out.push(c);
    }
    out
}

pub fn filtered(count: usize, max_dim: usize, seed: u64) -> Vec<Check> {
    let mut rng = random::rng(seed);
    (0..count)
        .map(|i| {
            let (f, levels) = random::filtered_space(&mut rng, max_dim);
            check("filtered", format!("random filtered space {i}"), || {
                let s = spectrum(&Connection::from_filtered_space(&f)?, None)?;
                let expected = Spectrum::from_values(levels.clone());
                Ok((s == expected, json!({"spectrum": spectrum_json(&s), "levels": rationals_json(&levels)})))
            })
        })
        .collect()
}

/// Tate shift, exponential twist, gauge invariance, direct sums, and the
/// HN assertions, on every object.
pub fn properties(objects: &[Object], gauges: usize, seed: u64) -> Vec<Check> {
    let mut rng = random::rng(seed);
    let mut out = Vec::new();
    for (i, o) in objects.iter().enumerate() {
        let m = &o.connection;
        let Ok(a) = analyze(m, None) else {
            out.push(check("properties", format!("{} analysis", o.name), || analyze(m, None).map(|_| (true, Value::Null))));
            continue;
        };
        let s = a.spectrum();
        out.push(check("properties", format!("{} tate", o.name), || {
            let mut ok = true;
            for ell in [-2i64, -1, 1, 2] {
                ok &= spectrum(&m.tate_twist(ell), None)? == s.shift(&int(ell));
            }
            Ok((ok, json!({"ells": [-2, -1, 1, 2]})))
        }));
        out.push(check("properties", format!("{} exponential twist", o.name), || {
            let cs = [int(-1), Rational::new(1.into(), 2.into()), int(3)];
            let mut ok = true;
            for c in &cs {
                ok &= spectrum(&m.exponential_twist(c), None)? == s;
            }
            Ok((ok, json!({"c": rationals_json(&cs)})))
        }));
        let gs: Vec<_> = (0..gauges).map(|_| random::unimodular(&mut rng, m.rank())).collect();
        out.push(check("properties", format!("{} gauge", o.name), || {
            let mut ok = true;
            for (g, g_inv) in &gs {
                ok &= spectrum(&m.gauge(g, g_inv)?, None)? == s;
            }
            Ok((ok, json!({"gauges": gauges})))
        }));
        let other = &objects[(i + 1) % objects.len()];
        out.push(check("properties", format!("{} + {}", o.name, other.name), || {
            let t = spectrum(&other.connection, None)?;
            let d = spectrum(&m.direct_sum(&other.connection), None)?;
            Ok((d == s.union(&t), json!({"spectrum": spectrum_json(&d)})))
        }));
        out.push(check("properties", format!("{} HN rank", o.name), || {
            let mut ok = true;
            for b in a.candidates() {
                ok &= a.hn_rank_at(b)? == a.f_irr(b).dim();
            }
            Ok((ok, json!({"points": a.candidates().len()})))
        }));
        out.push(check("properties", format!("{} graded HN", o.name), || {
            let (lo, hi) = a.range().unwrap_or((int(0), int(0)));
            let mut ok = true;
            let mut points = 0;
            for gamma in a.v_filtration().jumps01() {
                let p_lo = floor_i64(&(&lo - gamma)) - 1;
                let p_hi = ceil_i64(&(&hi - gamma)) + 1;
                ok &= a.check_ffhn(gamma, p_lo, p_hi)?;
                points += 1;
            }
            Ok((ok, json!({"classes": points})))
        }));
    }
    out
}

/// Every suite with its default arguments.
pub fn all() -> Vec<Check> {
    let objects = corpus_objects();
    let mut out = hypergeom(&corpus_hypergeom_alphas());
    out.extend(tensor(&objects, 9, 20, 1));
    out.extend(dual(&objects));
    out.extend(rescale(&objects));
    out.extend(wedge(2, 3, &objects));
    out.extend(filtered(10, 6, 2));
    out.extend(properties(&objects, 20, 3));
    out
}
