//! Seeded generators for the randomized parts of the verification suites.

use irrhodge_core::algebra::linalg::determinant;
use irrhodge_core::algebra::rational::{int, rat};
use irrhodge_core::algebra::{Poly, PolyMatrix, RatMatrix, Rational, Subspace};
use irrhodge_core::connection::{Connection, FilteredSpace};
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_rational(rng: &mut Rng8) -> Rational {
    rat(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

fn alpha(rng: &mut Rng8, mu: usize) -> Vec<Rational> {
    let mut a: Vec<Rational> = (0..mu)
        .map(|_| {
            let d = rng.gen_range(1..=3);
            rat(rng.gen_range(0..d), d)
        })
        .collect();
    a.sort();
    a
}

/// A gauge `g` invertible over `Q[h]` with its inverse: a product of
/// elementary matrices `I + c h^d E_ij` and a constant diagonal.
pub fn unimodular(rng: &mut Rng8, r: usize) -> (PolyMatrix, PolyMatrix) {
    let mut g = PolyMatrix::identity(r);
    let mut g_inv = PolyMatrix::identity(r);
    let diag: Vec<Rational> = (0..r).map(|_| [int(1), int(-1), int(2), rat(1, 2)][rng.gen_range(0..4)].clone()).collect();
    let d = PolyMatrix::diagonal(&diag.iter().map(|c| Poly::constant(c.clone())).collect::<Vec<_>>());
    let d_inv = PolyMatrix::diagonal(&diag.iter().map(|c| Poly::constant(c.recip())).collect::<Vec<_>>());
    g = g.mul(&d);
    g_inv = d_inv.mul(&g_inv);
    if r > 1 {
        for _ in 0..rng.gen_range(1..=3) {
            let i = rng.gen_range(0..r);
            let j = (i + rng.gen_range(1..r)) % r;
            let c = Poly::monomial(int(rng.gen_range(1..=2) * if rng.gen_bool(0.5) { 1 } else { -1 }), rng.gen_range(0..=1));
            let mut e = PolyMatrix::identity(r);
            e[(i, j)] = c.clone();
            let mut e_inv = PolyMatrix::identity(r);
            e_inv[(i, j)] = c.scale(&int(-1));
            g = g.mul(&e);
            g_inv = e_inv.mul(&g_inv);
        }
    }
    (g, g_inv)
}

fn rank_one(rng: &mut Rng8) -> Connection {
    Connection::rank_one(Poly::from_ints(&[rng.gen_range(-3..=3), rng.gen_range(-2..=2)]))
}

/// A regular connection of rank at most `max_rank` (at most 3) with rational exponents.
pub fn connection(rng: &mut Rng8, max_rank: usize) -> Connection {
    let max_rank = max_rank.clamp(1, 3);
    let m = match rng.gen_range(0..4) {
        0 => rank_one(rng),
        1 => {
            let mut m = rank_one(rng);
            for _ in 1..rng.gen_range(1..=max_rank) {
                m = m.direct_sum(&rank_one(rng));
            }
            m
        }
        2 => {
            let mu = rng.gen_range(1..=max_rank);
            Connection::hypergeometric(&alpha(rng, mu)).unwrap()
        }
        _ => {
            let levels: Vec<Rational> = (0..rng.gen_range(1..=max_rank)).map(|_| int(rng.gen_range(-2..=2))).collect();
            Connection::from_filtered_space(&FilteredSpace::from_levels(&levels).unwrap()).unwrap()
        }
    };
    let m = if rng.gen_bool(0.5) { m.exponential_twist(&small_rational(rng)) } else { m };
    let (g, g_inv) = unimodular(rng, m.rank());
    m.gauge(&g, &g_inv).expect("unimodular gauge")
}

/// A filtered space of dimension `1..=max_dim` with integer levels in a
/// random basis, and the levels themselves.
pub fn filtered_space(rng: &mut Rng8, max_dim: usize) -> (FilteredSpace, Vec<Rational>) {
    let d = rng.gen_range(1..=max_dim);
    let basis = loop {
        let b = RatMatrix::from_fn(d, d, |_, _| int(rng.gen_range(-2..=2)));
        if !determinant(&b).is_zero() {
            break b;
        }
    };
    let levels: Vec<i64> = (0..d).map(|_| rng.gen_range(-3..=3)).collect();
    let mut distinct = levels.clone();
    distinct.sort();
    distinct.dedup();
    let steps = distinct
        .iter()
        .map(|&b| (int(b), Subspace::span(d, (0..d).filter(|&i| levels[i] <= b).map(|i| basis.column(i)))))
        .collect();
    let f = FilteredSpace::new(d, steps).expect("nested subspaces");
    (f, levels.into_iter().map(int).collect())
}
