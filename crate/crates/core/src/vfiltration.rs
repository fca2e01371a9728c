//! The Deligne lattices `V_beta` of `M[1/h]` at `v = 1/h = 0`.
//!
//! Orientation: a section with `v d/dv`-eigenvalue `lambda` on a graded piece
//! sits at the jump `beta = -lambda`, so `V_beta` is the logarithmic lattice
//! whose residue eigenvalues lie in `[-beta, -beta + 1)`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::algebra::eigen::nilpotency_index;
use crate::algebra::lattice::{lattice_basis, lower_triangular_inverse};
use crate::algebra::rational::{floor_i64, frac, int};
use crate::algebra::linalg::inverse as inverse_rat;
use crate::algebra::{
    generalized_eigenspace, rational_eigenvalues, LaurentMatrix, LaurentPoly, RatMatrix, Rational,
    Subspace,
};
use crate::connection::Connection;
use crate::error::{Error, Result};

/// A lattice in `M[1/h]` together with the matrix of `v d/dv` on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VChartSystem {
    rank: usize,
    /// `v d/dv f_j = sum_i B[i][j] f_i` in the current basis `f`.
    v_action: LaurentMatrix,
    /// Columns: the current basis in the original coordinates.
    base_change: LaurentMatrix,
    base_inverse: LaurentMatrix,
}

impl VChartSystem {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn v_action(&self) -> &LaurentMatrix {
        &self.v_action
    }

    pub fn base_change(&self) -> &LaurentMatrix {
        &self.base_change
    }

    pub fn base_inverse(&self) -> &LaurentMatrix {
        &self.base_inverse
    }

    pub fn is_logarithmic(&self) -> bool {
        self.v_action.is_polynomial()
    }

    /// Pole order of `B` at `v = 0`.
    pub fn pole_order(&self) -> usize {
        self.v_action.min_degree().map_or(0, |d| (-d).max(0) as usize)
    }

    /// Change to the basis `f' = f g`, `g` invertible over `Q[v, 1/v]`.
    fn gauge(&self, g: &LaurentMatrix, g_inv: &LaurentMatrix) -> VChartSystem {
        let b = g_inv.mul(&self.v_action.mul(g).add(&g.euler()));
        VChartSystem {
            rank: self.rank,
            v_action: b,
            base_change: self.base_change.mul(g),
            base_inverse: g_inv.mul(&self.base_inverse),
        }
    }
}

/// `B(v) = -v A(1/v)` in the original basis.
pub fn to_v_chart(m: &Connection) -> VChartSystem {
    let r = m.rank();
    let v_action = m.action().map(|p| -LaurentPoly::from_poly_inverted(p).shift(1));
    VChartSystem {
        rank: r,
        v_action,
        base_change: LaurentMatrix::identity(r),
        base_inverse: LaurentMatrix::identity(r),
    }
}

/// Default cap on saturation steps: `rank * (1 + pole order) * 4`.
pub fn default_saturation_cap(sys: &VChartSystem) -> usize {
    (sys.rank * (1 + sys.pole_order()) * 4).max(1)
}

/// Replace the lattice `L` by `L + v d/dv L` until it is stable.
pub fn saturate(sys: &VChartSystem, max_iter: usize) -> Result<VChartSystem> {
    saturate_counted(sys, max_iter).map(|(s, _)| s)
}

fn saturate_counted(sys: &VChartSystem, max_iter: usize) -> Result<(VChartSystem, usize)> {
    let mut cur = sys.clone();
    let r = cur.rank;
    for step in 0..max_iter {
        if cur.is_logarithmic() {
            return Ok((cur, step));
        }
        let gens = LaurentMatrix::identity(r).hstack(&cur.v_action);
        let t = lattice_basis(&gens)?;
        let t_inv = lower_triangular_inverse(&t)?;
        cur = cur.gauge(&t, &t_inv);
    }
    if cur.is_logarithmic() {
        Ok((cur, max_iter))
    } else {
        Err(Error::Irregular { max_iter })
    }
}

pub fn residue(sys: &VChartSystem) -> Result<RatMatrix> {
    if !sys.is_logarithmic() {
        return Err(Error::NotLogarithmic);
    }
    Ok(sys.v_action.coeff(0))
}

fn sorted_rational_spectrum(r: &RatMatrix) -> Result<Vec<(Rational, usize)>> {
    let ev = rational_eigenvalues(r);
    if ev.residual_degree > 0 {
        return Err(Error::IrrationalExponent { residual_degree: ev.residual_degree });
    }
    Ok(ev.eigenvalues)
}

/// Shear a logarithmic lattice until its residue eigenvalues lie in
/// `[-beta, -beta + 1)`.
pub fn shear_to_window(sys: &VChartSystem, beta: &Rational) -> Result<VChartSystem> {
    let lo = -beta.clone();
    let hi = &lo + Rational::one();
    let r = sys.rank;
    let mut cur = sys.clone();
    loop {
        let res = residue(&cur)?;
        let spec = sorted_rational_spectrum(&res)?;
        let (Some(min), Some(max)) = (spec.first(), spec.last()) else {
            return Ok(cur);
        };
        let (lambda, shift) = if max.0 >= hi {
            (max.0.clone(), -1)
        } else if min.0 < lo {
            (min.0.clone(), 1)
        } else {
            return Ok(cur);
        };
        let block = generalized_eigenspace(&res, &lambda);
        let shifted = res.sub(&RatMatrix::identity(r).scale(&lambda));
        let mut power = RatMatrix::identity(r);
        for _ in 0..r {
            power = power.mul(&shifted);
        }
        let image = Subspace::span(r, power.columns());
        let mut cols = block.clone();
        cols.extend(image.basis().iter().cloned());
        let t = RatMatrix::from_columns(r, &cols);
        let t_inv = inverse_rat(&t).expect("generalized eigenspace and image are complementary");
        let mut g = LaurentMatrix::from_rational(&t);
        let mut g_inv = LaurentMatrix::from_rational(&t_inv);
        for j in 0..block.len() {
            for i in 0..r {
                g[(i, j)] = g[(i, j)].shift(shift);
                g_inv[(j, i)] = g_inv[(j, i)].shift(-shift);
            }
        }
        cur = cur.gauge(&g, &g_inv);
    }
}

/// The family `V_{alpha + k} = v^{-k} P_alpha`, `alpha` in `jumps01`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VFiltration {
    rank: usize,
    jumps01: Vec<Rational>,
    /// One logarithmic system per entry of `jumps01`.
    systems: Vec<VChartSystem>,
    nilpotency_bound: usize,
    saturation_steps: usize,
    /// `v d/dv` in the original basis.
    original_action: LaurentMatrix,
}

impl VFiltration {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn jumps01(&self) -> &[Rational] {
        &self.jumps01
    }

    pub fn nilpotency_bound(&self) -> usize {
        self.nilpotency_bound
    }

    pub fn saturation_steps(&self) -> usize {
        self.saturation_steps
    }

    pub fn original_action(&self) -> &LaurentMatrix {
        &self.original_action
    }

    /// Index into `jumps01` and the integer `k` with `V_beta = v^{-k} P_alpha`.
    fn locate(&self, beta: &Rational) -> (usize, i64) {
        let k = floor_i64(beta);
        let f = frac(beta);
        let idx = self.jumps01.iter().rposition(|a| *a <= f).expect("0 is always a jump class");
        (idx, k)
    }

    /// Basis of `V_beta` in the original coordinates.
    pub fn lattice(&self, beta: &Rational) -> LaurentMatrix {
        let (i, k) = self.locate(beta);
        self.systems[i].base_change.shift(-k)
    }

    pub fn lattice_inverse(&self, beta: &Rational) -> LaurentMatrix {
        let (i, k) = self.locate(beta);
        self.systems[i].base_inverse.shift(k)
    }

    /// `v d/dv` on the basis of `V_beta`.
    pub fn lattice_action(&self, beta: &Rational) -> LaurentMatrix {
        let (i, _) = self.locate(beta);
        self.systems[i].v_action.clone()
    }

    /// The largest jump strictly below `beta`; `V_{<beta}` equals `V` there.
    pub fn previous_jump(&self, beta: &Rational) -> Rational {
        let k = floor_i64(beta);
        let f = frac(beta);
        match self.jumps01.iter().rposition(|a| *a < f) {
            Some(i) => &self.jumps01[i] + int(k),
            None => self.jumps01.last().unwrap() + int(k - 1),
        }
    }

    /// The smallest jump strictly above `beta`.
    pub fn next_jump(&self, beta: &Rational) -> Rational {
        let k = floor_i64(beta);
        let f = frac(beta);
        match self.jumps01.iter().position(|a| *a > f) {
            Some(i) => &self.jumps01[i] + int(k),
            None => int(k + 1),
        }
    }

    /// Jump candidates in `[lo, hi]`, increasing.
    pub fn jumps_between(&self, lo: &Rational, hi: &Rational) -> Vec<Rational> {
        let mut out = Vec::new();
        let mut k = floor_i64(lo);
        loop {
            for a in &self.jumps01 {
                let b = a + int(k);
                if b > *hi {
                    return out;
                }
                if b >= *lo {
                    out.push(b);
                }
            }
            k += 1;
        }
    }

    /// Coordinates of `x` in the basis of `V_beta`; `x` lies in `V_beta`
    /// exactly when they are polynomial.
    pub fn coordinates(&self, beta: &Rational, x: &[LaurentPoly]) -> Vec<LaurentPoly> {
        self.lattice_inverse(beta).mul_vec(x)
    }

    pub fn contains(&self, beta: &Rational, x: &[LaurentPoly]) -> bool {
        self.coordinates(beta, x).iter().all(LaurentPoly::is_polynomial)
    }

    /// `v d/dv x` for `x` in the original coordinates.
    pub fn apply_v_derivation(&self, x: &[LaurentPoly]) -> Vec<LaurentPoly> {
        let bx = self.original_action.mul_vec(x);
        bx.iter().zip(x).map(|(a, b)| a + &b.euler()).collect()
    }

    fn verify(&self) {
        let r = self.rank;
        let one = LaurentMatrix::identity(r);
        for (a, sys) in self.jumps01.iter().zip(&self.systems) {
            assert_eq!(sys.base_change.mul(&sys.base_inverse), one, "lattice basis not invertible");
            assert!(sys.is_logarithmic(), "lattice not logarithmic");
            let lo = -a.clone();
            let hi = &lo + Rational::one();
            let spec = sorted_rational_spectrum(&sys.v_action.coeff(0)).expect("rational residue");
            assert!(spec.iter().all(|(l, _)| *l >= lo && *l < hi), "residue outside window");
        }
        for w in 0..self.systems.len() {
            let next = if w + 1 < self.systems.len() {
                self.systems[w + 1].base_inverse.clone()
            } else {
                self.systems[0].base_inverse.shift(1)
            };
            assert!(next.mul(&self.systems[w].base_change).is_polynomial(), "lattices not nested");
        }
    }
}

/// Compute the whole family `V_beta` of `m`.
pub fn v_filtration_family(m: &Connection, max_iter: Option<usize>) -> Result<VFiltration> {
    let chart = to_v_chart(m);
    let cap = max_iter.unwrap_or_else(|| default_saturation_cap(&chart));
    let (sat, saturation_steps) = saturate_counted(&chart, cap)?;
    let res = residue(&sat)?;
    let spec = sorted_rational_spectrum(&res)?;
    let mut classes: BTreeSet<Rational> = spec.iter().map(|(l, _)| frac(&-l.clone())).collect();
    classes.insert(Rational::zero());
    let jumps01: Vec<Rational> = classes.into_iter().collect();
    let mut systems = Vec::with_capacity(jumps01.len());
    let mut nu = 0;
    let mut cur = sat;
    for a in &jumps01 {
        cur = shear_to_window(&cur, a)?;
        let res = cur.v_action.coeff(0);
        let lambda = -a.clone();
        let gen = generalized_eigenspace(&res, &lambda);
        nu = nu.max(nilpotency_index(&res, &lambda, &gen));
        systems.push(cur.clone());
    }
    let vf = VFiltration {
        rank: m.rank(),
        jumps01,
        systems,
        nilpotency_bound: nu,
        saturation_steps,
        original_action: chart.v_action,
    };
    vf.verify();
    Ok(vf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::algebra::{Poly, PolyMatrix};
    use alloc::vec;

    fn lp(low: i64, cs: &[i64]) -> LaurentPoly {
        LaurentPoly::new(low, cs.iter().map(|&c| int(c)).collect())
    }

    fn system(b: LaurentMatrix) -> VChartSystem {
        let r = b.rows();
        VChartSystem {
            rank: r,
            v_action: b,
            base_change: LaurentMatrix::identity(r),
            base_inverse: LaurentMatrix::identity(r),
        }
    }

    #[test]
    fn chart_change_examples() {
        let b = |a: Poly| to_v_chart(&Connection::rank_one(a)).v_action()[(0, 0)].clone();
        assert!(b(Poly::zero()).is_zero());
        assert_eq!(b(Poly::from_ints(&[0, 3])), lp(0, &[-3]));
        assert_eq!(b(Poly::from_ints(&[-1])), lp(1, &[1]));
    }

    #[test]
    fn saturation_examples() {
        let log = system(LaurentMatrix::from_fn(1, 1, |_, _| lp(0, &[2, 1])));
        assert_eq!(saturate(&log, 1).unwrap(), log);

        let irr = system(LaurentMatrix::from_fn(1, 1, |_, _| lp(-1, &[1])));
        let err = saturate(&irr, default_saturation_cap(&irr)).unwrap_err();
        assert_eq!(err, Error::Irregular { max_iter: 8 });

        let b = LaurentMatrix::from_rows(&[vec![lp(0, &[]), lp(-1, &[1])], vec![lp(0, &[]), lp(0, &[])]])
            .unwrap();
        let s = saturate(&system(b), 1).unwrap();
        assert!(s.is_logarithmic());
        let spec = sorted_rational_spectrum(&residue(&s).unwrap()).unwrap();
        assert_eq!(spec, vec![(int(-1), 1), (int(0), 1)]);
    }

    #[test]
    fn residue_requires_log() {
        let irr = system(LaurentMatrix::from_fn(1, 1, |_, _| lp(-1, &[1])));
        assert_eq!(residue(&irr), Err(Error::NotLogarithmic));
    }

    #[test]
    fn shear_rank_one() {
        let s = system(LaurentMatrix::from_fn(1, 1, |_, _| lp(0, &[-2])));
        assert_eq!(shear_to_window(&s, &int(2)).unwrap(), s);
        let t = shear_to_window(&s, &int(1)).unwrap();
        assert_eq!(t.v_action()[(0, 0)], lp(0, &[-1]));
        assert_eq!(t.base_change()[(0, 0)], lp(1, &[1]));
    }

    #[test]
    fn irrational_residue() {
        let r = RatMatrix::from_rows(&[vec![int(0), int(2)], vec![int(1), int(0)]]).unwrap();
        let s = system(LaurentMatrix::from_rational(&r));
        assert_eq!(shear_to_window(&s, &int(0)), Err(Error::IrrationalExponent { residual_degree: 2 }));
    }

    #[test]
    fn family_examples() {
        let vf = v_filtration_family(&Connection::trivial(1), None).unwrap();
        assert_eq!(vf.jumps01(), &[int(0)]);
        assert_eq!(vf.lattice(&int(0)), LaurentMatrix::identity(1));
        assert_eq!(vf.nilpotency_bound(), 1);

        let m = Connection::rank_one(Poly::from_ints(&[0, 3]));
        let vf = v_filtration_family(&m, None).unwrap();
        let e = [LaurentPoly::one()];
        assert!(vf.contains(&int(3), &e));
        assert!(!vf.contains(&rat(5, 2), &e));
        assert!(!vf.contains(&int(2), &e));

        let h = Connection::hypergeometric(&[int(0), rat(1, 2)]).unwrap();
        let vf = v_filtration_family(&h, None).unwrap();
        assert_eq!(vf.jumps01(), &[int(0)]);

        let h = Connection::hypergeometric(&[int(0), int(0)]).unwrap();
        let sat = saturate(&to_v_chart(&h), 10).unwrap();
        let spec = sorted_rational_spectrum(&residue(&sat).unwrap()).unwrap();
        assert_eq!(spec, vec![(int(-1), 1), (int(0), 1)]);
    }

    #[test]
    fn neighbouring_jumps() {
        let h = Connection::hypergeometric(&[int(0), rat(1, 3), rat(1, 2)]).unwrap();
        let vf = v_filtration_family(&h, None).unwrap();
        assert_eq!(vf.previous_jump(&int(0)), int(-1) + vf.jumps01().last().unwrap());
        assert_eq!(vf.next_jump(vf.jumps01().last().unwrap()), int(1));
        let js = vf.jumps_between(&int(-1), &int(1));
        assert_eq!(js.len(), 2 * vf.jumps01().len() + 1);
    }

    #[test]
    fn irregular_connection_rejected() {
        let m = Connection::rank_one(Poly::from_ints(&[0, 0, -1]));
        assert!(matches!(v_filtration_family(&m, None), Err(Error::Irregular { .. })));
        let r = PolyMatrix::from_rows(&[
            vec![Poly::zero(), Poly::from_ints(&[0, -2])],
            vec![Poly::from_ints(&[0, -1]), Poly::zero()],
        ])
        .unwrap();
        let m = Connection::new(2, r).unwrap();
        assert!(matches!(v_filtration_family(&m, None), Err(Error::IrrationalExponent { .. })));
    }
}
