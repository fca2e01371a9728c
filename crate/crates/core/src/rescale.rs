//! The rescaled module `tM = Q[tau, 1/tau] ⊗ M`, used to re-derive the
//! irregular Hodge filtration through its V-filtration along `tau = 0`.
//!
//! Elements are finite sums `sum_k tau^k ⊗ m_k` with `m_k` in `M`. The
//! structure maps are
//! `h (tau^k ⊗ m) = tau^(k+1) ⊗ h m`,
//! `dd_tau (tau^k ⊗ m) = tau^k ⊗ (k h m - h^2 d_h m)` and
//! `h^2 d_h (tau^k ⊗ m) = tau^(k+1) ⊗ h^2 d_h m`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::algebra::rational::{ceil_i64, frac, int};
use crate::algebra::{LaurentPoly, Poly, PolyMatrix, Rational, Subspace};
use crate::connection::Connection;
use crate::error::{Error, Result};
use crate::hodge::{HodgeAnalysis, SectionSpace, Spectrum};

/// An element `sum_k tau^k ⊗ m_k`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RElem {
    pub parts: BTreeMap<i64, Vec<Poly>>,
}

impl RElem {
    pub fn symbol(k: i64, m: Vec<Poly>) -> Self {
        let mut parts = BTreeMap::new();
        if m.iter().any(|p| !p.is_zero()) {
            parts.insert(k, m);
        }
        RElem { parts }
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    fn add_part(&mut self, k: i64, m: Vec<Poly>) {
        let entry = self.parts.entry(k).or_insert_with(|| vec_zero(m.len()));
        for (a, b) in entry.iter_mut().zip(&m) {
            *a = &*a + b;
        }
        if entry.iter().all(Poly::is_zero) {
            self.parts.remove(&k);
        }
    }

    pub fn add(&self, o: &RElem) -> RElem {
        let mut out = self.clone();
        for (k, m) in &o.parts {
            out.add_part(*k, m.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> RElem {
        let mut out = RElem::default();
        for (k, m) in &self.parts {
            out.add_part(*k, m.iter().map(|p| p.scale(c)).collect());
        }
        out
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.parts.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.parts.keys().next_back().copied()
    }
}

fn vec_zero(r: usize) -> Vec<Poly> {
    (0..r).map(|_| Poly::zero()).collect()
}

fn h_times(m: &[Poly]) -> Vec<Poly> {
    m.iter().map(|p| p.shift(1)).collect()
}

/// `h^2 d_h m = A m + h^2 m'`.
fn h2dh(a: &PolyMatrix, m: &[Poly]) -> Vec<Poly> {
    let am = a.mul_vec(m);
    am.iter().zip(m).map(|(x, p)| x + &p.derivative().shift(2)).collect()
}

/// Window-truncated model of `tM` in tau-degrees `[-K, K]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RescaledModule {
    source: Connection,
    window: i64,
}

impl RescaledModule {
    pub fn new(m: &Connection, window: i64) -> Result<Self> {
        if window < 2 {
            return Err(Error::Window(format!("window {window} below 2")));
        }
        Ok(RescaledModule { source: m.clone(), window })
    }

    pub fn source(&self) -> &Connection {
        &self.source
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    /// Number of symbols `tau^k ⊗ e_i` in the window.
    pub fn symbol_count(&self) -> usize {
        (2 * self.window as usize + 1) * self.source.rank()
    }

    /// True when every component lies in the window; images of boundary
    /// symbols may leave it and are then partial.
    pub fn in_window(&self, x: &RElem) -> bool {
        x.parts.keys().all(|k| k.abs() <= self.window)
    }

    pub fn symbol(&self, k: i64, i: usize) -> RElem {
        let r = self.source.rank();
        let mut m = vec_zero(r);
        m[i] = Poly::one();
        RElem::symbol(k, m)
    }

    pub fn mul_h(&self, x: &RElem) -> RElem {
        let mut out = RElem::default();
        for (k, m) in &x.parts {
            out.add_part(k + 1, h_times(m));
        }
        out
    }

    pub fn d_tau(&self, x: &RElem) -> RElem {
        let a = self.source.action();
        let mut out = RElem::default();
        for (k, m) in &x.parts {
            let km: Vec<Poly> = h_times(m).iter().map(|p| p.scale(&int(*k))).collect();
            let d = h2dh(a, m);
            out.add_part(*k, km.iter().zip(&d).map(|(x, y)| x - y).collect());
        }
        out
    }

    pub fn h2dh(&self, x: &RElem) -> RElem {
        let a = self.source.action();
        let mut out = RElem::default();
        for (k, m) in &x.parts {
            out.add_part(k + 1, h2dh(a, m));
        }
        out
    }

    /// `tau dd_tau + beta h`.
    pub fn tau_d_tau_plus(&self, beta: &Rational, x: &RElem) -> RElem {
        let mut out = RElem::default();
        for (k, m) in &self.d_tau(x).parts {
            out.add_part(k + 1, m.clone());
        }
        out.add(&self.mul_h(x).scale(beta))
    }
}

/// Generators of `U_beta tM = ⊕_k tau^k ⊗ (V_{beta+k} ∩ M)` in a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RescaledVPiece {
    pub beta: Rational,
    pub generators: Vec<(i64, SectionSpace)>,
}

pub fn rescaled_v_piece(a: &HodgeAnalysis, beta: &Rational, window: i64) -> Result<RescaledVPiece> {
    let generators = (-window..=window)
        .map(|k| Ok((k, a.sections_at(&(beta + int(k)))?)))
        .collect::<Result<_>>()?;
    Ok(RescaledVPiece { beta: beta.clone(), generators })
}

fn to_v(x: &[Poly]) -> Vec<LaurentPoly> {
    x.iter().map(LaurentPoly::from_poly_inverted).collect()
}

/// Membership in `U_gamma tM`, or in `U_{<gamma} tM` when `strict`.
fn in_u(a: &HodgeAnalysis, gamma: &Rational, x: &RElem, strict: bool) -> bool {
    let vf = a.v_filtration();
    x.parts.iter().all(|(k, m)| {
        let b = gamma + int(*k);
        let b = if strict { vf.previous_jump(&b) } else { b };
        vf.contains(&b, &to_v(m))
    })
}

/// Smallest `nu <= nu_max` with `(tau dd_tau + beta h)^nu U_beta ⊂ U_{<beta}`
/// on the generators whose images stay in the window.
pub fn check_nilpotency(
    a: &HodgeAnalysis,
    rm: &RescaledModule,
    piece: &RescaledVPiece,
    nu_max: usize,
) -> Result<Option<usize>> {
    let last = rm.window() - nu_max as i64;
    let gens: Vec<RElem> = piece
        .generators
        .iter()
        .filter(|(k, _)| *k <= last)
        .flat_map(|(k, s)| s.basis.iter().map(move |m| RElem::symbol(*k, m.clone())))
        .collect();
    if gens.is_empty() {
        return Err(Error::Window(format!("no generators of U_{} inside the window", piece.beta)));
    }
    let mut cur = gens;
    for nu in 1..=nu_max {
        cur = cur.iter().map(|x| rm.tau_d_tau_plus(&piece.beta, x)).collect();
        if cur.iter().all(|x| in_u(a, &piece.beta, x, true)) {
            return Ok(Some(nu));
        }
    }
    Ok(None)
}

/// Flatten polynomial vectors of degree `<= d`.
fn flat(x: &[Poly], d: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(x.len() * (d + 1));
    for p in x {
        for i in 0..=d {
            out.push(p.coeff(i));
        }
    }
    out
}

fn max_deg<'a>(xs: impl IntoIterator<Item = &'a Vec<Poly>>) -> usize {
    xs.into_iter().flat_map(|x| x.iter().filter_map(Poly::degree)).max().unwrap_or(0)
}

/// Injectivity of `h : S / S_< -> T / T_<` given bases of `S`, `T_<` and
/// `dim S_<`: the intersection `h S ∩ T_<` must have dimension `dim S_<`.
pub fn h_injective(s: &[Vec<Poly>], s_lower_dim: usize, t_lower: &[Vec<Poly>]) -> bool {
    let hs: Vec<Vec<Poly>> = s.iter().map(|x| h_times(x)).collect();
    let d = max_deg(hs.iter().chain(t_lower));
    let r = s.first().or(t_lower.first()).map_or(0, Vec::len);
    let n = r * (d + 1);
    let a = Subspace::span(n, hs.iter().map(|x| flat(x, d)));
    let b = Subspace::span(n, t_lower.iter().map(|x| flat(x, d)));
    a.intersection(&b).dim() == s_lower_dim
}

/// `h` induces injections `gr_{beta+k-1}(V ∩ M) -> gr_{beta+k}(V ∩ M)` for
/// every jump `beta + k` in `[lo, hi]`.
pub fn check_strictness(a: &HodgeAnalysis, lo: &Rational, hi: &Rational) -> Result<bool> {
    let vf = a.v_filtration();
    for b in vf.jumps_between(lo, hi) {
        let prev = &b - Rational::one();
        let s = a.sections_at(&prev)?;
        let s_lower = a.sections_at(&vf.previous_jump(&prev))?;
        let t_lower = a.sections_at(&vf.previous_jump(&b))?;
        if !h_injective(&s.basis, s_lower.dim(), &t_lower.basis) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Default window: `2 + ceil(mu - m) + ceil(max(|m|, |mu|))`.
pub fn default_window(a: &HodgeAnalysis) -> i64 {
    match a.range() {
        Some((m, mu)) => {
            let reach = if m.clone() * &m > mu.clone() * &mu { -m.clone() } else { mu.clone() };
            2 + ceil_i64(&(&mu - &m)) + ceil_i64(&reach).abs().max(ceil_i64(&-m).abs())
        }
        None => 2,
    }
}

/// Graded dimensions read off `⊕_k h^k (V_{alpha+k} ∩ M) / (1-h)(V_{alpha+k-1} ∩ M)`
/// over all classes, restricted to class `alpha`.
pub fn grading_oracle(a: &HodgeAnalysis, alpha: &Rational, window: i64) -> Result<Spectrum> {
    let vf = a.v_filtration();
    let r = a.rank();
    let lo = int(-window);
    let hi = int(window);
    let points = vf.jumps_between(&lo, &hi);
    let mut dims = Vec::with_capacity(points.len());
    for b in &points {
        let t = a.sections_at(b)?;
        let s = a.sections_at(&(b - Rational::one()))?;
        let one_minus_h: Vec<Vec<Poly>> =
            s.basis.iter().map(|x| x.iter().map(|p| p - &p.shift(1)).collect()).collect();
        let d = max_deg(t.basis.iter().chain(&one_minus_h));
        let n = r * (d + 1);
        let ts = Subspace::span(n, t.basis.iter().map(|x| flat(x, d)));
        let ss = Subspace::span(n, one_minus_h.iter().map(|x| flat(x, d)));
        if !ts.contains_subspace(&ss) || ss.dim() != s.dim() {
            return Err(Error::Window(format!("(1-h) V_{{<}} not inside V at {b}")));
        }
        dims.push(ts.dim() - ss.dim());
    }
    if dims.first().is_some_and(|&d| d != 0) || dims.last().map_or(r != 0, |&d| d != r) {
        return Err(Error::Window(format!("spectrum not exhausted in window {window}")));
    }
    let mut values = Vec::new();
    for i in 1..points.len() {
        if frac(&points[i]) == *alpha {
            for _ in dims[i - 1]..dims[i] {
                values.push(points[i].clone());
            }
        }
    }
    Ok(Spectrum::from_values(values))
}

/// `f(tau, h)` with `h`-exponents nonnegative.
type Bivariate = BTreeMap<(i64, i64), Rational>;

fn biv_add(f: &mut Bivariate, key: (i64, i64), c: Rational) {
    let e = f.entry(key).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        f.remove(&key);
    }
}

/// Coordinates over `Q[tau, 1/tau, h]` in the basis `1 ⊗ e_l`:
/// `tau^k ⊗ h^n e_l = tau^(k-n) h^n (1 ⊗ e_l)`.
fn coordinates(x: &RElem, r: usize) -> Vec<Bivariate> {
    let mut out = vec_biv(r);
    for (k, m) in &x.parts {
        for (l, p) in m.iter().enumerate() {
            for (n, c) in p.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    biv_add(&mut out[l], (k - n as i64, n as i64), c.clone());
                }
            }
        }
    }
    out
}

fn vec_biv(r: usize) -> Vec<Bivariate> {
    (0..r).map(|_| Bivariate::new()).collect()
}

fn biv_mul(f: &Bivariate, g: &Bivariate) -> Bivariate {
    let mut out = Bivariate::new();
    for ((a, b), c) in f {
        for ((x, y), d) in g {
            biv_add(&mut out, (a + x, b + y), c * d);
        }
    }
    out
}

fn pairing(phi: &RElem, x: &RElem, r: usize) -> Bivariate {
    let p = coordinates(phi, r);
    let q = coordinates(x, r);
    let mut out = Bivariate::new();
    for (f, g) in p.iter().zip(&q) {
        for (k, c) in biv_mul(f, g) {
            biv_add(&mut out, k, c);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    DTau,
    H2Dh,
}

fn apply(rm: &RescaledModule, op: Op, x: &RElem) -> RElem {
    match op {
        Op::DTau => rm.d_tau(x),
        Op::H2Dh => rm.h2dh(x),
    }
}

/// The operator on the coefficient ring: `dd_tau = h d/dtau`, `h^2 d/dh`.
fn ring_derivative(op: Op, f: &Bivariate) -> Bivariate {
    let mut out = Bivariate::new();
    for ((a, b), c) in f {
        let (factor, key) = match op {
            Op::DTau => (*a, (a - 1, b + 1)),
            Op::H2Dh => (*b, (*a, b + 1)),
        };
        if factor != 0 {
            biv_add(&mut out, key, c * int(factor));
        }
    }
    out
}

fn biv_sum(f: &Bivariate, g: &Bivariate) -> Bivariate {
    let mut out = f.clone();
    for (k, c) in g {
        biv_add(&mut out, *k, c.clone());
    }
    out
}

/// Leibniz rule `D<phi, x> = <D phi, x> + <phi, D x>` for the pairing between
/// `t(M^dual)` and `tM`, on all symbols of degree in `[-K, K]`, where
/// `dual_action` is the action on `M^dual` in the dual basis.
pub fn dual_pairing_holds(m: &Connection, dual_action: &Connection, window: i64) -> Result<bool> {
    let rm = RescaledModule::new(m, window)?;
    let rd = RescaledModule::new(dual_action, window)?;
    let r = m.rank();
    for op in [Op::DTau, Op::H2Dh] {
        for a in -window..=window {
            for j in 0..r {
                let phi = rd.symbol(a, j);
                let dphi = apply(&rd, op, &phi);
                for b in -window..=window {
                    for l in 0..r {
                        let x = rm.symbol(b, l);
                        let lhs = ring_derivative(op, &pairing(&phi, &x, r));
                        let rhs = biv_sum(&pairing(&dphi, &x, r), &pairing(&phi, &apply(&rm, op, &x), r));
                        if lhs != rhs {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

/// `(tau^a ⊗ m1) ⊗ (tau^b ⊗ m2) -> tau^(a+b) ⊗ (m1 ⊗ m2)` intertwines the
/// product action on `tM1 ⊗ tM2` with the action on `t(M1 ⊗ M2)`; `product`
/// is the connection used on the right.
pub fn tensor_leibniz_holds(m1: &Connection, m2: &Connection, product: &Connection, window: i64) -> Result<bool> {
    let r1 = RescaledModule::new(m1, window)?;
    let r2 = RescaledModule::new(m2, window)?;
    let rp = RescaledModule::new(product, window)?;
    let (n1, n2) = (m1.rank(), m2.rank());
    let combine = |x: &RElem, y: &RElem| {
        let mut out = RElem::default();
        for (a, u) in &x.parts {
            for (b, w) in &y.parts {
                let t: Vec<Poly> = u.iter().flat_map(|p| w.iter().map(move |q| p * q)).collect();
                out.add_part(a + b, t);
            }
        }
        out
    };
    for op in [Op::DTau, Op::H2Dh] {
        for a in -window..=window {
            for i in 0..n1 {
                let x = r1.symbol(a, i);
                for b in -window..=window {
                    for j in 0..n2 {
                        let y = r2.symbol(b, j);
                        let lhs = apply(&rp, op, &combine(&x, &y));
                        let rhs = combine(&apply(&r1, op, &x), &y).add(&combine(&x, &apply(&r2, op, &y)));
                        if lhs != rhs {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Duality and tensor compatibility of rescaling on `m`.
pub fn rescaled_dual_check(m: &Connection, window: i64) -> Result<bool> {
    Ok(dual_pairing_holds(m, &m.dual(), window)? && tensor_leibniz_holds(m, &m.dual(), &m.tensor(&m.dual()), window)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::connection::FilteredSpace;
    use crate::hodge::analyze;
    use alloc::vec;

    fn line(cs: &[i64]) -> Connection {
        Connection::rank_one(Poly::from_ints(cs))
    }

    #[test]
    fn structure_maps() {
        let rm = RescaledModule::new(&Connection::trivial(1), 2).unwrap();
        assert_eq!(rm.symbol_count(), 5);
        for k in -2..=2 {
            let x = rm.symbol(k, 0);
            assert_eq!(rm.d_tau(&x), RElem::symbol(k, vec![Poly::from_ints(&[0, k])]));
            assert!(rm.h2dh(&x).is_zero());
            assert_eq!(rm.mul_h(&x).min_degree(), Some(k + 1));
        }
        assert!(!rm.in_window(&rm.mul_h(&rm.symbol(2, 0))));
        let rm = RescaledModule::new(&line(&[-1]), 2).unwrap();
        assert_eq!(rm.d_tau(&rm.symbol(0, 0)), rm.symbol(0, 0));
        assert_eq!(rm.d_tau(&rm.symbol(1, 0)), RElem::symbol(1, vec![Poly::from_ints(&[1, 1])]));
        assert!(RescaledModule::new(&line(&[0]), 1).is_err());
    }

    #[test]
    fn v_pieces() {
        let a = analyze(&Connection::trivial(1), None).unwrap();
        let p = rescaled_v_piece(&a, &int(0), 2).unwrap();
        let dims: Vec<usize> = p.generators.iter().map(|(_, s)| s.dim()).collect();
        assert_eq!(dims, vec![0, 0, 1, 2, 3]);
        let q = rescaled_v_piece(&a, &int(-1), 2).unwrap();
        let dims: Vec<usize> = q.generators.iter().map(|(_, s)| s.dim()).collect();
        assert_eq!(dims, vec![0, 0, 0, 1, 2]);
    }

    #[test]
    fn nilpotency() {
        let a = analyze(&Connection::trivial(1), None).unwrap();
        let rm = RescaledModule::new(a.connection(), 3).unwrap();
        let p = rescaled_v_piece(&a, &int(0), 3).unwrap();
        assert_eq!(check_nilpotency(&a, &rm, &p, 2).unwrap(), Some(1));
        let mut bad = p.clone();
        bad.generators[1].1 = bad.generators[3].1.clone();
        assert_eq!(check_nilpotency(&a, &rm, &bad, 2).unwrap(), None);

        let f = FilteredSpace::from_levels(&[int(0), int(1)]).unwrap();
        let a = analyze(&Connection::from_filtered_space(&f).unwrap(), None).unwrap();
        let rm = RescaledModule::new(a.connection(), 3).unwrap();
        let p = rescaled_v_piece(&a, &int(0), 3).unwrap();
        assert_eq!(check_nilpotency(&a, &rm, &p, 2).unwrap(), Some(1));
    }

    #[test]
    fn strictness() {
        let h = Connection::hypergeometric(&[int(0), rat(1, 3), rat(1, 2)]).unwrap();
        let a = analyze(&h, None).unwrap();
        assert!(check_strictness(&a, &int(-3), &int(5)).unwrap());
        // h e0 lies in h * V_0 but the lower part is claimed empty.
        let e = vec![vec![Poly::one()]];
        assert!(h_injective(&e, 0, &[]));
        assert!(!h_injective(&e, 0, &[vec![Poly::x()]]));
    }

    #[test]
    fn oracle_examples() {
        let a = analyze(&Connection::trivial(1), None).unwrap();
        assert_eq!(grading_oracle(&a, &int(0), 2).unwrap(), Spectrum::from_values([int(0)]));
        let f = FilteredSpace::from_levels(&[int(0), int(0), int(1)]).unwrap();
        let a = analyze(&Connection::from_filtered_space(&f).unwrap(), None).unwrap();
        assert_eq!(grading_oracle(&a, &int(0), 3).unwrap(), Spectrum::from_values([int(0), int(0), int(1)]));
        let h = Connection::hypergeometric(&[int(0), rat(1, 2)]).unwrap();
        let a = analyze(&h, None).unwrap();
        assert_eq!(grading_oracle(&a, &int(0), default_window(&a)).unwrap(), a.spectrum());
        let m = line(&[0, 5]);
        let a = analyze(&m, None).unwrap();
        assert!(matches!(grading_oracle(&a, &int(0), 2), Err(Error::Window(_))));
    }

    #[test]
    fn duality_of_rescaling() {
        assert!(rescaled_dual_check(&line(&[0, 3]), 2).unwrap());
        let h = Connection::hypergeometric(&[int(0), int(0)]).unwrap();
        assert!(rescaled_dual_check(&h, 2).unwrap());
        let wrong = Connection::new(2, h.action().transpose()).unwrap();
        assert!(!dual_pairing_holds(&h, &wrong, 2).unwrap());
    }
}
