//! Standard-basis engine for ideals in the local ring at the origin and
//! Gröbner engine for global orders.
//!
//! Local orders use Mora's tangent-cone normal form: a reduction may use
//! inputs *and* earlier partial remainders, which restores termination for
//! orders where 1 is the largest monomial. The weak normal form it produces
//! satisfies `u * p = sum q_i * g_i + r` for a unit `u`. The canonical
//! K-linear normal form on a finite-dimensional quotient is computed
//! separately, by rewriting over the standard monomials with all terms of
//! degree >= dim truncated (the maximal ideal to that power lies in the
//! localized ideal, so truncation does not move the residue class).

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::sync::OnceLock;

use num_traits::One;

use crate::error::{Error, Result};
use crate::expr::{cmp_degrevlex, cmp_negdegrevlex, Monomial, Polynomial, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderKind {
    /// Graded reverse lexicographic; a well-order, Buchberger territory.
    GlobalDegRevLex,
    /// Negative-degree reverse lexicographic; 1 is the largest monomial,
    /// which realizes the local ring at the origin.
    LocalNegDegRevLex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub nvars: usize,
}

impl MonomialOrder {
    pub fn global(nvars: usize) -> Self {
        MonomialOrder {
            kind: OrderKind::GlobalDegRevLex,
            nvars,
        }
    }

    pub fn local(nvars: usize) -> Self {
        MonomialOrder {
            kind: OrderKind::LocalNegDegRevLex,
            nvars,
        }
    }

    pub fn is_local(&self) -> bool {
        self.kind == OrderKind::LocalNegDegRevLex
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.kind {
            OrderKind::GlobalDegRevLex => cmp_degrevlex(a, b),
            OrderKind::LocalNegDegRevLex => cmp_negdegrevlex(a, b),
        }
    }
}

/// Resource guardrail for basis completion and reductions.
#[derive(Debug, Clone, Copy)]
pub struct SbConfig {
    pub max_reductions: usize,
}

impl Default for SbConfig {
    fn default() -> Self {
        SbConfig {
            max_reductions: 100_000,
        }
    }
}

struct Budget {
    left: usize,
    max: usize,
}

impl Budget {
    fn new(max: usize) -> Self {
        Budget { left: max, max }
    }

    fn spend(&mut self) -> Result<()> {
        if self.left == 0 {
            return Err(Error::BudgetExceeded(self.max));
        }
        self.left -= 1;
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct Entry {
    poly: Polynomial, // monic
    lm: Monomial,
    ecart: u32,
    /// exact representation over the original generators
    rep: Option<Vec<Polynomial>>,
}

fn make_entry(order: &MonomialOrder, poly: Polynomial, rep: Option<Vec<Polynomial>>) -> Entry {
    let (lm, lc) = poly
        .leading_term(|a, b| order.cmp(a, b))
        .map(|(m, c)| (m.clone(), c.clone()))
        .expect("entry must be nonzero");
    let inv = Rat::one() / lc;
    let poly = poly.scale(&inv);
    let rep = rep.map(|r| r.iter().map(|p| p.scale(&inv)).collect());
    let ecart = poly.total_degree() - lm.degree();
    Entry {
        poly,
        lm,
        ecart,
        rep,
    }
}

/// Outcome of a weak normal form with quotient tracking:
/// `unit * input = sum quotients[i] * divider[i] + remainder`.
struct WeakNf {
    remainder: Polynomial,
    unit: Option<Polynomial>,
    quotients: Option<Vec<Polynomial>>,
}

/// Mora weak normal form of `p` against `dividers`. With a global order the
/// écart of every polynomial is zero, no intermediate is ever recorded, and
/// this is ordinary polynomial division.
fn weak_nf(
    p: &Polynomial,
    dividers: &[Entry],
    order: &MonomialOrder,
    budget: &mut Budget,
    track: bool,
) -> Result<WeakNf> {
    struct Red {
        poly: Polynomial,
        lm: Monomial,
        ecart: u32,
        // reducer = mult * p - sum coeffs[i] * divider[i]
        mult: Option<Polynomial>,
        coeffs: Option<Vec<Polynomial>>,
    }

    let nvars = p.nvars();
    let n = dividers.len();
    let mut pool: Vec<Red> = dividers
        .iter()
        .enumerate()
        .map(|(j, e)| Red {
            poly: e.poly.clone(),
            lm: e.lm.clone(),
            ecart: e.ecart,
            mult: track.then(|| Polynomial::zero(nvars)),
            coeffs: track.then(|| {
                // divider j itself is 0 * p - (-e_j) * dividers
                let mut c = vec![Polynomial::zero(nvars); n];
                c[j] = Polynomial::constant(nvars, -Rat::one());
                c
            }),
        })
        .collect();

    let mut h = p.clone();
    let mut mult = track.then(|| Polynomial::one(nvars));
    let mut coeffs = track.then(|| vec![Polynomial::zero(nvars); n]);

    loop {
        let Some((lm_h, lc_h)) = h.leading_term(|a, b| order.cmp(a, b)) else {
            break; // h == 0
        };
        let lm_h = lm_h.clone();
        let lc_h = lc_h.clone();
        let ecart_h = h.total_degree() - lm_h.degree();

        // reducer with dividing leading monomial, minimal écart, oldest first
        let choice = pool
            .iter()
            .enumerate()
            .filter(|(_, r)| r.lm.divides(&lm_h))
            .min_by_key(|(i, r)| (r.ecart, *i))
            .map(|(i, _)| i);
        let Some(ri) = choice else {
            break; // leading term irreducible: weak normal form reached
        };
        budget.spend()?;

        if order.is_local() && pool[ri].ecart > ecart_h {
            // record the current partial remainder so later steps may divide by it
            pool.push(Red {
                poly: h.clone(),
                lm: lm_h.clone(),
                ecart: ecart_h,
                mult: mult.clone(),
                coeffs: coeffs.clone(),
            });
        }

        let t = pool[ri].lm.div_into(&lm_h);
        // reducers are monic except recorded intermediates
        let lc_r = pool[ri]
            .poly
            .leading_term(|a, b| order.cmp(a, b))
            .map(|(_, c)| c.clone())
            .expect("reducer nonzero");
        let factor = lc_h / lc_r;

        h = h.sub(&pool[ri].poly.mul_term(&t, &factor));
        if track {
            let rm = pool[ri].mult.clone().unwrap();
            let rc = pool[ri].coeffs.clone().unwrap();
            let m = mult.as_mut().unwrap();
            *m = m.sub(&rm.mul_term(&t, &factor));
            let cs = coeffs.as_mut().unwrap();
            for (c, r) in cs.iter_mut().zip(&rc) {
                *c = c.sub(&r.mul_term(&t, &factor));
            }
        }
    }

    Ok(WeakNf {
        remainder: h,
        unit: mult,
        quotients: coeffs,
    })
}

/// Ordinary full multivariate division: every divisible term is reduced, so
/// the remainder has no term in the leading-term ideal. Terminates for
/// well-orders only; callers restrict it to the global order.
fn full_division(
    p: &Polynomial,
    dividers: &[Entry],
    order: &MonomialOrder,
    budget: &mut Budget,
    track: bool,
) -> Result<(Polynomial, Option<Vec<Polynomial>>)> {
    debug_assert!(!order.is_local());
    let nvars = p.nvars();
    let mut h = p.clone();
    let mut rem = Polynomial::zero(nvars);
    let mut quots = track.then(|| vec![Polynomial::zero(nvars); dividers.len()]);
    'outer: while !h.is_zero() {
        let (lm, lc) = h
            .leading_term(|a, b| order.cmp(a, b))
            .map(|(m, c)| (m.clone(), c.clone()))
            .unwrap();
        for (di, d) in dividers.iter().enumerate() {
            if d.lm.divides(&lm) {
                budget.spend()?;
                let t = d.lm.div_into(&lm);
                h = h.sub(&d.poly.mul_term(&t, &lc));
                if let Some(q) = quots.as_mut() {
                    q[di].add_term(t, lc);
                }
                continue 'outer;
            }
        }
        rem.add_term(lm.clone(), lc.clone());
        h = h.sub(&Polynomial::monomial(lm, lc));
    }
    Ok((rem, quots))
}

/// Finite staircase data of a zero-dimensional leading-term ideal.
#[derive(Debug, Clone)]
pub struct Staircase {
    /// Standard monomials in the canonical basis order: ascending total
    /// degree, descending degrevlex within a degree.
    pub monomials: Vec<Monomial>,
    pub set: HashSet<Monomial>,
}

#[derive(Debug, Clone)]
enum StairState {
    Finite(Staircase),
    Infinite,
}

/// A completed, interreduced standard basis (local order) or Gröbner basis
/// (global order).
#[derive(Debug)]
pub struct StandardBasis {
    order: MonomialOrder,
    generators: Vec<Polynomial>,
    leading: Vec<Monomial>,
    reps: Option<Vec<Vec<Polynomial>>>,
    originals: Vec<Polynomial>,
    config: SbConfig,
    stairs: OnceLock<StairState>,
}

impl StandardBasis {
    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn nvars(&self) -> usize {
        self.order.nvars
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn leading_monomials(&self) -> &[Monomial] {
        &self.leading
    }

    pub fn original_generators(&self) -> &[Polynomial] {
        &self.originals
    }

    fn entries(&self) -> Vec<Entry> {
        self.generators
            .iter()
            .map(|g| make_entry(&self.order, g.clone(), None))
            .collect()
    }

    fn stair_state(&self) -> &StairState {
        self.stairs.get_or_init(|| {
            if self.leading.is_empty() {
                return StairState::Infinite; // zero ideal
            }
            // finite complement iff a pure power of every variable leads
            let nvars = self.nvars();
            let mut bounds = vec![None; nvars];
            for lm in &self.leading {
                if lm.is_one() {
                    return StairState::Finite(Staircase {
                        monomials: Vec::new(),
                        set: HashSet::new(),
                    });
                }
                let nz: Vec<usize> = (0..nvars).filter(|&i| lm.0[i] > 0).collect();
                if nz.len() == 1 {
                    let i = nz[0];
                    let b = lm.0[i];
                    bounds[i] = Some(bounds[i].map_or(b, |old: u32| old.min(b)));
                }
            }
            if bounds.iter().any(|b| b.is_none()) {
                return StairState::Infinite;
            }
            let bounds: Vec<u32> = bounds.into_iter().map(Option::unwrap).collect();
            let mut monomials = Vec::new();
            let mut cur = vec![0u32; nvars];
            'outer: loop {
                let m = Monomial(cur.clone());
                if !self.leading.iter().any(|lm| lm.divides(&m)) {
                    monomials.push(m);
                }
                // odometer over the box below the pure-power bounds
                for i in 0..nvars {
                    cur[i] += 1;
                    if cur[i] < bounds[i] {
                        continue 'outer;
                    }
                    cur[i] = 0;
                }
                break;
            }
            monomials.sort_by(|a, b| {
                a.degree()
                    .cmp(&b.degree())
                    .then_with(|| cmp_degrevlex(b, a))
            });
            let set = monomials.iter().cloned().collect();
            StairState::Finite(Staircase { monomials, set })
        })
    }

    /// The monomials outside the leading-term ideal, in graded order. Their
    /// count is the vector-space dimension of the quotient.
    pub fn standard_monomials(&self) -> Result<&[Monomial]> {
        match self.stair_state() {
            StairState::Finite(s) => Ok(&s.monomials),
            StairState::Infinite => Err(Error::InfiniteDimensional),
        }
    }

    /// Mora weak normal form: the remainder of `u * p` for some unit `u`.
    pub fn weak_normal_form(&self, p: &Polynomial) -> Result<Polynomial> {
        let mut budget = Budget::new(self.config.max_reductions);
        Ok(weak_nf(p, &self.entries(), &self.order, &mut budget, false)?.remainder)
    }

    /// Canonical normal form: the unique representative supported on the
    /// standard monomials.
    ///
    /// Global orders use ordinary full reduction. Local orders require a
    /// finite staircase (the quotient must be a finite-dimensional local
    /// algebra); for an infinite staircase the Mora weak normal form is
    /// returned instead, whose leading term is already irreducible.
    pub fn normal_form(&self, p: &Polynomial) -> Result<Polynomial> {
        if !self.order.is_local() {
            return self.full_nf_global(p);
        }
        match self.stair_state() {
            StairState::Finite(_) => Ok(self.local_canonical_nf(p)),
            StairState::Infinite => self.weak_normal_form(p),
        }
    }

    fn full_nf_global(&self, p: &Polynomial) -> Result<Polynomial> {
        let mut budget = Budget::new(self.config.max_reductions);
        Ok(full_division(p, &self.entries(), &self.order, &mut budget, false)?.0)
    }

    /// Rewrites `p` over the standard monomials. All terms of total degree
    /// >= dim are dropped (they lie in the localized ideal); each remaining
    /// non-standard term is replaced through a basis element, which only
    /// introduces strictly order-smaller terms, so the loop terminates.
    fn local_canonical_nf(&self, p: &Polynomial) -> Polynomial {
        let stairs = match self.stair_state() {
            StairState::Finite(s) => s,
            StairState::Infinite => unreachable!("caller checked finiteness"),
        };
        let cutoff = stairs.monomials.len() as u32;
        let nvars = self.nvars();
        let truncate = |q: &Polynomial| -> Polynomial {
            Polynomial::from_terms(
                nvars,
                q.terms()
                    .filter(|(m, _)| m.degree() < cutoff)
                    .map(|(m, c)| (m.clone(), c.clone())),
            )
        };
        let mut h = truncate(p);
        loop {
            let target = h
                .terms()
                .filter(|(m, _)| !stairs.set.contains(*m))
                .max_by(|(a, _), (b, _)| self.order.cmp(a, b))
                .map(|(m, c)| (m.clone(), c.clone()));
            let Some((m, c)) = target else {
                return h;
            };
            let gi = self
                .leading
                .iter()
                .position(|lm| lm.divides(&m))
                .expect("non-standard monomial must be reducible");
            let t = self.leading[gi].div_into(&m);
            h = truncate(&h.sub(&self.generators[gi].mul_term(&t, &c)));
        }
    }

    /// Ideal membership test via the weak normal form.
    pub fn contains(&self, p: &Polynomial) -> Result<bool> {
        Ok(self.weak_normal_form(p)?.is_zero())
    }

    /// Expresses `p` over the *original* generators:
    /// `unit * p = sum quotients[i] * original[i] + remainder`,
    /// with `unit` a unit of the local ring (identically 1 for global
    /// orders). Requires a basis built with tracking enabled.
    pub fn divide_tracked(&self, p: &Polynomial) -> Result<Division> {
        let reps = self
            .reps
            .as_ref()
            .expect("divide_tracked requires a tracked basis");
        let mut budget = Budget::new(self.config.max_reductions);
        let out = weak_nf(p, &self.entries(), &self.order, &mut budget, true)?;
        let unit = out.unit.unwrap();
        let quots_on_basis = out.quotients.unwrap();
        let n = self.originals.len();
        let mut on_originals = vec![Polynomial::zero(self.nvars()); n];
        for (q, rep) in quots_on_basis.iter().zip(reps) {
            if q.is_zero() {
                continue;
            }
            for (acc, r) in on_originals.iter_mut().zip(rep) {
                *acc = acc.add(&q.mul(r));
            }
        }
        Ok(Division {
            unit,
            quotients: on_originals,
            remainder: out.remainder,
        })
    }
}

/// `unit * p = sum quotients[i] * gens[i] + remainder`.
#[derive(Debug, Clone)]
pub struct Division {
    pub unit: Polynomial,
    pub quotients: Vec<Polynomial>,
    pub remainder: Polynomial,
}

fn spoly(a: &Entry, b: &Entry) -> (Polynomial, Option<(Monomial, Monomial)>) {
    let lcm = a.lm.lcm(&b.lm);
    let ta = a.lm.div_into(&lcm);
    let tb = b.lm.div_into(&lcm);
    let one = Rat::one();
    (
        a.poly.mul_term(&ta, &one).sub(&b.poly.mul_term(&tb, &one)),
        Some((ta, tb)),
    )
}

/// Completes `gens` to a standard basis under `order`.
pub fn standard_basis(gens: &[Polynomial], order: MonomialOrder) -> Result<StandardBasis> {
    standard_basis_with(gens, order, SbConfig::default(), false)
}

/// Completion with representation tracking: every basis element records an
/// exact polynomial combination of the original generators, enabling
/// `divide_tracked`.
pub fn standard_basis_tracked(gens: &[Polynomial], order: MonomialOrder) -> Result<StandardBasis> {
    standard_basis_with(gens, order, SbConfig::default(), true)
}

pub fn standard_basis_with(
    gens: &[Polynomial],
    order: MonomialOrder,
    config: SbConfig,
    track: bool,
) -> Result<StandardBasis> {
    assert!(!gens.is_empty(), "generator list must be nonempty");
    let nvars = order.nvars;
    assert!(
        gens.iter().all(|g| g.nvars() == nvars),
        "generators must share the variable count"
    );
    let originals = gens.to_vec();
    let mut budget = Budget::new(config.max_reductions);

    let mut entries: Vec<Entry> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let rep = track.then(|| {
            let mut r = vec![Polynomial::zero(nvars); gens.len()];
            r[i] = Polynomial::one(nvars);
            r
        });
        entries.push(make_entry(&order, g.clone(), rep));
    }

    // pair queue ordered by lcm degree, then insertion indices
    let mut pairs: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
    for i in 0..entries.len() {
        for j in 0..i {
            pairs.insert((entries[i].lm.lcm(&entries[j].lm).degree(), j, i));
        }
    }

    while let Some(&(d, i, j)) = pairs.iter().next() {
        pairs.remove(&(d, i, j));
        if entries[i].lm.coprime(&entries[j].lm) {
            continue; // product criterion
        }
        let (s, mults) = spoly(&entries[i], &entries[j]);
        if s.is_zero() {
            continue;
        }
        let out = weak_nf(&s, &entries, &order, &mut budget, track)?;
        if out.remainder.is_zero() {
            continue;
        }
        let rep = if track {
            let (ta, tb) = mults.unwrap();
            let one = Rat::one();
            // rep(s) from the pair, then rem = unit * s - sum q * entry
            let rep_i = entries[i].rep.as_ref().unwrap();
            let rep_j = entries[j].rep.as_ref().unwrap();
            let mut rep_s: Vec<Polynomial> = rep_i
                .iter()
                .zip(rep_j)
                .map(|(a, b)| a.mul_term(&ta, &one).sub(&b.mul_term(&tb, &one)))
                .collect();
            let unit = out.unit.as_ref().unwrap();
            let quots = out.quotients.as_ref().unwrap();
            for r in rep_s.iter_mut() {
                *r = unit.mul(r);
            }
            for (q, e) in quots.iter().zip(&entries) {
                if q.is_zero() {
                    continue;
                }
                let erep = e.rep.as_ref().unwrap();
                for (r, er) in rep_s.iter_mut().zip(erep) {
                    *r = r.sub(&q.mul(er));
                }
            }
            Some(rep_s)
        } else {
            None
        };
        let entry = make_entry(&order, out.remainder, rep);
        let new_idx = entries.len();
        for k in 0..new_idx {
            pairs.insert((entries[k].lm.lcm(&entry.lm).degree(), k, new_idx));
        }
        entries.push(entry);
    }

    // minimalize: drop entries whose leading monomial is divisible by the
    // leading monomial of another kept entry
    let mut order_idx: Vec<usize> = (0..entries.len()).collect();
    order_idx.sort_by_key(|&i| (entries[i].lm.degree(), i));
    let mut kept: Vec<usize> = Vec::new();
    for &i in &order_idx {
        if !kept.iter().any(|&k| entries[k].lm.divides(&entries[i].lm)) {
            kept.push(i);
        }
    }
    let mut basis: Vec<Entry> = kept.into_iter().map(|i| entries[i].clone()).collect();

    // tail reduction: safe under a global order, skipped for local orders
    // where it need not terminate
    if !order.is_local() {
        for i in 0..basis.len() {
            let others: Vec<Entry> = basis
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, e)| e.clone())
                .collect();
            if others.is_empty() {
                break;
            }
            let (rem, quots) = full_division(&basis[i].poly, &others, &order, &mut budget, track)?;
            if rem.is_zero() {
                continue; // redundant generator would have been minimalized away
            }
            let rep = if track {
                let quots = quots.as_ref().unwrap();
                let mut rep: Vec<Polynomial> = basis[i].rep.as_ref().unwrap().clone();
                for (q, e) in quots.iter().zip(&others) {
                    if q.is_zero() {
                        continue;
                    }
                    for (r, er) in rep.iter_mut().zip(e.rep.as_ref().unwrap()) {
                        *r = r.sub(&q.mul(er));
                    }
                }
                Some(rep)
            } else {
                None
            };
            basis[i] = make_entry(&order, rem, rep);
        }
    }

    basis.sort_by(|a, b| order.cmp(&b.lm, &a.lm));
    let leading = basis.iter().map(|e| e.lm.clone()).collect();
    let reps = track.then(|| basis.iter().map(|e| e.rep.clone().unwrap()).collect());
    let generators = basis.into_iter().map(|e| e.poly).collect();
    Ok(StandardBasis {
        order,
        generators,
        leading,
        reps,
        originals,
        config,
        stairs: OnceLock::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly;
    use num_traits::Zero;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn polys(texts: &[&str], v: &[String]) -> Vec<Polynomial> {
        texts.iter().map(|t| parse_poly(t, v).unwrap()).collect()
    }

    fn lm_strings(basis: &StandardBasis, v: &[String]) -> Vec<String> {
        basis
            .leading_monomials()
            .iter()
            .map(|m| Polynomial::monomial(m.clone(), Rat::one()).render(v))
            .collect()
    }

    #[test]
    fn monomial_ideal_is_its_own_basis() {
        let v = vars(&["x", "y"]);
        let b = standard_basis(&polys(&["2*x", "2*y"], &v), MonomialOrder::local(2)).unwrap();
        let mut lms = lm_strings(&b, &v);
        lms.sort();
        assert_eq!(lms, vec!["x", "y"]);
        assert_eq!(b.standard_monomials().unwrap().len(), 1);
    }

    #[test]
    fn cusp_gradient_basis() {
        let v = vars(&["x", "y"]);
        let b = standard_basis(&polys(&["3*x^2", "-2*y"], &v), MonomialOrder::local(2)).unwrap();
        let mut lms = lm_strings(&b, &v);
        lms.sort();
        assert_eq!(lms, vec!["x^2", "y"]);
        let stairs = b.standard_monomials().unwrap();
        assert_eq!(stairs.len(), 2); // {1, x}
    }

    #[test]
    fn three_generator_monomial_basis() {
        let v = vars(&["x", "y"]);
        let b = standard_basis(
            &polys(&["x^2", "x*y^2", "y^3"], &v),
            MonomialOrder::local(2),
        )
        .unwrap();
        let mut lms = lm_strings(&b, &v);
        lms.sort();
        assert_eq!(lms, vec!["x*y^2", "x^2", "y^3"]);
        assert_eq!(b.standard_monomials().unwrap().len(), 5);
    }

    #[test]
    fn staircase_of_x2_y3() {
        let v = vars(&["x", "y"]);
        let b = standard_basis(&polys(&["x^2", "y^3"], &v), MonomialOrder::local(2)).unwrap();
        let stairs = b.standard_monomials().unwrap();
        let rendered: Vec<String> = stairs
            .iter()
            .map(|m| Polynomial::monomial(m.clone(), Rat::one()).render(&v))
            .collect();
        assert_eq!(rendered, vec!["1", "x", "y", "x*y", "y^2", "x*y^2"]);
    }

    #[test]
    fn open_staircase_is_infinite() {
        let v = vars(&["x", "y"]);
        let b = standard_basis(&polys(&["x^2"], &v), MonomialOrder::local(2)).unwrap();
        assert_eq!(
            b.standard_monomials().err(),
            Some(Error::InfiniteDimensional)
        );
    }

    #[test]
    fn normal_form_examples() {
        let v = vars(&["x", "y"]);
        let b = standard_basis(&polys(&["x^2", "y"], &v), MonomialOrder::local(2)).unwrap();
        assert!(b
            .normal_form(&parse_poly("x^3", &v).unwrap())
            .unwrap()
            .is_zero());
        assert_eq!(
            b.normal_form(&parse_poly("5 + x + x^2", &v).unwrap())
                .unwrap(),
            parse_poly("5 + x", &v).unwrap()
        );

        let v3 = vars(&["x", "y", "z"]);
        let grad = standard_basis(
            &polys(&["2*x", "2*y", "-2*z"], &v3),
            MonomialOrder::local(3),
        )
        .unwrap();
        assert!(grad
            .normal_form(&parse_poly("x^2+y^2-z^2", &v3).unwrap())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn mora_self_reduction_handles_unit_twist() {
        // x - x^2 generates (x) in the local ring; plain division would loop
        let v = vars(&["x"]);
        let b = standard_basis(&polys(&["x - x^2"], &v), MonomialOrder::local(1)).unwrap();
        assert!(b
            .weak_normal_form(&parse_poly("x", &v).unwrap())
            .unwrap()
            .is_zero());
        assert_eq!(b.standard_monomials().unwrap().len(), 1);
        assert_eq!(
            b.normal_form(&parse_poly("5 + x", &v).unwrap()).unwrap(),
            parse_poly("5", &v).unwrap()
        );
    }

    #[test]
    fn budget_is_enforced() {
        let v = vars(&["x", "y"]);
        let tiny = SbConfig { max_reductions: 1 };
        let gens = polys(&["x^3 - y^2 + x^4", "y^3 - x^5 + y^4"], &v);
        let r = standard_basis_with(&gens, MonomialOrder::local(2), tiny, false);
        assert!(matches!(r, Err(Error::BudgetExceeded(1))));
    }

    #[test]
    fn tracked_division_reconstructs_membership() {
        let v = vars(&["x", "y"]);
        let gens = polys(&["x^2 - y^3", "y^4"], &v);
        let b = standard_basis_tracked(&gens, MonomialOrder::local(2)).unwrap();
        let p = parse_poly("x^2*y - y^4", &v).unwrap();
        let d = b.divide_tracked(&p).unwrap();
        // unit * p - sum q_i g_i == remainder, and the unit is a unit
        let mut lhs = d.unit.mul(&p);
        for (q, g) in d.quotients.iter().zip(&gens) {
            lhs = lhs.sub(&q.mul(g));
        }
        assert_eq!(lhs, d.remainder);
        assert!(!d.unit.constant_term().is_zero());
    }

    #[test]
    fn global_order_gives_reduced_groebner_basis() {
        let v = vars(&["x", "y"]);
        let gens = polys(&["x^2 + y", "y"], &v);
        let b = standard_basis(&gens, MonomialOrder::global(2)).unwrap();
        let mut lms = lm_strings(&b, &v);
        lms.sort();
        assert_eq!(lms, vec!["x^2", "y"]);
        // tails are fully reduced: x^2 + y reduces to x^2
        assert!(b
            .generators()
            .iter()
            .any(|g| g == &parse_poly("x^2", &v).unwrap()));
        assert_eq!(b.standard_monomials().unwrap().len(), 2);
    }
}
