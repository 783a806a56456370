//! Dense univariate polynomials over the rationals with Sturm-sequence real
//! root isolation. Used by the plane-curve oracle to pin down the boundary
//! intersection points exactly.

use num_traits::{One, Signed, Zero};

use crate::expr::{Polynomial, Rat};

/// Coefficients in ascending degree order, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly(pub Vec<Rat>);

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly(Vec::new())
    }

    pub fn normalize(mut c: Vec<Rat>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UniPoly(c)
    }

    /// Conversion from a one-variable sparse polynomial.
    pub fn from_poly(p: &Polynomial) -> Self {
        assert_eq!(p.nvars(), 1);
        let deg = p.total_degree() as usize;
        let mut c = vec![Rat::zero(); deg + 1];
        for (m, coeff) in p.terms() {
            c[m.0[0] as usize] = coeff.clone();
        }
        UniPoly::normalize(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        if self.0.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::normalize(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly(self.0.iter().map(|c| -c.clone()).collect())
    }

    pub fn scale(&self, k: &Rat) -> UniPoly {
        if k.is_zero() {
            return UniPoly::zero();
        }
        UniPoly(self.0.iter().map(|c| c * k).collect())
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let lead = self.0.last().unwrap().clone();
        self.scale(&(Rat::one() / lead))
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.0.len().max(other.0.len());
        let mut c = vec![Rat::zero(); n];
        for (i, v) in self.0.iter().enumerate() {
            c[i] += v;
        }
        for (i, v) in other.0.iter().enumerate() {
            c[i] += v;
        }
        UniPoly::normalize(c)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut c = vec![Rat::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        UniPoly::normalize(c)
    }

    /// Euclidean division: (quotient, remainder).
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.degree() < d.degree() || self.is_zero() {
            return (UniPoly::zero(), self.clone());
        }
        let mut rem = self.0.clone();
        let dd = d.degree();
        let lead = d.0[dd].clone();
        let mut quot = vec![Rat::zero(); self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            quot[k] = c.clone();
            for (i, dc) in d.0.iter().enumerate() {
                let sub = dc * &c;
                rem[k + i] -= sub;
            }
        }
        (UniPoly::normalize(quot), UniPoly::normalize(rem))
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// p / gcd(p, p'): same real roots, all simple.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.is_zero() || self.degree() == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.clone();
        }
        self.div_rem(&g).0
    }
}

/// Sturm chain of a squarefree polynomial.
pub fn sturm_chain(p: &UniPoly) -> Vec<UniPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    while !chain.last().unwrap().is_zero() {
        let n = chain.len();
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(r.neg());
    }
    chain
}

fn sign_variations(chain: &[UniPoly], x: &Rat) -> usize {
    let mut last: Option<bool> = None;
    let mut v = 0;
    for p in chain {
        let val = p.eval(x);
        if val.is_zero() {
            continue;
        }
        let s = val.is_positive();
        if let Some(prev) = last {
            if prev != s {
                v += 1;
            }
        }
        last = Some(s);
    }
    v
}

/// Number of distinct real roots of the (squarefree) chain head in (lo, hi];
/// standard Sturm count. Endpoints must not be roots for the usual
/// open-interval reading; callers arrange that.
pub fn count_roots(chain: &[UniPoly], lo: &Rat, hi: &Rat) -> usize {
    sign_variations(chain, lo) - sign_variations(chain, hi)
}

/// Location of one real root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootLoc {
    Exact(Rat),
    /// open interval with a sign change of the squarefree polynomial
    Bracket(Rat, Rat),
}

/// Isolates all real roots of `p` inside [lo, hi] (inclusive). `p` need not
/// be squarefree; isolation runs on its squarefree part. Returned locations
/// are sorted and pairwise disjoint.
pub fn isolate_roots(p: &UniPoly, lo: &Rat, hi: &Rat) -> Vec<RootLoc> {
    assert!(!p.is_zero(), "cannot isolate roots of the zero polynomial");
    let sf = p.squarefree_part();
    if sf.degree() == 0 {
        return Vec::new();
    }
    let chain = sturm_chain(&sf);
    let mut out = Vec::new();
    // exact endpoint roots are recorded and then excluded from the interior
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    if sf.eval(&lo).is_zero() {
        out.push(RootLoc::Exact(lo.clone()));
        lo = nudge_off_root(&sf, &lo, true);
    }
    if sf.eval(&hi).is_zero() {
        out.push(RootLoc::Exact(hi.clone()));
        hi = nudge_off_root(&sf, &hi, false);
    }
    if lo < hi {
        subdivide(&sf, &chain, &lo, &hi, &mut out);
    }
    out.sort_by(|a, b| root_key(a).cmp(&root_key(b)));
    out
}

fn root_key(r: &RootLoc) -> Rat {
    match r {
        RootLoc::Exact(x) => x.clone(),
        RootLoc::Bracket(a, b) => (a + b) / Rat::from_integer(2.into()),
    }
}

/// Moves an endpoint off a root by stepping inward in halving increments
/// until the polynomial is nonzero and no root was skipped.
fn nudge_off_root(sf: &UniPoly, x: &Rat, upward: bool) -> Rat {
    let chain = sturm_chain(sf);
    let mut step = Rat::new(1.into(), 2.into());
    loop {
        let candidate = if upward { x + &step } else { x - &step };
        if !sf.eval(&candidate).is_zero() {
            // ensure no other root sits between x and the candidate
            let (a, b) = if upward {
                (x.clone(), candidate.clone())
            } else {
                (candidate.clone(), x.clone())
            };
            // count roots strictly inside (a, b): both endpoints are either
            // the root itself (excluded by the (lo, hi] convention on the
            // proper side) or non-roots
            let interior = if upward {
                count_roots(&chain, &a, &b)
            } else {
                count_roots(&chain, &a, &b).saturating_sub(1)
            };
            if interior == 0 {
                return candidate;
            }
        }
        step /= Rat::from_integer(2.into());
    }
}

fn subdivide(sf: &UniPoly, chain: &[UniPoly], lo: &Rat, hi: &Rat, out: &mut Vec<RootLoc>) {
    let n = count_roots(chain, lo, hi);
    if n == 0 {
        return;
    }
    if n == 1 {
        out.push(RootLoc::Bracket(lo.clone(), hi.clone()));
        return;
    }
    let mid = (lo + hi) / Rat::from_integer(2.into());
    if sf.eval(&mid).is_zero() {
        out.push(RootLoc::Exact(mid.clone()));
        let lo2 = nudge_between(sf, chain, lo, &mid);
        let hi2 = nudge_between_upper(sf, chain, &mid, hi);
        subdivide(sf, chain, lo, &lo2, out);
        subdivide(sf, chain, &hi2, hi, out);
    } else {
        subdivide(sf, chain, lo, &mid, out);
        subdivide(sf, chain, &mid, hi, out);
    }
}

/// A point just below `root` in (lo, root) that is not itself a root and
/// has no root between it and `root` other than `root`.
fn nudge_between(sf: &UniPoly, chain: &[UniPoly], lo: &Rat, root: &Rat) -> Rat {
    let mut cand = (lo + root) / Rat::from_integer(2.into());
    loop {
        if !sf.eval(&cand).is_zero() && count_roots(chain, &cand, root) == 1 {
            return cand;
        }
        cand = (&cand + root) / Rat::from_integer(2.into());
    }
}

fn nudge_between_upper(sf: &UniPoly, chain: &[UniPoly], root: &Rat, hi: &Rat) -> Rat {
    let mut cand = (root + hi) / Rat::from_integer(2.into());
    loop {
        // (root, cand] excludes the root itself, so no further root may appear
        if !sf.eval(&cand).is_zero() && count_roots(chain, root, &cand) == 0 {
            return cand;
        }
        cand = (root + &cand) / Rat::from_integer(2.into());
    }
}

/// Halves a bracket while keeping exactly one root inside. Returns the new
/// bracket (or an exact hit).
pub fn refine_bracket(sf: &UniPoly, lo: &Rat, hi: &Rat) -> RootLoc {
    let mid = (lo + hi) / Rat::from_integer(2.into());
    let fm = sf.eval(&mid);
    if fm.is_zero() {
        return RootLoc::Exact(mid);
    }
    let flo = sf.eval(lo);
    if flo.is_positive() != fm.is_positive() {
        RootLoc::Bracket(lo.clone(), mid)
    } else {
        RootLoc::Bracket(mid, hi.clone())
    }
}

/// Certified sign of `q` at the root of `sf` located by `loc`. Refines the
/// bracket until the interval evaluation of `q` excludes zero, or detects
/// that the root is a common root of `sf` and `q` (sign zero) through the
/// gcd. `sf` must be squarefree.
pub fn sign_at_root(sf: &UniPoly, q: &UniPoly, loc: &RootLoc) -> i8 {
    match loc {
        RootLoc::Exact(x) => {
            let v = q.eval(x);
            if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            }
        }
        RootLoc::Bracket(lo, hi) => {
            if q.is_zero() {
                return 0;
            }
            // does q vanish at this root? check whether gcd(sf, q) has the root
            let g = sf.gcd(q);
            if g.degree() >= 1 {
                let chain = sturm_chain(&g);
                if g.eval(lo).is_zero() || g.eval(hi).is_zero() || count_roots(&chain, lo, hi) > 0 {
                    // the bracket isolates a root of sf; if g vanishes in it,
                    // that root is shared, so q is zero there
                    return 0;
                }
            }
            let mut cur = RootLoc::Bracket(lo.clone(), hi.clone());
            loop {
                match &cur {
                    RootLoc::Exact(x) => return sign_at_root(sf, q, &RootLoc::Exact(x.clone())),
                    RootLoc::Bracket(a, b) => {
                        let iv = super::interval::QInterval::new(a.clone(), b.clone());
                        let bounds = eval_interval(q, &iv);
                        if let Some(s) = bounds.sign() {
                            return s;
                        }
                        cur = refine_bracket(sf, a, b);
                    }
                }
            }
        }
    }
}

/// Interval evaluation of a univariate polynomial by Horner with interval
/// arithmetic.
pub fn eval_interval(p: &UniPoly, x: &super::interval::QInterval) -> super::interval::QInterval {
    use super::interval::QInterval;
    let mut acc = QInterval::zero();
    for c in p.0.iter().rev() {
        acc = acc.mul(x).add(&QInterval::point(c.clone()));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{rat, rat_frac};

    fn up(coeffs: &[i64]) -> UniPoly {
        UniPoly::normalize(coeffs.iter().map(|&c| rat(c)).collect())
    }

    #[test]
    fn division_round_trip() {
        // (x^2 - 1) = (x - 1)(x + 1)
        let p = up(&[-1, 0, 1]);
        let d = up(&[-1, 1]);
        let (q, r) = p.div_rem(&d);
        assert!(r.is_zero());
        assert_eq!(q, up(&[1, 1]));
    }

    #[test]
    fn gcd_and_squarefree() {
        // p = (x-1)^2 (x+2)
        let p = up(&[2, -3, 0, 1]);
        let sf = p.squarefree_part();
        assert_eq!(sf.degree(), 2);
        assert!(sf.eval(&rat(1)).is_zero());
        assert!(sf.eval(&rat(-2)).is_zero());
    }

    #[test]
    fn isolates_three_roots() {
        // x^3 - x/4 = x (x - 1/2)(x + 1/2)
        let p = UniPoly::normalize(vec![rat(0), rat_frac(-1, 4), rat(0), rat(1)]);
        let roots = isolate_roots(&p, &rat(-1), &rat(1));
        assert_eq!(roots.len(), 3);
        // middle root should be locatable at 0
        let found_zero = roots.iter().any(|r| match r {
            RootLoc::Exact(x) => x.is_zero(),
            RootLoc::Bracket(a, b) => a.is_negative() && b.is_positive(),
        });
        assert!(found_zero);
    }

    #[test]
    fn endpoint_roots_are_reported_exactly() {
        // x^2 - 1 on [-1, 1]: both endpoints are roots
        let p = up(&[-1, 0, 1]);
        let roots = isolate_roots(&p, &rat(-1), &rat(1));
        assert_eq!(roots.len(), 2);
        assert!(matches!(&roots[0], RootLoc::Exact(x) if *x == rat(-1)));
        assert!(matches!(&roots[1], RootLoc::Exact(x) if *x == rat(1)));
    }

    #[test]
    fn sign_at_algebraic_root() {
        // root of x^2 - 2 in (1, 2); sign of x - 1 there is +, of x - 3 is -
        let sf = up(&[-2, 0, 1]);
        let roots = isolate_roots(&sf, &rat(0), &rat(2));
        assert_eq!(roots.len(), 1);
        assert_eq!(sign_at_root(&sf, &up(&[-1, 1]), &roots[0]), 1);
        assert_eq!(sign_at_root(&sf, &up(&[-3, 1]), &roots[0]), -1);
        // q sharing the root: sign 0
        assert_eq!(sign_at_root(&sf, &sf, &roots[0]), 0);
    }
}
