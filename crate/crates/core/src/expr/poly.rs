use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::monomial::{cmp_grlex, Monomial};

/// Exact rational scalar used throughout the engine.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational as `p` or `p/q`.
pub fn render_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in a map ordered by graded lex; zero coefficients are
/// never stored. All operations are pure and return new values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Polynomial::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Polynomial::constant(nvars, Rat::one())
    }

    pub fn var(index: usize, nvars: usize) -> Self {
        assert!(index < nvars);
        let mut p = Polynomial::zero(nvars);
        p.terms.insert(Monomial::var(index, nvars), Rat::one());
        p
    }

    pub fn monomial(m: Monomial, c: Rat) -> Self {
        let mut p = Polynomial::zero(m.nvars());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, it: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = Polynomial::zero(nvars);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// Maximum total degree among terms; zero polynomial reports 0.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Minimum total degree among terms (the order of vanishing at 0).
    pub fn min_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).min().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Multiply by a single term `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m.mul(m2), c * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut out = Polynomial::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        loop {
            if k & 1 == 1 {
                out = out.mul(&base);
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.mul(&base);
        }
        out
    }

    /// Formal partial derivative with respect to variable `index`.
    pub fn derivative(&self, index: usize) -> Polynomial {
        assert!(index < self.nvars);
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[index];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[index] = e - 1;
            out.add_term(Monomial(exps), c * Rat::from_integer(BigInt::from(e)));
        }
        out
    }

    /// Evaluate at a rational point.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= &point[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitute a rational value for variable `index` and drop that
    /// variable from the ring (the result has one variable fewer).
    pub fn eval_var(&self, index: usize, value: &Rat) -> Polynomial {
        assert!(index < self.nvars);
        let mut out = Polynomial::zero(self.nvars - 1);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for _ in 0..m.0[index] {
                t *= value;
            }
            let mut exps = m.0.clone();
            exps.remove(index);
            out.add_term(Monomial(exps), t);
        }
        out
    }

    /// Leading monomial with respect to a comparator (largest term).
    pub fn leading_monomial(
        &self,
        cmp: impl Fn(&Monomial, &Monomial) -> Ordering,
    ) -> Option<&Monomial> {
        self.terms.keys().max_by(|a, b| cmp(a, b))
    }

    pub fn leading_term(
        &self,
        cmp: impl Fn(&Monomial, &Monomial) -> Ordering,
    ) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().max_by(|(a, _), (b, _)| cmp(a, b))
    }

    /// Exact division by `divisor`: returns `Some(q)` with `self = q * divisor`
    /// when the division leaves no remainder, `None` otherwise. Reduction runs
    /// under the global graded-lex order, so divisibility by a single
    /// polynomial is decided independently of order choices.
    pub fn exact_div(&self, divisor: &Polynomial) -> Option<Polynomial> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        debug_assert_eq!(self.nvars, divisor.nvars);
        let (dm, dc) = divisor.leading_term(cmp_grlex).expect("nonzero divisor");
        let dm = dm.clone();
        let dc = dc.clone();
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(self.nvars);
        while let Some((lm, lc)) = rem.leading_term(cmp_grlex) {
            if !dm.divides(lm) {
                return None;
            }
            let qm = dm.div_into(lm);
            let qc = lc / &dc;
            quot.add_term(qm.clone(), qc.clone());
            rem = rem.sub(&divisor.mul_term(&qm, &qc));
        }
        Some(quot)
    }

    /// Renders the polynomial with the given variable names, terms in
    /// descending graded-lex order, exact `p/q` coefficients.
    pub fn render(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(render_rat(&abs));
            }
            for (v, &e) in m.0.iter().enumerate() {
                if e == 1 {
                    factors.push(names[v].clone());
                } else if e > 1 {
                    factors.push(format!("{}^{}", names[v], e));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    fn default_names(&self) -> Vec<String> {
        match self.nvars {
            1 => vec!["x".into()],
            2 => vec!["x".into(), "y".into()],
            3 => vec!["x".into(), "y".into(), "z".into()],
            n => (0..n).map(|i| format!("x{}", i)).collect(),
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&self.default_names()))
    }
}

/// A vector field: one polynomial component per variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorField {
    pub components: Vec<Polynomial>,
}

impl VectorField {
    pub fn new(components: Vec<Polynomial>) -> Self {
        assert!(!components.is_empty());
        let n = components[0].nvars();
        assert!(
            components.iter().all(|c| c.nvars() == n),
            "all components must share the variable count"
        );
        VectorField { components }
    }

    pub fn nvars(&self) -> usize {
        self.components[0].nvars()
    }

    pub fn neg(&self) -> VectorField {
        VectorField::new(self.components.iter().map(|c| c.neg()).collect())
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        assert_eq!(self.components.len(), other.components.len());
        VectorField::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.add(b))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rat) -> VectorField {
        VectorField::new(self.components.iter().map(|p| p.scale(c)).collect())
    }

    /// The derivative X(f) = sum_i X^i * df/dx_i.
    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars());
        for (i, comp) in self.components.iter().enumerate() {
            out = out.add(&comp.mul(&f.derivative(i)));
        }
        out
    }
}
