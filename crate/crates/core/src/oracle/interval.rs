//! Exact rational interval arithmetic: the sign-certificate workhorse for
//! the degree and curve oracles. Bounds are closed rational intervals with
//! outward rounding only in the square-root helper.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::expr::{Polynomial, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl QInterval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        debug_assert!(lo <= hi);
        QInterval { lo, hi }
    }

    pub fn point(v: Rat) -> Self {
        QInterval {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn zero() -> Self {
        QInterval::point(Rat::zero())
    }

    pub fn add(&self, other: &QInterval) -> QInterval {
        QInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn neg(&self) -> QInterval {
        QInterval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    pub fn sub(&self, other: &QInterval) -> QInterval {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &QInterval) -> QInterval {
        let candidates = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let mut lo = candidates[0].clone();
        let mut hi = candidates[0].clone();
        for c in &candidates[1..] {
            if *c < lo {
                lo = c.clone();
            }
            if *c > hi {
                hi = c.clone();
            }
        }
        QInterval { lo, hi }
    }

    pub fn scale(&self, c: &Rat) -> QInterval {
        if c.is_negative() {
            QInterval {
                lo: &self.hi * c,
                hi: &self.lo * c,
            }
        } else {
            QInterval {
                lo: &self.lo * c,
                hi: &self.hi * c,
            }
        }
    }

    pub fn pow(&self, k: u32) -> QInterval {
        if k == 0 {
            return QInterval::point(Rat::one());
        }
        let plo = pow_rat(&self.lo, k);
        let phi = pow_rat(&self.hi, k);
        if k % 2 == 1 {
            QInterval { lo: plo, hi: phi }
        } else if !self.lo.is_negative() {
            QInterval { lo: plo, hi: phi }
        } else if !self.hi.is_positive() {
            QInterval { lo: phi, hi: plo }
        } else {
            QInterval {
                lo: Rat::zero(),
                hi: plo.max(phi),
            }
        }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Certified sign: +1 or -1 when the interval excludes zero.
    pub fn sign(&self) -> Option<i8> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else {
            None
        }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / Rat::from_integer(BigInt::from(2))
    }
}

fn pow_rat(r: &Rat, k: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..k {
        acc *= r;
    }
    acc
}

/// Interval evaluation of a polynomial over a box, term by term.
pub fn eval_on_box(p: &Polynomial, boxi: &[QInterval]) -> QInterval {
    assert_eq!(p.nvars(), boxi.len());
    let mut acc = QInterval::zero();
    for (m, c) in p.terms() {
        let mut t = QInterval::point(Rat::one());
        for (i, &e) in m.0.iter().enumerate() {
            if e > 0 {
                t = t.mul(&boxi[i].pow(e));
            }
        }
        acc = acc.add(&t.scale(c));
    }
    acc
}

/// Rational lower bound on sqrt(r) for r >= 0, accurate to `bits`
/// fractional binary digits.
pub fn sqrt_lower(r: &Rat, bits: u32) -> Rat {
    assert!(!r.is_negative());
    if r.is_zero() {
        return Rat::zero();
    }
    let scale = BigInt::one() << (2 * bits);
    let scaled = r.numer() * r.denom() * &scale;
    let root = scaled.sqrt();
    Rat::new(root, r.denom() * (BigInt::one() << bits))
}

/// Rational upper bound on sqrt(r) for r >= 0.
pub fn sqrt_upper(r: &Rat, bits: u32) -> Rat {
    assert!(!r.is_negative());
    if r.is_zero() {
        return Rat::zero();
    }
    let scale = BigInt::one() << (2 * bits);
    let scaled = r.numer() * r.denom() * &scale;
    let root = scaled.sqrt() + BigInt::one();
    Rat::new(root, r.denom() * (BigInt::one() << bits))
}

/// Outward-rounded sqrt of a nonnegative interval.
pub fn sqrt_interval(x: &QInterval, bits: u32) -> QInterval {
    let lo = if x.lo.is_negative() {
        Rat::zero()
    } else {
        sqrt_lower(&x.lo, bits)
    };
    QInterval {
        lo,
        hi: sqrt_upper(&x.hi, bits),
    }
}
