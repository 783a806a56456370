//! Bilinear forms on local algebras and their exact signatures: the
//! socle-positive functional, Gram matrices of weighted multiplication
//! forms, inertia by symmetric congruence diagonalization, and division
//! inside an algebra for the higher relative forms.

use num_traits::{One, Signed, Zero};

use crate::algebra::{AlgebraElement, QuotientAlgebra, Subspace};
use crate::error::{Error, Result};
use crate::expr::{Polynomial, Rat};
use crate::linalg::QMat;

/// A linear functional on an algebra, stored as one coefficient per basis
/// monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Functional {
    pub coeffs: Vec<Rat>,
}

impl Functional {
    pub fn apply(&self, e: &AlgebraElement) -> Rat {
        assert_eq!(self.coeffs.len(), e.coords.len());
        let mut acc = Rat::zero();
        for (c, x) in self.coeffs.iter().zip(&e.coords) {
            if !c.is_zero() && !x.is_zero() {
                acc += c * x;
            }
        }
        acc
    }
}

/// The Gram matrix of a symmetric bilinear form over an explicit basis of a
/// subspace, together with its inertia.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramForm {
    pub matrix: QMat,
    /// (n_plus, n_minus, n_zero)
    pub inertia: (usize, usize, usize),
}

impl GramForm {
    pub fn signature(&self) -> i64 {
        self.inertia.0 as i64 - self.inertia.1 as i64
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }
}

/// The canonical functional with L([J]) > 0: the dual of the largest basis
/// monomial carrying a nonzero coefficient in NF(J), scaled by the sign of
/// that coefficient.
pub fn choose_functional(algebra: &QuotientAlgebra, j: &Polynomial) -> Result<Functional> {
    let nf = algebra.project(j)?;
    let last = nf.coords.iter().rposition(|c| !c.is_zero());
    let Some(idx) = last else {
        return Err(Error::SocleZero);
    };
    let mut coeffs = vec![Rat::zero(); algebra.dim()];
    coeffs[idx] = if nf.coords[idx].is_negative() {
        -Rat::one()
    } else {
        Rat::one()
    };
    Ok(Functional { coeffs })
}

/// Gram matrix G_ij = L(b_i * b_j * weight) over the basis of `space`.
/// Weight 1 recovers the plain multiplication form.
pub fn gram(
    algebra: &QuotientAlgebra,
    functional: &Functional,
    weight: &Polynomial,
    space: &Subspace,
) -> Result<GramForm> {
    let cols = space.basis_columns();
    let k = cols.len();
    let lifts: Vec<Polynomial> = cols
        .iter()
        .map(|c| algebra.lift(&AlgebraElement { coords: c.clone() }))
        .collect();
    let mut matrix = QMat::zeros(k, k);
    for i in 0..k {
        for j in 0..=i {
            let prod = lifts[i].mul(&lifts[j]).mul(weight);
            let val = functional.apply(&algebra.project(&prod)?);
            matrix[(i, j)] = val.clone();
            matrix[(j, i)] = val;
        }
    }
    let inertia = inertia(&matrix);
    Ok(GramForm { matrix, inertia })
}

/// Exact inertia (n_plus, n_minus, n_zero) of a symmetric rational matrix by
/// congruence diagonalization: pivot on nonzero diagonal entries; when the
/// remaining diagonal is all zero but an off-diagonal entry a_ij is not,
/// first add row/column j to i, which puts 2*a_ij on the diagonal.
pub fn inertia(mat: &QMat) -> (usize, usize, usize) {
    let n = mat.rows();
    assert_eq!(n, mat.cols());
    debug_assert!({
        let mut sym = true;
        for i in 0..n {
            for j in 0..i {
                sym &= mat[(i, j)] == mat[(j, i)];
            }
        }
        sym
    });
    let mut m = mat.clone();
    let mut plus = 0usize;
    let mut minus = 0usize;

    let swap_sym = |m: &mut QMat, a: usize, b: usize| {
        if a == b {
            return;
        }
        for j in 0..n {
            let x = m[(a, j)].clone();
            let y = m[(b, j)].clone();
            m[(a, j)] = y;
            m[(b, j)] = x;
        }
        for i in 0..n {
            let x = m[(i, a)].clone();
            let y = m[(i, b)].clone();
            m[(i, a)] = y;
            m[(i, b)] = x;
        }
    };

    for k in 0..n {
        if m[(k, k)].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !m[(j, j)].is_zero()) {
                swap_sym(&mut m, k, j);
            } else {
                // all-zero diagonal: regularize with an off-diagonal entry
                let mut found = None;
                'search: for i in k..n {
                    for j in i + 1..n {
                        if !m[(i, j)].is_zero() {
                            found = Some((i, j));
                            break 'search;
                        }
                    }
                }
                let Some((i, j)) = found else {
                    break; // remaining block is zero
                };
                for c in 0..n {
                    let add = m[(j, c)].clone();
                    m[(i, c)] += add;
                }
                for r in 0..n {
                    let add = m[(r, j)].clone();
                    m[(r, i)] += add;
                }
                swap_sym(&mut m, k, i);
            }
        }
        let pivot = m[(k, k)].clone();
        if pivot.is_zero() {
            break;
        }
        if pivot.is_positive() {
            plus += 1;
        } else {
            minus += 1;
        }
        for i in k + 1..n {
            if m[(i, k)].is_zero() {
                continue;
            }
            let factor = &m[(i, k)] / &pivot;
            for c in 0..n {
                let sub = &m[(k, c)] * &factor;
                m[(i, c)] -= sub;
            }
            for r in 0..n {
                let sub = &m[(r, k)] * &factor;
                m[(r, i)] -= sub;
            }
        }
    }
    (plus, minus, n - plus - minus)
}

/// The relative signature sgn(B, h, J): signature of the h-weighted form on
/// the whole algebra. The radical of that form must be exactly Ann(h) (the
/// form descends nondegenerately to B/Ann(h)); the socle must be
/// one-dimensional for the functional class to be well-posed.
pub fn sgn_rel(algebra: &QuotientAlgebra, h: &Polynomial, j: &Polynomial) -> Result<i64> {
    let l = choose_functional(algebra, j)?;
    sgn_rel_with(algebra, h, j, &l)
}

/// `sgn_rel` with a caller-supplied functional; the signature must not
/// depend on the choice as long as L([J]) > 0.
pub fn sgn_rel_with(
    algebra: &QuotientAlgebra,
    h: &Polynomial,
    j: &Polynomial,
    functional: &Functional,
) -> Result<i64> {
    let socle = algebra.socle()?;
    if socle.dim() != 1 {
        return Err(Error::NotGorenstein(socle.dim()));
    }
    let jnf = algebra.project(j)?;
    if jnf.is_zero() {
        return Err(Error::SocleZero);
    }
    let g = gram(algebra, functional, h, &Subspace::full(algebra.dim()))?;
    let radical = Subspace::from_columns(algebra.dim(), g.matrix.kernel());
    let ann = algebra.annihilator(h)?;
    if radical != ann {
        return Err(Error::RadicalMismatch);
    }
    Ok(g.signature())
}

/// Any u with divisor^power * u = target in the algebra, chosen canonically
/// as the echelon solution with all free coordinates zero. Downstream forms
/// are insensitive to the residual ambiguity, which lies in
/// Ann(divisor^power).
pub fn divide_in_algebra(
    algebra: &QuotientAlgebra,
    target: &AlgebraElement,
    divisor: &Polynomial,
    power: u32,
) -> Result<AlgebraElement> {
    if power == 0 {
        return Ok(target.clone());
    }
    let m = algebra.mult_matrix(divisor)?.pow(power);
    let x = m.solve(&target.coords).ok_or(Error::NotDivisible)?;
    Ok(AlgebraElement { coords: x })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{gradient, parse_poly, rat};

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn polys(texts: &[&str], v: &[String]) -> Vec<Polynomial> {
        texts.iter().map(|t| parse_poly(t, v).unwrap()).collect()
    }

    #[test]
    fn functional_examples() {
        // one-dimensional algebra, NF(J) = -4
        let v = vars(&["x", "y"]);
        let a = QuotientAlgebra::build(&polys(&["x", "y"], &v)).unwrap();
        let l = choose_functional(&a, &Polynomial::constant(2, rat(-4))).unwrap();
        assert_eq!(l.coeffs, vec![rat(-1)]);
        let j = a.project(&Polynomial::constant(2, rat(-4))).unwrap();
        assert_eq!(l.apply(&j), rat(4));

        // algebra of (x^2, y^3), J = x*y^2: dual of the socle monomial
        let a = QuotientAlgebra::build(&polys(&["x^2", "y^3"], &v)).unwrap();
        let jpoly = parse_poly("x*y^2", &v).unwrap();
        let l = choose_functional(&a, &jpoly).unwrap();
        assert_eq!(l.apply(&a.project(&jpoly).unwrap()), rat(1));

        // one-variable double point, J = 2x
        let v1 = vars(&["x"]);
        let a = QuotientAlgebra::build(&polys(&["x^2"], &v1)).unwrap();
        let j = parse_poly("2*x", &v1).unwrap();
        let l = choose_functional(&a, &j).unwrap();
        assert_eq!(l.apply(&a.project(&j).unwrap()), rat(2));

        // zero class: no admissible functional
        assert_eq!(
            choose_functional(&a, &Polynomial::zero(1)).err(),
            Some(Error::SocleZero)
        );
    }

    #[test]
    fn gram_examples() {
        let v = vars(&["x", "y"]);
        let point = QuotientAlgebra::build(&polys(&["x", "y"], &v)).unwrap();
        let l = Functional {
            coeffs: vec![rat(1)],
        };
        let g = gram(&point, &l, &Polynomial::one(2), &Subspace::full(1)).unwrap();
        assert_eq!(g.inertia, (1, 0, 0));

        // hyperbolic 2x2 block on the double point, any L(1)
        let v1 = vars(&["x"]);
        let a = QuotientAlgebra::build(&polys(&["x^2"], &v1)).unwrap();
        let l = choose_functional(&a, &parse_poly("2*x", &v1).unwrap()).unwrap();
        let g = gram(&a, &l, &Polynomial::one(1), &Subspace::full(2)).unwrap();
        assert_eq!(g.inertia, (1, 1, 0));

        // weight that kills all products gives the zero form
        let f = parse_poly("x^2+y^2", &v).unwrap();
        let milnor = QuotientAlgebra::build(&gradient(&f)).unwrap();
        let l = Functional {
            coeffs: vec![rat(1)],
        };
        let g = gram(&milnor, &l, &f, &Subspace::full(1)).unwrap();
        assert_eq!(g.inertia, (0, 0, 1));
    }

    #[test]
    fn inertia_examples() {
        let mut hyper = QMat::zeros(2, 2);
        hyper[(0, 1)] = rat(1);
        hyper[(1, 0)] = rat(1);
        assert_eq!(inertia(&hyper), (1, 1, 0));

        let mut diag = QMat::zeros(3, 3);
        diag[(0, 0)] = rat(1);
        diag[(1, 1)] = rat(1);
        diag[(2, 2)] = rat(-1);
        assert_eq!(inertia(&diag), (2, 1, 0));

        assert_eq!(inertia(&QMat::zeros(3, 3)), (0, 0, 3));
    }

    #[test]
    fn sgn_rel_examples() {
        let v = vars(&["x", "y"]);
        // simple zero with positive unit cofactor
        let b = QuotientAlgebra::build(&polys(&["x", "y"], &v)).unwrap();
        let h = parse_poly("2 + x", &v).unwrap();
        assert_eq!(sgn_rel(&b, &h, &Polynomial::one(2)).unwrap(), 1);

        // saddle data: B of (x, -y), h = 1, J = -1
        let b = QuotientAlgebra::build(&polys(&["x", "-y"], &v)).unwrap();
        assert_eq!(
            sgn_rel(&b, &Polynomial::one(2), &Polynomial::constant(2, rat(-1))).unwrap(),
            -1
        );

        // hyperbolic block on the double point
        let v1 = vars(&["x"]);
        let b = QuotientAlgebra::build(&polys(&["x^2"], &v1)).unwrap();
        assert_eq!(
            sgn_rel(&b, &Polynomial::one(1), &parse_poly("2*x", &v1).unwrap()).unwrap(),
            0
        );

        // non-Gorenstein input is refused
        let bad = QuotientAlgebra::build(&polys(&["x^2", "x*y^2", "y^3"], &v)).unwrap();
        assert_eq!(
            sgn_rel(&bad, &Polynomial::one(2), &parse_poly("x*y", &v).unwrap()).err(),
            Some(Error::NotGorenstein(2))
        );
    }

    #[test]
    fn divide_examples() {
        let v1 = vars(&["x"]);
        let a = QuotientAlgebra::build(&polys(&["x^3"], &v1)).unwrap();
        let x = parse_poly("x", &v1).unwrap();
        let target = a.project(&parse_poly("x^2", &v1).unwrap()).unwrap();
        let u = divide_in_algebra(&a, &target, &x, 2).unwrap();
        assert_eq!(u, a.unit_element());

        let zero = AlgebraElement::zero(3);
        assert!(divide_in_algebra(&a, &zero, &x, 2).unwrap().is_zero());

        // dividing by a unit is a linear solve against the unit matrix
        let a2 = QuotientAlgebra::build(&polys(&["x^2"], &v1)).unwrap();
        let h = parse_poly("1 + x", &v1).unwrap();
        let target = a2.project(&parse_poly("2*x", &v1).unwrap()).unwrap();
        let u = divide_in_algebra(&a2, &target, &h, 1).unwrap();
        let back = a2.project(&a2.lift(&u).mul(&h)).unwrap();
        assert_eq!(back, target);

        // outside the image
        let outside = a2.unit_element();
        assert_eq!(
            divide_in_algebra(&a2, &outside, &parse_poly("x", &v1).unwrap(), 1).err(),
            Some(Error::NotDivisible)
        );
    }
}
