//! Fiber-smoothing GSV oracle for plane curves.
//!
//! On a one-dimensional smooth fiber the index sum of any tangent field that
//! matches the boundary behavior is determined by the boundary alone: each
//! arc contributes (sgn tau at exit - sgn tau at entry)/2, where tau is the
//! component of the field along the oriented fiber tangent. Closed
//! components telescope to zero. So the oracle finds the intersection
//! points of the fiber f = eps with the disk boundary exactly (Sturm
//! isolation of a univariate resultant-style polynomial), classifies each
//! as entry or exit for the orientation (-f_y, f_x), and certifies the sign
//! of the tangential component at each point.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::expr::{gradient, Polynomial, Rat};

use super::interval::{eval_on_box, QInterval};
use super::sturm::{isolate_roots, sign_at_root, RootLoc, UniPoly};
use super::{Effort, OracleVerdict};

/// A 2-variable polynomial reduced modulo y^2 = r^2 - x^2 to the pair
/// (A(x), B(x)) with p = A + B*y on the circle.
fn reduce_mod_circle(p: &Polynomial, rsq: &Rat) -> (UniPoly, UniPoly) {
    assert_eq!(p.nvars(), 2);
    // (r^2 - x^2) as a univariate polynomial
    let circle = UniPoly::normalize(vec![
        rsq.clone(),
        Rat::zero(),
        -<Rat as num_traits::One>::one(),
    ]);
    let mut a = UniPoly::zero();
    let mut b = UniPoly::zero();
    for (m, c) in p.terms() {
        let (xe, ye) = (m.0[0] as usize, m.0[1]);
        let mut mono = vec![Rat::zero(); xe + 1];
        mono[xe] = c.clone();
        let mut term = UniPoly::normalize(mono);
        for _ in 0..(ye / 2) {
            term = term.mul(&circle);
        }
        if ye % 2 == 0 {
            a = a.add(&term);
        } else {
            b = b.add(&term);
        }
    }
    (a, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum YBranch {
    /// y = 0 exactly (the point (+-r, 0))
    Zero,
    /// y = -A/B with B nonzero at the root
    Ratio,
    /// y = sigma * sqrt(r^2 - x^2), for the double-branch roots where B = 0
    Sqrt(i8),
}

struct CirclePoint {
    loc: RootLoc,
    branch: YBranch,
}

/// Certified sign of (tA + tB * y) at a circle point.
fn sign_at_point(
    sf: &UniPoly,
    fiber_a: &UniPoly,
    fiber_b: &UniPoly,
    rsq: &Rat,
    pt: &CirclePoint,
    t_a: &UniPoly,
    t_b: &UniPoly,
) -> i8 {
    match pt.branch {
        YBranch::Zero => sign_at_root(sf, t_a, &pt.loc),
        YBranch::Ratio => {
            // y = -A/B: sign(tA + tB*y) = sign(tA*B - tB*A) * sign(B)
            let num = t_a.mul(fiber_b).sub(&t_b.mul(fiber_a));
            let s1 = sign_at_root(sf, &num, &pt.loc);
            let s2 = sign_at_root(sf, fiber_b, &pt.loc);
            s1 * s2
        }
        YBranch::Sqrt(sigma) => {
            let u = sign_at_root(sf, t_a, &pt.loc);
            let v = sigma * sign_at_root(sf, t_b, &pt.loc);
            if v == 0 {
                return u;
            }
            if u == 0 || u == v {
                return if u == 0 { v } else { u };
            }
            // opposite signs: compare tA^2 against tB^2 (r^2 - x^2)
            let circle = UniPoly::normalize(vec![
                rsq.clone(),
                Rat::zero(),
                -<Rat as num_traits::One>::one(),
            ]);
            let p = t_a.mul(t_a).sub(&t_b.mul(t_b).mul(&circle));
            u * sign_at_root(sf, &p, &pt.loc)
        }
    }
}

/// Fiber-smoothing GSV evaluation for a plane curve: the signed count of
/// zeros of the tangentially projected field on the part of the fiber
/// f = epsilon inside the disk of the given radius.
///
/// `side` is +1 or -1 and must match the sign of epsilon.
pub fn curve_gsv(
    f: &Polynomial,
    field: &crate::expr::VectorField,
    side: i8,
    radius: &Rat,
    epsilon: &Rat,
) -> Result<OracleVerdict> {
    if f.nvars() != 2 || field.nvars() != 2 {
        return Err(Error::Invalid(
            "the fiber-smoothing oracle works in two variables".to_string(),
        ));
    }
    if epsilon.is_zero() || !radius.is_positive() {
        return Err(Error::Invalid(
            "epsilon must be nonzero and the radius positive".to_string(),
        ));
    }
    if (epsilon.is_positive() && side < 0) || (epsilon.is_negative() && side > 0) {
        return Err(Error::Invalid(
            "epsilon sign must match the requested side".to_string(),
        ));
    }
    let rsq = radius * radius;
    let grad = gradient(f);
    // oriented fiber tangent T = (-f_y, f_x); tangential component of X
    let tau = field.components[0]
        .mul(&grad[1].neg())
        .add(&field.components[1].mul(&grad[0]));
    // inward radial component of T at a boundary point: f_y*x - f_x*y
    let x = Polynomial::var(0, 2);
    let y = Polynomial::var(1, 2);
    let s_in = grad[1].mul(&x).sub(&grad[0].mul(&y));

    let shifted = f.sub(&Polynomial::constant(2, epsilon.clone()));
    let (fa, fb) = reduce_mod_circle(&shifted, &rsq);
    // boundary points satisfy A^2 = B^2 (r^2 - x^2)
    let circle = UniPoly::normalize(vec![
        rsq.clone(),
        Rat::zero(),
        -<Rat as num_traits::One>::one(),
    ]);
    let rpoly = fa.mul(&fa).sub(&fb.mul(&fb).mul(&circle));
    if rpoly.is_zero() {
        return Err(Error::TracingFailure(
            "the fiber contains the disk boundary".to_string(),
        ));
    }
    let sf = rpoly.squarefree_part();
    let roots = isolate_roots(&sf, &(-radius.clone()), &radius.clone());

    let mut points = Vec::new();
    let mut effort = Effort::default();
    for loc in roots {
        effort.cells += 1;
        let sb = sign_at_root(&sf, &fb, &loc);
        if sb != 0 {
            let sa = sign_at_root(&sf, &fa, &loc);
            if sa == 0 {
                // y = 0: only possible at x = +-r
                points.push(CirclePoint {
                    loc,
                    branch: YBranch::Zero,
                });
            } else {
                points.push(CirclePoint {
                    loc,
                    branch: YBranch::Ratio,
                });
            }
        } else {
            // B = 0 forces A = 0 at the root: both branches meet the fiber
            let at_extreme = match &loc {
                RootLoc::Exact(v) => v == radius || *v == -radius.clone(),
                RootLoc::Bracket(_, _) => false,
            };
            if at_extreme {
                points.push(CirclePoint {
                    loc,
                    branch: YBranch::Zero,
                });
            } else {
                points.push(CirclePoint {
                    loc: loc.clone(),
                    branch: YBranch::Sqrt(1),
                });
                points.push(CirclePoint {
                    loc,
                    branch: YBranch::Sqrt(-1),
                });
            }
        }
    }

    let (tau_a, tau_b) = reduce_mod_circle(&tau, &rsq);
    let (sin_a, sin_b) = reduce_mod_circle(&s_in, &rsq);

    let mut entries = 0usize;
    let mut exits = 0usize;
    let mut tally = 0i64;
    for pt in &points {
        effort.refinements += 1;
        let s = sign_at_point(&sf, &fa, &fb, &rsq, pt, &sin_a, &sin_b);
        if s == 0 {
            return Err(Error::NonTransversalBoundary(
                "the fiber is tangent to the disk boundary".to_string(),
            ));
        }
        let t = sign_at_point(&sf, &fa, &fb, &rsq, pt, &tau_a, &tau_b);
        if t == 0 {
            return Err(Error::TracingFailure(
                "the tangential component vanishes at a boundary point".to_string(),
            ));
        }
        if s > 0 {
            entries += 1;
            tally -= t as i64;
        } else {
            exits += 1;
            tally += t as i64;
        }
    }
    if entries != exits {
        return Err(Error::TracingFailure(format!(
            "unbalanced boundary crossings: {} entries, {} exits",
            entries, exits
        )));
    }
    debug_assert_eq!(tally % 2, 0);
    Ok(OracleVerdict {
        value: tally / 2,
        method: "fiber-boundary-count".to_string(),
        certified: true,
        effort,
    })
}

/// Quick certificate that the fiber f = epsilon has no real point inside the
/// cube: Some(true) when interval subdivision proves emptiness, Some(false)
/// when sampled or certified signs show a crossing, None when the budget
/// runs out undecided. Subdivision is breadth-first so coordinate
/// denominators stay small.
pub fn fiber_empty_hint(f: &Polynomial, epsilon: &Rat, halfwidth: &Rat) -> Option<bool> {
    let n = f.nvars();
    let shifted = f.sub(&Polynomial::constant(n, epsilon.clone()));

    // coarse rational sample grid: two opposite signs (or an exact zero)
    // prove the fiber nonempty
    let steps = 4i64;
    let mut sample_sign = 0i8;
    let mut grid: Vec<Vec<Rat>> = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for g in &grid {
            for s in 0..=steps {
                let mut v = g.clone();
                v.push(
                    -halfwidth.clone()
                        + halfwidth.clone() * crate::expr::rat(2 * s) / crate::expr::rat(steps),
                );
                next.push(v);
            }
        }
        grid = next;
    }
    for pt in &grid {
        let val = shifted.eval(pt);
        if val.is_zero() {
            return Some(false);
        }
        let s = if val.is_positive() { 1 } else { -1 };
        if sample_sign == 0 {
            sample_sign = s;
        } else if sample_sign != s {
            return Some(false);
        }
    }

    let full: Vec<QInterval> = (0..n)
        .map(|_| QInterval::new(-halfwidth.clone(), halfwidth.clone()))
        .collect();
    let mut queue = std::collections::VecDeque::from([full]);
    let mut seen = (false, false);
    let mut budget = 2048u32;
    while let Some(cell) = queue.pop_front() {
        if budget == 0 {
            return None;
        }
        budget -= 1;
        match eval_on_box(&shifted, &cell).sign() {
            Some(1) => {
                seen.0 = true;
                if seen.1 {
                    return Some(false);
                }
            }
            Some(_) => {
                seen.1 = true;
                if seen.0 {
                    return Some(false);
                }
            }
            None => {
                let split = (0..cell.len())
                    .max_by(|&a, &b| cell[a].width().cmp(&cell[b].width()))
                    .unwrap();
                let mid = cell[split].midpoint();
                let mut lo = cell.clone();
                lo[split] = QInterval::new(cell[split].lo.clone(), mid.clone());
                let mut hi = cell.clone();
                hi[split] = QInterval::new(mid, cell[split].hi.clone());
                queue.push_back(lo);
                queue.push_back(hi);
            }
        }
    }
    Some(true)
}
