//! Conservation-of-number harness: perturb a field, localize the zeros that
//! split off, and reconcile three independent counts — the degree before,
//! the sum of certified local degrees after, and the signature of the
//! Jacobian-weighted trace form on the global quotient algebra (where
//! complex-conjugate zero pairs contribute nothing).

use num_traits::Zero;

use crate::algebra::{QuotientAlgebra, Subspace};
use crate::error::{Error, Result};
use crate::expr::{jacobian_det, Polynomial, Rat, VectorField};
use crate::forms::{gram, Functional};
use crate::sbasis::MonomialOrder;

use super::interval::{eval_on_box, QInterval};
use super::{degree, BoxRegion, OracleConfig, OracleVerdict};

/// Signature of the trace form weighted by the Jacobian on the global
/// (affine) quotient algebra of the field: equals the number of real zeros
/// counted with the sign of the Jacobian, provided all real zeros are
/// simple. Complex-conjugate pairs cancel exactly.
pub fn trace_form_signature(field: &VectorField) -> Result<i64> {
    let n = field.nvars();
    let a = QuotientAlgebra::build_with_order(&field.components, MonomialOrder::global(n))?;
    let weight = jacobian_det(field);
    let mut coeffs = Vec::with_capacity(a.dim());
    for m in a.basis().to_vec() {
        let mm = a.mult_matrix(&Polynomial::monomial(m, num_traits::One::one()))?;
        coeffs.push(mm.trace());
    }
    let l = Functional { coeffs };
    let g = gram(&a, &l, &weight, &Subspace::full(a.dim()))?;
    Ok(g.signature())
}

/// Boxes that jointly cover every zero of the field inside the region, each
/// box certified to contain the zeros of one isolated cluster. Cells where
/// some component has a certified sign are discarded; the survivors are
/// merged into touching clusters and inflated.
pub fn localize_zeros(
    field: &VectorField,
    region: &BoxRegion,
    depth: u32,
) -> Result<Vec<BoxRegion>> {
    let n = region.nvars();
    let full: Vec<QInterval> = region
        .lo
        .iter()
        .zip(&region.hi)
        .map(|(a, b)| QInterval::new(a.clone(), b.clone()))
        .collect();
    let min_width: Rat =
        full.iter().map(|iv| iv.width()).max().unwrap() / crate::expr::rat(1 << depth);

    let mut survivors: Vec<Vec<QInterval>> = Vec::new();
    let mut stack = vec![full];
    while let Some(cell) = stack.pop() {
        if field
            .components
            .iter()
            .any(|p| eval_on_box(p, &cell).sign().is_some())
        {
            continue;
        }
        let widest = (0..n)
            .max_by(|&a, &b| cell[a].width().cmp(&cell[b].width()))
            .unwrap();
        if cell[widest].width() <= min_width {
            survivors.push(cell);
            continue;
        }
        let mid = cell[widest].midpoint();
        let mut lo = cell.clone();
        lo[widest] = QInterval::new(cell[widest].lo.clone(), mid.clone());
        let mut hi = cell.clone();
        hi[widest] = QInterval::new(mid, cell[widest].hi.clone());
        stack.push(lo);
        stack.push(hi);
    }

    // merge touching cells into clusters (closed boxes touch when they
    // intersect in every coordinate)
    let mut clusters: Vec<Vec<QInterval>> = Vec::new();
    'next: for cell in survivors {
        for cl in clusters.iter_mut() {
            let touches = (0..n).all(|i| cell[i].lo <= cl[i].hi && cl[i].lo <= cell[i].hi);
            if touches {
                for i in 0..n {
                    if cell[i].lo < cl[i].lo {
                        cl[i].lo = cell[i].lo.clone();
                    }
                    if cell[i].hi > cl[i].hi {
                        cl[i].hi = cell[i].hi.clone();
                    }
                }
                continue 'next;
            }
        }
        clusters.push(cell);
    }
    // repeated merging until stable (cluster growth can create new contacts)
    loop {
        let mut merged = false;
        let mut out: Vec<Vec<QInterval>> = Vec::new();
        'outer: for cl in clusters {
            for existing in out.iter_mut() {
                let touches =
                    (0..n).all(|i| cl[i].lo <= existing[i].hi && existing[i].lo <= cl[i].hi);
                if touches {
                    for i in 0..n {
                        if cl[i].lo < existing[i].lo {
                            existing[i].lo = cl[i].lo.clone();
                        }
                        if cl[i].hi > existing[i].hi {
                            existing[i].hi = cl[i].hi.clone();
                        }
                    }
                    merged = true;
                    continue 'outer;
                }
            }
            out.push(cl);
        }
        clusters = out;
        if !merged {
            break;
        }
    }

    // inflate by half the cell width, clamped to the region
    let margin = min_width / crate::expr::rat(2);
    let boxes = clusters
        .into_iter()
        .map(|cl| {
            let lo = cl
                .iter()
                .enumerate()
                .map(|(i, iv)| {
                    let v = &iv.lo - &margin;
                    if v < region.lo[i] {
                        region.lo[i].clone()
                    } else {
                        v
                    }
                })
                .collect();
            let hi = cl
                .iter()
                .enumerate()
                .map(|(i, iv)| {
                    let v = &iv.hi + &margin;
                    if v > region.hi[i] {
                        region.hi[i].clone()
                    } else {
                        v
                    }
                })
                .collect();
            BoxRegion::new(lo, hi)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(boxes)
}

#[derive(Debug)]
pub struct ConservationOutcome {
    pub degree_before: OracleVerdict,
    pub degree_after: OracleVerdict,
    pub zero_boxes: Vec<BoxRegion>,
    pub local_degrees: Vec<OracleVerdict>,
    pub local_sum: i64,
    pub trace_signature: i64,
    /// all four counts agree and every verdict is certified
    pub consistent: bool,
}

/// Verifies the conservation of number for `field + scale * perturbation`
/// over the box: degree before = degree after = sum of local degrees at the
/// split zeros = Jacobian-trace-form signature of the perturbed algebra.
pub fn conservation_check(
    field: &VectorField,
    perturbation: &VectorField,
    scale: &Rat,
    region: &BoxRegion,
    cfg: &OracleConfig,
) -> Result<ConservationOutcome> {
    if scale.is_zero() {
        return Err(Error::Invalid("perturbation scale must be nonzero".into()));
    }
    let degree_before = degree(field, region, cfg)?;
    let perturbed = field.add(&perturbation.scale(scale));
    let degree_after = degree(&perturbed, region, cfg)?;
    let zero_boxes = localize_zeros(&perturbed, region, 6)?;
    let mut local_degrees = Vec::new();
    let mut local_sum = 0i64;
    for b in &zero_boxes {
        let v = degree(&perturbed, b, cfg)?;
        local_sum += v.value;
        local_degrees.push(v);
    }
    let trace_signature = trace_form_signature(&perturbed)?;
    let consistent = degree_before.certified
        && degree_after.certified
        && local_degrees.iter().all(|v| v.certified)
        && degree_before.value == degree_after.value
        && degree_after.value == local_sum
        && trace_signature == local_sum;
    Ok(ConservationOutcome {
        degree_before,
        degree_after,
        zero_boxes,
        local_degrees,
        local_sum,
        trace_signature,
        consistent,
    })
}
