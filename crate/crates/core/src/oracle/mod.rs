//! Definition-based validators, independent of the algebraic engine: the
//! topological degree of a polynomial map over a box by recursive boundary
//! subdivision with exact interval sign certificates, a fiber-smoothing GSV
//! oracle for plane curves, and a conservation-of-number harness.

mod conserve;
mod curve;
pub mod interval;
pub mod sturm;

pub use conserve::{conservation_check, localize_zeros, trace_form_signature, ConservationOutcome};
pub use curve::{curve_gsv, fiber_empty_hint};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{rat, rat_frac, Polynomial, Rat, VectorField};
use interval::{eval_on_box, QInterval};

/// A product of closed rational intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxRegion {
    pub lo: Vec<Rat>,
    pub hi: Vec<Rat>,
}

impl BoxRegion {
    pub fn new(lo: Vec<Rat>, hi: Vec<Rat>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::Invalid("box dimension mismatch".to_string()));
        }
        if lo.iter().zip(&hi).any(|(a, b)| a >= b) {
            return Err(Error::Invalid(
                "box must be nonempty and nondegenerate".to_string(),
            ));
        }
        Ok(BoxRegion { lo, hi })
    }

    /// The cube [-w, w]^n.
    pub fn cube(nvars: usize, halfwidth: &Rat) -> Self {
        BoxRegion {
            lo: vec![-halfwidth.clone(); nvars],
            hi: vec![halfwidth.clone(); nvars],
        }
    }

    pub fn nvars(&self) -> usize {
        self.lo.len()
    }

    fn intervals(&self) -> Vec<QInterval> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| QInterval::new(a.clone(), b.clone()))
            .collect()
    }
}

/// Work counters reported with every oracle verdict.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Effort {
    pub cells: u64,
    pub refinements: u64,
}

/// Result of an oracle computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub value: i64,
    pub method: String,
    pub certified: bool,
    pub effort: Effort,
}

#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    /// cells processed per certification attempt
    pub max_cells: u64,
    /// box halvings tried by `local_degree`
    pub shrink_attempts: u32,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_cells: 200_000,
            shrink_attempts: 20,
        }
    }
}

enum Fail {
    /// the full map vanishes at a rational point of the original boundary
    Boundary(String),
    /// a reduced map vanishes exactly on an internal cut; a transformed
    /// retry usually resolves it
    Cut,
    Budget,
}

struct DegreeRun {
    cells_left: u64,
    effort: Effort,
}

impl DegreeRun {
    fn spend_cell(&mut self) -> std::result::Result<(), Fail> {
        if self.cells_left == 0 {
            return Err(Fail::Budget);
        }
        self.cells_left -= 1;
        self.effort.cells += 1;
        Ok(())
    }
}

fn sign_exact(v: &Rat) -> i64 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Degree of `maps` (k components, k variables) over the box `cell`.
///
/// The boundary is cut into cells on which one component has certified
/// constant sign. Cells where the first component is negative or some other
/// component is nonzero carry no preimage of the positive first-axis ray;
/// cells with the first component positive contribute the degree of the
/// remaining components, one dimension down. Face orientations follow the
/// outward-normal-first convention.
fn degree_rec(
    maps: &[Polynomial],
    cell: &[QInterval],
    top: bool,
    ratio: &Rat,
    run: &mut DegreeRun,
) -> std::result::Result<i64, Fail> {
    let k = maps.len();
    debug_assert_eq!(cell.len(), k);
    if k == 1 {
        let sa = sign_exact(&maps[0].eval(std::slice::from_ref(&cell[0].lo)));
        let sb = sign_exact(&maps[0].eval(std::slice::from_ref(&cell[0].hi)));
        if sa == 0 || sb == 0 {
            return Err(if top {
                Fail::Boundary(format!(
                    "at x = {}",
                    crate::expr::render_rat(if sa == 0 { &cell[0].lo } else { &cell[0].hi })
                ))
            } else {
                Fail::Cut
            });
        }
        return Ok((sb - sa) / 2);
    }

    let mut total = 0i64;
    for axis in 0..k {
        for upper in [true, false] {
            let bound = if upper {
                cell[axis].hi.clone()
            } else {
                cell[axis].lo.clone()
            };
            let orient: i64 = {
                let base = if axis % 2 == 0 { 1 } else { -1 };
                if upper {
                    base
                } else {
                    -base
                }
            };
            let restricted: Vec<Polynomial> =
                maps.iter().map(|p| p.eval_var(axis, &bound)).collect();
            let mut face: Vec<QInterval> = cell.to_vec();
            face.remove(axis);

            let mut stack = vec![(face, 0u32)];
            while let Some((c, depth)) = stack.pop() {
                run.spend_cell()?;
                let lead_range = eval_on_box(&restricted[0], &c);
                match lead_range.sign() {
                    Some(-1) => continue,
                    Some(_) => {
                        let sub = degree_rec(&restricted[1..], &c, false, ratio, run)?;
                        total += orient * sub;
                        continue;
                    }
                    None => {}
                }
                if restricted[1..]
                    .iter()
                    .any(|p| eval_on_box(p, &c).sign().is_some())
                {
                    continue;
                }
                // undecided: probe the center for an exact zero of the whole
                // (restricted) map before splitting
                let center: Vec<Rat> = c.iter().map(|iv| iv.midpoint()).collect();
                if restricted.iter().all(|p| p.eval(&center).is_zero()) {
                    return Err(if top {
                        Fail::Boundary(format!(
                            "at ({})",
                            center
                                .iter()
                                .map(crate::expr::render_rat)
                                .collect::<Vec<_>>()
                                .join(", ")
                        ))
                    } else {
                        Fail::Cut
                    });
                }
                // a cell this deep without a certificate means a zero sits
                // (numerically) on the boundary; splitting further only
                // blows up coordinate denominators
                if depth >= 64 {
                    return Err(Fail::Cut);
                }
                let split = (0..c.len())
                    .max_by(|&a, &b| c[a].width().cmp(&c[b].width()))
                    .unwrap();
                // split at lo + ratio*width; retries vary the ratio so that
                // a ray preimage cannot keep landing exactly on a cut
                let at = &c[split].lo + &(c[split].width() * ratio);
                let mut lohalf = c.clone();
                lohalf[split] = QInterval::new(c[split].lo.clone(), at.clone());
                let mut hihalf = c.clone();
                hihalf[split] = QInterval::new(at, c[split].hi.clone());
                stack.push((hihalf, depth + 1));
                stack.push((lohalf, depth + 1));
            }
        }
    }
    Ok(total)
}

/// Integer matrices with positive determinant used to retry a degree
/// computation whose ray preimages land exactly on subdivision cuts.
fn attempt_matrices(n: usize) -> Vec<Vec<Vec<i64>>> {
    let identity = |n: usize| -> Vec<Vec<i64>> {
        (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect()
    };
    match n {
        1 => vec![identity(1)],
        2 => vec![
            identity(2),
            vec![vec![1, 1], vec![-1, 1]],
            vec![vec![2, 1], vec![1, 1]],
            vec![vec![1, 2], vec![-1, 1]],
        ],
        3 => vec![
            identity(3),
            vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]],
            vec![vec![2, 1, 0], vec![1, 2, 1], vec![0, 1, 2]],
            vec![vec![1, 0, 1], vec![1, 1, 0], vec![0, 1, 1]],
        ],
        _ => {
            let mut upper = identity(n);
            let mut lower = identity(n);
            for i in 0..n - 1 {
                upper[i][i + 1] = 1;
                lower[i + 1][i] = 1;
            }
            vec![identity(n), upper, lower]
        }
    }
}

fn transform_field(maps: &[Polynomial], m: &[Vec<i64>]) -> Vec<Polynomial> {
    let nvars = maps[0].nvars();
    m.iter()
        .map(|row| {
            let mut acc = Polynomial::zero(nvars);
            for (c, p) in row.iter().zip(maps) {
                if *c != 0 {
                    acc = acc.add(&p.scale(&rat(*c)));
                }
            }
            acc
        })
        .collect()
}

/// Topological degree of the vector field over the box.
///
/// The certified path is recursive boundary subdivision in exact rational
/// arithmetic; when a ray preimage sits exactly on a cut, the computation is
/// retried with a fixed list of positively-oriented integer mixes of the
/// components. If every certification attempt runs out of budget, an
/// uncertified best-effort count of regular-value preimages (floating-point
/// Newton from a sample grid, signed by the Jacobian) is returned instead.
pub fn degree(
    field: &VectorField,
    region: &BoxRegion,
    cfg: &OracleConfig,
) -> Result<OracleVerdict> {
    let n = field.nvars();
    if region.nvars() != n {
        return Err(Error::Invalid(
            "box dimension must match the field".to_string(),
        ));
    }
    if field.components.len() != n {
        return Err(Error::Invalid(
            "degree needs a square vector field".to_string(),
        ));
    }
    let cell = region.intervals();
    let mut effort_total = Effort::default();
    let ratios = [rat_frac(1, 2), rat_frac(17, 32), rat_frac(11, 32)];
    for (mi, m) in attempt_matrices(n).iter().enumerate() {
        let maps = if mi == 0 {
            field.components.clone()
        } else {
            transform_field(&field.components, m)
        };
        for (ri, ratio) in ratios.iter().enumerate() {
            let mut run = DegreeRun {
                cells_left: cfg.max_cells,
                effort: Effort::default(),
            };
            let outcome = degree_rec(&maps, &cell, true, ratio, &mut run);
            effort_total.cells += run.effort.cells;
            match outcome {
                Ok(v) => {
                    return Ok(OracleVerdict {
                        value: v,
                        method: if mi == 0 && ri == 0 {
                            "boundary-subdivision".to_string()
                        } else {
                            format!("boundary-subdivision (retry {}.{})", mi, ri)
                        },
                        certified: true,
                        effort: effort_total,
                    })
                }
                Err(Fail::Boundary(at)) => return Err(Error::BoundaryZero(at)),
                Err(Fail::Cut) | Err(Fail::Budget) => continue,
            }
        }
    }
    Ok(newton_fallback(field, region, effort_total))
}

/// Poincaré-Hopf index at the origin: degree over a cube that is shrunk
/// (halving, up to the configured number of times) until the boundary
/// certificates succeed. The value equals the local index when the origin
/// is the only zero inside the final cube.
pub fn local_degree(field: &VectorField, cfg: &OracleConfig) -> Result<OracleVerdict> {
    let mut halfwidth = rat(1);
    let mut last: Option<Result<OracleVerdict>> = None;
    for _ in 0..=cfg.shrink_attempts {
        let region = BoxRegion::cube(field.nvars(), &halfwidth);
        match degree(field, &region, cfg) {
            Ok(v) if v.certified => return Ok(v),
            other => last = Some(other),
        }
        halfwidth /= rat(2);
    }
    last.expect("at least one attempt runs")
}

fn newton_fallback(field: &VectorField, region: &BoxRegion, mut effort: Effort) -> OracleVerdict {
    let n = field.nvars();
    let lo: Vec<f64> = region.lo.iter().map(rat_to_f64).collect();
    let hi: Vec<f64> = region.hi.iter().map(rat_to_f64).collect();
    let jac: Vec<Vec<Polynomial>> = field
        .components
        .iter()
        .map(|c| (0..n).map(|j| c.derivative(j)).collect())
        .collect();

    let steps = 6usize;
    let mut grid_points: Vec<Vec<f64>> = vec![vec![]];
    for d in 0..n {
        let mut next = Vec::new();
        for g in &grid_points {
            for s in 0..=steps {
                let t = s as f64 / steps as f64;
                let mut v = g.clone();
                v.push(lo[d] + t * (hi[d] - lo[d]));
                next.push(v);
            }
        }
        grid_points = next;
    }

    let mut roots: Vec<(Vec<f64>, f64)> = Vec::new();
    'starts: for start in grid_points {
        let mut x = start;
        for _ in 0..40 {
            effort.refinements += 1;
            let fx: Vec<f64> = field.components.iter().map(|c| eval_f64(c, &x)).collect();
            let norm: f64 = fx.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm < 1e-12 {
                if x.iter()
                    .enumerate()
                    .any(|(i, &v)| v < lo[i] - 1e-9 || v > hi[i] + 1e-9)
                {
                    continue 'starts;
                }
                if roots
                    .iter()
                    .any(|(r, _)| r.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum::<f64>() < 1e-6)
                {
                    continue 'starts;
                }
                let j: Vec<Vec<f64>> = jac
                    .iter()
                    .map(|row| row.iter().map(|p| eval_f64(p, &x)).collect())
                    .collect();
                let det = det_f64(&j);
                if det.abs() < 1e-10 {
                    continue 'starts; // degenerate zero: not countable this way
                }
                roots.push((x, det));
                continue 'starts;
            }
            let j: Vec<Vec<f64>> = jac
                .iter()
                .map(|row| row.iter().map(|p| eval_f64(p, &x)).collect())
                .collect();
            let Some(step) = solve_f64(&j, &fx) else {
                continue 'starts;
            };
            for (xi, si) in x.iter_mut().zip(&step) {
                *xi -= si;
            }
            if x.iter().any(|v| !v.is_finite()) {
                continue 'starts;
            }
        }
    }
    let value = roots
        .iter()
        .map(|(_, d)| if *d > 0.0 { 1 } else { -1 })
        .sum();
    OracleVerdict {
        value,
        method: "newton-fallback".to_string(),
        certified: false,
        effort,
    }
}

pub(crate) fn rat_to_f64(r: &Rat) -> f64 {
    let num = r.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
    let den = r.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    num / den
}

fn eval_f64(p: &Polynomial, x: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (m, c) in p.terms() {
        let mut t = rat_to_f64(c);
        for (i, &e) in m.0.iter().enumerate() {
            for _ in 0..e {
                t *= x[i];
            }
        }
        acc += t;
    }
    acc
}

fn det_f64(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut det = 1.0;
    for k in 0..n {
        let (pi, pv) = (k..n)
            .map(|i| (i, a[i][k].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        if pv == 0.0 {
            return 0.0;
        }
        if pi != k {
            a.swap(pi, k);
            det = -det;
        }
        det *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    det
}

fn solve_f64(m: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut rhs = b.to_vec();
    for k in 0..n {
        let (pi, pv) = (k..n)
            .map(|i| (i, a[i][k].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        if pv < 1e-14 {
            return None;
        }
        a.swap(pi, k);
        rhs.swap(pi, k);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
            rhs[i] -= f * rhs[k];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = rhs[i];
        for j in i + 1..n {
            acc -= a[i][j] * x[j];
        }
        x[i] = acc / a[i][i];
    }
    Some(x)
}
