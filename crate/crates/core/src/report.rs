//! Problem files, structured index reports, and the runners behind the CLI
//! subcommands. Problem files are self-describing key-value documents with
//! exact `p/q` numbers; reports serialize to JSON and round-trip exactly.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::algebra::QuotientAlgebra;
use crate::error::{Error, Result};
use crate::expr::{
    gradient, hessian_det, jacobian_det, parse_poly, rat, rat_frac, render_rat, Polynomial, Rat,
    VectorField,
};
use crate::forms::{choose_functional, gram, sgn_rel};
use crate::indices::{canonical_hamiltonian, flag_of, gsv_terms, sigma_with, Variant};
use crate::oracle::{
    curve_gsv, degree, fiber_empty_hint, local_degree, BoxRegion, OracleConfig, OracleVerdict,
};
use crate::sbasis::MonomialOrder;

/// Which basis engine a run uses. The local order realizes germs at the
/// origin; the global order yields the affine (multilocal) quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderChoice {
    #[default]
    Local,
    Global,
}

impl OrderChoice {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "local" => Ok(OrderChoice::Local),
            "global" => Ok(OrderChoice::Global),
            other => Err(Error::Invalid(format!(
                "unknown order `{}` (expected `local` or `global`)",
                other
            ))),
        }
    }

    pub fn to_order(self, nvars: usize) -> MonomialOrder {
        match self {
            OrderChoice::Local => MonomialOrder::local(nvars),
            OrderChoice::Global => MonomialOrder::global(nvars),
        }
    }
}

/// A parsed problem document.
#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub variables: Vec<String>,
    pub f: Option<String>,
    pub field: Option<Vec<String>>,
    pub variant: Variant,
    pub order: OrderChoice,
    pub box_radius: Rat,
    pub epsilon: Rat,
    pub oracle: bool,
    pub hamiltonian: bool,
    pub show_gram: bool,
    /// expect-* keys kept verbatim for the validation runner
    pub expectations: BTreeMap<String, String>,
}

fn valid_var_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let parts: Vec<&str> = body.split('/').collect();
    let parse_int = |t: &str| -> Result<num_bigint::BigInt> {
        t.trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("bad number `{}`", s)))
    };
    let r = match parts.as_slice() {
        [p] => Rat::from_integer(parse_int(p)?),
        [p, q] => {
            let den = parse_int(q)?;
            if den == 0.into() {
                return Err(Error::Invalid(format!("zero denominator in `{}`", s)));
            }
            Rat::new(parse_int(p)?, den)
        }
        _ => return Err(Error::Invalid(format!("bad number `{}`", s))),
    };
    Ok(if neg { -r } else { r })
}

impl ProblemFile {
    pub fn parse_str(text: &str) -> Result<ProblemFile> {
        let mut variables: Option<Vec<String>> = None;
        let mut f = None;
        let mut field: Option<Vec<String>> = None;
        let mut variant = Variant::default();
        let mut order = OrderChoice::default();
        let mut box_radius = rat(1);
        let mut epsilon = rat_frac(1, 8);
        let mut oracle = false;
        let mut hamiltonian = false;
        let mut show_gram = false;
        let mut expectations = BTreeMap::new();

        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once(':') else {
                return Err(Error::Invalid(format!(
                    "line {}: expected `key: value`",
                    lineno + 1
                )));
            };
            let key = key.trim();
            let value = value.trim();
            match key {
                "variables" => {
                    let names: Vec<String> =
                        value.split(',').map(|s| s.trim().to_string()).collect();
                    if names.is_empty() || names.iter().any(|n| !valid_var_name(n)) {
                        return Err(Error::Invalid(format!(
                            "line {}: bad variable list",
                            lineno + 1
                        )));
                    }
                    let mut seen = std::collections::HashSet::new();
                    if !names.iter().all(|n| seen.insert(n.clone())) {
                        return Err(Error::Invalid(format!(
                            "line {}: duplicate variable",
                            lineno + 1
                        )));
                    }
                    variables = Some(names);
                }
                "f" => f = Some(value.to_string()),
                "X" => {
                    field = Some(value.split(',').map(|s| s.trim().to_string()).collect());
                }
                "variant" => variant = Variant::parse(value)?,
                "order" => order = OrderChoice::parse(value)?,
                "box-radius" => box_radius = parse_rat(value)?,
                "epsilon" => epsilon = parse_rat(value)?,
                "oracle" => {
                    oracle = match value {
                        "on" | "true" => true,
                        "off" | "false" => false,
                        _ => {
                            return Err(Error::Invalid(format!(
                                "line {}: oracle must be on/off",
                                lineno + 1
                            )))
                        }
                    }
                }
                "hamiltonian" => {
                    hamiltonian = match value {
                        "on" | "true" => true,
                        "off" | "false" => false,
                        _ => {
                            return Err(Error::Invalid(format!(
                                "line {}: hamiltonian must be on/off",
                                lineno + 1
                            )))
                        }
                    }
                }
                "show-gram" => show_gram = value == "on" || value == "true",
                k if k.starts_with("expect-") => {
                    expectations.insert(k.to_string(), value.to_string());
                }
                other => {
                    return Err(Error::Invalid(format!(
                        "line {}: unknown key `{}`",
                        lineno + 1,
                        other
                    )))
                }
            }
        }

        let variables =
            variables.ok_or_else(|| Error::Invalid("missing `variables:` line".to_string()))?;
        if f.is_none() && field.is_none() {
            return Err(Error::Invalid(
                "a problem needs at least one of `f:` or `X:`".to_string(),
            ));
        }
        if let Some(ref comps) = field {
            if comps.len() != variables.len() {
                return Err(Error::Invalid(format!(
                    "X has {} components for {} variables",
                    comps.len(),
                    variables.len()
                )));
            }
        }
        Ok(ProblemFile {
            variables,
            f,
            field,
            variant,
            order,
            box_radius,
            epsilon,
            oracle,
            hamiltonian,
            show_gram,
            expectations,
        })
    }

    pub fn from_path(path: &Path) -> Result<ProblemFile> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Invalid(format!("cannot read {}: {}", path.display(), e)))?;
        ProblemFile::parse_str(&text)
    }

    pub fn parse_f(&self) -> Result<Option<Polynomial>> {
        self.f
            .as_ref()
            .map(|t| parse_poly(t, &self.variables))
            .transpose()
    }

    /// The vector field: parsed from `X:`, or generated from f when the
    /// `hamiltonian` option is set.
    pub fn parse_field(&self) -> Result<Option<VectorField>> {
        if self.hamiltonian {
            let f = self
                .parse_f()?
                .ok_or_else(|| Error::Invalid("hamiltonian generation needs `f:`".to_string()))?;
            return Ok(Some(canonical_hamiltonian(&f)?));
        }
        match &self.field {
            None => Ok(None),
            Some(comps) => {
                let parsed: Vec<Polynomial> = comps
                    .iter()
                    .map(|t| parse_poly(t, &self.variables))
                    .collect::<Result<_>>()?;
                Ok(Some(VectorField::new(parsed)))
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DimsReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim_a: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim_b: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim_b_mod_f: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim_a_mod_f: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim_b_mod_h: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SignatureReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sgn_b_h_j: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sgn_a_h_hess: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sgn_a_hess: Option<i64>,
    /// (n_plus, n_minus, n_zero) of the main form on B
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inertia_b: Option<(usize, usize, usize)>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IndicesReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elk: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gsv_complex: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gsv_plus: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gsv_minus: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_plus: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_minus: Option<i64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VariantValues {
    pub as_published: (i64, i64),
    pub reduced: (i64, i64),
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_plus: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_minus: Option<i64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<OracleVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve_gsv_plus: Option<OracleVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve_gsv_minus: Option<OracleVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<bool>,
}

/// The full structured result of a run. Every number is exact; rationals
/// are rendered `p/q`. JSON serialization round-trips.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IndexReport {
    pub command: String,
    pub variables: Vec<String>,
    pub ambient_dim: usize,
    pub parity: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cofactor: Option<String>,
    #[serde(default)]
    pub dims: DimsReport,
    #[serde(default)]
    pub signatures: SignatureReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra_basis: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub socle_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub socle_basis: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flag_dims: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flag_depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<i64>>,
    #[serde(default)]
    pub indices: IndicesReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant_values: Option<VariantValues>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl IndexReport {
    fn new(command: &str, problem: &ProblemFile) -> Self {
        let n = problem.variables.len();
        IndexReport {
            command: command.to_string(),
            variables: problem.variables.clone(),
            ambient_dim: n,
            parity: if n % 2 == 0 { "even" } else { "odd" }.to_string(),
            ..Default::default()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<IndexReport> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("bad report JSON: {}", e)))
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(format!("command: {}", self.command));
        line(format!(
            "variables: {} (n+1 = {}, {})",
            self.variables.join(", "),
            self.ambient_dim,
            self.parity
        ));
        if let Some(f) = &self.f {
            line(format!("f: {}", f));
        }
        if let Some(x) = &self.field {
            line(format!("X: ({})", x.join(", ")));
        }
        if let Some(h) = &self.cofactor {
            line(format!("cofactor h: {}", h));
        }
        let d = &self.dims;
        let mut dim_parts = Vec::new();
        if let Some(v) = d.dim_a {
            dim_parts.push(format!("dim A = {}", v));
        }
        if let Some(v) = d.dim_b {
            dim_parts.push(format!("dim B = {}", v));
        }
        if let Some(v) = d.dim_b_mod_f {
            dim_parts.push(format!("dim B/(f) = {}", v));
        }
        if let Some(v) = d.dim_a_mod_f {
            dim_parts.push(format!("dim A/(f) = {}", v));
        }
        if let Some(v) = d.dim_b_mod_h {
            dim_parts.push(format!("dim B/(h) = {}", v));
        }
        if !dim_parts.is_empty() {
            line(dim_parts.join(", "));
        }
        if let Some(b) = &self.algebra_basis {
            line(format!("basis: {{{}}}", b.join(", ")));
        }
        if let Some(sd) = self.socle_dim {
            line(format!(
                "socle: dimension {}{}",
                sd,
                self.socle_basis
                    .as_ref()
                    .map(|b| format!(", span{{{}}}", b.join(", ")))
                    .unwrap_or_default()
            ));
        }
        let s = &self.signatures;
        if let Some(v) = s.sgn_b_h_j {
            line(format!("sgn(B, h, J) = {}", v));
        }
        if let Some(v) = s.sgn_a_h_hess {
            line(format!("sgn(A, h, Hess f) = {}", v));
        }
        if let Some(v) = s.sgn_a_hess {
            line(format!("sgn(A, Hess f) = {}", v));
        }
        if let Some((p, m, z)) = s.inertia_b {
            line(format!(
                "inertia on B: (n+, n-, n0) = ({}, {}, {})",
                p, m, z
            ));
        }
        if let Some(fd) = &self.flag_dims {
            line(format!(
                "flag dims: [{}], depth {}",
                fd.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(", "),
                self.flag_depth.unwrap_or(0)
            ));
        }
        if let Some(sig) = &self.sigma {
            line(format!(
                "sigma: [{}]",
                sig.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
        }
        if let Some(vv) = &self.variant_values {
            if let (Some(kp), Some(km)) = (vv.k_plus, vv.k_minus) {
                line(format!("K+ = {}, K- = {}", kp, km));
            }
            line(format!(
                "variant values: as-published = ({}, {}), reduced = ({}, {})",
                vv.as_published.0, vv.as_published.1, vv.reduced.0, vv.reduced.1
            ));
        }
        let i = &self.indices;
        if let Some(v) = i.elk {
            line(format!("index = {}", v));
        }
        if let Some(v) = i.gsv_complex {
            line(format!("gsv_complex = {}", v));
        }
        if let (Some(p), Some(m)) = (i.gsv_plus, i.gsv_minus) {
            line(format!(
                "gsv_real = ({}, {})  [variant {}]",
                p,
                m,
                self.variant.as_deref().unwrap_or("reduced")
            ));
        }
        if let (Some(p), Some(m)) = (i.chi_plus, i.chi_minus) {
            line(format!("chi(V+) = {}, chi(V-) = {}", p, m));
        }
        if let Some(g) = &self.gram {
            line("gram matrix:".to_string());
            for row in g {
                line(format!("  [{}]", row.join(", ")));
            }
        }
        if let Some(o) = &self.oracle {
            if let Some(v) = &o.degree {
                line(format!(
                    "oracle degree = {} ({}, {})",
                    v.value,
                    v.method,
                    if v.certified {
                        "certified"
                    } else {
                        "uncertified"
                    }
                ));
            }
            if let Some(v) = &o.curve_gsv_plus {
                line(format!("oracle curve-gsv (+) = {} ({})", v.value, v.method));
            }
            if let Some(v) = &o.curve_gsv_minus {
                line(format!("oracle curve-gsv (-) = {} ({})", v.value, v.method));
            }
            if let Some(a) = o.agreement {
                line(format!(
                    "oracle agreement: {}",
                    if a { "yes" } else { "NO" }
                ));
            }
        }
        for n in &self.notes {
            line(format!("note: {}", n));
        }
        out
    }
}

fn require_field(problem: &ProblemFile) -> Result<VectorField> {
    problem
        .parse_field()?
        .ok_or_else(|| Error::Invalid("this command needs `X:`".to_string()))
}

fn require_f(problem: &ProblemFile) -> Result<Polynomial> {
    problem
        .parse_f()?
        .ok_or_else(|| Error::Invalid("this command needs `f:`".to_string()))
}

fn render_gram(matrix: &crate::linalg::QMat) -> Vec<Vec<String>> {
    (0..matrix.rows())
        .map(|i| {
            (0..matrix.cols())
                .map(|j| render_rat(&matrix[(i, j)]))
                .collect()
        })
        .collect()
}

/// The `elk` subcommand: Poincaré-Hopf index of X through the signature of
/// the Jacobian-positive form.
pub fn run_elk(problem: &ProblemFile) -> Result<IndexReport> {
    let field = require_field(problem)?;
    let mut report = IndexReport::new("elk", problem);
    report.field = Some(
        field
            .components
            .iter()
            .map(|c| c.render(&problem.variables))
            .collect(),
    );
    let order = problem.order.to_order(field.nvars());
    let b = QuotientAlgebra::build_with_order(&field.components, order)?;
    let j = jacobian_det(&field);
    report.dims.dim_b = Some(b.dim());
    let one = Polynomial::one(field.nvars());
    let value = sgn_rel(&b, &one, &j)?;
    report.indices.elk = Some(value);
    report.signatures.sgn_b_h_j = Some(value);
    {
        let l = choose_functional(&b, &j)?;
        let g = gram(&b, &l, &one, &crate::algebra::Subspace::full(b.dim()))?;
        report.signatures.inertia_b = Some(g.inertia);
        if problem.show_gram {
            report.gram = Some(render_gram(&g.matrix));
        }
    }
    if problem.oracle {
        let cfg = OracleConfig::default();
        let region = BoxRegion::cube(field.nvars(), &problem.box_radius);
        let verdict = match degree(&field, &region, &cfg) {
            Ok(v) => v,
            Err(Error::BoundaryZero(_)) => local_degree(&field, &cfg)?,
            Err(e) => return Err(e),
        };
        let agree = verdict.value == value;
        report.oracle = Some(OracleReport {
            degree: Some(verdict),
            agreement: Some(agree),
            ..Default::default()
        });
    }
    Ok(report)
}

/// The `gsv` subcommand: the full tangent-pair analysis.
pub fn run_gsv(problem: &ProblemFile) -> Result<IndexReport> {
    if problem.order == OrderChoice::Global {
        return Err(Error::Invalid(
            "the GSV formulas live on the local ring at the origin; \
             `order: global` applies to `elk` and `algebra` only"
                .to_string(),
        ));
    }
    let f = require_f(problem)?;
    let field = require_field(problem)?;
    let mut report = IndexReport::new("gsv", problem);
    report.f = Some(f.render(&problem.variables));
    report.field = Some(
        field
            .components
            .iter()
            .map(|c| c.render(&problem.variables))
            .collect(),
    );

    let terms = gsv_terms(&f, &field)?;
    report.cofactor = Some(terms.cofactor.render(&problem.variables));
    report.dims.dim_a = Some(terms.dim_a);
    report.dims.dim_b = Some(terms.dim_b);
    report.dims.dim_b_mod_f = Some(terms.dim_b_mod_f);
    report.dims.dim_a_mod_f = Some(terms.dim_a_mod_f);
    report.dims.dim_b_mod_h = Some(terms.dim_b_mod_h);
    report.signatures.sgn_b_h_j = Some(terms.sgn_b_h_j);
    report.signatures.sgn_a_h_hess = terms.sgn_a_h_hess;
    report.signatures.sgn_a_hess = terms.sgn_a_hess;
    report.flag_dims = terms.flag_dims.clone();
    report.flag_depth = terms.flag_depth;
    report.sigma = terms.sigma.as_ref().map(|s| s.sigmas.clone());

    let (gp, gm) = terms.assemble(problem.variant);
    report.indices.gsv_plus = Some(gp);
    report.indices.gsv_minus = Some(gm);
    report.indices.gsv_complex = Some(terms.gsv_complex);
    report.variant = Some(problem.variant.as_str().to_string());
    report.variant_values = Some(VariantValues {
        as_published: terms.assemble(Variant::AsPublished),
        reduced: terms.assemble(Variant::Reduced),
        k_plus: terms.sigma.as_ref().map(|s| s.k_plus()),
        k_minus: terms.sigma.as_ref().map(|s| s.k_minus()),
    });

    if let Ok((cp, cm)) = crate::indices::euler_characteristics(&f) {
        report.indices.chi_plus = Some(cp);
        report.indices.chi_minus = Some(cm);
    }

    for (side, eps) in [(1i8, problem.epsilon.abs()), (-1, -problem.epsilon.abs())] {
        if fiber_empty_hint(&f, &eps, &problem.box_radius) == Some(true) {
            report.notes.push(format!(
                "the fiber f = {} has no real points in the box: side {} values are formula values",
                render_rat(&eps),
                if side > 0 { "+" } else { "-" },
            ));
        }
    }

    if problem.show_gram {
        let b = QuotientAlgebra::build(&field.components)?;
        let j = jacobian_det(&field);
        let l = choose_functional(&b, &j)?;
        let g = gram(
            &b,
            &l,
            &terms.cofactor,
            &crate::algebra::Subspace::full(b.dim()),
        )?;
        report.gram = Some(render_gram(&g.matrix));
    }

    if problem.oracle && f.nvars() == 2 {
        let eps = problem.epsilon.abs();
        let plus = curve_gsv(&f, &field, 1, &problem.box_radius, &eps)?;
        let minus = curve_gsv(&f, &field, -1, &problem.box_radius, &(-eps))?;
        let agree = plus.value == gp && minus.value == gm;
        report.oracle = Some(OracleReport {
            curve_gsv_plus: Some(plus),
            curve_gsv_minus: Some(minus),
            agreement: Some(agree),
            ..Default::default()
        });
    }
    Ok(report)
}

/// The `sigma` subcommand: flag and signature data of the singularity of f.
pub fn run_sigma(problem: &ProblemFile) -> Result<IndexReport> {
    if problem.order == OrderChoice::Global {
        return Err(Error::Invalid(
            "the flag signatures live on the local ring at the origin".to_string(),
        ));
    }
    let f = require_f(problem)?;
    let mut report = IndexReport::new("sigma", problem);
    report.f = Some(f.render(&problem.variables));
    let a = QuotientAlgebra::build(&gradient(&f))?;
    report.dims.dim_a = Some(a.dim());
    report.dims.dim_a_mod_f = Some(a.quotient_dim(&f)?);
    let fl = flag_of(&a, &f)?;
    report.flag_dims = Some(fl.dims());
    report.flag_depth = Some(fl.depth);
    let hess = hessian_det(&f);
    let l = choose_functional(&a, &hess)?;
    let sig = sigma_with(&a, &f, &fl, &l)?;
    report.sigma = Some(sig.sigmas.clone());
    report.variant_values = Some(VariantValues {
        as_published: (0, 0),
        reduced: (0, 0),
        k_plus: Some(sig.k_plus()),
        k_minus: Some(sig.k_minus()),
    });
    let g = gram(
        &a,
        &l,
        &Polynomial::one(f.nvars()),
        &crate::algebra::Subspace::full(a.dim()),
    )?;
    report.signatures.sgn_a_hess = Some(g.signature());
    if let Ok((cp, cm)) = crate::indices::euler_characteristics(&f) {
        report.indices.chi_plus = Some(cp);
        report.indices.chi_minus = Some(cm);
    }
    Ok(report)
}

/// The `algebra` subcommand: quotient algebra diagnostics for the ideal
/// generated by the field components (or the gradient of f).
pub fn run_algebra(problem: &ProblemFile) -> Result<IndexReport> {
    let mut report = IndexReport::new("algebra", problem);
    let gens: Vec<Polynomial> = if let Some(field) = problem.parse_field()? {
        report.field = Some(
            field
                .components
                .iter()
                .map(|c| c.render(&problem.variables))
                .collect(),
        );
        field.components
    } else {
        let f = require_f(problem)?;
        report.f = Some(f.render(&problem.variables));
        gradient(&f)
    };
    let order = problem.order.to_order(problem.variables.len());
    let a = QuotientAlgebra::build_with_order(&gens, order)?;
    report.dims.dim_b = Some(a.dim());
    report.algebra_basis = Some(
        a.basis()
            .iter()
            .map(|m| {
                Polynomial::monomial(m.clone(), num_traits::One::one()).render(&problem.variables)
            })
            .collect(),
    );
    let socle = a.socle()?;
    report.socle_dim = Some(socle.dim());
    report.socle_basis = Some(a.render_subspace(&socle, &problem.variables));
    Ok(report)
}

/// The `oracle degree` subcommand.
pub fn run_oracle_degree(problem: &ProblemFile) -> Result<IndexReport> {
    let field = require_field(problem)?;
    let mut report = IndexReport::new("oracle-degree", problem);
    report.field = Some(
        field
            .components
            .iter()
            .map(|c| c.render(&problem.variables))
            .collect(),
    );
    let region = BoxRegion::cube(field.nvars(), &problem.box_radius);
    let verdict = degree(&field, &region, &OracleConfig::default())?;
    report.indices.elk = Some(verdict.value);
    report.oracle = Some(OracleReport {
        degree: Some(verdict),
        ..Default::default()
    });
    Ok(report)
}

/// The `oracle curve-gsv` subcommand; the side is the sign of epsilon.
pub fn run_oracle_curve(problem: &ProblemFile) -> Result<IndexReport> {
    let f = require_f(problem)?;
    let field = require_field(problem)?;
    let mut report = IndexReport::new("oracle-curve-gsv", problem);
    report.f = Some(f.render(&problem.variables));
    report.field = Some(
        field
            .components
            .iter()
            .map(|c| c.render(&problem.variables))
            .collect(),
    );
    let side = if problem.epsilon.is_positive() {
        1i8
    } else {
        -1
    };
    let verdict = curve_gsv(&f, &field, side, &problem.box_radius, &problem.epsilon)?;
    let mut oracle = OracleReport::default();
    if side > 0 {
        oracle.curve_gsv_plus = Some(verdict);
    } else {
        oracle.curve_gsv_minus = Some(verdict);
    }
    report.oracle = Some(oracle);
    Ok(report)
}

fn error_tag(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse-error",
        Error::UnknownVariable(_) => "unknown-variable",
        Error::NegativeExponent(_) => "negative-exponent",
        Error::NotTangent { .. } => "not-tangent",
        Error::InfiniteDimensional => "infinite-dimensional",
        Error::UnitIdeal => "unit-ideal",
        Error::NotGorenstein(_) => "not-gorenstein",
        Error::RadicalMismatch => "radical-mismatch",
        Error::SocleZero => "socle-zero",
        Error::NotDivisible => "not-divisible",
        Error::BudgetExceeded(_) => "budget-exceeded",
        Error::BoundaryZero(_) => "boundary-zero",
        Error::TracingFailure(_) => "tracing-failure",
        Error::NonTransversalBoundary(_) => "non-transversal-boundary",
        Error::Parity(_) => "parity-error",
        Error::Invalid(_) => "invalid-input",
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationRow {
    pub file: String,
    pub check: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationSummary {
    pub rows: Vec<ValidationRow>,
    pub passed: usize,
    pub failed: usize,
}

/// Runs every `*.problem` file under `dir` (sorted by name), compares the
/// computed quantities against the file's `expect-*` annotations, and
/// tabulates the outcome.
pub fn run_validate(dir: &Path) -> Result<ValidationSummary> {
    let mut files: Vec<std::path::PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {}", dir.display(), e)))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "problem"))
        .collect();
    files.sort();
    let mut rows = Vec::new();
    for path in files {
        let name = path
            .file_name()
            .map(|s| s.to_string_lossy().to_string())
            .unwrap_or_default();
        match ProblemFile::from_path(&path) {
            Ok(problem) => validate_one(&name, &problem, &mut rows),
            Err(e) => rows.push(ValidationRow {
                file: name,
                check: "parse".to_string(),
                expected: "valid problem file".to_string(),
                actual: e.to_string(),
                pass: false,
            }),
        }
    }
    let passed = rows.iter().filter(|r| r.pass).count();
    let failed = rows.len() - passed;
    Ok(ValidationSummary {
        rows,
        passed,
        failed,
    })
}

fn validate_one(name: &str, problem: &ProblemFile, rows: &mut Vec<ValidationRow>) {
    let mut push = |check: &str, expected: String, actual: String| {
        let pass = expected == actual;
        rows.push(ValidationRow {
            file: name.to_string(),
            check: check.to_string(),
            expected,
            actual,
            pass,
        });
    };

    // if the problem expects an error, run the most specific applicable
    // command and compare the error tag
    if let Some(tag) = problem.expectations.get("expect-error") {
        let outcome = if problem.f.is_some() && (problem.field.is_some() || problem.hamiltonian) {
            run_gsv(problem)
        } else if problem.field.is_some() || problem.hamiltonian {
            run_elk(problem)
        } else {
            run_sigma(problem)
        };
        let outcome = outcome
            .err()
            .map(|e| error_tag(&e).to_string())
            .unwrap_or_else(|| "no-error".to_string());
        push("error", tag.clone(), outcome);
        return;
    }

    let gsv_report = if problem.f.is_some() && (problem.field.is_some() || problem.hamiltonian) {
        run_gsv(problem).ok()
    } else {
        None
    };
    let elk_report = if problem.field.is_some() || problem.hamiltonian {
        run_elk(problem).ok()
    } else {
        None
    };
    let sigma_report = if problem.f.is_some() {
        run_sigma(problem).ok()
    } else {
        None
    };

    for (key, expected) in &problem.expectations {
        let actual: String = match key.as_str() {
            "expect-elk" => elk_report
                .as_ref()
                .and_then(|r| r.indices.elk)
                .map(|v| v.to_string())
                .unwrap_or_else(|| "unavailable".to_string()),
            "expect-dim-a" => gsv_report
                .as_ref()
                .and_then(|r| r.dims.dim_a)
                .or_else(|| sigma_report.as_ref().and_then(|r| r.dims.dim_a))
                .map(|v| v.to_string())
                .unwrap_or_else(|| "unavailable".to_string()),
            "expect-dim-b" => gsv_report
                .as_ref()
                .and_then(|r| r.dims.dim_b)
                .or_else(|| elk_report.as_ref().and_then(|r| r.dims.dim_b))
                .map(|v| v.to_string())
                .unwrap_or_else(|| "unavailable".to_string()),
            "expect-gsv-plus" => gsv_report
                .as_ref()
                .and_then(|r| r.indices.gsv_plus)
                .map(|v| v.to_string())
                .unwrap_or_else(|| "unavailable".to_string()),
            "expect-gsv-minus" => gsv_report
                .as_ref()
                .and_then(|r| r.indices.gsv_minus)
                .map(|v| v.to_string())
                .unwrap_or_else(|| "unavailable".to_string()),
            "expect-gsv-complex" => gsv_report
                .as_ref()
                .and_then(|r| r.indices.gsv_complex)
                .map(|v| v.to_string())
                .unwrap_or_else(|| "unavailable".to_string()),
            "expect-sigma" => sigma_report
                .as_ref()
                .and_then(|r| r.sigma.as_ref())
                .map(|s| {
                    s.iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                })
                .unwrap_or_else(|| "unavailable".to_string()),
            "expect-flag-depth" => sigma_report
                .as_ref()
                .and_then(|r| r.flag_depth)
                .map(|v| v.to_string())
                .unwrap_or_else(|| "unavailable".to_string()),
            "expect-chi-plus" => sigma_report
                .as_ref()
                .and_then(|r| r.indices.chi_plus)
                .map(|v| v.to_string())
                .unwrap_or_else(|| "unavailable".to_string()),
            "expect-chi-minus" => sigma_report
                .as_ref()
                .and_then(|r| r.indices.chi_minus)
                .map(|v| v.to_string())
                .unwrap_or_else(|| "unavailable".to_string()),
            "expect-degree" => run_oracle_degree(problem)
                .ok()
                .and_then(|r| r.indices.elk)
                .map(|v| v.to_string())
                .unwrap_or_else(|| "unavailable".to_string()),
            other => {
                push(
                    other,
                    expected.clone(),
                    "unknown expectation key".to_string(),
                );
                continue;
            }
        };
        let normalized = expected
            .split(',')
            .map(|s| s.trim())
            .collect::<Vec<_>>()
            .join(",");
        push(key, normalized, actual);
    }

    // oracle cross-checks requested by the problem itself
    if problem.oracle {
        if let Some(r) = &elk_report {
            if let Some(o) = &r.oracle {
                if let (Some(engine), Some(v)) = (r.indices.elk, &o.degree) {
                    push("oracle-elk-degree", engine.to_string(), v.value.to_string());
                }
            }
        }
        if let Some(r) = &gsv_report {
            if let Some(o) = &r.oracle {
                if let (Some(gp), Some(v)) = (r.indices.gsv_plus, &o.curve_gsv_plus) {
                    push("oracle-gsv-plus", gp.to_string(), v.value.to_string());
                }
                if let (Some(gm), Some(v)) = (r.indices.gsv_minus, &o.curve_gsv_minus) {
                    push("oracle-gsv-minus", gm.to_string(), v.value.to_string());
                }
            }
        }
    }
}
