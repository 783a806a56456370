//! Python bindings for the index engine. Inputs are variable-name lists and
//! expression strings in the engine's grammar (`p/q` rationals, `+ - * ^`,
//! explicit `*`); outputs are plain Python values, with full reports
//! available as JSON strings.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use phindex_core::algebra::QuotientAlgebra;
use phindex_core::expr::{parse_poly, Polynomial, VectorField};
use phindex_core::indices::{self, Variant};
use phindex_core::oracle::{self, BoxRegion, OracleConfig, OracleVerdict};
use phindex_core::report::{parse_rat, ProblemFile};

fn err<T>(r: phindex_core::Result<T>) -> PyResult<T> {
    r.map_err(|e| PyValueError::new_err(e.to_string()))
}

fn parse_f(variables: &[String], f: &str) -> PyResult<Polynomial> {
    err(parse_poly(f, variables))
}

fn parse_field(variables: &[String], comps: &[String]) -> PyResult<VectorField> {
    if comps.len() != variables.len() {
        return Err(PyValueError::new_err(format!(
            "field has {} components for {} variables",
            comps.len(),
            variables.len()
        )));
    }
    let parsed: phindex_core::Result<Vec<Polynomial>> =
        comps.iter().map(|t| parse_poly(t, variables)).collect();
    Ok(VectorField::new(err(parsed)?))
}

fn parse_variant(variant: &str) -> PyResult<Variant> {
    err(Variant::parse(variant))
}

fn verdict_dict<'py>(py: Python<'py>, v: &OracleVerdict) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("value", v.value)?;
    d.set_item("method", &v.method)?;
    d.set_item("certified", v.certified)?;
    d.set_item("cells", v.effort.cells)?;
    d.set_item("refinements", v.effort.refinements)?;
    Ok(d)
}

/// Poincare-Hopf index of the vector field at the origin.
#[pyfunction]
fn elk_index(variables: Vec<String>, field: Vec<String>) -> PyResult<i64> {
    let x = parse_field(&variables, &field)?;
    err(indices::elk_index(&x))
}

/// Real GSV index pair (side +, side -) of a field tangent to f = 0.
#[pyfunction]
#[pyo3(signature = (variables, f, field, variant = "reduced"))]
fn gsv_real(
    variables: Vec<String>,
    f: &str,
    field: Vec<String>,
    variant: &str,
) -> PyResult<(i64, i64)> {
    let fpoly = parse_f(&variables, f)?;
    let x = parse_field(&variables, &field)?;
    err(indices::gsv_real(&fpoly, &x, parse_variant(variant)?))
}

/// Complex GSV index from the quotient-dimension formula.
#[pyfunction]
fn gsv_complex(variables: Vec<String>, f: &str, field: Vec<String>) -> PyResult<i64> {
    let fpoly = parse_f(&variables, f)?;
    let x = parse_field(&variables, &field)?;
    err(indices::gsv_complex(&fpoly, &x))
}

/// The cofactor h with X(f) = f*h, rendered in the input variables.
#[pyfunction]
fn cofactor(variables: Vec<String>, f: &str, field: Vec<String>) -> PyResult<String> {
    let fpoly = parse_f(&variables, f)?;
    let x = parse_field(&variables, &field)?;
    let h = err(phindex_core::expr::cofactor(&x, &fpoly))?;
    Ok(h.render(&variables))
}

/// The signatures sigma_0..sigma_l of the flag attached to f.
#[pyfunction]
fn sigma(variables: Vec<String>, f: &str) -> PyResult<Vec<i64>> {
    let fpoly = parse_f(&variables, f)?;
    Ok(err(indices::sigma(&fpoly))?.sigmas)
}

/// Dimensions of the flag subspaces K_0, K_1, ..., K_{l+1}.
#[pyfunction]
fn flag_dims(variables: Vec<String>, f: &str) -> PyResult<Vec<usize>> {
    let fpoly = parse_f(&variables, f)?;
    Ok(err(indices::flag(&fpoly))?.dims())
}

/// (chi(V_+), chi(V_-)) of the two real smoothings of f = 0.
#[pyfunction]
fn euler_characteristics(variables: Vec<String>, f: &str) -> PyResult<(i64, i64)> {
    let fpoly = parse_f(&variables, f)?;
    err(indices::euler_characteristics(&fpoly))
}

/// The pairwise-Hamiltonian tangent field of f (even variable count).
#[pyfunction]
fn hamiltonian_field(variables: Vec<String>, f: &str) -> PyResult<Vec<String>> {
    let fpoly = parse_f(&variables, f)?;
    let x = err(indices::canonical_hamiltonian(&fpoly))?;
    Ok(x.components.iter().map(|c| c.render(&variables)).collect())
}

/// The canonical odd-parity tangent field of f at level t (rational string).
#[pyfunction]
#[pyo3(signature = (variables, f, t = "0"))]
fn odd_field(variables: Vec<String>, f: &str, t: &str) -> PyResult<Vec<String>> {
    let fpoly = parse_f(&variables, f)?;
    let tval = err(parse_rat(t))?;
    let x = err(indices::canonical_odd_field(&fpoly, &tval))?;
    Ok(x.components.iter().map(|c| c.render(&variables)).collect())
}

/// Quotient-algebra diagnostics for an ideal: dimension, monomial basis,
/// socle dimension and basis.
#[pyfunction]
fn algebra_info<'py>(
    py: Python<'py>,
    variables: Vec<String>,
    generators: Vec<String>,
) -> PyResult<Bound<'py, PyDict>> {
    let gens: phindex_core::Result<Vec<Polynomial>> = generators
        .iter()
        .map(|t| parse_poly(t, &variables))
        .collect();
    let a = err(QuotientAlgebra::build(&err(gens)?))?;
    let socle = err(a.socle())?;
    let d = PyDict::new(py);
    d.set_item("dimension", a.dim())?;
    let basis: Vec<String> = a
        .basis()
        .iter()
        .map(|m| Polynomial::monomial(m.clone(), num_traits::One::one()).render(&variables))
        .collect();
    d.set_item("basis", basis)?;
    d.set_item("socle_dimension", socle.dim())?;
    d.set_item("socle_basis", a.render_subspace(&socle, &variables))?;
    Ok(d)
}

/// Certified topological degree of the field over the cube [-radius, radius]^n.
#[pyfunction]
#[pyo3(signature = (variables, field, radius = "1"))]
fn oracle_degree<'py>(
    py: Python<'py>,
    variables: Vec<String>,
    field: Vec<String>,
    radius: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let x = parse_field(&variables, &field)?;
    let r = err(parse_rat(radius))?;
    let region = BoxRegion::cube(variables.len(), &r);
    let v = err(oracle::degree(&x, &region, &OracleConfig::default()))?;
    verdict_dict(py, &v)
}

/// Fiber-smoothing GSV count for a plane curve; the side is the sign of
/// epsilon (a rational string such as "1/8" or "-1/8").
#[pyfunction]
#[pyo3(signature = (variables, f, field, epsilon, radius = "1"))]
fn curve_gsv<'py>(
    py: Python<'py>,
    variables: Vec<String>,
    f: &str,
    field: Vec<String>,
    epsilon: &str,
    radius: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let fpoly = parse_f(&variables, f)?;
    let x = parse_field(&variables, &field)?;
    let eps = err(parse_rat(epsilon))?;
    let r = err(parse_rat(radius))?;
    let side = if eps >= num_traits::Zero::zero() {
        1i8
    } else {
        -1
    };
    let v = err(oracle::curve_gsv(&fpoly, &x, side, &r, &eps))?;
    verdict_dict(py, &v)
}

/// Full GSV report as a JSON string (exactly the CLI's --json output).
#[pyfunction]
#[pyo3(signature = (variables, f, field, variant = "reduced"))]
fn gsv_report_json(
    variables: Vec<String>,
    f: &str,
    field: Vec<String>,
    variant: &str,
) -> PyResult<String> {
    if field.len() != variables.len() {
        return Err(PyValueError::new_err("field/variable count mismatch"));
    }
    let mut text = format!(
        "variables: {}\nf: {}\nX: {}\n",
        variables.join(", "),
        f,
        field.join(", ")
    );
    text.push_str(&format!("variant: {}\n", parse_variant(variant)?.as_str()));
    let problem = err(ProblemFile::parse_str(&text))?;
    let report = err(phindex_core::report::run_gsv(&problem))?;
    Ok(report.to_json())
}

/// Parse and re-render a polynomial in canonical graded order.
#[pyfunction]
fn canonical_form(variables: Vec<String>, expression: &str) -> PyResult<String> {
    let p = parse_f(&variables, expression)?;
    Ok(p.render(&variables))
}

#[pymodule]
fn phindex(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(elk_index, m)?)?;
    m.add_function(wrap_pyfunction!(gsv_real, m)?)?;
    m.add_function(wrap_pyfunction!(gsv_complex, m)?)?;
    m.add_function(wrap_pyfunction!(cofactor, m)?)?;
    m.add_function(wrap_pyfunction!(sigma, m)?)?;
    m.add_function(wrap_pyfunction!(flag_dims, m)?)?;
    m.add_function(wrap_pyfunction!(euler_characteristics, m)?)?;
    m.add_function(wrap_pyfunction!(hamiltonian_field, m)?)?;
    m.add_function(wrap_pyfunction!(odd_field, m)?)?;
    m.add_function(wrap_pyfunction!(algebra_info, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_degree, m)?)?;
    m.add_function(wrap_pyfunction!(curve_gsv, m)?)?;
    m.add_function(wrap_pyfunction!(gsv_report_json, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_form, m)?)?;
    Ok(())
}
