//! Python bindings. Structured results cross the boundary as the same JSON
//! the CLI prints.

use lpacket::algebra::{smith_normal_form, IntMatrix};
use lpacket::building::appendix_table as table_rows;
use lpacket::cli::{packet_input, packet_output, to_json, validate_input, CliError, ParameterFile};
use lpacket::weyl_signed::{self, SignedPermutation};
use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

type Rows = Vec<Vec<BigInt>>;

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn cli_error(e: CliError) -> PyErr {
    PyValueError::new_err(format!("exit {}: {e}", e.exit_code()))
}

/// An element of the hyperoctahedral group `B_m`.
#[pyclass(name = "SignedPermutation", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PySignedPermutation(SignedPermutation);

#[pymethods]
impl PySignedPermutation {
    #[new]
    fn new(images: Vec<i32>) -> PyResult<Self> {
        SignedPermutation::new(images).map(Self).map_err(value_error)
    }

    #[staticmethod]
    fn parse(text: &str, m: usize) -> PyResult<Self> {
        SignedPermutation::parse(text, m).map(Self).map_err(value_error)
    }

    #[staticmethod]
    fn coxeter(m: usize) -> Self {
        Self(SignedPermutation::coxeter(m))
    }

    #[staticmethod]
    fn eta(m: usize) -> Self {
        Self(SignedPermutation::eta(m))
    }

    #[getter]
    fn images(&self) -> Vec<i32> {
        self.0.images().to_vec()
    }

    fn compose(&self, other: &Self) -> PyResult<Self> {
        self.0.compose(&other.0).map(Self).map_err(value_error)
    }

    fn inverse(&self) -> Self {
        Self(self.0.inverse())
    }

    fn order(&self) -> usize {
        self.0.order()
    }

    fn is_elliptic(&self) -> bool {
        self.0.is_elliptic()
    }

    /// `(mu, nu)`: lengths of positive and negative cycles.
    fn cycle_type(&self) -> (Vec<usize>, Vec<usize>) {
        let t = self.0.signed_cycle_type();
        (t.mu.parts().to_vec(), t.nu.parts().to_vec())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("SignedPermutation({:?})", self.0.images())
    }
}

/// `[(mu, nu, size, elliptic)]` for every class of `B_m`.
#[pyfunction]
fn conjugacy_classes(m: usize) -> Vec<(Vec<usize>, Vec<usize>, BigInt, bool)> {
    weyl_signed::conjugacy_classes(m)
        .into_iter()
        .map(|c| (c.cycle_type.mu.parts().to_vec(), c.cycle_type.nu.parts().to_vec(), c.size.into(), c.elliptic))
        .collect()
}

/// `(U, D, V)` with `U A V = D`.
#[pyfunction]
fn smith_form(rows: Rows) -> PyResult<(Rows, Rows, Rows)> {
    let a = IntMatrix::from_big_rows(rows).map_err(value_error)?;
    let s = smith_normal_form(&a);
    Ok((s.u.to_rows(), s.d.to_rows(), s.v.to_rows()))
}

/// `(ok, json)` for a parameter file given as TOML text.
#[pyfunction]
fn validate(toml: &str) -> PyResult<(bool, String)> {
    let input = ParameterFile::from_toml(toml).map_err(cli_error)?;
    let (out, ok) = validate_input(input).map_err(cli_error)?;
    Ok((ok, to_json(&out)))
}

/// Packet JSON for a parameter file given as TOML text.
#[pyfunction]
fn packet(toml: &str) -> PyResult<String> {
    let input = ParameterFile::from_toml(toml).map_err(cli_error)?;
    let (input, desc) = packet_input(input).map_err(cli_error)?;
    Ok(to_json(&packet_output(input, &desc)))
}

/// Reduction labels listed for `n` and the given inner form.
#[pyfunction]
fn appendix_table(n: usize, quasi_split: bool) -> PyResult<Vec<String>> {
    Ok(table_rows(n, quasi_split).map_err(value_error)?.iter().map(ToString::to_string).collect())
}

#[pymodule(name = "lpacket")]
fn lpacket_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySignedPermutation>()?;
    m.add_function(wrap_pyfunction!(conjugacy_classes, m)?)?;
    m.add_function(wrap_pyfunction!(smith_form, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(packet, m)?)?;
    m.add_function(wrap_pyfunction!(appendix_table, m)?)?;
    m.add("SCHEMA_VERSION", lpacket::cli::SCHEMA_VERSION)?;
    Ok(())
}
