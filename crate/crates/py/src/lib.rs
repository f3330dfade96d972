//! Python bindings. Words cross the boundary as lists of 1-based generator
//! indices and big counts as Python integers.

use braidgen::automaton::{build_automaton, ExportFormat};
use braidgen::counting::{count_with_prefix, reference_count};
use braidgen::oracle::{EquivClassExplorer, OracleBounds};
use braidgen::prefixes::{f_for_word, f_to_set};
use braidgen::sampler::{self, naive_sample, stream_rng, SampleRequest};
use braidgen::{ArtinWord, GrowthTables, PermBraid, StrandCount};
use num_bigint::BigUint;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn py_err(e: braidgen::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn strands(n: usize) -> PyResult<StrandCount> {
    StrandCount::new(n).map_err(py_err)
}

fn word(n: usize, letters: Vec<u16>) -> PyResult<ArtinWord> {
    ArtinWord::new(strands(n)?, letters).map_err(py_err)
}

/// A positive word in the Artin generators.
#[pyclass(name = "ArtinWord", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyArtinWord {
    inner: ArtinWord,
}

#[pymethods]
impl PyArtinWord {
    #[new]
    #[pyo3(signature = (n, letters = Vec::new()))]
    fn new(n: usize, letters: Vec<u16>) -> PyResult<Self> {
        Ok(PyArtinWord {
            inner: word(n, letters)?,
        })
    }

    #[getter]
    fn n(&self) -> u16 {
        self.inner.strands().get()
    }

    #[getter]
    fn letters(&self) -> Vec<u16> {
        self.inner.letters().to_vec()
    }

    fn is_lex_representative(&self) -> bool {
        f_for_word(&self.inner).is_some()
    }

    /// Minimal forbidden prefixes after this word, or `None` if it is not a
    /// lex-representative.
    fn forbidden_prefixes(&self) -> Option<Vec<Vec<u16>>> {
        f_for_word(&self.inner).map(|f| {
            f_to_set(&f)
                .elements()
                .iter()
                .map(|e| e.letters().to_vec())
                .collect()
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("ArtinWord({}, {:?})", self.n(), self.inner.letters())
    }
}

/// A braid in which every pair of strands crosses at most once.
#[pyclass(name = "PermBraid", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyPermBraid {
    inner: PermBraid,
}

#[pymethods]
impl PyPermBraid {
    #[staticmethod]
    fn from_word(n: usize, letters: Vec<u16>) -> PyResult<Self> {
        let inner = PermBraid::from_word(&word(n, letters)?).map_err(py_err)?;
        Ok(PyPermBraid { inner })
    }

    /// 1-based final positions of the strands.
    fn permutation(&self) -> Vec<u16> {
        self.inner.permutation()
    }

    fn lcm(&self, other: &PyPermBraid) -> PyResult<PyPermBraid> {
        let inner = self.inner.lcm(&other.inner).map_err(py_err)?;
        Ok(PyPermBraid { inner })
    }

    fn is_prefix_of(&self, other: &PyPermBraid) -> PyResult<bool> {
        self.inner.is_prefix_of(&other.inner).map_err(py_err)
    }

    /// The lexicographically least word of this braid.
    fn to_word(&self) -> Vec<u16> {
        self.inner.to_word().letters().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("PermBraid({:?})", self.inner.permutation())
    }
}

/// Counting tables for one strand count, with counting, ranking and
/// sampling up to `k_max`.
#[pyclass(name = "Braids")]
struct PyBraids {
    n: StrandCount,
    tables: GrowthTables,
}

impl PyBraids {
    fn ensure(&mut self, k: usize) {
        if k > self.tables.k_max() {
            self.tables.extend_to(k);
        }
    }
}

#[pymethods]
impl PyBraids {
    #[new]
    #[pyo3(signature = (n, k_max = 0))]
    fn new(n: usize, k_max: usize) -> PyResult<Self> {
        let n = strands(n)?;
        Ok(PyBraids {
            n,
            tables: GrowthTables::build(n, k_max),
        })
    }

    #[getter]
    fn n(&self) -> u16 {
        self.n.get()
    }

    /// Number of positive braids of length `k`.
    fn count(&mut self, k: usize) -> BigUint {
        self.ensure(k);
        self.tables.x(k).clone()
    }

    /// Length-`k` lex-representatives extending `prefix` whose next letter
    /// is greater than `m`.
    #[pyo3(signature = (k, prefix, m, reference = false))]
    fn count_with_prefix(
        &mut self,
        k: usize,
        prefix: Vec<u16>,
        m: usize,
        reference: bool,
    ) -> PyResult<BigUint> {
        self.ensure(k);
        let w = ArtinWord::new(self.n, prefix).map_err(py_err)?;
        if reference {
            reference_count(k, &w, m, &self.tables).map_err(py_err)
        } else {
            count_with_prefix(k, &w, m, &self.tables).map_err(py_err)
        }
    }

    /// The `r`-th lex-representative of length `k`, counting from 1.
    fn unrank(&mut self, k: usize, r: BigUint) -> PyResult<Vec<u16>> {
        self.ensure(k);
        let w = sampler::unrank(self.n, k, &r, &self.tables).map_err(py_err)?;
        Ok(w.into_letters())
    }

    fn rank(&mut self, letters: Vec<u16>) -> PyResult<BigUint> {
        self.ensure(letters.len());
        let w = ArtinWord::new(self.n, letters).map_err(py_err)?;
        sampler::rank(&w, &self.tables).map_err(py_err)
    }

    /// `count` uniformly random braids of length `k` as lex-representatives.
    #[pyo3(signature = (k, count = 1, seed = None))]
    fn sample(
        &mut self,
        py: Python<'_>,
        k: usize,
        count: usize,
        seed: Option<u64>,
    ) -> PyResult<Vec<Vec<u16>>> {
        self.ensure(k);
        let req = SampleRequest::new(self.n, k, count, seed).map_err(py_err)?;
        let tables = &self.tables;
        let words = py
            .detach(|| sampler::sample(&req, tables))
            .map_err(py_err)?;
        Ok(words.into_iter().map(ArtinWord::into_letters).collect())
    }

    fn __repr__(&self) -> String {
        format!("Braids(n={}, k_max={})", self.n, self.tables.k_max())
    }
}

/// `k` independent uniform letters: not uniform on braids.
#[pyfunction]
#[pyo3(signature = (n, k, seed = 0))]
fn naive_word(n: usize, k: usize, seed: u64) -> PyResult<Vec<u16>> {
    Ok(naive_sample(strands(n)?, k, &mut stream_rng(seed, 0)).into_letters())
}

/// The lexicographically least word equivalent to `letters`, by brute force.
#[pyfunction]
fn normalize(n: usize, letters: Vec<u16>) -> PyResult<Vec<u16>> {
    let mut ex = EquivClassExplorer::new(OracleBounds::from_env());
    let w = ex.normalize(&word(n, letters)?).map_err(py_err)?;
    Ok(w.into_letters())
}

/// All lex-representatives of length `k`, by brute force.
#[pyfunction]
fn enumerate_lex_reps(n: usize, k: usize) -> PyResult<Vec<Vec<u16>>> {
    let mut ex = EquivClassExplorer::new(OracleBounds::from_env());
    let words = ex.enumerate_lex_reps(strands(n)?, k).map_err(py_err)?;
    Ok(words.into_iter().map(ArtinWord::into_letters).collect())
}

/// Number of accepting states of the minimal lex-representative automaton.
#[pyfunction]
fn automaton_states(n: usize) -> PyResult<usize> {
    Ok(build_automaton(strands(n)?)
        .map_err(py_err)?
        .accepted_states())
}

/// The automaton rendered as `"dot"` or `"json"`.
#[pyfunction]
#[pyo3(signature = (n, format = "json"))]
fn automaton_export(n: usize, format: &str) -> PyResult<String> {
    let format: ExportFormat = format.parse().map_err(py_err)?;
    Ok(build_automaton(strands(n)?).map_err(py_err)?.export(format))
}

#[pymodule]
#[pyo3(name = "braidgen")]
fn braidgen_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyArtinWord>()?;
    m.add_class::<PyPermBraid>()?;
    m.add_class::<PyBraids>()?;
    m.add_function(wrap_pyfunction!(naive_word, m)?)?;
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_lex_reps, m)?)?;
    m.add_function(wrap_pyfunction!(automaton_states, m)?)?;
    m.add_function(wrap_pyfunction!(automaton_export, m)?)?;
    Ok(())
}
