//! Python bindings: the complex/subcomplex types, restriction kernels, the
//! instance generators, and the counting entry points.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use vcdlab::applications::{epsilon_net_sample, halfplane_circles_triple};
use vcdlab::arrangements::schema::InstanceFile;
use vcdlab::arrangements::{
    enumerate_realizable_patterns, gen_generic_hyperplanes, gen_pencil_instance, GridInstance,
};
use vcdlab::cohomology::{self, cohomology_space};
use vcdlab::exactq::Rational;
use vcdlab::vcdensity::{fit_vcd_slope, kernel_set, sauer_shelah_check, SetSystem};

fn to_py_err(e: vcdlab::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A finite simplicial complex of dimension at most two.
#[pyclass(frozen, name = "Complex")]
struct PyComplex {
    inner: cohomology::Complex,
}

#[pymethods]
impl PyComplex {
    #[new]
    #[pyo3(signature = (vertices, edges, triangles=vec![]))]
    fn new(
        vertices: Vec<usize>,
        edges: Vec<(usize, usize)>,
        triangles: Vec<(usize, usize, usize)>,
    ) -> PyResult<Self> {
        let inner =
            cohomology::Complex::from_parts(vertices, edges, triangles).map_err(to_py_err)?;
        Ok(PyComplex { inner })
    }

    /// A simplicial circle on `n >= 3` vertices.
    #[staticmethod]
    fn cycle(n: usize) -> Self {
        PyComplex {
            inner: cohomology::Complex::cycle_graph(n),
        }
    }

    /// A path with `n >= 1` edges.
    #[staticmethod]
    fn path(n: usize) -> Self {
        PyComplex {
            inner: cohomology::Complex::path_graph(n),
        }
    }

    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn triangle_count(&self) -> usize {
        self.inner.triangle_count()
    }

    /// `dim H^p` with rational coefficients, `p` in {0, 1, 2}.
    fn betti(&self, p: usize) -> PyResult<usize> {
        Ok(cohomology_space(&self.inner, p)
            .map_err(to_py_err)?
            .quotient_dim())
    }

    /// The subcomplex induced on a set of vertex ids.
    fn induced_subcomplex(&self, vertices: Vec<usize>) -> PySubcomplex {
        let sub =
            cohomology::Subcomplex::induced_on_vertices(&self.inner, |v| vertices.contains(&v));
        PySubcomplex { inner: sub }
    }

    fn full_subcomplex(&self) -> PySubcomplex {
        PySubcomplex {
            inner: cohomology::Subcomplex::full(&self.inner),
        }
    }

    /// Kernel of `H^p(self) -> H^p(sub)`: returns `(dim, basis)` where the
    /// basis rows are rational strings in the fixed `H^p` coordinates.
    fn restriction_kernel(
        &self,
        sub: &PySubcomplex,
        p: usize,
    ) -> PyResult<(usize, Vec<Vec<String>>)> {
        let (_, kernel) =
            cohomology::restriction_on_hp(&self.inner, &sub.inner, p).map_err(to_py_err)?;
        let basis = (0..kernel.basis().rows())
            .map(|r| {
                kernel
                    .basis()
                    .row(r)
                    .iter()
                    .map(|x| x.to_string())
                    .collect()
            })
            .collect();
        Ok((kernel.dim(), basis))
    }

    fn __repr__(&self) -> String {
        format!(
            "Complex(vertices={}, edges={}, triangles={})",
            self.inner.vertex_count(),
            self.inner.edge_count(),
            self.inner.triangle_count()
        )
    }
}

/// A closed subcomplex selection, relative to the complex it came from.
#[pyclass(frozen, name = "Subcomplex")]
struct PySubcomplex {
    inner: cohomology::Subcomplex,
}

#[pymethods]
impl PySubcomplex {
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn __repr__(&self) -> String {
        format!(
            "Subcomplex(vertices={}, edges={})",
            self.inner.vertex_count(),
            self.inner.edge_count()
        )
    }
}

/// `dim H^1` of the n-by-n grid-of-lines complex.
#[pyfunction]
fn grid_betti(n: usize) -> PyResult<usize> {
    let g = GridInstance::generate(n).map_err(to_py_err)?;
    Ok(cohomology_space(g.complex(), 1)
        .map_err(to_py_err)?
        .quotient_dim())
}

/// Sorted dimensions of the distinct restriction kernels over the grid sweep.
#[pyfunction]
fn grid_sweep_kernel_dimensions(n: usize) -> PyResult<Vec<usize>> {
    let g = GridInstance::generate(n).map_err(to_py_err)?;
    let ks = kernel_set(g.complex(), &g.sweep_subcomplexes(), 1).map_err(to_py_err)?;
    Ok(ks.dimensions())
}

/// Exact distinct-kernel count of the grid sweep (cheap at any size).
#[pyfunction]
fn grid_distinct_kernel_count(n: usize) -> PyResult<usize> {
    Ok(GridInstance::generate(n)
        .map_err(to_py_err)?
        .sweep_distinct_kernel_count())
}

/// The grid instance as vcdlab-instance/1 JSON.
#[pyfunction]
fn grid_instance_json(n: usize) -> PyResult<String> {
    Ok(InstanceFile::from_grid(&GridInstance::generate(n).map_err(to_py_err)?).to_json())
}

/// Number of realizable 0/1-patterns of `count` generic hyperplanes in P^m.
#[pyfunction]
fn hyperplane_pattern_count(m: usize, count: usize, seed: u64) -> PyResult<usize> {
    let family = gen_generic_hyperplanes(m, count, seed).map_err(to_py_err)?;
    Ok(enumerate_realizable_patterns(&family).len())
}

/// Distinct restriction kernels over the pencil construction's test points.
#[pyfunction]
fn pencil_distinct_kernel_count(n: usize, seed: u64) -> PyResult<usize> {
    let inst = gen_pencil_instance(n, seed).map_err(to_py_err)?;
    let tests: Vec<_> = inst.fibers().values().cloned().collect();
    let ks = kernel_set(inst.incidence_graph(), &tests, 1).map_err(to_py_err)?;
    Ok(ks.len())
}

/// Least-squares slope of log(count) against log(n):
/// returns `(slope, intercept, r_squared)`.
#[pyfunction]
fn fit_slope(points: Vec<(usize, usize)>) -> PyResult<(f64, f64, f64)> {
    let fit = fit_vcd_slope(&points).map_err(to_py_err)?;
    Ok((fit.slope, fit.intercept, fit.r_squared))
}

/// Brute-force VC dimension of a set system given as bit masks.
#[pyfunction]
fn vc_dimension(ground: usize, sets: Vec<u64>) -> PyResult<usize> {
    SetSystem::new(ground, sets)
        .and_then(|s| s.vc_dimension())
        .map_err(to_py_err)
}

/// Quantitative Sauer-Shelah check for the exact VC dimension `d`.
#[pyfunction]
fn sauer_shelah(ground: usize, sets: Vec<u64>, d: usize) -> PyResult<bool> {
    SetSystem::new(ground, sets)
        .and_then(|s| sauer_shelah_check(&s, d))
        .map_err(to_py_err)
}

/// Runs the seeded epsilon-net experiment on the half-plane circles family;
/// returns `(net_size, success_rate)`.
#[pyfunction]
fn epsilon_net_experiment(
    circles: usize,
    eps: &str,
    c_const: &str,
    density_bound: usize,
    trials: usize,
    seed: u64,
) -> PyResult<(usize, f64)> {
    let eps: Rational = eps.parse().map_err(PyValueError::new_err)?;
    let c: Rational = c_const.parse().map_err(PyValueError::new_err)?;
    let t = halfplane_circles_triple(circles).map_err(to_py_err)?;
    let out =
        epsilon_net_sample(&t, 1, &eps, &c, density_bound, trials, seed).map_err(to_py_err)?;
    Ok((out.net_size, out.success_rate))
}

#[pymodule]
fn vcdlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyComplex>()?;
    m.add_class::<PySubcomplex>()?;
    m.add_function(wrap_pyfunction!(grid_betti, m)?)?;
    m.add_function(wrap_pyfunction!(grid_sweep_kernel_dimensions, m)?)?;
    m.add_function(wrap_pyfunction!(grid_distinct_kernel_count, m)?)?;
    m.add_function(wrap_pyfunction!(grid_instance_json, m)?)?;
    m.add_function(wrap_pyfunction!(hyperplane_pattern_count, m)?)?;
    m.add_function(wrap_pyfunction!(pencil_distinct_kernel_count, m)?)?;
    m.add_function(wrap_pyfunction!(fit_slope, m)?)?;
    m.add_function(wrap_pyfunction!(vc_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(sauer_shelah, m)?)?;
    m.add_function(wrap_pyfunction!(epsilon_net_experiment, m)?)?;
    Ok(())
}
