use pyo3::prelude::*;
use pyo3::types::PyDict;
use pyo3::wrap_pymodule;

fn with_module<R>(f: impl FnOnce(Python<'_>, &Bound<'_, PyDict>) -> R) -> R {
    Python::initialize();
    Python::attach(|py| {
        let m = wrap_pymodule!(heatwg_py::heatwg_py)(py);
        let g = PyDict::new(py);
        g.set_item("hw", m).unwrap();
        f(py, &g)
    })
}

fn eval<'py>(py: Python<'py>, g: &Bound<'py, PyDict>, code: &str) -> Bound<'py, PyAny> {
    let c = std::ffi::CString::new(code).unwrap();
    py.eval(&c, Some(g), None).unwrap()
}

#[test]
fn haar_entry_is_exact() {
    with_module(|py, g| {
        let s: String = eval(py, g, "hw.haar_moment(hw.Group('O', 2), 2).exact_entry([1, 1], [2, 2])").extract().unwrap();
        assert_eq!(s, "1/2");
    });
}

#[test]
fn formula_matches_oracle() {
    with_module(|py, g| {
        let d: f64 = eval(py, g, "hw.bm_moment(hw.Group('U', 2), 2, 0.8, m=1).max_abs_diff(hw.expm_moment(hw.Group('U', 2), 2, 0.8, m=1))")
            .extract()
            .unwrap();
        assert!(d < 1e-12, "{d}");
    });
}

#[test]
fn errors_become_value_errors() {
    with_module(|py, g| {
        let c = std::ffi::CString::new("hw.Group('Q', 2)").unwrap();
        let e = py.eval(&c, Some(g), None).unwrap_err();
        assert!(e.is_instance_of::<pyo3::exceptions::PyValueError>(py));
    });
}
