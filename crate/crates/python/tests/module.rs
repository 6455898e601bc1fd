use pyo3::prelude::*;
use pyo3::types::PyDict;

fn with_module<F: FnOnce(Python<'_>, &Bound<'_, PyModule>)>(f: F) {
    Python::initialize();
    Python::attach(|py| {
        let m = PyModule::new(py, "plate_ham").unwrap();
        plate_ham_py::register(&m).unwrap();
        f(py, &m);
    });
}

#[test]
fn module_solves_and_reports() {
    with_module(|py, m| {
        let locals = PyDict::new(py);
        locals.set_item("ph", m).unwrap();
        let code = c"
r = ph.solve_q(5.0, -0.35, order=50)
a = ph.solve_a(5.0, -0.5, iterate=True)
out = (r.w0_over_h, r.status, a.q, a.status, len(a.records), ph.BoundarySpec('simple').lam)
";
        py.run(code, None, Some(&locals)).unwrap();
        let (w, status, q, a_status, n, lam): (f64, String, f64, String, usize, f64) =
            locals.get_item("out").unwrap().unwrap().extract().unwrap();
        assert!((w - 0.62).abs() < 0.005);
        assert_eq!(status, "max_iter");
        assert!((q - 132.2).abs() < 0.1);
        assert_eq!(a_status, "converged");
        assert!(n > 1);
        assert!((lam - 2.0 / 1.3).abs() < 1e-12);

        let err = py
            .run(c"ph.BoundarySpec('clamped', 0.7)", None, Some(&locals))
            .unwrap_err();
        assert!(err.is_instance_of::<pyo3::exceptions::PyValueError>(py));
    });
}
