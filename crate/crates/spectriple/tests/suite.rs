use spectriple::report::{Check, Report};
use spectriple::suite;
use spectriple::{Error, Exec};

#[test]
fn check_semantics() {
    assert!(Check::residual("a", 1e-12, 1e-10).pass);
    assert!(Check::residual("a", 1e-10, 1e-10).pass);
    assert!(!Check::residual("a", 2e-10, 1e-10).pass);
    assert!(!Check::residual("a", f64::NAN, 1e-10).pass);
    assert!(!Check::boolean("b", false).pass);
    let c = Check::boolean("b", true);
    assert_eq!((c.residual, c.value, c.tolerance), (None, Some(true), None));
}

#[test]
fn report_json_shape() {
    let mut r = Report::new("demo");
    r.param("m", 2).residual("r", 0.5, 1.0).boolean("b", false);
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["checks", "command", "data", "parameters", "wall_time_ms"]);
    assert!(v["wall_time_ms"].is_null());
    assert_eq!(v["checks"][0]["pass"], true);
    assert_eq!(r.failures().len(), 1);
    assert!(!r.passed());
    assert!(r.to_table().ends_with("2 checks, 1 failed\n"));
}

#[test]
fn absorb_prefixes_names() {
    let mut inner = Report::new("inner");
    inner.boolean("x", true).datum("k", 3);
    let mut outer = Report::new("outer");
    outer.absorb(inner);
    assert_eq!(outer.checks[0].name, "inner: x");
    assert_eq!(outer.data["inner"]["k"], 3);
}

#[test]
fn every_command_has_the_same_top_level_keys() {
    let reports = [
        suite::gamma(2, 1, false).unwrap(),
        suite::ko_table(Exec::Sequential).unwrap(),
        suite::christoffel("warped-diag", &[0.1, 0.05], &suite::DEFAULT_POINT, suite::DEFAULT_H).unwrap(),
        suite::product(1.0, None, 7).unwrap(),
    ];
    for r in &reports {
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v.as_object().unwrap().len(), 5);
        assert!(r.passed(), "{}", r.to_table());
    }
}

#[test]
fn gamma_report_labels_k() {
    assert_eq!(suite::k_label(2, 1), "gamma^(0)");
    assert_eq!(suite::k_label(1, 2), "I");
    assert_eq!(suite::k_label(2, 3), "igamma^(0)gamma^(1)gamma^(2)");
    assert_eq!(suite::k_label(2, 2), "-igamma^(2)gamma^(3)");
    let r = suite::gamma(2, 1, true).unwrap();
    assert!(r.passed());
    assert!(r.data["matrices"]["gammas"].is_array());
}

#[test]
fn parallel_and_sequential_reports_are_identical() {
    let a = suite::morphism(2, 1, 11, 40, Exec::Sequential).unwrap();
    let b = suite::morphism(2, 1, 11, 40, Exec::Parallel).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    let a = suite::spin(2, 1, 11, 100, Exec::Sequential).unwrap();
    let b = suite::spin(2, 1, 11, 100, Exec::Parallel).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert!(a.passed());
}

#[test]
fn seeds_change_samples_but_not_outcomes() {
    let a = suite::spin(2, 1, 1, 50, Exec::Parallel).unwrap();
    let b = suite::spin(2, 1, 2, 50, Exec::Parallel).unwrap();
    assert!(a.passed() && b.passed());
    assert_ne!(a.to_json(), b.to_json());
}

#[test]
fn lattice_product_passes() {
    let r = suite::product(0.5, Some(8), 3).unwrap();
    assert!(r.passed(), "{}", r.to_table());
    assert!(matches!(suite::product(0.5, Some(7), 3), Err(Error::UnsupportedLattice(_))));
}

#[test]
fn sigsolve_report() {
    let r = suite::sigsolve(Some(-1), Exec::Parallel).unwrap();
    assert!(r.passed(), "{}", r.to_table());
    assert_eq!(r.checks.len(), 4);
}

#[test]
fn signature_validation() {
    assert!(suite::check_signature(2, 4).is_ok());
    assert!(matches!(suite::check_signature(2, 5), Err(Error::InvalidSignature { .. })));
    assert!(matches!(suite::gamma(5, 1, false), Err(Error::UnsupportedDimension(5))));
}
