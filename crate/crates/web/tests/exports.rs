use ordfem_web::{convergence_json, infsup_json, slice_json};

#[test]
fn convergence_report_round_trips() {
    let v: serde_json::Value = serde_json::from_str(&convergence_json("bilaplacian", "2,3", "bump").unwrap()).unwrap();
    assert_eq!(v["study"], "convergence");
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert!(convergence_json("bilaplacian", "2,16", "unit").is_err());
    assert!(convergence_json("plate", "2", "unit").is_err());
}

#[test]
fn infsup_report_round_trips() {
    let v: serde_json::Value = serde_json::from_str(&infsup_json("div", "2").unwrap()).unwrap();
    assert!(v["betas"][0].as_f64().unwrap() > 0.0);
}

#[test]
fn slice_holds_both_fields() {
    let v: serde_json::Value = serde_json::from_str(&slice_json("quadcurl", 2, 0.5, 8).unwrap()).unwrap();
    assert_eq!(v["discrete"].as_array().unwrap().len(), 64);
    assert_eq!(v["exact"].as_array().unwrap().len(), 64);
    assert!(v["max_error"].as_f64().unwrap().is_finite());
    assert!(slice_json("bilaplacian", 2, 1.5, 8).is_err());
}
