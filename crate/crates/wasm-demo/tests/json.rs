use haarql_wasm::{convergence_json, haar_family_json, solve_case_json, MAX_DEMO_LEVEL};

#[test]
fn solve_payload_tracks_published_values() {
    let v = solve_case_json(1, 3, 8).unwrap();
    assert_eq!(v["id"], 1);
    assert_eq!(v["curve"].as_array().unwrap().len(), 257);
    assert_eq!(v["grid"].as_array().unwrap().len(), 16);
    assert!(v["exact"].is_array());
    let published = v["published"].as_array().unwrap();
    assert_eq!(published.len(), 5);
    // curve sample at x = 0.5 against the published 0.47020
    let mid = &v["curve"][128];
    assert_eq!(mid[0].as_f64().unwrap(), 0.5);
    assert!((mid[1].as_f64().unwrap() - 0.47020).abs() < 5e-4);
}

#[test]
fn solve_payload_without_closed_form() {
    let v = solve_case_json(6, 3, 7).unwrap();
    assert!(v["exact"].is_null());
    assert!(v["converged"].as_bool().unwrap());
}

#[test]
fn convergence_rows() {
    let v = convergence_json(3, 2, 5).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows[0]["ratio"].is_null());
    for r in &rows[1..] {
        assert!(r["ratio"].as_f64().unwrap() >= 1.7);
    }
    assert_eq!(convergence_json(2, 2, 3).unwrap()["reference"], "finer solve");
}

#[test]
fn haar_family_shapes() {
    let v = haar_family_json(2, 6).unwrap();
    let h = v["h"].as_array().unwrap();
    assert_eq!(v["size"], 8);
    let values: Vec<f64> = h.iter().map(|p| p[1].as_f64().unwrap()).collect();
    assert!(values.contains(&1.0) && values.contains(&-1.0) && values.contains(&0.0));
    let p2_end = v["p2"].as_array().unwrap().last().unwrap()[1].as_f64().unwrap();
    assert!((p2_end - 1.0 / 64.0).abs() < 1e-15);
}

#[test]
fn bad_inputs_are_reported() {
    assert!(solve_case_json(9, 3, 5).is_err());
    assert!(solve_case_json(1, MAX_DEMO_LEVEL + 1, 5).is_err());
    assert!(convergence_json(1, 5, 2).is_err());
    assert!(haar_family_json(2, 0).is_err());
    assert!(haar_family_json(2, 9).is_err());
}
