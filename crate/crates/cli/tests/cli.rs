//! End-to-end tests of the binary: round trips over every shipped config,
//! the documented exit codes, and byte stability of the outputs.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_infomenu")
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("spawn binary")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn path_str(path: &Path) -> &str {
    path.to_str().expect("utf-8 path")
}

fn solve(config: &Path, out: &Path) -> Output {
    run(&[
        "solve",
        "--config",
        path_str(config),
        "--out",
        path_str(out),
    ])
}

fn verify(menu: &Path, config: &Path) -> Output {
    run(&["verify", path_str(menu), "--config", path_str(config)])
}

#[test]
fn two_type_round_trips_and_reports_regimes() {
    let dir = tempfile::tempdir().unwrap();
    for (file, regime) in [
        ("figure1_cell.toml", "FULL_SURPLUS"),
        ("two_type_rents.toml", "RENTS_TO_HIGH"),
    ] {
        let config = configs().join(file);
        let menu = dir.path().join(file).with_extension("json");
        let solved = solve(&config, &menu);
        assert!(solved.status.success(), "{}", stderr(&solved));
        assert!(
            stdout(&solved).contains(&format!("regime={regime}")),
            "unexpected stdout for {file}: {}",
            stdout(&solved)
        );
        let verified = verify(&menu, &config);
        assert!(verified.status.success(), "{}", stderr(&verified));
    }
}

#[test]
fn continuum_round_trip_writes_header_with_rent_peak() {
    let dir = tempfile::tempdir().unwrap();
    let config = configs().join("figure3.toml");
    let schedule = dir.path().join("schedule.csv");
    let solved = solve(&config, &schedule);
    assert!(solved.status.success(), "{}", stderr(&solved));

    let header: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("schedule.json")).unwrap())
            .unwrap();
    let theta_g = header["theta_g"].as_f64().unwrap();
    assert!((theta_g - 0.4055).abs() < 1e-3, "theta_g = {theta_g}");
    assert!(header["revenue"].as_f64().unwrap() > 0.0);

    let csv = fs::read_to_string(&schedule).unwrap();
    assert!(csv.starts_with("theta,pi_g,pi_b,price,rent\n"));
    assert_eq!(csv.lines().count(), 402);

    let verified = verify(&schedule, &config);
    assert!(verified.status.success(), "{}", stderr(&verified));
}

#[test]
fn posted_price_round_trip_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let config = configs().join("posted_price.toml");
    let menu = dir.path().join("posted.json");
    let solved = solve(&config, &menu);
    assert!(solved.status.success(), "{}", stderr(&solved));

    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&menu).unwrap()).unwrap();
    assert!((doc["price"].as_f64().unwrap() - 1.0 / 6.0).abs() < 1e-6);
    assert!((doc["revenue"].as_f64().unwrap() - 1.0 / 12.0).abs() < 1e-6);

    let verified = verify(&menu, &config);
    assert!(verified.status.success(), "{}", stderr(&verified));
}

#[test]
fn tampered_price_fails_verification_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let config = configs().join("figure1_cell.toml");
    let menu = dir.path().join("menu.json");
    assert!(solve(&config, &menu).status.success());

    let mut doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&menu).unwrap()).unwrap();
    let price = doc["menu"]["high"]["price"].as_f64().unwrap();
    doc["menu"]["high"]["price"] = serde_json::json!(price * 1.1);
    fs::write(&menu, serde_json::to_string_pretty(&doc).unwrap()).unwrap();

    let verified = verify(&menu, &config);
    assert_eq!(verified.status.code(), Some(1), "{}", stderr(&verified));
    let report = stdout(&verified);
    assert!(report.contains("\"clean\": false"), "{report}");
}

#[test]
fn missing_mu_exits_2_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    fs::write(
        &config,
        "schema_version = 1\nkind = \"two_type\"\nrho = 0.7\n\n[prior]\np = 0.1\n\n[payoff]\nu_l = 1.0\nu_h = 2.0\n",
    )
    .unwrap();
    let out = dir.path().join("menu.json");
    let solved = solve(&config, &out);
    assert_eq!(solved.status.code(), Some(2));
    assert!(stderr(&solved).contains("mu"), "{}", stderr(&solved));
}

#[test]
fn empty_menu_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let menu = dir.path().join("empty.json");
    fs::write(&menu, "").unwrap();
    let verified = verify(&menu, &configs().join("figure1_cell.toml"));
    assert_eq!(verified.status.code(), Some(2), "{}", stderr(&verified));
}

#[test]
fn mismatched_menu_kind_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let menu = dir.path().join("menu.json");
    assert!(solve(&configs().join("figure1_cell.toml"), &menu)
        .status
        .success());
    // Two-type menu JSON audited against the posted-price economy.
    let verified = verify(&menu, &configs().join("posted_price.toml"));
    assert_eq!(verified.status.code(), Some(2), "{}", stderr(&verified));
}

#[test]
fn region_map_emits_cells_and_boundaries() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("map.csv");
    let ran = run(&[
        "region-map",
        "--config",
        path_str(&configs().join("region_map.toml")),
        "--out",
        path_str(&out),
    ]);
    assert!(ran.status.success(), "{}", stderr(&ran));

    let cells = fs::read_to_string(&out).unwrap();
    assert!(cells.starts_with("u,p,regime,t_l,t_h,pi_lg,pi_lb,revenue\n"));
    // 81 u-values x 51 p-values plus the header.
    assert_eq!(cells.lines().count(), 81 * 51 + 1);
    assert!(cells.contains("FULL_SURPLUS") && cells.contains("RENTS_TO_HIGH"));

    let boundary = fs::read_to_string(dir.path().join("map.boundary.csv")).unwrap();
    assert!(boundary.starts_with("u,p_full_surplus,p_rents\n"));
    assert_eq!(boundary.lines().count(), 82);
}

#[test]
fn single_cell_region_map() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("one.toml");
    fs::write(
        &config,
        "schema_version = 1\nkind = \"two_type\"\nrho = 0.7\n\n[prior]\nmu = 0.6666666666666666\n\n[region_grid]\nu_min = 2.0\nu_max = 2.0\nu_step = 0.1\np_min = 0.1\np_max = 0.1\np_step = 0.1\n",
    )
    .unwrap();
    let out = dir.path().join("one.csv");
    let ran = run(&[
        "region-map",
        "--config",
        path_str(&config),
        "--out",
        path_str(&out),
    ]);
    assert!(ran.status.success(), "{}", stderr(&ran));
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 2);
}

#[test]
fn p_range_beyond_prior_support_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("wide.toml");
    fs::write(
        &config,
        "schema_version = 1\nkind = \"two_type\"\nrho = 0.7\n\n[prior]\nmu = 0.6666666666666666\n\n[region_grid]\nu_min = 1.0\nu_max = 2.0\nu_step = 0.5\np_min = 0.0\np_max = 0.6\np_step = 0.1\n",
    )
    .unwrap();
    let out = dir.path().join("wide.csv");
    let ran = run(&[
        "region-map",
        "--config",
        path_str(&config),
        "--out",
        path_str(&out),
    ]);
    assert_eq!(ran.status.code(), Some(2));
    assert!(stderr(&ran).contains("p_max"), "{}", stderr(&ran));
}

#[test]
fn simulate_agrees_with_analytic_value() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sim.json");
    let ran = run(&[
        "simulate",
        "--config",
        path_str(&configs().join("simulate.toml")),
        "--out",
        path_str(&out),
        "--seed",
        "3",
    ]);
    assert!(ran.status.success(), "{}", stderr(&ran));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let se = doc["std_error"].as_f64().unwrap();
    assert!(doc["abs_error"].as_f64().unwrap() <= 4.0 * se + 1e-12);
}

#[test]
fn outputs_are_byte_stable_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let config = configs().join("figure3.toml");
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    assert!(solve(&config, &a).status.success());
    assert!(solve(&config, &b).status.success());
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(
        fs::read(dir.path().join("a.json")).unwrap(),
        fs::read(dir.path().join("b.json")).unwrap()
    );
}
