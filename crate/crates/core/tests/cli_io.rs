//! End-to-end runs of the command-line binary: output text, JSON shapes,
//! exit codes, and the file formats it reads and writes.

use ore_forge::cauchon;
use ore_forge::ore::engine::Ctx;
use ore_forge::{parse_element, registry, CGLPresentation};
use std::path::PathBuf;
use std::process::{Command, Output};

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ore-forge"))
}

fn run(args: &[&str]) -> Output {
    cli().args(args).output().expect("binary spawns")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("ore-forge-{}-{name}", std::process::id()))
}

#[test]
fn theta_prints_the_expected_image() {
    let output = run(&["theta", "qmat2", "-j", "4", "x11"]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(stdout(&output), "x11 - q*x12*x21*x22^-1\ns_min = 1\n");
}

#[test]
fn exit_codes_cover_the_documented_cases() {
    assert_eq!(run(&["check", "quantum-weyl"]).status.code(), Some(0));
    assert_eq!(run(&["check", "invalid-unity"]).status.code(), Some(1));
    assert_eq!(run(&["check", "missing-name"]).status.code(), Some(2));
    assert_eq!(run(&["nf", "quantum-weyl"]).status.code(), Some(2));
    assert_eq!(
        run(&["nf", "quantum-weyl", "x1 +* x2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["grade", "qmat2", "--bound", "4"]).status.code(),
        Some(3)
    );
    assert_eq!(
        run(&["innerd", "qmat2", "x12*x21"]).status.code(),
        Some(1),
        "the top derivation kills x12*x21, so no fraction arises"
    );
    assert_eq!(
        run(&["innerd", "quantum-weyl", "x1", "--from-monic", "a", "b", "1"])
            .status
            .code(),
        Some(2),
        "the two input routes are mutually exclusive"
    );
}

#[test]
fn bound_flag_overrides_the_environment() {
    let output = cli()
        .args(["grade", "qmat2"])
        .env("ORE_FORGE_BOUND", "4")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3));
    let output = cli()
        .args(["grade", "qmat2", "--bound", "16"])
        .env("ORE_FORGE_BOUND", "4")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
}

#[test]
fn nf_json_round_trips_to_the_same_element() {
    let output = run(&["nf", "qmat2", "--json", "x22*x11"]);
    assert_eq!(output.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    let printed = value["normal_form"].as_str().unwrap();

    let pres = registry::builtin("qmat2").unwrap();
    let ctx = Ctx::new(&pres);
    let reparsed = ctx
        .normal_form(&parse_element(printed, pres.gen_names()).unwrap())
        .unwrap();
    let direct = ctx
        .normal_form(&parse_element("x22*x11", pres.gen_names()).unwrap())
        .unwrap();
    assert_eq!(reparsed, direct);
}

#[test]
fn theta_json_round_trips_in_the_localization() {
    let output = run(&["theta", "qmat2", "--json", "-j", "4", "x11"]);
    assert_eq!(output.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(value["s_min"], 1);
    let printed = value["value"].as_str().unwrap();

    let pres = registry::builtin("qmat2").unwrap();
    let ctx = Ctx::new(&pres);
    let raw = parse_element(printed, pres.gen_names()).unwrap();
    let reparsed = ctx.raw_to_laurent(&raw, 3).unwrap();
    let x11 = ctx
        .normal_form(&parse_element("x11", pres.gen_names()).unwrap())
        .unwrap();
    let direct = cauchon::cauchon_theta(&pres, 3, &x11, 32).unwrap();
    assert_eq!(reparsed, direct.value);
}

#[test]
fn deleted_presentation_reloads_and_passes_check() {
    let output = run(&["delete", "quantum-weyl", "--json"]);
    assert_eq!(output.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(value["passed"], true);

    let path = temp_path("deleted.json");
    std::fs::write(&path, serde_json::to_string(&value["final"]).unwrap()).unwrap();
    let output = run(&["check", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0), "{}", stdout(&output));

    let reloaded = CGLPresentation::load(&path).unwrap();
    let plane = registry::builtin("quantum-plane").unwrap();
    assert!(reloaded.delta_map().is_empty());
    assert_eq!(reloaded.lambda_matrix(), plane.lambda_matrix());
    let _ = std::fs::remove_file(&path);
}

#[test]
fn poset_files_feed_the_catenarity_check() {
    let path = temp_path("poset.txt");
    std::fs::write(&path, "0 < a\na < b\nb < 1\n0 < c\nc < 1\n").unwrap();

    let output = run(&["spectra", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    let text = stdout(&output);
    assert!(text.contains("catenary: FAIL"), "{text}");
    assert!(text.contains("short chain: 0 < c < 1"), "{text}");
    assert!(text.contains("long chain:  0 < a < b < 1"), "{text}");

    let output = run(&["spectra", "--json", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    let value: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(value["catenary"]["catenary"], false);
    assert_eq!(
        value["catenary"]["witness"]["long_chain"]
            .as_array()
            .unwrap()
            .len(),
        4
    );

    let output = run(&["spectra", path.to_str().unwrap(), "--tauvel"]);
    assert_eq!(
        output.status.code(),
        Some(2),
        "height checks need presentation data, not a bare poset"
    );
    let _ = std::fs::remove_file(&path);
}

#[test]
fn declared_filtration_degrees_are_respected() {
    let pres = registry::builtin("qmat2").unwrap();
    let mut file = pres.to_file_model();
    file.name = "qmat2-declared".to_string();
    file.filtration = Some(vec![2, 1, 1, 2]);
    let path = temp_path("declared.json");
    std::fs::write(&path, serde_json::to_string_pretty(&file).unwrap()).unwrap();

    let output = run(&["check", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0), "{}", stdout(&output));
    let output = run(&["grade", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    assert!(
        stdout(&output).starts_with("filtration degrees = (2, 1, 1, 2)"),
        "{}",
        stdout(&output)
    );

    file.filtration = Some(vec![1, 1, 1, 1]);
    std::fs::write(&path, serde_json::to_string_pretty(&file).unwrap()).unwrap();
    let output = run(&["check", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stdout(&output).contains("x12*x21"), "{}", stdout(&output));
    let _ = std::fs::remove_file(&path);
}

#[test]
fn fixed_seeds_give_identical_output() {
    let first = run(&["check", "qmat2", "--seed", "5"]);
    let second = run(&["check", "qmat2", "--seed", "5"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(stdout(&first), stdout(&second));
}

#[test]
fn spectra_json_carries_all_three_sections() {
    let output = run(&["spectra", "qaffine-3", "--json"]);
    assert_eq!(output.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(value["passed"], true);
    assert!(value["tauvel"]["checks"].is_array());
    assert_eq!(value["catenary"]["catenary"], true);
    assert!(value["normal_separation"]["checks"].is_array());
}
