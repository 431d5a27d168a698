//! End-to-end runs of the `ckern` binary over serialized fixtures.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ckern_core::fdhilb::{ClassicalStructure, OrthonormalBasis};
use ckern_core::finrel::{AbelianGroupoid, Relation};
use ckern_core::Matrix;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ckern"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_fixture<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn verify_cs_accepts_the_standard_qubit_basis() {
    let dir = tempfile::tempdir().unwrap();
    let basis = write_fixture(dir.path(), "comp2.json", &OrthonormalBasis::computational(2));
    let out = run(&["verify-cs", "--basis", basis.to_str().unwrap()]);
    let text = stdout(&out);
    assert_eq!(code(&out), 0, "{text}");
    assert_eq!(text.matches("[PASS]").count(), 4, "{text}");
    assert!(text.contains("[PASS] cs-involution"), "{text}");
}

#[test]
fn verify_cs_flags_a_noncommutative_copier() {
    // e0 -> e0 tensor e0, e1 -> e0 tensor e1: an isometry whose image is
    // not swap-symmetric.
    let dir = tempfile::tempdir().unwrap();
    let delta = Matrix::from_ints(4, 2, &[1, 0, 0, 1, 0, 0, 0, 0]);
    let cs = ClassicalStructure::from_delta(delta).unwrap();
    let path = write_fixture(dir.path(), "skew.json", &cs);
    let out = run(&["verify-cs", "--delta", path.to_str().unwrap()]);
    let text = stdout(&out);
    assert_eq!(code(&out), 1, "{text}");
    assert!(text.contains("[PASS] cs-dagger-monic"), "{text}");
    assert!(text.contains("[FAIL] cs-commutative"), "{text}");
}

#[test]
fn copyables_of_a_qutrit_basis_form_the_eight_element_cube() {
    let dir = tempfile::tempdir().unwrap();
    let cs = ClassicalStructure::from_basis(&OrthonormalBasis::computational(3)).unwrap();
    let delta = write_fixture(dir.path(), "comp3.json", &cs);
    // Projection onto span(e0 + e1): a kernel, but not copyable here.
    let probe = Matrix::new(
        3,
        3,
        [
            [1, 1, 0],
            [1, 1, 0],
            [0, 0, 0],
        ]
        .concat()
        .iter()
        .map(|&n| ckern_core::Scalar::from_ratio(n, 2))
        .collect(),
    )
    .unwrap();
    let probe_path = write_fixture(dir.path(), "probe.json", &probe);
    let dot_path = dir.path().join("hasse.dot");
    let json_path = dir.path().join("lattice.json");
    let out = run(&[
        "copyables",
        "--delta",
        delta.to_str().unwrap(),
        "--probe",
        probe_path.to_str().unwrap(),
        "--dot",
        dot_path.to_str().unwrap(),
        "--json",
        json_path.to_str().unwrap(),
    ]);
    let text = stdout(&out);
    assert_eq!(code(&out), 0, "{text}");
    assert!(text.contains("8 kernels certified copyable"), "{text}");
    assert!(text.contains("3 atoms"), "{text}");
    assert!(text.contains("[PASS] copyable-lattice-boolean"), "{text}");
    assert!(text.contains("1 probes refuted"), "{text}");

    let dot = std::fs::read_to_string(&dot_path).unwrap();
    assert!(dot.starts_with("digraph hasse {"), "{dot}");
    assert_eq!(dot.matches(" -> ").count(), 12, "{dot}");

    let lattice: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(lattice["elements"].as_array().unwrap().len(), 8);
}

#[test]
fn copyables_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cs = ClassicalStructure::from_basis(&OrthonormalBasis::computational(2)).unwrap();
    let delta = write_fixture(dir.path(), "comp2.json", &cs);
    let mut outputs = Vec::new();
    let mut dots = Vec::new();
    for run_idx in 0..2 {
        let dot_path = dir.path().join(format!("hasse{run_idx}.dot"));
        let out = run(&[
            "copyables",
            "--delta",
            delta.to_str().unwrap(),
            "--dot",
            dot_path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
        outputs.push(out.stdout);
        dots.push(std::fs::read(&dot_path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(dots[0], dots[1]);
}

#[test]
fn lattice_closure_of_two_commuting_projections() {
    let dir = tempfile::tempdir().unwrap();
    let p = Matrix::from_ints(2, 2, &[1, 0, 0, 0]);
    let q = Matrix::from_ints(2, 2, &[0, 0, 0, 1]);
    let path = write_fixture(dir.path(), "projs.json", &vec![p, q]);
    let out = run(&["lattice", "--projections", path.to_str().unwrap()]);
    let text = stdout(&out);
    assert_eq!(code(&out), 0, "{text}");
    assert!(text.contains("4 elements, boolean=true"), "{text}");
    assert!(text.contains("[PASS] lattice-orthomodular"), "{text}");
}

#[test]
fn lattice_respects_the_size_cap() {
    let dir = tempfile::tempdir().unwrap();
    let p = Matrix::from_ints(2, 2, &[1, 0, 0, 0]);
    let path = write_fixture(dir.path(), "projs.json", &vec![p]);
    let out = run(&[
        "lattice",
        "--projections",
        path.to_str().unwrap(),
        "--max-lattice",
        "1",
    ]);
    assert_eq!(code(&out), 2, "{}", stdout(&out));
}

#[test]
fn complementary_qubit_bases_pass_all_three_checks() {
    let dir = tempfile::tempdir().unwrap();
    let d1 = ClassicalStructure::from_basis(&OrthonormalBasis::computational(2)).unwrap();
    let d2 = ClassicalStructure::from_basis(&OrthonormalBasis::hadamard2()).unwrap();
    let p1 = write_fixture(dir.path(), "comp2.json", &d1);
    let p2 = write_fixture(dir.path(), "had2.json", &d2);
    let out = run(&[
        "complement",
        "--backend",
        "approx",
        "--delta1",
        p1.to_str().unwrap(),
        "--delta2",
        p2.to_str().unwrap(),
    ]);
    let text = stdout(&out);
    assert_eq!(code(&out), 0, "{text}");
    assert!(text.contains("[PASS] partial-complementarity"), "{text}");
    assert!(text.contains("[PASS] mutual-unbiasedness"), "{text}");
    assert!(text.contains("[PASS] mu-implies-pc"), "{text}");
}

#[test]
fn identical_bases_are_not_complementary() {
    let dir = tempfile::tempdir().unwrap();
    let d = ClassicalStructure::from_basis(&OrthonormalBasis::computational(2)).unwrap();
    let p = write_fixture(dir.path(), "comp2.json", &d);
    let out = run(&[
        "complement",
        "--delta1",
        p.to_str().unwrap(),
        "--delta2",
        p.to_str().unwrap(),
    ]);
    let text = stdout(&out);
    assert_eq!(code(&out), 1, "{text}");
    assert!(text.contains("[FAIL] partial-complementarity"), "{text}");
}

#[test]
fn three_qubit_mubs_are_completely_complementary() {
    let dir = tempfile::tempdir().unwrap();
    let members = [
        OrthonormalBasis::computational(2),
        OrthonormalBasis::hadamard2(),
        OrthonormalBasis::circular2(),
    ];
    let mut paths = Vec::new();
    for (i, b) in members.iter().enumerate() {
        let cs = ClassicalStructure::from_basis(b).unwrap();
        paths.push(write_fixture(dir.path(), &format!("mub{i}.json"), &cs));
    }
    let mut args = vec!["mub".to_string(), "--backend".into(), "approx".into()];
    for p in &paths {
        args.push("--delta".into());
        args.push(p.to_str().unwrap().into());
    }
    args.push("--jointly-epic".into());
    args.push("info-complete".into());
    let out = bin().args(&args).output().unwrap();
    let text = stdout(&out);
    assert_eq!(code(&out), 0, "{text}");
    assert_eq!(text.matches("[PASS] pair-mutually-unbiased").count(), 3, "{text}");
    assert!(text.contains("[PASS] completely-complementary"), "{text}");
}

#[test]
fn subalg_round_trips_and_bridges_agree() {
    let dir = tempfile::tempdir().unwrap();
    let d1 = ClassicalStructure::from_basis(&OrthonormalBasis::computational(2)).unwrap();
    let d2 = ClassicalStructure::from_basis(&OrthonormalBasis::hadamard2()).unwrap();
    let p1 = write_fixture(dir.path(), "comp2.json", &d1);
    let p2 = write_fixture(dir.path(), "had2.json", &d2);
    let out = run(&[
        "subalg",
        "--backend",
        "approx",
        "--delta1",
        p1.to_str().unwrap(),
        "--delta2",
        p2.to_str().unwrap(),
    ]);
    let text = stdout(&out);
    assert_eq!(code(&out), 0, "{text}");
    assert!(text.contains("[PASS] subalg-double-commutant"), "{text}");
    assert!(text.contains("[PASS] subalg-pc-bridge"), "{text}");
}

#[test]
fn rel_verifies_the_klein_group_copier() {
    let dir = tempfile::tempdir().unwrap();
    let g = AbelianGroupoid::klein4();
    let gp = write_fixture(dir.path(), "klein4.json", &g);
    let per = write_fixture(dir.path(), "per.json", &Relation::identity(4));
    let out = run(&[
        "rel",
        "--groupoid",
        gp.to_str().unwrap(),
        "--per",
        per.to_str().unwrap(),
    ]);
    let text = stdout(&out);
    assert_eq!(code(&out), 0, "{text}");
    assert!(text.contains("[PASS] rel-delta-dagger-monic"), "{text}");
    assert!(text.contains("[PASS] rel-per-routes-agree"), "{text}");
}

#[test]
fn malformed_json_reports_the_position_and_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"dim\": 2, \"vectors\": [").unwrap();
    let out = run(&["verify-cs", "--basis", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 1"), "{err}");
    assert!(err.contains("column"), "{err}");
}

#[test]
fn approx_input_cannot_be_promoted_to_exact() {
    let dir = tempfile::tempdir().unwrap();
    let cs = ClassicalStructure::from_basis(&OrthonormalBasis::computational(2))
        .unwrap()
        .to_approx();
    let path = write_fixture(dir.path(), "approx.json", &cs);
    let out = run(&[
        "verify-cs",
        "--delta",
        path.to_str().unwrap(),
        "--backend",
        "exact",
    ]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("cannot convert"), "{err}");
}

#[test]
fn suite_prints_one_line_per_criterion() {
    let out = run(&["suite"]);
    let text = stdout(&out);
    assert_eq!(code(&out), 0, "{text}");
    assert_eq!(text.lines().count(), 12, "{text}");
    assert!(text.lines().all(|l| l.starts_with("[PASS]")), "{text}");
}
