use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use gouy_core::cli::{parse_scenario, run_sweep, Format};
use gouy_core::Error;

fn gouy(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gouy"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

const FIG2_GAMMA0: &str = "\
# slow trap, no correlation
omega0 = 1
omega = 0.1
gamma = 0
sweep = t, 0, 70, 7001
outputs = B, mu_unwrapped, gouy_rate
";

#[test]
fn sweep_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("s.txt"), FIG2_GAMMA0).unwrap();
    let a = gouy(&["sweep", "s.txt"], dir.path());
    let b = gouy(&["sweep", "s.txt"], dir.path());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().count(), 7002);
    assert!(text.starts_with("t,B,mu_unwrapped,gouy_rate,flag\n"));
    assert!(!text.contains('\r'));
}

#[test]
fn sweep_width_maxima_sit_at_odd_quarter_periods() {
    let data = run_sweep(&parse_scenario(FIG2_GAMMA0).unwrap()).unwrap();
    let t = data.numbers("t").unwrap();
    let b = data.numbers("B").unwrap();
    let mut maxima = Vec::new();
    for k in 1..t.len() - 1 {
        let (l, m, r) = (b[k - 1].unwrap(), b[k].unwrap(), b[k + 1].unwrap());
        if m > l && m >= r {
            maxima.push(t[k].unwrap());
        }
    }
    assert_eq!(maxima.len(), 2);
    assert!((maxima[0] - 15.70796).abs() < 1e-2);
    assert!((maxima[1] - 47.12389).abs() < 1e-2);
}

#[test]
fn singular_rows_are_flagged_not_dropped() {
    let text = "omega0 = 1\nomega = 1\ngamma = 0.5\nsweep = t, 0, 6.283185307179586, 9\noutputs = u\n";
    let data = run_sweep(&parse_scenario(text).unwrap()).unwrap();
    assert_eq!(data.rows.len(), 9);
    let csv = data.to_csv();
    assert!(csv.lines().nth(1).unwrap().ends_with("CurvatureSingular"));
}

#[test]
fn json_output_has_scenario_and_rows() {
    let data = run_sweep(&parse_scenario(FIG2_GAMMA0).unwrap()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&data.render(Format::Json)).unwrap();
    assert_eq!(v["scenario"]["gamma"], 0.0);
    assert_eq!(v["rows"].as_array().unwrap().len(), 7001);
    assert!(v["rows"][0]["B"].is_number());
}

#[test]
fn parse_error_names_the_line() {
    let err = parse_scenario("omega0 = 1\nomega = 1\ngamma = abc\nsweep = t, 0, 1, 3\n").unwrap_err();
    assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
    let err = parse_scenario("omega0 = 1\nomega = 1\ngamma = 0\nsweep = t, 0, 1, 3\ncolour = red\n").unwrap_err();
    assert!(matches!(err, Error::Parse { line: 5, .. }), "{err:?}");
}

#[test]
fn defaults_fill_in() {
    let sc = parse_scenario("omega0 = 1\nomega = 2\ngamma = 0\nsweep = omega, 0.5, 2, 4\n").unwrap();
    assert_eq!(sc.format, Format::Csv);
    assert!(!sc.unwrap);
}

#[test]
fn exit_codes_follow_error_class() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.txt"), "omega0 = 1\nomega = x\n").unwrap();
    assert_eq!(gouy(&["sweep", "bad.txt"], dir.path()).status.code(), Some(1));
    assert_eq!(gouy(&["sweep", "missing.txt"], dir.path()).status.code(), Some(3));
    assert_eq!(gouy(&["figure", "fig9"], dir.path()).status.code(), Some(1));
    let ok = gouy(&["oracle-check", "--omega", "0.7", "--gamma", "-1"], dir.path());
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn figure_command_writes_one_file_per_panel() {
    let dir = tempfile::tempdir().unwrap();
    let out = gouy(&["figure", "fig7", "--out", "figs", "--format", "json"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut names: Vec<String> = fs::read_dir(dir.path().join("figs"))
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    assert_eq!(names, ["fig7_gamma_1.json", "fig7_gamma_3.json"]);
}

#[test]
fn unwrapped_flag_switches_branch_in_figures() {
    let dir = tempfile::tempdir().unwrap();
    let out = gouy(&["figure", "fig4", "--out", ".", "--unwrapped"], dir.path());
    assert!(out.status.success());
    let text = fs::read_to_string(dir.path().join("fig4_mu.csv")).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.contains("mu_unwrapped"), "{header}");
    // at resonance without correlation the phase is linear: mu = omega t / 2
    let col = header.split(',').position(|c| c == "mu_unwrapped_gamma_0").unwrap();
    for line in text.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        let t: f64 = cells[0].parse().unwrap();
        let mu: f64 = cells[col].parse().unwrap();
        assert!((mu - t / 2.0).abs() < 1e-9);
    }
}
