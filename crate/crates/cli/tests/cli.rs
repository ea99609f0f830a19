use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thetaglue")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn spec_file(name: &str, body: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-specs");
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn e4_csv() {
    let o = run(&["series", "E4", "--order", "8", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "exponent,coefficient\n0,1\n2,240\n4,2160\n6,6720\n");
}

#[test]
fn h0_and_rho0_are_three() {
    for name in ["h:0", "rho:0"] {
        let o = run(&["series", name, "--order", "6", "--format", "csv"]);
        assert_eq!(stdout(&o), "exponent,coefficient\n0,3\n", "{name}");
    }
}

#[test]
fn qs_output_round_trips() {
    let o = run(&["series", "Delta24", "--order", "12", "--format", "qs"]);
    let s = thetaglue_core::QSeries::from_qs_text(&stdout(&o)).unwrap();
    assert_eq!(s.coeff_at_power(2).unwrap(), 1.into());
    assert_eq!(s.coeff_at_power(4).unwrap(), (-24).into());
}

#[test]
fn series_errors() {
    assert_eq!(run(&["series", "theta5"]).status.code(), Some(2));
    assert_eq!(run(&["series", "E4", "--order", "0"]).status.code(), Some(3));
}

#[test]
fn output_is_deterministic() {
    let a = run(&["series", "rho:3", "--order", "16"]);
    let b = run(&["series", "rho:3", "--order", "16"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn identities() {
    let o = run(&["identities", "--nmax", "3", "--order", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().filter(|l| !l.contains("checks")).all(|l| l.starts_with("PASS")));
    assert_eq!(run(&["identities", "--nmax", "2"]).status.code(), Some(3));
}

#[test]
fn d24_methods_agree() {
    let p = spec_file("d24.txt", "family=ODD_8M\nm=3\n");
    let o = run(&["lattice-theta", "--spec", p.to_str().unwrap(), "--order", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("n_i = 24  rank = 24"));
    assert!(text.contains("1 + 1104*q^2"));
}

#[test]
fn d6_four_block_all_methods() {
    let p = spec_file("d6.txt", "# D6^4\nfamily: FOUR_BLOCK\nm: (0,0,0,0)\nepsilon: 1\n");
    let o = run(&["lattice-theta", "--spec", p.to_str().unwrap(), "--order", "3", "--methods", "cosets,theorem,enum"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).matches("glue generator").count(), 4);
}

#[test]
fn invalid_spec_exits_2() {
    let p = spec_file("bad.txt", "family=ODD_8M\nm=0\n");
    assert_eq!(run(&["lattice-theta", "--spec", p.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["lattice-theta", "--spec", "/nonexistent/spec"]).status.code(), Some(2));
}

#[test]
fn enumeration_bound_exits_4() {
    let p = spec_file("d24-enum.txt", "family=ODD_8M\nm=3\n");
    let o = run(&["lattice-theta", "--spec", p.to_str().unwrap(), "--methods", "enum"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn reading_choice_changes_even_family() {
    let p = spec_file("even4.txt", "family=EVEN_8M4\nm=0,0,1,1\n");
    let path = p.to_str().unwrap();
    let o = run(&["lattice-theta", "--spec", path, "--order", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("q^2: cosets 640  theorem 928"));
    let o = run(&["lattice-theta", "--spec", path, "--order", "4", "--reading", "derivation"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn sym_expand_lists_summands() {
    let o = run(&["sym-expand", "--pattern", "h:2:+1,rho:1:-1,rho:1:-1"]);
    let text = stdout(&o);
    assert!(text.starts_with("# 6 summands over m1..m4"));
    assert!(text.contains("h[m3+m4+1]*rho[m1-1]*rho[m2-1]"));
    assert_eq!(run(&["sym-expand", "--pattern", "x:1:0"]).status.code(), Some(2));
}

#[test]
fn audits_pass() {
    for kind in ["niemeier", "specializations", "counts"] {
        let o = run(&["audit", kind, "--order", "6", "--lmax", "4"]);
        assert_eq!(o.status.code(), Some(0), "{kind}: {}", stdout(&o));
    }
}

#[test]
fn out_flag_writes_file() {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("e4.csv");
    let o = run(&["series", "E4", "--order", "4", "--format", "csv", "--out", p.to_str().unwrap()]);
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&p).unwrap(), "exponent,coefficient\n0,1\n2,240\n");
}
