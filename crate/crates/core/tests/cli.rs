mod common;

use std::process::{Command, Output};

use common::programs_dir;

fn lolrun(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lolrun"))
        .args(args)
        .current_dir(programs_dir())
        .output()
        .expect("run lolrun")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn nbody_per_pe_sections() {
    let o = lolrun(&["nbody.lol", "--np", "2", "--per-pe"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "=== PE 0 ===");
    assert_eq!(lines[1], "HAI ITZ 0 I HAS PARTICLZ 2 MUV");
    assert_eq!(lines[2], "O HAI ITZ 0, MAH PARTICLZ IZ:");
    let second = lines.iter().position(|l| *l == "=== PE 1 ===").unwrap();
    assert_eq!(second, 35);
    assert_eq!(lines[second + 1], "HAI ITZ 1 I HAS PARTICLZ 2 MUV");
    assert_eq!(lines.len(), 70);
}

#[test]
fn per_pe_output_is_byte_identical_across_runs() {
    let a = lolrun(&["nbody.lol", "--np", "4", "--seed", "3", "--per-pe"]);
    let b = lolrun(&["nbody.lol", "--np", "4", "--seed", "3", "--per-pe"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn missing_file_exits_2() {
    let o = lolrun(&["missing.lol"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("missing.lol"));
}

#[test]
fn unknown_flag_exits_2() {
    assert_eq!(lolrun(&["nbody.lol", "--fast"]).status.code(), Some(2));
}

#[test]
fn parse_error_exits_2_with_location() {
    let dir = tempdir();
    let path = dir.join("bad.lol");
    std::fs::write(&path, "HAI 1.2\nVISIBLE SUM OF 1\nKTHXBYE\n").unwrap();
    let o = lolrun(&[path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("bad.lol:2:"), "{err}");
}

#[test]
fn lex_error_exits_2() {
    let dir = tempdir();
    let path = dir.join("lex.lol");
    std::fs::write(&path, "HAI 1.2\nVISIBLE \"open\nKTHXBYE\n").unwrap();
    let o = lolrun(&[path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("lex.lol:2:"));
}

#[test]
fn runtime_error_exits_1_naming_the_pe() {
    let dir = tempdir();
    let path = dir.join("div.lol");
    std::fs::write(
        &path,
        "HAI 1.2\nBOTH SAEM ME AN 1, O RLY?\nYA RLY, VISIBLE MOD OF 1 AN 0\nOIC\nKTHXBYE\n",
    )
    .unwrap();
    let o = lolrun(&[path.to_str().unwrap(), "--np", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("runtime error on PE 1: division by zero"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn deadlocks_exit_3() {
    let o = lolrun(&["barrier_skip.lol", "--np", "2"]);
    assert_eq!(o.status.code(), Some(3));
    let err = stderr(&o);
    assert!(err.contains("PE 0: blocked-on-barrier at 5:3"), "{err}");
    assert!(err.contains("PE 1: finished"), "{err}");
    let o = lolrun(&["lock_cycle.lol", "--np", "2", "--max-barrier-wait", "2s"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn token_dump_format() {
    let o = lolrun(&["fragment_barrier.lol", "--dump-tokens"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "KW:HAI\tHAI\t1:1");
    assert_eq!(lines[1], "NUMBAR\t1.2\t1:5");
    assert_eq!(lines[2], "SEP\t\\n\t1:8");
    assert_eq!(lines[3], "KW:TXT_MAH_BFF\tTXN MAH BFF\t2:1");
    for l in &lines {
        assert_eq!(l.split('\t').count(), 3, "{l:?}");
    }
}

#[test]
fn ast_dump_is_stable() {
    let a = lolrun(&["nbody.lol", "--dump-ast"]);
    let b = lolrun(&["nbody.lol", "--dump-ast"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("Program version=1.2\n  Declare local little_time"));
}

#[test]
fn interleaved_mode_prints_everything() {
    let o = lolrun(&["barrier_sum.lol", "--np", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "30\n30\n");
}

#[test]
fn gimmeh_reads_stdin() {
    use std::io::Write;
    let dir = tempdir();
    let path = dir.join("echo.lol");
    std::fs::write(
        &path,
        "HAI 1.2\nI HAS A x\nGIMMEH x\nVISIBLE \"got \" x\nKTHXBYE\n",
    )
    .unwrap();
    let mut child = Command::new(env!("CARGO_BIN_EXE_lolrun"))
        .arg(&path)
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"cheezburger\n")
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "got cheezburger\n");
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "frenz-cli-{}-{:?}",
        std::process::id(),
        std::thread::current().id()
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
