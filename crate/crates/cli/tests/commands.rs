use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bbcert"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

struct Scratch(PathBuf);

impl Scratch {
    fn new(name: &str) -> Scratch {
        let dir = std::env::temp_dir().join(format!("bbcert-{name}-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn path(&self, file: &str) -> String {
        self.0.join(file).to_string_lossy().into_owned()
    }

    fn write(&self, file: &str, text: &str) -> String {
        let p = self.path(file);
        fs::write(&p, text).unwrap();
        p
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.0);
    }
}

fn read(p: impl AsRef<Path>) -> String {
    fs::read_to_string(p).unwrap()
}

#[test]
fn oracle_rank_of_zero() {
    let s = Scratch::new("zero");
    let m = s.write("z.bbm", "%%bbm v1\nfield 5\nsize 3\nkind sparse\nnnz 0\n");
    let o = run(&["oracle", &m, "--what", "rank"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn band_pipeline() {
    let s = Scratch::new("band");
    let m = s.path("t.bbm");
    let c = s.path("t.bbc");
    assert_eq!(code(&run(&["gen", "band", "-n", "12", "-k", "1", "--seed", "7", "-o", &m])), 0);
    let o = run(&["detect", &m, "--property", "band", "-k", "1", "--seed", "1", "-o", &c]);
    assert_eq!(code(&o), 0);
    assert!(read(&c).starts_with("%%bbc v1\ntype band\n"));
    assert_eq!(code(&run(&["verify", &m, &c, "--seed", "2"])), 0);
    let dense = s.path("d.bbm");
    assert_eq!(code(&run(&["gen", "random", "-n", "12", "--seed", "7", "-o", &dense])), 0);
    assert_eq!(code(&run(&["detect", &dense, "--property", "band", "-k", "1", "--seed", "1"])), 1);
    assert_eq!(code(&run(&["verify", &dense, &c, "--seed", "2"])), 1);
}

#[test]
fn every_property_verifies_on_honest_instances() {
    let s = Scratch::new("props");
    let cases: &[(&[&str], &str, &str)] = &[
        (&["gen", "lowrank", "-n", "10", "-k", "2"], "rank", "2"),
        (&["gen", "toeplitz", "-n", "10"], "toeplitz", "2"),
        (&["gen", "hankel", "-n", "10"], "hankel", "2"),
        (&["gen", "jordan", "--field", "3", "--blocks", "3,1,1", "-n", "5", "--conjugate"], "nilpotent", "1"),
        (&["gen", "companion", "--field", "2", "--poly", "1,1,0,1"], "invariant", "1"),
        (&["gen", "jordan", "--field", "2", "--blocks", "2,2,2", "-n", "6"], "nilpotent", "1"),
        (&["gen", "jordan", "--field", "2", "--eigenvalue", "1", "--blocks", "1,1,1", "-n", "3"], "invariant", "2"),
    ];
    for (i, (gen, prop, k)) in cases.iter().enumerate() {
        let m = s.path(&format!("{i}.bbm"));
        let c = s.path(&format!("{i}.bbc"));
        let mut args = gen.to_vec();
        args.extend(["--seed", "3", "-o", &m]);
        assert_eq!(code(&run(&args)), 0, "{gen:?}");
        let o = run(&["certify", &m, "--property", prop, "-k", k, "--seed", "4", "-o", &c]);
        assert!(code(&o) <= 1, "{gen:?}: {}", String::from_utf8_lossy(&o.stderr));
        let v = run(&["verify", &m, &c, "--seed", "5", "--eps", "1/4"]);
        assert_eq!(code(&v), 0, "{gen:?} {prop}: {}", read(&c));
    }
}

#[test]
fn many_nilpotent_protocol_transcript() {
    let s = Scratch::new("proto");
    let m = s.write("j.bbm", "%%bbm v1\nfield 2\nsize 4\nkind dense\n0 0 0 0\n1 0 0 0\n0 0 0 0\n0 0 1 0\n");
    let t = s.path("j.bbt");
    let o = run(&["protocol", &m, "--property", "nilpotent", "--claim", "many", "-k", "1", "--seed", "11", "-o", &t]);
    assert_eq!(code(&o), 0);
    let text = read(&t);
    assert!(text.starts_with("%%bbt v1\nseed 11\nepsilon 1/4\n"));
    assert!(text.ends_with("verdict accept\n"));
    let few = run(&["protocol", &m, "--property", "nilpotent", "--claim", "few", "-k", "1", "--seed", "11"]);
    assert_eq!(code(&few), 1);
    let cheat = run(&["protocol", &m, "--property", "nilpotent", "--claim", "few", "-k", "1", "--seed", "11", "--cheat"]);
    assert_eq!(code(&cheat), 1);
}

#[test]
fn outputs_are_deterministic() {
    let s = Scratch::new("det");
    let m = s.path("m.bbm");
    assert_eq!(code(&run(&["gen", "companion", "--field", "5", "-n", "7", "--seed", "3", "--conjugate", "-o", &m])), 0);
    let a = run(&["certify", &m, "--property", "invariant", "-k", "1", "--seed", "8"]);
    let b = run(&["certify", &m, "--property", "invariant", "-k", "1", "--seed", "8"]);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["protocol", &m, "--property", "invariant", "--claim", "few", "-k", "1", "--seed", "8"]);
    let b = run(&["protocol", &m, "--property", "invariant", "--claim", "few", "-k", "1", "--seed", "8"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    let s = Scratch::new("exit");
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["detect", "missing.bbm", "--property", "band", "-k", "1", "--seed", "1"])), 2);
    let bad = s.write("bad.bbm", "%%bbm v1\nfield 5\nsize 2\nkind dense\n1 2\n");
    let o = run(&["oracle", &bad, "--what", "rank"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 5"));
    let q6 = s.write("q6.bbm", "%%bbm v1\nfield 6\nsize 1\nkind dense\n0\n");
    assert_eq!(code(&run(&["oracle", &q6, "--what", "rank"])), 3);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn bench_prints_a_table() {
    let o = run(&["bench", "--sizes", "8,16", "-k", "1", "--seed", "1"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.lines().next().unwrap().starts_with("property"));
    for name in ["band", "rank", "nilpotent-few", "invariant-few"] {
        assert_eq!(out.lines().filter(|l| l.starts_with(&format!("{name} "))).count(), 2, "{out}");
    }
}
