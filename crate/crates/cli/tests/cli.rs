use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

fn lelc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lelc")).args(args).output().expect("run lelc")
}

fn ok(args: &[&str]) -> String {
    let out = lelc(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    lelc(args).status.code().expect("exit code")
}

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        Self { dir: TempDir::new().unwrap() }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn p(&self, name: &str) -> String {
        self.path(name).display().to_string()
    }

    fn write(&self, name: &str, text: &str) -> String {
        fs::write(self.path(name), text).unwrap();
        self.p(name)
    }

    /// Zero-heavy byte histogram and a 300-payload trace drawn from it.
    fn trace(&self) -> String {
        let mut hist = String::from("LELCHIST 8\n");
        for v in 0..256u32 {
            let count = match v {
                0 => 5000,
                255 => 1000,
                _ => 15,
            };
            hist += &format!("{v:08b} {count}\n");
        }
        let h = self.write("h8.txt", &hist);
        ok(&[
            "synth",
            "--hist",
            &h,
            "--payloads",
            "300",
            "--payload-bits",
            "512",
            "--seed",
            "7",
            "--out",
            &self.p("t.bin"),
        ]);
        self.p("t.bin")
    }
}

fn report_value<'a>(report: &'a str, key: &str) -> &'a str {
    report
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in {report}"))
}

#[test]
fn analyze_fnw8_rate() {
    let f = Fixture::new();
    let t = f.trace();
    let r = ok(&["analyze", "--codec", "fnw:8", "--trace", &t]);
    assert_eq!(report_value(&r, "rate"), "0.888889");
    assert_eq!(report_value(&r, "codec"), "fnw:8");
    assert_eq!(report_value(&r, "flits_uncoded"), "1500");
    assert_eq!(report_value(&r, "flits_coded"), "1800");
    assert!(report_value(&r, "xtalk_ratio").parse::<f64>().unwrap() <= 1.0);
}

#[test]
fn mapgen_writes_constrained_example_codebook() {
    let f = Fixture::new();
    let h = f.write("h3.txt", "LELCHIST 3\n000 80\n001 50\n010 30\n011 20\n100 60\n101 10\n110 40\n111 70\n");
    ok(&["mapgen", "--hist", &h, "--n", "4", "--weight-monotone", "--out", &f.p("m.txt")]);
    assert_eq!(
        fs::read_to_string(f.path("m.txt")).unwrap(),
        "LELCMAP 3 4\n0000\n0100\n1000\n0101\n0010\n0110\n0011\n0001\n"
    );
}

#[test]
fn golden_round_trip_every_codec() {
    let f = Fixture::new();
    let t = f.trace();
    ok(&["profile", "--trace", &t, "--k", "8", "--out", &f.p("prof.txt")]);
    ok(&["mapgen", "--hist", &f.p("prof.txt"), "--n", "9", "--out", &f.p("m9.txt")]);
    ok(&["mapgen", "--hist", &f.p("prof.txt"), "--n", "8", "--out", &f.p("m8.txt")]);
    let pfx = f.write("huff.txt", "LELCPFX 4\n00 0\n11 11\n01 100\n10 101\n");
    let specs = [
        "fnw:4".to_string(),
        "fnw:8".into(),
        "fnw2:4,4".into(),
        "tc1".into(),
        "tc2".into(),
        "tc1p".into(),
        format!("map:{}", f.p("m9.txt")),
        format!("map:{}", f.p("m8.txt")),
        format!("pfx:{pfx}"),
        format!("compound:16,{}", f.p("m9.txt")),
        format!("compound:32,{}", f.p("m9.txt")),
    ];
    let original = fs::read(&t).unwrap();
    for spec in &specs {
        ok(&["encode", "--codec", spec, "--trace", &t, "--out", &f.p("c.bin")]);
        ok(&["decode", "--codec", spec, "--trace", &f.p("c.bin"), "--out", &f.p("d.bin")]);
        assert_eq!(fs::read(f.path("d.bin")).unwrap(), original, "{spec}");
    }
}

#[test]
fn coded_file_versions() {
    let f = Fixture::new();
    let t = f.trace();
    ok(&["encode", "--codec", "fnw:8", "--trace", &t, "--out", &f.p("fixed.bin")]);
    let fixed = fs::read(f.path("fixed.bin")).unwrap();
    assert_eq!(fixed[4], 1);
    assert_eq!(u32::from_le_bytes(fixed[5..9].try_into().unwrap()), 576);
    ok(&["encode", "--codec", "tc2", "--trace", &t, "--out", &f.p("var.bin")]);
    let var = fs::read(f.path("var.bin")).unwrap();
    assert_eq!(var[4], 2);
    assert_eq!(u32::from_le_bytes(var[5..9].try_into().unwrap()), 512);
}

#[test]
fn profile_output_reparses_and_is_deterministic() {
    let f = Fixture::new();
    let t = f.trace();
    ok(&["profile", "--trace", &t, "--k", "4", "--out", &f.p("a.txt")]);
    ok(&["profile", "--trace", &t, "--k", "4", "--out", &f.p("b.txt")]);
    let a = fs::read_to_string(f.path("a.txt")).unwrap();
    assert_eq!(a, fs::read_to_string(f.path("b.txt")).unwrap());
    assert!(a.starts_with("LELCHIST 4\n0000 "));
    ok(&[
        "synth",
        "--hist",
        &f.p("a.txt"),
        "--payloads",
        "5",
        "--payload-bits",
        "64",
        "--seed",
        "1",
        "--out",
        &f.p("s.bin"),
    ]);
}

#[test]
fn curve_and_throttle_tables() {
    let c = ok(&["curve", "--samples", "10"]);
    let lines: Vec<&str> = c.lines().collect();
    assert_eq!(lines.len(), 11);
    assert_eq!(lines[0], "ones_fraction rate energy_reduction_pct");
    assert_eq!(lines[10], "0.500000 1.000000 0.000000");

    let f = Fixture::new();
    let inj: String = (0..200).map(|i| format!("{}\n", i * 9)).collect();
    let inj = f.write("inj.txt", &inj);
    let out = ok(&[
        "throttle",
        "--inj",
        &inj,
        "--window",
        "100",
        "--flits-coded",
        "5",
        "--flits-uncoded",
        "4",
        "--thresholds",
        "0,0.5,1",
    ]);
    let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split(' ').collect()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2][1], "100.000000");
    assert!(rows[0][1].parse::<f64>().unwrap() < 100.0);
}

#[test]
fn xtalk_weights_and_link_flags() {
    let f = Fixture::new();
    let t = f.trace();
    let w = f.write("w.txt", "LELCXT\nopposite 4\n");
    let r = ok(&["analyze", "--codec", "tc1p", "--trace", &t, "--link", "4,32,128,512", "--xtalk", &w]);
    assert_eq!(report_value(&r, "rate"), "0.761905");
    assert_eq!(code(&["analyze", "--codec", "tc1p", "--trace", &t, "--link", "8,8,128,512"]), 1);
    assert_eq!(code(&["analyze", "--codec", "tc1p", "--trace", &t, "--link", "8,16,128,256"]), 1);
    let bad = f.write("bad.txt", "LELCXT\nsideways 3\n");
    assert_eq!(code(&["analyze", "--codec", "tc1p", "--trace", &t, "--xtalk", &bad]), 2);
}

#[test]
fn exit_codes() {
    let f = Fixture::new();
    let t = f.trace();
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["analyze", "--trace", &t]), 1);
    assert_eq!(code(&["analyze", "--codec", "fnw:8", "--trace", &t, "--bogus"]), 1);
    assert_eq!(code(&["analyze", "--codec", "zip", "--trace", &t]), 1);
    assert_eq!(code(&["--help"]), 0);

    let junk = f.write("junk.bin", "not a trace");
    assert_eq!(code(&["analyze", "--codec", "fnw:8", "--trace", &junk]), 2);
    assert_eq!(code(&["analyze", "--codec", "fnw:8", "--trace", &f.p("missing.bin")]), 2);
    let bad_map = f.write("bad.txt", "LELCMAP 1 1\n0\n0\n");
    assert_eq!(code(&["encode", "--codec", &format!("map:{bad_map}"), "--trace", &t, "--out", &f.p("x")]), 2);
    let bad_pfx = f.write("pfx.txt", "LELCPFX 2\n0 0\n01 1\n");
    assert_eq!(code(&["encode", "--codec", &format!("pfx:{bad_pfx}"), "--trace", &t, "--out", &f.p("x")]), 2);

    // 512-bit payloads do not split into 3-bit datawords.
    let out = lelc(&["encode", "--codec", "fnw:3", "--trace", &t, "--out", &f.p("x")]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("payload 0"));

    // A fixed-rate coded file decoded with the wrong codec.
    ok(&["encode", "--codec", "fnw:8", "--trace", &t, "--out", &f.p("c.bin")]);
    assert_eq!(code(&["decode", "--codec", "tc1p", "--trace", &f.p("c.bin"), "--out", &f.p("d.bin")]), 2);
    // Corrupt a tc1p frame: an unknown codeword.
    ok(&["encode", "--codec", "tc1p", "--trace", &t, "--out", &f.p("p.bin")]);
    let mut bytes = fs::read(f.path("p.bin")).unwrap();
    bytes[13] = 0xFF;
    fs::write(f.path("p.bin"), &bytes).unwrap();
    assert_eq!(code(&["decode", "--codec", "tc1p", "--trace", &f.p("p.bin"), "--out", &f.p("d.bin")]), 3);
}

#[test]
fn analyze_is_deterministic() {
    let f = Fixture::new();
    let t = f.trace();
    let r1 = ok(&["analyze", "--codec", "fnw2:4,4", "--trace", &t]);
    fs::copy(&t, f.path("copy.bin")).unwrap();
    let r2 = ok(&["analyze", "--codec", "fnw2:4,4", "--trace", &f.p("copy.bin")]);
    assert_eq!(r1, r2);
}
