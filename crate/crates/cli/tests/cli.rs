use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_uwb-nlos"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn uwb-nlos")
}

fn ok(dir: &Path, args: &[&str]) -> Output {
    let out = run(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

const HEADER: &str =
    "index,true_distance_m,estimated_distance_m,fp_amp1,fp_amp2,fp_amp3,cir_power,preamble_count,label";

#[test]
fn full_pipeline() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    ok(d, &["simulate", "--seed", "4", "-o", "data.csv"]);
    assert_eq!(read(d, "data.csv").lines().count(), 551);
    ok(d, &["features", "-i", "data.csv", "-o", "feat.csv"]);
    assert!(read(d, "feat.csv")
        .starts_with("# window=20\nindex,label,first_path_power,power_difference\n"));
    ok(
        d,
        &[
            "fit",
            "-i",
            "feat.csv",
            "--family",
            "ggd",
            "--validation",
            "feat.csv",
            "-o",
            "ggd.model",
        ],
    );
    ok(d, &["train-nb", "-i", "feat.csv", "-o", "nb.model"]);
    assert!(read(d, "ggd.model").starts_with("uwb-nlos-model 1\nfamily ggd\n"));
    assert!(read(d, "nb.model").contains("prior nlos "));

    for model in ["ggd.model", "nb.model"] {
        ok(
            d,
            &[
                "classify",
                "-m",
                model,
                "-i",
                "data.csv",
                "-o",
                "labeled.csv",
            ],
        );
        let text = read(d, "labeled.csv");
        let nlos = text.lines().skip(1).filter(|l| l.ends_with(",1")).count();
        assert!(
            (40..=60).contains(&nlos),
            "{model}: {nlos} rows labeled nlos"
        );
    }

    ok(
        d,
        &[
            "plotdata", "-i", "data.csv", "--bins", "12", "-o", "plot.txt",
        ],
    );
    let plot = read(d, "plot.txt");
    assert!(plot.contains("# histogram\nbin_center density\n"));
    assert!(plot.contains("# curves\nx gd_pdf ggd_pdf\n"));
}

#[test]
fn plotdata_uses_saved_error_models() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    ok(
        d,
        &[
            "simulate", "--n-los", "200", "--n-nlos", "20", "-o", "data.csv",
        ],
    );
    ok(
        d,
        &[
            "features",
            "-i",
            "data.csv",
            "--features",
            "distance_error",
            "-o",
            "err.csv",
        ],
    );
    ok(
        d,
        &["fit", "-i", "err.csv", "--family", "gd", "-o", "gd.model"],
    );
    ok(
        d,
        &["fit", "-i", "err.csv", "--family", "ggd", "-o", "ggd.model"],
    );
    ok(
        d,
        &[
            "plotdata",
            "-i",
            "data.csv",
            "--gd-model",
            "gd.model",
            "--ggd-model",
            "ggd.model",
            "-o",
            "a.txt",
        ],
    );
    ok(d, &["plotdata", "-i", "data.csv", "-o", "b.txt"]);
    assert_eq!(read(d, "a.txt"), read(d, "b.txt"));
    let swapped = run(
        d,
        &[
            "plotdata",
            "-i",
            "data.csv",
            "--gd-model",
            "ggd.model",
            "-o",
            "c.txt",
        ],
    );
    assert_eq!(code(&swapped), 2);
}

#[test]
fn commands_are_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    fs::write(
        d.join("exp.toml"),
        "[scenario]\nseed = 12\n\n[experiment]\nsplit_seed = 3\n",
    )
    .unwrap();
    for round in ["1", "2"] {
        ok(
            d,
            &["simulate", "--seed", "9", "-o", &format!("data{round}.csv")],
        );
        ok(
            d,
            &[
                "features",
                "-i",
                &format!("data{round}.csv"),
                "-o",
                &format!("f{round}.csv"),
            ],
        );
        ok(
            d,
            &[
                "fit",
                "-i",
                &format!("f{round}.csv"),
                "--family",
                "ggd",
                "--epsilon",
                "-9",
                "-o",
                &format!("m{round}.model"),
            ],
        );
        ok(
            d,
            &[
                "evaluate",
                "-c",
                "exp.toml",
                "--omit-runtime",
                "-o",
                &format!("r{round}.toml"),
            ],
        );
    }
    for (a, b) in [
        ("data1.csv", "data2.csv"),
        ("f1.csv", "f2.csv"),
        ("m1.model", "m2.model"),
        ("r1.toml", "r2.toml"),
    ] {
        assert_eq!(
            fs::read(d.join(a)).unwrap(),
            fs::read(d.join(b)).unwrap(),
            "{a} vs {b}"
        );
    }
    assert!(read(d, "r1.toml").contains("runtime_ms = 0.0"));
}

#[test]
fn evaluate_reads_a_dataset_relative_to_the_config() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let sub: PathBuf = d.join("cfg");
    fs::create_dir(&sub).unwrap();
    ok(d, &["simulate", "--seed", "2", "-o", "cfg/data.csv"]);
    fs::write(sub.join("exp.toml"), "dataset = \"data.csv\"\n").unwrap();
    let out = ok(d, &["evaluate", "-c", "cfg/exp.toml", "-o", "r.toml"]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("ggd"), "{stdout}");
    assert!(read(d, "r.toml").contains("name = \"nb\""));
}

#[test]
fn usage_errors_exit_1_and_help_exits_0() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    assert_eq!(code(&run(d, &["--help"])), 0);
    assert_eq!(code(&run(d, &["fit", "--help"])), 0);
    assert_eq!(code(&run(d, &[])), 1);
    assert_eq!(code(&run(d, &["frobnicate"])), 1);
    assert_eq!(
        code(&run(
            d,
            &["fit", "-i", "x.csv", "--family", "lognormal", "-o", "m"]
        )),
        1
    );
    assert_eq!(
        code(&run(
            d,
            &[
                "fit",
                "-i",
                "x",
                "--family",
                "gd",
                "--epsilon",
                "1",
                "--validation",
                "v",
                "-o",
                "m"
            ]
        )),
        1
    );
    ok(d, &["simulate", "-o", "data.csv"]);
    assert_eq!(
        code(&run(
            d,
            &[
                "features",
                "-i",
                "data.csv",
                "--features",
                "colour",
                "-o",
                "f.csv"
            ]
        )),
        1
    );
}

#[test]
fn data_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    assert_eq!(
        code(&run(d, &["features", "-i", "missing.csv", "-o", "f.csv"])),
        2
    );

    fs::write(
        d.join("bad.csv"),
        format!("{HEADER}\n0,1.5,1.5,10,10,10,1000,16,2\n"),
    )
    .unwrap();
    let out = run(d, &["features", "-i", "bad.csv", "-o", "f.csv"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    fs::write(d.join("hdr.csv"), "a,b,c\n1,2,3\n").unwrap();
    assert_eq!(
        code(&run(d, &["features", "-i", "hdr.csv", "-o", "f.csv"])),
        2
    );

    fs::write(d.join("m.model"), "uwb-nlos-model 7\nend\n").unwrap();
    ok(d, &["simulate", "-o", "data.csv"]);
    assert_eq!(
        code(&run(
            d,
            &["classify", "-m", "m.model", "-i", "data.csv", "-o", "o.csv"]
        )),
        2
    );

    // A model without a threshold cannot classify.
    ok(d, &["features", "-i", "data.csv", "-o", "f.csv"]);
    ok(
        d,
        &["fit", "-i", "f.csv", "--family", "gd", "-o", "noeps.model"],
    );
    assert_eq!(
        code(&run(
            d,
            &[
                "classify",
                "-m",
                "noeps.model",
                "-i",
                "data.csv",
                "-o",
                "o.csv"
            ]
        )),
        2
    );
}

#[test]
fn degenerate_fits_exit_3() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let mut text = String::from("# window=20\nindex,label,first_path_power,power_difference\n");
    for i in 0..30 {
        text.push_str(&format!("{i},0,-80.0,{}\n", 3.0 + f64::from(i) * 0.1));
    }
    fs::write(d.join("flat.csv"), text).unwrap();
    let out = run(
        d,
        &["fit", "-i", "flat.csv", "--family", "ggd", "-o", "m.model"],
    );
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("first_path_power"));
    assert!(!d.join("m.model").exists());
}
