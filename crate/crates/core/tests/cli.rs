use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use bassorder::cli::{from_json, to_json, ClassesArtifact, JobSpec, OrdersArtifact, CACHE_ENV};

fn run(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bassorder"));
    cmd.args(args).env_remove(CACHE_ENV);
    if let Some(dir) = cache {
        cmd.env(CACHE_ENV, dir);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn round_trips<T: serde::Serialize + serde::de::DeserializeOwned>(path: &Path) {
    let text = fs::read_to_string(path).unwrap();
    let value: T = from_json(&text).unwrap();
    assert_eq!(to_json(&value).unwrap(), text, "{}", path.display());
}

#[test]
fn ideal_classes_at_disc_6_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["ideal-classes", "--preset", "sqrt5", "--disc", "6", "-o", out], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("2 classes"));
    round_trips::<OrdersArtifact>(&dir.path().join("orders.json"));
    round_trips::<ClassesArtifact>(&dir.path().join("classes.json"));

    let v = run(&["verify", out], None);
    assert!(v.status.success(), "{}", stdout(&v));
    let report = fs::read_to_string(dir.path().join("verify.txt")).unwrap();
    assert!(report.contains("10 = 4 + 6"));
    assert_eq!(report.lines().last(), Some("PASS"));
    assert!(!report.contains("FAIL"));

    // a tampered class number fails verification
    let path = dir.path().join("classes.json");
    let text = fs::read_to_string(&path).unwrap();
    let mut art: ClassesArtifact = from_json(&text).unwrap();
    art.levels.last_mut().unwrap().class_number = 3;
    fs::write(&path, to_json(&art).unwrap()).unwrap();
    let v = run(&["verify", out], None);
    assert_eq!(v.status.code(), Some(4));
    assert!(fs::read_to_string(dir.path().join("verify.txt")).unwrap().contains("FAIL"));
}

#[test]
fn chain_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["chain", "--preset", "sqrt5", "-o", out], Some(cache.path()));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let first = fs::read_to_string(dir.path().join("orders.json")).unwrap();
    let art: OrdersArtifact = from_json(&first).unwrap();
    assert_eq!(art.orders.len(), 5);
    assert!(fs::read_dir(cache.path()).unwrap().count() >= 1);

    let o = run(&["chain", "--preset", "sqrt5", "-o", out], Some(cache.path()));
    assert!(o.status.success());
    assert_eq!(fs::read_to_string(dir.path().join("orders.json")).unwrap(), first);
    let v = run(&["verify", out], None);
    assert!(v.status.success(), "{}", stdout(&v));
}

#[test]
fn classify_and_suborder_over_q() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let hurwitz = ["--d", "1", "--a", "-1", "--b", "-1", "--gen", "i", "--gen", "j", "--gen", "(1+i+j+k)/2"];
    let mut args = vec!["classify"];
    args.extend(hurwitz);
    args.extend(["--prime", "3", "-o", out]);
    let o = run(&args, None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("2: A2 s=1"), "{}", stdout(&o));

    let mut args = vec!["suborder"];
    args.extend(hurwitz);
    args.extend(["--prime", "3", "--class", "A1 s=1", "-o", out]);
    let o = run(&args, None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("3: A1 s=1"), "{}", stdout(&o));
    assert!(run(&["verify", out], None).status.success());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(run(&["chain", "--preset", "nope", "-o", out], None).status.code(), Some(2));
    let o = run(&["chain", "--d", "17", "--a", "-1", "--b", "-1", "--gen", "i", "--gen", "j", "--disc", "2", "-o", out], None);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    // Q(√3) has a fundamental unit of norm 1
    let o = run(&["ideal-classes", "--d", "3", "--a", "-1", "--b", "-1", "--gen", "i", "--gen", "j", "-o", out], None);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let empty = tempfile::tempdir().unwrap();
    assert_ne!(run(&["verify", empty.path().to_str().unwrap()], None).status.code(), Some(0));
}

#[test]
fn job_spec_round_trip() {
    let spec = JobSpec::preset("sqrt5").unwrap();
    let text = to_json(&spec).unwrap();
    assert_eq!(from_json::<JobSpec>(&text).unwrap(), spec);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("job.json");
    let mut small = spec.clone();
    small.disc = Some("2".into());
    small.output = dir.path().join("out");
    fs::write(&path, to_json(&small).unwrap()).unwrap();
    let o = run(&["chain", "--spec", path.to_str().unwrap()], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let art: OrdersArtifact = from_json(&fs::read_to_string(dir.path().join("out/orders.json")).unwrap()).unwrap();
    assert_eq!(art.orders.len(), 2);
}
