//! Runs the `hardy-verify` pipeline in-process against a scratch directory.

use std::fs;

use discrete_hardy::cli::parse_and_dispatch;

fn main() -> std::io::Result<()> {
    let dir = std::env::temp_dir().join("hardy-verify-example");
    fs::create_dir_all(&dir)?;
    let path = |f: &str| dir.join(f).display().to_string();
    fs::write(path("A.json"), r#"{"offset":1,"values":[[1,0],[0.5,0.5],[-0.25,0]]}"#)?;
    fs::write(path("claimed.csv"), "n,value\n1,0.6\n2,0.06\n")?;

    let runs: [Vec<String>; 5] = [
        vec!["weights".into(), "--family".into(), "keller".into(), "--n-range".into(), "1:20".into(), "--out".into(), path("w.csv")],
        vec!["identity".into(), "hardy".into(), "--input".into(), path("A.json")],
        vec!["verify".into(), "copson".into(), "--c".into(), "1.2".into(), "--input".into(), path("A.json")],
        vec!["optimality".into(), "copson".into(), "--N-list".into(), "10,100".into(), "--out".into(), path("o.csv")],
        vec!["weights".into(), "--family".into(), "keller".into(), "--check".into(), path("claimed.csv"), "--out".into(), path("c.csv")],
    ];
    for args in runs {
        let argv = std::iter::once("hardy-verify".to_string()).chain(args.iter().cloned());
        let o = parse_and_dispatch(argv);
        println!("$ hardy-verify {}\n  exit {}", args.join(" "), o.exit_code);
        for line in o.lines.iter().chain(&o.diagnostics) {
            println!("  {line}");
        }
    }
    Ok(())
}
