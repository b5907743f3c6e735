use std::fs;

use ks_forge_cli::run;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn ks(args: &[&str], stdin: &str) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ks-forge").chain(args.iter().copied());
    let code = run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

const HEXAGON: &str = "1234,4567,789A,ABCD,DEFG,GHI1.";

fn catalog(name: &str) -> String {
    let o = ks(&["catalog", name], "");
    assert_eq!(o.code, 0, "{}", o.stderr);
    o.stdout
}

#[test]
fn states_per_line() {
    let input = format!("{HEXAGON}\n\n# comment\n{}", catalog("18-9"));
    let o = ks(&["states"], &input);
    assert_eq!((o.code, o.stdout.as_str()), (0, "HAS-STATE\nKS\n"));
    let o = ks(&["states", "--witness"], HEXAGON);
    let ones = o.stdout.trim().strip_prefix("HAS-STATE ").unwrap();
    for edge in HEXAGON.trim_end_matches('.').split(',') {
        assert_eq!(
            edge.chars().filter(|c| ones.contains(*c)).count(),
            1,
            "{edge}"
        );
    }
    let o = ks(&["states", "--count"], "1234.\n");
    assert_eq!(o.stdout, "4\n");
}

#[test]
fn catalog_entries() {
    assert_eq!(
        catalog("20-10"),
        "1234,4567,789A,ABCD,DEFG,GHI1,H68F,IJK5,1J9B,4KEC.\n"
    );
    let o = ks(&["catalog", "--list"], "");
    assert!(o.stdout.starts_with("name\tsize\tsource\n"));
    assert!(o.stdout.lines().any(|l| l.starts_with("24-15-4\t24-15\t")));
    let o = ks(&["catalog", "18-9", "--vectors"], "");
    assert_eq!(o.stdout.lines().count(), 18);
    assert_eq!(ks(&["catalog", "nope"], "").code, 2);
    assert_eq!(ks(&["catalog", "20-10", "--vectors"], "").code, 2);
}

#[test]
fn bad_lines_are_numbered_and_skipped() {
    let o = ks(
        &["validate"],
        "1234,4567.\n1234,1235.\n\n12345,5678.\n1234,4567,7891.\n",
    );
    assert_eq!(o.code, 1);
    assert_eq!(o.stdout, "OK 7-2\nOK 9-3\n");
    let lines: Vec<&str> = o.stderr.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("line 2: "), "{}", lines[0]);
    assert!(lines[1].starts_with("line 4: "), "{}", lines[1]);
}

#[test]
fn usage_errors() {
    assert_eq!(ks(&[], "").code, 2);
    assert_eq!(ks(&["frobnicate"], "").code, 2);
    assert_eq!(ks(&["vectorfind", "--timeout", "-1"], HEXAGON).code, 2);
    assert_eq!(
        ks(&["vectorfind", "--pool", "/no/such/file"], HEXAGON).code,
        2
    );
    assert_eq!(ks(&["subgraph", "--ref", "/no/such/file"], HEXAGON).code, 2);
    let help = ks(&["--help"], "");
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("vectorfind"));
}

#[test]
fn subgraph_against_a_reference_file() {
    let dir = tempfile::tempdir().unwrap();
    let reference = dir.path().join("ref.txt");
    fs::write(&reference, catalog("22-11")).unwrap();
    let r = reference.to_str().unwrap();
    let input = format!(
        "{}{}{}",
        catalog("18-9"),
        catalog("20-10"),
        catalog("24-15")
    );
    let o = ks(&["subgraph", "--ref", r], &input);
    assert_eq!(o.stdout, "YES\nYES\nNO\n");
    let o = ks(&["subgraph", "--ref", r, "--witness"], "1234,4567.\n");
    assert_eq!(o.stdout.trim(), "YES 1234->1234,4567->4567");
}

#[test]
fn subsets_and_dedup() {
    let chain = "1234,4567,789A.\n";
    assert_eq!(
        ks(&["subsets"], chain).stdout,
        "1234,4567.\n4567,789A.\n1234,4567,789A.\n"
    );
    assert_eq!(
        ks(&["subsets", "--keep-isolated"], chain)
            .stdout
            .lines()
            .count(),
        7
    );
    let hx = format!("{HEXAGON}\n");
    let classes = ks(&["subsets", "--dedup"], &hx).stdout;
    let sizes: Vec<String> = classes
        .lines()
        .map(|l| ks(&["validate"], l).stdout.trim().to_string())
        .collect();
    assert_eq!(
        sizes,
        ["OK 7-2", "OK 10-3", "OK 13-4", "OK 14-4", "OK 16-5", "OK 18-6"]
    );
    let only_ks = ks(&["subsets", "--ks"], &catalog("18-9")).stdout;
    assert_eq!(only_ks, catalog("18-9"));
}

#[test]
fn worker_count_does_not_change_output() {
    let input = catalog("20-11a");
    let one = ks(&["subsets", "--dedup", "--jobs", "1"], &input);
    let three = ks(&["subsets", "--dedup", "--jobs", "3"], &input);
    assert_eq!(one.stdout, three.stdout);
    assert!(!one.stdout.is_empty());
}

#[test]
fn vectorfind_outcomes() {
    let input = format!("{}{}", catalog("18-9"), catalog("22-11"));
    let o = ks(&["vectorfind", "--timeout", "30"], &input);
    let lines: Vec<&str> = o.stdout.lines().collect();
    assert!(lines[0].starts_with("ASSIGNED 1=("));
    assert_eq!(lines[1], "NO-SOLUTION");
    let o = ks(
        &["vectorfind", "--timeout", "30", "--pool", "table2-22-11"],
        &catalog("22-11"),
    );
    assert!(o.stdout.starts_with("ASSIGNED"));
    let o = ks(
        &["vectorfind", "--timeout", "30", "--reduce"],
        &catalog("22-11"),
    );
    assert!(o.stdout.contains("L=(0,1,-2,-1)"), "{}", o.stdout);

    let dir = tempfile::tempdir().unwrap();
    let pool = dir.path().join("pool.txt");
    fs::write(&pool, "(1,0,0,0)\n(0,1,0,0)\n(0,0,1,0)\n(0,0,0,1)\n").unwrap();
    let o = ks(
        &[
            "vectorfind",
            "--timeout",
            "30",
            "--pool",
            pool.to_str().unwrap(),
        ],
        "1234.\n5678,8ABC.\n",
    );
    assert_eq!(o.stdout.lines().nth(1), Some("NO-SOLUTION"));
    assert!(o.stdout.starts_with("ASSIGNED"));
}

#[test]
fn timeout_from_the_environment() {
    std::env::set_var("KS_FORGE_TIMEOUT", "0");
    let o = ks(&["vectorfind"], &catalog("22-11"));
    std::env::remove_var("KS_FORGE_TIMEOUT");
    assert_eq!(o.stdout, "INDETERMINATE\n");
}

#[test]
fn canon_loops_and_equations() {
    let relabelled = "abcd,defg,ghij,jklm,mnop,pqra.\n";
    let keys = ks(&["canon"], &format!("{HEXAGON}\n{relabelled}")).stdout;
    let keys: Vec<&str> = keys.lines().collect();
    assert_eq!(keys[0], keys[1]);
    let a = ks(&["canon", "--diagram"], HEXAGON).stdout;
    let b = ks(&["canon", "--diagram"], relabelled).stdout;
    assert_eq!(a, b);
    assert_eq!(
        ks(&["loops"], &format!("{HEXAGON}\n1234,4567.\n")).stdout,
        "6\n0\n"
    );
    let eqs = ks(&["equations"], "1234.\n1234,4567.\n").stdout;
    assert_eq!(eqs.lines().filter(|l| l.is_empty()).count(), 2);
    assert_eq!(eqs.lines().filter(|l| !l.is_empty()).count(), 6 + 12);
}

#[test]
fn critical_report() {
    let input = format!("{}{}", catalog("18-9"), catalog("20-10"));
    let o = ks(&["critical"], &input);
    let rows: Vec<Vec<&str>> = o.stdout.lines().map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows[0], ["name", "key", "critical", "witness"]);
    assert_eq!((rows[1][0], rows[1][2], rows[1][3]), ("18-9", "true", ""));
    assert_eq!((rows[2][0], rows[2][2]), ("20-10", "false"));
    assert_eq!(rows[2][3], rows[1][1]);
}

#[test]
fn table1_with_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let o = ks(
        &[
            "table1",
            "--jobs",
            "2",
            "--out-dir",
            dir.path().to_str().unwrap(),
        ],
        "",
    );
    assert_eq!(o.code, 0, "{}", o.stderr);
    let total = o.stdout.lines().last().unwrap();
    assert!(total.ends_with("\t1233"), "{total}");
    assert_eq!(
        fs::read_to_string(dir.path().join("table1.tsv")).unwrap(),
        o.stdout
    );
    let reps = fs::read_to_string(dir.path().join("representatives.txt")).unwrap();
    assert_eq!(reps.lines().count(), 1233);
    let loops = ks(&["loops"], &reps).stdout;
    assert!(loops.lines().all(|l| l == "6"));
}
