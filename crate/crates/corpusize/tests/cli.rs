//! End-to-end tests of the `corpusize` binary: every subcommand, the file
//! outputs it promises, and the exit-code contract.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_corpusize"))
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn demo_manifest() -> String {
    fixtures()
        .join("demo/manifest.toml")
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary should run")
}

fn assert_ok(out: &Output) {
    assert!(
        out.status.success(),
        "command failed\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no exit code (signal?)")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("reading {name}: {e}"))
}

/// Splits a CSV line naively (no quoted fields contain commas in these
/// tests' numeric columns).
fn fields(line: &str) -> Vec<&str> {
    line.split(',').collect()
}

#[test]
fn stats_reports_raw_and_sampled_counts() {
    let out_dir = TempDir::new().unwrap();
    let out = run(&[
        "stats",
        "--manifest",
        &demo_manifest(),
        "--seed",
        "7",
        "--target-tokens",
        "4000",
        "--out",
        out_dir.path().to_str().unwrap(),
    ]);
    assert_ok(&out);
    assert!(stdout(&out).contains("TOTAL"));

    let csv = read(out_dir.path(), "stats.csv");
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 6, "header + 4 domains + TOTAL:\n{csv}");
    assert_eq!(
        lines[0],
        "domain_id,label,register,raw_tokens,raw_types,sampled_tokens,sampled_types"
    );

    // Raw counts are a property of the committed fixture + default rules.
    let expect = [
        ("news", "written", 16138u64, 2416u64),
        ("law", "written", 13274, 2991),
        ("stories", "written", 14558, 1862),
        ("talks", "spoken", 12992, 1191),
    ];
    for (line, (id, register, raw_tokens, raw_types)) in lines[1..5].iter().zip(expect) {
        let f = fields(line);
        assert_eq!(f[0], id);
        assert_eq!(f[2], register);
        assert_eq!(f[3].parse::<u64>().unwrap(), raw_tokens);
        assert_eq!(f[4].parse::<u64>().unwrap(), raw_types);
        let sampled_tokens: u64 = f[5].parse().unwrap();
        let sampled_types: u64 = f[6].parse().unwrap();
        // Whole sentences are drawn until the budget is met, so the total
        // can overshoot by at most one sentence.
        assert!((4000..4100).contains(&sampled_tokens), "{sampled_tokens}");
        assert!(sampled_types <= raw_types);
    }
    let total = fields(lines[5]);
    assert_eq!(total[0], "TOTAL");
    assert_eq!(
        total[3].parse::<u64>().unwrap(),
        16138 + 13274 + 14558 + 12992
    );
    // The union vocabulary is smaller than the per-domain sum (shared forms).
    let union_types: u64 = total[4].parse().unwrap();
    assert!(union_types < 2416 + 2991 + 1862 + 1191);
    assert!(union_types >= 2991);
}

#[test]
fn stats_without_target_keeps_everything() {
    let out_dir = TempDir::new().unwrap();
    let out = run(&[
        "stats",
        "--manifest",
        &demo_manifest(),
        "--out",
        out_dir.path().to_str().unwrap(),
    ]);
    assert_ok(&out);
    let csv = read(out_dir.path(), "stats.csv");
    for line in csv.lines().skip(1) {
        let f = fields(line);
        assert_eq!(f[3], f[5], "tokens should be untouched: {line}");
        assert_eq!(f[4], f[6], "types should be untouched: {line}");
    }
}

#[test]
fn case_folding_merges_capitalized_forms() {
    let plain_dir = TempDir::new().unwrap();
    let folded_dir = TempDir::new().unwrap();
    assert_ok(&run(&[
        "stats",
        "--manifest",
        &demo_manifest(),
        "--out",
        plain_dir.path().to_str().unwrap(),
    ]));
    assert_ok(&run(&[
        "stats",
        "--manifest",
        &demo_manifest(),
        "--case-fold",
        "--out",
        folded_dir.path().to_str().unwrap(),
    ]));
    let types = |dir: &Path| -> u64 {
        let csv = read(dir, "stats.csv");
        let line = csv.lines().last().unwrap().to_string();
        fields(&line)[4].parse().unwrap()
    };
    let plain = types(plain_dir.path());
    let folded = types(folded_dir.path());
    assert!(
        folded < plain,
        "folding should merge sentence-initial capitals: {folded} vs {plain}"
    );
}

#[test]
fn growth_orderings_start_with_the_right_domain() {
    let out_dir = TempDir::new().unwrap();
    let out = run(&[
        "growth",
        "--manifest",
        &demo_manifest(),
        "--seed",
        "42",
        "--target-tokens",
        "4000",
        "--out",
        out_dir.path().to_str().unwrap(),
    ]);
    assert_ok(&out);

    let types_desc = read(out_dir.path(), "growth_types_desc.csv");
    let manifest = read(out_dir.path(), "growth_manifest.csv");
    for csv in [&types_desc, &manifest] {
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "order_index,corpus_id,cum_tokens,cum_types");
        let mut prev_tokens = 0u64;
        let mut prev_types = 0u64;
        for (i, line) in lines[1..].iter().enumerate() {
            let f = fields(line);
            assert_eq!(f[0].parse::<usize>().unwrap(), i + 1);
            let tokens: u64 = f[2].parse().unwrap();
            let types: u64 = f[3].parse().unwrap();
            assert!(tokens > prev_tokens);
            assert!(types >= prev_types);
            prev_tokens = tokens;
            prev_types = types;
        }
    }
    // The law domain carries the richest vocabulary, so the types-first
    // ordering leads with it; the manifest ordering keeps file order.
    assert_eq!(fields(types_desc.lines().nth(1).unwrap())[1], "law");
    let manifest_ids: Vec<&str> = manifest.lines().skip(1).map(|l| fields(l)[1]).collect();
    assert_eq!(manifest_ids, ["news", "law", "stories", "talks"]);
}

#[test]
fn growth_is_deterministic_per_seed() {
    let dir_a = TempDir::new().unwrap();
    let dir_b = TempDir::new().unwrap();
    let dir_c = TempDir::new().unwrap();
    for (dir, seed) in [(&dir_a, "5"), (&dir_b, "5"), (&dir_c, "6")] {
        assert_ok(&run(&[
            "growth",
            "--manifest",
            &demo_manifest(),
            "--seed",
            seed,
            "--target-tokens",
            "4000",
            "--out",
            dir.path().to_str().unwrap(),
        ]));
    }
    for name in ["growth_types_desc.csv", "growth_manifest.csv"] {
        assert_eq!(
            read(dir_a.path(), name),
            read(dir_b.path(), name),
            "same seed must reproduce {name} exactly"
        );
    }
    assert_ne!(
        read(dir_a.path(), "growth_manifest.csv"),
        read(dir_c.path(), "growth_manifest.csv"),
        "a different seed should draw a different sample"
    );
}

#[test]
fn shuffle_respects_pins() {
    for seed in ["0", "1", "9"] {
        let out_dir = TempDir::new().unwrap();
        let out = run(&[
            "growth",
            "--manifest",
            &demo_manifest(),
            "--seed",
            seed,
            "--target-tokens",
            "4000",
            "--ordering",
            "shuffle",
            "--pin",
            "1=talks",
            "--pin",
            "4=news",
            "--out",
            out_dir.path().to_str().unwrap(),
        ]);
        assert_ok(&out);
        let csv = read(out_dir.path(), "growth_pinned_shuffle.csv");
        let ids: Vec<&str> = csv.lines().skip(1).map(|l| fields(l)[1]).collect();
        assert_eq!(ids[0], "talks", "seed {seed}: {ids:?}");
        assert_eq!(ids[3], "news", "seed {seed}: {ids:?}");
    }
}

#[test]
fn bad_pins_exit_2() {
    let out = run(&[
        "growth",
        "--manifest",
        &demo_manifest(),
        "--target-tokens",
        "4000",
        "--ordering",
        "shuffle",
        "--pin",
        "9=talks",
    ]);
    assert_eq!(exit_code(&out), 2, "{}", stderr(&out));

    let out = run(&[
        "growth",
        "--manifest",
        &demo_manifest(),
        "--target-tokens",
        "4000",
        "--ordering",
        "shuffle",
        "--pin",
        "1=bogus",
    ]);
    assert_eq!(exit_code(&out), 2, "{}", stderr(&out));
}

#[test]
fn fit_reference_dataset_matches_expected_parameters() {
    let out_dir = TempDir::new().unwrap();
    let input = fixtures().join("reference/growth_dataset1.csv");
    let out = run(&[
        "fit",
        input.to_str().unwrap(),
        "--out",
        out_dir.path().to_str().unwrap(),
    ]);
    assert_ok(&out);
    assert!(stdout(&out).contains("k = 56.31"), "{}", stdout(&out));

    let json: serde_json::Value =
        serde_json::from_str(&read(out_dir.path(), "fit_dataset1.json")).unwrap();
    let k = json["k"].as_f64().unwrap();
    let beta = json["beta"].as_f64().unwrap();
    let r2 = json["r_squared"].as_f64().unwrap();
    assert!((k - 56.31101).abs() / 56.31101 < 0.02, "k = {k}");
    assert!((beta - 0.52054).abs() < 0.002, "beta = {beta}");
    assert!(r2 > 0.9 && r2 <= 1.0, "r^2 = {r2}");
    assert_eq!(json["n_points"].as_u64().unwrap(), 10);
    assert_eq!(json["points"].as_array().unwrap().len(), 10);
}

#[test]
fn fit_rejects_malformed_csv_with_line_numbers() {
    let dir = TempDir::new().unwrap();

    let bad_header = dir.path().join("bad_header.csv");
    fs::write(&bad_header, "tokens,types\n1,c,10,5\n").unwrap();
    let out = run(&["fit", bad_header.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("line 1"), "{}", stderr(&out));

    let short_row = dir.path().join("short_row.csv");
    fs::write(
        &short_row,
        "order_index,corpus_id,cum_tokens,cum_types\n1,c1,100\n",
    )
    .unwrap();
    let out = run(&["fit", short_row.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));

    let one_row = dir.path().join("one_row.csv");
    fs::write(
        &one_row,
        "order_index,corpus_id,cum_tokens,cum_types\n1,c1,100,40\n",
    )
    .unwrap();
    let out = run(&["fit", one_row.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2, "{}", stderr(&out));
}

#[test]
fn project_reference_fit_recommends_42m() {
    let out_dir = TempDir::new().unwrap();
    let input = fixtures().join("reference/fit_function1.json");
    let out = run(&[
        "project",
        input.to_str().unwrap(),
        "--emit-svg",
        "--out",
        out_dir.path().to_str().unwrap(),
    ]);
    assert_ok(&out);
    assert!(stdout(&out).contains("42000000"), "{}", stdout(&out));

    let rec: serde_json::Value =
        serde_json::from_str(&read(out_dir.path(), "recommendation_function1.json")).unwrap();
    assert_eq!(rec["n_recommended"].as_u64().unwrap(), 42_000_000);
    assert_eq!(rec["mode"].as_str().unwrap(), "paper_compat");
    assert_eq!(rec["threshold"].as_f64().unwrap(), 1e-4);

    let csv = read(out_dir.path(), "projection_function1.csv");
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 103, "header + 102 grid rows");
    assert!(lines[1].starts_with("1000000,74788,"), "{}", lines[1]);
    let at_42m = lines
        .iter()
        .find(|l| l.starts_with("42000000,"))
        .expect("42M row");
    let f = fields(at_42m);
    assert_eq!(f[1], "523359");
    assert_eq!(f[4], "0.0125");
    assert_eq!(f[5], "0.0001");

    for chart in [
        "chart_growth_function1.svg",
        "chart_types_function1.svg",
        "chart_ttr_function1.svg",
        "chart_ttr_change_function1.svg",
    ] {
        let svg = read(out_dir.path(), chart);
        assert!(svg.starts_with("<svg "), "{chart} is not an SVG");
    }
}

#[test]
fn project_exact_mode_fires_later_than_display_mode() {
    let out_dir = TempDir::new().unwrap();
    let input = fixtures().join("reference/fit_function1.json");
    let out = run(&[
        "project",
        input.to_str().unwrap(),
        "--mode",
        "exact",
        "--out",
        out_dir.path().to_str().unwrap(),
    ]);
    assert_ok(&out);
    let rec: serde_json::Value =
        serde_json::from_str(&read(out_dir.path(), "recommendation_function1.json")).unwrap();
    assert_eq!(rec["n_recommended"].as_u64().unwrap(), 54_000_000);
    assert_eq!(rec["mode"].as_str().unwrap(), "exact");
}

#[test]
fn project_with_short_grid_exits_4_but_writes_the_table() {
    let out_dir = TempDir::new().unwrap();
    let input = fixtures().join("reference/fit_function1.json");
    let out = run(&[
        "project",
        input.to_str().unwrap(),
        "--grid-end",
        "10000000",
        "--out",
        out_dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 4, "{}", stderr(&out));
    assert!(stderr(&out).contains("10000000"), "{}", stderr(&out));

    let csv = read(out_dir.path(), "projection_function1.csv");
    assert_eq!(csv.lines().count(), 11, "header + 10 rows");
    assert!(
        !out_dir
            .path()
            .join("recommendation_function1.json")
            .exists(),
        "no recommendation should be written on exit 4"
    );
}

#[test]
fn missing_corpus_files_exit_3() {
    let dir = TempDir::new().unwrap();
    let manifest = dir.path().join("manifest.toml");
    fs::write(
        &manifest,
        "[[domains]]\nid = \"ghost\"\nlabel = \"Ghost\"\nregister = \"written\"\npaths = [\"nope/*.txt\"]\n",
    )
    .unwrap();
    let out = run(&["stats", "--manifest", manifest.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 3, "{}", stderr(&out));
    assert!(
        stderr(&out).contains("no files matched"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn usage_errors_exit_2() {
    let out = run(&["growth", "--bad-flag"]);
    assert_eq!(exit_code(&out), 2);
    let out = run(&["nonsense"]);
    assert_eq!(exit_code(&out), 2);
    let out = run(&[
        "analyze",
        "--manifest",
        &demo_manifest(),
        "--target-tokens",
        "4000",
        "--threshold",
        "0",
    ]);
    assert_eq!(exit_code(&out), 2, "{}", stderr(&out));
}

#[test]
fn oversized_budget_exits_2_with_domain_context() {
    let out = run(&[
        "analyze",
        "--manifest",
        &demo_manifest(),
        "--target-tokens",
        "50000",
    ]);
    assert_eq!(exit_code(&out), 2, "{}", stderr(&out));
    let err = stderr(&out);
    assert!(err.contains("news"), "{err}");
    assert!(err.contains("50000"), "{err}");
}

#[test]
fn analyze_writes_summary_and_all_stage_files() {
    let out_dir = TempDir::new().unwrap();
    let out = run(&[
        "analyze",
        "--manifest",
        &demo_manifest(),
        "--seed",
        "0",
        "--target-tokens",
        "4000",
        "--out",
        out_dir.path().to_str().unwrap(),
    ]);
    assert_ok(&out);
    let text = stdout(&out);
    assert!(text.contains("ordering"), "{text}");
    assert!(text.contains("wrote 10 files"), "{text}");

    let mut names: Vec<String> = fs::read_dir(out_dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    assert_eq!(
        names,
        [
            "fit_manifest.json",
            "fit_types_desc.json",
            "growth_manifest.csv",
            "growth_types_desc.csv",
            "projection_manifest.csv",
            "projection_types_desc.csv",
            "recommendation_manifest.json",
            "recommendation_types_desc.json",
            "stats.csv",
            "summary.json",
        ]
    );

    let summary: serde_json::Value =
        serde_json::from_str(&read(out_dir.path(), "summary.json")).unwrap();
    assert_eq!(summary["seed"].as_u64().unwrap(), 0);
    assert_eq!(summary["target_tokens"].as_u64().unwrap(), 4000);
    assert_eq!(summary["unit"].as_str().unwrap(), "sentence");
    assert_eq!(summary["mode"].as_str().unwrap(), "paper_compat");
    assert_eq!(summary["grid"]["end"].as_u64().unwrap(), 102_000_000);

    let results = summary["results"].as_array().unwrap();
    assert_eq!(results.len(), 2);
    assert_eq!(
        results[0]["ordering_policy"].as_str().unwrap(),
        "types_desc"
    );
    assert_eq!(results[1]["ordering_policy"].as_str().unwrap(), "manifest");
    for r in results {
        let n = r["n_recommended"].as_u64().unwrap();
        assert!(n.is_multiple_of(1_000_000), "{n}");
        assert!((1_000_000..=102_000_000).contains(&n), "{n}");
        let beta = r["beta"].as_f64().unwrap();
        assert!(beta > 0.0 && beta < 1.0, "beta = {beta}");
    }

    let mut listed: Vec<String> = summary["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    listed.sort();
    assert_eq!(listed, names, "summary.outputs must match the directory");
}

#[test]
fn analyze_with_svg_adds_four_charts_per_ordering() {
    let out_dir = TempDir::new().unwrap();
    let out = run(&[
        "analyze",
        "--manifest",
        &demo_manifest(),
        "--seed",
        "1",
        "--target-tokens",
        "4000",
        "--emit-svg",
        "--out",
        out_dir.path().to_str().unwrap(),
    ]);
    assert_ok(&out);
    let svgs: Vec<String> = fs::read_dir(out_dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".svg"))
        .collect();
    assert_eq!(svgs.len(), 8, "{svgs:?}");
    for name in &svgs {
        assert!(read(out_dir.path(), name).starts_with("<svg "));
    }
}

#[test]
fn token_unit_samples_the_exact_budget() {
    let out_dir = TempDir::new().unwrap();
    let out = run(&[
        "growth",
        "--manifest",
        &demo_manifest(),
        "--unit",
        "token",
        "--seed",
        "9",
        "--target-tokens",
        "3000",
        "--ordering",
        "manifest",
        "--out",
        out_dir.path().to_str().unwrap(),
    ]);
    assert_ok(&out);
    let csv = read(out_dir.path(), "growth_manifest.csv");
    let cum_tokens: Vec<u64> = csv
        .lines()
        .skip(1)
        .map(|l| fields(l)[2].parse().unwrap())
        .collect();
    assert_eq!(cum_tokens, [3000, 6000, 9000, 12000]);
}
