use std::{path::PathBuf, process::Command};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

/// Runs the installed binary.
fn bin(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_perron")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

/// Runs the entry point in process.
fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = perron::run(std::iter::once("perron").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn find<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines()
        .find_map(|l| l.strip_prefix(key).filter(|rest| rest.starts_with(' ')).map(str::trim))
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    find(text, key).unwrap_or_else(|| panic!("no `{key}` in\n{text}"))
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let (code, out, err) = run(&all);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn expand_luroth_half() {
    let (code, out, _) = bin(&["expand", "1/2", "--system", "luroth", "-n", "4"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "digits"), "3 2 2 2");
}

#[test]
fn expand_one() {
    let (code, out, _) = run(&["expand", "1/1", "--system", "luroth", "-n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "digits"), "2 2 2");
    assert_eq!(field(&out, "sup"), "1");
}

#[test]
fn expand_pierce_endpoint_is_member() {
    let (code, out, _) = bin(&["expand", "1/2", "--system", "pierce", "--rep", "pminus"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "is-member"), "yes");
    assert_eq!(field(&out, "witness"), "(3)");
}

#[test]
fn expand_alternating_regular_point() {
    let (code, out, _) = run(&["expand", "2/5", "--system", "alt-luroth", "--rep", "pminus", "-n", "6"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "digits"), "3 2 2 3 2 2");
    assert_eq!(field(&out, "is-member"), "no");
}

#[test]
fn cylinder_positive() {
    let (code, out, _) = bin(&["cylinder", "3", "--system", "luroth"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "inf"), "1/3");
    assert_eq!(field(&out, "sup"), "1/2");
    assert_eq!(field(&out, "diam"), "1/6");
}

#[test]
fn cylinder_alternating() {
    let (code, out, _) = run(&["cylinder", "3", "--system", "alt-luroth", "--rep", "pminus"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "sup"), "1/2");
    assert_eq!(field(&out, "inf"), "1/3");
    assert_eq!(field(&out, "parity"), "odd");
}

#[test]
fn cylinder_invalid_digit() {
    let (code, out, err) = bin(&["cylinder", "3", "1"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("invalid digit 1 at position 2"), "{err}");
}

const LUROTH_ROOT: &str = "\
P cylinders of luroth
root (0, 1]  first child at sup
  (2) (1/2, 1]
  (3) (1/3, 1/2]
  (4) (1/4, 1/3]
  (5) (1/5, 1/4]
  (6) (1/6, 1/5]
  (7) (1/7, 1/6]
  (8) (1/8, 1/7]
  (9) (1/9, 1/8]
  ... (0, 1/9]
";

#[test]
fn diagram_golden_text() {
    let (code, out, _) = bin(&["diagram", "root", "--system", "luroth", "--depth", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out, LUROTH_ROOT);
}

#[test]
fn diagram_alternating_orientation() {
    let (code, out, _) = run(&[
        "diagram", "3", "--system", "alt-luroth", "--rep", "pminus", "--depth", "2", "--width", "2",
    ]);
    assert_eq!(code, 0);
    let expected = "\
P- cylinders of alt-luroth
(3) (1/3, 1/2)  first child at inf
  (3,2) (1/3, 5/12)  first child at sup
    (3,2,2) (3/8, 5/12)
    (3,2,3) (13/36, 3/8)
    ... (1/3, 13/36)
  (3,3) (5/12, 4/9)  first child at sup
    (3,3,2) (31/72, 4/9)
    (3,3,3) (23/54, 31/72)
    ... (5/12, 23/54)
  ... (4/9, 1/2)
";
    assert_eq!(out, expected);
}

#[test]
fn diagram_limits_and_formats() {
    assert_eq!(run(&["diagram", "root", "--depth", "5"]).0, 1);
    assert_eq!(run(&["diagram", "root", "--depth", "5", "--depth-cap", "5", "--width", "2"]).0, 0);
    let (code, svg, _) = run(&["diagram", "root", "--render", "svg", "--depth", "2", "--width", "3"]);
    assert_eq!(code, 0);
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    let tree = json(&["diagram", "root", "--depth", "1", "--width", "2"]);
    assert_eq!(tree["children"][0]["base"], serde_json::json!([2]));
    assert_eq!(tree["children"][1]["sup"], "1/2");
    assert_eq!(tree["rest"]["sup"], "1/3");
}

#[test]
fn converge_right_infimum() {
    let (code, out, _) = bin(&["converge", &data("right_infimum.json")]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "proposition"), "p-right-infimum");
    assert_eq!(field(&out, "verdict"), "converges");
    assert_eq!(field(&out, "consistent"), "yes");
    let v = json(&["converge", &data("right_infimum.json")]);
    let rows = v["evidence"].as_array().unwrap();
    assert_eq!(rows.len(), 11);
    // |xₙ − 1/2| for digits (2, n+2) and a minimal tail is 1/(2(n+1)).
    for row in rows {
        let n = row["n"].as_u64().unwrap();
        assert_eq!(row["upper"]["fraction"], format!("1/{}", 2 * (n + 1)));
        assert_eq!(row["holds"], true);
    }
}

#[test]
fn converge_constant_first_digit_diverges() {
    let (code, out, _) = bin(&["converge", &data("constant_first_digit.json")]);
    assert_eq!(code, 3);
    assert_eq!(field(&out, "verdict"), "diverges");
    assert_eq!(field(&out, "gap"), "1/5");
}

#[test]
fn converge_parity_violation() {
    let (code, _, err) = bin(&["converge", &data("parity_violation.json")]);
    assert_eq!(code, 2);
    assert!(err.contains("side mismatch"), "{err}");
}

#[test]
fn converge_two_sided_finite_list_is_undetermined() {
    let (code, out, _) = run(&["converge", &data("two_sided.json")]);
    assert_eq!(code, 4);
    assert_eq!(field(&out, "x0"), "1/2");
}

#[test]
fn converge_schema_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"representation":"p","system":"luroth","target":{"kind":"zero"},"family":{"kind":"first-digit","g":{"constant":2}},"extra":1}"#,
    )
    .unwrap();
    assert_eq!(run(&["converge", path.to_str().unwrap()]).0, 1);
    assert_eq!(run(&["converge", "/nonexistent/spec.json"]).0, 1);
}

#[test]
fn custom_system_descriptor() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sys.json");
    std::fs::write(&path, r#"{"name":"engel-copy","phi0":1,"template":"minus-one","table":[]}"#).unwrap();
    let sys = path.to_str().unwrap();
    let (code, out, _) = run(&["expand", "3/7", "--system", sys, "-n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "digits"), "3 4 8");
    let (code, out, _) = run(&["systems", "--system", sys]);
    assert_eq!(code, 0);
    assert!(out.contains("engel-copy"));

    std::fs::write(&path, r#"{"name":"x","phi0":1,"template":"identity","colour":"red"}"#).unwrap();
    assert_eq!(run(&["systems", "--system", sys]).0, 1);
    assert_eq!(run(&["expand", "1/2", "--system", "nosuch"]).0, 1);
}

#[test]
fn systems_json_lists_builtins() {
    let (code, out, _) = run(&["systems", "--format", "json"]);
    assert_eq!(code, 0);
    let list: Vec<Value> = serde_json::from_str(&out).unwrap();
    let names: Vec<&str> = list.iter().map(|d| d["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["luroth", "engel", "sylvester", "pierce", "alt-luroth"]);
}

#[test]
fn classify_and_is_member() {
    let (code, out, _) = run(&["classify", "1/2"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "kind"), "endpoint");
    assert_eq!(field(&out, "supremum-of"), "(3)");
    assert_eq!(field(&out, "infimum-of"), "(2)");

    let (code, out, _) = run(&["classify", "2/5"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "kind"), "interior");

    let (code, out, _) = run(&["classify", "1/2", "--system", "alt-luroth", "--rep", "pminus"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "odd-supremum-of"), "(3)");
    assert_eq!(field(&out, "even-infimum-of"), "(2,2)");

    let (code, out, _) = run(&["is-member", "2/5", "--system", "alt-luroth"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "is-member"), "no");

    let (code, out, _) = run(&["is-member", "1/3", "--system", "pierce"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "is-member"), "yes");
}

#[test]
fn undetermined_exits_four() {
    let (code, out, _) = run(&["is-member", "3/1001", "--system", "alt-luroth", "--depth", "1"]);
    assert_eq!(code, 4, "{out}");
}

#[test]
fn exit_codes_for_bad_input() {
    assert_eq!(run(&["expand", "3/2"]).0, 2);
    assert_eq!(run(&["expand", "0"]).0, 2);
    assert_eq!(run(&["expand", "-1/2"]).0, 2);
    assert_eq!(run(&["expand", "1/0"]).0, 1);
    assert_eq!(run(&["expand", "half"]).0, 1);
    assert_eq!(run(&["frobnicate"]).0, 1);
    assert_eq!(run(&["cylinder"]).0, 1);
    assert_eq!(run(&["--rep", "q", "cylinder", "3"]).0, 1);
    assert_eq!(run(&["--help"]).0, 0);
    assert_eq!(bin(&["--version"]).0, 0);
}

#[test]
fn decimals_need_as_exact() {
    let (code, _, err) = run(&["expand", "0.25"]);
    assert_eq!(code, 1);
    assert!(err.contains("--as-exact") && err.contains("1/4"), "{err}");
    let (code, out, _) = run(&["expand", "0.25", "--as-exact", "-n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "x"), "1/4");
    assert_eq!(field(&out, "digits"), "5 2");
    let (code, out, _) = run(&["expand", "2.5e-1", "--as-exact", "-n", "1"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "x"), "1/4");
}

/// Nearest decimal with `prec` digits after the point, ties to even, for x in (0, 1].
fn decimal_oracle(num: u64, den: u64, prec: usize) -> String {
    let scale = BigUint::from(10u32).pow(prec as u32);
    let scaled = BigUint::from(num) * &scale;
    let (mut q, r) = scaled.div_rem(&BigUint::from(den));
    let twice = r * 2u32;
    let den = BigUint::from(den);
    if twice > den || (twice == den && q.is_odd()) {
        q += 1u32;
    }
    let (int, frac) = q.div_rem(&scale);
    if prec == 0 {
        int.to_string()
    } else {
        format!("{int}.{:0>prec$}", frac.to_string())
    }
}

fn parse_fraction(s: &str) -> (BigInt, BigInt) {
    match s.split_once('/') {
        Some((a, b)) => (a.parse().unwrap(), b.parse().unwrap()),
        None => (s.parse().unwrap(), 1.into()),
    }
}

fn le(a: &(BigInt, BigInt), b: &(BigInt, BigInt)) -> bool {
    &a.0 * &b.1 <= &b.0 * &a.1
}

fn lt(a: &(BigInt, BigInt), b: &(BigInt, BigInt)) -> bool {
    &a.0 * &b.1 < &b.0 * &a.1
}

fn point() -> impl Strategy<Value = (u64, u64)> {
    (2u64..2000).prop_flat_map(|den| (1..=den, Just(den)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decimal_output_is_correctly_rounded((num, den) in point(), prec in 0usize..30) {
        let x = format!("{num}/{den}");
        let precision = prec.to_string();
        let (code, out, _) = run(&["cylinder", "2", "--format", "decimal", "--precision", &precision]);
        prop_assert_eq!(code, 0);
        prop_assert_eq!(field(&out, "inf"), decimal_oracle(1, 2, prec));
        let (code, out, _) = run(&["expand", &x, "-n", "1", "--format", "decimal", "--precision", &precision]);
        prop_assert_eq!(code, 0);
        prop_assert_eq!(field(&out, "x"), decimal_oracle(num, den, prec));
    }

    #[test]
    fn expanded_digits_enclose_the_input(
        (num, den) in point(),
        system in prop::sample::select(vec!["luroth", "engel", "sylvester", "pierce", "alt-luroth"]),
        pminus in any::<bool>(),
        n in 1usize..8,
    ) {
        let x = format!("{num}/{den}");
        let n = n.to_string();
        let rep = if pminus { "pminus" } else { "p" };
        let (code, out, _) = run(&["expand", &x, "--system", system, "--rep", rep, "-n", &n]);
        prop_assert_eq!(code, 0);
        let xv = parse_fraction(&x);
        if find(&out, "digits").is_none() {
            let w = parse_fraction(field(&out, "witness-sup"));
            prop_assert!(le(&w, &xv) && le(&xv, &w));
            return Ok(());
        }
        let digits: Vec<&str> = field(&out, "digits").split(' ').collect();
        let mut args = vec!["cylinder"];
        args.extend(&digits);
        args.extend(["--system", system, "--rep", rep]);
        let (code, cyl, _) = run(&args);
        prop_assert_eq!(code, 0);
        let (inf, sup) = (parse_fraction(field(&cyl, "inf")), parse_fraction(field(&cyl, "sup")));
        prop_assert!(lt(&inf, &xv) && le(&xv, &sup), "{} not in ({:?}, {:?}]", x, inf, sup);
        let diam = parse_fraction(field(&cyl, "diam"));
        let width = (&sup.0 * &inf.1 - &inf.0 * &sup.1, &sup.1 * &inf.1);
        prop_assert_eq!(&diam.0 * &width.1, &width.0 * &diam.1);
        prop_assert!(!diam.0.is_zero() && diam.0.is_positive());
    }
}
