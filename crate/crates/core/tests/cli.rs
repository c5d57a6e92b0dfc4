use freecircle::classifier::{ClassificationResult, DivisorReport, OrbitRecipe};
use freecircle::cli::run_with;
use freecircle::genus::PontrjaginPolynomial;
use freecircle::gradedtop::{GradedGroup, OrbitFamily};
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with(
        std::iter::once("freecircle").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json_ok<T: serde::de::DeserializeOwned>(args: &[&str]) -> T {
    let mut argv = args.to_vec();
    argv.extend(["--format", "json"]);
    let (code, out, err) = call(&argv);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: {e}: {out}"))
}

#[test]
fn classify_odd_divisible() {
    let r: ClassificationResult =
        json_ok(&["classify", "--n", "15", "--bn", "3", "--l", "2419200"]);
    assert!(r.admits);
    assert_eq!(r.reason.as_str(), "ODD_DIVISIBLE");
    let w = r.witness.unwrap();
    assert_eq!(w.expression, "#2(S^15 x S^16) # X_2419200");
    let o = r.orbit.unwrap();
    assert_eq!(o.family, OrbitFamily::CpHalfTimesSphere);
    assert_eq!(o.r, 1);
}

#[test]
fn classify_json_uses_decimal_strings() {
    let (_, out, _) = call(&[
        "classify", "--n", "15", "--bn", "1", "--l", "2419200", "--format", "json",
    ]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["divisors"]["required"], "2419200");
    assert_eq!(v["divisors"]["kervaire"], "5040");
    assert_eq!(v["witness"]["X_l_summand"], "2419200");
    assert_eq!(v["witness"]["copies_of_SnxSn1"], 0);
}

#[test]
fn classify_rejections() {
    for (args, admits) in [
        (vec!["classify", "--n", "7", "--bn", "2", "--l", "0"], true),
        (
            vec!["classify", "--n", "7", "--bn", "2", "--l", "12"],
            false,
        ),
        (
            vec!["classify", "--n", "7", "--bn", "1", "--l", "1440"],
            true,
        ),
        (
            vec!["classify", "--n", "7", "--bn", "1", "--l", "720"],
            false,
        ),
        (vec!["classify", "--n", "13", "--bn", "4"], true),
    ] {
        let r: ClassificationResult = json_ok(&args);
        assert_eq!(r.admits, admits, "{args:?}");
        assert_eq!(r.orbit.is_some(), admits);
    }
}

#[test]
fn unrealizable_inputs() {
    let (code, out, err) = call(&["classify", "--n", "8", "--bn", "1"]);
    assert_eq!((code, out.as_str()), (1, ""));
    let v: Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(v["kind"], "invalid_invariants");

    let (code, _, err) = call(&["classify", "--n", "15", "--bn", "1", "--l", "7"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(v["violations"][0]["code"], "L_NOT_DIVISIBLE");
    assert_eq!(v["violations"][0]["message"], "l not divisible by 5040");
}

#[test]
fn imj_and_divisor() {
    assert_eq!(
        call(&["imj", "--k", "2"]),
        (0, "240\n".into(), String::new())
    );
    assert_eq!(call(&["imj", "--k", "6"]).1, "65520\n");
    let v: Value = json_ok(&["imj", "--k", "4"]);
    assert_eq!(v["im_j_order"], "480");

    let d: DivisorReport = json_ok(&["divisor", "--n", "23"]);
    assert_eq!(d.required.to_string(), "2615348736000");
    assert_eq!(d.j_index.to_string(), "65520");
    let d: DivisorReport = json_ok(&["divisor", "--n", "7"]);
    assert_eq!(
        (d.kervaire.to_string(), d.required.to_string()),
        ("12".into(), "1440".into())
    );
}

#[test]
fn bernoulli_table() {
    let rows: Vec<Value> = json_ok(&["bernoulli", "--max", "30"]);
    assert_eq!(rows.len(), 30);
    assert_eq!(
        rows[29]["b_k"],
        "1215233140483755572040304994079820246041491/56786730"
    );
    let (code, out, _) = call(&["bernoulli", "--max", "6"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 7);
    assert_eq!(out.lines().last(), Some("6,691/2730,2730,65520"));
}

#[test]
fn ahat_round_trips() {
    let p: PontrjaginPolynomial = json_ok(&["ahat", "--k", "3"]);
    assert_eq!(p.degree(), 3);
    assert_eq!(p.num_terms(), 3);
    let (_, out, _) = call(&["ahat", "--k", "3", "--format", "json"]);
    assert_eq!(serde_json::to_string(&p).unwrap(), out.trim());
    assert!(out.contains(r#""1,1,1":"-31/967680""#));
}

#[test]
fn gysin_outputs() {
    let h: GradedGroup = json_ok(&["gysin", "--n", "7", "--family", "CPHALF", "--r", "2"]);
    assert_eq!((h.rank(7), h.rank(8)), (5, 5));
    assert!(h.is_torsion_free());
    let h: GradedGroup = json_ok(&["gysin", "--n", "15", "--family", "CPN", "--r", "0"]);
    assert_eq!(h, GradedGroup::sphere(31));
    assert_eq!(
        call(&["gysin", "--n", "6", "--family", "CPN", "--r", "0"]).0,
        1
    );
}

#[test]
fn recipes() {
    let o: OrbitRecipe = json_ok(&["recipe", "--n", "15", "--bn", "3", "--l", "2419200"]);
    assert_eq!(
        o.expression,
        "S^15 x S^15 # (CP^7 x S^16) with p_4 divisibility 2419200"
    );
    let o: OrbitRecipe = json_ok(&["recipe", "--n", "7", "--bn", "4", "--l", "0"]);
    assert_eq!(o.expression, "#2(S^7 x S^7) # CP^7");
    assert_eq!(call(&["recipe", "--n", "7", "--bn", "4", "--l", "12"]).0, 1);
}

#[test]
fn selftest_passes() {
    let (code, out, _) = call(&["selftest"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.trim_end().ends_with("0 failed"));
    let v: Value = json_ok(&["selftest"]);
    assert_eq!(v["failed"], 0);
}

#[test]
fn usage_errors() {
    assert_eq!(call(&["classify", "--n", "7"]).0, 2);
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["imj", "--k", "2", "--format", "yaml"]).0, 2);
    let (code, out, _) = call(&["--version"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("freecircle "));
}
