//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on domain errors (a JSON error object goes to
//! stderr), 2 on usage errors.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::json;

use crate::bernoulli::{im_j_order, table_rows};
use crate::classifier::{
    classify, orbit_recipe, required_divisor, ClassifierError, ManifoldInvariants, ReasonCode,
};
use crate::exactnum::{parse_int, BigInt};
use crate::genus::multiplicative_sequence;
use crate::gradedtop::{gysin_total_space, standard_orbit_model, OrbitFamily};
use crate::par::ExecMode;
use crate::selftest;

/// Largest `k` accepted by `ahat`; the e-basis rewrite grows quickly beyond it.
pub const MAX_AHAT_DEGREE: u64 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "freecircle",
    version,
    about = "Free circle actions on highly connected (2n+1)-manifolds"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

fn big(s: &str) -> Result<BigInt, String> {
    parse_int(s).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether the manifold with invariants (n, b_n, l) admits a free circle action.
    Classify {
        #[arg(long, value_parser = big, allow_hyphen_values = true)]
        n: BigInt,
        /// n-th Betti number.
        #[arg(long, value_parser = big, allow_hyphen_values = true)]
        bn: BigInt,
        /// Divisibility of p_{(n+1)/4}; defaults to 0.
        #[arg(long, value_parser = big, allow_hyphen_values = true)]
        l: Option<BigInt>,
    },
    /// Bernoulli table rows (k, B_k, den(B_k), den(B_k/4k)).
    Bernoulli {
        #[arg(long, value_parser = big, allow_hyphen_values = true)]
        max: BigInt,
    },
    /// den(B_k/4k).
    Imj {
        #[arg(long, value_parser = big, allow_hyphen_values = true)]
        k: BigInt,
    },
    /// The A-hat polynomial in Pontrjagin classes.
    Ahat {
        #[arg(long, value_parser = big, allow_hyphen_values = true)]
        k: BigInt,
    },
    /// Kervaire and required divisors for n ≡ 7 (mod 8).
    Divisor {
        #[arg(long, value_parser = big, allow_hyphen_values = true)]
        n: BigInt,
    },
    /// Cohomology of the circle bundle over a standard orbit model.
    Gysin {
        #[arg(long, value_parser = big, allow_hyphen_values = true)]
        n: BigInt,
        /// CPN or CPHALF.
        #[arg(long)]
        family: String,
        #[arg(long, value_parser = big, allow_hyphen_values = true)]
        r: BigInt,
    },
    /// Orbit space of an admitting manifold.
    Recipe {
        #[arg(long, value_parser = big, allow_hyphen_values = true)]
        n: BigInt,
        #[arg(long, value_parser = big, allow_hyphen_values = true)]
        bn: BigInt,
        #[arg(long, value_parser = big, allow_hyphen_values = true)]
        l: BigInt,
    },
    /// Run the built-in property suites.
    Selftest,
}

/// Domain failure, rendered as a JSON object on stderr.
struct Failure {
    body: serde_json::Value,
}

impl Failure {
    fn domain(msg: impl Into<String>) -> Self {
        Failure {
            body: json!({ "error": msg.into(), "kind": "domain" }),
        }
    }
}

impl From<ClassifierError> for Failure {
    fn from(e: ClassifierError) -> Self {
        let body = match &e {
            ClassifierError::Invalid(violations) => json!({
                "error": e.to_string(),
                "kind": "invalid_invariants",
                "reason": ReasonCode::Unrealizable,
                "violations": violations,
            }),
            ClassifierError::NotAdmitting(reason) => json!({
                "error": e.to_string(),
                "kind": "not_admitting",
                "reason": reason,
            }),
            ClassifierError::DivisorDomain(_) => {
                json!({ "error": e.to_string(), "kind": "domain" })
            }
        };
        Failure { body }
    }
}

fn small<T: TryFrom<u64>>(name: &str, v: &BigInt) -> Result<T, Failure> {
    v.to_u64().and_then(|x| T::try_from(x).ok()).ok_or_else(|| {
        Failure::domain(format!(
            "--{name} must be a nonnegative integer in range, got {v}"
        ))
    })
}

fn positive(name: &str, v: &BigInt) -> Result<u64, Failure> {
    match small::<u64>(name, v)? {
        0 => Err(Failure::domain(format!("--{name} must be at least 1"))),
        x => Ok(x),
    }
}

fn emit<T: Serialize>(
    out: &mut dyn Write,
    format: Format,
    value: &T,
    text: impl FnOnce() -> String,
) -> std::io::Result<()> {
    match format {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string(value).expect("serializable")
        ),
        Format::Text => {
            let t = text();
            write!(out, "{t}")?;
            if !t.ends_with('\n') {
                writeln!(out)?;
            }
            Ok(())
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let format = cli.format;
    let io = |e: std::io::Error| Failure::domain(format!("write failed: {e}"));
    match cli.command {
        Command::Classify { n, bn, l } => {
            let inv = ManifoldInvariants {
                n: small("n", &n)?,
                b_n: small("bn", &bn)?,
                l: l.unwrap_or_default(),
            };
            let result = classify(&inv)?;
            emit(out, format, &result, || {
                let mut s = format!(
                    "admits: {}\nreason: {}\n",
                    if result.admits { "yes" } else { "no" },
                    result.reason
                );
                if let Some(d) = &result.divisors {
                    s += &format!(
                        "required divisor: {} (kervaire {}, J-index {})\n",
                        d.required, d.kervaire, d.j_index
                    );
                }
                if let Some(w) = &result.witness {
                    s += &format!("witness: {}\n", w.expression);
                }
                if let Some(o) = &result.orbit {
                    s += &format!(
                        "orbit space: {} (Euler class: {})\n",
                        o.expression, o.euler_class
                    );
                }
                for note in &result.notes {
                    s += &format!("note: {note}\n");
                }
                s
            })
            .map_err(io)?;
        }
        Command::Bernoulli { max } => {
            let max = positive("max", &max)?;
            let rows = table_rows(max, ExecMode::Parallel);
            match format {
                Format::Json => emit(out, format, &rows, String::new).map_err(io)?,
                Format::Text => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    for row in &rows {
                        w.serialize(row)
                            .map_err(|e| Failure::domain(e.to_string()))?;
                    }
                    let bytes = w.into_inner().map_err(|e| Failure::domain(e.to_string()))?;
                    out.write_all(&bytes).map_err(io)?;
                }
            }
        }
        Command::Imj { k } => {
            let k = positive("k", &k)?;
            let value = im_j_order(k).map_err(|e| Failure::domain(e.to_string()))?;
            emit(
                out,
                format,
                &json!({ "k": k, "im_j_order": value.to_string() }),
                || value.to_string(),
            )
            .map_err(io)?;
        }
        Command::Ahat { k } => {
            let k = positive("k", &k)?;
            if k > MAX_AHAT_DEGREE {
                return Err(Failure::domain(format!(
                    "--k must be at most {MAX_AHAT_DEGREE}"
                )));
            }
            let poly =
                multiplicative_sequence(k as u32).map_err(|e| Failure::domain(e.to_string()))?;
            emit(out, format, &poly, || format!("A_{k} = {poly}")).map_err(io)?;
        }
        Command::Divisor { n } => {
            let report = required_divisor(small("n", &n)?)?;
            emit(out, format, &report, || {
                format!(
                    "n = {}, k = {}, a_k = {}\nkervaire divisor: {}\nJ-index den(B_k/4k): {}\nrequired divisor: {}\n",
                    report.n, report.k, report.a_k, report.kervaire, report.j_index, report.required
                )
            })
            .map_err(io)?;
        }
        Command::Gysin { n, family, r } => {
            let family: OrbitFamily = family
                .parse()
                .map_err(|e: crate::gradedtop::GradedError| Failure::domain(e.to_string()))?;
            let model = standard_orbit_model(small("n", &n)?, family, small("r", &r)?)
                .map_err(|e| Failure::domain(e.to_string()))?;
            let h = gysin_total_space(&model).map_err(|e| Failure::domain(e.to_string()))?;
            emit(out, format, &h, || h.to_string()).map_err(io)?;
        }
        Command::Recipe { n, bn, l } => {
            let inv = ManifoldInvariants {
                n: small("n", &n)?,
                b_n: small("bn", &bn)?,
                l,
            };
            let recipe = orbit_recipe(&inv)?;
            emit(out, format, &recipe, || {
                format!(
                    "{}\nEuler class: {}\n",
                    recipe.expression, recipe.euler_class
                )
            })
            .map_err(io)?;
        }
        Command::Selftest => {
            let report = selftest::run(ExecMode::Parallel);
            emit(out, format, &report, || {
                let mut s = String::new();
                for c in &report.checks {
                    let mark = if c.passed { "PASS" } else { "FAIL" };
                    s += &format!("[{mark}] {}: {}", c.module, c.name);
                    if let Some(d) = &c.detail {
                        s += &format!(" ({d})");
                    }
                    s.push('\n');
                }
                s += &format!(
                    "selftest: {} passed, {} failed\n",
                    report.passed, report.failed
                );
                s
            })
            .map_err(io)?;
            return Ok(if report.all_passed() { 0 } else { 1 });
        }
    }
    Ok(0)
}

/// Parses `args` (including the program name) and runs one subcommand.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "{}", f.body);
            1
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(
        args,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("freecircle").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn imj_text() {
        assert_eq!(
            call(&["imj", "--k", "2"]),
            (0, "240\n".into(), String::new())
        );
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(call(&["imj"]).0, 2);
        assert_eq!(call(&["imj", "--k", "2", "--bogus"]).0, 2);
        assert_eq!(call(&["imj", "-k", "2"]).0, 2);
        assert_eq!(call(&["imj", "--k", "two"]).0, 2);
        assert_eq!(call(&[]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn domain_errors_exit_1() {
        let (code, out, err) = call(&["classify", "--n", "8", "--bn", "1"]);
        assert_eq!(code, 1);
        assert!(out.is_empty());
        let v: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["reason"], "UNREALIZABLE");
        assert_eq!(v["violations"][0]["code"], "DIMENSION_OUT_OF_SCOPE");

        assert_eq!(call(&["imj", "--k", "0"]).0, 1);
        assert_eq!(call(&["classify", "--n", "-7", "--bn", "1"]).0, 1);
        assert_eq!(call(&["divisor", "--n", "13"]).0, 1);
        assert_eq!(call(&["ahat", "--k", "40"]).0, 1);
        assert_eq!(
            call(&["gysin", "--n", "7", "--family", "rp", "--r", "1"]).0,
            1
        );
        let (code, _, err) = call(&["recipe", "--n", "15", "--bn", "3", "--l", "5040"]);
        assert_eq!(code, 1);
        assert!(err.contains("ODD_NOT_DIVISIBLE"));
    }

    #[test]
    fn large_l_is_accepted() {
        let l = (BigInt::from(2_615_348_736_000u64) * BigInt::from(u64::MAX)).to_string();
        let (code, out, _) = call(&[
            "classify", "--n", "23", "--bn", "1", "--l", &l, "--format", "json",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains(r#""admits":true"#));
    }

    #[test]
    fn text_outputs() {
        let (code, out, _) = call(&["classify", "--n", "15", "--bn", "3", "--l", "2419200"]);
        assert_eq!(code, 0);
        assert!(
            out.starts_with("admits: yes\nreason: ODD_DIVISIBLE\n"),
            "{out}"
        );
        let (_, out, _) = call(&["bernoulli", "--max", "2"]);
        assert_eq!(out, "k,b_k,den_b_k,im_j_order\n1,1/6,6,24\n2,1/30,30,240\n");
        let (_, out, _) = call(&["ahat", "--k", "2"]);
        assert_eq!(out, "A_2 = -1/1440 p2 + 7/5760 p1^2\n");
        let (_, out, _) = call(&["gysin", "--n", "5", "--family", "cpn", "--r", "0"]);
        assert!(
            out.starts_with("H^0 = Z\nH^1 = 0\n") && out.ends_with("H^11 = Z\n"),
            "{out}"
        );
        let (_, out, _) = call(&["recipe", "--n", "7", "--bn", "2", "--l", "0"]);
        assert_eq!(
            out,
            "S^7 x S^7 # CP^7\nEuler class: primitive generator of H²\n"
        );
    }
}
