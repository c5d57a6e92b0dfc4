//! Runtime property suites behind the `selftest` subcommand.
//!
//! Each check is independent and deterministic (seeded RNG), so the suite
//! can be fanned out over the rayon pool.

use num_integer::Integer;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::bernoulli::{
    bernoulli_ms, has_expected_parity, im_j_order, odd_half_denominator, vsc_denominator,
};
use crate::classifier::{
    classify, required_divisor, surgery_obstruction_vanishes, ManifoldInvariants,
};
use crate::exactnum::{den, divides, factorial, is_integral, reduce, BigInt, Rational};
use crate::genus::{
    alpha_closed_form, alpha_newton, integrality_bound, multiplicative_sequence,
    search_least_divisor, twisted_pairing, Partition, PowerSeries,
};
use crate::gradedtop::{
    check_highly_connected, divisibility_transfer, gysin_total_space, smith_normal_form,
    standard_orbit_model, IntMatrix, OrbitFamily,
};
use crate::par::{self, ExecMode};

type CheckFn = fn() -> Result<(), String>;

struct Check {
    module: &'static str,
    name: &'static str,
    run: CheckFn,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub module: String,
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckOutcome>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn random_fraction(r: &mut StdRng) -> Rational {
    reduce(
        r.random_range(-1000i64..=1000).into(),
        r.random_range(1i64..=1000).into(),
    )
    .expect("nonzero denominator")
}

fn exact_den_of_sum() -> Result<(), String> {
    let mut r = rng(1);
    for _ in 0..500 {
        let (a, b) = (random_fraction(&mut r), random_fraction(&mut r));
        let s = &a + &b;
        ensure(divides(&den(&s), &(den(&a) * den(&b))), || {
            format!("den({a} + {b})")
        })?;
        ensure(&s - &b == a, || format!("({a} + {b}) - {b}"))?;
    }
    Ok(())
}

fn exact_reduce_idempotent() -> Result<(), String> {
    let mut r = rng(2);
    for _ in 0..500 {
        let x = random_fraction(&mut r);
        let y = reduce(x.numer().clone(), x.denom().clone()).map_err(|e| e.to_string())?;
        ensure(x.numer() == y.numer() && x.denom() == y.denom(), || {
            format!("reduce({x})")
        })?;
    }
    Ok(())
}

fn exact_factorial() -> Result<(), String> {
    (1..=100u64).try_for_each(|m| ensure(factorial(m) == factorial(m - 1) * m, || format!("{m}!")))
}

fn bern_vsc() -> Result<(), String> {
    for k in 1..=30 {
        let b = bernoulli_ms(k).map_err(|e| e.to_string())?;
        ensure(
            den(&b) == vsc_denominator(k).map_err(|e| e.to_string())?,
            || format!("den(B_{k})"),
        )?;
    }
    Ok(())
}

fn bern_parity() -> Result<(), String> {
    for k in 1..=30 {
        let b = bernoulli_ms(k).map_err(|e| e.to_string())?;
        ensure(has_expected_parity(&b), || format!("B_{k} = {b}"))?;
    }
    Ok(())
}

fn bern_half() -> Result<(), String> {
    for k in (1..=29).step_by(2) {
        let half = odd_half_denominator(k).map_err(|e| e.to_string())?;
        ensure(
            half * 2 == im_j_order(k).map_err(|e| e.to_string())?,
            || format!("k = {k}"),
        )?;
    }
    Ok(())
}

fn bern_24() -> Result<(), String> {
    for k in 1..=30 {
        let j = im_j_order(k).map_err(|e| e.to_string())?;
        ensure(j.is_multiple_of(&BigInt::from(24)), || {
            format!("den(B_{k}/{}) = {j}", 4 * k)
        })?;
    }
    Ok(())
}

fn genus_alpha() -> Result<(), String> {
    for k in 1..=8u64 {
        let a = alpha_newton(k).map_err(|e| e.to_string())?;
        let b = multiplicative_sequence(k as u32)
            .map_err(|e| e.to_string())?
            .coefficient(&Partition::single(k as u32));
        let c = alpha_closed_form(k).map_err(|e| e.to_string())?;
        ensure(a == b && b == c, || format!("k = {k}: {a} / {b} / {c}"))?;
    }
    Ok(())
}

fn genus_bound() -> Result<(), String> {
    for k in 1..=6 {
        let found =
            search_least_divisor(k, 1_000_000, ExecMode::Sequential).map_err(|e| e.to_string())?;
        let bound = integrality_bound(k).map_err(|e| e.to_string())?;
        ensure(found.as_ref() == Some(&bound), || {
            format!("k = {k}: {found:?} vs {bound}")
        })?;
    }
    Ok(())
}

fn genus_pairing() -> Result<(), String> {
    for k in 1..=6 {
        let bound = integrality_bound(k).map_err(|e| e.to_string())?;
        for m in -20i64..=20 {
            let v = twisted_pairing(k, &(&bound * m)).map_err(|e| e.to_string())?;
            ensure(is_integral(&v), || format!("k = {k}, m = {m}"))?;
        }
    }
    Ok(())
}

fn genus_values(xs: &[Rational], order: usize) -> Result<PowerSeries, String> {
    let mut e = vec![Rational::one()];
    for x in xs {
        let mut next = e.clone();
        next.push(Rational::zero());
        for i in 1..next.len() {
            next[i] += &e[i - 1] * x;
        }
        e = next;
    }
    let mut coeffs = vec![Rational::one()];
    for j in 1..=order {
        coeffs.push(
            multiplicative_sequence(j as u32)
                .map_err(|e| e.to_string())?
                .evaluate(&e[1..]),
        );
    }
    Ok(PowerSeries::from_coeffs(coeffs))
}

fn genus_multiplicative() -> Result<(), String> {
    let mut r = rng(3);
    for _ in 0..20 {
        let len = r.random_range(2..=5);
        let xs: Vec<Rational> = (0..len)
            .map(|_| Rational::from_integer(r.random_range(-5i64..=5).into()))
            .collect();
        let cut = r.random_range(1..len);
        let joint = genus_values(&xs, 4)?;
        let split = genus_values(&xs[..cut], 4)?.mul(&genus_values(&xs[cut..], 4)?);
        ensure(joint == split, || format!("roots {xs:?} split at {cut}"))?;
    }
    Ok(())
}

fn gcd_of(values: impl IntoIterator<Item = i64>) -> i64 {
    values.into_iter().fold(0, |g, v| g.gcd(&v))
}

/// `d_1 ... d_k = gcd of the k x k minors` for a 3x3 matrix.
pub(crate) fn minor_factors(m: &IntMatrix) -> Vec<i64> {
    let a = |i: usize, j: usize| m.get(i, j);
    let g1 = gcd_of(
        (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .map(|(i, j)| a(i, j)),
    );
    let mut minors2 = Vec::new();
    for (r1, r2) in [(0, 1), (0, 2), (1, 2)] {
        for (c1, c2) in [(0, 1), (0, 2), (1, 2)] {
            minors2.push(a(r1, c1) * a(r2, c2) - a(r1, c2) * a(r2, c1));
        }
    }
    let g2 = gcd_of(minors2);
    let det = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
        - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
        + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    let g3 = det.abs();
    let mut out = Vec::new();
    let mut prev = 1;
    for g in [g1, g2, g3] {
        if g == 0 {
            break;
        }
        out.push(g / prev);
        prev = g;
    }
    out
}

fn graded_snf() -> Result<(), String> {
    let mut r = rng(4);
    for _ in 0..200 {
        let rows: Vec<Vec<i64>> = (0..3)
            .map(|_| (0..3).map(|_| r.random_range(-5..=5)).collect())
            .collect();
        let m = IntMatrix::from_rows(rows).expect("square");
        let got: Vec<i64> = smith_normal_form(&m)
            .invariant_factors
            .iter()
            .map(|d| i64::try_from(d).unwrap_or(i64::MAX))
            .collect();
        let want = minor_factors(&m);
        ensure(got == want, || {
            format!("{:?}: {got:?} vs {want:?}", m.to_rows())
        })?;
    }
    Ok(())
}

fn standard_models() -> impl Iterator<Item = (u32, OrbitFamily, u64)> {
    [5u32, 7, 13, 15].into_iter().flat_map(|n| {
        [OrbitFamily::Cpn, OrbitFamily::CpHalfTimesSphere]
            .into_iter()
            .flat_map(move |f| (0..4u64).map(move |r| (n, f, r)))
    })
}

fn graded_euler_and_duality() -> Result<(), String> {
    for (n, f, r) in standard_models() {
        let model = standard_orbit_model(n, f, r).map_err(|e| e.to_string())?;
        let h = gysin_total_space(&model).map_err(|e| e.to_string())?;
        ensure(h.euler_characteristic() == 0, || {
            format!("χ({n}, {f}, {r})")
        })?;
        ensure(
            model.cohomology().has_poincare_ranks() && h.has_poincare_ranks(),
            || format!("duality ({n}, {f}, {r})"),
        )?;
    }
    Ok(())
}

fn graded_round_trip() -> Result<(), String> {
    for (n, f, r) in standard_models() {
        let model = standard_orbit_model(n, f, r).map_err(|e| e.to_string())?;
        let h = gysin_total_space(&model).map_err(|e| e.to_string())?;
        ensure(check_highly_connected(&h, n), || {
            format!("({n}, {f}, {r}) not highly connected")
        })?;
        let expected = match f {
            OrbitFamily::Cpn => 2 * r,
            OrbitFamily::CpHalfTimesSphere => 2 * r + 1,
        };
        ensure(h.rank(n as i64 + 1) == expected, || {
            format!("({n}, {f}, {r}) middle rank")
        })?;
    }
    Ok(())
}

fn decision_grid() -> Vec<ManifoldInvariants> {
    let mut grid = Vec::new();
    for n in [7u64, 15, 23] {
        let d = required_divisor(n).expect("n ≡ 7 (mod 8)");
        let ls = [
            BigInt::zero(),
            d.kervaire.clone(),
            d.required.clone(),
            &d.required * 3,
            &d.required + &d.kervaire,
        ];
        for b in 0..=6 {
            for l in &ls {
                grid.push(ManifoldInvariants::new(n, b, l.clone()));
            }
        }
    }
    grid
}

fn class_decision_rule() -> Result<(), String> {
    for inv in decision_grid() {
        let Ok(result) = classify(&inv) else { continue };
        let required = required_divisor(inv.n).expect("grid uses n ≡ 7").required;
        let predicate = (inv.b_n % 2 == 0 && inv.l.is_zero())
            || (inv.b_n % 2 == 1 && divides(&required, &inv.l));
        ensure(result.admits == predicate, || format!("{inv:?}"))?;
    }
    Ok(())
}

fn class_round_trip() -> Result<(), String> {
    for inv in decision_grid() {
        let Ok(result) = classify(&inv) else { continue };
        let Some(recipe) = result.orbit else { continue };
        let model = standard_orbit_model(inv.n as u32, recipe.family, recipe.r)
            .map_err(|e| e.to_string())?;
        let h = gysin_total_space(&model).map_err(|e| e.to_string())?;
        let d = recipe.d.unwrap_or_default();
        let l = divisibility_transfer(&model, &d).map_err(|e| e.to_string())?;
        ensure(h.rank(inv.n as i64 + 1) == inv.b_n && l == inv.l, || {
            format!("{inv:?}")
        })?;
    }
    Ok(())
}

fn class_kervaire() -> Result<(), String> {
    for n in (7..=47).step_by(8) {
        let d = required_divisor(n).map_err(|e| e.to_string())?;
        ensure(divides(&d.kervaire, &d.required), || format!("n = {n}"))?;
    }
    Ok(())
}

fn class_surgery() -> Result<(), String> {
    ensure((1..=100).all(surgery_obstruction_vanishes), || {
        "odd Euler characteristic".into()
    })
}

fn class_n5() -> Result<(), String> {
    for n in [5u64, 13, 21] {
        for b in 0..=6 {
            let base = classify(&ManifoldInvariants::new(n, b, 0)).map_err(|e| e.to_string())?;
            for l in [1i64, 12, -7, 1440] {
                let other =
                    classify(&ManifoldInvariants::new(n, b, l)).map_err(|e| e.to_string())?;
                ensure(
                    other.admits && other.reason == base.reason && other.orbit == base.orbit,
                    || format!("n = {n}, b = {b}, l = {l}"),
                )?;
            }
        }
    }
    Ok(())
}

const CHECKS: &[Check] = &[
    Check {
        module: "exactnum",
        name: "den of sum divides product of dens",
        run: exact_den_of_sum,
    },
    Check {
        module: "exactnum",
        name: "reduce is idempotent",
        run: exact_reduce_idempotent,
    },
    Check {
        module: "exactnum",
        name: "factorial recurrence",
        run: exact_factorial,
    },
    Check {
        module: "bernoulli",
        name: "recurrence matches von Staudt-Clausen",
        run: bern_vsc,
    },
    Check {
        module: "bernoulli",
        name: "odd numerator, even denominator, positive",
        run: bern_parity,
    },
    Check {
        module: "bernoulli",
        name: "odd-k half denominators",
        run: bern_half,
    },
    Check {
        module: "bernoulli",
        name: "24 divides den(B_k/4k)",
        run: bern_24,
    },
    Check {
        module: "genus",
        name: "alpha three-way agreement",
        run: genus_alpha,
    },
    Check {
        module: "genus",
        name: "integrality bound by search",
        run: genus_bound,
    },
    Check {
        module: "genus",
        name: "twisted pairing integral on bound multiples",
        run: genus_pairing,
    },
    Check {
        module: "genus",
        name: "multiplicativity under root splits",
        run: genus_multiplicative,
    },
    Check {
        module: "gradedtop",
        name: "SNF vs gcd of minors",
        run: graded_snf,
    },
    Check {
        module: "gradedtop",
        name: "Euler characteristic and duality",
        run: graded_euler_and_duality,
    },
    Check {
        module: "gradedtop",
        name: "total spaces highly connected",
        run: graded_round_trip,
    },
    Check {
        module: "classifier",
        name: "decision agrees with Betti/divisibility predicate",
        run: class_decision_rule,
    },
    Check {
        module: "classifier",
        name: "orbit recipes reproduce invariants",
        run: class_round_trip,
    },
    Check {
        module: "classifier",
        name: "kervaire divides required",
        run: class_kervaire,
    },
    Check {
        module: "classifier",
        name: "surgery obstruction parity",
        run: class_surgery,
    },
    Check {
        module: "classifier",
        name: "n ≡ 5 ignores l",
        run: class_n5,
    },
];

pub fn run(mode: ExecMode) -> SelftestReport {
    let checks = par::map(mode, CHECKS, |c| {
        let result = std::panic::catch_unwind(c.run).unwrap_or_else(|_| Err("panicked".into()));
        CheckOutcome {
            module: c.module.into(),
            name: c.name.into(),
            passed: result.is_ok(),
            detail: result.err(),
        }
    });
    let passed = checks.iter().filter(|c| c.passed).count();
    SelftestReport {
        passed,
        failed: checks.len() - passed,
        checks,
    }
}
