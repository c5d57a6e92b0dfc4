//! Decision procedure: does an `(n-1)`-connected `(2n+1)`-manifold with
//! torsion-free homology admit a free circle action, up to almost
//! diffeomorphism, for `n ≡ 5, 7 (mod 8)`?
//!
//! The manifold is given by its almost-diffeomorphism invariants: `n`, the
//! Betti number `b_n`, and (for `n ≡ 7`) the divisibility `l` of
//! `p_{(n+1)/4}`. The normal forms are `#_{b_n}(S^n x S^{n+1})` when `l = 0`
//! and `#_{b_n - 1}(S^n x S^{n+1}) # X_l` otherwise.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bernoulli::im_j_order;
use crate::exactnum::{divides, factorial, BigInt};
use crate::genus::{a_k, kervaire_unit};
use crate::gradedtop::{GradedGroup, OrbitFamily};
use crate::par::{self, ExecMode};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldInvariants {
    pub n: u64,
    pub b_n: u64,
    #[serde(with = "crate::exactnum::decimal")]
    pub l: BigInt,
}

impl ManifoldInvariants {
    pub fn new(n: u64, b_n: u64, l: impl Into<BigInt>) -> Self {
        ManifoldInvariants {
            n,
            b_n,
            l: l.into(),
        }
    }
}

/// Divisors attached to `n ≡ 7 (mod 8)`, with `k = (n+1)/4`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorReport {
    pub n: u64,
    pub k: u64,
    pub a_k: u32,
    /// Divisibility every realizable `l` has: `a_k (2k-1)!`, or 12 when `n = 7`.
    #[serde(with = "crate::exactnum::decimal")]
    pub kervaire: BigInt,
    /// `den(B_k / 4k)`.
    #[serde(with = "crate::exactnum::decimal")]
    pub j_index: BigInt,
    /// `((n-1)/2)! · den(B_k / (n+1))`.
    #[serde(with = "crate::exactnum::decimal")]
    pub required: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifierError {
    #[error("divisor defined only for n ≡ 7 (mod 8), got n = {0}")]
    DivisorDomain(u64),
    #[error("invalid invariants: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("no free circle action: {0}")]
    NotAdmitting(ReasonCode),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|v| v.message.as_str())
        .collect::<Vec<_>>()
        .join("; ")
}

pub fn required_divisor(n: u64) -> Result<DivisorReport, ClassifierError> {
    if n % 8 != 7 {
        return Err(ClassifierError::DivisorDomain(n));
    }
    let k = (n + 1) / 4;
    let kervaire = if n == 7 {
        BigInt::from(12)
    } else {
        kervaire_unit(k).expect("k >= 2")
    };
    let j_index = im_j_order(k).expect("k >= 2");
    let required = factorial((n - 1) / 2) * &j_index;
    Ok(DivisorReport {
        n,
        k,
        a_k: a_k(k),
        kervaire,
        j_index,
        required,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationCode {
    DimensionOutOfScope,
    NegativeL,
    LNotDivisible,
    SphereWithNonzeroL,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub message: String,
}

impl Violation {
    fn new(code: ViolationCode, message: impl Into<String>) -> Self {
        Violation {
            code,
            message: message.into(),
        }
    }
}

/// Checks that the invariants describe an actual manifold of the classified kind.
pub fn validate(inv: &ManifoldInvariants) -> Result<(), Vec<Violation>> {
    let n = inv.n;
    if n < 5 || !matches!(n % 8, 5 | 7) {
        return Err(vec![Violation::new(
            ViolationCode::DimensionOutOfScope,
            format!("n = {n} is outside scope: need n ≡ 5 or 7 (mod 8)"),
        )]);
    }
    if n % 8 == 5 {
        // p_{(n+1)/4} does not exist; l is ignored
        return Ok(());
    }
    let mut violations = Vec::new();
    if inv.l.is_negative() {
        violations.push(Violation::new(
            ViolationCode::NegativeL,
            "l must be nonnegative",
        ));
    } else {
        let kervaire = required_divisor(n).expect("n ≡ 7 (mod 8)").kervaire;
        if !divides(&kervaire, &inv.l) {
            violations.push(Violation::new(
                ViolationCode::LNotDivisible,
                format!("l not divisible by {kervaire}"),
            ));
        }
    }
    if inv.b_n == 0 && !inv.l.is_zero() {
        violations.push(Violation::new(
            ViolationCode::SphereWithNonzeroL,
            "b_n = 0 forces l = 0 (homotopy sphere)",
        ));
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ReasonCode {
    #[serde(rename = "N5_ALWAYS")]
    N5Always,
    EvenLZero,
    OddDivisible,
    EvenLNonzero,
    OddNotDivisible,
    Unrealizable,
}

impl ReasonCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ReasonCode::N5Always => "N5_ALWAYS",
            ReasonCode::EvenLZero => "EVEN_L_ZERO",
            ReasonCode::OddDivisible => "ODD_DIVISIBLE",
            ReasonCode::EvenLNonzero => "EVEN_L_NONZERO",
            ReasonCode::OddNotDivisible => "ODD_NOT_DIVISIBLE",
            ReasonCode::Unrealizable => "UNREALIZABLE",
        }
    }

    pub fn admits(self) -> bool {
        matches!(
            self,
            ReasonCode::N5Always | ReasonCode::EvenLZero | ReasonCode::OddDivisible
        )
    }
}

impl fmt::Display for ReasonCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Normal form `#_copies(S^n x S^{n+1}) [# X_l]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(rename = "copies_of_SnxSn1")]
    pub copies: u64,
    #[serde(rename = "X_l_summand", with = "crate::exactnum::decimal::option")]
    pub x_l: Option<BigInt>,
    pub expression: String,
}

/// Orbit space of the action, described as a connected sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRecipe {
    pub n: u64,
    pub family: OrbitFamily,
    pub r: u64,
    /// Divisibility of `p_{(n+1)/4}` on the `CP^{(n-1)/2} x S^{n+1}` summand.
    #[serde(with = "crate::exactnum::decimal::option")]
    pub d: Option<BigInt>,
    pub expression: String,
    pub euler_class: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub admits: bool,
    pub reason: ReasonCode,
    pub divisors: Option<DivisorReport>,
    pub witness: Option<Witness>,
    pub orbit: Option<OrbitRecipe>,
    #[serde(default)]
    pub notes: Vec<String>,
}

fn handles(copies: u64, a: u64, b: u64) -> Option<String> {
    match copies {
        0 => None,
        1 => Some(format!("S^{a} x S^{b}")),
        c => Some(format!("#{c}(S^{a} x S^{b})")),
    }
}

fn witness(n: u64, b_n: u64, l: &BigInt) -> Witness {
    let (copies, x_l) = if l.is_zero() {
        (b_n, None)
    } else {
        (b_n - 1, Some(l.clone()))
    };
    let mut summands: Vec<String> = handles(copies, n, n + 1).into_iter().collect();
    if let Some(l) = &x_l {
        summands.push(format!("X_{l}"));
    }
    let expression = if summands.is_empty() {
        format!("S^{}", 2 * n + 1)
    } else {
        summands.join(" # ")
    };
    Witness {
        copies,
        x_l,
        expression,
    }
}

fn recipe(n: u64, b_n: u64, l: Option<&BigInt>) -> OrbitRecipe {
    let (family, r) = if b_n.is_multiple_of(2) {
        (OrbitFamily::Cpn, b_n / 2)
    } else {
        (OrbitFamily::CpHalfTimesSphere, (b_n - 1) / 2)
    };
    let core = match family {
        OrbitFamily::Cpn => format!("CP^{n}"),
        OrbitFamily::CpHalfTimesSphere => format!("(CP^{} x S^{})", (n - 1) / 2, n + 1),
    };
    let mut expression = match handles(r, n, n) {
        Some(h) => format!("{h} # {core}"),
        None => core,
    };
    let d = match family {
        OrbitFamily::CpHalfTimesSphere => l.cloned(),
        OrbitFamily::Cpn => None,
    };
    if let Some(d) = &d {
        expression.push_str(&format!(" with p_{} divisibility {d}", (n + 1) / 4));
    }
    OrbitRecipe {
        n,
        family,
        r,
        d,
        expression,
        euler_class: "primitive generator of H²".into(),
    }
}

/// Applies the decision rule.
///
/// `n ≡ 5`: always admits. `n ≡ 7`: `b_n` even admits iff `l = 0`; `b_n`
/// odd admits iff the required divisor divides `l` (so `l = 0` admits).
pub fn classify(inv: &ManifoldInvariants) -> Result<ClassificationResult, ClassifierError> {
    validate(inv).map_err(ClassifierError::Invalid)?;
    let ManifoldInvariants { n, b_n, .. } = *inv;
    let mut notes = Vec::new();
    if b_n == 0 {
        notes.push(format!(
            "b_n = 0: homotopy sphere; the Hopf action on S^{} applies",
            2 * n + 1
        ));
    }

    if n % 8 == 5 {
        if !inv.l.is_zero() {
            notes.push("l ignored: p_{(n+1)/4} is undefined for n ≡ 5 (mod 8)".into());
        }
        return Ok(ClassificationResult {
            admits: true,
            reason: ReasonCode::N5Always,
            divisors: None,
            witness: Some(witness(n, b_n, &BigInt::zero())),
            orbit: Some(recipe(n, b_n, None)),
            notes,
        });
    }

    let divisors = required_divisor(n)?;
    let l = &inv.l;
    let reason = match (b_n % 2 == 0, l.is_zero()) {
        (true, true) => ReasonCode::EvenLZero,
        (true, false) => ReasonCode::EvenLNonzero,
        (false, _) if divides(&divisors.required, l) => ReasonCode::OddDivisible,
        (false, _) => ReasonCode::OddNotDivisible,
    };
    let admits = reason.admits();
    Ok(ClassificationResult {
        admits,
        reason,
        witness: Some(witness(n, b_n, l)),
        orbit: admits.then(|| recipe(n, b_n, Some(l))),
        divisors: Some(divisors),
        notes,
    })
}

/// Orbit recipe for an admitting manifold.
pub fn orbit_recipe(inv: &ManifoldInvariants) -> Result<OrbitRecipe, ClassifierError> {
    let result = classify(inv)?;
    result
        .orbit
        .ok_or(ClassifierError::NotAdmitting(result.reason))
}

pub fn classify_batch(
    invs: &[ManifoldInvariants],
    mode: ExecMode,
) -> Vec<Result<ClassificationResult, ClassifierError>> {
    par::map(mode, invs, classify)
}

/// `χ(CP^m)`, summed from its Betti numbers.
pub fn euler_char_cp(m: u32) -> u64 {
    GradedGroup::complex_projective(m).euler_characteristic() as u64
}

/// The obstruction `χ(CP^{2k-1}) · θ` in `L_{8k-2}(Z) = Z/2` vanishes iff
/// the Euler characteristic is even.
pub fn surgery_obstruction_vanishes(k: u32) -> bool {
    k >= 1 && euler_char_cp(2 * k - 1).is_multiple_of(2)
}
