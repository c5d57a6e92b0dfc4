//! The Â characteristic series, its multiplicative sequence, and the
//! integrality bound on the top Pontrjagin class of the orbit space.
//!
//! The characteristic series is taken in the variable `t = x^2` directly,
//!
//! ```text
//! (√t/2) / sinh(√t/2) = 1 + Σ_{m≥1} (-1)^m (2^{2m} - 2) B_m / (2^{2m} (2m)!) t^m,
//! ```
//!
//! so the formal roots `x_i` below already stand for squared Chern roots and
//! `p_i` is the `i`-th elementary symmetric polynomial in them.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::bernoulli::{bernoulli_ms, im_j_order, BernoulliError};
use crate::exactnum::{factorial, format_rational, is_integral, parse_rational, BigInt, Rational};
use crate::par::{self, ExecMode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenusError {
    #[error("index starts at 1")]
    IndexStartsAtOne,
    #[error("alpha cross-check failed at k = {0}")]
    AlphaCrossCheck(u64),
    #[error("invalid partition {0:?}")]
    InvalidPartition(String),
    #[error(transparent)]
    Bernoulli(#[from] BernoulliError),
}

fn int(x: impl Into<BigInt>) -> Rational {
    Rational::from_integer(x.into())
}

/// Power series in one variable, truncated after `t^truncation_order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
}

impl PowerSeries {
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a power series keeps at least its constant term"
        );
        PowerSeries { coeffs }
    }

    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); order + 1];
        coeffs[0] = Rational::one();
        PowerSeries { coeffs }
    }

    /// The Â characteristic series through `t^order`.
    pub fn ahat(order: usize) -> Result<Self, GenusError> {
        let coeffs = (0..=order as u64)
            .map(ahat_char_coeff)
            .collect::<Result<_, _>>()?;
        Ok(PowerSeries { coeffs })
    }

    pub fn truncation_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `t^i`; zero beyond the truncation order is never
    /// returned, callers must stay in range.
    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_characteristic(&self) -> bool {
        self.coeffs[0].is_one()
    }

    /// Product truncated to the smaller of the two orders.
    pub fn mul(&self, other: &PowerSeries) -> PowerSeries {
        let order = self.truncation_order().min(other.truncation_order());
        let mut out = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                out[i + j] += a * b;
            }
        }
        PowerSeries { coeffs: out }
    }

    /// `f(c t)`.
    pub fn rescale(&self, c: &Rational) -> PowerSeries {
        let mut pow = Rational::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| {
                let v = a * &pow;
                pow *= c;
                v
            })
            .collect();
        PowerSeries { coeffs }
    }
}

/// Coefficient of `t^m` in the Â characteristic series (`1` for `m = 0`).
pub fn ahat_char_coeff(m: u64) -> Result<Rational, GenusError> {
    if m == 0 {
        return Ok(Rational::one());
    }
    let b = bernoulli_ms(m)?;
    let four_m = BigInt::from(4).pow(m as u32);
    let value = b * int(&four_m - 2) / int(four_m * factorial(2 * m));
    Ok(if m % 2 == 1 { -value } else { value })
}

/// Integer partition with parts in nonincreasing order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Sorts `parts` into nonincreasing order; zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self, GenusError> {
        if parts.contains(&0) {
            return Err(GenusError::InvalidPartition(format!("{parts:?}")));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn single(k: u32) -> Self {
        Partition { parts: vec![k] }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=width)
            .map(|i| self.parts.iter().filter(|&&p| p >= i).count() as u32)
            .collect();
        Partition { parts }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        f.write_str(&s.join(","))
    }
}

impl FromStr for Partition {
    type Err = GenusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| GenusError::InvalidPartition(s.to_string()))?;
        let sorted = Partition::new(parts.clone())?;
        if sorted.parts != parts {
            return Err(GenusError::InvalidPartition(s.to_string()));
        }
        Ok(sorted)
    }
}

/// All partitions of `k`, in decreasing lexicographic order: `(k), (k-1,1), ..., (1^k)`.
pub fn partitions_of(k: u32) -> Vec<Partition> {
    fn go(rest: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            prefix.push(p);
            go(rest - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, &mut Vec::new(), &mut out);
    out
}

/// Homogeneous polynomial of weight `k` in `p_1, p_2, ...`, keyed by the
/// partition listing the indices of the `p`'s in each monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PontrjaginPolynomial {
    degree: u32,
    terms: BTreeMap<Partition, Rational>,
}

impl PontrjaginPolynomial {
    pub fn new(degree: u32) -> Self {
        PontrjaginPolynomial {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Adds `c` to the coefficient of `key`, dropping it if it cancels.
    pub fn add_term(&mut self, key: Partition, c: Rational) -> Result<(), GenusError> {
        if key.weight() != self.degree {
            return Err(GenusError::InvalidPartition(format!(
                "{key} has weight != {}",
                self.degree
            )));
        }
        let entry = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
        Ok(())
    }

    pub fn coefficient(&self, key: &Partition) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in serialization order, largest partition first.
    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Evaluates at `p_i = values[i - 1]`; missing values count as zero.
    pub fn evaluate(&self, values: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(key, c)| {
                key.parts()
                    .iter()
                    .fold(c.clone(), |acc, &i| match values.get(i as usize - 1) {
                        Some(v) => acc * v,
                        None => Rational::zero(),
                    })
            })
            .sum()
    }
}

impl fmt::Display for PontrjaginPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (key, c)) in self.terms().enumerate() {
            let mut monomial = Vec::new();
            let mut parts = key.parts().to_vec();
            parts.dedup();
            for i in parts {
                let e = key.parts().iter().filter(|&&p| p == i).count();
                monomial.push(if e == 1 {
                    format!("p{i}")
                } else {
                    format!("p{i}^{e}")
                });
            }
            let coeff = format_rational(c);
            let (sign, mag) = match coeff.strip_prefix('-') {
                Some(m) => ("-", m.to_string()),
                None => ("+", coeff),
            };
            match (n, sign) {
                (0, "-") => write!(f, "-{mag} {}", monomial.join(" "))?,
                (0, _) => write!(f, "{mag} {}", monomial.join(" "))?,
                _ => write!(f, " {sign} {mag} {}", monomial.join(" "))?,
            }
        }
        Ok(())
    }
}

impl Serialize for PontrjaginPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::{SerializeMap, SerializeStruct};

        struct Terms<'a>(&'a PontrjaginPolynomial);
        impl Serialize for Terms<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.terms.len()))?;
                for (key, c) in self.0.terms() {
                    m.serialize_entry(&key.to_string(), &format_rational(c))?;
                }
                m.end()
            }
        }

        let mut st = s.serialize_struct("PontrjaginPolynomial", 2)?;
        st.serialize_field("k", &self.degree)?;
        st.serialize_field("terms", &Terms(self))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for PontrjaginPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;

        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            k: u32,
            terms: BTreeMap<String, String>,
        }
        let raw = Raw::deserialize(d)?;
        let mut poly = PontrjaginPolynomial::new(raw.k);
        for (key, c) in raw.terms {
            let key: Partition = key.parse().map_err(D::Error::custom)?;
            let c = parse_rational(&c).map_err(D::Error::custom)?;
            if c.is_zero() {
                return Err(D::Error::custom("zero coefficients are not stored"));
            }
            poly.add_term(key, c).map_err(D::Error::custom)?;
        }
        Ok(poly)
    }
}

/// Number of 0-1 matrices with row sums `rows` and column sums `cols`.
///
/// This is the coefficient of `x^cols` in `e_{rows_1} e_{rows_2} ...`.
fn zero_one_matrices(
    rows: &[u32],
    cols: &[u32],
    memo: &mut HashMap<(usize, Vec<u32>), BigInt>,
) -> BigInt {
    fn go(
        col: usize,
        caps: Vec<u32>,
        cols: &[u32],
        memo: &mut HashMap<(usize, Vec<u32>), BigInt>,
    ) -> BigInt {
        if col == cols.len() {
            return if caps.iter().all(|&c| c == 0) {
                BigInt::one()
            } else {
                BigInt::zero()
            };
        }
        let key = (col, caps);
        if let Some(v) = memo.get(&key) {
            return v.clone();
        }
        let caps = &key.1;
        let live: Vec<usize> = (0..caps.len()).filter(|&i| caps[i] > 0).collect();
        let need = cols[col];
        let mut total = BigInt::zero();
        for mask in 0u32..(1 << live.len()) {
            if mask.count_ones() != need {
                continue;
            }
            let mut next = caps.clone();
            for (bit, &row) in live.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    next[row] -= 1;
                }
            }
            next.sort_unstable_by(|a, b| b.cmp(a));
            total += go(col + 1, next, cols, memo);
        }
        memo.insert(key, total.clone());
        total
    }

    if rows.iter().sum::<u32>() != cols.iter().sum::<u32>() {
        return BigInt::zero();
    }
    let mut caps = rows.to_vec();
    caps.sort_unstable_by(|a, b| b.cmp(a));
    memo.clear();
    go(0, caps, cols, memo)
}

/// Degree-`k` polynomial of the multiplicative sequence with characteristic
/// series `q`, using `k` formal roots.
///
/// The coefficient of `x_1^{μ_1} ... x_k^{μ_k}` in `Π_i q(x_i)` is
/// `Π_i q_{μ_i}`; the resulting symmetric polynomial is rewritten in the
/// elementary symmetric polynomials `p_j = e_j(x)` by repeatedly cancelling
/// the lexicographically leading monomial `x^μ` against `e_{μ'}`.
pub fn multiplicative_sequence_of(
    q: &PowerSeries,
    k: u32,
) -> Result<PontrjaginPolynomial, GenusError> {
    if k == 0 {
        return Err(GenusError::IndexStartsAtOne);
    }
    assert!(
        q.truncation_order() >= k as usize,
        "series truncated below degree {k}"
    );
    let shapes = partitions_of(k);
    let mut monomial: Vec<Rational> = shapes
        .iter()
        .map(|mu| {
            mu.parts()
                .iter()
                .fold(Rational::one(), |acc, &i| acc * q.coeff(i as usize))
        })
        .collect();

    let mut poly = PontrjaginPolynomial::new(k);
    let mut memo = HashMap::new();
    for (i, mu) in shapes.iter().enumerate() {
        let lead = monomial[i].clone();
        if lead.is_zero() {
            continue;
        }
        let e_key = mu.conjugate();
        for (j, rho) in shapes.iter().enumerate().skip(i) {
            let count = zero_one_matrices(e_key.parts(), rho.parts(), &mut memo);
            if !count.is_zero() {
                monomial[j] -= &lead * int(count);
            }
        }
        debug_assert!(monomial[i].is_zero());
        poly.add_term(e_key, lead)?;
    }
    Ok(poly)
}

fn ahat_cache() -> &'static RwLock<HashMap<u32, PontrjaginPolynomial>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, PontrjaginPolynomial>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `Â_k(p_1, ..., p_k)`.
pub fn multiplicative_sequence(k: u32) -> Result<PontrjaginPolynomial, GenusError> {
    if let Some(p) = ahat_cache()
        .read()
        .unwrap_or_else(|e| e.into_inner())
        .get(&k)
    {
        return Ok(p.clone());
    }
    let poly = multiplicative_sequence_of(&PowerSeries::ahat(k as usize)?, k)?;
    ahat_cache()
        .write()
        .unwrap_or_else(|e| e.into_inner())
        .insert(k, poly.clone());
    Ok(poly)
}

/// Power sum `s_k` of the formal roots `y_j` of `Σ λ_j t^j = Π (1 + y_j t)`,
/// via Newton's identities. It equals the coefficient of `p_k` in the
/// degree-`k` multiplicative polynomial.
pub fn newton_power_sum(lambdas: &[Rational], k: usize) -> Rational {
    let lambda = |i: usize| lambdas.get(i).cloned().unwrap_or_else(Rational::zero);
    let mut s: Vec<Rational> = vec![Rational::zero(); k + 1];
    for m in 1..=k {
        let mut acc = Rational::zero();
        for i in 1..m {
            let term = lambda(i) * &s[m - i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let last = lambda(m) * int(m as u64);
        if m % 2 == 1 {
            acc += last;
        } else {
            acc -= last;
        }
        s[m] = acc;
    }
    s[k].clone()
}

/// `α_k` from the power-sum route alone.
pub fn alpha_newton(k: u64) -> Result<Rational, GenusError> {
    if k == 0 {
        return Err(GenusError::IndexStartsAtOne);
    }
    Ok(newton_power_sum(
        PowerSeries::ahat(k as usize)?.coeffs(),
        k as usize,
    ))
}

/// `-B_k / (2 (2k)!)`.
pub fn alpha_closed_form(k: u64) -> Result<Rational, GenusError> {
    if k == 0 {
        return Err(GenusError::IndexStartsAtOne);
    }
    Ok(-bernoulli_ms(k)? / int(factorial(2 * k) * 2))
}

/// Coefficient of `p_k` in `Â_k`, checked three ways.
pub fn alpha(k: u64) -> Result<Rational, GenusError> {
    let newton = alpha_newton(k)?;
    let expanded = multiplicative_sequence(k as u32)?.coefficient(&Partition::single(k as u32));
    let closed = alpha_closed_form(k)?;
    if newton != expanded || expanded != closed {
        return Err(GenusError::AlphaCrossCheck(k));
    }
    Ok(closed)
}

/// `⟨t^{2k-1} Â(N), [N]⟩ = α_k · d` with the orientation fixed so the sign is `+`.
pub fn twisted_pairing(k: u64, d: &BigInt) -> Result<Rational, GenusError> {
    Ok(alpha(k)? * int(d.clone()))
}

/// `a_k`: 2 for odd `k`, 1 for even `k`.
pub fn a_k(k: u64) -> u32 {
    if k % 2 == 1 {
        2
    } else {
        1
    }
}

/// Index `a_k (2k-1)!` of the image of `p_k` on stable bundles over `S^{4k}`.
pub fn kervaire_unit(k: u64) -> Result<BigInt, GenusError> {
    if k == 0 {
        return Err(GenusError::IndexStartsAtOne);
    }
    Ok(factorial(2 * k - 1) * a_k(k))
}

/// `(2k-1)! · den(B_k / 4k)`: every admissible divisibility of `p_k(N)` is a multiple.
pub fn integrality_bound(k: u64) -> Result<BigInt, GenusError> {
    if k == 0 {
        return Err(GenusError::IndexStartsAtOne);
    }
    Ok(factorial(2 * k - 1) * im_j_order(k)?)
}

/// Least positive multiple `d` of `a_k (2k-1)!` with `α_k d` integral,
/// searching at most `max_steps` multiples.
pub fn search_least_divisor(
    k: u64,
    max_steps: u64,
    mode: ExecMode,
) -> Result<Option<BigInt>, GenusError> {
    let unit = kervaire_unit(k)?;
    let alpha = alpha_closed_form(k)?;
    let step = &alpha * int(unit.clone());
    let hit = par::find_first(mode, 1, max_steps + 1, |i| is_integral(&(&step * int(i))));
    Ok(hit.map(|i| unit * i))
}
