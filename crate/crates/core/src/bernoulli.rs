//! Bernoulli numbers in the positive (topologists') convention.
//!
//! `B_k` here is the coefficient appearing in
//! `z/(e^z - 1) = 1 - z/2 + B_1 z^2/2! - B_2 z^4/4! + ...`, so every `B_k` is
//! positive and `B_k = |b_{2k}|` where `b_m` is the modern signed sequence
//! (`b_0 = 1`, `b_1 = -1/2`). The modern sequence is what the table stores;
//! only the positive convention leaves this module.

use std::sync::{OnceLock, RwLock};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{binomial, den, BigInt, Rational};
use crate::par::{self, ExecMode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BernoulliError {
    #[error("index starts at 1")]
    IndexStartsAtOne,
    #[error("parity: defined for odd k")]
    EvenIndex,
}

/// Memoized Bernoulli numbers `B_1..=B_max_index`.
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    // modern signed b_0..=b_{2 * max_index}
    modern: Vec<Rational>,
}

impl Default for BernoulliTable {
    fn default() -> Self {
        Self::new()
    }
}

impl BernoulliTable {
    pub fn new() -> Self {
        BernoulliTable {
            modern: vec![Rational::one()],
        }
    }

    pub fn with_max_index(max_index: u64) -> Self {
        let mut t = Self::new();
        t.extend_to(max_index);
        t
    }

    pub fn max_index(&self) -> u64 {
        (self.modern.len() as u64 - 1) / 2
    }

    /// Extends the table so that `B_1..=B_max_index` are available.
    ///
    /// Uses `sum_{j=0}^{m} C(m+1, j) b_j = 0`, i.e. one O(m) sum per new `b_m`.
    pub fn extend_to(&mut self, max_index: u64) {
        let target = 2 * max_index as usize;
        while self.modern.len() <= target {
            let m = self.modern.len() as u64;
            let sum = self
                .modern
                .iter()
                .enumerate()
                .fold(Rational::zero(), |acc, (j, b)| {
                    if b.is_zero() {
                        acc
                    } else {
                        acc + Rational::from_integer(binomial(m + 1, j as u64)) * b
                    }
                });
            let b_m = -sum / Rational::from_integer(BigInt::from(m + 1));
            self.modern.push(b_m);
        }
    }

    /// `B_k` in the positive convention, if within the table.
    pub fn get(&self, k: u64) -> Option<Rational> {
        if k == 0 || k > self.max_index() {
            return None;
        }
        let b = &self.modern[2 * k as usize];
        // B_k = (-1)^{k+1} b_{2k}
        Some(if k % 2 == 1 { b.clone() } else { -b })
    }

    /// Modern signed `b_m`.
    pub fn modern(&self, m: usize) -> Option<&Rational> {
        self.modern.get(m)
    }

    pub fn values(&self) -> Vec<Rational> {
        (1..=self.max_index()).filter_map(|k| self.get(k)).collect()
    }
}

fn shared_table() -> &'static RwLock<BernoulliTable> {
    static TABLE: OnceLock<RwLock<BernoulliTable>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(BernoulliTable::with_max_index(32)))
}

/// `B_k`, from the process-wide memo table.
pub fn bernoulli_ms(k: u64) -> Result<Rational, BernoulliError> {
    if k == 0 {
        return Err(BernoulliError::IndexStartsAtOne);
    }
    if let Some(b) = shared_table()
        .read()
        .unwrap_or_else(|e| e.into_inner())
        .get(k)
    {
        return Ok(b);
    }
    let mut table = shared_table().write().unwrap_or_else(|e| e.into_inner());
    table.extend_to(k);
    Ok(table.get(k).expect("table was just extended"))
}

/// Trial-division primality test.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Product of the primes `p` with `(p - 1) | 2k`.
///
/// By von Staudt–Clausen this is `den(B_k)`; it never looks at the recurrence.
pub fn vsc_denominator(k: u64) -> Result<BigInt, BernoulliError> {
    if k == 0 {
        return Err(BernoulliError::IndexStartsAtOne);
    }
    Ok((2..=2 * k + 1)
        .filter(|&p| (2 * k).is_multiple_of(p - 1) && is_prime(p))
        .fold(BigInt::one(), |acc, p| acc * p))
}

/// `den(B_k / 4k)`, the order of the image of J in degree `4k - 1`.
pub fn im_j_order(k: u64) -> Result<BigInt, BernoulliError> {
    let b = bernoulli_ms(k)?;
    Ok(den(&(b / Rational::from_integer(BigInt::from(4 * k)))))
}

/// `den(2 B_k / 4k)` for odd `k`, which is half of [`im_j_order`].
pub fn odd_half_denominator(k: u64) -> Result<BigInt, BernoulliError> {
    if k == 0 {
        return Err(BernoulliError::IndexStartsAtOne);
    }
    if k.is_multiple_of(2) {
        return Err(BernoulliError::EvenIndex);
    }
    let b = bernoulli_ms(k)?;
    let half = den(&(b * Rational::from_integer(BigInt::from(2))
        / Rational::from_integer(BigInt::from(4 * k))));
    debug_assert_eq!(&half * 2, im_j_order(k)?);
    Ok(half)
}

/// One line of the Bernoulli table: `(k, B_k, den(B_k), den(B_k/4k))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BernoulliRow {
    pub k: u64,
    #[serde(with = "crate::exactnum::fraction")]
    pub b_k: Rational,
    #[serde(with = "crate::exactnum::decimal")]
    pub den_b_k: BigInt,
    #[serde(with = "crate::exactnum::decimal")]
    pub im_j_order: BigInt,
}

/// Rows `1..=max_index`. The recurrence is sequential; the per-row
/// reductions are mapped with `mode`.
pub fn table_rows(max_index: u64, mode: ExecMode) -> Vec<BernoulliRow> {
    let table = BernoulliTable::with_max_index(max_index);
    let values = table.values();
    par::map_range(mode, 1, max_index + 1, |k| {
        let b_k = values[(k - 1) as usize].clone();
        let j = den(&(&b_k / Rational::from_integer(BigInt::from(4 * k))));
        BernoulliRow {
            k,
            den_b_k: den(&b_k),
            im_j_order: j,
            b_k,
        }
    })
}

/// Positive-convention sanity: numerator odd, denominator even, value positive.
pub fn has_expected_parity(b: &Rational) -> bool {
    b.is_positive() && b.numer() % 2 != BigInt::zero() && b.denom() % 2 == BigInt::zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::reduce;

    fn q(n: i64, d: i64) -> Rational {
        reduce(n.into(), d.into()).unwrap()
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli_ms(1).unwrap(), q(1, 6));
        assert_eq!(bernoulli_ms(2).unwrap(), q(1, 30));
        assert_eq!(bernoulli_ms(3).unwrap(), q(1, 42));
        assert_eq!(bernoulli_ms(5).unwrap(), q(5, 66));
        assert_eq!(bernoulli_ms(6).unwrap(), q(691, 2730));
        assert_eq!(bernoulli_ms(10).unwrap(), q(174611, 330));
        assert_eq!(bernoulli_ms(0), Err(BernoulliError::IndexStartsAtOne));
    }

    #[test]
    fn modern_convention_is_internal_only() {
        let t = BernoulliTable::with_max_index(3);
        assert_eq!(t.modern(1), Some(&q(-1, 2)));
        assert_eq!(t.modern(3), Some(&Rational::zero()));
        assert_eq!(t.modern(4), Some(&q(-1, 30)));
        assert_eq!(t.get(2), Some(q(1, 30)));
        assert_eq!(t.get(4), None);
    }

    #[test]
    fn b30_against_frozen_value() {
        let expected =
            crate::exactnum::parse_rational("1215233140483755572040304994079820246041491/56786730")
                .unwrap();
        assert_eq!(bernoulli_ms(30).unwrap(), expected);
    }

    #[test]
    fn table_extension_is_consistent() {
        let mut t = BernoulliTable::with_max_index(5);
        let small = t.values();
        t.extend_to(12);
        assert_eq!(t.max_index(), 12);
        assert_eq!(&t.values()[..5], &small[..]);
        // the shared table grows past its initial size on demand
        assert_eq!(
            bernoulli_ms(40).unwrap(),
            BernoulliTable::with_max_index(40).get(40).unwrap()
        );
    }

    #[test]
    fn vsc_examples() {
        assert_eq!(vsc_denominator(1).unwrap(), BigInt::from(6));
        assert_eq!(vsc_denominator(2).unwrap(), BigInt::from(30));
        assert_eq!(vsc_denominator(6).unwrap(), BigInt::from(2730));
    }

    #[test]
    fn vsc_matches_recurrence_through_30() {
        for k in 1..=30 {
            let b = bernoulli_ms(k).unwrap();
            assert_eq!(den(&b), vsc_denominator(k).unwrap(), "k = {k}");
            assert!(has_expected_parity(&b), "k = {k}");
        }
    }

    #[test]
    fn im_j_examples() {
        let got: Vec<_> = (1..=6).map(|k| im_j_order(k).unwrap()).collect();
        let want: Vec<BigInt> = [24, 240, 504, 480, 264, 65520].map(BigInt::from).to_vec();
        assert_eq!(got, want);
        for k in 1..=30 {
            assert_eq!(im_j_order(k).unwrap() % 24, BigInt::zero(), "k = {k}");
        }
    }

    #[test]
    fn odd_half_denominators() {
        assert_eq!(odd_half_denominator(1).unwrap(), BigInt::from(12));
        assert_eq!(odd_half_denominator(3).unwrap(), BigInt::from(252));
        assert_eq!(odd_half_denominator(5).unwrap(), BigInt::from(132));
        assert_eq!(odd_half_denominator(4), Err(BernoulliError::EvenIndex));
        assert_eq!(
            odd_half_denominator(4).unwrap_err().to_string(),
            "parity: defined for odd k"
        );
        for k in (1..=29).step_by(2) {
            assert_eq!(odd_half_denominator(k).unwrap() * 2, im_j_order(k).unwrap());
        }
    }

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(7919));
        assert!(!is_prime(7917));
    }

    #[test]
    fn rows_agree_across_modes() {
        let a = table_rows(20, ExecMode::Sequential);
        let b = table_rows(20, ExecMode::Parallel);
        assert_eq!(a, b);
        assert_eq!(a[1].im_j_order, BigInt::from(240));
        assert_eq!(a[5].den_b_k, BigInt::from(2730));
    }
}
