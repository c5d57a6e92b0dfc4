//! Total-space cohomology of the circle bundle `S^1 -> M -> N` with Euler
//! class `t`, read off the Gysin sequence
//!
//! ```text
//! H^{j-2}(N) --∪t--> H^j(N) --π*--> H^j(M) --> H^{j-1}(N) --∪t--> H^{j+1}(N)
//! ```
//!
//! one degree at a time as `0 -> coker -> H^j(M) -> ker -> 0`.

use num_traits::{Signed, Zero};

use super::graded::GradedGroup;
use super::matrix::smith_normal_form;
use super::orbit::OrbitModel;
use super::GradedError;
use crate::exactnum::BigInt;

/// `H^*(M)` for `M` the circle bundle over `model` with Euler class `t`.
///
/// The kernel part is a subgroup of a free group, hence free, so each short
/// exact sequence splits and `H^j(M) = coker ⊕ ker`. Torsion in the
/// cokernel is carried through as is.
pub fn gysin_total_space(model: &OrbitModel) -> Result<GradedGroup, GradedError> {
    if !model.euler_class_generates() {
        return Err(GradedError::EulerNotPrimitive);
    }
    let h = model.cohomology();
    let dim = 2 * model.n() + 1;
    let mut total = GradedGroup::zero(dim);
    for j in 0..=dim as i64 {
        let into = model.cup_t(j - 2);
        let snf_in = smith_normal_form(&into);
        let (coker_free, coker_torsion) = snf_in.cokernel(h.rank(j) as usize);

        let out = model.cup_t(j - 1);
        let ker = smith_normal_form(&out).kernel_rank(h.rank(j - 1) as usize);

        let torsion = coker_torsion
            .iter()
            .map(|t| u64::try_from(t).map_err(|_| GradedError::TorsionTooLarge(t.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        total.set(j as u32, (coker_free + ker) as u64, torsion);
    }
    Ok(total)
}

/// `H^j = 0` for `1 <= j <= n-1` and `H^n`, `H^{n+1}` torsion-free.
pub fn check_highly_connected(h: &GradedGroup, n: u32) -> bool {
    if h.top_degree() < n + 1 {
        return false;
    }
    (1..n as i64).all(|j| h.degree(j).is_zero())
        && h.degree(n as i64).is_free()
        && h.degree(n as i64 + 1).is_free()
}

/// Divisibility `l(M)` of `p_{(n+1)/4}(M) = π* p_{(n+1)/4}(N)` given the
/// divisibility `d` of `p_{(n+1)/4}(N)`.
///
/// If `∪t : H^{n-1}(N) -> H^{n+1}(N)` is onto, `π*` vanishes on `H^{n+1}(N)`
/// and the class dies. If it is zero, `π*` embeds `H^{n+1}(N)` as a direct
/// summand and divisibility is preserved.
pub fn divisibility_transfer(model: &OrbitModel, d: &BigInt) -> Result<BigInt, GradedError> {
    let n = model.n();
    if n % 4 != 3 {
        return Err(GradedError::PontrjaginIndex(n));
    }
    if d.is_negative() {
        return Err(GradedError::InvalidModel(
            "divisibility must be nonnegative".into(),
        ));
    }
    let m = model.cup_t(n as i64 - 1);
    if m.is_zero() {
        return Ok(d.clone());
    }
    if smith_normal_form(&m).is_unimodular(m.rows(), m.cols()) {
        return Ok(BigInt::zero());
    }
    Err(GradedError::OutsideDichotomy)
}
