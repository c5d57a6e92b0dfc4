//! Cohomology models of the two possible orbit spaces `N^{2n}`:
//! `#_r(S^n x S^n) # CP^n` and `#_r(S^n x S^n) # (CP^{(n-1)/2} x S^{n+1})`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::graded::GradedGroup;
use super::matrix::{smith_normal_form, IntMatrix};
use super::GradedError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrbitFamily {
    /// `#_r(S^n x S^n) # CP^n`
    #[serde(rename = "CPN")]
    Cpn,
    /// `#_r(S^n x S^n) # (CP^{(n-1)/2} x S^{n+1})`
    #[serde(rename = "CPHALF_TIMES_SPHERE")]
    CpHalfTimesSphere,
}

impl OrbitFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            OrbitFamily::Cpn => "CPN",
            OrbitFamily::CpHalfTimesSphere => "CPHALF_TIMES_SPHERE",
        }
    }
}

impl fmt::Display for OrbitFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OrbitFamily {
    type Err = GradedError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().replace('-', "_").as_str() {
            "CPN" => Ok(OrbitFamily::Cpn),
            "CPHALF" | "CPHALF_TIMES_SPHERE" => Ok(OrbitFamily::CpHalfTimesSphere),
            _ => Err(GradedError::InvalidModel(format!(
                "unknown family {s:?} (expected CPN or CPHALF)"
            ))),
        }
    }
}

/// `H^*(N)` together with the maps `- ∪ t : H^j -> H^{j+2}`.
///
/// `cup_t[j]` has shape `rank H^{j+2} x rank H^j`; a missing entry is the zero map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawModel", into = "RawModel")]
pub struct OrbitModel {
    n: u32,
    family: OrbitFamily,
    r: u64,
    cohomology: GradedGroup,
    cup_t: BTreeMap<u32, IntMatrix>,
    euler_primitive: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    n: u32,
    family: OrbitFamily,
    r: u64,
    cohomology: GradedGroup,
    #[serde(default)]
    cup_t: BTreeMap<u32, IntMatrix>,
    euler_primitive: bool,
}

impl TryFrom<RawModel> for OrbitModel {
    type Error = GradedError;

    fn try_from(raw: RawModel) -> Result<Self, GradedError> {
        OrbitModel::new(
            raw.n,
            raw.family,
            raw.r,
            raw.cohomology,
            raw.cup_t,
            raw.euler_primitive,
        )
    }
}

impl From<OrbitModel> for RawModel {
    fn from(m: OrbitModel) -> Self {
        RawModel {
            n: m.n,
            family: m.family,
            r: m.r,
            cohomology: m.cohomology,
            cup_t: m.cup_t,
            euler_primitive: m.euler_primitive,
        }
    }
}

fn check_dimension(n: u32) -> Result<(), GradedError> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(GradedError::DimensionOutOfScope(n));
    }
    Ok(())
}

impl OrbitModel {
    /// Validating constructor, used for models read from JSON.
    pub fn new(
        n: u32,
        family: OrbitFamily,
        r: u64,
        cohomology: GradedGroup,
        cup_t: BTreeMap<u32, IntMatrix>,
        euler_primitive: bool,
    ) -> Result<Self, GradedError> {
        check_dimension(n)?;
        let bad = |msg: String| Err(GradedError::InvalidModel(msg));
        let h = &cohomology;
        if h.top_degree() != 2 * n {
            return bad(format!("cohomology must run through degree {}", 2 * n));
        }
        if !h.is_torsion_free() {
            return Err(GradedError::TorsionInBase);
        }
        if h.rank(0) != 1 || h.rank(1) != 0 || h.rank(2) != 1 {
            return bad("orbit space needs H^0 = Z, H^1 = 0, H^2 = Z".into());
        }
        if !h.has_poincare_ranks() {
            return bad("ranks violate Poincare duality".into());
        }
        if h.rank(n as i64) != 2 * r {
            return bad(format!("middle rank must be 2r = {}", 2 * r));
        }
        for (&j, m) in &cup_t {
            let (rows, cols) = (h.rank(j as i64 + 2) as usize, h.rank(j as i64) as usize);
            if j + 2 > 2 * n || m.rows() != rows || m.cols() != cols {
                return bad(format!("cup_t[{j}] must be {rows}x{cols}"));
            }
        }
        Ok(OrbitModel {
            n,
            family,
            r,
            cohomology,
            cup_t,
            euler_primitive,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn family(&self) -> OrbitFamily {
        self.family
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn cohomology(&self) -> &GradedGroup {
        &self.cohomology
    }

    pub fn euler_primitive(&self) -> bool {
        self.euler_primitive
    }

    /// `- ∪ t : H^j -> H^{j+2}` as a matrix, zero where unset or out of range.
    pub fn cup_t(&self, j: i64) -> IntMatrix {
        let rows = self.cohomology.rank(j + 2) as usize;
        let cols = self.cohomology.rank(j) as usize;
        match u32::try_from(j).ok().and_then(|j| self.cup_t.get(&j)) {
            Some(m) => m.clone(),
            None => IntMatrix::zeros(rows, cols),
        }
    }

    /// True when `1 ∪ t` generates `H^2`.
    pub fn euler_class_generates(&self) -> bool {
        let m = self.cup_t(0);
        self.euler_primitive && smith_normal_form(&m).is_unimodular(m.rows(), m.cols())
    }
}

/// The model of the named family with `r` handles `S^n x S^n`.
///
/// Both families have `Z` in every even degree and `Z^{2r}` in degree `n`;
/// they differ only in `- ∪ t : H^{n-1} -> H^{n+1}`, which is an isomorphism
/// for `CPN` and zero for `CPHALF_TIMES_SPHERE`.
pub fn standard_orbit_model(
    n: u32,
    family: OrbitFamily,
    r: u64,
) -> Result<OrbitModel, GradedError> {
    check_dimension(n)?;
    let mut h = GradedGroup::zero(2 * n);
    for j in (0..=2 * n).step_by(2) {
        h.set(j, 1, Vec::new());
    }
    h.set(n, 2 * r, Vec::new());

    let mut cup_t = BTreeMap::new();
    for j in (0..2 * n - 1).step_by(2) {
        let v = if family == OrbitFamily::CpHalfTimesSphere && j == n - 1 {
            0
        } else {
            1
        };
        cup_t.insert(j, IntMatrix::diagonal(&[v]));
    }
    OrbitModel::new(n, family, r, h, cup_t, true)
}
