use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Finitely generated abelian group `Z^rank ⊕ Z/t_1 ⊕ ... ⊕ Z/t_m`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DegreeGroup {
    pub rank: u64,
    #[serde(default)]
    pub torsion: Vec<u64>,
}

impl DegreeGroup {
    pub fn free(rank: u64) -> Self {
        DegreeGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

impl fmt::Display for DegreeGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut pieces = Vec::new();
        match self.rank {
            0 => {}
            1 => pieces.push("Z".to_string()),
            r => pieces.push(format!("Z^{r}")),
        }
        pieces.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if pieces.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&pieces.join(" + "))
        }
    }
}

/// Cohomology groups `H^0 ... H^top_degree`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGraded", into = "RawGraded")]
pub struct GradedGroup {
    top_degree: u32,
    degrees: Vec<DegreeGroup>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGraded {
    top_degree: u32,
    degrees: BTreeMap<u32, DegreeGroup>,
}

impl TryFrom<RawGraded> for GradedGroup {
    type Error = String;

    fn try_from(raw: RawGraded) -> Result<Self, Self::Error> {
        let mut g = GradedGroup::zero(raw.top_degree);
        for (j, group) in raw.degrees {
            if j > raw.top_degree {
                return Err(format!("degree {j} exceeds top_degree {}", raw.top_degree));
            }
            if group.torsion.iter().any(|&t| t < 2) {
                return Err(format!("torsion orders in degree {j} must be at least 2"));
            }
            g.degrees[j as usize] = group;
        }
        Ok(g)
    }
}

impl From<GradedGroup> for RawGraded {
    fn from(g: GradedGroup) -> Self {
        RawGraded {
            top_degree: g.top_degree,
            degrees: g
                .degrees
                .into_iter()
                .enumerate()
                .map(|(j, d)| (j as u32, d))
                .collect(),
        }
    }
}

impl GradedGroup {
    pub fn zero(top_degree: u32) -> Self {
        GradedGroup {
            top_degree,
            degrees: vec![DegreeGroup::default(); top_degree as usize + 1],
        }
    }

    pub fn top_degree(&self) -> u32 {
        self.top_degree
    }

    /// Sets degree `j`; torsion orders below 2 are dropped.
    pub fn set(&mut self, j: u32, rank: u64, torsion: Vec<u64>) {
        let torsion = torsion.into_iter().filter(|&t| t >= 2).collect();
        self.degrees[j as usize] = DegreeGroup { rank, torsion };
    }

    /// `H^j`; the zero group outside `0..=top_degree`.
    pub fn degree(&self, j: i64) -> DegreeGroup {
        usize::try_from(j)
            .ok()
            .and_then(|j| self.degrees.get(j))
            .cloned()
            .unwrap_or_default()
    }

    pub fn rank(&self, j: i64) -> u64 {
        usize::try_from(j)
            .ok()
            .and_then(|j| self.degrees.get(j))
            .map_or(0, |d| d.rank)
    }

    pub fn ranks(&self) -> Vec<u64> {
        self.degrees.iter().map(|d| d.rank).collect()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.degrees.iter().all(DegreeGroup::is_free)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees
            .iter()
            .enumerate()
            .map(|(j, d)| {
                if j % 2 == 0 {
                    d.rank as i64
                } else {
                    -(d.rank as i64)
                }
            })
            .sum()
    }

    /// `rank H^j = rank H^{top - j}` for every `j`.
    pub fn has_poincare_ranks(&self) -> bool {
        let r = self.ranks();
        r.iter().eq(r.iter().rev())
    }

    /// `H^*(CP^m)`: `Z` in each even degree up to `2m`.
    pub fn complex_projective(m: u32) -> Self {
        let mut g = GradedGroup::zero(2 * m);
        for j in (0..=2 * m).step_by(2) {
            g.set(j, 1, Vec::new());
        }
        g
    }

    /// `H^*(S^d)`.
    pub fn sphere(d: u32) -> Self {
        let mut g = GradedGroup::zero(d);
        g.set(0, 1, Vec::new());
        g.set(d, 1, Vec::new());
        g
    }
}

impl fmt::Display for GradedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, d) in self.degrees.iter().enumerate() {
            writeln!(f, "H^{j} = {d}")?;
        }
        Ok(())
    }
}
