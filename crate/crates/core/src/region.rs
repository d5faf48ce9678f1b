//! Half-space representations of the two s.d.o.f. regions.
//!
//! Row order is fixed so that active-set indices are reproducible: secrecy
//! rows for users 1..K, then (IC only) one interference row per unordered
//! user pair in lexicographic order, then nonnegativity rows for users 1..K.
//! Row indices are 0-based everywhere in this crate; user indices inside
//! [`ConstraintTag`] are 0-based in Rust and 1-based in JSON.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{dot, RatMatrix, RatVector, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    /// K-user Gaussian MAC wiretap channel.
    Mac,
    /// K-user interference channel with secrecy constraints (IC-EE, IC-CM
    /// and IC-CM-EE share one region).
    Ic,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Mac => "mac",
            FamilyKind::Ic => "ic",
        })
    }
}

impl FromStr for FamilyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mac" => Ok(FamilyKind::Mac),
            "ic" => Ok(FamilyKind::Ic),
            other => Err(Error::Parse(format!("unknown family {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ChannelFamily {
    kind: FamilyKind,
    users: usize,
}

impl ChannelFamily {
    pub fn new(kind: FamilyKind, users: usize) -> Result<Self> {
        if users < 2 {
            return Err(Error::Domain(format!("need K >= 2 users, got {users}")));
        }
        Ok(ChannelFamily { kind, users })
    }

    pub fn mac(users: usize) -> Result<Self> {
        Self::new(FamilyKind::Mac, users)
    }

    pub fn ic(users: usize) -> Result<Self> {
        Self::new(FamilyKind::Ic, users)
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn users(&self) -> usize {
        self.users
    }

    /// Number of rows of the half-space system.
    pub fn row_count(&self) -> usize {
        let k = self.users;
        match self.kind {
            FamilyKind::Mac => 2 * k,
            FamilyKind::Ic => 2 * k + k * (k - 1) / 2,
        }
    }

    /// Value of every coordinate of the symmetric vertex, which maximizes
    /// the sum of the coordinates.
    pub fn symmetric_value(&self) -> Rational {
        let k = self.users as i64;
        match self.kind {
            FamilyKind::Mac => Rational::new(k - 1, k * (k - 1) + 1),
            FamilyKind::Ic => Rational::new(k - 1, 2 * k - 1),
        }
    }

    /// Maximum sum of coordinates over the region.
    pub fn sum_sdof(&self) -> Rational {
        let k = self.users as i64;
        match self.kind {
            FamilyKind::Mac => Rational::new(k * (k - 1), k * (k - 1) + 1),
            FamilyKind::Ic => Rational::new(k * (k - 1), 2 * k - 1),
        }
    }
}

/// Which family of inequalities a row belongs to. User indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstraintTag {
    Secrecy(usize),
    /// Unordered pair stored with the smaller index first.
    Interference(usize, usize),
    Nonnegativity(usize),
}

impl ConstraintTag {
    pub fn is_secrecy(&self) -> bool {
        matches!(self, ConstraintTag::Secrecy(_))
    }

    pub fn is_interference(&self) -> bool {
        matches!(self, ConstraintTag::Interference(..))
    }

    pub fn is_nonnegativity(&self) -> bool {
        matches!(self, ConstraintTag::Nonnegativity(_))
    }
}

impl fmt::Display for ConstraintTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ConstraintTag::Secrecy(i) => write!(f, "secrecy(s_{})", i + 1),
            ConstraintTag::Interference(i, j) => {
                write!(f, "interference(p_{{{},{}}})", i + 1, j + 1)
            }
            ConstraintTag::Nonnegativity(i) => write!(f, "nonnegativity(z_{})", i + 1),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "lowercase")]
enum TagRepr {
    Secrecy { user: usize },
    Interference { pair: [usize; 2] },
    Nonnegativity { user: usize },
}

impl Serialize for ConstraintTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match *self {
            ConstraintTag::Secrecy(i) => TagRepr::Secrecy { user: i + 1 },
            ConstraintTag::Interference(i, j) => TagRepr::Interference {
                pair: [i + 1, j + 1],
            },
            ConstraintTag::Nonnegativity(i) => TagRepr::Nonnegativity { user: i + 1 },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConstraintTag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let one_based = |u: usize| {
            u.checked_sub(1)
                .ok_or_else(|| D::Error::custom("user indices are 1-based"))
        };
        Ok(match TagRepr::deserialize(d)? {
            TagRepr::Secrecy { user } => ConstraintTag::Secrecy(one_based(user)?),
            TagRepr::Nonnegativity { user } => ConstraintTag::Nonnegativity(one_based(user)?),
            TagRepr::Interference { pair: [a, b] } => {
                let (a, b) = (one_based(a)?, one_based(b)?);
                if a == b {
                    return Err(D::Error::custom(
                        "interference pair needs two distinct users",
                    ));
                }
                ConstraintTag::Interference(a.min(b), a.max(b))
            }
        })
    }
}

/// `{ d : H d <= h }` together with a provenance tag per row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfspaceSystem {
    family: ChannelFamily,
    h: RatMatrix,
    rhs: RatVector,
    tags: Vec<ConstraintTag>,
}

impl HalfspaceSystem {
    pub fn new(
        family: ChannelFamily,
        h: RatMatrix,
        rhs: RatVector,
        tags: Vec<ConstraintTag>,
    ) -> Result<Self> {
        if h.cols() != family.users() {
            return Err(Error::Shape(format!(
                "matrix has {} columns for K = {}",
                h.cols(),
                family.users()
            )));
        }
        if h.rows() != rhs.len() || h.rows() != tags.len() {
            return Err(Error::Shape(format!(
                "{} rows, {} right-hand sides, {} tags",
                h.rows(),
                rhs.len(),
                tags.len()
            )));
        }
        let k = family.users();
        let in_range = tags.iter().all(|t| match *t {
            ConstraintTag::Secrecy(i) | ConstraintTag::Nonnegativity(i) => i < k,
            ConstraintTag::Interference(i, j) => i < j && j < k,
        });
        if !in_range {
            return Err(Error::Domain(
                "constraint tag refers to a user outside 1..K".into(),
            ));
        }
        Ok(HalfspaceSystem {
            family,
            h,
            rhs,
            tags,
        })
    }

    pub fn family(&self) -> ChannelFamily {
        self.family
    }

    pub fn dim(&self) -> usize {
        self.family.users()
    }

    pub fn len(&self) -> usize {
        self.rhs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rhs.is_empty()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.h
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.rhs
    }

    pub fn tags(&self) -> &[ConstraintTag] {
        &self.tags
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        self.h.row(r)
    }

    /// Left-hand side `H_r d` of row `r`.
    pub fn lhs(&self, r: usize, d: &[Rational]) -> Rational {
        dot(self.h.row(r), d)
    }

    /// Row index carrying `tag`, if present.
    pub fn row_of(&self, tag: ConstraintTag) -> Option<usize> {
        self.tags.iter().position(|&t| t == tag)
    }

    /// Copy of the system with row `r` deleted.
    pub fn without_row(&self, r: usize) -> HalfspaceSystem {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| i != r).collect();
        HalfspaceSystem {
            family: self.family,
            h: self.h.select_rows(&keep),
            rhs: keep.iter().map(|&i| self.rhs[i].clone()).collect(),
            tags: keep.iter().map(|&i| self.tags[i]).collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SystemRepr::from(self)).expect("system serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let repr: SystemRepr =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let family = ChannelFamily::new(repr.family, repr.k)?;
        let rows = repr.rows.iter().map(|r| r.coeffs.clone()).collect();
        let h = RatMatrix::from_rows(rows)?;
        let h = if repr.rows.is_empty() {
            RatMatrix::zeros(0, family.users())
        } else {
            h
        };
        let rhs = repr.rows.iter().map(|r| r.rhs.clone()).collect();
        let tags = repr.rows.iter().map(|r| r.tag).collect();
        HalfspaceSystem::new(family, h, rhs, tags)
    }
}

#[derive(Serialize, Deserialize)]
struct RowRepr {
    coeffs: Vec<Rational>,
    rhs: Rational,
    tag: ConstraintTag,
}

#[derive(Serialize, Deserialize)]
struct SystemRepr {
    family: FamilyKind,
    #[serde(rename = "K")]
    k: usize,
    rows: Vec<RowRepr>,
}

impl From<&HalfspaceSystem> for SystemRepr {
    fn from(s: &HalfspaceSystem) -> Self {
        SystemRepr {
            family: s.family.kind(),
            k: s.dim(),
            rows: (0..s.len())
                .map(|r| RowRepr {
                    coeffs: s.row(r).to_vec(),
                    rhs: s.rhs[r].clone(),
                    tag: s.tags[r],
                })
                .collect(),
        }
    }
}

/// Exact half-space system of the family's s.d.o.f. region.
pub fn build_system(fam: ChannelFamily) -> HalfspaceSystem {
    let k = fam.users();
    let ki = k as i64;
    let off_diag = match fam.kind() {
        FamilyKind::Mac => ki - 1,
        FamilyKind::Ic => 1,
    };
    let mut rows: Vec<Vec<i64>> = Vec::with_capacity(fam.row_count());
    let mut rhs = Vec::with_capacity(fam.row_count());
    let mut tags = Vec::with_capacity(fam.row_count());

    for i in 0..k {
        rows.push((0..k).map(|j| if j == i { ki } else { off_diag }).collect());
        rhs.push(ki - 1);
        tags.push(ConstraintTag::Secrecy(i));
    }
    if fam.kind() == FamilyKind::Ic {
        for i in 0..k {
            for j in i + 1..k {
                rows.push((0..k).map(|c| i64::from(c == i || c == j)).collect());
                rhs.push(1);
                tags.push(ConstraintTag::Interference(i, j));
            }
        }
    }
    for i in 0..k {
        rows.push((0..k).map(|j| if j == i { -1 } else { 0 }).collect());
        rhs.push(0);
        tags.push(ConstraintTag::Nonnegativity(i));
    }

    HalfspaceSystem {
        family: fam,
        h: RatMatrix::from_i64_rows(&rows),
        rhs: rhs.into_iter().map(Rational::from).collect(),
        tags,
    }
}
