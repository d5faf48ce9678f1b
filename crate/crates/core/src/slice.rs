//! Two-dimensional cross-sections of a region, as plot-ready polygons.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{dot, solve, RatMatrix, Rational};
use crate::region::{build_system, ChannelFamily};

/// Polygon of a slice with its vertices in counterclockwise order,
/// starting from the lexicographically smallest one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Slice {
    /// 0-based indices of the two free coordinates.
    pub free: [usize; 2],
    pub vertices: Vec<[Rational; 2]>,
}

pub fn region_slice(fam: ChannelFamily, fixed: &[(usize, Rational)]) -> Result<Slice> {
    let k = fam.users();
    let mut seen = BTreeSet::new();
    for &(i, _) in fixed {
        if i >= k {
            return Err(Error::Usage(format!(
                "coordinate {} out of range 1..{k}",
                i + 1
            )));
        }
        if !seen.insert(i) {
            return Err(Error::Usage(format!("coordinate {} fixed twice", i + 1)));
        }
    }
    let free: Vec<usize> = (0..k).filter(|i| !seen.contains(i)).collect();
    if free.len() != 2 {
        return Err(Error::Usage(format!(
            "a slice needs exactly 2 free coordinates, got {}",
            free.len()
        )));
    }
    let free = [free[0], free[1]];

    let sys = build_system(fam);
    let mut point = vec![Rational::zero(); k];
    for (i, v) in fixed {
        point[*i] = v.clone();
    }
    // Substitute the fixed coordinates: a x + b y <= c.
    let rows: Vec<([Rational; 2], Rational)> = (0..sys.len())
        .map(|r| {
            let row = sys.row(r);
            let c = &sys.rhs()[r] - &dot(row, &point);
            ([row[free[0]].clone(), row[free[1]].clone()], c)
        })
        .collect();

    let feasible = |p: &[Rational]| {
        rows.iter()
            .all(|(a, c)| &(&a[0] * &p[0]) + &(&a[1] * &p[1]) <= *c)
    };
    let mut found = BTreeSet::new();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let a = RatMatrix::from_rows(vec![rows[i].0.to_vec(), rows[j].0.to_vec()])?;
            let b = [rows[i].1.clone(), rows[j].1.clone()];
            if let Ok(Ok(x)) = solve(&a, &b) {
                if feasible(&x) {
                    found.insert([x[0].clone(), x[1].clone()]);
                }
            }
        }
    }
    Ok(Slice {
        free,
        vertices: counterclockwise(found.into_iter().collect()),
    })
}

fn cross(o: &[Rational; 2], a: &[Rational; 2], b: &[Rational; 2]) -> Rational {
    let (ax, ay) = (&a[0] - &o[0], &a[1] - &o[1]);
    let (bx, by) = (&b[0] - &o[0], &b[1] - &o[1]);
    &ax * &by - &ay * &bx
}

/// Orders convex-position points counterclockwise from the
/// lexicographic minimum. The input must be sorted.
fn counterclockwise(mut pts: Vec<[Rational; 2]>) -> Vec<[Rational; 2]> {
    if pts.len() < 3 {
        return pts;
    }
    let origin = pts[0].clone();
    pts[1..].sort_by(|a, b| match cross(&origin, a, b) {
        x if x.is_positive() => Ordering::Less,
        x if x.is_negative() => Ordering::Greater,
        _ => {
            let da = (&a[0] - &origin[0]).abs() + (&a[1] - &origin[1]).abs();
            let db = (&b[0] - &origin[0]).abs() + (&b[1] - &origin[1]).abs();
            da.cmp(&db)
        }
    });
    pts
}
