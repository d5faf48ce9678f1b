//! Membership, redundancy, weighted-sum maximization and convex
//! decomposition over a half-space system.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{dot, rank, RatVector, Rational};
use crate::region::HalfspaceSystem;
use crate::vertex::{enumerate_extreme_points, fmt_point, par_scan, ExtremePoint, Scanner};

fn check_len(sys: &HalfspaceSystem, v: &[Rational], what: &str) -> Result<()> {
    if v.len() != sys.dim() {
        return Err(Error::Shape(format!(
            "{what} has length {}, system has K = {}",
            v.len(),
            sys.dim()
        )));
    }
    Ok(())
}

/// Rows with `H_r d > h_r`.
pub fn violated_rows(sys: &HalfspaceSystem, d: &[Rational]) -> Result<Vec<usize>> {
    check_len(sys, d, "point")?;
    Ok((0..sys.len())
        .filter(|&r| sys.lhs(r, d) > sys.rhs()[r])
        .collect())
}

pub fn contains(sys: &HalfspaceSystem, d: &[Rational]) -> Result<bool> {
    Ok(violated_rows(sys, d)?.is_empty())
}

enum Hit {
    Feasible,
    Only(usize),
}

/// Rows whose removal strictly enlarges the region.
///
/// Row `r` is irredundant exactly when `H_r d` is unbounded above or
/// exceeds `h_r` somewhere on the region without row `r`. One pass over
/// the K-subsets finds vertices of every one-row-deleted system at once (a
/// basic solution violating only row `r`); a pass over (K-1)-subsets does
/// the same for extreme rays, which catches deletions that make the region
/// unbounded. Requires a nonempty system of full column rank.
pub fn irredundant_rows(sys: &HalfspaceSystem) -> Result<Vec<usize>> {
    let k = sys.dim();
    let n = sys.len();
    if n == 0 || rank(sys.matrix()) < k {
        return Err(Error::Contract(
            "system has no vertices (rank below K)".into(),
        ));
    }
    let scanner = Scanner::new(sys);
    let mut irredundant = BTreeSet::new();

    for r in 0..n {
        if rank(sys.without_row(r).matrix()) < k {
            irredundant.insert(r);
        }
    }

    let single_violation = |x: &_, homogeneous: bool| {
        let mut bad = None;
        for r in 0..n {
            if scanner.row_cmp(r, x, homogeneous) == Ordering::Greater {
                if bad.is_some() {
                    return Err(());
                }
                bad = Some(r);
            }
        }
        Ok(bad)
    };

    let hits = par_scan(
        n,
        k,
        |_, _| false,
        |subset| {
            let cand = scanner.solve_subset(subset)?;
            match single_violation(&cand, false) {
                Ok(None) => Some(Hit::Feasible),
                Ok(Some(r)) => Some(Hit::Only(r)),
                Err(()) => None,
            }
        },
    );
    let mut feasible = false;
    for h in hits {
        match h {
            Hit::Feasible => feasible = true,
            Hit::Only(r) => {
                irredundant.insert(r);
            }
        }
    }
    if !feasible {
        return Err(Error::Contract("system is infeasible".into()));
    }

    let rays = par_scan(
        n,
        k - 1,
        |_, _| false,
        |subset| {
            let dirs = scanner.null_direction(subset)?;
            let found: Vec<usize> = dirs
                .iter()
                .filter_map(|y| single_violation(y, true).ok().flatten())
                .collect();
            (!found.is_empty()).then_some(found)
        },
    );
    irredundant.extend(rays.into_iter().flatten());

    Ok(irredundant.into_iter().collect())
}

/// Maximum of `w . d` over a vertex list and every vertex attaining it.
pub fn max_over(
    vertices: &[ExtremePoint],
    w: &[Rational],
) -> Result<(Rational, Vec<ExtremePoint>)> {
    let mut best: Option<Rational> = None;
    let mut argmax = Vec::new();
    for v in vertices {
        if v.coords().len() != w.len() {
            return Err(Error::Shape(
                "weight length differs from vertex length".into(),
            ));
        }
        let val = dot(w, v.coords());
        match best.as_ref().map(|b| val.cmp(b)) {
            Some(Ordering::Less) => {}
            Some(Ordering::Equal) => argmax.push(v.clone()),
            _ => {
                best = Some(val);
                argmax = vec![v.clone()];
            }
        }
    }
    let best = best.ok_or_else(|| Error::Contract("no vertices to maximize over".into()))?;
    Ok((best, argmax))
}

/// Exact maximum of `w . d` over a bounded region, by scanning vertices.
pub fn max_weighted_sum(
    sys: &HalfspaceSystem,
    w: &[Rational],
) -> Result<(Rational, Vec<ExtremePoint>)> {
    check_len(sys, w, "weight vector")?;
    max_over(&enumerate_extreme_points(sys), w)
}

/// Convex combination of vertices. Weights are positive and sum to one.
#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub terms: Vec<(ExtremePoint, Rational)>,
}

impl Decomposition {
    /// `sum_v weight_v * v`.
    pub fn resum(&self) -> RatVector {
        let k = self.terms.first().map_or(0, |(v, _)| v.coords().len());
        let mut acc = vec![Rational::zero(); k];
        for (v, w) in &self.terms {
            for (a, x) in acc.iter_mut().zip(v.coords()) {
                *a += &(w * x);
            }
        }
        acc
    }

    pub fn weight_sum(&self) -> Rational {
        self.terms.iter().map(|(_, w)| w).sum()
    }

    /// Nonnegative weights, unit sum, and exact reproduction of `d`.
    pub fn is_valid_for(&self, d: &[Rational]) -> bool {
        self.terms.iter().all(|(_, w)| !w.is_negative())
            && self.weight_sum() == Rational::one()
            && self.resum() == d
    }
}

/// Writes `d` as a convex combination of at most K+1 vertices.
pub fn decompose(sys: &HalfspaceSystem, d: &[Rational]) -> Result<Decomposition> {
    check_len(sys, d, "point")?;
    let bad = violated_rows(sys, d)?;
    if let Some(&r) = bad.first() {
        return Err(Error::Domain(format!(
            "point {} is outside the region (row {r}, {})",
            fmt_point(d),
            sys.tags()[r]
        )));
    }
    decompose_over(&enumerate_extreme_points(sys), d)
}

/// Same as [`decompose`] with a precomputed vertex list.
pub fn decompose_over(vertices: &[ExtremePoint], d: &[Rational]) -> Result<Decomposition> {
    if let Some(v) = vertices.iter().find(|v| v.coords() == d) {
        return Ok(Decomposition {
            terms: vec![(v.clone(), Rational::one())],
        });
    }
    let cols: Vec<&[Rational]> = vertices.iter().map(|v| v.coords()).collect();
    let lambda = phase_one(&cols, d).ok_or_else(|| {
        Error::Domain(format!("point {} is not in the convex hull", fmt_point(d)))
    })?;
    let terms = lambda
        .into_iter()
        .filter(|(_, w)| w.is_positive())
        .map(|(j, w)| (vertices[j].clone(), w))
        .collect();
    Ok(Decomposition { terms })
}

/// Phase-one simplex for `sum_j l_j c_j = d`, `sum_j l_j = 1`, `l >= 0`
/// with Bland's rule. Returns the basic solution as `(column, value)`
/// pairs, or `None` when infeasible. A basic solution has at most
/// `len(d) + 1` nonzero entries.
fn phase_one(cols: &[&[Rational]], d: &[Rational]) -> Option<Vec<(usize, Rational)>> {
    let n = cols.len();
    let m = d.len() + 1;
    let width = n + m + 1;
    // Tableau rows: constraint rows then the objective row.
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let mut row = vec![Rational::zero(); width];
        for (j, c) in cols.iter().enumerate() {
            row[j] = if i < d.len() {
                c[i].clone()
            } else {
                Rational::one()
            };
        }
        row[n + i] = Rational::one();
        row[width - 1] = if i < d.len() {
            d[i].clone()
        } else {
            Rational::one()
        };
        if row[width - 1].is_negative() {
            for (j, x) in row.iter_mut().enumerate() {
                if j != n + i {
                    *x = -&*x;
                }
            }
        }
        t.push(row);
    }
    let mut obj = vec![Rational::zero(); width];
    for row in &t {
        for j in 0..width {
            if j < n || j == width - 1 {
                obj[j] -= &row[j];
            }
        }
    }
    t.push(obj);
    let mut basis: Vec<usize> = (n..n + m).collect();

    while let Some(enter) = (0..n + m).find(|&j| t[m][j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][width - 1] / &t[i][enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // Phase one is bounded below by zero, so a pivot row always exists.
        let (pr, _) = leave?;
        let piv = t[pr][enter].clone();
        for x in t[pr].iter_mut() {
            *x = &*x / &piv;
        }
        let pivot_row = t[pr].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == pr || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &(&f * p);
            }
        }
        basis[pr] = enter;
    }

    if !t[m][width - 1].is_zero() {
        return None;
    }
    Some(
        basis
            .iter()
            .enumerate()
            .filter(|&(_, &b)| b < n)
            .map(|(i, &b)| (b, t[i][width - 1].clone()))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::{build_system, ChannelFamily, ConstraintTag};

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn ic(k: usize) -> HalfspaceSystem {
        build_system(ChannelFamily::ic(k).unwrap())
    }

    fn mac(k: usize) -> HalfspaceSystem {
        build_system(ChannelFamily::mac(k).unwrap())
    }

    #[test]
    fn membership() {
        let s = ic(4);
        let p = vec![r(3, 5), r(3, 5), r(0, 1), r(0, 1)];
        assert!(!contains(&s, &p).unwrap());
        let bad = violated_rows(&s, &p).unwrap();
        assert!(bad
            .iter()
            .any(|&i| s.tags()[i] == ConstraintTag::Interference(0, 1)));
        assert!(bad.iter().all(|&i| !s.tags()[i].is_secrecy()));
        assert!(!contains(&s, &vec![r(1, 2); 4]).unwrap());
        assert!(contains(&s, &vec![r(0, 1); 4]).unwrap());
        assert!(matches!(
            contains(&s, &vec![r(0, 1); 3]),
            Err(Error::Shape(_))
        ));
    }

    fn pair_rows(s: &HalfspaceSystem) -> Vec<usize> {
        (0..s.len())
            .filter(|&i| s.tags()[i].is_interference())
            .collect()
    }

    #[test]
    fn redundancy_small() {
        for k in [2, 3] {
            let s = ic(k);
            let irr = irredundant_rows(&s).unwrap();
            assert!(pair_rows(&s).iter().all(|p| !irr.contains(p)), "K={k}");
        }
        let s = ic(4);
        let irr = irredundant_rows(&s).unwrap();
        assert!(pair_rows(&s).iter().all(|p| irr.contains(p)));
    }

    #[test]
    fn redundancy_sees_unbounded_deletions() {
        // Dropping -d_1 <= 0 lets d_1 run to minus infinity.
        let s = mac(2);
        assert_eq!(irredundant_rows(&s).unwrap(), [0, 1, 2, 3]);
    }

    #[test]
    fn weighted_sum_examples() {
        let (v, arg) = max_weighted_sum(&mac(3), &vec![r(1, 1); 3]).unwrap();
        assert_eq!(v, r(6, 7));
        assert_eq!(arg.len(), 1);
        assert_eq!(arg[0].coords(), vec![r(2, 7); 3]);
        let (v, arg) = max_weighted_sum(&ic(4), &vec![r(1, 1); 4]).unwrap();
        assert_eq!(v, r(12, 7));
        assert_eq!(arg[0].coords(), vec![r(3, 7); 4]);
        let (v, arg) = max_weighted_sum(&mac(4), &[r(1, 1), r(0, 1), r(0, 1), r(0, 1)]).unwrap();
        assert_eq!(v, r(3, 4));
        assert!(arg
            .iter()
            .any(|p| p.coords() == [r(3, 4), r(0, 1), r(0, 1), r(0, 1)]));
    }

    #[test]
    fn decompose_examples() {
        let s = mac(2);
        let d = vec![r(1, 4), r(1, 4)];
        let dec = decompose(&s, &d).unwrap();
        assert!(dec.is_valid_for(&d));
        assert!(dec.terms.len() <= 3);

        let v = vec![r(1, 3), r(1, 3)];
        let dec = decompose(&s, &v).unwrap();
        assert_eq!(dec.terms.len(), 1);
        assert_eq!(dec.terms[0].1, r(1, 1));

        assert!(matches!(
            decompose(&s, &[r(1, 1), r(0, 1)]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn decompose_half_pair_k5() {
        let s = ic(5);
        let mut d = vec![r(0, 1); 5];
        d[0] = r(1, 2);
        d[1] = r(1, 2);
        let dec = decompose(&s, &d).unwrap();
        assert!(dec.is_valid_for(&d));
        assert!(dec.terms.len() >= 2 && dec.terms.len() <= 6);
    }
}
