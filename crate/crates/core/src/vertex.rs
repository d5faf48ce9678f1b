//! Extreme points of a half-space system.
//!
//! The enumerator visits every K-subset of rows, solves the square system,
//! and keeps feasible solutions. Square solves run in checked `i128`
//! Bareiss arithmetic on integer-scaled rows and fall back to big rationals
//! when that overflows, so results are exact either way.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{
    rank, solve, solve_square_i128, IntSolution, RatMatrix, RatVector, Rational,
};
use crate::region::{build_system, ChannelFamily, ConstraintTag, FamilyKind, HalfspaceSystem};

/// A vertex together with its tight rows and one rank-K basis among them.
///
/// Equality, ordering and hashing look at the coordinates only.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtremePoint {
    coords: RatVector,
    active_set: Vec<usize>,
    witness: Vec<usize>,
}

impl PartialEq for ExtremePoint {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl Eq for ExtremePoint {}

impl PartialOrd for ExtremePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtremePoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coords.cmp(&other.coords)
    }
}

impl std::hash::Hash for ExtremePoint {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl ExtremePoint {
    /// Validates that `coords` is a vertex of `sys` and records its active
    /// set. The witness is the lexicographically smallest rank-K subset of
    /// the active set (greedy basis in row order).
    pub fn at(sys: &HalfspaceSystem, coords: RatVector) -> Result<Self> {
        if coords.len() != sys.dim() {
            return Err(Error::Shape(format!(
                "point has {} coordinates, system has K = {}",
                coords.len(),
                sys.dim()
            )));
        }
        let mut active_set = Vec::new();
        for r in 0..sys.len() {
            match sys.lhs(r, &coords).cmp(&sys.rhs()[r]) {
                Ordering::Greater => {
                    return Err(Error::Contract(format!(
                        "point {} violates row {r} ({})",
                        fmt_point(&coords),
                        sys.tags()[r]
                    )))
                }
                Ordering::Equal => active_set.push(r),
                Ordering::Less => {}
            }
        }
        let k = sys.dim();
        let mut witness: Vec<usize> = Vec::with_capacity(k);
        for &r in &active_set {
            if witness.len() == k {
                break;
            }
            witness.push(r);
            if rank(&sys.matrix().select_rows(&witness)) < witness.len() {
                witness.pop();
            }
        }
        if witness.len() < k {
            return Err(Error::Contract(format!(
                "point {} has only {} independent tight rows, need {k}",
                fmt_point(&coords),
                witness.len()
            )));
        }
        Ok(ExtremePoint {
            coords,
            active_set,
            witness,
        })
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn active_set(&self) -> &[usize] {
        &self.active_set
    }

    pub fn witness(&self) -> &[usize] {
        &self.witness
    }

    pub fn partition(&self, sys: &HalfspaceSystem) -> ActivePartition {
        ActivePartition::of(sys, &self.active_set)
    }
}

/// `(a, b, c)` with `p/q` entries.
pub fn fmt_point(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(Rational::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Tight rows split by constraint class. Each list holds row indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ActivePartition {
    pub s: Vec<usize>,
    pub p: Vec<usize>,
    pub z: Vec<usize>,
}

impl ActivePartition {
    pub fn of(sys: &HalfspaceSystem, active: &[usize]) -> Self {
        let mut part = ActivePartition::default();
        for &r in active {
            match sys.tags()[r] {
                ConstraintTag::Secrecy(_) => part.s.push(r),
                ConstraintTag::Interference(..) => part.p.push(r),
                ConstraintTag::Nonnegativity(_) => part.z.push(r),
            }
        }
        part
    }

    /// Users whose secrecy row is tight.
    pub fn secrecy_users(&self, sys: &HalfspaceSystem) -> Vec<usize> {
        self.s
            .iter()
            .filter_map(|&r| match sys.tags()[r] {
                ConstraintTag::Secrecy(i) => Some(i),
                _ => None,
            })
            .collect()
    }

    /// Tight interference pairs.
    pub fn pairs(&self, sys: &HalfspaceSystem) -> Vec<(usize, usize)> {
        self.p
            .iter()
            .filter_map(|&r| match sys.tags()[r] {
                ConstraintTag::Interference(i, j) => Some((i, j)),
                _ => None,
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Method {
    /// Every K-subset of rows.
    #[default]
    Brute,
    /// Skips subsets that provably give infeasible points on the two
    /// built-in families; same output as `Brute`.
    Pruned,
}

/// Rows scaled to integers, for the `i128` fast path.
pub(crate) struct IntSystem {
    rows: Vec<Vec<i64>>,
    rhs: Vec<i64>,
}

impl IntSystem {
    pub(crate) fn new(sys: &HalfspaceSystem) -> Option<Self> {
        let mut rows = Vec::with_capacity(sys.len());
        let mut rhs = Vec::with_capacity(sys.len());
        for r in 0..sys.len() {
            let entries: Vec<&Rational> = sys.row(r).iter().chain([&sys.rhs()[r]]).collect();
            let lcm = entries
                .iter()
                .fold(num_bigint::BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let mut scaled = entries
                .iter()
                .map(|x| (x.numer() * (&lcm / x.denom())).to_i64())
                .collect::<Option<Vec<i64>>>()?;
            rhs.push(scaled.pop()?);
            rows.push(scaled);
        }
        Some(IntSystem { rows, rhs })
    }
}

/// A candidate point, integer form `numerators / denom` when available.
pub(crate) enum Candidate {
    Int(IntSolution),
    Rat(RatVector),
}

impl Candidate {
    pub(crate) fn into_rational(self) -> RatVector {
        match self {
            Candidate::Int(s) => s
                .numerators
                .iter()
                .map(|&y| Rational::from_i128_ratio(y, s.denom))
                .collect(),
            Candidate::Rat(v) => v,
        }
    }

    fn negated(&self) -> Candidate {
        match self {
            Candidate::Int(s) => match s.numerators.iter().map(|y| y.checked_neg()).collect() {
                Some(numerators) => Candidate::Int(IntSolution {
                    numerators,
                    denom: s.denom,
                }),
                None => Candidate::Rat(
                    Candidate::Int(s.clone())
                        .into_rational()
                        .into_iter()
                        .map(|x| -x)
                        .collect(),
                ),
            },
            Candidate::Rat(v) => Candidate::Rat(v.iter().map(|x| -x).collect()),
        }
    }
}

/// Shared machinery for subset scans over one system.
pub(crate) struct Scanner<'a> {
    pub sys: &'a HalfspaceSystem,
    int: Option<IntSystem>,
}

impl<'a> Scanner<'a> {
    pub(crate) fn new(sys: &'a HalfspaceSystem) -> Self {
        Scanner {
            sys,
            int: IntSystem::new(sys),
        }
    }

    /// Unique solution of `H_J d = h_J`, if `J` has full rank.
    pub(crate) fn solve_subset(&self, subset: &[usize]) -> Option<Candidate> {
        if let Some(int) = &self.int {
            let a: Vec<&[i64]> = subset.iter().map(|&r| int.rows[r].as_slice()).collect();
            let b: Vec<i64> = subset.iter().map(|&r| int.rhs[r]).collect();
            match solve_square_i128(&a, &b) {
                Some(Some(sol)) => return Some(Candidate::Int(sol)),
                Some(None) => return None,
                None => {}
            }
        }
        let a = self.sys.matrix().select_rows(subset);
        let b: Vec<Rational> = subset.iter().map(|&r| self.sys.rhs()[r].clone()).collect();
        solve(&a, &b).ok()?.ok().map(Candidate::Rat)
    }

    /// Direction spanning the null space of `H_J` for a `(K-1)`-subset of
    /// rank `K-1`, in either sign.
    pub(crate) fn null_direction(&self, subset: &[usize]) -> Option<[Candidate; 2]> {
        let k = self.sys.dim();
        for c in 0..k {
            let unit: Vec<i64> = (0..k).map(|j| i64::from(j == c)).collect();
            let found = match &self.int {
                Some(int) => {
                    let mut a: Vec<&[i64]> =
                        subset.iter().map(|&r| int.rows[r].as_slice()).collect();
                    a.push(&unit);
                    let mut b = vec![0i64; subset.len()];
                    b.push(1);
                    match solve_square_i128(&a, &b) {
                        Some(Some(sol)) => Some(Candidate::Int(sol)),
                        Some(None) => None,
                        None => self.null_direction_rat(subset, &unit),
                    }
                }
                None => self.null_direction_rat(subset, &unit),
            };
            if let Some(dir) = found {
                let neg = dir.negated();
                return Some([dir, neg]);
            }
        }
        None
    }

    fn null_direction_rat(&self, subset: &[usize], unit: &[i64]) -> Option<Candidate> {
        let mut rows: Vec<Vec<Rational>> =
            subset.iter().map(|&r| self.sys.row(r).to_vec()).collect();
        rows.push(unit.iter().map(|&x| Rational::from(x)).collect());
        let a = RatMatrix::from_rows(rows).ok()?;
        let mut b = vec![Rational::zero(); subset.len()];
        b.push(Rational::one());
        solve(&a, &b).ok()?.ok().map(Candidate::Rat)
    }

    /// Compares `H_r x` with `h_r`, or with 0 when `homogeneous`.
    pub(crate) fn row_cmp(&self, r: usize, x: &Candidate, homogeneous: bool) -> Ordering {
        if let (Some(int), Candidate::Int(s)) = (&self.int, x) {
            let lhs = int.rows[r]
                .iter()
                .zip(&s.numerators)
                .try_fold(0i128, |acc, (&h, &y)| {
                    acc.checked_add((h as i128).checked_mul(y)?)
                });
            let rhs = if homogeneous {
                Some(0)
            } else {
                (int.rhs[r] as i128).checked_mul(s.denom)
            };
            if let (Some(l), Some(rh)) = (lhs, rhs) {
                return l.cmp(&rh);
            }
        }
        let v = match x {
            Candidate::Int(s) => Candidate::Int(s.clone()).into_rational(),
            Candidate::Rat(v) => v.clone(),
        };
        let rhs = if homogeneous {
            Rational::zero()
        } else {
            self.sys.rhs()[r].clone()
        };
        self.sys.lhs(r, &v).cmp(&rhs)
    }

    pub(crate) fn feasible(&self, x: &Candidate) -> bool {
        (0..self.sys.len()).all(|r| self.row_cmp(r, x, false) != Ordering::Greater)
    }
}

/// Visits every `size`-subset of `0..n` in parallel, skipping any branch
/// where `conflict(chosen, next)` holds. Results come back in
/// lexicographic subset order regardless of scheduling.
pub(crate) fn par_scan<T, F, C>(n: usize, size: usize, conflict: C, visit: F) -> Vec<T>
where
    T: Send,
    F: Fn(&[usize]) -> Option<T> + Sync,
    C: Fn(&[usize], usize) -> bool + Sync,
{
    if size == 0 {
        return visit(&[]).into_iter().collect();
    }
    if size > n {
        return Vec::new();
    }
    (0..=n - size)
        .into_par_iter()
        .map(|first| {
            let mut out = Vec::new();
            let mut chosen = Vec::with_capacity(size);
            chosen.push(first);
            descend(n, size, &mut chosen, &conflict, &visit, &mut out);
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn descend<T, F, C>(
    n: usize,
    size: usize,
    chosen: &mut Vec<usize>,
    conflict: &C,
    visit: &F,
    out: &mut Vec<T>,
) where
    F: Fn(&[usize]) -> Option<T>,
    C: Fn(&[usize], usize) -> bool,
{
    if chosen.len() == size {
        out.extend(visit(chosen));
        return;
    }
    let start = chosen.last().map_or(0, |&l| l + 1);
    let remaining = size - chosen.len();
    for next in start..=n - remaining {
        if conflict(chosen, next) {
            continue;
        }
        chosen.push(next);
        descend(n, size, chosen, conflict, visit, out);
        chosen.pop();
    }
}

/// Row pairs that cannot be simultaneously tight at a feasible point of a
/// built-in family: `s_i` with `z_i` (the remaining coordinates would have
/// to sum past the region's bound), and, for IC, `p_{ij}` with `z_i` or
/// `z_j` (forces the other coordinate to 1 > (K-1)/K).
fn incompatible(tags: &[ConstraintTag], a: usize, b: usize) -> bool {
    use ConstraintTag::*;
    let clash = |x: ConstraintTag, y: ConstraintTag| match (x, y) {
        (Secrecy(i), Nonnegativity(j)) => i == j,
        (Interference(i, j), Nonnegativity(l)) => l == i || l == j,
        _ => false,
    };
    clash(tags[a], tags[b]) || clash(tags[b], tags[a])
}

pub fn enumerate_extreme_points(sys: &HalfspaceSystem) -> Vec<ExtremePoint> {
    enumerate_with(sys, Method::Brute)
}

/// Sorted, duplicate-free vertex list.
pub fn enumerate_with(sys: &HalfspaceSystem, method: Method) -> Vec<ExtremePoint> {
    let k = sys.dim();
    let n = sys.len();
    let scanner = Scanner::new(sys);
    // The pruning rules rely on the full built-in system being present.
    let prune = method == Method::Pruned && *sys == build_system(sys.family());
    let tags = sys.tags();
    let cap = Rational::new(k as i64 - 1, k as i64);

    let conflict = |chosen: &[usize], next: usize| {
        prune && chosen.iter().any(|&c| incompatible(tags, c, next))
    };
    let visit = |subset: &[usize]| {
        let cand = scanner.solve_subset(subset)?;
        if prune && exceeds_cap(&cand, &cap) {
            return None;
        }
        scanner.feasible(&cand).then(|| cand.into_rational())
    };
    let found: BTreeSet<RatVector> = par_scan(n, k, conflict, visit).into_iter().collect();
    found
        .into_iter()
        .map(|c| ExtremePoint::at(sys, c).expect("enumerated point is a vertex"))
        .collect()
}

fn exceeds_cap(cand: &Candidate, cap: &Rational) -> bool {
    match cand {
        Candidate::Int(s) => {
            // y / D > (K-1)/K  <=>  K y > (K-1) D
            let (num, den) = (cap.numer().to_i128(), cap.denom().to_i128());
            match (num, den) {
                (Some(num), Some(den)) => s.numerators.iter().any(|&y| {
                    match (y.checked_mul(den), s.denom.checked_mul(num)) {
                        (Some(l), Some(r)) => l > r,
                        _ => Rational::from_i128_ratio(y, s.denom) > *cap,
                    }
                }),
                _ => false,
            }
        }
        Candidate::Rat(v) => v.iter().any(|x| x > cap),
    }
}

/// Next lexicographic permutation in place; `false` after the last one.
fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All distinct orderings of a multiset.
pub fn distinct_permutations(mut v: Vec<Rational>) -> Vec<RatVector> {
    v.sort();
    let mut out = vec![v.clone()];
    while next_permutation(&mut v) {
        out.push(v.clone());
    }
    out
}

fn padded(k: usize, head: Vec<Rational>) -> Vec<Rational> {
    let mut v = head;
    v.resize(k, Rational::zero());
    v
}

fn finish(sys: &HalfspaceSystem, patterns: Vec<Vec<Rational>>) -> Result<Vec<ExtremePoint>> {
    let all: BTreeSet<RatVector> = patterns
        .into_iter()
        .flat_map(distinct_permutations)
        .collect();
    all.into_iter()
        .map(|c| {
            ExtremePoint::at(sys, c)
                .map_err(|e| Error::Structural(format!("closed-form point rejected: {e}")))
        })
        .collect()
}

/// MAC vertices: for m = 0..K, every ordering of m copies of
/// (K-1)/(m(K-1)+1) padded with zeros.
pub fn mac_closed_form(k: usize) -> Result<Vec<ExtremePoint>> {
    let fam = ChannelFamily::mac(k)?;
    finish(&build_system(fam), mac_patterns(k))
}

fn mac_patterns(k: usize) -> Vec<Vec<Rational>> {
    let ki = k as i64;
    (0..=k)
        .map(|m| {
            let delta = Rational::new(ki - 1, m as i64 * (ki - 1) + 1);
            padded(k, vec![delta; m])
        })
        .collect()
}

/// IC vertices. K = 2 coincides with the two-user MAC region; from K = 3
/// on there are four shapes: zero, `((K-1-p)/(K-p), 1/(K-p) x p)` for
/// p = 0..K-2, `1/2 x p'` for p' = 3..K-2, and the symmetric point.
pub fn ic_closed_form(k: usize) -> Result<Vec<ExtremePoint>> {
    let fam = ChannelFamily::ic(k)?;
    let sys = build_system(fam);
    if k == 2 {
        return finish(&sys, mac_patterns(2));
    }
    let ki = k as i64;
    let mut patterns = vec![padded(k, vec![])];
    for p in 0..=k - 2 {
        let pi = p as i64;
        let mut head = vec![Rational::new(ki - 1 - pi, ki - pi)];
        head.extend(std::iter::repeat_n(Rational::new(1, ki - pi), p));
        patterns.push(padded(k, head));
    }
    for halves in 3..=k.saturating_sub(2) {
        patterns.push(padded(k, vec![Rational::new(1, 2); halves]));
    }
    patterns.push(vec![fam.symmetric_value(); k]);
    finish(&sys, patterns)
}

/// One named check of a vertex property.
#[derive(Clone, Debug, Serialize)]
pub struct PropertyCheck {
    pub name: &'static str,
    /// `false` when the premise does not hold; such checks pass vacuously.
    pub applicable: bool,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    pub coords: RatVector,
    pub partition: ActivePartition,
    pub checks: Vec<PropertyCheck>,
}

impl PropertyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&PropertyCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn get(&self, name: &str) -> Option<&PropertyCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn sub_rank(sys: &HalfspaceSystem, rows: &[usize]) -> usize {
    if rows.is_empty() {
        0
    } else {
        rank(&sys.matrix().select_rows(rows))
    }
}

/// Structural checks on a vertex of the IC region: coordinate bounds, the
/// shape of the tight secrecy set, and the rank of the tight secrecy and
/// interference rows.
pub fn check_vertex_properties(pt: &ExtremePoint, sys: &HalfspaceSystem) -> Result<PropertyReport> {
    if sys.family().kind() != FamilyKind::Ic {
        return Err(Error::Contract(
            "vertex properties are defined for the IC region".into(),
        ));
    }
    // Re-derive the active set so a stale or forged point cannot slip in.
    let pt = ExtremePoint::at(sys, pt.coords.clone())?;
    let k = sys.dim();
    let d = &pt.coords;
    let half = Rational::new(1, 2);
    let max = d.iter().max().cloned().unwrap_or_default();
    let part = pt.partition(sys);
    let s_users = part.secrecy_users(sys);
    let pairs = part.pairs(sys);
    let z_count = part.z.len();
    let mut checks = Vec::new();
    let mut push = |name, applicable, passed, detail: String| {
        checks.push(PropertyCheck {
            name,
            applicable,
            passed,
            detail,
        })
    };

    let cap = Rational::new(k as i64 - 1, k as i64);
    push(
        "max_bound",
        true,
        max <= cap,
        format!("max = {max}, bound = {cap}"),
    );

    let above_half = d.iter().filter(|x| **x > half).count();
    push(
        "single_above_half",
        true,
        above_half <= 1,
        format!("{above_half} coordinates above 1/2"),
    );

    let has_half = d.contains(&half);
    push(
        "half_caps_all",
        has_half,
        !has_half || d.iter().all(|x| *x <= half),
        format!("some coordinate equals 1/2: {has_half}"),
    );

    let multi_s = s_users.len() >= 2;
    let s_vals: Vec<&Rational> = s_users.iter().map(|&i| &d[i]).collect();
    let s_equal = s_vals.windows(2).all(|w| w[0] == w[1]);
    let s_ok = s_vals.iter().all(|x| x.is_positive() && **x <= half);
    push(
        "tight_secrecy_equal",
        multi_s,
        !multi_s || (s_equal && s_ok),
        format!("|S| = {}", s_users.len()),
    );

    let s_at_max = s_users.iter().all(|&i| d[i] == max);
    let max_in_s = s_users.is_empty()
        || (0..k)
            .filter(|&i| d[i] == max)
            .all(|i| s_users.contains(&i));
    push(
        "secrecy_iff_max",
        true,
        s_at_max && max_in_s,
        format!("S users {:?}, max = {max}", one_based(&s_users)),
    );

    let big = max > half;
    push(
        "large_max_single_secrecy",
        big,
        !big || s_users.len() <= 1,
        format!("max = {max}, |S| = {}", s_users.len()),
    );

    let sp: Vec<usize> = part.s.iter().chain(&part.p).copied().collect();
    let rank_sp = sub_rank(sys, &sp);
    push(
        "rank_cover",
        true,
        rank_sp + z_count >= k,
        format!("rank(H_SP) = {rank_sp}, |Z| = {z_count}, K = {k}"),
    );

    let with_pairs = !pairs.is_empty();
    let s_flag = usize::from(!s_users.is_empty());

    let large_applies = with_pairs && big;
    let large_ok = !large_applies || {
        let argmax: Vec<usize> = (0..k).filter(|&i| d[i] == max).collect();
        argmax.len() == 1 && {
            let istar = argmax[0];
            let partner = Rational::one() - &d[istar];
            let u: Vec<usize> = (0..k)
                .filter(|&j| d[j] == partner && d[j].is_positive())
                .collect();
            let expected: BTreeSet<(usize, usize)> =
                u.iter().map(|&j| (istar.min(j), istar.max(j))).collect();
            let actual: BTreeSet<(usize, usize)> = pairs.iter().copied().collect();
            max <= cap
                && u.len() == pairs.len()
                && expected == actual
                && (s_users.is_empty() || s_users == [istar])
                && rank_sp == pairs.len() + s_flag
        }
    };
    push(
        "large_max_shape",
        large_applies,
        large_ok,
        format!(
            "|P| = {}, |S| = {}, rank(H_SP) = {rank_sp}",
            pairs.len(),
            s_users.len()
        ),
    );

    let half_applies = with_pairs && !big;
    let half_ok = !half_applies || {
        let u: Vec<usize> = (0..k).filter(|&i| d[i] == half).collect();
        let m = u.len();
        let expected: BTreeSet<(usize, usize)> = u
            .iter()
            .flat_map(|&i| u.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
            .collect();
        let actual: BTreeSet<(usize, usize)> = pairs.iter().copied().collect();
        let rank_p = sub_rank(sys, &part.p);
        let want_rank_p = if pairs.len() > 1 { m } else { 1 };
        let want_rank_sp = if pairs.len() == 1 && s_users.is_empty() {
            1
        } else {
            m + s_flag
        };
        (2..k).contains(&m)
            && expected == actual
            && rank_p == want_rank_p
            && (s_users.is_empty() || s_users == u)
            && rank_sp == want_rank_sp
    };
    push(
        "half_max_shape",
        half_applies,
        half_ok,
        format!(
            "|P| = {}, |S| = {}, rank(H_SP) = {rank_sp}",
            pairs.len(),
            s_users.len()
        ),
    );

    Ok(PropertyReport {
        coords: d.clone(),
        partition: part,
        checks,
    })
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}
