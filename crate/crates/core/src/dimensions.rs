//! Dimension sets of the asymptotic alignment scheme for the (p+1)-user
//! interference channel with m helpers and N eavesdroppers.
//!
//! A dimension is a monomial in the channel gains, stored as its exponent
//! vector. Exponent vectors are packed into `u128` keys in mixed radix
//! `l+4` with digit `e+1` for exponent `e in -1..=l+2`, so multiplying a
//! set by a gain adds a constant to every key and set relations reduce to
//! merges of sorted key lists. No gain is ever evaluated as a number.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AlignmentParams {
    /// Number of legitimate pairs besides the first.
    pub p: usize,
    /// Number of helpers.
    pub m: usize,
    /// Number of eavesdroppers.
    #[serde(rename = "N")]
    pub n: usize,
    pub l: u64,
    pub delta: f64,
}

impl AlignmentParams {
    pub fn new(p: usize, m: usize, n: usize, l: u64, delta: f64) -> Result<Self> {
        if m < 1 {
            return Err(Error::Domain(
                "the scheme needs at least one helper (m >= 1)".into(),
            ));
        }
        if n < 1 {
            return Err(Error::Domain(
                "need at least one eavesdropper (N >= 1)".into(),
            ));
        }
        if l < 1 {
            return Err(Error::Domain("need l >= 1".into()));
        }
        if !(0.0..1.0).contains(&delta) {
            return Err(Error::Domain(format!(
                "delta must lie in [0, 1), got {delta}"
            )));
        }
        Ok(AlignmentParams { p, m, n, l, delta })
    }

    /// Transmitters: p+1 legitimate, then m helpers.
    pub fn transmitters(&self) -> usize {
        self.p + 1 + self.m
    }

    /// Cross-link pairs `(tx, rx)` (1-based) whose gains span `T_1`:
    /// `(j, 1)` for `j = 2..p+2`, and `(j, k)` for `k = 2..p+1`, `j != k`.
    pub fn cross_links(&self) -> Vec<(usize, usize)> {
        let mut links: Vec<(usize, usize)> = (2..=self.p + 2).map(|j| (j, 1)).collect();
        for j in 1..=self.transmitters() {
            for k in 2..=self.p + 1 {
                if j != k {
                    links.push((j, k));
                }
            }
        }
        links
    }

    /// Number of free exponents in a dimension set:
    /// `|L| + N(p+1+m) = p(p+m) + p + 1 + N(p+1+m)`.
    pub fn theta(&self) -> u32 {
        (self.p * (self.p + self.m) + self.p + 1 + self.n * self.transmitters()) as u32
    }

    /// `|T_j| = l^theta`.
    pub fn t_size(&self) -> u128 {
        big_pow(self.l, self.theta())
    }

    /// `|T~_j| = (l+1)^theta`.
    pub fn t_tilde_size(&self) -> u128 {
        big_pow(self.l + 1, self.theta())
    }

    /// Elements across all `T_j` and `T~_j`.
    pub fn materialized_elements(&self) -> u128 {
        let m = self.m as u128;
        m.saturating_mul(self.t_size())
            .saturating_add(m.saturating_mul(self.t_tilde_size()))
    }
}

fn big_pow(b: u64, e: u32) -> u128 {
    (b as u128).checked_pow(e).unwrap_or(u128::MAX)
}

/// Guard on explicitly built set elements.
pub const MATERIALIZATION_LIMIT: u128 = 10_000_000;

/// A channel gain, 1-based: `H(tx, rx)` to legitimate receiver `rx`,
/// `G(tx, eve)` to eavesdropper `eve`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gain {
    H(usize, usize),
    G(usize, usize),
}

impl fmt::Display for Gain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gain::H(j, k) => write!(f, "h_{{{j},{k}}}"),
            Gain::G(j, k) => write!(f, "g_{{{j},{k}}}"),
        }
    }
}

/// `T_j` or `T~_j`, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SetLabel {
    T(usize),
    TTilde(usize),
}

impl fmt::Display for SetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SetLabel::T(j) => write!(f, "T_{j}"),
            SetLabel::TTilde(j) => write!(f, "T~_{j}"),
        }
    }
}

/// Sorted key list plus a constant shift: `T_j` is `T_1` divided by one
/// gain, so every `T_j` shares the storage of `T_1`.
#[derive(Clone, Debug)]
pub struct DimensionSet {
    pub label: SetLabel,
    base: Arc<Vec<u128>>,
    shift: i128,
}

impl DimensionSet {
    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = u128> + '_ {
        self.base
            .iter()
            .map(move |&k| (k as i128 + self.shift) as u128)
    }
}

/// All `T_j` and `T~_j` for one parameter set.
pub struct DimensionSets {
    params: AlignmentParams,
    radix: u128,
    t: Vec<DimensionSet>,
    t_tilde: Vec<DimensionSet>,
}

impl DimensionSets {
    pub fn params(&self) -> &AlignmentParams {
        &self.params
    }

    pub fn get(&self, label: SetLabel) -> Result<&DimensionSet> {
        let (list, j) = match label {
            SetLabel::T(j) => (&self.t, j),
            SetLabel::TTilde(j) => (&self.t_tilde, j),
        };
        j.checked_sub(1)
            .and_then(|i| list.get(i))
            .ok_or_else(|| Error::Domain(format!("no set {label}")))
    }

    fn position(&self, g: Gain) -> Result<u32> {
        let p = &self.params;
        let tx = p.transmitters();
        let pos = match g {
            Gain::H(j, k) if (1..=tx).contains(&j) && (1..=p.p + 1).contains(&k) => {
                (j - 1) * (p.p + 1) + (k - 1)
            }
            Gain::G(j, k) if (1..=tx).contains(&j) && (1..=p.n).contains(&k) => {
                tx * (p.p + 1) + (k - 1) * tx + (j - 1)
            }
            _ => return Err(Error::Domain(format!("gain {g} is outside the channel"))),
        };
        Ok(pos as u32)
    }

    fn key_delta(&self, g: Option<Gain>) -> Result<i128> {
        match g {
            None => Ok(0),
            Some(g) => Ok(self.radix.pow(self.position(g)?) as i128),
        }
    }

    /// Checks `g * A ⊆ B`; a failure names the relation.
    pub fn check_subset(&self, g: Option<Gain>, a: SetLabel, b: SetLabel) -> Result<()> {
        let (sa, sb) = (self.get(a)?, self.get(b)?);
        let offset = sa.shift + self.key_delta(g)? - sb.shift;
        if merge_subset(&sa.base, offset, &sb.base) {
            Ok(())
        } else {
            Err(Error::Structural(format!(
                "{} is not contained in {b}",
                scaled(g, a)
            )))
        }
    }

    /// Checks `g * A ∩ h * B = ∅`.
    pub fn check_disjoint(
        &self,
        g: Option<Gain>,
        a: SetLabel,
        h: Option<Gain>,
        b: SetLabel,
    ) -> Result<()> {
        let (sa, sb) = (self.get(a)?, self.get(b)?);
        let offset = sa.shift + self.key_delta(g)? - sb.shift - self.key_delta(h)?;
        if merge_disjoint(&sa.base, offset, &sb.base) {
            Ok(())
        } else {
            Err(Error::Structural(format!(
                "{} and {} intersect",
                scaled(g, a),
                scaled(h, b)
            )))
        }
    }
}

fn scaled(g: Option<Gain>, s: SetLabel) -> String {
    match g {
        Some(g) => format!("{g} {s}"),
        None => s.to_string(),
    }
}

/// Every `a + offset` occurs in `b`; both sorted.
fn merge_subset(a: &[u128], offset: i128, b: &[u128]) -> bool {
    let mut j = 0;
    for &x in a {
        let x = x as i128 + offset;
        while j < b.len() && (b[j] as i128) < x {
            j += 1;
        }
        if j == b.len() || b[j] as i128 != x {
            return false;
        }
    }
    true
}

/// No `a + offset` occurs in `b`; both sorted.
fn merge_disjoint(a: &[u128], offset: i128, b: &[u128]) -> bool {
    let mut j = 0;
    for &x in a {
        let x = x as i128 + offset;
        while j < b.len() && (b[j] as i128) < x {
            j += 1;
        }
        if j < b.len() && b[j] as i128 == x {
            return false;
        }
    }
    true
}

/// Keys with exponents `lo..=hi` on `active` positions and 0 elsewhere,
/// in increasing order.
fn generate(radix: u128, symbols: u32, active: &[u32], lo: u64, hi: u64) -> Vec<u128> {
    let mut is_active = vec![false; symbols as usize];
    for &a in active {
        is_active[a as usize] = true;
    }
    // Digit 1 encodes exponent 0.
    let base: u128 = (0..symbols)
        .filter(|&s| !is_active[s as usize])
        .map(|s| radix.pow(s))
        .sum();
    let mut order: Vec<u32> = active.to_vec();
    order.sort_unstable_by(|a, b| b.cmp(a));
    let count = ((hi - lo + 1) as usize).pow(order.len() as u32);
    let mut out = Vec::with_capacity(count);
    fill(radix, &order, lo, hi, base, &mut out);
    out
}

fn fill(radix: u128, order: &[u32], lo: u64, hi: u64, key: u128, out: &mut Vec<u128>) {
    match order.split_first() {
        None => out.push(key),
        Some((&pos, rest)) => {
            let unit = radix.pow(pos);
            for e in lo..=hi {
                fill(radix, rest, lo, hi, key + (e as u128 + 1) * unit, out);
            }
        }
    }
}

/// Builds every `T_j` and `T~_j`. Fails with a size error above the
/// materialization guard.
pub fn build_sets(params: AlignmentParams) -> Result<DimensionSets> {
    let required = params.materialized_elements();
    if required > MATERIALIZATION_LIMIT {
        return Err(Error::Size {
            what: "dimension sets".into(),
            required,
            limit: MATERIALIZATION_LIMIT,
        });
    }
    let tx = params.transmitters();
    let symbols = (tx * (params.p + 1) + tx * params.n) as u32;
    let radix = params.l as u128 + 4;
    // Keys and their shifts must fit in i128.
    let fits = radix
        .checked_pow(symbols)
        .is_some_and(|top| top < (1u128 << 126));
    if !fits {
        return Err(Error::Size {
            what: "exponent-vector key space".into(),
            required: radix.saturating_pow(symbols),
            limit: 1u128 << 126,
        });
    }
    let mut sets = DimensionSets {
        params,
        radix,
        t: Vec::new(),
        t_tilde: Vec::new(),
    };
    let mut active: Vec<u32> = params
        .cross_links()
        .into_iter()
        .map(|(j, k)| sets.position(Gain::H(j, k)))
        .collect::<Result<_>>()?;
    for eve in 1..=params.n {
        for j in 1..=tx {
            active.push(sets.position(Gain::G(j, eve))?);
        }
    }
    debug_assert_eq!(active.len() as u32, params.theta());

    let t1 = Arc::new(generate(radix, symbols, &active, 1, params.l));
    let tt1 = Arc::new(generate(radix, symbols, &active, 1, params.l + 1));
    for j in 1..=params.m {
        // T_j = T_1 / h_{p+1+j,1}: exponent -1 on a gain absent from T_1.
        let shift = if j == 1 {
            0
        } else {
            -(radix.pow(sets.position(Gain::H(params.p + 1 + j, 1))?) as i128)
        };
        sets.t.push(DimensionSet {
            label: SetLabel::T(j),
            base: Arc::clone(&t1),
            shift,
        });
        sets.t_tilde.push(DimensionSet {
            label: SetLabel::TTilde(j),
            base: Arc::clone(&tt1),
            shift,
        });
    }
    Ok(sets)
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditCheck {
    pub relation: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub params: AlignmentParams,
    pub theta: u32,
    pub t_size: u128,
    pub t_tilde_size: u128,
    /// `false` when the sets exceed the materialization guard; sizes below
    /// are then the closed-form values and `checks` is empty.
    pub audited: bool,
    pub note: Option<String>,
    pub checks: Vec<AuditCheck>,
    /// Dimensions at the first receiver.
    pub r1: u128,
    /// Dimensions at each of receivers 2..p+1 (absent when p = 0).
    pub r2: Option<u128>,
    /// Dimensions at each eavesdropper.
    pub rz: u128,
}

/// Verifies every containment and disjointness the scheme relies on at the
/// legitimate receivers and eavesdroppers, and reports receiver dimension
/// counts. The first failing relation is returned as a structural error.
pub fn receiver_dimension_audit(params: AlignmentParams) -> Result<AuditReport> {
    let m = params.m as u128;
    let tt = params.t_tilde_size();
    let mut report = AuditReport {
        params,
        theta: params.theta(),
        t_size: params.t_size(),
        t_tilde_size: tt,
        audited: false,
        note: None,
        checks: Vec::new(),
        r1: (m + 1).saturating_mul(tt),
        r2: (params.p >= 1).then(|| (m + 1).saturating_mul(tt)),
        rz: m.saturating_mul(tt),
    };
    let sets = match build_sets(params) {
        Ok(s) => s,
        Err(Error::Size {
            required, limit, ..
        }) => {
            report.note = Some(format!(
                "not audited: {required} elements exceed the guard of {limit}"
            ));
            return Ok(report);
        }
        Err(e) => return Err(e),
    };

    let p = params.p;
    let mm = params.m;
    let mut checks = Vec::new();
    let mut subset = |g: Option<Gain>, a: SetLabel, b: SetLabel| -> Result<()> {
        sets.check_subset(g, a, b)?;
        checks.push(AuditCheck {
            relation: format!("{} ⊆ {b}", scaled(g, a)),
            holds: true,
        });
        Ok(())
    };
    use SetLabel::{TTilde, T};

    // First receiver: interference falls inside T~_1.
    for j in 2..=p + 1 {
        subset(Some(Gain::H(j, 1)), T(1), TTilde(1))?;
    }
    for k in p + 2..=p + 1 + mm {
        subset(Some(Gain::H(k, 1)), T(k - p - 1), TTilde(1))?;
    }
    for i in 1..=mm {
        subset(None, T(i), TTilde(i))?;
    }
    // Other receivers.
    for k in 2..=p + 1 {
        for i in (1..=p + 2).filter(|&i| i != k) {
            subset(Some(Gain::H(i, k)), T(1), TTilde(1))?;
        }
        for j in 2..=mm {
            subset(Some(Gain::H(1, k)), T(j), TTilde(j))?;
            subset(Some(Gain::H(p + 1 + j, k)), T(j), TTilde(j))?;
        }
    }
    // Eavesdroppers.
    for k in 1..=params.n {
        for i in 1..=p + 2 {
            subset(Some(Gain::G(i, k)), T(1), TTilde(1))?;
        }
        for j in 2..=mm {
            subset(Some(Gain::G(1, k)), T(j), TTilde(j))?;
            subset(Some(Gain::G(p + 1 + j, k)), T(j), TTilde(j))?;
        }
    }

    let mut disjoint = |g: Option<Gain>, a: SetLabel, h: Option<Gain>, b: SetLabel| -> Result<()> {
        sets.check_disjoint(g, a, h, b)?;
        checks.push(AuditCheck {
            relation: format!("{} ∩ {} = ∅", scaled(g, a), scaled(h, b)),
            holds: true,
        });
        Ok(())
    };
    let h11 = Some(Gain::H(1, 1));
    for i in 1..=mm {
        for j in i + 1..=mm {
            disjoint(None, TTilde(i), None, TTilde(j))?;
            disjoint(h11, TTilde(i), h11, TTilde(j))?;
        }
        disjoint(h11, TTilde(i), None, TTilde(1))?;
    }
    for k in 2..=p + 1 {
        for j in 1..=mm {
            disjoint(Some(Gain::H(k, k)), TTilde(1), None, TTilde(j))?;
        }
    }

    // Unions of pairwise-disjoint parts.
    let size = |l: SetLabel| sets.get(l).map(|s| s.len() as u128);
    let tilde_total: u128 = (1..=mm).map(|j| size(TTilde(j))).sum::<Result<u128>>()?;
    report.r1 = tilde_total + size(TTilde(1))?;
    report.r2 = (p >= 1).then_some(tilde_total + size(TTilde(1))?);
    report.rz = tilde_total;
    report.audited = true;
    report.checks = checks;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowerBound {
    /// Bound for the first user.
    pub d1: f64,
    /// Bound for each of users 2..p+1.
    pub d_others: Vec<f64>,
    pub xi: f64,
    pub xi_other: f64,
}

/// Achievable s.d.o.f. lower bounds for finite `l` and `delta`:
/// `d_1 = m(1-d) / ((m+1)(1+1/l)^theta + d/l^theta) - xi` with
/// `xi = m[(l+1)^theta - l^theta](1-d) / ((m+1)(l+1)^theta + d)`, and the
/// single-stream version (numerator without `m`) for users 2..p+1.
/// Powers are formed in log space so large `l` and `theta` stay finite.
pub fn sdof_lower_bound(params: &AlignmentParams) -> LowerBound {
    let th = params.theta() as f64;
    let l = params.l as f64;
    let m = params.m as f64;
    let d = params.delta;
    let grow = (th * (1.0 / l).ln_1p()).exp(); // (1 + 1/l)^theta
    let denom = (m + 1.0) * grow + d * (-th * l.ln()).exp();
    // (l+1)^theta - l^theta over (l+1)^theta, without cancellation.
    let gap = -(-th * (1.0 / l).ln_1p()).exp_m1();
    let xi_unit = gap * (1.0 - d) / ((m + 1.0) + d * (-th * (l + 1.0).ln()).exp());
    let xi = m * xi_unit;
    let single = (1.0 - d) / denom - xi_unit;
    LowerBound {
        d1: m * (1.0 - d) / denom - xi,
        d_others: vec![single; params.p],
        xi,
        xi_other: xi_unit,
    }
}

/// The `l -> infinity`, `delta -> 0` limit `(m/(m+1), 1/(m+1) x p)`.
pub fn limit_tuple(p: usize, m: usize) -> Vec<Rational> {
    let m = m as i64;
    let mut v = vec![Rational::new(m, m + 1)];
    v.extend(std::iter::repeat_n(Rational::new(1, m + 1), p));
    v
}
