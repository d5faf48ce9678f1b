//! Finite-SNR Monte Carlo of cooperative jamming on the K-user MAC
//! wiretap channel: m message users split their messages into K-1
//! sub-messages, every transmitter also sends a jamming symbol, and all
//! jamming aligns into one dimension at the legitimate receiver.
//!
//! Symbols are integers in `-Q..=Q` scaled by the spacing `a`. The receiver
//! decodes every message stream jointly with the aligned jamming sum by
//! nearest point on the one-dimensional received constellation.
//!
//! Seeds: trial `t` draws from `ChaCha8Rng::seed_from_u64(seed)` on stream
//! `t`; random channel gains use stream `u64::MAX` of the same seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Real gains to the legitimate receiver (`h`) and the eavesdropper (`g`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MacChannel {
    pub h: Vec<f64>,
    pub g: Vec<f64>,
}

impl MacChannel {
    pub fn new(h: Vec<f64>, g: Vec<f64>) -> Result<Self> {
        if h.len() != g.len() || h.len() < 2 {
            return Err(Error::Shape(format!(
                "{} receiver gains, {} eavesdropper gains",
                h.len(),
                g.len()
            )));
        }
        if h.iter().chain(&g).any(|x| *x == 0.0 || !x.is_finite()) {
            return Err(Error::Domain(
                "channel gains must be finite and nonzero".into(),
            ));
        }
        Ok(MacChannel { h, g })
    }

    pub fn unit(k: usize) -> Self {
        MacChannel {
            h: vec![1.0; k],
            g: vec![1.0; k],
        }
    }

    /// Gains uniform on `[0.5, 2]`.
    pub fn random<R: Rng>(k: usize, rng: &mut R) -> Self {
        let dist = Uniform::new_inclusive(0.5, 2.0).expect("valid range");
        MacChannel {
            h: (0..k).map(|_| dist.sample(rng)).collect(),
            g: (0..k).map(|_| dist.sample(rng)).collect(),
        }
    }

    /// Channel used by the grid runs for a given seed.
    pub fn from_seed(k: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u64::MAX);
        Self::random(k, &mut rng)
    }

    pub fn users(&self) -> usize {
        self.h.len()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MacSchemeConfig {
    pub k: usize,
    pub m: usize,
    pub p: f64,
    pub delta: f64,
    pub gamma: f64,
    pub q: u32,
    pub a: f64,
    /// Receiver and eavesdropper noise variance; 0 gives a noiseless run.
    pub noise_var: f64,
}

impl MacSchemeConfig {
    /// `Q = floor(P^((1-d)/(2(L+d))))` with `L = m(K-1)+1` (at least 1),
    /// `a = gamma sqrt(P) / Q`, and `gamma` the reciprocal of the largest
    /// per-transmitter coefficient sum so that `|X_i| <= sqrt(P)` always.
    pub fn new(k: usize, m: usize, p: f64, delta: f64, ch: &MacChannel) -> Result<Self> {
        if ch.users() != k {
            return Err(Error::Shape(format!(
                "channel has {} users, K = {k}",
                ch.users()
            )));
        }
        if m < 1 || m > k {
            return Err(Error::Domain(format!("need 1 <= m <= K, got m = {m}")));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::Domain(format!(
                "delta must lie in (0, 1), got {delta}"
            )));
        }
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::Domain(format!("power must be at least 1, got {p}")));
        }
        let l = (m * (k - 1) + 1) as f64;
        let q = p.powf((1.0 - delta) / (2.0 * (l + delta))).floor().max(1.0) as u32;
        let gamma = 1.0
            / transmit_coefficients(ch, m)
                .iter()
                .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
                .fold(0.0, f64::max);
        Ok(MacSchemeConfig {
            k,
            m,
            p,
            delta,
            gamma,
            q,
            a: gamma * p.sqrt() / q as f64,
            noise_var: 1.0,
        })
    }

    pub fn with_noise_var(mut self, v: f64) -> Self {
        self.noise_var = v;
        self
    }

    /// Message streams `(i, j)`, `i < m`, `j != i`, in lexicographic order.
    pub fn streams(&self) -> Vec<(usize, usize)> {
        streams(self.k, self.m)
    }

    /// `m(K-1) log2(2Q+1)`.
    pub fn raw_rate_bits(&self) -> f64 {
        (self.m * (self.k - 1)) as f64 * (2.0 * self.q as f64 + 1.0).log2()
    }
}

fn streams(k: usize, m: usize) -> Vec<(usize, usize)> {
    (0..m)
        .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect()
}

/// Per transmitter, the coefficients on its own symbols: message streams
/// first (in stream order), jamming last.
fn transmit_coefficients(ch: &MacChannel, m: usize) -> Vec<Vec<f64>> {
    let k = ch.users();
    (0..k)
        .map(|i| {
            let mut c: Vec<f64> = if i < m {
                (0..k)
                    .filter(|&j| j != i)
                    .map(|j| ch.g[j] / (ch.h[j] * ch.g[i]))
                    .collect()
            } else {
                Vec::new()
            };
            c.push(1.0 / ch.h[i]);
            c
        })
        .collect()
}

/// Coefficient of stream `(i, j)` at the legitimate receiver,
/// `g_j h_i / (h_j g_i)`.
pub fn receiver_coefficients(ch: &MacChannel, m: usize) -> Vec<f64> {
    streams(ch.users(), m)
        .into_iter()
        .map(|(i, j)| ch.g[j] * ch.h[i] / (ch.h[j] * ch.g[i]))
        .collect()
}

/// Integer symbol indices; actual symbols are `a` times these.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbols {
    /// One entry per message stream, in stream order.
    pub v: Vec<i64>,
    pub u: Vec<i64>,
}

impl Symbols {
    pub fn jamming_sum(&self) -> i64 {
        self.u.iter().sum()
    }
}

/// Channel inputs `X_1..X_K`.
pub fn build_inputs(cfg: &MacSchemeConfig, ch: &MacChannel, sym: &Symbols) -> Result<Vec<f64>> {
    let k = cfg.k;
    if ch.users() != k || sym.u.len() != k || sym.v.len() != cfg.m * (k - 1) {
        return Err(Error::Shape(
            "symbol or channel dimensions do not match the scheme".into(),
        ));
    }
    if ch.h.iter().chain(&ch.g).any(|x| *x == 0.0) {
        return Err(Error::Domain("zero channel gain".into()));
    }
    let q = cfg.q as i64;
    if sym.v.iter().chain(&sym.u).any(|s| s.abs() > q) {
        return Err(Error::Domain(format!("symbol outside -{q}..={q}")));
    }
    let mut x: Vec<f64> = (0..k).map(|i| cfg.a * sym.u[i] as f64 / ch.h[i]).collect();
    for (s, (i, j)) in cfg.streams().into_iter().enumerate() {
        x[i] += ch.g[j] / (ch.h[j] * ch.g[i]) * cfg.a * sym.v[s] as f64;
    }
    Ok(x)
}

/// Noise-free observations `(Y_1, Y_2)`.
pub fn receive(ch: &MacChannel, x: &[f64]) -> (f64, f64) {
    let y1 = ch.h.iter().zip(x).map(|(h, x)| h * x).sum();
    let y2 = ch.g.iter().zip(x).map(|(g, x)| g * x).sum();
    (y1, y2)
}

/// Receiver-side alignment: the message streams with their coefficients
/// plus the jamming symbols summed with unit weight.
pub fn aligned_receiver_signal(cfg: &MacSchemeConfig, ch: &MacChannel, sym: &Symbols) -> f64 {
    let c = receiver_coefficients(ch, cfg.m);
    let msg: f64 = c.iter().zip(&sym.v).map(|(c, v)| c * *v as f64).sum();
    cfg.a * (msg + sym.jamming_sum() as f64)
}

/// Eavesdropper-side alignment: `sum_j (g_j/h_j)(U_j + sum_{i != j} V_ij)`.
pub fn aligned_eavesdropper_signal(cfg: &MacSchemeConfig, ch: &MacChannel, sym: &Symbols) -> f64 {
    let groups = eavesdropper_groups(cfg, sym);
    (0..cfg.k)
        .map(|j| ch.g[j] / ch.h[j] * cfg.a * groups[j] as f64)
        .sum()
}

/// Integer content of each aligned eavesdropper group.
pub fn eavesdropper_groups(cfg: &MacSchemeConfig, sym: &Symbols) -> Vec<i64> {
    let mut groups = sym.u.clone();
    for (s, (_, j)) in cfg.streams().into_iter().enumerate() {
        groups[j] += sym.v[s];
    }
    groups
}

/// Number of distinct integer levels each eavesdropper group can take.
pub fn eavesdropper_group_levels(cfg: &MacSchemeConfig) -> Vec<usize> {
    let q = cfg.q as i64;
    let mut terms = vec![1usize; cfg.k];
    for (_, j) in cfg.streams() {
        terms[j] += 1;
    }
    terms
        .into_iter()
        .map(|t| {
            // Distinct sums of t symbols, each in -Q..=Q.
            let mut levels = std::collections::BTreeSet::from([0i64]);
            for _ in 0..t {
                levels = levels
                    .iter()
                    .flat_map(|l| (-q..=q).map(move |s| l + s))
                    .collect();
            }
            levels.len()
        })
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Decoder {
    /// Scan every candidate point.
    Exhaustive,
    /// Sorted table of candidate points with binary search.
    #[default]
    Table,
}

/// The receiver's joint constellation: every message-symbol vector with
/// every jamming sum in `-KQ..=KQ`, in units of `a`.
pub struct Constellation {
    coeffs: Vec<f64>,
    q: i64,
    jam: i64,
    size: usize,
    sorted: Option<Vec<(f64, u32)>>,
}

/// Guard on the decoding table.
pub const MAX_CONSTELLATION: usize = 50_000_000;

impl Constellation {
    pub fn new(cfg: &MacSchemeConfig, ch: &MacChannel, decoder: Decoder) -> Result<Self> {
        let q = cfg.q as i64;
        let coeffs = receiver_coefficients(ch, cfg.m);
        let base = (2 * q + 1) as u128;
        let jam = cfg.k as i64 * q;
        let size = base.pow(coeffs.len() as u32) * (2 * jam + 1) as u128;
        if size > MAX_CONSTELLATION as u128 {
            return Err(Error::Size {
                what: "receiver constellation".into(),
                required: size,
                limit: MAX_CONSTELLATION as u128,
            });
        }
        let mut c = Constellation {
            coeffs,
            q,
            jam,
            size: size as usize,
            sorted: None,
        };
        if decoder == Decoder::Table {
            let mut table: Vec<(f64, u32)> = (0..c.size).map(|i| (c.value(i), i as u32)).collect();
            table.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
            c.sorted = Some(table);
        }
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// Index layout: message symbols in stream order, most significant
    /// first, then the jamming sum.
    pub fn index_of(&self, v: &[i64], jam_sum: i64) -> usize {
        let base = (2 * self.q + 1) as usize;
        let mut idx = 0usize;
        for s in v {
            idx = idx * base + (s + self.q) as usize;
        }
        idx * (2 * self.jam + 1) as usize + (jam_sum + self.jam) as usize
    }

    pub fn decode_index(&self, mut idx: usize) -> (Vec<i64>, i64) {
        let jw = (2 * self.jam + 1) as usize;
        let jam_sum = (idx % jw) as i64 - self.jam;
        idx /= jw;
        let base = (2 * self.q + 1) as usize;
        let mut v = vec![0i64; self.coeffs.len()];
        for s in v.iter_mut().rev() {
            *s = (idx % base) as i64 - self.q;
            idx /= base;
        }
        (v, jam_sum)
    }

    fn value(&self, idx: usize) -> f64 {
        let (v, s) = self.decode_index(idx);
        self.coeffs
            .iter()
            .zip(&v)
            .map(|(c, v)| c * *v as f64)
            .sum::<f64>()
            + s as f64
    }

    /// Index of the point closest to `y` (in units of `a`); ties go to the
    /// lowest index.
    pub fn nearest(&self, y: f64) -> usize {
        match &self.sorted {
            None => {
                let mut best = (f64::INFINITY, 0usize);
                for i in 0..self.size {
                    let d = (y - self.value(i)).abs();
                    if d < best.0 {
                        best = (d, i);
                    }
                }
                best.1
            }
            Some(t) => {
                let pos = t.partition_point(|(v, _)| *v < y);
                let mut best: Option<(f64, u32)> = None;
                let mut consider = |k: usize| {
                    let (v, i) = t[k];
                    let d = (y - v).abs();
                    if best.is_none_or(|(bd, bi)| d < bd || (d == bd && i < bi)) {
                        best = Some((d, i));
                    }
                };
                // Scan equal-valued runs on both sides so ties resolve by index.
                if pos < t.len() {
                    let v0 = t[pos].0;
                    let mut k = pos;
                    while k < t.len() && t[k].0 == v0 {
                        consider(k);
                        k += 1;
                    }
                }
                if pos > 0 {
                    let v0 = t[pos - 1].0;
                    let mut k = pos;
                    while k > 0 && t[k - 1].0 == v0 {
                        consider(k - 1);
                        k -= 1;
                    }
                }
                best.map_or(0, |(_, i)| i as usize)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimResult {
    pub p: f64,
    pub q: u32,
    pub a: f64,
    pub trials: u64,
    pub errors: u64,
    pub symbol_error_rate: f64,
    pub raw_rate_bits: f64,
    /// `(1 - error_rate) * raw_rate_bits - 1`.
    pub achieved_rate_bits: f64,
    pub leakage_bound_bits: f64,
    /// Largest per-transmitter empirical mean of `X_i^2`.
    pub max_mean_power: f64,
    /// Largest `|X_i|` seen in any trial.
    pub max_amplitude: f64,
}

/// `K log2 K`.
pub fn leakage_bound_bits(k: usize) -> f64 {
    k as f64 * (k as f64).log2()
}

fn draw_symbols(rng: &mut ChaCha8Rng, cfg: &MacSchemeConfig) -> Symbols {
    let q = cfg.q as i64;
    let v = (0..cfg.m * (cfg.k - 1))
        .map(|_| rng.random_range(-q..=q))
        .collect();
    let u = (0..cfg.k).map(|_| rng.random_range(-q..=q)).collect();
    Symbols { v, u }
}

pub fn simulate(
    cfg: &MacSchemeConfig,
    ch: &MacChannel,
    trials: u64,
    seed: u64,
    decoder: Decoder,
) -> Result<SimResult> {
    if trials == 0 {
        return Err(Error::Domain("need at least one trial".into()));
    }
    let cons = Constellation::new(cfg, ch, decoder)?;
    let noise = if cfg.noise_var > 0.0 {
        Some(Normal::new(0.0, cfg.noise_var.sqrt()).map_err(|e| Error::Domain(e.to_string()))?)
    } else {
        None
    };
    let k = cfg.k;
    let per_trial: Vec<(bool, Vec<f64>)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t);
            let sym = draw_symbols(&mut rng, cfg);
            let x = build_inputs(cfg, ch, &sym).expect("symbols drawn in range");
            let (mut y1, _) = receive(ch, &x);
            if let Some(n) = &noise {
                y1 += n.sample(&mut rng);
            }
            let (v_hat, _) = cons.decode_index(cons.nearest(y1 / cfg.a));
            (v_hat != sym.v, x)
        })
        .collect();

    let mut errors = 0u64;
    let mut power = vec![0.0f64; k];
    let mut max_amplitude = 0.0f64;
    for (err, x) in &per_trial {
        errors += u64::from(*err);
        for (acc, xi) in power.iter_mut().zip(x) {
            *acc += xi * xi;
            max_amplitude = max_amplitude.max(xi.abs());
        }
    }
    let rate = errors as f64 / trials as f64;
    let raw = cfg.raw_rate_bits();
    Ok(SimResult {
        p: cfg.p,
        q: cfg.q,
        a: cfg.a,
        trials,
        errors,
        symbol_error_rate: rate,
        raw_rate_bits: raw,
        achieved_rate_bits: (1.0 - rate) * raw - 1.0,
        leakage_bound_bits: leakage_bound_bits(k),
        max_mean_power: power.iter().map(|s| s / trials as f64).fold(0.0, f64::max),
        max_amplitude,
    })
}

/// Runs `simulate` over a power grid on the seed's random channel.
pub fn run_grid(
    k: usize,
    m: usize,
    delta: f64,
    grid: &[f64],
    trials: u64,
    seed: u64,
) -> Result<Vec<SimResult>> {
    let ch = MacChannel::from_seed(k, seed);
    grid.iter()
        .map(|&p| {
            let cfg = MacSchemeConfig::new(k, m, p, delta, &ch)?;
            simulate(&cfg, &ch, trials, seed, Decoder::Table)
        })
        .collect()
}

/// Least-squares slope of achieved rate against `(1/2) log2 P`.
pub fn estimate_dof(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 3 {
        return Err(Error::Domain(format!(
            "need at least 3 grid points, got {}",
            points.len()
        )));
    }
    let xs: Vec<f64> = points.iter().map(|(p, _)| 0.5 * p.log2()).collect();
    let n = points.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = points.iter().map(|(_, r)| r).sum::<f64>() / n;
    let sxy: f64 = xs
        .iter()
        .zip(points)
        .map(|(x, (_, y))| (x - mx) * (y - my))
        .sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain(
            "grid needs at least two distinct powers".into(),
        ));
    }
    Ok(sxy / sxx)
}

/// `m(K-1)(1-d) / (m(K-1)+1+d)`.
pub fn dof_target(k: usize, m: usize, delta: f64) -> f64 {
    let streams = (m * (k - 1)) as f64;
    streams * (1.0 - delta) / (streams + 1.0 + delta)
}
