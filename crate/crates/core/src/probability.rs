//! Probabilities of the rectangle events near the origin.
//!
//! * `C_k`: some horizontal rectangle of scale `k` has its centre near the
//!   origin. The closed form uses the index box `1 ≤ l, m ≤ ⌊δT_k⌋`; the
//!   geometric event uses Euclidean distance `≤ ⌊δT_k⌋`.
//! * `D_k`: the closest such rectangle is complete.
//! * `B_k`: some such rectangle is complete.
//!
//! The closed forms are one-sided bounds; Monte Carlo estimates are only
//! ever checked against them from one side.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::environment::{raw_bernoulli, truncation_bound, EnvError, EnvParams, Orientation, Rectangle};
use crate::geometry::Window;
use crate::rng::derive_seed;

/// `⌊δT_k⌋`.
pub fn search_radius(k: u32, delta: f64) -> u64 {
    (delta * EnvParams::t_k(k)).floor().max(0.0) as u64
}

/// `1 - (1 - T_k^{-2})^{⌊δT_k⌋²}`.
pub fn p_ck_lower(k: u32, delta: f64) -> f64 {
    let n = search_radius(k, delta) as f64;
    let p = (-2.0 * k as f64).exp2();
    -(n * n * (-p).ln_1p()).exp_m1()
}

/// `∏_{k ≤ k' ≤ k_max} (1 - T_{k'}^{-2})^{(λT_{k'}+μ+2)(λT_k+μ+2)}` times the
/// tail bound `exp(-2 Σ_{k' > k_max} (λT_{k'}+μ+2)(λT_k+μ+2) T_{k'}^{-2})`,
/// valid since `-ln(1 - x) ≤ 2x` for `x ≤ 1/2`.
pub fn p_dk_given_ck_lower(k: u32, params: &EnvParams) -> f64 {
    let (lambda, mu) = (params.lambda, params.mu);
    let a = lambda * EnvParams::t_k(k) + mu + 2.0;
    let mut log = 0.0;
    for kk in k..=params.k_max {
        let t = EnvParams::t_k(kk);
        log += (lambda * t + mu + 2.0) * a * (-1.0 / (t * t)).ln_1p();
    }
    // Σ_{k' > K} 1/T_{k'} = 2^{-K}, Σ_{k' > K} 1/T_{k'}² = 4^{-K}/3
    let last = params.k_max.max(k - 1) as f64;
    let tail = a * (lambda * (-last).exp2() + (mu + 2.0) * (-2.0 * last).exp2() / 3.0);
    (log - 2.0 * tail).exp()
}

/// `(1 - e^{-δ²}) e^{-2λ²}`.
pub fn liminf_lower(delta: f64, lambda: f64) -> f64 {
    -(-delta * delta).exp_m1() * (-2.0 * lambda * lambda).exp()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventQuery {
    pub k: u32,
    pub delta: f64,
    /// Environment constants; `params.seed` is the base of the per-trial seeds.
    pub params: EnvParams,
    pub trials: u64,
    /// Required gap `k_max - k`.
    pub margin: u32,
}

impl EventQuery {
    pub const DEFAULT_MARGIN: u32 = 6;

    pub fn new(k: u32, delta: f64, params: EnvParams, trials: u64) -> Self {
        Self { k, delta, params, trials, margin: Self::DEFAULT_MARGIN }
    }

    pub fn validate(&self) -> Result<(), EnvError> {
        let bad = |m: String| Err(EnvError::InvalidParams(m));
        if self.trials < 1 {
            return bad("trials must be at least 1".into());
        }
        if self.k < 1 {
            return bad("k must be at least 1".into());
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return bad(format!("delta must be nonnegative, got {}", self.delta));
        }
        if self.params.k_max < self.k + self.margin {
            return bad(format!("k_max = {} is below k + margin = {}", self.params.k_max, self.k + self.margin));
        }
        EnvParams { delta: self.delta.max(f64::MIN_POSITIVE), ..self.params }.validate_geometry()
    }

    /// Box containing every rectangle that can decide the events.
    pub fn window(&self) -> Window {
        let r = search_radius(self.k, self.delta) as f64;
        let half_len = self.params.length(self.k) / 2.0;
        let half_wid = self.params.width() / 2.0;
        Window::new([-r - half_len, -r - half_wid], [r + half_len, r + half_wid])
    }
}

/// Frequency of one event with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frequency {
    pub hits: u64,
    pub trials: u64,
}

impl Frequency {
    pub fn value(&self) -> f64 {
        self.hits as f64 / self.trials as f64
    }

    pub fn standard_error(&self) -> f64 {
        let p = self.value();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    /// `estimate ≥ p - z·SE`, with the standard error taken at `p` so that
    /// a run with no hits is judged against the bound's own spread.
    pub fn at_least(&self, p: f64, z: f64) -> bool {
        let se = (p * (1.0 - p) / self.trials as f64).sqrt();
        self.value() >= p - z * se
    }

    /// `|estimate - p| ≤ z·SE`, with the standard error taken at `p`.
    pub fn agrees_with(&self, p: f64, z: f64) -> bool {
        let se = (p * (1.0 - p) / self.trials as f64).sqrt();
        (self.value() - p).abs() <= z * se
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    /// `C_k` on the index box of [`p_ck_lower`]; its exact probability is
    /// `p_ck_lower`.
    pub c_box: Frequency,
    /// `C_k` with Euclidean distance.
    pub c_geometric: Frequency,
    /// `C_k` and the closest centre is complete.
    pub c_and_d: Frequency,
    pub b_k: Frequency,
    /// Probability bound for scales above `k_max` meeting the window.
    pub truncation_bound: f64,
}

#[derive(Default, Clone, Copy)]
struct Hits {
    c_box: u64,
    c_geometric: u64,
    c_and_d: u64,
    b_k: u64,
}

impl std::ops::Add for Hits {
    type Output = Hits;

    fn add(self, o: Hits) -> Hits {
        Hits {
            c_box: self.c_box + o.c_box,
            c_geometric: self.c_geometric + o.c_geometric,
            c_and_d: self.c_and_d + o.c_and_d,
            b_k: self.b_k + o.b_k,
        }
    }
}

/// Whether some vertical rectangle of scale `≥ k` crosses `r`. Only the
/// lattice sites that can reach `r` are drawn.
fn crossed(params: &EnvParams, seed: u64, r: &Rectangle) -> bool {
    let (rl, rm) = r.center();
    let (ax, ay) = r.half_extents();
    (r.k()..=params.k_max).any(|kk| {
        let probe = Rectangle::new(Orientation::Vertical, kk, (0, 0), params);
        let (bx, by) = probe.half_extents();
        let (dl, dm) = ((ax + bx).ceil() as i64, (ay + by).ceil() as i64);
        (rl - dl..=rl + dl).any(|l| {
            (rm - dm..=rm + dm).any(|m| {
                raw_bernoulli(seed, Orientation::Vertical, kk, l, m)
                    && Rectangle::new(Orientation::Vertical, kk, (l, m), params).intersects(r)
            })
        })
    })
}

fn one_trial(query: &EventQuery, seed: u64) -> Hits {
    let k = query.k;
    let n = search_radius(k, query.delta) as i64;
    let mut hits = Hits::default();
    let in_box = (1..=n).any(|l| (1..=n).any(|m| raw_bernoulli(seed, Orientation::Horizontal, k, l, m)));
    hits.c_box = in_box as u64;

    let params = &query.params;
    let mut candidates: Vec<Rectangle> = Vec::new();
    for l in -n..=n {
        for m in -n..=n {
            if l * l + m * m <= n * n && raw_bernoulli(seed, Orientation::Horizontal, k, l, m) {
                candidates.push(Rectangle::new(Orientation::Horizontal, k, (l, m), params));
            }
        }
    }
    candidates.sort_by_key(|r| {
        let (l, m) = r.center();
        (l * l + m * m, r.key())
    });
    if let Some(closest) = candidates.first() {
        hits.c_geometric = 1;
        hits.c_and_d = !crossed(params, seed, closest) as u64;
        hits.b_k = (hits.c_and_d == 1 || candidates[1..].iter().any(|r| !crossed(params, seed, r))) as u64;
    }
    hits
}

/// Samples `trials` independent environments (seeds derived from
/// `params.seed` and the trial index) and counts the events.
pub fn mc_estimate(query: &EventQuery) -> Result<McEstimate, EnvError> {
    query.validate()?;
    let hits = (0..query.trials)
        .into_par_iter()
        .map(|i| one_trial(query, derive_seed(query.params.seed, i)))
        .reduce(Hits::default, |a, b| a + b);
    let f = |h| Frequency { hits: h, trials: query.trials };
    Ok(McEstimate {
        c_box: f(hits.c_box),
        c_geometric: f(hits.c_geometric),
        c_and_d: f(hits.c_and_d),
        b_k: f(hits.b_k),
        truncation_bound: truncation_bound(&query.params, &query.window()),
    })
}

/// Monte Carlo of the box event alone, which needs no geometry.
pub fn mc_c_box(k: u32, delta: f64, trials: u64, base_seed: u64) -> Frequency {
    let n = search_radius(k, delta) as i64;
    let hits = (0..trials)
        .into_par_iter()
        .filter(|&i| {
            let seed = derive_seed(base_seed, i);
            (1..=n).any(|l| (1..=n).any(|m| raw_bernoulli(seed, Orientation::Horizontal, k, l, m)))
        })
        .count() as u64;
    Frequency { hits, trials }
}

/// One CSV row per query: `k,delta,lambda,mu,trials,mc_freq,mc_se,closed_form_lower,truncation_bound`,
/// where the Monte Carlo columns estimate `B_k` and the closed form is
/// `p_ck_lower · p_dk_given_ck_lower`.
pub fn write_probability_csv(
    rows: &[(EventQuery, McEstimate)],
    mut out: impl Write,
    comment: Option<&str>,
) -> io::Result<()> {
    if let Some(c) = comment {
        writeln!(out, "# {c}")?;
    }
    writeln!(out, "k,delta,lambda,mu,trials,mc_freq,mc_se,closed_form_lower,truncation_bound")?;
    for (q, est) in rows {
        let bound = p_ck_lower(q.k, q.delta) * p_dk_given_ck_lower(q.k, &q.params);
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            q.k,
            q.delta,
            q.params.lambda,
            q.params.mu,
            q.trials,
            est.b_k.value(),
            est.b_k.standard_error(),
            bound,
            est.truncation_bound
        )?;
    }
    Ok(())
}
