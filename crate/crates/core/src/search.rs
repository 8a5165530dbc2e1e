//! Maximization of each rate over its free parameters.
//!
//! Every search is deterministic: a uniform grid, then golden-section (or,
//! for a min of a decreasing and an increasing term, bisection on the
//! crossing) refinement. Ties go to the smaller parameter value.
//! All argmax parameters refer to [`ChannelParams::canonical`].

use rayon::prelude::*;
use thiserror::Error;

use crate::channel::{BdfParams, ChannelError, ChannelParams, SfParams};
use crate::rates::{
    self, broadcast_cut, delta_cf, delta_sf, mi_g1, mi_g4, mi_penalty, mi_u_y2_x2v, mi_x1x2_y3,
    r_bdf_at, r_cf_at, r_cutset_at, r_df_at, CutSetVariant, RateError,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    Config(String),
    #[error("{term} is not monotone on the {axis} grid near {at}; golden-section refinement would not be valid")]
    NotUnimodal {
        term: &'static str,
        axis: &'static str,
        at: f64,
    },
    #[error("CF scan found rate {found} at delta = {delta}, above {rate} at delta_CF = {delta_cf}")]
    CfNotOptimal {
        delta_cf: f64,
        rate: f64,
        delta: f64,
        found: f64,
    },
    #[error("rate report invariant violated: {invariant} ({lhs} vs {rhs})")]
    InvariantViolated {
        invariant: &'static str,
        lhs: f64,
        rhs: f64,
    },
    #[error(transparent)]
    Rate(#[from] RateError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchConfig {
    /// Grid points per parameter axis.
    pub grid_steps: usize,
    /// Iterations of each 1-D refinement.
    pub refine_iters: usize,
    /// Convergence tolerance in bits.
    pub tol: f64,
    /// The Δ' grid extends from Δ_SF up to this multiple of Δ_SF.
    pub delta_max_factor: f64,
    pub cutset: CutSetVariant,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            grid_steps: 101,
            refine_iters: 60,
            tol: 1e-7,
            delta_max_factor: 1e3,
            cutset: CutSetVariant::Conditioned,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), SearchError> {
        if self.grid_steps < 3 {
            return Err(SearchError::Config(format!(
                "grid_steps = {} (need >= 3)",
                self.grid_steps
            )));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(SearchError::Config(format!("tol = {} (need > 0)", self.tol)));
        }
        if !(self.delta_max_factor > 1.0 && self.delta_max_factor.is_finite()) {
            return Err(SearchError::Config(format!(
                "delta_max_factor = {} (need finite and > 1)",
                self.delta_max_factor
            )));
        }
        Ok(())
    }

    fn spacing(&self) -> f64 {
        1.0 / (self.grid_steps - 1) as f64
    }

    fn unit_grid(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.grid_steps - 1;
        (0..=n).map(move |i| i as f64 / n as f64)
    }
}

/// Running argmax with the tie-break toward the smaller parameter.
#[derive(Clone, Copy, Debug)]
struct Best {
    x: f64,
    value: f64,
}

impl Best {
    fn new(x: f64, value: f64) -> Self {
        Best { x, value }
    }

    fn offer(&mut self, x: f64, value: f64) {
        if value > self.value || (value == self.value && x < self.x) {
            self.x = x;
            self.value = value;
        }
    }
}

/// Golden-section maximization of a unimodal `f` on `[lo, hi]`. The best
/// point seen (endpoints included) is returned.
pub(crate) fn golden_max<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, iters: usize) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut best = Best::new(lo, f(lo));
    best.offer(hi, f(hi));
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    best.offer(c, fc);
    best.offer(d, fd);
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
            best.offer(c, fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
            best.offer(d, fd);
        }
    }
    (best.x, best.value)
}

/// Checks that `xs` is nonincreasing (`sign = -1`) or nondecreasing
/// (`sign = 1`) up to roundoff, returning the first offending index.
fn monotone_violation(xs: &[f64], sign: f64) -> Option<usize> {
    xs.windows(2)
        .position(|w| sign * (w[1] - w[0]) < -1e-13 * w[0].abs().max(1.0))
        .map(|i| i + 1)
}

fn grid_then_golden<F: FnMut(f64) -> f64>(mut f: F, cfg: &SearchConfig) -> (f64, f64) {
    let values: Vec<f64> = cfg.unit_grid().map(&mut f).collect();
    let (i, _) = values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
    let h = cfg.spacing();
    let x0 = i as f64 * h;
    let lo = (x0 - h).max(0.0);
    let hi = (x0 + h).min(1.0);
    let (x, v) = golden_max(&mut f, lo, hi, cfg.refine_iters);
    let mut best = Best::new(x0, values[i]);
    best.offer(x, v);
    (best.x, best.value)
}

/// Maximizes `min{I(X1;Y2|X2), I(X1,X2;Y3)}` over `ρ ∈ [0, 1]`.
pub fn maximize_df(ch: &ChannelParams<f64>, cfg: &SearchConfig) -> Result<(f64, f64), SearchError> {
    cfg.validate()?;
    let ch = ch.canonical();
    let grid: Vec<f64> = cfg.unit_grid().collect();
    let relay: Vec<f64> = grid.iter().map(|&r| mi_g1(&ch, r)).collect();
    let mac: Vec<f64> = grid.iter().map(|&r| mi_x1x2_y3(&ch, r)).collect();
    if let Some(i) = monotone_violation(&relay, -1.0) {
        return Err(SearchError::NotUnimodal {
            term: "I(X1;Y2|X2)",
            axis: "rho",
            at: grid[i],
        });
    }
    if let Some(i) = monotone_violation(&mac, 1.0) {
        return Err(SearchError::NotUnimodal {
            term: "I(X1,X2;Y3)",
            axis: "rho",
            at: grid[i],
        });
    }
    Ok(grid_then_golden(|r| r_df_at(&ch, r), cfg))
}

/// CF optimum at `Δ = Δ_CF`, confirmed by a log scan over
/// `[Δ_CF/10, 10·Δ_CF]`.
pub fn maximize_cf(ch: &ChannelParams<f64>, cfg: &SearchConfig) -> Result<(f64, f64), SearchError> {
    cfg.validate()?;
    let ch = ch.canonical();
    let delta = delta_cf(&ch)?;
    let rate = r_cf_at(&ch, delta);
    let n = cfg.grid_steps - 1;
    for k in 0..=n {
        let trial = delta * 10f64.powf(-1.0 + 2.0 * k as f64 / n as f64);
        let found = r_cf_at(&ch, trial);
        if found > rate + cfg.tol {
            return Err(SearchError::CfNotOptimal {
                delta_cf: delta,
                rate,
                delta: trial,
                found,
            });
        }
    }
    Ok((delta, rate))
}

/// SF objective with the correlation triple fixed; the compression noise
/// is the only remaining variable.
struct SfSlice<'c> {
    ch: &'c ChannelParams<f64>,
    /// Δ_SF, or `+∞` where the constraint only admits an absent description.
    lower: f64,
    decoded: f64,
    mac: f64,
    gamma: f64,
}

impl<'c> SfSlice<'c> {
    fn new(ch: &'c ChannelParams<f64>, alpha: f64, beta: f64, gamma: f64) -> Self {
        let lower = delta_sf(ch, alpha, beta, gamma).unwrap_or(f64::INFINITY);
        SfSlice {
            ch,
            lower,
            decoded: mi_u_y2_x2v(ch, alpha, gamma),
            mac: mi_x1x2_y3(ch, alpha * beta * gamma),
            gamma,
        }
    }

    /// The two SF terms at compression noise `dp`: the first is
    /// decreasing in `dp`, the second increasing.
    fn terms(&self, dp: f64) -> (f64, f64) {
        (
            mi_g4(self.ch, self.gamma, dp) + self.decoded,
            self.mac - mi_penalty(self.ch, dp),
        )
    }

    fn rate(&self, dp: f64) -> f64 {
        let (first, second) = self.terms(dp);
        first.min(second)
    }

    /// Coarse scan: Δ_SF, a log grid up to `delta_max_factor·Δ_SF`, and ∞.
    fn scan(&self, cfg: &SearchConfig) -> (f64, f64) {
        let mut best = Best::new(f64::INFINITY, self.rate(f64::INFINITY));
        if self.lower.is_finite() {
            let decades = cfg.delta_max_factor.log10();
            let n = (DELTA_POINTS_PER_DECADE * decades).ceil().max(1.0) as usize;
            // Offered from the largest down so ties keep the smaller Δ'.
            for k in (0..=n).rev() {
                let dp = self.lower * 10f64.powf(decades * k as f64 / n as f64);
                best.offer(dp, self.rate(dp));
            }
        }
        (best.x, best.value)
    }

    /// Exact maximizer over `Δ' ∈ [Δ_SF, ∞]`. With `t = Δ_SF/Δ'` the two
    /// terms are monotone in opposite directions, so the optimum is an end
    /// point or their crossing, located by bisection.
    fn optimize(&self, iters: usize) -> (f64, f64) {
        let inf = f64::INFINITY;
        if !self.lower.is_finite() {
            return (inf, self.rate(inf));
        }
        let (f1, s1) = self.terms(self.lower);
        if f1 <= s1 {
            return (self.lower, f1);
        }
        let (f0, s0) = self.terms(inf);
        if f0 >= s0 {
            return (inf, s0);
        }
        let at = |t: f64| self.lower / t;
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..iters.max(64) {
            let mid = 0.5 * (lo + hi);
            let (f, s) = self.terms(at(mid));
            if f > s {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let mut best = Best::new(at(hi), self.rate(at(hi)));
        if lo > 0.0 {
            best.offer(at(lo), self.rate(at(lo)));
        }
        (best.x, best.value)
    }
}

const DELTA_POINTS_PER_DECADE: f64 = 4.0;
const MAX_SWEEPS: usize = 500;
const NM_RESTARTS: usize = 20;
const NM_MAX_ITERS: usize = 4000;

/// Nelder-Mead maximization of `f` over the unit cube; trial points are
/// clamped into the cube. Returns the best vertex.
fn nelder_mead<F: Fn([f64; 3]) -> f64>(f: F, start: [f64; 3], size: f64) -> ([f64; 3], f64) {
    let clamp = |x: [f64; 3]| x.map(|c| c.clamp(0.0, 1.0));
    let mut simplex: Vec<([f64; 3], f64)> = Vec::with_capacity(4);
    simplex.push((start, f(start)));
    for axis in 0..3 {
        let mut x = start;
        // Step inward when the start is on the upper face.
        x[axis] = if x[axis] + size <= 1.0 { x[axis] + size } else { x[axis] - size };
        let x = clamp(x);
        simplex.push((x, f(x)));
    }
    let lerp = |p: [f64; 3], q: [f64; 3], t: f64| {
        clamp([0, 1, 2].map(|i| p[i] + t * (q[i] - p[i])))
    };
    for _ in 0..NM_MAX_ITERS {
        // Best first; ties keep insertion order.
        simplex.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
        let spread = simplex[1..]
            .iter()
            .map(|(x, _)| (0..3).map(|i| (x[i] - simplex[0].0[i]).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if spread < 1e-11 {
            break;
        }
        let centroid = [0, 1, 2].map(|i| simplex[..3].iter().map(|(x, _)| x[i]).sum::<f64>() / 3.0);
        let (worst, fw) = simplex[3];
        let reflected = lerp(centroid, worst, -1.0);
        let fr = f(reflected);
        if fr > simplex[0].1 {
            let expanded = lerp(centroid, worst, -2.0);
            let fe = f(expanded);
            simplex[3] = if fe > fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr > simplex[2].1 {
            simplex[3] = (reflected, fr);
        } else {
            let (toward, ft) = if fr > fw { (reflected, fr) } else { (worst, fw) };
            let contracted = lerp(centroid, toward, 0.5);
            let fc = f(contracted);
            if fc > ft {
                simplex[3] = (contracted, fc);
            } else {
                let top = simplex[0].0;
                for v in simplex[1..].iter_mut() {
                    let x = lerp(top, v.0, 0.5);
                    *v = (x, f(x));
                }
            }
        }
    }
    simplex.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
    simplex[0]
}

#[derive(Clone, Copy, Debug)]
struct SfCandidate {
    rate: f64,
    corr: [f64; 3],
    delta_prime: f64,
}

impl SfCandidate {
    fn beats(&self, other: &SfCandidate) -> bool {
        if self.rate != other.rate {
            return self.rate > other.rate;
        }
        let key = |c: &SfCandidate| (c.corr, c.delta_prime);
        let (a, b) = (key(self), key(other));
        a.partial_cmp(&b) == Some(std::cmp::Ordering::Less)
    }
}

/// Maximizes the SF rate over `(α, β, γ, Δ')` subject to `Δ' >= Δ_SF`.
pub fn maximize_sf(
    ch: &ChannelParams<f64>,
    cfg: &SearchConfig,
) -> Result<(SfParams<f64>, f64), SearchError> {
    cfg.validate()?;
    let ch = ch.canonical();
    let grid: Vec<f64> = cfg.unit_grid().collect();

    let slices: Vec<SfCandidate> = grid
        .par_iter()
        .map(|&alpha| {
            let mut best: Option<SfCandidate> = None;
            for &beta in &grid {
                for &gamma in &grid {
                    let (delta_prime, rate) = SfSlice::new(&ch, alpha, beta, gamma).scan(cfg);
                    let cand = SfCandidate {
                        rate,
                        corr: [alpha, beta, gamma],
                        delta_prime,
                    };
                    if best.is_none_or(|b| cand.beats(&b)) {
                        best = Some(cand);
                    }
                }
            }
            best.expect("grid is nonempty")
        })
        .collect();
    let mut best = slices[0];
    for cand in &slices[1..] {
        if cand.beats(&best) {
            best = *cand;
        }
    }

    // Coordinate descent on the profile max_{Δ'} rate(α, β, γ, Δ').
    let profile = |c: [f64; 3]| SfSlice::new(&ch, c[0], c[1], c[2]).optimize(cfg.refine_iters);
    let (dp, rate) = profile(best.corr);
    best.delta_prime = dp;
    best.rate = rate;
    let h = cfg.spacing();
    for _ in 0..MAX_SWEEPS {
        let start = best.rate;
        for axis in 0..3 {
            let x0 = best.corr[axis];
            let along = |x: f64| {
                let mut c = best.corr;
                c[axis] = x;
                profile(c).1
            };
            let (x, _) = golden_max(along, (x0 - h).max(0.0), (x0 + h).min(1.0), cfg.refine_iters);
            let mut corr = best.corr;
            corr[axis] = x;
            let (delta_prime, rate) = profile(corr);
            if rate > best.rate {
                best = SfCandidate {
                    rate,
                    corr,
                    delta_prime,
                };
            }
        }
        if best.rate - start < cfg.tol {
            break;
        }
    }

    // The profile is a min of two terms and, near the DF/CF crossover, the
    // optimum sits on a curved ridge where the constraint is also active.
    // Axis moves stall there; a restarted Nelder-Mead follows the ridge.
    let mut size = h;
    for _ in 0..NM_RESTARTS {
        let (corr, _) = nelder_mead(|c| profile(c).1, best.corr, size);
        let (delta_prime, rate) = profile(corr);
        if rate <= best.rate {
            break;
        }
        let gain = rate - best.rate;
        best = SfCandidate {
            rate,
            corr,
            delta_prime,
        };
        if gain < 1e-14 {
            break;
        }
        size = (size * 0.5).max(1e-6);
    }

    let [alpha, beta, gamma] = best.corr;
    let params = SfParams::new(alpha, beta, gamma, best.delta_prime)?;
    Ok((params, best.rate))
}

/// Maximizes the broadcast-over-DF rate over the `(θu, θ2)` simplex.
pub fn maximize_bdf(
    ch: &ChannelParams<f64>,
    cfg: &SearchConfig,
) -> Result<(BdfParams<f64>, f64), SearchError> {
    cfg.validate()?;
    let ch = ch.canonical();
    let n = cfg.grid_steps - 1;
    let eval = |tu: f64, t2: f64| -> Result<f64, SearchError> {
        let t2 = t2.min(1.0 - tu).max(0.0);
        Ok(r_bdf_at(&ch, &BdfParams::new(tu, t2)?)?)
    };

    let mut best = ([0.0, 0.0], f64::NEG_INFINITY);
    for i in 0..=n {
        for j in 0..=(n - i) {
            let (tu, t2) = (i as f64 / n as f64, j as f64 / n as f64);
            let v = eval(tu, t2)?;
            if v > best.1 {
                best = ([tu, t2], v);
            }
        }
    }

    let h = cfg.spacing();
    let mut failure: Option<SearchError> = None;
    for _ in 0..MAX_SWEEPS {
        let start = best.1;
        for axis in 0..2 {
            let other = best.0[1 - axis];
            let x0 = best.0[axis];
            let hi = (x0 + h).min(1.0 - other).max(0.0);
            let lo = (x0 - h).max(0.0).min(hi);
            let along = |x: f64| {
                let point = if axis == 0 { (x, other) } else { (other, x) };
                match eval(point.0, point.1) {
                    Ok(v) => v,
                    Err(e) => {
                        failure.get_or_insert(e);
                        f64::NEG_INFINITY
                    }
                }
            };
            let (x, v) = golden_max(along, lo, hi, cfg.refine_iters);
            if v > best.1 {
                best.0[axis] = x;
                best.1 = v;
            }
        }
        if let Some(e) = failure.take() {
            return Err(e);
        }
        if best.1 - start < cfg.tol {
            break;
        }
    }

    // The objective is a sum of minima, so its ridges need not be axis
    // aligned and descent can stall next to an edge. Each simplex edge gets
    // its own 1-D search around its best grid point.
    let edges: [fn(f64) -> (f64, f64); 3] = [|s| (0.0, s), |s| (s, 0.0), |s| (s, 1.0 - s)];
    for edge in edges {
        let on_edge = |s: f64| {
            let (tu, t2) = edge(s);
            match eval(tu, t2) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NEG_INFINITY
                }
            }
        };
        let (s, v) = grid_then_golden(on_edge, cfg);
        if let Some(e) = failure.take() {
            return Err(e);
        }
        if v > best.1 {
            let (tu, t2) = edge(s);
            best = ([tu, t2], v);
        }
    }
    let [tu, t2] = best.0;
    Ok((BdfParams::new(tu, t2.min(1.0 - tu))?, best.1))
}

/// Maximizes the cut-set bound over `ρ ∈ [0, 1]`.
pub fn maximize_cutset(
    ch: &ChannelParams<f64>,
    cfg: &SearchConfig,
) -> Result<(f64, f64), SearchError> {
    cfg.validate()?;
    let ch = ch.canonical();
    let grid: Vec<f64> = cfg.unit_grid().collect();
    let cuts = grid
        .iter()
        .map(|&r| broadcast_cut(&ch, r, cfg.cutset))
        .collect::<Result<Vec<f64>, _>>()?;
    if cfg.cutset == CutSetVariant::Conditioned {
        if let Some(i) = monotone_violation(&cuts, -1.0) {
            return Err(SearchError::NotUnimodal {
                term: "I(X1;Y2,Y3|X2)",
                axis: "rho",
                at: grid[i],
            });
        }
    }
    // Oracle failures in refinement surface as NaN, which never wins.
    let f = |r: f64| r_cutset_at(&ch, r, cfg.cutset).unwrap_or(f64::NAN);
    Ok(grid_then_golden(f, cfg))
}

/// All five optimized rates at one channel, with their maximizers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateReport {
    pub r_df: f64,
    pub r_cf: f64,
    pub r_sf: f64,
    pub r_bdf: f64,
    pub r_cs: f64,
    pub arg_df: f64,
    pub arg_cf: f64,
    pub arg_sf: SfParams<f64>,
    pub arg_bdf: BdfParams<f64>,
    pub arg_cs: f64,
    pub cutset: CutSetVariant,
    /// `R_SF − max(R_DF, R_CF)`. Expected to be within search tolerance of
    /// zero, but positive by about 1e-3 bits for reference-power channels
    /// just past the DF/CF crossover, where a feasible mixed point beats
    /// both corners. Reported instead of treated as an error.
    pub sf_excess: f64,
}

impl RateReport {
    /// Whether `R_SF <= max(R_DF, R_CF)` holds to within `10·tol`.
    pub fn sf_within_max(&self, tol: f64) -> bool {
        self.sf_excess <= 10.0 * tol
    }
}

/// Slack allowed between oracle- and closed-form-evaluated rates in the
/// report invariants.
pub const ORACLE_TOL: f64 = 1e-9;

fn ensure(invariant: &'static str, lhs: f64, rhs: f64) -> Result<(), SearchError> {
    if lhs <= rhs {
        Ok(())
    } else {
        Err(SearchError::InvariantViolated { invariant, lhs, rhs })
    }
}

pub fn report(ch: &ChannelParams<f64>, cfg: &SearchConfig) -> Result<RateReport, SearchError> {
    cfg.validate()?;
    let (arg_df, r_df) = maximize_df(ch, cfg)?;
    let (arg_cf, r_cf) = maximize_cf(ch, cfg)?;
    let (arg_sf, r_sf) = maximize_sf(ch, cfg)?;
    let (arg_bdf, r_bdf) = maximize_bdf(ch, cfg)?;
    let (arg_cs, r_cs) = maximize_cutset(ch, cfg)?;

    for (name, r) in [
        ("R_DF >= 0", r_df),
        ("R_CF >= 0", r_cf),
        ("R_SF >= 0", r_sf),
        ("R_BDF >= 0", r_bdf),
        ("R_CS >= 0", r_cs),
    ] {
        ensure(name, -r, 0.0)?;
    }
    ensure("R_DF <= R_CS", r_df, r_cs + ORACLE_TOL)?;
    ensure("R_CF <= R_CS", r_cf, r_cs + ORACLE_TOL)?;
    ensure("R_BDF <= R_DF", r_bdf, r_df + ORACLE_TOL)?;
    let canonical = ch.canonical();
    let floor = rates::delta_sf(&canonical, arg_sf.alpha(), arg_sf.beta(), arg_sf.gamma())
        .unwrap_or(f64::INFINITY);
    ensure("SF argmax feasible", floor - 1e-12, arg_sf.delta_prime())?;

    Ok(RateReport {
        r_df,
        r_cf,
        r_sf,
        r_bdf,
        r_cs,
        arg_df,
        arg_cf,
        arg_sf,
        arg_bdf,
        arg_cs,
        cutset: cfg.cutset,
        sf_excess: r_sf - r_df.max(r_cf),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn reference(d: f64) -> ChannelParams<f64> {
        ChannelParams::from_geometry(d, 5.0, 5.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, v) = golden_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 80);
        assert_abs_diff_eq!(x, 0.3, epsilon = 1e-8);
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-15);
        // Kinked objective: min of a decreasing and an increasing line.
        let (x, _) = golden_max(|x| (1.0 - x).min(2.0 * x), 0.0, 1.0, 80);
        assert_abs_diff_eq!(x, 1.0 / 3.0, epsilon = 1e-10);
    }

    #[test]
    fn golden_prefers_smaller_argument_on_ties() {
        let (x, _) = golden_max(|_| 1.0, 0.2, 0.9, 10);
        assert_eq!(x, 0.2);
    }

    #[test]
    fn config_validation() {
        let bad = SearchConfig {
            grid_steps: 2,
            ..SearchConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = SearchConfig {
            tol: 0.0,
            ..SearchConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = SearchConfig {
            delta_max_factor: f64::INFINITY,
            ..SearchConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn df_at_midpoint_is_uncorrelated() {
        let (rho, rate) = maximize_df(&reference(0.5), &SearchConfig::default()).unwrap();
        assert_eq!(rho, 0.0);
        assert_abs_diff_eq!(rate, 0.5 * 21f64.log2(), epsilon = 1e-12);
    }

    #[test]
    fn df_near_source_crosses_inside() {
        let ch = reference(0.1);
        let (rho, rate) = maximize_df(&ch, &SearchConfig::default()).unwrap();
        assert_abs_diff_eq!(rho, 0.977_715_353_834_977_3, epsilon = 1e-9);
        assert_abs_diff_eq!(rate, 2.262_919_915_317_534_3, epsilon = 1e-12);
        assert_abs_diff_eq!(rate, mi_x1x2_y3(&ch, rho), epsilon = 1e-9);
    }

    #[test]
    fn df_silent_source() {
        let ch = ChannelParams::new(2.0, 2.0, 1.0, 1.0, 0.0, 5.0).unwrap();
        let (rho, rate) = maximize_df(&ch, &SearchConfig::default()).unwrap();
        assert_eq!((rho, rate), (0.0, 0.0));
    }

    #[test]
    fn cf_at_midpoint() {
        let (delta, rate) = maximize_cf(&reference(0.5), &SearchConfig::default()).unwrap();
        assert_abs_diff_eq!(delta, 1.3, epsilon = 1e-14);
        assert_abs_diff_eq!(rate, 1.938_658_740_112_585_7, epsilon = 1e-12);
        let no_relay = ChannelParams::new(2.0, 2.0, 1.0, 1.0, 5.0, 0.0).unwrap();
        assert!(matches!(
            maximize_cf(&no_relay, &SearchConfig::default()),
            Err(SearchError::Rate(RateError::NoRelayLink))
        ));
    }

    #[test]
    fn cf_close_to_destination_meets_cutset() {
        let ch = reference(0.999);
        let cfg = SearchConfig::default();
        let (_, cf) = maximize_cf(&ch, &cfg).unwrap();
        let (_, cs) = maximize_cutset(&ch, &cfg).unwrap();
        assert!((cs - cf).abs() < 1e-2);
    }

    #[test]
    fn sf_slice_optimum_matches_dense_scan() {
        let ch = reference(0.5);
        for &(al, be, ga) in &[(0.8, 0.5, 0.9), (0.1, 0.3, 0.2), (1.0, 0.0, 0.5), (0.5, 0.9, 0.99)] {
            let slice = SfSlice::new(&ch, al, be, ga);
            let (dp, rate) = slice.optimize(60);
            assert!(dp >= slice.lower);
            let mut dense = f64::NEG_INFINITY;
            for k in 0..=20_000 {
                let trial = slice.lower * 10f64.powf(6.0 * k as f64 / 20_000.0);
                dense = dense.max(slice.rate(trial));
            }
            dense = dense.max(slice.rate(f64::INFINITY));
            assert!(rate >= dense - 1e-12, "{rate} < {dense} at {:?}", (al, be, ga));
        }
    }

    #[test]
    fn sf_at_midpoint_equals_df() {
        let cfg = SearchConfig::default();
        let ch = reference(0.5);
        let (params, rate) = maximize_sf(&ch, &cfg).unwrap();
        assert!((rate - 0.5 * 21f64.log2()).abs() < 1e-4);
        assert!(rates::sf_feasible(&ch, &params));
    }

    #[test]
    fn bdf_does_not_beat_df() {
        let cfg = SearchConfig {
            grid_steps: 21,
            ..SearchConfig::default()
        };
        let ch = reference(0.3);
        let (_, bdf) = maximize_bdf(&ch, &cfg).unwrap();
        let (_, df) = maximize_df(&ch, &cfg).unwrap();
        assert!(bdf <= df + 1e-9);
        // θu = 0 corner reproduces DF.
        assert!(bdf >= df - 1e-6);
    }

    #[test]
    fn cutset_near_source_is_mac_limited() {
        let ch = reference(0.1);
        let cfg = SearchConfig::default();
        let (rho, cs) = maximize_cutset(&ch, &cfg).unwrap();
        assert_abs_diff_eq!(cs, mi_x1x2_y3(&ch, rho), epsilon = 1e-9);
        assert_abs_diff_eq!(cs, 2.262_996_680_329_219_4, epsilon = 1e-9);
        let silent = ChannelParams::new(10.0, 1.1, 1.0, 1.0, 0.0, 5.0).unwrap();
        let (_, zero) = maximize_cutset(&silent, &cfg).unwrap();
        assert_eq!(zero, 0.0);
    }

    #[test]
    fn negative_gains_give_same_rates() {
        let cfg = SearchConfig {
            grid_steps: 11,
            ..SearchConfig::default()
        };
        let ch = reference(0.3);
        let flipped = ChannelParams::new(-ch.a(), -ch.b(), 1.0, 1.0, 5.0, 5.0).unwrap();
        assert_eq!(maximize_df(&ch, &cfg).unwrap(), maximize_df(&flipped, &cfg).unwrap());
        assert_eq!(
            maximize_cutset(&ch, &cfg).unwrap(),
            maximize_cutset(&flipped, &cfg).unwrap()
        );
    }

    #[test]
    fn report_is_deterministic() {
        let cfg = SearchConfig {
            grid_steps: 21,
            ..SearchConfig::default()
        };
        let ch = reference(0.7);
        let a = report(&ch, &cfg).unwrap();
        let b = report(&ch, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.r_cf > a.r_df);
    }
}
