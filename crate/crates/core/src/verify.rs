//! Executable checks of the rate identities, lemmas and optimality claims.
//!
//! Every check returns a [`CheckResult`] whose `worst_slack` is the most
//! violating margin seen (negative means violated) together with the
//! parameters that produced it, so a failure can be replayed.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{sf_model, BdfParams, ChannelParams, SfParams};
use crate::oracle::{CovModel, Definition, OracleError, VarLabel};
use crate::rates::{
    cf_terms, delta_cf, delta_sf, mi_g1, mi_g2, mi_g3, mi_g4, mi_penalty, mi_r2, mi_r4,
    mi_u_y2_x2v, mi_x1x2_y3, r_bdf_at, r_cf_at, RateError,
};
use crate::search::{self, SearchConfig, SearchError};

use VarLabel::{Y2hat, U, V, X1, X2, Y2, Y3};

/// Tolerance for identities evaluated directly on the covariance oracle.
pub const ORACLE_TOL: f64 = 1e-9;
/// Tolerance for equalities between optimized rates.
pub const SEARCH_TOL: f64 = 1e-4;

/// Parameter tuple attached to a check's worst case.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Witness(pub Vec<(&'static str, f64)>);

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("-");
        }
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    /// `worst_slack >= -tolerance`, and at least one case was evaluated.
    pub passed: bool,
    /// Most violating margin in bits (or in the check's own unit).
    pub worst_slack: f64,
    pub tolerance: f64,
    pub witness: Witness,
    pub evaluated: usize,
    /// Draws whose premise was false.
    pub skipped: usize,
    /// Draws discarded because the model was numerically singular.
    pub rejected: usize,
    pub notes: Vec<String>,
}

impl CheckResult {
    pub fn hit_rate(&self) -> Option<f64> {
        let total = self.evaluated + self.skipped;
        (self.skipped > 0).then(|| self.evaluated as f64 / total as f64)
    }

    /// One `key=value` line for scripts.
    pub fn summary_line(&self) -> String {
        format!(
            "check={} status={} worst_slack={:e} tol={:e} evaluated={} skipped={} rejected={} witness={}",
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.worst_slack,
            self.tolerance,
            self.evaluated,
            self.skipped,
            self.rejected,
            self.witness
        )
    }
}

/// Running minimum of slack over the cases of one check.
struct Tracker {
    name: &'static str,
    tolerance: f64,
    worst: f64,
    witness: Witness,
    evaluated: usize,
    skipped: usize,
    rejected: usize,
    notes: Vec<String>,
}

impl Tracker {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Tracker {
            name,
            tolerance,
            worst: f64::INFINITY,
            witness: Witness::default(),
            evaluated: 0,
            skipped: 0,
            rejected: 0,
            notes: Vec::new(),
        }
    }

    fn record(&mut self, slack: f64, witness: impl FnOnce() -> Witness) {
        self.evaluated += 1;
        // NaN slack is a failure, never silently ignored.
        if slack.is_nan() || slack < self.worst {
            self.worst = if slack.is_nan() { f64::NEG_INFINITY } else { slack };
            self.witness = witness();
        }
    }

    fn finish(self) -> CheckResult {
        let worst = if self.evaluated == 0 {
            f64::NEG_INFINITY
        } else {
            self.worst
        };
        let mut notes = self.notes;
        if self.evaluated == 0 {
            notes.push("no case evaluated".into());
        }
        CheckResult {
            name: self.name,
            passed: worst >= -self.tolerance,
            worst_slack: worst,
            tolerance: self.tolerance,
            witness: self.witness,
            evaluated: self.evaluated,
            skipped: self.skipped,
            rejected: self.rejected,
            notes,
        }
    }
}

/// Random channel and SF parameters for the oracle-level checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Draw {
    pub d: f64,
    pub ch: ChannelParams<f64>,
    pub sf: SfParams<f64>,
}

impl Draw {
    fn witness(&self) -> Witness {
        Witness(vec![
            ("d", self.d),
            ("p1", self.ch.p1()),
            ("p2", self.ch.p2()),
            ("n1", self.ch.n1()),
            ("n2", self.ch.n2()),
            ("alpha", self.sf.alpha()),
            ("beta", self.sf.beta()),
            ("gamma", self.sf.gamma()),
            ("delta_prime", self.sf.delta_prime()),
        ])
    }
}

/// Where `Δ'` is drawn, relative to `Δ_SF`, on a log scale.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DeltaRange {
    /// `[Δ_SF, 10³ Δ_SF]`
    Feasible,
    /// `[10⁻³ Δ_SF, Δ_SF)`
    Infeasible,
}

/// Seeded sampler: `d` uniform on a sub-range of `[0.05, 0.95]`, powers
/// log-uniform on `[0.5, 50]`, noises on `[0.25, 4]`, correlations uniform
/// on `[0, 1]`.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64, salt: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15)),
        }
    }

    fn log_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo.ln()..hi.ln()).exp()
    }

    pub fn channel(&mut self, d_lo: f64, d_hi: f64) -> (f64, ChannelParams<f64>) {
        let d = self.rng.gen_range(d_lo..d_hi);
        let p1 = self.log_uniform(0.5, 50.0);
        let p2 = self.log_uniform(0.5, 50.0);
        let n1 = self.log_uniform(0.25, 4.0);
        let n2 = self.log_uniform(0.25, 4.0);
        let ch = ChannelParams::from_geometry(d, p1, p2, n1, n2).expect("sampled in range");
        (d, ch)
    }

    /// `None` when `Δ_SF` is unbounded at the sampled correlations.
    pub fn sf(&mut self, ch: &ChannelParams<f64>, range: DeltaRange) -> Option<SfParams<f64>> {
        let (alpha, beta, gamma) = (self.rng.gen::<f64>(), self.rng.gen::<f64>(), self.rng.gen::<f64>());
        let floor = delta_sf(ch, alpha, beta, gamma).ok()?;
        let dp = match range {
            DeltaRange::Feasible => self.log_uniform(floor, 1e3 * floor),
            DeltaRange::Infeasible => self.log_uniform(1e-3 * floor, floor),
        };
        SfParams::new(alpha, beta, gamma, dp).ok()
    }

    pub fn draw(&mut self, d_lo: f64, d_hi: f64, range: DeltaRange) -> Draw {
        loop {
            let (d, ch) = self.channel(d_lo, d_hi);
            if let Some(sf) = self.sf(&ch, range) {
                return Draw { d, ch, sf };
            }
        }
    }
}

fn is_singular(e: &OracleError) -> bool {
    matches!(
        e,
        OracleError::SingularConditioning { .. } | OracleError::DeterministicDependence { .. }
    )
}

/// Mutual informations of one SF model, in bits.
struct Terms<'m> {
    m: &'m CovModel<f64>,
}

impl Terms<'_> {
    fn mi(&self, a: &[VarLabel], b: &[VarLabel], given: &[VarLabel]) -> Result<f64, OracleError> {
        self.m.conditional_mi(a, b, given)
    }
}


/// Outcome of evaluating one random case.
enum Case {
    Slack(f64),
    Skip,
}

fn run_draws<F>(
    t: &mut Tracker,
    sampler: &mut Sampler,
    n: usize,
    mut next: impl FnMut(&mut Sampler, usize) -> Draw,
    mut eval: F,
) where
    F: FnMut(&Draw) -> Result<Case, OracleError>,
{
    let cap = 100 * n.max(1);
    let mut attempts = 0;
    while t.evaluated < n && attempts < cap {
        let draw = next(sampler, attempts);
        attempts += 1;
        match eval(&draw) {
            Ok(Case::Slack(s)) => t.record(s, || draw.witness()),
            Ok(Case::Skip) => t.skipped += 1,
            Err(e) if is_singular(&e) => t.rejected += 1,
            Err(e) => {
                t.notes.push(format!("oracle error at {}: {e}", draw.witness()));
                t.record(f64::NEG_INFINITY, || draw.witness());
            }
        }
    }
    if t.evaluated < n {
        t.notes.push(format!("only {} of {n} cases after {attempts} draws", t.evaluated));
        // Too few premise hits is itself a failure.
        t.worst = f64::NEG_INFINITY;
    }
}

/// Every closed form against the oracle on `n` random feasible draws.
pub fn check_closed_forms(n: usize, seed: u64) -> CheckResult {
    let mut t = Tracker::new("closed-forms", ORACLE_TOL);
    let mut sampler = Sampler::new(seed, 1);
    let mut worst_name = "";
    let mut worst_abs = 0.0f64;
    run_draws(
        &mut t,
        &mut sampler,
        n,
        |s, _| s.draw(0.05, 0.95, DeltaRange::Feasible),
        |draw| {
            let (ch, sf) = (&draw.ch, &draw.sf);
            let m = sf_model(ch, sf).map_err(|e| match e {
                crate::channel::ChannelError::Oracle(o) => o,
                other => panic!("sampled SF model invalid: {other}"),
            })?;
            let o = Terms { m: &m };
            let (ga, rho, dp) = (sf.gamma(), sf.rho(), sf.delta_prime());
            let pairs = [
                ("g1", mi_g1(ch, rho), o.mi(&[X1], &[Y2], &[X2])?),
                ("g2", mi_g2(ch, ga), o.mi(&[X1], &[Y2], &[X2, U])?),
                ("g3", mi_g3(ch, rho, dp), o.mi(&[X1], &[Y2hat, Y3], &[X2])?),
                ("g4", mi_g4(ch, ga, dp), o.mi(&[X1], &[Y2hat, Y3], &[X2, U])?),
                ("r2", mi_r2(ch, ga, rho), o.mi(&[U], &[Y2], &[X2])?),
                ("r4", mi_r4(ch, ga, rho, dp), o.mi(&[U], &[Y2hat, Y3], &[X2])?),
                ("u_y2_x2v", mi_u_y2_x2v(ch, sf.alpha(), ga), o.mi(&[U], &[Y2], &[X2, V])?),
                ("mac", mi_x1x2_y3(ch, rho), o.mi(&[X1, X2], &[Y3], &[])?),
                ("penalty", mi_penalty(ch, dp), o.mi(&[Y2hat], &[Y2], &[U, X1, X2, Y3])?),
            ];
            let mut slack = 0.0f64;
            for (name, closed, oracle) in pairs {
                let diff = (closed - oracle).abs();
                if diff > worst_abs {
                    worst_abs = diff;
                    worst_name = name;
                }
                slack = slack.min(-diff);
            }
            Ok(Case::Slack(slack))
        },
    );
    if !worst_name.is_empty() {
        t.notes.push(format!("largest deviation in {worst_name}"));
    }
    t.finish()
}

/// Correlation of the ends of a constructed Gaussian chain `V − U − X1`
/// against the product of link correlations, over `[-1, 1]²`.
pub fn check_lemma1(grid_step: f64) -> CheckResult {
    let mut t = Tracker::new("lemma1", 1e-12);
    if !(grid_step > 0.0 && grid_step <= 2.0) {
        t.notes.push(format!("invalid grid step {grid_step}"));
        return t.finish();
    }
    let n = (2.0 / grid_step).round() as usize;
    let (vx, vy, vz) = (2.0f64, 3.0f64, 0.5f64);
    for i in 0..=n {
        for j in 0..=n {
            let phi1 = (-1.0 + 2.0 * i as f64 / n as f64).clamp(-1.0, 1.0);
            let phi2 = (-1.0 + 2.0 * j as f64 / n as f64).clamp(-1.0, 1.0);
            let built = CovModel::build(&[
                Definition::source(V, vx),
                Definition::linear(U, &[(V, phi1 * (vy / vx).sqrt())], vy * (1.0 - phi1 * phi1)),
                Definition::linear(X1, &[(U, phi2 * (vz / vy).sqrt())], vz * (1.0 - phi2 * phi2)),
            ]);
            let w = || Witness(vec![("phi1", phi1), ("phi2", phi2)]);
            match built.and_then(|m| m.corr(V, X1)) {
                Ok(c) => t.record(-(c - phi1 * phi2).abs(), w),
                Err(e) => {
                    t.notes.push(format!("oracle error: {e}"));
                    t.record(f64::NEG_INFINITY, w);
                }
            }
        }
    }
    t.finish()
}

fn edge_draw(ch: ChannelParams<f64>, alpha: f64, beta: f64, gamma: f64, dp: f64) -> Draw {
    Draw {
        d: f64::NAN,
        ch,
        sf: SfParams::new(alpha, beta, gamma, dp).expect("edge parameters valid"),
    }
}

fn reference(d: f64) -> ChannelParams<f64> {
    ChannelParams::from_geometry(d, 5.0, 5.0, 1.0, 1.0).expect("valid distance")
}

fn model_of(draw: &Draw) -> Result<CovModel<f64>, OracleError> {
    sf_model(&draw.ch, &draw.sf).map_err(|e| match e {
        crate::channel::ChannelError::Oracle(o) => o,
        other => panic!("SF model invalid: {other}"),
    })
}

fn lemma_draws(s: &mut Sampler, k: usize, biased: (f64, f64)) -> Draw {
    // Every other draw comes from the sub-range that favours the premise.
    if k.is_multiple_of(2) {
        s.draw(biased.0, biased.1, DeltaRange::Feasible)
    } else {
        s.draw(0.05, 0.95, DeltaRange::Feasible)
    }
}

fn with_hit_rate(mut r: CheckResult) -> CheckResult {
    if let Some(h) = r.hit_rate() {
        r.notes.push(format!("premise hit rate {:.1}%", 100.0 * h));
        if h < 0.25 {
            r.notes.push("premise hit rate below 25%".into());
        }
    }
    r
}

/// If `I(X1;Y2|X2) >= I(X1;Y3,Ŷ2|X2)` then
/// `I(X1;Y2|X2,U) >= I(X1;Ŷ2,Y3|X2,U)`, with `Ŷ2` at noise `Δ'`.
pub fn check_lemma2(n: usize, seed: u64) -> CheckResult {
    let mut t = Tracker::new("lemma2", ORACLE_TOL);
    let eval = |draw: &Draw| -> Result<Case, OracleError> {
        let m = model_of(draw)?;
        let o = Terms { m: &m };
        let relay = o.mi(&[X1], &[Y2], &[X2])?;
        let joint = o.mi(&[X1], &[Y3, Y2hat], &[X2])?;
        if relay < joint {
            return Ok(Case::Skip);
        }
        Ok(Case::Slack(o.mi(&[X1], &[Y2], &[X2, U])? - o.mi(&[X1], &[Y2hat, Y3], &[X2, U])?))
    };
    // ρ = γ = 1: both sides vanish.
    let edge = edge_draw(reference(0.3), 1.0, 1.0, 1.0, 1.0);
    match eval(&edge) {
        Ok(Case::Slack(s)) => t.record(s, || edge.witness()),
        Ok(Case::Skip) => t.notes.push("rho = 1 edge: premise false".into()),
        Err(e) => {
            t.notes.push(format!("rho = 1 edge: {e}"));
            t.record(f64::NEG_INFINITY, || edge.witness());
        }
    }
    let target = n + t.evaluated;
    let mut sampler = Sampler::new(seed, 2);
    run_draws(&mut t, &mut sampler, target, |s, k| lemma_draws(s, k, (0.05, 0.25)), eval);
    with_hit_rate(t.finish())
}

/// If `I(X1;Y2|X2) <= I(X1;Ŷ2,Y3|X2)` then `I(U;Y2|X2) <= I(U;Ŷ2,Y3|X2)`.
/// Also checks that at `γ = 1` both pairs coincide, and that at `γ = 0`
/// both U terms vanish.
pub fn check_lemma3(n: usize, seed: u64) -> CheckResult {
    let mut t = Tracker::new("lemma3", ORACLE_TOL);
    let eval = |draw: &Draw| -> Result<Case, OracleError> {
        let m = model_of(draw)?;
        let o = Terms { m: &m };
        let relay = o.mi(&[X1], &[Y2], &[X2])?;
        let joint = o.mi(&[X1], &[Y2hat, Y3], &[X2])?;
        if relay > joint {
            return Ok(Case::Skip);
        }
        let mut slack = o.mi(&[U], &[Y2hat, Y3], &[X2])? - o.mi(&[U], &[Y2], &[X2])?;
        if draw.sf.gamma() == 1.0 {
            slack = slack
                .min(-(o.mi(&[U], &[Y2], &[X2])? - relay).abs())
                .min(-(o.mi(&[U], &[Y2hat, Y3], &[X2])? - joint).abs());
        }
        if draw.sf.gamma() == 0.0 {
            slack = slack
                .min(-o.mi(&[U], &[Y2], &[X2])?.abs())
                .min(-o.mi(&[U], &[Y2hat, Y3], &[X2])?.abs());
        }
        Ok(Case::Slack(slack))
    };
    for edge in [
        edge_draw(reference(0.8), 0.3, 0.6, 1.0, 0.5),
        edge_draw(reference(0.9), 0.0, 0.0, 1.0, 0.2),
        edge_draw(reference(0.8), 0.7, 0.4, 0.0, 0.5),
    ] {
        match eval(&edge) {
            Ok(Case::Slack(s)) => t.record(s, || edge.witness()),
            Ok(Case::Skip) => t.notes.push(format!("edge {}: premise false", edge.witness())),
            Err(e) => {
                t.notes.push(format!("edge {}: {e}", edge.witness()));
                t.record(f64::NEG_INFINITY, || edge.witness());
            }
        }
    }
    let target = n + t.evaluated;
    let mut sampler = Sampler::new(seed, 3);
    run_draws(&mut t, &mut sampler, target, |s, k| lemma_draws(s, k, (0.6, 0.95)), eval);
    with_hit_rate(t.finish())
}

/// Slack of the compression-penalty chain at one SF point, comparing
/// against a CF description with noise `delta`. The construction only
/// applies to `delta == Δ'`; other values give `None`.
///
/// The slack is the minimum of the final inequality
/// `I(Ŷ2';Y2|X1,X2,U,Y3) − I(Ŷ2;Y2|X1,X2,Y3)` and the negated deviation of
/// the Markov step `h(Y2|X1,X2,U,Y3) = h(Y2|X1,X2,Y3)`.
pub fn penalty_chain_at(
    ch: &ChannelParams<f64>,
    sf: &SfParams<f64>,
    delta: f64,
) -> Result<Option<f64>, RateError> {
    if delta != sf.delta_prime() {
        return Ok(None);
    }
    // With Δ = Δ' the CF description has the same joint law with
    // (Y2, X1, X2, Y3) as the SF one, so one model serves both.
    let m = sf_model(ch, sf)?;
    let with_u = m.conditional_mi(&[Y2hat], &[Y2], &[X1, X2, U, Y3])?;
    let without_u = m.conditional_mi(&[Y2hat], &[Y2], &[X1, X2, Y3])?;
    let h_with = m.conditional_entropy(&[Y2], &[X1, X2, U, Y3])?;
    let h_without = m.conditional_entropy(&[Y2], &[X1, X2, Y3])?;
    Ok(Some((with_u - without_u).min(-(h_with - h_without).abs())))
}

pub fn check_penalty_chain(n: usize, seed: u64) -> CheckResult {
    let mut t = Tracker::new("penalty-chain", ORACLE_TOL);
    let mut sampler = Sampler::new(seed, 4);
    // U independent of everything: the chain holds with equality.
    let edge = edge_draw(reference(0.5), 0.0, 0.4, 0.0, 1.3);
    match penalty_chain_at(&edge.ch, &edge.sf, edge.sf.delta_prime()) {
        Ok(Some(s)) => {
            let m = model_of(&edge).expect("edge model");
            let with_u = m.conditional_mi(&[Y2hat], &[Y2], &[X1, X2, U, Y3]);
            let without_u = m.conditional_mi(&[Y2hat], &[Y2], &[X1, X2, Y3]);
            let eq = match (with_u, without_u) {
                (Ok(a), Ok(b)) => -(a - b).abs(),
                _ => f64::NEG_INFINITY,
            };
            t.record(s.min(eq), || edge.witness());
        }
        Ok(None) => unreachable!("edge uses delta = delta_prime"),
        Err(e) => {
            t.notes.push(format!("independent-U edge: {e}"));
            t.record(f64::NEG_INFINITY, || edge.witness());
        }
    }
    let target = n + 1;
    let mut k = 0usize;
    let mut mismatched = 0usize;
    let mut cap = 0usize;
    while t.evaluated < target && cap < 100 * target {
        cap += 1;
        let draw = sampler.draw(0.05, 0.95, DeltaRange::Feasible);
        k += 1;
        // Every fifth draw pairs a CF noise different from Δ'.
        let delta = if k.is_multiple_of(5) {
            draw.sf.delta_prime() * (1.0 + sampler.rng.gen::<f64>())
        } else {
            draw.sf.delta_prime()
        };
        match penalty_chain_at(&draw.ch, &draw.sf, delta) {
            Ok(Some(s)) => t.record(s, || draw.witness()),
            Ok(None) => {
                mismatched += 1;
                t.skipped += 1;
            }
            Err(RateError::Oracle(e)) if is_singular(&e) => t.rejected += 1,
            Err(e) => {
                t.notes.push(format!("error at {}: {e}", draw.witness()));
                t.record(f64::NEG_INFINITY, || draw.witness());
            }
        }
    }
    t.notes.push(format!("{mismatched} draws with delta != delta_prime skipped"));
    t.finish()
}

/// `I(X1;Y3,Ŷ2'|X2,U) + I(U;Y2|X2,V) <= max{I(X1;Y2|X2), I(X1;Ŷ2,Y3|X2)}`
/// with `Ŷ2` at noise `Δ'`. Half of the draws violate the relay-link
/// constraint, since the inequality is claimed without it.
pub fn check_main_inequality(n: usize, seed: u64) -> CheckResult {
    let mut t = Tracker::new("main-inequality", ORACLE_TOL);
    let eval = |draw: &Draw| -> Result<Case, OracleError> {
        let m = model_of(draw)?;
        let o = Terms { m: &m };
        let lhs = o.mi(&[X1], &[Y3, Y2hat], &[X2, U])? + o.mi(&[U], &[Y2], &[X2, V])?;
        let rhs = o.mi(&[X1], &[Y2], &[X2])?.max(o.mi(&[X1], &[Y2hat, Y3], &[X2])?);
        Ok(Case::Slack(rhs - lhs))
    };
    for edge in [
        edge_draw(reference(0.5), 0.0, 0.0, 0.0, 1.3),
        edge_draw(reference(0.2), 0.5, 0.5, 1.0, 2.0),
        edge_draw(reference(0.8), 0.9, 0.2, 1.0, 0.1),
    ] {
        match eval(&edge) {
            Ok(Case::Slack(s)) => t.record(s, || edge.witness()),
            Ok(Case::Skip) => unreachable!(),
            Err(e) => {
                t.notes.push(format!("edge {}: {e}", edge.witness()));
                t.record(f64::NEG_INFINITY, || edge.witness());
            }
        }
    }
    let target = n + t.evaluated;
    let mut sampler = Sampler::new(seed, 5);
    let mut infeasible = 0usize;
    run_draws(
        &mut t,
        &mut sampler,
        target,
        |s, k| {
            if k % 2 == 0 {
                s.draw(0.05, 0.95, DeltaRange::Feasible)
            } else {
                infeasible += 1;
                s.draw(0.05, 0.95, DeltaRange::Infeasible)
            }
        },
        eval,
    );
    t.notes.push(format!("{infeasible} draws below delta_SF"));
    t.finish()
}

/// The default distance list: 0.05, 0.10, …, 0.95.
pub fn sweep_distances() -> Vec<f64> {
    (1..=19).map(|k| k as f64 / 20.0).collect()
}

fn search_failure(t: &mut Tracker, d: f64, e: &SearchError) {
    t.notes.push(format!("search failed at d={d}: {e}"));
    t.record(f64::NEG_INFINITY, || Witness(vec![("d", d)]));
}

/// `|R_SF − max(R_DF, R_CF)| <= 1e-4` at each distance on the reference
/// channel.
pub fn check_theorem2(d_list: &[f64], cfg: &SearchConfig) -> CheckResult {
    let mut t = Tracker::new("theorem2", SEARCH_TOL);
    let mut max_excess = f64::NEG_INFINITY;
    for &d in d_list {
        let ch = reference(d);
        let run = || -> Result<_, SearchError> {
            let (_, df) = search::maximize_df(&ch, cfg)?;
            let (_, cf) = search::maximize_cf(&ch, cfg)?;
            let (sf, r) = search::maximize_sf(&ch, cfg)?;
            Ok((df, cf, sf, r))
        };
        match run() {
            Ok((df, cf, sf, r)) => {
                let excess = r - df.max(cf);
                max_excess = max_excess.max(excess);
                t.record(-excess.abs(), || {
                    Witness(vec![
                        ("d", d),
                        ("r_sf", r),
                        ("r_df", df),
                        ("r_cf", cf),
                        ("alpha", sf.alpha()),
                        ("beta", sf.beta()),
                        ("gamma", sf.gamma()),
                        ("delta_prime", sf.delta_prime()),
                    ])
                });
            }
            Err(e) => search_failure(&mut t, d, &e),
        }
    }
    t.notes.push(format!("largest R_SF - max(R_DF, R_CF) = {max_excess:e}"));
    t.finish()
}

/// `R_BDF <= R_DF + 1e-9`, both at every point of a 21×21 simplex grid
/// and for the optimized broadcast rate.
pub fn check_bdf_reduction(d_list: &[f64], cfg: &SearchConfig) -> CheckResult {
    let mut t = Tracker::new("bdf-reduction", ORACLE_TOL);
    const N: usize = 20;
    for &d in d_list {
        let ch = reference(d);
        let df = match search::maximize_df(&ch, cfg) {
            Ok((_, r)) => r,
            Err(e) => {
                search_failure(&mut t, d, &e);
                continue;
            }
        };
        for i in 0..=N {
            for j in 0..=(N - i) {
                let (tu, t2) = (i as f64 / N as f64, j as f64 / N as f64);
                let w = || Witness(vec![("d", d), ("theta_u", tu), ("theta_2", t2)]);
                match BdfParams::new(tu, t2).map_err(RateError::from).and_then(|p| r_bdf_at(&ch, &p)) {
                    Ok(r) => t.record(df - r, w),
                    Err(e) => {
                        t.notes.push(format!("error at {}: {e}", w()));
                        t.record(f64::NEG_INFINITY, w);
                    }
                }
            }
        }
        match search::maximize_bdf(&ch, cfg) {
            Ok((p, r)) => t.record(df - r, || {
                Witness(vec![("d", d), ("theta_u", p.theta_u()), ("theta_2", p.theta_2())])
            }),
            Err(e) => search_failure(&mut t, d, &e),
        }
    }
    t.finish()
}

/// At `Δ_CF` the two CF terms agree within 1e-9, and nothing on a log scan
/// of `[Δ_CF/10, 10 Δ_CF]` improves by more than 1e-7.
pub fn check_cf_optimum(d_list: &[f64], cfg: &SearchConfig) -> CheckResult {
    let mut t = Tracker::new("cf-optimum", 0.0);
    const SCAN: usize = 401;
    for &d in d_list {
        let ch = reference(d);
        let delta = match delta_cf(&ch) {
            Ok(v) => v,
            Err(e) => {
                search_failure(&mut t, d, &SearchError::from(e));
                continue;
            }
        };
        let (first, second) = cf_terms(&ch, delta);
        t.record(ORACLE_TOL - (first - second).abs(), || {
            Witness(vec![("d", d), ("delta_cf", delta), ("first", first), ("second", second)])
        });
        let rate = r_cf_at(&ch, delta);
        for k in 0..SCAN {
            let trial = delta * 10f64.powf(-1.0 + 2.0 * k as f64 / (SCAN - 1) as f64);
            let gain = r_cf_at(&ch, trial) - rate;
            t.record(1e-7 - gain, || Witness(vec![("d", d), ("delta", trial), ("gain", gain)]));
        }
        if let Err(e) = search::maximize_cf(&ch, cfg) {
            search_failure(&mut t, d, &e);
        }
    }
    t.finish()
}

/// `Δ_SF(0, 0, 0) = Δ_CF` to 1e-12 relative, and `Δ_SF < Δ_CF` for
/// `α = 1, β = 0, γ > 0`.
pub fn check_delta_sf(d_list: &[f64]) -> CheckResult {
    let mut t = Tracker::new("delta-sf", 0.0);
    for &d in d_list {
        let ch = reference(d);
        let (Ok(cf), Ok(sf0)) = (delta_cf(&ch), delta_sf(&ch, 0.0, 0.0, 0.0)) else {
            t.notes.push(format!("delta undefined at d={d}"));
            t.record(f64::NEG_INFINITY, || Witness(vec![("d", d)]));
            continue;
        };
        let rel = (sf0 - cf).abs() / cf;
        t.record(1e-12 - rel, || Witness(vec![("d", d), ("delta_cf", cf), ("delta_sf", sf0)]));
        for k in 1..=10 {
            let gamma = k as f64 / 10.0;
            match delta_sf(&ch, 1.0, 0.0, gamma) {
                Ok(v) => t.record((cf - v) / cf, || {
                    Witness(vec![("d", d), ("gamma", gamma), ("delta_cf", cf), ("delta_sf", v)])
                }),
                Err(e) => {
                    t.notes.push(format!("d={d} gamma={gamma}: {e}"));
                    t.record(f64::NEG_INFINITY, || Witness(vec![("d", d), ("gamma", gamma)]));
                }
            }
        }
    }
    t.finish()
}

/// DF/CF crossover on the reference channel, by bisection of
/// `R_DF − R_CF` over `[0.05, 0.95]`.
pub fn crossover(cfg: &SearchConfig) -> Result<f64, SearchError> {
    let gap = |d: f64| -> Result<f64, SearchError> {
        let ch = reference(d);
        Ok(search::maximize_df(&ch, cfg)?.1 - search::maximize_cf(&ch, cfg)?.1)
    };
    let (mut lo, mut hi) = (0.05, 0.95);
    if !(gap(lo)? > 0.0 && gap(hi)? < 0.0) {
        return Err(SearchError::Config("R_DF - R_CF does not change sign on [0.05, 0.95]".into()));
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if gap(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The individual regime checks on the reference channel, each with zero
/// tolerance and slack measured against its own bound.
pub fn regime_checks(cfg: &SearchConfig) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let rates_at = |d: f64| -> Result<(f64, f64, f64), SearchError> {
        let ch = reference(d);
        let (_, df) = search::maximize_df(&ch, cfg)?;
        let (_, cf) = search::maximize_cf(&ch, cfg)?;
        let (_, cs) = search::maximize_cutset(&ch, cfg)?;
        Ok((df, cf, cs))
    };
    type Rule = fn(f64, f64, f64) -> f64;
    let cases: [(&'static str, f64, Rule); 4] = [
        ("regime-near-source", 0.1, |df, _, cs| 1e-6 - (df - cs).abs()),
        ("regime-middle", 0.4, |df, cf, cs| (df - cf).min(cs - 1e-3 - df)),
        ("regime-far", 0.8, |df, cf, _| cf - df),
        ("regime-near-relay", 0.999, |_, cf, cs| 1e-2 - (cf - cs).abs()),
    ];
    for (name, d, rule) in cases {
        let mut t = Tracker::new(name, 0.0);
        match rates_at(d) {
            Ok((df, cf, cs)) => t.record(rule(df, cf, cs), || {
                Witness(vec![("d", d), ("r_df", df), ("r_cf", cf), ("r_cs", cs)])
            }),
            Err(e) => search_failure(&mut t, d, &e),
        }
        out.push(t.finish());
    }
    let mut t = Tracker::new("regime-crossover", 0.0);
    match crossover(cfg) {
        Ok(x) => t.record((x - 0.5).min(0.7 - x), || Witness(vec![("d", x)])),
        Err(e) => search_failure(&mut t, f64::NAN, &e),
    }
    out.push(t.finish());
    out
}

pub fn check_regimes(cfg: &SearchConfig) -> CheckResult {
    let parts = regime_checks(cfg);
    let mut t = Tracker::new("regimes", 0.0);
    for p in &parts {
        t.notes.push(format!(
            "{}: {} (slack {:e}, {})",
            p.name,
            if p.passed { "pass" } else { "fail" },
            p.worst_slack,
            p.witness
        ));
        if p.evaluated == 0 {
            t.record(f64::NEG_INFINITY, || Witness(vec![]));
        } else {
            let w = p.witness.clone();
            t.record(p.worst_slack, || w);
        }
    }
    t.finish()
}

/// Selects a subset of the suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    ClosedForms,
    Lemma1,
    Lemma2,
    Lemma3,
    PenaltyChain,
    MainInequality,
    Theorem2,
    BdfReduction,
    CfOptimum,
    DeltaSf,
    Regimes,
}

impl Suite {
    pub const NAMES: [&'static str; 12] = [
        "all",
        "closed-forms",
        "lemma1",
        "lemma2",
        "lemma3",
        "penalty-chain",
        "main-inequality",
        "theorem2",
        "bdf-reduction",
        "cf-optimum",
        "delta-sf",
        "regimes",
    ];

    const ALL: [Suite; 12] = [
        Suite::All,
        Suite::ClosedForms,
        Suite::Lemma1,
        Suite::Lemma2,
        Suite::Lemma3,
        Suite::PenaltyChain,
        Suite::MainInequality,
        Suite::Theorem2,
        Suite::BdfReduction,
        Suite::CfOptimum,
        Suite::DeltaSf,
        Suite::Regimes,
    ];

    pub fn name(self) -> &'static str {
        Self::NAMES[Self::ALL.iter().position(|&s| s == self).expect("listed")]
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown suite '{0}' (expected one of: {list})", list = Suite::NAMES.join(", "))]
pub struct UnknownSuite(pub String);

impl FromStr for Suite {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::NAMES
            .iter()
            .position(|&n| n == s)
            .map(|i| Self::ALL[i])
            .ok_or_else(|| UnknownSuite(s.to_string()))
    }
}

/// Knobs of a suite run.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub draws: usize,
    pub lemma1_step: f64,
    pub distances: Vec<f64>,
    pub search: SearchConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 1,
            draws: 1000,
            lemma1_step: 0.05,
            distances: sweep_distances(),
            search: SearchConfig::default(),
        }
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Vec<CheckResult> {
    let want = |s: Suite| suite == Suite::All || suite == s;
    let mut out = Vec::new();
    if want(Suite::ClosedForms) {
        out.push(check_closed_forms(cfg.draws, cfg.seed));
    }
    if want(Suite::Lemma1) {
        out.push(check_lemma1(cfg.lemma1_step));
    }
    if want(Suite::Lemma2) {
        out.push(check_lemma2(cfg.draws, cfg.seed));
    }
    if want(Suite::Lemma3) {
        out.push(check_lemma3(cfg.draws, cfg.seed));
    }
    if want(Suite::PenaltyChain) {
        out.push(check_penalty_chain(cfg.draws, cfg.seed));
    }
    if want(Suite::MainInequality) {
        out.push(check_main_inequality(cfg.draws, cfg.seed));
    }
    if want(Suite::Theorem2) {
        out.push(check_theorem2(&cfg.distances, &cfg.search));
    }
    if want(Suite::BdfReduction) {
        out.push(check_bdf_reduction(&cfg.distances, &cfg.search));
    }
    if want(Suite::CfOptimum) {
        out.push(check_cf_optimum(&cfg.distances, &cfg.search));
    }
    if want(Suite::DeltaSf) {
        out.push(check_delta_sf(&cfg.distances));
    }
    if want(Suite::Regimes) {
        out.push(check_regimes(&cfg.search));
    }
    out
}

/// Aligned table with notes, for people.
pub fn human_report(results: &[CheckResult]) -> String {
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut s = String::new();
    for r in results {
        s.push_str(&format!(
            "{:<width$}  {}  worst slack {:>12.4e}  (tol {:.0e}, {} cases",
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            r.worst_slack,
            r.tolerance,
            r.evaluated,
        ));
        if r.skipped > 0 {
            s.push_str(&format!(", {} skipped", r.skipped));
        }
        if r.rejected > 0 {
            s.push_str(&format!(", {} rejected", r.rejected));
        }
        s.push_str(")\n");
        if !r.passed {
            s.push_str(&format!("{:width$}  witness {}\n", "", r.witness));
        }
        for n in &r.notes {
            s.push_str(&format!("{:width$}  {n}\n", ""));
        }
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    s.push_str(&format!("{} checks, {} failed\n", results.len(), failed));
    s
}

pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for name in Suite::NAMES {
            let s: Suite = name.parse().unwrap();
            assert_eq!(s.name(), name);
        }
        let err = "lemma9".parse::<Suite>().unwrap_err();
        assert!(err.to_string().contains("lemma9"));
    }

    #[test]
    fn tracker_requires_a_case() {
        let r = Tracker::new("x", 1.0).finish();
        assert!(!r.passed);
        assert_eq!(r.worst_slack, f64::NEG_INFINITY);
    }

    #[test]
    fn tracker_keeps_worst_witness() {
        let mut t = Tracker::new("x", 0.1);
        t.record(0.5, || Witness(vec![("a", 1.0)]));
        t.record(-0.05, || Witness(vec![("a", 2.0)]));
        t.record(0.0, || Witness(vec![("a", 3.0)]));
        let r = t.finish();
        assert!(r.passed);
        assert_eq!(r.witness, Witness(vec![("a", 2.0)]));
        let mut t = Tracker::new("x", 0.1);
        t.record(f64::NAN, || Witness(vec![]));
        assert!(!t.finish().passed);
    }

    #[test]
    fn sampler_is_seeded_and_in_range() {
        let mut a = Sampler::new(7, 1);
        let mut b = Sampler::new(7, 1);
        for _ in 0..200 {
            let (x, y) = (a.draw(0.05, 0.95, DeltaRange::Feasible), b.draw(0.05, 0.95, DeltaRange::Feasible));
            assert_eq!(x, y);
            assert!((0.05..0.95).contains(&x.d));
            assert!(crate::rates::sf_feasible(&x.ch, &x.sf));
        }
        let mut c = Sampler::new(7, 1);
        for _ in 0..200 {
            let x = c.draw(0.05, 0.95, DeltaRange::Infeasible);
            assert!(!crate::rates::sf_feasible(&x.ch, &x.sf));
        }
    }

    #[test]
    fn penalty_chain_skips_mismatched_noise() {
        let ch = reference(0.5);
        let sf = SfParams::new(0.3, 0.3, 0.3, 2.0).unwrap();
        assert_eq!(penalty_chain_at(&ch, &sf, 2.5).unwrap(), None);
        assert!(penalty_chain_at(&ch, &sf, 2.0).unwrap().unwrap() >= -ORACLE_TOL);
    }

    #[test]
    fn small_suites_pass() {
        for r in [
            check_closed_forms(50, 3),
            check_lemma1(0.25),
            check_lemma2(50, 3),
            check_lemma3(50, 3),
            check_penalty_chain(50, 3),
            check_main_inequality(50, 3),
            check_delta_sf(&[0.3, 0.7]),
        ] {
            assert!(r.passed, "{}", human_report(std::slice::from_ref(&r)));
        }
    }

    #[test]
    fn summary_line_shape() {
        let r = check_lemma1(1.0);
        let line = r.summary_line();
        assert!(line.starts_with("check=lemma1 status=PASS worst_slack="));
        assert!(line.contains("evaluated=9"));
    }
}
