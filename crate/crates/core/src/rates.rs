//! Closed-form rate expressions under jointly Gaussian inputs.
//!
//! All rates are in bits per channel use. The compression noise variance
//! may be `+∞` wherever it appears; the expressions are written so that
//! the limit comes out directly (no compressed observation, zero penalty).

use thiserror::Error;

use crate::channel::{bdf_model, cutset_model, BdfParams, ChannelError, ChannelParams, SfParams};
use crate::oracle::{OracleError, VarLabel};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RateError {
    #[error("capacity argument {0} is negative")]
    NegativeSnr(f64),
    #[error("relay link has zero capacity (b²P2 = 0); compression cannot be conveyed")]
    NoRelayLink,
    #[error("beta = 1 leaves the relay no rate for the compressed description; the compression constraint is unbounded")]
    UnboundedCompressionConstraint,
    #[error("compression noise {delta_prime} violates the relay-link constraint (needs >= {delta_sf})")]
    ConstraintViolated { delta_prime: f64, delta_sf: f64 },
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Gaussian capacity function `C(x) = ½·log2(1 + x)`.
pub fn c_of<T: Scalar>(x: T) -> Result<T, RateError> {
    if !(x >= T::zero()) {
        return Err(RateError::NegativeSnr(x.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(cap(x))
}

// Arguments are nonnegative by construction at every call site.
fn cap<T: Scalar>(x: T) -> T {
    x.ln_1p() / (T::lit(2.0) * T::lit(std::f64::consts::LN_2))
}

/// Effective SNR per unit of source power seen jointly through
/// `(Ŷ2, Y3)` given X2: `((N1+Δ) + a²N2) / ((N1+Δ) N2)`.
fn combining_gain<T: Scalar>(ch: &ChannelParams<T>, delta: T) -> T {
    T::one() / ch.n2() + ch.a() * ch.a() / (ch.n1() + delta)
}

fn one_minus_sq<T: Scalar>(x: T) -> T {
    (T::one() - x * x).max(T::zero())
}

/// `I(X1; Y2 | X2)`.
pub fn mi_g1<T: Scalar>(ch: &ChannelParams<T>, rho: T) -> T {
    cap(ch.a() * ch.a() * ch.p1() * one_minus_sq(rho) / ch.n1())
}

/// `I(X1; Y2 | X2, U)`.
pub fn mi_g2<T: Scalar>(ch: &ChannelParams<T>, gamma: T) -> T {
    mi_g1(ch, gamma)
}

/// `I(X1; Ŷ2, Y3 | X2)` with `Ŷ2 = Y2 + Zw`, `Var(Zw) = delta`.
pub fn mi_g3<T: Scalar>(ch: &ChannelParams<T>, rho: T, delta: T) -> T {
    cap(ch.p1() * one_minus_sq(rho) * combining_gain(ch, delta))
}

/// `I(X1; Ŷ2, Y3 | X2, U)`.
pub fn mi_g4<T: Scalar>(ch: &ChannelParams<T>, gamma: T, delta: T) -> T {
    mi_g3(ch, gamma, delta)
}

/// `I(U; Y2 | X2)`; requires `rho <= gamma`.
pub fn mi_r2<T: Scalar>(ch: &ChannelParams<T>, gamma: T, rho: T) -> T {
    debug_assert!(rho <= gamma);
    let a2p1 = ch.a() * ch.a() * ch.p1();
    let num = a2p1 * (gamma * gamma - rho * rho).max(T::zero());
    cap(num / (ch.n1() + a2p1 * one_minus_sq(gamma)))
}

/// `I(U; Ŷ2, Y3 | X2)`; requires `rho <= gamma`.
pub fn mi_r4<T: Scalar>(ch: &ChannelParams<T>, gamma: T, rho: T, delta: T) -> T {
    debug_assert!(rho <= gamma);
    let g = combining_gain(ch, delta);
    let num = ch.p1() * (gamma * gamma - rho * rho).max(T::zero()) * g;
    cap(num / (T::one() + ch.p1() * one_minus_sq(gamma) * g))
}

/// `I(U; Y2 | X2, V)`.
pub fn mi_u_y2_x2v<T: Scalar>(ch: &ChannelParams<T>, alpha: T, gamma: T) -> T {
    let a2p1 = ch.a() * ch.a() * ch.p1();
    let num = a2p1 * gamma * gamma * one_minus_sq(alpha);
    cap(num / (ch.n1() + a2p1 * one_minus_sq(gamma)))
}

/// Multiple-access cut `I(X1, X2; Y3)` at input correlation `rho`.
pub fn mi_x1x2_y3<T: Scalar>(ch: &ChannelParams<T>, rho: T) -> T {
    let coherent = T::lit(2.0) * rho * ch.b() * (ch.p1() * ch.p2()).sqrt();
    let signal = ch.p1() + ch.b() * ch.b() * ch.p2() + coherent;
    cap(signal.max(T::zero()) / ch.n2())
}

/// Compression penalty `I(Ŷ2; Y2 | U, X1, X2, Y3) = C(N1/Δ)`.
pub fn mi_penalty<T: Scalar>(ch: &ChannelParams<T>, delta: T) -> T {
    cap(ch.n1() / delta)
}

/// Smallest compression noise the relay link can carry under CF.
pub fn delta_cf<T: Scalar>(ch: &ChannelParams<T>) -> Result<T, RateError> {
    let link = ch.b() * ch.b() * ch.p2();
    if !(link > T::zero()) {
        return Err(RateError::NoRelayLink);
    }
    let n1n2 = ch.n1() * ch.n2();
    Ok((n1n2 + (ch.n1() + ch.a() * ch.a() * ch.n2()) * ch.p1()) / link)
}

/// Smallest `Δ'` satisfying the SF relay-link constraint
/// `I(X2; Y3 | V) >= I(Ŷ2'; Y2 | X2, Y3, U)`.
pub fn delta_sf<T: Scalar>(ch: &ChannelParams<T>, alpha: T, beta: T, gamma: T) -> Result<T, RateError> {
    let link = ch.b() * ch.b() * ch.p2();
    if !(link > T::zero()) {
        return Err(RateError::NoRelayLink);
    }
    let free = one_minus_sq(beta);
    if !(free > T::zero()) {
        return Err(RateError::UnboundedCompressionConstraint);
    }
    let (n1, n2, p1) = (ch.n1(), ch.n2(), ch.p1());
    let resid = p1 * one_minus_sq(gamma);
    let interference = n2 + p1 * one_minus_sq(alpha * gamma);
    let num = interference * (n1 * n2 + (n1 + ch.a() * ch.a() * n2) * resid);
    Ok(num / (link * free * (n2 + resid)))
}

/// Whether `sf` satisfies the relay-link constraint. Points where the
/// required `Δ'` is unbounded are feasible only with `Δ' = ∞`.
pub fn sf_feasible<T: Scalar>(ch: &ChannelParams<T>, sf: &SfParams<T>) -> bool {
    match delta_sf(ch, sf.alpha(), sf.beta(), sf.gamma()) {
        Ok(bound) => sf.delta_prime() >= bound,
        Err(_) => sf.delta_prime().is_infinite(),
    }
}

/// DF rate at input correlation `rho`.
pub fn r_df_at<T: Scalar>(ch: &ChannelParams<T>, rho: T) -> T {
    mi_g1(ch, rho).min(mi_x1x2_y3(ch, rho))
}

/// The two terms of the CF rate at independent inputs:
/// `(I(X1; Ŷ2, Y3 | X2), I(X1, X2; Y3) − I(Ŷ2; Y2 | X1, X2, Y3))`.
pub fn cf_terms<T: Scalar>(ch: &ChannelParams<T>, delta: T) -> (T, T) {
    let zero = T::zero();
    (
        mi_g3(ch, zero, delta),
        mi_x1x2_y3(ch, zero) - mi_penalty(ch, delta),
    )
}

pub fn r_cf_at<T: Scalar>(ch: &ChannelParams<T>, delta: T) -> T {
    let (first, second) = cf_terms(ch, delta);
    first.min(second)
}

/// The two terms of the SF rate:
/// `(I(X1; Y3, Ŷ2' | X2, U) + I(U; Y2 | X2, V), I(X1, X2; Y3) − I(Ŷ2'; Y2 | U, X1, X2, Y3))`.
pub fn sf_terms<T: Scalar>(ch: &ChannelParams<T>, sf: &SfParams<T>) -> (T, T) {
    let dp = sf.delta_prime();
    (
        mi_g4(ch, sf.gamma(), dp) + mi_u_y2_x2v(ch, sf.alpha(), sf.gamma()),
        mi_x1x2_y3(ch, sf.rho()) - mi_penalty(ch, dp),
    )
}

/// Whether [`r_sf_at`] enforces the relay-link constraint on `Δ'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constraint {
    Enforced,
    Unconstrained,
}

pub fn r_sf_at<T: Scalar>(
    ch: &ChannelParams<T>,
    sf: &SfParams<T>,
    constraint: Constraint,
) -> Result<T, RateError> {
    if constraint == Constraint::Enforced && !sf_feasible(ch, sf) {
        let bound = delta_sf(ch, sf.alpha(), sf.beta(), sf.gamma())
            .map(|v| v.to_f64().unwrap_or(f64::NAN))
            .unwrap_or(f64::INFINITY);
        return Err(RateError::ConstraintViolated {
            delta_prime: sf.delta_prime().to_f64().unwrap_or(f64::NAN),
            delta_sf: bound,
        });
    }
    let (first, second) = sf_terms(ch, sf);
    Ok(first.min(second))
}

/// Broadcast-over-DF rate, evaluated on the covariance oracle:
/// `min{I(U;Y3), I(U;Y2|X2)} + min{I(X1;Y2|X2,U), I(X1,X2;Y3|U)}`.
pub fn r_bdf_at<T: Scalar>(ch: &ChannelParams<T>, bdf: &BdfParams<T>) -> Result<T, RateError> {
    use VarLabel::*;
    let m = bdf_model(ch, bdf)?;
    let broadcast = m
        .conditional_mi(&[U], &[Y3], &[])?
        .min(m.conditional_mi(&[U], &[Y2], &[X2])?);
    let forwarded = m
        .conditional_mi(&[X1], &[Y2], &[X2, U])?
        .min(m.conditional_mi(&[X1, X2], &[Y3], &[U])?);
    Ok(broadcast + forwarded)
}

/// Which broadcast cut the cut-set bound uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CutSetVariant {
    /// `I(X1; Y2, Y3 | X2)`, the standard bound.
    #[default]
    Conditioned,
    /// `I(X1; Y2, Y3)` as literally written without conditioning on X2.
    Literal,
}

/// Broadcast cut of the cut-set bound, from the oracle.
pub fn broadcast_cut<T: Scalar>(
    ch: &ChannelParams<T>,
    rho: T,
    variant: CutSetVariant,
) -> Result<T, RateError> {
    use VarLabel::*;
    let m = cutset_model(ch, rho)?;
    let given: &[VarLabel] = match variant {
        CutSetVariant::Conditioned => &[X2],
        CutSetVariant::Literal => &[],
    };
    Ok(m.conditional_mi(&[X1], &[Y2, Y3], given)?)
}

pub fn r_cutset_at<T: Scalar>(
    ch: &ChannelParams<T>,
    rho: T,
    variant: CutSetVariant,
) -> Result<T, RateError> {
    Ok(mi_x1x2_y3(ch, rho).min(broadcast_cut(ch, rho, variant)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::sf_model;
    use approx::assert_abs_diff_eq;

    fn reference(d: f64) -> ChannelParams<f64> {
        ChannelParams::from_geometry(d, 5.0, 5.0, 1.0, 1.0).unwrap()
    }

    fn c(x: f64) -> f64 {
        0.5 * (1.0 + x).log2()
    }

    #[test]
    fn capacity_function() {
        assert_eq!(c_of(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(c_of(1.0).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(c_of(20.0).unwrap(), 0.5 * 21f64.log2(), epsilon = 1e-15);
        assert_abs_diff_eq!(c_of(20.0).unwrap(), 2.196_158_711_389_380_3, epsilon = 1e-12);
        assert!(c_of(-1e-3).is_err());
        assert!(c_of(f64::NAN).is_err());
    }

    #[test]
    fn g_family_edges() {
        let ch = reference(0.5);
        assert_eq!(mi_g1(&ch, 1.0), 0.0);
        assert_abs_diff_eq!(mi_g1(&ch, 0.0), 2.196_158_711_389_380_3, epsilon = 1e-12);
        assert_eq!(mi_g2(&ch, 1.0), 0.0);
        assert_eq!(mi_g2(&ch, 0.0), mi_g1(&ch, 0.0));
        assert_eq!(mi_g3(&ch, 1.0, 2.0), 0.0);
        assert_abs_diff_eq!(mi_g3(&ch, 0.3, 1e9), c(5.0 * 0.91), epsilon = 1e-6);
        assert_abs_diff_eq!(mi_g3(&ch, 0.3, f64::INFINITY), c(5.0 * 0.91), epsilon = 1e-15);
        assert_eq!(mi_g4(&ch, 0.0, 1.7), mi_g3(&ch, 0.0, 1.7));
        assert_eq!(mi_g4(&ch, 1.0, 1.7), 0.0);
    }

    #[test]
    fn g3_matches_literal_form() {
        let ch = reference(0.3);
        let (a, n1, n2, p1) = (ch.a(), 1.0, 1.0, 5.0);
        for &(rho, delta) in &[(0.0, 1.3), (0.4, 0.2), (0.9, 17.0)] {
            let lit = c(p1 * (1.0 - rho * rho) * ((n1 + delta) + a * a * n2) / ((n1 + delta) * n2));
            assert_abs_diff_eq!(mi_g3(&ch, rho, delta), lit, epsilon = 1e-13);
        }
    }

    #[test]
    fn r_family_edges() {
        let ch = reference(0.4);
        assert_eq!(mi_r2(&ch, 0.6, 0.6), 0.0);
        assert_abs_diff_eq!(mi_r2(&ch, 1.0, 0.3), mi_g1(&ch, 0.3), epsilon = 1e-13);
        assert_eq!(mi_r4(&ch, 0.6, 0.6, 2.0), 0.0);
        assert_abs_diff_eq!(mi_r4(&ch, 1.0, 0.3, 2.0), mi_g3(&ch, 0.3, 2.0), epsilon = 1e-13);
    }

    #[test]
    fn section_v_terms() {
        let ch = reference(0.5);
        assert_eq!(mi_u_y2_x2v(&ch, 1.0, 0.7), 0.0);
        assert_eq!(mi_u_y2_x2v(&ch, 0.3, 0.0), 0.0);
        assert_abs_diff_eq!(mi_x1x2_y3(&ch, 0.0), 0.5 * 26f64.log2(), epsilon = 1e-13);
        assert_abs_diff_eq!(mi_x1x2_y3(&ch, 0.0), 2.350_219_859_070_546, epsilon = 1e-12);
        assert_abs_diff_eq!(mi_x1x2_y3(&ch, 1.0), 0.5 * 46f64.log2(), epsilon = 1e-13);
        assert!(mi_penalty(&ch, 1e9) < 1e-6);
        assert_eq!(mi_penalty(&ch, f64::INFINITY), 0.0);
        assert_abs_diff_eq!(mi_penalty(&ch, 1.0), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn compression_thresholds() {
        let ch = reference(0.5);
        assert_abs_diff_eq!(delta_cf(&ch).unwrap(), 1.3, epsilon = 1e-14);
        let silent = ChannelParams::new(2.0, 2.0, 1.0, 1.0, 0.0, 5.0).unwrap();
        assert_abs_diff_eq!(delta_cf(&silent).unwrap(), 1.0 / 20.0, epsilon = 1e-15);
        let no_relay = ChannelParams::new(2.0, 2.0, 1.0, 1.0, 5.0, 0.0).unwrap();
        assert_eq!(delta_cf(&no_relay).unwrap_err(), RateError::NoRelayLink);

        assert_abs_diff_eq!(
            delta_sf(&ch, 0.0, 0.0, 0.0).unwrap(),
            delta_cf(&ch).unwrap(),
            epsilon = 1e-14
        );
        let sf = delta_sf(&ch, 1.0, 0.0, 0.5).unwrap();
        assert_abs_diff_eq!(sf, 0.9875, epsilon = 1e-14);
        assert!(sf < delta_cf(&ch).unwrap());
        assert_eq!(
            delta_sf(&ch, 0.5, 1.0, 0.5).unwrap_err(),
            RateError::UnboundedCompressionConstraint
        );
    }

    #[test]
    fn delta_sf_equalizes_the_link_constraint() {
        use VarLabel::*;
        let ch = reference(0.5);
        let ds = delta_sf(&ch, 1.0, 0.0, 0.5).unwrap();
        let m = sf_model(&ch, &SfParams::new(1.0, 0.0, 0.5, ds).unwrap()).unwrap();
        let link = m.conditional_mi(&[X2], &[Y3], &[V]).unwrap();
        let need = m.conditional_mi(&[Y2hat], &[Y2], &[X2, Y3, U]).unwrap();
        assert_abs_diff_eq!(link, need, epsilon = 1e-12);
        assert_abs_diff_eq!(link, 1.190_714_553_318_012, epsilon = 1e-12);
    }

    #[test]
    fn df_points() {
        let ch = reference(0.5);
        assert_abs_diff_eq!(r_df_at(&ch, 0.0), 0.5 * 21f64.log2(), epsilon = 1e-13);
        assert_eq!(r_df_at(&ch, 1.0), 0.0);
        // Close to the source the relay link is strong and the MAC term binds.
        let near = reference(0.05);
        assert!(mi_g1(&near, 0.0) > mi_x1x2_y3(&near, 0.0));
        assert_abs_diff_eq!(r_df_at(&near, 0.0), 1.764_296_048_576_737_8, epsilon = 1e-12);
    }

    #[test]
    fn cf_points() {
        let ch = reference(0.5);
        let (first, second) = cf_terms(&ch, delta_cf(&ch).unwrap());
        assert_abs_diff_eq!(first, second, epsilon = 1e-9);
        let expect = 0.5 * (1.0 + 5.0 * 6.3 / 2.3f64).log2();
        assert_abs_diff_eq!(r_cf_at(&ch, 1.3), expect, epsilon = 1e-13);
        assert_abs_diff_eq!(r_cf_at(&ch, 1.3), 1.938_658_740_112_585_7, epsilon = 1e-12);
        let far = r_cf_at(&ch, f64::INFINITY);
        assert_abs_diff_eq!(far, c(5.0).min(mi_x1x2_y3(&ch, 0.0)), epsilon = 1e-15);
    }

    #[test]
    fn sf_special_cases() {
        let ch = reference(0.5);
        let dcf = delta_cf(&ch).unwrap();
        let cf_corner = SfParams::new(0.0, 0.0, 0.0, dcf).unwrap();
        assert_abs_diff_eq!(
            r_sf_at(&ch, &cf_corner, Constraint::Enforced).unwrap(),
            r_cf_at(&ch, dcf),
            epsilon = 1e-15
        );
        // γ = β = 1, Δ' = ∞: DF at ρ = α.
        for rho in [0.0, 0.25, 0.5, 0.9] {
            let df_corner = SfParams::new(rho, 1.0, 1.0, f64::INFINITY).unwrap();
            assert_abs_diff_eq!(
                r_sf_at(&ch, &df_corner, Constraint::Enforced).unwrap(),
                r_df_at(&ch, rho),
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn sf_reference_point() {
        let ch = reference(0.5);
        let bound = delta_sf(&ch, 0.8, 0.5, 0.9).unwrap();
        assert_abs_diff_eq!(bound, 0.669_948_717_948_717_7, epsilon = 1e-13);
        let sf = SfParams::new(0.8, 0.5, 0.9, bound.max(2.0)).unwrap();
        let rate = r_sf_at(&ch, &sf, Constraint::Enforced).unwrap();
        assert_abs_diff_eq!(rate, 1.416_436_570_219_926_2, epsilon = 1e-12);
    }

    #[test]
    fn sf_constraint_modes() {
        let ch = reference(0.5);
        let below = SfParams::new(0.0, 0.0, 0.0, 0.5).unwrap();
        assert!(matches!(
            r_sf_at(&ch, &below, Constraint::Enforced),
            Err(RateError::ConstraintViolated { .. })
        ));
        assert!(r_sf_at(&ch, &below, Constraint::Unconstrained).is_ok());
        let beta_one = SfParams::new(0.3, 1.0, 0.4, 100.0).unwrap();
        assert!(!sf_feasible(&ch, &beta_one));
        assert!(sf_feasible(&ch, &beta_one.with_delta_prime(f64::INFINITY).unwrap()));
    }

    #[test]
    fn bdf_points() {
        let ch = reference(0.5);
        let r = r_bdf_at(&ch, &BdfParams::new(0.3, 0.2).unwrap()).unwrap();
        assert_abs_diff_eq!(r, 1.761_364_234_117_706_5, epsilon = 1e-12);
        assert!(r <= r_df_at(&ch, 0.2f64.sqrt()) + 1e-12);

        // θu = 0 reduces to a DF point at ρ = √θ2.
        let r0 = r_bdf_at(&ch, &BdfParams::new(0.0, 0.36).unwrap()).unwrap();
        assert_abs_diff_eq!(r0, r_df_at(&ch, 0.6), epsilon = 1e-12);

        // θu = 1 leaves only the broadcast part.
        use VarLabel::*;
        let bdf = BdfParams::new(1.0, 0.0).unwrap();
        let m = bdf_model(&ch, &bdf).unwrap();
        let broadcast = m
            .conditional_mi(&[U], &[Y3], &[])
            .unwrap()
            .min(m.conditional_mi(&[U], &[Y2], &[X2]).unwrap());
        assert_abs_diff_eq!(r_bdf_at(&ch, &bdf).unwrap(), broadcast, epsilon = 1e-12);
    }

    #[test]
    fn cutset_points() {
        let ch = reference(0.5);
        // At ρ = 0 the unconditioned cut still sees b·X2 as interference in Y3.
        let cond = broadcast_cut(&ch, 0.0, CutSetVariant::Conditioned).unwrap();
        let lit = broadcast_cut(&ch, 0.0, CutSetVariant::Literal).unwrap();
        assert_abs_diff_eq!(cond, c(5.0 * (4.0 + 1.0)), epsilon = 1e-12);
        assert_abs_diff_eq!(lit, c(5.0 * (4.0 + 1.0 / 21.0)), epsilon = 1e-12);
        let silent_relay = ChannelParams::new(2.0, 2.0, 1.0, 1.0, 5.0, 0.0).unwrap();
        assert_abs_diff_eq!(
            broadcast_cut(&silent_relay, 0.0, CutSetVariant::Conditioned).unwrap(),
            broadcast_cut(&silent_relay, 0.0, CutSetVariant::Literal).unwrap(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            r_cutset_at(&ch, 0.3, CutSetVariant::Conditioned).unwrap(),
            2.284_927_804_165_474,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            r_cutset_at(&ch, 0.3, CutSetVariant::Literal).unwrap(),
            2.218_702_656_153_649,
            epsilon = 1e-12
        );
        let edge = reference(0.999);
        assert_abs_diff_eq!(
            r_cutset_at(&edge, 0.0, CutSetVariant::Conditioned).unwrap(),
            c(5.0 * (edge.a() * edge.a() + 1.0)),
            epsilon = 1e-12
        );
    }

    #[test]
    fn cf_terms_are_monotone_in_delta() {
        let ch = reference(0.6);
        let mut prev: Option<(f64, f64)> = None;
        for k in 0..200 {
            let delta = 10f64.powf(-3.0 + 6.0 * k as f64 / 199.0);
            let (first, second) = cf_terms(&ch, delta);
            if let Some((pf, ps)) = prev {
                assert!(first < pf, "first CF term not decreasing at {delta}");
                assert!(second > ps, "second CF term not increasing at {delta}");
            }
            prev = Some((first, second));
        }
    }

    #[test]
    fn single_precision_closed_forms() {
        let ch = ChannelParams::<f32>::from_geometry(0.5, 5.0, 5.0, 1.0, 1.0).unwrap();
        assert!((mi_g1(&ch, 0.0) - 2.196_158_7).abs() < 1e-5);
        assert!((delta_cf(&ch).unwrap() - 1.3).abs() < 1e-5);
    }
}
