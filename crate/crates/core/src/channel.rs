//! Physical channel description and the jointly Gaussian system models.
//!
//! ```text
//! Y2 = a·X1 + Z1          Z1 ~ N(0, N1)
//! Y3 = X1 + b·X2 + Z2     Z2 ~ N(0, N2)
//! ```

use thiserror::Error;

use crate::oracle::{CovModel, Definition, OracleError, VarLabel};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("normalized distance {0} must lie strictly between 0 and 1")]
    Distance(f64),
    #[error("noise power {name} = {value} must be positive and finite")]
    Noise { name: &'static str, value: f64 },
    #[error("transmit power {name} = {value} must be nonnegative and finite")]
    Power { name: &'static str, value: f64 },
    #[error("channel gain {name} = {value} must be finite")]
    Gain { name: &'static str, value: f64 },
    #[error("correlation {name} = {value} must lie in [0, 1]")]
    Correlation { name: &'static str, value: f64 },
    #[error("compression noise variance {0} must be positive")]
    CompressionNoise(f64),
    #[error("compression noise variance is infinite; no compressed observation to model")]
    UnboundedCompression,
    #[error("power split theta_u = {theta_u}, theta_2 = {theta_2} must be in [0, 1] with theta_u + theta_2 <= 1")]
    PowerSplit { theta_u: f64, theta_2: f64 },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

fn f<T: Scalar>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Gains, noise powers and transmit powers of the three-node channel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelParams<T> {
    a: T,
    b: T,
    n1: T,
    n2: T,
    p1: T,
    p2: T,
}

impl<T: Scalar> ChannelParams<T> {
    pub fn new(a: T, b: T, n1: T, n2: T, p1: T, p2: T) -> Result<Self, ChannelError> {
        for (name, value) in [("a", a), ("b", b)] {
            if !value.is_finite() {
                return Err(ChannelError::Gain { name, value: f(value) });
            }
        }
        for (name, value) in [("N1", n1), ("N2", n2)] {
            if !(value > T::zero() && value.is_finite()) {
                return Err(ChannelError::Noise { name, value: f(value) });
            }
        }
        for (name, value) in [("P1", p1), ("P2", p2)] {
            if !(value >= T::zero() && value.is_finite()) {
                return Err(ChannelError::Power { name, value: f(value) });
            }
        }
        Ok(ChannelParams { a, b, n1, n2, p1, p2 })
    }

    /// Relay on the source–destination segment at normalized distance `d`
    /// from the source; gains fall off as the inverse of distance.
    pub fn from_geometry(d: T, p1: T, p2: T, n1: T, n2: T) -> Result<Self, ChannelError> {
        if !(d > T::zero() && d < T::one()) {
            return Err(ChannelError::Distance(f(d)));
        }
        Self::new(T::one() / d, T::one() / (T::one() - d), n1, n2, p1, p2)
    }

    /// Same channel with nonnegative gains. Flipping the sign of X1 or X2
    /// maps any input distribution onto this one with identical rates.
    pub fn canonical(&self) -> Self {
        ChannelParams {
            a: self.a.abs(),
            b: self.b.abs(),
            ..*self
        }
    }

    pub fn a(&self) -> T {
        self.a
    }
    pub fn b(&self) -> T {
        self.b
    }
    pub fn n1(&self) -> T {
        self.n1
    }
    pub fn n2(&self) -> T {
        self.n2
    }
    pub fn p1(&self) -> T {
        self.p1
    }
    pub fn p2(&self) -> T {
        self.p2
    }
}

/// Superposition-forwarding auxiliaries: `alpha = corr(U,V)`,
/// `beta = corr(V,X2)`, `gamma = corr(U,X1)` and the variance `delta_prime`
/// of the compression noise in `Ŷ2' = Y2 + Zw'`.
///
/// `delta_prime = +∞` is allowed and means the relay sends no compressed
/// description at all.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SfParams<T> {
    alpha: T,
    beta: T,
    gamma: T,
    delta_prime: T,
}

fn unit_interval<T: Scalar>(name: &'static str, value: T) -> Result<(), ChannelError> {
    if value >= T::zero() && value <= T::one() {
        Ok(())
    } else {
        Err(ChannelError::Correlation { name, value: f(value) })
    }
}

impl<T: Scalar> SfParams<T> {
    pub fn new(alpha: T, beta: T, gamma: T, delta_prime: T) -> Result<Self, ChannelError> {
        unit_interval("alpha", alpha)?;
        unit_interval("beta", beta)?;
        unit_interval("gamma", gamma)?;
        if !(delta_prime > T::zero()) {
            return Err(ChannelError::CompressionNoise(f(delta_prime)));
        }
        Ok(SfParams {
            alpha,
            beta,
            gamma,
            delta_prime,
        })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }
    pub fn beta(&self) -> T {
        self.beta
    }
    pub fn gamma(&self) -> T {
        self.gamma
    }
    pub fn delta_prime(&self) -> T {
        self.delta_prime
    }

    /// `corr(U, X2) = αβ`.
    pub fn delta(&self) -> T {
        self.alpha * self.beta
    }

    /// `corr(X1, X2) = αβγ`.
    pub fn rho(&self) -> T {
        self.alpha * self.beta * self.gamma
    }

    pub fn with_delta_prime(self, delta_prime: T) -> Result<Self, ChannelError> {
        Self::new(self.alpha, self.beta, self.gamma, delta_prime)
    }
}

/// Gaussian power split for broadcast-over-DF: a fraction `theta_u` of P1
/// rides on the broadcast codeword U, `theta_2` is coherent with X2, and
/// the rest is fresh.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BdfParams<T> {
    theta_u: T,
    theta_2: T,
}

impl<T: Scalar> BdfParams<T> {
    pub fn new(theta_u: T, theta_2: T) -> Result<Self, ChannelError> {
        let ok = theta_u >= T::zero()
            && theta_2 >= T::zero()
            && theta_u + theta_2 <= T::one() + T::epsilon() * T::lit(4.0);
        if !ok {
            return Err(ChannelError::PowerSplit {
                theta_u: f(theta_u),
                theta_2: f(theta_2),
            });
        }
        Ok(BdfParams { theta_u, theta_2 })
    }

    pub fn theta_u(&self) -> T {
        self.theta_u
    }
    pub fn theta_2(&self) -> T {
        self.theta_2
    }

    /// Power fraction left for fresh (non-superposed) signalling.
    pub fn theta_fresh(&self) -> T {
        (T::one() - self.theta_u - self.theta_2).max(T::zero())
    }
}

fn receivers<T: Scalar>(ch: &ChannelParams<T>, defs: &mut Vec<Definition<T>>) {
    use VarLabel::*;
    defs.push(Definition::source(Z1, ch.n1));
    defs.push(Definition::source(Z2, ch.n2));
    defs.push(Definition::linear(Y2, &[(X1, ch.a), (Z1, T::one())], T::zero()));
    defs.push(Definition::linear(
        Y3,
        &[(X1, T::one()), (X2, ch.b), (Z2, T::one())],
        T::zero(),
    ));
}

/// Full superposition-forwarding model over
/// `V, U, X2, X1, Z1, Z2, Zw, Y2, Y3, Y2hat`:
///
/// ```text
/// V  ~ N(0, 1)
/// U  = αV + fresh(1 − α²)
/// X2 = √P2 (βV + fresh(1 − β²))
/// X1 = √P1 (γU + fresh(1 − γ²))
/// Y2hat = Y2 + Zw,  Zw ~ N(0, Δ')
/// ```
pub fn sf_model<T: Scalar>(
    ch: &ChannelParams<T>,
    sf: &SfParams<T>,
) -> Result<CovModel<T>, ChannelError> {
    use VarLabel::*;
    if !sf.delta_prime.is_finite() {
        return Err(ChannelError::UnboundedCompression);
    }
    let one = T::one();
    let (al, be, ga) = (sf.alpha, sf.beta, sf.gamma);
    let (sp1, sp2) = (ch.p1.sqrt(), ch.p2.sqrt());
    let mut defs = vec![
        Definition::source(V, one),
        Definition::linear(U, &[(V, al)], one - al * al),
        Definition::linear(X2, &[(V, sp2 * be)], ch.p2 * (one - be * be)),
        Definition::linear(X1, &[(U, sp1 * ga)], ch.p1 * (one - ga * ga)),
    ];
    receivers(ch, &mut defs);
    defs.insert(6, Definition::source(Zw, sf.delta_prime));
    defs.push(Definition::linear(Y2hat, &[(Y2, one), (Zw, one)], T::zero()));
    Ok(CovModel::build(&defs)?)
}

/// Compress-and-forward model: independent inputs and `Ŷ2 = Y2 + Zw` with
/// `Var(Zw) = delta`.
pub fn cf_model<T: Scalar>(ch: &ChannelParams<T>, delta: T) -> Result<CovModel<T>, ChannelError> {
    if !(delta > T::zero()) {
        return Err(ChannelError::CompressionNoise(f(delta)));
    }
    let sf = SfParams::new(T::zero(), T::zero(), T::zero(), delta)?;
    sf_model(ch, &sf)
}

/// Broadcast-over-DF model: `U ~ N(0,1)` and the relay codeword
/// `X2 = √P2·V` independent of each other, and
///
/// ```text
/// X1 = √(θu P1)·U + √(θ2 P1)·V + fresh((1 − θu − θ2) P1)
/// ```
///
/// so `Var(X1) = P1` and `corr(X1, X2) = √θ2`.
pub fn bdf_model<T: Scalar>(
    ch: &ChannelParams<T>,
    bdf: &BdfParams<T>,
) -> Result<CovModel<T>, ChannelError> {
    use VarLabel::*;
    let mut defs = vec![
        Definition::source(U, T::one()),
        Definition::source(V, T::one()),
        Definition::linear(X2, &[(V, ch.p2.sqrt())], T::zero()),
        Definition::linear(
            X1,
            &[
                (U, (bdf.theta_u * ch.p1).sqrt()),
                (V, (bdf.theta_2 * ch.p1).sqrt()),
            ],
            bdf.theta_fresh() * ch.p1,
        ),
    ];
    receivers(ch, &mut defs);
    Ok(CovModel::build(&defs)?)
}

/// Two-input model with `corr(X1, X2) = rho`, used for the cut-set bound.
pub fn cutset_model<T: Scalar>(ch: &ChannelParams<T>, rho: T) -> Result<CovModel<T>, ChannelError> {
    use VarLabel::*;
    if !(rho >= -T::one() && rho <= T::one()) {
        return Err(ChannelError::Correlation {
            name: "rho",
            value: f(rho),
        });
    }
    let mut defs = vec![
        Definition::source(V, T::one()),
        Definition::linear(X2, &[(V, ch.p2.sqrt())], T::zero()),
        Definition::linear(X1, &[(V, ch.p1.sqrt() * rho)], ch.p1 * (T::one() - rho * rho)),
    ];
    receivers(ch, &mut defs);
    Ok(CovModel::build(&defs)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use VarLabel::*;

    fn reference(d: f64) -> ChannelParams<f64> {
        ChannelParams::from_geometry(d, 5.0, 5.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn geometry() {
        let ch = reference(0.5);
        assert_eq!((ch.a(), ch.b()), (2.0, 2.0));
        assert_eq!((ch.p1(), ch.p2(), ch.n1(), ch.n2()), (5.0, 5.0, 1.0, 1.0));
        let ch = reference(0.2);
        assert_abs_diff_eq!(ch.a(), 5.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ch.b(), 1.25, epsilon = 1e-15);
        for d in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(
                ChannelParams::from_geometry(d, 5.0, 5.0, 1.0, 1.0),
                Err(ChannelError::Distance(_))
            ));
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(ChannelParams::new(1.0, 1.0, 0.0, 1.0, 1.0, 1.0).is_err());
        assert!(ChannelParams::new(1.0, 1.0, 1.0, 1.0, -1.0, 1.0).is_err());
        assert!(ChannelParams::new(f64::INFINITY, 1.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(ChannelParams::new(1.0, 1.0, 1.0, 1.0, 0.0, 0.0).is_ok());
        assert!(SfParams::new(1.1, 0.0, 0.0, 1.0).is_err());
        assert!(SfParams::new(0.5, 0.5, 0.5, 0.0).is_err());
        assert!(SfParams::new(0.5, 0.5, 0.5, f64::INFINITY).is_ok());
        assert!(BdfParams::new(0.6, 0.5).is_err());
        assert!(BdfParams::new(0.5, 0.5).is_ok());
    }

    #[test]
    fn sf_model_correlations_and_powers() {
        let ch = reference(0.5);
        let sf = SfParams::new(0.8, 0.5, 0.9, 2.0).unwrap();
        let m = sf_model(&ch, &sf).unwrap();
        assert_eq!(m.dim(), 10);
        assert_abs_diff_eq!(m.var(X1).unwrap(), 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m.var(X2).unwrap(), 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m.corr(U, X2).unwrap(), sf.delta(), epsilon = 1e-12);
        assert_abs_diff_eq!(m.corr(X1, X2).unwrap(), sf.rho(), epsilon = 1e-12);
    }

    #[test]
    fn fully_coherent_inputs() {
        let m = sf_model(&reference(0.5), &SfParams::new(1.0, 1.0, 1.0, 1.0).unwrap()).unwrap();
        assert_abs_diff_eq!(m.corr(X1, X2).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn independent_inputs_reduce_to_point_to_point() {
        let ch = reference(0.5);
        let m = sf_model(&ch, &SfParams::new(0.0, 0.0, 0.0, 1.0).unwrap()).unwrap();
        assert_abs_diff_eq!(m.corr(X1, X2).unwrap(), 0.0, epsilon = 1e-15);
        let mi = m.conditional_mi(&[X1], &[Y2], &[X2]).unwrap();
        assert_abs_diff_eq!(mi, 0.5 * (1.0f64 + 4.0 * 5.0).log2(), epsilon = 1e-12);
    }

    #[test]
    fn sf_model_matches_first_closed_form() {
        // α = β = γ = 0.5 gives ρ = 0.125.
        let ch = reference(0.5);
        let m = sf_model(&ch, &SfParams::new(0.5, 0.5, 0.5, 2.0).unwrap()).unwrap();
        let mi = m.conditional_mi(&[X1], &[Y2], &[X2]).unwrap();
        assert_abs_diff_eq!(mi, 2.185_343_703_403_608_7, epsilon = 1e-12);
        let resid = m.schur_conditional(&[Y2], &[X2, Y3]).unwrap();
        assert_abs_diff_eq!(resid.get(0, 0), 4.324_538_258_575_203, epsilon = 1e-12);
        let joint = m.schur_conditional(&[Y2, Y3], &[X2]).unwrap();
        assert_abs_diff_eq!(joint.get(0, 0), 20.6875, epsilon = 1e-12);
        assert_abs_diff_eq!(joint.get(0, 1), 9.84375, epsilon = 1e-12);
        assert_abs_diff_eq!(joint.get(1, 1), 5.921875, epsilon = 1e-12);
        let noise_only = m.schur_conditional(&[Y2], &[X1, X2, Y3]).unwrap();
        assert_abs_diff_eq!(noise_only.get(0, 0), ch.n1(), epsilon = 1e-12);
    }

    #[test]
    fn cf_model_limits() {
        let ch = reference(0.5);
        let m = cf_model(&ch, 1e9).unwrap();
        let mi = m.conditional_mi(&[X1], &[Y2hat, Y3], &[X2]).unwrap();
        assert_abs_diff_eq!(mi, 0.5 * (1.0f64 + 5.0).log2(), epsilon = 1e-4);
        let m = cf_model(&ch, 1.3).unwrap();
        let mi = m.conditional_mi(&[X1], &[Y2hat, Y3], &[X2]).unwrap();
        let expect = 0.5 * (1.0 + 5.0 * (2.3 + 4.0) / 2.3f64).log2();
        assert_abs_diff_eq!(mi, expect, epsilon = 1e-12);
        assert!(cf_model(&ch, 0.0).is_err());
        assert!(cf_model(&ch, -1.0).is_err());
    }

    #[test]
    fn bdf_model_structure() {
        let ch = reference(0.5);
        let m = bdf_model(&ch, &BdfParams::new(0.3, 0.2).unwrap()).unwrap();
        assert_abs_diff_eq!(m.var(X1).unwrap(), 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m.var(X2).unwrap(), 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m.cov(U, X2).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.corr(X1, X2).unwrap(), 0.2f64.sqrt(), epsilon = 1e-12);

        let m = bdf_model(&ch, &BdfParams::new(0.0, 0.4).unwrap()).unwrap();
        assert_eq!(m.conditional_mi(&[U], &[Y3], &[]).unwrap(), 0.0);
        assert_eq!(m.conditional_mi(&[U], &[Y2], &[X2]).unwrap(), 0.0);

        let m = bdf_model(&ch, &BdfParams::new(1.0, 0.0).unwrap()).unwrap();
        assert_eq!(m.conditional_mi(&[X1], &[Y2], &[X2, U]).unwrap(), 0.0);
    }

    #[test]
    fn unbounded_compression_has_no_model() {
        let sf = SfParams::new(0.0, 0.0, 0.0, f64::INFINITY).unwrap();
        assert_eq!(
            sf_model(&reference(0.5), &sf).unwrap_err(),
            ChannelError::UnboundedCompression
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn draw() -> impl Strategy<Value = (ChannelParams<f64>, SfParams<f64>)> {
            (0.05f64..0.95, 0.0f64..=1.0, 0.0f64..=1.0, 0.0f64..=1.0, -3.0f64..3.0).prop_map(
                |(d, al, be, ga, logd)| {
                    (
                        reference(d),
                        SfParams::new(al, be, ga, 10f64.powf(logd)).unwrap(),
                    )
                },
            )
        }

        proptest! {
            #[test]
            fn powers_met_with_equality((ch, sf) in draw()) {
                let m = sf_model(&ch, &sf).unwrap();
                prop_assert!((m.var(X1).unwrap() - ch.p1()).abs() <= 1e-12);
                prop_assert!((m.var(X2).unwrap() - ch.p2()).abs() <= 1e-12);
            }

            #[test]
            fn lemma1_correlations((ch, sf) in draw()) {
                let m = sf_model(&ch, &sf).unwrap();
                prop_assert!((m.corr(X1, X2).unwrap() - sf.rho()).abs() <= 1e-12);
                prop_assert!((m.corr(U, X2).unwrap() - sf.delta()).abs() <= 1e-12);
            }

            #[test]
            fn markov_factorization((ch, sf) in draw()) {
                let m = sf_model(&ch, &sf).unwrap();
                prop_assert!(m.conditional_mi(&[V], &[Y2], &[U, X2]).unwrap().abs() <= 1e-9);
                prop_assert!(m.conditional_mi(&[U], &[Y2], &[X1, X2]).unwrap().abs() <= 1e-9);
                prop_assert!(m.conditional_mi(&[Y2hat], &[Y3], &[Y2, X1, X2, U]).unwrap().abs() <= 1e-9);
            }

            #[test]
            fn data_processing((ch, sf) in draw()) {
                let m = sf_model(&ch, &sf).unwrap();
                let via_u = m.conditional_mi(&[U], &[Y2], &[X2]).unwrap();
                let via_x1 = m.conditional_mi(&[X1], &[Y2], &[X2]).unwrap();
                prop_assert!(via_u <= via_x1 + 1e-9);
            }

            #[test]
            fn mi_symmetry_and_chain_rule((ch, sf) in draw()) {
                let m = sf_model(&ch, &sf).unwrap();
                let ab = m.conditional_mi(&[X1], &[Y2hat, Y3], &[X2]).unwrap();
                let ba = m.conditional_mi(&[Y2hat, Y3], &[X1], &[X2]).unwrap();
                prop_assert!((ab - ba).abs() <= 1e-9);
                let first = m.conditional_mi(&[X1], &[Y3], &[X2]).unwrap();
                let second = m.conditional_mi(&[X1], &[Y2hat], &[Y3, X2]).unwrap();
                prop_assert!((ab - first - second).abs() <= 1e-9);
            }
        }
    }
}
