//! Covariance algebra over labeled jointly Gaussian variables.
//!
//! A [`CovModel`] is built from a sequence of linear definitions, each new
//! variable being a combination of earlier ones plus an independent fresh
//! Gaussian term. Conditional covariances, conditional entropies and
//! conditional mutual informations are then read off by sequential
//! Cholesky (innovations) factorization:
//!
//! ```text
//! I(A; B | C) = 1/2 log2( det Σ_{A|C} / det Σ_{A|B,C} )
//! ```
//!
//! Everything here is evaluated independently of the closed-form rate
//! expressions in [`crate::rates`], which are checked against it.

use std::fmt;

use thiserror::Error;

use crate::scalar::Scalar;

/// Names of the variables that appear in the relay models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarLabel {
    V,
    U,
    X1,
    X2,
    Z1,
    Z2,
    Zw,
    Y2,
    Y3,
    Y2hat,
}

impl VarLabel {
    pub const ALL: [VarLabel; 10] = [
        VarLabel::V,
        VarLabel::U,
        VarLabel::X1,
        VarLabel::X2,
        VarLabel::Z1,
        VarLabel::Z2,
        VarLabel::Zw,
        VarLabel::Y2,
        VarLabel::Y3,
        VarLabel::Y2hat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VarLabel::V => "V",
            VarLabel::U => "U",
            VarLabel::X1 => "X1",
            VarLabel::X2 => "X2",
            VarLabel::Z1 => "Z1",
            VarLabel::Z2 => "Z2",
            VarLabel::Zw => "Zw",
            VarLabel::Y2 => "Y2",
            VarLabel::Y3 => "Y3",
            VarLabel::Y2hat => "Y2hat",
        }
    }
}

impl fmt::Display for VarLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

struct LabelList<'a>(&'a [VarLabel]);

impl fmt::Display for LabelList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

fn list(labels: &[VarLabel]) -> String {
    LabelList(labels).to_string()
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("{0} is referenced before it is defined")]
    UndefinedLabel(VarLabel),
    #[error("{0} is defined twice")]
    DuplicateLabel(VarLabel),
    #[error("{0} is not a variable of this model")]
    UnknownLabel(VarLabel),
    #[error("fresh noise variance of {label} is {value}, must be >= 0")]
    NegativeVariance { label: VarLabel, value: f64 },
    #[error("coefficient or variance for {0} is not finite")]
    NonFinite(VarLabel),
    #[error("{0} appears in more than one of the label sets")]
    Overlap(VarLabel),
    #[error("conditioning block {} is singular: {label} is a linear function of the others", list(.given))]
    SingularConditioning { label: VarLabel, given: Vec<VarLabel> },
    #[error("{label} is a deterministic linear function of {}", list(.given))]
    DeterministicDependence { label: VarLabel, given: Vec<VarLabel> },
    #[error("correlation {0} outside [-1, 1]")]
    CorrelationOutOfRange(f64),
    #[error("{0} has zero variance, correlation undefined")]
    ZeroVariance(VarLabel),
    #[error("covariance matrix is not symmetric at ({row}, {col})")]
    Asymmetric { row: usize, col: usize },
    #[error("covariance matrix is not positive semidefinite (pivot {pivot} at {label})")]
    NotPsd { label: VarLabel, pivot: f64 },
    #[error("covariance matrix has {got} entries, expected {expected}")]
    Shape { got: usize, expected: usize },
    #[error("mutual information I({} ; {} | {}) evaluated to {value} bits", list(.a), list(.b), list(.given))]
    NegativeInformation {
        a: Vec<VarLabel>,
        b: Vec<VarLabel>,
        given: Vec<VarLabel>,
        value: f64,
    },
}

/// One step of a linear Gaussian construction: `label = Σ coef·prior + fresh`,
/// where `fresh` is an independent zero-mean Gaussian of the given variance.
#[derive(Clone, Debug, PartialEq)]
pub struct Definition<T> {
    pub label: VarLabel,
    pub terms: Vec<(VarLabel, T)>,
    pub fresh: T,
}

impl<T: Scalar> Definition<T> {
    /// An independent source variable.
    pub fn source(label: VarLabel, variance: T) -> Self {
        Definition {
            label,
            terms: Vec::new(),
            fresh: variance,
        }
    }

    pub fn linear(label: VarLabel, terms: &[(VarLabel, T)], fresh: T) -> Self {
        Definition {
            label,
            terms: terms.to_vec(),
            fresh,
        }
    }
}

/// Square matrix of conditional covariances, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.data[row * self.dim + col]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    /// Smallest Cholesky pivot; negative values signal loss of
    /// semidefiniteness.
    pub fn min_pivot(&self) -> T {
        let mut basis = Basis::new(&self.data, self.dim);
        (0..self.dim)
            .map(|i| basis.push(i).1)
            .fold(T::infinity(), T::min)
    }
}

/// Joint covariance of a labeled set of zero-mean jointly Gaussian variables.
#[derive(Clone, Debug, PartialEq)]
pub struct CovModel<T> {
    labels: Vec<VarLabel>,
    sigma: Vec<T>,
}

impl<T: Scalar> CovModel<T> {
    /// Builds the exact covariance implied by a sequence of linear
    /// definitions. Fresh terms are mutually independent, so variables
    /// defined with no `terms` are independent sources.
    pub fn build(defs: &[Definition<T>]) -> Result<Self, OracleError> {
        let n = defs.len();
        let mut labels: Vec<VarLabel> = Vec::with_capacity(n);
        let mut sigma = vec![T::zero(); n * n];
        for (k, def) in defs.iter().enumerate() {
            if labels.contains(&def.label) {
                return Err(OracleError::DuplicateLabel(def.label));
            }
            if !def.fresh.is_finite() || def.terms.iter().any(|(_, c)| !c.is_finite()) {
                return Err(OracleError::NonFinite(def.label));
            }
            if def.fresh < T::zero() {
                return Err(OracleError::NegativeVariance {
                    label: def.label,
                    value: def.fresh.to_f64().unwrap_or(f64::NAN),
                });
            }
            let mut terms = Vec::with_capacity(def.terms.len());
            for &(prior, coef) in &def.terms {
                let idx = labels
                    .iter()
                    .position(|&l| l == prior)
                    .ok_or(OracleError::UndefinedLabel(prior))?;
                terms.push((idx, coef));
            }
            // Cov(new, j) = Σ c_i Cov(prior_i, j) for every earlier j.
            for j in 0..k {
                let c = terms
                    .iter()
                    .fold(T::zero(), |acc, &(i, coef)| acc + coef * sigma[i * n + j]);
                sigma[k * n + j] = c;
                sigma[j * n + k] = c;
            }
            let mut var = def.fresh;
            for &(i, ci) in &terms {
                for &(j, cj) in &terms {
                    var = var + ci * cj * sigma[i * n + j];
                }
            }
            sigma[k * n + k] = var;
            labels.push(def.label);
        }
        Ok(CovModel { labels, sigma })
    }

    /// Wraps an explicit covariance matrix after checking symmetry and
    /// semidefiniteness (pivots down to `-1e-10` relative to the largest
    /// variance are accepted).
    pub fn from_sigma(labels: Vec<VarLabel>, sigma: Vec<T>) -> Result<Self, OracleError> {
        let n = labels.len();
        if sigma.len() != n * n {
            return Err(OracleError::Shape {
                got: sigma.len(),
                expected: n * n,
            });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(OracleError::DuplicateLabel(*l));
            }
        }
        let scale = (0..n).fold(T::zero(), |m, i| m.max(sigma[i * n + i].abs()));
        let sym_tol = T::lit(1e-12) * scale.max(T::one());
        for i in 0..n {
            for j in 0..i {
                if (sigma[i * n + j] - sigma[j * n + i]).abs() > sym_tol {
                    return Err(OracleError::Asymmetric { row: i, col: j });
                }
            }
        }
        let mut basis = Basis::new(&sigma, n);
        for (i, &label) in labels.iter().enumerate() {
            let (_, pivot) = basis.push(i);
            if pivot < -T::lit(1e-10) * scale.max(T::one()) {
                return Err(OracleError::NotPsd {
                    label,
                    pivot: pivot.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(CovModel { labels, sigma })
    }

    pub fn labels(&self) -> &[VarLabel] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Row-major covariance matrix in [`labels`](Self::labels) order.
    pub fn sigma(&self) -> &[T] {
        &self.sigma
    }

    pub fn index_of(&self, label: VarLabel) -> Result<usize, OracleError> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .ok_or(OracleError::UnknownLabel(label))
    }

    pub fn cov(&self, a: VarLabel, b: VarLabel) -> Result<T, OracleError> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        Ok(self.sigma[i * self.dim() + j])
    }

    pub fn var(&self, a: VarLabel) -> Result<T, OracleError> {
        self.cov(a, a)
    }

    pub fn corr(&self, a: VarLabel, b: VarLabel) -> Result<T, OracleError> {
        let va = self.var(a)?;
        let vb = self.var(b)?;
        if va <= T::zero() {
            return Err(OracleError::ZeroVariance(a));
        }
        if vb <= T::zero() {
            return Err(OracleError::ZeroVariance(b));
        }
        Ok(self.cov(a, b)? / (va * vb).sqrt())
    }

    fn indices(&self, labels: &[VarLabel]) -> Result<Vec<usize>, OracleError> {
        labels.iter().map(|&l| self.index_of(l)).collect()
    }

    fn basis(&self) -> Basis<'_, T> {
        Basis::new(&self.sigma, self.dim())
    }

    /// Conditional covariance `Σ_TT − Σ_TG Σ_GG⁻¹ Σ_GT`.
    ///
    /// Fails if the conditioning block is singular, naming the first label
    /// found to be a linear function of the preceding ones.
    pub fn schur_conditional(
        &self,
        targets: &[VarLabel],
        given: &[VarLabel],
    ) -> Result<Matrix<T>, OracleError> {
        check_disjoint(&[targets, given])?;
        let t = self.indices(targets)?;
        let g = self.indices(given)?;
        let mut basis = self.basis();
        for (&gi, &label) in g.iter().zip(given) {
            if !basis.push(gi).0 {
                return Err(OracleError::SingularConditioning {
                    label,
                    given: given.to_vec(),
                });
            }
        }
        let proj: Vec<Vec<T>> = t.iter().map(|&ti| basis.project(ti).0).collect();
        let m = t.len();
        let n = self.dim();
        let mut data = vec![T::zero(); m * m];
        for r in 0..m {
            for c in 0..=r {
                let explained = (0..basis.len()).fold(T::zero(), |acc, j| {
                    acc + proj[r][j] * proj[c][j] * basis.pivots[j]
                });
                let v = self.sigma[t[r] * n + t[c]] - explained;
                data[r * m + c] = v;
                data[c * m + r] = v;
            }
        }
        Ok(Matrix { dim: m, data })
    }

    /// Conditional differential entropy `h(T | G)` in bits.
    ///
    /// Conditioning variables that are linear functions of earlier ones are
    /// dropped (they carry no extra information). A target that is itself
    /// determined by the conditioning set has entropy −∞ and is reported as
    /// [`OracleError::DeterministicDependence`].
    pub fn conditional_entropy(
        &self,
        targets: &[VarLabel],
        given: &[VarLabel],
    ) -> Result<T, OracleError> {
        check_disjoint(&[targets, given])?;
        let t = self.indices(targets)?;
        let g = self.indices(given)?;
        let mut basis = self.basis();
        for &gi in &g {
            basis.push(gi);
        }
        let two_pi_e = T::lit(2.0 * std::f64::consts::PI * std::f64::consts::E);
        let mut h = T::zero();
        for (&ti, &label) in t.iter().zip(targets) {
            let (kept, pivot) = basis.push(ti);
            if !kept {
                let mut det_by = given.to_vec();
                det_by.extend(targets.iter().take_while(|&&l| l != label));
                return Err(OracleError::DeterministicDependence {
                    label,
                    given: det_by,
                });
            }
            h = h + (two_pi_e * pivot).log2() / T::lit(2.0);
        }
        Ok(h)
    }

    /// `I(A; B | C)` in bits.
    ///
    /// Components of `A` (or of `C`) that are linear functions of the
    /// conditioning variables are dropped first; this leaves the
    /// information unchanged. If a remaining component of `A` becomes
    /// deterministic once `B` is added, the information is infinite and
    /// [`OracleError::DeterministicDependence`] is returned.
    pub fn conditional_mi(
        &self,
        a: &[VarLabel],
        b: &[VarLabel],
        given: &[VarLabel],
    ) -> Result<T, OracleError> {
        check_disjoint(&[a, b, given])?;
        let ai = self.indices(a)?;
        let bi = self.indices(b)?;
        let gi = self.indices(given)?;

        let mut base = self.basis();
        for &g in &gi {
            base.push(g);
        }
        let mut with_b = base.clone();
        for &j in &bi {
            with_b.push(j);
        }

        let mut logdet_given_c = T::zero();
        let mut logdet_given_bc = T::zero();
        // Greedy pivoting: take the A component least explained by the
        // conditioners first, so near-determined components are judged
        // last and never become the pivot others are projected on.
        let mut remaining: Vec<(usize, VarLabel)> = ai.iter().copied().zip(a.iter().copied()).collect();
        while !remaining.is_empty() {
            let (pos, _) = remaining
                .iter()
                .enumerate()
                .map(|(k, &(idx, _))| {
                    let own = self.sigma[idx * self.dim() + idx];
                    let ratio = if own > T::zero() { base.project(idx).1 / own } else { T::zero() };
                    (k, ratio)
                })
                .fold((0, T::neg_infinity()), |(bk, br), (k, r)| if r > br { (k, r) } else { (bk, br) });
            let (idx, label) = remaining.remove(pos);
            let (kept, pivot) = base.push(idx);
            if !kept {
                // The best remaining candidate is determined, hence all are.
                break;
            }
            // Judged against what remains given the conditioners alone, so a
            // barely-kept component does not look determined by B.
            let (kept_b, pivot_b) = with_b.push_relative(idx, pivot);
            if !kept_b {
                let mut det_by = b.to_vec();
                det_by.extend_from_slice(given);
                return Err(OracleError::DeterministicDependence {
                    label,
                    given: det_by,
                });
            }
            logdet_given_c = logdet_given_c + pivot.ln();
            logdet_given_bc = logdet_given_bc + pivot_b.ln();
        }
        let mi = (logdet_given_c - logdet_given_bc) / (T::lit(2.0) * T::lit(std::f64::consts::LN_2));
        if mi >= T::zero() {
            Ok(mi)
        } else if mi > -T::mi_clamp() {
            Ok(T::zero())
        } else {
            Err(OracleError::NegativeInformation {
                a: a.to_vec(),
                b: b.to_vec(),
                given: given.to_vec(),
                value: mi.to_f64().unwrap_or(f64::NAN),
            })
        }
    }
}

fn check_disjoint(sets: &[&[VarLabel]]) -> Result<(), OracleError> {
    let mut seen: Vec<VarLabel> = Vec::new();
    for set in sets {
        for &l in *set {
            if seen.contains(&l) {
                return Err(OracleError::Overlap(l));
            }
            seen.push(l);
        }
    }
    Ok(())
}

/// Correlation between the ends of a Gaussian Markov chain `X − Y − Z`
/// given the correlations of its two links.
pub fn markov_corr_product<T: Scalar>(x_to_y: T, y_to_z: T) -> Result<T, OracleError> {
    for c in [x_to_y, y_to_z] {
        if !(c >= -T::one() && c <= T::one()) {
            return Err(OracleError::CorrelationOutOfRange(
                c.to_f64().unwrap_or(f64::NAN),
            ));
        }
    }
    Ok(x_to_y * y_to_z)
}

/// Incremental LDLᵀ factorization over a chosen subset of variables.
///
/// `pivots[j]` is the variance of member `j` given all earlier members
/// (its innovation variance); `coeffs[j][k]` are the unit-lower-triangular
/// factors. Members whose innovation falls under the floor are refused.
#[derive(Clone)]
struct Basis<'m, T> {
    sigma: &'m [T],
    n: usize,
    scale: T,
    members: Vec<usize>,
    coeffs: Vec<Vec<T>>,
    pivots: Vec<T>,
}

impl<'m, T: Scalar> Basis<'m, T> {
    fn new(sigma: &'m [T], n: usize) -> Self {
        let scale = (0..n).fold(T::zero(), |m, i| m.max(sigma[i * n + i]));
        Basis {
            sigma,
            n,
            scale,
            members: Vec::new(),
            coeffs: Vec::new(),
            pivots: Vec::new(),
        }
    }

    fn len(&self) -> usize {
        self.members.len()
    }

    /// Factors of variable `p` on the current innovations, and its
    /// residual variance.
    fn project(&self, p: usize) -> (Vec<T>, T) {
        let mut l: Vec<T> = Vec::with_capacity(self.members.len());
        let mut resid = self.sigma[p * self.n + p];
        for (j, &q) in self.members.iter().enumerate() {
            let mut c = self.sigma[p * self.n + q];
            for k in 0..j {
                c = c - l[k] * self.coeffs[j][k] * self.pivots[k];
            }
            let lj = c / self.pivots[j];
            resid = resid - lj * lj * self.pivots[j];
            l.push(lj);
        }
        (l, resid)
    }

    /// Adds `p` unless it is (numerically) determined by the members.
    /// Returns whether it was kept and its residual variance.
    fn push(&mut self, p: usize) -> (bool, T) {
        let (l, resid) = self.project(p);
        let own = self.sigma[p * self.n + p];
        let floor = T::det_floor();
        let degenerate = own <= floor * self.scale || resid <= floor * own;
        if degenerate {
            return (false, resid);
        }
        self.insert(p, l, resid);
        (true, resid)
    }

    /// Like [`Basis::push`], with degeneracy judged against `reference`
    /// instead of the variable's own variance.
    fn push_relative(&mut self, p: usize, reference: T) -> (bool, T) {
        let (l, resid) = self.project(p);
        if resid <= T::det_floor() * reference {
            return (false, resid);
        }
        self.insert(p, l, resid);
        (true, resid)
    }

    fn insert(&mut self, p: usize, l: Vec<T>, resid: T) {
        self.members.push(p);
        self.coeffs.push(l);
        self.pivots.push(resid);
    }
}
