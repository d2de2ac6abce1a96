//! Optimal unambiguous discrimination of symmetric pure-state ensembles.
//!
//! A symmetric ensemble is generated from a coefficient vector `c` and an
//! orthonormal basis `{u_k}` as `|ψ_j⟩ = Σ_k c_k e^{2πi jk/N} |u_k⟩`,
//! `j = 1..N`. With equal priors its optimal success probability is
//! `N · min_k |c_k|²`. [`usd_povm`] builds the zero-error measurement from
//! reciprocal states for any requested per-state success probabilities and
//! [`max_uniform_success`] finds the largest feasible common value by
//! bisection, independently of the closed form.

use nalgebra::{ComplexField, DMatrix};
use serde::Serialize;

use crate::corelin::{
    gram_of, hermitian_eigenvalues, outer, reciprocal_states, PureState, StateEnsemble,
};
use crate::error::{Result, UsdError};
use crate::scalar::{creal, Complex, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricEnsemble<T: Real> {
    coefficients: Vec<Complex<T>>,
    basis: Vec<PureState<T>>,
}

impl<T: Real> SymmetricEnsemble<T> {
    pub fn new(coefficients: Vec<Complex<T>>, basis: Vec<PureState<T>>) -> Result<Self> {
        let n = coefficients.len();
        if n == 0 {
            return Err(UsdError::InvalidArgument(
                "symmetric ensemble needs N >= 1".into(),
            ));
        }
        if basis.len() != n {
            return Err(UsdError::DimensionMismatch {
                expected: n,
                found: basis.len(),
            });
        }
        check_coefficients(&coefficients)?;
        let g = gram_of(&basis);
        let id = DMatrix::<Complex<T>>::identity(n, n);
        let off = g.entries().zip_map(&id, |a, b| (a - b).modulus()).max();
        if off > T::rank_tol() {
            return Err(UsdError::InvalidArgument(format!(
                "basis is not orthonormal (max deviation {})",
                off.as_f64()
            )));
        }
        Ok(Self {
            coefficients,
            basis,
        })
    }

    /// Coefficients over the computational basis of `C^N`.
    pub fn with_standard_basis(coefficients: Vec<Complex<T>>) -> Result<Self> {
        let n = coefficients.len();
        let basis = (0..n)
            .map(|i| PureState::basis(n, i))
            .collect::<Result<Vec<_>>>()?;
        Self::new(coefficients, basis)
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn coefficients(&self) -> &[Complex<T>] {
        &self.coefficients
    }

    pub fn basis(&self) -> &[PureState<T>] {
        &self.basis
    }

    /// The `N` generated states, `j = 1..N`, with uniform priors.
    pub fn states(&self) -> Result<StateEnsemble<T>> {
        let n = self.len();
        let nn = T::from_usize(n).expect("usize fits scalar");
        let dim = self.basis[0].dim();
        let mut out = Vec::with_capacity(n);
        for j in 1..=n {
            let mut amps = nalgebra::DVector::from_element(dim, creal(T::zero()));
            for (k, (ck, uk)) in self.coefficients.iter().zip(&self.basis).enumerate() {
                // jk reduced mod N keeps the angle small.
                let jk = T::from_usize((j * k) % n).expect("usize fits scalar");
                let theta = T::two_pi() * jk / nn;
                let w = *ck * Complex::new(theta.cos(), theta.sin());
                amps += uk.amplitudes() * w;
            }
            out.push(PureState::new(amps.iter().copied().collect())?);
        }
        StateEnsemble::uniform(out)
    }

    pub fn p_max(&self) -> T {
        p_max_unchecked(&self.coefficients)
    }
}

fn check_coefficients<T: Real>(c: &[Complex<T>]) -> Result<()> {
    let total = c.iter().fold(T::zero(), |acc, z| acc + z.modulus_squared());
    if (total - T::one()).abs() > T::norm_tol() {
        return Err(UsdError::InvalidArgument(format!(
            "coefficients have squared norm {} instead of 1",
            total.as_f64()
        )));
    }
    if let Some(k) = c.iter().position(|z| z.modulus() <= T::norm_tol()) {
        return Err(UsdError::InvalidArgument(format!(
            "coefficient c_{k} is zero"
        )));
    }
    Ok(())
}

fn p_max_unchecked<T: Real>(c: &[Complex<T>]) -> T {
    let n = T::from_usize(c.len()).expect("usize fits scalar");
    let min = c
        .iter()
        .map(|z| z.modulus_squared())
        .fold(T::one(), |m, v| m.min(v));
    n * min
}

/// The states `Σ_k c_k e^{2πi jk/N} |u_k⟩` with uniform priors.
pub fn symmetric_from_coefficients<T: Real>(
    coefficients: Vec<Complex<T>>,
    basis: Vec<PureState<T>>,
) -> Result<StateEnsemble<T>> {
    SymmetricEnsemble::new(coefficients, basis)?.states()
}

/// `N · min_k |c_k|²`.
pub fn p_max_symmetric<T: Real>(coefficients: &[Complex<T>]) -> Result<T> {
    if coefficients.is_empty() {
        return Err(UsdError::InvalidArgument("empty coefficient vector".into()));
    }
    check_coefficients(coefficients)?;
    Ok(p_max_unchecked(coefficients))
}

/// An `(N+1)`-outcome measurement: one element per state plus the
/// inconclusive element `E_0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm<T: Real> {
    identify: Vec<DMatrix<Complex<T>>>,
    inconclusive: DMatrix<Complex<T>>,
}

impl<T: Real> Povm<T> {
    /// Takes the identifying elements and completes them with
    /// `E_0 = I - Σ E_j`.
    pub fn complete(identify: Vec<DMatrix<Complex<T>>>) -> Result<Self> {
        let dim = identify
            .first()
            .map(|m| m.nrows())
            .ok_or_else(|| UsdError::InvalidPovm("no identifying elements".into()))?;
        if let Some(bad) = identify
            .iter()
            .find(|m| m.nrows() != dim || m.ncols() != dim)
        {
            return Err(UsdError::DimensionMismatch {
                expected: dim,
                found: bad.nrows(),
            });
        }
        let mut e0 = DMatrix::identity(dim, dim);
        for m in &identify {
            e0 -= m;
        }
        Ok(Self {
            identify,
            inconclusive: e0,
        })
    }

    /// Explicit elements; completeness is left to [`verify_povm`].
    pub fn from_parts(
        identify: Vec<DMatrix<Complex<T>>>,
        inconclusive: DMatrix<Complex<T>>,
    ) -> Result<Self> {
        let dim = inconclusive.nrows();
        if inconclusive.ncols() != dim {
            return Err(UsdError::InvalidPovm(
                "inconclusive element is not square".into(),
            ));
        }
        if let Some(bad) = identify
            .iter()
            .find(|m| m.nrows() != dim || m.ncols() != dim)
        {
            return Err(UsdError::DimensionMismatch {
                expected: dim,
                found: bad.nrows(),
            });
        }
        Ok(Self {
            identify,
            inconclusive,
        })
    }

    pub fn dim(&self) -> usize {
        self.inconclusive.nrows()
    }

    /// Number of identifying outcomes `N`.
    pub fn len(&self) -> usize {
        self.identify.len()
    }

    pub fn is_empty(&self) -> bool {
        self.identify.is_empty()
    }

    /// `E_j` for `j = 1..N`, 0-based here.
    pub fn identify(&self) -> &[DMatrix<Complex<T>>] {
        &self.identify
    }

    pub fn inconclusive(&self) -> &DMatrix<Complex<T>> {
        &self.inconclusive
    }

    /// `⟨s|E|s⟩` for `E_1..E_N` followed by `E_0`.
    pub fn born_probabilities(&self, s: &PureState<T>) -> Result<Vec<T>> {
        if s.dim() != self.dim() {
            return Err(UsdError::DimensionMismatch {
                expected: self.dim(),
                found: s.dim(),
            });
        }
        let v = s.amplitudes();
        Ok(self
            .identify
            .iter()
            .chain(std::iter::once(&self.inconclusive))
            .map(|e| v.dotc(&(e * v)).re)
            .collect())
    }
}

/// Zero-error measurement with `⟨ψ_k|E_j|ψ_k⟩ = p_j δ_jk`:
/// `E_j = p_j |ψ̃_j⟩⟨ψ̃_j| / |⟨ψ̃_j|ψ_j⟩|²`, `E_0 = I - Σ_j E_j`.
///
/// `E_0` is not guaranteed positive; check with [`verify_povm`].
pub fn usd_povm<T: Real>(e: &StateEnsemble<T>, success: &[T]) -> Result<Povm<T>> {
    if success.len() != e.len() {
        return Err(UsdError::DimensionMismatch {
            expected: e.len(),
            found: success.len(),
        });
    }
    if let Some(p) = success
        .iter()
        .find(|p| !(**p >= T::zero() && **p <= T::one()))
    {
        return Err(UsdError::InvalidArgument(format!(
            "success probability {} outside [0, 1]",
            p.as_f64()
        )));
    }
    let duals = reciprocal_states(e.states())?;
    let identify = duals
        .iter()
        .zip(success)
        .map(|(d, p)| outer(&d.vector) * creal(*p / d.normalization.modulus_squared()))
        .collect();
    Povm::complete(identify)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PovmReport {
    pub tolerance: f64,
    /// Smallest eigenvalue of each identifying element `E_1..E_N`.
    pub identify_min_eigenvalues: Vec<f64>,
    pub inconclusive_min_eigenvalue: f64,
    /// `max |Σ E - I|` entrywise.
    pub completeness_residual: f64,
    /// `error_matrix[j][k] = ⟨ψ_k|E_j|ψ_k⟩` for `j != k`; zero on the diagonal.
    pub error_matrix: Vec<Vec<f64>>,
    pub max_error: f64,
    pub per_state_success: Vec<f64>,
    pub average_success: f64,
    pub psd_ok: bool,
    pub complete_ok: bool,
    pub zero_error_ok: bool,
    pub passed: bool,
}

impl PovmReport {
    pub fn min_eigenvalue(&self) -> f64 {
        self.identify_min_eigenvalues
            .iter()
            .copied()
            .fold(self.inconclusive_min_eigenvalue, f64::min)
    }
}

pub fn verify_povm<T: Real>(m: &Povm<T>, e: &StateEnsemble<T>, tol: T) -> Result<PovmReport> {
    if m.dim() != e.dim() {
        return Err(UsdError::DimensionMismatch {
            expected: m.dim(),
            found: e.dim(),
        });
    }
    if m.len() != e.len() {
        return Err(UsdError::DimensionMismatch {
            expected: m.len(),
            found: e.len(),
        });
    }
    let min_eig = |x: &DMatrix<Complex<T>>| {
        hermitian_eigenvalues(x)
            .first()
            .map_or(f64::NAN, |v| v.as_f64())
    };
    let identify_min_eigenvalues: Vec<f64> = m.identify.iter().map(min_eig).collect();
    let inconclusive_min_eigenvalue = min_eig(&m.inconclusive);

    let dim = m.dim();
    let mut total = m.inconclusive.clone();
    for x in &m.identify {
        total += x;
    }
    let completeness_residual = (total - DMatrix::identity(dim, dim))
        .iter()
        .fold(0.0f64, |acc, z| acc.max(z.modulus().as_f64()));

    let n = e.len();
    let born = e
        .states()
        .iter()
        .map(|s| m.born_probabilities(s))
        .collect::<Result<Vec<_>>>()?;
    let mut error_matrix = vec![vec![0.0; n]; n];
    let mut per_state_success = vec![0.0; n];
    for k in 0..n {
        for j in 0..n {
            let p = born[k][j].as_f64();
            if j == k {
                per_state_success[k] = p;
            } else {
                error_matrix[j][k] = p;
            }
        }
    }
    let max_error = error_matrix
        .iter()
        .flatten()
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    let average_success = per_state_success
        .iter()
        .zip(e.priors())
        .map(|(s, p)| s * p.as_f64())
        .sum();

    let t = tol.as_f64();
    let psd_ok = identify_min_eigenvalues
        .iter()
        .chain(std::iter::once(&inconclusive_min_eigenvalue))
        .all(|v| *v >= -t);
    let complete_ok = completeness_residual <= t;
    let zero_error_ok = max_error < t;
    Ok(PovmReport {
        tolerance: t,
        identify_min_eigenvalues,
        inconclusive_min_eigenvalue,
        completeness_residual,
        error_matrix,
        max_error,
        per_state_success,
        average_success,
        psd_ok,
        complete_ok,
        zero_error_ok,
        passed: psd_ok && complete_ok && zero_error_ok,
    })
}

/// Precomputed `S = Σ_j |ψ̃_j⟩⟨ψ̃_j| / |⟨ψ̃_j|ψ_j⟩|²`, so that the uniform
/// measurement at success `p` has `E_0(p) = I - p S`.
#[derive(Clone, Debug)]
pub struct UniformFeasibility<T: Real> {
    dual_sum: DMatrix<Complex<T>>,
}

impl<T: Real> UniformFeasibility<T> {
    pub fn new(e: &StateEnsemble<T>) -> Result<Self> {
        let duals = reciprocal_states(e.states())?;
        let dim = e.dim();
        let mut dual_sum = DMatrix::from_element(dim, dim, creal(T::zero()));
        for d in &duals {
            dual_sum += outer(&d.vector) * creal(T::one() / d.normalization.modulus_squared());
        }
        Ok(Self { dual_sum })
    }

    /// Smallest eigenvalue of `E_0(p)`.
    pub fn inconclusive_min_eigenvalue(&self, p: T) -> T {
        let dim = self.dual_sum.nrows();
        let e0 = DMatrix::identity(dim, dim) - &self.dual_sum * creal(p);
        hermitian_eigenvalues(&e0)
            .first()
            .copied()
            .unwrap_or_else(T::zero)
    }

    pub fn is_feasible(&self, p: T) -> bool {
        self.inconclusive_min_eigenvalue(p) >= -T::psd_tol()
    }
}

/// Largest common success probability `p` for which the zero-error
/// measurement with `p_j = p` is a valid POVM, found by bisection to
/// within `tol`.
pub fn max_uniform_success<T: Real>(e: &StateEnsemble<T>, tol: T) -> Result<T> {
    if tol <= T::zero() || !tol.is_finite() {
        return Err(UsdError::InvalidArgument(
            "bisection tolerance must be positive".into(),
        ));
    }
    if !e.has_uniform_priors(T::norm_tol()) {
        return Err(UsdError::InvalidArgument(
            "bisection oracle requires uniform priors".into(),
        ));
    }
    let feas = UniformFeasibility::new(e)?;
    if feas.is_feasible(T::one()) {
        return Ok(T::one());
    }
    let (mut lo, mut hi) = (T::zero(), T::one());
    let half = T::lit(0.5);
    while hi - lo > tol {
        let mid = (lo + hi) * half;
        if feas.is_feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
