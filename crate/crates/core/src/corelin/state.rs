use nalgebra::{ComplexField, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Result, UsdError};
use crate::scalar::{cplx, creal, Complex, Real};

/// Largest number of amplitudes a dense tensor power may hold.
pub const MAX_TENSOR_AMPLITUDES: usize = 1 << 24;

/// A normalised pure state in a `dim`-dimensional Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState<T: Real> {
    amplitudes: DVector<Complex<T>>,
}

impl<T: Real> PureState<T> {
    /// Wraps `amplitudes`, rejecting vectors whose norm is not 1 within
    /// [`Real::norm_tol`].
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(UsdError::InvalidArgument(
                "state dimension must be >= 1".into(),
            ));
        }
        let v = DVector::from_vec(amplitudes);
        let norm = v.norm();
        if (norm - T::one()).abs() > T::norm_tol() || !norm.is_finite() {
            return Err(UsdError::NotNormalized {
                norm: norm.as_f64(),
            });
        }
        Ok(Self { amplitudes: v })
    }

    /// Normalises `amplitudes` first. Fails only on the zero vector.
    pub fn normalized(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(UsdError::InvalidArgument(
                "state dimension must be >= 1".into(),
            ));
        }
        let v = DVector::from_vec(amplitudes);
        let norm = v.norm();
        if norm <= T::default_epsilon() || !norm.is_finite() {
            return Err(UsdError::NotNormalized {
                norm: norm.as_f64(),
            });
        }
        Ok(Self {
            amplitudes: v.unscale(norm),
        })
    }

    pub fn from_real(amplitudes: &[T]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&a| creal(a)).collect())
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(UsdError::InvalidArgument(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut v = vec![Complex::new(T::zero(), T::zero()); dim];
        v[index] = creal(T::one());
        Self::new(v)
    }

    /// Haar-random state: normalised vector of i.i.d. complex Gaussians.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Self> {
        if dim == 0 {
            return Err(UsdError::InvalidArgument(
                "state dimension must be >= 1".into(),
            ));
        }
        loop {
            let v: Vec<Complex<T>> = (0..dim)
                .map(|_| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    cplx(T::lit(re), T::lit(im))
                })
                .collect();
            if let Ok(s) = Self::normalized(v) {
                return Ok(s);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex<T>> {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> DVector<Complex<T>> {
        self.amplitudes
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// `|self⟩ ⊗ |other⟩`, with `self` as the slow (most significant) index.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let dim = self
            .dim()
            .checked_mul(other.dim())
            .filter(|&d| d <= MAX_TENSOR_AMPLITUDES)
            .ok_or(UsdError::TensorTooLarge {
                dim: self.dim() * other.dim(),
                copies: 1,
            })?;
        let mut out = Vec::with_capacity(dim);
        for a in self.amplitudes.iter() {
            for b in other.amplitudes.iter() {
                out.push(*a * *b);
            }
        }
        Ok(Self {
            amplitudes: DVector::from_vec(out),
        })
    }

    /// `|self⟩^{⊗copies}`. Rejects results with more than 2^24 amplitudes.
    pub fn tensor_power(&self, copies: usize) -> Result<Self> {
        if copies == 0 {
            return Err(UsdError::InvalidArgument("copy number must be >= 1".into()));
        }
        check_tensor_size(self.dim(), copies)?;
        let mut out = self.clone();
        for _ in 1..copies {
            out = out.tensor(self)?;
        }
        Ok(out)
    }

    /// Two states are distinct when `|⟨a|b⟩| <= 1 - margin`.
    pub fn is_distinct_from(&self, other: &Self, margin: T) -> bool {
        self.inner(other).modulus() <= T::one() - margin
    }
}

pub(crate) fn check_tensor_size(dim: usize, copies: usize) -> Result<usize> {
    let mut total: usize = 1;
    for _ in 0..copies {
        total = match total.checked_mul(dim) {
            Some(t) if t <= MAX_TENSOR_AMPLITUDES => t,
            _ => return Err(UsdError::TensorTooLarge { dim, copies }),
        };
    }
    Ok(total)
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    dim: usize,
    amplitudes: Vec<[f64; 2]>,
}

impl<T: Real> Serialize for PureState<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        StateRepr {
            dim: self.dim(),
            amplitudes: self
                .amplitudes
                .iter()
                .map(|a| [a.re.as_f64(), a.im.as_f64()])
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de, T: Real> Deserialize<'de> for PureState<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = StateRepr::deserialize(deserializer)?;
        if repr.dim != repr.amplitudes.len() {
            return Err(D::Error::custom(format!(
                "dim {} does not match {} amplitudes",
                repr.dim,
                repr.amplitudes.len()
            )));
        }
        let amps = repr
            .amplitudes
            .iter()
            .map(|[re, im]| cplx(T::lit(*re), T::lit(*im)))
            .collect();
        PureState::new(amps).map_err(D::Error::custom)
    }
}

/// `N` pure states of a common dimension with a prior distribution.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct StateEnsemble<T: Real> {
    states: Vec<PureState<T>>,
    #[serde(serialize_with = "serialize_priors")]
    priors: Vec<T>,
}

fn serialize_priors<T: Real, S: Serializer>(p: &[T], s: S) -> Result<S::Ok, S::Error> {
    let v: Vec<f64> = p.iter().map(|x| x.as_f64()).collect();
    v.serialize(s)
}

impl<T: Real> StateEnsemble<T> {
    /// Ensemble with equal priors `1/N`.
    pub fn uniform(states: Vec<PureState<T>>) -> Result<Self> {
        let n = states.len();
        let p = T::one() / T::from_usize(n.max(1)).expect("usize fits scalar");
        Self::with_priors(states, vec![p; n])
    }

    pub fn with_priors(states: Vec<PureState<T>>, priors: Vec<T>) -> Result<Self> {
        if states.is_empty() {
            return Err(UsdError::InvalidArgument(
                "ensemble must contain at least one state".into(),
            ));
        }
        if priors.len() != states.len() {
            return Err(UsdError::DimensionMismatch {
                expected: states.len(),
                found: priors.len(),
            });
        }
        let dim = states[0].dim();
        if let Some(bad) = states.iter().find(|s| s.dim() != dim) {
            return Err(UsdError::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        if priors.iter().any(|p| *p < T::zero() || !p.is_finite()) {
            return Err(UsdError::InvalidArgument(
                "priors must be nonnegative".into(),
            ));
        }
        let total = priors.iter().fold(T::zero(), |acc, p| acc + *p);
        if (total - T::one()).abs() > T::norm_tol() {
            return Err(UsdError::InvalidArgument(format!(
                "priors sum to {} instead of 1",
                total.as_f64()
            )));
        }
        Ok(Self { states, priors })
    }

    pub fn states(&self) -> &[PureState<T>] {
        &self.states
    }

    pub fn priors(&self) -> &[T] {
        &self.priors
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    /// Largest `|⟨ψ_j'|ψ_j⟩|` over distinct pairs; 0 for a single state.
    pub fn max_overlap(&self) -> T {
        let mut best = T::zero();
        for (j, a) in self.states.iter().enumerate() {
            for b in &self.states[j + 1..] {
                best = best.max(a.inner(b).modulus());
            }
        }
        best
    }

    /// Every pair satisfies `|⟨ψ_j'|ψ_j⟩| <= 1 - margin`.
    pub fn is_distinct(&self, margin: T) -> bool {
        self.max_overlap() <= T::one() - margin
    }

    pub fn has_uniform_priors(&self, tol: T) -> bool {
        let p = T::one() / T::from_usize(self.len()).expect("usize fits scalar");
        self.priors.iter().all(|q| (*q - p).abs() <= tol)
    }

    /// Replaces every state by its `copies`-fold tensor power, keeping priors.
    pub fn tensor_power(&self, copies: usize) -> Result<Self> {
        let states = self
            .states
            .iter()
            .map(|s| s.tensor_power(copies))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            states,
            priors: self.priors.clone(),
        })
    }
}

impl<'de, T: Real> Deserialize<'de> for StateEnsemble<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        #[derive(Deserialize)]
        #[serde(bound = "")]
        struct Repr<T: Real> {
            states: Vec<PureState<T>>,
            priors: Vec<f64>,
        }
        let repr = Repr::<T>::deserialize(deserializer)?;
        let priors = repr.priors.into_iter().map(T::lit).collect();
        StateEnsemble::with_priors(repr.states, priors).map_err(D::Error::custom)
    }
}
