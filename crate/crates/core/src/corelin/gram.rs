use nalgebra::{ComplexField, DMatrix};

use super::state::{PureState, StateEnsemble};
use crate::scalar::{Complex, Real};

/// Matrix of overlaps, entry `(j, k) = ⟨ψ_j|ψ_k⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix<T: Real>(DMatrix<Complex<T>>);

pub fn gram<T: Real>(e: &StateEnsemble<T>) -> GramMatrix<T> {
    gram_of(e.states())
}

pub fn gram_of<T: Real>(states: &[PureState<T>]) -> GramMatrix<T> {
    let n = states.len();
    let mut g = DMatrix::from_element(n, n, Complex::new(T::zero(), T::zero()));
    for j in 0..n {
        g[(j, j)] = states[j].inner(&states[j]);
        for k in j + 1..n {
            let v = states[j].inner(&states[k]);
            g[(j, k)] = v;
            g[(k, j)] = v.conj();
        }
    }
    GramMatrix(g)
}

impl<T: Real> GramMatrix<T> {
    pub fn entries(&self) -> &DMatrix<Complex<T>> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Complex<T>> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.0.nrows() == 0
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        super::hermitian_eigenvalues(&self.0)
    }

    /// Number of eigenvalues above `tol` times the largest one.
    pub fn rank(&self, tol: T) -> usize {
        let ev = self.eigenvalues();
        let max = ev.iter().fold(T::zero(), |m, v| m.max(*v));
        if max <= T::zero() {
            return 0;
        }
        ev.iter().filter(|v| **v > tol * max).count()
    }

    /// Hermitian with unit diagonal and no eigenvalue below `-psd_tol`.
    pub fn is_valid(&self, tol: T, psd_tol: T) -> bool {
        let n = self.len();
        for j in 0..n {
            if (self.0[(j, j)] - Complex::new(T::one(), T::zero())).modulus() > tol {
                return false;
            }
            for k in 0..n {
                if (self.0[(j, k)] - self.0[(k, j)].conj()).modulus() > tol {
                    return false;
                }
            }
        }
        self.eigenvalues().first().is_none_or(|m| *m >= -psd_tol)
    }

    /// Entry `(j, k)` depends only on `(k - j) mod N`.
    pub fn is_circulant(&self, tol: T) -> bool {
        let n = self.len();
        (0..n).all(|j| {
            (0..n).all(|k| (self.0[(j, k)] - self.0[(0, (k + n - j) % n)]).modulus() <= tol)
        })
    }

    /// Entrywise `g^power`.
    pub fn elementwise_pow(&self, power: usize) -> Self {
        GramMatrix(self.0.map(|z| {
            let mut acc = Complex::new(T::one(), T::zero());
            for _ in 0..power {
                acc *= z;
            }
            acc
        }))
    }

    /// `max_{j,k} |a_jk - b_jk|`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        if self.0.shape() != other.0.shape() {
            return T::max_value().unwrap_or_else(|| T::lit(f64::MAX));
        }
        self.0
            .zip_map(&other.0, |a, b| (a - b).modulus())
            .iter()
            .fold(T::zero(), |m, v| m.max(*v))
    }
}
