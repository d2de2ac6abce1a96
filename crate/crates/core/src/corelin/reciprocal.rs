use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::gram::gram_of;
use super::state::PureState;
use crate::error::{Result, UsdError};
use crate::scalar::{creal, Complex, Real};

/// A reciprocal vector `|ψ̃_k⟩` together with `⟨ψ̃_k|ψ_k⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct Reciprocal<T: Real> {
    pub vector: DVector<Complex<T>>,
    pub normalization: Complex<T>,
}

/// Reciprocal basis of a linearly independent set, inside its span:
/// `|ψ̃_k⟩ = Σ_j (G⁻¹)_{jk} |ψ_j⟩`, so that `⟨ψ̃_k'|ψ_k⟩ = δ_{kk'}`.
pub fn reciprocal_states<T: Real>(states: &[PureState<T>]) -> Result<Vec<Reciprocal<T>>> {
    let first = states
        .first()
        .ok_or_else(|| UsdError::InvalidArgument("reciprocal basis of an empty set".into()))?;
    let dim = first.dim();
    if let Some(bad) = states.iter().find(|s| s.dim() != dim) {
        return Err(UsdError::DimensionMismatch {
            expected: dim,
            found: bad.dim(),
        });
    }
    let n = states.len();
    let g = gram_of(states).into_inner();
    let eig = SymmetricEigen::new(g);
    let max = eig.eigenvalues.iter().fold(T::zero(), |m, v| m.max(*v));
    let rank = eig
        .eigenvalues
        .iter()
        .filter(|v| **v > T::rank_tol() * max)
        .count();
    if rank < n {
        return Err(UsdError::LinearlyDependent { rank, n });
    }
    let inv_diag = DMatrix::from_diagonal(&eig.eigenvalues.map(|v| creal(T::one() / v)));
    let g_inv = &eig.eigenvectors * inv_diag * eig.eigenvectors.adjoint();

    let psi = DMatrix::from_fn(dim, n, |r, c| states[c].amplitudes()[r]);
    let duals = psi * g_inv;
    Ok(duals
        .column_iter()
        .zip(states)
        .map(|(col, s)| {
            let vector: DVector<Complex<T>> = col.into_owned();
            let normalization = vector.dotc(s.amplitudes());
            Reciprocal {
                vector,
                normalization,
            }
        })
        .collect())
}
