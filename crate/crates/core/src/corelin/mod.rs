//! Dense complex linear algebra on pure states: tensor powers, Gram
//! matrices, rank tests, symmetric-subspace dimension and reciprocal bases.

mod gram;
mod rank;
mod reciprocal;
mod state;
mod symmetric;

pub use gram::{gram, gram_of, GramMatrix};
pub use rank::{is_linearly_independent, li_rank, singular_values, DEFAULT_RANK_TOL};
pub use reciprocal::{reciprocal_states, Reciprocal};
pub use state::{PureState, StateEnsemble, MAX_TENSOR_AMPLITUDES};
pub use symmetric::sym_dim;

pub(crate) use state::check_tensor_size;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::scalar::{Complex, Real};

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues<T: Real>(m: &DMatrix<Complex<T>>) -> Vec<T> {
    let mut ev: Vec<T> = SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    ev
}

/// `|v⟩⟨v|`.
pub fn outer<T: Real>(v: &nalgebra::DVector<Complex<T>>) -> DMatrix<Complex<T>> {
    v * v.adjoint()
}
