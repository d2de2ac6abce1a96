use nalgebra::DMatrix;

use super::state::PureState;
use crate::error::{Result, UsdError};
use crate::scalar::{Complex, Real};

/// Default relative singular-value cut for rank decisions in `f64`.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

fn stacked<T: Real>(states: &[PureState<T>]) -> Result<DMatrix<Complex<T>>> {
    let first = states
        .first()
        .ok_or_else(|| UsdError::InvalidArgument("rank of an empty set".into()))?;
    let dim = first.dim();
    if let Some(bad) = states.iter().find(|s| s.dim() != dim) {
        return Err(UsdError::DimensionMismatch {
            expected: dim,
            found: bad.dim(),
        });
    }
    Ok(DMatrix::from_fn(dim, states.len(), |r, c| {
        states[c].amplitudes()[r]
    }))
}

/// Singular values of the `dim × N` matrix whose columns are the states,
/// in descending order.
pub fn singular_values<T: Real>(states: &[PureState<T>]) -> Result<Vec<T>> {
    let m = stacked(states)?;
    let mut sv: Vec<T> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    Ok(sv)
}

/// Number of singular values exceeding `tol × σ_max`.
pub fn li_rank<T: Real>(states: &[PureState<T>], tol: T) -> Result<usize> {
    if tol <= T::zero() || !tol.is_finite() {
        return Err(UsdError::InvalidArgument(
            "rank tolerance must be positive".into(),
        ));
    }
    let sv = singular_values(states)?;
    let max = sv.first().copied().unwrap_or_else(T::zero);
    if max <= T::zero() {
        return Ok(0);
    }
    Ok(sv.iter().filter(|s| **s > tol * max).count())
}

pub fn is_linearly_independent<T: Real>(states: &[PureState<T>], tol: T) -> Result<bool> {
    Ok(li_rank(states, tol)? == states.len())
}
