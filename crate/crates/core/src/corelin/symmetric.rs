use crate::error::{Result, UsdError};

/// Dimension of the symmetric subspace of `(C^d)^{⊗copies}`:
/// `binomial(copies + dim - 1, copies)`, exact.
pub fn sym_dim(copies: u64, dim: u64) -> Result<u64> {
    if copies == 0 || dim == 0 {
        return Err(UsdError::InvalidArgument(
            "copies and dimension must be >= 1".into(),
        ));
    }
    let n = copies
        .checked_add(dim - 1)
        .ok_or(UsdError::Overflow("binomial coefficient"))?;
    let k = copies.min(dim - 1);
    // r_i = binomial(n - k + i, i) stays integral at every step.
    let mut r: u128 = 1;
    for i in 1..=k {
        let top = u128::from(n - k + i);
        r = r
            .checked_mul(top)
            .ok_or(UsdError::Overflow("binomial coefficient"))?
            / u128::from(i);
    }
    u64::try_from(r).map_err(|_| UsdError::Overflow("binomial coefficient"))
}
