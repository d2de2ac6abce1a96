//! How many pure states can be told apart unambiguously given `C` copies,
//! when single copies span a `D`-dimensional space.
//!
//! `N <= C + D - 1` guarantees it for distinct states, `N <= binomial(C+D-1, C)`
//! is necessary. Both bounds are tight; the witness constructions here
//! realise each extreme and certify themselves numerically.

use rand::Rng;
use serde::Serialize;

use crate::corelin::{check_tensor_size, li_rank, sym_dim, PureState, StateEnsemble};
use crate::error::{LemmaPremise, Result, UsdError};
use crate::scalar::{cplx, Real};

/// Witness states must satisfy `|⟨ψ_j'|ψ_j⟩| <= 1 - DISTINCT_MARGIN`.
pub const DISTINCT_MARGIN: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// More states than the symmetric subspace can hold.
    Impossible,
    /// Any distinct states work.
    Guaranteed,
    /// Depends on the particular states.
    Indeterminate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FeasibilityVerdict {
    pub verdict: Verdict,
    pub necessary_max: u64,
    pub sufficient_max: u64,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "C")]
    pub c: u64,
    #[serde(rename = "D")]
    pub d: u64,
}

/// `binomial(C + D - 1, C)`.
pub fn necessary_max(copies: u64, dim: u64) -> Result<u64> {
    sym_dim(copies, dim)
}

/// `C + D - 1`. Exceeds [`necessary_max`] only in the degenerate case
/// `D = 1`; [`classify`] reports the smaller of the two.
pub fn sufficient_max(copies: u64, dim: u64) -> Result<u64> {
    if copies == 0 || dim == 0 {
        return Err(UsdError::InvalidArgument(
            "copies and dimension must be >= 1".into(),
        ));
    }
    copies
        .checked_add(dim - 1)
        .ok_or(UsdError::Overflow("C + D - 1"))
}

pub fn classify(n: u64, copies: u64, dim: u64) -> Result<FeasibilityVerdict> {
    if n == 0 {
        return Err(UsdError::InvalidArgument(
            "number of states must be >= 1".into(),
        ));
    }
    let nec = necessary_max(copies, dim)?;
    // For D = 1 there is only one distinct state, so C + D - 1 overshoots.
    let suf = sufficient_max(copies, dim)?.min(nec);
    let verdict = if n > nec {
        Verdict::Impossible
    } else if n <= suf {
        Verdict::Guaranteed
    } else {
        Verdict::Indeterminate
    };
    Ok(FeasibilityVerdict {
        verdict,
        necessary_max: nec,
        sufficient_max: suf,
        n,
        c: copies,
        d: dim,
    })
}

/// Rank of the `C`-fold tensor powers of an ensemble.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    pub n: usize,
    pub copies: usize,
    pub rank: usize,
    pub independent: bool,
}

pub fn certify<T: Real>(e: &StateEnsemble<T>, copies: usize) -> Result<WitnessCheck> {
    let powers = e.tensor_power(copies)?;
    let rank = li_rank(powers.states(), T::rank_tol())?;
    Ok(WitnessCheck {
        n: e.len(),
        copies,
        rank,
        independent: rank == e.len(),
    })
}

fn distinct_from_all<T: Real>(s: &PureState<T>, others: &[PureState<T>]) -> bool {
    let margin = T::lit(DISTINCT_MARGIN);
    others.iter().all(|o| s.is_distinct_from(o, margin))
}

/// `binomial(C+D-1, C)` states in `C^D` whose `C`-fold powers are linearly
/// independent. Built greedily from Haar-random states: a candidate is kept
/// only if it raises the rank of the powers.
pub fn achievability_witness<T: Real, R: Rng + ?Sized>(
    copies: usize,
    dim: usize,
    rng: &mut R,
) -> Result<StateEnsemble<T>> {
    let target = usize::try_from(sym_dim(copies as u64, dim as u64)?)
        .map_err(|_| UsdError::Overflow("witness size"))?;
    let power_dim = check_tensor_size(dim, copies)?;
    if target > power_dim {
        return Err(UsdError::Postcondition(
            "symmetric dimension exceeds ambient dimension".into(),
        ));
    }
    let max_attempts = 100 + 50 * target;
    let mut kept: Vec<PureState<T>> = Vec::with_capacity(target);
    let mut powers: Vec<PureState<T>> = Vec::with_capacity(target);
    let mut attempts = 0;
    while kept.len() < target {
        attempts += 1;
        if attempts > max_attempts {
            return Err(UsdError::WitnessFailed {
                attempts: max_attempts,
                reason: format!("reached rank {} of {target}", kept.len()),
            });
        }
        let s = PureState::random(dim, rng)?;
        if !distinct_from_all(&s, &kept) {
            continue;
        }
        let p = s.tensor_power(copies)?;
        powers.push(p);
        if li_rank(&powers, T::rank_tol())? == powers.len() {
            kept.push(s);
        } else {
            powers.pop();
        }
    }
    let e = StateEnsemble::uniform(kept)?;
    let check = certify(&e, copies)?;
    if !check.independent {
        return Err(UsdError::Postcondition(format!(
            "witness powers have rank {} < {}",
            check.rank, check.n
        )));
    }
    Ok(e)
}

/// `C + D` distinct states in `C^D` whose `C`-fold powers are linearly
/// dependent: `D` independent states plus `C` more drawn from the plane of
/// the last two.
pub fn dependence_witness<T: Real, R: Rng + ?Sized>(
    copies: usize,
    dim: usize,
    rng: &mut R,
) -> Result<StateEnsemble<T>> {
    if dim < 2 {
        return Err(UsdError::InvalidArgument(
            "dependence witness needs D >= 2".into(),
        ));
    }
    if copies == 0 {
        return Err(UsdError::InvalidArgument("copy number must be >= 1".into()));
    }
    check_tensor_size(dim, copies)?;
    let max_attempts = 100 + 50 * (copies + dim);
    let mut attempts = 0;
    let mut bump = |what: &str| -> Result<()> {
        attempts += 1;
        if attempts > max_attempts {
            return Err(UsdError::WitnessFailed {
                attempts: max_attempts,
                reason: what.to_string(),
            });
        }
        Ok(())
    };

    let base = loop {
        bump("no independent base set")?;
        let cand = (0..dim)
            .map(|_| PureState::<T>::random(dim, rng))
            .collect::<Result<Vec<_>>>()?;
        let distinct = (0..dim).all(|i| distinct_from_all(&cand[i], &cand[i + 1..]));
        if distinct && li_rank(&cand, T::rank_tol())? == dim {
            break cand;
        }
    };

    let mut states = base;
    let (u, v) = (states[dim - 2].clone(), states[dim - 1].clone());
    while states.len() < dim + copies {
        bump("coplanar states kept coinciding")?;
        let mut gauss = || {
            let re: f64 = rng.sample(rand_distr::StandardNormal);
            let im: f64 = rng.sample(rand_distr::StandardNormal);
            cplx(T::lit(re), T::lit(im))
        };
        let (a, b) = (gauss(), gauss());
        let amps = u.amplitudes() * a + v.amplitudes() * b;
        let Ok(s) = PureState::normalized(amps.iter().copied().collect()) else {
            continue;
        };
        if distinct_from_all(&s, &states) {
            states.push(s);
        }
    }

    let e = StateEnsemble::uniform(states)?;
    let check = certify(&e, copies)?;
    if check.independent {
        return Err(UsdError::Postcondition(format!(
            "dependence witness powers unexpectedly have full rank {}",
            check.rank
        )));
    }
    Ok(e)
}

/// Linear independence of `{φ_k ⊗ χ_k} ∪ {φ ⊗ χ}` after checking that
/// `{φ_k}` is independent, the `χ_k` are pairwise distinct and `χ` is
/// distinct from each of them. Under those premises the answer is always
/// `true`.
pub fn lemma_check<T: Real>(
    phis: &[PureState<T>],
    chis: &[PureState<T>],
    phi: &PureState<T>,
    chi: &PureState<T>,
) -> Result<bool> {
    let premise = |p| Err(UsdError::LemmaPremise(p));
    if phis.is_empty() {
        return premise(LemmaPremise::Empty);
    }
    if phis.len() != chis.len() {
        return premise(LemmaPremise::CardinalityMismatch);
    }
    let same_dim =
        |set: &[PureState<T>], extra: &PureState<T>| set.iter().all(|s| s.dim() == extra.dim());
    if !same_dim(phis, phi) || !same_dim(chis, chi) {
        return premise(LemmaPremise::DimensionMismatch);
    }
    if li_rank(phis, T::rank_tol())? != phis.len() {
        return premise(LemmaPremise::PhisDependent);
    }
    if !(0..chis.len()).all(|i| distinct_from_all(&chis[i], &chis[i + 1..])) {
        return premise(LemmaPremise::ChisNotDistinct);
    }
    if !distinct_from_all(chi, chis) {
        return premise(LemmaPremise::ChiNotDistinct);
    }
    let mut products = phis
        .iter()
        .zip(chis)
        .map(|(p, c)| p.tensor(c))
        .collect::<Result<Vec<_>>>()?;
    products.push(phi.tensor(chi)?);
    Ok(li_rank(&products, T::rank_tol())? == products.len())
}
