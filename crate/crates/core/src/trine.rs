//! Trine and lifted-trine ensembles, and the multi-copy trine problem.
//!
//! Basis convention: `|x⟩, |y⟩, |z⟩` are indices 0, 1, 2. The trines live
//! in the `x`-`y` plane; the lifted trines
//! `|T_j(λ)⟩ = λ|z⟩ + √(1-λ²)|t_j⟩` add a component along `z`.
//!
//! `C` copies of the trines have the same Gram matrix as a lifted-trine
//! set with lift `L_C`, so every `C`-copy computation here runs on 3×3
//! matrices. [`multitrine_tensor_powers`] builds the dense `2^C`-dimensional
//! states for cross-checking.

use nalgebra::ComplexField;
use serde::Serialize;

use crate::corelin::{PureState, StateEnsemble};
use crate::error::{Result, UsdError};
use crate::scalar::{cplx, creal, Complex, Real};
use crate::symusd::{usd_povm, Povm, SymmetricEnsemble};

fn check_unit_interval<T: Real>(name: &str, v: T) -> Result<()> {
    if !(v >= T::zero() && v <= T::one()) {
        return Err(UsdError::InvalidArgument(format!(
            "{name} = {} outside [0, 1]",
            v.as_f64()
        )));
    }
    Ok(())
}

fn check_copies(copies: usize, min: usize) -> Result<()> {
    if copies < min {
        return Err(UsdError::InvalidArgument(format!(
            "copy number {copies} below {min}"
        )));
    }
    Ok(())
}

fn sqrt3<T: Real>() -> T {
    T::lit(3.0).sqrt()
}

/// Planar trine amplitudes `(x, y)` of `t_1, t_2, t_3`.
fn trine_xy<T: Real>() -> [[T; 2]; 3] {
    let half = T::lit(0.5);
    let h3 = sqrt3::<T>() * half;
    [[T::zero(), T::one()], [h3, -half], [-h3, -half]]
}

/// `|t_1⟩ = |y⟩`, `|t_2⟩ = (√3|x⟩ - |y⟩)/2`, `|t_3⟩ = -(√3|x⟩ + |y⟩)/2`,
/// equal priors.
pub fn trine_states<T: Real>() -> StateEnsemble<T> {
    let states = trine_xy::<T>()
        .iter()
        .map(|a| PureState::from_real(a).expect("trine states are normalised"))
        .collect();
    StateEnsemble::uniform(states).expect("three qubit states")
}

/// `|T_j(λ)⟩ = λ|z⟩ + √(1-λ²)|t_j⟩` in `C^3`, equal priors.
pub fn lifted_trine<T: Real>(lambda: T) -> Result<StateEnsemble<T>> {
    check_unit_interval("lift parameter", lambda)?;
    let planar = (T::one() - lambda * lambda).max(T::zero()).sqrt();
    let states = trine_xy::<T>()
        .iter()
        .map(|[x, y]| {
            PureState::normalized(vec![creal(planar * *x), creal(planar * *y), creal(lambda)])
        })
        .collect::<Result<Vec<_>>>()?;
    StateEnsemble::uniform(states)
}

/// Orthonormal basis in which the lifted trines are symmetric:
/// `u_0 = |z⟩`, `u_1 = e^{5πi/6}(|x⟩ + i|y⟩)/√2`, `u_2 = e^{-5πi/6}(|x⟩ - i|y⟩)/√2`.
pub fn u_basis<T: Real>() -> [PureState<T>; 3] {
    let r = T::one() / T::lit(2.0).sqrt();
    let angle = T::lit(5.0) * T::pi() / T::lit(6.0);
    let p = cplx(angle.cos(), angle.sin()) * creal(r);
    let m = p.conj();
    let i = cplx(T::zero(), T::one());
    let z = creal(T::zero());
    let mk = |v: Vec<Complex<T>>| PureState::new(v).expect("u basis is normalised");
    [
        mk(vec![z, z, creal(T::one())]),
        mk(vec![p, p * i, z]),
        mk(vec![m, -(m * i), z]),
    ]
}

/// `(c_0, c_1, c_2) = (λ, √((1-λ²)/2), √((1-λ²)/2))`.
pub fn lifted_trine_coefficients<T: Real>(lambda: T) -> Result<[T; 3]> {
    check_unit_interval("lift parameter", lambda)?;
    let side = ((T::one() - lambda * lambda) / T::lit(2.0))
        .max(T::zero())
        .sqrt();
    Ok([lambda, side, side])
}

/// The lifted trines as a [`SymmetricEnsemble`] over [`u_basis`].
/// Requires `0 < λ < 1` so that no coefficient vanishes.
pub fn lifted_trine_symmetric<T: Real>(lambda: T) -> Result<SymmetricEnsemble<T>> {
    let c = lifted_trine_coefficients(lambda)?;
    SymmetricEnsemble::new(
        c.iter().map(|v| creal(*v)).collect(),
        u_basis::<T>().to_vec(),
    )
}

/// `3 · min(λ², (1-λ²)/2)`.
pub fn p_max_lifted<T: Real>(lambda: T) -> Result<T> {
    check_unit_interval("lift parameter", lambda)?;
    let l2 = lambda * lambda;
    Ok(T::lit(3.0) * l2.min((T::one() - l2) / T::lit(2.0)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LiftedTrineParams<T: Real> {
    pub lambda: T,
    pub coefficients: [T; 3],
    pub p_max: T,
}

impl<T: Real> LiftedTrineParams<T> {
    pub fn new(lambda: T) -> Result<Self> {
        Ok(Self {
            lambda,
            coefficients: lifted_trine_coefficients(lambda)?,
            p_max: p_max_lifted(lambda)?,
        })
    }
}

/// `L_C = √((1 - (-1/2)^{C-1}) / 3)`.
pub fn lift_closed_form<T: Real>(copies: usize) -> Result<T> {
    check_copies(copies, 1)?;
    let exp = i32::try_from(copies - 1).unwrap_or(i32::MAX);
    let pow = T::lit(-0.5).powi(exp);
    Ok(((T::one() - pow) / T::lit(3.0)).max(T::zero()).sqrt())
}

/// `L ↦ √((1 - L²)/2)`.
pub fn lift_recurrence_step<T: Real>(prev: T) -> Result<T> {
    check_unit_interval("lift parameter", prev)?;
    Ok(((T::one() - prev * prev) / T::lit(2.0))
        .max(T::zero())
        .sqrt())
}

/// `L_C` by iterating [`lift_recurrence_step`] from `L_1 = 0`.
pub fn lift_by_recurrence<T: Real>(copies: usize) -> Result<T> {
    check_copies(copies, 1)?;
    (1..copies).try_fold(T::zero(), |l, _| lift_recurrence_step(l))
}

/// Optimal success for `C >= 2` copies of the trines:
/// `1 - 2^{-C}` for even `C`, `1 - 2^{-(C-1)}` for odd `C`.
pub fn p_max_multitrine<T: Real>(copies: usize) -> Result<T> {
    check_copies(copies, 2)?;
    let even = copies - copies % 2;
    let exp = i32::try_from(even).unwrap_or(i32::MAX);
    Ok(T::one() - T::lit(0.5).powi(exp))
}

/// Success of optimal measurements on `⌊C/2⌋` disjoint pairs:
/// `1 - (1 - 3/4)^{⌊C/2⌋}`.
pub fn pairwise_success<T: Real>(copies: usize) -> Result<T> {
    check_copies(copies, 2)?;
    let pairs = i32::try_from(copies / 2).unwrap_or(i32::MAX);
    let per_pair = p_max_multitrine::<T>(2)?;
    Ok(T::one() - (T::one() - per_pair).powi(pairs))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MultiTrineParams<T: Real> {
    pub copies: usize,
    pub lift: T,
    /// Zero for a single copy, where the trines are linearly dependent.
    pub p_max: T,
}

impl<T: Real> MultiTrineParams<T> {
    pub fn new(copies: usize) -> Result<Self> {
        let lift = lift_closed_form(copies)?;
        let p_max = if copies == 1 {
            T::zero()
        } else {
            p_max_multitrine(copies)?
        };
        Ok(Self {
            copies,
            lift,
            p_max,
        })
    }
}

/// Three-dimensional stand-in for `{|t_j⟩^{⊗C}}`: `lifted_trine(L_C)`.
pub fn multitrine_representation<T: Real>(copies: usize) -> Result<StateEnsemble<T>> {
    lifted_trine(lift_closed_form::<T>(copies)?)
}

/// The dense `2^C`-dimensional tensor powers `{|t_j⟩^{⊗C}}`.
pub fn multitrine_tensor_powers<T: Real>(copies: usize) -> Result<StateEnsemble<T>> {
    trine_states::<T>().tensor_power(copies)
}

/// Optimal zero-error measurement for `C >= 2` trine copies, on the
/// 3-dimensional representation.
pub fn multitrine_povm<T: Real>(copies: usize, success: T) -> Result<(StateEnsemble<T>, Povm<T>)> {
    check_copies(copies, 2)?;
    let e = multitrine_representation::<T>(copies)?;
    let m = usd_povm(&e, &[success; 3])?;
    Ok((e, m))
}

/// `points` uniform λ nodes on `[0, 1]`. With `snap_peak`, the node
/// nearest `1/√3` is moved onto it so the curve's maximum is sampled.
pub fn lifted_curve_grid<T: Real>(points: usize, snap_peak: bool) -> Result<Vec<T>> {
    if points < 2 {
        return Err(UsdError::InvalidArgument(format!(
            "grid needs at least 2 points, got {points}"
        )));
    }
    let last = T::from_usize(points - 1).expect("usize fits scalar");
    let mut grid: Vec<T> = (0..points)
        .map(|i| T::from_usize(i).expect("usize fits scalar") / last)
        .collect();
    if snap_peak {
        let peak = T::one() / sqrt3::<T>();
        let nearest = (0..points)
            .min_by(|&a, &b| {
                let (da, db) = ((grid[a] - peak).abs(), (grid[b] - peak).abs());
                da.partial_cmp(&db).unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("non-empty grid");
        grid[nearest] = peak;
    }
    Ok(grid)
}

/// `(λ, p_max(λ))` rows over [`lifted_curve_grid`].
pub fn lifted_curve<T: Real>(points: usize, snap_peak: bool) -> Result<Vec<(T, T)>> {
    lifted_curve_grid::<T>(points, snap_peak)?
        .into_iter()
        .map(|l| Ok((l, p_max_lifted(l)?)))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrineTableRow<T: Real> {
    #[serde(rename = "C")]
    pub copies: usize,
    #[serde(rename = "L_C")]
    pub lift: T,
    pub p_max: T,
    /// Success of the pairwise strategy; 0 for one copy.
    pub pairwise_p: T,
}

/// One row per copy number `1..=c_max`.
pub fn trine_table<T: Real>(c_max: usize) -> Result<Vec<TrineTableRow<T>>> {
    check_copies(c_max, 2)?;
    (1..=c_max)
        .map(|c| {
            let params = MultiTrineParams::<T>::new(c)?;
            let pairwise_p = if c == 1 {
                T::zero()
            } else {
                pairwise_success(c)?
            };
            Ok(TrineTableRow {
                copies: c,
                lift: params.lift,
                p_max: params.p_max,
                pairwise_p,
            })
        })
        .collect()
}

/// Output of [`tau_doubling`].
#[derive(Clone, Debug)]
pub struct TauDoubling<T: Real> {
    /// `|τ_j⟩ = |T_j(λ)⟩ ⊗ |t_j⟩` in `C^3 ⊗ C^2`.
    pub tau: StateEnsemble<T>,
    /// `L = √((1-λ²)/2)`, the lift of the `τ_j`.
    pub lift: T,
    pub x: PureState<T>,
    pub y: PureState<T>,
    pub z: PureState<T>,
    /// Largest deviation of `τ_j` from its lifted-trine expansion in `{X, Y, Z}`.
    pub expansion_residual: T,
}

/// Shows that `T_j(λ) ⊗ t_j` is again a lifted trine, with lift
/// `√((1-λ²)/2)`, by building the orthonormal frame `|X⟩, |Y⟩, |Z⟩` and
/// checking the expansion.
pub fn tau_doubling<T: Real>(lambda: T) -> Result<TauDoubling<T>> {
    check_unit_interval("lift parameter", lambda)?;
    if lambda >= T::one() {
        return Err(UsdError::InvalidArgument(
            "doubling is degenerate at lift 1".into(),
        ));
    }
    let (x, y, z) = (0usize, 1usize, 2usize);
    // |a⟩ ⊗ |b⟩ with a ∈ {x,y,z}, b ∈ {x,y}.
    let idx = |a: usize, b: usize| a * 2 + b;
    let planar = (T::one() - lambda * lambda).sqrt();
    let norm = (T::lit(2.0) / (T::one() + lambda * lambda)).sqrt();
    let half = T::lit(0.5);

    let mut xv = vec![creal(T::zero()); 6];
    xv[idx(z, x)] = creal(norm * lambda);
    xv[idx(x, y)] = creal(-norm * planar * half);
    xv[idx(y, x)] = creal(-norm * planar * half);

    let mut yv = vec![creal(T::zero()); 6];
    yv[idx(z, y)] = creal(norm * lambda);
    yv[idx(x, x)] = creal(-norm * planar * half);
    yv[idx(y, y)] = creal(norm * planar * half);

    let mut zv = vec![creal(T::zero()); 6];
    let r = T::one() / T::lit(2.0).sqrt();
    zv[idx(x, x)] = creal(r);
    zv[idx(y, y)] = creal(r);

    let xs = PureState::new(xv)?;
    let ys = PureState::new(yv)?;
    let zs = PureState::new(zv)?;
    let frame = [&xs, &ys, &zs];
    for (i, a) in frame.iter().enumerate() {
        for b in &frame[i + 1..] {
            if a.inner(b).modulus() > T::rank_tol() {
                return Err(UsdError::Postcondition(
                    "doubling frame is not orthogonal".into(),
                ));
            }
        }
    }

    let trines = trine_states::<T>();
    let lifted = lifted_trine(lambda)?;
    let tau = lifted
        .states()
        .iter()
        .zip(trines.states())
        .map(|(a, b)| a.tensor(b))
        .collect::<Result<Vec<_>>>()?;

    let lift = lift_recurrence_step(lambda)?;
    let side = (T::one() - lift * lift).sqrt();
    let mut residual = T::zero();
    for (tj, [cx, cy]) in tau.iter().zip(trine_xy::<T>()) {
        let expected = zs.amplitudes() * creal(lift)
            + (xs.amplitudes() * creal(cx) + ys.amplitudes() * creal(cy)) * creal(side);
        residual = residual.max((tj.amplitudes() - expected).norm());
    }
    if residual > T::rank_tol() {
        return Err(UsdError::Postcondition(format!(
            "doubled states deviate from their lifted-trine form by {}",
            residual.as_f64()
        )));
    }
    Ok(TauDoubling {
        tau: StateEnsemble::uniform(tau)?,
        lift,
        x: xs,
        y: ys,
        z: zs,
        expansion_residual: residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corelin::{gram, li_rank};

    const TOL: f64 = 1e-10;

    #[test]
    fn trine_basics() {
        let t = trine_states::<f64>();
        let g = gram(&t);
        for j in 0..3 {
            for k in 0..3 {
                let want = if j == k { 1.0 } else { -0.5 };
                assert!((g.entries()[(j, k)] - creal(want)).modulus() < 1e-15);
            }
        }
        assert_eq!(li_rank(t.states(), TOL).unwrap(), 2);
    }

    #[test]
    fn lifted_trine_special_points() {
        assert_eq!(
            li_rank(lifted_trine(0.0f64).unwrap().states(), TOL).unwrap(),
            2
        );
        assert_eq!(
            li_rank(lifted_trine(1.0f64).unwrap().states(), TOL).unwrap(),
            1
        );
        let orth = lifted_trine(1.0f64 / 3f64.sqrt()).unwrap();
        assert!(orth.max_overlap() < 1e-15);
        assert_eq!(
            li_rank(lifted_trine(0.3f64).unwrap().states(), TOL).unwrap(),
            3
        );
        assert!(lifted_trine(1.01f64).is_err());
        assert!(lifted_trine(-0.01f64).is_err());
        assert!(lifted_trine(f64::NAN).is_err());
    }

    #[test]
    fn lifted_overlap_formula() {
        for lam in [0.1f64, 0.4, 0.77] {
            let g = gram(&lifted_trine(lam).unwrap());
            let want = lam * lam - (1.0 - lam * lam) / 2.0;
            assert!((g.entries()[(0, 1)] - creal(want)).modulus() < 1e-15);
        }
    }

    #[test]
    fn symmetric_form_reproduces_states_with_phase_conventions() {
        let basis = u_basis::<f64>();
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((a.inner(b) - creal(want)).modulus() < 1e-15);
            }
        }
        for lam in [0.2f64, 0.5, 0.9] {
            let sym = lifted_trine_symmetric(lam).unwrap().states().unwrap();
            let direct = lifted_trine(lam).unwrap();
            for (a, b) in sym.states().iter().zip(direct.states()) {
                assert!((a.amplitudes() - b.amplitudes()).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn p_max_lifted_points() {
        assert_eq!(p_max_lifted(0.0f64).unwrap(), 0.0);
        assert_eq!(p_max_lifted(1.0f64).unwrap(), 0.0);
        assert!((p_max_lifted(1.0f64 / 3f64.sqrt()).unwrap() - 1.0).abs() < 1e-15);
        assert!((p_max_lifted(0.4f64).unwrap() - 0.48).abs() < 1e-15);
        assert!((p_max_lifted(0.9f64).unwrap() - 0.285).abs() < 1e-15);
        let p = LiftedTrineParams::new(0.4f64).unwrap();
        assert!((p.coefficients.iter().map(|c| c * c).sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lift_parameters() {
        assert_eq!(lift_closed_form::<f64>(1).unwrap(), 0.0);
        assert!((lift_closed_form::<f64>(2).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        // four recurrence steps from 0, by hand: 1/√2, 1/2, √(3/8), √(5/16)
        assert!((lift_closed_form::<f64>(5).unwrap() - (5.0f64 / 16.0).sqrt()).abs() < 1e-15);
        assert!((lift_by_recurrence::<f64>(3).unwrap() - 0.5).abs() < 1e-15);
        assert!((lift_recurrence_step(0.0f64).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        let fp = 1.0f64 / 3f64.sqrt();
        assert!((lift_recurrence_step(fp).unwrap() - fp).abs() < 1e-15);
        assert_eq!(lift_recurrence_step(1.0f64).unwrap(), 0.0);
        assert!(lift_closed_form::<f64>(0).is_err());
    }

    #[test]
    fn multitrine_values() {
        assert_eq!(p_max_multitrine::<f64>(2).unwrap(), 0.75);
        assert_eq!(p_max_multitrine::<f64>(3).unwrap(), 0.75);
        assert_eq!(p_max_multitrine::<f64>(4).unwrap(), 15.0 / 16.0);
        assert!(p_max_multitrine::<f64>(1).is_err());
        assert_eq!(pairwise_success::<f64>(4).unwrap(), 1.0 - 0.25 * 0.25);
        assert_eq!(pairwise_success::<f64>(6).unwrap(), 63.0 / 64.0);
        assert_eq!(MultiTrineParams::<f64>::new(1).unwrap().p_max, 0.0);
    }

    #[test]
    fn tau_doubling_cases() {
        let d = tau_doubling(0.0f64).unwrap();
        assert!((d.lift - 0.5f64.sqrt()).abs() < 1e-15);
        let sq = multitrine_tensor_powers::<f64>(2).unwrap();
        // At λ = 0 the doubled states are t_j ⊗ t_j embedded in C^3 ⊗ C^2.
        assert!(gram(&d.tau).max_abs_diff(&gram(&sq)) < 1e-14);
        assert!((tau_doubling(0.5f64.sqrt()).unwrap().lift - 0.5).abs() < 1e-15);
        assert!(tau_doubling(1.0f64).is_err());
    }

    #[test]
    fn representation_overlaps() {
        for (c, want) in [(1usize, -0.5f64), (2, 0.25), (3, -0.125)] {
            let g = gram(&multitrine_representation::<f64>(c).unwrap());
            assert!(
                (g.entries()[(0, 2)] - creal(want)).modulus() < 1e-15,
                "C={c}"
            );
        }
    }

    #[test]
    fn single_precision_instantiation() {
        let p = p_max_lifted(0.4f32).unwrap();
        assert!((p - 0.48).abs() < 1e-6);
        let g = crate::corelin::gram(&multitrine_representation::<f32>(2).unwrap());
        assert!((g.entries()[(0, 1)].re - 0.25).abs() < 1e-6);
        assert_eq!(li_rank(trine_states::<f32>().states(), 1e-5).unwrap(), 2);
    }

    #[test]
    fn curve_and_table() {
        let curve = lifted_curve::<f64>(201, true).unwrap();
        assert_eq!(curve.len(), 201);
        assert_eq!(curve[0], (0.0, 0.0));
        assert_eq!(curve[200], (1.0, 0.0));
        assert!((curve[180].0 - 0.9).abs() < 1e-15 && (curve[180].1 - 0.285).abs() < 1e-12);
        let plain = lifted_curve_grid::<f64>(201, false).unwrap();
        assert!((plain[115] - 0.575).abs() < 1e-15);
        assert!(lifted_curve::<f64>(1, true).is_err());

        let t = trine_table::<f64>(10).unwrap();
        assert_eq!(t[0].p_max, 0.0);
        assert_eq!(t[0].pairwise_p, 0.0);
        assert!((t[1].lift - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(t[2].p_max, 0.75);
        assert_eq!(t[9].p_max, 1.0 - 2f64.powi(-10));
        assert!(trine_table::<f64>(1).is_err());
    }
}
