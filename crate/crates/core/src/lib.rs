//! Unambiguous discrimination of pure states given several copies.
//!
//! The numeric core is generic over [`Real`] (`f32` or `f64`); the
//! `*64` aliases below fix it to double precision, which is what the
//! simulator and the command-line tool use.

pub mod bounds;
pub mod corelin;
pub mod error;
pub mod scalar;
pub mod sim;
pub mod symusd;
pub mod trine;

pub use error::{LemmaPremise, Result, UsdError};
pub use scalar::{Complex, Real};

pub type PureState64 = corelin::PureState<f64>;
pub type StateEnsemble64 = corelin::StateEnsemble<f64>;
pub type GramMatrix64 = corelin::GramMatrix<f64>;

pub type PureState32 = corelin::PureState<f32>;
pub type StateEnsemble32 = corelin::StateEnsemble<f32>;
