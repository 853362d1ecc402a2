//! Exact computations in the height-bounded Brauer diagram categories.
//!
//! Pair partitions of boundary points carry a *left-height*: the smallest
//! picture height over all planar drawings, where the height of a drawing is
//! the largest number of lines separating one of its crossings from the left
//! edge. Height `-1` (no crossings at all) recovers the Temperley--Lieb
//! category; heights `>= n-2` recover the full Brauer category. Everything in
//! between is a proper diagram subcategory, and the End-sets are towers of
//! algebras interpolating between the two.
//!
//! This crate computes with those objects exactly:
//!
//! * [`diagram`] -- set/pair partitions, stack composition with loop
//!   bookkeeping, tensor, flip, polar decomposition;
//! * [`picture`] -- slice-word pictures and their face arrangements, giving
//!   the height of a concrete drawing;
//! * [`height`] -- partition heights by bounded search over pictures,
//!   stratified enumeration, closure checking;
//! * [`exact`] -- the scalar ring `Z[d]` (`d` the loop parameter), fraction
//!   free determinants, rational/quadratic root extraction;
//! * [`symgrp`] -- Specht modules from Young symmetrizers;
//! * [`reptheory`] -- the interpolating algebras, their standard modules and
//!   Gram forms;
//! * [`bratteli`] -- branching graphs and walk-count dimension formulas.
//!
//! The crate is `no_std` (it only needs `alloc`); IO, caching and the command
//! line tool live in the companion `hbrauer` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bratteli;
pub mod diagram;
pub mod exact;
pub mod height;
pub mod picture;
pub mod reptheory;
pub mod rng;
pub mod symgrp;

pub use diagram::{ScaledDiagram, SetPartition};
pub use exact::{DeltaPoly, PolyMatrix};
pub use height::{HeightCache, HeightTable, SearchBudget};
pub use picture::SliceWord;
