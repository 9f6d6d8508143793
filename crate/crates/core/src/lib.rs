//! Exact duality computations.
//!
//! The library decides when a finitely presented element of `T^N` is a
//! continuous character of `Z^(N)` (pointwise-convergence topology) and, when
//! it is, rewrites it as a finite sum of elementary tensors `x ⊗ t` with
//! `x ∈ Z^N`, `t ∈ T`. Around that core sit a finite abelian group laboratory
//! (tensor products by explicit presentation, bicharacters, polars) and the
//! `C_p(X, Z)` / `A_p(X)` machinery for two concrete zero-dimensional spaces.
//!
//! Everything is exact: arbitrary-precision integers and rationals, and
//! irrational torus values carried as formal symbols that are assumed to be
//! linearly independent over `Q` together with `1`.

pub mod cli;
pub mod cpx;
pub mod dualgrp;
pub mod exact;
pub mod fgab;
pub mod gen;
pub mod par;
pub mod seq;

pub use exact::{IntMatrix, IrrationalSymbol, Rational, TorusValue};
