//! Exact decision procedure for free circle actions on `(n-1)`-connected
//! `(2n+1)`-manifolds with torsion-free homology, `n ≡ 5, 7 (mod 8)`, up to
//! almost diffeomorphism, together with every numeric ingredient it uses:
//! Bernoulli numbers, image-of-J orders, Â-genus coefficients, Kervaire
//! divisors and Gysin-sequence cohomology of circle bundles.

pub mod bernoulli;
pub mod classifier;
pub mod cli;
pub mod exactnum;
pub mod genus;
pub mod gradedtop;
pub mod par;
pub mod selftest;

pub use par::ExecMode;
