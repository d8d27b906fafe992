//! Exact and certified-precision arithmetic for abelian extensions of
//! imaginary quadratic fields.
//!
//! The crate is organized around the objects it computes with:
//!
//! * [`qfield`] — an imaginary quadratic field `k`, its ideals in Hermite
//!   normal form, and the ideal class group (by reduced binary quadratic
//!   forms).
//! * [`rayclass`] — ray class groups `Cl_m(k)`, the Artin map, ray class
//!   characters with exact root-of-unity values, conductors.
//! * [`ball`] — arbitrary-precision real/complex balls: every analytic value
//!   carries a certified error radius.
//! * [`analytic`] — Klein forms, Siegel–Ramachandra invariants and Robert
//!   functions; Hecke L-functions at `s = 0` through an independent
//!   incomplete-gamma lattice route; logarithmic embeddings and regulators.
//! * [`algebraic`] — recognition of algebraic numbers from certified
//!   embeddings, exact arithmetic in recognized number fields, class groups
//!   by Minkowski enumeration, Kummer roots.
//! * [`units`] — Stark/elliptic unit constructors and the unit groups they
//!   generate, with the norm and congruence relations they satisfy.
//! * [`eulersys`] — the Euler-system layer: admissible primes, the auxiliary
//!   extensions `K(ℓ)`, Kolyvagin derivatives, residual ideal maps, and the
//!   constructive Chebotarev search.
//! * [`index`] — group-ring idempotents, Sinnott's generalized lattice index
//!   and the index-formula verifications.
//!
//! All exact arithmetic is over `num-bigint`/`num-rational`; analytic values
//! are MPFR floats wrapped in sound balls. Nothing in the crate trusts an
//! unverified rounding: analytic claims are certified by radii, algebraic
//! claims by exact arithmetic.

pub mod exact;
pub mod ball;
pub mod qfield;
pub mod rayclass;
pub mod analytic;
pub mod algebraic;
pub mod units;
pub mod eulersys;
pub mod index;

mod error;
pub use error::Error;

/// Working-precision policy: start, growth, and hard cap, in bits.
///
/// Every certified computation starts at `START_BITS` and doubles on a failed
/// certification until `MAX_BITS`, at which point a structured error is
/// returned instead of an uncertified value.
pub mod precision {
    pub const START_BITS: u32 = 128;
    pub const MAX_BITS: u32 = 4096;

    /// Iterator over the precision ladder.
    pub fn ladder() -> impl Iterator<Item = u32> {
        std::iter::successors(Some(START_BITS), |p| {
            if *p >= MAX_BITS {
                None
            } else {
                Some((*p * 2).min(MAX_BITS))
            }
        })
    }

    /// Ladder starting at the given precision instead of `START_BITS`.
    pub fn ladder_from(start: u32) -> impl Iterator<Item = u32> {
        std::iter::successors(Some(start.clamp(START_BITS, MAX_BITS)), |p| {
            if *p >= MAX_BITS {
                None
            } else {
                Some((*p * 2).min(MAX_BITS))
            }
        })
    }
}
