//! Exact arithmetic for endomorphisms of projective space over the rationals:
//! resultants, reduction at primes, locally minimal models, and global
//! minimal models.
//!
//! A degree-`d` endomorphism of `P^N` is given by a homogeneous lift
//! `Φ = (Φ_0, …, Φ_N)`: `N+1` forms of common degree `d` in `N+1` variables
//! with nonvanishing resultant. Two lifts present the same dynamical system
//! when one is a scaled conjugate `c · A ∘ Φ ∘ A^{-1}` of the other; such a
//! re-presentation is called a *model*. The library computes, entirely in
//! exact rational arithmetic:
//!
//! - multivariate resultants (Macaulay's quotient construction, with the
//!   Sylvester determinant as an independent route for `N = 1`),
//! - reduction of a lift modulo a prime and the good/bad reduction verdict,
//! - locally minimal models at a prime via a bounded search over lattice
//!   classes,
//! - a global model that achieves the local minima at every prime
//!   simultaneously, obtained by gluing local lattice data and factoring the
//!   resulting adelic matrix,
//! - an everywhere-good-reduction model when one exists within the search
//!   radius, and an honest report when none is found.
//!
//! No floating point is used anywhere; every equality the code relies on is
//! checked exactly, and searches that are truncated by a radius say so
//! (`radius_exhausted`) instead of over-claiming minimality.
//!
//! # Modules
//!
//! - [`arith`] — primes, p-adic valuations, factorization, content.
//! - [`matrix`] — dense exact matrices over `Z` and `Q` (Bareiss
//!   determinants, adjugate inverses).
//! - [`forms`] — forms, homogeneous lifts, models, conjugation, reduction
//!   mod p, and the map-file format.
//! - [`resultant`] — Sylvester and Macaulay resultants, morphism test,
//!   conjugation/scaling exponents.
//! - [`lattice`] — Hermite/Smith normal forms, lattices in `Q^n`, local
//!   data, gluing, the adelic action, and adelic factorization.
//! - [`reduction`] — p-integrality, neighbor moves, the bounded local
//!   minimization search, bad primes.
//! - [`pipeline`] — global minimal model, everywhere-good-reduction search,
//!   reduction reports.
//! - [`cli`] — the `projmin` command-line interface (one thin binary).
//!
//! # Quick start
//!
//! ```
//! use projmin::forms::parse_map;
//! use projmin::pipeline::global_minimal_model;
//!
//! let lift = parse_map(
//!     r#"{"N": 1, "d": 2, "coords": ["x", "y"], "forms": ["9*x^2", "4*y^2"]}"#,
//! )
//! .unwrap();
//! let (model, report) = global_minimal_model(&lift, 3).unwrap();
//! assert!(report.rows.iter().all(|row| row.good_reduction));
//! let res = projmin::resultant::macaulay_resultant(model.lift()).unwrap();
//! assert!(res.numer().magnitude() == &1u32.into());
//! ```
//!
//! Runnable walkthroughs live in `examples/`; `cargo run --example` each of
//! `resultants`, `conjugation_law`, `lattice_toolkit`, `glue_and_factorize`,
//! `local_minimization`, `global_minimal_model`.

pub mod arith;
pub mod cli;
pub mod error;
pub mod forms;
pub mod lattice;
pub mod matrix;
pub mod pipeline;
pub mod reduction;
pub mod resultant;

mod parse;

pub use arith::{ord_p, Prime, Rational, Valuation};
pub use error::Error;
pub use forms::{Form, HomogeneousLift, Model};
pub use lattice::{AdeleMatrix, Lattice};
pub use matrix::{IntMatrix, RatMatrix};
pub use pipeline::{EgrResult, ReductionReport, ReductionRow};
pub use reduction::LocalModelSearchResult;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
