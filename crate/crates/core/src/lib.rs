//! Exact higher local residue symbols.
//!
//! The crate models the algebra of continuous operators on iterated Laurent
//! series `k((t_1))...((t_n))` through a closed normal form of windowed shift
//! operators, equips it with the ideals `I_i^+`, `I_i^-` of compact and
//! discrete operators, and evaluates Tate's finite-potent trace exactly. On top
//! of that it computes the residue functional on Hochschild chains in three
//! independent ways:
//!
//! * the closed formula [`homology::phi_hh_closed`],
//! * the zig-zag through the `N^p` bicomplex with its contracting homotopy,
//!   [`homology::phi_hh_zigzag`],
//! * the iterated connecting map [`homology::phi_c`] built from the Toeplitz
//!   lift,
//!
//! and the residue of differential forms is obtained by composing with the
//! antisymmetrization map (see [`residue::residue_form`]).
//!
//! All arithmetic is exact over `Q` or a simple extension `Q[x]/(p)`.

pub mod error;
pub mod homology;
pub mod laurent;
pub mod operator;
pub mod parallel;
pub mod parse;
pub mod residue;
pub mod scalar;
pub mod upoly;
pub mod verify;

pub use error::{Error, Result};
pub use homology::{CubicalStructure, GoodIdempotents, HochschildChain, LabeledChain, LieChain, Sign, Slot};
pub use laurent::{DifferentialForm, LaurentPoly, MultiIndex, TruncatedSeries};
pub use operator::{Atom, AxisWindow, WindowTerm, WindowedOperator};
pub use scalar::{ExtensionField, Field, Rational, Scalar};
pub use upoly::UPoly;
