//! Small covers over simple 3-polytopes: cell structures and presentations
//! of their fundamental groups.
//!
//! The pipeline runs [`polytope`] → [`charmap`] → [`morse`] → [`cover`] →
//! [`pi1`]: a polytope and a characteristic map determine the cover, a
//! vertex order determines the Morse data, and three presentations of π₁
//! (CW, Wu–Yu and the minimal one) are compared through their abelianization
//! and hom counts to small finite groups.

pub mod charmap;
pub mod cover;
pub mod error;
pub mod morse;
pub mod parallel;
pub mod pi1;
pub mod polytope;

pub use charmap::{CharMap, Gf2Vec};
pub use cover::{cw_presentation, heegaard_report, wu_yu_presentation, GenusReport, SpanningTree};
pub use error::{Error, Result};
pub use morse::{morse_data, MorseData, VertexOrder};
pub use pi1::{abelianization, count_homs, minimal_presentation, AbelianInvariants, FiniteGroupTable, Presentation};
pub use polytope::{Polytope, Shape};
