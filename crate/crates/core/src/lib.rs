// SPDX-License-Identifier: Apache-2.0

//! Exact computation in the free differential graded PROP on the generators
//! `xi(m,n)`, a free resolution of the bialgebra PROP.
//!
//! Monomials are rigid port graphs ([`term_graph`]), elements are rational
//! combinations of them ([`prop_algebra`]). On top of that sit the gradings,
//! the differential, special elements, exact linear algebra, the
//! perturbation solver and a small term language with a command line front
//! end.

pub mod cli;
pub mod differential;
pub mod error;
pub mod gradings;
pub mod linalg;
pub mod perturbation;
pub mod prop_algebra;
pub mod serial;
pub mod special_elements;
pub mod syntax;
pub mod term_graph;

pub use error::{Error, Result};
pub use prop_algebra::{Coeff, Element};
pub use term_graph::{Generator, Monomial};
