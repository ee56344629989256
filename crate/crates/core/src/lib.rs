//! Decides whether a knot diagram is trivial by racing a prover for the
//! collapse of its quandle against a search for a nontrivial finite model.

pub mod axioms;
pub mod budget;
pub mod invariants;
pub mod knotio;
pub mod modelfinder;
pub mod presentation;
pub mod prover;
pub mod rmengine;
pub mod runner;

pub use axioms::{Axiom, AxiomSet};
pub use budget::Budget;
pub use knotio::{parse_gauss, parse_input, parse_pd, KnotDiagram, KnotInput, ParseError};
pub use presentation::{presentation_of, Presentation, Relation};
