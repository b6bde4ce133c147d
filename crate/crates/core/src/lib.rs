//! Exact computation in graph products of cyclic groups.
//!
//! A graph product is built from a finite simplicial graph whose vertices
//! carry cyclic groups: take the free product of the vertex groups and add
//! commutation relations between adjacent vertex groups. Right-angled
//! Coxeter groups (all orders 2) and right-angled Artin groups (all orders
//! infinite) are the two extreme cases.
//!
//! The crate provides:
//!
//! * [`graph`] — defining graphs, links/stars/components, separating
//!   intersections of links (SILs), center split, and the blow-up of
//!   abelian vertex groups into cyclic ones;
//! * [`words`] — canonical normal forms for group elements, arithmetic,
//!   and an independent shuffle-based equality oracle;
//! * [`aut`] — automorphisms given by generator images: graph symmetries,
//!   vertex isomorphisms, partial conjugations, transvections, and a
//!   bounded inner-ness search;
//! * [`autpc`] — the derived commutation graph of the partial
//!   conjugations, the evaluation homomorphism onto the subgroup they
//!   generate, and desk-scale verification of its structure;
//! * [`building`] — finite combinatorial balls of the right-angled
//!   building associated to a graph product: chambers, galleries,
//!   Coxeter-valued distance, the coset poset with its cube structure,
//!   and the finite symmetry action;
//! * [`enumerate`] — exhaustive enumeration of small graphs up to
//!   isomorphism, the driver for the verification sweeps.

pub mod aut;
pub mod autpc;
pub mod building;
pub mod enumerate;
pub mod graph;
pub mod report;
pub mod words;

pub use aut::{Automorphism, InnerVerdict, PcDescriptor};
pub use autpc::{OutPcVerdict, TildeGraph};
pub use graph::{CyclicOrder, DefiningGraph, SilWitness, VertexId};
pub use report::Report;
pub use words::{GroupWord, Syllable};
