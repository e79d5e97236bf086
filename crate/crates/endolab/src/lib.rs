//! Workbench for exhaustive structural and endomorphism checks on small
//! finite p-groups.
//!
//! The crate has two group backends sharing one structural-query contract:
//! a coordinate backend realizing the classified groups `G(p,r,t,T)` on
//! triples of residues, and a coset-table backend realizing arbitrary
//! finite presentations via Todd-Coxeter enumeration. On top of those sit
//! endomorphism enumeration (matrix criterion and brute force), the
//! commutation ("E-group") falsification search, isomorphism searching,
//! and batch campaign drivers with JSON reports.

pub mod coordgroup;
pub mod fpgroup;
pub mod group;
pub mod modmat;
