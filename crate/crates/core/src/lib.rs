//! Heegaard diagrams of graph manifolds given by plumbing graphs.
//!
//! The pipeline: parse a [`graph::PlumbingGraph`], plan drills with
//! [`planner::plan_drills`], build a [`diagram::SymbolicDiagram`], compile it
//! to a [`map::CombinatorialMap`] and check genus, cut systems and homology.

pub mod diagram;
pub mod graph;
pub mod linalg;
pub mod map;
pub mod planner;
pub mod verify;
