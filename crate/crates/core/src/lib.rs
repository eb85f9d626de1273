//! Exact combinatorics of the projective Fraissé category of pointed finite
//! linear graphs, and the piecewise-linear interval maps it approximates.

pub mod amalgam;
pub mod fraisse;
pub mod lingraph;
pub mod plmaps;
pub mod ramsey;
pub mod rational;

pub use lingraph::{compose, enumerate_epi, validate, Morphism, MorphismError, PointedLinearGraph};
pub use rational::Rational;
