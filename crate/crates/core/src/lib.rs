//! Positive definite ternary quadratic forms and the refined Humbert invariant
//! of genus 2 curves.
//!
//! The crate reduces and compares forms, enumerates representations, computes
//! automorphism groups, evaluates the genus data that decides when a form is a
//! refined Humbert invariant, and derives the automorphism group of the
//! corresponding curve together with the intersections of Humbert surfaces.

pub mod automorphs;
pub mod classify;
pub mod error;
pub mod forms;
pub mod genus;
pub mod intersections;
pub mod reduction;
pub mod representations;
pub mod subcovers;

pub use error::{Error, Result};
pub use forms::{q_ic, q_set, BinaryForm, Form, FormFamily, InvariantBundle, TernaryForm, UnimodularMap, Vector2, Vector3};
