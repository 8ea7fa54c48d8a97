//! Culler-Shalen seminorms, p-rep polynomials and representation checks for
//! Dehn fillings `W(p/q, .)` of the Whitehead link exterior.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cohomology;
pub mod poly;
pub mod reps;
pub mod respq;
pub mod roots;
pub mod seminorm;
pub mod slopes;
