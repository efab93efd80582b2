#![no_std]
extern crate alloc;

pub mod cas;
pub mod engine;
pub mod geom;
pub mod loci;
pub mod measure;
pub mod modelang;
