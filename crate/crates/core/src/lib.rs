//! Volumes of generalized tubes around embedded submanifolds.

pub mod coxeter;
pub mod diffgeo;
pub mod domains;
pub mod par;
pub mod poly;
pub mod quadrature;
pub mod scenario;
pub mod tube;
pub mod verify;
