pub mod alcoves;
pub mod characters;
pub mod error;
pub mod hecke;
pub mod laurent;
pub mod lincomb;
pub mod par;
pub mod parabolic;
pub mod periodic;
pub mod rootdata;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
