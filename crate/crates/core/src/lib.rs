pub mod error;
pub mod exactnum;
pub mod magyari;
pub mod perturb;
pub mod verify;
pub mod zeroorder;

pub use error::{QesError, Result};
