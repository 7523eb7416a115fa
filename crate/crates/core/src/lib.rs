//! Power partial isometries: index computations, unitary canonical forms,
//! numerical ranges with circularity certificates, and S_n-matrices.

pub mod canon;
pub mod error;
pub mod io;
pub mod isometry;
pub mod matkit;
pub mod numrange;
pub mod repro;
pub mod snmat;

pub use error::{Error, Result};
pub use matkit::{Matrix, Tolerance, C64};
