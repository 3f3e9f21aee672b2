pub mod error;
pub mod geometry;
pub mod linalg;
pub mod p_evolute;
pub mod harmonics;
pub mod smooth;
pub mod a_evolute;
pub mod involute;
pub mod dynamics;
