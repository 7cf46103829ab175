//! Exact-arithmetic tools: ℚ(√10) scalars, exact PSD certification, and
//! verification of the shipped feasibility certificates.
pub mod quad;
pub mod ldl;
pub mod certs;
