//! Labeled operator algebra, channel constructors, supermap class
//! predicates, capacity/simulation-cost SDPs, and exact-arithmetic
//! certificate verification for classical communication assisted by
//! signaling-non-generating supermaps with different causal structures.

pub mod channels;
pub mod classes;
pub mod error;
pub mod exact;
pub mod io;
pub mod layout;
pub mod linalg;
pub mod op;
pub mod sampling;
pub mod scalar;
pub mod sdp;

pub use error::OpError;
pub use layout::SystemLayout;
pub use op::{LabeledOperator, TraceReplaceTerm};
