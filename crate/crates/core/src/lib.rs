//! Train track maps on graphs, the towers they generate, and the invariant
//! measures (Kolmogorov functions) carried by those towers.

pub mod dialects;
pub mod graph;
pub mod interval;
pub mod map;
pub mod matrix;
pub mod measure;
pub mod poly;
pub mod scc;
pub mod spectra;
pub mod substitution;
pub mod tower;
