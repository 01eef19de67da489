//! Minimal reverse-mode autodiff: a recorded tape over dense f64 matrices,
//! a named parameter store, layer builders, Adam, and a finite-difference
//! gradient checker.

pub mod gradcheck;
pub mod layers;
pub mod optim;
pub mod params;
pub mod tape;

pub use gradcheck::{finite_diff_check, FdReport};
pub use layers::{gcn_layer, gcn_norm, mean_agg, sage_layer, Linear, Mlp};
pub use optim::{adam_step, AdamParams};
pub use params::{Grads, Init, Param, ParamId, ParamStore};
pub use tape::{Gradients, SparseMatrix, Tape, Tensor};
