//! Nodes stored as `x_k = b_l + u_k`: a base point per bin plus a small
//! offset, so that `t - x_k` can be formed without cancellation against the
//! full node coordinate.

mod eval;
mod grid;
mod layout;
mod serialize;
mod verify;

pub use eval::{eval_binned, eval_binned_ext, eval_binned_located};
pub use grid::{binned_diff, gen_binned_nodes, locate_bin, BinnedGrid};
pub use layout::{layout_dyadic, layout_three, BinLayout, MAX_DYADIC_LEVELS, MIN_DYADIC_LEVELS};
pub use serialize::{
    parse_hex_float, read_binned_grid, to_hex_float, write_binned_grid, FORMAT_VERSION,
};
pub use verify::{verify_layout, LayoutCheck, LayoutReport};
