//! Finite groups and exact W-length computations in them.

pub mod cache;
mod finite;
mod wlength;

pub use finite::{
    cyclic_table, dihedral_table, format_table, parse_table, write_table, ElementId, FiniteGroup,
};
pub use wlength::{
    bfs_distances, bi_invariance_check, quotient_lower_bound, verbal_subgroup, wlength_table,
    DistanceTable,
};
