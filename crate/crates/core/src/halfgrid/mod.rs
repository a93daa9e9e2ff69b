//! Point configurations: the standard grid construction, Y-sets, the F4
//! model, incidence extraction, grid and half-grid detection, and
//! projective equivalence.

mod config;
mod equiv;
mod standard;
mod structure;

pub use config::{natural_cmp, Config, LabeledLine, LabeledPoint};
pub use equiv::{find_projective_equivalence, EquivCert, Equivalence};
pub use standard::{
    f4_root_model, grid_column_line, grid_point, grid_row_line, standard_field, standard_grid, standard_halfgrid,
    transversals, u_pow, y_lines, y_sets, HalfGridVariant,
};
pub use structure::{
    detect_structure, incidence_lines, three_line_grid_check, GridCert, GridRefutation, HalfGridCert, LineIncidence,
    Structure,
};

#[cfg(test)]
mod tests;
