//! Instance sizes shared by the criterion benches in `benches/`.

/// (p, q) surfaces for boundary tracing.
pub const TRACE_SIZES: [(usize, usize); 3] = [(10, 10), (64, 96), (256, 384)];

/// (p, k) systems for building the coarse matrix.
pub const MATRIX_SYSTEMS: [(usize, usize); 3] = [(3, 3), (6, 5), (4, 7)];

/// (p, k) systems pruned down to a quarter of their curves.
pub const PRUNE_SYSTEMS: [(usize, usize); 2] = [(3, 3), (6, 5)];

/// Decimal exponents e of the planner genera g = 10^e.
pub const PLANNER_EXPONENTS: [u32; 3] = [6, 100, 1000];
