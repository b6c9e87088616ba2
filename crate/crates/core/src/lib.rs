//! Exact combinatorics of semi-stable toric degenerations: lattice polyhedra,
//! partitions and their dual complexes, lifting functions and lifted polytopes,
//! and the degeneration data read off from them.

pub mod exactmath;

pub use exactmath::{AffineFunction, LatticeVector, Point, Rational};
pub mod polytope;

pub use polytope::{
    lattice_equivalent, normal_fan, Convexity, Fan, Halfspace, LatticeMap, LatticePolytope, SupportFunction,
};
pub mod partition;

pub use partition::{Classification, DualComplex, Partition, PartitionError, WeightVector};
pub mod lifting;

pub use lifting::{
    check_cocycle, extend_support_function, integrate_cocycle, iterated_lift, lift_partition, lift_polytope,
    lifting_function, minimal_integral_lifting, wall_functions, CompactCap, IntegralLifting, IteratedLift,
    LiftedPolytope, LiftingError, PiecewiseAffine, TreeOrder, WallCochain,
};
pub mod degeneration;

pub use degeneration::{
    build_report, build_sequences, family_equations, local_charts, Coefficient, CoefficientChoice, Component,
    DegenerationError, DegenerationReport, FamilyEquations, LatticeSequence, LocalChart,
};
