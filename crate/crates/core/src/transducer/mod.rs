//! Finite-state transducers presenting continuous maps between shift
//! spaces, orbit relations and the transfer maps they induce.

mod equiv;
mod machine;
mod transfer;

pub use equiv::{
    default_delay_bound, equivalent_maps, orbit_sides, shifted, verify_orbit_relation,
    verify_orbit_relation_with, MapEquivalence, OrbitRelation, VerifyOptions,
};
pub use machine::{Transducer, Transition};
pub use transfer::{
    is_eventual_conjugacy, is_strong_coe, psi_at_point, psi_parts, transfer_psi, OrbitData,
};
