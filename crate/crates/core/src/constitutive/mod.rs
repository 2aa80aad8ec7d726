//! Constitutive models evaluated at every material point, both in the
//! reference aggregate and inside the network's material layer.
//!
//! Strains use engineering notation `(εxx, εyy, γxy)` under plane stress;
//! stresses are `(σxx, σyy, σxy)` in MPa. Cohesive jumps are `(δn, δs)` in mm
//! and tractions `(tn, ts)` in MPa.

mod czm;
mod elastic;
mod j2;
mod props;
mod tangent;

pub use czm::{
    critical_energy, czm_update, mixed_mode_thresholds, mode_mixity, CohesiveBranch,
    CohesiveState,
};
pub(crate) use czm::czm_update_unchecked;
pub use elastic::{elastic_update, plane_stress_stiffness};
pub use j2::{j2_update, von_mises, yield_function, BulkState, J2_MAX_ITERATIONS, J2_TOLERANCE};
pub(crate) use j2::{j2_is_plastic, j2_update_unchecked};
pub use props::{BulkProps, CzmProps, MaterialProps};
pub use tangent::{central_jacobian, fd_step_for, fd_step_scaled, fd_tangent, DEFAULT_FD_STEP};
