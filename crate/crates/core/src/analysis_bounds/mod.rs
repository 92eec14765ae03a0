//! Analytic bounds on smooth solutions and blowup-time certificates.
//!
//! Every constant is computed from initial data on the grid. Suprema over the
//! line are replaced by grid suprema, so bounds are relative to the window.

mod certificate;
mod density;
mod envelope;
mod thresholds;
mod verify;

pub use certificate::{
    certify, reconcile, BlowupCertificate, CertificateMode, Verdict, BRACKET_TOLERANCE,
};
pub use density::{
    density_upper_bound, full_density_constant, isentropic_density_constant, max_tau_discrepancy,
    DensityBoundParams, DensityMode, DensityMonitor, DensityTrack,
};
pub use envelope::{
    a2_floor, a2_lower_envelope, a2_prefactor, blowup_time_upper, invert_integral,
    isentropic_envelope, margin_factor, A2Envelope,
};
pub use thresholds::{
    global_threshold_n, linfty_bounds, local_domain, sharp_threshold, threshold_from,
    DomainOfDetermination, LinftyBounds,
};
pub use verify::{linear_fit, tail_linear_fit, verify_run, BoundCheck, MonitorReport, RunBounds};
