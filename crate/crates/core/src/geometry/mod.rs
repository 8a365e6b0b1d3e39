//! Points, frames and second fundamental forms of the submanifolds built
//! from a symmetric Clifford system: the chains `M_i`, `N_i`, the family
//! `M₊ᵗ`, the focal submanifolds and the level sets of the chain functions.

pub mod checks;
pub mod frame;
pub mod manifold;
pub mod sff;

pub use checks::{
    expand_spectrum, expected_level_spectrum, expected_m_plus_t_spectrum, isoparametric_identity_check,
    level_set_spectrum, mean_curvature_in, scalar_curvature_analytic, second_fundamental_form_in, sigma_at,
    sigma_extrinsic, spectrum_distance, verify_q_identities, zero_principal_directions, IsoparametricReport,
    QIdentityReport, SigmaReport,
};
pub use frame::{tangent_normal_frame, Frame};
pub use manifold::{
    points_from_json, points_to_json, sample_point, sample_points, ManifoldKind, ManifoldSpec, Sign, SurfacePoint,
};
pub use sff::{
    analytic_shape_operators, gauss_scalar_curvature, numeric_second_fundamental_form, FdOptions,
    SecondFundamentalForm,
};
