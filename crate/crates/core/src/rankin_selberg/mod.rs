//! The local Rankin-Selberg integral: coefficient tables, J*, Q, I*, the
//! identities relating them, zeros of J*, and bounds on the critical strip.

mod bounds;
mod local;
mod numeric;
mod roots;
mod tables;

pub use bounds::{bounds_report, critical_line_grid, lindelof_budget, BoundRow, BoundsReport, LINDELOF_SLACK};
pub use local::{
    fe_discrepancy, identity_checks, istar, istar_routes, j_function, jstar, lambda_sm, local_report,
    normalize_unit, q_factor, verify_fe, Check, IStarRoutes, LocalReport,
};
pub use numeric::{FloatLaurent, NumericLocal};
pub use roots::{durand_kerner, rh_roots, RootInfo, RootScan};
pub use tables::{j_at_one, j_series, r_closed, r_negative, sumtm_target, t_closed, t_pipeline, weighted_sum, TRTable};
