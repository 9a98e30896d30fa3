use crate::error::Result;
use crate::gb::GBState;

/// `‖z - z_ref‖_{L²} + ‖z_t - z_t,ref‖_{H^{-2}}` and its two parts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorMetric {
    pub total: f64,
    pub z_l2: f64,
    pub zt_hm2: f64,
}

pub fn error_metric(numerical: &GBState, reference: &GBState) -> Result<ErrorMetric> {
    numerical.z().same_grid(reference.z())?;
    let z_l2 = (numerical.z() - reference.z()).sobolev_norm(0.0);
    let zt_hm2 = (numerical.zt() - reference.zt()).sobolev_norm(-2.0);
    Ok(ErrorMetric { total: z_l2 + zt_hm2, z_l2, zt_hm2 })
}
