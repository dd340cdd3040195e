mod currents;
mod lops;
mod rmatrix;
mod spaces;
mod theta;

use super::{CheckRecord, Ctx, Suite};

pub(crate) fn run(ctx: &Ctx, suite: Suite) -> Vec<CheckRecord> {
    match suite {
        Suite::Theta => theta::run(ctx),
        Suite::Spaces => spaces::run(ctx),
        Suite::Rmatrix => rmatrix::structure(ctx),
        Suite::Dybe => rmatrix::dybe(ctx),
        Suite::Classical => rmatrix::classical(ctx),
        Suite::Gauge => rmatrix::gauge(ctx),
        Suite::Rll => lops::rll(ctx),
        Suite::Det => lops::det(ctx),
        Suite::Lops => lops::lpm(ctx),
        Suite::HalfCurrents => currents::half_currents(ctx),
        Suite::Currents => currents::currents(ctx),
    }
}
