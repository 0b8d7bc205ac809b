//! First-return map on the positive x-axis and the displacement scan built on it.

use serde::Serialize;

use crate::system::PlanarSystem;

use super::integrator::{dp_step, Field, IntegratorConfig, Stepper};
use super::{CellIssue, CycleInfo, CycleSource, DynamicsError, LimitCycleReport, Stability};

/// Crossing abscissa and the time it took.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Return {
    pub x: f64,
    pub period: f64,
}

/// Event tolerance for locating the section crossing.
pub const EVENT_TOL: f64 = 1e-12;
/// Displacement below which a bisection stops.
pub const ROOT_TOL: f64 = 1e-9;
/// Displacement below which every scanned cell must lie for the center flag.
pub const CENTER_TOL: f64 = 1e-8;

fn check_origin(sys: &PlanarSystem) -> Result<(), DynamicsError> {
    let o = [num_traits::Zero::zero(), num_traits::Zero::zero()];
    if num_traits::Zero::is_zero(&sys.p.evaluate(&o)) && num_traits::Zero::is_zero(&sys.q.evaluate(&o)) {
        Ok(())
    } else {
        Err(DynamicsError::InvalidInput("the origin is not an equilibrium; translate the system first".into()))
    }
}

/// First return to the positive x-axis from `(r0, 0)` with [`IntegratorConfig::return_map`].
pub fn poincare_return(sys: &PlanarSystem, r0: f64) -> Result<f64, DynamicsError> {
    check_origin(sys)?;
    Ok(poincare_return_with(&Field::new(sys), r0, &IntegratorConfig::return_map())?.x)
}

/// First return with the same crossing orientation as the initial velocity.
pub fn poincare_return_with(field: &Field, r0: f64, cfg: &IntegratorConfig) -> Result<Return, DynamicsError> {
    if r0.is_nan() || r0 <= 0.0 || !r0.is_finite() {
        return Err(DynamicsError::InvalidInput(format!("start radius must be positive, got {r0}")));
    }
    let v = field.eval([r0, 0.0])[1];
    if v == 0.0 {
        return Err(DynamicsError::NotTransversal(r0));
    }
    let orient = v.signum();
    let mut st = Stepper::new(field, [r0, 0.0], *cfg);
    loop {
        let (t0, s0) = (st.t, st.s);
        let h = st.step(cfg.t_max)?;
        if st.radius() < cfg.r_min {
            return Err(DynamicsError::FellIntoEquilibrium { t: st.t });
        }
        if orient * s0[1] < 0.0 && orient * st.s[1] >= 0.0 && st.s[0] > 0.0 {
            let (tau, s) = refine_crossing(field, s0, h, orient);
            if s[0] > cfg.r_min {
                return Ok(Return { x: s[0], period: t0 + tau });
            }
        }
        if st.t >= cfg.t_max {
            return Err(DynamicsError::NoReturn { t_max: cfg.t_max });
        }
    }
}

/// Bisection in time inside one step for the zero of `y`.
fn refine_crossing(field: &Field, s0: [f64; 2], h: f64, orient: f64) -> (f64, [f64; 2]) {
    let (mut lo, mut hi) = (0.0, h);
    let mut best = (h, dp_step(field, s0, h).0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let s = dp_step(field, s0, mid).0;
        best = (mid, s);
        if s[1].abs() < EVENT_TOL || hi - lo < 1e-16 {
            break;
        }
        if orient * s[1] < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    best
}

/// Signed displacement `pi(r) - r` and the return time. Falls back to the backward-time
/// map where the forward orbit escapes (unstable cycles): its displacement has the
/// opposite sign and the same zeros, so it is negated.
pub fn displacement(field: &Field, r: f64, cfg: &IntegratorConfig) -> Result<(f64, f64), DynamicsError> {
    match poincare_return_with(field, r, cfg) {
        Ok(ret) => Ok((ret.x - r, ret.period)),
        Err(fwd) => match poincare_return_with(&field.reversed(), r, cfg) {
            Ok(ret) => Ok((r - ret.x, ret.period)),
            Err(bwd) => Err(DynamicsError::BothDirections(Box::new(fwd), Box::new(bwd))),
        },
    }
}

fn geometric_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let f = i as f64 / (n - 1) as f64;
            if i == 0 {
                a
            } else if i == n - 1 {
                b
            } else {
                a * (b / a).powf(f)
            }
        })
        .collect()
}

fn stability_from(below: f64, above: f64) -> Stability {
    match (below > 0.0, above > 0.0) {
        (true, false) => Stability::Stable,
        (false, true) => Stability::Unstable,
        _ => Stability::SemiStable,
    }
}

/// Scans `d(r)` on a geometric grid between the ends of `r_range` (in the order given),
/// brackets sign changes and bisects each one.
pub fn find_cycles_numeric(
    sys: &PlanarSystem,
    r_range: (f64, f64),
    n_scan: usize,
) -> Result<LimitCycleReport, DynamicsError> {
    find_cycles_numeric_with(sys, r_range, n_scan, &IntegratorConfig::default())
}

/// Displacement and crossing time, or why the return failed.
type CellResult = Result<(f64, f64), DynamicsError>;

pub fn find_cycles_numeric_with(
    sys: &PlanarSystem,
    r_range: (f64, f64),
    n_scan: usize,
    cfg: &IntegratorConfig,
) -> Result<LimitCycleReport, DynamicsError> {
    let (a, b) = r_range;
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) || a == b || n_scan < 2 {
        return Err(DynamicsError::InvalidInput("r_range must be two distinct positive radii and n_scan >= 2".into()));
    }
    check_origin(sys)?;
    let field = Field::new(sys);
    let mut cells: Vec<(f64, CellResult)> =
        geometric_grid(a, b, n_scan).into_iter().map(|r| (r, displacement(&field, r, cfg))).collect();
    cells.sort_by(|x, y| x.0.total_cmp(&y.0));

    let invalid_cells: Vec<CellIssue> = cells
        .iter()
        .filter_map(|(r, res)| res.as_ref().err().map(|e| CellIssue { r: *r, error: e.to_string() }))
        .collect();
    let valid: Vec<(f64, f64, f64)> =
        cells.iter().filter_map(|(r, res)| res.as_ref().ok().map(|&(d, p)| (*r, d, p))).collect();
    let annulus = match (valid.first(), valid.last()) {
        (Some(lo), Some(hi)) => Some((lo.0, hi.0)),
        _ => None,
    };
    let mut notes = Vec::new();
    if let Some((lo, hi)) = annulus {
        notes.push(format!("scan covers the section from r = {lo} to r = {hi}; nothing is claimed outside"));
    }
    if !invalid_cells.is_empty() {
        notes.push(format!("{} grid cells had no return in either time direction", invalid_cells.len()));
    }
    let center_flag = valid.len() >= 2 && valid.iter().all(|v| v.1.abs() < CENTER_TOL);
    let mut cycles = Vec::new();
    if !center_flag {
        for (i, &(r, d, period)) in valid.iter().enumerate() {
            if d.abs() < ROOT_TOL {
                let below = i.checked_sub(1).map(|j| valid[j].1).unwrap_or(0.0);
                let above = valid.get(i + 1).map(|v| v.1).unwrap_or(0.0);
                cycles.push(cycle(r, period, stability_from(below, above)));
            }
        }
        for idx in 0..cells.len().saturating_sub(1) {
            let (Ok((d0, _)), Ok((d1, _))) = (&cells[idx].1, &cells[idx + 1].1) else {
                continue;
            };
            let (r0, r1) = (cells[idx].0, cells[idx + 1].0);
            if d0.abs() < ROOT_TOL || d1.abs() < ROOT_TOL || d0.signum() == d1.signum() {
                continue;
            }
            match bisect(&field, cfg, (r0, *d0), (r1, *d1)) {
                Ok((r, period)) => cycles.push(cycle(r, period, stability_from(*d0, *d1))),
                Err(e) => notes.push(format!("bracket [{r0}, {r1}] abandoned: {e}")),
            }
        }
    }
    cycles.sort_by(|x: &CycleInfo, y| x.radius.total_cmp(&y.radius));
    if center_flag {
        notes.push("displacement vanishes across the scanned annulus: continuum of periodic orbits".into());
    }
    Ok(LimitCycleReport {
        cycle_count: cycles.len(),
        cycles,
        center_flag,
        annulus,
        scanned_cells: n_scan,
        invalid_cells,
        notes,
    })
}

fn cycle(r: f64, period: f64, stability: Stability) -> CycleInfo {
    CycleInfo {
        radius: r,
        representative_point: (r, 0.0),
        period,
        stability,
        source: CycleSource::NumericPoincare,
        s_interval: None,
    }
}

fn bisect(
    field: &Field,
    cfg: &IntegratorConfig,
    lo: (f64, f64),
    hi: (f64, f64),
) -> Result<(f64, f64), DynamicsError> {
    let (mut a, mut da) = lo;
    let (mut b, _) = hi;
    let mut last = (0.5 * (a + b), f64::NAN);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let (dm, pm) = displacement(field, m, cfg)?;
        last = (m, pm);
        if dm.abs() < ROOT_TOL || (b - a).abs() < 1e-15 {
            break;
        }
        if dm.signum() == da.signum() {
            a = m;
            da = dm;
        } else {
            b = m;
        }
    }
    Ok(last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Vars;
    use crate::parser::parse_polynomial;

    fn system(p: &str, q: &str) -> PlanarSystem {
        let v = Vars::xy();
        PlanarSystem::new(parse_polynomial(p, &v).unwrap(), parse_polynomial(q, &v).unwrap()).unwrap()
    }

    #[test]
    fn returns() {
        let s1 = system("-y + x*(x^2 + y^2 - 1)", "x + y*(x^2 + y^2 - 1)");
        assert!((poincare_return(&s1, 1.0).unwrap() - 1.0).abs() < 1e-8);
        assert!(poincare_return(&s1, 0.9).unwrap() < 0.9);
        let rot = system("-y", "x");
        assert!((poincare_return(&rot, 0.7).unwrap() - 0.7).abs() < 1e-8);
        let clockwise = system("y", "-x");
        assert!((poincare_return(&clockwise, 0.7).unwrap() - 0.7).abs() < 1e-8);
    }

    #[test]
    fn return_errors() {
        let s1 = system("-y + x*(x^2 + y^2 - 1)", "x + y*(x^2 + y^2 - 1)");
        assert!(matches!(poincare_return(&s1, 1.5), Err(DynamicsError::Divergence { .. })));
        let sink = system("-y - x", "x - y");
        assert!(matches!(poincare_return(&sink, 1e-5), Err(DynamicsError::FellIntoEquilibrium { .. })));
        assert!(matches!(poincare_return(&s1, -1.0), Err(DynamicsError::InvalidInput(_))));
        assert!(matches!(poincare_return(&system("x - 1", "y"), 1.0), Err(DynamicsError::InvalidInput(_))));
        let radial = system("x", "y");
        assert!(matches!(poincare_return(&radial, 1.0), Err(DynamicsError::NotTransversal(_))));
    }

    #[test]
    fn scan_finds_unstable_unit_cycle() {
        let s1 = system("-y + x*(x^2 + y^2 - 1)", "x + y*(x^2 + y^2 - 1)");
        let rep = find_cycles_numeric(&s1, (0.2, 3.0), 40).unwrap();
        assert_eq!(rep.cycle_count, 1);
        let c = &rep.cycles[0];
        assert!((c.radius - 1.0).abs() < 1e-6);
        assert!((c.period - 2.0 * std::f64::consts::PI).abs() < 1e-6);
        assert_eq!(c.stability, Stability::Unstable);
        assert!(!rep.center_flag);
    }
}
