//! Dormand–Prince 5(4) embedded Runge–Kutta integration of planar fields.

use std::io::{self, Write};

use serde::Serialize;

use crate::algebra::FloatPoly2;
use crate::system::PlanarSystem;

use super::DynamicsError;

/// Floating-point view of a planar field, optionally with time reversed.
#[derive(Clone, Debug)]
pub struct Field {
    p: FloatPoly2,
    q: FloatPoly2,
    sign: f64,
}

impl Field {
    pub fn new(sys: &PlanarSystem) -> Self {
        Field { p: FloatPoly2::from(&sys.p), q: FloatPoly2::from(&sys.q), sign: 1.0 }
    }

    pub fn reversed(&self) -> Self {
        Field { sign: -self.sign, ..self.clone() }
    }

    #[inline]
    pub fn eval(&self, s: [f64; 2]) -> [f64; 2] {
        [self.sign * self.p.eval(s[0], s[1]), self.sign * self.q.eval(s[0], s[1])]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { rtol: 1e-10, atol: 1e-12 }
    }
}

/// Limits applied while integrating.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntegratorConfig {
    pub tol: Tolerances,
    /// Maximum integration time for a single return.
    pub t_max: f64,
    /// Radius below which a trajectory is considered captured by the equilibrium.
    pub r_min: f64,
    /// Radius beyond which a trajectory is considered to blow up.
    pub escape_radius: f64,
    /// Smallest admissible step; anything below signals finite-time blow-up.
    pub h_min: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig { tol: Tolerances::default(), t_max: 1e3, r_min: 1e-6, escape_radius: 1e6, h_min: 1e-14 }
    }
}

impl IntegratorConfig {
    /// Limits for a single accurate return. Near an unstable cycle the local error is
    /// amplified by the cycle multiplier (about `e^{4 pi}` for the unit cycle of the cubic
    /// rigid system), so the default tolerances cannot pin the return to `1e-8`.
    pub fn return_map() -> Self {
        IntegratorConfig { tol: Tolerances { rtol: 1e-14, atol: 1e-16 }, ..Self::default() }
    }
}

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights (equal to the last row of `A`).
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
/// Fourth-order embedded weights.
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One Dormand–Prince step of size `h`: the fifth-order state and the error estimate.
/// The field is autonomous, so stage times are not needed.
pub fn dp_step(f: &Field, s: [f64; 2], h: f64) -> ([f64; 2], [f64; 2]) {
    let mut k = [[0.0; 2]; 7];
    for i in 0..7 {
        let mut st = s;
        for (j, kj) in k.iter().enumerate().take(i) {
            st[0] += h * A[i][j] * kj[0];
            st[1] += h * A[i][j] * kj[1];
        }
        k[i] = f.eval(st);
    }
    let mut y5 = s;
    let mut err = [0.0; 2];
    for i in 0..7 {
        for d in 0..2 {
            y5[d] += h * B5[i] * k[i][d];
            err[d] += h * (B5[i] - B4[i]) * k[i][d];
        }
    }
    (y5, err)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub smallest_step: f64,
    pub largest_step: f64,
}

/// Adaptive stepper state.
pub struct Stepper<'a> {
    field: &'a Field,
    cfg: IntegratorConfig,
    pub t: f64,
    pub s: [f64; 2],
    h: f64,
    pub stats: StepStats,
}

impl<'a> Stepper<'a> {
    pub fn new(field: &'a Field, start: [f64; 2], cfg: IntegratorConfig) -> Self {
        Stepper {
            field,
            cfg,
            t: 0.0,
            s: start,
            h: 1e-3,
            stats: StepStats { smallest_step: f64::INFINITY, ..StepStats::default() },
        }
    }

    /// Takes one accepted step, never going past `t_stop`. Returns the step size used.
    pub fn step(&mut self, t_stop: f64) -> Result<f64, DynamicsError> {
        loop {
            let h = self.h.min(t_stop - self.t);
            if h < self.cfg.h_min && t_stop - self.t > self.cfg.h_min {
                return Err(self.divergence());
            }
            let (y, e) = dp_step(self.field, self.s, h);
            let tol = self.cfg.tol;
            let scale = |d: usize| tol.atol + tol.rtol * self.s[d].abs().max(y[d].abs());
            let err = ((e[0] / scale(0)).powi(2) + (e[1] / scale(1)).powi(2)).sqrt() / 2f64.sqrt();
            if !err.is_finite() || !y[0].is_finite() || !y[1].is_finite() {
                self.h = h / 10.0;
                self.stats.rejected += 1;
                continue;
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if err <= 1.0 {
                self.t += h;
                self.s = y;
                self.stats.accepted += 1;
                self.stats.smallest_step = self.stats.smallest_step.min(h);
                self.stats.largest_step = self.stats.largest_step.max(h);
                self.h = h * factor;
                if self.radius() > self.cfg.escape_radius {
                    return Err(self.divergence());
                }
                return Ok(h);
            }
            self.stats.rejected += 1;
            self.h = h * factor.min(1.0);
        }
    }

    pub fn radius(&self) -> f64 {
        self.s[0].hypot(self.s[1])
    }

    fn divergence(&self) -> DynamicsError {
        DynamicsError::Divergence { t: self.t, x: self.s[0], y: self.s[1] }
    }
}

/// Sampled solution curve.
#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    /// `(t, x, y)` with strictly increasing `t`.
    pub samples: Vec<(f64, f64, f64)>,
    pub tol: Tolerances,
    pub stats: StepStats,
}

impl Trajectory {
    /// CSV with columns `t,x,y`, preceded by `#` metadata lines.
    pub fn write_csv<W: Write>(&self, mut w: W, metadata: &[(&str, String)]) -> io::Result<()> {
        for (k, v) in metadata {
            writeln!(w, "# {k}: {v}")?;
        }
        writeln!(w, "# rtol: {:e}", self.tol.rtol)?;
        writeln!(w, "# atol: {:e}", self.tol.atol)?;
        writeln!(w, "# accepted_steps: {}", self.stats.accepted)?;
        writeln!(w, "# rejected_steps: {}", self.stats.rejected)?;
        writeln!(w, "t,x,y")?;
        for (t, x, y) in &self.samples {
            writeln!(w, "{t:.17e},{x:.17e},{y:.17e}")?;
        }
        Ok(())
    }
}

/// Integrates from `start` over `[0, t_end]`, recording every accepted step.
pub fn integrate(
    sys: &PlanarSystem,
    start: (f64, f64),
    t_end: f64,
    tol: Tolerances,
) -> Result<Trajectory, DynamicsError> {
    if [t_end, tol.rtol, tol.atol].iter().any(|v| v.is_nan() || *v <= 0.0) {
        return Err(DynamicsError::InvalidInput("t_end and tolerances must be positive".into()));
    }
    let field = Field::new(sys);
    let cfg = IntegratorConfig { tol, ..IntegratorConfig::default() };
    let mut st = Stepper::new(&field, [start.0, start.1], cfg);
    let mut samples = vec![(0.0, start.0, start.1)];
    while st.t < t_end {
        st.step(t_end)?;
        samples.push((st.t, st.s[0], st.s[1]));
    }
    Ok(Trajectory { samples, tol, stats: st.stats })
}

/// Fixed-step fifth-order integration, for convergence studies.
pub fn integrate_fixed(sys: &PlanarSystem, start: (f64, f64), t_end: f64, h: f64) -> Vec<(f64, f64, f64)> {
    let field = Field::new(sys);
    let n = (t_end / h).round() as usize;
    let mut s = [start.0, start.1];
    let mut out = Vec::with_capacity(n + 1);
    out.push((0.0, s[0], s[1]));
    for i in 1..=n {
        s = dp_step(&field, s, h).0;
        out.push((i as f64 * h, s[0], s[1]));
    }
    out
}
