//! Numerical machinery shared by the oracles and the ODE-defined families.

use crate::error::{Error, Result};

/// Default step for first and second derivatives.
pub const FD_STEP: f64 = 1e-4;
/// Default step for third derivatives.
pub const FD_STEP_ORDER3: f64 = 1e-3;

/// Central difference of order 1, 2 or 3 with one Richardson extrapolation.
///
/// `step` is the finest spacing; the extrapolation pairs it with `2 * step`.
pub fn fd_derivative(f: impl Fn(f64) -> f64, t: f64, order: u8, step: f64) -> Result<f64> {
    if !(step > 0.0) {
        return Err(Error::param(format!("finite-difference step must be positive, got {step}")));
    }
    let sample = |s: f64| {
        let v = f(t + s);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite(format!("sample at t = {}", t + s)))
        }
    };
    let stencil = |h: f64| -> Result<f64> {
        Ok(match order {
            1 => (sample(h)? - sample(-h)?) / (2.0 * h),
            2 => (sample(h)? - 2.0 * sample(0.0)? + sample(-h)?) / (h * h),
            3 => {
                (sample(2.0 * h)? - 2.0 * sample(h)? + 2.0 * sample(-h)? - sample(-2.0 * h)?)
                    / (2.0 * h * h * h)
            }
            _ => return Err(Error::param(format!("derivative order must be 1, 2 or 3, got {order}"))),
        })
    };
    let fine = stencil(step)?;
    let coarse = stencil(2.0 * step)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Central difference without extrapolation.
pub fn central_difference(f: impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    (f(t + h) - f(t - h)) / (2.0 * h)
}

/// First-order system `y' = rhs(t, y)` on `[t0, t1]` (either direction).
pub struct OdeProblem<F> {
    pub rhs: F,
    pub t0: f64,
    pub t1: f64,
    pub y0: Vec<f64>,
    pub rtol: f64,
    pub atol: f64,
    /// Upper bound on accepted step length; bounds the interpolation error.
    pub max_step: f64,
}

impl<F: Fn(f64, &[f64], &mut [f64])> OdeProblem<F> {
    pub fn new(rhs: F, t0: f64, t1: f64, y0: Vec<f64>) -> Self {
        Self { rhs, t0, t1, y0, rtol: 1e-9, atol: 1e-12, max_step: f64::INFINITY }
    }

    pub fn tolerances(mut self, rtol: f64, atol: f64) -> Self {
        self.rtol = rtol;
        self.atol = atol;
        self
    }

    pub fn max_step(mut self, h: f64) -> Self {
        self.max_step = h;
        self
    }
}

/// Accepted mesh with cubic Hermite interpolation between steps.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSolution {
    ts: Vec<f64>,
    ys: Vec<Vec<f64>>,
    fs: Vec<Vec<f64>>,
}

impl DenseSolution {
    pub fn mesh(&self) -> &[f64] {
        &self.ts
    }

    pub fn states(&self) -> &[Vec<f64>] {
        &self.ys
    }

    pub fn t_start(&self) -> f64 {
        self.ts[0]
    }

    pub fn t_end(&self) -> f64 {
        *self.ts.last().unwrap()
    }

    pub fn steps(&self) -> usize {
        self.ts.len() - 1
    }

    /// Largest accepted step length.
    pub fn max_step(&self) -> f64 {
        self.ts.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max)
    }

    pub fn contains(&self, t: f64) -> bool {
        let (a, b) = (self.t_start(), self.t_end());
        (a.min(b)..=a.max(b)).contains(&t)
    }

    pub fn query(&self, t: f64) -> Result<Vec<f64>> {
        if !self.contains(t) {
            return Err(Error::domain(format!(
                "t = {t} outside solution span [{}, {}]",
                self.t_start(),
                self.t_end()
            )));
        }
        let forward = self.t_end() >= self.t_start();
        // index of the first mesh point strictly past t
        let k = self.ts.partition_point(|&s| if forward { s <= t } else { s >= t });
        if k == 0 {
            return Ok(self.ys[0].clone());
        }
        if k >= self.ts.len() {
            return Ok(self.ys[self.ts.len() - 1].clone());
        }
        let i = k - 1;
        let (t0, t1) = (self.ts[i], self.ts[i + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        Ok((0..self.ys[i].len())
            .map(|c| {
                h00 * self.ys[i][c]
                    + h10 * h * self.fs[i][c]
                    + h01 * self.ys[i + 1][c]
                    + h11 * h * self.fs[i + 1][c]
            })
            .collect())
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const MAX_STEPS: usize = 1_000_000;

/// Adaptive Dormand–Prince 5(4) integration with local extrapolation.
pub fn ode_integrate<F: Fn(f64, &[f64], &mut [f64])>(p: &OdeProblem<F>) -> Result<DenseSolution> {
    let span = p.t1 - p.t0;
    if !(span.is_finite() && span != 0.0) {
        return Err(Error::param(format!("degenerate span [{}, {}]", p.t0, p.t1)));
    }
    if !(p.rtol > 0.0 && p.atol > 0.0 && p.max_step > 0.0) {
        return Err(Error::param("tolerances and maximum step must be positive"));
    }
    let dir = span.signum();
    let n = p.y0.len();
    let eval = |t: f64, y: &[f64], out: &mut [f64]| -> Result<()> {
        (p.rhs)(t, y, out);
        if out.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite(format!("right-hand side at t = {t}")))
        }
    };

    let mut t = p.t0;
    let mut y = p.y0.clone();
    let mut f0 = vec![0.0; n];
    eval(t, &y, &mut f0)?;
    let mut h = dir * initial_step(p, &f0);

    let mut sol = DenseSolution { ts: vec![t], ys: vec![y.clone()], fs: vec![f0.clone()] };
    let mut k = vec![vec![0.0; n]; 7];
    let mut tmp = vec![0.0; n];
    let mut y_new = vec![0.0; n];

    for _ in 0..MAX_STEPS {
        if (p.t1 - t) * dir <= 0.0 {
            return Ok(sol);
        }
        if h.abs() > p.max_step {
            h = dir * p.max_step;
        }
        if (t + h - p.t1) * dir > 0.0 {
            h = p.t1 - t;
        }
        if h.abs() < 16.0 * f64::EPSILON * t.abs().max(1e-300) || h.abs() < f64::MIN_POSITIVE {
            return Err(Error::StepUnderflow { t });
        }

        k[0].copy_from_slice(&f0);
        for s in 1..7 {
            for c in 0..n {
                tmp[c] = y[c] + h * (0..s).map(|j| A[s][j] * k[j][c]).sum::<f64>();
            }
            eval(t + C[s] * h, &tmp, &mut k[s])?;
            if s == 6 {
                y_new.copy_from_slice(&tmp);
            }
        }

        let mut err = 0.0;
        for c in 0..n {
            let e = h * (0..7).map(|j| E[j] * k[j][c]).sum::<f64>();
            let sc = p.atol + p.rtol * y[c].abs().max(y_new[c].abs());
            err += (e / sc).powi(2);
        }
        let err = (err / n as f64).sqrt();

        if err <= 1.0 {
            t = if (t + h - p.t1) * dir >= 0.0 { p.t1 } else { t + h };
            y.copy_from_slice(&y_new);
            // FSAL: stage 7 was evaluated at (t + h, y_new)
            f0.copy_from_slice(&k[6]);
            sol.ts.push(t);
            sol.ys.push(y.clone());
            sol.fs.push(f0.clone());
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= if err <= 1.0 { fac } else { fac.min(1.0) };
    }
    Err(Error::StepUnderflow { t })
}

fn initial_step<F: Fn(f64, &[f64], &mut [f64])>(p: &OdeProblem<F>, f0: &[f64]) -> f64 {
    let scale = |c: usize| p.atol + p.rtol * p.y0[c].abs();
    let n = p.y0.len() as f64;
    let d0 = (p.y0.iter().enumerate().map(|(c, v)| (v / scale(c)).powi(2)).sum::<f64>() / n).sqrt();
    let d1 = (f0.iter().enumerate().map(|(c, v)| (v / scale(c)).powi(2)).sum::<f64>() / n).sqrt();
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.min((p.t1 - p.t0).abs())
}

/// Classical fourth-order Runge–Kutta with `n` equal steps; returns the final state.
pub fn rk4_fixed(rhs: impl Fn(f64, &[f64], &mut [f64]), t0: f64, t1: f64, y0: &[f64], n: usize) -> Vec<f64> {
    let h = (t1 - t0) / n as f64;
    let m = y0.len();
    let mut y = y0.to_vec();
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) =
        (vec![0.0; m], vec![0.0; m], vec![0.0; m], vec![0.0; m], vec![0.0; m]);
    for i in 0..n {
        let t = t0 + i as f64 * h;
        rhs(t, &y, &mut k1);
        for c in 0..m {
            tmp[c] = y[c] + 0.5 * h * k1[c];
        }
        rhs(t + 0.5 * h, &tmp, &mut k2);
        for c in 0..m {
            tmp[c] = y[c] + 0.5 * h * k2[c];
        }
        rhs(t + 0.5 * h, &tmp, &mut k3);
        for c in 0..m {
            tmp[c] = y[c] + h * k3[c];
        }
        rhs(t + h, &tmp, &mut k4);
        for c in 0..m {
            y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        }
    }
    y
}

/// Errors at or below this are treated as exact.
pub const MACHINE_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Order {
    Estimated(f64),
    /// Every error sits at the rounding floor; no slope can be measured.
    Exact,
}

impl Order {
    pub fn value(self) -> Option<f64> {
        match self {
            Order::Estimated(v) => Some(v),
            Order::Exact => None,
        }
    }
}

/// Least-squares slope of `log(error)` against `log(step)`.
pub fn convergence_order(ladder: &[(f64, f64)]) -> Result<Order> {
    if ladder.len() < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: ladder.len() });
    }
    if ladder.iter().all(|&(_, e)| e.abs() <= MACHINE_FLOOR) {
        return Ok(Order::Exact);
    }
    if ladder.iter().any(|&(h, e)| !(h > 0.0) || e == 0.0 || !e.is_finite()) {
        return Err(Error::param("ladder needs positive steps and non-zero finite errors"));
    }
    let pts: Vec<(f64, f64)> = ladder.iter().map(|&(h, e)| (h.ln(), e.abs().ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::param("ladder steps must differ"));
    }
    Ok(Order::Estimated(sxy / sxx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E as EULER;

    #[test]
    fn fd_examples() {
        for t in [0.0, 1.0, -3.5] {
            let d = fd_derivative(|s| s * s, t, 2, 1e-2).unwrap();
            assert!((d - 2.0).abs() < 1e-9, "{t}: {d}");
        }
        let d = fd_derivative(f64::sin, 0.0, 1, FD_STEP).unwrap();
        assert!((d - 1.0).abs() < 1e-10);
        let d = fd_derivative(f64::exp, 0.0, 3, FD_STEP_ORDER3).unwrap();
        assert!((d - 1.0).abs() < 1e-6, "{d}");
    }

    #[test]
    fn fd_errors() {
        assert!(matches!(fd_derivative(|s| 1.0 / s, 0.0, 2, 1e-3), Err(Error::NonFinite(_))));
        assert!(matches!(fd_derivative(f64::sin, 0.0, 4, 1e-3), Err(Error::InvalidParameter(_))));
        assert!(fd_derivative(f64::sin, 0.0, 1, 0.0).is_err());
    }

    #[test]
    fn fd_converges_at_advertised_order() {
        // Richardson-extrapolated first derivative: fourth order
        let ladder: Vec<(f64, f64)> = [0.1, 0.05, 0.025, 0.0125]
            .iter()
            .map(|&h| (h, (fd_derivative(f64::sin, 0.7, 1, h).unwrap() - 0.7f64.cos()).abs()))
            .collect();
        let o = convergence_order(&ladder).unwrap().value().unwrap();
        assert!((o - 4.0).abs() < 0.2, "{o}");
        // plain central difference: second order
        let ladder: Vec<(f64, f64)> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&h| (h, (central_difference(f64::sin, 0.7, h) - 0.7f64.cos()).abs()))
            .collect();
        let o = convergence_order(&ladder).unwrap().value().unwrap();
        assert!((o - 2.0).abs() < 0.2, "{o}");
        let ladder: Vec<(f64, f64)> = [0.2, 0.1, 0.05]
            .iter()
            .map(|&h| (h, (fd_derivative(f64::exp, 0.3, 2, h).unwrap() - 0.3f64.exp()).abs()))
            .collect();
        let o = convergence_order(&ladder).unwrap().value().unwrap();
        assert!((o - 4.0).abs() < 0.2, "{o}");
    }

    fn solve(rhs: impl Fn(f64, &[f64], &mut [f64]), t0: f64, t1: f64, y0: Vec<f64>, rtol: f64) -> DenseSolution {
        ode_integrate(&OdeProblem::new(rhs, t0, t1, y0).tolerances(rtol, rtol * 1e-3)).unwrap()
    }

    #[test]
    fn closed_form_problems() {
        for rtol in [1e-6, 1e-9] {
            let s = solve(|_, y, d| d[0] = y[0], 0.0, 1.0, vec![1.0], rtol);
            let e = (s.query(1.0).unwrap()[0] - EULER).abs();
            assert!(e < 10.0 * rtol, "exp at {rtol}: {e}");

            let s = solve(|t, y, d| d[0] = -2.0 * t * y[0], 0.0, 2.0, vec![1.0], rtol);
            let e = (s.query(2.0).unwrap()[0] - (-4.0f64).exp()).abs();
            assert!(e < 10.0 * rtol, "gaussian at {rtol}: {e}");

            let s = solve(|t, y, d| { d[0] = y[1]; d[1] = y[1] * (5.0 - t) }, 0.0, 1.0, vec![0.0, 1.0], rtol);
            let want = (5.0f64 - 0.5).exp();
            let e = (s.query(1.0).unwrap()[1] - want).abs() / want;
            assert!(e < 10.0 * rtol, "separable at {rtol}: {e}");
        }
    }

    #[test]
    fn dense_output_hits_mesh_states_exactly() {
        let s = solve(|_, y, d| d[0] = y[0].cos(), 0.0, 3.0, vec![0.1], 1e-8);
        for (t, y) in s.mesh().iter().zip(s.states()) {
            assert_eq!(&s.query(*t).unwrap(), y);
        }
        assert!(s.query(3.5).is_err());
        assert!(s.steps() > 1);
    }

    #[test]
    fn dense_output_between_steps() {
        let p = OdeProblem::new(|_, y: &[f64], d: &mut [f64]| d[0] = y[0], 0.0, 2.0, vec![1.0])
            .tolerances(1e-12, 1e-14)
            .max_step(5e-3);
        let s = ode_integrate(&p).unwrap();
        for k in 0..=40 {
            let t = 0.05 * k as f64;
            assert!((s.query(t).unwrap()[0] - t.exp()).abs() < 1e-10 * t.exp());
        }
    }

    #[test]
    fn integrates_backwards() {
        let p = OdeProblem::new(|_, y: &[f64], d: &mut [f64]| d[0] = y[0], 0.0, -1.0, vec![1.0])
            .tolerances(1e-10, 1e-13)
            .max_step(1e-2);
        let s = ode_integrate(&p).unwrap();
        assert!((s.query(-1.0).unwrap()[0] - (-1.0f64).exp()).abs() < 1e-9);
        assert!((s.query(-0.37).unwrap()[0] - (-0.37f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn blow_up_is_reported() {
        // y' = y², y(0) = 1 blows up at t = 1
        let r = ode_integrate(&OdeProblem::new(|_, y: &[f64], d: &mut [f64]| d[0] = y[0] * y[0], 0.0, 2.0, vec![1.0]));
        assert!(matches!(r, Err(Error::StepUnderflow { .. }) | Err(Error::NonFinite(_))), "{r:?}");
    }

    #[test]
    fn rejects_bad_problems() {
        let rhs = |_: f64, _: &[f64], d: &mut [f64]| d[0] = 0.0;
        assert!(ode_integrate(&OdeProblem::new(rhs, 1.0, 1.0, vec![0.0])).is_err());
        assert!(ode_integrate(&OdeProblem::new(rhs, 0.0, 1.0, vec![0.0]).tolerances(0.0, 1.0)).is_err());
    }

    #[test]
    fn rk4_is_fourth_order() {
        let ladder: Vec<(f64, f64)> = [10, 20, 40, 80]
            .iter()
            .map(|&n| {
                let y = rk4_fixed(|_, y, d| d[0] = y[0], 0.0, 1.0, &[1.0], n);
                (1.0 / n as f64, (y[0] - EULER).abs())
            })
            .collect();
        let o = convergence_order(&ladder).unwrap().value().unwrap();
        assert!((o - 4.0).abs() < 0.2, "{o}");
    }

    #[test]
    fn convergence_order_edge_cases() {
        assert!(matches!(
            convergence_order(&[(0.1, 1e-3), (0.05, 1e-4)]),
            Err(Error::TooFewPoints { needed: 3, got: 2 })
        ));
        // exact for quadratics: errors sit at the floor
        let ladder: Vec<(f64, f64)> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&h| (h, (central_difference(|s| s * s, 1.0, h) - 2.0).abs()))
            .collect();
        assert_eq!(convergence_order(&ladder).unwrap(), Order::Exact);
    }
}
