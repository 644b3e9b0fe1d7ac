//! Explicit and modified Patankar time integrators over production-destruction systems.

mod dec;
mod id;
mod linear;
mod stage;

pub use dec::{dec_parameters, lobatto_nodes, theta};
pub use id::IntegratorId;
pub use linear::{solve_banded, PatankarLinearSystem, PatankarMatrix, RESIDUAL_TOL};
pub use stage::DENOMINATOR_FLOOR;

use stage::{clamp_denominators, solve_stage, Term};

use crate::error::{Error, Result};
use crate::pds::{PdValues, ProductionDestructionSystem};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepOptions {
    /// Replace every Patankar weight by one.
    pub frozen_weights: bool,
    /// Report the interface transfers of the final update.
    pub record_flows: bool,
}

/// Intermediate data of one step.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StageRecord {
    /// Stage states in evaluation order, starting with the old state. For
    /// deferred correction these are all iterates except the returned one.
    pub stages: Vec<Vec<f64>>,
    /// Stage time offsets `c_k * dt`.
    pub stage_times: Vec<f64>,
    /// `U^(k) / pi^(k)` for every implicit stage, weighted unknowns only.
    pub stage_weights: Vec<Vec<f64>>,
    /// `U^{n+1} / sigma`, weighted unknowns only; empty for explicit methods.
    pub final_weights: Vec<f64>,
    pub dt: f64,
    /// Denominators raised to [`DENOMINATOR_FLOOR`].
    pub clamped_denominators: usize,
}

#[derive(Debug, Clone)]
pub struct StepOutput {
    pub state: Vec<f64>,
    pub record: StageRecord,
    /// Transfer across each interface during the step, see [`StepOptions::record_flows`].
    pub flows: Option<Vec<f64>>,
}

/// Time integrator over a production-destruction right-hand side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrator {
    id: IntegratorId,
}

impl Integrator {
    pub fn new(id: IntegratorId) -> Result<Self> {
        id.validate()?;
        Ok(Self { id })
    }

    pub fn id(&self) -> IntegratorId {
        self.id
    }

    pub fn step<P>(&self, pds: &P, u: &[f64], dt: f64, opts: StepOptions) -> Result<StepOutput>
    where
        P: ProductionDestructionSystem + ?Sized,
    {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::param(format!("time step must be positive and finite, got {dt}")));
        }
        if u.len() != pds.dim() {
            return Err(Error::param(format!("state has {} entries, expected {}", u.len(), pds.dim())));
        }
        if let Some(index) = u.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidState { index, value: u[index] });
        }
        if self.id.is_patankar() {
            let nw = pds.sparsity().weighted();
            if let Some(index) = u[..nw].iter().position(|&v| !(v > 0.0)) {
                return Err(Error::InvalidState { index, value: u[index] });
            }
        }
        let mut run = StepRun { pds, u, dt, opts, record: StageRecord { dt, ..Default::default() } };
        let (state, flows) = match self.id {
            IntegratorId::ExplicitEuler => run.explicit_rk(&[&[]], &[1.0], &[0.0])?,
            IntegratorId::Ssprk2 => run.explicit_rk(&[&[], &[1.0]], &[0.5, 0.5], &[0.0, 1.0])?,
            IntegratorId::Rk22 { alpha } => {
                let b2 = 0.5 / alpha;
                run.explicit_rk(&[&[], &[alpha]], &[1.0 - b2, b2], &[0.0, alpha])?
            }
            IntegratorId::Ssprk3 => run.explicit_rk(
                &[&[], &[1.0], &[0.25, 0.25]],
                &[1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0],
                &[0.0, 1.0, 0.5],
            )?,
            IntegratorId::Mpe => run.mpe()?,
            IntegratorId::Mprk22 { alpha } => run.mprk22(alpha)?,
            IntegratorId::Mpssprk3 => run.mpssprk3()?,
            IntegratorId::Dec { order } => run.dec(order, true)?,
            IntegratorId::Mpdec { order } => run.dec(order, opts.frozen_weights)?,
        };
        Ok(StepOutput { state, record: run.record, flows })
    }
}

struct StepRun<'a, P: ?Sized> {
    pds: &'a P,
    u: &'a [f64],
    dt: f64,
    opts: StepOptions,
    record: StageRecord,
}

impl<P: ProductionDestructionSystem + ?Sized> StepRun<'_, P> {
    fn eval(&self, state: &[f64]) -> Result<PdValues> {
        let mut values = self.pds.sparsity().values();
        self.pds.evaluate(state, &mut values)?;
        if !values.is_finite() {
            return Err(Error::NonFinite("production-destruction terms"));
        }
        Ok(values)
    }

    fn weighted(&self) -> usize {
        self.pds.sparsity().weighted()
    }

    fn denominators(&mut self, values: &[f64]) -> Vec<f64> {
        let mut den = values[..self.weighted()].to_vec();
        self.record.clamped_denominators += clamp_denominators(&mut den);
        den
    }

    /// One implicit stage; records its weights when `stage_weight` is set.
    fn stage(&mut self, terms: &[Term<'_>], den: &[f64], last: bool) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
        let den = (!self.opts.frozen_weights).then_some(den);
        let want_flows = last && self.opts.record_flows;
        let sol = solve_stage(self.pds.sparsity(), self.u, self.dt, terms, den, want_flows)?;
        if let Some(w) = sol.weights {
            if last {
                self.record.final_weights = w;
            } else {
                self.record.stage_weights.push(w);
            }
        }
        Ok((sol.state, sol.flows))
    }

    fn push_stage(&mut self, state: &[f64], c: f64) {
        self.record.stages.push(state.to_vec());
        self.record.stage_times.push(c * self.dt);
    }

    fn explicit_rk(&mut self, a: &[&[f64]], b: &[f64], c: &[f64]) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
        let sp = self.pds.sparsity();
        let mut values: Vec<PdValues> = Vec::with_capacity(b.len());
        let mut rhs: Vec<Vec<f64>> = Vec::with_capacity(b.len());
        for (row, &ck) in a.iter().zip(c) {
            let mut y = self.u.to_vec();
            for (coef, k) in row.iter().zip(&rhs) {
                for (yi, ki) in y.iter_mut().zip(k) {
                    *yi += self.dt * coef * ki;
                }
            }
            self.push_stage(&y, ck);
            let v = self.eval(&y)?;
            let mut r = vec![0.0; sp.dim()];
            v.rhs(sp, &mut r);
            values.push(v);
            rhs.push(r);
        }
        let mut state = self.u.to_vec();
        for (coef, k) in b.iter().zip(&rhs) {
            for (si, ki) in state.iter_mut().zip(k) {
                *si += self.dt * coef * ki;
            }
        }
        let flows = if self.opts.record_flows {
            let terms: Vec<Term<'_>> = b.iter().zip(&values).map(|(&coef, values)| Term { coef, values }).collect();
            solve_stage(sp, self.u, self.dt, &terms, None, true)?.flows
        } else {
            None
        };
        Ok((state, flows))
    }

    fn mpe(&mut self) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
        self.push_stage(self.u, 0.0);
        let p0 = self.eval(self.u)?;
        let den = self.denominators(self.u);
        self.stage(&[Term { coef: 1.0, values: &p0 }], &den, true)
    }

    fn mprk22(&mut self, alpha: f64) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
        self.push_stage(self.u, 0.0);
        let p0 = self.eval(self.u)?;
        let den = self.denominators(self.u);
        let (u2, _) = self.stage(&[Term { coef: alpha, values: &p0 }], &den, false)?;
        self.push_stage(&u2, alpha);
        let p1 = self.eval(&u2)?;
        let b2 = 0.5 / alpha;
        let nw = self.weighted();
        let sigma = self.denominators(&mprk22_denominators(alpha, &self.u[..nw], &u2[..nw]));
        let terms = [Term { coef: 1.0 - b2, values: &p0 }, Term { coef: b2, values: &p1 }];
        self.stage(&terms, &sigma, true)
    }

    /// Third-order SSP tableau. The second stage is an MPE step, the third is
    /// weighted by the second stage, and the final update by an auxiliary
    /// second-order solution built from the first two stages.
    fn mpssprk3(&mut self) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
        self.push_stage(self.u, 0.0);
        let p0 = self.eval(self.u)?;
        let den = self.denominators(self.u);
        let (u2, _) = self.stage(&[Term { coef: 1.0, values: &p0 }], &den, false)?;
        self.push_stage(&u2, 1.0);
        let p1 = self.eval(&u2)?;
        let den2 = self.denominators(&u2);
        let (u3, _) = self.stage(&[Term { coef: 0.25, values: &p0 }, Term { coef: 0.25, values: &p1 }], &den2, false)?;
        self.push_stage(&u3, 0.5);
        let p2 = self.eval(&u3)?;
        let sigma = if self.opts.frozen_weights {
            den2.clone()
        } else {
            let aux = solve_stage(
                self.pds.sparsity(),
                self.u,
                self.dt,
                &[Term { coef: 0.5, values: &p0 }, Term { coef: 0.5, values: &p1 }],
                Some(&den2),
                false,
            )?;
            self.denominators(&aux.state)
        };
        let terms = [
            Term { coef: 1.0 / 6.0, values: &p0 },
            Term { coef: 1.0 / 6.0, values: &p1 },
            Term { coef: 2.0 / 3.0, values: &p2 },
        ];
        self.stage(&terms, &sigma, true)
    }

    fn dec(&mut self, order: usize, explicit: bool) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
        let (subintervals, iterations) = dec_parameters(order);
        let nodes = lobatto_nodes(subintervals);
        let th = theta(&nodes);
        let saved = self.opts.frozen_weights;
        self.opts.frozen_weights = explicit;
        let mut previous: Vec<Vec<f64>> = vec![self.u.to_vec(); subintervals + 1];
        self.push_stage(self.u, 0.0);
        let mut flows = None;
        for k in 0..iterations {
            let values: Vec<PdValues> = previous.iter().map(|s| self.eval(s)).collect::<Result<_>>()?;
            let mut current = vec![self.u.to_vec()];
            for m in 1..=subintervals {
                let terms: Vec<Term<'_>> =
                    th[m].iter().zip(&values).map(|(&coef, values)| Term { coef, values }).collect();
                let den = self.denominators(&previous[m]);
                let last = k + 1 == iterations && m == subintervals;
                let (next, f) = self.stage(&terms, &den, last)?;
                if last {
                    flows = f;
                } else {
                    self.push_stage(&next, nodes[m]);
                }
                current.push(next);
            }
            previous = current;
        }
        self.opts.frozen_weights = saved;
        Ok((previous.pop().unwrap(), flows))
    }
}

/// `u^(1 - 1/alpha) * u2^(1/alpha)`, formed in log space.
pub(crate) fn mprk22_denominators(alpha: f64, u: &[f64], u2: &[f64]) -> Vec<f64> {
    u.iter().zip(u2).map(|(a, b)| ((1.0 - 1.0 / alpha) * a.ln() + b.ln() / alpha).exp()).collect()
}

/// One modified Patankar Euler step.
pub fn mpe_step<P: ProductionDestructionSystem + ?Sized>(pds: &P, u: &[f64], dt: f64) -> Result<StepOutput> {
    Integrator::new(IntegratorId::Mpe)?.step(pds, u, dt, StepOptions::default())
}

pub fn mprk22_step<P: ProductionDestructionSystem + ?Sized>(pds: &P, u: &[f64], dt: f64, alpha: f64) -> Result<StepOutput> {
    Integrator::new(IntegratorId::Mprk22 { alpha })?.step(pds, u, dt, StepOptions::default())
}

pub fn mpssprk3_step<P: ProductionDestructionSystem + ?Sized>(pds: &P, u: &[f64], dt: f64) -> Result<StepOutput> {
    Integrator::new(IntegratorId::Mpssprk3)?.step(pds, u, dt, StepOptions::default())
}

pub fn mpdec_step<P: ProductionDestructionSystem + ?Sized>(pds: &P, u: &[f64], dt: f64, order: usize) -> Result<StepOutput> {
    Integrator::new(IntegratorId::Mpdec { order })?.step(pds, u, dt, StepOptions::default())
}

pub fn explicit_euler_step<P: ProductionDestructionSystem + ?Sized>(pds: &P, u: &[f64], dt: f64) -> Result<Vec<f64>> {
    Ok(Integrator::new(IntegratorId::ExplicitEuler)?.step(pds, u, dt, StepOptions::default())?.state)
}

/// SSPRK2 (`stages = 2`) or SSPRK3 (`stages = 3`).
pub fn ssprk_step<P: ProductionDestructionSystem + ?Sized>(pds: &P, u: &[f64], dt: f64, stages: usize) -> Result<Vec<f64>> {
    let id = match stages {
        2 => IntegratorId::Ssprk2,
        3 => IntegratorId::Ssprk3,
        _ => return Err(Error::param(format!("no SSPRK method with {stages} stages"))),
    };
    Ok(Integrator::new(id)?.step(pds, u, dt, StepOptions::default())?.state)
}
