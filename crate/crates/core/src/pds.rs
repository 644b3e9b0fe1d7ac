//! Production-destruction systems `u_i' = sum_j p_ij(u) - sum_j d_ij(u)`.
//!
//! Terms are stored against a fixed list of `(i, j)` couplings. Besides the
//! coupling terms every unknown carries an external `source` and `sink`,
//! which are nonzero only for open boundaries. Unknowns past
//! [`Sparsity::weighted`] are not positivity constrained: their whole
//! right-hand side lives in `source` and is integrated explicitly.

use std::collections::HashMap;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// Couplings only between neighbours `i -> i +- 1` of the weighted block.
    Tridiagonal { periodic: bool },
    General,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sparsity {
    dim: usize,
    weighted: usize,
    layout: Layout,
    entries: Vec<(usize, usize)>,
    transpose: Vec<Option<usize>>,
}

impl Sparsity {
    /// Nearest-neighbour pattern on the first `weighted` of `dim` unknowns.
    pub fn tridiagonal(weighted: usize, dim: usize, periodic: bool) -> Self {
        assert!(weighted >= 3 && weighted <= dim);
        let mut entries = Vec::with_capacity(2 * weighted);
        for i in 0..weighted {
            if i > 0 {
                entries.push((i, i - 1));
            } else if periodic {
                entries.push((0, weighted - 1));
            }
            if i + 1 < weighted {
                entries.push((i, i + 1));
            } else if periodic {
                entries.push((i, 0));
            }
        }
        Self::build(dim, weighted, Layout::Tridiagonal { periodic }, entries)
    }

    /// Arbitrary couplings, all unknowns weighted.
    pub fn general(dim: usize, entries: Vec<(usize, usize)>) -> Self {
        assert!(entries.iter().all(|&(i, j)| i < dim && j < dim));
        Self::build(dim, dim, Layout::General, entries)
    }

    fn build(dim: usize, weighted: usize, layout: Layout, entries: Vec<(usize, usize)>) -> Self {
        let index: HashMap<(usize, usize), usize> = entries.iter().enumerate().map(|(e, &ij)| (ij, e)).collect();
        let transpose = entries.iter().map(|&(i, j)| index.get(&(j, i)).copied()).collect();
        Self { dim, weighted, layout, entries, transpose }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weighted(&self) -> usize {
        self.weighted
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    /// Index of the `(j, i)` entry for entry `(i, j)`.
    pub fn transpose(&self, entry: usize) -> Option<usize> {
        self.transpose[entry]
    }

    pub fn values(&self) -> PdValues {
        PdValues::zeros(self)
    }
}

/// Production and destruction terms evaluated at one state.
#[derive(Debug, Clone, PartialEq)]
pub struct PdValues {
    /// `p_ij` per entry of the sparsity pattern.
    pub prod: Vec<f64>,
    /// `d_ij` per entry of the sparsity pattern.
    pub dest: Vec<f64>,
    pub source: Vec<f64>,
    pub sink: Vec<f64>,
}

impl PdValues {
    pub fn zeros(sparsity: &Sparsity) -> Self {
        let (k, n) = (sparsity.entries.len(), sparsity.dim);
        Self { prod: vec![0.0; k], dest: vec![0.0; k], source: vec![0.0; n], sink: vec![0.0; n] }
    }

    pub fn clear(&mut self) {
        for v in [&mut self.prod, &mut self.dest, &mut self.source, &mut self.sink] {
            v.iter_mut().for_each(|x| *x = 0.0);
        }
    }

    /// `rhs_i = sum_j p_ij - sum_j d_ij + source_i - sink_i`.
    pub fn rhs(&self, sparsity: &Sparsity, out: &mut [f64]) {
        for (o, (s, k)) in out.iter_mut().zip(self.source.iter().zip(&self.sink)) {
            *o = s - k;
        }
        for (e, &(i, _)) in sparsity.entries.iter().enumerate() {
            out[i] += self.prod[e] - self.dest[e];
        }
    }

    pub fn is_finite(&self) -> bool {
        [&self.prod, &self.dest, &self.source, &self.sink]
            .iter()
            .all(|v| v.iter().all(|x| x.is_finite()))
    }
}

pub trait ProductionDestructionSystem {
    fn sparsity(&self) -> &Sparsity;

    /// Writes the terms at `u` into `out`, which was created from [`Self::sparsity`].
    fn evaluate(&self, u: &[f64], out: &mut PdValues) -> Result<()>;

    /// Declared `p_ij = d_ji`, `p_ii = d_ii = 0` and no external terms.
    fn is_conservative(&self) -> bool;

    fn dim(&self) -> usize {
        self.sparsity().dim()
    }
}

pub fn rhs_from_pds<P: ProductionDestructionSystem + ?Sized>(pds: &P, u: &[f64]) -> Result<Vec<f64>> {
    let mut values = pds.sparsity().values();
    pds.evaluate(u, &mut values)?;
    let mut out = vec![0.0; pds.dim()];
    values.rhs(pds.sparsity(), &mut out);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConservationReport {
    pub samples: usize,
    /// max |p_ij - d_ji| and |d_ij - p_ji|
    pub max_pair_defect: f64,
    /// max |p_ii| + |d_ii|
    pub max_diagonal: f64,
    /// max source + sink on weighted unknowns
    pub max_external: f64,
    /// smallest term seen; negative values break the PDS contract
    pub min_term: f64,
}

impl ConservationReport {
    pub const TOLERANCE: f64 = 1e-12;

    pub fn passed(&self) -> bool {
        self.max_pair_defect <= Self::TOLERANCE
            && self.max_diagonal <= Self::TOLERANCE
            && self.max_external <= Self::TOLERANCE
            && self.min_term >= 0.0
    }
}

/// Log-uniform random state in `[1e-12, 1e4]` per component.
pub fn random_positive_state<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| 10f64.powf(rng.gen_range(-12.0..=4.0))).collect()
}

pub fn verify_conservative<P: ProductionDestructionSystem + ?Sized>(pds: &P, samples: usize) -> ConservationReport {
    verify_conservative_with(pds, samples, &mut StdRng::seed_from_u64(0x5eed))
}

pub fn verify_conservative_with<P, R>(pds: &P, samples: usize, rng: &mut R) -> ConservationReport
where
    P: ProductionDestructionSystem + ?Sized,
    R: Rng,
{
    let sp = pds.sparsity();
    let index: HashMap<(usize, usize), usize> =
        sp.entries().iter().enumerate().map(|(k, &ij)| (ij, k)).collect();
    let mut report = ConservationReport {
        samples,
        max_pair_defect: 0.0,
        max_diagonal: 0.0,
        max_external: 0.0,
        min_term: f64::INFINITY,
    };
    let mut values = sp.values();
    for _ in 0..samples.max(1) {
        let u = random_positive_state(rng, sp.dim());
        if pds.evaluate(&u, &mut values).is_err() || !values.is_finite() {
            report.max_pair_defect = f64::INFINITY;
            continue;
        }
        for (k, &(i, j)) in sp.entries().iter().enumerate() {
            let (p, d) = (values.prod[k], values.dest[k]);
            report.min_term = report.min_term.min(p).min(d);
            if i == j {
                report.max_diagonal = report.max_diagonal.max(p.abs() + d.abs());
                continue;
            }
            let (p_ji, d_ji) = index.get(&(j, i)).map_or((0.0, 0.0), |&t| (values.prod[t], values.dest[t]));
            report.max_pair_defect = report.max_pair_defect.max((p - d_ji).abs()).max((d - p_ji).abs());
        }
        for i in 0..sp.weighted() {
            report.min_term = report.min_term.min(values.source[i]).min(values.sink[i]);
            report.max_external = report.max_external.max(values.source[i].abs() + values.sink[i].abs());
        }
    }
    report
}

/// PDS defined by a closure over a general sparsity pattern.
pub struct FnPds<F> {
    sparsity: Sparsity,
    conservative: bool,
    terms: F,
}

impl<F> FnPds<F>
where
    F: Fn(&[f64], &mut PdValues) + Send + Sync,
{
    pub fn new(sparsity: Sparsity, conservative: bool, terms: F) -> Self {
        Self { sparsity, conservative, terms }
    }
}

impl<F> ProductionDestructionSystem for FnPds<F>
where
    F: Fn(&[f64], &mut PdValues) + Send + Sync,
{
    fn sparsity(&self) -> &Sparsity {
        &self.sparsity
    }

    fn evaluate(&self, u: &[f64], out: &mut PdValues) -> Result<()> {
        if u.len() != self.sparsity.dim() {
            return Err(Error::param(format!("state has {} entries, expected {}", u.len(), self.sparsity.dim())));
        }
        out.clear();
        (self.terms)(u, out);
        Ok(())
    }

    fn is_conservative(&self) -> bool {
        self.conservative
    }
}

/// Two-species exchange `u1 -> u2` at rate `a`, `u2 -> u1` at rate `b`.
#[derive(Debug, Clone)]
pub struct LinearPds {
    a: f64,
    b: f64,
    sparsity: Sparsity,
}

impl LinearPds {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::param(format!("rates must be positive, got a = {a}, b = {b}")));
        }
        Ok(Self { a, b, sparsity: Sparsity::general(2, vec![(0, 1), (1, 0)]) })
    }

    /// Closed-form solution from `u0` after time `t`.
    pub fn exact(&self, u0: &[f64], t: f64) -> Vec<f64> {
        let mass = u0[0] + u0[1];
        let eq = mass * self.b / (self.a + self.b);
        let u1 = eq + (u0[0] - eq) * (-(self.a + self.b) * t).exp();
        vec![u1, mass - u1]
    }
}

impl ProductionDestructionSystem for LinearPds {
    fn sparsity(&self) -> &Sparsity {
        &self.sparsity
    }

    fn evaluate(&self, u: &[f64], out: &mut PdValues) -> Result<()> {
        // entry 0 = (0, 1), entry 1 = (1, 0)
        out.clear();
        out.prod[0] = self.b * u[1];
        out.prod[1] = self.a * u[0];
        out.dest[0] = out.prod[1];
        out.dest[1] = out.prod[0];
        Ok(())
    }

    fn is_conservative(&self) -> bool {
        true
    }
}

/// Three species: `u1 + u2 -> 2 u2` at rate `u1 u2 / (u1 + 1)`, `u2 -> u3` at rate `0.3 u2`.
#[derive(Debug, Clone)]
pub struct NonlinearPds {
    sparsity: Sparsity,
}

impl Default for NonlinearPds {
    fn default() -> Self {
        Self { sparsity: Sparsity::general(3, vec![(0, 1), (1, 0), (1, 2), (2, 1)]) }
    }
}

impl ProductionDestructionSystem for NonlinearPds {
    fn sparsity(&self) -> &Sparsity {
        &self.sparsity
    }

    fn evaluate(&self, u: &[f64], out: &mut PdValues) -> Result<()> {
        out.clear();
        let r1 = u[0] * u[1] / (u[0] + 1.0);
        let r2 = 0.3 * u[1];
        // (0,1): d_01 = r1; (1,0): p_10 = r1; (1,2): d_12 = r2; (2,1): p_21 = r2
        out.dest[0] = r1;
        out.prod[1] = r1;
        out.dest[2] = r2;
        out.prod[3] = r2;
        Ok(())
    }

    fn is_conservative(&self) -> bool {
        true
    }
}

/// A PDS with initial data, horizon and optional exact solution.
pub struct PdsOdeProblem {
    pub pds: Box<dyn ProductionDestructionSystem + Send + Sync>,
    pub u0: Vec<f64>,
    pub t_end: f64,
    pub exact: Option<Box<dyn Fn(f64) -> Vec<f64> + Send + Sync>>,
}

impl PdsOdeProblem {
    pub fn new(pds: Box<dyn ProductionDestructionSystem + Send + Sync>, u0: Vec<f64>, t_end: f64) -> Result<Self> {
        if u0.len() != pds.dim() {
            return Err(Error::param("initial state has the wrong dimension"));
        }
        if let Some((index, &value)) = u0.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
            return Err(Error::InvalidState { index, value });
        }
        if !(t_end > 0.0) {
            return Err(Error::param("horizon must be positive"));
        }
        Ok(Self { pds, u0, t_end, exact: None })
    }
}

/// Linear exchange fixture with `u0 = (0.9, 0.1)` on `[0, 1]`.
pub fn make_linear_test_pds(a: f64, b: f64) -> Result<PdsOdeProblem> {
    let pds = LinearPds::new(a, b)?;
    let u0 = vec![0.9, 0.1];
    let closed = pds.clone();
    let start = u0.clone();
    let mut problem = PdsOdeProblem::new(Box::new(pds), u0, 1.0)?;
    problem.exact = Some(Box::new(move |t| closed.exact(&start, t)));
    Ok(problem)
}
