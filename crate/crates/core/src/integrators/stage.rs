use super::linear::{solve_banded, PatankarLinearSystem, PatankarMatrix};
use crate::error::Result;
use crate::pds::{Layout, PdValues, Sparsity};

/// Smallest admissible Patankar weight denominator.
pub const DENOMINATOR_FLOOR: f64 = 1e-300;

/// `coef * (production - destruction)` evaluated at one state.
#[derive(Clone, Copy)]
pub(crate) struct Term<'a> {
    pub coef: f64,
    pub values: &'a PdValues,
}

pub(crate) struct StageSolution {
    pub state: Vec<f64>,
    /// `state / denominators` on the weighted block
    pub weights: Option<Vec<f64>>,
    pub flows: Option<Vec<f64>>,
}

/// Replaces denominators below the floor and returns how many were replaced.
pub(crate) fn clamp_denominators(den: &mut [f64]) -> usize {
    let mut clamped = 0;
    for d in den.iter_mut() {
        if !(*d >= DENOMINATOR_FLOOR) {
            *d = DENOMINATOR_FLOOR;
            clamped += 1;
        }
    }
    clamped
}

/// Solves `x = base + dt * sum_t coef_t (P_t w - D_t w)` where the weights
/// `w = x / denominators` multiply production by the donor and destruction by
/// the receiver for positive coefficients, and the other way round for
/// negative ones. Without denominators every weight is one and the update is
/// explicit.
pub(crate) fn solve_stage(
    sparsity: &Sparsity,
    base: &[f64],
    dt: f64,
    terms: &[Term<'_>],
    denominators: Option<&[f64]>,
    want_flows: bool,
) -> Result<StageSolution> {
    let dim = sparsity.dim();
    let nw = sparsity.weighted();
    let mut state = base.to_vec();

    let Some(den) = denominators else {
        for t in terms {
            for (i, (s, k)) in t.values.source.iter().zip(&t.values.sink).enumerate() {
                state[i] += dt * t.coef * (s - k);
            }
            for (e, &(i, _)) in sparsity.entries().iter().enumerate() {
                state[i] += dt * t.coef * (t.values.prod[e] - t.values.dest[e]);
            }
        }
        let flows = want_flows.then(|| flows(sparsity, dt, terms, None)).flatten();
        return Ok(StageSolution { state, weights: None, flows });
    };

    let mut matrix = match sparsity.layout() {
        Layout::Tridiagonal { periodic } => PatankarMatrix::identity_tridiagonal(nw, periodic),
        Layout::General => PatankarMatrix::identity_dense(nw),
    };
    let mut rhs = base[..nw].to_vec();
    // column sums, with diagonal contributions paired against the transposed
    // off-diagonal so that exactly balanced pairs cancel before scaling
    let mut sums = vec![1.0; nw];
    {
        let mut add = |i: usize, j: usize, v: f64| match &mut matrix {
            PatankarMatrix::Tridiagonal { sub, diag, sup, .. } => {
                if i == j {
                    diag[i] += v;
                } else if j == (i + 1) % nw {
                    sup[i] += v;
                } else {
                    debug_assert_eq!(j, (i + nw - 1) % nw);
                    sub[i] += v;
                }
            }
            PatankarMatrix::Dense { n, data } => data[i * *n + j] += v,
        };
        for t in terms {
            let h = dt * t.coef.abs();
            let positive = t.coef >= 0.0;
            for (e, &(i, j)) in sparsity.entries().iter().enumerate() {
                let (p, d) = (t.values.prod[e], t.values.dest[e]);
                let back = sparsity.transpose(e);
                let (diag_part, off_part) = if positive { (d, p) } else { (p, d) };
                add(i, i, h * diag_part / den[i]);
                add(i, j, -h * off_part / den[j]);
                let paired = back.map_or(0.0, |b| if positive { t.values.prod[b] } else { t.values.dest[b] });
                sums[i] += h * (diag_part - paired) / den[i];
                if back.is_none() {
                    sums[j] -= h * off_part / den[j];
                }
            }
            for i in 0..nw {
                let (s, k) = (t.values.source[i], t.values.sink[i]);
                let (weighted, explicit) = if positive { (k, s) } else { (s, k) };
                rhs[i] += h * explicit;
                add(i, i, h * weighted / den[i]);
                sums[i] += h * weighted / den[i];
            }
        }
    }
    let x = solve_banded(&PatankarLinearSystem { matrix, rhs, column_sums: Some(sums) })?;
    state[..nw].copy_from_slice(&x);
    for t in terms {
        for i in nw..dim {
            state[i] += dt * t.coef * (t.values.source[i] - t.values.sink[i]);
        }
    }
    let weights: Vec<f64> = (0..nw).map(|i| state[i] / den[i]).collect();
    let flows = want_flows.then(|| flows(sparsity, dt, terms, Some(&weights))).flatten();
    Ok(StageSolution { state, weights: Some(weights), flows })
}

/// Amount moved across each interface of a tridiagonal pattern during the
/// stage, `n + 1` values: entry `k` is the transfer from cell `k - 1` into
/// cell `k` (from outside for `k = 0` and to outside for `k = n`).
fn flows(sparsity: &Sparsity, dt: f64, terms: &[Term<'_>], weights: Option<&[f64]>) -> Option<Vec<f64>> {
    let Layout::Tridiagonal { periodic } = sparsity.layout() else { return None };
    let n = sparsity.weighted();
    let w = |i: usize| weights.map_or(1.0, |w| w[i]);
    let mut out = vec![0.0; n + 1];
    for t in terms {
        let c = t.coef;
        for (e, &(i, j)) in sparsity.entries().iter().enumerate() {
            if j != (i + 1) % n || (!periodic && j == 0) {
                continue;
            }
            let (p, d) = (t.values.prod[e], t.values.dest[e]);
            let moved = if c >= 0.0 { d * w(i) - p * w(j) } else { d * w(j) - p * w(i) };
            out[i + 1] += dt * c * moved;
        }
        if !periodic {
            let ext = |i: usize| {
                let (s, k) = (t.values.source[i], t.values.sink[i]);
                if c >= 0.0 {
                    s - k * w(i)
                } else {
                    s * w(i) - k
                }
            };
            out[0] += dt * c * ext(0);
            out[n] -= dt * c * ext(n - 1);
        }
    }
    if periodic {
        out[0] = out[n];
    }
    Some(out)
}
