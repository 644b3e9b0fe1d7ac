//! Deferred correction on Gauss-Lobatto subnodes.

/// Gauss-Lobatto nodes on `[0, 1]` with `subintervals + 1` points.
pub fn lobatto_nodes(subintervals: usize) -> Vec<f64> {
    match subintervals {
        1 => vec![0.0, 1.0],
        2 => vec![0.0, 0.5, 1.0],
        3 => {
            let s = 1.0 / 5f64.sqrt();
            vec![0.0, 0.5 * (1.0 - s), 0.5 * (1.0 + s), 1.0]
        }
        _ => panic!("no Gauss-Lobatto table for {subintervals} subintervals"),
    }
}

/// Subintervals and iterations for a design order.
pub fn dec_parameters(order: usize) -> (usize, usize) {
    (order.div_ceil(2), order)
}

fn poly_mul_linear(p: &[f64], root: f64, scale: f64) -> Vec<f64> {
    // p(x) * (x - root) * scale, coefficients in increasing degree
    let mut out = vec![0.0; p.len() + 1];
    for (k, &c) in p.iter().enumerate() {
        out[k + 1] += c * scale;
        out[k] -= c * root * scale;
    }
    out
}

/// `theta[m][r]` = integral of the `r`-th Lagrange basis polynomial from 0 to `nodes[m]`.
pub fn theta(nodes: &[f64]) -> Vec<Vec<f64>> {
    let count = nodes.len();
    let basis: Vec<Vec<f64>> = (0..count)
        .map(|r| {
            let mut p = vec![1.0];
            for (k, &t) in nodes.iter().enumerate() {
                if k != r {
                    p = poly_mul_linear(&p, t, 1.0 / (nodes[r] - t));
                }
            }
            p
        })
        .collect();
    let integral = |p: &[f64], x: f64| {
        p.iter()
            .enumerate()
            .map(|(k, c)| c * x.powi(k as i32 + 1) / (k as f64 + 1.0))
            .sum::<f64>()
    };
    nodes
        .iter()
        .map(|&tm| basis.iter().map(|p| integral(p, tm)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_nodes_give_trapezoid() {
        let th = theta(&lobatto_nodes(1));
        assert_eq!(th[0], vec![0.0, 0.0]);
        assert!((th[1][0] - 0.5).abs() < 1e-15 && (th[1][1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn three_nodes_match_simpson_and_partial_integrals() {
        let th = theta(&lobatto_nodes(2));
        let expect_half = [5.0 / 24.0, 1.0 / 3.0, -1.0 / 24.0];
        let expect_full = [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0];
        for r in 0..3 {
            assert!((th[1][r] - expect_half[r]).abs() < 1e-15);
            assert!((th[2][r] - expect_full[r]).abs() < 1e-15);
        }
    }

    #[test]
    fn rows_integrate_polynomials_exactly() {
        for m in 1..=3 {
            let nodes = lobatto_nodes(m);
            let th = theta(&nodes);
            for (row, &tm) in th.iter().zip(&nodes) {
                for deg in 0..nodes.len() {
                    let quad: f64 = row.iter().zip(&nodes).map(|(w, t)| w * t.powi(deg as i32)).sum();
                    let exact = tm.powi(deg as i32 + 1) / (deg as f64 + 1.0);
                    assert!((quad - exact).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn lobatto_weights_are_exact_to_degree_2m_minus_1() {
        let nodes = lobatto_nodes(3);
        let w = &theta(&nodes)[3];
        for deg in 0..6 {
            let quad: f64 = w.iter().zip(&nodes).map(|(w, t)| w * t.powi(deg)).sum();
            assert!((quad - 1.0 / (deg as f64 + 1.0)).abs() < 1e-14, "degree {deg}");
        }
    }
}
