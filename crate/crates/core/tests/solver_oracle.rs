//! The banded Patankar solver against a dense LU factorization.

use nalgebra::{DMatrix, DVector};
use patankar::integrators::{solve_banded, PatankarLinearSystem, PatankarMatrix};
use proptest::prelude::*;

/// Off-diagonal magnitudes over five decades; the diagonal is one plus the
/// column's off-diagonal mass plus a nonnegative surplus.
fn magnitude() -> impl Strategy<Value = f64> {
    (-2.0f64..3.0).prop_map(|e| 10f64.powf(e))
}

fn tridiagonal(n: usize, periodic: bool, sub: &[f64], sup: &[f64], surplus: &[f64]) -> PatankarMatrix {
    let sub: Vec<f64> = (0..n).map(|i| if i > 0 || (periodic && n > 2) { -sub[i] } else { 0.0 }).collect();
    let sup: Vec<f64> = (0..n).map(|i| if i + 1 < n || (periodic && n > 2) { -sup[i] } else { 0.0 }).collect();
    // column j collects sup[j-1] (row j-1) and sub[j+1] (row j+1)
    let diag = (0..n)
        .map(|j| {
            let above = if j > 0 { sup[j - 1] } else if periodic && n > 2 { sup[n - 1] } else { 0.0 };
            let below = if j + 1 < n { sub[j + 1] } else if periodic && n > 2 { sub[0] } else { 0.0 };
            1.0 + surplus[j] - above - below
        })
        .collect();
    PatankarMatrix::Tridiagonal { sub, diag, sup, periodic: periodic && n > 2 }
}

fn lu_solve(matrix: &PatankarMatrix, rhs: &[f64]) -> Vec<f64> {
    let dense = matrix.to_dense();
    let n = dense.len();
    let m = DMatrix::from_fn(n, n, |i, j| dense[i][j]);
    let x = m.lu().solve(&DVector::from_column_slice(rhs)).expect("nonsingular");
    x.iter().copied().collect()
}

fn check(matrix: PatankarMatrix, rhs: Vec<f64>) -> Result<(), TestCaseError> {
    prop_assert!(matrix.is_patankar());
    let oracle = lu_solve(&matrix, &rhs);
    let x = solve_banded(&PatankarLinearSystem::new(matrix, rhs)).unwrap();
    let scale = oracle.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for (a, b) in x.iter().zip(&oracle) {
        prop_assert!((a - b).abs() <= 1e-12 * scale, "{a} vs {b}");
        prop_assert!(*a >= 0.0);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn tridiagonal_matches_lu(
        n in 1usize..=16,
        periodic in any::<bool>(),
        sub in prop::collection::vec(magnitude(), 16),
        sup in prop::collection::vec(magnitude(), 16),
        surplus in prop::collection::vec(0.0f64..2.0, 16),
        rhs in prop::collection::vec(magnitude(), 16),
    ) {
        check(tridiagonal(n, periodic, &sub, &sup, &surplus), rhs[..n].to_vec())?;
    }

    #[test]
    fn dense_matches_lu(
        n in 1usize..=16,
        off in prop::collection::vec(prop::option::weighted(0.6, magnitude()), 256),
        surplus in prop::collection::vec(0.0f64..2.0, 16),
        rhs in prop::collection::vec(magnitude(), 16),
    ) {
        let mut data = vec![0.0; n * n];
        for j in 0..n {
            let mut column = 0.0;
            for i in (0..n).filter(|&i| i != j) {
                let v = off[i * 16 + j].unwrap_or(0.0);
                data[i * n + j] = -v;
                column += v;
            }
            data[j * n + j] = 1.0 + surplus[j] + column;
        }
        check(PatankarMatrix::Dense { n, data }, rhs[..n].to_vec())?;
    }
}

#[test]
fn cyclic_hand_example() {
    // columns sum to one; the solution of M x = b keeps the total of b
    let matrix = PatankarMatrix::Tridiagonal {
        sub: vec![-1.0, -2.0, -0.5, -1.0],
        diag: vec![4.0, 2.5, 3.5, 2.5],
        sup: vec![-1.0, -1.5, -0.5, -1.0],
        periodic: true,
    };
    let rhs = vec![1.0, 2.0, 3.0, 4.0];
    let x = solve_banded(&PatankarLinearSystem::new(matrix.clone(), rhs.clone())).unwrap();
    let oracle = lu_solve(&matrix, &rhs);
    for (a, b) in x.iter().zip(&oracle) {
        approx::assert_relative_eq!(*a, *b, max_relative = 1e-13);
    }
    approx::assert_relative_eq!(x.iter().sum::<f64>(), 10.0, max_relative = 1e-14);
}
