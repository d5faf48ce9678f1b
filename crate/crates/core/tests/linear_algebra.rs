use proptest::prelude::*;

use sdof_core::rational::{det, rank, solve, solve_square_i128, SolveFailure};
use sdof_core::{RatMatrix, Rational};

fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-6i64..=6, cols), rows)
}

fn any_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| int_matrix(r, c))
}

// Cofactor expansion along the first row; fine for n <= 5.
fn cofactor_det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 1 {
        return m[0][0] as i128;
    }
    let mut total = 0i128;
    for c in 0..n {
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != c)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect();
        let sign = if c % 2 == 0 { 1 } else { -1 };
        total += sign * m[0][c] as i128 * cofactor_det(&minor);
    }
    total
}

// Rank as the size of the largest non-singular square minor.
fn minor_rank(m: &[Vec<i64>]) -> usize {
    let (rows, cols) = (m.len(), m[0].len());
    for size in (1..=rows.min(cols)).rev() {
        for rs in subsets(rows, size) {
            for cs in subsets(cols, size) {
                let sub: Vec<Vec<i64>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| m[i][j]).collect())
                    .collect();
                if cofactor_det(&sub) != 0 {
                    return size;
                }
            }
        }
    }
    0
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

proptest! {
    #[test]
    fn rank_matches_transpose_and_minors(m in any_matrix()) {
        let a = RatMatrix::from_i64_rows(&m);
        let r = rank(&a);
        prop_assert_eq!(r, rank(&a.transpose()));
        prop_assert_eq!(r, minor_rank(&m));
    }

    #[test]
    fn det_matches_cofactors(m in (1usize..=5).prop_flat_map(|n| int_matrix(n, n))) {
        let got = det(&RatMatrix::from_i64_rows(&m)).unwrap();
        prop_assert_eq!(got, Rational::from_i128_ratio(cofactor_det(&m), 1));
    }

    #[test]
    fn det_is_multiplicative(a in int_matrix(3, 3), b in int_matrix(3, 3)) {
        let (ma, mb) = (RatMatrix::from_i64_rows(&a), RatMatrix::from_i64_rows(&b));
        let prod = ma.mul(&mb).unwrap();
        prop_assert_eq!(det(&prod).unwrap(), &det(&ma).unwrap() * &det(&mb).unwrap());
    }

    #[test]
    fn solve_reproduces_rhs(m in any_matrix(), seed in prop::collection::vec(-9i64..=9, 5)) {
        let a = RatMatrix::from_i64_rows(&m);
        let b: Vec<Rational> = seed.iter().take(a.rows()).map(|&v| Rational::from_integer(v)).collect();
        if let Ok(x) = solve(&a, &b).unwrap() {
            prop_assert_eq!(a.mul_vec(&x).unwrap(), b);
        }
    }

    #[test]
    fn consistent_systems_are_never_rejected(m in any_matrix(), x in prop::collection::vec(-4i64..=4, 5)) {
        let a = RatMatrix::from_i64_rows(&m);
        let x: Vec<Rational> = x.iter().take(a.cols()).map(|&v| Rational::from_integer(v)).collect();
        let b = a.mul_vec(&x).unwrap();
        match solve(&a, &b).unwrap() {
            Ok(got) => {
                prop_assert_eq!(rank(&a), a.cols());
                prop_assert_eq!(got, x);
            }
            Err(fail) => {
                prop_assert_eq!(fail, SolveFailure::Underdetermined);
                prop_assert!(rank(&a) < a.cols());
            }
        }
    }

    #[test]
    fn integer_fast_path_agrees(m in (1usize..=5).prop_flat_map(|n| int_matrix(n, n)), rhs in prop::collection::vec(-9i64..=9, 5)) {
        let n = m.len();
        let rows: Vec<&[i64]> = m.iter().map(Vec::as_slice).collect();
        let fast = solve_square_i128(&rows, &rhs[..n]).expect("small entries cannot overflow");
        let a = RatMatrix::from_i64_rows(&m);
        let b: Vec<Rational> = rhs[..n].iter().map(|&v| Rational::from_integer(v)).collect();
        match fast {
            Some(sol) => {
                let x: Vec<Rational> = sol.numerators.iter().map(|&p| Rational::from_i128_ratio(p, sol.denom)).collect();
                prop_assert_eq!(a.mul_vec(&x).unwrap(), b);
            }
            None => prop_assert!(rank(&a) < n),
        }
    }
}

/// Rows `[1, e_j]` for j = 1..n-1, then `[K, 1, ..., 1]`.
fn m_matrix(n: usize, k: i64) -> RatMatrix {
    let mut rows: Vec<Vec<i64>> = (1..n)
        .map(|j| {
            let mut row = vec![0; n];
            row[0] = 1;
            row[j] = 1;
            row
        })
        .collect();
    let mut last = vec![1; n];
    last[0] = k;
    rows.push(last);
    RatMatrix::from_i64_rows(&rows)
}

#[test]
fn m_matrix_determinant_recursion() {
    for k in 2..=10i64 {
        let mut prev = Rational::from_integer(1 - k);
        assert_eq!(det(&m_matrix(2, k)).unwrap(), prev);
        for n in 3..=10usize {
            let sign = Rational::from_integer(if n % 2 == 0 { 1 } else { -1 });
            let next = &sign - &prev;
            assert_eq!(det(&m_matrix(n, k)).unwrap(), next, "n={n} K={k}");
            prev = next;
        }
        // At n = K the matrix is non-singular with determinant (-1)^(K+1).
        let want = if k % 2 == 0 { -1 } else { 1 };
        assert_eq!(
            det(&m_matrix(k as usize, k)).unwrap(),
            Rational::from_integer(want)
        );
    }
}

#[test]
fn parse_and_display_round_trip() {
    for s in ["0", "-3/4", "6/8", "7"] {
        let r: Rational = s.parse().unwrap();
        assert_eq!(r.to_string().parse::<Rational>().unwrap(), r);
    }
    assert_eq!("6/8".parse::<Rational>().unwrap(), Rational::new(3, 4));
    assert!("1/0".parse::<Rational>().is_err());
}
