//! Property tests for the exact-arithmetic layer: normal forms, cokernels
//! and the Diophantine solver.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use kfano::family::rat;
use kfano::matrix::{cokernel, gcd_all, snf, IntMat};
use kfano::unit_fractions::{unit_fraction_naive, unit_fraction_solutions, UfEquation};

fn small_matrix() -> impl Strategy<Value = IntMat> {
    (1usize..=6, 1usize..=7).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-9i64..=9, r * c)
            .prop_map(move |entries| IntMat::from_i64(r, c, &entries))
    })
}

/// gcd of all k x k minors, the classic invariant-factor oracle.
fn minor_gcd(m: &IntMat, k: usize) -> BigInt {
    fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>, start: usize, n: usize, k: usize) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(out, cur, i + 1, n, k);
                cur.pop();
            }
        }
        rec(&mut out, &mut cur, 0, n, k);
        out
    }
    let mut g = BigInt::zero();
    for rows in combos(m.rows(), k) {
        for cols in combos(m.cols(), k) {
            let mut sub = IntMat::zero(k, k);
            for (i, &r) in rows.iter().enumerate() {
                for (j, &c) in cols.iter().enumerate() {
                    sub.set(i, j, m.get(r, c).clone());
                }
            }
            g = g.gcd(&sub.det());
        }
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snf_reassembles_and_matches_minor_gcds(m in small_matrix()) {
        let s = snf(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert!(s.u.det().abs().is_one());
        prop_assert!(s.v.det().abs().is_one());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if !w[0].is_zero() && !w[1].is_zero() {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
        // invariant factors equal ratios of consecutive minor gcds
        let mut prev = BigInt::one();
        for (k, d) in diag.iter().enumerate() {
            let g = minor_gcd(&m, k + 1);
            if g.is_zero() {
                prop_assert!(d.is_zero());
                break;
            }
            prop_assert_eq!(d * &prev, g.clone());
            prev = g;
        }
    }

    #[test]
    fn cokernel_annihilates_rows(m in small_matrix()) {
        let ck = cokernel(&m);
        for r in 0..m.rows() {
            let img = ck.project(m.row(r));
            prop_assert!(img.is_zero(), "row {} maps to {:?}", r, img);
        }
    }

    #[test]
    fn torsion_product_matches_minor_gcd_for_corank_one(
        entries in proptest::collection::vec(-9i64..=9, 12)
    ) {
        // 3 x 4 matrices: when the cokernel has rank one, the product of
        // the invariant factors equals the gcd of the maximal minors
        let m = IntMat::from_i64(3, 4, &entries);
        let ck = cokernel(&m);
        if ck.group.rank == 1 {
            let minors = m.max_minors().unwrap();
            let g = gcd_all(&minors);
            prop_assert_eq!(ck.group.torsion_order(), g);
        }
    }

    #[test]
    fn unit_fractions_match_naive(
        coeffs in proptest::collection::vec(1i64..=4, 1..=4),
        num in 1i64..=4,
        den in 1i64..=4,
    ) {
        let eq = UfEquation {
            coefficients: coeffs.iter().map(|&x| BigInt::from(x)).collect(),
            target: rat(num, den),
        };
        prop_assert_eq!(unit_fraction_solutions(&eq), unit_fraction_naive(&eq));
    }

    #[test]
    fn unit_fraction_solutions_are_solutions(
        coeffs in proptest::collection::vec(1i64..=5, 1..=3),
        num in 1i64..=3,
        den in 1i64..=3,
    ) {
        let eq = UfEquation {
            coefficients: coeffs.iter().map(|&x| BigInt::from(x)).collect(),
            target: rat(num, den),
        };
        for sol in unit_fraction_solutions(&eq) {
            let total: kfano::family::Rat = eq
                .coefficients
                .iter()
                .zip(sol.iter())
                .map(|(a, &x)| kfano::family::Rat::new(a.clone(), BigInt::from(x)))
                .sum();
            prop_assert_eq!(total, eq.target.clone());
        }
    }
}

/// Determinant by textbook Laplace expansion along the first row, used as
/// an independent oracle for the maximal-minor computation.
fn laplace_det(m: &IntMat) -> BigInt {
    let n = m.rows();
    if n == 1 {
        return m.get(0, 0).clone();
    }
    let mut acc = BigInt::zero();
    for c in 0..n {
        if m.get(0, c).is_zero() {
            continue;
        }
        let mut sub = IntMat::zero(n - 1, n - 1);
        for r in 1..n {
            let mut jj = 0;
            for j in 0..n {
                if j == c {
                    continue;
                }
                sub.set(r - 1, jj, m.get(r, j).clone());
                jj += 1;
            }
        }
        let term = m.get(0, c) * laplace_det(&sub);
        if c % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn max_minors_match_laplace_expansion(
        rows in 4usize..=5,
        seed in proptest::collection::vec(-9i64..=9, 30),
    ) {
        let cols = rows + 1;
        let m = IntMat::from_i64(rows, cols, &seed[..rows * cols]);
        let minors = m.max_minors().unwrap();
        for skip in 0..cols {
            let keep: Vec<usize> = (0..cols).filter(|&c| c != skip).collect();
            let sub = m.select_columns(&keep);
            prop_assert_eq!(minors[skip].clone(), laplace_det(&sub).abs());
        }
    }
}
