//! Weighted unit-fraction equations `Σ a_i / x_i = q` over positive
//! integers, the Diophantine core of the enumerations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::collections::BTreeSet;

pub type Int = BigInt;
pub type Rat = BigRational;

/// A weighted unit-fraction equation.
#[derive(Clone, Debug)]
pub struct UfEquation {
    pub coefficients: Vec<Int>,
    pub target: Rat,
}

/// Complete set of positive integer solutions of `Σ a_i / x_i = q`,
/// as tuples in coefficient order.
pub fn unit_fraction_solutions(eq: &UfEquation) -> BTreeSet<Vec<i64>> {
    let lowers = vec![1i64; eq.coefficients.len()];
    unit_fraction_solutions_bounded(eq, &lowers)
}

/// Like [`unit_fraction_solutions`] with per-variable lower bounds.
///
/// The recursion branches on which variable attains the largest term
/// value: some term is at least `rem / k`, so that variable is bounded by
/// `a_i k / rem`. Ties produce the same leaf through several branches;
/// the result set is deduplicated.
pub fn unit_fraction_solutions_bounded(eq: &UfEquation, lowers: &[i64]) -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    if eq.target <= Rat::zero() || eq.coefficients.is_empty() {
        return out;
    }
    assert_eq!(eq.coefficients.len(), lowers.len());
    let n = eq.coefficients.len();
    let mut assignment = vec![0i64; n];
    let unassigned: Vec<usize> = (0..n).collect();
    let max_term = eq.target.clone() + Rat::from(Int::from(1));
    solve_rec(
        &eq.coefficients,
        lowers,
        &unassigned,
        eq.target.clone(),
        max_term,
        &mut assignment,
        &mut out,
    );
    out
}

fn solve_rec(
    coeffs: &[Int],
    lowers: &[i64],
    unassigned: &[usize],
    rem: Rat,
    max_term: Rat,
    assignment: &mut Vec<i64>,
    out: &mut BTreeSet<Vec<i64>>,
) {
    if rem <= Rat::zero() {
        return;
    }
    if unassigned.len() == 1 {
        let i = unassigned[0];
        // a_i / x = rem exactly
        let x = Rat::from(coeffs[i].clone()) / &rem;
        if x.is_integer() && x.numer().is_positive() && rem <= max_term {
            if let Ok(v) = i64::try_from(x.to_integer()) {
                if v >= lowers[i] {
                    assignment[i] = v;
                    out.insert(assignment.clone());
                    assignment[i] = 0;
                }
            }
        }
        return;
    }
    let k = Int::from(unassigned.len() as i64);
    for (pos, &i) in unassigned.iter().enumerate() {
        // branch: x_i realizes the maximum term, so a_i/x_i >= rem/k
        let bound = Rat::from(&coeffs[i] * &k) / &rem;
        let hi = bound.floor().to_integer();
        let hi = i64::try_from(hi).unwrap_or(i64::MAX);
        let mut rest: Vec<usize> = unassigned.to_vec();
        rest.remove(pos);
        for x in lowers[i]..=hi {
            let term = Rat::new(coeffs[i].clone(), Int::from(x));
            if term > max_term {
                continue;
            }
            if &term * Rat::from(k.clone()) < rem {
                break;
            }
            let rem2 = &rem - &term;
            if rem2.is_negative() || rem2.is_zero() {
                continue;
            }
            assignment[i] = x;
            solve_rec(coeffs, lowers, &rest, rem2, term.clone(), assignment, out);
        }
        assignment[i] = 0;
    }
}

/// Independent cross-check used by the property tests: the textbook
/// recursion on the smallest variable, which is bounded by `(Σ a_j) / q`.
pub fn unit_fraction_naive(eq: &UfEquation) -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    if eq.target <= Rat::zero() || eq.coefficients.is_empty() {
        return out;
    }
    let n = eq.coefficients.len();
    let mut assignment = vec![0i64; n];
    let unassigned: Vec<usize> = (0..n).collect();
    naive_rec(
        &eq.coefficients,
        &unassigned,
        eq.target.clone(),
        1,
        &mut assignment,
        &mut out,
    );
    out
}

fn naive_rec(
    coeffs: &[Int],
    unassigned: &[usize],
    rem: Rat,
    min_value: i64,
    assignment: &mut Vec<i64>,
    out: &mut BTreeSet<Vec<i64>>,
) {
    if rem <= Rat::zero() {
        return;
    }
    if unassigned.len() == 1 {
        let i = unassigned[0];
        let x = Rat::from(coeffs[i].clone()) / &rem;
        if x.is_integer() && x.numer().is_positive() {
            if let Ok(v) = i64::try_from(x.to_integer()) {
                if v >= min_value {
                    assignment[i] = v;
                    out.insert(assignment.clone());
                    assignment[i] = 0;
                }
            }
        }
        return;
    }
    // the smallest remaining variable m satisfies sum a_j / m >= rem
    let total: Int = unassigned.iter().map(|&i| coeffs[i].clone()).sum();
    let bound = (Rat::from(total) / &rem).floor().to_integer();
    let bound = i64::try_from(bound).unwrap_or(0);
    for (pos, &i) in unassigned.iter().enumerate() {
        let mut rest: Vec<usize> = unassigned.to_vec();
        rest.remove(pos);
        for m in min_value..=bound {
            let rem2 = &rem - Rat::new(coeffs[i].clone(), Int::from(m));
            if rem2 <= Rat::zero() {
                continue;
            }
            assignment[i] = m;
            naive_rec(coeffs, &rest, rem2, m, assignment, out);
        }
        assignment[i] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::rat;

    fn eq(coeffs: &[i64], num: i64, den: i64) -> UfEquation {
        UfEquation {
            coefficients: coeffs.iter().map(|&c| Int::from(c)).collect(),
            target: rat(num, den),
        }
    }

    #[test]
    fn two_ones_target_one() {
        let sols = unit_fraction_solutions(&eq(&[1, 1], 1, 1));
        assert_eq!(sols, BTreeSet::from([vec![2, 2]]));
    }

    #[test]
    fn single_forced() {
        let sols = unit_fraction_solutions(&eq(&[1], 1, 3));
        assert_eq!(sols, BTreeSet::from([vec![3]]));
    }

    #[test]
    fn classic_three_ones() {
        let sols = unit_fraction_solutions(&eq(&[1, 1, 1], 1, 1));
        let mut expected = BTreeSet::new();
        for perm in [
            [2, 3, 6],
            [2, 6, 3],
            [3, 2, 6],
            [3, 6, 2],
            [6, 2, 3],
            [6, 3, 2],
            [2, 4, 4],
            [4, 2, 4],
            [4, 4, 2],
            [3, 3, 3],
        ] {
            expected.insert(perm.to_vec());
        }
        assert_eq!(sols, expected);
    }

    #[test]
    fn weighted_matches_naive() {
        for (coeffs, num, den) in [
            (vec![1i64, 2], 3, 4),
            (vec![2, 3, 5], 2, 1),
            (vec![1, 1, 2], 5, 6),
            (vec![3, 1, 1, 1], 3, 2),
        ] {
            let e = eq(&coeffs, num, den);
            assert_eq!(
                unit_fraction_solutions(&e),
                unit_fraction_naive(&e),
                "mismatch for {:?} = {}/{}",
                coeffs,
                num,
                den
            );
        }
    }
}
