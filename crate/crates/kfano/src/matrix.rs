//! Exact integer matrices: determinants, maximal minors, Smith normal form
//! and cokernel presentations.
//!
//! Everything here works over arbitrary-precision integers. The Smith
//! reduction uses a fixed pivot rule (smallest nonzero absolute value,
//! then lowest row/column index) so that transforms are deterministic
//! and test output is byte-stable.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::abelian::{AbelElem, AbelGroup};
use crate::error::KfanoError;

pub type Int = BigInt;

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    entries: Vec<Int>,
}

impl std::fmt::Debug for IntMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{} ", self.get(r, c))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl IntMat {
    pub fn new(rows: usize, cols: usize, entries: Vec<Int>) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        IntMat {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        Self::new(rows, cols, entries.iter().map(|&e| Int::from(e)).collect())
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![Int::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Int::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Int {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Int) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Int] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Int> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = IntMat::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let v = out.get(r, c) + a * other.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    /// Submatrix keeping the given columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> IntMat {
        let mut out = IntMat::zero(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c).clone());
            }
        }
        out
    }

    /// Exact determinant by fraction-free Gaussian elimination (Bareiss).
    pub fn det(&self) -> Int {
        assert_eq!(self.rows, self.cols, "det needs a square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut m = self.entries.clone();
        let idx = |r: usize, c: usize| r * n + c;
        let mut sign = 1i32;
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if m[idx(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !m[idx(r, k)].is_zero()) else {
                    return Int::zero();
                };
                for c in 0..n {
                    m.swap(idx(k, c), idx(p, c));
                }
                sign = -sign;
            }
            for r in k + 1..n {
                for c in k + 1..n {
                    let v = (&m[idx(k, k)] * &m[idx(r, c)] - &m[idx(r, k)] * &m[idx(k, c)]) / &prev;
                    m[idx(r, c)] = v;
                }
                m[idx(r, k)] = Int::zero();
            }
            prev = m[idx(k, k)].clone();
        }
        let d = m[idx(n - 1, n - 1)].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Absolute values of the maximal minors of a matrix with one more
    /// column than rows; entry `i` deletes column `i`.
    pub fn max_minors(&self) -> Result<Vec<Int>, KfanoError> {
        if self.cols != self.rows + 1 {
            return Err(KfanoError::DimensionMismatch {
                expected: format!("{}x{}", self.rows, self.rows + 1),
                got: format!("{}x{}", self.rows, self.cols),
            });
        }
        let mut out = Vec::with_capacity(self.cols);
        for skip in 0..self.cols {
            let keep: Vec<usize> = (0..self.cols).filter(|&c| c != skip).collect();
            out.push(self.select_columns(&keep).det().abs());
        }
        Ok(out)
    }
}

/// `gcd` of a slice, zero for an all-zero slice.
pub fn gcd_all(values: &[Int]) -> Int {
    values.iter().fold(Int::zero(), |acc, v| acc.gcd(v))
}

/// True iff the entries are coprime (gcd one). Errors on the zero vector.
pub fn is_primitive(v: &[Int]) -> Result<bool, KfanoError> {
    if v.iter().all(|x| x.is_zero()) {
        return Err(KfanoError::ZeroVector);
    }
    Ok(gcd_all(v).is_one())
}

/// Smith normal form: `u * m * v = d` with `u`, `v` unimodular and `d`
/// diagonal with a divisibility chain.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
}

impl SnfResult {
    /// Diagonal entries, including trailing zeros.
    pub fn diagonal(&self) -> Vec<Int> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

pub fn snf(m: &IntMat) -> SnfResult {
    let rows = m.rows();
    let cols = m.cols();
    let mut d = m.clone();
    let mut u = IntMat::identity(rows);
    let mut v = IntMat::identity(cols);

    let n = rows.min(cols);
    for t in 0..n {
        loop {
            // pivot: smallest nonzero |entry| in the trailing block, lowest index
            let mut pivot: Option<(usize, usize)> = None;
            for r in t..rows {
                for c in t..cols {
                    if d.get(r, c).is_zero() {
                        continue;
                    }
                    let better = match pivot {
                        None => true,
                        Some((pr, pc)) => {
                            let cur = d.get(r, c).abs();
                            let best = d.get(pr, pc).abs();
                            cur < best
                        }
                    };
                    if better {
                        pivot = Some((r, c));
                    }
                }
            }
            let Some((pr, pc)) = pivot else {
                // trailing block is zero; done
                return chain_divisibility(SnfResult { u, d, v }, t);
            };
            swap_rows(&mut d, &mut u, t, pr);
            swap_cols(&mut d, &mut v, t, pc);
            if d.get(t, t).is_negative() {
                negate_row(&mut d, &mut u, t);
            }

            let mut clean = true;
            for r in t + 1..rows {
                let q = floor_div(d.get(r, t), d.get(t, t));
                if !q.is_zero() {
                    add_row_multiple(&mut d, &mut u, r, t, &-q);
                }
                if !d.get(r, t).is_zero() {
                    clean = false;
                }
            }
            for c in t + 1..cols {
                let q = floor_div(d.get(t, c), d.get(t, t));
                if !q.is_zero() {
                    add_col_multiple(&mut d, &mut v, c, t, &-q);
                }
                if !d.get(t, c).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
    }
    chain_divisibility(SnfResult { u, d, v }, n)
}

/// Enforce d_1 | d_2 | ... by folding non-dividing pairs, preserving
/// the transform invariant.
fn chain_divisibility(mut s: SnfResult, upto: usize) -> SnfResult {
    let n = upto.min(s.d.rows()).min(s.d.cols());
    loop {
        let mut dirty = false;
        for i in 0..n.saturating_sub(1) {
            let a = s.d.get(i, i).clone();
            let b = s.d.get(i + 1, i + 1).clone();
            if a.is_zero() || b.is_zero() || (&b % &a).is_zero() {
                continue;
            }
            dirty = true;
            // col_i += col_{i+1}, then re-reduce the 2x2 block
            add_col_multiple(&mut s.d, &mut s.v, i, i + 1, &Int::one());
            reduce_block(&mut s, i);
        }
        if !dirty {
            break;
        }
    }
    s
}

/// Local Smith reduction of the 2x2 block at (i, i) after it was disturbed.
fn reduce_block(s: &mut SnfResult, i: usize) {
    let rows = s.d.rows();
    let cols = s.d.cols();
    loop {
        // pivot within the 2x2 block using the same rule
        let mut pivot: Option<(usize, usize)> = None;
        for r in i..(i + 2).min(rows) {
            for c in i..(i + 2).min(cols) {
                if s.d.get(r, c).is_zero() {
                    continue;
                }
                let better = match pivot {
                    None => true,
                    Some((pr, pc)) => s.d.get(r, c).abs() < s.d.get(pr, pc).abs(),
                };
                if better {
                    pivot = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = pivot else { return };
        swap_rows(&mut s.d, &mut s.u, i, pr);
        swap_cols(&mut s.d, &mut s.v, i, pc);
        if s.d.get(i, i).is_negative() {
            negate_row(&mut s.d, &mut s.u, i);
        }
        let mut clean = true;
        for r in i + 1..(i + 2).min(rows) {
            let q = floor_div(s.d.get(r, i), s.d.get(i, i));
            if !q.is_zero() {
                add_row_multiple(&mut s.d, &mut s.u, r, i, &-q);
            }
            if !s.d.get(r, i).is_zero() {
                clean = false;
            }
        }
        for c in i + 1..(i + 2).min(cols) {
            let q = floor_div(s.d.get(i, c), s.d.get(i, i));
            if !q.is_zero() {
                add_col_multiple(&mut s.d, &mut s.v, c, i, &-q);
            }
            if !s.d.get(i, c).is_zero() {
                clean = false;
            }
        }
        if clean {
            if s.d.get(i + 1, i + 1).is_negative() {
                negate_row(&mut s.d, &mut s.u, i + 1);
            }
            return;
        }
    }
}

fn floor_div(a: &Int, b: &Int) -> Int {
    a.div_floor(b)
}

fn swap_rows(d: &mut IntMat, u: &mut IntMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for c in 0..d.cols() {
        let x = d.get(a, c).clone();
        let y = d.get(b, c).clone();
        d.set(a, c, y);
        d.set(b, c, x);
    }
    for c in 0..u.cols() {
        let x = u.get(a, c).clone();
        let y = u.get(b, c).clone();
        u.set(a, c, y);
        u.set(b, c, x);
    }
}

fn swap_cols(d: &mut IntMat, v: &mut IntMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for r in 0..d.rows() {
        let x = d.get(r, a).clone();
        let y = d.get(r, b).clone();
        d.set(r, a, y);
        d.set(r, b, x);
    }
    for r in 0..v.rows() {
        let x = v.get(r, a).clone();
        let y = v.get(r, b).clone();
        v.set(r, a, y);
        v.set(r, b, x);
    }
}

fn negate_row(d: &mut IntMat, u: &mut IntMat, r: usize) {
    for c in 0..d.cols() {
        let x = -d.get(r, c).clone();
        d.set(r, c, x);
    }
    for c in 0..u.cols() {
        let x = -u.get(r, c).clone();
        u.set(r, c, x);
    }
}

/// row_a += q * row_b
fn add_row_multiple(d: &mut IntMat, u: &mut IntMat, a: usize, b: usize, q: &Int) {
    for c in 0..d.cols() {
        let x = d.get(a, c) + q * d.get(b, c);
        d.set(a, c, x);
    }
    for c in 0..u.cols() {
        let x = u.get(a, c) + q * u.get(b, c);
        u.set(a, c, x);
    }
}

/// col_a += q * col_b
fn add_col_multiple(d: &mut IntMat, v: &mut IntMat, a: usize, b: usize, q: &Int) {
    for r in 0..d.rows() {
        let x = d.get(r, a) + q * d.get(r, b);
        d.set(r, a, x);
    }
    for r in 0..v.rows() {
        let x = v.get(r, a) + q * v.get(r, b);
        v.set(r, a, x);
    }
}

/// Cokernel presentation of `Z^cols / im(Mᵀ)` together with the projection
/// sending each canonical basis vector of `Z^cols` to its class.
#[derive(Clone, Debug)]
pub struct Cokernel {
    pub group: AbelGroup,
    /// for each of the `cols` basis vectors, its image in the group
    pub images: Vec<AbelElem>,
    /// coordinates of the quotient: free positions, torsion positions,
    /// all read through y = Vᵀ x
    free_coords: Vec<usize>,
    torsion_coords: Vec<usize>,
    vt: IntMat,
}

impl Cokernel {
    /// Project an arbitrary vector of length `cols` to the group.
    pub fn project(&self, vec: &[Int]) -> AbelElem {
        let n = self.vt.rows();
        assert_eq!(vec.len(), n);
        let mut coords = vec![Int::zero(); n];
        for (i, coord) in coords.iter_mut().enumerate() {
            let mut acc = Int::zero();
            for (j, item) in vec.iter().enumerate() {
                acc += self.vt.get(i, j) * item;
            }
            *coord = acc;
        }
        let free = self
            .free_coords
            .iter()
            .map(|&i| coords[i].clone())
            .collect::<Vec<_>>();
        let torsion = self
            .torsion_coords
            .iter()
            .zip(self.group.torsion.iter())
            .map(|(&i, a)| coords[i].mod_floor(a))
            .collect::<Vec<_>>();
        AbelElem { free, torsion }
    }
}

/// Compute `Z^cols / im(Mᵀ)` for an integer matrix `M` (rows x cols).
///
/// With `U M V = D`, the subgroup im(Mᵀ) ⊆ Z^cols becomes span{d_i e_i}
/// in the coordinates y = Vᵀ x, so the quotient is ⊕ Z/d_i ⊕ Z^{cols-rank}.
pub fn cokernel(m: &IntMat) -> Cokernel {
    let s = snf(m);
    let diag = s.diagonal();
    let cols = m.cols();
    let rank = diag.iter().filter(|x| !x.is_zero()).count();

    let mut torsion = Vec::new();
    let mut torsion_coords = Vec::new();
    for (i, d) in diag.iter().enumerate() {
        if !d.is_zero() && !d.is_one() {
            torsion.push(d.clone());
            torsion_coords.push(i);
        }
    }
    let free_coords: Vec<usize> = (rank..cols).collect();
    let group = AbelGroup {
        rank: cols - rank,
        torsion,
    };
    let vt = s.v.transpose();

    let mut images = Vec::with_capacity(cols);
    for e in 0..cols {
        // y = Vᵀ e_j is column j of Vᵀ
        let coords = vt.column(e);
        let free = free_coords
            .iter()
            .map(|&i| coords[i].clone())
            .collect::<Vec<_>>();
        let torsion = torsion_coords
            .iter()
            .zip(group.torsion.iter())
            .map(|(&i, a)| coords[i].mod_floor(a))
            .collect::<Vec<_>>();
        images.push(AbelElem { free, torsion });
    }

    Cokernel {
        group,
        images,
        free_coords,
        torsion_coords,
        vt,
    }
}

/// Does an integer solution `x` of `A x = b` exist? Solved exactly via SNF.
pub fn has_integral_solution(a: &IntMat, b: &[Int]) -> bool {
    assert_eq!(a.rows(), b.len());
    let s = snf(a);
    // A = U^{-1} D V^{-1}; A x = b ⇔ D (V^{-1} x) = U b. With y free over Z
    // (V unimodular) solvability means U b is divisible by the diagonal and
    // vanishes beyond the rank.
    let ub: Vec<Int> = (0..a.rows())
        .map(|r| {
            let mut acc = Int::zero();
            for c in 0..a.rows() {
                acc += s.u.get(r, c) * &b[c];
            }
            acc
        })
        .collect();
    let diag = s.diagonal();
    for (i, ubi) in ub.iter().enumerate() {
        match diag.get(i) {
            Some(d) if !d.is_zero() => {
                if !(ubi % d).is_zero() {
                    return false;
                }
            }
            _ => {
                if !ubi.is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> Int {
        Int::from(v)
    }

    #[test]
    fn snf_diag_2_3() {
        let m = IntMat::from_i64(2, 2, &[2, 0, 0, 3]);
        let s = snf(&m);
        assert_eq!(s.diagonal(), vec![int(1), int(6)]);
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
    }

    #[test]
    fn snf_identity() {
        let m = IntMat::identity(3);
        let s = snf(&m);
        assert_eq!(s.diagonal(), vec![int(1), int(1), int(1)]);
    }

    #[test]
    fn snf_reassembly_and_divisibility() {
        let m = IntMat::from_i64(3, 4, &[2, 4, 4, 2, -6, 6, 12, 0, 10, -4, -16, 8]);
        let s = snf(&m);
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if !w[0].is_zero() && !w[1].is_zero() {
                assert!((&w[1] % &w[0]).is_zero(), "chain broken: {:?}", diag);
            }
        }
        assert!(s.u.det().abs().is_one());
        assert!(s.v.det().abs().is_one());
    }

    #[test]
    fn cokernel_trivial_example() {
        let m = IntMat::from_i64(2, 3, &[1, 0, 0, 0, 1, 0]);
        let ck = cokernel(&m);
        assert_eq!(ck.group.rank, 1);
        assert!(ck.group.torsion.is_empty());
    }

    #[test]
    fn cokernel_projection_annihilates_rows() {
        let m = IntMat::from_i64(2, 3, &[-1, 1, 0, -1, 0, 1]);
        let ck = cokernel(&m);
        assert_eq!(ck.group.rank, 1);
        assert!(ck.group.torsion.is_empty());
        for r in 0..m.rows() {
            let img = ck.project(m.row(r));
            assert!(img.is_zero());
        }
    }

    #[test]
    fn cokernel_example_type_a() {
        // generator matrix with cokernel Z + (Z/2)^3
        let p = IntMat::from_i64(
            4,
            5,
            &[
                -2, 2, 0, 0, 0, -2, 0, 2, 0, 0, -4, 0, 0, 2, 0, -5, 1, 1, 1, 1,
            ],
        );
        let ck = cokernel(&p);
        assert_eq!(ck.group.rank, 1);
        assert_eq!(ck.group.torsion, vec![int(2), int(2), int(2)]);
    }

    #[test]
    fn max_minors_type_a_example() {
        let p = IntMat::from_i64(
            4,
            5,
            &[
                -2, 2, 0, 0, 0, -2, 0, 2, 0, 0, -4, 0, 0, 2, 0, -5, 1, 1, 1, 1,
            ],
        );
        let mm = p.max_minors().unwrap();
        assert_eq!(mm, vec![int(8), int(8), int(8), int(16), int(8)]);
    }

    #[test]
    fn max_minors_p2() {
        let m = IntMat::from_i64(2, 3, &[-1, 1, 0, -1, 0, 1]);
        assert_eq!(m.max_minors().unwrap(), vec![int(1), int(1), int(1)]);
    }

    #[test]
    fn primitivity() {
        assert!(!is_primitive(&[int(2), int(4), int(6)]).unwrap());
        assert!(is_primitive(&[int(2), int(2), int(4), int(5)]).unwrap());
        assert!(is_primitive(&[int(0), int(0)]).is_err());
    }

    #[test]
    fn integral_solvability() {
        // 2x = 3 has no integer solution; 2x = 4 does
        let a = IntMat::from_i64(1, 1, &[2]);
        assert!(!has_integral_solution(&a, &[int(3)]));
        assert!(has_integral_solution(&a, &[int(4)]));
    }
}
