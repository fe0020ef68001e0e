//! Family input data and the generator-matrix constructions.
//!
//! A family is given by its type tag, the degree vector `d = (d_3, ..., d_n)`
//! of the plane curves, the exponents `l_ij` and the shifts `d_ij`. The three
//! constructions assemble an `(n+1) x (n+2)` generator matrix `P` whose
//! columns are the rays of the ambient fake weighted projective space.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::abelian::{AbelElem, AbelGroup};
use crate::error::KfanoError;
use crate::matrix::{cokernel, gcd_all, IntMat};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyType {
    A,
    B,
    C,
}

impl std::fmt::Display for FamilyType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FamilyType::A => write!(f, "A"),
            FamilyType::B => write!(f, "B"),
            FamilyType::C => write!(f, "C"),
        }
    }
}

/// Label of a Cox-ring variable / generator-matrix column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarLabel {
    /// `T_{ij}`: the j-th divisor over the curve with index i.
    T(u8, u8),
    /// The extra free variable of Type A.
    S1,
}

impl std::fmt::Display for VarLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VarLabel::T(i, j) => write!(f, "T{}{}", i, j),
            VarLabel::S1 => write!(f, "S1"),
        }
    }
}

/// Discrete defining data of a family.
///
/// `l` and `shifts` run over the data slots in canonical order:
/// Type A: (01, 11, ..., n1); Type B: (01, 02, 11, ..., n1);
/// Type C: (01, 11, 21, 31, 32, 41, ..., n1).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FamilyInput {
    pub type_tag: FamilyType,
    pub d: Vec<i64>,
    pub l: Vec<i64>,
    pub shifts: Vec<i64>,
}

impl FamilyInput {
    pub fn new(type_tag: FamilyType, d: Vec<i64>, l: Vec<i64>, shifts: Vec<i64>) -> Self {
        FamilyInput {
            type_tag,
            d,
            l,
            shifts,
        }
    }

    /// Number of curves: the lines are 0, 1, 2 and the degree vector
    /// supplies 3..=n.
    pub fn n(&self) -> usize {
        self.d.len() + 2
    }

    /// Data slots in canonical order (the Type A free column S1 carries
    /// no data and is not a slot).
    pub fn slot_labels(&self) -> Vec<VarLabel> {
        let n = self.n() as u8;
        match self.type_tag {
            FamilyType::A => (0..=n).map(|i| VarLabel::T(i, 1)).collect(),
            FamilyType::B => {
                let mut v = vec![VarLabel::T(0, 1), VarLabel::T(0, 2)];
                v.extend((1..=n).map(|i| VarLabel::T(i, 1)));
                v
            }
            FamilyType::C => {
                let mut v = vec![
                    VarLabel::T(0, 1),
                    VarLabel::T(1, 1),
                    VarLabel::T(2, 1),
                    VarLabel::T(3, 1),
                    VarLabel::T(3, 2),
                ];
                v.extend((4..=n).map(|i| VarLabel::T(i, 1)));
                v
            }
        }
    }

    /// Generator-matrix column labels (slots plus S1 for Type A).
    pub fn column_labels(&self) -> Vec<VarLabel> {
        let mut v = self.slot_labels();
        if self.type_tag == FamilyType::A {
            v.push(VarLabel::S1);
        }
        v
    }

    pub fn slot_index(&self, label: VarLabel) -> Option<usize> {
        self.slot_labels().iter().position(|&l| l == label)
    }

    pub fn l_of(&self, label: VarLabel) -> i64 {
        self.l[self.slot_index(label).expect("slot exists")]
    }

    pub fn shift_of(&self, label: VarLabel) -> i64 {
        self.shifts[self.slot_index(label).expect("slot exists")]
    }

    /// Curve degree d_i (1 for the lines i = 0, 1, 2).
    pub fn curve_degree(&self, i: u8) -> i64 {
        if i <= 2 {
            1
        } else {
            self.d[i as usize - 3]
        }
    }

    pub fn validate(&self) -> Result<(), KfanoError> {
        if self.d.is_empty() {
            return Err(KfanoError::EmptyDegreeVector);
        }
        if self.d.iter().any(|&x| x < 1) {
            return Err(KfanoError::NonPositiveDegree);
        }
        if self.type_tag == FamilyType::C && self.curve_degree(3) < 2 {
            return Err(KfanoError::TypeCNeedsHigherDegree);
        }
        let labels = self.slot_labels();
        if self.l.len() != labels.len() || self.shifts.len() != labels.len() {
            return Err(KfanoError::DimensionMismatch {
                expected: format!("{} slots", labels.len()),
                got: format!("{} l, {} shifts", self.l.len(), self.shifts.len()),
            });
        }
        for (idx, &label) in labels.iter().enumerate() {
            if self.l[idx] < 1 {
                return Err(KfanoError::NonPositiveExponent {
                    label: label.to_string(),
                });
            }
            if self.shifts[idx] < 0 {
                return Err(KfanoError::NegativeShift {
                    label: label.to_string(),
                });
            }
        }
        Ok(())
    }

    /// d_ij / l_ij as an exact rational for a slot.
    pub fn slot_ratio(&self, label: VarLabel) -> Rat {
        rat(self.shift_of(label), self.l_of(label))
    }
}

/// The base matrix `B = [u_0, ..., u_n]` of the ambient weighted
/// projective plane model: `u_0 = (-1, -1, -d_3, ..., -d_n)`, `u_i = e_i`.
pub fn base_matrix(d: &[i64]) -> Result<IntMat, KfanoError> {
    if d.is_empty() {
        return Err(KfanoError::EmptyDegreeVector);
    }
    if d.iter().any(|&x| x < 1) {
        return Err(KfanoError::NonPositiveDegree);
    }
    let n = d.len() + 2;
    let mut b = IntMat::zero(n, n + 1);
    b.set(0, 0, Int::from(-1));
    b.set(1, 0, Int::from(-1));
    for (k, &dk) in d.iter().enumerate() {
        b.set(2 + k, 0, Int::from(-dk));
    }
    for i in 1..=n {
        b.set(i - 1, i, Int::one());
    }
    Ok(b)
}

/// u_i as a column vector of length n (u_0 has the degree vector folded in).
fn ray_u(i: u8, d: &[i64]) -> Vec<Int> {
    let n = d.len() + 2;
    let mut u = vec![Int::zero(); n];
    if i == 0 {
        u[0] = Int::from(-1);
        u[1] = Int::from(-1);
        for (k, &dk) in d.iter().enumerate() {
            u[2 + k] = Int::from(-dk);
        }
    } else {
        u[i as usize - 1] = Int::one();
    }
    u
}

/// A validated generator matrix together with its column labels.
#[derive(Clone, Debug)]
pub struct GeneratorMatrix {
    pub mat: IntMat,
    pub labels: Vec<VarLabel>,
}

impl GeneratorMatrix {
    pub fn column_of(&self, label: VarLabel) -> Vec<Int> {
        let idx = self
            .labels
            .iter()
            .position(|&l| l == label)
            .expect("label exists");
        self.mat.column(idx)
    }
}

/// The per-type strict positivity inequality of the constructions;
/// equivalent to all maximal minors being nonzero with coherent signs.
pub fn positivity_value(input: &FamilyInput) -> Rat {
    // Returns the quantity that must be positive:
    //  A: d01/l01 - d11/l11 - d21/l21 - sum d_j d_j1/l_j1
    //  B: min(d02/l02 - S, S - d01/l01)
    //  C: min(d3 d32/l32 - E, E - d3 d31/l31)
    match input.type_tag {
        FamilyType::A => {
            let mut v = input.slot_ratio(VarLabel::T(0, 1));
            v -= input.slot_ratio(VarLabel::T(1, 1));
            v -= input.slot_ratio(VarLabel::T(2, 1));
            for i in 3..=input.n() as u8 {
                v -= Rat::from(Int::from(input.curve_degree(i)))
                    * input.slot_ratio(VarLabel::T(i, 1));
            }
            v
        }
        FamilyType::B => {
            let mut s = input.slot_ratio(VarLabel::T(1, 1));
            s += input.slot_ratio(VarLabel::T(2, 1));
            for i in 3..=input.n() as u8 {
                s += Rat::from(Int::from(input.curve_degree(i)))
                    * input.slot_ratio(VarLabel::T(i, 1));
            }
            let upper = input.slot_ratio(VarLabel::T(0, 2)) - &s;
            let lower = s - input.slot_ratio(VarLabel::T(0, 1));
            upper.min(lower)
        }
        FamilyType::C => {
            let d3 = Rat::from(Int::from(input.curve_degree(3)));
            let mut e = input.slot_ratio(VarLabel::T(0, 1));
            e -= input.slot_ratio(VarLabel::T(1, 1));
            e -= input.slot_ratio(VarLabel::T(2, 1));
            for i in 4..=input.n() as u8 {
                e -= Rat::from(Int::from(input.curve_degree(i)))
                    * input.slot_ratio(VarLabel::T(i, 1));
            }
            let upper = &d3 * input.slot_ratio(VarLabel::T(3, 2)) - &e;
            let lower = e - &d3 * input.slot_ratio(VarLabel::T(3, 1));
            upper.min(lower)
        }
    }
}

/// Assemble and validate the generator matrix of a family.
pub fn assemble_p(input: &FamilyInput) -> Result<GeneratorMatrix, KfanoError> {
    input.validate()?;
    let n = input.n();
    let labels = input.column_labels();
    let mut mat = IntMat::zero(n + 1, n + 2);

    for (col, &label) in labels.iter().enumerate() {
        match label {
            VarLabel::S1 => {
                mat.set(n, col, Int::one());
            }
            VarLabel::T(i, j) => {
                let l = Int::from(input.l_of(label));
                let u = ray_u(i, &input.d);
                for (r, ur) in u.iter().enumerate() {
                    mat.set(r, col, ur * &l);
                }
                // bottom entry: shifts over the 0-line enter negated
                let shift = Int::from(input.shift_of(label));
                let signed = if i == 0 { -shift } else { shift };
                mat.set(n, col, signed);
                let _ = j;
            }
        }
    }

    // primitive columns
    for (col, &label) in labels.iter().enumerate() {
        let column = mat.column(col);
        if !crate::matrix::is_primitive(&column).map_err(|_| KfanoError::NonPrimitiveColumn {
            label: label.to_string(),
        })? {
            return Err(KfanoError::NonPrimitiveColumn {
                label: label.to_string(),
            });
        }
    }
    // pairwise distinct columns
    for a in 0..labels.len() {
        for b in a + 1..labels.len() {
            if mat.column(a) == mat.column(b) {
                return Err(KfanoError::DuplicateColumns {
                    a: labels[a].to_string(),
                    b: labels[b].to_string(),
                });
            }
        }
    }
    // per-type positivity
    let pv = positivity_value(input);
    if pv <= Rat::zero() {
        return Err(KfanoError::PositivityViolated {
            which: format!("type {} inequality value {}", input.type_tag, pv),
        });
    }

    Ok(GeneratorMatrix { mat, labels })
}

fn rat_int(i: &Int) -> Rat {
    Rat::from(i.clone())
}

/// Fake weight vector via the per-type closed forms, in column order.
fn fake_weights_closed_form(input: &FamilyInput) -> Vec<Int> {
    let n = input.n() as u8;
    let labels = input.column_labels();
    let mut out = Vec::with_capacity(labels.len());
    match input.type_tag {
        FamilyType::A => {
            let prod: Int = input.l.iter().map(|&x| Int::from(x)).product();
            for &label in &labels {
                let v: Rat = match label {
                    VarLabel::T(i, 1) => {
                        rat_int(&prod) * rat(input.curve_degree(i), input.l_of(label))
                    }
                    VarLabel::S1 => rat_int(&prod) * positivity_value(input),
                    _ => unreachable!(),
                };
                debug_assert!(v.is_integer());
                out.push(v.to_integer());
            }
        }
        FamilyType::B => {
            // product of l over slots 11..n1
            let lhat: Int = (1..=n)
                .map(|i| Int::from(input.l_of(VarLabel::T(i, 1))))
                .product();
            let delta = Int::from(input.l_of(VarLabel::T(0, 1)))
                * Int::from(input.shift_of(VarLabel::T(0, 2)))
                - Int::from(input.l_of(VarLabel::T(0, 2)))
                    * Int::from(input.shift_of(VarLabel::T(0, 1)));
            let mut s = input.slot_ratio(VarLabel::T(1, 1));
            s += input.slot_ratio(VarLabel::T(2, 1));
            for i in 3..=n {
                s += Rat::from(Int::from(input.curve_degree(i)))
                    * input.slot_ratio(VarLabel::T(i, 1));
            }
            for &label in &labels {
                let v: Rat = match label {
                    VarLabel::T(0, 1) => {
                        rat_int(&(Int::from(input.l_of(VarLabel::T(0, 2))) * &lhat))
                            * (input.slot_ratio(VarLabel::T(0, 2)) - &s)
                    }
                    VarLabel::T(0, 2) => {
                        rat_int(&(Int::from(input.l_of(VarLabel::T(0, 1))) * &lhat))
                            * (&s - input.slot_ratio(VarLabel::T(0, 1)))
                    }
                    VarLabel::T(i, 1) => {
                        rat(input.curve_degree(i), input.l_of(label))
                            * rat_int(&lhat)
                            * rat_int(&delta)
                    }
                    _ => unreachable!(),
                };
                debug_assert!(v.is_integer());
                out.push(v.to_integer());
            }
        }
        FamilyType::C => {
            // product of l over the line slots 11, 21 and simple curves 41..n1
            let mut mhat =
                Int::from(input.l_of(VarLabel::T(1, 1))) * Int::from(input.l_of(VarLabel::T(2, 1)));
            for i in 4..=n {
                mhat *= Int::from(input.l_of(VarLabel::T(i, 1)));
            }
            let l01 = Int::from(input.l_of(VarLabel::T(0, 1)));
            let l31 = Int::from(input.l_of(VarLabel::T(3, 1)));
            let l32 = Int::from(input.l_of(VarLabel::T(3, 2)));
            let delta = &l31 * Int::from(input.shift_of(VarLabel::T(3, 2)))
                - &l32 * Int::from(input.shift_of(VarLabel::T(3, 1)));
            let d3 = Rat::from(Int::from(input.curve_degree(3)));
            let mut e = input.slot_ratio(VarLabel::T(0, 1));
            e -= input.slot_ratio(VarLabel::T(1, 1));
            e -= input.slot_ratio(VarLabel::T(2, 1));
            for i in 4..=n {
                e -= Rat::from(Int::from(input.curve_degree(i)))
                    * input.slot_ratio(VarLabel::T(i, 1));
            }
            for &label in &labels {
                let v: Rat = match label {
                    VarLabel::T(3, 1) => {
                        rat_int(&(&l01 * &l32 * &mhat))
                            * (&d3 * input.slot_ratio(VarLabel::T(3, 2)) - &e)
                    }
                    VarLabel::T(3, 2) => {
                        rat_int(&(&l01 * &l31 * &mhat))
                            * (&e - &d3 * input.slot_ratio(VarLabel::T(3, 1)))
                    }
                    VarLabel::T(i, 1) => {
                        rat(input.curve_degree(i), input.l_of(label))
                            * rat_int(&l01)
                            * rat_int(&mhat)
                            * rat_int(&delta)
                    }
                    _ => unreachable!(),
                };
                debug_assert!(v.is_integer());
                out.push(v.to_integer());
            }
        }
    }
    out
}

/// Fake weight vector and its primitivization, cross-checked against the
/// maximal minors of `P`.
pub fn fake_weights(
    input: &FamilyInput,
    gm: &GeneratorMatrix,
) -> Result<(Vec<Int>, Vec<Int>), KfanoError> {
    let tilde = fake_weights_closed_form(input);
    let minors = gm.mat.max_minors()?;
    if tilde != minors {
        return Err(KfanoError::Parse(format!(
            "fake weight closed form {:?} disagrees with minors {:?}",
            tilde, minors
        )));
    }
    if tilde.iter().any(|w| !w.is_positive()) {
        return Err(KfanoError::PositivityViolated {
            which: "fake weight vector must be strictly positive".to_string(),
        });
    }
    let g = gcd_all(&tilde);
    let reduced = tilde.iter().map(|w| w / &g).collect();
    Ok((tilde, reduced))
}

/// The class group `K = Z^{n+2} / im(Pᵀ)` together with the degrees of all
/// generators, normalized so the free part of `deg T01` is positive.
#[derive(Clone, Debug)]
pub struct Grading {
    pub group: AbelGroup,
    /// degrees in column order of the generator matrix
    pub degrees: Vec<AbelElem>,
}

impl Grading {
    pub fn degree_of(&self, gm: &GeneratorMatrix, label: VarLabel) -> &AbelElem {
        let idx = gm
            .labels
            .iter()
            .position(|&l| l == label)
            .expect("label exists");
        &self.degrees[idx]
    }
}

pub fn grading(input: &FamilyInput, gm: &GeneratorMatrix) -> Result<Grading, KfanoError> {
    let ck = cokernel(&gm.mat);
    if ck.group.rank != 1 {
        return Err(KfanoError::RankNotOne {
            rank: ck.group.rank,
        });
    }
    let mut degrees = ck.images.clone();
    // fix the isomorphism so that w_01 > 0
    if degrees[0].free[0].is_negative() {
        for d in &mut degrees {
            d.free[0] = -d.free[0].clone();
        }
    } else if degrees[0].free[0].is_zero() {
        return Err(KfanoError::RankNotOne { rank: 1 });
    }
    // cross-check: free parts match the reduced fake weight vector
    let (_, reduced) = fake_weights(input, gm)?;
    for (deg, w) in degrees.iter().zip(reduced.iter()) {
        if &deg.free[0] != w {
            return Err(KfanoError::Parse(format!(
                "grading free parts {:?} disagree with reduced fake weights {:?}",
                degrees
                    .iter()
                    .map(|d| d.free[0].clone())
                    .collect::<Vec<_>>(),
                reduced
            )));
        }
    }
    // the projection annihilates every row of P
    for r in 0..gm.mat.rows() {
        let img = ck.project(gm.mat.row(r));
        if !img.is_zero() {
            return Err(KfanoError::Parse(
                "cokernel projection does not annihilate the row space".to_string(),
            ));
        }
    }
    Ok(Grading {
        group: ck.group,
        degrees,
    })
}

/// Symbolic shape of one defining relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationTemplate {
    /// index i of the curve the relation belongs to (3..=n)
    pub curve: u8,
    /// leading monomial: `T_{i1}^{l_i1}` or `T_{31}^{l_31} T_{32}^{l_32}`
    pub lead: Vec<(VarLabel, i64)>,
    /// degree of the generic polynomial g_i
    pub g_degree: i64,
    /// substituted arguments of g_i, with a presence flag: an argument is
    /// absent when non-toricity forces its coefficient to vanish
    pub args: Vec<(Vec<(VarLabel, i64)>, bool)>,
    /// K-degree of the relation
    pub degree: AbelElem,
}

impl RelationTemplate {
    /// Human-readable Cox-ring template string, e.g.
    /// `f_2(T01, T11, T21^2) + T31^5`. Prime marks distinguish the generic
    /// polynomials of successive relations.
    pub fn render(&self, primes: usize) -> String {
        let mono = |m: &[(VarLabel, i64)]| -> String {
            m.iter()
                .map(|(v, e)| {
                    if *e == 1 {
                        v.to_string()
                    } else {
                        format!("{}^{}", v, e)
                    }
                })
                .collect::<Vec<_>>()
                .join("*")
        };
        let args: Vec<String> = self
            .args
            .iter()
            .filter(|(_, present)| *present)
            .map(|(m, _)| mono(m))
            .collect();
        format!(
            "f{}_{}({}) + {}",
            "'".repeat(primes),
            self.g_degree,
            args.join(", "),
            mono(&self.lead)
        )
    }
}

/// K-degrees of the defining relations, asserting the homogeneity
/// identities of the constructions.
pub fn relation_degrees(
    input: &FamilyInput,
    gm: &GeneratorMatrix,
    grading: &Grading,
) -> Result<Vec<AbelElem>, KfanoError> {
    let n = input.n() as u8;
    let group = &grading.group;
    let deg = |label: VarLabel| grading.degree_of(gm, label).clone();
    let scale = |label: VarLabel| deg(label).scale(&Int::from(input.l_of(label)), group);

    // degree of the substituted argument block g_i(...)
    let base = match input.type_tag {
        FamilyType::A | FamilyType::C => scale(VarLabel::T(0, 1)),
        FamilyType::B => scale(VarLabel::T(0, 1)).add(&scale(VarLabel::T(0, 2)), group),
    };
    // homogeneity of the argument block
    for i in 1..=2u8 {
        if scale(VarLabel::T(i, 1)) != base {
            return Err(KfanoError::HomogeneityViolated {
                relation: i as usize,
            });
        }
    }

    let mut out = Vec::new();
    for i in 3..=n {
        let d_i = Int::from(input.curve_degree(i));
        let expected = base.scale(&d_i, group);
        let lead = if input.type_tag == FamilyType::C && i == 3 {
            scale(VarLabel::T(3, 1)).add(&scale(VarLabel::T(3, 2)), group)
        } else {
            scale(VarLabel::T(i, 1))
        };
        if lead != expected {
            return Err(KfanoError::HomogeneityViolated {
                relation: i as usize,
            });
        }
        out.push(expected);
    }
    Ok(out)
}

/// Argument presence: for a degree-one g the coefficient of an argument
/// whose exponent block is a single variable must vanish, otherwise the
/// relation would contain a linear term.
fn arg_present(g_degree: i64, arg: &[(VarLabel, i64)]) -> bool {
    if g_degree >= 2 {
        return true;
    }
    // single-variable argument of exponent 1 would be a linear term
    !(arg.len() == 1 && arg[0].1 == 1)
}

/// Symbolic relation templates (with K-degrees) for a family.
pub fn relation_templates(
    input: &FamilyInput,
    gm: &GeneratorMatrix,
    grading: &Grading,
) -> Result<Vec<RelationTemplate>, KfanoError> {
    let degrees = relation_degrees(input, gm, grading)?;
    let n = input.n() as u8;
    let arg0: Vec<(VarLabel, i64)> = match input.type_tag {
        FamilyType::A | FamilyType::C => {
            vec![(VarLabel::T(0, 1), input.l_of(VarLabel::T(0, 1)))]
        }
        FamilyType::B => vec![
            (VarLabel::T(0, 1), input.l_of(VarLabel::T(0, 1))),
            (VarLabel::T(0, 2), input.l_of(VarLabel::T(0, 2))),
        ],
    };
    let arg1 = vec![(VarLabel::T(1, 1), input.l_of(VarLabel::T(1, 1)))];
    let arg2 = vec![(VarLabel::T(2, 1), input.l_of(VarLabel::T(2, 1)))];

    let mut out = Vec::new();
    for (k, i) in (3..=n).enumerate() {
        let g_degree = input.curve_degree(i);
        let lead = if input.type_tag == FamilyType::C && i == 3 {
            vec![
                (VarLabel::T(3, 1), input.l_of(VarLabel::T(3, 1))),
                (VarLabel::T(3, 2), input.l_of(VarLabel::T(3, 2))),
            ]
        } else {
            vec![(VarLabel::T(i, 1), input.l_of(VarLabel::T(i, 1)))]
        };
        let args = [arg0.clone(), arg1.clone(), arg2.clone()]
            .into_iter()
            .map(|a| {
                let present = arg_present(g_degree, &a);
                (a, present)
            })
            .collect();
        out.push(RelationTemplate {
            curve: i,
            lead,
            g_degree,
            args,
            degree: degrees[k].clone(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn example_type_a() -> FamilyInput {
        FamilyInput::new(FamilyType::A, vec![2], vec![2, 2, 2, 2], vec![5, 1, 1, 1])
    }

    pub fn example_type_b() -> FamilyInput {
        FamilyInput::new(
            FamilyType::B,
            vec![2],
            vec![1, 2, 1, 4, 2],
            vec![1, 3, 0, 1, 1],
        )
    }

    pub fn example_type_c() -> FamilyInput {
        FamilyInput::new(
            FamilyType::C,
            vec![2],
            vec![4, 1, 2, 1, 4],
            vec![3, 0, 1, 0, 1],
        )
    }

    #[test]
    fn base_matrix_examples() {
        let b = base_matrix(&[2]).unwrap();
        assert_eq!(
            b,
            IntMat::from_i64(3, 4, &[-1, 1, 0, 0, -1, 0, 1, 0, -2, 0, 0, 1])
        );
        let b1 = base_matrix(&[1]).unwrap();
        assert_eq!(
            b1,
            IntMat::from_i64(3, 4, &[-1, 1, 0, 0, -1, 0, 1, 0, -1, 0, 0, 1])
        );
        let b23 = base_matrix(&[2, 3]).unwrap();
        assert_eq!(
            b23.column(0),
            vec![Int::from(-1), Int::from(-1), Int::from(-2), Int::from(-3)]
        );
        assert!(base_matrix(&[]).is_err());
    }

    #[test]
    fn assemble_type_a_example() {
        let gm = assemble_p(&example_type_a()).unwrap();
        assert_eq!(
            gm.mat,
            IntMat::from_i64(
                4,
                5,
                &[-2, 2, 0, 0, 0, -2, 0, 2, 0, 0, -4, 0, 0, 2, 0, -5, 1, 1, 1, 1]
            )
        );
    }

    #[test]
    fn assemble_type_b_example() {
        let gm = assemble_p(&example_type_b()).unwrap();
        assert_eq!(
            gm.mat,
            IntMat::from_i64(
                4,
                5,
                &[-1, -2, 1, 0, 0, -1, -2, 0, 4, 0, -2, -4, 0, 0, 2, -1, -3, 0, 1, 1]
            )
        );
    }

    #[test]
    fn assemble_type_c_example() {
        let gm = assemble_p(&example_type_c()).unwrap();
        assert_eq!(
            gm.mat,
            IntMat::from_i64(
                4,
                5,
                &[-4, 1, 0, 0, 0, -4, 0, 2, 0, 0, -8, 0, 0, 1, 4, -3, 0, 1, 0, 1]
            )
        );
    }

    #[test]
    fn assemble_rejects_nonprimitive() {
        // l_01 = 2, d_01 = 2 makes column (−2,−2,−4,−2) with gcd 2
        let input = FamilyInput::new(FamilyType::A, vec![2], vec![2, 2, 2, 2], vec![2, 1, 1, 1]);
        match assemble_p(&input) {
            Err(KfanoError::NonPrimitiveColumn { label }) => assert_eq!(label, "T01"),
            other => panic!("expected NonPrimitiveColumn, got {:?}", other),
        }
    }

    #[test]
    fn fake_weights_type_a_example() {
        let input = example_type_a();
        let gm = assemble_p(&input).unwrap();
        let (tilde, reduced) = fake_weights(&input, &gm).unwrap();
        assert_eq!(
            tilde,
            [8, 8, 8, 16, 8]
                .iter()
                .map(|&x| Int::from(x))
                .collect::<Vec<_>>()
        );
        assert_eq!(
            reduced,
            [1, 1, 1, 2, 1]
                .iter()
                .map(|&x| Int::from(x))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn fake_weights_p2_like() {
        // the projective plane generator matrix is not a family input, so
        // check the minors directly
        let m = IntMat::from_i64(2, 3, &[-1, 1, 0, -1, 0, 1]);
        assert_eq!(
            m.max_minors().unwrap(),
            vec![Int::one(), Int::one(), Int::one()]
        );
    }

    #[test]
    fn fake_weights_type_b_orthogonal() {
        let input = example_type_b();
        let gm = assemble_p(&input).unwrap();
        let (_, reduced) = fake_weights(&input, &gm).unwrap();
        // orthogonal to every row of P
        for r in 0..gm.mat.rows() {
            let dot: Int = gm
                .mat
                .row(r)
                .iter()
                .zip(reduced.iter())
                .map(|(a, b)| a * b)
                .sum();
            assert!(dot.is_zero());
        }
        assert!(reduced[0].is_positive());
    }

    #[test]
    fn grading_type_a_example() {
        let input = example_type_a();
        let gm = assemble_p(&input).unwrap();
        let g = grading(&input, &gm).unwrap();
        assert_eq!(g.group.rank, 1);
        assert_eq!(
            g.group.torsion,
            vec![Int::from(2), Int::from(2), Int::from(2)]
        );
        let free: Vec<Int> = g.degrees.iter().map(|d| d.free[0].clone()).collect();
        assert_eq!(
            free,
            [1, 1, 1, 2, 1]
                .iter()
                .map(|&x| Int::from(x))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn grading_type_b_example() {
        let input = example_type_b();
        let gm = assemble_p(&input).unwrap();
        let g = grading(&input, &gm).unwrap();
        assert_eq!(g.group.rank, 1);
        assert_eq!(g.group.torsion, vec![Int::from(2)]);
        let free: Vec<Int> = g.degrees.iter().map(|d| d.free[0].clone()).collect();
        // homogeneity pins these: l01*w01 + l02*w02 = l21*w21 = l31*w31
        assert_eq!(
            free,
            [2, 1, 4, 1, 4]
                .iter()
                .map(|&x| Int::from(x))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn relation_degrees_examples() {
        let input = example_type_a();
        let gm = assemble_p(&input).unwrap();
        let g = grading(&input, &gm).unwrap();
        let degs = relation_degrees(&input, &gm, &g).unwrap();
        assert_eq!(degs.len(), 1);
        assert_eq!(degs[0].free[0], Int::from(4));

        let input = example_type_c();
        let gm = assemble_p(&input).unwrap();
        let g = grading(&input, &gm).unwrap();
        let degs = relation_degrees(&input, &gm, &g).unwrap();
        // d_3 * l_01 * w_01 = 2 * 4 * 1 = 8
        assert_eq!(degs[0].free[0], Int::from(8));
    }

    #[test]
    fn homogeneity_violation_detected() {
        // hand-build a bogus grading to exercise the check
        let input = example_type_a();
        let gm = assemble_p(&input).unwrap();
        let mut g = grading(&input, &gm).unwrap();
        g.degrees[1].free[0] += Int::one();
        assert!(matches!(
            relation_degrees(&input, &gm, &g),
            Err(KfanoError::HomogeneityViolated { .. })
        ));
    }
}
