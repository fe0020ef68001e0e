//! Finitely generated abelian groups in invariant-factor form and their
//! elements, as used for class groups and degree tables.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

pub type Int = BigInt;

/// `Z^rank ⊕ Z/a_1 ⊕ ... ⊕ Z/a_q` with `a_1 | a_2 | ... | a_q`, each `a_i ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelGroup {
    pub rank: usize,
    pub torsion: Vec<Int>,
}

impl AbelGroup {
    pub fn torsion_order(&self) -> Int {
        self.torsion.iter().product()
    }

    pub fn zero(&self) -> AbelElem {
        AbelElem {
            free: vec![Int::zero(); self.rank],
            torsion: vec![Int::zero(); self.torsion.len()],
        }
    }
}

impl std::fmt::Display for AbelGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.rank > 0 {
            parts.push(if self.rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.rank)
            });
        }
        for a in &self.torsion {
            parts.push(format!("Z/{}", a));
        }
        if parts.is_empty() {
            parts.push("0".to_string());
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// An element of an [`AbelGroup`]; torsion entries are kept reduced into
/// `[0, a_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelElem {
    pub free: Vec<Int>,
    pub torsion: Vec<Int>,
}

impl AbelElem {
    pub fn is_zero(&self) -> bool {
        self.free.iter().all(Zero::is_zero) && self.torsion.iter().all(Zero::is_zero)
    }

    /// The free part of a rank-one group element.
    pub fn free1(&self) -> &Int {
        assert_eq!(self.free.len(), 1, "free1 needs a rank-one group");
        &self.free[0]
    }

    pub fn add(&self, other: &AbelElem, group: &AbelGroup) -> AbelElem {
        let free = self
            .free
            .iter()
            .zip(other.free.iter())
            .map(|(a, b)| a + b)
            .collect();
        let torsion = self
            .torsion
            .iter()
            .zip(other.torsion.iter())
            .zip(group.torsion.iter())
            .map(|((a, b), m)| (a + b).mod_floor(m))
            .collect();
        AbelElem { free, torsion }
    }

    pub fn scale(&self, k: &Int, group: &AbelGroup) -> AbelElem {
        let free = self.free.iter().map(|a| a * k).collect();
        let torsion = self
            .torsion
            .iter()
            .zip(group.torsion.iter())
            .map(|(a, m)| (a * k).mod_floor(m))
            .collect();
        AbelElem { free, torsion }
    }

    pub fn sub(&self, other: &AbelElem, group: &AbelGroup) -> AbelElem {
        let free = self
            .free
            .iter()
            .zip(other.free.iter())
            .map(|(a, b)| a - b)
            .collect();
        let torsion = self
            .torsion
            .iter()
            .zip(other.torsion.iter())
            .zip(group.torsion.iter())
            .map(|((a, b), m)| (a - b).mod_floor(m))
            .collect();
        AbelElem { free, torsion }
    }

    pub fn neg(&self, group: &AbelGroup) -> AbelElem {
        let free = self.free.iter().map(|a| -a).collect();
        let torsion = self
            .torsion
            .iter()
            .zip(group.torsion.iter())
            .map(|(a, m)| (-a).mod_floor(m))
            .collect();
        AbelElem { free, torsion }
    }

    /// Order of the torsion part inside the torsion subgroup; an
    /// automorphism-invariant of the element given its free part.
    pub fn torsion_elem_order(&self, group: &AbelGroup) -> Int {
        let mut ord = Int::from(1);
        for (a, m) in self.torsion.iter().zip(group.torsion.iter()) {
            if a.is_zero() {
                continue;
            }
            let g = a.gcd(m);
            ord = ord.lcm(&(m / g));
        }
        ord
    }
}

impl std::fmt::Display for AbelElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = self.free.iter().map(|x| x.to_string()).collect();
        parts.extend(self.torsion.iter().map(|x| format!("{}~", x)));
        write!(f, "({})", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torsion_arithmetic_reduces() {
        let g = AbelGroup {
            rank: 1,
            torsion: vec![Int::from(2), Int::from(4)],
        };
        let a = AbelElem {
            free: vec![Int::from(3)],
            torsion: vec![Int::from(1), Int::from(3)],
        };
        let b = a.add(&a, &g);
        assert_eq!(b.free, vec![Int::from(6)]);
        assert_eq!(b.torsion, vec![Int::from(0), Int::from(2)]);
        assert!(a.sub(&a, &g).is_zero());
    }

    #[test]
    fn element_orders() {
        let g = AbelGroup {
            rank: 1,
            torsion: vec![Int::from(2), Int::from(4)],
        };
        let e = AbelElem {
            free: vec![Int::zero()],
            torsion: vec![Int::from(1), Int::from(2)],
        };
        assert_eq!(e.torsion_elem_order(&g), Int::from(2));
        let f = AbelElem {
            free: vec![Int::zero()],
            torsion: vec![Int::from(0), Int::from(3)],
        };
        assert_eq!(f.torsion_elem_order(&g), Int::from(4));
    }
}
