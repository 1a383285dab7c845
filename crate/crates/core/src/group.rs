//! Exact arithmetic for finite abelian groups, their elements and
//! characters.
//!
//! A group is a fixed product of cyclic groups `Z/m_1 x ... x Z/m_t`; no
//! normal-form canonicalization is applied, so user-facing labels keep
//! their coordinates. Character values are roots of unity stored as
//! integer exponents of a fixed primitive m-th root, never as floats.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("elementary divisor {0} is smaller than 2")]
    InvalidDivisor(u64),
    #[error("exponent vector has length {got}, group has rank {expected}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("empty generator list")]
    EmptyGenerators,
}

/// `Z/m_1 x ... x Z/m_t` with the divisors exactly as given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroup {
    divisors: Vec<u64>,
    order: u64,
}

/// Element of an [`AbelianGroup`], exponents reduced mod `m_j`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GroupElement {
    exponents: Vec<u64>,
}

/// Character of an [`AbelianGroup`], also written in exponent coordinates;
/// the character with all-zero exponents is the trivial one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Character {
    exponents: Vec<u64>,
}

impl GroupElement {
    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.iter().all(|e| *e == 0)
    }
}

impl Character {
    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|e| *e == 0)
    }
}

impl AbelianGroup {
    pub fn new(divisors: Vec<u64>) -> Result<Self, GroupError> {
        if divisors.is_empty() {
            return Err(GroupError::EmptyGenerators);
        }
        for &m in &divisors {
            if m < 2 {
                return Err(GroupError::InvalidDivisor(m));
            }
        }
        let order = divisors.iter().product();
        Ok(AbelianGroup { divisors, order })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    fn check_shape(&self, exponents: &[u64]) -> Result<(), GroupError> {
        if exponents.len() != self.divisors.len() {
            return Err(GroupError::ShapeMismatch {
                expected: self.divisors.len(),
                got: exponents.len(),
            });
        }
        Ok(())
    }

    /// Builds an element, reducing each exponent mod `m_j`.
    pub fn element(&self, exponents: Vec<u64>) -> Result<GroupElement, GroupError> {
        self.check_shape(&exponents)?;
        let exponents = exponents
            .into_iter()
            .zip(&self.divisors)
            .map(|(e, m)| e % m)
            .collect();
        Ok(GroupElement { exponents })
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            exponents: vec![0; self.divisors.len()],
        }
    }

    pub fn character(&self, exponents: Vec<u64>) -> Result<Character, GroupError> {
        self.check_shape(&exponents)?;
        let exponents = exponents
            .into_iter()
            .zip(&self.divisors)
            .map(|(e, m)| e % m)
            .collect();
        Ok(Character { exponents })
    }

    pub fn trivial_character(&self) -> Character {
        Character {
            exponents: vec![0; self.divisors.len()],
        }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_shape(&a.exponents)?;
        self.check_shape(&b.exponents)?;
        let exponents = a
            .exponents
            .iter()
            .zip(&b.exponents)
            .zip(&self.divisors)
            .map(|((x, y), m)| (x + y) % m)
            .collect();
        Ok(GroupElement { exponents })
    }

    pub fn character_mul(&self, a: &Character, b: &Character) -> Result<Character, GroupError> {
        self.check_shape(&a.exponents)?;
        self.check_shape(&b.exponents)?;
        let exponents = a
            .exponents
            .iter()
            .zip(&b.exponents)
            .zip(&self.divisors)
            .map(|((x, y), m)| (x + y) % m)
            .collect();
        Ok(Character { exponents })
    }

    pub fn character_inverse(&self, a: &Character) -> Result<Character, GroupError> {
        self.check_shape(&a.exponents)?;
        let exponents = a
            .exponents
            .iter()
            .zip(&self.divisors)
            .map(|(x, m)| (m - x) % m)
            .collect();
        Ok(Character { exponents })
    }

    /// Value of `chi` on `g` as the exponent `e` of the fixed primitive
    /// m-th root of unity: `chi(g) = zeta^e`, `0 <= e < m`. Bilinear in the
    /// exponent vectors.
    pub fn eval_character(&self, chi: &Character, g: &GroupElement) -> Result<u64, GroupError> {
        self.check_shape(&chi.exponents)?;
        self.check_shape(&g.exponents)?;
        let m = self.order;
        let mut acc: u64 = 0;
        for ((c, e), mj) in chi.exponents.iter().zip(&g.exponents).zip(&self.divisors) {
            // c*e*(m/m_j) mod m, computed in u128 to avoid overflow
            let term = ((*c as u128 * *e as u128) % *mj as u128) * (m / mj) as u128;
            acc = ((acc as u128 + term) % m as u128) as u64;
        }
        Ok(acc)
    }

    /// Least `k >= 1` with `k*g = 0`; the lcm over components of
    /// `m_j / gcd(m_j, e_j)`.
    pub fn order_of_element(&self, g: &GroupElement) -> Result<u64, GroupError> {
        self.check_shape(&g.exponents)?;
        let mut order = 1u64;
        for (e, m) in g.exponents.iter().zip(&self.divisors) {
            let comp = m / gcd(*m, *e);
            order = lcm(order, comp);
        }
        Ok(order)
    }

    /// Order of the subgroup generated by `elements`, by closure
    /// enumeration.
    pub fn subgroup_order(&self, elements: &[GroupElement]) -> Result<u64, GroupError> {
        if elements.is_empty() {
            return Err(GroupError::EmptyGenerators);
        }
        for g in elements {
            self.check_shape(&g.exponents)?;
        }
        let mut seen = std::collections::BTreeSet::new();
        let mut frontier = vec![self.identity()];
        seen.insert(self.identity());
        while let Some(current) = frontier.pop() {
            for g in elements {
                let next = self.add(&current, g)?;
                if seen.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
        Ok(seen.len() as u64)
    }

    /// True iff the cyclic subgroups generated by the elements sit as a
    /// direct sum inside the group, i.e. the generated subgroup has order
    /// equal to the product of the element orders.
    pub fn direct_sum_check(&self, elements: &[GroupElement]) -> Result<bool, GroupError> {
        if elements.is_empty() {
            return Ok(true);
        }
        let generated = self.subgroup_order(elements)?;
        let mut product: u128 = 1;
        for g in elements {
            product *= self.order_of_element(g)? as u128;
        }
        Ok(product == generated as u128)
    }

    /// All `m` characters in lexicographic order of their exponent vectors;
    /// the trivial character comes first. Part of the stable output
    /// contract.
    pub fn enumerate_characters(&self) -> Vec<Character> {
        self.enumerate_vectors()
            .into_iter()
            .map(|exponents| Character { exponents })
            .collect()
    }

    pub fn enumerate_elements(&self) -> Vec<GroupElement> {
        self.enumerate_vectors()
            .into_iter()
            .map(|exponents| GroupElement { exponents })
            .collect()
    }

    fn enumerate_vectors(&self) -> Vec<Vec<u64>> {
        let t = self.divisors.len();
        let mut out = Vec::with_capacity(self.order as usize);
        let mut current = vec![0u64; t];
        loop {
            out.push(current.clone());
            // lexicographic odometer, last coordinate fastest
            let mut pos = t;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                current[pos] += 1;
                if current[pos] < self.divisors[pos] {
                    break;
                }
                current[pos] = 0;
            }
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(ms: &[u64]) -> AbelianGroup {
        AbelianGroup::new(ms.to_vec()).unwrap()
    }

    #[test]
    fn eval_character_examples() {
        let g2 = z(&[2]);
        let chi = g2.character(vec![1]).unwrap();
        let e = g2.element(vec![1]).unwrap();
        assert_eq!(g2.eval_character(&chi, &e).unwrap(), 1);

        let g4 = z(&[4]);
        let chi = g4.character(vec![1]).unwrap();
        let e = g4.element(vec![2]).unwrap();
        assert_eq!(g4.eval_character(&chi, &e).unwrap(), 2);

        let triv = g4.trivial_character();
        for e in g4.enumerate_elements() {
            assert_eq!(g4.eval_character(&triv, &e).unwrap(), 0);
        }
    }

    #[test]
    fn eval_character_is_additive_in_characters() {
        // all pairs on a selection of groups of order <= 36
        for divisors in [
            vec![2],
            vec![4],
            vec![6],
            vec![2, 2],
            vec![2, 3],
            vec![3, 3],
            vec![2, 2, 3],
            vec![36],
        ] {
            let grp = z(&divisors);
            let chars = grp.enumerate_characters();
            let elems = grp.enumerate_elements();
            let m = grp.order();
            for a in &chars {
                for b in &chars {
                    let ab = grp.character_mul(a, b).unwrap();
                    for g in &elems {
                        let lhs = grp.eval_character(&ab, g).unwrap();
                        let rhs = (grp.eval_character(a, g).unwrap()
                            + grp.eval_character(b, g).unwrap())
                            % m;
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn order_of_element_examples() {
        let g6 = z(&[6]);
        assert_eq!(
            g6.order_of_element(&g6.element(vec![2]).unwrap()).unwrap(),
            3
        );
        assert_eq!(g6.order_of_element(&g6.identity()).unwrap(), 1);
        let g22 = z(&[2, 2]);
        assert_eq!(
            g22.order_of_element(&g22.element(vec![1, 1]).unwrap())
                .unwrap(),
            2
        );
    }

    #[test]
    fn subgroup_order_examples() {
        let g22 = z(&[2, 2]);
        let gens = vec![
            g22.element(vec![1, 0]).unwrap(),
            g22.element(vec![0, 1]).unwrap(),
        ];
        assert_eq!(g22.subgroup_order(&gens).unwrap(), 4);

        let g4 = z(&[4]);
        assert_eq!(
            g4.subgroup_order(&[g4.element(vec![2]).unwrap()]).unwrap(),
            2
        );

        // closure oracle: walk sums of {2,3} in Z/6 by hand
        let g6 = z(&[6]);
        let gens = vec![g6.element(vec![2]).unwrap(), g6.element(vec![3]).unwrap()];
        let mut reached = vec![false; 6];
        reached[0] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for v in 0..6usize {
                if reached[v] {
                    for step in [2usize, 3] {
                        let w = (v + step) % 6;
                        if !reached[w] {
                            reached[w] = true;
                            changed = true;
                        }
                    }
                }
            }
        }
        let expected = reached.iter().filter(|r| **r).count() as u64;
        assert_eq!(g6.subgroup_order(&gens).unwrap(), expected);
        assert_eq!(expected, 6);
    }

    #[test]
    fn direct_sum_examples() {
        let g22 = z(&[2, 2]);
        let a = g22.element(vec![1, 0]).unwrap();
        let b = g22.element(vec![0, 1]).unwrap();
        let c = g22.element(vec![1, 1]).unwrap();
        assert!(g22.direct_sum_check(&[a.clone(), b.clone()]).unwrap());
        assert!(g22.direct_sum_check(&[a.clone(), c.clone()]).unwrap());

        let g2 = z(&[2]);
        let e = g2.element(vec![1]).unwrap();
        assert!(!g2.direct_sum_check(&[e.clone(), e]).unwrap());

        // order independence
        assert_eq!(
            g22.direct_sum_check(&[a.clone(), c.clone()]).unwrap(),
            g22.direct_sum_check(&[c, a]).unwrap()
        );
    }

    #[test]
    fn character_enumeration_order() {
        assert_eq!(z(&[2]).enumerate_characters().len(), 2);
        assert_eq!(z(&[2, 2]).enumerate_characters().len(), 4);

        let g6 = z(&[6]);
        let chars = g6.enumerate_characters();
        assert_eq!(chars.len(), 6);
        for (i, chi) in chars.iter().enumerate() {
            assert_eq!(chi.exponents(), &[i as u64]);
        }
        assert!(chars[0].is_trivial());

        let g22 = z(&[2, 2]);
        let exps: Vec<Vec<u64>> = g22
            .enumerate_characters()
            .iter()
            .map(|c| c.exponents().to_vec())
            .collect();
        assert_eq!(
            exps,
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let g22 = z(&[2, 2]);
        let g2 = z(&[2]);
        let chi = g2.character(vec![1]).unwrap();
        let e = g22.element(vec![1, 0]).unwrap();
        assert!(matches!(
            g22.eval_character(&chi, &e),
            Err(GroupError::ShapeMismatch { .. })
        ));
    }
}
