//! Building data of an abelian cover of projective n-space, in degree
//! terms: branch components with group labels, derived eigensheaf degrees,
//! the fundamental relations, ampleness checks and Bott-formula dimensions.

use std::collections::BTreeMap;

use num::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::group::{AbelianGroup, Character, GroupElement, GroupError};
use crate::poly::HomogPoly;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoverError {
    #[error("branch list is empty")]
    EmptyBranchList,
    #[error("ambient dimension must be at least 2, got {0}")]
    AmbientTooSmall(usize),
    #[error("branch component {0} is labelled with the identity element")]
    IdentityLabel(usize),
    #[error("branch component {0} has degree 0")]
    ZeroDegree(usize),
    #[error(
        "eigensheaf degree of character {chi:?} is {numerator}/{denominator}, not an integer; \
         no such cover of projective space exists"
    )]
    NonIntegralEigensheaf {
        chi: Vec<u64>,
        numerator: i64,
        denominator: i64,
    },
    #[error("branch labels do not generate the group: the cover is not totally ramified")]
    TotallyRamifiedViolation,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// One irreducible branch divisor: its group label, its degree in
/// `Pic = Z`, the ramification order (order of the label) and, optionally,
/// the defining section.
#[derive(Debug, Clone)]
pub struct BranchComponent {
    pub label: GroupElement,
    pub degree: u32,
    pub branch_order: u64,
    pub section: Option<HomogPoly>,
}

/// Building data of a cover of projective n-space, with the eigensheaf
/// degrees derived from the fundamental relations.
#[derive(Debug, Clone)]
pub struct CoverData {
    ambient_dim: usize,
    group: AbelianGroup,
    branch: Vec<BranchComponent>,
    eigensheaf_degrees: BTreeMap<Character, i64>,
}

/// Input description of a branch component, before derivation.
#[derive(Debug, Clone)]
pub struct BranchInput {
    pub label: GroupElement,
    pub degree: u32,
    pub section: Option<HomogPoly>,
}

impl CoverData {
    /// Derives the eigensheaf degrees `l_chi = sum_i a^i_chi d_i / m_i`
    /// from the branch data and verifies the fundamental relations on the
    /// result. Fails when some degree is not an integer or when the labels
    /// do not generate the group.
    pub fn derive(
        ambient_dim: usize,
        group: AbelianGroup,
        branch: Vec<BranchInput>,
    ) -> Result<CoverData, CoverError> {
        if ambient_dim < 2 {
            return Err(CoverError::AmbientTooSmall(ambient_dim));
        }
        if branch.is_empty() {
            return Err(CoverError::EmptyBranchList);
        }
        let mut components = Vec::with_capacity(branch.len());
        for (i, b) in branch.into_iter().enumerate() {
            let branch_order = group.order_of_element(&b.label)?;
            if branch_order < 2 {
                return Err(CoverError::IdentityLabel(i));
            }
            if b.degree == 0 {
                return Err(CoverError::ZeroDegree(i));
            }
            components.push(BranchComponent {
                label: b.label,
                degree: b.degree,
                branch_order,
                section: b.section,
            });
        }

        let labels: Vec<GroupElement> = components.iter().map(|c| c.label.clone()).collect();
        if group.subgroup_order(&labels)? != group.order() {
            return Err(CoverError::TotallyRamifiedViolation);
        }

        let mut eigensheaf_degrees = BTreeMap::new();
        for chi in group.enumerate_characters() {
            // sum over components of a^i_chi * d_i / m_i
            let mut num: i64 = 0;
            let mut den: i64 = 1;
            for c in &components {
                let a = a_exponent_raw(&group, c, &chi)?;
                let term_num = a as i64 * c.degree as i64;
                let term_den = c.branch_order as i64;
                num = num * term_den + term_num * den;
                den *= term_den;
                let g = gcd_i64(num.abs(), den);
                num /= g;
                den /= g;
            }
            if den != 1 {
                return Err(CoverError::NonIntegralEigensheaf {
                    chi: chi.exponents().to_vec(),
                    numerator: num,
                    denominator: den,
                });
            }
            eigensheaf_degrees.insert(chi, num);
        }

        let cover = CoverData {
            ambient_dim,
            group,
            branch: components,
            eigensheaf_degrees,
        };
        debug_assert!(cover.check_fundamental_relations().is_empty());
        Ok(cover)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn branch(&self) -> &[BranchComponent] {
        &self.branch
    }

    pub fn eigensheaf_degree(&self, chi: &Character) -> i64 {
        self.eigensheaf_degrees[chi]
    }

    pub fn nontrivial_characters(&self) -> Vec<Character> {
        self.group
            .enumerate_characters()
            .into_iter()
            .filter(|c| !c.is_trivial())
            .collect()
    }

    /// Attaches a section to each branch component, in order.
    pub fn with_sections(mut self, sections: Vec<HomogPoly>) -> Self {
        assert_eq!(sections.len(), self.branch.len());
        for (b, s) in self.branch.iter_mut().zip(sections) {
            b.section = Some(s);
        }
        self
    }

    /// The exponent `a` in `[0, m_i)` with `chi(g_i) = zeta^{m a / m_i}`;
    /// zero exactly when `chi(g_i) = 1`.
    pub fn a_exponent(&self, i: usize, chi: &Character) -> u64 {
        a_exponent_raw(&self.group, &self.branch[i], chi).expect("character of the cover's group")
    }

    /// The carry digit `[(a^i_chi + a^i_phi) / m_i]`, always 0 or 1.
    pub fn epsilon(&self, i: usize, chi: &Character, phi: &Character) -> u8 {
        let m = self.branch[i].branch_order;
        ((self.a_exponent(i, chi) + self.a_exponent(i, phi)) / m) as u8
    }

    /// Degree of `D_{chi,phi} = sum_i eps^i_{chi,phi} D_i`.
    pub fn d_pair_degree(&self, chi: &Character, phi: &Character) -> u64 {
        (0..self.branch.len())
            .map(|i| self.epsilon(i, chi, phi) as u64 * self.branch[i].degree as u64)
            .sum()
    }

    /// Indices of the branch components where `chi` is nontrivial; the
    /// components of `D_{chi,chi^{-1}}`.
    pub fn support(&self, chi: &Character) -> Vec<usize> {
        (0..self.branch.len())
            .filter(|&i| self.a_exponent(i, chi) != 0)
            .collect()
    }

    /// Indices with `a^i_chi != m_i - 1`; the components of `Delta_chi`.
    pub fn delta_chi(&self, chi: &Character) -> Vec<usize> {
        (0..self.branch.len())
            .filter(|&i| self.a_exponent(i, chi) != self.branch[i].branch_order - 1)
            .collect()
    }

    /// All pairs of characters violating the fundamental relations
    /// (empty on every cover produced by [`CoverData::derive`]).
    pub fn check_fundamental_relations(&self) -> Vec<(Character, Character)> {
        let chars = self.group.enumerate_characters();
        let mut failures = Vec::new();
        for chi in &chars {
            for phi in &chars {
                let product = self.group.character_mul(chi, phi).unwrap();
                let lhs = self.eigensheaf_degree(chi) + self.eigensheaf_degree(phi);
                let rhs =
                    self.eigensheaf_degree(&product) + self.d_pair_degree(chi, phi) as i64;
                if lhs != rhs {
                    failures.push((chi.clone(), phi.clone()));
                }
            }
        }
        failures
    }

    /// Membership in the semigroup generated by the building-data degrees
    /// (the eigensheaf degrees of nontrivial characters and the branch
    /// degrees), excluding the empty combination.
    pub fn gamma_contains(&self, degree: i64) -> bool {
        if degree <= 0 {
            return false;
        }
        let mut generators: Vec<i64> = self
            .nontrivial_characters()
            .iter()
            .map(|c| self.eigensheaf_degree(c))
            .chain(self.branch.iter().map(|b| b.degree as i64))
            .filter(|d| *d > 0)
            .collect();
        generators.sort_unstable();
        generators.dedup();
        let target = degree as usize;
        let mut reachable = vec![false; target + 1];
        reachable[0] = true;
        for v in 1..=target {
            for g in &generators {
                let g = *g as usize;
                if g <= v && reachable[v - g] {
                    reachable[v] = true;
                    break;
                }
            }
        }
        reachable[target]
    }

    pub fn validate(&self) -> ValidationReport {
        let failed_relations: Vec<(Vec<u64>, Vec<u64>)> = self
            .check_fundamental_relations()
            .into_iter()
            .map(|(a, b)| (a.exponents().to_vec(), b.exponents().to_vec()))
            .collect();

        let labels: Vec<GroupElement> = self.branch.iter().map(|c| c.label.clone()).collect();
        let total_ramification = self
            .group
            .subgroup_order(&labels)
            .map(|o| o == self.group.order())
            .unwrap_or(false);

        let mut failed_subsets = Vec::new();
        let r = self.branch.len();
        let max_size = self.ambient_dim.min(r);
        for mask in 1u32..(1 << r) {
            let size = mask.count_ones() as usize;
            if size < 2 || size > max_size {
                continue;
            }
            let subset: Vec<usize> = (0..r).filter(|i| mask & (1 << i) != 0).collect();
            let elems: Vec<GroupElement> =
                subset.iter().map(|i| self.branch[*i].label.clone()).collect();
            if !self.group.direct_sum_check(&elems).unwrap_or(false) {
                failed_subsets.push(subset);
            }
        }

        let n1 = self.ambient_dim as i64 + 1;
        let degrees_positive = self.branch.iter().all(|b| b.degree >= 1);
        let eigensheaf_positive = self
            .nontrivial_characters()
            .iter()
            .all(|c| self.eigensheaf_degree(c) > 0);
        let adjoint_branch: Vec<AdjointMargin> = self
            .branch
            .iter()
            .enumerate()
            .map(|(i, b)| AdjointMargin {
                index: format!("D_{}", i + 1),
                margin: b.degree as i64 - n1,
                status: AmpleStatus::of(b.degree as i64 - n1),
            })
            .collect();
        let adjoint_eigensheaf: Vec<AdjointMargin> = self
            .nontrivial_characters()
            .iter()
            .map(|c| {
                let margin = self.eigensheaf_degree(c) - n1;
                AdjointMargin {
                    index: format!("L_[{}]", join_exponents(c.exponents())),
                    margin,
                    status: AmpleStatus::of(margin),
                }
            })
            .collect();

        let mut warnings = Vec::new();
        for a in adjoint_branch.iter().chain(&adjoint_eigensheaf) {
            match a.status {
                AmpleStatus::NefBoundary => warnings.push(format!(
                    "adjoint bundle of {} sits on the nef boundary (degree margin 0): \
                     nef but not ample",
                    a.index
                )),
                AmpleStatus::NotNef => warnings.push(format!(
                    "adjoint bundle of {} is not nef (degree margin {})",
                    a.index, a.margin
                )),
                AmpleStatus::Ample => {}
            }
        }

        let adjoints_nef = adjoint_branch
            .iter()
            .chain(&adjoint_eigensheaf)
            .all(|a| a.status != AmpleStatus::NotNef);

        let hard_pass = failed_relations.is_empty()
            && total_ramification
            && failed_subsets.is_empty()
            && degrees_positive
            && eigensheaf_positive
            && adjoints_nef;

        ValidationReport {
            fundamental_relations: failed_relations.is_empty(),
            failed_relations,
            total_ramification,
            direct_sum: failed_subsets.is_empty(),
            failed_subsets,
            degrees_positive,
            eigensheaf_positive,
            adjoint_branch,
            adjoint_eigensheaf,
            warnings,
            hard_pass,
        }
    }
}

fn a_exponent_raw(
    group: &AbelianGroup,
    component: &BranchComponent,
    chi: &Character,
) -> Result<u64, GroupError> {
    let e = group.eval_character(chi, &component.label)?;
    let m = group.order();
    let mi = component.branch_order;
    // chi(g_i) is an m_i-th root of unity, so e is a multiple of m/m_i
    debug_assert_eq!(e % (m / mi), 0);
    Ok(e / (m / mi))
}

fn join_exponents(e: &[u64]) -> String {
    e.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd_i64(b, a % b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AmpleStatus {
    Ample,
    NefBoundary,
    NotNef,
}

impl AmpleStatus {
    fn of(margin: i64) -> Self {
        match margin {
            m if m > 0 => AmpleStatus::Ample,
            0 => AmpleStatus::NefBoundary,
            _ => AmpleStatus::NotNef,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AdjointMargin {
    pub index: String,
    pub margin: i64,
    pub status: AmpleStatus,
}

/// Outcome of the building-data validation. Hard checks are the
/// fundamental relations, total ramification, the direct-sum condition,
/// positivity of all degrees and nef-ness of the adjoint bundles; an
/// adjoint bundle on the nef boundary passes with a warning.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub fundamental_relations: bool,
    pub failed_relations: Vec<(Vec<u64>, Vec<u64>)>,
    pub total_ramification: bool,
    pub direct_sum: bool,
    pub failed_subsets: Vec<Vec<usize>>,
    pub degrees_positive: bool,
    pub eigensheaf_positive: bool,
    pub adjoint_branch: Vec<AdjointMargin>,
    pub adjoint_eigensheaf: Vec<AdjointMargin>,
    pub warnings: Vec<String>,
    pub hard_pass: bool,
}

/// Bott's formula: `h^q(P^n, Omega^p(k))` as an exact integer.
pub fn bott_dim(n: usize, p: usize, q: usize, k: i64) -> BigUint {
    if p > n || q > n {
        return BigUint::ZERO;
    }
    let n = n as i64;
    let p = p as i64;
    let q = q as i64;
    if q == 0 && k > p {
        binomial_big(k + n - p, k) * binomial_big(k - 1, p)
    } else if q == p && k == 0 {
        BigUint::from(1u32)
    } else if q == n && k < p - n {
        binomial_big(-k + p, -k) * binomial_big(-k - 1, n - p)
    } else {
        BigUint::ZERO
    }
}

fn binomial_big(top: i64, bottom: i64) -> BigUint {
    if bottom < 0 || top < bottom {
        return BigUint::ZERO;
    }
    let mut acc = BigUint::from(1u32);
    for i in 1..=bottom {
        acc = acc * BigUint::from((top - bottom + i) as u64) / BigUint::from(i as u64);
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PropertyVerdict {
    Satisfied,
    Inconclusive,
}

/// Sufficient criterion for properties (A) and (B) on projective space:
/// both hold when every adjoint bundle is ample in degree terms, i.e.
/// `l_chi - (n+1) > 0` and `d_i - (n+1) > 0`. When the criterion fails the
/// properties are reported inconclusive, not refuted.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyAbReport {
    pub property_a: PropertyVerdict,
    pub property_b: PropertyVerdict,
    pub min_eigensheaf_margin: i64,
    pub min_branch_margin: i64,
}

pub fn check_property_ab_projective(cover: &CoverData) -> PropertyAbReport {
    let n1 = cover.ambient_dim() as i64 + 1;
    let min_eigensheaf_margin = cover
        .nontrivial_characters()
        .iter()
        .map(|c| cover.eigensheaf_degree(c) - n1)
        .min()
        .unwrap_or(0);
    let min_branch_margin = cover
        .branch()
        .iter()
        .map(|b| b.degree as i64 - n1)
        .min()
        .unwrap_or(0);
    let verdict = if min_eigensheaf_margin > 0 && min_branch_margin > 0 {
        PropertyVerdict::Satisfied
    } else {
        PropertyVerdict::Inconclusive
    };
    PropertyAbReport {
        property_a: verdict,
        property_b: verdict,
        min_eigensheaf_margin,
        min_branch_margin,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InequalityMargin {
    pub quantity: String,
    pub margin: i64,
    pub holds: bool,
}

/// Degree-level report on the effective ampleness bounds: `c(n)`, the
/// degree of the comparison bundle `E_n = (omega(2nE))^{c(n)}`, and which
/// of the inequalities of conditions i) (for property (A)) and ii) (for
/// property (B)) hold.
#[derive(Debug, Clone, Serialize)]
pub struct EffectiveBoundReport {
    pub c_n: u64,
    pub e_n_degree: i64,
    pub condition_i: Vec<InequalityMargin>,
    pub condition_i_holds: bool,
    pub condition_ii: Vec<InequalityMargin>,
    pub condition_ii_holds: bool,
}

/// `c(n) = C(n-1, (n-1)/2)` for odd `n`, `C(n-1, n/2)` for even `n`.
pub fn effective_c(n: usize) -> u64 {
    use num::ToPrimitive;
    let half = if n % 2 == 1 { (n - 1) / 2 } else { n / 2 };
    binomial_big(n as i64 - 1, half as i64)
        .to_u64()
        .expect("ambient dimension small enough for u64")
}

/// Condition i) demands strict ampleness over `E_n` of the branch
/// divisors, the eigensheaves and both adjoint families; condition ii)
/// demands `l_chi, d_i >= (n+1) deg E`.
pub fn effective_bound_check(n: usize, e_degree: i64, cover: &CoverData) -> EffectiveBoundReport {
    let c_n = effective_c(n);
    let canonical = -(n as i64 + 1);
    let e_n_degree = c_n as i64 * (canonical + 2 * n as i64 * e_degree);

    let mut condition_i = Vec::new();
    let mut condition_ii = Vec::new();
    for (i, b) in cover.branch().iter().enumerate() {
        let d = b.degree as i64;
        condition_i.push(InequalityMargin {
            quantity: format!("deg D_{} - deg E_n", i + 1),
            margin: d - e_n_degree,
            holds: d > e_n_degree,
        });
        condition_i.push(InequalityMargin {
            quantity: format!("deg omega(D_{}) - deg E_n", i + 1),
            margin: d + canonical - e_n_degree,
            holds: d + canonical > e_n_degree,
        });
        condition_ii.push(InequalityMargin {
            quantity: format!("deg D_{} - (n+1) deg E", i + 1),
            margin: d - (n as i64 + 1) * e_degree,
            holds: d >= (n as i64 + 1) * e_degree,
        });
    }
    for chi in cover.nontrivial_characters() {
        let l = cover.eigensheaf_degree(&chi);
        let name = join_exponents(chi.exponents());
        condition_i.push(InequalityMargin {
            quantity: format!("deg L_[{name}] - deg E_n"),
            margin: l - e_n_degree,
            holds: l > e_n_degree,
        });
        condition_i.push(InequalityMargin {
            quantity: format!("deg omega.L_[{name}] - deg E_n"),
            margin: l + canonical - e_n_degree,
            holds: l + canonical > e_n_degree,
        });
        condition_ii.push(InequalityMargin {
            quantity: format!("deg L_[{name}] - (n+1) deg E"),
            margin: l - (n as i64 + 1) * e_degree,
            holds: l >= (n as i64 + 1) * e_degree,
        });
    }
    let condition_i_holds = condition_i.iter().all(|m| m.holds);
    let condition_ii_holds = condition_ii.iter().all(|m| m.holds);
    EffectiveBoundReport {
        c_n,
        e_n_degree,
        condition_i,
        condition_i_holds,
        condition_ii,
        condition_ii_holds,
    }
}
