//! Homogeneous multivariate polynomials over the rationals: monomial
//! bases, derivatives, multiplication matrices, the Jacobian smoothness
//! certificate, normal-crossing sampling and the defining equations of a
//! cover.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, FromPrimitive, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::cover::CoverData;
use crate::group::Character;
use crate::linalg::{RationalMatrix, SparseVec};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("term {0:?} has total degree {1}, expected {2}")]
    InhomogeneousTerm(Vec<u32>, u32, u32),
    #[error("exponent vector has {got} entries, polynomial has {expected} variables")]
    VariableCount { expected: usize, got: usize },
    #[error("smoothness certificate needs degree >= 2, got {0}")]
    DegreeTooSmall(u32),
    #[error("branch component {0} carries no section")]
    MissingSection(usize),
    #[error("section of branch component {index} has degree {got}, expected {expected}")]
    DegreeMismatch {
        index: usize,
        expected: u32,
        got: u32,
    },
    #[error("substitution matrix must be {0}x{0}")]
    SubstitutionShape(usize),
}

/// Sparse homogeneous polynomial in `num_vars` variables.
///
/// Every exponent vector sums to `degree`; the zero polynomial keeps its
/// declared degree with an empty term map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogPoly {
    num_vars: usize,
    degree: u32,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl HomogPoly {
    pub fn zero(num_vars: usize, degree: u32) -> Self {
        HomogPoly {
            num_vars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(num_vars: usize, degree: u32, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u32>, BigRational)>,
    {
        let mut map = BTreeMap::new();
        for (exps, coeff) in terms {
            if exps.len() != num_vars {
                return Err(PolyError::VariableCount {
                    expected: num_vars,
                    got: exps.len(),
                });
            }
            let total: u32 = exps.iter().sum();
            if total != degree {
                return Err(PolyError::InhomogeneousTerm(exps, total, degree));
            }
            if coeff.is_zero() {
                continue;
            }
            let slot = map.entry(exps).or_insert_with(BigRational::zero);
            *slot += coeff;
        }
        map.retain(|_, c: &mut BigRational| !c.is_zero());
        Ok(HomogPoly {
            num_vars,
            degree,
            terms: map,
        })
    }

    pub fn monomial(num_vars: usize, exps: Vec<u32>, coeff: BigRational) -> Result<Self, PolyError> {
        let degree = exps.iter().sum();
        Self::from_terms(num_vars, degree, [(exps, coeff)])
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigRational {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.num_vars, self.degree);
        }
        HomogPoly {
            num_vars: self.num_vars,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.clone(), v * c))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars, other.num_vars);
        assert_eq!(self.degree, other.degree, "degrees must match for addition");
        let mut terms = self.terms.clone();
        for (e, v) in &other.terms {
            let slot = terms.entry(e.clone()).or_insert_with(BigRational::zero);
            *slot += v;
        }
        terms.retain(|_, c| !c.is_zero());
        HomogPoly {
            num_vars: self.num_vars,
            degree: self.degree,
            terms,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars, other.num_vars);
        let mut terms: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        for (ea, va) in &self.terms {
            for (eb, vb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let slot = terms.entry(exps).or_insert_with(BigRational::zero);
                *slot += va * vb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        HomogPoly {
            num_vars: self.num_vars,
            degree: self.degree + other.degree,
            terms,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = HomogPoly::from_terms(
            self.num_vars,
            0,
            [(vec![0; self.num_vars], BigRational::one())],
        )
        .expect("constant");
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// d/dx_k; the degree drops by one.
    pub fn partial_derivative(&self, k: usize) -> Self {
        assert!(k < self.num_vars, "variable index out of range");
        let mut terms = BTreeMap::new();
        for (e, v) in &self.terms {
            if e[k] == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[k] -= 1;
            terms.insert(exps, v * BigRational::from_u32(e[k]).unwrap());
        }
        HomogPoly {
            num_vars: self.num_vars,
            degree: self.degree.saturating_sub(1),
            terms,
        }
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.num_vars);
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, exp) in point.iter().zip(e) {
                for _ in 0..*exp {
                    term *= x;
                }
            }
            acc += term;
        }
        acc
    }

    /// Composition with the linear change of coordinates `x_k -> sum_j
    /// a[k][j] x_j`.
    pub fn linear_substitution(&self, a: &[Vec<BigRational>]) -> Result<Self, PolyError> {
        let nv = self.num_vars;
        if a.len() != nv || a.iter().any(|row| row.len() != nv) {
            return Err(PolyError::SubstitutionShape(nv));
        }
        let linear_forms: Vec<HomogPoly> = (0..nv)
            .map(|k| {
                HomogPoly::from_terms(
                    nv,
                    1,
                    (0..nv).map(|j| {
                        let mut exps = vec![0u32; nv];
                        exps[j] = 1;
                        (exps, a[k][j].clone())
                    }),
                )
                .expect("linear form")
            })
            .collect();
        let mut acc = HomogPoly::zero(nv, self.degree);
        for (e, c) in &self.terms {
            let mut term = HomogPoly::from_terms(nv, 0, [(vec![0; nv], c.clone())]).unwrap();
            for (k, exp) in e.iter().enumerate() {
                if *exp > 0 {
                    term = term.mul(&linear_forms[k].pow(*exp));
                }
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// True iff `other = c * self` for some nonzero rational `c`.
    pub fn is_proportional_to(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        if self.degree != other.degree || self.terms.len() != other.terms.len() {
            return false;
        }
        let (e0, c0) = self.terms.iter().next().unwrap();
        let d0 = other.terms.get(e0);
        let Some(d0) = d0 else { return false };
        let ratio = d0 / c0;
        self.terms
            .iter()
            .all(|(e, c)| other.terms.get(e).map_or(false, |d| *d == c * &ratio))
    }

    /// Coordinates of the polynomial on `monomial_basis(n, degree)`.
    pub fn coords(&self, basis_index: &BTreeMap<Vec<u32>, usize>) -> SparseVec {
        let mut v: SparseVec = self
            .terms
            .iter()
            .map(|(e, c)| (basis_index[e], c.clone()))
            .collect();
        v.sort_by_key(|(i, _)| *i);
        v
    }
}

/// All exponent vectors of length `n+1` summing to `d`, in descending
/// lexicographic order: `x_0^d` first, `x_n^d` last. Stable contract.
pub fn monomial_basis(n: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; n + 1];
    fill_basis(&mut out, &mut current, 0, d);
    out
}

fn fill_basis(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, pos: usize, remaining: u32) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(current.clone());
        current[pos] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        fill_basis(out, current, pos + 1, remaining - e);
        current[pos] = 0;
    }
}

/// Index lookup for `monomial_basis(n, d)`.
pub fn basis_index(n: usize, d: u32) -> BTreeMap<Vec<u32>, usize> {
    monomial_basis(n, d)
        .into_iter()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect()
}

/// Number of monomials of degree `d` in `n+1` variables.
pub fn basis_size(n: usize, d: i64) -> usize {
    if d < 0 {
        return 0;
    }
    // C(d+n, n)
    let mut acc: u128 = 1;
    for i in 1..=n as u128 {
        acc = acc * (d as u128 + i) / i;
    }
    usize::try_from(acc).expect("monomial space dimension fits in usize")
}

/// Matrix of multiplication by `p` from degree `d_from` to degree
/// `d_from + deg p`, on the graded-lex monomial bases.
pub fn multiplication_matrix(p: &HomogPoly, d_from: u32) -> RationalMatrix {
    let n = p.num_vars - 1;
    let source = monomial_basis(n, d_from);
    let target_index = basis_index(n, d_from + p.degree);
    let mut m = RationalMatrix::zero(target_index.len(), source.len());
    for (col, mu) in source.iter().enumerate() {
        for (e, c) in &p.terms {
            let exps: Vec<u32> = mu.iter().zip(e).map(|(a, b)| a + b).collect();
            m.set(target_index[&exps], col, c.clone());
        }
    }
    m
}

/// Exact smoothness certificate for the projective hypersurface `s = 0`.
///
/// The partial derivatives have no common projective zero iff they span
/// every form of degree `N0 = (n+1)(d-2)+1` (the degree just past the
/// socle of the Jacobian ring of a smooth hypersurface), which is a rank
/// condition on the matrix of monomial multiples of the partials.
pub fn jacobian_smoothness_check(s: &HomogPoly) -> Result<bool, PolyError> {
    if s.degree < 2 {
        return Err(PolyError::DegreeTooSmall(s.degree));
    }
    let n = s.num_vars - 1;
    let d = s.degree;
    let n0 = (n as u32 + 1) * (d - 2) + 1;
    let target_index = basis_index(n, n0);
    let mult_degree = n0 - (d - 1);
    let multipliers = monomial_basis(n, mult_degree);
    let mut columns: Vec<SparseVec> = Vec::new();
    for k in 0..=n {
        let pk = s.partial_derivative(k);
        if pk.is_zero() {
            continue;
        }
        for mu in &multipliers {
            let mut col: SparseVec = pk
                .terms
                .iter()
                .map(|(e, c)| {
                    let exps: Vec<u32> = mu.iter().zip(e).map(|(a, b)| a + b).collect();
                    (target_index[&exps], c.clone())
                })
                .collect();
            col.sort_by_key(|(i, _)| *i);
            columns.push(col);
        }
    }
    let m = RationalMatrix::from_columns(target_index.len(), &columns);
    Ok(m.rank() == target_index.len())
}

/// Searches for a projective point with coordinates in {-1, 0, 1} where
/// every partial derivative of `s` vanishes. Cheap witness finder for the
/// common singular examples; the rank certificate above is the authority.
pub fn find_singular_witness(s: &HomogPoly) -> Option<Vec<i64>> {
    let nv = s.num_vars;
    let partials: Vec<HomogPoly> = (0..nv).map(|k| s.partial_derivative(k)).collect();
    for point in candidate_points(nv) {
        let coords: Vec<BigRational> = point
            .iter()
            .map(|c| BigRational::from_i64(*c).unwrap())
            .collect();
        if partials.iter().all(|p| p.eval(&coords).is_zero()) {
            return Some(point);
        }
    }
    None
}

fn candidate_points(nv: usize) -> Vec<Vec<i64>> {
    // projective representatives: first nonzero coordinate equals 1,
    // remaining coordinates in {-1, 0, 1}
    let mut out = Vec::new();
    for first in 0..nv {
        let tail = nv - first - 1;
        for mask in 0..3usize.pow(tail as u32) {
            let mut p = vec![0i64; nv];
            p[first] = 1;
            let mut m = mask;
            for t in 0..tail {
                p[first + 1 + t] = [0, 1, -1][m % 3];
                m /= 3;
            }
            out.push(p);
        }
    }
    out
}

/// Outcome of a normal-crossing sampling check. `Fail` is only reported
/// with an exactly verified witness; modular-only evidence stays
/// inconclusive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Transversality {
    Pass { points_checked: usize },
    Fail { witness: Vec<i64>, reason: String },
    Inconclusive { reason: String },
}

impl Transversality {
    pub fn is_fail(&self) -> bool {
        matches!(self, Transversality::Fail { .. })
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Transversality::Pass { .. })
    }
}

/// Pairwise normal-crossing check for two branch sections: the two
/// divisors must meet transversally wherever they meet.
pub fn pairwise_transversality_check(
    a: &HomogPoly,
    b: &HomogPoly,
    trials: u32,
    primes: &[u64],
) -> Transversality {
    if a.is_proportional_to(b) {
        return Transversality::Fail {
            witness: vec![],
            reason: "sections cut out identical divisors".into(),
        };
    }
    multiway_transversality_check(&[a, b], trials, primes)
}

/// Normal-crossing check for any number of sections: wherever all of them
/// vanish simultaneously, their Jacobian must have full rank (and more
/// sections than the ambient dimension may never meet at all).
pub fn multiway_transversality_check(
    sections: &[&HomogPoly],
    trials: u32,
    primes: &[u64],
) -> Transversality {
    let t = sections.len();
    assert!(t >= 2, "need at least two sections");
    let nv = sections[0].num_vars;
    assert!(sections.iter().all(|s| s.num_vars == nv));
    let n = nv - 1;
    let partials: Vec<Vec<HomogPoly>> = sections
        .iter()
        .map(|s| (0..nv).map(|k| s.partial_derivative(k)).collect())
        .collect();

    // exact sweep over small candidate points
    for point in candidate_points(nv) {
        if let Some(fail) = exact_point_failure(sections, &partials, &point, n) {
            return fail;
        }
    }

    // modular sampling
    let mut checked = 0usize;
    let mut unverified: Option<String> = None;
    for &p in primes {
        let Some(modular) = ModularSections::reduce(sections, &partials, p) else {
            continue; // a denominator vanishes mod p
        };
        for point in modular_points(nv, p, trials) {
            if !modular.all_vanish(&point) {
                continue;
            }
            checked += 1;
            let rank = modular.jacobian_rank(&point);
            let bad = t > n || rank < t;
            if bad {
                let lifted: Vec<i64> = point
                    .iter()
                    .map(|&c| {
                        let c = c as i64;
                        if c as u64 > p / 2 {
                            c - p as i64
                        } else {
                            c
                        }
                    })
                    .collect();
                if let Some(fail) = exact_point_failure(sections, &partials, &lifted, n) {
                    return fail;
                }
                unverified = Some(format!(
                    "non-transverse intersection point mod {p} could not be verified exactly"
                ));
            }
        }
    }
    if let Some(reason) = unverified {
        return Transversality::Inconclusive { reason };
    }
    if checked == 0 {
        return Transversality::Inconclusive {
            reason: "no intersection points found over the sampled primes".into(),
        };
    }
    Transversality::Pass {
        points_checked: checked,
    }
}

fn exact_point_failure(
    sections: &[&HomogPoly],
    partials: &[Vec<HomogPoly>],
    point: &[i64],
    n: usize,
) -> Option<Transversality> {
    if point.iter().all(|c| *c == 0) {
        return None;
    }
    let coords: Vec<BigRational> = point
        .iter()
        .map(|c| BigRational::from_i64(*c).unwrap())
        .collect();
    if !sections.iter().all(|s| s.eval(&coords).is_zero()) {
        return None;
    }
    let t = sections.len();
    if t > n {
        return Some(Transversality::Fail {
            witness: point.to_vec(),
            reason: format!("{t} branch divisors meet at a point of {n}-dimensional space"),
        });
    }
    let rows: Vec<Vec<BigRational>> = partials
        .iter()
        .map(|ps| ps.iter().map(|p| p.eval(&coords)).collect())
        .collect();
    let jac = RationalMatrix::from_rows(&rows);
    if jac.rank() < t {
        return Some(Transversality::Fail {
            witness: point.to_vec(),
            reason: "branch divisors are tangent at a common point".into(),
        });
    }
    None
}

struct ModularSections {
    nv: usize,
    p: u64,
    sections: Vec<Vec<(Vec<u32>, u64)>>,
    partials: Vec<Vec<Vec<(Vec<u32>, u64)>>>,
}

impl ModularSections {
    fn reduce(
        sections: &[&HomogPoly],
        partials: &[Vec<HomogPoly>],
        p: u64,
    ) -> Option<ModularSections> {
        let red = |poly: &HomogPoly| -> Option<Vec<(Vec<u32>, u64)>> {
            poly.terms
                .iter()
                .map(|(e, c)| {
                    let den = mod_reduce(c.denom(), p);
                    if den == 0 {
                        return None;
                    }
                    let num = mod_reduce(c.numer(), p);
                    Some((e.clone(), mulmod(num, powmod(den, p - 2, p), p)))
                })
                .collect()
        };
        Some(ModularSections {
            nv: sections[0].num_vars,
            p,
            sections: sections.iter().map(|s| red(s)).collect::<Option<_>>()?,
            partials: partials
                .iter()
                .map(|ps| ps.iter().map(red).collect::<Option<_>>())
                .collect::<Option<_>>()?,
        })
    }

    fn eval(&self, terms: &[(Vec<u32>, u64)], point: &[u64]) -> u64 {
        let p = self.p;
        let mut acc = 0u64;
        for (e, c) in terms {
            let mut term = *c;
            for (x, exp) in point.iter().zip(e) {
                if *exp > 0 {
                    term = mulmod(term, powmod(*x, *exp as u64, p), p);
                }
            }
            acc = (acc + term) % p;
        }
        acc
    }

    fn all_vanish(&self, point: &[u64]) -> bool {
        self.sections.iter().all(|s| self.eval(s, point) == 0)
    }

    fn jacobian_rank(&self, point: &[u64]) -> usize {
        let p = self.p;
        let mut rows: Vec<Vec<u64>> = self
            .partials
            .iter()
            .map(|ps| ps.iter().map(|q| self.eval(q, point)).collect())
            .collect();
        let mut rank = 0;
        for col in 0..self.nv {
            let Some(pr) = (rank..rows.len()).find(|r| rows[*r][col] != 0) else {
                continue;
            };
            rows.swap(rank, pr);
            let inv = powmod(rows[rank][col], p - 2, p);
            for r in rank + 1..rows.len() {
                if rows[r][col] != 0 {
                    let f = mulmod(rows[r][col], inv, p);
                    for c in col..self.nv {
                        let sub = mulmod(f, rows[rank][c], p);
                        rows[r][c] = (rows[r][c] + p - sub) % p;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

/// Points of projective n-space over F_p: exhaustive for n <= 3, a seeded
/// deterministic sample of `trials * 4096` points otherwise.
fn modular_points(nv: usize, p: u64, trials: u32) -> Vec<Vec<u64>> {
    let n = nv - 1;
    if n <= 3 {
        let mut out = Vec::new();
        for first in 0..nv {
            let tail = nv - first - 1;
            let mut counter = vec![0u64; tail];
            loop {
                let mut pt = vec![0u64; nv];
                pt[first] = 1;
                pt[first + 1..].copy_from_slice(&counter);
                out.push(pt);
                let mut pos = tail;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    counter[pos] += 1;
                    if counter[pos] < p {
                        break;
                    }
                    counter[pos] = 0;
                }
                if counter.iter().all(|c| *c == 0) {
                    break;
                }
            }
        }
        out
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(p ^ 0x7261_6e64);
        let count = trials.max(1) as usize * 4096;
        (0..count)
            .map(|_| {
                let mut pt: Vec<u64> = (0..nv).map(|_| rng.gen_range(0..p)).collect();
                if pt.iter().all(|c| *c == 0) {
                    pt[0] = 1;
                }
                pt
            })
            .collect()
    }
}

fn mod_reduce(v: &BigInt, p: u64) -> u64 {
    use num::Integer;
    use num::ToPrimitive;
    v.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Deterministic dense polynomial with integer coefficients in [-10, 10];
/// the same seed always yields the same polynomial, and the zero
/// polynomial is redrawn.
pub fn random_section(n: usize, degree: u32, seed: u64) -> HomogPoly {
    let basis = monomial_basis(n, degree);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let terms: Vec<(Vec<u32>, BigRational)> = basis
            .iter()
            .map(|e| {
                (
                    e.clone(),
                    BigRational::from_i64(rng.gen_range(-10..=10)).unwrap(),
                )
            })
            .collect();
        let p = HomogPoly::from_terms(n + 1, degree, terms).expect("homogeneous by construction");
        if !p.is_zero() {
            return p;
        }
    }
}

/// One defining relation `z_chi z_phi = (prod_i s_i^eps) z_{chi phi}` of
/// the cover inside the eigensheaf bundle.
#[derive(Debug, Clone)]
pub struct CoverRelation {
    pub chi: Character,
    pub phi: Character,
    pub product_character: Character,
    pub epsilons: Vec<u8>,
    pub section_product: HomogPoly,
}

/// The full relation list: one entry per ordered pair of nontrivial
/// characters, `(m-1)^2` in total.
#[derive(Debug, Clone)]
pub struct CoverEquations {
    pub ambient_dim: usize,
    pub relations: Vec<CoverRelation>,
}

/// Emits the defining equations of the cover. Every relation is checked
/// for degree balance against the eigensheaf degrees before emission.
pub fn cover_equations(cover: &CoverData) -> Result<CoverEquations, PolyError> {
    let group = cover.group();
    let n = cover.ambient_dim();
    let sections: Vec<&HomogPoly> = cover
        .branch()
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let s = b.section.as_ref().ok_or(PolyError::MissingSection(i))?;
            if s.degree() != b.degree {
                return Err(PolyError::DegreeMismatch {
                    index: i,
                    expected: b.degree,
                    got: s.degree(),
                });
            }
            Ok(s)
        })
        .collect::<Result<_, _>>()?;

    let nontrivial: Vec<Character> = group
        .enumerate_characters()
        .into_iter()
        .filter(|c| !c.is_trivial())
        .collect();
    let mut relations = Vec::with_capacity(nontrivial.len() * nontrivial.len());
    for chi in &nontrivial {
        for phi in &nontrivial {
            let product_character = group.character_mul(chi, phi).expect("same group");
            let epsilons: Vec<u8> = (0..cover.branch().len())
                .map(|i| cover.epsilon(i, chi, phi))
                .collect();
            let mut section_product =
                HomogPoly::from_terms(n + 1, 0, [(vec![0; n + 1], BigRational::one())]).unwrap();
            for (i, eps) in epsilons.iter().enumerate() {
                if *eps == 1 {
                    section_product = section_product.mul(sections[i]);
                }
            }
            // degree balance: l_chi + l_phi = l_{chi phi} + deg(prod)
            let lhs = cover.eigensheaf_degree(chi) + cover.eigensheaf_degree(phi);
            let rhs = cover.eigensheaf_degree(&product_character)
                + i64::from(section_product.degree());
            debug_assert_eq!(lhs, rhs, "fundamental relations violated at emission");
            if lhs != rhs {
                return Err(PolyError::DegreeMismatch {
                    index: usize::MAX,
                    expected: lhs as u32,
                    got: rhs as u32,
                });
            }
            relations.push(CoverRelation {
                chi: chi.clone(),
                phi: phi.clone(),
                product_character,
                epsilons,
                section_product,
            });
        }
    }
    Ok(CoverEquations {
        ambient_dim: n,
        relations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_i64(n).unwrap()
    }

    pub(crate) fn fermat(n: usize, d: u32) -> HomogPoly {
        HomogPoly::from_terms(
            n + 1,
            d,
            (0..=n).map(|k| {
                let mut e = vec![0u32; n + 1];
                e[k] = d;
                (e, rat(1))
            }),
        )
        .unwrap()
    }

    #[test]
    fn monomial_basis_counts_and_order() {
        let b = monomial_basis(2, 1);
        assert_eq!(b, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(monomial_basis(2, 6).len(), 28);
        assert_eq!(monomial_basis(3, 2).len(), 10);
        assert_eq!(basis_size(2, 6), 28);
        assert_eq!(basis_size(3, 2), 10);
        assert_eq!(basis_size(2, -1), 0);
        assert_eq!(basis_size(2, 0), 1);
    }

    #[test]
    fn derivative_examples() {
        let p = HomogPoly::monomial(3, vec![6, 0, 0], rat(1)).unwrap();
        let dp = p.partial_derivative(0);
        assert_eq!(dp.degree(), 5);
        assert_eq!(dp.coefficient(&[5, 0, 0]), rat(6));
        assert!(p.partial_derivative(1).is_zero());
    }

    #[test]
    fn euler_identity_on_random_sections() {
        for seed in 0..5u64 {
            let p = random_section(2, 6, seed);
            let mut acc = HomogPoly::zero(3, 6);
            for k in 0..3 {
                let xk = HomogPoly::monomial(
                    3,
                    {
                        let mut e = vec![0u32; 3];
                        e[k] = 1;
                        e
                    },
                    rat(1),
                )
                .unwrap();
                acc = acc.add(&xk.mul(&p.partial_derivative(k)));
            }
            assert_eq!(acc, p.scale(&rat(6)));
        }
    }

    #[test]
    fn multiplication_matrix_examples() {
        let one = HomogPoly::from_terms(3, 0, [(vec![0, 0, 0], rat(1))]).unwrap();
        let m = multiplication_matrix(&one, 3);
        assert_eq!(m, RationalMatrix::identity(monomial_basis(2, 3).len()));

        let x0 = HomogPoly::monomial(3, vec![1, 0, 0], rat(1)).unwrap();
        let m = multiplication_matrix(&x0, 0);
        assert_eq!(m.rows(), 3);
        assert_eq!(m.cols(), 1);
        assert_eq!(m.get(0, 0), rat(1));

        let s = random_section(2, 4, 3);
        assert_eq!(multiplication_matrix(&s, 0).rank(), 1);
    }

    #[test]
    fn multiplication_matrices_compose() {
        for seed in 0..3u64 {
            let p = random_section(2, 2, seed);
            let q = random_section(2, 3, seed + 50);
            let direct = multiplication_matrix(&p.mul(&q), 1);
            let after_q = multiplication_matrix(&p, 1 + 3);
            let q_first = multiplication_matrix(&q, 1);
            // compare column by column
            for col in 0..direct.cols() {
                let via = after_q.mul_vec(&q_first.col_vec(col));
                assert_eq!(direct.col_vec(col), via);
            }
        }
    }

    #[test]
    fn smoothness_fermat_and_singular() {
        assert!(jacobian_smoothness_check(&fermat(2, 6)).unwrap());

        // x0^6 + x1^6 is singular at (0:0:1)
        let s = HomogPoly::from_terms(3, 6, [(vec![6, 0, 0], rat(1)), (vec![0, 6, 0], rat(1))])
            .unwrap();
        assert!(!jacobian_smoothness_check(&s).unwrap());
        assert_eq!(find_singular_witness(&s), Some(vec![0, 0, 1]));

        let generic = random_section(2, 4, 7);
        assert!(jacobian_smoothness_check(&generic).unwrap());

        let linear = HomogPoly::monomial(3, vec![1, 0, 0], rat(1)).unwrap();
        assert!(matches!(
            jacobian_smoothness_check(&linear),
            Err(PolyError::DegreeTooSmall(1))
        ));
    }

    #[test]
    fn smoothness_invariant_under_scaling_and_permutation() {
        let s = random_section(2, 4, 9);
        let verdict = jacobian_smoothness_check(&s).unwrap();
        let scaled = s.scale(&BigRational::new(BigInt::from(-3), BigInt::from(7)));
        assert_eq!(jacobian_smoothness_check(&scaled).unwrap(), verdict);
        // permutation x0 <-> x2
        let perm: Vec<Vec<BigRational>> = vec![
            vec![rat(0), rat(0), rat(1)],
            vec![rat(0), rat(1), rat(0)],
            vec![rat(1), rat(0), rat(0)],
        ];
        let permuted = s.linear_substitution(&perm).unwrap();
        assert_eq!(jacobian_smoothness_check(&permuted).unwrap(), verdict);
    }

    #[test]
    fn transversality_identical_and_tangent() {
        let s = random_section(2, 4, 5);
        let same = s.scale(&rat(3));
        assert!(pairwise_transversality_check(&s, &same, 2, &[31, 37]).is_fail());

        // tangent conics at (0:0:1)
        let c1 = HomogPoly::from_terms(3, 2, [(vec![1, 0, 1], rat(1)), (vec![0, 2, 0], rat(-1))])
            .unwrap();
        let c2 = c1
            .add(&HomogPoly::monomial(3, vec![2, 0, 0], rat(1)).unwrap());
        let verdict = pairwise_transversality_check(&c1, &c2, 2, &[31, 37]);
        match verdict {
            Transversality::Fail { witness, .. } => assert_eq!(witness, vec![0, 0, 1]),
            other => panic!("expected tangency failure, got {other:?}"),
        }
    }

    #[test]
    fn transversality_generic_quartics_pass() {
        let a = random_section(2, 4, 11);
        let b = random_section(2, 4, 12);
        let verdict = pairwise_transversality_check(&a, &b, 2, &[31, 37, 41]);
        assert!(verdict.is_pass(), "got {verdict:?}");
    }

    #[test]
    fn random_section_is_deterministic() {
        let a = random_section(2, 6, 1);
        let b = random_section(2, 6, 1);
        assert_eq!(a, b);
        assert_eq!(random_section(2, 1, 4).degree(), 1);
        // generator audit: seed 2 in degree 4 fills 14 of the 15 slots
        let c = random_section(2, 4, 2);
        assert_eq!(c.num_terms(), 14);
    }

    #[test]
    fn linear_substitution_preserves_evaluation() {
        let s = random_section(2, 3, 21);
        let a: Vec<Vec<BigRational>> = vec![
            vec![rat(1), rat(1), rat(0)],
            vec![rat(0), rat(1), rat(2)],
            vec![rat(1), rat(0), rat(1)],
        ];
        let t = s.linear_substitution(&a).unwrap();
        let x = [rat(2), rat(-1), rat(3)];
        let ax: Vec<BigRational> = (0..3)
            .map(|k| (0..3).map(|j| &a[k][j] * &x[j]).sum())
            .collect();
        assert_eq!(t.eval(&x), s.eval(&ax));
    }
}
