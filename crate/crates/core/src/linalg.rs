//! Sparse exact linear algebra over the rationals.
//!
//! All elimination is fraction-free: rows are scaled to primitive integer
//! vectors and combined by integer cross-multiplication, with a gcd
//! normalization after every step to keep coefficients small. Rational
//! numbers only appear in the final Jordan pass and in kernel vectors, so
//! every reported rank, kernel and intersection is exact. Pivots are chosen
//! deterministically (first eligible row in column-major order), which makes
//! reduced bases reproducible across runs and thread counts.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use thiserror::Error;

/// Sparse vector: strictly increasing indices, nonzero entries.
pub type SparseVec = Vec<(usize, BigRational)>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("ambient dimensions differ: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("matrix shapes incompatible: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("proposed basis columns are linearly dependent")]
    DependentBasis,
    #[error("vector length {0} does not match ambient dimension {1}")]
    VectorLength(usize, usize),
}

/// Sparse exact rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigRational>,
}

impl RationalMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    /// Assembles a matrix from sparse columns.
    pub fn from_columns(rows: usize, columns: &[SparseVec]) -> Self {
        let mut m = Self::zero(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            for (r, v) in col {
                debug_assert!(*r < rows);
                m.set(*r, c, v.clone());
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<BigRational>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zero(nrows, ncols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged row lengths");
            for (c, v) in row.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> BigRational {
        self.entries
            .get(&(r, c))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &BigRational)> {
        self.entries.iter()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero(self.cols, self.rows);
        for ((r, c), v) in &self.entries {
            m.entries.insert((*c, *r), v.clone());
        }
        m
    }

    pub fn row_vec(&self, r: usize) -> SparseVec {
        self.entries
            .range((r, 0)..(r + 1, 0))
            .map(|((_, c), v)| (*c, v.clone()))
            .collect()
    }

    pub fn col_vec(&self, c: usize) -> SparseVec {
        (0..self.rows)
            .filter_map(|r| self.entries.get(&(r, c)).map(|v| (r, v.clone())))
            .collect()
    }

    fn sparse_rows(&self) -> Vec<SparseVec> {
        let mut out = vec![Vec::new(); self.rows];
        for ((r, c), v) in &self.entries {
            out[*r].push((*c, v.clone()));
        }
        out
    }

    /// Stacks `self` on top of `other`.
    pub fn stack(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.cols {
            return Err(LinalgError::ShapeMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let mut m = Self::zero(self.rows + other.rows, self.cols);
        for ((r, c), v) in &self.entries {
            m.entries.insert((*r, *c), v.clone());
        }
        for ((r, c), v) in &other.entries {
            m.entries.insert((r + self.rows, *c), v.clone());
        }
        Ok(m)
    }

    /// Places `self` and `other` side by side.
    pub fn augment(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.rows != other.rows {
            return Err(LinalgError::ShapeMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let mut m = Self::zero(self.rows, self.cols + other.cols);
        for ((r, c), v) in &self.entries {
            m.entries.insert((*r, *c), v.clone());
        }
        for ((r, c), v) in &other.entries {
            m.entries.insert((*r, c + self.cols), v.clone());
        }
        Ok(m)
    }

    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (c, x) in v {
            debug_assert!(*c < self.cols);
            for r in 0..self.rows {
                if let Some(e) = self.entries.get(&(r, *c)) {
                    let slot = acc.entry(r).or_insert_with(BigRational::zero);
                    *slot += e * x;
                }
            }
        }
        acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
    }

    /// Exact rank via fraction-free elimination.
    pub fn rank(&self) -> usize {
        forward_eliminate(to_integer_rows(self.sparse_rows())).len()
    }

    /// Rank modulo a word-sized prime; a fast filter only, never a
    /// substitute for [`RationalMatrix::rank`]. Returns `None` when some
    /// denominator vanishes modulo `p`. The modular rank never exceeds the
    /// exact rank.
    pub fn rank_modular(&self, p: u64) -> Option<usize> {
        assert!(p > 1 && p < (1 << 31), "prime out of range");
        let mut rows: Vec<Vec<(usize, u64)>> = vec![Vec::new(); self.rows];
        for ((r, c), v) in &self.entries {
            let num = bigint_mod(v.numer(), p);
            let den = bigint_mod(v.denom(), p);
            if den == 0 {
                return None;
            }
            let e = mulmod(num, inv_mod(den, p), p);
            if e != 0 {
                rows[*r].push((*c, e));
            }
        }
        let mut rank = 0;
        let mut work: Vec<Vec<(usize, u64)>> = rows.into_iter().filter(|r| !r.is_empty()).collect();
        while !work.is_empty() {
            let lead = work.iter().map(|r| r[0].0).min().unwrap();
            let pi = work.iter().position(|r| r[0].0 == lead).unwrap();
            let pivot = work.remove(pi);
            rank += 1;
            let pinv = inv_mod(pivot[0].1, p);
            work = work
                .into_iter()
                .filter_map(|row| {
                    if row[0].0 != lead {
                        return Some(row);
                    }
                    let f = mulmod(row[0].1, pinv, p);
                    let mut out: Vec<(usize, u64)> = Vec::new();
                    let mut i = 0;
                    let mut j = 0;
                    while i < row.len() || j < pivot.len() {
                        if j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0) {
                            out.push(row[i].clone());
                            i += 1;
                        } else if i >= row.len() || pivot[j].0 < row[i].0 {
                            let v = (p - mulmod(f, pivot[j].1, p)) % p;
                            if v != 0 {
                                out.push((pivot[j].0, v));
                            }
                            j += 1;
                        } else {
                            let v = (row[i].1 + p - mulmod(f, pivot[j].1, p)) % p;
                            if v != 0 {
                                out.push((row[i].0, v));
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                    if out.is_empty() {
                        None
                    } else {
                        Some(out)
                    }
                })
                .collect();
        }
        Some(rank)
    }

    /// Basis of the right kernel `{v : Mv = 0}`; dimension is
    /// `cols - rank`. Basis vectors are primitive integer vectors, one per
    /// free column in ascending column order.
    pub fn kernel_basis(&self) -> Subspace {
        let rref = rref_of_rows(self.sparse_rows(), self.cols);
        let pivot_set: std::collections::BTreeSet<usize> = rref.pivots.iter().copied().collect();
        let mut columns = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v: Vec<(usize, BigRational)> = vec![(free, BigRational::one())];
            for (ri, p) in rref.pivots.iter().enumerate() {
                if let Some((_, coeff)) = rref.rows[ri].iter().find(|(c, _)| *c == free) {
                    v.push((*p, -coeff.clone()));
                }
            }
            v.sort_by_key(|(c, _)| *c);
            columns.push(normalize_primitive(v));
        }
        Subspace {
            ambient_dim: self.cols,
            basis: RationalMatrix::from_columns(self.cols, &columns),
        }
    }
}

/// A linear subspace of Q^ambient, stored as an independent column basis.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient_dim: usize,
    basis: RationalMatrix,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: RationalMatrix::zero(ambient_dim, 0),
        }
    }

    /// Wraps a matrix whose columns are already known to be independent;
    /// fails otherwise.
    pub fn from_basis(basis: RationalMatrix) -> Result<Self, LinalgError> {
        if basis.rank() != basis.cols() {
            return Err(LinalgError::DependentBasis);
        }
        Ok(Subspace {
            ambient_dim: basis.rows(),
            basis,
        })
    }

    /// Span of arbitrary columns: keeps the deterministic maximal
    /// independent subset (the pivot columns of the row-reduced matrix).
    pub fn from_span(m: &RationalMatrix) -> Self {
        let rref = rref_of_rows(m.sparse_rows(), m.cols());
        let keep: Vec<SparseVec> = rref.pivots.iter().map(|c| m.col_vec(*c)).collect();
        Subspace {
            ambient_dim: m.rows(),
            basis: RationalMatrix::from_columns(m.rows(), &keep),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &RationalMatrix {
        &self.basis
    }

    pub fn contains(&self, v: &SparseVec) -> Result<bool, LinalgError> {
        for (i, _) in v {
            if *i >= self.ambient_dim {
                return Err(LinalgError::VectorLength(i + 1, self.ambient_dim));
            }
        }
        let mut rows: Vec<SparseVec> = (0..self.dim()).map(|c| self.basis.col_vec(c)).collect();
        rows.push(v.clone());
        Ok(forward_eliminate(to_integer_rows(rows)).len() == self.dim())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool, LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::AmbientMismatch(
                self.ambient_dim,
                other.ambient_dim,
            ));
        }
        let mut rows: Vec<SparseVec> = (0..self.dim()).map(|c| self.basis.col_vec(c)).collect();
        rows.extend((0..other.dim()).map(|c| other.basis.col_vec(c)));
        Ok(forward_eliminate(to_integer_rows(rows)).len() == self.dim())
    }

    /// Intersection via the kernel of the stacked system
    /// `[A | -B] (x, y)^T = 0`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::AmbientMismatch(
                self.ambient_dim,
                other.ambient_dim,
            ));
        }
        let mut neg = other.basis.clone();
        let keys: Vec<(usize, usize)> = neg.entries.keys().copied().collect();
        for k in keys {
            let v = -neg.entries[&k].clone();
            neg.entries.insert(k, v);
        }
        let stacked = self.basis.augment(&neg)?;
        let ker = stacked.kernel_basis();
        let mut cols = Vec::new();
        for c in 0..ker.dim() {
            let xy = ker.basis.col_vec(c);
            let x_part: SparseVec = xy
                .into_iter()
                .filter(|(i, _)| *i < self.dim())
                .collect();
            let img = self.basis.mul_vec(&x_part);
            if !img.is_empty() {
                cols.push(normalize_primitive(img));
            }
        }
        let span = RationalMatrix::from_columns(self.ambient_dim, &cols);
        Ok(Subspace::from_span(&span))
    }

    /// Smallest subspace containing both.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::AmbientMismatch(
                self.ambient_dim,
                other.ambient_dim,
            ));
        }
        Ok(Subspace::from_span(&self.basis.augment(&other.basis)?))
    }
}

/// Dimension of `Q^total / image`.
pub fn quotient_dim(total_dim: usize, image: &Subspace) -> Result<usize, LinalgError> {
    if image.ambient_dim() != total_dim {
        return Err(LinalgError::AmbientMismatch(total_dim, image.ambient_dim()));
    }
    Ok(total_dim - image.dim())
}

// ---------------------------------------------------------------------------
// Elimination engine
// ---------------------------------------------------------------------------

type IntRow = Vec<(usize, BigInt)>;

/// Fully Jordan-reduced row echelon form of a row family.
#[derive(Debug, Clone)]
pub(crate) struct Rref {
    /// Pivot column of each row, strictly increasing.
    pub pivots: Vec<usize>,
    /// Rows with pivot coefficient 1 and zero entries in all other pivot
    /// columns; sorted by column index.
    pub rows: Vec<SparseVec>,
}

fn to_integer_rows(rows: Vec<SparseVec>) -> Vec<IntRow> {
    rows.into_iter()
        .filter_map(|row| {
            if row.is_empty() {
                return None;
            }
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
            let ints: IntRow = row
                .iter()
                .map(|(c, v)| (*c, v.numer() * (&lcm / v.denom())))
                .collect();
            Some(normalize_int_row(ints))
        })
        .collect()
}

fn normalize_int_row(mut row: IntRow) -> IntRow {
    row.retain(|(_, v)| !v.is_zero());
    if row.is_empty() {
        return row;
    }
    let mut g = BigInt::zero();
    for (_, v) in &row {
        g = g.gcd(v);
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
    row
}

/// target*lead(pivot) - pivot*target[col], normalized to a primitive row.
fn cross_eliminate(target: &IntRow, pivot: &IntRow) -> IntRow {
    let p_lead = &pivot[0].1;
    let t_lead = &target[0].1;
    debug_assert_eq!(pivot[0].0, target[0].0);
    let mut out: IntRow = Vec::with_capacity(target.len() + pivot.len());
    let mut i = 0;
    let mut j = 0;
    while i < target.len() || j < pivot.len() {
        if j >= pivot.len() || (i < target.len() && target[i].0 < pivot[j].0) {
            out.push((target[i].0, &target[i].1 * p_lead));
            i += 1;
        } else if i >= target.len() || pivot[j].0 < target[i].0 {
            out.push((pivot[j].0, -(&pivot[j].1 * t_lead)));
            j += 1;
        } else {
            let v = &target[i].1 * p_lead - &pivot[j].1 * t_lead;
            if !v.is_zero() {
                out.push((target[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    normalize_int_row(out)
}

/// Forward elimination; returns the echelon rows ordered by pivot column.
fn forward_eliminate(rows: Vec<IntRow>) -> Vec<IntRow> {
    let mut work: Vec<IntRow> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    let mut echelon: Vec<IntRow> = Vec::new();
    while !work.is_empty() {
        let lead = work.iter().map(|r| r[0].0).min().unwrap();
        let pi = work.iter().position(|r| r[0].0 == lead).unwrap();
        let pivot = work.remove(pi);
        work = work
            .into_iter()
            .filter_map(|row| {
                let next = if row[0].0 == lead {
                    cross_eliminate(&row, &pivot)
                } else {
                    row
                };
                if next.is_empty() {
                    None
                } else {
                    Some(next)
                }
            })
            .collect();
        echelon.push(pivot);
    }
    echelon
}

pub(crate) fn rref_of_rows(rows: Vec<SparseVec>, _ncols: usize) -> Rref {
    let echelon = forward_eliminate(to_integer_rows(rows));
    let pivots: Vec<usize> = echelon.iter().map(|r| r[0].0).collect();
    // Jordan pass, done rationally with pivots scaled to 1.
    let mut rat: Vec<SparseVec> = echelon
        .iter()
        .map(|row| {
            let lead = BigRational::from(row[0].1.clone());
            row.iter()
                .map(|(c, v)| (*c, BigRational::from(v.clone()) / &lead))
                .collect()
        })
        .collect();
    for i in (0..rat.len()).rev() {
        let p = pivots[i];
        for j in 0..i {
            let coeff = rat[j]
                .iter()
                .find(|(c, _)| *c == p)
                .map(|(_, v)| v.clone());
            if let Some(coeff) = coeff {
                let lower = rat[i].clone();
                rat[j] = sparse_axpy(&rat[j], &lower, &-coeff);
            }
        }
    }
    Rref { pivots, rows: rat }
}

/// a + t*b for sorted sparse vectors.
pub(crate) fn sparse_axpy(a: &SparseVec, b: &SparseVec, t: &BigRational) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut j = 0;
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            let v = t * &b[j].1;
            if !v.is_zero() {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = &a[i].1 + t * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Scales a rational vector to a primitive integer vector with positive
/// leading entry.
pub(crate) fn normalize_primitive(v: SparseVec) -> SparseVec {
    if v.is_empty() {
        return v;
    }
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, (_, x)| acc.lcm(x.denom()));
    let ints: Vec<(usize, BigInt)> = v
        .iter()
        .map(|(c, x)| (*c, x.numer() * (&lcm / x.denom())))
        .collect();
    normalize_int_row(ints)
        .into_iter()
        .map(|(c, x)| (c, BigRational::from(x)))
        .collect()
}

fn bigint_mod(v: &BigInt, p: u64) -> u64 {
    use num::ToPrimitive;
    let m = v.mod_floor(&BigInt::from(p));
    m.to_u64().expect("reduced residue fits in u64")
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime in all call sites.
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(result, base, p);
        }
        base = mulmod(base, base, p);
        e >>= 1;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::FromPrimitive;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rat(n: i64) -> BigRational {
        BigRational::from_i64(n).unwrap()
    }

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> RationalMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = RationalMatrix::zero(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, rat(rng.gen_range(-5..=5)));
            }
        }
        m
    }

    #[test]
    fn rank_zero_and_identity() {
        assert_eq!(RationalMatrix::zero(4, 7).rank(), 0);
        assert_eq!(RationalMatrix::identity(5).rank(), 5);
    }

    #[test]
    fn kernel_of_identity_is_zero() {
        let ker = RationalMatrix::identity(4).kernel_basis();
        assert_eq!(ker.dim(), 0);
        assert_eq!(ker.ambient_dim(), 4);
    }

    #[test]
    fn kernel_of_single_zero_row() {
        let m = RationalMatrix::zero(1, 3);
        assert_eq!(m.kernel_basis().dim(), 3);
    }

    #[test]
    fn rank_nullity_on_random_matrices() {
        for seed in 0..6u64 {
            let m = random_matrix(5, 8, seed);
            let r = m.rank();
            let k = m.kernel_basis();
            assert_eq!(r + k.dim(), 8);
            // every kernel vector really is in the kernel
            for c in 0..k.dim() {
                assert!(m.mul_vec(&k.basis().col_vec(c)).is_empty());
            }
        }
        // a generic 5x8 has rank 5, kernel of dimension 3
        let m = random_matrix(5, 8, 1);
        assert_eq!(m.rank(), 5);
        assert_eq!(m.kernel_basis().dim(), 3);
    }

    #[test]
    fn rank_invariant_under_row_scaling() {
        let mut m = random_matrix(6, 6, 3);
        let r = m.rank();
        for c in 0..6 {
            let v = m.get(2, c) * BigRational::new(BigInt::from(7), BigInt::from(3));
            m.set(2, c, v);
        }
        assert_eq!(m.rank(), r);
    }

    #[test]
    fn intersect_self_and_complementary() {
        let a = Subspace::from_span(&random_matrix(6, 4, 11));
        assert_eq!(a.dim(), 4);
        let both = a.intersect(&a).unwrap();
        assert_eq!(both.dim(), 4);

        // complementary coordinate subspaces of Q^4
        let mut e01 = RationalMatrix::zero(4, 2);
        e01.set(0, 0, rat(1));
        e01.set(1, 1, rat(1));
        let mut e23 = RationalMatrix::zero(4, 2);
        e23.set(2, 0, rat(1));
        e23.set(3, 1, rat(1));
        let a = Subspace::from_basis(e01).unwrap();
        let b = Subspace::from_basis(e23).unwrap();
        assert_eq!(a.intersect(&b).unwrap().dim(), 0);
    }

    #[test]
    fn intersect_generic_rank_count() {
        // dim(A ∩ B) = dim A + dim B - dim(A+B); generically 2 for two
        // 4-dimensional subspaces of Q^6.
        for seed in [21u64, 22, 23] {
            let a = Subspace::from_span(&random_matrix(6, 4, seed));
            let b = Subspace::from_span(&random_matrix(6, 4, seed + 100));
            let joint = a.sum(&b).unwrap().dim();
            let expected = a.dim() + b.dim() - joint;
            let got = a.intersect(&b).unwrap();
            assert_eq!(got.dim(), expected);
            assert_eq!(expected, 2, "seed {seed} was not generic");
            // intersection is inside both
            assert!(a.contains_subspace(&got).unwrap());
            assert!(b.contains_subspace(&got).unwrap());
        }
    }

    #[test]
    fn quotient_dims() {
        let zero = Subspace::zero(28);
        assert_eq!(quotient_dim(28, &zero).unwrap(), 28);
        let full = Subspace::from_basis(RationalMatrix::identity(9)).unwrap();
        assert_eq!(quotient_dim(9, &full).unwrap(), 0);
        assert!(quotient_dim(5, &zero).is_err());
    }

    #[test]
    fn modular_rank_matches_exact_generically() {
        for seed in 0..5u64 {
            let m = random_matrix(7, 9, seed);
            let exact = m.rank();
            for p in [1_000_003u64, 65_537, 2_147_483_647] {
                let modular = m.rank_modular(p).unwrap();
                assert!(modular <= exact);
                assert_eq!(modular, exact, "prime {p}, seed {seed}");
            }
        }
    }

    #[test]
    fn modular_rank_never_exceeds_exact_on_unlucky_prime() {
        // 2x2 matrix with determinant 7: rank drops mod 7.
        let m = RationalMatrix::from_rows(&[vec![rat(1), rat(3)], vec![rat(2), rat(13)]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.rank_modular(7).unwrap(), 1);
    }
}
