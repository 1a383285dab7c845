//! Eigenspace Hodge tables, the tangent space of the section parameters,
//! the maps rho_chi, kernel analyses and infinitesimal-Torelli
//! certificates, all assembled from Jacobi-module data.
//!
//! Every eigenspace dimension is computed through the Macaulay
//! identification `U^{k,chi} = R^{k,chi}` with the module twisted by
//! `omega ⊗ L_{chi^{-1}}`; the invariant row comes from Bott's formula.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::ToPrimitive;
use num::{BigRational, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::cover::{check_property_ab_projective, bott_dim, CoverData, PropertyAbReport};
use crate::group::Character;
use crate::jacobi::{JacobiEngine, JacobiError};
use crate::linalg::{LinalgError, RationalMatrix, SparseVec, Subspace};
use crate::poly::{basis_index, monomial_basis, HomogPoly};

#[derive(Debug, Error)]
pub enum IvhsError {
    #[error("cover fails hard validation checks: {0:?}")]
    ValidationFailed(Vec<String>),
    #[error("character is trivial")]
    TrivialCharacter,
    #[error("no nontrivial character fixes branch component {0}; the kernel description is vacuous")]
    EmptyCharacterSet(usize),
    #[error("branch index {0} out of range")]
    BranchIndex(usize),
    #[error(transparent)]
    Jacobi(#[from] JacobiError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn require_valid(cover: &CoverData) -> Result<(), IvhsError> {
    let report = cover.validate();
    if !report.hard_pass {
        let mut reasons = Vec::new();
        if !report.fundamental_relations {
            reasons.push("fundamental relations fail".to_string());
        }
        if !report.total_ramification {
            reasons.push("not totally ramified".to_string());
        }
        if !report.direct_sum {
            reasons.push("direct-sum condition fails".to_string());
        }
        if !(report.degrees_positive && report.eigensheaf_positive) {
            reasons.push("non-positive building-data degree".to_string());
        }
        if reasons.is_empty() {
            reasons.push("an adjoint bundle is not nef".to_string());
        }
        return Err(IvhsError::ValidationFailed(reasons));
    }
    Ok(())
}

/// Shared per-support-set cache of Jacobi engines for one cover.
pub struct CoverEngines<'a> {
    cover: &'a CoverData,
    engines: BTreeMap<Vec<usize>, Arc<JacobiEngine>>,
}

impl<'a> CoverEngines<'a> {
    /// Builds engines for every distinct character support plus the full
    /// branch set, certifying section smoothness along the way.
    pub fn new(cover: &'a CoverData) -> Result<Self, IvhsError> {
        let mut engines = BTreeMap::new();
        for chi in cover.nontrivial_characters() {
            let support = cover.support(&chi);
            if !engines.contains_key(&support) {
                let engine = JacobiEngine::for_character(cover, &chi)?;
                engines.insert(support, Arc::new(engine));
            }
        }
        let full: Vec<usize> = (0..cover.branch().len()).collect();
        if !engines.contains_key(&full) {
            engines.insert(full, Arc::new(JacobiEngine::full_branch(cover)?));
        }
        Ok(CoverEngines { cover, engines })
    }

    pub fn cover(&self) -> &CoverData {
        self.cover
    }

    pub fn for_character(&self, chi: &Character) -> Arc<JacobiEngine> {
        self.engines[&self.cover.support(chi)].clone()
    }

    pub fn full_branch(&self) -> Arc<JacobiEngine> {
        let full: Vec<usize> = (0..self.cover.branch().len()).collect();
        self.engines[&full].clone()
    }

    /// Twist of `omega ⊗ L_{chi^{-1}}`, the eigenspace Hodge twist of chi.
    fn hodge_twist(&self, chi: &Character) -> i64 {
        let inv = self.cover.group().character_inverse(chi).unwrap();
        self.cover.eigensheaf_degree(&inv) - (self.cover.ambient_dim() as i64 + 1)
    }
}

/// One row of the eigenspace Hodge table.
#[derive(Debug, Clone)]
pub struct EigenRow {
    pub character: Character,
    pub dims: Vec<usize>,
}

/// Eigenspace Hodge numbers of the middle-dimensional cohomology: one row
/// per nontrivial character plus the invariant row, with column k holding
/// `dim U^{k,chi}`.
#[derive(Debug, Clone)]
pub struct HodgeEigentable {
    pub rows: Vec<EigenRow>,
    pub invariant_row: Vec<usize>,
    pub totals: Vec<usize>,
}

pub fn hodge_eigentable(cover: &CoverData) -> Result<HodgeEigentable, IvhsError> {
    require_valid(cover)?;
    let engines = CoverEngines::new(cover)?;
    hodge_eigentable_with(&engines)
}

pub fn hodge_eigentable_with(engines: &CoverEngines) -> Result<HodgeEigentable, IvhsError> {
    let cover = engines.cover;
    let n = cover.ambient_dim();
    let characters = cover.nontrivial_characters();
    let rows: Vec<EigenRow> = characters
        .par_iter()
        .map(|chi| {
            let engine = engines.for_character(chi);
            let t = engines.hodge_twist(chi);
            let dims = (0..=n).map(|k| engine.jacobi_dim(k, t)).collect();
            EigenRow {
                character: chi.clone(),
                dims,
            }
        })
        .collect();
    let invariant_row: Vec<usize> = (0..=n)
        .map(|k| {
            bott_dim(n, n - k, k, 0)
                .to_usize()
                .expect("invariant Hodge numbers are 0 or 1")
        })
        .collect();
    let totals: Vec<usize> = (0..=n)
        .map(|k| invariant_row[k] + rows.iter().map(|r| r.dims[k]).sum::<usize>())
        .collect();
    Ok(HodgeEigentable {
        rows,
        invariant_row,
        totals,
    })
}

/// Dimension of the invariant part of the deformation space,
/// `dim R^{n-1, inv}` of the full-branch context twisted by
/// `omega^2(D)`.
pub fn invariant_tangent_dim(cover: &CoverData) -> Result<usize, IvhsError> {
    require_valid(cover)?;
    let engine = JacobiEngine::full_branch(cover)?;
    let n = cover.ambient_dim();
    // omega^2(D) has degree -2(n+1) + sum of the branch degrees
    Ok(engine.jacobi_dim(n - 1, engine.ctx().top_twist()))
}

/// The tangent space of the parameter space of section choices:
/// one block `H^0(O(d_i)) / (s_i)` per branch component. The quotient
/// basis of a block drops the first monomial (graded-lex) with nonzero
/// coefficient in `s_i`.
pub struct TangentSpace {
    pub blocks: Vec<TangentBlock>,
    offsets: Vec<usize>,
    total_dim: usize,
}

pub struct TangentBlock {
    pub branch_index: usize,
    pub degree: u32,
    section: HomogPoly,
    monomials: Vec<Vec<u32>>,
    pivot: usize,
    basis_positions: Vec<usize>,
}

impl TangentBlock {
    fn new(branch_index: usize, degree: u32, num_vars: usize, section: HomogPoly) -> Self {
        let monomials = monomial_basis(num_vars - 1, degree);
        let pivot = monomials
            .iter()
            .position(|e| !section.coefficient(e).is_zero())
            .expect("branch section is nonzero");
        let basis_positions = (0..monomials.len()).filter(|p| *p != pivot).collect();
        TangentBlock {
            branch_index,
            degree,
            section,
            monomials,
            pivot,
            basis_positions,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis_positions.len()
    }

    /// Monomial representing the q-th quotient basis vector of the block.
    pub fn basis_monomial(&self, q: usize) -> &[u32] {
        &self.monomials[self.basis_positions[q]]
    }

    /// Coordinates of the class of `f` in `H^0(O(d)) / (s)`.
    pub fn reduce(&self, f: &HomogPoly) -> Vec<BigRational> {
        assert_eq!(f.degree(), self.degree);
        let pivot_exps = &self.monomials[self.pivot];
        let lambda = f.coefficient(pivot_exps) / self.section.coefficient(pivot_exps);
        let g = f.add(&self.section.scale(&-lambda));
        debug_assert!(g.coefficient(pivot_exps).is_zero());
        self.basis_positions
            .iter()
            .map(|p| g.coefficient(&self.monomials[*p]))
            .collect()
    }
}

impl TangentSpace {
    pub fn new(cover: &CoverData) -> Result<Self, IvhsError> {
        let nv = cover.ambient_dim() + 1;
        let mut blocks = Vec::new();
        for (i, b) in cover.branch().iter().enumerate() {
            let s = b
                .section
                .clone()
                .ok_or(JacobiError::MissingSection(i))?;
            blocks.push(TangentBlock::new(i, b.degree, nv, s));
        }
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut total_dim = 0;
        for b in &blocks {
            offsets.push(total_dim);
            total_dim += b.dim();
        }
        Ok(TangentSpace {
            blocks,
            offsets,
            total_dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.total_dim
    }

    pub fn block_offset(&self, i: usize) -> usize {
        self.offsets[i]
    }

    /// The coordinate subspace spanned by one block.
    pub fn block_subspace(&self, i: usize) -> Subspace {
        let mut m = RationalMatrix::zero(self.total_dim, self.blocks[i].dim());
        for q in 0..self.blocks[i].dim() {
            m.set(self.offsets[i] + q, q, BigRational::from_integer(1.into()));
        }
        Subspace::from_basis(m).expect("unit columns are independent")
    }

    /// The tangent vector of the ambient vector field `x_a d/d x_b`:
    /// componentwise application to every branch section, reduced block by
    /// block. These directions span the infinitesimal ambient
    /// automorphisms inside the parameter space.
    pub fn derivation_tuple(&self, a: usize, b: usize) -> SparseVec {
        let mut out: SparseVec = Vec::new();
        for (block, offset) in self.blocks.iter().zip(&self.offsets) {
            let mut exps = vec![0u32; block.monomials[0].len()];
            exps[a] = 1;
            let xa = HomogPoly::from_terms(
                exps.len(),
                1,
                [(exps, BigRational::from_integer(1.into()))],
            )
            .unwrap();
            let theta_s = xa.mul(&block.section.partial_derivative(b));
            for (q, c) in block.reduce(&theta_s).into_iter().enumerate() {
                if !c.is_zero() {
                    out.push((offset + q, c));
                }
            }
        }
        out
    }

    /// Span of all derivation tuples.
    pub fn derivation_subspace(&self, num_vars: usize) -> Subspace {
        let mut cols = Vec::new();
        for a in 0..num_vars {
            for b in 0..num_vars {
                cols.push(self.derivation_tuple(a, b));
            }
        }
        Subspace::from_span(&RationalMatrix::from_columns(self.total_dim, &cols))
    }
}

/// The matrix of `rho_chi : T -> Hom(U^{0,chi}, U^{1,chi})` together with
/// the two eigenspace dimensions. Row `u * dim_u1 + w` corresponds to the
/// pair of the u-th basis vector of `U^0` and the w-th quotient basis
/// vector of `U^1`.
pub struct RhoMap {
    pub chi: Character,
    pub matrix: RationalMatrix,
    pub dim_u0: usize,
    pub dim_u1: usize,
    pub tangent_dim: usize,
}

pub fn rho_map(cover: &CoverData, chi: &Character) -> Result<RhoMap, IvhsError> {
    require_valid(cover)?;
    let engines = CoverEngines::new(cover)?;
    let tangent = TangentSpace::new(cover)?;
    rho_map_with(&engines, &tangent, chi)
}

pub fn rho_map_with(
    engines: &CoverEngines,
    tangent: &TangentSpace,
    chi: &Character,
) -> Result<RhoMap, IvhsError> {
    if chi.is_trivial() {
        return Err(IvhsError::TrivialCharacter);
    }
    let cover = engines.cover;
    let engine = engines.for_character(chi);
    let t = engines.hodge_twist(chi);
    let u0 = engine.piece(0, t);
    let u1 = engine.piece(1, t);
    let dim_u0 = u0.dim();
    let dim_u1 = u1.dim();
    let support = cover.support(chi);

    let mut matrix = RationalMatrix::zero(dim_u0 * dim_u1, tangent.dim());
    for (i, block) in tangent.blocks.iter().enumerate() {
        let Some(slot) = engine.ctx().slot_of(block.branch_index) else {
            continue; // blocks outside the support map to zero
        };
        debug_assert!(support.contains(&block.branch_index));
        let slots = engine.ctx().component_indices().len();
        let mut target_multi = vec![0u32; slots];
        target_multi[slot] = 1;
        for q in 0..block.dim() {
            let f = block.basis_monomial(q);
            let col = tangent.block_offset(i) + q;
            for u in 0..dim_u0 {
                let (_, mu) = u0.quotient_label(u);
                let exps: Vec<u32> = f.iter().zip(mu).map(|(x, y)| x + y).collect();
                let coord = u1
                    .coord(&target_multi, &exps)
                    .expect("product lands in the twist-t piece");
                for (w, c) in u1.reduce_unit(coord) {
                    matrix.set(u * dim_u1 + w, col, c);
                }
            }
        }
    }
    Ok(RhoMap {
        chi: chi.clone(),
        matrix,
        dim_u0,
        dim_u1,
        tangent_dim: tangent.dim(),
    })
}

/// Kernel analysis of the maps `rho_chi` over the characters fixing one
/// branch component. On projective space the ambient automorphisms are
/// nontrivial, so the expected kernel is the block of the component plus
/// the derivation-tuple directions; both spaces are computed and
/// compared.
#[derive(Debug)]
pub struct KernelAnalysis {
    pub branch_index: usize,
    pub characters: Vec<Character>,
    pub kernel_dim: usize,
    pub block_dim: usize,
    pub derivation_dim: usize,
    pub expected_dim: usize,
    pub contains_expected: bool,
    pub equals_expected: bool,
}

pub fn kernel_analysis(cover: &CoverData, branch_index: usize) -> Result<KernelAnalysis, IvhsError> {
    require_valid(cover)?;
    let engines = CoverEngines::new(cover)?;
    let tangent = TangentSpace::new(cover)?;
    kernel_analysis_with(&engines, &tangent, branch_index)
}

pub fn kernel_analysis_with(
    engines: &CoverEngines,
    tangent: &TangentSpace,
    branch_index: usize,
) -> Result<KernelAnalysis, IvhsError> {
    let cover = engines.cover;
    if branch_index >= cover.branch().len() {
        return Err(IvhsError::BranchIndex(branch_index));
    }
    let label = &cover.branch()[branch_index].label;
    let fixing: Vec<Character> = cover
        .nontrivial_characters()
        .into_iter()
        .filter(|chi| cover.group().eval_character(chi, label).unwrap() == 0)
        .collect();
    if fixing.is_empty() {
        return Err(IvhsError::EmptyCharacterSet(branch_index));
    }

    let kernel = kernel_intersection(engines, tangent, &fixing)?;
    let block = tangent.block_subspace(branch_index);
    let derivations = tangent.derivation_subspace(cover.ambient_dim() + 1);
    let expected = block.sum(&derivations)?;
    let contains_expected = kernel.contains_subspace(&expected)?;
    Ok(KernelAnalysis {
        branch_index,
        characters: fixing,
        kernel_dim: kernel.dim(),
        block_dim: block.dim(),
        derivation_dim: derivations.dim(),
        expected_dim: expected.dim(),
        contains_expected,
        equals_expected: contains_expected && kernel.dim() == expected.dim(),
    })
}

/// Intersection of the kernels of `rho_chi` over the given characters, as
/// a subspace of the tangent space.
pub fn kernel_intersection(
    engines: &CoverEngines,
    tangent: &TangentSpace,
    characters: &[Character],
) -> Result<Subspace, IvhsError> {
    let maps: Vec<RhoMap> = characters
        .iter()
        .map(|chi| rho_map_with(engines, tangent, chi))
        .collect::<Result<_, _>>()?;
    let mut stacked = RationalMatrix::zero(0, tangent.dim());
    for m in &maps {
        stacked = stacked.stack(&m.matrix)?;
    }
    Ok(stacked.kernel_basis())
}

/// Intersection over all nontrivial characters; with generic sections
/// this is exactly the derivation-tuple space.
#[derive(Debug)]
pub struct FullKernelIntersection {
    pub dim: usize,
    pub derivation_dim: usize,
    pub equals_derivation_space: bool,
}

pub fn full_kernel_intersection(cover: &CoverData) -> Result<FullKernelIntersection, IvhsError> {
    require_valid(cover)?;
    let engines = CoverEngines::new(cover)?;
    let tangent = TangentSpace::new(cover)?;
    full_kernel_intersection_with(&engines, &tangent)
}

pub fn full_kernel_intersection_with(
    engines: &CoverEngines,
    tangent: &TangentSpace,
) -> Result<FullKernelIntersection, IvhsError> {
    let cover = engines.cover;
    let kernel = kernel_intersection(engines, tangent, &cover.nontrivial_characters())?;
    let derivations = tangent.derivation_subspace(cover.ambient_dim() + 1);
    let contains = kernel.contains_subspace(&derivations)?;
    Ok(FullKernelIntersection {
        dim: kernel.dim(),
        derivation_dim: derivations.dim(),
        equals_derivation_space: contains && kernel.dim() == derivations.dim(),
    })
}

/// Surjectivity verdict for one multiplication map
/// `R^{0,chi} ⊗ R^{n-1,chi} -> R^{n-1,chi}` in the twists of the ordered
/// character pair `(chi, phi)`.
#[derive(Debug, Clone)]
pub struct PairCheck {
    pub chi: Character,
    pub phi: Character,
    pub source_dims: (usize, usize),
    pub target_dim: usize,
    pub rank: usize,
    pub surjective: bool,
}

/// Certificate for the multiplication half of the infinitesimal-Torelli
/// criterion: surjectivity of every map `r*_{chi,phi}` over ordered pairs
/// of nontrivial characters. The complementary kernel-intersection half
/// of the argument relies on an imported lemma and is reported as not
/// checked.
#[derive(Debug)]
pub struct TorelliCertificate {
    pub pairs: Vec<PairCheck>,
    pub r_part_verified: bool,
    pub property_ab: PropertyAbReport,
    pub imported_kernel_lemma: &'static str,
}

pub const IMPORTED_KERNEL_LEMMA_NOTE: &str =
    "not checked: the kernel-intersection half of the injectivity argument quotes an external lemma";

pub fn torelli_certificate(cover: &CoverData) -> Result<TorelliCertificate, IvhsError> {
    require_valid(cover)?;
    let engines = CoverEngines::new(cover)?;
    torelli_certificate_with(&engines)
}

pub fn torelli_certificate_with(engines: &CoverEngines) -> Result<TorelliCertificate, IvhsError> {
    let cover = engines.cover;
    let n = cover.ambient_dim();
    let n1 = n as i64 + 1;
    let characters = cover.nontrivial_characters();
    let group = cover.group();

    let mut tasks = Vec::new();
    for chi in &characters {
        for phi in &characters {
            tasks.push((chi.clone(), phi.clone()));
        }
    }
    let pairs: Vec<PairCheck> = tasks
        .par_iter()
        .map(|(chi, phi)| {
            let engine = engines.for_character(chi);
            let phi_inv = group.character_inverse(phi).unwrap();
            let t1 = cover.eigensheaf_degree(&phi_inv) - n1;
            let t2 = cover.eigensheaf_degree(chi) - n1;
            let p1 = engine.piece(0, t1);
            let p2 = engine.piece(n - 1, t2);
            let target = engine.piece(n - 1, t1 + t2);
            let m = engine
                .multiply(&p1, &p2)
                .expect("pieces come from one engine");
            let rank = m.rank();
            PairCheck {
                chi: chi.clone(),
                phi: phi.clone(),
                source_dims: (p1.dim(), p2.dim()),
                target_dim: target.dim(),
                rank,
                surjective: rank == target.dim(),
            }
        })
        .collect();
    let r_part_verified = pairs.iter().all(|p| p.surjective);
    Ok(TorelliCertificate {
        pairs,
        r_part_verified,
        property_ab: check_property_ab_projective(cover),
        imported_kernel_lemma: IMPORTED_KERNEL_LEMMA_NOTE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::tests::{fermat_double_sextic, seeded_bidouble};

    #[test]
    fn sextic_hodge_table_is_the_classical_one() {
        let cover = fermat_double_sextic();
        let table = hodge_eigentable(&cover).unwrap();
        assert_eq!(table.rows.len(), 1);
        assert_eq!(table.rows[0].dims, vec![1, 19, 1]);
        assert_eq!(table.invariant_row, vec![0, 1, 0]);
        assert_eq!(table.totals, vec![1, 20, 1]);
    }

    #[test]
    fn sextic_invariant_tangent_dim() {
        let cover = fermat_double_sextic();
        assert_eq!(invariant_tangent_dim(&cover).unwrap(), 19);
    }

    #[test]
    fn quartic_double_cover_tangent_dim() {
        // single quartic branch: the full context piece has no image
        // generators at this twist, so the dimension is plain h^0(O(2)) = 6
        use crate::cover::BranchInput;
        use crate::group::AbelianGroup;
        use crate::poly::random_section;
        let group = AbelianGroup::new(vec![2]).unwrap();
        let cover = crate::cover::CoverData::derive(
            2,
            group.clone(),
            vec![BranchInput {
                label: group.element(vec![1]).unwrap(),
                degree: 4,
                section: Some(random_section(2, 4, 31)),
            }],
        )
        .unwrap();
        assert_eq!(invariant_tangent_dim(&cover).unwrap(), 6);
    }

    #[test]
    fn sextic_rho_rank_and_kernel() {
        let cover = fermat_double_sextic();
        let chi = cover.group().character(vec![1]).unwrap();
        let rho = rho_map(&cover, &chi).unwrap();
        assert_eq!(rho.tangent_dim, 27);
        assert_eq!(rho.dim_u0, 1);
        assert_eq!(rho.dim_u1, 19);
        assert_eq!(rho.matrix.rank(), 19);
        assert_eq!(rho.matrix.kernel_basis().dim(), 8);

        // the kernel is exactly the derivation-tuple space
        let tangent = TangentSpace::new(&cover).unwrap();
        let derivations = tangent.derivation_subspace(3);
        assert_eq!(derivations.dim(), 8);
        let kernel = rho.matrix.kernel_basis();
        assert!(kernel.contains_subspace(&derivations).unwrap());
    }

    #[test]
    fn sextic_kernel_analysis_is_vacuous() {
        let cover = fermat_double_sextic();
        assert!(matches!(
            kernel_analysis(&cover, 0),
            Err(IvhsError::EmptyCharacterSet(0))
        ));
    }

    #[test]
    fn rho_rejects_trivial_character() {
        let cover = fermat_double_sextic();
        let triv = cover.group().trivial_character();
        assert!(matches!(
            rho_map(&cover, &triv),
            Err(IvhsError::TrivialCharacter)
        ));
    }

    #[test]
    fn sextic_torelli_certificate() {
        let cover = fermat_double_sextic();
        let cert = torelli_certificate(&cover).unwrap();
        assert_eq!(cert.pairs.len(), 1);
        let pair = &cert.pairs[0];
        assert_eq!(pair.source_dims, (1, 19));
        assert_eq!(pair.target_dim, 19);
        assert!(pair.surjective);
        assert!(cert.r_part_verified);
        assert!(cert.imported_kernel_lemma.contains("not checked"));
    }

    #[test]
    fn rho_factors_through_support_blocks() {
        // columns of blocks outside the support are zero, and the rank is
        // bounded by dim R^{1,chi} with twist 0
        let cover = seeded_bidouble([41, 42, 43]);
        let chi1 = cover.group().character(vec![0, 1]).unwrap();
        let engines = CoverEngines::new(&cover).unwrap();
        let tangent = TangentSpace::new(&cover).unwrap();
        let rho = rho_map_with(&engines, &tangent, &chi1).unwrap();
        // branch 0 is fixed by chi1: its block maps to zero
        for col in 0..tangent.blocks[0].dim() {
            assert!(rho.matrix.col_vec(col).is_empty());
        }
        let engine = engines.for_character(&chi1);
        let bound = engine.jacobi_dim(1, 0);
        let rank = rho.matrix.rank();
        assert!(rank <= bound);
        assert_eq!(rank, bound);
    }

    #[test]
    fn serre_symmetry_of_eigentable() {
        let cover = seeded_bidouble([41, 42, 43]);
        let table = hodge_eigentable(&cover).unwrap();
        let n = cover.ambient_dim();
        let group = cover.group().clone();
        for row in &table.rows {
            let inv = group.character_inverse(&row.character).unwrap();
            let partner = table
                .rows
                .iter()
                .find(|r| r.character == inv)
                .expect("inverse character row");
            for k in 0..=n {
                assert_eq!(row.dims[k], partner.dims[n - k]);
            }
        }
    }
}
