use num_traits::Zero;

use super::hnf::{canonical_basis, integer_kernel, right_inverse, saturate};
use super::matrix::{IntMatrix, IntVector};

/// A surjection `Z^source_rank ↠ Z^target_rank` given by its matrix, with the
/// (saturated) kernel recorded in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuotientMap {
    pub source_rank: usize,
    pub target_rank: usize,
    pub kernel_basis: IntMatrix,
    pub projection: IntMatrix,
}

/// Ways in which a supplied projection matrix fails to present a quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientDefect {
    WrongShape { expected: (usize, usize), found: (usize, usize) },
    NotSurjective,
}

impl QuotientMap {
    /// Wraps an arbitrary projection matrix. Surjectivity is not checked here;
    /// see [`QuotientMap::defect`].
    pub fn from_projection(projection: IntMatrix) -> Self {
        QuotientMap {
            source_rank: projection.cols(),
            target_rank: projection.rows(),
            kernel_basis: integer_kernel(&projection),
            projection,
        }
    }

    pub fn identity(rank: usize) -> Self {
        Self::from_projection(IntMatrix::identity(rank))
    }

    pub fn defect(&self) -> Option<QuotientDefect> {
        if self.projection.cols() != self.source_rank || self.projection.rows() != self.target_rank {
            return Some(QuotientDefect::WrongShape {
                expected: (self.target_rank, self.source_rank),
                found: (self.projection.rows(), self.projection.cols()),
            });
        }
        if right_inverse(&self.projection).is_none() {
            return Some(QuotientDefect::NotSurjective);
        }
        None
    }

    pub fn is_valid(&self) -> bool {
        self.defect().is_none()
    }

    pub fn apply(&self, v: &[num_bigint::BigInt]) -> IntVector {
        self.projection.apply(v)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &QuotientMap) -> QuotientMap {
        QuotientMap::from_projection(&next.projection * &self.projection)
    }

    /// The same quotient in canonical target coordinates.
    pub fn canonical(&self) -> QuotientMap {
        QuotientMap::from_projection(canonical_basis(&self.projection))
    }

    /// The unique `U` with `U · self.projection == other.projection`, when the
    /// two maps share a kernel.
    pub fn comparison(&self, other: &QuotientMap) -> Option<IntMatrix> {
        if self.source_rank != other.source_rank || self.target_rank != other.target_rank {
            return None;
        }
        let section = right_inverse(&self.projection)?;
        let u = &other.projection * &section;
        (&u * &self.projection == other.projection).then_some(u)
    }

    /// The map `Z^self.target ↠ Z^finer.target` through which `finer` factors,
    /// when `ker self ⊆ ker finer`.
    pub fn factor_through(&self, finer: &QuotientMap) -> Option<QuotientMap> {
        if self.source_rank != finer.source_rank {
            return None;
        }
        let section = right_inverse(&self.projection)?;
        let q = &finer.projection * &section;
        (&q * &self.projection == finer.projection).then(|| QuotientMap::from_projection(q))
    }
}

/// `σ^⊥ ∩ M^∨` as rows in dual coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PerpLattice {
    pub ambient_dual_rank: usize,
    pub basis: IntMatrix,
}

impl PerpLattice {
    pub fn rank(&self) -> usize {
        self.basis.rows()
    }
}

fn generator_matrix(rank: usize, generators: &[IntVector]) -> IntMatrix {
    IntMatrix::from_rows(rank, generators)
}

/// Canonical presentation of `M ↠ M / sat⟨generators⟩`.
///
/// The projection rows are the canonical basis of the annihilator, so two
/// generating sets with the same saturation give identical matrices.
pub fn quotient_map(rank: usize, generators: &[IntVector]) -> QuotientMap {
    let g = generator_matrix(rank, generators);
    let kernel_basis = saturate(&g);
    let projection = integer_kernel(&g);
    debug_assert_eq!(projection.rows() + kernel_basis.rows(), rank);
    debug_assert!(generators.iter().all(|v| projection.apply(v).iter().all(Zero::is_zero)));
    QuotientMap { source_rank: rank, target_rank: projection.rows(), kernel_basis, projection }
}

pub fn perp_lattice(rank: usize, generators: &[IntVector]) -> PerpLattice {
    PerpLattice { ambient_dual_rank: rank, basis: integer_kernel(&generator_matrix(rank, generators)) }
}
