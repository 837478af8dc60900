//! Exact integer linear algebra and finitely generated abelian groups.

mod group;
mod matrix;
mod presentation;
pub mod render;
mod smith;

use num_bigint::BigInt;
use thiserror::Error;

pub use group::{FgAbGroup, GroupHom};
pub use matrix::IntMatrix;
pub use presentation::{group_from_presentation, integer_kernel, Cokernel};
pub use smith::{smith_normal_form, SmithForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbelianError {
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch { expected: (usize, usize), found: (usize, usize) },
    #[error("cannot compose: inner codomain {inner_codomain} differs from outer domain {outer_domain}")]
    CompositionMismatch { inner_codomain: String, outer_domain: String },
    #[error("map is not well defined: generator {generator} has order {order} but its image does not")]
    NotWellDefined { generator: usize, order: BigInt },
    #[error("not in canonical form: {0}")]
    NotCanonical(String),
    #[error("grading must have {expected} entries, found {found}")]
    GradingLength { expected: usize, found: usize },
    #[error("degree zero must be Z (connected space), found {0}")]
    Disconnected(String),
    #[error("K-groups from (co)homology are only available up to dimension 3, got {0}")]
    DimensionTooLarge(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub fn torsion_subgroup(g: &FgAbGroup) -> FgAbGroup {
    g.torsion_subgroup()
}

pub fn direct_sum(a: &FgAbGroup, b: &FgAbGroup) -> FgAbGroup {
    a.direct_sum(b)
}

pub fn is_isomorphic(a: &FgAbGroup, b: &FgAbGroup) -> bool {
    a == b
}

/// `f ∘ g`; requires `codomain(g) = domain(f)`.
pub fn compose(f: &GroupHom, g: &GroupHom) -> Result<GroupHom, AbelianError> {
    f.compose(g)
}

pub fn is_multiplication_by(f: &GroupHom, m: impl Into<BigInt>) -> bool {
    f.is_multiplication_by(m)
}

fn check_grading(homology: &[FgAbGroup], d: usize) -> Result<(), AbelianError> {
    if homology.len() != d + 1 {
        return Err(AbelianError::GradingLength { expected: d + 1, found: homology.len() });
    }
    if !homology[0].is_z() {
        return Err(AbelianError::Disconnected(homology[0].to_string()));
    }
    Ok(())
}

/// Cohomology from integral homology of a closed connected `d`-manifold:
/// Poincaré duality `H^k = H_{d-k}` when orientable, otherwise the universal
/// coefficient split `H^k = free(H_k) ⊕ T(H_{k-1})`.
pub fn cohomology_from_homology(homology: &[FgAbGroup], orientable: bool, d: usize) -> Result<Vec<FgAbGroup>, AbelianError> {
    check_grading(homology, d)?;
    if orientable {
        Ok(homology.iter().rev().cloned().collect())
    } else {
        Ok(universal_coefficients(homology))
    }
}

/// `H^k = free(H_k) ⊕ T(H_{k-1})`, valid for any finite complex.
pub fn universal_coefficients(homology: &[FgAbGroup]) -> Vec<FgAbGroup> {
    (0..homology.len())
        .map(|k| {
            let free = homology[k].free_part();
            match k {
                0 => free,
                _ => free.direct_sum(&homology[k - 1].torsion_subgroup()),
            }
        })
        .collect()
}

/// `(⊕ even degrees, ⊕ odd degrees)` of a grading over a space of dimension `d ≤ 3`.
pub fn k_groups_low_dim(graded: &[FgAbGroup], d: usize) -> Result<(FgAbGroup, FgAbGroup), AbelianError> {
    if d > 3 {
        return Err(AbelianError::DimensionTooLarge(d));
    }
    if graded.len() != d + 1 {
        return Err(AbelianError::GradingLength { expected: d + 1, found: graded.len() });
    }
    let sum = |parity: usize| {
        graded
            .iter()
            .enumerate()
            .filter(|(k, _)| k % 2 == parity)
            .fold(FgAbGroup::trivial(), |acc, (_, g)| acc.direct_sum(g))
    };
    Ok((sum(0), sum(1)))
}
