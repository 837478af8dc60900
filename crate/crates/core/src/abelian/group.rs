//! Finitely generated abelian groups in canonical form, and homomorphisms
//! between them written on canonical generators.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::smith::smith_normal_form;
use super::AbelianError;

/// `Z^free_rank ⊕ Z/t_1 ⊕ … ⊕ Z/t_m` with `2 ≤ t_1 | t_2 | … | t_m`.
///
/// Generators are ordered free first, then torsion in increasing order.
/// Two groups are isomorphic exactly when their canonical forms are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct FgAbGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbGroup {
    pub fn trivial() -> Self {
        FgAbGroup { free_rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup { free_rank: rank, torsion: Vec::new() }
    }

    pub fn cyclic(order: impl Into<BigInt>) -> Self {
        Self::from_cyclic_orders(0, &[order.into()])
    }

    /// Canonicalizes `Z^free_rank ⊕ ⊕ Z/c_i` for arbitrary orders `c_i`.
    /// An order of 0 contributes a free summand, orders ±1 are dropped.
    pub fn from_cyclic_orders(free_rank: usize, orders: &[BigInt]) -> Self {
        let diag: Vec<BigInt> = orders.iter().map(|c| c.abs()).collect();
        let s = smith_normal_form(&IntMatrix::diagonal(&diag));
        let extra_free = orders.len() - s.rank();
        let torsion = s.invariant_factors.into_iter().filter(|t| !t.is_one()).collect();
        FgAbGroup { free_rank: free_rank + extra_free, torsion }
    }

    /// Builds a group from already-canonical data, rejecting anything that
    /// is not a divisibility chain of orders `≥ 2`.
    pub fn from_canonical(free_rank: usize, torsion: Vec<BigInt>) -> Result<Self, AbelianError> {
        if torsion.iter().any(|t| *t < BigInt::from(2)) {
            return Err(AbelianError::NotCanonical("torsion orders must be at least 2".into()));
        }
        if torsion.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(AbelianError::NotCanonical("torsion orders must form a divisibility chain".into()));
        }
        Ok(FgAbGroup { free_rank, torsion })
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn generator_count(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_z(&self) -> bool {
        self.free_rank == 1 && self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    /// Order of canonical generator `i`; zero for free generators.
    pub fn generator_order(&self, i: usize) -> BigInt {
        if i < self.free_rank {
            BigInt::zero()
        } else {
            self.torsion[i - self.free_rank].clone()
        }
    }

    pub fn torsion_subgroup(&self) -> FgAbGroup {
        FgAbGroup { free_rank: 0, torsion: self.torsion.clone() }
    }

    pub fn free_part(&self) -> FgAbGroup {
        Self::free(self.free_rank)
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        let orders: Vec<BigInt> = self.torsion.iter().chain(&other.torsion).cloned().collect();
        Self::from_cyclic_orders(self.free_rank + other.free_rank, &orders)
    }

    /// Relation matrix (one row per torsion generator) presenting this group
    /// on its canonical generators.
    pub fn relations(&self) -> IntMatrix {
        let n = self.generator_count();
        let mut rel = IntMatrix::zeros(self.torsion.len(), n);
        for (k, t) in self.torsion.iter().enumerate() {
            rel[(k, self.free_rank + k)] = t.clone();
        }
        rel
    }

    /// Number of elements whose order divides `m`, for finite groups.
    pub fn count_killed_by(&self, m: &BigInt) -> BigInt {
        self.torsion.iter().map(|t| t.gcd(m)).product()
    }
}

impl Default for FgAbGroup {
    fn default() -> Self {
        Self::trivial()
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::render::render_group(self))
    }
}

impl std::str::FromStr for FgAbGroup {
    type Err = AbelianError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::render::parse_group(s)
    }
}

impl TryFrom<String> for FgAbGroup {
    type Error = AbelianError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<FgAbGroup> for String {
    fn from(g: FgAbGroup) -> String {
        g.to_string()
    }
}

/// Homomorphism between canonical groups. Column `j` is the image of domain
/// generator `j`; rows hitting torsion generators are stored reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    domain: FgAbGroup,
    codomain: FgAbGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    /// Validates shape and well-definedness, then reduces torsion rows.
    pub fn new(domain: FgAbGroup, codomain: FgAbGroup, matrix: IntMatrix) -> Result<Self, AbelianError> {
        if matrix.rows() != codomain.generator_count() || matrix.cols() != domain.generator_count() {
            return Err(AbelianError::DimensionMismatch {
                expected: (codomain.generator_count(), domain.generator_count()),
                found: (matrix.rows(), matrix.cols()),
            });
        }
        let mut matrix = matrix;
        for i in 0..matrix.rows() {
            matrix.reduce_row_mod(i, &codomain.generator_order(i));
        }
        for j in domain.free_rank()..domain.generator_count() {
            let s = domain.generator_order(j);
            for i in 0..matrix.rows() {
                let image = &matrix[(i, j)] * &s;
                let target = codomain.generator_order(i);
                let killed = if target.is_zero() { image.is_zero() } else { image.is_multiple_of(&target) };
                if !killed {
                    return Err(AbelianError::NotWellDefined { generator: j, order: s });
                }
            }
        }
        Ok(GroupHom { domain, codomain, matrix })
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        Self::multiplication(g, 1)
    }

    pub fn zero(domain: &FgAbGroup, codomain: &FgAbGroup) -> Self {
        GroupHom {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix: IntMatrix::zeros(codomain.generator_count(), domain.generator_count()),
        }
    }

    /// Multiplication by `m` on `g`.
    pub fn multiplication(g: &FgAbGroup, m: impl Into<BigInt>) -> Self {
        let n = g.generator_count();
        Self::new(g.clone(), g.clone(), IntMatrix::scalar(n, m)).expect("scalar maps are well defined")
    }

    pub fn domain(&self) -> &FgAbGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FgAbGroup {
        &self.codomain
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn is_endomorphism(&self) -> bool {
        self.domain == self.codomain
    }

    /// Action on the free quotient: the free-rows by free-columns block.
    pub fn free_block(&self) -> IntMatrix {
        let rows: Vec<usize> = (0..self.codomain.free_rank()).collect();
        let cols: Vec<usize> = (0..self.domain.free_rank()).collect();
        self.matrix.select(&rows, &cols)
    }

    /// Restriction to the torsion subgroups.
    pub fn torsion_restriction(&self) -> GroupHom {
        let rows: Vec<usize> = (self.codomain.free_rank()..self.codomain.generator_count()).collect();
        let cols: Vec<usize> = (self.domain.free_rank()..self.domain.generator_count()).collect();
        GroupHom::new(
            self.domain.torsion_subgroup(),
            self.codomain.torsion_subgroup(),
            self.matrix.select(&rows, &cols),
        )
        .expect("restriction of a well-defined map to torsion is well defined")
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GroupHom) -> Result<GroupHom, AbelianError> {
        if inner.codomain != self.domain {
            return Err(AbelianError::CompositionMismatch {
                inner_codomain: inner.codomain.to_string(),
                outer_domain: self.domain.to_string(),
            });
        }
        GroupHom::new(inner.domain.clone(), self.codomain.clone(), &self.matrix * &inner.matrix)
    }

    /// Whether this endomorphism is `m · id`, comparing reduced matrices.
    pub fn is_multiplication_by(&self, m: impl Into<BigInt>) -> bool {
        self.is_endomorphism() && *self == Self::multiplication(&self.domain, m)
    }

    pub fn power(&self, k: u32) -> GroupHom {
        assert!(self.is_endomorphism());
        let mut m = self.matrix.pow(k);
        for i in 0..m.rows() {
            m.reduce_row_mod(i, &self.codomain.generator_order(i));
        }
        GroupHom { domain: self.domain.clone(), codomain: self.codomain.clone(), matrix: m }
    }

    pub fn direct_sum(&self, other: &GroupHom) -> Result<GroupHom, AbelianError> {
        let dom = super::presentation::Cokernel::direct_sum(&self.domain, &other.domain);
        let cod = super::presentation::Cokernel::direct_sum(&self.codomain, &other.codomain);
        let lift = IntMatrix::block_diagonal(&[&self.matrix, &other.matrix]);
        cod.induced_hom(&dom, &lift)
    }

    /// The image subgroup, in canonical form.
    pub fn image(&self) -> FgAbGroup {
        let cod = &self.codomain;
        let (m, s) = (cod.generator_count(), self.domain.generator_count());
        // y ∈ Z^s lies in the kernel iff matrix·y + diag(orders)·w = 0 for some w
        let mut stacked = IntMatrix::zeros(m, s + m);
        for i in 0..m {
            for j in 0..s {
                stacked[(i, j)] = self.matrix[(i, j)].clone();
            }
            stacked[(i, s + i)] = cod.generator_order(i);
        }
        let kernel = super::presentation::integer_kernel(&stacked);
        let first: Vec<usize> = (0..s).collect();
        let all: Vec<usize> = (0..kernel.cols()).collect();
        let relations = kernel.select(&first, &all).transpose();
        super::presentation::Cokernel::new(s, &relations).group().clone()
    }

    /// Whether the map is onto; for finite groups this is bijectivity.
    pub fn is_surjective(&self) -> bool {
        let cod = &self.codomain;
        let rel = cod.relations();
        let image = self.matrix.transpose();
        let mut rows = rel.to_rows();
        rows.extend(image.to_rows());
        let all = IntMatrix::from_rows_with_cols(&rows, cod.generator_count());
        super::presentation::Cokernel::new(cod.generator_count(), &all).group().is_trivial()
    }
}

impl fmt::Display for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}: {}", self.domain, self.codomain, self.matrix)
    }
}
