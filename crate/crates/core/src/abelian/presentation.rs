//! Cokernels of integer relation matrices with explicit coordinate changes.

use super::group::{FgAbGroup, GroupHom};
use super::matrix::IntMatrix;
use super::smith::smith_normal_form;
use super::AbelianError;

/// `Z^n / (row space of the relations)` in canonical form.
///
/// `to_canonical` maps a vector of `Z^n` to canonical coordinates;
/// `from_canonical` lifts canonical generators back into `Z^n`.
#[derive(Clone, Debug)]
pub struct Cokernel {
    group: FgAbGroup,
    generators: usize,
    to_canonical: IntMatrix,
    from_canonical: IntMatrix,
}

impl Cokernel {
    /// `relations` has one row per relation and `generators` columns.
    pub fn new(generators: usize, relations: &IntMatrix) -> Self {
        assert_eq!(relations.cols(), generators, "relation width must equal the generator count");
        let s = smith_normal_form(&relations.transpose());
        let mut free = Vec::new();
        let mut torsion = Vec::new();
        let mut orders = Vec::new();
        for i in 0..generators {
            let d = s.diagonal(i);
            if d == num_bigint::BigInt::from(0) {
                free.push(i);
            } else if d > num_bigint::BigInt::from(1) {
                torsion.push(i);
                orders.push(d);
            }
        }
        let group = FgAbGroup::from_canonical(free.len(), orders).expect("smith factors form a divisibility chain");
        let order: Vec<usize> = free.into_iter().chain(torsion).collect();
        let all: Vec<usize> = (0..generators).collect();
        Cokernel {
            group,
            generators,
            to_canonical: s.u.select(&order, &all),
            from_canonical: s.u_inv.select(&all, &order),
        }
    }

    /// The trivial presentation of an already-canonical group.
    pub fn of_group(g: &FgAbGroup) -> Self {
        let n = g.generator_count();
        Cokernel {
            group: g.clone(),
            generators: n,
            to_canonical: IntMatrix::identity(n),
            from_canonical: IntMatrix::identity(n),
        }
    }

    /// Presentation of `a ⊕ b` on the concatenated canonical generators.
    pub fn direct_sum(a: &FgAbGroup, b: &FgAbGroup) -> Self {
        let rel = IntMatrix::block_diagonal(&[&a.relations(), &b.relations()]);
        Cokernel::new(a.generator_count() + b.generator_count(), &rel)
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn to_canonical(&self) -> &IntMatrix {
        &self.to_canonical
    }

    pub fn from_canonical(&self) -> &IntMatrix {
        &self.from_canonical
    }

    /// Pushes a map given on presentation generators, `lift: Z^n_dom → Z^n_self`,
    /// down to canonical coordinates. Fails if the lift does not respect relations.
    pub fn induced_hom(&self, domain: &Cokernel, lift: &IntMatrix) -> Result<GroupHom, AbelianError> {
        if lift.rows() != self.generators || lift.cols() != domain.generators {
            return Err(AbelianError::DimensionMismatch {
                expected: (self.generators, domain.generators),
                found: (lift.rows(), lift.cols()),
            });
        }
        let m = &(&self.to_canonical * lift) * &domain.from_canonical;
        GroupHom::new(domain.group.clone(), self.group.clone(), m)
    }
}

/// Basis of `{x ∈ Z^n : M x = 0}` as the columns of the returned `n × k` matrix.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(m);
    let rows: Vec<usize> = (0..m.cols()).collect();
    let cols: Vec<usize> = (s.rank()..m.cols()).collect();
    s.v.select(&rows, &cols)
}

/// Canonical form of the cokernel of a relation matrix on `n_generators` generators.
pub fn group_from_presentation(n_generators: usize, relations: &IntMatrix) -> Result<FgAbGroup, AbelianError> {
    if relations.cols() != n_generators {
        return Err(AbelianError::DimensionMismatch {
            expected: (relations.rows(), n_generators),
            found: (relations.rows(), relations.cols()),
        });
    }
    Ok(Cokernel::new(n_generators, relations).group().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn kernel_of_rank_one_map() {
        let m = IntMatrix::from_rows(&[vec![1, 2, 3]]);
        let k = integer_kernel(&m);
        assert_eq!(k.cols(), 2);
        assert!((&m * &k).is_zero());
        // saturated: the kernel basis extends to a basis of Z^3
        let full = IntMatrix::from_rows(&[
            vec![k[(0, 0)].clone(), k[(0, 1)].clone(), BigInt::from(1)],
            vec![k[(1, 0)].clone(), k[(1, 1)].clone(), BigInt::from(0)],
            vec![k[(2, 0)].clone(), k[(2, 1)].clone(), BigInt::from(0)],
        ]);
        assert_ne!(full.determinant(), BigInt::from(0));
    }

    #[test]
    fn single_relation_gives_z_plus_z2() {
        let g = group_from_presentation(2, &IntMatrix::from_rows(&[vec![2, 0]])).unwrap();
        assert_eq!(g, "Z (+) Z/2".parse().unwrap());
    }

    #[test]
    fn unit_relations_kill_everything() {
        let g = group_from_presentation(2, &IntMatrix::identity(2)).unwrap();
        assert!(g.is_trivial());
    }

    #[test]
    fn klein_bottle_abelianization() {
        // <a, b | a b a^-1 b> abelianizes to the single relation 2b = 0
        let g = group_from_presentation(2, &IntMatrix::from_rows(&[vec![0, 2]])).unwrap();
        assert_eq!(g.free_rank(), 1);
        assert_eq!(g.torsion(), &[BigInt::from(2)]);
    }

    #[test]
    fn width_mismatch_is_an_error() {
        assert!(group_from_presentation(3, &IntMatrix::from_rows(&[vec![2, 0]])).is_err());
    }

    #[test]
    fn coordinates_round_trip_on_generators() {
        let rel = IntMatrix::from_rows(&[vec![2, 4, 0], vec![6, 8, 0]]);
        let c = Cokernel::new(3, &rel);
        // canonical -> lift -> canonical is the identity on canonical generators
        let id = c.induced_hom(&c, &IntMatrix::identity(3)).unwrap();
        assert!(id.is_multiplication_by(1));
    }

    #[test]
    fn induced_hom_on_a_direct_sum() {
        let z2 = FgAbGroup::cyclic(2);
        let z3 = FgAbGroup::cyclic(3);
        let sum = Cokernel::direct_sum(&z2, &z3);
        assert_eq!(sum.group(), &FgAbGroup::cyclic(6));
        // -1 on both summands is -1 on Z/6
        let m = sum.induced_hom(&sum, &IntMatrix::scalar(2, -1)).unwrap();
        assert!(m.is_multiplication_by(-1));
        assert!(m.is_multiplication_by(5));
    }
}
