//! Expanding endomorphisms given by their covering degree and induced maps,
//! and the transfer maps they determine.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::abelian::{smith_normal_form, universal_coefficients, AbelianError, FgAbGroup, GroupHom, IntMatrix};
use crate::manifolds::{lookup, FlatManifold, ManifoldError, Violation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Homology,
    Cohomology,
}

impl Side {
    fn label(self) -> &'static str {
        match self {
            Side::Homology => "homology",
            Side::Cohomology => "cohomology",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EndoError {
    #[error("no integral transfer on {} in degree {degree}: the induced map is inconsistent with degree {n}", side.label())]
    NonIntegralTransfer { side: Side, degree: usize, n: BigInt },
    #[error("the transfer on {} in degree {degree} is not determined by the induced map; supply it explicitly", side.label())]
    AmbiguousTransfer { side: Side, degree: usize },
    #[error("supplied {} transfer in degree {degree} does not satisfy the composition relation with {n}", side.label())]
    BadUserTransfer { side: Side, degree: usize, n: BigInt },
    #[error("degree {n} is not the special degree {special}")]
    NotSpecialDegree { n: BigInt, special: BigInt },
    #[error("transfer on the torsion of {} in degree {degree} is not invertible", side.label())]
    TorsionNotInvertible { side: Side, degree: usize },
    #[error("expected {expected} per-degree maps, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("no builtin endomorphism named {0:?}")]
    UnknownBuiltin(String),
    #[error("top-degree sign must be 1 or -1, got {0}")]
    BadSign(i64),
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
}

/// Induced-map data for an `n`-fold expanding self-cover `g` of a flat manifold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpandingEndo {
    pub manifold: FlatManifold,
    pub degree: BigInt,
    /// `g_*` on `H_d` is multiplication by `top_sign · n` when orientable.
    pub top_sign: i8,
    pub induced_homology: Vec<GroupHom>,
    pub induced_cohomology: Option<Vec<GroupHom>>,
    pub user_transfer_homology: Option<Vec<GroupHom>>,
    pub user_transfer_cohomology: Option<Vec<GroupHom>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferData {
    pub transfer_homology: Vec<GroupHom>,
    pub transfer_cohomology: Vec<GroupHom>,
}

fn endo_maps(groups: &[FgAbGroup], matrices: Vec<IntMatrix>) -> Result<Vec<GroupHom>, EndoError> {
    if matrices.len() != groups.len() {
        return Err(EndoError::WrongLength { expected: groups.len(), found: matrices.len() });
    }
    groups
        .iter()
        .zip(matrices)
        .map(|(g, m)| GroupHom::new(g.clone(), g.clone(), m).map_err(EndoError::from))
        .collect()
}

impl ExpandingEndo {
    /// Builds the endomorphism from one matrix per homology degree. A missing
    /// top-degree sign on an orientable manifold defaults to `+1`.
    pub fn new(manifold: FlatManifold, degree: impl Into<BigInt>, top_sign: Option<i64>, induced: Vec<IntMatrix>) -> Result<Self, EndoError> {
        let top_sign = match top_sign {
            Some(s) if s == 1 || s == -1 => s as i8,
            Some(s) => return Err(EndoError::BadSign(s)),
            None => {
                if manifold.orientable {
                    log::warn!("no top-degree sign given for an endomorphism of {}; assuming +1", manifold.name);
                }
                1
            }
        };
        let induced_homology = endo_maps(&manifold.homology, induced)?;
        Ok(ExpandingEndo {
            manifold,
            degree: degree.into(),
            top_sign,
            induced_homology,
            induced_cohomology: None,
            user_transfer_homology: None,
            user_transfer_cohomology: None,
        })
    }

    pub fn with_induced_cohomology(mut self, matrices: Vec<IntMatrix>) -> Result<Self, EndoError> {
        self.induced_cohomology = Some(endo_maps(&self.cohomology(), matrices)?);
        Ok(self)
    }

    pub fn with_transfers(mut self, homology: Option<Vec<IntMatrix>>, cohomology: Option<Vec<IntMatrix>>) -> Result<Self, EndoError> {
        if let Some(h) = homology {
            self.user_transfer_homology = Some(endo_maps(&self.manifold.homology, h)?);
        }
        if let Some(c) = cohomology {
            self.user_transfer_cohomology = Some(endo_maps(&self.cohomology(), c)?);
        }
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.manifold.dim
    }

    /// `H^k = free(H_k) ⊕ T(H_{k-1})`.
    pub fn cohomology(&self) -> Vec<FgAbGroup> {
        universal_coefficients(&self.manifold.homology)
    }

    /// `g^*`, supplied or derived from `g_*`.
    pub fn cohomology_maps(&self) -> Vec<GroupHom> {
        match &self.induced_cohomology {
            Some(c) => c.clone(),
            None => derive_cohomology_maps(&self.induced_homology),
        }
    }
}

/// `g^*` from `g_*` through the universal coefficient splitting: the dual of
/// the free block on `Hom(H_k, Z)` and the dual of the torsion block on
/// `Ext(T(H_{k-1}), Z) ≅ Hom(T(H_{k-1}), Q/Z)`. The splitting is not natural,
/// so the mixed block is taken to be zero; it does not affect the limits.
pub fn derive_cohomology_maps(homology_maps: &[GroupHom]) -> Vec<GroupHom> {
    let groups: Vec<FgAbGroup> = homology_maps.iter().map(|h| h.domain().clone()).collect();
    let cohomology = universal_coefficients(&groups);
    (0..groups.len())
        .map(|k| {
            let free = homology_maps[k].free_block().transpose();
            let dual = if k == 0 {
                IntMatrix::zeros(0, 0)
            } else {
                let tors = homology_maps[k - 1].torsion_restriction();
                let orders = tors.domain().torsion().to_vec();
                let phi = tors.matrix();
                let s = orders.len();
                let mut out = IntMatrix::zeros(s, s);
                for i in 0..s {
                    for j in 0..s {
                        out[(i, j)] = &orders[i] * &phi[(j, i)] / &orders[j];
                    }
                }
                out
            };
            let m = IntMatrix::block_diagonal(&[&free, &dual]);
            GroupHom::new(cohomology[k].clone(), cohomology[k].clone(), m).expect("duals of well-defined maps are well defined")
        })
        .collect()
}

/// Solves `a · x = b` over the integers: a particular solution and a basis
/// of the kernel as columns.
fn solve_integer_system(a: &IntMatrix, b: &[BigInt]) -> Option<(Vec<BigInt>, IntMatrix)> {
    let s = smith_normal_form(a);
    let ub = &s.u * &IntMatrix::from_vec(b.len(), 1, b.to_vec());
    let r = s.rank();
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, d) in s.invariant_factors.iter().enumerate() {
        let (q, rem) = ub[(i, 0)].div_rem(d);
        if !rem.is_zero() {
            return None;
        }
        y[i] = q;
    }
    if (r..a.rows()).any(|i| !ub[(i, 0)].is_zero()) {
        return None;
    }
    let x = &s.v * &IntMatrix::from_vec(y.len(), 1, y);
    let rows: Vec<usize> = (0..a.cols()).collect();
    let kernel = s.v.select(&rows, &(r..a.cols()).collect::<Vec<_>>());
    Some((x.column(0), kernel))
}

/// Solves `g ∘ t = n` (homology) or `t ∘ g = n` (cohomology) for an
/// endomorphism `t` of the same group, requiring a unique solution.
fn solve_transfer(g: &GroupHom, n: &BigInt, side: Side, degree: usize) -> Result<GroupHom, EndoError> {
    let group = g.domain();
    let s = group.generator_count();
    let ord: Vec<BigInt> = (0..s).map(|i| group.generator_order(i)).collect();
    // t_ij = a_ij · z_ij keeps t well defined; `modulus` is when z_ij gives the zero entry
    let mut vars = Vec::new();
    for i in 0..s {
        for j in 0..s {
            let (scale, modulus) = match (ord[i].is_zero(), ord[j].is_zero()) {
                (true, true) => (BigInt::one(), BigInt::zero()),
                (true, false) => continue,
                (false, true) => (BigInt::one(), ord[i].clone()),
                (false, false) => {
                    let g = ord[i].gcd(&ord[j]);
                    (&ord[i] / &g, g)
                }
            };
            vars.push((i, j, scale, modulus));
        }
    }
    let slacks: Vec<usize> = (0..s).filter(|&p| !ord[p].is_zero()).collect();
    let eqs = s * s;
    let mut a = IntMatrix::zeros(eqs, vars.len() + slacks.len() * s);
    let mut b = vec![BigInt::zero(); eqs];
    let gm = g.matrix();
    for p in 0..s {
        for q in 0..s {
            let e = p * s + q;
            if p == q {
                b[e] = n.clone();
            }
            for (v, (i, j, scale, _)) in vars.iter().enumerate() {
                let coeff = match side {
                    Side::Homology if *j == q => gm[(p, *i)].clone(),
                    Side::Cohomology if *i == p => gm[(*j, q)].clone(),
                    _ => continue,
                };
                a[(e, v)] = coeff * scale;
            }
            if let Some(k) = slacks.iter().position(|&x| x == p) {
                a[(e, vars.len() + k * s + q)] = ord[p].clone();
            }
        }
    }
    let (x, kernel) = solve_integer_system(&a, &b).ok_or_else(|| EndoError::NonIntegralTransfer { side, degree, n: n.clone() })?;
    for c in 0..kernel.cols() {
        for (v, (_, _, _, modulus)) in vars.iter().enumerate() {
            let z = &kernel[(v, c)];
            let trivial = if modulus.is_zero() { z.is_zero() } else { z.is_multiple_of(modulus) };
            if !trivial {
                return Err(EndoError::AmbiguousTransfer { side, degree });
            }
        }
    }
    let mut t = IntMatrix::zeros(s, s);
    for (v, (i, j, scale, _)) in vars.iter().enumerate() {
        t[(*i, *j)] = &x[v] * scale;
    }
    Ok(GroupHom::new(group.clone(), group.clone(), t)?)
}

fn satisfies_relation(g: &GroupHom, t: &GroupHom, n: &BigInt, side: Side) -> bool {
    let composite = match side {
        Side::Homology => g.compose(t),
        Side::Cohomology => t.compose(g),
    };
    composite.map(|c| c.is_multiplication_by(n.clone())).unwrap_or(false)
}

fn transfers_for(maps: &[GroupHom], supplied: Option<&Vec<GroupHom>>, n: &BigInt, side: Side) -> Result<Vec<GroupHom>, EndoError> {
    match supplied {
        Some(ts) => {
            if ts.len() != maps.len() {
                return Err(EndoError::WrongLength { expected: maps.len(), found: ts.len() });
            }
            for (k, (g, t)) in maps.iter().zip(ts).enumerate() {
                if !satisfies_relation(g, t, n, side) {
                    return Err(EndoError::BadUserTransfer { side, degree: k, n: n.clone() });
                }
            }
            Ok(ts.clone())
        }
        None => maps.iter().enumerate().map(|(k, g)| solve_transfer(g, n, side, k)).collect(),
    }
}

/// Transfers in every degree, solved from `g_* ∘ t = n` and `t ∘ g^* = n`,
/// or validated when supplied.
pub fn derive_transfer(e: &ExpandingEndo) -> Result<TransferData, EndoError> {
    let transfer_homology = transfers_for(&e.induced_homology, e.user_transfer_homology.as_ref(), &e.degree, Side::Homology)?;
    let transfer_cohomology = transfers_for(&e.cohomology_maps(), e.user_transfer_cohomology.as_ref(), &e.degree, Side::Cohomology)?;
    Ok(TransferData { transfer_homology, transfer_cohomology })
}

/// `(|F| + 1)^d`, the degree at which multiplication by `n` fixes all torsion.
pub fn special_degree(m: &FlatManifold) -> BigInt {
    BigInt::from(m.holonomy_order + 1).pow(m.dim as u32)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionTransfers {
    pub homology: Vec<GroupHom>,
    pub cohomology: Vec<GroupHom>,
}

/// Restrictions of the transfers to torsion, each checked to be an automorphism.
pub fn special_transfer_on_torsion(e: &ExpandingEndo) -> Result<TorsionTransfers, EndoError> {
    let special = special_degree(&e.manifold);
    if e.degree != special {
        return Err(EndoError::NotSpecialDegree { n: e.degree.clone(), special });
    }
    let data = derive_transfer(e)?;
    let restrict = |maps: &[GroupHom], side: Side| -> Result<Vec<GroupHom>, EndoError> {
        maps.iter()
            .enumerate()
            .map(|(k, t)| {
                let r = t.torsion_restriction();
                if r.is_surjective() {
                    Ok(r)
                } else {
                    Err(EndoError::TorsionNotInvertible { side, degree: k })
                }
            })
            .collect()
    };
    Ok(TorsionTransfers {
        homology: restrict(&data.transfer_homology, Side::Homology)?,
        cohomology: restrict(&data.transfer_cohomology, Side::Cohomology)?,
    })
}

/// Whether every eigenvalue of `a` has absolute value greater than one.
///
/// Equivalent to the reversed characteristic polynomial having all roots in
/// the open unit disk, decided exactly by the Schur-Cohn recursion.
pub fn is_expanding(a: &IntMatrix) -> bool {
    if !a.is_square() || a.rows() == 0 {
        return false;
    }
    let chi = a.characteristic_polynomial();
    if chi[0].is_zero() {
        return false;
    }
    let mut p: Vec<BigInt> = chi.into_iter().rev().collect();
    while p.len() > 1 {
        let n = p.len() - 1;
        let (a0, an) = (p[0].clone(), p[n].clone());
        if a0.abs() >= an.abs() {
            return false;
        }
        // (a_n p - a_0 p*) / z, where p* reverses the coefficients
        p = (1..=n).map(|k| &an * &p[k] - &a0 * &p[n - k]).collect();
    }
    !p[0].is_zero()
}

/// Checks the induced maps against the constraints every expanding self-cover satisfies.
pub fn validate_endo(e: &ExpandingEndo) -> Vec<Violation> {
    let mut out = Vec::new();
    let m = &e.manifold;
    let n = &e.degree;
    if *n < BigInt::from(2) {
        out.push(Violation { rule: "degree", detail: format!("covering degree {n} must be at least 2") });
    }
    if e.induced_homology.len() != m.dim + 1 {
        out.push(Violation {
            rule: "grading length",
            detail: format!("expected {} induced maps, found {}", m.dim + 1, e.induced_homology.len()),
        });
        return out;
    }
    for (k, g) in e.induced_homology.iter().enumerate() {
        if g.domain() != &m.homology[k] || g.codomain() != &m.homology[k] {
            out.push(Violation { rule: "induced map shape", detail: format!("degree {k} map is not an endomorphism of {}", m.homology[k]) });
        }
    }
    if !e.induced_homology[0].is_multiplication_by(1) {
        out.push(Violation { rule: "degree zero", detail: format!("g_* on H_0 must be the identity, got {}", e.induced_homology[0].matrix()) });
    }
    if m.orientable {
        let expected = BigInt::from(e.top_sign) * n;
        if !e.induced_homology[m.dim].is_multiplication_by(expected.clone()) {
            out.push(Violation {
                rule: "top degree",
                detail: format!("g_* on H_{} must be multiplication by {expected}, got {}", m.dim, e.induced_homology[m.dim].matrix()),
            });
        }
    }
    if let Some(c) = &e.induced_cohomology {
        let groups = e.cohomology();
        if c.len() != groups.len() || c.iter().zip(&groups).any(|(f, g)| f.domain() != g || f.codomain() != g) {
            out.push(Violation { rule: "induced cohomology shape", detail: "g^* must be an endomorphism of each H^k".into() });
        }
    }
    if m.is_torus() && m.dim >= 1 {
        let a = e.induced_homology[1].free_block();
        let det = a.determinant().abs();
        if &det != n {
            out.push(Violation { rule: "torus degree", detail: format!("|det A| = {det} but the covering degree is {n}") });
        }
        if !is_expanding(&a) {
            out.push(Violation { rule: "expanding", detail: format!("{a} has an eigenvalue of modulus at most 1") });
        }
    }
    out
}

pub const BUILTIN_NAMES: [&str; 5] = ["circle2", "circle3", "torus23", "klein9", "o36x125"];

fn matrices(rows: &[Vec<Vec<i64>>], groups: &[FgAbGroup]) -> Vec<IntMatrix> {
    rows.iter().zip(groups).map(|(r, g)| IntMatrix::from_rows_with_cols(r, g.generator_count())).collect()
}

pub fn builtin(name: &str) -> Result<ExpandingEndo, EndoError> {
    let (manifold, n, maps): (&str, i64, Vec<Vec<Vec<i64>>>) = match name.to_ascii_lowercase().as_str() {
        "circle2" => ("S1", 2, vec![vec![vec![1]], vec![vec![2]]]),
        "circle3" => ("S1", 3, vec![vec![vec![1]], vec![vec![3]]]),
        "torus23" => ("T2", 6, vec![vec![vec![1]], vec![vec![2, 0], vec![0, 3]], vec![vec![6]]]),
        "klein9" => ("Klein", 9, vec![vec![vec![1]], vec![vec![3, 0], vec![0, 1]], vec![]]),
        "o36x125" => ("O3_6", 125, vec![vec![vec![1]], vec![vec![1, 0], vec![0, 1]], vec![], vec![vec![125]]]),
        _ => return Err(EndoError::UnknownBuiltin(name.to_string())),
    };
    let m = lookup(manifold)?;
    let mats = matrices(&maps, &m.homology);
    ExpandingEndo::new(m, n, Some(1), mats)
}

pub fn builtins() -> Vec<(&'static str, ExpandingEndo)> {
    BUILTIN_NAMES.iter().map(|&n| (n, builtin(n).expect("builtins are well formed"))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate() {
        for (name, e) in builtins() {
            assert!(validate_endo(&e).is_empty(), "{name}: {:?}", validate_endo(&e));
        }
    }

    #[test]
    fn klein_cohomology_maps_and_transfers() {
        let e = builtin("klein9").unwrap();
        let gs = e.cohomology_maps();
        assert!(gs[0].is_multiplication_by(1));
        assert!(gs[1].is_multiplication_by(3));
        assert!(gs[2].is_multiplication_by(1));
        let t = derive_transfer(&e).unwrap();
        assert!(t.transfer_cohomology[0].is_multiplication_by(9));
        assert!(t.transfer_cohomology[1].is_multiplication_by(3));
        assert!(t.transfer_cohomology[2].is_multiplication_by(1));
        assert_eq!(t.transfer_homology[1].matrix(), &IntMatrix::from_rows(&[vec![3, 0], vec![0, 1]]));
    }

    #[test]
    fn circle_and_torus_transfers() {
        let t = derive_transfer(&builtin("circle2").unwrap()).unwrap();
        assert!(t.transfer_homology[0].is_multiplication_by(2));
        assert!(t.transfer_homology[1].is_multiplication_by(1));
        let t = derive_transfer(&builtin("torus23").unwrap()).unwrap();
        assert_eq!(t.transfer_homology[1].matrix(), &IntMatrix::from_rows(&[vec![3, 0], vec![0, 2]]));
    }

    #[test]
    fn inconsistent_degree_has_no_transfer() {
        // ×2 on H_1 of the circle cannot be a 3-fold cover
        let e = ExpandingEndo::new(lookup("S1").unwrap(), 3, Some(1), vec![IntMatrix::identity(1), IntMatrix::scalar(1, 2)]).unwrap();
        assert!(matches!(derive_transfer(&e), Err(EndoError::NonIntegralTransfer { side: Side::Homology, degree: 1, .. })));
    }

    #[test]
    fn ambiguous_torsion_transfer() {
        // g_* = 0 on Z/2 with even n: any t works
        let m = lookup("Klein").unwrap();
        let e = ExpandingEndo::new(
            m,
            4,
            None,
            vec![IntMatrix::identity(1), IntMatrix::from_rows(&[vec![2, 0], vec![0, 0]]), IntMatrix::zeros(0, 0)],
        )
        .unwrap();
        assert!(matches!(derive_transfer(&e), Err(EndoError::AmbiguousTransfer { side: Side::Homology, degree: 1 })));
    }

    #[test]
    fn supplied_transfers_are_checked() {
        let good = builtin("circle2").unwrap().with_transfers(Some(vec![IntMatrix::scalar(1, 2), IntMatrix::identity(1)]), None).unwrap();
        assert!(derive_transfer(&good).is_ok());
        let bad = builtin("circle2").unwrap().with_transfers(Some(vec![IntMatrix::scalar(1, 1), IntMatrix::identity(1)]), None).unwrap();
        assert!(matches!(derive_transfer(&bad), Err(EndoError::BadUserTransfer { .. })));
    }

    #[test]
    fn special_degrees() {
        assert_eq!(special_degree(&lookup("Klein").unwrap()), BigInt::from(9));
        assert_eq!(special_degree(&lookup("O3_6").unwrap()), BigInt::from(125));
        assert_eq!(special_degree(&lookup("S1").unwrap()), BigInt::from(2));
    }

    #[test]
    fn torsion_transfers_at_special_degree() {
        let k = special_transfer_on_torsion(&builtin("klein9").unwrap()).unwrap();
        assert!(k.cohomology[2].is_multiplication_by(1));
        let o = special_transfer_on_torsion(&builtin("o36x125").unwrap()).unwrap();
        assert_eq!(o.homology[1].domain().to_string(), "Z/4 (+) Z/4");
        let t = special_transfer_on_torsion(&builtin("circle2").unwrap()).unwrap();
        assert!(t.homology.iter().all(|h| h.domain().is_trivial()));
        assert!(matches!(special_transfer_on_torsion(&builtin("torus23").unwrap()), Err(EndoError::NotSpecialDegree { .. })));
    }

    #[test]
    fn validation_failures() {
        let e = ExpandingEndo::new(lookup("S1").unwrap(), 2, Some(1), vec![IntMatrix::scalar(1, 2), IntMatrix::scalar(1, 2)]).unwrap();
        assert!(validate_endo(&e).iter().any(|v| v.rule == "degree zero"));
        let t = ExpandingEndo::new(
            lookup("T2").unwrap(),
            5,
            Some(1),
            vec![IntMatrix::identity(1), IntMatrix::diagonal(&[2, 3]), IntMatrix::scalar(1, 5)],
        )
        .unwrap();
        assert!(validate_endo(&t).iter().any(|v| v.rule == "torus degree"));
    }

    #[test]
    fn expanding_matrices() {
        assert!(is_expanding(&IntMatrix::scalar(1, 2)));
        assert!(is_expanding(&IntMatrix::scalar(1, -2)));
        assert!(!is_expanding(&IntMatrix::scalar(1, 1)));
        assert!(is_expanding(&IntMatrix::diagonal(&[2, 3])));
        assert!(!is_expanding(&IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]])));
        assert!(is_expanding(&IntMatrix::from_rows(&[vec![1, -2], vec![2, 1]])));
        assert!(!is_expanding(&IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]])));
        assert!(!is_expanding(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 0]])));
    }
}
