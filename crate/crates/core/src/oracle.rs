//! Brute-force cross-checks that share no code path with the canonical forms:
//! divisibility in `lim(Z^r, A)` by direct matrix powers, eventual torsion by
//! enumerating elements, Smith forms by multiplying back, and torus fixed
//! points by a determinant.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::abelian::{FgAbGroup, GroupHom, IntMatrix, SmithForm};
use crate::arith::prime_set;
use crate::endomorphisms::is_expanding;
use crate::limits::{predicts_divisible, LimitGroup, StationarySystem};

pub const DEFAULT_DEPTH: u32 = 8;

/// Groups larger than this are not enumerated.
const MAX_ENUMERATION: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("matrix {0} is not expanding")]
    NotExpanding(String),
}

/// `generator / denominator` lies in the limit, first at `stage` if so.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub generator: usize,
    pub denominator: BigInt,
    pub member: bool,
    pub stage: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitFingerprint {
    pub depth: u32,
    /// Element count per order in `α^depth(T)`; `None` when too large to enumerate.
    pub torsion_orders: Option<BTreeMap<BigInt, u64>>,
    pub witnesses: Vec<Witness>,
}

/// Primes up to 13 together with the primes of `n`.
pub fn default_denominators(n: &BigInt) -> Vec<BigInt> {
    let mut ps = prime_set(n);
    ps.extend([2, 3, 5, 7, 11, 13].map(BigInt::from));
    ps.into_iter().collect()
}

fn all_elements(orders: &[BigInt]) -> Option<Vec<Vec<BigInt>>> {
    let mut total: u64 = 1;
    for t in orders {
        total = total.checked_mul(t.to_u64()?)?;
        if total > MAX_ENUMERATION {
            return None;
        }
    }
    let mut out = vec![Vec::new()];
    for t in orders {
        let t = t.to_u64()?;
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..t).map(move |x| {
                    let mut w = v.clone();
                    w.push(BigInt::from(x));
                    w
                })
            })
            .collect();
    }
    Some(out)
}

fn element_order(x: &[BigInt], orders: &[BigInt]) -> BigInt {
    x.iter().zip(orders).fold(BigInt::one(), |acc, (xi, t)| acc.lcm(&(t / xi.gcd(t))))
}

/// Order statistics of a finite abelian group, by enumeration.
pub fn order_counts(g: &FgAbGroup) -> Option<BTreeMap<BigInt, u64>> {
    let orders = g.torsion_subgroup().torsion().to_vec();
    let mut counts = BTreeMap::new();
    for x in all_elements(&orders)? {
        *counts.entry(element_order(&x, &orders)).or_insert(0) += 1;
    }
    Some(counts)
}

fn eventual_image_orders(alpha: &GroupHom, depth: u32) -> Option<BTreeMap<BigInt, u64>> {
    let orders = alpha.domain().torsion().to_vec();
    let m = alpha.matrix();
    let mut image = HashSet::new();
    for x in all_elements(&orders)? {
        let mut y = x;
        for _ in 0..depth {
            y = (0..orders.len())
                .map(|i| {
                    let s: BigInt = (0..orders.len()).map(|j| &m[(i, j)] * &y[j]).sum();
                    s.mod_floor(&orders[i])
                })
                .collect();
        }
        image.insert(y);
    }
    let mut counts = BTreeMap::new();
    for y in image {
        *counts.entry(element_order(&y, &orders)).or_insert(0) += 1;
    }
    Some(counts)
}

/// For each free generator `e_i` and denominator `m`, whether `m | A^j e_i`
/// for some `j ≤ depth`; and the torsion of `α^depth(T)` by enumeration.
pub fn fingerprint_limit(sys: &StationarySystem, depth: u32, denominators: &[BigInt]) -> LimitFingerprint {
    assert!(depth >= 1, "fingerprint depth must be positive");
    let a = sys.free_action();
    let r = a.rows();
    let mut witnesses = Vec::new();
    for i in 0..r {
        for m in denominators {
            let mut v = IntMatrix::zeros(r, 1);
            v[(i, 0)] = BigInt::one();
            let mut stage = None;
            for j in 0..=depth {
                if (0..r).all(|k| v[(k, 0)].is_multiple_of(m)) {
                    stage = Some(j);
                    break;
                }
                v = &a * &v;
            }
            witnesses.push(Witness { generator: i, denominator: m.clone(), member: stage.is_some(), stage });
        }
    }
    let torsion_orders = eventual_image_orders(&sys.endo().torsion_restriction(), depth);
    LimitFingerprint { depth, torsion_orders, witnesses }
}

/// Compares a canonical limit with a fingerprint of the same system.
/// Opaque limits never pass.
pub fn check_canonical_against_fingerprint(l: &LimitGroup, fp: &LimitFingerprint) -> bool {
    if !l.is_canonical() {
        return false;
    }
    let r = l.presentation.free_action().rows();
    for w in &fp.witnesses {
        let mut x = vec![BigInt::zero(); r];
        x[w.generator] = BigInt::one();
        if predicts_divisible(l, &x, &w.denominator) != Some(w.member) {
            return false;
        }
    }
    match (&fp.torsion_orders, order_counts(&l.torsion)) {
        (Some(a), Some(b)) => *a == b,
        _ => false,
    }
}

/// `|det(A^k - I)|`, the number of points of period dividing `k` for the
/// torus map induced by `A`.
pub fn torus_fixed_points(a: &IntMatrix, k: u32) -> Result<BigInt, OracleError> {
    if !is_expanding(a) {
        return Err(OracleError::NotExpanding(a.to_string()));
    }
    Ok(a.pow(k).sub(&IntMatrix::identity(a.rows())).determinant().abs())
}

/// `U·A·V = D`, `U` and `V` unimodular, `D` diagonal with a positive divisibility chain.
pub fn verify_smith(a: &IntMatrix, s: &SmithForm) -> bool {
    let unimodular = |m: &IntMatrix| m.determinant().abs() == BigInt::one();
    if &(&s.u * a) * &s.v != s.d || !unimodular(&s.u) || !unimodular(&s.v) {
        return false;
    }
    if &s.u * &s.u_inv != IntMatrix::identity(s.u.rows()) {
        return false;
    }
    for i in 0..s.d.rows() {
        for j in 0..s.d.cols() {
            let expected = if i == j { s.diagonal(i) } else { BigInt::zero() };
            if s.d[(i, j)] != expected {
                return false;
            }
        }
    }
    let f = &s.invariant_factors;
    f.iter().all(|d| d.is_positive()) && f.windows(2).all(|w| w[1].is_multiple_of(&w[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::smith_normal_form;
    use crate::limits::stationary_limit;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn scalar_nine() {
        let sys = StationarySystem::scalar(&FgAbGroup::free(1), 9);
        let fp = fingerprint_limit(&sys, 2, &[b(3), b(9), b(2)]);
        let members: Vec<bool> = fp.witnesses.iter().map(|w| w.member).collect();
        assert_eq!(members, [true, true, false]);
        assert_eq!(fp.witnesses[0].stage, Some(1));
        assert!(check_canonical_against_fingerprint(&stationary_limit(&sys), &fp));
    }

    #[test]
    fn identity_never_divides() {
        let sys = StationarySystem::scalar(&FgAbGroup::free(1), 1);
        let fp = fingerprint_limit(&sys, 8, &[b(2), b(3), b(7)]);
        assert!(fp.witnesses.iter().all(|w| !w.member));
    }

    #[test]
    fn diagonal_two_three() {
        let g = FgAbGroup::free(2);
        let sys = StationarySystem::new(GroupHom::new(g.clone(), g, IntMatrix::diagonal(&[2, 3])).unwrap()).unwrap();
        let fp = fingerprint_limit(&sys, 3, &[b(2), b(3)]);
        let lookup = |i: usize, m: i64| fp.witnesses.iter().find(|w| w.generator == i && w.denominator == b(m)).unwrap().member;
        assert!(lookup(0, 2));
        assert!(!lookup(0, 3));
        assert!(lookup(1, 3));
    }

    #[test]
    fn corrupted_limits_are_caught() {
        let sys = StationarySystem::scalar(&FgAbGroup::free(1), 9);
        let fp = fingerprint_limit(&sys, 8, &default_denominators(&b(9)));
        let mut wrong = stationary_limit(&sys);
        if let crate::limits::FreeLimit::CanonicalScalars { summands, .. } = &mut wrong.free_part {
            summands[0].primes = [b(2)].into_iter().collect();
        }
        assert!(!check_canonical_against_fingerprint(&wrong, &fp));

        let z4 = StationarySystem::scalar(&FgAbGroup::cyclic(4), 1);
        let fp = fingerprint_limit(&z4, 8, &[b(2)]);
        let mut wrong = stationary_limit(&z4);
        assert!(check_canonical_against_fingerprint(&wrong, &fp));
        wrong.torsion = FgAbGroup::cyclic(2);
        assert!(!check_canonical_against_fingerprint(&wrong, &fp));
    }

    #[test]
    fn torus_counts() {
        assert_eq!(torus_fixed_points(&IntMatrix::scalar(1, 2), 3).unwrap(), b(7));
        assert_eq!(torus_fixed_points(&IntMatrix::diagonal(&[2, 3]), 1).unwrap(), b(2));
        assert_eq!(torus_fixed_points(&IntMatrix::scalar(1, 2), 1).unwrap(), b(1));
        assert!(torus_fixed_points(&IntMatrix::scalar(1, 1), 1).is_err());
    }

    #[test]
    fn smith_verification() {
        let a = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = smith_normal_form(&a);
        assert!(verify_smith(&a, &s));
        let mut bad = s.clone();
        bad.invariant_factors.reverse();
        bad.d = IntMatrix::diagonal(&bad.invariant_factors);
        assert!(!verify_smith(&a, &bad));
    }

    #[test]
    fn order_statistics() {
        let c = order_counts(&"Z/4 (+) Z/4".parse().unwrap()).unwrap();
        assert_eq!(c[&b(1)], 1);
        assert_eq!(c[&b(2)], 3);
        assert_eq!(c[&b(4)], 12);
    }
}
