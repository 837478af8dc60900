//! Flat manifolds with their integral homology, and the built-in catalog.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::abelian::{cohomology_from_homology, universal_coefficients, AbelianError, FgAbGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ManifoldError {
    #[error("no catalog manifold named {0:?}")]
    UnknownName(String),
    #[error("Hantzsche-Wendt manifolds have odd dimension at least 3, got {0}")]
    EvenDimension(usize),
    #[error("insufficient data: degree {degree} of {name} is only known to be torsion")]
    InsufficientData { name: String, degree: usize },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatManifold {
    pub name: String,
    pub dim: usize,
    pub orientable: bool,
    pub holonomy_order: u64,
    /// `H_0 .. H_d`.
    pub homology: Vec<FgAbGroup>,
}

/// A broken rule, as reported by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.rule, self.detail)
    }
}

impl FlatManifold {
    pub fn new(name: &str, dim: usize, orientable: bool, holonomy_order: u64, homology: &[&str]) -> Result<Self, ManifoldError> {
        let homology = homology.iter().map(|s| s.parse()).collect::<Result<Vec<FgAbGroup>, _>>()?;
        Ok(FlatManifold { name: name.to_string(), dim, orientable, holonomy_order, homology })
    }

    pub fn betti(&self, k: usize) -> usize {
        self.homology[k].free_rank()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.homology
            .iter()
            .enumerate()
            .map(|(i, h)| if i % 2 == 0 { h.free_rank() as i64 } else { -(h.free_rank() as i64) })
            .sum()
    }

    pub fn cohomology(&self) -> Result<Vec<FgAbGroup>, ManifoldError> {
        Ok(cohomology_from_homology(&self.homology, self.orientable, self.dim)?)
    }

    /// A flat manifold with trivial holonomy is a torus.
    pub fn is_torus(&self) -> bool {
        self.holonomy_order == 1
    }
}

impl fmt::Display for FlatManifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (dim {}, {}, |F| = {})", self.name, self.dim, if self.orientable { "orientable" } else { "nonorientable" }, self.holonomy_order)?;
        for (k, h) in self.homology.iter().enumerate() {
            writeln!(f, "  H_{k} = {h}")?;
        }
        Ok(())
    }
}

fn torsion_violations(label: &str, groups: &[FgAbGroup], holonomy: &BigInt, out: &mut Vec<Violation>) {
    for (k, g) in groups.iter().enumerate() {
        for t in g.torsion() {
            if !(holonomy % t).is_zero() {
                out.push(Violation {
                    rule: "torsion order divides |F|",
                    detail: format!("{label}_{k} = {g} has an element of order {t}, which does not divide {holonomy}"),
                });
            }
        }
    }
}

/// Checks connectedness, the top-degree rule and the holonomy bound on torsion
/// in homology and cohomology. Empty means valid.
pub fn validate(m: &FlatManifold) -> Vec<Violation> {
    let mut out = Vec::new();
    if m.homology.len() != m.dim + 1 {
        out.push(Violation {
            rule: "grading length",
            detail: format!("expected {} homology groups, found {}", m.dim + 1, m.homology.len()),
        });
        return out;
    }
    if m.holonomy_order == 0 {
        out.push(Violation { rule: "holonomy order", detail: "|F| must be positive".into() });
        return out;
    }
    if !m.homology[0].is_z() {
        out.push(Violation { rule: "connected", detail: format!("H_0 = {} but must be Z", m.homology[0]) });
    }
    let top = &m.homology[m.dim];
    if m.orientable && !top.is_z() {
        out.push(Violation { rule: "top degree", detail: format!("orientable but H_{} = {top}", m.dim) });
    }
    if !m.orientable && !top.is_trivial() {
        out.push(Violation { rule: "top degree", detail: format!("nonorientable but H_{} = {top}", m.dim) });
    }
    let holonomy = BigInt::from(m.holonomy_order);
    torsion_violations("H", &m.homology, &holonomy, &mut out);
    torsion_violations("H^", &universal_coefficients(&m.homology), &holonomy, &mut out);
    out
}

fn entry(name: &str, dim: usize, orientable: bool, holonomy: u64, homology: &[&str]) -> FlatManifold {
    FlatManifold::new(name, dim, orientable, holonomy, homology).expect("catalog entries parse")
}

/// Circle, tori, Klein bottle and the ten flat 3-manifolds.
///
/// The nonorientable 3-manifolds use `H_2 = free(H_1)/Z ⊕ Z/2`, the values
/// forced by `χ = 0` and `T(H_{d-1}) = Z/2` for a closed nonorientable manifold.
pub fn catalog() -> Vec<FlatManifold> {
    vec![
        entry("S1", 1, true, 1, &["Z", "Z"]),
        entry("T2", 2, true, 1, &["Z", "Z^2", "Z"]),
        entry("T3", 3, true, 1, &["Z", "Z^3", "Z^3", "Z"]),
        entry("Klein", 2, false, 2, &["Z", "Z (+) Z/2", "0"]),
        entry("O3_1", 3, true, 1, &["Z", "Z^3", "Z^3", "Z"]),
        entry("O3_2", 3, true, 2, &["Z", "Z (+) Z/2^2", "Z", "Z"]),
        entry("O3_3", 3, true, 3, &["Z", "Z (+) Z/3", "Z", "Z"]),
        entry("O3_4", 3, true, 4, &["Z", "Z (+) Z/2", "Z", "Z"]),
        entry("O3_5", 3, true, 6, &["Z", "Z", "Z", "Z"]),
        entry("O3_6", 3, true, 4, &["Z", "Z/4^2", "0", "Z"]),
        entry("N3_1", 3, false, 2, &["Z", "Z^2 (+) Z/2", "Z (+) Z/2", "0"]),
        entry("N3_2", 3, false, 2, &["Z", "Z^2", "Z (+) Z/2", "0"]),
        entry("N3_3", 3, false, 4, &["Z", "Z (+) Z/2^2", "Z/2", "0"]),
        entry("N3_4", 3, false, 4, &["Z", "Z (+) Z/4", "Z/2", "0"]),
    ]
}

/// Lowercase, no separators, super- and subscript digits folded to ASCII.
fn normalize(name: &str) -> String {
    const SUPERS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    const SUBS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    name.chars()
        .filter(|c| !matches!(c, '_' | '-' | ' ' | '^'))
        .map(|c| {
            if let Some(i) = SUPERS.iter().position(|&s| s == c) {
                char::from(b'0' + i as u8)
            } else if let Some(i) = SUBS.iter().position(|&s| s == c) {
                char::from(b'0' + i as u8)
            } else {
                c.to_ascii_lowercase()
            }
        })
        .collect()
}

/// Catalog lookup; accepts `O3_6`, `o36` or `O³₆`.
pub fn lookup(name: &str) -> Result<FlatManifold, ManifoldError> {
    let key = normalize(name);
    catalog()
        .into_iter()
        .find(|m| normalize(&m.name) == key)
        .ok_or_else(|| ManifoldError::UnknownName(name.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Degree {
    Known(FgAbGroup),
    /// Finite, but the group itself is not recorded.
    TorsionUnspecified,
}

/// A manifold whose homology is only partly known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialManifold {
    pub name: String,
    pub dim: usize,
    pub orientable: bool,
    pub holonomy_order: BigInt,
    pub homology: Vec<Degree>,
}

impl PartialManifold {
    pub fn homology(&self, k: usize) -> Result<&FgAbGroup, ManifoldError> {
        match &self.homology[k] {
            Degree::Known(g) => Ok(g),
            Degree::TorsionUnspecified => Err(ManifoldError::InsufficientData { name: self.name.clone(), degree: k }),
        }
    }

    pub fn betti(&self, k: usize) -> usize {
        match &self.homology[k] {
            Degree::Known(g) => g.free_rank(),
            Degree::TorsionUnspecified => 0,
        }
    }

    /// The full manifold, when the catalog has it.
    pub fn resolve(&self) -> Option<FlatManifold> {
        if self.dim == 3 && self.orientable && self.holonomy_order == BigInt::from(4) {
            return lookup("O3_6").ok();
        }
        None
    }
}

/// Hantzsche-Wendt manifold of odd dimension `d`: orientable, holonomy
/// `(Z/2)^{d-1}`, rational homology of the `d`-sphere.
pub fn hantzsche_wendt_template(d: usize) -> Result<PartialManifold, ManifoldError> {
    if d < 3 || d.is_multiple_of(2) {
        return Err(ManifoldError::EvenDimension(d));
    }
    let mut homology = vec![Degree::Known(FgAbGroup::free(1))];
    homology.extend((1..d).map(|_| Degree::TorsionUnspecified));
    homology.push(Degree::Known(FgAbGroup::free(1)));
    Ok(PartialManifold {
        name: format!("HW{d}"),
        dim: d,
        orientable: true,
        holonomy_order: BigInt::from(2).pow(d as u32 - 1),
        homology,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_valid_and_euler_zero() {
        for m in catalog() {
            assert!(validate(&m).is_empty(), "{}: {:?}", m.name, validate(&m));
            assert_eq!(m.euler_characteristic(), 0, "{}", m.name);
        }
    }

    #[test]
    fn lookups() {
        let m = lookup("O³₆").unwrap();
        assert!(m.orientable);
        assert_eq!(m.holonomy_order, 4);
        assert_eq!(m.homology[1].to_string(), "Z/4 (+) Z/4");
        assert_eq!(lookup("s¹").unwrap().homology.len(), 2);
        assert_eq!(lookup("n3_4").unwrap().holonomy_order, 4);
        assert!(matches!(lookup("O3_7"), Err(ManifoldError::UnknownName(_))));
    }

    #[test]
    fn fake_klein_torsion_is_rejected() {
        let mut m = lookup("Klein").unwrap();
        m.homology[1] = "Z (+) Z/3".parse().unwrap();
        let v = validate(&m);
        assert!(v.iter().any(|v| v.rule == "torsion order divides |F|"));
    }

    #[test]
    fn orientable_with_trivial_top_is_rejected() {
        let mut m = lookup("T2").unwrap();
        m.homology[2] = FgAbGroup::trivial();
        assert!(validate(&m).iter().any(|v| v.rule == "top degree"));
    }

    #[test]
    fn cohomology_of_catalog_entries() {
        let klein = lookup("Klein").unwrap();
        assert_eq!(klein.cohomology().unwrap()[2], FgAbGroup::cyclic(2));
        for m in catalog().into_iter().filter(|m| m.orientable) {
            let mut c = m.cohomology().unwrap();
            c.reverse();
            assert_eq!(c, m.homology);
        }
        for m in catalog().into_iter().filter(|m| !m.orientable) {
            let c = m.cohomology().unwrap();
            assert_eq!(c[m.dim], m.homology[m.dim - 1].torsion_subgroup());
        }
    }

    #[test]
    fn hantzsche_wendt() {
        let t3 = hantzsche_wendt_template(3).unwrap();
        assert_eq!(t3.resolve(), Some(lookup("O3_6").unwrap()));
        let t5 = hantzsche_wendt_template(5).unwrap();
        assert_eq!(t5.holonomy_order, BigInt::from(16));
        assert_eq!((0..=5).map(|k| t5.betti(k)).collect::<Vec<_>>(), vec![1, 0, 0, 0, 0, 1]);
        assert!(matches!(t5.homology(2), Err(ManifoldError::InsufficientData { .. })));
        assert!(t5.resolve().is_none());
        assert!(matches!(hantzsche_wendt_template(4), Err(ManifoldError::EvenDimension(4))));
    }
}
