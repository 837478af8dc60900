//! TOML definitions of manifolds and endomorphisms.
//!
//! ```toml
//! name = "Klein"
//! dim = 2
//! orientable = false
//! holonomy_order = 2
//! homology = ["Z", "Z (+) Z/2", "0"]
//! ```
//!
//! ```toml
//! manifold = "Klein"          # catalog name or path to a manifold file
//! degree = 9
//! top_sign = 1                # optional, orientable manifolds only
//! induced_homology = [[[1]], [[3, 0], [0, 1]], []]
//! ```
//!
//! `induced_cohomology`, `transfer_homology` and `transfer_cohomology` are
//! optional and take the same shape as `induced_homology`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::{AbelianError, FgAbGroup, IntMatrix};
use crate::endomorphisms::{validate_endo, EndoError, ExpandingEndo};
use crate::manifolds::{lookup, validate, FlatManifold, ManifoldError};

#[derive(Debug, Error)]
pub enum FileError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed definition: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("invalid definition: {0}")]
    Invalid(String),
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
    #[error(transparent)]
    Endo(#[from] EndoError),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldFile {
    pub name: String,
    pub dim: usize,
    pub orientable: bool,
    pub holonomy_order: u64,
    pub homology: Vec<String>,
}

type Matrices = Vec<Vec<Vec<i64>>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndoFile {
    pub manifold: String,
    pub degree: u64,
    pub top_sign: Option<i64>,
    pub induced_homology: Matrices,
    pub induced_cohomology: Option<Matrices>,
    pub transfer_homology: Option<Matrices>,
    pub transfer_cohomology: Option<Matrices>,
}

impl From<&FlatManifold> for ManifoldFile {
    fn from(m: &FlatManifold) -> Self {
        ManifoldFile {
            name: m.name.clone(),
            dim: m.dim,
            orientable: m.orientable,
            holonomy_order: m.holonomy_order,
            homology: m.homology.iter().map(ToString::to_string).collect(),
        }
    }
}

fn read(path: &Path) -> Result<String, FileError> {
    fs::read_to_string(path).map_err(|source| FileError::Io { path: path.to_path_buf(), source })
}

/// Parses and validates a manifold definition.
pub fn parse_manifold(text: &str) -> Result<FlatManifold, FileError> {
    let f: ManifoldFile = toml::from_str(text)?;
    let homology = f.homology.iter().map(|s| s.parse()).collect::<Result<Vec<FgAbGroup>, _>>()?;
    let m = FlatManifold { name: f.name, dim: f.dim, orientable: f.orientable, holonomy_order: f.holonomy_order, homology };
    let violations = validate(&m);
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(FileError::Invalid(format!("manifold {}: {}", m.name, list.join("; "))));
    }
    Ok(m)
}

pub fn load_manifold(path: &Path) -> Result<FlatManifold, FileError> {
    parse_manifold(&read(path)?)
}

/// A path to an existing file, otherwise a catalog name.
pub fn resolve_manifold(reference: &str, base: Option<&Path>) -> Result<FlatManifold, FileError> {
    let candidates = [base.map(|b| b.join(reference)), Some(PathBuf::from(reference))];
    for p in candidates.into_iter().flatten() {
        if p.is_file() {
            return load_manifold(&p);
        }
    }
    Ok(lookup(reference)?)
}

fn to_matrices(label: &str, data: &Matrices, groups: &[FgAbGroup]) -> Result<Vec<IntMatrix>, FileError> {
    if data.len() != groups.len() {
        return Err(FileError::Invalid(format!("{label}: expected {} matrices, found {}", groups.len(), data.len())));
    }
    data.iter()
        .zip(groups)
        .enumerate()
        .map(|(k, (rows, g))| {
            let n = g.generator_count();
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(FileError::Invalid(format!("{label}[{k}]: {g} needs a {n}x{n} matrix")));
            }
            Ok(IntMatrix::from_rows_with_cols(rows, n))
        })
        .collect()
}

fn build_endo(f: EndoFile, base: Option<&Path>) -> Result<ExpandingEndo, FileError> {
    let manifold = resolve_manifold(&f.manifold, base)?;
    let homology = manifold.homology.clone();
    let cohomology = manifold.cohomology()?;
    let induced = to_matrices("induced_homology", &f.induced_homology, &homology)?;
    let mut e = ExpandingEndo::new(manifold, f.degree, f.top_sign, induced)?;
    if let Some(c) = &f.induced_cohomology {
        e = e.with_induced_cohomology(to_matrices("induced_cohomology", c, &cohomology)?)?;
    }
    let th = f.transfer_homology.as_ref().map(|t| to_matrices("transfer_homology", t, &homology)).transpose()?;
    let tc = f.transfer_cohomology.as_ref().map(|t| to_matrices("transfer_cohomology", t, &cohomology)).transpose()?;
    e = e.with_transfers(th, tc)?;
    let violations = validate_endo(&e);
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(FileError::Invalid(list.join("; ")));
    }
    Ok(e)
}

/// Parses and validates an endomorphism; relative manifold paths resolve against `base`.
pub fn parse_endo(text: &str, base: Option<&Path>) -> Result<ExpandingEndo, FileError> {
    build_endo(toml::from_str(text)?, base)
}

pub fn load_endo(path: &Path) -> Result<ExpandingEndo, FileError> {
    parse_endo(&read(path)?, path.parent())
}

#[cfg(test)]
mod tests {
    use super::*;

    const KLEIN: &str = r#"
manifold = "Klein"
degree = 9
induced_homology = [[[1]], [[3, 0], [0, 1]], []]
"#;

    #[test]
    fn klein_endo_file() {
        let e = parse_endo(KLEIN, None).unwrap();
        assert_eq!(e, crate::endomorphisms::builtin("klein9").unwrap());
    }

    #[test]
    fn manifold_file_round_trip() {
        let m = lookup("N3_4").unwrap();
        let text = toml::to_string(&ManifoldFile::from(&m)).unwrap();
        assert_eq!(parse_manifold(&text).unwrap(), m);
    }

    #[test]
    fn strict_loading() {
        let wrong_shape = KLEIN.replace("[[3, 0], [0, 1]]", "[[3]]");
        assert!(matches!(parse_endo(&wrong_shape, None), Err(FileError::Invalid(_))));
        let not_identity = KLEIN.replace("[[[1]]", "[[[2]]");
        assert!(matches!(parse_endo(&not_identity, None), Err(FileError::Invalid(_))));
        let unknown_key = format!("{KLEIN}\ncolour = 3\n");
        assert!(matches!(parse_endo(&unknown_key, None), Err(FileError::Toml(_))));
        let bad_manifold = "name = \"K\"\ndim = 2\norientable = false\nholonomy_order = 2\nhomology = [\"Z\", \"Z (+) Z/3\", \"0\"]\n";
        assert!(matches!(parse_manifold(bad_manifold), Err(FileError::Invalid(_))));
    }

    #[test]
    fn manifold_reference_by_path() {
        let dir = tempfile::tempdir().unwrap();
        let m = lookup("T2").unwrap();
        fs::write(dir.path().join("t2.toml"), toml::to_string(&ManifoldFile::from(&m)).unwrap()).unwrap();
        let endo = "manifold = \"t2.toml\"\ndegree = 6\ntop_sign = 1\ninduced_homology = [[[1]], [[2, 0], [0, 3]], [[6]]]\n";
        let path = dir.path().join("e.toml");
        fs::write(&path, endo).unwrap();
        assert_eq!(load_endo(&path).unwrap(), crate::endomorphisms::builtin("torus23").unwrap());
    }
}
