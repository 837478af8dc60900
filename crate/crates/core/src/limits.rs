//! Stationary inductive limits `lim(G, α)` of finitely generated abelian groups.
//!
//! The limit splits as `lim(T(G), α) ⊕ lim(G/T(G), A)`: the torsion part is
//! the eventual image of `α` on the (finite) torsion subgroup, and the free
//! part is a subgroup of `Q^r` determined by the action `A` on the free
//! quotient restricted to its eventual image. When that restriction is
//! diagonal over `Z` with scalars `m_i`, the free part is `⊕ Z[1/m_i]`, and
//! `Z[1/m]` depends only on the primes dividing `m`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::abelian::render::{parse_exponent, split_summands, SUM};
use crate::abelian::{integer_kernel, smith_normal_form, AbelianError, FgAbGroup, GroupHom, IntMatrix};
use crate::arith::{divisors, prime_set, render_prime_set, strip_primes, PrimeSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LimitError {
    #[error("a stationary system needs an endomorphism, got a map {0}")]
    NotAnEndomorphism(String),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
}

/// A group together with a self-map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StationarySystem {
    endo: GroupHom,
}

impl StationarySystem {
    pub fn new(endo: GroupHom) -> Result<Self, LimitError> {
        if !endo.is_endomorphism() {
            return Err(LimitError::NotAnEndomorphism(endo.to_string()));
        }
        Ok(StationarySystem { endo })
    }

    /// Multiplication by `m` on `g`.
    pub fn scalar(g: &FgAbGroup, m: impl Into<BigInt>) -> Self {
        StationarySystem { endo: GroupHom::multiplication(g, m) }
    }

    pub fn group(&self) -> &FgAbGroup {
        self.endo.domain()
    }

    pub fn endo(&self) -> &GroupHom {
        &self.endo
    }

    /// Action on the free quotient `G / T(G) ≅ Z^r`.
    pub fn free_action(&self) -> IntMatrix {
        self.endo.free_block()
    }

    /// The same system with `α` replaced by `α^k`.
    pub fn power(&self, k: u32) -> Self {
        StationarySystem { endo: self.endo.power(k) }
    }
}

/// One `Z[1/m]` summand. `scalar` is the raw eigenvalue; only `primes` matters
/// up to isomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarSummand {
    pub scalar: BigInt,
    pub primes: PrimeSet,
}

/// Coordinates used to locate stage-zero elements inside `⊕ Z[1/m_i]`:
/// the class of `x ∈ Z^r` equals `(c_i / m_i^stage)` where `c = coordinates · x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarBasis {
    pub stage: u32,
    pub coordinates: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FreeLimit {
    CanonicalScalars { summands: Vec<ScalarSummand>, basis: ScalarBasis },
    Opaque { rank: usize, inverted_primes: PrimeSet, matrix_class: IntMatrix },
}

impl FreeLimit {
    pub fn rank(&self) -> usize {
        match self {
            FreeLimit::CanonicalScalars { summands, .. } => summands.len(),
            FreeLimit::Opaque { rank, .. } => *rank,
        }
    }

    pub fn is_canonical(&self) -> bool {
        matches!(self, FreeLimit::CanonicalScalars { .. })
    }

    pub fn prime_sets(&self) -> Option<Vec<PrimeSet>> {
        match self {
            FreeLimit::CanonicalScalars { summands, .. } => Some(summands.iter().map(|s| s.primes.clone()).collect()),
            FreeLimit::Opaque { .. } => None,
        }
    }
}

/// Canonicalized `lim(G, α)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitGroup {
    pub torsion: FgAbGroup,
    pub free_part: FreeLimit,
    pub presentation: StationarySystem,
}

impl LimitGroup {
    pub fn is_canonical(&self) -> bool {
        self.free_part.is_canonical()
    }

    pub fn rank(&self) -> usize {
        self.free_part.rank()
    }

    pub fn summary(&self) -> LimitSummary {
        let free = match &self.free_part {
            FreeLimit::CanonicalScalars { summands, .. } => {
                FreeSummary::Scalars(summands.iter().map(|s| s.primes.clone()).collect())
            }
            FreeLimit::Opaque { rank, inverted_primes, .. } => {
                FreeSummary::Opaque { rank: *rank, primes: inverted_primes.clone() }
            }
        };
        LimitSummary::new(free, self.torsion.clone())
    }

    /// Rendering with the raw scalars, e.g. `Z[1/9]` where the canonical form reads `Z[1/3]`.
    pub fn raw_display(&self) -> String {
        let mut terms = Vec::new();
        match &self.free_part {
            FreeLimit::CanonicalScalars { summands, .. } => {
                for s in summands {
                    if s.primes.is_empty() {
                        terms.push("Z".to_string());
                    } else {
                        terms.push(format!("Z[1/{}]", s.scalar.abs()));
                    }
                }
            }
            FreeLimit::Opaque { .. } => return self.to_string(),
        }
        terms.extend(self.torsion.torsion().iter().map(|t| format!("Z/{t}")));
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(SUM)
        }
    }
}

impl fmt::Display for LimitGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.summary().fmt(f)
    }
}

/// The isomorphism-relevant content of a limit, without the originating system.
/// This is what reports render and parse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitSummary {
    pub free: FreeSummary,
    pub torsion: FgAbGroup,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FreeSummary {
    /// Sorted list of inverted-prime sets, one per summand.
    Scalars(Vec<PrimeSet>),
    Opaque { rank: usize, primes: PrimeSet },
}

fn prime_set_order(a: &PrimeSet, b: &PrimeSet) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter()))
}

impl LimitSummary {
    pub fn new(free: FreeSummary, torsion: FgAbGroup) -> Self {
        let free = match free {
            FreeSummary::Scalars(mut sets) => {
                sets.sort_by(prime_set_order);
                FreeSummary::Scalars(sets)
            }
            other => other,
        };
        LimitSummary { free, torsion: torsion.torsion_subgroup() }
    }

    /// A finitely generated group viewed as a limit under the identity.
    pub fn from_group(g: &FgAbGroup) -> Self {
        LimitSummary::new(FreeSummary::Scalars(vec![PrimeSet::new(); g.free_rank()]), g.torsion_subgroup())
    }

    pub fn rank(&self) -> usize {
        match &self.free {
            FreeSummary::Scalars(s) => s.len(),
            FreeSummary::Opaque { rank, .. } => *rank,
        }
    }

    pub fn is_canonical(&self) -> bool {
        matches!(self.free, FreeSummary::Scalars(_))
    }

    pub fn is_trivial(&self) -> bool {
        self.rank() == 0 && self.torsion.is_trivial()
    }

    /// `Z` exactly.
    pub fn is_z(&self) -> bool {
        matches!(&self.free, FreeSummary::Scalars(s) if s.len() == 1 && s[0].is_empty()) && self.torsion.is_trivial()
    }

    /// `Z[1/m]` for a single summand with this prime set, and nothing else.
    pub fn is_single_localization(&self, primes: &PrimeSet) -> bool {
        matches!(&self.free, FreeSummary::Scalars(s) if s.len() == 1 && &s[0] == primes) && self.torsion.is_trivial()
    }

    /// Primes appearing in any summand.
    pub fn inverted_primes(&self) -> PrimeSet {
        match &self.free {
            FreeSummary::Scalars(s) => s.iter().flatten().cloned().collect(),
            FreeSummary::Opaque { primes, .. } => primes.clone(),
        }
    }
}

impl fmt::Display for LimitSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = Vec::new();
        match &self.free {
            FreeSummary::Scalars(sets) => {
                let mut i = 0;
                while i < sets.len() {
                    let mut j = i;
                    while j < sets.len() && sets[j] == sets[i] {
                        j += 1;
                    }
                    let base = if sets[i].is_empty() {
                        "Z".to_string()
                    } else {
                        let primes: Vec<String> = sets[i].iter().map(ToString::to_string).collect();
                        format!("Z[1/{}]", primes.join("*"))
                    };
                    terms.push(if j - i == 1 { base } else { format!("{base}^{}", j - i) });
                    i = j;
                }
            }
            FreeSummary::Opaque { rank, primes } => {
                terms.push(format!("Opaque(rank={rank}, primes={{{}}})", render_prime_set(primes)));
            }
        }
        terms.extend(self.torsion.torsion().iter().map(|t| format!("Z/{t}")));
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(SUM))
        }
    }
}

fn parse_primes(list: &str, sep: char, whole: &str) -> Result<PrimeSet, AbelianError> {
    let mut out = PrimeSet::new();
    for p in list.split(sep).map(str::trim).filter(|p| !p.is_empty()) {
        let n: BigInt = p.parse().map_err(|_| AbelianError::Parse(format!("bad integer {p:?} in {whole:?}")))?;
        if n < BigInt::from(2) {
            return Err(AbelianError::Parse(format!("bad localization {p:?} in {whole:?}")));
        }
        // accept composite denominators such as Z[1/9]; canonicalize to primes
        out.extend(prime_set(&n));
    }
    Ok(out)
}

impl FromStr for LimitSummary {
    type Err = AbelianError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("Opaque(") {
            let (inner, tail) = rest
                .split_once(')')
                .ok_or_else(|| AbelianError::Parse(format!("unterminated Opaque term in {s:?}")))?;
            let rank_part = inner
                .split(',')
                .next()
                .and_then(|r| r.trim().strip_prefix("rank="))
                .ok_or_else(|| AbelianError::Parse(format!("missing rank in {s:?}")))?;
            let rank: usize = rank_part.trim().parse().map_err(|_| AbelianError::Parse(format!("bad rank in {s:?}")))?;
            let primes_part = inner
                .split_once("primes={")
                .and_then(|(_, p)| p.strip_suffix('}'))
                .ok_or_else(|| AbelianError::Parse(format!("missing primes in {s:?}")))?;
            let primes = parse_primes(primes_part, ',', s)?;
            let tail = tail.trim();
            let torsion = match tail.strip_prefix("(+)") {
                Some(t) => t.parse::<FgAbGroup>()?,
                None if tail.is_empty() => FgAbGroup::trivial(),
                None => return Err(AbelianError::Parse(format!("trailing text in {s:?}"))),
            };
            if torsion.free_rank() > 0 {
                return Err(AbelianError::Parse(format!("free summand after Opaque term in {s:?}")));
            }
            return Ok(LimitSummary::new(FreeSummary::Opaque { rank, primes }, torsion));
        }
        let mut sets = Vec::new();
        let mut rest = Vec::new();
        for term in split_summands(s) {
            if let Some(body) = term.strip_prefix("Z[1/") {
                let (primes, exp) = body
                    .split_once(']')
                    .ok_or_else(|| AbelianError::Parse(format!("unterminated localization in {s:?}")))?;
                let copies = match exp.trim().strip_prefix('^') {
                    Some(k) => parse_exponent(k, s)?,
                    None if exp.trim().is_empty() => 1,
                    None => return Err(AbelianError::Parse(format!("bad localization term {term:?}"))),
                };
                let set = parse_primes(primes, '*', s)?;
                sets.extend(std::iter::repeat_n(set, copies));
            } else {
                rest.push(term);
            }
        }
        let group: FgAbGroup = if rest.is_empty() { FgAbGroup::trivial() } else { rest.join(SUM).parse()? };
        sets.extend(std::iter::repeat_n(PrimeSet::new(), group.free_rank()));
        Ok(LimitSummary::new(FreeSummary::Scalars(sets), group.torsion_subgroup()))
    }
}

/// Image of `α^k` on the torsion subgroup once it stops shrinking.
pub fn eventual_torsion(sys: &StationarySystem) -> FgAbGroup {
    eventual_torsion_with_steps(sys).0
}

fn eventual_torsion_with_steps(sys: &StationarySystem) -> (FgAbGroup, u32) {
    let alpha = sys.endo.torsion_restriction();
    let whole = alpha.domain().clone();
    if whole.is_trivial() {
        return (whole, 0);
    }
    // images are nested, so equal orders at consecutive steps means equality from then on
    let cap = whole.torsion_order();
    let mut prev = whole;
    let mut k: u32 = 1;
    loop {
        let image = alpha.power(k).image();
        if image.torsion_order() == prev.torsion_order() || BigInt::from(k) >= cap {
            return (image, k);
        }
        prev = image;
        k += 1;
    }
}

/// Rank of the limit: rank of `A^r` on the free quotient `Z^r`.
pub fn limit_rank(sys: &StationarySystem) -> usize {
    let a = sys.free_action();
    a.pow(a.rows() as u32).rank()
}

/// Trace of `A^k` on the free quotient; this is the trace of the induced
/// automorphism of `lim ⊗ Q`, since nilpotent directions contribute nothing.
pub fn induced_trace(sys: &StationarySystem, k: u32) -> BigInt {
    assert!(k >= 1, "trace power must be positive");
    sys.free_action().pow(k).trace()
}

/// Eventual image `L = A^r Z^r` with a basis, and coordinates on it.
struct EventualImage {
    /// `r × r∞`, columns are a basis of `L`.
    basis: IntMatrix,
    /// `U` from the Smith form of `A^r`; coordinates of `y ∈ L` are `(U y)_i / d_i`.
    u: IntMatrix,
    factors: Vec<BigInt>,
}

impl EventualImage {
    fn new(a: &IntMatrix) -> Self {
        let r = a.rows();
        let power = a.pow(r as u32);
        let s = smith_normal_form(&power);
        let k = s.rank();
        let mut basis = IntMatrix::zeros(r, k);
        for j in 0..k {
            for i in 0..r {
                basis[(i, j)] = &s.u_inv[(i, j)] * &s.invariant_factors[j];
            }
        }
        EventualImage { basis, u: s.u, factors: s.invariant_factors }
    }

    fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Coordinates of each column of `vectors` (all lying in `L`).
    fn coordinates(&self, vectors: &IntMatrix) -> IntMatrix {
        let uy = &self.u * vectors;
        let mut out = IntMatrix::zeros(self.rank(), vectors.cols());
        for i in 0..self.rank() {
            for j in 0..vectors.cols() {
                debug_assert!((&uy[(i, j)] % &self.factors[i]).is_zero(), "vector outside the eventual image");
                out[(i, j)] = &uy[(i, j)] / &self.factors[i];
            }
        }
        out
    }
}

fn evaluate(poly: &[BigInt], x: &BigInt) -> BigInt {
    poly.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Tries to write `b = E · diag(λ) · E⁻¹` with `E` unimodular, using the
/// integer kernels of `b − λI` over the integer roots `λ` of the
/// characteristic polynomial.
fn split_over_integers(b: &IntMatrix) -> Option<(Vec<BigInt>, IntMatrix)> {
    let n = b.rows();
    let poly = b.characteristic_polynomial();
    let det = b.determinant();
    if det.is_zero() {
        return None;
    }
    let mut scalars = Vec::new();
    let mut columns: Vec<Vec<BigInt>> = Vec::new();
    for d in divisors(&det) {
        for lambda in [d.clone(), -d] {
            if !evaluate(&poly, &lambda).is_zero() {
                continue;
            }
            let shifted = b.sub(&IntMatrix::scalar(n, lambda.clone()));
            let kernel = integer_kernel(&shifted);
            for j in 0..kernel.cols() {
                scalars.push(lambda.clone());
                columns.push(kernel.column(j));
            }
        }
    }
    if columns.len() != n {
        return None;
    }
    let mut e = IntMatrix::zeros(n, n);
    for (j, col) in columns.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            e[(i, j)] = x.clone();
        }
    }
    if e.determinant().abs() != BigInt::one() {
        return None;
    }
    Some((scalars, e))
}

/// Canonicalizes `lim(G, α)`.
pub fn stationary_limit(sys: &StationarySystem) -> LimitGroup {
    let torsion = eventual_torsion(sys);
    let a = sys.free_action();
    let r = a.rows();
    let image = EventualImage::new(&a);
    let b = image.coordinates(&(&a * &image.basis));
    let free_part = match split_over_integers(&b) {
        Some((scalars, e)) => {
            // stage-r coordinates of x: E⁻¹ · coords(A^r x)
            let det = e.determinant();
            let e_inv = e.adjugate().scale(&det);
            let to_eigen = &e_inv * &image.coordinates(&a.pow(r as u32));
            let mut order: Vec<usize> = (0..scalars.len()).collect();
            let sets: Vec<PrimeSet> = scalars.iter().map(prime_set).collect();
            order.sort_by(|&i, &j| prime_set_order(&sets[i], &sets[j]).then(scalars[i].cmp(&scalars[j])));
            let all: Vec<usize> = (0..r).collect();
            let coordinates = to_eigen.select(&order, &all);
            let summands = order
                .iter()
                .map(|&i| ScalarSummand { scalar: scalars[i].clone(), primes: sets[i].clone() })
                .collect();
            FreeLimit::CanonicalScalars { summands, basis: ScalarBasis { stage: r as u32, coordinates } }
        }
        None => FreeLimit::Opaque {
            rank: image.rank(),
            inverted_primes: prime_set(&b.determinant()),
            matrix_class: b,
        },
    };
    LimitGroup { torsion, free_part, presentation: sys.clone() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Unknown => "unknown",
        })
    }
}

/// Dimension of `lim / p·lim` coming from the free part. For `⊕ Z[1/S_i]` it
/// counts summands with `p ∉ S_i`; for an opaque action it is the rank of
/// its eventual image modulo `p`.
fn free_mod_p_dimension(l: &LimitGroup, p: &BigInt) -> usize {
    match &l.free_part {
        FreeLimit::CanonicalScalars { summands, .. } => summands.iter().filter(|s| !s.primes.contains(p)).count(),
        FreeLimit::Opaque { matrix_class, .. } => {
            let power = matrix_class.pow(matrix_class.rows() as u32);
            smith_normal_form(&power).invariant_factors.iter().filter(|d| !(*d % p).is_zero()).count()
        }
    }
}

/// Decides isomorphism when both limits are canonical; otherwise compares the
/// invariants that can be computed and answers `Unknown` if they agree.
pub fn limits_isomorphic(a: &LimitGroup, b: &LimitGroup) -> Verdict {
    if a.torsion != b.torsion || a.rank() != b.rank() {
        return Verdict::No;
    }
    if a.is_canonical() && b.is_canonical() {
        return if a.summary() == b.summary() { Verdict::Yes } else { Verdict::No };
    }
    let a_primes = a.summary().inverted_primes();
    let b_primes = b.summary().inverted_primes();
    if a_primes != b_primes {
        return Verdict::No;
    }
    if a_primes.iter().any(|p| free_mod_p_dimension(a, p) != free_mod_p_dimension(b, p)) {
        return Verdict::No;
    }
    Verdict::Unknown
}

/// Whether the stage-zero class of `x ∈ Z^r` is divisible by `m` in the
/// canonical free part. `None` for opaque limits.
pub fn predicts_divisible(l: &LimitGroup, x: &[BigInt], m: &BigInt) -> Option<bool> {
    let FreeLimit::CanonicalScalars { summands, basis } = &l.free_part else { return None };
    let col = IntMatrix::from_vec(x.len(), 1, x.to_vec());
    let c = &basis.coordinates * &col;
    Some(summands.iter().enumerate().all(|(i, s)| {
        let needed = strip_primes(m, &s.primes);
        (&c[(i, 0)] % &needed).is_zero()
    }))
}
