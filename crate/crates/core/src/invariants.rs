//! Homology and K-theory of the stable and unstable groupoids, Čech
//! cohomology of the solenoid, and checks of the structural statements
//! relating them to the flat manifold.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::{k_groups_low_dim, FgAbGroup, GroupHom};
use crate::arith::prime_set;
use crate::endomorphisms::{derive_transfer, special_degree, validate_endo, EndoError, ExpandingEndo, TransferData};
use crate::limits::{induced_trace, limit_rank, limits_isomorphic, stationary_limit, LimitGroup, StationarySystem, Verdict};
use crate::manifolds::{FlatManifold, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("invalid endomorphism: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error(transparent)]
    Endo(#[from] EndoError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
            Status::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub status: Status,
    pub anchor: String,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &str, status: Status, anchor: &str, detail: impl Into<String>) -> Self {
        CheckOutcome { name: name.into(), status, anchor: anchor.into(), detail: detail.into() }
    }
}

fn verdict_status(v: Verdict) -> Status {
    match v {
        Verdict::Yes => Status::Pass,
        Verdict::No => Status::Fail,
        Verdict::Unknown => Status::Unknown,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    pub manifold: String,
    pub degree: BigInt,
    pub dim: usize,
    /// `H_k(G^s) = lim(H^k(Y), t_cohomology)`.
    pub stable_homology: Vec<LimitGroup>,
    /// `H_k(G^u) = lim(H_k(Y), t_homology)`.
    pub unstable_homology: Vec<LimitGroup>,
    /// `(K_0, K_1)` of the stable algebra; `None` above dimension three.
    pub stable_k: Option<Vec<LimitGroup>>,
    pub unstable_k: Option<Vec<LimitGroup>>,
    /// `H^k(X) = lim(H^k(Y), g^*)`.
    pub cech_x: Vec<LimitGroup>,
    pub transfers: TransferData,
}

fn limits(maps: &[GroupHom]) -> Vec<LimitGroup> {
    maps.iter()
        .map(|m| stationary_limit(&StationarySystem::new(m.clone()).expect("per-degree maps are endomorphisms")))
        .collect()
}

/// Block-diagonal sums over even and odd degrees.
fn parity_sums(maps: &[GroupHom]) -> Vec<GroupHom> {
    (0..2)
        .map(|parity| {
            maps.iter()
                .enumerate()
                .filter(|(k, _)| k % 2 == parity)
                .fold(GroupHom::identity(&FgAbGroup::trivial()), |acc, (_, m)| {
                    acc.direct_sum(m).expect("direct sums of endomorphisms exist")
                })
        })
        .collect()
}

fn k_limits(maps: &[GroupHom], d: usize) -> Option<Vec<LimitGroup>> {
    let groups: Vec<FgAbGroup> = maps.iter().map(|m| m.domain().clone()).collect();
    let (even, odd) = k_groups_low_dim(&groups, d).ok()?;
    let sums = parity_sums(maps);
    debug_assert_eq!(sums[0].domain(), &even);
    debug_assert_eq!(sums[1].domain(), &odd);
    Some(limits(&sums))
}

pub fn compute_report(e: &ExpandingEndo) -> Result<InvariantReport, InvariantError> {
    let violations = validate_endo(e);
    if !violations.is_empty() {
        return Err(InvariantError::Invalid(violations));
    }
    let transfers = derive_transfer(e)?;
    let d = e.dim();
    Ok(InvariantReport {
        manifold: e.manifold.name.clone(),
        degree: e.degree.clone(),
        dim: d,
        stable_homology: limits(&transfers.transfer_cohomology),
        unstable_homology: limits(&transfers.transfer_homology),
        stable_k: k_limits(&transfers.transfer_cohomology, d),
        unstable_k: k_limits(&transfers.transfer_homology, d),
        cech_x: limits(&e.cohomology_maps()),
        transfers,
    })
}

pub fn check_degree_zero(report: &InvariantReport, n: &BigInt) -> CheckOutcome {
    let anchor = "H_0(G^s) = H_0(G^u) = Z[1/n]";
    let primes = prime_set(n);
    let ok = [&report.stable_homology[0], &report.unstable_homology[0]]
        .iter()
        .all(|l| l.summary().is_single_localization(&primes));
    let detail = format!("stable {}, unstable {}, n = {n}", report.stable_homology[0], report.unstable_homology[0]);
    CheckOutcome::new("degree_zero", if ok { Status::Pass } else { Status::Fail }, anchor, detail)
}

/// Orientable: both top-degree limits are `Z`. Otherwise the unstable one vanishes.
pub fn check_top_degree(report: &InvariantReport, m: &FlatManifold) -> CheckOutcome {
    let anchor = "H_d(G^u) = Z if Y orientable, 0 otherwise";
    let d = m.dim;
    let (u, s) = (report.unstable_homology[d].summary(), report.stable_homology[d].summary());
    let ok = if m.orientable { u.is_z() && s.is_z() } else { u.is_trivial() };
    let detail = format!("H_{d}(G^u) = {u}, H_{d}(G^s) = {s}");
    CheckOutcome::new("top_degree", if ok { Status::Pass } else { Status::Fail }, anchor, detail)
}

/// Limit ranks agree with the Betti numbers of `Y`, and so does the Euler characteristic.
pub fn check_rational(report: &InvariantReport, m: &FlatManifold) -> CheckOutcome {
    let anchor = "H_*(G^s) ⊗ Q = H^*(Y) ⊗ Q and H_*(G^u) ⊗ Q = H_*(Y) ⊗ Q";
    let mut bad = Vec::new();
    for k in 0..=m.dim {
        let betti = m.betti(k);
        let stable = limit_rank(&report.stable_homology[k].presentation);
        let unstable = limit_rank(&report.unstable_homology[k].presentation);
        if stable != betti || unstable != betti {
            bad.push(format!("degree {k}: Betti {betti}, stable rank {stable}, unstable rank {unstable}"));
        }
    }
    if let (Some(sk), Some(uk)) = (&report.stable_k, &report.unstable_k) {
        for parity in 0..2 {
            let betti: usize = (0..=m.dim).filter(|k| k % 2 == parity).map(|k| m.betti(k)).sum();
            if sk[parity].rank() != betti || uk[parity].rank() != betti {
                bad.push(format!("K_{parity}: rank {betti} expected"));
            }
        }
    }
    let chi: i64 = report
        .unstable_homology
        .iter()
        .enumerate()
        .map(|(k, l)| if k % 2 == 0 { l.rank() as i64 } else { -(l.rank() as i64) })
        .sum();
    if chi != m.euler_characteristic() {
        bad.push(format!("alternating rank sum {chi} differs from Euler characteristic {}", m.euler_characteristic()));
    }
    if bad.is_empty() {
        CheckOutcome::new("rational", Status::Pass, anchor, "ranks equal Betti numbers in every degree")
    } else {
        CheckOutcome::new("rational", Status::Fail, anchor, bad.join("; "))
    }
}

/// At degree `(|F|+1)^d` the torsion of both sides matches that of `Y`.
pub fn check_torsion(report: &InvariantReport, e: &ExpandingEndo) -> CheckOutcome {
    let anchor = "T(H_*(G^u)) = T(H_*(Y)) and T(H_*(G^s)) = T(H^*(Y)) at n = (|F|+1)^d";
    let special = special_degree(&e.manifold);
    if e.degree != special {
        return CheckOutcome::new("torsion", Status::Skip, anchor, format!("degree {} is not the special degree {special}", e.degree));
    }
    let cohomology = e.cohomology();
    let mut bad = Vec::new();
    for k in 0..=e.dim() {
        let want_u = e.manifold.homology[k].torsion_subgroup();
        let want_s = cohomology[k].torsion_subgroup();
        if report.unstable_homology[k].torsion != want_u {
            bad.push(format!("unstable degree {k}: {} vs {want_u}", report.unstable_homology[k].torsion));
        }
        if report.stable_homology[k].torsion != want_s {
            bad.push(format!("stable degree {k}: {} vs {want_s}", report.stable_homology[k].torsion));
        }
    }
    if bad.is_empty() {
        CheckOutcome::new("torsion", Status::Pass, anchor, "torsion preserved in every degree")
    } else {
        CheckOutcome::new("torsion", Status::Fail, anchor, bad.join("; "))
    }
}

fn pair_verdict(a: Option<&LimitGroup>, b: Option<&LimitGroup>) -> Verdict {
    match (a, b) {
        (Some(x), Some(y)) => limits_isomorphic(x, y),
        (Some(x), None) | (None, Some(x)) => {
            if x.summary().is_trivial() {
                Verdict::Yes
            } else {
                Verdict::No
            }
        }
        (None, None) => Verdict::Yes,
    }
}

fn combine(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
    let mut out = Verdict::Yes;
    for v in verdicts {
        match v {
            Verdict::No => return Verdict::No,
            Verdict::Unknown => out = Verdict::Unknown,
            Verdict::Yes => {}
        }
    }
    out
}

/// Whether `a_j ≅ b_{j - k}` for every integer `j`, missing degrees being zero.
pub fn graded_shift_match(a: &[LimitGroup], b: &[LimitGroup], k: i64) -> Verdict {
    let lo = 0.min(k);
    let hi = (a.len() as i64 - 1).max(b.len() as i64 - 1 + k);
    combine((lo..=hi).map(|j| {
        let get = |g: &[LimitGroup], i: i64| if i < 0 { None } else { g.get(i as usize) }.cloned();
        pair_verdict(get(a, j).as_ref(), get(b, j - k).as_ref())
    }))
}

/// Whether `a_j ≅ b_{d - j}` for `0 ≤ j ≤ d`.
pub fn graded_reflection_match(a: &[LimitGroup], b: &[LimitGroup]) -> Verdict {
    if a.len() != b.len() {
        return Verdict::No;
    }
    let d = a.len() - 1;
    combine((0..=d).map(|j| limits_isomorphic(&a[j], &b[d - j])))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PutnamVerdict {
    /// Shifts `k` with `H^*(X) ≅ H_{*-k}(G^u)`.
    pub shifts: Vec<i64>,
    /// Whether some shift could not be decided.
    pub undecided: bool,
    /// `H^*(X) ≅ H_{d-*}(G^u)`.
    pub reflection: Verdict,
}

impl PutnamVerdict {
    pub fn describe(&self) -> String {
        let shift = match (self.shifts.as_slice(), self.undecided) {
            ([], false) => "no shift works".to_string(),
            ([], true) => "unknown".to_string(),
            (ks, _) => format!("shift k = {}", ks.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")),
        };
        format!("{shift}; H^*(X) = H_(d-*)(G^u): {}", self.reflection)
    }
}

pub fn putnam_question(report: &InvariantReport) -> PutnamVerdict {
    let d = report.dim as i64;
    let mut shifts = Vec::new();
    let mut undecided = false;
    for k in -d..=d {
        match graded_shift_match(&report.cech_x, &report.unstable_homology, k) {
            Verdict::Yes => shifts.push(k),
            Verdict::Unknown => undecided = true,
            Verdict::No => {}
        }
    }
    PutnamVerdict { shifts, undecided, reflection: graded_reflection_match(&report.cech_x, &report.unstable_homology) }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftedForms {
    /// `lim(H_{d-k}(Y), g_*)` for `k = 0..d`.
    pub homology: Option<Vec<LimitGroup>>,
    /// `lim(K_{d-j}(Y), g_*)` for `j = 0, 1`.
    pub k_theory: Option<Vec<LimitGroup>>,
    pub outcomes: Vec<CheckOutcome>,
}

/// Recomputes the stable side from `g_*` instead of the cohomological
/// transfer; the K-theory form needs a spin^c structure, asserted by the caller.
pub fn stable_shifted_forms(e: &ExpandingEndo, report: &InvariantReport, spinc: bool) -> ShiftedForms {
    let anchor_h = "H_*(G^s) = lim(H_(d-*)(Y), g_*) for Y orientable";
    let anchor_k = "K_*(G^s) = lim(K_(d-*)(Y), g_*) for Y spin^c, indices mod 2";
    let mut outcomes = Vec::new();
    if !e.manifold.orientable {
        outcomes.push(CheckOutcome::new("stable_shifted_homology", Status::Skip, anchor_h, "nonorientable"));
        outcomes.push(CheckOutcome::new("stable_shifted_k", Status::Skip, anchor_k, "nonorientable"));
        return ShiftedForms { homology: None, k_theory: None, outcomes };
    }
    let d = e.dim();
    let mut reversed = limits(&e.induced_homology);
    reversed.reverse();
    let v = combine((0..=d).map(|k| limits_isomorphic(&report.stable_homology[k], &reversed[k])));
    outcomes.push(CheckOutcome::new(
        "stable_shifted_homology",
        verdict_status(v),
        anchor_h,
        format!("({})", reversed.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")),
    ));
    let mut k_theory = None;
    if !spinc {
        outcomes.push(CheckOutcome::new("stable_shifted_k", Status::Skip, anchor_k, "spin^c structure not asserted"));
    } else if let (Some(k_lim), Some(stable_k)) = (k_limits(&e.induced_homology, d), &report.stable_k) {
        let shifted = vec![k_lim[d % 2].clone(), k_lim[(d + 1) % 2].clone()];
        let v = combine((0..2).map(|j| limits_isomorphic(&stable_k[j], &shifted[j])));
        outcomes.push(CheckOutcome::new(
            "stable_shifted_k",
            verdict_status(v),
            anchor_k,
            format!("({}, {})", shifted[0], shifted[1]),
        ));
        k_theory = Some(shifted);
    } else {
        outcomes.push(CheckOutcome::new("stable_shifted_k", Status::Skip, anchor_k, "K-theory unsupported above dimension three"));
    }
    ShiftedForms { homology: Some(reversed), k_theory, outcomes }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicCount {
    pub k: u32,
    pub value: BigInt,
    /// `(n^k - 1, n^k + 1)`.
    pub bound: (BigInt, BigInt),
}

/// `|Per_k|` from the Lefschetz sum over the unstable homology, available
/// only when every intermediate degree is rationally trivial.
pub fn periodic_points(e: &ExpandingEndo, k: u32) -> Result<PeriodicCount, InvariantError> {
    if k == 0 {
        return Err(InvariantError::InsufficientData("periods start at k = 1".into()));
    }
    let transfers = derive_transfer(e)?;
    let d = e.dim();
    let systems: Vec<StationarySystem> = transfers
        .transfer_homology
        .iter()
        .map(|t| StationarySystem::new(t.clone()).expect("transfers are endomorphisms"))
        .collect();
    for (i, s) in systems.iter().enumerate().take(d).skip(1) {
        let r = limit_rank(s);
        if r != 0 {
            return Err(InvariantError::InsufficientData(format!(
                "H_{i}(G^u) has rank {r}; the action on intermediate degrees is not determined"
            )));
        }
    }
    let sum: BigInt = systems
        .iter()
        .enumerate()
        .map(|(i, s)| if i % 2 == 0 { induced_trace(s, k) } else { -induced_trace(s, k) })
        .sum();
    let nk = e.degree.pow(k);
    Ok(PeriodicCount { k, value: sum.abs(), bound: (&nk - BigInt::one(), &nk + BigInt::one()) })
}

/// Every check in the suite, in a fixed order.
pub fn run_checks(e: &ExpandingEndo, report: &InvariantReport, spinc: bool) -> Vec<CheckOutcome> {
    let m = &e.manifold;
    let mut out = vec![
        transfer_check(e, &report.transfers),
        check_degree_zero(report, &e.degree),
        check_top_degree(report, m),
        check_rational(report, m),
        check_torsion(report, e),
    ];
    let putnam = putnam_question(report);
    let anchor = "H^*(X) = H_(d-*)(G^u) for Y orientable";
    let status = if m.orientable { verdict_status(putnam.reflection) } else { Status::Skip };
    out.push(CheckOutcome::new("putnam_question", status, anchor, putnam.describe()));
    out.extend(stable_shifted_forms(e, report, spinc).outcomes);
    let anchor = "|Per_k| = n^k - 1 or n^k + 1";
    out.push(match periodic_points(e, 1) {
        Ok(p) if p.value == p.bound.0 || p.value == p.bound.1 => {
            CheckOutcome::new("periodic_points", Status::Pass, anchor, format!("Per_1 = {}", p.value))
        }
        Ok(p) => CheckOutcome::new("periodic_points", Status::Fail, anchor, format!("Per_1 = {} outside {:?}", p.value, p.bound)),
        Err(err) => CheckOutcome::new("periodic_points", Status::Skip, anchor, err.to_string()),
    });
    out.push(CheckOutcome::new("ruelle_algebras", Status::Skip, "Ruelle algebras and homoclinic products", "not computed"));
    out
}

fn transfer_check(e: &ExpandingEndo, t: &TransferData) -> CheckOutcome {
    let n = &e.degree;
    let g_star = e.cohomology_maps();
    let ok = e.induced_homology.iter().zip(&t.transfer_homology).all(|(g, t)| {
        g.compose(t).map(|c| c.is_multiplication_by(n.clone())).unwrap_or(false)
    }) && g_star.iter().zip(&t.transfer_cohomology).all(|(g, t)| {
        t.compose(g).map(|c| c.is_multiplication_by(n.clone())).unwrap_or(false)
    });
    CheckOutcome::new(
        "transfer_relations",
        if ok { Status::Pass } else { Status::Fail },
        "g_* t_homology = n and t_cohomology g^* = n",
        format!("n = {n}"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endomorphisms::builtin;

    fn graded(ls: &[LimitGroup]) -> Vec<String> {
        ls.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn klein_report() {
        let r = compute_report(&builtin("klein9").unwrap()).unwrap();
        assert_eq!(graded(&r.stable_homology), ["Z[1/3]", "Z[1/3]", "Z/2"]);
        assert_eq!(graded(&r.unstable_homology), ["Z[1/3]", "Z[1/3] (+) Z/2", "0"]);
        assert_eq!(graded(&r.cech_x), ["Z", "Z[1/3]", "Z/2"]);
        assert_eq!(r.stable_homology[0].raw_display(), "Z[1/9]");
        let k = r.stable_k.as_ref().unwrap();
        assert_eq!(k[0].to_string(), "Z[1/3] (+) Z/2");
        assert_eq!(k[1].to_string(), "Z[1/3]");
    }

    #[test]
    fn circle_and_hantzsche_wendt_reports() {
        let r = compute_report(&builtin("circle2").unwrap()).unwrap();
        assert_eq!(graded(&r.stable_homology), ["Z[1/2]", "Z"]);
        assert_eq!(graded(&r.unstable_homology), ["Z[1/2]", "Z"]);
        let r = compute_report(&builtin("o36x125").unwrap()).unwrap();
        assert_eq!(graded(&r.unstable_homology), ["Z[1/5]", "Z/4 (+) Z/4", "0", "Z"]);
        assert_eq!(graded(&r.stable_homology), ["Z[1/5]", "0", "Z/4 (+) Z/4", "Z"]);
    }

    #[test]
    fn all_checks_pass_on_builtins() {
        for (name, e) in crate::endomorphisms::builtins() {
            let r = compute_report(&e).unwrap();
            for c in run_checks(&e, &r, true) {
                assert!(matches!(c.status, Status::Pass | Status::Skip), "{name}: {c:?}");
            }
        }
    }

    #[test]
    fn putnam_verdicts() {
        let k = putnam_question(&compute_report(&builtin("klein9").unwrap()).unwrap());
        assert!(k.shifts.is_empty() && !k.undecided);
        assert_eq!(k.reflection, Verdict::No);
        assert!(k.describe().starts_with("no shift works"));
        for name in ["circle2", "circle3", "torus23", "o36x125"] {
            let v = putnam_question(&compute_report(&builtin(name).unwrap()).unwrap());
            assert_eq!(v.reflection, Verdict::Yes, "{name}");
        }
    }

    #[test]
    fn periodic_counts() {
        let c = builtin("circle2").unwrap();
        assert_eq!(periodic_points(&c, 3).unwrap().value, BigInt::from(7));
        let o = builtin("o36x125").unwrap();
        let p = periodic_points(&o, 2).unwrap();
        assert_eq!(p.value, BigInt::from(125 * 125 - 1));
        assert!(matches!(periodic_points(&builtin("torus23").unwrap(), 1), Err(InvariantError::InsufficientData(_))));
        assert!(matches!(periodic_points(&builtin("klein9").unwrap(), 1), Err(InvariantError::InsufficientData(_))));
    }

    #[test]
    fn shifted_forms() {
        let e = builtin("klein9").unwrap();
        let r = compute_report(&e).unwrap();
        let f = stable_shifted_forms(&e, &r, true);
        assert!(f.homology.is_none());
        assert!(f.outcomes.iter().all(|o| o.status == Status::Skip));
        let e = builtin("circle2").unwrap();
        let r = compute_report(&e).unwrap();
        let f = stable_shifted_forms(&e, &r, false);
        assert_eq!(graded(f.homology.as_ref().unwrap()), ["Z[1/2]", "Z"]);
        assert_eq!(f.outcomes[1].status, Status::Skip);
    }

    #[test]
    fn shift_matching_handles_missing_degrees() {
        let z: LimitGroup = stationary_limit(&StationarySystem::scalar(&FgAbGroup::free(1), 1));
        let zero = stationary_limit(&StationarySystem::scalar(&FgAbGroup::trivial(), 1));
        assert_eq!(graded_shift_match(&[z.clone(), zero.clone()], &[zero.clone(), z.clone()], -1), Verdict::Yes);
        assert_eq!(graded_shift_match(std::slice::from_ref(&z), std::slice::from_ref(&z), 1), Verdict::No);
    }
}
