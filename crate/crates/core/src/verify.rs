//! The acceptance suite over the built-in endomorphisms, shared by the
//! `verify` subcommand and the test harness.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abelian::{smith_normal_form, FgAbGroup, GroupHom, IntMatrix};
use crate::endomorphisms::{builtin, builtins, ExpandingEndo, BUILTIN_NAMES};
use crate::invariants::{check_degree_zero, check_rational, check_torsion, compute_report, periodic_points, putnam_question, InvariantReport, Status};
use crate::limits::{stationary_limit, FreeLimit, LimitGroup, LimitSummary, StationarySystem, Verdict};
use crate::manifolds::{catalog, validate};
use crate::oracle::{check_canonical_against_fingerprint, default_denominators, fingerprint_limit, torus_fixed_points, verify_smith};

pub const SEED: u64 = 0x5eed_f1a7;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {:>2} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.id, self.name, self.detail)
    }
}

fn result(id: u8, name: &'static str, failures: Vec<String>, ok_detail: impl Into<String>) -> CriterionResult {
    let passed = failures.is_empty();
    let detail = if passed { ok_detail.into() } else { failures.join("; ") };
    CriterionResult { id, name, passed, detail }
}

fn report(name: &str) -> Result<(ExpandingEndo, InvariantReport), String> {
    let e = builtin(name).map_err(|e| e.to_string())?;
    let r = compute_report(&e).map_err(|err| format!("{name}: {err}"))?;
    Ok((e, r))
}

fn summaries(ls: &[LimitGroup]) -> Vec<LimitSummary> {
    ls.iter().map(LimitGroup::summary).collect()
}

fn expected(items: &[&str]) -> Vec<LimitSummary> {
    items.iter().map(|s| s.parse().expect("expected values parse")).collect()
}

fn render(ls: &[LimitSummary]) -> String {
    format!("({})", ls.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
}

pub fn klein_golden() -> CriterionResult {
    let mut bad = Vec::new();
    match report("klein9") {
        Ok((_, r)) => {
            let cases = [
                ("H_*(G^s)", summaries(&r.stable_homology), expected(&["Z[1/9]", "Z[1/3]", "Z/2"])),
                ("H_*(G^u)", summaries(&r.unstable_homology), expected(&["Z[1/9]", "Z[1/3] (+) Z/2", "0"])),
                ("H^*(X)", summaries(&r.cech_x), expected(&["Z", "Z[1/3]", "Z/2"])),
            ];
            for (label, got, want) in cases {
                if got != want {
                    bad.push(format!("{label} = {} but expected {}", render(&got), render(&want)));
                }
            }
        }
        Err(e) => bad.push(e),
    }
    result(1, "Klein bottle golden values", bad, "all three gradeds match")
}

pub fn catalog_integrity() -> CriterionResult {
    let rows: Vec<_> = catalog().into_iter().filter(|m| m.dim == 3 && m.name.contains("3_")).collect();
    let mut bad = Vec::new();
    if rows.len() != 10 {
        bad.push(format!("{} flat 3-manifolds in the catalog", rows.len()));
    }
    for m in &rows {
        for v in validate(m) {
            bad.push(format!("{}: {v}", m.name));
        }
        if m.euler_characteristic() != 0 {
            bad.push(format!("{}: Euler characteristic {}", m.name, m.euler_characteristic()));
        }
    }
    result(2, "catalog integrity", bad, "10 rows valid with Euler characteristic 0")
}

fn over_builtins(mut f: impl FnMut(&str, &ExpandingEndo, &InvariantReport, &mut Vec<String>)) -> Vec<String> {
    let mut bad = Vec::new();
    for name in BUILTIN_NAMES {
        match report(name) {
            Ok((e, r)) => f(name, &e, &r, &mut bad),
            Err(err) => bad.push(err),
        }
    }
    bad
}

pub fn degree_zero() -> CriterionResult {
    let bad = over_builtins(|name, e, r, bad| {
        let c = check_degree_zero(r, &e.degree);
        if c.status != Status::Pass {
            bad.push(format!("{name}: {}", c.detail));
        }
    });
    result(3, "degree zero is Z[1/n]", bad, "every builtin")
}

pub fn top_degree() -> CriterionResult {
    let bad = over_builtins(|name, e, r, bad| {
        let d = e.dim();
        let u = r.unstable_homology[d].summary();
        let ok = if e.manifold.orientable { u.is_z() && r.stable_homology[d].summary().is_z() } else { u.is_trivial() };
        if !ok {
            bad.push(format!("{name}: H_{d}(G^u) = {u}"));
        }
    });
    result(4, "top degree is Z or 0", bad, "orientable builtins give Z, klein9 gives 0")
}

pub fn rational_ranks() -> CriterionResult {
    let bad = over_builtins(|name, e, r, bad| {
        let c = check_rational(r, &e.manifold);
        if c.status != Status::Pass {
            bad.push(format!("{name}: {}", c.detail));
        }
    });
    result(5, "limit ranks equal Betti numbers", bad, "every builtin, every degree")
}

pub fn torsion_at_special_degree() -> CriterionResult {
    let mut bad = Vec::new();
    for name in ["klein9", "o36x125"] {
        match report(name) {
            Ok((e, r)) => {
                let c = check_torsion(&r, &e);
                if c.status != Status::Pass {
                    bad.push(format!("{name}: {} ({})", c.detail, c.status));
                }
                if name == "o36x125" && r.unstable_homology[1].torsion.to_string() != "Z/4 (+) Z/4" {
                    bad.push(format!("o36x125: degree-1 torsion is {}", r.unstable_homology[1].torsion));
                }
            }
            Err(err) => bad.push(err),
        }
    }
    result(6, "torsion survives at the special degree", bad, "klein9 and o36x125; (Z/4)^2 in degree 1")
}

pub fn putnam_verdicts() -> CriterionResult {
    let bad = over_builtins(|name, e, r, bad| {
        let v = putnam_question(r);
        if e.manifold.orientable {
            if v.reflection != Verdict::Yes {
                bad.push(format!("{name}: {}", v.describe()));
            }
        } else if !(v.shifts.is_empty() && !v.undecided) {
            bad.push(format!("{name}: expected no shift, got {}", v.describe()));
        }
    });
    result(7, "Putnam question verdicts", bad, "klein9: no shift works; orientable builtins match H_(d-*)")
}

pub fn lefschetz() -> CriterionResult {
    let mut bad = Vec::new();
    let circle = builtin("circle2").expect("builtin");
    let a = circle.induced_homology[1].free_block();
    for k in 1..=10u32 {
        let want = BigInt::from(2).pow(k) - BigInt::one();
        let oracle = torus_fixed_points(&a, k);
        match periodic_points(&circle, k) {
            Ok(p) if Ok(p.value.clone()) == oracle && p.value == want => {}
            Ok(p) => bad.push(format!("circle2 k={k}: engine {} oracle {:?}", p.value, oracle)),
            Err(e) => bad.push(format!("circle2 k={k}: {e}")),
        }
    }
    let o = builtin("o36x125").expect("builtin");
    for k in 1..=4u32 {
        match periodic_points(&o, k) {
            Ok(p) if p.value == p.bound.0 || p.value == p.bound.1 => {}
            Ok(p) => bad.push(format!("o36x125 k={k}: {} not in {{{}, {}}}", p.value, p.bound.0, p.bound.1)),
            Err(e) => bad.push(format!("o36x125 k={k}: {e}")),
        }
    }
    result(8, "Lefschetz counts", bad, "circle2 k=1..10 equals 2^k-1; o36x125 k=1..4 within {125^k-1, 125^k+1}")
}

fn all_pieces(r: &InvariantReport) -> Vec<(&'static str, usize, &LimitGroup)> {
    let mut groups: Vec<(&'static str, &[LimitGroup])> =
        vec![("stable_homology", &r.stable_homology), ("unstable_homology", &r.unstable_homology), ("cech_X", &r.cech_x)];
    if let Some(k) = &r.stable_k {
        groups.push(("stable_K", k));
    }
    if let Some(k) = &r.unstable_k {
        groups.push(("unstable_K", k));
    }
    groups
        .into_iter()
        .flat_map(|(label, ls)| ls.iter().enumerate().map(move |(k, l)| (label, k, l)))
        .collect()
}

/// Replaces the prime set of the first free summand.
pub fn corrupt_primes(l: &LimitGroup, primes: &[i64]) -> Option<LimitGroup> {
    let mut out = l.clone();
    match &mut out.free_part {
        FreeLimit::CanonicalScalars { summands, .. } if !summands.is_empty() => {
            summands[0].primes = primes.iter().map(|&p| BigInt::from(p)).collect();
            Some(out)
        }
        _ => None,
    }
}

pub fn oracle_equivalence(depth: u32) -> CriterionResult {
    let mut pieces = 0;
    let mut bad = over_builtins(|name, e, r, bad| {
        let denominators = default_denominators(&e.degree);
        for (label, k, l) in all_pieces(r) {
            pieces += 1;
            let fp = fingerprint_limit(&l.presentation, depth, &denominators);
            if !check_canonical_against_fingerprint(l, &fp) {
                bad.push(format!("{name} {label}[{k}] = {l} disagrees with its fingerprint"));
            }
        }
    });
    let nine = StationarySystem::scalar(&FgAbGroup::free(1), 9);
    let fp = fingerprint_limit(&nine, depth, &default_denominators(&BigInt::from(9)));
    let wrong_primes = corrupt_primes(&stationary_limit(&nine), &[2]).expect("Z[1/3] has a free summand");
    if check_canonical_against_fingerprint(&wrong_primes, &fp) {
        bad.push("corrupted prime set {2} for (Z, x9) was accepted".into());
    }
    let z4 = StationarySystem::scalar(&FgAbGroup::cyclic(4), 1);
    let fp = fingerprint_limit(&z4, depth, &[BigInt::from(2)]);
    let mut wrong_torsion = stationary_limit(&z4);
    wrong_torsion.torsion = FgAbGroup::cyclic(2);
    if check_canonical_against_fingerprint(&wrong_torsion, &fp) {
        bad.push("corrupted torsion Z/2 for (Z/4, id) was accepted".into());
    }
    result(9, "limits agree with brute-force fingerprints", bad, format!("{pieces} graded pieces at depth {depth}; both corruptions rejected"))
}

fn random_group(rng: &mut ChaCha8Rng) -> FgAbGroup {
    let free = rng.gen_range(0..=3);
    let mut torsion: Vec<BigInt> = Vec::new();
    let mut t = BigInt::one();
    for _ in 0..rng.gen_range(0..=2) {
        t *= BigInt::from(rng.gen_range(2..=4));
        torsion.push(t.clone());
    }
    FgAbGroup::from_canonical(free, torsion).expect("chains built by multiplication divide")
}

pub fn property_suites() -> CriterionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut bad = Vec::new();
    for i in 0..200 {
        let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let entries: Vec<BigInt> = (0..r * c).map(|_| BigInt::from(rng.gen_range(-20..=20))).collect();
        let a = IntMatrix::from_vec(r, c, entries);
        if !verify_smith(&a, &smith_normal_form(&a)) {
            bad.push(format!("SNF instance {i}: {a}"));
        }
    }
    for i in 0..100 {
        let g = random_group(&mut rng);
        let diag: Vec<i64> = (0..g.generator_count()).map(|_| rng.gen_range(-6..=6)).collect();
        let alpha = GroupHom::new(g.clone(), g.clone(), IntMatrix::diagonal(&diag)).expect("diagonal maps are well defined");
        let sys = StationarySystem::new(alpha).expect("endomorphism");
        let once = stationary_limit(&sys).summary();
        let twice = stationary_limit(&sys.power(2)).summary();
        if once != twice {
            bad.push(format!("system {i} on {g} with {diag:?}: {once} vs {twice}"));
        }
    }
    result(10, "randomized property suites", bad, format!("200 SNF instances and 100 diagonal systems (seed {SEED:#x})"))
}

pub fn run_all(depth: u32) -> Vec<CriterionResult> {
    vec![
        klein_golden(),
        catalog_integrity(),
        degree_zero(),
        top_degree(),
        rational_ranks(),
        torsion_at_special_degree(),
        putnam_verdicts(),
        lefschetz(),
        oracle_equivalence(depth),
        property_suites(),
    ]
}

/// Theorem checks of every builtin report, as `(endo, check name, status, detail)`.
pub fn builtin_check_table() -> Vec<(String, String, Status, String)> {
    let mut out = Vec::new();
    for (name, e) in builtins() {
        match compute_report(&e) {
            Ok(r) => {
                let spinc = e.manifold.orientable && e.dim() <= 3;
                for c in crate::invariants::run_checks(&e, &r, spinc) {
                    out.push((name.to_string(), c.name, c.status, c.detail));
                }
            }
            Err(err) => out.push((name.to_string(), "compute".into(), Status::Fail, err.to_string())),
        }
    }
    out
}
