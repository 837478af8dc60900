use flatsol::abelian::FgAbGroup;
use flatsol::manifolds::{catalog, lookup, validate};

/// Flat 3-manifold rows as usually tabulated: name, H_1, H_2, H_3, holonomy order.
const TABLE: &[(&str, &str, &str, &str, u64)] = &[
    ("O3_1", "Z^3", "Z^3", "Z", 1),
    ("O3_2", "Z (+) Z/2 (+) Z/2", "Z", "Z", 2),
    ("O3_3", "Z (+) Z/3", "Z", "Z", 3),
    ("O3_4", "Z (+) Z/2", "Z", "Z", 4),
    ("O3_5", "Z", "Z", "Z", 6),
    ("O3_6", "Z/4 (+) Z/4", "0", "Z", 4),
    ("N3_1", "Z^2 (+) Z/2", "Z^2 (+) Z/2", "0", 2),
    ("N3_2", "Z^2", "Z^2 (+) Z/2", "0", 2),
    ("N3_3", "Z (+) Z/2 (+) Z/2", "Z (+) Z/2", "0", 4),
    ("N3_4", "Z (+) Z/4", "Z (+) Z/2", "0", 4),
];

fn g(s: &str) -> FgAbGroup {
    s.parse().unwrap()
}

#[test]
fn orientable_rows_match_the_table() {
    for &(name, h1, h2, h3, f) in TABLE.iter().filter(|r| r.0.starts_with('O')) {
        let m = lookup(name).unwrap();
        assert_eq!(m.homology, vec![g("Z"), g(h1), g(h2), g(h3)], "{name}");
        assert_eq!(m.holonomy_order, f, "{name}");
        assert!(m.orientable);
    }
}

#[test]
fn nonorientable_rows_correct_the_second_betti_number() {
    for &(name, h1, h2, h3, f) in TABLE.iter().filter(|r| r.0.starts_with('N')) {
        let m = lookup(name).unwrap();
        let tabulated = g(h2);
        // Tabulated H_2 gives Euler characteristic 1; the catalog drops one free summand.
        let chi: i64 = 1 - g(h1).free_rank() as i64 + tabulated.free_rank() as i64 - g(h3).free_rank() as i64;
        assert_eq!(chi, 1, "{name}");
        assert_eq!(m.homology[1], g(h1), "{name}");
        assert_eq!(m.homology[2].torsion(), tabulated.torsion(), "{name}");
        assert_eq!(m.homology[2].free_rank() + 1, tabulated.free_rank(), "{name}");
        assert_eq!(m.homology[3], g(h3), "{name}");
        assert_eq!(m.holonomy_order, f, "{name}");
        assert!(!m.orientable);
    }
}

#[test]
fn every_three_dimensional_row_is_valid() {
    let rows: Vec<_> = catalog().into_iter().filter(|m| m.dim == 3 && m.name != "T3").collect();
    assert_eq!(rows.len(), 10);
    for m in rows {
        assert!(validate(&m).is_empty(), "{}: {:?}", m.name, validate(&m));
        assert_eq!(m.euler_characteristic(), 0, "{}", m.name);
        // First Betti number from H_1, and H^1 free of torsion.
        assert_eq!(m.cohomology().unwrap()[1], m.homology[1].free_part());
    }
}
