use std::collections::HashMap;

use proptest::prelude::*;

use super::*;

fn overlaps_from_chars(group: &PointGroup, irrep: usize) -> HashMap<String, C64> {
    group
        .elements
        .iter()
        .enumerate()
        .map(|(k, e)| (e.id.clone(), group.character(irrep, k)))
        .collect()
}

#[test]
fn builtin_tables_are_valid() {
    for name in BUILTIN_GROUPS {
        let g = builtin_group(name).unwrap();
        let violations = validate_table(&g.table);
        assert!(violations.is_empty(), "{name}: {violations:?}");
        assert_eq!(g.table.order(), g.order());
    }
}

#[test]
fn builtin_shapes() {
    let d2h = builtin_group("D2h").unwrap();
    assert_eq!(d2h.order(), 8);
    assert_eq!(d2h.table.irreps.len(), 8);
    assert!(d2h.table.irreps.iter().all(|i| i.dim == 1));

    let d6h = builtin_group("D6h").unwrap();
    assert_eq!(d6h.order(), 24);
    assert_eq!(d6h.table.irreps.len(), 12);
    let e1g = d6h.table.irrep_index("E1g").unwrap();
    let e = d6h.table.class_index("E").unwrap();
    assert_eq!(d6h.table.chi[e1g][e], C64::new(2.0, 0.0));

    let d5d = builtin_group("d5d").unwrap();
    let e1g = d5d.table.irrep_index("E1g").unwrap();
    let c5 = d5d.table.class_index("C5").unwrap();
    assert!((d5d.table.chi[e1g][c5].re - 0.618_033_988_749_895).abs() < 1e-12);
}

#[test]
fn unknown_group_lists_available() {
    let err = builtin_group("C2v").unwrap_err().to_string();
    assert!(err.contains("D2h") && err.contains("D6h") && err.contains("D5d"));
}

#[test]
fn d5d_printed_e2u_entry_is_rejected() {
    let mut t = builtin_group("D5d").unwrap().table;
    let e2u = t.irrep_index("E2u").unwrap();
    let sd = t.class_index("sigma_d").unwrap();
    t.chi[e2u][sd] = C64::new(1.0, 0.0);
    let v = validate_table(&t);
    assert!(v
        .iter()
        .any(|x| matches!(x, Violation::RowOrthogonality { a, b, .. } if a == "E2u" || b == "E2u")));
    t.chi[e2u][sd] = C64::new(0.0, 0.0);
    assert!(validate_table(&t).is_empty());
}

/// Conjugacy classes recomputed from the Cartesian multiplication table must
/// coincide with the class labels attached to each element.
#[test]
fn classes_match_conjugation() {
    for name in BUILTIN_GROUPS {
        let g = builtin_group(name).unwrap();
        let mult = g.multiplication_table().expect("closed under products");
        let n = g.order();
        let inv: Vec<usize> = (0..n)
            .map(|a| (0..n).find(|&b| mult[a][b] == g.identity()).unwrap())
            .collect();
        for a in 0..n {
            for h in 0..n {
                let c = mult[mult[h][a]][inv[h]];
                assert_eq!(
                    g.elements[a].class_label, g.elements[c].class_label,
                    "{name}: {} and {} are conjugate",
                    g.elements[a].id, g.elements[c].id
                );
            }
        }
    }
}

/// Restricting D6h characters to the D2h subgroup must reproduce the
/// correlation table; this pins the in-plane axis and mirror class assignment.
#[test]
fn d6h_restriction_matches_descent_map() {
    let d6h = builtin_group("D6h").unwrap();
    let d2h = builtin_group("D2h").unwrap();
    let map = d6h_to_d2h();
    for (src, targets) in &map.map {
        let gi = d6h.table.irrep_index(src).unwrap();
        for (k, el) in d2h.elements.iter().enumerate() {
            let j = d6h.find_cartesian(&el.cartesian.unwrap()).unwrap();
            let restricted = d6h.character(gi, j);
            let summed: C64 = targets
                .iter()
                .map(|t| d2h.character(d2h.table.irrep_index(t).unwrap(), k))
                .sum();
            assert!(
                (restricted - summed).norm() < 1e-12,
                "{src} at {}: {restricted} vs {summed}",
                el.id
            );
        }
    }
}

/// The Cartesian (x, y, z) representation must reduce to non-negative integers.
#[test]
fn vector_representation_reduces_integrally() {
    for name in BUILTIN_GROUPS {
        let g = builtin_group(name).unwrap();
        let overlaps: Vec<C64> = g
            .elements
            .iter()
            .map(|e| C64::new(e.cartesian.unwrap().trace(), 0.0))
            .collect();
        let traces = class_traces_from_ordered(&g, &overlaps);
        let red = reduce_representation(&g.table, &traces).unwrap();
        let mut dim = 0.0;
        for e in &red.entries {
            assert!((e.occurrences - e.occurrences.round()).abs() < 1e-12);
            assert!(e.occurrences > -1e-12);
            dim += e.total;
        }
        assert!((dim - 3.0).abs() < 1e-12);
    }
}

#[test]
fn totally_symmetric_overlaps() {
    let g = builtin_group("D2h").unwrap();
    let ov: HashMap<String, C64> = g
        .elements
        .iter()
        .map(|e| (e.id.clone(), C64::new(1.0, 0.0)))
        .collect();
    let r = weights_from_overlaps(&g, &ov).unwrap();
    assert_eq!(r.weight("Ag"), Some(1.0));
    for w in r.weights.iter().filter(|w| w.irrep != "Ag") {
        assert_eq!(w.weight, 0.0);
    }
}

#[test]
fn one_dim_irrep_character_overlaps() {
    let g = builtin_group("D6h").unwrap();
    let b2u = g.table.irrep_index("B2u").unwrap();
    let r = weights_from_overlaps(&g, &overlaps_from_chars(&g, b2u)).unwrap();
    for w in &r.weights {
        let expect = if w.irrep == "B2u" { 1.0 } else { 0.0 };
        assert!((w.weight - expect).abs() < 1e-14, "{}: {}", w.irrep, w.weight);
    }
}

#[test]
fn missing_overlap_is_named() {
    let g = builtin_group("D2h").unwrap();
    let mut ov: HashMap<String, C64> = g
        .elements
        .iter()
        .map(|e| (e.id.clone(), C64::new(1.0, 0.0)))
        .collect();
    ov.remove("sigma_v");
    match weights_from_overlaps(&g, &ov) {
        Err(Error::MissingElement(id)) => assert_eq!(id, "sigma_v"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn regular_representation_counts_dimensions() {
    for name in BUILTIN_GROUPS {
        let g = builtin_group(name).unwrap();
        let traces: HashMap<String, C64> = g
            .table
            .classes
            .iter()
            .map(|c| {
                let v = if c.label == "E" { g.order() as f64 } else { 0.0 };
                (c.label.clone(), C64::new(v, 0.0))
            })
            .collect();
        let red = reduce_representation(&g.table, &traces).unwrap();
        for e in &red.entries {
            assert!((e.occurrences - e.dim as f64).abs() < 1e-12);
        }
    }
}

#[test]
fn ferrocene_style_split_is_recovered() {
    let g = builtin_group("D5d").unwrap();
    let t = &g.table;
    let e1g = t.irrep_index("E1g").unwrap();
    let e2g = t.irrep_index("E2g").unwrap();
    let traces: HashMap<String, C64> = t
        .classes
        .iter()
        .enumerate()
        .map(|(c, cl)| (cl.label.clone(), t.chi[e1g][c] * 2.0 + t.chi[e2g][c] * 2.0))
        .collect();
    let red = reduce_representation(t, &traces).unwrap();
    for e in &red.entries {
        let expect = match e.irrep.as_str() {
            "E1g" | "E2g" => 4.0,
            _ => 0.0,
        };
        assert!((e.total - expect).abs() < 1e-12, "{}: {}", e.irrep, e.total);
    }
}

#[test]
fn missing_class_trace() {
    let g = builtin_group("D2h").unwrap();
    let traces: HashMap<String, C64> = HashMap::new();
    assert!(matches!(
        reduce_representation(&g.table, &traces),
        Err(Error::MissingClass(_))
    ));
}

#[test]
fn descent_examples() {
    let d6h = builtin_group("D6h").unwrap();
    let d2h = builtin_group("D2h").unwrap();
    let map = d6h_to_d2h();
    let out = descend(&d6h.table, &d2h.table, &map, &[("A1g".into(), 1.0)]).unwrap();
    assert_eq!(out, vec![("Ag".to_string(), 1.0)]);
    let out = descend(&d6h.table, &d2h.table, &map, &[("E1u".into(), 1.0)]).unwrap();
    assert_eq!(
        out,
        vec![("B2u".to_string(), 0.5), ("B3u".to_string(), 0.5)]
    );
    assert!(descend(&d6h.table, &d2h.table, &map, &[]).unwrap().is_empty());

    let mut partial = map.clone();
    partial.map.retain(|(k, _)| k != "E2g");
    assert!(matches!(
        descend(&d6h.table, &d2h.table, &partial, &[("A1g".into(), 1.0)]),
        Err(Error::UnmappedIrrep(s)) if s == "E2g"
    ));
}

fn arb_overlaps(n: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), n)
}

proptest! {
    #[test]
    fn sum_rule_holds_for_any_non_identity_overlaps(
        gi in 0usize..3,
        raw in arb_overlaps(24),
    ) {
        let g = builtin_group(BUILTIN_GROUPS[gi]).unwrap();
        let e = g.identity();
        let ov: Vec<C64> = (0..g.order())
            .map(|k| if k == e { C64::new(1.0, 0.0) } else { C64::new(raw[k].0, raw[k].1) })
            .collect();
        let r = weights_from_ordered(&g, &ov, "test");
        prop_assert!((r.sum_of_weights - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weights_are_linear(
        a in arb_overlaps(24),
        b in arb_overlaps(24),
        s in -2.0f64..2.0,
    ) {
        let g = builtin_group("D6h").unwrap();
        let va: Vec<C64> = a.iter().map(|&(x, y)| C64::new(x, y)).collect();
        let vb: Vec<C64> = b.iter().map(|&(x, y)| C64::new(x, y)).collect();
        let mix: Vec<C64> = va.iter().zip(&vb).map(|(x, y)| x * s + y).collect();
        let ra = weights_from_ordered(&g, &va, "t");
        let rb = weights_from_ordered(&g, &vb, "t");
        let rm = weights_from_ordered(&g, &mix, "t");
        for k in 0..ra.weights.len() {
            let lin = s * ra.weights[k].weight + rb.weights[k].weight;
            prop_assert!((rm.weights[k].weight - lin).abs() < 1e-10);
        }
    }

    /// With class-constant overlaps, reducing the class traces and evaluating
    /// weights give the same numbers.
    #[test]
    fn reduction_of_one_config_matches_weights(raw in arb_overlaps(24)) {
        let g = builtin_group("D6h").unwrap();
        let ov: Vec<C64> = (0..g.order()).map(|k| C64::new(raw[k].0, raw[k].1)).collect();
        let traces = class_traces_from_ordered(&g, &ov);
        let red = reduce_representation(&g.table, &traces).unwrap();
        let w = weights_from_ordered(&g, &ov, "t");
        for (e, w) in red.entries.iter().zip(&w.weights) {
            prop_assert!((e.total - w.weight).abs() < 1e-12);
        }
    }
}
