use binform_core::invariants::{expand_raw, expand_symbolic, system_for_degree};

fn check_degree(d: u32) {
    let sys = system_for_degree(d).unwrap();
    for i in 0..sys.invariants.len() {
        let p = expand_symbolic(d, i).unwrap_or_else(|e| panic!("degree {d} xi_{i}: {e}"));
        assert!(!p.is_zero(), "degree {d} xi_{i} vanishes");
    }
}

#[test]
fn low_degree_expansions_match_frozen_scalings() {
    for d in 2..=6 {
        check_degree(d);
    }
}

#[test]
fn octavic_expansions_match_frozen_scalings() {
    check_degree(8);
}

#[test]
#[ignore = "slow in debug builds"]
fn septic_expansions_match_frozen_scalings() {
    check_degree(7);
}

#[test]
#[ignore = "minutes of symbolic expansion"]
fn high_degree_raw_scalings_match() {
    for d in [9, 10] {
        let sys = system_for_degree(d).unwrap();
        for (i, inv) in sys.invariants.iter().enumerate() {
            let (_, s) = expand_raw(d, i).unwrap();
            assert_eq!(inv.scaling.as_ref(), Some(&s), "degree {d} xi_{i}");
        }
    }
}
