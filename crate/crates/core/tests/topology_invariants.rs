use proptest::prelude::*;

use weakest_link::topology::{generate_random, generate_ring, validate, ForwarderCounts, Scenario};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn random_scenarios_validate(
        nodes in 3usize..60,
        pairs in 0usize..40,
        min in 0usize..5,
        extra in 0usize..4,
        seed in any::<u64>(),
    ) {
        let counts = ForwarderCounts::Uniform { min, max: min + extra };
        match generate_random(nodes, pairs, &counts, seed) {
            Ok(s) => {
                prop_assert!(validate(&s).is_empty());
                prop_assert_eq!(s.routes.len(), pairs);
                for r in &s.routes {
                    prop_assert!((min..=min + extra).contains(&r.forwarder_count()));
                    prop_assert_ne!(r.source(), r.destination());
                }
            }
            Err(_) => prop_assert!(min + extra + 2 > nodes),
        }
    }

    #[test]
    fn rings_validate(nodes in 2usize..40, hops in 1usize..12) {
        match generate_ring(nodes, hops) {
            Ok(s) => {
                prop_assert!(validate(&s).is_empty());
                prop_assert_eq!(s.routes.len(), nodes);
                prop_assert!(s.routes.iter().all(|r| r.hop_count() == hops));
            }
            Err(_) => prop_assert!(nodes <= hops),
        }
    }

    #[test]
    fn scenario_text_round_trips(nodes in 8usize..30, pairs in 1usize..20, seed in any::<u64>()) {
        let s = generate_random(nodes, pairs, &ForwarderCounts::default(), seed).unwrap();
        prop_assert_eq!(Scenario::from_text(&s.to_text()).unwrap(), s);
    }
}

#[test]
fn forwarder_counts_average_near_midpoint() {
    let counts = ForwarderCounts::default();
    let s = generate_random(100, 10_000, &counts, 2024).unwrap();
    assert!(
        (s.mean_forwarders() - counts.mean()).abs() <= 0.1,
        "{}",
        s.mean_forwarders()
    );
}

#[test]
fn same_seed_same_scenario() {
    let counts = ForwarderCounts::default();
    let a = generate_random(100, 1000, &counts, 9).unwrap();
    let b = generate_random(100, 1000, &counts, 9).unwrap();
    let c = generate_random(100, 1000, &counts, 10).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}
