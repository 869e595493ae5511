use proptest::prelude::*;
use waist_core::content::greedy_cover;
use waist_core::filling::partition::{partition_boundary_identity, random_partition};
use waist_core::filling::{
    boundary, cone_to_facet, cylinder, fill, ledger_constant, random_relative_cycle, CoverLedger, Mod2Chain,
};
use waist_core::rng::stream;

fn dims() -> impl Strategy<Value = (usize, usize)> {
    prop::sample::select(vec![(1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn boundary_of_boundary_is_empty((n, k) in dims(), seed in any::<u64>()) {
        let z = random_relative_cycle(n, k, &mut stream(seed, 0)).unwrap();
        prop_assert!(boundary(&z).is_empty());
        for axis in 0..n {
            let c = cylinder(&z, axis);
            if let Ok(c) = c {
                prop_assert!(boundary(&boundary(&c)).is_empty());
            }
        }
    }

    #[test]
    fn cones_fill_cycles_away_from_the_far_facet((n, k) in dims(), seed in any::<u64>()) {
        let z = random_relative_cycle(n, k, &mut stream(seed, 0)).unwrap();
        for axis in 0..n {
            for side in [0u8, 1] {
                if let Ok(c) = cone_to_facet(&z, axis, side) {
                    prop_assert!(boundary(&boundary(&c)).is_empty());
                }
            }
        }
    }

    #[test]
    fn fillings_bound_and_obey_the_ledger((n, k) in dims(), seed in any::<u64>(), edge in 0.2f64..0.5) {
        let z = random_relative_cycle(n, k, &mut stream(seed, 0)).unwrap();
        let cover = greedy_cover(&z.to_mesh(), edge).unwrap();
        let led = CoverLedger::new(cover, k);
        let r = fill(&z, &led).unwrap();
        prop_assert_eq!(boundary(&r.filling), r.refined);
        prop_assert!(r.ledger.weight <= ledger_constant(k) * led.weight * (1.0 + 1e-12));
    }

    #[test]
    fn partition_cells_satisfy_the_boundary_identity(seed in any::<u64>(), parts in 2usize..5) {
        let p = random_partition(2, 3, parts, &mut stream(seed, 0));
        prop_assert!(partition_boundary_identity(&p).unwrap().pass);
    }
}

#[test]
fn the_ledger_does_not_see_the_cycle() {
    let mut rng = stream(4, 0);
    let a = random_relative_cycle(2, 1, &mut rng).unwrap();
    let b = random_relative_cycle(2, 1, &mut rng).unwrap();
    let mut both = a.clone();
    both.add(&b);
    let mesh = a.to_mesh().union(&b.to_mesh()).unwrap();
    let led = CoverLedger::new(greedy_cover(&mesh, 0.3).unwrap(), 1);
    let (ra, rb) = (fill(&a, &led).unwrap(), fill(&b, &led).unwrap());
    assert_eq!(ra.ledger.to_csv(), rb.ledger.to_csv());
}

#[test]
fn chains_parse_what_they_print() {
    let z = random_relative_cycle(3, 1, &mut stream(11, 0)).unwrap();
    assert_eq!(Mod2Chain::parse(&z.to_text()).unwrap(), z);
}
