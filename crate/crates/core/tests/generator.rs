use msp_core::instances::InstanceError;
use msp_core::{generate_instance, parse_instance, write_instance};

#[test]
fn class_shape() {
    for (m, k) in [(2, 10), (3, 100), (6, 100), (4, 1000)] {
        let inst = generate_instance(m, k, 9).unwrap();
        assert_eq!(inst.m(), m);
        assert_eq!(inst.n(), 10 * (m - 1));
        assert!(inst.coefficients().iter().all(|&a| a < k));
        for i in 0..m {
            assert_eq!(inst.rhs()[i], inst.row_sum(i) / 2);
        }
    }
}

#[test]
fn seeds_are_reproducible_and_distinct() {
    let a = write_instance(&generate_instance(4, 100, 3).unwrap());
    let b = write_instance(&generate_instance(4, 100, 3).unwrap());
    let c = write_instance(&generate_instance(4, 100, 4).unwrap());
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert_eq!(write_instance(&parse_instance(&a).unwrap()), a);
}

#[test]
fn coefficients_cover_the_range() {
    let inst = generate_instance(11, 10, 0).unwrap();
    let mut seen = [0usize; 10];
    for &a in inst.coefficients() {
        seen[a as usize] += 1;
    }
    // 1100 draws over 10 values: each value well represented.
    assert!(seen.iter().all(|&c| c > 60), "{seen:?}");
}

#[test]
fn rejects_degenerate_classes() {
    assert!(matches!(generate_instance(1, 100, 0), Err(InstanceError::Generator(_))));
    assert!(matches!(generate_instance(3, 1, 0), Err(InstanceError::Generator(_))));
}
