use fibcomp::counting::{
    binet_float, composition_count, fibonacci, first_binet_failure, is_triangular, load_table,
    min_part2_composition_count, odd_composition_count, odd_partition_count, partition_count,
    q_recurrence_residual, save_table, MemoTable, QShift, TableKind,
};
use fibcomp::enumerate::{count_by_enumeration, Class, CompositionClass, PartitionClass};
use fibcomp::genfun::odd_partitions_gf;
use fibcomp::BigCount;
use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

fn table_up_to(kind: TableKind, n: u64) -> MemoTable {
    let mut t = MemoTable::new(kind);
    t.extend_to(n);
    t
}

fn enumerated(n: u64, class: Class) -> BigCount {
    count_by_enumeration(n, class).unwrap()
}

#[test]
fn closed_forms_against_enumeration() {
    for n in 1..=16 {
        assert_eq!(composition_count(n).unwrap(), enumerated(n, Class::Compositions(CompositionClass::All)));
    }
    for n in 1..=25 {
        assert_eq!(odd_composition_count(n).unwrap(), enumerated(n, Class::Compositions(CompositionClass::OddParts)));
        assert_eq!(
            min_part2_composition_count(n + 1).unwrap(),
            enumerated(n + 1, Class::Compositions(CompositionClass::MinPart2))
        );
    }
    assert_eq!(odd_composition_count(25).unwrap(), BigCount::from(75025u64));
}

#[test]
fn recurrences_against_enumeration() {
    for n in 0..=40 {
        assert_eq!(partition_count(n), enumerated(n, Class::Partitions(PartitionClass::All)), "p({n})");
        let odd = enumerated(n, Class::Partitions(PartitionClass::OddParts));
        assert_eq!(odd_partition_count(n), odd, "q({n})");
        assert_eq!(enumerated(n, Class::Partitions(PartitionClass::DistinctParts)), odd, "distinct({n})");
    }
    assert_eq!(partition_count(4), BigCount::from(5u64));
    assert_eq!(partition_count(20), BigCount::from(627u64));
    assert_eq!(odd_partition_count(8), BigCount::from(6u64));
    assert_eq!(odd_partition_count(10), BigCount::from(10u64));
}

/// `q(0..=n)` from the product of `1 / (1 - x^j)` over odd `j`, independent
/// of the recurrence.
fn q_by_product(n: usize) -> Vec<BigUint> {
    odd_partitions_gf(n).coeffs().iter().map(|c| c.to_biguint().unwrap()).collect()
}

#[test]
fn corrected_recurrence_residual_up_to_2000() {
    let q = q_by_product(2000);
    let table = table_up_to(TableKind::OddPartitions, 2000);
    assert_eq!(table.values(), &q[..]);
    for n in 0..=2000 {
        let want = BigInt::from(is_triangular(n) as u8);
        assert_eq!(q_recurrence_residual(&q, n, QShift::Doubled), want, "n = {n}");
    }
}

#[test]
fn linear_shifts_break_at_five() {
    let q = q_by_product(40);
    let first_bad = (0..=40).find(|&n| q_recurrence_residual(&q, n, QShift::Linear) != BigInt::from(is_triangular(n) as u8));
    assert_eq!(first_bad, Some(5));
}

#[test]
fn binet_rounding_breaks_down() {
    for n in 0..=30 {
        assert!(binet_float(n).round_correct, "n = {n}");
    }
    let first = first_binet_failure(100).expect("some n <= 100 fails");
    assert!(first > 30);
    assert!(!binet_float(first).round_correct);
    let r = binet_float(10);
    assert!((r.float_estimate - 55.0).abs() < 1e-6);
    assert_eq!(binet_float(0).exact, BigCount::from(0u64));
}

#[test]
fn cache_file_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    for kind in [TableKind::Partitions, TableKind::OddPartitions, TableKind::Fibonacci] {
        let table = table_up_to(kind, 300);
        let path = dir.path().join(format!("{}.table", kind.tag()));
        save_table(&table, &path).unwrap();
        assert_eq!(load_table(&path).unwrap(), table);
    }
    let path = dir.path().join("p.table");
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("fibcomp-table v1 kind=p max=300\n1\n1\n2\n3\n5\n"));
    // Corrupt every value past the base cases; the sample must notice.
    let corrupted: String = text
        .lines()
        .enumerate()
        .map(|(i, l)| if i > 3 { format!("{}0\n", l) } else { format!("{l}\n") })
        .collect();
    std::fs::write(&path, corrupted).unwrap();
    assert!(load_table(&path).is_err());
}

proptest! {
    #[test]
    fn fibonacci_recurrence(n in 2u64..500) {
        let (a, b, c) = (fibonacci(n - 2), fibonacci(n - 1), fibonacci(n));
        prop_assert_eq!(&*a + &*b, (*c).clone());
    }

    #[test]
    fn memo_tables_grow_consistently(a in 0u64..400, b in 0u64..400) {
        let mut t = MemoTable::new(TableKind::Partitions);
        let first = t.get(a);
        let _ = t.get(b);
        prop_assert_eq!(t.get(a), first);
        prop_assert_eq!(t.get(a), partition_count(a));
    }
}
