use std::collections::HashSet;

use fibcomp::enumerate::{count_by_enumeration, gen_compositions, gen_partitions, Class, CompositionClass, PartitionClass};
use fibcomp::BigCount;

fn strings<T: ToString>(it: impl Iterator<Item = T>) -> Vec<String> {
    it.map(|x| x.to_string()).collect()
}

#[test]
fn paper_lists() {
    let mut four = strings(gen_compositions(4, CompositionClass::All).unwrap());
    assert_eq!(four, ["1+1+1+1", "1+1+2", "1+2+1", "1+3", "2+1+1", "2+2", "3+1", "4"]);
    let listed = ["4", "3+1", "1+3", "2+2", "2+1+1", "1+2+1", "1+1+2", "1+1+1+1"];
    four.sort();
    let mut listed: Vec<String> = listed.iter().map(|s| s.to_string()).collect();
    listed.sort();
    assert_eq!(four, listed);

    assert_eq!(strings(gen_partitions(4, PartitionClass::All)), ["4", "3+1", "2+2", "2+1+1", "1+1+1+1"]);
    assert_eq!(
        strings(gen_partitions(8, PartitionClass::DistinctParts)),
        ["8", "7+1", "6+2", "5+3", "5+2+1", "4+3+1"]
    );
    assert_eq!(
        strings(gen_partitions(8, PartitionClass::OddParts)),
        ["7+1", "5+3", "5+1+1+1", "3+3+1+1", "3+1+1+1+1+1", "1+1+1+1+1+1+1+1"]
    );
    assert_eq!(
        strings(gen_compositions(5, CompositionClass::OddParts).unwrap()),
        ["1+1+1+1+1", "1+1+3", "1+3+1", "3+1+1", "5"]
    );
    assert_eq!(strings(gen_compositions(1, CompositionClass::All).unwrap()), ["1"]);
}

#[test]
fn edges() {
    assert!(gen_compositions(0, CompositionClass::All).is_err());
    assert_eq!(gen_compositions(1, CompositionClass::MinPart2).unwrap().count(), 0);
    assert_eq!(strings(gen_partitions(0, PartitionClass::All)), ["0"]);
    assert_eq!(gen_partitions(0, PartitionClass::DistinctExactly(0)).count(), 1);
    assert_eq!(gen_partitions(3, PartitionClass::DistinctExactly(0)).count(), 0);
    assert_eq!(count_by_enumeration(6, Class::Compositions(CompositionClass::DistinctParts)).unwrap(), BigCount::from(11u64));
    assert_eq!(count_by_enumeration(8, "partitions:odd-parts".parse().unwrap()).unwrap(), BigCount::from(6u64));
    assert!("compositions:nope".parse::<Class>().is_err());
    assert_eq!(
        "partitions:distinct-exactly-2".parse::<Class>().unwrap(),
        Class::Partitions(PartitionClass::DistinctExactly(2))
    );
}

#[test]
fn streams_are_sorted_members_without_duplicates() {
    for n in 1..=12u64 {
        for class in CompositionClass::ALL {
            let items: Vec<_> = gen_compositions(n, class).unwrap().collect();
            assert!(items.iter().all(|c| c.n() == n && class.contains(c)));
            assert!(items.windows(2).all(|w| w[0].parts() < w[1].parts()), "{class} {n}");
            let all = gen_compositions(n, CompositionClass::All).unwrap().filter(|c| class.contains(c)).count();
            assert_eq!(items.len(), all);
            assert_eq!(count_by_enumeration(n, Class::Compositions(class)).unwrap(), BigCount::from(items.len() as u64));
        }
    }
    for n in 0..=12u64 {
        for class in [PartitionClass::All, PartitionClass::OddParts, PartitionClass::DistinctParts, PartitionClass::DistinctExactly(3)] {
            let items: Vec<_> = gen_partitions(n, class).collect();
            let set: HashSet<_> = items.iter().map(|p| p.parts().to_vec()).collect();
            assert_eq!(set.len(), items.len());
            assert!(items.windows(2).all(|w| w[0].parts() > w[1].parts()), "{class} {n}");
            assert!(items.iter().all(|p| p.n() == n && class.contains(p)));
        }
    }
}
