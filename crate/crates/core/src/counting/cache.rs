//! Line-oriented persistence for [`MemoTable`].
//!
//! ```text
//! fibcomp-table v1 kind=<p|q|fib> max=<N>
//! <value at 0>
//! ...
//! <value at N>
//! ```
//!
//! A loaded file is trusted only after the defining recurrence holds at 16
//! sampled indices (plus the base cases).

use std::fs;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::{MemoTable, TableKind};
use crate::error::{Error, Result};

pub const TABLE_MAGIC: &str = "fibcomp-table v1";

const SAMPLE_SIZE: usize = 16;

pub fn write_table<W: Write>(table: &MemoTable, mut out: W) -> io::Result<()> {
    writeln!(out, "{TABLE_MAGIC} kind={} max={}", table.kind().tag(), table.max_index())?;
    for v in table.values() {
        writeln!(out, "{v}")?;
    }
    out.flush()
}

pub fn save_table(table: &MemoTable, path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
    write_table(table, BufWriter::new(file)).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))
}

fn parse_header(line: &str) -> Result<(TableKind, u64)> {
    let rest = line
        .strip_prefix(TABLE_MAGIC)
        .ok_or_else(|| Error::Cache(format!("bad header {line:?}")))?;
    let mut kind = None;
    let mut max = None;
    for field in rest.split_whitespace() {
        match field.split_once('=') {
            Some(("kind", tag)) => kind = TableKind::from_tag(tag),
            Some(("max", n)) => max = n.parse::<u64>().ok(),
            _ => return Err(Error::Cache(format!("unknown header field {field:?}"))),
        }
    }
    match (kind, max) {
        (Some(k), Some(m)) => Ok((k, m)),
        _ => Err(Error::Cache(format!("incomplete header {line:?}"))),
    }
}

pub fn read_table<R: BufRead>(input: R) -> Result<MemoTable> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Cache("empty file".into()))?
        .map_err(|e| Error::Cache(e.to_string()))?;
    let (kind, max) = parse_header(&header)?;

    let mut values = Vec::with_capacity(max as usize + 1);
    for (i, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::Cache(e.to_string()))?;
        let v = line
            .parse::<BigUint>()
            .map_err(|_| Error::Cache(format!("line {}: not a nonnegative integer", i + 2)))?;
        values.push(v);
    }
    if values.len() as u64 != max + 1 {
        return Err(Error::Cache(format!("expected {} values, found {}", max + 1, values.len())));
    }

    let table = MemoTable::from_values(kind, values);
    validate_sample(&table)?;
    Ok(table)
}

pub fn load_table(path: &Path) -> Result<MemoTable> {
    let file = fs::File::open(path).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
    read_table(BufReader::new(file))
}

/// Base cases always; then 16 indices drawn with a seed fixed by the header
/// so that validation is reproducible.
fn validate_sample(table: &MemoTable) -> Result<()> {
    let max = table.max_index();
    let mut indices: Vec<u64> = (0..=max.min(1)).collect();
    let mut rng = StdRng::seed_from_u64(0x5eed_0000 ^ max ^ ((table.kind() as u64) << 40));
    indices.extend((0..SAMPLE_SIZE).map(|_| rng.gen_range(0..=max)));
    for i in indices {
        let expected = table.recurrence_at(i);
        if table.values()[i as usize] != expected {
            return Err(Error::Cache(format!(
                "kind={} index {i}: stored {} but recurrence gives {expected}",
                table.kind().tag(),
                table.values()[i as usize]
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(kind: TableKind, n: u64) -> (String, MemoTable) {
        let mut t = MemoTable::new(kind);
        t.extend_to(n);
        let mut buf = Vec::new();
        write_table(&t, &mut buf).unwrap();
        (String::from_utf8(buf).unwrap(), t)
    }

    #[test]
    fn format_and_reload() {
        let (text, t) = roundtrip(TableKind::Partitions, 5);
        assert_eq!(text, "fibcomp-table v1 kind=p max=5\n1\n1\n2\n3\n5\n7\n");
        assert_eq!(read_table(text.as_bytes()).unwrap(), t);
        for kind in [TableKind::OddPartitions, TableKind::Fibonacci] {
            let (text, t) = roundtrip(kind, 200);
            assert_eq!(read_table(text.as_bytes()).unwrap(), t);
        }
    }

    #[test]
    fn rejects_corruption() {
        let (text, _) = roundtrip(TableKind::Fibonacci, 300);
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        // Corrupt every value past the base cases; any sampled index catches it.
        for line in lines.iter_mut().skip(3) {
            line.push('7');
        }
        let bad = lines.join("\n");
        assert!(matches!(read_table(bad.as_bytes()), Err(Error::Cache(_))));

        assert!(read_table("fibcomp-table v2 kind=p max=0\n1\n".as_bytes()).is_err());
        assert!(read_table("fibcomp-table v1 kind=x max=0\n1\n".as_bytes()).is_err());
        assert!(read_table("fibcomp-table v1 kind=p max=2\n1\n1\n".as_bytes()).is_err());
        assert!(read_table("fibcomp-table v1 kind=p max=1\n1\n-1\n".as_bytes()).is_err());
        assert!(read_table("fibcomp-table v1 kind=p max=0\n2\n".as_bytes()).is_err());
    }

    #[test]
    fn file_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("q.table");
        let mut t = MemoTable::new(TableKind::OddPartitions);
        t.extend_to(64);
        save_table(&t, &path).unwrap();
        assert_eq!(load_table(&path).unwrap(), t);
    }
}
