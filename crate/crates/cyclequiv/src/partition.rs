//! Enumerate every coset multiset (every cyclic code of length n) in a fixed
//! mixed-radix order and keep one representative per affine-equivalence
//! class: each candidate is compared against the representatives already
//! found, in first-seen order, and discarded on the first witness.

use std::io::{BufRead, Write};
use std::sync::Arc;

use crate::cosets::{CosetMultiset, CosetTable};
use crate::equivalence::{affine_equivalent, Mode};
use crate::error::{Error, Result};
use crate::field::Field;

/// Default cap on the number of multisets a partition call will enumerate.
pub const DEFAULT_PARTITION_BUDGET: u128 = 1 << 22;

#[derive(Debug)]
pub struct PartitionRecord {
    pub field: Arc<Field>,
    pub n: u64,
    pub mode: Mode,
    pub table: Arc<CosetTable>,
    pub representatives: Vec<CosetMultiset>,
    pub class_sizes: Vec<u64>,
    pub total_enumerated: u64,
    /// pairwise equivalence tests performed during the build
    pub comparisons: u64,
}

/// (multiplicity cap + 1)^(#cosets) − 1: every nonempty multiset.
pub fn total_multisets(table: &CosetTable) -> u128 {
    let base = table.split().multiplicity as u128 + 1;
    base.pow(table.coset_count() as u32) - 1
}

/// The idx-th multiset under mixed-radix encoding: digit j (base cap+1,
/// least significant digit = first coset in table order) is the
/// multiplicity of coset j. Index 0 — the empty multiset, generator 1 —
/// is excluded.
pub fn index_to_multiset(idx: u128, table: &Arc<CosetTable>) -> Result<CosetMultiset> {
    let max = total_multisets(table);
    if idx == 0 || idx > max {
        return Err(Error::IndexOutOfRange { idx, max });
    }
    let base = table.split().multiplicity as u128 + 1;
    let mut mults = Vec::with_capacity(table.coset_count());
    let mut v = idx;
    for _ in 0..table.coset_count() {
        mults.push((v % base) as u32);
        v /= base;
    }
    CosetMultiset::new(table.clone(), mults)
}

pub fn partition_cyclic(
    field: &Arc<Field>,
    n: u64,
    mode: Mode,
    budget: u128,
) -> Result<PartitionRecord> {
    let table = CosetTable::new(field, n)?;
    let total = total_multisets(&table);
    if total > budget {
        return Err(Error::EnumerationTooLarge {
            size: total,
            budget,
        });
    }
    let mut representatives: Vec<CosetMultiset> = Vec::new();
    let mut rep_sizes: Vec<u64> = Vec::new(); // total multiset size, for fast filtering
    let mut class_sizes: Vec<u64> = Vec::new();
    let mut comparisons: u64 = 0;
    for idx in 1..=total {
        let candidate = index_to_multiset(idx, &table)?;
        let size = candidate.total_size();
        let mut assigned = false;
        for (i, rep) in representatives.iter().enumerate() {
            if rep_sizes[i] != size {
                continue;
            }
            comparisons += 1;
            if affine_equivalent(rep, &candidate, mode)?.is_some() {
                class_sizes[i] += 1;
                assigned = true;
                break;
            }
        }
        if !assigned {
            representatives.push(candidate);
            rep_sizes.push(size);
            class_sizes.push(1);
        }
    }
    Ok(PartitionRecord {
        field: field.clone(),
        n,
        mode,
        table,
        representatives,
        class_sizes,
        total_enumerated: total as u64,
        comparisons,
    })
}

impl PartitionRecord {
    /// One representative per line: multiset grammar, class size, generator
    /// polynomial. The versioned header carries field, length, mode, totals.
    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        writeln!(
            w,
            "cyclequiv-partition v1 q={} n={} mode={} total={} classes={}",
            self.field.order(),
            self.n,
            self.mode.token(),
            self.total_enumerated,
            self.representatives.len()
        )?;
        for (rep, size) in self.representatives.iter().zip(&self.class_sizes) {
            writeln!(
                w,
                "{}\t{}\t{}",
                crate::text::format_multiset(rep),
                size,
                crate::text::format_poly(&rep.to_poly()?)
            )?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("the record format is ASCII")
    }

    /// Re-read a record written by [`PartitionRecord::write_to`].
    pub fn read_from(r: impl BufRead) -> Result<PartitionRecord> {
        let bad = |detail: String| Error::Invalid {
            what: "partition record",
            detail,
        };
        let mut lines = r.lines();
        let header = lines.next().ok_or_else(|| bad("empty file".into()))??;
        let mut q = None;
        let mut n = None;
        let mut mode = None;
        let mut total = None;
        let mut head_tokens = header.split_whitespace();
        if head_tokens.next() != Some("cyclequiv-partition") || head_tokens.next() != Some("v1") {
            return Err(bad(format!("unrecognized header {header:?}")));
        }
        for tok in head_tokens {
            if let Some(v) = tok.strip_prefix("q=") {
                q = v.parse::<u64>().ok();
            } else if let Some(v) = tok.strip_prefix("n=") {
                n = v.parse::<u64>().ok();
            } else if let Some(v) = tok.strip_prefix("mode=") {
                mode = Mode::parse(v).ok();
            } else if let Some(v) = tok.strip_prefix("total=") {
                total = v.parse::<u64>().ok();
            }
        }
        let q = q.ok_or_else(|| bad("missing q=".into()))?;
        let n = n.ok_or_else(|| bad("missing n=".into()))?;
        let mode = mode.ok_or_else(|| bad("missing mode=".into()))?;
        let total = total.ok_or_else(|| bad("missing total=".into()))?;
        let field = crate::search::field_from_order(q)?;
        let table = CosetTable::new(&field, n)?;
        let mut representatives = Vec::new();
        let mut class_sizes = Vec::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut cols = line.split('\t');
            let ms = cols
                .next()
                .ok_or_else(|| bad(format!("bad row {line:?}")))?;
            let size = cols
                .next()
                .and_then(|s| s.parse::<u64>().ok())
                .ok_or_else(|| bad(format!("bad class size in {line:?}")))?;
            representatives.push(crate::text::parse_multiset(&table, ms)?);
            class_sizes.push(size);
        }
        Ok(PartitionRecord {
            field,
            n,
            mode,
            table,
            representatives,
            class_sizes,
            total_enumerated: total,
            comparisons: 0,
        })
    }
}
