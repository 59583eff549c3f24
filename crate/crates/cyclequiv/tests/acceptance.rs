//! Acceptance suite: one test per criterion, each printing a pass line.
//! Run with `cargo test -p cyclequiv --test acceptance -- --nocapture`.

use std::sync::Arc;
use std::time::{Duration, Instant};

use cyclequiv::codes::{
    upper_bound_search, weight_enumerator_auto, BklcFlag, CodeRecord, Construction,
    CyclicCodeSpec, DistanceBudget, DistanceCert, DistanceClaim, GeneratorMatrix, RowSpace,
};
use cyclequiv::cosets::{CosetMultiset, CosetTable};
use cyclequiv::equivalence::{
    affine_equivalent, affine_equivalent_counted, brute_force_equivalent, monomial_maps_into,
    verdict, AffineWitness, Mode, MonomialOutcome, VerdictStatus,
};
use cyclequiv::field::Field;
use cyclequiv::manifest::{verify_manifest, CertLevel, Manifest};
use cyclequiv::partition::{index_to_multiset, partition_cyclic, total_multisets};
use cyclequiv::poly::Poly;
use cyclequiv::search::{
    asr_search, cyclic_sweep, derive_neighbors, records_to_text, BklcTable, ForcedTrial,
    SearchConfig,
};
use cyclequiv::text;

fn gf(q: u64) -> Arc<Field> {
    cyclequiv::search::field_from_order(q).unwrap()
}

fn shipped_manifest() -> Manifest {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/paper_codes.manifest");
    Manifest::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_within(elapsed: Duration, limit: Duration, what: &str) {
    assert!(
        elapsed <= limit,
        "{what} took {elapsed:?}, over the {limit:?} limit"
    );
}

/// Criterion 1: the length-14 binary worked example — cosets, the two
/// squared-coset polynomials, and the witness z ↦ 5z. Exact, under 1 s.
#[test]
fn criterion_01_worked_example_length_14() {
    let start = Instant::now();
    let f2 = gf(2);
    let table = CosetTable::new(&f2, 14).unwrap();
    assert_eq!(table.cosets(), &[vec![0], vec![1, 2, 4], vec![3, 5, 6]]);
    let ms1 = CosetMultiset::new(table.clone(), vec![0, 2, 0]).unwrap();
    let ms2 = CosetMultiset::new(table.clone(), vec![0, 0, 2]).unwrap();
    assert_eq!(
        ms1.to_poly().unwrap(),
        Poly::from_indices(&f2, &[1, 0, 0, 0, 1, 0, 1]),
        "P({{1,2,4}}^2) must be x^6+x^4+1"
    );
    assert_eq!(
        ms2.to_poly().unwrap(),
        Poly::from_indices(&f2, &[1, 0, 1, 0, 0, 0, 1]),
        "P({{3,5,6}}^2) must be x^6+x^2+1"
    );
    for mode in [Mode::Strict, Mode::PaperLiteral] {
        let w = affine_equivalent(&ms1, &ms2, mode).unwrap().unwrap();
        assert_eq!(w, AffineWitness { e: 5, b: 0 });
        let mapped: Vec<u64> = [1u64, 2, 4].iter().map(|&z| w.apply(z, 7)).collect();
        let mut sorted = mapped.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![3, 5, 6], "z -> 5z must send {{1,2,4}} to {{3,5,6}}");
    }
    assert_within(start.elapsed(), Duration::from_secs(1), "criterion 1");
    println!("criterion 1 (length-14 worked example): pass");
}

/// Criterion 2: the ternary length-8 counterexample — no affine witness in
/// either mode, yet the brute-force monomial oracle finds equivalence and
/// the published 8×8 monomial matrix maps one code into the other.
#[test]
fn criterion_02_gf3_length8_counterexample() {
    let start = Instant::now();
    let f3 = gf(3);
    let table = CosetTable::new(&f3, 8).unwrap();
    assert_eq!(
        table.cosets(),
        &[vec![0], vec![1, 3], vec![2, 6], vec![4], vec![5, 7]]
    );
    // {0,1,3,4} and {1,2,3,6}
    let a = CosetMultiset::new(table.clone(), vec![1, 1, 0, 1, 0]).unwrap();
    let b = CosetMultiset::new(table.clone(), vec![0, 1, 1, 0, 0]).unwrap();
    for mode in [Mode::Strict, Mode::PaperLiteral] {
        assert!(
            affine_equivalent(&a, &b, mode).unwrap().is_none(),
            "no affine witness may exist in {mode:?}"
        );
    }
    assert_eq!(
        verdict(&a, &b, Mode::Strict).unwrap().status,
        VerdictStatus::Unknown
    );
    let ca = GeneratorMatrix::circulant(&a.to_poly().unwrap(), 8).unwrap();
    let cb = GeneratorMatrix::circulant(&b.to_poly().unwrap(), 8).unwrap();
    // the two codes are genuinely equivalent: identical weight enumerators
    assert_eq!(
        weight_enumerator_auto(&ca, 1 << 10).unwrap(),
        weight_enumerator_auto(&cb, 1 << 10).unwrap()
    );
    // the full monomial space is 8! * 2^8 candidates
    let outcome = brute_force_equivalent(&ca, &cb, 8 * 7 * 6 * 5 * 4 * 3 * 2 * 256).unwrap();
    assert_eq!(outcome, MonomialOutcome::Equivalent);
    // the published matrix: rows of the identity-with-scalings pattern
    let map: Vec<(usize, u8)> = vec![
        (0, 1),
        (1, 1),
        (6, 2),
        (7, 2),
        (4, 1),
        (5, 1),
        (2, 2),
        (3, 2),
    ];
    let forward = monomial_maps_into(&ca, &cb, &map);
    let backward = monomial_maps_into(&cb, &ca, &map);
    assert!(
        forward || backward,
        "the published monomial matrix must map one code into the other"
    );
    assert_within(start.elapsed(), Duration::from_secs(120), "criterion 2");
    println!(
        "criterion 2 (length-8 ternary counterexample): pass (matrix maps a->b: {forward}, b->a: {backward})"
    );
}

/// Criterion 3: the four new QC codes reproduce with exact distance
/// certificates via forced trials through the search pipeline, each within
/// ten minutes.
#[test]
fn criterion_03_new_qc_codes_exact() {
    let f3 = gf(3);
    let cases = [
        (20usize, "[21]", "[2200021200110200111]", "[0012002212221102101]", 60usize, 19usize, 22u32),
        (24, "[101]", "[1122220222021210022212]", "[1220021122022111]", 72, 22, 26),
        (24, "[1221]", "[002100021111200121202]", "[200112121120102020202]", 72, 21, 27),
        (24, "[1120221]", "[010110000212001001]", "[1210221200221001]", 72, 18, 29),
    ];
    let bklc = BklcTable::parse("3 60 19 21\n3 72 22 25\n3 72 21 26\n3 72 18 28\n").unwrap();
    for (m, g, fa, fb, n, k, d) in cases {
        let start = Instant::now();
        let mut cfg = SearchConfig::new(f3.clone(), m, 3);
        cfg.forced.push(ForcedTrial {
            g: text::parse_poly(&f3, g).unwrap(),
            fs: vec![
                text::parse_poly(&f3, fa).unwrap(),
                text::parse_poly(&f3, fb).unwrap(),
            ],
        });
        let records = asr_search(&cfg, &bklc).unwrap();
        assert_eq!(records.len(), 1);
        let rec = &records[0];
        assert_eq!((rec.n, rec.k), (n, k), "g={g}");
        assert_eq!(rec.claim.cert, DistanceCert::Exact, "g={g}");
        assert_eq!(rec.claim.value, d, "g={g}");
        // strictly better than the synthetic previous-best table
        assert_eq!(rec.bklc, BklcFlag::New);
        // the stored witness is a codeword of the claimed weight
        let matrix = rec.construction.build(&f3, rec.n).unwrap();
        assert!(RowSpace::new(&matrix).contains(&rec.witness));
        assert_eq!(
            rec.witness.iter().filter(|&&x| x != 0).count() as u32,
            d
        );
        let elapsed = start.elapsed();
        assert_within(elapsed, Duration::from_secs(600), "criterion 3 per-code");
        println!("criterion 3 [{n},{k},{d}]: pass in {elapsed:?}");
    }
    println!("criterion 3 (new QC codes, exact): pass");
}

/// Criterion 4: the three record-breaking cyclic codes — generator divides
/// x^n − 1, dimension is exact, and the upper-bound engine exhibits a
/// codeword of the claimed weight.
#[test]
fn criterion_04_new_cyclic_codes_upper() {
    let cases = [
        (3u64, 146usize, 122usize, 9u32, "[1212210010210120100122121]"),
        (3, 146, 121, 9, "[22120110211112222102201211]"),
        (5, 78, 63, 8, "[4412024313010131]"),
    ];
    for (q, n, k, d, gs) in cases {
        let field = gf(q);
        let g = text::parse_poly(&field, gs).unwrap();
        assert!(g.divides(&Poly::x_pow_minus_one(&field, n)).unwrap());
        let spec = CyclicCodeSpec::new(&field, n, &g).unwrap();
        assert_eq!(spec.dimension(), k);
        let matrix = spec.matrix().unwrap();
        assert_eq!(matrix.rank(), k);
        let budget = DistanceBudget::default();
        let (ub, witness) = upper_bound_search(&matrix, &budget, Some(d)).unwrap();
        assert_eq!(ub, d, "expected a weight-{d} witness for [{n},{k}]_{q}");
        assert!(RowSpace::new(&matrix).contains(&witness));
        assert_eq!(witness.iter().filter(|&&x| x != 0).count() as u32, d);
        println!("criterion 4 [{n},{k},{d}]_{q}: pass (d <= {d} witnessed)");
    }
    println!("criterion 4 (new cyclic codes, upper-bound certificates): pass");
}

/// Criterion 5: derived codes. derive_neighbors reproduces [59,18,22] and
/// [71,21,26] from their parents with exact certificates; every remaining
/// derived-list entry is attempted and reported through the manifest.
#[test]
fn criterion_05_derived_codes() {
    let bklc = BklcTable::empty();
    let budget = DistanceBudget::default();

    let parent_60 = CodeRecord {
        q: 3,
        n: 60,
        k: 19,
        claim: DistanceClaim {
            value: 22,
            cert: DistanceCert::Exact,
        },
        witness: Vec::new(),
        construction: Construction::Qc {
            m: 20,
            ell: 3,
            g: "[21]".into(),
            fs: vec!["[2200021200110200111]".into(), "[0012002212221102101]".into()],
        },
        seed: None,
        bklc: BklcFlag::Unknown,
    };
    let neighbors = derive_neighbors(&parent_60, &bklc, &budget).unwrap();
    assert!(
        neighbors.iter().any(|r| (r.n, r.k, r.claim.value) == (59, 18, 22)
            && r.claim.cert == DistanceCert::Exact),
        "[59,18,22] must appear among the derived neighbors"
    );
    println!("criterion 5: [59,18,22] reproduced from [60,19,22] ({} neighbors)", neighbors.len());

    let parent_72 = CodeRecord {
        q: 3,
        n: 72,
        k: 22,
        claim: DistanceClaim {
            value: 26,
            cert: DistanceCert::Exact,
        },
        witness: Vec::new(),
        construction: Construction::Qc {
            m: 24,
            ell: 3,
            g: "[101]".into(),
            fs: vec![
                "[1122220222021210022212]".into(),
                "[1220021122022111]".into(),
            ],
        },
        seed: None,
        bklc: BklcFlag::Unknown,
    };
    let neighbors = derive_neighbors(&parent_72, &bklc, &budget).unwrap();
    assert!(
        neighbors.iter().any(|r| (r.n, r.k, r.claim.value) == (71, 21, 26)
            && r.claim.cert == DistanceCert::Exact),
        "[71,21,26] must appear among the derived neighbors"
    );
    println!("criterion 5: [71,21,26] reproduced from [72,22,26] ({} neighbors)", neighbors.len());

    // the full derived list, attempted and individually reported
    let manifest = shipped_manifest();
    let derived_labels = [
        "d59-18-22",
        "d70-19-27",
        "d71-20-27",
        "d71-21-26",
        "d73-21-27",
        "d73-22-27",
        "d74-22-27",
    ];
    let keep: Vec<&str> = vec![
        "qc60-19-22",
        "qc72-22-26",
        "qc72-21-27",
        "qc72-18-29",
    ];
    let subset = Manifest {
        entries: manifest
            .entries
            .iter()
            .filter(|e| keep.contains(&e.label.as_str()) || derived_labels.contains(&e.label.as_str()))
            .cloned()
            .collect(),
    };
    let reports = verify_manifest(&subset, &budget, |_| {}).unwrap();
    for label in derived_labels {
        let report = reports
            .iter()
            .find(|r| r.label == label)
            .unwrap_or_else(|| panic!("{label} must be attempted"));
        println!(
            "criterion 5 {label}: {} ({})",
            if report.pass { "pass" } else { "FAIL" },
            report.detail
        );
        assert!(report.pass, "{label}: {}", report.detail);
    }
    println!("criterion 5 (derived codes): pass");
}

/// Criterion 6: cyclic codes matching best-known parameters — exact
/// certificates for the small subset, dimension + witnessed upper bound for
/// the larger ones. The one entry whose published coefficient string cannot
/// produce the stated dimension must be reported as a mismatch, not hidden.
#[test]
fn criterion_06_bklc_parameter_codes() {
    let manifest = shipped_manifest();
    let subset = Manifest {
        entries: manifest
            .entries
            .iter()
            .filter(|e| e.label.starts_with('b'))
            .cloned()
            .collect(),
    };
    assert_eq!(subset.entries.len(), 13);
    let budget = DistanceBudget {
        ub_iterations: 20000,
        ..DistanceBudget::default()
    };
    let reports = verify_manifest(&subset, &budget, |_| {}).unwrap();
    for (entry, report) in subset.entries.iter().zip(&reports) {
        if entry.label == "b170-154-6" {
            assert!(!report.pass, "the defective entry must not silently pass");
            assert!(
                report.detail.contains("dimension mismatch"),
                "got: {}",
                report.detail
            );
            println!("criterion 6 {}: reported not reproduced ({})", entry.label, report.detail);
            continue;
        }
        assert!(report.pass, "{}: {}", entry.label, report.detail);
        match entry.cert {
            CertLevel::Exact => {
                assert_eq!(report.established, Some(entry.d), "{}", entry.label)
            }
            CertLevel::Upper => {
                assert_eq!(report.established, Some(entry.d), "{}", entry.label)
            }
        }
        println!("criterion 6 {}: pass ({})", entry.label, report.detail);
    }
    let exact_labels = ["b56-42-6", "b60-53-4", "b120-114-4"];
    for label in exact_labels {
        let entry = subset.entries.iter().find(|e| e.label == label).unwrap();
        assert_eq!(entry.cert, CertLevel::Exact);
    }
    println!("criterion 6 (best-known-parameter cyclic codes): pass");
}

/// Criterion 7: partition oracle equivalence for q ∈ {2,3}, n ≤ 30 —
/// representatives pairwise non-equivalent, every enumerated multiset
/// covered by exactly one class, within five minutes total.
#[test]
fn criterion_07_partition_oracle() {
    let start = Instant::now();
    for q in [2u64, 3] {
        let field = gf(q);
        for n in 1..=30u64 {
            let record = partition_cyclic(&field, n, Mode::Strict, 1 << 22).unwrap();
            assert_eq!(
                record.class_sizes.iter().sum::<u64>(),
                record.total_enumerated,
                "q={q} n={n}"
            );
            assert_eq!(
                record.total_enumerated as u128,
                total_multisets(&record.table),
                "q={q} n={n}"
            );
            // pairwise non-equivalence of representatives
            for i in 0..record.representatives.len() {
                for j in i + 1..record.representatives.len() {
                    assert!(
                        affine_equivalent(
                            &record.representatives[i],
                            &record.representatives[j],
                            Mode::Strict
                        )
                        .unwrap()
                        .is_none(),
                        "q={q} n={n}: representatives {i} and {j} are equivalent"
                    );
                }
            }
            // exhaustive coverage: every multiset matches exactly one class
            for idx in 1..=total_multisets(&record.table) {
                let ms = index_to_multiset(idx, &record.table).unwrap();
                let matches = record
                    .representatives
                    .iter()
                    .filter(|rep| affine_equivalent(rep, &ms, Mode::Strict).unwrap().is_some())
                    .count();
                assert_eq!(matches, 1, "q={q} n={n} idx={idx}");
            }
        }
    }
    let elapsed = start.elapsed();
    assert_within(elapsed, Duration::from_secs(300), "criterion 7");
    println!("criterion 7 (partition oracle equivalence): pass in {elapsed:?}");
}

/// Criterion 8: equivalence soundness — codes whose multisets admit a
/// witness have identical weight enumerators, for q ∈ {2,3}, n ≤ 30,
/// k ≤ 16. Witnesses are transitive, so checking members of each
/// paper-literal partition class against its first member covers every
/// witness pair. Zero violations allowed.
#[test]
fn criterion_08_equivalence_soundness() {
    let start = Instant::now();
    let mut checked_pairs = 0u64;
    for q in [2u64, 3] {
        let field = gf(q);
        for n in 1..=30u64 {
            let record = partition_cyclic(&field, n, Mode::PaperLiteral, 1 << 22).unwrap();
            let mut class_enum: Vec<Option<Vec<u64>>> =
                vec![None; record.representatives.len()];
            for idx in 1..=total_multisets(&record.table) {
                let ms = index_to_multiset(idx, &record.table).unwrap();
                let deg = ms.total_size();
                let k = n - deg;
                if k == 0 || k > 16 {
                    continue;
                }
                let class = record
                    .representatives
                    .iter()
                    .position(|rep| {
                        affine_equivalent(rep, &ms, Mode::PaperLiteral)
                            .unwrap()
                            .is_some()
                    })
                    .expect("every multiset has a class");
                let matrix = GeneratorMatrix::circulant(&ms.to_poly().unwrap(), n as usize).unwrap();
                let counts = weight_enumerator_auto(&matrix, 1 << 26).unwrap();
                match &class_enum[class] {
                    None => class_enum[class] = Some(counts),
                    Some(reference) => {
                        checked_pairs += 1;
                        assert_eq!(
                            &counts, reference,
                            "q={q} n={n} idx={idx}: witness without matching weight enumerator"
                        );
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 8 (equivalence soundness): pass, {checked_pairs} witness pairs checked in {elapsed:?}"
    );
    assert!(checked_pairs > 100, "the sweep must actually exercise witnesses");
}

/// Criterion 9: the equivalence test's operation count grows no faster than
/// n³ — measured on witness-free full-length multiset pairs at
/// n = 50, 100, 200, 400 over GF(3), log-log slope at most 3.2, under a
/// minute.
#[test]
fn criterion_09_cubic_complexity() {
    let start = Instant::now();
    let field = gf(3);
    let mut measurements = Vec::new();
    for n in [50u64, 100, 200, 400] {
        let table = CosetTable::new(&field, n).unwrap();
        assert_eq!(table.split().coprime, n, "lengths chosen coprime to 3");
        let total = total_multisets(&table);
        // prefer the largest multisets: the worst case is a full-length
        // witness-free pair, which forces the whole (e, b) space. High
        // indices are complements of low ones, so sample both ends.
        let low = 1..=total.min(256);
        let high = (total.saturating_sub(255).max(1))..=total;
        let mut candidates: Vec<_> = low
            .chain(high)
            .map(|i| index_to_multiset(i, &table).unwrap())
            .collect();
        candidates.sort_by_key(|ms| std::cmp::Reverse(ms.total_size()));
        candidates.dedup_by(|a, b| a.multiplicities() == b.multiplicities());
        let mut found = None;
        'outer: for i in 0..candidates.len() {
            for j in i + 1..candidates.len() {
                let (a, b) = (&candidates[i], &candidates[j]);
                if a.total_size() != b.total_size() {
                    continue;
                }
                let (witness, ops) =
                    affine_equivalent_counted(a, b, Mode::PaperLiteral).unwrap();
                if witness.is_none() {
                    found = Some((ops, a.total_size()));
                    break 'outer;
                }
            }
        }
        let (ops, size) = found.expect("a witness-free same-size pair exists");
        println!("criterion 9: n={n} multiset-size={size} ops={ops}");
        measurements.push((n as f64, ops as f64));
    }
    // least-squares slope of ln(count) against ln(n): the single-constant
    // cubic fit count <= C*n^3
    let pts: Vec<(f64, f64)> = measurements
        .iter()
        .map(|&(n, c)| (n.ln(), c.ln()))
        .collect();
    let k = pts.len() as f64;
    let (sx, sy): (f64, f64) = pts.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let sxx: f64 = pts.iter().map(|&(x, _)| x * x).sum();
    let sxy: f64 = pts.iter().map(|&(x, y)| x * y).sum();
    let slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    println!("criterion 9: log-log slope {slope:.3}");
    assert!(
        slope <= 3.2,
        "operation count slope {slope:.2} exceeds the cubic fit bound 3.2"
    );
    let elapsed = start.elapsed();
    assert_within(elapsed, Duration::from_secs(60), "criterion 9");
    println!("criterion 9 (cubic complexity scaling): pass in {elapsed:?}");
}

/// Criterion 10: determinism — identical partition and search invocations
/// produce byte-identical output files.
#[test]
fn criterion_10_determinism() {
    // partition, byte-for-byte
    let f3 = gf(3);
    let a = partition_cyclic(&f3, 24, Mode::Strict, 1 << 20).unwrap().to_text();
    let b = partition_cyclic(&f3, 24, Mode::Strict, 1 << 20).unwrap().to_text();
    assert_eq!(a.into_bytes(), b.into_bytes());

    // seeded QC search, byte-for-byte
    let f2 = gf(2);
    let mut cfg = SearchConfig::new(f2, 15, 2);
    cfg.trials = 4;
    cfg.seed = 0xFEED;
    cfg.kmin = 4;
    cfg.kmax = 7;
    let bklc = BklcTable::empty();
    let r1 = asr_search(&cfg, &bklc).unwrap();
    let r2 = asr_search(&cfg, &bklc).unwrap();
    assert_eq!(
        records_to_text("seed=0xFEED", &r1).into_bytes(),
        records_to_text("seed=0xFEED", &r2).into_bytes()
    );

    // a cyclic sweep is deterministic with no seed at all
    let cfg = SearchConfig::new(gf(3), 16, 1);
    let s1 = cyclic_sweep(&cfg, &bklc).unwrap();
    let s2 = cyclic_sweep(&cfg, &bklc).unwrap();
    assert_eq!(
        records_to_text("sweep", &s1).into_bytes(),
        records_to_text("sweep", &s2).into_bytes()
    );
    println!("criterion 10 (determinism): pass");
}

/// The full-space and zero-code edges of the sweep: the empty multiset
/// (generator 1) is excluded by the enumeration and the zero code is
/// skipped, so the length-7 binary sweep certifies exactly four codes.
#[test]
fn sweep_class_records_length7() {
    let cfg = SearchConfig::new(gf(2), 7, 1);
    let records = cyclic_sweep(&cfg, &BklcTable::empty()).unwrap();
    let params: Vec<(usize, usize, u32)> = records
        .iter()
        .map(|r| (r.n, r.k, r.claim.value))
        .collect();
    assert_eq!(params, vec![(7, 6, 2), (7, 4, 3), (7, 3, 4), (7, 1, 7)]);
    println!("sweep length-7 class records: pass");
}
