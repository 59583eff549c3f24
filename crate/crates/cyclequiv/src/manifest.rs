//! Manifests of expected (n, k, d) entries and the machinery that replays
//! and checks each one: build the construction, confirm the dimension,
//! certify the distance at the expected level, and re-check the stored
//! witness by membership and weight.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::codes::{
    min_distance_with_floor, upper_bound_search, CyclicCodeSpec, DistanceBudget, GeneratorMatrix,
    QcCodeSpec, RowSpace,
};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::search::field_from_order;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CertLevel {
    /// the distance must be certified exactly and equal the claim
    Exact,
    /// a codeword of the claimed weight must be exhibited (d ≤ claim)
    Upper,
}

#[derive(Clone, Debug, PartialEq)]
pub enum EntryConstruction {
    /// generator polynomial
    CyclicG(String),
    /// check polynomial (some published tables define codes this way)
    CyclicH(String),
    Qc {
        m: usize,
        ell: usize,
        g: String,
        fs: Vec<String>,
    },
    Derived {
        parent: String,
        ops: Vec<DeriveOp>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeriveOp {
    Shorten,
    Puncture,
    Extend,
}

#[derive(Clone, Debug)]
pub struct ManifestEntry {
    pub label: String,
    pub q: u64,
    pub n: usize,
    pub k: usize,
    pub d: u32,
    pub cert: CertLevel,
    pub construction: EntryConstruction,
}

#[derive(Clone, Debug, Default)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    /// Line grammar:
    /// `<label> q=<q> n=<n> k=<k> d=<d> cert=<exact|upper> <construction>`
    /// where the construction is `cyclic g=[...]`, `cyclic h=[...]`,
    /// `qc m=<m> l=<l> g=[...] f2=[...] ...`, or
    /// `derive parent=<label> ops=shorten,extend,...`. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Manifest> {
        let mut entries = Vec::new();
        let mut labels: HashMap<String, ()> = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse {
                pos: lineno + 1,
                msg,
            };
            let mut tokens = line.split_whitespace();
            let label = tokens.next().ok_or_else(|| err("missing label".into()))?;
            if labels.insert(label.to_string(), ()).is_some() {
                return Err(err(format!("duplicate label {label:?}")));
            }
            let mut q = None;
            let mut n = None;
            let mut k = None;
            let mut d = None;
            let mut cert = None;
            let mut rest: Vec<&str> = Vec::new();
            for tok in tokens {
                if !rest.is_empty() {
                    rest.push(tok);
                    continue;
                }
                if let Some(v) = tok.strip_prefix("q=") {
                    q = v.parse::<u64>().ok();
                } else if let Some(v) = tok.strip_prefix("n=") {
                    n = v.parse::<usize>().ok();
                } else if let Some(v) = tok.strip_prefix("k=") {
                    k = v.parse::<usize>().ok();
                } else if let Some(v) = tok.strip_prefix("d=") {
                    d = v.parse::<u32>().ok();
                } else if let Some(v) = tok.strip_prefix("cert=") {
                    cert = match v {
                        "exact" => Some(CertLevel::Exact),
                        "upper" => Some(CertLevel::Upper),
                        _ => None,
                    };
                } else {
                    rest.push(tok);
                }
            }
            let construction = Self::parse_construction(&rest, &err)?;
            entries.push(ManifestEntry {
                label: label.to_string(),
                q: q.ok_or_else(|| err("missing or bad q=".into()))?,
                n: n.ok_or_else(|| err("missing or bad n=".into()))?,
                k: k.ok_or_else(|| err("missing or bad k=".into()))?,
                d: d.ok_or_else(|| err("missing or bad d=".into()))?,
                cert: cert.ok_or_else(|| err("missing or bad cert=".into()))?,
                construction,
            })
        }
        Ok(Manifest { entries })
    }

    fn parse_construction(
        rest: &[&str],
        err: &dyn Fn(String) -> Error,
    ) -> Result<EntryConstruction> {
        match rest.first().copied() {
            Some("cyclic") => {
                let arg = rest
                    .get(1)
                    .ok_or_else(|| err("cyclic needs g=[...] or h=[...]".into()))?;
                if let Some(g) = arg.strip_prefix("g=") {
                    Ok(EntryConstruction::CyclicG(g.to_string()))
                } else if let Some(h) = arg.strip_prefix("h=") {
                    Ok(EntryConstruction::CyclicH(h.to_string()))
                } else {
                    Err(err(format!("bad cyclic argument {arg:?}")))
                }
            }
            Some("qc") => {
                let mut m = None;
                let mut ell = None;
                let mut g = None;
                let mut fs = Vec::new();
                for tok in &rest[1..] {
                    if let Some(v) = tok.strip_prefix("m=") {
                        m = v.parse().ok();
                    } else if let Some(v) = tok.strip_prefix("l=") {
                        ell = v.parse().ok();
                    } else if let Some(v) = tok.strip_prefix("g=") {
                        g = Some(v.to_string());
                    } else if tok.starts_with('f') && tok.contains('=') {
                        fs.push(tok.split_once('=').unwrap().1.to_string());
                    } else {
                        return Err(err(format!("bad qc token {tok:?}")));
                    }
                }
                Ok(EntryConstruction::Qc {
                    m: m.ok_or_else(|| err("qc needs m=".into()))?,
                    ell: ell.ok_or_else(|| err("qc needs l=".into()))?,
                    g: g.ok_or_else(|| err("qc needs g=".into()))?,
                    fs,
                })
            }
            Some("derive") => {
                let mut parent = None;
                let mut ops = Vec::new();
                for tok in &rest[1..] {
                    if let Some(v) = tok.strip_prefix("parent=") {
                        parent = Some(v.to_string());
                    } else if let Some(v) = tok.strip_prefix("ops=") {
                        for op in v.split(',') {
                            ops.push(match op {
                                "shorten" => DeriveOp::Shorten,
                                "puncture" => DeriveOp::Puncture,
                                "extend" => DeriveOp::Extend,
                                other => return Err(err(format!("bad op {other:?}"))),
                            });
                        }
                    } else {
                        return Err(err(format!("bad derive token {tok:?}")));
                    }
                }
                Ok(EntryConstruction::Derived {
                    parent: parent.ok_or_else(|| err("derive needs parent=".into()))?,
                    ops,
                })
            }
            other => Err(err(format!("unknown construction {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryReport {
    pub label: String,
    pub pass: bool,
    pub detail: String,
    /// (n, k) actually built, when construction succeeded
    pub built: Option<(usize, usize)>,
    /// distance value the verifier established (exact value or witness weight)
    pub established: Option<u32>,
}

/// Verify every manifest entry, in order. Derived entries may reference any
/// earlier entry as parent. Progress lines go to `progress` (one per entry).
pub fn verify_manifest(
    manifest: &Manifest,
    budget: &DistanceBudget,
    mut progress: impl FnMut(&EntryReport),
) -> Result<Vec<EntryReport>> {
    let mut reports: Vec<EntryReport> = Vec::new();
    let mut built: HashMap<String, (GeneratorMatrix, u32)> = HashMap::new();
    for entry in &manifest.entries {
        let report = verify_entry(entry, budget, &built);
        if let Ok((matrix, lower)) = build_entry(entry, &built) {
            // children seed their floor from this entry's claim only when
            // the verifier confirmed it
            if report.pass {
                let floor = match entry.cert {
                    CertLevel::Exact => entry.d,
                    CertLevel::Upper => lower,
                };
                built.insert(entry.label.clone(), (matrix, floor));
            }
        }
        progress(&report);
        reports.push(report);
    }
    Ok(reports)
}

fn field_for(entry: &ManifestEntry) -> Result<Arc<Field>> {
    field_from_order(entry.q)
}

/// Build the entry's generator matrix; returns it plus a distance floor
/// inherited from the parent for derived entries (1 otherwise).
fn build_entry(
    entry: &ManifestEntry,
    built: &HashMap<String, (GeneratorMatrix, u32)>,
) -> Result<(GeneratorMatrix, u32)> {
    let field = field_for(entry)?;
    match &entry.construction {
        EntryConstruction::CyclicG(g) => {
            let g = crate::text::parse_poly(&field, g)?;
            let spec = CyclicCodeSpec::new(&field, entry.n, &g)?;
            Ok((spec.matrix()?, 1))
        }
        EntryConstruction::CyclicH(h) => {
            let h = crate::text::parse_poly(&field, h)?;
            let spec = CyclicCodeSpec::from_check(&field, entry.n, &h)?;
            Ok((spec.matrix()?, 1))
        }
        EntryConstruction::Qc { m, g, fs, .. } => {
            let g = crate::text::parse_poly(&field, g)?;
            let fs = fs
                .iter()
                .map(|f| crate::text::parse_poly(&field, f))
                .collect::<Result<Vec<_>>>()?;
            let spec = QcCodeSpec::new(&field, *m, &g, fs)?;
            Ok((spec.matrix()?, 1))
        }
        EntryConstruction::Derived { parent, ops } => {
            let (parent_matrix, parent_floor) =
                built.get(parent).ok_or_else(|| Error::Invalid {
                    what: "derived entry",
                    detail: format!("parent {parent:?} missing or unverified"),
                })?;
            let mut matrix = parent_matrix.clone();
            let mut floor = *parent_floor;
            for op in ops {
                matrix = match op {
                    DeriveOp::Shorten => {
                        let expected = matrix.rows() - 1;
                        apply_at_first_position(&matrix, expected, |m, p| m.shorten(p))?
                    }
                    DeriveOp::Puncture => {
                        floor = floor.saturating_sub(1).max(1);
                        let expected = matrix.rows();
                        apply_at_first_position(&matrix, expected, |m, p| m.puncture(p))?
                    }
                    DeriveOp::Extend => matrix.extend(),
                };
            }
            Ok((matrix, floor))
        }
    }
}

/// First position whose transform keeps the expected dimension.
fn apply_at_first_position(
    m: &GeneratorMatrix,
    expected_k: usize,
    op: impl Fn(&GeneratorMatrix, usize) -> Result<GeneratorMatrix>,
) -> Result<GeneratorMatrix> {
    for pos in 0..m.cols() {
        if let Ok(out) = op(m, pos) {
            if out.rows() == expected_k {
                return Ok(out);
            }
        }
    }
    Err(Error::Invalid {
        what: "derived entry",
        detail: format!("no position keeps dimension {expected_k}"),
    })
}

fn verify_entry(
    entry: &ManifestEntry,
    budget: &DistanceBudget,
    built: &HashMap<String, (GeneratorMatrix, u32)>,
) -> EntryReport {
    let fail = |detail: String, built: Option<(usize, usize)>| EntryReport {
        label: entry.label.clone(),
        pass: false,
        detail,
        built,
        established: None,
    };
    let (matrix, floor) = match build_entry(entry, built) {
        Ok(x) => x,
        Err(e) => return fail(format!("construction failed: {e}"), None),
    };
    let dims = (matrix.cols(), matrix.rows());
    if dims != (entry.n, entry.k) {
        return fail(
            format!(
                "dimension mismatch: built [{}, {}], expected [{}, {}]",
                dims.0, dims.1, entry.n, entry.k
            ),
            Some(dims),
        );
    }
    match entry.cert {
        CertLevel::Exact => {
            let result = match min_distance_with_floor(&matrix, budget, floor) {
                Ok(r) => r,
                Err(e) => return fail(format!("distance engine failed: {e}"), Some(dims)),
            };
            if !result.exact {
                return fail(
                    format!(
                        "budget exhausted at bounds [{}, {}] without an exact certificate",
                        result.lower, result.upper
                    ),
                    Some(dims),
                );
            }
            if let Err(e) = check_witness(&matrix, &result.witness, result.upper) {
                return fail(e, Some(dims));
            }
            if result.upper < entry.d {
                return fail(
                    format!("exact distance {} is below the claimed {}", result.upper, entry.d),
                    Some(dims),
                );
            }
            let note = if result.upper > entry.d {
                format!(
                    "exact distance {} exceeds the claimed {} (first-position derivation)",
                    result.upper, entry.d
                )
            } else {
                format!("exact distance {}", result.upper)
            };
            EntryReport {
                label: entry.label.clone(),
                pass: true,
                detail: note,
                built: Some(dims),
                established: Some(result.upper),
            }
        }
        CertLevel::Upper => {
            let (ub, witness) = match upper_bound_search(&matrix, budget, Some(entry.d)) {
                Ok(x) => x,
                Err(e) => return fail(format!("distance engine failed: {e}"), Some(dims)),
            };
            if ub > entry.d {
                return fail(
                    format!(
                        "no codeword of weight {} found within {} re-encodings (best {})",
                        entry.d, budget.ub_iterations, ub
                    ),
                    Some(dims),
                );
            }
            if let Err(e) = check_witness(&matrix, &witness, ub) {
                return fail(e, Some(dims));
            }
            if ub < entry.d {
                return fail(
                    format!("found a weight-{ub} codeword, below the claimed distance {}", entry.d),
                    Some(dims),
                );
            }
            EntryReport {
                label: entry.label.clone(),
                pass: true,
                detail: format!("witness codeword of weight {ub} (d \u{2264} {ub})"),
                built: Some(dims),
                established: Some(ub),
            }
        }
    }
}

/// Witnesses must be members of the code and have the claimed weight.
fn check_witness(matrix: &GeneratorMatrix, witness: &[u8], weight: u32) -> std::result::Result<(), String> {
    if witness.len() != matrix.cols() {
        return Err("witness length mismatch".into());
    }
    let actual = witness.iter().filter(|&&x| x != 0).count() as u32;
    if actual != weight {
        return Err(format!("witness weight {actual} does not match {weight}"));
    }
    if !RowSpace::new(matrix).contains(witness) {
        return Err("witness is not a codeword".into());
    }
    Ok(())
}
