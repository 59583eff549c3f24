//! Equivalence-aware search drivers: a cyclic sweep that certifies one code
//! per partition class, and a 1-generator quasi-cyclic search that draws
//! random multiplier tuples coprime to the check polynomial over each
//! inequivalent generator, comparing results against a best-known-parameters
//! snapshot.

use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::codes::{
    min_distance, min_distance_with_floor, upper_bound_search, BklcFlag, CodeRecord, Construction,
    CyclicCodeSpec, DeriveStep, DistanceBudget, DistanceCert, DistanceClaim, GeneratorMatrix,
    QcCodeSpec,
};
use crate::equivalence::Mode;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::partition::{partition_cyclic, DEFAULT_PARTITION_BUDGET};
use crate::poly::Poly;

/// Best-known-distance snapshot keyed by (q, n, k); plain text lines
/// `q n k d` with `#` comments, user-replaceable.
#[derive(Debug, Default, Clone)]
pub struct BklcTable {
    map: HashMap<(u64, usize, usize), u32>,
}

impl BklcTable {
    pub fn empty() -> BklcTable {
        BklcTable::default()
    }

    pub fn parse(text: &str) -> Result<BklcTable> {
        let mut map = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let fields: Vec<&str> = body.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(Error::Parse {
                    pos: lineno + 1,
                    msg: format!("expected `q n k d`, got {body:?}"),
                });
            }
            let parse = |s: &str| -> Result<u64> {
                s.parse().map_err(|_| Error::Parse {
                    pos: lineno + 1,
                    msg: format!("bad number {s:?}"),
                })
            };
            let q = parse(fields[0])?;
            let n = parse(fields[1])? as usize;
            let k = parse(fields[2])? as usize;
            let d = parse(fields[3])? as u32;
            if d == 0 {
                return Err(Error::Parse {
                    pos: lineno + 1,
                    msg: "distances must be positive".into(),
                });
            }
            map.insert((q, n, k), d);
        }
        Ok(BklcTable { map })
    }

    pub fn load(path: &std::path::Path) -> Result<BklcTable> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn lookup(&self, q: u64, n: usize, k: usize) -> Option<u32> {
        self.map.get(&(q, n, k)).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// New only when the proven lower bound strictly beats the table.
    pub fn flag(&self, q: u64, n: usize, k: usize, claim: &DistanceClaim) -> BklcFlag {
        let Some(best) = self.lookup(q, n, k) else {
            return BklcFlag::Unknown;
        };
        if claim.proven_lower() > best {
            BklcFlag::New
        } else if claim.cert == DistanceCert::Exact {
            if claim.value == best {
                BklcFlag::Meets
            } else {
                BklcFlag::Below
            }
        } else {
            BklcFlag::Unknown
        }
    }
}

/// The field of a given small prime-power order.
pub fn field_from_order(q: u64) -> Result<Arc<Field>> {
    let mut p = 2u64;
    loop {
        if p * p > q {
            break Field::new(q, 1);
        }
        if q % p == 0 {
            let mut m = 0u32;
            let mut v = q;
            while v % p == 0 {
                v /= p;
                m += 1;
            }
            if v != 1 {
                return Err(Error::Invalid {
                    what: "field order",
                    detail: format!("{q} is not a prime power"),
                });
            }
            break Field::new(p, m);
        }
        p += 1;
    }
}

/// A (g, f_2..f_ℓ) tuple evaluated ahead of the random trials, so published
/// generators can be replayed through the same pipeline.
#[derive(Clone, Debug)]
pub struct ForcedTrial {
    pub g: Poly,
    pub fs: Vec<Poly>,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub field: Arc<Field>,
    /// block length for QC searches; the code length for cyclic sweeps
    pub m: usize,
    pub ell: usize,
    pub kmin: usize,
    pub kmax: usize,
    pub trials: u64,
    pub seed: u64,
    pub mode: Mode,
    pub budget: DistanceBudget,
    pub partition_budget: u128,
    pub forced: Vec<ForcedTrial>,
}

impl SearchConfig {
    pub fn new(field: Arc<Field>, m: usize, ell: usize) -> SearchConfig {
        SearchConfig {
            field,
            m,
            ell,
            kmin: 1,
            kmax: m,
            trials: 0,
            seed: 0,
            mode: Mode::Strict,
            budget: DistanceBudget::default(),
            partition_budget: DEFAULT_PARTITION_BUDGET,
            forced: Vec::new(),
        }
    }
}

fn claim_from(result: &crate::codes::DistanceResult) -> DistanceClaim {
    if result.exact {
        DistanceClaim {
            value: result.upper,
            cert: DistanceCert::Exact,
        }
    } else {
        DistanceClaim {
            value: result.upper,
            cert: DistanceCert::Bounds {
                lower: result.lower,
            },
        }
    }
}

/// Certify one code from every partition class in the dimension range.
/// The zero code (generator x^n − 1) is skipped: its distance is undefined.
pub fn cyclic_sweep(cfg: &SearchConfig, bklc: &BklcTable) -> Result<Vec<CodeRecord>> {
    let n = cfg.m;
    let partition = partition_cyclic(&cfg.field, n as u64, cfg.mode, cfg.partition_budget)?;
    let q = cfg.field.order();
    let mut records = Vec::new();
    for rep in &partition.representatives {
        let deg = rep.total_size() as usize;
        if deg == n {
            continue;
        }
        let k = n - deg;
        if k < cfg.kmin || k > cfg.kmax {
            continue;
        }
        let g = rep.to_poly()?;
        let matrix = GeneratorMatrix::circulant(&g, n)?;
        let result = min_distance(&matrix, &cfg.budget)?;
        let claim = claim_from(&result);
        let bflag = bklc.flag(q, n, k, &claim);
        records.push(CodeRecord {
            q,
            n,
            k,
            claim,
            witness: result.witness,
            construction: Construction::Cyclic {
                g: crate::text::format_poly(&g),
            },
            seed: None,
            bklc: bflag,
        });
    }
    Ok(records)
}

/// Uniform polynomial of degree < m with gcd(f, h) = 1, by rejection.
fn sample_multiplier(
    field: &Arc<Field>,
    m: usize,
    h: &Poly,
    rng: &mut ChaCha8Rng,
) -> Result<Poly> {
    let q = field.order();
    for _ in 0..64 * m.max(1) as u64 {
        let coeffs: Vec<u32> = (0..m).map(|_| rng.gen_range(0..q) as u32).collect();
        let f = Poly::from_indices(field, &coeffs);
        if f.gcd(h)?.degree() == Some(0) {
            return Ok(f);
        }
    }
    Err(Error::Invalid {
        what: "multiplier sampling",
        detail: "no admissible multiplier found within the rejection budget".into(),
    })
}

/// The random stream for (representative, trial) — split so parallel
/// evaluation never changes the drawn values.
fn trial_rng(seed: u64, rep_idx: u64, trial_idx: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((rep_idx << 32) | (trial_idx + 1));
    rng
}

/// The ASR-style 1-generator QC search: forced trials first, then `trials`
/// random multiplier tuples per representative generator in the dimension
/// range. Records are sorted by (k, −d).
pub fn asr_search(cfg: &SearchConfig, bklc: &BklcTable) -> Result<Vec<CodeRecord>> {
    if cfg.ell < 2 {
        return Err(Error::Invalid {
            what: "search config",
            detail: "a QC search needs index ell >= 2".into(),
        });
    }
    let q = cfg.field.order();
    let m = cfg.m;
    let mut records = Vec::new();

    let mut evaluate = |g: &Poly, fs: Vec<Poly>, forced: bool, trial_seed: Option<u64>| -> Result<()> {
        let spec = QcCodeSpec::new(&cfg.field, m, g, fs)?;
        let k = spec.dimension();
        let n = spec.length();
        let matrix = spec.matrix()?;
        let result = min_distance(&matrix, &cfg.budget)?;
        let claim = claim_from(&result);
        let bflag = bklc.flag(q, n, k, &claim);
        records.push(CodeRecord {
            q,
            n,
            k,
            claim,
            witness: result.witness,
            construction: Construction::Qc {
                m,
                ell: cfg.ell,
                g: crate::text::format_poly(spec.generator()),
                fs: spec
                    .multipliers()
                    .iter()
                    .map(crate::text::format_poly)
                    .collect(),
            },
            seed: if forced { None } else { trial_seed },
            bklc: bflag,
        });
        Ok(())
    };

    for forced in &cfg.forced {
        evaluate(&forced.g, forced.fs.clone(), true, None)?;
    }

    if cfg.trials > 0 {
        let partition = partition_cyclic(&cfg.field, m as u64, cfg.mode, cfg.partition_budget)?;
        for (rep_idx, rep) in partition.representatives.iter().enumerate() {
            let deg = rep.total_size() as usize;
            if deg == m {
                continue;
            }
            let k = m - deg;
            if k < cfg.kmin || k > cfg.kmax {
                continue;
            }
            let g = rep.to_poly()?;
            let h = CyclicCodeSpec::new(&cfg.field, m, &g)?.check().clone();
            for trial in 0..cfg.trials {
                let mut rng = trial_rng(cfg.seed, rep_idx as u64, trial);
                let fs = (1..cfg.ell)
                    .map(|_| sample_multiplier(&cfg.field, m, &h, &mut rng))
                    .collect::<Result<Vec<_>>>()?;
                evaluate(&g, fs, false, Some(cfg.seed))?;
            }
        }
    }

    records.sort_by(|a, b| a.k.cmp(&b.k).then(b.claim.value.cmp(&a.claim.value)));
    Ok(records)
}

/// All single-step shortenings, puncturings, and the extension of a record's
/// code, re-certified (the parent's proven lower bound seeds each child's).
pub fn derive_neighbors(
    rec: &CodeRecord,
    bklc: &BklcTable,
    budget: &DistanceBudget,
) -> Result<Vec<CodeRecord>> {
    let field = field_from_order(rec.q)?;
    let matrix = rec.construction.build(&field, rec.n)?;
    let parent_lower = rec.claim.proven_lower();
    let q = rec.q;

    enum Step {
        Shorten(usize),
        Puncture(usize),
        Extend,
    }
    let mut steps: Vec<Step> = Vec::new();
    for pos in 0..rec.n {
        steps.push(Step::Shorten(pos));
    }
    for pos in 0..rec.n {
        steps.push(Step::Puncture(pos));
    }
    steps.push(Step::Extend);

    let results: Vec<Result<Option<CodeRecord>>> = steps
        .par_iter()
        .map(|step| {
            let (child, floor, construction) = match step {
                Step::Shorten(pos) => {
                    let Ok(m) = matrix.shorten(*pos) else {
                        return Ok(None);
                    };
                    (
                        m,
                        parent_lower,
                        rec.construction.clone().derived(DeriveStep::Shorten(*pos)),
                    )
                }
                Step::Puncture(pos) => {
                    let Ok(m) = matrix.puncture(*pos) else {
                        return Ok(None);
                    };
                    (
                        m,
                        parent_lower.saturating_sub(1).max(1),
                        rec.construction.clone().derived(DeriveStep::Puncture(*pos)),
                    )
                }
                Step::Extend => (
                    matrix.extend(),
                    parent_lower,
                    rec.construction.clone().derived(DeriveStep::Extend),
                ),
            };
            let result = min_distance_with_floor(&child, budget, floor)?;
            let claim = claim_from(&result);
            let bflag = bklc.flag(q, child.cols(), child.rows(), &claim);
            Ok(Some(CodeRecord {
                q,
                n: child.cols(),
                k: child.rows(),
                claim,
                witness: result.witness,
                construction,
                seed: rec.seed,
                bklc: bflag,
            }))
        })
        .collect();
    let mut out = Vec::new();
    for r in results {
        if let Some(rec) = r? {
            out.push(rec);
        }
    }
    Ok(out)
}

/// Find one codeword of weight at most `target` with the randomized engine
/// and wrap it into an upper-bound claim.
pub fn certify_upper(
    matrix: &GeneratorMatrix,
    budget: &DistanceBudget,
    target: u32,
) -> Result<(DistanceClaim, Vec<u8>)> {
    let (ub, witness) = upper_bound_search(matrix, budget, Some(target))?;
    Ok((
        DistanceClaim {
            value: ub,
            cert: DistanceCert::Upper,
        },
        witness,
    ))
}

// ---------------------------------------------------------------------------
// record files
// ---------------------------------------------------------------------------

/// Line-oriented structured text: `q n k d cert seed bklc construction`.
pub fn write_records(mut w: impl Write, cfg_summary: &str, records: &[CodeRecord]) -> Result<()> {
    writeln!(w, "cyclequiv-records v1 {cfg_summary}")?;
    for r in records {
        let seed = r.seed.map_or("-".to_string(), |s| s.to_string());
        writeln!(
            w,
            "{} {} {} {} {} {} {} {}",
            r.q,
            r.n,
            r.k,
            r.claim.value,
            r.claim.cert_token(),
            seed,
            r.bklc.token(),
            r.construction
        )?;
    }
    Ok(())
}

pub fn records_to_text(cfg_summary: &str, records: &[CodeRecord]) -> String {
    let mut buf = Vec::new();
    write_records(&mut buf, cfg_summary, records).expect("writing to memory");
    String::from_utf8(buf).expect("the record format is ASCII")
}

pub fn read_records(r: impl BufRead) -> Result<Vec<CodeRecord>> {
    let bad = |detail: String| Error::Invalid {
        what: "record file",
        detail,
    };
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| bad("empty file".into()))??;
    if !header.starts_with("cyclequiv-records v1") {
        return Err(bad(format!("unrecognized header {header:?}")));
    }
    let mut out = Vec::new();
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut tok = line.splitn(8, ' ');
        let mut next = || tok.next().ok_or_else(|| bad(format!("short row {line:?}")));
        let q = next()?.parse::<u64>().map_err(|e| bad(e.to_string()))?;
        let n = next()?.parse::<usize>().map_err(|e| bad(e.to_string()))?;
        let k = next()?.parse::<usize>().map_err(|e| bad(e.to_string()))?;
        let d = next()?.parse::<u32>().map_err(|e| bad(e.to_string()))?;
        let claim = DistanceClaim::parse_token(d, next()?)?;
        let seed_tok = next()?;
        let seed = if seed_tok == "-" {
            None
        } else {
            Some(seed_tok.parse::<u64>().map_err(|e| bad(e.to_string()))?)
        };
        let bflag = BklcFlag::parse(next()?)?;
        let construction = Construction::parse(next()?)?;
        out.push(CodeRecord {
            q,
            n,
            k,
            claim,
            witness: Vec::new(),
            construction,
            seed,
            bklc: bflag,
        });
    }
    Ok(out)
}
