//! Minimum-distance engines.
//!
//! Two interchangeable strategies behind one contract: an exhaustive
//! message-space walk when q^k fits the cap, and an information-set
//! enumeration in the Brouwer–Zimmermann style otherwise — systematic
//! generator matrices on greedily-disjoint information sets, message weights
//! enumerated in rounds w = 1, 2, ..., the upper bound maintained as the
//! lightest codeword seen and the lower bound as Σ max(0, w+1−δ) over the
//! enumerated sets (δ = columns a set reuses from earlier ones). A seeded
//! randomized re-encoding search provides upper bounds for codes whose exact
//! verification is out of reach.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::SmallTables;

use super::{weight_enumerator, GeneratorMatrix};

#[derive(Clone, Debug)]
pub struct DistanceBudget {
    /// switch to the exhaustive walk when q^k is at most this
    pub exhaustive_cap: u128,
    /// cap on enumeration work (codeword-cell operations)
    pub max_work: u128,
    /// only enumerate information sets that reuse at most this many columns
    pub delta_max: usize,
    /// iterations for the randomized upper-bound engine
    pub ub_iterations: u64,
    /// message weights tried per re-encoding in the upper-bound engine
    pub ub_weight: usize,
    pub seed: u64,
}

impl Default for DistanceBudget {
    fn default() -> Self {
        DistanceBudget {
            exhaustive_cap: 1 << 24,
            max_work: 200_000_000_000,
            delta_max: 4,
            ub_iterations: 5000,
            ub_weight: 3,
            seed: 0xC0DE,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceResult {
    pub lower: u32,
    pub upper: u32,
    pub exact: bool,
    /// a codeword attaining `upper`
    pub witness: Vec<u8>,
    pub work: u128,
}

/// Walks combinations of exactly `w` rows with nonzero scalars (the first
/// chosen scalar fixed to 1 — weight is invariant under global scaling),
/// keeping the lightest codeword seen.
struct WeightWalker<'a> {
    t: &'a SmallTables,
    rows: &'a [u8],
    k: usize,
    n: usize,
    bufs: Vec<Vec<u8>>,
    work: u128,
    max_work: u128,
    ub: u32,
    witness: Vec<u8>,
    /// abort the walk once ub reaches this (0 = never)
    stop_at: u32,
    hit_target: bool,
}

impl<'a> WeightWalker<'a> {
    fn new(t: &'a SmallTables, rows: &'a [u8], k: usize, n: usize, max_weight: usize) -> Self {
        WeightWalker {
            t,
            rows,
            k,
            n,
            bufs: vec![vec![0u8; n]; max_weight + 1],
            work: 0,
            max_work: u128::MAX,
            ub: u32::MAX,
            witness: Vec::new(),
            stop_at: 0,
            hit_target: false,
        }
    }

    /// All weight-w messages; false when the budget ran out or the target
    /// upper bound was hit.
    fn run(&mut self, w: usize) -> bool {
        self.bufs[0].iter_mut().for_each(|x| *x = 0);
        self.descend(w, 0, 0)
    }

    fn descend(&mut self, w: usize, depth: usize, start: usize) -> bool {
        let remaining = w - depth;
        let last = self.k - remaining;
        for pos in start..=last {
            let row = &self.rows[pos * self.n..(pos + 1) * self.n];
            let scalar_max = if depth == 0 { 1 } else { self.t.q as u8 - 1 };
            for s in 1..=scalar_max {
                self.work += self.n as u128;
                if self.work > self.max_work {
                    return false;
                }
                let mul = self.t.mul_row(s);
                let (prev, cur) = {
                    let (a, b) = self.bufs.split_at_mut(depth + 1);
                    (&a[depth][..], &mut b[0][..])
                };
                if remaining == 1 {
                    // fuse the final add with the weight count
                    let mut weight = 0u32;
                    for ((c, &p), &r) in cur.iter_mut().zip(prev).zip(row) {
                        let v = self.t.add(p, mul[(r & 15) as usize]);
                        *c = v;
                        weight += (v != 0) as u32;
                    }
                    if weight < self.ub {
                        self.ub = weight;
                        self.witness = self.bufs[depth + 1].clone();
                        if self.stop_at > 0 && self.ub <= self.stop_at {
                            self.hit_target = true;
                            return false;
                        }
                    }
                } else {
                    for ((c, &p), &r) in cur.iter_mut().zip(prev).zip(row) {
                        *c = self.t.add(p, mul[(r & 15) as usize]);
                    }
                    if !self.descend(w, depth + 1, pos + 1) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// One systematic re-encoding: rows reduced to identity on an information
/// set, plus how many of its columns earlier sets already claimed.
struct InfoSet {
    rows: Vec<u8>,
    delta: usize,
}

/// Greedy disjoint information sets; later sets may reuse up to `delta_max`
/// earlier columns to reach full rank, and sets needing more are not built.
fn information_sets(m: &GeneratorMatrix, delta_max: usize) -> Vec<InfoSet> {
    let t = m.tables();
    let k = m.rows();
    let n = m.cols();
    let mut used = vec![false; n];
    let mut sets: Vec<InfoSet> = Vec::new();
    loop {
        let unused_count = used.iter().filter(|&&u| !u).count();
        if unused_count + delta_max < k {
            break;
        }
        let mut work = Vec::with_capacity(k * n);
        for r in 0..k {
            work.extend_from_slice(m.row(r));
        }
        let mut pivots: Vec<usize> = Vec::with_capacity(k);
        let mut row = 0usize;
        for c in (0..n).filter(|&c| !used[c]) {
            if row == k {
                break;
            }
            if eliminate(&t, &mut work, k, n, row, c) {
                pivots.push(c);
                row += 1;
            }
        }
        let fresh = row;
        if row < k {
            for c in (0..n).filter(|&c| used[c]) {
                if row == k {
                    break;
                }
                if eliminate(&t, &mut work, k, n, row, c) {
                    pivots.push(c);
                    row += 1;
                }
            }
        }
        let delta = k - fresh;
        if row < k || delta > delta_max {
            break;
        }
        for &c in &pivots[..fresh] {
            used[c] = true;
        }
        let overlapping = delta > 0;
        sets.push(InfoSet { rows: work, delta });
        if overlapping {
            // any further set would overlap at least as much
            break;
        }
    }
    sets
}

/// Pivot `row` on column `c` and clear the column elsewhere; false if the
/// column is zero in the remaining rows.
fn eliminate(t: &SmallTables, work: &mut [u8], k: usize, n: usize, row: usize, c: usize) -> bool {
    let Some(sel) = (row..k).find(|&i| work[i * n + c] != 0) else {
        return false;
    };
    if sel != row {
        for j in 0..n {
            work.swap(row * n + j, sel * n + j);
        }
    }
    let inv = t.inv(work[row * n + c]);
    let mul_inv = t.mul_row(inv);
    for j in 0..n {
        work[row * n + j] = mul_inv[work[row * n + j] as usize];
    }
    for i in 0..k {
        if i != row && work[i * n + c] != 0 {
            let f = work[i * n + c];
            let mul = t.mul_row(t.neg(f));
            for j in 0..n {
                let term = mul[work[row * n + j] as usize];
                work[i * n + j] = t.add(work[i * n + j], term);
            }
        }
    }
    true
}

pub fn min_distance(m: &GeneratorMatrix, budget: &DistanceBudget) -> Result<DistanceResult> {
    min_distance_with_floor(m, budget, 1)
}

/// As [`min_distance`], with an externally-known lower bound (for codes
/// derived from a certified parent: shortening/extending never lower the
/// distance, puncturing lowers it by at most one).
pub fn min_distance_with_floor(
    m: &GeneratorMatrix,
    budget: &DistanceBudget,
    floor: u32,
) -> Result<DistanceResult> {
    let k = m.rows();
    let n = m.cols();
    if k == 0 {
        return Err(Error::RankDeficient { rank: 0, rows: 0 });
    }
    let rank = m.rank();
    if rank != k {
        return Err(Error::RankDeficient { rank, rows: k });
    }
    let q = m.field().order() as u128;
    let space = q.checked_pow(k as u32);
    if space.is_some_and(|s| s <= budget.exhaustive_cap) {
        let counts = weight_enumerator(m, budget.exhaustive_cap)?;
        let d = super::min_positive_weight(&counts).expect("a nonzero code has nonzero words");
        let witness = find_codeword_of_weight(m, d);
        return Ok(DistanceResult {
            lower: d,
            upper: d,
            exact: true,
            witness,
            work: space.unwrap(),
        });
    }

    let t = m.tables();
    let sets = information_sets(m, budget.delta_max);
    let mut walkers: Vec<WeightWalker> = sets
        .iter()
        .map(|s| {
            let mut w = WeightWalker::new(&t, &s.rows, k, n, k);
            // a codeword at the floor is already provably minimal
            w.stop_at = floor;
            w
        })
        .collect();
    let mut ub = u32::MAX;
    let mut witness = Vec::new();
    let base_lb: u32 = sets
        .iter()
        .map(|s| 1u32.saturating_sub(s.delta as u32))
        .sum::<u32>()
        .max(1);
    let mut lower = floor.max(base_lb);
    let has_full_set = sets.iter().any(|s| s.delta == 0);
    let partial = |walkers: &[WeightWalker], lower: u32, ub: u32, witness: Vec<u8>| {
        let work = walkers.iter().map(|e| e.work).sum();
        DistanceResult {
            lower: lower.min(ub),
            upper: ub,
            exact: lower >= ub,
            witness,
            work,
        }
    };
    for w in 1..=k {
        for si in 0..walkers.len() {
            let used: u128 = walkers.iter().map(|e| e.work).sum();
            let walker = &mut walkers[si];
            walker.max_work = walker
                .work
                .saturating_add(budget.max_work.saturating_sub(used));
            let finished = walker.run(w);
            if walker.ub < ub {
                ub = walker.ub;
                witness = walker.witness.clone();
            }
            // ub at or below the floor certifies immediately; otherwise an
            // unfinished walk means the budget ran out
            if lower >= ub || !finished {
                return Ok(partial(&walkers, lower, ub, witness));
            }
        }
        let round_lb: u32 = sets
            .iter()
            .map(|s| (w as u32 + 1).saturating_sub(s.delta as u32))
            .sum();
        lower = lower.max(round_lb);
        if lower >= ub {
            return Ok(partial(&walkers, lower, ub, witness));
        }
    }
    // every message weight was enumerated; a full-rank set covers the code
    if has_full_set {
        lower = ub;
    }
    Ok(partial(&walkers, lower, ub, witness))
}

/// Recover one codeword of the given weight after an exhaustive count.
fn find_codeword_of_weight(m: &GeneratorMatrix, d: u32) -> Vec<u8> {
    let t = m.tables();
    let k = m.rows();
    let n = m.cols();
    let qs = t.q as u8;
    let mut digits = vec![0u8; k];
    let mut cw = vec![0u8; n];
    loop {
        let mut j = 0;
        loop {
            assert!(j < k, "no codeword of weight {d} exists");
            let old = digits[j];
            let new = if old + 1 == qs { 0 } else { old + 1 };
            digits[j] = new;
            let diff = t.add(new, t.neg(old));
            let mul = t.mul_row(diff);
            let row = m.row(j);
            for (c, &r) in cw.iter_mut().zip(row) {
                *c = t.add(*c, mul[r as usize]);
            }
            if new != 0 {
                break;
            }
            j += 1;
        }
        if cw.iter().filter(|&&x| x != 0).count() as u32 == d {
            return cw;
        }
    }
}

/// Randomized low-weight search: repeatedly re-encode on a random
/// information set and enumerate low-weight messages, keeping the lightest
/// codeword. Deterministic for a fixed seed; stops once `target` is reached.
pub fn upper_bound_search(
    m: &GeneratorMatrix,
    budget: &DistanceBudget,
    target: Option<u32>,
) -> Result<(u32, Vec<u8>)> {
    let k = m.rows();
    let n = m.cols();
    let rank = m.rank();
    if rank != k || k == 0 {
        return Err(Error::RankDeficient { rank, rows: k });
    }
    let t = m.tables();
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut best = u32::MAX;
    let mut witness: Vec<u8> = Vec::new();
    // the raw rows are codewords too
    for r in 0..k {
        let row = m.row(r);
        let w = row.iter().filter(|&&x| x != 0).count() as u32;
        if w < best {
            best = w;
            witness = row.to_vec();
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut permuted = vec![0u8; k * n];
    for _ in 0..budget.ub_iterations {
        if target.is_some_and(|tgt| best <= tgt) {
            break;
        }
        perm.shuffle(&mut rng);
        for r in 0..k {
            let row = m.row(r);
            for (j, &p) in perm.iter().enumerate() {
                permuted[r * n + j] = row[p];
            }
        }
        let pm = GeneratorMatrix::new(m.field().clone(), k, n, permuted.clone());
        let (rr, pivots) = pm.rref();
        if pivots.len() < k {
            continue;
        }
        let mut walker = WeightWalker::new(&t, &rr.data, k, n, budget.ub_weight);
        for w in 1..=budget.ub_weight.min(k) {
            walker.run(w);
        }
        if walker.ub < best {
            best = walker.ub;
            // back to the original coordinates
            let mut orig = vec![0u8; n];
            for (j, &p) in perm.iter().enumerate() {
                orig[p] = walker.witness[j];
            }
            witness = orig;
        }
    }
    Ok((best, witness))
}
