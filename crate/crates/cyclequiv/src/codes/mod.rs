//! Linear codes as generator matrices: cyclic and 1-generator quasi-cyclic
//! constructions, weight enumerators, shortening/puncturing/extending, and
//! the minimum-distance engines (see [`distance`]).

pub mod distance;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, SmallTables};
use crate::poly::Poly;

pub use distance::{
    min_distance, min_distance_with_floor, upper_bound_search, DistanceBudget, DistanceResult,
};

/// A k × n generator matrix over a small field, entries stored row-major as
/// element indices.
#[derive(Clone)]
pub struct GeneratorMatrix {
    field: Arc<Field>,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl fmt::Debug for GeneratorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GeneratorMatrix({}x{} over GF({}))",
            self.rows,
            self.cols,
            self.field.order()
        )
    }
}

impl GeneratorMatrix {
    pub fn new(field: Arc<Field>, rows: usize, cols: usize, data: Vec<u8>) -> GeneratorMatrix {
        assert!(field.order() <= 256, "matrix entries are byte-sized");
        assert_eq!(data.len(), rows * cols);
        GeneratorMatrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entry(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    pub fn tables(&self) -> SmallTables {
        self.field
            .small_tables()
            .expect("matrix fields are small by construction")
    }

    /// Circulant generator matrix of the cyclic code ⟨g⟩: row r holds the
    /// coefficients of x^r · g(x), for r = 0..n−deg(g).
    pub fn circulant(g: &Poly, n: usize) -> Result<GeneratorMatrix> {
        let deg = g.degree().ok_or_else(|| Error::Invalid {
            what: "generator polynomial",
            detail: "the zero polynomial generates no code".into(),
        })?;
        if deg >= n {
            return Err(Error::Invalid {
                what: "generator polynomial",
                detail: format!("degree {deg} is not below the length {n}"),
            });
        }
        let k = n - deg;
        let mut data = vec![0u8; k * n];
        for r in 0..k {
            for (i, c) in g.coeffs().iter().enumerate() {
                data[r * n + r + i] = c.index() as u8;
            }
        }
        Ok(GeneratorMatrix::new(g.field().clone(), k, n, data))
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (GeneratorMatrix, Vec<usize>) {
        let t = self.tables();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(sel) = (r..m.rows).find(|&i| m.entry(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, sel);
            let inv = t.inv(m.entry(r, c));
            m.scale_row(&t, r, inv);
            for i in 0..m.rows {
                if i != r && m.entry(i, c) != 0 {
                    let f = m.entry(i, c);
                    m.subtract_scaled(&t, i, r, f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (a, b) = (a.min(b), a.max(b));
        let (top, bottom) = self.data.split_at_mut(b * self.cols);
        top[a * self.cols..(a + 1) * self.cols].swap_with_slice(&mut bottom[..self.cols]);
    }

    fn scale_row(&mut self, t: &SmallTables, r: usize, c: u8) {
        let mul = t.mul_row(c);
        for x in &mut self.data[r * self.cols..(r + 1) * self.cols] {
            *x = mul[*x as usize];
        }
    }

    /// row i -= f * row r
    fn subtract_scaled(&mut self, t: &SmallTables, i: usize, r: usize, f: u8) {
        let neg_f = t.neg(f);
        let mul = t.mul_row(neg_f);
        let (ri, rr) = (i * self.cols, r * self.cols);
        for c in 0..self.cols {
            let term = mul[self.data[rr + c] as usize];
            self.data[ri + c] = t.add(self.data[ri + c], term);
        }
    }

    /// Drop rows that are zero after row reduction, keeping a basis.
    fn independent_rows(&self) -> GeneratorMatrix {
        let (rr, pivots) = self.rref();
        let k = pivots.len();
        GeneratorMatrix::new(
            self.field.clone(),
            k,
            self.cols,
            rr.data[..k * self.cols].to_vec(),
        )
    }

    /// Shorten at `pos`: codewords that are zero at `pos`, with the
    /// coordinate deleted. Errors if the restriction kills the code.
    pub fn shorten(&self, pos: usize) -> Result<GeneratorMatrix> {
        self.check_pos(pos)?;
        let t = self.tables();
        let mut m = self.clone();
        // eliminate column pos down to at most one row, then drop that row
        if let Some(sel) = (0..m.rows).find(|&i| m.entry(i, pos) != 0) {
            m.swap_rows(0, sel);
            let inv = t.inv(m.entry(0, pos));
            m.scale_row(&t, 0, inv);
            for i in 1..m.rows {
                if m.entry(i, pos) != 0 {
                    let f = m.entry(i, pos);
                    m.subtract_scaled(&t, i, 0, f);
                }
            }
            m = m.drop_row(0);
        }
        let out = m.drop_col(pos).independent_rows();
        if out.rows == 0 {
            return Err(Error::RankDeficient {
                rank: 0,
                rows: self.rows,
            });
        }
        Ok(out)
    }

    /// Puncture at `pos`: delete the coordinate from every codeword.
    pub fn puncture(&self, pos: usize) -> Result<GeneratorMatrix> {
        self.check_pos(pos)?;
        let out = self.drop_col(pos).independent_rows();
        if out.rows == 0 {
            return Err(Error::RankDeficient {
                rank: 0,
                rows: self.rows,
            });
        }
        Ok(out)
    }

    /// Extend with an overall parity coordinate: the negative of each row sum.
    pub fn extend(&self) -> GeneratorMatrix {
        let t = self.tables();
        let mut data = Vec::with_capacity(self.rows * (self.cols + 1));
        for r in 0..self.rows {
            let row = self.row(r);
            data.extend_from_slice(row);
            let sum = row.iter().fold(0u8, |acc, &x| t.add(acc, x));
            data.push(t.neg(sum));
        }
        GeneratorMatrix::new(self.field.clone(), self.rows, self.cols + 1, data)
    }

    fn check_pos(&self, pos: usize) -> Result<()> {
        if pos >= self.cols {
            return Err(Error::Invalid {
                what: "position",
                detail: format!("{pos} out of range for length {}", self.cols),
            });
        }
        Ok(())
    }

    fn drop_col(&self, pos: usize) -> GeneratorMatrix {
        let mut data = Vec::with_capacity(self.rows * (self.cols - 1));
        for r in 0..self.rows {
            let row = self.row(r);
            data.extend_from_slice(&row[..pos]);
            data.extend_from_slice(&row[pos + 1..]);
        }
        GeneratorMatrix::new(self.field.clone(), self.rows, self.cols - 1, data)
    }

    fn drop_row(&self, r: usize) -> GeneratorMatrix {
        let mut data = self.data.clone();
        data.drain(r * self.cols..(r + 1) * self.cols);
        GeneratorMatrix::new(self.field.clone(), self.rows - 1, self.cols, data)
    }

    /// A generator matrix of the dual code, from the RREF of this one.
    pub fn dual(&self) -> GeneratorMatrix {
        let (rr, pivots) = self.rref();
        let k = pivots.len();
        let n = self.cols;
        let t = self.tables();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; n];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let mut data = vec![0u8; free.len() * n];
        for (out_r, &f) in free.iter().enumerate() {
            data[out_r * n + f] = 1;
            for (r, &p) in pivots.iter().enumerate().take(k) {
                data[out_r * n + p] = t.neg(rr.entry(r, f));
            }
        }
        GeneratorMatrix::new(self.field.clone(), free.len(), n, data)
    }
}

/// Membership testing against a row space (reduce and check for zero).
pub struct RowSpace {
    rref: GeneratorMatrix,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(m: &GeneratorMatrix) -> RowSpace {
        let (rref, pivots) = m.rref();
        RowSpace { rref, pivots }
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        assert_eq!(v.len(), self.rref.cols());
        let t = self.rref.tables();
        let mut w = v.to_vec();
        for (r, &c) in self.pivots.iter().enumerate() {
            if w[c] != 0 {
                let f = w[c];
                let mul = t.mul_row(t.neg(f));
                let row = self.rref.row(r);
                for (wi, &ri) in w.iter_mut().zip(row) {
                    *wi = t.add(*wi, mul[ri as usize]);
                }
            }
        }
        w.iter().all(|&x| x == 0)
    }
}

/// A cyclic code ⟨g⟩ with g a monic divisor of x^n − 1 and check polynomial
/// h = (x^n − 1)/g.
#[derive(Clone, Debug)]
pub struct CyclicCodeSpec {
    field: Arc<Field>,
    n: usize,
    g: Poly,
    h: Poly,
}

impl CyclicCodeSpec {
    pub fn new(field: &Arc<Field>, n: usize, g: &Poly) -> Result<CyclicCodeSpec> {
        let g = g.monic();
        let modulus = Poly::x_pow_minus_one(field, n);
        let (h, r) = modulus.divmod(&g)?;
        if !r.is_zero() {
            return Err(Error::NotADivisor { n: n as u64 });
        }
        Ok(CyclicCodeSpec {
            field: field.clone(),
            n,
            g,
            h,
        })
    }

    /// Define the code by its check polynomial instead.
    pub fn from_check(field: &Arc<Field>, n: usize, h: &Poly) -> Result<CyclicCodeSpec> {
        let h = h.monic();
        let modulus = Poly::x_pow_minus_one(field, n);
        let (g, r) = modulus.divmod(&h)?;
        if !r.is_zero() {
            return Err(Error::NotADivisor { n: n as u64 });
        }
        Ok(CyclicCodeSpec {
            field: field.clone(),
            n,
            g: g.monic(),
            h,
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn generator(&self) -> &Poly {
        &self.g
    }

    pub fn check(&self) -> &Poly {
        &self.h
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.n - self.g.degree().unwrap_or(0)
    }

    pub fn matrix(&self) -> Result<GeneratorMatrix> {
        GeneratorMatrix::circulant(&self.g, self.n)
    }
}

/// A 1-generator quasi-cyclic code of index ℓ with generator
/// (g, g·f_2, ..., g·f_ℓ) over blocks of length m.
#[derive(Clone, Debug)]
pub struct QcCodeSpec {
    field: Arc<Field>,
    m: usize,
    g: Poly,
    h: Poly,
    fs: Vec<Poly>,
}

impl QcCodeSpec {
    pub fn new(field: &Arc<Field>, m: usize, g: &Poly, fs: Vec<Poly>) -> Result<QcCodeSpec> {
        let cyclic = CyclicCodeSpec::new(field, m, g)?;
        for f in &fs {
            if f.degree().is_some_and(|d| d >= m) {
                return Err(Error::Invalid {
                    what: "multiplier polynomial",
                    detail: format!("degree must be below the block length {m}"),
                });
            }
            let gcd = f.gcd(cyclic.check())?;
            if gcd.degree() != Some(0) {
                return Err(Error::Invalid {
                    what: "multiplier polynomial",
                    detail: "multiplier shares a factor with the check polynomial".into(),
                });
            }
        }
        Ok(QcCodeSpec {
            field: field.clone(),
            m,
            g: cyclic.g,
            h: cyclic.h,
            fs,
        })
    }

    pub fn index(&self) -> usize {
        self.fs.len() + 1
    }

    pub fn block_length(&self) -> usize {
        self.m
    }

    pub fn length(&self) -> usize {
        self.m * self.index()
    }

    pub fn dimension(&self) -> usize {
        self.m - self.g.degree().unwrap_or(0)
    }

    pub fn generator(&self) -> &Poly {
        &self.g
    }

    pub fn check(&self) -> &Poly {
        &self.h
    }

    pub fn multipliers(&self) -> &[Poly] {
        &self.fs
    }

    /// Row r concatenates x^r·g with x^r·g·f_j mod x^m−1 for each block.
    pub fn matrix(&self) -> Result<GeneratorMatrix> {
        let k = self.dimension();
        let m = self.m;
        let ell = self.index();
        let n = m * ell;
        let mut blocks = Vec::with_capacity(ell);
        blocks.push(self.g.clone());
        for f in &self.fs {
            blocks.push(self.g.mulmod(f, m)?);
        }
        let mut data = vec![0u8; k * n];
        for r in 0..k {
            for (bi, block) in blocks.iter().enumerate() {
                // x^r * block mod x^m - 1: rotate indices by r
                for (i, c) in block.coeffs().iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let col = bi * m + (i + r) % m;
                    data[r * n + col] = c.index() as u8;
                }
            }
        }
        Ok(GeneratorMatrix::new(self.field.clone(), k, n, data))
    }
}

/// Counts of codewords by Hamming weight, A_0..A_n, walking the whole
/// message space. Errors when q^k exceeds `cap`.
pub fn weight_enumerator(m: &GeneratorMatrix, cap: u128) -> Result<Vec<u64>> {
    let q = m.field().order() as u128;
    let size = q.checked_pow(m.rows() as u32).ok_or(Error::MessageSpaceTooLarge {
        size: u128::MAX,
        cap,
    })?;
    if size > cap {
        return Err(Error::MessageSpaceTooLarge { size, cap });
    }
    let t = m.tables();
    let n = m.cols();
    let k = m.rows();
    let qs = t.q as u8;
    let mut counts = vec![0u64; n + 1];
    let mut digits = vec![0u8; k];
    let mut cw = vec![0u8; n];
    counts[0] += 1; // the zero message
    'outer: loop {
        // odometer step: advance digit j, updating cw by (new - old) * row_j
        let mut j = 0;
        loop {
            if j == k {
                break 'outer;
            }
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
        counts[cw.iter().filter(|&&x| x != 0).count()] += 1;
    }
    Ok(counts)
}

/// Weight enumerator via whichever of the code or its dual has the smaller
/// message space, using the MacWilliams transform for the dual route.
pub fn weight_enumerator_auto(m: &GeneratorMatrix, cap: u128) -> Result<Vec<u64>> {
    let k = m.rows();
    let n = m.cols();
    if k <= n - k || n > 40 {
        return weight_enumerator(m, cap);
    }
    let dual = m.dual();
    let dual_counts = weight_enumerator(&dual, cap)?;
    Ok(macwilliams(&dual_counts, n, m.field().order()))
}

/// MacWilliams transform: weight enumerator of the dual of a code whose
/// enumerator is `counts`. Exact in i128; valid for the small lengths the
/// soundness suites use.
pub fn macwilliams(counts: &[u64], n: usize, q: u64) -> Vec<u64> {
    let mut binom = vec![vec![0i128; n + 1]; n + 1];
    for i in 0..=n {
        binom[i][0] = 1;
        for j in 1..=i {
            binom[i][j] = binom[i - 1][j - 1] + if j < i { binom[i - 1][j] } else { 0 };
        }
    }
    let size: i128 = counts.iter().map(|&c| c as i128).sum();
    let mut out = vec![0u64; n + 1];
    for j in 0..=n {
        let mut acc: i128 = 0;
        for (w, &aw) in counts.iter().enumerate() {
            if aw == 0 {
                continue;
            }
            // Krawtchouk K_j(w) = sum_s (-1)^s (q-1)^(j-s) C(w,s) C(n-w,j-s)
            let mut kr: i128 = 0;
            for s in 0..=j.min(w) {
                if j - s > n - w {
                    continue;
                }
                let mut term = binom[w][s] * binom[n - w][j - s];
                for _ in 0..(j - s) {
                    term *= (q - 1) as i128;
                }
                if s % 2 == 1 {
                    term = -term;
                }
                kr += term;
            }
            acc += aw as i128 * kr;
        }
        debug_assert_eq!(acc % size, 0, "MacWilliams transform must be integral");
        out[j] = (acc / size) as u64;
    }
    out
}

/// Smallest positive weight with a nonzero count.
pub fn min_positive_weight(counts: &[u64]) -> Option<u32> {
    counts
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, &c)| c > 0)
        .map(|(w, _)| w as u32)
}

// ---------------------------------------------------------------------------
// Code records and construction provenance
// ---------------------------------------------------------------------------

/// How confident the distance claim is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DistanceCert {
    /// value is the exact minimum distance
    Exact,
    /// value is the weight of a stored codeword; d ≤ value
    Upper,
    /// value is the best upper bound; the true d is ≥ lower
    Bounds { lower: u32 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceClaim {
    pub value: u32,
    pub cert: DistanceCert,
}

impl DistanceClaim {
    /// The proven lower bound on the distance.
    pub fn proven_lower(&self) -> u32 {
        match self.cert {
            DistanceCert::Exact => self.value,
            DistanceCert::Upper => 1,
            DistanceCert::Bounds { lower } => lower,
        }
    }

    pub fn cert_token(&self) -> String {
        match self.cert {
            DistanceCert::Exact => "exact".into(),
            DistanceCert::Upper => "upper".into(),
            DistanceCert::Bounds { lower } => format!("lb{lower}"),
        }
    }

    pub fn parse_token(value: u32, tok: &str) -> Result<DistanceClaim> {
        let cert = match tok {
            "exact" => DistanceCert::Exact,
            "upper" => DistanceCert::Upper,
            t => {
                let lower = t
                    .strip_prefix("lb")
                    .and_then(|x| x.parse().ok())
                    .ok_or_else(|| Error::Invalid {
                        what: "certificate token",
                        detail: t.to_string(),
                    })?;
                DistanceCert::Bounds { lower }
            }
        };
        Ok(DistanceClaim { value, cert })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BklcFlag {
    New,
    Meets,
    Below,
    Unknown,
}

impl BklcFlag {
    pub fn token(self) -> &'static str {
        match self {
            BklcFlag::New => "new",
            BklcFlag::Meets => "meets",
            BklcFlag::Below => "below",
            BklcFlag::Unknown => "unknown",
        }
    }

    pub fn parse(tok: &str) -> Result<BklcFlag> {
        Ok(match tok {
            "new" => BklcFlag::New,
            "meets" => BklcFlag::Meets,
            "below" => BklcFlag::Below,
            "unknown" => BklcFlag::Unknown,
            t => {
                return Err(Error::Invalid {
                    what: "bklc flag",
                    detail: t.to_string(),
                })
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum DeriveStep {
    Shorten(usize),
    Puncture(usize),
    Extend,
}

/// Construction provenance, replayable into a generator matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Construction {
    Cyclic {
        g: String,
    },
    Qc {
        m: usize,
        ell: usize,
        g: String,
        fs: Vec<String>,
    },
    Derived {
        base: Box<Construction>,
        steps: Vec<DeriveStep>,
    },
}

impl Construction {
    pub fn derived(self, step: DeriveStep) -> Construction {
        match self {
            Construction::Derived { base, mut steps } => {
                steps.push(step);
                Construction::Derived { base, steps }
            }
            other => Construction::Derived {
                base: Box::new(other),
                steps: vec![step],
            },
        }
    }

    pub fn build(&self, field: &Arc<Field>, n_hint: usize) -> Result<GeneratorMatrix> {
        match self {
            Construction::Cyclic { g } => {
                let g = crate::text::parse_poly(field, g)?;
                CyclicCodeSpec::new(field, n_hint, &g)?.matrix()
            }
            Construction::Qc { m, g, fs, .. } => {
                let g = crate::text::parse_poly(field, g)?;
                let fs = fs
                    .iter()
                    .map(|f| crate::text::parse_poly(field, f))
                    .collect::<Result<Vec<_>>>()?;
                QcCodeSpec::new(field, *m, &g, fs)?.matrix()
            }
            Construction::Derived { base, steps } => {
                let base_len = steps.iter().fold(n_hint, |n, s| match s {
                    DeriveStep::Shorten(_) | DeriveStep::Puncture(_) => n + 1,
                    DeriveStep::Extend => n - 1,
                });
                let mut m = base.build(field, base_len)?;
                for step in steps {
                    m = match step {
                        DeriveStep::Shorten(pos) => m.shorten(*pos)?,
                        DeriveStep::Puncture(pos) => m.puncture(*pos)?,
                        DeriveStep::Extend => m.extend(),
                    };
                }
                Ok(m)
            }
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Construction::Cyclic { g } => write!(f, "cyclic g={g}"),
            Construction::Qc { m, ell, g, fs } => {
                write!(f, "qc m={m} l={ell} g={g}")?;
                for (i, fi) in fs.iter().enumerate() {
                    write!(f, " f{}={fi}", i + 2)?;
                }
                Ok(())
            }
            Construction::Derived { base, steps } => {
                write!(f, "{base}")?;
                for s in steps {
                    match s {
                        DeriveStep::Shorten(p) => write!(f, " |shorten@{p}")?,
                        DeriveStep::Puncture(p) => write!(f, " |puncture@{p}")?,
                        DeriveStep::Extend => write!(f, " |extend")?,
                    }
                }
                Ok(())
            }
        }
    }
}

impl Construction {
    pub fn parse(s: &str) -> Result<Construction> {
        let mut parts = s.split('|').map(str::trim);
        let head = parts.next().ok_or_else(|| Error::Invalid {
            what: "construction",
            detail: "empty".into(),
        })?;
        let mut base = Self::parse_head(head)?;
        for step in parts {
            let step = if let Some(p) = step.strip_prefix("shorten@") {
                DeriveStep::Shorten(p.parse().map_err(|_| Error::Invalid {
                    what: "construction",
                    detail: step.to_string(),
                })?)
            } else if let Some(p) = step.strip_prefix("puncture@") {
                DeriveStep::Puncture(p.parse().map_err(|_| Error::Invalid {
                    what: "construction",
                    detail: step.to_string(),
                })?)
            } else if step == "extend" {
                DeriveStep::Extend
            } else {
                return Err(Error::Invalid {
                    what: "construction",
                    detail: step.to_string(),
                });
            };
            base = base.derived(step);
        }
        Ok(base)
    }

    fn parse_head(head: &str) -> Result<Construction> {
        let bad = |detail: &str| Error::Invalid {
            what: "construction",
            detail: detail.to_string(),
        };
        let mut tokens = head.split_whitespace();
        match tokens.next() {
            Some("cyclic") => {
                let g = tokens
                    .next()
                    .and_then(|t| t.strip_prefix("g="))
                    .ok_or_else(|| bad("cyclic needs g=[...]"))?;
                Ok(Construction::Cyclic { g: g.to_string() })
            }
            Some("qc") => {
                let mut m = None;
                let mut ell = None;
                let mut g = None;
                let mut fs = Vec::new();
                for tok in tokens {
                    if let Some(v) = tok.strip_prefix("m=") {
                        m = v.parse().ok();
                    } else if let Some(v) = tok.strip_prefix("l=") {
                        ell = v.parse().ok();
                    } else if let Some(v) = tok.strip_prefix("g=") {
                        g = Some(v.to_string());
                    } else if tok.starts_with('f') && tok.contains('=') {
                        fs.push(tok.split_once('=').unwrap().1.to_string());
                    } else {
                        return Err(bad(tok));
                    }
                }
                Ok(Construction::Qc {
                    m: m.ok_or_else(|| bad("qc needs m="))?,
                    ell: ell.ok_or_else(|| bad("qc needs l="))?,
                    g: g.ok_or_else(|| bad("qc needs g="))?,
                    fs,
                })
            }
            _ => Err(bad(head)),
        }
    }
}

/// One searched or verified code with its provenance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CodeRecord {
    pub q: u64,
    pub n: usize,
    pub k: usize,
    pub claim: DistanceClaim,
    /// minimum-weight codeword found (empty when none was stored)
    pub witness: Vec<u8>,
    pub construction: Construction,
    pub seed: Option<u64>,
    pub bklc: BklcFlag,
}
