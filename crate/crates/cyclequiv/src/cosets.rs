//! q-cyclotomic cosets, the repeated-root length split, and the P map
//! between coset multisets and divisors of x^n − 1.
//!
//! The coset structure itself is cheap and always available; the fixed
//! primitive root of unity and the per-coset irreducible factors need the
//! splitting field GF(q^t), which can be enormous at awkward lengths, so
//! they are built lazily on first use.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::field::{gcd, primitive_root_of_unity, Field, FieldElement};
use crate::poly::Poly;

/// n = n_coprime · p^exponent with gcd(p, n_coprime) = 1, where p is the
/// field characteristic. Over GF(q), x^n − 1 = (x^{n_coprime} − 1)^{p^exponent},
/// so `multiplicity` is how often each irreducible factor repeats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LengthSplit {
    pub n: u64,
    pub q: u64,
    pub p: u64,
    pub coprime: u64,
    pub exponent: u32,
    pub multiplicity: u64,
}

impl LengthSplit {
    pub fn new(n: u64, field: &Field) -> LengthSplit {
        assert!(n >= 1);
        let p = field.characteristic();
        let mut coprime = n;
        let mut exponent = 0u32;
        while coprime % p == 0 {
            coprime /= p;
            exponent += 1;
        }
        LengthSplit {
            n,
            q: field.order(),
            p,
            coprime,
            exponent,
            multiplicity: p.pow(exponent),
        }
    }
}

/// Orbits of z ↦ z·multiplier on Z_modulus, sorted internally and ordered by
/// minimal element. Requires gcd(modulus, multiplier) = 1.
pub fn cyclotomic_cosets(modulus: u64, multiplier: u64) -> Result<Vec<Vec<u64>>> {
    if modulus == 0 || gcd(modulus, multiplier) != 1 {
        return Err(Error::NotCoprime {
            n: modulus,
            p: multiplier,
        });
    }
    let m = multiplier % modulus;
    let mut seen = vec![false; modulus as usize];
    let mut out = Vec::new();
    for s in 0..modulus {
        if seen[s as usize] {
            continue;
        }
        let mut coset = Vec::new();
        let mut x = s;
        while !seen[x as usize] {
            seen[x as usize] = true;
            coset.push(x);
            x = x * m % modulus;
        }
        coset.sort_unstable();
        out.push(coset);
    }
    Ok(out)
}

/// The lazily-built splitting data: α and the irreducible factor P(S) of
/// each coset.
struct Splitting {
    alpha_field: Arc<Field>,
    alpha: FieldElement,
    factors: Vec<Poly>,
}

/// The full coset structure for cyclic codes of length n over a field.
pub struct CosetTable {
    field: Arc<Field>,
    split: LengthSplit,
    cosets: Vec<Vec<u64>>,
    coset_of: Vec<u32>,
    splitting: OnceLock<std::result::Result<Splitting, Error>>,
}

impl fmt::Debug for CosetTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CosetTable(q={}, n={}, {} cosets)",
            self.split.q,
            self.split.n,
            self.cosets.len()
        )
    }
}

fn clone_error(e: &Error) -> Error {
    match e {
        Error::FieldTooLarge { size, bound } => Error::FieldTooLarge {
            size: *size,
            bound: *bound,
        },
        Error::NotCoprime { n, p } => Error::NotCoprime { n: *n, p: *p },
        other => Error::Invalid {
            what: "splitting field",
            detail: other.to_string(),
        },
    }
}

impl CosetTable {
    pub fn new(field: &Arc<Field>, n: u64) -> Result<Arc<CosetTable>> {
        let split = LengthSplit::new(n, field);
        let cosets = cyclotomic_cosets(split.coprime, field.order() % split.coprime)?;
        let mut coset_of = vec![0u32; split.coprime as usize];
        for (idx, coset) in cosets.iter().enumerate() {
            for &z in coset {
                coset_of[z as usize] = idx as u32;
            }
        }
        Ok(Arc::new(CosetTable {
            field: field.clone(),
            split,
            cosets,
            coset_of,
            splitting: OnceLock::new(),
        }))
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn split(&self) -> &LengthSplit {
        &self.split
    }

    pub fn cosets(&self) -> &[Vec<u64>] {
        &self.cosets
    }

    pub fn coset_count(&self) -> usize {
        self.cosets.len()
    }

    /// Index of the coset containing residue z.
    pub fn coset_of(&self, z: u64) -> usize {
        self.coset_of[z as usize] as usize
    }

    fn splitting(&self) -> Result<&Splitting> {
        let r = self.splitting.get_or_init(|| {
            let (alpha_field, alpha) = primitive_root_of_unity(&self.field, self.split.coprime)?;
            let factors = self
                .cosets
                .iter()
                .map(|coset| coset_polynomial(&self.field, &alpha_field, alpha, coset))
                .collect::<Result<Vec<_>>>()?;
            Ok(Splitting {
                alpha_field,
                alpha,
                factors,
            })
        });
        match r {
            Ok(s) => Ok(s),
            Err(e) => Err(clone_error(e)),
        }
    }

    /// The fixed primitive n_coprime-th root of unity and its field.
    pub fn alpha(&self) -> Result<(&Arc<Field>, FieldElement)> {
        let s = self.splitting()?;
        Ok((&s.alpha_field, s.alpha))
    }

    /// The irreducible factor P(S) for coset index j.
    pub fn factor(&self, j: usize) -> Result<&Poly> {
        Ok(&self.splitting()?.factors[j])
    }

    pub fn same_table(&self, other: &CosetTable) -> bool {
        self.split == other.split && *self.field == *other.field
    }

    /// The multiset of all cosets at full multiplicity (generator x^n − 1,
    /// the zero code).
    pub fn full_multiset(self: &Arc<Self>) -> CosetMultiset {
        let mults = vec![self.split.multiplicity as u32; self.cosets.len()];
        CosetMultiset::new(self.clone(), mults).expect("full multiplicity is within the cap")
    }
}

/// P(S) = ∏_{i∈S} (x − α^i), computed over the extension and projected back;
/// the projection failing would mean the coset is not closed under
/// multiplication by q.
fn coset_polynomial(
    field: &Arc<Field>,
    alpha_field: &Arc<Field>,
    alpha: FieldElement,
    coset: &[u64],
) -> Result<Poly> {
    let mut prod = Poly::one(alpha_field.clone());
    for &i in coset {
        let root = alpha_field.pow(alpha, i);
        let factor = Poly::from_coeffs(
            alpha_field.clone(),
            vec![alpha_field.neg(root), alpha_field.one()],
        );
        prod = prod.mul(&factor)?;
    }
    if **alpha_field == **field {
        return Ok(prod);
    }
    prod.project_to_base()
}

/// A union of not-necessarily-distinct cyclotomic cosets, stored canonically
/// as one multiplicity per coset (so multiset equality is vector equality).
#[derive(Clone)]
pub struct CosetMultiset {
    table: Arc<CosetTable>,
    mults: Vec<u32>,
}

impl PartialEq for CosetMultiset {
    fn eq(&self, other: &Self) -> bool {
        self.table.same_table(&other.table) && self.mults == other.mults
    }
}
impl Eq for CosetMultiset {}

impl fmt::Debug for CosetMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::text::format_multiset(self))
    }
}

impl fmt::Display for CosetMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::text::format_multiset(self))
    }
}

impl CosetMultiset {
    pub fn new(table: Arc<CosetTable>, mults: Vec<u32>) -> Result<CosetMultiset> {
        if mults.len() != table.coset_count() {
            return Err(Error::Invalid {
                what: "multiplicity vector",
                detail: format!(
                    "expected {} entries, got {}",
                    table.coset_count(),
                    mults.len()
                ),
            });
        }
        let cap = table.split().multiplicity;
        if let Some(&m) = mults.iter().find(|&&m| m as u64 > cap) {
            return Err(Error::MultiplicityTooLarge { got: m, cap });
        }
        Ok(CosetMultiset { table, mults })
    }

    pub fn table(&self) -> &Arc<CosetTable> {
        &self.table
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.mults
    }

    pub fn is_empty(&self) -> bool {
        self.mults.iter().all(|&m| m == 0)
    }

    /// Total size counted with multiplicity = degree of the polynomial.
    pub fn total_size(&self) -> u64 {
        self.mults
            .iter()
            .zip(self.table.cosets())
            .map(|(&m, c)| m as u64 * c.len() as u64)
            .sum()
    }

    /// Multiplicity of each residue of Z_{n_coprime}.
    pub fn element_multiplicities(&self) -> Vec<u32> {
        let nq = self.table.split().coprime as usize;
        let mut out = vec![0u32; nq];
        for (coset, &m) in self.table.cosets().iter().zip(&self.mults) {
            if m == 0 {
                continue;
            }
            for &z in coset {
                out[z as usize] = m;
            }
        }
        out
    }

    /// P(MS): the divisor of x^n − 1 this multiset corresponds to.
    pub fn to_poly(&self) -> Result<Poly> {
        let field = self.table.field();
        let mut prod = Poly::one(field.clone());
        for (j, &m) in self.mults.iter().enumerate() {
            for _ in 0..m {
                prod = prod.mul(self.table.factor(j)?)?;
            }
        }
        Ok(prod)
    }

    /// Inverse of the P map: recover multiplicities by repeated exact
    /// division by each cached irreducible factor. The input must be a
    /// divisor of x^n − 1 (up to a scalar).
    pub fn from_poly(table: &Arc<CosetTable>, g: &Poly) -> Result<CosetMultiset> {
        if g.is_zero() {
            return Err(Error::NotADivisor {
                n: table.split().n,
            });
        }
        let mut rem = g.monic();
        let cap = table.split().multiplicity as u32;
        let mut mults = vec![0u32; table.coset_count()];
        for j in 0..table.coset_count() {
            let factor = table.factor(j)?;
            while mults[j] < cap {
                let (q, r) = rem.divmod(factor)?;
                if !r.is_zero() {
                    break;
                }
                rem = q;
                mults[j] += 1;
            }
        }
        if rem.degree() != Some(0) {
            return Err(Error::NotADivisor {
                n: table.split().n,
            });
        }
        CosetMultiset::new(table.clone(), mults)
    }
}
