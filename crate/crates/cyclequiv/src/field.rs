//! Finite fields GF(p^m) and their extensions.
//!
//! Elements are stored as integer indices in `0..q`. For a prime field the
//! index is the residue itself; for an extension of degree `t` over a base
//! field of order `b`, the base-`b` digits of the index are the coordinates
//! in the power basis of the defining modulus (low digit = low degree).
//! Construction is deterministic: the modulus is the lexicographically least
//! monic irreducible (coefficients compared low-degree-first) and the
//! generator is the coordinate-lexicographically least primitive element, so
//! two fields built from the same parameters are always identical.
//!
//! Extensions up to the table bound get exp/log tables and O(1)
//! multiplication; larger ones (needed only for roots of unity at awkward
//! lengths) fall back to digit-vector arithmetic.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default cap on the order of any table-backed field.
pub const DEFAULT_ORDER_BOUND: u64 = 1 << 20;

/// Extensions above the table bound fall back to digit-vector arithmetic
/// with no exp/log tables; above this they are refused outright.
pub const TABLELESS_ORDER_BOUND: u64 = 1 << 48;

/// An element of a [`Field`], stored as its index. Only meaningful together
/// with the field it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(pub u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// A finite field: either GF(p) or a degree-`t` extension of another field.
pub struct Field {
    p: u64,
    order: u64,
    degree_over_prime: u32,
    base: Option<Arc<Field>>,
    ext_degree: u32,
    /// Modulus coefficients c_0..c_{t-1} over the base (leading 1 implicit).
    modulus: Vec<u64>,
    generator: u64,
    /// exp[i] = generator^i; empty for prime and tableless fields.
    exp: Vec<u64>,
    /// log[x] defined for x != 0; log[0] unused.
    log: Vec<u64>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.order)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.order == other.order
            && self.ext_degree == other.ext_degree
            && self.modulus == other.modulus
            && match (&self.base, &other.base) {
                (None, None) => true,
                (Some(a), Some(b)) => a == b,
                _ => false,
            }
    }
}
impl Eq for Field {}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Field {
    /// GF(p^m) with the default order bound.
    pub fn new(p: u64, m: u32) -> Result<Arc<Field>> {
        Self::with_bound(p, m, DEFAULT_ORDER_BOUND)
    }

    /// GF(p^m), refusing orders above `bound`.
    pub fn with_bound(p: u64, m: u32, bound: u64) -> Result<Arc<Field>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::Invalid {
                what: "extension degree",
                detail: "degree must be at least 1".into(),
            });
        }
        let order = (p as u128).checked_pow(m).unwrap_or(u128::MAX);
        if order > bound as u128 {
            return Err(Error::FieldTooLarge { size: order, bound });
        }
        let prime = Arc::new(Field::prime_field(p));
        if m == 1 {
            Ok(prime)
        } else {
            Self::extension_with_bound(&prime, m, bound)
        }
    }

    /// Degree-`t` extension of `base`. Orders up to `table_bound` are
    /// table-backed; beyond that, arithmetic falls back to digit vectors up
    /// to [`TABLELESS_ORDER_BOUND`].
    pub fn extension(base: &Arc<Field>, t: u32) -> Result<Arc<Field>> {
        Self::extension_with_bound(base, t, DEFAULT_ORDER_BOUND)
    }

    pub fn extension_with_bound(
        base: &Arc<Field>,
        t: u32,
        table_bound: u64,
    ) -> Result<Arc<Field>> {
        if t == 0 {
            return Err(Error::Invalid {
                what: "extension degree",
                detail: "degree must be at least 1".into(),
            });
        }
        if t == 1 {
            return Ok(base.clone());
        }
        let order = (base.order as u128).checked_pow(t).unwrap_or(u128::MAX);
        if order > TABLELESS_ORDER_BOUND as u128 {
            return Err(Error::FieldTooLarge {
                size: order,
                bound: TABLELESS_ORDER_BOUND,
            });
        }
        let order = order as u64;
        let mut field = Field {
            p: base.p,
            order,
            degree_over_prime: base.degree_over_prime * t,
            base: Some(base.clone()),
            ext_degree: t,
            modulus: Vec::new(),
            generator: 0,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.modulus = field.find_modulus();
        field.generator = field.find_generator();
        if order <= table_bound {
            field.build_tables();
        }
        Ok(Arc::new(field))
    }

    fn prime_field(p: u64) -> Field {
        let generator = if p == 2 {
            1
        } else {
            let factors = prime_factors(p - 1);
            (2..p)
                .find(|&g| factors.iter().all(|&r| pow_mod(g, (p - 1) / r, p) != 1))
                .expect("a primitive root exists for every prime")
        };
        Field {
            p,
            order: p,
            degree_over_prime: 1,
            base: None,
            ext_degree: 1,
            modulus: Vec::new(),
            generator,
            exp: Vec::new(),
            log: Vec::new(),
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Degree over the prime field GF(p).
    pub fn degree(&self) -> u32 {
        self.degree_over_prime
    }

    pub fn is_prime_field(&self) -> bool {
        self.base.is_none()
    }

    pub fn base(&self) -> Option<&Arc<Field>> {
        self.base.as_ref()
    }

    /// Modulus coefficients c_0..c_{t-1} over the base field (monic, leading
    /// coefficient implicit). Empty for prime fields.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> FieldElement {
        FieldElement(self.generator)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    pub fn element(&self, index: u64) -> FieldElement {
        assert!(index < self.order, "element index out of range");
        FieldElement(index)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order).map(FieldElement)
    }

    /// Coordinates over GF(p) in the power basis (length = degree).
    pub fn coords(&self, x: FieldElement) -> Vec<u64> {
        let mut v = x.0;
        let mut out = Vec::with_capacity(self.degree_over_prime as usize);
        for _ in 0..self.degree_over_prime {
            out.push(v % self.p);
            v /= self.p;
        }
        out
    }

    fn base_order(&self) -> u64 {
        self.base.as_ref().map(|f| f.order).unwrap_or(self.p)
    }

    fn digits(&self, x: u64) -> Vec<u64> {
        let b = self.base_order();
        let mut v = x;
        let mut out = Vec::with_capacity(self.ext_degree as usize);
        for _ in 0..self.ext_degree {
            out.push(v % b);
            v /= b;
        }
        out
    }

    fn undigits(&self, ds: &[u64]) -> u64 {
        let b = self.base_order();
        let mut v = 0u64;
        for &d in ds.iter().rev() {
            v = v * b + d;
        }
        v
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.base {
            None => FieldElement((a.0 + b.0) % self.p),
            Some(base) => {
                let da = self.digits(a.0);
                let db = self.digits(b.0);
                let sum: Vec<u64> = da
                    .iter()
                    .zip(&db)
                    .map(|(&x, &y)| base.add(FieldElement(x), FieldElement(y)).0)
                    .collect();
                FieldElement(self.undigits(&sum))
            }
        }
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        match &self.base {
            None => FieldElement((self.p - a.0) % self.p),
            Some(base) => {
                let ds: Vec<u64> = self
                    .digits(a.0)
                    .iter()
                    .map(|&x| base.neg(FieldElement(x)).0)
                    .collect();
                FieldElement(self.undigits(&ds))
            }
        }
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.base.is_none() {
            return FieldElement(mul_mod_u64(a.0, b.0, self.p));
        }
        if a.0 == 0 || b.0 == 0 {
            return FieldElement(0);
        }
        if self.exp.is_empty() {
            return FieldElement(self.mul_slow(a.0, b.0));
        }
        let ord = self.order - 1;
        let idx = (self.log[a.0 as usize] + self.log[b.0 as usize]) % ord;
        FieldElement(self.exp[idx as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        match &self.base {
            None => Ok(FieldElement(pow_mod(a.0, self.p - 2, self.p))),
            Some(_) => {
                if self.exp.is_empty() {
                    return Ok(FieldElement(self.pow_slow(a.0, self.order - 2)));
                }
                let ord = self.order - 1;
                let idx = (ord - self.log[a.0 as usize]) % ord;
                Ok(FieldElement(self.exp[idx as usize]))
            }
        }
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return self.one();
        }
        if a.0 == 0 {
            return self.zero();
        }
        match &self.base {
            None => FieldElement(pow_mod(a.0, e % (self.p - 1).max(1), self.p)),
            Some(_) => {
                let ord = self.order - 1;
                let e = e % ord;
                if e == 0 {
                    return self.one();
                }
                if self.exp.is_empty() {
                    return FieldElement(self.pow_slow(a.0, e));
                }
                let idx = mul_mod_u64(self.log[a.0 as usize], e, ord);
                FieldElement(self.exp[idx as usize])
            }
        }
    }

    /// Discrete log base the field generator; `None` for zero and for
    /// tableless fields (which never print through the grammar).
    pub fn log_of(&self, a: FieldElement) -> Option<u64> {
        if a.0 == 0 {
            return None;
        }
        match &self.base {
            None => {
                let mut x = 1u64;
                for i in 0..self.order - 1 {
                    if x == a.0 {
                        return Some(i);
                    }
                    x = x * self.generator % self.p;
                }
                unreachable!("generator is primitive")
            }
            Some(_) => {
                if self.exp.is_empty() {
                    return None;
                }
                Some(self.log[a.0 as usize])
            }
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: FieldElement) -> Result<u64> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let group = self.order - 1;
        let mut ord = group;
        for r in prime_factors(group) {
            while ord % r == 0 && self.pow(a, ord / r) == self.one() {
                ord /= r;
            }
        }
        Ok(ord)
    }

    // ---- digit-vector arithmetic: construction and tableless fields ----

    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        let base = self.base.as_ref().expect("slow mul is for extensions");
        let t = self.ext_degree as usize;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * t - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                let term = base.mul(FieldElement(x), FieldElement(y));
                prod[i + j] = base.add(FieldElement(prod[i + j]), term).0;
            }
        }
        for d in (t..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &m) in self.modulus.iter().enumerate() {
                let term = base.mul(FieldElement(c), FieldElement(m));
                prod[d - t + i] = base.sub(FieldElement(prod[d - t + i]), term).0;
            }
        }
        self.undigits(&prod[..t])
    }

    fn pow_slow(&self, a: u64, mut e: u64) -> u64 {
        let mut result = 1u64;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul_slow(result, b);
            }
            b = self.mul_slow(b, b);
            e >>= 1;
        }
        result
    }

    /// Lex-least monic irreducible of degree t over the base, coefficients
    /// compared low-degree-first. The constant coefficient starts at 1:
    /// anything with a zero constant term is divisible by x.
    fn find_modulus(&self) -> Vec<u64> {
        let base = self.base.as_ref().unwrap();
        let t = self.ext_degree as usize;
        let b = base.order;
        let mut cand = vec![0u64; t];
        cand[0] = 1;
        loop {
            if poly_is_irreducible(base, &cand) {
                return cand;
            }
            // low-degree coefficient is most significant in the ordering
            let mut i = t;
            loop {
                assert!(i > 0, "an irreducible polynomial of each degree exists");
                i -= 1;
                cand[i] += 1;
                if cand[i] < b {
                    break;
                }
                cand[i] = 0;
            }
        }
    }

    /// Coordinate-lexicographically least primitive element (coordinate 0
    /// compared first), walked with an odometer so large fields never
    /// materialize their element list.
    fn find_generator(&self) -> u64 {
        let group = self.order - 1;
        let factors = prime_factors(group);
        let b = self.base_order();
        let t = self.ext_degree as usize;
        let mut ds = vec![0u64; t];
        loop {
            // odometer with the last coordinate fastest = coordinate-lex order
            let mut i = t;
            loop {
                assert!(i > 0, "the multiplicative group is cyclic");
                i -= 1;
                ds[i] += 1;
                if ds[i] < b {
                    break;
                }
                ds[i] = 0;
            }
            let idx = self.undigits(&ds);
            if idx == 0 {
                continue;
            }
            if factors
                .iter()
                .all(|&r| self.pow_slow(idx, group / r) != 1)
            {
                return idx;
            }
        }
    }

    fn build_tables(&mut self) {
        let group = self.order - 1;
        let mut exp = vec![0u64; self.order as usize];
        let mut log = vec![0u64; self.order as usize];
        exp[0] = 1;
        for i in 1..group as usize {
            exp[i] = self.mul_slow(exp[i - 1], self.generator);
        }
        for (i, &x) in exp.iter().enumerate().take(group as usize) {
            log[x as usize] = i as u64;
        }
        self.exp = exp;
        self.log = log;
    }

    /// Dense add/mul/neg lookup tables for hot loops; only for orders up to
    /// 16 (the code machinery never goes past GF(9)).
    pub fn small_tables(&self) -> Option<SmallTables> {
        if self.order > 16 {
            return None;
        }
        let q = self.order as usize;
        let mut add = [0u8; 256];
        let mut mul = [0u8; 256];
        let mut neg = [0u8; 16];
        let mut inv = [0u8; 16];
        for a in 0..q {
            neg[a] = self.neg(FieldElement(a as u64)).0 as u8;
            if a != 0 {
                inv[a] = self.inv(FieldElement(a as u64)).unwrap().0 as u8;
            }
            for b in 0..q {
                add[(a << 4) | b] =
                    self.add(FieldElement(a as u64), FieldElement(b as u64)).0 as u8;
                mul[(a << 4) | b] =
                    self.mul(FieldElement(a as u64), FieldElement(b as u64)).0 as u8;
            }
        }
        Some(SmallTables {
            q,
            add,
            mul,
            neg,
            inv,
        })
    }
}

/// Dense arithmetic tables for a small field, stored with a fixed stride of
/// 16 so every lookup is provably in bounds after a 4-bit mask.
pub struct SmallTables {
    pub q: usize,
    add: [u8; 256],
    mul: [u8; 256],
    neg: [u8; 16],
    inv: [u8; 16],
}

impl SmallTables {
    #[inline(always)]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[(((a & 15) as usize) << 4) | ((b & 15) as usize)]
    }

    #[inline(always)]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[(((a & 15) as usize) << 4) | ((b & 15) as usize)]
    }

    #[inline(always)]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[(a & 15) as usize]
    }

    #[inline(always)]
    pub fn inv(&self, a: u8) -> u8 {
        self.inv[(a & 15) as usize]
    }

    /// Fixed-size row of the multiplication table for scalar `a`.
    #[inline(always)]
    pub fn mul_row(&self, a: u8) -> &[u8; 16] {
        let start = ((a & 15) as usize) << 4;
        self.mul[start..start + 16]
            .try_into()
            .expect("rows are 16 bytes by construction")
    }
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod_u64(r, a, m);
        }
        a = mul_mod_u64(a, a, m);
        e >>= 1;
    }
    r
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

// ---- polynomial helpers over digit vectors, for modulus selection only ----

fn ptrim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn padd(f: &Field, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out.push(f.add(FieldElement(x), FieldElement(y)).0);
    }
    ptrim(&mut out);
    out
}

fn pmul(f: &Field, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let t = f.mul(FieldElement(x), FieldElement(y));
            out[i + j] = f.add(FieldElement(out[i + j]), t).0;
        }
    }
    ptrim(&mut out);
    out
}

fn prem(f: &Field, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    ptrim(&mut r);
    let binv = f.inv(FieldElement(*b.last().unwrap())).unwrap();
    while r.len() >= b.len() && !r.is_empty() {
        let c = f.mul(FieldElement(*r.last().unwrap()), binv);
        let d = r.len() - b.len();
        for (i, &y) in b.iter().enumerate() {
            let t = f.mul(c, FieldElement(y));
            r[d + i] = f.sub(FieldElement(r[d + i]), t).0;
        }
        ptrim(&mut r);
    }
    r
}

fn pgcd(f: &Field, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    ptrim(&mut a);
    ptrim(&mut b);
    while !b.is_empty() {
        let r = prem(f, &a, &b);
        a = b;
        b = r;
    }
    a
}

fn ppow_mod(f: &Field, a: &[u64], mut e: u64, m: &[u64]) -> Vec<u64> {
    let mut r = vec![1u64];
    let mut base = prem(f, a, m);
    while e > 0 {
        if e & 1 == 1 {
            r = prem(f, &pmul(f, &r, &base), m);
        }
        base = prem(f, &pmul(f, &base, &base), m);
        e >>= 1;
    }
    r
}

/// Rabin irreducibility test for a monic degree-t candidate (low coefficients
/// given, leading 1 implicit) over `base`.
fn poly_is_irreducible(base: &Field, low: &[u64]) -> bool {
    let t = low.len() as u32;
    let mut f = low.to_vec();
    f.push(1);
    let x = vec![0u64, 1];
    let minus_x = vec![0u64, base.neg(FieldElement(1)).0];
    // x^(q^k) mod f by k rounds of raising to the q-th power
    let xq_pow = |k: u32| -> Vec<u64> {
        let mut r = x.clone();
        for _ in 0..k {
            r = ppow_mod(base, &r, base.order, &f);
        }
        r
    };
    let xt = xq_pow(t);
    if !padd(base, &xt, &minus_x).is_empty() {
        return false;
    }
    for r in prime_factors(t as u64) {
        let xr = xq_pow(t / r as u32);
        let g = pgcd(base, &padd(base, &xr, &minus_x), &f);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Smallest t with n | q^t - 1, the field GF(q^t) containing a primitive
/// n-th root of unity, and that root (deterministic).
pub fn primitive_root_of_unity(field: &Arc<Field>, n: u64) -> Result<(Arc<Field>, FieldElement)> {
    primitive_root_of_unity_with_bound(field, n, DEFAULT_ORDER_BOUND)
}

pub fn primitive_root_of_unity_with_bound(
    field: &Arc<Field>,
    n: u64,
    table_bound: u64,
) -> Result<(Arc<Field>, FieldElement)> {
    if n == 0 || gcd(n, field.characteristic()) != 1 {
        return Err(Error::NotCoprime {
            n,
            p: field.characteristic(),
        });
    }
    let q = field.order();
    let mut t = 1u32;
    let mut x = q % n;
    while x != 1 % n {
        x = x * (q % n) % n;
        t += 1;
    }
    let ext = Field::extension_with_bound(field, t, table_bound)?;
    let alpha = ext.pow(ext.generator(), (ext.order() - 1) / n);
    Ok((ext, alpha))
}

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Multiplicative inverse of a mod n (n > 1, gcd(a, n) = 1).
pub fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    if n <= 1 {
        return Some(0);
    }
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (n as i128, (a % n) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(((t % n as i128 + n as i128) % n as i128) as u64)
}
