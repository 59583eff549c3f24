//! Dense univariate polynomials over a finite field, plus the ring maps
//! x ↦ x^e and x ↦ δx in F[x]/⟨x^n−1⟩.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

/// Coefficients ascending by degree, no trailing zeros; the zero polynomial
/// has an empty coefficient vector.
#[derive(Clone)]
pub struct Poly {
    field: Arc<Field>,
    coeffs: Vec<FieldElement>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.coeffs == other.coeffs
    }
}
impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::text::format_poly(self))
    }
}

impl Poly {
    pub fn zero(field: Arc<Field>) -> Poly {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: Arc<Field>) -> Poly {
        let one = field.one();
        Poly {
            field,
            coeffs: vec![one],
        }
    }

    pub fn from_coeffs(field: Arc<Field>, mut coeffs: Vec<FieldElement>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    /// Convenience constructor from raw element indices.
    pub fn from_indices(field: &Arc<Field>, indices: &[u32]) -> Poly {
        let coeffs = indices.iter().map(|&i| field.element(i as u64)).collect();
        Poly::from_coeffs(field.clone(), coeffs)
    }

    pub fn monomial(field: Arc<Field>, coeff: FieldElement, degree: usize) -> Poly {
        if coeff.is_zero() {
            return Poly::zero(field);
        }
        let mut coeffs = vec![field.zero(); degree + 1];
        coeffs[degree] = coeff;
        Poly { field, coeffs }
    }

    /// x^n − 1 over `field`.
    pub fn x_pow_minus_one(field: &Arc<Field>, n: usize) -> Poly {
        assert!(n >= 1);
        let mut coeffs = vec![field.zero(); n + 1];
        coeffs[0] = field.neg(field.one());
        coeffs[n] = field.one();
        Poly::from_coeffs(field.clone(), coeffs)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of x^i (zero beyond the stored length).
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == self.field.one()
    }

    fn check_field(&self, other: &Poly) -> Result<()> {
        if *self.field == *other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Ok(Poly::from_coeffs(f.clone(), coeffs))
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        Ok(Poly::from_coeffs(f.clone(), coeffs))
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        let coeffs = self.coeffs.iter().map(|&c| f.neg(c)).collect();
        Poly::from_coeffs(f.clone(), coeffs)
    }

    pub fn scale(&self, c: FieldElement) -> Poly {
        let f = &self.field;
        let coeffs = self.coeffs.iter().map(|&x| f.mul(c, x)).collect();
        Poly::from_coeffs(f.clone(), coeffs)
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(self.field.clone()));
        }
        let f = &self.field;
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Ok(Poly::from_coeffs(f.clone(), out))
    }

    /// (self · other) mod (x^n − 1): indices wrap around n.
    pub fn mulmod(&self, other: &Poly, n: usize) -> Result<Poly> {
        self.check_field(other)?;
        assert!(n >= 1);
        let f = &self.field;
        let mut out = vec![f.zero(); n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let k = (i + j) % n;
                out[k] = f.add(out[k], f.mul(a, b));
            }
        }
        Ok(Poly::from_coeffs(f.clone(), out))
    }

    /// Reduce mod x^n − 1 (wrap indices).
    pub fn reduce_mod_xn_minus_one(&self, n: usize) -> Poly {
        assert!(n >= 1);
        let f = &self.field;
        let mut out = vec![f.zero(); n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            out[i % n] = f.add(out[i % n], a);
        }
        Poly::from_coeffs(f.clone(), out)
    }

    /// Euclidean division: self = q · divisor + r with deg r < deg divisor.
    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check_field(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        let dlen = divisor.coeffs.len();
        let mut rem = self.coeffs.clone();
        if rem.len() < dlen {
            return Ok((Poly::zero(f.clone()), self.clone()));
        }
        let mut quot = vec![f.zero(); rem.len() - dlen + 1];
        let lead_inv = f.inv(divisor.leading())?;
        while rem.len() >= dlen {
            let lead = *rem.last().unwrap();
            if lead.is_zero() {
                rem.pop();
                continue;
            }
            let c = f.mul(lead, lead_inv);
            let shift = rem.len() - dlen;
            quot[shift] = c;
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] = f.sub(rem[shift + i], f.mul(c, d));
            }
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        Ok((
            Poly::from_coeffs(f.clone(), quot),
            Poly::from_coeffs(f.clone(), rem),
        ))
    }

    /// Does `self` divide `other`?
    pub fn divides(&self, other: &Poly) -> Result<bool> {
        let (_, r) = other.divmod(self)?;
        Ok(r.is_zero())
    }

    /// Monic gcd; gcd(f, 0) is the monic normalization of f.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Scale to leading coefficient 1 (zero stays zero).
    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = self.field.inv(self.leading()).expect("leading is nonzero");
        self.scale(inv)
    }

    /// f(x^e) mod (x^n − 1). Requires 0 < e < n.
    pub fn substitute_power(&self, e: usize, n: usize) -> Poly {
        assert!(e > 0 && e < n, "substitution exponent must satisfy 0 < e < n");
        let f = &self.field;
        let mut out = vec![f.zero(); n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let k = (i * e) % n;
            out[k] = f.add(out[k], c);
        }
        Poly::from_coeffs(f.clone(), out)
    }

    /// f(δx): coefficient c_i becomes c_i · δ^i. δ must be nonzero and live
    /// in this polynomial's field (lift first if needed).
    pub fn substitute_scale(&self, delta: FieldElement) -> Result<Poly> {
        if delta.is_zero() {
            return Err(Error::ZeroScale);
        }
        let f = &self.field;
        let mut power = f.one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| {
                let out = f.mul(c, power);
                power = f.mul(power, delta);
                out
            })
            .collect();
        Ok(Poly::from_coeffs(f.clone(), coeffs))
    }

    /// Embed into a degree-t extension of this polynomial's field (the base
    /// field sits at digit 0, so indices carry over unchanged).
    pub fn lift_to(&self, ext: &Arc<Field>) -> Result<Poly> {
        match ext.base() {
            Some(base) if **base == *self.field => {}
            _ if **ext == *self.field => return Ok(self.clone()),
            _ => return Err(Error::FieldMismatch),
        }
        let coeffs = self.coeffs.iter().map(|c| ext.element(c.0)).collect();
        Ok(Poly::from_coeffs(ext.clone(), coeffs))
    }

    /// Project back to the base field; errors if any coefficient has a
    /// nonzero component outside it.
    pub fn project_to_base(&self) -> Result<Poly> {
        let base = self.field.base().ok_or(Error::FieldMismatch)?;
        let base_order = base.order();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for &c in &self.coeffs {
            if c.0 >= base_order {
                return Err(Error::Invalid {
                    what: "coefficient",
                    detail: format!("element {} does not lie in the base field", c.0),
                });
            }
            coeffs.push(base.element(c.0));
        }
        Ok(Poly::from_coeffs(base.clone(), coeffs))
    }

    pub fn eval(&self, x: FieldElement) -> FieldElement {
        let f = &self.field;
        let mut acc = f.zero();
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::text::format_poly(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> Arc<Field> {
        Field::new(p, 1).unwrap()
    }

    #[test]
    fn mulmod_wraps() {
        let f2 = gf(2);
        let n = 8;
        let x = Poly::from_indices(&f2, &[0, 1]);
        let x7 = Poly::monomial(f2.clone(), f2.one(), 7);
        assert_eq!(x.mulmod(&x7, n).unwrap(), Poly::one(f2.clone()));
        let zero = Poly::zero(f2.clone());
        assert_eq!(zero.mulmod(&x7, n).unwrap(), zero);
    }

    #[test]
    fn mulmod_rejects_mixed_fields() {
        let f2 = gf(2);
        let f3 = gf(3);
        let a = Poly::one(f2);
        let b = Poly::one(f3);
        assert!(matches!(a.mulmod(&b, 4), Err(Error::FieldMismatch)));
    }

    /// Independent convolution oracle for products.
    fn naive_product(polys: &[&Poly]) -> Vec<u64> {
        let f = polys[0].field().clone();
        let mut acc = vec![1u64];
        for p in polys {
            let mut out = vec![0u64; acc.len() + p.coeffs().len() - 1];
            for (i, &a) in acc.iter().enumerate() {
                for (j, &b) in p.coeffs().iter().enumerate() {
                    let t = f.mul(f.element(a), b);
                    out[i + j] = f.add(f.element(out[i + j]), t).0;
                }
            }
            acc = out;
        }
        acc
    }

    #[test]
    fn factor_product_is_x7_plus_1() {
        let f2 = gf(2);
        let a = Poly::from_indices(&f2, &[1, 1]);
        let b = Poly::from_indices(&f2, &[1, 1, 0, 1]);
        let c = Poly::from_indices(&f2, &[1, 0, 1, 1]);
        let prod: Vec<u32> = naive_product(&[&a, &b, &c]).iter().map(|&x| x as u32).collect();
        let expected = Poly::x_pow_minus_one(&f2, 7);
        assert_eq!(Poly::from_indices(&f2, &prod), expected);
        let via_mul = a.mul(&b).unwrap().mul(&c).unwrap();
        assert_eq!(via_mul, expected);
    }

    #[test]
    fn division_contract() {
        let f3 = gf(3);
        let f = Poly::from_indices(&f3, &[2, 0, 1]); // x^2 + 2 = x^2 - 1
        let g = Poly::from_indices(&f3, &[2, 1]); // x - 1
        let (q, r) = f.divmod(&g).unwrap();
        assert!(r.is_zero());
        assert_eq!(q.mul(&g).unwrap(), f);
        assert!(matches!(
            f.divmod(&Poly::zero(f3.clone())),
            Err(Error::DivisionByZero)
        ));
        // gcd(x^2-1, x-1) = x-1, monic form x+2
        let gcd = f.gcd(&g).unwrap();
        assert_eq!(gcd, Poly::from_indices(&f3, &[2, 1]));
        // gcd(f, 0) = monic f
        let doubled = f.scale(f3.element(2));
        assert_eq!(doubled.gcd(&Poly::zero(f3.clone())).unwrap(), f);
    }

    #[test]
    fn paper_generator_divides() {
        let f3 = gf(3);
        let digits: Vec<u32> = "1212210010210120100122121"
            .bytes()
            .map(|b| (b - b'0') as u32)
            .collect();
        let g = Poly::from_indices(&f3, &digits);
        assert_eq!(g.degree(), Some(24));
        assert!(g.divides(&Poly::x_pow_minus_one(&f3, 146)).unwrap());
    }

    #[test]
    fn substitute_power_examples() {
        let f2 = gf(2);
        let x = Poly::from_indices(&f2, &[0, 1]);
        assert_eq!(
            x.substitute_power(3, 7),
            Poly::monomial(f2.clone(), f2.one(), 3)
        );
        let f = Poly::from_indices(&f2, &[1, 1, 1]);
        // x^4 + x^2 + 1 mod x^3 - 1 = x^2 + x + 1
        assert_eq!(f.substitute_power(2, 3), f);
    }

    #[test]
    fn substitute_scale_examples() {
        let f9 = Field::new(3, 2).unwrap();
        let delta = f9.generator();
        let f = Poly::from_indices(&f9, &[2, 5, 1, 7]);
        assert_eq!(f.substitute_scale(f9.one()).unwrap(), f);
        let scaled = f.substitute_scale(delta).unwrap();
        let back = scaled.substitute_scale(f9.inv(delta).unwrap()).unwrap();
        assert_eq!(back, f);
        assert!(matches!(
            f.substitute_scale(f9.zero()),
            Err(Error::ZeroScale)
        ));
        let x = Poly::from_indices(&f9, &[0, 1]);
        assert_eq!(
            x.substitute_scale(delta).unwrap(),
            Poly::monomial(f9.clone(), delta, 1)
        );
    }

    #[test]
    fn substitute_power_is_ring_map_when_coprime() {
        // multiplicativity of x -> x^e on F[x]/(x^n - 1), plus bijectivity
        // via the inverse exponent
        let f3 = gf(3);
        let n = 10usize;
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for e in [3usize, 7, 9] {
            let e_inv = crate::field::mod_inverse(e as u64, n as u64).unwrap() as usize;
            for _ in 0..40 {
                let a: Vec<u32> = (0..n).map(|_| (next() % 3) as u32).collect();
                let b: Vec<u32> = (0..n).map(|_| (next() % 3) as u32).collect();
                let pa = Poly::from_indices(&f3, &a);
                let pb = Poly::from_indices(&f3, &b);
                let lhs = pa.mulmod(&pb, n).unwrap().substitute_power(e, n);
                let rhs = pa
                    .substitute_power(e, n)
                    .mulmod(&pb.substitute_power(e, n), n)
                    .unwrap();
                assert_eq!(lhs, rhs);
                let sum = pa.add(&pb).unwrap().substitute_power(e, n);
                let sum2 = pa
                    .substitute_power(e, n)
                    .add(&pb.substitute_power(e, n))
                    .unwrap();
                assert_eq!(sum, sum2);
                let roundtrip = pa.substitute_power(e, n).substitute_power(e_inv, n);
                assert_eq!(roundtrip, pa.reduce_mod_xn_minus_one(n));
            }
        }
    }

    #[test]
    fn lift_and_project() {
        let f3 = gf(3);
        let f9 = Field::new(3, 2).unwrap();
        let g = Poly::from_indices(&f3, &[1, 2, 1]);
        let lifted = g.lift_to(&f9).unwrap();
        assert_eq!(lifted.project_to_base().unwrap(), g);
        let bad = Poly::from_indices(&f9, &[4]);
        assert!(bad.project_to_base().is_err());
    }
}
