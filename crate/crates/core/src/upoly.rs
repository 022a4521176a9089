//! Crate-internal dense univariate polynomials over a field, used for
//! eliminant processing and root extraction in closed-point enumeration.

use crate::gf::{Field, FieldElement, FieldEmbedding};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct UPoly {
    field: Field,
    /// Little-endian, no trailing zeros.
    coeffs: Vec<FieldElement>,
}

impl UPoly {
    pub fn new(field: &Field, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &Field) -> Self {
        UPoly {
            field: field.clone(),
            coeffs: vec![],
        }
    }

    pub fn x(field: &Field) -> Self {
        UPoly::new(
            field,
            vec![FieldElement::zero(field), FieldElement::one(field)],
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial gives `None`.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = FieldElement::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => {
                let inv = lc.inv();
                UPoly {
                    field: self.field.clone(),
                    coeffs: self.coeffs.iter().map(|c| c.mul(&inv)).collect(),
                }
            }
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field);
        }
        let mut out =
            vec![FieldElement::zero(&self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        UPoly::new(&self.field, out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let z = FieldElement::zero(&self.field);
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            let a = self.coeffs.get(i).unwrap_or(&z);
            let b = other.coeffs.get(i).unwrap_or(&z);
            out.push(a.sub(b));
        }
        UPoly::new(&self.field, out)
    }

    /// Quotient and remainder of `self` by `d` (`d` nonzero).
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero());
        let dd = d.degree().unwrap();
        let lc_inv = d.coeffs.last().unwrap().inv();
        let mut r = self.clone();
        let qlen = self.coeffs.len().saturating_sub(dd);
        let mut quot = vec![FieldElement::zero(&self.field); qlen.max(1)];
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let c = r.coeffs.last().unwrap().mul(&lc_inv);
            let shift = rd - dd;
            quot[shift] = quot[shift].add(&c);
            let mut sub = vec![FieldElement::zero(&self.field); shift];
            for dc in &d.coeffs {
                sub.push(dc.mul(&c));
            }
            r = r.sub(&UPoly::new(&self.field, sub));
        }
        (UPoly::new(&self.field, quot), r)
    }

    /// Remainder of `self` modulo `d` (`d` nonzero).
    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn gcd(a: &Self, b: &Self) -> Self {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let r = x.rem(&y);
            x = y;
            y = r;
        }
        x.monic()
    }

    pub fn mulmod(&self, other: &Self, m: &Self) -> Self {
        self.mul(other).rem(m)
    }

    /// `self^e mod m`.
    pub fn powmod(&self, mut e: u64, m: &Self) -> Self {
        let mut acc = UPoly::new(&self.field, vec![FieldElement::one(&self.field)]);
        let mut b = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&b, m);
            }
            b = b.mulmod(&b, m);
            e >>= 1;
        }
        acc
    }

    /// `x^{q^m} mod self`, by `m` rounds of raising to the `q`.
    pub fn x_pow_q_iterated(&self, q: u64, m: u32) -> Self {
        let mut acc = UPoly::x(&self.field).rem(self);
        for _ in 0..m {
            acc = acc.powmod(q, self);
        }
        acc
    }

    pub fn embed(&self, emb: &FieldEmbedding) -> UPoly {
        UPoly {
            field: emb.target().clone(),
            coeffs: self.coeffs.iter().map(|c| emb.map(c)).collect(),
        }
    }
}
