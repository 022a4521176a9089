//! Prime fields `F_p` and extensions `F_{p^k}` in polynomial basis.
//!
//! A [`FieldDescriptor`] fixes the characteristic, the extension degree and a
//! monic irreducible modulus; [`FieldElement`] is a reduced coefficient
//! vector. Everything is an immutable value and all operations are pure.

use crate::{Error, Result};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

/// Desk-scale cap on the field cardinality `q = p^k`. Larger fields error
/// out rather than silently slow down.
pub const FIELD_CARD_CAP: u64 = 1 << 20;

/// Cap on the characteristic.
pub const CHAR_CAP: u64 = 1 << 16;

/// A finite field `F_{p^k}` with a fixed monic irreducible modulus of degree
/// `k` over `F_p` (little-endian coefficients, length `k + 1`).
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct FieldDescriptor {
    p: u64,
    k: u32,
    modulus: Vec<u64>,
}

/// Shared handle to a field descriptor.
pub type Field = Arc<FieldDescriptor>;

impl FieldDescriptor {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    /// Cardinality `q = p^k`.
    pub fn cardinality(&self) -> u64 {
        self.p.pow(self.k)
    }

    /// Monic modulus, little-endian, length `k + 1`.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// `"p"` for prime fields, `"p^k"` otherwise.
    pub fn spec_string(&self) -> String {
        if self.k == 1 {
            format!("{}", self.p)
        } else {
            format!("{}^{}", self.p, self.k)
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// ---------------------------------------------------------------------------
// Dense univariate arithmetic over F_p, used only for modulus selection.
// Vectors are little-endian with no trailing zeros.

fn fp_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p);
    while r.len() > dm {
        let c = (r[r.len() - 1] * lead_inv) % p;
        let shift = r.len() - 1 - dm;
        for j in 0..=dm {
            let idx = shift + j;
            r[idx] = (r[idx] + p - (c * m[j]) % p) % p;
        }
        fp_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn fp_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    fp_rem(&prod, m, p)
}

/// `base^e mod m` over `F_p[T]`.
fn fp_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = fp_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = fp_mulmod(&result, &b, m, p);
        }
        b = fp_mulmod(&b, &b, m, p);
        e >>= 1;
    }
    result
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    fp_trim(&mut x);
    fp_trim(&mut y);
    while !y.is_empty() {
        let r = fp_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn fp_eval(a: &[u64], x: u64, p: u64) -> u64 {
    let mut acc = 0u64;
    for &c in a.iter().rev() {
        acc = (acc * x + c) % p;
    }
    acc
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and a != 0 mod p.
    mod_pow(a % p, p - 2, p)
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Irreducibility over `F_p` by exhaustive factor search for degree <= 4 and
/// the Rabin test beyond.
fn fp_irreducible(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    if f[0] == 0 {
        return false; // root at 0
    }
    if d <= 4 {
        for x in 0..p {
            if fp_eval(f, x, p) == 0 {
                return false;
            }
        }
        if d < 4 {
            return true;
        }
        // degree 4: also no irreducible quadratic factors
        for c1 in 0..p {
            for c0 in 0..p {
                let g = vec![c0, c1, 1];
                let mut has_root = false;
                for x in 0..p {
                    if fp_eval(&g, x, p) == 0 {
                        has_root = true;
                        break;
                    }
                }
                if !has_root && fp_rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        return true;
    }
    // Rabin: T^{p^d} == T mod f, and gcd(T^{p^{d/l}} - T, f) = 1 for primes l | d.
    let t = vec![0, 1];
    let mut tp = t.clone();
    let mut frob = Vec::with_capacity(d);
    for _ in 0..d {
        tp = fp_powmod(&tp, p, f, p);
        frob.push(tp.clone());
    }
    let mut top = frob[d - 1].clone();
    // top - T
    while top.len() < 2 {
        top.push(0);
    }
    top[1] = (top[1] + p - 1) % p;
    fp_trim(&mut top);
    if !top.is_empty() {
        return false;
    }
    let mut l = 2;
    let mut dd = d;
    while dd > 1 {
        if dd % l == 0 {
            let mut g = frob[d / l - 1].clone();
            while g.len() < 2 {
                g.push(0);
            }
            g[1] = (g[1] + p - 1) % p;
            fp_trim(&mut g);
            let gc = fp_gcd(&g, f, p);
            if gc.len() != 1 {
                return false;
            }
            while dd % l == 0 {
                dd /= l;
            }
        }
        l += 1;
    }
    true
}

/// Builds `F_{p^k}` with the lexicographically smallest monic irreducible
/// modulus in coefficient order `(c_0, ..., c_{k-1})`. Descriptors are
/// canonical, so results are memoized process-wide.
pub fn field_create(p: u64, k: u32) -> Result<Field> {
    use std::collections::HashMap;
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Field>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().unwrap().get(&(p, k)) {
        return Ok(f.clone());
    }
    let built = field_create_uncached(p, k)?;
    cache
        .lock()
        .unwrap()
        .entry((p, k))
        .or_insert_with(|| built.clone());
    Ok(built)
}

fn field_create_uncached(p: u64, k: u32) -> Result<Field> {
    if !is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    if p > CHAR_CAP || k == 0 {
        return Err(Error::FieldCap { p, k });
    }
    let mut card: u64 = 1;
    for _ in 0..k {
        card = card.checked_mul(p).ok_or(Error::FieldCap { p, k })?;
        if card > FIELD_CARD_CAP {
            return Err(Error::FieldCap { p, k });
        }
    }
    let kk = k as usize;
    let mut coeffs = vec![0u64; kk];
    loop {
        let mut f = coeffs.clone();
        f.push(1); // monic
        if fp_irreducible(&f, p) {
            return Ok(Arc::new(FieldDescriptor { p, k, modulus: f }));
        }
        // next vector in lexicographic order (c_0 most significant)
        let mut i = kk;
        loop {
            if i == 0 {
                // exhausted: cannot happen, irreducibles of every degree exist
                return Err(Error::Unsupported(format!(
                    "no irreducible of degree {k} over F_{p}"
                )));
            }
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
        }
    }
}

/// Parses a field spec string `"p"` or `"p^k"`.
pub fn parse_field_spec(s: &str) -> Result<Field> {
    let s = s.trim();
    let (ps, ks) = match s.split_once('^') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let p: u64 = ps.trim().parse().map_err(|_| Error::Parse {
        pos: 0,
        msg: format!("bad field spec {s:?}"),
    })?;
    let k: u32 = ks.trim().parse().map_err(|_| Error::Parse {
        pos: 0,
        msg: format!("bad field spec {s:?}"),
    })?;
    field_create(p, k)
}

/// An element of `F_{p^k}` as a reduced little-endian coefficient vector of
/// length exactly `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Field,
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn zero(field: &Field) -> Self {
        FieldElement {
            field: field.clone(),
            coeffs: vec![0; field.k as usize],
        }
    }

    pub fn one(field: &Field) -> Self {
        Self::from_u64(field, 1)
    }

    /// Scalar embedding of an integer through `F_p`.
    pub fn from_u64(field: &Field, v: u64) -> Self {
        let mut coeffs = vec![0; field.k as usize];
        coeffs[0] = v % field.p;
        FieldElement {
            field: field.clone(),
            coeffs,
        }
    }

    /// Element from little-endian coefficients (reduced mod p, padded to k).
    pub fn from_coeffs(field: &Field, cs: &[u64]) -> Result<Self> {
        if cs.len() > field.k as usize {
            return Err(Error::ArityMismatch {
                expected: field.k as usize,
                got: cs.len(),
            });
        }
        let mut coeffs = vec![0; field.k as usize];
        for (i, &c) in cs.iter().enumerate() {
            coeffs[i] = c % field.p;
        }
        Ok(FieldElement {
            field: field.clone(),
            coeffs,
        })
    }

    /// The `i`-th element in coefficient-vector lexicographic order,
    /// `0 <= i < q`.
    pub fn from_index(field: &Field, i: u64) -> Self {
        let k = field.k as usize;
        let mut coeffs = vec![0; k];
        let mut rest = i;
        for j in (0..k).rev() {
            coeffs[j] = rest % field.p;
            rest /= field.p;
        }
        // rest is dropped when i >= q; callers stay in range
        FieldElement {
            field: field.clone(),
            coeffs,
        }
    }

    /// Position of this element in the enumeration order.
    pub fn index(&self) -> u64 {
        let mut acc = 0u64;
        for &c in &self.coeffs {
            acc = acc * self.field.p + c;
        }
        acc
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn assert_same_field(&self, other: &Self) {
        assert_eq!(
            self.field, other.field,
            "elements from different fields combined"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_field(other);
        let p = self.field.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (a + b) % p)
            .collect();
        FieldElement {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_same_field(other);
        let p = self.field.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (a + p - b) % p)
            .collect();
        FieldElement {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn neg(&self) -> Self {
        let p = self.field.p;
        let coeffs = self.coeffs.iter().map(|&a| (p - a) % p).collect();
        FieldElement {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_field(other);
        let p = self.field.p;
        let k = self.field.k as usize;
        if k == 1 {
            return FieldElement {
                field: self.field.clone(),
                coeffs: vec![self.coeffs[0] * other.coeffs[0] % p],
            };
        }
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % p;
            }
        }
        // reduce modulo the monic modulus
        let m = &self.field.modulus;
        for i in (k..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..k {
                let idx = i - k + j;
                prod[idx] = (prod[idx] + p - (c * m[j]) % p) % p;
            }
        }
        prod.truncate(k);
        FieldElement {
            field: self.field.clone(),
            coeffs: prod,
        }
    }

    pub fn pow(&self, mut e: u128) -> Self {
        let mut acc = Self::one(&self.field);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        let q = self.field.cardinality();
        self.pow((q - 2) as u128)
    }

    /// `x^(p^times)`.
    pub fn frobenius(&self, times: u32) -> Self {
        let mut acc = self.clone();
        for _ in 0..times {
            acc = acc.pow(self.field.p as u128);
        }
        acc
    }
}

macro_rules! impl_binop {
    ($trait:ident, $fn:ident) => {
        impl $trait for &FieldElement {
            type Output = FieldElement;
            fn $fn(self, rhs: &FieldElement) -> FieldElement {
                FieldElement::$fn(self, rhs)
            }
        }
    };
}

impl_binop!(Add, add);
impl_binop!(Sub, sub);
impl_binop!(Mul, mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.k == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            write!(f, "[")?;
            for (i, c) in self.coeffs.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, "]")
        }
    }
}

/// All `q` elements in coefficient-vector lexicographic order.
pub fn enumerate_field(field: &Field) -> impl Iterator<Item = FieldElement> + '_ {
    (0..field.cardinality()).map(move |i| FieldElement::from_index(field, i))
}

/// An embedding `F_{p^a} -> F_{p^b}` (with `a | b`) sending the polynomial
/// generator of the source to a fixed root of the source modulus.
#[derive(Debug, Clone)]
pub struct FieldEmbedding {
    source: Field,
    target: Field,
    image_of_generator: FieldElement,
    powers: Vec<FieldElement>,
}

impl FieldEmbedding {
    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    pub fn image_of_generator(&self) -> &FieldElement {
        &self.image_of_generator
    }

    /// Applies the embedding.
    pub fn map(&self, x: &FieldElement) -> FieldElement {
        assert_eq!(*x.field(), self.source, "element not in the source field");
        let mut acc = FieldElement::zero(&self.target);
        for (j, &c) in x.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let term = self.powers[j].mul(&FieldElement::from_u64(&self.target, c));
            acc = acc.add(&term);
        }
        acc
    }
}

/// Builds the embedding by exhaustive root search over the target, taking the
/// first root in enumeration order. Embeddings between canonical descriptors
/// are memoized process-wide.
pub fn embed_build(source: &Field, target: &Field) -> Result<FieldEmbedding> {
    use std::collections::HashMap;
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32, u32), FieldEmbedding>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (source.p, source.k, target.k);
    if let Some(e) = cache.lock().unwrap().get(&key) {
        if e.source == *source && e.target == *target {
            return Ok(e.clone());
        }
    }
    let built = embed_build_uncached(source, target)?;
    cache
        .lock()
        .unwrap()
        .entry(key)
        .or_insert_with(|| built.clone());
    Ok(built)
}

fn embed_build_uncached(source: &Field, target: &Field) -> Result<FieldEmbedding> {
    if source.p != target.p || target.k % source.k != 0 {
        return Err(Error::IncompatibleEmbedding);
    }
    let root = enumerate_field(target)
        .find(|x| {
            // evaluate the source modulus at x inside the target
            let mut acc = FieldElement::zero(target);
            for &c in source.modulus.iter().rev() {
                acc = acc.mul(x).add(&FieldElement::from_u64(target, c));
            }
            acc.is_zero()
        })
        .ok_or(Error::EmbeddingRootMissing)?;
    let mut powers = Vec::with_capacity(source.k as usize);
    let mut acc = FieldElement::one(target);
    for _ in 0..source.k {
        powers.push(acc.clone());
        acc = acc.mul(&root);
    }
    Ok(FieldEmbedding {
        source: source.clone(),
        target: target.clone(),
        image_of_generator: root,
        powers,
    })
}
