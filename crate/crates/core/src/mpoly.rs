//! Sparse multivariate polynomials over a finite field.
//!
//! Terms are kept in a map keyed by monomial with graded-lexicographic order,
//! so display, hashing and iteration are canonical. Coefficient extraction of
//! the expansion `f(T + S)` (the order-`alpha` coefficient polynomials and
//! their span) lives here as well; it is the characteristic-free substitute
//! for iterated partial derivatives.

use crate::gf::{Field, FieldElement, FieldEmbedding};
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector for a fixed arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn variable(arity: usize, i: usize) -> Self {
        let mut e = vec![0; arity];
        e[i] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller guarantees divisibility.
    pub fn div_into(&self, other: &Self) -> Self {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    pub fn lcm(&self, other: &Self) -> Self {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    /// Variables with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, _)| i)
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then lexicographic.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// `C(n, k)` with the convention that out-of-range indices give 0.
pub(crate) fn binom(n: i64, k: i64) -> u128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Sparse polynomial in `arity` variables `T0..T{arity-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    field: Field,
    arity: usize,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl MPoly {
    pub fn zero(field: &Field, arity: usize) -> Self {
        MPoly {
            field: field.clone(),
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Field, arity: usize, c: FieldElement) -> Self {
        let mut p = Self::zero(field, arity);
        p.add_term(Monomial::one(arity), c);
        p
    }

    pub fn variable(field: &Field, arity: usize, i: usize) -> Self {
        let mut p = Self::zero(field, arity);
        p.add_term(Monomial::variable(arity, i), FieldElement::one(field));
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, FieldElement)>>(
        field: &Field,
        arity: usize,
        it: I,
    ) -> Self {
        let mut p = Self::zero(field, arity);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    /// Accumulates a term, dropping the entry if the coefficient cancels.
    pub fn add_term(&mut self, m: Monomial, c: FieldElement) {
        debug_assert_eq!(m.arity(), self.arity);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&FieldElement> {
        self.terms.get(m)
    }

    /// Largest total degree over stored terms; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// Smallest total degree with a nonzero term.
    pub fn lowest_degree(&self) -> Result<u32> {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .min()
            .ok_or(Error::ZeroPolynomial)
    }

    /// True iff all stored monomials share one total degree (vacuously for 0).
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.total_degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(&self.field, self.arity);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), c.neg());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.field, self.arity);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        out
    }

    pub fn mul_scalar(&self, c: &FieldElement) -> Self {
        if c.is_zero() {
            return Self::zero(&self.field, self.arity);
        }
        let mut out = Self::zero(&self.field, self.arity);
        for (m, a) in &self.terms {
            out.terms.insert(m.clone(), a.mul(c));
        }
        out
    }

    /// Multiplies by the single term `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: &FieldElement) -> Self {
        if c.is_zero() {
            return Self::zero(&self.field, self.arity);
        }
        let mut out = Self::zero(&self.field, self.arity);
        for (m1, c1) in &self.terms {
            out.terms.insert(m1.mul(m), c1.mul(c));
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(&self.field, self.arity, FieldElement::one(&self.field));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, args: &[FieldElement]) -> FieldElement {
        assert_eq!(args.len(), self.arity, "evaluation arity mismatch");
        let mut acc = FieldElement::zero(&self.field);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&args[i].pow(e as u128));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Ordinary partial derivative with respect to `T_i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.field, self.arity);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            out.add_term(m2, c.mul(&FieldElement::from_u64(&self.field, e as u64)));
        }
        out
    }

    /// The coefficient polynomial of `S^I` in `f(T + S)`: the order-`|I|`
    /// Hasse derivative, computed per term through binomial coefficients.
    pub fn hasse_coefficient(&self, index: &Monomial) -> Self {
        let p = self.field.p();
        let mut out = Self::zero(&self.field, self.arity);
        'term: for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut m2 = Vec::with_capacity(self.arity);
            for (j, (&e, &i)) in m.0.iter().zip(&index.0).enumerate() {
                let _ = j;
                if i > e {
                    continue 'term;
                }
                let b = (binom(e as i64, i as i64) % p as u128) as u64;
                if b == 0 {
                    continue 'term;
                }
                coef = coef.mul(&FieldElement::from_u64(&self.field, b));
                m2.push(e - i);
            }
            out.add_term(Monomial(m2), coef);
        }
        out
    }

    /// Dehomogenization: sets `T_chart = 1` and drops the variable.
    pub fn dehomogenize(&self, chart: usize) -> Self {
        assert!(chart < self.arity);
        let field = self.field.clone();
        let mut out = Self::zero(&field, self.arity - 1);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.remove(chart);
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Substitutes `x_i <- x_i + a_i`, moving the point `a` to the origin of
    /// the new coordinates... i.e. `shift(f, a)(x) = f(x + a)`.
    pub fn shift(&self, a: &[FieldElement]) -> Self {
        assert_eq!(a.len(), self.arity, "shift arity mismatch");
        let p = self.field.p();
        let mut out = Self::zero(&self.field, self.arity);
        for (m, c) in &self.terms {
            // expand prod_i (x_i + a_i)^{e_i}
            let mut parts: Vec<(Monomial, FieldElement)> =
                vec![(Monomial::one(self.arity), c.clone())];
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if a[i].is_zero() {
                    for (pm, _) in parts.iter_mut() {
                        pm.0[i] += e;
                    }
                    continue;
                }
                let mut next = Vec::with_capacity(parts.len() * (e as usize + 1));
                let mut apow = FieldElement::one(&self.field);
                // j = exponent on x_i, e - j on a_i; iterate j from e down to 0
                let mut table = Vec::with_capacity(e as usize + 1);
                for j in (0..=e).rev() {
                    let b = (binom(e as i64, j as i64) % p as u128) as u64;
                    table.push((j, FieldElement::from_u64(&self.field, b).mul(&apow)));
                    apow = apow.mul(&a[i]);
                }
                for (pm, pc) in &parts {
                    for (j, w) in &table {
                        if w.is_zero() {
                            continue;
                        }
                        let mut m2 = pm.clone();
                        m2.0[i] += j;
                        next.push((m2, pc.mul(w)));
                    }
                }
                parts = next;
            }
            for (m2, c2) in parts {
                out.add_term(m2, c2);
            }
        }
        out
    }

    /// Evaluates at polynomial arguments (ring substitution).
    pub fn compose(&self, args: &[MPoly]) -> MPoly {
        assert_eq!(args.len(), self.arity, "compose arity mismatch");
        let out_arity = args[0].arity;
        let mut acc = MPoly::zero(&self.field, out_arity);
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(&self.field, out_arity, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&args[i].pow(e));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Maps all coefficients through a field embedding.
    pub fn embed(&self, emb: &FieldEmbedding) -> MPoly {
        let mut out = MPoly::zero(emb.target(), self.arity);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), emb.map(c));
        }
        out
    }
}

/// Dehomogenizes at `chart` and moves the affine point `a` to the origin.
pub fn translate(f: &MPoly, a: &[FieldElement], chart: usize) -> MPoly {
    f.dehomogenize(chart).shift(a)
}

// ---------------------------------------------------------------------------
// Hasse expansion

/// The nonzero coefficient polynomials of `S^I` in `f(T + S)` for `|I| =
/// order`, plus a linearly independent spanning subset.
#[derive(Debug, Clone)]
pub struct DerivedSet {
    order: u32,
    entries: BTreeMap<Monomial, MPoly>,
    zero_indices: Vec<Monomial>,
    basis: Vec<MPoly>,
}

impl DerivedSet {
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Nonzero entries, keyed by index `I`.
    pub fn entries(&self) -> impl Iterator<Item = (&Monomial, &MPoly)> {
        self.entries.iter()
    }

    /// Indices `I` whose coefficient polynomial vanished (queryable so that
    /// "g^I = 0" remains answerable).
    pub fn zero_indices(&self) -> &[Monomial] {
        &self.zero_indices
    }

    /// A deterministic linearly independent subset of the entries spanning
    /// the same space.
    pub fn basis(&self) -> &[MPoly] {
        &self.basis
    }

    pub fn get(&self, index: &Monomial) -> Option<&MPoly> {
        self.entries.get(index)
    }
}

/// Enumerates all exponent vectors of total degree `d` in `arity` variables,
/// in lexicographic order.
pub fn exponents_of_degree(arity: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; arity];
    fn rec(cur: &mut Vec<u32>, pos: usize, left: u32, out: &mut Vec<Monomial>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[pos] = e;
            rec(cur, pos + 1, left - e, out);
        }
        cur[pos] = 0;
    }
    if arity == 0 {
        if d == 0 {
            out.push(Monomial(vec![]));
        }
        return out;
    }
    rec(&mut cur, 0, d, &mut out);
    out
}

/// Greedy linearly independent subset of `cands` (row reduction over the
/// coefficient field, graded-lex pivots).
pub fn independent_subset(cands: &[MPoly]) -> Vec<MPoly> {
    let mut echelon: Vec<MPoly> = Vec::new();
    let mut picked = Vec::new();
    for cand in cands {
        let mut r = cand.clone();
        loop {
            if r.is_zero() {
                break;
            }
            let lead = r.terms.keys().next_back().unwrap().clone();
            let lc = r.terms[&lead].clone();
            match echelon
                .iter()
                .find(|g| *g.terms.keys().next_back().unwrap() == lead)
            {
                Some(g) => {
                    r = r.sub(&g.mul_scalar(&lc));
                }
                None => {
                    echelon.push(r.mul_scalar(&lc.inv()));
                    picked.push(cand.clone());
                    break;
                }
            }
        }
    }
    picked
}

/// Expands `f(T + S)` and collects the order-`alpha` coefficient polynomials.
pub fn hasse_expand(f: &MPoly, alpha: u32) -> Result<DerivedSet> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let delta = f.total_degree().unwrap();
    if alpha == 0 || alpha > delta {
        return Err(Error::OrderOutOfRange { alpha, delta });
    }
    let mut entries = BTreeMap::new();
    let mut zero_indices = Vec::new();
    for index in exponents_of_degree(f.arity(), alpha) {
        let g = f.hasse_coefficient(&index);
        if g.is_zero() {
            zero_indices.push(index);
        } else {
            debug_assert!(g.is_homogeneous());
            debug_assert_eq!(g.total_degree(), Some(delta - alpha));
            entries.insert(index, g);
        }
    }
    let cands: Vec<MPoly> = entries.values().cloned().collect();
    let basis = independent_subset(&cands);
    Ok(DerivedSet {
        order: alpha,
        entries,
        zero_indices,
        basis,
    })
}

// ---------------------------------------------------------------------------
// Text format

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        Some(b)
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn digits(&mut self) -> Result<u128> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected digits");
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse {
                pos: start,
                msg: "number too large".into(),
            })
    }

    fn coefficient(&mut self, field: &Field) -> Result<FieldElement> {
        match self.peek() {
            Some(b'[') => {
                self.bump();
                let mut cs = Vec::new();
                loop {
                    cs.push((self.digits()? % field.p() as u128) as u64);
                    match self.bump() {
                        Some(b',') => continue,
                        Some(b']') => break,
                        _ => return self.err("expected ',' or ']'"),
                    }
                }
                if cs.len() > field.degree() as usize {
                    return self.err("coefficient vector longer than the extension degree");
                }
                Ok(FieldElement::from_coeffs(field, &cs).unwrap())
            }
            Some(b) if b.is_ascii_digit() => {
                let v = self.digits()? % field.p() as u128;
                Ok(FieldElement::from_u64(field, v as u64))
            }
            _ => self.err("expected coefficient"),
        }
    }

    fn factor(&mut self, arity: usize) -> Result<(usize, u32)> {
        match self.bump() {
            Some(b'T') => {}
            _ => return self.err("expected 'T'"),
        }
        let idx = self.digits()? as usize;
        if idx >= arity {
            return self.err(&format!("variable index {idx} >= arity {arity}"));
        }
        let exp = if self.peek() == Some(b'^') {
            self.bump();
            let e = self.digits()?;
            if e > 64 {
                return self.err("exponent too large");
            }
            e as u32
        } else {
            1
        };
        Ok((idx, exp))
    }

    fn term(&mut self, field: &Field, arity: usize) -> Result<(Monomial, FieldElement)> {
        let mut coef = match self.peek() {
            Some(b) if b.is_ascii_digit() || b == b'[' => {
                let c = self.coefficient(field)?;
                if self.peek() == Some(b'*') {
                    self.bump();
                }
                Some(c)
            }
            _ => None,
        };
        let mut mono = Monomial::one(arity);
        let mut saw_factor = false;
        while self.peek() == Some(b'T') {
            let (idx, exp) = self.factor(arity)?;
            mono.0[idx] += exp;
            saw_factor = true;
            if self.peek() == Some(b'*') {
                self.bump();
                if self.peek() != Some(b'T') {
                    // allow trailing coefficient? no: '*' must join factors
                    return self.err("expected factor after '*'");
                }
            }
        }
        if coef.is_none() && !saw_factor {
            return self.err("expected term");
        }
        let c = coef.take().unwrap_or_else(|| FieldElement::one(field));
        Ok((mono, c))
    }
}

/// Parses the polynomial text format. Whitespace is insignificant.
pub fn poly_parse(text: &str, field: &Field, arity: usize) -> Result<MPoly> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let mut out = MPoly::zero(field, arity);
    let mut negate = false;
    match p.peek() {
        Some(b'-') => {
            p.bump();
            negate = true;
        }
        Some(b'+') => {
            p.bump();
        }
        Some(_) => {}
        None => return p.err("empty input"),
    }
    loop {
        let (m, c) = p.term(field, arity)?;
        out.add_term(m, if negate { c.neg() } else { c });
        match p.peek() {
            None => break,
            Some(b'+') => {
                p.bump();
                negate = false;
            }
            Some(b'-') => {
                p.bump();
                negate = true;
            }
            _ => return p.err("expected '+', '-' or end of input"),
        }
    }
    Ok(out)
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let constant = m.total_degree() == 0;
            if constant || !c.is_one() {
                write!(f, "{c}")?;
                if !constant {
                    write!(f, "*")?;
                }
            }
            let mut first_factor = true;
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first_factor {
                    write!(f, "*")?;
                }
                first_factor = false;
                write!(f, "T{i}")?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}
