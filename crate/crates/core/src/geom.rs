//! Projective-space points over finite fields: enumeration, Gaussian-binomial
//! counting, Frobenius orbits (closed points), and descent of rational points
//! along field extensions.

use crate::gf::{Field, FieldElement, FieldEmbedding};
use crate::mpoly::MPoly;
use crate::{Error, Result};
use num_bigint::BigUint;
use std::fmt;

/// Default budget for point enumeration.
pub const DEFAULT_ENUM_BUDGET: u128 = 10_000_000;

/// A point of `P^n` with the canonical representative: leftmost nonzero
/// coordinate equal to 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: Vec<FieldElement>,
}

impl ProjPoint {
    /// Normalizes the representative. Errors on the zero vector.
    pub fn new(coords: Vec<FieldElement>) -> Result<Self> {
        let lead = coords.iter().position(|c| !c.is_zero());
        let lead =
            lead.ok_or_else(|| Error::Unsupported("zero vector is not a projective point".into()))?;
        if coords[lead].is_one() {
            return Ok(ProjPoint { coords });
        }
        let inv = coords[lead].inv();
        Ok(ProjPoint {
            coords: coords.iter().map(|c| c.mul(&inv)).collect(),
        })
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn field(&self) -> &Field {
        self.coords[0].field()
    }

    /// Ambient projective dimension `n`.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Index of the leftmost nonzero (= 1) coordinate.
    pub fn leading_chart(&self) -> usize {
        self.coords.iter().position(|c| !c.is_zero()).unwrap()
    }

    /// Affine coordinates in the given chart: all coordinates except `chart`,
    /// divided by the chart coordinate.
    pub fn affine_coords(&self, chart: usize) -> Result<Vec<FieldElement>> {
        if self.coords[chart].is_zero() {
            return Err(Error::ZeroChartCoordinate);
        }
        let inv = self.coords[chart].inv();
        Ok(self
            .coords
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != chart)
            .map(|(_, c)| c.mul(&inv))
            .collect())
    }

    /// Maps all coordinates through a field embedding.
    pub fn embed(&self, emb: &FieldEmbedding) -> ProjPoint {
        ProjPoint {
            coords: self.coords.iter().map(|c| emb.map(c)).collect(),
        }
    }

    /// Coordinate-wise `x -> x^q` for `q` the cardinality of `base`,
    /// renormalized (an automorphism keeps representatives canonical).
    pub fn frobenius(&self, base: &Field) -> ProjPoint {
        let t = base.degree();
        ProjPoint {
            coords: self.coords.iter().map(|c| c.frobenius(t)).collect(),
        }
    }

    /// Deterministic sort key.
    pub fn sort_key(&self) -> Vec<u64> {
        self.coords.iter().map(|c| c.index()).collect()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Parses `"a0:a1:...:an"` with coefficients in the polynomial coefficient
/// grammar (decimal for prime fields, `[c0,c1,...]` for extensions).
pub fn parse_point(text: &str, field: &Field, n: usize) -> Result<ProjPoint> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != n + 1 {
        return Err(Error::ArityMismatch {
            expected: n + 1,
            got: parts.len(),
        });
    }
    let mut coords = Vec::with_capacity(n + 1);
    for part in parts {
        let part = part.trim();
        let c = if let Some(rest) = part.strip_prefix('[') {
            let inner = rest.strip_suffix(']').ok_or(Error::Parse {
                pos: 0,
                msg: "unterminated coefficient vector".into(),
            })?;
            let mut cs = Vec::new();
            for d in inner.split(',') {
                let v: u128 = d.trim().parse().map_err(|_| Error::Parse {
                    pos: 0,
                    msg: format!("bad coefficient {d:?}"),
                })?;
                cs.push((v % field.p() as u128) as u64);
            }
            FieldElement::from_coeffs(field, &cs)?
        } else {
            let (neg, digits) = match part.strip_prefix('-') {
                Some(d) => (true, d),
                None => (false, part),
            };
            let v: u128 = digits.trim().parse().map_err(|_| Error::Parse {
                pos: 0,
                msg: format!("bad coordinate {part:?}"),
            })?;
            let e = FieldElement::from_u64(field, (v % field.p() as u128) as u64);
            if neg {
                e.neg()
            } else {
                e
            }
        };
        coords.push(c);
    }
    ProjPoint::new(coords)
}

/// `#P^n(F_q) = q^n + ... + 1`.
pub fn proj_count(n: usize, q: u64) -> u128 {
    let mut acc: u128 = 0;
    let mut pw: u128 = 1;
    for _ in 0..=n {
        acc += pw;
        pw *= q as u128;
    }
    acc
}

/// Enumerates all points of `P^n(F_q)` in chart-major order: first the points
/// with leading coordinate at index 0, then index 1, and so on.
#[derive(Debug)]
pub struct ProjPoints<'a> {
    field: &'a Field,
    n: usize,
    chart: usize,
    idx: u64,
    chart_size: u64,
}

impl<'a> Iterator for ProjPoints<'a> {
    type Item = ProjPoint;

    fn next(&mut self) -> Option<ProjPoint> {
        while self.chart <= self.n {
            if self.idx < self.chart_size {
                let mut coords = Vec::with_capacity(self.n + 1);
                for _ in 0..self.chart {
                    coords.push(FieldElement::zero(self.field));
                }
                coords.push(FieldElement::one(self.field));
                // trailing coordinates: most significant first
                let q = self.field.cardinality();
                let free = self.n - self.chart;
                let mut rest = self.idx;
                let mut tail = vec![0u64; free];
                for slot in (0..free).rev() {
                    tail[slot] = rest % q;
                    rest /= q;
                }
                for t in tail {
                    coords.push(FieldElement::from_index(self.field, t));
                }
                self.idx += 1;
                return Some(ProjPoint { coords });
            }
            self.chart += 1;
            self.idx = 0;
            self.chart_size = if self.chart <= self.n {
                self.field.cardinality().pow((self.n - self.chart) as u32)
            } else {
                0
            };
        }
        None
    }
}

/// Iterator over `P^n(F_q)`, deterministic order, with a budget guard.
pub fn enum_proj<'a>(n: usize, field: &'a Field, budget: Option<u128>) -> Result<ProjPoints<'a>> {
    let budget = budget.unwrap_or(DEFAULT_ENUM_BUDGET);
    let needed = proj_count(n, field.cardinality());
    if needed > budget {
        return Err(Error::EnumerationBudget { needed, budget });
    }
    Ok(ProjPoints {
        field,
        n,
        chart: 0,
        idx: 0,
        chart_size: field.cardinality().pow(n as u32),
    })
}

/// Value of `f` at the canonical representative of `P`. Well defined up to
/// the scaling `f(lambda x) = lambda^deg f(x)`; the zero-test is canonical.
pub fn eval_proj(f: &MPoly, p: &ProjPoint) -> Result<FieldElement> {
    if f.arity() != p.coords.len() {
        return Err(Error::ArityMismatch {
            expected: f.arity(),
            got: p.coords.len(),
        });
    }
    Ok(f.eval(p.coords()))
}

/// Number of `r`-dimensional linear subspaces of an `n`-dimensional space
/// over `F_q` (the Gaussian binomial), exact.
pub fn gaussian_count(r: u32, n: u32, q: u64) -> Result<BigUint> {
    if r > n {
        return Err(Error::Unsupported(format!(
            "subspace dimension {r} exceeds ambient dimension {n}"
        )));
    }
    let q = BigUint::from(q);
    let bracket = |t: u32| -> BigUint {
        // 1 + q + ... + q^{t-1}
        let mut acc = BigUint::from(0u32);
        let mut pw = BigUint::from(1u32);
        for _ in 0..t {
            acc += &pw;
            pw *= &q;
        }
        acc
    };
    let mut num = BigUint::from(1u32);
    for t in 1..=n {
        num *= bracket(t);
    }
    let mut den = BigUint::from(1u32);
    for t in 1..=r {
        den *= bracket(t);
    }
    for t in 1..=(n - r) {
        den *= bracket(t);
    }
    Ok(num / den)
}

/// Brute-force subspace count by explicit span closure over the `q^n` vectors
/// of `F_q^n`. Only for tiny inputs (`q^n <= 128`); used as an oracle.
pub fn count_subspaces_bruteforce(r: u32, n: u32, q: u64) -> Result<u64> {
    let total = (q as u128).pow(n);
    if total > 128 {
        return Err(Error::Unsupported(format!(
            "brute force needs q^n <= 128, got {total}"
        )));
    }
    let total = total as usize;
    let nv = n as usize;
    let digits = |mut v: usize| -> Vec<u64> {
        let mut d = vec![0u64; nv];
        for slot in 0..nv {
            d[slot] = (v as u64) % q;
            v /= q as usize;
        }
        d
    };
    let undigits = |d: &[u64]| -> usize {
        let mut acc = 0usize;
        for slot in (0..nv).rev() {
            acc = acc * q as usize + d[slot] as usize;
        }
        acc
    };
    // add and scale tables over vector indices
    let mut add = vec![vec![0usize; total]; total];
    for a in 0..total {
        for b in 0..total {
            let da = digits(a);
            let db = digits(b);
            let ds: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % q).collect();
            add[a][b] = undigits(&ds);
        }
    }
    let scale = |s: u64, a: usize| -> usize {
        let da = digits(a);
        let ds: Vec<u64> = da.iter().map(|x| (x * s) % q).collect();
        undigits(&ds)
    };
    let closure = |members: u128, v: usize| -> u128 {
        // span of members (already a subspace) and v
        let mut out = 0u128;
        for s in 0..total {
            if members >> s & 1 == 0 {
                continue;
            }
            for a in 0..q {
                out |= 1 << add[scale(a, v)][s];
            }
        }
        out
    };
    let mut level: std::collections::HashSet<u128> = std::collections::HashSet::new();
    level.insert(1u128); // {0}
    if r == 0 {
        return Ok(1);
    }
    for _dim in 1..=r {
        let mut next = std::collections::HashSet::new();
        for &s in &level {
            for v in 1..total {
                if s >> v & 1 == 1 {
                    continue;
                }
                next.insert(closure(s, v));
            }
        }
        level = next;
    }
    Ok(level.len() as u64)
}

/// A closed point: a single Frobenius orbit of geometric points over an
/// extension of the base field. The degree is the orbit size.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClosedPoint {
    base: Field,
    orbit: Vec<ProjPoint>,
    residue_degree: u32,
}

impl ClosedPoint {
    pub fn base_field(&self) -> &Field {
        &self.base
    }

    /// Points of the orbit, sorted canonically.
    pub fn orbit(&self) -> &[ProjPoint] {
        &self.orbit
    }

    /// Orbit size.
    pub fn degree(&self) -> u32 {
        self.orbit.len() as u32
    }

    /// Extension degree `m` of the field the orbit is materialized in.
    pub fn residue_degree(&self) -> u32 {
        self.residue_degree
    }

    /// Canonical orbit representative.
    pub fn representative(&self) -> &ProjPoint {
        &self.orbit[0]
    }

    pub fn sort_key(&self) -> (u32, Vec<u64>) {
        (self.degree(), self.orbit[0].sort_key())
    }
}

impl fmt::Display for ClosedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (deg {})", self.orbit[0], self.degree())
    }
}

/// The Frobenius orbit of `p` over the base field. The point's field must be
/// an extension of `base` (same characteristic, compatible degrees).
pub fn frobenius_orbit(p: &ProjPoint, base: &Field) -> Result<ClosedPoint> {
    let pf = p.field();
    if pf.p() != base.p() || pf.degree() % base.degree() != 0 {
        return Err(Error::IncompatibleEmbedding);
    }
    let m = pf.degree() / base.degree();
    let mut orbit = vec![p.clone()];
    let mut cur = p.frobenius(base);
    while cur != *p {
        orbit.push(cur.clone());
        cur = cur.frobenius(base);
        if orbit.len() > m as usize {
            return Err(Error::Unsupported("Frobenius orbit did not close".into()));
        }
    }
    orbit.sort_by_key(|q| q.sort_key());
    debug_assert_eq!(m % orbit.len() as u32, 0);
    Ok(ClosedPoint {
        base: base.clone(),
        orbit,
        residue_degree: m,
    })
}

/// A hypersurface over an extension field together with the embedding from
/// the base: the data needed to descend rational points.
#[derive(Debug, Clone)]
pub struct DescentView {
    f: MPoly,
    n: usize,
    embedding: FieldEmbedding,
}

impl DescentView {
    /// `f` lives over the embedding's target field.
    pub fn new(f: MPoly, embedding: FieldEmbedding) -> Result<Self> {
        if f.field() != embedding.target() {
            return Err(Error::IncompatibleEmbedding);
        }
        let n = f.arity() - 1;
        Ok(DescentView { f, n, embedding })
    }

    pub fn poly(&self) -> &MPoly {
        &self.f
    }

    pub fn embedding(&self) -> &FieldEmbedding {
        &self.embedding
    }
}

/// The descended rational points: points of `P^n(F_q)` that, embedded into
/// the extension coordinates, lie on the variety.
pub fn rational_points_descent(view: &DescentView, budget: Option<u128>) -> Result<Vec<ProjPoint>> {
    let mut out = Vec::new();
    for p in enum_proj(view.n, view.embedding.source(), budget)? {
        let q = p.embed(&view.embedding);
        if eval_proj(&view.f, &q)?.is_zero() {
            out.push(q);
        }
    }
    Ok(out)
}
