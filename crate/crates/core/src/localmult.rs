//! Local multiplicities of points on hypersurfaces.
//!
//! Two independent algorithms are provided: the order of the translated local
//! equation, and the smallest order with a nonvanishing Hasse coefficient at
//! the point. The Hilbert-Samuel formula comes with a linear-algebra rank
//! oracle, and 0-dimensional local lengths double as plane-curve intersection
//! multiplicities (plane-curve local rings are Cohen-Macaulay, so the length
//! computes the intersection number).

use crate::geom::{eval_proj, ClosedPoint, ProjPoint};
use crate::gf::{Field, FieldElement, FieldEmbedding};
use crate::mpoly::{binom, exponents_of_degree, hasse_expand, translate, MPoly, Monomial};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// `X = V(f)` in `P^n` for a nonzero homogeneous `f` of degree `delta`.
#[derive(Debug, Clone)]
pub struct HypersurfaceScheme {
    f: MPoly,
    n: usize,
    delta: u32,
}

impl HypersurfaceScheme {
    pub fn new(f: MPoly, n: usize) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if f.arity() != n + 1 {
            return Err(Error::ArityMismatch {
                expected: n + 1,
                got: f.arity(),
            });
        }
        if !f.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        let delta = f.total_degree().unwrap();
        if delta == 0 {
            return Err(Error::Unsupported(
                "degree-zero equation cuts nothing".into(),
            ));
        }
        Ok(HypersurfaceScheme { f, n, delta })
    }

    pub fn poly(&self) -> &MPoly {
        &self.f
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.delta
    }

    pub fn field(&self) -> &Field {
        self.f.field()
    }

    /// The same hypersurface with coefficients in an extension field.
    pub fn embed(&self, emb: &FieldEmbedding) -> HypersurfaceScheme {
        HypersurfaceScheme {
            f: self.f.embed(emb),
            n: self.n,
            delta: self.delta,
        }
    }
}

/// Which algorithm produced a multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MultMethod {
    #[serde(rename = "translation")]
    Translation,
    #[serde(rename = "derived-order")]
    DerivedOrder,
}

/// One multiplicity computation at a point.
#[derive(Debug, Clone)]
pub struct MultiplicityRecord {
    pub point: ProjPoint,
    pub mu: u32,
    pub method: MultMethod,
}

/// Local equation of `X` at `P`: dehomogenize at the chart and move `P` to
/// the origin.
pub fn local_equation(x: &HypersurfaceScheme, p: &ProjPoint, chart: usize) -> Result<MPoly> {
    let a = p.affine_coords(chart)?;
    Ok(translate(&x.f, &a, chart))
}

/// Multiplicity as the lowest degree of the translated local equation, in an
/// explicit chart.
pub fn multiplicity_at_chart(
    x: &HypersurfaceScheme,
    p: &ProjPoint,
    chart: usize,
) -> Result<MultiplicityRecord> {
    if !eval_proj(&x.f, p)?.is_zero() {
        return Err(Error::PointNotOnHypersurface);
    }
    let loc = local_equation(x, p, chart)?;
    let mu = loc.lowest_degree()?;
    debug_assert!(mu >= 1 && mu <= x.delta);
    Ok(MultiplicityRecord {
        point: p.clone(),
        mu,
        method: MultMethod::Translation,
    })
}

/// Multiplicity via translation, in the leading chart of the point.
pub fn multiplicity_at(x: &HypersurfaceScheme, p: &ProjPoint) -> Result<MultiplicityRecord> {
    multiplicity_at_chart(x, p, p.leading_chart())
}

/// Multiplicity as the smallest order `alpha >= 1` such that some order-`alpha`
/// Hasse coefficient of `f` does not vanish at the point.
pub fn multiplicity_via_derived(
    x: &HypersurfaceScheme,
    p: &ProjPoint,
) -> Result<MultiplicityRecord> {
    if !eval_proj(&x.f, p)?.is_zero() {
        return Err(Error::PointNotOnHypersurface);
    }
    for alpha in 1..=x.delta {
        let d = hasse_expand(&x.f, alpha)?;
        for (_, g) in d.entries() {
            if !eval_proj(g, p)?.is_zero() {
                return Ok(MultiplicityRecord {
                    point: p.clone(),
                    mu: alpha,
                    method: MultMethod::DerivedOrder,
                });
            }
        }
    }
    // unreachable for nonzero f: the order-delta coefficients are the
    // coefficients of f itself
    Err(Error::NoNonvanishingDerivative { delta: x.delta })
}

/// Multiplicity at a closed point: computed at one orbit representative over
/// its residue field (Galois-constant across the orbit).
pub fn multiplicity_at_closed(
    x: &HypersurfaceScheme,
    cp: &ClosedPoint,
    emb: &FieldEmbedding,
) -> Result<MultiplicityRecord> {
    let xe = x.embed(emb);
    multiplicity_at(&xe, cp.representative())
}

/// The local Hilbert-Samuel value of a hypersurface point of multiplicity `r`
/// in `P^n`: `C(n+s-1, s) - C(n+s-r-1, s-r)`, binomials with negative lower
/// index vanishing.
pub fn hilbert_samuel(n: u32, r: u32, s: u32) -> u128 {
    let n = n as i64;
    let r = r as i64;
    let s = s as i64;
    binom(n + s - 1, s) - binom(n + s - r - 1, s - r)
}

/// Rank oracle for the Hilbert-Samuel value at a rational point: dimension of
/// the degree-`s` monomials in `n` affine variables minus the rank of
/// `{m * in(f_loc) : deg m = s - r}`, with `in(f_loc)` the lowest-degree form
/// of the translated local equation.
pub fn hilbert_samuel_oracle(x: &HypersurfaceScheme, p: &ProjPoint, s: u32) -> Result<u128> {
    if !eval_proj(&x.f, p)?.is_zero() {
        return Err(Error::PointNotOnHypersurface);
    }
    let loc = local_equation(x, p, p.leading_chart())?;
    let r = loc.lowest_degree()?;
    // lowest-degree form
    let mut inform = MPoly::zero(loc.field(), loc.arity());
    for (m, c) in loc.terms() {
        if m.total_degree() == r {
            inform.add_term(m.clone(), c.clone());
        }
    }
    let nvars = x.n;
    let cols = exponents_of_degree(nvars, s);
    let col_index: std::collections::HashMap<&Monomial, usize> =
        cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let rows: Vec<Vec<FieldElement>> = if s < r {
        vec![]
    } else {
        exponents_of_degree(nvars, s - r)
            .into_iter()
            .map(|m| {
                let prod = inform.mul_term(&m, &FieldElement::one(loc.field()));
                let mut row = vec![FieldElement::zero(loc.field()); cols.len()];
                for (mm, c) in prod.terms() {
                    row[col_index[mm]] = c.clone();
                }
                row
            })
            .collect()
    };
    let rank = row_rank(rows);
    Ok(cols.len() as u128 - rank as u128)
}

/// Rank of a dense matrix over the field by Gaussian elimination.
pub(crate) fn row_rank(mut rows: Vec<Vec<FieldElement>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let pivot = (rank..rows.len()).find(|&r| !rows[r][col].is_zero());
        let Some(pr) = pivot else { continue };
        rows.swap(rank, pr);
        let inv = rows[rank][col].inv();
        for c in col..ncols {
            rows[rank][c] = rows[rank][c].mul(&inv);
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..ncols {
                    let t = rows[rank][c].mul(&factor);
                    rows[r][c] = rows[r][c].sub(&t);
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Vector-space dimension of the local ring at the origin modulo the ideal
/// generated by `gens` (affine polynomials), by truncated Gaussian
/// elimination. Certified when the standard-monomial staircase is stable for
/// two consecutive degrees; errors if the cap is reached first (the origin is
/// then not isolated, or the cap is too small).
pub fn local_length_0dim(gens: &[MPoly], degree_cap: u32) -> Result<u64> {
    if gens.is_empty() {
        return Err(Error::StabilizationCap { cap: degree_cap });
    }
    let field = gens[0].field().clone();
    let arity = gens[0].arity();
    let cap = degree_cap;
    // columns: all monomials of total degree < cap, ascending (degree, lex)
    let mut cols: Vec<Monomial> = Vec::new();
    let mut degree_start = vec![0usize; cap as usize + 1];
    for d in 0..cap {
        degree_start[d as usize] = cols.len();
        cols.extend(exponents_of_degree(arity, d));
    }
    degree_start[cap as usize] = cols.len();
    let col_index: std::collections::HashMap<&Monomial, usize> =
        cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
    // rows: m * g truncated below degree cap
    let mut rows: Vec<Vec<FieldElement>> = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        let ord = g.lowest_degree().unwrap();
        if ord >= cap {
            continue;
        }
        for d in 0..(cap - ord) {
            for m in exponents_of_degree(arity, d) {
                let prod = g.mul_term(&m, &FieldElement::one(&field));
                let mut row = vec![FieldElement::zero(&field); cols.len()];
                let mut nonzero = false;
                for (mm, c) in prod.terms() {
                    if mm.total_degree() < cap {
                        row[col_index[mm]] = c.clone();
                        nonzero = true;
                    }
                }
                if nonzero {
                    rows.push(row);
                }
            }
        }
    }
    // echelon with ascending column pivots; pivot columns are the leading
    // monomials, the rest are standard
    let ncols = cols.len();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        let pivot = (rank..rows.len()).find(|&r| !rows[r][col].is_zero());
        let Some(pr) = pivot else { continue };
        rows.swap(rank, pr);
        let inv = rows[rank][col].inv();
        for c in col..ncols {
            rows[rank][c] = rows[rank][c].mul(&inv);
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..ncols {
                    let t = rows[rank][c].mul(&factor);
                    rows[r][c] = rows[r][c].sub(&t);
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    // d_D = #columns of degree < D minus #pivots among them. Equality of two
    // consecutive values says no standard monomial has degree D, which forces
    // the maximal-ideal power into the ideal: the staircase is stable and d_D
    // is the local length.
    let mut prev: Option<u64> = None;
    for dcap in 1..=cap {
        let upto = degree_start[dcap as usize];
        let pivots_upto = pivot_cols.iter().take_while(|&&c| c < upto).count();
        let dim = (upto - pivots_upto) as u64;
        if prev == Some(dim) {
            return Ok(dim);
        }
        prev = Some(dim);
    }
    Err(Error::StabilizationCap { cap })
}

/// Intersection multiplicity of two plane curves at a point, as the local
/// length of the two translated local equations. Errors when the curves share
/// a component through the point (the staircase never stabilizes).
pub fn plane_intersection_mult(
    fc: &HypersurfaceScheme,
    gc: &HypersurfaceScheme,
    p: &ProjPoint,
) -> Result<u64> {
    if fc.n != 2 || gc.n != 2 {
        return Err(Error::Unsupported("plane intersection needs n = 2".into()));
    }
    let chart = p.leading_chart();
    let floc = local_equation(fc, p, chart)?;
    let gloc = local_equation(gc, p, chart)?;
    let cap = fc.delta * gc.delta + 2;
    local_length_0dim(&[floc, gloc], cap).map_err(|e| match e {
        Error::StabilizationCap { .. } => Error::NonProperIntersection,
        other => other,
    })
}
