//! End-to-end verification: seeded corpus generation, the multiplicity-sum
//! bound, the concurrent-lines family with its exact count, the plane-curve
//! bound, point-count bounds, and pairwise plane-curve intersection totals.
//! Reports serialize to JSON with every integer as a decimal string.

use crate::geom::{enum_proj, eval_proj, proj_count, ProjPoint};
use crate::gf::{embed_build, Field, FieldElement};
use crate::ideals::{
    complete_intersection_search, is_reduced, plane_closed_points, singular_locus_dim,
    GroebnerLimits,
};
use crate::localmult::{
    multiplicity_at, plane_intersection_mult, HypersurfaceScheme, MultiplicityRecord,
};
use crate::mpoly::{exponents_of_degree, MPoly};
use crate::{Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Serialize integers as decimal strings (the report schema has no bare
/// numbers and no floats).
mod int_str {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u128, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<u128, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

mod int_str_signed {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &i64, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<i64, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One multiplicity entry of a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRecord {
    pub point: String,
    #[serde(with = "int_str")]
    pub mu: u128,
    pub method: String,
}

impl From<&MultiplicityRecord> for PointRecord {
    fn from(r: &MultiplicityRecord) -> Self {
        PointRecord {
            point: r.point.to_string(),
            mu: r.mu as u128,
            method: match r.method {
                crate::localmult::MultMethod::Translation => "translation".into(),
                crate::localmult::MultMethod::DerivedOrder => "derived-order".into(),
            },
        }
    }
}

/// One verification record for the multiplicity-sum bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    #[serde(with = "int_str")]
    pub delta: u128,
    #[serde(with = "int_str")]
    pub n: u128,
    #[serde(with = "int_str")]
    pub q: u128,
    #[serde(with = "int_str_signed")]
    pub s: i64,
    #[serde(with = "int_str")]
    pub lhs: u128,
    #[serde(with = "int_str")]
    pub rhs: u128,
    pub ok: bool,
    /// Points of multiplicity at least 2.
    pub per_point: Vec<PointRecord>,
    /// `lhs / (delta (delta-1)^{n-s-1} max(delta-1, q)^s)` as a reduced
    /// fraction, recorded for inspection only.
    pub ratio: String,
    #[serde(with = "int_str")]
    pub elapsed_ms: u128,
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn reduced_fraction(num: u128, den: u128) -> String {
    if den == 0 {
        return format!("{num}/0");
    }
    let g = gcd_u128(num, den).max(1);
    format!("{}/{}", num / g, den / g)
}

/// All rational points of the hypersurface, with their multiplicities.
pub fn rational_multiplicities(
    x: &HypersurfaceScheme,
    budget: Option<u128>,
) -> Result<Vec<MultiplicityRecord>> {
    let mut out = Vec::new();
    for p in enum_proj(x.ambient_dim(), x.field(), budget)? {
        if eval_proj(x.poly(), &p)?.is_zero() {
            out.push(multiplicity_at(x, &p)?);
        }
    }
    Ok(out)
}

/// Verifies the multiplicity-sum bound on a reduced hypersurface: the sum of
/// `mu (mu - 1)^{n-s-1}` over rational points against the degree-and-count
/// right side. A smooth hypersurface must produce a zero left side.
pub fn verify_main_bound(
    x: &HypersurfaceScheme,
    limits: &GroebnerLimits,
    budget: Option<u128>,
) -> Result<BoundReport> {
    let start = Instant::now();
    let n = x.ambient_dim();
    if n < 2 {
        return Err(Error::Unsupported("the bound needs n >= 2".into()));
    }
    let (reduced, reason) = is_reduced(x, limits)?;
    if !reduced {
        return Err(Error::NonReducedInput(reason));
    }
    let delta = x.degree() as u128;
    let q = x.field().cardinality() as u128;
    let s = singular_locus_dim(x, limits)?.dim;
    let exponent = (n as i64 - s - 1) as u32;
    let records = rational_multiplicities(x, budget)?;
    let mut lhs: u128 = 0;
    for r in &records {
        let mu = r.mu as u128;
        lhs += mu * (mu - 1).pow(exponent);
    }
    let rhs = if s < 0 {
        0
    } else {
        main_bound_rhs(delta, n, s as usize, q)
    };
    let ok = if s < 0 { lhs == 0 } else { lhs <= rhs };
    let ratio = if s < 0 {
        "0/1".to_string()
    } else {
        let denom = delta * (delta - 1).pow(exponent) * (delta - 1).max(q).pow(s as u32);
        reduced_fraction(lhs, denom)
    };
    Ok(BoundReport {
        delta,
        n: n as u128,
        q,
        s,
        lhs,
        rhs,
        ok,
        per_point: records
            .iter()
            .filter(|r| r.mu >= 2)
            .map(PointRecord::from)
            .collect(),
        ratio,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// The right side `sum_{t=0}^{s} delta (delta-1)^{n-s-1+t} #P^{s-t}(F_q)`.
pub fn main_bound_rhs(delta: u128, n: usize, s: usize, q: u128) -> u128 {
    let mut acc: u128 = 0;
    for t in 0..=s {
        let e = (n - s - 1 + t) as u32;
        acc += delta * (delta - 1).pow(e) * proj_count(s - t, q as u64);
    }
    // the closed form must match term-by-term accumulation
    debug_assert_eq!(acc, {
        let mut check = 0u128;
        let mut e = (n - s - 1) as u32;
        for d in (0..=s).rev() {
            check += delta * (delta - 1).pow(e) * proj_count(d, q as u64);
            e += 1;
        }
        check
    });
    acc
}

/// The nondecreasing chain `sum mu (mu-1)^t` for `t = 1 ..= n-s-1`.
pub fn counting_chain(mus: &[u32], n: usize, s: i64) -> Vec<u128> {
    let top = (n as i64 - s - 1).max(0) as u32;
    (1..=top)
        .map(|t| {
            mus.iter()
                .map(|&mu| mu as u128 * (mu as u128 - 1).pow(t))
                .sum()
        })
        .collect()
}

/// Report for the concurrent-lines family.
#[derive(Debug, Clone, Serialize)]
pub struct CylinderReport {
    #[serde(with = "int_str")]
    pub delta: u128,
    #[serde(with = "int_str")]
    pub n: u128,
    #[serde(with = "int_str")]
    pub q: u128,
    #[serde(with = "int_str_signed")]
    pub s: i64,
    #[serde(with = "int_str")]
    pub lhs: u128,
    #[serde(with = "int_str")]
    pub expected_lhs: u128,
    #[serde(with = "int_str")]
    pub singular_points: u128,
    #[serde(with = "int_str")]
    pub expected_singular_points: u128,
    pub all_singular_mu_delta: bool,
    pub ok: bool,
}

/// The union of `delta` distinct concurrent lines, viewed in `P^n`.
pub fn cylinder_equation(delta: u32, n: usize, field: &Field) -> Result<MPoly> {
    let q = field.cardinality();
    if delta as u64 > q + 1 {
        return Err(Error::Unsupported(format!(
            "need {delta} distinct slopes but only {} available",
            q + 1
        )));
    }
    let one = FieldElement::one(field);
    let t1 = MPoly::variable(field, n + 1, 1);
    let t2 = MPoly::variable(field, n + 1, 2);
    let mut f = MPoly::constant(field, n + 1, one);
    let mut used = 0;
    for c in crate::gf::enumerate_field(field) {
        if used == delta {
            break;
        }
        f = f.mul(&t1.sub(&t2.mul_scalar(&c)));
        used += 1;
    }
    if used < delta {
        // the slope at infinity: the line T2 = 0
        f = f.mul(&t2);
    }
    Ok(f)
}

/// Builds the concurrent-lines hypersurface in `P^n` and checks: singular
/// locus of dimension exactly `n - 2`, every singular rational point of
/// multiplicity `delta`, and the left side exactly equal to
/// `delta (delta-1) (q^{n-2} + ... + 1)`.
pub fn cylinder_family_check(
    delta: u32,
    n: usize,
    field: &Field,
    limits: &GroebnerLimits,
    budget: Option<u128>,
) -> Result<CylinderReport> {
    if n < 3 {
        return Err(Error::Unsupported("the family lives in n >= 3".into()));
    }
    if delta < 2 {
        return Err(Error::Unsupported(
            "a single line is smooth: need delta >= 2".into(),
        ));
    }
    let f = cylinder_equation(delta, n, field)?;
    let x = HypersurfaceScheme::new(f, n)?;
    let q = field.cardinality() as u128;
    let s = singular_locus_dim(&x, limits)?.dim;
    let records = rational_multiplicities(&x, budget)?;
    let exponent = (n as i64 - s - 1).max(1) as u32;
    let mut lhs: u128 = 0;
    let mut singular = 0u128;
    let mut all_delta = true;
    for r in &records {
        let mu = r.mu as u128;
        lhs += mu * (mu - 1).pow(exponent);
        if r.mu >= 2 {
            singular += 1;
            if r.mu != delta {
                all_delta = false;
            }
        }
    }
    let expected_lhs = delta as u128 * (delta as u128 - 1) * proj_count(n - 2, q as u64);
    let expected_singular = proj_count(n - 2, q as u64);
    let ok = s == n as i64 - 2 && lhs == expected_lhs && singular == expected_singular && all_delta;
    Ok(CylinderReport {
        delta: delta as u128,
        n: n as u128,
        q,
        s,
        lhs,
        expected_lhs,
        singular_points: singular,
        expected_singular_points: expected_singular,
        all_singular_mu_delta: all_delta,
        ok,
    })
}

/// Report for the plane-curve multiplicity bound.
#[derive(Debug, Clone, Serialize)]
pub struct FultonReport {
    #[serde(with = "int_str")]
    pub delta: u128,
    #[serde(with = "int_str")]
    pub rational_sum: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_sum: Option<String>,
    #[serde(with = "int_str")]
    pub rhs: u128,
    #[serde(with = "int_str")]
    pub closed_point_residue_cap: u128,
    pub ok: bool,
}

/// `sum mu (mu - 1) <= delta (delta - 1)` over rational points of a reduced
/// plane curve; with `over_closed_points`, also over closed points weighted
/// by degree (singular closed points enumerated up to the residue-degree
/// cap).
pub fn fulton_check(
    x: &HypersurfaceScheme,
    over_closed_points: bool,
    max_m: u32,
    limits: &GroebnerLimits,
    budget: Option<u128>,
) -> Result<FultonReport> {
    if x.ambient_dim() != 2 {
        return Err(Error::Unsupported("plane-curve bound needs n = 2".into()));
    }
    let (reduced, reason) = is_reduced(x, limits)?;
    if !reduced {
        return Err(Error::NonReducedInput(reason));
    }
    let delta = x.degree() as u128;
    let rhs = delta * (delta - 1);
    let mut rational_sum: u128 = 0;
    for r in rational_multiplicities(x, budget)? {
        let mu = r.mu as u128;
        rational_sum += mu * (mu - 1);
    }
    let mut closed_sum = None;
    if over_closed_points {
        // singular closed points: common zeros of f and its partials
        let mut gens = vec![x.poly().clone()];
        for i in 0..3 {
            let d = x.poly().partial(i);
            if !d.is_zero() {
                gens.push(d);
            }
        }
        let mut acc: u128 = 0;
        for cp in plane_closed_points(&gens, max_m)? {
            let emb = embed_build(x.field(), cp.representative().field())?;
            let xe = x.embed(&emb);
            let mu = multiplicity_at(&xe, cp.representative())?.mu as u128;
            acc += mu * (mu - 1) * cp.degree() as u128;
        }
        closed_sum = Some(acc);
    }
    let ok = rational_sum <= rhs && closed_sum.is_none_or(|c| c <= rhs);
    Ok(FultonReport {
        delta,
        rational_sum,
        closed_sum: closed_sum.map(|c| c.to_string()),
        rhs,
        closed_point_residue_cap: max_m as u128,
        ok,
    })
}

/// Report for the point-count bound.
#[derive(Debug, Clone, Serialize)]
pub struct LineaireReport {
    #[serde(with = "int_str")]
    pub count: u128,
    #[serde(with = "int_str")]
    pub bound: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singular_count: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singular_bound: Option<String>,
    pub ok: bool,
}

/// `#X(F_q) <= delta #P^{n-1}(F_q)`; when the singular locus is cut properly
/// by the derived-curve search, its rational points are also counted against
/// the complete-intersection degree bound.
pub fn lineaire_check(
    x: &HypersurfaceScheme,
    limits: &GroebnerLimits,
    budget: Option<u128>,
) -> Result<LineaireReport> {
    let n = x.ambient_dim();
    let q = x.field().cardinality();
    let delta = x.degree() as u128;
    let mut count: u128 = 0;
    let mut singular_count: u128 = 0;
    for p in enum_proj(n, x.field(), budget)? {
        if !eval_proj(x.poly(), &p)?.is_zero() {
            continue;
        }
        count += 1;
        let singular = (0..=n).all(|i| {
            let d = x.poly().partial(i);
            d.is_zero() || eval_proj(&d, &p).unwrap().is_zero()
        });
        if singular {
            singular_count += 1;
        }
    }
    let bound = delta * proj_count(n - 1, q);
    let mut ok = count <= bound;
    let s = singular_locus_dim(x, limits)?.dim;
    let mut sc = None;
    let mut sb = None;
    if s >= 0 && s <= n as i64 - 2 {
        if complete_intersection_search(x, limits).is_ok() {
            // the singular locus sits inside a complete intersection of
            // degree delta (delta-1)^{n-s-1} and dimension s
            let e = (n as i64 - s - 1) as u32;
            let bound_sing = delta * (delta - 1).pow(e) * proj_count(s as usize, q);
            ok = ok && singular_count <= bound_sing;
            sc = Some(singular_count.to_string());
            sb = Some(bound_sing.to_string());
        }
    }
    Ok(LineaireReport {
        count,
        bound,
        singular_count: sc,
        singular_bound: sb,
        ok,
    })
}

/// One closed point of a pairwise intersection with its multiplicity.
#[derive(Debug, Clone, Serialize)]
pub struct BezoutPoint {
    pub point: String,
    #[serde(with = "int_str")]
    pub degree: u128,
    #[serde(with = "int_str")]
    pub multiplicity: u128,
}

/// Report for the pairwise intersection total.
#[derive(Debug, Clone, Serialize)]
pub struct BezoutReport {
    #[serde(with = "int_str")]
    pub expected: u128,
    #[serde(with = "int_str")]
    pub total: u128,
    pub points: Vec<BezoutPoint>,
    /// Every closed point was materialized within the residue-degree cap.
    pub complete: bool,
    pub ok: bool,
}

/// Sums `i * deg` over all closed points of a proper plane-curve pair and
/// compares against `delta_1 delta_2`. Curves sharing a component are
/// rejected. An undershoot with `complete = false` means some closed point
/// sits beyond the residue-degree cap; an overshoot or an undershoot at full
/// coverage would falsify the count and reports `ok = false`.
pub fn bezout_pair_check(
    fc: &HypersurfaceScheme,
    gc: &HypersurfaceScheme,
    max_m: u32,
) -> Result<BezoutReport> {
    if fc.ambient_dim() != 2 || gc.ambient_dim() != 2 {
        return Err(Error::Unsupported("pairwise totals need n = 2".into()));
    }
    let expected = fc.degree() as u128 * gc.degree() as u128;
    let cps = plane_closed_points(&[fc.poly().clone(), gc.poly().clone()], max_m)?;
    let mut total: u128 = 0;
    let mut points = Vec::new();
    for cp in cps {
        let emb = embed_build(fc.field(), cp.representative().field())?;
        let fe = fc.embed(&emb);
        let ge = gc.embed(&emb);
        let i = plane_intersection_mult(&fe, &ge, cp.representative())? as u128;
        total += i * cp.degree() as u128;
        points.push(BezoutPoint {
            point: cp.representative().to_string(),
            degree: cp.degree() as u128,
            multiplicity: i,
        });
    }
    let complete = total >= expected;
    let ok = total == expected;
    Ok(BezoutReport {
        expected,
        total,
        points,
        complete,
        ok,
    })
}

/// Corpus configuration. The same seed always reproduces the same corpus.
#[derive(Debug, Clone)]
pub struct CorpusConfig {
    pub field: Field,
    pub n: usize,
    pub delta_min: u32,
    pub delta_max: u32,
    pub count: usize,
    pub seed: u64,
    pub require_reduced: bool,
    pub force_singular_point: Option<ProjPoint>,
}

/// Generated corpus plus rejection statistics.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub members: Vec<HypersurfaceScheme>,
    pub rejected_nonreduced: u64,
    pub rejected_zero: u64,
}

fn kernel_basis(mut rows: Vec<Vec<FieldElement>>, field: &Field) -> Vec<Vec<FieldElement>> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut rank = 0usize;
    for col in 0..ncols {
        let pivot = (rank..rows.len()).find(|&r| !rows[r][col].is_zero());
        let Some(pr) = pivot else { continue };
        rows.swap(rank, pr);
        let inv = rows[rank][col].inv();
        for c in 0..ncols {
            rows[rank][c] = rows[rank][c].mul(&inv);
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in 0..ncols {
                    let t = rows[rank][c].mul(&factor);
                    rows[r][c] = rows[r][c].sub(&t);
                }
            }
        }
        pivots.push((rank, col));
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![FieldElement::zero(field); ncols];
        v[free] = FieldElement::one(field);
        for &(r, c) in &pivots {
            v[c] = rows[r][free].neg();
        }
        basis.push(v);
    }
    basis
}

/// Deterministic pseudo-random reduced hypersurfaces, rejection-sampled. An
/// optional singular rational point is planted by sampling from the kernel of
/// the linear constraints `f(xi) = 0`, `df/dT_i(xi) = 0`.
pub fn generate_corpus(cfg: &CorpusConfig, limits: &GroebnerLimits) -> Result<Corpus> {
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let field = &cfg.field;
    let q = field.cardinality();
    let arity = cfg.n + 1;
    let mut members = Vec::with_capacity(cfg.count);
    let mut rejected_nonreduced = 0u64;
    let mut rejected_zero = 0u64;
    let budget = (cfg.count as u64).max(1) * 400;
    let mut tried = 0u64;
    while members.len() < cfg.count {
        tried += 1;
        if tried > budget {
            return Err(Error::RejectionBudget { tried });
        }
        let delta = if cfg.delta_max > cfg.delta_min {
            rng.random_range(cfg.delta_min..=cfg.delta_max)
        } else {
            cfg.delta_min
        };
        let monomials = exponents_of_degree(arity, delta);
        let coeffs: Vec<FieldElement> = match &cfg.force_singular_point {
            None => (0..monomials.len())
                .map(|_| FieldElement::from_index(field, rng.random_range(0..q)))
                .collect(),
            Some(xi) => {
                // kernel of the vanishing constraints at xi
                let mut rows = Vec::with_capacity(arity + 1);
                let eval_mono = |m: &crate::mpoly::Monomial| -> FieldElement {
                    let mut p = MPoly::zero(field, arity);
                    p.add_term(m.clone(), FieldElement::one(field));
                    p.eval(xi.coords())
                };
                rows.push(monomials.iter().map(&eval_mono).collect::<Vec<_>>());
                for i in 0..arity {
                    rows.push(
                        monomials
                            .iter()
                            .map(|m| {
                                let mut p = MPoly::zero(field, arity);
                                p.add_term(m.clone(), FieldElement::one(field));
                                p.partial(i).eval(xi.coords())
                            })
                            .collect(),
                    );
                }
                let basis = kernel_basis(rows, field);
                let mut v = vec![FieldElement::zero(field); monomials.len()];
                for b in &basis {
                    let c = FieldElement::from_index(field, rng.random_range(0..q));
                    for (slot, bv) in v.iter_mut().zip(b) {
                        *slot = slot.add(&bv.mul(&c));
                    }
                }
                v
            }
        };
        let f = MPoly::from_terms(
            field,
            arity,
            monomials
                .into_iter()
                .zip(coeffs)
                .filter(|(_, c)| !c.is_zero()),
        );
        if f.is_zero() || f.total_degree() != Some(delta) {
            rejected_zero += 1;
            continue;
        }
        let x = HypersurfaceScheme::new(f, cfg.n)?;
        if cfg.require_reduced && !is_reduced(&x, limits)?.0 {
            rejected_nonreduced += 1;
            continue;
        }
        members.push(x);
    }
    Ok(Corpus {
        members,
        rejected_nonreduced,
        rejected_zero,
    })
}

/// Deterministic proper plane-curve pairs: both curves reduced-independent
/// random equations, pairs sharing a component or with closed points beyond
/// the residue-degree cap are resampled (the draw log stays reproducible
/// under the seed).
pub fn generate_proper_pairs(
    field: &Field,
    delta_pairs: &[(u32, u32)],
    count: usize,
    seed: u64,
    max_m: u32,
) -> Result<Vec<(HypersurfaceScheme, HypersurfaceScheme, BezoutReport)>> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let q = field.cardinality();
    let mut out = Vec::with_capacity(count);
    let mut tried = 0u64;
    let budget = (count as u64).max(1) * 200;
    while out.len() < count {
        tried += 1;
        if tried > budget {
            return Err(Error::RejectionBudget { tried });
        }
        let (d1, d2) = delta_pairs[rng.random_range(0..delta_pairs.len())];
        let mut draw = |delta: u32| -> MPoly {
            let monomials = exponents_of_degree(3, delta);
            MPoly::from_terms(
                field,
                3,
                monomials.into_iter().filter_map(|m| {
                    let c = FieldElement::from_index(field, rng.random_range(0..q));
                    if c.is_zero() {
                        None
                    } else {
                        Some((m, c))
                    }
                }),
            )
        };
        let f = draw(d1);
        let g = draw(d2);
        if f.is_zero() || g.is_zero() {
            continue;
        }
        if f.total_degree() != Some(d1) || g.total_degree() != Some(d2) {
            continue;
        }
        let fc = HypersurfaceScheme::new(f, 2)?;
        let gc = HypersurfaceScheme::new(g, 2)?;
        match bezout_pair_check(&fc, &gc, max_m) {
            Ok(report) if report.ok => out.push((fc, gc, report)),
            Ok(_) => continue, // a point beyond the cap: resample
            Err(Error::NotZeroDimensional) => continue, // shared component
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
