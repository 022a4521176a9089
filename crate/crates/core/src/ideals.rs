//! A small Buchberger engine over finite fields, with the dimension,
//! reducedness and search routines built on top of it: Krull/projective
//! dimension by independent variable sets, the Jacobian-criterion singular
//! locus, and the complete-intersection search over growing field extensions.
//! Elimination through lexicographic bases also powers the closed-point
//! enumeration of 0-dimensional plane loci.

use crate::geom::{frobenius_orbit, ClosedPoint, ProjPoint};
use crate::gf::{embed_build, enumerate_field, field_create, Field, FieldElement};
use crate::localmult::HypersurfaceScheme;
use crate::mpoly::{hasse_expand, MPoly, Monomial};
use crate::upoly::UPoly;
use crate::{Error, Result};
use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

/// Ceiling on extension degrees tried by the complete-intersection search.
/// The underlying existence statement gives no effective bound; this cap is
/// an artifact policy and exhaustion is reported, not absorbed.
pub const CI_SEARCH_MAX_M: u32 = 12;

const CI_COMBO_BUDGET: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderKind {
    GradedReverseLex,
    Lex,
}

/// A monomial order: kind plus a variable priority permutation
/// (`priority[0]` is the most significant variable).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub priority: Vec<usize>,
}

impl MonomialOrder {
    pub fn grevlex(arity: usize) -> Self {
        MonomialOrder {
            kind: OrderKind::GradedReverseLex,
            priority: (0..arity).collect(),
        }
    }

    pub fn lex(arity: usize) -> Self {
        MonomialOrder {
            kind: OrderKind::Lex,
            priority: (0..arity).collect(),
        }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.kind {
            OrderKind::Lex => {
                for &v in &self.priority {
                    match a.0[v].cmp(&b.0[v]) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            }
            OrderKind::GradedReverseLex => {
                match a.total_degree().cmp(&b.total_degree()) {
                    Ordering::Equal => {}
                    ord => return ord,
                }
                for &v in self.priority.iter().rev() {
                    match a.0[v].cmp(&b.0[v]) {
                        Ordering::Equal => continue,
                        // smaller exponent in the least significant slot wins
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                    }
                }
                Ordering::Equal
            }
        }
    }
}

/// Leading term of a nonzero polynomial under the order.
pub fn leading_term<'a>(f: &'a MPoly, order: &MonomialOrder) -> (&'a Monomial, &'a FieldElement) {
    f.terms()
        .max_by(|(m1, _), (m2, _)| order.cmp(m1, m2))
        .expect("leading term of zero polynomial")
}

/// Full normal form of `f` modulo `gens` under the order.
pub fn reduce(f: &MPoly, gens: &[MPoly], order: &MonomialOrder) -> MPoly {
    let field = f.field().clone();
    let mut rem = MPoly::zero(&field, f.arity());
    let mut work = f.clone();
    'outer: while !work.is_zero() {
        let (lm, lc) = {
            let (m, c) = leading_term(&work, order);
            (m.clone(), c.clone())
        };
        for g in gens {
            if g.is_zero() {
                continue;
            }
            let (gm, gc) = leading_term(g, order);
            if gm.divides(&lm) {
                let factor = lc.mul(&gc.inv());
                let quot = gm.div_into(&lm);
                work = work.sub(&g.mul_term(&quot, &factor));
                continue 'outer;
            }
        }
        rem.add_term(lm.clone(), lc.clone());
        let mut lt = MPoly::zero(&field, work.arity());
        lt.add_term(lm, lc);
        work = work.sub(&lt);
    }
    rem
}

/// S-polynomial of two nonzero polynomials.
pub fn s_polynomial(f: &MPoly, g: &MPoly, order: &MonomialOrder) -> MPoly {
    let (fm, fc) = leading_term(f, order);
    let (gm, gc) = leading_term(g, order);
    let lcm = fm.lcm(gm);
    let a = f.mul_term(&fm.div_into(&lcm), &fc.inv());
    let b = g.mul_term(&gm.div_into(&lcm), &gc.inv());
    a.sub(&b)
}

/// Desk-scale ceilings for the Buchberger loop.
#[derive(Debug, Clone)]
pub struct GroebnerLimits {
    pub max_vars: usize,
    pub max_degree: u32,
    pub max_pairs: usize,
}

impl Default for GroebnerLimits {
    fn default() -> Self {
        GroebnerLimits {
            max_vars: 6,
            max_degree: 12,
            max_pairs: 200_000,
        }
    }
}

/// A reduced Groebner basis: monic generators, pairwise non-divisible leading
/// terms, deterministic order.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    gens: Vec<MPoly>,
    order: MonomialOrder,
    homogeneous: bool,
}

impl GroebnerBasis {
    pub fn generators(&self) -> &[MPoly] {
        &self.gens
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn is_homogeneous_ideal(&self) -> bool {
        self.homogeneous
    }

    pub fn normal_form(&self, f: &MPoly) -> MPoly {
        reduce(f, &self.gens, &self.order)
    }

    /// Ideal membership by division.
    pub fn contains(&self, f: &MPoly) -> bool {
        self.normal_form(f).is_zero()
    }
}

/// Buchberger with the normal selection strategy (smallest lcm degree first),
/// coprime-leading-term and chain criteria, and monic normalization at every
/// reduction. Returns the reduced basis.
pub fn buchberger(
    gens: &[MPoly],
    order: &MonomialOrder,
    limits: &GroebnerLimits,
) -> Result<GroebnerBasis> {
    let mut basis: Vec<MPoly> = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        if g.arity() > limits.max_vars {
            return Err(Error::GroebnerGuard {
                vars: g.arity(),
                degree: g.total_degree().unwrap_or(0),
            });
        }
        if g.total_degree().unwrap() > limits.max_degree {
            return Err(Error::GroebnerGuard {
                vars: g.arity(),
                degree: g.total_degree().unwrap(),
            });
        }
        let (_, lc) = leading_term(g, order);
        basis.push(g.mul_scalar(&lc.inv()));
    }
    let homogeneous = gens.iter().all(|g| g.is_homogeneous());
    let mut pairs: BinaryHeap<std::cmp::Reverse<(u32, usize, usize)>> = BinaryHeap::new();
    let lcm_deg = |basis: &[MPoly], i: usize, j: usize| -> u32 {
        let (mi, _) = leading_term(&basis[i], order);
        let (mj, _) = leading_term(&basis[j], order);
        mi.lcm(mj).total_degree()
    };
    for j in 1..basis.len() {
        for i in 0..j {
            pairs.push(std::cmp::Reverse((lcm_deg(&basis, i, j), i, j)));
        }
    }
    let mut treated: HashSet<(usize, usize)> = HashSet::new();
    let mut processed = 0usize;
    while let Some(std::cmp::Reverse((_, i, j))) = pairs.pop() {
        processed += 1;
        if processed > limits.max_pairs {
            return Err(Error::GroebnerCeiling {
                processed,
                pending: pairs.len(),
                basis: basis.len(),
            });
        }
        treated.insert((i, j));
        let (mi, _) = leading_term(&basis[i], order);
        let (mj, _) = leading_term(&basis[j], order);
        let lcm = mi.lcm(mj);
        // coprime criterion
        if lcm == mi.mul(mj) {
            continue;
        }
        // chain criterion
        let mut skip = false;
        for k in 0..basis.len() {
            if k == i || k == j {
                continue;
            }
            let (mk, _) = leading_term(&basis[k], order);
            if mk.divides(&lcm)
                && treated.contains(&(i.min(k), i.max(k)))
                && treated.contains(&(j.min(k), j.max(k)))
            {
                skip = true;
                break;
            }
        }
        if skip {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j], order);
        let r = reduce(&s, &basis, order);
        if r.is_zero() {
            continue;
        }
        let (_, lc) = leading_term(&r, order);
        let r = r.mul_scalar(&lc.inv());
        let new_idx = basis.len();
        basis.push(r);
        for i in 0..new_idx {
            pairs.push(std::cmp::Reverse((lcm_deg(&basis, i, new_idx), i, new_idx)));
        }
    }
    // minimal basis: drop generators whose leading term is divisible by
    // another's
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let (mi, _) = leading_term(&basis[i], order);
            let (mj, _) = leading_term(&basis[j], order);
            if mj.divides(mi) && (mi != mj || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let minimal: Vec<MPoly> = basis
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(g, _)| g)
        .collect();
    // tail-reduce each generator against the others
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<MPoly> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let r = reduce(&minimal[i], &others, order);
        debug_assert!(!r.is_zero());
        let (_, lc) = leading_term(&r, order);
        reduced.push(r.mul_scalar(&lc.inv()));
    }
    reduced.sort_by(|a, b| {
        let (ma, _) = leading_term(a, order);
        let (mb, _) = leading_term(b, order);
        order.cmp(ma, mb)
    });
    Ok(GroebnerBasis {
        gens: reduced,
        order: order.clone(),
        homogeneous,
    })
}

/// Dimension of the projective vanishing locus of a homogeneous ideal, from
/// the largest variable subset independent modulo the leading terms. Empty
/// locus encodes as -1; the zero ideal gives the whole space `n`.
pub fn projective_dimension(gens: &[MPoly], limits: &GroebnerLimits) -> Result<i64> {
    let nonzero: Vec<MPoly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        let arity = gens.first().map_or(0, |g| g.arity());
        return Ok(arity as i64 - 1);
    }
    for g in &nonzero {
        if !g.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
    }
    let arity = nonzero[0].arity();
    let order = MonomialOrder::grevlex(arity);
    let gb = buchberger(&nonzero, &order, limits)?;
    Ok(projective_dimension_of_basis(&gb))
}

/// Projective dimension read off an already-computed Groebner basis.
pub fn projective_dimension_of_basis(gb: &GroebnerBasis) -> i64 {
    let order = gb.order().clone();
    let arity = match gb.generators().first() {
        None => return 0, // callers never hand an empty basis for nonzero ideals
        Some(g) => g.arity(),
    };
    let lts: Vec<Monomial> = gb
        .generators()
        .iter()
        .map(|g| leading_term(g, &order).0.clone())
        .collect();
    // a constant leading term means the unit ideal: empty locus
    if lts.iter().any(|m| m.total_degree() == 0) {
        return -1;
    }
    // Krull dimension of the coordinate ring: the largest variable subset S
    // such that no leading term has support inside S; projective dimension is
    // one less
    let mut best: i64 = 0;
    for mask in 0u32..(1 << arity) {
        let size = mask.count_ones() as i64;
        if size <= best {
            continue;
        }
        let independent = lts.iter().all(|m| m.support().any(|v| mask >> v & 1 == 0));
        if independent {
            best = size;
        }
    }
    best - 1
}

/// Result of the singular-locus computation.
#[derive(Debug, Clone)]
pub struct SingularLocus {
    /// Dimension of the singular locus, -1 when smooth.
    pub dim: i64,
    /// All first partials vanish identically (the equation is a p-th power).
    pub everywhere_singular: bool,
    /// Size of the Groebner basis behind the dimension computation.
    pub basis_size: usize,
}

/// Dimension of the singular locus by the Jacobian criterion: the projective
/// dimension of `(f, df/dT_0, ..., df/dT_n)`.
pub fn singular_locus_dim(
    x: &HypersurfaceScheme,
    limits: &GroebnerLimits,
) -> Result<SingularLocus> {
    let n = x.ambient_dim();
    let partials: Vec<MPoly> = (0..=n).map(|i| x.poly().partial(i)).collect();
    if partials.iter().all(|g| g.is_zero()) {
        return Ok(SingularLocus {
            dim: n as i64 - 1,
            everywhere_singular: true,
            basis_size: 0,
        });
    }
    let mut gens = vec![x.poly().clone()];
    gens.extend(partials.into_iter().filter(|g| !g.is_zero()));
    let order = MonomialOrder::grevlex(n + 1);
    let gb = buchberger(&gens, &order, limits)?;
    Ok(SingularLocus {
        dim: projective_dimension_of_basis(&gb),
        everywhere_singular: false,
        basis_size: gb.generators().len(),
    })
}

/// Reducedness of a hypersurface over a perfect coefficient field: false when
/// every partial vanishes identically (a p-th power), otherwise true iff the
/// singular locus has codimension at least 2 in the hypersurface.
pub fn is_reduced(x: &HypersurfaceScheme, limits: &GroebnerLimits) -> Result<(bool, String)> {
    let sing = singular_locus_dim(x, limits)?;
    let n = x.ambient_dim() as i64;
    if sing.everywhere_singular {
        return Ok((
            false,
            "every first partial vanishes identically: the equation is a p-th power".into(),
        ));
    }
    if sing.dim <= n - 2 {
        Ok((true, format!("singular locus has dimension {}", sing.dim)))
    } else {
        Ok((
            false,
            format!(
                "singular locus has dimension {} = n-1: a repeated component",
                sing.dim
            ),
        ))
    }
}

/// A certified complete intersection cut out by first-order derived
/// hypersurfaces over `F_{q^m}`.
#[derive(Debug, Clone)]
pub struct CompleteIntersection {
    pub m: u32,
    pub field: Field,
    pub embedding: crate::gf::FieldEmbedding,
    /// `g_1, ..., g_{n-s-1}` over the extension field.
    pub gens: Vec<MPoly>,
}

/// Searches for `g_1, ..., g_{n-s-1}` in the span of the first partials over
/// `F_{q^m}`, `m = 1, 2, ...`, such that each step cuts the dimension
/// properly. Pure partials are tried first, then linear combinations with
/// coefficients in deterministic enumeration order.
pub fn complete_intersection_search(
    x: &HypersurfaceScheme,
    limits: &GroebnerLimits,
) -> Result<CompleteIntersection> {
    let n = x.ambient_dim();
    let sing = singular_locus_dim(x, limits)?;
    let s = sing.dim;
    if s < 0 {
        return Err(Error::Unsupported(
            "smooth hypersurface: nothing to cut".into(),
        ));
    }
    if s > n as i64 - 2 {
        return Err(Error::NonReducedInput(
            "singular locus has codimension < 2".into(),
        ));
    }
    let needed = (n as i64 - s - 1) as usize;
    let d1 = hasse_expand(x.poly(), 1)?;
    let pure: Vec<MPoly> = d1.entries().map(|(_, g)| g.clone()).collect();
    let span_basis = d1.basis().to_vec();
    let base = x.field().clone();
    let mut max_tried = 0;
    for m in 1..=CI_SEARCH_MAX_M {
        let ext = match field_create(base.p(), base.degree() * m) {
            Ok(f) => f,
            Err(Error::FieldCap { .. }) => break,
            Err(e) => return Err(e),
        };
        max_tried = m;
        let emb = embed_build(&base, &ext)?;
        let f_ext = x.poly().embed(&emb);
        let pure_ext: Vec<MPoly> = pure.iter().map(|g| g.embed(&emb)).collect();
        let basis_ext: Vec<MPoly> = span_basis.iter().map(|g| g.embed(&emb)).collect();
        let mut found: Vec<MPoly> = Vec::new();
        let mut ok = true;
        for t in 1..=needed {
            let target = n as i64 - 1 - t as i64;
            let mut step: Option<MPoly> = None;
            let mut tried = 0usize;
            let check = |g: &MPoly, found: &[MPoly]| -> Result<bool> {
                let mut gens = vec![f_ext.clone()];
                gens.extend_from_slice(found);
                gens.push(g.clone());
                Ok(projective_dimension(&gens, limits)? == target)
            };
            'candidates: {
                for g in &pure_ext {
                    if check(g, &found)? {
                        step = Some(g.clone());
                        break 'candidates;
                    }
                }
                let q_ext = ext.cardinality();
                let dim_span = basis_ext.len();
                let mut combo = vec![0u64; dim_span];
                loop {
                    // odometer, last coordinate fastest
                    let mut c = dim_span;
                    loop {
                        if c == 0 {
                            break 'candidates;
                        }
                        c -= 1;
                        combo[c] += 1;
                        if combo[c] < q_ext {
                            break;
                        }
                        combo[c] = 0;
                    }
                    // normalize: first nonzero coefficient must be 1
                    let first = combo.iter().position(|&v| v != 0);
                    let Some(first) = first else { continue };
                    if !FieldElement::from_index(&ext, combo[first]).is_one() {
                        continue;
                    }
                    tried += 1;
                    if tried > CI_COMBO_BUDGET {
                        break 'candidates;
                    }
                    let mut g = MPoly::zero(&ext, n + 1);
                    for (idx, b) in basis_ext.iter().enumerate() {
                        if combo[idx] != 0 {
                            g = g.add(&b.mul_scalar(&FieldElement::from_index(&ext, combo[idx])));
                        }
                    }
                    if check(&g, &found)? {
                        step = Some(g);
                        break 'candidates;
                    }
                }
            }
            match step {
                Some(g) => found.push(g),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && found.len() == needed {
            return Ok(CompleteIntersection {
                m,
                field: ext,
                embedding: emb,
                gens: found,
            });
        }
    }
    Err(Error::SearchExhausted {
        max_m: max_tried as usize,
    })
}

// ---------------------------------------------------------------------------
// Closed points of 0-dimensional plane loci

/// Fields larger than this are never scanned element-by-element for roots;
/// points living there are simply not materialized (callers see the deficit
/// against the expected total).
pub const ROOT_SCAN_CAP: u64 = 1 << 16;

/// Visits every root of `h` in extensions of the base field, grouped by exact
/// residue degree `m <= max_m`. The degree-`m` part of `h` is split off by a
/// Frobenius-power gcd and stripped (with multiplicity), so levels without
/// roots cost one gcd and no scan.
fn for_each_root_by_degree(
    h: &UPoly,
    base: &Field,
    max_m: u32,
    mut visit: impl FnMut(u32, &Field, &crate::gf::FieldEmbedding, FieldElement) -> Result<()>,
) -> Result<()> {
    let q = base.cardinality();
    let mut h_rem = h.monic();
    for m in 1..=max_m {
        if h_rem.degree().unwrap_or(0) == 0 {
            break;
        }
        let frob = h_rem.x_pow_q_iterated(q, m);
        let diff = frob.sub(&UPoly::x(base).rem(&h_rem));
        let r_m = UPoly::gcd(&diff, &h_rem);
        if r_m.degree().unwrap_or(0) == 0 {
            continue;
        }
        // strip every copy of the degree-m part
        loop {
            let g = UPoly::gcd(&h_rem, &r_m);
            if g.degree().unwrap_or(0) == 0 {
                break;
            }
            h_rem = h_rem.divrem(&g).0;
        }
        let ext = match field_create(base.p(), base.degree() * m) {
            Ok(f) => f,
            Err(Error::FieldCap { .. }) => break,
            Err(e) => return Err(e),
        };
        if ext.cardinality() > ROOT_SCAN_CAP {
            continue;
        }
        let emb = embed_build(base, &ext)?;
        let r_ext = r_m.embed(&emb);
        for c in enumerate_field(&ext) {
            if r_ext.eval(&c).is_zero() {
                visit(m, &ext, &emb, c)?;
            }
        }
    }
    Ok(())
}

/// All closed points of the common projective vanishing locus of `gens` in
/// `P^2`, materialized as explicit Frobenius orbits over extensions of the
/// base field up to residue degree `max_m` (and within the field cardinality
/// cap). The locus must be 0-dimensional; a positive-dimensional common
/// component is reported as an error.
pub fn plane_closed_points(gens: &[MPoly], max_m: u32) -> Result<Vec<ClosedPoint>> {
    let nonzero: Vec<MPoly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        return Err(Error::NotZeroDimensional);
    }
    let base = nonzero[0].field().clone();
    for g in &nonzero {
        if g.arity() != 3 {
            return Err(Error::ArityMismatch {
                expected: 3,
                got: g.arity(),
            });
        }
    }
    let mut found: Vec<ClosedPoint> = Vec::new();

    // chart 2: the single point [0:0:1]
    let origin2 = [
        FieldElement::zero(&base),
        FieldElement::zero(&base),
        FieldElement::one(&base),
    ];
    if nonzero.iter().all(|g| g.eval(&origin2).is_zero()) {
        let p = ProjPoint::new(origin2.to_vec()).unwrap();
        found.push(frobenius_orbit(&p, &base)?);
    }

    // chart 1: points [0:1:c]; the slice is univariate in T2
    let slices1: Vec<UPoly> = nonzero
        .iter()
        .map(|g| {
            let mut coeffs =
                vec![FieldElement::zero(&base); g.total_degree().unwrap() as usize + 1];
            for (m, c) in g.terms() {
                if m.0[0] == 0 {
                    coeffs[m.0[2] as usize] = coeffs[m.0[2] as usize].add(c);
                }
            }
            UPoly::new(&base, coeffs)
        })
        .collect();
    if slices1.iter().all(|u| u.is_zero()) {
        return Err(Error::NotZeroDimensional); // the line T0 = 0 is a component
    }
    let mut h1 = slices1[0].clone();
    for u in &slices1[1..] {
        h1 = UPoly::gcd(&h1, u);
    }
    collect_line_points(&h1, &base, max_m, &mut found)?;

    // chart 0: the affine system in (T1, T2)
    let aff: Vec<MPoly> = nonzero.iter().map(|g| g.dehomogenize(0)).collect();
    if aff.iter().all(|g| g.is_zero()) {
        return Err(Error::NotZeroDimensional);
    }
    let aff: Vec<MPoly> = aff.into_iter().filter(|g| !g.is_zero()).collect();
    let order = MonomialOrder::lex(2);
    let gb = buchberger(&aff, &order, &GroebnerLimits::default())?;
    // 0-dimensionality: leading terms must include pure powers of both
    // variables (a constant counts)
    let finite_in = |v: usize| {
        gb.generators().iter().any(|g| {
            let (m, _) = leading_term(g, &order);
            m.support().all(|w| w == v)
        })
    };
    if !finite_in(0) || !finite_in(1) {
        return Err(Error::NotZeroDimensional);
    }
    // eliminant: the basis element univariate in T2 (guaranteed by the
    // elimination property of lex for 0-dimensional ideals)
    let h = gb
        .generators()
        .iter()
        .find(|g| g.terms().all(|(m, _)| m.0[0] == 0))
        .ok_or(Error::NotZeroDimensional)?;
    let mut h0 = vec![FieldElement::zero(&base); h.total_degree().unwrap() as usize + 1];
    for (m, c) in h.terms() {
        h0[m.0[1] as usize] = c.clone();
    }
    let h0 = UPoly::new(&base, h0);
    let mut shared_component = false;
    {
        let found = &mut found;
        let shared = &mut shared_component;
        // the y-coordinate c has exact degree d; fiber solutions of degree e
        // over F_{q^d} give closed points of degree d*e
        for_each_root_by_degree(&h0, &base, max_m, |d, ext, emb, c| {
            let mut u: Option<UPoly> = None;
            for g in &aff {
                let ge = g.embed(emb);
                let mut coeffs =
                    vec![FieldElement::zero(ext); ge.total_degree().unwrap() as usize + 1];
                for (mm, cc) in ge.terms() {
                    let v = cc.mul(&c.pow(mm.0[1] as u128));
                    coeffs[mm.0[0] as usize] = coeffs[mm.0[0] as usize].add(&v);
                }
                let fiber = UPoly::new(ext, coeffs);
                u = Some(match u {
                    None => fiber,
                    Some(prev) => {
                        if fiber.is_zero() {
                            prev
                        } else if prev.is_zero() {
                            fiber
                        } else {
                            UPoly::gcd(&prev, &fiber)
                        }
                    }
                });
            }
            let u = u.unwrap();
            if u.is_zero() {
                *shared = true;
                return Ok(());
            }
            if u.degree() == Some(0) {
                return Ok(());
            }
            for_each_root_by_degree(&u, ext, max_m / d, |e, ext2, emb2, x0| {
                let pt = ProjPoint::new(vec![FieldElement::one(ext2), x0.clone(), emb2.map(&c)])
                    .unwrap();
                let orbit = frobenius_orbit(&pt, &base)?;
                if orbit.degree() == d * e && !found.contains(&orbit) {
                    found.push(orbit);
                }
                Ok(())
            })
        })?;
    }
    if shared_component {
        return Err(Error::NotZeroDimensional);
    }
    found.sort_by_key(|cp| cp.sort_key());
    Ok(found)
}

/// Points `[0:1:c]` with `c` a root of `h` of exact residue degree `m`,
/// for `m` up to the cap.
fn collect_line_points(
    h: &UPoly,
    base: &Field,
    max_m: u32,
    found: &mut Vec<ClosedPoint>,
) -> Result<()> {
    if h.degree().unwrap_or(0) == 0 {
        return Ok(());
    }
    for_each_root_by_degree(h, base, max_m, |m, ext, _emb, c| {
        let pt = ProjPoint::new(vec![
            FieldElement::zero(ext),
            FieldElement::one(ext),
            c.clone(),
        ])
        .unwrap();
        let orbit = frobenius_orbit(&pt, base)?;
        if orbit.degree() == m && !found.contains(&orbit) {
            found.push(orbit);
        }
        Ok(())
    })
}
