//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Run with `cargo test --release --test acceptance -- --nocapture`.

use multcount::geom::{
    count_subspaces_bruteforce, enum_proj, eval_proj, frobenius_orbit, gaussian_count, parse_point,
    proj_count, ProjPoint,
};
use multcount::gf::{embed_build, enumerate_field, field_create, Field, FieldElement};
use multcount::harness::{
    counting_chain, cylinder_family_check, fulton_check, generate_corpus, generate_proper_pairs,
    lineaire_check, verify_main_bound, Corpus, CorpusConfig,
};
use multcount::ideals::{
    buchberger, leading_term, reduce, s_polynomial, GroebnerLimits, MonomialOrder,
};
use multcount::itree::{
    aggregate_lhs, check_chongshu2, check_globale, parse_target, scheme_weight_in_tree,
    validate_forest, Forest, IntersectionTree, Label, SchemeDescriptor, SchemeKind, SchemeTarget,
    TreeVertex,
};
use multcount::localmult::{
    hilbert_samuel, hilbert_samuel_oracle, local_length_0dim, multiplicity_at,
    multiplicity_via_derived, plane_intersection_mult, HypersurfaceScheme,
};
use multcount::mpoly::{exponents_of_degree, hasse_expand, poly_parse, MPoly, Monomial};
use num_bigint::BigUint;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use std::time::Instant;

fn limits() -> GroebnerLimits {
    GroebnerLimits::default()
}

fn prime(q: u64) -> Field {
    field_create(q, 1).unwrap()
}

fn scheme(text: &str, field: &Field, n: usize) -> HypersurfaceScheme {
    HypersurfaceScheme::new(poly_parse(text, field, n + 1).unwrap(), n).unwrap()
}

fn pass(name: &str) {
    println!("criterion {name}: PASS");
}

/// The seeded sweep corpus shared by criteria 2, 5 and 6: 204 plain reduced
/// members plus 50 with a planted singular rational point.
fn sweep_corpus() -> Vec<HypersurfaceScheme> {
    let mut members = Vec::new();
    let mut seed = 1000;
    for n in [2usize, 3] {
        for q in [2u64, 3, 5] {
            let cfg = CorpusConfig {
                field: prime(q),
                n,
                delta_min: 2,
                delta_max: 5,
                count: 34,
                seed,
                require_reduced: true,
                force_singular_point: None,
            };
            seed += 1;
            let Corpus {
                members: mut batch, ..
            } = generate_corpus(&cfg, &limits()).unwrap();
            members.append(&mut batch);
        }
    }
    assert_eq!(members.len(), 204);
    // 50 planted singular points
    for (n, q, point, count, seed) in [
        (2usize, 5u64, "1:2:1", 25usize, 77u64),
        (3, 3, "1:1:2:0", 25, 78),
    ] {
        let field = prime(q);
        let xi = parse_point(point, &field, n).unwrap();
        let cfg = CorpusConfig {
            field,
            n,
            delta_min: 3,
            delta_max: 4,
            count,
            seed,
            require_reduced: true,
            force_singular_point: Some(xi.clone()),
        };
        let corpus = generate_corpus(&cfg, &limits()).unwrap();
        for x in &corpus.members {
            assert!(multiplicity_at(x, &xi).unwrap().mu >= 2);
        }
        members.extend(corpus.members);
    }
    assert_eq!(members.len(), 254);
    members
}

/// Criterion 1: the P^4 worked example, exact integers, under a second.
#[test]
fn criterion_01_p4_fixture() {
    let start = Instant::now();
    let f5 = prime(5);
    // mu_M(X_1) = 1 and mu_M(X_2) = 3 at M = [0:1:0:0:0], by both algorithms
    let x1 = scheme("T4", &f5, 4);
    let x2 = scheme("T3*T0^2*T1 - T3*T2^3 + T3*T2^2*T1", &f5, 4);
    let m = parse_point("0:1:0:0:0", &f5, 4).unwrap();
    assert_eq!(multiplicity_at(&x1, &m).unwrap().mu, 1);
    assert_eq!(multiplicity_via_derived(&x1, &m).unwrap().mu, 1);
    assert_eq!(multiplicity_at(&x2, &m).unwrap().mu, 3);
    assert_eq!(multiplicity_via_derived(&x2, &m).unwrap().mu, 3);
    // plane-reduced intersection numbers
    let cubic = scheme("T0^2*T1 - T2^3 + T2^2*T1", &f5, 2);
    let t2line = scheme("T2", &f5, 2);
    let y121 = parse_point("0:1:0", &f5, 2).unwrap();
    let y122 = parse_point("1:0:0", &f5, 2).unwrap();
    assert_eq!(plane_intersection_mult(&cubic, &t2line, &y121).unwrap(), 2);
    assert_eq!(plane_intersection_mult(&cubic, &t2line, &y122).unwrap(), 1);
    // Y_2's children: V(T2) against V(T0*(T1+T0)) inside the plane Y_2
    let c1 = scheme("T2", &f5, 2);
    let c2 = scheme("T0*T1 + T0^2", &f5, 2);
    let y21 = parse_point("0:1:0", &f5, 2).unwrap();
    let y22 = parse_point("1:4:0", &f5, 2).unwrap();
    assert_eq!(plane_intersection_mult(&c1, &c2, &y21).unwrap(), 1);
    assert_eq!(plane_intersection_mult(&c1, &c2, &y22).unwrap(), 1);
    // Y_111: the line Y_11 against the hyperplane T0 + T3, reduced to the
    // plane with coordinates (T0, T1, T3)
    let l1 = scheme("T1", &f5, 2);
    let l2 = scheme("T0 + T2", &f5, 2);
    let y111 = parse_point("1:0:4", &f5, 2).unwrap();
    assert_eq!(plane_intersection_mult(&l1, &l2, &y111).unwrap(), 1);
    // the local length at Y_11, sliced to the plane (t1, t2) in the chart T0
    let a = poly_parse("T0", &f5, 2).unwrap();
    let b = poly_parse("T0 + T0*T1^2 - T1^3", &f5, 2).unwrap();
    assert_eq!(local_length_0dim(&[a, b], 8).unwrap(), 3);
    // the encoded forest: no violations, aggregated left side 3 >= 3
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/data/p4_forest.json"
    ))
    .unwrap();
    let forest = Forest::from_json(&text).unwrap();
    assert!(validate_forest(&forest).is_empty());
    let target = parse_target("0:1:0:0:0", &forest.field, forest.n).unwrap();
    assert_eq!(aggregate_lhs(&forest, &target).unwrap(), 3);
    let verdict = check_chongshu2(&forest, &target, 3).unwrap();
    assert!(verdict.ok && verdict.lhs == 3 && verdict.rhs == 3);
    // per-tree weights: 2 in the first tree, 1 in the second
    assert_eq!(scheme_weight_in_tree(&forest.trees[0], &target), 2);
    assert_eq!(scheme_weight_in_tree(&forest.trees[1], &target), 1);
    // depth-0 global bound: 1*1*3 + 1*1*1 = 4 <= deg(X_1) deg(X_2) = 4
    let g = check_globale(&forest, 2).unwrap();
    assert!(g.ok && g.lhs == 4 && g.rhs == 4);
    assert!(start.elapsed().as_secs() < 1, "fixture exceeded 1 s");
    pass("01 (worked example in P^4)");
}

/// Criterion 2: 254 seeded reduced hypersurfaces all satisfy the bound,
/// within the runtime budget.
#[test]
fn criterion_02_main_theorem_sweep() {
    let start = Instant::now();
    let members = sweep_corpus();
    let mut checked = 0;
    for x in &members {
        let report = verify_main_bound(x, &limits(), None).unwrap();
        assert!(
            report.ok,
            "bound VIOLATED for {} over F_{}",
            x.poly(),
            x.field().cardinality()
        );
        // monotone counting-function chain on the way
        if report.s >= 0 && report.s <= x.ambient_dim() as i64 - 2 {
            let mus: Vec<u32> = multcount::harness::rational_multiplicities(x, None)
                .unwrap()
                .iter()
                .map(|r| r.mu)
                .collect();
            let chain = counting_chain(&mus, x.ambient_dim(), report.s);
            assert!(chain.windows(2).all(|w| w[0] <= w[1]));
            assert_eq!(chain.last().copied(), Some(report.lhs));
        }
        checked += 1;
    }
    let elapsed = start.elapsed();
    assert_eq!(checked, 254);
    assert!(
        elapsed.as_secs() < 300,
        "sweep took {elapsed:?}, budget is 5 minutes"
    );
    pass(&format!(
        "02 (main-theorem sweep, 254/254 in {:.1} s)",
        elapsed.as_secs_f64()
    ));
}

/// Criterion 3: exact left sides for the concurrent-lines family.
#[test]
fn criterion_03_cylinder_exact_values() {
    for (delta, n, q) in [(3u32, 3usize, 5u64), (2, 3, 3), (4, 3, 5), (3, 4, 3)] {
        let field = prime(q);
        let report = cylinder_family_check(delta, n, &field, &limits(), None).unwrap();
        let expected = delta as u128 * (delta as u128 - 1) * proj_count(n - 2, q);
        assert_eq!(report.s, n as i64 - 2, "({delta},{n},{q})");
        assert_eq!(report.lhs, expected, "({delta},{n},{q})");
        assert!(report.ok, "({delta},{n},{q})");
    }
    pass("03 (concurrent-lines exact values)");
}

fn pair_budget(q: u64) -> u32 {
    // largest m with q^m within the field cardinality cap
    let mut m = 0;
    let mut acc: u64 = 1;
    while acc <= (1 << 20) / q {
        acc *= q;
        m += 1;
    }
    m
}

fn criterion4_pairs() -> Vec<(
    HypersurfaceScheme,
    HypersurfaceScheme,
    multcount::harness::BezoutReport,
)> {
    let mut pairs = Vec::new();
    for (q, count, seed) in [(2u64, 34usize, 21u64), (3, 33, 22), (5, 33, 23)] {
        let deltas: &[(u32, u32)] = if q == 5 {
            &[(1, 2), (2, 2), (2, 3)]
        } else {
            &[(1, 3), (2, 2), (2, 3), (3, 3)]
        };
        pairs
            .extend(generate_proper_pairs(&prime(q), deltas, count, seed, pair_budget(q)).unwrap());
    }
    pairs
}

/// Criterion 4: 100 seeded proper pairs, intersection totals exact.
#[test]
fn criterion_04_bezout_plane_pairs() {
    let pairs = criterion4_pairs();
    assert_eq!(pairs.len(), 100);
    for (fc, gc, report) in &pairs {
        assert!(report.complete);
        assert_eq!(
            report.total,
            fc.degree() as u128 * gc.degree() as u128,
            "Bezout total VIOLATED for ({}, {})",
            fc.poly(),
            gc.poly()
        );
    }
    pass("04 (plane-curve intersection totals, 100/100)");
}

/// Criterion 5: the Hilbert-Samuel formula against the rank oracle, for the
/// whole (n, r, s) table and at 50 corpus points.
#[test]
fn criterion_05_hilbert_samuel_vs_oracle() {
    // table: hypersurfaces with a point of prescribed multiplicity r
    let f7 = prime(7);
    for n in 1..=4usize {
        for r in 1..=4u32 {
            // T1^r T0^{delta-r} + T2^{r+1} vanishes at [1:0:...:0] to order r
            // (for n = 1 drop the second term)
            let mut text = format!("T1^{r}*T0");
            if n >= 2 {
                text = format!("T1^{r}*T0 + T2^{}", r + 1);
            }
            let x = scheme(&text, &f7, n);
            let p = {
                let mut coords = vec![FieldElement::one(&f7)];
                coords.extend((0..n).map(|_| FieldElement::zero(&f7)));
                ProjPoint::new(coords).unwrap()
            };
            assert_eq!(multiplicity_at(&x, &p).unwrap().mu, r);
            for s in 0..=8u32 {
                assert_eq!(
                    hilbert_samuel_oracle(&x, &p, s).unwrap(),
                    hilbert_samuel(n as u32, r, s),
                    "(n,r,s) = ({n},{r},{s})"
                );
            }
        }
    }
    // non-pure lowest forms exercise the elimination: products of distinct
    // linear forms
    for r in 2..=4u32 {
        let factors: Vec<String> = (0..r).map(|c| format!("T1 + {c}*T2")).collect();
        let text = format!("T0*{}", factors.join("*"));
        let f = factors
            .iter()
            .fold(poly_parse("T0", &f7, 4).unwrap(), |acc, t| {
                acc.mul(&poly_parse(t, &f7, 4).unwrap())
            });
        let _ = text;
        let x = HypersurfaceScheme::new(f, 3).unwrap();
        let p = parse_point("1:0:0:0", &f7, 3).unwrap();
        assert_eq!(multiplicity_at(&x, &p).unwrap().mu, r);
        for s in 0..=8u32 {
            assert_eq!(
                hilbert_samuel_oracle(&x, &p, s).unwrap(),
                hilbert_samuel(3, r, s)
            );
        }
    }
    // 50 concrete corpus points
    let members = sweep_corpus();
    let mut used = 0;
    'outer: for x in &members {
        for p in enum_proj(x.ambient_dim(), x.field(), None).unwrap() {
            if !eval_proj(x.poly(), &p).unwrap().is_zero() {
                continue;
            }
            let mu = multiplicity_at(x, &p).unwrap().mu;
            for s in 0..=8u32 {
                assert_eq!(
                    hilbert_samuel_oracle(x, &p, s).unwrap(),
                    hilbert_samuel(x.ambient_dim() as u32, mu, s)
                );
            }
            used += 1;
            if used >= 50 {
                break 'outer;
            }
            break; // one point per member, for variety
        }
    }
    assert_eq!(used, 50);
    pass("05 (Hilbert-Samuel formula vs rank oracle)");
}

/// Criterion 6: translation and derived-order multiplicities agree on every
/// rational point of every corpus member; base-change invariance for
/// m in {2, 3, 4} on 50 sampled points.
#[test]
fn criterion_06_dual_algorithms_and_base_change() {
    let members = sweep_corpus();
    let mut sampled = Vec::new();
    for x in &members {
        for p in enum_proj(x.ambient_dim(), x.field(), None).unwrap() {
            if !eval_proj(x.poly(), &p).unwrap().is_zero() {
                continue;
            }
            let a = multiplicity_at(x, &p).unwrap().mu;
            let b = multiplicity_via_derived(x, &p).unwrap().mu;
            assert_eq!(a, b, "methods disagree at {p} on {}", x.poly());
            if sampled.len() < 50 && (a >= 2 || sampled.len() < 20) {
                sampled.push((x.clone(), p.clone(), a));
            }
        }
    }
    assert_eq!(sampled.len(), 50);
    for (x, p, mu) in &sampled {
        let base = x.field().clone();
        for m in 2..=4u32 {
            let ext = field_create(base.p(), base.degree() * m).unwrap();
            let emb = embed_build(&base, &ext).unwrap();
            let xe = x.embed(&emb);
            let pe = p.embed(&emb);
            assert_eq!(multiplicity_at(&xe, &pe).unwrap().mu, *mu);
            assert_eq!(multiplicity_via_derived(&xe, &pe).unwrap().mu, *mu);
        }
    }
    pass("06 (dual multiplicity algorithms and base change)");
}

/// Criterion 7: Gaussian counts against brute-force subspace enumeration.
#[test]
fn criterion_07_gaussian_vs_bruteforce() {
    for q in [2u64, 3] {
        for n in 1..=4u32 {
            if (q as u128).pow(n) > 128 {
                continue;
            }
            for r in 0..=n {
                let brute = count_subspaces_bruteforce(r, n, q).unwrap();
                assert_eq!(
                    gaussian_count(r, n, q).unwrap(),
                    BigUint::from(brute),
                    "Gr({r},{n}) over F_{q}"
                );
            }
        }
    }
    pass("07 (Gaussian counts vs brute force)");
}

/// Criterion 8: the plane-curve bound over closed points for 100 seeded
/// reduced curves; equality on the concurrent-lines family.
#[test]
fn criterion_08_fulton_closed_points() {
    let mut checked = 0;
    for (q, count, seed) in [(2u64, 34usize, 31u64), (3, 33, 32), (5, 33, 33)] {
        let cfg = CorpusConfig {
            field: prime(q),
            n: 2,
            delta_min: 2,
            delta_max: 5,
            count,
            seed,
            require_reduced: true,
            force_singular_point: None,
        };
        let corpus = generate_corpus(&cfg, &limits()).unwrap();
        for x in &corpus.members {
            let report = fulton_check(x, true, pair_budget(q), &limits(), None).unwrap();
            assert!(
                report.ok,
                "plane bound VIOLATED for {} over F_{q}",
                x.poly()
            );
            checked += 1;
        }
    }
    assert_eq!(checked, 100);
    // equality attained by concurrent lines
    for (q, delta) in [(5u64, 5u32), (3, 4), (7, 3)] {
        let field = prime(q);
        let f = multcount::harness::cylinder_equation(delta, 2, &field).unwrap();
        let x = HypersurfaceScheme::new(f, 2).unwrap();
        let report = fulton_check(&x, true, 6, &limits(), None).unwrap();
        let expected = delta as u128 * (delta as u128 - 1);
        assert_eq!(report.rational_sum, expected);
        assert_eq!(
            report.closed_sum.as_deref(),
            Some(expected.to_string().as_str())
        );
    }
    pass("08 (plane-curve bound over closed points, 100/100 + equality)");
}

/// Criterion 9: the multiplicity-product lower bound at every intersection
/// closed point of every criterion-4 pair.
#[test]
fn criterion_09_inqmult_at_intersection_points() {
    let pairs = criterion4_pairs();
    let mut points_checked = 0u64;
    for (fc, gc, _) in &pairs {
        let cps = multcount::ideals::plane_closed_points(
            &[fc.poly().clone(), gc.poly().clone()],
            pair_budget(fc.field().cardinality()),
        )
        .unwrap();
        for cp in cps {
            let emb = embed_build(fc.field(), cp.representative().field()).unwrap();
            let fe = fc.embed(&emb);
            let ge = gc.embed(&emb);
            let i = plane_intersection_mult(&fe, &ge, cp.representative()).unwrap();
            let mf = multiplicity_at(&fe, cp.representative()).unwrap().mu as u64;
            let mg = multiplicity_at(&ge, cp.representative()).unwrap().mu as u64;
            assert!(
                i >= mf * mg,
                "product bound VIOLATED at {} for ({}, {})",
                cp.representative(),
                fc.poly(),
                gc.poly()
            );
            points_checked += 1;
        }
    }
    assert!(points_checked >= 100, "only {points_checked} points seen");
    pass(&format!(
        "09 (multiplicity-product bound at {points_checked} intersection points)"
    ));
}

// ---------------------------------------------------------------------------
// Criterion 10: randomized property suites, >= 1000 cases each, fixed seed.

fn random_element(rng: &mut ChaCha12Rng, field: &Field) -> FieldElement {
    FieldElement::from_index(field, rng.random_range(0..field.cardinality()))
}

fn random_poly(
    rng: &mut ChaCha12Rng,
    field: &Field,
    arity: usize,
    max_deg: u32,
    terms: usize,
) -> MPoly {
    let mut f = MPoly::zero(field, arity);
    for _ in 0..terms {
        let mut e = vec![0u32; arity];
        let mut left = rng.random_range(0..=max_deg);
        for slot in 0..arity {
            let take = rng.random_range(0..=left);
            e[slot] = take;
            left -= take;
        }
        f.add_term(Monomial(e), random_element(rng, field));
    }
    f
}

fn random_homogeneous(rng: &mut ChaCha12Rng, field: &Field, arity: usize, deg: u32) -> MPoly {
    let monomials = exponents_of_degree(arity, deg);
    let mut f = MPoly::zero(field, arity);
    for m in monomials {
        f.add_term(m, random_element(rng, field));
    }
    f
}

#[test]
fn criterion_10a_field_axioms() {
    let mut rng = ChaCha12Rng::seed_from_u64(101);
    let fields: Vec<Field> = vec![
        prime(2),
        prime(3),
        prime(5),
        prime(251),
        field_create(2, 4).unwrap(),
        field_create(3, 2).unwrap(),
        field_create(5, 2).unwrap(),
    ];
    for case in 0..1024 {
        let f = &fields[case % fields.len()];
        let a = random_element(&mut rng, f);
        let b = random_element(&mut rng, f);
        let c = random_element(&mut rng, f);
        assert_eq!(a.add(&b), b.add(&a));
        assert_eq!(a.mul(&b), b.mul(&a));
        assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        assert!(a.add(&a.neg()).is_zero());
        if !a.is_zero() {
            assert!(a.mul(&a.inv()).is_one());
        }
        let q = f.cardinality();
        assert_eq!(a.pow(q as u128), a);
    }
    pass("10a (field axioms, 1024 cases)");
}

#[test]
fn criterion_10b_hasse_identity() {
    let mut rng = ChaCha12Rng::seed_from_u64(102);
    let mut cases = 0;
    while cases < 1024 {
        let q = [2u64, 3, 5][cases % 3];
        let n = 1 + cases % 3; // arity n+1 in 2..=4
        let delta = 1 + (cases % 5) as u32;
        let base = prime(q);
        let ext = field_create(q, 2).unwrap();
        let emb = embed_build(&base, &ext).unwrap();
        let f = random_homogeneous(&mut rng, &base, n + 1, delta);
        if f.is_zero() {
            continue;
        }
        let fe = f.embed(&emb);
        let t: Vec<FieldElement> = (0..=n).map(|_| random_element(&mut rng, &ext)).collect();
        let s: Vec<FieldElement> = (0..=n).map(|_| random_element(&mut rng, &ext)).collect();
        let ts: Vec<FieldElement> = t.iter().zip(&s).map(|(a, b)| a.add(b)).collect();
        let mut rhs = fe.eval(&t);
        for alpha in 1..=delta {
            let d = hasse_expand(&f, alpha).unwrap();
            for (index, g) in d.entries() {
                let mut term = g.embed(&emb).eval(&t);
                for (i, &e) in index.0.iter().enumerate() {
                    if e > 0 {
                        term = term.mul(&s[i].pow(e as u128));
                    }
                }
                rhs = rhs.add(&term);
            }
        }
        assert_eq!(fe.eval(&ts), rhs, "expansion identity failed");
        cases += 1;
    }
    pass("10b (expansion identity, 1024 cases)");
}

#[test]
fn criterion_10c_translation_composition() {
    let mut rng = ChaCha12Rng::seed_from_u64(103);
    for case in 0..1024 {
        let q = [2u64, 3, 5, 7][case % 4];
        let field = prime(q);
        let arity = 1 + case % 3;
        let f = random_poly(&mut rng, &field, arity, 4, 5);
        let a: Vec<FieldElement> = (0..arity)
            .map(|_| random_element(&mut rng, &field))
            .collect();
        let b: Vec<FieldElement> = (0..arity)
            .map(|_| random_element(&mut rng, &field))
            .collect();
        let ab: Vec<FieldElement> = a.iter().zip(&b).map(|(x, y)| x.add(y)).collect();
        assert_eq!(f.shift(&a).shift(&b), f.shift(&ab));
        // scaling check for projective evaluation on homogeneous inputs
        let h = random_homogeneous(&mut rng, &field, arity, 3);
        if !h.is_zero() {
            let lambda = loop {
                let l = random_element(&mut rng, &field);
                if !l.is_zero() {
                    break l;
                }
            };
            let x: Vec<FieldElement> = (0..arity)
                .map(|_| random_element(&mut rng, &field))
                .collect();
            let lx: Vec<FieldElement> = x.iter().map(|c| c.mul(&lambda)).collect();
            assert_eq!(h.eval(&lx), h.eval(&x).mul(&lambda.pow(3)));
        }
    }
    pass("10c (translation composition and scaling, 1024 cases)");
}

#[test]
fn criterion_10d_s_pair_reduction() {
    let mut rng = ChaCha12Rng::seed_from_u64(104);
    let lim = limits();
    for case in 0..1024 {
        let q = [2u64, 3, 5][case % 3];
        let field = prime(q);
        let arity = 2 + case % 2;
        let k = 2 + case % 2;
        let gens: Vec<MPoly> = (0..k)
            .map(|_| random_poly(&mut rng, &field, arity, 3, 3))
            .filter(|g| !g.is_zero())
            .collect();
        if gens.is_empty() {
            continue;
        }
        let order = if case % 2 == 0 {
            MonomialOrder::grevlex(arity)
        } else {
            MonomialOrder::lex(arity)
        };
        let gb = buchberger(&gens, &order, &lim).unwrap();
        let b = gb.generators();
        for i in 0..b.len() {
            for j in 0..i {
                let s = s_polynomial(&b[i], &b[j], &order);
                assert!(
                    reduce(&s, b, &order).is_zero(),
                    "S-pair failed to reduce (case {case})"
                );
            }
        }
        // reduced basis: leading terms pairwise non-divisible
        for i in 0..b.len() {
            for j in 0..b.len() {
                if i == j {
                    continue;
                }
                let (mi, _) = leading_term(&b[i], &order);
                let (mj, _) = leading_term(&b[j], &order);
                assert!(!mi.divides(mj));
            }
        }
    }
    pass("10d (S-pair reduction, 1024 ideals)");
}

#[test]
fn criterion_10e_tree_weight_algebra() {
    let mut rng = ChaCha12Rng::seed_from_u64(105);
    let f5 = prime(5);
    // a pool of closed points to draw schemes from
    let pool: Vec<SchemeDescriptor> = enum_proj(2, &f5, None)
        .unwrap()
        .map(|p| SchemeDescriptor::closed_point(frobenius_orbit(&p, &f5).unwrap(), None))
        .collect();
    for case in 0..1024 {
        // random two-level tree
        let n_children = 1 + rng.random_range(0..4usize);
        let mut children = Vec::new();
        for _ in 0..n_children {
            let scheme = pool[rng.random_range(0..pool.len())].clone();
            let grand = if rng.random_range(0..3u32) == 0 {
                vec![(
                    1 + rng.random_range(0..5u64),
                    TreeVertex::leaf(pool[rng.random_range(0..pool.len())].clone()),
                )]
            } else {
                vec![]
            };
            let label = if grand.is_empty() {
                None
            } else {
                Some(Label::Named {
                    name: "L".into(),
                    deg: 1,
                })
            };
            children.push((
                1 + rng.random_range(0..5u64),
                TreeVertex {
                    scheme,
                    label,
                    children: grand,
                },
            ));
        }
        let root = TreeVertex {
            scheme: SchemeDescriptor {
                kind: SchemeKind::Registered {
                    name: "R".into(),
                    contains: vec![],
                },
                dim: 1,
                deg: 1,
                mu_map: None,
            },
            label: Some(Label::Named {
                name: "H".into(),
                deg: 1,
            }),
            children,
        };
        let tree = IntersectionTree {
            root: root.clone(),
            root_weight: Some(1 + rng.random_range(0..4u64)),
        };
        // multiplicativity along every path
        for (i, (w, child)) in root.children.iter().enumerate() {
            assert_eq!(multcount::itree::vertex_weight(&tree, &[i]).unwrap(), *w);
            for (j, (w2, _)) in child.children.iter().enumerate() {
                assert_eq!(
                    multcount::itree::vertex_weight(&tree, &[i, j]).unwrap(),
                    w * w2
                );
            }
        }
        // additivity: scheme weight is the sum over occurrences
        let target_desc = &pool[case % pool.len()];
        let SchemeKind::ClosedPoint(cp) = &target_desc.kind else {
            unreachable!()
        };
        let target = SchemeTarget::Point(cp.clone());
        let mut expected = 0u64;
        for (w, child) in &root.children {
            if child.scheme.same_scheme(&target) {
                expected += w;
            }
            for (w2, g) in &child.children {
                if g.scheme.same_scheme(&target) {
                    expected += w * w2;
                }
            }
        }
        assert_eq!(scheme_weight_in_tree(&tree, &target), expected);
    }
    pass("10e (tree weight algebra, 1024 trees)");
}

/// The n = 2 reading of the sweep: the bound specializes to the plane-curve
/// inequality, with matching sides.
#[test]
fn plane_case_matches_fulton() {
    let cfg = CorpusConfig {
        field: prime(5),
        n: 2,
        delta_min: 2,
        delta_max: 5,
        count: 20,
        seed: 55,
        require_reduced: true,
        force_singular_point: None,
    };
    let corpus = generate_corpus(&cfg, &limits()).unwrap();
    for x in &corpus.members {
        let report = verify_main_bound(x, &limits(), None).unwrap();
        if report.s < 0 {
            continue;
        }
        let fulton = fulton_check(x, false, 4, &limits(), None).unwrap();
        assert_eq!(report.lhs, fulton.rational_sum);
        assert_eq!(report.rhs, fulton.rhs);
    }
    pass("extra (plane case consistency)");
}

/// Lineaire bound on the sweep corpus and on singular loci.
#[test]
fn lineaire_bound_on_corpus() {
    let cfg = CorpusConfig {
        field: prime(3),
        n: 2,
        delta_min: 2,
        delta_max: 4,
        count: 30,
        seed: 66,
        require_reduced: true,
        force_singular_point: None,
    };
    let corpus = generate_corpus(&cfg, &limits()).unwrap();
    for x in &corpus.members {
        let report = lineaire_check(x, &limits(), None).unwrap();
        assert!(report.ok, "count bound VIOLATED for {}", x.poly());
    }
    pass("extra (point-count bound)");
}

/// Plane forests: Bezout totals, per-root products, and the global check.
#[test]
fn plane_forest_structural_bounds() {
    let f7 = prime(7);
    for text in [
        "T1^2*T2 + 6*T0^3",             // cusp
        "T0^2*T2 + 6*T1^2*T2 + 6*T1^3", // node
        "T0*T1*T2",                     // triangle of lines
    ] {
        let x = scheme(text, &f7, 2);
        let (forest, ci) = multcount::itree::build_plane_forest(&x, &limits(), 12).unwrap();
        assert!(ci.is_some());
        let delta = x.degree() as u128;
        let total: u128 = forest
            .trees
            .iter()
            .map(|t| t.root_weight.unwrap() as u128 * t.root.scheme.deg as u128)
            .sum();
        assert_eq!(total, delta * (delta - 1));
        for t in &forest.trees {
            let mu = t.root.scheme.mu_map.as_ref().unwrap();
            let i = t.root_weight.unwrap();
            assert!(i >= mu[0] * mu[1]);
            assert!(mu[1] + 1 >= mu[0], "first-order drop bound");
            // depth-0 eligibility always holds for roots
            let SchemeKind::ClosedPoint(cp) = &t.root.scheme.kind else {
                panic!("roots are closed points")
            };
            let verdict = check_chongshu2(
                &forest,
                &SchemeTarget::Point(cp.clone()),
                (mu[0] * mu[1]) as u128,
            )
            .unwrap();
            assert!(verdict.ok);
        }
        let g = check_globale(&forest, 2).unwrap();
        assert!(g.ok);
    }
    pass("extra (plane forest bounds)");
}

/// On plane curves, the rational points of the Jacobian ideal are exactly
/// the points of multiplicity at least 2 (exact set equality).
#[test]
fn singular_sets_agree_on_plane_curves() {
    let cfg = CorpusConfig {
        field: prime(5),
        n: 2,
        delta_min: 2,
        delta_max: 5,
        count: 25,
        seed: 88,
        require_reduced: true,
        force_singular_point: None,
    };
    let corpus = generate_corpus(&cfg, &limits()).unwrap();
    for x in &corpus.members {
        let partials: Vec<MPoly> = (0..3).map(|i| x.poly().partial(i)).collect();
        for p in enum_proj(2, x.field(), None).unwrap() {
            let on_curve = eval_proj(x.poly(), &p).unwrap().is_zero();
            let ideal_route = on_curve
                && partials
                    .iter()
                    .all(|d| d.is_zero() || eval_proj(d, &p).unwrap().is_zero());
            let mu_route = on_curve && multiplicity_at(x, &p).unwrap().mu >= 2;
            assert_eq!(ideal_route, mu_route, "sets differ at {p} on {}", x.poly());
        }
    }
    pass("extra (singular sets agree)");
}

/// Enumerating a field and a projective space stays deterministic across
/// runs (golden order).
#[test]
fn deterministic_enumeration_golden() {
    let f4 = field_create(2, 2).unwrap();
    let elems: Vec<String> = enumerate_field(&f4).map(|e| e.to_string()).collect();
    assert_eq!(elems, vec!["[0,0]", "[0,1]", "[1,0]", "[1,1]"]);
    let f3 = prime(3);
    let pts: Vec<String> = enum_proj(1, &f3, None)
        .unwrap()
        .map(|p| p.to_string())
        .collect();
    assert_eq!(pts, vec!["1:0", "1:1", "1:2", "0:1"]);
    pass("extra (deterministic enumeration)");
}
