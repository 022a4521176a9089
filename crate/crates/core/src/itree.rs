//! Labeled, edge-weighted intersection trees over scheme descriptors.
//!
//! Vertices are occurrences of integral subschemes; a non-leaf vertex carries
//! a label (a subscheme of degree at most the tree level meeting the vertex
//! properly) and its children are the components of that intersection, with
//! the intersection multiplicities as edge weights. Weight queries, structural
//! validation, the descendant-occurrence inequality and the depth-0 global
//! bound all operate on this shape; for reduced plane curves the depth-0
//! forest is built automatically from a first-order derived curve.

use crate::geom::{frobenius_orbit, parse_point, ClosedPoint};
use crate::gf::{embed_build, field_create, parse_field_spec, Field};
use crate::ideals::{
    complete_intersection_search, is_reduced, plane_closed_points, singular_locus_dim,
    CompleteIntersection, GroebnerLimits,
};
use crate::localmult::{multiplicity_at, plane_intersection_mult, HypersurfaceScheme};
use crate::mpoly::{poly_parse, MPoly};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// What a vertex stands for: an explicit closed point, or an opaque handle
/// registered by name (positive-dimensional schemes the library does not
/// decompose itself).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemeKind {
    ClosedPoint(ClosedPoint),
    Registered {
        name: String,
        /// Caller-asserted membership metadata: closed points known to lie on
        /// the scheme. Used by the eligibility check; anything absent is
        /// treated as not contained.
        contains: Vec<ClosedPoint>,
    },
}

/// A vertex payload: scheme identity plus the numerical data hanging off it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeDescriptor {
    pub kind: SchemeKind,
    pub dim: u32,
    pub deg: u64,
    /// Recorded multiplicities of this scheme in the ambient family
    /// `X_1, ..., X_r`, when known.
    pub mu_map: Option<Vec<u64>>,
}

impl SchemeDescriptor {
    pub fn closed_point(cp: ClosedPoint, mu_map: Option<Vec<u64>>) -> Self {
        SchemeDescriptor {
            dim: 0,
            deg: cp.degree() as u64,
            kind: SchemeKind::ClosedPoint(cp),
            mu_map,
        }
    }

    pub fn name(&self) -> String {
        match &self.kind {
            SchemeKind::ClosedPoint(cp) => cp.representative().to_string(),
            SchemeKind::Registered { name, .. } => name.clone(),
        }
    }

    /// Scheme identity: closed points by orbit equality, handles by name.
    pub fn same_scheme(&self, target: &SchemeTarget) -> bool {
        match (&self.kind, target) {
            (SchemeKind::ClosedPoint(a), SchemeTarget::Point(b)) => a == b,
            (SchemeKind::Registered { name, .. }, SchemeTarget::Name(n)) => name == n,
            _ => false,
        }
    }

    /// Whether this scheme strictly contains the target, as far as the
    /// recorded metadata can tell. Distinct closed points never contain each
    /// other; registered handles answer from their `contains` list.
    pub fn strictly_contains(&self, target: &SchemeTarget) -> bool {
        match (&self.kind, target) {
            (SchemeKind::ClosedPoint(_), _) => false,
            (SchemeKind::Registered { contains, .. }, SchemeTarget::Point(p)) => {
                contains.iter().any(|c| c == p)
            }
            (SchemeKind::Registered { .. }, SchemeTarget::Name(_)) => false,
        }
    }
}

/// Identity of a scheme being queried across a forest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemeTarget {
    Point(ClosedPoint),
    Name(String),
}

/// Label of a non-leaf vertex: the subscheme intersected with it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Label {
    /// A derived hypersurface given by its equation.
    Poly(MPoly),
    /// An opaque subscheme with a recorded degree.
    Named { name: String, deg: u64 },
}

impl Label {
    pub fn deg(&self) -> u64 {
        match self {
            Label::Poly(f) => f.total_degree().unwrap_or(0) as u64,
            Label::Named { deg, .. } => *deg,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TreeVertex {
    pub scheme: SchemeDescriptor,
    pub label: Option<Label>,
    /// `(edge weight, child)` pairs; the children of a labeled vertex are the
    /// components of the intersection with the label.
    pub children: Vec<(u64, TreeVertex)>,
}

impl TreeVertex {
    pub fn leaf(scheme: SchemeDescriptor) -> Self {
        TreeVertex {
            scheme,
            label: None,
            children: Vec::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct IntersectionTree {
    pub root: TreeVertex,
    /// `i(root; X_1 ... X_r; P^n)` when the tree hangs off a proper
    /// intersection component.
    pub root_weight: Option<u64>,
}

/// A family of intersection trees over one ambient space, all of the same
/// level.
#[derive(Debug, Clone)]
pub struct Forest {
    pub level: u32,
    pub n: usize,
    pub field: Field,
    /// Degrees of the ambient family `X_1, ..., X_r`, when recorded.
    pub family_degs: Option<Vec<u64>>,
    pub trees: Vec<IntersectionTree>,
}

/// Product of edge weights along a child-index path from the root; the empty
/// path (the root itself) has weight 1 by convention.
pub fn vertex_weight(tree: &IntersectionTree, path: &[usize]) -> Result<u64> {
    let mut vertex = &tree.root;
    let mut weight: u64 = 1;
    for &idx in path {
        let (w, child) = vertex.children.get(idx).ok_or(Error::PathNotInTree)?;
        weight *= w;
        vertex = child;
    }
    Ok(weight)
}

fn accumulate_weight(
    vertex: &TreeVertex,
    target: &SchemeTarget,
    weight_so_far: u64,
    acc: &mut u64,
) {
    if vertex.scheme.same_scheme(target) {
        *acc += weight_so_far;
    }
    for (w, child) in &vertex.children {
        accumulate_weight(child, target, weight_so_far * w, acc);
    }
}

/// Sum of vertex weights over all occurrences of the scheme in one tree;
/// 0 when absent.
pub fn scheme_weight_in_tree(tree: &IntersectionTree, target: &SchemeTarget) -> u64 {
    let mut acc = 0;
    accumulate_weight(&tree.root, target, 1, &mut acc);
    acc
}

/// Sum of vertex weights over all occurrences across the forest.
pub fn scheme_weight(forest: &Forest, target: &SchemeTarget) -> u64 {
    forest
        .trees
        .iter()
        .map(|t| scheme_weight_in_tree(t, target))
        .sum()
}

/// The aggregated left side `sum_Y i(Y; X_1 ... X_r) * W_{T_Y}(M)`.
/// Every tree must carry its root weight.
pub fn aggregate_lhs(forest: &Forest, target: &SchemeTarget) -> Result<u128> {
    let mut acc: u128 = 0;
    for tree in &forest.trees {
        let rw = tree.root_weight.ok_or(Error::MissingRootWeight)?;
        acc += rw as u128 * scheme_weight_in_tree(tree, target) as u128;
    }
    Ok(acc)
}

/// Outcome of an inequality check: both sides, and whether it holds.
#[derive(Debug, Clone, Serialize)]
pub struct InequalityVerdict {
    pub lhs: u128,
    pub rhs: u128,
    pub ok: bool,
}

fn walk<'a>(vertex: &'a TreeVertex, out: &mut Vec<&'a TreeVertex>) {
    out.push(vertex);
    for (_, child) in &vertex.children {
        walk(child, out);
    }
}

fn has_descendant_occurrence(vertex: &TreeVertex, target: &SchemeTarget) -> bool {
    vertex.children.iter().any(|(_, child)| {
        child.scheme.same_scheme(target) || has_descendant_occurrence(child, target)
    })
}

/// The descendant-occurrence inequality at a target scheme: the aggregated
/// left side must dominate the recorded multiplicity product. Eligibility
/// (every vertex strictly containing the target has a descendant occurrence
/// of it) is checked first; a violation makes the inequality not applicable
/// and is reported as an error, not as a failed verdict.
pub fn check_chongshu2(
    forest: &Forest,
    target: &SchemeTarget,
    mu_product: u128,
) -> Result<InequalityVerdict> {
    for tree in &forest.trees {
        let mut vertices = Vec::new();
        walk(&tree.root, &mut vertices);
        for v in vertices {
            if v.scheme.strictly_contains(target) && !has_descendant_occurrence(v, target) {
                return Err(Error::IneligibleTarget(format!(
                    "vertex {} contains the target but has no descendant occurrence of it",
                    v.scheme.name()
                )));
            }
        }
    }
    let lhs = aggregate_lhs(forest, target)?;
    Ok(InequalityVerdict {
        lhs,
        rhs: mu_product,
        ok: lhs >= mu_product,
    })
}

/// The depth-0 global bound: `sum_{Z in Z_0} (prod_i mu_Z(X_i)) deg(Z) <=
/// prod_i deg(X_i)`, from the roots' recorded multiplicities and the family
/// degrees.
pub fn check_globale(forest: &Forest, r: usize) -> Result<InequalityVerdict> {
    let degs = forest
        .family_degs
        .as_ref()
        .ok_or_else(|| Error::Unsupported("family degrees not recorded".into()))?;
    if degs.len() != r {
        return Err(Error::Unsupported(format!(
            "family size {r} does not match {} recorded degrees",
            degs.len()
        )));
    }
    let mut lhs: u128 = 0;
    for tree in &forest.trees {
        let mu = tree
            .root
            .scheme
            .mu_map
            .as_ref()
            .ok_or_else(|| Error::Unsupported("root multiplicities not recorded".into()))?;
        if mu.len() < r {
            return Err(Error::Unsupported(
                "root multiplicity list shorter than the family".into(),
            ));
        }
        let prod: u128 = mu[..r].iter().map(|&m| m as u128).product();
        lhs += prod * tree.root.scheme.deg as u128;
    }
    let rhs: u128 = degs.iter().map(|&d| d as u128).product();
    Ok(InequalityVerdict {
        lhs,
        rhs,
        ok: lhs <= rhs,
    })
}

/// A structural violation found by validation. Violations are data, not
/// errors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A vertex carries a label but no children.
    LabeledLeaf { path: Vec<usize> },
    /// A vertex has children but no label.
    UnlabeledInternal { path: Vec<usize> },
    /// A label of degree above the tree level.
    LabelDegreeExceedsLevel {
        path: Vec<usize>,
        deg: u64,
        level: u32,
    },
    /// Children weights and degrees do not balance the vertex against its
    /// label.
    BezoutMismatch {
        path: Vec<usize>,
        expected: u128,
        got: u128,
    },
    /// A child fails to drop in dimension (positive-dimensional case).
    DimensionNotDecreasing { path: Vec<usize> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::LabeledLeaf { path } => write!(f, "leaf with label at {path:?}"),
            Violation::UnlabeledInternal { path } => {
                write!(f, "internal vertex without label at {path:?}")
            }
            Violation::LabelDegreeExceedsLevel { path, deg, level } => {
                write!(f, "label degree {deg} exceeds level {level} at {path:?}")
            }
            Violation::BezoutMismatch {
                path,
                expected,
                got,
            } => write!(
                f,
                "children weight-degree sum {got} != {expected} at {path:?}"
            ),
            Violation::DimensionNotDecreasing { path } => {
                write!(f, "child dimension does not decrease at {path:?}")
            }
        }
    }
}

fn validate_vertex(
    vertex: &TreeVertex,
    level: u32,
    path: &mut Vec<usize>,
    out: &mut Vec<Violation>,
) {
    match (&vertex.label, vertex.children.is_empty()) {
        (Some(_), true) => out.push(Violation::LabeledLeaf { path: path.clone() }),
        (None, false) => out.push(Violation::UnlabeledInternal { path: path.clone() }),
        _ => {}
    }
    if let Some(label) = &vertex.label {
        let deg = label.deg();
        if deg > level as u64 {
            out.push(Violation::LabelDegreeExceedsLevel {
                path: path.clone(),
                deg,
                level,
            });
        }
        if !vertex.children.is_empty() {
            let got: u128 = vertex
                .children
                .iter()
                .map(|(w, c)| *w as u128 * c.scheme.deg as u128)
                .sum();
            let expected = vertex.scheme.deg as u128 * deg as u128;
            if got != expected {
                out.push(Violation::BezoutMismatch {
                    path: path.clone(),
                    expected,
                    got,
                });
            }
        }
    }
    for (i, (_, child)) in vertex.children.iter().enumerate() {
        let parent_dim = vertex.scheme.dim;
        let ok = child.scheme.dim < parent_dim || (parent_dim == 0 && child.scheme.dim == 0);
        path.push(i);
        if !ok {
            out.push(Violation::DimensionNotDecreasing { path: path.clone() });
        }
        validate_vertex(child, level, path, out);
        path.pop();
    }
}

/// Checks the structural conditions on one tree: leaf iff no label, label
/// degree within the level, the per-vertex weight-degree balance, and
/// dimension monotonicity along edges.
pub fn validate_tree(tree: &IntersectionTree, level: u32) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    validate_vertex(&tree.root, level, &mut path, &mut out);
    out
}

/// Validates every tree of the forest.
pub fn validate_forest(forest: &Forest) -> Vec<Violation> {
    forest
        .trees
        .iter()
        .flat_map(|t| validate_tree(t, forest.level))
        .collect()
}

// ---------------------------------------------------------------------------
// Automatic construction for plane curves

/// Depth-0 forest of a reduced singular plane curve: the label is a
/// first-order derived curve cutting the singular locus properly, the roots
/// are the closed points of the intersection with their intersection
/// multiplicities as root weights, and every root records its multiplicities
/// in the pair `(X, V(g_1))`. A smooth curve yields an empty forest.
pub fn build_plane_forest(
    x: &HypersurfaceScheme,
    limits: &GroebnerLimits,
    max_m: u32,
) -> Result<(Forest, Option<CompleteIntersection>)> {
    if x.ambient_dim() != 2 {
        return Err(Error::Unsupported("plane forest needs n = 2".into()));
    }
    let (reduced, reason) = is_reduced(x, limits)?;
    if !reduced {
        return Err(Error::NonReducedInput(reason));
    }
    let delta = x.degree();
    let sing = singular_locus_dim(x, limits)?;
    if sing.dim < 0 {
        return Ok((
            Forest {
                level: delta,
                n: 2,
                field: x.field().clone(),
                family_degs: Some(vec![delta as u64, delta as u64 - 1]),
                trees: Vec::new(),
            },
            None,
        ));
    }
    let ci = complete_intersection_search(x, limits)?;
    let g1 = ci.gens[0].clone();
    let f_ext = x.poly().embed(&ci.embedding);
    let x_ext = HypersurfaceScheme::new(f_ext.clone(), 2)?;
    let g_ext = HypersurfaceScheme::new(g1.clone(), 2)?;
    let points = plane_closed_points(&[f_ext, g1.clone()], max_m)?;
    let expected = delta as u128 * (delta as u128 - 1);
    let mut trees = Vec::new();
    let mut total: u128 = 0;
    for cp in points {
        let rep_field = cp.representative().field().clone();
        let emb = embed_build(&ci.field, &rep_field)?;
        let xr = x_ext.embed(&emb);
        let gr = g_ext.embed(&emb);
        let i = plane_intersection_mult(&xr, &gr, cp.representative())?;
        let mu_x = multiplicity_at(&xr, cp.representative())?.mu as u64;
        let mu_g = multiplicity_at(&gr, cp.representative())?.mu as u64;
        total += i as u128 * cp.degree() as u128;
        trees.push(IntersectionTree {
            root: TreeVertex::leaf(SchemeDescriptor::closed_point(cp, Some(vec![mu_x, mu_g]))),
            root_weight: Some(i),
        });
    }
    if total != expected {
        return Err(Error::IncompleteClosedPoints {
            found: total,
            expected,
            max_m: max_m as usize,
        });
    }
    Ok((
        Forest {
            level: delta,
            n: 2,
            field: ci.field.clone(),
            family_degs: Some(vec![delta as u64, delta as u64 - 1]),
            trees,
        },
        Some(ci),
    ))
}

// ---------------------------------------------------------------------------
// File format

#[derive(Serialize, Deserialize)]
struct RawAmbient {
    n: usize,
    field: String,
}

#[derive(Serialize, Deserialize)]
struct RawScheme {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    point: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<u32>,
    deg: u64,
    dim: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mu: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    contains: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct RawLabel {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    poly: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    deg: Option<u64>,
}

#[derive(Serialize, Deserialize)]
struct RawVertex {
    scheme: RawScheme,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<RawLabel>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    children: Vec<RawChild>,
}

#[derive(Serialize, Deserialize)]
struct RawChild {
    weight: u64,
    vertex: RawVertex,
}

#[derive(Serialize, Deserialize)]
struct RawRoot {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    root_weight: Option<u64>,
    #[serde(flatten)]
    vertex: RawVertex,
}

#[derive(Serialize, Deserialize)]
struct RawForest {
    level: u32,
    ambient: RawAmbient,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    family_degs: Option<Vec<u64>>,
    roots: Vec<RawRoot>,
}

fn parse_closed_point(text: &str, m: u32, base: &Field, n: usize) -> Result<ClosedPoint> {
    let ext = if m <= 1 {
        base.clone()
    } else {
        field_create(base.p(), base.degree() * m)
            .map_err(|e| Error::TreeFormat(format!("point field: {e}")))?
    };
    let p = parse_point(text, &ext, n)?;
    frobenius_orbit(&p, base)
}

fn scheme_from_raw(raw: &RawScheme, field: &Field, n: usize) -> Result<SchemeDescriptor> {
    let kind = match raw.kind.as_str() {
        "closed-point" => {
            let text = raw
                .point
                .as_ref()
                .ok_or_else(|| Error::TreeFormat("closed-point scheme needs a point".into()))?;
            let cp = parse_closed_point(text, raw.m.unwrap_or(1), field, n)?;
            if cp.degree() as u64 != raw.deg {
                return Err(Error::TreeFormat(format!(
                    "point {text} has orbit degree {}, file says {}",
                    cp.degree(),
                    raw.deg
                )));
            }
            if raw.dim != 0 {
                return Err(Error::TreeFormat("closed points have dimension 0".into()));
            }
            SchemeKind::ClosedPoint(cp)
        }
        "registered" => {
            let name = raw
                .name
                .as_ref()
                .ok_or_else(|| Error::TreeFormat("registered scheme needs a name".into()))?;
            let mut contains = Vec::new();
            if let Some(list) = &raw.contains {
                for t in list {
                    contains.push(parse_closed_point(t, 1, field, n)?);
                }
            }
            SchemeKind::Registered {
                name: name.clone(),
                contains,
            }
        }
        other => {
            return Err(Error::TreeFormat(format!("unknown scheme kind {other:?}")));
        }
    };
    Ok(SchemeDescriptor {
        kind,
        dim: raw.dim,
        deg: raw.deg,
        mu_map: raw.mu.clone(),
    })
}

fn vertex_from_raw(raw: &RawVertex, field: &Field, n: usize) -> Result<TreeVertex> {
    let scheme = scheme_from_raw(&raw.scheme, field, n)?;
    let label = match &raw.label {
        None => None,
        Some(l) => Some(match (&l.poly, &l.name) {
            (Some(text), None) => {
                let f = poly_parse(text, field, n + 1)?;
                if f.is_zero() {
                    return Err(Error::TreeFormat("zero label polynomial".into()));
                }
                Label::Poly(f)
            }
            (None, Some(name)) => Label::Named {
                name: name.clone(),
                deg: l
                    .deg
                    .ok_or_else(|| Error::TreeFormat("named label needs a degree".into()))?,
            },
            _ => {
                return Err(Error::TreeFormat(
                    "label needs exactly one of poly or name".into(),
                ))
            }
        }),
    };
    let mut children = Vec::with_capacity(raw.children.len());
    for c in &raw.children {
        children.push((c.weight, vertex_from_raw(&c.vertex, field, n)?));
    }
    Ok(TreeVertex {
        scheme,
        label,
        children,
    })
}

fn scheme_to_raw(s: &SchemeDescriptor) -> RawScheme {
    match &s.kind {
        SchemeKind::ClosedPoint(cp) => RawScheme {
            kind: "closed-point".into(),
            name: None,
            point: Some(cp.representative().to_string()),
            m: Some(cp.residue_degree()),
            deg: s.deg,
            dim: s.dim,
            mu: s.mu_map.clone(),
            contains: None,
        },
        SchemeKind::Registered { name, contains } => RawScheme {
            kind: "registered".into(),
            name: Some(name.clone()),
            point: None,
            m: None,
            deg: s.deg,
            dim: s.dim,
            mu: s.mu_map.clone(),
            contains: if contains.is_empty() {
                None
            } else {
                Some(
                    contains
                        .iter()
                        .map(|c| c.representative().to_string())
                        .collect(),
                )
            },
        },
    }
}

fn vertex_to_raw(v: &TreeVertex) -> RawVertex {
    RawVertex {
        scheme: scheme_to_raw(&v.scheme),
        label: v.label.as_ref().map(|l| match l {
            Label::Poly(f) => RawLabel {
                poly: Some(f.to_string()),
                name: None,
                deg: None,
            },
            Label::Named { name, deg } => RawLabel {
                poly: None,
                name: Some(name.clone()),
                deg: Some(*deg),
            },
        }),
        children: v
            .children
            .iter()
            .map(|(w, c)| RawChild {
                weight: *w,
                vertex: vertex_to_raw(c),
            })
            .collect(),
    }
}

impl Forest {
    /// Parses the JSON tree file format.
    pub fn from_json(text: &str) -> Result<Forest> {
        let raw: RawForest =
            serde_json::from_str(text).map_err(|e| Error::TreeFormat(e.to_string()))?;
        let field = parse_field_spec(&raw.ambient.field)?;
        let mut trees = Vec::with_capacity(raw.roots.len());
        for r in &raw.roots {
            trees.push(IntersectionTree {
                root: vertex_from_raw(&r.vertex, &field, raw.ambient.n)?,
                root_weight: r.root_weight,
            });
        }
        Ok(Forest {
            level: raw.level,
            n: raw.ambient.n,
            field,
            family_degs: raw.family_degs,
            trees,
        })
    }

    pub fn to_json(&self) -> String {
        let raw = RawForest {
            level: self.level,
            ambient: RawAmbient {
                n: self.n,
                field: self.field.spec_string(),
            },
            family_degs: self.family_degs.clone(),
            roots: self
                .trees
                .iter()
                .map(|t| RawRoot {
                    root_weight: t.root_weight,
                    vertex: vertex_to_raw(&t.root),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("forest serialization")
    }
}

/// Parses a target: a registered name, or a point string (optionally
/// `point@m` for a closed point of residue degree `m`).
pub fn parse_target(text: &str, field: &Field, n: usize) -> Result<SchemeTarget> {
    let (point_text, m) = match text.split_once('@') {
        Some((p, m)) => (
            p,
            m.parse::<u32>()
                .map_err(|_| Error::TreeFormat(format!("bad residue degree in {text:?}")))?,
        ),
        None => (text, 1),
    };
    if point_text.contains(':') {
        Ok(SchemeTarget::Point(parse_closed_point(
            point_text, m, field, n,
        )?))
    } else {
        Ok(SchemeTarget::Name(text.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field_create;
    use crate::mpoly::poly_parse;

    fn point_scheme(text: &str, field: &Field, mu: Option<Vec<u64>>) -> SchemeDescriptor {
        let p = parse_point(text, field, 2).unwrap();
        let cp = frobenius_orbit(&p, field).unwrap();
        SchemeDescriptor::closed_point(cp, mu)
    }

    fn named(name: &str, dim: u32, deg: u64) -> SchemeDescriptor {
        SchemeDescriptor {
            kind: SchemeKind::Registered {
                name: name.into(),
                contains: vec![],
            },
            dim,
            deg,
            mu_map: None,
        }
    }

    #[test]
    fn vertex_weight_is_path_product() {
        let f5 = field_create(5, 1).unwrap();
        let leaf = TreeVertex::leaf(point_scheme("0:0:1", &f5, None));
        let mid = TreeVertex {
            scheme: named("C", 1, 1),
            label: Some(Label::Named {
                name: "L".into(),
                deg: 1,
            }),
            children: vec![(3, leaf)],
        };
        let root = TreeVertex {
            scheme: named("R", 2, 1),
            label: Some(Label::Named {
                name: "H".into(),
                deg: 1,
            }),
            children: vec![(2, mid)],
        };
        let tree = IntersectionTree {
            root,
            root_weight: Some(1),
        };
        assert_eq!(vertex_weight(&tree, &[]).unwrap(), 1);
        assert_eq!(vertex_weight(&tree, &[0]).unwrap(), 2);
        assert_eq!(vertex_weight(&tree, &[0, 0]).unwrap(), 6);
        assert!(vertex_weight(&tree, &[1]).is_err());
        // multiplicativity: child weight = parent weight * edge weight
        assert_eq!(
            vertex_weight(&tree, &[0, 0]).unwrap(),
            vertex_weight(&tree, &[0]).unwrap() * 3
        );
    }

    #[test]
    fn scheme_weight_counts_occurrences() {
        let f5 = field_create(5, 1).unwrap();
        let target_desc = point_scheme("0:0:1", &f5, None);
        let SchemeKind::ClosedPoint(cp) = &target_desc.kind else {
            unreachable!()
        };
        let target = SchemeTarget::Point(cp.clone());
        let make_leaf = || TreeVertex::leaf(point_scheme("0:0:1", &f5, None));
        let root = TreeVertex {
            scheme: named("R", 1, 2),
            label: Some(Label::Named {
                name: "L".into(),
                deg: 1,
            }),
            children: vec![(2, make_leaf())],
        };
        let tree = IntersectionTree {
            root: root.clone(),
            root_weight: Some(1),
        };
        assert_eq!(scheme_weight_in_tree(&tree, &target), 2);
        // absent scheme weighs 0
        assert_eq!(
            scheme_weight_in_tree(&tree, &SchemeTarget::Name("missing".into())),
            0
        );
        // duplicating an occurrence adds exactly its vertex weight
        let mut root2 = root;
        root2.children.push((5, make_leaf()));
        let tree2 = IntersectionTree {
            root: root2,
            root_weight: Some(1),
        };
        assert_eq!(scheme_weight_in_tree(&tree2, &target), 7);
    }

    #[test]
    fn validation_flags_bad_shapes() {
        let f5 = field_create(5, 1).unwrap();
        // labeled leaf
        let mut v = TreeVertex::leaf(point_scheme("0:0:1", &f5, None));
        v.label = Some(Label::Named {
            name: "L".into(),
            deg: 1,
        });
        let t = IntersectionTree {
            root: v,
            root_weight: None,
        };
        assert!(matches!(
            validate_tree(&t, 3)[0],
            Violation::LabeledLeaf { .. }
        ));
        // wrong child weights: 1*1 != 2*1
        let root = TreeVertex {
            scheme: named("R", 1, 2),
            label: Some(Label::Named {
                name: "L".into(),
                deg: 1,
            }),
            children: vec![(1, TreeVertex::leaf(point_scheme("0:0:1", &f5, None)))],
        };
        let t2 = IntersectionTree {
            root,
            root_weight: None,
        };
        let viols = validate_tree(&t2, 3);
        assert!(viols.iter().any(|v| matches!(
            v,
            Violation::BezoutMismatch {
                expected: 2,
                got: 1,
                ..
            }
        )));
        // label degree above the level
        let root3 = TreeVertex {
            scheme: named("R", 1, 1),
            label: Some(Label::Named {
                name: "L".into(),
                deg: 9,
            }),
            children: vec![(9, TreeVertex::leaf(point_scheme("0:0:1", &f5, None)))],
        };
        let t3 = IntersectionTree {
            root: root3,
            root_weight: None,
        };
        assert!(validate_tree(&t3, 3)
            .iter()
            .any(|v| matches!(v, Violation::LabelDegreeExceedsLevel { .. })));
    }

    #[test]
    fn forest_json_round_trip() {
        let f5 = field_create(5, 1).unwrap();
        let root = TreeVertex {
            scheme: named("Y", 1, 3),
            label: Some(Label::Poly(poly_parse("T0*T1", &f5, 3).unwrap())),
            children: vec![
                (
                    2,
                    TreeVertex::leaf(point_scheme("0:0:1", &f5, Some(vec![2, 1]))),
                ),
                (4, TreeVertex::leaf(point_scheme("1:1:1", &f5, None))),
            ],
        };
        let forest = Forest {
            level: 3,
            n: 2,
            field: f5,
            family_degs: Some(vec![3, 2]),
            trees: vec![IntersectionTree {
                root,
                root_weight: Some(1),
            }],
        };
        let json = forest.to_json();
        let back = Forest::from_json(&json).unwrap();
        assert_eq!(back.level, 3);
        assert_eq!(back.family_degs, Some(vec![3, 2]));
        assert_eq!(back.trees.len(), 1);
        assert_eq!(back.trees[0].root_weight, Some(1));
        assert_eq!(back.trees[0].root.children.len(), 2);
        assert_eq!(back.to_json(), json);
    }

    #[test]
    fn forest_round_trips_extension_points() {
        // a depth-0 forest whose root is a closed point of degree 2
        let f2 = field_create(2, 1).unwrap();
        let f4 = field_create(2, 2).unwrap();
        let g = crate::gf::FieldElement::from_coeffs(&f4, &[0, 1]).unwrap();
        let p = crate::geom::ProjPoint::new(vec![
            crate::gf::FieldElement::one(&f4),
            g,
            crate::gf::FieldElement::zero(&f4),
        ])
        .unwrap();
        let cp = frobenius_orbit(&p, &f2).unwrap();
        assert_eq!(cp.degree(), 2);
        let forest = Forest {
            level: 2,
            n: 2,
            field: f2,
            family_degs: None,
            trees: vec![IntersectionTree {
                root: TreeVertex::leaf(SchemeDescriptor::closed_point(cp.clone(), None)),
                root_weight: Some(1),
            }],
        };
        let json = forest.to_json();
        let back = Forest::from_json(&json).unwrap();
        let SchemeKind::ClosedPoint(cp2) = &back.trees[0].root.scheme.kind else {
            panic!("closed point expected")
        };
        assert_eq!(cp2, &cp);
        assert_eq!(back.to_json(), json);
    }

    #[test]
    fn plane_forest_of_cuspidal_cubic() {
        let f7 = field_create(7, 1).unwrap();
        let x =
            HypersurfaceScheme::new(poly_parse("T1^2*T2 + 6*T0^3", &f7, 3).unwrap(), 2).unwrap();
        let (forest, ci) = build_plane_forest(&x, &GroebnerLimits::default(), 12).unwrap();
        assert!(ci.is_some());
        // forest-wide weight-degree total is delta*(delta-1)
        let total: u128 = forest
            .trees
            .iter()
            .map(|t| t.root_weight.unwrap() as u128 * t.root.scheme.deg as u128)
            .sum();
        assert_eq!(total, 6);
        // cusp appears with weight at least mu*(mu-1) = 2
        let cusp = parse_target("0:0:1", &forest.field, 2).unwrap();
        let w = aggregate_lhs(&forest, &cusp).unwrap();
        assert!(w >= 2, "cusp weight {w}");
        // per-root bounds: i >= mu_X * mu_g and mu_g >= mu_X - 1
        for t in &forest.trees {
            let mu = t.root.scheme.mu_map.as_ref().unwrap();
            let i = t.root_weight.unwrap();
            assert!(i >= mu[0] * mu[1]);
            assert!(mu[1] + 1 >= mu[0]);
        }
        assert!(validate_forest(&forest).is_empty());
    }

    #[test]
    fn plane_forest_needs_extension_for_concurrent_lines_char2() {
        // T0*T1*(T0+T1) over F_2: the span of the partials is {T1^2, T0^2,
        // (T0+T1)^2}, and every member over F_2 contains a component of the
        // curve; the cut only becomes proper over F_4
        let f2 = field_create(2, 1).unwrap();
        let x =
            HypersurfaceScheme::new(poly_parse("T0^2*T1 + T0*T1^2", &f2, 3).unwrap(), 2).unwrap();
        let (forest, ci) = build_plane_forest(&x, &GroebnerLimits::default(), 12).unwrap();
        let ci = ci.unwrap();
        assert_eq!(ci.m, 2);
        // everything concentrates at the vertex [0:0:1]: one root of weight
        // delta*(delta-1) = 6, meeting the product bound with equality
        // (mu_X = 3, the derived double line has mu = 2)
        assert_eq!(forest.trees.len(), 1);
        let root = &forest.trees[0];
        assert_eq!(root.root_weight, Some(6));
        assert_eq!(root.root.scheme.deg, 1);
        let mu = root.root.scheme.mu_map.as_ref().unwrap();
        assert_eq!(mu, &vec![3, 2]);
    }

    #[test]
    fn plane_forest_of_smooth_conic_is_empty() {
        let f5 = field_create(5, 1).unwrap();
        let x = HypersurfaceScheme::new(poly_parse("T0*T2 + 4*T1^2", &f5, 3).unwrap(), 2).unwrap();
        let (forest, ci) = build_plane_forest(&x, &GroebnerLimits::default(), 12).unwrap();
        assert!(forest.trees.is_empty());
        assert!(ci.is_none());
    }

    #[test]
    fn globale_degenerate_single_family() {
        // r = 1: the components of a reduced union of two lines, each with
        // multiplicity 1 and weight 1; the bound is the degree of the union
        let f5 = field_create(5, 1).unwrap();
        let line = |name: &str| IntersectionTree {
            root: TreeVertex::leaf(SchemeDescriptor {
                kind: SchemeKind::Registered {
                    name: name.into(),
                    contains: vec![],
                },
                dim: 1,
                deg: 1,
                mu_map: Some(vec![1]),
            }),
            root_weight: Some(1),
        };
        let forest = Forest {
            level: 2,
            n: 2,
            field: f5,
            family_degs: Some(vec![2]),
            trees: vec![line("V(T0)"), line("V(T1)")],
        };
        let v = check_globale(&forest, 1).unwrap();
        assert_eq!(v.lhs, 2);
        assert_eq!(v.rhs, 2);
        assert!(v.ok);
    }

    #[test]
    fn globale_on_constructed_depth0() {
        // a union of two known lines meeting a conic: encode roots by hand
        let f5 = field_create(5, 1).unwrap();
        let forest = Forest {
            level: 2,
            n: 2,
            field: f5.clone(),
            family_degs: Some(vec![2, 2]),
            trees: vec![IntersectionTree {
                root: TreeVertex::leaf(point_scheme("0:0:1", &f5, Some(vec![2, 2]))),
                root_weight: Some(4),
            }],
        };
        let v = check_globale(&forest, 2).unwrap();
        assert_eq!(v.lhs, 4);
        assert_eq!(v.rhs, 4);
        assert!(v.ok);
    }
}
