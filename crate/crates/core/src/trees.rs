//! The generation tree built by repeated lifting, the Farey-interval tree,
//! the check that the two coincide, and DOT/JSON export.

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::farey::{totients, FareyInterval};
use crate::fraction::Fraction;
use crate::lifting::{generate_up_to, lift_fibers, project, BranchTag};
use crate::perm::Permutation;
use crate::report::Report;
use crate::sets::in_affine_layer;
use crate::sos::{suranyi_table, theta_ab};

/// Upper bound on the depth of any tree built here.
pub const MAX_TREE_DEPTH: usize = 500;

fn check_depth(depth: usize) -> Result<()> {
    if depth == 0 {
        return Err(Error::Domain("tree depth must be at least 1".into()));
    }
    if depth > MAX_TREE_DEPTH {
        return Err(Error::SizeGuard {
            m: depth,
            limit: MAX_TREE_DEPTH,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenNode {
    pub perm: Permutation,
    pub tag: BranchTag,
    /// Index of the parent in the previous level.
    pub parent: Option<usize>,
    /// Indices of the children in the next level, left to right.
    pub children: Vec<usize>,
}

/// Level `m` of the tree (stored at index `m − 1`) lists degree-`m`
/// permutations left to right.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenTree {
    levels: Vec<Vec<GenNode>>,
}

impl GenTree {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Nodes at degree `m` (1-based).
    pub fn level(&self, m: usize) -> &[GenNode] {
        &self.levels[m - 1]
    }

    pub fn levels(&self) -> &[Vec<GenNode>] {
        &self.levels
    }

    pub fn row(&self, m: usize) -> Vec<&Permutation> {
        self.level(m).iter().map(|n| &n.perm).collect()
    }

    pub fn to_labeled(&self, with_anchors: bool) -> LabeledNode {
        self.labeled(0, 0, with_anchors)
    }

    fn labeled(&self, depth: usize, idx: usize, with_anchors: bool) -> LabeledNode {
        let node = &self.levels[depth][idx];
        let children: Vec<LabeledNode> = node
            .children
            .iter()
            .map(|&c| self.labeled(depth + 1, c, with_anchors))
            .collect();
        let children = if with_anchors && !children.is_empty() {
            let anchor = node.perm.psi_inverse().expect("degree is in range");
            vec![LabeledNode {
                label: anchor.to_string(),
                tag: None,
                interval: None,
                anchor: true,
                children,
            }]
        } else {
            children
        };
        LabeledNode {
            label: node.perm.to_string(),
            tag: node.tag.superscript().map(str::to_string),
            interval: None,
            anchor: false,
            children,
        }
    }
}

/// Builds the tree top-down: each level is the concatenation of the lifted
/// fibers of the previous level, in parent order.
pub fn build_gen_tree(depth: usize) -> Result<GenTree> {
    check_depth(depth)?;
    let mut levels = vec![vec![GenNode {
        perm: Permutation::identity(1)?,
        tag: BranchTag::None,
        parent: None,
        children: Vec::new(),
    }]];
    while levels.len() < depth {
        let prev = levels.last_mut().expect("nonempty");
        let parents: Vec<Permutation> = prev.iter().map(|n| n.perm.clone()).collect();
        let fibers = lift_fibers(&parents)?;
        let mut next = Vec::new();
        for (pi, fiber) in fibers.into_iter().enumerate() {
            for (child, tag) in fiber.children {
                prev[pi].children.push(next.len());
                next.push(GenNode {
                    perm: child,
                    tag,
                    parent: Some(pi),
                    children: Vec::new(),
                });
            }
        }
        levels.push(next);
    }
    Ok(GenTree { levels })
}

/// Builds the same tree bottom-up from the sets of each level: every
/// permutation is attached to its projection, siblings are ordered
/// `θ_{a,0}` before `θ_{a,1}`.
pub fn build_gen_tree_by_projection(depth: usize) -> Result<GenTree> {
    check_depth(depth)?;
    let sets = generate_up_to(depth)?;
    let mut levels: Vec<Vec<GenNode>> = vec![vec![GenNode {
        perm: Permutation::identity(1)?,
        tag: BranchTag::None,
        parent: None,
        children: Vec::new(),
    }]];
    for set in &sets[1..] {
        let prev = levels.last_mut().expect("nonempty");
        let position: HashMap<&Permutation, usize> =
            prev.iter().enumerate().map(|(i, n)| (&n.perm, i)).collect();
        let projected: Vec<(usize, Permutation)> = set
            .members()
            .par_iter()
            .map(|theta| {
                let parent = project(theta)?;
                let idx = *position.get(&parent).ok_or_else(|| {
                    Error::Invariant(format!(
                        "{theta} projects to {parent}, absent from the previous level"
                    ))
                })?;
                Ok((idx, theta.clone()))
            })
            .collect::<Result<_>>()?;
        let mut fibers: Vec<Vec<Permutation>> = vec![Vec::new(); prev.len()];
        for (idx, theta) in projected {
            fibers[idx].push(theta);
        }
        let mut next = Vec::new();
        for (pi, mut fiber) in fibers.into_iter().enumerate() {
            let tagged: Vec<(Permutation, BranchTag)> = match fiber.len() {
                1 => vec![(fiber.pop().expect("one child"), BranchTag::None)],
                2 => {
                    fiber.sort_by_key(|t| !in_affine_layer(t, 0));
                    let [zero, one]: [Permutation; 2] = fiber.try_into().expect("two children");
                    if !in_affine_layer(&zero, 0) || !in_affine_layer(&one, 1) {
                        return Err(Error::Invariant(format!(
                            "siblings {zero}, {one} are not an affine pair"
                        )));
                    }
                    vec![(zero, BranchTag::Zero), (one, BranchTag::One)]
                }
                n => {
                    return Err(Error::Invariant(format!(
                        "{} has {n} preimages",
                        prev[pi].perm
                    )))
                }
            };
            for (child, tag) in tagged {
                prev[pi].children.push(next.len());
                next.push(GenNode {
                    perm: child,
                    tag,
                    parent: Some(pi),
                    children: Vec::new(),
                });
            }
        }
        levels.push(next);
    }
    Ok(GenTree { levels })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FareyNode {
    pub interval: FareyInterval,
    /// `τ` evaluated inside the interval.
    pub perm: Permutation,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

/// Order-`m` Farey intervals at level `m`, each attached to the interval of
/// order `m − 1` that contains it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FareyTree {
    levels: Vec<Vec<FareyNode>>,
}

impl FareyTree {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, m: usize) -> &[FareyNode] {
        &self.levels[m - 1]
    }

    pub fn levels(&self) -> &[Vec<FareyNode>] {
        &self.levels
    }

    pub fn row(&self, m: usize) -> Vec<&Permutation> {
        self.level(m).iter().map(|n| &n.perm).collect()
    }

    pub fn to_labeled(&self) -> LabeledNode {
        self.labeled(0, 0)
    }

    fn labeled(&self, depth: usize, idx: usize) -> LabeledNode {
        let node = &self.levels[depth][idx];
        LabeledNode {
            label: node.perm.to_string(),
            tag: None,
            interval: Some(node.interval.to_string()),
            anchor: false,
            children: node
                .children
                .iter()
                .map(|&c| self.labeled(depth + 1, c))
                .collect(),
        }
    }
}

pub fn build_farey_tree(depth: usize) -> Result<FareyTree> {
    check_depth(depth)?;
    let tables = (1..=depth)
        .into_par_iter()
        .map(suranyi_table)
        .collect::<Result<Vec<_>>>()?;
    let mut levels: Vec<Vec<FareyNode>> = Vec::with_capacity(depth);
    for table in tables {
        let mut next: Vec<FareyNode> = table
            .entries()
            .iter()
            .map(|(iv, p)| FareyNode {
                interval: iv.clone(),
                perm: p.clone(),
                parent: None,
                children: Vec::new(),
            })
            .collect();
        if let Some(prev) = levels.last_mut() {
            // both levels are sorted, so a single sweep finds each container
            let mut pi = 0;
            for (ci, child) in next.iter_mut().enumerate() {
                while pi < prev.len() && !prev[pi].interval.contains_interval(&child.interval) {
                    pi += 1;
                }
                if pi == prev.len() {
                    return Err(Error::Invariant(format!(
                        "no parent interval contains {}",
                        child.interval
                    )));
                }
                child.parent = Some(pi);
                prev[pi].children.push(ci);
            }
        }
        levels.push(next);
    }
    Ok(FareyTree { levels })
}

/// Compares the generation tree with the Farey tree level by level and node
/// by node, and checks how each interval splits.
pub fn check_isomorphism(depth: usize) -> Result<Report> {
    let gen = build_gen_tree(depth)?;
    let farey = build_farey_tree(depth)?;
    let phi = totients(depth);
    let mut report = Report::new("generation tree vs Farey tree");

    for m in 1..=depth {
        let at = Some(m);
        let (g, f) = (gen.level(m), farey.level(m));
        let rows_equal = gen.row(m) == farey.row(m);
        report.record(
            "level rows agree",
            at,
            rows_equal,
            format!("{} vs {} nodes", g.len(), f.len()),
        );
        let shape_equal = g.len() == f.len()
            && g.iter()
                .zip(f)
                .all(|(a, b)| a.parent == b.parent && a.children == b.children);
        report.record("parent and child links agree", at, shape_equal, "");

        if m == depth {
            continue;
        }
        let child_level = farey.level(m + 1);
        let mut branching = 0u64;
        let mut bad = Vec::new();
        for node in f {
            let kids: Vec<&FareyNode> = node.children.iter().map(|&c| &child_level[c]).collect();
            let ok = match kids[..] {
                [only] => only.interval.same_span(&node.interval),
                [left, right] => {
                    branching += 1;
                    split_is_affine(m + 1, &node.interval, left, right)?
                }
                _ => false,
            };
            if !ok {
                bad.push(node.interval.to_string());
            }
        }
        report.record(
            "interval division",
            Some(m + 1),
            bad.is_empty(),
            if bad.is_empty() {
                String::new()
            } else {
                format!("bad splits at {}", bad.join(" "))
            },
        );
        report.record(
            "branching parents = phi(m)",
            Some(m + 1),
            branching == phi[m + 1],
            format!("{branching} vs {}", phi[m + 1]),
        );
    }
    Ok(report)
}

/// A split `(lo, hi) = (lo, a/m) ⊔ {a/m} ⊔ (a/m, hi)` whose halves carry
/// `θ_{a,0}` and `θ_{a,1}`.
fn split_is_affine(
    m: usize,
    parent: &FareyInterval,
    left: &FareyNode,
    right: &FareyNode,
) -> Result<bool> {
    let cut = &left.interval.hi;
    let spans = left.interval.lo == parent.lo
        && right.interval.lo == *cut
        && right.interval.hi == parent.hi
        && *cut.denom() == m.into();
    if !spans {
        return Ok(false);
    }
    let a: i64 =
        i64::try_from(cut.numer()).map_err(|_| Error::Invariant("numerator overflow".into()))?;
    Ok(left.perm == theta_ab(m, a, 0)? && right.perm == theta_ab(m, a, 1)?)
}

/// Tree in a form shared by both exporters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabeledNode {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tag: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<String>,
    /// Intermediate `Ψ⁻¹(π)` node inserted between a parent and its children.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub anchor: bool,
    pub children: Vec<LabeledNode>,
}

fn escape_html(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Renders one or more trees as a Graphviz digraph. Each tree becomes a
/// cluster; nodes on the same level share a rank and children keep their
/// left-to-right order.
pub fn to_dot(trees: &[(&str, &LabeledNode)]) -> String {
    let mut out = String::from("digraph soslift {\n  ordering=out;\n  node [shape=plaintext];\n");
    let mut next_id = 0usize;
    for (ti, (name, root)) in trees.iter().enumerate() {
        let mut ranks: Vec<Vec<usize>> = Vec::new();
        let mut body = String::new();
        emit(root, 0, &mut next_id, &mut ranks, &mut body);
        let _ = writeln!(out, "  subgraph cluster_{ti} {{\n    label=\"{name}\";");
        out.push_str(&body);
        for rank in ranks {
            let ids: Vec<String> = rank.iter().map(|i| format!("n{i}")).collect();
            let _ = writeln!(out, "    {{ rank=same; {}; }}", ids.join("; "));
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

fn emit(
    node: &LabeledNode,
    depth: usize,
    next_id: &mut usize,
    ranks: &mut Vec<Vec<usize>>,
    out: &mut String,
) -> usize {
    let id = *next_id;
    *next_id += 1;
    if ranks.len() <= depth {
        ranks.push(Vec::new());
    }
    ranks[depth].push(id);
    let mut label = escape_html(&node.label);
    if let Some(tag) = &node.tag {
        let _ = write!(label, "<sup>{}</sup>", escape_html(tag));
    }
    if let Some(iv) = &node.interval {
        let _ = write!(
            label,
            "<br/><font point-size=\"9\">{}</font>",
            escape_html(iv)
        );
    }
    let style = if node.anchor {
        ", fontcolor=gray40"
    } else {
        ""
    };
    let _ = writeln!(out, "    n{id} [label=<{label}>{style}];");
    for child in &node.children {
        let cid = emit(child, depth + 1, next_id, ranks, out);
        let _ = writeln!(out, "    n{id} -> n{cid};");
    }
    id
}

/// The Farey point `a/m` separating the two children of a branching node.
pub fn split_point(tree: &FareyTree, m: usize, idx: usize) -> Option<Fraction> {
    let node = &tree.level(m)[idx];
    match node.children[..] {
        [l, _] => Some(tree.level(m + 1)[l].interval.hi.clone()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(tree: &GenTree, m: usize) -> String {
        tree.row(m)
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }

    #[test]
    fn generation_rows() {
        let t = build_gen_tree(6).unwrap();
        assert_eq!(row(&t, 1), "1");
        assert_eq!(row(&t, 2), "12 21");
        assert_eq!(row(&t, 3), "123 231 213 321");
        assert_eq!(row(&t, 4), "1234 2341 2413 3142 3214 4321");
        assert_eq!(
            row(&t, 5),
            "12345 23451 24513 24135 35241 31425 42531 42153 43215 54321"
        );
        assert_eq!(
            row(&t, 6),
            "123456 234561 245613 246135 351462 362514 415263 426315 531642 532164 543216 654321"
        );
    }

    #[test]
    fn projection_rebuild_matches() {
        assert_eq!(
            build_gen_tree(8).unwrap(),
            build_gen_tree_by_projection(8).unwrap()
        );
    }

    #[test]
    fn tags_follow_affine_layers() {
        let t = build_gen_tree(5).unwrap();
        let tags: Vec<BranchTag> = t.level(3).iter().map(|n| n.tag).collect();
        assert_eq!(
            tags,
            [
                BranchTag::Zero,
                BranchTag::One,
                BranchTag::Zero,
                BranchTag::One
            ]
        );
        assert_eq!(t.level(4)[2].tag, BranchTag::None);
    }

    #[test]
    fn farey_tree_shape() {
        let f = build_farey_tree(4).unwrap();
        assert_eq!(f.level(1).len(), 1);
        assert_eq!(f.level(4).len(), 6);
        assert_eq!(split_point(&f, 1, 0), Some(Fraction::new(1, 2).unwrap()));
        assert_eq!(split_point(&f, 3, 0), Some(Fraction::new(1, 4).unwrap()));
        assert_eq!(split_point(&f, 3, 1), None);
    }

    #[test]
    fn isomorphism_small() {
        let r = check_isomorphism(9).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn exports() {
        let t = build_gen_tree(3).unwrap();
        let dot = to_dot(&[("gen", &t.to_labeled(false))]);
        assert!(dot.contains("ordering=out"));
        assert!(dot.contains("12<sup>(0)</sup>"));
        assert!(dot.contains("rank=same"));
        let with = t.to_labeled(true);
        assert_eq!(with.children[0].label, "12");
        assert!(with.children[0].anchor);
        let json = serde_json::to_value(t.to_labeled(false)).unwrap();
        assert_eq!(json["children"][1]["label"], "21");
        assert_eq!(json["children"][1]["tag"], "(1)");
        assert!(build_gen_tree(0).is_err());
    }
}
