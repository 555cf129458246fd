//! Normalized leaf-labeled binary trees and their colorings.
//!
//! A normalized tree on `[n]` is built from one on `[n-1]` by choosing any
//! of its `2n-3` nodes `v` and replacing `v` by a new internal node with
//! left child `v` and right child the leaf `n`. Recording the chosen node
//! (by creation order) at each step gives a mixed-radix insertion code with
//! radices `1, 3, 5, ..., 2n-3`, in bijection with the trees.

use std::fmt;

use crate::enumerate::{double_factorial, par_chunks, par_tally, Config, MixedRadix, Tally};
use crate::error::{Error, Result};
use crate::poly::{GammaVector, IntPolynomial};
use crate::symfunc::Partition;

pub const NORMALIZED_CAP: usize = 10;
pub const COLORED_COMB_CAP: usize = 8;
pub const COLORED_COMB_COLOR_CAP: usize = 5;

/// Index of a node in the preorder layout of a tree; the root is 0.
pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Node {
    Leaf(u32),
    Internal { left: NodeId, right: NodeId },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalizedTree {
    nodes: Vec<Node>,
    parent: Vec<Option<NodeId>>,
    valency: Vec<u32>,
}

/// Nested structure used while building or parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shape {
    Leaf(u32),
    Internal(Box<Shape>, Box<Shape>),
}

impl Shape {
    pub fn leaf(label: u32) -> Shape {
        Shape::Leaf(label)
    }

    pub fn join(left: Shape, right: Shape) -> Shape {
        Shape::Internal(Box::new(left), Box::new(right))
    }
}

impl NormalizedTree {
    /// Lays out `shape` in preorder and checks labels and normalization.
    pub fn from_shape(shape: &Shape) -> Result<Self> {
        let mut nodes = Vec::new();
        let mut parent = Vec::new();
        layout(shape, None, &mut nodes, &mut parent);
        let tree = NormalizedTree::from_layout(nodes, parent);
        tree.validate()?;
        Ok(tree)
    }

    fn from_layout(nodes: Vec<Node>, parent: Vec<Option<NodeId>>) -> Self {
        let mut valency = vec![0u32; nodes.len()];
        for x in (0..nodes.len()).rev() {
            valency[x] = match nodes[x] {
                Node::Leaf(label) => label,
                Node::Internal { left, right } => valency[left].min(valency[right]),
            };
        }
        NormalizedTree {
            nodes,
            parent,
            valency,
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.n();
        let mut seen = vec![false; n + 1];
        for node in &self.nodes {
            if let Node::Leaf(label) = *node {
                let label = label as usize;
                if label == 0 || label > n || seen[label] {
                    return Err(Error::Parse(format!("leaf labels must be exactly 1..={n}")));
                }
                seen[label] = true;
            }
        }
        for x in self.internal_preorder() {
            if self.valency[self.left(x)] != self.valency[x] {
                return Err(Error::Parse(format!(
                    "not normalized: minimum {} is not in the left subtree",
                    self.valency[x]
                )));
            }
        }
        Ok(())
    }

    /// Decodes an insertion code (digit `i` chooses among `2i+1` nodes).
    pub fn from_insertion_code(code: &[usize]) -> Result<Self> {
        for (i, &c) in code.iter().enumerate() {
            if c > 2 * i {
                return Err(Error::MalformedCode(format!(
                    "insertion digit {c} at position {i} exceeds {}",
                    2 * i
                )));
            }
        }
        Ok(Self::decode_insertion(code))
    }

    fn decode_insertion(code: &[usize]) -> Self {
        // creation-order arena: (node, parent)
        let mut arena: Vec<(Node, Option<usize>)> = vec![(Node::Leaf(1), None)];
        let mut root = 0;
        for (i, &v) in code.iter().enumerate() {
            let label = i as u32 + 2;
            let leaf = arena.len();
            let internal = leaf + 1;
            let old_parent = arena[v].1;
            arena.push((Node::Leaf(label), Some(internal)));
            arena.push((
                Node::Internal {
                    left: v,
                    right: leaf,
                },
                old_parent,
            ));
            match old_parent {
                None => root = internal,
                Some(p) => {
                    if let Node::Internal { left, right } = &mut arena[p].0 {
                        if *left == v {
                            *left = internal;
                        } else {
                            *right = internal;
                        }
                    }
                }
            }
            arena[v].1 = Some(internal);
        }
        // preorder relayout
        let mut nodes = Vec::with_capacity(arena.len());
        let mut parent = Vec::with_capacity(arena.len());
        let mut stack = vec![(root, None)];
        let mut slot_of_parent: Vec<(usize, bool)> = Vec::new();
        while let Some((a, p)) = stack.pop() {
            let id = nodes.len();
            parent.push(p);
            if let Some(pid) = p {
                // attach to the parent's pending slot
                let (_, is_right) = slot_of_parent.pop().unwrap();
                if let Node::Internal { left, right } = &mut nodes[pid] {
                    if is_right {
                        *right = id;
                    } else {
                        *left = id;
                    }
                }
            }
            match arena[a].0 {
                Node::Leaf(label) => nodes.push(Node::Leaf(label)),
                Node::Internal { left, right } => {
                    nodes.push(Node::Internal { left: 0, right: 0 });
                    stack.push((right, Some(id)));
                    slot_of_parent.push((id, true));
                    stack.push((left, Some(id)));
                    slot_of_parent.push((id, false));
                }
            }
        }
        NormalizedTree::from_layout(nodes, parent)
    }

    /// Inverse of [`from_insertion_code`](Self::from_insertion_code).
    pub fn insertion_code(&self) -> Vec<usize> {
        let n = self.n();
        // Repeatedly remove the largest leaf; its sibling is the node v that
        // was chosen. Track creation indices by rebuilding forward.
        let mut shape = self.to_shape();
        let mut removed = Vec::with_capacity(n.saturating_sub(1));
        for label in (2..=n as u32).rev() {
            let (next, anchor) = remove_leaf(shape, label);
            removed.push(anchor);
            shape = next;
        }
        removed.reverse();
        // Replay forward, tracking the current subtree of every node in
        // creation order; labels are distinct, so subtrees identify nodes.
        let mut code = Vec::with_capacity(removed.len());
        let mut current: Vec<Shape> = vec![Shape::leaf(1)];
        for (i, anchor) in removed.iter().enumerate() {
            let label = i as u32 + 2;
            let idx = current
                .iter()
                .position(|s| s == anchor)
                .expect("anchor subtree exists in the partial tree");
            code.push(idx);
            let replacement = Shape::join(anchor.clone(), Shape::leaf(label));
            for s in current.iter_mut().filter(|s| *s != anchor) {
                replace_subtree(s, anchor, &replacement);
            }
            current.push(Shape::leaf(label));
            current.push(replacement);
        }
        code
    }

    pub fn to_shape(&self) -> Shape {
        self.shape_at(0)
    }

    fn shape_at(&self, x: NodeId) -> Shape {
        match self.nodes[x] {
            Node::Leaf(label) => Shape::leaf(label),
            Node::Internal { left, right } => {
                Shape::join(self.shape_at(left), self.shape_at(right))
            }
        }
    }

    /// Parses the nested form, e.g. `"(1,(2,3))"`; a single leaf is `"1"`.
    pub fn parse(text: &str) -> Result<Self> {
        let bytes: Vec<u8> = text.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
        let mut pos = 0;
        let shape = parse_shape(&bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(Error::Parse(format!("trailing input in {text:?}")));
        }
        NormalizedTree::from_shape(&shape)
    }

    pub fn n(&self) -> usize {
        self.nodes.len().div_ceil(2)
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn node(&self, x: NodeId) -> Node {
        self.nodes[x]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_leaf(&self, x: NodeId) -> bool {
        matches!(self.nodes[x], Node::Leaf(_))
    }

    pub fn is_internal(&self, x: NodeId) -> bool {
        !self.is_leaf(x)
    }

    pub fn parent(&self, x: NodeId) -> Option<NodeId> {
        self.parent[x]
    }

    /// # Panics
    /// If `x` is a leaf.
    pub fn left(&self, x: NodeId) -> NodeId {
        match self.nodes[x] {
            Node::Internal { left, .. } => left,
            Node::Leaf(_) => panic!("leaf {x} has no children"),
        }
    }

    /// # Panics
    /// If `x` is a leaf.
    pub fn right(&self, x: NodeId) -> NodeId {
        match self.nodes[x] {
            Node::Internal { right, .. } => right,
            Node::Leaf(_) => panic!("leaf {x} has no children"),
        }
    }

    /// Minimum leaf label below `x`.
    pub fn valency(&self, x: NodeId) -> u32 {
        self.valency[x]
    }

    pub fn internal_preorder(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len()).filter(|&x| self.is_internal(x))
    }

    /// Internal nodes left to right in the planar drawing; position in this
    /// list is the node's coloring index.
    pub fn internal_inorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.n().saturating_sub(1));
        let mut stack = Vec::new();
        let mut cur = Some(0);
        loop {
            while let Some(x) = cur {
                stack.push(x);
                cur = match self.nodes[x] {
                    Node::Internal { left, .. } => Some(left),
                    Node::Leaf(_) => None,
                };
            }
            let Some(x) = stack.pop() else { break };
            if let Node::Internal { right, .. } = self.nodes[x] {
                out.push(x);
                cur = Some(right);
            }
        }
        out
    }

    /// Maps a [`NodeId`] to its coloring index (`None` for leaves).
    pub fn coloring_index(&self) -> Vec<Option<usize>> {
        let mut index = vec![None; self.nodes.len()];
        for (i, x) in self.internal_inorder().into_iter().enumerate() {
            index[x] = Some(i);
        }
        index
    }

    fn is_right_child(&self, x: NodeId) -> bool {
        self.parent[x].is_some_and(|p| self.right(p) == x)
    }

    fn is_left_child(&self, x: NodeId) -> bool {
        self.parent[x].is_some_and(|p| self.left(p) == x)
    }

    /// Internal node that is the right child of its parent.
    pub fn is_right_descent(&self, x: NodeId) -> bool {
        self.is_internal(x) && self.is_right_child(x)
    }

    pub fn rdes(&self) -> usize {
        (0..self.nodes.len())
            .filter(|&x| self.is_right_descent(x))
            .count()
    }

    /// No right descent whose parent is also a right descent.
    pub fn is_ndrd(&self) -> bool {
        !(0..self.nodes.len()).any(|x| {
            self.is_right_descent(x) && self.parent[x].is_some_and(|p| self.is_right_descent(p))
        })
    }

    /// `v(R(L(x))) > v(R(x))`; an internal node whose left child is a leaf
    /// counts as Lyndon.
    ///
    /// # Panics
    /// If `x` is a leaf.
    pub fn is_lyndon_node(&self, x: NodeId) -> bool {
        let left = self.left(x);
        match self.nodes[left] {
            Node::Leaf(_) => true,
            Node::Internal {
                right: left_right, ..
            } => self.valency[left_right] > self.valency[self.right(x)],
        }
    }

    fn is_non_lyndon(&self, x: NodeId) -> bool {
        self.is_internal(x) && !self.is_lyndon_node(x)
    }

    pub fn nlyn(&self) -> usize {
        (0..self.nodes.len())
            .filter(|&x| self.is_non_lyndon(x))
            .count()
    }

    pub fn is_lyndon_tree(&self) -> bool {
        self.nlyn() == 0
    }

    /// No non-Lyndon left child of a non-Lyndon node.
    pub fn is_ndnl(&self) -> bool {
        !(0..self.nodes.len()).any(|x| {
            self.is_non_lyndon(x)
                && self.is_left_child(x)
                && self.parent[x].is_some_and(|p| self.is_non_lyndon(p))
        })
    }

    /// Internal nodes that are not right descents and whose right child is a
    /// leaf.
    pub fn free_count(&self) -> usize {
        self.internal_preorder()
            .filter(|&x| !self.is_right_descent(x) && self.is_leaf(self.right(x)))
            .count()
    }

    /// Sizes of the maximal chains of internal nodes linked by the
    /// right-child relation, as a partition of `n-1`.
    pub fn comb_type(&self) -> Partition {
        Partition::new(self.comb_blocks().iter().map(|b| b.len() as u32).collect())
    }

    /// Blocks of the right-chain partition, each listed top-down.
    pub fn comb_blocks(&self) -> Vec<Vec<NodeId>> {
        self.internal_preorder()
            .filter(|&x| !self.is_right_descent(x))
            .map(|head| {
                let mut block = vec![head];
                let mut x = head;
                while self.is_internal(self.right(x)) {
                    x = self.right(x);
                    block.push(x);
                }
                block
            })
            .collect()
    }

    pub fn is_left_comb(&self) -> bool {
        self.rdes() == 0
    }

    /// The left comb `((..((1,2),3)..),n)`.
    pub fn left_comb(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize("trees need n >= 1".into()));
        }
        let shape = (2..=n as u32).fold(Shape::leaf(1), |acc, l| Shape::join(acc, Shape::leaf(l)));
        NormalizedTree::from_shape(&shape)
    }

    // -- coloring conditions --------------------------------------------------

    /// Condition (C): each right descent has color 0 and its parent color 1.
    pub fn is_bicolored_comb(&self, coloring: &Bicoloring) -> bool {
        let index = self.coloring_index();
        let color = |x: NodeId| coloring.colors[index[x].unwrap()];
        coloring.colors.len() + 1 == self.n()
            && (0..self.nodes.len())
                .filter(|&x| self.is_right_descent(x))
                .all(|x| color(x) == 0 && color(self.parent[x].unwrap()) == 1)
    }

    /// Condition (L): each non-Lyndon node has color 0 and its left child
    /// color 1.
    pub fn is_bicolored_lyndon(&self, coloring: &Bicoloring) -> bool {
        let index = self.coloring_index();
        let color = |x: NodeId| coloring.colors[index[x].unwrap()];
        coloring.colors.len() + 1 == self.n()
            && (0..self.nodes.len())
                .filter(|&x| self.is_non_lyndon(x))
                .all(|x| color(x) == 0 && color(self.left(x)) == 1)
    }

    /// `color(x) > color(R(x))` whenever `R(x)` is internal.
    pub fn is_colored_comb(&self, coloring: &MultiColoring) -> bool {
        let index = self.coloring_index();
        let color = |x: NodeId| coloring.colors[index[x].unwrap()];
        coloring.colors.len() + 1 == self.n()
            && coloring.colors.iter().all(|&c| c >= 1)
            && self
                .internal_preorder()
                .filter(|&x| self.is_internal(self.right(x)))
                .all(|x| color(x) > color(self.right(x)))
    }

    /// Colorings forced by (C): `None` if the constraints conflict.
    pub fn comb_fiber(&self) -> Option<ColoringFiber> {
        let constraints = (0..self.nodes.len())
            .filter(|&x| self.is_right_descent(x))
            .flat_map(|x| [(x, 0u8), (self.parent[x].unwrap(), 1u8)]);
        ColoringFiber::solve(self, constraints)
    }

    /// Colorings forced by (L): `None` if the constraints conflict.
    pub fn lyndon_fiber(&self) -> Option<ColoringFiber> {
        let constraints = (0..self.nodes.len())
            .filter(|&x| self.is_non_lyndon(x))
            .flat_map(|x| [(x, 0u8), (self.left(x), 1u8)]);
        ColoringFiber::solve(self, constraints)
    }

    /// Visits every coloring by `[1, k]` satisfying the colored-comb
    /// condition, by backtracking over internal nodes in preorder. Colors are
    /// passed indexed by [`NodeId`] (leaves hold 0).
    pub fn for_each_colored_comb(&self, k: u32, mut visit: impl FnMut(&[u32])) {
        let internals: Vec<NodeId> = self.internal_preorder().collect();
        let mut colors = vec![0u32; self.nodes.len()];
        self.color_rec(&internals, 0, k, &mut colors, &mut visit);
    }

    fn color_rec(
        &self,
        internals: &[NodeId],
        i: usize,
        k: u32,
        colors: &mut Vec<u32>,
        visit: &mut impl FnMut(&[u32]),
    ) {
        let Some(&x) = internals.get(i) else {
            visit(colors);
            return;
        };
        // a right descent must sit strictly below its parent's color
        let bound = if self.is_right_descent(x) {
            colors[self.parent[x].unwrap()] - 1
        } else {
            k
        };
        for c in 1..=bound {
            colors[x] = c;
            self.color_rec(internals, i + 1, k, colors, visit);
        }
        colors[x] = 0;
    }
}

fn layout(
    shape: &Shape,
    parent_id: Option<NodeId>,
    nodes: &mut Vec<Node>,
    parent: &mut Vec<Option<NodeId>>,
) -> NodeId {
    let id = nodes.len();
    parent.push(parent_id);
    match shape {
        Shape::Leaf(label) => nodes.push(Node::Leaf(*label)),
        Shape::Internal(l, r) => {
            nodes.push(Node::Internal { left: 0, right: 0 });
            let left = layout(l, Some(id), nodes, parent);
            let right = layout(r, Some(id), nodes, parent);
            nodes[id] = Node::Internal { left, right };
        }
    }
    id
}

/// Removes leaf `label` from `shape`, returning the smaller shape and the
/// sibling subtree that took the removed parent's place.
fn remove_leaf(shape: Shape, label: u32) -> (Shape, Shape) {
    fn rec(shape: Shape, label: u32, anchor: &mut Option<Shape>) -> Shape {
        match shape {
            Shape::Leaf(_) => shape,
            Shape::Internal(l, r) => {
                if *r == Shape::Leaf(label) {
                    *anchor = Some((*l).clone());
                    *l
                } else {
                    Shape::join(rec(*l, label, anchor), rec(*r, label, anchor))
                }
            }
        }
    }
    let mut anchor = None;
    let rest = rec(shape, label, &mut anchor);
    (rest, anchor.expect("largest leaf is always a right child"))
}

fn replace_subtree(shape: &mut Shape, target: &Shape, replacement: &Shape) {
    if shape == target {
        *shape = replacement.clone();
        return;
    }
    if let Shape::Internal(l, r) = shape {
        replace_subtree(l, target, replacement);
        replace_subtree(r, target, replacement);
    }
}

fn parse_shape(bytes: &[u8], pos: &mut usize) -> Result<Shape> {
    match bytes.get(*pos) {
        Some(b'(') => {
            *pos += 1;
            let left = parse_shape(bytes, pos)?;
            expect(bytes, pos, b',')?;
            let right = parse_shape(bytes, pos)?;
            expect(bytes, pos, b')')?;
            Ok(Shape::join(left, right))
        }
        Some(b) if b.is_ascii_digit() => {
            let start = *pos;
            while bytes.get(*pos).is_some_and(u8::is_ascii_digit) {
                *pos += 1;
            }
            let text = std::str::from_utf8(&bytes[start..*pos]).unwrap();
            text.parse()
                .map(Shape::Leaf)
                .map_err(|_| Error::Parse(format!("bad label {text:?}")))
        }
        _ => Err(Error::Parse(format!("unexpected input at offset {}", *pos))),
    }
}

fn expect(bytes: &[u8], pos: &mut usize, want: u8) -> Result<()> {
    if bytes.get(*pos) == Some(&want) {
        *pos += 1;
        Ok(())
    } else {
        Err(Error::Parse(format!(
            "expected {:?} at offset {}",
            want as char, *pos
        )))
    }
}

impl fmt::Display for NormalizedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn rec(t: &NormalizedTree, x: NodeId, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t.nodes[x] {
                Node::Leaf(label) => write!(f, "{label}"),
                Node::Internal { left, right } => {
                    write!(f, "(")?;
                    rec(t, left, f)?;
                    write!(f, ",")?;
                    rec(t, right, f)?;
                    write!(f, ")")
                }
            }
        }
        rec(self, 0, f)
    }
}

/// `{0,1}` colors of the internal nodes, indexed left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bicoloring {
    pub colors: Vec<u8>,
}

impl Bicoloring {
    pub fn ones(&self) -> usize {
        self.colors.iter().filter(|&&c| c == 1).count()
    }
}

/// Positive colors of the internal nodes, indexed left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiColoring {
    pub colors: Vec<u32>,
}

impl MultiColoring {
    /// `μ(j)` for `j = 1..=k`: how many internal nodes carry color `j`.
    pub fn color_counts(&self, k: u32) -> Vec<u32> {
        let mut counts = vec![0u32; k as usize];
        for &c in &self.colors {
            counts[c as usize - 1] += 1;
        }
        counts
    }
}

/// All bicolorings of one tree meeting a set of forced colors: a fixed base
/// coloring plus the unconstrained positions, which toggle freely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringFiber {
    base: Vec<u8>,
    unforced: Vec<usize>,
}

impl ColoringFiber {
    fn solve(
        tree: &NormalizedTree,
        constraints: impl Iterator<Item = (NodeId, u8)>,
    ) -> Option<Self> {
        let index = tree.coloring_index();
        let mut forced: Vec<Option<u8>> = vec![None; tree.n() - 1];
        for (x, c) in constraints {
            let slot = &mut forced[index[x]?];
            match *slot {
                Some(prev) if prev != c => return None,
                _ => *slot = Some(c),
            }
        }
        let base = forced.iter().map(|c| c.unwrap_or(0)).collect();
        let unforced = (0..forced.len()).filter(|&i| forced[i].is_none()).collect();
        Some(ColoringFiber { base, unforced })
    }

    pub fn unforced_count(&self) -> usize {
        self.unforced.len()
    }

    pub fn size(&self) -> u64 {
        1u64 << self.unforced.len()
    }

    pub fn base_ones(&self) -> usize {
        self.base.iter().filter(|&&c| c == 1).count()
    }

    /// The `mask`-th coloring: bit `b` of `mask` colors the `b`-th unforced
    /// position.
    pub fn coloring(&self, mask: u64) -> Bicoloring {
        let mut colors = self.base.clone();
        for (b, &i) in self.unforced.iter().enumerate() {
            colors[i] = ((mask >> b) & 1) as u8;
        }
        Bicoloring { colors }
    }

    pub fn iter(&self) -> impl Iterator<Item = Bicoloring> + '_ {
        (0..self.size()).map(|mask| self.coloring(mask))
    }
}

fn insertion_radices(n: usize) -> Vec<usize> {
    (2..=n).map(|m| 2 * m - 3).collect()
}

/// `(2n-3)!!` for `n >= 2`, 1 for `n = 1`.
pub fn normalized_count(n: usize) -> u64 {
    if n <= 1 {
        1
    } else {
        double_factorial(2 * n as u64 - 3)
    }
}

fn check_normalized(n: usize, config: &Config) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidSize("trees need n >= 1".into()));
    }
    config.check_cap("normalized tree", n, NORMALIZED_CAP)
}

/// Streams `Nor_n` in insertion-code order.
pub struct NormalizedTrees {
    odometer: MixedRadix,
}

impl Iterator for NormalizedTrees {
    type Item = NormalizedTree;

    fn next(&mut self) -> Option<NormalizedTree> {
        self.odometer
            .next_digits()
            .map(NormalizedTree::decode_insertion)
    }
}

pub fn enumerate_normalized(n: usize) -> Result<NormalizedTrees> {
    enumerate_normalized_with(n, &Config::default())
}

pub fn enumerate_normalized_with(n: usize, config: &Config) -> Result<NormalizedTrees> {
    check_normalized(n, config)?;
    Ok(NormalizedTrees {
        odometer: MixedRadix::new(insertion_radices(n)),
    })
}

/// Parallel fold of a per-tree statistic over `Nor_n`.
pub fn tally_normalized<F>(n: usize, config: &Config, per_tree: F) -> Result<Tally>
where
    F: Fn(&NormalizedTree, &mut Tally) + Sync + Send,
{
    check_normalized(n, config)?;
    let radices = insertion_radices(n);
    Ok(config.install(|| {
        par_tally(&radices, |digits, tally| {
            per_tree(&NormalizedTree::decode_insertion(digits), tally)
        })
    }))
}

/// Parallel fold over `Nor_n` into an arbitrary mergeable accumulator.
pub fn fold_normalized<T, F, M>(
    n: usize,
    config: &Config,
    identity: impl Fn() -> T + Sync + Send,
    per_tree: F,
    merge: M,
) -> Result<T>
where
    T: Send,
    F: Fn(&NormalizedTree, &mut T) + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    check_normalized(n, config)?;
    let radices = insertion_radices(n);
    let total = crate::enumerate::total_count(&radices);
    Ok(config.install(|| {
        par_chunks(
            total,
            &identity,
            |range| {
                let mut acc = identity();
                let mut odometer = MixedRadix::with_range(radices.clone(), range);
                while let Some(digits) = odometer.next_digits() {
                    per_tree(&NormalizedTree::decode_insertion(digits), &mut acc);
                }
                acc
            },
            &merge,
        )
    }))
}

/// Streams `(tree, coloring)` over all bicolored combs on `[n]`.
pub fn enumerate_bicolored_combs(
    n: usize,
) -> Result<impl Iterator<Item = (NormalizedTree, Bicoloring)>> {
    enumerate_bicolored_combs_with(n, &Config::default())
}

pub fn enumerate_bicolored_combs_with(
    n: usize,
    config: &Config,
) -> Result<impl Iterator<Item = (NormalizedTree, Bicoloring)>> {
    Ok(enumerate_normalized_with(n, config)?.flat_map(|tree| {
        let fiber = tree.comb_fiber();
        let colorings: Vec<Bicoloring> = fiber.iter().flat_map(|f| f.iter()).collect();
        colorings.into_iter().map(move |c| (tree.clone(), c))
    }))
}

/// Streams `(tree, coloring)` over all bicolored Lyndon trees on `[n]`.
pub fn enumerate_bicolored_lyndon(
    n: usize,
) -> Result<impl Iterator<Item = (NormalizedTree, Bicoloring)>> {
    enumerate_bicolored_lyndon_with(n, &Config::default())
}

pub fn enumerate_bicolored_lyndon_with(
    n: usize,
    config: &Config,
) -> Result<impl Iterator<Item = (NormalizedTree, Bicoloring)>> {
    Ok(enumerate_normalized_with(n, config)?.flat_map(|tree| {
        let fiber = tree.lyndon_fiber();
        let colorings: Vec<Bicoloring> = fiber.iter().flat_map(|f| f.iter()).collect();
        colorings.into_iter().map(move |c| (tree.clone(), c))
    }))
}

/// Number of bicolored combs by count of internal nodes colored 1.
pub fn bicolored_comb_tally(n: usize, config: &Config) -> Result<Tally> {
    tally_normalized(n, config, |tree, tally| {
        if let Some(fiber) = tree.comb_fiber() {
            for coloring in fiber.iter() {
                tally.add(coloring.ones());
            }
        }
    })
}

/// Number of bicolored Lyndon trees by count of internal nodes colored 1.
pub fn bicolored_lyndon_tally(n: usize, config: &Config) -> Result<Tally> {
    tally_normalized(n, config, |tree, tally| {
        if let Some(fiber) = tree.lyndon_fiber() {
            for coloring in fiber.iter() {
                tally.add(coloring.ones());
            }
        }
    })
}

pub fn bicolored_comb_polynomial(n: usize, config: &Config) -> Result<IntPolynomial> {
    Ok(IntPolynomial::from(&bicolored_comb_tally(n, config)?))
}

pub fn bicolored_lyndon_polynomial(n: usize, config: &Config) -> Result<IntPolynomial> {
    Ok(IntPolynomial::from(&bicolored_lyndon_tally(n, config)?))
}

/// Streams every colored comb on `[n]` with colors in `[1, k]`.
pub fn enumerate_colored_combs(
    n: usize,
    k: usize,
) -> Result<impl Iterator<Item = (NormalizedTree, MultiColoring)>> {
    enumerate_colored_combs_with(n, k, &Config::default())
}

pub fn enumerate_colored_combs_with(
    n: usize,
    k: usize,
    config: &Config,
) -> Result<impl Iterator<Item = (NormalizedTree, MultiColoring)>> {
    check_colored(n, k, config)?;
    Ok(enumerate_normalized_with(n, config)?.flat_map(move |tree| {
        let order = tree.internal_inorder();
        let mut colorings = Vec::new();
        tree.for_each_colored_comb(k as u32, |colors| {
            colorings.push(MultiColoring {
                colors: order.iter().map(|&x| colors[x]).collect(),
            });
        });
        colorings.into_iter().map(move |c| (tree.clone(), c))
    }))
}

pub(crate) fn check_colored(n: usize, k: usize, config: &Config) -> Result<()> {
    config.check_cap("colored comb", n, COLORED_COMB_CAP)?;
    if k == 0 {
        return Err(Error::InvalidSize("colored combs need k >= 1".into()));
    }
    config.check_cap("colored comb color", k, COLORED_COMB_COLOR_CAP)
}

/// γ-vector candidate: trees in NDRD_n tallied by `rdes`.
pub fn distribution_ndrd_rdes(n: usize) -> Result<GammaVector> {
    distribution_ndrd_rdes_with(n, &Config::default())
}

pub fn distribution_ndrd_rdes_with(n: usize, config: &Config) -> Result<GammaVector> {
    let tally = tally_normalized(n, config, |tree, tally| {
        if tree.is_ndrd() {
            tally.add(tree.rdes());
        }
    })?;
    GammaVector::from_tally(n - 1, &tally)
}

/// γ-vector candidate: trees in NDNL_n tallied by `nlyn`.
pub fn distribution_ndnl_nlyn(n: usize) -> Result<GammaVector> {
    distribution_ndnl_nlyn_with(n, &Config::default())
}

pub fn distribution_ndnl_nlyn_with(n: usize, config: &Config) -> Result<GammaVector> {
    let tally = tally_normalized(n, config, |tree, tally| {
        if tree.is_ndnl() {
            tally.add(tree.nlyn());
        }
    })?;
    GammaVector::from_tally(n - 1, &tally)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{drake_polynomial, gamma_closed_form};
    use std::collections::BTreeSet;

    fn t(s: &str) -> NormalizedTree {
        NormalizedTree::parse(s).unwrap()
    }

    /// Independent oracle: split the label set, keeping the minimum on the
    /// left.
    fn split_oracle(labels: &[u32]) -> Vec<Shape> {
        if labels.len() == 1 {
            return vec![Shape::leaf(labels[0])];
        }
        let (min, rest) = (labels[0], &labels[1..]);
        let mut out = Vec::new();
        // every nonempty proper subset of `rest` goes right
        for mask in 1u32..(1 << rest.len()) {
            let right: Vec<u32> = (0..rest.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| rest[i])
                .collect();
            let mut left = vec![min];
            left.extend(
                (0..rest.len())
                    .filter(|&i| mask >> i & 1 == 0)
                    .map(|i| rest[i]),
            );
            for l in split_oracle(&left) {
                for r in split_oracle(&right) {
                    out.push(Shape::join(l.clone(), r));
                }
            }
        }
        out
    }

    fn all_bicolorings(len: usize) -> impl Iterator<Item = Bicoloring> {
        (0u32..1 << len).map(move |m| Bicoloring {
            colors: (0..len).map(|i| (m >> i & 1) as u8).collect(),
        })
    }

    #[test]
    fn parse_and_display() {
        for s in ["1", "(1,2)", "(1,(2,3))", "((1,3),2)", "((1,(3,4)),(2,5))"] {
            assert_eq!(t(s).to_string(), s);
        }
        assert!(NormalizedTree::parse("(2,1)").is_err());
        assert!(NormalizedTree::parse("((2,3),1)").is_err());
        assert!(NormalizedTree::parse("(1,1)").is_err());
        assert!(NormalizedTree::parse("(1,3)").is_err());
        assert!(NormalizedTree::parse("(1,2").is_err());
    }

    #[test]
    fn enumeration_examples() {
        let two: Vec<String> = enumerate_normalized(2)
            .unwrap()
            .map(|t| t.to_string())
            .collect();
        assert_eq!(two, vec!["(1,2)"]);
        let three: BTreeSet<String> = enumerate_normalized(3)
            .unwrap()
            .map(|t| t.to_string())
            .collect();
        let expected: BTreeSet<String> = ["((1,2),3)", "((1,3),2)", "(1,(2,3))"]
            .into_iter()
            .map(String::from)
            .collect();
        assert_eq!(three, expected);
        assert_eq!(enumerate_normalized(4).unwrap().count(), 15);
        assert_eq!(enumerate_normalized(1).unwrap().count(), 1);
        assert!(matches!(
            enumerate_normalized(11),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn enumeration_matches_split_oracle() {
        for n in 1..=7u32 {
            let labels: Vec<u32> = (1..=n).collect();
            let oracle: BTreeSet<String> = split_oracle(&labels)
                .iter()
                .map(|s| NormalizedTree::from_shape(s).unwrap().to_string())
                .collect();
            let listed: Vec<String> = enumerate_normalized(n as usize)
                .unwrap()
                .map(|t| t.to_string())
                .collect();
            let unique: BTreeSet<String> = listed.iter().cloned().collect();
            assert_eq!(listed.len(), unique.len(), "duplicates at n={n}");
            assert_eq!(unique, oracle, "n={n}");
            assert_eq!(listed.len() as u64, normalized_count(n as usize));
        }
    }

    #[test]
    fn insertion_code_round_trip() {
        for n in 1..=6 {
            let mut odometer = MixedRadix::new(insertion_radices(n));
            while let Some(code) = odometer.next_digits() {
                let tree = NormalizedTree::from_insertion_code(code).unwrap();
                assert_eq!(tree.insertion_code(), code);
            }
        }
        assert!(NormalizedTree::from_insertion_code(&[1]).is_err());
    }

    #[test]
    fn counts_are_double_factorials() {
        let expected = [1u64, 1, 3, 15, 105, 945, 10395, 135135, 2027025];
        for (n, &e) in (1..=9).zip(&expected) {
            assert_eq!(normalized_count(n), e);
            let total = tally_normalized(n, &Config::default(), |_, t| t.add(0))
                .unwrap()
                .total();
            assert_eq!(total, e);
        }
    }

    #[test]
    fn every_enumerated_tree_is_normalized() {
        for n in 1..=7 {
            for tree in enumerate_normalized(n).unwrap() {
                for x in tree.internal_preorder() {
                    assert_eq!(tree.valency(tree.left(x)), tree.valency(x));
                    assert!(tree.valency(tree.right(x)) > tree.valency(x));
                }
                assert_eq!(tree.internal_preorder().count(), n - 1);
            }
        }
    }

    #[test]
    fn valency_examples() {
        let tree = t("(1,(2,3))");
        assert_eq!(tree.valency(tree.root()), 1);
        let r = tree.right(tree.root());
        assert_eq!(tree.valency(r), 2);
        let leaf = tree.right(r);
        assert_eq!(tree.node(leaf), Node::Leaf(3));
        assert_eq!(tree.valency(leaf), 3);
        for tree in enumerate_normalized(5).unwrap() {
            assert_eq!(tree.valency(tree.root()), 1);
        }
    }

    #[test]
    fn right_descents() {
        assert_eq!(t("(1,2)").rdes(), 0);
        assert_eq!(t("(1,(2,3))").rdes(), 1);
        for n in 1..=8 {
            let comb = NormalizedTree::left_comb(n).unwrap();
            assert_eq!(comb.rdes(), 0);
            assert!(comb.is_ndrd());
            assert_eq!(comb.free_count(), n - 1);
        }
        for tree in enumerate_normalized(3).unwrap() {
            assert!(tree.is_ndrd());
        }
        assert!(!t("(1,(2,(3,4)))").is_ndrd());
        assert!(t("(1,((2,3),4))").is_ndrd());
    }

    #[test]
    fn rdes_bounds() {
        for n in 2..=8 {
            for tree in enumerate_normalized(n).unwrap() {
                assert!(tree.rdes() <= n - 2);
                if tree.is_ndrd() {
                    assert!(tree.rdes() <= (n - 1) / 2);
                }
            }
        }
    }

    #[test]
    fn lyndon_examples() {
        assert_eq!(t("(1,2)").nlyn(), 0);
        let mut tally = Tally::new();
        for tree in enumerate_normalized(3).unwrap() {
            assert!(tree.is_ndnl());
            tally.add(tree.nlyn());
        }
        assert_eq!(tally.counts(), &[2, 1]);
        assert_eq!(t("((1,2),3)").nlyn(), 1);
        assert_eq!(t("((1,3),2)").nlyn(), 0);
        let lyndon = enumerate_normalized(4)
            .unwrap()
            .filter(NormalizedTree::is_lyndon_tree)
            .count();
        assert_eq!(lyndon, 6);
    }

    #[test]
    fn ndnl_at_five_matches_closed_form() {
        let mut tally = Tally::new();
        for tree in enumerate_normalized(5).unwrap() {
            if tree.is_ndnl() {
                tally.add(tree.nlyn());
            }
        }
        assert_eq!(tally.counts(), &[24, 58, 9]);
    }

    #[test]
    fn lyndon_tree_count_is_factorial() {
        let mut factorial = 1u64;
        for n in 2..=9usize {
            factorial *= (n - 1) as u64;
            let count = tally_normalized(n, &Config::default(), |tree, t| {
                if tree.is_lyndon_tree() {
                    t.add(0)
                }
            })
            .unwrap()
            .total();
            assert_eq!(count, factorial, "n={n}");
        }
    }

    #[test]
    fn free_count_identity_on_ndrd() {
        assert_eq!(t("(1,2)").free_count(), 1);
        // the root is the only right descent; (2,3) is its right child
        let tree = t("(1,(2,3))");
        assert_eq!((tree.free_count(), tree.rdes()), (0, 1));
        let tree = t("((1,(2,3)),4)");
        assert_eq!((tree.free_count(), tree.rdes()), (1, 1));
        for n in 2..=9 {
            let bad = tally_normalized(n, &Config::default(), |tree, t| {
                if tree.is_ndrd() && tree.free_count() + 2 * tree.rdes() != n - 1 {
                    t.add(0)
                }
            })
            .unwrap();
            assert_eq!(bad.total(), 0, "n={n}");
        }
    }

    #[test]
    fn bicolored_combs_small() {
        let combs: Vec<_> = enumerate_bicolored_combs(3).unwrap().collect();
        assert_eq!(combs.len(), 9);
        let mut tally = Tally::new();
        combs.iter().for_each(|(_, c)| tally.add(c.ones()));
        assert_eq!(tally.counts(), &[2, 5, 2]);
        assert_eq!(enumerate_bicolored_combs(2).unwrap().count(), 2);
        assert_eq!(
            bicolored_comb_polynomial(4, &Config::default()).unwrap(),
            IntPolynomial::from_i64s(&[6, 26, 26, 6])
        );
    }

    #[test]
    fn bicolored_lyndon_small() {
        let trees: Vec<_> = enumerate_bicolored_lyndon(3).unwrap().collect();
        assert_eq!(trees.len(), 9);
        let mut tally = Tally::new();
        trees.iter().for_each(|(_, c)| tally.add(c.ones()));
        assert_eq!(tally.counts(), &[2, 5, 2]);
        assert_eq!(enumerate_bicolored_lyndon(2).unwrap().count(), 2);
        assert_eq!(
            bicolored_lyndon_polynomial(5, &Config::default()).unwrap(),
            drake_polynomial(5)
        );
    }

    #[test]
    fn fibers_match_brute_force_filtering() {
        for n in 1..=6 {
            for tree in enumerate_normalized(n).unwrap() {
                let comb: BTreeSet<Vec<u8>> = all_bicolorings(n - 1)
                    .filter(|c| tree.is_bicolored_comb(c))
                    .map(|c| c.colors)
                    .collect();
                let fiber: BTreeSet<Vec<u8>> = tree
                    .comb_fiber()
                    .iter()
                    .flat_map(|f| f.iter())
                    .map(|c| c.colors)
                    .collect();
                assert_eq!(comb, fiber, "{tree}");
                let lyn: BTreeSet<Vec<u8>> = all_bicolorings(n - 1)
                    .filter(|c| tree.is_bicolored_lyndon(c))
                    .map(|c| c.colors)
                    .collect();
                let fiber: BTreeSet<Vec<u8>> = tree
                    .lyndon_fiber()
                    .iter()
                    .flat_map(|f| f.iter())
                    .map(|c| c.colors)
                    .collect();
                assert_eq!(lyn, fiber, "{tree}");
            }
        }
    }

    #[test]
    fn colored_trees_have_restricted_underlying_trees() {
        for n in 1..=7 {
            for (tree, coloring) in enumerate_bicolored_combs(n).unwrap() {
                assert!(tree.is_ndrd());
                assert!(tree.is_bicolored_comb(&coloring));
            }
            for (tree, coloring) in enumerate_bicolored_lyndon(n).unwrap() {
                assert!(tree.is_ndnl());
                assert!(tree.is_bicolored_lyndon(&coloring));
            }
        }
    }

    #[test]
    fn comb_fiber_size_is_two_to_the_free_count() {
        for n in 1..=8 {
            for tree in enumerate_normalized(n).unwrap() {
                match tree.comb_fiber() {
                    Some(fiber) => {
                        assert!(tree.is_ndrd());
                        assert_eq!(fiber.size(), 1 << tree.free_count(), "{tree}");
                    }
                    None => assert!(!tree.is_ndrd()),
                }
            }
        }
    }

    #[test]
    fn comb_type_examples() {
        assert_eq!(t("(1,(2,3))").comb_type(), Partition::new(vec![2]));
        for n in 1..=6 {
            let comb = NormalizedTree::left_comb(n).unwrap();
            assert_eq!(comb.comb_type(), Partition::new(vec![1; n - 1]));
        }
        // two right chains of length 2 hanging off a left spine of singletons
        let tree = t("((((((1,(2,3)),4),(5,6)),7),8),9)");
        assert_eq!(tree.comb_type(), Partition::new(vec![2, 2, 1, 1, 1, 1]));
        for tree in enumerate_normalized(6).unwrap() {
            assert_eq!(tree.comb_type().weight(), 5);
        }
    }

    #[test]
    fn colored_comb_examples() {
        let k2: Vec<_> = enumerate_colored_combs(3, 2).unwrap().collect();
        assert_eq!(k2.len(), 9);
        // colors {1,2} relabel to the bicolored combs {0,1}
        let as_bi: BTreeSet<(String, Vec<u8>)> = k2
            .iter()
            .map(|(t, c)| {
                (
                    t.to_string(),
                    c.colors.iter().map(|&x| (x - 1) as u8).collect(),
                )
            })
            .collect();
        let bi: BTreeSet<(String, Vec<u8>)> = enumerate_bicolored_combs(3)
            .unwrap()
            .map(|(t, c)| (t.to_string(), c.colors))
            .collect();
        assert_eq!(as_bi, bi);
        for n in 1..=6 {
            let k1: Vec<_> = enumerate_colored_combs(n, 1).unwrap().collect();
            assert!(k1
                .iter()
                .all(|(t, _)| t.comb_type() == Partition::new(vec![1; n - 1])));
            let trees: BTreeSet<String> = k1.iter().map(|(t, _)| t.to_string()).collect();
            assert_eq!(trees.len(), k1.len());
        }
        assert_eq!(enumerate_colored_combs(3, 3).unwrap().count(), 21);
        assert!(enumerate_colored_combs(9, 2).is_err());
        assert!(enumerate_colored_combs(3, 6).is_err());
    }

    #[test]
    fn colored_comb_backtracking_matches_filtering() {
        for n in 1..=5 {
            for k in 1..=3u32 {
                for tree in enumerate_normalized(n).unwrap() {
                    let m = n - 1;
                    let mut filtered = 0;
                    for code in 0..(k as usize).pow(m as u32) {
                        let colors =
                            (0..m).map(|i| (code / (k as usize).pow(i as u32)) % k as usize + 1);
                        let coloring = MultiColoring {
                            colors: colors.map(|c| c as u32).collect(),
                        };
                        if tree.is_colored_comb(&coloring) {
                            filtered += 1;
                        }
                    }
                    let mut backtracked = 0;
                    tree.for_each_colored_comb(k, |_| backtracked += 1);
                    assert_eq!(filtered, backtracked, "{tree} k={k}");
                }
            }
        }
    }

    #[test]
    fn distributions_small() {
        let g = GammaVector::from_i64s(2, &[2, 1]).unwrap();
        assert_eq!(distribution_ndrd_rdes(3).unwrap(), g);
        assert_eq!(distribution_ndnl_nlyn(3).unwrap(), g);
        assert_eq!(distribution_ndrd_rdes(6).unwrap(), gamma_closed_form(6));
        assert_eq!(distribution_ndnl_nlyn(6).unwrap(), gamma_closed_form(6));
        assert_eq!(distribution_ndrd_rdes(1).unwrap(), gamma_closed_form(1));
    }

    #[test]
    fn coloring_index_is_left_to_right() {
        let tree = t("((1,3),(2,4))");
        let order = tree.internal_inorder();
        assert_eq!(order.len(), 3);
        // in-order: (1,3) node, root, (2,4) node
        assert_eq!(tree.valency(order[0]), 1);
        assert_eq!(order[1], tree.root());
        assert_eq!(tree.valency(order[2]), 2);
    }
}
