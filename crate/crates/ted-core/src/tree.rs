//! Rooted ordered labeled trees and their text form.
//!
//! Grammar: `Tree := '(' INT Tree* ')'`, whitespace separated. The empty tree
//! is written `()`. Serialization is canonical (single spaces, no trailing
//! whitespace) and `parse` inverts it exactly.

use std::fmt::Write as _;

/// Index into the alphabet of the enclosing instance.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Label(pub u32);

/// Index into a tree's node arena.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct NodeId(pub usize);

#[derive(Clone, Debug)]
pub struct Node {
    pub label: Label,
    pub children: Vec<NodeId>,
}

/// A rooted tree with a left-to-right order among siblings. May be empty.
#[derive(Clone, Debug, Default)]
pub struct LabeledTree {
    nodes: Vec<Node>,
    root: Option<NodeId>,
}

impl LabeledTree {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Single node.
    pub fn leaf(label: Label) -> Self {
        let mut t = Self::empty();
        let v = t.add_node(label, Vec::new());
        t.set_root(v);
        t
    }

    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> Option<NodeId> {
        self.root
    }

    pub fn label(&self, v: NodeId) -> Label {
        self.nodes[v.0].label
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.nodes[v.0].children
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v.0 < self.nodes.len()
    }

    /// Adds a node owning the given (already present) children. The caller
    /// must not reuse a node as a child twice; `validate` catches violations.
    pub fn add_node(&mut self, label: Label, children: Vec<NodeId>) -> NodeId {
        debug_assert!(children.iter().all(|c| c.0 < self.nodes.len()));
        let id = NodeId(self.nodes.len());
        self.nodes.push(Node { label, children });
        id
    }

    pub fn set_root(&mut self, v: NodeId) {
        assert!(v.0 < self.nodes.len());
        self.root = Some(v);
    }

    /// Copies `sub` into this arena and returns the id of its root. Panics on
    /// an empty subtree.
    pub fn graft(&mut self, sub: &LabeledTree) -> NodeId {
        let off = self.nodes.len();
        for node in &sub.nodes {
            self.nodes.push(Node {
                label: node.label,
                children: node.children.iter().map(|c| NodeId(c.0 + off)).collect(),
            });
        }
        NodeId(sub.root.expect("graft of empty tree").0 + off)
    }

    /// Checks that the arena forms exactly one tree below `root`.
    pub fn validate(&self) -> Result<(), TreeError> {
        if self.nodes.is_empty() {
            return if self.root.is_none() {
                Ok(())
            } else {
                Err(TreeError::DanglingRoot)
            };
        }
        let root = self.root.ok_or(TreeError::MissingRoot)?;
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![root];
        let mut count = 0usize;
        while let Some(v) = stack.pop() {
            if seen[v.0] {
                return Err(TreeError::NotATree);
            }
            seen[v.0] = true;
            count += 1;
            for &c in &self.nodes[v.0].children {
                stack.push(c);
            }
        }
        if count != self.nodes.len() {
            return Err(TreeError::NotATree);
        }
        Ok(())
    }

    /// Preorder node sequence (root first, children left to right).
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.size());
        let Some(root) = self.root else {
            return out;
        };
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            out.push(v);
            for &c in self.nodes[v.0].children.iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    /// Postorder node sequence (children left to right, then the node).
    pub fn postorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.size());
        let Some(root) = self.root else {
            return out;
        };
        // (node, next child index) frames, kept explicit so deep spines do not
        // overflow the call stack.
        let mut stack: Vec<(NodeId, usize)> = vec![(root, 0)];
        while let Some(&mut (v, ref mut idx)) = stack.last_mut() {
            if *idx < self.nodes[v.0].children.len() {
                let c = self.nodes[v.0].children[*idx];
                *idx += 1;
                stack.push((c, 0));
            } else {
                out.push(v);
                stack.pop();
            }
        }
        out
    }

    /// Left-to-right postorder numbering 0..size-1, indexed by `NodeId`.
    pub fn postorder_index(&self) -> Vec<usize> {
        let mut idx = vec![0usize; self.size()];
        for (i, v) in self.postorder().into_iter().enumerate() {
            idx[v.0] = i;
        }
        idx
    }

    pub fn parents(&self) -> Vec<Option<NodeId>> {
        let mut p = vec![None; self.size()];
        for (i, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                p[c.0] = Some(NodeId(i));
            }
        }
        p
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("tree has nodes but no root")]
    MissingRoot,
    #[error("empty tree carries a root reference")]
    DanglingRoot,
    #[error("node references do not form a single tree")]
    NotATree,
}

/// Parse error with the byte offset of the offending input position.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("parse error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

fn err(offset: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        offset,
        message: message.into(),
    }
}

/// Parses the tree grammar above. `()` denotes the empty tree.
pub fn parse_tree(text: &str) -> Result<LabeledTree, ParseError> {
    let bytes = text.as_bytes();
    let mut pos = 0usize;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };

    skip_ws(&mut pos);
    if pos == bytes.len() {
        return Err(err(pos, "empty input"));
    }

    let mut tree = LabeledTree::empty();
    // Stack of open nodes: (label, children built so far).
    let mut stack: Vec<(Label, Vec<NodeId>)> = Vec::new();
    let mut done: Option<NodeId> = None;

    loop {
        skip_ws(&mut pos);
        if pos == bytes.len() {
            break;
        }
        if done.is_some() || (!stack.is_empty() && bytes[pos] != b'(' && bytes[pos] != b')') {
            if done.is_some() {
                return Err(err(pos, "trailing content after tree"));
            }
        }
        match bytes[pos] {
            b'(' => {
                if done.is_some() {
                    return Err(err(pos, "trailing content after tree"));
                }
                pos += 1;
                skip_ws(&mut pos);
                if pos < bytes.len() && bytes[pos] == b')' {
                    // "()" is the empty tree, only valid as the whole input.
                    if !stack.is_empty() {
                        return Err(err(pos, "empty subtree is not allowed"));
                    }
                    pos += 1;
                    skip_ws(&mut pos);
                    if pos != bytes.len() {
                        return Err(err(pos, "trailing content after tree"));
                    }
                    return Ok(LabeledTree::empty());
                }
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if start == pos {
                    return Err(err(start, "expected integer label"));
                }
                let label: u32 = text[start..pos]
                    .parse()
                    .map_err(|_| err(start, "label out of range"))?;
                stack.push((Label(label), Vec::new()));
            }
            b')' => {
                let Some((label, children)) = stack.pop() else {
                    return Err(err(pos, "unmatched `)`"));
                };
                pos += 1;
                let id = tree.add_node(label, children);
                match stack.last_mut() {
                    Some((_, siblings)) => siblings.push(id),
                    None => {
                        done = Some(id);
                    }
                }
            }
            _ => {
                return Err(err(pos, "expected `(` or `)`"));
            }
        }
    }

    if !stack.is_empty() {
        return Err(err(text.len(), "unclosed `(`"));
    }
    match done {
        Some(root) => {
            tree.set_root(root);
            Ok(tree)
        }
        None => Err(err(text.len(), "empty input")),
    }
}

/// Canonical text form; `parse_tree` inverts it exactly.
pub fn serialize_tree(tree: &LabeledTree) -> String {
    let Some(root) = tree.root() else {
        return "()".to_owned();
    };
    let mut out = String::new();
    // Explicit stack of tokens to emit.
    enum Tok {
        Open(NodeId),
        Close,
    }
    let mut stack = vec![Tok::Open(root)];
    while let Some(tok) = stack.pop() {
        match tok {
            Tok::Open(v) => {
                if !out.is_empty() && !out.ends_with('(') {
                    out.push(' ');
                }
                let _ = write!(out, "({}", tree.label(v).0);
                stack.push(Tok::Close);
                for &c in tree.children(v).iter().rev() {
                    stack.push(Tok::Open(c));
                }
            }
            Tok::Close => out.push(')'),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let t = parse_tree("(3 (1) (2))").unwrap();
        let root = t.root().unwrap();
        assert_eq!(t.label(root), Label(3));
        let kids = t.children(root);
        assert_eq!(kids.len(), 2);
        assert_eq!(t.label(kids[0]), Label(1));
        assert_eq!(t.label(kids[1]), Label(2));

        let single = parse_tree("(0)").unwrap();
        assert_eq!(single.size(), 1);
        assert_eq!(single.label(single.root().unwrap()), Label(0));

        assert!(parse_tree("()").unwrap().is_empty());
    }

    #[test]
    fn serialize_examples() {
        assert_eq!(serialize_tree(&LabeledTree::leaf(Label(0))), "(0)");
        let t = parse_tree("(3 (1) (2))").unwrap();
        assert_eq!(serialize_tree(&t), "(3 (1) (2))");
        assert_eq!(serialize_tree(&LabeledTree::empty()), "()");
    }

    #[test]
    fn parse_errors_name_offsets() {
        let e = parse_tree("").unwrap_err();
        assert_eq!(e.offset, 0);
        let e = parse_tree("(1 (x))").unwrap_err();
        assert_eq!(e.offset, 4);
        let e = parse_tree("(1))").unwrap_err();
        assert_eq!(e.offset, 3);
        assert!(parse_tree("(1").is_err());
        assert!(parse_tree("(1) (2)").is_err());
        assert!(parse_tree("(1 ())").is_err());
    }

    #[test]
    fn postorder_examples() {
        let single = LabeledTree::leaf(Label(7));
        assert_eq!(single.postorder_index(), vec![0]);

        let t = parse_tree("(3 (1) (2))").unwrap();
        let idx = t.postorder_index();
        let root = t.root().unwrap();
        let kids = t.children(root).to_vec();
        assert_eq!(idx[kids[0].0], 0);
        assert_eq!(idx[kids[1].0], 1);
        assert_eq!(idx[root.0], 2);
    }

    #[test]
    fn postorder_matches_recursive_reference() {
        // Reference traversal via plain recursion on a comb-shaped tree.
        fn rec(t: &LabeledTree, v: NodeId, out: &mut Vec<NodeId>) {
            for &c in t.children(v) {
                rec(t, c, out);
            }
            out.push(v);
        }
        let t = parse_tree("(0 (1 (2) (3 (4))) (5) (6 (7 (8) (9))))").unwrap();
        let mut reference = Vec::new();
        rec(&t, t.root().unwrap(), &mut reference);
        assert_eq!(t.postorder(), reference);
        // Every node's index exceeds all of its descendants' indices.
        let idx = t.postorder_index();
        for v in t.preorder() {
            for &c in t.children(v) {
                assert!(idx[v.0] > idx[c.0]);
            }
        }
    }

    #[test]
    fn deep_spine_does_not_overflow() {
        let mut text = String::new();
        for i in 0..50_000 {
            let _ = write!(text, "({} ", i % 7);
        }
        text.push_str("(1)");
        for _ in 0..50_000 {
            text.push(')');
        }
        let t = parse_tree(&text).unwrap();
        assert_eq!(t.size(), 50_001);
        let back = serialize_tree(&t);
        assert_eq!(parse_tree(&back).unwrap().size(), 50_001);
        assert_eq!(t.postorder().len(), t.size());
    }
}
