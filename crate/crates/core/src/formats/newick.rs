use crate::error::FormatError;
use crate::phylo::{PhyloTree, TreeNode};
use crate::scalar::Scalar;

use super::validate_label;

/// Newick with six-decimal branch lengths on every non-root node, terminated by `;` and a newline.
pub fn write_newick<T: Scalar>(tree: &PhyloTree<T>) -> Result<String, FormatError> {
    fn render<T: Scalar>(tree: &PhyloTree<T>, v: usize, out: &mut String) -> Result<(), FormatError> {
        let node = tree.node(v);
        if node.children.is_empty() {
            let label = node.label.as_deref().unwrap_or("");
            validate_label(label)?;
            out.push_str(label);
        } else {
            out.push('(');
            for (i, &c) in node.children.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                render(tree, c, out)?;
            }
            out.push(')');
        }
        if node.parent.is_some() {
            out.push_str(&format!(":{:.6}", node.branch_length.as_f64()));
        }
        Ok(())
    }
    let mut out = String::new();
    render(tree, tree.root(), &mut out)?;
    out.push_str(";\n");
    Ok(out)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    nodes: Vec<TreeNode<f64>>,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> FormatError {
        FormatError::Newick(format!("{} at byte {}", message.into(), self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn token(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && !matches!(self.bytes[self.pos], b'(' | b')' | b',' | b':' | b';')
            && !self.bytes[self.pos].is_ascii_whitespace()
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned()
    }

    fn node(&mut self, parent: Option<usize>) -> Result<usize, FormatError> {
        let id = self.nodes.len();
        self.nodes.push(TreeNode {
            label: None,
            parent,
            children: vec![],
            branch_length: 0.0,
        });
        if self.peek() == Some(b'(') {
            self.pos += 1;
            loop {
                let child = self.node(Some(id))?;
                self.nodes[id].children.push(child);
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.error("expected ',' or ')'")),
                }
            }
            let label = self.token();
            if !label.is_empty() {
                self.nodes[id].label = Some(label);
            }
        } else {
            let label = self.token();
            if label.is_empty() {
                return Err(self.error("missing leaf label"));
            }
            self.nodes[id].label = Some(label);
        }
        if self.peek() == Some(b':') {
            self.pos += 1;
            let text = self.token();
            let length: f64 = text
                .parse()
                .map_err(|_| self.error(format!("invalid branch length {text:?}")))?;
            self.nodes[id].branch_length = length;
        }
        Ok(id)
    }
}

/// Parses a Newick tree. Trees whose leaves are equidistant from the root
/// (within rounding of the six-decimal lengths) get node heights, so they are
/// cut by height like UPGMA trees.
pub fn parse_newick(text: &str) -> Result<PhyloTree<f64>, FormatError> {
    let mut parser = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        nodes: Vec::new(),
    };
    let root = parser.node(None)?;
    if parser.peek() != Some(b';') {
        return Err(parser.error("expected ';'"));
    }
    parser.pos += 1;
    if parser.peek().is_some() {
        return Err(parser.error("trailing characters after ';'"));
    }
    let node_count = parser.nodes.len();
    // internal labels are not part of the leaf universe
    for node in &mut parser.nodes {
        if !node.children.is_empty() {
            node.label = None;
        }
    }
    let tree = PhyloTree::from_nodes(parser.nodes, root, None);
    let mut seen = std::collections::HashSet::new();
    for label in tree.leaf_labels() {
        if !seen.insert(label.clone()) {
            return Err(FormatError::Newick(format!("duplicate leaf label {label:?}")));
        }
    }
    if tree.is_ultrametric(1e-6 * node_count as f64) {
        let heights = tree.heights_from_depths();
        Ok(tree.with_heights(Some(heights)))
    } else {
        Ok(tree)
    }
}
