use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

/// Binary function-argument tree; the function is always on the left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseTree {
    Leaf(String),
    Node(Box<ParseTree>, Box<ParseTree>),
}

impl ParseTree {
    pub fn leaf(word: impl Into<String>) -> ParseTree {
        ParseTree::Leaf(word.into())
    }

    pub fn node(fun: ParseTree, arg: ParseTree) -> ParseTree {
        ParseTree::Node(Box::new(fun), Box::new(arg))
    }

    pub fn is_leaf(&self, word: &str) -> bool {
        matches!(self, ParseTree::Leaf(w) if w == word)
    }

    /// Subtree at `path`.
    pub fn at(&self, path: &TreePath) -> Option<&ParseTree> {
        let mut cur = self;
        for &i in &path.0 {
            cur = match (cur, i) {
                (ParseTree::Node(f, _), 0) => f,
                (ParseTree::Node(_, a), 1) => a,
                _ => return None,
            };
        }
        Some(cur)
    }
}

impl fmt::Display for ParseTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseTree::Leaf(w) => f.write_str(w),
            ParseTree::Node(fun, arg) => write!(f, "({fun} {arg})"),
        }
    }
}

/// Child indices from the root of a [`ParseTree`]: 0 function, 1 argument.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct TreePath(pub Vec<usize>);

impl TreePath {
    pub fn child(&self, i: usize) -> TreePath {
        let mut p = self.0.clone();
        p.push(i);
        TreePath(p)
    }
}

impl fmt::Display for TreePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        for (i, idx) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{idx}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed tree at {position}: {message}")]
pub struct TreeSyntaxError {
    pub position: usize,
    pub message: String,
}

/// Parses an s-expression; `(a b c)` is `((a b) c)` and `(a)` is `a`.
pub fn parse_tree(text: &str) -> Result<ParseTree, TreeSyntaxError> {
    let mut p = TreeParser { text, pos: 0 };
    p.skip_ws();
    let tree = p.tree()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error("trailing input"));
    }
    Ok(tree)
}

impl FromStr for ParseTree {
    type Err = TreeSyntaxError;

    fn from_str(s: &str) -> Result<ParseTree, TreeSyntaxError> {
        parse_tree(s)
    }
}

struct TreeParser<'a> {
    text: &'a str,
    pos: usize,
}

impl TreeParser<'_> {
    fn error(&self, message: &str) -> TreeSyntaxError {
        TreeSyntaxError { position: self.pos, message: message.to_string() }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn tree(&mut self) -> Result<ParseTree, TreeSyntaxError> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(')') => Err(self.error("unexpected `)`")),
            Some('(') => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    match self.peek() {
                        None => return Err(self.error("unclosed `(`")),
                        Some(')') => {
                            self.pos += 1;
                            break;
                        }
                        Some(_) => items.push(self.tree()?),
                    }
                }
                let mut items = items.into_iter();
                let first = items.next().ok_or_else(|| self.error("empty `()`"))?;
                Ok(items.fold(first, ParseTree::node))
            }
            Some(_) => {
                let start = self.pos;
                while let Some(c) = self.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' {
                        break;
                    }
                    self.pos += c.len_utf8();
                }
                Ok(ParseTree::Leaf(self.text[start..self.pos].to_string()))
            }
        }
    }
}
