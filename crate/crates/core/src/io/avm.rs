//! Line-oriented attribute-value layout.
//!
//! ```text
//! KEY = scalar text to end of line
//! KEY[1] = [
//!   NESTED = value
//! ]
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Canonical output uses
//! two-space indentation and one entry per line.

use super::ParseError;

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub index: Option<u32>,
    pub value: Node,
    pub line: usize,
    pub column: usize,
    pub value_column: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Scalar(String),
    Block(Vec<Entry>),
}

impl Entry {
    /// `KEY` or `KEY[i]`, as written.
    pub fn full_key(&self) -> String {
        match self.index {
            Some(i) => format!("{}[{i}]", self.key),
            None => self.key.clone(),
        }
    }
}

struct Frame {
    entries: Vec<Entry>,
    // the entry this frame's block belongs to
    owner: Option<(String, Option<u32>, usize, usize, usize)>,
}

pub fn parse(text: &str) -> Result<Vec<Entry>, ParseError> {
    let mut stack = vec![Frame {
        entries: Vec::new(),
        owner: None,
    }];
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let indent = raw.chars().take_while(|c| c.is_whitespace()).count();
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let column = indent + 1;
        if body == "]" {
            if stack.len() == 1 {
                return Err(ParseError::syntax(line, column, "unbalanced `]`"));
            }
            let frame = stack.pop().expect("non-root frame");
            let (key, index, l, c, vc) = frame.owner.expect("nested frame has an owner");
            stack.last_mut().expect("root frame").entries.push(Entry {
                key,
                index,
                value: Node::Block(frame.entries),
                line: l,
                column: c,
                value_column: vc,
            });
            continue;
        }
        let Some(eq) = body.find('=') else {
            return Err(ParseError::syntax(line, column, "expected `KEY = value`"));
        };
        let key_text = body[..eq].trim_end();
        let (key, index) = parse_key(key_text).ok_or_else(|| {
            ParseError::syntax(line, column, format!("malformed key `{key_text}`"))
        })?;
        let after = &body[eq + 1..];
        let value = after.trim();
        let value_column = column
            + body[..eq + 1].chars().count()
            + (after.chars().count() - after.trim_start().chars().count());
        if value.is_empty() {
            return Err(ParseError::syntax(
                line,
                value_column,
                format!("missing value for `{key_text}`"),
            ));
        }
        if value == "[" {
            stack.push(Frame {
                entries: Vec::new(),
                owner: Some((key, index, line, column, value_column)),
            });
        } else {
            stack.last_mut().expect("root frame").entries.push(Entry {
                key,
                index,
                value: Node::Scalar(value.to_string()),
                line,
                column,
                value_column,
            });
        }
    }
    if stack.len() > 1 {
        let (key, _, l, c, _) = stack.pop().and_then(|f| f.owner).expect("owner");
        return Err(ParseError::syntax(
            l,
            c,
            format!("unbalanced `[`: block `{key}` is never closed"),
        ));
    }
    Ok(stack.pop().expect("root frame").entries)
}

fn parse_key(s: &str) -> Option<(String, Option<u32>)> {
    let (name, index) = match s.strip_suffix(']') {
        Some(rest) => {
            let open = rest.find('[')?;
            let idx: u32 = rest[open + 1..].parse().ok()?;
            (&rest[..open], Some(idx))
        }
        None => (s, None),
    };
    super::term::is_identifier(name).then(|| (name.to_string(), index))
}

/// Builds canonical text.
#[derive(Default)]
pub struct Writer {
    out: String,
    depth: usize,
}

impl Writer {
    pub fn new() -> Self {
        Self::default()
    }

    fn indent(&mut self) {
        for _ in 0..self.depth {
            self.out.push_str("  ");
        }
    }

    pub fn scalar(&mut self, key: &str, value: impl AsRef<str>) {
        self.indent();
        self.out.push_str(key);
        self.out.push_str(" = ");
        self.out.push_str(value.as_ref());
        self.out.push('\n');
    }

    pub fn open(&mut self, key: &str) {
        self.indent();
        self.out.push_str(key);
        self.out.push_str(" = [\n");
        self.depth += 1;
    }

    pub fn close(&mut self) {
        self.depth -= 1;
        self.indent();
        self.out.push_str("]\n");
    }

    pub fn finish(self) -> String {
        debug_assert_eq!(self.depth, 0);
        self.out
    }
}
