//! Line-oriented text formats for symbols, IETs, `G_n` elements and actions.
//!
//! ```text
//! # comment
//! symbol alpha = 0.41421356237309504880
//! f = iet breakpoints= 0, 1 - alpha translations= alpha, alpha - 1
//! g = gn n=2 sigma=2 1 alpha=alpha, -alpha
//! gen a = gn n=2 sigma=1 2 alpha=alpha, -alpha
//! relation: a b a^-1 b
//! ```
//!
//! An object line without a name binds to `_`. Columns in errors are 1-based
//! and count characters.

use std::fmt;

use crate::actions::{MarkedAction, Word};
use crate::error::{Error, Result};
use crate::gn::GnElement;
use crate::iet::Iet;
use crate::perm::Permutation;
use crate::scalar::{is_identifier, parse_scalar, Scalar, SymbolTable};

/// A parsed value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Object {
    Iet(Iet),
    Gn(GnElement),
}

impl Object {
    pub fn to_iet(&self) -> Result<Iet> {
        match self {
            Object::Iet(f) => Ok(f.clone()),
            Object::Gn(g) => g.to_iet(),
        }
    }

    pub fn as_gn(&self) -> Option<&GnElement> {
        match self {
            Object::Gn(g) => Some(g),
            Object::Iet(_) => None,
        }
    }
}

impl fmt::Display for Object {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Object::Iet(x) => x.fmt(f),
            Object::Gn(x) => x.fmt(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binding {
    pub name: String,
    pub object: Object,
    /// Declared with `gen`, i.e. an action generator.
    pub generator: bool,
}

/// Symbols plus named objects, as read from one or more files.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub table: SymbolTable,
    pub bindings: Vec<Binding>,
    pub relations: Vec<Word>,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Moves a single-line parse error to `line`, shifting its column by `offset`.
fn relocate(e: Error, line: usize, offset: usize) -> Error {
    match e {
        Error::Parse { column, message, .. } => err(line, column + offset, message),
        other => other,
    }
}

fn char_col(text: &str, byte: usize) -> usize {
    text[..byte].chars().count()
}

/// Comma-separated scalars of `text[start..end]`.
fn scalar_list(text: &str, start: usize, end: usize, table: &SymbolTable) -> Result<Vec<Scalar>> {
    let segment = &text[start..end];
    if segment.trim().is_empty() {
        return Err(Error::parse(char_col(text, start) + 1, "expected a list of scalars"));
    }
    let mut out = Vec::new();
    let mut offset = start;
    for part in segment.split(',') {
        let value = parse_scalar(part, table).map_err(|e| relocate(e, 1, char_col(text, offset)))?;
        out.push(value);
        offset += part.len() + 1;
    }
    Ok(out)
}

fn find_key(text: &str, key: &str) -> Option<usize> {
    text.find(key)
}

fn expect_key(text: &str, key: &str, from: usize) -> Result<usize> {
    text[from..]
        .find(key)
        .map(|p| p + from)
        .ok_or_else(|| Error::parse(char_col(text, text.len()) + 1, format!("missing `{key}`")))
}

fn expect_prefix<'a>(text: &'a str, prefix: &str) -> Result<usize> {
    let trimmed = text.trim_start();
    let lead = text.len() - trimmed.len();
    if trimmed.starts_with(prefix) && trimmed[prefix.len()..].starts_with(char::is_whitespace) {
        Ok(lead + prefix.len())
    } else {
        Err(Error::parse(char_col(text, lead) + 1, format!("expected `{prefix}`")))
    }
}

/// `iet breakpoints= … translations= …` or `iet lengths= … permutation= …`.
pub fn parse_iet(text: &str, table: &SymbolTable) -> Result<Iet> {
    let body = expect_prefix(text, "iet")?;
    if let Some(b) = find_key(text, "breakpoints=") {
        let t = expect_key(text, "translations=", b)?;
        let breaks = scalar_list(text, b + "breakpoints=".len(), t, table)?;
        let trans = scalar_list(text, t + "translations=".len(), text.len(), table)?;
        Iet::new(breaks, trans).map_err(|e| located(e, text, body))
    } else if let Some(l) = find_key(text, "lengths=") {
        let p = expect_key(text, "permutation=", l)?;
        let lengths = scalar_list(text, l + "lengths=".len(), p, table)?;
        let perm_start = p + "permutation=".len();
        let perm = Permutation::parse(&text[perm_start..], Some(lengths.len()))
            .map_err(|e| Error::parse(char_col(text, perm_start) + 1, e.to_string()))?;
        Iet::from_lengths(&lengths, &perm).map_err(|e| located(e, text, body))
    } else {
        Err(Error::parse(
            char_col(text, body) + 1,
            "expected `breakpoints=` or `lengths=`",
        ))
    }
}

/// Turns a semantic error into a parse error at `at`, keeping precision
/// failures as they are.
fn located(e: Error, text: &str, at: usize) -> Error {
    match e {
        Error::InsufficientPrecision(_) | Error::MixedSymbolTables => e,
        other => Error::parse(char_col(text, at) + 1, other.to_string()),
    }
}

/// `gn n=4 sigma=4 3 2 1 alpha=0, beta, 0, -beta`.
pub fn parse_gn(text: &str, table: &SymbolTable) -> Result<GnElement> {
    let body = expect_prefix(text, "gn")?;
    let n_at = expect_key(text, "n=", body)?;
    let s_at = expect_key(text, "sigma=", n_at)?;
    let a_at = expect_key(text, "alpha=", s_at)?;
    let n_text = text[n_at + 2..s_at].trim();
    let n: usize = n_text
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::parse(char_col(text, n_at) + 3, format!("`{n_text}` is not a positive size")))?;
    let sigma_start = s_at + "sigma=".len();
    let sigma = Permutation::parse(&text[sigma_start..a_at], Some(n))
        .map_err(|e| Error::parse(char_col(text, sigma_start) + 1, e.to_string()))?;
    let alpha_start = a_at + "alpha=".len();
    let alpha = scalar_list(text, alpha_start, text.len(), table)?;
    if alpha.len() != n {
        return Err(Error::parse(
            char_col(text, alpha_start) + 1,
            format!("expected {n} angles, found {}", alpha.len()),
        ));
    }
    GnElement::new(&alpha, sigma).map_err(|e| located(e, text, body))
}

/// An `iet …` or `gn …` object.
pub fn parse_object(text: &str, table: &SymbolTable) -> Result<Object> {
    let head = text.trim_start();
    if head.starts_with("iet") {
        parse_iet(text, table).map(Object::Iet)
    } else if head.starts_with("gn") {
        parse_gn(text, table).map(Object::Gn)
    } else {
        let lead = text.len() - head.len();
        Err(Error::parse(char_col(text, lead) + 1, "expected `iet` or `gn`"))
    }
}

impl Workspace {
    pub fn new(table: SymbolTable) -> Self {
        Workspace {
            table,
            bindings: Vec::new(),
            relations: Vec::new(),
        }
    }

    pub fn parse(src: &str) -> Result<Workspace> {
        Self::parse_with(src, SymbolTable::new())
    }

    /// Parses `src` on top of an existing table; symbols may be declared
    /// again as long as the witness is identical.
    pub fn parse_with(src: &str, table: SymbolTable) -> Result<Workspace> {
        let mut ws = Workspace::new(table);
        ws.extend(src)?;
        Ok(ws)
    }

    /// Adds the declarations of `src`.
    pub fn extend(&mut self, src: &str) -> Result<()> {
        for (idx, raw) in src.lines().enumerate() {
            let line = idx + 1;
            let text = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            };
            if text.trim().is_empty() {
                continue;
            }
            self.line(text, line)?;
        }
        Ok(())
    }

    fn line(&mut self, text: &str, line: usize) -> Result<()> {
        let trimmed = text.trim_start();
        let lead = text.len() - trimmed.len();
        if let Some(rest) = trimmed.strip_prefix("symbol ") {
            let (name, witness) = rest
                .split_once('=')
                .ok_or_else(|| err(line, char_col(text, text.len()) + 1, "expected `symbol name = witness`"))?;
            let name = name.trim();
            let witness = witness.trim();
            if let Some(i) = self.table.index_of(name) {
                if self.table.symbol(i).witness() == witness {
                    return Ok(());
                }
                return Err(err(line, lead + 8, Error::DuplicateSymbol(name.into()).to_string()));
            }
            self.table = self
                .table
                .register(name, witness)
                .map_err(|e| err(line, lead + 8, e.to_string()))?;
            return Ok(());
        }
        if let Some(rest) = trimmed.strip_prefix("relation:") {
            let offset = char_col(text, lead + "relation:".len());
            let word = Word::parse(rest).map_err(|e| relocate(e, line, offset))?;
            self.relations.push(word);
            return Ok(());
        }
        let (generator, decl) = match trimmed.strip_prefix("gen ") {
            Some(rest) => (true, rest),
            None => (false, trimmed),
        };
        let decl_at = text.len() - decl.len();
        let head = decl.trim_start();
        let (name, object_at) = if head.starts_with("iet ") || head.starts_with("gn ") {
            if generator {
                return Err(err(line, char_col(text, decl_at) + 1, "`gen` needs a name"));
            }
            ("_".to_string(), decl_at)
        } else {
            let eq = decl
                .find('=')
                .ok_or_else(|| err(line, char_col(text, decl_at) + 1, "expected `name = object`"))?;
            let name = decl[..eq].trim();
            if !is_identifier(name) {
                return Err(err(line, char_col(text, decl_at) + 1, format!("`{name}` is not a valid name")));
            }
            (name.to_string(), decl_at + eq + 1)
        };
        let object = parse_object(&text[object_at..], &self.table)
            .map_err(|e| relocate(e, line, char_col(text, object_at)))?;
        if let Some(b) = self.bindings.iter_mut().find(|b| b.name == name) {
            b.object = object;
            b.generator |= generator;
        } else {
            self.bindings.push(Binding {
                name,
                object,
                generator,
            });
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Object> {
        self.bindings.iter().find(|b| b.name == name).map(|b| &b.object)
    }

    /// The last bound object.
    pub fn last(&self) -> Option<&Object> {
        self.bindings.last().map(|b| &b.object)
    }

    /// The generators and relations of the file.
    pub fn action(&self) -> Result<MarkedAction> {
        let mut action = MarkedAction::new();
        for b in self.bindings.iter().filter(|b| b.generator) {
            action.bind(&b.name, b.object.clone())?;
        }
        for r in &self.relations {
            action.add_relation(r.clone());
        }
        Ok(action)
    }

    /// `symbol` lines for every registered symbol.
    pub fn symbol_lines(&self) -> String {
        symbol_lines(&self.table)
    }
}

pub fn symbol_lines(table: &SymbolTable) -> String {
    table
        .symbols()
        .map(|s| format!("symbol {} = {}\n", s.name(), s.witness()))
        .collect()
}
