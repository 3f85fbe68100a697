//! Run configurations: a flat key-value file format, a JSON alternative,
//! the polynomial expression grammar, and validation of instance bounds.
//!
//! Parsing distinguishes two error classes: `Parse` carries a line and
//! column for malformed input, `Validation` names the violated invariant
//! for well-formed but inadmissible input (a composite modulus, an
//! inhomogeneous sequence entry, bounds below the sequence degrees, ...).

use crate::poly::{Polynomial, RingContext};
use crate::ring::BaseRing;
use crate::suite::{render_base, CheckId};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("PARSE_ERROR line {line} col {col}: {message}")]
    Parse { line: usize, col: usize, message: String },
    #[error("VALIDATION_ERROR: {0}")]
    Validation(String),
}

fn parse_err(line: usize, col: usize, message: impl Into<String>) -> ConfigError {
    ConfigError::Parse { line, col, message: message.into() }
}

/// Which checks a run executes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckSelection {
    All,
    Chosen(Vec<CheckId>),
}

impl CheckSelection {
    pub fn expand(&self) -> Vec<CheckId> {
        match self {
            CheckSelection::All => CheckId::ALL.to_vec(),
            CheckSelection::Chosen(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Text,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Text => "text",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<OutputFormat, String> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "text" => Ok(OutputFormat::Text),
            other => Err(format!("format must be `json` or `text`, got `{other}`")),
        }
    }
}

/// A fully validated run description.  Sequence entries are stored in
/// canonical rendered form, so rendering and reparsing is the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub base: BaseRing,
    pub vars: Vec<String>,
    pub weights: Vec<u32>,
    pub sequence: Vec<String>,
    pub s_max: usize,
    pub degree_max: usize,
    pub seed: u64,
    pub checks: CheckSelection,
    pub format: OutputFormat,
    pub out: Option<String>,
}

impl RunConfig {
    /// Rebuilds the ring context from the canonical sequence strings.
    pub fn context(&self) -> Result<RingContext, ConfigError> {
        let polys: Vec<Polynomial> = self
            .sequence
            .iter()
            .map(|s| parse_polynomial(s, self.base, &self.vars, 0, 0))
            .collect::<Result<_, _>>()?;
        RingContext::new(self.base, self.vars.clone(), self.weights.clone(), polys)
            .map_err(|e| ConfigError::Validation(e.to_string()))
    }
}

/// Dispatches on the leading character: `{` means JSON, anything else the
/// flat key-value format.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_flat(text)
    }
}

pub fn render_config(cfg: &RunConfig) -> String {
    let mut out = String::new();
    out.push_str(&format!("base = {}\n", render_base(cfg.base)));
    out.push_str(&format!("vars = {}\n", cfg.vars.join(", ")));
    out.push_str(&format!(
        "weights = {}\n",
        cfg.weights.iter().map(u32::to_string).collect::<Vec<_>>().join(", ")
    ));
    out.push_str(&format!("sequence = {}\n", cfg.sequence.join(", ")));
    out.push_str(&format!("s_max = {}\n", cfg.s_max));
    out.push_str(&format!("degree_max = {}\n", cfg.degree_max));
    out.push_str(&format!("seed = {}\n", cfg.seed));
    match &cfg.checks {
        CheckSelection::All => out.push_str("checks = all\n"),
        CheckSelection::Chosen(v) => out.push_str(&format!(
            "checks = {}\n",
            v.iter().map(|c| c.name().to_string()).collect::<Vec<_>>().join(", ")
        )),
    }
    out.push_str(&format!("format = {}\n", cfg.format));
    if let Some(path) = &cfg.out {
        out.push_str(&format!("out = {path}\n"));
    }
    out
}

const KNOWN_KEYS: [&str; 10] = [
    "base", "vars", "weights", "sequence", "s_max", "degree_max", "seed", "checks", "format",
    "out",
];

fn parse_flat(text: &str) -> Result<RunConfig, ConfigError> {
    // key -> (line number, column of the value, raw value)
    let mut fields: BTreeMap<String, (usize, usize, String)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let eq = match raw.find('=') {
            Some(p) => p,
            None => return Err(parse_err(line, raw.len().max(1), "expected `key = value`")),
        };
        let key = raw[..eq].trim();
        let key_col = raw.len() - raw.trim_start().len() + 1;
        if key.is_empty() {
            return Err(parse_err(line, key_col, "missing key before `=`"));
        }
        if !KNOWN_KEYS.contains(&key) {
            return Err(parse_err(line, key_col, format!("unknown key `{key}`")));
        }
        if fields.contains_key(key) {
            return Err(parse_err(line, key_col, format!("duplicate key `{key}`")));
        }
        let after = &raw[eq + 1..];
        let val_col = eq + 1 + (after.len() - after.trim_start().len()) + 1;
        fields.insert(key.to_string(), (line, val_col, after.trim().to_string()));
    }

    let req = |key: &str| -> Result<&(usize, usize, String), ConfigError> {
        fields.get(key).ok_or_else(|| {
            ConfigError::Validation(format!("missing required key `{key}`"))
        })
    };

    let (bl, bc, bs) = req("base")?;
    let base = parse_base(bs, *bl, *bc)?;
    let (vl, vc, vs) = req("vars")?;
    let vars = parse_ident_list(vs, *vl, *vc)?;
    let weights = match fields.get("weights") {
        Some((l, c, s)) => parse_u32_list(s, *l, *c)?,
        None => vec![1; vars.len()],
    };
    let (sl, sc, ss) = req("sequence")?;
    let mut polys = Vec::new();
    for (off, piece) in split_commas(ss) {
        // col0 counts the characters before the piece, so 1-based col - 1.
        polys.push(parse_polynomial(piece, base, &vars, *sl, *sc - 1 + off)?);
    }
    let (ml, mc, ms) = req("s_max")?;
    let s_max = parse_unsigned(ms, *ml, *mc)? as usize;
    let (dl, dc, ds) = req("degree_max")?;
    let degree_max = parse_unsigned(ds, *dl, *dc)? as usize;
    let seed = match fields.get("seed") {
        Some((l, c, s)) => parse_unsigned(s, *l, *c)?,
        None => 0,
    };
    let checks = match fields.get("checks") {
        Some((l, c, s)) => parse_checks(s, *l, *c)?,
        None => CheckSelection::All,
    };
    let format = match fields.get("format") {
        Some((l, c, s)) => s
            .parse::<OutputFormat>()
            .map_err(|e| parse_err(*l, *c, e))?,
        None => OutputFormat::Json,
    };
    let out = fields.get("out").map(|(_, _, s)| s.clone());

    finish(base, vars, weights, polys, s_max, degree_max, seed, checks, format, out)
}

fn parse_json(text: &str) -> Result<RunConfig, ConfigError> {
    let v: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| parse_err(e.line(), e.column(), e.to_string()))?;
    let obj = v
        .as_object()
        .ok_or_else(|| ConfigError::Validation("top level must be an object".to_string()))?;
    for key in obj.keys() {
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(ConfigError::Validation(format!("unknown key `{key}`")));
        }
    }
    let need = |key: &str| -> Result<&serde_json::Value, ConfigError> {
        obj.get(key).ok_or_else(|| {
            ConfigError::Validation(format!("missing required key `{key}`"))
        })
    };
    let as_str = |key: &str, v: &serde_json::Value| -> Result<String, ConfigError> {
        v.as_str()
            .map(str::to_string)
            .ok_or_else(|| ConfigError::Validation(format!("`{key}` must be a string")))
    };
    let as_u64 = |key: &str, v: &serde_json::Value| -> Result<u64, ConfigError> {
        v.as_u64()
            .ok_or_else(|| ConfigError::Validation(format!("`{key}` must be a nonnegative integer")))
    };

    let base = parse_base(&as_str("base", need("base")?)?, 0, 0)?;
    let vars: Vec<String> = need("vars")?
        .as_array()
        .ok_or_else(|| ConfigError::Validation("`vars` must be an array of names".to_string()))?
        .iter()
        .map(|x| as_str("vars", x))
        .collect::<Result<_, _>>()?;
    for (i, name) in vars.iter().enumerate() {
        check_ident(name)
            .map_err(|m| ConfigError::Validation(format!("vars[{i}]: {m}")))?;
    }
    if vars.iter().collect::<std::collections::BTreeSet<_>>().len() != vars.len() {
        return Err(ConfigError::Validation("duplicate variable name".to_string()));
    }
    let weights: Vec<u32> = match obj.get("weights") {
        Some(w) => w
            .as_array()
            .ok_or_else(|| {
                ConfigError::Validation("`weights` must be an array of integers".to_string())
            })?
            .iter()
            .map(|x| as_u64("weights", x).map(|v| v as u32))
            .collect::<Result<_, _>>()?,
        None => vec![1; vars.len()],
    };
    let polys: Vec<Polynomial> = need("sequence")?
        .as_array()
        .ok_or_else(|| {
            ConfigError::Validation("`sequence` must be an array of expressions".to_string())
        })?
        .iter()
        .map(|x| parse_polynomial(&as_str("sequence", x)?, base, &vars, 0, 0))
        .collect::<Result<_, _>>()?;
    let s_max = as_u64("s_max", need("s_max")?)? as usize;
    let degree_max = as_u64("degree_max", need("degree_max")?)? as usize;
    let seed = match obj.get("seed") {
        Some(v) => as_u64("seed", v)?,
        None => 0,
    };
    let checks = match obj.get("checks") {
        None => CheckSelection::All,
        Some(serde_json::Value::String(s)) => parse_checks(s, 0, 0)?,
        Some(serde_json::Value::Array(items)) => {
            let names: Vec<String> = items
                .iter()
                .map(|x| as_str("checks", x))
                .collect::<Result<_, _>>()?;
            parse_checks(&names.join(", "), 0, 0)?
        }
        Some(_) => {
            return Err(ConfigError::Validation(
                "`checks` must be `all` or an array of check ids".to_string(),
            ))
        }
    };
    let format = match obj.get("format") {
        Some(v) => as_str("format", v)?
            .parse::<OutputFormat>()
            .map_err(ConfigError::Validation)?,
        None => OutputFormat::Json,
    };
    let out = match obj.get("out") {
        Some(v) => Some(as_str("out", v)?),
        None => None,
    };

    finish(base, vars, weights, polys, s_max, degree_max, seed, checks, format, out)
}

/// Shared semantic validation; canonicalizes the sequence strings.
#[allow(clippy::too_many_arguments)]
fn finish(
    base: BaseRing,
    vars: Vec<String>,
    weights: Vec<u32>,
    polys: Vec<Polynomial>,
    s_max: usize,
    degree_max: usize,
    seed: u64,
    checks: CheckSelection,
    format: OutputFormat,
    out: Option<String>,
) -> Result<RunConfig, ConfigError> {
    let ctx = RingContext::new(base, vars.clone(), weights.clone(), polys)
        .map_err(|e| ConfigError::Validation(e.to_string()))?;
    if s_max < 1 {
        return Err(ConfigError::Validation("s_max must be at least 1".to_string()));
    }
    if degree_max < ctx.max_seq_degree() {
        return Err(ConfigError::Validation(format!(
            "degree_max {} is below the top sequence degree {}",
            degree_max,
            ctx.max_seq_degree()
        )));
    }
    let sequence = ctx.sequence().iter().map(|p| p.render(ctx.var_names())).collect();
    Ok(RunConfig { base, vars, weights, sequence, s_max, degree_max, seed, checks, format, out })
}

fn parse_base(s: &str, line: usize, col: usize) -> Result<BaseRing, ConfigError> {
    let toks: Vec<&str> = s.split_whitespace().collect();
    match toks.as_slice() {
        ["Z"] => Ok(BaseRing::Integers),
        ["Q"] => Ok(BaseRing::Rationals),
        ["Fp", p] => {
            let p: u32 = p
                .parse()
                .map_err(|_| parse_err(line, col, format!("`{p}` is not a number")))?;
            BaseRing::prime_field(p).map_err(|e| ConfigError::Validation(e.to_string()))
        }
        _ => Err(parse_err(line, col, "base must be `Z`, `Q`, or `Fp <prime>`")),
    }
}

fn check_ident(s: &str) -> Result<(), String> {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return Err(format!("`{s}` is not a valid name")),
    }
    if chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
        Ok(())
    } else {
        Err(format!("`{s}` is not a valid name"))
    }
}

fn parse_ident_list(s: &str, line: usize, col: usize) -> Result<Vec<String>, ConfigError> {
    let mut out = Vec::new();
    for (off, piece) in split_commas(s) {
        let name = piece.trim();
        check_ident(name).map_err(|m| parse_err(line, col + off, m))?;
        out.push(name.to_string());
    }
    if out.iter().collect::<std::collections::BTreeSet<_>>().len() != out.len() {
        return Err(ConfigError::Validation("duplicate variable name".to_string()));
    }
    Ok(out)
}

fn parse_u32_list(s: &str, line: usize, col: usize) -> Result<Vec<u32>, ConfigError> {
    let mut out = Vec::new();
    for (off, piece) in split_commas(s) {
        let v = piece
            .trim()
            .parse::<u32>()
            .map_err(|_| parse_err(line, col + off, format!("`{}` is not a weight", piece.trim())))?;
        out.push(v);
    }
    Ok(out)
}

fn parse_unsigned(s: &str, line: usize, col: usize) -> Result<u64, ConfigError> {
    s.trim()
        .parse::<u64>()
        .map_err(|_| parse_err(line, col, format!("`{}` is not a nonnegative integer", s.trim())))
}

fn parse_checks(s: &str, line: usize, col: usize) -> Result<CheckSelection, ConfigError> {
    if s.trim() == "all" {
        return Ok(CheckSelection::All);
    }
    let mut out = Vec::new();
    for (off, piece) in split_commas(s) {
        let name = piece.trim();
        if name.is_empty() {
            return Err(parse_err(line, col + off, "empty check id"));
        }
        let id = name
            .parse::<CheckId>()
            .map_err(ConfigError::Validation)?;
        out.push(id);
    }
    Ok(CheckSelection::Chosen(out))
}

/// Splits on commas, keeping each piece's byte offset for error positions.
/// The expression grammar has no commas, so this is unambiguous.
fn split_commas(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        if ch == ',' {
            out.push((start, &s[start..i]));
            start = i + 1;
        }
    }
    out.push((start, &s[start..]));
    out
}

/// Recursive-descent parser for homogeneous-ring expressions: integer
/// coefficients, variables, `+ - * ^`, parentheses, unary minus.
///
/// `line` and `col0` anchor reported positions in the enclosing document:
/// `col0` counts the characters preceding `src` on its line, so character
/// i of `src` sits at 1-based column `col0 + i + 1`.
pub fn parse_polynomial(
    src: &str,
    base: BaseRing,
    vars: &[String],
    line: usize,
    col0: usize,
) -> Result<Polynomial, ConfigError> {
    let mut p = ExprParser { src: src.chars().collect(), pos: 0, line, col0, base, vars };
    let result = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(result)
}

struct ExprParser<'a> {
    src: Vec<char>,
    pos: usize,
    line: usize,
    col0: usize,
    base: BaseRing,
    vars: &'a [String],
}

impl ExprParser<'_> {
    fn err(&self, msg: impl Into<String>) -> ConfigError {
        parse_err(self.line, self.col0 + self.pos + 1, msg)
    }

    fn peek(&self) -> Option<char> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial, ConfigError> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ConfigError> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, ConfigError> {
        if self.eat('-') {
            let inner = self.unary()?;
            return Ok(inner.scale(&self.base.from_i64(-1)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial, ConfigError> {
        let a = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let e = self.uint()?;
            if e > 10_000 {
                return Err(self.err("exponent is unreasonably large"));
            }
            let mut acc = Polynomial::constant(self.base, self.vars.len(), self.base.one());
            for _ in 0..e {
                acc = acc.mul(&a);
            }
            return Ok(acc);
        }
        Ok(a)
    }

    fn atom(&mut self) -> Result<Polynomial, ConfigError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let v = self.uint()?;
                if v > i64::MAX as u64 {
                    return Err(self.err("coefficient is too large"));
                }
                Ok(Polynomial::constant(self.base, self.vars.len(), self.base.from_i64(v as i64)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let name: String = self.src[start..self.pos].iter().collect();
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(Polynomial::variable(self.base, self.vars.len(), i)),
                    None => Err(parse_err(
                        self.line,
                        self.col0 + start + 1,
                        format!("unknown variable `{name}`"),
                    )),
                }
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(inner)
            }
            _ => Err(self.err("expected a number, a variable, or `(`")),
        }
    }

    fn uint(&mut self) -> Result<u64, ConfigError> {
        let start = self.pos;
        let mut v: u64 = 0;
        while let Some(c) = self.peek() {
            match c.to_digit(10) {
                Some(d) => {
                    v = v
                        .checked_mul(10)
                        .and_then(|x| x.checked_add(d as u64))
                        .ok_or_else(|| self.err("number is too large"))?;
                    self.pos += 1;
                }
                None => break,
            }
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        Ok(v)
    }
}
