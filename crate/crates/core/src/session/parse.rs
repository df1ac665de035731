use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::closure::{ExponentMode, NumericalSemigroup, SemigroupIdeal};
use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::poly::{MonomialOrder, Polynomial, RingContext};

/// A byte offset with its 1-based line and column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Pos {
    pub offset: usize,
    pub line: usize,
    pub col: usize,
}

impl Pos {
    pub fn at(src: &str, offset: usize) -> Pos {
        let before = &src[..offset.min(src.len())];
        let line = before.matches('\n').count() + 1;
        let col = before.rfind('\n').map_or(before.chars().count(), |nl| {
            before[nl + 1..].chars().count()
        }) + 1;
        Pos { offset, line, col }
    }
}

/// Parse failure located in the session text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SyntaxError {
    pub pos: Pos,
    pub message: String,
}

impl std::fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.pos.line, self.pos.col, self.message
        )
    }
}

impl std::error::Error for SyntaxError {}

impl From<SyntaxError> for Error {
    fn from(e: SyntaxError) -> Error {
        Error::Parse {
            offset: e.pos.offset,
            message: e.message,
        }
    }
}

/// A named value introduced by `ideal`, `poly` or `germ ideal`.
#[derive(Clone, Debug)]
pub enum Value {
    Ideal(Ideal),
    Poly(Polynomial),
    GermIdeal(SemigroupIdeal),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Ideal(_) => "ideal",
            Value::Poly(_) => "poly",
            Value::GermIdeal(_) => "germ ideal",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Binding {
    pub name: String,
    pub pos: Pos,
    pub value: Value,
}

/// Where the `loja` command takes its points from.
#[derive(Clone, Debug, PartialEq)]
pub enum LojaSource {
    /// `t ↦ (t^{c_1}, …)`.
    Curve(Vec<u32>),
    /// Zeros of the single generator of an ideal, solving for a variable.
    Hypersurface { ideal: String, solve_for: usize },
}

#[derive(Clone, Debug)]
pub enum CommandKind {
    Resolve {
        ideal: String,
        max_len: Option<usize>,
        raw: bool,
    },
    Koszul {
        ideal: String,
    },
    Strata {
        ideal: String,
    },
    CheckCm {
        ideal: String,
    },
    CheckNormal {
        ideal: String,
    },
    CheckBs {
        ideal: String,
        a: String,
        m: usize,
    },
    Member {
        poly: Polynomial,
        ideal: String,
    },
    Dim {
        ideal: String,
    },
    Closure {
        ideal: String,
    },
    BsVerifyMonomial {
        ideal: String,
        ell: u32,
        d: Option<usize>,
    },
    GermMember {
        element: u64,
        ideal: String,
    },
    GermClosureMember {
        element: u64,
        ideal: String,
        power: u32,
    },
    GermExponent {
        ideal: String,
        ell: u32,
        mode: ExponentMode,
    },
    GermMu {
        v_max: u64,
        ell_max: u32,
    },
    Loja {
        phi: Polynomial,
        a: Vec<Polynomial>,
        source: LojaSource,
        radii: (f64, f64, usize),
        samples: usize,
        seed: Option<u64>,
        csv: Option<String>,
    },
}

impl CommandKind {
    pub fn name(&self) -> &'static str {
        match self {
            CommandKind::Resolve { .. } => "resolve",
            CommandKind::Koszul { .. } => "koszul",
            CommandKind::Strata { .. } => "strata",
            CommandKind::CheckCm { .. } => "check-cm",
            CommandKind::CheckNormal { .. } => "check-normal",
            CommandKind::CheckBs { .. } => "check-bs",
            CommandKind::Member { .. } => "member",
            CommandKind::Dim { .. } => "dim",
            CommandKind::Closure { .. } => "closure",
            CommandKind::BsVerifyMonomial { .. } => "bs-verify-monomial",
            CommandKind::GermMember { .. } => "germ member",
            CommandKind::GermClosureMember { .. } => "germ closure-member",
            CommandKind::GermExponent { .. } => "germ exponent",
            CommandKind::GermMu { .. } => "germ mu",
            CommandKind::Loja { .. } => "loja",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Command {
    pub pos: Pos,
    /// The statement as written, whitespace collapsed.
    pub source: String,
    pub kind: CommandKind,
}

/// A parsed session: one ring, optionally one semigroup, named values and
/// the commands in order.
#[derive(Clone, Debug, Default)]
pub struct Session {
    pub ring: Option<Arc<RingContext>>,
    pub semigroup: Option<NumericalSemigroup>,
    pub bindings: Vec<Binding>,
    pub commands: Vec<Command>,
}

impl Session {
    pub fn lookup(&self, name: &str) -> Option<&Value> {
        self.bindings
            .iter()
            .find(|b| b.name == name)
            .map(|b| &b.value)
    }

    pub fn ideal(&self, name: &str) -> Option<&Ideal> {
        match self.lookup(name) {
            Some(Value::Ideal(i)) => Some(i),
            _ => None,
        }
    }

    pub fn germ_ideal(&self, name: &str) -> Option<&SemigroupIdeal> {
        match self.lookup(name) {
            Some(Value::GermIdeal(i)) => Some(i),
            _ => None,
        }
    }
}

/// Name given to a `germ ideal` statement without `NAME =`.
pub const DEFAULT_GERM_IDEAL: &str = "A";

/// Parses a session file.
///
/// Statements end with `;` (the last one may omit it) and `#` starts a
/// comment. Polynomials are parsed against the declared ring, so errors
/// inside expressions are located too.
pub fn parse_session(src: &str) -> Result<Session, SyntaxError> {
    let mut p = Parser {
        src,
        session: Session::default(),
        names: BTreeMap::new(),
    };
    let masked = mask_comments(src);
    let mut start = 0;
    let bytes = masked.as_bytes();
    for i in 0..=bytes.len() {
        if i == bytes.len() || bytes[i] == b';' {
            let text = &masked[start..i];
            let lead = text.len() - text.trim_start().len();
            let body = text.trim();
            if body.is_empty() {
                if i < bytes.len() {
                    return Err(p.err(start + lead, "empty statement"));
                }
            } else {
                p.statement(start + lead, body)?;
            }
            start = i + 1;
        }
    }
    Ok(p.session)
}

fn mask_comments(src: &str) -> String {
    let mut out = String::with_capacity(src.len());
    let mut in_comment = false;
    for c in src.chars() {
        if c == '#' {
            in_comment = true;
        } else if c == '\n' {
            in_comment = false;
        }
        if in_comment {
            for _ in 0..c.len_utf8() {
                out.push(' ');
            }
        } else {
            out.push(c);
        }
    }
    out
}

struct Parser<'a> {
    src: &'a str,
    session: Session,
    names: BTreeMap<String, Pos>,
}

/// Positional text and `--flag value` pairs of a statement, with offsets.
struct Args<'a> {
    positional: (&'a str, usize),
    /// `(name, value, flag offset, value offset)`.
    flags: Vec<(&'a str, &'a str, usize, usize)>,
}

fn split_args(body: &str, base: usize) -> Args<'_> {
    let mut cuts = Vec::new();
    let b = body.as_bytes();
    for i in 0..b.len().saturating_sub(1) {
        if b[i] == b'-' && b[i + 1] == b'-' && (i == 0 || b[i - 1].is_ascii_whitespace()) {
            cuts.push(i);
        }
    }
    let pos_end = cuts.first().copied().unwrap_or(body.len());
    let mut flags = Vec::new();
    for (k, &c) in cuts.iter().enumerate() {
        let end = cuts.get(k + 1).copied().unwrap_or(body.len());
        let seg = &body[c + 2..end];
        let name_len = seg.find(char::is_whitespace).unwrap_or(seg.len());
        let name = &seg[..name_len];
        let value = seg[name_len..].trim();
        let voff = c + 2 + name_len + (seg[name_len..].len() - seg[name_len..].trim_start().len());
        flags.push((name, value, base + c, base + voff));
    }
    let positional = &body[..pos_end];
    let trimmed = positional.trim();
    let lead = positional.len() - positional.trim_start().len();
    Args {
        positional: (trimmed, base + lead),
        flags,
    }
}

impl Args<'_> {
    fn flag(&self, name: &str) -> Option<(&str, usize)> {
        self.flags
            .iter()
            .find(|(n, _, _, _)| *n == name)
            .map(|&(_, v, _, o)| (v, o))
    }
}

impl<'a> Parser<'a> {
    fn err(&self, offset: usize, msg: impl Into<String>) -> SyntaxError {
        SyntaxError {
            pos: Pos::at(self.src, offset),
            message: msg.into(),
        }
    }

    fn lift(&self, base: usize, e: Error) -> SyntaxError {
        match e {
            Error::Parse { offset, message } => self.err(base + offset, message),
            other => self.err(base, other.to_string()),
        }
    }

    fn ring(&self, at: usize) -> Result<&Arc<RingContext>, SyntaxError> {
        self.session
            .ring
            .as_ref()
            .ok_or_else(|| self.err(at, "no ring declared yet"))
    }

    fn poly(&self, text: &str, at: usize) -> Result<Polynomial, SyntaxError> {
        let ring = self.ring(at)?;
        if let Some(Value::Poly(p)) = self.session.lookup(text.trim()) {
            return Ok(p.clone());
        }
        Polynomial::parse(text, ring).map_err(|e| self.lift(at, e))
    }

    fn poly_list(&self, text: &str, at: usize) -> Result<Vec<Polynomial>, SyntaxError> {
        split_top_level(text)
            .into_iter()
            .map(|(part, off)| {
                let lead = part.len() - part.trim_start().len();
                self.poly(part.trim(), at + off + lead)
            })
            .collect()
    }

    fn bind(&mut self, name: &str, at: usize, value: Value) -> Result<(), SyntaxError> {
        if !is_identifier(name) {
            return Err(self.err(at, format!("`{name}` is not a valid name")));
        }
        if let Some(prev) = self.names.get(name) {
            return Err(self.err(
                at,
                format!("`{name}` is already bound at line {}", prev.line),
            ));
        }
        if self
            .session
            .ring
            .as_ref()
            .is_some_and(|r| r.var_index(name).is_some())
        {
            return Err(self.err(at, format!("`{name}` is a ring variable")));
        }
        let pos = Pos::at(self.src, at);
        self.names.insert(name.to_string(), pos);
        self.session.bindings.push(Binding {
            name: name.to_string(),
            pos,
            value,
        });
        Ok(())
    }

    fn need(&self, name: &str, at: usize, kind: &str) -> Result<String, SyntaxError> {
        match self.session.lookup(name) {
            Some(v) if v.kind() == kind => Ok(name.to_string()),
            Some(v) => Err(self.err(at, format!("`{name}` is a {}, not a {kind}", v.kind()))),
            None => Err(self.err(at, format!("unknown {kind} `{name}`"))),
        }
    }

    fn single_name(&self, args: &Args, kind: &str) -> Result<String, SyntaxError> {
        let (text, at) = args.positional;
        if text.is_empty() || text.contains(char::is_whitespace) {
            return Err(self.err(at, format!("expected one {kind} name")));
        }
        self.need(text, at, kind)
    }

    fn no_flags(&self, args: &Args, allowed: &[&str]) -> Result<(), SyntaxError> {
        for &(name, _, at, _) in &args.flags {
            if !allowed.contains(&name) {
                return Err(self.err(at, format!("unknown flag --{name}")));
            }
        }
        Ok(())
    }

    fn number<T: std::str::FromStr>(
        &self,
        text: &str,
        at: usize,
        what: &str,
    ) -> Result<T, SyntaxError> {
        text.trim()
            .parse()
            .map_err(|_| self.err(at, format!("expected {what}, found `{text}`")))
    }

    fn statement(&mut self, at: usize, body: &str) -> Result<(), SyntaxError> {
        let kw_len = body.find(char::is_whitespace).unwrap_or(body.len());
        let kw = &body[..kw_len];
        let rest_raw = &body[kw_len..];
        let rest_lead = rest_raw.len() - rest_raw.trim_start().len();
        let rest = rest_raw.trim();
        let rest_at = at + kw_len + rest_lead;
        match kw {
            "ring" => self.ring_statement(at, rest, rest_at),
            "ideal" => {
                let (name, expr, name_at, expr_at) = self.assignment(rest, rest_at)?;
                let gens = self.poly_list(expr, expr_at)?;
                let ring = self.ring(at)?.clone();
                let i = Ideal::new(&ring, gens).map_err(|e| self.lift(expr_at, e))?;
                self.bind(name, name_at, Value::Ideal(i))
            }
            "poly" => {
                let (name, expr, name_at, expr_at) = self.assignment(rest, rest_at)?;
                let p = self.poly(expr, expr_at)?;
                self.bind(name, name_at, Value::Poly(p))
            }
            "germ" => self.germ_statement(at, body, rest, rest_at),
            _ => {
                let kind = self.command(kw, at, rest, rest_at)?;
                self.session.commands.push(Command {
                    pos: Pos::at(self.src, at),
                    source: body.split_whitespace().collect::<Vec<_>>().join(" "),
                    kind,
                });
                Ok(())
            }
        }
    }

    fn assignment<'b>(
        &self,
        rest: &'b str,
        at: usize,
    ) -> Result<(&'b str, &'b str, usize, usize), SyntaxError> {
        let eq = rest
            .find('=')
            .ok_or_else(|| self.err(at, "expected `NAME = ...`"))?;
        let name = rest[..eq].trim();
        let expr_raw = &rest[eq + 1..];
        let expr = expr_raw.trim();
        if expr.is_empty() {
            return Err(self.err(at + eq + 1, "expected an expression after `=`"));
        }
        let expr_at = at + eq + 1 + (expr_raw.len() - expr_raw.trim_start().len());
        Ok((name, expr, at, expr_at))
    }

    fn ring_statement(&mut self, at: usize, rest: &str, rest_at: usize) -> Result<(), SyntaxError> {
        if self.session.ring.is_some() {
            return Err(self.err(at, "a ring is already declared"));
        }
        let words: Vec<(usize, &str)> = word_offsets(rest);
        let mut names_text = String::new();
        let mut weights: Option<(String, usize)> = None;
        let mut order: Option<(String, usize)> = None;
        let mut mode = 0;
        for (off, w) in words {
            match (mode, w) {
                (_, "weights") => mode = 1,
                (_, "order") => mode = 2,
                (0, _) => names_text.push_str(w),
                (1, _) => weights
                    .get_or_insert_with(|| (String::new(), rest_at + off))
                    .0
                    .push_str(w),
                (_, _) => order
                    .get_or_insert_with(|| (String::new(), rest_at + off))
                    .0
                    .push_str(w),
            }
        }
        let names: Vec<String> = names_text
            .split(',')
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect();
        if names.is_empty() {
            return Err(self.err(rest_at, "expected variable names"));
        }
        if let Some(bad) = names.iter().find(|n| !is_identifier(n)) {
            return Err(self.err(rest_at, format!("`{bad}` is not a valid variable name")));
        }
        let weights = match weights {
            Some((w, wat)) => w
                .split(',')
                .map(|x| self.number::<u32>(x, wat, "a positive weight"))
                .collect::<Result<Vec<_>, _>>()?,
            None => vec![1; names.len()],
        };
        let order = match order {
            None => MonomialOrder::WeightedDegrevlex,
            Some((o, oat)) => match o.as_str() {
                "lex" => MonomialOrder::Lex,
                "degrevlex" => MonomialOrder::Degrevlex,
                "weighted-degrevlex" | "wdegrevlex" => MonomialOrder::WeightedDegrevlex,
                other => return Err(self.err(oat, format!("unknown order `{other}`"))),
            },
        };
        let ring = RingContext::new(names, weights, order).map_err(|e| self.lift(rest_at, e))?;
        self.session.ring = Some(Arc::new(ring));
        Ok(())
    }

    fn germ_statement(
        &mut self,
        at: usize,
        body: &str,
        rest: &str,
        rest_at: usize,
    ) -> Result<(), SyntaxError> {
        let sub_len = rest.find(char::is_whitespace).unwrap_or(rest.len());
        let sub = &rest[..sub_len];
        let tail_raw = &rest[sub_len..];
        let tail = tail_raw.trim();
        let tail_at = rest_at + sub_len + (tail_raw.len() - tail_raw.trim_start().len());
        match sub {
            "semigroup" => {
                if self.session.semigroup.is_some() {
                    return Err(self.err(at, "a semigroup is already declared"));
                }
                let gens = tail
                    .split(',')
                    .map(|x| self.number::<u64>(x, tail_at, "a positive integer"))
                    .collect::<Result<Vec<_>, _>>()?;
                let s = NumericalSemigroup::new(&gens).map_err(|e| self.lift(tail_at, e))?;
                self.session.semigroup = Some(s);
                Ok(())
            }
            "ideal" => {
                let (name, expr, name_at, expr_at) = if tail.contains('=') {
                    self.assignment(tail, tail_at)?
                } else {
                    (DEFAULT_GERM_IDEAL, tail, tail_at, tail_at)
                };
                let s = self.semigroup(at)?;
                let shifts = expr
                    .split(',')
                    .map(|x| {
                        parse_order(x).ok_or_else(|| {
                            self.err(
                                expr_at,
                                format!(
                                    "expected an order like `5` or `t^5`, found `{}`",
                                    x.trim()
                                ),
                            )
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let a = SemigroupIdeal::new(&shifts, s).map_err(|e| self.lift(expr_at, e))?;
                self.bind(name, name_at, Value::GermIdeal(a))
            }
            _ => {
                let kind = self.germ_command(sub, at, tail, tail_at)?;
                self.session.commands.push(Command {
                    pos: Pos::at(self.src, at),
                    source: body.split_whitespace().collect::<Vec<_>>().join(" "),
                    kind,
                });
                Ok(())
            }
        }
    }

    fn semigroup(&self, at: usize) -> Result<&NumericalSemigroup, SyntaxError> {
        self.session
            .semigroup
            .as_ref()
            .ok_or_else(|| self.err(at, "no semigroup declared yet"))
    }

    /// `germ ELEMENT [IDEAL]` style arguments.
    fn element_and_ideal(&self, args: &Args) -> Result<(u64, String), SyntaxError> {
        let (text, at) = args.positional;
        let words = word_offsets(text);
        let Some(&(_, first)) = words.first() else {
            return Err(self.err(at, "expected an element like `t^5`"));
        };
        let element = parse_order(first).ok_or_else(|| {
            self.err(
                at,
                format!("expected an element like `t^5`, found `{first}`"),
            )
        })?;
        let ideal = match words.get(1) {
            Some(&(off, name)) => self.need(name, at + off, "germ ideal")?,
            None => self.need(DEFAULT_GERM_IDEAL, at, "germ ideal")?,
        };
        if words.len() > 2 {
            return Err(self.err(at + words[2].0, "unexpected argument"));
        }
        Ok((element, ideal))
    }

    fn germ_command(
        &self,
        sub: &str,
        at: usize,
        tail: &str,
        tail_at: usize,
    ) -> Result<CommandKind, SyntaxError> {
        self.semigroup(at)?;
        let args = split_args(tail, tail_at);
        match sub {
            "member" => {
                self.no_flags(&args, &[])?;
                let (element, ideal) = self.element_and_ideal(&args)?;
                Ok(CommandKind::GermMember { element, ideal })
            }
            "closure-member" => {
                self.no_flags(&args, &["power"])?;
                let (element, ideal) = self.element_and_ideal(&args)?;
                let power = match args.flag("power") {
                    Some((v, o)) => self.number(v, o, "a positive power")?,
                    None => 1,
                };
                Ok(CommandKind::GermClosureMember {
                    element,
                    ideal,
                    power,
                })
            }
            "exponent" => {
                self.no_flags(&args, &["ell", "mode"])?;
                let (text, pat) = args.positional;
                let ideal = if text.is_empty() {
                    self.need(DEFAULT_GERM_IDEAL, pat, "germ ideal")?
                } else {
                    self.need(text, pat, "germ ideal")?
                };
                let ell = match args.flag("ell") {
                    Some((v, o)) => self.number(v, o, "a positive integer")?,
                    None => 1,
                };
                let mode = match args.flag("mode") {
                    None | Some(("power", _)) => ExponentMode::Power,
                    Some(("closure-power", _)) => ExponentMode::ClosurePower,
                    Some((v, o)) => return Err(self.err(o, format!("unknown mode `{v}`"))),
                };
                Ok(CommandKind::GermExponent { ideal, ell, mode })
            }
            "mu" => {
                self.no_flags(&args, &[])?;
                let (text, pat) = args.positional;
                let mut v_max = None;
                let mut ell_max = None;
                for (off, w) in word_offsets(text) {
                    match w.split_once('=') {
                        Some(("vmax", v)) => {
                            v_max = Some(self.number(v, pat + off, "an integer")?)
                        }
                        Some(("lmax", v)) => {
                            ell_max = Some(self.number(v, pat + off, "an integer")?)
                        }
                        _ => {
                            return Err(self
                                .err(pat + off, format!("expected vmax=N or lmax=N, found `{w}`")))
                        }
                    }
                }
                Ok(CommandKind::GermMu {
                    v_max: v_max.unwrap_or(12),
                    ell_max: ell_max.unwrap_or(4),
                })
            }
            other => Err(self.err(at, format!("unknown germ statement `{other}`"))),
        }
    }

    fn command(
        &self,
        kw: &str,
        at: usize,
        rest: &str,
        rest_at: usize,
    ) -> Result<CommandKind, SyntaxError> {
        let args = split_args(rest, rest_at);
        let kind = match kw {
            "resolve" => {
                self.no_flags(&args, &["max-len", "raw"])?;
                let max_len = match args.flag("max-len") {
                    Some((v, o)) => Some(self.number(v, o, "a length")?),
                    None => None,
                };
                CommandKind::Resolve {
                    ideal: self.single_name(&args, "ideal")?,
                    max_len,
                    raw: args.flag("raw").is_some(),
                }
            }
            "koszul" => {
                self.no_flags(&args, &[])?;
                CommandKind::Koszul {
                    ideal: self.single_name(&args, "ideal")?,
                }
            }
            "strata" => {
                self.no_flags(&args, &[])?;
                CommandKind::Strata {
                    ideal: self.single_name(&args, "ideal")?,
                }
            }
            "check-cm" => {
                self.no_flags(&args, &[])?;
                CommandKind::CheckCm {
                    ideal: self.single_name(&args, "ideal")?,
                }
            }
            "check-normal" => {
                self.no_flags(&args, &[])?;
                CommandKind::CheckNormal {
                    ideal: self.single_name(&args, "ideal")?,
                }
            }
            "check-bs" => {
                self.no_flags(&args, &["ideal", "m"])?;
                let (a, aat) = args
                    .flag("ideal")
                    .ok_or_else(|| self.err(at, "check-bs needs --ideal NAME"))?;
                let a = self.need(a, aat, "ideal")?;
                let m = match args.flag("m") {
                    Some((v, o)) => self.number(v, o, "a generator count")?,
                    None => self.session.ideal(&a).map_or(1, |i| i.generators().len()),
                };
                CommandKind::CheckBs {
                    ideal: self.single_name(&args, "ideal")?,
                    a,
                    m,
                }
            }
            "member" => {
                self.no_flags(&args, &[])?;
                let (text, pat) = args.positional;
                let cut = text
                    .rfind(" in ")
                    .ok_or_else(|| self.err(pat, "expected `member POLY in IDEAL`"))?;
                let name = text[cut + 4..].trim();
                let ideal = self.need(name, pat + cut + 4, "ideal")?;
                CommandKind::Member {
                    poly: self.poly(text[..cut].trim(), pat)?,
                    ideal,
                }
            }
            "dim" => {
                self.no_flags(&args, &[])?;
                CommandKind::Dim {
                    ideal: self.single_name(&args, "ideal")?,
                }
            }
            "closure" => {
                self.no_flags(&args, &[])?;
                CommandKind::Closure {
                    ideal: self.single_name(&args, "ideal")?,
                }
            }
            "bs-verify-monomial" => {
                self.no_flags(&args, &["ell", "d"])?;
                let ell = match args.flag("ell") {
                    Some((v, o)) => self.number(v, o, "a positive integer")?,
                    None => 1,
                };
                let d = match args.flag("d") {
                    Some((v, o)) => Some(self.number(v, o, "a dimension")?),
                    None => None,
                };
                CommandKind::BsVerifyMonomial {
                    ideal: self.single_name(&args, "ideal")?,
                    ell,
                    d,
                }
            }
            "loja" => self.loja(at, &args)?,
            other => return Err(self.err(at, format!("unknown keyword `{other}`"))),
        };
        Ok(kind)
    }

    fn loja(&self, at: usize, args: &Args) -> Result<CommandKind, SyntaxError> {
        self.no_flags(
            args,
            &[
                "phi", "a", "param", "on", "solve", "radii", "samples", "seed", "csv",
            ],
        )?;
        if !args.positional.0.is_empty() {
            return Err(self.err(args.positional.1, "loja takes only flags"));
        }
        let ring = self.ring(at)?.clone();
        let (phi_text, phi_at) = args
            .flag("phi")
            .ok_or_else(|| self.err(at, "loja needs --phi"))?;
        let (a_text, a_at) = args
            .flag("a")
            .ok_or_else(|| self.err(at, "loja needs --a"))?;
        let phi = self.poly(phi_text, phi_at)?;
        let a = match self.session.ideal(a_text.trim()) {
            Some(i) => i.generators().to_vec(),
            None => self.poly_list(a_text, a_at)?,
        };
        let source = match (args.flag("param"), args.flag("on")) {
            (Some(_), Some((_, o))) => return Err(self.err(o, "use either --param or --on")),
            (Some((v, o)), None) => LojaSource::Curve(
                v.split(',')
                    .map(|x| self.number(x, o, "a positive exponent"))
                    .collect::<Result<_, _>>()?,
            ),
            (None, Some((v, o))) => {
                let ideal = self.need(v, o, "ideal")?;
                let (var, vat) = args
                    .flag("solve")
                    .ok_or_else(|| self.err(o, "--on needs --solve VARIABLE"))?;
                let solve_for = ring
                    .var_index(var)
                    .ok_or_else(|| self.err(vat, format!("unknown variable `{var}`")))?;
                LojaSource::Hypersurface { ideal, solve_for }
            }
            (None, None) => LojaSource::Curve(ring.weights().to_vec()),
        };
        let radii = match args.flag("radii") {
            Some((v, o)) => {
                let parts: Vec<&str> = v.split(':').collect();
                if parts.len() != 3 {
                    return Err(self.err(o, "expected --radii HI:LO:COUNT"));
                }
                (
                    self.number(parts[0], o, "a radius")?,
                    self.number(parts[1], o, "a radius")?,
                    self.number(parts[2], o, "a count")?,
                )
            }
            None => (1e-1, 1e-3, 5),
        };
        let samples = match args.flag("samples") {
            Some((v, o)) => self.number(v, o, "a sample count")?,
            None => 12,
        };
        let seed = match args.flag("seed") {
            Some((v, o)) => Some(self.number(v, o, "a seed")?),
            None => None,
        };
        Ok(CommandKind::Loja {
            phi,
            a,
            source,
            radii,
            samples,
            seed,
            csv: args.flag("csv").map(|(v, _)| v.to_string()),
        })
    }
}

fn is_identifier(s: &str) -> bool {
    let mut c = s.chars();
    c.next()
        .is_some_and(|f| f.is_ascii_alphabetic() || f == '_')
        && c.all(|x| x.is_ascii_alphanumeric() || x == '_')
}

fn word_offsets(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(st)) => {
                out.push((st, &s[st..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(st) = start {
        out.push((st, &s[st..]));
    }
    out
}

/// Splits at commas outside parentheses, keeping each part's offset.
fn split_top_level(s: &str) -> Vec<(&str, usize)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push((&s[start..i], start));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((&s[start..], start));
    out
}

/// `5` or `t^5` (or `t` for 1).
fn parse_order(s: &str) -> Option<u64> {
    let s = s.trim();
    if s == "t" {
        return Some(1);
    }
    s.strip_prefix("t^").unwrap_or(s).parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cusp_session() {
        let s = parse_session("ring z,w weights 2,5; ideal I = z^5 - w^2; resolve I;").unwrap();
        assert_eq!(s.commands.len(), 1);
        assert_eq!(s.ring.as_ref().unwrap().weights(), [2, 5]);
        assert!(s.ideal("I").is_some());
    }

    #[test]
    fn semigroup_session() {
        let s = parse_session("germ semigroup 2,5; germ mu vmax=12 lmax=4;").unwrap();
        assert_eq!(s.commands.len(), 1);
        assert!(matches!(
            s.commands[0].kind,
            CommandKind::GermMu {
                v_max: 12,
                ell_max: 4
            }
        ));
    }

    #[test]
    fn empty_statement_is_located() {
        let e = parse_session("ring x;; ").unwrap_err();
        assert_eq!((e.pos.line, e.pos.col), (1, 8));
        assert!(e.message.contains("empty"));
    }

    #[test]
    fn duplicate_and_unknown_names() {
        let e = parse_session("ring x;\nideal I = x;\nideal I = x^2;").unwrap_err();
        assert_eq!(e.pos.line, 3);
        assert!(e.message.contains("already bound"));
        let e = parse_session("ring x; resolve J;").unwrap_err();
        assert!(e.message.contains("unknown ideal"));
        let e = parse_session("ring x; frobnicate x;").unwrap_err();
        assert!(e.message.contains("unknown keyword"));
        assert_eq!(e.pos.col, 9);
    }

    #[test]
    fn expression_errors_point_inside_the_expression() {
        let src = "ring x,y;\nideal I = x + q;";
        let e = parse_session(src).unwrap_err();
        assert_eq!((e.pos.line, e.pos.col), (2, 15));
    }

    #[test]
    fn comments_and_flags() {
        let src = "# header\nring z,w weights 2,5; # trailing\nideal I = z^5 - w^2;\nideal A = z;\ncheck-bs I --ideal A --m 1;\nloja --phi w --a z --radii 0.1:0.001:4;";
        let s = parse_session(src).unwrap();
        assert_eq!(s.commands.len(), 2);
        match &s.commands[1].kind {
            CommandKind::Loja { source, radii, .. } => {
                assert_eq!(*source, LojaSource::Curve(vec![2, 5]));
                assert_eq!(radii.2, 4);
            }
            k => panic!("{k:?}"),
        }
        let e = parse_session("ring x; ideal I = x; resolve I --fast;").unwrap_err();
        assert!(e.message.contains("--fast"));
    }

    #[test]
    fn germ_statements() {
        let s = parse_session("germ semigroup 2,5; germ ideal 2; germ member t^5; germ ideal B = t^4, t^5; germ exponent B --ell 1 --mode closure-power;").unwrap();
        assert_eq!(s.commands.len(), 2);
        assert!(s.germ_ideal("A").is_some());
        let e = parse_session("germ semigroup 2,5; germ ideal 3;").unwrap_err();
        assert!(e.message.contains("t^3"));
        let e = parse_session("germ semigroup 4,6;").unwrap_err();
        assert!(e.message.contains("gcd"));
    }
}
