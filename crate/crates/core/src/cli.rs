//! Text specification format, command dispatch, and reports for the `cusco`
//! binary.
//!
//! ```text
//! # comments run to end of line
//! function f
//!   breakpoints -2 0 2
//!   affine 0 -1
//!   recip 0 1 0
//!   at -2 = -1
//!   at 0 undefined
//!   at 2 = 1/2
//! end
//!
//! map F lower=f upper=g
//!
//! map G
//!   breakpoints 0 1
//!   piece affine 0 0 .. affine 0 1 | affine 0 2
//!   at 0 = [0,1] 2
//!   at 1 = [0,1] 2
//! end
//!
//! curve c
//!   breakpoints -1 0 1
//!   line (0,0) (1,0)
//!   line (1,1) (0,0)
//!   at -1 = (-1,0)
//!   at 0 = (0,0)
//!   at 1 undefined
//! end
//!
//! convex g breakpoints=[-1,0,1] slopes=[-1,1] anchor=1
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{json, Value};

use crate::analysis::{is_hyperplane_minimal, is_quasicontinuous, is_subcontinuous};
use crate::convex2d::{
    planar_hyperplane_minimal, planar_minimal_cusco_from, planar_quasicontinuous, Curve2, PlanarPiece, Point2,
};
use crate::error::Error;
use crate::minimal::{
    is_minimal_cusco, is_minimal_usco, minimal_cusco_from, minimal_cusco_within, minimal_usco_within,
    unique_minimal_usco, Envelope,
};
use crate::oracle::{compare_curve, compare_function, compare_map, Comparison};
use crate::pwfun::{PWFun, PieceExpr};
use crate::rat::{parse_rat, Rat};
use crate::subdiff::{differentiability_points, subdifferential, ConvexPWAffine};
use crate::svmap::{csc, is_cusco, is_usco, Band, IntervalUnion, IntervalValue, MultiMap};
use crate::verdict::Verdict;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entity {
    Function(PWFun),
    Map(MultiMap),
    Curve(Curve2),
    Convex(ConvexPWAffine),
}

impl Entity {
    pub fn kind(&self) -> &'static str {
        match self {
            Entity::Function(_) => "function",
            Entity::Map(_) => "map",
            Entity::Curve(_) => "curve",
            Entity::Convex(_) => "convex",
        }
    }
}

/// Named entities in file order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpecDoc {
    entities: Vec<(String, Entity)>,
}

impl SpecDoc {
    pub fn get(&self, name: &str) -> Option<&Entity> {
        self.entities.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entities.iter().map(|(n, _)| n.as_str())
    }

    pub fn entities(&self) -> &[(String, Entity)] {
        &self.entities
    }

    pub fn push(&mut self, name: impl Into<String>, entity: Entity) {
        self.entities.push((name.into(), entity));
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

/// All diagnostics found in a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError(pub Vec<Diagnostic>);

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", lines.join("\n"))
    }
}

impl std::error::Error for ParseError {}

type Diag<T> = std::result::Result<T, String>;

fn rats(tokens: &[&str]) -> Diag<Vec<Rat>> {
    tokens.iter().map(|t| parse_rat(t)).collect()
}

fn parse_expr(tokens: &[&str]) -> Diag<PieceExpr> {
    match tokens {
        ["affine", m, c] => Ok(PieceExpr::affine(parse_rat(m)?, parse_rat(c)?)),
        ["recip", p, s, o] => Ok(PieceExpr::reciprocal(parse_rat(p)?, parse_rat(s)?, parse_rat(o)?)),
        _ => Err(format!(
            "expected `affine <slope> <intercept>` or `recip <pole> <scale> <offset>`, got `{}`",
            tokens.join(" ")
        )),
    }
}

/// Split on whitespace, keeping `[...]` and `(...)` groups whole.
fn groups(s: &str) -> Diag<Vec<String>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut close: Option<char> = None;
    for ch in s.chars() {
        match close {
            Some(c) => {
                cur.push(ch);
                if ch == c {
                    close = None;
                }
            }
            None if ch.is_whitespace() => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            None => {
                if ch == '[' {
                    close = Some(']');
                } else if ch == '(' {
                    close = Some(')');
                }
                cur.push(ch);
            }
        }
    }
    if let Some(c) = close {
        return Err(format!("missing `{c}`"));
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

fn bracketed(s: &str, open: char, close: char) -> Diag<Vec<&str>> {
    let inner = s
        .strip_prefix(open)
        .and_then(|r| r.strip_suffix(close))
        .ok_or_else(|| format!("expected `{open}...{close}`, got `{s}`"))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    Ok(inner.split(',').map(str::trim).collect())
}

fn parse_point(s: &str) -> Diag<Point2> {
    match bracketed(s, '(', ')')?.as_slice() {
        [x, y] => Ok(Point2::new(parse_rat(x)?, parse_rat(y)?)),
        _ => Err(format!("expected a point `(x,y)`, got `{s}`")),
    }
}

fn parse_value_set(s: &str) -> Diag<IntervalUnion> {
    let mut parts = Vec::new();
    for g in groups(s)? {
        if g.starts_with('[') {
            match bracketed(&g, '[', ']')?.as_slice() {
                [lo, hi] => parts.push(IntervalValue::new(parse_rat(lo)?, parse_rat(hi)?).map_err(|e| e.to_string())?),
                _ => return Err(format!("expected an interval `[lo,hi]`, got `{g}`")),
            }
        } else {
            parts.push(IntervalValue::point(parse_rat(&g)?));
        }
    }
    IntervalUnion::new(parts).map_err(|_| "empty value set".to_string())
}

fn parse_band(s: &str) -> Diag<Band> {
    let halves: Vec<&str> = s.split("..").map(str::trim).collect();
    let expr = |h: &str| parse_expr(&h.split_whitespace().collect::<Vec<_>>());
    match halves.as_slice() {
        [one] => Ok(Band::curve(expr(one)?)),
        [lo, hi] => Ok(Band::new(expr(lo)?, expr(hi)?)),
        _ => Err(format!("expected `<expr>` or `<expr> .. <expr>`, got `{s}`")),
    }
}

fn key_values(groups: &[String]) -> Diag<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for g in groups {
        let (k, v) = g.split_once('=').ok_or_else(|| format!("expected `key=value`, got `{g}`"))?;
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return Err(format!("duplicate key `{k}`"));
        }
    }
    Ok(out)
}

/// `at <t> = <rest>` or `at <t> undefined`; returns `(t, rest)`.
fn parse_at(rest: &str) -> Diag<(Rat, Option<String>)> {
    let rest = rest.trim();
    if let Some((t, v)) = rest.split_once('=') {
        return Ok((parse_rat(t)?, Some(v.trim().to_string())));
    }
    match rest.split_whitespace().collect::<Vec<_>>().as_slice() {
        [t, "undefined"] => Ok((parse_rat(t)?, None)),
        _ => Err(format!("expected `at <t> = <value>` or `at <t> undefined`, got `at {rest}`")),
    }
}

/// Lines of one block, gathered before validation.
#[derive(Default)]
struct Block {
    kind: String,
    name: String,
    line: usize,
    header: Vec<String>,
    body: Vec<(usize, String)>,
}

struct Parser {
    diags: Vec<Diagnostic>,
}

impl Parser {
    fn err(&mut self, line: usize, msg: impl Into<String>) {
        self.diags.push(Diagnostic { line, message: msg.into() });
    }

    fn breakpoints(&mut self, b: &Block) -> Option<(usize, Vec<Rat>)> {
        let lines: Vec<&(usize, String)> = b.body.iter().filter(|(_, l)| l.starts_with("breakpoints")).collect();
        let Some((line, text)) = lines.first() else {
            self.err(b.line, format!("{} `{}` has no `breakpoints` line", b.kind, b.name));
            return None;
        };
        if let Some((dup, _)) = lines.get(1) {
            self.err(*dup, "duplicate `breakpoints` line");
        }
        let toks: Vec<&str> = text.split_whitespace().skip(1).collect();
        let bps = match rats(&toks) {
            Ok(v) => v,
            Err(e) => {
                self.err(*line, e);
                return None;
            }
        };
        if let Err(e) = crate::pwfun::validate_breakpoints(&bps) {
            self.err(*line, e);
            return None;
        }
        Some((*line, bps))
    }

    /// One entry per breakpoint from the `at` lines, parsed by `value`.
    fn at_values<T>(
        &mut self,
        b: &Block,
        bps: &[Rat],
        mut value: impl FnMut(&str) -> Diag<T>,
    ) -> Option<Vec<Option<T>>> {
        let mut out: Vec<Option<Option<T>>> = bps.iter().map(|_| None).collect();
        let mut ok = true;
        for (line, text) in b.body.iter().filter(|(_, l)| l.starts_with("at ")) {
            let parsed = parse_at(&text[3..]).and_then(|(t, v)| {
                let i = bps.binary_search(&t).map_err(|_| format!("{t} is not a breakpoint"))?;
                Ok((i, v.map(|v| value(&v)).transpose()?))
            });
            match parsed {
                Ok((i, v)) if out[i].is_none() => out[i] = Some(v),
                Ok((i, _)) => {
                    ok = false;
                    self.err(*line, format!("breakpoint {} already has a value", bps[i]));
                }
                Err(e) => {
                    ok = false;
                    self.err(*line, e);
                }
            }
        }
        for (i, v) in out.iter().enumerate() {
            if v.is_none() {
                ok = false;
                self.err(b.line, format!("{} `{}` has no `at {}` line", b.kind, b.name, bps[i]));
            }
        }
        ok.then(|| out.into_iter().map(|v| v.expect("checked")).collect())
    }

    fn unknown_lines(&mut self, b: &Block, known: &[&str]) {
        for (line, text) in &b.body {
            let word = text.split_whitespace().next().unwrap_or("");
            if !known.contains(&word) {
                self.err(*line, format!("unexpected `{word}` in {} block", b.kind));
            }
        }
    }

    fn function(&mut self, b: &Block) -> Option<PWFun> {
        self.unknown_lines(b, &["breakpoints", "affine", "recip", "at"]);
        let (_, bps) = self.breakpoints(b)?;
        let mut pieces = Vec::new();
        let mut ok = true;
        for (line, text) in b.body.iter().filter(|(_, l)| l.starts_with("affine") || l.starts_with("recip")) {
            match parse_expr(&text.split_whitespace().collect::<Vec<_>>()) {
                Ok(e) => {
                    if let (Some(l), Some(r)) = (bps.get(pieces.len()), bps.get(pieces.len() + 1)) {
                        if !e.fits(l, r) {
                            ok = false;
                            self.err(*line, format!("pole of `{e}` lies inside ({l}, {r})"));
                        }
                    }
                    pieces.push(e);
                }
                Err(e) => {
                    ok = false;
                    self.err(*line, e);
                }
            }
        }
        if ok && pieces.len() + 1 != bps.len() {
            self.err(b.line, format!("{} breakpoints need {} pieces, got {}", bps.len(), bps.len() - 1, pieces.len()));
            return None;
        }
        let values = self.at_values(b, &bps, parse_rat)?;
        if !ok {
            return None;
        }
        PWFun::new(bps, pieces, values).map_err(|e| self.err(b.line, e.to_string())).ok()
    }

    fn map_block(&mut self, b: &Block) -> Option<MultiMap> {
        self.unknown_lines(b, &["breakpoints", "piece", "at"]);
        let (_, bps) = self.breakpoints(b)?;
        let mut bands = Vec::new();
        let mut ok = true;
        for (line, text) in b.body.iter().filter(|(_, l)| l.starts_with("piece")) {
            let parsed: Diag<Vec<Band>> = text["piece".len()..].split('|').map(parse_band).collect();
            match parsed {
                Ok(piece) => {
                    if let (Some(l), Some(r)) = (bps.get(bands.len()), bps.get(bands.len() + 1)) {
                        // Band validity alone, with placeholder values.
                        let zero = IntervalUnion::point(Rat::default());
                        let single = MultiMap::new(vec![l.clone(), r.clone()], vec![piece.clone()], vec![zero.clone(), zero]);
                        if let Err(e) = single {
                            ok = false;
                            self.err(*line, e.to_string());
                        }
                    }
                    bands.push(piece);
                }
                Err(e) => {
                    ok = false;
                    self.err(*line, e);
                }
            }
        }
        if ok && bands.len() + 1 != bps.len() {
            self.err(b.line, format!("{} breakpoints need {} pieces, got {}", bps.len(), bps.len() - 1, bands.len()));
            return None;
        }
        let values = self.at_values(b, &bps, parse_value_set)?;
        if !ok {
            return None;
        }
        if values.iter().any(Option::is_none) {
            self.err(b.line, "map values cannot be undefined");
            return None;
        }
        let values = values.into_iter().map(|v| v.expect("checked")).collect();
        MultiMap::new(bps, bands, values).map_err(|e| self.err(b.line, e.to_string())).ok()
    }

    fn curve(&mut self, b: &Block) -> Option<Curve2> {
        self.unknown_lines(b, &["breakpoints", "line", "const", "at"]);
        let (_, bps) = self.breakpoints(b)?;
        let mut pieces = Vec::new();
        let mut ok = true;
        for (line, text) in b.body.iter().filter(|(_, l)| l.starts_with("line") || l.starts_with("const")) {
            let parsed = groups(text).and_then(|g| match g.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
                ["line", q, v] => Ok(PlanarPiece::new(parse_point(q)?, parse_point(v)?)),
                ["const", p] => Ok(PlanarPiece::constant(parse_point(p)?)),
                _ => Err(format!("expected `line (qx,qy) (vx,vy)` or `const (x,y)`, got `{text}`")),
            });
            match parsed {
                Ok(p) => pieces.push(p),
                Err(e) => {
                    ok = false;
                    self.err(*line, e);
                }
            }
        }
        if ok && pieces.len() + 1 != bps.len() {
            self.err(b.line, format!("{} breakpoints need {} pieces, got {}", bps.len(), bps.len() - 1, pieces.len()));
            return None;
        }
        let values = self.at_values(b, &bps, parse_point)?;
        if !ok {
            return None;
        }
        Curve2::new(bps, pieces, values).map_err(|e| self.err(b.line, e.to_string())).ok()
    }

    fn convex(&mut self, b: &Block) -> Option<ConvexPWAffine> {
        let kv = match key_values(&b.header) {
            Ok(kv) => kv,
            Err(e) => {
                self.err(b.line, e);
                return None;
            }
        };
        let list = |key: &str| -> Diag<Vec<Rat>> {
            let v = kv.get(key).ok_or_else(|| format!("convex function needs `{key}=[...]`"))?;
            rats(&bracketed(v, '[', ']')?)
        };
        let built = (|| -> Diag<ConvexPWAffine> {
            if let Some(k) = kv.keys().find(|k| !["breakpoints", "slopes", "anchor"].contains(&k.as_str())) {
                return Err(format!("unknown key `{k}`"));
            }
            let anchor = parse_rat(kv.get("anchor").ok_or("convex function needs `anchor=<v>`")?)?;
            ConvexPWAffine::new(list("breakpoints")?, list("slopes")?, anchor).map_err(|e| e.to_string())
        })();
        built.map_err(|e| self.err(b.line, e)).ok()
    }
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

/// Parse and validate a specification file.
pub fn parse_spec(text: &str) -> std::result::Result<SpecDoc, ParseError> {
    let mut p = Parser { diags: Vec::new() };
    let mut blocks: Vec<Block> = Vec::new();
    let mut open: Option<Block> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let text = strip_comment(raw);
        if text.is_empty() {
            continue;
        }
        if let Some(b) = open.as_mut() {
            if text == "end" {
                blocks.push(open.take().expect("open block"));
            } else {
                b.body.push((line, text.to_string()));
            }
            continue;
        }
        let g = match groups(text) {
            Ok(g) => g,
            Err(e) => {
                p.err(line, e);
                continue;
            }
        };
        let (kind, name) = match g.as_slice() {
            [k, n, ..] if ["function", "map", "curve", "convex"].contains(&k.as_str()) => (k.clone(), n.clone()),
            _ => {
                p.err(line, format!("expected `function`, `map`, `curve`, or `convex` header, got `{text}`"));
                continue;
            }
        };
        let block = Block { kind, name, line, header: g[2..].to_vec(), body: Vec::new() };
        let one_liner = block.kind == "convex" || !block.header.is_empty();
        if one_liner {
            blocks.push(block);
        } else {
            open = Some(block);
        }
    }
    if let Some(b) = open {
        p.err(b.line, format!("{} `{}` is missing `end`", b.kind, b.name));
    }
    if blocks.is_empty() && p.diags.is_empty() {
        p.err(0, "no entities");
    }

    let mut seen: BTreeSet<String> = BTreeSet::new();
    for b in &blocks {
        if !seen.insert(b.name.clone()) {
            p.err(b.line, format!("`{}` is defined twice", b.name));
        }
    }
    let mut doc = SpecDoc::default();
    let mut pending: Vec<&Block> = Vec::new();
    for b in &blocks {
        let entity = match b.kind.as_str() {
            "function" if b.header.is_empty() => p.function(b).map(Entity::Function),
            "function" => {
                p.err(b.line, "unexpected text after function name");
                None
            }
            "map" if b.header.is_empty() => p.map_block(b).map(Entity::Map),
            "map" => {
                pending.push(b);
                continue;
            }
            "curve" if b.header.is_empty() => p.curve(b).map(Entity::Curve),
            "curve" => {
                p.err(b.line, "unexpected text after curve name");
                None
            }
            _ => p.convex(b).map(Entity::Convex),
        };
        if let Some(e) = entity {
            doc.push(b.name.clone(), e);
        }
    }
    // Maps between named functions, once every function is known.
    for b in pending {
        let kv = match key_values(&b.header) {
            Ok(kv) => kv,
            Err(e) => {
                p.err(b.line, e);
                continue;
            }
        };
        let mut fetch = |key: &str| -> Option<PWFun> {
            let Some(name) = kv.get(key) else {
                p.err(b.line, format!("map needs `{key}=<function>`"));
                return None;
            };
            match doc.get(name) {
                Some(Entity::Function(f)) => Some(f.clone()),
                Some(other) => {
                    p.err(b.line, format!("`{name}` is a {}, not a function", other.kind()));
                    None
                }
                None => {
                    if !blocks.iter().any(|o| &o.name == name) {
                        p.err(b.line, format!("unknown name `{name}`"));
                    }
                    None
                }
            }
        };
        let (lower, upper) = (fetch("lower"), fetch("upper"));
        if let Some(k) = kv.keys().find(|k| *k != "lower" && *k != "upper") {
            p.err(b.line, format!("unknown key `{k}`"));
            continue;
        }
        if let (Some(lo), Some(hi)) = (lower, upper) {
            match MultiMap::between(&lo, &hi) {
                Ok(m) => doc.push(b.name.clone(), Entity::Map(m)),
                Err(e) => p.err(b.line, e.to_string()),
            }
        }
    }
    if p.diags.is_empty() {
        Ok(doc)
    } else {
        p.diags.sort_by_key(|d| d.line);
        Err(ParseError(p.diags))
    }
}

fn join<T: fmt::Display>(items: &[T], sep: &str) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

/// Text that [`parse_spec`] reads back as the same entity.
pub fn serialize(name: &str, entity: &Entity) -> String {
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    match entity {
        Entity::Function(f) => {
            line(format!("function {name}"));
            line(format!("  breakpoints {}", join(f.breakpoints(), " ")));
            for p in f.pieces() {
                line(format!("  {p}"));
            }
            for (t, v) in f.breakpoints().iter().zip(f.values()) {
                match v {
                    Some(v) => line(format!("  at {t} = {v}")),
                    None => line(format!("  at {t} undefined")),
                }
            }
            line("end".into());
        }
        Entity::Map(m) => {
            line(format!("map {name}"));
            line(format!("  breakpoints {}", join(m.breakpoints(), " ")));
            for piece in m.bands() {
                line(format!("  piece {}", join(piece, " | ")));
            }
            for (t, v) in m.breakpoints().iter().zip(m.values()) {
                line(format!("  at {t} = {v}"));
            }
            line("end".into());
        }
        Entity::Curve(c) => {
            line(format!("curve {name}"));
            line(format!("  breakpoints {}", join(c.breakpoints(), " ")));
            for p in c.pieces() {
                line(format!("  {p}"));
            }
            for (t, v) in c.breakpoints().iter().zip(c.values()) {
                match v {
                    Some(v) => line(format!("  at {t} = {v}")),
                    None => line(format!("  at {t} undefined")),
                }
            }
            line("end".into());
        }
        Entity::Convex(g) => line(format!(
            "convex {name} breakpoints=[{}] slopes=[{}] anchor={}",
            join(g.breakpoints(), ","),
            join(g.slopes(), ","),
            g.anchor()
        )),
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    CheckQc,
    CheckSubcont,
    CheckHpmin,
    CheckUsco,
    CheckCusco,
    CheckMinUsco,
    CheckMinCusco,
    Csc,
    ConstructMinCusco,
    ExtractMinUsco,
    WithinMinUsco,
    WithinMinCusco,
    Subdiff,
    OracleAgree,
    Sample,
}

impl Command {
    pub const ALL: [Command; 15] = [
        Command::CheckQc,
        Command::CheckSubcont,
        Command::CheckHpmin,
        Command::CheckUsco,
        Command::CheckCusco,
        Command::CheckMinUsco,
        Command::CheckMinCusco,
        Command::Csc,
        Command::ConstructMinCusco,
        Command::ExtractMinUsco,
        Command::WithinMinUsco,
        Command::WithinMinCusco,
        Command::Subdiff,
        Command::OracleAgree,
        Command::Sample,
    ];

    pub fn from_name(name: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == name)
    }

    pub fn name(self) -> &'static str {
        match self {
            Command::CheckQc => "check-qc",
            Command::CheckSubcont => "check-subcont",
            Command::CheckHpmin => "check-hpmin",
            Command::CheckUsco => "check-usco",
            Command::CheckCusco => "check-cusco",
            Command::CheckMinUsco => "check-min-usco",
            Command::CheckMinCusco => "check-min-cusco",
            Command::Csc => "csc",
            Command::ConstructMinCusco => "construct-min-cusco",
            Command::ExtractMinUsco => "extract-min-usco",
            Command::WithinMinUsco => "within-min-usco",
            Command::WithinMinCusco => "within-min-cusco",
            Command::Subdiff => "subdiff",
            Command::OracleAgree => "oracle-agree",
            Command::Sample => "sample",
        }
    }
}

/// Per-command options.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    pub at: Option<Rat>,
    pub step: Option<Rat>,
    pub envelope: Envelope,
    pub depth: u32,
}

impl Default for Options {
    fn default() -> Self {
        Options { at: None, step: None, envelope: Envelope::Inf, depth: crate::oracle::DEFAULT_DEPTH }
    }
}

/// Result of a command: exit code, human text, and an optional verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub entity: String,
    pub exit_code: i32,
    pub verdict: Option<Verdict>,
    /// Text body: a constructed entity, a CSV table, or a summary.
    pub output: String,
}

impl Report {
    fn verdict(command: Command, entity: &str, v: Verdict, summary: String) -> Report {
        Report {
            command: command.name(),
            entity: entity.to_string(),
            exit_code: if v.holds { 0 } else { 1 },
            verdict: Some(v),
            output: summary,
        }
    }

    fn success(command: Command, entity: &str, output: String) -> Report {
        Report { command: command.name(), entity: entity.to_string(), exit_code: 0, verdict: None, output }
    }

    pub fn to_text(&self) -> String {
        let mut s = self.output.clone();
        if let Some(v) = &self.verdict {
            if !s.is_empty() && !s.ends_with('\n') {
                s.push('\n');
            }
            s.push_str(&format!("clause: {}\n", v.clause));
            for w in &v.witnesses {
                s.push_str(&format!("  at {}: {}", w.point, w.detail));
                if let Some(r) = &w.ray {
                    s.push_str(&format!(" (half-line {r})"));
                }
                s.push('\n');
            }
        }
        if !s.ends_with('\n') {
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let verdict = self.verdict.as_ref().map(|v| {
            json!({
                "holds": v.holds,
                "clause": v.clause,
                "witnesses": v.witnesses.iter().map(|w| json!({
                    "point": w.point.to_string(),
                    "detail": w.detail,
                    "ray": w.ray.as_ref().map(|r| r.to_string()),
                })).collect::<Vec<_>>(),
            })
        });
        json!({
            "command": self.command,
            "entity": self.entity,
            "exit_code": self.exit_code,
            "verdict": verdict,
            "output": self.output,
        })
    }
}

/// Failures that are the caller's fault: exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum UsageError {
    #[error("no entity named `{0}`")]
    UnknownName(String),
    #[error("{command} does not apply to {kind} `{name}`")]
    WrongKind { command: &'static str, kind: &'static str, name: String },
    #[error("{0} needs --{1}")]
    MissingOption(&'static str, &'static str),
    #[error("{0}")]
    Invalid(String),
}

fn wrong_kind(command: Command, name: &str, e: &Entity) -> UsageError {
    UsageError::WrongKind { command: command.name(), kind: e.kind(), name: name.to_string() }
}

/// Maps, and convex functions through their subdifferential.
fn as_map(command: Command, name: &str, e: &Entity) -> std::result::Result<MultiMap, UsageError> {
    match e {
        Entity::Map(m) => Ok(m.clone()),
        Entity::Convex(g) => Ok(subdifferential(g)),
        other => Err(wrong_kind(command, name, other)),
    }
}

/// A construction result, or a report of the rejected precondition.
fn construction(
    command: Command,
    name: &str,
    result: crate::error::Result<String>,
) -> std::result::Result<Report, UsageError> {
    match result {
        Ok(text) => Ok(Report::success(command, name, text)),
        Err(Error::Rejected(v)) => Ok(Report::verdict(command, name, *v, "rejected: precondition fails".into())),
        Err(e) => Err(UsageError::Invalid(e.to_string())),
    }
}

fn grid(a: &Rat, b: &Rat, step: &Rat) -> std::result::Result<Vec<Rat>, UsageError> {
    if step <= &Rat::default() {
        return Err(UsageError::Invalid("--step must be positive".into()));
    }
    let count = ((b - a) / step).floor();
    if count > Rat::from_integer(100_000.into()) {
        return Err(UsageError::Invalid("--step gives more than 100000 rows".into()));
    }
    let mut out = Vec::new();
    let mut x = a.clone();
    while &x <= b {
        out.push(x.clone());
        x = &x + step;
    }
    Ok(out)
}

fn comparisons_report(command: Command, name: &str, comps: Vec<Comparison>, depth: u32) -> Report {
    let mut lines = Vec::new();
    let mut witnesses = Vec::new();
    for c in &comps {
        lines.push(format!(
            "{}: closed form {}, oracle {}, {}",
            c.property,
            c.closed_form.holds,
            c.oracle.holds,
            if c.agrees() { "agree" } else { "DISAGREE" }
        ));
        if !c.agrees() {
            witnesses.extend(c.oracle.witnesses.iter().chain(&c.closed_form.witnesses).cloned());
        }
    }
    lines.push(format!("depth: {depth}"));
    let all = comps.iter().all(Comparison::agrees);
    let mut v = Verdict::from_witnesses("closed forms agree with the definition-level oracles", witnesses);
    v.holds = all;
    Report::verdict(command, name, v, lines.join("\n"))
}

/// Run `command` on the entity `name` of `doc`.
pub fn run(command: Command, doc: &SpecDoc, name: &str, opts: &Options) -> std::result::Result<Report, UsageError> {
    let entity = doc.get(name).ok_or_else(|| UsageError::UnknownName(name.to_string()))?;
    let verdict = |v: Verdict, label: &str| {
        let summary = format!("{label}: {}", v.holds);
        Ok(Report::verdict(command, name, v, summary))
    };
    match (command, entity) {
        (Command::CheckQc, Entity::Function(f)) => verdict(is_quasicontinuous(f), "quasicontinuous"),
        (Command::CheckQc, Entity::Curve(c)) => verdict(planar_quasicontinuous(c), "quasicontinuous"),
        (Command::CheckSubcont, Entity::Function(f)) => verdict(is_subcontinuous(f), "subcontinuous"),
        (Command::CheckSubcont, Entity::Curve(_)) => {
            verdict(Verdict::pass("affine planar pieces have finite one-sided limits"), "subcontinuous")
        }
        (Command::CheckHpmin, Entity::Function(f)) => {
            let v = is_hyperplane_minimal(f);
            let qc = is_quasicontinuous(f).holds;
            let summary = format!("hyperplane minimal: {}; quasicontinuous: {qc}", v.holds);
            Ok(Report::verdict(command, name, v, summary))
        }
        (Command::CheckHpmin, Entity::Curve(c)) => {
            let v = planar_hyperplane_minimal(c);
            let qc = planar_quasicontinuous(c).holds;
            let summary = format!("hyperplane minimal: {}; quasicontinuous: {qc}", v.holds);
            Ok(Report::verdict(command, name, v, summary))
        }
        (Command::CheckUsco, e) => verdict(is_usco(&as_map(command, name, e)?), "usco"),
        (Command::CheckCusco, e) => verdict(is_cusco(&as_map(command, name, e)?), "cusco"),
        (Command::CheckMinUsco, e) => verdict(is_minimal_usco(&as_map(command, name, e)?), "minimal usco"),
        (Command::CheckMinCusco, e) => verdict(is_minimal_cusco(&as_map(command, name, e)?), "minimal cusco"),
        (Command::Csc, Entity::Function(f)) => {
            let x = opts.at.as_ref().ok_or(UsageError::MissingOption("csc", "at"))?;
            let v = csc(f, x).map_err(|e| UsageError::Invalid(e.to_string()))?;
            Ok(Report::success(command, name, v.to_string()))
        }
        (Command::ConstructMinCusco, Entity::Function(f)) => {
            construction(command, name, minimal_cusco_from(f).map(|m| serialize(&format!("{name}_cusco"), &Entity::Map(m))))
        }
        (Command::ConstructMinCusco, Entity::Curve(c)) => {
            construction(command, name, planar_minimal_cusco_from(c).map(|m| m.to_string()))
        }
        (Command::ExtractMinUsco, e) => {
            let m = as_map(command, name, e)?;
            construction(
                command,
                name,
                unique_minimal_usco(&m).map(|g| serialize(&format!("{name}_usco"), &Entity::Map(g.into_map()))),
            )
        }
        (Command::WithinMinUsco, e) => {
            let m = as_map(command, name, e)?;
            construction(
                command,
                name,
                minimal_usco_within(&m, opts.envelope).map(|g| serialize(&format!("{name}_usco"), &Entity::Map(g.into_map()))),
            )
        }
        (Command::WithinMinCusco, e) => {
            let m = as_map(command, name, e)?;
            construction(
                command,
                name,
                minimal_cusco_within(&m, opts.envelope).map(|h| serialize(&format!("{name}_cusco"), &Entity::Map(h))),
            )
        }
        (Command::Subdiff, Entity::Convex(g)) => {
            let d = subdifferential(g);
            let excluded: Vec<Rat> = differentiability_points(g).excluded.into_iter().collect();
            let mut out = serialize(&format!("{name}_subdiff"), &Entity::Map(d));
            out.push_str(&format!("# not differentiable at: {}\n", join(&excluded, " ")));
            Ok(Report::success(command, name, out))
        }
        (Command::OracleAgree, e) => {
            let comps = match e {
                Entity::Function(f) => compare_function(f, opts.depth),
                Entity::Curve(c) => compare_curve(c, opts.depth),
                Entity::Map(m) => compare_map(m, opts.depth),
                Entity::Convex(g) => compare_map(&subdifferential(g), opts.depth),
            };
            Ok(comparisons_report(command, name, comps, opts.depth))
        }
        (Command::Sample, e) => {
            let step = opts.step.as_ref().ok_or(UsageError::MissingOption("sample", "step"))?;
            sample(e, step).map(|csv| Report::success(command, name, csv))
        }
        (c, e) => Err(wrong_kind(c, name, e)),
    }
}

/// CSV rows on the grid `a, a + step, ...` up to `b`: `x,y` for functions and
/// curves (`x,px,py`), `x,lo,hi` per component for maps.
pub fn sample(e: &Entity, step: &Rat) -> std::result::Result<String, UsageError> {
    let invalid = |e: Error| UsageError::Invalid(e.to_string());
    let mut rows = Vec::new();
    match e {
        Entity::Function(f) => {
            rows.push("x,y".to_string());
            let (a, b) = f.domain();
            for x in grid(a, b, step)? {
                match f.eval(&x).map_err(invalid)? {
                    Some(y) => rows.push(format!("{x},{y}")),
                    None => rows.push(format!("{x},undefined")),
                }
            }
        }
        Entity::Convex(g) => {
            rows.push("x,y".to_string());
            let bps = g.breakpoints();
            for x in grid(&bps[0], &bps[bps.len() - 1], step)? {
                rows.push(format!("{x},{}", g.value_at(&x).map_err(invalid)?));
            }
        }
        Entity::Map(m) => {
            rows.push("x,lo,hi".to_string());
            let (a, b) = m.domain();
            for x in grid(a, b, step)? {
                for c in m.value_at(&x).map_err(invalid)?.components() {
                    rows.push(format!("{x},{},{}", c.lo(), c.hi()));
                }
            }
        }
        Entity::Curve(c) => {
            rows.push("x,px,py".to_string());
            let bps = c.breakpoints();
            for x in grid(&bps[0], &bps[bps.len() - 1], step)? {
                match c.eval(&x).map_err(invalid)? {
                    Some(p) => rows.push(format!("{x},{},{}", p.x, p.y)),
                    None => rows.push(format!("{x},undefined,undefined")),
                }
            }
        }
    }
    Ok(rows.join("\n") + "\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Corpus, MapKind};
    use crate::fixtures;
    use crate::rat::{int, rat};

    const JUMP: &str = "
        # -1 left of zero, 0 at zero, 1 right of zero
        function f
          breakpoints -2 0 2
          affine 0 -1
          affine 0 1
          at -2 = -1
          at 0 = 0
          at 2 = 1
        end
    ";

    #[test]
    fn parses_the_jump_function() {
        let doc = parse_spec(JUMP).unwrap();
        assert_eq!(doc.get("f"), Some(&Entity::Function(fixtures::jump_function())));
    }

    #[test]
    fn empty_file_has_no_entities() {
        let e = parse_spec("# nothing\n\n").unwrap_err();
        assert_eq!(e.to_string(), "no entities");
    }

    #[test]
    fn decreasing_breakpoints_report_their_line() {
        let e = parse_spec("function f\n  breakpoints 0 2 1\n  affine 0 0\n  affine 0 0\nend\n").unwrap_err();
        assert_eq!(e.0[0].line, 2);
        assert!(e.0[0].message.contains("increase strictly"));
    }

    #[test]
    fn diagnostics_are_collected() {
        let text = "function f\n  breakpoints 0 1\n  recip 1/2 1 0\n  at 0 = 0\n  at 1 = x\nend\nmap F lower=f upper=nope\nbogus\n";
        let e = parse_spec(text).unwrap_err();
        let lines: Vec<usize> = e.0.iter().map(|d| d.line).collect();
        assert!(lines.contains(&3), "{e}");
        assert!(lines.contains(&5), "{e}");
        assert!(lines.contains(&7), "{e}");
        assert!(lines.contains(&8), "{e}");
    }

    #[test]
    fn map_between_and_blocks() {
        let text = format!(
            "{JUMP}\nfunction g\n breakpoints -2 2\n affine 0 3\n at -2 = 3\n at 2 = 3\nend\nmap F lower=f upper=g\n\
             map G\n breakpoints 0 1\n piece affine 0 0 .. affine 0 1 | recip 2 -1 2\n at 0 = [0, 1] 3/2\n at 1 = [0,1] 3\nend\n"
        );
        let doc = parse_spec(&text).unwrap();
        let Some(Entity::Map(g)) = doc.get("G") else { panic!() };
        assert_eq!(g.bands()[0].len(), 2);
        assert_eq!(g.values()[0].to_string(), "[0,1] 3/2");
        assert!(matches!(doc.get("F"), Some(Entity::Map(_))));
    }

    #[test]
    fn curves_and_convex() {
        let text = "curve c\n breakpoints -1 0 1\n const (0,0)\n line (1, 1) (0,0)\n at -1 = (0,0)\n at 0 = (0,0)\n at 1 undefined\nend\n\
                    convex g breakpoints=[-1, 0, 1] slopes=[-1,1] anchor=1\n";
        let doc = parse_spec(text).unwrap();
        let Some(Entity::Curve(c)) = doc.get("c") else { panic!() };
        assert_eq!(c.values()[2], None);
        let Some(Entity::Convex(g)) = doc.get("g") else { panic!() };
        assert_eq!(g.value_at(&int(0)).unwrap(), int(0));
    }

    #[test]
    fn serialization_roundtrips_over_the_corpus() {
        let mut c = Corpus::new(11);
        let mut doc = SpecDoc::default();
        for k in 0..40 {
            doc.push(format!("f{k}"), Entity::Function(c.function()));
            doc.push(format!("m{k}"), Entity::Map(c.convex_map(MapKind::Cusco)));
            doc.push(format!("u{k}"), Entity::Map(c.multi_band_map(k % 2 == 0)));
            doc.push(format!("c{k}"), Entity::Curve(c.curve()));
            doc.push(format!("g{k}"), Entity::Convex(c.convex_pw_affine()));
        }
        let text: String = doc.entities().iter().map(|(n, e)| serialize(n, e)).collect();
        assert_eq!(parse_spec(&text).unwrap(), doc);
    }

    #[test]
    fn hpmin_report_mentions_both_properties() {
        let doc = parse_spec(JUMP).unwrap();
        let r = run(Command::CheckHpmin, &doc, "f", &Options::default()).unwrap();
        assert_eq!(r.exit_code, 0);
        assert!(r.output.contains("hyperplane minimal: true; quasicontinuous: false"));
        let r = run(Command::CheckQc, &doc, "f", &Options::default()).unwrap();
        assert_eq!(r.exit_code, 1);
        assert_eq!(r.to_json()["verdict"]["witnesses"][0]["point"], "0");
    }

    #[test]
    fn csc_and_sampling() {
        let mut doc = SpecDoc::default();
        doc.push("f", Entity::Function(fixtures::blowup_function()));
        doc.push("F", Entity::Map(fixtures::constant_map(int(0), int(1), int(0), int(1))));
        let opts = Options { at: Some(int(0)), step: Some(rat(1, 4)), ..Options::default() };
        assert_eq!(run(Command::Csc, &doc, "f", &opts).unwrap().output, "[0, +inf)");
        let csv = run(Command::Sample, &doc, "F", &opts).unwrap().output;
        let rows: Vec<&str> = csv.lines().skip(1).collect();
        assert_eq!(rows, vec!["0,0,1", "1/4,0,1", "1/2,0,1", "3/4,0,1", "1,0,1"]);
    }

    #[test]
    fn rejected_constructions_exit_one() {
        let mut doc = SpecDoc::default();
        doc.push("f", Entity::Function(fixtures::blowup_function()));
        let r = run(Command::ConstructMinCusco, &doc, "f", &Options::default()).unwrap();
        assert_eq!(r.exit_code, 1);
        assert!(run(Command::Subdiff, &doc, "f", &Options::default()).is_err());
        assert!(run(Command::Csc, &doc, "f", &Options::default()).is_err());
        assert!(run(Command::Csc, &doc, "nope", &Options::default()).is_err());
    }
}
