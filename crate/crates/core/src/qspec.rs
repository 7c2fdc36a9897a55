//! The `.quiv` text format: algebras (raw quivers with relations, Nakayama
//! constructors, gluing specifications) and modules, plus the JSON and
//! markdown report renderings.
//!
//! The grammar is line-oriented with `;` terminators and `#` comments. A
//! relation path `a.b.c` applies `a` first. Scalars are integers or `p/q`
//! fractions; floating literals are rejected.

use crate::field::{FieldSpec, Scalar};
use crate::gorenstein::{GorensteinReport, GorensteinVerdict, StableHomTable};
use crate::glue::{CheckRecord, DecompositionEvidence, GdStepRecord, RecollementWitness};
use crate::homalg::DimensionCertificate;
use crate::linalg::Mat;
use crate::quiver::{
    build_algebra, build_gluing, nakayama_cyclic, nakayama_linear, BoundAlgebra, CompVertex,
    GluingBuild, GluingPlan, MonomialIdeal, Path, PlanStep, Quiver,
};
use crate::rep::Representation;
use serde_json::{json, Map, Value};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A parsed algebra source: either a plain bound quiver algebra or a gluing
/// with its construction history.
pub enum ParsedSource {
    Plain(Arc<BoundAlgebra>),
    Glued(GluingBuild),
}

impl ParsedSource {
    pub fn algebra(&self) -> &Arc<BoundAlgebra> {
        match self {
            ParsedSource::Plain(a) => a,
            ParsedSource::Glued(b) => &b.algebra,
        }
    }

    pub fn gluing(&self) -> Option<&GluingBuild> {
        match self {
            ParsedSource::Plain(_) => None,
            ParsedSource::Glued(b) => Some(b),
        }
    }
}

pub struct ParseOutcome {
    pub name: Option<String>,
    pub source: ParsedSource,
}

impl fmt::Debug for ParseOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.source {
            ParsedSource::Plain(_) => "plain",
            ParsedSource::Glued(_) => "glued",
        };
        write!(
            f,
            "ParseOutcome({kind} algebra of dimension {}, name {:?})",
            self.source.algebra().dimension(),
            self.name
        )
    }
}

// ---------------------------------------------------------------------------
// tokenizer
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
enum TokKind {
    Word,
    Punct,
}

#[derive(Clone, Debug)]
struct Tok {
    text: String,
    kind: TokKind,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Result<Vec<Tok>, ParseError> {
    let mut toks = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = match line.find('#') {
            Some(p) => &line[..p],
            None => line,
        };
        let mut chars = line.char_indices().peekable();
        while let Some(&(i, c)) = chars.peek() {
            if c.is_whitespace() {
                chars.next();
                continue;
            }
            let (line_no, col_no) = (ln + 1, i + 1);
            if c.is_alphanumeric() || c == '_' || c == '\'' {
                let mut word = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' || c == '\'' {
                        word.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push(Tok {
                    text: word,
                    kind: TokKind::Word,
                    line: line_no,
                    col: col_no,
                });
            } else if c == '-' {
                chars.next();
                if let Some(&(_, '>')) = chars.peek() {
                    chars.next();
                    toks.push(Tok {
                        text: "->".into(),
                        kind: TokKind::Punct,
                        line: line_no,
                        col: col_no,
                    });
                } else {
                    toks.push(Tok {
                        text: "-".into(),
                        kind: TokKind::Punct,
                        line: line_no,
                        col: col_no,
                    });
                }
            } else if ";:,.={}[]/".contains(c) {
                chars.next();
                toks.push(Tok {
                    text: c.to_string(),
                    kind: TokKind::Punct,
                    line: line_no,
                    col: col_no,
                });
            } else {
                return Err(ParseError {
                    line: line_no,
                    col: col_no,
                    message: format!("unexpected character `{c}`"),
                });
            }
        }
    }
    Ok(toks)
}

// ---------------------------------------------------------------------------
// parser
// ---------------------------------------------------------------------------

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    field: FieldSpec,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn at_word(&self, w: &str) -> bool {
        self.peek().is_some_and(|t| t.kind == TokKind::Word && t.text == w)
    }

    fn at_punct(&self, p: &str) -> bool {
        self.peek().is_some_and(|t| t.kind == TokKind::Punct && t.text == p)
    }

    fn here(&self) -> (usize, usize) {
        self.peek()
            .map(|t| (t.line, t.col))
            .unwrap_or_else(|| {
                self.toks
                    .last()
                    .map(|t| (t.line, t.col + t.text.len()))
                    .unwrap_or((1, 1))
            })
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError {
            line,
            col,
            message: message.into(),
        })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_word(&mut self) -> Result<Tok, ParseError> {
        match self.peek() {
            Some(t) if t.kind == TokKind::Word => Ok(self.bump().unwrap()),
            Some(t) => {
                let msg = format!("expected a name, found `{}`", t.text);
                self.err(msg)
            }
            None => self.err("expected a name, found end of input"),
        }
    }

    fn expect_punct(&mut self, p: &str) -> Result<(), ParseError> {
        if self.at_punct(p) {
            self.bump();
            Ok(())
        } else {
            match self.peek() {
                Some(t) => {
                    let msg = format!("expected `{p}`, found `{}`", t.text);
                    self.err(msg)
                }
                None => self.err(format!("expected `{p}`, found end of input")),
            }
        }
    }

    fn expect_keyword(&mut self, w: &str) -> Result<(), ParseError> {
        if self.at_word(w) {
            self.bump();
            Ok(())
        } else {
            match self.peek() {
                Some(t) => {
                    let msg = format!("expected `{w}`, found `{}`", t.text);
                    self.err(msg)
                }
                None => self.err(format!("expected `{w}`, found end of input")),
            }
        }
    }

    /// Statement terminator: `;` is consumed when present; closing braces and
    /// end of input also terminate.
    fn end_stmt(&mut self) -> Result<(), ParseError> {
        if self.at_punct(";") {
            self.bump();
            Ok(())
        } else if self.at_punct("}") || self.peek().is_none() {
            Ok(())
        } else {
            match self.peek() {
                Some(t) => {
                    let msg = format!("expected `;`, found `{}`", t.text);
                    self.err(msg)
                }
                None => unreachable!(),
            }
        }
    }

    fn expect_number(&mut self) -> Result<usize, ParseError> {
        let t = self.expect_word()?;
        t.text.parse().map_err(|_| ParseError {
            line: t.line,
            col: t.col,
            message: format!("expected a number, found `{}`", t.text),
        })
    }

    fn key_number(&mut self, key: &str) -> Result<usize, ParseError> {
        self.expect_keyword(key)?;
        self.expect_punct("=")?;
        self.expect_number()
    }
}

struct RawSections {
    vertices: Vec<String>,
    arrows: Vec<(String, String, String)>,
    relations: Vec<Vec<String>>,
}

impl Parser {
    /// `vertices: ...;` / `arrows: ...;` / `relations: ...;` until a closing
    /// brace or end of input.
    fn parse_sections(&mut self) -> Result<RawSections, ParseError> {
        let mut out = RawSections {
            vertices: Vec::new(),
            arrows: Vec::new(),
            relations: Vec::new(),
        };
        loop {
            if self.at_word("vertices") {
                self.bump();
                self.expect_punct(":")?;
                while self.peek().is_some_and(|t| t.kind == TokKind::Word) {
                    out.vertices.push(self.bump().unwrap().text);
                }
                self.end_stmt()?;
            } else if self.at_word("arrows") {
                self.bump();
                self.expect_punct(":")?;
                loop {
                    let label = self.expect_word()?.text;
                    self.expect_punct(":")?;
                    let src = self.expect_word()?.text;
                    self.expect_punct("->")?;
                    let tgt = self.expect_word()?.text;
                    out.arrows.push((label, src, tgt));
                    if self.at_punct(",") {
                        self.bump();
                    } else {
                        break;
                    }
                }
                self.end_stmt()?;
            } else if self.at_word("relations") {
                self.bump();
                self.expect_punct(":")?;
                loop {
                    let mut path = vec![self.expect_word()?.text];
                    while self.at_punct(".") {
                        self.bump();
                        path.push(self.expect_word()?.text);
                    }
                    out.relations.push(path);
                    if self.at_punct(",") {
                        self.bump();
                    } else {
                        break;
                    }
                }
                self.end_stmt()?;
            } else {
                return Ok(out);
            }
        }
    }

    fn build_plain(&self, sections: RawSections) -> Result<Arc<BoundAlgebra>, ParseError> {
        let (line, col) = self.here();
        let wrap = |message: String| ParseError { line, col, message };
        let quiver = Quiver::new(sections.vertices, sections.arrows)
            .map_err(|e| wrap(e.to_string()))?;
        let mut gens = Vec::new();
        for rel in &sections.relations {
            let labels: Vec<&str> = rel.iter().map(String::as_str).collect();
            gens.push(Path::from_labels(&quiver, &labels).map_err(|e| wrap(e.to_string()))?);
        }
        let ideal = MonomialIdeal::new(&quiver, gens).map_err(|e| wrap(e.to_string()))?;
        let algebra = build_algebra(quiver, ideal, self.field).map_err(|e| wrap(e.to_string()))?;
        Ok(Arc::new(algebra))
    }

    fn parse_nakayama(&mut self) -> Result<Arc<BoundAlgebra>, ParseError> {
        self.expect_keyword("nakayama")?;
        let (line, col) = self.here();
        let wrap = |message: String| ParseError { line, col, message };
        if self.at_word("cyclic") {
            self.bump();
            let n = self.key_number("n")?;
            let len = self.key_number("len")?;
            Ok(Arc::new(
                nakayama_cyclic(n, len, self.field).map_err(|e| wrap(e.to_string()))?,
            ))
        } else if self.at_word("linear") {
            self.bump();
            let n = self.key_number("n")?;
            let mut rels = Vec::new();
            if self.at_word("rels") {
                self.bump();
                self.expect_punct("=")?;
                self.expect_punct("[")?;
                if !self.at_punct("]") {
                    loop {
                        let start = self.expect_number()?;
                        self.expect_punct(":")?;
                        let len = self.expect_number()?;
                        rels.push((start, len));
                        if self.at_punct(",") {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect_punct("]")?;
            }
            Ok(Arc::new(
                nakayama_linear(n, &rels, self.field).map_err(|e| wrap(e.to_string()))?,
            ))
        } else {
            self.err("expected `cyclic` or `linear` after `nakayama`")
        }
    }

    fn parse_comp_vertex(
        &mut self,
        comps: &[(String, Arc<BoundAlgebra>)],
    ) -> Result<CompVertex, ParseError> {
        let name = self.expect_word()?;
        self.expect_punct(".")?;
        let vertex = self.expect_word()?;
        let comp = comps
            .iter()
            .position(|(n, _)| *n == name.text)
            .ok_or_else(|| ParseError {
                line: name.line,
                col: name.col,
                message: format!("unknown component `{}`", name.text),
            })?;
        // component algebras carry prefixed labels
        let label = format!("{}.{}", name.text, vertex.text);
        let vid = comps[comp]
            .1
            .quiver()
            .vertex_index(&label)
            .ok_or_else(|| ParseError {
                line: vertex.line,
                col: vertex.col,
                message: format!("component `{}` has no vertex `{}`", name.text, vertex.text),
            })?;
        Ok(CompVertex { comp, vertex: vid })
    }

    fn parse_glue(&mut self) -> Result<GluingBuild, ParseError> {
        self.expect_keyword("glue")?;
        // optional name before the brace
        if self.peek().is_some_and(|t| t.kind == TokKind::Word) {
            self.bump();
        }
        self.expect_punct("{")?;
        let mut comps: Vec<(String, Arc<BoundAlgebra>)> = Vec::new();
        let mut steps: Vec<PlanStep> = Vec::new();
        loop {
            if self.at_punct("}") {
                self.bump();
                break;
            }
            if self.at_word("comp") {
                self.bump();
                let name = self.expect_word()?;
                if comps.iter().any(|(n, _)| *n == name.text) {
                    return Err(ParseError {
                        line: name.line,
                        col: name.col,
                        message: format!("duplicate component `{}`", name.text),
                    });
                }
                self.expect_punct("=")?;
                let algebra = if self.at_word("nakayama") {
                    self.parse_nakayama()?
                } else if self.at_word("algebra") {
                    self.bump();
                    self.expect_punct("{")?;
                    let sections = self.parse_sections()?;
                    let built = self.build_plain(sections)?;
                    self.expect_punct("}")?;
                    built
                } else if self.at_word("glue") {
                    let inner = self.parse_glue()?;
                    inner.algebra
                } else {
                    return self.err("expected `nakayama`, `algebra {`, or `glue {` after `=`");
                };
                comps.push((
                    name.text.clone(),
                    Arc::new(algebra.with_prefixed_labels(&name.text)),
                ));
                self.end_stmt()?;
            } else if self.at_word("identify") {
                self.bump();
                let a = self.parse_comp_vertex(&comps)?;
                self.expect_punct("=")?;
                let b = self.parse_comp_vertex(&comps)?;
                steps.push(PlanStep::Identify { a, b });
                self.end_stmt()?;
            } else if self.at_word("connect") {
                self.bump();
                let from = self.parse_comp_vertex(&comps)?;
                self.expect_punct("->")?;
                let to = self.parse_comp_vertex(&comps)?;
                steps.push(PlanStep::Connect { from, to });
                self.end_stmt()?;
            } else {
                return self.err("expected `comp`, `identify`, `connect`, or `}`");
            }
        }
        let (line, col) = self.here();
        build_gluing(&GluingPlan {
            components: comps,
            steps,
        })
        .map_err(|e| ParseError {
            line,
            col,
            message: e.to_string(),
        })
    }
}

/// Parses one algebra source: a raw `algebra` block, a `nakayama`
/// constructor, or a `glue` specification.
pub fn parse_algebra(text: &str, field: FieldSpec) -> Result<ParseOutcome, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        field,
    };
    let outcome = if p.at_word("algebra") {
        p.bump();
        let name = p.expect_word()?.text;
        p.end_stmt()?;
        let sections = p.parse_sections()?;
        ParseOutcome {
            name: Some(name),
            source: ParsedSource::Plain(p.build_plain(sections)?),
        }
    } else if p.at_word("nakayama") {
        let a = p.parse_nakayama()?;
        p.end_stmt()?;
        ParseOutcome {
            name: None,
            source: ParsedSource::Plain(a),
        }
    } else if p.at_word("glue") {
        // capture the optional name
        let name = p
            .toks
            .get(p.pos + 1)
            .filter(|t| t.kind == TokKind::Word)
            .map(|t| t.text.clone());
        let build = p.parse_glue()?;
        p.end_stmt()?;
        ParseOutcome {
            name,
            source: ParsedSource::Glued(build),
        }
    } else {
        return p.err("expected `algebra`, `nakayama`, or `glue`");
    };
    match p.peek() {
        None => Ok(outcome),
        Some(t) => Err(ParseError {
            line: t.line,
            col: t.col,
            message: format!("unexpected trailing input `{}`", t.text),
        }),
    }
}

/// Parses a module over a known algebra: `dim <vertex> = <n>;` and
/// `map <arrow> = [[..], ..];` statements, defaulting to zero.
pub fn parse_module(
    text: &str,
    algebra: &Arc<BoundAlgebra>,
) -> Result<Representation, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        field: algebra.field(),
    };
    if p.at_word("module") {
        p.bump();
        p.expect_word()?;
        if p.at_word("over") {
            p.bump();
            p.expect_word()?;
        }
        p.end_stmt()?;
    }
    // rows of a declared matrix plus the line and column it started at
    type RawMat = (Vec<Vec<Scalar>>, usize, usize);
    let nv = algebra.quiver().vertex_count();
    let mut dims = vec![0usize; nv];
    let mut raw_maps: Vec<Option<RawMat>> = vec![None; algebra.quiver().arrow_count()];
    while p.peek().is_some() {
        if p.at_word("dim") {
            p.bump();
            let v = p.expect_word()?;
            let vid = algebra
                .quiver()
                .vertex_index(&v.text)
                .ok_or_else(|| ParseError {
                    line: v.line,
                    col: v.col,
                    message: format!("unknown vertex `{}`", v.text),
                })?;
            p.expect_punct("=")?;
            dims[vid] = p.expect_number()?;
            p.end_stmt()?;
        } else if p.at_word("map") {
            p.bump();
            let a = p.expect_word()?;
            let aid = algebra
                .quiver()
                .arrow_index(&a.text)
                .ok_or_else(|| ParseError {
                    line: a.line,
                    col: a.col,
                    message: format!("unknown arrow `{}`", a.text),
                })?;
            p.expect_punct("=")?;
            let rows = parse_matrix(&mut p)?;
            raw_maps[aid] = Some((rows, a.line, a.col));
            p.end_stmt()?;
        } else {
            return p.err("expected `dim` or `map`");
        }
    }
    let field = algebra.field();
    let mut maps = Vec::with_capacity(raw_maps.len());
    for (aid, raw) in raw_maps.into_iter().enumerate() {
        let ar = algebra.quiver().arrow(aid);
        let (r, c) = (dims[ar.target], dims[ar.source]);
        match raw {
            None => maps.push(Mat::zero(field, r, c)),
            Some((rows, line, col)) => {
                let shape_err = |msg: String| ParseError {
                    line,
                    col,
                    message: msg,
                };
                if rows.len() != r || rows.iter().any(|row| row.len() != c) {
                    return Err(shape_err(format!(
                        "map `{}` needs a {}x{} matrix (rows = dim at target `{}`, cols = dim at source `{}`)",
                        ar.label,
                        r,
                        c,
                        algebra.quiver().vertex_label(ar.target),
                        algebra.quiver().vertex_label(ar.source)
                    )));
                }
                maps.push(Mat::from_rows(field, rows));
            }
        }
    }
    let rep = Representation::new(algebra.clone(), dims, maps).map_err(|e| ParseError {
        line: 1,
        col: 1,
        message: e.to_string(),
    })?;
    rep.validate().map_err(|e| ParseError {
        line: 1,
        col: 1,
        message: e.to_string(),
    })?;
    Ok(rep)
}

fn parse_scalar(p: &mut Parser) -> Result<Scalar, ParseError> {
    let negative = if p.at_punct("-") {
        p.bump();
        true
    } else {
        false
    };
    let t = p.expect_word()?;
    let num: i64 = t.text.parse().map_err(|_| ParseError {
        line: t.line,
        col: t.col,
        message: format!("expected an integer or `p/q`, found `{}`", t.text),
    })?;
    let num = if negative { -num } else { num };
    if p.at_punct("/") {
        p.bump();
        let d = p.expect_word()?;
        let den: i64 = d.text.parse().map_err(|_| ParseError {
            line: d.line,
            col: d.col,
            message: format!("expected a denominator, found `{}`", d.text),
        })?;
        p.field.from_ratio(num, den).ok_or(ParseError {
            line: d.line,
            col: d.col,
            message: "zero denominator".into(),
        })
    } else {
        Ok(p.field.from_int(num))
    }
}

fn parse_matrix(p: &mut Parser) -> Result<Vec<Vec<Scalar>>, ParseError> {
    p.expect_punct("[")?;
    let mut rows = Vec::new();
    if !p.at_punct("]") {
        loop {
            p.expect_punct("[")?;
            let mut row = Vec::new();
            if !p.at_punct("]") {
                loop {
                    row.push(parse_scalar(p)?);
                    if p.at_punct(",") {
                        p.bump();
                    } else {
                        break;
                    }
                }
            }
            p.expect_punct("]")?;
            rows.push(row);
            if p.at_punct(",") {
                p.bump();
            } else {
                break;
            }
        }
    }
    p.expect_punct("]")?;
    Ok(rows)
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

/// Canonical `.quiv` rendering of an algebra as a raw block.
pub fn serialize_algebra(a: &BoundAlgebra, name: &str) -> String {
    let q = a.quiver();
    let mut out = format!("algebra {name};\n");
    out.push_str(&format!("vertices: {};\n", q.vertex_labels().join(" ")));
    if q.arrow_count() > 0 {
        let arrows: Vec<String> = q
            .arrows()
            .iter()
            .map(|ar| {
                format!(
                    "{}: {} -> {}",
                    ar.label,
                    q.vertex_label(ar.source),
                    q.vertex_label(ar.target)
                )
            })
            .collect();
        out.push_str(&format!("arrows: {};\n", arrows.join(", ")));
    }
    if !a.ideal().generators().is_empty() {
        let rels: Vec<String> = a
            .ideal()
            .generators()
            .iter()
            .map(|g| g.display(q))
            .collect();
        out.push_str(&format!("relations: {};\n", rels.join(", ")));
    }
    out
}

/// Canonical module rendering; parses back to an equal representation.
pub fn serialize_module(m: &Representation, name: &str) -> String {
    let q = m.algebra().quiver();
    let mut out = format!("module {name};\n");
    for v in 0..q.vertex_count() {
        if m.dim_at(v) > 0 {
            out.push_str(&format!("dim {} = {};\n", q.vertex_label(v), m.dim_at(v)));
        }
    }
    for a in 0..q.arrow_count() {
        let mat = m.map(a);
        if mat.is_zero() || mat.rows() == 0 || mat.cols() == 0 {
            continue;
        }
        let rows: Vec<String> = (0..mat.rows())
            .map(|i| {
                let cells: Vec<String> =
                    (0..mat.cols()).map(|j| mat.get(i, j).to_string()).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        out.push_str(&format!(
            "map {} = [{}];\n",
            q.arrow(a).label,
            rows.join(", ")
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// reports
// ---------------------------------------------------------------------------

pub fn algebra_summary(a: &BoundAlgebra, gluing: Option<&GluingBuild>) -> Value {
    let q = a.quiver();
    let mut m = Map::new();
    m.insert("vertices".into(), json!(q.vertex_count()));
    m.insert("arrows".into(), json!(q.arrow_count()));
    m.insert("dimension".into(), json!(a.dimension()));
    m.insert("field".into(), json!(a.field().name()));
    m.insert("nakayama".into(), json!(a.is_nakayama()));
    m.insert("max_path_length".into(), json!(a.max_path_length()));
    m.insert(
        "relations".into(),
        json!(a
            .ideal()
            .generators()
            .iter()
            .map(|g| g.display(q))
            .collect::<Vec<_>>()),
    );
    if let Some(build) = gluing {
        m.insert(
            "components".into(),
            json!(build
                .components
                .iter()
                .map(|(n, alg)| json!({ "name": n, "dimension": alg.dimension() }))
                .collect::<Vec<_>>()),
        );
        let cross: Vec<String> = build
            .cross_component_paths()
            .into_iter()
            .map(|i| a.basis()[i].display(q))
            .collect();
        m.insert("cross_component_paths".into(), json!(cross));
    }
    Value::Object(m)
}

pub fn certificate_value(c: &DimensionCertificate) -> Value {
    match c {
        DimensionCertificate::Finite(n) => json!({ "kind": "finite", "value": n }),
        DimensionCertificate::Infinite { lower, upper, witness } => json!({
            "kind": "infinite",
            "recurring_summand_dims": witness.source().dims(),
            "first_level": lower,
            "recurrence_level": upper,
            "witness_reverified": c.reverify(),
        }),
        DimensionCertificate::Undetermined { bound } => {
            json!({ "kind": "undetermined", "bound": bound })
        }
    }
}

pub fn gorenstein_value(r: &GorensteinReport, a: &BoundAlgebra) -> Value {
    let q = a.quiver();
    let mut m = Map::new();
    match &r.verdict {
        GorensteinVerdict::Gorenstein { gd } => {
            m.insert("gorenstein".into(), json!(true));
            m.insert("gd".into(), json!(gd));
        }
        GorensteinVerdict::NotGorenstein => {
            m.insert("gorenstein".into(), json!(false));
        }
        GorensteinVerdict::Unknown { bound } => {
            m.insert("gorenstein".into(), Value::Null);
            m.insert("unknown_at_bound".into(), json!(bound));
        }
    }
    m.insert("bound".into(), json!(r.bound));
    let table = |certs: &[DimensionCertificate]| -> Value {
        Value::Array(
            certs
                .iter()
                .enumerate()
                .map(|(v, c)| {
                    json!({
                        "vertex": q.vertex_label(v),
                        "certificate": certificate_value(c),
                    })
                })
                .collect(),
        )
    };
    m.insert(
        "inj_dim_of_projectives".into(),
        table(&r.inj_dim_projectives),
    );
    m.insert(
        "proj_dim_of_injectives".into(),
        table(&r.proj_dim_injectives),
    );
    Value::Object(m)
}

pub fn stable_table_value(t: &StableHomTable) -> Value {
    json!({
        "labels": t.labels,
        "dims": t.dims,
    })
}

pub fn recollement_value(w: &RecollementWitness) -> Value {
    // aggregate per check name, deterministically ordered
    let mut counts: std::collections::BTreeMap<String, usize> = Default::default();
    for CheckRecord { check, .. } in &w.records {
        *counts.entry(check.clone()).or_default() += 1;
    }
    json!({
        "sample_size": w.sample_size,
        "seed": w.seed,
        "checks": counts,
        "total_records": w.records.len(),
    })
}

pub fn decomposition_value(ev: &DecompositionEvidence) -> Value {
    json!({
        "components": ev.component_names,
        "component_gds": ev.component_gds,
        "gamma_gd": ev.gamma_gd,
        "block_sizes": ev.block_sizes,
        "total_objects": ev.total_objects,
        "union_stable_table": stable_table_value(&ev.union_table),
        "component_tables": ev.component_tables.iter().map(stable_table_value).collect::<Vec<_>>(),
        "complete": ev.complete,
    })
}

pub fn gd_records_value(records: &[GdStepRecord]) -> Value {
    Value::Array(
        records
            .iter()
            .map(|r| {
                json!({
                    "step": r.step,
                    "kind": r.kind,
                    "gd_before": r.gd_before,
                    "gd_component": r.gd_comp,
                    "gd_after": r.gd_after,
                    "exact_equality": r.exact_equality,
                })
            })
            .collect(),
    )
}

/// Assembles the versioned report document.
pub fn report_document(
    config: Value,
    algebra: Value,
    certificates: Value,
    tables: Value,
    verdicts: Value,
) -> Value {
    json!({
        "schema": 1,
        "config": config,
        "algebra": algebra,
        "certificates": certificates,
        "tables": tables,
        "verdicts": verdicts,
    })
}

/// Deterministic JSON rendering (sorted keys, two-space indentation).
pub fn to_json_string(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

/// Markdown rendering of a report document.
pub fn to_markdown(v: &Value) -> String {
    let mut out = String::new();
    out.push_str("# gprojlab report\n\n");
    render_md(v, 0, &mut out);
    out
}

fn render_md(v: &Value, depth: usize, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Object(_) | Value::Array(_) if !is_scalar_array(val) => {
                        out.push_str(&format!(
                            "{} {}\n\n",
                            "#".repeat((depth + 2).min(6)),
                            k
                        ));
                        render_md(val, depth + 1, out);
                    }
                    _ => {
                        out.push_str(&format!("- **{k}**: {}\n", inline_md(val)));
                    }
                }
            }
            out.push('\n');
        }
        Value::Array(items) => {
            if let Some(table) = try_table(items) {
                out.push_str(&table);
                out.push('\n');
            } else {
                for item in items {
                    match item {
                        Value::Object(_) | Value::Array(_) => render_md(item, depth + 1, out),
                        _ => out.push_str(&format!("- {}\n", inline_md(item))),
                    }
                }
                out.push('\n');
            }
        }
        other => {
            out.push_str(&format!("{}\n", inline_md(other)));
        }
    }
}

fn is_scalar_array(v: &Value) -> bool {
    matches!(v, Value::Array(items) if items.iter().all(|i| !matches!(i, Value::Object(_) | Value::Array(_))))
}

fn inline_md(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let cells: Vec<String> = items.iter().map(inline_md).collect();
            format!("[{}]", cells.join(", "))
        }
        other => other.to_string(),
    }
}

/// Arrays of uniform flat objects render as a markdown table.
fn try_table(items: &[Value]) -> Option<String> {
    if items.is_empty() {
        return None;
    }
    let first = items.first()?.as_object()?;
    let keys: Vec<&String> = first.keys().collect();
    let mut rows = Vec::new();
    for item in items {
        let obj = item.as_object()?;
        if obj.keys().collect::<Vec<_>>() != keys {
            return None;
        }
        let row: Vec<String> = keys
            .iter()
            .map(|k| match &obj[k.as_str()] {
                v @ Value::Object(_) => inline_md(&Value::String(
                    v.as_object()
                        .map(|o| {
                            o.iter()
                                .map(|(k, v)| format!("{k}={}", inline_md(v)))
                                .collect::<Vec<_>>()
                                .join(" ")
                        })
                        .unwrap_or_default(),
                )),
                v => inline_md(v),
            })
            .collect();
        rows.push(row);
    }
    let mut out = String::new();
    out.push_str(&format!(
        "| {} |\n",
        keys.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(" | ")
    ));
    out.push_str(&format!("|{}\n", " --- |".repeat(keys.len())));
    for row in rows {
        out.push_str(&format!("| {} |\n", row.join(" | ")));
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gorenstein::gorenstein_report_default;
    use proptest::prelude::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn parse_hereditary_a2() {
        let out = parse_algebra("algebra A; vertices: 1 2; arrows: a: 2 -> 1;", Q).unwrap();
        let a = out.source.algebra();
        assert_eq!(a.dimension(), 3);
        assert_eq!(out.name.as_deref(), Some("A"));
    }

    #[test]
    fn parse_nakayama_forms() {
        let out = parse_algebra("nakayama cyclic n=3 len=2", Q).unwrap();
        assert_eq!(out.source.algebra().dimension(), 6);
        let out = parse_algebra("nakayama linear n=3 rels=[3:2];", Q).unwrap();
        assert_eq!(out.source.algebra().dimension(), 5);
    }

    #[test]
    fn parse_glue_of_two_cycles() {
        let text = "glue G {\n  comp X = nakayama cyclic n=3 len=2;\n  comp Y = nakayama cyclic n=3 len=2;\n  identify X.1 = Y.1;\n}";
        let out = parse_algebra(text, Q).unwrap();
        let build = out.source.gluing().unwrap();
        assert_eq!(build.components.len(), 2);
        assert_eq!(out.source.algebra().quiver().vertex_count(), 5);
        assert_eq!(out.source.algebra().dimension(), 13);
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = parse_algebra("algebra A; vertices: 1 2; arrows: a: 2 -> 3;", Q).unwrap_err();
        assert!(err.line >= 1 && err.col >= 1);
        assert!(err.message.contains("unknown vertex") || err.message.contains('3'));

        let err = parse_algebra("glue G { comp X = nakayama cyclic n=3 len=2; identify X.1 = Z.1; }", Q)
            .unwrap_err();
        assert!(err.message.contains("unknown component"));

        let err = parse_algebra("algebra A; vertices: 1; arrows: x: 1 -> 1;", Q).unwrap_err();
        assert!(err.message.contains("not admissible"));
    }

    #[test]
    fn parse_relations() {
        let text = "algebra B; vertices: 1 2 3; arrows: a: 1 -> 2, b: 2 -> 3; relations: a.b;";
        let out = parse_algebra(text, Q).unwrap();
        assert_eq!(out.source.algebra().dimension(), 5);
    }

    #[test]
    fn algebra_round_trip() {
        for text in [
            "algebra A; vertices: 1 2; arrows: a: 2 -> 1;",
            "algebra B; vertices: 1 2 3; arrows: a: 1 -> 2, b: 2 -> 3; relations: a.b;",
        ] {
            let out = parse_algebra(text, Q).unwrap();
            let canon = serialize_algebra(out.source.algebra(), "A");
            let reparsed = parse_algebra(&canon, Q).unwrap();
            assert_eq!(**reparsed.source.algebra(), **out.source.algebra());
            // serialize is idempotent on its own output
            assert_eq!(serialize_algebra(reparsed.source.algebra(), "A"), canon);
        }
    }

    #[test]
    fn module_parsing_and_round_trip() {
        let out = parse_algebra("nakayama cyclic n=3 len=2", Q).unwrap();
        let a = out.source.algebra();
        let zero = parse_module("", a).unwrap();
        assert!(zero.is_zero_module());

        let simple = parse_module("dim 2 = 1;", a).unwrap();
        assert_eq!(simple, crate::rep::simple(a, 1));

        let proj = parse_module("dim 1 = 1; dim 2 = 1; map a1 = [[1]];", a).unwrap();
        assert_eq!(proj.dims(), crate::rep::projective(a, 0).dims());
        assert!(crate::homalg::is_isomorphic(&proj, &crate::rep::projective(a, 0), 0).is_iso());

        let text = serialize_module(&proj, "M");
        let reparsed = parse_module(&text, a).unwrap();
        assert_eq!(reparsed, proj);
    }

    #[test]
    fn module_errors() {
        let out = parse_algebra("nakayama cyclic n=3 len=2", Q).unwrap();
        let a = out.source.algebra();
        let err = parse_module("dim 1 = 1; map a1 = [[1]];", a).unwrap_err();
        assert!(err.message.contains("matrix"), "{}", err.message);
        // violating a relation names the relation path
        let err = parse_module(
            "dim 1 = 1; dim 2 = 1; dim 3 = 1; map a1 = [[1]]; map a2 = [[1]]; map a3 = [[1]];",
            a,
        )
        .unwrap_err();
        assert!(err.message.contains('.'), "{}", err.message);
        // floating literals are rejected
        let err = parse_module("dim 1 = 1; dim 2 = 1; map a1 = [[0.5]];", a);
        assert!(err.is_err());
    }

    #[test]
    fn rational_scalars_in_modules() {
        let out = parse_algebra("algebra A; vertices: 1 2; arrows: a: 2 -> 1;", Q).unwrap();
        let a = out.source.algebra();
        let m = parse_module("dim 1 = 1; dim 2 = 1; map a = [[-1/2]];", a).unwrap();
        assert_eq!(*m.map(0).get(0, 0), Q.from_ratio(-1, 2).unwrap());
    }

    #[test]
    fn random_module_round_trips_exactly() {
        use rand::SeedableRng;
        let out = parse_algebra("nakayama cyclic n=3 len=2", Q).unwrap();
        let a = out.source.algebra();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..10 {
            let m = crate::rep::random_module(a, &mut rng, 10);
            let text = serialize_module(&m, "M");
            assert_eq!(parse_module(&text, a).unwrap(), m);
        }
    }

    #[test]
    fn report_documents_are_deterministic() {
        let out = parse_algebra("nakayama cyclic n=3 len=2", Q).unwrap();
        let a = out.source.algebra();
        let report = gorenstein_report_default(a);
        let doc = report_document(
            json!({"bound": report.bound, "seed": 0}),
            algebra_summary(a, None),
            json!({ "gorenstein": gorenstein_value(&report, a) }),
            json!({}),
            json!([]),
        );
        let s1 = to_json_string(&doc);
        let s2 = to_json_string(&doc);
        assert_eq!(s1, s2);
        assert!(s1.contains("\"gd\": 0"));
        assert!(s1.contains("\"schema\": 1"));
        let md = to_markdown(&doc);
        assert!(md.contains("# gprojlab report"));
    }

    #[test]
    fn empty_verdicts_render() {
        let doc = report_document(json!({}), json!({}), json!({}), json!({}), json!([]));
        let s = to_json_string(&doc);
        assert!(s.contains("\"verdicts\": []"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn parser_is_total(input in ".{0,120}") {
            // never panics: returns a value or a positioned error
            let _ = parse_algebra(&input, Q);
        }

        #[test]
        fn module_parser_is_total(input in ".{0,120}") {
            let out = parse_algebra("nakayama cyclic n=3 len=2", Q).unwrap();
            let _ = parse_module(&input, out.source.algebra());
        }
    }
}
