//! Plain-text model files.
//!
//! ```text
//! # comment
//! MODEL halfline_t3
//! coframe = b0 b1 b2 b3
//! coordinates = x0
//! nonzero = x0
//! dx0 = -b0
//!
//! STRUCTURE
//! complex I = [@b1, -@b0, @b3, -@b2]      # images of the frame, or a matrix
//! metric g = identity
//! hypercomplex H = (I, J, K)
//! form Theta = (b0^b2 - b1^b3 + i*(b0^b3 + b1^b2))^2
//!
//! TWIST
//! xi = [@b1, @b2, @b3]
//! F = [b0^b1, b0^b2, b0^b3]
//! a = [[-x0, 0, 0], [0, -x0, 0], [0, 0, -x0]]
//! adapted = (s, r, basis)                  # optional
//!
//! CHECKS
//! hkt_twist_condition(g, H) expect pass
//! is_hkt(g, H) on twisted
//! ```
//!
//! A binding continues onto following lines while brackets are open.
//! Structure equations that are not listed are zero.

use std::fmt;

use crate::checks::{signature, ArgKind};
use crate::expr::{self, expect_form, expect_list, expect_scalar, expect_vector, is_ident_char, is_ident_start, Scope, Value};
use crate::exterior::{CoframeModel, Form, VectorField};
use crate::hermitian::{AlmostComplexStructure, HermitianMetric};
use crate::linalg::Matrix;
use crate::quaternionic::HypercomplexTriple;
use crate::scalar::Scalar;
use crate::twist::{AdaptedBasis, TwistData};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expect {
    Pass,
    Fail,
}

impl fmt::Display for Expect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Expect::Pass => "pass",
            Expect::Fail => "fail",
        })
    }
}

/// One line of the CHECKS section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckCall {
    pub name: String,
    pub args: Vec<String>,
    pub twisted: bool,
    pub expect: Option<Expect>,
}

impl CheckCall {
    pub fn new(name: &str, args: &[&str]) -> Self {
        Self { name: name.into(), args: args.iter().map(|s| s.to_string()).collect(), twisted: false, expect: None }
    }

    pub fn on_twisted(mut self) -> Self {
        self.twisted = true;
        self
    }

    pub fn expect(mut self, e: Expect) -> Self {
        self.expect = Some(e);
        self
    }

    /// `name(args)` with the `on twisted` suffix when present.
    pub fn label(&self) -> String {
        let mut s = self.name.clone();
        if !self.args.is_empty() {
            s.push_str(&format!("({})", self.args.join(", ")));
        }
        if self.twisted {
            s.push_str(" on twisted");
        }
        s
    }
}

impl fmt::Display for CheckCall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())?;
        if let Some(e) = self.expect {
            write!(f, " expect {e}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelFile {
    pub name: String,
    pub model: CoframeModel,
    /// Labels double as names.
    pub complex: Vec<AlmostComplexStructure>,
    pub metrics: Vec<(String, HermitianMetric)>,
    pub hypercomplex: Vec<(String, HypercomplexTriple)>,
    pub forms: Vec<(String, Form)>,
    pub twist: Option<TwistData>,
    pub adapted: Option<AdaptedBasis>,
    pub checks: Vec<CheckCall>,
}

impl ModelFile {
    pub fn new(name: impl Into<String>, model: CoframeModel) -> Self {
        Self {
            name: name.into(),
            model,
            complex: Vec::new(),
            metrics: Vec::new(),
            hypercomplex: Vec::new(),
            forms: Vec::new(),
            twist: None,
            adapted: None,
            checks: Vec::new(),
        }
    }

    pub fn complex_structure(&self, name: &str) -> Option<&AlmostComplexStructure> {
        self.complex.iter().find(|c| c.label() == name)
    }

    pub fn metric(&self, name: &str) -> Option<&HermitianMetric> {
        self.metrics.iter().find(|(n, _)| n == name).map(|(_, g)| g)
    }

    pub fn triple(&self, name: &str) -> Option<&HypercomplexTriple> {
        self.hypercomplex.iter().find(|(n, _)| n == name).map(|(_, h)| h)
    }

    pub fn form(&self, name: &str) -> Option<&Form> {
        self.forms.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    /// Whether `name` is declared with the given kind.
    pub fn resolves(&self, name: &str, kind: ArgKind) -> bool {
        match kind {
            ArgKind::Complex => self.complex_structure(name).is_some(),
            ArgKind::Metric => self.metric(name).is_some(),
            ArgKind::Hypercomplex => self.triple(name).is_some(),
            ArgKind::Form => self.form(name).is_some(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    Semantic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ErrorKind,
    pub line: usize,
    pub col: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ErrorKind::Syntax => "syntax error",
            ErrorKind::Semantic => "semantic error",
        };
        write!(f, "line {}, column {}: {kind}: {}", self.line, self.col, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

/// A logical line: its text plus the source position of every character.
struct Logical {
    text: String,
    pos: Vec<(usize, usize)>,
}

impl Logical {
    fn at(&self, idx: usize) -> (usize, usize) {
        match self.pos.get(idx) {
            Some(&p) => p,
            None => self.pos.last().map_or((1, 1), |&(l, c)| (l, c + 1)),
        }
    }

    fn error(&self, kind: ErrorKind, idx: usize, message: impl Into<String>) -> ParseError {
        let (line, col) = self.at(idx);
        ParseError { kind, line, col, message: message.into(), expected: Vec::new() }
    }

    fn slice(&self, start: usize, end: usize) -> Logical {
        Logical { text: self.text.chars().skip(start).take(end - start).collect(), pos: self.pos[start..end].to_vec() }
    }

    fn trimmed(&self) -> (usize, usize) {
        let chars: Vec<char> = self.text.chars().collect();
        let start = chars.iter().position(|c| !c.is_whitespace()).unwrap_or(chars.len());
        let end = chars.iter().rposition(|c| !c.is_whitespace()).map_or(start, |e| e + 1);
        (start, end)
    }
}

fn logical_lines(text: &str) -> Result<Vec<Logical>, ParseError> {
    let mut out = Vec::new();
    let mut cur: Option<Logical> = None;
    let mut depth: i64 = 0;
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let entry = cur.get_or_insert_with(|| Logical { text: String::new(), pos: Vec::new() });
        if !entry.text.is_empty() {
            entry.text.push(' ');
            let p = entry.pos.last().copied().unwrap_or((ln + 1, 1));
            entry.pos.push(p);
        }
        for (k, c) in line.chars().enumerate() {
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' => depth -= 1,
                _ => {}
            }
            entry.text.push(c);
            entry.pos.push((ln + 1, k + 1));
        }
        if depth <= 0 {
            depth = 0;
            let done = cur.take().expect("current line");
            if !done.text.trim().is_empty() {
                out.push(done);
            }
        }
    }
    if let Some(open) = cur {
        if !open.text.trim().is_empty() {
            let (line, col) = open.at(open.text.chars().count());
            return Err(ParseError {
                kind: ErrorKind::Syntax,
                line,
                col,
                message: "unclosed bracket at end of file".into(),
                expected: vec!["`]`".into(), "`)`".into()],
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Section {
    Model,
    Structure,
    Twist,
    Checks,
}

struct Binding {
    line: Logical,
    /// Words before `=`.
    lhs: Vec<(String, usize)>,
    /// Character index where the right-hand side starts.
    rhs_start: usize,
}

impl Binding {
    fn rhs(&self) -> Logical {
        let end = self.line.text.chars().count();
        self.line.slice(self.rhs_start, end)
    }
}

fn split_binding(line: Logical) -> Result<Binding, ParseError> {
    let chars: Vec<char> = line.text.chars().collect();
    let Some(eq) = chars.iter().position(|&c| c == '=') else {
        let (s, _) = line.trimmed();
        return Err(ParseError {
            expected: vec!["`name = expression`".into()],
            ..line.error(ErrorKind::Syntax, s, "expected a binding")
        });
    };
    let mut lhs = Vec::new();
    let mut k = 0;
    while k < eq {
        if chars[k].is_whitespace() {
            k += 1;
            continue;
        }
        if !is_ident_start(chars[k]) {
            return Err(ParseError {
                expected: vec!["identifier".into()],
                ..line.error(ErrorKind::Syntax, k, format!("unexpected `{}`", chars[k]))
            });
        }
        let start = k;
        while k < eq && is_ident_char(chars[k]) {
            k += 1;
        }
        lhs.push((chars[start..k].iter().collect(), start));
    }
    if lhs.is_empty() {
        return Err(ParseError {
            expected: vec!["identifier".into()],
            ..line.error(ErrorKind::Syntax, eq, "binding has no name")
        });
    }
    Ok(Binding { line, lhs, rhs_start: eq + 1 })
}

fn expr_error(rhs: &Logical, e: expr::ExprError) -> ParseError {
    let semantic = e.message.starts_with("unknown")
        || e.message.starts_with("cannot")
        || e.message.contains("degree")
        || e.message.starts_with("forms multiply")
        || e.message.starts_with("division")
        || e.message.starts_with("exponents");
    let kind = if semantic { ErrorKind::Semantic } else { ErrorKind::Syntax };
    ParseError { expected: e.expected, ..rhs.error(kind, e.col.saturating_sub(1), e.message) }
}

struct FileParser {
    coframe: Vec<String>,
    coordinates: Vec<String>,
    out: Option<ModelFile>,
}

impl FileParser {
    fn scope<'a>(&'a self, forms: &'a [(String, Form)]) -> Scope<'a> {
        Scope { coframe: &self.coframe, coordinates: &self.coordinates, forms }
    }

    fn eval(&self, b: &Binding) -> Result<Value, ParseError> {
        let rhs = b.rhs();
        let forms = self.out.as_ref().map_or(&[][..], |m| &m.forms[..]);
        expr::parse_value(&rhs.text, self.scope(forms)).map_err(|e| expr_error(&rhs, e))
    }

    fn semantic(b: &Binding, message: impl Into<String>) -> ParseError {
        let (s, _) = b.rhs().trimmed();
        b.rhs().error(ErrorKind::Semantic, s, message)
    }

    fn form_of_degree(&self, b: &Binding, v: Value, degree: usize, what: &str) -> Result<Form, ParseError> {
        let f = expect_form(v).map_err(|m| Self::semantic(b, format!("{what}: {m}")))?;
        if f.is_zero() {
            return Ok(Form::zero(degree));
        }
        if f.degree() != degree {
            return Err(Self::semantic(b, format!("{what} has degree {}, expected {degree}", f.degree())));
        }
        Ok(f)
    }

    fn matrix(&self, b: &Binding, v: Value, what: &str) -> Result<Matrix<Scalar>, ParseError> {
        if let Value::Scalar(_) = v {
            return Err(Self::semantic(b, format!("{what}: expected a matrix")));
        }
        let rows = expect_list(v).map_err(|m| Self::semantic(b, format!("{what}: {m}")))?;
        let mut out = Vec::with_capacity(rows.len());
        for row in rows {
            let row = expect_list(row).map_err(|m| Self::semantic(b, format!("{what}: {m}")))?;
            let row: Result<Vec<Scalar>, String> = row.into_iter().map(expect_scalar).collect();
            out.push(row.map_err(|m| Self::semantic(b, format!("{what}: {m}")))?);
        }
        Matrix::from_rows(out).ok_or_else(|| Self::semantic(b, format!("{what}: rows have different lengths")))
    }

    /// A matrix literal or the keyword `identity` (of size `n`).
    fn matrix_or_identity(&self, b: &Binding, n: usize, what: &str) -> Result<Matrix<Scalar>, ParseError> {
        if b.rhs().text.trim() == "identity" {
            return Ok(Matrix::identity(n));
        }
        let v = self.eval(b)?;
        self.matrix(b, v, what)
    }
}

fn parse_header(line: &Logical) -> Option<(Section, Option<String>)> {
    let mut words = line.text.split_whitespace();
    let section = match words.next()? {
        "MODEL" => Section::Model,
        "STRUCTURE" => Section::Structure,
        "TWIST" => Section::Twist,
        "CHECKS" => Section::Checks,
        _ => return None,
    };
    Some((section, words.next().map(str::to_string)))
}

/// Parses a model file, resolving every name and building the model.
pub fn parse_model_file(text: &str) -> Result<ModelFile, ParseError> {
    let lines = logical_lines(text)?;
    let mut sections: Vec<(Section, Logical, Vec<Logical>)> = Vec::new();
    let mut name = None;
    for line in lines {
        if let Some((section, arg)) = parse_header(&line) {
            if sections.iter().any(|(s, _, _)| *s == section) {
                return Err(line.error(ErrorKind::Syntax, line.trimmed().0, format!("duplicate {section:?} section")));
            }
            let order = [Section::Model, Section::Structure, Section::Twist, Section::Checks];
            let rank = |s: Section| order.iter().position(|&o| o == s);
            if let Some((last, _, _)) = sections.last() {
                if rank(section) < rank(*last) {
                    return Err(line.error(ErrorKind::Syntax, line.trimmed().0, "sections must appear in the order MODEL, STRUCTURE, TWIST, CHECKS"));
                }
            }
            if section == Section::Model {
                name = arg;
            } else if arg.is_some() {
                return Err(line.error(ErrorKind::Syntax, line.trimmed().0, "unexpected text after section header"));
            }
            sections.push((section, line, Vec::new()));
        } else if let Some((_, _, body)) = sections.last_mut() {
            body.push(line);
        } else {
            return Err(ParseError {
                expected: vec!["`MODEL`".into()],
                ..line.error(ErrorKind::Syntax, line.trimmed().0, "content before the first section header")
            });
        }
    }
    let Some((Section::Model, header, _)) = sections.first() else {
        return Err(ParseError { kind: ErrorKind::Syntax, line: 1, col: 1, message: "missing MODEL section".into(), expected: vec!["`MODEL`".into()] });
    };
    let header_pos = header.at(header.trimmed().0);
    let mut p = FileParser { coframe: Vec::new(), coordinates: Vec::new(), out: None };
    for (section, _, body) in sections {
        match section {
            Section::Model => parse_model(&mut p, name.clone().unwrap_or_default(), body, header_pos)?,
            Section::Structure => parse_structure(&mut p, body)?,
            Section::Twist => parse_twist(&mut p, body)?,
            Section::Checks => parse_checks(&mut p, body)?,
        }
    }
    Ok(p.out.expect("model section parsed"))
}

fn names_list(b: &Binding) -> Result<Vec<String>, ParseError> {
    let rhs = b.rhs();
    let mut out: Vec<String> = Vec::new();
    let chars: Vec<char> = rhs.text.chars().collect();
    let mut k = 0;
    while k < chars.len() {
        if chars[k].is_whitespace() || chars[k] == ',' {
            k += 1;
            continue;
        }
        if !is_ident_start(chars[k]) {
            return Err(ParseError {
                expected: vec!["identifier".into()],
                ..rhs.error(ErrorKind::Syntax, k, format!("unexpected `{}`", chars[k]))
            });
        }
        let start = k;
        while k < chars.len() && is_ident_char(chars[k]) {
            k += 1;
        }
        let name: String = chars[start..k].iter().collect();
        if name == "i" || name == "identity" {
            return Err(rhs.error(ErrorKind::Semantic, start, format!("`{name}` is reserved")));
        }
        if out.contains(&name) {
            return Err(rhs.error(ErrorKind::Semantic, start, format!("`{name}` declared twice")));
        }
        out.push(name);
    }
    Ok(out)
}

fn parse_model(p: &mut FileParser, name: String, body: Vec<Logical>, header: (usize, usize)) -> Result<(), ParseError> {
    let bindings: Vec<Binding> = body.into_iter().map(split_binding).collect::<Result<_, _>>()?;
    let mut nonzero = Vec::new();
    let mut seen_coframe = false;
    for b in &bindings {
        let key = b.lhs[0].0.as_str();
        if b.lhs.len() != 1 {
            return Err(b.line.error(ErrorKind::Syntax, b.lhs[1].1, "expected `=`"));
        }
        match key {
            "coframe" => {
                p.coframe = names_list(b)?;
                seen_coframe = true;
            }
            "coordinates" => p.coordinates = names_list(b)?,
            "nonzero" => nonzero = names_list(b)?,
            _ => {}
        }
    }
    if !seen_coframe {
        return Err(ParseError {
            kind: ErrorKind::Syntax,
            line: header.0,
            col: header.1,
            message: "MODEL section has no coframe".into(),
            expected: vec!["`coframe = ...`".into()],
        });
    }
    if let Some(dup) = p.coframe.iter().find(|c| p.coordinates.contains(c)) {
        return Err(ParseError {
            kind: ErrorKind::Semantic,
            line: header.0,
            col: header.1,
            message: format!("`{dup}` is both a coframe element and a coordinate"),
            expected: Vec::new(),
        });
    }
    let mut structure: Vec<Option<Form>> = vec![None; p.coframe.len()];
    let mut coord_d: Vec<Option<Form>> = vec![None; p.coordinates.len()];
    for b in &bindings {
        let (key, at) = (&b.lhs[0].0, b.lhs[0].1);
        if matches!(key.as_str(), "coframe" | "coordinates" | "nonzero") {
            continue;
        }
        let target = key.strip_prefix('d').unwrap_or("");
        let slot = if let Some(k) = p.coframe.iter().position(|c| c == target) {
            (&mut structure[k], 2)
        } else if let Some(k) = p.coordinates.iter().position(|c| c == target) {
            (&mut coord_d[k], 1)
        } else {
            return Err(ParseError {
                expected: vec!["`coframe`".into(), "`coordinates`".into(), "`nonzero`".into(), "`d<name>`".into()],
                ..b.line.error(ErrorKind::Semantic, at, format!("`{key}` is not d of a declared coframe element or coordinate"))
            });
        };
        if slot.0.is_some() {
            return Err(b.line.error(ErrorKind::Semantic, at, format!("`{key}` given twice")));
        }
        let v = p.eval(b)?;
        let f = p.form_of_degree(b, v, slot.1, key)?;
        *slot.0 = Some(f);
    }
    let structure = structure.into_iter().map(|f| f.unwrap_or_else(|| Form::zero(2))).collect();
    let coord_d = coord_d.into_iter().map(|f| f.unwrap_or_else(|| Form::zero(1))).collect();
    let at_header = |message: String| ParseError { kind: ErrorKind::Semantic, line: header.0, col: header.1, message, expected: Vec::new() };
    let mut model = CoframeModel::new(p.coframe.clone(), p.coordinates.clone(), structure, coord_d)
        .map_err(|e| at_header(e.to_string()))?;
    for c in &nonzero {
        model = model.with_nonzero(c).map_err(|e| at_header(e.to_string()))?;
    }
    p.out = Some(ModelFile::new(name, model));
    Ok(())
}

fn parse_structure(p: &mut FileParser, body: Vec<Logical>) -> Result<(), ParseError> {
    let n = p.coframe.len();
    for line in body {
        let b = split_binding(line)?;
        if b.lhs.len() != 2 {
            return Err(ParseError {
                expected: vec!["`complex`".into(), "`metric`".into(), "`hypercomplex`".into(), "`form`".into()],
                ..b.line.error(ErrorKind::Syntax, b.lhs[0].1, "expected `<kind> <name> = ...`")
            });
        }
        let (kind, at) = (b.lhs[0].0.as_str(), b.lhs[0].1);
        let name = b.lhs[1].0.clone();
        let file = p.out.as_ref().expect("model parsed");
        let taken = file.complex.iter().any(|c| c.label() == name)
            || file.metrics.iter().any(|(m, _)| *m == name)
            || file.hypercomplex.iter().any(|(m, _)| *m == name)
            || file.forms.iter().any(|(m, _)| *m == name)
            || p.coframe.contains(&name)
            || p.coordinates.contains(&name)
            || name == "i";
        if taken {
            return Err(b.line.error(ErrorKind::Semantic, b.lhs[1].1, format!("name `{name}` already in use")));
        }
        match kind {
            "complex" => {
                let v = p.eval(&b)?;
                let jc = match v {
                    Value::List(items) if items.iter().all(|x| matches!(x, Value::Vector(_))) && !items.is_empty() => {
                        let images: Vec<VectorField> = items.into_iter().map(|x| expect_vector(x, n).expect("vector")).collect();
                        AlmostComplexStructure::from_images(name.clone(), &images)
                    }
                    v => AlmostComplexStructure::new(name.clone(), p.matrix(&b, v, "complex structure")?),
                }
                .map_err(|e| FileParser::semantic(&b, e.to_string()))?;
                if jc.dim() != n {
                    return Err(FileParser::semantic(&b, format!("complex structure is {0}x{0}, model has dimension {n}", jc.dim())));
                }
                p.out.as_mut().expect("model").complex.push(jc);
            }
            "metric" => {
                let m = p.matrix_or_identity(&b, n, "metric")?;
                if m.rows() != n || m.cols() != n {
                    return Err(FileParser::semantic(&b, format!("metric must be {n}x{n}")));
                }
                let g = HermitianMetric::new(m).map_err(|e| FileParser::semantic(&b, e.to_string()))?;
                p.out.as_mut().expect("model").metrics.push((name, g));
            }
            "hypercomplex" => {
                let rhs = b.rhs();
                let t = rhs.text.trim();
                let inner = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(|| ParseError {
                    expected: vec!["`(I, J, K)`".into()],
                    ..rhs.error(ErrorKind::Syntax, rhs.trimmed().0, "expected a triple of complex structures")
                })?;
                let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
                if parts.len() != 3 {
                    return Err(FileParser::semantic(&b, format!("expected three complex structures, found {}", parts.len())));
                }
                let mut found = Vec::new();
                for part in parts {
                    let jc = file
                        .complex_structure(part)
                        .ok_or_else(|| FileParser::semantic(&b, format!("unknown complex structure `{part}`")))?;
                    found.push(jc.clone());
                }
                let [i, j, k]: [AlmostComplexStructure; 3] = found.try_into().expect("three");
                let h = HypercomplexTriple::new(i, j, k).map_err(|e| FileParser::semantic(&b, e.to_string()))?;
                p.out.as_mut().expect("model").hypercomplex.push((name, h));
            }
            "form" => {
                let v = p.eval(&b)?;
                let f = expect_form(v).map_err(|m| FileParser::semantic(&b, m))?;
                p.out.as_mut().expect("model").forms.push((name, f));
            }
            other => {
                return Err(ParseError {
                    expected: vec!["`complex`".into(), "`metric`".into(), "`hypercomplex`".into(), "`form`".into()],
                    ..b.line.error(ErrorKind::Syntax, at, format!("unknown declaration `{other}`"))
                })
            }
        }
    }
    Ok(())
}

fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i64;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    out.push(cur);
    out
}

fn parse_twist(p: &mut FileParser, body: Vec<Logical>) -> Result<(), ParseError> {
    let n = p.coframe.len();
    let bindings: Vec<Binding> = body.into_iter().map(split_binding).collect::<Result<_, _>>()?;
    let mut xi = None;
    let mut f = None;
    let mut a_binding = None;
    let mut adapted_binding = None;
    for b in &bindings {
        if b.lhs.len() != 1 {
            return Err(b.line.error(ErrorKind::Syntax, b.lhs[1].1, "expected `=`"));
        }
        let (key, at) = (b.lhs[0].0.as_str(), b.lhs[0].1);
        let dup = |set: bool| if set { Err(b.line.error(ErrorKind::Semantic, at, format!("`{key}` given twice"))) } else { Ok(()) };
        match key {
            "xi" => {
                dup(xi.is_some())?;
                let items = expect_list(p.eval(b)?).map_err(|m| FileParser::semantic(b, format!("xi: {m}")))?;
                let v: Result<Vec<VectorField>, String> = items.into_iter().map(|x| expect_vector(x, n)).collect();
                xi = Some(v.map_err(|m| FileParser::semantic(b, format!("xi: {m}")))?);
            }
            "F" => {
                dup(f.is_some())?;
                let items = expect_list(p.eval(b)?).map_err(|m| FileParser::semantic(b, format!("F: {m}")))?;
                let mut forms = Vec::new();
                for (j, item) in items.into_iter().enumerate() {
                    forms.push(p.form_of_degree(b, item, 2, &format!("F[{j}]"))?);
                }
                f = Some(forms);
            }
            "a" => {
                dup(a_binding.is_some())?;
                a_binding = Some(b);
            }
            "adapted" => {
                dup(adapted_binding.is_some())?;
                adapted_binding = Some(b);
            }
            other => {
                return Err(ParseError {
                    expected: vec!["`xi`".into(), "`F`".into(), "`a`".into(), "`adapted`".into()],
                    ..b.line.error(ErrorKind::Semantic, at, format!("unknown twist field `{other}`"))
                })
            }
        }
    }
    let missing = |what: &str| ParseError {
        kind: ErrorKind::Semantic,
        line: bindings.first().map_or(1, |b| b.line.at(0).0),
        col: 1,
        message: format!("TWIST section has no `{what}`"),
        expected: vec![format!("`{what} = ...`")],
    };
    let xi = xi.ok_or_else(|| missing("xi"))?;
    let f = f.ok_or_else(|| missing("F"))?;
    let r = xi.len();
    let a = match a_binding {
        Some(b) => {
            let a = p.matrix_or_identity(b, r, "a")?;
            if a.rows() != f.len() || a.cols() != r {
                return Err(FileParser::semantic(b, format!("a is {}x{}, expected {}x{}", a.rows(), a.cols(), f.len(), r)));
            }
            a
        }
        None => return Err(missing("a")),
    };
    if let Some(b) = bindings.iter().find(|b| b.lhs[0].0 == "xi") {
        if let Some(bad) = xi.iter().position(|x| x.dim() != n) {
            return Err(FileParser::semantic(b, format!("xi[{bad}] has the wrong dimension")));
        }
    }
    let data = TwistData::new(xi, f, a).map_err(|e| {
        let b = bindings.iter().find(|b| b.lhs[0].0 == "F").expect("F binding");
        FileParser::semantic(b, e.to_string())
    })?;
    let adapted = match adapted_binding {
        None => None,
        Some(b) => {
            let rhs = b.rhs();
            let t = rhs.text.trim();
            let inner = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(|| ParseError {
                expected: vec!["`(s, r, basis)`".into()],
                ..rhs.error(ErrorKind::Syntax, rhs.trimmed().0, "expected a triple")
            })?;
            let parts = split_top_level(inner);
            if parts.len() != 3 {
                return Err(FileParser::semantic(b, "adapted takes (s, r, basis)"));
            }
            let num = |s: &str| s.trim().parse::<usize>().map_err(|_| FileParser::semantic(b, format!("`{}` is not a count", s.trim())));
            let (s, rr) = (num(&parts[0])?, num(&parts[1])?);
            let basis = if parts[2].trim() == "identity" {
                Matrix::identity(r)
            } else {
                let v = expr::parse_value(&parts[2], p.scope(&[])).map_err(|e| FileParser::semantic(b, e.to_string()))?;
                p.matrix(b, v, "adapted basis")?
            };
            Some(AdaptedBasis { s, r: rr, basis })
        }
    };
    let out = p.out.as_mut().expect("model");
    out.twist = Some(data);
    out.adapted = adapted;
    Ok(())
}

fn parse_check_line(line: &Logical) -> Result<CheckCall, ParseError> {
    let chars: Vec<char> = line.text.chars().collect();
    let mut k = 0;
    let skip_ws = |k: &mut usize| {
        while *k < chars.len() && chars[*k].is_whitespace() {
            *k += 1;
        }
    };
    let ident = |k: &mut usize| -> Option<String> {
        if *k < chars.len() && is_ident_start(chars[*k]) {
            let s = *k;
            while *k < chars.len() && is_ident_char(chars[*k]) {
                *k += 1;
            }
            Some(chars[s..*k].iter().collect())
        } else {
            None
        }
    };
    let syntax = |k: usize, msg: &str, expected: &[&str]| ParseError {
        expected: expected.iter().map(|s| s.to_string()).collect(),
        ..line.error(ErrorKind::Syntax, k, msg)
    };
    skip_ws(&mut k);
    let name = ident(&mut k).ok_or_else(|| syntax(k, "expected a check name", &["identifier"]))?;
    let mut args = Vec::new();
    skip_ws(&mut k);
    if k < chars.len() && chars[k] == '(' {
        k += 1;
        loop {
            skip_ws(&mut k);
            if k < chars.len() && chars[k] == ')' && args.is_empty() {
                k += 1;
                break;
            }
            let a = ident(&mut k).ok_or_else(|| syntax(k, "expected an argument name", &["identifier"]))?;
            args.push(a);
            skip_ws(&mut k);
            match chars.get(k) {
                Some(',') => k += 1,
                Some(')') => {
                    k += 1;
                    break;
                }
                _ => return Err(syntax(k, "malformed argument list", &["`,`", "`)`"])),
            }
        }
    }
    let mut call = CheckCall { name, args, twisted: false, expect: None };
    loop {
        skip_ws(&mut k);
        if k >= chars.len() {
            break;
        }
        let at = k;
        match ident(&mut k).as_deref() {
            Some("on") => {
                skip_ws(&mut k);
                let at2 = k;
                if ident(&mut k).as_deref() != Some("twisted") || call.twisted {
                    return Err(syntax(at2, "expected `twisted` after `on`", &["`twisted`"]));
                }
                call.twisted = true;
            }
            Some("expect") => {
                skip_ws(&mut k);
                let at2 = k;
                call.expect = match ident(&mut k).as_deref() {
                    Some("pass") if call.expect.is_none() => Some(Expect::Pass),
                    Some("fail") if call.expect.is_none() => Some(Expect::Fail),
                    _ => return Err(syntax(at2, "expected `pass` or `fail`", &["`pass`", "`fail`"])),
                };
            }
            _ => return Err(syntax(at, "unexpected text after check", &["`on twisted`", "`expect pass|fail`", "end of line"])),
        }
    }
    Ok(call)
}

fn parse_checks(p: &mut FileParser, body: Vec<Logical>) -> Result<(), ParseError> {
    let file = p.out.as_mut().expect("model");
    for line in body {
        let call = parse_check_line(&line)?;
        let at = line.trimmed().0;
        let semantic = |m: String| line.error(ErrorKind::Semantic, at, m);
        let Some(sig) = signature(&call.name) else {
            return Err(semantic(format!("unknown check `{}`", call.name)));
        };
        if call.args.len() != sig.args.len() {
            return Err(semantic(format!("`{}` takes {} argument(s), got {}", call.name, sig.args.len(), call.args.len())));
        }
        for (a, kind) in call.args.iter().zip(sig.args) {
            if !file.resolves(a, *kind) {
                return Err(semantic(format!("`{a}` is not a declared {kind}")));
            }
        }
        if (sig.needs_twist || call.twisted) && file.twist.is_none() {
            return Err(semantic(format!("`{}` needs a TWIST section", call.label())));
        }
        file.checks.push(call);
    }
    Ok(())
}

fn matrix_text(m: &Matrix<Scalar>) -> String {
    if m.is_identity() {
        "identity".into()
    } else {
        m.to_string()
    }
}

/// Canonical text; `parse_model_file` reads it back to an equal value.
impl fmt::Display for ModelFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.model;
        let names = m.coframe();
        if self.name.is_empty() {
            writeln!(f, "MODEL")?;
        } else {
            writeln!(f, "MODEL {}", self.name)?;
        }
        writeln!(f, "coframe = {}", names.join(" "))?;
        if !m.coordinates().is_empty() {
            writeln!(f, "coordinates = {}", m.coordinates().join(" "))?;
        }
        if !m.nonzero().is_empty() {
            writeln!(f, "nonzero = {}", m.nonzero().join(" "))?;
        }
        for (name, d) in names.iter().zip(m.structure()).chain(m.coordinates().iter().zip(m.coordinate_differentials())) {
            if !d.is_zero() {
                writeln!(f, "d{name} = {}", d.display_with(names))?;
            }
        }
        if !(self.complex.is_empty() && self.metrics.is_empty() && self.hypercomplex.is_empty() && self.forms.is_empty()) {
            writeln!(f, "\nSTRUCTURE")?;
            for jc in &self.complex {
                writeln!(f, "complex {} = {}", jc.label(), jc.matrix())?;
            }
            for (name, g) in &self.metrics {
                writeln!(f, "metric {name} = {}", matrix_text(g.matrix()))?;
            }
            for (name, h) in &self.hypercomplex {
                writeln!(f, "hypercomplex {name} = ({}, {}, {})", h.i().label(), h.j().label(), h.k().label())?;
            }
            for (name, form) in &self.forms {
                writeln!(f, "form {name} = {}", form.display_with(names))?;
            }
        }
        if let Some(t) = &self.twist {
            writeln!(f, "\nTWIST")?;
            let xi: Vec<String> = t.xi().iter().map(|x| x.display_with(names).to_string()).collect();
            writeln!(f, "xi = [{}]", xi.join(", "))?;
            let fs: Vec<String> = t.f().iter().map(|x| x.display_with(names).to_string()).collect();
            writeln!(f, "F = [{}]", fs.join(", "))?;
            writeln!(f, "a = {}", matrix_text(t.a()))?;
            if let Some(ad) = &self.adapted {
                writeln!(f, "adapted = ({}, {}, {})", ad.s, ad.r, matrix_text(&ad.basis))?;
            }
        }
        if !self.checks.is_empty() {
            writeln!(f, "\nCHECKS")?;
            for c in &self.checks {
                writeln!(f, "{c}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEISENBERG: &str = "\
# nilmanifold
MODEL heis
coframe = e1 e2 e3 e4
de3 = -e1^e2

STRUCTURE
complex I = [@e2, -@e1, @e4, -@e3]
metric g = identity

CHECKS
is_integrable(I)
is_skt(g, I) expect fail
";

    #[test]
    fn parses_and_prints_back() {
        let file = parse_model_file(HEISENBERG).unwrap();
        assert_eq!(file.name, "heis");
        assert_eq!(file.model.structure()[2], Form::basis(0b011).neg());
        assert_eq!(file.checks.len(), 2);
        assert_eq!(file.checks[1].expect, Some(Expect::Fail));
        let printed = file.to_string();
        let again = parse_model_file(&printed).unwrap();
        assert_eq!(again, file);
        assert_eq!(again.to_string(), printed);
    }

    #[test]
    fn zero_square_is_accepted() {
        let file = parse_model_file("MODEL\ncoframe = e1 e2\nde1 = e1^e1\n").unwrap();
        assert!(file.model.structure()[0].is_zero());
        assert!(file.model.validate().passed());
    }

    #[test]
    fn undeclared_symbol_is_a_semantic_error() {
        let e = parse_model_file("MODEL\ncoframe = e1 e2\nde1 = e1^e9\n").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Semantic);
        assert_eq!((e.line, e.col), (3, 10));
        assert!(e.message.contains("e9"));
    }

    #[test]
    fn degree_mismatch_is_reported() {
        let e = parse_model_file("MODEL\ncoframe = e1 e2\nde1 = e2\n").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Semantic);
        assert!(e.message.contains("degree"));
    }

    #[test]
    fn non_square_a_is_rejected() {
        let text = "MODEL\ncoframe = e1 e2 e3\nTWIST\nxi = [@e3]\nF = [e1^e2]\na = [[1, 2]]\n";
        let e = parse_model_file(text).unwrap_err();
        assert_eq!(e.kind, ErrorKind::Semantic);
        assert_eq!(e.line, 6);
    }

    #[test]
    fn syntax_errors_carry_positions_and_expectations() {
        let e = parse_model_file("MODEL\ncoframe = e1 e2\nde1 = (e1^e2\n").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Syntax);
        assert!(!e.expected.is_empty());
        let e = parse_model_file("coframe = e1").unwrap_err();
        assert_eq!((e.line, e.col), (1, 1));
    }

    #[test]
    fn multi_line_bindings() {
        let text = "MODEL\ncoframe = e1 e2\nSTRUCTURE\ncomplex I = [[0, -1],\n             [1, 0]]\n";
        let file = parse_model_file(text).unwrap();
        assert_eq!(file.complex[0].act(&file.model.frame(0)), file.model.frame(1));
    }

    #[test]
    fn unknown_check_and_argument() {
        let base = "MODEL\ncoframe = e1 e2\nSTRUCTURE\ncomplex I = [@e2, -@e1]\nCHECKS\n";
        assert!(parse_model_file(&format!("{base}nonsense\n")).unwrap_err().message.contains("nonsense"));
        let e = parse_model_file(&format!("{base}is_integrable(J)\n")).unwrap_err();
        assert!(e.message.contains("`J`"));
        let e = parse_model_file(&format!("{base}validate_twist_data\n")).unwrap_err();
        assert!(e.message.contains("TWIST"));
    }

    #[test]
    fn empty_checks_section() {
        let file = parse_model_file("MODEL\ncoframe = e1\nCHECKS\n").unwrap();
        assert!(file.checks.is_empty());
    }
}
