//! The sectioned text format: parsing with located diagnostics and a canonical printer.

use std::collections::BTreeSet;
use std::fmt;

use exheart::complex::Complex;
use exheart::exact::{ExactSubcat, Structure};
use exheart::linalg::{FieldSpec, Matrix};
use exheart::module::{direct_sum, hom_basis, Module, ModuleMap};
use exheart::quiver::{Arrow, PathAlgebra, Quiver, DEFAULT_MAX_PATH_LENGTH};

/// Dimension bound used when a subcategory is declared as `mod`.
pub const MOD_DIM_BOUND: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for Diagnostic {}

type PResult<T> = Result<T, Diagnostic>;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Token {
    text: String,
    col: usize,
}

#[derive(Clone, Debug)]
struct Line {
    no: usize,
    tokens: Vec<Token>,
}

impl Line {
    fn err<T>(&self, i: usize, msg: impl Into<String>) -> PResult<T> {
        let col = self.tokens.get(i).or(self.tokens.last()).map_or(1, |t| t.col);
        Err(Diagnostic { line: self.no, col, msg: msg.into() })
    }

    fn tok(&self, i: usize, what: &str) -> PResult<&str> {
        match self.tokens.get(i) {
            Some(t) => Ok(&t.text),
            None => {
                let col = self.tokens.last().map_or(1, |t| t.col + t.text.chars().count());
                Err(Diagnostic { line: self.no, col, msg: format!("expected {what}") })
            }
        }
    }

    fn expect(&self, i: usize, lit: &str) -> PResult<()> {
        let t = self.tok(i, &format!("`{lit}`"))?;
        if t == lit {
            Ok(())
        } else {
            self.err(i, format!("expected `{lit}`, found `{t}`"))
        }
    }

    fn texts(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.text.as_str()).collect()
    }
}

fn tokenize(no: usize, raw: &str) -> PResult<Vec<Token>> {
    let body = match raw.find('#') {
        Some(i) => &raw[..i],
        None => raw,
    };
    let chars: Vec<char> = body.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let mut depth = 0usize;
        let mut text = String::new();
        while i < chars.len() && (depth > 0 || !chars[i].is_whitespace()) {
            match chars[i] {
                '[' => depth += 1,
                ']' => {
                    if depth == 0 {
                        return Err(Diagnostic { line: no, col: i + 1, msg: "unbalanced `]`".into() });
                    }
                    depth -= 1;
                }
                _ => {}
            }
            if !chars[i].is_whitespace() {
                text.push(chars[i]);
            }
            i += 1;
        }
        if depth > 0 {
            return Err(Diagnostic { line: no, col: start + 1, msg: "unbalanced `[`".into() });
        }
        out.push(Token { text, col: start + 1 });
    }
    Ok(out)
}

const SECTIONS: [&str; 8] = ["field", "quiver", "relations", "modules", "maps", "subcategories", "complexes", "queries"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleDecl {
    Projective(String),
    Injective(String),
    Simple(String),
    Regular,
    Sum(Vec<String>),
    /// Dimension vector and nonzero arrow matrices.
    Rep(Vec<usize>, Vec<(String, Vec<Vec<String>>)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapDecl {
    Identity,
    Zero,
    Basis(usize),
    Compose(String, String),
    /// Nonzero components per vertex.
    Comps(Vec<(String, Vec<Vec<String>>)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubcatDecl {
    Add(Vec<String>, Structure),
    Mod(Structure),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComplexDecl {
    Stalk(String, i32),
    From(i32, Vec<String>),
    Shift(String, i32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub line: usize,
    pub words: Vec<String>,
    pub expect: Option<String>,
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.words.join(" "))?;
        if let Some(e) = &self.expect {
            write!(f, " expect {e}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Named<D, V> {
    pub name: String,
    pub decl: D,
    pub value: V,
}

#[derive(Clone, Debug)]
pub struct MapEntry {
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug)]
pub struct Workspace {
    pub field: FieldSpec,
    pub vertices: Vec<String>,
    /// `(label, source, target)`.
    pub arrows: Vec<(String, String, String)>,
    /// Each relation as `(coefficient, arrow labels)` terms.
    pub relations: Vec<Vec<(String, Vec<String>)>>,
    pub alg: PathAlgebra,
    pub modules: Vec<Named<ModuleDecl, Module>>,
    pub maps: Vec<Named<(MapEntry, MapDecl), ModuleMap>>,
    pub subcats: Vec<Named<SubcatDecl, ExactSubcat>>,
    pub complexes: Vec<Named<ComplexDecl, Complex>>,
    pub queries: Vec<Query>,
}

fn find<'a, D, V>(items: &'a [Named<D, V>], name: &str) -> Option<&'a Named<D, V>> {
    items.iter().find(|n| n.name == name)
}

impl Workspace {
    pub fn module(&self, name: &str) -> Option<&Module> {
        find(&self.modules, name).map(|n| &n.value)
    }

    pub fn map(&self, name: &str) -> Option<&ModuleMap> {
        find(&self.maps, name).map(|n| &n.value)
    }

    pub fn subcat(&self, name: &str) -> Option<&ExactSubcat> {
        find(&self.subcats, name).map(|n| &n.value)
    }

    pub fn complex(&self, name: &str) -> Option<&Complex> {
        find(&self.complexes, name).map(|n| &n.value)
    }
}

pub fn field_text(f: FieldSpec) -> String {
    match f {
        FieldSpec::Rationals => "q".into(),
        FieldSpec::Prime(p) => format!("fp:{p}"),
    }
}

pub fn parse_field(s: &str) -> Result<FieldSpec, String> {
    if s == "q" || s == "Q" {
        return Ok(FieldSpec::Rationals);
    }
    let p = s.strip_prefix("fp:").ok_or_else(|| format!("unknown field `{s}`, expected `q` or `fp:<p>`"))?;
    let p: u32 = p.parse().map_err(|_| format!("bad characteristic `{p}`"))?;
    FieldSpec::prime(p).map_err(|e| e.to_string())
}

/// `[[1,0],[0,1]]` as rows of entries; `[]` is the empty matrix.
fn parse_matrix_literal(s: &str) -> Result<Vec<Vec<String>>, String> {
    let inner = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(|| format!("bad matrix `{s}`"))?;
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    let mut rows = Vec::new();
    let mut rest = inner;
    loop {
        let r = rest.strip_prefix('[').ok_or_else(|| format!("bad matrix `{s}`"))?;
        let end = r.find(']').ok_or_else(|| format!("bad matrix `{s}`"))?;
        let row: Vec<String> = if r[..end].is_empty() { Vec::new() } else { r[..end].split(',').map(|x| x.to_string()).collect() };
        rows.push(row);
        rest = &r[end + 1..];
        if rest.is_empty() {
            break;
        }
        rest = rest.strip_prefix(',').ok_or_else(|| format!("bad matrix `{s}`"))?;
    }
    Ok(rows)
}

fn build_matrix(field: FieldSpec, rows: usize, cols: usize, lit: &[Vec<String>]) -> Result<Matrix, String> {
    if lit.is_empty() {
        if rows * cols == 0 {
            return Ok(Matrix::zeros(field, rows, cols));
        }
        return Err(format!("expected a {rows}x{cols} matrix, found `[]`"));
    }
    if lit.len() != rows || lit.iter().any(|r| r.len() != cols) {
        return Err(format!("expected a {rows}x{cols} matrix, found {} rows of lengths {:?}", lit.len(), lit.iter().map(Vec::len).collect::<Vec<_>>()));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for r in lit {
        for x in r {
            data.push(field.parse(x).map_err(|e| e.to_string())?);
        }
    }
    Matrix::from_scalars(field, rows, cols, data).map_err(|e| e.to_string())
}

fn matrix_literal(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect()).collect()
}

fn show_matrix(lit: &[Vec<String>]) -> String {
    if lit.is_empty() {
        return "[]".into();
    }
    let rows: Vec<String> = lit.iter().map(|r| format!("[{}]", r.join(","))).collect();
    format!("[{}]", rows.join(","))
}

fn parse_int<T: std::str::FromStr>(line: &Line, i: usize, what: &str) -> PResult<T> {
    let t = line.tok(i, what)?;
    t.parse().or_else(|_| line.err(i, format!("expected {what}, found `{t}`")))
}

fn check_name(line: &Line, i: usize, taken: &BTreeSet<String>) -> PResult<String> {
    let t = line.tok(i, "a name")?;
    if !t.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'') || t.is_empty() {
        return line.err(i, format!("bad name `{t}`"));
    }
    if taken.contains(t) {
        return line.err(i, format!("duplicate name `{t}`"));
    }
    Ok(t.to_string())
}

fn parse_structure(line: &Line, i: usize) -> PResult<Structure> {
    match line.tok(i, "`split` or `induced`")? {
        "split" => Ok(Structure::Split),
        "induced" => Ok(Structure::Induced),
        t => line.err(i, format!("expected `split` or `induced`, found `{t}`")),
    }
}

struct Builder {
    field: FieldSpec,
    vertices: Vec<String>,
    arrows: Vec<(String, String, String)>,
    relations: Vec<Vec<(String, Vec<String>)>>,
    alg: Option<PathAlgebra>,
    names: BTreeSet<String>,
}

impl Builder {
    fn alg(&mut self, line: &Line) -> PResult<PathAlgebra> {
        if let Some(a) = &self.alg {
            return Ok(a.clone());
        }
        let q = Quiver::new(
            self.vertices.clone(),
            self.arrows
                .iter()
                .map(|(l, s, t)| Arrow {
                    label: l.clone(),
                    source: self.vertices.iter().position(|v| v == s).unwrap(),
                    target: self.vertices.iter().position(|v| v == t).unwrap(),
                })
                .collect(),
        )
        .map_err(|e| Diagnostic { line: line.no, col: 1, msg: e.to_string() })?;
        let mut rels = Vec::new();
        for r in &self.relations {
            let mut rel = Vec::new();
            for (c, p) in r {
                let idx: Vec<usize> = p.iter().map(|a| q.arrow_index(a).unwrap()).collect();
                let path = q.path(&idx).map_err(|e| Diagnostic { line: line.no, col: 1, msg: e.to_string() })?;
                let c = self.field.parse(c).map_err(|e| Diagnostic { line: line.no, col: 1, msg: e.to_string() })?;
                rel.push((c, path));
            }
            rels.push(rel);
        }
        let alg = PathAlgebra::new(q, rels, self.field, DEFAULT_MAX_PATH_LENGTH)
            .map_err(|e| Diagnostic { line: line.no, col: 1, msg: format!("algebra: {e}") })?;
        self.alg = Some(alg.clone());
        Ok(alg)
    }

    fn vertex(&self, line: &Line, i: usize) -> PResult<usize> {
        let t = line.tok(i, "a vertex")?;
        self.vertices.iter().position(|v| v == t).map_or_else(|| line.err(i, format!("unknown vertex `{t}`")), Ok)
    }
}

/// Parses a workspace; `field` overrides the `[field]` section.
pub fn parse(text: &str, field: Option<FieldSpec>) -> PResult<Workspace> {
    let mut section: Option<&str> = None;
    let mut by_section: Vec<(&str, Line)> = Vec::new();
    let mut field_line: Option<Line> = None;
    for (k, raw) in text.lines().enumerate() {
        let no = k + 1;
        let trimmed = raw.split('#').next().unwrap_or("").trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(name) = trimmed.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            if let Some(s) = SECTIONS.iter().find(|s| **s == name) {
                section = Some(s);
                continue;
            }
            if !name.contains('[') {
                let col = raw.find('[').map_or(1, |c| c + 1);
                return Err(Diagnostic { line: no, col, msg: format!("unknown section `{name}`") });
            }
        }
        let tokens = tokenize(no, raw)?;
        let line = Line { no, tokens };
        match section {
            None => return line.err(0, "content before the first section header"),
            Some("field") => {
                if field_line.is_some() {
                    return line.err(0, "the field is given twice");
                }
                field_line = Some(line);
            }
            Some(s) => by_section.push((s, line)),
        }
    }
    let field = match (field, &field_line) {
        (Some(f), _) => f,
        (None, Some(l)) => {
            if l.tokens.len() != 1 {
                return l.err(1, "expected a single field spec");
            }
            parse_field(&l.tokens[0].text).or_else(|m| l.err(0, m))?
        }
        (None, None) => FieldSpec::Rationals,
    };
    let mut b = Builder { field, vertices: Vec::new(), arrows: Vec::new(), relations: Vec::new(), alg: None, names: BTreeSet::new() };
    let mut modules: Vec<Named<ModuleDecl, Module>> = Vec::new();
    let mut maps: Vec<Named<(MapEntry, MapDecl), ModuleMap>> = Vec::new();
    let mut subcats: Vec<Named<SubcatDecl, ExactSubcat>> = Vec::new();
    let mut complexes: Vec<Named<ComplexDecl, Complex>> = Vec::new();
    let mut queries = Vec::new();
    // Quiver and relations first so that later sections may come in any order.
    for (s, line) in by_section.iter().filter(|(s, _)| *s == "quiver") {
        let _ = s;
        match line.tok(0, "`vertices` or `arrow`")? {
            "vertices" => {
                for i in 1..line.tokens.len() {
                    let v = check_name(line, i, &b.vertices.iter().cloned().collect())?;
                    b.vertices.push(v);
                }
            }
            "arrow" => {
                let label = line.tok(1, "an arrow label")?.to_string();
                if b.arrows.iter().any(|a| a.0 == label) {
                    return line.err(1, format!("duplicate arrow `{label}`"));
                }
                let s = b.vertex(line, 2)?;
                line.expect(3, "->")?;
                let t = b.vertex(line, 4)?;
                if line.tokens.len() > 5 {
                    return line.err(5, "unexpected token");
                }
                b.arrows.push((label, b.vertices[s].clone(), b.vertices[t].clone()));
            }
            t => return line.err(0, format!("expected `vertices` or `arrow`, found `{t}`")),
        }
    }
    for (_, line) in by_section.iter().filter(|(s, _)| *s == "relations") {
        let mut terms = Vec::new();
        let mut i = 0;
        let mut sign = "";
        while i < line.tokens.len() {
            let t = line.tok(i, "a term")?;
            if t == "+" || t == "-" {
                if !sign.is_empty() {
                    return line.err(i, "two signs in a row");
                }
                sign = if t == "-" { "-" } else { "+" };
                i += 1;
                continue;
            }
            if !terms.is_empty() && sign.is_empty() {
                return line.err(i, "expected `+` or `-` between terms");
            }
            let (coef, path_tok, pi) = if field.parse(t).is_ok() && b.arrows.iter().all(|a| a.0 != t) {
                (t.to_string(), line.tok(i + 1, "a path")?, i + 1)
            } else {
                ("1".to_string(), t, i)
            };
            let path: Vec<String> = path_tok.split('*').map(str::to_string).collect();
            for a in &path {
                if b.arrows.iter().all(|x| &x.0 != a) {
                    return line.err(pi, format!("unknown arrow `{a}`"));
                }
            }
            for w in path.windows(2) {
                let (x, y) = (b.arrows.iter().find(|a| a.0 == w[0]).unwrap(), b.arrows.iter().find(|a| a.0 == w[1]).unwrap());
                if x.2 != y.1 {
                    return line.err(pi, format!("`{}` ends at {} but `{}` starts at {}", w[0], x.2, w[1], y.1));
                }
            }
            let coef = if sign == "-" {
                field.parse(&coef).map(|c| c.neg().to_string()).unwrap_or(coef)
            } else {
                coef
            };
            terms.push((coef, path));
            sign = "";
            i = pi + 1;
        }
        if terms.is_empty() {
            return line.err(0, "empty relation");
        }
        b.relations.push(terms);
    }
    if b.vertices.is_empty() {
        return Err(Diagnostic { line: 1, col: 1, msg: "the quiver has no vertices".into() });
    }
    let first_line = by_section.first().map(|(_, l)| l.clone()).unwrap_or(Line { no: 1, tokens: Vec::new() });
    let alg = b.alg(&first_line)?;
    for (s, line) in &by_section {
        match *s {
            "modules" => {
                let name = check_name(line, 0, &b.names)?;
                line.expect(1, "=")?;
                let (decl, value) = parse_module(&b, &alg, &modules, line)?;
                b.names.insert(name.clone());
                modules.push(Named { name, decl, value });
            }
            "maps" => {
                let name = check_name(line, 0, &b.names)?;
                line.expect(1, ":")?;
                let src = line.tok(2, "a source module")?.to_string();
                line.expect(3, "->")?;
                let tgt = line.tok(4, "a target module")?.to_string();
                line.expect(5, "=")?;
                let x = find(&modules, &src).map(|n| n.value.clone()).map_or_else(|| line.err(2, format!("unknown module `{src}`")), Ok)?;
                let y = find(&modules, &tgt).map(|n| n.value.clone()).map_or_else(|| line.err(4, format!("unknown module `{tgt}`")), Ok)?;
                let (decl, value) = parse_map(&b, &alg, &maps, line, &x, &y)?;
                b.names.insert(name.clone());
                maps.push(Named { name, decl: (MapEntry { source: src, target: tgt }, decl), value });
            }
            "subcategories" => {
                let name = check_name(line, 0, &b.names)?;
                line.expect(1, "=")?;
                let (decl, value) = match line.tok(2, "`add` or `mod`")? {
                    "mod" => {
                        let st = parse_structure(line, 3)?;
                        let e = ExactSubcat::module_category(&alg, MOD_DIM_BOUND).map_err(|e| Diagnostic { line: line.no, col: line.tokens[2].col, msg: e.to_string() })?;
                        let e = ExactSubcat::new(&alg, e.generators, st).map_err(|e| Diagnostic { line: line.no, col: line.tokens[2].col, msg: e.to_string() })?;
                        (SubcatDecl::Mod(st), e)
                    }
                    "add" => {
                        let n = line.tokens.len();
                        if n < 5 {
                            return line.err(n.saturating_sub(1), "expected generators and a structure");
                        }
                        let st = parse_structure(line, n - 1)?;
                        let mut gens = Vec::new();
                        let mut names = Vec::new();
                        for i in 3..n - 1 {
                            let g = line.tok(i, "a module")?;
                            let m = find(&modules, g).map_or_else(|| line.err(i, format!("unknown module `{g}`")), |m| Ok(m.value.clone()))?;
                            gens.push(m);
                            names.push(g.to_string());
                        }
                        let e = ExactSubcat::new(&alg, gens, st).map_err(|e| Diagnostic { line: line.no, col: line.tokens[3].col, msg: e.to_string() })?;
                        (SubcatDecl::Add(names, st), e)
                    }
                    t => return line.err(2, format!("expected `add` or `mod`, found `{t}`")),
                };
                b.names.insert(name.clone());
                subcats.push(Named { name, decl, value });
            }
            "complexes" => {
                let name = check_name(line, 0, &b.names)?;
                line.expect(1, "=")?;
                let (decl, value) = parse_complex(&alg, &modules, &maps, &complexes, line)?;
                b.names.insert(name.clone());
                complexes.push(Named { name, decl, value });
            }
            "queries" => {
                let words = line.texts();
                let (words, expect) = match words.iter().position(|w| *w == "expect") {
                    Some(k) => (words[..k].to_vec(), Some(words[k + 1..].join(" "))),
                    None => (words, None),
                };
                if words.is_empty() {
                    return line.err(0, "empty query");
                }
                queries.push(Query { line: line.no, words: words.iter().map(|w| w.to_string()).collect(), expect });
            }
            _ => {}
        }
    }
    Ok(Workspace {
        field,
        vertices: b.vertices,
        arrows: b.arrows,
        relations: b.relations,
        alg,
        modules,
        maps,
        subcats,
        complexes,
        queries,
    })
}

fn parse_module(b: &Builder, alg: &PathAlgebra, modules: &[Named<ModuleDecl, Module>], line: &Line) -> PResult<(ModuleDecl, Module)> {
    let kind = line.tok(2, "a module expression")?;
    let one_vertex = |ctor: fn(&PathAlgebra, usize) -> Module| -> PResult<(String, Module)> {
        let v = b.vertex(line, 3)?;
        if line.tokens.len() > 4 {
            return line.err(4, "unexpected token");
        }
        Ok((b.vertices[v].clone(), ctor(alg, v)))
    };
    match kind {
        "projective" => one_vertex(Module::projective).map(|(v, m)| (ModuleDecl::Projective(v), m)),
        "injective" => one_vertex(Module::injective).map(|(v, m)| (ModuleDecl::Injective(v), m)),
        "simple" => one_vertex(Module::simple).map(|(v, m)| (ModuleDecl::Simple(v), m)),
        "regular" => Ok((ModuleDecl::Regular, Module::regular(alg))),
        "sum" => {
            let mut parts = Vec::new();
            let mut names = Vec::new();
            for i in 3..line.tokens.len() {
                let t = line.tok(i, "a module")?;
                let m = find(modules, t).map_or_else(|| line.err(i, format!("unknown module `{t}`")), |m| Ok(m.value.clone()))?;
                parts.push(m);
                names.push(t.to_string());
            }
            if parts.is_empty() {
                return line.err(2, "`sum` needs at least one summand");
            }
            Ok((ModuleDecl::Sum(names), direct_sum(alg, &parts).module))
        }
        "rep" => {
            let n = b.vertices.len();
            let mut dims = Vec::new();
            for i in 0..n {
                dims.push(parse_int::<usize>(line, 3 + i, "a dimension")?);
            }
            let mut given: Vec<(String, Vec<Vec<String>>)> = Vec::new();
            for i in 3 + n..line.tokens.len() {
                let t = line.tok(i, "an arrow matrix")?;
                let (a, m) = t.split_once('=').map_or_else(|| line.err(i, format!("expected `arrow=[[..]]`, found `{t}`")), Ok)?;
                let ai = alg.quiver.arrow_index(a).map_or_else(|| line.err(i, format!("unknown arrow `{a}`")), Ok)?;
                if given.iter().any(|g| g.0 == a) {
                    return line.err(i, format!("arrow `{a}` given twice"));
                }
                let lit = parse_matrix_literal(m).or_else(|e| line.err(i, e))?;
                let arrow = &alg.quiver.arrows[ai];
                build_matrix(alg.field, dims[arrow.target], dims[arrow.source], &lit).or_else(|e| line.err(i, format!("arrow `{a}`: {e}")))?;
                given.push((a.to_string(), lit));
            }
            let mut mats = Vec::new();
            for arrow in &alg.quiver.arrows {
                let m = match given.iter().find(|g| g.0 == arrow.label) {
                    Some((_, lit)) => build_matrix(alg.field, dims[arrow.target], dims[arrow.source], lit).unwrap(),
                    None => Matrix::zeros(alg.field, dims[arrow.target], dims[arrow.source]),
                };
                mats.push(m);
            }
            let m = Module::new(alg, dims.clone(), mats).or_else(|e| line.err(2, e.to_string()))?;
            // Canonical form keeps only the nonzero matrices, in arrow order, with reduced entries.
            let canon = alg
                .quiver
                .arrows
                .iter()
                .enumerate()
                .filter(|(i, _)| !m.maps[*i].is_zero())
                .map(|(i, a)| (a.label.clone(), matrix_literal(&m.maps[i])))
                .collect();
            Ok((ModuleDecl::Rep(dims, canon), m))
        }
        t => line.err(2, format!("unknown module expression `{t}`")),
    }
}

fn parse_map(
    b: &Builder,
    alg: &PathAlgebra,
    maps: &[Named<(MapEntry, MapDecl), ModuleMap>],
    line: &Line,
    x: &Module,
    y: &Module,
) -> PResult<(MapDecl, ModuleMap)> {
    let kind = line.tok(6, "a map expression")?;
    let done = |k: usize| -> PResult<()> {
        if line.tokens.len() > k {
            line.err(k, "unexpected token")
        } else {
            Ok(())
        }
    };
    match kind {
        "id" => {
            done(7)?;
            if x != y {
                return line.err(6, "`id` needs equal source and target");
            }
            Ok((MapDecl::Identity, x.identity()))
        }
        "zero" => {
            done(7)?;
            Ok((MapDecl::Zero, ModuleMap::zero(x, y)))
        }
        "basis" => {
            let k: usize = parse_int(line, 7, "a basis index")?;
            done(8)?;
            let basis = hom_basis(alg, x, y);
            let f = basis.get(k).cloned().map_or_else(|| line.err(7, format!("Hom has dimension {}", basis.len())), Ok)?;
            Ok((MapDecl::Basis(k), f))
        }
        "compose" => {
            let g = line.tok(7, "a map")?.to_string();
            let f = line.tok(8, "a map")?.to_string();
            done(9)?;
            let gm = find(maps, &g).map_or_else(|| line.err(7, format!("unknown map `{g}`")), |m| Ok(m.value.clone()))?;
            let fm = find(maps, &f).map_or_else(|| line.err(8, format!("unknown map `{f}`")), |m| Ok(m.value.clone()))?;
            if fm.target != gm.source {
                return line.err(7, format!("`{g}` does not start where `{f}` ends"));
            }
            if fm.source != *x || gm.target != *y {
                return line.err(7, "the composite does not match the declared source and target");
            }
            Ok((MapDecl::Compose(g, f), gm.compose(&fm)))
        }
        "comps" => {
            let mut given: Vec<(usize, Vec<Vec<String>>)> = Vec::new();
            for i in 7..line.tokens.len() {
                let t = line.tok(i, "a vertex matrix")?;
                let (v, m) = t.split_once('=').map_or_else(|| line.err(i, format!("expected `vertex=[[..]]`, found `{t}`")), Ok)?;
                let vi = b.vertices.iter().position(|w| w == v).map_or_else(|| line.err(i, format!("unknown vertex `{v}`")), Ok)?;
                if given.iter().any(|g| g.0 == vi) {
                    return line.err(i, format!("vertex `{v}` given twice"));
                }
                let lit = parse_matrix_literal(m).or_else(|e| line.err(i, e))?;
                build_matrix(alg.field, y.dims[vi], x.dims[vi], &lit).or_else(|e| line.err(i, format!("vertex `{v}`: {e}")))?;
                given.push((vi, lit));
            }
            let comps: Vec<Matrix> = (0..b.vertices.len())
                .map(|v| match given.iter().find(|g| g.0 == v) {
                    Some((_, lit)) => build_matrix(alg.field, y.dims[v], x.dims[v], lit).unwrap(),
                    None => Matrix::zeros(alg.field, y.dims[v], x.dims[v]),
                })
                .collect();
            let probe = ModuleMap { source: x.clone(), target: y.clone(), comps: comps.clone() };
            if let Some(a) = probe.commutation_failure(alg) {
                return line.err(6, format!("the components do not intertwine arrow `{}`", alg.quiver.arrows[a].label));
            }
            let f = ModuleMap::new(alg, x, y, comps).or_else(|e| line.err(6, e.to_string()))?;
            let canon = (0..b.vertices.len())
                .filter(|&v| !f.comps[v].is_zero())
                .map(|v| (b.vertices[v].clone(), matrix_literal(&f.comps[v])))
                .collect();
            Ok((MapDecl::Comps(canon), f))
        }
        t => line.err(6, format!("unknown map expression `{t}`")),
    }
}

fn parse_complex(
    alg: &PathAlgebra,
    modules: &[Named<ModuleDecl, Module>],
    maps: &[Named<(MapEntry, MapDecl), ModuleMap>],
    complexes: &[Named<ComplexDecl, Complex>],
    line: &Line,
) -> PResult<(ComplexDecl, Complex)> {
    match line.tok(2, "`stalk`, `from` or `shift`")? {
        "stalk" => {
            let m = line.tok(3, "a module")?.to_string();
            line.expect(4, "at")?;
            let d: i32 = parse_int(line, 5, "a degree")?;
            if line.tokens.len() > 6 {
                return line.err(6, "unexpected token");
            }
            let mm = find(modules, &m).map_or_else(|| line.err(3, format!("unknown module `{m}`")), |n| Ok(n.value.clone()))?;
            Ok((ComplexDecl::Stalk(m, d), Complex::stalk(alg, &mm, d)))
        }
        "from" => {
            let d: i32 = parse_int(line, 3, "a degree")?;
            line.expect(4, ":")?;
            let mut names = Vec::new();
            let mut diffs: Vec<ModuleMap> = Vec::new();
            for i in 5..line.tokens.len() {
                let t = line.tok(i, "a map")?;
                let f = find(maps, t).map_or_else(|| line.err(i, format!("unknown map `{t}`")), |n| Ok(n.value.clone()))?;
                if let Some(prev) = diffs.last() {
                    if prev.target != f.source {
                        return line.err(i, format!("`{t}` does not start where the previous differential ends"));
                    }
                    if !f.compose(prev).is_zero() {
                        return line.err(i, format!("d∘d is nonzero at `{t}`"));
                    }
                }
                names.push(t.to_string());
                diffs.push(f);
            }
            if diffs.is_empty() {
                return line.err(4, "expected at least one differential");
            }
            let mut terms: Vec<Module> = vec![diffs[0].source.clone()];
            terms.extend(diffs.iter().map(|f| f.target.clone()));
            let c = Complex::new(alg, d, terms, diffs).or_else(|e| line.err(5, e.to_string()))?;
            Ok((ComplexDecl::From(d, names), c))
        }
        "shift" => {
            let c = line.tok(3, "a complex")?.to_string();
            let k: i32 = parse_int(line, 4, "a shift")?;
            if line.tokens.len() > 5 {
                return line.err(5, "unexpected token");
            }
            let x = find(complexes, &c).map_or_else(|| line.err(3, format!("unknown complex `{c}`")), |n| Ok(n.value.clone()))?;
            Ok((ComplexDecl::Shift(c, k), x.shift(k)))
        }
        t => line.err(2, format!("expected `stalk`, `from` or `shift`, found `{t}`")),
    }
}

fn structure_word(s: Structure) -> &'static str {
    match s {
        Structure::Split => "split",
        Structure::Induced => "induced",
    }
}

/// The canonical text of a workspace; parsing it gives back the same text.
pub fn canonical(ws: &Workspace) -> String {
    let mut out = String::new();
    let mut push = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    push("[field]".into());
    push(field_text(ws.field));
    push(String::new());
    push("[quiver]".into());
    push(format!("vertices {}", ws.vertices.join(" ")));
    for (l, s, t) in &ws.arrows {
        push(format!("arrow {l} {s} -> {t}"));
    }
    if !ws.relations.is_empty() {
        push(String::new());
        push("[relations]".into());
        for r in &ws.relations {
            let terms: Vec<String> = r.iter().map(|(c, p)| format!("{c} {}", p.join("*"))).collect();
            push(terms.join(" + "));
        }
    }
    if !ws.modules.is_empty() {
        push(String::new());
        push("[modules]".into());
        for m in &ws.modules {
            let body = match &m.decl {
                ModuleDecl::Projective(v) => format!("projective {v}"),
                ModuleDecl::Injective(v) => format!("injective {v}"),
                ModuleDecl::Simple(v) => format!("simple {v}"),
                ModuleDecl::Regular => "regular".into(),
                ModuleDecl::Sum(p) => format!("sum {}", p.join(" ")),
                ModuleDecl::Rep(d, mats) => {
                    let mut s = format!("rep {}", d.iter().map(usize::to_string).collect::<Vec<_>>().join(" "));
                    for (a, lit) in mats {
                        s.push_str(&format!(" {a}={}", show_matrix(lit)));
                    }
                    s
                }
            };
            push(format!("{} = {body}", m.name));
        }
    }
    if !ws.maps.is_empty() {
        push(String::new());
        push("[maps]".into());
        for m in &ws.maps {
            let (entry, decl) = &m.decl;
            let body = match decl {
                MapDecl::Identity => "id".into(),
                MapDecl::Zero => "zero".into(),
                MapDecl::Basis(k) => format!("basis {k}"),
                MapDecl::Compose(g, f) => format!("compose {g} {f}"),
                MapDecl::Comps(c) => {
                    let mut s = "comps".to_string();
                    for (v, lit) in c {
                        s.push_str(&format!(" {v}={}", show_matrix(lit)));
                    }
                    s
                }
            };
            push(format!("{} : {} -> {} = {body}", m.name, entry.source, entry.target));
        }
    }
    if !ws.subcats.is_empty() {
        push(String::new());
        push("[subcategories]".into());
        for s in &ws.subcats {
            let body = match &s.decl {
                SubcatDecl::Add(g, st) => format!("add {} {}", g.join(" "), structure_word(*st)),
                SubcatDecl::Mod(st) => format!("mod {}", structure_word(*st)),
            };
            push(format!("{} = {body}", s.name));
        }
    }
    if !ws.complexes.is_empty() {
        push(String::new());
        push("[complexes]".into());
        for c in &ws.complexes {
            let body = match &c.decl {
                ComplexDecl::Stalk(m, d) => format!("stalk {m} at {d}"),
                ComplexDecl::From(d, f) => format!("from {d} : {}", f.join(" ")),
                ComplexDecl::Shift(x, k) => format!("shift {x} {k}"),
            };
            push(format!("{} = {body}", c.name));
        }
    }
    if !ws.queries.is_empty() {
        push(String::new());
        push("[queries]".into());
        for q in &ws.queries {
            push(q.to_string());
        }
    }
    out
}
