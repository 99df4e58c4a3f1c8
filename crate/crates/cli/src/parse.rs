//! Line-oriented input format for graphs, maps and substitutions.
//!
//! ```text
//! graph G { vertices: v ; edge a: v -> v ; edge b: v -> v ; }
//! map f: G -> G { a -> a b ; b -> a ; vertex v -> v ; }
//! subst fib over a b { a -> a b ; b -> a ; }
//! ```
//!
//! `~e` is the inverse of edge `e`; `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;
use traintrack::graph::{Edge, Graph, Path, Vertex};
use traintrack::map::GraphMap;
use traintrack::substitution::Substitution;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Sym(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '.' | '\'' | '~')
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap();
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            let at = |msg: String| ParseError {
                line: ln + 1,
                col,
                msg,
            };
            if c.is_whitespace() {
                i += 1;
            } else if c == '-' && chars.get(i + 1) == Some(&'>') {
                out.push(Spanned {
                    tok: Tok::Sym("->"),
                    line: ln + 1,
                    col,
                });
                i += 2;
            } else if let Some(s) = ["{", "}", ";", ":"].into_iter().find(|s| s.starts_with(c)) {
                out.push(Spanned {
                    tok: Tok::Sym(s),
                    line: ln + 1,
                    col,
                });
                i += 1;
            } else if is_word_char(c) {
                let start = i;
                while i < chars.len() && is_word_char(chars[i]) {
                    i += 1;
                }
                let w: String = chars[start..i].iter().collect();
                if let Some(rest) = w.strip_prefix("~~") {
                    return Err(at(format!(
                        "`{w}`: write `{rest}` instead of a double inverse"
                    )));
                }
                if w[1..].contains('~') || w == "~" {
                    return Err(at(format!("`{w}`: `~` may only prefix an edge name")));
                }
                out.push(Spanned {
                    tok: Tok::Word(w),
                    line: ln + 1,
                    col,
                });
            } else {
                return Err(at(format!("unexpected character `{c}`")));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapDecl {
    pub name: String,
    pub domain: String,
    pub codomain: String,
    pub map: GraphMap,
    /// Whether vertex images were written out.
    pub explicit_vertices: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InputDocument {
    pub graphs: Vec<(String, Graph)>,
    pub maps: Vec<MapDecl>,
    pub substs: Vec<(String, Substitution)>,
}

impl InputDocument {
    pub fn graph(&self, name: &str) -> Option<&Graph> {
        self.graphs.iter().find(|(n, _)| n == name).map(|(_, g)| g)
    }

    pub fn map(&self, name: &str) -> Option<&MapDecl> {
        self.maps.iter().find(|m| m.name == name)
    }

    pub fn subst(&self, name: &str) -> Option<&Substitution> {
        self.substs.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn err_at(&self, t: Option<&Spanned>, msg: String) -> ParseError {
        let (line, col) = t.map_or(self.end, |t| (t.line, t.col));
        ParseError { line, col, msg }
    }

    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Result<Spanned, ParseError> {
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| self.err_at(None, "unexpected end of input".into()))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, s: &'static str) -> Result<Spanned, ParseError> {
        let t = self.next()?;
        if t.tok != Tok::Sym(s) {
            return Err(self.err_at(Some(&t), format!("expected `{s}`, found {}", t.tok)));
        }
        Ok(t)
    }

    fn word(&mut self) -> Result<(String, Spanned), ParseError> {
        let t = self.next()?;
        match &t.tok {
            Tok::Word(w) => Ok((w.clone(), t.clone())),
            other => Err(self.err_at(Some(&t), format!("expected a name, found {other}"))),
        }
    }

    fn keyword(&mut self, k: &str) -> Result<(), ParseError> {
        let (w, t) = self.word()?;
        if w != k {
            return Err(self.err_at(Some(&t), format!("expected `{k}`, found `{w}`")));
        }
        Ok(())
    }

    fn at_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Spanned { tok: Tok::Sym(x), .. }) if *x == s)
    }

    fn at_word(&self, k: &str) -> bool {
        matches!(self.peek(), Some(Spanned { tok: Tok::Word(x), .. }) if x == k)
    }

    /// Words up to (not including) the next `;` or `}`.
    fn words_until_end(&mut self) -> Result<Vec<(String, Spanned)>, ParseError> {
        let mut out = Vec::new();
        while !self.at_sym(";") && !self.at_sym("}") {
            out.push(self.word()?);
        }
        Ok(out)
    }

    fn end_stmt(&mut self) -> Result<(), ParseError> {
        if self.at_sym(";") {
            self.pos += 1;
            Ok(())
        } else if self.at_sym("}") {
            Ok(())
        } else {
            let t = self.peek().cloned();
            Err(self.err_at(t.as_ref(), "expected `;`".into()))
        }
    }
}

fn plain_name(p: &Parser, w: &str, t: &Spanned) -> Result<(), ParseError> {
    if w.starts_with('~') {
        return Err(p.err_at(Some(t), format!("`{w}`: names cannot start with `~`")));
    }
    Ok(())
}

fn edge_token(p: &Parser, g: &Graph, w: &str, t: &Spanned) -> Result<Edge, ParseError> {
    let (inv, name) = match w.strip_prefix('~') {
        Some(n) => (true, n),
        None => (false, w),
    };
    let e = g
        .edge_by_name(name)
        .ok_or_else(|| p.err_at(Some(t), format!("unknown edge `{name}`")))?;
    Ok(if inv { e.inv() } else { e })
}

pub fn parse(text: &str) -> Result<InputDocument, ParseError> {
    let toks = lex(text)?;
    let lines = text.lines().count().max(1);
    let mut p = Parser {
        toks,
        pos: 0,
        end: (lines, 1),
    };
    let mut doc = InputDocument::default();
    let mut names: BTreeMap<String, ()> = BTreeMap::new();
    while let Some(t) = p.peek().cloned() {
        let (kind, _) = p.word()?;
        let (name, nt) = p.word()?;
        plain_name(&p, &name, &nt)?;
        match kind.as_str() {
            "graph" => {
                if doc.graph(&name).is_some() {
                    return Err(p.err_at(Some(&nt), format!("graph `{name}` declared twice")));
                }
                let g = parse_graph(&mut p, &nt)?;
                doc.graphs.push((name.clone(), g));
            }
            "map" => {
                if doc.map(&name).is_some() {
                    return Err(p.err_at(Some(&nt), format!("map `{name}` declared twice")));
                }
                let m = parse_map(&mut p, &doc, name.clone())?;
                doc.maps.push(m);
            }
            "subst" => {
                if doc.subst(&name).is_some() {
                    return Err(
                        p.err_at(Some(&nt), format!("substitution `{name}` declared twice"))
                    );
                }
                let s = parse_subst(&mut p, &nt)?;
                doc.substs.push((name.clone(), s));
            }
            other => {
                return Err(p.err_at(
                    Some(&t),
                    format!("expected `graph`, `map` or `subst`, found `{other}`"),
                ));
            }
        }
        names.insert(name, ());
    }
    Ok(doc)
}

fn parse_graph(p: &mut Parser, head: &Spanned) -> Result<Graph, ParseError> {
    p.expect("{")?;
    p.keyword("vertices")?;
    p.expect(":")?;
    let mut vertices = Vec::new();
    for (v, t) in p.words_until_end()? {
        plain_name(p, &v, &t)?;
        vertices.push(v);
    }
    p.end_stmt()?;
    let mut edges = Vec::new();
    while !p.at_sym("}") {
        p.keyword("edge")?;
        let (e, et) = p.word()?;
        plain_name(p, &e, &et)?;
        p.expect(":")?;
        let end = |p: &mut Parser| -> Result<usize, ParseError> {
            let (v, t) = p.word()?;
            vertices
                .iter()
                .position(|x| *x == v)
                .ok_or_else(|| p.err_at(Some(&t), format!("unknown vertex `{v}`")))
        };
        let a = end(p)?;
        p.expect("->")?;
        let b = end(p)?;
        p.end_stmt()?;
        edges.push((e, a, b));
    }
    p.expect("}")?;
    Graph::new(vertices, edges).map_err(|e| p.err_at(Some(head), e.to_string()))
}

fn parse_map(p: &mut Parser, doc: &InputDocument, name: String) -> Result<MapDecl, ParseError> {
    p.expect(":")?;
    let (dom, dt) = p.word()?;
    p.expect("->")?;
    let (cod, ct) = p.word()?;
    let g1 = doc
        .graph(&dom)
        .ok_or_else(|| p.err_at(Some(&dt), format!("unknown graph `{dom}`")))?
        .clone();
    let g2 = doc
        .graph(&cod)
        .ok_or_else(|| p.err_at(Some(&ct), format!("unknown graph `{cod}`")))?
        .clone();
    let open = p.expect("{")?;
    let mut images: Vec<Option<Path>> = vec![None; g1.edge_count()];
    let mut vimg: Vec<Option<Vertex>> = vec![None; g1.vertex_count()];
    let mut explicit_vertices = false;
    while !p.at_sym("}") {
        if p.at_word("vertex") {
            p.pos += 1;
            let (v, vt) = p.word()?;
            let src = g1
                .vertex_by_name(&v)
                .ok_or_else(|| p.err_at(Some(&vt), format!("unknown vertex `{v}`")))?;
            p.expect("->")?;
            let (w, wt) = p.word()?;
            let dst = g2
                .vertex_by_name(&w)
                .ok_or_else(|| p.err_at(Some(&wt), format!("unknown vertex `{w}`")))?;
            vimg[src.index()] = Some(dst);
            explicit_vertices = true;
        } else {
            let (e, et) = p.word()?;
            if let Some(name) = e.strip_prefix('~') {
                return Err(p.err_at(
                    Some(&et),
                    format!("give the image of `{name}` rather than `{e}`"),
                ));
            }
            let src = edge_token(p, &g1, &e, &et)?;
            p.expect("->")?;
            let mut img = Vec::new();
            for (w, wt) in p.words_until_end()? {
                img.push(edge_token(p, &g2, &w, &wt)?);
            }
            if images[src.index()].replace(img).is_some() {
                return Err(p.err_at(Some(&et), format!("image of `{e}` given twice")));
            }
        }
        p.end_stmt()?;
    }
    p.expect("}")?;
    let images: Vec<Path> = images
        .into_iter()
        .enumerate()
        .map(|(i, x)| {
            x.ok_or_else(|| {
                p.err_at(
                    Some(&open),
                    format!("no image for edge `{}`", g1.edge_name(i)),
                )
            })
        })
        .collect::<Result<_, _>>()?;
    let map = if explicit_vertices {
        let mut inferred = GraphMap::infer(g1.clone(), g2.clone(), images.clone()).ok();
        let vimg: Vec<Vertex> = vimg
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.or_else(|| inferred.as_mut().map(|m| m.vertex_image(Vertex(i as u32))))
                    .ok_or_else(|| {
                        p.err_at(
                            Some(&open),
                            format!("no image for vertex `{}`", g1.vertex_name(Vertex(i as u32))),
                        )
                    })
            })
            .collect::<Result<_, _>>()?;
        GraphMap::new(g1, g2, vimg, images)
    } else {
        GraphMap::infer(g1, g2, images)
    }
    .map_err(|e| p.err_at(Some(&open), e.to_string()))?;
    Ok(MapDecl {
        name,
        domain: dom,
        codomain: cod,
        map,
        explicit_vertices,
    })
}

fn parse_subst(p: &mut Parser, head: &Spanned) -> Result<Substitution, ParseError> {
    p.keyword("over")?;
    let mut alphabet = Vec::new();
    while !p.at_sym("{") {
        let (a, t) = p.word()?;
        plain_name(p, &a, &t)?;
        alphabet.push(a);
    }
    p.expect("{")?;
    let mut images: Vec<Option<Vec<usize>>> = vec![None; alphabet.len()];
    while !p.at_sym("}") {
        let (a, at) = p.word()?;
        let i = alphabet
            .iter()
            .position(|x| *x == a)
            .ok_or_else(|| p.err_at(Some(&at), format!("unknown letter `{a}`")))?;
        p.expect("->")?;
        let mut img = Vec::new();
        for (w, wt) in p.words_until_end()? {
            let j = alphabet
                .iter()
                .position(|x| *x == w)
                .ok_or_else(|| p.err_at(Some(&wt), format!("unknown letter `{w}`")))?;
            img.push(j);
        }
        if images[i].replace(img).is_some() {
            return Err(p.err_at(Some(&at), format!("image of `{a}` given twice")));
        }
        p.end_stmt()?;
    }
    p.expect("}")?;
    let images: Vec<Vec<usize>> = images
        .into_iter()
        .enumerate()
        .map(|(i, x)| {
            x.ok_or_else(|| p.err_at(Some(head), format!("no image for letter `{}`", alphabet[i])))
        })
        .collect::<Result<_, _>>()?;
    Substitution::new(alphabet, images).map_err(|e| p.err_at(Some(head), e.to_string()))
}

/// Canonical text of a document; parsing it gives the document back.
pub fn print(doc: &InputDocument) -> String {
    let mut s = String::new();
    for (name, g) in &doc.graphs {
        s += &format!(
            "graph {name} {{\n  vertices: {};\n",
            g.vertex_names().join(" ")
        );
        for e in g.positive_edges() {
            let (a, b) = g.ends(e.index());
            s += &format!(
                "  edge {}: {} -> {};\n",
                g.edge_name(e.index()),
                g.vertex_name(a),
                g.vertex_name(b)
            );
        }
        s += "}\n";
    }
    for m in &doc.maps {
        let (g1, g2) = (m.map.domain(), m.map.codomain());
        s += &format!("map {}: {} -> {} {{\n", m.name, m.domain, m.codomain);
        for e in g1.positive_edges() {
            let img = g2.path_string(&m.map.image(e));
            let sep = if img.is_empty() { "" } else { " " };
            s += &format!("  {} ->{sep}{img};\n", g1.edge_name(e.index()));
        }
        if m.explicit_vertices {
            for v in g1.vertices() {
                s += &format!(
                    "  vertex {} -> {};\n",
                    g1.vertex_name(v),
                    g2.vertex_name(m.map.vertex_image(v))
                );
            }
        }
        s += "}\n";
    }
    for (name, sub) in &doc.substs {
        s += &format!("subst {name} over {} {{\n", sub.alphabet().join(" "));
        for (i, a) in sub.alphabet().iter().enumerate() {
            s += &format!("  {a} -> {};\n", sub.word_string(&sub.images()[i]));
        }
        s += "}\n";
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIB: &str = "# golden rotation
graph R { vertices: v ; edge a: v -> v ; edge b: v -> v }
map f: R -> R { a -> a b ; b -> a }
";

    #[test]
    fn fibonacci_file() {
        let doc = parse(FIB).unwrap();
        let m = &doc.map("f").unwrap().map;
        assert_eq!(m.image(Edge(0)), vec![Edge(0), Edge(2)]);
        let text = print(&doc);
        assert_eq!(parse(&text).unwrap(), doc);
        assert_eq!(print(&parse(&text).unwrap()), text);
    }

    #[test]
    fn undeclared_edge() {
        let err = parse("graph R { vertices: v ; edge a: v -> v }\nmap f: R -> R {\n  a -> a c\n}")
            .unwrap_err();
        assert_eq!((err.line, err.col), (3, 10));
        assert!(err.msg.contains("`c`"));
    }

    #[test]
    fn double_inverse() {
        let err = parse("graph R { vertices: v ; edge a: v -> v }\nmap f: R -> R { a -> ~~a }")
            .unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.msg.contains("double inverse"));
    }

    #[test]
    fn substitution() {
        let doc = parse("subst fib over a b { a -> a b; b -> a }").unwrap();
        let s = doc.subst("fib").unwrap();
        assert_eq!(
            s,
            &Substitution::parse(&[("a", "a b"), ("b", "a")]).unwrap()
        );
    }

    #[test]
    fn explicit_vertices_and_inverses() {
        let text = "graph T { vertices: p q ; edge x: p -> q ; edge y: p -> q ; edge z: p -> q }
map g: T -> T { x -> y ; y -> z ~x y ; z -> x ; vertex p -> p ; vertex q -> q }";
        let doc = parse(text).unwrap();
        let m = doc.map("g").unwrap();
        assert!(m.explicit_vertices);
        assert_eq!(parse(&print(&doc)).unwrap(), doc);
        let bad = parse("graph T { vertices: p q ; edge x: p -> q ; edge y: p -> q }\nmap g: T -> T { x -> ~x ; y -> y }");
        assert!(bad.is_err());
    }
}
