use std::collections::BTreeMap;

use crate::bag::{Bag, ClassId, Colour, Domain};
use crate::gts::{self, Graph, GraphError};
use crate::model::{ArcFunction, ArcKind, ClassFunction, ColourClass, Elem, FunctionTuple, Guard, ModelError,
    NetBuilder, PlaceId, Variable};

use super::lexer::{lex, Tok, Token};
use super::{Model, ParseError, ParseErrorKind, ParseOptions, Signature, SourceSpan};

type Result<T> = std::result::Result<T, ParseError>;

pub(crate) struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    file: Option<&'a str>,
}

impl<'a> Parser<'a> {
    pub fn new(toks: &'a [Token], file: Option<&'a str>) -> Self {
        Parser { toks, pos: 0, file }
    }

    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&'a Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    /// Span of the next token, or just past the last one.
    fn span(&self) -> SourceSpan {
        match self.toks.get(self.pos) {
            Some(t) => t.span.clone(),
            None => match self.toks.last() {
                Some(t) => SourceSpan { col_start: t.span.col_end, col_end: t.span.col_end + 1, ..t.span.clone() },
                None => SourceSpan { file: self.file.map(str::to_string), line: 1, col_start: 1, col_end: 2 },
            },
        }
    }

    fn prev_span(&self) -> SourceSpan {
        self.toks[self.pos.saturating_sub(1)].span.clone()
    }

    fn bump(&mut self) -> &'a Token {
        let t = &self.toks[self.pos];
        self.pos += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let found = self.peek().map(Tok::describe).unwrap_or_else(|| "end of input".to_string());
        ParseError::new(ParseErrorKind::Syntax { expected: expected.to_string(), found }, self.span())
    }

    fn expect(&mut self, tok: Tok) -> Result<SourceSpan> {
        if self.peek() == Some(&tok) {
            Ok(self.bump().span.clone())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, SourceSpan)> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let span = self.bump().span.clone();
                Ok((s.clone(), span))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn int(&mut self, what: &str) -> Result<(u64, SourceSpan)> {
        match self.peek() {
            Some(Tok::Int(i)) => {
                let span = self.bump().span.clone();
                Ok((*i, span))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    pub fn finish(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    /// `R1(nd4,nd1,nd2)`.
    pub fn instance(&mut self, net: &crate::model::Net) -> Result<crate::engine::Instance> {
        let (name, span) = self.ident("transition name")?;
        let t = net.transition_id(&name).ok_or_else(|| {
            ParseError::new(ParseErrorKind::UnknownIdentifier(format!("transition {}", name)), span.clone())
        })?;
        let vars = &net.transition(t).vars;
        self.expect(Tok::LParen)?;
        let mut binding = Vec::new();
        if !self.eat(&Tok::RParen) {
            loop {
                let (c, cs) = self.ident("colour")?;
                let Some(v) = vars.get(binding.len()) else {
                    return Err(ParseError::new(ParseErrorKind::Arity { expected: vars.len(), found: binding.len() + 1 }, cs));
                };
                let index = colour_index(net.class(v.class), &c).ok_or_else(|| {
                    ParseError::new(ParseErrorKind::UnknownIdentifier(format!("colour {}", c)), cs.clone())
                })?;
                binding.push(Colour::new(v.class, index));
                if !self.eat(&Tok::Comma) {
                    self.expect(Tok::RParen)?;
                    break;
                }
            }
        }
        if binding.len() != vars.len() {
            return Err(ParseError::new(ParseErrorKind::Arity { expected: vars.len(), found: binding.len() }, span));
        }
        Ok(crate::engine::Instance::new(t, binding))
    }

    fn join(a: &SourceSpan, b: &SourceSpan) -> SourceSpan {
        if a.line == b.line {
            SourceSpan { col_end: b.col_end, ..a.clone() }
        } else {
            a.clone()
        }
    }

    // ---- guards ----

    pub fn guard(&mut self, classes: &[ColourClass], vars: &[(String, ClassId)]) -> Result<Guard> {
        let mut g = self.guard_and(classes, vars)?;
        while self.eat(&Tok::OrOr) {
            let r = self.guard_and(classes, vars)?;
            g = Guard::Or(Box::new(g), Box::new(r));
        }
        Ok(g)
    }

    fn guard_and(&mut self, classes: &[ColourClass], vars: &[(String, ClassId)]) -> Result<Guard> {
        let mut g = self.guard_unary(classes, vars)?;
        while self.eat(&Tok::AndAnd) {
            let r = self.guard_unary(classes, vars)?;
            g = Guard::And(Box::new(g), Box::new(r));
        }
        Ok(g)
    }

    fn guard_unary(&mut self, classes: &[ColourClass], vars: &[(String, ClassId)]) -> Result<Guard> {
        if self.eat(&Tok::Bang) {
            return Ok(Guard::Not(Box::new(self.guard_unary(classes, vars)?)));
        }
        if self.eat(&Tok::LParen) {
            let g = self.guard(classes, vars)?;
            self.expect(Tok::RParen)?;
            return Ok(g);
        }
        if self.eat_keyword("true") {
            return Ok(Guard::True);
        }
        if self.eat_keyword("false") {
            return Ok(Guard::False);
        }
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == "same") && self.peek_at(1) == Some(&Tok::LParen) {
            self.pos += 2;
            let (a, ca, sa) = self.var_ref(vars)?;
            self.expect(Tok::Comma)?;
            let (b, cb, _) = self.var_ref(vars)?;
            let end = self.expect(Tok::RParen)?;
            same_class(classes, ca, cb, &Self::join(&sa, &end))?;
            return Ok(Guard::SameSubclass(a, b));
        }
        let (a, ca, sa) = self.var_ref(vars)?;
        match self.peek() {
            Some(Tok::Eq) | Some(Tok::EqEq) | Some(Tok::Neq) => {
                let eq = self.peek() != Some(&Tok::Neq);
                self.pos += 1;
                let (b, cb, sb) = self.var_ref(vars)?;
                same_class(classes, ca, cb, &Self::join(&sa, &sb))?;
                Ok(if eq { Guard::Eq(a, b) } else { Guard::Neq(a, b) })
            }
            Some(Tok::Ident(s)) if s == "in" => {
                self.pos += 1;
                let (name, span) = self.ident("subclass name")?;
                let q = classes[ca.0]
                    .subclass_index(&name)
                    .ok_or_else(|| ParseError::new(ParseErrorKind::UnknownIdentifier(name.clone()), span))?;
                Ok(Guard::In(a, q))
            }
            _ => Err(self.unexpected("`=`, `!=` or `in`")),
        }
    }

    /// A variable name, or `#k` for a codomain position.
    fn var_ref(&mut self, vars: &[(String, ClassId)]) -> Result<(usize, ClassId, SourceSpan)> {
        let (name, span) = match self.peek() {
            Some(Tok::Hash) => {
                let s = self.bump().span.clone();
                let (k, e) = self.int("position")?;
                (format!("#{}", k), Self::join(&s, &e))
            }
            Some(Tok::Ident(_)) => self.ident("variable")?,
            _ => return Err(self.unexpected("variable")),
        };
        match vars.iter().position(|(n, _)| *n == name) {
            Some(i) => Ok((i, vars[i].1, span)),
            None => Err(ParseError::new(ParseErrorKind::UnknownVariable(name), span)),
        }
    }

    // ---- arc functions ----

    fn coefficient(&mut self) -> Result<Option<(u64, SourceSpan)>> {
        if let Some(Tok::Int(_)) = self.peek() {
            let c = self.int("coefficient")?;
            self.eat(&Tok::Star);
            Ok(Some(c))
        } else {
            Ok(None)
        }
    }

    pub fn class_function(
        &mut self,
        class: ClassId,
        classes: &[ColourClass],
        vars: &[(String, ClassId)],
    ) -> Result<ClassFunction> {
        let mut terms = Vec::new();
        let mut sign = if self.eat(&Tok::Minus) { -1 } else { 1 };
        loop {
            let start = self.span();
            let k = match self.coefficient()? {
                Some((k, span)) => i64::try_from(k).map_err(|_| {
                    ParseError::new(ParseErrorKind::Lexical(format!("coefficient {} out of range", k)), span)
                })?,
                None => 1,
            };
            let elem = self.elem(class, classes, vars, &start)?;
            terms.push((sign * k, elem));
            sign = match self.peek() {
                Some(Tok::Plus) => 1,
                Some(Tok::Minus) => -1,
                _ => break,
            };
            self.pos += 1;
        }
        Ok(ClassFunction { terms })
    }

    fn elem(&mut self, class: ClassId, classes: &[ColourClass], vars: &[(String, ClassId)], start: &SourceSpan) -> Result<Elem> {
        let succ = self.eat(&Tok::PlusPlus);
        let (name, span) = self.ident("class function term")?;
        if !succ && name == "All" {
            return Ok(Elem::All);
        }
        if let Some(i) = vars.iter().position(|(n, _)| *n == name) {
            if vars[i].1 != class {
                return Err(ParseError::new(
                    ParseErrorKind::ClassMismatch(format!(
                        "variable {} has class {}, component expects {}",
                        name, classes[vars[i].1 .0].name, classes[class.0].name
                    )),
                    span,
                ));
            }
            if succ && !classes[class.0].ordered {
                return Err(ParseError::new(
                    ParseErrorKind::ClassMismatch(format!("successor on unordered class {}", classes[class.0].name)),
                    Self::join(start, &span),
                ));
            }
            return Ok(if succ { Elem::Succ(i) } else { Elem::Proj(i) });
        }
        if !succ {
            if let Some(q) = classes[class.0].subclass_index(&name) {
                return Ok(Elem::Subclass(q));
            }
        }
        Err(ParseError::new(ParseErrorKind::UnknownIdentifier(name), span))
    }

    /// Number of top-level components of the tuple starting at `<`.
    fn tuple_arity(&self) -> usize {
        let mut n = 1;
        for t in &self.toks[self.pos + 1..] {
            match t.tok {
                Tok::Comma => n += 1,
                Tok::Gt => break,
                _ => {}
            }
        }
        if self.peek_at(1) == Some(&Tok::Gt) {
            0
        } else {
            n
        }
    }

    fn tuple_span(&self) -> SourceSpan {
        let start = self.span();
        let end = self.toks[self.pos..].iter().find(|t| t.tok == Tok::Gt).map(|t| t.span.clone());
        match end {
            Some(e) => Self::join(&start, &e),
            None => start,
        }
    }

    fn check_arity(&self, domain: &Domain) -> Result<()> {
        let found = self.tuple_arity();
        if found != domain.arity() {
            return Err(ParseError::new(
                ParseErrorKind::Arity { expected: domain.arity(), found },
                self.tuple_span(),
            ));
        }
        Ok(())
    }

    fn is_zero(&self) -> bool {
        self.peek() == Some(&Tok::Int(0))
            && !matches!(self.peek_at(1), Some(Tok::Star) | Some(Tok::Lt) | Some(Tok::LBracket))
    }

    pub fn arc_function(&mut self, sig: &Signature) -> Result<ArcFunction> {
        if self.is_zero() {
            self.pos += 1;
            return Ok(ArcFunction::null());
        }
        let positions = sig.positions();
        let mut terms = Vec::new();
        loop {
            let lambda = self.coefficient()?.map_or(1, |(k, _)| k);
            let cofilter = if self.eat(&Tok::LBracket) {
                let g = self.guard(sig.classes, &positions)?;
                self.expect(Tok::RBracket)?;
                Some(g)
            } else {
                None
            };
            if self.peek() != Some(&Tok::Lt) {
                return Err(self.unexpected("`<`"));
            }
            self.check_arity(&sig.codomain)?;
            self.pos += 1;
            let mut components = Vec::new();
            for (i, class) in sig.codomain.0.iter().enumerate() {
                if i > 0 {
                    self.expect(Tok::Comma)?;
                }
                components.push(self.class_function(*class, sig.classes, &sig.vars)?);
            }
            self.expect(Tok::Gt)?;
            let filter = if self.eat(&Tok::LBracket) {
                let g = self.guard(sig.classes, &sig.vars)?;
                self.expect(Tok::RBracket)?;
                Some(g)
            } else {
                None
            };
            terms.push((lambda, FunctionTuple { components, filter, cofilter }));
            if !self.eat(&Tok::Plus) {
                break;
            }
        }
        Ok(ArcFunction { terms })
    }

    // ---- bag literals ----

    pub fn bag(&mut self, classes: &[ColourClass], domain: &Domain) -> Result<Bag> {
        let mut out = Bag::empty(domain.clone());
        if self.is_zero() {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            let start = self.span();
            let k = self.coefficient()?.map_or(1, |(k, _)| k);
            if self.peek() != Some(&Tok::Lt) {
                return Err(self.unexpected("`<`"));
            }
            self.check_arity(domain)?;
            self.pos += 1;
            let mut acc = Bag::from_entries(Domain::neutral(), [(Vec::new(), 1)]).expect("neutral bag");
            for (i, class) in domain.0.iter().enumerate() {
                if i > 0 {
                    self.expect(Tok::Comma)?;
                }
                let comp = self.bag_component(*class, classes)?;
                acc = acc.product(&comp).map_err(|e| bag_error(e, &start))?;
            }
            let end = self.expect(Tok::Gt)?;
            let scaled = acc.scalar(k).map_err(|e| bag_error(e, &Self::join(&start, &end)))?;
            out = out.sum(&scaled).map_err(|e| bag_error(e, &Self::join(&start, &end)))?;
            if !self.eat(&Tok::Plus) {
                break;
            }
        }
        Ok(out)
    }

    fn bag_component(&mut self, class: ClassId, classes: &[ColourClass]) -> Result<Bag> {
        let cc = &classes[class.0];
        let mut bag = Bag::empty(Domain(vec![class]));
        loop {
            let (name, span) = self.ident("colour")?;
            let colours: Vec<u32> = if name == "All" {
                (0..cc.size).collect()
            } else if let Some(q) = cc.subclass_index(&name) {
                cc.subclass_range(q).expect("subclass").collect()
            } else {
                vec![colour_index(cc, &name).ok_or_else(|| {
                    ParseError::new(ParseErrorKind::UnknownIdentifier(name.clone()), span.clone())
                })?]
            };
            for i in colours {
                let key = vec![Colour::new(class, i)];
                let m = bag.get(&key);
                bag.insert(key, m + 1).map_err(|e| bag_error(e, &span))?;
            }
            if !self.eat(&Tok::Plus) {
                break;
            }
        }
        Ok(bag)
    }

    // ---- graphs ----

    /// `node`/`edge` statements up to the end of input or a closing brace.
    pub fn graph_body(&mut self) -> Result<Graph> {
        let mut g = Graph::new();
        loop {
            match self.peek() {
                None | Some(Tok::RBrace) => break,
                _ => {}
            }
            if self.eat_keyword("node") {
                let (id, span) = self.node_id()?;
                g.add_node(&id).map_err(|e| ParseError::new(ParseErrorKind::Graph(e), span))?;
            } else if self.eat_keyword("edge") {
                let (a, sa) = self.node_id()?;
                let (b, sb) = self.node_id()?;
                g.add_edge(&a, &b).map_err(|e| {
                    let span = match &e {
                        GraphError::Dangling(n) if *n == a => sa.clone(),
                        GraphError::Dangling(_) => sb.clone(),
                        _ => Self::join(&sa, &sb),
                    };
                    ParseError::new(ParseErrorKind::Graph(e), span)
                })?;
            } else {
                return Err(self.unexpected("`node` or `edge`"));
            }
            self.eat(&Tok::Semi);
        }
        Ok(g)
    }

    fn node_id(&mut self) -> Result<(String, SourceSpan)> {
        match self.peek() {
            Some(Tok::Ident(s)) | Some(Tok::Str(s)) => {
                let span = self.bump().span.clone();
                Ok((s.clone(), span))
            }
            Some(Tok::Int(i)) => {
                let span = self.bump().span.clone();
                Ok((i.to_string(), span))
            }
            _ => Err(self.unexpected("node id")),
        }
    }
}

fn same_class(classes: &[ColourClass], a: ClassId, b: ClassId, span: &SourceSpan) -> Result<()> {
    if a != b {
        return Err(ParseError::new(
            ParseErrorKind::ClassMismatch(format!("comparing {} with {}", classes[a.0].name, classes[b.0].name)),
            span.clone(),
        ));
    }
    Ok(())
}

fn bag_error(e: crate::bag::BagError, span: &SourceSpan) -> ParseError {
    ParseError::new(ParseErrorKind::Model(ModelError::Bag(e)), span.clone())
}

/// `nd3` -> index 2 for a class with prefix `nd`.
pub(crate) fn colour_index(cc: &ColourClass, name: &str) -> Option<u32> {
    let rest = name.strip_prefix(cc.prefix.as_str())?;
    if rest.is_empty() || rest.starts_with('0') || !rest.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let i: u32 = rest.parse().ok()?;
    (1..=cc.size).contains(&i).then_some(i - 1)
}

/// Class inferred for an untyped transition parameter.
pub(crate) fn infer_class(classes: &[ColourClass], var: &str) -> Option<ClassId> {
    let stem = var.trim_end_matches(|c: char| c.is_ascii_digit()).to_lowercase();
    if let Some(i) = classes.iter().position(|c| c.name.to_lowercase() == stem) {
        return Some(ClassId(i));
    }
    (classes.len() == 1).then_some(ClassId(0))
}

pub(crate) struct ModelParser<'o> {
    options: &'o ParseOptions,
    builder: NetBuilder,
    markings: BTreeMap<PlaceId, Bag>,
    graph: Option<(Graph, SourceSpan)>,
    declared: bool,
}

const DEFAULT_N: u32 = 8;

impl<'o> ModelParser<'o> {
    pub fn new(options: &'o ParseOptions) -> Self {
        ModelParser { options, builder: NetBuilder::new(), markings: BTreeMap::new(), graph: None, declared: false }
    }

    pub fn run(mut self, toks: &[Token], file: Option<&str>) -> Result<Model> {
        let mut p = Parser::new(toks, file);
        self.statements(&mut p)?;
        let end = p.span();
        if !self.declared {
            return Err(ParseError::new(ParseErrorKind::NoNet, end));
        }
        let net = self.builder.build().map_err(|e| ParseError::new(ParseErrorKind::Model(e), end.clone()))?;
        let mut initial = net.empty_marking();
        if let Some((g, span)) = &self.graph {
            initial = gts::encode(&net, g).map_err(|e| ParseError::new(ParseErrorKind::Graph(e), span.clone()))?;
        }
        for (p, b) in self.markings {
            initial.set(p, b);
        }
        Ok(Model { net, initial })
    }

    fn statements(&mut self, p: &mut Parser) -> Result<()> {
        while !p.at_end() {
            let (kw, span) = p.ident("statement")?;
            match kw.as_str() {
                "class" => self.class(p)?,
                "place" => self.place(p)?,
                "trans" => self.transition(p)?,
                "arc" => self.arc(p)?,
                "marking" => self.marking(p)?,
                "rule" => self.rule(p)?,
                "graph" => self.graph(p, span)?,
                _ => {
                    p.pos -= 1;
                    return Err(p.unexpected("`class`, `place`, `trans`, `arc`, `marking`, `rule` or `graph`"));
                }
            }
        }
        Ok(())
    }

    fn model_err(e: ModelError, span: SourceSpan) -> ParseError {
        let kind = match e {
            ModelError::Arity { expected, found } => ParseErrorKind::Arity { expected, found },
            ModelError::UnknownIdentifier(s) => ParseErrorKind::UnknownIdentifier(s),
            other => ParseErrorKind::Model(other),
        };
        ParseError::new(kind, span)
    }

    fn class(&mut self, p: &mut Parser) -> Result<()> {
        let (name, nspan) = p.ident("class name")?;
        p.expect(Tok::Eq)?;
        let mut class = ColourClass::new(&name, 0);
        if let Some(Tok::Int(_)) = p.peek() {
            let (size, span) = p.int("class size")?;
            class.size = u32::try_from(size)
                .map_err(|_| ParseError::new(ParseErrorKind::Lexical("class size out of range".into()), span))?;
            class.ordered = p.eat_keyword("ordered");
        } else {
            loop {
                let (sub, _) = p.ident("subclass name")?;
                p.expect(Tok::Colon)?;
                let (size, span) = p.int("subclass size")?;
                let size = u32::try_from(size)
                    .map_err(|_| ParseError::new(ParseErrorKind::Lexical("size out of range".into()), span))?;
                class.subclasses.push((sub, size));
                class.size += size;
                if !p.eat(&Tok::Plus) {
                    break;
                }
            }
        }
        if let Some(size) = self.options.class_sizes.get(&name) {
            if !class.subclasses.is_empty() {
                return Err(ParseError::new(
                    ParseErrorKind::ClassMismatch(format!("cannot resize partitioned class {}", name)),
                    nspan,
                ));
            }
            class.size = *size;
        }
        p.expect(Tok::Semi)?;
        self.builder.add_class(class).map_err(|e| Self::model_err(e, nspan))?;
        self.declared = true;
        Ok(())
    }

    fn class_ref(&self, p: &mut Parser) -> Result<ClassId> {
        let (name, span) = p.ident("class name")?;
        self.builder.net().class_id(&name).ok_or_else(|| ParseError::new(ParseErrorKind::UnknownIdentifier(name), span))
    }

    fn place(&mut self, p: &mut Parser) -> Result<()> {
        let (name, span) = p.ident("place name")?;
        p.expect(Tok::Colon)?;
        let mut domain = vec![self.class_ref(p)?];
        while p.eat(&Tok::Star) {
            domain.push(self.class_ref(p)?);
        }
        p.expect(Tok::Semi)?;
        self.builder.add_place(&name, Domain(domain)).map_err(|e| Self::model_err(e, span))?;
        self.declared = true;
        Ok(())
    }

    fn transition(&mut self, p: &mut Parser) -> Result<()> {
        let (name, span) = p.ident("transition name")?;
        let mut vars = Vec::new();
        if p.eat(&Tok::LParen) && !p.eat(&Tok::RParen) {
            loop {
                let (v, vspan) = p.ident("variable")?;
                let class = if p.eat(&Tok::Colon) {
                    self.class_ref(p)?
                } else {
                    infer_class(self.builder.net().classes(), &v).ok_or_else(|| {
                        ParseError::new(
                            ParseErrorKind::UnknownIdentifier(format!("class of variable {}", v)),
                            vspan.clone(),
                        )
                    })?
                };
                vars.push(Variable { name: v, class });
                if !p.eat(&Tok::Comma) {
                    break;
                }
            }
            p.expect(Tok::RParen)?;
        }
        let table: Vec<(String, ClassId)> = vars.iter().map(|v| (v.name.clone(), v.class)).collect();
        let guard = if p.eat(&Tok::LBracket) {
            let g = p.guard(self.builder.net().classes(), &table)?;
            p.expect(Tok::RBracket)?;
            g
        } else {
            Guard::True
        };
        p.expect(Tok::Semi)?;
        self.builder.add_transition(&name, vars, guard).map_err(|e| Self::model_err(e, span))?;
        self.declared = true;
        Ok(())
    }

    fn place_ref(&self, p: &mut Parser) -> Result<PlaceId> {
        let (name, span) = p.ident("place name")?;
        self.builder.net().place_id(&name).ok_or_else(|| ParseError::new(ParseErrorKind::UnknownIdentifier(name), span))
    }

    fn arc(&mut self, p: &mut Parser) -> Result<()> {
        let (kw, kspan) = p.ident("arc kind")?;
        let net = self.builder.net();
        let trans_ref = |p: &mut Parser| -> Result<_> {
            let (name, span) = p.ident("transition name")?;
            net.transition_id(&name).ok_or_else(|| ParseError::new(ParseErrorKind::UnknownIdentifier(name), span))
        };
        let (kind, place, t) = match kw.as_str() {
            "in" => {
                let pl = self.place_ref(p)?;
                p.expect(Tok::Arrow)?;
                (ArcKind::Input, pl, trans_ref(p)?)
            }
            "out" => {
                let t = trans_ref(p)?;
                p.expect(Tok::Arrow)?;
                (ArcKind::Output, self.place_ref(p)?, t)
            }
            "inh" => {
                let pl = self.place_ref(p)?;
                p.expect(Tok::Minus)?;
                if !p.eat_keyword("o") {
                    return Err(p.unexpected("`-o`"));
                }
                (ArcKind::Inhibitor, pl, trans_ref(p)?)
            }
            _ => return Err(ParseError::new(
                ParseErrorKind::Syntax { expected: "`in`, `out` or `inh`".into(), found: format!("`{}`", kw) },
                kspan,
            )),
        };
        p.expect(Tok::Colon)?;
        let start = p.span();
        let f = p.arc_function(&Signature::of_arc(net, t, place))?;
        let span = Parser::join(&start, &p.prev_span());
        p.expect(Tok::Semi)?;
        self.builder.add_arc(kind, place, t, f).map_err(|e| Self::model_err(e, span))?;
        Ok(())
    }

    fn marking(&mut self, p: &mut Parser) -> Result<()> {
        let (name, span) = p.ident("place name")?;
        let place = self
            .builder
            .net()
            .place_id(&name)
            .ok_or_else(|| ParseError::new(ParseErrorKind::UnknownIdentifier(name.clone()), span.clone()))?;
        p.expect(Tok::Eq)?;
        let net = self.builder.net();
        let bag = p.bag(net.classes(), &net.place(place).domain)?;
        p.expect(Tok::Semi)?;
        if self.markings.insert(place, bag).is_some() {
            return Err(ParseError::new(ParseErrorKind::Model(ModelError::Duplicate(format!("marking of {}", name))), span));
        }
        Ok(())
    }

    fn ensure_graph_places(&mut self, span: &SourceSpan) -> Result<()> {
        let net = self.builder.net();
        let n = match net.class_id("N") {
            Some(n) => n,
            None => {
                let size = self.options.class_sizes.get("N").copied().unwrap_or(DEFAULT_N);
                self.builder.add_class(ColourClass::new("N", size)).map_err(|e| Self::model_err(e, span.clone()))?
            }
        };
        for (place, domain) in [("Node", vec![n]), ("Edge", vec![n, n])] {
            match self.builder.net().place_id(place) {
                Some(id) if self.builder.net().place(id).domain.0 != domain => {
                    return Err(ParseError::new(
                        ParseErrorKind::ClassMismatch(format!("place {} must have domain {}", place, ["N", "N*N"][domain.len() - 1])),
                        span.clone(),
                    ))
                }
                Some(_) => {}
                None => {
                    self.builder.add_place(place, Domain(domain)).map_err(|e| Self::model_err(e, span.clone()))?;
                }
            }
        }
        Ok(())
    }

    fn rule(&mut self, p: &mut Parser) -> Result<()> {
        let (name, span) = p.ident("rule name")?;
        p.expect(Tok::Semi)?;
        let source = gts::rule_source(&name)
            .ok_or_else(|| ParseError::new(ParseErrorKind::UnknownIdentifier(format!("rule {}", name)), span.clone()))?;
        self.ensure_graph_places(&span)?;
        let file = format!("<rule {}>", name);
        let toks = lex(source, Some(&file))?;
        let mut inner = Parser::new(&toks, Some(&file));
        self.statements(&mut inner)?;
        self.declared = true;
        Ok(())
    }

    fn graph(&mut self, p: &mut Parser, span: SourceSpan) -> Result<()> {
        p.expect(Tok::LBrace)?;
        let g = p.graph_body()?;
        p.expect(Tok::RBrace)?;
        p.eat(&Tok::Semi);
        if self.graph.is_some() {
            return Err(ParseError::new(ParseErrorKind::Model(ModelError::Duplicate("graph".into())), span));
        }
        self.ensure_graph_places(&span)?;
        self.declared = true;
        self.graph = Some((g, span));
        Ok(())
    }
}
