//! Textual syntax: the model DSL, arc-function expressions, guards, bag
//! literals and graph files.
//!
//! ```text
//! class N = 8;                       // also `class N = 4 ordered;`, `class C = C1:2 + C2:3;`
//! place Node : N;
//! place Edge : N*N;
//! trans R1(n1, n2, n3:N) [n1 != n2 && !(n2 = n3)];
//! arc in Edge -> R1 : <n1,n2> + 2*<n2,All-n1>[n1 != n3];
//! arc out R1 -> Edge : [#1 = #2]<All,All>;
//! arc inh Edge -o R1 : <n1,n3>;
//! marking Node = <nd1> + <nd2>;      // `<nd1+nd2>`, `<All>` and `0` also work
//! rule R3;                           // splices a bundled rule
//! graph { node a; node b; edge a b; }
//! ```
//!
//! Variables without an explicit class take the class whose lowercased name
//! is the variable name without trailing digits, or the only class.

mod lexer;
mod parser;
mod printer;

use std::collections::BTreeMap;
use std::fmt;

use crate::bag::{Bag, ClassId, Domain};
use crate::gts::{Graph, GraphError};
use crate::model::{ArcFunction, ArcKind, ClassFunction, ColourClass, Guard, Marking, ModelError, Net, PlaceId,
    TransitionId};

pub use lexer::{lex, Tok, Token};
pub use printer::{print_class_function, print_expr, print_guard, print_model};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SourceSpan {
    pub file: Option<String>,
    pub line: usize,
    pub col_start: usize,
    /// Exclusive.
    pub col_end: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(file) = &self.file {
            write!(f, "{}:", file)?;
        }
        write!(f, "{}:{}", self.line, self.col_start)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical(String),
    Syntax { expected: String, found: String },
    Arity { expected: usize, found: usize },
    UnknownIdentifier(String),
    UnknownVariable(String),
    ClassMismatch(String),
    NoNet,
    Graph(GraphError),
    Model(ModelError),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Lexical(m) => write!(f, "{}", m),
            ParseErrorKind::Syntax { expected, found } => write!(f, "expected {}, found {}", expected, found),
            ParseErrorKind::Arity { expected, found } => {
                write!(f, "arity mismatch: expected {} components, found {}", expected, found)
            }
            ParseErrorKind::UnknownIdentifier(s) => write!(f, "unknown identifier `{}`", s),
            ParseErrorKind::UnknownVariable(s) => write!(f, "unknown variable `{}`", s),
            ParseErrorKind::ClassMismatch(s) => write!(f, "class mismatch: {}", s),
            ParseErrorKind::NoNet => write!(f, "no net declared"),
            ParseErrorKind::Graph(e) => write!(f, "{}", e),
            ParseErrorKind::Model(e) => write!(f, "{}", e),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{span}: {kind}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
}

impl ParseError {
    pub fn new(kind: ParseErrorKind, span: SourceSpan) -> Self {
        ParseError { kind, span }
    }
}

/// Typing context for an arc function: the transition variables and the
/// place domain.
#[derive(Debug, Clone)]
pub struct Signature<'a> {
    pub classes: &'a [ColourClass],
    pub vars: Vec<(String, ClassId)>,
    pub codomain: Domain,
}

impl<'a> Signature<'a> {
    pub fn new(classes: &'a [ColourClass], vars: Vec<(String, ClassId)>, codomain: Domain) -> Self {
        Signature { classes, vars, codomain }
    }

    pub fn of_arc(net: &'a Net, t: TransitionId, p: PlaceId) -> Self {
        Signature {
            classes: net.classes(),
            vars: net.transition(t).vars.iter().map(|v| (v.name.clone(), v.class)).collect(),
            codomain: net.place(p).domain.clone(),
        }
    }

    /// Names `#1..#k` for the codomain positions.
    pub(crate) fn positions(&self) -> Vec<(String, ClassId)> {
        self.codomain.0.iter().enumerate().map(|(i, c)| (format!("#{}", i + 1), *c)).collect()
    }
}

/// A parsed net with its initial marking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub net: Net,
    pub initial: Marking,
}

#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    /// Overrides the declared size of these classes.
    pub class_sizes: BTreeMap<String, u32>,
    /// Reported in error spans.
    pub file: Option<String>,
}

pub fn parse_model(text: &str) -> Result<Model, ParseError> {
    parse_model_with(text, &ParseOptions::default())
}

pub fn parse_model_with(text: &str, options: &ParseOptions) -> Result<Model, ParseError> {
    let toks = lex(text, options.file.as_deref())?;
    parser::ModelParser::new(options).run(&toks, options.file.as_deref())
}

pub fn parse_expr(text: &str, sig: &Signature) -> Result<ArcFunction, ParseError> {
    let toks = lex(text, None)?;
    let mut p = parser::Parser::new(&toks, None);
    let f = p.arc_function(sig)?;
    p.finish()?;
    Ok(f)
}

/// Parses a guard over `vars`; positional names such as `#1` are accepted
/// when `vars` contains them.
pub fn parse_guard(text: &str, classes: &[ColourClass], vars: &[(String, ClassId)]) -> Result<Guard, ParseError> {
    let toks = lex(text, None)?;
    let mut p = parser::Parser::new(&toks, None);
    let g = p.guard(classes, vars)?;
    p.finish()?;
    Ok(g)
}

pub fn parse_class_function(
    text: &str,
    class: ClassId,
    classes: &[ColourClass],
    vars: &[(String, ClassId)],
) -> Result<ClassFunction, ParseError> {
    let toks = lex(text, None)?;
    let mut p = parser::Parser::new(&toks, None);
    let f = p.class_function(class, classes, vars)?;
    p.finish()?;
    Ok(f)
}

/// Parses a transition instance such as `R1(nd4,nd1,nd2)`.
pub fn parse_instance(text: &str, net: &Net) -> Result<crate::engine::Instance, ParseError> {
    let toks = lex(text, None)?;
    let mut p = parser::Parser::new(&toks, None);
    let i = p.instance(net)?;
    p.finish()?;
    Ok(i)
}

/// Parses a bag literal such as `2*<nd1,nd2> + <nd3,nd3>` over `domain`.
pub fn parse_bag(text: &str, net: &Net, domain: &Domain) -> Result<Bag, ParseError> {
    let toks = lex(text, None)?;
    let mut p = parser::Parser::new(&toks, None);
    let b = p.bag(net.classes(), domain)?;
    p.finish()?;
    Ok(b)
}

/// Parses a graph file: `node <id>;` and `edge <id> <id>;` statements, where
/// an id is an identifier, an integer or a quoted string. Semicolons are
/// optional at line ends.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    parse_graph_in(text, None)
}

pub fn parse_graph_in(text: &str, file: Option<&str>) -> Result<Graph, ParseError> {
    let toks = lex(text, file)?;
    let mut p = parser::Parser::new(&toks, file);
    let g = p.graph_body()?;
    p.finish()?;
    Ok(g)
}

pub(crate) fn kind_keyword(kind: ArcKind) -> &'static str {
    match kind {
        ArcKind::Input => "in",
        ArcKind::Output => "out",
        ArcKind::Inhibitor => "inh",
    }
}
