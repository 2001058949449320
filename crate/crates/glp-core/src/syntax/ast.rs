//! Surface syntax tree for GLP source programs.

use crate::term::{Constant, Term, VarId};
use std::collections::BTreeMap;
use std::fmt;

/// Source location, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// A parsed program: items in source order plus the variable name table.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceProgram {
    pub items: Vec<Item>,
    pub names: NameTable,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    TypeRule(TypeRule),
    ProcDecl(ProcedureDecl),
    Clause(Clause),
}

impl Item {
    pub fn span(&self) -> Span {
        match self {
            Item::TypeRule(r) => r.span,
            Item::ProcDecl(d) => d.span,
            Item::Clause(c) => c.span,
        }
    }
}

/// `Name ::= Alt ; ... ; Alt.` or `Name(P1,...) ::= ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeRule {
    pub name: String,
    pub params: Vec<String>,
    pub alts: Vec<TypeExpr>,
    pub span: Span,
}

/// A type expression; `complemented` is the trailing `?`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TypeExpr {
    pub node: TypeNode,
    pub complemented: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum TypeNode {
    /// Constant alternative or embedded constant (`add`, `[]`, `0`).
    Const(Constant),
    /// Structural alternative `f(E1,...,En)`, including desugared lists.
    Compound(String, Vec<TypeExpr>),
    /// Reference to a named type or parameter, possibly applied: `Stream`, `Stream(X)`.
    Ref(String, Vec<TypeExpr>),
    /// `_`
    Wildcard,
}

impl TypeExpr {
    pub fn plain_ref(name: &str) -> TypeExpr {
        TypeExpr {
            node: TypeNode::Ref(name.to_string(), Vec::new()),
            complemented: false,
        }
    }

    pub fn complement(mut self) -> TypeExpr {
        self.complemented = !self.complemented;
        self
    }
}

/// `procedure name(T1, ..., Tn).` — input arguments carry a trailing `?`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcedureDecl {
    pub name: String,
    pub args: Vec<TypeExpr>,
    pub span: Span,
}

impl ProcedureDecl {
    pub fn key(&self) -> (String, usize) {
        (self.name.clone(), self.args.len())
    }
}

/// `Head :- Guard | Body.` with both guard and body optional.
#[derive(Debug, Clone, PartialEq)]
pub struct Clause {
    pub head: Term,
    pub guard: Vec<Term>,
    pub body: Vec<Term>,
    pub span: Span,
}

impl Clause {
    pub fn predicate(&self) -> (String, usize) {
        let (f, n) = self.head.predicate().expect("head is a unit goal");
        (f.to_string(), n)
    }

    /// All terms of the clause: head, then guard, then body.
    pub fn all_terms(&self) -> Vec<&Term> {
        std::iter::once(&self.head)
            .chain(self.guard.iter())
            .chain(self.body.iter())
            .collect()
    }
}

/// Variable id to source name mapping for display.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NameTable {
    map: BTreeMap<VarId, String>,
}

impl NameTable {
    pub fn insert(&mut self, id: VarId, name: String) {
        self.map.insert(id, name);
    }

    pub fn get(&self, id: VarId) -> Option<&str> {
        self.map.get(&id).map(|s| s.as_str())
    }

    pub fn display(&self, id: VarId) -> String {
        match self.map.get(&id) {
            Some(n) => n.clone(),
            None => format!("V{}", id.0),
        }
    }

    pub fn merge(&mut self, other: &NameTable) {
        for (k, v) in &other.map {
            self.map.insert(*k, v.clone());
        }
    }
}
