//! Moded terms and moded paths: terms annotated with produce/consume modes
//! at the root and every non-variable position, and the root-to-leaf path
//! view that all well-typing checks operate on.

use crate::term::{Constant, Polarity, Position, Term, VarId, CONS};
use std::collections::BTreeMap;
use std::fmt;

/// Communication direction of a term or type position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    /// `↑`
    Produce,
    /// `↓`
    Consume,
}

impl Mode {
    pub fn complement(self) -> Mode {
        match self {
            Mode::Produce => Mode::Consume,
            Mode::Consume => Mode::Produce,
        }
    }

    pub fn glyph(self) -> &'static str {
        match self {
            Mode::Produce => "↑",
            Mode::Consume => "↓",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.glyph())
    }
}

/// A term plus a sparse mode map covering the root and every non-variable
/// position. Variable leaves carry no mode of their own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModedTerm {
    pub term: Term,
    pub modes: BTreeMap<Position, Mode>,
}

impl ModedTerm {
    /// Annotate `term` with one mode throughout (root and all non-variable
    /// positions). This is the "produced moded term" / "consumed term" form.
    pub fn uniform(term: Term, mode: Mode) -> ModedTerm {
        let mut modes = BTreeMap::new();
        fn walk(t: &Term, pos: &Position, mode: Mode, modes: &mut BTreeMap<Position, Mode>) {
            if !t.is_var() {
                modes.insert(pos.clone(), mode);
            }
            if let Term::Compound(_, args) = t {
                for (i, a) in args.iter().enumerate() {
                    walk(a, &pos.child(i + 1), mode, modes);
                }
            }
        }
        walk(&term, &Position::default(), mode, &mut modes);
        ModedTerm { term, modes }
    }

    pub fn root_mode(&self) -> Option<Mode> {
        self.modes.get(&Position::default()).copied()
    }

    pub fn mode_at(&self, pos: &Position) -> Option<Mode> {
        self.modes.get(pos).copied()
    }

    /// Complement every mode and replace every variable by its pair.
    pub fn dualize(&self) -> ModedTerm {
        ModedTerm {
            term: self.term.dualize_vars(),
            modes: self
                .modes
                .iter()
                .map(|(p, m)| (p.clone(), m.complement()))
                .collect(),
        }
    }

    /// One moded path per leaf of the term tree. The mode on the final step
    /// into a variable leaf is inherited from its parent position, since
    /// variables carry no mode annotation of their own.
    pub fn paths(&self) -> Vec<ModedPath> {
        let mut out = Vec::new();
        let root_mode = self.root_mode().unwrap_or(Mode::Produce);
        self.paths_walk(&self.term, &Position::default(), root_mode, &mut Vec::new(), &mut out);
        out
    }

    fn paths_walk(
        &self,
        t: &Term,
        pos: &Position,
        pos_mode: Mode,
        steps: &mut Vec<PathStep>,
        out: &mut Vec<ModedPath>,
    ) {
        match t {
            Term::Compound(f, args) => {
                for (i, a) in args.iter().enumerate() {
                    let cpos = pos.child(i + 1);
                    let cmode = self.mode_at(&cpos).unwrap_or(pos_mode);
                    steps.push(PathStep {
                        functor: f.clone(),
                        arity: args.len(),
                        arg_index: i + 1,
                        mode: cmode,
                    });
                    self.paths_walk(a, &cpos, cmode, steps, out);
                    steps.pop();
                }
            }
            leaf => {
                let leaf_sym = match leaf {
                    Term::Writer(v) => PathLeaf::Writer(*v),
                    Term::Reader(v) => PathLeaf::Reader(*v),
                    Term::Anon(v) => PathLeaf::Anon(*v),
                    Term::Const(c) => PathLeaf::Const(c.clone()),
                    Term::Compound(..) => unreachable!(),
                };
                out.push(ModedPath {
                    root_mode: self.root_mode().unwrap_or(pos_mode),
                    steps: steps.clone(),
                    leaf: leaf_sym,
                });
            }
        }
    }

    /// Apply a substitution, per polarity: a bound reader is replaced by its
    /// value annotated consume-throughout; a bound writer by its value with
    /// variables dualized, annotated produce-throughout. Repeats to fixpoint.
    pub fn apply_substitution(&self, bindings: &BTreeMap<VarId, Term>) -> ModedTerm {
        let mut cur = self.clone();
        loop {
            let mut changed = false;
            cur = cur.apply_once(bindings, &mut changed);
            if !changed {
                return cur;
            }
        }
    }

    fn apply_once(&self, bindings: &BTreeMap<VarId, Term>, changed: &mut bool) -> ModedTerm {
        let mut modes = BTreeMap::new();
        let root_mode = self.root_mode();
        let term = self.subst_walk(&self.term, &Position::default(), root_mode, bindings, &mut modes, changed);
        ModedTerm { term, modes }
    }

    fn subst_walk(
        &self,
        t: &Term,
        pos: &Position,
        pos_mode: Option<Mode>,
        bindings: &BTreeMap<VarId, Term>,
        modes: &mut BTreeMap<Position, Mode>,
        changed: &mut bool,
    ) -> Term {
        match t {
            Term::Reader(v) if bindings.contains_key(v) => {
                *changed = true;
                let value = bindings[v].clone();
                insert_uniform(&value, pos, Mode::Consume, modes);
                value
            }
            Term::Writer(v) if bindings.contains_key(v) => {
                *changed = true;
                let value = bindings[v].dualize_vars();
                insert_uniform(&value, pos, Mode::Produce, modes);
                value
            }
            Term::Compound(f, args) => {
                if let Some(m) = self.mode_at(pos).or(pos_mode) {
                    modes.insert(pos.clone(), m);
                }
                let new_args = args
                    .iter()
                    .enumerate()
                    .map(|(i, a)| {
                        let cpos = pos.child(i + 1);
                        let cmode = self.mode_at(&cpos).or(pos_mode);
                        self.subst_walk(a, &cpos, cmode, bindings, modes, changed)
                    })
                    .collect();
                Term::Compound(f.clone(), new_args)
            }
            other => {
                if !other.is_var() {
                    if let Some(m) = self.mode_at(pos).or(pos_mode) {
                        modes.insert(pos.clone(), m);
                    }
                }
                other.clone()
            }
        }
    }
}

fn insert_uniform(t: &Term, pos: &Position, mode: Mode, modes: &mut BTreeMap<Position, Mode>) {
    if !t.is_var() {
        modes.insert(pos.clone(), mode);
    }
    if let Term::Compound(_, args) = t {
        for (i, a) in args.iter().enumerate() {
            insert_uniform(a, &pos.child(i + 1), mode, modes);
        }
    }
}

/// One step of a moded path: the functor/arity of the parent vertex, the
/// 1-based argument index taken, and the mode of the position stepped into.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathStep {
    pub functor: String,
    pub arity: usize,
    pub arg_index: usize,
    pub mode: Mode,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PathLeaf {
    Const(Constant),
    Writer(VarId),
    Reader(VarId),
    Anon(VarId),
    /// A truncated path ending at an inner functor vertex.
    Functor(String, usize),
}

impl PathLeaf {
    pub fn polarity(&self) -> Option<Polarity> {
        match self {
            PathLeaf::Writer(_) => Some(Polarity::Writer),
            PathLeaf::Reader(_) => Some(Polarity::Reader),
            PathLeaf::Anon(_) => Some(Polarity::Anon),
            _ => None,
        }
    }
}

/// Root-to-leaf moded path of a moded term tree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModedPath {
    pub root_mode: Mode,
    pub steps: Vec<PathStep>,
    pub leaf: PathLeaf,
}

impl ModedPath {
    pub fn dualize(&self) -> ModedPath {
        ModedPath {
            root_mode: self.root_mode.complement(),
            steps: self
                .steps
                .iter()
                .map(|s| PathStep {
                    functor: s.functor.clone(),
                    arity: s.arity,
                    arg_index: s.arg_index,
                    mode: s.mode.complement(),
                })
                .collect(),
            leaf: match &self.leaf {
                PathLeaf::Writer(v) => PathLeaf::Reader(*v),
                PathLeaf::Reader(v) => PathLeaf::Writer(*v),
                other => other.clone(),
            },
        }
    }

    /// Direction of the path: the mode of its first argument step, falling
    /// back to the root mode for single-vertex paths.
    pub fn direction(&self) -> Mode {
        self.steps.first().map(|s| s.mode).unwrap_or(self.root_mode)
    }

    /// Truncate to at most `depth` steps, ending at a functor vertex when cut.
    pub fn truncate(&self, depth: usize) -> ModedPath {
        if self.steps.len() <= depth {
            return self.clone();
        }
        let steps = self.steps[..depth].to_vec();
        let cut = &self.steps[depth];
        ModedPath {
            root_mode: self.root_mode,
            steps,
            leaf: PathLeaf::Functor(cut.functor.clone(), cut.arity),
        }
    }

    /// Paper-style text, e.g. `(0,↓) --> merge/3 --(1,↓)--> "."/2 --(1,↓)--> 3`.
    pub fn display(&self, names: &dyn Fn(VarId) -> String) -> String {
        let mut s = format!("(0,{})", self.root_mode);
        let root_sym = match self.steps.first() {
            Some(st) => functor_text(&st.functor, st.arity),
            None => leaf_text(&self.leaf, names),
        };
        s.push_str(&format!(" --> {}", root_sym));
        for (i, st) in self.steps.iter().enumerate() {
            let next_sym = match self.steps.get(i + 1) {
                Some(n) => functor_text(&n.functor, n.arity),
                None => leaf_text(&self.leaf, names),
            };
            s.push_str(&format!(" --({},{})--> {}", st.arg_index, st.mode, next_sym));
        }
        s
    }
}

pub fn functor_text(f: &str, n: usize) -> String {
    if f == CONS {
        format!("\"{}\"/{}", CONS, n)
    } else if n == 0 {
        f.to_string()
    } else {
        format!("{}/{}", f, n)
    }
}

fn leaf_text(l: &PathLeaf, names: &dyn Fn(VarId) -> String) -> String {
    match l {
        PathLeaf::Const(c) => c.label_text(),
        PathLeaf::Writer(v) => names(*v),
        PathLeaf::Reader(v) => format!("{}?", names(*v)),
        PathLeaf::Anon(_) => "_".to_string(),
        PathLeaf::Functor(f, n) => functor_text(f, *n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::VarId;

    fn merge_example() -> ModedTerm {
        // ↓merge(↓[↓3|Xs?], Ys?, ↑[↑3|Zs])
        let term = Term::Compound(
            "merge".into(),
            vec![
                Term::cons(Term::int(3), Term::Reader(VarId(0))),
                Term::Reader(VarId(1)),
                Term::cons(Term::int(3), Term::Writer(VarId(2))),
            ],
        );
        let mut modes = BTreeMap::new();
        let root = Position::default();
        modes.insert(root.clone(), Mode::Consume);
        modes.insert(root.child(1), Mode::Consume);
        modes.insert(root.child(1).child(1), Mode::Consume);
        modes.insert(root.child(3), Mode::Produce);
        modes.insert(root.child(3).child(1), Mode::Produce);
        ModedTerm { term, modes }
    }

    #[test]
    fn paths_one_per_leaf() {
        let t = merge_example();
        let paths = t.paths();
        assert_eq!(paths.len(), 5);
        let names = |v: VarId| ["Xs", "Ys", "Zs"][v.0 as usize].to_string();
        let texts: Vec<String> = paths.iter().map(|p| p.display(&names)).collect();
        assert!(texts.contains(&"(0,↓) --> merge/3 --(1,↓)--> \".\"/2 --(1,↓)--> 3".to_string()));
        assert!(texts.contains(&"(0,↓) --> merge/3 --(1,↓)--> \".\"/2 --(2,↓)--> Xs?".to_string()));
        assert!(texts.contains(&"(0,↓) --> merge/3 --(2,↓)--> Ys?".to_string()));
        assert!(texts.contains(&"(0,↓) --> merge/3 --(3,↑)--> \".\"/2 --(1,↑)--> 3".to_string()));
        assert!(texts.contains(&"(0,↓) --> merge/3 --(3,↑)--> \".\"/2 --(2,↑)--> Zs".to_string()));
    }

    #[test]
    fn dualize_is_involution_and_commutes_with_paths() {
        let t = merge_example();
        assert_eq!(t.dualize().dualize(), t);
        let mut direct: Vec<ModedPath> = t.paths().iter().map(|p| p.dualize()).collect();
        let mut dual = t.dualize().paths();
        direct.sort();
        dual.sort();
        assert_eq!(direct, dual);
    }

    #[test]
    fn single_produced_constant() {
        let t = ModedTerm::uniform(Term::str("c"), Mode::Produce);
        let paths = t.paths();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].root_mode, Mode::Produce);
        assert!(paths[0].steps.is_empty());
        assert_eq!(paths[0].leaf, PathLeaf::Const(Constant::Str("c".into())));
    }

    #[test]
    fn substitution_inserts_with_position_polarity() {
        // ↑merge(Xs?, Ys?, Zs) with {Zs := [1|Zs1]} from the writer side.
        let t = ModedTerm::uniform(
            Term::Compound(
                "merge".into(),
                vec![Term::Reader(VarId(0)), Term::Reader(VarId(1)), Term::Writer(VarId(2))],
            ),
            Mode::Produce,
        );
        let mut b = BTreeMap::new();
        b.insert(VarId(2), Term::cons(Term::int(1), Term::Writer(VarId(3))));
        let r = t.apply_substitution(&b);
        let root = Position::default();
        assert_eq!(r.mode_at(&root.child(3)), Some(Mode::Produce));
        assert_eq!(r.mode_at(&root.child(3).child(1)), Some(Mode::Produce));
        // Readers untouched.
        assert_eq!(r.term.args()[0], Term::Reader(VarId(0)));
        // Empty substitution is the identity.
        assert_eq!(t.apply_substitution(&BTreeMap::new()), t);
    }

    #[test]
    fn substitution_is_idempotent() {
        let t = merge_example();
        let mut b = BTreeMap::new();
        b.insert(VarId(2), Term::cons(Term::str("a"), Term::Writer(VarId(5))));
        let once = t.apply_substitution(&b);
        let twice = once.apply_substitution(&b);
        assert_eq!(once, twice);
    }
}
