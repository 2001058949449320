//! Core term representation: writer/reader variable pairs, constants,
//! compound terms, the single-occurrence check and renaming apart.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

/// Identifier shared by a writer and its paired reader.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V{}", self.0)
    }
}

/// Atomic constants. Reals compare by bit pattern so terms stay `Eq`/`Ord`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Constant {
    Int(i64),
    Real(RealBits),
    Str(String),
    Nil,
}

/// An `f64` wrapper with total ordering via `total_cmp`.
#[derive(Debug, Clone, Copy)]
pub struct RealBits(pub f64);

impl PartialEq for RealBits {
    fn eq(&self, other: &Self) -> bool {
        self.0.total_cmp(&other.0) == std::cmp::Ordering::Equal
    }
}
impl Eq for RealBits {}
impl PartialOrd for RealBits {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.0.total_cmp(&other.0))
    }
}
impl Ord for RealBits {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}
impl std::hash::Hash for RealBits {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state);
    }
}

impl Constant {
    pub fn is_numeric(&self) -> bool {
        matches!(self, Constant::Int(_) | Constant::Real(_))
    }

    /// Display name used in automaton labels and path text.
    pub fn label_text(&self) -> String {
        match self {
            Constant::Int(i) => i.to_string(),
            Constant::Real(r) => format!("{}", r.0),
            Constant::Str(s) => s.clone(),
            Constant::Nil => "[]".to_string(),
        }
    }
}

pub const CONS: &str = ".";

/// GLP terms over paired variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Writer(VarId),
    Reader(VarId),
    /// Fresh writer with no paired reader; values bound to it are discarded.
    Anon(VarId),
    Const(Constant),
    Compound(String, Vec<Term>),
}

impl Term {
    pub fn cons(head: Term, tail: Term) -> Term {
        Term::Compound(CONS.to_string(), vec![head, tail])
    }

    pub fn nil() -> Term {
        Term::Const(Constant::Nil)
    }

    pub fn list(items: Vec<Term>, tail: Term) -> Term {
        items.into_iter().rev().fold(tail, |t, h| Term::cons(h, t))
    }

    pub fn str(s: &str) -> Term {
        Term::Const(Constant::Str(s.to_string()))
    }

    pub fn int(i: i64) -> Term {
        Term::Const(Constant::Int(i))
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Writer(_) | Term::Reader(_) | Term::Anon(_))
    }

    /// Unit goals are compound terms or string constants.
    pub fn is_unit_goal(&self) -> bool {
        matches!(self, Term::Compound(..) | Term::Const(Constant::Str(_)))
    }

    /// Predicate key of a unit goal.
    pub fn predicate(&self) -> Option<(&str, usize)> {
        match self {
            Term::Compound(f, args) => Some((f.as_str(), args.len())),
            Term::Const(Constant::Str(s)) => Some((s.as_str(), 0)),
            _ => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Compound(_, args) => args,
            _ => &[],
        }
    }

    /// All variable occurrences, preorder, with the position of each.
    pub fn var_occurrences(&self) -> Vec<(VarId, Polarity, Position)> {
        let mut out = Vec::new();
        fn walk(t: &Term, pos: &mut Vec<usize>, out: &mut Vec<(VarId, Polarity, Position)>) {
            match t {
                Term::Writer(v) => out.push((*v, Polarity::Writer, Position(pos.clone()))),
                Term::Reader(v) => out.push((*v, Polarity::Reader, Position(pos.clone()))),
                Term::Anon(v) => out.push((*v, Polarity::Anon, Position(pos.clone()))),
                Term::Const(_) => {}
                Term::Compound(_, args) => {
                    for (i, a) in args.iter().enumerate() {
                        pos.push(i + 1);
                        walk(a, pos, out);
                        pos.pop();
                    }
                }
            }
        }
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn var_ids(&self) -> BTreeSet<VarId> {
        self.var_occurrences().iter().map(|(v, _, _)| *v).collect()
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Writer(_) | Term::Reader(_) | Term::Anon(_) => false,
            Term::Const(_) => true,
            Term::Compound(_, args) => args.iter().all(|a| a.is_ground()),
        }
    }

    /// Swap every writer with its paired reader and vice versa.
    /// Anonymous variables have no pair and are left alone.
    pub fn dualize_vars(&self) -> Term {
        match self {
            Term::Writer(v) => Term::Reader(*v),
            Term::Reader(v) => Term::Writer(*v),
            Term::Anon(v) => Term::Anon(*v),
            Term::Const(c) => Term::Const(c.clone()),
            Term::Compound(f, args) => {
                Term::Compound(f.clone(), args.iter().map(|a| a.dualize_vars()).collect())
            }
        }
    }

    pub fn subterm(&self, pos: &Position) -> Option<&Term> {
        let mut cur = self;
        for &i in &pos.0 {
            match cur {
                Term::Compound(_, args) => cur = args.get(i - 1)?,
                _ => return None,
            }
        }
        Some(cur)
    }
}

/// Occurrence polarity of a variable leaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Writer,
    Reader,
    Anon,
}

/// Term position: 1-based argument indices from the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn child(&self, i: usize) -> Position {
        let mut p = self.0.clone();
        p.push(i);
        Position(p)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parent(&self) -> Option<Position> {
        if self.0.is_empty() {
            None
        } else {
            Some(Position(self.0[..self.0.len() - 1].to_vec()))
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// Result of the single-occurrence scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoViolation {
    pub var: VarId,
    pub polarity: Polarity,
    pub positions: Vec<(usize, Position)>,
}

/// Single occurrence over a sequence of terms: every variable (writer and
/// reader counted separately) occurs at most once across the whole sequence.
pub fn check_so(terms: &[Term]) -> Result<(), SoViolation> {
    let mut seen: BTreeMap<(VarId, Polarity), Vec<(usize, Position)>> = BTreeMap::new();
    for (idx, t) in terms.iter().enumerate() {
        for (v, pol, pos) in t.var_occurrences() {
            if pol == Polarity::Anon {
                continue;
            }
            seen.entry((v, pol)).or_default().push((idx, pos));
        }
    }
    for ((v, pol), occs) in seen {
        if occs.len() > 1 {
            return Err(SoViolation {
                var: v,
                polarity: pol,
                positions: occs,
            });
        }
    }
    Ok(())
}

/// Fresh variable source. Ids are drawn from a monotone counter so renamed
/// clauses never collide with anything allocated earlier in the same run.
#[derive(Debug, Clone)]
pub struct FreshVars {
    next: u32,
}

impl FreshVars {
    pub fn starting_above(ids: impl IntoIterator<Item = VarId>) -> FreshVars {
        let max = ids.into_iter().map(|v| v.0).max().unwrap_or(0);
        FreshVars { next: max + 1 }
    }

    pub fn new(start: u32) -> FreshVars {
        FreshVars { next: start }
    }

    pub fn fresh(&mut self) -> VarId {
        let id = VarId(self.next);
        self.next += 1;
        id
    }

    pub fn watermark(&self) -> u32 {
        self.next
    }
}

/// Rename a term apart: every variable id is mapped injectively to a fresh id,
/// preserving pairing (writer and reader of one pair map to one fresh pair).
pub fn rename_term(t: &Term, map: &mut BTreeMap<VarId, VarId>, fresh: &mut FreshVars) -> Term {
    match t {
        Term::Writer(v) => Term::Writer(*map.entry(*v).or_insert_with(|| fresh.fresh())),
        Term::Reader(v) => Term::Reader(*map.entry(*v).or_insert_with(|| fresh.fresh())),
        Term::Anon(_) => Term::Anon(fresh.fresh()),
        Term::Const(c) => Term::Const(c.clone()),
        Term::Compound(f, args) => Term::Compound(
            f.clone(),
            args.iter().map(|a| rename_term(a, map, fresh)).collect(),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn so_counts_writer_and_reader_separately() {
        // p(X, X?) is fine, p(X, X) is not.
        let ok = Term::Compound("p".into(), vec![Term::Writer(VarId(1)), Term::Reader(VarId(1))]);
        assert!(check_so(&[ok]).is_ok());
        let bad = Term::Compound("p".into(), vec![Term::Writer(VarId(1)), Term::Writer(VarId(1))]);
        let v = check_so(&[bad]).unwrap_err();
        assert_eq!(v.var, VarId(1));
        assert_eq!(v.positions.len(), 2);
    }

    #[test]
    fn so_ignores_anonymous() {
        let t = Term::Compound("p".into(), vec![Term::Anon(VarId(1)), Term::Anon(VarId(2))]);
        assert!(check_so(&[t]).is_ok());
    }

    #[test]
    fn rename_preserves_pairing_and_freshness() {
        let t = Term::Compound("p".into(), vec![Term::Writer(VarId(1)), Term::Reader(VarId(1))]);
        let mut fresh = FreshVars::new(10);
        let mut map = BTreeMap::new();
        let r = rename_term(&t, &mut map, &mut fresh);
        match r {
            Term::Compound(_, args) => match (&args[0], &args[1]) {
                (Term::Writer(a), Term::Reader(b)) => {
                    assert_eq!(a, b);
                    assert!(a.0 >= 10);
                }
                _ => panic!("shape changed"),
            },
            _ => panic!("shape changed"),
        }
    }

    #[test]
    fn three_successive_renamings_are_pairwise_disjoint() {
        let t = Term::Compound(
            "merge".into(),
            vec![
                Term::cons(Term::Writer(VarId(0)), Term::Writer(VarId(1))),
                Term::Writer(VarId(2)),
                Term::cons(Term::Reader(VarId(0)), Term::Reader(VarId(3))),
            ],
        );
        let mut fresh = FreshVars::new(100);
        let mut sets = Vec::new();
        for _ in 0..3 {
            let mut map = BTreeMap::new();
            let r = rename_term(&t, &mut map, &mut fresh);
            sets.push(r.var_ids());
        }
        for i in 0..3 {
            for j in i + 1..3 {
                assert!(sets[i].is_disjoint(&sets[j]));
            }
        }
    }
}
