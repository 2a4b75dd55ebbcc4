//! Signatures and term construction.

use crate::intern::{
    frame_node, intern_str, intern_sym, intern_term, str_value, sym_data, term_node, Channel,
    Frame, Handle, Str, Sym, Term, TermNode,
};
use std::collections::{BTreeSet, HashMap};
use std::fmt;

pub const DELTA_NAME: &str = "delta";

/// A signature: declared function symbols in declaration order.
/// Arity-0 symbols are the public constants.
#[derive(Debug, Clone)]
pub struct Signature {
    symbols: Vec<Sym>,
    by_name: HashMap<Str, Sym>,
    /// Whether the reserved 4-ary collapse symbol is admitted in terms of this run.
    pub delta_enabled: bool,
}

impl Default for Signature {
    fn default() -> Self {
        Self::new()
    }
}

impl Signature {
    pub fn new() -> Signature {
        Signature {
            symbols: Vec::new(),
            by_name: HashMap::new(),
            delta_enabled: false,
        }
    }

    /// Declare a symbol. Names must be unique within the signature and the
    /// collapse symbol cannot be user-declared.
    pub fn declare(&mut self, name: &str, arity: u32) -> Result<Sym, String> {
        if name == DELTA_NAME {
            return Err(format!("symbol name '{DELTA_NAME}' is reserved"));
        }
        let s = intern_str(name);
        if self.by_name.contains_key(&s) {
            return Err(format!("symbol '{name}' declared twice"));
        }
        let sym = intern_sym(s, arity);
        self.symbols.push(sym);
        self.by_name.insert(s, sym);
        Ok(sym)
    }

    pub fn lookup(&self, name: &str) -> Option<Sym> {
        self.by_name.get(&intern_str(name)).copied()
    }

    /// Symbols in declaration order.
    pub fn symbols(&self) -> &[Sym] {
        &self.symbols
    }

    /// Public constants (arity-0 symbols) in declaration order.
    pub fn constants(&self) -> Vec<Sym> {
        self.symbols
            .iter()
            .copied()
            .filter(|s| sym_arity(*s) == 0)
            .collect()
    }

    /// The reserved collapse symbol; marks the signature as delta-enabled.
    pub fn delta(&mut self) -> Sym {
        self.delta_enabled = true;
        intern_sym(intern_str(DELTA_NAME), 4)
    }
}

pub fn sym_name(s: Sym) -> String {
    str_value(sym_data(s).0).to_string()
}

pub fn sym_arity(s: Sym) -> u32 {
    sym_data(s).1
}

impl Term {
    pub fn name(n: &str) -> Term {
        intern_term(TermNode::Name(intern_str(n)))
    }

    pub fn var(v: &str) -> Term {
        intern_term(TermNode::Var(intern_str(v)))
    }

    pub fn handle(h: Handle) -> Term {
        intern_term(TermNode::Handle(h))
    }

    pub fn param(channel: Channel, index: u32, frame: Frame) -> Term {
        intern_term(TermNode::Param {
            channel,
            index,
            frame,
        })
    }

    /// Apply a symbol; panics when the argument count does not match the arity.
    pub fn app(sym: Sym, args: Vec<Term>) -> Term {
        assert_eq!(
            sym_arity(sym) as usize,
            args.len(),
            "arity mismatch applying {}",
            sym_name(sym)
        );
        intern_term(TermNode::App(sym, args))
    }

    pub fn constant(sym: Sym) -> Term {
        Term::app(sym, vec![])
    }

    pub fn node(&self) -> TermNode {
        term_node(*self)
    }
}

/// Handles occurring in a term (the `vars(R)` of a recipe).
pub fn term_handles(t: Term) -> BTreeSet<Handle> {
    let mut out = BTreeSet::new();
    collect_handles(t, &mut out);
    out
}

fn collect_handles(t: Term, out: &mut BTreeSet<Handle>) {
    match t.node() {
        TermNode::Handle(h) => {
            out.insert(h);
        }
        TermNode::App(_, args) => {
            for a in args {
                collect_handles(a, out);
            }
        }
        _ => {}
    }
}

/// Process variables occurring free in a term.
pub fn term_vars(t: Term) -> BTreeSet<Str> {
    let mut out = BTreeSet::new();
    collect_vars(t, &mut out);
    out
}

fn collect_vars(t: Term, out: &mut BTreeSet<Str>) {
    match t.node() {
        TermNode::Var(v) => {
            out.insert(v);
        }
        TermNode::App(_, args) => {
            for a in args {
                collect_vars(a, out);
            }
        }
        _ => {}
    }
}

/// First-order variables (params) occurring in a term, including inside the
/// frames the params refer to.
pub fn term_params(t: Term, out: &mut BTreeSet<(Channel, u32, Frame)>) {
    match t.node() {
        TermNode::Param {
            channel,
            index,
            frame,
        } => {
            if out.insert((channel, index, frame)) {
                for (_, ft) in frame_node(frame).entries {
                    term_params(ft, out);
                }
            }
        }
        TermNode::App(_, args) => {
            for a in args {
                term_params(a, out);
            }
        }
        _ => {}
    }
}

/// True when the term contains no process variables and no first-order variables.
pub fn term_is_closed(t: Term) -> bool {
    match t.node() {
        TermNode::Name(_) | TermNode::Handle(_) => true,
        TermNode::Var(_) | TermNode::Param { .. } => false,
        TermNode::App(_, args) => args.into_iter().all(term_is_closed),
    }
}

/// Substitute a process variable by a term.
pub fn subst_var(t: Term, var: Str, value: Term) -> Term {
    match t.node() {
        TermNode::Var(v) if v == var => value,
        TermNode::App(sym, args) => {
            let new: Vec<Term> = args.into_iter().map(|a| subst_var(a, var, value)).collect();
            intern_term(TermNode::App(sym, new))
        }
        _ => t,
    }
}

/// Substitute rewrite-rule variables by their bindings.
pub fn subst_bindings(t: Term, bindings: &HashMap<Str, Term>) -> Term {
    match t.node() {
        TermNode::Var(v) => *bindings.get(&v).unwrap_or(&t),
        TermNode::App(sym, args) => {
            let new: Vec<Term> = args
                .into_iter()
                .map(|a| subst_bindings(a, bindings))
                .collect();
            intern_term(TermNode::App(sym, new))
        }
        _ => t,
    }
}

/// Substitute handles by their frame values (used by recipe application).
pub fn subst_handles(t: Term, lookup: &HashMap<Handle, Term>) -> Term {
    match t.node() {
        TermNode::Handle(h) => *lookup.get(&h).unwrap_or(&t),
        TermNode::App(sym, args) => {
            let new: Vec<Term> = args
                .into_iter()
                .map(|a| subst_handles(a, lookup))
                .collect();
            intern_term(TermNode::App(sym, new))
        }
        _ => t,
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            TermNode::Name(n) => write!(f, "{}", str_value(n)),
            TermNode::Var(v) => write!(f, "{}", str_value(v)),
            TermNode::Handle(h) => write!(f, "{h}"),
            TermNode::Param {
                channel,
                index,
                frame,
            } => write!(f, "x[{},{}]@f{}", channel.name(), index, frame.0),
            TermNode::App(sym, args) => {
                write!(f, "{}", sym_name(sym))?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{a}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_idempotent() {
        let a = Term::name("n");
        let b = Term::name("n");
        assert_eq!(a, b);
        let c = Term::name("m");
        assert_ne!(a, c);
    }

    #[test]
    fn signature_rejects_duplicates_and_delta() {
        let mut sig = Signature::new();
        sig.declare("enc", 2).unwrap();
        assert!(sig.declare("enc", 2).is_err());
        assert!(sig.declare(DELTA_NAME, 4).is_err());
    }

    #[test]
    #[should_panic(expected = "arity mismatch")]
    fn app_checks_arity() {
        let mut sig = Signature::new();
        let h = sig.declare("h", 1).unwrap();
        let _ = Term::app(h, vec![]);
    }

    #[test]
    fn substitution_replaces_vars() {
        let mut sig = Signature::new();
        let h = sig.declare("h", 1).unwrap();
        let t = Term::app(h, vec![Term::var("x")]);
        let n = Term::name("n");
        let got = subst_var(t, intern_str("x"), n);
        assert_eq!(got, Term::app(h, vec![n]));
        assert!(term_is_closed(got));
        assert!(!term_is_closed(t));
    }
}
