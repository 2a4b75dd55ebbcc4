//! Convergent rewriting: the equational theory as an oriented rule set.

use crate::error::{EngineError, Result};
use crate::intern::{intern_term, Str, Term, TermNode};
use crate::term::{subst_bindings, term_vars, Signature};
use std::collections::HashMap;
use std::sync::RwLock;

/// An oriented rewrite rule `lhs -> rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RewriteRule {
    pub lhs: Term,
    pub rhs: Term,
}

impl RewriteRule {
    /// Build a rule, enforcing that `rhs` variables occur in `lhs` and that
    /// `lhs` is not a lone variable.
    pub fn new(lhs: Term, rhs: Term) -> std::result::Result<RewriteRule, String> {
        if matches!(lhs.node(), TermNode::Var(_)) {
            return Err("rule left-hand side must not be a lone variable".into());
        }
        let lv = term_vars(lhs);
        let rv = term_vars(rhs);
        if !rv.is_subset(&lv) {
            return Err("rule right-hand side uses a variable absent from the left-hand side".into());
        }
        Ok(RewriteRule { lhs, rhs })
    }
}

pub const DEFAULT_STEP_BUDGET: usize = 100_000;

/// A user theory: signature plus convergent rules, with memo tables for
/// normal forms and the bounded attacker bases derived from the signature.
pub struct Theory {
    pub sig: Signature,
    pub rules: Vec<RewriteRule>,
    pub step_budget: usize,
    normal_forms: RwLock<HashMap<Term, Term>>,
    pub(crate) recipe_cache: RwLock<HashMap<(Vec<crate::intern::Handle>, u32), std::sync::Arc<Vec<Term>>>>,
    pub(crate) static_cache:
        RwLock<HashMap<(crate::intern::Frame, crate::intern::Frame, u32), crate::statics::StaticVerdict>>,
}

impl std::fmt::Debug for Theory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Theory")
            .field("sig", &self.sig)
            .field("rules", &self.rules)
            .field("step_budget", &self.step_budget)
            .finish()
    }
}

impl Theory {
    pub fn new(sig: Signature, rules: Vec<RewriteRule>) -> Theory {
        Theory {
            sig,
            rules,
            step_budget: DEFAULT_STEP_BUDGET,
            normal_forms: RwLock::new(HashMap::new()),
            recipe_cache: RwLock::new(HashMap::new()),
            static_cache: RwLock::new(HashMap::new()),
        }
    }

    /// Empty theory over an empty signature (handy in tests).
    pub fn empty() -> Theory {
        Theory::new(Signature::new(), Vec::new())
    }
}

/// Match `pattern` against `subject`, binding pattern variables.
/// Non-linear patterns require equal (interned) bindings.
fn match_term(
    pattern: Term,
    subject: Term,
    bindings: &mut HashMap<Str, Term>,
) -> bool {
    match pattern.node() {
        TermNode::Var(v) => match bindings.get(&v) {
            Some(&bound) => bound == subject,
            None => {
                bindings.insert(v, subject);
                true
            }
        },
        TermNode::App(ps, pargs) => match subject.node() {
            TermNode::App(ss, sargs) if ss == ps => pargs
                .into_iter()
                .zip(sargs)
                .all(|(p, s)| match_term(p, s, bindings)),
            _ => false,
        },
        _ => pattern == subject,
    }
}

fn rewrite_root(rules: &[RewriteRule], t: Term) -> Option<Term> {
    for rule in rules {
        let mut bindings = HashMap::new();
        if match_term(rule.lhs, t, &mut bindings) {
            return Some(subst_bindings(rule.rhs, &bindings));
        }
    }
    None
}

fn normalize_inner(th: &Theory, t: Term, steps: &mut usize) -> Result<Term> {
    if let Some(&n) = th.normal_forms.read().unwrap().get(&t) {
        return Ok(n);
    }
    let result = match t.node() {
        TermNode::App(sym, args) => {
            let nargs: Result<Vec<Term>> = args
                .into_iter()
                .map(|a| normalize_inner(th, a, steps))
                .collect();
            let mut current = intern_term(TermNode::App(sym, nargs?));
            loop {
                match rewrite_root(&th.rules, current) {
                    Some(reduced) => {
                        *steps += 1;
                        if *steps > th.step_budget {
                            return Err(EngineError::RewriteBudget(th.step_budget));
                        }
                        // The instantiated rhs may expose nested redexes.
                        current = normalize_inner(th, reduced, steps)?;
                    }
                    None => break current,
                }
            }
        }
        // Atoms (names, handles, variables, params) are normal forms.
        _ => t,
    };
    th.normal_forms.write().unwrap().insert(t, result);
    Ok(result)
}

/// Unique normal form under exhaustive leftmost-innermost rewriting.
/// Works on open terms too: variables and first-order variables are treated
/// as opaque atoms, which is sound for any instantiation.
pub fn normalize(t: Term, th: &Theory) -> Result<Term> {
    let mut steps = 0usize;
    normalize_inner(th, t, &mut steps)
}

/// Equality modulo the theory: equal normal forms.
pub fn eq_mod_e(u: Term, v: Term, th: &Theory) -> Result<bool> {
    Ok(normalize(u, th)? == normalize(v, th)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Signature;

    fn enc_theory() -> (Theory, crate::intern::Sym, crate::intern::Sym, crate::intern::Sym) {
        let mut sig = Signature::new();
        let enc = sig.declare("enc", 2).unwrap();
        let dec = sig.declare("dec", 2).unwrap();
        let h = sig.declare("h", 1).unwrap();
        let lhs = Term::app(
            dec,
            vec![
                Term::app(enc, vec![Term::var("x"), Term::var("y")]),
                Term::var("y"),
            ],
        );
        let rule = RewriteRule::new(lhs, Term::var("x")).unwrap();
        (Theory::new(sig, vec![rule]), enc, dec, h)
    }

    #[test]
    fn dec_enc_cancels() {
        let (th, enc, dec, _) = enc_theory();
        let n = Term::name("n");
        let k = Term::name("k");
        let t = Term::app(dec, vec![Term::app(enc, vec![n, k]), k]);
        assert_eq!(normalize(t, &th).unwrap(), n);
    }

    #[test]
    fn atoms_are_normal_forms() {
        let (th, ..) = enc_theory();
        let n = Term::name("n");
        assert_eq!(normalize(n, &th).unwrap(), n);
    }

    #[test]
    fn projection_rule() {
        let mut sig = Signature::new();
        let pair = sig.declare("pair", 2).unwrap();
        let fst = sig.declare("fst", 1).unwrap();
        let enc = sig.declare("enc", 2).unwrap();
        let rule = RewriteRule::new(
            Term::app(fst, vec![Term::app(pair, vec![Term::var("x"), Term::var("y")])]),
            Term::var("x"),
        )
        .unwrap();
        let th = Theory::new(sig, vec![rule]);
        let a = Term::name("a");
        let k = Term::name("k");
        let b = Term::name("b");
        let e = Term::app(enc, vec![a, k]);
        let t = Term::app(fst, vec![Term::app(pair, vec![e, b])]);
        assert_eq!(normalize(t, &th).unwrap(), e);
    }

    #[test]
    fn eq_mod_e_basic() {
        let (th, enc, dec, _) = enc_theory();
        let n = Term::name("n");
        let k = Term::name("k");
        let k2 = Term::name("k2");
        let u = Term::app(dec, vec![Term::app(enc, vec![n, k]), k]);
        assert!(eq_mod_e(u, n, &th).unwrap());
        assert!(eq_mod_e(n, n, &th).unwrap());
        // Both sides are normal forms and differ.
        let e1 = Term::app(enc, vec![n, k]);
        let e2 = Term::app(enc, vec![n, k2]);
        assert_eq!(normalize(e1, &th).unwrap(), e1);
        assert_eq!(normalize(e2, &th).unwrap(), e2);
        assert!(!eq_mod_e(e1, e2, &th).unwrap());
    }

    #[test]
    fn normalize_is_idempotent() {
        let (th, enc, dec, h) = enc_theory();
        let n = Term::name("n");
        let k = Term::name("k");
        let t = Term::app(
            h,
            vec![Term::app(dec, vec![Term::app(enc, vec![n, k]), k])],
        );
        let n1 = normalize(t, &th).unwrap();
        assert_eq!(normalize(n1, &th).unwrap(), n1);
    }

    #[test]
    fn budget_catches_divergence() {
        let mut sig = Signature::new();
        let f = sig.declare("f", 1).unwrap();
        // f(x) -> f(f(x)) diverges.
        let rule = RewriteRule::new(
            Term::app(f, vec![Term::var("x")]),
            Term::app(f, vec![Term::app(f, vec![Term::var("x")])]),
        )
        .unwrap();
        let mut th = Theory::new(sig, vec![rule]);
        th.step_budget = 50;
        let t = Term::app(f, vec![Term::name("n")]);
        assert!(matches!(
            normalize(t, &th),
            Err(EngineError::RewriteBudget(_))
        ));
    }

    #[test]
    fn rule_invariants() {
        assert!(RewriteRule::new(Term::var("x"), Term::name("n")).is_err());
        let mut sig = Signature::new();
        let f = sig.declare("g", 1).unwrap();
        assert!(RewriteRule::new(Term::app(f, vec![Term::var("x")]), Term::var("z")).is_err());
    }
}
