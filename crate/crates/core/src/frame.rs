//! Frames: the attacker's knowledge from past outputs.

use crate::error::{EngineError, Result};
use crate::intern::{frame_node, intern_frame, Channel, Frame, FrameNode, Handle, Term, TermNode};
use crate::rewrite::{normalize, Theory};
use crate::term::{subst_handles, term_handles};
use std::collections::{BTreeSet, HashMap};
use std::fmt;

impl Frame {
    pub fn empty() -> Frame {
        intern_frame(FrameNode { entries: vec![] })
    }

    pub fn from_entries(mut entries: Vec<(Handle, Term)>) -> Frame {
        entries.sort();
        entries.dedup();
        let f = intern_frame(FrameNode { entries });
        debug_assert!(domain_is_prefix_closed(f), "frame indices must form per-channel prefixes");
        f
    }

    pub fn entries(&self) -> Vec<(Handle, Term)> {
        frame_node(*self).entries
    }

    pub fn dom(&self) -> BTreeSet<Handle> {
        frame_node(*self).entries.iter().map(|(h, _)| *h).collect()
    }

    pub fn get(&self, h: Handle) -> Option<Term> {
        frame_node(*self)
            .entries
            .iter()
            .find(|(k, _)| *k == h)
            .map(|(_, t)| *t)
    }

    pub fn len(&self) -> usize {
        frame_node(*self).entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Extend with a fresh handle binding.
    pub fn extend(&self, h: Handle, t: Term) -> Frame {
        let mut entries = frame_node(*self).entries;
        debug_assert!(entries.iter().all(|(k, _)| *k != h));
        entries.push((h, t));
        entries.sort();
        intern_frame(FrameNode { entries })
    }

    /// Restriction to a handle set.
    pub fn restrict(&self, keep: &BTreeSet<Handle>) -> Frame {
        let entries: Vec<(Handle, Term)> = frame_node(*self)
            .entries
            .into_iter()
            .filter(|(h, _)| keep.contains(h))
            .collect();
        intern_frame(FrameNode { entries })
    }

    /// Strict sub-frame test (entry subset and not equal).
    pub fn is_strict_subframe_of(&self, other: &Frame) -> bool {
        if self == other {
            return false;
        }
        let mine = frame_node(*self).entries;
        let theirs: BTreeSet<(Handle, Term)> = frame_node(*other).entries.into_iter().collect();
        mine.into_iter().all(|e| theirs.contains(&e))
    }
}

fn domain_is_prefix_closed(f: Frame) -> bool {
    let mut per_channel: HashMap<Channel, Vec<u32>> = HashMap::new();
    for (h, _) in frame_node(f).entries {
        per_channel.entry(h.channel).or_default().push(h.index);
    }
    per_channel.values().all(|idxs| {
        let set: BTreeSet<u32> = idxs.iter().copied().collect();
        (0..set.len() as u32).all(|i| set.contains(&i))
    })
}

/// Index of the next output on channel `c` given a handle set:
/// `max({0} ∪ {j+1 | w_{c,j} ∈ W})`.
pub fn next_output_index(c: Channel, handles: &BTreeSet<Handle>) -> u32 {
    handles
        .iter()
        .filter(|h| h.channel == c)
        .map(|h| h.index + 1)
        .max()
        .unwrap_or(0)
}

/// Apply a recipe to a closed frame and normalize.
pub fn apply_recipe(recipe: Term, frame: Frame, th: &Theory) -> Result<Term> {
    let dom = frame.dom();
    let used = term_handles(recipe);
    if let Some(missing) = used.iter().find(|h| !dom.contains(h)) {
        return Err(EngineError::HandleOutsideDomain(missing.to_string()));
    }
    let lookup: HashMap<Handle, Term> = frame.entries().into_iter().collect();
    normalize(subst_handles(recipe, &lookup), th)
}

/// Well-foundedness of a symbolic frame: every first-order variable occurring
/// in a frame term refers to a strict sub-frame.
pub fn frame_is_well_founded(f: Frame) -> bool {
    frame_node(f)
        .entries
        .into_iter()
        .all(|(_, t)| term_frames_strictly_below(t, f))
}

fn term_frames_strictly_below(t: Term, f: Frame) -> bool {
    match t.node() {
        TermNode::Param { frame, .. } => frame.is_strict_subframe_of(&f) && frame_is_well_founded(frame),
        TermNode::App(_, args) => args.into_iter().all(|a| term_frames_strictly_below(a, f)),
        _ => true,
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Display in (channel name, index) order for stable output.
        let mut entries = self.entries();
        entries.sort_by(|a, b| a.0.cmp_by_name(&b.0));
        write!(f, "{{")?;
        for (i, (h, t)) in entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{h} > {t}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{Signature, Term};

    #[test]
    fn next_output_index_cases() {
        let c = Channel::new("c");
        let d = Channel::new("d");
        let empty = BTreeSet::new();
        assert_eq!(next_output_index(c, &empty), 0);
        let mut w = BTreeSet::new();
        w.insert(Handle::new(c, 0));
        assert_eq!(next_output_index(c, &w), 1);
        let mut w2 = BTreeSet::new();
        w2.insert(Handle::new(d, 0));
        assert_eq!(next_output_index(c, &w2), 0);
    }

    #[test]
    fn apply_recipe_lookup_and_rewrite() {
        let mut sig = Signature::new();
        let enc = sig.declare("enc", 2).unwrap();
        let dec = sig.declare("dec", 2).unwrap();
        let h = sig.declare("h", 1).unwrap();
        let kpub = sig.declare("k_pub", 0).unwrap();
        let rule = crate::rewrite::RewriteRule::new(
            Term::app(
                dec,
                vec![
                    Term::app(enc, vec![Term::var("x"), Term::var("y")]),
                    Term::var("y"),
                ],
            ),
            Term::var("x"),
        )
        .unwrap();
        let th = Theory::new(sig, vec![rule]);

        let c = Channel::new("c");
        let w = Handle::new(c, 0);
        let n = Term::name("n");
        let k = Term::name("k");
        let m = Term::name("m");

        // Handle lookup.
        let f1 = Frame::from_entries(vec![(w, Term::app(enc, vec![n, k]))]);
        assert_eq!(
            apply_recipe(Term::handle(w), f1, &th).unwrap(),
            Term::app(enc, vec![n, k])
        );

        // Decryption with a public constant key.
        let f2 = Frame::from_entries(vec![(w, Term::app(enc, vec![m, Term::constant(kpub)]))]);
        let r = Term::app(dec, vec![Term::handle(w), Term::constant(kpub)]);
        assert_eq!(apply_recipe(r, f2, &th).unwrap(), m);

        // One application step then normalize.
        let r2 = Term::app(h, vec![Term::handle(w)]);
        assert_eq!(
            apply_recipe(r2, f1, &th).unwrap(),
            Term::app(h, vec![Term::app(enc, vec![n, k])])
        );

        // Handle outside the domain errors.
        let d = Channel::new("d");
        let bad = Term::handle(Handle::new(d, 0));
        assert!(matches!(
            apply_recipe(bad, f1, &th),
            Err(EngineError::HandleOutsideDomain(_))
        ));
    }

    #[test]
    fn restriction_and_extension() {
        let c = Channel::new("c");
        let d = Channel::new("d");
        let a = Term::name("a");
        let b = Term::name("b");
        let f = Frame::empty()
            .extend(Handle::new(c, 0), a)
            .extend(Handle::new(d, 0), b);
        let mut keep = BTreeSet::new();
        keep.insert(Handle::new(c, 0));
        let r = f.restrict(&keep);
        assert_eq!(r.entries(), vec![(Handle::new(c, 0), a)]);
        assert!(r.is_strict_subframe_of(&f));
        assert!(!f.is_strict_subframe_of(&f));
    }

    #[test]
    fn frame_canonical_order_ignores_insertion_order() {
        let c = Channel::new("c");
        let d = Channel::new("d");
        let a = Term::name("a");
        let b = Term::name("b");
        let f1 = Frame::empty()
            .extend(Handle::new(c, 0), a)
            .extend(Handle::new(d, 0), b);
        let f2 = Frame::empty()
            .extend(Handle::new(d, 0), b)
            .extend(Handle::new(c, 0), a);
        assert_eq!(f1, f2);
    }
}
