//! Global hash-consing store.
//!
//! Terms, frames, processes, configurations and states are content-addressed:
//! interning the same structure twice yields the same id, so equality anywhere
//! in the engine is a constant-time id comparison. The store only ever grows
//! and insertion is idempotent, which makes it safe to share across threads.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, LazyLock, RwLock};

struct Pool<T> {
    map: HashMap<T, u32>,
    items: Vec<T>,
}

impl<T: Eq + Hash + Clone> Pool<T> {
    fn new() -> Self {
        Pool {
            map: HashMap::new(),
            items: Vec::new(),
        }
    }

    fn intern(&mut self, item: T) -> u32 {
        if let Some(&id) = self.map.get(&item) {
            return id;
        }
        let id = self.items.len() as u32;
        self.items.push(item.clone());
        self.map.insert(item, id);
        id
    }

    fn get(&self, id: u32) -> T {
        self.items[id as usize].clone()
    }
}

/// Interned string (channel names, names from the name set, variables, symbol names).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Str(pub(crate) u32);

/// A channel. Ordering is by id (stable within a run); user-facing orders sort by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Channel(pub(crate) Str);

/// A function symbol with a fixed arity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sym(pub(crate) u32);

/// A handle `w_{c,i}`: the fixed constant naming the i-th output on channel c.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Handle {
    pub channel: Channel,
    pub index: u32,
}

/// An interned term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term(pub(crate) u32);

/// An interned frame (handle -> term map in canonical order).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Frame(pub(crate) u32);

/// An interned process.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Proc(pub(crate) u32);

/// An interned configuration (process multiset or ghost, plus a frame).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Config(pub(crate) u32);

/// An interned twin state of the concrete trace-equivalence LTS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Twin(pub(crate) u32);

/// An interned symbolic state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymState(pub(crate) u32);

/// Term structure.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TermNode {
    /// A name from the name set (attacker-unknown atom).
    Name(Str),
    /// A handle `w_{c,i}`.
    Handle(Handle),
    /// A process (or rewrite-rule) variable; only occurs in open terms.
    Var(Str),
    /// A first-order variable `x^{c,i}_phi` standing for the message obtained
    /// by the i-th input on c, relative to the symbolic frame `frame`.
    Param {
        channel: Channel,
        index: u32,
        frame: Frame,
    },
    /// Application of a function symbol. Arity-0 applications are public constants.
    App(Sym, Vec<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FrameNode {
    /// Entries sorted by handle; per channel the indices always form a prefix of N.
    pub entries: Vec<(Handle, Term)>,
}

/// Process structure.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ProcNode {
    Null,
    In(Channel, Str, Proc),
    Out(Channel, Term, Proc),
    If(Term, Term, Proc, Proc),
    Par(Proc, Proc),
    Choice(Proc, Proc),
}

/// Configuration body: alive process multiset (sorted) or a ghost dead at an age.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Body {
    Ghost(u32),
    Alive(Vec<Proc>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConfigNode {
    pub body: Body,
    pub frame: Frame,
}

/// Constraint literal over open terms; sides are stored normalized with lhs <= rhs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    pub positive: bool,
    pub lhs: Term,
    pub rhs: Term,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwinNode {
    /// Sorted, deduplicated configuration sets.
    pub left: Vec<Config>,
    pub right: Vec<Config>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymStateNode {
    pub left: Vec<Config>,
    pub right: Vec<Config>,
    /// Sorted, deduplicated literal set; empty set is ⊤.
    pub constraints: Vec<Lit>,
    /// Next input index per channel, sorted by channel; zero entries omitted.
    pub counters: Vec<(Channel, u32)>,
}

struct Store {
    strs: Pool<Arc<str>>,
    syms: Pool<(Str, u32)>,
    terms: Pool<TermNode>,
    frames: Pool<FrameNode>,
    procs: Pool<ProcNode>,
    configs: Pool<ConfigNode>,
    twins: Pool<TwinNode>,
    sym_states: Pool<SymStateNode>,
}

static STORE: LazyLock<RwLock<Store>> = LazyLock::new(|| {
    RwLock::new(Store {
        strs: Pool::new(),
        syms: Pool::new(),
        terms: Pool::new(),
        frames: Pool::new(),
        procs: Pool::new(),
        configs: Pool::new(),
        twins: Pool::new(),
        sym_states: Pool::new(),
    })
});

pub fn intern_str(s: &str) -> Str {
    Str(STORE.write().unwrap().strs.intern(Arc::from(s)))
}

pub fn str_value(s: Str) -> Arc<str> {
    STORE.read().unwrap().strs.get(s.0)
}

pub fn intern_sym(name: Str, arity: u32) -> Sym {
    Sym(STORE.write().unwrap().syms.intern((name, arity)))
}

pub fn sym_data(s: Sym) -> (Str, u32) {
    STORE.read().unwrap().syms.get(s.0)
}

pub fn intern_term(node: TermNode) -> Term {
    Term(STORE.write().unwrap().terms.intern(node))
}

pub fn term_node(t: Term) -> TermNode {
    STORE.read().unwrap().terms.get(t.0)
}

pub fn intern_frame(node: FrameNode) -> Frame {
    debug_assert!(node.entries.windows(2).all(|w| w[0].0 < w[1].0));
    Frame(STORE.write().unwrap().frames.intern(node))
}

pub fn frame_node(f: Frame) -> FrameNode {
    STORE.read().unwrap().frames.get(f.0)
}

pub fn intern_proc(node: ProcNode) -> Proc {
    Proc(STORE.write().unwrap().procs.intern(node))
}

pub fn proc_node(p: Proc) -> ProcNode {
    STORE.read().unwrap().procs.get(p.0)
}

pub fn intern_config(node: ConfigNode) -> Config {
    if let Body::Alive(procs) = &node.body {
        debug_assert!(procs.windows(2).all(|w| w[0] <= w[1]));
    }
    Config(STORE.write().unwrap().configs.intern(node))
}

pub fn config_node(c: Config) -> ConfigNode {
    STORE.read().unwrap().configs.get(c.0)
}

pub fn intern_twin(node: TwinNode) -> Twin {
    Twin(STORE.write().unwrap().twins.intern(node))
}

pub fn twin_node(t: Twin) -> TwinNode {
    STORE.read().unwrap().twins.get(t.0)
}

pub fn intern_sym_state(node: SymStateNode) -> SymState {
    SymState(STORE.write().unwrap().sym_states.intern(node))
}

pub fn sym_state_node(s: SymState) -> SymStateNode {
    STORE.read().unwrap().sym_states.get(s.0)
}

impl Channel {
    pub fn new(name: &str) -> Channel {
        Channel(intern_str(name))
    }

    pub fn name(&self) -> Arc<str> {
        str_value(self.0)
    }

    /// Lexicographic comparison by channel name (stable across runs).
    pub fn cmp_by_name(&self, other: &Channel) -> std::cmp::Ordering {
        self.name().cmp(&other.name())
    }
}

impl Handle {
    pub fn new(channel: Channel, index: u32) -> Handle {
        Handle { channel, index }
    }

    pub fn cmp_by_name(&self, other: &Handle) -> std::cmp::Ordering {
        self.channel
            .cmp_by_name(&other.channel)
            .then(self.index.cmp(&other.index))
    }
}

impl std::fmt::Display for Handle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "w[{},{}]", self.channel.name(), self.index)
    }
}

impl std::fmt::Display for Channel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.name())
    }
}
