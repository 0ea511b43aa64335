//! Finite rooted trees modeling the prime spectrum of a Prüfer domain, and
//! the one-dimensional infinite model used by the two counterexamples.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::Rng;
use thiserror::Error;

/// Index of a prime in a [`SpectrumTree`]; `PrimeId::ROOT` is the zero ideal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeId(pub usize);

impl PrimeId {
    pub const ROOT: PrimeId = PrimeId(0);

    pub fn is_root(self) -> bool {
        self == PrimeId::ROOT
    }
}

/// The rank-one piece between a prime and its parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PieceKind {
    /// Value group `Z`: not idempotent, branched.
    Discrete,
    /// Value group `Q`: idempotent, branched.
    Dense,
    /// Idempotent and unbranched; the prime is its only local primary ideal.
    Unbranched,
}

impl PieceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PieceKind::Discrete => "discrete",
            PieceKind::Dense => "dense",
            PieceKind::Unbranched => "unbranched",
        }
    }

    pub fn parse(s: &str) -> Option<PieceKind> {
        match s.to_ascii_lowercase().as_str() {
            "discrete" => Some(PieceKind::Discrete),
            "dense" => Some(PieceKind::Dense),
            "unbranched" => Some(PieceKind::Unbranched),
            _ => None,
        }
    }
}

/// Name reserved for the zero ideal.
pub const ROOT_NAME: &str = "(0)";

/// A node as supplied by a user: `parent = None` hangs it off the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeNode {
    pub id: String,
    pub parent: Option<String>,
    pub kind: PieceKind,
}

impl PrimeNode {
    pub fn new(id: &str, parent: Option<&str>, kind: PieceKind) -> Self {
        PrimeNode { id: id.to_string(), parent: parent.map(str::to_string), kind }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateId(String),
    ReservedId(String),
    SelfParent(String),
    UnknownParent { id: String, parent: String },
    Cycle(Vec<String>),
    /// An unbranched prime is the union of the primes below it, so it cannot
    /// sit directly above the zero ideal.
    UnbranchedAtHeightOne(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateId(id) => write!(f, "duplicate id {id}"),
            Violation::ReservedId(id) => write!(f, "id {id} is reserved for the zero ideal"),
            Violation::SelfParent(id) => write!(f, "{id} is its own parent"),
            Violation::UnknownParent { id, parent } => write!(f, "{id} has unknown parent {parent}"),
            Violation::Cycle(ids) => write!(f, "cycle through {}", ids.join(", ")),
            Violation::UnbranchedAtHeightOne(id) => {
                write!(f, "unbranched prime {id} has no nonzero prime below it")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error("invalid spectrum: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("unknown prime {0}")]
    UnknownPrime(String),
}

/// Checks tree shape and kind constraints, collecting every violation.
pub fn validate(nodes: &[PrimeNode]) -> Result<(), Vec<Violation>> {
    let mut violations = Vec::new();
    let mut by_id: BTreeMap<&str, &PrimeNode> = BTreeMap::new();
    for node in nodes {
        if node.id == ROOT_NAME {
            violations.push(Violation::ReservedId(node.id.clone()));
            continue;
        }
        if by_id.insert(&node.id, node).is_some() {
            violations.push(Violation::DuplicateId(node.id.clone()));
        }
    }
    fn parent_of(node: &PrimeNode) -> Option<&str> {
        node.parent.as_deref().filter(|p| *p != ROOT_NAME)
    }
    for node in by_id.values() {
        match parent_of(node) {
            Some(p) if p == node.id => violations.push(Violation::SelfParent(node.id.clone())),
            Some(p) if !by_id.contains_key(p) => violations.push(Violation::UnknownParent {
                id: node.id.clone(),
                parent: p.to_string(),
            }),
            None if node.kind == PieceKind::Unbranched => {
                violations.push(Violation::UnbranchedAtHeightOne(node.id.clone()))
            }
            _ => {}
        }
    }
    // follow parents; a walk longer than the node count is a cycle
    let mut reported: BTreeSet<&str> = BTreeSet::new();
    for start in by_id.keys() {
        let mut path = vec![*start];
        let mut cur = *start;
        while let Some(p) = by_id.get(cur).and_then(|n| parent_of(n)) {
            if p == cur || !by_id.contains_key(p) {
                break;
            }
            if let Some(pos) = path.iter().position(|x| *x == p) {
                let cycle: Vec<&str> = path[pos..].to_vec();
                if cycle.iter().all(|c| !reported.contains(c)) {
                    reported.extend(cycle.iter().copied());
                    let mut names: Vec<String> = cycle.iter().map(|s| s.to_string()).collect();
                    names.sort();
                    violations.push(Violation::Cycle(names));
                }
                break;
            }
            path.push(p);
            cur = p;
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct NodeData {
    name: String,
    parent: Option<PrimeId>,
    kind: Option<PieceKind>,
    depth: usize,
    children: Vec<PrimeId>,
}

/// A validated spectrum. Ids are assigned in breadth-first order, so a
/// parent always has a smaller id than its children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumTree {
    nodes: Vec<NodeData>,
    names: BTreeMap<String, PrimeId>,
}

impl SpectrumTree {
    /// The spectrum of a field.
    pub fn field() -> Self {
        SpectrumTree::from_nodes(&[]).expect("empty node list is valid")
    }

    pub fn from_nodes(nodes: &[PrimeNode]) -> Result<Self, SpectrumError> {
        validate(nodes).map_err(SpectrumError::Invalid)?;
        let mut children: BTreeMap<&str, Vec<&PrimeNode>> = BTreeMap::new();
        for node in nodes {
            let parent = node.parent.as_deref().unwrap_or(ROOT_NAME);
            children.entry(parent).or_default().push(node);
        }
        let mut tree = SpectrumTree {
            nodes: vec![NodeData {
                name: ROOT_NAME.to_string(),
                parent: None,
                kind: None,
                depth: 0,
                children: Vec::new(),
            }],
            names: BTreeMap::from([(ROOT_NAME.to_string(), PrimeId::ROOT)]),
        };
        let mut queue = std::collections::VecDeque::from([PrimeId::ROOT]);
        while let Some(p) = queue.pop_front() {
            let name = tree.nodes[p.0].name.clone();
            for child in children.get(name.as_str()).map(Vec::as_slice).unwrap_or(&[]) {
                let id = PrimeId(tree.nodes.len());
                tree.nodes.push(NodeData {
                    name: child.id.clone(),
                    parent: Some(p),
                    kind: Some(child.kind),
                    depth: tree.nodes[p.0].depth + 1,
                    children: Vec::new(),
                });
                tree.nodes[p.0].children.push(id);
                tree.names.insert(child.id.clone(), id);
                queue.push_back(id);
            }
        }
        Ok(tree)
    }

    /// The node list this tree was built from (root omitted).
    pub fn to_nodes(&self) -> Vec<PrimeNode> {
        self.nonroot()
            .map(|p| PrimeNode {
                id: self.name(p).to_string(),
                parent: self.parent(p).filter(|q| !q.is_root()).map(|q| self.name(q).to_string()),
                kind: self.kind(p).expect("nonroot"),
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, p: PrimeId) -> bool {
        p.0 < self.nodes.len()
    }

    pub fn check(&self, p: PrimeId) -> Result<(), SpectrumError> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(SpectrumError::UnknownPrime(format!("#{}", p.0)))
        }
    }

    /// All primes, root first, parents before children.
    pub fn ids(&self) -> impl Iterator<Item = PrimeId> + '_ {
        (0..self.nodes.len()).map(PrimeId)
    }

    pub fn nonroot(&self) -> impl Iterator<Item = PrimeId> + '_ {
        (1..self.nodes.len()).map(PrimeId)
    }

    pub fn name(&self, p: PrimeId) -> &str {
        &self.nodes[p.0].name
    }

    pub fn lookup(&self, name: &str) -> Result<PrimeId, SpectrumError> {
        self.names.get(name).copied().ok_or_else(|| SpectrumError::UnknownPrime(name.to_string()))
    }

    pub fn parent(&self, p: PrimeId) -> Option<PrimeId> {
        self.nodes[p.0].parent
    }

    pub fn children(&self, p: PrimeId) -> &[PrimeId] {
        &self.nodes[p.0].children
    }

    /// `None` for the root.
    pub fn kind(&self, p: PrimeId) -> Option<PieceKind> {
        self.nodes[p.0].kind
    }

    pub fn depth(&self, p: PrimeId) -> usize {
        self.nodes[p.0].depth
    }

    pub fn idempotent(&self, p: PrimeId) -> Result<bool, SpectrumError> {
        self.check(p)?;
        Ok(self.is_idempotent(p))
    }

    pub(crate) fn is_idempotent(&self, p: PrimeId) -> bool {
        !matches!(self.kind(p), Some(PieceKind::Discrete))
    }

    /// Minimal over a principal ideal. The zero ideal is not branched here.
    pub fn is_branched(&self, p: PrimeId) -> bool {
        matches!(self.kind(p), Some(PieceKind::Discrete | PieceKind::Dense))
    }

    /// The chain from the root up to `p`, inclusive.
    pub fn below(&self, p: PrimeId) -> Result<Vec<PrimeId>, SpectrumError> {
        self.check(p)?;
        Ok(self.chain(p))
    }

    pub(crate) fn chain(&self, p: PrimeId) -> Vec<PrimeId> {
        let mut out = vec![p];
        let mut cur = p;
        while let Some(q) = self.parent(cur) {
            out.push(q);
            cur = q;
        }
        out.reverse();
        out
    }

    /// Primes strictly below `p`.
    pub fn strictly_below(&self, p: PrimeId) -> Vec<PrimeId> {
        let mut c = self.chain(p);
        c.pop();
        c
    }

    /// `p ⊆ q`.
    pub fn le(&self, p: PrimeId, q: PrimeId) -> bool {
        let (dp, dq) = (self.depth(p), self.depth(q));
        if dp > dq {
            return false;
        }
        let mut cur = q;
        for _ in 0..dq - dp {
            cur = self.parent(cur).expect("depth is positive");
        }
        cur == p
    }

    pub fn lt(&self, p: PrimeId, q: PrimeId) -> bool {
        p != q && self.le(p, q)
    }

    pub fn comparable(&self, p: PrimeId, q: PrimeId) -> Result<bool, SpectrumError> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.le(p, q) || self.le(q, p))
    }

    pub(crate) fn is_comparable(&self, p: PrimeId, q: PrimeId) -> bool {
        self.le(p, q) || self.le(q, p)
    }

    /// The height-one prime below `p`; `None` for the root.
    pub fn branch_of(&self, p: PrimeId) -> Option<PrimeId> {
        self.chain(p).get(1).copied()
    }

    /// Non-root primes grouped by their height-one ancestor, in id order.
    pub fn branches_at_root(&self) -> Vec<Vec<PrimeId>> {
        self.children(PrimeId::ROOT)
            .iter()
            .map(|&h| self.nonroot().filter(|&p| self.le(h, p)).collect())
            .collect()
    }

    /// Closed by generizations: contains every prime below each member.
    pub fn is_down_closed(&self, set: &BTreeSet<PrimeId>) -> bool {
        set.iter().all(|&p| self.strictly_below(p).iter().all(|q| set.contains(q)))
    }

    /// The minimal elements of a set of primes.
    pub fn minimal_elements(&self, set: &BTreeSet<PrimeId>) -> BTreeSet<PrimeId> {
        set.iter().copied().filter(|&p| !set.iter().any(|&q| self.lt(q, p))).collect()
    }
}

pub const RANDOM_MAX_NODES: usize = 12;
pub const RANDOM_MAX_DEPTH: usize = 4;
/// Odds `3/20` of an unbranched node where one is allowed.
pub const RANDOM_UNBRANCHED_ODDS: (u32, u32) = (3, 20);

/// A random tree with at most 12 nodes (root included) and depth at most 4.
/// Each node is unbranched with odds 3/20 where that is allowed, and
/// otherwise discrete or dense with equal odds.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R) -> SpectrumTree {
    let count = rng.gen_range(1..RANDOM_MAX_NODES);
    let mut nodes: Vec<PrimeNode> = Vec::with_capacity(count);
    let mut depth: Vec<usize> = Vec::with_capacity(count);
    for k in 0..count {
        // candidate parents: the root (index None) or earlier nodes
        let slots: Vec<Option<usize>> = std::iter::once(None)
            .chain((0..k).filter(|&j| depth[j] < RANDOM_MAX_DEPTH).map(Some))
            .collect();
        let parent = slots[rng.gen_range(0..slots.len())];
        let kind = if parent.is_some() && rng.gen_ratio(RANDOM_UNBRANCHED_ODDS.0, RANDOM_UNBRANCHED_ODDS.1) {
            PieceKind::Unbranched
        } else if rng.gen_ratio(1, 2) {
            PieceKind::Discrete
        } else {
            PieceKind::Dense
        };
        depth.push(parent.map_or(1, |j| depth[j] + 1));
        nodes.push(PrimeNode {
            id: format!("P{}", k + 1),
            parent: parent.map(|j| format!("P{}", j + 1)),
            kind,
        });
    }
    SpectrumTree::from_nodes(&nodes).expect("generated trees are valid")
}

/// A countable family of height-one maximal ideals `M_1, M_2, ...` over the
/// zero ideal, all with the same piece kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InfiniteOneDimSpectrum {
    pub maximal_kind: PieceKind,
}

impl InfiniteOneDimSpectrum {
    /// Almost Dedekind: every localization at a maximal ideal is a DVR.
    pub fn almost_dedekind() -> Self {
        InfiniteOneDimSpectrum { maximal_kind: PieceKind::Discrete }
    }

    /// Shaped like the ring of all algebraic integers: rational value groups.
    pub fn algebraic_integers() -> Self {
        InfiniteOneDimSpectrum { maximal_kind: PieceKind::Dense }
    }
}
