//! Linear and weak orderings on the set `{1, …, n}`.
//!
//! A [`LinearOrder`] is a permutation listing the elements from smallest to
//! largest. A [`WeakOrder`] is an ordered partition into equivalence blocks,
//! minimal block first; two elements are tied (`~`) when they share a block.
//!
//! Text formats: a linear order is a comma-separated permutation (`2,3,1`,
//! smallest first); a weak order separates blocks with `<` and joins tied
//! members with `~` (`2~3 < 1 < 4`).

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use thiserror::Error;

/// Errors raised when constructing an ordering from raw data.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("ordering must contain at least one element")]
    Empty,
    #[error("block {0} is empty")]
    EmptyBlock(usize),
    #[error("element {0} appears more than once")]
    DuplicateElement(usize),
    #[error("element {element} out of range 1..={n}")]
    ElementOutOfRange { element: usize, n: usize },
    #[error("element {0} is missing")]
    MissingElement(usize),
}

/// Errors raised when parsing an ordering from text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderParseError {
    #[error("empty input")]
    Empty,
    #[error("invalid element {0:?}: labels are 1-based decimal integers")]
    InvalidToken(String),
    #[error(transparent)]
    Invalid(#[from] OrderError),
}

fn parse_element(token: &str) -> Result<usize, OrderParseError> {
    let token = token.trim();
    match token.parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(OrderParseError::InvalidToken(token.to_string())),
    }
}

/// Checks that `seen[e-1]` can be marked for an element of `1..=n`.
fn mark_seen(seen: &mut [bool], element: usize) -> Result<(), OrderError> {
    let n = seen.len();
    if element == 0 || element > n {
        return Err(OrderError::ElementOutOfRange { element, n });
    }
    if seen[element - 1] {
        return Err(OrderError::DuplicateElement(element));
    }
    seen[element - 1] = true;
    Ok(())
}

/// A linear (total, transitive, antisymmetric) ordering of `{1, …, n}`,
/// stored as the list of elements from smallest to largest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearOrder {
    order: Vec<usize>,
    // rank[e-1] = position of element e, 0 = smallest
    rank: Vec<usize>,
}

impl LinearOrder {
    /// Builds a linear order from the permutation `order` (smallest first).
    pub fn new(order: Vec<usize>) -> Result<Self, OrderError> {
        if order.is_empty() {
            return Err(OrderError::Empty);
        }
        let n = order.len();
        let mut rank = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        for (pos, &e) in order.iter().enumerate() {
            mark_seen(&mut seen, e)?;
            rank[e - 1] = pos;
        }
        Ok(Self { order, rank })
    }

    /// The natural ordering `1 < 2 < … < n`.
    pub fn natural(n: usize) -> Self {
        Self::new((1..=n).collect()).expect("n >= 1")
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    /// Elements from smallest to largest.
    pub fn elements(&self) -> &[usize] {
        &self.order
    }

    /// Position of `e`, counting from 0 at the smallest element.
    pub fn rank(&self, e: usize) -> usize {
        self.rank[e - 1]
    }

    /// Element at position `pos` (0 = smallest).
    pub fn at(&self, pos: usize) -> usize {
        self.order[pos]
    }

    pub fn smallest(&self) -> usize {
        self.order[0]
    }

    pub fn largest(&self) -> usize {
        *self.order.last().unwrap()
    }

    /// `a` strictly below `b`.
    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.rank(a) < self.rank(b)
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.rank(a) <= self.rank(b)
    }

    /// Strict convex hull: elements strictly between `a` and `b`.
    pub fn between(&self, a: usize, b: usize) -> impl Iterator<Item = usize> + '_ {
        let (lo, hi) = if self.rank(a) < self.rank(b) {
            (self.rank(a), self.rank(b))
        } else {
            (self.rank(b), self.rank(a))
        };
        self.order[lo + 1..hi].iter().copied()
    }

    /// All `n!` linear orders on `{1, …, n}` in lexicographic order of their
    /// element lists.
    pub fn all(n: usize) -> impl Iterator<Item = LinearOrder> {
        (1..=n)
            .permutations(n)
            .map(|p| LinearOrder::new(p).expect("permutation"))
    }

    /// True when every strict comparison of `w` is respected by `self`
    /// (ties of `w` are unconstrained).
    pub fn is_subordinated_to(&self, w: &WeakOrder) -> bool {
        assert_eq!(self.n(), w.n(), "orders must be on the same set");
        // equivalent to: the levels read along self never decrease
        self.order.windows(2).all(|p| w.level(p[0]) <= w.level(p[1]))
    }

    /// Single-peakedness w.r.t. `base`: whenever `y` lies strictly between
    /// `x` and `z` in `base`, `y` is below `x` or below `z` in `self`.
    pub fn is_single_peaked(&self, base: &LinearOrder) -> bool {
        assert_eq!(self.n(), base.n(), "orders must be on the same set");
        let n = self.n();
        for i in 0..n {
            for j in i + 2..n {
                let (x, z) = (base.at(i), base.at(j));
                for k in i + 1..j {
                    let y = base.at(k);
                    if !(self.lt(y, x) || self.lt(y, z)) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

impl fmt::Display for LinearOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.order.iter().join(","))
    }
}

impl FromStr for LinearOrder {
    type Err = OrderParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().is_empty() {
            return Err(OrderParseError::Empty);
        }
        let order = s
            .split(',')
            .map(parse_element)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(order)?)
    }
}

/// A weak (total, transitive) ordering of `{1, …, n}`, stored as its ordered
/// partition into equivalence blocks, minimal block first. Members within a
/// block are kept sorted ascending so that equal weak orders have equal
/// representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeakOrder {
    blocks: Vec<Vec<usize>>,
    // level[e-1] = index of the block containing e
    level: Vec<usize>,
}

impl WeakOrder {
    /// Builds a weak order from blocks listed minimal-first. The blocks must
    /// partition `{1, …, n}` where `n` is the total number of elements.
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self, OrderError> {
        let n: usize = blocks.iter().map(Vec::len).sum();
        if n == 0 {
            return Err(OrderError::Empty);
        }
        let mut seen = vec![false; n];
        let mut level = vec![usize::MAX; n];
        for (idx, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(OrderError::EmptyBlock(idx));
            }
            for &e in block {
                mark_seen(&mut seen, e)?;
                level[e - 1] = idx;
            }
        }
        let mut blocks = blocks;
        for block in &mut blocks {
            block.sort_unstable();
        }
        Ok(Self { blocks, level })
    }

    /// The weak order with all elements tied.
    pub fn single_block(n: usize) -> Self {
        Self::new(vec![(1..=n).collect()]).expect("n >= 1")
    }

    /// The linear order `lin` viewed as a weak order with singleton blocks.
    pub fn from_linear(lin: &LinearOrder) -> Self {
        Self::new(lin.elements().iter().map(|&e| vec![e]).collect()).expect("valid")
    }

    pub fn n(&self) -> usize {
        self.level.len()
    }

    /// Blocks minimal-first, members ascending.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Index of the block containing `e` (0 = minimal block).
    pub fn level(&self, e: usize) -> usize {
        self.level[e - 1]
    }

    /// `a ~ b`: tied.
    pub fn sim(&self, a: usize, b: usize) -> bool {
        self.level(a) == self.level(b)
    }

    /// `a ≺ b`: strictly below.
    pub fn prec(&self, a: usize, b: usize) -> bool {
        self.level(a) < self.level(b)
    }

    /// The set of minimal elements (the first block).
    pub fn min_set(&self) -> &[usize] {
        &self.blocks[0]
    }

    /// The set of maximal elements (the last block).
    pub fn max_set(&self) -> &[usize] {
        self.blocks.last().unwrap()
    }

    /// True when the ordering is a linear order (all blocks singletons).
    pub fn is_linear(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    /// The subordinated linear order read off a linear weak order.
    pub fn as_linear(&self) -> Option<LinearOrder> {
        if !self.is_linear() {
            return None;
        }
        Some(LinearOrder::new(self.blocks.iter().map(|b| b[0]).collect()).expect("valid"))
    }

    /// Quasilinearity: no pairwise distinct `a ≺ b ~ c`; equivalently every
    /// block except possibly the minimal one is a singleton.
    pub fn is_quasilinear(&self) -> bool {
        self.blocks[1..].iter().all(|b| b.len() == 1)
    }

    /// All linear orders subordinated to `self`: the within-block
    /// permutations, blocks kept in order. Exactly `∏ |block|!` results.
    pub fn subordinated_linear_orders(&self) -> Vec<LinearOrder> {
        let mut prefixes: Vec<Vec<usize>> = vec![Vec::with_capacity(self.n())];
        for block in &self.blocks {
            let mut next = Vec::new();
            for perm in block.iter().copied().permutations(block.len()) {
                for prefix in &prefixes {
                    let mut order = prefix.clone();
                    order.extend_from_slice(&perm);
                    next.push(order);
                }
            }
            prefixes = next;
        }
        prefixes
            .into_iter()
            .map(|order| LinearOrder::new(order).expect("permutation"))
            .collect()
    }

    /// Weak single-peakedness w.r.t. `base`: whenever `y` lies strictly
    /// between `x` and `z` in `base`, `y ≺ x` or `y ≺ z` or `x ~ y ~ z`.
    pub fn is_weakly_single_peaked(&self, base: &LinearOrder) -> bool {
        assert_eq!(self.n(), base.n(), "orders must be on the same set");
        let n = self.n();
        for i in 0..n {
            for j in i + 2..n {
                let (lx, lz) = (self.level(base.at(i)), self.level(base.at(j)));
                for k in i + 1..j {
                    let ly = self.level(base.at(k));
                    if !(ly < lx || ly < lz || (lx == ly && ly == lz)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// All maximal `base`-convex sets of two or more mutually tied elements,
    /// in `base` order. Each is flagged as minimal when no element of `self`
    /// lies strictly below it.
    pub fn plateaus(&self, base: &LinearOrder) -> Vec<Plateau> {
        assert_eq!(self.n(), base.n(), "orders must be on the same set");
        let mut out = Vec::new();
        let mut run_start = 0;
        for pos in 1..=self.n() {
            if pos < self.n() && self.level(base.at(pos)) == self.level(base.at(run_start)) {
                continue;
            }
            if pos - run_start >= 2 {
                let mut members: Vec<usize> =
                    (run_start..pos).map(|p| base.at(p)).collect();
                members.sort_unstable();
                let level = self.level(members[0]);
                out.push(Plateau { members, level, minimal: level == 0 });
            }
            run_start = pos;
        }
        out
    }

    /// Pattern analysis of the profile of `self` drawn over `base`.
    pub fn pattern_report(&self, base: &LinearOrder) -> PatternReport {
        assert_eq!(self.n(), base.n(), "orders must be on the same set");
        let n = self.n();

        // v_free: no y strictly between x and z lying strictly above both.
        let mut v_free = true;
        'outer: for i in 0..n {
            for j in i + 2..n {
                let (lx, lz) = (self.level(base.at(i)), self.level(base.at(j)));
                for k in i + 1..j {
                    let ly = self.level(base.at(k));
                    if ly > lx && ly > lz {
                        v_free = false;
                        break 'outer;
                    }
                }
            }
        }

        // A plateau with a strictly lower element on its left (in base) is an
        // L pattern; on its right, a reversed L.
        let mut l_free = true;
        let mut reversed_l_free = true;
        for plateau in self.plateaus(base) {
            if plateau.minimal {
                continue;
            }
            let lo = base.rank(plateau.members[0]);
            let hi = plateau
                .members
                .iter()
                .map(|&e| base.rank(e))
                .max()
                .unwrap();
            if (0..lo).any(|p| self.level(base.at(p)) < plateau.level) {
                l_free = false;
            }
            if (hi + 1..n).any(|p| self.level(base.at(p)) < plateau.level) {
                reversed_l_free = false;
            }
        }

        // Every tied pair must span a minimal plateau: the closed base
        // interval between the two elements is all tied and nothing lies
        // strictly below it.
        let mut same_level_pairs_are_plateaus = true;
        'pairs: for a in 1..=n {
            for b in a + 1..=n {
                if !self.sim(a, b) {
                    continue;
                }
                let lo = base.rank(a).min(base.rank(b));
                let hi = base.rank(a).max(base.rank(b));
                let tied = (lo..=hi).all(|p| self.sim(base.at(p), a));
                if !tied || self.level(a) != 0 {
                    same_level_pairs_are_plateaus = false;
                    break 'pairs;
                }
            }
        }

        PatternReport {
            v_free,
            l_free,
            reversed_l_free,
            same_level_pairs_are_plateaus,
            weakly_single_peaked: v_free && l_free && reversed_l_free,
            quasilinear_and_wsp: v_free && same_level_pairs_are_plateaus,
        }
    }
}

impl fmt::Display for WeakOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().join("~"))
            .join(" < ");
        write!(f, "{blocks}")
    }
}

impl FromStr for WeakOrder {
    type Err = OrderParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().is_empty() {
            return Err(OrderParseError::Empty);
        }
        let blocks = s
            .split('<')
            .map(|block| block.split('~').map(parse_element).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(blocks)?)
    }
}

/// A maximal base-convex set of two or more mutually tied elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plateau {
    /// Members sorted ascending by label.
    pub members: Vec<usize>,
    /// Block index shared by the members.
    pub level: usize,
    /// True when no element lies strictly below the plateau.
    pub minimal: bool,
}

/// Pattern flags of a weak order drawn over a base linear order, together
/// with the two verdicts they characterize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatternReport {
    /// No element strictly between two others lies strictly above both.
    pub v_free: bool,
    /// No plateau has a strictly lower element on its left.
    pub l_free: bool,
    /// No plateau has a strictly lower element on its right.
    pub reversed_l_free: bool,
    /// Every tied pair spans a closed base interval that is a minimal plateau.
    pub same_level_pairs_are_plateaus: bool,
    /// Equals `v_free && l_free && reversed_l_free`.
    pub weakly_single_peaked: bool,
    /// Equals `v_free && same_level_pairs_are_plateaus`.
    pub quasilinear_and_wsp: bool,
}

/// Filters accepted by [`enumerate_weak_orders`].
#[derive(Debug, Clone)]
pub enum WeakOrderFilter {
    All,
    Quasilinear,
    /// Quasilinear and weakly single-peaked w.r.t. the given base.
    QuasilinearWeaklySinglePeaked(LinearOrder),
}

impl WeakOrderFilter {
    fn accepts(&self, w: &WeakOrder) -> bool {
        match self {
            WeakOrderFilter::All => true,
            WeakOrderFilter::Quasilinear => w.is_quasilinear(),
            WeakOrderFilter::QuasilinearWeaklySinglePeaked(base) => {
                w.is_quasilinear() && w.is_weakly_single_peaked(base)
            }
        }
    }
}

/// Enumerates every weak order on `{1, …, n}` passing the filter, each
/// exactly once, in a deterministic order. Unfiltered, the count is the
/// n-th Fubini number.
pub fn enumerate_weak_orders(
    n: usize,
    filter: WeakOrderFilter,
) -> Result<WeakOrders, OrderError> {
    if n == 0 {
        return Err(OrderError::Empty);
    }
    if let WeakOrderFilter::QuasilinearWeaklySinglePeaked(base) = &filter {
        assert_eq!(base.n(), n, "base must be on the same set");
    }
    Ok(WeakOrders { n, filter, stack: vec![Frame { blocks: vec![vec![1]], next: 2 }] })
}

struct Frame {
    blocks: Vec<Vec<usize>>,
    next: usize,
}

/// Iterator over weak orders; see [`enumerate_weak_orders`].
pub struct WeakOrders {
    n: usize,
    filter: WeakOrderFilter,
    stack: Vec<Frame>,
}

impl Iterator for WeakOrders {
    type Item = WeakOrder;

    fn next(&mut self) -> Option<WeakOrder> {
        while let Some(frame) = self.stack.pop() {
            if frame.next > self.n {
                let w = WeakOrder::new(frame.blocks).expect("partition by construction");
                if self.filter.accepts(&w) {
                    return Some(w);
                }
                continue;
            }
            let k = frame.blocks.len();
            // Children in reverse so that joining block 0 is explored first:
            // new singleton block at positions k..0, then join blocks k-1..0.
            for pos in (0..=k).rev() {
                let mut blocks = frame.blocks.clone();
                blocks.insert(pos, vec![frame.next]);
                self.stack.push(Frame { blocks, next: frame.next + 1 });
            }
            for i in (0..k).rev() {
                let mut blocks = frame.blocks.clone();
                blocks[i].push(frame.next);
                self.stack.push(Frame { blocks, next: frame.next + 1 });
            }
        }
        None
    }
}
