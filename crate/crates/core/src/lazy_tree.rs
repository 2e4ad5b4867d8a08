//! Balanced interval tree over a partition of `[0,1)` with lazy range updates.
//!
//! Each leaf holds one piece of the partition. Every node carries a weight
//! `w` and a pending message `m`; the effective mass of a node is its weight
//! acted on by its own message and the messages of all its ancestors. The
//! tree maintains the invariant that the effective mass of every internal
//! node equals the sum of the effective masses of its leaf descendants.
//!
//! Messages form a commutative group described by [`UpdateLaw`]. The
//! [`Multiplicative`] law stores `|I| * exp(eta * F)` per leaf and supports
//! sampling; the [`Additive`] law stores `|I| * F`, i.e. the integral of a
//! cumulative sum, exactly up to floating point addition.
//!
//! Balance is kept with AVL rotations. A rotation first flushes the message
//! of its pivot one level down so that every effective mass is preserved.

use std::fmt::{self, Write as _};
use std::marker::PhantomData;

use rand::Rng;

use crate::error::{Error, Result};
use crate::piecewise::Interval;

/// Composition law for pending messages.
pub trait UpdateLaw {
    const NEUTRAL: f64;
    /// Weight per unit length of a fresh tree.
    const INITIAL_DENSITY: f64;

    fn compose(a: f64, b: f64) -> f64;
    fn invert(a: f64) -> f64;
    /// Applies message `m` to the weight of a node spanning `len`.
    fn act(weight: f64, m: f64, len: f64) -> f64;
    fn is_valid(m: f64) -> bool;
}

/// `(x, 1)`: messages scale masses.
#[derive(Debug, Clone, Copy, Default)]
pub struct Multiplicative;

/// `(+, 0)`: messages add a constant density over the node's interval.
#[derive(Debug, Clone, Copy, Default)]
pub struct Additive;

impl UpdateLaw for Multiplicative {
    const NEUTRAL: f64 = 1.0;
    const INITIAL_DENSITY: f64 = 1.0;

    fn compose(a: f64, b: f64) -> f64 {
        a * b
    }
    fn invert(a: f64) -> f64 {
        1.0 / a
    }
    fn act(weight: f64, m: f64, _len: f64) -> f64 {
        weight * m
    }
    fn is_valid(m: f64) -> bool {
        m.is_finite() && m > 0.0
    }
}

impl UpdateLaw for Additive {
    const NEUTRAL: f64 = 0.0;
    const INITIAL_DENSITY: f64 = 0.0;

    fn compose(a: f64, b: f64) -> f64 {
        a + b
    }
    fn invert(a: f64) -> f64 {
        -a
    }
    fn act(weight: f64, m: f64, len: f64) -> f64 {
        weight + m * len
    }
    fn is_valid(m: f64) -> bool {
        m.is_finite()
    }
}

const NIL: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct Node {
    low: f64,
    high: f64,
    w: f64,
    m: f64,
    parent: u32,
    left: u32,
    right: u32,
    height: u32,
}

impl Node {
    fn is_leaf(&self) -> bool {
        self.left == NIL
    }
    fn len(&self) -> f64 {
        self.high - self.low
    }
}

/// A leaf of the tree with its effective mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeafMass {
    pub interval: Interval,
    pub mass: f64,
}

/// A node whose effective mass disagrees with the sum over its leaves.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditFailure {
    pub interval: Interval,
    pub mass: f64,
    pub leaf_sum: f64,
}

impl fmt::Display for AuditFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "node {} has mass {} but its leaves sum to {}",
            self.interval, self.mass, self.leaf_sum
        )
    }
}

#[derive(Debug, Clone)]
pub struct LazyIntervalTree<L: UpdateLaw> {
    nodes: Vec<Node>,
    root: u32,
    leaf_count: usize,
    touches: u64,
    _law: PhantomData<L>,
}

impl<L: UpdateLaw> Default for LazyIntervalTree<L> {
    fn default() -> Self {
        Self::new()
    }
}

impl<L: UpdateLaw> LazyIntervalTree<L> {
    pub fn new() -> Self {
        LazyIntervalTree {
            nodes: vec![Node {
                low: 0.0,
                high: 1.0,
                w: L::INITIAL_DENSITY,
                m: L::NEUTRAL,
                parent: NIL,
                left: NIL,
                right: NIL,
                height: 0,
            }],
            root: 0,
            leaf_count: 1,
            touches: 0,
            _law: PhantomData,
        }
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf_count
    }

    /// Height of the tree; a single leaf has height 0.
    pub fn height(&self) -> u32 {
        self.nodes[self.root as usize].height
    }

    /// Nodes visited or modified since the last [`reset_touches`](Self::reset_touches).
    pub fn touches(&self) -> u64 {
        self.touches
    }

    pub fn reset_touches(&mut self) {
        self.touches = 0;
    }

    /// Effective mass of the root.
    pub fn total_mass(&self) -> f64 {
        let r = &self.nodes[self.root as usize];
        L::act(r.w, r.m, r.len())
    }

    #[inline]
    fn node(&self, i: u32) -> &Node {
        &self.nodes[i as usize]
    }

    #[inline]
    fn node_mut(&mut self, i: u32) -> &mut Node {
        &mut self.nodes[i as usize]
    }

    /// Weight of `i` under its own message only.
    #[inline]
    fn own_mass(&self, i: u32) -> f64 {
        let n = self.node(i);
        L::act(n.w, n.m, n.len())
    }

    /// Makes `i` and its children up to date, handing the composed messages
    /// on to the grandchildren.
    fn update_message(&mut self, i: u32) {
        self.touches += 1;
        let (m, left, right) = {
            let n = self.node(i);
            (n.m, n.left, n.right)
        };
        if m != L::NEUTRAL {
            let n = self.node_mut(i);
            n.w = L::act(n.w, m, n.high - n.low);
            n.m = L::NEUTRAL;
        }
        if left == NIL {
            return;
        }
        for c in [left, right] {
            let (pending, gl, gr) = {
                let cn = self.node(c);
                (L::compose(cn.m, m), cn.left, cn.right)
            };
            if pending == L::NEUTRAL {
                continue;
            }
            {
                let cn = self.node_mut(c);
                cn.w = L::act(cn.w, pending, cn.high - cn.low);
                cn.m = L::NEUTRAL;
            }
            if gl != NIL {
                for g in [gl, gr] {
                    let gn = self.node_mut(g);
                    gn.m = L::compose(gn.m, pending);
                }
            }
        }
    }

    /// Recomputes interval, weight and height of an internal node from its
    /// children.
    fn pull(&mut self, i: u32) {
        self.touches += 1;
        let (l, r) = (self.node(i).left, self.node(i).right);
        let w = self.own_mass(l) + self.own_mass(r);
        let (low, high) = (self.node(l).low, self.node(r).high);
        let height = 1 + self.node(l).height.max(self.node(r).height);
        let n = self.node_mut(i);
        n.w = w;
        n.low = low;
        n.high = high;
        n.height = height;
    }

    fn replace_child(&mut self, parent: u32, old: u32, new: u32) {
        if parent == NIL {
            self.root = new;
        } else if self.node(parent).left == old {
            self.node_mut(parent).left = new;
        } else {
            self.node_mut(parent).right = new;
        }
        self.node_mut(new).parent = parent;
    }

    fn rotate_right(&mut self, i: u32) -> u32 {
        self.update_message(i);
        let l = self.node(i).left;
        let lr = self.node(l).right;
        let parent = self.node(i).parent;
        self.node_mut(i).left = lr;
        self.node_mut(lr).parent = i;
        self.node_mut(l).right = i;
        self.replace_child(parent, i, l);
        self.node_mut(i).parent = l;
        self.pull(i);
        self.pull(l);
        l
    }

    fn rotate_left(&mut self, i: u32) -> u32 {
        self.update_message(i);
        let r = self.node(i).right;
        let rl = self.node(r).left;
        let parent = self.node(i).parent;
        self.node_mut(i).right = rl;
        self.node_mut(rl).parent = i;
        self.node_mut(r).left = i;
        self.replace_child(parent, i, r);
        self.node_mut(i).parent = r;
        self.pull(i);
        self.pull(r);
        r
    }

    fn balance_factor(&self, i: u32) -> i64 {
        let n = self.node(i);
        self.node(n.left).height as i64 - self.node(n.right).height as i64
    }

    /// Restores the AVL condition at `i`; returns the node now in its place.
    fn rebalance(&mut self, i: u32) -> u32 {
        let bf = self.balance_factor(i);
        if bf > 1 {
            let l = self.node(i).left;
            if self.balance_factor(l) < 0 {
                self.rotate_left(l);
            }
            self.rotate_right(i)
        } else if bf < -1 {
            let r = self.node(i).right;
            if self.balance_factor(r) > 0 {
                self.rotate_right(r);
            }
            self.rotate_left(i)
        } else {
            i
        }
    }

    /// Recomputes every node from `i` up to the root, rebalancing on the way.
    fn fix_upward(&mut self, mut i: u32) {
        while i != NIL {
            self.pull(i);
            i = self.rebalance(i);
            i = self.node(i).parent;
        }
    }

    /// Recomputes every node from `i` up to the root without restructuring.
    fn pull_upward(&mut self, mut i: u32) {
        while i != NIL {
            self.pull(i);
            i = self.node(i).parent;
        }
    }

    /// Walks from the root to a leaf, flushing messages top-down. `go_left`
    /// decides the branch given the split point between the two children.
    fn descend(&mut self, go_left: impl Fn(f64) -> bool, path: &mut Vec<u32>) -> u32 {
        path.clear();
        let mut i = self.root;
        self.update_message(i);
        loop {
            path.push(i);
            let n = self.node(i);
            if n.is_leaf() {
                return i;
            }
            let split = self.node(n.left).high;
            i = if go_left(split) { n.left } else { n.right };
            self.update_message(i);
        }
    }

    fn alloc(&mut self, node: Node) -> u32 {
        let id = self.nodes.len();
        assert!(id < NIL as usize, "interval tree exceeded u32 node capacity");
        self.nodes.push(node);
        id as u32
    }

    /// Splits the piece containing `point` at `point`. Inserting an existing
    /// breakpoint is a no-op.
    pub fn insert(&mut self, point: f64) -> Result<()> {
        if !(point > 0.0 && point < 1.0) {
            return Err(Error::domain(format!("insert point {point} not in (0,1)")));
        }
        let mut path = Vec::new();
        let leaf = self.descend(|split| point < split, &mut path);
        let (low, high, w) = {
            let n = self.node(leaf);
            (n.low, n.high, n.w)
        };
        if low == point {
            return Ok(());
        }
        let len = high - low;
        let template = Node {
            low,
            high: point,
            w: w * ((point - low) / len),
            m: L::NEUTRAL,
            parent: leaf,
            left: NIL,
            right: NIL,
            height: 0,
        };
        let l = self.alloc(template.clone());
        let r = self.alloc(Node {
            low: point,
            high,
            w: w * ((high - point) / len),
            ..template
        });
        let n = self.node_mut(leaf);
        n.left = l;
        n.right = r;
        self.leaf_count += 1;
        self.fix_upward(leaf);
        Ok(())
    }

    /// Composes `delta` into every leaf inside `[low, high)`, splitting the
    /// pieces that contain the endpoints first.
    pub fn range_update(&mut self, interval: Interval, delta: f64) -> Result<()> {
        let Interval { low, high } = interval;
        if !(0.0 <= low && low < high && high <= 1.0) {
            return Err(Error::domain(format!("update interval {interval} is empty or outside [0,1)")));
        }
        if !L::is_valid(delta) {
            return Err(Error::domain(format!("invalid update value {delta}")));
        }
        if low == 0.0 && high == 1.0 {
            self.touches += 1;
            let r = self.root;
            let n = self.node_mut(r);
            n.m = L::compose(n.m, delta);
            return Ok(());
        }
        if low > 0.0 {
            self.insert(low)?;
        }
        if high < 1.0 {
            self.insert(high)?;
        }

        let mut path_l = Vec::new();
        let mut path_h = Vec::new();
        let leaf_l = self.descend(|split| low < split, &mut path_l);
        let leaf_h = self.descend(|split| high <= split, &mut path_h);
        debug_assert_eq!(self.node(leaf_l).low, low);
        debug_assert_eq!(self.node(leaf_h).high, high);

        let lca_depth = path_l
            .iter()
            .zip(&path_h)
            .take_while(|(a, b)| a == b)
            .count()
            - 1;
        let lca = path_l[lca_depth];

        if leaf_l == leaf_h {
            let n = self.node_mut(leaf_l);
            n.w = L::act(n.w, delta, n.high - n.low);
            self.pull_upward(self.node(leaf_l).parent);
            return Ok(());
        }

        // Lower boundary path: every right sibling hanging off it lies inside.
        {
            let n = self.node_mut(leaf_l);
            n.w = L::act(n.w, delta, n.high - n.low);
        }
        for d in (lca_depth + 1..path_l.len() - 1).rev() {
            let i = path_l[d];
            let child = path_l[d + 1];
            let n = self.node(i);
            if n.left == child {
                let r = n.right;
                let rn = self.node_mut(r);
                rn.m = L::compose(rn.m, delta);
            }
            self.pull(i);
        }
        // Upper boundary path: every left sibling hanging off it lies inside.
        {
            let n = self.node_mut(leaf_h);
            n.w = L::act(n.w, delta, n.high - n.low);
        }
        for d in (lca_depth + 1..path_h.len() - 1).rev() {
            let i = path_h[d];
            let child = path_h[d + 1];
            let n = self.node(i);
            if n.right == child {
                let l = n.left;
                let ln = self.node_mut(l);
                ln.m = L::compose(ln.m, delta);
            }
            self.pull(i);
        }
        self.pull_upward(lca);
        Ok(())
    }

    /// Composes `delta` into the root message: O(1).
    pub fn scale_all(&mut self, delta: f64) -> Result<()> {
        self.range_update(Interval::UNIT, delta)
    }

    /// The leaf containing `x` and its effective mass.
    pub fn leaf_at(&mut self, x: f64) -> Result<LeafMass> {
        if !(0.0..1.0).contains(&x) {
            return Err(Error::domain(format!("{x} is outside [0,1)")));
        }
        let mut path = Vec::new();
        let leaf = self.descend(|split| x < split, &mut path);
        let n = self.node(leaf);
        Ok(LeafMass {
            interval: Interval::new(n.low, n.high),
            mass: n.w,
        })
    }

    /// All leaves left to right with their effective masses. Does not mutate.
    pub fn leaves(&self) -> Vec<LeafMass> {
        let mut out = Vec::with_capacity(self.leaf_count);
        let mut stack = vec![(self.root, L::NEUTRAL)];
        while let Some((i, above)) = stack.pop() {
            let n = self.node(i);
            let m = L::compose(n.m, above);
            if n.is_leaf() {
                out.push(LeafMass {
                    interval: Interval::new(n.low, n.high),
                    mass: L::act(n.w, m, n.len()),
                });
            } else {
                stack.push((n.right, m));
                stack.push((n.left, m));
            }
        }
        out
    }

    /// Pushes every pending message down to the leaves.
    pub fn flush(&mut self) {
        let mut stack = vec![self.root];
        while let Some(i) = stack.pop() {
            self.update_message(i);
            let n = self.node(i);
            if !n.is_leaf() {
                stack.push(n.left);
                stack.push(n.right);
            }
        }
    }

    /// Checks that every node's effective mass equals the sum of the
    /// effective masses of its leaf descendants, within `rel_tol`.
    pub fn audit(&self, rel_tol: f64) -> std::result::Result<(), AuditFailure> {
        // Post-order: (node, inherited message, children visited).
        let mut leaf_sums = vec![0.0; self.nodes.len()];
        let mut stack = vec![(self.root, L::NEUTRAL, false)];
        while let Some((i, above, done)) = stack.pop() {
            let n = self.node(i);
            let m = L::compose(n.m, above);
            let mass = L::act(n.w, m, n.len());
            if n.is_leaf() {
                leaf_sums[i as usize] = mass;
            } else if !done {
                stack.push((i, above, true));
                stack.push((n.right, m, false));
                stack.push((n.left, m, false));
            } else {
                let sum = leaf_sums[n.left as usize] + leaf_sums[n.right as usize];
                leaf_sums[i as usize] = sum;
                let scale = mass.abs().max(sum.abs()).max(f64::MIN_POSITIVE);
                let bad_partition =
                    self.node(n.left).high != self.node(n.right).low
                        || self.node(n.left).low != n.low
                        || self.node(n.right).high != n.high;
                if (mass - sum).abs() > rel_tol * scale || bad_partition {
                    return Err(AuditFailure {
                        interval: Interval::new(n.low, n.high),
                        mass,
                        leaf_sum: sum,
                    });
                }
            }
        }
        Ok(())
    }

    /// Indented rendering of `(interval, w, m)` per node, preorder.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let mut stack = vec![(self.root, 0usize)];
        while let Some((i, depth)) = stack.pop() {
            let n = self.node(i);
            let _ = writeln!(
                out,
                "{:indent$}[{}, {}) w={} m={}",
                "",
                n.low,
                n.high,
                n.w,
                n.m,
                indent = 2 * depth
            );
            if !n.is_leaf() {
                stack.push((n.right, depth + 1));
                stack.push((n.left, depth + 1));
            }
        }
        out
    }
}

impl LazyIntervalTree<Multiplicative> {
    /// Samples a point with density proportional to leaf mass, uniform
    /// within the chosen leaf. Flushes messages along the descent only.
    pub fn draw<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<f64> {
        let total = self.total_mass();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::domain(format!("cannot sample from total mass {total}")));
        }
        let mut i = self.root;
        self.update_message(i);
        let mut target = rng.random::<f64>() * self.node(i).w;
        loop {
            let n = self.node(i);
            if n.is_leaf() {
                break;
            }
            let (l, r) = (n.left, n.right);
            let wl = self.node(l).w;
            i = if target < wl {
                l
            } else {
                target -= wl;
                r
            };
            self.update_message(i);
        }
        let n = self.node(i);
        let x = n.low + rng.random::<f64>() * n.len();
        Ok(if x < n.high { x } else { n.high.next_down().max(n.low) })
    }
}
