//! Lattice directions, multi-indices and integer boxes.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};

/// Orientation of a lattice step, or the `±` label of a generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Minus => -1,
            Sign::Plus => 1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Plus => '+',
        }
    }

    pub fn from_symbol(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            _ => None,
        }
    }

    pub const BOTH: [Sign; 2] = [Sign::Minus, Sign::Plus];
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// A signed unit direction `±e_j` (axes are zero-based internally).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeStep {
    pub axis: usize,
    pub sign: Sign,
}

impl LatticeStep {
    pub fn new(axis: usize, sign: Sign) -> Self {
        LatticeStep { axis, sign }
    }

    pub fn plus(axis: usize) -> Self {
        LatticeStep::new(axis, Sign::Plus)
    }

    pub fn minus(axis: usize) -> Self {
        LatticeStep::new(axis, Sign::Minus)
    }

    /// The involution `j ↔ j'`.
    pub fn opposite(self) -> Self {
        LatticeStep::new(self.axis, self.sign.flip())
    }

    /// All `2n` steps, minus directions first, each group ascending by axis.
    pub fn all(n: usize) -> Vec<LatticeStep> {
        let mut v: Vec<_> = (0..n).map(LatticeStep::minus).collect();
        v.extend((0..n).map(LatticeStep::plus));
        v
    }
}

/// Printed one-based, e.g. `+1` or `-2`.
impl fmt::Display for LatticeStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.sign, self.axis + 1)
    }
}

/// Mesh width; must be a positive rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mesh(BigRational);

impl Mesh {
    pub fn new(h: BigRational) -> Option<Mesh> {
        h.is_positive().then_some(Mesh(h))
    }

    pub fn unit() -> Mesh {
        Mesh(BigRational::one())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }
}

impl Default for Mesh {
    fn default() -> Self {
        Mesh::unit()
    }
}

impl fmt::Display for Mesh {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Exponent vector of a monomial or factorial power.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, axis: usize) -> Self {
        let mut v = vec![0; n];
        v[axis] = 1;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn raised(&self, axis: usize) -> MultiIndex {
        let mut v = self.clone();
        v.0[axis] += 1;
        v
    }

    /// `α − e_axis`, or `None` when `α_axis = 0`.
    pub fn lowered(&self, axis: usize) -> Option<MultiIndex> {
        let mut v = self.clone();
        v.0[axis] = v.0[axis].checked_sub(1)?;
        Some(v)
    }

    /// Every multi-index of dimension `n` and total degree `d`, in
    /// lexicographically descending order.
    pub fn of_degree(n: usize, d: u32) -> Vec<MultiIndex> {
        fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == n {
                prefix.push(d);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for a in (0..=d).rev() {
                prefix.push(a);
                rec(n, d - a, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            if d == 0 {
                out.push(MultiIndex(vec![]));
            }
            return out;
        }
        rec(n, d, &mut Vec::new(), &mut out);
        out
    }

    /// Every multi-index of total degree at most `d`.
    pub fn up_to_degree(n: usize, d: u32) -> Vec<MultiIndex> {
        (0..=d).flat_map(|k| MultiIndex::of_degree(n, k)).collect()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Inclusive integer interval per axis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntBox {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl IntBox {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Self {
        assert_eq!(lo.len(), hi.len());
        IntBox { lo, hi }
    }

    /// The cube `[lo, hi]^n`.
    pub fn cube(n: usize, lo: i64, hi: i64) -> Self {
        IntBox::new(vec![lo; n], vec![hi; n])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(l, h)| l > h)
    }

    pub fn extent(&self, axis: usize) -> usize {
        (self.hi[axis] - self.lo[axis] + 1).max(0) as usize
    }

    pub fn len(&self) -> usize {
        (0..self.dim()).map(|a| self.extent(a)).product()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        p.iter()
            .enumerate()
            .all(|(a, &x)| self.lo[a] <= x && x <= self.hi[a])
    }

    pub fn contains_box(&self, other: &IntBox) -> bool {
        other.is_empty()
            || (0..self.dim()).all(|a| self.lo[a] <= other.lo[a] && other.hi[a] <= self.hi[a])
    }

    pub fn intersect(&self, other: &IntBox) -> IntBox {
        IntBox::new(
            self.lo.iter().zip(&other.lo).map(|(a, b)| *a.max(b)).collect(),
            self.hi.iter().zip(&other.hi).map(|(a, b)| *a.min(b)).collect(),
        )
    }

    /// Drop one layer at the end of `axis` that a step in direction `sign`
    /// would read past.
    pub fn shrink_toward(&self, step: LatticeStep) -> IntBox {
        let mut b = self.clone();
        match step.sign {
            Sign::Plus => b.hi[step.axis] -= 1,
            Sign::Minus => b.lo[step.axis] += 1,
        }
        b
    }

    /// Row-major offset (last axis fastest) of a point inside the box.
    pub fn offset(&self, p: &[i64]) -> usize {
        let mut off = 0usize;
        for a in 0..self.dim() {
            off = off * self.extent(a) + (p[a] - self.lo[a]) as usize;
        }
        off
    }

    /// Points in row-major order.
    pub fn points(&self) -> BoxPoints<'_> {
        BoxPoints {
            bx: self,
            next: if self.is_empty() || self.dim() == 0 {
                if self.dim() == 0 {
                    Some(vec![])
                } else {
                    None
                }
            } else {
                Some(self.lo.clone())
            },
        }
    }
}

pub struct BoxPoints<'a> {
    bx: &'a IntBox,
    next: Option<Vec<i64>>,
}

impl Iterator for BoxPoints<'_> {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut a = succ.len();
        let mut done = true;
        while a > 0 {
            a -= 1;
            if succ[a] < self.bx.hi[a] {
                succ[a] += 1;
                done = false;
                break;
            }
            succ[a] = self.bx.lo[a];
        }
        if !done {
            self.next = Some(succ);
        }
        Some(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_involution() {
        for s in LatticeStep::all(3) {
            assert_eq!(s.opposite().opposite(), s);
            assert_ne!(s.opposite(), s);
        }
    }

    #[test]
    fn multi_index_degree() {
        assert!(MultiIndex::zero(3).is_zero());
        assert_eq!(MultiIndex::zero(3).degree(), 0);
        let a = MultiIndex(vec![1, 0, 2]);
        assert_eq!(a.degree(), 3);
        assert!(!a.is_zero());
        assert_eq!(a.lowered(1), None);
        assert_eq!(a.lowered(2), Some(MultiIndex(vec![1, 0, 1])));
    }

    #[test]
    fn stars_and_bars() {
        // C(d+n-1, d)
        assert_eq!(MultiIndex::of_degree(2, 1).len(), 2);
        assert_eq!(MultiIndex::of_degree(3, 2).len(), 6);
        assert_eq!(MultiIndex::of_degree(3, 4).len(), 15);
        assert_eq!(MultiIndex::of_degree(1, 5).len(), 1);
    }

    #[test]
    fn box_points_row_major() {
        let b = IntBox::new(vec![0, 1], vec![1, 2]);
        let pts: Vec<_> = b.points().collect();
        assert_eq!(pts, vec![vec![0, 1], vec![0, 2], vec![1, 1], vec![1, 2]]);
        for (k, p) in pts.iter().enumerate() {
            assert_eq!(b.offset(p), k);
        }
        assert_eq!(IntBox::new(vec![0], vec![-1]).points().count(), 0);
    }
}
