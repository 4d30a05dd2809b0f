//! The universal differential algebra on the torus `ℤ_N^n`.
//!
//! An r-form is a finite combination of simplicial paths
//! `b_{m⁰,…,mʳ}` with no two consecutive nodes equal. The product
//! concatenates paths that share an endpoint, and `d` inserts a node at
//! every position with alternating sign.
//!
//! Under the symmetric lattice reduction only nearest-neighbour steps
//! survive. The reduced algebra is realized as a true quotient: a path is
//! first projected to zero if any of its steps is not a unit step `±e_j`,
//! and then brought to canonical form by sorting its step sequence
//! (minus steps ascending by axis, then plus steps) with the parity sign
//! of the sort; a repeated step sends the path to zero. This is exactly the
//! statement that the `Θ^{v_j}` anticommute and square to zero, so the
//! reduced algebra has the shape of an exterior algebra on `2n`
//! generators over the functions. Projection alone is not an ideal
//! quotient and breaks `d² = 0`.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::lattice::{LatticeStep, Sign};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum UniversalError {
    #[error("torus needs n >= 1 and N >= 2 (got n={n}, N={modulus})")]
    BadTorus { n: usize, modulus: usize },
    #[error("the symmetric reduction needs N >= 3 (got N={0})")]
    ModulusTooSmall(usize),
    #[error("forms live on different tori")]
    TorusMismatch,
    #[error("forms carry different reductions")]
    ReductionMismatch,
    #[error("Θ needs a non-zero direction")]
    ZeroDirection,
    #[error("direction {0:?} is not an allowed step of the reduction")]
    DirectionNotAllowed(Vec<i64>),
    #[error("expected a homogeneous form")]
    NotHomogeneous,
}

/// The group `ℤ_N^n`. Nodes are encoded row-major as `u32` indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Torus {
    n: usize,
    modulus: usize,
}

pub type Node = u32;

impl Torus {
    pub fn new(n: usize, modulus: usize) -> Result<Torus, UniversalError> {
        if n == 0 || modulus < 2 {
            return Err(UniversalError::BadTorus { n, modulus });
        }
        Ok(Torus { n, modulus })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn node_count(&self) -> usize {
        self.modulus.pow(self.n as u32)
    }

    pub fn nodes(&self) -> impl Iterator<Item = Node> {
        0..self.node_count() as Node
    }

    pub fn coords(&self, node: Node) -> Vec<i64> {
        let mut rest = node as usize;
        let mut c = vec![0i64; self.n];
        for a in (0..self.n).rev() {
            c[a] = (rest % self.modulus) as i64;
            rest /= self.modulus;
        }
        c
    }

    pub fn node(&self, coords: &[i64]) -> Node {
        let m = self.modulus as i64;
        coords
            .iter()
            .fold(0i64, |acc, &x| acc * m + x.rem_euclid(m)) as Node
    }

    pub fn add(&self, a: Node, disp: &[i64]) -> Node {
        let c: Vec<i64> = self.coords(a).iter().zip(disp).map(|(x, d)| x + d).collect();
        self.node(&c)
    }

    pub fn step(&self, a: Node, s: LatticeStep) -> Node {
        let mut c = self.coords(a);
        c[s.axis] += s.sign.as_i64();
        self.node(&c)
    }

    /// Displacement `b − a`, each component reduced into `[0, N)`.
    fn difference(&self, a: Node, b: Node) -> Vec<i64> {
        let m = self.modulus as i64;
        self.coords(a)
            .iter()
            .zip(self.coords(b))
            .map(|(x, y)| (y - x).rem_euclid(m))
            .collect()
    }

    /// The unit step `s` with `b = a + s`, if there is one.
    pub fn step_between(&self, a: Node, b: Node) -> Option<LatticeStep> {
        let d = self.difference(a, b);
        let m = self.modulus as i64;
        let mut found = None;
        for (axis, &x) in d.iter().enumerate() {
            if x == 0 {
                continue;
            }
            if found.is_some() {
                return None;
            }
            found = if x == 1 {
                Some(LatticeStep::plus(axis))
            } else if x == m - 1 {
                Some(LatticeStep::minus(axis))
            } else {
                return None;
            };
        }
        found
    }

    pub fn unit_disp(&self, s: LatticeStep) -> Vec<i64> {
        let mut v = vec![0; self.n];
        v[s.axis] = s.sign.as_i64();
        v
    }
}

/// The symmetric lattice reduction: allowed steps `±e_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Reduction {
    steps: Vec<LatticeStep>,
}

impl Reduction {
    pub fn symmetric(torus: &Torus) -> Result<Reduction, UniversalError> {
        if torus.modulus < 3 {
            return Err(UniversalError::ModulusTooSmall(torus.modulus));
        }
        Ok(Reduction {
            steps: LatticeStep::all(torus.n),
        })
    }

    pub fn steps(&self) -> &[LatticeStep] {
        &self.steps
    }
}

/// Canonical position of a step: minus steps first, each group by axis.
fn step_key(s: LatticeStep) -> (Sign, usize) {
    (s.sign, s.axis)
}

/// An element of the (possibly reduced) universal algebra.
#[derive(Clone, PartialEq, Eq)]
pub struct UForm {
    torus: Torus,
    reduction: Option<Reduction>,
    terms: BTreeMap<Vec<Node>, Scalar>,
}

impl fmt::Debug for UForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, c)| {
                let nodes: Vec<String> = p
                    .iter()
                    .map(|&m| format!("{:?}", self.torus.coords(m)))
                    .collect();
                format!("({c}) b[{}]", nodes.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl UForm {
    pub fn zero(torus: &Torus, reduction: Option<&Reduction>) -> UForm {
        UForm {
            torus: torus.clone(),
            reduction: reduction.cloned(),
            terms: BTreeMap::new(),
        }
    }

    pub fn torus(&self) -> &Torus {
        &self.torus
    }

    pub fn reduction(&self) -> Option<&Reduction> {
        self.reduction.as_ref()
    }

    pub fn terms(&self) -> &BTreeMap<Vec<Node>, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, path: &[Node]) -> Scalar {
        self.terms.get(path).cloned().unwrap_or_default()
    }

    /// Degree of a non-zero homogeneous form.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|p| p.len() - 1);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Bring a path to its representative in the carrier: `None` when it
    /// vanishes, otherwise the sign and canonical path.
    fn normalize(&self, path: &[Node]) -> Option<(bool, Vec<Node>)> {
        if path.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        let Some(red) = &self.reduction else {
            return Some((false, path.to_vec()));
        };
        let mut steps = Vec::with_capacity(path.len().saturating_sub(1));
        for w in path.windows(2) {
            let s = self.torus.step_between(w[0], w[1])?;
            if !red.steps.contains(&s) {
                return None;
            }
            steps.push(s);
        }
        let mut odd = false;
        for i in 1..steps.len() {
            let mut k = i;
            while k > 0 && step_key(steps[k - 1]) > step_key(steps[k]) {
                steps.swap(k - 1, k);
                odd = !odd;
                k -= 1;
            }
        }
        if steps.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        let mut out = Vec::with_capacity(path.len());
        let mut cur = path[0];
        out.push(cur);
        for s in steps {
            cur = self.torus.step(cur, s);
            out.push(cur);
        }
        Some((odd, out))
    }

    fn accumulate(&mut self, path: &[Node], c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let Some((odd, p)) = self.normalize(path) else {
            return;
        };
        let entry = self.terms.entry(p.clone()).or_default();
        if odd {
            *entry -= c;
        } else {
            *entry += c;
        }
        if entry.is_zero() {
            self.terms.remove(&p);
        }
    }

    /// The basis form `b_{m⁰,…,mʳ}` (zero for degenerate paths).
    pub fn path(torus: &Torus, reduction: Option<&Reduction>, nodes: &[Node]) -> UForm {
        assert!(!nodes.is_empty(), "a path has at least one node");
        let mut f = UForm::zero(torus, reduction);
        f.accumulate(nodes, &Scalar::one());
        f
    }

    /// The 0-form `Σ_l f_l b_l`.
    pub fn function(torus: &Torus, reduction: Option<&Reduction>, values: &[Scalar]) -> UForm {
        assert_eq!(values.len(), torus.node_count());
        let mut f = UForm::zero(torus, reduction);
        for (l, v) in values.iter().enumerate() {
            f.accumulate(&[l as Node], v);
        }
        f
    }

    /// `Σ_l b_l`.
    pub fn unit(torus: &Torus, reduction: Option<&Reduction>) -> UForm {
        UForm::function(torus, reduction, &vec![Scalar::one(); torus.node_count()])
    }

    fn compatible(&self, other: &UForm) -> Result<(), UniversalError> {
        if self.torus != other.torus {
            return Err(UniversalError::TorusMismatch);
        }
        if self.reduction != other.reduction {
            return Err(UniversalError::ReductionMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &UForm) -> Result<UForm, UniversalError> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.accumulate(p, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &UForm) -> Result<UForm, UniversalError> {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> UForm {
        let mut out = UForm::zero(&self.torus, self.reduction.as_ref());
        if s.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(p, c)| (p.clone(), c * s)).collect();
        out
    }

    /// Concatenation product `b_{…,p} b_{q,…} = δ_{pq} b_{…,p,…}`.
    pub fn mul(&self, other: &UForm) -> Result<UForm, UniversalError> {
        self.compatible(other)?;
        let mut by_start: BTreeMap<Node, Vec<(&Vec<Node>, &Scalar)>> = BTreeMap::new();
        for (q, b) in &other.terms {
            by_start.entry(q[0]).or_default().push((q, b));
        }
        let mut out = UForm::zero(&self.torus, self.reduction.as_ref());
        let mut buf = Vec::new();
        for (p, a) in &self.terms {
            let Some(list) = by_start.get(p.last().unwrap()) else {
                continue;
            };
            for (q, b) in list {
                buf.clear();
                buf.extend_from_slice(p);
                buf.extend_from_slice(&q[1..]);
                out.accumulate(&buf, &(a * *b));
            }
        }
        Ok(out)
    }

    /// `d b_{m⁰…mʳ} = Σ_l Σ_{s=0}^{r+1} (−1)^s b_{m⁰…m^{s−1}, l, m^s…mʳ}`.
    ///
    /// The insertion position runs over all `r + 2` slots; the two end
    /// slots are what make `d b_m = Σ_l (b_{l,m} − b_{m,l})`.
    pub fn deriv(&self) -> UForm {
        let mut out = UForm::zero(&self.torus, self.reduction.as_ref());
        let mut buf = Vec::new();
        for (p, c) in &self.terms {
            let neg = -c;
            for s in 0..=p.len() {
                let coeff = if s % 2 == 0 { c } else { &neg };
                for l in self.torus.nodes() {
                    buf.clear();
                    buf.extend_from_slice(&p[..s]);
                    buf.push(l);
                    buf.extend_from_slice(&p[s..]);
                    out.accumulate(&buf, coeff);
                }
            }
        }
        out
    }

    /// Translate every node by `disp`.
    pub fn translate(&self, disp: &[i64]) -> UForm {
        let mut out = UForm::zero(&self.torus, self.reduction.as_ref());
        for (p, c) in &self.terms {
            let q: Vec<Node> = p.iter().map(|&m| self.torus.add(m, disp)).collect();
            out.accumulate(&q, c);
        }
        out
    }

    /// `Θ^l = Σ_m b_{m, m+l}`.
    pub fn theta(
        torus: &Torus,
        reduction: Option<&Reduction>,
        dir: &[i64],
    ) -> Result<UForm, UniversalError> {
        assert_eq!(dir.len(), torus.n);
        if torus.node(dir) == 0 {
            return Err(UniversalError::ZeroDirection);
        }
        if let Some(red) = reduction {
            let allowed = red.steps.iter().any(|&s| torus.node(&torus.unit_disp(s)) == torus.node(dir));
            if !allowed {
                return Err(UniversalError::DirectionNotAllowed(dir.to_vec()));
            }
        }
        let mut f = UForm::zero(torus, reduction);
        for m in torus.nodes() {
            f.accumulate(&[m, torus.add(m, dir)], &Scalar::one());
        }
        Ok(f)
    }

    pub fn theta_step(torus: &Torus, reduction: Option<&Reduction>, s: LatticeStep) -> UForm {
        UForm::theta(torus, reduction, &torus.unit_disp(s)).expect("unit steps are allowed")
    }

    /// `G`: the sum of all allowed `Θ` (all non-zero directions when unreduced).
    pub fn adjacency(torus: &Torus, reduction: Option<&Reduction>) -> UForm {
        let mut g = UForm::zero(torus, reduction);
        match reduction {
            Some(red) => {
                for &s in &red.steps {
                    g = g.add(&UForm::theta_step(torus, reduction, s)).unwrap();
                }
            }
            None => {
                for l in torus.nodes().skip(1) {
                    let t = UForm::theta(torus, None, &torus.coords(l)).unwrap();
                    g = g.add(&t).unwrap();
                }
            }
        }
        g
    }

    /// `G^r` by repeated products.
    pub fn g_power(torus: &Torus, reduction: Option<&Reduction>, r: usize) -> UForm {
        assert!(r >= 1);
        let g = UForm::adjacency(torus, reduction);
        let mut acc = g.clone();
        for _ in 1..r {
            acc = acc.mul(&g).unwrap();
        }
        acc
    }

    pub fn commutator(&self, other: &UForm) -> Result<UForm, UniversalError> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn anticommutator(&self, other: &UForm) -> Result<UForm, UniversalError> {
        self.mul(other)?.add(&other.mul(self)?)
    }

    /// Residual `dω − (Gω − (−1)^r ωG)` for a homogeneous r-form.
    pub fn theorem32_residual(&self) -> Result<UForm, UniversalError> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let r = self.degree().ok_or(UniversalError::NotHomogeneous)?;
        let g = UForm::adjacency(&self.torus, self.reduction.as_ref());
        let gw = g.mul(self)?;
        let wg = self.mul(&g)?;
        let rhs = if r % 2 == 0 { gw.sub(&wg)? } else { gw.add(&wg)? };
        self.deriv().sub(&rhs)
    }

    /// Every canonical basis path of the given degree.
    pub fn basis(torus: &Torus, reduction: Option<&Reduction>, degree: usize) -> Vec<UForm> {
        let mut out = Vec::new();
        let z = UForm::zero(torus, reduction);
        let mut stack: Vec<Vec<Node>> = torus.nodes().map(|m| vec![m]).collect();
        while let Some(p) = stack.pop() {
            if p.len() == degree + 1 {
                if let Some((false, q)) = z.normalize(&p) {
                    if q == p {
                        out.push(UForm::path(torus, reduction, &p));
                    }
                }
                continue;
            }
            let last = *p.last().unwrap();
            let nexts: Vec<Node> = match reduction {
                Some(red) => red.steps.iter().map(|&s| torus.step(last, s)).collect(),
                None => torus.nodes().filter(|&l| l != last).collect(),
            };
            for l in nexts {
                let mut q = p.clone();
                q.push(l);
                stack.push(q);
            }
        }
        out.sort_by(|a, b| a.terms.keys().cmp(b.terms.keys()));
        out
    }

    /// A random form of the given degree with up to `terms` basis paths and
    /// small rational coefficients.
    pub fn random<R: Rng>(
        torus: &Torus,
        reduction: Option<&Reduction>,
        degree: usize,
        terms: usize,
        rng: &mut R,
    ) -> UForm {
        let mut f = UForm::zero(torus, reduction);
        for _ in 0..terms {
            let mut p = vec![rng.gen_range(0..torus.node_count()) as Node];
            for _ in 0..degree {
                let last = *p.last().unwrap();
                let next = match reduction {
                    Some(red) => torus.step(last, red.steps[rng.gen_range(0..red.steps.len())]),
                    None => rng.gen_range(0..torus.node_count()) as Node,
                };
                p.push(next);
            }
            f.accumulate(&p, &random_scalar(rng));
        }
        f
    }
}

/// Small non-zero complex rational with numerators in `[-3, 3]` and
/// denominators in `[1, 3]`.
pub fn random_scalar<R: Rng>(rng: &mut R) -> Scalar {
    loop {
        let re = Scalar::ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3));
        let im = if rng.gen_bool(0.3) {
            Scalar::ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3)) * Scalar::i()
        } else {
            Scalar::zero()
        };
        let s = re + im;
        if !s.is_zero() {
            return s;
        }
    }
}

/// For every allowed edge `(m, p)`, no 2-path `m → l → p` survives the
/// reduction. Fails on `ℤ_3`, where `e + e = −e` closes triangles.
pub fn no_intermediate_edges(torus: &Torus, reduction: &Reduction) -> bool {
    torus.nodes().collect::<Vec<_>>().par_iter().all(|&m| {
        reduction.steps.iter().all(|&s| {
            let p = torus.step(m, s);
            torus.nodes().all(|l| {
                let a = torus.step_between(m, l);
                let b = torus.step_between(l, p);
                !(a.is_some() && b.is_some())
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize, m: usize) -> Torus {
        Torus::new(n, m).unwrap()
    }

    #[test]
    fn degenerate_path_vanishes() {
        let t = z(1, 3);
        assert!(UForm::path(&t, None, &[1, 1]).is_zero());
        let b = UForm::path(&t, None, &[0, 1, 0]);
        assert_eq!(b.coefficient(&[0, 1, 0]), Scalar::one());
        assert_eq!(UForm::path(&t, None, &[2]).degree(), Some(0));
    }

    #[test]
    fn product_examples() {
        let t = z(1, 3);
        let p = |v: &[Node]| UForm::path(&t, None, v);
        assert_eq!(p(&[0, 1]).mul(&p(&[1, 2])).unwrap(), p(&[0, 1, 2]));
        assert!(p(&[0, 1]).mul(&p(&[2, 0])).unwrap().is_zero());
        assert_eq!(p(&[0]).mul(&p(&[0])).unwrap(), p(&[0]));
    }

    #[test]
    fn deriv_of_delta_on_two_points() {
        // expand the insertion sum by hand: l = 1 at s = 0 and s = 1
        let t = z(1, 2);
        let d = UForm::path(&t, None, &[0]).deriv();
        let expect = UForm::path(&t, None, &[1, 0])
            .sub(&UForm::path(&t, None, &[0, 1]))
            .unwrap();
        assert_eq!(d, expect);
    }

    #[test]
    fn theta_on_z3() {
        let t = z(1, 3);
        let th = UForm::theta(&t, None, &[1]).unwrap();
        let mut expect = UForm::zero(&t, None);
        for p in [[0, 1], [1, 2], [2, 0]] {
            expect = expect.add(&UForm::path(&t, None, &p)).unwrap();
        }
        assert_eq!(th, expect);
        assert_eq!(UForm::theta(&t, None, &[3]), Err(UniversalError::ZeroDirection));
    }

    #[test]
    fn adjacency_count() {
        let t = z(1, 4);
        let red = Reduction::symmetric(&t).unwrap();
        let g = UForm::adjacency(&t, Some(&red));
        assert_eq!(g.terms().len(), 8);
        assert!(g.terms().values().all(Scalar::is_one));
    }

    #[test]
    fn reduction_needs_three() {
        assert_eq!(
            Reduction::symmetric(&z(1, 2)),
            Err(UniversalError::ModulusTooSmall(2))
        );
    }

    #[test]
    fn opposite_edges_symmetrized() {
        let t = z(1, 5);
        let red = Reduction::symmetric(&t).unwrap();
        let up = UForm::path(&t, Some(&red), &[0, 1, 0]);
        let down = UForm::path(&t, Some(&red), &[0, 4, 0]);
        assert!(up.add(&down).unwrap().is_zero());
        assert!(!up.is_zero());
    }

    #[test]
    fn triangles_only_on_z3() {
        for (m, expect) in [(3, false), (4, true), (5, true)] {
            let t = z(1, m);
            let red = Reduction::symmetric(&t).unwrap();
            assert_eq!(no_intermediate_edges(&t, &red), expect, "N = {m}");
        }
        let t = z(2, 4);
        assert!(no_intermediate_edges(&t, &Reduction::symmetric(&t).unwrap()));
    }

    #[test]
    fn basis_counts() {
        // reduced: N^n nodes times C(2n, r) step subsets
        let t = z(2, 4);
        let red = Reduction::symmetric(&t).unwrap();
        assert_eq!(UForm::basis(&t, Some(&red), 1).len(), 16 * 4);
        assert_eq!(UForm::basis(&t, Some(&red), 2).len(), 16 * 6);
        assert_eq!(UForm::basis(&t, Some(&red), 4).len(), 16);
        let t = z(1, 3);
        assert_eq!(UForm::basis(&t, None, 2).len(), 3 * 2 * 2);
    }
}
