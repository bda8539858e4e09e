//! Permutations and the exact group algebra of S_n.
//!
//! Points are 1-based in the public API (`apply`, `from_images`, cycles) and
//! stored 0-based. Products follow function composition: `a.compose(b)` maps
//! `i` to `a(b(i))`, so `b` acts first.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::coeff::{qi, Coeff, Q};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;

/// Largest degree the group algebra machinery accepts (24 points for walled
/// S_n × S_m products is already far beyond desk scale).
pub const MAX_DEGREE: usize = 16;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n as u8).collect(),
        }
    }

    /// One-line notation, 1-based.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n > MAX_DEGREE {
            return Err(Error::SizeGuard(format!("degree {n} > {MAX_DEGREE}")));
        }
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &x in images {
            if x == 0 || x > n {
                return Err(Error::InvalidPermutation(format!("image {x} not in 1..={n}")));
            }
            if seen[x - 1] {
                return Err(Error::InvalidPermutation(format!("image {x} repeated")));
            }
            seen[x - 1] = true;
            out.push((x - 1) as u8);
        }
        Ok(Permutation { images: out })
    }

    pub(crate) fn from_zero_based(images: Vec<u8>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &x)| x as usize == i)
        });
        Permutation { images }
    }

    /// The transposition (a b) of {1..n}.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        for &x in &[a, b] {
            if x == 0 || x > n {
                return Err(Error::IndexOutOfRange { index: x, max: n });
            }
        }
        if a == b {
            return Err(Error::InvalidPermutation("transposition needs a != b".into()));
        }
        let mut p = Self::identity(n);
        p.images.swap(a - 1, b - 1);
        Ok(p)
    }

    /// Builds a permutation from disjoint cycles in 1-based points.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (1..=n).collect();
        let mut touched = vec![false; n + 1];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x == 0 || x > n {
                    return Err(Error::IndexOutOfRange { index: x, max: n });
                }
                if touched[x] {
                    return Err(Error::InvalidPermutation(format!("point {x} in two cycles")));
                }
                touched[x] = true;
                images[x - 1] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::from_images(&images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] as usize + 1
    }

    pub(crate) fn apply0(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    /// 1-based one-line notation.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| x as usize == i)
    }

    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&j| self.images[j as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation { images: inv }
    }

    /// Cycle lengths in non-increasing order (fixed points included).
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut lens = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    /// Number of cycles, fixed points included.
    pub fn cycle_count(&self) -> usize {
        self.cycle_type().len()
    }

    pub fn signature(&self) -> i32 {
        if (self.degree() - self.cycle_count()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Embeds S_k into S_n by fixing k+1..n.
    pub fn embed(&self, n: usize) -> Result<Permutation> {
        if n < self.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: n,
            });
        }
        let mut images = self.images.clone();
        images.extend(self.degree() as u8..n as u8);
        Ok(Permutation { images })
    }

    /// Moves the permutation onto the points `offset+1..offset+k` of S_n.
    pub fn shift(&self, offset: usize, n: usize) -> Result<Permutation> {
        if offset + self.degree() > n {
            return Err(Error::DegreeMismatch {
                left: offset + self.degree(),
                right: n,
            });
        }
        let mut images: Vec<u8> = (0..n as u8).collect();
        for (i, &x) in self.images.iter().enumerate() {
            images[offset + i] = offset as u8 + x;
        }
        Ok(Permutation { images })
    }

    /// True when the permutation maps each of the given blocks onto itself.
    pub fn preserves_blocks(&self, sizes: &[usize]) -> bool {
        let mut start = 0;
        for &s in sizes {
            for i in start..start + s {
                let x = self.images[i] as usize;
                if x < start || x >= start + s {
                    return false;
                }
            }
            start += s;
        }
        true
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut wrote = false;
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                seen[start] = true;
                continue;
            }
            write!(f, "(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", x + 1)?;
                first = false;
                x = self.images[x] as usize;
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// All permutations of {1..n} in lexicographic order of one-line notation.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = (0..n as u8).collect();
    loop {
        out.push(Permutation { images: cur.clone() });
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// The subgroups the conjugation averages and projectors range over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subgroup {
    /// S_n on all points.
    Symmetric(usize),
    /// S_n × S_m acting on {1..n} and {n+1..n+m}.
    Product(usize, usize),
    /// Stabilizer of {{1,2},…,{2p−1,2p}} in S_{2p}.
    Hyperoctahedral(usize),
    /// {σ × σ} inside S_p × S_p.
    Diagonal(usize),
}

impl Subgroup {
    pub fn degree(&self) -> usize {
        match *self {
            Subgroup::Symmetric(n) => n,
            Subgroup::Product(n, m) => n + m,
            Subgroup::Hyperoctahedral(p) | Subgroup::Diagonal(p) => 2 * p,
        }
    }

    pub fn elements(&self) -> Vec<Permutation> {
        match *self {
            Subgroup::Symmetric(n) => all_permutations(n),
            Subgroup::Product(n, m) => {
                let left = all_permutations(n);
                let right = all_permutations(m);
                let mut out = Vec::with_capacity(left.len() * right.len());
                for a in &left {
                    for b in &right {
                        let mut images = a.images.clone();
                        images.extend(b.images.iter().map(|&x| x + n as u8));
                        out.push(Permutation { images });
                    }
                }
                out
            }
            Subgroup::Hyperoctahedral(p) => {
                // permute the p pairs, then flip any subset of them
                let mut out = Vec::new();
                for outer in all_permutations(p) {
                    for flips in 0u32..(1 << p) {
                        let mut images = vec![0u8; 2 * p];
                        for k in 0..p {
                            let target = outer.images[k] as usize;
                            let (lo, hi) = if flips & (1 << k) != 0 { (1, 0) } else { (0, 1) };
                            images[2 * k] = (2 * target + lo) as u8;
                            images[2 * k + 1] = (2 * target + hi) as u8;
                        }
                        out.push(Permutation { images });
                    }
                }
                out.sort();
                out
            }
            Subgroup::Diagonal(p) => all_permutations(p)
                .into_iter()
                .map(|s| {
                    let mut images = s.images.clone();
                    images.extend(s.images.iter().map(|&x| x + p as u8));
                    Permutation { images }
                })
                .collect(),
        }
    }

    pub fn order(&self) -> usize {
        fn fact(n: usize) -> usize {
            (1..=n).product()
        }
        match *self {
            Subgroup::Symmetric(n) => fact(n),
            Subgroup::Product(n, m) => fact(n) * fact(m),
            Subgroup::Hyperoctahedral(p) => (1usize << p) * fact(p),
            Subgroup::Diagonal(p) => fact(p),
        }
    }
}

/// Sparse linear combination of permutations of a fixed degree.
#[derive(Clone, PartialEq)]
pub struct GroupAlgebraElement<C: Coeff = Q> {
    degree: usize,
    terms: BTreeMap<Permutation, C>,
}

impl<C: Coeff> fmt::Debug for GroupAlgebraElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{c:?}·{p}")?;
            first = false;
        }
        Ok(())
    }
}

impl<C: Coeff> GroupAlgebraElement<C> {
    pub fn zero(degree: usize) -> Self {
        GroupAlgebraElement {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(degree: usize) -> Self {
        Self::scalar(degree, C::one())
    }

    pub fn scalar(degree: usize, c: C) -> Self {
        let mut e = Self::zero(degree);
        e.add_term(Permutation::identity(degree), c);
        e
    }

    pub fn from_perm(p: Permutation) -> Self {
        let mut e = Self::zero(p.degree());
        e.add_term(p, C::one());
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (Permutation, C)>>(degree: usize, terms: I) -> Result<Self> {
        let mut e = Self::zero(degree);
        for (p, c) in terms {
            if p.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: p.degree(),
                });
            }
            e.add_term(p, c);
        }
        Ok(e)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Permutation, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, p: &Permutation) -> C {
        self.terms.get(p).cloned().unwrap_or_else(C::zero)
    }

    pub(crate) fn add_term(&mut self, p: Permutation, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(p) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_degree(&self, other: &Self) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_degree(other)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_degree(other)?;
        let mut out = Self::zero(self.degree);
        for (p, a) in &self.terms {
            for (r, b) in &other.terms {
                out.add_term(p.compose_unchecked(r), a.clone() * b.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.degree);
        if c.is_zero() {
            return out;
        }
        for (p, a) in &self.terms {
            out.add_term(p.clone(), a.clone() * c.clone());
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.degree);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// σ ↦ ε(σ)σ, extended linearly.
    pub fn epsilon_twist(&self) -> Self {
        let mut out = Self::zero(self.degree);
        for (p, c) in &self.terms {
            let c = if p.signature() < 0 { -c.clone() } else { c.clone() };
            out.add_term(p.clone(), c);
        }
        out
    }

    /// Linear extension of σ ↦ σ⁻¹.
    pub fn antipode(&self) -> Self {
        let mut out = Self::zero(self.degree);
        for (p, c) in &self.terms {
            out.add_term(p.inverse(), c.clone());
        }
        out
    }

    pub fn embed(&self, n: usize) -> Result<Self> {
        let mut out = Self::zero(n);
        for (p, c) in &self.terms {
            out.add_term(p.embed(n)?, c.clone());
        }
        Ok(out)
    }

    pub fn shift(&self, offset: usize, n: usize) -> Result<Self> {
        let mut out = Self::zero(n);
        for (p, c) in &self.terms {
            out.add_term(p.shift(offset, n)?, c.clone());
        }
        Ok(out)
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> GroupAlgebraElement<D> {
        let mut out = GroupAlgebraElement::zero(self.degree);
        for (p, c) in &self.terms {
            out.add_term(p.clone(), f(c));
        }
        out
    }

    pub fn to_f64(&self) -> GroupAlgebraElement<f64> {
        self.map_coeffs(|c| c.to_f64())
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        (self * other) == (other * self)
    }

    /// Largest coefficient magnitude (as a double).
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }

    /// Sum of coefficient magnitudes, an upper bound for the operator norm
    /// in any unitary representation.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|c| c.to_f64().abs()).sum()
    }
}

impl GroupAlgebraElement<Q> {
    /// Two-sided inverse, or `NotInvertible`.
    ///
    /// Solves `self · x = 1` in the left regular representation by exact
    /// elimination; in a finite-dimensional algebra a right inverse is
    /// two-sided.
    pub fn inverse(&self) -> Result<Self> {
        let basis = all_permutations(self.degree);
        let index: HashMap<&Permutation, usize> = basis.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let size = basis.len();
        let mut m = QMatrix::zeros(size, size);
        for (col, g) in basis.iter().enumerate() {
            for (p, c) in &self.terms {
                let row = index[&p.compose_unchecked(g)];
                m[(row, col)] += c;
            }
        }
        let mut rhs = vec![Q::zero(); size];
        rhs[index[&Permutation::identity(self.degree)]] = Q::one();
        let x = m.solve(&rhs).ok_or(Error::NotInvertible)?;
        let mut out = Self::zero(self.degree);
        for (g, c) in basis.into_iter().zip(x) {
            out.add_term(g, c);
        }
        Ok(out)
    }
}

impl<C: Coeff> Add for &GroupAlgebraElement<C> {
    type Output = GroupAlgebraElement<C>;
    fn add(self, rhs: Self) -> Self::Output {
        self.try_add(rhs).expect("group algebra degree mismatch")
    }
}

impl<C: Coeff> Sub for &GroupAlgebraElement<C> {
    type Output = GroupAlgebraElement<C>;
    fn sub(self, rhs: Self) -> Self::Output {
        self.try_add(&-rhs).expect("group algebra degree mismatch")
    }
}

impl<C: Coeff> Neg for &GroupAlgebraElement<C> {
    type Output = GroupAlgebraElement<C>;
    fn neg(self) -> Self::Output {
        self.scale(&-C::one())
    }
}

impl<C: Coeff> Mul for &GroupAlgebraElement<C> {
    type Output = GroupAlgebraElement<C>;
    fn mul(self, rhs: Self) -> Self::Output {
        self.try_mul(rhs).expect("group algebra degree mismatch")
    }
}

/// Jucys–Murphy element X_i = (1 i) + … + (i−1 i); X_1 = 0.
pub fn jucys_murphy(i: usize, n: usize) -> Result<GroupAlgebraElement> {
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, max: n });
    }
    let mut x = GroupAlgebraElement::zero(n);
    for j in 1..i {
        x.add_term(Permutation::transposition(n, j, i)?, Q::one());
    }
    Ok(x)
}

/// Averaging idempotent (1/|K|) Σ_{k∈K} k of a subgroup.
pub fn subgroup_projector(group: &Subgroup) -> GroupAlgebraElement {
    let w = Q::new(1.into(), (group.order() as i64).into());
    let mut out = GroupAlgebraElement::zero(group.degree());
    for g in group.elements() {
        out.add_term(g, w.clone());
    }
    out
}

/// 𝒫_{H_p} = (1/2^p p!) Σ_{h∈H_p} h in ℂ[S_{2p}].
pub fn hyperoctahedral_projector(p: usize) -> GroupAlgebraElement {
    subgroup_projector(&Subgroup::Hyperoctahedral(p))
}

/// ε_l = Σ_{σ∈S_l} ε(σ)σ, embedded in S_n.
pub fn signature_element(l: usize, n: usize) -> Result<GroupAlgebraElement> {
    let mut out = GroupAlgebraElement::zero(n);
    for s in all_permutations(l) {
        let c = qi(s.signature() as i64);
        out.add_term(s.embed(n)?, c);
    }
    Ok(out)
}

/// Objects S_n acts on by conjugation (relabelling points).
pub trait Conjugate: Sized {
    fn degree(&self) -> usize;
    /// σ · self · σ⁻¹.
    fn conjugate_by(&self, sigma: &Permutation) -> Self;
    fn zero_like(&self) -> Self;
    fn add_assign_scaled(&mut self, other: &Self, c: &Q);
}

impl<C: Coeff> Conjugate for GroupAlgebraElement<C> {
    fn degree(&self) -> usize {
        self.degree
    }

    fn conjugate_by(&self, sigma: &Permutation) -> Self {
        let inv = sigma.inverse();
        let mut out = Self::zero(self.degree);
        for (p, c) in &self.terms {
            out.add_term(sigma.compose_unchecked(&p.compose_unchecked(&inv)), c.clone());
        }
        out
    }

    fn zero_like(&self) -> Self {
        Self::zero(self.degree)
    }

    fn add_assign_scaled(&mut self, other: &Self, c: &Q) {
        let c = C::from_q(c);
        for (p, a) in &other.terms {
            self.add_term(p.clone(), a.clone() * c.clone());
        }
    }
}

/// normalizer · Σ_{σ∈K} σ a σ⁻¹.
pub fn conjugation_average<T: Conjugate>(a: &T, group: &Subgroup, normalizer: &Q) -> Result<T> {
    if a.degree() != group.degree() {
        return Err(Error::DegreeMismatch {
            left: a.degree(),
            right: group.degree(),
        });
    }
    let mut out = a.zero_like();
    for g in group.elements() {
        out.add_assign_scaled(&a.conjugate_by(&g), normalizer);
    }
    Ok(out)
}
