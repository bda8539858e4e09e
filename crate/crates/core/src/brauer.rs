//! Brauer diagrams, the Brauer algebra B_n(z) and its walled subalgebra.
//!
//! A diagram of degree n is a perfect matching of 2n points. Points 1..n are
//! the inputs (tensor columns), n+1..2n the outputs (rows); the identity
//! pairs k with k+n. The product `a * b` applies `b` first, so that
//! ρ(a·b) = ρ(a)ρ(b), and every closed loop contributes a factor z.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::coeff::{q_pow, qi, Coeff, Q};
use crate::error::{Error, Result};
use crate::perm::{Conjugate, GroupAlgebraElement, Permutation};

/// Largest degree accepted for B_n (16 points).
pub const MAX_BRAUER_DEGREE: usize = 8;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BrauerDiagram {
    degree: usize,
    matching: Vec<u8>,
}

fn guard(n: usize) -> Result<()> {
    if n > MAX_BRAUER_DEGREE {
        return Err(Error::SizeGuard(format!(
            "Brauer degree {n} exceeds {MAX_BRAUER_DEGREE}"
        )));
    }
    Ok(())
}

impl BrauerDiagram {
    /// Builds a diagram from 1-based pairs covering {1..2n} exactly once.
    pub fn new(degree: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        guard(degree)?;
        let size = 2 * degree;
        let mut matching = vec![u8::MAX; size];
        for &(a, b) in pairs {
            for x in [a, b] {
                if x == 0 || x > size {
                    return Err(Error::IndexOutOfRange { index: x, max: size });
                }
            }
            if a == b || matching[a - 1] != u8::MAX || matching[b - 1] != u8::MAX {
                return Err(Error::InvalidPairing(format!("bad pair ({a}, {b})")));
            }
            matching[a - 1] = (b - 1) as u8;
            matching[b - 1] = (a - 1) as u8;
        }
        if matching.contains(&u8::MAX) {
            return Err(Error::InvalidPairing("pairs do not cover every point".into()));
        }
        Ok(BrauerDiagram { degree, matching })
    }

    pub(crate) fn from_matching(degree: usize, matching: Vec<u8>) -> Self {
        debug_assert_eq!(matching.len(), 2 * degree);
        debug_assert!(matching.iter().enumerate().all(|(i, &j)| matching[j as usize] as usize == i && j as usize != i));
        BrauerDiagram { degree, matching }
    }

    pub fn identity(degree: usize) -> Self {
        let n = degree as u8;
        let matching = (0..n).map(|k| k + n).chain(0..n).collect();
        BrauerDiagram { degree, matching }
    }

    /// The diagram {k, σ(k)+n}.
    pub fn from_permutation(sigma: &Permutation) -> Self {
        let n = sigma.degree();
        let mut matching = vec![0u8; 2 * n];
        for k in 0..n {
            let out = n + sigma.apply0(k);
            matching[k] = out as u8;
            matching[out] = k as u8;
        }
        BrauerDiagram { degree: n, matching }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Partner of the 1-based point `i`.
    pub fn partner(&self, i: usize) -> usize {
        self.matching[i - 1] as usize + 1
    }


    /// Sorted 1-based pairs (a < b).
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.matching
            .iter()
            .enumerate()
            .filter(|&(i, &j)| i < j as usize)
            .map(|(i, &j)| (i + 1, j as usize + 1))
            .collect()
    }

    pub fn is_permutation(&self) -> bool {
        (0..self.degree).all(|k| self.matching[k] as usize >= self.degree)
    }

    pub fn to_permutation(&self) -> Option<Permutation> {
        if !self.is_permutation() {
            return None;
        }
        let n = self.degree;
        Some(Permutation::from_zero_based(
            (0..n).map(|k| (self.matching[k] as usize - n) as u8).collect(),
        ))
    }

    /// Number of input caps (equivalently output cups).
    pub fn contraction_count(&self) -> usize {
        (0..self.degree).filter(|&k| (self.matching[k] as usize) < self.degree).count() / 2
    }

    /// Composite diagram and loop count of `self · other` (`other` first).
    pub fn multiply(&self, other: &BrauerDiagram) -> Result<(BrauerDiagram, u32)> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        Ok(self.multiply_unchecked(other))
    }

    pub(crate) fn multiply_unchecked(&self, other: &BrauerDiagram) -> (BrauerDiagram, u32) {
        let n = self.degree;
        let (a, b) = (&self.matching, &other.matching);
        let mut out = vec![0u8; 2 * n];
        let mut visited = vec![false; n];
        // Walk from a free end. Free ends: b's inputs (result label k) and
        // a's outputs (result label n+k). Middle point m is b's output n+m
        // glued to a's input m.
        let walk = |start: usize, visited: &mut Vec<bool>| -> usize {
            // start is a result label
            let (mut on_b, mut p) = if start < n { (true, start) } else { (false, start) };
            loop {
                if on_b {
                    let q = b[p] as usize;
                    if q < n {
                        return q;
                    }
                    let m = q - n;
                    visited[m] = true;
                    on_b = false;
                    p = m;
                } else {
                    let q = a[p] as usize;
                    if q >= n {
                        return q;
                    }
                    visited[q] = true;
                    on_b = true;
                    p = n + q;
                }
            }
        };
        for start in 0..2 * n {
            let end = walk(start, &mut visited);
            out[start] = end as u8;
        }
        let mut loops = 0;
        for m in 0..n {
            if visited[m] {
                continue;
            }
            loops += 1;
            // follow the closed loop through the middle row
            let mut cur = m;
            loop {
                visited[cur] = true;
                let up = a[cur] as usize; // a's input partner, also in the middle
                visited[up] = true;
                let down = b[n + up] as usize - n;
                if down == m {
                    break;
                }
                cur = down;
            }
        }
        (BrauerDiagram::from_matching(n, out), loops)
    }

    /// σ·d·σ⁻¹: relabel inputs and outputs by σ.
    pub fn conjugate_by(&self, sigma: &Permutation) -> BrauerDiagram {
        let n = self.degree;
        let map = |x: usize| if x < n { sigma.apply0(x) } else { n + sigma.apply0(x - n) };
        let mut out = vec![0u8; 2 * n];
        for x in 0..2 * n {
            out[map(x)] = map(self.matching[x] as usize) as u8;
        }
        BrauerDiagram { degree: n, matching: out }
    }

    /// Membership in ℳ(n, m): a block inside one row joins a V slot with a
    /// V̄ slot; a block between the rows stays on one side of the wall.
    pub fn is_walled(&self, n: usize, m: usize) -> bool {
        if n + m != self.degree {
            return false;
        }
        let d = self.degree;
        let is_v = |x: usize| (x % d) < n;
        self.matching.iter().enumerate().all(|(x, &y)| {
            let y = y as usize;
            let same_row = (x < d) == (y < d);
            if same_row {
                is_v(x) != is_v(y)
            } else {
                is_v(x) == is_v(y)
            }
        })
    }

    /// The set A (1-based): output points paired among themselves, shifted
    /// to input labels.
    pub fn classify_ma(&self) -> Vec<usize> {
        let n = self.degree;
        (0..n).filter(|&k| (self.matching[n + k] as usize) >= n).map(|k| k + 1).collect()
    }
}

impl fmt::Debug for BrauerDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (a, b)) in self.pairs().into_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{{a},{b}}}")?;
        }
        write!(f, "}}")
    }
}

/// Every perfect matching of 2n points.
pub fn all_diagrams(n: usize) -> Result<Vec<BrauerDiagram>> {
    guard(n)?;
    fn rec(m: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        let Some(first) = m.iter().position(|&x| x == u8::MAX) else {
            out.push(m.clone());
            return;
        };
        for j in first + 1..m.len() {
            if m[j] != u8::MAX {
                continue;
            }
            m[first] = j as u8;
            m[j] = first as u8;
            rec(m, out);
            m[first] = u8::MAX;
            m[j] = u8::MAX;
        }
    }
    let mut raw = Vec::new();
    rec(&mut vec![u8::MAX; 2 * n], &mut raw);
    Ok(raw.into_iter().map(|m| BrauerDiagram::from_matching(n, m)).collect())
}

/// All diagrams of ℳ(n, m).
pub fn all_walled_diagrams(n: usize, m: usize) -> Result<Vec<BrauerDiagram>> {
    Ok(all_diagrams(n + m)?.into_iter().filter(|d| d.is_walled(n, m)).collect())
}

fn check_pair(n: usize, a: usize, b: usize) -> Result<(usize, usize)> {
    for x in [a, b] {
        if x == 0 || x > n {
            return Err(Error::IndexOutOfRange { index: x, max: n });
        }
    }
    if a == b {
        return Err(Error::InvalidPairing(format!("generator needs a != b, got {a}")));
    }
    Ok((a.min(b), a.max(b)))
}

/// τ_{a,b} = {{a,b},{a+n,b+n}} ∪ {{k,k+n}}; symmetric in a, b.
pub fn tau(n: usize, a: usize, b: usize) -> Result<BrauerDiagram> {
    guard(n)?;
    let (a, b) = check_pair(n, a, b)?;
    let mut d = BrauerDiagram::identity(n);
    let (a, b) = (a - 1, b - 1);
    d.matching[a] = b as u8;
    d.matching[b] = a as u8;
    d.matching[n + a] = (n + b) as u8;
    d.matching[n + b] = (n + a) as u8;
    Ok(d)
}

/// s_{a,b} = {{a,b+n},{b,a+n}} ∪ {{k,k+n}}.
pub fn s(n: usize, a: usize, b: usize) -> Result<BrauerDiagram> {
    guard(n)?;
    let (a, b) = check_pair(n, a, b)?;
    Ok(BrauerDiagram::from_permutation(&Permutation::transposition(n, a, b)?))
}

pub fn generators(n: usize, a: usize, b: usize) -> Result<(BrauerDiagram, BrauerDiagram)> {
    Ok((tau(n, a, b)?, s(n, a, b)?))
}

/// Sparse linear combination of diagrams of one degree at a fixed z.
#[derive(Clone, PartialEq)]
pub struct BrauerElement<C: Coeff = Q> {
    degree: usize,
    z: Q,
    terms: BTreeMap<BrauerDiagram, C>,
}

impl<C: Coeff> fmt::Debug for BrauerElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (d, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c:?}·{d:?}")?;
        }
        Ok(())
    }
}

impl<C: Coeff> BrauerElement<C> {
    pub fn zero(degree: usize, z: Q) -> Self {
        BrauerElement {
            degree,
            z,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(degree: usize, z: Q) -> Self {
        Self::scalar(degree, z, C::one())
    }

    pub fn scalar(degree: usize, z: Q, c: C) -> Self {
        let mut e = Self::zero(degree, z);
        e.add_term(BrauerDiagram::identity(degree), c);
        e
    }

    pub fn from_diagram(d: BrauerDiagram, z: Q) -> Self {
        let mut e = Self::zero(d.degree(), z);
        e.add_term(d, C::one());
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (BrauerDiagram, C)>>(degree: usize, z: Q, terms: I) -> Result<Self> {
        let mut e = Self::zero(degree, z);
        for (d, c) in terms {
            if d.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: d.degree(),
                });
            }
            e.add_term(d, c);
        }
        Ok(e)
    }

    /// Image of a group algebra element under σ ↦ its permutation diagram.
    pub fn from_group_element(a: &GroupAlgebraElement<C>, z: Q) -> Self {
        let mut e = Self::zero(a.degree(), z);
        for (p, c) in a.terms() {
            e.add_term(BrauerDiagram::from_permutation(p), c.clone());
        }
        e
    }

    /// Back to ℂ[S_n], if every term is a permutation.
    pub fn to_group_element(&self) -> Option<GroupAlgebraElement<C>> {
        let mut out = GroupAlgebraElement::zero(self.degree);
        for (d, c) in &self.terms {
            out = &out + &GroupAlgebraElement::from_terms(self.degree, [(d.to_permutation()?, c.clone())]).ok()?;
        }
        Some(out)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn z(&self) -> &Q {
        &self.z
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

    pub fn terms(&self) -> impl Iterator<Item = (&BrauerDiagram, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, d: &BrauerDiagram) -> C {
        self.terms.get(d).cloned().unwrap_or_else(C::zero)
    }

    pub(crate) fn add_term(&mut self, d: BrauerDiagram, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(d) {
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

    fn check(&self, other: &Self) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        if self.z != other.z {
            return Err(Error::ParameterMismatch {
                element: format!("z = {}", other.z),
                expected: format!("z = {}", self.z),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let powers: Vec<C> = (0..=self.degree as u32).map(|k| C::from_q(&q_pow(&self.z, k))).collect();
        let mut out = Self::zero(self.degree, self.z.clone());
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let (d, loops) = a.multiply_unchecked(b);
                out.add_term(d, x.clone() * y.clone() * powers[loops as usize].clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.degree, self.z.clone());
        for (d, a) in &self.terms {
            out.add_term(d.clone(), a.clone() * c.clone());
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.degree, self.z.clone());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> BrauerElement<D> {
        let mut out = BrauerElement::zero(self.degree, self.z.clone());
        for (d, c) in &self.terms {
            out.add_term(d.clone(), f(c));
        }
        out
    }

    pub fn to_f64(&self) -> BrauerElement<f64> {
        self.map_coeffs(|c| c.to_f64())
    }

    /// Drops the terms outside ℳ(n, m).
    pub fn wall_project(&self, n: usize, m: usize) -> Result<Self> {
        if n + m != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: n + m,
            });
        }
        let mut out = Self::zero(self.degree, self.z.clone());
        for (d, c) in &self.terms {
            if d.is_walled(n, m) {
                out.add_term(d.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// Keeps the terms of ℳ_A with |A| = 2k.
    pub fn project_mk(&self, k: usize) -> Self {
        let mut out = Self::zero(self.degree, self.z.clone());
        for (d, c) in &self.terms {
            if d.contraction_count() == k {
                out.add_term(d.clone(), c.clone());
            }
        }
        out
    }

    pub fn is_walled(&self, n: usize, m: usize) -> bool {
        self.terms.keys().all(|d| d.is_walled(n, m))
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        (self * other) == (other * self)
    }
}

impl BrauerElement<f64> {
    /// max |coefficient difference|.
    pub fn max_diff(&self, other: &Self) -> f64 {
        (self - other).max_abs()
    }
}

impl<C: Coeff> Add for &BrauerElement<C> {
    type Output = BrauerElement<C>;
    fn add(self, rhs: Self) -> Self::Output {
        self.try_add(rhs).expect("Brauer element mismatch")
    }
}

impl<C: Coeff> Sub for &BrauerElement<C> {
    type Output = BrauerElement<C>;
    fn sub(self, rhs: Self) -> Self::Output {
        self.try_add(&-rhs).expect("Brauer element mismatch")
    }
}

impl<C: Coeff> Neg for &BrauerElement<C> {
    type Output = BrauerElement<C>;
    fn neg(self) -> Self::Output {
        self.scale(&-C::one())
    }
}

impl<C: Coeff> Mul for &BrauerElement<C> {
    type Output = BrauerElement<C>;
    fn mul(self, rhs: Self) -> Self::Output {
        self.try_mul(rhs).expect("Brauer element mismatch")
    }
}

impl<C: Coeff> Conjugate for BrauerElement<C> {
    fn degree(&self) -> usize {
        self.degree
    }

    fn conjugate_by(&self, sigma: &Permutation) -> Self {
        let mut out = Self::zero(self.degree, self.z.clone());
        for (d, c) in &self.terms {
            out.add_term(d.conjugate_by(sigma), c.clone());
        }
        out
    }

    fn zero_like(&self) -> Self {
        Self::zero(self.degree, self.z.clone())
    }

    fn add_assign_scaled(&mut self, other: &Self, c: &Q) {
        let c = C::from_q(c);
        for (d, a) in &other.terms {
            self.add_term(d.clone(), a.clone() * c.clone());
        }
    }
}

fn nonzero(z: &Q) -> Result<()> {
    if z.is_zero() {
        Err(Error::ZeroParameter)
    } else {
        Ok(())
    }
}

/// Z_C(z) in ℂ[S_n]: (1 − z⁻¹)|C|/2 + z⁻¹ Σ_{a<b∈C} (a b).
pub fn z_group_element(c: &[usize], z: &Q, n: usize) -> Result<GroupAlgebraElement> {
    nonzero(z)?;
    let mut set: Vec<usize> = c.to_vec();
    set.sort_unstable();
    set.dedup();
    if let Some(&x) = set.iter().find(|&&x| x == 0 || x > n) {
        return Err(Error::IndexOutOfRange { index: x, max: n });
    }
    let zi = z.recip();
    let size = qi(set.len() as i64);
    let mut terms = vec![(Permutation::identity(n), (Q::one() - &zi) * size / qi(2))];
    for (i, &a) in set.iter().enumerate() {
        for &b in &set[i + 1..] {
            terms.push((Permutation::transposition(n, a, b)?, zi.clone()));
        }
    }
    GroupAlgebraElement::from_terms(n, terms)
}

/// Z_C(z) as a Brauer element.
pub fn z_element(c: &[usize], z: &Q, n: usize) -> Result<BrauerElement> {
    guard(n)?;
    Ok(BrauerElement::from_group_element(&z_group_element(c, z, n)?, z.clone()))
}

/// Z_i(z) = Z_{{1..i}}; Z_0 = 0.
pub fn z_i(i: usize, z: &Q, n: usize) -> Result<BrauerElement> {
    if i > n {
        return Err(Error::IndexOutOfRange { index: i, max: n });
    }
    z_element(&(1..=i).collect::<Vec<_>>(), z, n)
}

/// Y_C = p^w(Z_C) + |C|/(2z) for C ⊆ {1..n+m}, as a group algebra element of
/// S_n × S_m (transpositions across the wall are dropped).
pub fn y_group_element(c: &[usize], z: &Q, n: usize, m: usize) -> Result<GroupAlgebraElement> {
    let full = z_group_element(c, z, n + m)?;
    let mut set = c.to_vec();
    set.sort_unstable();
    set.dedup();
    let shift = Q::new(set.len().into(), 2.into()) / z;
    let mut kept = Vec::new();
    for (p, coef) in full.terms() {
        if p.preserves_blocks(&[n, m]) {
            kept.push((p.clone(), coef.clone()));
        }
    }
    let kept = GroupAlgebraElement::from_terms(n + m, kept)?;
    Ok(&kept + &GroupAlgebraElement::scalar(n + m, shift))
}

/// Index set of the j-th walled argument with k contractions:
/// {1..n−k+j} ∪ {n+1..n+m−k+j}.
pub fn y_index_set(n: usize, m: usize, k: usize, j: usize) -> Vec<usize> {
    let mut c: Vec<usize> = (1..=n - k + j).collect();
    c.extend(n + 1..=n + m - k + j);
    c
}

/// Y_i(z) = Y_{{1..i} ∪ {n+1..n+m−n+i}} for 0 ≤ i ≤ min(n, m); Y_0 is zero
/// when n = m.
pub fn y_element(i: usize, z: &Q, n: usize, m: usize) -> Result<BrauerElement> {
    guard(n + m)?;
    nonzero(z)?;
    if i > n.min(m) {
        return Err(Error::IndexOutOfRange { index: i, max: n.min(m) });
    }
    let k = n.min(m);
    let set = y_index_set(n, m, k, i);
    Ok(BrauerElement::from_group_element(&y_group_element(&set, z, n, m)?, z.clone()))
}

/// Δ_{B_n}(z) = −(1 − z⁻¹)n/2 + z⁻¹ Σ_{a<b} (τ_{a,b} − s_{a,b}).
pub fn casimir_delta(n: usize, z: &Q) -> Result<BrauerElement> {
    guard(n)?;
    nonzero(z)?;
    let zi = z.recip();
    let mut e = BrauerElement::scalar(n, z.clone(), -(Q::one() - &zi) * qi(n as i64) / qi(2));
    for a in 1..=n {
        for b in a + 1..=n {
            e.add_term(tau(n, a, b)?, zi.clone());
            e.add_term(s(n, a, b)?, -zi.clone());
        }
    }
    Ok(e)
}

/// Δ_{B_{n,m}}(z) = p^w(Δ_{B_{n+m}}(z)) − (n+m)/(2z).
pub fn casimir_delta_walled(n: usize, m: usize, z: &Q) -> Result<BrauerElement> {
    let full = casimir_delta(n + m, z)?.wall_project(n, m)?;
    let shift = -Q::new(((n + m) as i64).into(), 2.into()) / z;
    Ok(&full + &BrauerElement::scalar(n + m, z.clone(), shift))
}

/// τ_{[r,s]} = τ_{r,r+1} τ_{r+2,r+3} ⋯ τ_{s−1,s}.
pub fn tau_interval(r: usize, s_: usize, n: usize) -> Result<BrauerDiagram> {
    guard(n)?;
    if r == 0 || s_ > n || r > s_ {
        return Err(Error::IndexOutOfRange { index: s_, max: n });
    }
    if (s_ - r).is_multiple_of(2) {
        return Err(Error::Parity(format!("s − r = {} must be odd", s_ - r)));
    }
    let mut d = BrauerDiagram::identity(n);
    let mut a = r;
    while a < s_ {
        d = d.multiply_unchecked(&tau(n, a, a + 1)?).0;
        a += 2;
    }
    Ok(d)
}

/// τ̃_{[r,s]} = ∏_{r≤q≤s} τ_{q, q+m} in B_{n+m}: V slot q contracted with
/// V̄ slot q+m−n (the last V̄ slots when [r, s] ends at n).
pub fn tau_tilde_interval(r: usize, s_: usize, n: usize, m: usize) -> Result<BrauerDiagram> {
    guard(n + m)?;
    if r == 0 || s_ > n || r > s_ || r + m <= n {
        return Err(Error::IndexOutOfRange { index: r, max: n });
    }
    let mut d = BrauerDiagram::identity(n + m);
    for q in r..=s_ {
        d = d.multiply_unchecked(&tau(n + m, q, q + m)?).0;
    }
    Ok(d)
}

/// τ̃ for k contractions of the last k V slots with the last k V̄ slots.
pub fn tau_tilde(k: usize, n: usize, m: usize) -> Result<BrauerDiagram> {
    if k == 0 {
        guard(n + m)?;
        return Ok(BrauerDiagram::identity(n + m));
    }
    if k > n.min(m) {
        return Err(Error::IndexOutOfRange { index: k, max: n.min(m) });
    }
    tau_tilde_interval(n - k + 1, n, n, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::q;

    fn el(d: BrauerDiagram, z: &Q) -> BrauerElement {
        BrauerElement::from_diagram(d, z.clone())
    }

    #[test]
    fn generator_shapes() {
        assert_eq!(tau(2, 1, 2).unwrap().pairs(), vec![(1, 2), (3, 4)]);
        assert_eq!(s(2, 1, 2).unwrap().pairs(), vec![(1, 4), (2, 3)]);
        assert!(tau(3, 1, 3).unwrap().pairs().contains(&(2, 5)));
        assert!(tau(3, 2, 2).is_err());
        assert!(s(3, 1, 4).is_err());
        assert_eq!(all_diagrams(3).unwrap().len(), 15);
        assert_eq!(all_diagrams(4).unwrap().len(), 105);
        assert!(all_diagrams(9).is_err());
    }

    #[test]
    fn multiplication_examples() {
        let z = qi(5);
        let t = el(tau(2, 1, 2).unwrap(), &z);
        let sw = el(s(2, 1, 2).unwrap(), &z);
        assert_eq!(&t * &t, t.scale(&z));
        assert_eq!(&sw * &sw, BrauerElement::identity(2, z.clone()));
        assert_eq!(&sw * &t, t);
        assert_eq!(&t * &sw, t);
        let other = BrauerElement::<Q>::identity(2, qi(4));
        assert!(t.try_mul(&other).is_err());
        let (d3, _) = generators(3, 1, 2).unwrap();
        assert!(d3.multiply(&tau(2, 1, 2).unwrap()).is_err());
    }

    #[test]
    fn permutation_diagrams_compose_like_permutations() {
        for a in crate::perm::all_permutations(4) {
            for b in crate::perm::all_permutations(4).into_iter().step_by(5) {
                let (d, loops) = BrauerDiagram::from_permutation(&a).multiply(&BrauerDiagram::from_permutation(&b)).unwrap();
                assert_eq!(loops, 0);
                assert_eq!(d.to_permutation().unwrap(), a.compose(&b).unwrap());
            }
        }
    }

    #[test]
    fn associativity_exhaustive_n3() {
        let z = q(7, 2);
        let ds = all_diagrams(3).unwrap();
        for a in &ds {
            for b in &ds {
                let ab = &el(a.clone(), &z) * &el(b.clone(), &z);
                for c in ds.iter().step_by(2) {
                    let c = el(c.clone(), &z);
                    assert_eq!(&ab * &c, &el(a.clone(), &z) * &(&el(b.clone(), &z) * &c));
                }
            }
        }
    }

    #[test]
    fn nine_relations() {
        for z in [qi(3), qi(-4), q(7, 2)] {
            for n in 2..=4 {
                let t = |a, b| el(tau(n, a, b).unwrap(), &z);
                let sw = |a, b| el(s(n, a, b).unwrap(), &z);
                let one = BrauerElement::identity(n, z.clone());
                for a in 1..=n {
                    for b in 1..=n {
                        if a == b {
                            continue;
                        }
                        assert_eq!(&t(a, b) * &t(a, b), t(a, b).scale(&z));
                        assert_eq!(&sw(a, b) * &sw(a, b), one);
                        assert_eq!(&sw(a, b) * &t(a, b), t(a, b));
                        for c in 1..=n {
                            if c == a || c == b {
                                continue;
                            }
                            assert_eq!(&(&sw(a, b) * &t(b, c)) * &sw(a, b), t(a, c));
                            assert_eq!(&(&sw(a, b) * &sw(b, c)) * &sw(a, b), &(&sw(b, c) * &sw(a, b)) * &sw(b, c));
                            assert_eq!(&t(a, b) * &t(b, c), &sw(a, c) * &t(b, c));
                            for d in 1..=n {
                                if d == a || d == b || d == c {
                                    continue;
                                }
                                assert!(t(a, b).commutes_with(&t(c, d)));
                                assert!(sw(a, b).commutes_with(&sw(c, d)));
                                assert!(sw(a, b).commutes_with(&t(c, d)));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn wall_projection() {
        let z = qi(3);
        let (n, m) = (2, 2);
        let e = el(s(4, 1, 3).unwrap(), &z);
        assert!(e.wall_project(n, m).unwrap().is_zero());
        let t = el(tau(4, 1, 3).unwrap(), &z);
        assert_eq!(t.wall_project(n, m).unwrap(), t);
        assert_eq!(el(tau(4, 1, 2).unwrap(), &z).wall_project(n, m).unwrap(), BrauerElement::zero(4, z.clone()));
        let id = BrauerElement::<Q>::identity(4, z.clone());
        assert_eq!(id.wall_project(n, m).unwrap(), id);
        let mixed = &(&t + &e) + &id;
        let once = mixed.wall_project(n, m).unwrap();
        assert_eq!(once.wall_project(n, m).unwrap(), once);
        assert!(e.wall_project(3, 2).is_err());
    }

    #[test]
    fn walled_closure() {
        for (n, m) in [(1, 1), (1, 2), (2, 2), (2, 3), (1, 4)] {
            let ds = all_walled_diagrams(n, m).unwrap();
            let fact: usize = (1..=n + m).product();
            assert_eq!(ds.len(), fact, "|ℳ({n},{m})| = (n+m)!");
            for a in ds.iter().step_by(3) {
                for b in &ds {
                    let (d, _) = a.multiply(b).unwrap();
                    assert!(d.is_walled(n, m));
                }
            }
        }
    }

    #[test]
    fn z_and_y_examples() {
        let z = qi(4);
        let z1 = z_i(1, &z, 3).unwrap();
        assert_eq!(z1, BrauerElement::scalar(3, z.clone(), q(3, 8)));
        assert!(z_i(0, &z, 3).unwrap().is_zero());
        assert!(z_element(&[1], &Q::zero(), 2).is_err());
        // Z_2(N) on the trivial and sign idempotents of ℂ[S_2]
        let big_n = qi(5);
        let z2 = z_group_element(&[1, 2], &big_n, 2).unwrap();
        let triv = crate::young::isotypic_projector(&crate::young::IntegerPartition::new(&[2]).unwrap());
        let sign = crate::young::isotypic_projector(&crate::young::IntegerPartition::new(&[1, 1]).unwrap());
        assert_eq!(&z2 * &triv, triv.scale(&qi(1)));
        assert_eq!(&z2 * &sign, sign.scale(&q(3, 5)));

        assert!(y_element(0, &z, 1, 1).unwrap().is_zero());
        assert_eq!(y_element(1, &z, 1, 1).unwrap(), BrauerElement::identity(2, z.clone()));
        assert_eq!(y_element(0, &z, 1, 2).unwrap(), BrauerElement::identity(3, z.clone()).scale(&q(1, 2)));
        for (n, m) in [(1, 1), (1, 2), (2, 2), (2, 3), (1, 3)] {
            let ys: Vec<_> = (0..=n).map(|i| y_element(i, &z, n, m).unwrap()).collect();
            for a in &ys {
                assert!(a.is_walled(n, m));
                for b in &ys {
                    assert!(a.commutes_with(b));
                }
            }
        }
    }

    #[test]
    fn casimir_examples() {
        let z = qi(6);
        assert_eq!(casimir_delta(1, &z).unwrap(), BrauerElement::scalar(1, z.clone(), q(-5, 12)));
        assert_eq!(casimir_delta_walled(1, 0, &z).unwrap(), BrauerElement::scalar(1, z.clone(), q(-1, 2)));
        let d2 = casimir_delta(2, &z).unwrap();
        let expected = BrauerElement::from_terms(
            2,
            z.clone(),
            [
                (BrauerDiagram::identity(2), q(-5, 6)),
                (tau(2, 1, 2).unwrap(), q(1, 6)),
                (s(2, 1, 2).unwrap(), q(-1, 6)),
            ],
        )
        .unwrap();
        assert_eq!(d2, expected);
        assert!(casimir_delta(2, &Q::zero()).is_err());
    }

    #[test]
    fn classification() {
        assert!(BrauerDiagram::identity(3).classify_ma().is_empty());
        assert_eq!(tau(2, 1, 2).unwrap().classify_ma(), vec![1, 2]);
        assert_eq!(tau(3, 1, 2).unwrap().classify_ma(), vec![1, 2]);
        let z = qi(3);
        let t = el(tau(2, 1, 2).unwrap(), &z);
        assert_eq!(t.project_mk(1), t);
        assert!(t.project_mk(0).is_zero());
        let id = BrauerElement::<Q>::identity(2, z.clone());
        assert_eq!(id.project_mk(0), id);
        let sum = &t + &id;
        assert_eq!(&sum.project_mk(0) + &sum.project_mk(1), sum);
    }

    #[test]
    fn action_law_on_classes() {
        // s_{a,b}π ∈ ℳ_A and τ_{a,b}π ∈ ℳ_{A∪{a,b}} for a ≠ b ∉ A
        for n in 2..=3 {
            for pi in all_diagrams(n).unwrap() {
                let a_set = pi.classify_ma();
                for a in 1..=n {
                    for b in a + 1..=n {
                        if a_set.contains(&a) || a_set.contains(&b) {
                            continue;
                        }
                        // left multiplication acts on the outputs
                        let (sp, _) = s(n, a, b).unwrap().multiply(&pi).unwrap();
                        assert_eq!(sp.classify_ma(), a_set);
                        let (tp, _) = tau(n, a, b).unwrap().multiply(&pi).unwrap();
                        let mut expect = a_set.clone();
                        expect.extend([a, b]);
                        expect.sort_unstable();
                        assert_eq!(tp.classify_ma(), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn intervals() {
        assert_eq!(tau_interval(1, 2, 2).unwrap(), tau(2, 1, 2).unwrap());
        let t4 = tau_interval(1, 4, 4).unwrap();
        assert_eq!(t4, tau(4, 1, 2).unwrap().multiply(&tau(4, 3, 4).unwrap()).unwrap().0);
        assert!(matches!(tau_interval(1, 3, 4), Err(Error::Parity(_))));
        assert_eq!(tau_tilde_interval(1, 1, 1, 1).unwrap(), tau(2, 1, 2).unwrap());
        assert_eq!(tau_tilde(2, 2, 2).unwrap().pairs(), vec![(1, 3), (2, 4), (5, 7), (6, 8)]);
        assert!(tau_tilde(1, 1, 2).unwrap().is_walled(1, 2));
        assert_eq!(tau_tilde(1, 1, 2).unwrap().pairs(), vec![(1, 3), (2, 5), (4, 6)]);
    }
}
