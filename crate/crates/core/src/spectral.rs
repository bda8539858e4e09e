//! Functional calculus for commuting families of Z / Y elements.
//!
//! Z_i(z) = (i(z−1)/2 + X_1 + ⋯ + X_i)/z is a polynomial in Jucys–Murphy
//! elements, so the family (Z_{i_0}, …, Z_{i_k}) is jointly diagonal in the
//! Gelfand–Tsetlin basis with eigenvalues read off tableau contents. Joint
//! eigenprojectors are built exactly by Lagrange interpolation in each
//! element, and f(Z) = Σ_v f(v) E_v.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::coeff::{q_to_f64, qi, Q};
use crate::error::{Error, Result};
use crate::perm::GroupAlgebraElement;
use crate::young::{enumerate_partitions, enumerate_tableaux, IntegerPartition, StandardTableau};

/// Shapes annihilated by the target representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kernel {
    /// Keep every shape (work in the group algebra itself).
    None,
    /// ρ_O on (ℂ^N)^{⊗n}: shapes with more than N rows vanish.
    MaxLength(usize),
    /// ρ_S on (ℂ^{2N})^{⊗n}: shapes with first row longer than 2N vanish.
    MaxFirstPart(usize),
}

impl Kernel {
    pub fn keeps(&self, shape: &IntegerPartition) -> bool {
        match *self {
            Kernel::None => true,
            Kernel::MaxLength(l) => shape.length() <= l,
            Kernel::MaxFirstPart(r) => shape.first_part() <= r,
        }
    }
}

/// A commuting family with its joint spectrum.
#[derive(Clone, Debug)]
pub struct CommutingFamily {
    degree: usize,
    elements: Vec<GroupAlgebraElement>,
    /// joint eigenvalue → whether some surviving Gelfand–Tsetlin vector carries it
    joint: BTreeMap<Vec<Q>, bool>,
    /// per element: eigenvalue → Lagrange projector
    projectors: Vec<BTreeMap<Q, GroupAlgebraElement>>,
}

fn all_tableaux(n: usize) -> Vec<StandardTableau> {
    enumerate_partitions(n, None).iter().flat_map(enumerate_tableaux).collect()
}

fn prefix_sums(t: &StandardTableau) -> Vec<i64> {
    let mut acc = 0;
    let mut out = vec![0];
    for c in t.contents() {
        acc += c;
        out.push(acc);
    }
    out
}

impl CommutingFamily {
    /// (Z_{i_0}, …, Z_{i_k}) at parameter z in ℂ[S_n]; index 0 stands for Z_0 = 0.
    pub fn z_family(indices: &[usize], z: &Q, n: usize, kernel: Kernel) -> Result<Self> {
        if z.is_zero() {
            return Err(Error::ZeroParameter);
        }
        let mut elements = Vec::new();
        for &i in indices {
            if i > n {
                return Err(Error::IndexOutOfRange { index: i, max: n });
            }
            elements.push(if i == 0 {
                GroupAlgebraElement::zero(n)
            } else {
                crate::brauer::z_group_element(&(1..=i).collect::<Vec<_>>(), z, n)?
            });
        }
        let mut joint = BTreeMap::new();
        for t in all_tableaux(n) {
            let sums = prefix_sums(&t);
            let v: Vec<Q> = indices
                .iter()
                .map(|&i| if i == 0 { Q::zero() } else { crate::young::z_eigenvalue(i, sums[i], z) })
                .collect();
            let alive = kernel.keeps(t.shape());
            *joint.entry(v).or_insert(false) |= alive;
        }
        Ok(Self::finish(n, elements, joint))
    }

    /// (Y_{C_0}, …, Y_{C_k}) in ℂ[S_n × S_m] where C_j = {1..a_j} ∪ {n+1..n+b_j}.
    /// An empty C gives the zero element.
    pub fn y_family(sets: &[(usize, usize)], z: &Q, n: usize, m: usize, kernel: Kernel) -> Result<Self> {
        if z.is_zero() {
            return Err(Error::ZeroParameter);
        }
        let mut elements = Vec::new();
        for &(a, b) in sets {
            if a > n || b > m {
                return Err(Error::IndexOutOfRange { index: a.max(b), max: n.max(m) });
            }
            let mut c: Vec<usize> = (1..=a).collect();
            c.extend(n + 1..=n + b);
            elements.push(if c.is_empty() {
                GroupAlgebraElement::zero(n + m)
            } else {
                crate::brauer::y_group_element(&c, z, n, m)?
            });
        }
        let left = all_tableaux(n);
        let right = all_tableaux(m);
        let mut joint = BTreeMap::new();
        for t in &left {
            let sl = prefix_sums(t);
            for u in &right {
                let sr = prefix_sums(u);
                let v: Vec<Q> = sets
                    .iter()
                    .map(|&(a, b)| {
                        if a + b == 0 {
                            Q::zero()
                        } else {
                            Q::new(((a + b) as i64).into(), 2.into()) + qi(sl[a] + sr[b]) / z
                        }
                    })
                    .collect();
                let alive = kernel.keeps(t.shape()) && kernel.keeps(u.shape());
                *joint.entry(v).or_insert(false) |= alive;
            }
        }
        Ok(Self::finish(n + m, elements, joint))
    }

    fn finish(degree: usize, elements: Vec<GroupAlgebraElement>, joint: BTreeMap<Vec<Q>, bool>) -> Self {
        let mut projectors = Vec::new();
        for (j, x) in elements.iter().enumerate() {
            let spectrum: BTreeSet<Q> = joint.keys().map(|v| v[j].clone()).collect();
            let mut map = BTreeMap::new();
            for zeta in &spectrum {
                let mut p = GroupAlgebraElement::identity(degree);
                for other in &spectrum {
                    if other == zeta {
                        continue;
                    }
                    let shifted = x - &GroupAlgebraElement::scalar(degree, other.clone());
                    p = (&p * &shifted).scale(&(zeta - other).recip());
                }
                map.insert(zeta.clone(), p);
            }
            projectors.push(map);
        }
        CommutingFamily {
            degree,
            elements,
            joint,
            projectors,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn elements(&self) -> &[GroupAlgebraElement] {
        &self.elements
    }

    /// Joint eigenvalues and whether they survive the kernel filter.
    pub fn joint_spectrum(&self) -> impl Iterator<Item = (&Vec<Q>, bool)> {
        self.joint.iter().map(|(v, &a)| (v, a))
    }

    /// Joint eigenprojector E_v (zero if v is not a joint eigenvalue).
    pub fn idempotent(&self, v: &[Q]) -> GroupAlgebraElement {
        let mut e = GroupAlgebraElement::identity(self.degree);
        for (j, zeta) in v.iter().enumerate() {
            match self.projectors[j].get(zeta) {
                Some(p) => e = &e * p,
                None => return GroupAlgebraElement::zero(self.degree),
            }
        }
        e
    }

    /// Σ_v f(v) E_v over surviving joint eigenvalues, double precision.
    pub fn apply(&self, f: impl Fn(&[f64]) -> f64) -> GroupAlgebraElement<f64> {
        let mut out = GroupAlgebraElement::<f64>::zero(self.degree);
        for (v, alive) in &self.joint {
            if !alive {
                continue;
            }
            let x: Vec<f64> = v.iter().map(q_to_f64).collect();
            let c = f(&x);
            if c != 0.0 {
                out = &out + &self.idempotent(v).to_f64().scale(&c);
            }
        }
        out
    }

    /// Σ_v f(v) E_v, exactly; `f` sees every joint eigenvalue and the kernel flag.
    pub fn apply_exact(&self, f: impl Fn(&[Q], bool) -> Q) -> GroupAlgebraElement {
        let mut out = GroupAlgebraElement::zero(self.degree);
        for (v, &alive) in &self.joint {
            let c = f(v, alive);
            if !c.is_zero() {
                out = &out + &self.idempotent(v).scale(&c);
            }
        }
        out
    }

    /// Product of the spectral pseudo-inverses of every member.
    pub fn pseudo_inverse_product(&self) -> GroupAlgebraElement {
        self.apply_exact(|v, _| {
            if v.iter().any(|x| x.is_zero()) {
                Q::zero()
            } else {
                v.iter().fold(Q::one(), |acc, x| acc / x)
            }
        })
    }
}
