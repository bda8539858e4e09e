//! Gram elements 𝐆(z), Ω(z), their pseudo-inverses 𝐖(z), 𝐖𝐠(z), Haar
//! moment operators and entrywise Weingarten sums.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use nalgebra::DMatrix;
use num_traits::Zero;

use crate::cache;
use crate::brauer::{tau_interval, tau_tilde_interval, BrauerDiagram, BrauerElement};
use crate::coeff::{qi, Q};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::perm::{all_permutations, conjugation_average, jucys_murphy, signature_element, GroupAlgebraElement, Permutation, Subgroup};
use crate::spectral::{CommutingFamily, Kernel};
use crate::tensor_rep::{rho_group, GroupFamily, GroupSpec, MomentTensor, Rep};
use crate::young::{enumerate_partitions, isotypic_projector, r_factors};

/// Largest Brauer degree for which the Haar operators are assembled
/// symbolically.
pub const MAX_HAAR_DEGREE: usize = 6;

/// Largest number of points for pairing enumeration.
pub const MAX_PAIRING_POINTS: usize = 10;

/// A perfect matching of {1, …, 2p}.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pairing {
    partner: Vec<u8>,
}

impl fmt::Debug for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (a, b)) in self.pairs().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{{a},{b}}}")?;
        }
        write!(f, "}}")
    }
}

impl Pairing {
    /// From 1-based pairs covering {1..points} exactly once.
    pub fn new(points: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        if points % 2 == 1 {
            return Err(Error::InvalidPairing(format!("{points} points cannot be paired")));
        }
        let mut partner = vec![u8::MAX; points];
        for &(a, b) in pairs {
            if a == 0 || b == 0 || a > points || b > points || a == b {
                return Err(Error::InvalidPairing(format!("bad pair ({a}, {b})")));
            }
            if partner[a - 1] != u8::MAX || partner[b - 1] != u8::MAX {
                return Err(Error::InvalidPairing(format!("point repeated in ({a}, {b})")));
            }
            partner[a - 1] = (b - 1) as u8;
            partner[b - 1] = (a - 1) as u8;
        }
        if partner.contains(&u8::MAX) {
            return Err(Error::InvalidPairing("not every point is paired".into()));
        }
        Ok(Pairing { partner })
    }

    /// π₀ = {{1,2},{3,4},…,{2p−1,2p}}.
    pub fn standard(p: usize) -> Self {
        let partner = (0..2 * p).map(|i| (i ^ 1) as u8).collect();
        Pairing { partner }
    }

    /// {{k, p+k}}: the identity of ℳ(p,p).
    pub fn standard_walled(p: usize) -> Self {
        Self::from_walled_permutation(&Permutation::identity(p))
    }

    /// {{k, p+γ(k)}} ∈ ℳ(p,p).
    pub fn from_walled_permutation(gamma: &Permutation) -> Self {
        let p = gamma.degree();
        let mut partner = vec![0u8; 2 * p];
        for k in 0..p {
            let b = p + gamma.apply0(k);
            partner[k] = b as u8;
            partner[b] = k as u8;
        }
        Pairing { partner }
    }

    pub fn points(&self) -> usize {
        self.partner.len()
    }

    /// 1-based partner of i.
    pub fn partner(&self, i: usize) -> usize {
        self.partner[i - 1] as usize + 1
    }


    /// Pairs (a, b), a < b, sorted by a.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.points())
            .filter(|&i| (self.partner[i] as usize) > i)
            .map(|i| (i + 1, self.partner[i] as usize + 1))
            .collect()
    }

    /// σ(π) = {{σ(a), σ(b)}}.
    pub fn apply(&self, sigma: &Permutation) -> Pairing {
        let mut partner = vec![0u8; self.points()];
        for i in 0..self.points() {
            partner[sigma.apply0(i)] = sigma.apply0(self.partner[i] as usize) as u8;
        }
        Pairing { partner }
    }

    /// Number of blocks of π ∨ η.
    pub fn join_block_count(&self, other: &Pairing) -> Result<usize> {
        if self.points() != other.points() {
            return Err(Error::DegreeMismatch {
                left: self.points(),
                right: other.points(),
            });
        }
        let n = self.points();
        let mut seen = vec![false; n];
        let mut blocks = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            blocks += 1;
            // alternate π and η edges around the cycle
            let mut x = start;
            loop {
                seen[x] = true;
                let y = self.partner[x] as usize;
                seen[y] = true;
                x = other.partner[y] as usize;
                if x == start {
                    break;
                }
            }
        }
        Ok(blocks)
    }

    /// σ_π with σ_π(2k−1) = min of the k-th block (blocks sorted by min),
    /// σ_π(2k) = its partner. Then σ_π(π₀) = π.
    pub fn coset_representative(&self) -> Permutation {
        let mut images = Vec::with_capacity(self.points());
        for (a, b) in self.pairs() {
            images.push((a - 1) as u8);
            images.push((b - 1) as u8);
        }
        Permutation::from_zero_based(images)
    }

    /// Whether every pair joins {1..p} with {p+1..2p}.
    pub fn is_walled(&self) -> bool {
        let p = self.points() / 2;
        (0..p).all(|i| self.partner[i] as usize >= p)
    }

    /// For π ∈ ℳ(p,p): γ with π = {{k, p+γ(k)}}.
    pub fn walled_permutation(&self) -> Option<Permutation> {
        if !self.is_walled() {
            return None;
        }
        let p = self.points() / 2;
        Some(Permutation::from_zero_based((0..p).map(|k| (self.partner[k] as usize - p) as u8).collect()))
    }

    /// σ ∈ S_p (acting on points 1..p) with σ(standard_walled) = π.
    pub fn walled_coset_representative(&self) -> Option<Permutation> {
        self.walled_permutation().map(|g| g.inverse())
    }
}

/// Number of blocks of π ∨ η.
pub fn join_block_count(pi: &Pairing, eta: &Pairing) -> Result<usize> {
    pi.join_block_count(eta)
}

/// ℳ(points): all perfect matchings, in lexicographic order of partner vectors.
pub fn all_pairings(points: usize) -> Result<Vec<Pairing>> {
    if points % 2 == 1 {
        return Err(Error::Parity(format!("{points} points")));
    }
    if points > MAX_PAIRING_POINTS {
        return Err(Error::SizeGuard(format!("{points} points exceeds {MAX_PAIRING_POINTS}")));
    }
    let mut out = Vec::new();
    let mut partner = vec![u8::MAX; points];
    fn rec(partner: &mut Vec<u8>, out: &mut Vec<Pairing>) {
        let Some(a) = partner.iter().position(|&x| x == u8::MAX) else {
            out.push(Pairing { partner: partner.clone() });
            return;
        };
        for b in a + 1..partner.len() {
            if partner[b] == u8::MAX {
                partner[a] = b as u8;
                partner[b] = a as u8;
                rec(partner, out);
                partner[a] = u8::MAX;
                partner[b] = u8::MAX;
            }
        }
    }
    rec(&mut partner, &mut out);
    out.sort();
    Ok(out)
}

/// ℳ(p,p), indexed like all_permutations(p).
pub fn all_walled_pairings(p: usize) -> Result<Vec<Pairing>> {
    if 2 * p > MAX_PAIRING_POINTS {
        return Err(Error::SizeGuard(format!("{} points exceeds {MAX_PAIRING_POINTS}", 2 * p)));
    }
    Ok(all_permutations(p).iter().map(Pairing::from_walled_permutation).collect())
}

/// Linear action of ℂ[S_n] on formal combinations of pairings: a·π.
pub fn act_on_pairing(a: &GroupAlgebraElement, pi: &Pairing) -> Result<BTreeMap<Pairing, Q>> {
    if a.degree() != pi.points() {
        return Err(Error::DegreeMismatch {
            left: a.degree(),
            right: pi.points(),
        });
    }
    let mut out: BTreeMap<Pairing, Q> = BTreeMap::new();
    for (s, c) in a.terms() {
        *out.entry(pi.apply(s)).or_insert_with(Q::zero) += c;
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

/// Matrix of η ↦ σ_η·a·π₀ in the pairing basis: column η holds the
/// coefficients of σ_η a π₀. `walled` selects ℳ(p,p) with a ∈ ℂ[S_p].
pub fn action_matrix(a: &GroupAlgebraElement, basis: &[Pairing], walled: bool) -> Result<QMatrix> {
    let index: HashMap<&Pairing, usize> = basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let k = basis.len();
    let mut m = QMatrix::zeros(k, k);
    let Some(first) = basis.first() else {
        return Ok(m);
    };
    let points = first.points();
    let base = if walled { Pairing::standard_walled(points / 2) } else { Pairing::standard(points / 2) };
    let a_full = if walled { a.embed(points)? } else { a.clone() };
    for (col, eta) in basis.iter().enumerate() {
        let rep = if walled {
            eta.walled_coset_representative()
                .ok_or_else(|| Error::InvalidPairing(format!("{eta:?} is not walled")))?
                .embed(points)?
        } else {
            eta.coset_representative()
        };
        let x = &GroupAlgebraElement::from_perm(rep) * &a_full;
        for (mu, c) in act_on_pairing(&x, &base)? {
            let row = *index
                .get(&mu)
                .ok_or_else(|| Error::InvalidPairing(format!("{mu:?} outside the basis")))?;
            m[(row, col)] = c;
        }
    }
    Ok(m)
}

/// Gram data over ℳ(2p) or ℳ(p,p).
#[derive(Clone, Debug)]
pub struct GramOperator {
    pub basis: Vec<Pairing>,
    /// G_{π,η}(z) = z^{#(π∨η)}
    pub matrix: QMatrix,
    /// 𝐆(z) ∈ ℂ[S_{2p}] or Ω(z) ∈ ℂ[S_p]
    pub element: GroupAlgebraElement,
    pub walled: bool,
}

impl GramOperator {
    /// Over ℳ(2p), with 𝐆(z) = ∏(z + X_{2k−1}).
    pub fn orthogonal(p: usize, z: &Q) -> Result<Self> {
        let basis = all_pairings(2 * p)?;
        let matrix = gram_matrix(&basis, z)?;
        Ok(GramOperator {
            basis,
            matrix,
            element: gram_element_jm(p, z)?,
            walled: false,
        })
    }

    /// Over ℳ(p,p), with Ω(z) = Σ z^{#σ} σ.
    pub fn walled(p: usize, z: &Q) -> Result<Self> {
        let basis = all_walled_pairings(p)?;
        let matrix = gram_matrix(&basis, z)?;
        Ok(GramOperator {
            basis,
            matrix,
            element: omega_element(p, z),
            walled: true,
        })
    }

    /// Matrix of the right action of the element; equals `matrix`.
    pub fn action_matrix(&self) -> Result<QMatrix> {
        action_matrix(&self.element, &self.basis, self.walled)
    }
}

/// (z^{#(π∨η)})_{π,η} over the given basis.
pub fn gram_matrix(basis: &[Pairing], z: &Q) -> Result<QMatrix> {
    let k = basis.len();
    let mut m = QMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            let b = basis[i].join_block_count(&basis[j])?;
            m[(i, j)] = crate::coeff::q_pow(z, b as u32);
        }
    }
    Ok(m)
}

/// 𝐆(z) = Σ_π z^{#(π∨π₀)} σ_π with the canonical coset representatives.
pub fn gram_element_coset(p: usize, z: &Q) -> Result<GroupAlgebraElement> {
    let base = Pairing::standard(p);
    let mut out = GroupAlgebraElement::zero(2 * p);
    for pi in all_pairings(2 * p)? {
        let b = pi.join_block_count(&base)?;
        out.add_term(pi.coset_representative(), crate::coeff::q_pow(z, b as u32));
    }
    Ok(out)
}

/// 𝐆(z) = ∏_{k=1}^p (z + X_{2k−1}).
pub fn gram_element_jm(p: usize, z: &Q) -> Result<GroupAlgebraElement> {
    let n = 2 * p;
    let mut out = GroupAlgebraElement::identity(n);
    for k in 1..=p {
        let x = &jucys_murphy(2 * k - 1, n)? + &GroupAlgebraElement::scalar(n, z.clone());
        out = &out * &x;
    }
    Ok(out)
}

/// 𝐆(z), JM product form.
pub fn gram_element(p: usize, z: &Q) -> Result<GroupAlgebraElement> {
    gram_element_jm(p, z)
}

/// Ω(z) = Σ_{σ∈S_n} z^{#σ} σ.
pub fn omega_element(n: usize, z: &Q) -> GroupAlgebraElement {
    let mut out = GroupAlgebraElement::zero(n);
    for s in all_permutations(n) {
        let c = crate::coeff::q_pow(z, s.cycle_count() as u32);
        out.add_term(s, c);
    }
    out
}

/// Ω(z) = ∏_{i=1}^n (z + X_i).
pub fn omega_jm(n: usize, z: &Q) -> Result<GroupAlgebraElement> {
    let mut out = GroupAlgebraElement::identity(n);
    for i in 1..=n {
        let x = &jucys_murphy(i, n)? + &GroupAlgebraElement::scalar(n, z.clone());
        out = &out * &x;
    }
    Ok(out)
}

type CacheKey = (u8, usize, Q);

fn element_cache() -> &'static Mutex<HashMap<CacheKey, GroupAlgebraElement>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, GroupAlgebraElement>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(key: CacheKey, build: impl FnOnce() -> GroupAlgebraElement) -> GroupAlgebraElement {
    if let Some(e) = element_cache().lock().unwrap().get(&key) {
        return e.clone();
    }
    let kind = if key.0 == 0 { cache::Kind::W } else { cache::Kind::Wg };
    let dir = cache::cache_dir();
    let disk = dir.as_deref().and_then(|d| cache::load(d, kind, key.1, &key.2));
    let e = match disk {
        Some(e) => e,
        None => {
            let e = build();
            if let Some(d) = dir.as_deref() {
                // a read-only or missing directory only costs recomputation
                let _ = cache::store(d, kind, key.1, &key.2, &e);
            }
            e
        }
    };
    element_cache().lock().unwrap().insert(key, e.clone());
    e
}

/// 𝐖(z) = Σ_{λ⊢p} R_{2,λ}⁻¹ 𝒫_{2λ} ∈ ℂ[S_{2p}], dropping R_{2,λ} = 0.
pub fn pseudo_inverse_w(p: usize, z: &Q) -> GroupAlgebraElement {
    cached((0, p, z.clone()), || {
        let mut out = GroupAlgebraElement::zero(2 * p);
        for lambda in enumerate_partitions(p, None) {
            let (_, r2) = r_factors(&lambda, z);
            if !r2.is_zero() {
                out = &out + &isotypic_projector(&lambda.doubled()).scale(&r2.recip());
            }
        }
        out
    })
}

/// 𝐖𝐠(z) = Σ_{λ⊢n} R_λ⁻¹ 𝒫_λ ∈ ℂ[S_n], dropping R_λ = 0.
pub fn pseudo_inverse_wg(n: usize, z: &Q) -> GroupAlgebraElement {
    cached((1, n, z.clone()), || {
        let mut out = GroupAlgebraElement::zero(n);
        for lambda in enumerate_partitions(n, None) {
            let (r, _) = r_factors(&lambda, z);
            if !r.is_zero() {
                out = &out + &isotypic_projector(&lambda).scale(&r.recip());
            }
        }
        out
    })
}

fn factorial(n: usize) -> Q {
    qi((1..=n as i64).product())
}

/// ℐ_{2p}(z) = (1/2^p p!) Σ_{σ∈S_{2p}} σ 𝐖(z) τ_{[1,2p]} σ⁻¹.
pub fn haar_element(p: usize, z: &Q) -> Result<BrauerElement> {
    let n = 2 * p;
    if n > MAX_HAAR_DEGREE {
        return Err(Error::SizeGuard(format!("degree {n} exceeds {MAX_HAAR_DEGREE}")));
    }
    if p == 0 {
        return Ok(BrauerElement::identity(0, z.clone()));
    }
    let w = BrauerElement::from_group_element(&pseudo_inverse_w(p, z), z.clone());
    let t = BrauerElement::from_diagram(tau_interval(1, n, n)?, z.clone());
    let wt = w.try_mul(&t)?;
    let norm = (qi(1 << p) * factorial(p)).recip();
    conjugation_average(&wt, &Subgroup::Symmetric(n), &norm)
}

/// ℐ_{n,n}(z) = (1/n!) Σ_{σ∈S_n×S_n} σ 𝐖𝐠(z) τ̃_{[1,n]} σ⁻¹.
pub fn haar_element_walled(n: usize, z: &Q) -> Result<BrauerElement> {
    if 2 * n > MAX_HAAR_DEGREE {
        return Err(Error::SizeGuard(format!("degree {} exceeds {MAX_HAAR_DEGREE}", 2 * n)));
    }
    if n == 0 {
        return Ok(BrauerElement::identity(0, z.clone()));
    }
    let wg = BrauerElement::from_group_element(&pseudo_inverse_wg(n, z).embed(2 * n)?, z.clone());
    let t = BrauerElement::from_diagram(tau_tilde_interval(1, n, n, n)?, z.clone());
    let wt = wg.try_mul(&t)?;
    conjugation_average(&wt, &Subgroup::Product(n, n), &factorial(n).recip())
}

fn zero_tensor(dim: usize, n: usize, m: usize) -> Result<MomentTensor<Q>> {
    let side = dim.pow((n + m) as u32);
    MomentTensor::from_matrix(dim, n, m, DMatrix::from_element(side, side, Q::zero()))
}

/// ∫ g^{⊗n} ⊗ ḡ^{⊗m} dg as an exact matrix.
pub fn haar_moment(g: &GroupSpec, n: usize, m: usize) -> Result<MomentTensor<Q>> {
    g.check_degrees(n, m)?;
    let dim = g.dim_v();
    let z = g.brauer_z();
    match g.family {
        GroupFamily::Unitary => {
            if n != m {
                return zero_tensor(dim, n, m);
            }
            rho_group(&haar_element_walled(n, &z)?, g, n, m)
        }
        _ => {
            if n % 2 == 1 {
                return zero_tensor(dim, n, 0);
            }
            rho_group(&haar_element(n / 2, &z)?, g, n, 0)
        }
    }
}

/// inv₂(σ, I) = #{k ≤ p : i_{σ(2k)} < i_{σ(2k−1)}}.
pub fn inv2(sigma: &Permutation, idx: &[usize]) -> usize {
    (0..idx.len() / 2)
        .filter(|&k| idx[sigma.apply0(2 * k + 1)] < idx[sigma.apply0(2 * k)])
        .count()
}

/// Weight of a multi-index against a pairing: the value ⟨w_π, e_I⟩ for the
/// family's invariant vector w_π.
fn pairing_weight(rep: Rep, family: GroupFamily, pi: &Pairing, idx: &[usize]) -> i64 {
    for (a, b) in pi.pairs() {
        let (x, y) = (idx[a - 1], idx[b - 1]);
        let ok = match rep {
            Rep::S(big_n) => x.abs_diff(y) == big_n,
            Rep::O(_) => x == y,
        };
        if !ok {
            return 0;
        }
    }
    match (family, rep) {
        (GroupFamily::Symplectic, _) => {
            let s = pi.coset_representative();
            let sign = if inv2(&s, idx).is_multiple_of(2) { 1 } else { -1 };
            s.signature() as i64 * sign
        }
        _ => 1,
    }
}

/// ∫ g_{i₁j₁}⋯ dg by the Weingarten sum over pairings, with the Gram
/// pseudo-inverse computed as a dense exact matrix. Indices are 1-based;
/// for U the tuples list the n unconjugated slots, then the m conjugated ones.
pub fn haar_entrywise(g: &GroupSpec, i: &[usize], j: &[usize]) -> Result<Q> {
    if i.len() != j.len() {
        return Err(Error::SizeMismatch(format!("index tuples of lengths {} and {}", i.len(), j.len())));
    }
    let dim = g.dim_v();
    if let Some(&bad) = i.iter().chain(j).find(|&&x| x == 0 || x > dim) {
        return Err(Error::IndexOutOfRange { index: bad, max: dim });
    }
    let k = i.len();
    if k % 2 == 1 {
        return Ok(Q::zero());
    }
    let z = g.brauer_z();
    let basis = match g.family {
        GroupFamily::Unitary => all_walled_pairings(k / 2)?,
        _ => all_pairings(k)?,
    };
    let wi: Vec<i64> = basis.iter().map(|pi| pairing_weight(g.rep(), g.family, pi, i)).collect();
    let wj: Vec<i64> = basis.iter().map(|pi| pairing_weight(g.rep(), g.family, pi, j)).collect();
    if wi.iter().all(|&x| x == 0) || wj.iter().all(|&x| x == 0) {
        return Ok(Q::zero());
    }
    let w = gram_matrix(&basis, &z)?.pseudo_inverse();
    let mut total = Q::zero();
    for (a, &x) in wi.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (b, &y) in wj.iter().enumerate() {
            if y != 0 {
                total += &w[(a, b)] * qi(x * y);
            }
        }
    }
    if g.family == GroupFamily::Symplectic && (k / 2) % 2 == 1 {
        total = -total;
    }
    Ok(total)
}

/// ℐ′_n(N) as a Brauer element at z = N; zero unless n − N is even and ≥ 0.
pub fn so_correction_element(n: usize, big_n: usize) -> Result<BrauerElement> {
    let z = qi(big_n as i64);
    if n > MAX_HAAR_DEGREE {
        return Err(Error::SizeGuard(format!("degree {n} exceeds {MAX_HAAR_DEGREE}")));
    }
    if n < big_n || (n - big_n) % 2 == 1 || big_n == 0 {
        return Ok(BrauerElement::zero(n, z));
    }
    let indices: Vec<usize> = (big_n + 2..=n).step_by(2).collect();
    let zinv = if indices.is_empty() {
        GroupAlgebraElement::identity(n)
    } else {
        CommutingFamily::z_family(&indices, &z, n, Kernel::MaxLength(big_n))?.pseudo_inverse_product()
    };
    let eps = signature_element(big_n, n)?;
    let tail = BrauerElement::from_group_element(&(&eps * &zinv), z.clone());
    let x = if n > big_n {
        BrauerElement::from_diagram(tau_interval(big_n + 1, n, n)?, z.clone()).try_mul(&tail)?
    } else {
        tail
    };
    let half = ((n - big_n) / 2) as u32;
    let nf = factorial(big_n);
    let norm = (crate::coeff::q_pow(&qi(2 * big_n as i64), half) * &nf * &nf).recip();
    conjugation_average(&x, &Subgroup::Symmetric(n), &norm)
}

/// ∫_{O(N)} O^{⊗n} det(O) dO = ρ_O(ℐ′_n(N)).
pub fn so_correction(n: usize, big_n: usize) -> Result<MomentTensor<Q>> {
    let g = GroupSpec::new(GroupFamily::Orthogonal, big_n)?;
    g.check_degrees(n, 0)?;
    rho_group(&so_correction_element(n, big_n)?, &g, n, 0)
}

/// Diagram with caps π on the inputs and cups η on the outputs.
pub fn cap_cup_diagram(cups: &Pairing, caps: &Pairing) -> Result<BrauerDiagram> {
    if cups.points() != caps.points() {
        return Err(Error::DegreeMismatch {
            left: cups.points(),
            right: caps.points(),
        });
    }
    let n = cups.points();
    let mut pairs = Vec::new();
    for (a, b) in caps.pairs() {
        pairs.push((a, b));
    }
    for (a, b) in cups.pairs() {
        pairs.push((a + n, b + n));
    }
    BrauerDiagram::new(n, &pairs)
}
