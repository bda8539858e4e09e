//! Matrix realizations of Brauer elements on V^{⊗n}: ρ_O at z = N and ρ_S at
//! z = −2N, symplectic invariant vectors, and Casimir matrices.
//!
//! Tensor factor 1 is the slowest-varying index. Rows are output
//! multi-indices, columns input multi-indices.

use std::fmt;

use nalgebra::{DMatrix, DVector, Scalar};
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::brauer::{casimir_delta, casimir_delta_walled, BrauerDiagram, BrauerElement};
use crate::coeff::{qi, Coeff, Q};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::weingarten::Pairing;

/// Largest matrix side accepted for dense tensors.
pub const MAX_TENSOR_SIDE: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupFamily {
    Orthogonal,
    Symplectic,
    Unitary,
}

impl fmt::Display for GroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GroupFamily::Orthogonal => "O",
            GroupFamily::Symplectic => "Sp",
            GroupFamily::Unitary => "U",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for GroupFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "O" | "o" | "orthogonal" => Ok(GroupFamily::Orthogonal),
            "Sp" | "sp" | "SP" | "symplectic" => Ok(GroupFamily::Symplectic),
            "U" | "u" | "unitary" => Ok(GroupFamily::Unitary),
            other => Err(Error::Unsupported(format!("unknown group family {other:?}"))),
        }
    }
}

/// O(N), Sp(N) ⊂ U(2N), or U(N).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    pub family: GroupFamily,
    pub n: usize,
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.family, self.n)
    }
}

/// Which Brauer representation realizes the commutant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rep {
    /// ρ_O on (ℂ^N)^{⊗n}, z = N.
    O(usize),
    /// ρ_S on (ℂ^{2N})^{⊗n}, z = −2N.
    S(usize),
}

impl Rep {
    pub fn dim(&self) -> usize {
        match *self {
            Rep::O(n) => n,
            Rep::S(n) => 2 * n,
        }
    }

    pub fn z(&self) -> Q {
        match *self {
            Rep::O(n) => qi(n as i64),
            Rep::S(n) => qi(-2 * n as i64),
        }
    }

    /// Partner index and value of the invariant form (identity or J).
    fn form_partner(&self, i: usize) -> (usize, i8) {
        match *self {
            Rep::O(_) => (i, 1),
            Rep::S(n) => {
                if i < n {
                    (i + n, 1)
                } else {
                    (i - n, -1)
                }
            }
        }
    }

    fn form(&self, i: usize, j: usize) -> i8 {
        let (p, v) = self.form_partner(i);
        if p == j {
            v
        } else {
            0
        }
    }

    fn signed(&self) -> bool {
        matches!(self, Rep::S(_))
    }
}

impl GroupSpec {
    pub fn new(family: GroupFamily, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Unsupported("N must be positive".into()));
        }
        Ok(GroupSpec { family, n })
    }

    pub fn orthogonal(n: usize) -> Self {
        GroupSpec::new(GroupFamily::Orthogonal, n).expect("N > 0")
    }

    pub fn symplectic(n: usize) -> Self {
        GroupSpec::new(GroupFamily::Symplectic, n).expect("N > 0")
    }

    pub fn unitary(n: usize) -> Self {
        GroupSpec::new(GroupFamily::Unitary, n).expect("N > 0")
    }

    /// Dimension of the fundamental representation V.
    pub fn dim_v(&self) -> usize {
        match self.family {
            GroupFamily::Symplectic => 2 * self.n,
            _ => self.n,
        }
    }

    pub fn brauer_z(&self) -> Q {
        self.rep().z()
    }

    pub fn rep(&self) -> Rep {
        match self.family {
            GroupFamily::Symplectic => Rep::S(self.n),
            _ => Rep::O(self.n),
        }
    }

    /// J = ((0, I_N), (−I_N, 0)) for the symplectic family.
    pub fn j_matrix(&self) -> Option<DMatrix<f64>> {
        if self.family != GroupFamily::Symplectic {
            return None;
        }
        let n = self.n;
        Some(DMatrix::from_fn(2 * n, 2 * n, |i, j| self.rep().form(i, j) as f64))
    }

    /// Scalar C_𝔤 with ρ_V(c_𝔤) = C_𝔤·Id.
    pub fn casimir_constant_exact(&self) -> Q {
        let n = self.n as i64;
        match self.family {
            GroupFamily::Orthogonal => Q::new((-(n - 1)).into(), n.into()),
            GroupFamily::Symplectic => Q::new((-(2 * n + 1)).into(), (2 * n).into()),
            GroupFamily::Unitary => -Q::one(),
        }
    }

    pub fn casimir_constant(&self) -> f64 {
        self.casimir_constant_exact().to_f64()
    }

    /// Dimension of the Lie algebra.
    pub fn lie_dim(&self) -> usize {
        let n = self.n;
        match self.family {
            GroupFamily::Orthogonal => n * (n - 1) / 2,
            GroupFamily::Symplectic => n * (2 * n + 1),
            GroupFamily::Unitary => n * n,
        }
    }

    /// Number of tensor factors (n, m) allowed for this family.
    pub fn check_degrees(&self, n: usize, m: usize) -> Result<()> {
        if m > 0 && self.family != GroupFamily::Unitary {
            return Err(Error::Unsupported(format!("{self} takes no conjugate factors")));
        }
        let side = (self.dim_v() as u128).pow((n + m) as u32);
        if side > MAX_TENSOR_SIDE as u128 {
            return Err(Error::SizeGuard(format!(
                "tensor side {}^{} exceeds {MAX_TENSOR_SIDE}",
                self.dim_v(),
                n + m
            )));
        }
        Ok(())
    }
}

/// Dense endomorphism of V^{⊗n} ⊗ V̄^{⊗m} with multi-index access.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentTensor<T: Scalar> {
    dim: usize,
    n: usize,
    m: usize,
    data: DMatrix<T>,
}

impl<T: Scalar> MomentTensor<T> {
    pub fn from_matrix(dim: usize, n: usize, m: usize, data: DMatrix<T>) -> Result<Self> {
        let side = dim.pow((n + m) as u32);
        if data.nrows() != side || data.ncols() != side {
            return Err(Error::SizeMismatch(format!(
                "matrix {}×{} for side {side}",
                data.nrows(),
                data.ncols()
            )));
        }
        Ok(MomentTensor { dim, n, m, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn side(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<T> {
        self.data
    }

    /// Flat index of a 1-based multi-index (big-endian).
    pub fn flat_index(&self, idx: &[usize]) -> Result<usize> {
        if idx.len() != self.n + self.m {
            return Err(Error::SizeMismatch(format!(
                "index tuple of length {} for {} factors",
                idx.len(),
                self.n + self.m
            )));
        }
        let mut flat = 0;
        for &i in idx {
            if i == 0 || i > self.dim {
                return Err(Error::IndexOutOfRange { index: i, max: self.dim });
            }
            flat = flat * self.dim + (i - 1);
        }
        Ok(flat)
    }

    /// 1-based multi-index of a flat index.
    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let k = self.n + self.m;
        let mut out = vec![0; k];
        for slot in (0..k).rev() {
            out[slot] = flat % self.dim + 1;
            flat /= self.dim;
        }
        out
    }

    /// Entry (I, J): row multi-index I, column multi-index J.
    pub fn entry(&self, i: &[usize], j: &[usize]) -> Result<T> {
        Ok(self.data[(self.flat_index(i)?, self.flat_index(j)?)].clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> MomentTensor<U> {
        MomentTensor {
            dim: self.dim,
            n: self.n,
            m: self.m,
            data: self.data.map(|x| f(&x)),
        }
    }
}

impl<T: Coeff> MomentTensor<T> {
    pub fn to_f64(&self) -> MomentTensor<f64> {
        self.map(|x| x.to_f64())
    }
}

impl MomentTensor<f64> {
    pub fn identity(dim: usize, n: usize, m: usize) -> Self {
        let side = dim.pow((n + m) as u32);
        MomentTensor {
            dim,
            n,
            m,
            data: DMatrix::identity(side, side),
        }
    }

    pub fn max_abs_diff(&self, other: &MomentTensor<f64>) -> f64 {
        assert_eq!(self.data.shape(), other.data.shape(), "tensor shapes differ");
        self.data.iter().zip(other.data.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    pub fn mul(&self, other: &MomentTensor<f64>) -> MomentTensor<f64> {
        MomentTensor {
            dim: self.dim,
            n: self.n,
            m: self.m,
            data: &self.data * &other.data,
        }
    }
}

impl MomentTensor<Q> {
    /// Exact matrix product.
    pub fn mul_exact(&self, other: &MomentTensor<Q>) -> MomentTensor<Q> {
        let side = self.side();
        let mut data = DMatrix::from_element(side, side, Q::zero());
        for i in 0..side {
            for k in 0..side {
                let a = &self.data[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..side {
                    let b = &other.data[(k, j)];
                    if !b.is_zero() {
                        data[(i, j)] += a * b;
                    }
                }
            }
        }
        MomentTensor {
            dim: self.dim,
            n: self.n,
            m: self.m,
            data,
        }
    }
}

/// Nonzero entries (row, column, value) of ρ(d) for a single diagram.
pub fn diagram_entries(d: &BrauerDiagram, rep: Rep) -> Vec<(usize, usize, i8)> {
    let n = d.degree();
    let dim = rep.dim();
    let pairs = d.pairs();
    let caps: Vec<(usize, usize)> = pairs.iter().filter(|&&(_, b)| b <= n).map(|&(a, b)| (a - 1, b - 1)).collect();
    let cups: Vec<(usize, usize)> = pairs
        .iter()
        .filter(|&&(a, _)| a > n)
        .map(|&(a, b)| (a - 1 - n, b - 1 - n))
        .collect();
    let through: Vec<(usize, usize)> = (0..n)
        .filter_map(|x| {
            let p = d.partner(x + 1) - 1;
            (p >= n).then(|| (x, p - n))
        })
        .collect();
    let k = caps.len();

    let sign: i8 = if rep.signed() {
        // d = σ·(τ_{1,2}⋯τ_{2k−1,2k})·σ′ with caps/cups sent to adjacent slots
        let mut sp = vec![0u8; n];
        let mut sg = vec![0u8; n];
        for (j, &(x, y)) in caps.iter().enumerate() {
            sp[x] = (2 * j) as u8;
            sp[y] = (2 * j + 1) as u8;
        }
        for (j, &(u, v)) in cups.iter().enumerate() {
            sg[2 * j] = u as u8;
            sg[2 * j + 1] = v as u8;
        }
        for (j, &(x, o)) in through.iter().enumerate() {
            sp[x] = (2 * k + j) as u8;
            sg[2 * k + j] = o as u8;
        }
        let eps = Permutation::from_zero_based(sp).signature() * Permutation::from_zero_based(sg).signature();
        (eps * if k.is_multiple_of(2) { 1 } else { -1 }) as i8
    } else {
        1
    };

    let total = dim.pow(n as u32);
    let pow: Vec<usize> = (0..n).map(|slot| dim.pow((n - 1 - slot) as u32)).collect();
    let mut out = Vec::new();
    let mut input = vec![0usize; n];
    let mut output = vec![0usize; n];
    for col in 0..total {
        let mut rem = col;
        for slot in 0..n {
            input[slot] = rem / pow[slot];
            rem %= pow[slot];
        }
        let mut val = sign;
        for &(x, y) in &caps {
            val *= rep.form(input[x], input[y]);
            if val == 0 {
                break;
            }
        }
        if val == 0 {
            continue;
        }
        for &(x, o) in &through {
            output[o] = input[x];
        }
        // enumerate the cup labels
        let combos = dim.pow(k as u32);
        for c in 0..combos {
            let mut rem = c;
            let mut v = val;
            for &(u, w) in &cups {
                let label = rem % dim;
                rem /= dim;
                let (partner, f) = rep.form_partner(label);
                output[u] = label;
                output[w] = partner;
                v *= f;
            }
            let row: usize = output.iter().zip(&pow).map(|(i, p)| i * p).sum();
            out.push((row, col, v));
        }
    }
    out
}

/// ρ(a) for the chosen representation; the element's z must match.
pub fn rho<C: Coeff>(a: &BrauerElement<C>, rep: Rep, n: usize, m: usize) -> Result<MomentTensor<C>> {
    if *a.z() != rep.z() {
        return Err(Error::ParameterMismatch {
            element: format!("z = {}", a.z()),
            expected: format!("z = {}", rep.z()),
        });
    }
    if n + m != a.degree() {
        return Err(Error::DegreeMismatch {
            left: a.degree(),
            right: n + m,
        });
    }
    let side = (rep.dim() as u128).pow(a.degree() as u32);
    if side > MAX_TENSOR_SIDE as u128 {
        return Err(Error::SizeGuard(format!("tensor side {side} exceeds {MAX_TENSOR_SIDE}")));
    }
    let side = side as usize;
    let mut data = DMatrix::from_element(side, side, C::zero());
    for (d, c) in a.terms() {
        for (r, col, v) in diagram_entries(d, rep) {
            let term = if v > 0 { c.clone() } else { -c.clone() };
            data[(r, col)] += term;
        }
    }
    MomentTensor::from_matrix(rep.dim(), n, m, data)
}

pub fn rho_o<C: Coeff>(a: &BrauerElement<C>, big_n: usize) -> Result<MomentTensor<C>> {
    rho(a, Rep::O(big_n), a.degree(), 0)
}

pub fn rho_s<C: Coeff>(a: &BrauerElement<C>, big_n: usize) -> Result<MomentTensor<C>> {
    rho(a, Rep::S(big_n), a.degree(), 0)
}

/// ρ_O on V^{⊗n} ⊗ V̄^{⊗m}.
pub fn rho_walled<C: Coeff>(a: &BrauerElement<C>, big_n: usize, n: usize, m: usize) -> Result<MomentTensor<C>> {
    rho(a, Rep::O(big_n), n, m)
}

/// Representation of an element for a group, with the conjugate split for U.
pub fn rho_group<C: Coeff>(a: &BrauerElement<C>, g: &GroupSpec, n: usize, m: usize) -> Result<MomentTensor<C>> {
    g.check_degrees(n, m)?;
    rho(a, g.rep(), n, m)
}

/// w_π = ε(σ)P_σ w_{π₀} where w_{π₀} = Σ J_{i1,i2}⋯J_{i_{2p−1},i_{2p}} e_{i1}⊗⋯⊗e_{i_{2p}}.
pub fn sp_invariant_vector(pi: &Pairing, sigma: &Permutation, big_n: usize) -> Result<DVector<f64>> {
    let points = pi.points();
    if sigma.degree() != points {
        return Err(Error::DegreeMismatch {
            left: points,
            right: sigma.degree(),
        });
    }
    if Pairing::standard(points / 2).apply(sigma) != *pi {
        return Err(Error::InvalidPairing("σ(π₀) ≠ π".into()));
    }
    let rep = Rep::S(big_n);
    let dim = rep.dim();
    let p = points / 2;
    let mut v = DVector::zeros(dim.pow(points as u32));
    let eps = sigma.signature() as f64;
    // each pair k of π₀ carries (a, J-partner of a); slot σ(k) receives index of k
    for c in 0..dim.pow(p as u32) {
        let mut rem = c;
        let mut idx = vec![0usize; points];
        let mut val = eps;
        for k in 0..p {
            let a = rem % dim;
            rem /= dim;
            let (b, f) = rep.form_partner(a);
            idx[sigma.apply0(2 * k)] = a;
            idx[sigma.apply0(2 * k + 1)] = b;
            val *= f as f64;
        }
        let flat = idx.iter().fold(0, |acc, &i| acc * dim + i);
        v[flat] += val;
    }
    Ok(v)
}

/// ρ(c_𝔤) on V^{⊗n} ⊗ V̄^{⊗m}, as 2ρ(Δ), exactly.
pub fn casimir_matrix(g: &GroupSpec, n: usize, m: usize) -> Result<MomentTensor<Q>> {
    g.check_degrees(n, m)?;
    let z = g.brauer_z();
    let delta = match g.family {
        GroupFamily::Unitary => casimir_delta_walled(n, m, &z)?,
        _ => casimir_delta(n, &z)?,
    };
    let t = rho(&delta.scale(&qi(2)), g.rep(), n, m)?;
    Ok(t)
}

/// Casimir Brauer element Δ for the group (walled for U).
pub fn casimir_element(g: &GroupSpec, n: usize, m: usize) -> Result<BrauerElement> {
    g.check_degrees(n, m)?;
    let z = g.brauer_z();
    match g.family {
        GroupFamily::Unitary => casimir_delta_walled(n, m, &z),
        _ => casimir_delta(n, &z),
    }
}

/// g^{⊗n} ⊗ ḡ^{⊗m}.
pub fn tensor_power(g: &DMatrix<Complex64>, n: usize, m: usize) -> DMatrix<Complex64> {
    let mut acc = DMatrix::from_element(1, 1, Complex64::one());
    for _ in 0..n {
        acc = acc.kronecker(g);
    }
    let conj = g.map(|x| x.conj());
    for _ in 0..m {
        acc = acc.kronecker(&conj);
    }
    acc
}
