//! Brownian moments E[G_t^{⊗n}] as Brauer elements: the function s_t,
//! complete symmetric polynomials in commuting elements, and the elements
//! ℐ^k_{n,t}(z), ℐ^k_{n,m,t}(z).

use std::ops::{Add, Mul};

use nalgebra::DMatrix;
use num_traits::Zero;

use crate::brauer::{casimir_delta, casimir_delta_walled, tau_interval, tau_tilde, BrauerElement};
use crate::coeff::{q_to_f64, qi, Q};
use crate::error::{Error, Result};
use crate::linalg::expm_real;
use crate::perm::{conjugation_average, GroupAlgebraElement, Subgroup};
use crate::spectral::{CommutingFamily, Kernel};
use crate::tensor_rep::{casimir_matrix, rho, GroupFamily, GroupSpec, MomentTensor};

/// Largest Brauer degree handled by the moment formulas.
pub const MAX_HEAT_DEGREE: usize = 6;

/// Truncation control for the power-series route.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeatParams {
    pub t: f64,
    pub truncation_tol: f64,
    /// bound B on the norms of the arguments
    pub series_bound: f64,
}

impl HeatParams {
    pub fn new(t: f64, truncation_tol: f64, series_bound: f64) -> Result<Self> {
        if !(t >= 0.0) || !(truncation_tol > 0.0) || !(series_bound >= 0.0) {
            return Err(Error::Unsupported("t ≥ 0, tol > 0, bound ≥ 0 required".into()));
        }
        Ok(HeatParams {
            t,
            truncation_tol,
            series_bound,
        })
    }

    /// Smallest R with Σ_{r>R} t^{r+k}/(r+k)! · B^r · C(r+k, k) < tol, for
    /// k+1 arguments.
    pub fn truncation_order(&self, k: usize) -> usize {
        // tail term ratio: t·B·(r+k+1)/((r+1)(r+k+1)) = t·B/(r+1)
        let (t, b) = (self.t, self.series_bound);
        let mut term = t.powi(k as i32) / factorial_f64(k);
        let mut r = 0usize;
        loop {
            let next_ratio = t * b / (r as f64 + 1.0);
            let next = term * next_ratio;
            // geometric bound on the tail once the ratio is below 1/2
            if next_ratio < 0.5 && 2.0 * next < self.truncation_tol {
                return r;
            }
            term = next;
            r += 1;
            if r > 10_000 {
                return r;
            }
        }
    }
}

fn factorial_f64(n: usize) -> f64 {
    (1..=n).map(|x| x as f64).product()
}

/// Divided difference of x ↦ e^{−tx} at the given nodes.
fn exp_divided_difference(t: f64, xs: &[f64]) -> f64 {
    let k = xs.len() - 1;
    if k == 0 {
        return (-t * xs[0]).exp();
    }
    let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if t * (hi - lo) <= 2.0 {
        taylor_divided_difference(t, xs)
    } else {
        opitz_divided_difference(t, xs)
    }
}

/// Taylor expansion about the mean: f[x] = e^{−tc} Σ_m (−1)^m t^k h_{m−k}(y)/m!,
/// y_i = t(x_i − c).
fn taylor_divided_difference(t: f64, xs: &[f64]) -> f64 {
    let k = xs.len() - 1;
    let c = xs.iter().sum::<f64>() / xs.len() as f64;
    let ys: Vec<f64> = xs.iter().map(|x| t * (x - c)).collect();
    // |y_i| ≤ 2, so 80 terms exhaust double precision
    let max_j = 80;
    let mut h = vec![0.0; max_j + 1];
    h[0] = 1.0;
    for &y in &ys {
        for j in 1..=max_j {
            h[j] += y * h[j - 1];
        }
    }
    let mut total = 0.0;
    let mut inv_fact = 1.0 / factorial_f64(k);
    for j in 0..=max_j {
        let m = j + k;
        if j > 0 {
            inv_fact /= m as f64;
        }
        let term = if m.is_multiple_of(2) { 1.0 } else { -1.0 } * h[j] * inv_fact;
        total += term;
    }
    (-t * c).exp() * t.powi(k as i32) * total
}

/// Opitz: f[x_0..x_k] is the (k, 0) entry of f(A), A lower bidiagonal with
/// diagonal x and unit subdiagonal.
fn opitz_divided_difference(t: f64, xs: &[f64]) -> f64 {
    let n = xs.len();
    let a = DMatrix::from_fn(n, n, |r, c| {
        if r == c {
            -t * xs[r]
        } else if r == c + 1 {
            -t
        } else {
            0.0
        }
    });
    expm_real(&a)[(n - 1, 0)]
}

/// s_t(z_1, …, z_{k+1}) = (−1)^k Σ_r (−t)^{r+k}/(r+k)! h_r(z), evaluated
/// stably as (−1)^k times the divided difference of e^{−tx}.
pub fn s_t_scalar(t: f64, args: &[f64]) -> f64 {
    if args.is_empty() {
        return 0.0;
    }
    let k = args.len() - 1;
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * exp_divided_difference(t, args)
}

/// Determinant form ∏_{i<j}(z_j − z_i)⁻¹ det(z^{k−2}, …, 1, e^{−tz}),
/// multiplied by the column-order sign so that it agrees with the series.
pub fn s_t_determinant(t: f64, args: &[f64]) -> Result<f64> {
    let k = args.len();
    if k < 2 {
        return Err(Error::Unsupported("determinant form needs at least two arguments".into()));
    }
    let mut vandermonde = 1.0;
    for i in 0..k {
        for j in i + 1..k {
            vandermonde *= args[j] - args[i];
        }
    }
    if vandermonde == 0.0 {
        return Err(Error::Unsupported("coinciding arguments".into()));
    }
    let m = DMatrix::from_fn(k, k, |r, c| {
        if c == k - 1 {
            (-t * args[r]).exp()
        } else {
            args[r].powi((k - 2 - c) as i32)
        }
    });
    let literal = m.determinant() / vandermonde;
    let e = (k - 1) + (k - 1) * (k - 2) / 2;
    Ok(if e.is_multiple_of(2) { literal } else { -literal })
}

/// Truncated series (−1)^k Σ_{r≤R} (−t)^{r+k}/(r+k)! h_r(z) with R from
/// `params`; `params.series_bound` must dominate max |z_i|.
pub fn s_t_series(params: &HeatParams, args: &[f64]) -> f64 {
    if args.is_empty() {
        return 0.0;
    }
    let k = args.len() - 1;
    let r_max = params.truncation_order(k);
    let t = params.t;
    let mut h = vec![0.0; r_max + 1];
    h[0] = 1.0;
    for &z in args {
        for j in 1..=r_max {
            h[j] += z * h[j - 1];
        }
    }
    let mut total = 0.0;
    let mut coef = (-t).powi(k as i32) / factorial_f64(k);
    for (r, hr) in h.iter().enumerate() {
        if r > 0 {
            coef *= -t / (r + k) as f64;
        }
        total += coef * hr;
    }
    if k.is_multiple_of(2) {
        total
    } else {
        -total
    }
}

/// s_t with the route chosen by the argument gaps: the determinant form when
/// every pairwise gap exceeds 1e−6 and the determinant is well conditioned
/// (k ≤ 3, t·spread ≤ 30), otherwise the stable divided-difference route.
pub fn s_t_auto(t: f64, args: &[f64]) -> f64 {
    let k = args.len();
    if (2..=3).contains(&k) {
        let mut gap = f64::INFINITY;
        for i in 0..k {
            for j in i + 1..k {
                gap = gap.min((args[i] - args[j]).abs());
            }
        }
        let spread = args.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - args.iter().cloned().fold(f64::INFINITY, f64::min);
        if gap > 1e-6 && gap > 1e-2 * spread && t * spread <= 30.0 {
            if let Ok(v) = s_t_determinant(t, args) {
                return v;
            }
        }
    }
    s_t_scalar(t, args)
}

fn h_r_generic<T>(r: usize, elems: &[T], one: &T, zero: &T) -> T
where
    T: Clone,
    for<'a> &'a T: Add<&'a T, Output = T> + Mul<&'a T, Output = T>,
{
    // h[j] holds h_j of the variables processed so far
    let mut h: Vec<T> = (0..=r).map(|j| if j == 0 { one.clone() } else { zero.clone() }).collect();
    for x in elems {
        for j in 1..=r {
            let prod = x * &h[j - 1];
            h[j] = &h[j] + &prod;
        }
    }
    h.swap_remove(r)
}

/// h_r(x_1, …, x_k) for commuting Brauer elements, by
/// h_r^{(k)} = h_r^{(k−1)} + x_k h_{r−1}^{(k)}.
pub fn h_r_commuting(r: usize, elems: &[BrauerElement]) -> Result<BrauerElement> {
    let Some(first) = elems.first() else {
        return Err(Error::Unsupported("empty argument list".into()));
    };
    for x in elems {
        if x.degree() != first.degree() || x.z() != first.z() {
            return Err(Error::DegreeMismatch {
                left: first.degree(),
                right: x.degree(),
            });
        }
    }
    if cfg!(debug_assertions) {
        check_commuting(elems, |a, b| a.commutes_with(b))?;
    }
    let one = BrauerElement::identity(first.degree(), first.z().clone());
    let zero = BrauerElement::zero(first.degree(), first.z().clone());
    Ok(h_r_generic(r, elems, &one, &zero))
}

/// h_r over commuting group algebra elements.
pub fn h_r_group(r: usize, elems: &[GroupAlgebraElement]) -> Result<GroupAlgebraElement> {
    let Some(first) = elems.first() else {
        return Err(Error::Unsupported("empty argument list".into()));
    };
    if cfg!(debug_assertions) {
        check_commuting(elems, |a, b| a.commutes_with(b))?;
    }
    let n = first.degree();
    Ok(h_r_generic(r, elems, &GroupAlgebraElement::identity(n), &GroupAlgebraElement::zero(n)))
}

fn check_commuting<T>(elems: &[T], commutes: impl Fn(&T, &T) -> bool) -> Result<()> {
    for i in 0..elems.len() {
        for j in i + 1..elems.len() {
            if !commutes(&elems[i], &elems[j]) {
                return Err(Error::NotCommuting(format!("arguments {i} and {j}")));
            }
        }
    }
    Ok(())
}

/// Crude l¹ bound on Z_i(z): |1 − z⁻¹|·i/2 + |z|⁻¹·i(i−1)/2.
pub fn z_norm_bound(i: usize, z: f64) -> f64 {
    let i = i as f64;
    (1.0 - 1.0 / z).abs() * i / 2.0 + i * (i - 1.0) / (2.0 * z.abs())
}

/// s_t(x_1..x_{k+1}) on commuting group algebra elements by the truncated
/// power series; the l¹ norm bound of the arguments sets the order.
pub fn s_t_operator_series(t: f64, elems: &[GroupAlgebraElement], tol: f64) -> Result<GroupAlgebraElement<f64>> {
    let Some(first) = elems.first() else {
        return Err(Error::Unsupported("empty argument list".into()));
    };
    if cfg!(debug_assertions) {
        check_commuting(elems, |a, b| a.commutes_with(b))?;
    }
    let n = first.degree();
    let bound = elems.iter().map(|x| x.l1_norm()).fold(0.0, f64::max);
    let params = HeatParams::new(t, tol, bound)?;
    let k = elems.len() - 1;
    let r_max = params.truncation_order(k);
    let fe: Vec<GroupAlgebraElement<f64>> = elems.iter().map(|x| x.to_f64()).collect();
    let one = GroupAlgebraElement::<f64>::identity(n);
    let zero = GroupAlgebraElement::<f64>::zero(n);
    let mut h: Vec<GroupAlgebraElement<f64>> = (0..=r_max).map(|j| if j == 0 { one.clone() } else { zero.clone() }).collect();
    for x in &fe {
        for j in 1..=r_max {
            let prod = x * &h[j - 1];
            h[j] = &h[j] + &prod;
        }
    }
    let mut total = zero;
    let mut coef = (-t).powi(k as i32) / factorial_f64(k);
    for (r, hr) in h.iter().enumerate() {
        if r > 0 {
            coef *= -t / (r + k) as f64;
        }
        total = &total + &hr.scale(&coef);
    }
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    Ok(total.scale(&sign))
}

/// s_t(Z_{i_0}, …, Z_{i_k}) in ℂ[S_n] by joint spectral calculus; sectors
/// killed by `kernel` are dropped.
pub fn s_t_z_family(t: f64, indices: &[usize], z: &Q, n: usize, kernel: Kernel) -> Result<GroupAlgebraElement<f64>> {
    let fam = CommutingFamily::z_family(indices, z, n, kernel)?;
    Ok(fam.apply(|v| s_t_scalar(t, v)))
}

/// Which Brauer representation the elements are destined for; selects the
/// spectral sectors that can be dropped.
pub fn kernel_for(g: &GroupSpec) -> Kernel {
    match g.family {
        GroupFamily::Symplectic => Kernel::MaxFirstPart(2 * g.n),
        _ => Kernel::MaxLength(g.n),
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Unsupported(format!("t = {t} must be a finite non-negative real")));
    }
    Ok(())
}

/// ℐ^k_{n,t}(z) = (1/(2^k z^k (n−2k)!)) Σ_σ σ s_t(Z_{n−2k}, …, Z_n) τ_{[n−2k+1,n]} σ⁻¹.
pub fn bm_moment_term(n: usize, k: usize, z: &Q, t: f64, kernel: Kernel) -> Result<BrauerElement<f64>> {
    check_t(t)?;
    if z.is_zero() {
        return Err(Error::ZeroParameter);
    }
    if 2 * k > n {
        return Err(Error::IndexOutOfRange { index: k, max: n / 2 });
    }
    if n > MAX_HEAT_DEGREE {
        return Err(Error::SizeGuard(format!("degree {n} exceeds {MAX_HEAT_DEGREE}")));
    }
    if n == 0 {
        return Ok(BrauerElement::identity(0, z.clone()));
    }
    let indices: Vec<usize> = (0..=k).map(|j| n - 2 * k + 2 * j).collect();
    let f = s_t_z_family(t, &indices, z, n, kernel)?;
    let mut x = BrauerElement::from_group_element(&f, z.clone());
    if k > 0 {
        let tau = BrauerElement::<f64>::from_diagram(tau_interval(n - 2 * k + 1, n, n)?, z.clone());
        x = x.try_mul(&tau)?;
    }
    let norm = (qi(1 << k) * crate::coeff::q_pow(z, k as u32) * factorial_q(n - 2 * k)).recip();
    conjugation_average(&x, &Subgroup::Symmetric(n), &norm)
}

/// ℐ_{n,t}(z) = Σ_{0≤2k≤n} ℐ^k_{n,t}(z).
pub fn bm_moment_element_with(n: usize, z: &Q, t: f64, kernel: Kernel) -> Result<BrauerElement<f64>> {
    let mut total = BrauerElement::<f64>::zero(n, z.clone());
    for k in 0..=n / 2 {
        total = total.try_add(&bm_moment_term(n, k, z, t, kernel)?)?;
    }
    Ok(total)
}

/// ℐ_{n,t}(z) in B_n(z), keeping every spectral sector.
pub fn bm_moment_element(n: usize, z: &Q, t: f64) -> Result<BrauerElement<f64>> {
    bm_moment_element_with(n, z, t, Kernel::None)
}

fn factorial_q(n: usize) -> Q {
    qi((1..=n as i64).product())
}

/// ℐ^k_{n,m,t}(z) = (1/(z^k (n−k)! (m−k)!)) Σ_{σ∈S_n×S_m} σ s_t(Y_{C_0}, …, Y_{C_k}) τ̃ σ⁻¹,
/// C_j = {1..n−k+j} ∪ {n+1..n+m−k+j}; τ̃ contracts the last k V slots with
/// the last k V̄ slots.
pub fn bm_moment_term_walled(n: usize, m: usize, k: usize, z: &Q, t: f64, kernel: Kernel) -> Result<BrauerElement<f64>> {
    check_t(t)?;
    if z.is_zero() {
        return Err(Error::ZeroParameter);
    }
    if k > n.min(m) {
        return Err(Error::IndexOutOfRange { index: k, max: n.min(m) });
    }
    if n + m > MAX_HEAT_DEGREE {
        return Err(Error::SizeGuard(format!("degree {} exceeds {MAX_HEAT_DEGREE}", n + m)));
    }
    if n + m == 0 {
        return Ok(BrauerElement::identity(0, z.clone()));
    }
    let sets: Vec<(usize, usize)> = (0..=k).map(|j| (n - k + j, m - k + j)).collect();
    let fam = CommutingFamily::y_family(&sets, z, n, m, kernel)?;
    let f = fam.apply(|v| s_t_scalar(t, v));
    let mut x = BrauerElement::from_group_element(&f, z.clone());
    if k > 0 {
        let tau = BrauerElement::<f64>::from_diagram(tau_tilde(k, n, m)?, z.clone());
        x = x.try_mul(&tau)?;
    }
    let norm = (crate::coeff::q_pow(z, k as u32) * factorial_q(n - k) * factorial_q(m - k)).recip();
    conjugation_average(&x, &Subgroup::Product(n, m), &norm)
}

pub fn bm_moment_element_walled_with(n: usize, m: usize, z: &Q, t: f64, kernel: Kernel) -> Result<BrauerElement<f64>> {
    let mut total = BrauerElement::<f64>::zero(n + m, z.clone());
    for k in 0..=n.min(m) {
        total = total.try_add(&bm_moment_term_walled(n, m, k, z, t, kernel)?)?;
    }
    Ok(total)
}

/// ℐ_{n,m,t}(z) in B_{n,m}(z), keeping every spectral sector.
pub fn bm_moment_element_walled(n: usize, m: usize, z: &Q, t: f64) -> Result<BrauerElement<f64>> {
    bm_moment_element_walled_with(n, m, z, t, Kernel::None)
}

/// E[G_t^{⊗n} ⊗ Ḡ_t^{⊗m}] from the Brauer formula.
pub fn bm_moment_tensor(g: &GroupSpec, n: usize, m: usize, t: f64) -> Result<MomentTensor<f64>> {
    g.check_degrees(n, m)?;
    let z = g.brauer_z();
    let kernel = kernel_for(g);
    let element = match g.family {
        GroupFamily::Unitary => bm_moment_element_walled_with(n, m, &z, t, kernel)?,
        _ => bm_moment_element_with(n, &z, t, kernel)?,
    };
    rho(&element, g.rep(), n, m)
}

/// exp(t·ρ(Δ)) with ρ(Δ) = ρ(c_𝔤)/2, by dense matrix exponential.
pub fn expm_moment_tensor(g: &GroupSpec, n: usize, m: usize, t: f64) -> Result<MomentTensor<f64>> {
    check_t(t)?;
    let c = casimir_matrix(g, n, m)?.to_f64();
    let a = c.matrix() * (t / 2.0);
    MomentTensor::from_matrix(g.dim_v(), n, m, expm_real(&a))
}

/// Entry E[(G_t)_{i_1 j_1} ⋯ (Ḡ_t)_{…}] of the moment tensor; 1-based tuples,
/// the n unconjugated slots first.
pub fn entrywise_bm_moment(g: &GroupSpec, n: usize, m: usize, i: &[usize], j: &[usize], t: f64) -> Result<f64> {
    if i.len() != n + m || j.len() != n + m {
        return Err(Error::SizeMismatch(format!(
            "index tuples of lengths {} and {} for {} factors",
            i.len(),
            j.len(),
            n + m
        )));
    }
    bm_moment_tensor(g, n, m, t)?.entry(i, j)
}

/// (z^k P_{M_k}(Δ^r), closed form via h_{r−k}(Z_{n−2k}, …, Z_n)), both exact.
pub fn power_projection_check(n: usize, k: usize, r: usize, z: &Q) -> Result<(BrauerElement, BrauerElement)> {
    if 2 * k > n {
        return Err(Error::IndexOutOfRange { index: k, max: n / 2 });
    }
    let delta = casimir_delta(n, z)?;
    let direct = delta.pow(r as u32).project_mk(k).scale(&crate::coeff::q_pow(z, k as u32));
    if r < k {
        return Ok((direct, BrauerElement::zero(n, z.clone())));
    }
    let zs: Vec<GroupAlgebraElement> = (0..=k)
        .map(|j| {
            let i = n - 2 * k + 2 * j;
            if i == 0 {
                Ok(GroupAlgebraElement::zero(n))
            } else {
                crate::brauer::z_group_element(&(1..=i).collect::<Vec<_>>(), z, n)
            }
        })
        .collect::<Result<_>>()?;
    let h = h_r_group(r - k, &zs)?;
    let mut x = BrauerElement::from_group_element(&h, z.clone());
    if k > 0 {
        x = x.try_mul(&BrauerElement::from_diagram(tau_interval(n - 2 * k + 1, n, n)?, z.clone()))?;
    }
    let sign = if (r - k).is_multiple_of(2) { qi(1) } else { qi(-1) };
    let norm = sign / (qi(1 << k) * factorial_q(n - 2 * k));
    let closed = conjugation_average(&x, &Subgroup::Symmetric(n), &norm)?;
    Ok((direct, closed))
}

/// Walled analog with Δ_{B_{n,m}} and h_{r−k}(Y_{C_0}, …, Y_{C_k}).
pub fn power_projection_check_walled(n: usize, m: usize, k: usize, r: usize, z: &Q) -> Result<(BrauerElement, BrauerElement)> {
    if k > n.min(m) {
        return Err(Error::IndexOutOfRange { index: k, max: n.min(m) });
    }
    let delta = casimir_delta_walled(n, m, z)?;
    let direct = delta.pow(r as u32).project_mk(k).scale(&crate::coeff::q_pow(z, k as u32));
    if r < k {
        return Ok((direct, BrauerElement::zero(n + m, z.clone())));
    }
    let ys: Vec<GroupAlgebraElement> = (0..=k)
        .map(|j| {
            let set = crate::brauer::y_index_set(n, m, k, j);
            if set.is_empty() {
                Ok(GroupAlgebraElement::zero(n + m))
            } else {
                crate::brauer::y_group_element(&set, z, n, m)
            }
        })
        .collect::<Result<_>>()?;
    let h = h_r_group(r - k, &ys)?;
    let mut x = BrauerElement::from_group_element(&h, z.clone());
    if k > 0 {
        x = x.try_mul(&BrauerElement::from_diagram(tau_tilde(k, n, m)?, z.clone()))?;
    }
    let sign = if (r - k).is_multiple_of(2) { qi(1) } else { qi(-1) };
    let norm = sign / (factorial_q(n - k) * factorial_q(m - k));
    let closed = conjugation_average(&x, &Subgroup::Product(n, m), &norm)?;
    Ok((direct, closed))
}

/// Spectral norm of a real matrix.
pub fn operator_norm(a: &DMatrix<f64>) -> f64 {
    a.clone().singular_values().iter().cloned().fold(0.0, f64::max)
}

/// Smallest eigenvalue of the symmetric part of ρ(x).
pub fn min_eigenvalue(a: &DMatrix<f64>) -> f64 {
    let sym = (a + a.transpose()) * 0.5;
    sym.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
}

/// z as a float, for callers that mix exact and floating parameters.
pub fn z_f64(z: &Q) -> f64 {
    q_to_f64(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::q;
    use crate::tensor_rep::rho_o;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn s_t_examples() {
        assert_eq!(s_t_scalar(0.0, &[1.0, 2.0]), 0.0);
        assert!(close(s_t_scalar(0.0, &[1.0, 2.0, 5.0]), 0.0, 1e-15));
        let e = (-1f64).exp() - (-2f64).exp();
        assert!(close(s_t_scalar(1.0, &[1.0, 2.0]), e, 1e-15));
        assert!(close(s_t_determinant(1.0, &[1.0, 2.0]).unwrap(), e, 1e-15));
        // literal determinant sign is opposite for two arguments
        let lit = ((-2f64).exp() - (-1f64).exp()) / 1.0;
        assert!(close(-s_t_determinant(1.0, &[1.0, 2.0]).unwrap(), lit, 1e-15));
        assert!(close(s_t_scalar(3.0, &[0.7]), (-2.1f64).exp(), 1e-15));
    }

    #[test]
    fn s_t_routes_agree() {
        let cases: [&[f64]; 5] = [&[0.3, 1.1], &[0.2, 0.9, 1.7], &[1.0, 2.5, 4.0, 0.5], &[0.0, 0.75, 1.25], &[2.0, 3.0]];
        for args in cases {
            for t in [0.1, 0.5, 1.0, 2.0] {
                let stable = s_t_scalar(t, args);
                let det = s_t_determinant(t, args).unwrap();
                let bound = args.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
                let series = s_t_series(&HeatParams::new(t, 1e-14, bound).unwrap(), args);
                assert!(close(stable, det, 1e-11), "{args:?} t={t}: {stable} vs {det}");
                assert!(close(stable, series, 1e-11), "{args:?} t={t}: {stable} vs {series}");
                assert!(close(stable, s_t_auto(t, args), 1e-11));
            }
        }
        // across the Taylor / Opitz switch
        for t in [1.9, 2.0, 2.1, 5.0, 40.0] {
            let a = [0.0, 0.5, 1.0];
            let d = s_t_determinant(t, &a).unwrap();
            assert!(close(s_t_scalar(t, &a), d, 1e-12), "t={t}");
        }
    }

    #[test]
    fn s_t_confluent_and_limit() {
        // s_t(x, x) = −d/dx e^{−tx} = t e^{−tx}
        let (t, x) = (1.3, 0.8);
        assert!(close(s_t_scalar(t, &[x, x]), t * (-t * x).exp(), 1e-13));
        assert!(close(s_t_scalar(t, &[x, x + 1e-9]), t * (-t * x).exp(), 1e-8));
        // s_t(x_1, …, x_k, 0) → ∏ 1/x_i
        let v = s_t_scalar(200.0, &[0.5, 2.0, 4.0, 0.0]);
        assert!(close(v, 1.0 / (0.5 * 2.0 * 4.0), 1e-12), "{v}");
        let v = s_t_scalar(200.0, &[1.0, 1.0, 0.0]);
        assert!(close(v, 1.0, 1e-12), "{v}");
    }

    #[test]
    fn complete_symmetric_examples() {
        let z = qi(3);
        let a = BrauerElement::scalar(2, z.clone(), qi(2));
        let b = BrauerElement::scalar(2, z.clone(), qi(5));
        assert_eq!(h_r_commuting(0, &[a.clone(), b.clone()]).unwrap(), BrauerElement::identity(2, z.clone()));
        assert_eq!(h_r_commuting(1, &[a.clone(), b.clone()]).unwrap(), &a + &b);
        assert_eq!(
            h_r_commuting(2, &[a.clone(), b.clone()]).unwrap(),
            BrauerElement::scalar(2, z.clone(), qi(4 + 10 + 25))
        );
        let z2 = crate::brauer::z_i(2, &z, 3).unwrap();
        let z3 = crate::brauer::z_i(3, &z, 3).unwrap();
        let h3 = h_r_commuting(3, &[z2.clone(), z3.clone()]).unwrap();
        let brute = &(&(&z2.pow(3) + &(&z2.pow(2) * &z3)) + &(&z2 * &z3.pow(2))) + &z3.pow(3);
        assert_eq!(h3, brute);
        let x = BrauerElement::from_diagram(crate::brauer::tau(3, 1, 2).unwrap(), z.clone());
        let y = BrauerElement::from_diagram(crate::brauer::s(3, 2, 3).unwrap(), z.clone());
        if cfg!(debug_assertions) {
            assert!(matches!(h_r_commuting(2, &[x, y]), Err(Error::NotCommuting(_))));
        }
    }

    #[test]
    fn operator_series_matches_spectral() {
        let z = qi(3);
        for (n, idx) in [(2usize, vec![2usize]), (3, vec![1, 3]), (4, vec![2, 4]), (4, vec![0, 2, 4])] {
            let elems: Vec<GroupAlgebraElement> = idx
                .iter()
                .map(|&i| {
                    if i == 0 {
                        GroupAlgebraElement::zero(n)
                    } else {
                        crate::brauer::z_group_element(&(1..=i).collect::<Vec<_>>(), &z, n).unwrap()
                    }
                })
                .collect();
            for t in [0.0, 0.3, 1.0] {
                let series = s_t_operator_series(t, &elems, 1e-14).unwrap();
                let spectral = s_t_z_family(t, &idx, &z, n, Kernel::None).unwrap();
                let diff = (&series - &spectral).max_abs();
                assert!(diff < 1e-11, "n={n} {idx:?} t={t}: {diff}");
                if idx.len() >= 2 && t == 0.0 {
                    assert!(spectral.max_abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn two_point_spectral_example() {
        // Z_2(N) on ℂ[S_2]: eigenvalue 1 on (2), (N−2)/N on (1,1)
        let big_n = 3;
        let z = qi(big_n);
        let t = 0.7;
        let f = s_t_z_family(t, &[2], &z, 2, Kernel::None).unwrap();
        let sym = (-t).exp();
        let alt = (-t / 3.0).exp();
        let id = crate::perm::Permutation::identity(2);
        let sw = crate::perm::Permutation::transposition(2, 1, 2).unwrap();
        assert!(close(f.coeff(&id), (sym + alt) / 2.0, 1e-14));
        assert!(close(f.coeff(&sw), (sym - alt) / 2.0, 1e-14));
    }

    #[test]
    fn first_moments() {
        for big_n in 2..=4usize {
            let z = qi(big_n as i64);
            let t = 0.9;
            let e = bm_moment_element(1, &z, t).unwrap();
            let expect = (-t * (big_n as f64 - 1.0) / (2.0 * big_n as f64)).exp();
            assert!(close(e.coeff(&crate::brauer::BrauerDiagram::identity(1)), expect, 1e-14));
            let u = bm_moment_tensor(&GroupSpec::unitary(big_n), 1, 0, t).unwrap();
            assert!(close(u.matrix()[(0, 0)], (-t / 2.0).exp(), 1e-14));
            assert!(close(entrywise_bm_moment(&GroupSpec::orthogonal(big_n), 1, 0, &[1], &[1], t).unwrap(), expect, 1e-14));
        }
    }

    #[test]
    fn terms_live_in_their_strata() {
        let z = q(7, 2);
        for n in 1..=4 {
            for k in 0..=n / 2 {
                let term = bm_moment_term(n, k, &z, 0.6, Kernel::None).unwrap();
                for j in 0..=n {
                    if j != k {
                        assert!(term.project_mk(j).max_abs() < 1e-12, "n={n} k={k} j={j}");
                    }
                }
            }
        }
        for (n, m) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            for k in 0..=n.min(m) {
                let term = bm_moment_term_walled(n, m, k, &z, 0.6, Kernel::None).unwrap();
                assert!(term.is_walled(n, m));
                for j in 0..=n + m {
                    if j != k {
                        assert!(term.project_mk(j).max_abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn formula_matches_expm_small() {
        for (g, n, m) in [
            (GroupSpec::orthogonal(2), 2, 0),
            (GroupSpec::orthogonal(3), 3, 0),
            (GroupSpec::symplectic(1), 2, 0),
            (GroupSpec::unitary(2), 1, 1),
            (GroupSpec::unitary(2), 2, 1),
            (GroupSpec::unitary(2), 1, 2),
        ] {
            for t in [0.0, 0.25, 1.0] {
                let a = bm_moment_tensor(&g, n, m, t).unwrap();
                let b = expm_moment_tensor(&g, n, m, t).unwrap();
                assert!(a.max_abs_diff(&b) < 1e-10, "{g} n={n} m={m} t={t}: {}", a.max_abs_diff(&b));
            }
        }
        let id = bm_moment_tensor(&GroupSpec::orthogonal(2), 2, 0, 0.0).unwrap();
        assert!(id.max_abs_diff(&MomentTensor::identity(2, 2, 0)) < 1e-14);
    }

    #[test]
    fn full_element_agrees_with_filtered_under_rho() {
        // without dropping sectors the element is the same after ρ at moderate t
        let z = qi(2);
        let full = bm_moment_element(3, &z, 0.5).unwrap();
        let filtered = bm_moment_element_with(3, &z, 0.5, Kernel::MaxLength(2)).unwrap();
        let a = rho_o(&full, 2).unwrap();
        let b = rho_o(&filtered, 2).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-11);
    }

    #[test]
    fn power_projections() {
        let z = q(5, 2);
        for n in 1..=4 {
            for k in 0..=n / 2 {
                for r in 0..=4 {
                    let (a, b) = power_projection_check(n, k, r, &z).unwrap();
                    assert_eq!(a, b, "n={n} k={k} r={r}");
                }
            }
        }
        for (n, m) in [(1, 1), (2, 1), (2, 2)] {
            for k in 0..=n.min(m) {
                for r in 0..=3 {
                    let (a, b) = power_projection_check_walled(n, m, k, r, &z).unwrap();
                    assert_eq!(a, b, "walled n={n} m={m} k={k} r={r}");
                }
            }
        }
    }

    #[test]
    fn truncation_order_is_certified() {
        let p = HeatParams::new(1.0, 1e-12, 2.0).unwrap();
        let r = p.truncation_order(1);
        let tail: f64 = (r + 1..r + 200)
            .map(|j| p.t.powi((j + 1) as i32) / factorial_f64(j + 1) * p.series_bound.powi(j as i32) * (j + 1) as f64)
            .sum();
        assert!(tail < 1e-11, "R={r} tail={tail}");
    }
}
