//! Monte Carlo oracle: Brownian motion on the group via the multiplicative
//! exponential scheme G ← G·exp(√dt·ξ).

use nalgebra::{DMatrix, SMatrix};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::expm_complex;
use crate::tensor_rep::{tensor_power, GroupFamily, GroupSpec, MomentTensor};

type CMat = DMatrix<Complex64>;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Scale κ of the invariant form ⟨x,y⟩ = −κ·Tr(xy).
pub fn kappa(g: &GroupSpec) -> f64 {
    match g.family {
        GroupFamily::Orthogonal => g.n as f64 / 2.0,
        _ => g.n as f64,
    }
}

/// Orthonormal basis of the Lie algebra, as matrices acting on V.
#[derive(Clone, Debug)]
pub struct AlgebraBasis {
    pub group: GroupSpec,
    pub elements: Vec<CMat>,
}

fn unit(d: usize, k: usize, l: usize) -> CMat {
    let mut m = CMat::zeros(d, d);
    m[(k, l)] = Complex64::new(1.0, 0.0);
    m
}

/// ⟨x,y⟩ for the form used by `basis`.
pub fn inner(g: &GroupSpec, x: &CMat, y: &CMat) -> f64 {
    -kappa(g) * (x * y).trace().re
}

/// Distance of x from 𝔤, measured entrywise on the defining relations.
pub fn algebra_defect(g: &GroupSpec, x: &CMat) -> f64 {
    let mut d = (x + x.adjoint()).camax();
    match g.family {
        GroupFamily::Orthogonal => d = d.max(x.map(|v| v.im).amax()),
        GroupFamily::Symplectic => {
            let j = g.j_matrix().unwrap().map(|v| Complex64::new(v, 0.0));
            d = d.max((x.transpose() * &j + &j * x).camax());
        }
        GroupFamily::Unitary => {}
    }
    d
}

/// Distance of g from the group (unitarity, reality, ᵗSJS = J).
pub fn group_defect(g: &GroupSpec, s: &CMat) -> f64 {
    let d = s.nrows();
    let mut e = (s.adjoint() * s - CMat::identity(d, d)).camax();
    match g.family {
        GroupFamily::Orthogonal => e = e.max(s.map(|v| v.im).amax()),
        GroupFamily::Symplectic => {
            let j = g.j_matrix().unwrap().map(|v| Complex64::new(v, 0.0));
            e = e.max((s.transpose() * &j * s - &j).camax());
        }
        GroupFamily::Unitary => {}
    }
    e
}

fn symplectic_part(g: &GroupSpec, x: &CMat) -> CMat {
    let j = g.j_matrix().unwrap().map(|v| Complex64::new(v, 0.0));
    (x + &j * x.transpose() * &j) * Complex64::new(0.5, 0.0)
}

/// Spanning family of 𝔲(d).
fn unitary_span(d: usize) -> Vec<CMat> {
    let mut out = Vec::new();
    for k in 0..d {
        out.push(unit(d, k, k) * I);
    }
    for k in 0..d {
        for l in k + 1..d {
            out.push(unit(d, k, l) - unit(d, l, k));
            out.push((unit(d, k, l) + unit(d, l, k)) * I);
        }
    }
    out
}

pub fn basis(g: &GroupSpec) -> AlgebraBasis {
    let d = g.dim_v();
    let span: Vec<CMat> = match g.family {
        GroupFamily::Orthogonal => {
            let mut v = Vec::new();
            for k in 0..d {
                for l in k + 1..d {
                    v.push(unit(d, k, l) - unit(d, l, k));
                }
            }
            v
        }
        GroupFamily::Unitary => unitary_span(d),
        GroupFamily::Symplectic => unitary_span(d).iter().map(|x| symplectic_part(g, x)).collect(),
    };
    // Gram-Schmidt under the real form; the projected 𝔰𝔭 family is redundant.
    let mut elements: Vec<CMat> = Vec::new();
    for mut x in span {
        for e in &elements {
            let c = inner(g, &x, e);
            x -= e * Complex64::new(c, 0.0);
        }
        let nrm = inner(g, &x, &x);
        if nrm > 1e-10 {
            elements.push(x / Complex64::new(nrm.sqrt(), 0.0));
        }
    }
    debug_assert_eq!(elements.len(), g.lie_dim());
    AlgebraBasis { group: *g, elements }
}

impl AlgebraBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    /// Σ x_i², which equals C_𝔤·Id.
    pub fn casimir(&self) -> CMat {
        let d = self.group.dim_v();
        self.elements.iter().fold(CMat::zeros(d, d), |acc, x| acc + x * x)
    }

    pub fn combine(&self, coeffs: &[f64]) -> CMat {
        let d = self.group.dim_v();
        let mut m = CMat::zeros(d, d);
        for (x, &c) in self.elements.iter().zip(coeffs) {
            m += x * Complex64::new(c, 0.0);
        }
        m
    }
}

/// ξ = Σ g_i √dt x_i.
pub fn sample_increment<R: rand::Rng + ?Sized>(basis: &AlgebraBasis, dt: f64, rng: &mut R) -> CMat {
    let s = dt.sqrt();
    let coeffs: Vec<f64> = (0..basis.dim())
        .map(|_| s * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng))
        .collect();
    basis.combine(&coeffs)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Scheme {
    MultiplicativeExponential,
}

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub paths: usize,
    pub step: f64,
    pub t_end: f64,
    pub seed: u64,
    pub scheme: Scheme,
    /// Worker threads. Results depend on this count through the summation order.
    pub threads: usize,
}

impl SimConfig {
    pub fn new(paths: usize, step: f64, t_end: f64, seed: u64) -> Result<Self> {
        let cfg = SimConfig {
            paths,
            step,
            t_end,
            seed,
            scheme: Scheme::MultiplicativeExponential,
            threads: 1,
        };
        cfg.steps()?;
        Ok(cfg)
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    pub fn steps(&self) -> Result<usize> {
        if self.paths == 0 {
            return Err(Error::Unsupported("at least one path is required".into()));
        }
        if !(self.step > 0.0) || !(self.t_end >= 0.0) {
            return Err(Error::Unsupported("step must be positive and t_end non-negative".into()));
        }
        let r = self.t_end / self.step;
        let k = r.round();
        if (r - k).abs() > 1e-9 * r.max(1.0) {
            return Err(Error::Unsupported(format!(
                "step {} does not divide t_end {}",
                self.step, self.t_end
            )));
        }
        Ok(k as usize)
    }
}

/// Generator for one path; the stream id keeps paths independent of order.
pub fn path_rng(seed: u64, path: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path);
    rng
}

/// Scaling and squaring with a degree-14 Taylor core; ‖b‖₁ ≤ 1/2 gives
/// remainder below 1e-16.
fn small_expm<const D: usize>(a: &SMatrix<Complex64, D, D>) -> SMatrix<Complex64, D, D> {
    let norm: f64 = a.iter().map(|x| x.norm()).sum();
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let b = a.scale(0.5f64.powi(s));
    let id = SMatrix::<Complex64, D, D>::identity();
    let mut r = id;
    for k in (1..=14).rev() {
        r = id + (b * r).scale(1.0 / k as f64);
    }
    for _ in 0..s {
        r = r * r;
    }
    r
}

fn run_small<const D: usize>(basis: &AlgebraBasis, steps: usize, dt: f64, rng: &mut ChaCha8Rng) -> CMat {
    let xs: Vec<SMatrix<Complex64, D, D>> = basis
        .elements
        .iter()
        .map(|x| SMatrix::from_fn(|i, j| x[(i, j)]))
        .collect();
    let s = dt.sqrt();
    let mut g = SMatrix::<Complex64, D, D>::identity();
    for _ in 0..steps {
        let mut xi = SMatrix::<Complex64, D, D>::zeros();
        for x in &xs {
            let c: f64 = StandardNormal.sample(rng);
            xi += x.scale(s * c);
        }
        g *= small_expm(&xi);
    }
    CMat::from_fn(D, D, |i, j| g[(i, j)])
}

fn run_dynamic(basis: &AlgebraBasis, steps: usize, dt: f64, rng: &mut ChaCha8Rng) -> CMat {
    let d = basis.group.dim_v();
    let mut g = CMat::identity(d, d);
    for _ in 0..steps {
        g *= expm_complex(&sample_increment(basis, dt, rng));
    }
    g
}

/// G_{t_end} along path number `path`.
pub fn simulate_path(basis: &AlgebraBasis, cfg: &SimConfig, path: u64) -> Result<CMat> {
    let steps = cfg.steps()?;
    let mut rng = path_rng(cfg.seed, path);
    let dt = cfg.step;
    Ok(match basis.group.dim_v() {
        1 => run_small::<1>(basis, steps, dt, &mut rng),
        2 => run_small::<2>(basis, steps, dt, &mut rng),
        3 => run_small::<3>(basis, steps, dt, &mut rng),
        4 => run_small::<4>(basis, steps, dt, &mut rng),
        _ => run_dynamic(basis, steps, dt, &mut rng),
    })
}

/// Lazily simulated endpoints of every path.
pub fn simulate_paths(g: &GroupSpec, cfg: &SimConfig) -> Result<impl Iterator<Item = CMat>> {
    cfg.steps()?;
    let b = basis(g);
    let cfg = cfg.clone();
    Ok((0..cfg.paths as u64).map(move |p| simulate_path(&b, &cfg, p).expect("validated config")))
}

/// Sample mean of G^{⊗n}⊗Ḡ^{⊗m} with per-entry standard errors of the real part.
#[derive(Clone, Debug)]
pub struct EmpiricalMoment {
    pub mean: MomentTensor<f64>,
    pub stderr: MomentTensor<f64>,
    /// Largest |imaginary part| of the mean.
    pub max_imag: f64,
    /// Largest group defect seen at t_end.
    pub max_defect: f64,
    pub paths: usize,
}

struct Acc {
    sum: DMatrix<f64>,
    sq: DMatrix<f64>,
    imag: DMatrix<f64>,
    defect: f64,
}

impl Acc {
    fn new(side: usize) -> Self {
        Acc {
            sum: DMatrix::zeros(side, side),
            sq: DMatrix::zeros(side, side),
            imag: DMatrix::zeros(side, side),
            defect: 0.0,
        }
    }

    fn merge(&mut self, o: Acc) {
        self.sum += o.sum;
        self.sq += o.sq;
        self.imag += o.imag;
        self.defect = self.defect.max(o.defect);
    }
}

fn accumulate(b: &AlgebraBasis, cfg: &SimConfig, n: usize, m: usize, range: std::ops::Range<u64>) -> Acc {
    let side = b.group.dim_v().pow((n + m) as u32);
    let mut acc = Acc::new(side);
    for p in range {
        let g = simulate_path(b, cfg, p).expect("validated config");
        acc.defect = acc.defect.max(group_defect(&b.group, &g));
        let t = tensor_power(&g, n, m);
        for (k, v) in t.iter().enumerate() {
            acc.sum[k] += v.re;
            acc.sq[k] += v.re * v.re;
            acc.imag[k] += v.im;
        }
    }
    acc
}

pub fn empirical_moment(g: &GroupSpec, n: usize, m: usize, cfg: &SimConfig) -> Result<EmpiricalMoment> {
    g.check_degrees(n, m)?;
    cfg.steps()?;
    let b = basis(g);
    let d = g.dim_v();
    let side = d.pow((n + m) as u32);
    let total = cfg.paths as u64;
    let threads = cfg.threads.max(1).min(cfg.paths) as u64;
    let acc = if threads == 1 {
        accumulate(&b, cfg, n, m, 0..total)
    } else {
        let chunk = total.div_ceil(threads);
        let parts: Vec<Acc> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..threads)
                .map(|w| {
                    let lo = (w * chunk).min(total);
                    let hi = ((w + 1) * chunk).min(total);
                    let b = &b;
                    s.spawn(move || accumulate(b, cfg, n, m, lo..hi))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        let mut acc = Acc::new(side);
        for p in parts {
            acc.merge(p);
        }
        acc
    };
    let np = cfg.paths as f64;
    let mean = &acc.sum / np;
    let stderr = DMatrix::from_fn(side, side, |i, j| {
        if cfg.paths < 2 {
            return 0.0;
        }
        let mu = mean[(i, j)];
        let var = ((acc.sq[(i, j)] - np * mu * mu) / (np - 1.0)).max(0.0);
        (var / np).sqrt()
    });
    Ok(EmpiricalMoment {
        mean: MomentTensor::from_matrix(d, n, m, mean)?,
        stderr: MomentTensor::from_matrix(d, n, m, stderr)?,
        max_imag: (&acc.imag / np).amax(),
        max_defect: acc.defect,
        paths: cfg.paths,
    })
}

/// Gauss–Hermite rule for the weight e^{−x²/2}/√(2π) (Golub–Welsch).
pub fn gauss_hermite(order: usize) -> (Vec<f64>, Vec<f64>) {
    let jac = DMatrix::from_fn(order, order, |i, j| {
        if i + 1 == j || j + 1 == i {
            (i.max(j) as f64).sqrt()
        } else {
            0.0
        }
    });
    let eig = jac.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|k| (eig.eigenvalues[k], eig.eigenvectors[(0, k)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// E[exp(√dt·ξ)] for one step of the scheme, by tensor Gauss–Hermite quadrature.
/// Since steps are i.i.d., E[G_T] is this matrix to the power T/dt.
pub fn one_step_mean(basis: &AlgebraBasis, dt: f64, order: usize) -> Result<CMat> {
    let k = basis.dim();
    if order.checked_pow(k as u32).is_none_or(|c| c > 1_000_000) {
        return Err(Error::SizeGuard(format!("{order}^{k} quadrature nodes")));
    }
    let (x, w) = gauss_hermite(order);
    let d = basis.group.dim_v();
    let mut out = CMat::zeros(d, d);
    let mut idx = vec![0usize; k];
    loop {
        let coeffs: Vec<f64> = idx.iter().map(|&i| dt.sqrt() * x[i]).collect();
        let wt: f64 = idx.iter().map(|&i| w[i]).product();
        out += expm_complex(&basis.combine(&coeffs)) * Complex64::new(wt, 0.0);
        let mut p = 0;
        loop {
            if p == k {
                return Ok(out);
            }
            idx[p] += 1;
            if idx[p] < order {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn groups() -> Vec<GroupSpec> {
        vec![
            GroupSpec::orthogonal(2),
            GroupSpec::orthogonal(3),
            GroupSpec::orthogonal(4),
            GroupSpec::symplectic(1),
            GroupSpec::symplectic(2),
            GroupSpec::unitary(1),
            GroupSpec::unitary(2),
            GroupSpec::unitary(3),
        ]
    }

    #[test]
    fn basis_orthonormal_in_algebra() {
        for g in groups() {
            let b = basis(&g);
            assert_eq!(b.dim(), g.lie_dim(), "{g}");
            for (i, x) in b.elements.iter().enumerate() {
                assert!(algebra_defect(&g, x) < 1e-14, "{g}");
                for (j, y) in b.elements.iter().enumerate() {
                    let e = if i == j { 1.0 } else { 0.0 };
                    assert!((inner(&g, x, y) - e).abs() < 1e-12, "{g} {i} {j}");
                }
            }
        }
        assert_eq!(basis(&GroupSpec::unitary(2)).dim(), 4);
        assert_eq!(basis(&GroupSpec::orthogonal(3)).dim(), 3);
    }

    #[test]
    fn casimir_sum_matches_constant() {
        for g in groups() {
            let b = basis(&g);
            let d = g.dim_v();
            let want = CMat::identity(d, d) * Complex64::new(g.casimir_constant(), 0.0);
            assert!((b.casimir() - want).camax() < 1e-12, "{g}");
        }
    }

    #[test]
    fn small_expm_matches_dense() {
        let g = GroupSpec::symplectic(2);
        let b = basis(&g);
        let mut rng = path_rng(3, 0);
        for scale in [0.01, 1.0, 7.0] {
            let x = sample_increment(&b, scale, &mut rng);
            let s: SMatrix<Complex64, 4, 4> = SMatrix::from_fn(|i, j| x[(i, j)]);
            let e = small_expm(&s);
            let r = crate::linalg::expm_real(&DMatrix::from_fn(8, 8, |i, j| {
                let (bi, bj) = (i / 4, j / 4);
                let v = x[(i % 4, j % 4)];
                match (bi, bj) {
                    (0, 0) | (1, 1) => v.re,
                    (0, 1) => -v.im,
                    _ => v.im,
                }
            }));
            for i in 0..4 {
                for j in 0..4 {
                    let z = Complex64::new(r[(i, j)], r[(i + 4, j)]);
                    assert!((z - e[(i, j)]).norm() < 1e-12 * (1.0 + z.norm()));
                }
            }
        }
    }

    #[test]
    fn increment_statistics() {
        let g = GroupSpec::unitary(2);
        let b = basis(&g);
        let mut rng = path_rng(11, 0);
        let dt = 0.3;
        let n = 10_000;
        let mut mean = CMat::zeros(2, 2);
        let mut var = vec![0.0; b.dim()];
        for _ in 0..n {
            let k = sample_increment(&b, dt, &mut rng);
            assert!(algebra_defect(&g, &k) < 1e-14);
            mean += &k;
            for (j, x) in b.elements.iter().enumerate() {
                var[j] += inner(&g, x, &k).powi(2);
            }
        }
        mean /= Complex64::new(n as f64, 0.0);
        assert!(mean.camax() < 4.0 / (n as f64).sqrt() * dt.sqrt());
        for v in var {
            assert!((v / n as f64 / dt - 1.0).abs() < 0.05);
        }
    }

    #[test]
    fn zero_time_is_identity() {
        let cfg = SimConfig::new(5, 0.1, 0.0, 1).unwrap();
        let e = empirical_moment(&GroupSpec::unitary(2), 1, 1, &cfg).unwrap();
        assert_eq!(e.mean.max_abs_diff(&MomentTensor::identity(2, 1, 1)), 0.0);
        assert_eq!(e.stderr.max_abs(), 0.0);
    }

    #[test]
    fn config_validation() {
        assert!(SimConfig::new(0, 0.1, 1.0, 0).is_err());
        assert!(SimConfig::new(1, 0.3, 1.0, 0).is_err());
        assert!(SimConfig::new(1, -0.1, 1.0, 0).is_err());
        assert_eq!(SimConfig::new(1, 1.0 / 512.0, 1.0, 0).unwrap().steps().unwrap(), 512);
    }

    #[test]
    fn paths_stay_in_group() {
        for g in groups() {
            let cfg = SimConfig::new(20, 0.05, 2.0, 5).unwrap();
            for s in simulate_paths(&g, &cfg).unwrap() {
                assert!(group_defect(&g, &s) < 1e-8, "{g}");
                if g.family == GroupFamily::Orthogonal {
                    assert!((s.determinant() - Complex64::new(1.0, 0.0)).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn reproducible_and_order_independent() {
        let g = GroupSpec::orthogonal(3);
        let cfg = SimConfig::new(300, 0.1, 1.0, 42).unwrap();
        let a = empirical_moment(&g, 1, 0, &cfg).unwrap();
        let b = empirical_moment(&g, 1, 0, &cfg).unwrap();
        assert_eq!(a.mean.matrix(), b.mean.matrix());
        let bs = basis(&g);
        let p7 = simulate_path(&bs, &cfg, 7).unwrap();
        let all: Vec<_> = simulate_paths(&g, &cfg).unwrap().collect();
        assert_eq!(all[7], p7);
        let c = empirical_moment(&g, 1, 0, &cfg.clone().with_threads(3)).unwrap();
        assert!(a.mean.max_abs_diff(&c.mean) < 1e-12);
    }

    #[test]
    fn so2_large_time_is_centered() {
        let g = GroupSpec::orthogonal(2);
        let cfg = SimConfig::new(4000, 0.25, 30.0, 9).unwrap();
        let e = empirical_moment(&g, 1, 0, &cfg).unwrap();
        let m = e.mean.entry(&[1], &[1]).unwrap();
        let s = e.stderr.entry(&[1], &[1]).unwrap();
        assert!(m.abs() < 4.0 * s, "{m} {s}");
    }

    #[test]
    fn standard_error_scales_with_paths() {
        let g = GroupSpec::unitary(2);
        let a = empirical_moment(&g, 1, 1, &SimConfig::new(2000, 0.1, 1.0, 1).unwrap()).unwrap();
        let b = empirical_moment(&g, 1, 1, &SimConfig::new(8000, 0.1, 1.0, 2).unwrap()).unwrap();
        let va = a.stderr.entry(&[1, 1], &[1, 1]).unwrap().powi(2);
        let vb = b.stderr.entry(&[1, 1], &[1, 1]).unwrap().powi(2);
        let ratio = va / vb;
        assert!((ratio / 4.0 - 1.0).abs() < 0.2, "{ratio}");
    }

    #[test]
    fn gauss_hermite_moments() {
        let (x, w) = gauss_hermite(12);
        let m = |k: i32| x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum::<f64>();
        assert!((m(0) - 1.0).abs() < 1e-13);
        assert!((m(2) - 1.0).abs() < 1e-12);
        assert!((m(4) - 3.0).abs() < 1e-11);
        assert!((m(6) - 15.0).abs() < 1e-10);
    }

    #[test]
    fn first_weak_order() {
        // Bias of E[O_t] against e^{tC/2} through the exact one-step mean.
        let g = GroupSpec::orthogonal(3);
        let b = basis(&g);
        let t = 1.0;
        let exact = (t * g.casimir_constant() / 2.0).exp();
        let bias = |k: u32| {
            let dt = t / k as f64;
            let m = one_step_mean(&b, dt, 16).unwrap();
            let mut p = CMat::identity(3, 3);
            for _ in 0..k {
                p = &p * &m;
            }
            p[(0, 0)].re - exact
        };
        let b1 = bias(4);
        let b2 = bias(8);
        let b3 = bias(16);
        assert!(b1.abs() > 1e-8);
        for r in [b1 / b2, b2 / b3] {
            assert!((r - 2.0).abs() < 0.6, "{b1} {b2} {b3}");
        }
    }

    #[test]
    fn abelian_scheme_is_exact() {
        let g = GroupSpec::orthogonal(2);
        let b = basis(&g);
        let m = one_step_mean(&b, 0.5, 40).unwrap();
        let want = (0.5 * g.casimir_constant() / 2.0).exp();
        assert!((m[(0, 0)].re - want).abs() < 1e-13);
    }
}
