//! Cross-verification suites: formula against the expm oracle, exact algebra
//! identities, Haar limits, Monte Carlo, spectral floors.

use std::fmt;
use std::time::Instant;

use nalgebra::DMatrix;
use num_traits::One;

use crate::brauer::{all_walled_diagrams, s, tau, y_group_element, y_index_set, z_group_element, BrauerElement};
use crate::coeff::{q, qi, Q};
use crate::error::{Error, Result};
use crate::heat::{bm_moment_tensor, expm_moment_tensor, min_eigenvalue, power_projection_check, power_projection_check_walled};
use crate::mc_oracle::{empirical_moment, SimConfig};
use crate::perm::{hyperoctahedral_projector, jucys_murphy, signature_element, subgroup_projector, GroupAlgebraElement, Permutation, Subgroup};
use crate::tensor_rep::{rho, GroupFamily, GroupSpec, MomentTensor, Rep};
use crate::weingarten::{
    action_matrix, gram_element_coset, gram_element_jm, haar_entrywise, haar_moment, omega_element, omega_jm,
    so_correction, GramOperator,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Algebra,
    Theorem,
    HaarLimit,
    HaarValues,
    SoCorrection,
    Mc,
    Spectral,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Algebra,
        Suite::Theorem,
        Suite::HaarLimit,
        Suite::HaarValues,
        Suite::SoCorrection,
        Suite::Mc,
        Suite::Spectral,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Theorem => "theorem",
            Suite::HaarLimit => "haar-limit",
            Suite::HaarValues => "haar-values",
            Suite::SoCorrection => "so-correction",
            Suite::Mc => "mc",
            Suite::Spectral => "spectral",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| Error::Unsupported(format!("unknown suite {s:?}")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One pass/fail line. Exact checks use deviation 0 or 1 and tolerance 0.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub deviation: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn exact(name: impl Into<String>, ok: bool) -> Self {
        Check {
            name: name.into(),
            passed: ok,
            deviation: if ok { 0.0 } else { 1.0 },
            tolerance: 0.0,
            detail: String::new(),
        }
    }

    fn within(name: impl Into<String>, deviation: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            passed: deviation <= tolerance,
            deviation,
            tolerance,
            detail: String::new(),
        }
    }

    fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = d.into();
        self
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub seconds: f64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn max_deviation(&self) -> f64 {
        self.checks.iter().map(|c| c.deviation).fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    pub theorem_tol: f64,
    pub haar_time: f64,
    pub haar_tol: f64,
    pub quadrature_tol: f64,
    pub mc_paths: usize,
    pub mc_step: f64,
    pub mc_sigmas: f64,
    pub mc_abs_tol: f64,
    pub spectral_slack: f64,
    pub threads: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0,
            theorem_tol: 1e-9,
            haar_time: 40.0,
            haar_tol: 1e-6,
            quadrature_tol: 1e-10,
            mc_paths: 200_000,
            mc_step: 1.0 / 512.0,
            mc_sigmas: 4.0,
            mc_abs_tol: 0.01,
            spectral_slack: 1e-9,
            threads: 1,
        }
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<Report> {
    let start = Instant::now();
    let checks = match suite {
        Suite::Algebra => algebra_checks()?,
        Suite::Theorem => theorem_checks(opts)?,
        Suite::HaarLimit => haar_limit_checks(opts)?,
        Suite::HaarValues => haar_value_checks()?,
        Suite::SoCorrection => so_correction_checks(opts)?,
        Suite::Mc => mc_checks(opts)?,
        Suite::Spectral => spectral_checks(opts)?,
    };
    Ok(Report {
        suite,
        checks,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// The (group, n, m) grid shared by the theorem and Haar-limit suites.
pub fn theorem_grid() -> Vec<(GroupSpec, usize, usize)> {
    let mut g = Vec::new();
    for big_n in [2, 3] {
        for n in 1..=4 {
            g.push((GroupSpec::orthogonal(big_n), n, 0));
        }
    }
    for big_n in [1, 2] {
        for n in 1..=3 {
            g.push((GroupSpec::symplectic(big_n), n, 0));
        }
    }
    for big_n in [2, 3] {
        for (n, m) in [(1, 1), (2, 1), (2, 2)] {
            g.push((GroupSpec::unitary(big_n), n, m));
        }
    }
    g
}

fn label(g: &GroupSpec, n: usize, m: usize) -> String {
    if g.family == GroupFamily::Unitary {
        format!("{g} n={n} m={m}")
    } else {
        format!("{g} n={n}")
    }
}

fn theorem_checks(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (g, n, m) in theorem_grid() {
        for t in [0.25, 1.0] {
            let f = bm_moment_tensor(&g, n, m, t)?;
            let e = expm_moment_tensor(&g, n, m, t)?;
            out.push(Check::within(format!("{} t={t}", label(&g, n, m)), f.max_abs_diff(&e), opts.theorem_tol));
        }
    }
    Ok(out)
}

fn el(d: crate::brauer::BrauerDiagram, z: &Q) -> BrauerElement {
    BrauerElement::from_diagram(d, z.clone())
}

/// The defining relations of B_n(z) over all index choices.
pub fn brauer_relations_hold(n: usize, z: &Q) -> Result<bool> {
    let t = |a, b| tau(n, a, b).map(|d| el(d, z));
    let sw = |a, b| s(n, a, b).map(|d| el(d, z));
    let one = BrauerElement::identity(n, z.clone());
    for a in 1..=n {
        for b in 1..=n {
            if a == b {
                continue;
            }
            let (tab, sab) = (t(a, b)?, sw(a, b)?);
            if &tab * &tab != tab.scale(z) || &sab * &sab != one || &sab * &tab != tab {
                return Ok(false);
            }
            for c in 1..=n {
                if c == a || c == b {
                    continue;
                }
                let (tbc, sbc, sac, tac) = (t(b, c)?, sw(b, c)?, sw(a, c)?, t(a, c)?);
                if &(&sab * &tbc) * &sab != tac
                    || &(&sab * &sbc) * &sab != &(&sbc * &sab) * &sbc
                    || &tab * &tbc != &sac * &tbc
                {
                    return Ok(false);
                }
                for d in 1..=n {
                    if d == a || d == b || d == c {
                        continue;
                    }
                    let (tcd, scd) = (t(c, d)?, sw(c, d)?);
                    if !tab.commutes_with(&tcd) || !sab.commutes_with(&scd) || !sab.commutes_with(&tcd) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

fn factorial(n: usize) -> Q {
    qi((1..=n as i64).product())
}

fn algebra_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for z in [qi(3), qi(-4), q(7, 2)] {
        for n in 1..=4 {
            out.push(Check::exact(format!("Brauer relations n={n} z={z}"), brauer_relations_hold(n, &z)?));
        }
    }
    for p in 1..=3 {
        for z in [qi(3), qi(-4), q(7, 2), qi(11)] {
            let g = GramOperator::orthogonal(p, &z)?;
            let jm = action_matrix(&gram_element_jm(p, &z)?, &g.basis, false)?;
            let coset = action_matrix(&gram_element_coset(p, &z)?, &g.basis, false)?;
            out.push(Check::exact(
                format!("Gram element = prod(z + X_(2k-1)) p={p} z={z}"),
                jm == g.matrix && coset == g.matrix,
            ));
        }
    }
    for n in 1..=5 {
        for z in [qi(2), qi(-3), q(1, 2), qi(9)] {
            out.push(Check::exact(
                format!("Omega = prod(z + X_i) n={n} z={z}"),
                omega_element(n, &z) == omega_jm(n, &z)?,
            ));
        }
    }
    for i in 1..=3 {
        let n = 2 * i;
        let h = hyperoctahedral_projector(i);
        let mut xs = GroupAlgebraElement::zero(n);
        for k in 1..=n {
            xs = &xs + &jucys_murphy(k, n)?;
        }
        let rhs = &(&h * &(&GroupAlgebraElement::identity(n) + &jucys_murphy(2 * i - 1, n)?)) * &h;
        out.push(Check::exact(format!("JM sum on hyperoctahedral projector i={i}"), &xs * &h == rhs.scale(&qi(i as i64))));
        let d = subgroup_projector(&Subgroup::Diagonal(i));
        let mut sum = GroupAlgebraElement::zero(n);
        for a in 1..=n {
            for b in a + 1..=n {
                if b <= i || a > i {
                    sum.add_term(Permutation::transposition(n, a, b)?, Q::one());
                }
            }
        }
        let rhs = (&(&d * &jucys_murphy(i, n)?) * &d).scale(&qi(i as i64));
        out.push(Check::exact(format!("same-side transpositions on diagonal projector i={i}"), &sum * &d == rhs));
    }
    let z = qi(100);
    for p in 1..=2 {
        let n = 2 * p;
        let h = hyperoctahedral_projector(p);
        let ginv = gram_element_jm(p, &z)?.inverse()?;
        let lhs = &ginv.scale(&crate::coeff::q_pow(&z, p as u32)) * &h;
        let mut zs = GroupAlgebraElement::identity(n);
        for k in 1..=p {
            let zk = z_group_element(&(1..=2 * k).collect::<Vec<_>>(), &z, n)?;
            zs = &zs * &zk.inverse()?;
        }
        let rhs = (&(&h * &zs) * &h).scale(&factorial(p));
        out.push(Check::exact(format!("inverse Gram through Z elements p={p} z=100"), lhs == rhs));

        let d = subgroup_projector(&Subgroup::Diagonal(p));
        let oinv = omega_element(p, &z).inverse()?.embed(n)?;
        let lhs = &oinv.scale(&crate::coeff::q_pow(&z, p as u32)) * &d;
        let mut ys = GroupAlgebraElement::identity(n);
        for i in 1..=p {
            let y = y_group_element(&y_index_set(p, p, p, i), &z, p, p)?;
            ys = &ys * &y.inverse()?;
        }
        let rhs = (&(&d * &ys) * &d).scale(&factorial(p));
        out.push(Check::exact(format!("inverse Omega through Y elements p={p} z=100"), lhs == rhs));
    }
    for z in [qi(3), q(-5, 2)] {
        for n in 1..=4 {
            for k in 0..=n / 2 {
                for r in 0..=4 {
                    let (a, b) = power_projection_check(n, k, r, &z)?;
                    out.push(Check::exact(format!("P_M{k} Delta^{r} closed form n={n} z={z}"), a == b));
                }
            }
        }
        for (n, m) in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3)] {
            for k in 0..=n.min(m) {
                for r in 0..=4 {
                    let (a, b) = power_projection_check_walled(n, m, k, r, &z)?;
                    out.push(Check::exact(format!("P_M{k} walled Delta^{r} closed form n={n} m={m} z={z}"), a == b));
                }
            }
        }
    }
    // walled closure, a cheap structural check
    for (n, m) in [(1, 1), (2, 1), (2, 2)] {
        let ds = all_walled_diagrams(n, m)?;
        let mut ok = true;
        for a in &ds {
            for b in &ds {
                ok &= a.multiply(b)?.0.is_walled(n, m);
            }
        }
        out.push(Check::exact(format!("walled closure n={n} m={m}"), ok));
    }
    Ok(out)
}

/// Kronecker power of a real matrix.
pub fn kron_power(a: &DMatrix<f64>, n: usize) -> DMatrix<f64> {
    let mut acc = DMatrix::from_element(1, 1, 1.0);
    for _ in 0..n {
        acc = acc.kronecker(a);
    }
    acc
}

fn reflection(d: usize) -> DMatrix<f64> {
    let mut a = DMatrix::identity(d, d);
    a[(0, 0)] = -1.0;
    a
}

fn haar_limit_checks(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let t = opts.haar_time;
    for (g, n, m) in theorem_grid() {
        let f = bm_moment_tensor(&g, n, m, t)?;
        let haar = haar_moment(&g, n, m)?.to_f64();
        match g.family {
            GroupFamily::Orthogonal => {
                let a = kron_power(&reflection(g.n), n);
                let avg = (f.matrix() + &a * f.matrix()) * 0.5;
                let dev = (avg - haar.matrix()).amax();
                out.push(Check::within(format!("{} reflection average", label(&g, n, m)), dev, opts.haar_tol));
                let so = so_correction(n, g.n)?.to_f64();
                let target = haar.matrix() + so.matrix();
                let dev = (f.matrix() - target).amax();
                out.push(Check::within(format!("{} SO limit", label(&g, n, m)), dev, opts.haar_tol));
            }
            _ => {
                out.push(Check::within(label(&g, n, m), f.max_abs_diff(&haar), opts.haar_tol));
            }
        }
    }
    Ok(out)
}

fn haar_value_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for big_n in 1..=4usize {
        let nq = qi(big_n as i64);
        let u = GroupSpec::unitary(big_n);
        let o = GroupSpec::orthogonal(big_n);
        let cases: [(GroupSpec, usize, usize, Q, &str); 4] = [
            (u, 1, 1, nq.recip(), "|U_11|^2"),
            (u, 2, 2, qi(2) / (&nq * (&nq + qi(1))), "|U_11|^4"),
            (o, 2, 0, nq.recip(), "O_11^2"),
            (o, 4, 0, qi(3) / (&nq * (&nq + qi(2))), "O_11^4"),
        ];
        for (g, n, m, want, what) in cases {
            let ones = vec![1; n + m];
            let tensor = haar_moment(&g, n, m)?.entry(&ones, &ones)?;
            let brute = haar_entrywise(&g, &ones, &ones)?;
            out.push(
                Check::exact(format!("{g} integral of {what} = {want}"), tensor == want && brute == want)
                    .with_detail(format!("tensor {tensor}, entrywise {brute}")),
            );
        }
    }
    let full: [(GroupSpec, usize, usize); 7] = [
        (GroupSpec::symplectic(1), 2, 0),
        (GroupSpec::symplectic(2), 2, 0),
        (GroupSpec::symplectic(3), 2, 0),
        (GroupSpec::symplectic(1), 4, 0),
        (GroupSpec::orthogonal(3), 2, 0),
        (GroupSpec::unitary(2), 1, 1),
        (GroupSpec::unitary(2), 2, 2),
    ];
    for (g, n, m) in full {
        let t = haar_moment(&g, n, m)?;
        let side = t.side();
        let mut bad = 0usize;
        for r in 0..side {
            for c in 0..side {
                let i = t.multi_index(r);
                let j = t.multi_index(c);
                if haar_entrywise(&g, &i, &j)? != t.matrix()[(r, c)] {
                    bad += 1;
                }
            }
        }
        out.push(
            Check::exact(format!("{} every entry matches the entrywise sum", label(&g, n, m)), bad == 0)
                .with_detail(format!("{bad} mismatches of {}", side * side)),
        );
    }
    Ok(out)
}

/// ∫_{O(2)} O^{⊗n} det(O) dO by the trapezoid rule on both components,
/// exact for trigonometric polynomials of degree below `points`.
pub fn o2_det_moment_quadrature(n: usize, points: usize) -> DMatrix<f64> {
    let side = 2usize.pow(n as u32);
    let mut acc = DMatrix::zeros(side, side);
    let f = reflection(2);
    for k in 0..points {
        let th = 2.0 * std::f64::consts::PI * k as f64 / points as f64;
        let (sn, cs) = th.sin_cos();
        let r = DMatrix::from_row_slice(2, 2, &[cs, -sn, sn, cs]);
        acc += kron_power(&r, n) - kron_power(&(&r * &f), n);
    }
    acc / (2.0 * points as f64)
}

fn so_correction_checks(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for n in [2, 4] {
        let exact = so_correction(n, 2)?.to_f64();
        let quad = o2_det_moment_quadrature(n, 64);
        out.push(Check::within(
            format!("O(2) n={n} determinant-weighted integral"),
            (exact.matrix() - quad).amax(),
            opts.quadrature_tol,
        ));
    }
    Ok(out)
}

/// MC against the formula: every entry within k standard errors and an absolute bound.
pub fn mc_compare(g: &GroupSpec, n: usize, m: usize, t: f64, opts: &VerifyOptions) -> Result<Check> {
    let cfg = SimConfig::new(opts.mc_paths, opts.mc_step, t, opts.seed)?.with_threads(opts.threads);
    let emp = empirical_moment(g, n, m, &cfg)?;
    let f = bm_moment_tensor(g, n, m, t)?;
    let mut max_abs = 0.0f64;
    let mut max_z = 0.0f64;
    let mut ok = true;
    for (k, (&a, &b)) in f.matrix().iter().zip(emp.mean.matrix().iter()).enumerate() {
        let se = emp.stderr.matrix()[k];
        let d = (a - b).abs();
        max_abs = max_abs.max(d);
        if se > 0.0 {
            max_z = max_z.max(d / se);
        }
        ok &= d <= opts.mc_sigmas * se + 1e-12 && d <= opts.mc_abs_tol;
    }
    Ok(Check {
        name: format!("{} t={t} paths={}", label(g, n, m), opts.mc_paths),
        passed: ok,
        deviation: max_abs,
        tolerance: opts.mc_abs_tol,
        detail: format!(
            "max |z| {max_z:.3} (limit {}), max imag {:.2e}, group defect {:.2e}",
            opts.mc_sigmas, emp.max_imag, emp.max_defect
        ),
    })
}

fn mc_checks(opts: &VerifyOptions) -> Result<Vec<Check>> {
    Ok(vec![
        mc_compare(&GroupSpec::unitary(2), 1, 1, 1.0, opts)?,
        mc_compare(&GroupSpec::orthogonal(2), 2, 0, 1.0, opts)?,
    ])
}

fn rho_min_eig(e: &GroupAlgebraElement, z: &Q, rep: Rep, n: usize, m: usize) -> Result<f64> {
    let b = BrauerElement::from_group_element(e, z.clone());
    let r: MomentTensor<Q> = rho(&b, rep, n, m)?;
    Ok(min_eigenvalue(&r.to_f64().into_matrix()))
}

fn spectral_checks(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let slack = opts.spectral_slack;
    let floor = |name: String, lam: f64, bound: f64| {
        Check::within(name, (bound - lam).max(0.0), slack).with_detail(format!("min eigenvalue {lam:.12}, bound {bound:.12}"))
    };
    for big_n in [2usize, 3] {
        let zo = qi(big_n as i64);
        let zs = qi(-2 * big_n as i64);
        let nf = big_n as f64;
        for n in 1..=4usize {
            for i in 1..=n {
                let set: Vec<usize> = (1..=i).collect();
                let zi = z_group_element(&set, &zo, n)?;
                let lam = rho_min_eig(&zi, &zo, Rep::O(big_n), n, 0)?;
                if i != big_n {
                    out.push(floor(format!("rho_O(Z_{i}({big_n})) n={n}"), lam, (nf - 1.0) / (2.0 * nf)));
                } else {
                    out.push(
                        Check::within(format!("rho_O(Z_{i}({big_n})) n={n} has a kernel"), lam.abs(), slack)
                            .with_detail(format!("min eigenvalue {lam:.3e}")),
                    );
                    let eps = signature_element(big_n, n)?;
                    let shifted = &(&zi - &GroupAlgebraElement::identity(n)) + &eps.scale(&factorial(big_n).recip());
                    let lam = rho_min_eig(&shifted, &zo, Rep::O(big_n), n, 0)?;
                    out.push(floor(format!("rho_O(Z_{i}({big_n}) - 1 + eps/{big_n}!) n={n}"), lam, 0.0));
                    out.push(Check::exact(format!("eps_{big_n} Z_{big_n}({big_n}) = 0 in S_{n}"), (&eps * &zi).is_zero()));
                }
                let zi_s = z_group_element(&set, &zs, n)?;
                let lam = rho_min_eig(&zi_s, &zs, Rep::S(big_n), n, 0)?;
                out.push(floor(format!("rho_S(Z_{i}(-{})) n={n}", 2 * big_n), lam, 1.0));
            }
        }
        for n in 1..=4usize {
            for m in n..=4usize {
                if n + m > 6 {
                    continue;
                }
                for i in 1..=n {
                    let y = y_group_element(&y_index_set(n, m, n, i), &zo, n, m)?;
                    let lam = rho_min_eig(&y, &zo, Rep::O(big_n), n, m)?;
                    out.push(floor(format!("rho_O(Y_{i}({big_n})) n={n} m={m}"), lam, 1.0));
                }
            }
        }
    }
    Ok(out)
}
