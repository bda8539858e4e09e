//! Acceptance criteria, one PASS/FAIL line each.

use heatwg::verify::{run_suite, Check, Suite, VerifyOptions};

struct Criterion {
    id: u32,
    title: &'static str,
    suite: Suite,
    /// Checks whose failure is analyzed as unattainable at the stated tolerance.
    known_unattainable: fn(&Check) -> bool,
}

fn none(_: &Check) -> bool {
    false
}

fn group_n(name: &str, prefix: &str) -> Option<f64> {
    let rest = name.strip_prefix(prefix)?;
    rest[..rest.find(')')?].parse().ok()
}

/// Odd moments of O(N) decay like e^{−t(N−1)/(2N)}; at t = 40 this exceeds 1e−6 for N ≤ 3.
fn slow_odd_orthogonal(c: &Check) -> bool {
    let Some(n) = group_n(&c.name, "O(") else { return false };
    let odd = c.name.contains(" n=1 ") || c.name.contains(" n=3 ");
    let rate = (n - 1.0) / (2.0 * n);
    odd && c.deviation <= (-40.0 * rate).exp() * (1.0 + 1e-6) && c.deviation > 1e-6
}

/// Z_1(−2N) is the scalar (2N+1)/(4N), below the stated floor 1.
fn symplectic_first_floor(c: &Check) -> bool {
    let Some(two_n) = group_n(&c.name, "rho_S(Z_1(-") else { return false };
    let want = 1.0 - (two_n + 1.0) / (2.0 * two_n);
    (c.deviation - want).abs() < 1e-12
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, title: "Brauer formula vs Casimir exponential", suite: Suite::Theorem, known_unattainable: none },
        Criterion { id: 2, title: "exact algebra identities", suite: Suite::Algebra, known_unattainable: none },
        Criterion { id: 3, title: "Haar recovery at large time", suite: Suite::HaarLimit, known_unattainable: slow_odd_orthogonal },
        Criterion { id: 4, title: "known Haar integrals", suite: Suite::HaarValues, known_unattainable: none },
        Criterion { id: 5, title: "SO correction vs O(2) quadrature", suite: Suite::SoCorrection, known_unattainable: none },
        Criterion { id: 6, title: "Monte Carlo consistency", suite: Suite::Mc, known_unattainable: none },
        Criterion { id: 7, title: "spectral floors", suite: Suite::Spectral, known_unattainable: symplectic_first_floor },
    ]
}

fn main() {
    let opts = VerifyOptions { seed: 20240611, ..Default::default() };
    let mut unexpected = Vec::new();
    for c in criteria() {
        let r = run_suite(c.suite, &opts).expect("suite runs");
        let status = if r.passed() { "PASS" } else { "FAIL" };
        println!(
            "criterion {}: {status} {} ({} checks, max deviation {:.3e}, {:.1}s)",
            c.id,
            c.title,
            r.checks.len(),
            r.max_deviation(),
            r.seconds
        );
        for f in r.failures() {
            let tag = if (c.known_unattainable)(f) { "known" } else { "unexpected" };
            println!("    {tag}: {} deviation {:.3e} > {:.1e} {}", f.name, f.deviation, f.tolerance, f.detail);
            if !(c.known_unattainable)(f) {
                unexpected.push(format!("criterion {}: {}", c.id, f.name));
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:#?}");
        std::process::exit(1);
    }
    println!("acceptance: no unexpected failures");
}
