use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::One;
use proptest::prelude::*;

use heatwg::brauer::{all_diagrams, all_walled_diagrams, casimir_delta, s, tau, BrauerDiagram};
use heatwg::coeff::{q, qi};
use heatwg::heat::{bm_moment_tensor, operator_norm, s_t_determinant, s_t_scalar};
use heatwg::linalg::QMatrix;
use heatwg::mc_oracle::{basis, simulate_path, SimConfig};
use heatwg::perm::{all_permutations, hyperoctahedral_projector, jucys_murphy, GroupAlgebraElement, Permutation};
use heatwg::tensor_rep::{casimir_matrix, rho, tensor_power, Rep};
use heatwg::young::{enumerate_partitions, isotypic_projector};
use heatwg::{BrauerElement, GroupSpec, Q};

fn z_strategy() -> impl Strategy<Value = Q> {
    prop_oneof![Just(qi(3)), Just(qi(-4)), Just(q(7, 2)), (-9i64..=9).prop_filter("nonzero", |v| *v != 0).prop_map(qi)]
}

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    let ps = all_permutations(n);
    (0..ps.len()).prop_map(move |i| ps[i].clone())
}

fn el(d: BrauerDiagram, z: &Q) -> BrauerElement {
    BrauerElement::from_diagram(d, z.clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn brauer_multiplication_is_associative(n in 1usize..=4, seed in any::<u64>(), z in z_strategy()) {
        let ds = all_diagrams(n).unwrap();
        let pick = |k: u64| ds[(seed.rotate_left(k as u32 * 17) % ds.len() as u64) as usize].clone();
        let (a, b, c) = (el(pick(0), &z), el(pick(1), &z), el(pick(2), &z));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn rho_is_a_homomorphism(n in 1usize..=3, big_n in 1usize..=3, sym in any::<bool>(),
                             i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let rep = if sym { Rep::S(big_n) } else { Rep::O(big_n) };
        let ds = all_diagrams(n).unwrap();
        let z = rep.z();
        let (a, b) = (el(i.get(&ds).clone(), &z), el(j.get(&ds).clone(), &z));
        let lhs = rho(&(&a * &b), rep, n, 0).unwrap();
        let rhs = rho(&a, rep, n, 0).unwrap().mul_exact(&rho(&b, rep, n, 0).unwrap());
        prop_assert_eq!(lhs.matrix(), rhs.matrix());
    }

    #[test]
    fn walled_rho_is_a_homomorphism(big_n in 1usize..=3, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let ds = all_walled_diagrams(2, 1).unwrap();
        let z = qi(big_n as i64);
        let (a, b) = (el(i.get(&ds).clone(), &z), el(j.get(&ds).clone(), &z));
        let lhs = rho(&(&a * &b), Rep::O(big_n), 2, 1).unwrap();
        let rhs = rho(&a, Rep::O(big_n), 2, 1).unwrap().mul_exact(&rho(&b, Rep::O(big_n), 2, 1).unwrap());
        prop_assert_eq!(lhs.matrix(), rhs.matrix());
    }

    #[test]
    fn walled_products_stay_walled(nm in prop_oneof![Just((1usize, 1usize)), Just((2, 1)), Just((1, 3)), Just((2, 3))],
                                   i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let (n, m) = nm;
        let ds = all_walled_diagrams(n, m).unwrap();
        let (d, _) = i.get(&ds).multiply(j.get(&ds)).unwrap();
        prop_assert!(d.is_walled(n, m));
    }

    #[test]
    fn restricted_casimir_action(n in 2usize..=4, i in any::<prop::sample::Index>(), z in z_strategy()) {
        let pi = i.get(&all_diagrams(n).unwrap()).clone();
        let a_set = pi.classify_ma();
        let p = el(pi.clone(), &z);
        let lhs = &casimir_delta(n, &z).unwrap() * &p;
        let zi = z.recip();
        let free = (n - a_set.len()) as i64;
        let mut op = BrauerElement::scalar(n, z.clone(), -(qi(1) - &zi) * qi(free) / qi(2));
        for a in 1..=n {
            for b in a + 1..=n {
                if a_set.contains(&a) || a_set.contains(&b) {
                    continue;
                }
                let d = &el(tau(n, a, b).unwrap(), &z) - &el(s(n, a, b).unwrap(), &z);
                op = &op + &d.scale(&zi);
            }
        }
        prop_assert_eq!(lhs, &op * &p);
    }

    #[test]
    fn jucys_murphy_elements_commute(n in 2usize..=6, i in 1usize..=6, j in 1usize..=6) {
        let (i, j) = (1 + (i - 1) % n, 1 + (j - 1) % n);
        let (xi, xj) = (jucys_murphy(i, n).unwrap(), jucys_murphy(j, n).unwrap());
        prop_assert!(xi.commutes_with(&xj));
    }

    #[test]
    fn jucys_murphy_sum_is_central(n in 2usize..=6, a in 1usize..=6) {
        let a = 1 + (a - 1) % (n - 1);
        let mut sum = GroupAlgebraElement::zero(n);
        for k in 1..=n {
            sum = &sum + &jucys_murphy(k, n).unwrap();
        }
        let t = GroupAlgebraElement::from_perm(Permutation::transposition(n, a, a + 1).unwrap());
        prop_assert!(sum.commutes_with(&t));
    }

    #[test]
    fn permutation_group_axioms(a in perm(5), b in perm(5), c in perm(5)) {
        prop_assert_eq!(a.compose(&b).unwrap().compose(&c).unwrap(), a.compose(&b.compose(&c).unwrap()).unwrap());
        prop_assert!(a.compose(&a.inverse()).unwrap().is_identity());
        prop_assert_eq!(a.compose(&b).unwrap().signature(), a.signature() * b.signature());
    }

    #[test]
    fn pseudo_inverse_contract(rows in 1usize..=4, cols in 1usize..=4, entries in prop::collection::vec(-3i64..=3, 16)) {
        let a = QMatrix::from_fn(rows, cols, |i, j| qi(entries[i * 4 + j]));
        let p = a.pseudo_inverse();
        prop_assert_eq!(a.mul(&p).mul(&a), a.clone());
        prop_assert_eq!(p.mul(&a).mul(&p), p.clone());
        let ap = a.mul(&p);
        prop_assert_eq!(ap.transpose(), ap);
        let pa = p.mul(&a);
        prop_assert_eq!(pa.transpose(), pa);
    }

    #[test]
    fn s_t_is_symmetric_and_matches_determinant(t in 0.05f64..3.0, xs in prop::collection::vec(-2.0f64..4.0, 1..=4)) {
        let mut sorted = xs.clone();
        sorted.sort_by(f64::total_cmp);
        let gaps_ok = sorted.windows(2).all(|w| w[1] - w[0] > 0.3);
        let a = s_t_scalar(t, &xs);
        let mut rev = xs.clone();
        rev.reverse();
        prop_assert!((a - s_t_scalar(t, &rev)).abs() <= 1e-12 * (1.0 + a.abs()));
        if xs.len() == 1 {
            prop_assert!((a - (-t * xs[0]).exp()).abs() <= 1e-14);
        } else if gaps_ok {
            let d = s_t_determinant(t, &xs).unwrap();
            prop_assert!((a - d).abs() <= 1e-8 * (1.0 + a.abs()), "{} vs {}", a, d);
        }
    }
}

fn groups() -> Vec<(GroupSpec, usize, usize)> {
    vec![
        (GroupSpec::orthogonal(2), 2, 0),
        (GroupSpec::orthogonal(3), 2, 0),
        (GroupSpec::symplectic(1), 2, 0),
        (GroupSpec::unitary(2), 1, 1),
        (GroupSpec::unitary(2), 2, 1),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn semigroup_property(k in 0usize..5, t1 in 0.0f64..1.5, t2 in 0.0f64..1.5) {
        let (g, n, m) = groups()[k];
        let a = bm_moment_tensor(&g, n, m, t1).unwrap();
        let b = bm_moment_tensor(&g, n, m, t2).unwrap();
        let c = bm_moment_tensor(&g, n, m, t1 + t2).unwrap();
        prop_assert!(a.mul(&b).max_abs_diff(&c) < 1e-9);
    }

    #[test]
    fn commutant_of_group_powers(k in 0usize..5, seed in any::<u64>(), i in any::<prop::sample::Index>()) {
        let (g, n, m) = groups()[k];
        let cfg = SimConfig::new(1, 0.25, 3.0, seed).unwrap();
        let s_ = simulate_path(&basis(&g), &cfg, 0).unwrap();
        let power = tensor_power(&s_, n, m);
        let ds = if m == 0 { all_diagrams(n).unwrap() } else { all_walled_diagrams(n, m).unwrap() };
        let r = rho(&el(i.get(&ds).clone(), &g.brauer_z()), g.rep(), n, m).unwrap().to_f64();
        let rc = r.matrix().map(|x| Complex64::new(x, 0.0));
        prop_assert!((&rc * &power - &power * &rc).camax() < 1e-10);
    }
}

#[test]
fn casimir_matrix_matches_basis_sum() {
    for (g, n, m) in groups().into_iter().chain([(GroupSpec::symplectic(2), 2, 0), (GroupSpec::unitary(3), 1, 1)]) {
        let d = g.dim_v();
        let side = d.pow((n + m) as u32);
        let mut total = DMatrix::<Complex64>::zeros(side, side);
        for x in &basis(&g).elements {
            let mut gen = DMatrix::<Complex64>::zeros(side, side);
            for slot in 0..n + m {
                let mut acc = DMatrix::from_element(1, 1, Complex64::one());
                for k in 0..n + m {
                    let f = if k != slot {
                        DMatrix::identity(d, d)
                    } else if k < n {
                        x.clone()
                    } else {
                        x.map(|v| v.conj())
                    };
                    acc = acc.kronecker(&f);
                }
                gen += acc;
            }
            total += &gen * &gen;
        }
        let c = casimir_matrix(&g, n, m).unwrap().to_f64();
        let want = c.matrix().map(|v| Complex64::new(v, 0.0));
        assert!((total - want).camax() < 1e-12, "{g} n={n} m={m}");
    }
}

#[test]
fn moment_norm_is_non_increasing() {
    for (g, n, m) in groups() {
        let mut last = f64::INFINITY;
        for k in 0..=12 {
            let t = 0.5 * k as f64;
            let nrm = operator_norm(bm_moment_tensor(&g, n, m, t).unwrap().matrix());
            assert!(nrm <= last + 1e-12, "{g} t={t}");
            last = nrm;
        }
    }
}

#[test]
fn young_projector_properties() {
    for n in 1..=5 {
        let parts = enumerate_partitions(n, None);
        let total: u128 = parts.iter().map(|l| l.dimension().pow(2)).sum();
        assert_eq!(total, (1..=n as u128).product());
        let ps: Vec<_> = parts.iter().map(isotypic_projector).collect();
        let mut sum = GroupAlgebraElement::zero(n);
        for (i, p) in ps.iter().enumerate() {
            sum = &sum + p;
            assert_eq!(p.epsilon_twist(), isotypic_projector(&parts[i].conjugate()));
            for (j, r) in ps.iter().enumerate() {
                let prod = p * r;
                if i == j {
                    assert_eq!(&prod, p);
                } else {
                    assert!(prod.is_zero());
                }
            }
        }
        assert_eq!(sum, GroupAlgebraElement::identity(n));
    }
    for p in 1..=3 {
        let h = hyperoctahedral_projector(p);
        assert_eq!(&h * &h, h);
    }
}
