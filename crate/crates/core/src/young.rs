//! Partitions, standard Young tableaux, characters of S_n and the
//! Jucys–Murphy spectral data.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::coeff::{qi, Q};
use crate::error::{Error, Result};
use crate::perm::{all_permutations, GroupAlgebraElement};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegerPartition {
    parts: Vec<usize>,
}

impl fmt::Debug for IntegerPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.parts)
    }
}

impl IntegerPartition {
    /// Zero parts are dropped; the rest must be non-increasing.
    pub fn new(parts: &[usize]) -> Result<Self> {
        let parts: Vec<usize> = parts.iter().copied().filter(|&p| p > 0).collect();
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Unsupported(format!("{parts:?} is not non-increasing")));
        }
        Ok(IntegerPartition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn length(&self) -> usize {
        self.parts.len()
    }

    pub fn first_part(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Self {
        let parts = (1..=self.first_part())
            .map(|j| self.parts.iter().filter(|&&p| p >= j).count())
            .collect();
        IntegerPartition { parts }
    }

    /// 2λ = (2λ_1, 2λ_2, …).
    pub fn doubled(&self) -> Self {
        IntegerPartition {
            parts: self.parts.iter().map(|p| 2 * p).collect(),
        }
    }

    /// Cells (i, j), 1-based, row by row.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.size());
        for (i, &p) in self.parts.iter().enumerate() {
            for j in 0..p {
                out.push((i + 1, j + 1));
            }
        }
        out
    }

    /// Number of standard tableaux, by the hook length formula.
    pub fn dimension(&self) -> u128 {
        let conj = self.conjugate();
        let mut num: u128 = (1..=self.size() as u128).product();
        let mut hooks: u128 = 1;
        for (i, j) in self.cells() {
            let arm = self.parts[i - 1] - j;
            let leg = conj.parts[j - 1] - i;
            hooks *= (arm + leg + 1) as u128;
        }
        num /= hooks;
        num
    }
}

/// All partitions of n (with at most `max_length` parts), in reverse
/// lexicographic order starting from (n).
pub fn enumerate_partitions(n: usize, max_length: Option<usize>) -> Vec<IntegerPartition> {
    fn rec(rem: usize, max_part: usize, cur: &mut Vec<usize>, max_len: usize, out: &mut Vec<IntegerPartition>) {
        if rem == 0 {
            out.push(IntegerPartition { parts: cur.clone() });
            return;
        }
        if cur.len() == max_len {
            return;
        }
        for p in (1..=max_part.min(rem)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, max_len, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), max_length.unwrap_or(usize::MAX), &mut out);
    out
}

/// A standard Young tableau, stored as rows of 1-based entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StandardTableau {
    shape: IntegerPartition,
    rows: Vec<Vec<usize>>,
}

impl fmt::Debug for StandardTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows)
    }
}

impl StandardTableau {
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self> {
        let shape = IntegerPartition::new(&rows.iter().map(|r| r.len()).collect::<Vec<_>>())?;
        let n = shape.size();
        let mut seen = vec![false; n + 1];
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if x == 0 || x > n || seen[x] {
                    return Err(Error::Unsupported(format!("bad tableau entry {x}")));
                }
                seen[x] = true;
                if j > 0 && row[j - 1] >= x {
                    return Err(Error::Unsupported("rows must increase".into()));
                }
                if i > 0 && rows[i - 1][j] >= x {
                    return Err(Error::Unsupported("columns must increase".into()));
                }
            }
        }
        Ok(StandardTableau { shape, rows })
    }

    pub fn shape(&self) -> &IntegerPartition {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// Content vector: entry k−1 is the content j−i of the cell holding k.
    pub fn contents(&self) -> Vec<i64> {
        let mut out = vec![0i64; self.shape.size()];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                out[x - 1] = j as i64 - i as i64;
            }
        }
        out
    }

    /// Shape of the subtableau holding 1..=k.
    pub fn restricted_shape(&self, k: usize) -> IntegerPartition {
        let parts: Vec<usize> = self.rows.iter().map(|r| r.iter().filter(|&&x| x <= k).count()).collect();
        IntegerPartition::new(&parts).expect("restriction of a tableau is a partition")
    }
}

/// All standard tableaux of a shape.
pub fn enumerate_tableaux(shape: &IntegerPartition) -> Vec<StandardTableau> {
    // place n, n−1, … into removable corners
    fn rec(parts: &mut Vec<usize>, k: usize, grid: &mut Vec<Vec<usize>>, out: &mut Vec<StandardTableau>, shape: &IntegerPartition) {
        if k == 0 {
            out.push(StandardTableau {
                shape: shape.clone(),
                rows: grid.clone(),
            });
            return;
        }
        for i in 0..parts.len() {
            let p = parts[i];
            if p == 0 {
                continue;
            }
            let corner = i + 1 == parts.len() || parts[i + 1] < p;
            if !corner {
                continue;
            }
            grid[i][p - 1] = k;
            parts[i] -= 1;
            rec(parts, k - 1, grid, out, shape);
            parts[i] += 1;
        }
    }
    let mut grid: Vec<Vec<usize>> = shape.parts.iter().map(|&p| vec![0; p]).collect();
    let mut out = Vec::new();
    rec(&mut shape.parts.clone(), shape.size(), &mut grid, &mut out, shape);
    out
}

type CharKey = (Vec<usize>, Vec<usize>);

fn char_cache() -> &'static Mutex<HashMap<CharKey, i64>> {
    static CACHE: OnceLock<Mutex<HashMap<CharKey, i64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// χ^λ on the class of cycle type `class` (any order of the parts).
pub fn character(shape: &IntegerPartition, class: &[usize]) -> Result<i64> {
    let class: Vec<usize> = class.iter().copied().filter(|&c| c > 0).collect();
    let total: usize = class.iter().sum();
    if total != shape.size() {
        return Err(Error::SizeMismatch(format!(
            "shape of size {} vs class of size {total}",
            shape.size()
        )));
    }
    let mut sorted = class;
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    Ok(mn(&shape.parts, &sorted))
}

/// Murnaghan–Nakayama on beta-sets: removing a rim hook of length r moves one
/// bead from position b to b−r, with sign (−1)^(beads strictly between).
fn mn(parts: &[usize], class: &[usize]) -> i64 {
    if class.is_empty() {
        return 1;
    }
    let key = (parts.to_vec(), class.to_vec());
    if let Some(&v) = char_cache().lock().unwrap().get(&key) {
        return v;
    }
    let r = class[0];
    let rest = &class[1..];
    let l = parts.len();
    let beta: Vec<usize> = parts.iter().enumerate().map(|(i, &p)| p + l - 1 - i).collect();
    let mut total = 0i64;
    for (idx, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let between = beta.iter().filter(|&&x| x > b - r && x < b).count();
        let mut nb = beta.clone();
        nb[idx] = b - r;
        nb.sort_unstable_by(|a, b| b.cmp(a));
        let new_parts: Vec<usize> = nb
            .iter()
            .enumerate()
            .map(|(i, &x)| x + i + 1 - l)
            .filter(|&p| p > 0)
            .collect();
        let sign = if between % 2 == 0 { 1 } else { -1 };
        total += sign * mn(&new_parts, rest);
    }
    char_cache().lock().unwrap().insert(key, total);
    total
}

/// Central idempotent 𝒫_λ = (d_λ/n!) Σ_σ χ^λ(σ) σ.
pub fn isotypic_projector(shape: &IntegerPartition) -> GroupAlgebraElement {
    let n = shape.size();
    let fact: i64 = (1..=n as i64).product();
    let w = Q::new((shape.dimension() as i64).into(), fact.into());
    let mut terms = Vec::new();
    for s in all_permutations(n) {
        let chi = mn(&shape.parts, &s.cycle_type());
        if chi != 0 {
            terms.push((s, &w * qi(chi)));
        }
    }
    GroupAlgebraElement::from_terms(n, terms).expect("degrees agree")
}

/// Eigenvalue of Z_i(z) on the Gelfand–Tsetlin vector of T:
/// (i(z−1)/2 + Σ_{k≤i} c_k(T)) / z.
pub fn jm_eigenvalue_zi(t: &StandardTableau, i: usize, z: &Q) -> Result<Q> {
    let n = t.shape.size();
    if i > n {
        return Err(Error::IndexOutOfRange { index: i, max: n });
    }
    if z.is_zero() {
        return Err(Error::ZeroParameter);
    }
    let c: i64 = t.contents()[..i].iter().sum();
    Ok(z_eigenvalue(i, c, z))
}

/// (i(z−1)/2 + c)/z for a content sum c.
pub(crate) fn z_eigenvalue(i: usize, content_sum: i64, z: &Q) -> Q {
    let i = qi(i as i64);
    (&i * (z - Q::one()) / qi(2) + qi(content_sum)) / z
}

/// (R_λ, R_{2,λ}) = (∏(z + j − i), ∏(z + 2(j−1) − (i−1))) over 1-based cells.
pub fn r_factors(shape: &IntegerPartition, z: &Q) -> (Q, Q) {
    let mut r = Q::one();
    let mut r2 = Q::one();
    for (i, j) in shape.cells() {
        r *= z + qi(j as i64 - i as i64);
        r2 *= z + qi(2 * (j as i64 - 1) - (i as i64 - 1));
    }
    (r, r2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::q;
    use crate::perm::{hyperoctahedral_projector, Permutation};

    fn p(parts: &[usize]) -> IntegerPartition {
        IntegerPartition::new(parts).unwrap()
    }

    #[test]
    fn partition_counts() {
        assert_eq!(enumerate_partitions(0, None), vec![p(&[])]);
        assert_eq!(enumerate_partitions(4, None).len(), 5);
        assert_eq!(enumerate_partitions(4, Some(2)), vec![p(&[4]), p(&[3, 1]), p(&[2, 2])]);
        assert_eq!(enumerate_partitions(8, None).len(), 22);
        for lam in enumerate_partitions(6, None) {
            assert_eq!(lam.conjugate().conjugate(), lam);
            assert_eq!(lam.doubled().size(), 2 * lam.size());
        }
    }

    #[test]
    fn tableau_counts() {
        assert_eq!(enumerate_tableaux(&p(&[2, 1])).len(), 2);
        assert_eq!(enumerate_tableaux(&p(&[5])).len(), 1);
        assert_eq!(enumerate_tableaux(&p(&[2, 2])).len(), 2);
        for n in 1..=6 {
            let mut total = 0u128;
            for lam in enumerate_partitions(n, None) {
                let d = enumerate_tableaux(&lam).len() as u128;
                assert_eq!(d, lam.dimension());
                total += d * d;
            }
            assert_eq!(total, (1..=n as u128).product::<u128>());
        }
        for t in enumerate_tableaux(&p(&[3, 2, 1])) {
            assert_eq!(t.contents()[0], 0);
            assert_eq!(StandardTableau::from_rows(t.rows().to_vec()).unwrap(), t);
        }
    }

    // row orthogonality Σ_σ χ(σ)² = n!, degree = tableau count, χ^λ' = ε·χ^λ
    #[test]
    fn characters() {
        let s3 = [1usize, 1, 1];
        assert_eq!(character(&p(&[3]), &[3]).unwrap(), 1);
        assert_eq!(character(&p(&[1, 1, 1]), &[2, 1]).unwrap(), -1);
        assert_eq!(character(&p(&[2, 1]), &[3]).unwrap(), -1);
        assert_eq!(character(&p(&[2, 1]), &s3).unwrap(), 2);
        assert!(character(&p(&[2, 1]), &[2]).is_err());
        for n in 1..=6 {
            let perms = all_permutations(n);
            for lam in enumerate_partitions(n, None) {
                let sum_sq: i64 = perms.iter().map(|s| character(&lam, &s.cycle_type()).unwrap().pow(2)).sum();
                assert_eq!(sum_sq as usize, perms.len(), "{lam:?}");
                assert_eq!(character(&lam, &vec![1; n]).unwrap() as u128, lam.dimension());
                for s in &perms {
                    let sign = s.signature() as i64;
                    assert_eq!(character(&p(&vec![1; n]), &s.cycle_type()).unwrap(), sign);
                    assert_eq!(
                        character(&lam.conjugate(), &s.cycle_type()).unwrap(),
                        sign * character(&lam, &s.cycle_type()).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn projectors() {
        let sign2 = isotypic_projector(&p(&[1, 1]));
        let t = Permutation::transposition(2, 1, 2).unwrap();
        let expected = GroupAlgebraElement::from_terms(2, [(Permutation::identity(2), q(1, 2)), (t.clone(), q(-1, 2))]).unwrap();
        assert_eq!(sign2, expected);
        assert_eq!(isotypic_projector(&p(&[2])), expected.epsilon_twist());
        for n in 1..=5 {
            let lams = enumerate_partitions(n, None);
            let projs: Vec<_> = lams.iter().map(isotypic_projector).collect();
            let sum = projs.iter().fold(GroupAlgebraElement::zero(n), |a, b| &a + b);
            assert_eq!(sum, GroupAlgebraElement::identity(n));
            for (a, pa) in projs.iter().enumerate() {
                for (b, pb) in projs.iter().enumerate() {
                    let prod = pa * pb;
                    if a == b {
                        assert_eq!(&prod, pa);
                    } else {
                        assert!(prod.is_zero());
                    }
                }
                for k in 1..n {
                    let g = GroupAlgebraElement::from_perm(Permutation::transposition(n, k, k + 1).unwrap());
                    assert!(pa.commutes_with(&g));
                }
                let conj = isotypic_projector(&lams[a].conjugate());
                assert_eq!(pa.epsilon_twist(), conj);
            }
        }
    }

    #[test]
    fn odd_parts_kill_hyperoctahedral_projector() {
        for half in 1..=3 {
            let h = hyperoctahedral_projector(half);
            for mu in enumerate_partitions(2 * half, None) {
                let prod = &isotypic_projector(&mu) * &h;
                let odd = mu.parts().iter().any(|x| x % 2 == 1);
                assert_eq!(prod.is_zero(), odd, "{mu:?}");
            }
        }
    }

    #[test]
    fn jm_eigenvalues() {
        for t in enumerate_tableaux(&p(&[2, 1])) {
            assert_eq!(jm_eigenvalue_zi(&t, 1, &qi(3)).unwrap(), q(1, 3));
        }
        assert!(jm_eigenvalue_zi(&enumerate_tableaux(&p(&[1]))[0], 1, &Q::zero()).is_err());
        // single column of height N: Z_N(N) = 0
        for big_n in 1..=4 {
            let col = enumerate_tableaux(&p(&vec![1; big_n]))[0].clone();
            assert!(jm_eigenvalue_zi(&col, big_n, &qi(big_n as i64)).unwrap().is_zero());
        }
    }

    #[test]
    fn symplectic_and_orthogonal_minima() {
        // minimise over all shapes of size i, keeping those ρ does not kill
        for big_n in 1..=3usize {
            for i in 1..=7usize {
                let zs = qi(-2 * big_n as i64);
                let min_s = enumerate_partitions(i, None)
                    .into_iter()
                    .filter(|l| l.first_part() <= 2 * big_n)
                    .flat_map(|l| enumerate_tableaux(&l))
                    .map(|t| jm_eigenvalue_zi(&t, i, &zs).unwrap())
                    .min()
                    .unwrap();
                let (d, r) = ((i / (2 * big_n)) as i64, (i % (2 * big_n)) as i64);
                let nn = big_n as i64;
                let expected = q(d * (d + 1), 2) + q((2 * nn + 2 + 2 * d - r) * r, 4 * nn);
                assert_eq!(min_s, expected, "Sp N={big_n} i={i}");

                let zo = qi(big_n as i64);
                let min_o = enumerate_partitions(i, Some(big_n))
                    .into_iter()
                    .flat_map(|l| enumerate_tableaux(&l))
                    .map(|t| jm_eigenvalue_zi(&t, i, &zo).unwrap())
                    .min()
                    .unwrap();
                let (d, r) = ((i / big_n) as i64, (i % big_n) as i64);
                let expected = q(d * (d - 1), 2) + q((2 * d + nn - r) * r, 2 * nn);
                assert_eq!(min_o, expected, "O N={big_n} i={i}");
            }
        }
    }

    #[test]
    fn r_factor_examples() {
        let n = qi(5);
        assert_eq!(r_factors(&p(&[1]), &n), (qi(5), qi(5)));
        assert_eq!(r_factors(&p(&[2]), &n), (qi(30), qi(35)));
        assert_eq!(r_factors(&p(&[1, 1]), &qi(1)).0, Q::zero());
    }
}
