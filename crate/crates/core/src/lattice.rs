//! Integer linear algebra: Hermite and Smith normal forms, kernels, and
//! finitely generated abelian groups presented by relations.
//!
//! Matrices are `Vec<Vec<i64>>` in row-major order. Entries stay small for
//! every root system in scope, so plain `i64` arithmetic is used and overflow
//! panics in debug builds rather than wrapping silently.

use std::fmt;

pub type Mat = Vec<Vec<i64>>;

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn transpose(a: &Mat) -> Mat {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|row| row[j]).collect())
        .collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Mat, v: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `x^T m y`.
pub fn bilinear(m: &Mat, x: &[i64], y: &[i64]) -> i64 {
    dot(x, &mat_vec(m, y))
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(a: &Mat) -> i64 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    (sign * m[n - 1][n - 1]) as i64
}

/// Row-style Hermite normal form of the lattice spanned by `gens`.
///
/// Output rows are echelon with positive pivots; entries above each pivot lie
/// in `[0, pivot)`. Zero rows are dropped, so the result is a basis.
pub fn hnf_rows(gens: &[Vec<i64>]) -> Mat {
    let mut a: Mat = gens.to_vec();
    if a.is_empty() {
        return a;
    }
    let cols = a[0].len();
    let mut p = 0;
    for c in 0..cols {
        if p == a.len() {
            break;
        }
        loop {
            let best = (p..a.len())
                .filter(|&i| a[i][c] != 0)
                .min_by_key(|&i| a[i][c].abs());
            let Some(best) = best else { break };
            a.swap(p, best);
            let mut done = true;
            for i in p + 1..a.len() {
                if a[i][c] != 0 {
                    let q = a[i][c] / a[p][c];
                    let pivot_row = a[p].clone();
                    for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                        *x -= q * y;
                    }
                    if a[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if a[p][c] == 0 {
            continue;
        }
        if a[p][c] < 0 {
            for x in a[p].iter_mut() {
                *x = -*x;
            }
        }
        let pivot_row = a[p].clone();
        for i in 0..p {
            let q = a[i][c].div_euclid(pivot_row[c]);
            if q != 0 {
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= q * y;
                }
            }
        }
        p += 1;
    }
    a.truncate(p);
    a
}

/// Coordinates of `x` in an echelon basis, or `None` if `x` is not in the
/// lattice it spans.
pub fn hnf_coords(basis: &Mat, x: &[i64]) -> Option<Vec<i64>> {
    let mut rest = x.to_vec();
    let mut coords = Vec::with_capacity(basis.len());
    for row in basis {
        let c = row.iter().position(|&v| v != 0)?;
        if rest[..c].iter().any(|&v| v != 0) {
            return None;
        }
        if rest[c] % row[c] != 0 {
            return None;
        }
        let q = rest[c] / row[c];
        for (r, b) in rest.iter_mut().zip(row) {
            *r -= q * b;
        }
        coords.push(q);
    }
    if rest.iter().all(|&v| v == 0) {
        Some(coords)
    } else {
        None
    }
}

/// Smith normal form `u * a * v = diag(d)` of an `m x k` matrix.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: Mat,
    pub v: Mat,
    /// Diagonal of length `min(m, k)`; nonzero entries first, each dividing
    /// the next, all nonnegative.
    pub diag: Vec<i64>,
}

pub fn smith(a: &Mat, cols: usize) -> Smith {
    let m = a.len();
    let k = cols;
    let mut a = a.clone();
    let mut u = identity(m);
    let mut v = identity(k);

    let swap_cols = |a: &mut Mat, v: &mut Mat, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
    };
    // col_j -= q * col_i
    let col_op = |a: &mut Mat, v: &mut Mat, j: usize, i: usize, q: i64| {
        for row in a.iter_mut() {
            row[j] -= q * row[i];
        }
        for row in v.iter_mut() {
            row[j] -= q * row[i];
        }
    };
    // row_j -= q * row_i
    let row_op = |a: &mut Mat, u: &mut Mat, j: usize, i: usize, q: i64| {
        let ri = a[i].clone();
        for (x, y) in a[j].iter_mut().zip(&ri) {
            *x -= q * y;
        }
        let ui = u[i].clone();
        for (x, y) in u[j].iter_mut().zip(&ui) {
            *x -= q * y;
        }
    };

    for t in 0..m.min(k) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..k {
                    if a[i][j] != 0
                        && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            a.swap(t, bi);
            u.swap(t, bi);
            swap_cols(&mut a, &mut v, t, bj);

            let mut clean = true;
            for i in t + 1..m {
                if a[i][t] != 0 {
                    let q = a[i][t] / a[t][t];
                    row_op(&mut a, &mut u, i, t, q);
                    clean &= a[i][t] == 0;
                }
            }
            for j in t + 1..k {
                if a[t][j] != 0 {
                    let q = a[t][j] / a[t][t];
                    col_op(&mut a, &mut v, j, t, q);
                    clean &= a[t][j] == 0;
                }
            }
            if !clean {
                continue;
            }
            let pivot = a[t][t];
            let offender = (t + 1..m).find(|&i| (t + 1..k).any(|j| a[i][j] % pivot != 0));
            match offender {
                Some(i) => row_op(&mut a, &mut u, t, i, -1),
                None => break,
            }
        }
        if a[t][t] < 0 {
            for x in a[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
    }
    let diag = (0..m.min(k)).map(|t| a[t][t]).collect();
    Smith { u, v, diag }
}

/// Basis (as rows) of the integer kernel `{x : a x = 0}`, saturated.
pub fn kernel(a: &Mat, cols: usize) -> Mat {
    if a.is_empty() {
        return identity(cols);
    }
    let s = smith(a, cols);
    let rank = s.diag.iter().filter(|&&d| d != 0).count();
    let vt = transpose(&s.v);
    hnf_rows(&vt[rank..])
}

/// A finitely generated abelian group `Z^ambient / span(relations)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    /// Invariant factors, `1`s removed; `0` marks a free summand.
    pub invariants: Vec<i64>,
    /// Rows of the change of basis that yield canonical coordinates.
    projection: Mat,
}

impl AbelianGroup {
    /// `relations` are vectors in the ambient lattice.
    pub fn from_relations(ambient: usize, relations: &[Vec<i64>]) -> Self {
        if relations.is_empty() {
            return AbelianGroup {
                invariants: vec![0; ambient],
                projection: identity(ambient),
            };
        }
        let rel_mat = transpose(&relations.to_vec());
        let s = smith(&rel_mat, relations.len());
        let mut invariants = Vec::new();
        let mut projection = Vec::new();
        for i in 0..ambient {
            let d = s.diag.get(i).copied().unwrap_or(0);
            if d != 1 {
                invariants.push(d);
                projection.push(s.u[i].clone());
            }
        }
        // Free summands come last in Smith form; list torsion first, then free.
        let mut order: Vec<usize> = (0..invariants.len()).collect();
        order.sort_by_key(|&i| (invariants[i] == 0, invariants[i]));
        AbelianGroup {
            invariants: order.iter().map(|&i| invariants[i]).collect(),
            projection: order.iter().map(|&i| projection[i].clone()).collect(),
        }
    }

    /// Canonical representative of the class of `x`.
    pub fn class(&self, x: &[i64]) -> Vec<i64> {
        self.projection
            .iter()
            .zip(&self.invariants)
            .map(|(row, &d)| {
                let y = dot(row, x);
                if d == 0 {
                    y
                } else {
                    y.rem_euclid(d)
                }
            })
            .collect()
    }

    pub fn free_rank(&self) -> usize {
        self.invariants.iter().filter(|&&d| d == 0).count()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == 0
    }

    pub fn order(&self) -> Option<u64> {
        self.is_finite()
            .then(|| self.invariants.iter().map(|&d| d as u64).product())
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants.is_empty()
    }

    /// Order of the subgroup of elements killed by `n`.
    pub fn torsion_order(&self, n: i64) -> u64 {
        self.invariants
            .iter()
            .map(|&d| if d == 0 { 1 } else { num_integer::gcd(d, n) as u64 })
            .product()
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter()
            .zip(b)
            .zip(&self.invariants)
            .map(|((x, y), &d)| if d == 0 { x + y } else { (x + y).rem_euclid(d) })
            .collect()
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.invariants.len()]
    }

    /// Size of the subgroup generated by the classes of `gens`.
    pub fn generated_order(&self, gens: &[Vec<i64>]) -> u64 {
        assert!(self.is_finite(), "subgroup enumeration needs a finite group");
        let gens: Vec<Vec<i64>> = gens.iter().map(|g| self.class(g)).collect();
        let mut seen = std::collections::BTreeSet::new();
        let mut stack = vec![self.zero()];
        seen.insert(self.zero());
        while let Some(x) = stack.pop() {
            for g in &gens {
                let y = self.add(&x, g);
                if seen.insert(y.clone()) {
                    stack.push(y);
                }
            }
        }
        seen.len() as u64
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariants.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .invariants
            .iter()
            .map(|&d| if d == 0 { "Z".to_string() } else { format!("Z/{d}") })
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_of_scaled_lattice() {
        let b = hnf_rows(&[vec![4, 2], vec![2, 0]]);
        assert_eq!(b, vec![vec![2, 0], vec![0, 2]]);
        assert_eq!(hnf_coords(&b, &[4, -2]), Some(vec![2, -1]));
        assert_eq!(hnf_coords(&b, &[1, 0]), None);
    }

    #[test]
    fn smith_reconstructs() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let s = smith(&a, 3);
        assert_eq!(s.diag, vec![2, 6, 12]);
        let d = mat_mul(&mat_mul(&s.u, &a), &s.v);
        for (i, row) in d.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                assert_eq!(x, if i == j { s.diag[i] } else { 0 });
            }
        }
        assert_eq!(det(&s.u).abs(), 1);
        assert_eq!(det(&s.v).abs(), 1);
    }

    #[test]
    fn kernel_is_annihilated() {
        let a = vec![vec![1, -1, 0], vec![0, 1, -1]];
        let k = kernel(&a, 3);
        assert_eq!(k, vec![vec![1, 1, 1]]);
    }

    #[test]
    fn group_from_cartan() {
        // A2 weight lattice mod root lattice.
        let g = AbelianGroup::from_relations(2, &[vec![2, -1], vec![-1, 2]]);
        assert_eq!(g.invariants, vec![3]);
        assert_eq!(g.order(), Some(3));
        assert_eq!(g.class(&[2, -1]), vec![0]);
        assert_ne!(g.class(&[1, 0]), vec![0]);
        assert_eq!(g.to_string(), "Z/3");
    }

    #[test]
    fn group_with_free_part() {
        let g = AbelianGroup::from_relations(2, &[vec![2, 0]]);
        assert_eq!(g.invariants, vec![2, 0]);
        assert!(!g.is_finite());
        assert_eq!(g.to_string(), "Z/2 x Z");
    }

    #[test]
    fn determinant() {
        assert_eq!(det(&vec![vec![2, -1], vec![-1, 2]]), 3);
        assert_eq!(det(&vec![vec![0, 1], vec![1, 0]]), -1);
    }
}
