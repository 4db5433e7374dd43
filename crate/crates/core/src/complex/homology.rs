//! Reduced integral homology through Smith normal form of boundary
//! matrices, over arbitrary-precision integers so torsion is exact and
//! intermediate blow-up is harmless. The all-trivial profile is the
//! acyclicity certificate used by the fixed-point pipeline.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::ComplexError;

use super::ExplicitComplex;

/// One reduced homology group: free rank plus torsion coefficients ≥ 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub betti: usize,
    pub torsion: Vec<u64>,
}

impl HomologyGroup {
    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

/// Reduced homology in each dimension 0..=dim of the complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyProfile {
    pub reduced: bool,
    pub groups: Vec<HomologyGroup>,
}

impl HomologyProfile {
    pub fn is_trivial(&self) -> bool {
        self.groups.iter().all(HomologyGroup::is_trivial)
    }

    pub fn betti(&self, dim: usize) -> usize {
        self.groups.get(dim).map(|g| g.betti).unwrap_or(0)
    }

    pub fn torsion(&self, dim: usize) -> &[u64] {
        self.groups
            .get(dim)
            .map(|g| g.torsion.as_slice())
            .unwrap_or(&[])
    }
}

/// Reduced integral homology of a finite explicit complex. `cell_budget`
/// caps the entry count of any one boundary matrix.
pub fn reduced_homology(
    ec: &ExplicitComplex,
    cell_budget: usize,
) -> Result<HomologyProfile, ComplexError> {
    let Some(dim) = ec.dim() else {
        return Ok(HomologyProfile {
            reduced: true,
            groups: Vec::new(),
        });
    };

    // Chain bases per dimension, in the complex's deterministic order.
    let mut basis: Vec<Vec<&Vec<u32>>> = vec![Vec::new(); dim + 1];
    for s in ec.simplices() {
        basis[s.len() - 1].push(s);
    }
    let index: Vec<HashMap<&Vec<u32>, usize>> = basis
        .iter()
        .map(|b| b.iter().enumerate().map(|(i, s)| (*s, i)).collect())
        .collect();

    // rank(∂_k) for k = 0..=dim+1, and the invariant factors of ∂_(k+1)
    // for torsion. ∂_0 is the augmentation onto the empty simplex.
    let mut ranks = vec![0usize; dim + 2];
    let mut torsions: Vec<Vec<u64>> = vec![Vec::new(); dim + 2];
    for k in 0..=dim {
        let rows = if k == 0 { 1 } else { basis[k - 1].len() };
        let cols = basis[k].len();
        if rows.saturating_mul(cols) > cell_budget {
            return Err(ComplexError::MatrixBudget { dim: k, rows, cols });
        }
        let mut m = vec![vec![BigInt::zero(); cols]; rows];
        for (j, s) in basis[k].iter().enumerate() {
            if k == 0 {
                m[0][j] = BigInt::one();
            } else {
                for (drop, _) in s.iter().enumerate() {
                    let mut face: Vec<u32> = s.to_vec();
                    face.remove(drop);
                    let i = index[k - 1][&face];
                    m[i][j] = if drop % 2 == 0 {
                        BigInt::one()
                    } else {
                        -BigInt::one()
                    };
                }
            }
        }
        let inv = smith_invariants(m);
        ranks[k] = inv.len();
        torsions[k] = inv
            .iter()
            .filter(|d| d.abs() > BigInt::one())
            .map(|d| {
                // Desk-scale torsion fits comfortably in u64.
                d.abs().try_into().expect("torsion coefficient fits u64")
            })
            .collect();
    }

    let mut groups = Vec::with_capacity(dim + 1);
    for k in 0..=dim {
        let betti = basis[k].len() - ranks[k] - ranks.get(k + 1).copied().unwrap_or(0);
        groups.push(HomologyGroup {
            betti,
            torsion: torsions.get(k + 1).cloned().unwrap_or_default(),
        });
    }
    Ok(HomologyProfile {
        reduced: true,
        groups,
    })
}

/// Nonzero diagonal entries of the Smith normal form, with the
/// divisibility chain d₁ | d₂ | …; unimodular row/column operations only.
pub fn smith_invariants(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = m.len();
    let cols = if rows > 0 { m[0].len() } else { 0 };
    let mut invariants = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_abs_nonzero(&m, t) else {
            break;
        };
        m.swap(t, pi);
        swap_cols(&mut m, t, pj);
        'reduce: loop {
            for i in (t + 1)..rows {
                if !m[i][t].is_zero() {
                    let q = &m[i][t] / &m[t][t];
                    row_sub(&mut m, i, t, &q);
                    if !m[i][t].is_zero() {
                        m.swap(t, i);
                        continue 'reduce;
                    }
                }
            }
            for j in (t + 1)..cols {
                if !m[t][j].is_zero() {
                    let q = &m[t][j] / &m[t][t];
                    col_sub(&mut m, j, t, &q);
                    if !m[t][j].is_zero() {
                        swap_cols(&mut m, t, j);
                        continue 'reduce;
                    }
                }
            }
            // Pivot divides everything in its row/column; enforce the
            // divisibility chain on the rest of the submatrix.
            match find_nondivisible(&m, t) {
                Some(i) => {
                    row_add(&mut m, t, i);
                    continue 'reduce;
                }
                None => break,
            }
        }
        if m[t][t].is_negative() {
            for j in t..cols {
                let v = -m[t][j].clone();
                m[t][j] = v;
            }
        }
        invariants.push(m[t][t].clone());
        t += 1;
    }
    invariants
}

fn min_abs_nonzero(m: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in m.iter().enumerate().skip(t) {
        for (j, v) in row.iter().enumerate().skip(t) {
            if !v.is_zero() {
                match best {
                    Some((bi, bj)) if m[bi][bj].abs() <= v.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
    }
    best
}

fn find_nondivisible(m: &[Vec<BigInt>], t: usize) -> Option<usize> {
    let pivot = m[t][t].clone();
    for (i, row) in m.iter().enumerate().skip(t + 1) {
        for v in row.iter().skip(t + 1) {
            if !(v % &pivot).is_zero() {
                return Some(i);
            }
        }
    }
    None
}

fn row_sub(m: &mut [Vec<BigInt>], i: usize, t: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let row_t = m[t].clone();
    for (a, b) in m[i].iter_mut().zip(row_t.iter()) {
        *a -= q * b;
    }
}

fn row_add(m: &mut [Vec<BigInt>], t: usize, i: usize) {
    let row_i = m[i].clone();
    for (a, b) in m[t].iter_mut().zip(row_i.iter()) {
        *a += b;
    }
}

fn col_sub(m: &mut [Vec<BigInt>], j: usize, t: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let v = &row[t] * q;
        row[j] -= v;
    }
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        v.iter()
            .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn smith_known_matrix() {
        let m = big(&[
            &[-6, 111, -36, 6],
            &[5, -672, 210, 74],
            &[0, -255, 81, 24],
            &[-7, 255, -81, -10],
        ]);
        let inv = smith_invariants(m);
        let vals: Vec<i64> = inv.iter().map(|v| v.try_into().unwrap()).collect();
        assert_eq!(vals, vec![1, 3, 21]);
    }

    #[test]
    fn smith_respects_divisibility_chain() {
        let m = big(&[&[2, 0], &[0, 3]]);
        let inv = smith_invariants(m);
        let vals: Vec<i64> = inv.iter().map(|v| v.try_into().unwrap()).collect();
        assert_eq!(vals, vec![1, 6]);
    }

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("v{i}")).collect()
    }

    #[test]
    fn full_simplices_are_acyclic() {
        for n in 1..=7 {
            let simplex: Vec<u32> = (0..n as u32).collect();
            let ec = ExplicitComplex::from_simplices(labels(n), &[simplex], 1_000).unwrap();
            let profile = reduced_homology(&ec, 1_000_000).unwrap();
            assert!(profile.is_trivial(), "full {n}-vertex simplex");
        }
    }

    #[test]
    fn hollow_triangle_is_a_circle() {
        let ec = ExplicitComplex::from_simplices(
            labels(3),
            &[vec![0, 1], vec![1, 2], vec![0, 2]],
            100,
        )
        .unwrap();
        let profile = reduced_homology(&ec, 10_000).unwrap();
        assert_eq!(profile.betti(0), 0);
        assert_eq!(profile.betti(1), 1);
        assert!(profile.torsion(0).is_empty() && profile.torsion(1).is_empty());
    }

    #[test]
    fn tetrahedron_boundary_is_a_sphere() {
        let ec = ExplicitComplex::from_simplices(
            labels(4),
            &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
            100,
        )
        .unwrap();
        let profile = reduced_homology(&ec, 10_000).unwrap();
        assert_eq!(profile.betti(0), 0);
        assert_eq!(profile.betti(1), 0);
        assert_eq!(profile.betti(2), 1);
    }

    #[test]
    fn cones_are_acyclic() {
        let hollow = ExplicitComplex::from_simplices(
            labels(3),
            &[vec![0, 1], vec![1, 2], vec![0, 2]],
            100,
        )
        .unwrap();
        let cone = hollow.cone("apex", 1_000).unwrap();
        let profile = reduced_homology(&cone, 10_000).unwrap();
        assert!(profile.is_trivial());

        let two_points =
            ExplicitComplex::from_simplices(labels(2), &[vec![0], vec![1]], 10).unwrap();
        assert_eq!(reduced_homology(&two_points, 100).unwrap().betti(0), 1);
        let cone = two_points.cone("apex", 100).unwrap();
        assert!(reduced_homology(&cone, 100).unwrap().is_trivial());
    }

    #[test]
    fn subdivision_preserves_homology() {
        let cases = vec![
            ExplicitComplex::from_simplices(
                labels(3),
                &[vec![0, 1], vec![1, 2], vec![0, 2]],
                100,
            )
            .unwrap(),
            ExplicitComplex::from_simplices(
                labels(4),
                &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
                100,
            )
            .unwrap(),
            ExplicitComplex::from_simplices(labels(4), &[vec![0, 1, 2, 3]], 100).unwrap(),
            ExplicitComplex::from_simplices(labels(4), &[vec![0, 1], vec![2, 3]], 100).unwrap(),
        ];
        for ec in cases {
            let sd = ec.barycentric_subdivision(100_000).unwrap();
            assert_eq!(
                reduced_homology(&sd, 4_000_000).unwrap(),
                reduced_homology(&ec, 4_000_000).unwrap()
            );
            assert_eq!(sd.euler_characteristic(), ec.euler_characteristic());
        }
    }

    #[test]
    fn euler_characteristic_matches_betti_alternation() {
        // For torsion-free small instances: χ = 1 + Σ (−1)^k b̃_k.
        let cases = vec![
            ExplicitComplex::from_simplices(labels(3), &[vec![0, 1, 2]], 100).unwrap(),
            ExplicitComplex::from_simplices(
                labels(3),
                &[vec![0, 1], vec![1, 2], vec![0, 2]],
                100,
            )
            .unwrap(),
            ExplicitComplex::from_simplices(labels(4), &[vec![0, 1], vec![2, 3]], 100).unwrap(),
        ];
        for ec in cases {
            let profile = reduced_homology(&ec, 10_000).unwrap();
            let alt: i64 = profile
                .groups
                .iter()
                .enumerate()
                .map(|(k, g)| {
                    let b = g.betti as i64;
                    if k % 2 == 0 {
                        b
                    } else {
                        -b
                    }
                })
                .sum();
            assert_eq!(ec.euler_characteristic(), 1 + alt);
        }
    }

    #[test]
    fn matrix_budget_is_enforced() {
        let ec = ExplicitComplex::from_simplices(labels(5), &[vec![0, 1, 2, 3, 4]], 1000)
            .unwrap();
        let err = reduced_homology(&ec, 3).unwrap_err();
        assert!(matches!(err, ComplexError::MatrixBudget { .. }));
    }
}
