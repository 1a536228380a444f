//! Symmetric eigendecomposition.
//!
//! Small matrices (dimension <= 64) go through cyclic Jacobi rotations;
//! larger ones are reduced to tridiagonal form by Householder reflections
//! and then diagonalized by the QL algorithm with implicit shifts. Both
//! paths are deterministic and depend only on this crate.

use super::mat::{Mat, SymmetricMatrix};
use crate::error::Error;
use crate::Result;

/// Off-diagonal convergence tolerance, relative to the largest absolute
/// entry of the input.
const OFF_DIAGONAL_TOL: f64 = 1e-12;

/// Dimension above which the tridiagonal QL path replaces cyclic Jacobi.
const JACOBI_MAX_DIM: usize = 64;

/// Eigenvalues in descending order with matching orthonormal eigenvector
/// columns: `vectors.get(r, j)` is component `r` of the eigenvector for
/// `values[j]`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Mat,
}

/// Full eigendecomposition of a symmetric matrix.
pub fn sym_eigen(a: &SymmetricMatrix) -> Result<EigenDecomposition> {
    let n = a.dim();
    if n == 0 {
        return Ok(EigenDecomposition {
            values: vec![],
            vectors: Mat::zeros(0, 0),
        });
    }
    let (mut values, mut vectors) = if n <= JACOBI_MAX_DIM {
        jacobi(a)?
    } else {
        householder_ql(a)?
    };
    sort_descending(&mut values, &mut vectors);
    Ok(EigenDecomposition { values, vectors })
}

fn sort_descending(values: &mut [f64], vectors: &mut Mat) {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[j].partial_cmp(&values[i]).expect("non-finite eigenvalue"));
    let old_values = values.to_vec();
    let old_vectors = vectors.clone();
    for (new_col, &old_col) in order.iter().enumerate() {
        values[new_col] = old_values[old_col];
        for r in 0..n {
            vectors.set(r, new_col, old_vectors.get(r, old_col));
        }
    }
}

/// Cyclic Jacobi: sweep all (p, q) pairs, rotating each off-diagonal entry
/// to zero, until the largest off-diagonal magnitude falls under tolerance.
fn jacobi(m: &SymmetricMatrix) -> Result<(Vec<f64>, Mat)> {
    let n = m.dim();
    let mut a = m.to_mat();
    let mut v = Mat::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 });
    let scale = a.max_abs();
    if scale == 0.0 {
        return Ok((vec![0.0; n], v));
    }
    let tol = OFF_DIAGONAL_TOL * scale;

    // Once the off-diagonal falls under tolerance, one extra sweep runs
    // before extraction: convergence is quadratic at that point, so the
    // polish pass lands the residual near machine precision instead of
    // leaving it at the tolerance itself.
    let mut polished = false;
    for _sweep in 0..100 {
        let mut off_max = 0.0_f64;
        for p in 0..n {
            for q in p + 1..n {
                off_max = off_max.max(a.get(p, q).abs());
            }
        }
        if off_max <= tol && (polished || off_max == 0.0) {
            let values = (0..n).map(|i| a.get(i, i)).collect();
            return Ok((values, v));
        }
        polished = off_max <= tol;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq.abs() <= tol * 1e-3 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                // tan of the rotation angle, with the smaller-magnitude root.
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Update the two diagonal entries and zero (p, q).
                a.set(p, p, app - t * apq);
                a.set(q, q, aqq + t * apq);
                a.set(p, q, 0.0);
                a.set(q, p, 0.0);
                for k in 0..n {
                    if k != p && k != q {
                        let akp = a.get(k, p);
                        let akq = a.get(k, q);
                        let new_kp = c * akp - s * akq;
                        let new_kq = s * akp + c * akq;
                        a.set(k, p, new_kp);
                        a.set(p, k, new_kp);
                        a.set(k, q, new_kq);
                        a.set(q, k, new_kq);
                    }
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }
    Err(Error::NoConvergence(
        "Jacobi eigendecomposition exceeded 100 sweeps".into(),
    ))
}

/// Householder reduction to tridiagonal form followed by QL with implicit
/// shifts; transformations are accumulated so eigenvectors come out in the
/// original basis.
fn householder_ql(m: &SymmetricMatrix) -> Result<(Vec<f64>, Mat)> {
    let n = m.dim();
    let mut z = m.to_mat();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];

    // --- Householder tridiagonalization, accumulating transforms in z. ---
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += z.get(i, k).abs();
            }
            if scale == 0.0 {
                e[i] = z.get(i, l);
            } else {
                for k in 0..=l {
                    let v = z.get(i, k) / scale;
                    z.set(i, k, v);
                    h += v * v;
                }
                let f = z.get(i, l);
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                z.set(i, l, f - g);
                let mut f_acc = 0.0;
                for j in 0..=l {
                    z.set(j, i, z.get(i, j) / h);
                    let mut g_acc = 0.0;
                    for k in 0..=j {
                        g_acc += z.get(j, k) * z.get(i, k);
                    }
                    for k in j + 1..=l {
                        g_acc += z.get(k, j) * z.get(i, k);
                    }
                    e[j] = g_acc / h;
                    f_acc += e[j] * z.get(i, j);
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = z.get(i, j);
                    let gj = e[j] - hh * f;
                    e[j] = gj;
                    for k in 0..=j {
                        let v = z.get(j, k) - (f * e[k] + gj * z.get(i, k));
                        z.set(j, k, v);
                    }
                }
            }
        } else {
            e[i] = z.get(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += z.get(i, k) * z.get(k, j);
                }
                for k in 0..i {
                    let v = z.get(k, j) - g * z.get(k, i);
                    z.set(k, j, v);
                }
            }
        }
        d[i] = z.get(i, i);
        z.set(i, i, 1.0);
        for j in 0..i {
            z.set(j, i, 0.0);
            z.set(i, j, 0.0);
        }
    }

    // --- QL with implicit shifts on the tridiagonal (d, e). ---
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut mm = l;
            while mm + 1 < n {
                let dd = d[mm].abs() + d[mm + 1].abs();
                if e[mm].abs() <= OFF_DIAGONAL_TOL * dd {
                    break;
                }
                mm += 1;
            }
            if mm == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::NoConvergence(
                    "QL eigendecomposition exceeded 50 shifts for one eigenvalue".into(),
                ));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            let sign_r = if g >= 0.0 { r.abs() } else { -r.abs() };
            g = d[mm] - d[l] + e[l] / (g + sign_r);
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..mm).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[mm] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    f = z.get(k, i + 1);
                    z.set(k, i + 1, s * z.get(k, i) + c * f);
                    z.set(k, i, c * z.get(k, i) - s * f);
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[mm] = 0.0;
        }
    }
    Ok((d, z))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual_max(a: &SymmetricMatrix, eig: &EigenDecomposition) -> f64 {
        // max |A - V Λ Vᵀ|
        let n = a.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += eig.vectors.get(i, k) * eig.values[k] * eig.vectors.get(j, k);
                }
                worst = worst.max((a.get(i, j) - s).abs());
            }
        }
        worst
    }

    fn orthonormality_max(eig: &EigenDecomposition) -> f64 {
        let n = eig.values.len();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += eig.vectors.get(k, i) * eig.vectors.get(k, j);
                }
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s - want).abs());
            }
        }
        worst
    }

    fn pseudo_random_symmetric(dim: usize, seed: u64) -> SymmetricMatrix {
        let mut state = seed | 1;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        SymmetricMatrix::from_lower_fn(dim, |_, _| next() * 5.0)
    }

    #[test]
    fn two_by_two_hand_computed() {
        // [[2, 1], [1, 2]] has eigenvalues 3 and 1 with eigenvectors along
        // (1, 1) and (1, -1).
        let a = SymmetricMatrix::from_lower_fn(2, |i, j| if i == j { 2.0 } else { 1.0 });
        let eig = sym_eigen(&a).unwrap();
        assert!((eig.values[0] - 3.0).abs() < 1e-12);
        assert!((eig.values[1] - 1.0).abs() < 1e-12);
        let ratio = eig.vectors.get(0, 0) / eig.vectors.get(1, 0);
        assert!((ratio - 1.0).abs() < 1e-10, "first eigenvector not along (1,1)");
    }

    #[test]
    fn diagonal_matrix_sorts_descending() {
        let diag = [4.0, -1.0, 7.0, 0.5];
        let a = SymmetricMatrix::from_lower_fn(4, |i, j| if i == j { diag[i] } else { 0.0 });
        let eig = sym_eigen(&a).unwrap();
        assert_eq!(eig.values, vec![7.0, 4.0, 0.5, -1.0]);
    }

    #[test]
    fn rank_one_matrix() {
        // v vᵀ with v = (1, 2, 2): top eigenvalue |v|² = 9, others 0.
        let v = [1.0, 2.0, 2.0];
        let a = SymmetricMatrix::from_lower_fn(3, |i, j| v[i] * v[j]);
        let eig = sym_eigen(&a).unwrap();
        assert!((eig.values[0] - 9.0).abs() < 1e-10);
        assert!(eig.values[1].abs() < 1e-10);
        assert!(eig.values[2].abs() < 1e-10);
    }

    #[test]
    fn residual_and_orthonormality_across_both_paths() {
        // Dimensions on both sides of the Jacobi/QL switch at 64.
        for &dim in &[2usize, 3, 5, 10, 30, 50, 64, 65, 80, 100] {
            let a = pseudo_random_symmetric(dim, dim as u64 * 7919 + 3);
            let eig = sym_eigen(&a).unwrap();
            let scale = a.to_mat().max_abs();
            let res = residual_max(&a, &eig);
            assert!(
                res <= 1e-8 * scale,
                "dim {dim}: residual {res} vs scale {scale}"
            );
            let ortho = orthonormality_max(&eig);
            assert!(ortho <= 1e-9, "dim {dim}: orthonormality defect {ortho}");
        }
    }

    #[test]
    fn jacobi_and_ql_agree_on_same_matrix() {
        let a = pseudo_random_symmetric(20, 99);
        let (mut jv, _) = jacobi(&a).unwrap();
        let (mut qv, _) = householder_ql(&a).unwrap();
        jv.sort_by(|x, y| y.partial_cmp(x).unwrap());
        qv.sort_by(|x, y| y.partial_cmp(x).unwrap());
        for (x, y) in jv.iter().zip(&qv) {
            assert!((x - y).abs() < 1e-9 * (1.0 + x.abs()), "{x} vs {y}");
        }
    }

    #[test]
    fn zero_matrix() {
        let a = SymmetricMatrix::zeros(5);
        let eig = sym_eigen(&a).unwrap();
        assert!(eig.values.iter().all(|&v| v == 0.0));
        assert!(orthonormality_max(&eig) == 0.0);
    }

    #[test]
    fn trace_is_preserved() {
        for &dim in &[7usize, 33, 90] {
            let a = pseudo_random_symmetric(dim, 1234 + dim as u64);
            let eig = sym_eigen(&a).unwrap();
            let trace: f64 = (0..dim).map(|i| a.get(i, i)).sum();
            let sum: f64 = eig.values.iter().sum();
            assert!(
                (trace - sum).abs() < 1e-8 * (1.0 + trace.abs()),
                "dim {dim}: trace {trace} vs eigenvalue sum {sum}"
            );
        }
    }
}
