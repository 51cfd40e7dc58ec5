//! Brute-force reference implementations for test suites.
//!
//! Everything here trades speed for being unarguably exhaustive, and
//! shares no code with the fast implementations it cross-checks.

/// Exact sign of `ax*by - ay*bx`: straightforward evaluation with an
/// error-bound filter, falling back to fused-multiply-add expansion
/// near zero. Point-vs-line classifications must be exact or the
/// enumeration below can emit sets no halfplane achieves.
fn cross_sign(ax: f64, ay: f64, bx: f64, by: f64) -> i8 {
    let p = ax * by;
    let q = ay * bx;
    let det = p - q;
    let bound = 4.0 * f64::EPSILON * (p.abs() + q.abs());
    if det > bound {
        return 1;
    }
    if det < -bound {
        return -1;
    }
    let e = ax.mul_add(by, -p);
    let f = ay.mul_add(bx, -q);
    let s = p - q;
    let bv = p - s;
    let t = (p - (s + bv)) + (bv - q);
    let rest = t + (e - f);
    let z = s + rest;
    let zv = s - z;
    let w = (s - (z + zv)) + (rest + zv);
    let total = if z != 0.0 { z } else { w };
    if total > 0.0 {
        1
    } else if total < 0.0 {
        -1
    } else {
        0
    }
}

/// Exact maximum of `|(1/N) Σ_{i∈S} r_i|` over every subset S of the
/// points that a closed halfplane `{x : ω·x + b ≥ 0}` can capture.
///
/// Enumeration: the empty and full sets, plus, for every ordered pair
/// (a, b), the eight sets reachable with a boundary through a and b
/// (both sides, boundary captured or excluded) or through a alone with
/// the line rotated infinitesimally off b (b and any points collinear
/// with the pair land on the side their position along the line
/// dictates). Sides are decided by the sign of the cross product; sums
/// accumulate in ascending point order, matching the canonical
/// evaluation of the fast sweep. O(N³).
pub fn halfplane_brute_max(points: &[[f64; 2]], r: &[f64]) -> f64 {
    assert_eq!(points.len(), r.len());
    let n = points.len();
    let nf = n as f64;
    let full: f64 = r.iter().sum();
    let mut best = (full / nf).abs();

    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let ux = points[b][0] - points[a][0];
            let uy = points[b][1] - points[a][1];
            // Eight candidate sums per ordered pair:
            //   0: strictly left            4: left  + {a} + behind-collinear
            //   1: strictly right           5: right + {a} + behind-collinear
            //   2: left  + boundary         6: left  + {a} + ahead-collinear + {b}
            //   3: right + boundary         7: right + {a} + ahead-collinear + {b}
            let mut sums = [0.0f64; 8];
            for i in 0..n {
                let ri = r[i];
                let add = |sums: &mut [f64; 8], idxs: &[usize]| {
                    for &k in idxs {
                        sums[k] += ri;
                    }
                };
                if i == a {
                    add(&mut sums, &[2, 3, 4, 5, 6, 7]);
                } else if i == b {
                    add(&mut sums, &[2, 3, 6, 7]);
                } else {
                    let wx = points[i][0] - points[a][0];
                    let wy = points[i][1] - points[a][1];
                    let side = cross_sign(ux, uy, wx, wy);
                    if side > 0 {
                        add(&mut sums, &[0, 2, 4, 6]);
                    } else if side < 0 {
                        add(&mut sums, &[1, 3, 5, 7]);
                    } else {
                        // Collinear with the pair: on the boundary for
                        // the unrotated line, signed by position along
                        // it after rotation.
                        let along = ux * wx + uy * wy;
                        if along > 0.0 {
                            add(&mut sums, &[2, 3, 6, 7]);
                        } else {
                            add(&mut sums, &[2, 3, 4, 5]);
                        }
                    }
                }
            }
            for s in sums {
                let value = (s / nf).abs();
                if value > best {
                    best = value;
                }
            }
        }
    }
    best
}

/// Solves a dense linear system by Gaussian elimination with partial
/// pivoting. Returns None when a pivot falls below 1e-12.
#[allow(clippy::needless_range_loop)]
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Some(x)
}

/// Exact `min Σ|aᵢ|` subject to `Σ aᵢ gᵢ = f` (Euclidean inner
/// product), by enumerating supports together with sign patterns: for
/// every subset of atoms and every σ ∈ {±1}^|subset| solve the
/// least-squares system in the signed atoms under the nonnegativity
/// convention, keep solutions that represent f within `tolerance`.
/// Returns None when no representation exists.
pub fn min_l1_brute(atoms: &[Vec<f64>], f: &[f64], tolerance: f64) -> Option<f64> {
    let dim = f.len();
    let n = atoms.len();
    assert!(atoms.iter().all(|a| a.len() == dim));
    let norm_f: f64 = f.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm_f <= tolerance {
        return Some(0.0);
    }
    let max_size = dim.min(n);
    let mut best: Option<f64> = None;

    let mut subset = Vec::with_capacity(max_size);
    enumerate(&mut subset, 0, max_size, atoms, f, tolerance, &mut best);
    return best;

    fn enumerate(
        subset: &mut Vec<usize>,
        next: usize,
        max_size: usize,
        atoms: &[Vec<f64>],
        f: &[f64],
        tolerance: f64,
        best: &mut Option<f64>,
    ) {
        if !subset.is_empty() {
            let k = subset.len();
            for signs in 0u32..(1 << k) {
                let signed: Vec<Vec<f64>> = subset
                    .iter()
                    .enumerate()
                    .map(|(pos, &i)| {
                        let s = if signs >> pos & 1 == 1 { -1.0 } else { 1.0 };
                        atoms[i].iter().map(|x| s * x).collect()
                    })
                    .collect();
                let gram: Vec<Vec<f64>> = signed
                    .iter()
                    .map(|gi| {
                        signed
                            .iter()
                            .map(|gj| gi.iter().zip(gj).map(|(x, y)| x * y).sum())
                            .collect()
                    })
                    .collect();
                let rhs: Vec<f64> =
                    signed.iter().map(|gi| gi.iter().zip(f).map(|(x, y)| x * y).sum()).collect();
                let Some(coeffs) = solve(gram, rhs) else { continue };
                if coeffs.iter().any(|&c| c < -1e-9) {
                    continue;
                }
                let mut residual: Vec<f64> = f.to_vec();
                for (gi, &c) in signed.iter().zip(&coeffs) {
                    for (r, x) in residual.iter_mut().zip(gi) {
                        *r -= c * x;
                    }
                }
                let err: f64 = residual.iter().map(|x| x * x).sum::<f64>().sqrt();
                if err > tolerance {
                    continue;
                }
                let l1: f64 = coeffs.iter().map(|c| c.abs()).sum();
                if best.is_none_or(|b| l1 < b) {
                    *best = Some(l1);
                }
            }
        }
        if subset.len() == max_size {
            return;
        }
        for i in next..atoms.len() {
            subset.push(i);
            enumerate(subset, i + 1, max_size, atoms, f, tolerance, best);
            subset.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halfplane_brute_on_a_square() {
        let points = vec![[0.1, 0.1], [0.9, 0.1], [0.9, 0.9], [0.1, 0.9]];
        // Splitting off the two left points wins.
        let r = vec![1.0, -1.0, -1.0, 1.0];
        assert_eq!(halfplane_brute_max(&points, &r), 0.5);
    }

    #[test]
    fn halfplane_brute_collinear_triple() {
        let points = vec![[0.1, 0.1], [0.2, 0.2], [0.9, 0.9]];
        let r = vec![1.0, 1.0, -1.0];
        assert_eq!(halfplane_brute_max(&points, &r), 2.0 / 3.0);
    }

    #[test]
    fn min_l1_prefers_the_diagonal_atom() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let atoms = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![s, s]];
        let f = vec![1.0, 1.0];
        // Via e₁+e₂ the mass is 2; via the diagonal atom it is √2.
        let best = min_l1_brute(&atoms, &f, 1e-9).unwrap();
        assert!((best - std::f64::consts::SQRT_2).abs() < 1e-9);
    }

    #[test]
    fn min_l1_reports_infeasible_targets() {
        let atoms = vec![vec![1.0, 0.0, 0.0]];
        let f = vec![0.0, 1.0, 0.0];
        assert!(min_l1_brute(&atoms, &f, 1e-9).is_none());
    }
}
