//! Ambient Hilbert spaces and their vectors.
//!
//! Three spaces are supported: the empirical L² space on a fixed set of
//! sample points (inner product `(1/N) Σ u_i v_i`), plain Euclidean R^d,
//! and the ℓ² sequence space with sparse vectors. Dense vectors are
//! fixed-length arrays; sequence vectors are sorted index→value maps.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};

/// An element of one of the supported Hilbert spaces.
///
/// `Dense` holds the values of a function at the sample points (or the
/// coordinates of a Euclidean vector); `Sparse` holds the finitely many
/// nonzero coefficients of a sequence-space element, keyed by index.
#[derive(Debug, Clone, PartialEq)]
pub enum HVector {
    Dense(Vec<f64>),
    Sparse(BTreeMap<usize, f64>),
}

impl HVector {
    pub fn dense(values: Vec<f64>) -> Self {
        HVector::Dense(values)
    }

    pub fn zeros(n: usize) -> Self {
        HVector::Dense(vec![0.0; n])
    }

    /// Dense coordinate vector e_i (0-based) in dimension `n`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        HVector::Dense(v)
    }

    /// Sparse vector from (index, value) pairs; exact zeros are dropped.
    pub fn sparse<I: IntoIterator<Item = (usize, f64)>>(entries: I) -> Self {
        HVector::Sparse(entries.into_iter().filter(|&(_, v)| v != 0.0).collect())
    }

    pub fn sparse_empty() -> Self {
        HVector::Sparse(BTreeMap::new())
    }

    pub fn as_dense(&self) -> Option<&[f64]> {
        match self {
            HVector::Dense(v) => Some(v),
            HVector::Sparse(_) => None,
        }
    }

    pub fn as_sparse(&self) -> Option<&BTreeMap<usize, f64>> {
        match self {
            HVector::Dense(_) => None,
            HVector::Sparse(m) => Some(m),
        }
    }

    /// Coefficient at `index` (dense position or sparse key).
    pub fn coeff(&self, index: usize) -> f64 {
        match self {
            HVector::Dense(v) => v.get(index).copied().unwrap_or(0.0),
            HVector::Sparse(m) => m.get(&index).copied().unwrap_or(0.0),
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            HVector::Dense(v) => v.iter().all(|x| x.is_finite()),
            HVector::Sparse(m) => m.values().all(|x| x.is_finite()),
        }
    }

    /// In-place `self += c * other`. Both vectors must have the same
    /// storage kind and, for dense vectors, the same length.
    pub fn axpy(&mut self, c: f64, other: &HVector) {
        match (self, other) {
            (HVector::Dense(a), HVector::Dense(b)) => {
                assert_eq!(a.len(), b.len(), "axpy on mismatched dense lengths");
                for (x, y) in a.iter_mut().zip(b) {
                    *x += c * y;
                }
            }
            (HVector::Sparse(a), HVector::Sparse(b)) => {
                for (&k, &y) in b {
                    let entry = a.entry(k).or_insert(0.0);
                    *entry += c * y;
                    if *entry == 0.0 {
                        a.remove(&k);
                    }
                }
            }
            _ => panic!("axpy on mixed dense/sparse vectors"),
        }
    }

    pub fn scale(&mut self, c: f64) {
        match self {
            HVector::Dense(v) => v.iter_mut().for_each(|x| *x *= c),
            HVector::Sparse(m) => m.values_mut().for_each(|x| *x *= c),
        }
    }

    /// In-place division; exact where `scale(1.0/d)` would round
    /// (normalizing a vector by its own norm maps entries equal to the
    /// norm to exactly 1).
    pub fn scale_div(&mut self, d: f64) {
        match self {
            HVector::Dense(v) => v.iter_mut().for_each(|x| *x /= d),
            HVector::Sparse(m) => m.values_mut().for_each(|x| *x /= d),
        }
    }

    /// Returns `self - other` as a new vector.
    pub fn minus(&self, other: &HVector) -> HVector {
        let mut out = self.clone();
        out.axpy(-1.0, other);
        out
    }
}

/// The inner-product structure the vectors live under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    /// Empirical L² on `n` sample points: `<u,v> = (1/n) Σ u_i v_i`.
    Empirical { n: usize },
    /// Standard dot product on R^dim.
    Euclidean { dim: usize },
    /// ℓ² sequence space over sparse vectors.
    Sequence,
}

impl Space {
    /// Checks that `v` has the storage kind and length this space expects.
    pub fn check(&self, v: &HVector) -> Result<()> {
        match (self, v) {
            (Space::Empirical { n }, HVector::Dense(x)) => {
                if x.len() != *n {
                    return Err(Error::DimensionMismatch { expected: *n, found: x.len() });
                }
                Ok(())
            }
            (Space::Euclidean { dim }, HVector::Dense(x)) => {
                if x.len() != *dim {
                    return Err(Error::DimensionMismatch { expected: *dim, found: x.len() });
                }
                Ok(())
            }
            (Space::Sequence, HVector::Sparse(_)) => Ok(()),
            (Space::Sequence, HVector::Dense(_)) => {
                Err(Error::SpaceMismatch { expected: "sparse", found: "dense" })
            }
            (_, HVector::Sparse(_)) => {
                Err(Error::SpaceMismatch { expected: "dense", found: "sparse" })
            }
        }
    }

    pub fn dot(&self, u: &HVector, v: &HVector) -> Result<f64> {
        self.check(u)?;
        self.check(v)?;
        Ok(match (self, u, v) {
            (Space::Empirical { n }, HVector::Dense(a), HVector::Dense(b)) => {
                let sum: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                sum / *n as f64
            }
            (Space::Euclidean { .. }, HVector::Dense(a), HVector::Dense(b)) => {
                a.iter().zip(b).map(|(x, y)| x * y).sum()
            }
            (Space::Sequence, HVector::Sparse(a), HVector::Sparse(b)) => {
                // Walk the smaller support, in ascending index order.
                let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
                small
                    .iter()
                    .filter_map(|(k, x)| large.get(k).map(|y| x * y))
                    .sum()
            }
            _ => unreachable!("check() rules out mixed storage"),
        })
    }

    pub fn norm(&self, v: &HVector) -> Result<f64> {
        Ok(self.dot(v, v)?.sqrt())
    }

    /// The zero vector of this space.
    pub fn zero(&self) -> HVector {
        match self {
            Space::Empirical { n } => HVector::zeros(*n),
            Space::Euclidean { dim } => HVector::zeros(*dim),
            Space::Sequence => HVector::sparse_empty(),
        }
    }
}

/// Empirical L² inner product `(1/N) Σ u(x_i) v(x_i)` on the sample set.
pub fn empirical_inner_product(u: &HVector, v: &HVector, samples: &SampleSet) -> Result<f64> {
    samples.space().dot(u, v)
}

/// ℓ² inner product of two sparse sequence-space vectors.
pub fn sequence_inner_product(u: &HVector, v: &HVector) -> Result<f64> {
    Space::Sequence.dot(u, v)
}

/// A seeded set of sample points in [0,1]², carrying the empirical L²
/// inner product used as the working Hilbert space of the ridge
/// experiment.
#[derive(Debug, Clone)]
pub struct SampleSet {
    points: Vec<[f64; 2]>,
    seed: u64,
}

impl SampleSet {
    /// Draws `n` i.i.d. uniform points on [0,1]² from a ChaCha20 stream
    /// derived from `seed`. Bitwise-duplicate points are redrawn so the
    /// halfplane splittings stay non-degenerate.
    ///
    /// Stream 0 is reserved for sample points (stream 1 is used for
    /// noise elsewhere), so adding noise never perturbs the point set.
    pub fn generate(n: usize, seed: u64) -> SampleSet {
        assert!(n >= 1, "sample set needs at least one point");
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(0);
        let mut seen = std::collections::HashSet::with_capacity(n);
        let mut points = Vec::with_capacity(n);
        while points.len() < n {
            let p = [rng.gen::<f64>(), rng.gen::<f64>()];
            if seen.insert((p[0].to_bits(), p[1].to_bits())) {
                points.push(p);
            }
        }
        SampleSet { points, seed }
    }

    /// Wraps prescribed points (still subject to the invariants: all
    /// coordinates in [0,1], pairwise distinct, at least one point).
    pub fn with_points(points: Vec<[f64; 2]>) -> SampleSet {
        assert!(!points.is_empty(), "sample set needs at least one point");
        assert!(
            points
                .iter()
                .all(|p| (0.0..=1.0).contains(&p[0]) && (0.0..=1.0).contains(&p[1])),
            "sample points must lie in the unit square"
        );
        let mut keys: Vec<_> = points.iter().map(|p| (p[0].to_bits(), p[1].to_bits())).collect();
        keys.sort_unstable();
        keys.dedup();
        assert_eq!(keys.len(), points.len(), "sample points must be pairwise distinct");
        SampleSet { points, seed: 0 }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn space(&self) -> Space {
        Space::Empirical { n: self.points.len() }
    }

    /// Evaluates a scalar function at every sample point.
    pub fn evaluate<F: Fn(f64, f64) -> f64>(&self, f: F) -> HVector {
        HVector::Dense(self.points.iter().map(|p| f(p[0], p[1])).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn empirical_all_ones_has_unit_norm_squared() {
        let samples = SampleSet::generate(4, 7);
        let u = HVector::dense(vec![1.0; 4]);
        assert_eq!(empirical_inner_product(&u, &u, &samples).unwrap(), 1.0);
    }

    #[test]
    fn empirical_disjoint_supports() {
        let samples = SampleSet::generate(4, 7);
        let u = HVector::dense(vec![1.0, 0.0, 0.0, 0.0]);
        let v = HVector::dense(vec![0.0, 1.0, 0.0, 0.0]);
        assert_eq!(empirical_inner_product(&u, &v, &samples).unwrap(), 0.0);
    }

    #[test]
    fn empirical_direct_arithmetic() {
        let samples = SampleSet::generate(3, 7);
        let u = HVector::dense(vec![1.0, 1.0, -1.0]);
        let v = HVector::dense(vec![2.0, 0.0, 2.0]);
        assert_abs_diff_eq!(
            empirical_inner_product(&u, &v, &samples).unwrap(),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn empirical_length_mismatch_is_an_error() {
        let samples = SampleSet::generate(3, 7);
        let u = HVector::dense(vec![1.0, 1.0]);
        let v = HVector::dense(vec![1.0, 1.0, 1.0]);
        assert_eq!(
            empirical_inner_product(&u, &v, &samples),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        );
    }

    #[test]
    fn sequence_orthogonal_basis_vectors() {
        let u = HVector::sparse([(1, 1.0)]);
        let v = HVector::sparse([(2, 1.0)]);
        assert_eq!(sequence_inner_product(&u, &v).unwrap(), 0.0);
    }

    #[test]
    fn sequence_projection_onto_first_coordinate() {
        let u = HVector::sparse([(1, 0.5), (2, 0.5)]);
        let v = HVector::sparse([(1, 1.0)]);
        assert_eq!(sequence_inner_product(&u, &v).unwrap(), 0.5);
    }

    #[test]
    fn sequence_decaying_vector_matches_direct_summation() {
        // u = v = {k: k^{-α}/N for k=1..N}, α = 0.25, N = 4.
        let alpha = 0.25;
        let n = 4usize;
        let u = HVector::sparse((1..=n).map(|k| (k, (k as f64).powf(-alpha) / n as f64)));
        // Independent oracle: Σ k^{-2α} / N².
        let expected: f64 = (1..=n).map(|k| (k as f64).powf(-0.5) / 16.0).sum();
        assert_abs_diff_eq!(
            sequence_inner_product(&u, &u).unwrap(),
            expected,
            epsilon = 1e-15
        );
    }

    #[test]
    fn sample_sets_are_reproducible_and_in_unit_square() {
        let a = SampleSet::generate(100, 123);
        let b = SampleSet::generate(100, 123);
        assert_eq!(a.points(), b.points());
        assert!(a
            .points()
            .iter()
            .all(|p| (0.0..=1.0).contains(&p[0]) && (0.0..=1.0).contains(&p[1])));
        let c = SampleSet::generate(100, 124);
        assert_ne!(a.points(), c.points());
    }

    #[test]
    fn sample_points_are_pairwise_distinct() {
        let s = SampleSet::generate(2000, 9);
        let mut keys: Vec<_> = s
            .points()
            .iter()
            .map(|p| (p[0].to_bits(), p[1].to_bits()))
            .collect();
        keys.sort_unstable();
        keys.dedup();
        assert_eq!(keys.len(), 2000);
    }
}
