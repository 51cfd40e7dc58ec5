//! Dictionary families and their argmax-inner-product oracles.
//!
//! A dictionary is a set of atoms of norm at most one in the ambient
//! space. Each family answers one query: which atom has maximal
//! absolute inner product with a given residual. Three families are
//! provided: finite explicit atom lists, the decaying coordinate
//! dictionary `{k^{-α} e_k}` in ℓ², and closed-halfplane indicator
//! atoms over a planar sample set (see [`ridge`]).

mod ridge;

pub use ridge::{ridge2d_argmax, RidgeDictionary};

use crate::error::{Error, Result};
use crate::space::{HVector, Space};

/// Tagged parametrization of a single dictionary atom.
#[derive(Debug, Clone, PartialEq)]
pub enum DictionaryElement {
    /// Closed halfplane `direction·x + offset ≥ 0` over a sample set,
    /// together with the sorted list of captured sample indices.
    Ridge { direction: [f64; 2], offset: f64, captured: Vec<usize> },
    /// The atom `k^{-α} e_k` of the sequence dictionary (k ≥ 1).
    SequenceIndex { k: usize },
    /// Index into a finite dictionary's atom list.
    FiniteIndex { index: usize },
}

/// An argmax query result: the chosen element and `|⟨g, r⟩|`.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub element: DictionaryElement,
    pub value: f64,
}

/// A dictionary over some ambient space, able to answer argmax
/// correlation queries and to realize elements as vectors.
pub trait Dictionary {
    fn space(&self) -> Space;

    /// The atom maximizing `|⟨g, residual⟩|`, with deterministic
    /// tie-breaking (first atom in the family's canonical scan order).
    fn argmax(&self, residual: &HVector) -> Result<Selection>;

    /// The atom described by `element`, as a vector of this space.
    fn realize(&self, element: &DictionaryElement) -> Result<HVector>;
}

/// An explicit list of unit-norm atoms.
#[derive(Debug, Clone)]
pub struct FiniteDictionary {
    space: Space,
    atoms: Vec<HVector>,
    labels: Option<Vec<String>>,
}

/// Allowed deviation of a finite-dictionary atom from unit norm.
const ATOM_NORM_TOLERANCE: f64 = 1e-9;

impl FiniteDictionary {
    /// Validates that there is at least one atom and that every atom is
    /// unit-norm within 1e-9.
    pub fn new(space: Space, atoms: Vec<HVector>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidParameter("finite dictionary needs at least one atom".into()));
        }
        for (i, atom) in atoms.iter().enumerate() {
            let norm = space.norm(atom)?;
            if (norm - 1.0).abs() > ATOM_NORM_TOLERANCE {
                return Err(Error::InvalidParameter(format!(
                    "atom {i} has norm {norm}, expected 1 within {ATOM_NORM_TOLERANCE:.0e}"
                )));
            }
        }
        Ok(FiniteDictionary { space, atoms, labels: None })
    }

    pub fn with_labels(space: Space, atoms: Vec<HVector>, labels: Vec<String>) -> Result<Self> {
        if labels.len() != atoms.len() {
            return Err(Error::InvalidParameter("one label per atom required".into()));
        }
        let mut d = Self::new(space, atoms)?;
        d.labels = Some(labels);
        Ok(d)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[HVector] {
        &self.atoms
    }

    pub fn label(&self, index: usize) -> Option<&str> {
        self.labels.as_ref().and_then(|l| l.get(index)).map(|s| s.as_str())
    }
}

impl Dictionary for FiniteDictionary {
    fn space(&self) -> Space {
        self.space
    }

    fn argmax(&self, residual: &HVector) -> Result<Selection> {
        self.space.check(residual)?;
        let mut best_index = 0;
        let mut best_value = 0.0;
        for (i, atom) in self.atoms.iter().enumerate() {
            let value = self.space.dot(atom, residual)?.abs();
            // Strict comparison keeps the smallest index on ties.
            if value > best_value {
                best_value = value;
                best_index = i;
            }
        }
        Ok(Selection { element: DictionaryElement::FiniteIndex { index: best_index }, value: best_value })
    }

    fn realize(&self, element: &DictionaryElement) -> Result<HVector> {
        match element {
            DictionaryElement::FiniteIndex { index } if *index < self.atoms.len() => {
                Ok(self.atoms[*index].clone())
            }
            DictionaryElement::FiniteIndex { index } => Err(Error::InvalidParameter(format!(
                "atom index {index} out of range for dictionary of {} atoms",
                self.atoms.len()
            ))),
            other => Err(Error::InvalidParameter(format!(
                "finite dictionary cannot realize {other:?}"
            ))),
        }
    }
}

/// The dictionary `{k^{-α} e_k : 1 ≤ k ≤ k_max}` in the ℓ² sequence
/// space. `k_max` can be set to the support bound of the target, which
/// makes the truncation exact.
#[derive(Debug, Clone, Copy)]
pub struct SequenceDictionary {
    alpha: f64,
    k_max: usize,
}

impl SequenceDictionary {
    pub fn new(alpha: f64, k_max: usize) -> Result<Self> {
        if alpha <= 0.0 || alpha.is_nan() {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
        }
        if k_max == 0 {
            return Err(Error::InvalidParameter("k_max must be at least 1".into()));
        }
        Ok(SequenceDictionary { alpha, k_max })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }
}

impl Dictionary for SequenceDictionary {
    fn space(&self) -> Space {
        Space::Sequence
    }

    fn argmax(&self, residual: &HVector) -> Result<Selection> {
        self.space().check(residual)?;
        let support = residual.as_sparse().expect("checked sparse");
        let mut best_k = 1;
        let mut best_value = 0.0;
        // Ascending index walk; strict comparison keeps the smallest k
        // on ties. Indices outside 1..=k_max are not atoms.
        for (&k, &rk) in support.iter() {
            if k == 0 || k > self.k_max {
                continue;
            }
            let value = (k as f64).powf(-self.alpha) * rk.abs();
            if value > best_value {
                best_value = value;
                best_k = k;
            }
        }
        Ok(Selection { element: DictionaryElement::SequenceIndex { k: best_k }, value: best_value })
    }

    fn realize(&self, element: &DictionaryElement) -> Result<HVector> {
        match element {
            DictionaryElement::SequenceIndex { k } if *k >= 1 && *k <= self.k_max => {
                Ok(HVector::sparse([(*k, (*k as f64).powf(-self.alpha))]))
            }
            other => Err(Error::InvalidParameter(format!(
                "sequence dictionary cannot realize {other:?}"
            ))),
        }
    }
}

/// Convenience wrapper for a single argmax query on a finite dictionary.
pub fn finite_argmax(residual: &HVector, dictionary: &FiniteDictionary) -> Result<Selection> {
    dictionary.argmax(residual)
}

/// Convenience wrapper for a single argmax query on the sequence
/// dictionary truncated at `k_max`.
pub fn sequence_argmax(residual: &HVector, alpha: f64, k_max: usize) -> Result<Selection> {
    SequenceDictionary::new(alpha, k_max)?.argmax(residual)
}

/// Builds the five-atom dictionary in R^5 whose greedy iterates have
/// unbounded ℓ¹ expansion mass, together with the target
/// `f = (x₄+x₅)/2`:
///
/// ```text
/// x₁ = ε e₁ − √(1−ε²) e₂        x₄ = (ε/4)(e₁+e₂) + e₃/2 + c e₄ + δ e₅
/// x₂ = ε e₂ + √(1−ε²) e₃        x₅ = (ε/4)(e₁+e₂) + e₃/2 − c e₄ + δ e₅
/// x₃ = e₃
/// ```
///
/// with `c` chosen so every atom is unit-norm. Requires
/// `0 < δ < ε/√8` and `ε < 1/2`.
pub fn build_counterexample_dictionary(
    epsilon: f64,
    delta: f64,
) -> Result<(FiniteDictionary, HVector)> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, 1/2), got {epsilon}"
        )));
    }
    let delta_cap = epsilon / 8.0f64.sqrt();
    if !(delta > 0.0 && delta < delta_cap) {
        return Err(Error::InvalidParameter(format!(
            "delta must lie in (0, epsilon/sqrt(8)) = (0, {delta_cap}), got {delta}"
        )));
    }
    let c_sq = 1.0 - epsilon * epsilon / 8.0 - 0.25 - delta * delta;
    if c_sq <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "normalization constant is not real: c^2 = {c_sq}"
        )));
    }
    let c = c_sq.sqrt();
    let root = (1.0 - epsilon * epsilon).sqrt();
    let q = epsilon / 4.0;

    let atoms = vec![
        HVector::dense(vec![epsilon, -root, 0.0, 0.0, 0.0]),
        HVector::dense(vec![0.0, epsilon, root, 0.0, 0.0]),
        HVector::dense(vec![0.0, 0.0, 1.0, 0.0, 0.0]),
        HVector::dense(vec![q, q, 0.5, c, delta]),
        HVector::dense(vec![q, q, 0.5, -c, delta]),
    ];
    let labels = (1..=5).map(|i| format!("x{i}")).collect();
    let dictionary =
        FiniteDictionary::with_labels(Space::Euclidean { dim: 5 }, atoms, labels)?;
    let target = HVector::dense(vec![q, q, 0.5, 0.0, delta]);
    Ok((dictionary, target))
}
