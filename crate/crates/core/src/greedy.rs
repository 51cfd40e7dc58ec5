//! The greedy iteration schemes: orthogonal, pure (with optional
//! shrinkage), and relaxed, over any dictionary/argmax pair.
//!
//! All schemes share the loop "select the atom of maximal absolute
//! correlation with the residual, then update the iterate"; they differ
//! in the update. The orthogonal scheme re-projects the target onto the
//! span of every selected atom; the pure scheme takes the raw
//! correlation step `f_k = f_{k-1} + s⟨g_k, r_{k-1}⟩ g_k`; the relaxed
//! scheme forms the best affine combination `α f_{k-1} + β g_k` by
//! solving the 2×2 normal equations exactly.
//!
//! Selection for the relaxed scheme deviates from the joint
//! minimization over (α, β, g): the atom is chosen by residual
//! correlation first and only (α, β) are optimized, since the joint
//! problem is intractable over continuum dictionaries.

use crate::dictionary::{Dictionary, DictionaryElement};
use crate::error::{Error, Result};
use crate::ortho::{ExpansionCoefficients, ExtendResult, OrthoBasis};
use crate::space::{HVector, Space};

/// Default stop tolerance on the oracle's correlation value.
pub const DEFAULT_STOP_TOLERANCE: f64 = 1e-13;

/// Which update rule drives the iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Algorithm {
    /// Orthogonal greedy: re-project onto the span of all selections.
    Oga,
    /// Pure greedy (matching pursuit), shrinkage 1.
    Pga,
    /// Pure greedy with shrinkage s in (0, 1].
    PgaShrink(f64),
    /// Relaxed greedy: optimal affine combination of the previous
    /// iterate and the new atom.
    Rga,
}

impl Algorithm {
    pub fn validate(&self) -> Result<()> {
        if let Algorithm::PgaShrink(s) = self {
            if !(*s > 0.0 && *s <= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "shrinkage must lie in (0, 1], got {s}"
                )));
            }
        }
        Ok(())
    }

    fn shrinkage(&self) -> f64 {
        match self {
            Algorithm::PgaShrink(s) => *s,
            _ => 1.0,
        }
    }
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// The iteration budget was exhausted.
    IterationLimit,
    /// The oracle's best correlation fell below the stop tolerance.
    Converged,
    /// The selected atom was numerically inside the current span
    /// (orthogonal scheme only).
    Stalled,
}

/// Outcome of a single step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    Stepped,
    Converged,
    Stalled,
}

/// Per-iteration telemetry.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    /// 1-based iteration index.
    pub k: usize,
    pub element: DictionaryElement,
    /// |⟨g_k, r_{k-1}⟩| (signs are recoverable from coefficients).
    pub correlation: f64,
    /// ‖r_k‖ after the update.
    pub residual_norm: f64,
    /// ‖(I − P_{k-1}) g_k‖ for the orthogonal scheme.
    pub orth_component_norm: Option<f64>,
    /// The affine weights of the relaxed scheme.
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
}

/// State of one greedy run: the target, the current iterate and
/// residual, the selected atoms (with the orthonormal basis for the
/// orthogonal scheme), and the per-iteration history.
#[derive(Debug, Clone)]
pub struct GreedyState {
    algorithm: Algorithm,
    space: Space,
    target: HVector,
    iterate: HVector,
    residual: HVector,
    basis: OrthoBasis,
    selected: Vec<(DictionaryElement, HVector)>,
    history: Vec<StepRecord>,
    termination: Option<Termination>,
}

impl GreedyState {
    pub fn new(algorithm: Algorithm, space: Space, target: HVector) -> Result<Self> {
        algorithm.validate()?;
        space.check(&target)?;
        if !target.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(GreedyState {
            algorithm,
            space,
            iterate: space.zero(),
            residual: target.clone(),
            target,
            basis: OrthoBasis::new(space),
            selected: Vec::new(),
            history: Vec::new(),
            termination: None,
        })
    }

    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn target(&self) -> &HVector {
        &self.target
    }

    /// The current iterate f_k.
    pub fn iterate(&self) -> &HVector {
        &self.iterate
    }

    /// The current residual r_k = f − f_k.
    pub fn residual(&self) -> &HVector {
        &self.residual
    }

    pub fn residual_norm(&self) -> f64 {
        self.space.norm(&self.residual).expect("state vectors are compatible")
    }

    pub fn history(&self) -> &[StepRecord] {
        &self.history
    }

    pub fn selected(&self) -> &[(DictionaryElement, HVector)] {
        &self.selected
    }

    /// The orthonormal basis built so far (orthogonal scheme).
    pub fn basis(&self) -> &OrthoBasis {
        &self.basis
    }

    pub fn termination(&self) -> Option<Termination> {
        self.termination
    }

    /// Completed iteration count.
    pub fn iterations(&self) -> usize {
        self.history.len()
    }

    /// Coefficients of the current iterate with respect to the
    /// originally selected atoms (orthogonal scheme).
    pub fn expansion_coefficients(&self) -> Result<ExpansionCoefficients> {
        self.basis.coefficients_wrt_atoms(&self.iterate)
    }

    /// Cumulative sums of ‖(I − P_{k-1}) g_k‖⁻² over the completed
    /// iterations — the packing-sum diagnostic. Meaningful for the
    /// orthogonal scheme, which records the orthogonal component norms.
    pub fn packing_sums(&self) -> Vec<f64> {
        let mut total = 0.0;
        self.history
            .iter()
            .filter_map(|rec| rec.orth_component_norm)
            .map(|norm| {
                total += norm.powi(-2);
                total
            })
            .collect()
    }

    /// Runs one iteration of whichever scheme this state was built for.
    pub fn step<D: Dictionary>(&mut self, dictionary: &D, stop_tolerance: f64) -> Result<StepOutcome> {
        match self.algorithm {
            Algorithm::Oga => self.oga_step(dictionary, stop_tolerance),
            Algorithm::Pga | Algorithm::PgaShrink(_) => {
                self.pga_step(dictionary, self.algorithm.shrinkage(), stop_tolerance)
            }
            Algorithm::Rga => self.rga_step(dictionary, stop_tolerance),
        }
    }

    /// Orthogonal step: select, extend the basis, re-project the target
    /// onto the enlarged span. A rejected atom means the residual is
    /// numerically orthogonal to everything the oracle can offer, so
    /// the run stalls rather than re-selecting.
    pub fn oga_step<D: Dictionary>(
        &mut self,
        dictionary: &D,
        stop_tolerance: f64,
    ) -> Result<StepOutcome> {
        let selection = dictionary.argmax(&self.residual)?;
        if selection.value <= stop_tolerance {
            self.termination = Some(Termination::Converged);
            return Ok(StepOutcome::Converged);
        }
        let atom = dictionary.realize(&selection.element)?;
        let component_norm = match self.basis.extend(&atom)? {
            ExtendResult::Rejected { .. } => {
                self.termination = Some(Termination::Stalled);
                return Ok(StepOutcome::Stalled);
            }
            ExtendResult::Accepted { component_norm } => component_norm,
        };
        let (projection, residual) = self.basis.project_and_residual(&self.target)?;
        self.iterate = projection;
        self.residual = residual;
        let residual_norm = self.space.norm(&self.residual)?;
        self.history.push(StepRecord {
            k: self.history.len() + 1,
            element: selection.element.clone(),
            correlation: selection.value,
            residual_norm,
            orth_component_norm: Some(component_norm),
            alpha: None,
            beta: None,
        });
        self.selected.push((selection.element, atom));
        Ok(StepOutcome::Stepped)
    }

    /// Pure greedy step `f_k = f_{k-1} + s⟨g_k, r_{k-1}⟩ g_k`. The
    /// update uses the atom's raw inner product; no projection.
    pub fn pga_step<D: Dictionary>(
        &mut self,
        dictionary: &D,
        shrinkage: f64,
        stop_tolerance: f64,
    ) -> Result<StepOutcome> {
        let selection = dictionary.argmax(&self.residual)?;
        if selection.value <= stop_tolerance {
            self.termination = Some(Termination::Converged);
            return Ok(StepOutcome::Converged);
        }
        let atom = dictionary.realize(&selection.element)?;
        let correlation = self.space.dot(&atom, &self.residual)?;
        self.iterate.axpy(shrinkage * correlation, &atom);
        self.residual = self.target.minus(&self.iterate);
        let residual_norm = self.space.norm(&self.residual)?;
        self.history.push(StepRecord {
            k: self.history.len() + 1,
            element: selection.element.clone(),
            correlation: correlation.abs(),
            residual_norm,
            orth_component_norm: None,
            alpha: None,
            beta: None,
        });
        self.selected.push((selection.element, atom));
        Ok(StepOutcome::Stepped)
    }

    /// Relaxed step: select by correlation, then minimize
    /// ‖f − α f_{k-1} − β g_k‖ exactly. When the 2×2 system is singular
    /// (f_{k-1} = 0 or parallel to g_k) fall back to the 1-variable
    /// least squares in g_k.
    pub fn rga_step<D: Dictionary>(
        &mut self,
        dictionary: &D,
        stop_tolerance: f64,
    ) -> Result<StepOutcome> {
        let selection = dictionary.argmax(&self.residual)?;
        if selection.value <= stop_tolerance {
            self.termination = Some(Termination::Converged);
            return Ok(StepOutcome::Converged);
        }
        let atom = dictionary.realize(&selection.element)?;

        let a11 = self.space.dot(&self.iterate, &self.iterate)?;
        let a12 = self.space.dot(&self.iterate, &atom)?;
        let a22 = self.space.dot(&atom, &atom)?;
        let b1 = self.space.dot(&self.target, &self.iterate)?;
        let b2 = self.space.dot(&self.target, &atom)?;
        let det = a11 * a22 - a12 * a12;
        let (alpha, beta) = if det > 1e-14 * a11 * a22 {
            ((b1 * a22 - b2 * a12) / det, (a11 * b2 - a12 * b1) / det)
        } else {
            (0.0, b2 / a22)
        };

        let mut next = self.space.zero();
        next.axpy(alpha, &self.iterate);
        next.axpy(beta, &atom);
        self.iterate = next;
        self.residual = self.target.minus(&self.iterate);
        let residual_norm = self.space.norm(&self.residual)?;
        self.history.push(StepRecord {
            k: self.history.len() + 1,
            element: selection.element.clone(),
            correlation: selection.value,
            residual_norm,
            orth_component_norm: None,
            alpha: Some(alpha),
            beta: Some(beta),
        });
        self.selected.push((selection.element, atom));
        Ok(StepOutcome::Stepped)
    }
}

/// Drives `algorithm` against `dictionary` for at most `n_iterations`
/// steps, stopping early on convergence (oracle value at most
/// `stop_tolerance`) or stall. Degenerate inputs terminate with a
/// status; they do not panic.
pub fn run<D: Dictionary>(
    algorithm: Algorithm,
    dictionary: &D,
    target: &HVector,
    n_iterations: usize,
    stop_tolerance: f64,
) -> Result<GreedyState> {
    if n_iterations == 0 {
        return Err(Error::InvalidParameter("n_iterations must be at least 1".into()));
    }
    let mut state = GreedyState::new(algorithm, dictionary.space(), target.clone())?;
    for _ in 0..n_iterations {
        if state.step(dictionary, stop_tolerance)? != StepOutcome::Stepped {
            return Ok(state);
        }
    }
    state.termination = Some(Termination::IterationLimit);
    Ok(state)
}
