//! Convergence-order estimation, variation norms of finite
//! dictionaries, and verification routines for the sharpness and
//! unboundedness constructions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::dictionary::{
    build_counterexample_dictionary, Dictionary, DictionaryElement, FiniteDictionary,
    SequenceDictionary,
};
use crate::error::{Error, Result};
use crate::greedy::{run, Algorithm, DEFAULT_STOP_TOLERANCE};
use crate::space::{HVector, Space};

/// Least-squares fit of log(error) against log(iteration); the
/// estimated convergence order is the negated slope.
#[derive(Debug, Clone, PartialEq)]
pub struct RateEstimate {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Number of initial errors excluded from the fit.
    pub skip_prefix: usize,
}

impl RateEstimate {
    pub fn order(&self) -> f64 {
        -self.slope
    }
}

/// Default number of initial errors excluded from rate fits: the rate
/// depends on the tail of the error sequence.
pub const DEFAULT_SKIP_PREFIX: usize = 10;

/// Ordinary least squares of `ln y` against `ln x`. Needs at least
/// three points and two distinct abscissae; all values must be
/// positive.
pub fn fit_log_log(xs: &[f64], ys: &[f64]) -> Result<RateEstimate> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch { expected: xs.len(), found: ys.len() });
    }
    if xs.len() < 3 {
        return Err(Error::InsufficientData { needed: 3, found: xs.len() });
    }
    if xs.iter().chain(ys).any(|&v| v <= 0.0 || v.is_nan()) {
        return Err(Error::InvalidParameter(
            "log-log fit requires strictly positive values".into(),
        ));
    }
    let lx: Vec<f64> = xs.iter().map(|&x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|&y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("log-log fit needs two distinct abscissae".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ly.iter().map(|y| (y - my) * (y - my)).sum();
    let ss_res: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(RateEstimate { slope, intercept, r_squared, skip_prefix: 0 })
}

/// Fits `log(errors[k])` against `log(k)` for 1-based iteration
/// indices `k > skip_prefix`.
pub fn fit_rate(errors: &[f64], skip_prefix: usize) -> Result<RateEstimate> {
    if errors.iter().any(|&e| e <= 0.0 || e.is_nan()) {
        return Err(Error::InvalidParameter("errors must be strictly positive".into()));
    }
    if errors.len() < skip_prefix + 3 {
        return Err(Error::InsufficientData { needed: skip_prefix + 3, found: errors.len() });
    }
    let xs: Vec<f64> = (skip_prefix + 1..=errors.len()).map(|k| k as f64).collect();
    let mut estimate = fit_log_log(&xs, &errors[skip_prefix..])?;
    estimate.skip_prefix = skip_prefix;
    Ok(estimate)
}

/// Result of the exact minimum-ℓ¹ representation problem over a finite
/// dictionary.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationNormResult {
    /// min Σ|aᵢ| over representations Σ aᵢ gᵢ = f; +∞ when infeasible.
    pub value: f64,
    /// Optimal coefficients, one per dictionary atom.
    pub witness: Vec<f64>,
    pub feasible: bool,
}

/// Residual tolerance for deciding that a subset of atoms represents f.
const FEASIBILITY_TOLERANCE: f64 = 1e-9;

/// Solves a small symmetric positive system by Gaussian elimination
/// with partial pivoting; returns None when numerically singular.
#[allow(clippy::needless_range_loop)]
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot_row][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
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

/// Exact variation norm of `f` with respect to a finite dictionary:
/// the minimum ℓ¹ coefficient mass over exact representations, found
/// by enumerating basic solutions. Every subset of at most
/// `ambient dimension` atoms whose span contains `f` (least-squares
/// residual at most 1e-9) contributes its unique coefficient vector;
/// the minimum ℓ¹ sum wins. Intended for small instances (dimension
/// and atom count at most 32).
pub fn variation_norm_finite(
    f: &HVector,
    dictionary: &FiniteDictionary,
) -> Result<VariationNormResult> {
    let space = dictionary.space();
    space.check(f)?;
    let dim = match space {
        Space::Euclidean { dim } => dim,
        Space::Empirical { n } => n,
        Space::Sequence => {
            return Err(Error::InvalidParameter(
                "variation norm requires a finite-dimensional dense space".into(),
            ))
        }
    };
    let n_atoms = dictionary.len();
    if dim > 32 || n_atoms > 32 {
        return Err(Error::InvalidParameter(format!(
            "exact solver is limited to dimension and atom count 32, got dim {dim}, atoms {n_atoms}"
        )));
    }

    if space.norm(f)? <= FEASIBILITY_TOLERANCE {
        return Ok(VariationNormResult { value: 0.0, witness: vec![0.0; n_atoms], feasible: true });
    }

    let atoms = dictionary.atoms();
    let max_size = dim.min(n_atoms);
    let mut best: Option<(f64, Vec<f64>)> = None;

    // Enumerate subsets in size-then-lexicographic order so ties keep
    // the first (smallest) support.
    let mut subset: Vec<usize> = Vec::with_capacity(max_size);
    fn recurse(
        subset: &mut Vec<usize>,
        next: usize,
        max_size: usize,
        atoms: &[HVector],
        f: &HVector,
        space: Space,
        best: &mut Option<(f64, Vec<f64>)>,
    ) {
        if !subset.is_empty() {
            // Least squares on this support via the Gram system.
            let gram: Vec<Vec<f64>> = subset
                .iter()
                .map(|&i| {
                    subset
                        .iter()
                        .map(|&j| space.dot(&atoms[i], &atoms[j]).expect("validated atoms"))
                        .collect()
                })
                .collect();
            let rhs: Vec<f64> = subset
                .iter()
                .map(|&i| space.dot(&atoms[i], f).expect("validated atoms"))
                .collect();
            if let Some(coeffs) = solve_dense(gram, rhs) {
                let mut combo = space.zero();
                for (&i, &c) in subset.iter().zip(&coeffs) {
                    combo.axpy(c, &atoms[i]);
                }
                let residual = space.norm(&f.minus(&combo)).expect("validated atoms");
                if residual <= FEASIBILITY_TOLERANCE {
                    let l1: f64 = coeffs.iter().map(|c| c.abs()).sum();
                    if best.as_ref().is_none_or(|(b, _)| l1 < *b) {
                        let mut witness = vec![0.0; atoms.len()];
                        for (&i, &c) in subset.iter().zip(&coeffs) {
                            witness[i] = c;
                        }
                        *best = Some((l1, witness));
                    }
                }
            }
        }
        if subset.len() == max_size {
            return;
        }
        for i in next..atoms.len() {
            subset.push(i);
            recurse(subset, i + 1, max_size, atoms, f, space, best);
            subset.pop();
        }
    }
    recurse(&mut subset, 0, max_size, atoms, f, space, &mut best);

    Ok(match best {
        Some((value, witness)) => VariationNormResult { value, witness, feasible: true },
        None => VariationNormResult { value: f64::INFINITY, witness: Vec::new(), feasible: false },
    })
}

/// Outcome of checking the five-atom unbounded-iterate construction.
///
/// Runs three orthogonal greedy steps and checks: the selection order
/// (x₃, x₂, x₁), the final residual δe₅, the vanishing of the e₄/e₅
/// components of f₃ (which forces a₄ = a₅ = 0 in any representation),
/// and the agreement of the computed variation norm with the closed
/// form obtained by solving the triangular system for (a₁, a₂, a₃):
///
/// ```text
/// a₁ = 1/4
/// a₂ = 1/4 + √(1−ε²)/(4ε)
/// a₃ = 1/2 − √(1−ε²)/4 − (1−ε²)/(4ε)
/// ```
///
/// The absolute-correlation selection actually follows the
/// (x₃, x₂, x₁) chain only for ε ∈ (1/√5, 1/2) — below that the second
/// step prefers x₁ — so expect failures reported for small ε.
#[derive(Debug, Clone)]
pub struct CounterexampleReport {
    pub epsilon: f64,
    pub delta: f64,
    /// Selected atom indices (0-based) in order.
    pub selected: Vec<usize>,
    pub selection_ok: bool,
    pub residual_ok: bool,
    /// e₄/e₅ components of f₃ vanish (a₄ = a₅ = 0 forced).
    pub decoupled_ok: bool,
    pub variation: VariationNormResult,
    /// (a₁, a₂, a₃) from the triangular solve above.
    pub closed_form_coefficients: [f64; 3],
    pub closed_form_ok: bool,
    /// √(1−ε²)/(4ε), the growth witness |a₂| − 1/4.
    pub norm_lower_bound: f64,
    pub bound_ok: bool,
    pub mismatches: Vec<String>,
}

impl CounterexampleReport {
    pub fn passed(&self) -> bool {
        self.selection_ok
            && self.residual_ok
            && self.decoupled_ok
            && self.closed_form_ok
            && self.bound_ok
    }
}

/// Closed-form coefficients of f₃ = (ε/4)(e₁+e₂) + e₃/2 over
/// (x₁, x₂, x₃), by back-substituting the triangular structure.
pub fn counterexample_closed_form(epsilon: f64) -> [f64; 3] {
    let root = (1.0 - epsilon * epsilon).sqrt();
    let a1 = 0.25;
    let a2 = 0.25 + root / (4.0 * epsilon);
    let a3 = 0.5 - root / 4.0 - (1.0 - epsilon * epsilon) / (4.0 * epsilon);
    [a1, a2, a3]
}

pub fn verify_counterexample(epsilon: f64, delta: f64) -> Result<CounterexampleReport> {
    let (dictionary, target) = build_counterexample_dictionary(epsilon, delta)?;
    let state = run(Algorithm::Oga, &dictionary, &target, 3, DEFAULT_STOP_TOLERANCE)?;
    let mut mismatches = Vec::new();

    let selected: Vec<usize> = state
        .history()
        .iter()
        .map(|rec| match rec.element {
            DictionaryElement::FiniteIndex { index } => index,
            _ => unreachable!("finite dictionary"),
        })
        .collect();
    let selection_ok = selected == vec![2, 1, 0];
    if !selection_ok {
        mismatches.push(format!("selection order {selected:?}, expected [2, 1, 0]"));
    }

    let residual = state.residual();
    let mut residual_ok = true;
    for i in 0..5 {
        let expected = if i == 4 { delta } else { 0.0 };
        if (residual.coeff(i) - expected).abs() > 1e-10 {
            residual_ok = false;
        }
    }
    if !residual_ok {
        mismatches.push(format!("residual after 3 steps is {residual:?}, expected delta*e5"));
    }

    let f3 = state.iterate();
    // x₄ − x₅ = 2c e₄ and x₄ + x₅ have the only e₅ mass, so
    // ⟨f₃, e₄⟩ = c(a₄ − a₅) and ⟨f₃, e₅⟩ = δ(a₄ + a₅): both vanish iff
    // a₄ = a₅ = 0 in any exact representation.
    let decoupled_ok = f3.coeff(3).abs() <= 1e-10 && f3.coeff(4).abs() <= 1e-10;
    if !decoupled_ok {
        mismatches.push(format!(
            "e4/e5 components of the 3-step iterate are ({:.3e}, {:.3e}), expected 0",
            f3.coeff(3),
            f3.coeff(4)
        ));
    }

    let variation = variation_norm_finite(f3, &dictionary)?;
    let closed_form_coefficients = counterexample_closed_form(epsilon);
    let expected_l1: f64 = closed_form_coefficients.iter().map(|a| a.abs()).sum();
    let closed_form_ok = variation.feasible && (variation.value - expected_l1).abs() <= 1e-8;
    if !closed_form_ok {
        mismatches.push(format!(
            "variation norm {} does not match the closed-form l1 mass {}",
            variation.value, expected_l1
        ));
    }

    let norm_lower_bound = (1.0 - epsilon * epsilon).sqrt() / (4.0 * epsilon);
    let bound_ok = variation.feasible && variation.value >= norm_lower_bound;
    if !bound_ok {
        mismatches.push(format!(
            "variation norm {} is below the bound {norm_lower_bound}",
            variation.value
        ));
    }

    Ok(CounterexampleReport {
        epsilon,
        delta,
        selected,
        selection_ok,
        residual_ok,
        decoupled_ok,
        variation,
        closed_form_coefficients,
        closed_form_ok,
        norm_lower_bound,
        bound_ok,
        mismatches,
    })
}

/// Outcome of checking the sharpness construction at one (α, n).
#[derive(Debug, Clone)]
pub struct LowerBoundReport {
    pub alpha: f64,
    pub n: usize,
    /// ‖r_n‖ after n orthogonal greedy steps on f_{2n}.
    pub residual_norm: f64,
    /// (1/(2n)) (Σ_{k=n+1}^{2n} k^{-2α})^{1/2}.
    pub closed_form_norm: f64,
    /// 2^{-(1+α)} n^{-1/2-α}.
    pub bound: f64,
    /// Residual coordinates equal the closed form within 1e-12.
    pub coordinatewise_ok: bool,
    pub norm_ok: bool,
    pub bound_ok: bool,
}

impl LowerBoundReport {
    pub fn passed(&self) -> bool {
        self.coordinatewise_ok && self.norm_ok && self.bound_ok
    }
}

/// Builds f_N = (1/N) Σ_{k=1}^N k^{-α} e_k for N = 2n, runs n
/// orthogonal greedy steps against the decaying coordinate dictionary,
/// and checks the residual against its closed form and the
/// 2^{-(1+α)} n^{-1/2-α} lower bound.
pub fn verify_lower_bound(alpha: f64, n: usize) -> Result<LowerBoundReport> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let big_n = 2 * n;
    let dictionary = SequenceDictionary::new(alpha, big_n)?;
    let target = HVector::sparse(
        (1..=big_n).map(|k| (k, (k as f64).powf(-alpha) / big_n as f64)),
    );
    let state = run(Algorithm::Oga, &dictionary, &target, n, DEFAULT_STOP_TOLERANCE)?;

    let residual = state.residual();
    let support = residual.as_sparse().expect("sequence space");
    let mut coordinatewise_ok = support.keys().all(|&k| k > n && k <= big_n);
    for k in n + 1..=big_n {
        let expected = (k as f64).powf(-alpha) / big_n as f64;
        if (residual.coeff(k) - expected).abs() > 1e-12 {
            coordinatewise_ok = false;
        }
    }

    let residual_norm = state.residual_norm();
    let closed_form_norm = (n + 1..=big_n)
        .map(|k| (k as f64).powf(-2.0 * alpha))
        .sum::<f64>()
        .sqrt()
        / big_n as f64;
    let norm_ok = (residual_norm - closed_form_norm).abs() <= 1e-12;

    let bound = 2.0f64.powf(-(1.0 + alpha)) * (n as f64).powf(-0.5 - alpha);
    let bound_ok = residual_norm >= bound;

    Ok(LowerBoundReport {
        alpha,
        n,
        residual_norm,
        closed_form_norm,
        bound,
        coordinatewise_ok,
        norm_ok,
        bound_ok,
    })
}

/// Outcome of the noise-robustness run: the excess error
/// b_k = ‖r_k‖² − ‖f − h‖² and its decay over the tail.
#[derive(Debug, Clone)]
pub struct NoiseReport {
    pub noise_scale: f64,
    /// ‖f − h‖ as realized after scaling.
    pub noise_norm: f64,
    /// Per-iteration telemetry of the underlying greedy run.
    pub history: Vec<crate::greedy::StepRecord>,
    /// b_k per iteration.
    pub excess: Vec<f64>,
    pub final_error: f64,
    pub initial_excess: f64,
    pub final_excess: f64,
    /// The excess eventually drops below its initial value.
    pub eventually_below_initial: bool,
    /// Fitted decay of max(b_k, 0) over the tail, when enough of the
    /// tail is positive.
    pub decay: Option<RateEstimate>,
}

/// Perturbs the clean target `h` with seeded Gaussian noise at the
/// sample points, scaled so ‖f − h‖ equals `noise_scale` exactly, then
/// runs the orthogonal greedy algorithm and reports the excess-error
/// sequence. Noise is drawn from stream 1 of the seed (the sample
/// points use stream 0), so the sample set is never perturbed.
pub fn noise_robustness_check<D: Dictionary>(
    dictionary: &D,
    h: &HVector,
    noise_scale: f64,
    iterations: usize,
    seed: u64,
) -> Result<NoiseReport> {
    let space = dictionary.space();
    space.check(h)?;
    if noise_scale < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "noise scale must be nonnegative, got {noise_scale}"
        )));
    }
    let n = match space {
        Space::Empirical { n } => n,
        _ => {
            return Err(Error::InvalidParameter(
                "noise is added at sample points; empirical space required".into(),
            ))
        }
    };

    let target = if noise_scale == 0.0 {
        h.clone()
    } else {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(1);
        let mut z = Vec::with_capacity(n);
        while z.len() < n {
            // Box-Muller transform of two uniforms.
            let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            let u2: f64 = rng.gen();
            let radius = (-2.0 * u1.ln()).sqrt();
            let (s, c) = (2.0 * std::f64::consts::PI * u2).sin_cos();
            z.push(radius * c);
            if z.len() < n {
                z.push(radius * s);
            }
        }
        let z = HVector::dense(z);
        let scale = noise_scale / space.norm(&z)?;
        let mut target = h.clone();
        target.axpy(scale, &z);
        target
    };

    let noise_norm = space.norm(&target.minus(h))?;
    let noise_sq = noise_norm * noise_norm;

    let state = run(Algorithm::Oga, dictionary, &target, iterations, DEFAULT_STOP_TOLERANCE)?;
    let excess: Vec<f64> = state
        .history()
        .iter()
        .map(|rec| rec.residual_norm * rec.residual_norm - noise_sq)
        .collect();
    let final_error = state.residual_norm();
    let initial_excess = excess.first().copied().unwrap_or(0.0);
    let final_excess = excess.last().copied().unwrap_or(0.0);
    let eventually_below_initial = final_excess < initial_excess || excess.is_empty();

    let tail: (Vec<f64>, Vec<f64>) = excess
        .iter()
        .enumerate()
        .skip(DEFAULT_SKIP_PREFIX)
        .filter(|(_, &b)| b > 0.0)
        .map(|(i, &b)| ((i + 1) as f64, b))
        .unzip();
    let decay = if tail.0.len() >= 3 { fit_log_log(&tail.0, &tail.1).ok() } else { None };

    Ok(NoiseReport {
        noise_scale,
        noise_norm,
        history: state.history().to_vec(),
        excess,
        final_error,
        initial_excess,
        final_excess,
        eventually_below_initial,
        decay,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn fit_recovers_an_exact_power_law() {
        let errors: Vec<f64> = (1..=100).map(|n| (n as f64).powf(-0.75)).collect();
        let est = fit_rate(&errors, 10).unwrap();
        assert_abs_diff_eq!(est.slope, -0.75, epsilon = 1e-10);
        assert!(est.r_squared > 1.0 - 1e-12);
        assert_eq!(est.skip_prefix, 10);
    }

    #[test]
    fn scaling_errors_moves_only_the_intercept() {
        let c = 3.7;
        let errors: Vec<f64> = (1..=50).map(|n| c * (n as f64).powf(-0.5)).collect();
        let est = fit_rate(&errors, 0).unwrap();
        assert_abs_diff_eq!(est.slope, -0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(est.intercept, c.ln(), epsilon = 1e-10);
    }

    #[test]
    fn nonpositive_errors_are_a_domain_error() {
        assert!(matches!(
            fit_rate(&[1.0, 0.0, 0.5, 0.25], 0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            fit_rate(&[1.0, 0.5], 0),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn variation_norm_of_a_single_atom_is_one() {
        let dict = FiniteDictionary::new(
            Space::Euclidean { dim: 2 },
            vec![HVector::dense(vec![0.6, 0.8])],
        )
        .unwrap();
        let f = HVector::dense(vec![0.6, 0.8]);
        let result = variation_norm_finite(&f, &dict).unwrap();
        assert!(result.feasible);
        assert_abs_diff_eq!(result.value, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(result.witness[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn variation_norm_sees_the_cheap_two_atom_witness() {
        // f = (x₄ + x₅)/2 has ℓ¹ mass at most 1.
        let (dict, f) = build_counterexample_dictionary(0.05, 0.01).unwrap();
        let result = variation_norm_finite(&f, &dict).unwrap();
        assert!(result.feasible);
        assert!(result.value <= 1.0 + 1e-9);
        assert_abs_diff_eq!(result.witness[3], 0.5, epsilon = 1e-8);
        assert_abs_diff_eq!(result.witness[4], 0.5, epsilon = 1e-8);
        assert_abs_diff_eq!(result.witness[0], 0.0, epsilon = 1e-8);
    }

    #[test]
    fn variation_norm_of_the_projected_iterate_matches_the_triangular_solve() {
        // f₃ = (ε/4)(e₁+e₂) + e₃/2 has a forced representation over
        // (x₁, x₂, x₃); the solver must reproduce its ℓ¹ mass whatever
        // path the greedy selection takes.
        for &eps in &[0.48, 0.2, 0.05] {
            let delta = eps / 8.0;
            let (dict, _) = build_counterexample_dictionary(eps, delta).unwrap();
            let q = eps / 4.0;
            let f3 = HVector::dense(vec![q, q, 0.5, 0.0, 0.0]);
            let result = variation_norm_finite(&f3, &dict).unwrap();
            let closed = counterexample_closed_form(eps);
            let expected: f64 = closed.iter().map(|a| a.abs()).sum();
            assert!(result.feasible);
            assert_abs_diff_eq!(result.value, expected, epsilon = 1e-8);
            // Growth witness: the norm exceeds √(1−ε²)/(4ε).
            assert!(result.value >= (1.0 - eps * eps).sqrt() / (4.0 * eps));
        }
    }

    #[test]
    fn counterexample_report_passes_in_the_large_epsilon_regime() {
        let report = verify_counterexample(0.48, 0.12).unwrap();
        assert!(report.passed(), "mismatches: {:?}", report.mismatches);
        assert_eq!(report.selected, vec![2, 1, 0]);
    }

    #[test]
    fn counterexample_report_flags_the_small_epsilon_regime() {
        // The absolute-correlation selection departs from the chain for
        // ε < 1/√5; the report says so rather than passing.
        let report = verify_counterexample(0.05, 0.01).unwrap();
        assert!(!report.selection_ok);
        assert!(!report.passed());
        assert!(!report.mismatches.is_empty());
    }

    #[test]
    fn expansion_coefficients_match_the_triangular_closed_form() {
        // After the three-step run in the valid regime, the iterate's
        // coefficients over the selected atoms (x₃, x₂, x₁ in selection
        // order) are the closed-form (a₃, a₂, a₁).
        let eps = 0.48;
        let (dict, f) = build_counterexample_dictionary(eps, 0.12).unwrap();
        let state = run(Algorithm::Oga, &dict, &f, 3, DEFAULT_STOP_TOLERANCE).unwrap();
        let coeffs = state.expansion_coefficients().unwrap();
        let [a1, a2, a3] = counterexample_closed_form(eps);
        assert_abs_diff_eq!(coeffs.coefficients[0], a3, epsilon = 1e-10);
        assert_abs_diff_eq!(coeffs.coefficients[1], a2, epsilon = 1e-10);
        assert_abs_diff_eq!(coeffs.coefficients[2], a1, epsilon = 1e-10);
        assert_abs_diff_eq!(
            coeffs.l1_norm,
            a1.abs() + a2.abs() + a3.abs(),
            epsilon = 1e-10
        );
    }

    #[test]
    fn zero_clean_target_has_nonpositive_excess_from_the_start() {
        // With h = 0 the run is fitting pure noise: ‖r_k‖ ≤ ‖f‖ = ‖f−h‖,
        // so every excess term is at most zero.
        use crate::dictionary::RidgeDictionary;
        use crate::space::SampleSet;
        let samples = SampleSet::generate(120, 8);
        let dict = RidgeDictionary::new(&samples);
        let h = HVector::zeros(120);
        let report = noise_robustness_check(&dict, &h, 0.5, 10, 8).unwrap();
        assert_abs_diff_eq!(report.noise_norm, 0.5, epsilon = 1e-12);
        assert!(report.excess.iter().all(|&b| b <= 1e-12));
    }

    #[test]
    fn counterexample_norm_grows_as_epsilon_shrinks() {
        let norms: Vec<f64> = [0.49, 0.48, 0.47, 0.46]
            .iter()
            .map(|&eps| verify_counterexample(eps, eps / 4.0).unwrap().variation.value)
            .collect();
        for pair in norms.windows(2) {
            assert!(pair[1] > pair[0]);
        }
    }

    #[test]
    fn lower_bound_single_step_matches_the_hand_computation() {
        // α = 0.25, n = 1: ‖r₁‖ = 2^{-0.25}/2 ≥ 2^{-1.25}.
        let report = verify_lower_bound(0.25, 1).unwrap();
        assert!(report.passed());
        assert_abs_diff_eq!(
            report.residual_norm,
            2.0f64.powf(-0.25) / 2.0,
            epsilon = 1e-15
        );
        assert!(report.residual_norm >= 2.0f64.powf(-1.25));
    }

    #[test]
    fn lower_bound_holds_along_the_dyadic_sweep() {
        for &alpha in &[0.25, 1.0] {
            for exp in 0..=6 {
                let report = verify_lower_bound(alpha, 1usize << exp).unwrap();
                assert!(report.passed(), "failed at alpha={alpha}, n={}", 1usize << exp);
            }
        }
    }

    #[test]
    fn unit_variation_mass_of_the_sequence_target() {
        // The n-step expansion of f_N uses coefficients 1/N on each
        // selected atom: ℓ¹ mass n/N, hence exactly 1 when n = N.
        let alpha = 0.25;
        let big_n = 8;
        let dict = SequenceDictionary::new(alpha, big_n).unwrap();
        let target =
            HVector::sparse((1..=big_n).map(|k| (k, (k as f64).powf(-alpha) / big_n as f64)));
        let state = run(Algorithm::Oga, &dict, &target, big_n, DEFAULT_STOP_TOLERANCE).unwrap();
        let coeffs = state.expansion_coefficients().unwrap();
        assert_abs_diff_eq!(coeffs.l1_norm, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_noise_reduces_to_the_clean_run() {
        let dict = SequenceDictionary::new(0.25, 16).unwrap();
        let _ = dict;
        // Empirical-space requirement: a sequence dictionary is not a
        // valid noise setting.
        let h = HVector::sparse([(1, 1.0)]);
        assert!(matches!(
            noise_robustness_check(&dict, &h, 0.1, 4, 3),
            Err(Error::InvalidParameter(_))
        ));
    }
}
