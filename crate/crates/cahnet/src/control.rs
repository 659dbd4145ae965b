//! Joint feedback-bit and transmit-power control: the average-interference
//! bound, per-bit feedback gains, the greedy allocator, an exhaustive
//! oracle, cost evaluation, and the extreme-case shortcuts.
//!
//! With zero-forcing against a B-bit quantized direction, link i's average
//! interference at the primary user is bounded by
//!
//! σ²_{0,i} · P_i · n_t/(n_t−1) · 2^(−B_i/(n_t−1)),
//!
//! so each extra feedback bit multiplies the bound by 2^(−1/(n_t−1)) — a
//! geometric, separable structure. Powers are fixed at their delay-derived
//! minima (any higher power only costs more and leaks more), leaving a
//! one-dimensional question per step: which link's next bit buys the
//! largest interference reduction? [`greedy_allocate`] grants bits by that
//! rule until the sum bound fits the budget; [`exhaustive_allocate`]
//! searches all allocations by total bits and certifies that the greedy
//! answer's total is optimal.
//!
//! Two degenerate regimes short-circuit: a budget at or above the zero-bit
//! bound Ī₀ needs no feedback at all (`Shortcut::LooseAic`), and a zero
//! budget can never be met with finite bits (an infeasibility error).

use crate::error::{Error, Result};

/// Default cap on total granted bits before the allocators give up: a
/// budget tight enough to need more than this is treated as infeasible
/// rather than looping toward the zero-budget asymptote.
pub const DEFAULT_BIT_CAP: u32 = 32;

/// A feedback-bit and power assignment for every link.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    /// Feedback bits per link.
    pub bits: Vec<u32>,
    /// Transmit powers per link, watts.
    pub powers: Vec<f64>,
    /// The analytical average-interference bound at (bits, powers).
    pub bound_value: f64,
}

impl Allocation {
    pub fn total_bits(&self) -> u32 {
        self.bits.iter().sum()
    }
}

/// Which special case, if any, decided a control run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shortcut {
    /// The full algorithm ran.
    None,
    /// The budget already holds at zero bits (aic ≥ Ī₀).
    LooseAic,
    /// A zero budget admits no allocation at positive power.
    ZeroAicInfeasible,
}

impl Shortcut {
    /// Stable lowercase label for CSV/table output.
    pub fn label(&self) -> &'static str {
        match self {
            Shortcut::None => "none",
            Shortcut::LooseAic => "loose_aic",
            Shortcut::ZeroAicInfeasible => "zero_aic_infeasible",
        }
    }
}

/// The outcome of a control run.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlResult {
    pub allocation: Allocation,
    /// Bits granted one by one; equals the total bit count unless a
    /// shortcut skipped the loop.
    pub iterations: u32,
    pub shortcut: Shortcut,
}

// --- Bound and gains --------------------------------------------------------

/// One link's contribution to the average-interference bound:
/// σ²·P·n_t/(n_t−1)·2^(−B/(n_t−1)).
///
/// Requires n_t ≥ 3: with fewer antennas the zero-forcing beam has no
/// freedom left within the codeword's null space, and the error-direction
/// statistics behind the bound (a Beta(1, n_t−2) overlap) degenerate.
pub fn interference_term(sigma_cross_i: f64, p_i: f64, b_i: u32, n_t: u32) -> Result<f64> {
    if n_t < 3 {
        return Err(Error::domain(
            "interference_term",
            format!(
                "the interference bound requires n_t ≥ 3 (Beta(1, n_t−2) \
                 error-direction statistics), got n_t = {n_t}"
            ),
        ));
    }
    for (name, v) in [("sigma_cross", sigma_cross_i), ("p", p_i)] {
        if v <= 0.0 || !v.is_finite() {
            return Err(Error::domain(
                "interference_term",
                format!("{name} must be positive, got {v}"),
            ));
        }
    }
    let nt = f64::from(n_t);
    Ok(sigma_cross_i * p_i * nt / (nt - 1.0) * (-f64::from(b_i) / (nt - 1.0)).exp2())
}

/// Interference reduction from granting one extra bit:
/// η(B) = term(B) − term(B+1). Strictly decreasing in B with constant
/// ratio 2^(1/(n_t−1)).
pub fn feedback_gain(sigma_cross_i: f64, p_star_i: f64, b_i: u32, n_t: u32) -> Result<f64> {
    Ok(interference_term(sigma_cross_i, p_star_i, b_i, n_t)?
        - interference_term(sigma_cross_i, p_star_i, b_i + 1, n_t)?)
}

/// The sum interference bound over all links. Greedy and exhaustive
/// allocation both judge feasibility through this one function, so their
/// floating-point comparisons agree bit for bit.
pub fn interference_bound(
    bits: &[u32],
    powers: &[f64],
    sigma_cross: &[f64],
    n_t: u32,
) -> Result<f64> {
    if bits.len() != powers.len() || bits.len() != sigma_cross.len() || bits.is_empty() {
        return Err(Error::domain(
            "interference_bound",
            format!(
                "per-link slices must be equal and nonempty: {} bits, {} powers, {} variances",
                bits.len(),
                powers.len(),
                sigma_cross.len()
            ),
        ));
    }
    let mut sum = 0.0;
    for i in 0..bits.len() {
        sum += interference_term(sigma_cross[i], powers[i], bits[i], n_t)?;
    }
    Ok(sum)
}

// --- Allocation algorithms --------------------------------------------------

fn validate_instance(p_star: &[f64], sigma_cross: &[f64], aic: f64) -> Result<()> {
    if p_star.len() != sigma_cross.len() || p_star.is_empty() {
        return Err(Error::domain(
            "allocation",
            format!(
                "need one power and one variance per link, got {} and {}",
                p_star.len(),
                sigma_cross.len()
            ),
        ));
    }
    if !aic.is_finite() || aic < 0.0 {
        return Err(Error::domain(
            "allocation",
            format!("interference budget must be a nonnegative finite number, got {aic}"),
        ));
    }
    Ok(())
}

/// Greedy joint control at the default bit cap; see
/// [`greedy_allocate_with_cap`].
pub fn greedy_allocate(
    p_star: &[f64],
    sigma_cross: &[f64],
    n_t: u32,
    aic: f64,
) -> Result<ControlResult> {
    greedy_allocate_with_cap(p_star, sigma_cross, n_t, aic, DEFAULT_BIT_CAP)
}

/// Greedy joint control: starting from zero bits at minimum powers, grant
/// one bit at a time to the link with the largest feedback gain (ties to
/// the lowest index) until the sum bound fits the budget.
///
/// Because per-link gains decay geometrically and independently, the n
/// bits granted after n steps are exactly the n largest gains available
/// anywhere — which is why the greedy total matches the exhaustive
/// optimum (see [`exhaustive_allocate`] and the crate's oracle tests).
///
/// A budget at or above the zero-bit bound Ī₀ returns immediately with
/// [`Shortcut::LooseAic`]; a zero budget is an error (no finite allocation
/// reaches it at positive power); needing more than `bit_cap` total bits
/// is likewise an error.
pub fn greedy_allocate_with_cap(
    p_star: &[f64],
    sigma_cross: &[f64],
    n_t: u32,
    aic: f64,
    bit_cap: u32,
) -> Result<ControlResult> {
    validate_instance(p_star, sigma_cross, aic)?;
    let k = p_star.len();
    if aic == 0.0 {
        return Err(Error::ZeroBudget { links: k });
    }
    let mut bits = vec![0u32; k];
    let mut bound = interference_bound(&bits, p_star, sigma_cross, n_t)?;
    if bound <= aic {
        return Ok(ControlResult {
            allocation: Allocation {
                bits,
                powers: p_star.to_vec(),
                bound_value: bound,
            },
            iterations: 0,
            shortcut: Shortcut::LooseAic,
        });
    }
    let mut iterations = 0u32;
    while bound > aic {
        if iterations == bit_cap {
            return Err(Error::BitCapExceeded {
                cap: bit_cap,
                budget: aic,
            });
        }
        let mut best_link = 0;
        let mut best_gain = f64::NEG_INFINITY;
        for (i, (&sigma, &p)) in sigma_cross.iter().zip(p_star).enumerate() {
            let gain = feedback_gain(sigma, p, bits[i], n_t)?;
            if gain > best_gain {
                best_gain = gain;
                best_link = i;
            }
        }
        bits[best_link] += 1;
        iterations += 1;
        bound = interference_bound(&bits, p_star, sigma_cross, n_t)?;
    }
    Ok(ControlResult {
        allocation: Allocation {
            bits,
            powers: p_star.to_vec(),
            bound_value: bound,
        },
        iterations,
        shortcut: Shortcut::None,
    })
}

/// Exhaustive oracle: the allocation minimizing total bits subject to the
/// bound, lexicographically smallest among minimum-total solutions.
///
/// Enumerates total budgets n = 0, 1, 2, … and, within each, all
/// compositions of n into per-link bits in lexicographic order, returning
/// the first feasible candidate. The candidate count grows
/// combinatorially in the link count — this is a certification oracle for
/// small instances, not a production path.
pub fn exhaustive_allocate(
    p_star: &[f64],
    sigma_cross: &[f64],
    n_t: u32,
    aic: f64,
    bit_cap: u32,
) -> Result<ControlResult> {
    validate_instance(p_star, sigma_cross, aic)?;
    let k = p_star.len();
    if aic == 0.0 {
        return Err(Error::ZeroBudget { links: k });
    }
    // Reject invalid antenna counts up front (the recursion would
    // otherwise surface it mid-search).
    interference_term(sigma_cross[0], p_star[0], 0, n_t)?;
    let mut bits = vec![0u32; k];
    for total in 0..=bit_cap {
        if search_compositions(&mut bits, 0, total, p_star, sigma_cross, n_t, aic)? {
            let bound = interference_bound(&bits, p_star, sigma_cross, n_t)?;
            let total_bits = bits.iter().sum();
            return Ok(ControlResult {
                allocation: Allocation {
                    bits,
                    powers: p_star.to_vec(),
                    bound_value: bound,
                },
                iterations: total_bits,
                shortcut: Shortcut::None,
            });
        }
    }
    Err(Error::BitCapExceeded {
        cap: bit_cap,
        budget: aic,
    })
}

/// Fills `bits[link..]` with every composition of `remaining` in
/// lexicographic order; returns true (leaving `bits` set) on the first
/// feasible one.
fn search_compositions(
    bits: &mut [u32],
    link: usize,
    remaining: u32,
    p_star: &[f64],
    sigma_cross: &[f64],
    n_t: u32,
    aic: f64,
) -> Result<bool> {
    if link == bits.len() - 1 {
        bits[link] = remaining;
        return Ok(interference_bound(bits, p_star, sigma_cross, n_t)? <= aic);
    }
    for b in 0..=remaining {
        bits[link] = b;
        if search_compositions(bits, link + 1, remaining - b, p_star, sigma_cross, n_t, aic)? {
            return Ok(true);
        }
    }
    bits[link] = 0;
    Ok(false)
}

// --- Cost and the distance shortcut ------------------------------------------

/// Resource cost of an allocation: μ·Σbits + φ·Σpowers.
pub fn total_cost(allocation: &Allocation, mu: f64, phi: f64) -> f64 {
    mu * f64::from(allocation.total_bits()) + phi * allocation.powers.iter().sum::<f64>()
}

/// The smallest transmitter–primary distance at which no feedback is
/// needed at all: with path-loss cross variances σ²₀ = d^(−α), the
/// zero-bit bound Ī₀ = d^(−α)·(n_t/(n_t−1))·ΣP⋆ fits the budget exactly
/// when d = ((n_t/(n_t−1))·ΣP⋆/aic)^(1/α). Beyond this distance the
/// control problem collapses to minimum powers and zero bits.
pub fn min_safe_distance(p_star: &[f64], n_t: u32, aic: f64, alpha: f64) -> Result<f64> {
    if n_t < 3 {
        return Err(Error::domain(
            "min_safe_distance",
            format!("the interference bound requires n_t ≥ 3, got {n_t}"),
        ));
    }
    if p_star.is_empty() || p_star.iter().any(|p| *p <= 0.0 || !p.is_finite()) {
        return Err(Error::domain(
            "min_safe_distance",
            "powers must be positive".to_string(),
        ));
    }
    if alpha <= 0.0 || !alpha.is_finite() {
        return Err(Error::domain(
            "min_safe_distance",
            format!("path-loss exponent must be positive, got {alpha}"),
        ));
    }
    if aic <= 0.0 || !aic.is_finite() {
        return Err(Error::domain(
            "min_safe_distance",
            format!(
                "a zero interference budget puts the primary user at infinite \
                 distance (got aic = {aic})"
            ),
        ));
    }
    let nt = f64::from(n_t);
    let sum_p: f64 = p_star.iter().sum();
    Ok((nt / (nt - 1.0) * sum_p / aic).powf(1.0 / alpha))
}

#[cfg(test)]
// Reference values below are recorded at the full precision the oracle
// printed; the parsed f64 is what the assertions compare against.
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    // Minimum powers of the reference scenario (frozen in the delay
    // module's tests) and its cross-channel variances.
    const P_STAR: [f64; 3] = [
        27.165465027900870631,
        21.232784632581039303,
        19.726839010500672094,
    ];
    const SIGMA_CROSS: [f64; 3] = [1e-4, 5e-4, 1e-3];

    // Zero-bit sum bound Ī₀ at those powers, independently evaluated at
    // high precision.
    const I0_REFERENCE: f64 = 0.044079703772775038411;

    #[test]
    fn interference_term_special_cases() {
        // B = 0: the 2^0 factor drops out.
        let t0 = interference_term(5e-4, 20.0, 0, 4).unwrap();
        assert_relative_eq!(t0, 5e-4 * 20.0 * 4.0 / 3.0, max_relative = 1e-14);
        // B = 3(n_t−1): exactly one eighth.
        let t9 = interference_term(5e-4, 20.0, 9, 4).unwrap();
        assert_relative_eq!(t9, t0 / 8.0, max_relative = 1e-14);
    }

    #[test]
    fn interference_term_requires_three_antennas() {
        let err = interference_term(1e-4, 1.0, 0, 2).unwrap_err();
        assert!(matches!(err, Error::Domain { .. }));
        assert!(err.to_string().contains("n_t ≥ 3"));
    }

    #[test]
    fn feedback_gain_identity_and_decay() {
        for b in 0..20 {
            let gain = feedback_gain(5e-4, 20.0, b, 4).unwrap();
            let expected = interference_term(5e-4, 20.0, b, 4).unwrap()
                - interference_term(5e-4, 20.0, b + 1, 4).unwrap();
            assert_eq!(gain, expected);
            let next = feedback_gain(5e-4, 20.0, b + 1, 4).unwrap();
            assert!(gain > next);
            // Geometric decay with ratio 2^(1/3) at n_t = 4.
            assert_relative_eq!(gain / next, 2f64.powf(1.0 / 3.0), max_relative = 1e-12);
        }
    }

    #[test]
    fn zero_bit_bound_matches_reference() {
        let i0 = interference_bound(&[0, 0, 0], &P_STAR, &SIGMA_CROSS, 4).unwrap();
        assert_relative_eq!(i0, I0_REFERENCE, max_relative = 1e-9);
    }

    #[test]
    fn greedy_reproduces_reference_allocations() {
        let cases: [(f64, [u32; 3]); 4] = [
            (0.01, [1, 6, 9]),
            (0.02, [0, 3, 5]),
            (0.03, [0, 1, 3]),
            (0.04, [0, 0, 1]),
        ];
        for (aic, expected) in cases {
            let result = greedy_allocate(&P_STAR, &SIGMA_CROSS, 4, aic).unwrap();
            assert_eq!(result.allocation.bits, expected, "aic = {aic}");
            assert_eq!(result.shortcut, Shortcut::None);
            assert_eq!(result.iterations, result.allocation.total_bits());
            assert!(result.allocation.bound_value <= aic);
        }
    }

    #[test]
    fn exhaustive_matches_greedy_totals_and_is_lex_smallest() {
        let expected_bits: [(f64, [u32; 3]); 4] = [
            (0.01, [0, 6, 10]),
            (0.02, [0, 2, 6]),
            (0.03, [0, 0, 4]),
            (0.04, [0, 0, 1]),
        ];
        for (aic, expected) in expected_bits {
            let ga = greedy_allocate(&P_STAR, &SIGMA_CROSS, 4, aic).unwrap();
            let ea = exhaustive_allocate(&P_STAR, &SIGMA_CROSS, 4, aic, DEFAULT_BIT_CAP).unwrap();
            assert_eq!(
                ea.allocation.total_bits(),
                ga.allocation.total_bits(),
                "totals differ at aic = {aic}"
            );
            assert_eq!(ea.allocation.bits, expected, "aic = {aic}");
            assert!(ea.allocation.bound_value <= aic);
        }
    }

    #[test]
    fn loose_budget_shortcuts_to_zero_bits() {
        let result = greedy_allocate(&P_STAR, &SIGMA_CROSS, 4, 0.05).unwrap();
        assert_eq!(result.shortcut, Shortcut::LooseAic);
        assert_eq!(result.allocation.bits, vec![0, 0, 0]);
        assert_eq!(result.iterations, 0);
    }

    #[test]
    fn zero_budget_is_infeasible() {
        let err = greedy_allocate(&P_STAR, &SIGMA_CROSS, 4, 0.0).unwrap_err();
        assert!(err.is_infeasible());
        let err = exhaustive_allocate(&P_STAR, &SIGMA_CROSS, 4, 0.0, 32).unwrap_err();
        assert!(err.is_infeasible());
    }

    #[test]
    fn impossibly_tight_budget_hits_bit_cap() {
        let err = greedy_allocate(&P_STAR, &SIGMA_CROSS, 4, 1e-30).unwrap_err();
        assert!(matches!(err, Error::BitCapExceeded { cap: 32, .. }));
        let err = exhaustive_allocate(&P_STAR, &SIGMA_CROSS, 4, 1e-30, 8).unwrap_err();
        assert!(matches!(err, Error::BitCapExceeded { cap: 8, .. }));
    }

    #[test]
    fn single_link_exhaustive_matches_closed_form() {
        // One link: B is the smallest integer with
        // σ²·P·n_t/(n_t−1)·2^(−B/(n_t−1)) ≤ aic.
        let mut rng_state = 0x9E3779B97F4A7C15u64;
        let mut next = move || {
            // Cheap deterministic generator for test instances.
            rng_state ^= rng_state << 13;
            rng_state ^= rng_state >> 7;
            rng_state ^= rng_state << 17;
            (rng_state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..50 {
            let sigma = 1e-4 * 10f64.powf(2.0 * next());
            let p = 1.0 + 30.0 * next();
            let aic = 1e-4 * 10f64.powf(2.0 * next());
            let n_t = 4;
            let zero_bound = sigma * p * 4.0 / 3.0;
            let closed_form = if zero_bound <= aic {
                0
            } else {
                ((n_t - 1) as f64 * (zero_bound / aic).log2()).ceil() as u32
            };
            let ea = exhaustive_allocate(&[p], &[sigma], n_t as u32, aic, 64).unwrap();
            assert_eq!(ea.allocation.bits[0], closed_form);
        }
    }

    #[test]
    fn cost_reference_cases() {
        let zero_bits = Allocation {
            bits: vec![0, 0],
            powers: vec![2.0, 3.0],
            bound_value: 0.0,
        };
        assert_relative_eq!(total_cost(&zero_bits, 1.0, 2.0), 10.0);

        let ga = greedy_allocate(&P_STAR, &SIGMA_CROSS, 4, 0.01).unwrap();
        assert_relative_eq!(total_cost(&ga.allocation, 1.0, 0.0), 16.0);

        // Cost is nonincreasing as the budget loosens (fixed prices).
        let mut prev = f64::INFINITY;
        for aic in [0.01, 0.02, 0.03, 0.04] {
            let ga = greedy_allocate(&P_STAR, &SIGMA_CROSS, 4, aic).unwrap();
            let cost = total_cost(&ga.allocation, 1.0, 0.1);
            assert!(cost <= prev);
            prev = cost;
        }
    }

    #[test]
    fn min_safe_distance_round_trip_and_scaling() {
        let aic = 0.01;
        let d = min_safe_distance(&P_STAR, 4, aic, 2.0).unwrap();
        // At distance d the uniform cross variance d^(−α) gives Ī₀ = aic.
        let sigma = d.powf(-2.0);
        let i0 = interference_bound(&[0, 0, 0], &P_STAR, &[sigma; 3], 4).unwrap();
        assert_relative_eq!(i0, aic, max_relative = 1e-9);
        // And the greedy allocator agrees: nothing to feed back.
        let ga = greedy_allocate(&P_STAR, &[sigma; 3], 4, aic).unwrap();
        assert_eq!(ga.shortcut, Shortcut::LooseAic);

        // Monotone: looser budget, smaller distance.
        let d_loose = min_safe_distance(&P_STAR, 4, 0.04, 2.0).unwrap();
        assert!(d_loose < d);

        // α = 2: quadrupling the power sum doubles the distance.
        let quadrupled: Vec<f64> = P_STAR.iter().map(|p| 4.0 * p).collect();
        let d4 = min_safe_distance(&quadrupled, 4, aic, 2.0).unwrap();
        assert_relative_eq!(d4, 2.0 * d, max_relative = 1e-12);

        assert!(min_safe_distance(&P_STAR, 4, 0.0, 2.0).is_err());
    }

    #[test]
    fn shortcut_labels_are_stable() {
        assert_eq!(Shortcut::None.label(), "none");
        assert_eq!(Shortcut::LooseAic.label(), "loose_aic");
        assert_eq!(Shortcut::ZeroAicInfeasible.label(), "zero_aic_infeasible");
    }

    // Strategy for random small instances whose optimal totals stay modest.
    fn small_instance() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, f64)> {
        (1usize..=3).prop_flat_map(|k| {
            (
                proptest::collection::vec(0.5f64..50.0, k),
                proptest::collection::vec(1e-5f64..1e-2, k),
                1e-4f64..0.05,
            )
        })
    }

    proptest! {
        #[test]
        fn greedy_total_matches_exhaustive_total(
            (p, sigma, aic) in small_instance()
        ) {
            let ga = greedy_allocate_with_cap(&p, &sigma, 4, aic, 14);
            let ea = exhaustive_allocate(&p, &sigma, 4, aic, 14);
            match (ga, ea) {
                (Ok(ga), Ok(ea)) => {
                    prop_assert_eq!(
                        ga.allocation.total_bits(),
                        ea.allocation.total_bits()
                    );
                }
                (Err(a), Err(b)) => {
                    let a_capped = a.is_infeasible() || matches!(a, Error::BitCapExceeded { .. });
                    let b_capped = b.is_infeasible() || matches!(b, Error::BitCapExceeded { .. });
                    prop_assert!(a_capped, "unexpected greedy error: {a}");
                    prop_assert!(b_capped, "unexpected exhaustive error: {b}");
                }
                (ga, ea) => {
                    return Err(TestCaseError::fail(format!(
                        "feasibility disagreement: GA {ga:?} vs EA {ea:?}"
                    )));
                }
            }
        }

        #[test]
        fn removing_any_granted_bit_breaks_feasibility(
            (p, sigma, aic) in small_instance()
        ) {
            if let Ok(result) = greedy_allocate_with_cap(&p, &sigma, 4, aic, 14) {
                prop_assert!(result.allocation.bound_value <= aic);
                if result.shortcut == Shortcut::None {
                    for i in 0..result.allocation.bits.len() {
                        if result.allocation.bits[i] == 0 {
                            continue;
                        }
                        let mut fewer = result.allocation.bits.clone();
                        fewer[i] -= 1;
                        let bound = interference_bound(&fewer, &p, &sigma, 4).unwrap();
                        prop_assert!(
                            bound > aic,
                            "allocation not minimal: dropping a bit from link {} keeps \
                             the bound at {} ≤ {}",
                            i, bound, aic
                        );
                    }
                }
            }
        }

        #[test]
        fn greedy_is_permutation_equivariant(
            (p, sigma, aic) in small_instance()
        ) {
            let forward = greedy_allocate_with_cap(&p, &sigma, 4, aic, 14);
            let rp: Vec<f64> = p.iter().rev().copied().collect();
            let rs: Vec<f64> = sigma.iter().rev().copied().collect();
            let reversed = greedy_allocate_with_cap(&rp, &rs, 4, aic, 14);
            match (forward, reversed) {
                (Ok(f), Ok(r)) => {
                    let mut back = r.allocation.bits.clone();
                    back.reverse();
                    prop_assert_eq!(f.allocation.bits, back);
                }
                (Err(_), Err(_)) => {}
                (f, r) => {
                    return Err(TestCaseError::fail(format!(
                        "feasibility disagreement under permutation: {f:?} vs {r:?}"
                    )));
                }
            }
        }

        #[test]
        fn minimum_power_minimizes_cost(
            (p, sigma, aic) in small_instance(),
            inflate in 1.05f64..3.0,
        ) {
            // Any feasible plan at inflated powers costs strictly more
            // than the greedy plan at minimum powers (φ > 0).
            let at_min = greedy_allocate_with_cap(&p, &sigma, 4, aic, 20);
            let higher: Vec<f64> = p.iter().map(|v| v * inflate).collect();
            let at_higher = greedy_allocate_with_cap(&higher, &sigma, 4, aic, 20);
            if let (Ok(min_plan), Ok(high_plan)) = (at_min, at_higher) {
                let (mu, phi) = (1.0, 1.0);
                prop_assert!(
                    total_cost(&min_plan.allocation, mu, phi)
                        < total_cost(&high_plan.allocation, mu, phi)
                );
            }
        }
    }
}
