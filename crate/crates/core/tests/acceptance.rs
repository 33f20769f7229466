// Copyright 2026 The ecp-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ecp_core::ecp::{
    comparison_curves, entanglement, ghz_reduce, ghz_state, round_branches, schmidt_projection_yield, sum_of_products,
    total_success_probability, RoundVerdict,
};
use ecp_core::locc::{run_protocol, ProtocolConfig};
use ecp_core::montecarlo::{enumerate_success, estimate_success, pool_schmidt_oracle, trial_rng, TrajectoryConfig};
use ecp_core::pcd::{pcd_measure, pcd_probabilities, pcd_project, SignConvention};
use ecp_core::quantum::{BasisKet, PureState};
use ecp_core::{Parity, ProbeModel, SchmidtCoefficients};
use num::{BigInt, One, ToPrimitive, Zero};
use num_complex::Complex64;
use rand::Rng;

const EXACT: f64 = 1e-12;
const SIGMAS: f64 = 4.0;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn alpha_grid() -> Vec<(u32, SchmidtCoefficients)> {
    (1..=99).map(|k| (k, SchmidtCoefficients::from_alpha_squared(k as f64 / 100.0).unwrap())).collect()
}

/// `E ∈ {0.01, …, 0.99}` with `a = √(E/2) ≤ b`.
fn entanglement_grid() -> Vec<(u32, SchmidtCoefficients)> {
    (1..=99).map(|k| (k, SchmidtCoefficients::from_entanglement(k as f64 / 100.0).unwrap())).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bell(n: usize) -> PureState {
    ghz_state(n, SchmidtCoefficients::maximally_entangled()).unwrap()
}

/// Check a round at `n` photons against the two-photon algebra.
fn check_round_algebra(n: usize, c: SchmidtCoefficients) -> Result<f64, String> {
    let (a2, b2) = (c.alpha_squared(), c.beta_squared());
    let (two_level, reduction) = ghz_reduce(n, c).map_err(|e| e.to_string())?;
    let state = reduction.embed(two_level).unwrap();
    let branches = round_branches(&state, 0, c, &ProbeModel::default()).unwrap();
    let reference = round_branches(&ghz_state(2, c).unwrap(), 0, c, &ProbeModel::default()).unwrap();
    ensure(branches.len() == reference.len(), || format!("N={n}: branch count differs from N=2"))?;
    let mut worst: f64 = 0.0;
    let mut success = 0.0;
    for (br, two) in branches.iter().zip(&reference) {
        worst = worst.max((br.probability - two.probability).abs());
        match br.verdict {
            RoundVerdict::Success => {
                success += br.probability;
                let f = br.post_state.fidelity(&bell(n)).unwrap();
                worst = worst.max((f - 1.0).abs());
            }
            RoundVerdict::Failure => {
                let (h, v) = reduction
                    .two_level_amplitudes(&br.post_state)
                    .ok_or_else(|| format!("N={n}: failure state leaves the GHZ span"))?;
                // (h, v) ∝ (a², −b²) up to a global phase
                let norm = (a2 * a2 + b2 * b2).sqrt();
                let overlap = (h.conj() * a2 - v.conj() * b2).norm() / norm;
                worst = worst.max((overlap - 1.0).abs());
            }
        }
    }
    worst = worst.max((success - 2.0 * a2 * b2).abs());
    Ok(worst)
}

fn ac1_branch_algebra() -> Outcome {
    let mut worst: f64 = 0.0;
    for (k, c) in alpha_grid() {
        let w = check_round_algebra(2, c)?;
        ensure(w <= EXACT, || format!("a²={}: deviation {w:e}", k as f64 / 100.0))?;
        worst = worst.max(w);
    }
    Ok(format!("99 grid points, max deviation {worst:.2e}"))
}

fn ac2_literal_consistency() -> Outcome {
    let mut worst: f64 = 0.0;
    for (_, c) in alpha_grid() {
        for n in 1..=10 {
            worst = worst.max((total_success_probability(c, n) - sum_of_products(c, n)).abs());
        }
    }
    ensure(worst <= EXACT, || format!("max |Δ| = {worst:e}"))?;
    Ok(format!("n = 1..10, max |Δ| = {worst:.2e}"))
}

fn ac3_convergence() -> Outcome {
    let mut gaps = [0.0f64; 3];
    let mut symmetric_gap = None;
    for (k, c) in alpha_grid().into_iter().chain(entanglement_grid()) {
        let e = entanglement(c);
        let gap = |n| e - total_success_probability(c, n);
        if e <= 0.4 + 1e-9 {
            gaps[0] = gaps[0].max(gap(2));
        }
        if e <= 0.72 + 1e-9 {
            gaps[1] = gaps[1].max(gap(3));
        }
        gaps[2] = gaps[2].max(gap(6));
        if (e - 1.0).abs() < 1e-12 {
            symmetric_gap = Some((k, gap(6)));
        }
    }
    ensure(gaps[0] <= 0.005, || format!("E ≤ 0.4: max E − P_2 = {}", gaps[0]))?;
    ensure(gaps[1] <= 0.006, || format!("E ≤ 0.72: max E − P_3 = {}", gaps[1]))?;
    let bound = 2f64.powi(-6);
    ensure(gaps[2] <= bound + EXACT, || format!("max E − P_6 = {} > 2⁻⁶", gaps[2]))?;
    let (_, sym) = symmetric_gap.ok_or("grid lacks E = 1")?;
    ensure((sym - bound).abs() <= EXACT, || format!("gap at E = 1 is {sym}, expected 2⁻⁶"))?;
    Ok(format!("max gaps: P_2 {:.6} (E≤0.4), P_3 {:.6} (E≤0.72), P_6 {:.6} (= 2⁻⁶ at E=1)", gaps[0], gaps[1], gaps[2]))
}

/// Exact `P_n` for `a² = K/100`, held as `P_n = 2·S_n / (100·D_n)` over
/// integers so no gcd reduction is needed.
///
/// With `u_j = K^{2^{j−1}}`, `w_j = L^{2^{j−1}}` (`L = 100 − K`),
/// `D_n = Π_{j ≤ n} (u_j + w_j)` and `S_n = S_{n−1}·(u_n + w_n) + u_n·w_n`.
struct ExactSeries {
    limit: BigInt,
    u: BigInt,
    w: BigInt,
    s: BigInt,
    d: BigInt,
}

impl ExactSeries {
    fn new(k: u32) -> Self {
        ExactSeries {
            limit: BigInt::from(k.min(100 - k)),
            u: BigInt::from(k),
            w: BigInt::from(100 - k),
            s: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    /// Advance to the next round. Returns whether `P` strictly increased.
    fn step(&mut self) -> bool {
        let sum = &self.u + &self.w;
        let carried = &self.s * &sum;
        self.s = &carried + &self.u * &self.w;
        self.d *= &sum;
        self.u = &self.u * &self.u;
        self.w = &self.w * &self.w;
        self.s > carried
    }

    /// `P_n ≤ E = 2·min(K, L)/100`.
    fn below_entanglement(&self) -> bool {
        self.s <= &self.limit * &self.d
    }

    fn to_f64(&self) -> f64 {
        let shift = self.d.bits().saturating_sub(64);
        let (num, den) = (&self.s >> shift, &self.d >> shift);
        2.0 * num.to_f64().unwrap() / (100.0 * den.to_f64().unwrap())
    }
}

fn ac4_monotone_and_bounded() -> Outcome {
    // Exact arithmetic decides the strict inequalities; the f64 engine is
    // then required to agree with the exact values.
    let mut worst: f64 = 0.0;
    for (k, c) in alpha_grid() {
        let mut exact = ExactSeries::new(k);
        exact.step();
        for n in 1..=10 {
            ensure(exact.below_entanglement(), || format!("a²={k}/100: P_{n} > E"))?;
            let float = total_success_probability(c, n);
            worst = worst.max((float - exact.to_f64()).abs());
            ensure(float <= entanglement(c) + EXACT, || format!("a²={k}/100: f64 P_{n} > E"))?;
            ensure(float <= total_success_probability(c, n + 1), || {
                format!("a²={k}/100: f64 P decreases after n={n}")
            })?;
            ensure(exact.step(), || format!("a²={k}/100: P_{} ≥ P_{}", n, n + 1))?;
        }
    }
    ensure(worst <= EXACT, || format!("f64 engine deviates from exact values by {worst:e}"))?;
    Ok(format!("strict P_n < P_n+1 and P_n ≤ E exact for n ≤ 10; f64 vs exact {worst:.2e}"))
}

fn ac5_monte_carlo() -> Outcome {
    let c = SchmidtCoefficients::from_alpha_squared(0.2).unwrap();
    let analytic = total_success_probability(c, 2);
    ensure((analytic - 0.3952945).abs() < 1e-6, || format!("analytic P_2 = {analytic}"))?;
    let stats = estimate_success(c, 2, 1_000_000, 20_120_311).map_err(|e| e.to_string())?;
    let z = stats.z_score(analytic);
    ensure(z.abs() <= SIGMAS, || format!("estimate {} vs {analytic}: z = {z:.2}", stats.estimate))?;
    let mut worst: f64 = 0.0;
    for (_, c) in alpha_grid() {
        for n in 1..=4 {
            let s = enumerate_success(&TrajectoryConfig::default(), c, n).map_err(|e| e.to_string())?;
            worst = worst.max((s.success_probability - total_success_probability(c, n)).abs());
        }
    }
    ensure(worst <= EXACT, || format!("enumeration deviates by {worst:e}"))?;
    Ok(format!(
        "10⁶ trials: {:.6} ± {:.6} (z = {z:+.2}); enumeration n ≤ 4 max |Δ| = {worst:.2e}",
        stats.estimate, stats.standard_error
    ))
}

fn ac6_ghz_generalization() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 3..=5 {
        for (k, c) in alpha_grid() {
            let w = check_round_algebra(n, c)?;
            ensure(w <= EXACT, || format!("N={n}, a²={}: deviation {w:e}", k as f64 / 100.0))?;
            worst = worst.max(w);
        }
    }
    Ok(format!("N = 3, 4, 5 on 99 points, max deviation {worst:.2e}"))
}

fn random_state<R: Rng>(rng: &mut R, n: usize) -> PureState {
    let amps = (0..1usize << n).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    PureState::new(amps.collect()).unwrap()
}

fn ac7_pcd_semantics() -> Outcome {
    let mut rng = trial_rng(7, 0);
    let plus = ProbeModel::default();
    let minus = plus.with_convention(SignConvention::VerticalPositive);
    let mut worst: f64 = 0.0;
    for _ in 0..1_000 {
        let n = rng.random_range(2..=4);
        let i = rng.random_range(0..n);
        let j = (i + rng.random_range(1..n)) % n;
        let state = random_state(&mut rng, n);
        let (p_even, _) = pcd_probabilities(&state, i, j).unwrap();
        let (p, post) = pcd_project(&state, i, j, &plus, Parity::Even).unwrap();
        let post = post.ok_or("empty even branch")?;
        worst = worst.max((p - p_even).abs());
        for (index, (got, input)) in post.amplitudes().iter().zip(state.amplitudes()).enumerate() {
            let labels = BasisKet::from_index(index, n);
            let equal = labels.labels()[i] == labels.labels()[j];
            let want = if equal { input / p.sqrt() } else { Complex64::new(0.0, 0.0) };
            worst = worst.max((got - want).norm());
        }
        let (p2, folded) = pcd_project(&state, i, j, &minus, Parity::Even).unwrap();
        worst = worst.max((p - p2).abs());
        for (x, y) in post.amplitudes().iter().zip(folded.unwrap().amplitudes()) {
            worst = worst.max((x - y).norm());
        }
    }
    ensure(worst <= EXACT, || format!("coherence/folding deviation {worst:e}"))?;

    let eps = 0.1;
    let noisy = ProbeModel::new(0.1, eps).unwrap();
    let trials = 100_000u32;
    let state = random_state(&mut rng, 3);
    let mut rng = trial_rng(7, 1);
    let mut errors = 0u32;
    for _ in 0..trials {
        let r = pcd_measure(&state, 0, 2, &noisy, &mut rng).unwrap();
        errors += (r.reported != r.outcome.parity) as u32;
    }
    let freq = errors as f64 / trials as f64;
    let sigma = (eps * (1.0 - eps) / trials as f64).sqrt();
    ensure((freq - eps).abs() <= SIGMAS * sigma, || format!("label error rate {freq} vs ε = {eps}"))?;
    Ok(format!("1000 random states max deviation {worst:.2e}; label error rate {freq:.4} (σ = {sigma:.4})"))
}

fn ac8_comparison() -> Outcome {
    let mut points = 0;
    for (_, c) in entanglement_grid().into_iter().chain(alpha_grid()) {
        let e = entanglement(c);
        if e >= 1.0 - 1e-12 {
            continue;
        }
        let p = comparison_curves(c, 6);
        ensure(p.p_o > p.p_b && p.p_b > p.p_s && p.p_s > p.p_z, || format!("ordering fails at E = {e}: {p:?}"))?;
        ensure(p.p_b == e / 2.0, || format!("P_B ≠ E/2 at E = {e}"))?;
        ensure(p.p_z == c.alpha_squared() * c.beta_squared(), || format!("P_Z ≠ a²b² at E = {e}"))?;
        points += 1;
    }
    let mut spots = Vec::new();
    for (idx, e) in [0.2, 0.5, 0.9].into_iter().enumerate() {
        let c = SchmidtCoefficients::from_entanglement(e).unwrap();
        let recursion = schmidt_projection_yield(c, 6);
        let pool = pool_schmidt_oracle(c, 6, 100_000, 1_000 + idx as u64).map_err(|e| e.to_string())?;
        let z = pool.z_score(recursion);
        ensure(z.abs() <= SIGMAS, || {
            format!("E = {e}: pool {} vs recursion {recursion} (z = {z:.2})", pool.yield_estimate)
        })?;
        spots.push(format!("E={e}: z={z:+.2}"));
    }
    Ok(format!("ordering on {points} interior points; pool oracle {}", spots.join(", ")))
}

fn ac9_locc() -> Outcome {
    let c = SchmidtCoefficients::from_alpha_squared(0.2).unwrap();
    let rounds = 3;
    let runs = 1_000u64;
    let mut successes = 0u64;
    for seed in 0..runs {
        let t = run_protocol(&ProtocolConfig::new(3, c, rounds, seed)).map_err(|e| e.to_string())?;
        ensure(t.verdicts_agree(), || format!("seed {seed}: verdicts disagree"))?;
        ensure(t.quantum_events_alice_only(), || format!("seed {seed}: non-Alice quantum event"))?;
        t.check_exactly_once().map_err(|e| format!("seed {seed}: {e}"))?;
        successes += (t.verdict() == RoundVerdict::Success) as u64;
    }
    let analytic = total_success_probability(c, rounds);
    let freq = successes as f64 / runs as f64;
    let sigma = (analytic * (1.0 - analytic) / runs as f64).sqrt();
    ensure((freq - analytic).abs() <= SIGMAS * sigma, || format!("success frequency {freq} vs P_3 = {analytic}"))?;
    Ok(format!("1000 runs at N=3: frequency {freq:.3} vs P_3 = {analytic:.4} (σ = {sigma:.4})"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("AC1 branch algebra", ac1_branch_algebra, Duration::from_secs(1)),
        ("AC2 literal sum-of-products consistency", ac2_literal_consistency, Duration::from_secs(1)),
        ("AC3 optimality convergence", ac3_convergence, Duration::from_secs(1)),
        ("AC4 monotonicity and bound", ac4_monotone_and_bounded, Duration::from_secs(1)),
        ("AC5 Monte Carlo oracle", ac5_monte_carlo, Duration::from_secs(60)),
        ("AC6 GHZ generalization", ac6_ghz_generalization, Duration::from_secs(10)),
        ("AC7 PCD semantics", ac7_pcd_semantics, Duration::from_secs(30)),
        ("AC8 comparison curves", ac8_comparison, Duration::from_secs(120)),
        ("AC9 LOCC harness", ac9_locc, Duration::from_secs(30)),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed <= budget {
                Ok(detail)
            } else {
                Err(format!("{detail}; exceeded {budget:?} budget"))
            }
        });
        match outcome {
            Ok(detail) => println!("PASS  {name} [{:.3}s] {detail}", elapsed.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name} [{:.3}s] {why}", elapsed.as_secs_f64());
            }
        }
    }
    println!("{} of 9 acceptance criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
