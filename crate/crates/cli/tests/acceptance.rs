//! Acceptance run: one `PASS`/`FAIL` line per criterion.
//!
//! Exact criteria (rule equivalence, gradients, environment invariants,
//! determinism) make the target fail. The four experiment-direction checks
//! are statistical claims about learning dynamics; they are reported with
//! their measured numbers but do not abort the run.

use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use modtd::env::{Bandit, CardSort, CardSortParams, HIGH_PROB, LOW_PROB};
use modtd::experiments::{
    cumulative_reward_summary, run_episode, run_experiment, sweep_choices, EpisodeConfig, ExperimentConfig, Summary,
    SweepRow, TaskConfig,
};
use modtd::neural::Mlp;
use modtd::{Hyperparams, Rule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Exact,
    Directional,
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

struct Criterion {
    name: &'static str,
    kind: Kind,
    budget: Duration,
    check: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion { name: "rule equivalence at pi = 1", kind: Kind::Exact, budget: secs(1), check: rule_equivalence },
        Criterion { name: "gradient check", kind: Kind::Exact, budget: secs(5), check: gradient_suite },
        Criterion { name: "environment invariants", kind: Kind::Exact, budget: secs(10), check: environment_invariants },
        Criterion { name: "CLI determinism", kind: Kind::Exact, budget: secs(120), check: cli_determinism },
        Criterion { name: "bandit adaptation (7 arms)", kind: Kind::Directional, budget: secs(60), check: bandit_adaptation },
        Criterion { name: "time-to-preference vs arms", kind: Kind::Directional, budget: secs(120), check: preference_vs_arms },
        Criterion { name: "reward crossover vs arms", kind: Kind::Directional, budget: secs(300), check: reward_crossover },
        Criterion { name: "card-sort DQN adaptation", kind: Kind::Directional, budget: secs(600), check: cardsort_adaptation },
    ];

    let mut exact_failures = 0;
    let mut directional_failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = std::panic::catch_unwind(c.check).unwrap_or_else(|_| outcome(false, "panicked"));
        let elapsed = start.elapsed();
        let over = if elapsed > c.budget { " [over time budget]" } else { "" };
        println!(
            "{} {}: {} ({:.1}s){over}",
            if result.pass { "PASS" } else { "FAIL" },
            c.name,
            result.detail,
            elapsed.as_secs_f64()
        );
        if !result.pass {
            match c.kind {
                Kind::Exact => exact_failures += 1,
                Kind::Directional => directional_failures += 1,
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed ({exact_failures} exact, {directional_failures} directional failures)",
        criteria.len() - exact_failures - directional_failures,
        criteria.len()
    );
    if exact_failures > 0 {
        std::process::exit(1);
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

// ---------------------------------------------------------------- exact

fn rule_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for i in 0..100 {
        let arms = rng.random_range(2..12);
        let params = Hyperparams {
            alpha: rng.random_range(0.0..=2.0),
            gamma: rng.random_range(0.0..=1.0),
            tau: rng.random_range(0.05..3.0),
        };
        let change_period = rng.random_range(5..60);
        let task = TaskConfig::Bandit { arms };
        let conventional = EpisodeConfig::new(task, Rule::Conventional, change_period, 300, params);
        let forced = EpisodeConfig {
            rule: Rule::Modulated,
            modulation_override: Some(1.0),
            ..conventional
        };
        let seed = rng.random();
        let a = run_episode(&conventional, seed);
        let b = run_episode(&forced, seed);
        match (a, b) {
            (Ok(a), Ok(b)) if a == b => {}
            (Err(a), Err(b)) if a.to_string() == b.to_string() => {}
            _ => return outcome(false, format!("config {i} diverged ({arms} arms, {params:?})")),
        }
    }
    outcome(true, "100 random configs bit-identical")
}

fn gradient_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9ad);
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let inputs = rng.random_range(1..5);
        let hidden = rng.random_range(1..8);
        let outputs = rng.random_range(2..5);
        let net = Mlp::new(inputs, hidden, outputs, &mut rng).unwrap();
        let x: Vec<f64> = (0..inputs).map(|_| rng.random_range(-2.0..2.0)).collect();
        let action = rng.random_range(0..outputs);
        let error_signal: f64 = rng.random_range(-2.0..2.0);
        let target = net.forward(&x).unwrap()[action] + error_signal;
        let loss = |n: &Mlp| 0.5 * (target - n.forward(&x).unwrap()[action]).powi(2);

        let analytic = net.backward(&x, action, error_signal).unwrap();
        let mut numeric = Vec::new();
        for block in 0..4 {
            let len = param_block(&net, block).len();
            for k in 0..len {
                let mut plus = net.clone();
                param_block_mut(&mut plus, block)[k] += h;
                let mut minus = net.clone();
                param_block_mut(&mut minus, block)[k] -= h;
                numeric.push((loss(&plus) - loss(&minus)) / (2.0 * h));
            }
        }
        let analytic: Vec<f64> = analytic.iter().collect();
        let diff = norm(analytic.iter().zip(&numeric).map(|(a, n)| a - n));
        let scale = norm(analytic.iter().copied()).max(norm(numeric.iter().copied())).max(1e-12);
        worst = worst.max(diff / scale);
    }
    outcome(worst < 1e-4, format!("worst relative error {worst:.2e} over 100 networks"))
}

fn param_block(net: &Mlp, block: usize) -> &[f64] {
    [&net.w1, &net.b1, &net.w2, &net.b2][block]
}

fn param_block_mut(net: &mut Mlp, block: usize) -> &mut Vec<f64> {
    match block {
        0 => &mut net.w1,
        1 => &mut net.b1,
        2 => &mut net.w2,
        _ => &mut net.b2,
    }
}

fn norm(v: impl Iterator<Item = f64>) -> f64 {
    v.map(|x| x * x).sum::<f64>().sqrt()
}

fn environment_invariants() -> Outcome {
    let mut problems = Vec::new();

    // Rotation keeps the probability multiset and zeroes the previous high arm.
    for seed in 0..50u64 {
        let n = 2 + (seed as usize % 10);
        let mut bandit = Bandit::new(n, 7, seed).unwrap();
        let sorted = |mut v: Vec<f64>| {
            v.sort_by(f64::total_cmp);
            v
        };
        let reference = sorted(bandit.arm_probs());
        for _ in 0..3 * n {
            let previous_best = bandit.best_arm();
            bandit.rotate();
            if sorted(bandit.arm_probs()) != reference {
                problems.push(format!("multiset changed (seed {seed})"));
            }
            if bandit.arm_prob(previous_best).unwrap() != LOW_PROB {
                problems.push(format!("previous best not zeroed (seed {seed})"));
            }
            if bandit.arm_prob(bandit.best_arm()).unwrap() != HIGH_PROB {
                problems.push(format!("best arm mislabelled (seed {seed})"));
            }
        }
    }

    // Every scramble is a derangement of the class-to-label map.
    for seed in 0..50u64 {
        let classes = 2 + (seed as usize % 7);
        let mut task = CardSort::new(CardSortParams::new(classes, 1_000_000), seed).unwrap();
        for _ in 0..200 {
            let before = task.label_perm().to_vec();
            task.scramble();
            if before.iter().zip(task.label_perm()).any(|(a, b)| a == b) {
                problems.push(format!("scramble kept a label (seed {seed})"));
                break;
            }
        }
    }

    // Expected rewards: 2p - 1 for a Bernoulli(p) arm, 2/k - 1 for random sorting.
    let samples = 200_000;
    let mut bandit = Bandit::new(5, usize::MAX, 11).unwrap();
    for arm in 0..5 {
        let p = bandit.arm_prob(arm).unwrap();
        let mean = (0..samples).map(|_| bandit.step(arm).unwrap()).sum::<f64>() / samples as f64;
        let bound = 4.0 * 2.0 * (p * (1.0 - p) / samples as f64).sqrt() + 1e-12;
        if (mean - (2.0 * p - 1.0)).abs() > bound {
            problems.push(format!("arm with p={p:.3}: mean reward {mean:.4}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in [2, 4, 7] {
        let mut task = CardSort::new(CardSortParams::new(k, 50), 21).unwrap();
        let mean = (0..samples)
            .map(|_| task.trial(Some(rng.random_range(0..k))).unwrap().1.unwrap())
            .sum::<f64>()
            / samples as f64;
        let p = 1.0 / k as f64;
        let bound = 4.0 * 2.0 * (p * (1.0 - p) / samples as f64).sqrt();
        if (mean - (2.0 * p - 1.0)).abs() > bound {
            problems.push(format!("k={k}: mean reward {mean:.4}"));
        }
    }

    if problems.is_empty() {
        outcome(true, "rotation, derangement and reward expectations hold")
    } else {
        outcome(false, problems.join("; "))
    }
}

fn cli_determinism() -> Outcome {
    let commands: [&[&str]; 3] = [
        &["bandit", "--arms", "5", "--steps", "600", "--reps", "5", "--seed", "4"],
        &["cardsort", "--classes", "3", "--steps", "300", "--reps", "3", "--alpha-grid", "0.05,0.1", "--seed", "4"],
        &["sweep", "--task", "bandit", "--n-values", "3,6", "--steps", "400", "--reps", "4", "--seed", "4"],
    ];
    for args in commands {
        let runs: Vec<_> = (0..2).map(|_| tempfile::tempdir().unwrap()).collect();
        for dir in &runs {
            let status = Command::new(env!("CARGO_BIN_EXE_modtd"))
                .args(args)
                .args(["--out", dir.path().to_str().unwrap()])
                .output()
                .unwrap();
            if !status.status.success() {
                return outcome(false, format!("`{}` failed: {}", args[0], String::from_utf8_lossy(&status.stderr)));
            }
        }
        let files = listing(runs[0].path());
        if files.is_empty() || files != listing(runs[1].path()) {
            return outcome(false, format!("`{}` produced different file sets", args[0]));
        }
        for name in &files {
            if fs::read(runs[0].path().join(name)).unwrap() != fs::read(runs[1].path().join(name)).unwrap() {
                return outcome(false, format!("`{}` output {name} differs between runs", args[0]));
            }
        }
    }
    outcome(true, "bandit, cardsort and sweep reruns byte-identical")
}

fn listing(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names
}

// ---------------------------------------------------------- directional

const SEED: u64 = 1;

fn final_and_early(config: &ExperimentConfig, early_step: usize) -> [(Summary, Summary); 2] {
    let result = run_experiment(config).unwrap();
    Rule::ALL.map(|rule| {
        let curve = cumulative_reward_summary(&result.rule(rule).unwrap().records).unwrap();
        (curve[curve.len() - 1], curve[early_step - 1])
    })
}

fn show(s: &Summary) -> String {
    format!("{:.1}±{:.1}", s.mean, s.half_width)
}

fn bandit_adaptation() -> Outcome {
    let [(conv_final, conv_early), (mod_final, mod_early)] = final_and_early(&ExperimentConfig::bandit(7, SEED), 100);
    let wins = mod_final.mean > conv_final.mean && mod_final.separated_from(&conv_final);
    let early_lead = conv_early.mean > mod_early.mean;
    outcome(
        wins && early_lead,
        format!(
            "final conventional {} vs modulated {} (separated: {}); step 100 conventional {:.1} vs modulated {:.1}",
            show(&conv_final),
            show(&mod_final),
            mod_final.separated_from(&conv_final),
            conv_early.mean,
            mod_early.mean
        ),
    )
}

fn cardsort_adaptation() -> Outcome {
    let [(conv, _), (modu, _)] = final_and_early(&ExperimentConfig::cardsort(4, SEED), 1);
    outcome(
        modu.mean > conv.mean && modu.separated_from(&conv),
        format!("final conventional {} vs modulated {}", show(&conv), show(&modu)),
    )
}

/// Bandit sweep shared by the two choice-count criteria.
fn bandit_sweep() -> &'static [SweepRow] {
    static ROWS: std::sync::OnceLock<Vec<SweepRow>> = std::sync::OnceLock::new();
    ROWS.get_or_init(|| sweep_choices(&ExperimentConfig::bandit(7, SEED), &[3, 5, 7, 9, 11, 15, 19, 23]).unwrap())
}

fn cell(rows: &[SweepRow], n: usize, rule: Rule) -> &SweepRow {
    rows.iter().find(|r| r.n == n && r.rule == rule).unwrap()
}

fn preference_vs_arms() -> Outcome {
    let rows = bandit_sweep();
    let ns = [3, 5, 7, 9, 11];
    let ttp = |n, rule| cell(rows, n, rule).time_to_preference.unwrap().mean;
    let modulated: Vec<f64> = ns.iter().map(|&n| ttp(n, Rule::Modulated)).collect();
    let rho = spearman(&ns.map(|n| n as f64), &modulated);
    let strictly = modulated.windows(2).all(|w| w[1] > w[0]);
    let above = ns.iter().filter(|&&n| n >= 7).all(|&n| ttp(n, Rule::Modulated) > ttp(n, Rule::Conventional));
    let listing: Vec<String> = ns
        .iter()
        .map(|&n| format!("n={n}: {:.1}/{:.1}", ttp(n, Rule::Conventional), ttp(n, Rule::Modulated)))
        .collect();
    outcome(
        rho >= 0.9 && above,
        format!(
            "spearman {rho:.2}, strictly increasing: {strictly}, modulated slower at n>=7: {above} (conventional/modulated {})",
            listing.join(", ")
        ),
    )
}

fn reward_crossover() -> Outcome {
    let rows = bandit_sweep();
    let ns = [3, 5, 7, 11, 15, 19, 23];
    let gap = |n| {
        let m = cell(rows, n, Rule::Modulated).reward_per_step;
        let c = cell(rows, n, Rule::Conventional).reward_per_step;
        (m.mean - c.mean, (m.half_width.powi(2) + c.half_width.powi(2)).sqrt())
    };
    let gaps: Vec<f64> = ns.iter().map(|&n| gap(n).0).collect();
    let early_win = ns.iter().filter(|&&n| n <= 7).any(|&n| gap(n).0 > 0.0);
    let rho = spearman(&ns.map(|n| n as f64), &gaps);
    let (last, last_hw) = gap(23);
    let reversed = last < 0.0 || last.abs() <= last_hw;
    let listing: Vec<String> = ns.iter().zip(&gaps).map(|(n, g)| format!("{n}:{g:+.3}")).collect();
    outcome(
        early_win && rho <= -0.9 && reversed,
        format!(
            "gap by n [{}]; modulated ahead at some n<=7: {early_win}; spearman {rho:.2}; n=23 gap {last:+.3}±{last_hw:.3}",
            listing.join(" ")
        ),
    )
}

/// Rank correlation with average ranks for ties.
fn spearman(x: &[f64], y: &[f64]) -> f64 {
    let (rx, ry) = (ranks(x), ranks(y));
    let mean = (x.len() as f64 + 1.0) / 2.0;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mean) * (b - mean)).sum();
    let sx = rx.iter().map(|a| (a - mean).powi(2)).sum::<f64>().sqrt();
    let sy = ry.iter().map(|b| (b - mean).powi(2)).sum::<f64>().sqrt();
    cov / (sx * sy)
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut out = vec![0.0; v.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && v[order[j + 1]] == v[order[i]] {
            j += 1;
        }
        for &k in &order[i..=j] {
            out[k] = (i + j) as f64 / 2.0 + 1.0;
        }
        i = j + 1;
    }
    out
}
