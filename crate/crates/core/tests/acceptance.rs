//! Acceptance gate: one line per criterion, non-zero exit if any fails.

use std::f64::consts::PI;
use std::time::Instant;

use qdchain::analysis::{
    detect_phase_features, find_antiresonances, omega_grid, sweep, valley_width, PhaseKind, SpectrumSeries,
    SweepTemplate, ANTIRESONANCE_THRESHOLD, SHARPNESS_RATIO, SHARPNESS_WINDOW,
};
use qdchain::analytic::{tau_n2, tau_n3, ClosedFormParams};
use qdchain::model::make_pt_chain;
use qdchain::molecular::{eigendecompose_chain, uniform_chain_eigensystem};
use qdchain::negf::{evaluate, transmission_amplitude};
use qdchain::presets::FigureId;
use qdchain::verify::{parity_mismatches, random_specs};
use qdchain::{Allocation, ChainSpec};

const GAMMAS: [f64; 4] = [0.0, 0.1, 0.3, 0.5];
const PHIS: [f64; 4] = [0.0, PI / 2.0, PI, 2.0 * PI];

type Check = fn() -> Outcome;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn grid() -> Vec<f64> {
    omega_grid(-1.99, 1.99, 4001).unwrap()
}

fn template(n: usize, delta: f64) -> SweepTemplate {
    SweepTemplate {
        n_dots: n,
        delta,
        ..Default::default()
    }
}

fn series(n: usize, delta: f64, gamma: f64, phi: f64) -> SpectrumSeries {
    let spec = template(n, delta).circuit(gamma, phi).unwrap();
    SpectrumSeries::compute(spec, gamma, phi, &grid()).unwrap()
}

fn oracle(n: usize, e2s: &[f64]) -> Outcome {
    let start = Instant::now();
    let g = grid();
    let mut worst = 0.0f64;
    for &e2 in e2s {
        for gamma in GAMMAS {
            for phi in PHIS {
                let p = ClosedFormParams {
                    gamma,
                    phi,
                    e2,
                    ..Default::default()
                };
                let spec = p.circuit(n).unwrap();
                for &w in &g {
                    let exact = if n == 2 { tau_n2(&p, w) } else { tau_n3(&p, w) }.unwrap();
                    let t = evaluate(&spec, w).unwrap().transmission;
                    worst = worst.max((t - exact.norm_sqr()).abs());
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst < 1e-12 && secs < 1.0,
        format!("max |ΔT| = {worst:.3e} (tol 1e-12), runtime {secs:.3} s (budget 1 s)"),
    )
}

fn c1() -> Outcome {
    oracle(2, &[0.0])
}

fn c2() -> Outcome {
    oracle(3, &[0.0, 0.5])
}

fn c3() -> Outcome {
    let mut worst = 0.0f64;
    for (spec, w) in random_specs(100, 77).unwrap() {
        let p = evaluate(&spec, w).unwrap();
        let tau = transmission_amplitude(&spec, w).unwrap();
        worst = worst.max((p.transmission - tau.norm_sqr()).abs());
    }
    outcome(worst < 1e-12, format!("100 random circuits, max |T − |τ|²| = {worst:.3e}"))
}

fn c4() -> Outcome {
    let bad = parity_mismatches().unwrap();
    outcome(bad == 0, format!("{bad} of 14 (N, φ) cases differ from the parity rule"))
}

/// `(N, δ, φ, zeros)` with zeros checked by direct evaluation.
fn exact_zero_cases() -> Vec<(usize, f64, f64, Vec<f64>)> {
    vec![
        (2, 0.0, 0.0, vec![-0.5]),
        (2, 0.0, 2.0 * PI, vec![0.5]),
        (3, 0.5, 0.0, vec![0.0, 0.5]),
        (3, 0.5, 2.0 * PI, vec![-0.5, 1.0]),
    ]
}

fn refined_zero_cases() -> Vec<(usize, f64, f64, Vec<f64>)> {
    let r = 0.5 * 2f64.sqrt();
    vec![
        (4, 0.0, 0.0, vec![0.5]),
        (4, 0.0, 2.0 * PI, vec![-0.5]),
        (5, 0.0, 0.0, vec![-r, r]),
        (5, 0.0, 2.0 * PI, vec![0.0]),
    ]
}

fn nearest_refined(n: usize, delta: f64, gamma: f64, phi: f64, target: f64) -> Option<f64> {
    let s = series(n, delta, gamma, phi);
    find_antiresonances(&s, ANTIRESONANCE_THRESHOLD, true)
        .unwrap()
        .into_iter()
        .map(|f| f.omega)
        .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()))
}

fn c5() -> Outcome {
    let mut misses = Vec::new();
    for (n, delta, phi, zeros) in exact_zero_cases() {
        for gamma in GAMMAS {
            let spec = template(n, delta).circuit(gamma, phi).unwrap();
            for &w in &zeros {
                let t = evaluate(&spec, w).unwrap().transmission;
                if t.is_nan() || t >= 1e-12 {
                    misses.push(format!("N={n} φ={:.0}π γ={gamma} T({w})={t:.3e}", phi / PI));
                }
            }
        }
    }
    for (n, delta, phi, zeros) in refined_zero_cases() {
        for gamma in GAMMAS {
            for &z in &zeros {
                match nearest_refined(n, delta, gamma, phi, z) {
                    Some(w) if (w - z).abs() < 1e-6 => {}
                    found => misses.push(format!("N={n} φ={:.0}π γ={gamma} zero {z:.4} found {found:?}", phi / PI)),
                }
            }
        }
    }
    let detail = if misses.is_empty() {
        "all zeros present".to_string()
    } else {
        format!("{} misses: {}", misses.len(), misses.join("; "))
    };
    outcome(misses.is_empty(), detail)
}

fn c6() -> Outcome {
    let mut worst = 0.0f64;
    let mut missing = 0;
    for (n, delta, phi, zeros) in exact_zero_cases().into_iter().chain(refined_zero_cases()) {
        for &z in &zeros {
            let found: Vec<f64> = [0.1, 0.3, 0.5]
                .iter()
                .filter_map(|&g| nearest_refined(n, delta, g, phi, z))
                .filter(|w| (w - z).abs() < 1e-3)
                .collect();
            if found.len() < 3 {
                missing += 1;
                continue;
            }
            let hi = found.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = found.iter().copied().fold(f64::INFINITY, f64::min);
            worst = worst.max(hi - lo);
        }
    }
    outcome(
        worst < 1e-6 && missing == 0,
        format!("max shift over γ ∈ {{0.1, 0.3, 0.5}} = {worst:.3e}, {missing} zeros not found"),
    )
}

fn c7() -> Outcome {
    let reference = series(2, 0.0, 0.0, PI).transmissions();
    let mut min_t = f64::INFINITY;
    let mut excess = f64::NEG_INFINITY;
    for gamma in [0.1, 0.3, 0.5] {
        let t = series(2, 0.0, gamma, PI).transmissions();
        min_t = min_t.min(t.iter().copied().fold(f64::INFINITY, f64::min));
        for (a, b) in t.iter().zip(&reference) {
            excess = excess.max(a - b);
        }
    }
    outcome(
        min_t > 1e-4 && excess <= 1e-12,
        format!("min T = {min_t:.3e} (need > 1e-4), max T(γ) − T(0) = {excess:.3e} (need ≤ 1e-12)"),
    )
}

fn c8() -> Outcome {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for id in FigureId::ALL {
        let c = id.config();
        for s in sweep(&c.template(), &[0.0], &c.phis(), &c.grid().unwrap()).unwrap() {
            for t in s.transmissions() {
                lo = lo.min(t);
                hi = hi.max(t);
            }
        }
    }
    outcome(lo >= 0.0 && hi <= 1.0 + 1e-12, format!("T range over γ = 0 presets [{lo:.3e}, {hi:.15}]"))
}

fn c9() -> Outcome {
    let mut worst = 0.0f64;
    for id in FigureId::ALL {
        let c = id.config();
        let shifted = SweepTemplate {
            allocation: Allocation::LeftShifted,
            ..c.template()
        };
        let a = sweep(&c.template(), &GAMMAS, &c.phis(), &c.grid().unwrap()).unwrap();
        let b = sweep(&shifted, &GAMMAS, &c.phis(), &c.grid().unwrap()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            for (p, q) in x.samples.iter().zip(&y.samples) {
                worst = worst.max((p.transmission - q.transmission).abs());
            }
        }
    }
    outcome(worst < 1e-12, format!("max |ΔT| between gauges = {worst:.3e}"))
}

fn c10() -> Outcome {
    let mut problems = Vec::new();
    let mut smooth_total = 0;
    for id in [FigureId::Fig5a, FigureId::Fig5b, FigureId::Fig5c, FigureId::Fig5d] {
        let c = id.config();
        for s in sweep(&c.template(), &c.sweep.gammas, &c.phis(), &c.grid().unwrap()).unwrap() {
            let zeros = find_antiresonances(&s, ANTIRESONANCE_THRESHOLD, true).unwrap();
            let feats = detect_phase_features(&s, SHARPNESS_WINDOW, SHARPNESS_RATIO);
            for f in feats.iter().filter(|f| f.kind == PhaseKind::Smooth) {
                smooth_total += 1;
                if !zeros.iter().any(|z| (z.omega - f.omega).abs() < 2.0 * s.step()) {
                    problems.push(format!("{id} γ={} smooth feature at {:.4} has no zero", s.gamma, f.omega));
                }
            }
            if id == FigureId::Fig5a && (s.gamma == 0.0 || s.gamma == 0.5) {
                let near = |f: &&qdchain::analysis::PhaseFeature| (f.omega + 0.5).abs() < 2.0 * s.step();
                let sharp = feats.iter().filter(|f| f.kind == PhaseKind::Sharp).count();
                let sharp_at = feats.iter().filter(|f| f.kind == PhaseKind::Sharp).filter(near).count();
                let smooth_at = feats.iter().filter(|f| f.kind == PhaseKind::Smooth).filter(near).count();
                let ok = if s.gamma == 0.0 {
                    sharp == 1 && sharp_at == 1 && feats.len() == 1
                } else {
                    sharp == 2 && smooth_at == 1 && feats.len() == 3
                };
                if !ok {
                    let list: Vec<String> = feats.iter().map(|f| format!("{:?}@{:.4}", f.kind, f.omega)).collect();
                    problems.push(format!("fig5a γ={} features [{}]", s.gamma, list.join(", ")));
                }
            }
        }
    }
    let detail = if problems.is_empty() {
        format!("{smooth_total} smooth features, all at zeros; fig5a pattern reproduced")
    } else {
        format!("{smooth_total} smooth features; {}", problems.join("; "))
    };
    outcome(problems.is_empty(), detail)
}

fn c11() -> Outcome {
    let widths: Vec<Option<f64>> = [0.1, 0.3, 0.5]
        .iter()
        .map(|&g| valley_width(&series(2, 0.0, g, 0.0), -0.5))
        .collect();
    let ok = match widths[..] {
        [Some(a), Some(b), Some(c)] => a <= b && b <= c,
        _ => false,
    };
    outcome(ok, format!("half-maximum widths for γ = 0.1, 0.3, 0.5: {widths:?}"))
}

fn c12() -> Outcome {
    let mut worst = 0.0f64;
    for n in 1..=8 {
        let exact = uniform_chain_eigensystem(n, 0.0, 0.5).unwrap();
        let numeric = eigendecompose_chain(&ChainSpec::uniform(n, 0.0, 0.5).unwrap()).unwrap();
        for (a, b) in exact.energies.iter().zip(&numeric.energies) {
            worst = worst.max((a - b).norm());
        }
    }
    let trimer = eigendecompose_chain(&make_pt_chain(3, 0.0, 0.5, 0.0, 0.5).unwrap()).unwrap();
    for (e, x) in trimer.energies.iter().zip([-0.5, 0.0, 1.0]) {
        worst = worst.max((e - x).norm());
    }
    let dimer = eigendecompose_chain(&make_pt_chain(2, 0.0, 0.5, 0.3, 0.0).unwrap()).unwrap();
    for (e, x) in dimer.energies.iter().zip([-0.4, 0.4]) {
        worst = worst.max((e - x).norm());
    }
    outcome(worst < 1e-10, format!("max eigenvalue error = {worst:.3e}"))
}

fn main() {
    let criteria: [(&str, Check); 12] = [
        ("oracle equality, two dots", c1),
        ("oracle equality, three dots", c2),
        ("trace/amplitude identity", c3),
        ("decoupling parity", c4),
        ("antiresonance positions", c5),
        ("gain/loss independence of zeros", c6),
        ("no zero at half flux quantum", c7),
        ("Hermitian unitarity", c8),
        ("gauge invariance", c9),
        ("phase features", c10),
        ("valley widening", c11),
        ("eigensolver", c12),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.passed {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<34} {}  {}",
            k + 1,
            name,
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
