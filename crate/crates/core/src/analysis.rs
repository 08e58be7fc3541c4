//! Parameter sweeps and feature extraction on transmission spectra.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{antiresonance_roots, ClosedFormParams, FluxCase};
use crate::error::{Error, Result};
use crate::model::{make_pt_chain, Allocation, CircuitSpec, CouplingSpec, LeadSpec};
use crate::molecular::{classify_decoupled, eigendecompose_chain, subchain_eigenvalues};
use crate::negf::{evaluate, unwrap_phases};
use crate::C64;

pub const ANTIRESONANCE_THRESHOLD: f64 = 1e-6;
pub const PEAK_PROMINENCE: f64 = 0.05;
pub const SHARPNESS_WINDOW: f64 = 0.05;
pub const SHARPNESS_RATIO: f64 = 10.0;
/// Bracket width at which golden-section refinement stops.
pub const REFINE_TOLERANCE: f64 = 1e-9;

/// Uniformly spaced energies `min..=max`.
pub fn omega_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::InvalidSpec(format!("omega grid needs at least 2 points, got {points}")));
    }
    if !(min < max) {
        return Err(Error::InvalidSpec(format!("omega range must be increasing, got {min}..{max}")));
    }
    let span = max - min;
    let last = (points - 1) as f64;
    Ok((0..points).map(|k| min + span * k as f64 / last).collect())
}

/// Everything but `γ` and `φ` needed to build a PT chain circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTemplate {
    pub n_dots: usize,
    pub e0: f64,
    pub tc: f64,
    /// Detuning of the center dot; odd chains only.
    pub delta: f64,
    pub t0: f64,
    pub v0: f64,
    /// Bond magnitudes `(L1, LN, R1, RN)` in units of `v0`.
    pub magnitudes: [f64; 4],
    pub allocation: Allocation,
    /// Positive infinitesimal added to the energy.
    pub eta: f64,
}

impl Default for SweepTemplate {
    fn default() -> Self {
        Self {
            n_dots: 2,
            e0: 0.0,
            tc: 0.5,
            delta: 0.0,
            t0: 1.0,
            v0: 1.0,
            magnitudes: [1.0; 4],
            allocation: Allocation::Symmetric,
            eta: 0.0,
        }
    }
}

impl SweepTemplate {
    pub fn circuit(&self, gamma: f64, phi: f64) -> Result<CircuitSpec> {
        let chain = make_pt_chain(self.n_dots, self.e0, self.tc, gamma, self.delta)?;
        let mags = self.magnitudes.map(|m| m * self.v0);
        let coupling = CouplingSpec::with_magnitudes(self.v0, mags, phi, self.allocation)?;
        CircuitSpec::new(chain, LeadSpec::new(self.t0)?, coupling).with_eta(self.eta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub omega: f64,
    pub transmission: f64,
    pub tau: C64,
    /// Unwrapped transmission phase.
    pub phase: f64,
}

#[derive(Debug, Clone)]
pub struct SpectrumSeries {
    pub spec: CircuitSpec,
    pub gamma: f64,
    pub phi: f64,
    pub samples: Vec<Sample>,
}

impl SpectrumSeries {
    /// Evaluates `spec` on `grid`, which must be strictly increasing.
    pub fn compute(spec: CircuitSpec, gamma: f64, phi: f64, grid: &[f64]) -> Result<Self> {
        if grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidSpec("omega grid must be strictly increasing".into()));
        }
        let points = grid
            .par_iter()
            .map(|&w| evaluate(&spec, w))
            .collect::<Result<Vec<_>>>()?;
        let phases = unwrap_phases(&points.iter().map(|p| p.tau.arg()).collect::<Vec<_>>());
        let samples = points
            .iter()
            .zip(phases)
            .map(|(p, phase)| Sample {
                omega: p.omega,
                transmission: p.transmission,
                tau: p.tau,
                phase,
            })
            .collect();
        Ok(Self {
            spec,
            gamma,
            phi,
            samples,
        })
    }

    pub fn omegas(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.omega).collect()
    }

    pub fn transmissions(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.transmission).collect()
    }

    pub fn phases(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.phase).collect()
    }

    /// Mean grid spacing.
    pub fn step(&self) -> f64 {
        let n = self.samples.len();
        if n < 2 {
            return 0.0;
        }
        (self.samples[n - 1].omega - self.samples[0].omega) / (n - 1) as f64
    }

    pub fn max_transmission(&self) -> f64 {
        self.samples.iter().map(|s| s.transmission).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// One series per `(γ, φ)`, ordered γ-major.
pub fn sweep(template: &SweepTemplate, gammas: &[f64], phis: &[f64], grid: &[f64]) -> Result<Vec<SpectrumSeries>> {
    let combos: Vec<(f64, f64)> = gammas.iter().flat_map(|&g| phis.iter().map(move |&p| (g, p))).collect();
    combos
        .par_iter()
        .map(|&(gamma, phi)| SpectrumSeries::compute(template.circuit(gamma, phi)?, gamma, phi, grid))
        .collect()
}

/// Where a level used for correlation comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LevelSource {
    SubChain,
    ClosedForm,
    Molecular,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelMatch {
    pub level: f64,
    pub distance: f64,
    pub source: LevelSource,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feature {
    pub omega: f64,
    pub value: f64,
    pub nearest: Option<LevelMatch>,
}

impl Feature {
    fn new(omega: f64, value: f64) -> Self {
        Self {
            omega,
            value,
            nearest: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PhaseKind {
    Sharp,
    Smooth,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseFeature {
    pub omega: f64,
    pub kind: PhaseKind,
    /// Net phase change across the feature.
    pub jump: f64,
    /// Largest per-sample derivative over the series median.
    pub ratio: f64,
    pub nearest: Option<LevelMatch>,
}

/// Minimizes `f` on `[a, b]` by golden-section search.
pub fn golden_section<F>(mut a: f64, mut b: f64, tol: f64, f: F) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let inv = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv * (b - a);
    let mut d = a + inv * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc <= fd { (c, fc) } else { (d, fd) })
}

fn interior_minima(t: &[f64]) -> Vec<usize> {
    (1..t.len().saturating_sub(1))
        .filter(|&i| t[i] <= t[i - 1] && t[i] <= t[i + 1] && (t[i] < t[i - 1] || t[i] < t[i + 1]))
        .collect()
}

/// Transmission zeros: grid minima whose (optionally refined) value is below `threshold`.
pub fn find_antiresonances(series: &SpectrumSeries, threshold: f64, refine: bool) -> Result<Vec<Feature>> {
    let t = series.transmissions();
    let w = series.omegas();
    let mut out: Vec<Feature> = Vec::new();
    for i in interior_minima(&t) {
        let (omega, value) = if refine {
            let found = golden_section(w[i - 1], w[i + 1], REFINE_TOLERANCE, |x| {
                Ok(evaluate(&series.spec, x)?.transmission)
            })?;
            if found.1 <= t[i] {
                found
            } else {
                (w[i], t[i])
            }
        } else {
            (w[i], t[i])
        };
        if value >= threshold {
            continue;
        }
        // two flat grid minima around one zero refine to the same point
        match out.last_mut() {
            Some(prev) if (prev.omega - omega).abs() < 10.0 * REFINE_TOLERANCE => {
                if value < prev.value {
                    *prev = Feature::new(omega, value);
                }
            }
            _ => out.push(Feature::new(omega, value)),
        }
    }
    Ok(out)
}

/// Interior maxima whose topographic prominence is at least `prominence`.
pub fn find_peaks(series: &SpectrumSeries, prominence: f64) -> Vec<Feature> {
    let t = series.transmissions();
    let n = t.len();
    let mut out = Vec::new();
    for i in 1..n.saturating_sub(1) {
        if !(t[i] > t[i - 1] && t[i] >= t[i + 1]) {
            continue;
        }
        let mut left_min = t[i];
        for j in (0..i).rev() {
            if t[j] > t[i] {
                break;
            }
            left_min = left_min.min(t[j]);
        }
        let mut right_min = t[i];
        for &v in &t[i + 1..] {
            if v > t[i] {
                break;
            }
            right_min = right_min.min(v);
        }
        if t[i] - left_min.max(right_min) >= prominence {
            out.push(Feature::new(series.samples[i].omega, t[i]));
        }
    }
    out
}

fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len().is_multiple_of(2) {
        0.5 * (v[m - 1] + v[m])
    } else {
        v[m]
    }
}

/// Loci where the unwrapped phase moves by at least π/2 inside `window`.
///
/// Overlapping windows are merged into one feature, placed at the step with
/// the largest derivative. A feature is sharp when that derivative exceeds
/// `ratio` times the median derivative of the whole series.
pub fn detect_phase_features(series: &SpectrumSeries, window: f64, ratio: f64) -> Vec<PhaseFeature> {
    let w = series.omegas();
    let p = series.phases();
    let n = w.len();
    if n < 2 {
        return Vec::new();
    }
    let deriv: Vec<f64> = (0..n - 1).map(|k| ((p[k + 1] - p[k]) / (w[k + 1] - w[k])).abs()).collect();
    let med = median(&deriv);

    let mut spans: Vec<(usize, usize)> = Vec::new();
    let mut end = 0;
    for start in 0..n - 1 {
        end = end.max(start);
        while end + 1 < n && w[end + 1] - w[start] <= window {
            end += 1;
        }
        let slice = &p[start..=end];
        let hi = slice.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = slice.iter().copied().fold(f64::INFINITY, f64::min);
        if hi - lo >= PI / 2.0 {
            match spans.last_mut() {
                Some(last) if start <= last.1 => last.1 = last.1.max(end),
                _ => spans.push((start, end)),
            }
        }
    }

    spans
        .into_iter()
        .map(|(a, b)| {
            let k = (a..b).max_by(|&x, &y| deriv[x].total_cmp(&deriv[y])).unwrap_or(a);
            let r = if med > 0.0 { deriv[k] / med } else { f64::INFINITY };
            PhaseFeature {
                omega: 0.5 * (w[k] + w[k + 1]),
                kind: if r > ratio { PhaseKind::Sharp } else { PhaseKind::Smooth },
                jump: p[b] - p[a],
                ratio: r,
                nearest: None,
            }
        })
        .collect()
}

/// Width of the region around `center` where `T < 0.5·max T`, with linear
/// interpolation at both crossings. `None` if `T(center)` is not below half maximum.
pub fn valley_width(series: &SpectrumSeries, center: f64) -> Option<f64> {
    let t = series.transmissions();
    let w = series.omegas();
    let half = 0.5 * series.max_transmission();
    let i = w
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - center).abs().total_cmp(&(b.1 - center).abs()))?
        .0;
    if !(t[i] < half) {
        return None;
    }
    let cross = |a: usize, b: usize| w[a] + (half - t[a]) * (w[b] - w[a]) / (t[b] - t[a]);
    let mut l = i;
    while l > 0 && t[l - 1] < half {
        l -= 1;
    }
    let mut r = i;
    while r + 1 < t.len() && t[r + 1] < half {
        r += 1;
    }
    let left = if l > 0 { cross(l - 1, l) } else { w[0] };
    let right = if r + 1 < t.len() { cross(r, r + 1) } else { w[t.len() - 1] };
    Some(right - left)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnalysisSettings {
    pub antiresonance_threshold: f64,
    pub refine: bool,
    pub peak_prominence: f64,
    pub sharpness_window: f64,
    pub sharpness_ratio: f64,
}

impl Default for AnalysisSettings {
    fn default() -> Self {
        Self {
            antiresonance_threshold: ANTIRESONANCE_THRESHOLD,
            refine: true,
            peak_prominence: PEAK_PROMINENCE,
            sharpness_window: SHARPNESS_WINDOW,
            sharpness_ratio: SHARPNESS_RATIO,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub gamma: f64,
    pub phi: f64,
    pub settings: AnalysisSettings,
    pub peaks: Vec<Feature>,
    pub antiresonances: Vec<Feature>,
    pub phase_features: Vec<PhaseFeature>,
}

/// One row of a rendered report.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportLine {
    pub kind: &'static str,
    pub omega: f64,
    pub value: f64,
    pub nearest: Option<LevelMatch>,
}

impl AnalysisReport {
    /// All features ordered by energy.
    pub fn lines(&self) -> Vec<ReportLine> {
        let mut lines: Vec<ReportLine> = self
            .antiresonances
            .iter()
            .map(|f| ReportLine {
                kind: "antiresonance",
                omega: f.omega,
                value: f.value,
                nearest: f.nearest,
            })
            .chain(self.peaks.iter().map(|f| ReportLine {
                kind: "peak",
                omega: f.omega,
                value: f.value,
                nearest: f.nearest,
            }))
            .chain(self.phase_features.iter().map(|f| ReportLine {
                kind: match f.kind {
                    PhaseKind::Sharp => "phase-sharp",
                    PhaseKind::Smooth => "phase-smooth",
                },
                omega: f.omega,
                value: f.jump,
                nearest: f.nearest,
            }))
            .collect();
        lines.sort_by(|a, b| a.omega.total_cmp(&b.omega));
        lines
    }
}

fn nearest(omega: f64, levels: &[(f64, LevelSource)]) -> Option<LevelMatch> {
    levels
        .iter()
        .map(|&(level, source)| LevelMatch {
            level,
            distance: (omega - level).abs(),
            source,
        })
        .min_by(|a, b| a.distance.total_cmp(&b.distance))
}

/// Closed-form parameters of a two- or three-dot PT chain with uniform
/// couplings, if `spec` is one.
pub fn closed_form_params(spec: &CircuitSpec) -> Option<ClosedFormParams> {
    let n = spec.n_dots();
    if !(n == 2 || n == 3) || !spec.coupling().is_uniform() {
        return None;
    }
    let e = spec.chain().onsite();
    let t = spec.chain().hoppings();
    let tc = t[0];
    if tc.im != 0.0 || t.iter().any(|&x| x != tc) || e[0] != e[n - 1].conj() {
        return None;
    }
    Some(ClosedFormParams {
        e0: e[0].re,
        tc: tc.re,
        gamma: -e[0].im,
        e2: if n == 3 { e[1].re } else { e[0].re },
        phi: spec.coupling().flux(),
        v0: spec.coupling().v0(),
        t0: spec.lead().t0(),
    })
}

/// `Zero` or `TwoPi` when `φ` is an even or odd multiple of 2π.
pub fn flux_case(phi: f64) -> Option<FluxCase> {
    let m = phi / (2.0 * PI);
    if (m - m.round()).abs() > 1e-12 {
        return None;
    }
    Some(if (m.round() as i64).rem_euclid(2) == 0 {
        FluxCase::Zero
    } else {
        FluxCase::TwoPi
    })
}

/// Tags antiresonances with the nearest sub-chain level or closed-form zero,
/// peaks with the nearest lead-coupled molecular level and phase features
/// with the nearest of either.
pub fn correlate_levels(mut report: AnalysisReport, spec: &CircuitSpec) -> Result<AnalysisReport> {
    let mut zeros: Vec<(f64, LevelSource)> = Vec::new();
    if spec.n_dots() >= 3 {
        zeros.extend(subchain_eigenvalues(spec.chain())?.iter().map(|e| (e.re, LevelSource::SubChain)));
    }
    if let (Some(p), Some(case)) = (closed_form_params(spec), flux_case(spec.coupling().flux())) {
        zeros.extend(antiresonance_roots(&p, spec.n_dots(), case)?.into_iter().map(|r| (r, LevelSource::ClosedForm)));
    }

    let decomp = eigendecompose_chain(spec.chain())?;
    let dark = if spec.coupling().is_uniform() {
        classify_decoupled(spec)?
    } else {
        Vec::new()
    };
    let levels: Vec<(f64, LevelSource)> = decomp
        .energies
        .iter()
        .enumerate()
        .filter(|(m, _)| !dark.contains(&(m + 1)))
        .map(|(_, e)| (e.re, LevelSource::Molecular))
        .collect();
    let all: Vec<(f64, LevelSource)> = zeros.iter().chain(&levels).copied().collect();

    for f in &mut report.antiresonances {
        f.nearest = nearest(f.omega, &zeros);
    }
    for f in &mut report.peaks {
        f.nearest = nearest(f.omega, &levels);
    }
    for f in &mut report.phase_features {
        f.nearest = nearest(f.omega, &all);
    }
    Ok(report)
}

/// Runs every extractor on one series and correlates the results.
pub fn analyze(series: &SpectrumSeries, settings: &AnalysisSettings) -> Result<AnalysisReport> {
    log::info!(
        "analysis settings: threshold={:e} refine={} prominence={} window={} ratio={}",
        settings.antiresonance_threshold,
        settings.refine,
        settings.peak_prominence,
        settings.sharpness_window,
        settings.sharpness_ratio
    );
    let report = AnalysisReport {
        gamma: series.gamma,
        phi: series.phi,
        settings: *settings,
        peaks: find_peaks(series, settings.peak_prominence),
        antiresonances: find_antiresonances(series, settings.antiresonance_threshold, settings.refine)?,
        phase_features: detect_phase_features(series, settings.sharpness_window, settings.sharpness_ratio),
    };
    correlate_levels(report, &series.spec)
}
