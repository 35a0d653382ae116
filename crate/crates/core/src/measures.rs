//! Non-Markovianity measures of the dephasing channel, all functions of the
//! echo amplitude `F(t) = |f(t)|` over integer kicks.
//!
//! Derivatives become one-kick increments: a step contributes whenever
//! `F(t+1) > F(t)`. Equal consecutive values contribute nothing.

use crate::dynamics::FidelitySeries;

/// Amplitudes below this are clamped before taking logarithms.
pub const LOG_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndicatorKind {
    /// Distinguishability of antipodal equator states, `D(t) = F(t)`.
    D,
    /// Accumulated divisibility violation `G(t) = sum of positive log-increments`.
    G,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndicatorSeries {
    pub kind: IndicatorKind,
    pub values: Vec<f64>,
    /// Number of `F` values raised to [`LOG_FLOOR`] (always 0 for `D`).
    pub clamp_events: usize,
}

pub fn indicator_d(series: &FidelitySeries) -> IndicatorSeries {
    IndicatorSeries { kind: IndicatorKind::D, values: series.amplitude(), clamp_events: 0 }
}

pub fn indicator_g(series: &FidelitySeries) -> IndicatorSeries {
    indicator_g_from_amplitude(&series.amplitude())
}

fn clamped_logs(amp: &[f64]) -> (Vec<f64>, usize) {
    let mut clamps = 0;
    let logs = amp
        .iter()
        .map(|&a| {
            if a < LOG_FLOOR {
                clamps += 1;
                LOG_FLOOR.ln()
            } else {
                a.ln()
            }
        })
        .collect();
    (logs, clamps)
}

pub fn indicator_g_from_amplitude(amp: &[f64]) -> IndicatorSeries {
    let (logs, clamp_events) = clamped_logs(amp);
    let mut acc = 0.0;
    let mut values = Vec::with_capacity(amp.len());
    values.push(0.0);
    for w in logs.windows(2) {
        acc += (w[1] - w[0]).max(0.0);
        values.push(acc);
    }
    IndicatorSeries { kind: IndicatorKind::G, values, clamp_events }
}

/// Sum of positive increments of `values`.
fn positive_increments(values: &[f64]) -> f64 {
    values.windows(2).map(|w| (w[1] - w[0]).max(0.0)).sum()
}

/// BLP measure: accumulated rises of `F`.
pub fn blp(series: &FidelitySeries) -> f64 {
    blp_from_amplitude(&series.amplitude())
}

pub fn blp_from_amplitude(amp: &[f64]) -> f64 {
    positive_increments(amp)
}

/// RHP measure: accumulated rises of `log F` (with the floor clamp).
pub fn rhp(series: &FidelitySeries) -> f64 {
    rhp_from_amplitude(&series.amplitude())
}

pub fn rhp_from_amplitude(amp: &[f64]) -> f64 {
    positive_increments(&clamped_logs(amp).0)
}

/// Largest rise of `K(t_f)` above its earlier minimum, clamped at 0.
pub fn n_max(ind: &IndicatorSeries) -> f64 {
    n_max_values(&ind.values)
}

pub fn n_max_values(values: &[f64]) -> f64 {
    let mut best = 0.0f64;
    let mut running_min = f64::INFINITY;
    for &k in values {
        running_min = running_min.min(k);
        best = best.max(k - running_min);
    }
    best
}

/// Largest rise of `K(t_f)` above the mean of `K(0..t_f)`, `t_f >= 1`, clamped at 0.
pub fn n_avg(ind: &IndicatorSeries) -> f64 {
    n_avg_values(&ind.values)
}

pub fn n_avg_values(values: &[f64]) -> f64 {
    let mut best = 0.0f64;
    let mut sum = 0.0;
    for (t, &k) in values.iter().enumerate() {
        if t >= 1 {
            best = best.max(k - sum / t as f64);
        }
        sum += k;
    }
    best
}

#[derive(Clone, Debug, PartialEq)]
pub struct NmReport {
    pub blp: f64,
    pub rhp: f64,
    pub nd_max: f64,
    pub nd_avg: f64,
    pub ng_max: f64,
    pub ng_avg: f64,
    pub t_cut: usize,
    /// Whether `blp` and `rhp` were divided by `t_cut`.
    pub normalized_by_tcut: bool,
    pub clamp_events: usize,
}

impl NmReport {
    pub fn all_zero(&self) -> bool {
        [self.blp, self.rhp, self.nd_max, self.nd_avg, self.ng_max, self.ng_avg].iter().all(|&x| x == 0.0)
    }
}

/// All six measures of one series. With `normalize`, only `blp` and `rhp`
/// are divided by `t_cut`; the max/average schemes saturate on their own.
pub fn compute_report(series: &FidelitySeries, normalize: bool) -> NmReport {
    report_from_amplitude(&series.amplitude(), normalize)
}

pub fn report_from_amplitude(amp: &[f64], normalize: bool) -> NmReport {
    let t_cut = amp.len().saturating_sub(1);
    let g = indicator_g_from_amplitude(amp);
    let mut blp = blp_from_amplitude(amp);
    let mut rhp = *g.values.last().unwrap_or(&0.0);
    if normalize && t_cut > 0 {
        blp /= t_cut as f64;
        rhp /= t_cut as f64;
    }
    NmReport {
        blp,
        rhp,
        nd_max: n_max_values(amp),
        nd_avg: n_avg_values(amp),
        ng_max: n_max_values(&g.values),
        ng_avg: n_avg_values(&g.values),
        t_cut,
        normalized_by_tcut: normalize,
        clamp_events: g.clamp_events,
    }
}

/// Reports for every prefix `t_cut` in `checkpoints`, each evaluated on
/// `amp[0..=checkpoint]`. Raw (un-normalized) values.
pub fn prefix_reports(amp: &[f64], checkpoints: &[usize]) -> Vec<NmReport> {
    checkpoints.iter().map(|&c| report_from_amplitude(&amp[..=c.min(amp.len() - 1)], false)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::choi_trace_norm;
    use num_complex::Complex64 as C64;
    use proptest::prelude::*;

    const SAMPLE: [f64; 5] = [1.0, 0.5, 0.8, 0.3, 0.9];

    fn series(v: &[f64]) -> FidelitySeries {
        FidelitySeries::from_amplitudes(v).unwrap()
    }

    #[test]
    fn indicator_d_examples() {
        assert_eq!(indicator_d(&series(&[1.0; 4])).values, vec![1.0; 4]);
        let halves: Vec<f64> = (0..5).map(|t| 0.5f64.powi(t)).collect();
        assert_eq!(indicator_d(&series(&halves)).values, halves);
    }

    #[test]
    fn indicator_g_examples() {
        let g = indicator_g(&series(&[1.0, 0.9, 0.9, 0.2]));
        assert_eq!(g.values, vec![0.0; 4]);
        let g = indicator_g(&series(&[1.0, 0.5, 0.8]));
        assert_eq!(&g.values[..2], &[0.0, 0.0]);
        assert!((g.values[2] - 1.6f64.ln()).abs() < 1e-15);
        assert!((g.values[2] - 0.4700036292457356).abs() < 1e-12);
    }

    #[test]
    fn g_increment_is_log_of_choi_trace_norm() {
        let amp = [1.0, 0.4, 0.7, 0.7, 0.2, 0.65, 0.6];
        let g = indicator_g(&series(&amp));
        for t in 0..amp.len() - 1 {
            let step = g.values[t + 1] - g.values[t];
            let lambda = C64::new(amp[t + 1] / amp[t], 0.0);
            assert!((step - choi_trace_norm(lambda).ln()).abs() < 1e-14);
        }
    }

    #[test]
    fn blp_examples() {
        assert!((blp(&series(&SAMPLE)) - 0.9).abs() < 1e-15);
        assert_eq!(blp(&series(&[1.0, 0.8, 0.8, 0.1])), 0.0);
        assert_eq!(blp(&series(&[1.0; 10])), 0.0);
    }

    #[test]
    fn rhp_examples() {
        let expected = (0.8f64 / 0.5).ln() + (0.9f64 / 0.3).ln();
        assert!((rhp(&series(&SAMPLE)) - expected).abs() < 1e-14);
        assert!((expected - 1.5686159179138452).abs() < 1e-12);
        assert_eq!(rhp(&series(&[1.0, 0.7, 0.2])), 0.0);
        let scaled: Vec<f64> = SAMPLE.iter().map(|x| x * 0.37).collect();
        assert!((rhp(&series(&scaled)) - expected).abs() < 1e-13);
    }

    #[test]
    fn scheme_examples() {
        let d = indicator_d(&series(&SAMPLE));
        assert!((n_max(&d) - 0.6).abs() < 1e-15);
        assert!((n_avg(&d) - 0.25).abs() < 1e-15);
        assert_eq!(n_max_values(&[3.0, 2.0, 1.0]), 0.0);
        assert_eq!(n_avg_values(&[0.4; 6]), 0.0);
        let g = indicator_g(&series(&SAMPLE));
        assert!((n_max(&g) - rhp(&series(&SAMPLE))).abs() < 1e-15);
    }

    #[test]
    fn clamp_counted() {
        let r = report_from_amplitude(&[1.0, 0.0, 1e-13, 0.5], false);
        assert_eq!(r.clamp_events, 2);
        assert!((r.rhp - (0.5f64.ln() - LOG_FLOOR.ln())).abs() < 1e-12);
    }

    #[test]
    fn report_null_series() {
        let r = compute_report(&series(&[1.0; 20]), true);
        assert!(r.all_zero());
    }

    #[test]
    fn sawtooth_blp() {
        // amplitude a, period p over T steps
        let (a, p, total) = (0.25, 5usize, 103usize);
        let amp: Vec<f64> = (0..=total)
            .map(|t| {
                let phase = t % p;
                if phase == 0 {
                    1.0
                } else {
                    1.0 - a * phase as f64 / (p - 1) as f64
                }
            })
            .collect();
        let r = report_from_amplitude(&amp, false);
        assert!((r.blp - a * (total / p) as f64).abs() < 1e-12);
        let normalized = report_from_amplitude(&amp, true);
        assert!((normalized.blp - r.blp / total as f64).abs() < 1e-15);
        assert_eq!(normalized.nd_max, r.nd_max);
    }

    #[test]
    fn prefix_monotonicity() {
        let amp = [1.0, 0.5, 0.8, 0.3, 0.9, 0.2, 0.95, 0.1];
        let reps = prefix_reports(&amp, &[1, 3, 5, 7]);
        for w in reps.windows(2) {
            assert!(w[1].blp >= w[0].blp && w[1].rhp >= w[0].rhp);
            assert!(w[1].nd_max >= w[0].nd_max && w[1].ng_max >= w[0].ng_max);
            assert!(w[1].nd_avg >= w[0].nd_avg && w[1].ng_avg >= w[0].ng_avg);
        }
    }

    /// Extrema-pair formulation: sum over (local minimum, following local
    /// maximum) pairs of `h(max) - h(min)`.
    fn extrema_pairs(values: &[f64], h: impl Fn(f64) -> f64) -> f64 {
        let mut total = 0.0;
        let mut i = 0;
        let n = values.len();
        while i + 1 < n {
            while i + 1 < n && values[i + 1] <= values[i] {
                i += 1;
            }
            let low = i;
            while i + 1 < n && values[i + 1] >= values[i] {
                i += 1;
            }
            total += h(values[i]) - h(values[low]);
        }
        total
    }

    proptest! {
        #[test]
        fn invariants_on_random_series(amp in prop::collection::vec(1e-6f64..1.0, 2..60)) {
            let r = report_from_amplitude(&amp, false);
            let g = indicator_g_from_amplitude(&amp);
            prop_assert_eq!(r.rhp, *g.values.last().unwrap());
            prop_assert!((r.ng_max - r.rhp).abs() <= 1e-12);
            prop_assert!(r.nd_avg <= r.nd_max && r.ng_avg <= r.ng_max);
            prop_assert!(r.nd_max <= 1.0);
            prop_assert!(r.blp >= r.nd_max - 1e-15);
            let rises = amp.windows(2).filter(|w| w[1] > w[0]).count();
            prop_assert!(r.blp <= rises as f64);
            prop_assert!(g.values.windows(2).all(|w| w[1] >= w[0]));
            prop_assert!((extrema_pairs(&amp, |x| x) - r.blp).abs() <= 1e-12);
            prop_assert!((extrema_pairs(&amp, f64::ln) - r.rhp).abs() <= 1e-12);
        }

        #[test]
        fn phase_and_conjugation_invariance(amp in prop::collection::vec(0.01f64..1.0, 2..30), alpha in 0.0f64..std::f64::consts::TAU) {
            let f: Vec<C64> = amp.iter().enumerate().map(|(t, &a)| C64::from_polar(a, 0.3 * t as f64)).collect();
            let base = compute_report(&FidelitySeries::from_raw(f.clone()).unwrap(), false);
            let rotated: Vec<C64> = f.iter().map(|z| z * C64::from_polar(1.0, alpha)).collect();
            let conj: Vec<C64> = f.iter().map(|z| z.conj()).collect();
            for other in [rotated, conj] {
                let r = compute_report(&FidelitySeries::from_raw(other).unwrap(), false);
                prop_assert!((r.blp - base.blp).abs() < 1e-12);
                prop_assert!((r.rhp - base.rhp).abs() < 1e-12);
                prop_assert!((r.nd_max - base.nd_max).abs() < 1e-12);
                prop_assert!((r.ng_avg - base.ng_avg).abs() < 1e-12);
            }
        }
    }
}
