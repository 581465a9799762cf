//! Conditional-measurement protocol on the analytic side.
//!
//! A pulse of area `s` followed by detection of the excited state applies
//! `cos[i s (a - a†)] = (D(s) + D(-s))/2` to the motional state. A schedule of
//! `P` pulses therefore maps the squeezed vacuum onto an equal-split sum over
//! all `2^P` signed area combinations, merged where amplitudes coincide.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{SqueezeParameter, SqueezedComponent, SuperpositionState};

/// Upper bound on pulse count; the expansion holds up to `2^P` amplitudes.
pub const MAX_PULSES: usize = 20;

/// Amplitudes closer than this are treated as one displacement.
pub const MERGE_TOLERANCE: f64 = 1e-12;

/// Ordered dimensionless pulse areas `g t_j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseSchedule {
    areas: Vec<f64>,
    label: String,
}

impl PulseSchedule {
    pub fn new(areas: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if areas.is_empty() {
            return Err(Error::EmptySchedule);
        }
        if areas.len() > MAX_PULSES {
            return Err(Error::TooManyPulses(areas.len()));
        }
        if let Some((index, &area)) = areas.iter().enumerate().find(|(_, a)| !(a.is_finite() && **a > 0.0)) {
            return Err(Error::InvalidPulseArea { index, area });
        }
        Ok(Self { areas, label: label.into() })
    }

    pub fn areas(&self) -> &[f64] {
        &self.areas
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn pulses(&self) -> usize {
        self.areas.len()
    }

    /// Sum of all areas: the largest displacement the schedule can reach.
    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }

    /// Same schedule with one more pulse appended.
    pub fn with_pulse(&self, area: f64) -> Result<Self> {
        let mut areas = self.areas.clone();
        areas.push(area);
        Self::new(areas, self.label.clone())
    }
}

/// Doubling schedule `[τ, 2τ, 4τ, …, 2^{P-1} τ]`.
pub fn dyadic_schedule(pulses: usize, tau: f64) -> Result<PulseSchedule> {
    if pulses == 0 {
        return Err(Error::EmptySchedule);
    }
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::InvalidTau(tau));
    }
    let areas = (0..pulses).map(|j| tau * f64::powi(2.0, j as i32)).collect();
    PulseSchedule::new(areas, format!("dyadic P={pulses} tau={tau}"))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeEntry {
    pub amplitude: f64,
    pub weight: f64,
}

/// Displacement amplitudes and their branch weights, strictly increasing in amplitude.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeMultiset {
    entries: Vec<AmplitudeEntry>,
}

impl AmplitudeMultiset {
    pub fn entries(&self) -> &[AmplitudeEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.entries.iter().map(|e| e.weight).sum()
    }
}

fn merge_sorted(mut raw: Vec<AmplitudeEntry>) -> Vec<AmplitudeEntry> {
    raw.sort_by(|a, b| a.amplitude.total_cmp(&b.amplitude));
    let mut out: Vec<AmplitudeEntry> = Vec::with_capacity(raw.len());
    // (first amplitude of cluster, weighted amplitude sum)
    let mut anchor = f64::NAN;
    let mut moment = 0.0;
    for e in raw {
        match out.last_mut() {
            Some(last) if (e.amplitude - anchor).abs() <= MERGE_TOLERANCE => {
                moment += e.amplitude * e.weight;
                last.weight += e.weight;
                last.amplitude = moment / last.weight;
            }
            _ => {
                anchor = e.amplitude;
                moment = e.amplitude * e.weight;
                out.push(e);
            }
        }
    }
    out
}

/// Expand the cosine product into signed-area displacements with weight `2^{-P}` each.
pub fn expand_schedule(schedule: &PulseSchedule) -> AmplitudeMultiset {
    let mut entries = vec![AmplitudeEntry { amplitude: 0.0, weight: 1.0 }];
    for &s in schedule.areas() {
        let mut next = Vec::with_capacity(entries.len() * 2);
        for e in &entries {
            let w = 0.5 * e.weight;
            next.push(AmplitudeEntry { amplitude: e.amplitude - s, weight: w });
            next.push(AmplitudeEntry { amplitude: e.amplitude + s, weight: w });
        }
        entries = merge_sorted(next);
    }
    AmplitudeMultiset { entries }
}

/// Post-measurement motional state after every pulse reported the excited state.
///
/// Component weights are the branch weights of [`expand_schedule`], so the
/// resulting `norm_constant²` is the probability of the measurement record.
pub fn build_superposition(schedule: &PulseSchedule, r: SqueezeParameter) -> Result<SuperpositionState> {
    let components = expand_schedule(schedule)
        .entries
        .iter()
        .map(|e| SqueezedComponent::real(e.amplitude, e.weight))
        .collect();
    SuperpositionState::new(components, r)
}

/// Probability that all conditional measurements yield the excited state.
pub fn success_probability(schedule: &PulseSchedule, r: SqueezeParameter) -> Result<f64> {
    let state = build_superposition(schedule, r)?;
    Ok(state.norm_constant().powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sq(r: f64) -> SqueezeParameter {
        SqueezeParameter::new(r).unwrap()
    }

    fn pairs(m: &AmplitudeMultiset) -> Vec<(f64, f64)> {
        m.entries().iter().map(|e| (e.amplitude, e.weight)).collect()
    }

    #[test]
    fn dyadic_examples() {
        assert_eq!(dyadic_schedule(1, 0.3).unwrap().areas(), &[0.3]);
        assert_eq!(dyadic_schedule(3, 0.5).unwrap().areas(), &[0.5, 1.0, 2.0]);
        let tau = 4.0 * (-3.0f64).exp();
        let s = dyadic_schedule(5, tau).unwrap();
        let expected = [0.19915, 0.39829, 0.79659, 1.59317, 3.18635];
        for (j, (a, e)) in s.areas().iter().zip(expected).enumerate() {
            assert_eq!(*a, f64::powi(2.0, j as i32) * 4.0 * (-3.0f64).exp());
            assert!((a - e).abs() < 5e-5, "{a} vs {e}");
        }
    }

    #[test]
    fn schedule_errors() {
        assert!(matches!(dyadic_schedule(0, 1.0), Err(Error::EmptySchedule)));
        assert!(matches!(dyadic_schedule(2, 0.0), Err(Error::InvalidTau(_))));
        assert!(matches!(dyadic_schedule(2, f64::NAN), Err(Error::InvalidTau(_))));
        assert!(matches!(PulseSchedule::new(vec![], "x"), Err(Error::EmptySchedule)));
        assert!(matches!(
            PulseSchedule::new(vec![1.0, -2.0], "x"),
            Err(Error::InvalidPulseArea { index: 1, .. })
        ));
        assert!(matches!(dyadic_schedule(MAX_PULSES + 1, 1.0), Err(Error::TooManyPulses(_))));
    }

    #[test]
    fn expand_single_pulse() {
        let s = PulseSchedule::new(vec![0.7], "one").unwrap();
        assert_eq!(pairs(&expand_schedule(&s)), vec![(-0.7, 0.5), (0.7, 0.5)]);
    }

    #[test]
    fn expand_dyadic_two_pulses() {
        let s = dyadic_schedule(2, 1.0).unwrap();
        assert_eq!(pairs(&expand_schedule(&s)), vec![(-3.0, 0.25), (-1.0, 0.25), (1.0, 0.25), (3.0, 0.25)]);
    }

    #[test]
    fn expand_merges_coincident_amplitudes() {
        let s = PulseSchedule::new(vec![1.0, 1.0], "degenerate").unwrap();
        assert_eq!(pairs(&expand_schedule(&s)), vec![(-2.0, 0.25), (0.0, 0.5), (2.0, 0.25)]);
    }

    #[test]
    fn dyadic_structure_up_to_ten_pulses() {
        let tau = 0.37;
        for p in 1..=10 {
            let m = expand_schedule(&dyadic_schedule(p, tau).unwrap());
            let half = 1usize << (p - 1);
            let mut expected: Vec<f64> = (0..half).map(|k| (2 * k + 1) as f64 * tau).collect();
            expected.extend(expected.clone().iter().map(|a| -a));
            expected.sort_by(f64::total_cmp);
            assert_eq!(m.len(), 1 << p);
            for (e, x) in m.entries().iter().zip(&expected) {
                assert!((e.amplitude - x).abs() < 1e-12 * (1.0 + x.abs()));
                assert_eq!(e.weight, f64::powi(0.5, p as i32));
            }
        }
    }

    #[test]
    fn single_pulse_cat_state() {
        let st = build_superposition(&dyadic_schedule(1, 1.0).unwrap(), sq(0.0)).unwrap();
        assert_eq!(st.len(), 2);
        assert_eq!(st.components()[0].amplitude, -1.0);
        assert_eq!(st.components()[1].amplitude, 1.0);
        assert_relative_eq!(
            success_probability(&dyadic_schedule(1, 1.0).unwrap(), sq(0.0)).unwrap(),
            0.5 * (1.0 + (-2.0f64).exp()),
            max_relative = 1e-14
        );
    }

    #[test]
    fn vanishing_pulse_keeps_probability_one() {
        let p = success_probability(&dyadic_schedule(1, 1e-9).unwrap(), sq(0.5)).unwrap();
        assert_relative_eq!(p, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn both_tau_conventions_give_sixteen_components() {
        for r in [0.0f64, 1.0, 2.0, 3.0] {
            for tau in [4.0 * (-r).exp(), 0.5 * (-r).exp()] {
                let st = build_superposition(&dyadic_schedule(4, tau).unwrap(), sq(r)).unwrap();
                assert_eq!(st.len(), 16);
            }
        }
    }
}
