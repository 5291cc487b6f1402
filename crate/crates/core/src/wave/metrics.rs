use serde::{Deserialize, Serialize};

use super::{WaveError, WaveProfile};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComponentMetrics {
    pub min: f64,
    pub max: f64,
    pub monotone: bool,
}

/// Largest interior excursion of `u1` outside the range spanned by its two
/// end values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hump {
    pub index: usize,
    pub s: f64,
    pub value: f64,
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileMetrics {
    pub components: Vec<ComponentMetrics>,
    pub u1_hump: Hump,
}

impl ProfileMetrics {
    pub fn u1_monotone(&self) -> bool {
        self.components[0].monotone
    }
}

pub fn profile_metrics(p: &WaveProfile) -> Result<ProfileMetrics, WaveError> {
    if p.samples.is_empty() {
        return Err(WaveError::EmptyProfile);
    }
    let components = (0..5)
        .map(|k| {
            let series: Vec<f64> = p.samples.iter().map(|(_, u)| u.0[k]).collect();
            component_metrics(&series)
        })
        .collect();

    let u1: Vec<f64> = p.samples.iter().map(|(_, u)| u.0[0]).collect();
    let (first, last) = (u1[0], u1[u1.len() - 1]);
    let (lo, hi) = (first.min(last), first.max(last));
    let mut hump = Hump {
        index: 0,
        s: p.samples[0].0,
        value: first,
        height: 0.0,
    };
    for (i, &v) in u1.iter().enumerate().take(u1.len().saturating_sub(1)).skip(1) {
        let excursion = (v - hi).max(lo - v).max(0.0);
        if excursion > hump.height {
            hump = Hump {
                index: i,
                s: p.samples[i].0,
                value: v,
                height: excursion,
            };
        }
    }
    Ok(ProfileMetrics {
        components,
        u1_hump: hump,
    })
}

fn component_metrics(series: &[f64]) -> ComponentMetrics {
    let min = series.iter().copied().fold(f64::INFINITY, f64::min);
    let max = series.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let non_decreasing = series.windows(2).all(|w| w[1] >= w[0]);
    let non_increasing = series.windows(2).all(|w| w[1] <= w[0]);
    ComponentMetrics {
        min,
        max,
        monotone: non_decreasing || non_increasing,
    }
}
