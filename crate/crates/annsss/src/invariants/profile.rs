use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::ComputeError;

use super::{s_with_slope, MarkedComplex, RationalParams, Q};

pub const DEFAULT_GRID: u32 = 64;
const MAX_REFINE: u32 = 40;

/// Exact piecewise-linear `t ↦ s_{r,t}` on `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLProfile {
    pub r: Q,
    /// Wrapping bound used for slope quantization.
    pub bound: usize,
    /// Breakpoints `(t, value)` from `t = 0` to `t = 1`.
    pub points: Vec<(Q, Q)>,
    /// `slopes[i]` is the slope on `[points[i].0, points[i + 1].0]`.
    pub slopes: Vec<Q>,
}

impl PLProfile {
    pub fn value_at(&self, t: Q) -> Q {
        let i = self.segment_at(t.min(Q::one()));
        let (t0, v0) = self.points[i];
        v0 + self.slopes[i] * (t - t0)
    }

    fn segment_at(&self, t: Q) -> usize {
        let i = self.points.partition_point(|p| p.0 <= t);
        i.saturating_sub(1).min(self.slopes.len() - 1)
    }

    /// Whether every slope is `(1 - r) m` with `m ∈ {-n, -n + 2, ..., n}`.
    pub fn slopes_quantized(&self) -> bool {
        let n = self.bound as i64;
        self.slopes.iter().all(|s| {
            let m = s / (Q::one() - self.r);
            m.is_integer() && m.numer().abs() <= n && (m.numer() - n) % 2 == 0
        })
    }

    pub fn max_slope(&self) -> Q {
        (Q::one() - self.r) * Q::from(self.bound as i64)
    }

    /// Once the slope reaches the maximum it stays there up to `t = 1`.
    pub fn max_slope_persists(&self) -> bool {
        let max = self.max_slope();
        match self.slopes.iter().position(|s| *s == max) {
            Some(i) => self.slopes[i..].iter().all(|s| *s == max),
            None => true,
        }
    }
}

#[derive(Clone, Copy)]
struct Probe {
    t: Q,
    value: Q,
    left: Q,
    right: Q,
}

fn probe(m: &MarkedComplex, r: Q, t: Q) -> Result<Probe, ComputeError> {
    let p = RationalParams::new(r, t)?;
    let boundary = || ComputeError::Refinement(format!("{t}: canonical cycle is a boundary"));
    let (value, right) = if t < Q::one() { s_with_slope(m, &p, true).ok_or_else(boundary)? } else { (Q::zero(), Q::zero()) };
    let (lv, left) = if t > Q::zero() { s_with_slope(m, &p, false).ok_or_else(boundary)? } else { (value, Q::zero()) };
    let value = if t < Q::one() { value } else { lv };
    Ok(Probe { t, value, left, right })
}

/// Certifies the profile on `[a.t, b.t]` from the value and inner one-sided slopes at
/// both ends, pushing interior breakpoints.
fn certify(m: &MarkedComplex, r: Q, a: Probe, b: Probe, depth: u32, out: &mut Vec<(Q, Q)>) -> Result<(), ComputeError> {
    let at_b = a.value + a.right * (b.t - a.t);
    if a.right == b.left {
        if at_b == b.value {
            return Ok(());
        }
    } else {
        let t = (b.value - a.value - b.left * b.t + a.right * a.t) / (a.right - b.left);
        if t > a.t && t < b.t {
            let c = probe(m, r, t)?;
            if c.value == a.value + a.right * (t - a.t) && c.left == a.right && c.right == b.left {
                out.push((t, c.value));
                return Ok(());
            }
        }
    }
    if depth >= MAX_REFINE {
        return Err(ComputeError::Refinement(format!("{}", a.t)));
    }
    let mid = (a.t + b.t) / Q::from(2);
    let c = probe(m, r, mid)?;
    certify(m, r, a, c, depth + 1, out)?;
    out.push((mid, c.value));
    certify(m, r, c, b, depth + 1, out)
}

/// The certified profile of the marked cycle at fixed `r < 1`, probing `t = j / grid` first.
pub fn s_profile(m: &MarkedComplex, r: Q, grid: u32) -> Result<PLProfile, ComputeError> {
    if r >= Q::one() {
        return Err(ComputeError::Parameter("profiles need r < 1".into()));
    }
    let grid = grid.max(1);
    let probes: Vec<Probe> = (0..=grid)
        .into_par_iter()
        .map(|j| probe(m, r, Q::new(j as i64, grid as i64)))
        .collect::<Result<_, _>>()?;
    let mut raw = vec![(probes[0].t, probes[0].value)];
    for w in probes.windows(2) {
        certify(m, r, w[0], w[1], 0, &mut raw)?;
        raw.push((w[1].t, w[1].value));
    }
    let mut points = vec![raw[0]];
    let mut slopes: Vec<Q> = Vec::new();
    for &(t, v) in &raw[1..] {
        let &(t0, v0) = points.last().unwrap();
        let s = (v - v0) / (t - t0);
        if slopes.last() == Some(&s) {
            *points.last_mut().unwrap() = (t, v);
        } else {
            slopes.push(s);
            points.push((t, v));
        }
    }
    let profile = PLProfile { r, bound: m.strands, points, slopes };
    if !profile.slopes_quantized() {
        return Err(ComputeError::Refinement(format!("unquantized slope in {:?}", profile.slopes)));
    }
    Ok(profile)
}

/// Slope of the segment immediately to the right of `t0`.
pub fn right_slope(profile: &PLProfile, t0: Q) -> Result<Q, ComputeError> {
    if t0 < Q::zero() || t0 >= Q::one() {
        return Err(ComputeError::Parameter(format!("right slope needs 0 <= t0 < 1, got {t0}")));
    }
    Ok(profile.slopes[profile.segment_at(t0)])
}

/// True when the profile has maximal slope `(1 - r) n` somewhere on `[0, 1/2)`; a
/// sufficient condition for right-veering.
pub fn right_veering_certificate(profile: &PLProfile) -> bool {
    let max = profile.max_slope();
    let half = Q::new(1, 2);
    profile.points.iter().zip(&profile.slopes).any(|(p, s)| p.0 < half && *s == max)
}
