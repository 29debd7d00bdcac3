//! Filtration levels of canonical classes: s_{r,t}, t-profiles, κ, and derived bounds.

mod profile;
mod tensor;

pub use profile::{right_slope, right_veering_certificate, s_profile, PLProfile, DEFAULT_GRID};
pub use tensor::tensor_union;

use std::sync::OnceLock;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::braid_diagram::{BraidWord, ClosureDiagram};
use crate::chain_complex::{oriented_crossings, plamenevskaya_cycle, Cube, GradingTriple, Orientation};
use crate::differentials::{total_differential, Differential, Terms};
use crate::error::ComputeError;
use crate::f2_linalg::{BitVec, SpanBuilder};

pub type Q = Ratio<i64>;

pub const DEFAULT_MAX_CROSSINGS: usize = 14;
pub const MAX_CROSSINGS_ENV: &str = "ANNSSS_MAX_CROSSINGS";

pub fn max_crossings() -> usize {
    std::env::var(MAX_CROSSINGS_ENV).ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_MAX_CROSSINGS)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RationalParams {
    pub r: Q,
    pub t: Q,
}

impl RationalParams {
    pub fn new(r: Q, t: Q) -> Result<Self, ComputeError> {
        for (name, x) in [("r", r), ("t", t)] {
            if x < Q::zero() || x > Q::one() {
                return Err(ComputeError::Parameter(format!("{name} = {x} is outside [0, 1]")));
            }
        }
        Ok(Self { r, t })
    }

    pub fn from_ints(r: (i64, i64), t: (i64, i64)) -> Result<Self, ComputeError> {
        Self::new(Q::new(r.0, r.1), Q::new(t.0, t.1))
    }

    /// Weights `(wh, wq, wk, den)` with `gr_{r,t} = (wh h + wq q + wk k) / den`, and the
    /// numerator of `d gr / dt` per unit of `k`.
    fn weights(&self) -> (i64, i64, i64, i64, i64) {
        let (a, b) = (*self.r.numer(), *self.r.denom());
        let (c, d) = (*self.t.numer(), *self.t.denom());
        (a * d, (b - a) * d, -(b - a) * c, b * d, -(b - a) * d)
    }

    pub fn grade(&self, g: &GradingTriple) -> Q {
        self.r * Q::from(g.h) + (Q::one() - self.r) * (Q::from(g.q) - self.t * Q::from(g.k))
    }
}

/// A filtered complex: triple gradings per generator and a differential that does not
/// decrease `gr_h`, `gr_q`, or `gr_q - gr_k`.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    grades: Vec<GradingTriple>,
    delta: Differential,
    image: OnceLock<Vec<Vec<u32>>>,
}

impl FilteredComplex {
    pub fn new(grades: Vec<GradingTriple>, delta: Differential) -> Self {
        assert_eq!(grades.len(), delta.dim());
        Self { grades, delta, image: OnceLock::new() }
    }

    pub fn from_cube(cube: &Cube, terms: Terms) -> Self {
        let grades = cube.generators().map(|g| cube.gradings(&g)).collect();
        Self::new(grades, total_differential(cube, terms))
    }

    pub fn len(&self) -> usize {
        self.grades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grades.is_empty()
    }

    pub fn grades(&self) -> &[GradingTriple] {
        &self.grades
    }

    pub fn delta(&self) -> &Differential {
        &self.delta
    }

    pub fn shifted(&self, dh: i64, dq: i64) -> Self {
        let grades = self.grades.iter().map(|g| GradingTriple { h: g.h + dh, q: g.q + dq, k: g.k }).collect();
        Self { grades, delta: self.delta.clone(), image: self.image.clone() }
    }

    /// A basis of the image of the differential, as index lists.
    pub fn image_basis(&self) -> &[Vec<u32>] {
        self.image.get_or_init(|| {
            let n = self.len();
            let mut span = SpanBuilder::new(n);
            for col in self.delta.columns() {
                if !col.is_empty() {
                    span.insert(BitVec::from_indices(n, col.iter().map(|&i| i as usize)));
                }
            }
            span.basis().iter().map(|v| v.ones().map(|i| i as u32).collect()).collect()
        })
    }

    pub fn boundary_rank(&self) -> usize {
        self.image_basis().len()
    }

    /// Total dimension of homology (the differential squares to zero).
    pub fn homology_dim(&self) -> usize {
        self.len() - 2 * self.boundary_rank()
    }

    /// Generator where the reduced representative of `cycle` has its lowest entry when
    /// generators are sorted ascending by `key`; `None` if `cycle` is a boundary.
    ///
    /// Reducing the lowest entry against an echelon basis of the image whose pivots are
    /// lowest entries yields the representative with the largest minimum key.
    pub fn lead<K: Ord + Copy>(&self, cycle: &[usize], keys: &[K]) -> Option<usize> {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&j| keys[j]);
        let mut pos = vec![0usize; n];
        for (p, &j) in order.iter().enumerate() {
            pos[j] = p;
        }
        let mut span = SpanBuilder::new(n);
        for b in self.image_basis() {
            span.insert(BitVec::from_indices(n, b.iter().map(|&i| pos[i as usize])));
        }
        let mut g = BitVec::from_indices(n, cycle.iter().map(|&j| pos[j]));
        span.reduce_lead(&mut g).map(|p| order[p])
    }
}

/// A filtered complex with a distinguished cycle and the data needed to combine it.
#[derive(Clone, Debug)]
pub struct MarkedComplex {
    pub complex: FilteredComplex,
    /// The canonical cycle, as generator indices.
    pub cycle: Vec<usize>,
    /// The cycle with the x and 1 + x labels exchanged on every circle.
    pub flipped: Vec<usize>,
    /// Diagrammatic wrapping bound (strand count for braid closures).
    pub strands: usize,
    pub writhe: i64,
}

impl MarkedComplex {
    /// The complex of the empty link: one generator in degree zero.
    pub fn unit() -> Self {
        let complex = FilteredComplex::new(
            vec![GradingTriple { h: 0, q: 0, k: 0 }],
            Differential::from_columns(vec![Vec::new()]),
        );
        Self { complex, cycle: vec![0], flipped: vec![0], strands: 0, writhe: 0 }
    }

    pub fn len(&self) -> usize {
        self.complex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.complex.is_empty()
    }
}

pub fn check_size(diagram: &ClosureDiagram) -> Result<(), ComputeError> {
    let cap = max_crossings();
    if diagram.crossing_count() > cap {
        return Err(ComputeError::SizeCap { crossings: diagram.crossing_count(), cap });
    }
    Ok(())
}

/// The full filtered complex of a braid closure with the canonical cycle of `o`.
pub fn braid_complex(word: &BraidWord, o: &Orientation) -> Result<MarkedComplex, ComputeError> {
    let diagram = ClosureDiagram::from_braid(word);
    check_size(&diagram)?;
    let cube = Cube::new(&diagram);
    marked_complex(&cube, o, Terms::ALL)
}

pub fn braid_like(word: &BraidWord) -> Orientation {
    Orientation::braid_like(word.component_of_strand().0)
}

/// The complex of `cube` restricted to `terms`, marked with the canonical cycle of `o`.
pub fn marked_complex(cube: &Cube, o: &Orientation, terms: Terms) -> Result<MarkedComplex, ComputeError> {
    let oc = oriented_crossings(cube.diagram(), o)?;
    let shift = oc.shift;
    let grades = cube.generators().map(|g| cube.gradings_with(&g, shift)).collect();
    let complex = FilteredComplex::new(grades, total_differential(cube, terms));
    let cw = cube.clockwise_circles(oc.state, o)?;
    let all = (1u64 << cube.index().circle_count(oc.state)) - 1;
    let idx = |swap| cube.idempotent_chain(oc.state, swap).iter().map(|g| cube.index().index_of(g)).collect();
    Ok(MarkedComplex {
        complex,
        cycle: idx(cw),
        flipped: idx(cw ^ all),
        strands: cube.diagram().strands(),
        writhe: oc.shift.n_plus - oc.shift.n_minus,
    })
}

/// Keys sorting generators by `gr_{r,t}`, ties broken by the slope in `t` (`dir = 1` for
/// the right limit, `-1` for the left limit, `0` for none).
fn keys(m: &MarkedComplex, p: &RationalParams, dir: i64) -> (Vec<(i64, i64)>, i64) {
    let (wh, wq, wk, den, sk) = p.weights();
    let keys = m.complex.grades().iter().map(|g| (wh * g.h + wq * g.q + wk * g.k, dir * sk * g.k)).collect();
    (keys, den)
}

/// `s_{r,t}` of the marked cycle; `None` if the cycle is a boundary.
pub fn s_rt(m: &MarkedComplex, p: &RationalParams) -> Option<Q> {
    let (keys, den) = keys(m, p, 0);
    m.complex.lead(&m.cycle, &keys).map(|j| Q::new(keys[j].0, den))
}

/// Value of `t ↦ s_{r,t}` at `p.t` and its one-sided slope (`right` or left).
pub fn s_with_slope(m: &MarkedComplex, p: &RationalParams, right: bool) -> Option<(Q, Q)> {
    let (keys, den) = keys(m, p, if right { 1 } else { -1 });
    let sk = p.weights().4;
    m.complex.lead(&m.cycle, &keys).map(|j| {
        let k = m.complex.grades()[j].k;
        (Q::new(keys[j].0, den), Q::new(sk * k, den))
    })
}

/// `s_{r,t}` by binary search over thresholds with explicit span-membership tests; an
/// independent (slower) route used for cross-checking.
pub fn s_rt_bisect(m: &MarkedComplex, p: &RationalParams) -> Option<Q> {
    let n = m.len();
    let values: Vec<Q> = m.complex.grades().iter().map(|g| p.grade(g)).collect();
    let mut levels = values.clone();
    levels.sort();
    levels.dedup();
    let g = BitVec::from_indices(n, m.cycle.iter().copied());
    let admits = |a: Q| {
        let mut span = SpanBuilder::new(n);
        for (j, v) in values.iter().enumerate() {
            if *v >= a {
                span.insert(BitVec::unit(n, j));
            }
        }
        for col in m.complex.delta().columns() {
            span.insert(BitVec::from_indices(n, col.iter().map(|&i| i as usize)));
        }
        span.contains(&g)
    };
    if !admits(levels[0]) {
        return None;
    }
    let (mut lo, mut hi) = (0, levels.len());
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if admits(levels[mid]) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Membership at the top level still holds when the cycle is a boundary.
    let boundary = {
        let mut span = SpanBuilder::new(n);
        for col in m.complex.delta().columns() {
            span.insert(BitVec::from_indices(n, col.iter().map(|&i| i as usize)));
        }
        span.contains(&g)
    };
    (!boundary).then_some(levels[lo])
}

/// `κ = n + min{c : v_- is a d_1-boundary inside span(gr_k <= c)}`, `None` for +∞.
pub fn kappa(word: &BraidWord) -> Result<Option<i64>, ComputeError> {
    let diagram = ClosureDiagram::from_braid(word);
    check_size(&diagram)?;
    let cube = Cube::new(&diagram);
    Ok(kappa_in(&cube))
}

pub(crate) fn kappa_in(cube: &Cube) -> Option<i64> {
    let v = plamenevskaya_cycle(cube.diagram());
    let target = cube.gradings(&v);
    let d1 = total_differential(cube, Terms::KHOVANOV);
    let n = cube.len();
    let mut sources: Vec<(i64, usize)> = (0..n)
        .filter_map(|j| {
            let g = cube.gradings(&cube.index().generator(j));
            (g.h == target.h - 1 && g.q == target.q).then_some((g.k, j))
        })
        .collect();
    sources.sort();
    let v = BitVec::unit(n, cube.index().index_of(&v));
    let mut span = SpanBuilder::new(n);
    let mut i = 0;
    while i < sources.len() {
        let c = sources[i].0;
        while i < sources.len() && sources[i].0 == c {
            span.insert(BitVec::from_indices(n, d1.column(sources[i].1).iter().map(|&x| x as usize)));
            i += 1;
        }
        if span.contains(&v) {
            return Some(cube.diagram().strands() as i64 + c);
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    pub s: Q,
    pub r: Q,
    pub t: Q,
    pub n: usize,
    pub writhe: i64,
    pub sl: i64,
    pub kappa: Option<Option<i64>>,
    pub band_rank_lb: Option<Q>,
    pub bennequin_ok: bool,
    pub profile: Option<PLProfile>,
}

/// Invariants of a braid closure at `p`. κ (braid-like orientations only) and the
/// profile are optional because they cost extra passes.
pub fn report(
    word: &BraidWord,
    o: &Orientation,
    p: &RationalParams,
    with_kappa: bool,
    profile_grid: Option<u32>,
) -> Result<InvariantReport, ComputeError> {
    let diagram = ClosureDiagram::from_braid(word);
    check_size(&diagram)?;
    let cube = Cube::new(&diagram);
    let m = marked_complex(&cube, o, Terms::ALL)?;
    let n = word.strands();
    let s = s_rt(&m, p).ok_or(ComputeError::Boundary)?;
    let s00 = s_rt(&m, &RationalParams::from_ints((0, 1), (0, 1))?).ok_or(ComputeError::Boundary)?;
    let sl = -(n as i64) + m.writhe;
    let band_rank_lb =
        (p.r != Q::one()).then(|| (s / (Q::one() - p.r) + Q::from(n as i64) * (Q::one() - p.t)).abs());
    let profile = match profile_grid {
        Some(grid) if p.r != Q::one() => Some(s_profile(&m, p.r, grid)?),
        _ => None,
    };
    Ok(InvariantReport {
        s,
        r: p.r,
        t: p.t,
        n,
        writhe: m.writhe,
        sl,
        kappa: (with_kappa && *o == braid_like(word)).then(|| kappa_in(&cube)),
        band_rank_lb,
        bennequin_ok: Q::from(sl) <= s00,
        profile,
    })
}

/// Evaluates `s_{r,t}` at many parameter points in parallel.
pub fn s_grid(m: &MarkedComplex, points: &[RationalParams]) -> Vec<Option<Q>> {
    points.par_iter().map(|p| s_rt(m, p)).collect()
}
