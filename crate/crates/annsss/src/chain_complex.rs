//! Distinguished generators over the cube of resolutions, their gradings, and canonical cycles.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::braid_diagram::{ClosureDiagram, State, StateGeometry, SCALE};
use crate::error::ComputeError;

/// A cube vertex together with a labeling of its circles; bit `i` set means circle `i` is
/// labeled `-` (appears in the monomial).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub state: State,
    pub labels: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GradingTriple {
    pub h: i64,
    pub q: i64,
    pub k: i64,
}

/// A formal F2 sum of generators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Chain {
    gens: BTreeSet<Generator>,
}

impl Chain {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_generator(&mut self, g: Generator) {
        if !self.gens.remove(&g) {
            self.gens.insert(g);
        }
    }

    pub fn add(&mut self, other: &Chain) {
        for &g in &other.gens {
            self.add_generator(g);
        }
    }

    pub fn contains(&self, g: &Generator) -> bool {
        self.gens.contains(g)
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Generator> {
        self.gens.iter()
    }
}

impl FromIterator<Generator> for Chain {
    fn from_iter<I: IntoIterator<Item = Generator>>(iter: I) -> Self {
        let mut c = Chain::zero();
        for g in iter {
            c.add_generator(g);
        }
        c
    }
}

/// Dense numbering of all generators: state blocks in increasing state order, labels within.
#[derive(Clone, Debug)]
pub struct ComplexIndex {
    offsets: Vec<usize>,
    circles: Vec<u32>,
    total: usize,
}

impl ComplexIndex {
    pub fn from_circle_counts(circles: Vec<u32>) -> Self {
        let mut offsets = Vec::with_capacity(circles.len());
        let mut total = 0usize;
        for &c in &circles {
            offsets.push(total);
            total += 1usize << c;
        }
        Self { offsets, circles, total }
    }

    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn states(&self) -> usize {
        self.offsets.len()
    }

    pub fn offset(&self, state: State) -> usize {
        self.offsets[state as usize]
    }

    pub fn circle_count(&self, state: State) -> usize {
        self.circles[state as usize] as usize
    }

    pub fn index_of(&self, g: &Generator) -> usize {
        debug_assert!(g.labels >> self.circles[g.state as usize] == 0);
        self.offsets[g.state as usize] + g.labels as usize
    }

    pub fn generator(&self, i: usize) -> Generator {
        let s = self.offsets.partition_point(|&o| o <= i) - 1;
        Generator { state: s as State, labels: (i - self.offsets[s]) as u64 }
    }
}

/// Crossing counts of the orientation used for the grading normalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GradingShift {
    pub n_plus: i64,
    pub n_minus: i64,
}

/// Reversal flag per component of a braid closure; all `false` is the braid-like orientation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Orientation {
    reversed: Vec<bool>,
}

impl Orientation {
    pub fn braid_like(components: usize) -> Self {
        Self { reversed: vec![false; components] }
    }

    /// Reverses the listed components of a closure with `components` components.
    pub fn reversing(components: usize, list: &[usize]) -> Result<Self, ComputeError> {
        let mut reversed = vec![false; components];
        for &i in list {
            if i >= components {
                return Err(ComputeError::Orientation(format!(
                    "component {i} does not exist ({components} components)"
                )));
            }
            reversed[i] = true;
        }
        Ok(Self { reversed })
    }

    pub fn reversed(&self) -> &[bool] {
        &self.reversed
    }

    pub fn opposite(&self) -> Self {
        Self { reversed: self.reversed.iter().map(|r| !r).collect() }
    }
}

/// Crossing signs and oriented resolution of a braid closure under an orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedCrossings {
    pub positive: Vec<bool>,
    pub state: State,
    pub shift: GradingShift,
}

pub fn oriented_crossings(diagram: &ClosureDiagram, o: &Orientation) -> Result<OrientedCrossings, ComputeError> {
    let word = diagram
        .word()
        .ok_or_else(|| ComputeError::Orientation("diagram is not a braid closure".into()))?;
    let (count, comp) = word.component_of_strand();
    if o.reversed.len() != count {
        return Err(ComputeError::Orientation(format!(
            "{} flags given for {count} components",
            o.reversed.len()
        )));
    }
    let mut at: Vec<usize> = (0..word.strands()).collect();
    let mut positive = Vec::with_capacity(word.len());
    let mut state = 0;
    for (c, &l) in word.letters().iter().enumerate() {
        let i = l.unsigned_abs() as usize - 1;
        let same = o.reversed[comp[at[i]]] == o.reversed[comp[at[i + 1]]];
        let sign = (l > 0) == same;
        if !sign {
            state |= 1 << c;
        }
        positive.push(sign);
        at.swap(i, i + 1);
    }
    let n_plus = positive.iter().filter(|&&p| p).count() as i64;
    let n_minus = positive.len() as i64 - n_plus;
    Ok(OrientedCrossings { positive, state, shift: GradingShift { n_plus, n_minus } })
}

/// The resolution cube of a diagram: per-state geometry and the dense generator index.
pub struct Cube {
    diagram: ClosureDiagram,
    pub(crate) geoms: Vec<StateGeometry>,
    index: ComplexIndex,
    nontrivial: Vec<u64>,
}

impl Cube {
    pub fn new(diagram: &ClosureDiagram) -> Self {
        let states = 1u64 << diagram.crossing_count();
        let geoms: Vec<StateGeometry> = (0..states).into_par_iter().map(|s| diagram.geometry(s)).collect();
        let index = ComplexIndex::from_circle_counts(geoms.iter().map(|g| g.circles.len() as u32).collect());
        let nontrivial = geoms.iter().map(|g| g.nontrivial_mask()).collect();
        Self { diagram: diagram.clone(), geoms, index, nontrivial }
    }

    pub fn diagram(&self) -> &ClosureDiagram {
        &self.diagram
    }

    pub fn index(&self) -> &ComplexIndex {
        &self.index
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn nontrivial_mask(&self, state: State) -> u64 {
        self.nontrivial[state as usize]
    }

    pub fn depth(&self, state: State, circle: usize) -> usize {
        self.geoms[state as usize].circles[circle].depth
    }

    pub fn diagram_shift(&self) -> GradingShift {
        GradingShift { n_plus: self.diagram.n_plus() as i64, n_minus: self.diagram.n_minus() as i64 }
    }

    pub fn gradings_with(&self, g: &Generator, shift: GradingShift) -> GradingTriple {
        let weight = g.state.count_ones() as i64;
        let circles = self.index.circle_count(g.state) as i64;
        let minus = g.labels.count_ones() as i64;
        let nt = self.nontrivial[g.state as usize];
        let nt_minus = (g.labels & nt).count_ones() as i64;
        GradingTriple {
            h: weight - shift.n_minus,
            q: weight + circles - 2 * minus + shift.n_plus - 2 * shift.n_minus,
            k: nt.count_ones() as i64 - 2 * nt_minus,
        }
    }

    pub fn gradings(&self, g: &Generator) -> GradingTriple {
        self.gradings_with(g, self.diagram_shift())
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        (0..self.index.len()).map(|i| self.index.generator(i))
    }

    /// Expansion of the x / (1+x) labeling at `state`: circles of even depth get x, odd
    /// depth 1+x, with the roles exchanged on the circles in `swap`.
    pub fn idempotent_chain(&self, state: State, swap: u64) -> Chain {
        let geom = &self.geoms[state as usize];
        let mut fixed = 0u64;
        let mut free = Vec::new();
        for (i, c) in geom.circles.iter().enumerate() {
            if (c.depth % 2 == 0) != (swap >> i & 1 == 1) {
                fixed |= 1 << i;
            } else {
                free.push(i);
            }
        }
        (0..1u64 << free.len())
            .map(|m| {
                let labels = free.iter().enumerate().fold(fixed, |acc, (b, &i)| acc | (m >> b & 1) << i);
                Generator { state, labels }
            })
            .collect()
    }

    /// Circles of the resolution at `state` that `o` traverses clockwise. Braid-like
    /// orientations run every circle of their oriented resolution counterclockwise.
    pub fn clockwise_circles(&self, state: State, o: &Orientation) -> Result<u64, ComputeError> {
        let word = self
            .diagram
            .word()
            .ok_or_else(|| ComputeError::Orientation("diagram is not a braid closure".into()))?;
        let (_, comp) = word.component_of_strand();
        let (n, levels) = (word.strands(), word.len());
        let mut at: Vec<usize> = (0..n).collect();
        let mut up = vec![false; n * (levels + 1)];
        for k in 0..=levels {
            for j in 0..n {
                up[k * n + j] = !o.reversed[comp[at[j]]];
            }
            if k < levels {
                let i = word.letters()[k].unsigned_abs() as usize - 1;
                at.swap(i, i + 1);
            }
        }
        let mut mask = 0;
        for (ci, c) in self.geoms[state as usize].circles.iter().enumerate() {
            let poly = &c.polygon;
            let (w, port) = poly
                .iter()
                .enumerate()
                .find_map(|(w, &p)| port_at(p, n, levels).map(|port| (w, port)))
                .expect("every circle passes through a port");
            let ccw_up = poly[(w + 1) % poly.len()].1 > poly[w].1;
            if ccw_up != up[port] {
                mask |= 1 << ci;
            }
        }
        Ok(mask)
    }
}

fn port_at(p: (i64, i64), n: usize, levels: usize) -> Option<usize> {
    let (j, k) = (p.0 / SCALE, p.1 / SCALE);
    (p.0 % SCALE == 0 && p.1 % SCALE == 0 && (1..=n as i64).contains(&j) && (0..=levels as i64).contains(&k))
        .then(|| k as usize * n + j as usize - 1)
}

/// Gradings computed from scratch by resolving the state; an independent route used in tests.
pub fn gradings(diagram: &ClosureDiagram, g: &Generator) -> GradingTriple {
    let r = diagram.resolve(g.state);
    let weight = g.state.count_ones() as i64;
    let (mut plus, mut minus, mut nt_plus, mut nt_minus) = (0, 0, 0, 0);
    for c in &r.circles {
        let is_minus = g.labels >> c.id & 1 == 1;
        if is_minus {
            minus += 1;
        } else {
            plus += 1;
        }
        if c.nontrivial {
            if is_minus {
                nt_minus += 1;
            } else {
                nt_plus += 1;
            }
        }
    }
    let (np, nm) = (diagram.n_plus() as i64, diagram.n_minus() as i64);
    GradingTriple { h: weight - nm, q: weight + plus - minus + np - 2 * nm, k: nt_plus - nt_minus }
}

/// The canonical cycle of an orientation: on the oriented resolution, x on circles whose
/// depth plus clockwise-ness is even and 1 + x on the others (for braid-like orientations,
/// x exactly on the even-depth circles).
pub fn canonical_generator(cube: &Cube, o: &Orientation) -> Result<Chain, ComputeError> {
    let oc = oriented_crossings(cube.diagram(), o)?;
    Ok(cube.idempotent_chain(oc.state, cube.clockwise_circles(oc.state, o)?))
}

/// The braid-like resolution with every circle labeled `-`.
pub fn plamenevskaya_cycle(diagram: &ClosureDiagram) -> Generator {
    let state = diagram.oriented_state();
    let circles = diagram.resolve(state).circles.len();
    Generator { state, labels: (1u64 << circles) - 1 }
}
