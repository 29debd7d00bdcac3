//! Chain maps of elementary cobordisms and their filtration degrees.

use num_traits::One;

use crate::braid_diagram::{CellKind, ClosureDiagram, Smoothing};
use crate::chain_complex::{Cube, Generator, GradingTriple};
use crate::error::ComputeError;
use crate::f2_linalg::BitMatrix;
use crate::invariants::{FilteredComplex, RationalParams, Q};

use super::{total_differential, Differential, Terms};

/// Whether a born or dying circle is contractible in the annulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CircleKind {
    Trivial,
    Nontrivial,
}

/// Counts of the elementary pieces of a cobordism.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CobordismDegreeLedger {
    /// Births and deaths of trivial circles.
    pub a0: u32,
    /// Saddles.
    pub a1: u32,
    /// Births and deaths of nontrivial circles.
    pub b0: u32,
}

impl CobordismDegreeLedger {
    pub const SADDLE: Self = Self { a0: 0, a1: 1, b0: 0 };

    pub fn elementary(kind: CircleKind) -> Self {
        match kind {
            CircleKind::Trivial => Self { a0: 1, a1: 0, b0: 0 },
            CircleKind::Nontrivial => Self { a0: 0, a1: 0, b0: 1 },
        }
    }

    pub fn then(self, other: Self) -> Self {
        Self { a0: self.a0 + other.a0, a1: self.a1 + other.a1, b0: self.b0 + other.b0 }
    }

    /// Lower bound on the `gr_{r,t}` shift of the induced map.
    pub fn filtration_degree(&self, p: &RationalParams) -> Q {
        (Q::one() - p.r) * (Q::from(self.a0 as i64) - Q::from(self.a1 as i64) + Q::from(self.b0 as i64) * (Q::one() - p.t))
    }

    /// Upper bound on `s(source) - s(target)` for a cobordism with these counts.
    pub fn s_drop_bound(&self, p: &RationalParams) -> Q {
        -self.filtration_degree(p)
    }
}

/// The one-circle complex: `+` at index 0, `-` at index 1, zero differential.
pub fn circle_complex(kind: CircleKind) -> FilteredComplex {
    let k = match kind {
        CircleKind::Trivial => 0,
        CircleKind::Nontrivial => 1,
    };
    FilteredComplex::new(
        vec![GradingTriple { h: 0, q: 1, k }, GradingTriple { h: 0, q: -1, k: -k }],
        Differential::from_columns(vec![Vec::new(), Vec::new()]),
    )
}

/// `c ⊗ circle`, with generator `(i, label)` at index `2 i + label`.
pub fn with_circle(c: &FilteredComplex, kind: CircleKind) -> FilteredComplex {
    let w = circle_complex(kind);
    let grades = c
        .grades()
        .iter()
        .flat_map(|g| w.grades().iter().map(move |e| GradingTriple { h: g.h + e.h, q: g.q + e.q, k: g.k + e.k }))
        .collect();
    let cols = c
        .delta()
        .columns()
        .iter()
        .flat_map(|col| (0..2u32).map(move |l| col.iter().map(|&i| 2 * i + l).collect()))
        .collect();
    FilteredComplex::new(grades, Differential::from_columns(cols))
}

/// Birth of a circle: `x ↦ x ⊗ w_+`, from `c` to [`with_circle`]`(c, _)`.
pub fn birth_map(c: &FilteredComplex) -> BitMatrix {
    let n = c.len();
    BitMatrix::from_column_lists(2 * n, &(0..n).map(|i| vec![2 * i]).collect::<Vec<_>>())
}

/// Death of a circle: `x ⊗ w_+ ↦ 0`, `x ⊗ w_- ↦ x`.
pub fn death_map(c: &FilteredComplex) -> BitMatrix {
    let n = c.len();
    let cols: Vec<Vec<usize>> = (0..2 * n).map(|j| if j % 2 == 1 { vec![j / 2] } else { Vec::new() }).collect();
    BitMatrix::from_column_lists(n, &cols)
}

/// The level of the single fixed cell at which `before` and `after` differ.
fn saddle_level(before: &ClosureDiagram, after: &ClosureDiagram) -> Result<(usize, Smoothing), ComputeError> {
    if before.strands() != after.strands() || before.levels() != after.levels() {
        return Err(ComputeError::Mismatch("diagrams have different shapes".into()));
    }
    let mut found = None;
    for (i, (a, b)) in before.cells().iter().zip(after.cells()).enumerate() {
        if a == b {
            continue;
        }
        match (a.kind, b.kind) {
            (CellKind::Fixed(x), CellKind::Fixed(y)) if a.col == b.col && x != y && found.is_none() => {
                found = Some((i, x))
            }
            _ => return Err(ComputeError::Mismatch(format!("cells at level {i} are not related by a saddle"))),
        }
    }
    found.ok_or_else(|| ComputeError::Mismatch("diagrams are identical".into()))
}

/// The saddle map between diagrams that differ in the smoothing of one fixed cell.
///
/// It is the component of the total differential of the diagram with a crossing at that
/// cell, from its 0-resolution (`before`) to its 1-resolution (`after`). Rows index
/// generators of `after`, columns those of `before`.
pub fn saddle_map(before: &ClosureDiagram, after: &ClosureDiagram) -> Result<BitMatrix, ComputeError> {
    let (level, smoothing) = saddle_level(before, after)?;
    let mut cells = before.cells().to_vec();
    cells[level].kind = CellKind::Crossing { positive: smoothing == Smoothing::Identity };
    let mixed = ClosureDiagram::from_cells(before.strands(), cells);
    let c = (0..mixed.crossing_count()).find(|&c| mixed.crossing_level(c) == level).expect("inserted crossing");
    let cube = Cube::new(&mixed);
    let delta = total_differential(&cube, Terms::ALL);
    let src = Cube::new(before);
    let tgt = Cube::new(after);
    let low = (1u64 << c) - 1;
    let squeeze = |s: u64| (s & low) | (s >> (c + 1)) << c;
    let mut cols = vec![Vec::new(); src.len()];
    for j in 0..cube.len() {
        let g = cube.index().generator(j);
        if g.state >> c & 1 == 1 {
            continue;
        }
        let sj = src.index().index_of(&Generator { state: squeeze(g.state), labels: g.labels });
        for &i in delta.column(j) {
            let h = cube.index().generator(i as usize);
            if h.state >> c & 1 == 1 {
                cols[sj].push(tgt.index().index_of(&Generator { state: squeeze(h.state), labels: h.labels }));
            }
        }
    }
    Ok(BitMatrix::from_column_lists(tgt.len(), &cols))
}

/// Smallest `gr_{r,t}` shift over the nonzero entries of `map: from -> to`, or `None` for
/// the zero map.
pub fn filtration_degree(map: &BitMatrix, from: &[GradingTriple], to: &[GradingTriple], p: &RationalParams) -> Option<Q> {
    map.entries().map(|(i, j)| p.grade(&to[i]) - p.grade(&from[j])).min()
}
