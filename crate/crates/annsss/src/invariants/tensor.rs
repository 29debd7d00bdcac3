use crate::chain_complex::GradingTriple;
use crate::differentials::Differential;

use super::{FilteredComplex, MarkedComplex};

/// The complex of a split union, with `b` drawn around `a`.
///
/// Generator `(i, j)` sits at index `i * b.len() + j`. Every circle of `b`'s canonical
/// resolution is nontrivial and encloses `a`, so `a`'s depth parities shift by
/// `b.strands`; when that is odd the checkerboard labels on `a` are exchanged.
pub fn tensor_union(a: &MarkedComplex, b: &MarkedComplex) -> MarkedComplex {
    let nb = b.len();
    let grades: Vec<GradingTriple> = a
        .complex
        .grades()
        .iter()
        .flat_map(|x| b.complex.grades().iter().map(move |y| GradingTriple { h: x.h + y.h, q: x.q + y.q, k: x.k + y.k }))
        .collect();
    let mut cols = Vec::with_capacity(grades.len());
    for i in 0..a.len() {
        for j in 0..nb {
            let mut col: Vec<u32> = a.complex.delta().column(i).iter().map(|&i2| i2 * nb as u32 + j as u32).collect();
            col.extend(b.complex.delta().column(j).iter().map(|&j2| (i * nb) as u32 + j2));
            col.sort_unstable();
            cols.push(col);
        }
    }
    let pair = |xs: &[usize], ys: &[usize]| {
        let mut v: Vec<usize> = xs.iter().flat_map(|&i| ys.iter().map(move |&j| i * nb + j)).collect();
        v.sort_unstable();
        v
    };
    let odd = b.strands % 2 == 1;
    let (inner, inner_flipped) = if odd { (&a.flipped, &a.cycle) } else { (&a.cycle, &a.flipped) };
    MarkedComplex {
        complex: FilteredComplex::new(grades, Differential::from_columns(cols)),
        cycle: pair(inner, &b.cycle),
        flipped: pair(inner_flipped, &b.flipped),
        strands: a.strands + b.strands,
        writhe: a.writhe + b.writhe,
    }
}
