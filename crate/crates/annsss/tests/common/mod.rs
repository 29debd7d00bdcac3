#![allow(dead_code)]

use annsss::invariants::{braid_complex, braid_like, MarkedComplex, RationalParams, Q};
use annsss::{parse_braid, BraidWord};

/// Freely reduced words of length <= 4 in the 2-strand group.
pub const CORPUS_B2: &[&str] = &[
    "n=2;",
    "n=2; 1",
    "n=2; -1",
    "n=2; 1 1",
    "n=2; -1 -1",
    "n=2; 1 1 1",
    "n=2; -1 -1 -1",
    "n=2; 1 1 1 1",
    "n=2; -1 -1 -1 -1",
];

pub const CORPUS_B3: &[&str] = &[
    "n=3;",
    "n=3; 1 2",
    "n=3; 1 -2",
    "n=3; -1 -2",
    "n=3; 1 1 -2",
    "n=3; 1 2 -1",
    "n=3; 1 2 1 2",
    "n=3; 1 -2 1 -2",
    "n=3; 1 1 2 -1 2",
    "n=3; -1 2 2 -1 -2",
    "n=3; 1 2 1 2 1 2",
];

/// Four-strand words used by the wider sweeps.
pub const EXTRA_B4: &[&str] = &["n=4;", "n=4; 1 2 3", "n=4; 1 -2 3", "n=4; 1 2 3 1", "n=4; 1 -2 3 -1 2", "n=4; 2 1 3 2 -1 -3"];

pub fn corpus() -> Vec<BraidWord> {
    CORPUS_B2.iter().chain(CORPUS_B3).map(|w| parse_braid(w).unwrap()).collect()
}

pub fn wide_corpus() -> Vec<BraidWord> {
    let mut v = corpus();
    v.extend(EXTRA_B4.iter().map(|w| parse_braid(w).unwrap()));
    v
}

pub fn word(text: &str) -> BraidWord {
    parse_braid(text).unwrap()
}

pub fn marked(w: &BraidWord) -> MarkedComplex {
    braid_complex(w, &braid_like(w)).unwrap()
}

pub fn q(a: i64, b: i64) -> Q {
    Q::new(a, b)
}

/// `{0, 1/4, 1/2, 3/4, 1}^2`.
pub fn grid() -> Vec<RationalParams> {
    let mut v = Vec::new();
    for a in 0..=4 {
        for c in 0..=4 {
            v.push(RationalParams::new(q(a, 4), q(c, 4)).unwrap());
        }
    }
    v
}

pub fn grid_r_below_one() -> Vec<RationalParams> {
    grid().into_iter().filter(|p| p.r < Q::from(1)).collect()
}

pub fn one() -> Q {
    Q::from(1)
}

/// Row-reduced basis of the image, as bitmasks over at most 128 generators.
pub fn image_basis(m: &MarkedComplex) -> Vec<u128> {
    let mut basis: Vec<u128> = Vec::new();
    for col in m.complex.delta().columns() {
        let mut v = col.iter().fold(0u128, |acc, &i| acc ^ 1 << i);
        for b in &basis {
            if v & (1 << b.trailing_zeros()) != 0 {
                v ^= b;
            }
        }
        if v != 0 {
            for b in basis.iter_mut() {
                if *b & (1 << v.trailing_zeros()) != 0 {
                    *b ^= v;
                }
            }
            basis.push(v);
        }
    }
    basis
}

/// `max_z min_{j in z} gr(j)` over every representative `z` of the canonical class.
pub fn s_by_enumeration(m: &MarkedComplex, p: &RationalParams) -> Q {
    assert!(m.len() <= 128);
    let basis = image_basis(m);
    assert!(basis.len() <= 18, "too many boundaries to enumerate");
    let grades: Vec<Q> = m.complex.grades().iter().map(|g| p.grade(g)).collect();
    let g = m.cycle.iter().fold(0u128, |acc, &i| acc ^ 1 << i);
    let mut best: Option<Q> = None;
    for mask in 0u32..1 << basis.len() {
        let z = (0..basis.len()).filter(|i| mask >> i & 1 == 1).fold(g, |acc, i| acc ^ basis[i]);
        assert_ne!(z, 0, "canonical cycle is a boundary");
        let low = (0..m.len()).filter(|&j| z >> j & 1 == 1).map(|j| grades[j]).min().unwrap();
        best = Some(best.map_or(low, |b: Q| b.max(low)));
    }
    best.unwrap()
}

