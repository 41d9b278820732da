#![allow(dead_code)]

use std::collections::HashSet;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use unimod_core::config::{parse_config, DEFAULT_CATALOG};
use unimod_core::form::{BilinearForm, CongruenceTransform, Matrix};
use unimod_core::orthoset::SearchOptions;
use unimod_core::ring::{LocalRing, RingElement, RingSpec, Which};

pub fn catalog() -> Vec<LocalRing> {
    parse_config(DEFAULT_CATALOG).unwrap().build_rings().unwrap()
}

pub fn ring(spec: RingSpec) -> LocalRing {
    LocalRing::new(&spec).unwrap()
}

pub fn z(p: u64, s: u32) -> LocalRing {
    ring(RingSpec::zps(p, s))
}

pub fn f9() -> LocalRing {
    ring(RingSpec::extension(3, vec![1, 0, 1]))
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn seq() -> SearchOptions {
    SearchOptions {
        parallel: false,
        ..SearchOptions::default()
    }
}

pub fn par() -> SearchOptions {
    SearchOptions {
        parallel: true,
        ..SearchOptions::default()
    }
}

pub fn random_element(ring: &LocalRing, rng: &mut StdRng) -> RingElement {
    ring.element(rng.gen_range(0..ring.cardinality())).unwrap()
}

/// A uniformly random symmetric 2x2 form with unit determinant.
pub fn random_form(ring: &LocalRing, rng: &mut StdRng) -> BilinearForm {
    loop {
        let (a, b, d) = (
            random_element(ring, rng),
            random_element(ring, rng),
            random_element(ring, rng),
        );
        let m = Matrix::new(2, vec![a, b, b, d]).unwrap();
        if ring.is_unit(m.determinant(ring)) {
            return BilinearForm::new(ring, m).unwrap();
        }
    }
}

pub fn random_transform(ring: &LocalRing, n: usize, rng: &mut StdRng) -> CongruenceTransform {
    loop {
        let entries = (0..n * n).map(|_| random_element(ring, rng)).collect();
        if let Ok(p) = CongruenceTransform::new(ring, Matrix::new(n, entries).unwrap()) {
            return p;
        }
    }
}

pub fn symmetric_regular_forms(ring: &LocalRing) -> Vec<Matrix> {
    let all = ring.enumerate(Which::All).unwrap();
    let mut out = Vec::new();
    for &a in &all {
        for &b in &all {
            for &d in &all {
                let m = Matrix::new(2, vec![a, b, b, d]).unwrap();
                if ring.is_unit(m.determinant(ring)) {
                    out.push(m);
                }
            }
        }
    }
    out
}

pub fn invertible_matrices(ring: &LocalRing) -> Vec<Matrix> {
    let all = ring.enumerate(Which::All).unwrap();
    let mut out = Vec::new();
    for &a in &all {
        for &b in &all {
            for &c in &all {
                for &d in &all {
                    let m = Matrix::new(2, vec![a, b, c, d]).unwrap();
                    if ring.is_unit(m.determinant(ring)) {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

/// Orbits of GL2 acting by congruence, computed directly from the action.
pub fn congruence_orbits(ring: &LocalRing) -> Vec<HashSet<Matrix>> {
    let forms = symmetric_regular_forms(ring);
    let group = invertible_matrices(ring);
    let mut seen: HashSet<Matrix> = HashSet::new();
    let mut orbits = Vec::new();
    for f in &forms {
        if seen.contains(f) {
            continue;
        }
        let orbit: HashSet<Matrix> = group.iter().map(|p| f.congruent(ring, p)).collect();
        seen.extend(orbit.iter().cloned());
        orbits.push(orbit);
    }
    assert_eq!(seen.len(), forms.len());
    orbits
}
