mod common;

use std::collections::HashMap;

use common::*;
use unimod_core::form::{are_equivalent, BilinearForm, CanonicalForm, CongruenceTransform, Matrix};
use unimod_core::Error;

fn assert_sound(form: &BilinearForm) -> CanonicalForm {
    let ring = form.ring();
    let (p, canonical) = form.canonicalize().unwrap();
    assert!(ring.is_unit(p.determinant()));
    let transformed = form.matrix().congruent(ring, p.matrix());
    assert_eq!(
        &transformed,
        canonical.form(ring).matrix(),
        "{} over {}",
        form.render(),
        ring.label()
    );
    let want_u = if form.discriminant_class().unwrap().is_square() {
        ring.one()
    } else {
        ring.canonical_nonsquare()
    };
    assert_eq!(canonical.u, want_u);
    canonical
}

#[test]
fn random_forms_canonicalize_soundly() {
    for (k, ring) in catalog().iter().enumerate() {
        let mut rng = rng(100 + k as u64);
        for _ in 0..150 {
            assert_sound(&random_form(ring, &mut rng));
        }
    }
}

#[test]
fn random_ternary_forms_canonicalize_soundly() {
    for ring in [z(3, 1), z(3, 2), z(5, 1), f9()] {
        let mut rng = rng(7);
        for _ in 0..100 {
            let p = random_transform(&ring, 3, &mut rng);
            let diag: Vec<_> = (0..3)
                .map(|_| loop {
                    let a = random_element(&ring, &mut rng);
                    if ring.is_unit(a) {
                        break a;
                    }
                })
                .collect();
            let form = BilinearForm::diagonal(&ring, &diag).unwrap().transform(&p).unwrap();
            assert_sound(&form);
        }
    }
}

#[test]
fn exhaustive_two_classes_on_small_rings() {
    for ring in catalog().into_iter().filter(|r| r.cardinality() <= 9) {
        let orbits = congruence_orbits(&ring);
        assert_eq!(orbits.len(), 2, "{}", ring.label());
        let mut by_u: HashMap<_, usize> = HashMap::new();
        for (k, orbit) in orbits.iter().enumerate() {
            for m in orbit {
                let form = BilinearForm::new(&ring, m.clone()).unwrap();
                let canonical = assert_sound(&form);
                // each orbit maps to a single canonical form and vice versa
                assert_eq!(*by_u.entry(canonical.u).or_insert(k), k, "{}", ring.label());
            }
        }
        assert_eq!(by_u.len(), 2);
    }
}

#[test]
fn discriminant_class_is_a_congruence_invariant() {
    for (k, ring) in catalog().iter().enumerate() {
        let mut rng = rng(k as u64);
        for _ in 0..50 {
            let form = random_form(ring, &mut rng);
            let p = random_transform(ring, 2, &mut rng);
            let moved = form.transform(&p).unwrap();
            assert_eq!(
                form.discriminant_class().unwrap().tag,
                moved.discriminant_class().unwrap().tag
            );
            assert!(are_equivalent(&form, &moved).unwrap());
        }
    }
}

#[test]
fn canonical_planes_are_inequivalent() {
    for ring in catalog() {
        let one = CanonicalForm::new(2, ring.one()).form(&ring);
        let z = CanonicalForm::new(2, ring.canonical_nonsquare()).form(&ring);
        assert!(!are_equivalent(&one, &z).unwrap());
        assert!(one.discriminant_class().unwrap().is_square());
        assert!(!z.discriminant_class().unwrap().is_square());
    }
}

#[test]
fn canon_examples() {
    let r = z(3, 2);
    let hyperbolic = BilinearForm::parse(&r, "0,1;1,0").unwrap();
    assert_eq!(assert_sound(&hyperbolic).u, r.one());
    // -det = 2 is the canonical non-square of Z9
    let f = BilinearForm::parse(&r, "1,0;0,-2").unwrap();
    assert_eq!(r.render(assert_sound(&f).u), "2");
    let degenerate = BilinearForm::parse(&r, "1,0;0,3").unwrap();
    assert_eq!(degenerate.canonicalize().unwrap_err(), Error::Degenerate);
    let p = CongruenceTransform::new(&r, Matrix::new(2, vec![r.one(), r.one(), r.one(), r.one()]).unwrap());
    assert_eq!(p.unwrap_err(), Error::NotAUnit);
}
