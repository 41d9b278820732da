mod common;

use std::collections::HashSet;

use common::*;
use unimod_core::cli::ring_info;
use unimod_core::config::parse_ring_literal;
use unimod_core::ring::{LocalRing, RingSpec, Which};

fn additive_order_of_one(ring: &LocalRing) -> u64 {
    let mut acc = ring.one();
    let mut k = 1;
    while acc != ring.zero() {
        acc = ring.add(acc, ring.one());
        k += 1;
    }
    k
}

#[test]
fn zps_matches_integer_arithmetic() {
    for (p, s) in [(3, 1), (3, 2), (3, 3), (5, 2), (7, 1)] {
        let r = z(p, s);
        let m = p.pow(s);
        for i in 0..m {
            for j in 0..m {
                let (a, b) = (r.element(i).unwrap(), r.element(j).unwrap());
                assert_eq!(r.add(a, b).index(), (i + j) % m);
                assert_eq!(r.mul(a, b).index(), (i * j) % m);
            }
            assert_eq!(r.is_unit(r.element(i).unwrap()), i % p != 0);
        }
    }
}

#[test]
fn presentations_satisfy_their_defining_relations() {
    let gr = ring(RingSpec::galois(3, 2, vec![2, 1, 1]));
    let x = gr.from_coeffs(&[0, 1]).unwrap();
    let rel = gr.add(gr.add(gr.square(x), x), gr.from_int(2));
    assert_eq!(rel, gr.zero());

    let f9 = f9();
    let i = f9.from_coeffs(&[0, 1]).unwrap();
    assert_eq!(f9.square(i), f9.from_int(-1));
    // the unit group of a field is cyclic
    for (field, order) in [(f9.clone(), 8), (ring(RingSpec::extension(3, vec![1, 2, 0, 1])), 26)] {
        let has_generator = field
            .units()
            .unwrap()
            .into_iter()
            .any(|g| (1..order).all(|k| field.pow(g, k) != field.one()) && field.pow(g, order) == field.one());
        assert!(has_generator, "{}", field.label());
    }

    let dual = ring(RingSpec::nilpotent(5, None, 2));
    let t = dual.from_coeffs(&[0, 1]).unwrap();
    assert_ne!(t, dual.zero());
    assert_eq!(dual.square(t), dual.zero());
}

#[test]
fn catalog_sizes_and_characteristics() {
    let expected = [
        ("Z3", 3, 1, 3),
        ("Z5", 5, 1, 5),
        ("Z7", 7, 1, 7),
        ("Z9", 9, 3, 9),
        ("Z25", 25, 5, 25),
        ("Z27", 27, 9, 27),
        ("F9", 9, 1, 3),
        ("F25", 25, 1, 5),
        ("F27", 27, 1, 3),
        ("F3[t]/(t^2)", 9, 3, 3),
        ("F5[t]/(t^2)", 25, 5, 5),
        ("GR(9,2)", 81, 9, 9),
    ];
    let rings = catalog();
    assert_eq!(rings.len(), expected.len());
    for (r, (label, card, m, ch)) in rings.iter().zip(expected) {
        assert_eq!(r.label(), label);
        assert_eq!(r.cardinality(), card);
        assert_eq!(r.enumerate(Which::All).unwrap().len() as u64, card);
        // M is the set of non-units; count it directly
        let non_units = r
            .enumerate(Which::All)
            .unwrap()
            .into_iter()
            .filter(|&a| !r.is_unit(a))
            .count();
        assert_eq!(non_units as u64, m, "{label}");
        assert_eq!(r.maximal_ideal_size(), m);
        assert_eq!(additive_order_of_one(r), ch, "{label}");
        assert_eq!(r.characteristic(), ch);
    }
}

#[test]
fn unit_group_properties() {
    for r in catalog() {
        let all = r.enumerate(Which::All).unwrap();
        let maximal: Vec<_> = r.enumerate(Which::MaximalIdeal).unwrap();
        let units: HashSet<_> = r.units().unwrap().into_iter().collect();
        // units are exactly the elements with an inverse
        for &a in &all {
            let invertible = all.iter().any(|&b| r.mul(a, b) == r.one());
            assert_eq!(units.contains(&a), invertible);
            assert_eq!(maximal.contains(&a), !invertible);
        }
        for &u in &units {
            for &m in &maximal {
                assert!(units.contains(&r.add(u, m)));
            }
        }
        let squares: HashSet<_> = units.iter().map(|&u| r.square(u)).collect();
        assert_eq!(squares.len() as u64 * 2, r.unit_count(), "{}", r.label());
        assert_eq!(r.unit_squares().unwrap(), squares);
        let minus_one = r.neg(r.one());
        for &u in &units {
            if r.square(u) == r.one() {
                assert!(u == r.one() || u == minus_one);
            }
            let class = r.square_class(u).unwrap();
            assert_eq!(class.is_square(), squares.contains(&u), "{} {}", r.label(), r.render(u));
            if let Some(w) = class.witness {
                assert_eq!(r.square(w), u);
            }
        }
        let z = r.canonical_nonsquare();
        assert!(r.is_unit(z) && !squares.contains(&z));
        // z is the first non-square unit in element order
        let first = all
            .iter()
            .find(|&&a| units.contains(&a) && !squares.contains(&a))
            .unwrap();
        assert_eq!(*first, z);
    }
}

#[test]
fn ring_info_spec_round_trips() {
    for r in catalog() {
        let info = ring_info(&r).unwrap();
        let again = LocalRing::new(&parse_ring_literal(&info.spec).unwrap()).unwrap();
        assert_eq!(again.id(), r.id());
        assert_eq!(again.spec(), r.spec());
        assert_eq!(again.label(), r.label());
        assert_eq!(again.unit_squares().unwrap(), r.unit_squares().unwrap());
    }
}

#[test]
fn spec_ring_info_examples() {
    let info = ring_info(&z(3, 2)).unwrap();
    assert_eq!(
        (
            info.cardinality,
            info.maximal_ideal_size,
            info.characteristic,
            info.canonical_nonsquare.as_str(),
            info.unit_squares
        ),
        (9, 3, 9, "2", 3)
    );
    let info = ring_info(&f9()).unwrap();
    assert_eq!(
        (info.cardinality, info.maximal_ideal_size, info.characteristic),
        (9, 1, 3)
    );
    let info = ring_info(&ring(RingSpec::galois(3, 2, vec![2, 1, 1]))).unwrap();
    assert_eq!(
        (info.cardinality, info.maximal_ideal_size, info.characteristic),
        (81, 9, 9)
    );
}
