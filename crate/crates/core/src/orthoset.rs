//! Unimodular orthogonal sets: exhaustive maximum search, the explicit
//! witness constructions for `R^2`, and the closed-form prediction
//!
//! ```text
//! S(R, 2) = |R| - |M|   if the discriminant -det β is a square unit
//!         = 2           otherwise
//! ```
//!
//! Two notions of maximality are kept apart: a *maximum* set has the largest
//! possible cardinality, an *inclusion-maximal* set merely cannot be extended.
//! In the hyperbolic plane `{(1,0),(0,1)}` is inclusion-maximal but not maximum.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::clique::{self, BitGraph, Bitset, CliqueOptions};
use crate::error::{Error, Result};
use crate::form::BilinearForm;
use crate::ring::{LocalRing, RingElement, SquareTag};
use crate::vector::{enumerate_unimodular, is_unimodular, RingVector};

/// A validated set of unimodular, pairwise orthogonal vectors, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalSet {
    form: BilinearForm,
    vectors: Vec<RingVector>,
}

impl OrthogonalSet {
    pub fn new(form: &BilinearForm, vectors: impl IntoIterator<Item = RingVector>) -> Result<Self> {
        let mut vectors: Vec<RingVector> = vectors.into_iter().collect();
        vectors.sort();
        vectors.dedup();
        let ring = form.ring();
        for v in &vectors {
            if v.dim() != form.dim() {
                return Err(Error::DimensionMismatch {
                    expected: form.dim(),
                    found: v.dim(),
                });
            }
            if !is_unimodular(ring, v) {
                return Err(Error::NotUnimodular);
            }
        }
        if !pairwise_orthogonal(form, &vectors) {
            return Err(Error::NotOrthogonal);
        }
        Ok(OrthogonalSet {
            form: form.clone(),
            vectors,
        })
    }

    pub fn form(&self) -> &BilinearForm {
        &self.form
    }

    pub fn vectors(&self) -> &[RingVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn contains(&self, v: &RingVector) -> bool {
        self.vectors.binary_search(v).is_ok()
    }

    pub fn render(&self) -> String {
        let ring = self.form.ring();
        let parts: Vec<String> = self.vectors.iter().map(|v| v.render(ring)).collect();
        format!("{{{}}}", parts.join(","))
    }
}

fn pairwise_orthogonal(form: &BilinearForm, vectors: &[RingVector]) -> bool {
    let zero = form.ring().zero();
    vectors.iter().enumerate().all(|(i, x)| {
        vectors[i + 1..].iter().all(|y| {
            form.evaluate_unchecked(x.coords(), y.coords()) == zero
                && form.evaluate_unchecked(y.coords(), x.coords()) == zero
        })
    })
}

/// All vectors unimodular and distinct pairs orthogonal; `β(x, x)` is unconstrained.
pub fn is_orthogonal_set(form: &BilinearForm, vectors: &[RingVector]) -> Result<bool> {
    for v in vectors {
        if v.dim() != form.dim() {
            return Err(Error::DimensionMismatch {
                expected: form.dim(),
                found: v.dim(),
            });
        }
    }
    let mut distinct = vectors.to_vec();
    distinct.sort();
    distinct.dedup();
    Ok(distinct.iter().all(|v| is_unimodular(form.ring(), v)) && pairwise_orthogonal(form, &distinct))
}

/// No unimodular vector outside the set is orthogonal to every member.
pub fn is_inclusion_maximal(set: &OrthogonalSet) -> Result<bool> {
    let form = &set.form;
    let ring = form.ring();
    let zero = ring.zero();
    let all = enumerate_unimodular(ring, form.dim())?;
    Ok(!all.iter().any(|w| {
        !set.contains(w)
            && set.vectors.iter().all(|v| {
                form.evaluate_unchecked(v.coords(), w.coords()) == zero
                    && form.evaluate_unchecked(w.coords(), v.coords()) == zero
            })
    }))
}

/// Graph on the unimodular vectors of `R^n` joining orthogonal pairs.
#[derive(Debug, Clone)]
pub struct OrthogonalityGraph {
    vertices: Vec<RingVector>,
    graph: BitGraph,
}

impl OrthogonalityGraph {
    pub fn vertices(&self) -> &[RingVector] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, v: &RingVector) -> Option<usize> {
        self.vertices.binary_search(v).ok()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.graph.adjacent(i, j)
    }

    pub fn degree(&self, i: usize) -> usize {
        self.graph.degree(i)
    }

    pub fn bit_graph(&self) -> &BitGraph {
        &self.graph
    }
}

fn require_regular(form: &BilinearForm) -> Result<()> {
    if !form.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if !form.is_nondegenerate() {
        return Err(Error::Degenerate);
    }
    Ok(())
}

pub fn build_orthogonality_graph(form: &BilinearForm) -> Result<OrthogonalityGraph> {
    require_regular(form)?;
    let ring = form.ring();
    let n = form.dim();
    let vertices = enumerate_unimodular(ring, n)?;
    let count = vertices.len();
    let matrix = form.matrix();
    // β(x, y) = w·y with w = xᵀB, computed once per vertex.
    let covectors: Vec<Vec<RingElement>> = vertices
        .iter()
        .map(|x| {
            (0..n)
                .map(|j| {
                    (0..n).fold(ring.zero(), |acc, i| {
                        ring.add(acc, ring.mul(x.coords()[i], matrix.get(i, j)))
                    })
                })
                .collect()
        })
        .collect();
    let rows: Vec<Bitset> = match ring.op_tables() {
        Some((add, mul)) => {
            let card = ring.cardinality() as usize;
            let idx = |v: &[RingElement]| v.iter().map(|e| e.index() as usize).collect::<Vec<_>>();
            let ys: Vec<Vec<usize>> = vertices.iter().map(|v| idx(v.coords())).collect();
            let ws: Vec<Vec<usize>> = covectors.iter().map(|w| idx(w)).collect();
            (0..count)
                .into_par_iter()
                .map(|i| {
                    let w = &ws[i];
                    let mut row = Bitset::new(count);
                    for (j, y) in ys.iter().enumerate() {
                        if i == j {
                            continue;
                        }
                        let mut acc = 0usize;
                        for k in 0..n {
                            let prod = mul[w[k] * card + y[k]] as usize;
                            acc = add[acc * card + prod] as usize;
                        }
                        if acc == 0 {
                            row.insert(j);
                        }
                    }
                    row
                })
                .collect()
        }
        None => (0..count)
            .into_par_iter()
            .map(|i| {
                let mut row = Bitset::new(count);
                for (j, y) in vertices.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    let dot = (0..n).fold(ring.zero(), |acc, k| {
                        ring.add(acc, ring.mul(covectors[i][k], y.coords()[k]))
                    });
                    if dot == ring.zero() {
                        row.insert(j);
                    }
                }
                row
            })
            .collect(),
    };
    Ok(OrthogonalityGraph {
        vertices,
        graph: BitGraph::from_rows(rows),
    })
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Hard budget per search; exceeding it is an error.
    pub timeout: Duration,
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            timeout: Duration::from_secs(60),
            parallel: false,
        }
    }
}

impl SearchOptions {
    fn clique(&self, started: Instant) -> CliqueOptions {
        CliqueOptions {
            timeout: self.timeout.saturating_sub(started.elapsed()),
            parallel: self.parallel,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub max_size: usize,
    pub witness: OrthogonalSet,
    pub node_count: u64,
    pub elapsed: Duration,
}

/// Exact `S(R, n)` for `form` by maximum clique search.
pub fn max_orthogonal_set(form: &BilinearForm, options: &SearchOptions) -> Result<SearchResult> {
    let started = Instant::now();
    let graph = build_orthogonality_graph(form)?;
    let found = clique::max_clique(&graph.graph, &options.clique(started)).map_err(|e| retime(e, options))?;
    let witness = OrthogonalSet::new(form, found.clique.iter().map(|&i| graph.vertices[i].clone()))?;
    Ok(SearchResult {
        max_size: witness.len(),
        witness,
        node_count: found.nodes,
        elapsed: started.elapsed(),
    })
}

fn retime(e: Error, options: &SearchOptions) -> Error {
    match e {
        Error::Timeout { .. } => Error::Timeout {
            budget: options.timeout,
        },
        other => other,
    }
}

/// Every orthogonal set of maximum cardinality, sorted.
pub fn enumerate_maximum_sets(form: &BilinearForm, options: &SearchOptions) -> Result<Vec<OrthogonalSet>> {
    let started = Instant::now();
    let graph = build_orthogonality_graph(form)?;
    let best = clique::max_clique(&graph.graph, &options.clique(started)).map_err(|e| retime(e, options))?;
    let all = clique::cliques_of_size(&graph.graph, best.clique.len(), &options.clique(started))
        .map_err(|e| retime(e, options))?;
    all.into_iter()
        .map(|c| OrthogonalSet::new(form, c.into_iter().map(|i| graph.vertices[i].clone())))
        .collect()
}

fn require_plane(form: &BilinearForm) -> Result<()> {
    if form.dim() != 2 {
        return Err(Error::UnsupportedDimension(form.dim()));
    }
    require_regular(form)
}

/// Closed-form `S(R, 2)`, keyed on the discriminant class.
pub fn theoretical_s(form: &BilinearForm) -> Result<u64> {
    require_plane(form)?;
    let ring = form.ring();
    Ok(if form.discriminant_class()?.is_square() {
        ring.unit_count()
    } else {
        2
    })
}

/// `{P·(x, x) : x a unit}` where `Pᵀ B P = diag(1, −1)`.
pub fn construct_hyperbolic_witness(form: &BilinearForm) -> Result<OrthogonalSet> {
    require_plane(form)?;
    if !form.discriminant_class()?.is_square() {
        return Err(Error::WrongClass("discriminant is a non-square".into()));
    }
    let ring = form.ring();
    let (p, canonical) = form.canonicalize()?;
    debug_assert_eq!(canonical.u, ring.one());
    let vectors = ring
        .units()?
        .into_iter()
        .map(|x| p.apply(&RingVector::new(ring, vec![x, x])?))
        .collect::<Result<Vec<_>>>()?;
    OrthogonalSet::new(form, vectors)
}

/// Returns `w` when `form` is `diag(1, −w)` with `w` a non-square unit.
fn nonsquare_parameter(form: &BilinearForm) -> Result<RingElement> {
    require_plane(form)?;
    let ring = form.ring();
    let m = form.matrix();
    if m.get(0, 0) != ring.one() || m.get(0, 1) != ring.zero() || m.get(1, 0) != ring.zero() {
        return Err(Error::WrongClass("expected a canonical form diag(1, -z)".into()));
    }
    let w = ring.neg(m.get(1, 1));
    if ring.square_class(w)?.is_square() {
        return Err(Error::WrongClass("discriminant is a square".into()));
    }
    Ok(w)
}

/// The partner of `seed = (a, b)` under `x₁y₁ − w·x₂y₂`:
/// `(a⁻¹·w·b, 1)` when `a` is a unit, otherwise `(1, (b·w)⁻¹·a)`.
fn pair_partner(ring: &LocalRing, w: RingElement, seed: &RingVector) -> Result<RingVector> {
    let (a, b) = (seed.coords()[0], seed.coords()[1]);
    if ring.is_unit(a) {
        let first = ring.mul(ring.mul(ring.invert(a)?, w), b);
        RingVector::new(ring, vec![first, ring.one()])
    } else {
        let second = ring.mul(ring.invert(ring.mul(b, w))?, a);
        RingVector::new(ring, vec![ring.one(), second])
    }
}

/// Two-element orthogonal set containing `seed` for the canonical form `diag(1, −z)`.
pub fn construct_pair_witness(form: &BilinearForm, seed: &RingVector) -> Result<OrthogonalSet> {
    let w = nonsquare_parameter(form)?;
    let ring = form.ring();
    if seed.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: seed.dim(),
        });
    }
    if !is_unimodular(ring, seed) {
        return Err(Error::NotUnimodular);
    }
    let partner = pair_partner(ring, w, seed)?;
    OrthogonalSet::new(form, [seed.clone(), partner])
}

/// How an enumerated maximum set matches the known parametrized families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    /// `{(u·x, x) : x unit}` with `u² = 1`.
    UnitMultiple {
        u: u64,
    },
    /// `{(a, b), partner}` with the partner of the pair construction scaled by a unit.
    Pair,
    Unclassified,
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::UnitMultiple { .. } => "ux-family",
            Family::Pair => "pair-family",
            Family::Unclassified => "unclassified",
        }
    }
}

pub fn classify_family(set: &OrthogonalSet) -> Result<Family> {
    let form = set.form();
    require_plane(form)?;
    let ring = form.ring();
    let units = ring.units()?;
    if set.len() == units.len() {
        let one = ring.one();
        for &u in units.iter().filter(|&&u| ring.square(u) == one) {
            let family: Vec<RingVector> = units
                .iter()
                .map(|&x| RingVector::new(ring, vec![ring.mul(u, x), x]))
                .collect::<Result<_>>()?;
            let mut family = family;
            family.sort();
            if family == set.vectors {
                return Ok(Family::UnitMultiple { u: u.index() });
            }
        }
    }
    if set.len() == 2 && is_pair_family(form, &set.vectors[0], &set.vectors[1])? {
        return Ok(Family::Pair);
    }
    Ok(Family::Unclassified)
}

/// `{v, w}` matches the pair parametrization for `diag(1, −c)`: `w` is a unit
/// multiple of the partner of `v` (or the other way round).
fn is_pair_family(form: &BilinearForm, v: &RingVector, w: &RingVector) -> Result<bool> {
    let ring = form.ring();
    let m = form.matrix();
    if m.get(0, 0) != ring.one() || m.get(0, 1) != ring.zero() || m.get(1, 0) != ring.zero() {
        return Ok(false);
    }
    let c = ring.neg(m.get(1, 1));
    for (seed, other) in [(v, w), (w, v)] {
        let partner = pair_partner(ring, c, seed)?;
        for y in ring.units()? {
            if &partner.scale(ring, y) == other {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Label of one of the two canonical planes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PlaneKind {
    Hyperbolic,
    Nonsquare,
}

impl PlaneKind {
    pub fn label(self) -> &'static str {
        match self {
            PlaneKind::Hyperbolic => "hyperbolic",
            PlaneKind::Nonsquare => "nonsquare",
        }
    }

    pub fn form(self, ring: &LocalRing) -> BilinearForm {
        match self {
            PlaneKind::Hyperbolic => BilinearForm::hyperbolic_plane(ring),
            PlaneKind::Nonsquare => BilinearForm::nonsquare_plane(ring),
        }
    }
}

/// One (ring, form) comparison of brute force against the closed form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationRow {
    pub ring: String,
    pub card_r: u64,
    pub card_m: u64,
    pub form: String,
    pub det: String,
    pub det_class: SquareTag,
    pub disc_class: SquareTag,
    pub theoretical_s: u64,
    pub brute_force_s: u64,
    #[serde(rename = "match")]
    pub matches: bool,
    pub witness_size: u64,
    pub inclusion_maximal: bool,
    pub node_count: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub rows: Vec<VerificationRow>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.matches)
    }
}

pub fn verify_form(ring: &LocalRing, kind: PlaneKind, options: &SearchOptions) -> Result<VerificationRow> {
    let form = kind.form(ring);
    let predicted = theoretical_s(&form)?;
    let found = max_orthogonal_set(&form, options)?;
    let inclusion_maximal = is_inclusion_maximal(&found.witness)?;
    let brute = found.max_size as u64;
    Ok(VerificationRow {
        ring: ring.label().to_owned(),
        card_r: ring.cardinality(),
        card_m: ring.maximal_ideal_size(),
        form: kind.label().to_owned(),
        det: ring.render(form.determinant()),
        det_class: form.determinant_class()?.tag,
        disc_class: form.discriminant_class()?.tag,
        theoretical_s: predicted,
        brute_force_s: brute,
        matches: predicted == brute,
        witness_size: found.witness.len() as u64,
        inclusion_maximal,
        node_count: found.node_count,
        elapsed: found.elapsed,
    })
}

/// Both canonical planes of `ring`, hyperbolic first.
pub fn verify_theorem(ring: &LocalRing, options: &SearchOptions) -> Result<VerificationReport> {
    let rows = [PlaneKind::Hyperbolic, PlaneKind::Nonsquare]
        .into_iter()
        .map(|kind| verify_form(ring, kind, options))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;

    fn ring(spec: RingSpec) -> LocalRing {
        LocalRing::new(&spec).unwrap()
    }

    fn vecs(r: &LocalRing, items: &[[i64; 2]]) -> Vec<RingVector> {
        items.iter().map(|c| RingVector::from_ints(r, c)).collect()
    }

    #[test]
    fn orthogonal_set_examples() {
        let r = ring(RingSpec::zps(3, 2));
        let h = BilinearForm::hyperbolic_plane(&r);
        assert!(is_orthogonal_set(&h, &vecs(&r, &[[1, 0], [0, 1]])).unwrap());
        let diag = vecs(&r, &[[1, 1], [2, 2], [4, 4], [5, 5], [7, 7], [8, 8]]);
        assert!(is_orthogonal_set(&h, &diag).unwrap());
        assert!(!is_orthogonal_set(&h, &vecs(&r, &[[1, 1], [1, 2]])).unwrap());
        assert!(!is_orthogonal_set(&h, &vecs(&r, &[[3, 0], [0, 1]])).unwrap());
        assert!(matches!(
            is_orthogonal_set(&h, &[RingVector::from_ints(&r, &[1, 0, 0])]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn inclusion_maximality() {
        let r = ring(RingSpec::zps(3, 2));
        let h = BilinearForm::hyperbolic_plane(&r);
        let basis = OrthogonalSet::new(&h, vecs(&r, &[[1, 0], [0, 1]])).unwrap();
        assert!(is_inclusion_maximal(&basis).unwrap());
        let diag = OrthogonalSet::new(&h, vecs(&r, &[[1, 1], [2, 2], [4, 4], [5, 5], [7, 7], [8, 8]])).unwrap();
        assert!(is_inclusion_maximal(&diag).unwrap());
        let single = OrthogonalSet::new(&h, vecs(&r, &[[1, 1]])).unwrap();
        assert!(!is_inclusion_maximal(&single).unwrap());
    }

    #[test]
    fn graph_examples() {
        let z3 = ring(RingSpec::zps(3, 1));
        assert_eq!(
            build_orthogonality_graph(&BilinearForm::hyperbolic_plane(&z3))
                .unwrap()
                .len(),
            8
        );
        let r = ring(RingSpec::zps(3, 2));
        let g = build_orthogonality_graph(&BilinearForm::hyperbolic_plane(&r)).unwrap();
        assert_eq!(g.len(), 72);
        let a = g.index_of(&RingVector::from_ints(&r, &[1, 1])).unwrap();
        let b = g.index_of(&RingVector::from_ints(&r, &[2, 2])).unwrap();
        assert!(g.adjacent(a, b) && g.adjacent(b, a) && !g.adjacent(a, a));
        let ns = BilinearForm::from_rows(&r, &[&[1, 0], &[0, -2]]).unwrap();
        let g = build_orthogonality_graph(&ns).unwrap();
        let a = g.index_of(&RingVector::from_ints(&r, &[1, 1])).unwrap();
        let b = g.index_of(&RingVector::from_ints(&r, &[2, 1])).unwrap();
        assert!(g.adjacent(a, b));
    }

    #[test]
    fn search_examples() {
        let opts = SearchOptions::default();
        let z3 = ring(RingSpec::zps(3, 1));
        assert_eq!(
            max_orthogonal_set(&BilinearForm::hyperbolic_plane(&z3), &opts)
                .unwrap()
                .max_size,
            2
        );
        let z5 = ring(RingSpec::zps(5, 1));
        let res = max_orthogonal_set(&BilinearForm::hyperbolic_plane(&z5), &opts).unwrap();
        assert_eq!(res.max_size, 4);
        assert_eq!(res.witness.len(), 4);
        let z9 = ring(RingSpec::zps(3, 2));
        assert_eq!(
            max_orthogonal_set(&BilinearForm::nonsquare_plane(&z9), &opts)
                .unwrap()
                .max_size,
            2
        );
    }

    #[test]
    fn theoretical_values() {
        let z25 = ring(RingSpec::zps(5, 2));
        assert_eq!(theoretical_s(&BilinearForm::hyperbolic_plane(&z25)).unwrap(), 20);
        assert_eq!(
            theoretical_s(&BilinearForm::from_rows(&z25, &[&[1, 0], &[0, -2]]).unwrap()).unwrap(),
            2
        );
        let z7 = ring(RingSpec::zps(7, 1));
        assert_eq!(theoretical_s(&BilinearForm::hyperbolic_plane(&z7)).unwrap(), 6);
        let three = BilinearForm::from_rows(&z7, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        assert_eq!(theoretical_s(&three).unwrap_err(), Error::UnsupportedDimension(3));
    }

    #[test]
    fn hyperbolic_witnesses() {
        let z9 = ring(RingSpec::zps(3, 2));
        let w = construct_hyperbolic_witness(&BilinearForm::hyperbolic_plane(&z9)).unwrap();
        assert_eq!(w.render(), "{(1,1),(2,2),(4,4),(5,5),(7,7),(8,8)}");
        let off = BilinearForm::from_rows(&z9, &[&[0, 1], &[1, 0]]).unwrap();
        let w = construct_hyperbolic_witness(&off).unwrap();
        assert_eq!(w.len(), 6);
        assert!(is_orthogonal_set(&off, w.vectors()).unwrap());
        let z5 = ring(RingSpec::zps(5, 1));
        assert_eq!(
            construct_hyperbolic_witness(&BilinearForm::hyperbolic_plane(&z5))
                .unwrap()
                .len(),
            4
        );
        assert!(matches!(
            construct_hyperbolic_witness(&BilinearForm::nonsquare_plane(&z9)),
            Err(Error::WrongClass(_))
        ));
    }

    #[test]
    fn pair_witnesses() {
        let z9 = ring(RingSpec::zps(3, 2));
        let ns = BilinearForm::nonsquare_plane(&z9);
        let pair = |seed: [i64; 2]| {
            construct_pair_witness(&ns, &RingVector::from_ints(&z9, &seed))
                .unwrap()
                .render()
        };
        assert_eq!(pair([1, 1]), "{(1,1),(2,1)}");
        assert_eq!(pair([1, 0]), "{(0,1),(1,0)}");
        assert_eq!(pair([3, 1]), "{(1,6),(3,1)}");
        assert_eq!(
            construct_pair_witness(&ns, &RingVector::from_ints(&z9, &[3, 3])).unwrap_err(),
            Error::NotUnimodular
        );
        assert!(matches!(
            construct_pair_witness(
                &BilinearForm::hyperbolic_plane(&z9),
                &RingVector::from_ints(&z9, &[1, 1])
            ),
            Err(Error::WrongClass(_))
        ));
    }

    #[test]
    fn maximum_set_enumeration() {
        let opts = SearchOptions::default();
        let z5 = ring(RingSpec::zps(5, 1));
        let sets = enumerate_maximum_sets(&BilinearForm::hyperbolic_plane(&z5), &opts).unwrap();
        let rendered: Vec<String> = sets.iter().map(|s| s.render()).collect();
        assert_eq!(rendered, vec!["{(1,1),(2,2),(3,3),(4,4)}", "{(1,4),(2,3),(3,2),(4,1)}"]);
        for s in &sets {
            assert!(matches!(classify_family(s).unwrap(), Family::UnitMultiple { .. }));
        }
        let z3 = ring(RingSpec::zps(3, 1));
        let sets = enumerate_maximum_sets(&BilinearForm::hyperbolic_plane(&z3), &opts).unwrap();
        assert!(sets.iter().all(|s| s.len() == 2));
        let z9 = ring(RingSpec::zps(3, 2));
        let ns = BilinearForm::from_rows(&z9, &[&[1, 0], &[0, -2]]).unwrap();
        let sets = enumerate_maximum_sets(&ns, &opts).unwrap();
        assert!(sets
            .iter()
            .all(|s| s.len() == 2 && classify_family(s).unwrap() == Family::Pair));
    }

    #[test]
    fn verification_rows() {
        let z7 = ring(RingSpec::zps(7, 1));
        let report = verify_theorem(&z7, &SearchOptions::default()).unwrap();
        assert!(report.passed());
        let hyper = &report.rows[0];
        assert_eq!((hyper.theoretical_s, hyper.brute_force_s), (6, 6));
        assert_eq!(hyper.det_class, SquareTag::NonSquare);
        assert_eq!(hyper.disc_class, SquareTag::Square);
        assert!(hyper.inclusion_maximal);
    }
}
