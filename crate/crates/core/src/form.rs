//! Symmetric bilinear forms on `R^n` and their canonical forms under congruence.
//!
//! Over a local ring of odd characteristic every non-degenerate symmetric
//! form is congruent to
//!
//! ```text
//! n even: diag(1, -1, ..., 1, -u)
//! n odd:  diag(1, -1, ..., 1, -1, u)
//! ```
//!
//! with `u = 1` or `u` the ring's canonical non-square. The class of `u` is
//! the square class of the discriminant `(-1)^(n(n-1)/2) det B`; `det B`
//! alone is only determined up to unit squares and, when `-1` is a
//! non-square, disagrees with the discriminant on the hyperbolic plane.

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{LocalRing, RingElement, SquareClass};
use crate::vector::{split_top_level, RingVector};

/// Dense `n × n` matrix over a ring, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    n: usize,
    entries: Vec<RingElement>,
}

impl Matrix {
    pub fn new(n: usize, entries: Vec<RingElement>) -> Result<Self> {
        if n == 0 {
            return Err(Error::UnsupportedDimension(0));
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        Ok(Matrix { n, entries })
    }

    pub fn identity(ring: &LocalRing, n: usize) -> Self {
        let mut entries = vec![ring.zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = ring.one();
        }
        Matrix { n, entries }
    }

    pub fn diagonal(ring: &LocalRing, diag: &[RingElement]) -> Self {
        let n = diag.len();
        let mut entries = vec![ring.zero(); n * n];
        for (i, &d) in diag.iter().enumerate() {
            entries[i * n + i] = d;
        }
        Matrix { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> RingElement {
        self.entries[i * self.n + j]
    }

    fn set(&mut self, i: usize, j: usize, v: RingElement) {
        self.entries[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[RingElement] {
        &self.entries
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.n;
        let mut entries = self.entries.clone();
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.get(i, j);
            }
        }
        Matrix { n, entries }
    }

    pub fn mul(&self, ring: &LocalRing, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n, "matrix dimensions differ");
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ring.zero();
                for k in 0..n {
                    acc = ring.add(acc, ring.mul(self.get(i, k), other.get(k, j)));
                }
                entries.push(acc);
            }
        }
        Matrix { n, entries }
    }

    /// `Pᵀ · self · P`
    pub fn congruent(&self, ring: &LocalRing, p: &Matrix) -> Matrix {
        p.transpose().mul(ring, &self.mul(ring, p))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_diagonal(&self, ring: &LocalRing) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j) == ring.zero()))
    }

    /// Cofactor expansion along the first row.
    pub fn determinant(&self, ring: &LocalRing) -> RingElement {
        let cols: Vec<usize> = (0..self.n).collect();
        self.minor_det(ring, 0, &cols)
    }

    fn minor_det(&self, ring: &LocalRing, row: usize, cols: &[usize]) -> RingElement {
        match cols.len() {
            1 => self.get(row, cols[0]),
            2 => ring.sub(
                ring.mul(self.get(row, cols[0]), self.get(row + 1, cols[1])),
                ring.mul(self.get(row, cols[1]), self.get(row + 1, cols[0])),
            ),
            _ => {
                let mut acc = ring.zero();
                for (k, &c) in cols.iter().enumerate() {
                    let entry = self.get(row, c);
                    if entry == ring.zero() {
                        continue;
                    }
                    let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                    let term = ring.mul(entry, self.minor_det(ring, row + 1, &rest));
                    acc = if k % 2 == 0 {
                        ring.add(acc, term)
                    } else {
                        ring.sub(acc, term)
                    };
                }
                acc
            }
        }
    }

    pub fn apply(&self, ring: &LocalRing, v: &RingVector) -> Result<RingVector> {
        if v.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: v.dim(),
            });
        }
        let coords = (0..self.n)
            .map(|i| {
                (0..self.n).fold(ring.zero(), |acc, j| {
                    ring.add(acc, ring.mul(self.get(i, j), v.coords()[j]))
                })
            })
            .collect();
        RingVector::new(ring, coords)
    }

    /// Row-major literal: rows separated by `;`, entries by `,`.
    pub fn render(&self, ring: &LocalRing) -> String {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                let row: Vec<String> = (0..self.n).map(|j| ring.render(self.get(i, j))).collect();
                row.join(",")
            })
            .collect();
        rows.join(";")
    }

    pub fn parse(ring: &LocalRing, text: &str) -> Result<Self> {
        let rows = split_top_level(text.trim(), ';');
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            let cells = split_top_level(row, ',');
            if cells.len() != n {
                return Err(Error::literal(text, format!("row {row:?} does not have {n} entries")));
            }
            for cell in cells {
                entries.push(ring.parse_element(cell)?);
            }
        }
        Matrix::new(n, entries)
    }
}

/// A bilinear form given by its associate matrix `B = (β(e_i, e_j))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearForm {
    ring: LocalRing,
    matrix: Matrix,
}

impl BilinearForm {
    pub fn new(ring: &LocalRing, matrix: Matrix) -> Result<Self> {
        if matrix.entries.iter().any(|&a| !ring.contains(a)) {
            return Err(Error::MixedRings);
        }
        Ok(BilinearForm {
            ring: ring.clone(),
            matrix,
        })
    }

    pub fn from_rows(ring: &LocalRing, rows: &[&[i64]]) -> Result<Self> {
        let n = rows.len();
        let entries = rows
            .iter()
            .map(|row| {
                if row.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: row.len(),
                    });
                }
                Ok(row.iter().map(|&c| ring.from_int(c)).collect::<Vec<_>>())
            })
            .collect::<Result<Vec<_>>>()?
            .concat();
        Self::new(ring, Matrix::new(n, entries)?)
    }

    pub fn diagonal(ring: &LocalRing, diag: &[RingElement]) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::UnsupportedDimension(0));
        }
        Self::new(ring, Matrix::diagonal(ring, diag))
    }

    pub fn parse(ring: &LocalRing, text: &str) -> Result<Self> {
        Self::new(ring, Matrix::parse(ring, text)?)
    }

    /// `x₁y₁ − x₂y₂`
    pub fn hyperbolic_plane(ring: &LocalRing) -> Self {
        CanonicalForm::new(2, ring.one()).form(ring)
    }

    /// `x₁y₁ − z·x₂y₂` with `z` the canonical non-square.
    pub fn nonsquare_plane(ring: &LocalRing) -> Self {
        CanonicalForm::new(2, ring.canonical_nonsquare()).form(ring)
    }

    pub fn ring(&self) -> &LocalRing {
        &self.ring
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.n
    }

    pub fn render(&self) -> String {
        self.matrix.render(&self.ring)
    }

    /// `xᵀ B y`
    pub fn evaluate(&self, x: &RingVector, y: &RingVector) -> Result<RingElement> {
        let n = self.dim();
        for v in [x, y] {
            if v.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.dim(),
                });
            }
        }
        Ok(self.evaluate_unchecked(x.coords(), y.coords()))
    }

    pub(crate) fn evaluate_unchecked(&self, x: &[RingElement], y: &[RingElement]) -> RingElement {
        let ring = &self.ring;
        let n = self.dim();
        let mut acc = ring.zero();
        for i in 0..n {
            if x[i] == ring.zero() {
                continue;
            }
            let mut row = ring.zero();
            for j in 0..n {
                row = ring.add(row, ring.mul(self.matrix.get(i, j), y[j]));
            }
            acc = ring.add(acc, ring.mul(x[i], row));
        }
        acc
    }

    pub fn is_symmetric(&self) -> bool {
        self.matrix.is_symmetric()
    }

    pub fn determinant(&self) -> RingElement {
        self.matrix.determinant(&self.ring)
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.ring.is_unit(self.determinant())
    }

    /// `(−1)^(n(n−1)/2) · det B`
    pub fn discriminant(&self) -> RingElement {
        let n = self.dim();
        let det = self.determinant();
        if (n * (n - 1) / 2) % 2 == 1 {
            self.ring.neg(det)
        } else {
            det
        }
    }

    pub fn determinant_class(&self) -> Result<SquareClass> {
        self.ring.square_class(self.determinant()).map_err(degenerate)
    }

    pub fn discriminant_class(&self) -> Result<SquareClass> {
        self.ring.square_class(self.discriminant()).map_err(degenerate)
    }

    /// The form with associate matrix `Pᵀ B P`.
    pub fn transform(&self, p: &CongruenceTransform) -> Result<BilinearForm> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: p.dim(),
            });
        }
        Ok(BilinearForm {
            ring: self.ring.clone(),
            matrix: self.matrix.congruent(&self.ring, &p.matrix),
        })
    }

    fn require_regular(&self) -> Result<()> {
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if !self.is_nondegenerate() {
            return Err(Error::Degenerate);
        }
        Ok(())
    }

    /// Returns `(P, D)` with `D = Pᵀ B P` diagonal and every diagonal entry a unit.
    pub fn diagonalize(&self) -> Result<(CongruenceTransform, BilinearForm)> {
        self.require_regular()?;
        let mut work = Reduction::new(self);
        let ring = &self.ring;
        let n = self.dim();
        for i in 0..n {
            let pivot = match (i..n).find(|&j| ring.is_unit(work.d.get(j, j))) {
                Some(j) => j,
                None => {
                    // All remaining diagonal entries lie in M. Non-degeneracy
                    // puts a unit off the diagonal, and since 2 is a unit,
                    // e_j + e_k has unit length b_jj + 2 b_jk + b_kk.
                    let (j, k) = (i..n)
                        .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
                        .find(|&(j, k)| ring.is_unit(work.d.get(j, k)))
                        .ok_or(Error::Degenerate)?;
                    work.combine(j, ring.one(), k, ring.one());
                    j
                }
            };
            if pivot != i {
                work.swap(i, pivot);
            }
            let d = work.d.get(i, i);
            for l in i + 1..n {
                let c = work.d.get(i, l);
                if c != ring.zero() {
                    // e_l ← c·e_i − d·e_l
                    work.combine(l, ring.neg(d), i, c);
                }
            }
        }
        debug_assert!(work.d.is_diagonal(ring));
        work.finish()
    }

    /// Returns `(P, C)` with `Pᵀ B P` equal to the canonical matrix of `C`.
    pub fn canonicalize(&self) -> Result<(CongruenceTransform, CanonicalForm)> {
        let (p, diag) = self.diagonalize()?;
        let ring = &self.ring;
        let n = self.dim();
        let u = if self.discriminant_class()?.is_square() {
            ring.one()
        } else {
            ring.canonical_nonsquare()
        };
        let canonical = CanonicalForm::new(n, u);
        let target = canonical.diagonal(ring);

        let mut work = Reduction {
            ring: ring.clone(),
            d: diag.matrix.clone(),
            p: p.matrix,
        };
        for i in 0..n.saturating_sub(1) {
            let (a, b, c) = (work.d.get(i, i), work.d.get(i + 1, i + 1), target[i]);
            if a == c {
                continue;
            }
            if let Some(w) = square_ratio(ring, a, c)? {
                work.scale(i, ring.invert(w)?);
                continue;
            }
            // Find x, y with a x² + b y² = c. The pair
            //   e_i' = x e_i + y e_{i+1},  e_{i+1}' = −b y e_i + a x e_{i+1}
            // is orthogonal with lengths c and a b c, and has determinant c.
            let (x, y) = represent(ring, a, b, c)?;
            work.rotate(i, x, y, a, b);
        }
        let last = n - 1;
        let (a, c) = (work.d.get(last, last), target[last]);
        if a != c {
            let w = square_ratio(ring, a, c)?
                .ok_or_else(|| Error::Internal("last diagonal entry left in the wrong square class".into()))?;
            work.scale(last, ring.invert(w)?);
        }
        let (p, reached) = work.finish()?;
        if reached.matrix != Matrix::diagonal(ring, &target) {
            return Err(Error::Internal("canonical reduction did not reach the target".into()));
        }
        Ok((p, canonical))
    }
}

fn degenerate(e: Error) -> Error {
    match e {
        Error::NotAUnit => Error::Degenerate,
        other => other,
    }
}

/// `Some(w)` with `a = c·w²` when `a/c` is a square unit.
fn square_ratio(ring: &LocalRing, a: RingElement, c: RingElement) -> Result<Option<RingElement>> {
    let ratio = ring.mul(a, ring.invert(c)?);
    Ok(ring.square_class(ratio)?.witness)
}

/// Solves `a x² + b y² = c` for units `a, b, c` by scanning `x` in element order.
fn represent(ring: &LocalRing, a: RingElement, b: RingElement, c: RingElement) -> Result<(RingElement, RingElement)> {
    let b_inv = ring.invert(b)?;
    for index in 0..ring.cardinality() {
        let x = ring.element(index)?;
        let rest = ring.mul(ring.sub(c, ring.mul(a, ring.square(x))), b_inv);
        if rest == ring.zero() {
            return Ok((x, ring.zero()));
        }
        if ring.is_unit(rest) {
            if let Some(y) = ring.square_class(rest)?.witness {
                return Ok((x, y));
            }
        }
    }
    Err(Error::Internal(format!(
        "{}·x² + {}·y² = {} has no solution",
        ring.render(a),
        ring.render(b),
        ring.render(c)
    )))
}

/// Congruence reduction state: `d = Pᵀ B P` kept in step with `p`.
struct Reduction {
    ring: LocalRing,
    d: Matrix,
    p: Matrix,
}

impl Reduction {
    fn new(form: &BilinearForm) -> Self {
        Reduction {
            ring: form.ring.clone(),
            d: form.matrix.clone(),
            p: Matrix::identity(&form.ring, form.dim()),
        }
    }

    fn apply(&mut self, step: &Matrix) {
        self.d = self.d.congruent(&self.ring, step);
        self.p = self.p.mul(&self.ring, step);
    }

    /// `e_target ← alpha·e_target + gamma·e_source`
    fn combine(&mut self, target: usize, alpha: RingElement, source: usize, gamma: RingElement) {
        let mut step = Matrix::identity(&self.ring, self.d.n);
        step.set(target, target, alpha);
        step.set(source, target, gamma);
        self.apply(&step);
    }

    fn swap(&mut self, i: usize, j: usize) {
        let ring = &self.ring;
        let mut step = Matrix::identity(ring, self.d.n);
        step.set(i, i, ring.zero());
        step.set(j, j, ring.zero());
        step.set(i, j, ring.one());
        step.set(j, i, ring.one());
        self.apply(&step);
    }

    fn scale(&mut self, i: usize, factor: RingElement) {
        let mut step = Matrix::identity(&self.ring, self.d.n);
        step.set(i, i, factor);
        self.apply(&step);
    }

    fn rotate(&mut self, i: usize, x: RingElement, y: RingElement, a: RingElement, b: RingElement) {
        let ring = &self.ring;
        let mut step = Matrix::identity(ring, self.d.n);
        step.set(i, i, x);
        step.set(i + 1, i, y);
        step.set(i, i + 1, ring.neg(ring.mul(b, y)));
        step.set(i + 1, i + 1, ring.mul(a, x));
        self.apply(&step);
    }

    fn finish(self) -> Result<(CongruenceTransform, BilinearForm)> {
        let p = CongruenceTransform::new(&self.ring, self.p)?;
        Ok((
            p,
            BilinearForm {
                ring: self.ring,
                matrix: self.d,
            },
        ))
    }
}

/// An invertible change of basis `P`; forms transform as `B ↦ Pᵀ B P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceTransform {
    ring: LocalRing,
    matrix: Matrix,
}

impl CongruenceTransform {
    pub fn new(ring: &LocalRing, matrix: Matrix) -> Result<Self> {
        if matrix.entries.iter().any(|&a| !ring.contains(a)) {
            return Err(Error::MixedRings);
        }
        if !ring.is_unit(matrix.determinant(ring)) {
            return Err(Error::NotAUnit);
        }
        Ok(CongruenceTransform {
            ring: ring.clone(),
            matrix,
        })
    }

    pub fn identity(ring: &LocalRing, n: usize) -> Self {
        CongruenceTransform {
            ring: ring.clone(),
            matrix: Matrix::identity(ring, n),
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.n
    }

    pub fn determinant(&self) -> RingElement {
        self.matrix.determinant(&self.ring)
    }

    /// `P·v`. Maps vectors orthogonal for `Pᵀ B P` to vectors orthogonal for `B`.
    pub fn apply(&self, v: &RingVector) -> Result<RingVector> {
        self.matrix.apply(&self.ring, v)
    }

    pub fn render(&self) -> String {
        self.matrix.render(&self.ring)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        })
    }
}

/// The canonical representative of a congruence class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CanonicalForm {
    pub n: usize,
    pub u: RingElement,
    pub parity: Parity,
}

impl CanonicalForm {
    pub fn new(n: usize, u: RingElement) -> Self {
        assert!(n >= 1, "canonical forms need n >= 1");
        let parity = if n.is_multiple_of(2) { Parity::Even } else { Parity::Odd };
        CanonicalForm { n, u, parity }
    }

    /// Diagonal entries: `1, −1, 1, …` with the last slot `−u` (n even) or `u` (n odd).
    pub fn diagonal(&self, ring: &LocalRing) -> Vec<RingElement> {
        let minus_one = ring.neg(ring.one());
        let mut diag: Vec<RingElement> = (0..self.n)
            .map(|i| if i % 2 == 0 { ring.one() } else { minus_one })
            .collect();
        diag[self.n - 1] = match self.parity {
            Parity::Even => ring.neg(self.u),
            Parity::Odd => self.u,
        };
        diag
    }

    pub fn form(&self, ring: &LocalRing) -> BilinearForm {
        BilinearForm {
            ring: ring.clone(),
            matrix: Matrix::diagonal(ring, &self.diagonal(ring)),
        }
    }
}

/// Congruence test via canonical forms.
pub fn are_equivalent(f1: &BilinearForm, f2: &BilinearForm) -> Result<bool> {
    if f1.ring != f2.ring {
        return Err(Error::MixedRings);
    }
    if f1.dim() != f2.dim() {
        return Err(Error::DimensionMismatch {
            expected: f1.dim(),
            found: f2.dim(),
        });
    }
    let (_, c1) = f1.canonicalize()?;
    let (_, c2) = f2.canonicalize()?;
    Ok(c1 == c2)
}
