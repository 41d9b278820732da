//! Finite local rings of odd characteristic.
//!
//! Every supported presentation is realized as
//!
//! ```text
//! R = (Z/p^s)[x]/(f(x)) [t]/(t^e)
//! ```
//!
//! with `f` monic of degree `r` and irreducible modulo `p`. The four ring
//! kinds pick out special cases: `Z_{p^s}` (`r = 1`, `e = 1`), fields
//! `F_p[x]/(f)` (`s = 1`, `e = 1`), chain rings `F_q[t]/(t^e)` (`s = 1`) and
//! Galois rings `GR(p^s, r)` (`e = 1`).
//!
//! An element is a vector of `r·e` coefficients in `[0, p^s)`. Coordinate
//! `j·r + i` holds the coefficient of `x^i t^j`. Elements are stored by their
//! index `Σ c_k (p^s)^k`, so the index order is the lexicographic order on
//! coefficient vectors with coordinate 0 least significant.
//!
//! The maximal ideal is the kernel of the residue map `R → F_p[x]/(f)`,
//! i.e. the elements whose `t^0` block vanishes modulo `p`.

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default refusal threshold for exhaustive operations (3^10).
pub const DEFAULT_ENUMERATION_BOUND: u64 = 59_049;

/// Rings at most this large carry precomputed addition and multiplication tables.
const TABLE_LIMIT: u64 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingKind {
    /// `Z_{p^s}`
    #[serde(rename = "Zps")]
    IntegerModulus,
    /// `F_p[x]/(f)`, a field
    #[serde(rename = "ext")]
    PrimeFieldExtension,
    /// `F_q[t]/(t^e)`
    #[serde(rename = "nilpotent")]
    NilpotentExtension,
    /// `Z_{p^s}[x]/(f)`
    #[serde(rename = "galois")]
    GaloisRing,
}

impl RingKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RingKind::IntegerModulus => "Zps",
            RingKind::PrimeFieldExtension => "ext",
            RingKind::NilpotentExtension => "nilpotent",
            RingKind::GaloisRing => "galois",
        }
    }
}

/// A constructive ring presentation. `modulus` lists coefficients constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSpec {
    pub kind: RingKind,
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<u32>,
}

impl RingSpec {
    pub fn zps(p: u64, s: u32) -> Self {
        RingSpec {
            kind: RingKind::IntegerModulus,
            p,
            s: Some(s),
            modulus: None,
            e: None,
        }
    }

    pub fn extension(p: u64, modulus: Vec<i64>) -> Self {
        RingSpec {
            kind: RingKind::PrimeFieldExtension,
            p,
            s: None,
            modulus: Some(modulus),
            e: None,
        }
    }

    /// `F_q[t]/(t^e)`; without a modulus the coefficient field is `F_p`.
    pub fn nilpotent(p: u64, modulus: Option<Vec<i64>>, e: u32) -> Self {
        RingSpec {
            kind: RingKind::NilpotentExtension,
            p,
            s: None,
            modulus,
            e: Some(e),
        }
    }

    pub fn galois(p: u64, s: u32, modulus: Vec<i64>) -> Self {
        RingSpec {
            kind: RingKind::GaloisRing,
            p,
            s: Some(s),
            modulus: Some(modulus),
            e: None,
        }
    }

    /// Renders the spec as the body of a `[[ring]]` config section, on one line.
    pub fn to_literal(&self) -> String {
        let mut out = format!("kind=\"{}\" p={}", self.kind.as_str(), self.p);
        if let Some(s) = self.s {
            out.push_str(&format!(" s={s}"));
        }
        if let Some(m) = &self.modulus {
            let coeffs: Vec<String> = m.iter().map(|c| c.to_string()).collect();
            out.push_str(&format!(" modulus=[{}]", coeffs.join(",")));
        }
        if let Some(e) = self.e {
            out.push_str(&format!(" e={e}"));
        }
        out
    }
}

/// Normalized parameters: `(Z/m)[x]/(poly) [t]/(t^nil)`, `m = p^s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Presentation {
    p: u64,
    s: u32,
    poly: Vec<u64>,
    nil: u32,
}

impl Presentation {
    fn from_spec(spec: &RingSpec) -> Result<Self> {
        let p = spec.p;
        if p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let invalid = |msg: &str| Err(Error::InvalidSpec(format!("{} ring: {msg}", spec.kind.as_str())));
        let (s, modulus, nil) = match spec.kind {
            RingKind::IntegerModulus => {
                if spec.modulus.is_some() || spec.e.is_some() {
                    return invalid("takes only p and s");
                }
                (spec.s, None, 1)
            }
            RingKind::PrimeFieldExtension => {
                if spec.s.unwrap_or(1) != 1 || spec.e.unwrap_or(1) != 1 {
                    return invalid("takes only p and modulus");
                }
                if spec.modulus.is_none() {
                    return invalid("modulus is required");
                }
                (Some(1), spec.modulus.as_deref(), 1)
            }
            RingKind::NilpotentExtension => {
                if spec.s.unwrap_or(1) != 1 {
                    return invalid("s must be 1");
                }
                let Some(e) = spec.e else {
                    return invalid("e is required");
                };
                (Some(1), spec.modulus.as_deref(), e)
            }
            RingKind::GaloisRing => {
                if spec.e.unwrap_or(1) != 1 {
                    return invalid("e must be 1");
                }
                if spec.modulus.is_none() {
                    return invalid("modulus is required");
                }
                (spec.s, spec.modulus.as_deref(), 1)
            }
        };
        let Some(s) = s else {
            return invalid("s is required");
        };
        if s == 0 || nil == 0 {
            return invalid("s and e must be at least 1");
        }
        let m = checked_pow(p, s)
            .filter(|&m| m < 1 << 31)
            .ok_or_else(|| Error::InvalidSpec(format!("characteristic {p}^{s} is too large")))?;
        let poly = match modulus {
            None => vec![0, 1],
            Some(coeffs) => {
                if coeffs.len() < 2 {
                    return invalid("modulus must have degree at least 1");
                }
                let reduced: Vec<u64> = coeffs.iter().map(|&c| c.rem_euclid(m as i64) as u64).collect();
                if *reduced.last().unwrap() != 1 {
                    return invalid("modulus must be monic");
                }
                reduced
            }
        };
        let pres = Presentation { p, s, poly, nil };
        let width = pres.degree() as u32 * nil;
        if checked_pow(m, width).is_none() {
            return Err(Error::InvalidSpec("ring cardinality overflows 64 bits".into()));
        }
        if matches!(spec.kind, RingKind::PrimeFieldExtension | RingKind::GaloisRing) {
            let reduced: Vec<u64> = pres.poly.iter().map(|c| c % p).collect();
            if !is_irreducible_mod_p(&reduced, p) {
                return Err(Error::ReducibleModulus { p });
            }
        }
        Ok(pres)
    }

    fn degree(&self) -> usize {
        self.poly.len() - 1
    }
}

/// Identity of a ring, derived deterministically from its normalized presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingId(u64);

impl RingId {
    fn of(pres: &Presentation) -> Self {
        // FNV-1a so the id is stable across runs and platforms.
        struct Fnv(u64);
        impl Hasher for Fnv {
            fn finish(&self) -> u64 {
                self.0
            }
            fn write(&mut self, bytes: &[u8]) {
                for b in bytes {
                    self.0 ^= u64::from(*b);
                    self.0 = self.0.wrapping_mul(0x100_0000_01b3);
                }
            }
        }
        let mut h = Fnv(0xcbf2_9ce4_8422_2325);
        pres.hash(&mut h);
        RingId(h.finish())
    }
}

/// One element of a [`LocalRing`], identified by its position in the element order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElement {
    ring: RingId,
    index: u64,
}

impl RingElement {
    /// Position in the ring's element order.
    pub fn index(self) -> u64 {
        self.index
    }

    pub fn ring_id(self) -> RingId {
        self.ring
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SquareTag {
    #[serde(rename = "square")]
    Square,
    #[serde(rename = "non-square")]
    NonSquare,
}

impl fmt::Display for SquareTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SquareTag::Square => "square",
            SquareTag::NonSquare => "non-square",
        })
    }
}

/// Square class of a unit. `witness` is present exactly for squares.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SquareClass {
    pub tag: SquareTag,
    pub witness: Option<RingElement>,
}

impl SquareClass {
    pub fn is_square(&self) -> bool {
        self.tag == SquareTag::Square
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    All,
    Units,
    MaximalIdeal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Neg,
}

struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
}

struct RingData {
    spec: RingSpec,
    pres: Presentation,
    id: RingId,
    modulus: u64,
    width: usize,
    cardinality: u64,
    residue_order: u64,
    max_ideal_size: u64,
    bound: u64,
    label: String,
    tables: Option<Tables>,
    residue_field: OnceLock<Option<LocalRing>>,
    nonsquare: OnceLock<RingElement>,
}

/// A finite local ring of odd characteristic. Cloning is cheap.
#[derive(Clone)]
pub struct LocalRing(Arc<RingData>);

impl fmt::Debug for LocalRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LocalRing")
            .field("label", &self.0.label)
            .field("cardinality", &self.0.cardinality)
            .field("maximal_ideal_size", &self.0.max_ideal_size)
            .finish()
    }
}

impl PartialEq for LocalRing {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id && self.0.pres == other.0.pres
    }
}

impl Eq for LocalRing {}

/// Builds a ring with the default enumeration bound.
pub fn construct_ring(spec: &RingSpec) -> Result<LocalRing> {
    LocalRing::new(spec)
}

impl LocalRing {
    pub fn new(spec: &RingSpec) -> Result<Self> {
        Self::with_bound(spec, DEFAULT_ENUMERATION_BOUND)
    }

    /// Builds a ring; locality is verified exhaustively when `|R| <= bound`.
    pub fn with_bound(spec: &RingSpec, bound: u64) -> Result<Self> {
        let pres = Presentation::from_spec(spec)?;
        let modulus = pres.p.pow(pres.s);
        let r = pres.degree();
        let width = r * pres.nil as usize;
        let cardinality = modulus.pow(width as u32);
        let residue_order = pres.p.pow(r as u32);
        let label = ring_label(spec, &pres);
        let ring = LocalRing(Arc::new(RingData {
            spec: spec.clone(),
            id: RingId::of(&pres),
            pres,
            modulus,
            width,
            cardinality,
            residue_order,
            max_ideal_size: cardinality / residue_order,
            bound,
            label,
            tables: None,
            residue_field: OnceLock::new(),
            nonsquare: OnceLock::new(),
        }));
        let ring = if cardinality <= TABLE_LIMIT {
            let tables = ring.build_tables();
            let mut data = Arc::try_unwrap(ring.0).ok().expect("fresh ring is uniquely owned");
            data.tables = Some(tables);
            LocalRing(Arc::new(data))
        } else {
            ring
        };
        if cardinality <= bound {
            ring.verify_locality()?;
        } else if spec.kind == RingKind::NilpotentExtension {
            // Too large to check exhaustively; fall back to the residue ring being a field.
            let p = ring.0.pres.p;
            let reduced: Vec<u64> = ring.0.pres.poly.iter().map(|c| c % p).collect();
            if !is_irreducible_mod_p(&reduced, p) {
                return Err(Error::NotLocal("coefficient modulus is reducible".into()));
            }
        }
        Ok(ring)
    }

    /// Raw addition and multiplication tables indexed by `a·|R| + b`, when present.
    pub(crate) fn op_tables(&self) -> Option<(&[u32], &[u32])> {
        self.0.tables.as_ref().map(|t| (t.add.as_slice(), t.mul.as_slice()))
    }

    fn build_tables(&self) -> Tables {
        let n = self.0.cardinality;
        let mut add = Vec::with_capacity((n * n) as usize);
        let mut mul = Vec::with_capacity((n * n) as usize);
        for a in 0..n {
            let ca = self.decode(a);
            for b in 0..n {
                let cb = self.decode(b);
                add.push(self.encode(&self.add_coeffs(&ca, &cb)) as u32);
                mul.push(self.encode(&self.mul_coeffs(&ca, &cb)) as u32);
            }
        }
        Tables { add, mul }
    }

    /// Every element outside the maximal ideal must be invertible. The
    /// candidate ideal is a kernel, so it is closed under the ring operations;
    /// what can fail is a reducible residue ring producing extra zero divisors.
    fn verify_locality(&self) -> Result<()> {
        let order = self.0.cardinality - self.0.max_ideal_size;
        let one = self.one();
        for index in 0..self.0.cardinality {
            let a = self.at(index);
            if self.in_maximal_ideal(a) {
                continue;
            }
            if self.pow(a, order) != one {
                return Err(Error::NotLocal(format!(
                    "{} lies outside the candidate maximal ideal but is not a unit",
                    self.render(a)
                )));
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> &RingSpec {
        &self.0.spec
    }

    pub fn id(&self) -> RingId {
        self.0.id
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    pub fn cardinality(&self) -> u64 {
        self.0.cardinality
    }

    pub fn characteristic(&self) -> u64 {
        self.0.modulus
    }

    pub fn prime(&self) -> u64 {
        self.0.pres.p
    }

    pub fn maximal_ideal_size(&self) -> u64 {
        self.0.max_ideal_size
    }

    pub fn unit_count(&self) -> u64 {
        self.0.cardinality - self.0.max_ideal_size
    }

    pub fn residue_field_order(&self) -> u64 {
        self.0.residue_order
    }

    pub fn enumeration_bound(&self) -> u64 {
        self.0.bound
    }

    pub fn is_field(&self) -> bool {
        self.0.max_ideal_size == 1
    }

    /// Number of coefficients per element.
    pub fn width(&self) -> usize {
        self.0.width
    }

    /// Refuses exhaustive work over `size` items when it exceeds the bound.
    pub fn check_bound(&self, what: &str, size: u128) -> Result<()> {
        if size > u128::from(self.0.bound) {
            return Err(Error::TooLarge {
                what: what.to_owned(),
                size,
                bound: self.0.bound,
            });
        }
        Ok(())
    }

    // ---- element construction ------------------------------------------

    fn at(&self, index: u64) -> RingElement {
        debug_assert!(index < self.0.cardinality);
        RingElement { ring: self.0.id, index }
    }

    pub fn zero(&self) -> RingElement {
        self.at(0)
    }

    pub fn one(&self) -> RingElement {
        self.at(1)
    }

    pub fn element(&self, index: u64) -> Result<RingElement> {
        if index >= self.0.cardinality {
            return Err(Error::InvalidSpec(format!(
                "index {index} out of range for {}",
                self.label()
            )));
        }
        Ok(self.at(index))
    }

    /// The image of an integer under `Z → R`.
    pub fn from_int(&self, n: i64) -> RingElement {
        let m = self.0.modulus as i64;
        self.at(n.rem_euclid(m) as u64)
    }

    /// Builds an element from coefficients (reduced modulo the characteristic).
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<RingElement> {
        if coeffs.len() != self.0.width {
            return Err(Error::DimensionMismatch {
                expected: self.0.width,
                found: coeffs.len(),
            });
        }
        let m = self.0.modulus as i64;
        let reduced: Vec<u64> = coeffs.iter().map(|c| c.rem_euclid(m) as u64).collect();
        Ok(self.at(self.encode(&reduced)))
    }

    /// The canonical coefficient vector of `a`.
    pub fn coeffs(&self, a: RingElement) -> Vec<u64> {
        self.check(a);
        self.decode(a.index)
    }

    pub fn contains(&self, a: RingElement) -> bool {
        a.ring == self.0.id && a.index < self.0.cardinality
    }

    fn check(&self, a: RingElement) {
        assert!(self.contains(a), "element does not belong to {}", self.label());
    }

    fn decode(&self, mut index: u64) -> Vec<u64> {
        let m = self.0.modulus;
        let mut out = vec![0; self.0.width];
        for c in out.iter_mut() {
            *c = index % m;
            index /= m;
        }
        out
    }

    fn encode(&self, coeffs: &[u64]) -> u64 {
        let m = self.0.modulus;
        coeffs.iter().rev().fold(0, |acc, &c| acc * m + c)
    }

    // ---- arithmetic -------------------------------------------------------

    /// Checked arithmetic entry point: rejects operands from other rings.
    /// `b` is ignored for [`ArithOp::Neg`].
    pub fn arith(&self, op: ArithOp, a: RingElement, b: RingElement) -> Result<RingElement> {
        if !self.contains(a) || (op != ArithOp::Neg && !self.contains(b)) {
            return Err(Error::MixedRings);
        }
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Neg => self.neg(a),
        })
    }

    /// # Panics
    /// If either operand belongs to another ring.
    pub fn add(&self, a: RingElement, b: RingElement) -> RingElement {
        self.check(a);
        self.check(b);
        if let Some(t) = &self.0.tables {
            return self.at(u64::from(t.add[(a.index * self.0.cardinality + b.index) as usize]));
        }
        let c = self.add_coeffs(&self.decode(a.index), &self.decode(b.index));
        self.at(self.encode(&c))
    }

    pub fn neg(&self, a: RingElement) -> RingElement {
        self.check(a);
        let m = self.0.modulus;
        let c: Vec<u64> = self.decode(a.index).iter().map(|&x| (m - x) % m).collect();
        self.at(self.encode(&c))
    }

    pub fn sub(&self, a: RingElement, b: RingElement) -> RingElement {
        self.add(a, self.neg(b))
    }

    /// # Panics
    /// If either operand belongs to another ring.
    pub fn mul(&self, a: RingElement, b: RingElement) -> RingElement {
        self.check(a);
        self.check(b);
        if let Some(t) = &self.0.tables {
            return self.at(u64::from(t.mul[(a.index * self.0.cardinality + b.index) as usize]));
        }
        let c = self.mul_coeffs(&self.decode(a.index), &self.decode(b.index));
        self.at(self.encode(&c))
    }

    pub fn square(&self, a: RingElement) -> RingElement {
        self.mul(a, a)
    }

    pub fn pow(&self, a: RingElement, mut exp: u64) -> RingElement {
        let mut base = a;
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    fn add_coeffs(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let m = self.0.modulus;
        a.iter().zip(b).map(|(x, y)| (x + y) % m).collect()
    }

    fn mul_coeffs(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let r = self.0.pres.degree();
        let e = self.0.pres.nil as usize;
        let mut out = vec![0; self.0.width];
        for j1 in 0..e {
            let block_a = &a[j1 * r..(j1 + 1) * r];
            if block_a.iter().all(|&c| c == 0) {
                continue;
            }
            for j2 in 0..e - j1 {
                let block_b = &b[j2 * r..(j2 + 1) * r];
                let prod = self.poly_mul_mod(block_a, block_b);
                let dst = &mut out[(j1 + j2) * r..(j1 + j2 + 1) * r];
                for (d, p) in dst.iter_mut().zip(prod) {
                    *d = (*d + p) % self.0.modulus;
                }
            }
        }
        out
    }

    /// Product of two degree-`< r` polynomials over `Z/m`, reduced modulo `f`.
    fn poly_mul_mod(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let m = self.0.modulus;
        let f = &self.0.pres.poly;
        let r = f.len() - 1;
        let mut tmp = vec![0u64; 2 * r - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                tmp[i + j] = (tmp[i + j] + x * y) % m;
            }
        }
        for d in (r..tmp.len()).rev() {
            let lead = tmp[d];
            if lead == 0 {
                continue;
            }
            // x^d = -x^(d-r) (f_0 + ... + f_{r-1} x^{r-1})
            for i in 0..r {
                let k = d - r + i;
                tmp[k] = (tmp[k] + (m - lead * f[i] % m)) % m;
            }
            tmp[d] = 0;
        }
        tmp.truncate(r);
        tmp
    }

    // ---- units and ideal ----------------------------------------------------

    /// Residue image vanishes, i.e. `a ∈ M`.
    fn in_maximal_ideal(&self, a: RingElement) -> bool {
        let p = self.0.pres.p;
        let r = self.0.pres.degree();
        self.decode(a.index)[..r].iter().all(|c| c % p == 0)
    }

    pub fn is_unit(&self, a: RingElement) -> bool {
        self.check(a);
        !self.in_maximal_ideal(a)
    }

    pub fn invert(&self, a: RingElement) -> Result<RingElement> {
        if !self.contains(a) {
            return Err(Error::MixedRings);
        }
        if !self.is_unit(a) {
            return Err(Error::NotAUnit);
        }
        // The unit group has order |R| - |M|.
        let inv = self.pow(a, self.unit_count() - 1);
        debug_assert_eq!(self.mul(a, inv), self.one());
        Ok(inv)
    }

    pub fn enumerate(&self, which: Which) -> Result<Vec<RingElement>> {
        self.check_bound(&format!("ring {}", self.label()), u128::from(self.0.cardinality))?;
        let all = (0..self.0.cardinality).map(|i| self.at(i));
        Ok(match which {
            Which::All => all.collect(),
            Which::Units => all.filter(|&a| !self.in_maximal_ideal(a)).collect(),
            Which::MaximalIdeal => all.filter(|&a| self.in_maximal_ideal(a)).collect(),
        })
    }

    pub fn units(&self) -> Result<Vec<RingElement>> {
        self.enumerate(Which::Units)
    }

    /// `R/M` as a ring of its own; `None` when `R` is already a field.
    pub fn residue_field(&self) -> Option<&LocalRing> {
        self.0
            .residue_field
            .get_or_init(|| {
                if self.is_field() {
                    return None;
                }
                let p = self.0.pres.p;
                let modulus: Vec<i64> = self.0.pres.poly.iter().map(|&c| (c % p) as i64).collect();
                let spec = RingSpec::extension(p, modulus);
                Some(LocalRing::with_bound(&spec, self.0.bound).expect("residue field of a valid ring"))
            })
            .as_ref()
    }

    /// Image of `a` under `R → R/M`.
    pub fn residue(&self, a: RingElement) -> RingElement {
        self.check(a);
        match self.residue_field() {
            None => a,
            Some(field) => {
                let p = self.0.pres.p;
                let r = self.0.pres.degree();
                let block: Vec<i64> = self.decode(a.index)[..r].iter().map(|&c| (c % p) as i64).collect();
                field.from_coeffs(&block).expect("residue block has the field's width")
            }
        }
    }

    /// Elements of `R` whose residue is `image`, in element order.
    pub fn fiber(&self, image: RingElement) -> Result<Vec<RingElement>> {
        self.check_bound(&format!("fiber in {}", self.label()), u128::from(self.0.max_ideal_size))?;
        let Some(field) = self.residue_field() else {
            return Ok(vec![image]);
        };
        let base = field.coeffs(image);
        let ideal = self.ideal_elements();
        let lift = {
            let mut c = vec![0i64; self.0.width];
            for (dst, &b) in c.iter_mut().zip(&base) {
                *dst = b as i64;
            }
            self.from_coeffs(&c)?
        };
        let mut out: Vec<RingElement> = ideal.map(|m| self.add(lift, m)).collect();
        out.sort();
        Ok(out)
    }

    /// All of `M`, generated directly rather than by filtering `R`.
    fn ideal_elements(&self) -> impl Iterator<Item = RingElement> + '_ {
        let p = self.0.pres.p;
        let m = self.0.modulus;
        let r = self.0.pres.degree();
        let width = self.0.width;
        // t^0 block ranges over p·(Z/m), the rest over Z/m.
        let low = m / p;
        let total = self.0.max_ideal_size;
        (0..total).map(move |mut k| {
            let mut coeffs = vec![0u64; width];
            for (i, c) in coeffs.iter_mut().enumerate() {
                let radix = if i < r { low } else { m };
                let digit = k % radix;
                k /= radix;
                *c = if i < r { digit * p } else { digit };
            }
            self.at(self.encode(&coeffs))
        })
    }

    // ---- square classes ----------------------------------------------------

    /// Squareness via the residue field (Euler's criterion), with a square
    /// root found by searching the fibers over the residue root.
    pub fn square_class(&self, a: RingElement) -> Result<SquareClass> {
        if !self.contains(a) {
            return Err(Error::MixedRings);
        }
        if !self.is_unit(a) {
            return Err(Error::NotAUnit);
        }
        let (field, image) = match self.residue_field() {
            Some(f) => (f, self.residue(a)),
            None => (self, a),
        };
        let q = field.cardinality();
        if field.pow(image, (q - 1) / 2) != field.one() {
            return Ok(SquareClass {
                tag: SquareTag::NonSquare,
                witness: None,
            });
        }
        let root = (1..q)
            .map(|i| field.at(i))
            .find(|&t| field.square(t) == image)
            .ok_or_else(|| Error::Internal(format!("no residue square root for {}", self.render(a))))?;
        let witness = if std::ptr::eq(field, self) {
            Some(root)
        } else {
            let neg = field.neg(root);
            let mut found = None;
            for r in [root, neg] {
                if let Some(t) = self.fiber(r)?.into_iter().find(|&t| self.square(t) == a) {
                    found = Some(t);
                    break;
                }
            }
            found
        };
        match witness {
            Some(w) => Ok(SquareClass {
                tag: SquareTag::Square,
                witness: Some(w),
            }),
            None => Err(Error::Internal(format!(
                "residue criterion says {} is a square but no root lifts",
                self.render(a)
            ))),
        }
    }

    pub fn is_square_unit(&self, a: RingElement) -> Result<bool> {
        Ok(self.square_class(a)?.is_square())
    }

    /// The first non-square unit in element order.
    ///
    /// # Panics
    /// If the unit group has no non-squares, which cannot happen in odd characteristic.
    pub fn canonical_nonsquare(&self) -> RingElement {
        *self.0.nonsquare.get_or_init(|| {
            (1..self.0.cardinality)
                .map(|i| self.at(i))
                .filter(|&a| !self.in_maximal_ideal(a))
                .find(|&a| matches!(self.square_class(a), Ok(c) if !c.is_square()))
                .expect("odd-characteristic local rings have non-square units")
        })
    }

    // ---- literals ------------------------------------------------------------

    /// Canonical rendering: a bare integer for width 1, otherwise coefficient
    /// tuples, innermost (x-coefficients) first, no spaces.
    pub fn render(&self, a: RingElement) -> String {
        self.check(a);
        let c = self.decode(a.index);
        let r = self.0.pres.degree();
        let e = self.0.pres.nil as usize;
        let tuple = |xs: &[u64]| {
            let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
            format!("({})", parts.join(","))
        };
        match (r, e) {
            (1, 1) => c[0].to_string(),
            (_, 1) | (1, _) => tuple(&c),
            _ => {
                let blocks: Vec<String> = c.chunks(r).map(tuple).collect();
                format!("({})", blocks.join(","))
            }
        }
    }

    /// Parses an element literal: a (possibly negative) integer, or the
    /// nested coefficient tuple produced by [`LocalRing::render`].
    pub fn parse_element(&self, text: &str) -> Result<RingElement> {
        let literal = Literal::parse(text)?;
        let r = self.0.pres.degree();
        let e = self.0.pres.nil as usize;
        match literal {
            Literal::Int(n) => Ok(self.from_int(n)),
            Literal::Tuple(items) => {
                let flat: Option<Vec<i64>> = match (r, e) {
                    (1, 1) => None,
                    (_, 1) | (1, _) => items.iter().map(Literal::as_int).collect(),
                    _ => {
                        if items.len() != e {
                            None
                        } else {
                            let mut out = Vec::with_capacity(r * e);
                            let mut ok = true;
                            for item in &items {
                                match item {
                                    Literal::Tuple(inner) if inner.len() == r => {
                                        for x in inner {
                                            match x.as_int() {
                                                Some(v) => out.push(v),
                                                None => ok = false,
                                            }
                                        }
                                    }
                                    _ => ok = false,
                                }
                            }
                            ok.then_some(out)
                        }
                    }
                };
                match flat {
                    Some(coeffs) if coeffs.len() == self.0.width => self.from_coeffs(&coeffs),
                    _ => Err(Error::literal(
                        text,
                        format!("does not match the element shape of {}", self.label()),
                    )),
                }
            }
        }
    }

    /// Exhaustive set of unit squares. Test and report support.
    pub fn unit_squares(&self) -> Result<HashSet<RingElement>> {
        Ok(self.units()?.into_iter().map(|u| self.square(u)).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Literal {
    Int(i64),
    Tuple(Vec<Literal>),
}

impl Literal {
    fn as_int(&self) -> Option<i64> {
        match self {
            Literal::Int(n) => Some(*n),
            Literal::Tuple(_) => None,
        }
    }

    fn parse(text: &str) -> Result<Literal> {
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let lit = Self::parse_at(&chars, &mut pos).map_err(|m| Error::literal(text, m))?;
        if pos != chars.len() {
            return Err(Error::literal(text, format!("trailing input at {pos}")));
        }
        Ok(lit)
    }

    fn parse_at(chars: &[char], pos: &mut usize) -> std::result::Result<Literal, String> {
        match chars.get(*pos) {
            Some('(') => {
                *pos += 1;
                let mut items = vec![Self::parse_at(chars, pos)?];
                loop {
                    match chars.get(*pos) {
                        Some(',') => {
                            *pos += 1;
                            items.push(Self::parse_at(chars, pos)?);
                        }
                        Some(')') => {
                            *pos += 1;
                            return Ok(Literal::Tuple(items));
                        }
                        other => return Err(format!("expected ',' or ')', found {other:?}")),
                    }
                }
            }
            Some(_) => {
                let start = *pos;
                if chars[*pos] == '-' || chars[*pos] == '+' {
                    *pos += 1;
                }
                while chars.get(*pos).is_some_and(|c| c.is_ascii_digit()) {
                    *pos += 1;
                }
                let s: String = chars[start..*pos].iter().collect();
                s.parse::<i64>()
                    .map(Literal::Int)
                    .map_err(|_| format!("bad integer {s:?}"))
            }
            None => Err("unexpected end of input".into()),
        }
    }
}

fn ring_label(spec: &RingSpec, pres: &Presentation) -> String {
    let m = pres.p.pow(pres.s);
    let q = pres.p.pow(pres.degree() as u32);
    match spec.kind {
        RingKind::IntegerModulus => format!("Z{m}"),
        RingKind::PrimeFieldExtension => format!("F{q}"),
        RingKind::NilpotentExtension => format!("F{q}[t]/(t^{})", pres.nil),
        RingKind::GaloisRing => format!("GR({m},{})", pres.degree()),
    }
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Trial division by every monic polynomial of degree `1..=deg/2` over `F_p`.
fn is_irreducible_mod_p(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if f[n].is_multiple_of(p) {
        return false;
    }
    for d in 1..=n / 2 {
        let count = p.pow(d as u32);
        for k in 0..count {
            let mut g = vec![0u64; d + 1];
            let mut rest = k;
            for c in g.iter_mut().take(d) {
                *c = rest % p;
                rest /= p;
            }
            g[d] = 1;
            if poly_rem_is_zero(f, &g, p) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(f: &[u64], g: &[u64], p: u64) -> bool {
    let mut rem: Vec<u64> = f.iter().map(|c| c % p).collect();
    let dg = g.len() - 1;
    // g is monic
    for d in (dg..rem.len()).rev() {
        let lead = rem[d];
        if lead == 0 {
            continue;
        }
        for i in 0..=dg {
            let k = d - dg + i;
            rem[k] = (rem[k] + p - lead * g[i] % p) % p;
        }
    }
    rem[..dg].iter().all(|&c| c == 0)
}
