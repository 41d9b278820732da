//! Vectors over a local ring and the unimodularity predicate.

use crate::error::{Error, Result};
use crate::ring::{LocalRing, RingElement};

/// A vector in `R^n`. Ordering is lexicographic in the coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingVector {
    coords: Vec<RingElement>,
}

impl RingVector {
    pub fn new(ring: &LocalRing, coords: Vec<RingElement>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::UnsupportedDimension(0));
        }
        if coords.iter().any(|&c| !ring.contains(c)) {
            return Err(Error::MixedRings);
        }
        Ok(RingVector { coords })
    }

    /// Shorthand for vectors with integer coordinates.
    pub fn from_ints(ring: &LocalRing, coords: &[i64]) -> Self {
        RingVector {
            coords: coords.iter().map(|&c| ring.from_int(c)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[RingElement] {
        &self.coords
    }

    pub fn scale(&self, ring: &LocalRing, c: RingElement) -> RingVector {
        RingVector {
            coords: self.coords.iter().map(|&x| ring.mul(c, x)).collect(),
        }
    }

    pub fn render(&self, ring: &LocalRing) -> String {
        let parts: Vec<String> = self.coords.iter().map(|&c| ring.render(c)).collect();
        format!("({})", parts.join(","))
    }

    /// Parses `(a,b,...)` where each entry is an element literal.
    pub fn parse(ring: &LocalRing, text: &str) -> Result<Self> {
        let trimmed = text.trim();
        let inner = trimmed
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::literal(text, "vector literal must be parenthesized"))?;
        let coords = split_top_level(inner, ',')
            .into_iter()
            .map(|part| ring.parse_element(part))
            .collect::<Result<Vec<_>>>()?;
        RingVector::new(ring, coords)
    }
}

/// Splits on `sep` outside of parentheses.
pub(crate) fn split_top_level(text: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(text[start..i].trim());
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(text[start..].trim());
    out
}

/// Over a local ring a vector is unimodular iff some coordinate is a unit.
pub fn is_unimodular(ring: &LocalRing, v: &RingVector) -> bool {
    v.coords.iter().any(|&c| ring.is_unit(c))
}

/// All unimodular vectors of `R^n` in lexicographic order.
pub fn enumerate_unimodular(ring: &LocalRing, n: usize) -> Result<Vec<RingVector>> {
    if n == 0 {
        return Err(Error::UnsupportedDimension(0));
    }
    let card = ring.cardinality();
    let total = u128::from(card).checked_pow(n as u32).unwrap_or(u128::MAX);
    ring.check_bound(&format!("{}^{n}", ring.label()), total)?;
    let elements: Vec<RingElement> = (0..card).map(|i| ring.element(i)).collect::<Result<_>>()?;
    let unit: Vec<bool> = elements.iter().map(|&a| ring.is_unit(a)).collect();
    let mut out = Vec::new();
    let mut digits = vec![0usize; n];
    loop {
        if digits.iter().any(|&d| unit[d]) {
            out.push(RingVector {
                coords: digits.iter().map(|&d| elements[d]).collect(),
            });
        }
        // odometer, last coordinate fastest
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < card as usize {
                break;
            }
            digits[pos] = 0;
        }
    }
}
