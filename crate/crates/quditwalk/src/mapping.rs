//! Position ↔ digit-string encodings.
//!
//! Odd radices use a balanced base-d code, even radices a staircase code in
//! which digit `k ≥ 1` ticks every `(d/2)·d^(k−1)` positions. The binary and
//! naive ternary encodings have no generator and come from stored tables.
//!
//! Digit strings are written most significant first, so `digits.last()` is
//! the least significant qudit (LSQ).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::golden;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Primary,
    Alternative,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Primary => "primary",
            Variant::Alternative => "alternative",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "primary" => Ok(Variant::Primary),
            "alternative" | "alt" => Ok(Variant::Alternative),
            _ => domain(format!("unknown variant {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    OddBalanced,
    EvenStaircase,
    BinaryTable,
    NaiveTable,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::OddBalanced => "odd-balanced",
            Scheme::EvenStaircase => "even-staircase",
            Scheme::BinaryTable => "binary-table",
            Scheme::NaiveTable => "naive-table",
        }
    }
}

/// Sign of the balanced code that reproduces the primary tables for `d`.
///
/// The ternary tables run the other way round from the 5-ary and 7-ary ones.
pub fn primary_sign(d: usize) -> i64 {
    if d == 3 {
        -1
    } else {
        1
    }
}

/// `⌊d^n / 2⌋`, or `None` on overflow.
pub fn capacity(d: usize, n: usize) -> Option<i64> {
    let mut p: i64 = 1;
    for _ in 0..n {
        p = p.checked_mul(d as i64)?;
    }
    Some(p / 2)
}

fn checked_capacity(d: usize, n: usize) -> Result<i64> {
    if n == 0 {
        return domain("need at least one digit");
    }
    capacity(d, n).ok_or_else(|| Error::Range(format!("{d}^{n} overflows")))
}

/// Balanced base-d code of `sign·x`, most significant digit first.
pub fn encode_odd(x: i64, d: usize, n: usize, sign: i64) -> Result<Vec<usize>> {
    if d < 3 || d % 2 == 0 {
        return domain(format!("balanced code needs an odd radix ≥ 3, got {d}"));
    }
    if sign != 1 && sign != -1 {
        return domain("sign must be ±1");
    }
    let cap = checked_capacity(d, n)?;
    if x.abs() > cap {
        return Err(Error::Range(format!("|{x}| exceeds capacity {cap} of {n} digits in base {d}")));
    }
    let di = d as i64;
    let half = (di - 1) / 2;
    let mut y = sign * x;
    let mut out = vec![0; n];
    for k in (0..n).rev() {
        out[k] = y.rem_euclid(di) as usize;
        y = (y + half).div_euclid(di);
    }
    Ok(out)
}

/// Staircase code for even `d`.
///
/// Bijective on `[−(S−1), S]` with `S = d^n/2`; `−S` would collide with the
/// origin's all-zero code and is rejected.
pub fn encode_even(x: i64, d: usize, n: usize, variant: Variant) -> Result<Vec<usize>> {
    if d < 4 || d % 2 == 1 {
        return domain(format!("staircase code needs an even radix ≥ 4, got {d}"));
    }
    let cap = checked_capacity(d, n)?;
    let x = match variant {
        Variant::Primary => x,
        Variant::Alternative => -x,
    };
    if x > cap || x < -(cap - 1) {
        return Err(Error::Range(format!(
            "{x} outside [{}, {cap}] for {n} digits in base {d}",
            -(cap - 1)
        )));
    }
    let di = d as i64;
    let mut out = vec![0; n];
    out[n - 1] = x.rem_euclid(di) as usize;
    let mut t = di / 2;
    let pos = i64::from(x >= 1);
    for k in (0..n - 1).rev() {
        let c = ceil_div(x, t) - pos;
        out[k] = c.rem_euclid(di) as usize;
        t *= di;
    }
    Ok(out)
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

/// A finite bijection between positions and digit strings.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionMapping {
    pub d: usize,
    pub n_digits: usize,
    pub variant: Variant,
    pub scheme: Scheme,
    /// Balanced-code sign for odd radices, 0 otherwise.
    pub sign: i64,
    forward: BTreeMap<i64, Vec<usize>>,
    inverse: BTreeMap<Vec<usize>, i64>,
}

impl PositionMapping {
    fn from_pairs(
        d: usize,
        n_digits: usize,
        variant: Variant,
        scheme: Scheme,
        sign: i64,
        pairs: impl IntoIterator<Item = (i64, Vec<usize>)>,
    ) -> Result<Self> {
        let mut forward = BTreeMap::new();
        let mut inverse = BTreeMap::new();
        for (x, code) in pairs {
            if code.len() != n_digits || code.iter().any(|&c| c >= d) {
                return domain(format!("bad code {code:?} for x = {x}"));
            }
            if let Some(prev) = inverse.insert(code.clone(), x) {
                return domain(format!("code {code:?} used by both {prev} and {x}"));
            }
            if forward.insert(x, code).is_some() {
                return domain(format!("position {x} listed twice"));
            }
        }
        Ok(Self { d, n_digits, variant, scheme, sign, forward, inverse })
    }

    /// Generated nearest-neighbour mapping for `d ≥ 3`.
    pub fn generated(d: usize, n: usize, variant: Variant) -> Result<Self> {
        let cap = checked_capacity(d, n)?;
        if d.checked_pow(n as u32).map_or(true, |v| v > crate::state::MAX_DIMENSION) {
            return Err(Error::Range(format!("{d}^{n} codes is too many to tabulate")));
        }
        if d % 2 == 1 {
            let sign = match variant {
                Variant::Primary => primary_sign(d),
                Variant::Alternative => -primary_sign(d),
            };
            let pairs = (-cap..=cap).map(|x| (x, encode_odd(x, d, n, sign).unwrap()));
            Self::from_pairs(d, n, variant, Scheme::OddBalanced, sign, pairs)
        } else if d >= 4 {
            let (lo, hi) = match variant {
                Variant::Primary => (-(cap - 1), cap),
                Variant::Alternative => (-cap, cap - 1),
            };
            let pairs = (lo..=hi).map(|x| (x, encode_even(x, d, n, variant).unwrap()));
            Self::from_pairs(d, n, variant, Scheme::EvenStaircase, 0, pairs)
        } else {
            Err(Error::Unsupported("binary positions come from the stored table; use binary_mapping".into()))
        }
    }

    /// Builds a mapping from a stored table.
    pub fn from_table(table: &golden::GoldenTable, scheme: Scheme) -> Result<Self> {
        let variant = table.variant.parse()?;
        Self::from_pairs(
            table.d,
            table.n_digits,
            variant,
            scheme,
            0,
            table.entries.iter().map(|e| (e.x, e.digits.clone())),
        )
    }

    pub fn encode(&self, x: i64) -> Result<&[usize]> {
        self.forward.get(&x).map(|v| v.as_slice()).ok_or_else(|| {
            Error::Range(format!(
                "position {x} outside mapped range [{}, {}]",
                self.min_position(),
                self.max_position()
            ))
        })
    }

    pub fn decode(&self, digits: &[usize]) -> Result<i64> {
        self.inverse
            .get(digits)
            .copied()
            .ok_or_else(|| Error::NotInRange(digits.to_vec()))
    }

    pub fn min_position(&self) -> i64 {
        self.forward.keys().next().copied().unwrap_or(0)
    }

    pub fn max_position(&self) -> i64 {
        self.forward.keys().next_back().copied().unwrap_or(0)
    }

    /// Largest `k` such that every position in `[−k, k]` is mapped.
    pub fn symmetric_reach(&self) -> i64 {
        let mut k = 0;
        while self.forward.contains_key(&(k + 1)) && self.forward.contains_key(&-(k + 1)) {
            k += 1;
        }
        k
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &[usize])> {
        self.forward.iter().map(|(&x, c)| (x, c.as_slice()))
    }

    /// Table in the golden-file layout.
    pub fn to_table(&self, table_id: &str) -> golden::GoldenTable {
        golden::GoldenTable {
            table_id: table_id.to_string(),
            d: self.d,
            n_digits: self.n_digits,
            variant: self.variant.name().to_string(),
            entries: self
                .forward
                .iter()
                .map(|(&x, c)| golden::TableEntry { x, digits: c.clone() })
                .collect(),
        }
    }
}

/// Stored 4-bit binary mapping.
pub fn binary_mapping(n: usize) -> Result<PositionMapping> {
    if n != 4 {
        return Err(Error::Unsupported(format!(
            "binary mapping is only stored for 4 qubits, not {n}"
        )));
    }
    PositionMapping::from_table(&golden::table("table01")?, Scheme::BinaryTable)
}

/// Stored ternary mapping that is not nearest-neighbour.
pub fn naive_mapping_demo() -> Result<PositionMapping> {
    PositionMapping::from_table(&golden::table("table16")?, Scheme::NaiveTable)
}

/// Mapping for `(d, n, variant)` choosing the generated or stored scheme.
pub fn mapping_for(d: usize, n: usize, variant: Variant) -> Result<PositionMapping> {
    if d == 2 {
        if variant != Variant::Primary {
            return Err(Error::Unsupported("binary mapping has no alternative variant".into()));
        }
        binary_mapping(n)
    } else {
        PositionMapping::generated(d, n, variant)
    }
}

/// Concatenated per-axis codes, axis 0 first.
pub fn encode_lattice(point: &[i64], axis: &PositionMapping) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(point.len() * axis.n_digits);
    for &c in point {
        out.extend_from_slice(axis.encode(c)?);
    }
    Ok(out)
}

pub fn decode_lattice(digits: &[usize], axis: &PositionMapping) -> Result<Vec<i64>> {
    if digits.len() % axis.n_digits != 0 {
        return domain("digit string does not split into whole axes");
    }
    digits.chunks(axis.n_digits).map(|c| axis.decode(c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_examples() {
        assert_eq!(encode_odd(1, 5, 3, 1).unwrap(), vec![0, 0, 1]);
        assert_eq!(encode_odd(13, 5, 3, 1).unwrap(), vec![1, 3, 3]);
        assert_eq!(encode_odd(-24, 7, 2, 1).unwrap(), vec![4, 4]);
        assert_eq!(encode_odd(5, 3, 3, -1).unwrap(), vec![2, 1, 1]);
        for (d, n) in [(3, 3), (5, 3), (7, 2)] {
            for s in [1, -1] {
                assert_eq!(encode_odd(0, d, n, s).unwrap(), vec![0; n]);
            }
        }
    }

    #[test]
    fn odd_errors() {
        assert!(matches!(encode_odd(63, 5, 3, 1), Err(Error::Range(_))));
        assert!(matches!(encode_odd(1, 4, 3, 1), Err(Error::Domain(_))));
        assert!(encode_odd(62, 5, 3, 1).is_ok());
    }

    #[test]
    fn even_examples() {
        assert_eq!(encode_even(3, 4, 3, Variant::Primary).unwrap(), vec![0, 1, 3]);
        assert_eq!(encode_even(-8, 4, 3, Variant::Primary).unwrap(), vec![3, 0, 0]);
        assert_eq!(encode_even(17, 6, 2, Variant::Primary).unwrap(), vec![5, 5]);
        assert_eq!(encode_even(-3, 6, 2, Variant::Primary).unwrap(), vec![5, 3]);
        assert!(matches!(encode_even(-32, 4, 3, Variant::Primary), Err(Error::Range(_))));
        assert!(matches!(encode_even(1, 5, 3, Variant::Primary), Err(Error::Domain(_))));
    }

    #[test]
    fn stored_tables() {
        let b = binary_mapping(4).unwrap();
        assert_eq!(b.encode(2).unwrap(), &[0, 1, 1, 0]);
        assert_eq!(b.encode(-5).unwrap(), &[1, 1, 1, 1]);
        assert_eq!(b.encode(0).unwrap(), &[0, 0, 0, 0]);
        assert!(binary_mapping(5).is_err());
        let n = naive_mapping_demo().unwrap();
        assert_eq!(n.encode(1).unwrap(), &[2, 2, 2]);
        assert_eq!(n.encode(-2).unwrap(), &[0, 1, 2]);
        assert_eq!(n.encode(0).unwrap(), &[0, 0, 0]);
    }

    #[test]
    fn decode_examples() {
        let m = PositionMapping::generated(5, 3, Variant::Primary).unwrap();
        assert_eq!(m.decode(&[0, 4, 2]).unwrap(), -3);
        assert_eq!(m.decode(&[0, 0, 0]).unwrap(), 0);
        let m7 = PositionMapping::generated(7, 2, Variant::Primary).unwrap();
        assert_eq!(m7.decode(&[1, 0]).unwrap(), 7);
        let m4 = PositionMapping::generated(4, 2, Variant::Primary).unwrap();
        assert_eq!(m4.len(), 16);
        assert!(matches!(
            PositionMapping::generated(4, 1, Variant::Primary).unwrap().decode(&[7]),
            Err(Error::NotInRange(_))
        ));
    }

    #[test]
    fn lattice_examples() {
        let m5 = PositionMapping::generated(5, 1, Variant::Primary).unwrap();
        assert_eq!(encode_lattice(&[0, 0], &m5).unwrap(), vec![0, 0]);
        assert_eq!(encode_lattice(&[1, -1], &m5).unwrap(), vec![1, 4]);
        let m3 = PositionMapping::generated(3, 2, Variant::Primary).unwrap();
        let code = encode_lattice(&[1, 0], &m3).unwrap();
        assert_eq!(code, vec![0, 2, 0, 0]);
        assert_eq!(decode_lattice(&code, &m3).unwrap(), vec![1, 0]);
    }

    #[test]
    fn even_range_is_bijective() {
        for (d, n) in [(4, 1), (4, 2), (4, 3), (6, 1), (6, 2), (8, 2)] {
            let m = PositionMapping::generated(d, n, Variant::Primary).unwrap();
            assert_eq!(m.len(), d.pow(n as u32));
            let a = PositionMapping::generated(d, n, Variant::Alternative).unwrap();
            assert_eq!(a.len(), d.pow(n as u32));
        }
    }
}
