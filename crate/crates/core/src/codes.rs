//! Binary linear codes: canonical echelon forms, duals, cosets and weight
//! enumerators.
//!
//! Words are bit-packed into a `u32`; coordinate `i` (1-based) lives in bit
//! `i - 1`. Codes are kept in reduced row echelon form with pivots chosen
//! from the first coordinate onwards, so two codes are equal exactly when
//! their stored rows are equal.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{input, Error, Result};

/// Largest supported code length.
pub const MAX_LENGTH: usize = 24;
/// Largest dimension (or codimension) enumerated exhaustively.
pub const MAX_ENUM_DIM: usize = 24;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitWord {
    bits: u32,
    len: u8,
}

impl BitWord {
    pub fn new(bits: u32, len: usize) -> Result<Self> {
        if len == 0 || len > MAX_LENGTH {
            return input(format!("word length {len} outside 1..={MAX_LENGTH}"));
        }
        if len < 32 && bits >> len != 0 {
            return input(format!("bits {bits:#x} do not fit in length {len}"));
        }
        Ok(Self { bits, len: len as u8 })
    }

    pub fn zero(len: usize) -> Self {
        Self::new(0, len).expect("valid length")
    }

    /// Unit vector with a one at coordinate `i` (1-based).
    pub fn unit(len: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= len);
        Self::new(1 << (i - 1), len).expect("valid length")
    }

    pub fn from_coords(coords: &[u8]) -> Result<Self> {
        let mut bits = 0u32;
        for (i, &c) in coords.iter().enumerate() {
            match c {
                0 => {}
                1 => bits |= 1 << i,
                _ => return input(format!("coordinate value {c} is not a bit")),
            }
        }
        Self::new(bits, coords.len())
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Value at coordinate `i` (1-based).
    pub fn get(&self, i: usize) -> u8 {
        ((self.bits >> (i - 1)) & 1) as u8
    }

    pub fn coords(&self) -> Vec<u8> {
        (1..=self.len()).map(|i| self.get(i)).collect()
    }

    pub fn add(&self, other: &BitWord) -> BitWord {
        debug_assert_eq!(self.len, other.len);
        BitWord { bits: self.bits ^ other.bits, len: self.len }
    }

    pub fn dot(&self, other: &BitWord) -> u8 {
        ((self.bits & other.bits).count_ones() & 1) as u8
    }

    /// Key ordering the words lexicographically as sequences, coordinate 1 first.
    fn lex_key(&self) -> u32 {
        self.bits.reverse_bits() >> (32 - self.len as u32)
    }

    /// Lexicographic comparison of the coordinate sequences.
    pub fn lex_cmp(&self, other: &BitWord) -> Ordering {
        self.lex_key().cmp(&other.lex_key())
    }

    /// Order used for canonical coset representatives: weight first, then
    /// lexicographic.
    pub fn weight_lex_cmp(&self, other: &BitWord) -> Ordering {
        self.weight().cmp(&other.weight()).then_with(|| self.lex_cmp(other))
    }
}

impl std::str::FromStr for BitWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coords: Vec<u8> = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Input(format!("invalid bit character {c:?} in {s:?}"))),
            })
            .collect::<Result<_>>()?;
        Self::from_coords(&coords)
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.len() {
            write!(f, "{}", self.get(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord({self})")
    }
}

/// A binary linear code in canonical reduced row echelon form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinearCode {
    length: usize,
    rows: Vec<u32>,
}

impl LinearCode {
    /// Spans the given generators. All generators must share `length`.
    pub fn build(length: usize, generators: &[BitWord]) -> Result<Self> {
        if length == 0 || length > MAX_LENGTH {
            return input(format!("code length {length} outside 1..={MAX_LENGTH}"));
        }
        if let Some(g) = generators.iter().find(|g| g.len() != length) {
            return input(format!("generator {g} has length {} but the code has length {length}", g.len()));
        }
        let rows = rref(length, generators.iter().map(|g| g.bits).collect());
        Ok(Self { length, rows })
    }

    pub fn zero(length: usize) -> Result<Self> {
        Self::build(length, &[])
    }

    pub fn full(length: usize) -> Result<Self> {
        let gens: Vec<_> = (1..=length).map(|i| BitWord::unit(length, i)).collect();
        Self::build(length, &gens)
    }

    /// The first order Reed-Muller code of length 16, spanned by the five
    /// rows of the standard generator matrix.
    pub fn reed_muller_16() -> Self {
        const ROWS: [&str; 5] =
            ["1111111111111111", "1111111100000000", "1111000011110000", "1100110011001100", "1010101010101010"];
        let gens: Vec<BitWord> = ROWS.iter().map(|r| r.parse().expect("static row")).collect();
        Self::build(16, &gens).expect("static generators")
    }

    /// The extended Hamming code of length 16, the dual of [`Self::reed_muller_16`].
    pub fn hamming_16() -> Self {
        Self::reed_muller_16().dual()
    }

    /// Even-weight vectors of length `n`.
    pub fn even_weight(n: usize) -> Result<Self> {
        let gens: Vec<_> = (2..=n).map(|i| BitWord::unit(n, 1).add(&BitWord::unit(n, i))).collect();
        Self::build(n, &gens)
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn generators(&self) -> Vec<BitWord> {
        self.rows.iter().map(|&b| BitWord { bits: b, len: self.length as u8 }).collect()
    }

    fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.trailing_zeros() as usize).collect()
    }

    pub fn contains(&self, w: &BitWord) -> bool {
        w.len() == self.length && reduce(&self.rows, w.bits) == 0
    }

    /// All vectors orthogonal to every codeword.
    pub fn dual(&self) -> LinearCode {
        let pivots = self.pivots();
        let mut gens = Vec::new();
        for free in (0..self.length).filter(|c| !pivots.contains(c)) {
            let mut v = 1u32 << free;
            for (row, &p) in self.rows.iter().zip(&pivots) {
                if row >> free & 1 == 1 {
                    v |= 1 << p;
                }
            }
            gens.push(v);
        }
        LinearCode { length: self.length, rows: rref(self.length, gens) }
    }

    /// Canonical representative of the coset `self + w`: the member of
    /// smallest weight, ties broken lexicographically.
    pub fn coset_leader(&self, w: &BitWord) -> BitWord {
        let mut best = *w;
        self.for_each_word(|c| {
            let cand = BitWord { bits: c ^ w.bits, len: w.len };
            if cand.weight_lex_cmp(&best) == Ordering::Less {
                best = cand;
            }
        });
        best
    }

    /// Visits every codeword (Gray code order).
    pub fn for_each_word(&self, mut f: impl FnMut(u32)) {
        let k = self.rows.len();
        let mut cur = 0u32;
        f(cur);
        for i in 1u64..(1u64 << k) {
            cur ^= self.rows[i.trailing_zeros() as usize];
            f(cur);
        }
    }

    pub fn words(&self) -> Vec<BitWord> {
        let mut out = Vec::with_capacity(1 << self.rows.len());
        self.for_each_word(|b| out.push(BitWord { bits: b, len: self.length as u8 }));
        out
    }

    fn check_enumerable(&self) -> Result<()> {
        if self.dimension() > MAX_ENUM_DIM {
            return Err(Error::Resource(format!(
                "dimension {} exceeds exhaustive enumeration cap {MAX_ENUM_DIM}",
                self.dimension()
            )));
        }
        Ok(())
    }

    pub fn weight_enumerator(&self) -> Result<WeightEnumerator> {
        self.check_enumerable()?;
        let mut counts = vec![0u64; self.length + 1];
        self.for_each_word(|b| counts[b.count_ones() as usize] += 1);
        Ok(WeightEnumerator { counts })
    }

    /// Weight distribution of the coset `self + rep`.
    pub fn coset_weight_enumerator(&self, rep: &BitWord) -> Result<WeightEnumerator> {
        if rep.len() != self.length {
            return input(format!(
                "coset representative has length {} but the code has length {}",
                rep.len(),
                self.length
            ));
        }
        self.check_enumerable()?;
        let mut counts = vec![0u64; self.length + 1];
        self.for_each_word(|b| counts[(b ^ rep.bits).count_ones() as usize] += 1);
        Ok(WeightEnumerator { counts })
    }

    /// One representative per coset, each the weight-then-lexicographically
    /// smallest member, listed in that same order.
    pub fn coset_representatives(&self) -> Result<Vec<BitWord>> {
        let codim = self.length - self.dimension();
        if codim > 12 || self.length > MAX_ENUM_DIM {
            return Err(Error::Resource(format!(
                "coset enumeration for length {} codimension {codim} is too large",
                self.length
            )));
        }
        let checks = self.dual().rows;
        let mut best: Vec<Option<BitWord>> = vec![None; 1 << codim];
        for bits in 0u32..(1u32 << self.length) {
            let w = BitWord { bits, len: self.length as u8 };
            let syn = checks
                .iter()
                .enumerate()
                .fold(0usize, |acc, (j, &h)| acc | (((h & bits).count_ones() as usize & 1) << j));
            match &best[syn] {
                Some(b) if b.weight_lex_cmp(&w) != Ordering::Greater => {}
                _ => best[syn] = Some(w),
            }
        }
        let mut reps: Vec<BitWord> = best.into_iter().map(|b| b.expect("every syndrome hit")).collect();
        reps.sort_by(BitWord::weight_lex_cmp);
        Ok(reps)
    }

    /// Checks whether the codewords of weight `block_weight` form a Steiner
    /// system `S(t, block_weight, length)`.
    pub fn steiner_property(&self, block_weight: usize, t: usize) -> Result<SteinerReport> {
        if !(t <= block_weight && block_weight <= self.length) {
            return input(format!("need t <= block weight <= length, got t={t}, k={block_weight}, n={}", self.length));
        }
        self.check_enumerable()?;
        let mut blocks = Vec::new();
        self.for_each_word(|b| {
            if b.count_ones() as usize == block_weight {
                blocks.push(b);
            }
        });
        let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
        for s in subsets(self.length, t) {
            counts.insert(s, 0);
        }
        for &b in &blocks {
            let support: Vec<usize> = (0..self.length).filter(|&i| b >> i & 1 == 1).collect();
            for sub in subsets(support.len(), t) {
                let mut mask = 0u32;
                for (j, &pos) in support.iter().enumerate() {
                    if sub >> j & 1 == 1 {
                        mask |= 1 << pos;
                    }
                }
                *counts.get_mut(&mask).expect("t-subset present") += 1;
            }
        }
        let holds = !blocks.is_empty() && counts.values().all(|&c| c == 1);
        Ok(SteinerReport { holds, blocks: blocks.len(), t, block_weight, length: self.length, counts })
    }
}

/// All `t`-subsets of `0..n` as bitmasks, in increasing numeric order.
fn subsets(n: usize, t: usize) -> Vec<u32> {
    let mut out = Vec::new();
    if t > n {
        return out;
    }
    if t == 0 {
        return vec![0];
    }
    let mut idx: Vec<usize> = (0..t).collect();
    loop {
        out.push(idx.iter().fold(0u32, |m, &i| m | 1 << i));
        let mut k = t;
        while k > 0 && idx[k - 1] == n - t + k - 1 {
            k -= 1;
        }
        if k == 0 {
            break;
        }
        idx[k - 1] += 1;
        for j in k..t {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out.sort_unstable();
    out
}

fn reduce(rows: &[u32], mut v: u32) -> u32 {
    for &r in rows {
        let p = r.trailing_zeros();
        if v >> p & 1 == 1 {
            v ^= r;
        }
    }
    v
}

fn rref(length: usize, mut gens: Vec<u32>) -> Vec<u32> {
    let mut rows: Vec<u32> = Vec::new();
    for col in 0..length {
        let Some(pos) = gens.iter().position(|g| g >> col & 1 == 1) else { continue };
        let pivot = gens.swap_remove(pos);
        for g in gens.iter_mut() {
            if *g >> col & 1 == 1 {
                *g ^= pivot;
            }
        }
        for r in rows.iter_mut() {
            if *r >> col & 1 == 1 {
                *r ^= pivot;
            }
        }
        rows.push(pivot);
    }
    rows
}

#[derive(Clone, Debug)]
pub struct SteinerReport {
    pub holds: bool,
    pub blocks: usize,
    pub t: usize,
    pub block_weight: usize,
    pub length: usize,
    /// Cover count for every `t`-subset (bitmask over coordinates).
    pub counts: BTreeMap<u32, u64>,
}

/// Weight distribution `counts[w]` of a code or coset of length `counts.len() - 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WeightEnumerator {
    counts: Vec<u64>,
}

impl WeightEnumerator {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        Self { counts }
    }

    /// Enumerator of the whole space `F_2^n`, i.e. `(x + y)^n`.
    pub fn full_space(n: usize) -> Self {
        Self { counts: (0..=n).map(|w| binomial(n, w) as u64).collect() }
    }

    pub fn length(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, w: usize) -> u64 {
        self.counts.get(w).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Nonzero `(weight, count)` pairs.
    pub fn support(&self) -> Vec<(usize, u64)> {
        self.counts.iter().enumerate().filter(|(_, &c)| c != 0).map(|(w, &c)| (w, c)).collect()
    }

    /// `W_dual(x, y) = W(x + y, x - y) / code_size`.
    pub fn macwilliams(&self, code_size: u64) -> Result<WeightEnumerator> {
        if code_size == 0 {
            return input("code size must be positive");
        }
        let n = self.length();
        let mut out = Vec::with_capacity(n + 1);
        for w in 0..=n {
            let mut acc: i128 = 0;
            for (j, &a) in self.counts.iter().enumerate() {
                if a != 0 {
                    acc += a as i128 * krawtchouk(n, w, j);
                }
            }
            if acc % code_size as i128 != 0 || acc < 0 {
                return Err(Error::Consistency(format!(
                    "MacWilliams coefficient at weight {w} is {acc}/{code_size}; wrong code size?"
                )));
            }
            out.push((acc / code_size as i128) as u64);
        }
        Ok(WeightEnumerator { counts: out })
    }

    /// Compact rendering, e.g. `0:1 8:30 16:1`.
    pub fn to_table(&self) -> String {
        self.support().iter().map(|(w, c)| format!("{w}:{c}")).collect::<Vec<_>>().join(" ")
    }

    /// The bivariate polynomial with monomials `x^(n-w) y^w`.
    pub fn to_polynomial(&self) -> String {
        let n = self.length();
        let mut parts = Vec::new();
        for (w, c) in self.support() {
            let mono = match (n - w, w) {
                (0, 0) => String::from("1"),
                (a, 0) => pow_str("x", a),
                (0, b) => pow_str("y", b),
                (a, b) => format!("{}*{}", pow_str("x", a), pow_str("y", b)),
            };
            parts.push(if c == 1 { mono } else { format!("{c}*{mono}") });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn pow_str(v: &str, e: usize) -> String {
    if e == 1 {
        v.to_string()
    } else {
        format!("{v}^{e}")
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

/// Coefficient of `x^(n-w) y^w` in `(x + y)^(n-j) (x - y)^j`.
fn krawtchouk(n: usize, w: usize, j: usize) -> i128 {
    let mut acc = 0i128;
    for i in 0..=w.min(j) {
        let term = binomial(j, i) as i128 * binomial(n - j, w - i) as i128;
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Codes and cosets addressable by name from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedCode {
    Hamming16,
    ReedMuller16,
    F8Even,
    F8Odd,
}

impl NamedCode {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "h16" => Ok(Self::Hamming16),
            "h16-dual" => Ok(Self::ReedMuller16),
            "f8-even" => Ok(Self::F8Even),
            "f8-odd" => Ok(Self::F8Odd),
            _ => input(format!("unknown code {name:?}; expected h16, h16-dual, f8-even or f8-odd")),
        }
    }

    /// The underlying linear code and the offset of the coset it names.
    pub fn code_and_offset(&self) -> (LinearCode, BitWord) {
        match self {
            Self::Hamming16 => (LinearCode::hamming_16(), BitWord::zero(16)),
            Self::ReedMuller16 => (LinearCode::reed_muller_16(), BitWord::zero(16)),
            Self::F8Even => (LinearCode::even_weight(8).expect("n=8"), BitWord::zero(8)),
            Self::F8Odd => (LinearCode::even_weight(8).expect("n=8"), BitWord::unit(8, 1)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(pairs: &[(usize, u64)], n: usize) -> WeightEnumerator {
        let mut c = vec![0; n + 1];
        for &(w, k) in pairs {
            c[w] = k;
        }
        WeightEnumerator::from_counts(c)
    }

    #[test]
    fn reed_muller_dimensions() {
        let rm = LinearCode::reed_muller_16();
        assert_eq!((rm.length(), rm.dimension()), (16, 5));
        let h = rm.dual();
        assert_eq!(h.dimension(), 11);
        assert_eq!(h.dual(), rm);
    }

    #[test]
    fn zero_and_duplicate_generators() {
        let z = LinearCode::zero(16).unwrap();
        assert_eq!(z.dimension(), 0);
        assert_eq!(z.dual(), LinearCode::full(16).unwrap());
        let ones: BitWord = "1111111111111111".parse().unwrap();
        assert_eq!(LinearCode::build(16, &[ones, ones, ones]).unwrap().dimension(), 1);
        assert_eq!(z.weight_enumerator().unwrap(), table(&[(0, 1)], 16));
    }

    #[test]
    fn mixed_lengths_rejected() {
        let a = BitWord::unit(8, 1);
        let b = BitWord::unit(16, 1);
        assert!(matches!(LinearCode::build(16, &[a, b]), Err(Error::Input(_))));
        assert!(matches!(LinearCode::hamming_16().coset_weight_enumerator(&a), Err(Error::Input(_))));
    }

    #[test]
    fn enumerators_of_the_length_16_codes() {
        let rm = LinearCode::reed_muller_16().weight_enumerator().unwrap();
        assert_eq!(rm, table(&[(0, 1), (8, 30), (16, 1)], 16));
        let h = LinearCode::hamming_16().weight_enumerator().unwrap();
        assert_eq!(h, table(&[(0, 1), (4, 140), (6, 448), (8, 870), (10, 448), (12, 140), (16, 1)], 16));
        assert_eq!(rm.macwilliams(32).unwrap(), h);
        assert_eq!(h.macwilliams(2048).unwrap(), rm);
        assert!(matches!(rm.macwilliams(64), Err(Error::Consistency(_))));
    }

    #[test]
    fn macwilliams_of_zero_code_is_full_space() {
        let zero = LinearCode::zero(10).unwrap().weight_enumerator().unwrap();
        assert_eq!(zero.macwilliams(1).unwrap(), WeightEnumerator::full_space(10));
    }

    #[test]
    fn coset_enumerators() {
        let h = LinearCode::hamming_16();
        let e16 = BitWord::unit(16, 16);
        assert_eq!(
            h.coset_weight_enumerator(&e16).unwrap(),
            table(&[(1, 1), (3, 35), (5, 273), (7, 715), (9, 715), (11, 273), (13, 35), (15, 1)], 16)
        );
        let pair: BitWord = "0000000000000011".parse().unwrap();
        assert_eq!(
            h.coset_weight_enumerator(&pair).unwrap(),
            table(&[(2, 8), (4, 112), (6, 504), (8, 800), (10, 504), (12, 112), (14, 8)], 16)
        );
        let f8 = LinearCode::even_weight(8).unwrap();
        assert_eq!(f8.weight_enumerator().unwrap(), table(&[(0, 1), (2, 28), (4, 70), (6, 28), (8, 1)], 8));
        assert_eq!(
            f8.coset_weight_enumerator(&BitWord::unit(8, 1)).unwrap(),
            table(&[(1, 8), (3, 56), (5, 56), (7, 8)], 8)
        );
    }

    #[test]
    fn steiner_system() {
        let h = LinearCode::hamming_16();
        let rep = h.steiner_property(4, 3).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.counts.len(), 560);
        assert_eq!(rep.blocks, 140);
        let pairs = h.steiner_property(4, 2).unwrap();
        assert!(!pairs.holds);
        assert!(pairs.counts.values().all(|&c| c == 7));
        assert!(!LinearCode::zero(16).unwrap().steiner_property(4, 3).unwrap().holds);
        assert!(h.steiner_property(2, 3).is_err());
    }

    #[test]
    fn coset_census() {
        let h = LinearCode::hamming_16();
        let reps = h.coset_representatives().unwrap();
        assert_eq!(reps.len(), 32);
        let mut by_weight = BTreeMap::new();
        for r in &reps {
            *by_weight.entry(r.weight()).or_insert(0) += 1;
        }
        assert_eq!(by_weight, BTreeMap::from([(0, 1), (1, 16), (2, 15)]));
        for (i, a) in reps.iter().enumerate() {
            for b in &reps[i + 1..] {
                assert!(!h.contains(&a.add(b)));
            }
        }
        assert_eq!(LinearCode::full(16).unwrap().coset_representatives().unwrap(), vec![BitWord::zero(16)]);
        assert_eq!(LinearCode::reed_muller_16().coset_representatives().unwrap().len(), 2048);
    }

    #[test]
    fn coset_enumerators_sum_to_full_space() {
        let h = LinearCode::hamming_16();
        let mut acc = vec![0u64; 17];
        for r in h.coset_representatives().unwrap() {
            for (w, c) in h.coset_weight_enumerator(&r).unwrap().counts().iter().enumerate() {
                acc[w] += c;
            }
        }
        assert_eq!(WeightEnumerator::from_counts(acc), WeightEnumerator::full_space(16));
    }

    #[test]
    fn weight_parities() {
        for w in LinearCode::hamming_16().words() {
            assert_eq!(w.weight() % 2, 0);
        }
        for w in LinearCode::reed_muller_16().words() {
            assert!(w.weight() % 8 == 0);
        }
    }

    #[test]
    fn lex_and_parse() {
        let w: BitWord = "0110".parse().unwrap();
        assert_eq!(w.coords(), vec![0, 1, 1, 0]);
        assert_eq!(w.to_string(), "0110");
        let a: BitWord = "0001".parse().unwrap();
        let b: BitWord = "1000".parse().unwrap();
        assert_eq!(a.lex_cmp(&b), Ordering::Less);
        assert!("012".parse::<BitWord>().is_err());
        assert_eq!(
            LinearCode::reed_muller_16().weight_enumerator().unwrap().to_polynomial(),
            "x^16 + 30*x^8*y^8 + y^16"
        );
    }
}
