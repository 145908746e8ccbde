//! Truncated Laurent series in `q` with exact rational coefficients.
//!
//! Exponents live on the grid `(1/48)Z`, which holds every exponent produced
//! by the eta products and string functions used here (`1/24`, `1/16`,
//! `1/2`, ...). A series carries the exponent below which it is known; every
//! operation narrows that bound to what its inputs determine.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::codes::WeightEnumerator;
use crate::error::{input, Error, Result};

/// Denominator of the exponent grid.
pub const GRID: i64 = 48;

/// An exponent `numerator / 48`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct FracExp(i64);

impl FracExp {
    pub const fn from_grid(numerator: i64) -> Self {
        Self(numerator)
    }

    pub const fn integer(n: i64) -> Self {
        Self(n * GRID)
    }

    /// `num / den`, which must lie on the grid.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return input("zero denominator in exponent");
        }
        if (num * GRID) % den != 0 {
            return input(format!("exponent {num}/{den} is not on the 1/{GRID} grid"));
        }
        Ok(Self(num * GRID / den))
    }

    pub fn from_ratio(r: &BigRational) -> Result<Self> {
        let scaled = r * BigRational::from_integer(BigInt::from(GRID));
        if !scaled.is_integer() {
            return input(format!("exponent {r} is not on the 1/{GRID} grid"));
        }
        scaled.to_integer().to_i64().map(Self).ok_or(Error::Overflow("exponent"))
    }

    pub fn grid(&self) -> i64 {
        self.0
    }

    pub fn is_integer(&self) -> bool {
        self.0 % GRID == 0
    }

    pub fn to_ratio(&self) -> BigRational {
        BigRational::new(BigInt::from(self.0), BigInt::from(GRID))
    }

    /// Floor of the exponent.
    pub fn floor(&self) -> i64 {
        floor_div(self.0, GRID)
    }
}

impl std::ops::Add for FracExp {
    type Output = FracExp;
    fn add(self, o: FracExp) -> FracExp {
        FracExp(self.0 + o.0)
    }
}

impl std::ops::Sub for FracExp {
    type Output = FracExp;
    fn sub(self, o: FracExp) -> FracExp {
        FracExp(self.0 - o.0)
    }
}

impl std::ops::Neg for FracExp {
    type Output = FracExp;
    fn neg(self) -> FracExp {
        FracExp(-self.0)
    }
}

impl std::ops::Mul<i64> for FracExp {
    type Output = FracExp;
    fn mul(self, k: i64) -> FracExp {
        FracExp(self.0 * k)
    }
}

impl fmt::Display for FracExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.0.gcd(&GRID);
        let (n, d) = (self.0 / g, GRID / g);
        if d == 1 {
            write!(f, "{n}")
        } else {
            write!(f, "{n}/{d}")
        }
    }
}

pub(crate) fn floor_div(a: i64, b: i64) -> i64 {
    Integer::div_floor(&a, &b)
}

pub(crate) fn ceil_div(a: i64, b: i64) -> i64 {
    Integer::div_ceil(&a, &b)
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn min_trunc(a: Option<FracExp>, b: Option<FracExp>) -> Option<FracExp> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// A truncated Laurent series. `trunc == None` means the series is exact
/// (a Laurent polynomial).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QSeries {
    terms: BTreeMap<FracExp, BigRational>,
    trunc: Option<FracExp>,
}

impl QSeries {
    pub fn zero(trunc: Option<FracExp>) -> Self {
        Self { terms: BTreeMap::new(), trunc }
    }

    /// The exact series `1`.
    pub fn one() -> Self {
        Self::monomial(FracExp::integer(0), rat(1))
    }

    pub fn monomial(e: FracExp, c: BigRational) -> Self {
        let mut s = Self::zero(None);
        s.add_term(e, c);
        s
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (FracExp, BigRational)>, trunc: Option<FracExp>) -> Self {
        let mut s = Self::zero(trunc);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    pub fn from_int_terms(terms: impl IntoIterator<Item = (FracExp, i64)>, trunc: Option<FracExp>) -> Self {
        Self::from_terms(terms.into_iter().map(|(e, c)| (e, rat(c))), trunc)
    }

    /// Adds `c q^e`, dropping it when at or beyond the truncation.
    pub fn add_term(&mut self, e: FracExp, c: BigRational) {
        if c.is_zero() || self.trunc.is_some_and(|t| e >= t) {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn trunc(&self) -> Option<FracExp> {
        self.trunc
    }

    pub fn terms(&self) -> &BTreeMap<FracExp, BigRational> {
        &self.terms
    }

    pub fn coefficient(&self, e: FracExp) -> BigRational {
        self.terms.get(&e).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Coefficient at `e`, failing if `e` is not covered by the truncation.
    pub fn known_coefficient(&self, e: FracExp) -> Result<BigRational> {
        if self.trunc.is_some_and(|t| e >= t) {
            return Err(Error::Resource(format!(
                "coefficient of q^{e} requested but series is only known below q^{}",
                self.trunc.expect("checked")
            )));
        }
        Ok(self.coefficient(e))
    }

    /// Lowest exponent with a nonzero coefficient, or the truncation for an
    /// empty truncated series.
    pub fn valuation(&self) -> Option<FracExp> {
        self.terms.keys().next().copied().or(self.trunc)
    }

    pub fn leading(&self) -> Option<(FracExp, &BigRational)> {
        self.terms.iter().next().map(|(e, c)| (*e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Drops everything at or above `t` and lowers the truncation to `t`.
    pub fn truncate(&self, t: FracExp) -> QSeries {
        let trunc = min_trunc(self.trunc, Some(t));
        Self { terms: self.terms.range(..trunc.expect("set")).map(|(e, c)| (*e, c.clone())).collect(), trunc }
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let trunc = min_trunc(self.trunc, other.trunc);
        let mut out = Self::zero(trunc);
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, r: &BigRational) -> QSeries {
        if r.is_zero() {
            return Self::zero(self.trunc);
        }
        Self { terms: self.terms.iter().map(|(e, c)| (*e, c * r)).collect(), trunc: self.trunc }
    }

    /// Multiplies by `q^e`.
    pub fn shift(&self, e: FracExp) -> QSeries {
        Self { terms: self.terms.iter().map(|(k, c)| (*k + e, c.clone())).collect(), trunc: self.trunc.map(|t| t + e) }
    }

    pub fn mul(&self, other: &QSeries) -> QSeries {
        let trunc = match (self.trunc, other.trunc) {
            (None, None) => None,
            (Some(t), None) => other.valuation().map(|v| t + v),
            (None, Some(t)) => self.valuation().map(|v| t + v),
            (Some(ta), Some(tb)) => {
                let va = self.valuation().expect("truncated series has a valuation");
                let vb = other.valuation().expect("truncated series has a valuation");
                Some((ta + vb).min(tb + va))
            }
        };
        // An exact zero times anything is an exact zero.
        let trunc = if (self.trunc.is_none() && self.is_zero()) || (other.trunc.is_none() && other.is_zero()) {
            None
        } else {
            trunc
        };
        let mut acc: BTreeMap<FracExp, BigRational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = *ea + *eb;
                if trunc.is_some_and(|t| e >= t) {
                    // Terms of `other` are sorted; later ones only get larger.
                    break;
                }
                *acc.entry(e).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Self { terms: acc, trunc }
    }

    /// Multiplicative inverse; the leading coefficient must be nonzero.
    pub fn inverse(&self) -> Result<QSeries> {
        let Some((v, lead)) = self.leading() else {
            return input("cannot invert a series with no nonzero term");
        };
        let lead_inv = lead.recip();
        // Normalise to 1 + (higher terms) in x = q^(1/48).
        let rel = self.trunc.map(|t| t - v);
        let Some(rel) = rel else {
            if self.terms.len() == 1 {
                return Ok(Self::monomial(-v, lead_inv));
            }
            return input("inverse of a non-monomial exact series needs a truncation");
        };
        let len = rel.grid() as usize;
        let a: Vec<(usize, BigRational)> =
            self.terms.iter().skip(1).map(|(e, c)| (((*e - v).grid()) as usize, c * &lead_inv)).collect();
        let mut b: Vec<BigRational> = vec![BigRational::zero(); len];
        if len > 0 {
            b[0] = BigRational::one();
        }
        for k in 1..len {
            let mut s = BigRational::zero();
            for (j, aj) in &a {
                if *j > k {
                    break;
                }
                if !b[k - j].is_zero() {
                    s += aj * &b[k - j];
                }
            }
            b[k] = -s;
        }
        let terms = b
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (FracExp::from_grid(k as i64) - v, c * &lead_inv));
        Ok(Self::from_terms(terms, Some(rel - v)))
    }

    pub fn pow(&self, k: i64) -> Result<QSeries> {
        if k < 0 {
            return self.inverse()?.pow(-k);
        }
        let mut result = QSeries::one();
        let mut base = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(result)
    }

    /// Substitutes `q -> q^(num/den)` for a positive rational factor; the
    /// image exponents must stay on the grid.
    pub fn rescale_exponents(&self, num: i64, den: i64) -> Result<QSeries> {
        let map = |e: FracExp| -> Result<FracExp> {
            if (e.grid() * num) % den != 0 {
                return input(format!("exponent {e} scaled by {num}/{den} leaves the grid"));
            }
            Ok(FracExp::from_grid(e.grid() * num / den))
        };
        let trunc = self.trunc.map(|t| FracExp::from_grid(ceil_div(t.grid() * num, den)));
        let mut out = Self::zero(trunc);
        for (e, c) in &self.terms {
            out.add_term(map(*e)?, c.clone());
        }
        Ok(out)
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Coefficients as integers; fails on any non-integral coefficient.
    pub fn integer_terms(&self) -> Result<Vec<(FracExp, BigInt)>> {
        self.terms
            .iter()
            .map(|(e, c)| {
                if c.is_integer() {
                    Ok((*e, c.to_integer()))
                } else {
                    Err(Error::Consistency(format!("coefficient {c} of q^{e} is not an integer")))
                }
            })
            .collect()
    }

    /// Agreement of two series on every exponent below `t` (both must be
    /// known there).
    pub fn agrees_below(&self, other: &QSeries, t: FracExp) -> Result<bool> {
        for s in [self, other] {
            if s.trunc.is_some_and(|st| st < t) {
                return Err(Error::Resource(format!(
                    "comparison through q^{t} requested but a series is only known below q^{}",
                    s.trunc.expect("checked")
                )));
            }
        }
        Ok(self.truncate(t) == other.truncate(t))
    }

    /// One term per line: `num/48<TAB>coefficient`, ascending exponents.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (e, c) in &self.terms {
            out.push_str(&format!("{}/{}\t{}\n", e.grid(), GRID, c));
        }
        out
    }

    pub fn from_text(text: &str, trunc: Option<FracExp>) -> Result<QSeries> {
        let mut s = Self::zero(trunc);
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (e, c) =
                line.split_once('\t').ok_or_else(|| Error::Input(format!("malformed series line {line:?}")))?;
            let num = e
                .strip_suffix("/48")
                .and_then(|n| n.parse::<i64>().ok())
                .ok_or_else(|| Error::Input(format!("malformed exponent {e:?}")))?;
            let coef: BigRational = c.parse().map_err(|_| Error::Input(format!("malformed coefficient {c:?}")))?;
            s.add_term(FracExp::from_grid(num), coef);
        }
        Ok(s)
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let zero = *e == FracExp::integer(0);
            if !mag.is_one() || zero {
                write!(f, "{mag}")?;
                if !zero {
                    write!(f, "*")?;
                }
            }
            if !zero {
                write!(f, "q^{e}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(t) = self.trunc {
            write!(f, " + O(q^{t})")?;
        }
        Ok(())
    }
}

/// Argument scale of an eta factor `eta(k tau)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EtaScale {
    Half,
    One,
    Two,
}

impl EtaScale {
    /// `k` measured in grid units.
    fn grid(self) -> i64 {
        match self {
            EtaScale::Half => GRID / 2,
            EtaScale::One => GRID,
            EtaScale::Two => 2 * GRID,
        }
    }
}

/// A product of powers of `eta(tau/2)`, `eta(tau)` and `eta(2 tau)`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct EtaQuotient {
    pub factors: Vec<(EtaScale, i64)>,
}

impl EtaQuotient {
    pub fn new(factors: &[(EtaScale, i64)]) -> Self {
        Self { factors: factors.to_vec() }
    }

    /// Exponent of the leading `q` power, `sum k p / 24`.
    pub fn leading_exponent(&self) -> FracExp {
        FracExp::from_grid(self.factors.iter().map(|(k, p)| k.grid() * p / 24).sum())
    }

    /// Expansion known for all exponents below `order`.
    pub fn expand(&self, order: FracExp) -> Result<QSeries> {
        let v = self.leading_exponent();
        if order <= v {
            return input(format!("order q^{order} must exceed the leading exponent q^{v}"));
        }
        let rel = (order - v).grid();
        let mut out = QSeries::one();
        for &(scale, p) in &self.factors {
            let k = scale.grid();
            let terms = ((rel + k - 1) / k) as usize;
            let coeffs = euler_product_power(p, terms);
            let lead = FracExp::from_grid(k * p / 24);
            let series = QSeries::from_terms(
                coeffs
                    .into_iter()
                    .enumerate()
                    .map(|(m, c)| (lead + FracExp::from_grid(k * m as i64), BigRational::from_integer(c))),
                Some(lead + FracExp::from_grid(rel)),
            );
            out = out.mul(&series);
        }
        if out.trunc.is_none() {
            out.trunc = Some(order);
        }
        Ok(out.truncate(order))
    }
}

/// Coefficients of `prod_{n>=1} (1 - x^n)^p` up to `x^(len-1)`.
pub fn euler_product_power(p: i64, len: usize) -> Vec<BigInt> {
    if len == 0 {
        return Vec::new();
    }
    // Pentagonal number theorem for the base product.
    let mut base: Vec<(usize, i64)> = Vec::new();
    let mut k: i64 = 1;
    loop {
        let a = (k * (3 * k - 1) / 2) as usize;
        let b = (k * (3 * k + 1) / 2) as usize;
        if a >= len {
            break;
        }
        let sign = if k % 2 == 1 { -1 } else { 1 };
        base.push((a, sign));
        if b < len {
            base.push((b, sign));
        }
        k += 1;
    }
    // g = f^p via g_m = (1/m) sum_{j=1}^m ((p + 1) j - m) f_j g_{m-j}.
    let mut g: Vec<BigInt> = vec![BigInt::zero(); len];
    g[0] = BigInt::one();
    for m in 1..len {
        let mut acc = BigInt::zero();
        for &(j, fj) in &base {
            if j > m {
                break;
            }
            let w = (p + 1) * j as i64 - m as i64;
            if w != 0 && !g[m - j].is_zero() {
                acc += &g[m - j] * (w * fj);
            }
        }
        debug_assert!((&acc % BigInt::from(m)).is_zero());
        g[m] = acc / BigInt::from(m);
    }
    g
}

/// Evaluates `W(x, y) = sum_w A_w x^(n-w) y^w` at two series.
pub fn evaluate_enumerator(w: &WeightEnumerator, x: &QSeries, y: &QSeries) -> Result<QSeries> {
    let n = w.length();
    let mut xp = vec![QSeries::one()];
    let mut yp = vec![QSeries::one()];
    for i in 1..=n {
        xp.push(xp[i - 1].mul(x));
        yp.push(yp[i - 1].mul(y));
    }
    let mut out: Option<QSeries> = None;
    for (wt, count) in w.support() {
        let term = xp[n - wt].mul(&yp[wt]).scale(&rat(count as i64));
        out = Some(match out {
            None => term,
            Some(acc) => acc.add(&term),
        });
    }
    Ok(out.unwrap_or_else(|| QSeries::zero(None)))
}

#[derive(Clone, Debug)]
pub struct StringFunctions {
    pub c0: QSeries,
    pub c1: QSeries,
    pub c2: QSeries,
}

/// The level 2 string functions, each known below `order`.
pub fn string_functions(order: FracExp) -> Result<StringFunctions> {
    if order < FracExp::integer(1) {
        return input(format!("string functions need order >= 1, got {order}"));
    }
    use EtaScale::*;
    let a = EtaQuotient::new(&[(Half, 1), (One, -2)]).expand(order)?;
    let b = EtaQuotient::new(&[(One, 1), (Two, -1), (Half, -1)]).expand(order)?;
    // `b` carries the positive half-integral terms: c0 + c1 = b, c0 - c1 = a.
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let c0 = a.add(&b).scale(&half);
    let c1 = b.sub(&a).scale(&half);
    let c2 = EtaQuotient::new(&[(Two, 1), (One, -2)]).expand(order)?;
    Ok(StringFunctions { c0, c1, c2 })
}

/// Splits an integer-exponent series `s` into
/// `(s(tau/2) + s((tau+1)/2)) / 2` and `(s(tau/2) - s((tau+1)/2)) / 2`.
pub fn half_period_pair(s: &QSeries) -> Result<(QSeries, QSeries)> {
    if let Some((e, _)) = s.terms.iter().find(|(e, _)| !e.is_integer()) {
        return input(format!("half-period split needs integer exponents, found q^{e}"));
    }
    let trunc = s.trunc.map(|t| FracExp::from_grid(ceil_div(t.grid(), GRID) * GRID / 2));
    let mut even = QSeries::zero(trunc);
    let mut odd = QSeries::zero(trunc);
    for (e, c) in &s.terms {
        let n = e.grid() / GRID;
        let half = FracExp::from_grid(e.grid() / 2);
        if n.rem_euclid(2) == 0 {
            even.add_term(half, c.clone());
        } else {
            odd.add_term(half, c.clone());
        }
    }
    Ok((even, odd))
}

/// `h = eta(tau)^-8 eta(2 tau)^-8` and its half-period parts `g0`, `g1`.
#[derive(Clone, Debug)]
pub struct WeightMinus8 {
    pub h: QSeries,
    pub g0: QSeries,
    pub g1: QSeries,
}

impl WeightMinus8 {
    /// `c(n)`, the coefficient of `q^n` in `h`.
    pub fn c(&self, n: i64) -> Result<BigInt> {
        Ok(self.h.known_coefficient(FracExp::integer(n))?.to_integer())
    }
}

pub fn h_function(order: FracExp) -> Result<QSeries> {
    EtaQuotient::new(&[(EtaScale::One, -8), (EtaScale::Two, -8)]).expand(order)
}

/// `h`, `g0`, `g1`; `g0` and `g1` are known below `order`, `h` below `2 * order`.
pub fn weight_minus8_functions(order: FracExp) -> Result<WeightMinus8> {
    let h_order = ceil_div(2 * order.grid(), GRID).max(0);
    let h = h_function(FracExp::integer(h_order))?;
    let (g0, g1) = half_period_pair(&h)?;
    Ok(WeightMinus8 { g0: g0.truncate(order), g1: g1.truncate(order), h })
}

fn sigma3(n: u64) -> BigInt {
    let mut s = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += BigInt::from(d).pow(3);
            let e = n / d;
            if e != d {
                s += BigInt::from(e).pow(3);
            }
        }
        d += 1;
    }
    s
}

/// Eisenstein series `E4 = 1 + 240 sum sigma_3(n) q^n`, known below `q^len`.
pub fn eisenstein_e4(len: usize) -> QSeries {
    let terms = (0..len).map(|n| {
        let c = if n == 0 { BigInt::one() } else { sigma3(n as u64) * 240 };
        (FracExp::integer(n as i64), BigRational::from_integer(c))
    });
    QSeries::from_terms(terms, Some(FracExp::integer(len as i64)))
}

/// The normalised modular invariant `J = E4^3 / Delta - 744`, known below `order`.
pub fn jay_function(order: FracExp) -> Result<QSeries> {
    if order < FracExp::integer(2) {
        return input(format!("J needs order >= 2, got {order}"));
    }
    let t = ceil_div(order.grid(), GRID);
    let e4 = eisenstein_e4((t + 1) as usize);
    let delta = EtaQuotient::new(&[(EtaScale::One, 24)]).expand(FracExp::integer(t + 2))?;
    let j = e4.pow(3)?.mul(&delta.inverse()?);
    Ok(j.add(&QSeries::monomial(FracExp::integer(0), rat(-744))).truncate(order))
}

/// Binary and unary combinators over series.
#[derive(Clone, Debug)]
pub enum SeriesOp {
    Add,
    Mul,
    Pow(i64),
    Scale(BigRational),
}

pub fn series_combine(a: &QSeries, b: Option<&QSeries>, op: &SeriesOp) -> Result<QSeries> {
    let need_b = || b.ok_or_else(|| Error::Input("operation needs a second series".into()));
    match op {
        SeriesOp::Add => Ok(a.add(need_b()?)),
        SeriesOp::Mul => Ok(a.mul(need_b()?)),
        SeriesOp::Pow(k) => a.pow(*k),
        SeriesOp::Scale(r) => Ok(a.scale(r)),
    }
}

/// One checked identity between the weight -8 functions and the string
/// functions.
#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub holds: bool,
}

/// Checks, coefficient by coefficient below `order`:
///
/// 1. `g0 + h = W_{H16}(c0, c1)`
/// 2. `g0 = W_{H16 + (1,1,0,...,0)}(c0, c1) = W_{(F_2^8)_1}(c0, c1) c2^8`
/// 3. `g0 = 2^3 c2^16`
/// 4. `g1 = W_{H16 + (1,0,...,0)}(c0, c1) = W_{(F_2^8)_0}(c0, c1) c2^8`
///
/// Enumerators are evaluated with the first slot (exponent `n - wt`) taking
/// `c0` and the second slot (exponent `wt`) taking `c1`.
pub fn modular_identities(order: FracExp) -> Result<Vec<IdentityCheck>> {
    use crate::codes::{BitWord, LinearCode};
    // c0 starts at q^(-1/16); sixteen-fold products lose that much precision.
    let s = string_functions(order + FracExp::integer(2))?;
    let w = weight_minus8_functions(order)?;
    let h16 = LinearCode::hamming_16();
    let f8 = LinearCode::even_weight(8)?;
    let pair = BitWord::unit(16, 1).add(&BitWord::unit(16, 2));
    let ev = |e: &WeightEnumerator| evaluate_enumerator(e, &s.c0, &s.c1);
    let c2_8 = s.c2.pow(8)?;
    let lhs_h = w.g0.add(&w.h);
    let w_h = ev(&h16.weight_enumerator()?)?;
    let w_pair = ev(&h16.coset_weight_enumerator(&pair)?)?;
    let w_f8_odd = ev(&f8.coset_weight_enumerator(&BitWord::unit(8, 1))?)?.mul(&c2_8);
    let c2_16 = s.c2.pow(16)?.scale(&rat(8));
    let w_unit = ev(&h16.coset_weight_enumerator(&BitWord::unit(16, 1))?)?;
    let w_f8_even = ev(&f8.weight_enumerator()?)?.mul(&c2_8);
    Ok(vec![
        IdentityCheck { name: "g0 + h = W_H16(c0,c1)", holds: lhs_h.agrees_below(&w_h, order)? },
        IdentityCheck {
            name: "g0 = W_H16+(1,1,0..0)(c0,c1) = W_(F8)1(c0,c1) c2^8",
            holds: w.g0.agrees_below(&w_pair, order)? && w.g0.agrees_below(&w_f8_odd, order)?,
        },
        IdentityCheck { name: "g0 = 2^3 c2^16", holds: w.g0.agrees_below(&c2_16, order)? },
        IdentityCheck {
            name: "g1 = W_H16+(1,0..0)(c0,c1) = W_(F8)0(c0,c1) c2^8",
            holds: w.g1.agrees_below(&w_unit, order)? && w.g1.agrees_below(&w_f8_even, order)?,
        },
    ])
}
