//! Theta series with group-ring coefficients and the character of the
//! orbifold VOA, built twice: from codes and string functions, and from the
//! cosets of the lattice `N` with the weight -8 functions `f_γ`.
//!
//! Weight keys are integer vectors `u` standing for the weight `u/√2`, so a
//! theta term `q^{s²/4} e^s` has exponent `u²/8`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

use crate::codes::{BitWord, LinearCode, WeightEnumerator};
use crate::error::{input, Error, Result};
use crate::lattices::enumerate::ShellPlan;
use crate::lattices::{lattice_n, linalg, Lattice};
use crate::qseries::{self, FracExp, QSeries, WeightMinus8, GRID};

pub type WeightKey = SmallVec<[i8; 16]>;

/// Highest `q` power for the weighted comparison of the two forms.
pub const WEIGHTED_CAP: i64 = 3;
/// Highest `q` power for fully materialised rank 16 series.
pub const MATERIALIZE_CAP: i64 = 1;
/// Highest `q` power for graded dimensions.
pub const SCALAR_CAP: i64 = 12;

/// Exponents of theta terms live on the grid `1/8`.
const EIGHTH: i64 = GRID / 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ThetaKind {
    /// `ϑ0`, over `2A1`: keys `u ∈ 4Z`.
    Zero,
    /// `ϑ1`, over `2A1 + √2`: keys `u ∈ 4Z + 2`.
    One,
    /// `ϑ2`, over `A1 + 1/√2`: odd keys.
    Two,
}

impl ThetaKind {
    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            0 => Ok(Self::Zero),
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            _ => input(format!("theta kind {i} is not 0, 1 or 2")),
        }
    }

    fn contains(&self, u: i64) -> bool {
        match self {
            Self::Zero => u.rem_euclid(4) == 0,
            Self::One => u.rem_euclid(4) == 2,
            Self::Two => u.rem_euclid(2) == 1,
        }
    }
}

/// A `q`-series with coefficients in the group ring of the weight lattice.
/// Terms are known for exponents below `trunc`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedSeries {
    rank: usize,
    terms: BTreeMap<(FracExp, WeightKey), i64>,
    trunc: FracExp,
}

impl WeightedSeries {
    pub fn zero(rank: usize, trunc: FracExp) -> Self {
        Self { rank, terms: BTreeMap::new(), trunc }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn trunc(&self) -> FracExp {
        self.trunc
    }

    pub fn terms(&self) -> &BTreeMap<(FracExp, WeightKey), i64> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: FracExp, key: WeightKey, c: i64) {
        debug_assert_eq!(key.len(), self.rank);
        if e >= self.trunc || c == 0 {
            return;
        }
        let entry = self.terms.entry((e, key));
        match entry {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn coefficient(&self, e: FracExp, key: &[i8]) -> i64 {
        self.terms.get(&(e, WeightKey::from_slice(key))).copied().unwrap_or(0)
    }

    pub fn valuation(&self) -> FracExp {
        self.terms.keys().next().map_or(self.trunc, |(e, _)| *e)
    }

    pub fn truncate(&self, t: FracExp) -> Self {
        let trunc = self.trunc.min(t);
        let terms = self.terms.iter().filter(|((e, _), _)| *e < trunc).map(|(k, v)| (k.clone(), *v)).collect();
        Self { rank: self.rank, terms, trunc }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rank != other.rank {
            return input("cannot add weighted series of different rank");
        }
        let mut out = self.truncate(other.trunc);
        for ((e, k), c) in &other.terms {
            out.add_term(*e, k.clone(), *c);
        }
        Ok(out)
    }

    /// Product in the tensor product of group rings: keys are concatenated.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let trunc = (self.trunc + other.valuation()).min(other.trunc + self.valuation());
        let mut out = Self::zero(self.rank + other.rank, trunc);
        for ((ea, ka), ca) in &self.terms {
            for ((eb, kb), cb) in &other.terms {
                let e = *ea + *eb;
                if e >= trunc {
                    continue;
                }
                let mut key = ka.clone();
                key.extend_from_slice(kb);
                let c = ca.checked_mul(*cb).ok_or(Error::Overflow("weighted series product"))?;
                out.add_term(e, key, c);
            }
        }
        Ok(out)
    }

    /// Multiplies by a scalar series with integer coefficients.
    pub fn scalar_mul(&self, s: &QSeries) -> Result<Self> {
        let st = s.trunc().unwrap_or(FracExp::from_grid(i64::MAX / 4));
        let sv = s.valuation().unwrap_or(st);
        let trunc = (self.trunc + sv).min(st + self.valuation());
        let terms = s.integer_terms()?;
        let mut out = Self::zero(self.rank, trunc);
        for ((e, k), c) in &self.terms {
            for (es, cs) in &terms {
                let cs = cs.to_i64().ok_or(Error::Overflow("scalar coefficient"))?;
                out.add_term(*e + *es, k.clone(), c * cs);
            }
        }
        Ok(out)
    }

    /// Sets every `e^s` to 1 and sums coefficients per exponent.
    pub fn specialize_z0(&self) -> QSeries {
        let mut by_exp: BTreeMap<FracExp, i64> = BTreeMap::new();
        for ((e, _), c) in &self.terms {
            *by_exp.entry(*e).or_default() += c;
        }
        QSeries::from_int_terms(by_exp, Some(self.trunc))
    }

    /// True when the coefficient of `u` equals that of `-u` everywhere.
    pub fn is_sign_symmetric(&self) -> bool {
        self.terms.iter().all(|((e, k), c)| {
            let neg: WeightKey = k.iter().map(|x| -x).collect();
            self.terms.get(&(*e, neg)) == Some(c)
        })
    }

    /// One term per line: `num/48<TAB>u1,…,un<TAB>coefficient`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for ((e, k), c) in &self.terms {
            let key: Vec<String> = k.iter().map(|x| x.to_string()).collect();
            s.push_str(&format!("{}/{}\t{}\t{}\n", e.grid(), GRID, key.join(","), c));
        }
        s
    }
}

/// `ϑ0`, `ϑ1` or `ϑ2` as a rank one weighted series, known below `order`.
pub fn theta_one_dim(kind: ThetaKind, order: FracExp) -> WeightedSeries {
    let mut out = WeightedSeries::zero(1, order);
    let mut u: i64 = 0;
    loop {
        let e = FracExp::from_grid(u * u * EIGHTH);
        if e >= order {
            break;
        }
        let signs: &[i64] = if u == 0 { &[0] } else { &[u, -u] };
        for &v in signs {
            if kind.contains(v) {
                out.add_term(e, WeightKey::from_slice(&[v as i8]), 1);
            }
        }
        u += 1;
    }
    out
}

/// The theta series at `z = 0`.
pub fn theta_scalar(kind: ThetaKind, order: FracExp) -> QSeries {
    theta_one_dim(kind, order).specialize_z0()
}

/// `(χ0, χ1, χ2)`: the level 2 characters of affine `A1`, known below `order`.
pub fn level2_characters(order: FracExp) -> Result<(WeightedSeries, WeightedSeries, WeightedSeries)> {
    let s = qseries::string_functions(order + FracExp::integer(1))?;
    let big = order + FracExp::integer(1);
    let t0 = theta_one_dim(ThetaKind::Zero, big);
    let t1 = theta_one_dim(ThetaKind::One, big);
    let t2 = theta_one_dim(ThetaKind::Two, big);
    let chi0 = t0.scalar_mul(&s.c0)?.add(&t1.scalar_mul(&s.c1)?)?.truncate(order);
    let chi1 = t0.scalar_mul(&s.c1)?.add(&t1.scalar_mul(&s.c0)?)?.truncate(order);
    let chi2 = t2.scalar_mul(&s.c2)?.truncate(order);
    Ok((chi0, chi1, chi2))
}

/// `f_γ`: `g0 + h` for `γ = 0`, `g0` for even `γ² ≠ 0`, `g1` for odd `γ²`.
/// `norm` is `γ²` modulo 2.
pub fn f_gamma(is_zero: bool, norm: &BigRational, w: &WeightMinus8) -> Result<QSeries> {
    if !norm.is_integer() {
        return input(format!("γ² = {norm} is not integral"));
    }
    let trunc = w.g0.trunc().expect("truncated");
    if is_zero {
        return Ok(w.g0.add(&w.h).truncate(trunc));
    }
    let parity = norm.to_integer().to_i64().expect("small").rem_euclid(2);
    Ok(if parity == 0 { w.g0.clone() } else { w.g1.clone() })
}

/// Integer series on the `1/48` grid, sorted by exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
struct IntSeries {
    terms: Vec<(i64, i64)>,
}

impl IntSeries {
    /// Requires `s` to be known through `q^through`.
    fn from_series(s: &QSeries, through: i64) -> Result<Self> {
        let need = FracExp::integer(through + 1);
        if s.trunc().is_some_and(|t| t < need) {
            return Err(Error::Consistency(format!("series known only below q^{}", s.trunc().unwrap())));
        }
        let terms = s
            .truncate(need)
            .integer_terms()?
            .into_iter()
            .map(|(e, c)| Ok((e.grid(), c.to_i64().ok_or(Error::Overflow("scalar coefficient"))?)))
            .collect::<Result<_>>()?;
        Ok(Self { terms })
    }

    fn valuation(&self) -> i64 {
        self.terms.first().map_or(i64::MAX / 4, |t| t.0)
    }
}

/// A class of `N'/N`, named by `δ = u mod 2` and the syndrome of
/// `r = (u - δ)/2 mod 2` against the Hamming code, for any key `u` in it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassId {
    pub delta: u32,
    pub syndrome: u8,
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "δ={} s={:05b}", BitWord::new(self.delta, 16).expect("16 bits"), self.syndrome)
    }
}

/// Which part of the code-form scalar multiplies a product of thetas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Scalar {
    Coset(u8),
    F8Odd,
    F8Even,
    AllTwo,
    FZero,
    FEven,
    FOdd,
}

/// Precomputed scalar series and code data for one truncation.
struct Ingredients {
    through: i64,
    checks: Vec<u32>,
    coset_words: Vec<Vec<u32>>,
    deltas: Vec<u32>,
    coset: Vec<IntSeries>,
    f8_odd: IntSeries,
    f8_even: IntSeries,
    all_two: IntSeries,
    f_zero: IntSeries,
    f_even: IntSeries,
    f_odd: IntSeries,
}

impl Ingredients {
    fn new(through: i64) -> Result<Self> {
        let rm = LinearCode::reed_muller_16();
        let h16 = LinearCode::hamming_16();
        let checks: Vec<u32> = rm.generators().iter().map(|g| g.bits()).collect();
        let mut coset_words = vec![Vec::new(); 32];
        for r in 0u32..1 << 16 {
            coset_words[syndrome(&checks, r) as usize].push(r);
        }
        let deltas: Vec<u32> = rm.words().iter().map(|w| w.bits()).collect();
        let order = FracExp::integer(through + 1);
        let s = qseries::string_functions(order + FracExp::integer(2))?;
        let ev = |w: &WeightEnumerator| qseries::evaluate_enumerator(w, &s.c0, &s.c1);
        let mut by_enum: BTreeMap<Vec<u64>, IntSeries> = BTreeMap::new();
        let mut coset = Vec::new();
        for words in &coset_words {
            let rep = BitWord::new(words[0], 16)?;
            let we = h16.coset_weight_enumerator(&rep)?;
            let series = match by_enum.get(we.counts()) {
                Some(x) => x.clone(),
                None => {
                    let x = IntSeries::from_series(&ev(&we)?, through)?;
                    by_enum.insert(we.counts().to_vec(), x.clone());
                    x
                }
            };
            coset.push(series);
        }
        let f8 = LinearCode::even_weight(8)?;
        let c2_8 = s.c2.pow(8)?;
        let odd = f8.coset_weight_enumerator(&BitWord::unit(8, 1))?;
        let f8_odd = IntSeries::from_series(&ev(&odd)?.mul(&c2_8), through)?;
        let f8_even = IntSeries::from_series(&ev(&f8.weight_enumerator()?)?.mul(&c2_8), through)?;
        let all_two = IntSeries::from_series(&s.c2.pow(16)?.scale(&linalg::rat(8)), through)?;
        let w = qseries::weight_minus8_functions(order)?;
        let f_zero = IntSeries::from_series(&f_gamma(true, &linalg::rat(0), &w)?, through)?;
        let f_even = IntSeries::from_series(&f_gamma(false, &linalg::rat(0), &w)?, through)?;
        let f_odd = IntSeries::from_series(&f_gamma(false, &linalg::rat(1), &w)?, through)?;
        Ok(Self { through, checks, coset_words, deltas, coset, f8_odd, f8_even, all_two, f_zero, f_even, f_odd })
    }

    fn scalar(&self, s: Scalar) -> &IntSeries {
        match s {
            Scalar::Coset(i) => &self.coset[i as usize],
            Scalar::F8Odd => &self.f8_odd,
            Scalar::F8Even => &self.f8_even,
            Scalar::AllTwo => &self.all_two,
            Scalar::FZero => &self.f_zero,
            Scalar::FEven => &self.f_even,
            Scalar::FOdd => &self.f_odd,
        }
    }

    /// Largest `u²` (the theta exponent in eighths) worth generating.
    fn eighths_budget(&self, s: Scalar) -> i64 {
        let room = self.through * GRID - self.scalar(s).valuation();
        if room < 0 {
            -1
        } else {
            room / EIGHTH
        }
    }

    fn classes(&self) -> Vec<ClassId> {
        let mut out = Vec::new();
        for &delta in &self.deltas {
            for s in 0..32u8 {
                out.push(ClassId { delta, syndrome: s });
            }
        }
        out
    }

    fn class_of(&self, u: &[i8]) -> ClassId {
        let mut delta = 0u32;
        let mut r = 0u32;
        for (i, &x) in u.iter().enumerate() {
            let x = x as i64;
            let d = x.rem_euclid(2);
            delta |= (d as u32) << i;
            r |= ((((x - d) / 2).rem_euclid(2)) as u32) << i;
        }
        ClassId { delta, syndrome: syndrome(&self.checks, r) }
    }

    /// Code form restricted to one class: calls `emit(key, u², scalar)` for
    /// each key of each theta product.
    fn code_form_class(&self, class: ClassId, emit: &mut impl FnMut(&[i8], i64, Scalar)) {
        let delta = class.delta;
        let weight = delta.count_ones();
        for &r in &self.coset_words[class.syndrome as usize] {
            let scalar = match weight {
                0 => Scalar::Coset(class.syndrome),
                16 => Scalar::AllTwo,
                _ => {
                    // (F_2^8)_1 + d' is the odd half when d' is even.
                    if (r & !delta).count_ones().is_multiple_of(2) {
                        Scalar::F8Odd
                    } else {
                        Scalar::F8Even
                    }
                }
            };
            let budget = self.eighths_budget(scalar);
            if budget < 0 {
                continue;
            }
            // Residue of u mod 4 on each coordinate; ϑ2 is split into its
            // 1 mod 4 and 3 mod 4 halves to route keys to classes.
            let mut residues = [0i64; 16];
            for (i, res) in residues.iter_mut().enumerate() {
                let on = delta >> i & 1 == 1;
                let bit = (r >> i & 1) as i64;
                *res = if on { 1 + 2 * bit } else { 2 * bit };
            }
            for_each_product_key(&residues, budget, &mut |key, eighths| emit(key, eighths, scalar));
        }
    }
}

fn syndrome(checks: &[u32], r: u32) -> u8 {
    checks.iter().enumerate().fold(0u8, |s, (j, c)| s | ((((c & r).count_ones() & 1) as u8) << j))
}

/// All keys `u` with `u_i ≡ residues[i] mod 4` and `Σ u_i² ≤ budget`.
fn for_each_product_key(residues: &[i64; 16], budget: i64, f: &mut impl FnMut(&[i8], i64)) {
    let bound = budget.max(0).isqrt() + 4;
    let cands: Vec<Vec<i64>> = residues
        .iter()
        .map(|&r| {
            let mut c: Vec<i64> = (-bound..=bound).filter(|u| u.rem_euclid(4) == r && u * u <= budget).collect();
            c.sort_by_key(|u| (u * u, *u));
            c
        })
        .collect();
    if cands.iter().any(Vec::is_empty) {
        return;
    }
    let mut suffix = [0i64; 17];
    for i in (0..16).rev() {
        suffix[i] = suffix[i + 1] + cands[i][0] * cands[i][0];
    }
    let mut key = [0i8; 16];
    fn rec(
        i: usize,
        rem: i64,
        cands: &[Vec<i64>],
        suffix: &[i64; 17],
        key: &mut [i8; 16],
        budget: i64,
        f: &mut impl FnMut(&[i8], i64),
    ) {
        if i == 16 {
            f(key, budget - rem);
            return;
        }
        for &u in &cands[i] {
            let cost = u * u;
            if cost + suffix[i + 1] > rem {
                break;
            }
            key[i] = u as i8;
            rec(i + 1, rem - cost, cands, suffix, key, budget, f);
        }
    }
    rec(0, budget, &cands, &suffix, &mut key, budget, f);
}

/// The lattice `N` with an enumeration plan whose images are keys `u = 2x`.
struct CosetEnumerator {
    n: Lattice,
    plan: ShellPlan,
}

impl CosetEnumerator {
    fn new() -> Result<Self> {
        let n = lattice_n();
        let rows: Vec<Vec<i64>> = n
            .embedding()
            .expect("N is embedded")
            .basis
            .iter()
            .map(|r| r.iter().map(|x| 2 * x.to_integer().to_i64().expect("small")).collect())
            .collect();
        let plan = ShellPlan::new(n.gram(), &rows)?;
        Ok(Self { n, plan })
    }

    /// Lattice form restricted to the class of `γ` (basis coordinates).
    fn lattice_form_class(
        &self,
        ing: &Ingredients,
        gamma: &[BigRational],
        scalar: Scalar,
        emit: &mut impl FnMut(&[i8], i64, Scalar),
    ) -> Result<()> {
        let budget = ing.eighths_budget(scalar);
        if budget < 0 {
            return Ok(());
        }
        let shift = self.key_of(gamma)?;
        // u² ≤ budget  ⇔  x² ≤ budget / 4.
        let q = self.plan.query(gamma, &linalg::ratio(budget, 4), false)?;
        let mut key = [0i8; 16];
        self.plan.run(&q, |img, _| {
            let mut eighths = 0i64;
            for t in 0..16 {
                let u = img[t] + shift[t];
                key[t] = u as i8;
                eighths += u * u;
            }
            emit(&key, eighths, scalar);
        });
        Ok(())
    }

    /// `u = 2x` for `x` the ambient vector of `γ`.
    fn key_of(&self, gamma: &[BigRational]) -> Result<Vec<i64>> {
        let x = self.n.ambient(gamma).expect("embedded");
        x.iter()
            .map(|c| {
                let u = c * linalg::rat(2);
                if u.is_integer() {
                    Ok(u.to_integer().to_i64().expect("small"))
                } else {
                    Err(Error::Consistency(format!("coset shift {c} is not in N'")))
                }
            })
            .collect()
    }
}

fn check_through(through: i64, cap: i64, what: &str) -> Result<()> {
    if through < -1 {
        return input(format!("{what}: order q^{through} is below the vacuum"));
    }
    if through > cap {
        return Err(Error::Resource(format!("{what}: order q^{through} exceeds the cap q^{cap}")));
    }
    Ok(())
}

fn materialize(
    ing: &Ingredients,
    collect: impl FnOnce(&mut dyn FnMut(&[i8], i64, Scalar)) -> Result<()>,
) -> Result<WeightedSeries> {
    let order = FracExp::integer(ing.through + 1);
    let mut out = WeightedSeries::zero(16, order);
    let mut sink = |key: &[i8], eighths: i64, s: Scalar| {
        let e = eighths * EIGHTH;
        for &(es, c) in &ing.scalar(s).terms {
            if e + es >= order.grid() {
                break;
            }
            out.add_term(FracExp::from_grid(e + es), WeightKey::from_slice(key), c);
        }
    };
    collect(&mut sink)?;
    Ok(out)
}

/// `χ_V` from the code-theoretic formula, known through `q^through`.
pub fn chi_v_code_form(through: i64) -> Result<WeightedSeries> {
    check_through(through, MATERIALIZE_CAP, "code form")?;
    let ing = Ingredients::new(through)?;
    materialize(&ing, |sink| {
        for class in ing.classes() {
            ing.code_form_class(class, &mut |k, e, s| sink(k, e, s));
        }
        Ok(())
    })
}

/// `χ_V = Σ_γ f_γ Θ_{√2(N+γ)}`, known through `q^through`.
pub fn chi_v_lattice_form(through: i64) -> Result<WeightedSeries> {
    check_through(through, MATERIALIZE_CAP, "lattice form")?;
    let ing = Ingredients::new(through)?;
    let ce = CosetEnumerator::new()?;
    let dg = ce.n.discriminant_group()?;
    materialize(&ing, |sink| {
        for el in dg.elements() {
            let scalar = lattice_scalar(el.coords.iter().all(Zero::is_zero), &el.norm)?;
            ce.lattice_form_class(&ing, &el.coords, scalar, &mut |k, e, s| sink(k, e, s))?;
        }
        Ok(())
    })
}

fn lattice_scalar(is_zero: bool, norm: &BigRational) -> Result<Scalar> {
    if !norm.is_integer() {
        return input(format!("γ² = {norm} is not integral"));
    }
    Ok(if is_zero {
        Scalar::FZero
    } else if norm.to_integer().is_even() {
        Scalar::FEven
    } else {
        Scalar::FOdd
    })
}

trait IsEven {
    fn is_even(&self) -> bool;
}

impl IsEven for BigInt {
    fn is_even(&self) -> bool {
        num_integer::Integer::is_even(self)
    }
}

type Coeffs = SmallVec<[i64; 8]>;

/// Per-class list of keys with their coefficients at `q^{-1}, …, q^through`.
struct ClassCollector {
    through: i64,
    rows: Vec<(WeightKey, Coeffs)>,
    fractional: u64,
}

impl ClassCollector {
    fn new(through: i64) -> Self {
        Self { through, rows: Vec::new(), fractional: 0 }
    }

    fn push(&mut self, ing: &Ingredients, key: &[i8], eighths: i64, s: Scalar) {
        let mut c: Coeffs = SmallVec::from_elem(0, (self.through + 2) as usize);
        let e = eighths * EIGHTH;
        for &(es, v) in &ing.scalar(s).terms {
            let t = e + es;
            if t > self.through * GRID {
                break;
            }
            if t % GRID != 0 || t < -GRID {
                self.fractional += 1;
                continue;
            }
            c[(t / GRID + 1) as usize] += v;
        }
        self.rows.push((WeightKey::from_slice(key), c));
    }

    /// Sorted by key, duplicates merged, all-zero rows dropped.
    fn finish(mut self) -> (Vec<(WeightKey, Coeffs)>, u64) {
        self.rows.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(WeightKey, Coeffs)> = Vec::with_capacity(self.rows.len());
        for (k, c) in self.rows {
            match out.last_mut() {
                Some((lk, lc)) if *lk == k => {
                    for (a, b) in lc.iter_mut().zip(&c) {
                        *a += b;
                    }
                }
                _ => out.push((k, c)),
            }
        }
        out.retain(|(_, c)| c.iter().any(|&x| x != 0));
        (out, self.fractional)
    }
}

/// Outcome of comparing the code form with the lattice form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormComparison {
    pub through: i64,
    pub classes: usize,
    pub keys_compared: u64,
    pub mismatched_keys: u64,
    pub first_mismatch: Option<String>,
    /// Nonzero terms at non-integral exponents (the forms must have none).
    pub fractional_terms: u64,
    /// Graded dimensions `q^{-1}, …, q^through` from the code side.
    pub dimensions: Vec<i64>,
    /// True when the classes of `N'/N` matched the code-side classes.
    pub classes_match: bool,
}

impl FormComparison {
    pub fn equal(&self) -> bool {
        self.classes_match && self.mismatched_keys == 0 && self.fractional_terms == 0
    }
}

/// Compares the two constructions of `χ_V` key by key through `q^through`,
/// one class of `N'/N` at a time.
pub fn compare_forms(through: i64) -> Result<FormComparison> {
    check_through(through, WEIGHTED_CAP, "form comparison")?;
    let ing = Ingredients::new(through)?;
    let ce = CosetEnumerator::new()?;
    let dg = ce.n.discriminant_group()?;
    let code_classes: BTreeSet<ClassId> = ing.classes().into_iter().collect();
    let mut lattice_classes = BTreeSet::new();
    let mut report = FormComparison {
        through,
        classes: dg.order(),
        keys_compared: 0,
        mismatched_keys: 0,
        first_mismatch: None,
        fractional_terms: 0,
        dimensions: vec![0; (through + 2) as usize],
        classes_match: true,
    };
    for el in dg.elements() {
        let shift: Vec<i8> = ce.key_of(&el.coords)?.iter().map(|&x| x as i8).collect();
        let class = ing.class_of(&shift);
        lattice_classes.insert(class);
        let scalar = lattice_scalar(el.coords.iter().all(Zero::is_zero), &el.norm)?;
        let mut lat = ClassCollector::new(through);
        ce.lattice_form_class(&ing, &el.coords, scalar, &mut |k, e, s| lat.push(&ing, k, e, s))?;
        let mut code = ClassCollector::new(through);
        ing.code_form_class(class, &mut |k, e, s| code.push(&ing, k, e, s));
        let (lat, lf) = lat.finish();
        let (code, cf) = code.finish();
        report.fractional_terms += lf + cf;
        for (_, c) in &code {
            for (d, x) in report.dimensions.iter_mut().zip(c) {
                *d += x;
            }
        }
        merge_compare(&lat, &code, class, &mut report);
    }
    report.classes_match = lattice_classes == code_classes && lattice_classes.len() == dg.order();
    Ok(report)
}

fn merge_compare(lat: &[(WeightKey, Coeffs)], code: &[(WeightKey, Coeffs)], class: ClassId, r: &mut FormComparison) {
    let (mut i, mut j) = (0, 0);
    let note = |r: &mut FormComparison, msg: String| {
        r.mismatched_keys += 1;
        if r.first_mismatch.is_none() {
            r.first_mismatch = Some(format!("class {class}: {msg}"));
        }
    };
    while i < lat.len() || j < code.len() {
        r.keys_compared += 1;
        match (lat.get(i), code.get(j)) {
            (Some(a), Some(b)) if a.0 == b.0 => {
                if a.1 != b.1 {
                    note(
                        r,
                        format!("key {:?}: lattice {:?} code {:?}", a.0.as_slice(), a.1.as_slice(), b.1.as_slice()),
                    );
                }
                i += 1;
                j += 1;
            }
            (Some(a), b) if b.is_none_or(|b| a.0 < b.0) => {
                note(r, format!("key {:?} only in the lattice form", a.0.as_slice()));
                i += 1;
            }
            (_, Some(b)) => {
                note(r, format!("key {:?} only in the code form", b.0.as_slice()));
                j += 1;
            }
            (None, None) => unreachable!(),
            (Some(_), None) => unreachable!(),
        }
    }
}

/// Graded dimensions of `χ_V` at `z = 0` from the code form, as a series
/// known through `q^through`. Products over the 2^16 vectors `d` are grouped
/// by coset and weight, giving `W_{H+r}(c0,c1) W_{H+r}(ϑ0,ϑ1)`.
pub fn graded_dimension_code_form(through: i64) -> Result<QSeries> {
    check_through(through, SCALAR_CAP, "graded dimension")?;
    let order = FracExp::integer(through + 1);
    let big = order + FracExp::integer(2);
    let s = qseries::string_functions(big)?;
    let t0 = theta_scalar(ThetaKind::Zero, big);
    let t1 = theta_scalar(ThetaKind::One, big);
    let t2 = theta_scalar(ThetaKind::Two, big);
    let h16 = LinearCode::hamming_16();
    let mut total = QSeries::zero(None);
    for rep in h16.coset_representatives()? {
        let we = h16.coset_weight_enumerator(&rep)?;
        let term = qseries::evaluate_enumerator(&we, &s.c0, &s.c1)?.mul(&qseries::evaluate_enumerator(&we, &t0, &t1)?);
        total = total.add(&term);
    }
    let f8 = LinearCode::even_weight(8)?;
    let even = f8.weight_enumerator()?;
    let odd = f8.coset_weight_enumerator(&BitWord::unit(8, 1))?;
    let ev = qseries::evaluate_enumerator;
    let mixed =
        ev(&odd, &s.c0, &s.c1)?.mul(&ev(&even, &t0, &t1)?).add(&ev(&even, &s.c0, &s.c1)?.mul(&ev(&odd, &t0, &t1)?));
    let octads = LinearCode::reed_muller_16().words().iter().filter(|w| w.weight() == 8).count() as i64;
    let middle = mixed.mul(&s.c2.pow(8)?).mul(&t2.pow(8)?).scale(&linalg::rat(octads));
    let top = s.c2.pow(16)?.mul(&t2.pow(16)?).scale(&linalg::rat(8));
    Ok(total.add(&middle).add(&top).truncate(order))
}

/// Graded dimensions at `z = 0` from the lattice form, using theta counts of
/// the cosets `N + γ`.
pub fn graded_dimension_lattice_form(through: i64) -> Result<QSeries> {
    check_through(through, WEIGHTED_CAP, "graded dimension")?;
    let ing = Ingredients::new(through)?;
    let n = lattice_n();
    let plan = ShellPlan::new(n.gram(), &vec![Vec::new(); 16])?;
    let dg = n.discriminant_group()?;
    let mut dims = vec![0i64; (through + 2) as usize];
    for el in dg.elements() {
        let scalar = lattice_scalar(el.coords.iter().all(Zero::is_zero), &el.norm)?;
        let budget = ing.eighths_budget(scalar);
        if budget < 0 {
            continue;
        }
        let q = plan.query(&el.coords, &linalg::ratio(budget, 4), false)?;
        let mut hist: BTreeMap<i128, i64> = BTreeMap::new();
        plan.run(&q, |_, v| *hist.entry(v).or_default() += 1);
        for (v, count) in hist {
            // x²/2 on the 1/48 grid.
            let x2 = enumerate_norm(v, &q.norm_den)?;
            let e = x2 * GRID / 2;
            for &(es, c) in &ing.scalar(scalar).terms {
                let t = e + es;
                if t > through * GRID {
                    break;
                }
                if t % GRID != 0 {
                    return Err(Error::Consistency(format!("fractional exponent {t}/48 at z = 0")));
                }
                dims[(t / GRID + 1) as usize] += count * c;
            }
        }
    }
    Ok(QSeries::from_int_terms(
        dims.iter().enumerate().map(|(i, &c)| (FracExp::integer(i as i64 - 1), c)),
        Some(FracExp::integer(through + 1)),
    ))
}

fn enumerate_norm(v: i128, den: &BigInt) -> Result<i64> {
    let r = BigRational::new(BigInt::from(v), den.clone());
    if !r.is_integer() {
        return Err(Error::Consistency(format!("coset norm {r} is not integral")));
    }
    Ok(r.to_integer().to_i64().expect("small"))
}

/// One stratum of the decomposition of `V` into `V_{A_{1,2}^16}`-modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusStratum {
    pub delta: BitWord,
    /// Number of distinct labels `M(i_1, …, i_16)`.
    pub labels: u64,
    /// Multiplicity of each label.
    pub multiplicity: u64,
}

/// Label counts per `δ ∈ H16^⊥`, found by searching `{0,1,2}^16`.
pub fn decomposition_census() -> Vec<CensusStratum> {
    let h16 = LinearCode::hamming_16();
    let mut out = Vec::new();
    for delta in LinearCode::reed_muller_16().words() {
        let stratum = match delta.weight() {
            0 => {
                // M(c) for c ∈ H16: labels with entries 0/1 forming a codeword.
                let mut count = 0;
                search_labels(&delta, &mut |lab| {
                    let c = BitWord::from_coords(&lab.iter().map(|&i| i.min(1)).collect::<Vec<_>>()).expect("bits");
                    if lab.iter().all(|&i| i < 2) && h16.contains(&c) {
                        count += 1;
                    }
                });
                CensusStratum { delta, labels: count, multiplicity: 1 }
            }
            16 => CensusStratum { delta, labels: 1, multiplicity: 8 },
            _ => {
                let mut count = 0;
                search_labels(&delta, &mut |lab| {
                    if lab.iter().filter(|&&i| i == 1).count() % 2 == 1 {
                        count += 1;
                    }
                });
                CensusStratum { delta, labels: count, multiplicity: 1 }
            }
        };
        out.push(stratum);
    }
    out
}

/// Labels with `[i_k/2] = δ_k` for all `k`.
fn search_labels(delta: &BitWord, f: &mut impl FnMut(&[u8])) {
    fn rec(k: usize, delta: &BitWord, lab: &mut [u8; 16], f: &mut impl FnMut(&[u8])) {
        if k == 16 {
            f(lab);
            return;
        }
        for i in 0..3u8 {
            if i / 2 == delta.get(k + 1) {
                lab[k] = i;
                rec(k + 1, delta, lab, f);
            }
        }
    }
    rec(0, delta, &mut [0u8; 16], f);
}

/// Graded dimensions from the census: `Σ mult · Π χ_{i_k}(z=0)`.
pub fn graded_dimension_from_census(through: i64) -> Result<QSeries> {
    check_through(through, SCALAR_CAP, "graded dimension")?;
    let order = FracExp::integer(through + 1);
    let big = order + FracExp::integer(2);
    let (x0, x1, x2) = level2_characters(big)?;
    let chi = [x0.specialize_z0(), x1.specialize_z0(), x2.specialize_z0()];
    let h16 = LinearCode::hamming_16();
    let mut total = QSeries::zero(None);
    for st in decomposition_census() {
        // Group labels by how many entries equal 0, 1 and 2.
        let mut shapes: BTreeMap<[usize; 3], u64> = BTreeMap::new();
        let w = st.delta.weight();
        search_labels(&st.delta, &mut |lab| {
            let ones = lab.iter().filter(|&&i| i == 1).count();
            let keep = match w {
                0 => {
                    let c = BitWord::from_coords(lab).expect("bits");
                    h16.contains(&c)
                }
                16 => true,
                _ => ones % 2 == 1,
            };
            if keep {
                let twos = lab.iter().filter(|&&i| i == 2).count();
                *shapes.entry([16 - ones - twos, ones, twos]).or_default() += 1;
            }
        });
        for (shape, count) in shapes {
            let mut term = QSeries::one();
            for (i, &p) in shape.iter().enumerate() {
                term = term.mul(&chi[i].pow(p as i64)?);
            }
            total = total.add(&term.scale(&linalg::rat((count * st.multiplicity) as i64)));
        }
    }
    Ok(total.truncate(order))
}

/// `J + 48`, known through `q^through`.
pub fn j_plus_48(through: i64) -> Result<QSeries> {
    let j = qseries::jay_function(FracExp::integer((through + 1).max(2)))?;
    Ok(j.add(&QSeries::monomial(FracExp::integer(0), linalg::rat(48))).truncate(FracExp::integer(through + 1)))
}

/// Coefficients of `q^{-1}, …, q^through` as integers.
pub fn dimension_list(s: &QSeries, through: i64) -> Result<Vec<BigInt>> {
    (-1..=through)
        .map(|n| {
            let c = s.known_coefficient(FracExp::integer(n))?;
            if c.is_negative() || !c.is_integer() {
                return Err(Error::Consistency(format!("dimension {c} at q^{n}")));
            }
            Ok(c.to_integer())
        })
        .collect()
}
