//! Root system of the generalized Kac-Moody algebra with root lattice
//! `L' = Λ16' ⊕ II_{1,1}(2)'`: multiplicities, simple roots, reduction to the
//! fundamental chamber, the Weyl orbit of `ρ` and a truncated check of the
//! denominator identity.
//!
//! A vector `(s, m, n)` is stored as the doubled coordinates `z` of `s` in
//! the Barnes-Wall model (form `z·z'/8`) together with `m2 = 2m`, `n2 = 2n`.
//! Its norm is `s² − 4mn = z²/8 − m2·n2`. Heights are measured against
//! `ρ' = (0, 1/2, 1)` and specialised as `e^α ↦ t^{−4(ρ',α)} = t^{2 n2 + 4 m2}`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{input, Error, Result};
use crate::lattices::cache::EnumerationCache;
use crate::lattices::enumerate::ShellPlan;
use crate::lattices::linalg::{self, rat, ratio};
use crate::lattices::{lattice_l, Lattice};
use crate::qseries::{self, FracExp, WeightMinus8};

/// Default cap on reflections in [`RootSystem::reduce_to_chamber`].
pub const MAX_STEPS: usize = 1_000_000;
/// Largest `t`-exponent accepted for the denominator identity.
pub const DENOMINATOR_CAP: i64 = 16;
/// Largest `t`-exponent accepted for the exponent-consistency check.
pub const CONSISTENCY_CAP: i64 = 20;
/// Largest height accepted when listing simple roots.
pub const SIMPLE_ROOT_CAP: i64 = 3;

pub type Z16 = [i64; 16];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootVector {
    pub z: Z16,
    pub m2: i64,
    pub n2: i64,
}

fn dot(a: &Z16, b: &Z16) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl RootVector {
    pub fn new(z: Z16, m2: i64, n2: i64) -> Self {
        Self { z, m2, n2 }
    }

    /// `(0, m2/2, n2/2)`.
    pub fn hyperbolic(m2: i64, n2: i64) -> Self {
        Self { z: [0; 16], m2, n2 }
    }

    /// Parses `z1,…,z16,m2,n2`, or `0,m2,n2` for `s = 0`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<i64> = text
            .split(',')
            .map(|p| p.trim().parse::<i64>().map_err(|e| Error::Input(format!("bad vector entry {p:?}: {e}"))))
            .collect::<Result<_>>()?;
        match parts.len() {
            3 if parts[0] == 0 => Ok(Self::hyperbolic(parts[1], parts[2])),
            18 => {
                let mut z = [0; 16];
                z.copy_from_slice(&parts[..16]);
                Ok(Self::new(z, parts[16], parts[17]))
            }
            n => input(format!("expected 18 integers z1..z16,m2,n2 (or 0,m2,n2), got {n}")),
        }
    }

    /// Eight times the norm.
    pub fn norm8(&self) -> i64 {
        dot(&self.z, &self.z) - 8 * self.m2 * self.n2
    }

    pub fn norm(&self) -> BigRational {
        ratio(self.norm8(), 8)
    }

    /// Eight times the inner product.
    pub fn pairing8(&self, other: &Self) -> i64 {
        dot(&self.z, &other.z) - 4 * (self.m2 * other.n2 + self.n2 * other.m2)
    }

    pub fn pairing(&self, other: &Self) -> BigRational {
        ratio(self.pairing8(other), 8)
    }

    /// Exponent of `t` under `e^α ↦ t^{−4(ρ',α)}`.
    pub fn t_exponent(&self) -> i64 {
        2 * self.n2 + 4 * self.m2
    }

    /// `−(ρ', α)`.
    pub fn height(&self) -> BigRational {
        ratio(self.t_exponent(), 4)
    }

    pub fn is_zero(&self) -> bool {
        self.m2 == 0 && self.n2 == 0 && self.z.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(1, other)
    }

    /// `self + k·other`.
    pub fn combine(&self, k: i64, other: &Self) -> Self {
        let mut z = self.z;
        for (a, b) in z.iter_mut().zip(&other.z) {
            *a += k * b;
        }
        Self { z, m2: self.m2 + k * other.m2, n2: self.n2 + k * other.n2 }
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::hyperbolic(0, 0).combine(k, self)
    }

    pub fn negate_s(&self) -> Self {
        let mut z = self.z;
        z.iter_mut().for_each(|x| *x = -*x);
        Self { z, ..*self }
    }

    fn coordinates(self) -> Vec<i64> {
        let mut v = self.z.to_vec();
        v.push(self.m2);
        v.push(self.n2);
        v
    }

    fn from_slice(v: &[i64]) -> Result<Self> {
        if v.len() < 18 {
            return input("root vector needs 18 entries");
        }
        let mut z = [0; 16];
        z.copy_from_slice(&v[..16]);
        Ok(Self::new(z, v[16], v[17]))
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let half = |x: i64| ratio(x, 2).to_string();
        if self.z.iter().all(|&x| x == 0) {
            write!(f, "(0,{},{})", half(self.m2), half(self.n2))
        } else {
            let z: Vec<String> = self.z.iter().map(i64::to_string).collect();
            write!(f, "([{}]/2,{},{})", z.join(" "), half(self.m2), half(self.n2))
        }
    }
}

/// `ρ = (0, 0, 1/2)`.
pub fn weyl_vector() -> RootVector {
    RootVector::hyperbolic(0, 1)
}

/// `ρ' = (0, 1/2, 1)`, the interior reference vector defining heights.
pub fn reference_vector() -> RootVector {
    RootVector::hyperbolic(1, 2)
}

/// Rank of `L'`, which is the dimension of the Cartan subalgebra.
pub fn cartan_dimension() -> usize {
    lattice_l().rank()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberReduction {
    pub input: RootVector,
    pub reduced: RootVector,
    /// Simple roots in the order they were applied.
    pub word: Vec<RootVector>,
    /// `det(w) = (−1)^{|word|}`.
    pub parity: i8,
}

/// Integer rows `z` of a basis and an integer form of the inverse.
#[derive(Clone, Debug)]
struct ZBasis {
    rows: Vec<Z16>,
    inv: Vec<Vec<i64>>,
    inv_den: i64,
    plan: ShellPlan,
}

impl ZBasis {
    fn new(lat: &Lattice) -> Result<Self> {
        let basis = &lat.embedding().expect("embedded").basis;
        let mut rows = Vec::new();
        for r in basis {
            let mut z = [0; 16];
            for (a, x) in z.iter_mut().zip(r) {
                if !x.is_integer() {
                    return Err(Error::Consistency(format!("{} basis is not integral in z", lat.label())));
                }
                *a = x.to_integer().to_i64().expect("small");
            }
            rows.push(z);
        }
        let inv = linalg::inverse(basis).expect("nondegenerate basis");
        let (flat, den) = linalg::integer_numerators(&inv.concat());
        let inv = flat.chunks(16).map(|c| c.iter().map(|x| x.to_i64().expect("small")).collect()).collect();
        let image: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        let plan = ShellPlan::new(lat.gram(), &image)?;
        Ok(Self { rows, inv, inv_den: den.to_i64().expect("small"), plan })
    }

    /// Numerators of `z·B^{-1}` over `inv_den`.
    fn coords_num(&self, z: &Z16) -> Vec<i64> {
        (0..16).map(|j| (0..16).map(|i| z[i] * self.inv[i][j]).sum()).collect()
    }

    /// Calls `f(s)` for each lattice vector `s` with `|s − c|² < bound`
    /// (or `≤` when `strict` is false), where `c = centre / den` in `z`.
    fn ball(&self, centre: &Z16, den: i64, bound: &BigRational, strict: bool, mut f: impl FnMut(&Z16)) -> Result<()> {
        let nums: Vec<i64> = self.coords_num(centre).iter().map(|x| -x).collect();
        let q = self.plan.query_num(&nums, den * self.inv_den, bound, strict)?;
        let mut z = [0; 16];
        self.plan.run(&q, |img, _| {
            z.copy_from_slice(img);
            f(&z);
        });
        Ok(())
    }
}

/// Number of vectors of each integral norm.
pub type NormHistogram = BTreeMap<i64, u64>;

/// `Λ16`, `Λ16'` with enumeration plans, and the functions `h`, `g0`, `g1`.
#[derive(Clone, Debug)]
pub struct RootSystem {
    bw: ZBasis,
    dual: ZBasis,
    bw_lattice: Lattice,
    dual_lattice: Lattice,
    w: WeightMinus8,
    /// `g0`, `g1` are known below `q^order`.
    order: i64,
    pub max_steps: usize,
}

impl RootSystem {
    /// Multiplicities are available for `−α²/2 < order`.
    pub fn new(order: i64) -> Result<Self> {
        if order < 1 {
            return input("multiplicity order must be at least 1");
        }
        let bw_lattice = Lattice::barnes_wall_16();
        let dual_lattice = bw_lattice.dual()?;
        Ok(Self {
            bw: ZBasis::new(&bw_lattice)?,
            dual: ZBasis::new(&dual_lattice)?,
            bw_lattice,
            dual_lattice,
            w: qseries::weight_minus8_functions(FracExp::integer(order))?,
            order,
            max_steps: MAX_STEPS,
        })
    }

    /// A root system able to evaluate the multiplicity of `α`.
    pub fn for_vector(alpha: &RootVector) -> Result<Self> {
        let e = (-alpha.norm8()).div_euclid(16);
        Self::new((e + 1).max(1))
    }

    pub fn weight_minus8(&self) -> &WeightMinus8 {
        &self.w
    }

    /// `s ∈ Λ16'`.
    pub fn s_in_dual(&self, z: &Z16) -> bool {
        self.bw.rows.iter().all(|b| dot(z, b).rem_euclid(8) == 0)
    }

    /// `s ∈ Λ16`.
    pub fn s_in_bw(&self, z: &Z16) -> bool {
        self.dual.rows.iter().all(|b| dot(z, b).rem_euclid(8) == 0)
    }

    pub fn in_dual(&self, v: &RootVector) -> bool {
        self.s_in_dual(&v.z)
    }

    pub fn in_l(&self, v: &RootVector) -> bool {
        self.s_in_bw(&v.z) && v.m2 % 2 == 0 && v.n2 % 2 == 0
    }

    /// `a_γ(−α²/2)` for a vector of norm `norm8/8`, given whether it lies in
    /// `L`. The class `γ = α + L` is zero, even or odd by membership and the
    /// parity of `α²`.
    pub fn multiplicity_by_class(&self, in_l: bool, norm8: i64) -> Result<BigInt> {
        if norm8 % 8 != 0 {
            return Ok(BigInt::zero());
        }
        let e = FracExp::new(-norm8, 16)?;
        if e >= FracExp::integer(self.order) {
            return Err(Error::Resource(format!("multiplicity at q^{e} needs a larger order")));
        }
        let c = if in_l {
            self.w.g0.known_coefficient(e)? + self.w.h.known_coefficient(e)?
        } else if (norm8 / 8) % 2 == 0 {
            self.w.g0.known_coefficient(e)?
        } else {
            self.w.g1.known_coefficient(e)?
        };
        Ok(c.to_integer())
    }

    /// `dim g(α)` for `α ∈ L'`, `α ≠ 0`.
    pub fn root_multiplicity(&self, alpha: &RootVector) -> Result<BigInt> {
        if alpha.is_zero() {
            return input("the zero vector has the Cartan dimension, not a root multiplicity");
        }
        if !self.in_dual(alpha) {
            return input(format!("{alpha} is not in L'"));
        }
        self.multiplicity_by_class(self.in_l(alpha), alpha.norm8())
    }

    /// `c(n)`, the coefficient of `q^n` in `η(τ)^{-8} η(2τ)^{-8}`; zero off
    /// the integer grid.
    pub fn c(&self, twice_n: i64) -> Result<BigInt> {
        if twice_n % 2 != 0 {
            return Ok(BigInt::zero());
        }
        self.w.c(twice_n / 2)
    }

    /// `(nρ, multiplicity)` for `1 ≤ n ≤ n_max`.
    pub fn imaginary_simple_roots(&self, n_max: i64) -> Result<Vec<(RootVector, BigInt)>> {
        if n_max < 1 {
            return input("n_max must be at least 1");
        }
        (1..=n_max)
            .map(|n| {
                let v = weyl_vector().scale(n);
                Ok((v, self.root_multiplicity(&v)?))
            })
            .collect()
    }

    /// Real simple roots of height `−(ρ',α) ≤ bound`, sorted by height,
    /// then norm, then `s`.
    pub fn simple_roots(&self, height_bound: &BigRational) -> Result<Vec<RootVector>> {
        if !height_bound.is_positive() {
            return input("height bound must be positive");
        }
        if height_bound > &rat(SIMPLE_ROOT_CAP) {
            return Err(Error::Resource(format!("height {height_bound} exceeds the cap {SIMPLE_ROOT_CAP}")));
        }
        let mut out = Vec::new();
        // Norm 1: height (s² + 1)/2, s ∈ Λ16'.
        let b1 = height_bound * rat(2) - rat(1);
        self.dual.ball(&[0; 16], 1, &b1, false, |z| out.push(norm1_simple(z)))?;
        // Norm 2: height (s² + 6)/4, s ∈ Λ16 with s² ≡ 2 mod 4.
        let b2 = height_bound * rat(4) - rat(6);
        self.bw.ball(&[0; 16], 1, &b2, false, |z| {
            if let Some(a) = norm2_simple(z) {
                out.push(a);
            }
        })?;
        out.sort_by_key(|a| (a.t_exponent(), a.norm8(), a.z));
        Ok(out)
    }

    /// The simple root with the largest positive pairing with `v`, ties
    /// broken by the smallest vector, or `None` when `v` is in the chamber.
    fn violating_root(&self, v: &RootVector) -> Result<Option<(RootVector, i64)>> {
        let m2 = v.m2;
        if m2 <= 0 {
            if m2 == 0 && v.z.iter().all(|&x| x == 0) && v.n2 >= 0 {
                return Ok(None);
            }
            return input(format!("{v} is not in the future cone"));
        }
        let norm8 = v.norm8();
        let mut best: Option<(RootVector, i64)> = None;
        let mut consider = |a: RootVector| {
            let p = v.pairing8(&a);
            if p <= 0 {
                return;
            }
            let better = match &best {
                None => true,
                Some((b, bp)) => p.cmp(bp).then_with(|| b.cmp(&a)) == Ordering::Greater,
            };
            if better {
                best = Some((a, p));
            }
        };
        // (v, α) > 0 for α = (s, 1/2, (s²−1)/2) ⇔ |s − z_v/m2|² < v²/m2² + 1.
        let b1 = BigRational::new(BigInt::from(norm8), BigInt::from(8 * m2 * m2)) + rat(1);
        self.dual.ball(&v.z, m2, &b1, true, |z| consider(norm1_simple(z)))?;
        // (v, α) > 0 for α = (s, 1, (s²−2)/4) ⇔ |s − 2z_v/m2|² < 4v²/m2² + 2.
        let b2 = BigRational::new(BigInt::from(norm8), BigInt::from(2 * m2 * m2)) + rat(2);
        let centre: Z16 = v.z.map(|x| 2 * x);
        self.bw.ball(&centre, m2, &b2, true, |z| {
            if let Some(a) = norm2_simple(z) {
                consider(a);
            }
        })?;
        Ok(best)
    }

    /// Reflects `v` in violated simple roots until it lies in the closed
    /// fundamental chamber `{(v, α) ≤ 0}`.
    pub fn reduce_to_chamber(&self, v: &RootVector) -> Result<ChamberReduction> {
        let mut cur = *v;
        let mut word = Vec::new();
        while let Some((a, p)) = self.violating_root(&cur)? {
            if word.len() >= self.max_steps {
                return Err(Error::NonTermination { steps: word.len() });
            }
            cur = reflect_with(&cur, &a, p)?;
            word.push(a);
        }
        let parity = if word.len() % 2 == 0 { 1 } else { -1 };
        Ok(ChamberReduction { input: *v, reduced: cur, word, parity })
    }

    /// `r_α(v) = v − 2(v,α)/α² α`.
    pub fn reflect(&self, v: &RootVector, alpha: &RootVector) -> Result<RootVector> {
        reflect_with(v, alpha, v.pairing8(alpha))
    }

    /// Calls `f` on each vector of `L'` with norm in `[norm_min, norm_max]`
    /// and `t`-exponent `t`, found by slicing `L'` orthogonally to `ρ'`.
    pub fn for_each_in_height_slice(
        &self,
        t: i64,
        norm_min: i64,
        norm_max: i64,
        mut f: impl FnMut(&RootVector),
    ) -> Result<()> {
        let dual = lattice_l().dual()?;
        let mut rho_ref = vec![rat(0); 16];
        rho_ref.extend([ratio(1, 2), rat(1)]);
        let u = dual.coordinates_of(&rho_ref)?;
        // Ambient coordinates (z, 2m, 2n) are integral in the basis of L'.
        let basis = &dual.embedding().expect("embedded").basis;
        let mut to_root = vec![[0i64; 18]; 18];
        for (i, row) in basis.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let x = if j < 16 { x.clone() } else { x * rat(2) };
                if !x.is_integer() {
                    return Err(Error::Consistency(format!("basis of L' has coordinate {x}")));
                }
                to_root[i][j] = x.to_integer().to_i64().expect("small");
            }
        }
        dual.for_each_in_slice(&u, &ratio(-t, 4), &rat(norm_min), &rat(norm_max), |k| {
            let mut w = [0i64; 18];
            for (c, row) in k.iter().zip(&to_root) {
                if *c != 0 {
                    for (a, b) in w.iter_mut().zip(row) {
                        *a += c * b;
                    }
                }
            }
            let mut z = [0; 16];
            z.copy_from_slice(&w[..16]);
            f(&RootVector::new(z, w[16], w[17]));
        })
    }

    /// Norm histograms of `Λ16'` and `Λ16` up to `max_norm`.
    pub fn histograms(
        &self,
        max_norm: i64,
        cache: Option<&EnumerationCache>,
    ) -> Result<(NormHistogram, NormHistogram)> {
        Ok((cached_theta(&self.dual_lattice, max_norm, cache)?, cached_theta(&self.bw_lattice, max_norm, cache)?))
    }

    /// All `w(ρ)` with `t`-exponent at most `bound`, with `det(w)`.
    /// Candidates are the norm 0 vectors `(s, m, n)` with `m > 0` (plus `ρ`),
    /// kept when chamber reduction returns `ρ`.
    pub fn weyl_orbit_points(&self, bound: i64, cache: Option<&EnumerationCache>) -> Result<Vec<(RootVector, i8)>> {
        if bound < 0 {
            return input("orbit bound must be nonnegative");
        }
        let compute = || -> Result<Vec<Vec<i64>>> {
            let rho = weyl_vector();
            let mut out = Vec::new();
            if rho.t_exponent() <= bound {
                out.push((rho, 1i8));
            }
            let mut shells: BTreeMap<i64, Vec<Z16>> = BTreeMap::new();
            let mut max_norm = 0;
            for m2 in 1..=bound / 4 {
                max_norm = max_norm.max(m2 * ((bound - 4 * m2) / 2));
            }
            self.dual.ball(&[0; 16], 1, &rat(max_norm), false, |z| {
                shells.entry(dot(z, z) / 8).or_default().push(*z);
            })?;
            for m2 in 1..=bound / 4 {
                for n2 in 0..=(bound - 4 * m2) / 2 {
                    for z in shells.get(&(m2 * n2)).map_or(&[][..], Vec::as_slice) {
                        // The symmetries fix ρ and permute the simple roots, so
                        // one reduction per symmetry class suffices.
                        let images = symmetry_images(z);
                        if images.iter().any(|g| g < z) {
                            continue;
                        }
                        let r = self.reduce_to_chamber(&RootVector::new(*z, m2, n2))?;
                        if r.reduced == rho {
                            let mut distinct = images;
                            distinct.sort();
                            distinct.dedup();
                            out.extend(distinct.into_iter().map(|g| (RootVector::new(g, m2, n2), r.parity)));
                        }
                    }
                }
            }
            out.sort();
            Ok(out
                .into_iter()
                .map(|(v, p)| {
                    let mut row = v.coordinates();
                    row.push(p as i64);
                    row
                })
                .collect())
        };
        let rows = match cache {
            Some(c) => c.get_or_compute("L'", "weyl-orbit-of-rho", &format!("t<={bound}"), compute)?.0,
            None => compute()?,
        };
        rows.iter()
            .map(|r| {
                if r.len() != 19 {
                    return Err(Error::Consistency("malformed orbit record".into()));
                }
                Ok((RootVector::from_slice(r)?, r[18] as i8))
            })
            .collect()
    }

    /// Positive vectors of `L'` with `0 < t ≤ bound` and norm at most 2,
    /// grouped by `(s², s ∈ Λ16, m2, n2)`.
    pub fn root_classes(&self, bound: i64, cache: Option<&EnumerationCache>) -> Result<Vec<RootClass>> {
        let mut keys = Vec::new();
        let mut max_norm = 0;
        for m2 in 0..=bound / 4 {
            // t = 2 n2 + 4 m2 > 0 and s² = α² + m2 n2 ≥ 0 with α² ≤ 2.
            let lo = Integer::div_floor(&(-4 * m2), &2) + 1;
            for n2 in lo..=(bound - 4 * m2) / 2 {
                let top = 2 + m2 * n2;
                if top < 0 {
                    continue;
                }
                max_norm = max_norm.max(top);
                keys.push((m2, n2, top));
            }
        }
        let (dual, bw) = self.histograms(max_norm, cache)?;
        let mut out = Vec::new();
        for (m2, n2, top) in keys {
            for s2 in 0..=top {
                let all = dual.get(&s2).copied().unwrap_or(0);
                let inner = bw.get(&s2).copied().unwrap_or(0);
                let even = m2 % 2 == 0 && n2 % 2 == 0;
                for (s_in_bw, count) in [(true, inner), (false, all - inner)] {
                    if count > 0 {
                        out.push(RootClass { s2, s_in_bw, m2, n2, in_l: s_in_bw && even, count });
                    }
                }
            }
        }
        Ok(out)
    }

    /// `e^ρ ∏_{α∈L⁺}(1−e^α)^{c(−α²/2)} ∏_{α∈L'⁺}(1−e^α)^{c(−α²)}` specialised
    /// to `t`, through `t^bound`.
    pub fn denominator_product_side(&self, bound: i64, cache: Option<&EnumerationCache>) -> Result<Vec<BigInt>> {
        check_bound(bound, DENOMINATOR_CAP)?;
        let mut exps: BTreeMap<i64, BigInt> = BTreeMap::new();
        for class in self.root_classes(bound, cache)? {
            let a2 = class.norm8() / 8;
            let mut e = self.c(-2 * a2)?;
            if class.in_l {
                e += self.c(-a2)?;
            }
            *exps.entry(class.t_exponent()).or_default() += e * BigInt::from(class.count);
        }
        let mut poly = monomial(weyl_vector().t_exponent(), bound);
        for (h, e) in exps {
            poly = poly_mul(&poly, &binomial_power(h, &e, bound), bound);
        }
        Ok(poly)
    }

    /// `Σ_w det(w) w(e^ρ ∏_n (1−e^{nρ})^8 (1−e^{2nρ})^8)` through `t^bound`.
    pub fn denominator_sum_side(&self, bound: i64, cache: Option<&EnumerationCache>) -> Result<Vec<BigInt>> {
        check_bound(bound, DENOMINATOR_CAP)?;
        Ok(orbit_sum(&self.weyl_orbit_points(bound, cache)?, bound))
    }

    pub fn verify_denominator(&self, bound: i64, cache: Option<&EnumerationCache>) -> Result<DenominatorCheck> {
        let product = self.denominator_product_side(bound, cache)?;
        let orbit = self.weyl_orbit_points(bound, cache)?;
        let sum = orbit_sum(&orbit, bound);
        Ok(DenominatorCheck { bound, equal: product == sum, product, sum, orbit_points: orbit.len() })
    }

    /// Checks `mult(α) = c(−α²) + [α∈L] c(−α²/2)` for every positive
    /// `α ∈ L'` with `t ≤ bound` and `α² ≤ 2`.
    pub fn exponent_consistency(&self, bound: i64, cache: Option<&EnumerationCache>) -> Result<ConsistencyReport> {
        check_bound(bound, CONSISTENCY_CAP)?;
        let mut report = ConsistencyReport { bound, ..Default::default() };
        for class in self.root_classes(bound, cache)? {
            let a2 = class.norm8() / 8;
            let mult = self.multiplicity_by_class(class.in_l, class.norm8())?;
            let mut expected = self.c(-2 * a2)?;
            if class.in_l {
                expected += self.c(-a2)?;
            }
            report.classes += 1;
            report.vectors += class.count as u128;
            if mult.is_positive() {
                report.roots += class.count as u128;
            }
            if class.in_l && a2 == -2 {
                report.norm_minus_2_in_l = Some(mult.clone());
            }
            if mult != expected {
                report.violations.push(format!("{class}: multiplicity {mult}, exponent sum {expected}"));
            }
        }
        Ok(report)
    }
}

/// `Σ det(w) t^{h(v)} ∏_n (1 − t^{n h(v)})^8 (1 − t^{2n h(v)})^8` over orbit points.
fn orbit_sum(orbit: &[(RootVector, i8)], bound: i64) -> Vec<BigInt> {
    let mut total = vec![BigInt::zero(); (bound + 1) as usize];
    let eight = BigInt::from(8);
    for (v, parity) in orbit {
        let h = v.t_exponent();
        let mut term = monomial(h, bound);
        let mut n = 1;
        while n * h <= bound {
            term = poly_mul(&term, &binomial_power(n * h, &eight, bound), bound);
            term = poly_mul(&term, &binomial_power(2 * n * h, &eight, bound), bound);
            n += 1;
        }
        for (a, b) in total.iter_mut().zip(term) {
            *a += b * *parity as i64;
        }
    }
    total
}

fn check_bound(bound: i64, cap: i64) -> Result<()> {
    if bound < 0 {
        return input("bound must be nonnegative");
    }
    if bound > cap {
        return Err(Error::Resource(format!("t-exponent {bound} exceeds the cap {cap}")));
    }
    Ok(())
}

/// Images of `s` under `s ↦ ±s` composed with the coordinate translations
/// `p ↦ p ⊕ a` of the index set `F_2^4`, which preserve `RM(1,4)` and `Λ16`.
pub fn symmetry_images(z: &Z16) -> Vec<Z16> {
    let mut out = Vec::with_capacity(32);
    for a in 0..16 {
        let mut g = [0; 16];
        for (p, x) in z.iter().enumerate() {
            g[p ^ a] = *x;
        }
        out.push(g);
        out.push(g.map(|x| -x));
    }
    out
}

fn norm1_simple(z: &Z16) -> RootVector {
    RootVector::new(*z, 1, dot(z, z) / 8 - 1)
}

fn norm2_simple(z: &Z16) -> Option<RootVector> {
    let s2 = dot(z, z) / 8;
    (s2 % 4 == 2).then(|| RootVector::new(*z, 2, (s2 - 2) / 2))
}

fn reflect_with(v: &RootVector, a: &RootVector, p8: i64) -> Result<RootVector> {
    // 2(v,α)/α² = 2 (p8/8) / (a8/8).
    let (num, den) = (2 * p8, a.norm8());
    if den == 0 || num % den != 0 {
        return Err(Error::Consistency(format!("reflection in {a} does not preserve the lattice")));
    }
    Ok(v.combine(-(num / den), a))
}

fn cached_theta(lat: &Lattice, max_norm: i64, cache: Option<&EnumerationCache>) -> Result<NormHistogram> {
    let compute = || -> Result<Vec<Vec<i64>>> {
        lat.theta_counts(&rat(max_norm))?
            .into_iter()
            .map(|(n, c)| {
                if !n.is_integer() {
                    return Err(Error::Consistency(format!("{} has a vector of norm {n}", lat.label())));
                }
                Ok(vec![n.to_integer().to_i64().expect("small"), c as i64])
            })
            .collect()
    };
    let rows = match cache {
        Some(c) => c.get_or_compute(lat.label(), "theta", &format!("norm<={max_norm}"), compute)?.0,
        None => compute()?,
    };
    Ok(rows.into_iter().map(|r| (r[0], r[1] as u64)).collect())
}

/// Vectors `(s, m2/2, n2/2)` with `s² = s2`, split by `s ∈ Λ16`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootClass {
    pub s2: i64,
    pub s_in_bw: bool,
    pub m2: i64,
    pub n2: i64,
    pub in_l: bool,
    pub count: u64,
}

impl RootClass {
    pub fn norm8(&self) -> i64 {
        8 * (self.s2 - self.m2 * self.n2)
    }

    pub fn t_exponent(&self) -> i64 {
        2 * self.n2 + 4 * self.m2
    }
}

impl fmt::Display for RootClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "s²={} s{}Λ16 m={} n={} norm {} ({} vectors{})",
            self.s2,
            if self.s_in_bw { "∈" } else { "∉" },
            ratio(self.m2, 2),
            ratio(self.n2, 2),
            self.norm8() / 8,
            self.count,
            if self.in_l { ", in L" } else { "" }
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub bound: i64,
    pub classes: usize,
    pub vectors: u128,
    pub roots: u128,
    /// Multiplicity of the norm −2 vectors of `L`, when in range.
    pub norm_minus_2_in_l: Option<BigInt>,
    pub violations: Vec<String>,
}

impl ConsistencyReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ConsistencyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            write!(
                f,
                "exponent consistency OK through t^{}: {} classes, {} vectors, {} roots",
                self.bound, self.classes, self.vectors, self.roots
            )
        } else {
            write!(f, "exponent consistency FAILED through t^{}: {}", self.bound, self.violations[0])
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenominatorCheck {
    pub bound: i64,
    pub product: Vec<BigInt>,
    pub sum: Vec<BigInt>,
    pub orbit_points: usize,
    pub equal: bool,
}

impl fmt::Display for DenominatorCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.equal {
            write!(f, "product == sum through t^{} ({} orbit points)", self.bound, self.orbit_points)
        } else {
            let k = self.product.iter().zip(&self.sum).position(|(a, b)| a != b).unwrap_or(0);
            write!(f, "product != sum at t^{k}: {} vs {}", self.product[k], self.sum[k])
        }
    }
}

/// Coefficients of a polynomial in `t` as text: `t^k:c` for nonzero `c`.
pub fn poly_to_text(p: &[BigInt]) -> String {
    let parts: Vec<String> =
        p.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| format!("t^{k}:{c}")).collect();
    parts.join(" ")
}

fn monomial(k: i64, bound: i64) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); (bound + 1) as usize];
    if (0..=bound).contains(&k) {
        p[k as usize] = BigInt::one();
    }
    p
}

fn poly_mul(a: &[BigInt], b: &[BigInt], bound: i64) -> Vec<BigInt> {
    let n = (bound + 1) as usize;
    let mut out = vec![BigInt::zero(); n];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate().take(n - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// `(1 − t^h)^e` through `t^bound`, for `h > 0`, `e ≥ 0`.
fn binomial_power(h: i64, e: &BigInt, bound: i64) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); (bound + 1) as usize];
    let mut coeff = BigInt::one();
    let mut k = 0i64;
    while k * h <= bound {
        out[(k * h) as usize] = if k % 2 == 0 { coeff.clone() } else { -coeff.clone() };
        coeff = coeff * (e - BigInt::from(k)) / BigInt::from(k + 1);
        if coeff.is_zero() {
            break;
        }
        k += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rs() -> RootSystem {
        RootSystem::new(6).unwrap()
    }

    fn simple0() -> RootVector {
        RootVector::hyperbolic(1, -1)
    }

    #[test]
    fn weyl_vector_facts() {
        let rs = rs();
        let rho = weyl_vector();
        assert_eq!(rho.norm8(), 0);
        assert!(rs.in_dual(&rho) && !rs.in_l(&rho));
        assert!(rs.in_l(&rho.scale(2)));
        assert_eq!(rho.t_exponent(), 2);
        assert_eq!(reference_vector().norm(), rat(-2));
        assert_eq!(cartan_dimension(), 18);
        assert_eq!(lattice_l().signature().unwrap(), (17, 1));
    }

    #[test]
    fn multiplicity_examples() {
        let rs = rs();
        // Norm 2 in L: s² = 6, m = n = 1.
        let mut found = None;
        rs.bw
            .ball(&[0; 16], 1, &rat(6), false, |z| {
                if found.is_none() && dot(z, z) == 48 {
                    found = Some(*z);
                }
            })
            .unwrap();
        let a = RootVector::new(found.unwrap(), 2, 2);
        assert_eq!(a.norm(), rat(2));
        assert!(rs.in_l(&a));
        assert_eq!(rs.root_multiplicity(&a).unwrap(), BigInt::from(1));
        assert_eq!(rs.root_multiplicity(&simple0()).unwrap(), BigInt::from(1));
        let b = RootVector::hyperbolic(2, 2).add(&RootVector::hyperbolic(0, 0));
        // (0, 1, 1) has norm −4; a norm −2 vector of L is (s, 1, 2) with s² = 6.
        assert_eq!(rs.root_multiplicity(&b).unwrap(), rs.c(8).unwrap() + rs.c(4).unwrap());
        let c = RootVector::new(found.unwrap(), 2, 4);
        assert_eq!(c.norm(), rat(-2));
        assert_eq!(rs.root_multiplicity(&c).unwrap(), BigInt::from(308));
        // Norm 2 outside L has no q^{-1} term to draw on.
        assert_eq!(rs.root_multiplicity(&RootVector::hyperbolic(2, -1)).unwrap(), BigInt::zero());
        assert!(rs.root_multiplicity(&RootVector::hyperbolic(0, 0)).is_err());
    }

    #[test]
    fn imaginary_simple_root_multiplicities() {
        let got: Vec<i64> = rs().imaginary_simple_roots(8).unwrap().iter().map(|(_, m)| m.to_i64().unwrap()).collect();
        assert_eq!(got, vec![8, 16, 8, 16, 8, 16, 8, 16]);
    }

    #[test]
    fn simple_roots_low_height() {
        let rs = rs();
        let one = rs.simple_roots(&rat(1)).unwrap();
        assert_eq!(one, vec![simple0()]);
        assert_eq!(simple0().to_string(), "(0,1/2,-1/2)");
        let roots = rs.simple_roots(&ratio(3, 2)).unwrap();
        let rho = weyl_vector();
        for a in &roots {
            assert_eq!(2 * rho.pairing8(a), -a.norm8());
        }
        let n1_s2 = roots.iter().filter(|a| a.norm8() == 8 && dot(&a.z, &a.z) == 16).count();
        assert_eq!(n1_s2, 4320);
        assert!(roots.iter().all(|a| a.norm8() == 8));
        // Norm 2 simple roots start at s² = 6, height 3.
        let mut six = 0;
        rs.bw
            .ball(&[0; 16], 1, &rat(6), false, |z| {
                if let Some(a) = norm2_simple(z) {
                    assert_eq!(dot(z, z), 48);
                    assert_eq!(a.height(), rat(3));
                    assert_eq!(2 * rho.pairing8(&a), -a.norm8());
                    six += 1;
                }
            })
            .unwrap();
        assert_eq!(six, 61440);
    }

    #[test]
    fn reduction_examples() {
        let rs = rs();
        let rho = weyl_vector();
        let r = rs.reduce_to_chamber(&rho).unwrap();
        assert_eq!((r.reduced, r.word.len(), r.parity), (rho, 0, 1));
        let a = simple0();
        let v = rs.reflect(&rho, &a).unwrap();
        assert_eq!(v, rho.add(&a));
        let r = rs.reduce_to_chamber(&v).unwrap();
        assert_eq!((r.reduced, r.parity, r.word.clone()), (rho, -1, vec![a]));
        let beta = rs.simple_roots(&rat(2)).unwrap()[1];
        let w = rs.reflect(&rs.reflect(&rho, &beta).unwrap(), &a).unwrap();
        let r = rs.reduce_to_chamber(&w).unwrap();
        assert_eq!((r.reduced, r.parity), (rho, 1));
    }

    #[test]
    fn random_words_recover_parity() {
        let rs = rs();
        let gens: Vec<RootVector> = rs.simple_roots(&rat(2)).unwrap().into_iter().take(50).collect();
        assert_eq!(gens.len(), 50);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let len = rng.gen_range(0..=6);
            let mut v = weyl_vector();
            for _ in 0..len {
                let a = gens[rng.gen_range(0..gens.len())];
                let w = rs.reflect(&v, &a).unwrap();
                assert_eq!(w.norm8(), v.norm8());
                assert!(rs.in_dual(&w));
                v = w;
            }
            let r = rs.reduce_to_chamber(&v).unwrap();
            assert_eq!(r.reduced, weyl_vector());
            assert_eq!(r.parity as i64, if len % 2 == 0 { 1 } else { -1 });
        }
    }

    #[test]
    fn step_cap_is_enforced() {
        let mut rs = rs();
        rs.max_steps = 0;
        let v = rs.reflect(&weyl_vector(), &simple0()).unwrap();
        assert!(matches!(rs.reduce_to_chamber(&v), Err(Error::NonTermination { .. })));
    }

    #[test]
    fn polynomial_helpers() {
        let p = binomial_power(2, &BigInt::from(8), 8);
        let want: Vec<i64> = vec![1, 0, -8, 0, 28, 0, -56, 0, 70];
        assert_eq!(p, want.into_iter().map(BigInt::from).collect::<Vec<_>>());
        // ρ alone: t²(1−t²)^8(1−t⁴)^8 = t² − 8t⁴ + …
        let rho_term = poly_mul(
            &poly_mul(&monomial(2, 6), &binomial_power(2, &BigInt::from(8), 6), 6),
            &binomial_power(4, &BigInt::from(8), 6),
            6,
        );
        assert_eq!(poly_to_text(&rho_term), "t^2:1 t^4:-8 t^6:20");
    }

    #[test]
    fn small_orbit_and_denominator() {
        let rs = rs();
        let orbit = rs.weyl_orbit_points(4, None).unwrap();
        assert_eq!(orbit, vec![(weyl_vector(), 1), (weyl_vector().add(&simple0()), -1)]);
        for (v, _) in rs.weyl_orbit_points(6, None).unwrap() {
            assert_eq!(v.norm8(), 0);
        }
        let check = rs.verify_denominator(6, None).unwrap();
        assert!(check.equal, "{check}");
    }

    #[test]
    fn real_roots_have_multiplicity_one() {
        let rs = rs();
        let mut roots = Vec::new();
        for t in 1..=4 {
            rs.for_each_in_height_slice(t, 1, 2, |a| {
                assert_eq!(a.t_exponent(), t);
                roots.push(*a);
            })
            .unwrap();
        }
        assert!(roots.contains(&simple0()));
        // (0,1/2,-1/2), then (s,0,1/2), (s,1/2,0) and (s,0,1) with s² = 2.
        assert_eq!(roots.len(), 1 + 3 * 4320);
        for a in &roots {
            assert!(rs.in_dual(a));
            let m = rs.root_multiplicity(a).unwrap();
            let want = match (a.norm8(), rs.in_l(a)) {
                (8, _) | (16, true) => 1,
                _ => 0,
            };
            assert_eq!(m, BigInt::from(want), "{a}");
        }
    }

    #[test]
    fn symmetries_preserve_the_lattices() {
        let rs = rs();
        for rows in [&rs.bw.rows, &rs.dual.rows] {
            for r in rows.iter() {
                for g in symmetry_images(r) {
                    assert_eq!(rs.s_in_bw(&g), rs.s_in_bw(r));
                    assert!(rs.s_in_dual(&g));
                }
            }
        }
    }

    #[test]
    fn parse_vectors() {
        assert_eq!(RootVector::parse("0,1,-1").unwrap(), simple0());
        let mut s = vec!["0"; 16];
        s[0] = "2";
        let v = RootVector::parse(&format!("{},2,4", s.join(","))).unwrap();
        assert_eq!(v.z[0], 2);
        assert!(RootVector::parse("1,2").is_err());
        assert!(RootVector::parse("a,b,c").is_err());
    }

    #[test]
    fn random_cone_vectors_reduce_into_chamber() {
        let rs = rs();
        let gens: Vec<RootVector> = rs.simple_roots(&rat(2)).unwrap().into_iter().take(50).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        // Norm −2 vectors (s, m, n) with s² = 4mn − 2.
        let mut shell = Vec::new();
        rs.dual
            .ball(&[0; 16], 1, &rat(4), false, |z| {
                if dot(z, z) == 32 && shell.len() < 4 {
                    shell.push(*z);
                }
            })
            .unwrap();
        let mut base: Vec<RootVector> = Vec::new();
        for &(m2, n2) in &[(2, 3), (3, 2), (1, 6)] {
            base.extend(shell.iter().map(|z| RootVector::new(*z, m2, n2)));
        }
        base.push(RootVector::hyperbolic(2, 1));
        assert!(!base.is_empty());
        for v in &base {
            let r0 = rs.reduce_to_chamber(v).unwrap();
            for _ in 0..5 {
                let len = rng.gen_range(1..=6);
                let mut w = *v;
                for _ in 0..len {
                    w = rs.reflect(&w, &gens[rng.gen_range(0..gens.len())]).unwrap();
                }
                let r = rs.reduce_to_chamber(&w).unwrap();
                assert_eq!(r.reduced.norm8(), v.norm8());
                assert!(rs.violating_root(&r.reduced).unwrap().is_none());
                if r.reduced == r0.reduced {
                    assert_eq!(r.parity * r0.parity, if len % 2 == 0 { 1 } else { -1 });
                }
            }
        }
    }
}
