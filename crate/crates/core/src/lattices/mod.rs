//! Lattices given by exact rational Gram matrices: constructions from codes,
//! the Barnes-Wall lattice, hyperbolic planes, duals, discriminant forms,
//! genus invariants and short-vector enumeration.

pub mod cache;
pub mod enumerate;
pub mod linalg;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::codes::LinearCode;
use crate::error::{input, Error, Result};
use enumerate::{coordinate_image, scaled_norm, ShellPlan};
use linalg::{rat, ratio, RatMatrix};

/// Largest discriminant group enumerated element by element.
pub const MAX_DISCRIMINANT: u64 = 1 << 20;

/// Basis vectors written in an ambient space with its own bilinear form.
#[derive(Clone, Debug, PartialEq)]
pub struct Embedding {
    pub basis: RatMatrix,
    pub form: RatMatrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lattice {
    label: String,
    gram: RatMatrix,
    embedding: Option<Embedding>,
}

/// A lattice vector in basis coordinates together with its norm.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVector {
    pub coords: Vec<i64>,
    pub norm: BigRational,
}

impl Lattice {
    pub fn from_gram(label: impl Into<String>, gram: RatMatrix) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return input("Gram matrix is not square");
        }
        if (0..n).any(|i| (0..i).any(|j| gram[i][j] != gram[j][i])) {
            return input("Gram matrix is not symmetric");
        }
        Ok(Self { label: label.into(), gram, embedding: None })
    }

    /// Lattice spanned by `basis` rows inside an ambient space with `form`.
    pub fn embedded(label: impl Into<String>, basis: RatMatrix, form: RatMatrix) -> Result<Self> {
        let m = form.len();
        if basis.iter().any(|r| r.len() != m) {
            return input("basis rows do not match the ambient dimension");
        }
        let gram = linalg::congruence(&basis, &form);
        let mut l = Self::from_gram(label, gram)?;
        l.embedding = Some(Embedding { basis, form });
        Ok(l)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    pub fn embedding(&self) -> Option<&Embedding> {
        self.embedding.as_ref()
    }

    pub fn determinant(&self) -> BigRational {
        linalg::determinant(&self.gram)
    }

    /// `(positive, negative)` inertia; errors on degenerate forms.
    pub fn signature(&self) -> Result<(usize, usize)> {
        match linalg::signature(&self.gram) {
            (p, n, 0) => Ok((p, n)),
            (_, _, z) => input(format!("{} is degenerate (nullity {z})", self.label)),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.gram.iter().flatten().all(|x| x.is_integer())
    }

    pub fn is_even(&self) -> bool {
        self.is_integral() && (0..self.rank()).all(|i| self.gram[i][i].to_integer().is_even())
    }

    pub fn inner(&self, a: &[BigRational], b: &[BigRational]) -> BigRational {
        linalg::bilinear(&self.gram, a, b)
    }

    pub fn norm(&self, v: &[BigRational]) -> BigRational {
        self.inner(v, v)
    }

    pub fn norm_int(&self, v: &[i64]) -> BigRational {
        let v: Vec<_> = v.iter().map(|&x| rat(x)).collect();
        self.norm(&v)
    }

    /// Ambient coordinates of a vector given in basis coordinates.
    pub fn ambient(&self, coords: &[BigRational]) -> Option<Vec<BigRational>> {
        let e = self.embedding.as_ref()?;
        let m = e.form.len();
        Some((0..m).map(|t| coords.iter().zip(&e.basis).fold(rat(0), |s, (c, row)| s + c * &row[t])).collect())
    }

    /// Basis coordinates of an ambient vector in the rational span.
    pub fn coordinates_of(&self, ambient: &[BigRational]) -> Result<Vec<BigRational>> {
        let Some(e) = &self.embedding else {
            return input(format!("{} has no ambient embedding", self.label));
        };
        let ginv = linalg::inverse(&self.gram).ok_or_else(|| Error::Input(format!("{} is degenerate", self.label)))?;
        let fb = linalg::mat_mul(&e.form, &linalg::transpose(&e.basis));
        let row = linalg::mat_mul(&vec![ambient.to_vec()], &fb);
        let x = linalg::mat_mul(&row, &ginv).remove(0);
        if self.ambient(&x).as_deref() != Some(ambient) {
            return input("vector is not in the span of the lattice");
        }
        Ok(x)
    }

    /// Construction A: `{x ∈ Z^n : x mod 2 ∈ code}` with the standard form.
    pub fn construction_a(code: &LinearCode) -> Self {
        let n = code.length();
        let gens = code.generators();
        let pivots: Vec<usize> = gens.iter().map(|g| g.bits().trailing_zeros() as usize).collect();
        let mut basis: Vec<Vec<i64>> = gens.iter().map(|g| g.coords().iter().map(|&b| b as i64).collect()).collect();
        for i in (0..n).filter(|i| !pivots.contains(i)) {
            let mut row = vec![0i64; n];
            row[i] = 2;
            basis.push(row);
        }
        Self::embedded(format!("A[{n},{}]", code.dimension()), linalg::from_i64(&basis), linalg::identity(n))
            .expect("consistent dimensions")
    }

    /// The Barnes-Wall lattice `{x/√2 : x mod 2 ∈ RM(1,4), Σx ≡ 0 mod 4}`,
    /// embedded as `z = 2x` with ambient form `z·z'/8`.
    pub fn barnes_wall_16() -> Self {
        let a = Self::construction_a(&LinearCode::reed_muller_16());
        let rows: Vec<Vec<i64>> = a
            .embedding
            .as_ref()
            .expect("construction A is embedded")
            .basis
            .iter()
            .map(|r| r.iter().map(|x| x.to_integer().to_i64().expect("small")).collect())
            .collect();
        // Index-2 sublattice cut out by Σx/2 mod 2; 2e_i has odd value.
        let odd = |r: &Vec<i64>| (r.iter().sum::<i64>() / 2).rem_euclid(2) == 1;
        let star = rows.iter().position(odd).expect("some 2e_i");
        let mut basis = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            let v: Vec<i64> = if i == star {
                r.iter().map(|x| 2 * x).collect()
            } else if odd(r) {
                r.iter().zip(&rows[star]).map(|(a, b)| a - b).collect()
            } else {
                r.clone()
            };
            basis.push(v.iter().map(|x| 2 * x).collect::<Vec<i64>>());
        }
        let form: RatMatrix =
            (0..16).map(|i| (0..16).map(|j| if i == j { ratio(1, 8) } else { rat(0) }).collect()).collect();
        Self::embedded("BW16", linalg::from_i64(&basis), form).expect("consistent dimensions")
    }

    /// The even unimodular hyperbolic plane with Gram `[[0,-1],[-1,0]]`.
    pub fn hyperbolic_plane() -> Self {
        let form = linalg::from_i64(&[vec![0, -1], vec![-1, 0]]);
        Self::embedded("II11", linalg::identity(2), form).expect("consistent dimensions")
    }

    /// `L(k)`: the same module with the form multiplied by `k`.
    pub fn rescale(&self, k: &BigRational) -> Result<Self> {
        if k.is_zero() {
            return input("rescaling factor must be nonzero");
        }
        let scale = |m: &RatMatrix| -> RatMatrix { m.iter().map(|r| r.iter().map(|x| x * k).collect()).collect() };
        Ok(Self {
            label: format!("{}({})", self.label, k),
            gram: scale(&self.gram),
            embedding: self.embedding.as_ref().map(|e| Embedding { basis: e.basis.clone(), form: scale(&e.form) }),
        })
    }

    pub fn direct_sum(&self, other: &Lattice) -> Self {
        let block = |a: &RatMatrix, b: &RatMatrix| -> RatMatrix {
            let (n, m) = (a.len(), b.len());
            let mut out = linalg::zeros(n + m, n + m);
            for i in 0..n {
                out[i][..n].clone_from_slice(&a[i]);
            }
            for i in 0..m {
                out[n + i][n..].clone_from_slice(&b[i]);
            }
            out
        };
        let embedding = match (&self.embedding, &other.embedding) {
            (Some(a), Some(b)) => {
                let (ma, mb) = (a.form.len(), b.form.len());
                let mut basis = Vec::new();
                for r in &a.basis {
                    let mut row = r.clone();
                    row.extend((0..mb).map(|_| rat(0)));
                    basis.push(row);
                }
                for r in &b.basis {
                    let mut row: Vec<BigRational> = (0..ma).map(|_| rat(0)).collect();
                    row.extend(r.iter().cloned());
                    basis.push(row);
                }
                Some(Embedding { basis, form: block(&a.form, &b.form) })
            }
            _ => None,
        };
        Self { label: format!("{}+{}", self.label, other.label), gram: block(&self.gram, &other.gram), embedding }
    }

    /// The dual lattice, with Gram the inverse Gram and the dual basis.
    pub fn dual(&self) -> Result<Self> {
        let ginv = linalg::inverse(&self.gram).ok_or_else(|| Error::Input(format!("{} is degenerate", self.label)))?;
        let embedding = self
            .embedding
            .as_ref()
            .map(|e| Embedding { basis: linalg::mat_mul(&ginv, &e.basis), form: e.form.clone() });
        Ok(Self { label: format!("{}'", self.label), gram: ginv, embedding })
    }

    fn check_definite(&self) -> Result<()> {
        match self.signature()? {
            (_, 0) => Ok(()),
            _ => input(format!("{} is not positive definite", self.label)),
        }
    }

    /// Enumeration plan whose callbacks receive basis coordinates.
    pub fn shell_plan(&self) -> Result<ShellPlan> {
        self.check_definite()?;
        ShellPlan::new(&self.gram, &coordinate_image(self.rank()))
    }

    /// All vectors of norm at most `max_norm`, sorted lexicographically.
    pub fn enumerate_by_norm(&self, max_norm: &BigRational) -> Result<Vec<LatticeVector>> {
        self.enumerate_coset(&vec![rat(0); self.rank()], max_norm)
    }

    /// Vectors `k + shift` of the coset with norm at most `max_norm`;
    /// `coords` holds the integer part `k`. Sorted lexicographically.
    pub fn enumerate_coset(&self, shift: &[BigRational], max_norm: &BigRational) -> Result<Vec<LatticeVector>> {
        let plan = self.shell_plan()?;
        let q = plan.query(shift, max_norm, false)?;
        let mut out = Vec::new();
        plan.run(&q, |k, v| out.push(LatticeVector { coords: k.to_vec(), norm: scaled_norm(v, &q) }));
        out.sort();
        Ok(out)
    }

    /// Number of vectors of each norm up to `max_norm`.
    pub fn theta_counts(&self, max_norm: &BigRational) -> Result<BTreeMap<BigRational, u64>> {
        self.check_definite()?;
        let plan = ShellPlan::new(&self.gram, &vec![Vec::new(); self.rank()])?;
        let q = plan.query(&vec![rat(0); self.rank()], max_norm, false)?;
        let mut counts: BTreeMap<i128, u64> = BTreeMap::new();
        plan.run(&q, |_, v| *counts.entry(v).or_default() += 1);
        Ok(counts.into_iter().map(|(v, c)| (scaled_norm(v, &q), c)).collect())
    }

    /// Vectors `v` with `(v,u) = pairing` and `norm_min ≤ v² ≤ norm_max` in a
    /// Lorentzian lattice, for a timelike `u` given in basis coordinates.
    /// Sorted lexicographically.
    pub fn lorentzian_slice(
        &self,
        u: &[BigRational],
        pairing: &BigRational,
        norm_min: &BigRational,
        norm_max: &BigRational,
    ) -> Result<Vec<LatticeVector>> {
        let mut coords = Vec::new();
        self.for_each_in_slice(u, pairing, norm_min, norm_max, |k| coords.push(k.to_vec()))?;
        let mut out: Vec<LatticeVector> =
            coords.into_iter().map(|c| LatticeVector { norm: self.norm_int(&c), coords: c }).collect();
        out.sort();
        Ok(out)
    }

    /// Streaming form of [`Self::lorentzian_slice`]: calls `f` with the basis
    /// coordinates of each vector, in enumeration order.
    pub fn for_each_in_slice(
        &self,
        u: &[BigRational],
        pairing: &BigRational,
        norm_min: &BigRational,
        norm_max: &BigRational,
        mut f: impl FnMut(&[i64]),
    ) -> Result<()> {
        let n = self.rank();
        if u.len() != n {
            return input("reference vector has the wrong length");
        }
        if self.signature()?.1 != 1 {
            return input(format!("{} is not Lorentzian", self.label));
        }
        if !self.norm(u).is_negative() {
            return input("reference vector is not timelike");
        }
        let a = linalg::mat_vec(&self.gram, u);
        let (a_int, den) = linalg::integer_numerators(&a);
        let p = pairing * BigRational::from_integer(den);
        if !p.is_integer() {
            return Ok(());
        }
        let (g, cols) = linalg::gcd_column_basis(&a_int);
        let (q, r) = p.to_integer().div_rem(&g);
        if !r.is_zero() {
            return Ok(());
        }
        let k0: Vec<BigRational> = cols[0].iter().map(|x| BigRational::from_integer(x * &q)).collect();
        let kernel: RatMatrix =
            cols[1..].iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
        let base_norm = self.norm(&k0);
        let to_i64 = |x: &BigRational| linalg::to_i64(&x.to_integer(), "slice coordinates");
        let k0i: Vec<i64> = k0.iter().map(to_i64).collect::<Result<_>>()?;
        if kernel.is_empty() {
            if &base_norm >= norm_min && &base_norm <= norm_max {
                f(&k0i);
            }
            return Ok(());
        }
        let h = linalg::congruence(&kernel, &self.gram);
        let b = linalg::mat_vec(&kernel, &linalg::mat_vec(&self.gram, &k0));
        let hinv = linalg::inverse(&h).expect("definite complement");
        let c = linalg::mat_vec(&hinv, &b);
        let offset = &base_norm - linalg::bilinear(&h, &c, &c);
        let image: Vec<Vec<i64>> =
            kernel.iter().map(|r| r.iter().map(to_i64).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
        let plan = ShellPlan::new(&h, &image)?;
        let query = plan.query(&c, &(norm_max - &offset), false)?;
        // norm ≥ norm_min  ⇔  v ≥ (norm_min − offset)·norm_den.
        let floor = ((norm_min - &offset) * BigRational::from_integer(query.norm_den.clone())).ceil().to_integer();
        let floor = floor.to_i128().unwrap_or(if floor.is_negative() { i128::MIN } else { i128::MAX });
        let mut coords = vec![0i64; n];
        plan.run(&query, |img, v| {
            if v >= floor {
                for ((x, a), b) in coords.iter_mut().zip(img).zip(&k0i) {
                    *x = a + b;
                }
                f(&coords);
            }
        });
        Ok(())
    }

    pub fn discriminant_group(&self) -> Result<DiscriminantGroup> {
        DiscriminantGroup::new(self)
    }

    pub fn genus_invariants(&self) -> Result<GenusInvariants> {
        GenusInvariants::new(self)
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (rank {}, det {})", self.label, self.rank(), self.determinant())
    }
}

/// An element of `L'/L` with its value `γ²` in `Q/2Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantElement {
    /// Basis coordinates reduced into `[0,1)`.
    pub coords: Vec<BigRational>,
    pub norm: BigRational,
}

#[derive(Clone, Debug)]
pub struct DiscriminantGroup {
    invariant_factors: Vec<BigInt>,
    generators: Vec<Vec<BigRational>>,
    elements: Vec<DiscriminantElement>,
    gram: RatMatrix,
}

fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

/// Reduces `x` into `[0, 2)`.
fn mod2(x: &BigRational) -> BigRational {
    let two = rat(2);
    x - (x / &two).floor() * two
}

impl DiscriminantGroup {
    fn new(l: &Lattice) -> Result<Self> {
        if !l.is_integral() {
            return input(format!("{} is not integral", l.label));
        }
        let det = l.determinant();
        if det.is_zero() {
            return input(format!("{} is degenerate", l.label));
        }
        if det.abs() > rat(MAX_DISCRIMINANT as i64) {
            return Err(Error::Resource(format!("discriminant of order {} exceeds {MAX_DISCRIMINANT}", det.abs())));
        }
        let g: Vec<Vec<BigInt>> = l.gram.iter().map(|r| r.iter().map(|x| x.to_integer()).collect()).collect();
        let (diag, _u, v) = linalg::smith_normal_form(&g);
        let n = l.rank();
        let mut invariant_factors = Vec::new();
        let mut generators = Vec::new();
        for (i, d) in diag.iter().enumerate() {
            if d.is_one() {
                continue;
            }
            invariant_factors.push(d.clone());
            generators.push((0..n).map(|r| frac(&BigRational::new(v[r][i].clone(), d.clone()))).collect());
        }
        let mut dg = Self { invariant_factors, generators, elements: Vec::new(), gram: l.gram.clone() };
        let orders: Vec<u64> = dg.invariant_factors.iter().map(|d| d.to_u64().expect("bounded")).collect();
        let mut digits = vec![0u64; orders.len()];
        loop {
            let mut x = vec![rat(0); n];
            for (a, gen) in digits.iter().zip(&dg.generators) {
                for (xi, gi) in x.iter_mut().zip(gen) {
                    *xi += gi * rat(*a as i64);
                }
            }
            let coords: Vec<_> = x.iter().map(frac).collect();
            let norm = dg.q(&coords);
            dg.elements.push(DiscriminantElement { coords, norm });
            let mut i = 0;
            while i < digits.len() {
                digits[i] += 1;
                if digits[i] < orders[i] {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == digits.len() {
                break;
            }
        }
        Ok(dg)
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn generators(&self) -> &[Vec<BigRational>] {
        &self.generators
    }

    pub fn elements(&self) -> &[DiscriminantElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// The discriminant quadratic form `x ↦ x² mod 2`.
    pub fn q(&self, x: &[BigRational]) -> BigRational {
        mod2(&linalg::bilinear(&self.gram, x, x))
    }

    /// Canonical representative of the class of a dual vector.
    pub fn reduce(&self, x: &[BigRational]) -> Vec<BigRational> {
        x.iter().map(frac).collect()
    }

    /// True when every `γ²` is an integer.
    pub fn has_integral_norms(&self) -> bool {
        self.elements.iter().all(|e| e.norm.is_integer())
    }

    pub fn norm_counts(&self) -> BTreeMap<BigRational, usize> {
        let mut m = BTreeMap::new();
        for e in &self.elements {
            *m.entry(e.norm.clone()).or_insert(0) += 1;
        }
        m
    }
}

/// Elements of `Z[ζ8]` as coefficients of `1, ζ, ζ², ζ³` (`ζ⁴ = -1`).
pub type Cyclotomic8 = [i64; 4];

fn zeta8_power(e: i64) -> Cyclotomic8 {
    let e = e.rem_euclid(8) as usize;
    let mut out = [0; 4];
    if e < 4 {
        out[e] = 1;
    } else {
        out[e - 4] = -1;
    }
    out
}

fn cyc_mul(a: &Cyclotomic8, b: &Cyclotomic8) -> Cyclotomic8 {
    let mut out = [0i64; 4];
    for i in 0..4 {
        for j in 0..4 {
            let p = a[i] * b[j];
            if i + j < 4 {
                out[i + j] += p;
            } else {
                out[i + j - 4] -= p;
            }
        }
    }
    out
}

/// `√n` in `Z[ζ8]` when `n` is a square or twice a square.
fn cyc_sqrt(n: u64) -> Option<Cyclotomic8> {
    let s = n.isqrt();
    if s * s == n {
        return Some([s as i64, 0, 0, 0]);
    }
    let t = (n / 2).isqrt();
    // √2 = ζ - ζ³.
    (n.is_multiple_of(2) && t * t == n / 2).then_some([0, t as i64, 0, -(t as i64)])
}

/// Invariants determining the genus of an even lattice with a 2-elementary
/// style discriminant form, used as a surrogate for isometry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusInvariants {
    pub rank: usize,
    pub signature: (usize, usize),
    pub determinant: BigRational,
    pub even: bool,
    pub invariant_factors: Vec<BigInt>,
    pub norm_counts: BTreeMap<BigRational, usize>,
    /// `Σ exp(πi γ²)` when every `γ²` lies in `Z/4`.
    pub gauss_sum: Option<Cyclotomic8>,
    /// Whether the Gauss sum equals `√|D| ζ8^{sig}`, when decidable here.
    pub milgram: Option<bool>,
}

impl GenusInvariants {
    fn new(l: &Lattice) -> Result<Self> {
        let signature = l.signature()?;
        let dg = l.discriminant_group()?;
        let norm_counts = dg.norm_counts();
        let gauss_sum = norm_counts.iter().try_fold([0i64; 4], |mut acc, (r, &c)| {
            let e = r * rat(4);
            if !e.is_integer() {
                return None;
            }
            let z = zeta8_power(e.to_integer().to_i64()?);
            for t in 0..4 {
                acc[t] += z[t] * c as i64;
            }
            Some(acc)
        });
        let order = dg.order() as u64;
        let milgram = match (gauss_sum, cyc_sqrt(order)) {
            (Some(g), Some(s)) => {
                let sig = signature.0 as i64 - signature.1 as i64;
                Some(cyc_mul(&s, &zeta8_power(sig)) == g)
            }
            _ => None,
        };
        Ok(Self {
            rank: l.rank(),
            signature,
            determinant: l.determinant(),
            even: l.is_even(),
            invariant_factors: dg.invariant_factors().to_vec(),
            norm_counts,
            gauss_sum,
            milgram,
        })
    }
}

impl fmt::Display for GenusInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors: Vec<String> = self.invariant_factors.iter().map(|d| d.to_string()).collect();
        let norms: Vec<String> = self.norm_counts.iter().map(|(r, c)| format!("{r}:{c}")).collect();
        write!(
            f,
            "signature ({},{}) det {} {} factors [{}] norms {{{}}}",
            self.signature.0,
            self.signature.1,
            self.determinant,
            if self.even { "even" } else { "odd" },
            factors.join(","),
            norms.join(" ")
        )?;
        if let Some(g) = self.gauss_sum {
            write!(f, " gauss {g:?}")?;
        }
        if let Some(m) = self.milgram {
            write!(f, " milgram {}", if m { "ok" } else { "FAILED" })?;
        }
        Ok(())
    }
}

/// `N`: construction A of the extended Hamming code of length 16.
pub fn lattice_n() -> Lattice {
    Lattice::construction_a(&LinearCode::hamming_16()).relabel("N")
}

/// `Λ16 ⊕ II_{1,1}(2)`.
pub fn lattice_l() -> Lattice {
    Lattice::barnes_wall_16().direct_sum(&Lattice::hyperbolic_plane().rescale(&rat(2)).expect("nonzero")).relabel("L")
}
