//! Fincke-Pohst enumeration of lattice points in ellipsoids, in exact
//! integer arithmetic.
//!
//! A [`ShellPlan`] LLL-reduces the Gram matrix once and precomputes an
//! integer-scaled `LDL^T` decomposition. Each query then enumerates the
//! integer vectors `k` with `Q(k + c) ≤ R` for a rational centre `c`, and
//! hands the caller an integer image of `k` (for example its ambient
//! coordinates) together with the exact scaled norm.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::linalg::{self, lcm_of_denominators, to_i128, to_i64, IntMatrix, RatMatrix};
use crate::error::{Error, Result};

/// Largest scaled budget accepted, leaving headroom for `e * Z^2` in `i128`.
const BUDGET_CAP: i128 = 1 << 100;

#[derive(Clone, Debug)]
pub struct ShellPlan {
    n: usize,
    width: usize,
    /// Gram scale: the integer form is `scale * gram`.
    scale: BigInt,
    /// `U^{-T}`: maps original coordinates to reduced ones.
    uinv_t: Vec<Vec<i64>>,
    s0: Vec<i128>,
    m: Vec<Vec<i128>>,
    e: Vec<i128>,
    g0: BigInt,
    /// Images of the reduced basis vectors.
    image: Vec<Vec<i64>>,
}

/// A prepared query: centre and budget in the plan's integer units.
#[derive(Clone, Debug)]
pub struct ShellQuery {
    dc: i128,
    dcc: Vec<i128>,
    budget: i128,
    /// Scaled norms passed to callbacks equal `norm_den * Q(k + c)`.
    pub norm_den: BigInt,
}

impl ShellPlan {
    /// `image` holds one row per original basis vector (possibly of width 0).
    pub fn new(gram: &RatMatrix, image: &[Vec<i64>]) -> Result<Self> {
        let n = gram.len();
        if image.len() != n {
            return Err(Error::Input("image needs one row per basis vector".into()));
        }
        let width = image.first().map_or(0, Vec::len);
        let scale = lcm_of_denominators(gram.iter().flatten());
        let int_gram: IntMatrix = gram.iter().map(|r| r.iter().map(|x| (x * &scale).to_integer()).collect()).collect();
        let (reduced, u) = linalg::lll_gram(&int_gram)?;
        let red_rat: RatMatrix =
            reduced.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
        let (d, mu) =
            linalg::upper_ldl(&red_rat).ok_or_else(|| Error::Input("Gram matrix is not positive definite".into()))?;
        let u_rat: RatMatrix =
            u.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
        let uinv = linalg::inverse(&u_rat).expect("unimodular");
        let uinv_t = linalg::transpose(&uinv)
            .iter()
            .map(|r| r.iter().map(|x| to_i64(&x.to_integer(), "basis reduction")).collect())
            .collect::<Result<Vec<Vec<i64>>>>()?;
        let mut s0 = Vec::with_capacity(n);
        let mut m = vec![vec![0i128; n]; n];
        let mut g0 = BigInt::one();
        for i in 0..n {
            let s = lcm_of_denominators(mu[i][i + 1..].iter());
            for j in i + 1..n {
                m[i][j] = to_i128(&(&mu[i][j] * &s).to_integer(), "enumeration constants")?;
            }
            let w = &d[i] / BigRational::from_integer(&s * &s);
            g0 = g0.lcm(w.denom());
            s0.push(to_i128(&s, "enumeration constants")?);
        }
        let e = (0..n)
            .map(|i| {
                let s = BigInt::from(s0[i]);
                let w = &d[i] * BigRational::from_integer(g0.clone()) / BigRational::from_integer(&s * &s);
                to_i128(&w.to_integer(), "enumeration constants")
            })
            .collect::<Result<Vec<_>>>()?;
        let mut img = vec![vec![0i64; width]; n];
        for i in 0..n {
            for (j, row) in image.iter().enumerate() {
                let c = to_i64(&u[i][j], "basis reduction")?;
                if c == 0 {
                    continue;
                }
                for t in 0..width {
                    img[i][t] = c
                        .checked_mul(row[t])
                        .and_then(|x| x.checked_add(img[i][t]))
                        .ok_or(Error::Overflow("enumeration image"))?;
                }
            }
        }
        Ok(Self { n, width, scale, uinv_t, s0, m, e, g0, image: img })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// Prepares the query `Q(k + shift) ≤ bound` (or `<` when `strict`).
    pub fn query(&self, shift: &[BigRational], bound: &BigRational, strict: bool) -> Result<ShellQuery> {
        let (nums, den) = linalg::integer_numerators(shift);
        let nums = nums.iter().map(|x| to_i64(x, "enumeration centre")).collect::<Result<Vec<_>>>()?;
        self.query_num(&nums, to_i64(&den, "enumeration centre")?, bound, strict)
    }

    /// As [`Self::query`] with the shift given as `nums / den`.
    pub fn query_num(&self, nums: &[i64], den: i64, bound: &BigRational, strict: bool) -> Result<ShellQuery> {
        if nums.len() != self.n || den <= 0 {
            return Err(Error::Input("bad enumeration centre".into()));
        }
        let dc = den as i128;
        let dcc =
            self.uinv_t.iter().map(|row| row.iter().zip(nums).map(|(&a, &b)| a as i128 * b as i128).sum()).collect();
        let norm_den = &self.g0 * BigInt::from(dc * dc) * &self.scale;
        let x = bound * BigRational::from_integer(norm_den.clone());
        let budget = if strict { x.ceil().to_integer() - 1 } else { x.floor().to_integer() };
        let budget = if budget.is_negative() {
            -1
        } else {
            let b = to_i128(&budget, "enumeration budget")?;
            if b > BUDGET_CAP {
                return Err(Error::Overflow("enumeration budget"));
            }
            b
        };
        Ok(ShellQuery { dc, dcc, budget, norm_den })
    }

    /// Calls `f(image, scaled_norm)` for every point of the query, where
    /// `image` is the image of the integer part `k` only.
    pub fn run<F: FnMut(&[i64], i128)>(&self, q: &ShellQuery, mut f: F) {
        if q.budget < 0 || self.n == 0 {
            if q.budget >= 0 {
                f(&[], 0);
            }
            return;
        }
        let mut y = vec![0i128; self.n];
        let mut img = vec![vec![0i64; self.width]; self.n + 1];
        self.level(q, self.n - 1, q.budget, &mut y, &mut img, &mut f);
    }

    fn level<F: FnMut(&[i64], i128)>(
        &self,
        q: &ShellQuery,
        i: usize,
        rem: i128,
        y: &mut [i128],
        img: &mut [Vec<i64>],
        f: &mut F,
    ) {
        let mut base = self.s0[i] * q.dcc[i];
        for j in i + 1..self.n {
            base += self.m[i][j] * y[j];
        }
        let e = self.e[i];
        let r = (rem / e).isqrt();
        let s = self.s0[i] * q.dc;
        let lo = Integer::div_ceil(&(-r - base), &s);
        let hi = Integer::div_floor(&(r - base), &s);
        if lo > hi {
            return;
        }
        {
            let (head, tail) = img.split_at_mut(i + 1);
            let step = &self.image[i];
            for t in 0..self.width {
                head[i][t] = tail[0][t] + lo as i64 * step[t];
            }
        }
        let mut z = s * lo + base;
        for k in lo..=hi {
            let cost = e * z * z;
            if i == 0 {
                f(&img[0], q.budget - rem + cost);
            } else {
                y[i] = q.dc * k + q.dcc[i];
                self.level(q, i - 1, rem - cost, y, img, f);
            }
            let step = &self.image[i];
            let cur = &mut img[i];
            for t in 0..self.width {
                cur[t] += step[t];
            }
            z += s;
        }
    }

    /// Number of points in the query.
    pub fn count(&self, q: &ShellQuery) -> u64 {
        let mut c = 0u64;
        self.run(q, |_, _| c += 1);
        c
    }
}

/// Exact norm of a scaled value returned by [`ShellPlan::run`].
pub fn scaled_norm(value: i128, q: &ShellQuery) -> BigRational {
    BigRational::new(BigInt::from(value), q.norm_den.clone())
}

/// Identity image rows, so callbacks receive original coordinates.
pub fn coordinate_image(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect()
}
