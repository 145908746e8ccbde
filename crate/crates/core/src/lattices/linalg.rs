//! Exact linear algebra over ℚ and ℤ: determinants, inverses, symmetric
//! diagonalization, LLL on Gram matrices, Smith normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type RatMatrix = Vec<Vec<BigRational>>;
pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn identity(n: usize) -> RatMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { rat(1) } else { rat(0) }).collect()).collect()
}

pub fn zeros(r: usize, c: usize) -> RatMatrix {
    vec![vec![rat(0); c]; r]
}

pub fn from_i64(rows: &[Vec<i64>]) -> RatMatrix {
    rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
}

pub fn transpose(a: &RatMatrix) -> RatMatrix {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = rat(0);
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            s += &row[k] * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &RatMatrix, v: &[BigRational]) -> Vec<BigRational> {
    a.iter().map(|row| row.iter().zip(v).fold(rat(0), |s, (x, y)| s + x * y)).collect()
}

/// `v^T A w`.
pub fn bilinear(a: &RatMatrix, v: &[BigRational], w: &[BigRational]) -> BigRational {
    let aw = mat_vec(a, w);
    v.iter().zip(&aw).fold(rat(0), |s, (x, y)| s + x * y)
}

/// `B F B^T` for a basis `B` (rows) and a form `F`.
pub fn congruence(b: &RatMatrix, f: &RatMatrix) -> RatMatrix {
    mat_mul(&mat_mul(b, f), &transpose(b))
}

pub fn determinant(a: &RatMatrix) -> BigRational {
    let n = a.len();
    let mut m = a.clone();
    let mut det = rat(1);
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return rat(0);
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &pivot;
            for c in col..n {
                let t = &f * &m[col][c];
                m[r][c] -= t;
            }
        }
    }
    det
}

pub fn inverse(a: &RatMatrix) -> Option<RatMatrix> {
    let n = a.len();
    let mut m: RatMatrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { rat(1) } else { rat(0) }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(p, col);
        let inv = m[col][col].recip();
        for c in 0..2 * n {
            m[col][c] = &m[col][c] * &inv;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in 0..2 * n {
                let t = &f * &m[col][c];
                m[r][c] -= t;
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Counts of positive, negative and zero entries in a diagonalization of the
/// symmetric matrix `a` by congruence.
pub fn signature(a: &RatMatrix) -> (usize, usize, usize) {
    let n = a.len();
    let mut m = a.clone();
    let (mut pos, mut neg) = (0, 0);
    for k in 0..n {
        if m[k][k].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !m[i][i].is_zero()) {
                swap_sym(&mut m, k, i);
            } else if let Some((i, j)) =
                (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !m[i][j].is_zero())
            {
                // x_i += x_j makes the diagonal entry 2 m_ij.
                add_sym(&mut m, i, j, &rat(1));
                swap_sym(&mut m, k, i);
            } else {
                break;
            }
        }
        let p = m[k][k].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &p;
            add_sym(&mut m, i, k, &-f);
        }
    }
    (pos, neg, n - pos - neg)
}

fn swap_sym(m: &mut RatMatrix, i: usize, j: usize) {
    m.swap(i, j);
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

/// Basis change `b_i += f b_j` applied to the Gram matrix `m`.
fn add_sym(m: &mut RatMatrix, i: usize, j: usize, f: &BigRational) {
    let n = m.len();
    for l in 0..n {
        let t = f * &m[j][l];
        m[i][l] += t;
    }
    for l in 0..n {
        let t = f * &m[l][j];
        m[l][i] += t;
    }
}

/// Decomposition `Q(y) = Σ d_i (y_i + Σ_{j>i} mu[i][j] y_j)^2` of a positive
/// definite form. Returns `None` if the form is not positive definite.
pub fn upper_ldl(a: &RatMatrix) -> Option<(Vec<BigRational>, RatMatrix)> {
    let n = a.len();
    let mut d = vec![rat(0); n];
    let mut mu = zeros(n, n);
    for i in 0..n {
        let mut di = a[i][i].clone();
        for k in 0..i {
            di -= &d[k] * &mu[k][i] * &mu[k][i];
        }
        if !di.is_positive() {
            return None;
        }
        for j in i + 1..n {
            let mut s = a[i][j].clone();
            for k in 0..i {
                s -= &d[k] * &mu[k][i] * &mu[k][j];
            }
            mu[i][j] = s / &di;
        }
        mu[i][i] = rat(1);
        d[i] = di;
    }
    Some((d, mu))
}

pub fn lcm_of_denominators<'a>(xs: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
}

/// Common denominator and integer numerators of a rational vector.
pub fn integer_numerators(v: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let den = lcm_of_denominators(v);
    let nums = v.iter().map(|x| (x * &den).to_integer()).collect();
    (nums, den)
}

fn round(x: &BigRational) -> BigInt {
    (x + ratio(1, 2)).floor().to_integer()
}

/// LLL reduction (δ = 3/4) of a positive definite integer Gram matrix.
/// Returns the reduced Gram matrix and the unimodular `U` with
/// `reduced = U G U^T` (rows of `U` express the new basis in the old one).
pub fn lll_gram(gram: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    let n = gram.len();
    let mut g = gram.clone();
    let mut u: IntMatrix = (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
    if n <= 1 {
        return Ok((g, u));
    }
    let delta = ratio(3, 4);
    let (mut mu, mut bstar) = gso(&g)?;
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let r = round(&mu[k][j]);
            if r.is_zero() {
                continue;
            }
            int_add_sym(&mut g, &mut u, k, j, &-&r);
            let rr = BigRational::from_integer(r);
            for l in 0..j {
                let t = &rr * &mu[j][l];
                mu[k][l] -= t;
            }
            mu[k][j] -= &rr;
        }
        let lhs = &bstar[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &bstar[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            u.swap(k, k - 1);
            (mu, bstar) = gso(&g)?;
            k = k.saturating_sub(1).max(1);
        }
    }
    Ok((g, u))
}

fn gso(g: &IntMatrix) -> Result<(RatMatrix, Vec<BigRational>)> {
    let n = g.len();
    let mut mu = zeros(n, n);
    let mut b = vec![rat(0); n];
    for i in 0..n {
        for j in 0..i {
            let mut s = BigRational::from_integer(g[i][j].clone());
            for l in 0..j {
                s -= &mu[j][l] * &mu[i][l] * &b[l];
            }
            mu[i][j] = s / &b[j];
        }
        let mut s = BigRational::from_integer(g[i][i].clone());
        for l in 0..i {
            s -= &mu[i][l] * &mu[i][l] * &b[l];
        }
        if !s.is_positive() {
            return Err(Error::Input("Gram matrix is not positive definite".into()));
        }
        b[i] = s;
    }
    Ok((mu, b))
}

fn int_add_sym(g: &mut IntMatrix, u: &mut IntMatrix, i: usize, j: usize, f: &BigInt) {
    let n = g.len();
    for l in 0..n {
        let t = f * &g[j][l];
        g[i][l] += t;
    }
    for l in 0..n {
        let t = f * &g[l][j];
        g[l][i] += t;
    }
    for l in 0..n {
        let t = f * &u[j][l];
        u[i][l] += t;
    }
}

/// Smith normal form: returns `(diag, U, V)` with `U A V = diag(d_1, …)`,
/// `d_i | d_{i+1}`, `d_i ≥ 0`, and `U`, `V` unimodular.
pub fn smith_normal_form(a: &IntMatrix) -> (Vec<BigInt>, IntMatrix, IntMatrix) {
    let r = a.len();
    let c = if r == 0 { 0 } else { a[0].len() };
    let mut m = a.clone();
    let mut u = int_identity(r);
    let mut v = int_identity(c);
    for t in 0..r.min(c) {
        loop {
            let Some((pi, pj)) = (t..r)
                .flat_map(|i| (t..c).map(move |j| (i, j)))
                .filter(|&(i, j)| !m[i][j].is_zero())
                .min_by_key(|&(i, j)| m[i][j].abs())
            else {
                return finish_snf(m, u, v);
            };
            m.swap(t, pi);
            u.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            let p = m[t][t].clone();
            let mut dirty = false;
            for i in t + 1..r {
                let q = m[i][t].div_floor(&p);
                if !q.is_zero() {
                    for l in 0..c {
                        let x = &q * &m[t][l];
                        m[i][l] -= x;
                    }
                    for l in 0..r {
                        let x = &q * &u[t][l];
                        u[i][l] -= x;
                    }
                }
                dirty |= !m[i][t].is_zero();
            }
            for j in t + 1..c {
                let q = m[t][j].div_floor(&p);
                if !q.is_zero() {
                    for l in 0..r {
                        let x = &q * &m[l][t];
                        m[l][j] -= x;
                    }
                    for l in 0..c {
                        let x = &q * &v[l][t];
                        v[l][j] -= x;
                    }
                }
                dirty |= !m[t][j].is_zero();
            }
            if dirty {
                continue;
            }
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !(&m[i][j] % &p).is_zero()));
            if let Some(i) = bad {
                for l in 0..c {
                    let x = m[i][l].clone();
                    m[t][l] += x;
                }
                for l in 0..r {
                    let x = u[i][l].clone();
                    u[t][l] += x;
                }
                continue;
            }
            break;
        }
        if m[t][t].is_negative() {
            for l in 0..c {
                m[t][l] = -&m[t][l];
            }
            for l in 0..r {
                u[t][l] = -&u[t][l];
            }
        }
    }
    finish_snf(m, u, v)
}

fn finish_snf(m: IntMatrix, u: IntMatrix, v: IntMatrix) -> (Vec<BigInt>, IntMatrix, IntMatrix) {
    let k = m.len().min(if m.is_empty() { 0 } else { m[0].len() });
    let diag = (0..k).map(|i| m[i][i].abs()).collect();
    (diag, u, v)
}

pub fn int_identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect()).collect()
}

/// Unimodular `V` with `a V = (g, 0, …, 0)` where `g = gcd(a) ≥ 0`.
/// Columns of `V` are returned as rows.
pub fn gcd_column_basis(a: &[BigInt]) -> (BigInt, IntMatrix) {
    let n = a.len();
    let mut a = a.to_vec();
    let mut cols = int_identity(n);
    for j in 1..n {
        // Euclid on the pair (a_0, a_j), mirrored on the columns.
        while !a[j].is_zero() {
            let q = a[0].div_floor(&a[j]);
            let t = &q * &a[j];
            a[0] -= t;
            for l in 0..n {
                let t = &q * &cols[j][l];
                cols[0][l] -= t;
            }
            a.swap(0, j);
            cols.swap(0, j);
        }
    }
    if a[0].is_negative() {
        a[0] = -&a[0];
        for x in cols[0].iter_mut() {
            *x = -&*x;
        }
    }
    (a[0].clone(), cols)
}

pub fn to_i64(x: &BigInt, what: &'static str) -> Result<i64> {
    x.to_i64().ok_or(Error::Overflow(what))
}

pub fn to_i128(x: &BigInt, what: &'static str) -> Result<i128> {
    x.to_i128().ok_or(Error::Overflow(what))
}
