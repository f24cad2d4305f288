//! Fraction-free determinants, integer kernels and Hermite normal forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::IntVector;

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_sq(a: &[BigInt]) -> BigInt {
    a.iter().map(|x| x * x).sum()
}

/// gcd of all entries (0 for the zero vector).
pub fn content(v: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for x in v {
        if g.is_one() {
            break;
        }
        g = g.gcd(x);
    }
    g
}

/// Bareiss determinant of a square integer matrix.
pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Gram determinant `‖v₁ ∧ … ∧ v_k‖²`.
pub fn gram_det(vs: &[IntVector]) -> BigInt {
    let g: Vec<Vec<BigInt>> = vs.iter().map(|a| vs.iter().map(|b| dot(a, b)).collect()).collect();
    det(&g)
}

/// Rank over Q of an integer matrix given by rows.
pub fn rank(rows: &[IntVector]) -> usize {
    let mut a: Vec<IntVector> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    if a.is_empty() {
        return 0;
    }
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in r + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let (f, g) = (a[r][c].clone(), a[i][c].clone());
            for j in c..cols {
                let v = &a[i][j] * &f - &a[r][j] * &g;
                a[i][j] = v;
            }
            let ct = content(&a[i]);
            if !ct.is_zero() && !ct.is_one() {
                for x in a[i].iter_mut() {
                    *x = &*x / &ct;
                }
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

/// Rank of a rational matrix.
pub fn rank_rational(rows: &[Vec<BigRational>]) -> usize {
    rank(&rows.iter().map(|r| clear_denominators(r)).collect::<Vec<_>>())
}

/// Scales a rational vector to a primitive integer vector in the same direction.
pub fn clear_denominators(r: &[BigRational]) -> IntVector {
    let l = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let v: IntVector = r.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let c = content(&v);
    if c.is_zero() || c.is_one() {
        v
    } else {
        v.into_iter().map(|x| x / &c).collect()
    }
}

/// Solves `Σ c_i rows_i = y` over Q, or `None` when `y` is not in the row space.
pub fn solve_in_row_space(rows: &[IntVector], y: &[BigInt]) -> Option<Vec<BigRational>> {
    let k = rows.len();
    let n = y.len();
    // columns are equations: A c = y with A = rowsᵀ (n × k), augmented
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = rows.iter().map(|r| BigRational::from_integer(r[i].clone())).collect();
            row.push(BigRational::from_integer(y[i].clone()));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..=k {
                    let v = &a[r][j] * &f;
                    a[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if (r..n).any(|i| !a[i][k].is_zero()) {
        return None;
    }
    let mut c = vec![BigRational::zero(); k];
    for (i, &p) in pivots.iter().enumerate() {
        c[p] = a[i][k].clone();
    }
    Some(c)
}

fn col_combine(m: &mut [IntVector], p: usize, j: usize, s: &BigInt, t: &BigInt, u: &BigInt, v: &BigInt) {
    // (col_p, col_j) <- (s col_p + t col_j, u col_p + v col_j)
    for row in m.iter_mut() {
        let a = row[p].clone();
        let b = row[j].clone();
        row[p] = s * &a + t * &b;
        row[j] = u * &a + v * &b;
    }
}

/// Z-basis of `{x ∈ Z^n : rows · x = 0}`. The result is saturated by construction.
pub fn integer_kernel(rows: &[IntVector], n: usize) -> Vec<IntVector> {
    let r = rows.len();
    // stacked matrix [rows; I_n] under column operations
    let mut m: Vec<IntVector> = rows.to_vec();
    for i in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[i] = BigInt::one();
        m.push(e);
    }
    let mut piv = 0;
    for i in 0..r {
        if piv == n {
            break;
        }
        for j in piv + 1..n {
            if m[i][j].is_zero() {
                continue;
            }
            if m[i][piv].is_zero() {
                for row in m.iter_mut() {
                    row.swap(piv, j);
                }
                continue;
            }
            let a = m[i][piv].clone();
            let b = m[i][j].clone();
            let eg = a.extended_gcd(&b);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let u = -(&b / &g);
            let v = &a / &g;
            col_combine(&mut m, piv, j, &s, &t, &u, &v);
        }
        if !m[i][piv].is_zero() {
            piv += 1;
        }
    }
    (piv..n).map(|c| (0..n).map(|i| m[r + i][c].clone()).collect()).collect()
}

/// Row Hermite normal form of a full-row-rank integer matrix: echelon, positive
/// pivots, entries above each pivot reduced into `[0, pivot)`.
pub fn row_hnf(rows: &[IntVector]) -> Vec<IntVector> {
    let mut a: Vec<IntVector> = rows.to_vec();
    if a.is_empty() {
        return a;
    }
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        // gcd-combine rows r.. in column c
        loop {
            let nz: Vec<usize> = (r..a.len()).filter(|&i| !a[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let best = *nz.iter().min_by_key(|&&i| a[i][c].abs()).unwrap();
            a.swap(r, best);
            let mut done = true;
            for i in r + 1..a.len() {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                for j in c..cols {
                    let v = &q * &a[r][j];
                    a[i][j] -= v;
                }
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            if !q.is_zero() {
                for j in c..cols {
                    let v = &q * &a[r][j];
                    a[i][j] -= v;
                }
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}
