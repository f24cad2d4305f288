//! Real roots in `[0, 1]` of a rational polynomial, isolated by Sturm sequences and
//! refined to a relative width, so that tiny roots come out as tight as large ones.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::{IntPoly, Poly, Sturm};

/// One root with its multiplicity: either exact or inside `(lo, hi)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Root {
    Exact(BigRational, usize),
    Bracket(BigRational, BigRational, usize),
}

impl Root {
    pub fn multiplicity(&self) -> usize {
        match self {
            Root::Exact(_, m) | Root::Bracket(_, _, m) => *m,
        }
    }

    pub fn lo(&self) -> &BigRational {
        match self {
            Root::Exact(r, _) => r,
            Root::Bracket(lo, _, _) => lo,
        }
    }

    pub fn hi(&self) -> &BigRational {
        match self {
            Root::Exact(r, _) => r,
            Root::Bracket(_, hi, _) => hi,
        }
    }
}

fn log2_floor(x: &BigRational) -> i64 {
    let e = x.numer().bits() as i64 - x.denom().bits() as i64;
    // the true value is e or e − 1
    if x >= &pow2(e) {
        e
    } else {
        e - 1
    }
}

fn pow2(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << e as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

/// A split point strictly inside `(lo, hi)`: geometric when the ratio exceeds 4.
fn split_point(lo: &BigRational, hi: &BigRational) -> BigRational {
    if lo.is_positive() {
        let (a, b) = (log2_floor(lo), log2_floor(hi));
        if b - a >= 2 {
            let m = pow2((a + b) / 2);
            if &m > lo && &m < hi {
                return m;
            }
        }
    }
    (lo + hi) / BigRational::from_integer(2.into())
}

/// Simplest fraction in `[lo, hi]` (continued-fraction descent), `0 ≤ lo ≤ hi`.
pub fn simplest_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    let fl = lo.floor();
    if &fl == lo {
        return lo.clone();
    }
    if fl < hi.floor() || &hi.floor() == hi {
        return fl + BigRational::one();
    }
    // lo, hi share the integer part
    let inner = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}

/// Smallest possible modulus of a nonzero root: `|a_0| / (|a_0| + max |a_i|)`, `a_0 ≠ 0`.
fn nonzero_root_floor(p: &IntPoly) -> BigRational {
    let a0 = p.0[0].abs();
    let m = p.0.iter().skip(1).map(|c| c.abs()).max().unwrap_or_default();
    BigRational::new(a0.clone(), a0 + m)
}

/// Roots of `p` in `[0, 1]` with multiplicity, ascending, each bracketed to relative
/// width `2^{-bits}`. Brackets whose simplest rational is an exact root are collapsed.
pub fn roots_in_unit_interval(p: &Poly, bits: u32) -> Vec<Root> {
    let mut out = Vec::new();
    for (i, f) in p.squarefree_split().into_iter().enumerate() {
        let mult = i + 1;
        if f.degree() == 0 {
            continue;
        }
        for r in squarefree_roots(&f, bits) {
            out.push(match r {
                Root::Exact(x, _) => Root::Exact(x, mult),
                Root::Bracket(a, b, _) => Root::Bracket(a, b, mult),
            });
        }
    }
    out.sort_by(|a, b| a.lo().cmp(b.lo()));
    out
}

fn squarefree_roots(f: &Poly, bits: u32) -> Vec<Root> {
    let mut f = f.clone();
    let mut out = Vec::new();
    if f.0[0].is_zero() {
        out.push(Root::Exact(BigRational::zero(), 1));
        f = Poly::new(f.0[1..].to_vec());
        if f.degree() == 0 {
            return out;
        }
    }
    let sturm = Sturm::new(&f);
    let ip = sturm.head().clone();
    let one = BigRational::one();
    let floor = nonzero_root_floor(&ip) / BigRational::from_integer(2.into());
    if floor >= one {
        return out;
    }
    let mut stack = vec![(floor, one)];
    let mut isolated = Vec::new();
    while let Some((a, b)) = stack.pop() {
        match sturm.count(&a, &b) {
            0 => {}
            1 => isolated.push((a, b)),
            _ => {
                let m = split_point(&a, &b);
                stack.push((m.clone(), b));
                stack.push((a, m));
            }
        }
    }
    for (a, b) in isolated {
        out.push(refine(&ip, a, b, bits));
    }
    out
}

/// Narrows `(a, b]` holding one simple root until `b − a ≤ a·2^{-bits}`.
fn refine(p: &IntPoly, mut a: BigRational, mut b: BigRational, bits: u32) -> Root {
    if p.sign_at(&b) == 0 {
        return Root::Exact(b, 1);
    }
    let sb = p.sign_at(&b);
    let tol = pow2(-(bits as i64));
    loop {
        if &b - &a <= &a * &tol {
            break;
        }
        let m = split_point(&a, &b);
        match p.sign_at(&m) {
            0 => return Root::Exact(m, 1),
            s if s == sb => b = m,
            _ => a = m,
        }
    }
    let guess = simplest_between(&a, &b);
    if p.sign_at(&guess) == 0 {
        return Root::Exact(guess, 1);
    }
    Root::Bracket(a, b, 1)
}
