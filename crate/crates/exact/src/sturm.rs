//! Exact real-root counting with Sturm sequences.

use num_traits::{Signed, Zero};

use crate::poly::Poly;
use crate::scalar::Q;

/// Interval end: a rational point or +-infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    At(Q),
    PosInf,
}

pub fn sturm_sequence(p: &Poly) -> Vec<Poly> {
    let mut seq = vec![p.clone(), p.derive()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let (_, r) = seq[n - 2].divrem(&seq[n - 1]).expect("nonzero");
        if r.is_zero() {
            break;
        }
        // scaling by a positive constant keeps signs and tames coefficient growth
        let l = r.lc().abs();
        seq.push(-&r.scale(&l.recip()));
    }
    seq
}

fn sign_at(p: &Poly, b: &Bound) -> i32 {
    match b {
        Bound::NegInf => p.sign_at_infinity(false),
        Bound::PosInf => p.sign_at_infinity(true),
        Bound::At(x) => {
            let v = p.eval(x);
            if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            }
        }
    }
}

fn variations(seq: &[Poly], b: &Bound) -> usize {
    let signs: Vec<i32> = seq.iter().map(|p| sign_at(p, b)).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots in the half-open interval (lo, hi].
pub fn count_roots(p: &Poly, lo: &Bound, hi: &Bound) -> usize {
    if p.is_zero() || p.is_constant() {
        return 0;
    }
    // square-free part keeps the sequence valid at multiple roots
    let g = p.gcd(&p.derive());
    let sf = if g.is_constant() { p.clone() } else { p.divrem(&g).expect("nonzero").0 };
    let seq = sturm_sequence(&sf);
    let a = variations(&seq, lo);
    let b = variations(&seq, hi);
    a.saturating_sub(b)
}

/// True iff p has a real root in the open interval (lo, hi).
pub fn has_root_open(p: &Poly, lo: &Bound, hi: &Bound) -> bool {
    if p.is_zero() {
        return true;
    }
    let mut n = count_roots(p, lo, hi);
    if let Bound::At(h) = hi {
        if p.eval(h).is_zero() {
            n -= 1;
        }
    }
    n > 0
}

/// True iff p has a real root in the closed interval [lo, hi] (infinite ends excluded).
pub fn has_root_closed(p: &Poly, lo: &Bound, hi: &Bound) -> bool {
    if p.is_zero() {
        return true;
    }
    if let Bound::At(l) = lo {
        if p.eval(l).is_zero() {
            return true;
        }
    }
    count_roots(p, lo, hi) > 0
}
