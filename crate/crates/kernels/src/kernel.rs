use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use xmop_exact::{fmt_q, Poly, RatFn, Q};

/// Scalar factor exp(e(t)) * prod |t - c_i|^gamma_i.
///
/// Canonical: factors sorted by center, one entry per center, no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawKernel", into = "RawKernel")]
pub struct Kernel {
    exp_arg: Poly,
    factors: Vec<(Q, Q)>,
}

#[derive(Serialize, Deserialize)]
struct RawKernel {
    exp_arg: Poly,
    power_factors: Vec<[String; 2]>,
}

impl TryFrom<RawKernel> for Kernel {
    type Error = xmop_exact::AlgebraError;
    fn try_from(r: RawKernel) -> Result<Self, Self::Error> {
        let mut fs = Vec::new();
        for [c, g] in &r.power_factors {
            fs.push((xmop_exact::parse_q(c)?, xmop_exact::parse_q(g)?));
        }
        Ok(Kernel::new(r.exp_arg, fs))
    }
}

impl From<Kernel> for RawKernel {
    fn from(k: Kernel) -> Self {
        RawKernel {
            exp_arg: k.exp_arg,
            power_factors: k.factors.iter().map(|(c, g)| [fmt_q(c), fmt_q(g)]).collect(),
        }
    }
}

impl Kernel {
    pub fn new(exp_arg: Poly, factors: Vec<(Q, Q)>) -> Self {
        let mut k = Kernel { exp_arg, factors: Vec::new() };
        for (c, g) in factors {
            k.push_factor(c, g);
        }
        k
    }

    pub fn trivial() -> Self {
        Kernel { exp_arg: Poly::zero(), factors: Vec::new() }
    }

    /// exp(e(t)).
    pub fn exp(e: Poly) -> Self {
        Kernel { exp_arg: e, factors: Vec::new() }
    }

    /// |t - c|^gamma.
    pub fn power(c: Q, gamma: Q) -> Self {
        Kernel::new(Poly::zero(), vec![(c, gamma)])
    }

    fn push_factor(&mut self, c: Q, g: Q) {
        match self.factors.binary_search_by(|(x, _)| x.cmp(&c)) {
            Ok(i) => {
                self.factors[i].1 += g;
                if self.factors[i].1.is_zero() {
                    self.factors.remove(i);
                }
            }
            Err(i) => {
                if !g.is_zero() {
                    self.factors.insert(i, (c, g));
                }
            }
        }
    }

    pub fn exp_arg(&self) -> &Poly {
        &self.exp_arg
    }

    pub fn factors(&self) -> &[(Q, Q)] {
        &self.factors
    }

    pub fn is_trivial(&self) -> bool {
        self.exp_arg.is_zero() && self.factors.is_empty()
    }

    /// Exponent of |t - c| (zero when absent).
    pub fn exponent_at(&self, c: &Q) -> Q {
        self.factors
            .iter()
            .find(|(x, _)| x == c)
            .map(|(_, g)| g.clone())
            .unwrap_or_else(Q::zero)
    }

    pub fn mul(&self, o: &Kernel) -> Kernel {
        let mut k = Kernel { exp_arg: &self.exp_arg + &o.exp_arg, factors: self.factors.clone() };
        for (c, g) in &o.factors {
            k.push_factor(c.clone(), g.clone());
        }
        k
    }

    pub fn recip(&self) -> Kernel {
        Kernel {
            exp_arg: -&self.exp_arg,
            factors: self.factors.iter().map(|(c, g)| (c.clone(), -g)).collect(),
        }
    }

    /// Multiply in |t - c|^dg.
    pub fn with_factor(&self, c: Q, dg: Q) -> Kernel {
        let mut k = self.clone();
        k.push_factor(c, dg);
        k
    }

    /// e'(t) + sum gamma_i / (t - c_i).
    pub fn log_derivative(&self) -> RatFn {
        let mut acc = RatFn::from_poly(self.exp_arg.derive());
        for (c, g) in &self.factors {
            let term = RatFn::new(Poly::constant(g.clone()), Poly::linear_root(c)).expect("nonzero");
            acc = &acc + &term;
        }
        acc
    }
}

impl Default for Kernel {
    fn default() -> Self {
        Kernel::trivial()
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.exp_arg.is_zero() {
            parts.push(format!("exp({})", self.exp_arg));
        }
        for (c, g) in &self.factors {
            let base = if c.is_zero() {
                "|t|".to_string()
            } else {
                format!("|{}|", Poly::linear_root(c))
            };
            if g.is_one() {
                parts.push(base);
            } else {
                parts.push(format!("{base}^({})", fmt_q(g)));
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Kernel({self})")
    }
}
