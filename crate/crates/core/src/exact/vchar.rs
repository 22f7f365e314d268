use super::laurent::LaurentPoly;
use super::mono::{Mono, Var};
use super::ratfunc::RatFunc;
use super::series::{exp_series, Series, SeriesDir};
use crate::error::Result;
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::ops::{Add, Sub};

/// A virtual character: a finite integer combination of monomials in
/// `q, t, z, x_s` (no `u`). Multiplicities may be negative.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct VChar {
    terms: BTreeMap<Mono, BigInt>,
}

impl VChar {
    pub fn zero() -> Self {
        VChar::default()
    }

    pub fn line(m: Mono) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m, BigInt::from(1));
        VChar { terms }
    }

    pub fn from_terms(pairs: impl IntoIterator<Item = (Mono, i64)>) -> Self {
        let mut v = VChar::zero();
        for (m, c) in pairs {
            v.add_term(m, BigInt::from(c));
        }
        v
    }

    pub fn add_term(&mut self, m: Mono, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigInt)> {
        self.terms.iter()
    }

    /// Virtual rank: the sum of multiplicities.
    pub fn rank(&self) -> i64 {
        let mut r = BigInt::zero();
        for c in self.terms.values() {
            r += c;
        }
        i64::try_from(r).expect("rank overflow")
    }

    /// Tensor by a line: multiplies every monomial.
    pub fn twist(&self, m: &Mono) -> VChar {
        VChar {
            terms: self.terms.iter().map(|(mm, c)| (mm.mul(m), c.clone())).collect(),
        }
    }

    /// Multiplies by the quantum integer `[c]_q`, i.e. tensors with the
    /// `q`-symmetric string `q^{c-1} + q^{c-3} + ... + q^{1-c}`.
    pub fn mul_q_int(&self, c: i64) -> VChar {
        let mut out = VChar::zero();
        if c == 0 {
            return out;
        }
        let a = c.abs();
        for r in 0..a {
            let shift = Mono::var_pow(Var::Q, a - 1 - 2 * r);
            for (m, mult) in &self.terms {
                let mult = if c < 0 { -mult.clone() } else { mult.clone() };
                out.add_term(m.mul(&shift), mult);
            }
        }
        out
    }

    /// The dual character: every monomial is inverted.
    pub fn dual(&self) -> VChar {
        VChar {
            terms: self.terms.iter().map(|(m, c)| (m.inv(), c.clone())).collect(),
        }
    }

    /// Adams operation: raises every monomial to its `m`-th power, keeping
    /// multiplicities.
    pub fn adams(&self, m: i64) -> VChar {
        assert!(m >= 1, "adams is defined for positive powers");
        if m == 1 {
            return self.clone();
        }
        let mut out = VChar::zero();
        for (mono, c) in &self.terms {
            out.add_term(mono.pow(m), c.clone());
        }
        out
    }

    /// Determinant line: the product of all monomials with multiplicity.
    pub fn det(&self) -> Mono {
        let mut out = Mono::one();
        for (m, c) in &self.terms {
            let k = i64::try_from(c.clone()).expect("det multiplicity overflow");
            out = out.mul(&m.pow(k));
        }
        out
    }

    /// The character as a Laurent polynomial.
    pub fn as_poly(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c.clone())))
    }

    pub fn as_rat(&self) -> RatFunc {
        RatFunc::from_poly(self.as_poly())
    }
}

impl Add for &VChar {
    type Output = VChar;
    fn add(self, rhs: &VChar) -> VChar {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &VChar {
    type Output = VChar;
    fn sub(self, rhs: &VChar) -> VChar {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl VChar {
    pub fn neg(self) -> VChar {
        VChar {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

/// The lambda operation `Λ_{-x}(E) = ∏_e (1 - e·x)^{n_e}` expanded to order
/// `trunc` in `x`, where `x = u` (direction `U`) or `x = u^{-1}` (direction
/// `Uinv`). Computed through the wedge/Adams relation
/// `Λ_{-x}(E) = exp(-Σ_{m>0} ψ^m(E) x^m / m)`; negative multiplicities give
/// the inverse product.
pub fn lambda_series(e: &VChar, dir: SeriesDir, trunc: i64) -> Result<Series> {
    assert!(trunc >= 0);
    if trunc == 0 {
        return Series::constant(dir, RatFunc::one(), 0);
    }
    let (lo, hi, step) = match dir {
        SeriesDir::U => (1, trunc, 1i64),
        SeriesDir::Uinv => (-trunc, -1, -1i64),
        SeriesDir::TwoSided => panic!("lambda_series needs a one-sided direction"),
    };
    let mut s = Series::new(dir, lo, hi)?;
    for m in 1..=trunc {
        let coeff = e.adams(m).as_rat().div_int(m).neg();
        s.set(step * m, coeff);
    }
    exp_series(&s)
}
