use super::mono::{Mono, Var};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A multivariate Laurent polynomial with big-integer coefficients.
///
/// Terms are kept in a `BTreeMap` keyed by the graded-lex monomial order, so
/// iteration, display and serialization are deterministic. No zero
/// coefficients are ever stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Mono, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        LaurentPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono::one(), c);
        }
        LaurentPoly { terms }
    }

    pub fn int(c: i64) -> Self {
        LaurentPoly::constant(BigInt::from(c))
    }

    pub fn var(v: Var) -> Self {
        LaurentPoly::term(Mono::var(v), BigInt::one())
    }

    pub fn var_pow(v: Var, e: i64) -> Self {
        LaurentPoly::term(Mono::var_pow(v, e), BigInt::one())
    }

    pub fn term(m: Mono, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly { terms }
    }

    pub fn from_terms(pairs: impl IntoIterator<Item = (Mono, BigInt)>) -> Self {
        let mut out = LaurentPoly::zero();
        for (m, c) in pairs {
            out.add_term(m, c);
        }
        out
    }

    /// The quantum integer `[m]_q = (q^m - q^{-m})/(q - q^{-1})` as a Laurent
    /// polynomial: `q^{m-1} + q^{m-3} + ... + q^{1-m}` (odd symmetry for
    /// negative `m`).
    pub fn q_int(m: i64) -> Self {
        if m == 0 {
            return LaurentPoly::zero();
        }
        let a = m.abs();
        let mut p = LaurentPoly::zero();
        for r in 0..a {
            p.add_term(Mono::var_pow(Var::Q, a - 1 - 2 * r), BigInt::one());
        }
        if m < 0 {
            p = -p;
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Mono::one())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    fn add_term(&mut self, m: Mono, c: BigInt) {
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

    pub fn mul_term(&self, m: &Mono, c: &BigInt) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(mm, cc)| (mm.mul(m), cc * c))
                .collect(),
        }
    }

    pub fn mul_mono(&self, m: &Mono) -> LaurentPoly {
        self.mul_term(m, &BigInt::one())
    }

    pub fn mul_int(&self, c: i64) -> LaurentPoly {
        self.mul_term(&Mono::one(), &BigInt::from(c))
    }

    pub fn pow(&self, n: u64) -> LaurentPoly {
        let mut acc = LaurentPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(&Mono, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Greatest common monomial factor of all terms (per-variable minimum
    /// exponent). For the zero polynomial returns 1.
    pub fn monomial_content(&self) -> Mono {
        let mut mins: BTreeMap<Var, i64> = BTreeMap::new();
        let mut first = true;
        for m in self.terms.keys() {
            if first {
                for (v, e) in m.iter() {
                    mins.insert(v, e);
                }
                first = false;
            } else {
                // A variable absent from a term has exponent 0 there.
                let vars: Vec<Var> = mins.keys().copied().collect();
                for v in vars {
                    let e = m.exponent(v);
                    let cur = mins[&v];
                    if e < cur {
                        mins.insert(v, e);
                    }
                }
                for (v, e) in m.iter() {
                    mins.entry(v).or_insert_with(|| e.min(0));
                }
            }
        }
        // Variables appearing in some but not all terms must cap at <= 0.
        let mut out = Mono::one();
        for (v, e) in mins {
            let everywhere = self.terms.keys().all(|m| m.contains_var(v));
            let e = if everywhere { e } else { e.min(0) };
            if e != 0 {
                out = out.mul(&Mono::var_pow(v, e));
            }
        }
        out
    }

    /// Gcd of the integer coefficients (positive; 0 for the zero polynomial).
    pub fn int_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn div_exact_int(&self, d: &BigInt) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c / d)).collect(),
        }
    }

    /// Views the polynomial as a univariate Laurent polynomial in `v`,
    /// returning the map `exponent of v -> coefficient` (a polynomial free of
    /// `v`).
    pub fn as_univariate(&self, v: Var) -> BTreeMap<i64, LaurentPoly> {
        let mut out: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            let rest = m.mul(&Mono::var_pow(v, -e));
            out.entry(e)
                .or_insert_with(LaurentPoly::zero)
                .add_term(rest, c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Formal derivative with respect to `v`.
    pub fn derivative(&self, v: Var) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e != 0 {
                out.add_term(m.mul(&Mono::var_pow(v, -1)), c * BigInt::from(e));
            }
        }
        out
    }

    /// Evaluates at a rational point. Every variable present must be assigned
    /// a nonzero value when it occurs with a negative exponent.
    pub fn eval(&self, point: &BTreeMap<Var, BigRational>) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = BigRational::from(c.clone());
            for (v, e) in m.iter() {
                let x = point
                    .get(&v)
                    .unwrap_or_else(|| panic!("eval: unassigned variable {v}"));
                term *= rational_pow(x, e);
            }
            acc += term;
        }
        acc
    }

    pub fn max_exp(&self, v: Var) -> Option<i64> {
        self.terms.keys().map(|m| m.exponent(v)).max()
    }

    pub fn min_exp(&self, v: Var) -> Option<i64> {
        self.terms.keys().map(|m| m.exponent(v)).min()
    }
}

pub(crate) fn rational_pow(x: &BigRational, e: i64) -> BigRational {
    if e == 0 {
        return BigRational::one();
    }
    if x.is_zero() {
        assert!(e > 0, "zero raised to a negative power");
        return BigRational::zero();
    }
    let p = x.pow(e.unsigned_abs() as u32 as i32);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut out = LaurentPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Descending graded-lex, leading term first.
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> LaurentPoly {
        LaurentPoly::var(Var::Q)
    }

    #[test]
    fn q_int_values() {
        // [2]_q = q + q^-1
        let p = LaurentPoly::q_int(2);
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coeff(&Mono::var_pow(Var::Q, 1)), BigInt::one());
        assert_eq!(p.coeff(&Mono::var_pow(Var::Q, -1)), BigInt::one());
        assert_eq!(LaurentPoly::q_int(1), LaurentPoly::one());
        assert_eq!(LaurentPoly::q_int(-2), -LaurentPoly::q_int(2));
        assert!(LaurentPoly::q_int(0).is_zero());
    }

    #[test]
    fn mul_and_cancel() {
        // (q - q^-1)(q + q^-1) = q^2 - q^-2
        let a = &q() - &LaurentPoly::var_pow(Var::Q, -1);
        let b = &q() + &LaurentPoly::var_pow(Var::Q, -1);
        let p = &a * &b;
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coeff(&Mono::var_pow(Var::Q, 2)), BigInt::one());
        assert_eq!(p.coeff(&Mono::var_pow(Var::Q, -2)), -BigInt::one());
    }

    #[test]
    fn univariate_view() {
        // u^2*q + u^2 + q^-1
        let p = LaurentPoly::from_terms([
            (
                Mono::from_pairs([(Var::U, 2), (Var::Q, 1)]),
                BigInt::one(),
            ),
            (Mono::var_pow(Var::U, 2), BigInt::one()),
            (Mono::var_pow(Var::Q, -1), BigInt::one()),
        ]);
        let uni = p.as_univariate(Var::U);
        assert_eq!(uni.len(), 2);
        assert_eq!(uni[&2].num_terms(), 2);
        assert_eq!(uni[&0], LaurentPoly::var_pow(Var::Q, -1));
    }

    #[test]
    fn monomial_content_with_partial_vars() {
        // q*u + q^2 : content q (u appears in only one term, capped at 0)
        let p = LaurentPoly::from_terms([
            (Mono::from_pairs([(Var::Q, 1), (Var::U, 1)]), BigInt::one()),
            (Mono::var_pow(Var::Q, 2), BigInt::one()),
        ]);
        assert_eq!(p.monomial_content(), Mono::var(Var::Q));
        // q^-2*u^-1 + q^-1: content q^-2 * u^-1
        let p = LaurentPoly::from_terms([
            (
                Mono::from_pairs([(Var::Q, -2), (Var::U, -1)]),
                BigInt::one(),
            ),
            (Mono::var_pow(Var::Q, -1), BigInt::one()),
        ]);
        assert_eq!(
            p.monomial_content(),
            Mono::from_pairs([(Var::Q, -2), (Var::U, -1)])
        );
    }

    #[test]
    fn eval_commutes_with_ops() {
        let mut pt = BTreeMap::new();
        pt.insert(Var::Q, BigRational::new(BigInt::from(3), BigInt::from(2)));
        pt.insert(Var::U, BigRational::new(BigInt::from(-5), BigInt::from(7)));
        let a = &q() + &LaurentPoly::var_pow(Var::U, -1);
        let b = &LaurentPoly::var(Var::U) - &LaurentPoly::int(4);
        assert_eq!((&a * &b).eval(&pt), a.eval(&pt) * b.eval(&pt));
        assert_eq!((&a + &b).eval(&pt), a.eval(&pt) + b.eval(&pt));
    }
}
