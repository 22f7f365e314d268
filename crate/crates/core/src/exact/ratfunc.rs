use super::laurent::LaurentPoly;
use super::mono::{Mono, Var};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

/// A rational function `num/den` over [`LaurentPoly`].
///
/// No multivariate gcd is computed: equality is decided by cross
/// multiplication. Normalization is cheap and canonical enough for
/// deterministic display: monomial denominators are folded into the numerator
/// (always possible in the Laurent setting), common integer content is
/// stripped, and the leading denominator coefficient is made positive.
#[derive(Clone, Debug)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RatFunc {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut r = RatFunc { num, den };
        r.normalize();
        Ok(r)
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RatFunc {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    pub fn zero() -> Self {
        RatFunc::from_poly(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        RatFunc::from_poly(LaurentPoly::one())
    }

    pub fn int(c: i64) -> Self {
        RatFunc::from_poly(LaurentPoly::int(c))
    }

    pub fn var(v: Var) -> Self {
        RatFunc::from_poly(LaurentPoly::var(v))
    }

    pub fn var_pow(v: Var, e: i64) -> Self {
        RatFunc::from_poly(LaurentPoly::var_pow(v, e))
    }

    pub fn mono(m: Mono) -> Self {
        RatFunc::from_poly(LaurentPoly::term(m, BigInt::one()))
    }

    /// `q^k`.
    pub fn q_pow(k: i64) -> Self {
        RatFunc::var_pow(Var::Q, k)
    }

    /// `q - q^{-1}`.
    pub fn q_minus_qinv() -> Self {
        RatFunc::from_poly(&LaurentPoly::var(Var::Q) - &LaurentPoly::var_pow(Var::Q, -1))
    }

    /// `[m]_q` as a rational function.
    pub fn q_int(m: i64) -> Self {
        RatFunc::from_poly(LaurentPoly::q_int(m))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = LaurentPoly::one();
            return;
        }
        // Fold a monomial denominator into the numerator.
        if self.den.num_terms() == 1 {
            let (m, c) = self.den.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
            self.num = self.num.mul_mono(&m.inv());
            self.den = LaurentPoly::constant(c);
        } else {
            // Strip the denominator's monomial content.
            let mc = self.den.monomial_content();
            if !mc.is_one() {
                let inv = mc.inv();
                self.den = self.den.mul_mono(&inv);
                self.num = self.num.mul_mono(&inv);
            }
        }
        // Strip common integer content.
        let g = self.num.int_content().gcd(&self.den.int_content());
        if !g.is_one() && !g.is_zero() {
            self.num = self.num.div_exact_int(&g);
            self.den = self.den.div_exact_int(&g);
        }
        // Positive leading denominator coefficient.
        if let Some((_, c)) = self.den.leading() {
            if c.is_negative() {
                self.num = -std::mem::take(&mut self.num);
                self.den = -std::mem::take(&mut self.den);
            }
        }
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    /// Integer power; negative exponents invert (error on zero).
    pub fn pow(&self, k: i64) -> Result<RatFunc> {
        if k == 0 {
            return Ok(RatFunc::one());
        }
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = RatFunc::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    pub fn mul_int(&self, c: i64) -> RatFunc {
        RatFunc {
            num: self.num.mul_int(c),
            den: self.den.clone(),
        }
    }

    pub fn div_int(&self, c: i64) -> RatFunc {
        assert!(c != 0);
        let mut r = RatFunc {
            num: self.num.clone(),
            den: self.den.mul_int(c),
        };
        r.normalize();
        r
    }

    /// Substitutes `v := value` (a rational function free of `v`).
    pub fn subst(&self, v: Var, value: &RatFunc) -> Result<RatFunc> {
        let subst_poly = |p: &LaurentPoly| -> Result<RatFunc> {
            let uni = p.as_univariate(v);
            let mut acc = RatFunc::zero();
            for (e, coeff) in uni {
                let pw = value.pow(e)?;
                acc = &acc + &(&RatFunc::from_poly(coeff) * &pw);
            }
            Ok(acc)
        };
        let n = subst_poly(&self.num)?;
        let d = subst_poly(&self.den)?;
        &n / &d
    }

    pub fn eval(&self, point: &BTreeMap<Var, BigRational>) -> Result<BigRational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(point) / d)
    }

    /// Views `self` as a Laurent polynomial in `v` with coefficients free of
    /// `v`. The denominator must not involve `v`.
    pub fn as_uni_in(&self, v: Var) -> Result<BTreeMap<i64, RatFunc>> {
        if self.den.as_univariate(v).keys().any(|&e| e != 0) {
            return Err(Error::InvalidParameter(format!(
                "denominator involves {v}"
            )));
        }
        let den = RatFunc::from_poly(self.den.clone());
        let mut out = BTreeMap::new();
        for (e, c) in self.num.as_univariate(v) {
            let q = (&RatFunc::from_poly(c) / &den)?;
            if !q.is_zero() {
                out.insert(e, q);
            }
        }
        Ok(out)
    }
}

impl PartialEq for RatFunc {
    /// Cross-multiplication equality: `a/b = c/d  iff  a·d = c·b`.
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RatFunc {}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let mut r = RatFunc {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            };
            r.normalize();
            return r;
        }
        let mut r = RatFunc {
            num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        };
        r.normalize();
        r
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &rhs.clone().neg()
    }
}

impl RatFunc {
    pub fn neg(self) -> RatFunc {
        RatFunc {
            num: std::ops::Neg::neg(self.num),
            den: self.den,
        }
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        let mut r = RatFunc {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        };
        r.normalize();
        r
    }
}

impl Div for &RatFunc {
    type Output = Result<RatFunc>;
    fn div(self, rhs: &RatFunc) -> Result<RatFunc> {
        Ok(self * &rhs.inv()?)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else if self.num.num_terms() <= 1 {
            write!(f, "{} / ({})", self.num, self.den)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
