use super::mono::Var;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// Expansion direction of a truncated series in `u`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SeriesDir {
    /// Non-negative (or bounded-below) powers of `u`: the expansion at `u = 0`.
    U,
    /// Bounded-above powers of `u`: the expansion at `u = ∞` in powers of `u^{-1}`.
    Uinv,
    /// A two-sided window, e.g. the difference of the two one-sided
    /// expansions of the same rational function. Supports only linear
    /// operations.
    TwoSided,
}

/// A truncated series in `u` with [`RatFunc`] coefficients.
///
/// For `SeriesDir::U` the series has no terms below `lo` (a hard support
/// bound) and its coefficients are exact on `[lo, hi]`; exponents above `hi`
/// are unknown. `SeriesDir::Uinv` is the mirror image. `TwoSided` knows its
/// window exactly and nothing outside it.
#[derive(Clone, Debug)]
pub struct Series {
    dir: SeriesDir,
    lo: i64,
    hi: i64,
    coeffs: BTreeMap<i64, RatFunc>,
}

impl Series {
    pub fn new(dir: SeriesDir, lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::BadWindow { lo, hi });
        }
        Ok(Series {
            dir,
            lo,
            hi,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn constant(dir: SeriesDir, value: RatFunc, trunc: i64) -> Result<Self> {
        let (lo, hi) = match dir {
            SeriesDir::U => (0, trunc),
            SeriesDir::Uinv => (-trunc, 0),
            SeriesDir::TwoSided => (-trunc, trunc),
        };
        let mut s = Series::new(dir, lo, hi)?;
        s.set(0, value);
        Ok(s)
    }

    pub fn dir(&self) -> SeriesDir {
        self.dir
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn set(&mut self, exp: i64, value: RatFunc) {
        debug_assert!(exp >= self.lo && exp <= self.hi);
        if value.is_zero() {
            self.coeffs.remove(&exp);
        } else {
            self.coeffs.insert(exp, value);
        }
    }

    /// The coefficient of `u^exp`. Exponents beyond the hard support bound
    /// are exactly zero; exponents in the truncated region are an error.
    pub fn coeff(&self, exp: i64) -> Result<RatFunc> {
        let known = match self.dir {
            SeriesDir::U => exp <= self.hi,
            SeriesDir::Uinv => exp >= self.lo,
            SeriesDir::TwoSided => exp >= self.lo && exp <= self.hi,
        };
        if !known {
            return Err(Error::OutsideWindow(exp, self.lo, self.hi));
        }
        Ok(self.coeffs.get(&exp).cloned().unwrap_or_else(RatFunc::zero))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &RatFunc)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    pub fn is_zero_on_window(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn same_dir(&self, other: &Series) -> Result<()> {
        if self.dir != other.dir {
            return Err(Error::DirectionMismatch(format!(
                "{:?} vs {:?}",
                self.dir, other.dir
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.same_dir(other)?;
        let (lo, hi) = match self.dir {
            SeriesDir::U => (self.lo.min(other.lo), self.hi.min(other.hi)),
            SeriesDir::Uinv => (self.lo.max(other.lo), self.hi.max(other.hi)),
            SeriesDir::TwoSided => (self.lo.max(other.lo), self.hi.min(other.hi)),
        };
        let mut out = Series::new(self.dir, lo, hi)?;
        for e in lo..=hi {
            let c = &self.coeff(e)? + &other.coeff(e)?;
            out.set(e, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.add(&other.clone().negate())
    }

    pub fn negate(mut self) -> Series {
        for c in self.coeffs.values_mut() {
            *c = std::mem::replace(c, RatFunc::zero()).neg();
        }
        self
    }

    pub fn scale(&self, factor: &RatFunc) -> Series {
        let mut out = self.clone();
        if factor.is_zero() {
            out.coeffs.clear();
            return out;
        }
        for c in out.coeffs.values_mut() {
            *c = &*c * factor;
        }
        out
    }

    /// Multiplies by `u^k`.
    pub fn shift(&self, k: i64) -> Series {
        Series {
            dir: self.dir,
            lo: self.lo + k,
            hi: self.hi + k,
            coeffs: self.coeffs.iter().map(|(&e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Exact product. The result window is the largest on which the product
    /// is determined by the two factors.
    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.same_dir(other)?;
        match self.dir {
            SeriesDir::U => {
                let lo = self.lo + other.lo;
                let hi = (self.lo + other.hi).min(other.lo + self.hi);
                let mut out = Series::new(SeriesDir::U, lo, hi.max(lo))?;
                if hi < lo {
                    return Err(Error::BadWindow { lo, hi });
                }
                for (e1, c1) in &self.coeffs {
                    for (e2, c2) in &other.coeffs {
                        let e = e1 + e2;
                        if e <= hi {
                            let cur = out.coeff(e)?;
                            out.set(e, &cur + &(c1 * c2));
                        }
                    }
                }
                Ok(out)
            }
            SeriesDir::Uinv => {
                let hi = self.hi + other.hi;
                let lo = (self.hi + other.lo).max(other.hi + self.lo);
                if hi < lo {
                    return Err(Error::BadWindow { lo, hi });
                }
                let mut out = Series::new(SeriesDir::Uinv, lo, hi)?;
                for (e1, c1) in &self.coeffs {
                    for (e2, c2) in &other.coeffs {
                        let e = e1 + e2;
                        if e >= lo {
                            let cur = out.coeff(e)?;
                            out.set(e, &cur + &(c1 * c2));
                        }
                    }
                }
                Ok(out)
            }
            SeriesDir::TwoSided => Err(Error::DirectionMismatch(
                "two-sided series do not multiply".into(),
            )),
        }
    }

    /// Multiplicative inverse, inverting the leading coefficient.
    pub fn invert(&self) -> Result<Series> {
        let ord = match self.dir {
            SeriesDir::U => (self.lo..=self.hi).find(|&e| {
                self.coeffs.get(&e).map(|c| !c.is_zero()).unwrap_or(false)
            }),
            SeriesDir::Uinv => (self.lo..=self.hi).rev().find(|&e| {
                self.coeffs.get(&e).map(|c| !c.is_zero()).unwrap_or(false)
            }),
            SeriesDir::TwoSided => {
                return Err(Error::DirectionMismatch(
                    "two-sided series do not invert".into(),
                ))
            }
        };
        let ord = ord.ok_or(Error::NonInvertibleLeading)?;
        let lead = self.coeff(ord)?;
        let lead_inv = lead.inv()?;
        let n = match self.dir {
            SeriesDir::U => (self.hi - ord) as usize,
            SeriesDir::Uinv => (ord - self.lo) as usize,
            SeriesDir::TwoSided => unreachable!(),
        };
        // Tail coefficients t_k of self/(lead * u^ord), k = 1..n, in the
        // direction of the expansion.
        let step: i64 = match self.dir {
            SeriesDir::U => 1,
            SeriesDir::Uinv => -1,
            SeriesDir::TwoSided => unreachable!(),
        };
        let mut t = Vec::with_capacity(n + 1);
        t.push(RatFunc::one());
        for k in 1..=n as i64 {
            t.push(&self.coeff(ord + step * k)? * &lead_inv);
        }
        // b_0 = 1, b_k = -sum_{j=1}^{k} t_j b_{k-j}
        let mut b = vec![RatFunc::one()];
        for k in 1..=n {
            let mut acc = RatFunc::zero();
            for j in 1..=k {
                acc = &acc + &(&t[j] * &b[k - j]);
            }
            b.push(acc.neg());
        }
        let (lo, hi) = match self.dir {
            SeriesDir::U => (-ord, -ord + n as i64),
            SeriesDir::Uinv => (-ord - n as i64, -ord),
            SeriesDir::TwoSided => unreachable!(),
        };
        let mut out = Series::new(self.dir, lo, hi)?;
        for (k, bk) in b.into_iter().enumerate() {
            out.set(-ord + step * k as i64, &bk * &lead_inv);
        }
        Ok(out)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*u^{e}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(window [{},{}])", self.lo, self.hi)
    }
}

/// Expands a rational function as a series in `u` (direction `U`: Laurent
/// expansion at `u = 0`; direction `Uinv`: at `u = ∞`), exact on the
/// requested window. The expansion is computed by exact power-series
/// inversion of the denominator; no factorization is required.
pub fn expand(f: &RatFunc, dir: SeriesDir, lo: i64, hi: i64) -> Result<Series> {
    if lo > hi {
        return Err(Error::BadWindow { lo, hi });
    }
    if matches!(dir, SeriesDir::TwoSided) {
        return Err(Error::DirectionMismatch(
            "expand needs a one-sided direction".into(),
        ));
    }
    let num_uni = f.num().as_univariate(Var::U);
    let den_uni = f.den().as_univariate(Var::U);
    if f.is_zero() {
        return Series::new(dir, lo, hi);
    }
    let to_rat = |p: &super::laurent::LaurentPoly| RatFunc::from_poly(p.clone());
    match dir {
        SeriesDir::U => {
            let num_lo = *num_uni.keys().next().unwrap();
            let den_lo = *den_uni.keys().next().unwrap();
            // Numerator as an exact series, known up to whatever we need.
            let need_hi = hi + den_lo - num_lo + 1;
            let num_hi_nat = *num_uni.keys().next_back().unwrap();
            let mut nser = Series::new(SeriesDir::U, num_lo, num_hi_nat.max(need_hi + num_lo))?;
            for (&e, c) in &num_uni {
                nser.set(e, to_rat(c));
            }
            let den_depth = (hi - num_lo + den_lo).max(0) + 1;
            let mut dser = Series::new(SeriesDir::U, den_lo, den_lo + den_depth)?;
            for (&e, c) in &den_uni {
                if e <= den_lo + den_depth {
                    dser.set(e, to_rat(c));
                }
            }
            let inv = dser.invert()?;
            let prod = nser.mul(&inv)?;
            let out_lo = lo.min(prod.lo);
            let mut out = Series::new(SeriesDir::U, out_lo, hi)?;
            for e in out_lo..=hi {
                out.set(e, prod.coeff(e)?);
            }
            Ok(out)
        }
        SeriesDir::Uinv => {
            let num_hi = *num_uni.keys().next_back().unwrap();
            let den_hi = *den_uni.keys().next_back().unwrap();
            let num_lo_nat = *num_uni.keys().next().unwrap();
            let need_lo = lo + den_hi - num_hi - 1;
            let mut nser = Series::new(
                SeriesDir::Uinv,
                num_lo_nat.min(need_lo + num_hi),
                num_hi,
            )?;
            for (&e, c) in &num_uni {
                nser.set(e, to_rat(c));
            }
            let den_depth = (num_hi - lo - den_hi).max(0) + 1;
            let mut dser = Series::new(SeriesDir::Uinv, den_hi - den_depth, den_hi)?;
            for (&e, c) in &den_uni {
                if e >= den_hi - den_depth {
                    dser.set(e, to_rat(c));
                }
            }
            let inv = dser.invert()?;
            let prod = nser.mul(&inv)?;
            let out_hi = hi.max(prod.hi);
            let mut out = Series::new(SeriesDir::Uinv, lo, out_hi)?;
            for e in lo..=out_hi {
                out.set(e, prod.coeff(e)?);
            }
            Ok(out)
        }
        SeriesDir::TwoSided => unreachable!(),
    }
}

/// `exp` of a series with support strictly inside the expansion direction
/// (no constant term). Exact to the input's window.
pub fn exp_series(s: &Series) -> Result<Series> {
    let ok = match s.dir {
        SeriesDir::U => s.lo >= 1,
        SeriesDir::Uinv => s.hi <= -1,
        SeriesDir::TwoSided => false,
    };
    if !ok {
        return Err(Error::DirectionMismatch(
            "exp needs a series without constant term".into(),
        ));
    }
    let order = match s.dir {
        SeriesDir::U => s.hi,
        SeriesDir::Uinv => -s.lo,
        SeriesDir::TwoSided => unreachable!(),
    };
    let mut acc = Series::constant(s.dir, RatFunc::one(), order)?;
    let mut power = Series::constant(s.dir, RatFunc::one(), order)?;
    let mut kfact: i64 = 1;
    for k in 1..=order {
        power = power.mul(s)?;
        // Clamp the window back to [0, order] so repeated products keep
        // their full knowledge (support moves inward each time).
        power = clamp_window(&power, order)?;
        kfact = kfact.saturating_mul(k);
        acc = acc.add(&power.scale(&RatFunc::one().div_int(kfact)))?;
        if power.is_zero_on_window() {
            break;
        }
    }
    Ok(acc)
}

/// `log` of a series with leading exponent 0 and leading coefficient 1.
pub fn log_series(s: &Series) -> Result<Series> {
    let lead_ok = match s.dir {
        SeriesDir::U => s.lo == 0,
        SeriesDir::Uinv => s.hi == 0,
        SeriesDir::TwoSided => false,
    };
    if !lead_ok || s.coeff(0)? != RatFunc::one() {
        return Err(Error::NonInvertibleLeading);
    }
    let order = match s.dir {
        SeriesDir::U => s.hi,
        SeriesDir::Uinv => -s.lo,
        SeriesDir::TwoSided => unreachable!(),
    };
    // t = s - 1 has support strictly inside the direction.
    let mut t = s.clone();
    let c0 = &t.coeff(0)? - &RatFunc::one();
    t.set(0, c0);
    let t = tighten_support(t);
    let mut acc = Series::new(
        s.dir,
        if s.dir == SeriesDir::U { 0 } else { -order },
        if s.dir == SeriesDir::U { order } else { 0 },
    )?;
    let mut power = Series::constant(s.dir, RatFunc::one(), order)?;
    for k in 1..=order {
        power = clamp_window(&power.mul(&t)?, order)?;
        let sign = if k % 2 == 1 { 1 } else { -1 };
        acc = acc.add(&power.scale(&RatFunc::int(sign).div_int(k)))?;
        if power.is_zero_on_window() {
            break;
        }
    }
    Ok(acc)
}

fn clamp_window(s: &Series, order: i64) -> Result<Series> {
    let (lo, hi) = match s.dir {
        SeriesDir::U => (s.lo.max(0).min(order), order),
        SeriesDir::Uinv => (-order, s.hi.min(0).max(-order)),
        SeriesDir::TwoSided => (s.lo, s.hi),
    };
    let mut out = Series::new(s.dir, lo.min(hi), hi.max(lo))?;
    for e in lo..=hi {
        out.set(e, s.coeff(e)?);
    }
    Ok(out)
}

fn tighten_support(s: Series) -> Series {
    // Raises the hard bound to the first nonzero coefficient.
    let mut s = s;
    match s.dir {
        SeriesDir::U => {
            while s.lo < s.hi && !s.coeffs.contains_key(&s.lo) {
                s.lo += 1;
            }
        }
        SeriesDir::Uinv => {
            while s.hi > s.lo && !s.coeffs.contains_key(&s.hi) {
                s.hi -= 1;
            }
        }
        SeriesDir::TwoSided => {}
    }
    s
}

/// The difference `a - b` of a `U`- and a `Uinv`-expansion of the same
/// function, as a two-sided window. Away from poles this is zero; the
/// nonzero coefficients are exactly the delta-function contributions.
pub fn cross_difference(a: &Series, b: &Series, lo: i64, hi: i64) -> Result<Series> {
    if a.dir != SeriesDir::U || b.dir != SeriesDir::Uinv {
        return Err(Error::DirectionMismatch(
            "cross_difference takes (U, Uinv)".into(),
        ));
    }
    let mut out = Series::new(SeriesDir::TwoSided, lo, hi)?;
    for e in lo..=hi {
        out.set(e, &a.coeff(e)? - &b.coeff(e)?);
    }
    Ok(out)
}

// --- residues -------------------------------------------------------------

type UPoly = BTreeMap<i64, RatFunc>;

fn upoly_eval(p: &UPoly, c: &RatFunc) -> Result<RatFunc> {
    let mut acc = RatFunc::zero();
    for (&e, coeff) in p {
        acc = &acc + &(coeff * &c.pow(e)?);
    }
    Ok(acc)
}

fn upoly_derivative(p: &UPoly) -> UPoly {
    let mut out = UPoly::new();
    for (&e, coeff) in p {
        if e != 0 {
            let c = coeff.mul_int(e);
            if !c.is_zero() {
                out.insert(e - 1, c);
            }
        }
    }
    out
}

/// Divides an ordinary polynomial (keys >= 0) by `(u - c)`; returns
/// `(quotient, remainder)`.
fn upoly_div_linear(p: &UPoly, c: &RatFunc) -> (UPoly, RatFunc) {
    let deg = p.keys().next_back().copied().unwrap_or(0);
    let mut q = UPoly::new();
    let mut carry = RatFunc::zero();
    for e in (0..=deg).rev() {
        let coeff = p.get(&e).cloned().unwrap_or_else(RatFunc::zero);
        let cur = &coeff + &(&carry * c);
        if e > 0 {
            if !cur.is_zero() {
                q.insert(e - 1, cur.clone());
            }
            carry = cur;
        } else {
            return (q, cur);
        }
    }
    (q, RatFunc::zero())
}

/// Precomputed residue data of `f` at a finite nonzero point: enough to
/// evaluate `Res_{u=c}(u^j · f)` for any `j` in constant time. Writing
/// `f = H/((u-c)^k · Q)` with `Q(c) != 0` and `k <= 2`:
/// for `k = 1` the residue of `u^j f` is `c^j · H(c)/Q(c)`; for `k = 2` it is
/// `j·c^{j-1}·H(c)/Q(c) + c^j · (H'Q - HQ')/Q^2 |_{u=c}`.
#[derive(Clone, Debug)]
pub struct PoleAnalysis {
    pole: RatFunc,
    order: usize,
    value: RatFunc,
    derivative: RatFunc,
}

impl PoleAnalysis {
    pub fn order(&self) -> usize {
        self.order
    }

    /// `Res_{u=pole}(u^j · f)`.
    pub fn residue_times_upow(&self, j: i64) -> Result<RatFunc> {
        match self.order {
            0 => Ok(RatFunc::zero()),
            1 => Ok(&self.pole.pow(j)? * &self.value),
            2 => {
                let first = &self.pole.pow(j - 1)?.mul_int(j) * &self.value;
                let second = &self.pole.pow(j)? * &self.derivative;
                Ok(&first + &second)
            }
            _ => unreachable!(),
        }
    }
}

/// Analyzes the pole of `f` at the nonzero point `u = pole`; order 0 means
/// no pole (including candidates cancelled by the numerator). Orders above 2
/// are rejected.
pub fn analyze_pole(f: &RatFunc, pole: &RatFunc) -> Result<PoleAnalysis> {
    if pole.is_zero() {
        return Err(Error::PoleAtZero);
    }
    let den_uni: UPoly = {
        let uni = f.den().as_univariate(Var::U);
        uni.into_iter()
            .map(|(e, p)| (e, RatFunc::from_poly(p)))
            .collect()
    };
    let num_uni: UPoly = {
        let uni = f.num().as_univariate(Var::U);
        uni.into_iter()
            .map(|(e, p)| (e, RatFunc::from_poly(p)))
            .collect()
    };
    // Shift the denominator to an ordinary polynomial: den = u^m * D.
    let m = den_uni.keys().next().copied().unwrap_or(0);
    let mut d: UPoly = den_uni.into_iter().map(|(e, c)| (e - m, c)).collect();
    let mut order = 0usize;
    loop {
        let (q, r) = upoly_div_linear(&d, pole);
        if r.is_zero() {
            order += 1;
            d = q;
            if order > 2 {
                return Err(Error::PoleOrderTooHigh { order });
            }
        } else {
            break;
        }
    }
    if order == 0 {
        return Ok(PoleAnalysis {
            pole: pole.clone(),
            order,
            value: RatFunc::zero(),
            derivative: RatFunc::zero(),
        });
    }
    // f = H / ((u-c)^order * D) with H = num * u^{-m}.
    let h: UPoly = num_uni.into_iter().map(|(e, c)| (e - m, c)).collect();
    let dc = upoly_eval(&d, pole)?;
    let value = (&upoly_eval(&h, pole)? / &dc)?;
    let derivative = if order == 2 {
        let hp = upoly_derivative(&h);
        let dp = upoly_derivative(&d);
        let numer =
            &(&upoly_eval(&hp, pole)? * &dc) - &(&upoly_eval(&h, pole)? * &upoly_eval(&dp, pole)?);
        (&numer / &(&dc * &dc))?
    } else {
        RatFunc::zero()
    };
    Ok(PoleAnalysis {
        pole: pole.clone(),
        order,
        value,
        derivative,
    })
}

/// The residue of `f` at the finite nonzero point `u = pole`.
///
/// Handles poles of order up to 2 exactly; higher orders are rejected. A
/// point that is not a root of the denominator yields 0, including spurious
/// candidates cancelled by the numerator.
pub fn residue(f: &RatFunc, pole: &RatFunc) -> Result<RatFunc> {
    analyze_pole(f, pole)?.residue_times_upow(0)
}

/// Residue at `u = 0`: the `u^{-1}` coefficient of the expansion at 0.
pub fn residue_at_zero(f: &RatFunc) -> Result<RatFunc> {
    expand(f, SeriesDir::U, -1, -1)?.coeff(-1)
}

/// Residue at `u = ∞`: minus the `u^{-1}` coefficient of the expansion at ∞.
pub fn residue_at_infinity(f: &RatFunc) -> Result<RatFunc> {
    Ok(expand(f, SeriesDir::Uinv, -1, -1)?.coeff(-1)?.neg())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u() -> RatFunc {
        RatFunc::var(Var::U)
    }

    fn chi() -> RatFunc {
        RatFunc::var(Var::Chi(1))
    }

    #[test]
    fn geometric_uinv() {
        // 1/(u-c) at infinity: u^{-1} + c u^{-2} + c^2 u^{-3} + ...
        let f = (&RatFunc::one() / &(&u() - &chi())).unwrap();
        let s = expand(&f, SeriesDir::Uinv, -3, 0).unwrap();
        assert_eq!(s.coeff(0).unwrap(), RatFunc::zero());
        assert_eq!(s.coeff(-1).unwrap(), RatFunc::one());
        assert_eq!(s.coeff(-2).unwrap(), chi());
        assert_eq!(s.coeff(-3).unwrap(), (&chi() * &chi()));
    }

    #[test]
    fn geometric_u() {
        // 1/(u-c) at zero: -c^-1 - c^-2 u - c^-3 u^2 - ...
        let f = (&RatFunc::one() / &(&u() - &chi())).unwrap();
        let s = expand(&f, SeriesDir::U, 0, 2).unwrap();
        assert_eq!(s.coeff(0).unwrap(), chi().inv().unwrap().neg());
        assert_eq!(s.coeff(1).unwrap(), chi().pow(-2).unwrap().neg());
        assert_eq!(s.coeff(2).unwrap(), chi().pow(-3).unwrap().neg());
    }

    #[test]
    fn gii_constant_term() {
        // (u - q^2)/(q^2 u - 1) at infinity has u^0 coefficient q^{-2}.
        let q2 = RatFunc::q_pow(2);
        let f = (&(&u() - &q2) / &(&(&q2 * &u()) - &RatFunc::one())).unwrap();
        let s = expand(&f, SeriesDir::Uinv, -2, 0).unwrap();
        assert_eq!(s.coeff(0).unwrap(), RatFunc::q_pow(-2));
    }

    #[test]
    fn invert_roundtrip() {
        let f = (&u() / &(&u() - &chi())).unwrap();
        let s = expand(&f, SeriesDir::Uinv, -5, 0).unwrap();
        let inv = s.invert().unwrap();
        let prod = s.mul(&inv).unwrap();
        assert_eq!(prod.coeff(0).unwrap(), RatFunc::one());
        for e in prod.window().0..0 {
            assert!(prod.coeff(e).unwrap().is_zero());
        }
    }

    #[test]
    fn exp_log_roundtrip() {
        // s = c*u^-1 + q*u^-2
        let mut s = Series::new(SeriesDir::Uinv, -4, -1).unwrap();
        s.set(-1, chi());
        s.set(-2, RatFunc::q_pow(1));
        let e = exp_series(&s).unwrap();
        assert_eq!(e.coeff(0).unwrap(), RatFunc::one());
        let l = log_series(&e).unwrap();
        for k in 1..=4 {
            assert_eq!(l.coeff(-k).unwrap(), s.coeff(-k).unwrap(), "exp/log at -{k}");
        }
    }

    #[test]
    fn cross_difference_is_delta_supported() {
        // The two expansions of g(u) = (u - q^2)/(q^2 u - 1) agree except
        // for the formal delta at the pole u = q^{-2}: the difference
        // coefficients form the geometric progression of delta(u/a),
        // i.e. diff_n * a^n is constant.
        let q2 = RatFunc::q_pow(2);
        let g = (&(&u() - &q2) / &(&(&q2 * &u()) - &RatFunc::one())).unwrap();
        let at_zero = expand(&g, SeriesDir::U, -3, 3).unwrap();
        let at_inf = expand(&g, SeriesDir::Uinv, -3, 3).unwrap();
        let diff = cross_difference(&at_zero, &at_inf, -3, 3).unwrap();
        let a = RatFunc::q_pow(-2);
        let c0 = diff.coeff(0).unwrap();
        assert!(!c0.is_zero());
        for n in -3..=3i64 {
            let scaled = &diff.coeff(n).unwrap() * &a.pow(n).unwrap();
            assert_eq!(scaled, c0, "coefficient {n}");
        }
    }

    #[test]
    fn simple_residue() {
        // 1/(u-c) at c: 1.
        let f = (&RatFunc::one() / &(&u() - &chi())).unwrap();
        assert_eq!(residue(&f, &chi()).unwrap(), RatFunc::one());
        // u/(u-c) at infinity: -c.
        let g = (&u() / &(&u() - &chi())).unwrap();
        assert_eq!(residue_at_infinity(&g).unwrap(), chi().neg());
        // Non-pole: residue 0.
        assert!(residue(&f, &RatFunc::q_pow(1)).unwrap().is_zero());
    }

    #[test]
    fn double_pole_residue() {
        // c/(u-c)^2 has residue 0 at c; (2u-c)/(u-c)^2 has residue 2.
        let d = &u() - &chi();
        let d2 = &d * &d;
        let f = (&chi() / &d2).unwrap();
        assert!(residue(&f, &chi()).unwrap().is_zero());
        let g = (&(&u().mul_int(2) - &chi()) / &d2).unwrap();
        assert_eq!(residue(&g, &chi()).unwrap(), RatFunc::int(2));
    }

    #[test]
    fn residue_sum_vanishes() {
        // f = 1/((u-a)(u-qa)) vanishes at infinity to order 2: residues sum to 0.
        let a = chi();
        let qa = &RatFunc::q_pow(1) * &chi();
        let f = (&RatFunc::one() / &(&(&u() - &a) * &(&u() - &qa))).unwrap();
        let s = &(&residue(&f, &a).unwrap() + &residue(&f, &qa).unwrap())
            + &(&residue_at_zero(&f).unwrap() + &residue_at_infinity(&f).unwrap());
        assert!(s.is_zero());
    }

    #[test]
    fn cancelled_pole_gives_zero() {
        // (u - c)/((u - c)(u - q)) has no actual pole at c.
        let f = (&(&u() - &chi()) / &(&(&u() - &chi()) * &(&u() - &RatFunc::q_pow(1)))).unwrap();
        assert!(residue(&f, &chi()).unwrap().is_zero());
    }
}
