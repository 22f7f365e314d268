use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// A variable of the fixed universe. The derived `Ord` gives the canonical
/// variable order `q < t < z < x1 < x2 < ... < u` used everywhere for
/// deterministic output.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Var {
    /// Quantum parameter `q`.
    Q,
    /// Second torus parameter `t` (toroidal computations).
    T,
    /// Symbolic specialization parameter `z`; carries no relations.
    Zeta,
    /// Framing character `x_s`, 1-based.
    Chi(u32),
    /// Loop/series variable `u`.
    U,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Q => write!(f, "q"),
            Var::T => write!(f, "t"),
            Var::Zeta => write!(f, "z"),
            Var::Chi(s) => write!(f, "x{s}"),
            Var::U => write!(f, "u"),
        }
    }
}

/// An exponent vector: a finitely supported map `Var -> ℤ` with no stored
/// zeros, kept sorted by variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Mono {
    exps: Vec<(Var, i64)>,
}

impl Mono {
    pub fn one() -> Self {
        Mono { exps: Vec::new() }
    }

    pub fn var(v: Var) -> Self {
        Mono { exps: vec![(v, 1)] }
    }

    pub fn var_pow(v: Var, e: i64) -> Self {
        if e == 0 {
            Mono::one()
        } else {
            Mono { exps: vec![(v, e)] }
        }
    }

    /// Builds from arbitrary (possibly unsorted, repeated) pairs.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, i64)>) -> Self {
        let mut m = Mono::one();
        for (v, e) in pairs {
            m = m.mul(&Mono::var_pow(v, e));
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponent(&self, v: Var) -> i64 {
        self.exps
            .iter()
            .find(|(w, _)| *w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, i64)> + '_ {
        self.exps.iter().copied()
    }

    pub fn total_degree(&self) -> i64 {
        self.exps.iter().map(|(_, e)| *e).sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut out = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() || j < other.exps.len() {
            let take = if i == self.exps.len() {
                Ordering::Greater
            } else if j == other.exps.len() {
                Ordering::Less
            } else {
                self.exps[i].0.cmp(&other.exps[j].0)
            };
            match take {
                Ordering::Less => {
                    out.push(self.exps[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.exps[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = self.exps[i].1 + other.exps[j].1;
                    if e != 0 {
                        out.push((self.exps[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Mono { exps: out }
    }

    pub fn inv(&self) -> Mono {
        Mono {
            exps: self.exps.iter().map(|&(v, e)| (v, -e)).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Mono {
        if k == 0 {
            return Mono::one();
        }
        Mono {
            exps: self.exps.iter().map(|&(v, e)| (v, e * k)).collect(),
        }
    }

    pub fn divides_into(&self, other: &Mono) -> Mono {
        // Laurent setting: division is always possible.
        other.mul(&self.inv())
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.exps.iter().any(|(w, _)| *w == v)
    }
}

impl Ord for Mono {
    /// Graded-lex: total degree first, then lexicographic in the canonical
    /// variable order, larger exponent on the earliest differing variable
    /// winning.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.exps.get(i), other.exps.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(&(v, e)), None) => {
                    let _ = v;
                    return e.cmp(&0);
                }
                (None, Some(&(v, e))) => {
                    let _ = v;
                    return 0.cmp(&e);
                }
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => return ea.cmp(&0),
                    Ordering::Greater => return 0.cmp(&eb),
                    Ordering::Equal => {
                        match ea.cmp(&eb) {
                            Ordering::Equal => {}
                            ord => return ord,
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in &self.exps {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn var_order() {
        assert!(Var::Q < Var::T);
        assert!(Var::T < Var::Zeta);
        assert!(Var::Zeta < Var::Chi(1));
        assert!(Var::Chi(1) < Var::Chi(2));
        assert!(Var::Chi(7) < Var::U);
    }

    #[test]
    fn mul_cancels() {
        let m = Mono::var(Var::Q).mul(&Mono::var_pow(Var::Q, -1));
        assert!(m.is_one());
    }

    #[test]
    fn graded_lex() {
        let q2 = Mono::var_pow(Var::Q, 2);
        let qu = Mono::var(Var::Q).mul(&Mono::var(Var::U));
        // Same total degree; q^2 has the larger exponent on the earlier variable.
        assert!(q2 > qu);
        let u = Mono::var(Var::U);
        assert!(q2 > u);
        let qinv = Mono::var_pow(Var::Q, -1);
        assert!(qinv < Mono::one());
    }
}
