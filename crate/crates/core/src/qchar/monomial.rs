use crate::quiver::QuiverData;
use std::collections::BTreeMap;
use std::fmt;

/// A Laurent monomial in the variables `Y_{i,k}`, `(i,k) ∈ I×ℤ`: a finitely
/// supported exponent map.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default, Hash)]
pub struct IMonomial {
    exps: BTreeMap<(u32, i64), i64>,
}

impl IMonomial {
    pub fn one() -> Self {
        IMonomial::default()
    }

    pub fn y(i: u32, k: i64) -> Self {
        let mut m = IMonomial::one();
        m.mul_y_assign(i, k, 1);
        m
    }

    pub fn mul_y_assign(&mut self, i: u32, k: i64, e: i64) {
        if e == 0 {
            return;
        }
        let v = self.exps.get(&(i, k)).copied().unwrap_or(0) + e;
        if v == 0 {
            self.exps.remove(&(i, k));
        } else {
            self.exps.insert((i, k), v);
        }
    }

    pub fn exponent(&self, i: u32, k: i64) -> i64 {
        self.exps.get(&(i, k)).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, i64), i64)> + '_ {
        self.exps.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn mul(&self, other: &IMonomial) -> IMonomial {
        let mut out = self.clone();
        for ((i, k), e) in other.iter() {
            out.mul_y_assign(i, k, e);
        }
        out
    }

    pub fn inv(&self) -> IMonomial {
        IMonomial {
            exps: self.exps.iter().map(|(&k, &v)| (k, -v)).collect(),
        }
    }

    /// Multiplies by `A_{i,k}^{±1}` where
    /// `A_{i,k} = Y_{i,k+1} Y_{i,k-1} ∏_{c_ij<0} Y_{j,k}^{-1}`.
    pub fn mul_a(&self, q: &QuiverData, i: u32, k: i64, power: i64) -> IMonomial {
        let mut out = self.clone();
        out.mul_y_assign(i, k + 1, power);
        out.mul_y_assign(i, k - 1, power);
        for j in q.neighbours(i) {
            out.mul_y_assign(j, k, -power);
        }
        out
    }

    /// ℓ-dominance: all exponents non-negative.
    pub fn is_dominant(&self) -> bool {
        self.exps.values().all(|&e| e >= 0)
    }

    /// The `i`-part: the map `k -> exponent of Y_{i,k}`.
    pub fn part(&self, i: u32) -> BTreeMap<i64, i64> {
        self.exps
            .iter()
            .filter(|((j, _), _)| *j == i)
            .map(|(&(_, k), &e)| (k, e))
            .collect()
    }

    /// Top spectral index `|v| = max{k : some exponent at k is nonzero}`.
    pub fn top_index(&self) -> Option<i64> {
        self.exps.keys().map(|&(_, k)| k).max()
    }

    /// Right-negativity: the exponents on the top spectral row are all
    /// non-positive. The empty monomial is not right-negative.
    pub fn is_right_negative(&self) -> bool {
        match self.top_index() {
            None => false,
            Some(top) => self
                .exps
                .iter()
                .filter(|((_, k), _)| *k == top)
                .all(|(_, &e)| e <= 0),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for ((i, k), e) in self.iter() {
            map.insert(format!("{i},{k}"), serde_json::Value::from(e));
        }
        serde_json::Value::Object(map)
    }
}

impl fmt::Display for IMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for ((i, k), e) in self.iter() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "Y[{i},{k}]")?;
            } else {
                write!(f, "Y[{i},{k}]^{e}")?;
            }
        }
        Ok(())
    }
}

/// An integer combination of [`IMonomial`]s with an optional distinguished
/// highest monomial. Multiplicities of genuine q-characters are positive.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct QChar {
    terms: BTreeMap<IMonomial, i64>,
    pub highest: Option<IMonomial>,
}

impl QChar {
    pub fn new() -> Self {
        QChar::default()
    }

    pub fn add(&mut self, m: IMonomial, mult: i64) {
        if mult == 0 {
            return;
        }
        let v = self.terms.get(&m).copied().unwrap_or(0) + mult;
        if v == 0 {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, v);
        }
    }

    pub fn mult(&self, m: &IMonomial) -> i64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IMonomial, i64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn num_monomials(&self) -> usize {
        self.terms.len()
    }

    /// Total dimension: the sum of multiplicities.
    pub fn dimension(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn dominant_monomials(&self) -> Vec<&IMonomial> {
        self.terms.keys().filter(|m| m.is_dominant()).collect()
    }

    /// Exactly one ℓ-dominant term.
    pub fn has_unique_dominant(&self) -> bool {
        self.dominant_monomials().len() == 1
    }

    /// Divides every monomial by the highest one.
    pub fn normalized(&self) -> QChar {
        let Some(h) = &self.highest else {
            return self.clone();
        };
        let hinv = h.inv();
        let mut out = QChar::new();
        for (m, c) in self.terms() {
            out.add(m.mul(&hinv), c);
        }
        out.highest = Some(IMonomial::one());
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms()
            .map(|(m, c)| {
                serde_json::json!({
                    "monomial": m.to_json(),
                    "mult": c,
                })
            })
            .collect();
        serde_json::Value::Array(terms)
    }
}
