use super::fm::{fm_qcharacter, FmResult};
use super::monomial::IMonomial;
use crate::error::{Error, Result};
use crate::exact::{Mono, RatFunc, Var};
use crate::quiver::{DimKey, DimVec, QuiverData, Support};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A Kirillov-Reshetikhin module label: vertex `i`, spectral center `k`,
/// length `l >= 1`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct KrSpec {
    pub i: u32,
    pub k: i64,
    pub l: u32,
}

impl KrSpec {
    pub fn dimvec(&self) -> Result<DimVec> {
        kr_dimvec(self.i, self.k, self.l)
    }

    pub fn highest_monomial(&self) -> IMonomial {
        kr_highest_monomial(self.i, self.k, self.l)
    }
}

/// The framing dimension vector `w^l_{i,k} = Σ_{j=0}^{l-1} δ_{i,k-l+1+2j}`,
/// supported on the arithmetic progression `k-l+1, k-l+3, ..., k+l-1`.
pub fn kr_dimvec(i: u32, k: i64, l: u32) -> Result<DimVec> {
    if l == 0 {
        return Err(Error::InvalidParameter("KR length must be >= 1".into()));
    }
    let mut w = DimVec::zero(Support::GradedVertices);
    for j in 0..l as i64 {
        w.add_assign(DimKey::Graded(i, k - l as i64 + 1 + 2 * j), 1);
    }
    Ok(w)
}

/// The highest monomial `m^l_{i,k} = Y_{i,k-l+1} · Y_{i,k-l+3} ··· Y_{i,k+l-1}`.
pub fn kr_highest_monomial(i: u32, k: i64, l: u32) -> IMonomial {
    let mut m = IMonomial::one();
    for j in 0..l as i64 {
        m.mul_y_assign(i, k - l as i64 + 1 + 2 * j, 1);
    }
    m
}

/// Verifies by bounded enumeration that every product of the given
/// right-negative monomial with at most `steps` factors `A_{j,r}^{-1}`
/// remains right-negative. The `A`-indices range over a window around the
/// monomial's support. Errors on a non-right-negative input.
pub fn right_negative_closure_check(
    quiver: &QuiverData,
    m: &IMonomial,
    steps: u32,
) -> Result<bool> {
    if !m.is_right_negative() {
        return Err(Error::InvalidParameter(format!(
            "monomial {m} is not right-negative"
        )));
    }
    let top = m.top_index().unwrap();
    let lo = m.iter().map(|((_, k), _)| k).min().unwrap() - 2 * steps as i64;
    let hi = top + 2 * steps as i64;
    let indices: Vec<(u32, i64)> = (1..=quiver.rank() as u32)
        .flat_map(|i| (lo..=hi).map(move |r| (i, r)))
        .collect();
    // Enumerate multisets of size <= steps over the index window.
    fn rec(
        quiver: &QuiverData,
        m: &IMonomial,
        indices: &[(u32, i64)],
        from: usize,
        left: u32,
    ) -> bool {
        if !m.is_right_negative() {
            return false;
        }
        if left == 0 {
            return true;
        }
        for (pos, &(i, r)) in indices.iter().enumerate().skip(from) {
            let m2 = m.mul_a(quiver, i, r, -1);
            if !rec(quiver, &m2, indices, pos, left - 1) {
                return false;
            }
        }
        true
    }
    Ok(rec(quiver, m, &indices, 0, steps))
}

/// Which of the two interval conditions of the tensor-product simplicity
/// criterion to test.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TpkrVariant {
    A,
    B,
}

impl std::str::FromStr for TpkrVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" | "A" => Ok(TpkrVariant::A),
            "b" | "B" => Ok(TpkrVariant::B),
            other => Err(Error::InvalidParameter(format!("variant `{other}`"))),
        }
    }
}

fn progression(from: i64, to: i64) -> Vec<i64> {
    // step-2 progression, empty when to < from
    let mut v = Vec::new();
    let mut x = from;
    while x <= to {
        v.push(x);
        x += 2;
    }
    v
}

/// The interval criterion for a tensor product of KR modules to be simple.
///
/// Variant (a): for every tuple, `k_r >= l` and the progression
/// `[k_r+2-2l_r, k_r]` equals `(k_r - 2ℕ) ∩ [l, k_r]`.
/// Variant (b): `k_r <= l` and `[k_r, k_r-2+2l_r]` equals
/// `(k_r + 2ℕ) ∩ [k_r, l]`.
pub fn tpkr_criterion(tuples: &[(u32, i64, u32)], l: i64, variant: TpkrVariant) -> bool {
    tuples.iter().all(|&(_, k, len)| {
        let len = len as i64;
        match variant {
            TpkrVariant::A => {
                if k < l {
                    return false;
                }
                let prog = progression(k + 2 - 2 * len, k);
                let inter: Vec<i64> = progression(l + ((k - l) % 2).abs(), k)
                    .into_iter()
                    .filter(|x| (k - x) % 2 == 0)
                    .collect();
                prog == inter
            }
            TpkrVariant::B => {
                if k > l {
                    return false;
                }
                let prog = progression(k, k - 2 + 2 * len);
                let inter = progression(k, l);
                prog == inter
            }
        }
    })
}

/// The socle certificate used by the simplicity proof for variant (b) data.
#[derive(Clone, Debug, Serialize)]
pub struct SocleCertificate {
    /// The socle dimension vector on `I×ℤ`, as rows `(i, l)` and `(i, l+1)`.
    pub socle: Vec<(u32, i64, i64)>,
    /// Rows of the socle that fall outside `{l, l+1}` (a failure).
    pub stray_rows: Vec<(u32, i64)>,
    /// For each socle row, whether `m · A_{i,row}^{-1}` is right-negative.
    pub right_negative: Vec<(u32, i64, bool)>,
    /// The top monomial of the tensor product.
    pub highest: String,
    pub pass: bool,
}

/// Computes the socle rows `Σ_r δ_{i_r, k_r - 1 + 2 l_r}` of the module
/// attached to variant (b) data and certifies that it is concentrated on the
/// rows `l` and `l+1` with every monomial `m·A_{i,row}^{-1}` right-negative.
/// The certificate boolean coincides with the interval criterion.
pub fn socle_bound_check(
    quiver: &QuiverData,
    tuples: &[(u32, i64, u32)],
    l: i64,
) -> SocleCertificate {
    let mut m = IMonomial::one();
    for &(i, k, len) in tuples {
        for y in progression(k, k - 2 + 2 * len as i64) {
            m.mul_y_assign(i, y, 1);
        }
    }
    let mut socle_map: BTreeMap<(u32, i64), i64> = BTreeMap::new();
    for &(i, k, len) in tuples {
        *socle_map.entry((i, k - 1 + 2 * len as i64)).or_insert(0) += 1;
    }
    let mut stray = Vec::new();
    let mut rn = Vec::new();
    let mut pass = true;
    for (&(i, row), _) in &socle_map {
        if row != l && row != l + 1 {
            stray.push((i, row));
            pass = false;
        }
        let probe = m.mul_a(quiver, i, row, -1);
        let ok = probe.is_right_negative();
        rn.push((i, row, ok));
        if !ok {
            pass = false;
        }
    }
    // Also require k_r <= l so that the data is genuine variant-(b) data.
    if tuples.iter().any(|&(_, k, _)| k > l) {
        pass = false;
    }
    SocleCertificate {
        socle: socle_map.iter().map(|(&(i, r), &c)| (i, r, c)).collect(),
        stray_rows: stray,
        right_negative: rn,
        highest: m.to_string(),
        pass,
    }
}

/// A stabilization report for the limit of normalized KR characters.
#[derive(Clone, Debug)]
pub struct HjReport {
    /// Anchor vertex and spectral index: the family is `KR^l_{i, k-l}` so
    /// the first `A^{-1}` step sits at the fixed index `k`.
    pub i: u32,
    pub k: i64,
    pub l_max: u32,
    pub a_degree_cap: i64,
    /// Truncated normalized characters per `l = 1..=l_max`, in `A^{-1}`
    /// coordinates: map from the `A`-exponent vector to the multiplicity.
    pub truncations: Vec<BTreeMap<DimVec, i64>>,
    /// For each consecutive pair `(l, l+1)`, the largest degree `d <= cap`
    /// at which the truncations agree.
    pub agreement: Vec<i64>,
    /// The stabilized truncation from the largest `l`.
    pub stabilized: BTreeMap<DimVec, i64>,
}

fn truncate_by_degree(res: &FmResult, cap: i64) -> BTreeMap<DimVec, i64> {
    let mut out = BTreeMap::new();
    for (m, c) in res.qchar.terms() {
        let av = &res.avec[m];
        if av.total() <= cap {
            out.insert(av.clone(), c);
        }
    }
    out
}

fn degree_filter(t: &BTreeMap<DimVec, i64>, d: i64) -> BTreeMap<DimVec, i64> {
    t.iter()
        .filter(|(v, _)| v.total() <= d)
        .map(|(v, &c)| (v.clone(), c))
        .collect()
}

/// Computes normalized KR characters along the bottom-anchored family
/// `KR^l_{i,k-l}` for `l = 1..=l_max`, truncates to total `A^{-1}`-degree
/// `<= a_degree_cap`, and reports the degree through which consecutive
/// truncations agree. The stabilized truncation approximates the negative
/// prefundamental character.
pub fn hj_limit(
    quiver: &QuiverData,
    i: u32,
    k: i64,
    l_max: u32,
    a_degree_cap: i64,
    step_cap: usize,
) -> Result<HjReport> {
    if quiver.rank() > 2 {
        return Err(Error::UnsupportedQuiver(format!(
            "{} (limit computation is restricted to rank <= 2)",
            quiver.name
        )));
    }
    if l_max < 2 {
        return Err(Error::InvalidParameter("l_max must be >= 2".into()));
    }
    let mut truncations = Vec::new();
    for l in 1..=l_max {
        let res = fm_qcharacter(quiver, i, k - l as i64, l, step_cap)?;
        if !res.complete {
            return Err(Error::StepCapExceeded(step_cap));
        }
        truncations.push(truncate_by_degree(&res, a_degree_cap));
    }
    let mut agreement = Vec::new();
    for w in truncations.windows(2) {
        let mut best = -1;
        for d in 0..=a_degree_cap {
            if degree_filter(&w[0], d) == degree_filter(&w[1], d) {
                best = d;
            } else {
                break;
            }
        }
        agreement.push(best);
    }
    let stabilized = truncations.last().cloned().unwrap();
    Ok(HjReport {
        i,
        k,
        l_max,
        a_degree_cap,
        truncations,
        agreement,
        stabilized,
    })
}

/// The ℓ-weight of a finite-dimensional simple module from its Drinfeld
/// polynomial, given per vertex by the multiset of root exponents: roots are
/// symbolic powers `z^{k}` and `P_i(u) = ∏ (1 - z^{k} u)`. Returns
/// `Ψ_i(u) = z^{deg P_i} · P_i(1/zu) · P_i(z/u)^{-1}` as a rational function
/// in `u` and `z`.
pub fn drinfeld_lweight(roots_per_vertex: &[Vec<i64>]) -> Result<Vec<RatFunc>> {
    let u = RatFunc::var(Var::U);
    let mut out = Vec::new();
    for roots in roots_per_vertex {
        let deg = roots.len() as i64;
        let mut num = RatFunc::mono(Mono::var_pow(Var::Zeta, deg));
        let mut den = RatFunc::one();
        for &k in roots {
            // P(1/(z u)) contributes (1 - z^{k-1}/u); P(z/u) contributes
            // (1 - z^{k+1}/u).
            let a = &RatFunc::one() - &(&RatFunc::mono(Mono::var_pow(Var::Zeta, k - 1)) / &u)?;
            let b = &RatFunc::one() - &(&RatFunc::mono(Mono::var_pow(Var::Zeta, k + 1)) / &u)?;
            num = &num * &a;
            den = &den * &b;
        }
        out.push((&num / &den)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kr_dimvec_examples() {
        let w = kr_dimvec(1, 0, 1).unwrap();
        assert_eq!(w, DimVec::delta_graded(1, 0));
        let w = kr_dimvec(1, 0, 2).unwrap();
        assert_eq!(w.get(DimKey::Graded(1, -1)), 1);
        assert_eq!(w.get(DimKey::Graded(1, 1)), 1);
        assert_eq!(w.total(), 2);
        let w = kr_dimvec(1, 2, 3).unwrap();
        for k in [0, 2, 4] {
            assert_eq!(w.get(DimKey::Graded(1, k)), 1);
        }
        assert!(kr_dimvec(1, 0, 0).is_err());
    }

    #[test]
    fn tpkr_examples() {
        // Single tuple satisfying the variant-(b) identity.
        assert!(tpkr_criterion(&[(1, 0, 2)], 2, TpkrVariant::B));
        assert!(tpkr_criterion(&[(1, 0, 2), (1, 0, 2)], 2, TpkrVariant::B));
        // [0,2] vs {0,2,4}: fails.
        assert!(!tpkr_criterion(&[(1, 0, 2)], 5, TpkrVariant::B));
        // Variant (a): progression [k+2-2l, k] against (k-2N) ∩ [l, k].
        assert!(tpkr_criterion(&[(1, 4, 2)], 1, TpkrVariant::A));
        assert!(!tpkr_criterion(&[(1, 4, 1)], 1, TpkrVariant::A));
    }

    #[test]
    fn tpkr_is_permutation_invariant() {
        let a = [(1, 0, 2), (1, 1, 2), (2, 0, 1)];
        let mut b = a;
        b.reverse();
        for l in 0..=6 {
            assert_eq!(
                tpkr_criterion(&a, l, TpkrVariant::B),
                tpkr_criterion(&b, l, TpkrVariant::B)
            );
        }
    }

    #[test]
    fn socle_examples() {
        let q = QuiverData::type_a(1);
        // Single KR tuple: socle = delta_{i, k-1+2l}.
        let cert = socle_bound_check(&q, &[(1, 0, 2)], 3);
        assert_eq!(cert.socle, vec![(1, 3, 1)]);
        assert!(cert.pass);
        // Two tuples with different parities populate both rows.
        let cert = socle_bound_check(&q, &[(1, 0, 2), (1, 1, 2)], 4);
        let rows: Vec<i64> = cert.socle.iter().map(|&(_, r, _)| r).collect();
        assert_eq!(rows, vec![3, 4]);
    }

    #[test]
    fn socle_agrees_with_interval_criterion() {
        let q = QuiverData::type_a(2);
        for i in [1u32, 2] {
            for k in -2..=3 {
                for len in 1..=3u32 {
                    for l in -1..=5 {
                        let tuples = [(i, k, len)];
                        assert_eq!(
                            tpkr_criterion(&tuples, l, TpkrVariant::B),
                            socle_bound_check(&q, &tuples, l).pass,
                            "i={i} k={k} len={len} l={l}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn right_negative_closure() {
        let q = QuiverData::type_a(1);
        let m = IMonomial::y(1, 3).inv();
        assert!(right_negative_closure_check(&q, &m, 2).unwrap());
        // m^2_{1,0} * A_{1,2}^{-1} is right-negative and stays so.
        let m = kr_highest_monomial(1, 0, 2).mul_a(&q, 1, 2, -1);
        assert!(m.is_right_negative());
        assert!(right_negative_closure_check(&q, &m, 2).unwrap());
        // Dominant input is a precondition violation.
        assert!(right_negative_closure_check(&q, &IMonomial::y(1, 0), 1).is_err());
    }

    #[test]
    fn hj_stabilization_a1() {
        let q = QuiverData::type_a(1);
        let rep = hj_limit(&q, 1, 0, 5, 3, 100_000).unwrap();
        // Degree-0 truncations are all {1}; consecutive truncations agree
        // through degree min(l, 3).
        for (idx, a) in rep.agreement.iter().enumerate() {
            let l = idx as i64 + 1;
            assert!(*a >= l.min(3), "agreement {a} at l={l}");
        }
        // The stabilized truncation is the degree-<=3 ladder: 4 terms.
        assert_eq!(rep.stabilized.len(), 4);
    }

    #[test]
    fn hj_limit_runs_on_rank_two() {
        let q = QuiverData::type_a(2);
        let rep = hj_limit(&q, 1, 0, 3, 2, 1_000_000).unwrap();
        assert_eq!(rep.truncations.len(), 3);
        assert!(rep.agreement.iter().all(|&a| a >= 0));
    }

    #[test]
    fn kr_spec_accessors() {
        let spec = KrSpec { i: 1, k: 0, l: 2 };
        assert_eq!(spec.dimvec().unwrap(), kr_dimvec(1, 0, 2).unwrap());
        assert_eq!(spec.highest_monomial(), kr_highest_monomial(1, 0, 2));
    }

    #[test]
    fn drinfeld_lweight_examples() {
        // Trivial polynomial: trivial weight.
        let w = drinfeld_lweight(&[vec![]]).unwrap();
        assert_eq!(w[0], RatFunc::one());
        // P(u) = 1 - z^k u.
        let w = drinfeld_lweight(&[vec![5]]).unwrap();
        let u = RatFunc::var(Var::U);
        let z = |k: i64| RatFunc::mono(Mono::var_pow(Var::Zeta, k));
        let want = (&(&z(1) * &(&RatFunc::one() - &(&z(4) / &u).unwrap()))
            / &(&RatFunc::one() - &(&z(6) / &u).unwrap()))
            .unwrap();
        assert_eq!(w[0], want);
        // Multiplicativity.
        let a = drinfeld_lweight(&[vec![2]]).unwrap();
        let b = drinfeld_lweight(&[vec![4]]).unwrap();
        let ab = drinfeld_lweight(&[vec![2, 4]]).unwrap();
        assert_eq!(ab[0], &a[0] * &b[0]);
    }

    #[test]
    fn kr_roots_match_dimvec_support() {
        // Drinfeld roots of a KR module form the same progression as the
        // framing vector support.
        let (i, k, l) = (1u32, 2i64, 3u32);
        let w = kr_dimvec(i, k, l).unwrap();
        let roots: Vec<i64> = (0..l as i64).map(|j| k - l as i64 + 1 + 2 * j).collect();
        for &r in &roots {
            assert_eq!(w.get(DimKey::Graded(i, r)), 1);
        }
        assert_eq!(roots.len() as i64, w.total());
    }
}
