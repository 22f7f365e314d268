use super::monomial::{IMonomial, QChar};
use crate::error::{Error, Result};
use crate::quiver::{DimKey, DimVec, QuiverData, Support};
use std::collections::BTreeMap;

/// Result of a character expansion: the character, the `A^{-1}`-exponent
/// vector of each monomial relative to the highest one, and a completeness
/// flag (false when the step cap was hit).
#[derive(Clone, Debug)]
pub struct FmResult {
    pub qchar: QChar,
    /// For each monomial, the multiset of `A_{j,r}^{-1}` factors relating it
    /// to the highest monomial, as a graded dimension vector.
    pub avec: BTreeMap<IMonomial, DimVec>,
    pub complete: bool,
    pub steps: usize,
}

impl FmResult {
    /// Total `A^{-1}`-degree of a monomial of this character.
    pub fn a_degree(&self, m: &IMonomial) -> Option<i64> {
        self.avec.get(m).map(|v| v.total())
    }
}

/// The q-character of the simple sl2-module with ℓ-dominant highest monomial
/// given by the exponent map `k -> u_k >= 0`.
///
/// The monomial decomposes uniquely into strings (maximal arithmetic
/// progressions of step 2 extracted from the top); the simple module is the
/// product of the string modules, each contributing the ladder
/// `m, m·A^{-1}_{top+1}, m·A^{-1}_{top+1}A^{-1}_{top-1}, ...`. Returned as a
/// list of (`A`-index multiset, multiplicity).
pub fn sl2_simple_character(part: &BTreeMap<i64, i64>) -> Vec<(Vec<i64>, i64)> {
    debug_assert!(part.values().all(|&e| e >= 0));
    // Extract strings greedily from the top index.
    let mut remaining = part.clone();
    remaining.retain(|_, e| *e > 0);
    let mut strings: Vec<(i64, i64)> = Vec::new(); // (bottom, length)
    while let Some((&top, _)) = remaining.iter().next_back() {
        let mut bottom = top;
        loop {
            let e = remaining.get_mut(&bottom).unwrap();
            *e -= 1;
            if *e == 0 {
                remaining.remove(&bottom);
            }
            if remaining.get(&(bottom - 2)).copied().unwrap_or(0) > 0 {
                bottom -= 2;
            } else {
                break;
            }
        }
        strings.push((bottom, (top - bottom) / 2 + 1));
    }
    // Each string of length l anchored at bottom b spans b..b+2l-2 and its
    // ladder multiplies successively by A^{-1} at b+2l-1, b+2l-3, ..., b+1.
    let mut acc: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    acc.insert(Vec::new(), 1);
    for &(bottom, len) in &strings {
        let mut next: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
        for j in 0..=len {
            let steps: Vec<i64> = (0..j).map(|r| bottom + 2 * len - 1 - 2 * r).collect();
            for (base, mult) in &acc {
                let mut combined = base.clone();
                combined.extend_from_slice(&steps);
                combined.sort_unstable();
                *next.entry(combined).or_insert(0) += mult;
            }
        }
        acc = next;
    }
    acc.into_iter().collect()
}

/// Runs the character expansion from an ℓ-dominant highest monomial.
///
/// Monomials are processed in increasing `A^{-1}`-degree. Every monomial
/// whose `i`-part is `i`-dominant spawns the monomials of the simple
/// sl2-character in direction `i`; the multiplicity of a new monomial is the
/// largest requirement over the directions producing it. After the expansion
/// terminates, the result is verified to decompose into sl2-characters in
/// every direction, which is the defining property of a q-character.
pub fn fm_qcharacter_from(
    quiver: &QuiverData,
    highest: IMonomial,
    step_cap: usize,
) -> Result<FmResult> {
    if !highest.is_dominant() {
        return Err(Error::InvalidParameter(format!(
            "highest monomial {highest} is not dominant"
        )));
    }
    if quiver.rank() > 4 || quiver.name == "jordan" {
        return Err(Error::UnsupportedQuiver(format!(
            "{} (character expansion is restricted to simply-laced rank <= 4)",
            quiver.name
        )));
    }
    let vertices: Vec<u32> = (1..=quiver.rank() as u32).collect();

    // height (A-degree) ordered frontier.
    let mut pending: std::collections::BTreeSet<(i64, IMonomial)> = std::collections::BTreeSet::new();
    // requirements per direction, for monomials not yet finalized
    let mut req: BTreeMap<IMonomial, BTreeMap<u32, i64>> = BTreeMap::new();
    let mut avec: BTreeMap<IMonomial, DimVec> = BTreeMap::new();

    avec.insert(highest.clone(), DimVec::zero(Support::GradedVertices));
    req.insert(highest.clone(), BTreeMap::from([(0u32, 1i64)]));
    pending.insert((0, highest.clone()));

    let mut out = QChar::new();
    out.highest = Some(highest.clone());
    let mut steps = 0usize;
    let mut complete = true;

    while let Some((height, m)) = pending.pop_first().map(|(h, m)| (h, m)) {
        steps += 1;
        if steps > step_cap {
            complete = false;
            break;
        }
        let mult = req
            .remove(&m)
            .map(|dirs| dirs.values().copied().max().unwrap_or(0))
            .unwrap_or(0);
        debug_assert!(mult > 0);
        out.add(m.clone(), mult);

        for &i in &vertices {
            let part = m.part(i);
            if part.is_empty() || part.values().any(|&e| e < 0) || part.values().all(|&e| e == 0) {
                continue;
            }
            for (a_indices, smult) in sl2_simple_character(&part) {
                if a_indices.is_empty() {
                    continue; // the monomial itself
                }
                let mut m2 = m.clone();
                let mut av = avec.get(&m).cloned().unwrap();
                for &r in &a_indices {
                    m2 = m2.mul_a(quiver, i, r, -1);
                    av.add_assign(DimKey::Graded(i, r), 1);
                }
                let h2 = height + a_indices.len() as i64;
                match avec.get(&m2) {
                    Some(prev) => {
                        if *prev != av {
                            return Err(Error::CharacterInconsistent(
                                i,
                                format!("monomial {m2} reached along two distinct A-paths"),
                            ));
                        }
                    }
                    None => {
                        avec.insert(m2.clone(), av);
                    }
                }
                let needed = mult * smult;
                let entry = req.entry(m2.clone()).or_default();
                let e = entry.entry(i).or_insert(0);
                *e += needed;
                pending.insert((h2, m2));
            }
        }
    }

    if complete {
        verify_decomposition(quiver, &out)?;
    }
    Ok(FmResult {
        qchar: out,
        avec,
        complete,
        steps,
    })
}

/// Checks that the character decomposes into simple sl2-characters in every
/// direction. This is the ground truth the expansion must satisfy.
///
/// For direction `i`, every string anchor has strictly larger `i`-part total
/// degree than the string's interior monomials (each `A^{-1}` step removes
/// two `Y_{i,·}` exponents), so processing remaining monomials by descending
/// `i`-degree makes the system triangular: the maximal remaining monomial
/// must be an anchor, hence `i`-dominant with positive multiplicity.
fn verify_decomposition(quiver: &QuiverData, chi: &QChar) -> Result<()> {
    for i in 1..=quiver.rank() as u32 {
        let mut work: BTreeMap<IMonomial, i64> = chi.terms().map(|(m, c)| (m.clone(), c)).collect();
        loop {
            let next = work
                .iter()
                .filter(|(_, &c)| c != 0)
                .max_by_key(|(m, _)| {
                    let p = m.part(i);
                    p.values().sum::<i64>()
                })
                .map(|(m, &c)| (m.clone(), c));
            let Some((m, c)) = next else { break };
            let part = m.part(i);
            if part.values().any(|&e| e < 0) || c < 0 {
                return Err(Error::CharacterInconsistent(
                    i,
                    format!("leftover monomial {m} with multiplicity {c}"),
                ));
            }
            for (a_indices, smult) in sl2_simple_character(&part) {
                let mut m2 = m.clone();
                for &r in &a_indices {
                    m2 = m2.mul_a(quiver, i, r, -1);
                }
                let e = work.entry(m2.clone()).or_insert(0);
                *e -= c * smult;
                if *e == 0 {
                    work.remove(&m2);
                }
            }
        }
    }
    Ok(())
}

/// Convenience wrapper computing the character of the KR module with the
/// given vertex, center, and length.
pub fn fm_qcharacter(quiver: &QuiverData, i: u32, k: i64, l: u32, step_cap: usize) -> Result<FmResult> {
    let m = super::kr::kr_highest_monomial(i, k, l);
    fm_qcharacter_from(quiver, m, step_cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_fundamental_string() {
        let part = BTreeMap::from([(0i64, 1i64)]);
        let chi = sl2_simple_character(&part);
        assert_eq!(chi.len(), 2);
        assert!(chi.contains(&(vec![], 1)));
        assert!(chi.contains(&(vec![1], 1)));
    }

    #[test]
    fn sl2_string_of_length_two() {
        // Y_0 Y_2: single string, ladder of length 3.
        let part = BTreeMap::from([(0i64, 1i64), (2, 1)]);
        let chi = sl2_simple_character(&part);
        assert_eq!(chi.len(), 3);
        assert!(chi.contains(&(vec![3], 1)));
        assert!(chi.contains(&(vec![1, 3], 1)));
    }

    #[test]
    fn sl2_two_separate_strings() {
        // Y_0 Y_4: two strings in general position: product of two ladders.
        let part = BTreeMap::from([(0i64, 1i64), (4, 1)]);
        let chi = sl2_simple_character(&part);
        assert_eq!(chi.len(), 4);
        assert!(chi.contains(&(vec![1, 5], 1)));
    }

    #[test]
    fn a1_kr_characters() {
        let q = QuiverData::type_a(1);
        for l in 1..=5u32 {
            let res = fm_qcharacter(&q, 1, 0, l, 10_000).unwrap();
            assert!(res.complete);
            assert_eq!(res.qchar.dimension(), (l + 1) as i64, "A1 KR l={l}");
            assert!(res.qchar.has_unique_dominant());
            for (m, _) in res.qchar.terms() {
                if Some(m) != res.qchar.highest.as_ref() {
                    assert!(m.is_right_negative(), "{m} should be right-negative");
                }
            }
        }
    }

    #[test]
    fn a2_fundamental_dimension() {
        let q = QuiverData::type_a(2);
        for i in [1, 2] {
            let res = fm_qcharacter(&q, i, 0, 1, 10_000).unwrap();
            assert_eq!(res.qchar.dimension(), 3);
            assert!(res.qchar.has_unique_dominant());
        }
    }

    #[test]
    fn a3_fundamental_dimensions() {
        let q = QuiverData::type_a(3);
        let dims = [(1u32, 4i64), (2, 6), (3, 4)];
        for (i, d) in dims {
            let res = fm_qcharacter(&q, i, 0, 1, 10_000).unwrap();
            assert_eq!(res.qchar.dimension(), d, "A3 fundamental {i}");
            assert!(res.qchar.has_unique_dominant());
        }
    }

    #[test]
    fn a2_kr_of_length_two() {
        // KR^2 for A2 is the 6-dimensional symmetric square of a fundamental.
        let q = QuiverData::type_a(2);
        let res = fm_qcharacter(&q, 1, 0, 2, 10_000).unwrap();
        assert_eq!(res.qchar.dimension(), 6);
        assert!(res.qchar.has_unique_dominant());
    }

    #[test]
    fn step_cap_yields_incomplete_partial_result() {
        let q = QuiverData::type_a(3);
        let res = fm_qcharacter(&q, 2, 0, 1, 3).unwrap();
        assert!(!res.complete);
        assert!(res.qchar.dimension() < 6);
        assert!(res.qchar.dimension() >= 1);
    }
}
