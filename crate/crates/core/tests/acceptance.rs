//! Acceptance suite: the exact identities the library is contracted to
//! satisfy, each with a pinned time budget. Run with
//! `cargo test --test acceptance -- --nocapture` to see one line per
//! criterion.

use std::sync::Mutex;
use std::time::{Duration, Instant};

/// The heavy criteria saturate the worker pool; hold this while timing them
/// so budgets measure solo work rather than test-harness contention.
static HEAVY: Mutex<()> = Mutex::new(());

use num_bigint::BigInt;
use qloop_core::exact::{Mono, RatFunc, Var};
use qloop_core::grass::euler_vs_kr;
use qloop_core::lattice::{
    build_operator_table, compositions, psi_series_a1, quot_poincare, Lambda,
};
use qloop_core::present::{
    check_relations, highest_weight_table, relation_catalogue, PresentationSpec, Status,
};
use qloop_core::qchar::{fm_qcharacter, hj_limit, socle_bound_check, tpkr_criterion, TpkrVariant};
use qloop_core::quiver::{DimKey, DimVec, QuiverData, Support};

struct Criterion {
    label: &'static str,
    budget: Duration,
    start: Instant,
}

impl Criterion {
    fn begin(label: &'static str, budget_secs: u64) -> Self {
        Criterion {
            label,
            budget: Duration::from_secs(budget_secs),
            start: Instant::now(),
        }
    }

    fn finish(self) {
        let elapsed = self.start.elapsed();
        println!(
            "criterion {}: PASS ({:.2}s, budget {}s)",
            self.label,
            elapsed.as_secs_f64(),
            self.budget.as_secs()
        );
        assert!(
            elapsed <= self.budget,
            "criterion {} exceeded its {}s budget: {:.2}s",
            self.label,
            self.budget.as_secs(),
            elapsed.as_secs_f64()
        );
    }
}

/// 1. The residue-theorem commutator identity: for `w <= 3`, `|λ| <= 3`,
/// `|m|, |n| <= 2`, the diagonal entry of `(q - q^{-1})[A^+_m, A^-_n]`
/// computed by matrix-coefficient summation equals the `u^{-m-n}` coefficient
/// of `q(φ^-_λ - φ^+_λ)`, exactly.
#[test]
fn criterion_1_residue_commutator() {
    let _guard = HEAVY.lock().unwrap();
    use rayon::prelude::*;
    let c = Criterion::begin("1 (residue commutator identity)", 60);
    let lambdas: Vec<Lambda> = (1..=3usize)
        .flat_map(|w| Lambda::up_to_weight(w, 3))
        .collect();
    let checked: usize = lambdas
        .par_iter()
        .map(|lambda| {
            let grid = qloop_core::lattice::commutator_check_grid(lambda, 2).unwrap();
            for rep in &grid {
                assert!(
                    rep.diagonal_pass,
                    "diagonal mismatch at {lambda:?} ({},{}): {} vs {}",
                    rep.m, rep.n, rep.matrix_side, rep.series_side
                );
                assert!(rep.off_diagonal_pass, "off-diagonal at {lambda:?}");
                assert!(rep.residue_sum_zero, "residue sum at {lambda:?}");
            }
            grid.len()
        })
        .sum();
    assert_eq!(checked, (4 + 10 + 20) * 25);
    c.finish();
}

/// 2. The central element: `ψ^+_0 · ψ^-_{-w} = (-q)^{-w} ∏_s x_s^{-1}` for
/// every `λ` with `|λ| <= 4`, `w <= 3`; exact and independent of `λ`.
#[test]
fn criterion_2_central_element() {
    let c = Criterion::begin("2 (central element value)", 5);
    for w in 1..=3usize {
        let mut expected = RatFunc::q_pow(-(w as i64)).mul_int(if w % 2 == 0 { 1 } else { -1 });
        for s in 0..w {
            expected = &expected * &RatFunc::mono(Mono::var_pow(Var::Chi(s as u32 + 1), -1));
        }
        for lambda in Lambda::up_to_weight(w, 4) {
            let plus0 = psi_series_a1(&lambda, true, 0).unwrap().coeff(0).unwrap();
            let minus_lead = psi_series_a1(&lambda, false, 0)
                .unwrap()
                .coeff(w as i64)
                .unwrap();
            assert_eq!(&plus0 * &minus_lead, expected, "{lambda:?}");
        }
    }
    c.finish();
}

/// 3. The relation suite on the fixed-point representation: framing ranks
/// `w <= 2`, weight cap 4, mode window 3; the invertibility, commutation,
/// twist, and mixed-commutator relations all run with zero failures and at
/// least one determined instance each.
#[test]
fn criterion_3_relation_suite() {
    let _guard = HEAVY.lock().unwrap();
    let c = Criterion::begin("3 (relation suite on the lattice table)", 120);
    for w in 1..=2usize {
        let table = build_operator_table(w, 4, 3).unwrap();
        let mut shift = DimVec::zero(Support::Vertices);
        shift.set(DimKey::Plain(1), -(w as i64));
        let spec = PresentationSpec::simply_laced(QuiverData::type_a(1), shift);
        let report = check_relations(&spec, &table, 3).unwrap();
        assert_eq!(report.fail, 0, "w={w}: {report}");
        for rel in ["A.2", "A.3", "A.4", "A.6"] {
            let n = report
                .instances
                .iter()
                .filter(|r| r.relation == rel && r.status == Status::Pass)
                .count();
            assert!(n > 0, "w={w}: no passing {rel} instance");
        }
    }
    c.finish();
}

/// 4. KR dimensions against graded Grassmannian point counts, both sides
/// computed independently: `l+1` for the one-vertex quiver with `l <= 5`,
/// 3 for the rank-2 fundamentals, 6 for the rank-3 middle fundamental.
#[test]
fn criterion_4_kr_dimensions() {
    let _guard = HEAVY.lock().unwrap();
    let c = Criterion::begin("4 (KR dimension vs Grassmannian count)", 60);
    let a1 = QuiverData::type_a(1);
    for l in 1..=5u32 {
        let r = euler_vs_kr(&a1, 1, 0, l, 1_000_000).unwrap();
        assert!(r.pass, "A1 l={l}: {r:?}");
        assert_eq!(r.kr_dimension, (l + 1) as i64);
        assert_eq!(r.grassmannian_points, (l + 1) as i64);
    }
    let a2 = QuiverData::type_a(2);
    for i in [1, 2] {
        let r = euler_vs_kr(&a2, i, 0, 1, 1_000_000).unwrap();
        assert!(r.pass, "A2 i={i}: {r:?}");
        assert_eq!(r.kr_dimension, 3);
    }
    let a3 = QuiverData::type_a(3);
    let r = euler_vs_kr(&a3, 2, 0, 1, 1_000_000).unwrap();
    assert!(r.pass, "A3 middle: {r:?}");
    assert_eq!(r.kr_dimension, 6);
    c.finish();
}

/// 5. Every character computed in criterion 4 has exactly one ℓ-dominant
/// monomial.
#[test]
fn criterion_5_unique_dominant() {
    let c = Criterion::begin("5 (unique dominant monomial)", 10);
    let specs: Vec<(QuiverData, u32, u32)> = (1..=5)
        .map(|l| (QuiverData::type_a(1), 1, l))
        .chain([(QuiverData::type_a(2), 1, 1), (QuiverData::type_a(2), 2, 1)])
        .chain([(QuiverData::type_a(3), 2, 1)])
        .collect();
    for (quiver, i, l) in specs {
        let res = fm_qcharacter(&quiver, i, 0, l, 1_000_000).unwrap();
        assert!(res.complete);
        assert!(
            res.qchar.has_unique_dominant(),
            "{} i={i} l={l}",
            quiver.name
        );
    }
    c.finish();
}

/// 6. Stabilization of normalized KR characters: along the bottom-anchored
/// family, consecutive truncations agree through degree `min(l, 3)`, and the
/// degree-<=3 stabilized truncation is emitted.
#[test]
fn criterion_6_hj_stabilization() {
    let _guard = HEAVY.lock().unwrap();
    let c = Criterion::begin("6 (normalized character stabilization)", 30);
    let q = QuiverData::type_a(1);
    let rep = hj_limit(&q, 1, 0, 5, 3, 1_000_000).unwrap();
    for (idx, a) in rep.agreement.iter().enumerate() {
        let l = idx as i64 + 1;
        assert!(
            *a >= l.min(3),
            "truncations at l={l},{} agree only through degree {a}",
            l + 1
        );
    }
    // The emitted approximation has one term in each degree 0..=3.
    assert_eq!(rep.stabilized.len(), 4);
    for d in 0..=3i64 {
        assert_eq!(
            rep.stabilized.iter().filter(|(v, _)| v.total() == d).count(),
            1,
            "degree {d}"
        );
    }
    c.finish();
}

/// 7. Quot-scheme cell counts: the product-formula polynomial matches a
/// brute-force enumeration of compositions with recomputed cell dimensions,
/// and the Euler characteristic is the stars-and-bars binomial.
#[test]
fn criterion_7_quot_cells() {
    let c = Criterion::begin("7 (Quot cell counts)", 5);
    for w in 1..=4u32 {
        for v in 0..=6u32 {
            let (punctual, euler) = quot_poincare(w, v, true);
            let (full, euler_full) = quot_poincare(w, v, false);
            // Oracle: enumerate compositions and re-derive both polynomials.
            let comps = compositions(v, w);
            let mut punctual_oracle = qloop_core::exact::LaurentPoly::zero();
            let mut full_oracle = qloop_core::exact::LaurentPoly::zero();
            for comp in &comps {
                let base: i64 = comp
                    .iter()
                    .enumerate()
                    .map(|(r, &x)| r as i64 * x as i64)
                    .sum();
                punctual_oracle = &punctual_oracle
                    + &qloop_core::exact::LaurentPoly::term(
                        Mono::var_pow(Var::T, 2 * base),
                        BigInt::from(1),
                    );
                full_oracle = &full_oracle
                    + &qloop_core::exact::LaurentPoly::term(
                        Mono::var_pow(Var::T, 2 * (base + v as i64)),
                        BigInt::from(1),
                    );
            }
            assert_eq!(punctual, punctual_oracle, "w={w} v={v} punctual");
            assert_eq!(full, full_oracle, "w={w} v={v} full");
            let binom = qloop_core::lattice::binomial(v as u64 + w as u64 - 1, w as u64 - 1);
            assert_eq!(euler, binom);
            assert_eq!(euler_full, binom);
            assert_eq!(comps.len(), usize::try_from(binom).unwrap());
        }
    }
    c.finish();
}

/// 8. The interval criterion agrees with the socle/right-negativity
/// certificate on 20 seeded random tuple configurations over the rank-1 and
/// rank-2 quivers.
#[test]
fn criterion_8_tpkr_vs_socle() {
    let c = Criterion::begin("8 (interval criterion vs socle certificate)", 30);
    // Small deterministic LCG; seed fixed for reproducibility, overridable
    // via QLOOP_SEED.
    let seed: u64 = std::env::var("QLOOP_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0x5eed_0001);
    let mut state = seed;
    let mut next = move |bound: u64| {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 33) % bound
    };
    let quivers = [QuiverData::type_a(1), QuiverData::type_a(2)];
    let mut agreements = 0usize;
    for _ in 0..20 {
        let quiver = &quivers[next(2) as usize];
        let ntup = 1 + next(3) as usize;
        let tuples: Vec<(u32, i64, u32)> = (0..ntup)
            .map(|_| {
                let i = 1 + next(quiver.rank() as u64) as u32;
                let k = next(7) as i64 - 2;
                let len = 1 + next(3) as u32;
                (i, k, len)
            })
            .collect();
        let l = next(9) as i64 - 1;
        let interval = tpkr_criterion(&tuples, l, TpkrVariant::B);
        let cert = socle_bound_check(quiver, &tuples, l);
        assert_eq!(
            interval, cert.pass,
            "disagreement at tuples {tuples:?}, l={l}"
        );
        agreements += 1;
    }
    assert_eq!(agreements, 20);
    c.finish();
}

/// 9. The toroidal presentation: the catalogue instantiates the full
/// relation list with the cubic Serre relation and the three-factor
/// commutator prefactor, and the one-dimensional highest-weight table passes
/// every determined instance.
#[test]
fn criterion_9_toroidal_presentation() {
    let c = Criterion::begin("9 (toroidal presentation)", 5);
    let spec = PresentationSpec::toroidal(1);
    let cat = relation_catalogue(&spec);
    for id in ["B.2", "B.3", "B.4", "B.5", "B.6", "B.7"] {
        assert!(cat.iter().any(|r| r.id == id), "catalogue misses {id}");
    }
    let table = highest_weight_table(&spec, &[1]).unwrap();
    let report = check_relations(&spec, &table, 2).unwrap();
    assert_eq!(report.fail, 0, "{report}");
    assert!(report.pass > 0);
    c.finish();
}
