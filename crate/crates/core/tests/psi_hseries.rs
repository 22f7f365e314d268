//! Cross-checks between the psi-series, the extracted h-coefficients, and
//! independent closed forms.

use qloop_core::exact::{RatFunc, Var};
use qloop_core::lattice::{build_operator_table, lweight_series_general, psi_series_a1, Lambda};
use qloop_core::present::hseries_from_psi;
use qloop_core::quiver::QuiverData;
use qloop_core::VChar;
use std::collections::BTreeMap;

fn chi(s: u32) -> RatFunc {
    RatFunc::var(Var::Chi(s))
}

/// Independent formal-log oracle: for a rational function whose numerator
/// and denominator split into factors `(u - a)`, the `u^{-1}` coefficient
/// of `log` of its `u^{-1}`-expansion is `Σ poles - Σ zeros`, so
/// `h_1 = (Σ poles - Σ zeros)/(q - q^{-1})`.
#[test]
fn h1_matches_log_derivative_oracle() {
    // λ = (1), framing rank 1: zeros {x q^3}, poles {x q^{-1}, x q}.
    let lam = Lambda(vec![1]);
    let plus = psi_series_a1(&lam, true, 3).unwrap();
    let minus = psi_series_a1(&lam, false, 3).unwrap();
    let hs = hseries_from_psi(&plus, &minus, -1).unwrap();
    let zeros = &chi(1) * &RatFunc::q_pow(3);
    let poles = &(&chi(1) * &RatFunc::q_pow(-1)) + &(&chi(1) * &RatFunc::q_pow(1));
    let oracle = (&(&poles - &zeros) / &RatFunc::q_minus_qinv()).unwrap();
    assert_eq!(hs.h_plus[0], oracle);
    // h_1/[1]_q = h_1.
    assert_eq!(hs.h_plus_over_qint[0], hs.h_plus[0]);
}

#[test]
fn h_minus_matches_dual_oracle() {
    // For the series in powers of u the roles of zeros and poles reflect:
    // log(1 - u/a) has u^1 coefficient -1/a.
    let lam = Lambda(vec![2]);
    let plus = psi_series_a1(&lam, true, 3).unwrap();
    let minus = psi_series_a1(&lam, false, 3).unwrap();
    let hs = hseries_from_psi(&plus, &minus, -1).unwrap();
    // zeros {x q^3}, poles {x q^{-3}, x q^{-1}} for λ = (2).
    let inv = |k: i64| (&RatFunc::one() / &(&chi(1) * &RatFunc::q_pow(k))).unwrap();
    let sum_pole_inv = &inv(-3) + &inv(-1);
    let sum_zero_inv = inv(3);
    // ψ^-(u) = lead·u^w·exp(-(q-q^{-1}) Σ h_{-m} u^m), and the u^1
    // log-coefficient of each normalized factor (1 - u/a) is -1/a, so
    // h_{-1} = (Σ 1/zeros - Σ 1/poles)/(q - q^{-1}).
    let oracle = (&(&sum_zero_inv - &sum_pole_inv) / &RatFunc::q_minus_qinv()).unwrap();
    assert_eq!(hs.h_minus[0], oracle);
}

#[test]
fn empty_character_data_gives_constant_series() {
    let quiver = QuiverData::type_a(1);
    let wch = VChar::zero();
    for sign in [true, false] {
        let s = lweight_series_general(&quiver, 1, &BTreeMap::new(), &wch, 3, sign).unwrap();
        assert_eq!(s.coeff(0).unwrap(), RatFunc::one());
        for k in 1..=3i64 {
            let e = if sign { -k } else { k };
            assert!(s.coeff(e).unwrap().is_zero(), "u^{e}");
        }
    }
}

#[test]
fn weight_cap_zero_table() {
    // Single basis vector (the empty tuple): x^+ has no target, x^- no
    // source; the psi entries match the series at the empty tuple.
    let table = build_operator_table(1, 0, 2).unwrap();
    assert_eq!(table.dim, 1);
    for mat in table.gens.x_plus.values().chain(table.gens.x_minus.values()) {
        assert!(mat.is_zero());
    }
    let lam = Lambda(vec![0]);
    let plus = psi_series_a1(&lam, true, 4).unwrap();
    for p in 0..=4i64 {
        assert_eq!(
            table.gens.psi_plus.get(&(1, p)).unwrap().get(0, 0),
            plus.coeff(-p).unwrap()
        );
    }
}
