//! q-character combinatorics: Y/A monomials on `I×ℤ`, the Frenkel-Mukhin
//! expansion algorithm, Kirillov-Reshetikhin data, tensor-product simplicity
//! criteria, and the stabilizing limit of normalized KR characters.

mod fm;
mod kr;
mod monomial;

pub use fm::{fm_qcharacter, sl2_simple_character, FmResult};
pub use kr::{
    drinfeld_lweight, hj_limit, kr_dimvec, kr_highest_monomial, right_negative_closure_check,
    socle_bound_check, tpkr_criterion, HjReport, KrSpec, SocleCertificate, TpkrVariant,
};
pub use monomial::{IMonomial, QChar};
