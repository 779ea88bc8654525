//! Sample inputs shared by the benchmarks.

use humbert_core::{q_ic, TernaryForm, UnimodularMap};

/// A mix of small reduced forms and a few unreduced conjugates.
pub fn sample_forms() -> Vec<TernaryForm> {
    let u = UnimodularMap::<3>::new([[2, 1, 0], [1, 1, 3], [0, 1, 4]]).expect("unimodular");
    let mut out = vec![q_ic(1, 4), q_ic(2, 9), q_ic(3, 17), TernaryForm::new(9, 16, 16, -16, 0, 0)];
    let conj: Vec<_> = out.iter().map(|q| q.apply(&u).expect("small coefficients")).collect();
    out.extend(conj);
    out
}
