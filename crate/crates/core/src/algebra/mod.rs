//! Exact word calculus for the dense *-subalgebra spanned by `S_mu S_nu^*`.
//!
//! Products reduce by prefix cancellation, which encodes `S_e^* S_e = p_{t(e)}`
//! and `S_e^* S_f = 0` for `e != f`. The relation
//! `p_v = sum_{s(e) = v} S_e S_e^*` is applied by [`Element::normal_form`],
//! which balances every term to a common level `min(|mu|, |nu|)`; at a fixed
//! level the surviving words are linearly independent, so a zero normal form
//! is the equality test.

mod element;
mod path;
mod word;

pub use element::Element;
pub use path::{paths_of_length, paths_up_to, Path};
pub use word::{words_of_bidegree, words_up_to, Word};
