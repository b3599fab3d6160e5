//! Two-party evaluation of `y = c ⊕ ⨁ aᵢxᵢ` with Bob's coefficients, Alice's
//! variables and the output on Alice's side.

mod ahe;
mod class1;
mod dealer;

pub use ahe::{additive_he_evaluate, AdditiveHe, AhePort, IdentityScheme};
pub use class1::{class1_evaluate, Class1};
pub use dealer::{dealer_ott_evaluate, BobTables, Dealer, DealerOtt, OneTimeTable, TableShare, TableStore};

use crate::error::Result;
use crate::keytrack::{Bits, LinearPoly};
use crate::protocol::Channel;

/// A polynomial-evaluation subprotocol. Each call is one synchronous
/// exchange over `channel`; Bob's side sees only `poly`, Alice's only `x`.
pub trait PolyEvalPort: Send {
    fn name(&self) -> &'static str;

    fn evaluate(&mut self, poly: &LinearPoly, x: &Bits, channel: &mut Channel) -> Result<bool>;
}

/// Direct evaluation, for reference.
pub fn eval_plain(poly: &LinearPoly, x: &Bits) -> Result<bool> {
    poly.eval(x)
}

/// Which subprotocol a run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubprotoChoice {
    /// Reveal the first `k` variables in plaintext.
    Class1 { k: usize },
    /// Trusted-dealer one-time tables.
    Ott,
    /// Additive homomorphic encryption, insecure reference scheme.
    Ahe,
}

impl SubprotoChoice {
    pub fn name(self) -> &'static str {
        match self {
            SubprotoChoice::Class1 { .. } => "class1",
            SubprotoChoice::Ott => "ott",
            SubprotoChoice::Ahe => "ahe",
        }
    }

    /// Builds a port for `n_polys` evaluations over `m` variables.
    pub fn build(self, m: usize, n_polys: usize, seed: u64) -> Result<Box<dyn PolyEvalPort>> {
        Ok(match self {
            SubprotoChoice::Class1 { k } => Box::new(Class1::first_k(k, m)?),
            SubprotoChoice::Ott => {
                let mut dealer = Dealer::new(seed);
                Box::new(DealerOtt::provisioned(&mut dealer, m * n_polys))
            }
            SubprotoChoice::Ahe => Box::new(AhePort::new(Box::new(IdentityScheme::new(seed)))),
        })
    }
}
