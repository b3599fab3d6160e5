use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::PolyEvalPort;
use crate::error::{Error, Result};
use crate::keytrack::{Bits, LinearPoly};
use crate::protocol::channel::expect_msg;
use crate::protocol::{Channel, Message, Party};

/// Additively homomorphic bit encryption: `add` decrypts to the XOR.
pub trait AdditiveHe: Send {
    fn encrypt(&mut self, bit: bool) -> Vec<u8>;
    fn add(&self, a: &[u8], b: &[u8]) -> Result<Vec<u8>>;
    fn rerandomize(&mut self, ct: &[u8]) -> Result<Vec<u8>>;
    fn decrypt(&self, ct: &[u8]) -> Result<bool>;
}

/// Insecure reference scheme: the ciphertext is the bit followed by a random
/// nonce. Only for functional testing of the port.
#[derive(Debug, Clone)]
pub struct IdentityScheme {
    rng: ChaCha8Rng,
}

impl IdentityScheme {
    const LEN: usize = 9;

    pub fn new(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(11);
        Self { rng }
    }

    fn parse(ct: &[u8]) -> Result<(bool, u64)> {
        if ct.len() != Self::LEN || ct[0] > 1 {
            return Err(Error::Scheme(format!("malformed ciphertext of {} bytes", ct.len())));
        }
        Ok((ct[0] == 1, u64::from_be_bytes(ct[1..].try_into().unwrap())))
    }

    fn build(bit: bool, nonce: u64) -> Vec<u8> {
        let mut v = Vec::with_capacity(Self::LEN);
        v.push(u8::from(bit));
        v.extend_from_slice(&nonce.to_be_bytes());
        v
    }
}

impl AdditiveHe for IdentityScheme {
    fn encrypt(&mut self, bit: bool) -> Vec<u8> {
        Self::build(bit, self.rng.random())
    }

    fn add(&self, a: &[u8], b: &[u8]) -> Result<Vec<u8>> {
        let (ba, na) = Self::parse(a)?;
        let (bb, nb) = Self::parse(b)?;
        Ok(Self::build(ba ^ bb, na ^ nb))
    }

    fn rerandomize(&mut self, ct: &[u8]) -> Result<Vec<u8>> {
        let (b, n) = Self::parse(ct)?;
        Ok(Self::build(b, n ^ self.rng.random::<u64>()))
    }

    fn decrypt(&self, ct: &[u8]) -> Result<bool> {
        Ok(Self::parse(ct)?.0)
    }
}

/// Alice encrypts her variables once per run; for each polynomial Bob adds
/// the selected ciphertexts to an encryption of `c` and Alice decrypts.
pub struct AhePort {
    scheme: Box<dyn AdditiveHe>,
    bob_cts: Option<Vec<Vec<u8>>>,
}

impl AhePort {
    pub fn new(scheme: Box<dyn AdditiveHe>) -> Self {
        Self { scheme, bob_cts: None }
    }
}

impl PolyEvalPort for AhePort {
    fn name(&self) -> &'static str {
        "ahe"
    }

    fn evaluate(&mut self, poly: &LinearPoly, x: &Bits, channel: &mut Channel) -> Result<bool> {
        if poly.n_vars() != x.len() {
            return Err(Error::LengthMismatch {
                poly: poly.n_vars(),
                vars: x.len(),
            });
        }
        if self.bob_cts.is_none() {
            let cts = x.iter().map(|b| self.scheme.encrypt(*b)).collect();
            channel.send(Party::Alice, Message::AheCiphertexts(cts));
            self.bob_cts = Some(expect_msg!(channel, Party::Bob, Message::AheCiphertexts(c) => c, "AheCiphertexts"));
        }
        let cts = self.bob_cts.as_ref().unwrap();
        if cts.len() != poly.n_vars() {
            return Err(Error::LengthMismatch {
                poly: poly.n_vars(),
                vars: cts.len(),
            });
        }
        let mut acc = self.scheme.encrypt(poly.constant());
        for i in poly.coeffs().iter_ones() {
            acc = self.scheme.add(&acc, &cts[i])?;
        }
        let acc = self.scheme.rerandomize(&acc)?;
        channel.send(Party::Bob, Message::AheResult(acc));

        let ct = expect_msg!(channel, Party::Alice, Message::AheResult(c) => c, "AheResult");
        self.scheme.decrypt(&ct)
    }
}

/// One stand-alone evaluation through `scheme`.
pub fn additive_he_evaluate(poly: &LinearPoly, x: &Bits, scheme: Box<dyn AdditiveHe>) -> Result<bool> {
    let mut port = AhePort::new(scheme);
    port.evaluate(poly, x, &mut Channel::new())
}
