use super::PolyEvalPort;
use crate::error::{Error, Result};
use crate::keytrack::{Bits, LinearPoly};
use crate::protocol::channel::expect_msg;
use crate::protocol::{Channel, Message, Party, Transcript};

/// Plaintext-reveal subprotocol. Alice sends the variables in the reveal set
/// once per run; for every polynomial Bob folds those terms into the constant
/// and sends the rest of the polynomial back.
#[derive(Debug, Clone)]
pub struct Class1 {
    reveal: Vec<usize>,
    m: usize,
    /// Bob's copy of the revealed values.
    bob_known: Option<Vec<(usize, bool)>>,
}

impl Class1 {
    pub fn new(reveal: Vec<usize>, m: usize) -> Result<Self> {
        let mut seen = vec![false; m];
        for &i in &reveal {
            if i >= m || seen[i] {
                return Err(Error::RevealOutOfRange { index: i, m });
            }
            seen[i] = true;
        }
        Ok(Self {
            reveal,
            m,
            bob_known: None,
        })
    }

    /// Reveal set `{0, …, k−1}`.
    pub fn first_k(k: usize, m: usize) -> Result<Self> {
        if k > m {
            return Err(Error::RevealOutOfRange { index: k - 1, m });
        }
        Self::new((0..k).collect(), m)
    }

    pub fn k(&self) -> usize {
        self.reveal.len()
    }

    pub fn reveal_set(&self) -> &[usize] {
        &self.reveal
    }
}

impl PolyEvalPort for Class1 {
    fn name(&self) -> &'static str {
        "class1"
    }

    fn evaluate(&mut self, poly: &LinearPoly, x: &Bits, channel: &mut Channel) -> Result<bool> {
        if poly.n_vars() != self.m || x.len() != self.m {
            return Err(Error::LengthMismatch {
                poly: poly.n_vars(),
                vars: x.len(),
            });
        }
        if self.bob_known.is_none() {
            // Alice
            let revealed = self.reveal.iter().map(|&i| (i, x[i])).collect();
            channel.send(Party::Alice, Message::RevealedVars(revealed));
            // Bob
            self.bob_known = Some(expect_msg!(channel, Party::Bob, Message::RevealedVars(v) => v, "RevealedVars"));
        }

        // Bob
        let known = self.bob_known.as_ref().unwrap();
        let mut hidden = vec![true; self.m];
        let mut constant = poly.constant();
        for &(i, xi) in known {
            hidden[i] = false;
            constant ^= poly.coeff(i) & xi;
        }
        let coeffs = (0..self.m).filter(|&i| hidden[i]).map(|i| poly.coeff(i)).collect();
        channel.send(Party::Bob, Message::ReducedPoly { constant, coeffs });

        // Alice
        let (c, a) = expect_msg!(channel, Party::Alice,
            Message::ReducedPoly { constant, coeffs } => (constant, coeffs), "ReducedPoly");
        let mut in_reveal = vec![false; self.m];
        for &i in &self.reveal {
            in_reveal[i] = true;
        }
        let rest = (0..self.m).filter(|&i| !in_reveal[i]);
        if a.len() != self.m - self.reveal.len() {
            return Err(Error::LengthMismatch {
                poly: a.len(),
                vars: self.m - self.reveal.len(),
            });
        }
        Ok(rest.zip(a).fold(c, |y, (i, ai)| y ^ (ai & x[i])))
    }
}

/// One stand-alone evaluation with reveal set `reveal`.
pub fn class1_evaluate(poly: &LinearPoly, x: &Bits, reveal: &[usize]) -> Result<(bool, Transcript)> {
    let mut port = Class1::new(reveal.to_vec(), poly.n_vars())?;
    let mut ch = Channel::new();
    let y = port.evaluate(poly, x, &mut ch)?;
    Ok((y, ch.into_transcript()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(v: &[bool]) -> Bits {
        v.iter().copied().collect()
    }

    #[test]
    fn worked_example() {
        let p = LinearPoly::from_bools(true, &[true, false, true]);
        let (y, t) = class1_evaluate(&p, &bits(&[true, true, false]), &[0]).unwrap();
        assert!(!y);
        assert_eq!(t.entries()[0].message, Message::RevealedVars(vec![(0, true)]));
        assert_eq!(
            t.entries()[1].message,
            Message::ReducedPoly { constant: false, coeffs: vec![false, true] }
        );
    }

    #[test]
    fn extremes_of_k() {
        let p = LinearPoly::from_bools(false, &[true, true, false, true]);
        let x = bits(&[true, false, true, true]);
        let (y, t) = class1_evaluate(&p, &x, &[0, 1, 2, 3]).unwrap();
        assert_eq!(t.entries()[1].message, Message::ReducedPoly { constant: y, coeffs: vec![] });
        let (_, t) = class1_evaluate(&p, &x, &[]).unwrap();
        assert_eq!(t.entries()[0].message, Message::RevealedVars(vec![]));
        assert_eq!(
            t.entries()[1].message,
            Message::ReducedPoly { constant: false, coeffs: vec![true, true, false, true] }
        );
    }

    #[test]
    fn reveal_happens_once() {
        let mut port = Class1::first_k(2, 4).unwrap();
        let mut ch = Channel::new();
        let x = bits(&[true, false, true, false]);
        for _ in 0..3 {
            port.evaluate(&LinearPoly::variable(4, 2), &x, &mut ch).unwrap();
        }
        assert_eq!(ch.transcript().of_kind("RevealedVars").count(), 1);
        assert_eq!(ch.transcript().payload_bytes("ReducedPoly"), 3 * 3);
    }

    #[test]
    fn bad_reveal_sets() {
        assert!(matches!(Class1::new(vec![4], 4), Err(Error::RevealOutOfRange { index: 4, m: 4 })));
        assert!(Class1::new(vec![1, 1], 4).is_err());
        assert!(Class1::first_k(5, 4).is_err());
    }
}
