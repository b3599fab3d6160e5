use std::collections::{HashMap, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::PolyEvalPort;
use crate::error::{Error, Result};
use crate::keytrack::{Bits, LinearPoly};
use crate::protocol::channel::expect_msg;
use crate::protocol::{Channel, Message, Party};

/// One party's half of a one-time table: `s_A ⊕ s_B = r_A ∧ r_B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableShare {
    pub id: u64,
    pub r: bool,
    pub s: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OneTimeTable {
    pub alice: TableShare,
    pub bob: TableShare,
}

/// Trusted dealer of one-time tables.
#[derive(Debug, Clone)]
pub struct Dealer {
    rng: ChaCha8Rng,
    next_id: u64,
}

impl Dealer {
    pub fn new(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(7);
        Self { rng, next_id: 0 }
    }

    pub fn table(&mut self) -> OneTimeTable {
        let id = self.next_id;
        self.next_id += 1;
        let (ra, rb, sa): (bool, bool, bool) = (self.rng.random(), self.rng.random(), self.rng.random());
        OneTimeTable {
            alice: TableShare { id, r: ra, s: sa },
            bob: TableShare { id, r: rb, s: sa ^ (ra & rb) },
        }
    }

    /// `count` fresh tables, split into Alice's queue and Bob's store.
    pub fn deal(&mut self, count: usize) -> (TableStore, BobTables) {
        let mut alice = TableStore::default();
        let mut bob = BobTables::default();
        for _ in 0..count {
            let t = self.table();
            alice.shares.push_back(t.alice);
            bob.shares.insert(t.bob.id, t.bob);
        }
        (alice, bob)
    }
}

/// Alice's tables, consumed in order.
#[derive(Debug, Clone, Default)]
pub struct TableStore {
    shares: VecDeque<TableShare>,
}

impl TableStore {
    pub fn available(&self) -> usize {
        self.shares.len()
    }

    pub fn take(&mut self, count: usize) -> Result<Vec<TableShare>> {
        if count > self.shares.len() {
            return Err(Error::TableShortfall {
                needed: count,
                available: self.shares.len(),
            });
        }
        Ok(self.shares.drain(..count).collect())
    }
}

/// Bob's tables, looked up by the id Alice names.
#[derive(Debug, Clone, Default)]
pub struct BobTables {
    shares: HashMap<u64, TableShare>,
    used: HashSet<u64>,
}

impl BobTables {
    pub fn available(&self) -> usize {
        self.shares.len()
    }

    /// Consumes table `id`; a second use is rejected.
    pub fn consume(&mut self, id: u64) -> Result<TableShare> {
        if self.used.contains(&id) {
            return Err(Error::TableReuse(id));
        }
        let share = self.shares.remove(&id).ok_or(Error::TableShortfall {
            needed: 1,
            available: 0,
        })?;
        self.used.insert(id);
        Ok(share)
    }
}

/// Subprotocol with distributed output built from one-time tables, one
/// table per variable.
#[derive(Debug, Clone)]
pub struct DealerOtt {
    alice: TableStore,
    bob: BobTables,
}

impl DealerOtt {
    pub fn new(alice: TableStore, bob: BobTables) -> Self {
        Self { alice, bob }
    }

    pub fn provisioned(dealer: &mut Dealer, count: usize) -> Self {
        let (alice, bob) = dealer.deal(count);
        Self::new(alice, bob)
    }

    pub fn tables_left(&self) -> usize {
        self.alice.available()
    }
}

impl PolyEvalPort for DealerOtt {
    fn name(&self) -> &'static str {
        "ott"
    }

    fn evaluate(&mut self, poly: &LinearPoly, x: &Bits, channel: &mut Channel) -> Result<bool> {
        dealer_ott_evaluate(poly, x, &mut self.alice, &mut self.bob, channel)
    }
}

/// Evaluates `poly` at `x` using one table per variable. With no variables
/// Bob simply sends the constant.
pub fn dealer_ott_evaluate(
    poly: &LinearPoly,
    x: &Bits,
    alice_tables: &mut TableStore,
    bob_tables: &mut BobTables,
    channel: &mut Channel,
) -> Result<bool> {
    let m = poly.n_vars();
    if x.len() != m {
        return Err(Error::LengthMismatch { poly: m, vars: x.len() });
    }
    if m == 0 {
        channel.send(Party::Bob, Message::FinalShare(poly.constant()));
        return Ok(expect_msg!(channel, Party::Alice, Message::FinalShare(b) => b, "FinalShare"));
    }

    // Alice
    let mine = alice_tables.take(m)?;
    let u: Vec<(u64, bool)> = mine.iter().zip(x.iter()).map(|(t, xi)| (t.id, *xi ^ t.r)).collect();
    channel.send(Party::Alice, Message::OttBits(u));

    // Bob
    let u = expect_msg!(channel, Party::Bob, Message::OttBits(u) => u, "OTTBits");
    if u.len() != m {
        return Err(Error::LengthMismatch { poly: m, vars: u.len() });
    }
    let mut v = Vec::with_capacity(m);
    let mut bob_total = poly.constant();
    for (i, &(id, ui)) in u.iter().enumerate() {
        let t = bob_tables.consume(id)?;
        v.push((id, poly.coeff(i) ^ t.r));
        bob_total ^= (ui & t.r) ^ t.s;
    }
    channel.send(Party::Bob, Message::OttBits(v));
    channel.send(Party::Bob, Message::FinalShare(bob_total));

    // Alice
    let v = expect_msg!(channel, Party::Alice, Message::OttBits(v) => v, "OTTBits");
    let fin = expect_msg!(channel, Party::Alice, Message::FinalShare(b) => b, "FinalShare");
    let mut y = fin;
    for ((t, xi), &(id, vi)) in mine.iter().zip(x.iter()).zip(&v) {
        if id != t.id {
            return Err(Error::UnexpectedMessage {
                expected: format!("table {}", t.id),
                got: format!("table {id}"),
            });
        }
        let ui = *xi ^ t.r;
        y ^= (ui & vi) ^ (vi & t.r) ^ t.s;
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn share_identity_is_exhaustive() {
        // z_A ⊕ z_B = a·x for every (a, x, r_A, r_B)
        for bits in 0..16u8 {
            let (a, x, ra, rb) = (bits & 1 == 1, bits & 2 == 2, bits & 4 == 4, bits & 8 == 8);
            for sa in [false, true] {
                let sb = sa ^ (ra & rb);
                let (u, v) = (x ^ ra, a ^ rb);
                let za = (u & v) ^ (v & ra) ^ sa;
                let zb = (u & rb) ^ sb;
                assert_eq!(za ^ zb, a & x);
            }
        }
    }

    #[test]
    fn zero_table_example() {
        let mut alice = TableStore::default();
        let mut bob = BobTables::default();
        alice.shares.push_back(TableShare { id: 0, r: false, s: false });
        bob.shares.insert(0, TableShare { id: 0, r: false, s: false });
        let mut ch = Channel::new();
        let p = LinearPoly::from_bools(false, &[true]);
        let x: Bits = [true].into_iter().collect();
        assert!(dealer_ott_evaluate(&p, &x, &mut alice, &mut bob, &mut ch).unwrap());
        let msgs: Vec<_> = ch.transcript().entries().iter().map(|e| e.message.clone()).collect();
        assert_eq!(
            msgs,
            [
                Message::OttBits(vec![(0, true)]),
                Message::OttBits(vec![(0, true)]),
                Message::FinalShare(false)
            ]
        );
    }

    #[test]
    fn constant_needs_no_tables() {
        let mut ott = DealerOtt::new(TableStore::default(), BobTables::default());
        let mut ch = Channel::new();
        assert!(ott.evaluate(&LinearPoly::constant_poly(0, true), &Bits::new(), &mut ch).unwrap());
        assert_eq!(ch.transcript().len(), 1);
    }

    #[test]
    fn tables_are_correlated_and_unique() {
        let mut d = Dealer::new(1);
        let mut ids = HashSet::new();
        for _ in 0..200 {
            let t = d.table();
            assert_eq!(t.alice.s ^ t.bob.s, t.alice.r & t.bob.r);
            assert!(ids.insert(t.alice.id));
        }
    }

    #[test]
    fn reuse_and_shortfall() {
        let mut d = Dealer::new(2);
        let (mut alice, mut bob) = d.deal(3);
        bob.consume(1).unwrap();
        assert_eq!(bob.consume(1), Err(Error::TableReuse(1)));
        assert_eq!(alice.take(4), Err(Error::TableShortfall { needed: 4, available: 3 }));
        let mut ott = DealerOtt::provisioned(&mut d, 2);
        let mut ch = Channel::new();
        let x: Bits = [true, false, true].into_iter().collect();
        assert!(matches!(
            ott.evaluate(&LinearPoly::zero(3), &x, &mut ch),
            Err(Error::TableShortfall { needed: 3, available: 2 })
        ));
    }

    #[test]
    fn random_polys_match_reference() {
        let mut d = Dealer::new(3);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut ott = DealerOtt::provisioned(&mut d, 5 * 1000);
        let mut ch = Channel::new();
        for _ in 0..1000 {
            let a: Vec<bool> = (0..5).map(|_| rng.random()).collect();
            let p = LinearPoly::from_bools(rng.random(), &a);
            let x: Bits = (0..5).map(|_| rng.random::<bool>()).collect();
            assert_eq!(ott.evaluate(&p, &x, &mut ch).unwrap(), p.eval(&x).unwrap());
        }
        assert_eq!(ott.tables_left(), 0);
    }
}
