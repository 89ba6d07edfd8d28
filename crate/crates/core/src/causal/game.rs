//! The two-party causal-inequality game.
//!
//! Alice flips a coin `a`; Bob flips `b` and `b′`. Each party receives a
//! system once, may read it and re-encode it, and writes down a guess: Alice
//! guesses `b` (as `x`), Bob guesses `a` (as `y`). A round is won when
//! `b′ = 0` and `x = b`, or `b′ = 1` and `y = a`, so with fair coins
//! `p_suc = ½[P(x=b|b′=0) + P(y=a|b′=1)]` is simply the fraction of won
//! rounds.
//!
//! With a definite order only the later party can read the earlier party's
//! message. The first party always receives the blank message `0`.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::rng;
use crate::{Error, Result};

/// Largest message alphabet the exhaustive search accepts.
pub const MAX_GAME_ALPHABET: usize = 4;

/// Success bound for any definite-order strategy.
pub const CAUSAL_BOUND: f64 = 0.75;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CausalOrder {
    /// A≺B: Alice acts first, Bob may read her message.
    AliceFirst,
    /// B≺A.
    BobFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Guess {
    Bit(u8),
    /// Uniformly random guess.
    Coin,
}

/// Response tables for both parties. Tables are indexed by
/// `(coins, incoming message)`, with coins `a` for Alice and `2b + b′` for Bob.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CausalGameStrategy {
    /// Probability that a round runs in the order A≺B.
    pub p_alice_first: f64,
    pub alphabet: usize,
    /// `alice_encode[a * alphabet + incoming]`
    pub alice_encode: Vec<usize>,
    /// `alice_guess[a * alphabet + incoming]`
    pub alice_guess: Vec<Guess>,
    /// `bob_encode[(2b + b′) * alphabet + incoming]`
    pub bob_encode: Vec<usize>,
    /// `bob_guess[(2b + b′) * alphabet + incoming]`
    pub bob_guess: Vec<Guess>,
}

impl CausalGameStrategy {
    /// Blank tables: every message 0, every guess `Bit(0)`.
    pub fn blank(order: CausalOrder, alphabet: usize) -> Self {
        let k = alphabet.max(1);
        Self {
            p_alice_first: if order == CausalOrder::AliceFirst {
                1.0
            } else {
                0.0
            },
            alphabet: k,
            alice_encode: vec![0; 2 * k],
            alice_guess: vec![Guess::Bit(0); 2 * k],
            bob_encode: vec![0; 4 * k],
            bob_guess: vec![Guess::Bit(0); 4 * k],
        }
    }

    /// A≺B with a one-bit message: Alice sends `a` and guesses at random,
    /// Bob answers with the bit he received.
    pub fn optimal() -> Self {
        let mut s = Self::blank(CausalOrder::AliceFirst, 2);
        for a in 0..2 {
            s.alice_encode[a * 2] = a;
            s.alice_guess[a * 2] = Guess::Coin;
        }
        for coins in 0..4 {
            for m in 0..2 {
                s.bob_guess[coins * 2 + m] = Guess::Bit(m as u8);
            }
        }
        s
    }

    /// The mirror of [`CausalGameStrategy::optimal`]: Bob sends `b` first and
    /// Alice reads it.
    pub fn optimal_bob_first() -> Self {
        let mut s = Self::blank(CausalOrder::BobFirst, 2);
        for coins in 0..4 {
            s.bob_encode[coins * 2] = coins >> 1;
            s.bob_guess[coins * 2] = Guess::Coin;
        }
        for a in 0..2 {
            for m in 0..2 {
                s.alice_guess[a * 2 + m] = Guess::Bit(m as u8);
            }
        }
        s
    }

    /// No communication and uniformly random guesses.
    pub fn random_guess() -> Self {
        let mut s = Self::blank(CausalOrder::AliceFirst, 1);
        s.alice_guess.fill(Guess::Coin);
        s.bob_guess.fill(Guess::Coin);
        s
    }

    /// Random tables with a random order mix.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, alphabet: usize) -> Self {
        let k = alphabet.max(1);
        let guess = |rng: &mut R| match rng.random_range(0..3u8) {
            2 => Guess::Coin,
            b => Guess::Bit(b),
        };
        Self {
            p_alice_first: rng.random(),
            alphabet: k,
            alice_encode: (0..2 * k).map(|_| rng.random_range(0..k)).collect(),
            alice_guess: (0..2 * k).map(|_| guess(rng)).collect(),
            bob_encode: (0..4 * k).map(|_| rng.random_range(0..k)).collect(),
            bob_guess: (0..4 * k).map(|_| guess(rng)).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.alphabet;
        if k == 0 {
            return Err(Error::Contract("message alphabet must be non-empty".into()));
        }
        if !(0.0..=1.0).contains(&self.p_alice_first) {
            return Err(Error::Contract(format!(
                "order probability {} outside [0, 1]",
                self.p_alice_first
            )));
        }
        if self.alice_encode.len() != 2 * k
            || self.alice_guess.len() != 2 * k
            || self.bob_encode.len() != 4 * k
            || self.bob_guess.len() != 4 * k
        {
            return Err(Error::Contract(
                "strategy tables do not cover their domains".into(),
            ));
        }
        if self
            .alice_encode
            .iter()
            .chain(&self.bob_encode)
            .any(|&m| m >= k)
        {
            return Err(Error::Contract(format!(
                "message outside the alphabet of size {k}"
            )));
        }
        if self
            .alice_guess
            .iter()
            .chain(&self.bob_guess)
            .any(|g| matches!(g, Guess::Bit(b) if *b > 1))
        {
            return Err(Error::Contract("guesses must be bits".into()));
        }
        Ok(())
    }

    /// Guesses `(x, y)` for one round in a fixed order.
    fn guesses(&self, order: CausalOrder, a: usize, b: usize, b_prime: usize) -> (Guess, Guess) {
        let k = self.alphabet;
        let bob = 2 * b + b_prime;
        match order {
            CausalOrder::AliceFirst => {
                let message = self.alice_encode[a * k];
                (self.alice_guess[a * k], self.bob_guess[bob * k + message])
            }
            CausalOrder::BobFirst => {
                let message = self.bob_encode[bob * k];
                (self.alice_guess[a * k + message], self.bob_guess[bob * k])
            }
        }
    }

    /// Exact success probability with fair coins.
    pub fn success_probability(&self) -> Result<f64> {
        self.validate()?;
        let hit = |g: Guess, target: usize| match g {
            Guess::Bit(v) => f64::from(u8::from(usize::from(v) == target)),
            Guess::Coin => 0.5,
        };
        let mut total = 0.0;
        for (order, weight) in [
            (CausalOrder::AliceFirst, self.p_alice_first),
            (CausalOrder::BobFirst, 1.0 - self.p_alice_first),
        ] {
            if weight == 0.0 {
                continue;
            }
            let mut wins = 0.0;
            for a in 0..2 {
                for b in 0..2 {
                    for b_prime in 0..2 {
                        let (x, y) = self.guesses(order, a, b, b_prime);
                        wins += if b_prime == 0 { hit(x, b) } else { hit(y, a) };
                    }
                }
            }
            total += weight * wins / 8.0;
        }
        Ok(total)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalGameMax {
    pub p_suc: f64,
    pub argmax: CausalGameStrategy,
    /// Deterministic strategies examined, over both orders.
    pub enumerated: u64,
}

/// Exhaustive search over deterministic definite-order strategies with a
/// message alphabet of `alphabet` symbols. Mixtures over orders and
/// strategies are convex combinations and cannot exceed the maximum.
pub fn causal_game_classical_max(alphabet: usize) -> Result<ClassicalGameMax> {
    if alphabet == 0 {
        return Err(Error::Contract("message alphabet must be non-empty".into()));
    }
    if alphabet > MAX_GAME_ALPHABET {
        return Err(Error::Capacity {
            requested: alphabet,
            max: MAX_GAME_ALPHABET,
        });
    }
    let (wins_a, table_a, count_a) = search_alice_first(alphabet);
    let (wins_b, table_b, count_b) = search_bob_first(alphabet);
    let (wins, argmax) = if wins_a >= wins_b {
        (wins_a, table_a)
    } else {
        (wins_b, table_b)
    };
    Ok(ClassicalGameMax {
        p_suc: f64::from(wins) / 8.0,
        argmax,
        enumerated: count_a + count_b,
    })
}

fn bit(table: u64, index: usize) -> usize {
    ((table >> index) & 1) as usize
}

/// A≺B: Alice's message `f(a)`, her guess `g(a)`, Bob's guess `h(b, b′, m)`.
fn search_alice_first(k: usize) -> (u32, CausalGameStrategy, u64) {
    let encoders = k * k;
    let bob_tables = 1u64 << (4 * k);
    let best = (0..encoders)
        .into_par_iter()
        .map(|enc| {
            let f = [enc % k, enc / k];
            let mut best = (0u32, 0usize, 0u64);
            for g in 0..4usize {
                for h in 0..bob_tables {
                    let mut wins = 0;
                    for a in 0..2 {
                        for b in 0..2 {
                            for b_prime in 0..2 {
                                let x = (g >> a) & 1;
                                let y = bit(h, (2 * b + b_prime) * k + f[a]);
                                wins += u32::from(if b_prime == 0 { x == b } else { y == a });
                            }
                        }
                    }
                    if wins > best.0 {
                        best = (wins, g, h);
                    }
                }
            }
            (best.0, enc, best.1, best.2)
        })
        .reduce(
            || (0, 0, 0, 0),
            |p, q| {
                if q.0 > p.0 || (q.0 == p.0 && q.1 < p.1) {
                    q
                } else {
                    p
                }
            },
        );
    let (wins, enc, g, h) = best;
    let mut s = CausalGameStrategy::blank(CausalOrder::AliceFirst, k);
    for a in 0..2 {
        s.alice_encode[a * k] = [enc % k, enc / k][a];
        s.alice_guess[a * k] = Guess::Bit(((g >> a) & 1) as u8);
    }
    for (i, slot) in s.bob_guess.iter_mut().enumerate() {
        *slot = Guess::Bit(bit(h, i) as u8);
    }
    (wins, s, (encoders as u64) * 4 * bob_tables)
}

/// B≺A: Bob's message `f(b, b′)`, his guess `g(b, b′)`, Alice's guess `h(a, m)`.
fn search_bob_first(k: usize) -> (u32, CausalGameStrategy, u64) {
    let encoders = k.pow(4);
    let alice_tables = 1u64 << (2 * k);
    let best = (0..encoders)
        .into_par_iter()
        .map(|enc| {
            let f: Vec<usize> = (0..4).map(|i| (enc / k.pow(i as u32)) % k).collect();
            let mut best = (0u32, 0usize, 0u64);
            for g in 0..16usize {
                for h in 0..alice_tables {
                    let mut wins = 0;
                    for a in 0..2 {
                        for b in 0..2 {
                            for b_prime in 0..2 {
                                let coins = 2 * b + b_prime;
                                let y = (g >> coins) & 1;
                                let x = bit(h, a * k + f[coins]);
                                wins += u32::from(if b_prime == 0 { x == b } else { y == a });
                            }
                        }
                    }
                    if wins > best.0 {
                        best = (wins, g, h);
                    }
                }
            }
            (best.0, enc, best.1, best.2)
        })
        .reduce(
            || (0, 0, 0, 0),
            |p, q| {
                if q.0 > p.0 || (q.0 == p.0 && q.1 < p.1) {
                    q
                } else {
                    p
                }
            },
        );
    let (wins, enc, g, h) = best;
    let mut s = CausalGameStrategy::blank(CausalOrder::BobFirst, k);
    for coins in 0..4 {
        s.bob_encode[coins * k] = (enc / k.pow(coins as u32)) % k;
        s.bob_guess[coins * k] = Guess::Bit(((g >> coins) & 1) as u8);
    }
    for (i, slot) in s.alice_guess.iter_mut().enumerate() {
        *slot = Guess::Bit(bit(h, i) as u8);
    }
    (wins, s, (encoders as u64) * 16 * alice_tables)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameEstimate {
    pub rounds: u64,
    pub successes: u64,
    pub p_suc: f64,
    /// Binomial standard error `√(p(1−p)/n)` at the empirical `p`.
    pub std_err: f64,
}

/// Monte Carlo rounds with fair independent coins.
pub fn causal_game_simulate(
    strategy: &CausalGameStrategy,
    rounds: u64,
    seed: u64,
) -> Result<GameEstimate> {
    strategy.validate()?;
    if rounds == 0 {
        return Err(Error::Contract("at least one round is required".into()));
    }
    let successes: u64 = rng::partition(rounds)
        .par_iter()
        .enumerate()
        .map(|(worker, &n)| {
            let mut rng = rng::stream(seed, worker as u64);
            let mut wins = 0u64;
            for _ in 0..n {
                let order = if rng.random::<f64>() < strategy.p_alice_first {
                    CausalOrder::AliceFirst
                } else {
                    CausalOrder::BobFirst
                };
                let a = usize::from(rng.random::<bool>());
                let b = usize::from(rng.random::<bool>());
                let b_prime = usize::from(rng.random::<bool>());
                let (x, y) = strategy.guesses(order, a, b, b_prime);
                let mut resolve = |g: Guess| match g {
                    Guess::Bit(v) => usize::from(v),
                    Guess::Coin => usize::from(rng.random::<bool>()),
                };
                let won = if b_prime == 0 {
                    resolve(x) == b
                } else {
                    resolve(y) == a
                };
                wins += u64::from(won);
            }
            wins
        })
        .sum();
    let p = successes as f64 / rounds as f64;
    Ok(GameEstimate {
        rounds,
        successes,
        p_suc: p,
        std_err: (p * (1.0 - p) / rounds as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_strategies() {
        assert_eq!(
            CausalGameStrategy::optimal().success_probability().unwrap(),
            0.75
        );
        assert_eq!(
            CausalGameStrategy::optimal_bob_first()
                .success_probability()
                .unwrap(),
            0.75
        );
        assert_eq!(
            CausalGameStrategy::random_guess()
                .success_probability()
                .unwrap(),
            0.5
        );
    }

    #[test]
    fn argmax_achieves_reported_value() {
        for k in 1..=3 {
            let r = causal_game_classical_max(k).unwrap();
            assert_eq!(r.argmax.success_probability().unwrap(), r.p_suc);
        }
    }

    #[test]
    fn enumeration_counts() {
        // k=2: A≺B 4·4·2⁸ plus B≺A 16·16·2⁴.
        assert_eq!(
            causal_game_classical_max(2).unwrap().enumerated,
            4096 + 4096
        );
    }

    #[test]
    fn alphabet_limits() {
        assert_eq!(
            causal_game_classical_max(0).unwrap_err().name(),
            "ContractError"
        );
        assert_eq!(
            causal_game_classical_max(5).unwrap_err().name(),
            "CapacityError"
        );
    }

    #[test]
    fn invalid_tables() {
        let mut s = CausalGameStrategy::optimal();
        s.alice_encode[0] = 7;
        assert!(s.validate().is_err());
        let mut s = CausalGameStrategy::optimal();
        s.bob_guess.pop();
        assert!(s.success_probability().is_err());
        assert!(causal_game_simulate(&CausalGameStrategy::optimal(), 0, 1).is_err());
    }

    #[test]
    fn simulation_is_seeded() {
        let s = CausalGameStrategy::optimal();
        assert_eq!(
            causal_game_simulate(&s, 5000, 7).unwrap(),
            causal_game_simulate(&s, 5000, 7).unwrap()
        );
    }
}
