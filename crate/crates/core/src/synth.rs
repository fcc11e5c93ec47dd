//! Synthetic genomes for experiments and tests.

use rand::Rng;

use crate::error::{invalid, Result};
use crate::seqcore::{CircularSequence, Symbol};

/// A planted repeat: `copies` exact copies of one random segment of length `len`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Plant {
    pub len: usize,
    pub copies: usize,
}

/// Uniform i.i.d. genome of length `g`.
pub fn random_genome<R: Rng>(rng: &mut R, g: usize) -> Result<CircularSequence> {
    CircularSequence::new((0..g).map(|_| Symbol::from_index(rng.gen_range(0..4))).collect())
}

/// Random genome with the given repeats planted at random, non-overlapping
/// positions. Returns the genome and the 1-based start of every copy, grouped
/// per plant.
pub fn planted_genome<R: Rng>(rng: &mut R, g: usize, plants: &[Plant]) -> Result<(CircularSequence, Vec<Vec<usize>>)> {
    let needed: usize = plants.iter().map(|p| p.len * p.copies).sum();
    if needed > g {
        return invalid(format!("planted copies need {needed} symbols but the genome has {g}"));
    }
    let mut symbols: Vec<Symbol> = (0..g).map(|_| Symbol::from_index(rng.gen_range(0..4))).collect();
    let mut taken = vec![false; g];
    let mut starts = Vec::with_capacity(plants.len());
    for p in plants {
        let segment: Vec<Symbol> = (0..p.len).map(|_| Symbol::from_index(rng.gen_range(0..4))).collect();
        let mut mine = Vec::with_capacity(p.copies);
        for _ in 0..p.copies {
            let mut placed = false;
            for _ in 0..10_000 {
                let t = rng.gen_range(0..g);
                if (0..p.len).all(|i| !taken[(t + i) % g]) {
                    for i in 0..p.len {
                        taken[(t + i) % g] = true;
                        symbols[(t + i) % g] = segment[i];
                    }
                    mine.push(t + 1);
                    placed = true;
                    break;
                }
            }
            if !placed {
                return invalid("could not place all planted copies without overlap");
            }
        }
        mine.sort_unstable();
        starts.push(mine);
    }
    Ok((CircularSequence::new(symbols)?, starts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn plants_are_exact_copies() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let plants = [Plant { len: 30, copies: 3 }, Plant { len: 12, copies: 2 }];
        let (s, starts) = planted_genome(&mut rng, 500, &plants).unwrap();
        for (p, st) in plants.iter().zip(&starts) {
            assert_eq!(st.len(), p.copies);
            let first = s.circular_substring(st[0], p.len).unwrap();
            for &t in st {
                assert_eq!(s.circular_substring(t, p.len).unwrap(), first);
            }
        }
        assert!(planted_genome(&mut rng, 50, &[Plant { len: 30, copies: 2 }]).is_err());
    }
}
