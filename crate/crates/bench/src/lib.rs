//! Inputs shared by the criterion benches.

use corpkit_core::{Alphabet, Cube, Guard, Nba};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A reproducible random NBA with `states` states over `aps` propositions.
/// Each ordered pair of states gets an edge with probability `density`,
/// guarded by one or two random cubes; about a third of the states accept.
pub fn random_nba(seed: u64, states: usize, aps: usize, density: f64) -> Nba {
    assert!(states > 0 && aps > 0 && aps <= 4);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names = ["a", "b", "c", "d"];
    let mut a = Nba::new(Alphabet::new(names.into_iter().take(aps)).expect("distinct names"));
    for _ in 0..states {
        a.add_state(rng.gen_bool(1.0 / 3.0));
    }
    a.add_initial(0);
    for p in 0..states {
        for q in 0..states {
            if rng.gen_bool(density) {
                let cubes: Vec<Cube> = (0..rng.gen_range(1..=2))
                    .map(|_| {
                        (0..aps).fold(Cube::TOP, |c, v| match rng.gen_range(0..3) {
                            0 => c.and(Cube::literal(v, true)).expect("fresh variable"),
                            1 => c.and(Cube::literal(v, false)).expect("fresh variable"),
                            _ => c,
                        })
                    })
                    .collect();
                a.add_edge(p, Guard::from_cubes(cubes), q);
            }
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_reproducible() {
        let a = random_nba(7, 5, 2, 0.3);
        let b = random_nba(7, 5, 2, 0.3);
        assert_eq!(a.describe(), b.describe());
        assert_eq!(a.num_states(), 5);
    }
}
