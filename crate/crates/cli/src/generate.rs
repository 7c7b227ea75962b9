use coremax::{Formula, Lit, Var};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Shape of a random instance.
#[derive(Clone, Copy, Debug)]
pub struct RandomSpec {
    pub vars: u32,
    pub clauses: usize,
    pub min_width: usize,
    pub max_width: usize,
    /// Fraction of clauses made hard; 0 gives a plain MaxSAT instance.
    pub hard_ratio: f64,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            vars: 12,
            clauses: 40,
            min_width: 1,
            max_width: 3,
            hard_ratio: 0.0,
        }
    }
}

/// Random clauses with distinct variables per clause.
pub fn random(spec: &RandomSpec, rng: &mut impl Rng) -> Formula {
    let mut f = Formula::with_vars(spec.vars);
    for _ in 0..spec.clauses {
        let width = rng.random_range(spec.min_width..=spec.max_width).min(spec.vars as usize);
        let mut vars: Vec<u32> = Vec::with_capacity(width);
        while vars.len() < width {
            let v = rng.random_range(1..=spec.vars);
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        let lits = vars.into_iter().map(|v| Lit::new(Var::new(v), rng.random_bool(0.5))).collect();
        if rng.random_bool(spec.hard_ratio) {
            f.add_hard(lits);
        } else {
            f.add_soft(lits);
        }
    }
    f
}

/// Seeded random instance.
pub fn random_seeded(spec: &RandomSpec, seed: u64) -> Formula {
    random(spec, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `x1, ¬x1 ∨ x2, …, ¬x_{r-2} ∨ x_{r-1}, ¬x_{r-1}`: `r` soft clauses whose
/// only core is the whole formula, so the optimum is `r - 1`.
pub fn chain(r: usize) -> Formula {
    assert!(r >= 2, "chain needs at least two clauses");
    let n = (r - 1) as u32;
    let mut f = Formula::with_vars(n);
    f.add_soft(vec![Var::new(1).positive()]);
    for i in 1..n {
        f.add_soft(vec![Var::new(i).negative(), Var::new(i + 1).positive()]);
    }
    f.add_soft(vec![Var::new(n).negative()]);
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use coremax::brute_force;

    #[test]
    fn chain_optimum() {
        for r in 2..8 {
            let f = chain(r);
            assert_eq!(f.num_soft(), r);
            assert_eq!(brute_force(&f).unwrap().optimum, r - 1);
        }
    }

    #[test]
    fn random_is_reproducible() {
        let spec = RandomSpec { hard_ratio: 0.3, ..RandomSpec::default() };
        let a = coremax::formula::write_dimacs_string(&random_seeded(&spec, 5));
        let b = coremax::formula::write_dimacs_string(&random_seeded(&spec, 5));
        assert_eq!(a, b);
        assert_eq!(random_seeded(&spec, 5).num_original(), 40);
    }
}
