use coremax::maxsat::{solve, Algorithm, CardMode, MaxSatConfig};
use coremax::{brute_force, evaluate, Formula, Lit, Strategy, Var};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_formula(rng: &mut ChaCha8Rng) -> Formula {
    let n = rng.random_range(1..=12u32);
    let m = rng.random_range(1..=40usize);
    let partial = rng.random_bool(0.3);
    let mut f = Formula::with_vars(n);
    for _ in 0..m {
        let width = rng.random_range(1..=3);
        let lits = (0..width)
            .map(|_| Lit::new(Var::new(rng.random_range(1..=n)), rng.random_bool(0.5)))
            .collect();
        if partial && rng.random_bool(0.2) {
            f.add_hard(lits);
        } else {
            f.add_soft(lits);
        }
    }
    f
}

#[test]
fn algorithms_agree_with_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let configs = [
        MaxSatConfig::default(),
        MaxSatConfig {
            encoding: Some(Strategy::Bdd),
            card_mode: Some(CardMode::Equals),
            ..MaxSatConfig::default()
        },
    ];
    for case in 0..300 {
        let f = random_formula(&mut rng);
        let expected = brute_force(&f).map(|r| r.optimum).ok();
        for config in &configs {
            for algo in [Algorithm::Msu1, Algorithm::Msu2, Algorithm::Msu3, Algorithm::Linear] {
                let got = solve(&f, algo, config);
                match (&got, expected) {
                    (Ok(r), Some(opt)) => {
                        assert_eq!(r.optimum, opt, "case {case} {algo}");
                        let eval = evaluate(&f, &r.model).unwrap();
                        assert_eq!(eval.hard_falsified, 0);
                        assert_eq!(r.optimum + r.cost, f.num_soft());
                    }
                    (Err(coremax::MaxSatError::HardClausesUnsat), None) => {}
                    _ => panic!("case {case} {algo}: {got:?} vs {expected:?}"),
                }
            }
        }
    }
}
