use coremax::card::{encode, CardConstraint, Relation, Strategy as Encoding};
use coremax::formula::write_dimacs_string;
use coremax::maxsat::{solve, Algorithm, MaxSatConfig};
use coremax::oracle::dpll_satisfiable;
use coremax::{evaluate, parse_dimacs_str, ClauseId, Formula, Lit, Model, SolveResult, SolverConfig, Var, VarPool};
use proptest::prelude::*;

fn clause(n: u32) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec((1..=n as i64, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v }), 0..=3)
}

fn formula(max_vars: u32, max_clauses: usize) -> impl Strategy<Value = Formula> {
    (1..=max_vars)
        .prop_flat_map(move |n| (Just(n), prop::collection::vec((clause(n), prop::bool::weighted(0.2)), 0..=max_clauses)))
        .prop_map(|(n, clauses)| {
            let mut f = Formula::with_vars(n);
            for (c, hard) in clauses {
                let lits = c.into_iter().map(|d| Lit::from_dimacs(d).unwrap()).collect();
                if hard {
                    f.add_hard(lits);
                } else {
                    f.add_soft(lits);
                }
            }
            f
        })
}

fn truth_table_sat(f: &Formula, tracked: &[ClauseId]) -> bool {
    let n = f.num_vars();
    (0..1u64 << n).any(|a| {
        let model = Model::new((0..n).map(|i| a >> i & 1 == 1).collect());
        tracked.iter().all(|&id| f.get(id).unwrap().satisfied_by(&model))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn write_then_parse_round_trips(f in formula(10, 30)) {
        let text = write_dimacs_string(&f);
        let g = parse_dimacs_str(&text).unwrap();
        prop_assert_eq!(write_dimacs_string(&g), text);
        prop_assert_eq!(g.num_soft(), f.num_soft());
        prop_assert_eq!(g.num_hard(), f.num_hard());
    }

    #[test]
    fn flipping_towards_a_literal_never_unsatisfies_its_clause(f in formula(8, 20), bits in any::<u8>(), lit in 1i64..=8) {
        let n = f.num_vars();
        let mut model = Model::new((0..n).map(|i| bits >> (i % 8) & 1 == 1).collect());
        let lit = Lit::from_dimacs(lit).unwrap();
        prop_assume!(lit.var().index() <= n);
        let before: Vec<bool> = f.clauses().map(|c| c.satisfied_by(&model)).collect();
        model.set(lit.var(), true);
        for (c, was) in f.clauses().zip(before) {
            if was && c.literals().contains(&lit) {
                prop_assert!(c.satisfied_by(&model));
            }
        }
        let eval = evaluate(&f, &model).unwrap();
        prop_assert_eq!(eval.satisfied + eval.falsified, f.num_original());
    }

    #[test]
    fn engine_agrees_with_truth_table(f in formula(14, 40)) {
        let tracked: Vec<ClauseId> = f.ids().collect();
        match coremax::solve(&f, &tracked, &SolverConfig::default()).unwrap() {
            SolveResult::Sat(model) => {
                prop_assert!(f.clauses().all(|c| c.satisfied_by(&model)));
            }
            SolveResult::Unsat(core) => {
                prop_assert!(!truth_table_sat(&f, &tracked));
                // the core alone is unsatisfiable
                prop_assert!(!truth_table_sat(&f, &core));
                let minimal = coremax::minimize_core(&f, &tracked, &core, &SolverConfig::default()).unwrap();
                prop_assert!(!truth_table_sat(&f, &minimal));
                for skip in 0..minimal.len() {
                    let rest: Vec<ClauseId> = minimal.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &id)| id).collect();
                    prop_assert!(truth_table_sat(&f, &rest));
                }
            }
        }
    }

    #[test]
    fn solving_is_deterministic(f in formula(10, 30), seed in any::<u64>()) {
        let config = MaxSatConfig { sat: SolverConfig::with_seed(seed), ..MaxSatConfig::default() };
        for algo in [Algorithm::Msu1, Algorithm::Msu2, Algorithm::Msu3, Algorithm::Linear] {
            let a = solve(&f, algo, &config).map(|r| (r.optimum, r.model, r.stats.iterations, r.stats.conflicts));
            let b = solve(&f, algo, &config).map(|r| (r.optimum, r.model, r.stats.iterations, r.stats.conflicts));
            prop_assert_eq!(format!("{a:?}"), format!("{b:?}"));
        }
    }

    #[test]
    fn encodings_project_to_the_constraint(r in 1usize..=6, k in 0usize..=7, rel in 0..3, bdd in any::<bool>(), signs in any::<u8>()) {
        let relation = [Relation::AtMost, Relation::AtLeast, Relation::Equals][rel as usize];
        let strategy = if bdd { Encoding::Bdd } else { Encoding::Pairwise };
        prop_assume!(bdd || k == 1);
        let lits: Vec<Lit> = (0..r).map(|i| Lit::new(Var::new(i as u32 + 1), signs >> i & 1 == 1)).collect();
        let constraint = CardConstraint::new(lits.clone(), relation, k).unwrap();
        let mut pool = VarPool::with_vars(r as u32);
        let enc = encode(&constraint, &mut pool, strategy).unwrap();
        for a in 0..1u32 << r {
            let count = lits.iter().enumerate().filter(|&(i, l)| (a >> i & 1 == 1) == l.is_positive()).count();
            let mut clauses = enc.clauses.clone();
            for i in 0..r {
                clauses.push(vec![Lit::new(Var::new(i as u32 + 1), a >> i & 1 == 1)]);
            }
            prop_assert_eq!(dpll_satisfiable(&clauses), constraint.holds(count));
        }
    }
}
