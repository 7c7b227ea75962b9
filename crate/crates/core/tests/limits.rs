use std::time::Duration;

use coremax::maxsat::{solve, Algorithm, MaxSatConfig};
use coremax::{Formula, MaxSatError, Var};

/// Pigeons into holes: p pigeons each need a hole, holes hold one pigeon.
fn pigeonhole(pigeons: u32, holes: u32) -> Formula {
    let var = |p: u32, h: u32| Var::new(p * holes + h + 1);
    let mut f = Formula::with_vars(pigeons * holes);
    for p in 0..pigeons {
        f.add_soft((0..holes).map(|h| var(p, h).positive()).collect());
    }
    for h in 0..holes {
        for a in 0..pigeons {
            for b in a + 1..pigeons {
                f.add_hard(vec![var(a, h).negative(), var(b, h).negative()]);
            }
        }
    }
    f
}

#[test]
fn conflict_limit_reports_timeout() {
    let f = pigeonhole(7, 6);
    let config = MaxSatConfig { conflict_limit: Some(1), ..MaxSatConfig::default() };
    for algo in [Algorithm::Msu1, Algorithm::Msu2, Algorithm::Msu3, Algorithm::Linear] {
        assert!(matches!(solve(&f, algo, &config), Err(MaxSatError::Timeout)), "{algo}");
    }
}

#[test]
fn zero_timeout_reports_timeout() {
    let f = pigeonhole(3, 2);
    let config = MaxSatConfig { timeout: Some(Duration::ZERO), ..MaxSatConfig::default() };
    assert!(matches!(solve(&f, Algorithm::Msu3, &config), Err(MaxSatError::Timeout)));
}

#[test]
fn pigeonhole_leaves_one_pigeon_out() {
    let f = pigeonhole(5, 4);
    for algo in [Algorithm::Msu1, Algorithm::Msu2, Algorithm::Msu3, Algorithm::Linear, Algorithm::Brute] {
        let r = solve(&f, algo, &MaxSatConfig::default()).unwrap();
        assert_eq!((r.optimum, r.cost), (4, 1), "{algo}");
    }
}
