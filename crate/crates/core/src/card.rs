//! CNF encodings of cardinality constraints `Σ lᵢ ⋈ k`.
//!
//! Two strategies are provided:
//!
//! * **pairwise**: AtMost-1 as all binary clauses `¬lᵢ ∨ ¬lⱼ`, quadratic in
//!   the number of literals; AtLeast-1 as one clause.
//! * **bdd**: the layered counter BDD of the threshold function (node
//!   `(i, c)` stands for "the literals from position `i` on satisfy the
//!   remaining bound `c`"), converted to CNF with one fresh variable per
//!   internal node. Only the implications `node ⇒ function` are emitted,
//!   which is all that asserting the root requires. Because threshold
//!   functions are monotone, one child implies the other and each node needs
//!   two clauses, one of them binary.
//!
//! A BDD encoding over `r` literals with bound `k` emits at most
//! [`BDD_CLAUSE_FACTOR`]` · r · (k + 1)` clauses.

use std::collections::BTreeSet;

use crate::error::EncodeError;
use crate::formula::{ClauseId, ClauseTag, Formula, Lit, Var, VarPool};

/// Clause-count constant of the BDD encoding: `clauses ≤ 6 · r · (k + 1)`.
pub const BDD_CLAUSE_FACTOR: u64 = 6;

/// `auto` picks the pairwise encoding for AtMost-1 up to this many literals.
pub const AUTO_PAIRWISE_THRESHOLD: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    AtMost,
    AtLeast,
    Equals,
}

impl Relation {
    pub fn holds(self, count: usize, bound: usize) -> bool {
        match self {
            Relation::AtMost => count <= bound,
            Relation::AtLeast => count >= bound,
            Relation::Equals => count == bound,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    Pairwise,
    Bdd,
    Auto,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CardConstraint {
    literals: Vec<Lit>,
    relation: Relation,
    bound: usize,
}

impl CardConstraint {
    /// Rejects empty or duplicated literal lists. Bounds above the literal
    /// count are allowed and encode to a constant.
    pub fn new(literals: Vec<Lit>, relation: Relation, bound: usize) -> Result<Self, EncodeError> {
        if literals.is_empty() {
            return Err(EncodeError::Empty);
        }
        let mut seen = BTreeSet::new();
        for &l in &literals {
            if !seen.insert(l.var()) {
                return Err(EncodeError::DuplicateLiteral(l.to_dimacs()));
            }
        }
        Ok(CardConstraint {
            literals,
            relation,
            bound,
        })
    }

    pub fn at_most(literals: Vec<Lit>, bound: usize) -> Result<Self, EncodeError> {
        Self::new(literals, Relation::AtMost, bound)
    }

    pub fn at_least(literals: Vec<Lit>, bound: usize) -> Result<Self, EncodeError> {
        Self::new(literals, Relation::AtLeast, bound)
    }

    pub fn equals(literals: Vec<Lit>, bound: usize) -> Result<Self, EncodeError> {
        Self::new(literals, Relation::Equals, bound)
    }

    pub fn literals(&self) -> &[Lit] {
        &self.literals
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Whether `true_count` true literals satisfy the constraint.
    pub fn holds(&self, true_count: usize) -> bool {
        self.relation.holds(true_count, self.bound)
    }
}

/// Clauses of an encoding together with the fresh variables it introduced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EncodedConstraint {
    pub clauses: Vec<Vec<Lit>>,
    pub fresh_vars: Vec<Var>,
}

impl EncodedConstraint {
    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Adds every clause to `formula` tagged auxiliary.
    pub fn add_to(self, formula: &mut Formula) -> Vec<ClauseId> {
        self.clauses
            .into_iter()
            .map(|c| formula.add_clause(c, ClauseTag::Auxiliary))
            .collect()
    }

    fn extend(&mut self, other: EncodedConstraint) {
        self.clauses.extend(other.clauses);
        self.fresh_vars.extend(other.fresh_vars);
    }
}

/// Size of an encoding, computed without materializing it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EncodingSize {
    pub clauses: u64,
    pub fresh_vars: u64,
}

/// `Σ lᵢ ≤ 1` as `r(r−1)/2` binary clauses, no fresh variables.
pub fn encode_pairwise_atmost1(literals: &[Lit]) -> EncodedConstraint {
    let mut clauses = Vec::with_capacity(pairwise_atmost1_size(literals.len()) as usize);
    for (i, &a) in literals.iter().enumerate() {
        for &b in &literals[i + 1..] {
            clauses.push(vec![!a, !b]);
        }
    }
    EncodedConstraint {
        clauses,
        fresh_vars: Vec::new(),
    }
}

/// Number of binary clauses of the pairwise AtMost-1 encoding over `r` literals.
pub fn pairwise_atmost1_size(r: usize) -> u64 {
    let r = r as u64;
    r * r.saturating_sub(1) / 2
}

/// Pairwise encoding of a constraint with bound 1 (AtMost, AtLeast or Equals).
pub fn encode_pairwise(constraint: &CardConstraint) -> Result<EncodedConstraint, EncodeError> {
    if constraint.bound != 1 {
        return Err(EncodeError::Unsupported(constraint.bound));
    }
    let lits = &constraint.literals;
    let mut enc = EncodedConstraint::default();
    if matches!(constraint.relation, Relation::AtLeast | Relation::Equals) {
        enc.clauses.push(lits.clone());
    }
    if matches!(constraint.relation, Relation::AtMost | Relation::Equals) {
        enc.extend(encode_pairwise_atmost1(lits));
    }
    Ok(enc)
}

/// BDD-based encoding of any relation and bound.
///
/// AtMost with `k ≥ r` yields no clauses; AtLeast with `k > r` yields the
/// empty clause; Equals is AtMost-k together with AtLeast-k.
pub fn encode_bdd(constraint: &CardConstraint, pool: &mut VarPool) -> EncodedConstraint {
    let mut sink = Emit {
        enc: EncodedConstraint::default(),
        pool,
    };
    let lits = &constraint.literals;
    let k = constraint.bound;
    match constraint.relation {
        Relation::AtMost => bdd_at_most(lits.len(), k, &mut sink, |i| lits[i]),
        Relation::AtLeast => bdd_at_least(lits.len(), k, &mut sink, |i| lits[i]),
        Relation::Equals => {
            bdd_at_most(lits.len(), k, &mut sink, |i| lits[i]);
            bdd_at_least(lits.len(), k, &mut sink, |i| lits[i]);
        }
    }
    sink.enc
}

/// Dispatches on `strategy`. `Auto` uses pairwise iff the constraint is
/// AtMost-1 over at most [`AUTO_PAIRWISE_THRESHOLD`] literals.
pub fn encode(
    constraint: &CardConstraint,
    pool: &mut VarPool,
    strategy: Strategy,
) -> Result<EncodedConstraint, EncodeError> {
    match resolve_strategy(constraint.relation, constraint.literals.len(), constraint.bound, strategy) {
        Strategy::Pairwise => encode_pairwise(constraint),
        _ => Ok(encode_bdd(constraint, pool)),
    }
}

fn resolve_strategy(relation: Relation, r: usize, k: usize, strategy: Strategy) -> Strategy {
    match strategy {
        Strategy::Auto if relation == Relation::AtMost && k == 1 && r <= AUTO_PAIRWISE_THRESHOLD => {
            Strategy::Pairwise
        }
        Strategy::Auto => Strategy::Bdd,
        s => s,
    }
}

/// Clause and fresh-variable counts of `encode` for a constraint of the
/// given shape, without building it.
pub fn encoding_size(
    relation: Relation,
    r: usize,
    k: usize,
    strategy: Strategy,
) -> Result<EncodingSize, EncodeError> {
    match resolve_strategy(relation, r, k, strategy) {
        Strategy::Pairwise => {
            if k != 1 {
                return Err(EncodeError::Unsupported(k));
            }
            let at_least = u64::from(matches!(relation, Relation::AtLeast | Relation::Equals));
            let at_most = if matches!(relation, Relation::AtMost | Relation::Equals) {
                pairwise_atmost1_size(r)
            } else {
                0
            };
            Ok(EncodingSize {
                clauses: at_least + at_most,
                fresh_vars: 0,
            })
        }
        _ => {
            let mut sink = Count::default();
            let dummy = |_| Var::new(1).positive();
            if matches!(relation, Relation::AtMost | Relation::Equals) {
                bdd_at_most(r, k, &mut sink, dummy);
            }
            if matches!(relation, Relation::AtLeast | Relation::Equals) {
                bdd_at_least(r, k, &mut sink, dummy);
            }
            Ok(sink.size)
        }
    }
}

trait Sink {
    fn fresh(&mut self) -> Lit;
    fn clause(&mut self, lits: &[Lit]);
}

struct Emit<'a> {
    enc: EncodedConstraint,
    pool: &'a mut VarPool,
}

impl Sink for Emit<'_> {
    fn fresh(&mut self) -> Lit {
        let v = self.pool.fresh();
        self.enc.fresh_vars.push(v);
        v.positive()
    }

    fn clause(&mut self, lits: &[Lit]) {
        self.enc.clauses.push(lits.to_vec());
    }
}

#[derive(Default)]
struct Count {
    size: EncodingSize,
    next: u32,
}

impl Sink for Count {
    fn fresh(&mut self) -> Lit {
        self.size.fresh_vars += 1;
        self.next = self.next.wrapping_add(1);
        Var::new(self.next.max(1)).positive()
    }

    fn clause(&mut self, _lits: &[Lit]) {
        self.size.clauses += 1;
    }
}

/// Allocates node variables layer by layer, top-down. `range(i)` gives the
/// inclusive range of non-terminal node labels in layer `i`.
fn allocate_layers<S: Sink>(
    r: usize,
    sink: &mut S,
    range: impl Fn(usize) -> Option<(usize, usize)>,
) -> Vec<Vec<Lit>> {
    (0..r)
        .map(|i| match range(i) {
            Some((lo, hi)) => (lo..=hi).map(|_| sink.fresh()).collect(),
            None => Vec::new(),
        })
        .collect()
}

/// Node `(i, c)`: at most `c` of the literals `i..r` are true.
fn bdd_at_most<S: Sink>(r: usize, k: usize, sink: &mut S, lit: impl Fn(usize) -> Lit) {
    if k >= r {
        return;
    }
    if k == 0 {
        for i in 0..r {
            sink.clause(&[!lit(i)]);
        }
        return;
    }
    // non-terminal iff c < r - i; reachable iff c >= k - i
    let range = |i: usize| {
        let lo = k.saturating_sub(i);
        let hi = k.min(r - i - 1);
        (lo <= hi).then_some((lo, hi))
    };
    let nodes = allocate_layers(r, sink, range);
    let node = |i: usize, c: usize| -> Option<Lit> {
        if i >= r {
            return None;
        }
        let (lo, hi) = range(i)?;
        (lo..=hi).contains(&c).then(|| nodes[i][c - lo])
    };
    sink.clause(&[node(0, k).expect("root is internal when 0 < k < r")]);
    for i in 0..r {
        let Some((lo, hi)) = range(i) else { continue };
        let x = lit(i);
        for c in lo..=hi {
            let v = nodes[i][c - lo];
            // x ⇒ child (i+1, c-1); that child is false when c == 0
            if c == 0 {
                sink.clause(&[!v, !x]);
            } else {
                match node(i + 1, c - 1) {
                    Some(h) => sink.clause(&[!v, !x, h]),
                    None => unreachable!("(i+1, c-1) is internal whenever (i, c) is"),
                }
            }
            // (i+1, c) is the weaker child; true terminal when c >= r-i-1
            if let Some(l) = node(i + 1, c) {
                sink.clause(&[!v, l]);
            }
        }
    }
}

/// Node `(i, need)`: at least `need` of the literals `i..r` are true.
fn bdd_at_least<S: Sink>(r: usize, k: usize, sink: &mut S, lit: impl Fn(usize) -> Lit) {
    if k == 0 {
        return;
    }
    if k > r {
        sink.clause(&[]);
        return;
    }
    // non-terminal iff 1 <= need <= r - i; reachable iff need >= k - i
    let range = |i: usize| {
        let lo = k.saturating_sub(i).max(1);
        let hi = k.min(r - i);
        (lo <= hi).then_some((lo, hi))
    };
    let nodes = allocate_layers(r, sink, range);
    let node = |i: usize, need: usize| -> Option<Lit> {
        if i >= r {
            return None;
        }
        let (lo, hi) = range(i)?;
        (lo..=hi).contains(&need).then(|| nodes[i][need - lo])
    };
    sink.clause(&[node(0, k).expect("root is internal when 0 < k <= r")]);
    for i in 0..r {
        let Some((lo, hi)) = range(i) else { continue };
        let x = lit(i);
        for need in lo..=hi {
            let v = nodes[i][need - lo];
            // ¬x ⇒ child (i+1, need); false terminal when need > r-i-1
            match node(i + 1, need) {
                Some(l) => sink.clause(&[!v, x, l]),
                None => sink.clause(&[!v, x]),
            }
            // (i+1, need-1) is the weaker child; true terminal when need == 1
            if need > 1 {
                match node(i + 1, need - 1) {
                    Some(h) => sink.clause(&[!v, h]),
                    None => unreachable!("(i+1, need-1) is internal whenever (i, need) is"),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::dpll_satisfiable;

    fn vars(r: u32) -> (Vec<Lit>, VarPool) {
        let lits = (1..=r).map(|i| Var::new(i).positive()).collect();
        (lits, VarPool::with_vars(r))
    }

    /// Exhaustive projection check of one encoding against the arithmetic constraint.
    fn projection_correct(constraint: &CardConstraint, enc: &EncodedConstraint) -> bool {
        let r = constraint.literals().len();
        for mask in 0u32..(1 << r) {
            let mut clauses = enc.clauses.clone();
            for (i, &l) in constraint.literals().iter().enumerate() {
                clauses.push(vec![if mask >> i & 1 == 1 { l } else { !l }]);
            }
            let expected = constraint.holds(mask.count_ones() as usize);
            if dpll_satisfiable(&clauses) != expected {
                return false;
            }
        }
        true
    }

    #[test]
    fn pairwise_counts() {
        let (lits, _) = vars(4);
        assert_eq!(encode_pairwise_atmost1(&lits).len(), 6);
        assert_eq!(encode_pairwise_atmost1(&lits[..1]).len(), 0);
        assert_eq!(pairwise_atmost1_size(10_000), 49_995_000);
        for r in 1..=200u32 {
            let (lits, _) = vars(r);
            let enc = encode_pairwise_atmost1(&lits);
            assert_eq!(enc.len() as u64, u64::from(r) * u64::from(r - 1) / 2);
            assert!(enc.fresh_vars.is_empty());
            assert!(enc.clauses.iter().all(|c| c.len() == 2));
        }
    }

    #[test]
    fn pairwise_rejects_larger_bounds() {
        let (lits, mut pool) = vars(3);
        let c = CardConstraint::at_most(lits, 2).unwrap();
        assert_eq!(encode_pairwise(&c), Err(EncodeError::Unsupported(2)));
        assert_eq!(
            encode(&c, &mut pool, Strategy::Pairwise),
            Err(EncodeError::Unsupported(2))
        );
        assert_eq!(
            encoding_size(Relation::AtMost, 3, 0, Strategy::Pairwise),
            Err(EncodeError::Unsupported(0))
        );
    }

    #[test]
    fn constraint_validation() {
        assert_eq!(CardConstraint::at_most(vec![], 0), Err(EncodeError::Empty));
        let x = Var::new(1);
        assert_eq!(
            CardConstraint::at_most(vec![x.positive(), x.negative()], 1),
            Err(EncodeError::DuplicateLiteral(-1))
        );
    }

    #[test]
    fn bdd_atmost1_r3() {
        let (lits, mut pool) = vars(3);
        let c = CardConstraint::at_most(lits, 1).unwrap();
        let enc = encode_bdd(&c, &mut pool);
        assert!(enc.len() as u64 <= BDD_CLAUSE_FACTOR * 3 * 2);
        assert!(projection_correct(&c, &enc));
        assert_eq!(pool.len(), 3 + enc.fresh_vars.len() as u32);
    }

    #[test]
    fn bdd_atmost0_is_units() {
        let (lits, mut pool) = vars(5);
        let c = CardConstraint::at_most(lits.clone(), 0).unwrap();
        let enc = encode_bdd(&c, &mut pool);
        let expected: Vec<Vec<Lit>> = lits.iter().map(|&l| vec![!l]).collect();
        assert_eq!(enc.clauses, expected);
        assert!(enc.fresh_vars.is_empty());
    }

    #[test]
    fn bdd_equals2_r5() {
        let (lits, mut pool) = vars(5);
        let c = CardConstraint::equals(lits, 2).unwrap();
        let enc = encode_bdd(&c, &mut pool);
        assert!(projection_correct(&c, &enc));
        let satisfying = (0u32..32).filter(|m| m.count_ones() == 2).count();
        assert_eq!(satisfying, 10);
    }

    #[test]
    fn constant_cases() {
        let (lits, mut pool) = vars(3);
        let trivially_true = CardConstraint::at_most(lits.clone(), 3).unwrap();
        assert!(encode_bdd(&trivially_true, &mut pool).is_empty());
        let trivially_false = CardConstraint::at_least(lits.clone(), 4).unwrap();
        assert_eq!(encode_bdd(&trivially_false, &mut pool).clauses, vec![Vec::<Lit>::new()]);
        let nothing = CardConstraint::at_least(lits, 0).unwrap();
        assert!(encode_bdd(&nothing, &mut pool).is_empty());
    }

    #[test]
    fn negative_literals_and_auto_dispatch() {
        let lits: Vec<Lit> = (1..=4).map(|i| Var::new(i).negative()).collect();
        let mut pool = VarPool::with_vars(4);
        let c = CardConstraint::at_most(lits, 1).unwrap();
        let auto = encode(&c, &mut pool, Strategy::Auto).unwrap();
        assert_eq!(auto, encode_pairwise(&c).unwrap());
        assert!(projection_correct(&c, &auto));
        let eq = CardConstraint::equals(c.literals().to_vec(), 1).unwrap();
        let before = pool.len();
        let bdd = encode(&eq, &mut pool, Strategy::Auto).unwrap();
        assert!(!bdd.fresh_vars.is_empty());
        assert_eq!(pool.len(), before + bdd.fresh_vars.len() as u32);
        assert!(projection_correct(&eq, &bdd));
    }

    #[test]
    fn size_report_matches_materialized() {
        for r in 1..=12usize {
            for k in 0..=r + 1 {
                for rel in [Relation::AtMost, Relation::AtLeast, Relation::Equals] {
                    let (lits, mut pool) = vars(r as u32);
                    let c = CardConstraint::new(lits, rel, k).unwrap();
                    let enc = encode_bdd(&c, &mut pool);
                    let size = encoding_size(rel, r, k, Strategy::Bdd).unwrap();
                    assert_eq!(size.clauses, enc.len() as u64, "{rel:?} r={r} k={k}");
                    assert_eq!(size.fresh_vars, enc.fresh_vars.len() as u64);
                }
            }
        }
        assert_eq!(
            encoding_size(Relation::Equals, 10_000, 1, Strategy::Pairwise)
                .unwrap()
                .clauses,
            49_995_001
        );
    }
}
