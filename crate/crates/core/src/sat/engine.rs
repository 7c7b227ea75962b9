//! Conflict-driven clause learning search with assumptions.
//!
//! Two-watched-literal propagation, first-UIP learning with local clause
//! minimization, VSIDS decisions with phase saving, geometric restarts and
//! activity-based learned clause deletion. When the assumptions are
//! inconsistent, [`Engine::solve`] reports the subset of assumptions that
//! participated in the final conflict.

use std::ops::Not;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::heap::VarHeap;
use super::SolverConfig;

/// Engine literal: `2 * var + negated`, variables 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ELit(u32);

impl ELit {
    pub fn new(var: u32, positive: bool) -> ELit {
        ELit(var << 1 | u32::from(!positive))
    }

    pub fn var(self) -> u32 {
        self.0 >> 1
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    fn idx(self) -> usize {
        self.0 as usize
    }
}

impl Not for ELit {
    type Output = ELit;

    fn not(self) -> ELit {
        ELit(self.0 ^ 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum LBool {
    True,
    False,
    Undef,
}

const NO_REASON: u32 = u32::MAX;

#[derive(Clone, Copy, Debug)]
struct Watcher {
    cref: u32,
    blocker: ELit,
}

#[derive(Clone, Debug)]
struct StoredClause {
    lits: Vec<ELit>,
    learnt: bool,
    deleted: bool,
    activity: f64,
}

/// Outcome of one call to [`Engine::solve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Answer {
    Sat,
    /// The assumptions that took part in the refutation (empty if the clause
    /// database is unsatisfiable on its own).
    Unsat(Vec<ELit>),
    /// Conflict budget or deadline exhausted.
    Unknown,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub learned: u64,
    pub deleted: u64,
}

pub struct Engine {
    clauses: Vec<StoredClause>,
    learnts: Vec<u32>,
    watches: Vec<Vec<Watcher>>,
    assigns: Vec<LBool>,
    level: Vec<u32>,
    reason: Vec<u32>,
    polarity: Vec<bool>,
    activity: Vec<f64>,
    seen: Vec<bool>,
    heap: VarHeap,
    trail: Vec<ELit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    var_inc: f64,
    cla_inc: f64,
    ok: bool,
    model: Vec<bool>,
    rng: ChaCha8Rng,
    config: SolverConfig,
    pub stats: EngineStats,
}

impl Engine {
    pub fn new(config: SolverConfig) -> Engine {
        Engine {
            clauses: Vec::new(),
            learnts: Vec::new(),
            watches: Vec::new(),
            assigns: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            polarity: Vec::new(),
            activity: Vec::new(),
            seen: Vec::new(),
            heap: VarHeap::default(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            var_inc: 1.0,
            cla_inc: 1.0,
            ok: true,
            model: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            config,
            stats: EngineStats::default(),
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.assigns.len() as u32
    }

    pub fn new_var(&mut self) -> u32 {
        let v = self.assigns.len() as u32;
        self.assigns.push(LBool::Undef);
        self.level.push(0);
        self.reason.push(NO_REASON);
        self.polarity.push(false);
        self.activity.push(0.0);
        self.seen.push(false);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.heap.grow(self.assigns.len());
        self.heap.insert(v, &self.activity);
        v
    }

    pub fn ensure_vars(&mut self, count: u32) {
        while self.num_vars() < count {
            self.new_var();
        }
    }

    /// `false` once the clause database is known to be unsatisfiable.
    pub fn is_ok(&self) -> bool {
        self.ok
    }

    /// Adds a problem clause at decision level 0. Returns `false` if the
    /// database became trivially unsatisfiable.
    pub fn add_clause(&mut self, lits: &[ELit]) -> bool {
        debug_assert!(self.trail_lim.is_empty());
        if !self.ok {
            return false;
        }
        let mut c: Vec<ELit> = lits.to_vec();
        if let Some(max) = c.iter().map(|l| l.var()).max() {
            self.ensure_vars(max + 1);
        }
        c.sort_unstable();
        c.dedup();
        let mut kept = Vec::with_capacity(c.len());
        for (i, &l) in c.iter().enumerate() {
            if i + 1 < c.len() && c[i + 1] == !l {
                return true; // tautology
            }
            match self.value(l) {
                LBool::True => return true,
                LBool::False => {}
                LBool::Undef => kept.push(l),
            }
        }
        match kept.len() {
            0 => {
                self.ok = false;
                false
            }
            1 => {
                self.enqueue(kept[0], NO_REASON);
                if self.propagate().is_some() {
                    self.ok = false;
                }
                self.ok
            }
            _ => {
                self.attach(kept, false);
                true
            }
        }
    }

    /// Value of a variable in the last satisfying assignment.
    pub fn model_value(&self, var: u32) -> bool {
        self.model.get(var as usize).copied().unwrap_or(false)
    }

    pub fn model(&self) -> &[bool] {
        &self.model
    }

    pub fn solve(&mut self, assumptions: &[ELit], deadline: Option<Instant>) -> Answer {
        self.model.clear();
        if !self.ok {
            return Answer::Unsat(Vec::new());
        }
        if let Some(max) = assumptions.iter().map(|l| l.var()).max() {
            self.ensure_vars(max + 1);
        }
        let mut max_learnts = (self.clauses.len() as f64 * self.config.learnt_size_factor)
            .max(self.config.min_learnts as f64);
        let mut restart_limit = self.config.restart_first as f64;
        let start_conflicts = self.stats.conflicts;
        let answer = loop {
            match self.search(
                restart_limit as u64,
                max_learnts as usize,
                assumptions,
                start_conflicts,
                deadline,
            ) {
                Some(a) => break a,
                None => {
                    self.stats.restarts += 1;
                    restart_limit *= self.config.restart_inc;
                    max_learnts *= self.config.learnt_size_inc;
                }
            }
        };
        if answer == Answer::Sat {
            self.model = (0..self.num_vars())
                .map(|v| self.assigns[v as usize] == LBool::True)
                .collect();
        }
        self.cancel_until(0);
        answer
    }

    fn budget_exhausted(&self, start_conflicts: u64, deadline: Option<Instant>) -> bool {
        if let Some(budget) = self.config.conflict_budget {
            if self.stats.conflicts - start_conflicts >= budget {
                return true;
            }
        }
        if let Some(d) = deadline {
            if Instant::now() >= d {
                return true;
            }
        }
        false
    }

    /// Runs until a restart is due (`None`) or an answer is found.
    fn search(
        &mut self,
        conflict_limit: u64,
        max_learnts: usize,
        assumptions: &[ELit],
        start_conflicts: u64,
        deadline: Option<Instant>,
    ) -> Option<Answer> {
        let mut conflicts_here = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts_here += 1;
                if self.trail_lim.is_empty() {
                    self.ok = false;
                    return Some(Answer::Unsat(Vec::new()));
                }
                let (learnt, bt_level) = self.analyze(confl);
                self.cancel_until(bt_level);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], NO_REASON);
                } else {
                    let asserting = learnt[0];
                    let cref = self.attach(learnt, true);
                    self.bump_clause(cref);
                    self.enqueue(asserting, cref);
                }
                self.stats.learned += 1;
                self.var_inc /= self.config.var_decay;
                self.cla_inc /= self.config.clause_decay;
                let over_budget = self
                    .config
                    .conflict_budget
                    .is_some_and(|b| self.stats.conflicts - start_conflicts >= b);
                if over_budget
                    || (self.stats.conflicts.is_multiple_of(256)
                        && self.budget_exhausted(start_conflicts, deadline))
                {
                    self.cancel_until(0);
                    return Some(Answer::Unknown);
                }
            } else {
                if conflicts_here >= conflict_limit {
                    self.cancel_until(0);
                    if self.budget_exhausted(start_conflicts, deadline) {
                        return Some(Answer::Unknown);
                    }
                    return None;
                }
                if self.learnts.len() >= max_learnts + self.trail.len() {
                    self.reduce_db();
                }
                let mut next = None;
                while self.trail_lim.len() < assumptions.len() {
                    let p = assumptions[self.trail_lim.len()];
                    match self.value(p) {
                        LBool::True => self.trail_lim.push(self.trail.len()),
                        LBool::False => {
                            let core = self.analyze_final(p);
                            return Some(Answer::Unsat(core));
                        }
                        LBool::Undef => {
                            next = Some(p);
                            break;
                        }
                    }
                }
                let next = match next {
                    Some(p) => p,
                    None => {
                        self.stats.decisions += 1;
                        match self.pick_branch() {
                            Some(p) => p,
                            None => return Some(Answer::Sat),
                        }
                    }
                };
                self.trail_lim.push(self.trail.len());
                self.enqueue(next, NO_REASON);
            }
        }
    }

    fn value(&self, l: ELit) -> LBool {
        match self.assigns[l.var() as usize] {
            LBool::Undef => LBool::Undef,
            LBool::True if l.is_positive() => LBool::True,
            LBool::False if !l.is_positive() => LBool::True,
            _ => LBool::False,
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, l: ELit, reason: u32) {
        let v = l.var() as usize;
        debug_assert_eq!(self.assigns[v], LBool::Undef);
        self.assigns[v] = if l.is_positive() { LBool::True } else { LBool::False };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn attach(&mut self, lits: Vec<ELit>, learnt: bool) -> u32 {
        let cref = self.clauses.len() as u32;
        self.watches[(!lits[0]).idx()].push(Watcher {
            cref,
            blocker: lits[1],
        });
        self.watches[(!lits[1]).idx()].push(Watcher {
            cref,
            blocker: lits[0],
        });
        self.clauses.push(StoredClause {
            lits,
            learnt,
            deleted: false,
            activity: 0.0,
        });
        if learnt {
            self.learnts.push(cref);
        }
        cref
    }

    /// Unit propagation; returns the conflicting clause, if any.
    fn propagate(&mut self) -> Option<u32> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[p.idx()]);
            let (mut i, mut j) = (0, 0);
            while i < ws.len() {
                let w = ws[i];
                if self.value(w.blocker) == LBool::True {
                    ws[j] = w;
                    j += 1;
                    i += 1;
                    continue;
                }
                i += 1;
                let cref = w.cref;
                let lits = &mut self.clauses[cref as usize].lits;
                if lits[0] == false_lit {
                    lits.swap(0, 1);
                }
                let first = lits[0];
                let nw = Watcher {
                    cref,
                    blocker: first,
                };
                if first != w.blocker && value_of(&self.assigns, first) == LBool::True {
                    ws[j] = nw;
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..lits.len() {
                    if value_of(&self.assigns, lits[k]) != LBool::False {
                        lits.swap(1, k);
                        let watch_on = !lits[1];
                        self.watches[watch_on.idx()].push(nw);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = nw;
                j += 1;
                if value_of(&self.assigns, first) == LBool::False {
                    conflict = Some(cref);
                    self.qhead = self.trail.len();
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, cref);
                }
            }
            ws.truncate(j);
            self.watches[p.idx()] = ws;
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    /// First-UIP conflict analysis. Returns the learned clause (asserting
    /// literal first, highest-level remaining literal second) and the
    /// backjump level.
    fn analyze(&mut self, mut confl: u32) -> (Vec<ELit>, u32) {
        let mut learnt: Vec<ELit> = vec![ELit(0)];
        let mut path_count = 0;
        let mut p: Option<ELit> = None;
        let mut index = self.trail.len();
        let current = self.decision_level();
        loop {
            if self.clauses[confl as usize].learnt {
                self.bump_clause(confl);
            }
            let start = usize::from(p.is_some());
            let len = self.clauses[confl as usize].lits.len();
            for k in start..len {
                let q = self.clauses[confl as usize].lits[k];
                let v = q.var() as usize;
                if !self.seen[v] && self.level[v] > 0 {
                    self.bump_var(q.var());
                    self.seen[v] = true;
                    if self.level[v] >= current {
                        path_count += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var() as usize] {
                    break;
                }
            }
            let lit = self.trail[index];
            p = Some(lit);
            confl = self.reason[lit.var() as usize];
            self.seen[lit.var() as usize] = false;
            path_count -= 1;
            if path_count == 0 {
                break;
            }
        }
        learnt[0] = !p.expect("conflict has a UIP");

        // drop literals implied by the others through their reason clause
        let mut minimized = vec![learnt[0]];
        for &l in &learnt[1..] {
            let r = self.reason[l.var() as usize];
            let redundant = r != NO_REASON
                && self.clauses[r as usize].lits[1..].iter().all(|q| {
                    let v = q.var() as usize;
                    self.seen[v] || self.level[v] == 0
                });
            if !redundant {
                minimized.push(l);
            }
        }
        for &l in &learnt {
            self.seen[l.var() as usize] = false;
        }
        let mut learnt = minimized;

        let bt_level = if learnt.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for k in 2..learnt.len() {
                if self.level[learnt[k].var() as usize] > self.level[learnt[max_i].var() as usize] {
                    max_i = k;
                }
            }
            learnt.swap(1, max_i);
            self.level[learnt[1].var() as usize]
        };
        (learnt, bt_level)
    }

    /// Collects the assumptions responsible for `failed` being false.
    fn analyze_final(&mut self, failed: ELit) -> Vec<ELit> {
        let mut out = vec![failed];
        let v = failed.var() as usize;
        if self.level[v] == 0 {
            return out;
        }
        self.seen[v] = true;
        let start = self.trail_lim[0];
        for i in (start..self.trail.len()).rev() {
            let lit = self.trail[i];
            let x = lit.var() as usize;
            if !self.seen[x] {
                continue;
            }
            let r = self.reason[x];
            if r == NO_REASON {
                debug_assert!(self.level[x] > 0);
                out.push(lit);
            } else {
                for k in 1..self.clauses[r as usize].lits.len() {
                    let q = self.clauses[r as usize].lits[k];
                    if self.level[q.var() as usize] > 0 {
                        self.seen[q.var() as usize] = true;
                    }
                }
            }
            self.seen[x] = false;
        }
        self.seen[v] = false;
        out
    }

    fn cancel_until(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level as usize];
        for i in (lim..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var() as usize;
            self.assigns[v] = LBool::Undef;
            self.reason[v] = NO_REASON;
            self.polarity[v] = l.is_positive();
            self.heap.insert(l.var(), &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level as usize);
        self.qhead = lim;
    }

    fn pick_branch(&mut self) -> Option<ELit> {
        let mut next: Option<u32> = None;
        if self.config.random_var_freq > 0.0
            && !self.heap.is_empty()
            && self.rng.random::<f64>() < self.config.random_var_freq
        {
            let v = self.rng.random_range(0..self.num_vars());
            if self.assigns[v as usize] == LBool::Undef {
                next = Some(v);
            }
        }
        while next.is_none() {
            let v = self.heap.pop(&self.activity)?;
            if self.assigns[v as usize] == LBool::Undef {
                next = Some(v);
            }
        }
        let v = next?;
        Some(ELit::new(v, self.polarity[v as usize]))
    }

    fn bump_var(&mut self, v: u32) {
        let a = &mut self.activity[v as usize];
        *a += self.var_inc;
        if *a > 1e100 {
            for x in self.activity.iter_mut() {
                *x *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.increased(v, &self.activity);
    }

    fn bump_clause(&mut self, cref: u32) {
        let c = &mut self.clauses[cref as usize];
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for &l in &self.learnts {
                self.clauses[l as usize].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    fn locked(&self, cref: u32) -> bool {
        let first = self.clauses[cref as usize].lits[0];
        self.reason[first.var() as usize] == cref && self.value(first) == LBool::True
    }

    /// Deletes roughly half of the learned clauses, least active first.
    fn reduce_db(&mut self) {
        let mut order = std::mem::take(&mut self.learnts);
        order.sort_by(|&a, &b| {
            let (x, y) = (&self.clauses[a as usize], &self.clauses[b as usize]);
            x.activity.total_cmp(&y.activity).then(a.cmp(&b))
        });
        let half = order.len() / 2;
        let extra_lim = self.cla_inc / order.len().max(1) as f64;
        let mut kept = Vec::with_capacity(order.len());
        let mut removed_any = false;
        for (i, &cref) in order.iter().enumerate() {
            let c = &self.clauses[cref as usize];
            let removable = c.lits.len() > 2
                && !self.locked(cref)
                && (i < half || c.activity < extra_lim);
            if removable {
                let c = &mut self.clauses[cref as usize];
                c.deleted = true;
                c.lits = Vec::new();
                self.stats.deleted += 1;
                removed_any = true;
            } else {
                kept.push(cref);
            }
        }
        kept.sort_unstable();
        self.learnts = kept;
        if removed_any {
            let clauses = &self.clauses;
            for ws in self.watches.iter_mut() {
                ws.retain(|w| !clauses[w.cref as usize].deleted);
            }
        }
    }
}

fn value_of(assigns: &[LBool], l: ELit) -> LBool {
    match assigns[l.var() as usize] {
        LBool::Undef => LBool::Undef,
        LBool::True if l.is_positive() => LBool::True,
        LBool::False if !l.is_positive() => LBool::True,
        _ => LBool::False,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(d: i32) -> ELit {
        ELit::new(d.unsigned_abs() - 1, d > 0)
    }

    fn engine_with(clauses: &[&[i32]]) -> Engine {
        let mut e = Engine::new(SolverConfig::default());
        for c in clauses {
            let lits: Vec<ELit> = c.iter().map(|&d| lit(d)).collect();
            e.add_clause(&lits);
        }
        e
    }

    #[test]
    fn unit_propagation_model() {
        let mut e = engine_with(&[&[1], &[-1, 2]]);
        assert_eq!(e.solve(&[], None), Answer::Sat);
        assert!(e.model_value(0));
        assert!(e.model_value(1));
    }

    #[test]
    fn empty_clause_is_unsat() {
        let mut e = engine_with(&[&[1, 2], &[]]);
        assert!(!e.is_ok());
        assert_eq!(e.solve(&[], None), Answer::Unsat(vec![]));
    }

    #[test]
    fn pigeonhole_3_into_2() {
        // p_{i,h}: pigeon i in hole h, var = 2*i + h + 1
        let p = |i: i32, h: i32| 2 * i + h + 1;
        let mut clauses: Vec<Vec<i32>> = (0..3).map(|i| vec![p(i, 0), p(i, 1)]).collect();
        for h in 0..2 {
            for a in 0..3 {
                for b in a + 1..3 {
                    clauses.push(vec![-p(a, h), -p(b, h)]);
                }
            }
        }
        let refs: Vec<&[i32]> = clauses.iter().map(Vec::as_slice).collect();
        let mut e = engine_with(&refs);
        assert_eq!(e.solve(&[], None), Answer::Unsat(vec![]));
        assert!(e.stats.conflicts > 0);
    }

    #[test]
    fn failed_assumptions() {
        // selectors 3 and 4 guard (x1) and (-x1); selector 5 guards (x2)
        let mut e = engine_with(&[&[1, -3], &[-1, -4], &[2, -5]]);
        let answer = e.solve(&[lit(3), lit(4), lit(5)], None);
        match answer {
            Answer::Unsat(mut core) => {
                core.sort();
                assert_eq!(core, vec![lit(3), lit(4)]);
            }
            other => panic!("expected UNSAT, got {other:?}"),
        }
        // still usable afterwards
        assert_eq!(e.solve(&[lit(3), lit(5)], None), Answer::Sat);
        assert!(e.model_value(0));
    }

    #[test]
    fn conflict_budget_reports_unknown() {
        let p = |i: i32, h: i32| 4 * i + h + 1;
        let mut clauses: Vec<Vec<i32>> = (0..5).map(|i| (0..4).map(|h| p(i, h)).collect()).collect();
        for h in 0..4 {
            for a in 0..5 {
                for b in a + 1..5 {
                    clauses.push(vec![-p(a, h), -p(b, h)]);
                }
            }
        }
        let config = SolverConfig {
            conflict_budget: Some(1),
            ..SolverConfig::default()
        };
        let mut e = Engine::new(config);
        for c in &clauses {
            let lits: Vec<ELit> = c.iter().map(|&d| lit(d)).collect();
            e.add_clause(&lits);
        }
        assert_eq!(e.solve(&[], None), Answer::Unknown);
    }
}
