//! Greedy clause construction over tuple bindings.
//!
//! A clause under construction keeps one tuple per binding of its
//! variables that extends a training example. Adding a literal replaces
//! each tuple by its extensions; tuples without extensions are dropped.

use std::cmp::Reverse;
use std::collections::BTreeSet;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::LearnError;
use crate::eval::{CLit, Evaluator, Frame, VarMap};
use crate::foil::candidates::Candidate;
use crate::foil::gain::{information_gain, max_gain_bound, GainState};
use crate::foil::{Counters, LearnConfig, TraceLine};
use crate::store::{ConstId, FactStore, TypeId, TypedSignature};
use crate::syntax::{HornClause, Literal, Term, Variable};
use crate::value::Constant;

/// Clause variable names: `x, y, z, w, u, v`, then `v6, v7, ...`.
pub fn var_name(i: usize) -> String {
    const NAMES: [&str; 6] = ["x", "y", "z", "w", "u", "v"];
    NAMES.get(i).map_or_else(|| format!("v{i}"), |s| s.to_string())
}

/// One way to extend the clause body.
#[derive(Clone, Debug)]
pub(crate) struct Move {
    /// Literals whose conjunction is scored.
    pub literals: Vec<Literal>,
    /// Replaces `literals` in the clause when this move wins.
    pub commit: Option<Vec<Literal>>,
    /// Lower ranks win gain ties.
    pub rank: u8,
    /// Set for single-literal moves; enables bound pruning.
    pub candidate: Option<Candidate>,
}

#[derive(Clone, Debug)]
struct Tuple {
    origin: usize,
    frame: Frame,
}

pub(crate) struct ClauseState {
    pub vars: Vec<Variable>,
    /// Variables bound in every tuple, in introduction order.
    pub usable: Vec<usize>,
    pub body: Vec<Literal>,
    pos: Vec<Tuple>,
    neg: Vec<Tuple>,
}

impl ClauseState {
    pub fn old_vars(&self) -> Vec<Variable> {
        self.usable.iter().map(|&i| self.vars[i].clone()).collect()
    }

    pub fn old_types(&self) -> Vec<String> {
        self.usable.iter().map(|&i| self.vars[i].dtype.clone()).collect()
    }

    fn covered(tuples: &[Tuple]) -> BTreeSet<usize> {
        tuples.iter().map(|t| t.origin).collect()
    }
}

struct Compiled {
    lits: Vec<CLit>,
    names: Vec<String>,
    types: Vec<TypeId>,
}

struct Chosen {
    mv: Move,
    compiled: Compiled,
    state: GainState,
    gain: f64,
}

pub(crate) type MoveSource<'a, 'kb> = dyn FnMut(&mut Searcher<'kb>, &ClauseState) -> Result<Vec<Move>, LearnError> + 'a;

pub(crate) struct Searcher<'kb> {
    pub ev: Evaluator<'kb>,
    pub config: LearnConfig,
    pub counters: Counters,
    pub trace: Vec<TraceLine>,
    pub head: Literal,
    head_vars: Vec<Variable>,
    pos: Vec<Vec<ConstId>>,
    neg: Vec<Vec<ConstId>>,
    started: Instant,
    clause_no: usize,
}

impl<'kb> Searcher<'kb> {
    pub fn new(
        kb: &'kb FactStore,
        target: &TypedSignature,
        pos: &[Vec<Constant>],
        neg: &[Vec<Constant>],
        config: LearnConfig,
    ) -> Result<Self, LearnError> {
        let mut ev = Evaluator::with_typing(kb, false);
        let head_vars: Vec<Variable> = target
            .arg_types()
            .iter()
            .enumerate()
            .map(|(i, t)| Variable::new(var_name(i), t.clone()))
            .collect();
        let head = Literal::new(
            target.predicate(),
            head_vars.iter().map(|v| Term::Var(v.clone())).collect(),
        );
        let mut intern = |ex: &[Vec<Constant>]| -> Result<Vec<Vec<ConstId>>, LearnError> {
            ex.iter()
                .map(|t| t.iter().map(|c| ev.intern(c).map_err(LearnError::from)).collect())
                .collect()
        };
        let (pos, neg) = (intern(pos)?, intern(neg)?);
        Ok(Searcher {
            ev,
            config,
            counters: Counters::default(),
            trace: Vec::new(),
            head,
            head_vars,
            pos,
            neg,
            started: Instant::now(),
            clause_no: 0,
        })
    }

    pub fn kb(&self) -> &'kb FactStore {
        self.ev.kb()
    }

    fn check_time(&self) -> Result<(), LearnError> {
        match self.config.time_budget {
            Some(b) if self.started.elapsed() > b => Err(LearnError::TimeBudgetExceeded),
            _ => Ok(()),
        }
    }

    pub(crate) fn initial_state(&self, remaining: &[usize]) -> ClauseState {
        let frame = |ids: &Vec<ConstId>| ids.iter().map(|&c| Some(c)).collect::<Frame>();
        ClauseState {
            vars: self.head_vars.clone(),
            usable: (0..self.head_vars.len()).collect(),
            body: Vec::new(),
            pos: remaining
                .iter()
                .map(|&i| Tuple { origin: i, frame: frame(&self.pos[i]) })
                .collect(),
            neg: self
                .neg
                .iter()
                .enumerate()
                .map(|(i, ids)| Tuple { origin: i, frame: frame(ids) })
                .collect(),
        }
    }

    fn compile(&mut self, st: &ClauseState, lits: &[Literal]) -> Result<Compiled, LearnError> {
        let mut vm = VarMap::default();
        for v in &st.vars {
            let tid = self.kb().type_id(&v.dtype)?;
            vm.push(&v.name, tid);
        }
        let mut out = Vec::with_capacity(lits.len());
        for l in lits {
            out.push(self.ev.compile_literal(l, &mut vm)?);
        }
        out.sort_by_key(|l| l.negated);
        Ok(Compiled {
            lits: out,
            names: vm.names,
            types: vm.types,
        })
    }

    fn extend(&self, c: &Compiled, t: &Tuple) -> Result<Vec<Frame>, LearnError> {
        let mut f = t.frame.clone();
        f.resize(c.types.len(), None);
        Ok(self.ev.solutions(&c.lits, &f, &c.types)?)
    }

    /// Number of extensions of `tuples`, and how many tuples have one.
    fn count(&self, c: &Compiled, tuples: &[Tuple]) -> Result<(u64, u64), LearnError> {
        let closed = c.types.len() == tuples.first().map_or(0, |t| t.frame.len());
        let (mut total, mut kept) = (0u64, 0u64);
        for t in tuples {
            let n = if closed {
                let mut f = t.frame.clone();
                u64::from(self.ev.body_holds(&c.lits, &mut f, &c.types)?)
            } else {
                self.extend(c, t)?.len() as u64
            };
            total += n;
            kept += u64::from(n > 0);
        }
        Ok((total, kept))
    }

    fn evaluate(&self, c: &Compiled, st: &ClauseState) -> Result<GainState, LearnError> {
        let (p1, t_pp) = self.count(c, &st.pos)?;
        let (n1, _) = self.count(c, &st.neg)?;
        Ok(GainState::new(st.pos.len() as u64, st.neg.len() as u64, p1, n1, t_pp))
    }

    /// Highest-gain eligible move. Eligible means positive gain and fewer
    /// negative tuples than before. Ties go to the lower rank, then to the
    /// earlier move.
    ///
    /// Moves are scored in batches from most new variables to fewest. A
    /// positive candidate is skipped when a scored generalization of it has
    /// a gain bound below the best eligible gain so far, since its own gain
    /// cannot exceed that bound.
    fn choose(&mut self, st: &ClauseState, moves: Vec<Move>) -> Result<Option<Chosen>, LearnError> {
        let mut compiled = moves
            .iter()
            .map(|m| self.compile(st, &m.literals).map(Some))
            .collect::<Result<Vec<_>, _>>()?;
        let old_types = st.old_types();
        let kb = self.kb();
        let width = |c: &Option<Compiled>| c.as_ref().map_or(0, |c| c.types.len());
        let mut order: Vec<usize> = (0..moves.len()).collect();
        order.sort_by_key(|&i| Reverse(width(&compiled[i])));
        let mut scored: Vec<Option<(GainState, f64)>> = vec![None; moves.len()];
        let mut best: Option<(f64, u8, usize)> = None;
        let mut generals: Vec<usize> = Vec::new();
        let mut start = 0;
        while start < order.len() {
            self.check_time()?;
            let w = width(&compiled[order[start]]);
            let end = order[start..]
                .iter()
                .position(|&i| width(&compiled[i]) != w)
                .map_or(order.len(), |k| start + k);
            let batch = &order[start..end];
            start = end;
            let todo: Vec<usize> = batch
                .iter()
                .copied()
                .filter(|&i| {
                    let (Some((best_gain, _, _)), Some(s), true) = (best, moves[i].candidate.as_ref(), self.config.pruning)
                    else {
                        return true;
                    };
                    !generals.iter().any(|&g| {
                        let (gs, _) = scored[g].expect("generalizations are scored");
                        max_gain_bound(&gs) < best_gain
                            && moves[g].candidate.as_ref().is_some_and(|gc| gc.generalizes(s, &old_types, kb))
                    })
                })
                .collect();
            let this = &*self;
            let results: Vec<Result<GainState, LearnError>> = todo
                .par_iter()
                .map(|&i| this.evaluate(compiled[i].as_ref().expect("compiled move"), st))
                .collect();
            for (&i, r) in todo.iter().zip(results) {
                let s = r?;
                let g = information_gain(&s)?;
                self.counters.gain_evaluations += 1;
                self.counters.tuples_touched += s.p0 + s.n0;
                scored[i] = Some((s, g));
                if moves[i].candidate.as_ref().is_some_and(|c| !c.negated) {
                    generals.push(i);
                }
                if g > 0.0 && s.n1 < s.n0 {
                    let key = (g, moves[i].rank, i);
                    let better = match best {
                        None => true,
                        Some((bg, br, bi)) => g > bg || (g == bg && (key.1, key.2) < (br, bi)),
                    };
                    if better {
                        best = Some(key);
                    }
                }
            }
        }
        let Some((gain, _, i)) = best else {
            return Ok(None);
        };
        let (state, _) = scored[i].expect("best move is scored");
        let compiled = compiled[i].take().expect("compiled move");
        let mv = moves.into_iter().nth(i).expect("index in range");
        Ok(Some(Chosen { mv, compiled, state, gain }))
    }

    fn apply(&mut self, st: &mut ClauseState, chosen: Chosen) -> Result<(), LearnError> {
        let (lits, c) = match chosen.mv.commit {
            Some(commit) => {
                let c = self.compile(st, &commit)?;
                (commit, c)
            }
            None => (chosen.mv.literals, chosen.compiled),
        };
        let grow = |tuples: &[Tuple]| -> Result<Vec<Tuple>, LearnError> {
            let mut out = Vec::new();
            for t in tuples {
                for frame in self.extend(&c, t)? {
                    out.push(Tuple { origin: t.origin, frame });
                }
            }
            Ok(out)
        };
        let pos = grow(&st.pos)?;
        let neg = grow(&st.neg)?;
        let nold = st.vars.len();
        let bound: BTreeSet<usize> = c.lits.iter().filter(|l| !l.negated).flat_map(|l| l.vars()).collect();
        for k in nold..c.names.len() {
            let ty = self.kb().data_type_by_id(c.types[k]).name().to_string();
            st.vars.push(Variable::new(c.names[k].clone(), ty));
            if bound.contains(&k) {
                st.usable.push(k);
            }
        }
        st.body.extend(lits);
        st.pos = pos;
        st.neg = neg;
        Ok(())
    }

    fn acceptable(&self, st: &ClauseState) -> bool {
        let p = ClauseState::covered(&st.pos).len() as f64;
        let n = ClauseState::covered(&st.neg).len() as f64;
        p >= self.config.min_clause_pos as f64 && p > 0.0 && n <= self.config.neg_tolerance * (p + n)
    }

    /// Grows one clause over the positives `remaining`. Returns the clause
    /// and the positives it covers, or `None` when no acceptable clause is found.
    pub fn learn_clause(
        &mut self,
        remaining: &[usize],
        source: &mut MoveSource<'_, 'kb>,
    ) -> Result<Option<(HornClause, BTreeSet<usize>)>, LearnError> {
        self.clause_no += 1;
        let mut st = self.initial_state(remaining);
        while !(self.acceptable(&st) || st.neg.is_empty()) && st.body.len() < self.config.max_clause_len {
            self.check_time()?;
            let moves = source(self, &st)?;
            let Some(chosen) = self.choose(&st, moves)? else {
                break;
            };
            self.trace.push(TraceLine {
                clause: self.clause_no,
                literal: chosen
                    .mv
                    .literals
                    .iter()
                    .map(|l| l.to_string())
                    .collect::<Vec<_>>()
                    .join(" & "),
                state: chosen.state,
                gain: chosen.gain,
            });
            self.apply(&mut st, chosen)?;
        }
        if !self.acceptable(&st) {
            return Ok(None);
        }
        let clause = HornClause::new(self.head.clone(), st.body.clone())?;
        Ok(Some((clause, ClauseState::covered(&st.pos))))
    }

    /// Separate-and-conquer: clauses are added until every positive is
    /// covered or no acceptable clause remains. Returns the clauses and the
    /// indices of uncovered positives.
    pub fn learn_rule(&mut self, source: &mut MoveSource<'_, 'kb>) -> Result<(Vec<HornClause>, Vec<usize>), LearnError> {
        let mut remaining: Vec<usize> = (0..self.pos.len()).collect();
        let mut clauses = Vec::new();
        while !remaining.is_empty() {
            let Some((clause, covered)) = self.learn_clause(&remaining, source)? else {
                break;
            };
            clauses.push(clause);
            remaining.retain(|i| !covered.contains(i));
        }
        Ok((clauses, remaining))
    }
}
