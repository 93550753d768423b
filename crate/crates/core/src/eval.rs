//! Closed-world evaluation of literals, clauses and rules.
//!
//! Clauses are compiled to slot-indexed form. A body is solved by depth-first
//! search: positive literals bind variables (tuple lookup, intensional
//! expansion, or typed-domain enumeration for computed predicates), then
//! negated literals are checked by negation as failure. Variables that occur
//! only under negation are existentially quantified inside that negation.

use std::collections::{BTreeSet, HashMap};
use std::ops::ControlFlow;

use crate::error::LogicError;
use crate::store::{Builtin, ConstId, FactStore, TypeId};
use crate::syntax::{Binding, HornClause, Literal, Rule, Term, Variable};
use crate::value::{Constant, Value};

pub(crate) type Frame = Vec<Option<ConstId>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum CArg {
    Var(usize),
    Const(ConstId),
}

/// A literal with predicate index and slot-indexed arguments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct CLit {
    pub pred: usize,
    pub args: Vec<CArg>,
    pub negated: bool,
    /// Set in lenient mode when an argument type is not admitted by the
    /// signature; the positive literal is then false everywhere.
    pub ill_typed: bool,
}

impl CLit {
    pub fn vars(&self) -> impl Iterator<Item = usize> + '_ {
        self.args.iter().filter_map(|a| match a {
            CArg::Var(v) => Some(*v),
            CArg::Const(_) => None,
        })
    }
}

/// Variable numbering shared by a clause under compilation.
#[derive(Clone, Debug, Default)]
pub(crate) struct VarMap {
    pub names: Vec<String>,
    pub types: Vec<TypeId>,
}

impl VarMap {
    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn push(&mut self, name: &str, ty: TypeId) -> usize {
        self.names.push(name.to_string());
        self.types.push(ty);
        self.names.len() - 1
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }
}

#[derive(Clone, Debug)]
pub(crate) struct CClause {
    pub vars: VarMap,
    pub head: Vec<CArg>,
    /// Positive literals first, then negated ones; relative order kept.
    pub body: Vec<CLit>,
}

#[derive(Debug, Default)]
struct ExtIndex {
    tuples: Vec<Box<[ConstId]>>,
    set: BTreeSet<Box<[ConstId]>>,
    by_slot: Vec<HashMap<ConstId, Vec<u32>>>,
}

impl ExtIndex {
    fn build(tuples: &BTreeSet<Box<[ConstId]>>, arity: usize) -> Self {
        let mut by_slot = vec![HashMap::<ConstId, Vec<u32>>::new(); arity];
        let list: Vec<Box<[ConstId]>> = tuples.iter().cloned().collect();
        for (i, t) in list.iter().enumerate() {
            for (slot, &c) in t.iter().enumerate() {
                by_slot[slot].entry(c).or_default().push(i as u32);
            }
        }
        ExtIndex {
            tuples: list,
            set: tuples.clone(),
            by_slot,
        }
    }
}

/// A reusable evaluator over one fact store.
///
/// Constants that are not in the store (for example unseen example values)
/// are interned into a private overlay; they never join existential domains.
#[derive(Debug)]
pub struct Evaluator<'kb> {
    kb: &'kb FactStore,
    strict: bool,
    depth_limit: usize,
    extra: Vec<Constant>,
    extra_types: Vec<TypeId>,
    extra_ids: HashMap<Constant, ConstId>,
    ext: Vec<ExtIndex>,
    defs: Vec<Result<Vec<CClause>, LogicError>>,
}

impl<'kb> Evaluator<'kb> {
    /// A strictly typed evaluator: ill-typed literals are errors.
    pub fn new(kb: &'kb FactStore) -> Self {
        Evaluator::with_typing(kb, true)
    }

    /// With `strict = false`, an argument whose type a signature does not
    /// admit makes the positive literal false instead of raising an error.
    pub fn with_typing(kb: &'kb FactStore, strict: bool) -> Self {
        let n = kb.predicates().count();
        let mut ev = Evaluator {
            kb,
            strict,
            depth_limit: kb.depth_limit(),
            extra: Vec::new(),
            extra_types: Vec::new(),
            extra_ids: HashMap::new(),
            ext: Vec::with_capacity(n),
            defs: Vec::with_capacity(n),
        };
        for i in 0..n {
            let p = kb.predicate_at(i);
            ev.ext.push(ExtIndex::build(&p.tuples, p.signature().arity()));
        }
        for i in 0..n {
            let clauses = kb.predicate_at(i).clauses().to_vec();
            let compiled = clauses
                .iter()
                .map(|c| ev.compile_clause(c))
                .collect::<Result<Vec<_>, _>>();
            ev.defs.push(compiled);
        }
        ev
    }

    pub fn kb(&self) -> &'kb FactStore {
        self.kb
    }

    pub fn set_depth_limit(&mut self, limit: usize) {
        self.depth_limit = limit;
    }

    // ---- constants -----------------------------------------------------

    pub(crate) fn intern(&mut self, c: &Constant) -> Result<ConstId, LogicError> {
        if let Some(id) = self.kb.constant_id(c) {
            return Ok(id);
        }
        if let Some(&id) = self.extra_ids.get(c) {
            return Ok(id);
        }
        let tid = self.kb.type_id(&c.dtype)?;
        let dtype = self.kb.data_type(&c.dtype).expect("type id resolved");
        if !dtype.accepts(&c.value) {
            return Err(LogicError::TypeMismatch(format!(
                "{} is not an element of type {}",
                c.value, c.dtype
            )));
        }
        let id = (self.kb.constant_count() + self.extra.len()) as ConstId;
        self.extra.push(c.clone());
        self.extra_types.push(tid);
        self.extra_ids.insert(c.clone(), id);
        Ok(id)
    }

    pub(crate) fn value(&self, id: ConstId) -> &Constant {
        let n = self.kb.constant_count();
        if (id as usize) < n {
            self.kb.constant(id)
        } else {
            &self.extra[id as usize - n]
        }
    }

    // ---- compilation -------------------------------------------------

    pub(crate) fn compile_literal(&mut self, lit: &Literal, vars: &mut VarMap) -> Result<CLit, LogicError> {
        let pred = self.kb.predicate_index(&lit.predicate)?;
        let sig = self.kb.predicate_at(pred).signature();
        if sig.arity() != lit.arity() {
            return Err(LogicError::Arity {
                name: lit.predicate.clone(),
                expected: sig.arity(),
                got: lit.arity(),
            });
        }
        let mut ill_typed = false;
        let mut args = Vec::with_capacity(lit.arity());
        for (slot, term) in lit.args.iter().enumerate() {
            let ty = term.dtype();
            if !sig.admits(slot, ty) {
                if self.strict {
                    return Err(LogicError::TypeMismatch(format!(
                        "{} slot {slot} expects {}, got {term} of type {ty}",
                        lit.predicate,
                        sig.arg_types()[slot]
                    )));
                }
                ill_typed = true;
            }
            args.push(match term {
                Term::Const(c) => CArg::Const(self.intern(c)?),
                Term::Var(v) => CArg::Var(self.var_index(v, vars)?),
                Term::Func(_) => {
                    return Err(LogicError::InvalidClause(format!(
                        "functional expression `{term}` cannot appear inside a literal"
                    )))
                }
            });
        }
        Ok(CLit {
            pred,
            args,
            negated: lit.negated,
            ill_typed,
        })
    }

    fn var_index(&self, v: &Variable, vars: &mut VarMap) -> Result<usize, LogicError> {
        let tid = self.kb.type_id(&v.dtype)?;
        match vars.index(&v.name) {
            Some(i) if vars.types[i] == tid => Ok(i),
            Some(_) => Err(LogicError::TypeMismatch(format!(
                "variable `{}` used with two types",
                v.name
            ))),
            None => Ok(vars.push(&v.name, tid)),
        }
    }

    pub(crate) fn compile_clause(&mut self, clause: &HornClause) -> Result<CClause, LogicError> {
        let mut vars = VarMap::default();
        let mut head = Vec::new();
        for t in &clause.head().args {
            head.push(match t {
                Term::Const(c) => CArg::Const(self.intern(c)?),
                Term::Var(v) => CArg::Var(self.var_index(v, &mut vars)?),
                Term::Func(_) => {
                    return Err(LogicError::InvalidClause(format!(
                        "functional expression `{t}` cannot appear in a clause head"
                    )))
                }
            });
        }
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for lit in clause.body() {
            let c = self.compile_literal(lit, &mut vars)?;
            if c.negated {
                neg.push(c);
            } else {
                pos.push(c);
            }
        }
        pos.extend(neg);
        Ok(CClause { vars, head, body: pos })
    }

    // ---- public evaluation ----------------------------------------------

    /// Truth value of a literal under a binding that assigns all of its variables.
    pub fn evaluate_literal(&mut self, lit: &Literal, binding: &Binding) -> Result<bool, LogicError> {
        let mut vars = VarMap::default();
        let c = self.compile_literal(lit, &mut vars)?;
        let mut frame: Frame = vec![None; vars.len()];
        for (i, name) in vars.names.iter().enumerate() {
            let value = binding
                .get(name)
                .ok_or_else(|| LogicError::UnboundVariable(name.clone()))?;
            if self.kb.type_id(&value.dtype)? != vars.types[i] {
                if self.strict {
                    return Err(LogicError::TypeMismatch(format!(
                        "variable `{name}` bound to {value} of type {}",
                        value.dtype
                    )));
                }
                return Ok(c.negated);
            }
            frame[i] = Some(self.intern(value)?);
        }
        self.literal_holds(&c, &frame, &vars.types, 0)
    }

    /// Whether some binding of the body-only variables makes every body literal true.
    pub fn clause_covers(&mut self, clause: &HornClause, example: &[Constant]) -> Result<bool, LogicError> {
        let cc = self.compile_clause(clause)?;
        let ids = self.intern_example(&cc, example, &clause.head().predicate)?;
        match ids {
            Some(ids) => self.covers_compiled(&cc, &ids),
            None => Ok(false),
        }
    }

    /// Disjunction of [`Evaluator::clause_covers`] over the rule's clauses.
    pub fn rule_covers(&mut self, rule: &Rule, example: &[Constant]) -> Result<bool, LogicError> {
        for clause in rule.clauses() {
            if self.clause_covers(clause, example)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// All distinct groundings of `vars` under which every literal in `body`
    /// holds, in canonical constant order. Variables of `vars` that the body
    /// leaves unbound range over their typed domain.
    pub fn solve(&mut self, vars: &[Variable], body: &[Literal]) -> Result<Vec<Vec<Constant>>, LogicError> {
        let mut map = VarMap::default();
        for v in vars {
            self.var_index(v, &mut map)?;
        }
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for lit in body {
            let c = self.compile_literal(lit, &mut map)?;
            if c.negated {
                neg.push(c);
            } else {
                pos.push(c);
            }
        }
        pos.extend(neg);
        let targets: Vec<usize> = (0..vars.len()).collect();
        let mut out: BTreeSet<Vec<ConstId>> = BTreeSet::new();
        let mut frame: Frame = vec![None; map.len()];
        let _ = self.search(&pos, 0, &mut frame, &map.types, &targets, 0, &mut |f| {
            out.insert(targets.iter().map(|&v| f[v].expect("grounded")).collect());
            ControlFlow::Continue(())
        })?;
        let mut rows: Vec<Vec<Constant>> = out
            .into_iter()
            .map(|row| row.into_iter().map(|id| self.value(id).clone()).collect())
            .collect();
        rows.sort();
        Ok(rows)
    }

    // ---- compiled evaluation ----------------------------------------------

    /// Interns an example against a compiled clause head. `None` when the
    /// example cannot match (lenient type mismatch or conflicting constants).
    pub(crate) fn intern_example(
        &mut self,
        cc: &CClause,
        example: &[Constant],
        name: &str,
    ) -> Result<Option<Vec<ConstId>>, LogicError> {
        if example.len() != cc.head.len() {
            return Err(LogicError::Arity {
                name: name.to_string(),
                expected: cc.head.len(),
                got: example.len(),
            });
        }
        let mut ids = Vec::with_capacity(example.len());
        for (arg, c) in cc.head.iter().zip(example) {
            let tid = self.kb.type_id(&c.dtype)?;
            if let CArg::Var(v) = arg {
                if cc.vars.types[*v] != tid {
                    if self.strict {
                        return Err(LogicError::TypeMismatch(format!(
                            "example constant {c} of type {} for head variable `{}` of type {}",
                            c.dtype,
                            cc.vars.names[*v],
                            self.kb.data_type_by_id(cc.vars.types[*v]).name()
                        )));
                    }
                    return Ok(None);
                }
            }
            ids.push(self.intern(c)?);
        }
        Ok(Some(ids))
    }

    /// Head frame for an interned example, or `None` if the head cannot match.
    pub(crate) fn head_frame(&self, cc: &CClause, ids: &[ConstId]) -> Option<Frame> {
        let mut frame: Frame = vec![None; cc.vars.len()];
        for (arg, &id) in cc.head.iter().zip(ids) {
            match *arg {
                CArg::Const(c) if c != id => return None,
                CArg::Const(_) => {}
                CArg::Var(v) => match frame[v] {
                    Some(prev) if prev != id => return None,
                    _ => frame[v] = Some(id),
                },
            }
        }
        Some(frame)
    }

    pub(crate) fn covers_compiled(&self, cc: &CClause, ids: &[ConstId]) -> Result<bool, LogicError> {
        let Some(mut frame) = self.head_frame(cc, ids) else {
            return Ok(false);
        };
        self.body_holds(&cc.body, &mut frame, &cc.vars.types)
    }

    /// Whether some extension of `frame` satisfies every literal of `body`.
    pub(crate) fn body_holds(&self, body: &[CLit], frame: &mut Frame, types: &[TypeId]) -> Result<bool, LogicError> {
        let mut found = false;
        let _ = self.search(body, 0, frame, types, &[], 0, &mut |_| {
            found = true;
            ControlFlow::Break(())
        })?;
        Ok(found)
    }

    /// Truth of one literal; unbound variables are existential.
    pub(crate) fn literal_holds(&self, lit: &CLit, frame: &Frame, types: &[TypeId], depth: usize) -> Result<bool, LogicError> {
        let exists = !self.positive_solutions(lit, frame, types, depth, true)?.is_empty();
        Ok(exists != lit.negated)
    }

    /// Distinct extensions of `frame` satisfying `body`, which must list
    /// positive literals before negated ones.
    pub(crate) fn solutions(&self, body: &[CLit], frame: &Frame, types: &[TypeId]) -> Result<Vec<Frame>, LogicError> {
        let mut out = BTreeSet::new();
        let mut f = frame.clone();
        let _ = self.search(body, 0, &mut f, types, &[], 0, &mut |s| {
            out.insert(s.clone());
            ControlFlow::Continue(())
        })?;
        Ok(out.into_iter().collect())
    }

    fn search(
        &self,
        body: &[CLit],
        i: usize,
        frame: &mut Frame,
        types: &[TypeId],
        ground: &[usize],
        depth: usize,
        cb: &mut dyn FnMut(&Frame) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>, LogicError> {
        let Some(lit) = body.get(i) else {
            return self.ground_rest(ground, 0, frame, types, cb);
        };
        if lit.negated {
            if self.positive_solutions(lit, frame, types, depth, true)?.is_empty() {
                return self.search(body, i + 1, frame, types, ground, depth, cb);
            }
            return Ok(ControlFlow::Continue(()));
        }
        let free = free_vars(lit, frame);
        for row in self.positive_solutions(lit, frame, types, depth, false)? {
            for (&v, &id) in free.iter().zip(&row) {
                frame[v] = Some(id);
            }
            let flow = self.search(body, i + 1, frame, types, ground, depth, cb)?;
            for &v in &free {
                frame[v] = None;
            }
            if flow.is_break() {
                return Ok(flow);
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    fn ground_rest(
        &self,
        ground: &[usize],
        k: usize,
        frame: &mut Frame,
        types: &[TypeId],
        cb: &mut dyn FnMut(&Frame) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>, LogicError> {
        let Some(&v) = ground.get(k) else {
            return Ok(cb(frame));
        };
        if frame[v].is_some() {
            return self.ground_rest(ground, k + 1, frame, types, cb);
        }
        for &id in self.kb.ids_of_type(types[v]) {
            frame[v] = Some(id);
            let flow = self.ground_rest(ground, k + 1, frame, types, cb)?;
            frame[v] = None;
            if flow.is_break() {
                return Ok(flow);
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    /// Assignments to the free variables of `lit` (in first-occurrence order)
    /// that make its positive form true, sorted and distinct. With
    /// `first_only`, stops after one witness.
    fn positive_solutions(
        &self,
        lit: &CLit,
        frame: &Frame,
        types: &[TypeId],
        depth: usize,
        first_only: bool,
    ) -> Result<Vec<Vec<ConstId>>, LogicError> {
        if lit.ill_typed {
            return Ok(Vec::new());
        }
        let free = free_vars(lit, frame);
        let resolved: Vec<Slot> = lit
            .args
            .iter()
            .map(|a| match *a {
                CArg::Const(c) => Slot::Bound(c),
                CArg::Var(v) => match frame[v] {
                    Some(c) => Slot::Bound(c),
                    None => Slot::Free(free.iter().position(|&f| f == v).expect("free var")),
                },
            })
            .collect();
        let pred = self.kb.predicate_at(lit.pred);
        let mut out: BTreeSet<Vec<ConstId>> = BTreeSet::new();

        if let Some(b) = pred.builtin() {
            let free_types: Vec<TypeId> = free.iter().map(|&v| types[v]).collect();
            let mut row = vec![0; free.len()];
            self.enumerate_builtin(b, &resolved, &free_types, 0, &mut row, &mut out, first_only)?;
            return Ok(out.into_iter().collect());
        }

        self.scan_tuples(lit.pred, &resolved, free.len(), &mut out, first_only);
        if first_only && !out.is_empty() {
            return Ok(out.into_iter().collect());
        }

        if pred.has_clauses() {
            if depth >= self.depth_limit {
                return Err(LogicError::DepthExceeded(self.depth_limit));
            }
            let defs = self.defs[lit.pred].as_ref().map_err(Clone::clone)?;
            for def in defs {
                self.expand_definition(def, &resolved, free.len(), depth + 1, &mut out, first_only)?;
                if first_only && !out.is_empty() {
                    break;
                }
            }
        }
        Ok(out.into_iter().collect())
    }

    fn scan_tuples(&self, pred: usize, slots: &[Slot], nfree: usize, out: &mut BTreeSet<Vec<ConstId>>, first_only: bool) {
        let idx = &self.ext[pred];
        if idx.tuples.is_empty() {
            return;
        }
        if nfree == 0 {
            let key: Box<[ConstId]> = slots
                .iter()
                .map(|s| match s {
                    Slot::Bound(c) => *c,
                    Slot::Free(_) => unreachable!("no free slots"),
                })
                .collect();
            if idx.set.contains(&key) {
                out.insert(Vec::new());
            }
            return;
        }
        let posting = slots
            .iter()
            .enumerate()
            .filter_map(|(i, s)| match s {
                Slot::Bound(c) => Some(idx.by_slot[i].get(c).map(Vec::as_slice).unwrap_or(&[])),
                Slot::Free(_) => None,
            })
            .min_by_key(|p| p.len());
        let mut row = vec![0; nfree];
        let candidates: Box<dyn Iterator<Item = &Box<[ConstId]>>> = match posting {
            Some(list) => Box::new(list.iter().map(|&ti| &idx.tuples[ti as usize])),
            None => Box::new(idx.tuples.iter()),
        };
        for t in candidates {
            if match_tuple(slots, t, &mut row) {
                out.insert(row.clone());
                if first_only {
                    return;
                }
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate_builtin(
        &self,
        b: &Builtin,
        slots: &[Slot],
        free_types: &[TypeId],
        k: usize,
        row: &mut Vec<ConstId>,
        out: &mut BTreeSet<Vec<ConstId>>,
        first_only: bool,
    ) -> Result<(), LogicError> {
        if first_only && !out.is_empty() {
            return Ok(());
        }
        if k == free_types.len() {
            let args: Vec<&Constant> = slots
                .iter()
                .map(|s| match *s {
                    Slot::Bound(c) => self.value(c),
                    Slot::Free(i) => self.value(row[i]),
                })
                .collect();
            if self.builtin_holds(b, &args)? {
                out.insert(row.clone());
            }
            return Ok(());
        }
        for &id in self.kb.ids_of_type(free_types[k]) {
            row[k] = id;
            self.enumerate_builtin(b, slots, free_types, k + 1, row, out, first_only)?;
        }
        Ok(())
    }

    fn builtin_holds(&self, b: &Builtin, args: &[&Constant]) -> Result<bool, LogicError> {
        match b {
            Builtin::Greater => Ok(args[0].value.strictly_greater(&args[1].value).unwrap_or(false)),
            Builtin::Formula(f) => {
                let mut nums = Vec::with_capacity(args.len());
                for a in args {
                    match a.value {
                        Value::Num(v) => nums.push(v.0),
                        _ if self.strict => {
                            return Err(LogicError::TypeMismatch(format!(
                                "formula `{f}` needs numeric arguments, got {a}"
                            )))
                        }
                        _ => return Ok(false),
                    }
                }
                f.evaluate(&nums)
            }
        }
    }

    fn expand_definition(
        &self,
        def: &CClause,
        slots: &[Slot],
        nfree: usize,
        depth: usize,
        out: &mut BTreeSet<Vec<ConstId>>,
        first_only: bool,
    ) -> Result<(), LogicError> {
        let mut local: Frame = vec![None; def.vars.len()];
        // Outer free variable k takes its value from every head slot it fills;
        // those values must agree.
        let mut sources: Vec<Vec<CArg>> = vec![Vec::new(); nfree];
        for (h, s) in def.head.iter().zip(slots) {
            match (*h, *s) {
                (CArg::Const(c), Slot::Bound(b)) if c != b => return Ok(()),
                (CArg::Const(_), Slot::Bound(_)) => {}
                (CArg::Var(v), Slot::Bound(b)) => match local[v] {
                    Some(prev) if prev != b => return Ok(()),
                    _ => local[v] = Some(b),
                },
                (src, Slot::Free(k)) => sources[k].push(src),
            }
        }
        let ground: Vec<usize> = sources
            .iter()
            .flatten()
            .filter_map(|s| match s {
                CArg::Var(v) => Some(*v),
                CArg::Const(_) => None,
            })
            .collect();
        let _ = self.search(&def.body, 0, &mut local, &def.vars.types, &ground, depth, &mut |f| {
            let mut row = Vec::with_capacity(sources.len());
            for srcs in &sources {
                let mut vals = srcs.iter().map(|s| match *s {
                    CArg::Const(c) => c,
                    CArg::Var(v) => f[v].expect("grounded head variable"),
                });
                let first = vals.next().expect("free variable fills a head slot");
                if vals.any(|v| v != first) {
                    return ControlFlow::Continue(());
                }
                row.push(first);
            }
            out.insert(row);
            if first_only {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
enum Slot {
    Bound(ConstId),
    Free(usize),
}

/// Matches a stored tuple against resolved slots, filling `row` with the
/// values of free variables.
fn match_tuple(slots: &[Slot], t: &[ConstId], row: &mut [ConstId]) -> bool {
    let mut set = 0u64;
    for (s, &c) in slots.iter().zip(t) {
        match *s {
            Slot::Bound(b) if b != c => return false,
            Slot::Bound(_) => {}
            Slot::Free(k) if set & (1 << k) != 0 && row[k] != c => return false,
            Slot::Free(k) => {
                row[k] = c;
                set |= 1 << k;
            }
        }
    }
    true
}

fn free_vars(lit: &CLit, frame: &Frame) -> Vec<usize> {
    let mut free = Vec::new();
    for v in lit.vars() {
        if frame[v].is_none() && !free.contains(&v) {
            free.push(v);
        }
    }
    free
}

/// Truth value of `lit` under `binding` against `kb`.
pub fn evaluate_literal(lit: &Literal, binding: &Binding, kb: &FactStore) -> Result<bool, LogicError> {
    Evaluator::new(kb).evaluate_literal(lit, binding)
}

/// Whether `clause` covers the ground head tuple `example`.
pub fn clause_covers(clause: &HornClause, example: &[Constant], kb: &FactStore) -> Result<bool, LogicError> {
    Evaluator::new(kb).clause_covers(clause, example)
}

/// Whether any clause of `rule` covers `example`.
pub fn rule_covers(rule: &Rule, example: &[Constant], kb: &FactStore) -> Result<bool, LogicError> {
    Evaluator::new(kb).rule_covers(rule, example)
}
