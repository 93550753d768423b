//! Background knowledge: typed constants, extensional tuples, intensional
//! clauses, computed predicates, signatures and inter-argument constraints.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use chrono::NaiveDate;

use crate::error::LogicError;
use crate::formula::Formula;
use crate::syntax::{HornClause, Literal, Rule, Term};
use crate::types::{DataType, ANY_TYPE};
use crate::value::{Constant, Value};

pub type ConstId = u32;
pub(crate) type TypeId = u16;

/// Default limit on nested intensional expansion.
pub const DEFAULT_DEPTH_LIMIT: usize = 8;

/// Argument types of a predicate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypedSignature {
    predicate: String,
    arg_types: Vec<String>,
    localized: bool,
}

impl TypedSignature {
    /// A signature is localized when every slot admits exactly one
    /// concrete type, i.e. no slot is the universal `any`.
    pub fn new(predicate: impl Into<String>, arg_types: Vec<String>) -> Self {
        let localized = arg_types.iter().all(|t| t != ANY_TYPE);
        TypedSignature {
            predicate: predicate.into(),
            arg_types,
            localized,
        }
    }

    /// Like [`TypedSignature::new`] but insists on a localized declaration.
    pub fn localized(predicate: impl Into<String>, arg_types: Vec<String>) -> Result<Self, LogicError> {
        let sig = TypedSignature::new(predicate, arg_types);
        if !sig.localized {
            return Err(LogicError::InvalidType(format!(
                "localized signature `{}` cannot use type `{ANY_TYPE}`",
                sig.predicate
            )));
        }
        Ok(sig)
    }

    pub fn predicate(&self) -> &str {
        &self.predicate
    }

    pub fn arg_types(&self) -> &[String] {
        &self.arg_types
    }

    pub fn arity(&self) -> usize {
        self.arg_types.len()
    }

    pub fn is_localized(&self) -> bool {
        self.localized
    }

    /// Whether a term of type `ty` may fill slot `slot`.
    pub fn admits(&self, slot: usize, ty: &str) -> bool {
        self.arg_types
            .get(slot)
            .is_some_and(|t| t == ANY_TYPE || t == ty)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstraintKind {
    /// No variable may fill two slots of the predicate.
    AllArgsDistinct,
    /// Each pair `(i, j)` forbids the same variable in slots `i` and `j`.
    ForbiddenPatterns(Vec<(usize, usize)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterArgConstraint {
    pub predicate: String,
    pub kind: ConstraintKind,
}

impl InterArgConstraint {
    /// True when the slot contents (variable names, in slot order) are allowed.
    pub fn permits(&self, slots: &[&str]) -> bool {
        match &self.kind {
            ConstraintKind::AllArgsDistinct => {
                let distinct: BTreeSet<&&str> = slots.iter().collect();
                distinct.len() == slots.len()
            }
            ConstraintKind::ForbiddenPatterns(pairs) => pairs
                .iter()
                .all(|&(i, j)| slots.get(i).zip(slots.get(j)).is_none_or(|(a, b)| a != b)),
        }
    }
}

/// Computed predicates.
#[derive(Clone, Debug, PartialEq)]
pub enum Builtin {
    /// Strict `>` between two values of the signature's type.
    Greater,
    /// A linear comparison over numeric arguments.
    Formula(Formula),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PredicateKind {
    Extensional,
    Intensional,
    Mixed,
    Builtin,
}

#[derive(Clone, Debug)]
pub struct Predicate {
    signature: TypedSignature,
    pub(crate) tuples: BTreeSet<Box<[ConstId]>>,
    clauses: Vec<HornClause>,
    builtin: Option<Builtin>,
}

impl Predicate {
    pub fn signature(&self) -> &TypedSignature {
        &self.signature
    }

    pub fn name(&self) -> &str {
        &self.signature.predicate
    }

    pub fn clauses(&self) -> &[HornClause] {
        &self.clauses
    }

    pub fn builtin(&self) -> Option<&Builtin> {
        self.builtin.as_ref()
    }

    pub fn tuple_count(&self) -> usize {
        self.tuples.len()
    }

    pub fn kind(&self) -> PredicateKind {
        match (self.builtin.is_some(), self.tuples.is_empty(), self.clauses.is_empty()) {
            (true, _, _) => PredicateKind::Builtin,
            (false, false, false) => PredicateKind::Mixed,
            (false, true, false) => PredicateKind::Intensional,
            _ => PredicateKind::Extensional,
        }
    }

    /// Defined by clauses (possibly alongside tuples).
    pub fn has_clauses(&self) -> bool {
        !self.clauses.is_empty()
    }
}

/// How an initial rule is meant to be used by the learners.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialForm {
    /// Refinement seed for constrained learning.
    ExtensionalHint,
    /// Intensional entry in the hypothesis catalogue.
    Intensional,
}

#[derive(Clone, Debug)]
pub struct InitialRule {
    pub rule: Rule,
    pub form: InitialForm,
}

/// The background knowledge base.
#[derive(Clone, Debug)]
pub struct FactStore {
    types: Vec<DataType>,
    type_index: BTreeMap<String, TypeId>,
    pool: Vec<Constant>,
    pool_types: Vec<TypeId>,
    ids: HashMap<Constant, ConstId>,
    by_type: BTreeMap<TypeId, Vec<ConstId>>,
    all_sorted: Vec<ConstId>,
    preds: Vec<Predicate>,
    pred_index: BTreeMap<String, usize>,
    constraints: Vec<InterArgConstraint>,
    initial_rules: Vec<InitialRule>,
    depth_limit: usize,
}

impl Default for FactStore {
    fn default() -> Self {
        FactStore::new()
    }
}

impl FactStore {
    pub fn new() -> Self {
        let mut kb = FactStore {
            types: Vec::new(),
            type_index: BTreeMap::new(),
            pool: Vec::new(),
            pool_types: Vec::new(),
            ids: HashMap::new(),
            by_type: BTreeMap::new(),
            all_sorted: Vec::new(),
            preds: Vec::new(),
            pred_index: BTreeMap::new(),
            constraints: Vec::new(),
            initial_rules: Vec::new(),
            depth_limit: DEFAULT_DEPTH_LIMIT,
        };
        kb.add_type(DataType::any()).expect("fresh store");
        kb
    }

    pub fn depth_limit(&self) -> usize {
        self.depth_limit
    }

    pub fn set_depth_limit(&mut self, limit: usize) {
        self.depth_limit = limit;
    }

    // ---- types -------------------------------------------------------

    /// Registers a type. Re-registering an identical type is a no-op.
    pub fn add_type(&mut self, dtype: DataType) -> Result<(), LogicError> {
        if let Some(&id) = self.type_index.get(dtype.name()) {
            if self.types[id as usize] == dtype {
                return Ok(());
            }
            return Err(LogicError::InvalidType(format!(
                "type `{}` is already declared differently",
                dtype.name()
            )));
        }
        let id = TypeId::try_from(self.types.len())
            .map_err(|_| LogicError::InvalidType("too many types".into()))?;
        self.type_index.insert(dtype.name().to_string(), id);
        self.types.push(dtype);
        Ok(())
    }

    pub fn data_type(&self, name: &str) -> Option<&DataType> {
        self.type_index.get(name).map(|&i| &self.types[i as usize])
    }

    pub fn types(&self) -> impl Iterator<Item = &DataType> {
        self.types.iter().filter(|t| !t.is_any())
    }

    pub(crate) fn type_id(&self, name: &str) -> Result<TypeId, LogicError> {
        self.type_index
            .get(name)
            .copied()
            .ok_or_else(|| LogicError::UnknownType(name.to_string()))
    }

    pub(crate) fn data_type_by_id(&self, id: TypeId) -> &DataType {
        &self.types[id as usize]
    }

    pub(crate) fn any_type_id(&self) -> TypeId {
        self.type_index[ANY_TYPE]
    }

    // ---- constants ---------------------------------------------------

    /// Interns a constant, validating it against its type.
    pub fn add_constant(&mut self, c: Constant) -> Result<ConstId, LogicError> {
        if let Some(&id) = self.ids.get(&c) {
            return Ok(id);
        }
        let tid = self.type_id(&c.dtype)?;
        let dtype = &self.types[tid as usize];
        if dtype.is_any() || !dtype.accepts(&c.value) {
            return Err(LogicError::TypeMismatch(format!(
                "{} is not an element of type {}",
                c.value, c.dtype
            )));
        }
        let id = ConstId::try_from(self.pool.len()).expect("constant pool overflow");
        let pool = &self.pool;
        let same_type = self.by_type.entry(tid).or_default();
        let pos = same_type.partition_point(|&o| pool[o as usize] < c);
        same_type.insert(pos, id);
        let pos = self.all_sorted.partition_point(|&o| pool[o as usize] < c);
        self.all_sorted.insert(pos, id);
        self.ids.insert(c.clone(), id);
        self.pool.push(c);
        self.pool_types.push(tid);
        Ok(id)
    }

    pub fn constant_id(&self, c: &Constant) -> Option<ConstId> {
        self.ids.get(c).copied()
    }

    pub fn constant(&self, id: ConstId) -> &Constant {
        &self.pool[id as usize]
    }


    pub fn constant_count(&self) -> usize {
        self.pool.len()
    }

    /// Constants of a type in canonical sorted order.
    pub fn constants_of_type(&self, dtype: &str) -> Vec<&Constant> {
        self.type_index
            .get(dtype)
            .and_then(|t| self.by_type.get(t))
            .map(|ids| ids.iter().map(|&i| self.constant(i)).collect())
            .unwrap_or_default()
    }

    pub(crate) fn ids_of_type(&self, tid: TypeId) -> &[ConstId] {
        if tid == self.any_type_id() {
            return &self.all_sorted;
        }
        self.by_type.get(&tid).map(Vec::as_slice).unwrap_or(&[])
    }


    // ---- predicates --------------------------------------------------

    /// Declares a predicate signature. Redeclaring the same signature is a no-op.
    pub fn declare(&mut self, signature: TypedSignature) -> Result<(), LogicError> {
        for t in signature.arg_types() {
            self.type_id(t)?;
        }
        if let Some(&i) = self.pred_index.get(signature.predicate()) {
            let existing = &self.preds[i].signature;
            if existing.arg_types() == signature.arg_types() {
                return Ok(());
            }
            return Err(LogicError::TypeMismatch(format!(
                "predicate `{}` already declared with types ({})",
                signature.predicate(),
                existing.arg_types().join(", ")
            )));
        }
        self.pred_index
            .insert(signature.predicate().to_string(), self.preds.len());
        self.preds.push(Predicate {
            signature,
            tuples: BTreeSet::new(),
            clauses: Vec::new(),
            builtin: None,
        });
        Ok(())
    }

    pub fn predicate(&self, name: &str) -> Option<&Predicate> {
        self.pred_index.get(name).map(|&i| &self.preds[i])
    }

    pub(crate) fn predicate_index(&self, name: &str) -> Result<usize, LogicError> {
        self.pred_index
            .get(name)
            .copied()
            .ok_or_else(|| LogicError::UnknownPredicate(name.to_string()))
    }

    pub(crate) fn predicate_at(&self, index: usize) -> &Predicate {
        &self.preds[index]
    }

    /// Predicates in name order.
    pub fn predicates(&self) -> impl Iterator<Item = &Predicate> {
        self.pred_index.values().map(|&i| &self.preds[i])
    }

    pub fn signature(&self, name: &str) -> Option<&TypedSignature> {
        self.predicate(name).map(Predicate::signature)
    }

    fn pred_mut(&mut self, name: &str) -> Result<&mut Predicate, LogicError> {
        let i = self.predicate_index(name)?;
        Ok(&mut self.preds[i])
    }

    /// Adds a ground tuple to an extensional (or mixed) predicate.
    pub fn add_fact(&mut self, predicate: &str, args: Vec<Constant>) -> Result<(), LogicError> {
        let sig = self
            .signature(predicate)
            .ok_or_else(|| LogicError::UnknownPredicate(predicate.to_string()))?
            .clone();
        if sig.arity() != args.len() {
            return Err(LogicError::Arity {
                name: predicate.to_string(),
                expected: sig.arity(),
                got: args.len(),
            });
        }
        for (slot, c) in args.iter().enumerate() {
            if !sig.admits(slot, &c.dtype) {
                return Err(LogicError::TypeMismatch(format!(
                    "{predicate} slot {slot} expects {}, got {} of type {}",
                    sig.arg_types()[slot],
                    c,
                    c.dtype
                )));
            }
        }
        if self.predicate(predicate).and_then(Predicate::builtin).is_some() {
            return Err(LogicError::InvalidClause(format!(
                "`{predicate}` is computed and cannot take facts"
            )));
        }
        let ids: Vec<ConstId> = args
            .into_iter()
            .map(|c| self.add_constant(c))
            .collect::<Result<_, _>>()?;
        self.pred_mut(predicate)?.tuples.insert(ids.into_boxed_slice());
        Ok(())
    }

    /// Adds a defining clause to an intensional (or mixed) predicate. The
    /// head must match the declared signature; body literals are checked
    /// lazily at evaluation so definitions may refer forward.
    pub fn add_clause(&mut self, clause: HornClause) -> Result<(), LogicError> {
        let head = clause.head().clone();
        self.check_literal(&head)?;
        let pred = self.pred_mut(&head.predicate)?;
        if pred.builtin.is_some() {
            return Err(LogicError::InvalidClause(format!(
                "`{}` is computed and cannot take clauses",
                head.predicate
            )));
        }
        pred.clauses.push(clause.clone());
        for t in clause.head().args.iter().chain(clause.body().iter().flat_map(|l| &l.args)) {
            if let Term::Const(c) = t {
                self.add_constant(c.clone())?;
            }
        }
        Ok(())
    }

    /// Adds every clause of a rule as a definition of its head predicate.
    pub fn add_rule(&mut self, rule: &Rule) -> Result<(), LogicError> {
        for c in rule.clauses() {
            self.add_clause(c.clone())?;
        }
        Ok(())
    }

    /// Declares a strict-order predicate `name(dtype, dtype)`.
    pub fn add_greater(&mut self, name: &str, dtype: &str) -> Result<(), LogicError> {
        let ty = self.data_type(dtype).ok_or_else(|| LogicError::UnknownType(dtype.into()))?;
        if !ty.scale().is_ordered() && !ty.is_any() {
            return Err(LogicError::InvalidType(format!(
                "type `{dtype}` has no order for `{name}`"
            )));
        }
        self.declare(TypedSignature::new(name, vec![dtype.to_string(); 2]))?;
        let pred = self.pred_mut(name)?;
        if !pred.tuples.is_empty() || !pred.clauses.is_empty() {
            return Err(LogicError::InvalidClause(format!("`{name}` already has a definition")));
        }
        pred.builtin = Some(Builtin::Greater);
        Ok(())
    }

    /// Declares a formula-defined predicate over numeric argument types.
    pub fn add_formula(&mut self, name: &str, arg_types: Vec<String>, formula: Formula) -> Result<(), LogicError> {
        if formula.arity() != arg_types.len() {
            return Err(LogicError::Arity {
                name: name.to_string(),
                expected: arg_types.len(),
                got: formula.arity(),
            });
        }
        self.declare(TypedSignature::new(name, arg_types))?;
        let pred = self.pred_mut(name)?;
        if !pred.tuples.is_empty() || !pred.clauses.is_empty() {
            return Err(LogicError::InvalidClause(format!("`{name}` already has a definition")));
        }
        pred.builtin = Some(Builtin::Formula(formula));
        Ok(())
    }

    pub fn add_constraint(&mut self, c: InterArgConstraint) -> Result<(), LogicError> {
        let sig = self
            .signature(&c.predicate)
            .ok_or_else(|| LogicError::UnknownPredicate(c.predicate.clone()))?;
        if let ConstraintKind::ForbiddenPatterns(pairs) = &c.kind {
            for &(i, j) in pairs {
                if i >= sig.arity() || j >= sig.arity() || i == j {
                    return Err(LogicError::InvalidClause(format!(
                        "constraint on `{}` references invalid slots ({i}, {j})",
                        c.predicate
                    )));
                }
            }
        }
        self.constraints.push(c);
        Ok(())
    }

    pub fn constraints(&self) -> &[InterArgConstraint] {
        &self.constraints
    }

    /// Stores a rule as a refinement seed or hypothesis-catalogue entry,
    /// after checking every literal against declared signatures.
    pub fn register_initial_rule(&mut self, rule: Rule, form: InitialForm) -> Result<(), LogicError> {
        for clause in rule.clauses() {
            for lit in std::iter::once(clause.head()).chain(clause.body()) {
                self.check_literal(lit)?;
            }
        }
        self.initial_rules.push(InitialRule { rule, form });
        Ok(())
    }

    pub fn initial_rules(&self) -> &[InitialRule] {
        &self.initial_rules
    }

    /// Checks a literal against its predicate's signature.
    pub fn check_literal(&self, lit: &Literal) -> Result<(), LogicError> {
        let sig = self
            .signature(&lit.predicate)
            .ok_or_else(|| LogicError::UnknownPredicate(lit.predicate.clone()))?;
        if sig.arity() != lit.arity() {
            return Err(LogicError::Arity {
                name: lit.predicate.clone(),
                expected: sig.arity(),
                got: lit.arity(),
            });
        }
        for (slot, t) in lit.args.iter().enumerate() {
            if !sig.admits(slot, t.dtype()) {
                return Err(LogicError::TypeMismatch(format!(
                    "{} slot {slot} expects {}, got {t} of type {}",
                    lit.predicate,
                    sig.arg_types()[slot],
                    t.dtype()
                )));
            }
            if let Term::Func(_) = t {
                return Err(LogicError::InvalidClause(format!(
                    "functional expression `{t}` cannot appear inside a literal"
                )));
            }
        }
        Ok(())
    }

    // ---- derived views -----------------------------------------------

    /// Tab-separated dump of every extensional tuple, sorted by predicate
    /// name then by canonical constant order.
    pub fn dump_tsv(&self) -> String {
        let mut out = String::new();
        for pred in self.predicates() {
            let mut rows: Vec<Vec<&Constant>> = pred
                .tuples
                .iter()
                .map(|t| t.iter().map(|&i| self.constant(i)).collect())
                .collect();
            rows.sort();
            for row in rows {
                out.push_str(pred.name());
                for c in row {
                    let _ = write!(out, "\t{c}");
                }
                out.push('\n');
            }
        }
        out
    }

    /// A copy of the store without any tuple that mentions a date after `cutoff`.
    pub fn restrict_dates(&self, cutoff: NaiveDate) -> FactStore {
        let mut out = self.clone();
        let late: BTreeSet<ConstId> = self
            .pool
            .iter()
            .enumerate()
            .filter(|(_, c)| matches!(c.value, Value::Date(d) if d > cutoff))
            .map(|(i, _)| i as ConstId)
            .collect();
        if late.is_empty() {
            return out;
        }
        for pred in &mut out.preds {
            pred.tuples.retain(|t| !t.iter().any(|i| late.contains(i)));
        }
        for ids in out.by_type.values_mut() {
            ids.retain(|i| !late.contains(i));
        }
        out.all_sorted.retain(|i| !late.contains(i));
        out
    }

    /// True if every stored tuple is well-typed against its signature.
    pub fn is_well_typed(&self) -> bool {
        self.preds.iter().all(|p| {
            p.tuples.iter().all(|t| {
                t.len() == p.signature.arity()
                    && t.iter()
                        .enumerate()
                        .all(|(slot, &id)| p.signature.admits(slot, &self.constant(id).dtype))
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::ScaleKind;

    fn store() -> FactStore {
        let mut kb = FactStore::new();
        kb.add_type(DataType::numeric("price", ScaleKind::Ratio)).unwrap();
        kb.add_type(DataType::dates("date")).unwrap();
        kb.declare(TypedSignature::new("Up", vec!["price".into(), "price".into()]))
            .unwrap();
        kb
    }

    #[test]
    fn facts_are_type_checked() {
        let mut kb = store();
        kb.add_fact("Up", vec![Constant::num(34.0, "price"), Constant::num(38.0, "price")])
            .unwrap();
        let d = NaiveDate::from_ymd_opt(1999, 1, 4).unwrap();
        let err = kb.add_fact("Up", vec![Constant::date(d, "date"), Constant::num(1.0, "price")]);
        assert!(matches!(err, Err(LogicError::TypeMismatch(_))));
        let err = kb.add_fact("Up", vec![Constant::num(1.0, "price")]);
        assert!(matches!(err, Err(LogicError::Arity { .. })));
        assert!(kb.is_well_typed());
    }

    #[test]
    fn constants_sorted_per_type() {
        let mut kb = store();
        for v in [3.0, 1.0, 2.0] {
            kb.add_constant(Constant::num(v, "price")).unwrap();
        }
        let vals: Vec<f64> = kb
            .constants_of_type("price")
            .iter()
            .map(|c| c.value.as_f64().unwrap())
            .collect();
        assert_eq!(vals, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn localized_rejects_any() {
        assert!(TypedSignature::localized("G", vec!["any".into(), "date".into()]).is_err());
        let s = TypedSignature::localized("Greater_dates", vec!["date".into(), "date".into()]).unwrap();
        assert!(s.is_localized());
        assert!(!s.admits(0, "price"));
    }

    #[test]
    fn constraint_slots_validated() {
        let mut kb = store();
        let bad = InterArgConstraint {
            predicate: "Up".into(),
            kind: ConstraintKind::ForbiddenPatterns(vec![(0, 2)]),
        };
        assert!(kb.add_constraint(bad).is_err());
        let ok = InterArgConstraint {
            predicate: "Up".into(),
            kind: ConstraintKind::AllArgsDistinct,
        };
        assert!(ok.permits(&["x", "y"]));
        assert!(!ok.permits(&["x", "x"]));
        kb.add_constraint(ok).unwrap();
    }

    #[test]
    fn dump_is_sorted() {
        let mut kb = store();
        kb.add_fact("Up", vec![Constant::num(35.5, "price"), Constant::num(36.0, "price")])
            .unwrap();
        kb.add_fact("Up", vec![Constant::num(34.0, "price"), Constant::num(38.0, "price")])
            .unwrap();
        assert_eq!(kb.dump_tsv(), "Up\t34\t38\nUp\t35.5\t36\n");
    }

    #[test]
    fn restrict_dates_drops_late_tuples() {
        let mut kb = store();
        kb.declare(TypedSignature::new("Seen", vec!["date".into()])).unwrap();
        let early = NaiveDate::from_ymd_opt(1999, 1, 4).unwrap();
        let late = NaiveDate::from_ymd_opt(1999, 1, 5).unwrap();
        kb.add_fact("Seen", vec![Constant::date(early, "date")]).unwrap();
        kb.add_fact("Seen", vec![Constant::date(late, "date")]).unwrap();
        let cut = kb.restrict_dates(early);
        assert_eq!(cut.predicate("Seen").unwrap().tuple_count(), 1);
        assert_eq!(cut.constants_of_type("date").len(), 1);
    }
}
