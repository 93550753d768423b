//! Terms, literals, Horn clauses and rules.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::LogicError;
use crate::value::Constant;

/// A typed logical variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable {
    pub name: String,
    pub dtype: String,
}

impl Variable {
    pub fn new(name: impl Into<String>, dtype: impl Into<String>) -> Self {
        Variable {
            name: name.into(),
            dtype: dtype.into(),
        }
    }
}

/// A declared function symbol `name(arg types) -> result type`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionSymbol {
    pub name: String,
    pub arg_types: Vec<String>,
    pub result_type: String,
}

/// Application of a function symbol to argument terms.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionalExpression {
    name: String,
    args: Vec<Term>,
    result_type: String,
}

impl FunctionalExpression {
    pub fn new(symbol: &FunctionSymbol, args: Vec<Term>) -> Result<Self, LogicError> {
        if args.len() != symbol.arg_types.len() {
            return Err(LogicError::Arity {
                name: symbol.name.clone(),
                expected: symbol.arg_types.len(),
                got: args.len(),
            });
        }
        for (arg, ty) in args.iter().zip(&symbol.arg_types) {
            if arg.dtype() != ty {
                return Err(LogicError::TypeMismatch(format!(
                    "{}: argument {arg} has type {}, expected {ty}",
                    symbol.name,
                    arg.dtype()
                )));
            }
        }
        Ok(FunctionalExpression {
            name: symbol.name.clone(),
            args,
            result_type: symbol.result_type.clone(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn args(&self) -> &[Term] {
        &self.args
    }

    pub fn result_type(&self) -> &str {
        &self.result_type
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Term {
    Const(Constant),
    Var(Variable),
    Func(FunctionalExpression),
}

impl Term {
    pub fn var(name: impl Into<String>, dtype: impl Into<String>) -> Self {
        Term::Var(Variable::new(name, dtype))
    }

    pub fn dtype(&self) -> &str {
        match self {
            Term::Const(c) => &c.dtype,
            Term::Var(v) => &v.dtype,
            Term::Func(f) => &f.result_type,
        }
    }

    pub fn as_var(&self) -> Option<&Variable> {
        match self {
            Term::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_const(&self) -> Option<&Constant> {
        match self {
            Term::Const(c) => Some(c),
            _ => None,
        }
    }
}

impl From<Constant> for Term {
    fn from(c: Constant) -> Self {
        Term::Const(c)
    }
}

impl From<Variable> for Term {
    fn from(v: Variable) -> Self {
        Term::Var(v)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) => fmt::Display::fmt(c, f),
            Term::Var(v) => f.write_str(&v.name),
            Term::Func(e) => {
                write!(f, "{}(", e.name)?;
                write_list(f, &e.args)?;
                f.write_str(")")
            }
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, terms: &[Term]) -> fmt::Result {
    for (i, t) in terms.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        fmt::Display::fmt(t, f)?;
    }
    Ok(())
}

/// A predicate applied to terms, possibly negated.
#[derive(Clone, Debug, PartialEq)]
pub struct Literal {
    pub predicate: String,
    pub args: Vec<Term>,
    pub negated: bool,
}

impl Literal {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Literal {
            predicate: predicate.into(),
            args,
            negated: false,
        }
    }

    pub fn negate(mut self) -> Self {
        self.negated = !self.negated;
        self
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    /// Variables in argument order, first occurrence only.
    pub fn variables(&self) -> Vec<&Variable> {
        let mut seen = BTreeSet::new();
        self.args
            .iter()
            .filter_map(Term::as_var)
            .filter(|v| seen.insert(&v.name))
            .collect()
    }

    pub fn positive(&self) -> Literal {
        Literal {
            negated: false,
            ..self.clone()
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("!")?;
        }
        write!(f, "{}(", self.predicate)?;
        write_list(f, &self.args)?;
        f.write_str(")")
    }
}

/// `head <- body`, with a positive head and a conjunctive body.
#[derive(Clone, Debug, PartialEq)]
pub struct HornClause {
    head: Literal,
    body: Vec<Literal>,
}

impl HornClause {
    pub fn new(head: Literal, body: Vec<Literal>) -> Result<Self, LogicError> {
        if head.negated {
            return Err(LogicError::InvalidClause(format!(
                "head `{head}` must be a positive literal"
            )));
        }
        let mut types: BTreeMap<&str, &str> = BTreeMap::new();
        for lit in std::iter::once(&head).chain(&body) {
            for t in &lit.args {
                if let Term::Var(v) = t {
                    if let Some(prev) = types.insert(&v.name, &v.dtype) {
                        if prev != v.dtype {
                            return Err(LogicError::TypeMismatch(format!(
                                "variable `{}` used with types {prev} and {}",
                                v.name, v.dtype
                            )));
                        }
                    }
                }
            }
        }
        Ok(HornClause { head, body })
    }

    pub fn head(&self) -> &Literal {
        &self.head
    }

    pub fn body(&self) -> &[Literal] {
        &self.body
    }

    /// All variables of the clause: head variables first, then body-only
    /// variables in order of first occurrence.
    pub fn variables(&self) -> Vec<Variable> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for lit in std::iter::once(&self.head).chain(&self.body) {
            for v in lit.variables() {
                if seen.insert(v.name.clone()) {
                    out.push(v.clone());
                }
            }
        }
        out
    }

    /// Variables that appear in the body but not in the head.
    pub fn existential_variables(&self) -> Vec<Variable> {
        let head: BTreeSet<&str> = self.head.variables().iter().map(|v| v.name.as_str()).collect();
        self.variables()
            .into_iter()
            .filter(|v| !head.contains(v.name.as_str()))
            .collect()
    }

    pub fn with_body(&self, body: Vec<Literal>) -> Result<Self, LogicError> {
        HornClause::new(self.head.clone(), body)
    }
}

impl fmt::Display for HornClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <- ", self.head)?;
        if self.body.is_empty() {
            return f.write_str("true");
        }
        for (i, lit) in self.body.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            fmt::Display::fmt(lit, f)?;
        }
        Ok(())
    }
}

/// A non-empty disjunction of clauses sharing one head predicate.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    clauses: Vec<HornClause>,
}

impl Rule {
    pub fn new(clauses: Vec<HornClause>) -> Result<Self, LogicError> {
        let first = clauses
            .first()
            .ok_or_else(|| LogicError::InvalidClause("a rule needs at least one clause".into()))?;
        let (name, arity) = (&first.head.predicate, first.head.arity());
        for c in &clauses[1..] {
            if &c.head.predicate != name || c.head.arity() != arity {
                return Err(LogicError::InvalidClause(format!(
                    "clause head `{}` differs from rule head `{name}/{arity}`",
                    c.head
                )));
            }
        }
        Ok(Rule { clauses })
    }

    pub fn single(clause: HornClause) -> Self {
        Rule {
            clauses: vec![clause],
        }
    }

    pub fn clauses(&self) -> &[HornClause] {
        &self.clauses
    }

    pub fn head_predicate(&self) -> &str {
        &self.clauses[0].head.predicate
    }

    pub fn arity(&self) -> usize {
        self.clauses[0].head.arity()
    }

    pub fn push(&mut self, clause: HornClause) -> Result<(), LogicError> {
        let mut all = std::mem::take(&mut self.clauses);
        all.push(clause);
        match Rule::new(all.clone()) {
            Ok(r) => {
                *self = r;
                Ok(())
            }
            Err(e) => {
                all.pop();
                self.clauses = all;
                Err(e)
            }
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.clauses.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            fmt::Display::fmt(c, f)?;
        }
        Ok(())
    }
}

/// Assignment of constants to variable names.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Binding {
    assignments: BTreeMap<String, Constant>,
}

impl Binding {
    pub fn new() -> Self {
        Binding::default()
    }

    /// Binds `var`, rejecting a constant whose type differs from the variable's.
    pub fn bind(&mut self, var: &Variable, value: Constant) -> Result<(), LogicError> {
        if value.dtype != var.dtype {
            return Err(LogicError::TypeMismatch(format!(
                "cannot bind {} of type {} to variable `{}` of type {}",
                value, value.dtype, var.name, var.dtype
            )));
        }
        self.assignments.insert(var.name.clone(), value);
        Ok(())
    }

    pub fn with(mut self, var: &Variable, value: Constant) -> Result<Self, LogicError> {
        self.bind(var, value)?;
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<&Constant> {
        self.assignments.get(name)
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn price(n: &str) -> Term {
        Term::var(n, "price")
    }

    #[test]
    fn display_clause() {
        let head = Literal::new("UpDown", vec![price("x"), price("y"), price("z")]);
        let body = vec![
            Literal::new("Up", vec![price("x"), price("y")]),
            Literal::new("Down", vec![price("y"), price("z")]).negate(),
        ];
        let c = HornClause::new(head, body).unwrap();
        assert_eq!(c.to_string(), "UpDown(x, y, z) <- Up(x, y) & !Down(y, z)");
    }

    #[test]
    fn negated_head_rejected() {
        let head = Literal::new("P", vec![price("x")]).negate();
        assert!(HornClause::new(head, vec![]).is_err());
    }

    #[test]
    fn rule_heads_must_agree() {
        let a = HornClause::new(Literal::new("P", vec![price("x")]), vec![]).unwrap();
        let b = HornClause::new(Literal::new("Q", vec![price("x")]), vec![]).unwrap();
        assert!(Rule::new(vec![a.clone(), b.clone()]).is_err());
        let mut r = Rule::single(a);
        assert!(r.push(b).is_err());
        assert_eq!(r.clauses().len(), 1);
    }

    #[test]
    fn functional_expression_arity() {
        let sym = FunctionSymbol {
            name: "StockPrice".into(),
            arg_types: vec!["stock".into()],
            result_type: "price".into(),
        };
        let ok = FunctionalExpression::new(&sym, vec![Term::var("x", "stock")]);
        assert!(ok.is_ok());
        let bad = FunctionalExpression::new(&sym, vec![]);
        assert!(matches!(bad, Err(LogicError::Arity { .. })));
    }

    #[test]
    fn binding_checks_types() {
        let x = Variable::new("x", "price");
        let mut b = Binding::new();
        assert!(b.bind(&x, Constant::num(3.0, "volume")).is_err());
        assert!(b.bind(&x, Constant::num(3.0, "price")).is_ok());
    }

    #[test]
    fn existentials_exclude_head() {
        let head = Literal::new("P", vec![price("x")]);
        let body = vec![Literal::new("Q", vec![price("x"), price("w")])];
        let c = HornClause::new(head, body).unwrap();
        let ex = c.existential_variables();
        assert_eq!(ex.len(), 1);
        assert_eq!(ex[0].name, "w");
    }
}
