//! Independent reference computations shared by the integration and
//! acceptance suites. Nothing here calls into the code under test except
//! to build inputs.

#![allow(dead_code)]

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use lawmine_core::types::DataType;
use lawmine_core::{Constant, FactStore, HornClause, Literal, Term, TypedSignature};

// ---------------------------------------------------------------- gain

/// Fixed-point fraction bits for the logarithm oracle.
const BITS: u64 = 384;

/// `2 atanh(num / den)` scaled by `2^BITS`, for `|num / den| < 1`.
fn two_atanh(num: &BigInt, den: &BigInt) -> BigInt {
    if num.is_negative() {
        return -two_atanh(&-num, den);
    }
    let z = (num << BITS) / den;
    let z2 = (&z * &z) >> BITS;
    let mut term = z;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !term.is_zero() {
        sum += &term / BigInt::from(2 * k + 1);
        term = (&term * &z2) >> BITS;
        k += 1;
    }
    sum * 2
}

/// `ln(num / den)` scaled by `2^BITS`.
fn ln_ratio(num: &BigUint, den: &BigUint) -> BigInt {
    let shift = num.bits() as i64 - den.bits() as i64;
    let (n, d) = if shift >= 0 {
        (BigInt::from(num.clone()), BigInt::from(den.clone() << shift as u64))
    } else {
        (BigInt::from(num.clone() << (-shift) as u64), BigInt::from(den.clone()))
    };
    // n / d now lies in (1/2, 2), so the series argument is below 1/3.
    let reduced = two_atanh(&(&n - &d), &(&n + &d));
    reduced + ln2() * shift
}

fn ln2() -> BigInt {
    two_atanh(&BigInt::one(), &BigInt::from(3))
}

/// `t_pp * (log2(p1 / (p1 + n1)) - log2(p0 / (p0 + n0)))`, evaluated with
/// integer arithmetic to well beyond double precision.
pub fn gain_oracle(p0: u64, n0: u64, p1: u64, n1: u64, t_pp: u64) -> f64 {
    assert!(p0 > 0);
    if p1 == 0 {
        return f64::NEG_INFINITY;
    }
    if t_pp == 0 {
        return 0.0;
    }
    let num = BigUint::from(p1) * (BigUint::from(p0) + BigUint::from(n0));
    let den = BigUint::from(p0) * (BigUint::from(p1) + BigUint::from(n1));
    let scaled = ln_ratio(&num, &den) * BigInt::from(t_pp);
    let q = BigRational::new(scaled, ln2());
    q.to_f64().expect("finite")
}

/// `|got - want| <= tol * |want|`, with exact agreement required at zero.
pub fn rel_close(got: f64, want: f64, tol: f64) -> bool {
    if want == 0.0 || !want.is_finite() {
        return got == want;
    }
    (got - want).abs() <= tol * want.abs()
}

// ---------------------------------------------------------------- fisher

/// Pascal's triangle up to row `n`; entries fit in `u128` for `n <= 120`.
pub fn pascal(n: usize) -> Vec<Vec<u128>> {
    let mut rows: Vec<Vec<u128>> = vec![vec![1]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut row = vec![1u128; i + 1];
        for j in 1..i {
            row[j] = prev[j - 1] + prev[j];
        }
        rows.push(row);
    }
    rows
}

/// `P(X >= a)` for the top-left cell under fixed margins, by summing the
/// hypergeometric mass over every table with those margins.
pub fn hypergeometric_upper_tail(tri: &[Vec<u128>], a: u64, b: u64, c: u64, d: u64) -> f64 {
    let (r, k, n) = ((a + b) as usize, (a + c) as usize, (a + b + c + d) as usize);
    if n == 0 {
        return 1.0;
    }
    let choose = |n: usize, k: usize| if k > n { 0 } else { tri[n][k] };
    let mut tail = BigUint::zero();
    let mut total = BigUint::zero();
    for x in 0..=r.min(k) {
        if k - x > n - r {
            continue;
        }
        let w = BigUint::from(choose(r, x)) * BigUint::from(choose(n - r, k - x));
        if x as u64 >= a {
            tail += &w;
        }
        total += w;
    }
    BigRational::new(tail.into(), total.into()).to_f64().expect("finite")
}

// ---------------------------------------------------------------- coverage

pub const OBJ: &str = "obj";

/// A random extensional knowledge base over one symbolic type.
pub struct RandomKb {
    pub constants: Vec<Constant>,
    /// `(name, arity, tuples as constant indices)`.
    pub predicates: Vec<(String, usize, HashSet<Vec<usize>>)>,
    pub store: FactStore,
}

impl RandomKb {
    pub fn generate(rng: &mut impl Rng, max_constants: usize, max_predicates: usize) -> RandomKb {
        let n = rng.gen_range(1..=max_constants);
        let constants: Vec<Constant> = (0..n).map(|i| Constant::sym(format!("c{i}"), OBJ)).collect();
        let mut store = FactStore::new();
        store.add_type(DataType::symbols(OBJ)).unwrap();
        for c in &constants {
            store.add_constant(c.clone()).unwrap();
        }
        let mut predicates = Vec::new();
        for p in 0..rng.gen_range(1..=max_predicates) {
            let arity = rng.gen_range(1..=3usize);
            let name = format!("P{p}");
            store
                .declare(TypedSignature::new(name.clone(), vec![OBJ.to_string(); arity]))
                .unwrap();
            let space = n.pow(arity as u32);
            let count = rng.gen_range(0..=space.min(150));
            let mut tuples = HashSet::new();
            for _ in 0..count {
                let t: Vec<usize> = (0..arity).map(|_| rng.gen_range(0..n)).collect();
                store
                    .add_fact(&name, t.iter().map(|&i| constants[i].clone()).collect())
                    .unwrap();
                tuples.insert(t);
            }
            predicates.push((name, arity, tuples));
        }
        RandomKb {
            constants,
            predicates,
            store,
        }
    }

    fn index_of(&self, c: &Constant) -> usize {
        self.constants.iter().position(|k| k == c).expect("known constant")
    }

    /// A random clause `T(X0, ..) <- body` with at most `max_existential`
    /// body-only variables. Negated literals only mention variables bound
    /// elsewhere.
    pub fn random_clause(&mut self, rng: &mut impl Rng, max_existential: usize) -> HornClause {
        let head_arity = rng.gen_range(1..=2usize);
        let target = format!("T{head_arity}");
        if self.store.signature(&target).is_none() {
            self.store
                .declare(TypedSignature::new(target.clone(), vec![OBJ.to_string(); head_arity]))
                .unwrap();
        }
        let head_vars: Vec<String> = (0..head_arity).map(|i| format!("X{i}")).collect();
        let existential = rng.gen_range(0..=max_existential);
        let pool: Vec<String> = head_vars
            .iter()
            .cloned()
            .chain((0..existential).map(|i| format!("E{i}")))
            .collect();
        let len = rng.gen_range(1..=3usize);
        let mut body: Vec<(Literal, Vec<String>)> = Vec::new();
        for _ in 0..len {
            let (name, arity, _) = &self.predicates[rng.gen_range(0..self.predicates.len())];
            let mut vars = Vec::new();
            let args = (0..*arity)
                .map(|_| {
                    if rng.gen_bool(0.15) {
                        Term::Const(self.constants[rng.gen_range(0..self.constants.len())].clone())
                    } else {
                        let v = pool[rng.gen_range(0..pool.len())].clone();
                        vars.push(v.clone());
                        Term::var(v, OBJ)
                    }
                })
                .collect();
            body.push((Literal::new(name.clone(), args), vars));
        }
        let chosen: Vec<bool> = body.iter().map(|_| rng.gen_bool(0.3)).collect();
        let positive_vars: Vec<&String> = body
            .iter()
            .zip(&chosen)
            .filter(|(_, c)| !**c)
            .flat_map(|((_, vs), _)| vs)
            .collect();
        let negate: Vec<bool> = body
            .iter()
            .zip(&chosen)
            .map(|((_, vs), c)| *c && vs.iter().all(|v| head_vars.contains(v) || positive_vars.contains(&v)))
            .collect();
        for (lit, n) in body.iter_mut().zip(negate) {
            if n {
                lit.0 = lit.0.clone().negate();
            }
        }
        let head = Literal::new(target, head_vars.iter().map(|v| Term::var(v.clone(), OBJ)).collect());
        HornClause::new(head, body.into_iter().map(|(l, _)| l).collect()).unwrap()
    }

    pub fn random_example(&self, rng: &mut impl Rng, clause: &HornClause) -> Vec<Constant> {
        (0..clause.head().args.len())
            .map(|_| self.constants[rng.gen_range(0..self.constants.len())].clone())
            .collect()
    }

    /// Tries every assignment of every body-only variable.
    pub fn brute_force_covers(&self, clause: &HornClause, example: &[Constant]) -> bool {
        let mut names: Vec<String> = Vec::new();
        for lit in clause.body() {
            for t in &lit.args {
                if let Term::Var(v) = t {
                    let head = clause.head().args.iter().any(|h| h.as_var().is_some_and(|hv| hv.name == v.name));
                    if !head && !names.contains(&v.name) {
                        names.push(v.name.clone());
                    }
                }
            }
        }
        let head_value = |name: &str| -> Option<usize> {
            clause
                .head()
                .args
                .iter()
                .position(|h| h.as_var().is_some_and(|v| v.name == name))
                .map(|i| self.index_of(&example[i]))
        };
        let n = self.constants.len();
        let combos = n.pow(names.len() as u32);
        'assignments: for code in 0..combos {
            let mut rest = code;
            let values: Vec<usize> = (0..names.len())
                .map(|_| {
                    let v = rest % n;
                    rest /= n;
                    v
                })
                .collect();
            for lit in clause.body() {
                let tuple: Vec<usize> = lit
                    .args
                    .iter()
                    .map(|t| match t {
                        Term::Var(v) => head_value(&v.name)
                            .unwrap_or_else(|| values[names.iter().position(|n| *n == v.name).unwrap()]),
                        Term::Const(c) => self.index_of(c),
                        _ => unreachable!("no function terms"),
                    })
                    .collect();
                let (_, _, tuples) = self.predicates.iter().find(|(p, _, _)| *p == lit.predicate).unwrap();
                if tuples.contains(&tuple) == lit.negated {
                    continue 'assignments;
                }
            }
            return true;
        }
        false
    }
}
