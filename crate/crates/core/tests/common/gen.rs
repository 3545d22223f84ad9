//! Seeded random generators for models, object models and well-typed
//! constraints.

use bocl_core::ast::{CollectionOperator, ConstraintAst, Expr, InfixOperator, IteratorKind, Stereotype, UnaryOperator};
use bocl_core::model::{
    validate_structural, AssociationEnd, Attribute, BinaryAssociation, ClassDef, LinkInstance, LiteralValue,
    Multiplicity, ObjectInstance, ObjectModel, PrimitiveType, StructuralModel,
};
use chrono::NaiveDate;
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Debug, Clone, PartialEq)]
enum Ty {
    Bool,
    Int,
    Real,
    Str,
    Date,
    Obj(String),
}

impl Ty {
    fn annotation(&self) -> String {
        match self {
            Ty::Bool => "Boolean".into(),
            Ty::Int => "Integer".into(),
            Ty::Real => "Real".into(),
            Ty::Str => "String".into(),
            Ty::Date => "Date".into(),
            Ty::Obj(c) => c.clone(),
        }
    }
}

const STRINGS: &[&str] = &["Children Library", "Main Library", "Colors", "", "it's", "John Doe"];
const REALS: &[f64] = &[0.0, 0.5, 1.5, 2.25, 20.0, 100.0, 0.001];

struct Gen<'a, R: Rng> {
    rng: &'a mut R,
    model: &'a StructuralModel,
    context: String,
    scope: Vec<(String, Ty)>,
    fresh: usize,
}

/// A random invariant on `context` whose body is well typed against `model`
/// and has depth at most `max_depth`. Literals are never negative; negation
/// is always an explicit unary minus, as the parser produces it.
pub fn random_constraint(
    rng: &mut impl Rng,
    model: &StructuralModel,
    context: &str,
    max_depth: usize,
) -> ConstraintAst {
    let mut g = Gen { rng, model, context: context.to_string(), scope: Vec::new(), fresh: 0 };
    let body = g.boolean(max_depth);
    let name = if g.rng.gen_bool(0.7) { Some(format!("inv{}", g.rng.gen_range(0..100))) } else { None };
    ConstraintAst { context: context.to_string(), stereotype: Stereotype::Inv, name, body }
}

/// A random Boolean expression on `context` in which the object variable
/// `var` of class `class` is in scope.
pub fn random_predicate(
    rng: &mut impl Rng,
    model: &StructuralModel,
    context: &str,
    (var, class): (&str, &str),
    max_depth: usize,
) -> Expr {
    let scope = vec![(var.to_string(), Ty::Obj(class.to_string()))];
    let mut g = Gen { rng, model, context: context.to_string(), scope, fresh: 0 };
    g.boolean(max_depth)
}

/// A random Integer- or Real-valued expression on `context`.
pub fn random_number(rng: &mut impl Rng, model: &StructuralModel, context: &str, max_depth: usize) -> Expr {
    let mut g = Gen { rng, model, context: context.to_string(), scope: Vec::new(), fresh: 0 };
    g.number(max_depth)
}

impl<R: Rng> Gen<'_, R> {
    fn pick<'s, T>(&mut self, items: &'s [T]) -> &'s T {
        items.choose(self.rng).expect("non-empty choice")
    }

    fn var_of(&mut self, ty: &Ty) -> Option<Expr> {
        let names: Vec<_> = self.scope.iter().filter(|(_, t)| t == ty).map(|(n, _)| n.clone()).collect();
        names.choose(self.rng).map(|n| Expr::variable(n.as_str()))
    }

    /// `self` or an object variable, followed by some single-valued navigation.
    fn object(&mut self, budget: usize) -> (Expr, String) {
        let objects: Vec<_> = self
            .scope
            .iter()
            .filter_map(|(n, t)| match t {
                Ty::Obj(c) => Some((n.clone(), c.clone())),
                _ => None,
            })
            .collect();
        let (mut expr, mut class) = match objects.choose(self.rng) {
            Some((n, c)) if self.rng.gen_bool(0.6) => (Expr::variable(n.as_str()), c.clone()),
            _ => (Expr::SelfRef, self.context.clone()),
        };
        let mut used = 0;
        while used < budget && self.rng.gen_bool(0.35) {
            let scalar: Vec<_> = self
                .model
                .navigable_ends(&class)
                .into_iter()
                .filter(|(_, e)| e.multiplicity.is_scalar())
                .map(|(_, e)| (e.name.clone(), e.target.clone()))
                .collect();
            let Some((role, target)) = scalar.choose(self.rng).cloned() else { break };
            expr = Expr::property(expr, role);
            class = target;
            used += 1;
        }
        (expr, class)
    }

    fn attribute(&mut self, ty: PrimitiveType, budget: usize) -> Option<Expr> {
        if budget == 0 {
            return None;
        }
        for _ in 0..4 {
            let (source, class) = self.object(budget - 1);
            let names: Vec<_> = self
                .model
                .class(&class)
                .map(|c| c.attributes.iter().filter(|a| a.ty == ty).map(|a| a.name.clone()).collect())
                .unwrap_or_default();
            if let Some(name) = names.choose(self.rng) {
                return Some(Expr::property(source, name.as_str()));
            }
        }
        None
    }

    /// An expression usable as the source of `->`, with its element type.
    fn collection(&mut self, budget: usize) -> (Expr, Ty) {
        debug_assert!(budget >= 1);
        let choice = self.rng.gen_range(0..10);
        if budget >= 2 && choice < 2 {
            let (source, elem) = self.collection(budget - 1);
            let kind = *self.pick(&[IteratorKind::Select, IteratorKind::Reject]);
            let body = self.iterator_body(&elem, budget - 1, |g, b| g.boolean(b));
            return (self.iterate(source, kind, &elem, body), elem);
        }
        if budget >= 2 && choice < 4 {
            let (source, elem) = self.collection(budget - 1);
            let result_ty = if self.rng.gen_bool(0.5) { Ty::Int } else { Ty::Obj(String::new()) };
            let mut produced = Ty::Int;
            let body = self.iterator_body(&elem, budget - 1, |g, b| match result_ty {
                Ty::Int => g.int(b),
                _ => {
                    let (e, c) = g.object(b);
                    produced = Ty::Obj(c);
                    e
                }
            });
            return (self.iterate(source, IteratorKind::Collect, &elem, body), produced);
        }
        if choice < 9 {
            let (source, class) = self.object(budget - 1);
            let ends: Vec<_> = self
                .model
                .navigable_ends(&class)
                .into_iter()
                .map(|(_, e)| (e.name.clone(), e.target.clone()))
                .collect();
            if let Some((role, target)) = ends.choose(self.rng).cloned() {
                return (Expr::property(source, role), Ty::Obj(target));
            }
        }
        // a lifted scalar
        if self.rng.gen_bool(0.5) {
            (self.int(budget - 1), Ty::Int)
        } else {
            let (e, c) = self.object(budget - 1);
            (e, Ty::Obj(c))
        }
    }

    fn iterator_body(
        &mut self,
        elem: &Ty,
        budget: usize,
        body: impl FnOnce(&mut Self, usize) -> Expr,
    ) -> (String, Expr) {
        let var = format!("i_{}", self.fresh);
        self.fresh += 1;
        self.scope.push((var.clone(), elem.clone()));
        let e = body(self, budget);
        self.scope.pop();
        (var, e)
    }

    fn iterate(&mut self, source: Expr, kind: IteratorKind, elem: &Ty, (var, body): (String, Expr)) -> Expr {
        let annotation = self.rng.gen_bool(0.5).then(|| elem.annotation());
        Expr::iterate(source, kind, var, annotation, body)
    }

    fn boolean(&mut self, budget: usize) -> Expr {
        if budget == 0 {
            return match self.var_of(&Ty::Bool) {
                Some(v) if self.rng.gen_bool(0.5) => v,
                _ => Expr::boolean(self.rng.gen()),
            };
        }
        let b = budget - 1;
        match self.rng.gen_range(0..14) {
            0 => Expr::boolean(self.rng.gen()),
            1 => Expr::unary(UnaryOperator::Not, self.boolean(b)),
            2 | 3 => {
                let op = *self.pick(&[InfixOperator::And, InfixOperator::Or]);
                Expr::binary(op, self.boolean(b), self.boolean(b))
            }
            4 | 5 => {
                let op = *self.pick(&COMPARISONS);
                Expr::binary(op, self.number(b), self.number(b))
            }
            6 => {
                let op = *self.pick(&[InfixOperator::Eq, InfixOperator::Ne]);
                if self.rng.gen_bool(0.5) {
                    Expr::binary(op, self.string(b), self.string(b))
                } else {
                    Expr::binary(op, self.boolean(b), self.boolean(b))
                }
            }
            7 => match (self.attribute(PrimitiveType::Date, b), self.attribute(PrimitiveType::Date, b)) {
                (Some(l), Some(r)) => Expr::binary(*self.pick(&COMPARISONS), l, r),
                _ => Expr::boolean(self.rng.gen()),
            },
            8 => {
                let (l, lc) = self.object(b);
                let (r, rc) = self.object(b);
                let op = *self.pick(&[InfixOperator::Eq, InfixOperator::Ne]);
                if lc == rc {
                    Expr::binary(op, l, r)
                } else {
                    Expr::binary(op, l.clone(), l)
                }
            }
            9 => Expr::if_then_else(self.boolean(b), self.boolean(b), self.boolean(b)),
            10 | 11 if b >= 1 => {
                let (source, elem) = self.collection(b);
                let kind = *self.pick(&[IteratorKind::ForAll, IteratorKind::Exists]);
                let body = self.iterator_body(&elem, b, |g, b| g.boolean(b));
                self.iterate(source, kind, &elem, body)
            }
            12 if b >= 1 => {
                let (source, _) = self.collection(b);
                let op = *self.pick(&[CollectionOperator::IsEmpty, CollectionOperator::NotEmpty]);
                Expr::collection_op(source, op)
            }
            _ => self.attribute(PrimitiveType::Bool, budget).unwrap_or_else(|| Expr::boolean(true)),
        }
    }

    fn number(&mut self, budget: usize) -> Expr {
        if self.rng.gen_bool(0.6) {
            self.int(budget)
        } else {
            self.real(budget)
        }
    }

    fn int_literal(&mut self) -> Expr {
        if self.rng.gen_bool(0.03) {
            Expr::int(i64::MAX)
        } else {
            Expr::int(self.rng.gen_range(0..=120))
        }
    }

    fn int(&mut self, budget: usize) -> Expr {
        if budget == 0 {
            return match self.var_of(&Ty::Int) {
                Some(v) if self.rng.gen_bool(0.5) => v,
                _ => self.int_literal(),
            };
        }
        let b = budget - 1;
        match self.rng.gen_range(0..9) {
            0 => self.int_literal(),
            1 | 2 => {
                let op = *self.pick(&[InfixOperator::Add, InfixOperator::Sub, InfixOperator::Mul]);
                Expr::binary(op, self.int(b), self.int(b))
            }
            3 => Expr::unary(UnaryOperator::Neg, self.int(b)),
            4 => Expr::if_then_else(self.boolean(b), self.int(b), self.int(b)),
            5 if b >= 1 => {
                let (source, _) = self.collection(b);
                Expr::collection_op(source, CollectionOperator::Size)
            }
            _ => self.attribute(PrimitiveType::Int, budget).unwrap_or_else(|| self.int_literal()),
        }
    }

    fn real(&mut self, budget: usize) -> Expr {
        let literal = |g: &mut Self| Expr::real(*g.pick(REALS));
        if budget == 0 {
            return match self.var_of(&Ty::Real) {
                Some(v) if self.rng.gen_bool(0.5) => v,
                _ => literal(self),
            };
        }
        let b = budget - 1;
        match self.rng.gen_range(0..9) {
            0 => literal(self),
            1 | 2 => {
                let op = *self.pick(&ARITHMETIC);
                Expr::binary(op, self.real(b), self.number(b))
            }
            3 => {
                let op = *self.pick(&ARITHMETIC);
                Expr::binary(op, self.int(b), self.real(b))
            }
            4 => Expr::binary(InfixOperator::Div, self.int(b), self.int(b)),
            5 => Expr::unary(UnaryOperator::Neg, self.real(b)),
            6 => Expr::if_then_else(self.boolean(b), self.real(b), self.real(b)),
            _ => self.attribute(PrimitiveType::Real, budget).unwrap_or_else(|| literal(self)),
        }
    }

    fn string(&mut self, budget: usize) -> Expr {
        if budget > 0 {
            match self.rng.gen_range(0..4) {
                0 => {
                    return Expr::if_then_else(
                        self.boolean(budget - 1),
                        self.string(budget - 1),
                        self.string(budget - 1),
                    )
                }
                1 | 2 => {
                    if let Some(attr) = self.attribute(PrimitiveType::Str, budget) {
                        return attr;
                    }
                }
                _ => {}
            }
        }
        match self.var_of(&Ty::Str) {
            Some(v) if self.rng.gen_bool(0.3) => v,
            _ => Expr::string(*self.pick(STRINGS)),
        }
    }
}

const COMPARISONS: [InfixOperator; 6] =
    [InfixOperator::Lt, InfixOperator::Le, InfixOperator::Gt, InfixOperator::Ge, InfixOperator::Eq, InfixOperator::Ne];
const ARITHMETIC: [InfixOperator; 4] = [InfixOperator::Add, InfixOperator::Sub, InfixOperator::Mul, InfixOperator::Div];

const MULTIPLICITIES: [(u32, Option<u32>); 5] = [(0, Some(1)), (1, Some(1)), (0, None), (1, None), (0, Some(2))];

/// A small valid structural model: up to three classes, each with an `n: int`
/// attribute plus random others, and up to three associations.
pub fn random_model(rng: &mut impl Rng) -> StructuralModel {
    let class_count = rng.gen_range(1..=3);
    let classes: Vec<ClassDef> = (0..class_count)
        .map(|i| {
            let mut attributes = vec![Attribute::new("n", PrimitiveType::Int)];
            for j in 0..rng.gen_range(0..=3) {
                attributes.push(Attribute::new(format!("a{j}"), *PrimitiveType::ALL.choose(rng).unwrap()));
            }
            ClassDef::new(format!("C{i}"), attributes)
        })
        .collect();
    fn end(rng: &mut impl Rng, role: String, class_count: usize) -> AssociationEnd {
        let (lower, upper) = *MULTIPLICITIES.choose(rng).unwrap();
        let target = format!("C{}", rng.gen_range(0..class_count));
        AssociationEnd::new(role, target, Multiplicity::new(lower, upper))
    }
    let associations = (0..rng.gen_range(0..=3))
        .map(|k| {
            let e1 = end(rng, format!("r{}", 2 * k), class_count);
            let e2 = end(rng, format!("r{}", 2 * k + 1), class_count);
            BinaryAssociation::new(format!("assoc{k}"), e1, e2)
        })
        .collect();
    let model = StructuralModel { name: "random".into(), classes, associations, constraints: Vec::new() };
    debug_assert!(validate_structural(&model).iter().all(|d| !d.is_error()));
    model
}

pub fn random_literal(rng: &mut impl Rng, ty: PrimitiveType) -> LiteralValue {
    match ty {
        PrimitiveType::Int => {
            if rng.gen_bool(0.05) {
                LiteralValue::Int(i64::MAX - 1)
            } else {
                LiteralValue::Int(rng.gen_range(-3..=5))
            }
        }
        PrimitiveType::Real => LiteralValue::Real(*[-1.5, 0.0, 0.5, 2.0, 2.5].choose(rng).unwrap()),
        PrimitiveType::Str => LiteralValue::Str(STRINGS.choose(rng).unwrap().to_string()),
        PrimitiveType::Bool => LiteralValue::Bool(rng.gen()),
        PrimitiveType::Date => LiteralValue::Date(
            NaiveDate::from_ymd_opt(2020, rng.gen_range(1..=2), rng.gen_range(1..=2)).expect("valid date"),
        ),
    }
}

/// Up to `max_objects` objects of random classes with random links. About one
/// slot in twenty is left unset.
pub fn random_objects(rng: &mut impl Rng, model: &StructuralModel, max_objects: usize) -> ObjectModel {
    let objects: Vec<ObjectInstance> = (0..rng.gen_range(0..=max_objects))
        .map(|i| {
            let class = model.classes.choose(rng).unwrap();
            let mut obj = ObjectInstance::new(format!("o{i}"), class.name.clone());
            for attr in &class.attributes {
                if rng.gen_bool(0.95) {
                    obj.slots.insert(attr.name.clone(), random_literal(rng, attr.ty));
                }
            }
            obj
        })
        .collect();
    let mut links = Vec::new();
    for assoc in &model.associations {
        let of =
            |class: &str| objects.iter().filter(|o| o.classifier == class).map(|o| o.name.clone()).collect::<Vec<_>>();
        let (left, right) = (of(&assoc.end1.target), of(&assoc.end2.target));
        if left.is_empty() || right.is_empty() {
            continue;
        }
        for _ in 0..rng.gen_range(0..=3) {
            let name = format!("l{}", links.len());
            let a = left.choose(rng).unwrap().clone();
            let b = right.choose(rng).unwrap().clone();
            links.push(LinkInstance::new(name, assoc.name.clone(), a, b));
        }
    }
    ObjectModel { name: "random objects".into(), objects, links }
}

/// Random bytes, biased towards the characters the lexer cares about.
pub fn random_bytes(rng: &mut impl Rng) -> Vec<u8> {
    const INTERESTING: &[u8] = b"'-><=.|:()0123456789eE_ \n\tselfcontextinv";
    (0..rng.gen_range(0..64))
        .map(|_| if rng.gen_bool(0.5) { *INTERESTING.choose(rng).unwrap() } else { rng.gen() })
        .collect()
}
