//! Innermost-out evaluation of logical forms against a voxicon and a scene.

use std::fmt;

use super::InterpError;
use crate::io::term::{Atom, Term};
use crate::model::{RelationValue, Voxeme, VoxemeKind};
use crate::spatial::region::eval_spatial_function_in;
use crate::spatial::{
    placement_region, rcc8, world_box, Rcc8Value, Region, SceneState, SpatialParams, Vec3,
};
use crate::voxicon::Voxicon;

/// The value a subterm evaluates to.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Instance(String),
    /// A point, remembering the instance it was placed on, if any.
    Location {
        point: Vec3,
        anchor: Option<String>,
    },
    Region(Region),
    /// A support patch awaiting the figure that will rest on it.
    Placement {
        ground: String,
        region: Region,
    },
    Truth(bool),
    Number(f64),
    /// A predication with grounded arguments that has no geometric value of
    /// its own, such as a program call or an attribute.
    Term(Term),
}

impl Value {
    /// The value as it appears inside a grounded term.
    pub fn to_term(&self) -> Term {
        match self {
            Value::Instance(id) => Term::sym(id.clone()),
            Value::Location { point, .. } => Term::vector(*point),
            Value::Region(r) => Term::vector(r.center()),
            Value::Placement { region, .. } => Term::vector(region.center()),
            Value::Truth(b) => Term::sym(if *b { "true" } else { "false" }),
            Value::Number(x) => Term::number(*x),
            Value::Term(t) => t.clone(),
        }
    }

    /// The value with locations replaced by the instance they were placed
    /// on, the form in which affordance events are matched.
    pub fn to_anchored_term(&self) -> Term {
        match self {
            Value::Location {
                anchor: Some(a), ..
            } => Term::sym(a.clone()),
            Value::Placement { ground, .. } => Term::sym(ground.clone()),
            v => v.to_term(),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Instance(id) => f.write_str(id),
            Value::Location { point, .. } => write!(f, "{point}"),
            Value::Region(r) => write!(f, "{r}"),
            Value::Placement { ground, region } => write!(f, "{region} on {ground}"),
            Value::Truth(b) => write!(f, "{b}"),
            Value::Number(x) => write!(f, "{}", crate::io::fmt_real(*x)),
            Value::Term(t) => write!(f, "{t}"),
        }
    }
}

/// One evaluated subterm, in evaluation order.
#[derive(Debug, Clone, PartialEq)]
pub struct LogEntry {
    pub source: Term,
    pub value: Value,
}

impl fmt::Display for LogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} => {}", self.source, self.value)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grounded {
    pub value: Value,
    /// Top-level arguments after evaluation, for binding program arguments.
    pub args: Vec<Value>,
    pub log: Vec<LogEntry>,
}

impl Grounded {
    pub fn term(&self) -> Term {
        self.value.to_term()
    }

    /// The grounded form with placed locations read as their supports.
    pub fn anchored_term(&self) -> Term {
        match self.value.to_term() {
            Term::Apply { pred, .. } => Term::apply(
                pred,
                self.args.iter().map(Value::to_anchored_term).collect(),
            ),
            t => t,
        }
    }
}

struct Grounder<'a> {
    voxicon: &'a Voxicon,
    scene: &'a SceneState,
    params: &'a SpatialParams,
    log: Vec<LogEntry>,
}

/// Resolves atoms to scene instances and evaluates relations and functions
/// bottom-up, left to right.
pub fn ground(
    term: &Term,
    voxicon: &Voxicon,
    scene: &SceneState,
    params: &SpatialParams,
) -> Result<Grounded, InterpError> {
    let mut g = Grounder {
        voxicon,
        scene,
        params,
        log: Vec::new(),
    };
    let (value, args) = g.eval(term)?;
    Ok(Grounded {
        value,
        args,
        log: g.log,
    })
}

impl Grounder<'_> {
    fn record(&mut self, source: &Term, value: Value) -> Value {
        self.log.push(LogEntry {
            source: source.clone(),
            value: value.clone(),
        });
        value
    }

    fn resolve_atom(&self, name: &str) -> Result<String, InterpError> {
        if self.scene.get(name).is_some() {
            return Ok(name.to_string());
        }
        let found: Vec<&str> = self
            .scene
            .instances_of(name)
            .map(|o| o.id.as_str())
            .collect();
        match found.as_slice() {
            [one] => Ok(one.to_string()),
            [] => Err(InterpError::UnknownAtom(name.to_string())),
            many => Err(InterpError::AmbiguousAtom {
                atom: name.to_string(),
                candidates: many.iter().map(|s| s.to_string()).collect(),
            }),
        }
    }

    fn eval(&mut self, term: &Term) -> Result<(Value, Vec<Value>), InterpError> {
        let (pred, args) = match term {
            Term::Atom(Atom::Symbol(s)) => {
                let v = Value::Instance(self.resolve_atom(s)?);
                return Ok((self.record(term, v), Vec::new()));
            }
            Term::Atom(Atom::Vector(p)) => {
                return Ok((
                    Value::Location {
                        point: *p,
                        anchor: None,
                    },
                    Vec::new(),
                ))
            }
            Term::Atom(Atom::Number(x)) => return Ok((Value::Number(*x), Vec::new())),
            Term::Apply { pred, args } => (pred.as_str(), args),
        };
        let mut values = Vec::with_capacity(args.len());
        for a in args {
            values.push(self.eval(a)?.0);
        }
        let value = self.apply(pred, &mut values)?;
        Ok((self.record(term, value), values))
    }

    fn instance_arg<'v>(
        &self,
        pred: &str,
        values: &'v [Value],
        i: usize,
    ) -> Result<&'v str, InterpError> {
        match values.get(i) {
            Some(Value::Instance(id)) => Ok(id),
            Some(other) => Err(InterpError::TypeMismatch {
                pred: pred.to_string(),
                position: i + 1,
                expected: "an object instance".into(),
                found: other.to_string(),
            }),
            None => Err(InterpError::Arity {
                pred: pred.to_string(),
                expected: i + 1,
                found: values.len(),
            }),
        }
    }

    fn expect_arity(&self, pred: &str, values: &[Value], n: usize) -> Result<(), InterpError> {
        if values.len() == n {
            Ok(())
        } else {
            Err(InterpError::Arity {
                pred: pred.to_string(),
                expected: n,
                found: values.len(),
            })
        }
    }

    fn rcc(&self, a: &str, b: &str) -> Rcc8Value {
        let boxed = |id: &str| world_box(self.scene.get(id).expect("grounded instance"));
        rcc8(&boxed(a), &boxed(b), self.params.eps)
    }

    fn apply(&mut self, pred: &str, values: &mut [Value]) -> Result<Value, InterpError> {
        if pred == "on" {
            self.expect_arity(pred, values, 1)?;
            let ground = self.instance_arg(pred, values, 0)?.to_string();
            let obj = self.scene.get(&ground).expect("grounded instance");
            let voxeme = self.voxicon.object(&obj.pred);
            let region = placement_region(pred, obj, voxeme, self.scene, self.params)?;
            return Ok(Value::Placement { ground, region });
        }
        if let Ok(r) = pred.parse::<Rcc8Value>() {
            self.expect_arity(pred, values, 2)?;
            let a = self.instance_arg(pred, values, 0)?;
            let b = self.instance_arg(pred, values, 1)?;
            return Ok(Value::Truth(self.rcc(a, b) == r));
        }
        let Some(voxeme) = self.voxicon.lookup_any(pred).next() else {
            return Err(InterpError::UnknownPredicate(pred.to_string()));
        };
        let voxeme = self
            .voxicon
            .lookup(pred, VoxemeKind::Program)
            .or_else(|| self.voxicon.lookup(pred, VoxemeKind::Function))
            .or_else(|| self.voxicon.lookup(pred, VoxemeKind::Relation))
            .unwrap_or(voxeme);
        match voxeme {
            Voxeme::Program(p) => {
                let declared = p.declared_args();
                let has_agent = declared.iter().any(|a| a.tag == "agent");
                let n = values.len();
                if !(n == declared.len() || (has_agent && n + 1 == declared.len())) {
                    return Err(InterpError::Arity {
                        pred: pred.to_string(),
                        expected: declared.len(),
                        found: n,
                    });
                }
                self.settle_placements(values);
                Ok(Value::Term(Term::apply(
                    pred,
                    values.iter().map(Value::to_term).collect(),
                )))
            }
            Voxeme::Function(f) => {
                self.expect_arity(pred, values, 1)?;
                let id = self.instance_arg(pred, values, 0)?;
                let obj = self.scene.get(id).expect("grounded instance");
                let region = eval_spatial_function_in(
                    f,
                    &Region::Box(world_box(obj)),
                    &obj.rotation_matrix(),
                )?;
                Ok(Value::Region(region))
            }
            Voxeme::Relation(r) => {
                let arity = crate::model::given(&r.args).count();
                self.expect_arity(pred, values, arity)?;
                match &r.value {
                    RelationValue::Config(want) => {
                        let ids = (0..arity)
                            .map(|i| self.instance_arg(pred, values, i).map(str::to_string))
                            .collect::<Result<Vec<_>, _>>()?;
                        let holds = ids.windows(2).all(|w| self.rcc(&w[0], &w[1]) == *want);
                        Ok(Value::Truth(holds))
                    }
                    RelationValue::ForceDynamic(_) => Err(InterpError::Unsupported(format!(
                        "force-dynamic relation `{pred}` cannot be evaluated"
                    ))),
                }
            }
            Voxeme::Attribute(_) | Voxeme::Object(_) => {
                self.settle_placements(values);
                Ok(Value::Term(Term::apply(
                    pred,
                    values.iter().map(Value::to_term).collect(),
                )))
            }
        }
    }

    /// Turns pending placements into points once the figure is known: the
    /// patch center raised by half the figure's height, where the figure is
    /// the first instance argument of the same application.
    fn settle_placements(&self, values: &mut [Value]) {
        let figure = values.iter().find_map(|v| match v {
            Value::Instance(id) => self.scene.get(id),
            _ => None,
        });
        let lift = figure.map_or(0.0, |o| world_box(o).extents().y * 0.5);
        for v in values.iter_mut() {
            if let Value::Placement { ground, region } = v {
                let c = region.center();
                *v = Value::Location {
                    point: Vec3::new(c.x, c.y + lift, c.z),
                    anchor: Some(ground.clone()),
                };
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_logical_form;
    use crate::shipped;

    fn run(lf: &str) -> Result<Grounded, InterpError> {
        ground(
            &parse_logical_form(lf).unwrap(),
            shipped::voxicon(),
            &shipped::kitchen(),
            &SpatialParams::default(),
        )
    }

    #[test]
    fn atoms_resolve_to_instances() {
        assert_eq!(run("apple").unwrap().term(), Term::sym("apple1"));
        assert_eq!(run("apple1").unwrap().term(), Term::sym("apple1"));
        assert_eq!(
            run("unicorn").unwrap_err(),
            InterpError::UnknownAtom("unicorn".into())
        );
        assert!(matches!(
            run("on(unicorn)"),
            Err(InterpError::UnknownAtom(_))
        ));
    }

    #[test]
    fn put_on_plate_is_innermost_out() {
        let g = run("put(apple, on(plate))").unwrap();
        let order: Vec<String> = g.log.iter().map(|e| e.source.to_string()).collect();
        assert_eq!(
            order,
            ["apple", "plate", "on(plate)", "put(apple, on(plate))"]
        );
        let Term::Apply { args, .. } = g.term() else {
            panic!()
        };
        assert_eq!(args[0], Term::sym("apple1"));
        let p = args[1].as_vector().unwrap();
        assert!(
            (p.x - 0.5).abs() < 1e-9 && (p.y - 0.865).abs() < 1e-9 && (p.z - 0.2).abs() < 1e-9,
            "{p}"
        );
        assert_eq!(g.anchored_term().to_string(), "put(apple1, plate1)");
    }

    #[test]
    fn relations_and_functions_evaluate() {
        assert_eq!(run("EC(block, table)").unwrap().value, Value::Truth(true));
        assert_eq!(run("DC(block, agent1)").unwrap().value, Value::Truth(true));
        assert_eq!(
            run("is_touching(apple, table)").unwrap().value,
            Value::Truth(true)
        );
        let top = run("top(table)").unwrap().value;
        let Value::Region(r) = top else {
            panic!("{top:?}")
        };
        assert_eq!(r.dimension(), 2);
        assert_eq!(r.bounds().min.y, 0.8);
    }

    #[test]
    fn grounding_errors() {
        assert!(matches!(
            run("frobnicate(apple)"),
            Err(InterpError::UnknownPredicate(_))
        ));
        assert!(matches!(run("put(apple)"), Err(InterpError::Arity { .. })));
        assert!(matches!(run("EC(apple)"), Err(InterpError::Arity { .. })));
        assert!(matches!(
            run("top(<1, 2, 3>)"),
            Err(InterpError::TypeMismatch { .. })
        ));
    }
}
