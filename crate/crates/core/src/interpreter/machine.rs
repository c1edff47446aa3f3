//! Program voxemes as deterministic state machines.

use std::collections::BTreeMap;

use super::ground::Value;
use super::{InterpError, RunConfig};
use crate::io::term::Term;
use crate::model::{given, ProgramVoxeme, Statement};
use crate::spatial::{distance, rcc8, world_box, Rcc8Value, SceneState, Vec3};

/// Actions a machine performs; each consumes one tick.
pub const ACTIONS: &[&str] = &["move", "grasp", "ungrasp"];

/// Variable bindings for one program call.
pub type Binding = BTreeMap<String, Value>;

/// One body step with variables replaced by their values.
#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    Act(Term),
    /// A bare test; the run is stuck if it fails.
    Check(Term),
    Loop {
        test: Term,
        act: Term,
    },
    Cond {
        test: Term,
        act: Term,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Machine {
    pub steps: Vec<Step>,
    pub pc: usize,
    /// Where `move` heads: the first location-valued argument.
    pub target: Option<Vec3>,
}

/// What a single `step` did.
#[derive(Debug, Clone, PartialEq)]
pub enum Tick {
    /// An action was performed, advancing time by one tick.
    Acted(SceneState, Term),
    /// Control moved on without consuming a tick.
    Advanced,
    Finished,
    Stuck(String),
}

fn substitute(t: &Term, b: &Binding) -> Result<Term, InterpError> {
    match t {
        Term::Apply { pred, args } => Ok(Term::apply(
            pred.clone(),
            args.iter()
                .map(|a| substitute(a, b))
                .collect::<Result<_, _>>()?,
        )),
        other => match other.as_symbol() {
            Some(v) => b
                .get(v)
                .map(Value::to_term)
                .ok_or_else(|| InterpError::UnboundArgument(v.to_string())),
            None => Ok(other.clone()),
        },
    }
}

fn check_action(t: &Term) -> Result<(), InterpError> {
    match t.pred() {
        Some(p) if ACTIONS.contains(&p) => Ok(()),
        Some(p) => Err(InterpError::UnknownPrimitive(p.to_string())),
        None => Err(InterpError::UnknownPrimitive(t.to_string())),
    }
}

fn check_test(t: &Term) -> Result<(), InterpError> {
    match t.pred() {
        Some("not") if t.args().len() == 1 => check_test(&t.args()[0]),
        Some("hold" | "at") => Ok(()),
        Some(p) if p.parse::<Rcc8Value>().is_ok() => Ok(()),
        Some(p) => Err(InterpError::UnknownPrimitive(p.to_string())),
        None => Err(InterpError::UnknownPrimitive(t.to_string())),
    }
}

fn act_of(s: &Statement) -> Result<&Term, InterpError> {
    match s {
        Statement::Primitive(t) => Ok(t),
        _ => Err(InterpError::Unsupported("nested control statements".into())),
    }
}

/// Builds the machine for `p` under `b`. Every declared argument must be
/// bound; actions and tests must be interpreter primitives.
pub fn operationalize(p: &ProgramVoxeme, b: &Binding) -> Result<Machine, InterpError> {
    for a in p.declared_args() {
        if !b.contains_key(&a.var) {
            return Err(InterpError::UnboundArgument(a.var.clone()));
        }
    }
    let mut steps = Vec::new();
    for stmt in given(&p.body) {
        let step = match stmt {
            Statement::Primitive(t) => {
                let t = substitute(t, b)?;
                if check_action(&t).is_ok() {
                    Step::Act(t)
                } else {
                    check_test(&t)?;
                    Step::Check(t)
                }
            }
            Statement::While { test, body } => {
                let act = substitute(act_of(body)?, b)?;
                check_action(&act)?;
                let test = substitute(test, b)?;
                check_test(&test)?;
                Step::Loop { test, act }
            }
            Statement::Cond { test, then } => {
                let act = substitute(act_of(then)?, b)?;
                check_action(&act)?;
                let test = substitute(test, b)?;
                check_test(&test)?;
                Step::Cond { test, act }
            }
        };
        steps.push(step);
    }
    let target = p.declared_args().iter().find_map(|a| match b.get(&a.var) {
        Some(Value::Location { point, .. }) => Some(*point),
        _ => None,
    });
    Ok(Machine {
        steps,
        pc: 0,
        target,
    })
}

fn instance(t: &Term) -> Result<&str, String> {
    t.as_symbol()
        .ok_or_else(|| format!("`{t}` is not an instance"))
}

/// Evaluates a guard in `scene`.
pub fn eval_test(t: &Term, scene: &SceneState, cfg: &RunConfig) -> Result<bool, String> {
    let args = t.args();
    match t.pred() {
        Some("not") => match args {
            [inner] => Ok(!eval_test(inner, scene, cfg)?),
            _ => Err(format!("`{t}` needs one argument")),
        },
        Some("hold") => Ok(scene.facts.contains(t)),
        Some("at") => {
            let [y, z] = args else {
                return Err(format!("`{t}` needs two arguments"));
            };
            let obj = scene
                .get(instance(y)?)
                .ok_or_else(|| format!("no instance `{y}`"))?;
            let p = match (z.as_vector(), z.as_symbol().and_then(|s| scene.get(s))) {
                (Some(p), _) => p,
                (None, Some(o)) => o.position,
                _ => return Err(format!("`{z}` is not a location")),
            };
            Ok(distance(obj.position, p) <= cfg.at_eps)
        }
        Some(p) => {
            let want: Rcc8Value = p.parse().map_err(|_| format!("unknown test `{p}`"))?;
            let [a, b] = args else {
                return Err(format!("`{t}` needs two arguments"));
            };
            let get = |x: &Term| -> Result<_, String> {
                let id = instance(x)?;
                scene
                    .get(id)
                    .map(world_box)
                    .ok_or_else(|| format!("no instance `{id}`"))
            };
            Ok(rcc8(&get(a)?, &get(b)?, cfg.spatial.eps) == want)
        }
        None => Err(format!("`{t}` is not a test")),
    }
}

/// The object whose position `move(mover)` steers: whatever the mover holds,
/// otherwise the mover itself.
fn tracked(scene: &SceneState, mover: &str) -> String {
    scene
        .facts
        .iter()
        .find_map(|f| match (f.pred(), f.args()) {
            (Some("hold"), [x, y]) if x.as_symbol() == Some(mover) => {
                y.as_symbol().map(str::to_string)
            }
            _ => None,
        })
        .unwrap_or_else(|| mover.to_string())
}

/// Whether the tracked object already sits on the target.
fn target_reached(m: &Machine, scene: &SceneState, act: &Term, cfg: &RunConfig) -> bool {
    let (Some(target), Some(mover)) = (m.target, act.args().first().and_then(Term::as_symbol))
    else {
        return false;
    };
    scene
        .get(&tracked(scene, mover))
        .is_some_and(|o| distance(o.position, target) <= cfg.at_eps)
}

fn translate(scene: &mut SceneState, mover: &str, by: Vec3) {
    let mut group = scene.carried_by(mover);
    group.push(mover.to_string());
    for id in group {
        if let Some(o) = scene.objects.get_mut(&id) {
            o.position += by;
        }
    }
}

/// Performs one action, returning the post-state and the logged action term.
fn perform(
    m: &Machine,
    scene: &SceneState,
    act: &Term,
    cfg: &RunConfig,
) -> Result<(SceneState, Term), String> {
    let mut next = scene.clone();
    next.tick += 1;
    let args = act.args();
    let logged = match act.pred() {
        Some("move") => {
            let mover = instance(args.first().ok_or("move needs a mover")?)?;
            if next.get(mover).is_none() {
                return Err(format!("no instance `{mover}`"));
            }
            match m.target {
                Some(target) => {
                    let anchor = next
                        .get(&tracked(&next, mover))
                        .expect("tracked instance")
                        .position;
                    let gap = target - anchor;
                    let d = gap.norm();
                    let by = if d <= cfg.speed {
                        gap
                    } else {
                        gap * (cfg.speed / d)
                    };
                    translate(&mut next, mover, by);
                    Term::apply(
                        "move",
                        vec![
                            Term::sym(mover),
                            Term::apply("toward", vec![Term::vector(target)]),
                        ],
                    )
                }
                None => {
                    let dir = Vec3::new(1.0, 0.0, 0.0);
                    translate(&mut next, mover, dir * cfg.speed);
                    Term::apply(
                        "move",
                        vec![
                            Term::sym(mover),
                            Term::apply("along", vec![Term::vector(dir)]),
                        ],
                    )
                }
            }
        }
        Some("grasp") => {
            let [x, y] = args else {
                return Err(format!("`{act}` needs two arguments"));
            };
            let (holder, held) = (instance(x)?, instance(y)?);
            if holder == held || next.get(holder).is_none() {
                return Err(format!("cannot perform `{act}`"));
            }
            let obj = next
                .objects
                .get_mut(held)
                .ok_or_else(|| format!("no instance `{held}`"))?;
            obj.attached_to = Some(holder.to_string());
            next.facts
                .insert(Term::apply("hold", vec![x.clone(), y.clone()]));
            act.clone()
        }
        Some("ungrasp") => {
            let [x, y] = args else {
                return Err(format!("`{act}` needs two arguments"));
            };
            let held = instance(y)?;
            if let Some(obj) = next.objects.get_mut(held) {
                if obj.attached_to.as_deref() == x.as_symbol() {
                    obj.attached_to = None;
                }
            }
            next.facts
                .remove(&Term::apply("hold", vec![x.clone(), y.clone()]));
            act.clone()
        }
        _ => return Err(format!("unknown action `{act}`")),
    };
    Ok((next, logged))
}

impl Machine {
    pub fn is_finished(&self) -> bool {
        self.pc >= self.steps.len()
    }

    /// Executes one primitive or settles one guard.
    pub fn step(&mut self, scene: &SceneState, cfg: &RunConfig) -> Tick {
        let Some(step) = self.steps.get(self.pc).cloned() else {
            return Tick::Finished;
        };
        let result = match &step {
            Step::Act(act) => perform(self, scene, act, cfg).map(|(s, a)| {
                self.pc += 1;
                Tick::Acted(s, a)
            }),
            Step::Check(test) => eval_test(test, scene, cfg).map(|ok| {
                if ok {
                    self.pc += 1;
                    Tick::Advanced
                } else {
                    Tick::Stuck(format!("test `{test}` failed"))
                }
            }),
            Step::Loop { test, act } => match eval_test(test, scene, cfg) {
                Ok(true) if act.pred() == Some("move") && target_reached(self, scene, act, cfg) => {
                    self.pc += 1;
                    Ok(Tick::Advanced)
                }
                Ok(true) => perform(self, scene, act, cfg).map(|(s, a)| Tick::Acted(s, a)),
                Ok(false) => {
                    self.pc += 1;
                    Ok(Tick::Advanced)
                }
                Err(e) => Err(e),
            },
            Step::Cond { test, act } => match eval_test(test, scene, cfg) {
                Ok(true) => perform(self, scene, act, cfg).map(|(s, a)| {
                    self.pc += 1;
                    Tick::Acted(s, a)
                }),
                Ok(false) => Ok(Tick::Stuck(format!("condition `{test}` never holds"))),
                Err(e) => Err(e),
            },
        };
        result.unwrap_or_else(Tick::Stuck)
    }
}
