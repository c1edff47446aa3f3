//! Grounds logical forms and runs program voxemes as labeled transition
//! systems over a scene.

pub mod affordance;
pub mod ground;
pub mod machine;

use std::fmt;

use thiserror::Error;

use crate::io::term::Term;
use crate::spatial::{SceneState, SpatialError, SpatialParams};
use crate::voxicon::Voxicon;

pub use affordance::{fire_affordances, fired_results, unify};
pub use ground::{ground, Grounded, LogEntry, Value};
pub use machine::{eval_test, operationalize, Binding, Machine, Step, Tick};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InterpError {
    #[error("unknown atom `{0}`: no scene instance or voxeme by that name")]
    UnknownAtom(String),
    #[error("ambiguous atom `{atom}`: matches {}", .candidates.join(", "))]
    AmbiguousAtom {
        atom: String,
        candidates: Vec<String>,
    },
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("`{pred}` takes {expected} argument(s), found {found}")]
    Arity {
        pred: String,
        expected: usize,
        found: usize,
    },
    #[error("argument {position} of `{pred}` must be {expected}, found {found}")]
    TypeMismatch {
        pred: String,
        position: usize,
        expected: String,
        found: String,
    },
    #[error("head is not a program: `{0}`")]
    NotAProgram(String),
    #[error("unbound argument `{0}`")]
    UnboundArgument(String),
    #[error("unknown primitive `{0}`")]
    UnknownPrimitive(String),
    #[error("argument `{var}` is tagged {tag} but is bound to {value}")]
    BadBinding {
        var: String,
        tag: String,
        value: String,
    },
    #[error("the scene has no designated agent")]
    NoAgent,
    #[error("the scene has several designated agents: {}", .0.join(", "))]
    SeveralAgents(Vec<String>),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid run setting: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Spatial(#[from] SpatialError),
}

/// Run settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub max_ticks: u64,
    /// World units moved per tick.
    pub speed: f64,
    /// Distance within which `at(y, z)` holds.
    pub at_eps: f64,
    pub spatial: SpatialParams,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            max_ticks: 10_000,
            speed: 0.1,
            at_eps: 1e-3,
            spatial: SpatialParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Completed,
    TickLimit,
    Stuck(String),
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Completed => f.write_str("completed"),
            Outcome::TickLimit => f.write_str("tick_limit"),
            Outcome::Stuck(why) => write!(f, "stuck ({why})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub pre: SceneState,
    pub action: Term,
    pub post: SceneState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub initial: SceneState,
    pub transitions: Vec<Transition>,
    pub outcome: Outcome,
    /// The grounded call that was run.
    pub event: Term,
    /// Facts added by affordances after completion.
    pub fired: Vec<Term>,
    /// Contact tolerance used for the relation facts written with each record.
    pub contact_eps: f64,
}

impl Trace {
    pub fn final_state(&self) -> &SceneState {
        self.transitions.last().map_or(&self.initial, |t| &t.post)
    }

    pub fn actions(&self) -> impl Iterator<Item = &Term> {
        self.transitions.iter().map(|t| &t.action)
    }

    pub fn move_count(&self) -> usize {
        self.actions().filter(|a| a.pred() == Some("move")).count()
    }
}

/// The scene's single designated agent.
pub fn designated_agent(scene: &SceneState) -> Result<String, InterpError> {
    let agents: Vec<String> = scene.agents().map(|o| o.id.clone()).collect();
    match agents.as_slice() {
        [one] => Ok(one.clone()),
        [] => Err(InterpError::NoAgent),
        _ => Err(InterpError::SeveralAgents(agents)),
    }
}

fn check_tag(var: &str, tag: &str, v: &Value, scene: &SceneState) -> Result<(), InterpError> {
    let ok = match (tag, v) {
        ("agent", Value::Instance(id)) => scene.get(id).is_some_and(|o| o.agent),
        ("location", Value::Location { .. }) => true,
        ("location" | "agent", _) => false,
        (_, Value::Instance(_)) => true,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(InterpError::BadBinding {
            var: var.to_string(),
            tag: tag.to_string(),
            value: v.to_string(),
        })
    }
}

/// Binds the program's declared arguments to the call's values in order,
/// supplying the designated agent for an omitted agent argument.
pub fn bind(
    program: &crate::model::ProgramVoxeme,
    args: &[Value],
    scene: &SceneState,
) -> Result<Binding, InterpError> {
    let declared = program.declared_args();
    let implicit_agent =
        args.len() + 1 == declared.len() && declared.iter().any(|a| a.tag == "agent");
    let mut values = args.iter();
    let mut b = Binding::new();
    for a in &declared {
        let v = if implicit_agent && a.tag == "agent" {
            Value::Instance(designated_agent(scene)?)
        } else {
            match values.next() {
                Some(v) => v.clone(),
                None => return Err(InterpError::UnboundArgument(a.var.clone())),
            }
        };
        check_tag(&a.var, &a.tag, &v, scene)?;
        b.insert(a.var.clone(), v);
    }
    if values.next().is_some() {
        return Err(InterpError::Arity {
            pred: program.lex.pred.clone(),
            expected: declared.len(),
            found: args.len(),
        });
    }
    Ok(b)
}

/// The completed event as affordances see it: the program's non-agent
/// arguments, with placed locations read as their supports.
fn affordance_event(program: &crate::model::ProgramVoxeme, b: &Binding) -> Term {
    let args = program
        .declared_args()
        .iter()
        .filter(|a| a.tag != "agent")
        .filter_map(|a| b.get(&a.var).map(Value::to_anchored_term))
        .collect();
    Term::apply(program.lex.pred.clone(), args)
}

/// Grounds `lf`, runs its program to completion, a stuck state, or the tick
/// limit, and fires affordances of a completed event.
pub fn run(
    lf: &Term,
    voxicon: &Voxicon,
    scene: &SceneState,
    cfg: &RunConfig,
) -> Result<Trace, InterpError> {
    if cfg.max_ticks == 0 {
        return Err(InterpError::BadConfig("max ticks must be positive".into()));
    }
    if !(cfg.speed > 0.0 && cfg.speed.is_finite()) {
        return Err(InterpError::BadConfig(format!(
            "speed must be positive, got {}",
            cfg.speed
        )));
    }
    let head = lf.pred().unwrap_or_default();
    let program = voxicon.program(head).ok_or_else(|| {
        InterpError::NotAProgram(lf.pred().map_or_else(|| lf.to_string(), str::to_string))
    })?;
    let grounded = ground(lf, voxicon, scene, &cfg.spatial)?;
    let binding = bind(program, &grounded.args, scene)?;
    let mut machine = operationalize(program, &binding)?;

    let mut transitions: Vec<Transition> = Vec::new();
    let mut state = scene.clone();
    let outcome = loop {
        if machine.is_finished() {
            break Outcome::Completed;
        }
        match machine.step(&state, cfg) {
            Tick::Acted(next, action) => {
                if transitions.len() as u64 >= cfg.max_ticks {
                    break Outcome::TickLimit;
                }
                transitions.push(Transition {
                    pre: state,
                    action,
                    post: next.clone(),
                });
                state = next;
            }
            Tick::Advanced => {}
            Tick::Finished => break Outcome::Completed,
            Tick::Stuck(why) => break Outcome::Stuck(why),
        }
    };

    let event = grounded.term();
    let mut fired = Vec::new();
    if outcome == Outcome::Completed {
        fired = fired_results(
            &state,
            &affordance_event(program, &binding),
            voxicon,
            &cfg.spatial,
        );
        if let Some(last) = transitions.last_mut() {
            last.post.facts.extend(fired.iter().cloned());
        }
    }
    Ok(Trace {
        initial: scene.clone(),
        transitions,
        outcome,
        event,
        fired,
        contact_eps: cfg.spatial.eps,
    })
}
