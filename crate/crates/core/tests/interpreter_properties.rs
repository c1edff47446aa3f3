//! Run-level properties of the interpreter over the bundled scenes.

use proptest::prelude::*;
use voxml::interpreter::{run, Outcome, RunConfig, Trace};
use voxml::io::{parse_logical_form, serialize_trace, Term};
use voxml::shipped;
use voxml::spatial::{distance, rcc8, world_box, Rcc8Value, SceneState, Vec3};

fn lf(s: &str) -> Term {
    parse_logical_form(s).unwrap()
}

fn put(scene: &SceneState, cfg: &RunConfig) -> Trace {
    run(&lf("put(apple, on(plate))"), shipped::voxicon(), scene, cfg).unwrap()
}

fn target_of(t: &Trace) -> Vec3 {
    t.event.args()[1].as_vector().expect("grounded target")
}

fn apple_at(s: &SceneState) -> Vec3 {
    s.get("apple1").unwrap().position
}

/// Checks the iterated DITL guard over every pair of consecutive moves.
fn ditl_holds(t: &Trace) -> bool {
    let target = target_of(t);
    let start = apple_at(&t.initial);
    let moves: Vec<Vec3> = t
        .transitions
        .iter()
        .filter(|tr| tr.action.pred() == Some("move"))
        .map(|tr| apple_at(&tr.post))
        .collect();
    moves.windows(2).all(|w| {
        distance(w[1], target) < distance(w[0], target)
            && distance(w[1], start) > distance(w[0], start)
    })
}

#[test]
fn put_is_deterministic() {
    let cfg = RunConfig::default();
    let a = put(&shipped::kitchen(), &cfg);
    let b = put(&shipped::kitchen(), &cfg);
    assert_eq!(a, b);
    assert_eq!(serialize_trace(&a), serialize_trace(&b));
}

#[test]
fn put_reaches_its_target_state() {
    let t = put(&shipped::kitchen(), &RunConfig::default());
    let target = target_of(&t);
    let at = |s: &SceneState| distance(apple_at(s), target) <= 1e-3;
    assert!(!at(&t.initial));
    assert!(at(t.final_state()));
    assert!(ditl_holds(&t));
}

#[test]
fn held_objects_move_rigidly() {
    let t = put(&shipped::kitchen(), &RunConfig::default());
    let held = lf("hold(agent1, apple1)");
    let offset =
        |s: &SceneState| s.get("apple1").unwrap().position - s.get("agent1").unwrap().position;
    let mut checked = 0;
    for tr in &t.transitions {
        if tr.pre.facts.contains(&held) && tr.post.facts.contains(&held) {
            let (a, b) = (offset(&tr.pre), offset(&tr.post));
            assert!(distance(a, b) < 1e-12, "{a:?} vs {b:?}");
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn slide_moves_only_while_in_contact() {
    let t = run(
        &lf("slide(block, table)"),
        shipped::voxicon(),
        &shipped::kitchen(),
        &RunConfig::default(),
    )
    .unwrap();
    assert_eq!(t.outcome, Outcome::Completed);
    let ec = |s: &SceneState| {
        rcc8(
            &world_box(s.get("block1").unwrap()),
            &world_box(s.get("table1").unwrap()),
            1e-6,
        )
    };
    assert_eq!(ec(&t.initial), Rcc8Value::EC);
    for tr in &t.transitions {
        assert_eq!(tr.action.pred(), Some("move"));
        assert_eq!(ec(&tr.pre), Rcc8Value::EC);
    }
    assert_ne!(ec(t.final_state()), Rcc8Value::EC);
    // oracle: the block leaves the table once its left face passes x = 1
    let left = -0.65;
    let expected = ((1.0f64 - left) / 0.1).floor() as usize + 1;
    assert_eq!(t.move_count(), expected);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn put_from_anywhere_on_the_table(x in -0.9..0.9f64, z in -0.5..0.5f64, speed in 0.03..0.4f64) {
        let mut scene = shipped::kitchen();
        scene.objects.get_mut("apple1").unwrap().position = Vec3::new(x, 0.845, z);
        let cfg = RunConfig { speed, ..RunConfig::default() };
        let t = put(&scene, &cfg);
        prop_assert_eq!(&t.outcome, &Outcome::Completed);
        // moves continue until the apple is within at_eps of the target
        let d = distance(Vec3::new(x, 0.845, z), target_of(&t));
        let ratio = (d - cfg.at_eps) / speed;
        prop_assume!((ratio - ratio.round()).abs() > 1e-6);
        prop_assert_eq!(t.move_count(), ratio.ceil() as usize);
        prop_assert_eq!(t.transitions.len(), t.move_count() + 2);
        prop_assert!(ditl_holds(&t));
        prop_assert!(distance(apple_at(t.final_state()), target_of(&t)) <= 1e-3);
        prop_assert!(t.final_state().facts.contains(&lf("hold(plate1, apple1)")));
        for w in t.transitions.windows(2) {
            prop_assert_eq!(&w[0].post, &w[1].pre);
        }
        for tr in &t.transitions {
            prop_assert_eq!(tr.post.tick, tr.pre.tick + 1);
        }
    }

    #[test]
    fn tick_limit_truncates(limit in 1u64..12) {
        let cfg = RunConfig { max_ticks: limit, ..RunConfig::default() };
        let t = put(&shipped::kitchen(), &cfg);
        prop_assert_eq!(t.outcome, Outcome::TickLimit);
        prop_assert_eq!(t.transitions.len() as u64, limit);
        prop_assert!(t.fired.is_empty());
    }
}
