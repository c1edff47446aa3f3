//! RCC-8 classification against a point-sampling oracle and the calculus's
//! algebraic laws.

use proptest::prelude::*;
use voxml::spatial::{rcc8, Aabb, Rcc8Value, Vec3};

const EPS: f64 = 1e-6;

/// Sample points of a cubic lattice over [0, span]^3, stored as bitsets of the
/// lattice points inside a box's closure and its interior.
struct Lattice {
    steps: usize,
    step: f64,
}

#[derive(Clone)]
struct Sampled {
    closed: Vec<u64>,
    open: Vec<u64>,
}

impl Lattice {
    fn points(&self) -> usize {
        (self.steps + 1).pow(3)
    }

    fn sample(&self, b: &Aabb) -> Sampled {
        let words = self.points().div_ceil(64);
        let mut s = Sampled {
            closed: vec![0; words],
            open: vec![0; words],
        };
        let n = self.steps + 1;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let p = [
                        i as f64 * self.step,
                        j as f64 * self.step,
                        k as f64 * self.step,
                    ];
                    let lo = [b.min.x, b.min.y, b.min.z];
                    let hi = [b.max.x, b.max.y, b.max.z];
                    let closed = (0..3).all(|d| lo[d] <= p[d] && p[d] <= hi[d]);
                    let open = (0..3).all(|d| lo[d] < p[d] && p[d] < hi[d]);
                    let bit = (i * n + j) * n + k;
                    if closed {
                        s.closed[bit / 64] |= 1 << (bit % 64);
                    }
                    if open {
                        s.open[bit / 64] |= 1 << (bit % 64);
                    }
                }
            }
        }
        s
    }
}

fn meets(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Classifies from sampled point sets alone. Exact when every box corner lies
/// on the lattice and the lattice is twice as fine as the corner grid.
fn oracle(a: &Sampled, b: &Sampled) -> Rcc8Value {
    if !meets(&a.closed, &b.closed) {
        return Rcc8Value::DC;
    }
    if !meets(&a.open, &b.open) {
        return Rcc8Value::EC;
    }
    let a_in_b = subset(&a.closed, &b.closed);
    let b_in_a = subset(&b.closed, &a.closed);
    // a point of one closure on the other's boundary
    let boundary_hit = |inner: &Sampled, outer: &Sampled| {
        inner
            .closed
            .iter()
            .zip(outer.closed.iter().zip(&outer.open))
            .any(|(i, (c, o))| i & c & !o != 0)
    };
    match (a_in_b, b_in_a) {
        (true, true) => Rcc8Value::EQ,
        (true, false) if boundary_hit(a, b) => Rcc8Value::TPP,
        (true, false) => Rcc8Value::NTPP,
        (false, true) if boundary_hit(b, a) => Rcc8Value::TPPi,
        (false, true) => Rcc8Value::NTPPi,
        (false, false) => Rcc8Value::PO,
    }
}

fn integer_boxes(max: i32) -> Vec<Aabb> {
    let intervals: Vec<(f64, f64)> = (0..=max)
        .flat_map(|lo| (lo + 1..=max).map(move |hi| (lo as f64, hi as f64)))
        .collect();
    let mut out = Vec::new();
    for &(x0, x1) in &intervals {
        for &(y0, y1) in &intervals {
            for &(z0, z1) in &intervals {
                out.push(Aabb::new(Vec3::new(x0, y0, z0), Vec3::new(x1, y1, z1)));
            }
        }
    }
    out
}

#[test]
fn matches_sampling_oracle_on_all_integer_boxes() {
    let lattice = Lattice {
        steps: 6,
        step: 0.5,
    };
    let boxes = integer_boxes(3);
    assert_eq!(boxes.len(), 216);
    let sampled: Vec<Sampled> = boxes.iter().map(|b| lattice.sample(b)).collect();
    let mut seen = std::collections::BTreeSet::new();
    let mut pairs = 0;
    for (a, sa) in boxes.iter().zip(&sampled) {
        for (b, sb) in boxes.iter().zip(&sampled) {
            let want = oracle(sa, sb);
            assert_eq!(rcc8(a, b, EPS), want, "{a:?} vs {b:?}");
            seen.insert(want.as_str());
            pairs += 1;
        }
    }
    assert_eq!(pairs, 46_656);
    // the family exercises every relation
    assert_eq!(seen.len(), 8);
}

fn quarter_box() -> impl Strategy<Value = Aabb> {
    let interval = (0..12u32, 1..=12u32).prop_map(|(lo, len)| {
        let lo = lo.min(11);
        let hi = (lo + len).min(12);
        (lo as f64 / 4.0, hi as f64 / 4.0)
    });
    (interval.clone(), interval.clone(), interval).prop_map(|((x0, x1), (y0, y1), (z0, z1))| {
        Aabb::new(Vec3::new(x0, y0, z0), Vec3::new(x1, y1, z1))
    })
}

fn real_box() -> impl Strategy<Value = Aabb> {
    let interval = (-5.0..5.0f64, 0.01..4.0f64).prop_map(|(lo, len)| (lo, lo + len));
    (interval.clone(), interval.clone(), interval).prop_map(|((x0, x1), (y0, y1), (z0, z1))| {
        Aabb::new(Vec3::new(x0, y0, z0), Vec3::new(x1, y1, z1))
    })
}

/// Which of the eight base relations hold, each decided on its own from
/// interval comparisons with exact arithmetic.
fn holding(a: &Aabb, b: &Aabb) -> Vec<Rcc8Value> {
    let ax = [(a.min.x, a.max.x), (a.min.y, a.max.y), (a.min.z, a.max.z)];
    let bx = [(b.min.x, b.max.x), (b.min.y, b.max.y), (b.min.z, b.max.z)];
    let c = (0..3).all(|d| ax[d].0 <= bx[d].1 && bx[d].0 <= ax[d].1);
    let o = (0..3).all(|d| ax[d].0 < bx[d].1 && bx[d].0 < ax[d].1);
    let part = |p: &[(f64, f64); 3], q: &[(f64, f64); 3]| {
        (0..3).all(|d| q[d].0 <= p[d].0 && p[d].1 <= q[d].1)
    };
    let tangent = (0..3).any(|d| ax[d].0 == bx[d].0 || ax[d].1 == bx[d].1);
    let (p_ab, p_ba) = (part(&ax, &bx), part(&bx, &ax));
    let mut out = Vec::new();
    let mut add = |holds: bool, r| {
        if holds {
            out.push(r)
        }
    };
    add(!c, Rcc8Value::DC);
    add(c && !o, Rcc8Value::EC);
    add(o && !p_ab && !p_ba, Rcc8Value::PO);
    add(p_ab && p_ba, Rcc8Value::EQ);
    add(p_ab && !p_ba && tangent, Rcc8Value::TPP);
    add(p_ab && !p_ba && !tangent, Rcc8Value::NTPP);
    add(p_ba && !p_ab && tangent, Rcc8Value::TPPi);
    add(p_ba && !p_ab && !tangent, Rcc8Value::NTPPi);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn jointly_exhaustive_pairwise_disjoint(a in real_box(), b in real_box()) {
        let holds = holding(&a, &b);
        prop_assert_eq!(holds.len(), 1);
        prop_assert_eq!(rcc8(&a, &b, 0.0), holds[0]);
    }

    #[test]
    fn converse_consistent(a in real_box(), b in real_box()) {
        prop_assert_eq!(rcc8(&b, &a, EPS), rcc8(&a, &b, EPS).converse());
        prop_assert_eq!(rcc8(&a, &a, EPS), Rcc8Value::EQ);
    }

    #[test]
    fn quarter_grid_boxes_match_oracle(a in quarter_box(), b in quarter_box()) {
        let lattice = Lattice { steps: 24, step: 0.125 };
        let want = oracle(&lattice.sample(&a), &lattice.sample(&b));
        prop_assert_eq!(rcc8(&a, &b, EPS), want);
        prop_assert_eq!(holding(&a, &b), vec![want]);
    }
}
