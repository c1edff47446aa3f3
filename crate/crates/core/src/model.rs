//! The voxeme data model: the five entity kinds, their closed value sets and
//! structural validation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::io::term::Term;
use crate::spatial::Rcc8Value;

/// A token that is not a member of a closed enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown {kind} value `{found}`")]
pub struct UnknownValue {
    pub kind: &'static str,
    pub found: String,
}

token_enum! {
    /// Geometric primitive approximating an object's form.
    HeadShape, "head shape" {
        Prismatoid => "prismatoid",
        Pyramid => "pyramid",
        Wedge => "wedge",
        Parallelepiped => "parallelepiped",
        Cupola => "cupola",
        Frustum => "frustum",
        Cylindroid => "cylindroid",
        Ellipsoid => "ellipsoid",
        Hemiellipsoid => "hemiellipsoid",
        Bipyramid => "bipyramid",
        RectangularPrism => "rectangular_prism",
        Toroid => "toroid",
        Sheet => "sheet",
    }
}

token_enum! {
    Concavity, "concavity" {
        Concave => "concave",
        Flat => "flat",
        Convex => "convex",
    }
}

token_enum! {
    /// World axis.
    Axis, "axis" {
        X => "X",
        Y => "Y",
        Z => "Z",
    }
}

token_enum! {
    /// Plane spanned by two world axes.
    Plane, "plane" {
        XY => "XY",
        XZ => "XZ",
        YZ => "YZ",
    }
}

token_enum! {
    ProgramHead, "program head" {
        State => "state",
        Process => "process",
        Transition => "transition",
        Assignment => "assignment",
        Test => "test",
    }
}

token_enum! {
    /// Measurement scale of an attribute.
    ScaleKind, "scale" {
        Nominal => "nominal",
        Binary => "binary",
        Ordinal => "ordinal",
        Interval => "interval",
        Rational => "rational" | "ratio",
    }
}

token_enum! {
    Arity, "arity" {
        Transitive => "transitive",
        Intransitive => "intransitive",
    }
}

token_enum! {
    RelationClass, "relation class" {
        Config => "config" | "configuration",
        ForceDynamic => "force_dynamic",
    }
}

token_enum! {
    /// Object size relative to an in-world agent.
    EmbodimentScale, "embodiment scale" {
        SmallerThanAgent => "<agent",
        AgentSized => "agent",
        LargerThanAgent => ">agent",
    }
}

token_enum! {
    AffordanceKind, "affordance kind" {
        Gibsonian => "gibsonian",
        Telic => "telic",
    }
}

token_enum! {
    Space, "space" {
        World => "world",
        Object => "object",
    }
}

token_enum! {
    VoxemeKind, "voxeme kind" {
        Object => "object",
        Program => "program",
        Attribute => "attribute",
        Relation => "relation",
        Function => "function",
    }
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

impl Plane {
    /// The axis orthogonal to the plane; reflecting across the plane negates it.
    pub fn normal(self) -> Axis {
        match self {
            Plane::XY => Axis::Z,
            Plane::XZ => Axis::Y,
            Plane::YZ => Axis::X,
        }
    }
}

/// An axis with a direction, written `+Y` or `-Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedAxis {
    pub axis: Axis,
    pub positive: bool,
}

impl SignedAxis {
    pub fn new(axis: Axis, positive: bool) -> Self {
        SignedAxis { axis, positive }
    }

    pub fn sign(self) -> f64 {
        if self.positive {
            1.0
        } else {
            -1.0
        }
    }
}

impl std::str::FromStr for SignedAxis {
    type Err = UnknownValue;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || UnknownValue {
            kind: "signed axis",
            found: s.to_string(),
        };
        let (positive, rest) = match s.as_bytes().first() {
            Some(b'+') => (true, &s[1..]),
            Some(b'-') => (false, &s[1..]),
            _ => return Err(bad()),
        };
        let axis = rest.parse::<Axis>().map_err(|_| bad())?;
        Ok(SignedAxis { axis, positive })
    }
}

impl fmt::Display for SignedAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.positive { '+' } else { '-' }, self.axis)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lex {
    pub pred: String,
    pub gl_types: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeadRef {
    pub shape: HeadShape,
    pub coindex: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub name: String,
    pub coindex: Option<u32>,
    /// `leg+`: one or more, cardinality unstated.
    pub plural: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectTypeStructure {
    pub head: HeadRef,
    pub components: Vec<Component>,
    pub concavity: Concavity,
    /// World-relative rotational symmetry axes. Kept as a list so duplicates
    /// survive parsing and can be reported.
    pub rotat_sym: Vec<Axis>,
    pub reflect_sym: Vec<Plane>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum HabitatConstraint {
    /// `align(Y, E_Y)`: object axis aligned with an embedding-space axis.
    Align {
        object_axis: Axis,
        embedding_axis: Axis,
    },
    /// `top(+Y)`: the labeled face points along a signed world axis.
    FaceLabel {
        label: String,
        direction: SignedAxis,
    },
    /// `Z << Y`: extent along `lesser` is much smaller than along `greater`.
    RelativeDim { lesser: Axis, greater: Axis },
    /// A predicate over the object's components, e.g. `clear(seat)`.
    Predicate(Term),
}

/// One `LABEL = c1, c2` line inside a habitat group.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledConstraints {
    pub label: String,
    pub constraints: Vec<HabitatConstraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HabitatGroup {
    /// Habitat id `H[i]`; unindexed groups cannot be referenced by affordances.
    pub index: Option<u32>,
    pub entries: Vec<LabeledConstraints>,
}

impl HabitatGroup {
    pub fn constraints(&self) -> impl Iterator<Item = (&str, &HabitatConstraint)> {
        self.entries
            .iter()
            .flat_map(|e| e.constraints.iter().map(move |c| (e.label.as_str(), c)))
    }
}

/// Habitat groups for one of INTR/EXTR. `Elided` is written `...` and behaves
/// as an empty list.
#[derive(Debug, Clone, PartialEq)]
pub enum HabitatList {
    Elided,
    Given(Vec<HabitatGroup>),
}

impl HabitatList {
    pub fn groups(&self) -> &[HabitatGroup] {
        match self {
            HabitatList::Elided => &[],
            HabitatList::Given(g) => g,
        }
    }

    pub fn is_elided(&self) -> bool {
        matches!(self, HabitatList::Elided)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HabitatSpec {
    pub intrinsic: HabitatList,
    pub extrinsic: HabitatList,
}

impl HabitatSpec {
    pub fn groups(&self) -> impl Iterator<Item = &HabitatGroup> {
        self.intrinsic
            .groups()
            .iter()
            .chain(self.extrinsic.groups())
    }

    pub fn group(&self, index: u32) -> Option<&HabitatGroup> {
        self.groups().find(|g| g.index == Some(index))
    }

    /// Every constraint in every habitat whose entry carries `label`.
    pub fn labeled<'a>(&'a self, label: &'a str) -> impl Iterator<Item = &'a HabitatConstraint> {
        self.groups()
            .flat_map(|g| g.constraints())
            .filter(move |(l, _)| *l == label)
            .map(|(_, c)| c)
    }
}

/// An indexed slot (`A1`, `E2`, ...). `None` marks an elided `...` value.
#[derive(Debug, Clone, PartialEq)]
pub struct Slot<T> {
    pub index: u32,
    pub value: Option<T>,
}

impl<T> Slot<T> {
    pub fn given(index: u32, value: T) -> Self {
        Slot {
            index,
            value: Some(value),
        }
    }

    pub fn elided(index: u32) -> Self {
        Slot { index, value: None }
    }
}

/// Values present in a slot list, in slot order.
pub fn given<T>(slots: &[Slot<T>]) -> impl Iterator<Item = &T> {
    slots.iter().filter_map(|s| s.value.as_ref())
}

/// `H[1] -> [put(x, y)] hold(y, x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Affordance {
    pub kind: AffordanceKind,
    /// Conjunction of habitat references; empty means unconditioned.
    pub condition: Vec<u32>,
    pub event: Term,
    pub result: Option<Term>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Embodiment {
    pub scale: EmbodimentScale,
    pub movable: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObjectVoxeme {
    pub lex: Lex,
    pub ty: ObjectTypeStructure,
    pub habitat: HabitatSpec,
    pub afford_str: Vec<Slot<Affordance>>,
    pub embodiment: Embodiment,
}

impl ObjectVoxeme {
    pub fn component(&self, name: &str) -> Option<&Component> {
        self.ty.components.iter().find(|c| c.name == name)
    }
}

/// `x:physobj`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedVar {
    pub var: String,
    pub tag: String,
}

impl fmt::Display for TypedVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.var, self.tag)
    }
}

/// A program body step.
#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    /// A primitive action or a bare test.
    Primitive(Term),
    /// `while(test, body)`.
    While { test: Term, body: Box<Statement> },
    /// `test -> then`.
    Cond { test: Term, then: Box<Statement> },
}

impl Statement {
    /// Every term mentioned by the statement, tests included.
    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Statement::Primitive(t) => vec![t],
            Statement::While { test, body } | Statement::Cond { test, then: body } => {
                let mut v = vec![test];
                v.extend(body.terms());
                v
            }
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Primitive(t) => write!(f, "{t}"),
            Statement::While { test, body } => write!(f, "while({test}, {body})"),
            Statement::Cond { test, then } => write!(f, "{test} -> {then}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProgramVoxeme {
    pub lex: Lex,
    pub head: ProgramHead,
    pub args: Vec<Slot<TypedVar>>,
    pub body: Vec<Slot<Statement>>,
}

impl ProgramVoxeme {
    pub fn declared_args(&self) -> Vec<&TypedVar> {
        given(&self.args).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttributeVoxeme {
    pub lex: Lex,
    pub scale: ScaleKind,
    pub arity: Arity,
    pub arg: TypedVar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelationValue {
    Config(Rcc8Value),
    /// Never enumerated; stored verbatim and never evaluated.
    ForceDynamic(String),
}

impl RelationValue {
    pub fn class(&self) -> RelationClass {
        match self {
            RelationValue::Config(_) => RelationClass::Config,
            RelationValue::ForceDynamic(_) => RelationClass::ForceDynamic,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationVoxeme {
    pub lex: Lex,
    pub value: RelationValue,
    pub args: Vec<Slot<TypedVar>>,
}

/// `x -> HEAD`, or `x` alone for the whole voxeme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Referent {
    pub var: String,
    pub path: Vec<String>,
}

/// `dimension(n):n-k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mapping {
    pub reduce_by: u32,
}

/// `x -> HABITAT -> INTR[top(axis)]: intransitive`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArityRule {
    pub var: String,
    pub path: Vec<String>,
    pub arity: Arity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    pub space: Space,
    pub axis: SignedAxis,
    pub arity: Option<ArityRule>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionVoxeme {
    pub lex: Lex,
    pub arg: TypedVar,
    pub referent: Referent,
    pub mapping: Mapping,
    pub orientation: Orientation,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Voxeme {
    Object(ObjectVoxeme),
    Program(ProgramVoxeme),
    Attribute(AttributeVoxeme),
    Relation(RelationVoxeme),
    Function(FunctionVoxeme),
}

impl Voxeme {
    pub fn kind(&self) -> VoxemeKind {
        match self {
            Voxeme::Object(_) => VoxemeKind::Object,
            Voxeme::Program(_) => VoxemeKind::Program,
            Voxeme::Attribute(_) => VoxemeKind::Attribute,
            Voxeme::Relation(_) => VoxemeKind::Relation,
            Voxeme::Function(_) => VoxemeKind::Function,
        }
    }

    pub fn lex(&self) -> &Lex {
        match self {
            Voxeme::Object(v) => &v.lex,
            Voxeme::Program(v) => &v.lex,
            Voxeme::Attribute(v) => &v.lex,
            Voxeme::Relation(v) => &v.lex,
            Voxeme::Function(v) => &v.lex,
        }
    }

    pub fn pred(&self) -> &str {
        &self.lex().pred
    }

    pub fn as_object(&self) -> Option<&ObjectVoxeme> {
        match self {
            Voxeme::Object(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_program(&self) -> Option<&ProgramVoxeme> {
        match self {
            Voxeme::Program(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Issue {
    pub severity: Severity,
    /// Dotted field path, e.g. `TYPE.ROTATSYM`.
    pub path: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub pred: String,
    pub kind: VoxemeKind,
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn errors(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Issue> {
        self.issues
            .iter()
            .filter(|i| i.severity == Severity::Warning)
    }

    pub fn is_valid(&self) -> bool {
        self.errors().next().is_none()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let errors = self.errors().count();
        let warnings = self.issues.len() - errors;
        writeln!(
            f,
            "{} {}: {} error(s), {} warning(s)",
            self.kind, self.pred, errors, warnings
        )?;
        for issue in &self.issues {
            writeln!(f, "  {}: {}: {}", issue.severity, issue.path, issue.message)?;
        }
        Ok(())
    }
}

struct Checker {
    issues: Vec<Issue>,
}

impl Checker {
    fn error(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.issues.push(Issue {
            severity: Severity::Error,
            path: path.into(),
            message: message.into(),
        });
    }

    fn warn(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.issues.push(Issue {
            severity: Severity::Warning,
            path: path.into(),
            message: message.into(),
        });
    }

    fn lex(&mut self, lex: &Lex, needs_type: bool) {
        if lex.pred.trim().is_empty() {
            self.error("LEX.PRED", "empty predicate lexeme");
        }
        if needs_type && lex.gl_types.is_empty() {
            self.error("LEX.TYPE", "missing GL type");
        }
    }

    fn slots<T>(&mut self, slots: &[Slot<T>], path: &str, prefix: char) {
        let mut seen = BTreeSet::new();
        for slot in slots {
            if !seen.insert(slot.index) {
                self.error(
                    format!("{path}.{prefix}{}", slot.index),
                    "duplicate slot index",
                );
            }
            if slot.value.is_none() {
                self.warn(format!("{path}.{prefix}{}", slot.index), "elided field");
            }
        }
    }

    fn typed_vars<'a>(&mut self, vars: impl Iterator<Item = &'a TypedVar>, path: &str) {
        let mut seen = BTreeSet::new();
        for tv in vars {
            if tv.var.is_empty() {
                self.error(path, "empty argument variable");
            } else if !seen.insert(tv.var.as_str()) {
                self.error(path, format!("variable `{}` bound twice", tv.var));
            }
        }
    }
}

/// Checks every structural invariant of a parsed voxeme.
pub fn validate(voxeme: &Voxeme) -> ValidationReport {
    let mut c = Checker { issues: Vec::new() };
    match voxeme {
        Voxeme::Object(o) => validate_object(&mut c, o),
        Voxeme::Program(p) => validate_program(&mut c, p),
        Voxeme::Attribute(a) => {
            c.lex(&a.lex, false);
            c.typed_vars(std::iter::once(&a.arg), "TYPE.ARG");
        }
        Voxeme::Relation(r) => {
            c.lex(&r.lex, false);
            c.slots(&r.args, "TYPE.ARGS", 'A');
            c.typed_vars(given(&r.args), "TYPE.ARGS");
            if given(&r.args).count() < 2 {
                c.error("TYPE.ARGS", "relation needs at least two arguments");
            }
            if let RelationValue::ForceDynamic(tag) = &r.value {
                if tag.is_empty() {
                    c.error("TYPE.VALUE", "empty force-dynamic value");
                }
            }
        }
        Voxeme::Function(f) => {
            c.lex(&f.lex, false);
            c.typed_vars(std::iter::once(&f.arg), "TYPE.ARG");
            if f.mapping.reduce_by != 1 {
                c.error(
                    "TYPE.MAPPING",
                    format!(
                        "mapping must reduce dimension by exactly one, found n-{}",
                        f.mapping.reduce_by
                    ),
                );
            }
            if f.referent.var != f.arg.var {
                c.error(
                    "TYPE.REFERENT",
                    format!("referent variable `{}` is not the argument", f.referent.var),
                );
            }
            if let Some(rule) = &f.orientation.arity {
                if rule.var != f.arg.var {
                    c.error(
                        "TYPE.ORIENTATION.ARITY",
                        format!("arity rule variable `{}` is not the argument", rule.var),
                    );
                }
            }
        }
    }
    ValidationReport {
        pred: voxeme.pred().to_string(),
        kind: voxeme.kind(),
        issues: c.issues,
    }
}

fn validate_object(c: &mut Checker, o: &ObjectVoxeme) {
    c.lex(&o.lex, true);
    let ty = &o.ty;

    if let Some(tag) = ty.head.coindex {
        let matches = ty
            .components
            .iter()
            .filter(|comp| comp.coindex == Some(tag))
            .count();
        match matches {
            1 => {}
            0 => c.error("TYPE.HEAD", format!("unresolved coindex [{tag}]")),
            _ => c.error("TYPE.HEAD", format!("ambiguous coindex [{tag}]")),
        }
    }
    for comp in &ty.components {
        if comp.name.is_empty() {
            c.error("TYPE.COMPONENTS", "empty component name");
        }
    }

    let mut axes = BTreeSet::new();
    for a in &ty.rotat_sym {
        if !axes.insert(*a) {
            c.error("TYPE.ROTATSYM", format!("duplicate symmetry axis {a}"));
        }
    }
    let mut planes = BTreeSet::new();
    for p in &ty.reflect_sym {
        if !planes.insert(*p) {
            c.error("TYPE.REFLECTSYM", format!("duplicate symmetry plane {p}"));
        }
    }
    let max = primitive_symmetry(canonicalize_head(ty.head.shape, &ty.reflect_sym));
    for a in axes.difference(&max.rotational) {
        c.warn(
            "TYPE.ROTATSYM",
            format!("axis {a} exceeds the symmetry of head {}", ty.head.shape),
        );
    }
    for p in planes.difference(&max.reflection) {
        c.warn(
            "TYPE.REFLECTSYM",
            format!("plane {p} exceeds the symmetry of head {}", ty.head.shape),
        );
    }

    let mut indices = BTreeSet::new();
    for (name, list) in [
        ("HABITAT.INTR", &o.habitat.intrinsic),
        ("HABITAT.EXTR", &o.habitat.extrinsic),
    ] {
        if list.is_elided() {
            c.warn(name, "elided field");
        }
        for g in list.groups() {
            if let Some(i) = g.index {
                if !indices.insert(i) {
                    c.error(format!("{name}[{i}]"), "duplicate habitat index");
                }
            }
            for (label, con) in g.constraints() {
                if let HabitatConstraint::RelativeDim { lesser, greater } = con {
                    if lesser == greater {
                        c.error(
                            format!("{name}.{label}"),
                            format!("relative dimension compares {lesser} with itself"),
                        );
                    }
                }
            }
        }
    }

    c.slots(&o.afford_str, "AFFORD_STR", 'A');
    for slot in &o.afford_str {
        let Some(a) = &slot.value else { continue };
        let path = format!("AFFORD_STR.A{}", slot.index);
        for h in &a.condition {
            if o.habitat.group(*h).is_none() {
                c.error(&path, format!("unresolved habitat reference H[{h}]"));
            }
        }
        if let Some(result) = &a.result {
            let bound: BTreeSet<&str> = a.event.symbols().collect();
            for v in result.symbols() {
                if !bound.contains(v) {
                    c.error(&path, format!("result variable `{v}` not bound by event"));
                }
            }
        }
    }
}

fn validate_program(c: &mut Checker, p: &ProgramVoxeme) {
    c.lex(&p.lex, true);
    c.slots(&p.args, "TYPE.ARGS", 'A');
    c.typed_vars(given(&p.args), "TYPE.ARGS");
    c.slots(&p.body, "TYPE.BODY", 'E');
    if matches!(p.head, ProgramHead::Process | ProgramHead::Transition)
        && given(&p.body).next().is_none()
    {
        c.error("TYPE.BODY", format!("empty body for a {} program", p.head));
    }
    let declared: BTreeSet<&str> = given(&p.args).map(|a| a.var.as_str()).collect();
    for slot in &p.body {
        let Some(stmt) = &slot.value else { continue };
        let mut reported = BTreeSet::new();
        for term in stmt.terms() {
            for v in term.symbols() {
                if !declared.contains(v) && reported.insert(v) {
                    c.error(
                        format!("TYPE.BODY.E{}", slot.index),
                        format!("undeclared variable `{v}`"),
                    );
                }
            }
        }
    }
}

/// Unifies the two spellings of a box head: a parallelepiped with at least two
/// reflection planes is a rectangular prism.
pub fn canonicalize_head(head: HeadShape, reflect_sym: &[Plane]) -> HeadShape {
    let distinct: BTreeSet<&Plane> = reflect_sym.iter().collect();
    if head == HeadShape::Parallelepiped && distinct.len() >= 2 {
        HeadShape::RectangularPrism
    } else {
        head
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Symmetry {
    pub rotational: BTreeSet<Axis>,
    pub reflection: BTreeSet<Plane>,
}

impl Symmetry {
    pub fn full() -> Self {
        Symmetry {
            rotational: Axis::ALL.iter().copied().collect(),
            reflection: Plane::ALL.iter().copied().collect(),
        }
    }

    /// Symmetric about the vertical only: `{Y}` and `{XY, YZ}`.
    pub fn upright() -> Self {
        Symmetry {
            rotational: [Axis::Y].into(),
            reflection: [Plane::XY, Plane::YZ].into(),
        }
    }
}

/// Maximal world-relative symmetry of the most symmetric member of each head
/// family, placed upright with its base down.
pub fn primitive_symmetry(head: HeadShape) -> Symmetry {
    use HeadShape::*;
    match head {
        Prismatoid | Parallelepiped | Cylindroid | Ellipsoid | Bipyramid | RectangularPrism
        | Toroid => Symmetry::full(),
        // tapered toward +Y, or carrying a distinguished upper face
        Pyramid | Wedge | Cupola | Frustum | Hemiellipsoid | Sheet => Symmetry::upright(),
    }
}

/// Counts entries per key, for stats tables.
pub(crate) fn tally<K: Ord>(keys: impl Iterator<Item = K>) -> BTreeMap<K, usize> {
    let mut m = BTreeMap::new();
    for k in keys {
        *m.entry(k).or_insert(0) += 1;
    }
    m
}
