#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use remedy_core::dsl::{parse_pa, validate_pa, CommRule, Declaration, PlannedArchitecture, RuleEndpoint};
use remedy_core::model::{pa_to_model, pa_to_model_with_domain_rules, to_package_view, PackageView};
use remedy_core::recovery::{CodeDependency, CodeElement, CodeFacts, CodeKind, Mapping, MappingSet};
use remedy_core::{AbstractionKind, DependencyKind, DomainRuleMatrix, Modality};

use AbstractionKind::*;

pub fn workspace() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn fixture(rel: &str) -> PathBuf {
    workspace().join("fixtures").join(rel)
}

pub fn read_fixture(rel: &str) -> String {
    std::fs::read_to_string(fixture(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn parse_fixture(rel: &str) -> PlannedArchitecture {
    parse_pa(&read_fixture(rel)).unwrap_or_else(|d| panic!("{rel}: {d:?}"))
}

pub fn robot() -> PlannedArchitecture {
    parse_fixture("robot/robot-corrected.remedy")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Size knobs for generated planned architectures.
#[derive(Clone, Copy)]
pub struct PaShape {
    pub max_loops: usize,
    pub max_per_kind: usize,
    pub max_rules: usize,
}

impl PaShape {
    pub const SMALL: PaShape = PaShape { max_loops: 2, max_per_kind: 1, max_rules: 6 };
    pub const MEDIUM: PaShape = PaShape { max_loops: 3, max_per_kind: 2, max_rules: 16 };
}

struct Ids(usize);

impl Ids {
    fn next(&mut self, kind: AbstractionKind) -> String {
        self.0 += 1;
        format!("{}{}", kind.selector().replace('-', "_"), self.0)
    }
}

fn leaves(rng: &mut ChaCha8Rng, ids: &mut Ids, kinds: &[AbstractionKind], max: usize) -> Vec<Declaration> {
    let mut out = Vec::new();
    for &k in kinds {
        for _ in 0..rng.gen_range(0..=max) {
            out.push(Declaration::new(k, ids.next(k)));
        }
    }
    out
}

fn random_loop(rng: &mut ChaCha8Rng, ids: &mut Ids, shape: PaShape) -> Declaration {
    let mut members = leaves(rng, ids, &[Monitor, Analyzer, Planner, Executor], shape.max_per_kind);
    if rng.gen_bool(0.6) {
        let inner = leaves(rng, ids, &[ReferenceInput, Alternative], shape.max_per_kind);
        members.push(Declaration::new(Knowledge, ids.next(Knowledge)).with_children(inner));
    }
    let mut l = Declaration::new(Loop, ids.next(Loop)).with_children(members);
    if rng.gen_bool(0.6) {
        l = l.with_domain_rules();
    }
    l
}

/// A random planned architecture that obeys the nesting hierarchy and the
/// allowed rule matrix and validates without errors.
pub fn random_pa(rng: &mut ChaCha8Rng, shape: PaShape) -> PlannedArchitecture {
    let mut ids = Ids(0);
    let mut pa = PlannedArchitecture::new("Generated");
    for _ in 0..rng.gen_range(1..=2) {
        let mut children = Vec::new();
        if rng.gen_bool(0.5) {
            let loops = (0..rng.gen_range(1..=shape.max_loops)).map(|_| random_loop(rng, &mut ids, shape)).collect();
            children.push(Declaration::new(LoopManager, ids.next(LoopManager)).with_children(loops));
        }
        for _ in 0..rng.gen_range(0..=shape.max_loops) {
            children.push(random_loop(rng, &mut ids, shape));
        }
        pa.managing.push(Declaration::new(Managing, ids.next(Managing)).with_children(children));
    }
    for _ in 0..rng.gen_range(1..=2) {
        let kids = leaves(rng, &mut ids, &[Sensor, Effector, MeasuredOutput, GenericComponent], shape.max_per_kind);
        pa.managed.push(Declaration::new(Managed, ids.next(Managed)).with_children(kids));
    }

    let instances: Vec<(String, AbstractionKind)> =
        pa.instances().iter().map(|i| (i.decl.id.clone(), i.decl.kind)).collect();
    let mut used: HashSet<(String, String)> = HashSet::new();
    let add = |pa: &mut PlannedArchitecture, used: &mut HashSet<(String, String)>, s: &(String, AbstractionKind), t: &(String, AbstractionKind), m: Modality| {
        if used.insert((s.0.clone(), t.0.clone())) {
            pa.rules.push(CommRule::new(RuleEndpoint::new(Some(s.1), &s.0), m, RuleEndpoint::new(Some(t.1), &t.0)));
        }
    };
    for _ in 0..rng.gen_range(0..=shape.max_rules) {
        let s = instances.choose(rng).unwrap();
        let candidates: Vec<_> = instances.iter().filter(|t| t.0 != s.0 && s.1.may_use(t.1)).collect();
        let Some(t) = candidates.choose(rng) else { continue };
        if s.1 == Loop {
            // loop must-use needs a member-level rule crossing the two loops
            let (sm, tm) = (pa.loop_members(&s.0), pa.loop_members(&t.0));
            let sm: Vec<_> = sm.iter().filter(|d| d.kind == Monitor).map(|d| (d.id.clone(), d.kind)).collect();
            let tm: Vec<_> = tm.iter().filter(|d| d.kind == Monitor).map(|d| (d.id.clone(), d.kind)).collect();
            match (sm.first(), tm.first()) {
                (Some(a), Some(b)) if rng.gen_bool(0.5) && !used.contains(&(a.0.clone(), b.0.clone())) => {
                    add(&mut pa, &mut used, a, b, Modality::MustUse);
                    add(&mut pa, &mut used, s, t, Modality::MustUse);
                }
                _ => add(&mut pa, &mut used, s, t, Modality::MustNotUse),
            }
            continue;
        }
        let m = if rng.gen_bool(0.7) { Modality::MustUse } else { Modality::MustNotUse };
        add(&mut pa, &mut used, s, t, m);
    }
    // print and reparse so spans are real and the printer is exercised
    let pa = parse_pa(&pa.to_string()).expect("generated architecture parses");
    let diags = validate_pa(&pa, &DomainRuleMatrix::all_active());
    assert!(!remedy_core::dsl::has_errors(&diags), "generator produced an invalid architecture: {diags:?}\n{pa}");
    pa
}

/// Code facts and mappings whose recovered model reproduces the planned
/// architecture, including its domain must-use pairs.
pub fn self_conformant_code(pa: &PlannedArchitecture, matrix: &DomainRuleMatrix) -> (CodeFacts, MappingSet) {
    let mut facts = CodeFacts::default();
    let mut mappings = Vec::new();
    let mut paths = std::collections::HashMap::new();
    fn visit(d: &Declaration, parent: Option<&str>, facts: &mut CodeFacts, maps: &mut Vec<Mapping>, paths: &mut std::collections::HashMap<String, String>) {
        let path = match parent {
            Some(p) => format!("{p}/{}", d.id),
            None => d.id.clone(),
        };
        facts.elements.push(CodeElement::new(&path, CodeKind::Package, parent));
        maps.push(Mapping::new(&path, &d.id));
        paths.insert(d.id.clone(), path.clone());
        for c in &d.children {
            visit(c, Some(&path), facts, maps, paths);
        }
    }
    for s in pa.subsystems() {
        visit(s, None, &mut facts, &mut mappings, &mut paths);
    }
    for r in pa_to_model_with_domain_rules(pa, matrix).relations {
        facts.dependencies.push(CodeDependency::new(&paths[&r.from], &paths[&r.to], DependencyKind::Import));
    }
    facts.canonicalize();
    (facts, MappingSet::new(mappings))
}

pub fn random_view(rng: &mut ChaCha8Rng) -> PackageView {
    to_package_view(&pa_to_model(&random_pa(rng, PaShape::SMALL))).unwrap()
}

/// Reverses every child list and the dependency list.
pub fn permuted(view: &PackageView) -> PackageView {
    fn rev(ps: &mut Vec<remedy_core::model::Package>) {
        ps.reverse();
        for p in ps.iter_mut() {
            rev(&mut p.children);
        }
    }
    let mut v = view.clone();
    rev(&mut v.packages);
    v.dependencies.reverse();
    v
}

/// Random code graph: classes `p/C<i>`, some mapped to one of a handful
/// of sensors, with random dependencies between classes.
pub struct CodeGraph {
    pub pa: PlannedArchitecture,
    pub facts: CodeFacts,
    pub mappings: MappingSet,
    /// Abstraction of each class, if mapped.
    pub attr: Vec<Option<String>>,
    pub edges: BTreeSet<(usize, usize)>,
}

pub fn random_code_graph(rng: &mut ChaCha8Rng, max_nodes: usize) -> CodeGraph {
    let n = rng.gen_range(2..=max_nodes);
    let abstractions = rng.gen_range(2..=5);
    let sensors: Vec<String> = (0..abstractions).map(|i| format!("s{i}")).collect();
    let body: String = sensors.iter().map(|s| format!("Sensor {s}; ")).collect();
    let pa = parse_pa(&format!("Architecture G {{ Managing m {{}} Managed d {{ {body}}} }} Rules {{}}")).unwrap();

    let mut facts = CodeFacts::default();
    facts.elements.push(CodeElement::new("p", CodeKind::Package, None));
    let mut attr = Vec::new();
    let mut mappings = Vec::new();
    for i in 0..n {
        let path = format!("p/C{i}");
        facts.elements.push(CodeElement::new(&path, CodeKind::Class, Some("p")));
        let a = rng.gen_bool(0.5).then(|| sensors.choose(rng).unwrap().clone());
        if let Some(a) = &a {
            mappings.push(Mapping::new(&path, a));
        }
        attr.push(a);
    }
    let density = rng.gen_range(0.05..0.25);
    let mut edges = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.gen_bool(density) {
                edges.insert((i, j));
                facts.dependencies.push(CodeDependency::new(format!("p/C{i}"), format!("p/C{j}"), DependencyKind::MethodCall));
            }
        }
    }
    facts.canonicalize();
    CodeGraph { pa, facts, mappings: MappingSet::new(mappings), attr, edges }
}

/// Expected relations (from, to, indirect): transitive closure over
/// unmapped nodes (Floyd-Warshall), then one hop in and one hop out.
pub fn reachability_oracle(g: &CodeGraph) -> BTreeSet<(String, String, bool)> {
    let n = g.attr.len();
    let edge = |i: usize, j: usize| g.edges.contains(&(i, j));
    let mut u = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            u[i][j] = g.attr[i].is_none() && g.attr[j].is_none() && (i == j || edge(i, j));
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if u[i][k] && u[k][j] {
                    u[i][j] = true;
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    for a in 0..n {
        for b in 0..n {
            let (Some(x), Some(y)) = (&g.attr[a], &g.attr[b]) else { continue };
            if x == y {
                continue;
            }
            let via = (0..n).any(|p| edge(a, p) && (0..n).any(|q| u[p][q] && edge(q, b)));
            if edge(a, b) || via {
                out.insert((x.clone(), y.clone()));
            }
        }
    }
    let direct: BTreeSet<(String, String)> = g
        .edges
        .iter()
        .filter_map(|&(i, j)| Some((g.attr[i].clone()?, g.attr[j].clone()?)))
        .collect();
    out.into_iter()
        .map(|(a, b)| {
            let indirect = !direct.contains(&(a.clone(), b.clone()));
            (a, b, indirect)
        })
        .collect()
}

/// The robot drift scenario: corrected PA, scanned facts and mappings.
pub struct Drift {
    pub pa: PlannedArchitecture,
    pub set: remedy_core::constraints::ConstraintSet,
    pub ca: remedy_core::model::ArchModel,
    pub report: remedy_core::constraints::ConformanceReport,
}

pub fn robot_drift(options: remedy_core::constraints::CheckOptions) -> Drift {
    use remedy_core::recovery::{build_ca, lift_indirect, load_facts, load_mappings};
    let pa = robot();
    let facts = load_facts(fixture("robot/facts.json")).unwrap();
    let mappings = load_mappings(fixture("robot/mappings.json"), &facts, &pa).unwrap();
    let built = build_ca(&facts, &mappings, &pa);
    let ca = lift_indirect(&built.model, &facts, &mappings);
    let set = remedy_core::constraints::generate_constraints(&pa, &DomainRuleMatrix::all_active());
    let report = remedy_core::constraints::evaluate(&set, &ca, options).unwrap();
    Drift { pa, set, ca, report }
}

/// The sixteen planned abstractions the robot code does not realise.
pub const ROBOT_MISSING: [&str; 16] = [
    "angularSpeed",
    "distance",
    "loopManager",
    "masterAnalyzer",
    "masterLoop",
    "masterPlanner",
    "parameterExecutor",
    "parameterMonitor",
    "rotationReference",
    "servo-controller",
    "slaveLoop",
    "speed",
    "strategy_1",
    "strategy_2",
    "tachometer",
    "wheels",
];
