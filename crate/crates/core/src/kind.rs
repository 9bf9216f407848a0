//! MAPE-K abstraction kinds, their containment hierarchy and the table of
//! kind pairs a communication rule may connect.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The stereotype of an architectural element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AbstractionKind {
    Managing,
    Managed,
    LoopManager,
    Loop,
    Monitor,
    Analyzer,
    Planner,
    Executor,
    Knowledge,
    Sensor,
    Effector,
    MeasuredOutput,
    ReferenceInput,
    Alternative,
    GenericComponent,
}

use AbstractionKind::*;

impl AbstractionKind {
    pub const ALL: [AbstractionKind; 15] = [
        Managing,
        Managed,
        LoopManager,
        Loop,
        Monitor,
        Analyzer,
        Planner,
        Executor,
        Knowledge,
        Sensor,
        Effector,
        MeasuredOutput,
        ReferenceInput,
        Alternative,
        GenericComponent,
    ];

    /// The five kinds covered by the domain rule matrix, in table order.
    pub const MAPE_K: [AbstractionKind; 5] = [Monitor, Analyzer, Planner, Executor, Knowledge];

    /// Stereotype name, as used in model files and diagrams.
    pub fn as_str(self) -> &'static str {
        match self {
            Managing => "Managing",
            Managed => "Managed",
            LoopManager => "LoopManager",
            Loop => "Loop",
            Monitor => "Monitor",
            Analyzer => "Analyzer",
            Planner => "Planner",
            Executor => "Executor",
            Knowledge => "Knowledge",
            Sensor => "Sensor",
            Effector => "Effector",
            MeasuredOutput => "MeasuredOutput",
            ReferenceInput => "ReferenceInput",
            Alternative => "Alternative",
            GenericComponent => "GenericComponent",
        }
    }

    /// Declaration keyword in `.remedy` sources.
    pub fn keyword(self) -> &'static str {
        match self {
            GenericComponent => "Component",
            other => other.as_str(),
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.keyword() == word)
    }

    /// Kind selector used in the `Rules` block.
    pub fn selector(self) -> &'static str {
        match self {
            Managing => "managing",
            Managed => "managed",
            LoopManager => "loop-manager",
            Loop => "loop",
            Monitor => "monitor",
            Analyzer => "analyzer",
            Planner => "planner",
            Executor => "executor",
            Knowledge => "knowledge",
            Sensor => "sensor",
            Effector => "effector",
            MeasuredOutput => "measured-output",
            ReferenceInput => "reference-input",
            Alternative => "alternative",
            GenericComponent => "component",
        }
    }

    pub fn from_selector(word: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.selector() == word)
    }

    /// Composable kinds may contain other abstractions.
    pub fn is_composable(self) -> bool {
        matches!(self, Managing | Managed | LoopManager | Loop | Knowledge)
    }

    /// Subsystems are the only kinds allowed at the top level.
    pub fn is_subsystem(self) -> bool {
        matches!(self, Managing | Managed)
    }

    /// Kinds that may directly contain `self`.
    pub fn allowed_parents(self) -> &'static [AbstractionKind] {
        match self {
            Managing | Managed => &[],
            LoopManager => &[Managing],
            Loop => &[Managing, LoopManager],
            Monitor | Analyzer | Planner | Executor | Knowledge => &[Loop],
            ReferenceInput | Alternative => &[Knowledge],
            Sensor | Effector | MeasuredOutput | GenericComponent => &[Managed],
        }
    }

    pub fn may_be_child_of(self, parent: AbstractionKind) -> bool {
        self.allowed_parents().contains(&parent)
    }

    /// True when `self` can appear somewhere below `ancestor` in a well-formed
    /// hierarchy, possibly with intermediate levels left out.
    pub fn may_nest_within(self, ancestor: AbstractionKind) -> bool {
        self.allowed_parents()
            .iter()
            .any(|&p| p == ancestor || p.may_nest_within(ancestor))
    }

    /// Target kinds a rule whose source is `self` may name.
    pub fn allowed_rule_targets(self) -> &'static [AbstractionKind] {
        match self {
            Managing => &[Managing],
            Managed => &[Managed],
            LoopManager => &[LoopManager],
            Loop => &[Loop],
            Monitor => &[Monitor, Analyzer, Planner, Executor, Knowledge, Sensor],
            Analyzer => &[Analyzer, Monitor, Planner, Executor, Knowledge, ReferenceInput, Alternative],
            Planner => &[Planner, Monitor, Analyzer, Executor, Knowledge, Alternative],
            Executor => &[Executor, Monitor, Analyzer, Planner, Knowledge, Effector],
            Knowledge => &[Monitor, Analyzer, Planner, Executor],
            Sensor => &[MeasuredOutput],
            Effector => &[GenericComponent],
            MeasuredOutput | ReferenceInput | Alternative | GenericComponent => &[],
        }
    }

    pub fn may_use(self, target: AbstractionKind) -> bool {
        self.allowed_rule_targets().contains(&target)
    }
}

impl fmt::Display for AbstractionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AbstractionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown abstraction kind `{s}`"))
    }
}
