use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::kernel::{Agent, Formula};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum MetaVar {
    Phi,
    Phi1,
    Phi2,
    Psi,
}

impl MetaVar {
    pub const ALL: [MetaVar; 4] = [MetaVar::Phi, MetaVar::Phi1, MetaVar::Phi2, MetaVar::Psi];

    /// Placeholder atom name used in templates. Not a valid identifier, so it
    /// never clashes with a model atom.
    pub fn placeholder(self) -> &'static str {
        match self {
            MetaVar::Phi => "φ",
            MetaVar::Phi1 => "φ1",
            MetaVar::Phi2 => "φ2",
            MetaVar::Psi => "ψ",
        }
    }
}

impl fmt::Display for MetaVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.placeholder())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SchemaKind {
    Axiom,
    Rule,
}

macro_rules! schemas {
    ($($id:ident),* $(,)?) => {
        #[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
        pub enum SchemaId { $($id),* }

        impl SchemaId {
            pub const ALL: [SchemaId; 33] = [$(SchemaId::$id),*];

            pub fn name(self) -> &'static str {
                match self { $(SchemaId::$id => stringify!($id)),* }
            }
        }
    };
}

schemas!(
    B1, B2, B3, B4, B5, P1, P2, P3, P4, AX1, AX2, EX1, EF1, EG1, EG2, EU1, EU2, BP1, BP2, BP3, BP4, BP5, BI1, BI2, BI3,
    BI4, BI5, BPIEF1, BX1, BX2, COR1a, COR1b, COR2,
);

impl SchemaId {
    pub fn from_name(name: &str) -> Option<SchemaId> {
        SchemaId::ALL.into_iter().find(|s| s.name() == name)
    }

    /// EG2 and EU2 are the CTL induction rules: the fixpoint equation as a
    /// premise valid in the model, the induction conclusion as the result.
    pub fn kind(self) -> SchemaKind {
        use SchemaId::*;
        match self {
            B1 | AX1 | EG2 | EU2 | COR1a | COR1b => SchemaKind::Rule,
            _ => SchemaKind::Axiom,
        }
    }

    pub fn metavars(self) -> &'static [MetaVar] {
        use MetaVar::*;
        use SchemaId::*;
        match self {
            B2 | P1 | P2 | AX2 | EU1 | BP1 | BI1 | COR1a | COR1b | COR2 => &[Phi1, Phi2],
            EG2 => &[Phi, Psi],
            EU2 => &[Phi1, Phi2, Psi],
            _ => &[Phi],
        }
    }

    pub fn template(self) -> Instance {
        let mut b = Bindings::new(Agent::new("a"));
        for &v in self.metavars() {
            b.set(v, Formula::atom(v.placeholder()));
        }
        instantiate(self, &b).expect("placeholders cover every metavariable")
    }
}

impl fmt::Display for SchemaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Metavariable and agent assignment for instantiating schemas.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bindings {
    pub agent: Agent,
    pub vars: BTreeMap<MetaVar, Formula>,
}

impl Bindings {
    pub fn new(agent: Agent) -> Self {
        Bindings {
            agent,
            vars: BTreeMap::new(),
        }
    }

    pub fn with(mut self, v: MetaVar, f: Formula) -> Self {
        self.set(v, f);
        self
    }

    pub fn set(&mut self, v: MetaVar, f: Formula) {
        self.vars.insert(v, f);
    }

    pub fn get(&self, v: MetaVar) -> Result<&Formula, InstantiateError> {
        self.vars.get(&v).ok_or(InstantiateError::Missing(v))
    }
}

impl fmt::Display for Bindings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a:={}", self.agent)?;
        for (v, g) in &self.vars {
            write!(f, " {v}:={g}")?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum InstantiateError {
    #[error("no binding for metavariable {0}")]
    Missing(MetaVar),
}

/// If every premise is valid in a model, so is the conclusion.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RuleObligation {
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Instance {
    Axiom(Formula),
    Rule(RuleObligation),
}

impl Instance {
    pub fn formulas(&self) -> Vec<&Formula> {
        match self {
            Instance::Axiom(f) => vec![f],
            Instance::Rule(r) => r.premises.iter().chain([&r.conclusion]).collect(),
        }
    }
}

pub fn instantiate(s: SchemaId, b: &Bindings) -> Result<Instance, InstantiateError> {
    use SchemaId::*;
    let a = &b.agent;
    let v = |m| b.get(m).cloned();
    let bel = |f: Formula| Formula::believes(a, f);
    let pre = |f: Formula| Formula::prefers(a, f);
    let int = |f: Formula| Formula::intends(a, f);
    let rule = |premise: Formula, conclusion: Formula| {
        Instance::Rule(RuleObligation {
            premises: vec![premise],
            conclusion,
        })
    };
    Ok(match s {
        B1 => {
            let phi = v(MetaVar::Phi)?;
            rule(phi.clone(), bel(phi))
        }
        AX1 => {
            let phi = v(MetaVar::Phi)?;
            rule(phi.clone(), phi.ax())
        }
        COR1a | COR1b => {
            let (p1, p2) = (v(MetaVar::Phi1)?, v(MetaVar::Phi2)?);
            let wrap = |f| if s == COR1a { pre(f) } else { int(f) };
            rule(p1.clone().iff(p2.clone()), wrap(p1).iff(wrap(p2)))
        }
        EG2 => {
            let (phi, psi) = (v(MetaVar::Phi)?, v(MetaVar::Psi)?);
            rule(psi.clone().iff(phi.clone().and(psi.clone().ex())), psi.imp(phi.eg()))
        }
        EU2 => {
            let (p1, p2, psi) = (v(MetaVar::Phi1)?, v(MetaVar::Phi2)?, v(MetaVar::Psi)?);
            rule(
                psi.clone().iff(p2.clone().or(p1.clone().and(psi.clone().ex()))),
                p1.eu(p2).imp(psi),
            )
        }
        _ => Instance::Axiom(pointwise(s, b)?),
    })
}

/// The schema as one formula. Axioms agree with [`instantiate`]; a rule
/// becomes the implication from its premise to its conclusion, which need
/// not be valid even when the rule is sound.
pub fn pointwise(s: SchemaId, b: &Bindings) -> Result<Formula, InstantiateError> {
    use SchemaId::*;
    let a = &b.agent;
    let v = |m| b.get(m).cloned();
    let bel = |f: Formula| Formula::believes(a, f);
    let pre = |f: Formula| Formula::prefers(a, f);
    let int = |f: Formula| Formula::intends(a, f);
    Ok(match s {
        B2 | P2 | AX2 => {
            let (p1, p2) = (v(MetaVar::Phi1)?, v(MetaVar::Phi2)?);
            let wrap = |f: Formula| match s {
                B2 => bel(f),
                P2 => pre(f),
                _ => f.ax(),
            };
            wrap(p1.clone()).and(wrap(p1.imp(p2.clone()))).imp(wrap(p2))
        }
        B3 => {
            let phi = v(MetaVar::Phi)?;
            bel(phi.clone()).imp(bel(bel(phi)))
        }
        B4 => {
            let phi = v(MetaVar::Phi)?;
            bel(phi.clone()).not().imp(bel(bel(phi).not()))
        }
        B5 => {
            let phi = v(MetaVar::Phi)?;
            bel(phi.clone()).imp(bel(phi.not()).not())
        }
        P1 => {
            let (p1, p2) = (v(MetaVar::Phi1)?, v(MetaVar::Phi2)?);
            pre(p1.clone()).and(pre(p2.clone())).imp(pre(p1.and(p2)))
        }
        P3 => {
            let phi = v(MetaVar::Phi)?;
            pre(pre(phi.clone())).imp(pre(phi))
        }
        P4 => {
            let phi = v(MetaVar::Phi)?;
            pre(pre(phi.clone()).not()).imp(pre(phi).not())
        }
        EX1 => {
            let phi = v(MetaVar::Phi)?;
            phi.clone().ex().iff(phi.not().ax().not())
        }
        EF1 => {
            let phi = v(MetaVar::Phi)?;
            phi.clone().ef().iff(Formula::True.eu(phi))
        }
        EG1 => {
            let phi = v(MetaVar::Phi)?;
            phi.clone().eg().iff(phi.clone().and(phi.eg().ex()))
        }
        EG2 => {
            let (phi, psi) = (v(MetaVar::Phi)?, v(MetaVar::Psi)?);
            psi.clone()
                .iff(phi.clone().and(psi.clone().ex()))
                .imp(psi.imp(phi.eg()))
        }
        EU1 => {
            let (p1, p2) = (v(MetaVar::Phi1)?, v(MetaVar::Phi2)?);
            let until = p1.clone().eu(p2.clone());
            until.clone().iff(p2.or(p1.and(until.ex())))
        }
        EU2 => {
            let (p1, p2, psi) = (v(MetaVar::Phi1)?, v(MetaVar::Phi2)?, v(MetaVar::Psi)?);
            psi.clone()
                .iff(p2.clone().or(p1.clone().and(psi.clone().ex())))
                .imp(p1.eu(p2).imp(psi))
        }
        BP1 | BI1 => {
            let (p1, p2) = (v(MetaVar::Phi1)?, v(MetaVar::Phi2)?);
            let wrap = |f| if s == BP1 { pre(f) } else { int(f) };
            bel(p1.clone().iff(p2.clone())).and(wrap(p1)).imp(wrap(p2))
        }
        BP2 | BI2 | BP3 | BI3 | BP4 | BI4 | BP5 | BI5 => {
            let phi = v(MetaVar::Phi)?;
            let m = if matches!(s, BP2 | BP3 | BP4 | BP5) {
                pre(phi)
            } else {
                int(phi)
            };
            match s {
                BP2 | BI2 => m.clone().imp(bel(m)),
                BP3 | BI3 => m.clone().not().imp(bel(m.not())),
                BP4 | BI4 => bel(m.clone()).imp(m),
                _ => bel(m.clone().not()).imp(m.not()),
            }
        }
        BPIEF1 => {
            let phi = v(MetaVar::Phi)?;
            int(phi.clone()).imp(pre(phi.clone()).and(bel(phi.clone().not())).and(bel(phi.ef())))
        }
        BX1 => {
            let phi = v(MetaVar::Phi)?;
            bel(phi.clone().ax()).imp(bel(bel(phi).ax()))
        }
        BX2 => {
            let phi = v(MetaVar::Phi)?;
            bel(phi.clone().ex()).imp(bel(bel(phi).ex()))
        }
        COR2 => {
            let (p1, p2) = (v(MetaVar::Phi1)?, v(MetaVar::Phi2)?);
            pre(p1.clone()).and(pre(p1.imp(pre(p2.clone())))).imp(pre(p2))
        }
        B1 | AX1 | COR1a | COR1b => {
            let conclusion = match instantiate(s, b)? {
                Instance::Rule(r) => r,
                Instance::Axiom(_) => unreachable!("{s} is a rule"),
            };
            let premise = conclusion.premises.into_iter().next().expect("one premise");
            premise.imp(conclusion.conclusion)
        }
    })
}
