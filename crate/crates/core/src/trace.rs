//! Replayable proof traces: ordered lists of named exact claims.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::cyclotomic::CycloNumber;
use crate::error::Result;
use crate::rational::{self, Rounding, Q};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ValueRepr", into = "ValueRepr")]
pub enum Value {
    Rational(Q),
    Cyclo(CycloNumber),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "lowercase")]
enum ValueRepr {
    Rational(String),
    Cyclo(CycloNumber),
}

impl From<Value> for ValueRepr {
    fn from(v: Value) -> Self {
        match v {
            Value::Rational(x) => ValueRepr::Rational(x.to_string()),
            Value::Cyclo(x) => ValueRepr::Cyclo(x),
        }
    }
}

impl TryFrom<ValueRepr> for Value {
    type Error = crate::error::Error;
    fn try_from(v: ValueRepr) -> Result<Self> {
        Ok(match v {
            ValueRepr::Rational(s) => Value::Rational(rational::parse_rational(&s)?),
            ValueRepr::Cyclo(x) => Value::Cyclo(x),
        })
    }
}

impl Value {
    fn to_cyclo(&self) -> CycloNumber {
        match self {
            Value::Rational(x) => CycloNumber::from_rational(x.clone()),
            Value::Cyclo(x) => x.clone(),
        }
    }

    pub fn render(&self) -> String {
        match self {
            Value::Rational(x) => x.to_string(),
            Value::Cyclo(x) => match x.as_rational() {
                Some(r) => r.to_string(),
                None if x.is_real() => {
                    let b = x.embed(96).expect("96 bits is above the minimum");
                    format!("≈{}", rational::to_decimal(&b.re.midpoint(), 12, Rounding::Down))
                }
                None => x.to_zeta_string(),
            },
        }
    }
}

impl From<Q> for Value {
    fn from(x: Q) -> Self {
        Value::Rational(x)
    }
}

impl From<CycloNumber> for Value {
    fn from(x: CycloNumber) -> Self {
        match x.as_rational() {
            Some(r) => Value::Rational(r.clone()),
            None => Value::Cyclo(x),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "!=")]
    Ne,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Ne => "≠",
            Relation::Lt => "<",
            Relation::Le => "≤",
            Relation::Gt => ">",
            Relation::Ge => "≥",
        }
    }

    pub fn holds(self, lhs: &Value, rhs: &Value) -> Result<bool> {
        let ord = match (lhs, rhs) {
            (Value::Rational(a), Value::Rational(b)) => a.cmp(b),
            _ => {
                let (a, b) = (lhs.to_cyclo(), rhs.to_cyclo());
                match self {
                    Relation::Eq => return Ok(a == b),
                    Relation::Ne => return Ok(a != b),
                    _ => a.cmp_real(&b)?,
                }
            }
        };
        Ok(match self {
            Relation::Eq => ord == Ordering::Equal,
            Relation::Ne => ord != Ordering::Equal,
            Relation::Lt => ord == Ordering::Less,
            Relation::Le => ord != Ordering::Greater,
            Relation::Gt => ord == Ordering::Greater,
            Relation::Ge => ord != Ordering::Less,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    /// An exact comparison, re-evaluated on replay.
    Computation,
    /// A quoted geometric input; carries no arithmetic.
    Assumption,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        }
    }
}

/// What a fully passing trace establishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Outcome {
    /// The case under study leads to a contradiction.
    Excluded,
    /// The inequality holds for the given numbers; nothing to exclude.
    Consistent,
    /// Every asserted property holds.
    Holds,
    /// Some step failed.
    Inconclusive,
}

impl Outcome {
    pub fn label(self) -> &'static str {
        match self {
            Outcome::Excluded => "EXCLUDED",
            Outcome::Consistent => "CONSISTENT",
            Outcome::Holds => "HOLDS",
            Outcome::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub name: String,
    pub claim: String,
    pub kind: StepKind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lhs: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub relation: Option<Relation>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rhs: Option<Value>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofTrace {
    pub title: String,
    pub steps: Vec<TraceStep>,
    pub overall: Verdict,
    pub outcome: Outcome,
}

impl ProofTrace {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            steps: Vec::new(),
            overall: Verdict::Pass,
            outcome: Outcome::Inconclusive,
        }
    }

    pub fn assume(&mut self, name: &str, claim: impl Into<String>) {
        self.steps.push(TraceStep {
            name: name.into(),
            claim: claim.into(),
            kind: StepKind::Assumption,
            lhs: None,
            relation: None,
            rhs: None,
            verdict: Verdict::Pass,
        });
    }

    /// Evaluates `lhs relation rhs` exactly and records the step.
    pub fn check(
        &mut self,
        name: &str,
        claim: impl Into<String>,
        lhs: impl Into<Value>,
        relation: Relation,
        rhs: impl Into<Value>,
    ) -> Result<Verdict> {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        let verdict = Verdict::from_bool(relation.holds(&lhs, &rhs)?);
        self.steps.push(TraceStep {
            name: name.into(),
            claim: claim.into(),
            kind: StepKind::Computation,
            lhs: Some(lhs),
            relation: Some(relation),
            rhs: Some(rhs),
            verdict,
        });
        Ok(verdict)
    }

    /// Seals the trace: `overall` is PASS iff every step passed, and the
    /// outcome is `on_pass` in that case.
    pub fn finish(mut self, on_pass: Outcome) -> Self {
        self.overall = Verdict::from_bool(self.steps.iter().all(|s| s.verdict.is_pass()));
        self.outcome = if self.overall.is_pass() { on_pass } else { Outcome::Inconclusive };
        self
    }

    pub fn passes(&self) -> bool {
        self.overall.is_pass()
    }

    /// Re-evaluates every computation step and the overall verdict. Returns
    /// `Ok(true)` when every recorded verdict is reproduced.
    pub fn replay(&self) -> Result<bool> {
        let mut all = true;
        for step in &self.steps {
            match step.kind {
                StepKind::Assumption => {
                    if step.verdict != Verdict::Pass || step.lhs.is_some() || step.rhs.is_some() {
                        return Ok(false);
                    }
                }
                StepKind::Computation => {
                    let (Some(l), Some(r), Some(rel)) = (&step.lhs, &step.rhs, step.relation)
                    else {
                        return Ok(false);
                    };
                    if Verdict::from_bool(rel.holds(l, r)?) != step.verdict {
                        return Ok(false);
                    }
                }
            }
            all &= step.verdict.is_pass();
        }
        let outcome_ok = if all {
            self.outcome != Outcome::Inconclusive
        } else {
            self.outcome == Outcome::Inconclusive
        };
        Ok(Verdict::from_bool(all) == self.overall && outcome_ok)
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "### {}", self.title);
        let _ = writeln!(out);
        let _ = writeln!(out, "| # | step | claim | lhs | rel | rhs | verdict |");
        let _ = writeln!(out, "|---|------|-------|-----|-----|-----|---------|");
        for (k, s) in self.steps.iter().enumerate() {
            let (lhs, rel, rhs) = match (&s.lhs, s.relation, &s.rhs) {
                (Some(l), Some(r), Some(h)) => (l.render(), r.symbol().to_string(), h.render()),
                _ => ("-".into(), "assumed".into(), "-".into()),
            };
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} | {} |",
                k + 1,
                s.name,
                s.claim.replace('|', "\\|"),
                lhs,
                rel,
                rhs,
                s.verdict.label()
            );
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "Overall: {}", self.overall.label());
        let _ = write!(out, "Outcome: {}", self.outcome.label());
        out
    }
}
