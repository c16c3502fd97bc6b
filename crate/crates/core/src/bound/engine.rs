//! The fact database: intersection-monotone intervals with provenance.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::interval::{fmt_rational, fmt_upper, Interval, Rational};
use super::quantity::{default_alphabet, primitive_root, split_outer_commutator, Context, Kind, Quantity, Template};
use super::rules::{apply_rule, Derivation, RuleId};
use crate::error::{Error, Result};
use crate::parse::Alphabet;
use crate::verbal::gamma_word;
use num_traits::{Signed, Zero};

pub type FactId = usize;

pub const DEFAULT_ITERATION_CAP: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    Lo,
    Hi,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Lo => "lo",
            Side::Hi => "hi",
        }
    }
}

/// A bound read by a rule, and the fact that established it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Premise {
    pub quantity: Quantity,
    pub side: Side,
    pub value: Rational,
    pub fact: Option<FactId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Seed { label: String },
    Certificate { reference: String },
    Quotient { group: String, images: String },
    Rule { rule: RuleId, premises: Vec<Premise> },
}

impl Provenance {
    pub fn describe(&self) -> String {
        match self {
            Provenance::Seed { label } => format!("SEED({label})"),
            Provenance::Certificate { reference } => format!("CERTIFICATE({reference})"),
            Provenance::Quotient { group, images } => format!("QUOTIENT({group}: {images})"),
            Provenance::Rule { rule, .. } => format!("{} {}", rule.code(), rule.title()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fact {
    pub id: FactId,
    pub quantity: Quantity,
    /// The bound this fact contributes; unconstrained sides are `0` / `inf`.
    pub bound: Interval,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, Default)]
struct Entry {
    interval: Interval,
    lo_source: Option<FactId>,
    hi_source: Option<FactId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropagationReport {
    pub rounds: usize,
    pub improvements: usize,
}

#[derive(Clone, Debug)]
pub struct Db {
    entries: BTreeMap<Quantity, Entry>,
    facts: Vec<Fact>,
    alphabet: Alphabet,
    universe_cap: usize,
}

impl Default for Db {
    fn default() -> Self {
        Db::new()
    }
}

impl Db {
    pub fn new() -> Self {
        Db::with_alphabet(default_alphabet())
    }

    pub fn with_alphabet(alphabet: Alphabet) -> Self {
        Db {
            entries: BTreeMap::new(),
            facts: Vec::new(),
            alphabet,
            universe_cap: 10_000,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn alphabet_mut(&mut self) -> &mut Alphabet {
        &mut self.alphabet
    }

    pub fn render(&self, q: &Quantity) -> String {
        q.render(&self.alphabet)
    }

    pub fn quantities(&self) -> impl Iterator<Item = &Quantity> {
        self.entries.keys()
    }

    pub fn contains(&self, q: &Quantity) -> bool {
        self.entries.contains_key(q)
    }

    pub fn interval(&self, q: &Quantity) -> Option<&Interval> {
        self.entries.get(q).map(|e| &e.interval)
    }

    pub(crate) fn sources(&self, q: &Quantity) -> (Option<FactId>, Option<FactId>) {
        self.entries.get(q).map_or((None, None), |e| (e.lo_source, e.hi_source))
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    pub fn fact(&self, id: FactId) -> Option<&Fact> {
        self.facts.get(id)
    }

    /// Add `q` and every quantity the rules may consult for it.
    pub fn declare(&mut self, q: Quantity) -> Result<()> {
        let mut work = vec![q];
        while let Some(q) = work.pop() {
            if self.entries.contains_key(&q) {
                continue;
            }
            if self.entries.len() >= self.universe_cap {
                return Err(Error::Resource {
                    what: "declared quantities".into(),
                    required: self.entries.len() as u128 + 1,
                    limit: self.universe_cap as u128,
                });
            }
            work.extend(related(&q));
            self.entries.insert(q, Entry::default());
        }
        Ok(())
    }

    /// Intersect the interval of `q` with `bound`. An empty intersection is
    /// reported with both provenances and leaves the database unchanged.
    pub fn add_fact(&mut self, q: Quantity, bound: Interval, provenance: Provenance) -> Result<FactId> {
        self.declare(q.clone())?;
        let bound = if q.is_integral() {
            bound.integral().ok_or_else(|| self.conflict(&q, &bound, &provenance))?
        } else {
            bound
        };
        let entry = &self.entries[&q];
        let merged = entry
            .interval
            .intersect(&bound)
            .ok_or_else(|| self.conflict(&q, &bound, &provenance))?;
        let id = self.facts.len();
        let lo_better = merged.lo() > entry.interval.lo();
        let hi_better = merged.hi() != entry.interval.hi();
        let entry = self.entries.get_mut(&q).expect("declared above");
        entry.interval = merged;
        if lo_better {
            entry.lo_source = Some(id);
        }
        if hi_better {
            entry.hi_source = Some(id);
        }
        self.facts.push(Fact {
            id,
            quantity: q,
            bound,
            provenance,
        });
        Ok(id)
    }

    fn conflict(&self, q: &Quantity, incoming: &Interval, provenance: &Provenance) -> Error {
        let e = self.entries.get(q).cloned().unwrap_or_default();
        let sources: Vec<String> = [e.lo_source, e.hi_source]
            .into_iter()
            .flatten()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(|id| format!("#{id} {}", self.facts[id].provenance.describe()))
            .collect();
        Error::Inconsistent {
            quantity: self.render(q),
            existing: e.interval.to_string(),
            existing_source: if sources.is_empty() { "default".into() } else { sources.join(", ") },
            incoming: incoming.to_string(),
            incoming_source: provenance.describe(),
        }
    }

    /// Apply `rules` in rounds until no interval changes.
    pub fn propagate(&mut self, rules: &BTreeSet<RuleId>, cap: usize) -> Result<PropagationReport> {
        let mut improvements = 0;
        for round in 1..=cap {
            let mut derived: Vec<Derivation> = Vec::new();
            for rule in rules {
                apply_rule(*rule, self, &mut derived);
            }
            let mut changed = false;
            for d in derived {
                if self.improves(&d) {
                    let lo = d.lo.clone().filter(|l| l.is_positive()).unwrap_or_else(Rational::zero);
                    let provenance = Provenance::Rule {
                        rule: d.rule,
                        premises: d.premises,
                    };
                    let bound = match Interval::new(lo, d.hi) {
                        Ok(b) => b,
                        Err(_) => {
                            let shown = Interval::unbounded();
                            return Err(self.conflict(&d.target, &shown, &provenance));
                        }
                    };
                    self.add_fact(d.target, bound, provenance)?;
                    improvements += 1;
                    changed = true;
                }
            }
            if !changed {
                return Ok(PropagationReport {
                    rounds: round,
                    improvements,
                });
            }
        }
        Err(Error::IterationCap(cap))
    }

    fn improves(&self, d: &Derivation) -> bool {
        let Some(e) = self.entries.get(&d.target) else {
            return false;
        };
        let round = |r: &Rational, up: bool| {
            if d.target.is_integral() {
                if up {
                    r.ceil()
                } else {
                    r.floor()
                }
            } else {
                r.clone()
            }
        };
        let lo = d.lo.as_ref().is_some_and(|lo| round(lo, true) > *e.interval.lo());
        let hi = d
            .hi
            .as_ref()
            .is_some_and(|hi| e.interval.hi().is_none_or(|cur| round(hi, false) < *cur));
        lo || hi
    }

    /// Re-run the rule behind `id` on a database holding only its premises
    /// and check that it yields a bound at least as tight.
    pub fn replay(&self, id: FactId) -> Result<bool> {
        let fact = self.fact(id).ok_or_else(|| Error::UnknownQuantity(format!("fact #{id}")))?;
        let Provenance::Rule { rule, premises } = &fact.provenance else {
            return Ok(true);
        };
        let mut mini = Db::with_alphabet(self.alphabet.clone());
        mini.entries.insert(fact.quantity.clone(), Entry::default());
        for p in premises {
            let e = mini.entries.entry(p.quantity.clone()).or_default();
            let bound = match p.side {
                Side::Lo => Interval::at_least(p.value.clone())?,
                Side::Hi => Interval::at_most(p.value.clone())?,
            };
            e.interval = e.interval.intersect(&bound).ok_or_else(|| {
                Error::InvalidArgument(format!("fact #{id} has contradictory premises"))
            })?;
        }
        let mut derived = Vec::new();
        apply_rule(*rule, &mini, &mut derived);
        let target = &fact.quantity;
        Ok(derived.iter().filter(|d| &d.target == target).any(|d| {
            let lo_ok = fact.bound.lo().is_zero()
                || d.lo.as_ref().is_some_and(|lo| {
                    let lo = if target.is_integral() { lo.ceil() } else { lo.clone() };
                    lo >= *fact.bound.lo()
                });
            let hi_ok = match fact.bound.hi() {
                None => true,
                Some(h) => d.hi.as_ref().is_some_and(|hi| {
                    let hi = if target.is_integral() { hi.floor() } else { hi.clone() };
                    hi <= *h
                }),
            };
            lo_ok && hi_ok
        }))
    }

    /// Derivation tree for the current interval of `q`.
    pub fn explain(&self, q: &Quantity) -> Result<Explanation> {
        let e = self
            .entries
            .get(q)
            .ok_or_else(|| Error::UnknownQuantity(self.render(q)))?;
        let mut roots = BTreeSet::new();
        roots.extend(e.lo_source);
        roots.extend(e.hi_source);
        let mut lines = vec![format!("{} = {}", self.render(q), e.interval)];
        let mut records = Vec::new();
        let mut seen = BTreeSet::new();
        for id in roots {
            self.explain_fact(id, 1, &mut lines, &mut records, &mut seen);
        }
        Ok(Explanation {
            quantity: q.clone(),
            interval: e.interval.clone(),
            tree: lines,
            records,
        })
    }

    fn explain_fact(
        &self,
        id: FactId,
        depth: usize,
        lines: &mut Vec<String>,
        records: &mut Vec<String>,
        seen: &mut BTreeSet<FactId>,
    ) {
        let f = &self.facts[id];
        let indent = "  ".repeat(depth);
        let claim = describe_bound(&f.bound);
        let repeat = !seen.insert(id);
        lines.push(format!(
            "{indent}#{id} {} {claim} <- {}{}",
            self.render(&f.quantity),
            f.provenance.describe(),
            if repeat { " (see above)" } else { "" }
        ));
        if repeat {
            return;
        }
        let premises: Vec<FactId> = match &f.provenance {
            Provenance::Rule { premises, .. } => premises.iter().filter_map(|p| p.fact).collect(),
            _ => Vec::new(),
        };
        let from = if premises.is_empty() {
            "-".to_string()
        } else {
            premises.iter().map(|p| format!("#{p}")).collect::<Vec<_>>().join(",")
        };
        let rule = match &f.provenance {
            Provenance::Rule { rule, .. } => rule.code().to_string(),
            other => other.describe(),
        };
        records.push(format!(
            "FACT #{id} {} {claim} RULE {rule} FROM {from}",
            f.quantity.to_spec(&self.alphabet)
        ));
        for p in premises {
            self.explain_fact(p, depth + 1, lines, records, seen);
        }
    }

    /// One `key=value` line per fact, in id order.
    pub fn fact_records(&self) -> Vec<String> {
        self.facts
            .iter()
            .map(|f| {
                let (source, from) = match &f.provenance {
                    Provenance::Rule { rule, premises } => (
                        rule.code().to_string(),
                        premises
                            .iter()
                            .filter_map(|p| p.fact.map(|i| i.to_string()))
                            .collect::<Vec<_>>()
                            .join(","),
                    ),
                    other => (other.describe().replace(' ', "_"), String::new()),
                };
                format!(
                    "fact={} quantity={} lo={} hi={} source={source} from={}",
                    f.id,
                    f.quantity.to_spec(&self.alphabet).replace(' ', "_"),
                    fmt_rational(f.bound.lo()),
                    fmt_upper(&f.bound.hi().cloned()),
                    if from.is_empty() { "-" } else { &from },
                )
            })
            .collect()
    }

    /// One `key=value` line per quantity, for scripting.
    pub fn records(&self) -> Vec<String> {
        self.entries
            .iter()
            .map(|(q, e)| {
                format!(
                    "quantity={} lo={} hi={} lo_fact={} hi_fact={}",
                    q.to_spec(&self.alphabet).replace(' ', "_"),
                    fmt_rational(e.interval.lo()),
                    fmt_upper(&e.interval.hi().cloned()),
                    e.lo_source.map_or("-".into(), |i| i.to_string()),
                    e.hi_source.map_or("-".into(), |i| i.to_string()),
                )
            })
            .collect()
    }
}

fn describe_bound(b: &Interval) -> String {
    match (b.lo(), b.hi()) {
        (lo, Some(hi)) if lo == hi => format!("= {}", fmt_rational(lo)),
        (lo, None) => format!(">= {}", fmt_rational(lo)),
        (lo, Some(hi)) if lo.is_zero() => format!("<= {}", fmt_rational(hi)),
        _ => format!("in {b}"),
    }
}

/// Quantities a rule might read when bounding `q`.
fn related(q: &Quantity) -> Vec<Quantity> {
    let mut out = Vec::new();
    let ctx = q.context;
    let free_in_commutator = |w: &crate::word::Word| !w.is_identity() && w.is_in_commutator_subgroup();
    let g_has_scl = ctx != Context::Free || free_in_commutator(&q.g);
    if let Template::Word(w) = &q.template {
        if g_has_scl && !q.template.is_commutator() {
            out.push(Quantity::scl(&q.g, ctx));
        }
        if free_in_commutator(w) {
            out.push(Quantity::scl(w, Context::Free));
        }
        out.push(Quantity::self_sl(w));
        if q.is_self() {
            if let Some((_, v)) = split_outer_commutator(w) {
                out.push(Quantity::self_sl(&v));
            }
        }
        if ctx == Context::PerfectSclZero && q.template.beta_index() == Some(2) {
            out.push(Quantity::l(&q.g, Template::word(gamma_word(3).expect("gamma3").body()), 1, ctx));
        }
        if q.template.gamma_index() == Some(3) {
            out.push(Quantity::sl(&q.g, Template::Gamma3Set, ctx));
        }
    }
    if q.template == Template::Gamma3Set {
        out.push(Quantity::l(&q.g, Template::Gamma3Set, 1, ctx));
    }
    if let Kind::L(_) = q.kind {
        out.push(Quantity::sl(&q.g, q.template.clone(), ctx));
    }
    if ctx == Context::Free {
        let (root, k) = primitive_root(&q.g);
        if k > 1 {
            out.push(Quantity {
                kind: Kind::Sl,
                context: ctx,
                g: root.canonical_form(),
                template: q.template.clone(),
            });
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct Explanation {
    pub quantity: Quantity,
    pub interval: Interval,
    /// Indented derivation tree.
    pub tree: Vec<String>,
    /// One `FACT ... RULE ... FROM ...` line per node.
    pub records: Vec<String>,
}

impl fmt::Display for Explanation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.tree {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}
