//! Exact interval propagation over length quantities.

mod engine;
mod facts_file;
mod interval;
mod quantity;
mod rules;

use std::collections::BTreeMap;

pub use engine::{
    Db, Explanation, Fact, FactId, Premise, PropagationReport, Provenance, Side, DEFAULT_ITERATION_CAP,
};
pub use facts_file::{
    format_fact_line, parse_bounds, parse_facts, parse_quantity, parse_template, seed_db, seed_db_from_file,
    FactLine, DEFAULT_SEEDS,
};
pub use interval::{fmt_rational, half, int, parse_rational, rat, Interval, Rational};
pub use quantity::{default_alphabet, primitive_root, split_outer_commutator, Context, Kind, Quantity, Template};
pub use rules::{apply_rule, Derivation, RuleId};

use crate::error::Result;
use crate::group::{quotient_lower_bound, DistanceTable, ElementId, FiniteGroup};
use crate::word::Word;

/// Record `l_F(g^n | t) >= l_G(phi(g)^n | t)` for the homomorphism `phi`
/// sending generator `i` to `images[i]`.
pub fn add_quotient_floor(
    db: &mut Db,
    g: &Word,
    template: &Word,
    n: u32,
    group: &FiniteGroup,
    table: &DistanceTable,
    images: &BTreeMap<u32, ElementId>,
) -> Result<FactId> {
    let floor = quotient_lower_bound(&g.pow(n as i64), table, group, images)?;
    let shown: Vec<String> = images
        .iter()
        .map(|(gen, e)| format!("{}->{}", db.alphabet().name(*gen), group.describe(*e)))
        .collect();
    db.add_fact(
        Quantity::l(g, Template::word(template), n, Context::Free),
        Interval::at_least(int(floor as i64))?,
        Provenance::Quotient {
            group: group.spec().to_string(),
            images: shown.join(", "),
        },
    )
}
