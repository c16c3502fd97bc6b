//! Inequalities between length quantities, each applied in solved form.
//!
//! A rule reads the current database and proposes bounds; the engine keeps
//! the ones that tighten an interval. Every bound read is recorded as a
//! premise so the derivation can be replayed.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use super::engine::{Db, Premise, Side};
use super::interval::{half, int, Rational};
use super::quantity::{primitive_root, split_outer_commutator, Context, Kind, Quantity, Template};
use crate::magnus::{magnus_depth, MagnusDepth};
use crate::verbal::gamma_word;
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
    R11,
    R12,
    R13,
    R14,
}

const ALL: [RuleId; 14] = [
    RuleId::R1,
    RuleId::R2,
    RuleId::R3,
    RuleId::R4,
    RuleId::R5,
    RuleId::R6,
    RuleId::R7,
    RuleId::R8,
    RuleId::R9,
    RuleId::R10,
    RuleId::R11,
    RuleId::R12,
    RuleId::R13,
    RuleId::R14,
];

impl RuleId {
    pub fn all() -> BTreeSet<RuleId> {
        ALL.into_iter().collect()
    }

    pub fn code(self) -> &'static str {
        match self {
            RuleId::R1 => "R1",
            RuleId::R2 => "R2",
            RuleId::R3 => "R3",
            RuleId::R4 => "R4",
            RuleId::R5 => "R5",
            RuleId::R6 => "R6",
            RuleId::R7 => "R7",
            RuleId::R8 => "R8",
            RuleId::R9 => "R9",
            RuleId::R10 => "R10",
            RuleId::R11 => "R11",
            RuleId::R12 => "R12",
            RuleId::R13 => "R13",
            RuleId::R14 => "R14",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            RuleId::R1 => "fundamental inequality",
            RuleId::R2 => "scl bridge",
            RuleId::R3 => "self-length window",
            RuleId::R4 => "subadditivity",
            RuleId::R5 => "stable promotion",
            RuleId::R6 => "outer commutator",
            RuleId::R7 => "nested commutator ceiling",
            RuleId::R8 => "comparison with scl (perfect)",
            RuleId::R9 => "Gamma3 window",
            RuleId::R10 => "abelianization kill",
            RuleId::R11 => "quotient floor",
            RuleId::R12 => "grouped commutator ceiling",
            RuleId::R13 => "power bookkeeping",
            RuleId::R14 => "beta2 from gamma3 (perfect, scl = 0)",
        }
    }

    pub fn parse(s: &str) -> Option<RuleId> {
        ALL.into_iter().find(|r| r.code().eq_ignore_ascii_case(s.trim()))
    }
}

/// A proposed bound for `target`.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub target: Quantity,
    pub lo: Option<Rational>,
    pub hi: Option<Rational>,
    pub rule: RuleId,
    pub premises: Vec<Premise>,
}

/// Reads bounds from the database, remembering each one used.
struct Reader<'a> {
    db: &'a Db,
    premises: Vec<Premise>,
}

impl<'a> Reader<'a> {
    fn new(db: &'a Db) -> Self {
        Reader {
            db,
            premises: Vec::new(),
        }
    }

    /// Lower bound; `0` when nothing is known.
    fn lo(&mut self, q: &Quantity) -> Rational {
        let Some(i) = self.db.interval(q) else {
            return Rational::zero();
        };
        let (src, _) = self.db.sources(q);
        if !i.lo().is_zero() {
            self.premises.push(Premise {
                quantity: q.clone(),
                side: Side::Lo,
                value: i.lo().clone(),
                fact: src,
            });
        }
        i.lo().clone()
    }

    fn hi(&mut self, q: &Quantity) -> Option<Rational> {
        let h = self.db.interval(q)?.hi()?.clone();
        let (_, src) = self.db.sources(q);
        self.premises.push(Premise {
            quantity: q.clone(),
            side: Side::Hi,
            value: h.clone(),
            fact: src,
        });
        Some(h)
    }
}

struct Out<'a> {
    db: &'a Db,
    rule: RuleId,
    list: &'a mut Vec<Derivation>,
}

impl Out<'_> {
    fn lo(&mut self, target: &Quantity, value: Rational, r: Reader) {
        self.push(target, Some(value), None, r);
    }

    fn hi(&mut self, target: &Quantity, value: Rational, r: Reader) {
        self.push(target, None, Some(value), r);
    }

    fn push(&mut self, target: &Quantity, lo: Option<Rational>, hi: Option<Rational>, r: Reader) {
        if !self.db.contains(target) {
            return;
        }
        if lo.as_ref().is_some_and(|l| !l.is_positive()) {
            return;
        }
        self.list.push(Derivation {
            target: target.clone(),
            lo,
            hi,
            rule: self.rule,
            premises: r.premises,
        });
    }
}

fn in_commutator_subgroup(w: &Word) -> bool {
    !w.is_identity() && w.is_in_commutator_subgroup()
}

/// Apply one rule to every quantity in the database.
pub fn apply_rule(rule: RuleId, db: &Db, list: &mut Vec<Derivation>) {
    let mut out = Out { db, rule, list };
    let qs: Vec<&Quantity> = db.quantities().collect();
    match rule {
        RuleId::R1 => r1(db, &qs, &mut out),
        RuleId::R11 => {}
        _ => {
            for q in &qs {
                match rule {
                    RuleId::R2 => r2(db, q, &mut out),
                    RuleId::R3 => r3(db, q, &mut out),
                    RuleId::R4 => r4(db, q, &mut out),
                    RuleId::R5 => r5(db, q, &mut out),
                    RuleId::R6 => r6(db, q, &mut out),
                    RuleId::R7 => r7(db, q, &mut out),
                    RuleId::R8 => r8(db, q, &mut out),
                    RuleId::R9 => r9(db, q, &mut out),
                    RuleId::R10 => r10(db, q, &mut out),
                    RuleId::R12 => r12(db, q, &mut out),
                    RuleId::R13 => r13(db, q, &mut out),
                    RuleId::R14 => r14(db, q, &mut out),
                    RuleId::R1 | RuleId::R11 => unreachable!(),
                }
            }
        }
    }
}

/// `l(g|v) <= l(g|w) l_F(w|v)`, and the same for `sl`.
fn r1(db: &Db, qs: &[&Quantity], out: &mut Out) {
    let mut groups: BTreeMap<(Kind, Context, &Word), Vec<&Quantity>> = BTreeMap::new();
    for q in qs {
        groups.entry((q.kind, q.context, &q.g)).or_default().push(q);
    }
    for members in groups.values() {
        for a in members {
            let Template::Word(w) = &a.template else { continue };
            for b in members {
                if a.template == b.template {
                    continue;
                }
                let c = Quantity::l(w, b.template.clone(), 1, Context::Free);
                if !db.contains(&c) {
                    continue;
                }
                let mut r = Reader::new(db);
                if let (Some(ha), Some(hc)) = (r.hi(a), r.hi(&c)) {
                    out.hi(b, ha * hc, r);
                }
                let mut r = Reader::new(db);
                if let Some(hc) = r.hi(&c).filter(|h| !h.is_zero()) {
                    let lb = r.lo(b);
                    out.lo(a, lb / hc, r);
                }
            }
        }
    }
}

/// `scl(g) <= sl(g|w) (scl(w) + 1/2)` and
/// `n scl(g) <= l(g^n|w) scl(w) + (l(g^n|w) - 1)/2`.
fn r2(db: &Db, q: &Quantity, out: &mut Out) {
    let Template::Word(w) = &q.template else { return };
    if q.template.is_commutator() || !in_commutator_subgroup(w) {
        return;
    }
    let s = Quantity::scl(&q.g, q.context);
    let ws = Quantity::scl(w, Context::Free);
    if !db.contains(&s) || !db.contains(&ws) {
        return;
    }
    match q.kind {
        Kind::Sl => {
            let mut r = Reader::new(db);
            if let (Some(p), Some(wh)) = (r.hi(q), r.hi(&ws)) {
                out.hi(&s, p * (wh + half()), r);
            }
            let mut r = Reader::new(db);
            if let Some(wh) = r.hi(&ws) {
                let sl = r.lo(&s);
                out.lo(q, sl / (wh + half()), r);
            }
            let mut r = Reader::new(db);
            if let Some(p) = r.hi(q).filter(|p| !p.is_zero()) {
                let sl = r.lo(&s);
                out.lo(&ws, sl / p - half(), r);
            }
        }
        Kind::L(n) => {
            let n = int(n as i64);
            let mut r = Reader::new(db);
            if let (Some(l), Some(wh)) = (r.hi(q), r.hi(&ws)) {
                if l >= Rational::one() {
                    let bound = (&l * wh + (l - Rational::one()) * half()) / &n;
                    out.hi(&s, bound, r);
                }
            }
            let mut r = Reader::new(db);
            if let Some(wh) = r.hi(&ws) {
                let sl = r.lo(&s);
                if !sl.is_zero() {
                    out.lo(q, (n * sl + half()) / (wh + half()), r);
                }
            }
        }
    }
}

/// `max(1/2, scl(w)/(scl(w)+1/2)) <= sl(w|w) <= 1` for nontrivial `w` in `[F,F]`.
fn r3(db: &Db, q: &Quantity, out: &mut Out) {
    if q.kind != Kind::Sl || !q.is_self() || q.g.is_identity() {
        return;
    }
    out.hi(q, Rational::one(), Reader::new(db));
    if !in_commutator_subgroup(&q.g) {
        return;
    }
    let mut r = Reader::new(db);
    let ws = Quantity::scl(&q.g, Context::Free);
    let s = r.lo(&ws);
    let from_scl = &s / (&s + half());
    if from_scl > half() {
        out.lo(q, from_scl, r);
    } else {
        out.lo(q, half(), Reader::new(db));
    }
}

/// `sl(g|w) <= l(g^n|w) / n`.
fn r4(db: &Db, q: &Quantity, out: &mut Out) {
    let Kind::L(n) = q.kind else { return };
    let n = int(n as i64);
    let p = Quantity::sl(&q.g, q.template.clone(), q.context);
    let mut r = Reader::new(db);
    if let Some(l) = r.hi(q) {
        out.hi(&p, l / &n, r);
    }
    let mut r = Reader::new(db);
    let s = r.lo(&p);
    out.lo(q, n * s, r);
}

/// `sl(g|w) <= (l(g^n|w) - 1 + sl(w|w)) / n`; for `g = w` its solved form
/// `sl(w|w) <= (l(w^n|w) - 1) / (n - 1)`.
fn r5(db: &Db, q: &Quantity, out: &mut Out) {
    let Kind::L(n) = q.kind else { return };
    let Template::Word(w) = &q.template else { return };
    let u = Quantity::self_sl(w);
    let nontrivial = q.context == Context::Free && !q.g.is_identity();
    if q.is_self() {
        if n < 2 || w.is_identity() {
            return;
        }
        let m = int(n as i64 - 1);
        let mut r = Reader::new(db);
        if let Some(l) = r.hi(q).filter(|l| *l >= Rational::one()) {
            out.hi(&u, (l - Rational::one()) / &m, r);
        }
        let mut r = Reader::new(db);
        let s = r.lo(&u);
        out.lo(q, m * s + Rational::one(), r);
        return;
    }
    let n = int(n as i64);
    let p = Quantity::sl(&q.g, q.template.clone(), q.context);
    let mut r = Reader::new(db);
    if let (Some(l), Some(uh)) = (r.hi(q), r.hi(&u)) {
        if l >= Rational::one() {
            out.hi(&p, (l - Rational::one() + uh) / &n, r);
        }
    }
    if !nontrivial {
        return;
    }
    let mut r = Reader::new(db);
    if let Some(uh) = r.hi(&u) {
        let s = r.lo(&p);
        out.lo(q, &n * s + Rational::one() - uh, r);
    }
    let mut r = Reader::new(db);
    if let Some(l) = r.hi(q) {
        let s = r.lo(&p);
        out.lo(&u, n * s - l + Rational::one(), r);
    }
}

/// For `u = [x, v]` with `x` not in `v`: `sl(u|u) <= (1 + sl(v|v))/2` and
/// `l(u^(2n+1)|u) <= n + l(v^(n+1)|v)`.
fn r6(db: &Db, q: &Quantity, out: &mut Out) {
    if !q.is_self() {
        return;
    }
    let Some((_, v)) = split_outer_commutator(&q.g) else { return };
    match q.kind {
        Kind::Sl => {
            let mut r = Reader::new(db);
            if let Some(h) = r.hi(&Quantity::self_sl(&v)) {
                out.hi(q, (Rational::one() + h) / int(2), r);
            }
        }
        Kind::L(m) => {
            if m < 3 || m % 2 == 0 {
                return;
            }
            let n = (m - 1) / 2;
            let lv = Quantity::l(&v, Template::word(&v), n + 1, Context::Free);
            let mut r = Reader::new(db);
            if let Some(h) = r.hi(&lv) {
                out.hi(q, int(n as i64) + h, r);
            }
        }
    }
}

/// `sl(gamma_n | gamma_n) <= 1 - 2^(1-n)`.
fn r7(db: &Db, q: &Quantity, out: &mut Out) {
    if q.kind != Kind::Sl || !q.is_self() {
        return;
    }
    if let Some(n) = q.template.gamma_index() {
        let denom = Rational::from_integer(num_bigint::BigInt::one() << (n - 1));
        out.hi(q, Rational::one() - Rational::one() / denom, Reader::new(db));
    }
}

/// In a perfect group: `scl(g) <= sl(g|gamma_n) <= 2^(n-2) scl(g)`.
fn r8(db: &Db, q: &Quantity, out: &mut Out) {
    if q.context != Context::Perfect || q.kind != Kind::Sl || q.template.is_commutator() {
        return;
    }
    let Some(n) = q.template.gamma_index() else { return };
    let factor = Rational::from_integer(num_bigint::BigInt::one() << (n - 2));
    let s = Quantity::scl(&q.g, q.context);
    let mut r = Reader::new(db);
    let v = r.lo(&s);
    out.lo(q, v, r);
    let mut r = Reader::new(db);
    if let Some(h) = r.hi(&s) {
        out.hi(q, &factor * h, r);
    }
    let mut r = Reader::new(db);
    if let Some(h) = r.hi(q) {
        out.hi(&s, h, r);
    }
    let mut r = Reader::new(db);
    let v = r.lo(q);
    out.lo(&s, v / factor, r);
}

/// For `g` in `G_3`: `sl(g|Gamma3) <= sl(g|gamma3) <= 2 sl(g|Gamma3)`.
fn r9(db: &Db, q: &Quantity, out: &mut Out) {
    if q.kind != Kind::Sl || q.template != Template::Gamma3Set {
        return;
    }
    let a = Quantity::sl(&q.g, Template::word(gamma_word(3).expect("gamma3").body()), q.context);
    if !db.contains(&a) {
        return;
    }
    let membership = Quantity::l(&q.g, Template::Gamma3Set, 1, q.context);
    let by_depth = q.context == Context::Free
        && (q.g.is_identity() || matches!(magnus_depth(&q.g, 3), Ok(MagnusDepth::AtLeast(_))));
    let fresh = |db| {
        let mut r = Reader::new(db);
        if by_depth || r.hi(&membership).is_some() {
            Some(r)
        } else {
            None
        }
    };
    if let Some(mut r) = fresh(db) {
        if let Some(h) = r.hi(q) {
            out.hi(&a, int(2) * h, r);
        }
    }
    if let Some(mut r) = fresh(db) {
        let v = r.lo(q);
        out.lo(&a, v, r);
    }
    if let Some(mut r) = fresh(db) {
        if let Some(h) = r.hi(&a) {
            out.hi(q, h, r);
        }
    }
    if let Some(mut r) = fresh(db) {
        let v = r.lo(&a);
        out.lo(q, v / int(2), r);
    }
}

/// A word outside `[F,F]` has stable length identically zero.
fn r10(db: &Db, q: &Quantity, out: &mut Out) {
    if q.kind != Kind::Sl {
        return;
    }
    if let Template::Word(w) = &q.template {
        if !w.is_identity() && !w.is_in_commutator_subgroup() {
            out.hi(q, Rational::zero(), Reader::new(db));
        }
    }
}

/// For the product `w_g` of `g` commutators in disjoint letters:
/// `sl(u | w_g) <= scl(u) / g`.
fn r12(db: &Db, q: &Quantity, out: &mut Out) {
    if q.kind != Kind::Sl || q.template.is_commutator() {
        return;
    }
    let Some(genus) = q.template.surface_genus() else { return };
    let g = int(genus as i64);
    let s = Quantity::scl(&q.g, q.context);
    let mut r = Reader::new(db);
    if let Some(h) = r.hi(&s) {
        out.hi(q, h / &g, r);
    }
    let mut r = Reader::new(db);
    let v = r.lo(q);
    out.lo(&s, g * v, r);
}

/// Subadditivity in the exponent, inversion symmetry, homogeneity under
/// powers, and the trivial floors of free-group lengths.
fn r13(db: &Db, q: &Quantity, out: &mut Out) {
    if let Kind::L(c) = q.kind {
        for a in 1..c {
            let qa = Quantity::l(&q.g, q.template.clone(), a, q.context);
            let qb = Quantity::l(&q.g, q.template.clone(), c - a, q.context);
            if !db.contains(&qa) || !db.contains(&qb) {
                continue;
            }
            let mut r = Reader::new(db);
            if let (Some(ha), Some(hb)) = (r.hi(&qa), r.hi(&qb)) {
                out.hi(q, ha + hb, r);
            }
            let mut r = Reader::new(db);
            if let Some(hb) = r.hi(&qb) {
                let v = r.lo(q);
                out.lo(&qa, v - hb, r);
            }
        }
        let inv = Quantity::l(&q.g.inverse(), q.template.clone(), c, q.context);
        if inv != *q && db.contains(&inv) {
            let mut r = Reader::new(db);
            if let Some(h) = r.hi(&inv) {
                out.hi(q, h, r);
            }
            let mut r = Reader::new(db);
            let v = r.lo(&inv);
            out.lo(q, v, r);
        }
    }
    if q.context == Context::Free {
        let (root, k) = primitive_root(&q.g);
        if k > 1 {
            let kq = int(k as i64);
            let rq = match q.kind {
                Kind::Sl => Quantity::sl(&root, q.template.clone(), q.context),
                Kind::L(n) => Quantity::l(&root, q.template.clone(), n * k, q.context),
            };
            // sl scales by k; l(g^n) and l(root^(nk)) coincide
            let scale = if q.kind == Kind::Sl { kq } else { Rational::one() };
            let mut r = Reader::new(db);
            let v = r.lo(&rq);
            out.lo(q, &scale * v, r);
            let mut r = Reader::new(db);
            if let Some(h) = r.hi(&rq) {
                out.hi(q, &scale * h, r);
            }
            let mut r = Reader::new(db);
            let v = r.lo(q);
            out.lo(&rq, v / &scale, r);
            let mut r = Reader::new(db);
            if let Some(h) = r.hi(q) {
                out.hi(&rq, h / &scale, r);
            }
        }
        if q.g.is_identity() {
            out.hi(q, Rational::zero(), Reader::new(db));
        } else if q.is_integral() {
            out.lo(q, Rational::one(), Reader::new(db));
        }
    }
}

/// In a perfect group with vanishing scl: `l(g|gamma3) = 1` implies
/// `sl(g|beta2) <= 1`.
fn r14(db: &Db, q: &Quantity, out: &mut Out) {
    if q.context != Context::PerfectSclZero || q.kind != Kind::Sl || q.template.beta_index() != Some(2) {
        return;
    }
    let l = Quantity::l(&q.g, Template::word(gamma_word(3).expect("gamma3").body()), 1, q.context);
    let mut r = Reader::new(db);
    if r.hi(&l).is_some_and(|h| h <= Rational::one()) {
        out.hi(q, Rational::one(), r);
    }
}
