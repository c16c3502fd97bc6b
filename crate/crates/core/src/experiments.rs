//! Named, reproducible experiments. Each one re-derives its values through
//! the certificate, finite-group and bound machinery and compares them with
//! the published claim it is registered against.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bound::{
    add_quotient_floor, fmt_rational, half, int, parse_quantity, rat, seed_db, Context, Db, Interval, Provenance,
    Quantity, Rational, RuleId, Template, DEFAULT_ITERATION_CAP,
};
use crate::cover::{cover_invariants, homomorphism_check, verify_shape_identity};
use crate::error::{Error, Result};
use crate::group::{bi_invariance_check, wlength_table, DistanceTable, ElementId, FiniteGroup};
use crate::identity::{
    culler_certificate, culler_chain_xy2, culler_cover_shape, culler_identity, culler_power_certificate,
    gamma3_triangle, hall_witt_split, herd_powers, identity_chain, oddball_power, rotate_product, square_to_gamma3,
    telescope_line, verify_identity, Factor, Operand, RewriteCertificate,
};
use crate::magnus::{magnus_depth, MagnusDepth};
use crate::parse::Alphabet;
use crate::verbal::{
    beta_word, gamma_word, grope_word, surface_word, WordTemplate, DEFAULT_ENUMERATION_BUDGET,
};
use crate::word::{random_word, Substitution, Word};

/// One compared value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub label: String,
    pub observed: String,
    pub expected: String,
    pub citation: String,
    pub pass: bool,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {} (expected {}; {})",
            if self.pass { "PASS" } else { "FAIL" },
            self.label,
            self.observed,
            self.expected,
            self.citation
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub name: String,
    pub description: String,
    pub checks: Vec<Check>,
    /// Derivation traces and informational lines, in order.
    pub trace: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "EXPERIMENT {}", self.name)?;
        writeln!(f, "  {}", self.description)?;
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        if !self.trace.is_empty() {
            writeln!(f, "TRACE")?;
            for line in &self.trace {
                writeln!(f, "  {line}")?;
            }
        }
        let passed = self.checks.iter().filter(|c| c.pass).count();
        writeln!(
            f,
            "RESULT {} ({passed}/{} checks)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks.len()
        )
    }
}

/// A registry entry.
pub struct Experiment {
    pub name: &'static str,
    pub description: &'static str,
    /// The claim the expected values come from.
    pub citation: &'static str,
    /// Facts-file quantities that must be seeded, e.g. `SCL FREE [x,y]`.
    pub seeds: &'static [&'static str],
    pub budget: Duration,
    body: fn(&mut Runner) -> Result<()>,
}

const SURFACE_SEEDS: &[&str] = &[
    "SCL FREE [x,y]",
    "SCL FREE [x1,y1][x2,y2]",
    "SCL FREE [x1,y1][x2,y2][x3,y3]",
    "SCL FREE [x1,y1][x2,y2][x3,y3][x4,y4]",
];

static REGISTRY: &[Experiment] = &[
    Experiment {
        name: "xy_n",
        description: "sl([x,y^k] | [x,y^k]) for k = 1..5 from the cubic commutator identity",
        citation: "sl([x,y^n]|[x,y^n]) = 1/2",
        seeds: &[],
        budget: Duration::from_secs(2),
        body: xy_n,
    },
    Experiment {
        name: "xy_squared",
        description: "sl([x,y]^2 | [x,y]^2) from the five-square certificate and scl([x,y]) = 1/2",
        citation: "2/3 <= sl([x,y]^2|[x,y]^2) <= 4/5",
        seeds: &["SCL FREE [x,y]"],
        budget: Duration::from_secs(2),
        body: xy_squared,
    },
    Experiment {
        name: "gamma_n",
        description: "sl(gamma_n | gamma_n) for n = 2..6",
        citation: "1/2 <= sl(gamma_n|gamma_n) <= 1 - 2^(1-n)",
        seeds: &[],
        budget: Duration::from_secs(2),
        body: gamma_n,
    },
    Experiment {
        name: "w_g",
        description: "sl(w_g | w_g) for the genus-g surface word, g = 1..4",
        citation: "sl(w_g|w_g) = 1 - 1/2g given scl(w_g) = g - 1/2",
        seeds: SURFACE_SEEDS,
        budget: Duration::from_secs(2),
        body: w_g,
    },
    Experiment {
        name: "comparison",
        description: "sl(g | gamma_n) in a perfect group with scl(g) = s, n = 2..6",
        citation: "comparison: scl(g) <= sl(g|gamma_n) <= 2^(n-2) scl(g)",
        seeds: &[],
        budget: Duration::from_secs(2),
        body: comparison,
    },
    Experiment {
        name: "grope",
        description: "sl(w_n | gamma_3) for w_n = [z, w_n'] with w_n' the genus-n surface word",
        citation: "sl(g|gamma_3) <= 2 sl(g|Gamma_3) with l(w_n|Gamma_3) = 1",
        seeds: &[],
        budget: Duration::from_secs(2),
        body: grope,
    },
    Experiment {
        name: "culler",
        description: "Culler's identity, its y -> y^k substitutions and the derived certificates",
        citation: "[x,y]^3 = [y^x, x^(y^-1) x^-2][x^(y^-1), y^2]",
        seeds: &[],
        budget: Duration::from_secs(1),
        body: culler,
    },
    Experiment {
        name: "identities",
        description: "the five elementary identities under 1000 random substitutions",
        citation: "elementary commutator identities (1)-(4) and Hall-Witt",
        seeds: &[],
        budget: Duration::from_secs(10),
        body: identities,
    },
    Experiment {
        name: "certificates",
        description: "factor counts of every certificate-producing rewrite over 200 random inputs each",
        citation: "closed-form factor counts n-1, (m-1)k, m, 2^n-1, m(m-1)/2, 2, n-1",
        seeds: &[],
        budget: Duration::from_secs(60),
        body: certificates,
    },
    Experiment {
        name: "cover",
        description: "the permutation representation rho_n and its cover, n = 1..50",
        citation: "rho_n([x,y]) is a single (2n+1)-cycle; the cover has one boundary component",
        seeds: &[],
        budget: Duration::from_secs(1),
        body: cover,
    },
    Experiment {
        name: "a5_commutator",
        description: "commutator length in A5 and bi-invariance of the verbal metric",
        citation: "verbal Cayley graph metric is bi-invariant; every element of A5 is a commutator",
        seeds: &[],
        budget: Duration::from_secs(10),
        body: a5_commutator,
    },
    Experiment {
        name: "monotonicity",
        description: "finite-quotient floors against certified ceilings on 100 random triples",
        citation: "W-length does not increase under homomorphisms",
        seeds: &[],
        budget: Duration::from_secs(60),
        body: monotonicity,
    },
    Experiment {
        name: "magnus",
        description: "lower-central depth of gamma_n and beta_2 by truncated Magnus expansion",
        citation: "gamma_n lies in the n-th lower central term; beta_2 in the 4th",
        seeds: &[],
        budget: Duration::from_secs(10),
        body: magnus,
    },
    Experiment {
        name: "cl_xy3",
        description: "cl([x,y]^3): Culler ceiling and a search for a finite-quotient floor of 2",
        citation: "Culler's identity writes [x,y]^3 as a product of two commutators",
        seeds: &[],
        budget: Duration::from_secs(30),
        body: cl_xy3,
    },
];

pub fn registry() -> &'static [Experiment] {
    REGISTRY
}

/// Catalog lines, one per experiment, in registry order.
pub fn list() -> Vec<String> {
    REGISTRY
        .iter()
        .map(|e| {
            let seeds = if e.seeds.is_empty() { "none".to_string() } else { e.seeds.join("; ") };
            format!(
                "{:<14} {}\n{:<14} claim: {}\n{:<14} seeds: {}; budget: {}s",
                e.name,
                e.description,
                "",
                e.citation,
                "",
                seeds,
                e.budget.as_secs()
            )
        })
        .collect()
}

pub fn find(name: &str) -> Result<&'static Experiment> {
    REGISTRY.iter().find(|e| e.name == name).ok_or_else(|| {
        let mut near: Vec<(usize, &str)> = REGISTRY
            .iter()
            .map(|e| (strsim::levenshtein(name, e.name), e.name))
            .filter(|(d, n)| *d <= 3 || n.contains(name) || name.contains(n))
            .collect();
        near.sort();
        Error::UnknownExperiment {
            name: name.to_string(),
            suggestions: near.into_iter().map(|(_, n)| n.to_string()).collect(),
        }
    })
}

/// Run with the built-in seed facts.
pub fn run(name: &str) -> Result<Report> {
    run_with_seeds(name, crate::bound::DEFAULT_SEEDS)
}

pub fn run_with_seeds(name: &str, seeds: &str) -> Result<Report> {
    let e = find(name)?;
    let mut probe = Db::new();
    seed_db(&mut probe, seeds)?;
    for s in e.seeds {
        let q = parse_quantity(s, Context::Free, probe.alphabet_mut())?;
        if !probe.interval(&q).is_some_and(|i| i.is_exact()) {
            return Err(Error::MissingSeed(format!("{s} (needed by {name})")));
        }
    }
    let mut runner = Runner {
        seeds: seeds.to_string(),
        use_seeds: !e.seeds.is_empty(),
        citation: e.citation,
        checks: Vec::new(),
        trace: Vec::new(),
    };
    (e.body)(&mut runner)?;
    Ok(Report {
        name: e.name.to_string(),
        description: e.description.to_string(),
        checks: runner.checks,
        trace: runner.trace,
    })
}

struct Runner {
    seeds: String,
    use_seeds: bool,
    citation: &'static str,
    checks: Vec<Check>,
    trace: Vec<String>,
}

enum Expect {
    Exact(Interval),
    Within(Interval),
    HiAtMost(Rational),
}

impl Expect {
    fn holds(&self, got: &Interval) -> bool {
        match self {
            Expect::Exact(i) => got == i,
            Expect::Within(i) => i.contains(got),
            Expect::HiAtMost(h) => got.hi().is_some_and(|g| g <= h),
        }
    }
}

impl fmt::Display for Expect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expect::Exact(i) => write!(f, "= {i}"),
            Expect::Within(i) => write!(f, "within {i}"),
            Expect::HiAtMost(h) => write!(f, "hi <= {}", fmt_rational(h)),
        }
    }
}

impl Runner {
    fn db(&self, alphabet: Alphabet) -> Result<Db> {
        let mut db = Db::with_alphabet(alphabet);
        if self.use_seeds {
            seed_db(&mut db, &self.seeds)?;
        }
        Ok(db)
    }

    fn check(&mut self, label: impl Into<String>, observed: impl Into<String>, expected: impl Into<String>, pass: bool) {
        self.checks.push(Check {
            label: label.into(),
            observed: observed.into(),
            expected: expected.into(),
            citation: self.citation.to_string(),
            pass,
        });
    }

    fn flag(&mut self, label: impl Into<String>, pass: bool) {
        let observed = if pass { "true" } else { "false" };
        self.check(label, observed, "true", pass);
    }

    /// Propagate all rules, compare the target and keep its derivation.
    fn derive(&mut self, db: &mut Db, target: &Quantity, expect: Expect) -> Result<()> {
        db.declare(target.clone())?;
        db.propagate(&RuleId::all(), DEFAULT_ITERATION_CAP)?;
        let got = db.interval(target).cloned().unwrap_or_else(Interval::unbounded);
        let replay_ok = db.facts().iter().all(|f| db.replay(f.id).unwrap_or(false));
        let label = db.render(target);
        self.check(label.clone(), got.to_string(), expect.to_string(), expect.holds(&got) && replay_ok);
        self.trace.push(format!("derivation of {label}:"));
        let explanation = db.explain(target)?;
        self.trace.extend(explanation.tree.iter().map(|l| format!("  {l}")));
        Ok(())
    }
}

fn x() -> Word {
    Word::generator(1)
}

fn y() -> Word {
    Word::generator(2)
}

fn certificate(reference: impl Into<String>) -> Provenance {
    Provenance::Certificate {
        reference: reference.into(),
    }
}

fn exact(v: Rational) -> Result<Interval> {
    Interval::exact(v)
}

fn xy_n(r: &mut Runner) -> Result<()> {
    for k in 1..=5u32 {
        let mut db = r.db(Alphabet::with_names(&["x", "y"]))?;
        let w = x().commutator(&y().pow(k as i64));
        let cert = culler_power_certificate(k)?;
        r.flag(format!("[x,y^{k}]^3 certificate verifies"), cert.verify() && cert.target == w.pow(3));
        db.add_fact(
            Quantity::l(&w, Template::word(&w), 3, Context::Free),
            Interval::at_most(int(cert.factors.len() as i64))?,
            certificate(format!("[x,y^{k}]^3 as {} [x,y^{k}]-words", cert.factors.len())),
        )?;
        r.derive(&mut db, &Quantity::self_sl(&w), Expect::Exact(exact(half())?))?;
    }
    Ok(())
}

fn xy_squared(r: &mut Runner) -> Result<()> {
    let mut db = r.db(Alphabet::with_names(&["x", "y"]))?;
    let w = x().commutator(&y()).pow(2);
    let cert = culler_chain_xy2();
    let shape = cert.factors.len() == 5 && cert.factors.iter().all(|f| f.witness_holds());
    r.flag("([x,y]^2)^6 certificate verifies with 5 squares of commutators", cert.verify() && shape);
    db.add_fact(
        Quantity::l(&w, Template::word(&w), 6, Context::Free),
        Interval::at_most(int(cert.factors.len() as i64))?,
        certificate("([x,y]^2)^6 = a^2 b^2 c^2 a'^2 b'^2"),
    )?;
    r.derive(&mut db, &Quantity::self_sl(&w), Expect::Exact(Interval::new(rat(2, 3), Some(rat(4, 5)))?))
}

fn gamma_n(r: &mut Runner) -> Result<()> {
    for n in 2..=6usize {
        let mut db = r.db(Alphabet::new())?;
        let t = gamma_word(n)?;
        let hi = int(1) - rat(1, 1 << (n - 1));
        r.derive(&mut db, &Quantity::self_sl(t.body()), Expect::Within(Interval::new(half(), Some(hi))?))?;
    }
    Ok(())
}

fn w_g(r: &mut Runner) -> Result<()> {
    for g in 1..=4usize {
        let mut db = r.db(Alphabet::new())?;
        let w = surface_word(g)?;
        let v = int(1) - rat(1, 2 * g as i64);
        r.derive(&mut db, &Quantity::self_sl(w.body()), Expect::Exact(exact(v)?))?;
    }
    Ok(())
}

fn comparison(r: &mut Runner) -> Result<()> {
    for s in [half(), rat(3, 1)] {
        for n in 2..=6usize {
            let mut db = r.db(Alphabet::with_names(&["g"]))?;
            let g = Word::generator(1);
            db.add_fact(
                Quantity::scl(&g, Context::Perfect),
                exact(s.clone())?,
                Provenance::Seed {
                    label: format!("hypothesis scl(g) = {}", fmt_rational(&s)),
                },
            )?;
            let target = Quantity::sl(&g, Template::word(gamma_word(n)?.body()), Context::Perfect);
            let window = Interval::new(s.clone(), Some(int(1 << (n - 2)) * &s))?;
            r.derive(&mut db, &target, Expect::Within(window))?;
        }
    }
    Ok(())
}

fn grope(r: &mut Runner) -> Result<()> {
    for n in 1..=3usize {
        let mut db = r.db(crate::verbal::grope_alphabet(n))?;
        let w = grope_word(n)?;
        let z = Word::generator(2 * n as u32 + 1);
        let inner = surface_word(n)?.body().clone();
        let is_gamma3_word = w == z.commutator(&inner) && inner.is_in_commutator_subgroup();
        r.flag(format!("w_{n} = [z, surface word] with surface word in [F,F]"), is_gamma3_word);
        db.add_fact(
            Quantity::l(&w, Template::Gamma3Set, 1, Context::Free),
            Interval::at_most(int(1))?,
            certificate(format!("w_{n} is itself a Gamma3-word")),
        )?;
        let target = Quantity::sl(&w, Template::word(gamma_word(3)?.body()), Context::Free);
        r.derive(&mut db, &target, Expect::HiAtMost(int(2)))?;
    }
    Ok(())
}

fn culler(r: &mut Runner) -> Result<()> {
    let (lhs, rhs) = culler_identity();
    r.flag("[x,y]^3 = [y^x, x^(y^-1) x^-2][x^(y^-1), y^2]", verify_identity(&lhs, &rhs));
    let all_k = (1..=10).all(|k| {
        let sigma = Substitution::from_images(vec![x(), y().pow(k)]);
        let (l, rr) = (lhs.substitute(&sigma), rhs.substitute(&sigma));
        matches!((l, rr), (Ok(l), Ok(rr)) if verify_identity(&l, &rr))
    });
    r.flag("y -> y^k substitutions verify for k = 1..10", all_k);
    let cert = culler_certificate();
    r.check(
        "commutator factors in the identity",
        cert.count_of("COMMUTATOR").to_string(),
        "2",
        cert.verify() && cert.count_of("COMMUTATOR") == 2,
    );
    let powers = (1..=10).all(|k| culler_power_certificate(k).is_ok_and(|c| c.verify()));
    r.flag("[x,y^k]^3 certificates verify for k = 1..10", powers);
    Ok(())
}

fn random_substitution(rng: &mut ChaCha8Rng, vars: usize) -> Substitution {
    let rank = rng.gen_range(1..=6);
    Substitution::from_images(
        (0..vars)
            .map(|_| {
                let len = rng.gen_range(0..=16);
                random_word(rng, rank, len)
            })
            .collect(),
    )
}

fn identities(r: &mut Runner) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1d);
    for id in 1..=5u8 {
        let arity = crate::identity::base_identity_arity(id)?;
        let mut failures = 0;
        for _ in 0..1000 {
            let sigma = random_substitution(&mut rng, arity);
            let chain = identity_chain(id, &sigma)?;
            if !chain.windows(2).all(|p| verify_identity(&p[0], &p[1])) {
                failures += 1;
            }
        }
        let name = if id == 5 { "Hall-Witt".to_string() } else { format!("identity ({id})") };
        r.check(format!("{name}: failures in 1000 substitutions"), failures.to_string(), "0", failures == 0);
    }
    Ok(())
}

fn rand_word(rng: &mut ChaCha8Rng, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    random_word(rng, 4, len)
}

/// Count how many of `trials` certificates verify and satisfy `count`.
fn tally<F>(r: &mut Runner, label: &str, formula: &str, trials: usize, rng: &mut ChaCha8Rng, mut make: F) -> Result<()>
where
    F: FnMut(&mut ChaCha8Rng) -> Result<(RewriteCertificate, usize, usize)>,
{
    let mut good = 0;
    for _ in 0..trials {
        let (cert, got, want) = make(rng)?;
        if cert.verify() && got == want {
            good += 1;
        }
    }
    r.check(
        format!("{label}: verified with count {formula}"),
        format!("{good}/{trials}"),
        format!("{trials}/{trials}"),
        good == trials,
    );
    Ok(())
}

fn certificates(r: &mut Runner) -> Result<()> {
    const TRIALS: usize = 200;
    let mut rng = ChaCha8Rng::seed_from_u64(0xce);
    tally(r, "herd_powers", "n-1", TRIALS, &mut rng, |rng| {
        let (g, h, n) = (rand_word(rng, 6), rand_word(rng, 6), rng.gen_range(1..=5));
        let c = herd_powers(&g, &h, n)?;
        let got = c.count_of("COMMUTATOR");
        Ok((c, got, n as usize - 1))
    })?;
    tally(r, "rotate_product", "(m-1)k", TRIALS, &mut rng, |rng| {
        let m = rng.gen_range(1..=4);
        let k = rng.gen_range(1..=4);
        let ws: Vec<Word> = (0..m).map(|_| rand_word(rng, 5)).collect();
        let c = rotate_product(&ws, k)?;
        let got = c.factors.len() - 1;
        Ok((c, got, (m - 1) * k as usize))
    })?;
    tally(r, "telescope_line", "m", TRIALS, &mut rng, |rng| {
        let m = rng.gen_range(1..=4);
        let gs: Vec<Word> = (0..m).map(|_| rand_word(rng, 5)).collect();
        let a: Vec<i64> = (0..m).map(|_| rng.gen_range(-4..=4)).collect();
        let b: Vec<i64> = (0..m).map(|_| rng.gen_range(-4..=4)).collect();
        let c = telescope_line(&gs, &a, &b)?;
        let got = c.factors.len();
        Ok((c, got, m))
    })?;
    tally(r, "square_to_gamma3", "2^n-1", TRIALS, &mut rng, |rng| {
        let a = rand_word(rng, 4);
        let b = rand_word(rng, 3).commutator(&rand_word(rng, 3));
        let n = rng.gen_range(1..=4);
        let c = square_to_gamma3(&a, &b, n)?;
        let want = if a.commutator(&b).is_identity() { 0 } else { (1 << n) - 1 };
        let got = c.count_of("GAMMA_N_WORD[3]");
        Ok((c, got, want))
    })?;
    tally(r, "gamma3_triangle", "m(m-1)/2", TRIALS, &mut rng, |rng| {
        let (g, k, m) = (rand_word(rng, 5), rand_word(rng, 5), rng.gen_range(1..=6));
        let c = gamma3_triangle(&g, &k, m)?;
        let got = c.count_of("COMMUTATOR");
        Ok((c, got, (m * (m - 1) / 2) as usize))
    })?;
    tally(r, "hall_witt_split", "2", TRIALS, &mut rng, |rng| {
        let g = rand_word(rng, 5);
        let operand = |rng: &mut ChaCha8Rng| {
            if rng.gen_bool(0.5) {
                Operand::Bracket(rand_word(rng, 3), rand_word(rng, 3))
            } else {
                Operand::Plain(rand_word(rng, 5))
            }
        };
        let (a, b) = (operand(rng), operand(rng));
        let c = hall_witt_split(&g, &a, &b)?;
        let want = if a.word().commutator(&b.word()).is_identity() { 0 } else { 2 };
        let got = c.factors.len();
        Ok((c, got, want))
    })?;
    tally(r, "oddball_power", "n-1", TRIALS, &mut rng, |rng| {
        let (xx, yy, zz) = (rand_word(rng, 4), rand_word(rng, 4), rand_word(rng, 4));
        let n = rng.gen_range(1..=8);
        let c = oddball_power(&xx, &yy, &zz, n)?;
        let want = if yy.commutator(&zz).is_identity() { 0 } else { n as usize - 1 };
        let got = c.count_of("BETA2_WORD");
        Ok((c, got, want))
    })?;
    Ok(())
}

fn cover(r: &mut Runner) -> Result<()> {
    let mut failing = Vec::new();
    for n in 1..=50 {
        let report = cover_invariants(n)?;
        if n == 1 {
            r.trace.extend(report.to_string().lines().map(str::to_string));
        }
        if !report.passed() {
            failing.push(n);
        }
    }
    r.check(
        "single (2n+1)-cycle, y of type (n+1, 1^n), x^2 = id, genus n+1 for n = 1..50",
        if failing.is_empty() { "all hold".to_string() } else { format!("fails at {failing:?}") },
        "all hold",
        failing.is_empty(),
    );
    let hom = (1..=5).map(|n| homomorphism_check(n, 200, n as u64)).collect::<Result<Vec<_>>>()?;
    r.flag("rho_n respects 200 random free reductions, n = 1..5", hom.iter().all(|b| *b));
    r.flag(
        "Culler's identity has the [*,y^2]^* [*,y]^* shape (n = 1)",
        verify_shape_identity(1, &culler_cover_shape())?,
    );
    Ok(())
}

fn a5_commutator(r: &mut Runner) -> Result<()> {
    let g = FiniteGroup::alternating(5)?;
    let t = wlength_table(&g, &gamma_word(2)?, DEFAULT_ENUMERATION_BUDGET)?;
    let hist = format!("{:?}", t.histogram());
    r.check("commutator-length histogram of A5", hist.clone(), "{0: 1, 1: 59}", hist == "{0: 1, 1: 59}");
    r.flag("bi-invariance on 1000 random triples", bi_invariance_check(&g, &t, 1000, 5));
    let s5 = FiniteGroup::symmetric(5)?;
    let v = wlength_table(&s5, &gamma_word(2)?, DEFAULT_ENUMERATION_BUDGET)?;
    let order = v.reachable().count();
    r.check("order of [S5, S5]", order.to_string(), "60", order == 60);
    let g3 = wlength_table(&g, &gamma_word(3)?, DEFAULT_ENUMERATION_BUDGET)?;
    let order = g3.reachable().count();
    r.check("order of the gamma_3 verbal subgroup of A5", order.to_string(), "60", order == 60);
    Ok(())
}

const QUOTIENTS: &[&str] = &["S3", "S4", "A4", "A5", "SL2_3"];

fn monotonicity(r: &mut Runner) -> Result<()> {
    let templates = [
        gamma_word(2)?,
        WordTemplate::from_word("x^2", x().pow(2)),
        gamma_word(3)?,
    ];
    let groups: Vec<FiniteGroup> = QUOTIENTS.iter().map(|s| FiniteGroup::load(s)).collect::<Result<_>>()?;
    let mut tables: BTreeMap<(usize, usize), DistanceTable> = BTreeMap::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x40);
    let (mut inconsistent, mut unverified, mut max_floor) = (0, 0, 0);
    for _ in 0..100 {
        let ti = rng.gen_range(0..templates.len());
        let gi = rng.gen_range(0..groups.len());
        let t = &templates[ti];
        let k = rng.gen_range(1..=3);
        let factors: Vec<Factor> = (0..k)
            .map(|_| {
                let witness: Vec<Word> = t.variables().iter().map(|_| random_word(&mut rng, 3, 4)).collect();
                let conj = random_word(&mut rng, 3, 3);
                Factor::w_word(t.clone(), witness).map(|f| f.conjugated(&conj))
            })
            .collect::<Result<_>>()?;
        let word = crate::word::product(factors.iter().map(Factor::value).collect::<Vec<_>>().iter());
        let cert = RewriteCertificate::new(word.clone(), factors);
        if !cert.verify() {
            unverified += 1;
            continue;
        }
        let group = &groups[gi];
        if let std::collections::btree_map::Entry::Vacant(e) = tables.entry((gi, ti)) {
            e.insert(wlength_table(group, t, DEFAULT_ENUMERATION_BUDGET)?);
        }
        let table = &tables[&(gi, ti)];
        let images: BTreeMap<u32, ElementId> = word
            .generators()
            .into_iter()
            .map(|gen| (gen, rng.gen_range(0..group.order() as ElementId)))
            .collect();
        let mut db = Db::new();
        let ceiling = db.add_fact(
            Quantity::l(&word, Template::word(t.body()), 1, Context::Free),
            Interval::at_most(int(k as i64))?,
            certificate(format!("product of {k} {}-words", t.name())),
        );
        let floor = ceiling.and_then(|_| add_quotient_floor(&mut db, &word, t.body(), 1, group, table, &images));
        match floor {
            Ok(id) => {
                let lo = db.fact(id).map(|f| f.bound.lo().clone()).unwrap_or_default();
                max_floor = max_floor.max(lo.to_integer().try_into().unwrap_or(0));
            }
            Err(Error::Inconsistent { .. }) => inconsistent += 1,
            Err(e) => return Err(e),
        }
    }
    r.check("certificates verifying", format!("{}/100", 100 - unverified), "100/100", unverified == 0);
    r.check("inconsistencies raised", inconsistent.to_string(), "0", inconsistent == 0);
    r.trace.push(format!("largest quotient floor observed: {max_floor}"));
    Ok(())
}

fn magnus(r: &mut Runner) -> Result<()> {
    for n in 1..=5usize {
        let d = magnus_depth(gamma_word(n)?.body(), 6)?;
        r.check(format!("depth of gamma_{n}"), format!("{d:?}"), format!("Exact({n})"), d == MagnusDepth::Exact(n));
    }
    let d = magnus_depth(beta_word(2)?.body(), 6)?;
    r.check("depth of beta_2", format!("{d:?}"), "Exact(4)", d == MagnusDepth::Exact(4));
    Ok(())
}

fn cl_xy3(r: &mut Runner) -> Result<()> {
    let w = x().commutator(&y()).pow(3);
    let cert = culler_certificate();
    let mut db = r.db(Alphabet::with_names(&["x", "y"]))?;
    db.add_fact(
        Quantity::cl(&w, Context::Free),
        Interval::at_most(int(cert.count_of("COMMUTATOR") as i64))?,
        certificate("Culler's identity"),
    )?;
    // Search every pair of images in a few small quotients for a floor of 2.
    let mut best: Option<(u32, String)> = None;
    for spec in ["S3", "S4", "A4", "SL2_3", "A5", "S5", "SL2_5"] {
        let g = FiniteGroup::load(spec)?;
        let t = wlength_table(&g, &gamma_word(2)?, DEFAULT_ENUMERATION_BUDGET)?;
        let mut seen = BTreeSet::new();
        for a in g.elements() {
            for b in g.elements() {
                let e = g.pow(g.commutator(a, b), 3);
                if !seen.insert(e) {
                    continue;
                }
                let d = t.distance(e).unwrap_or(0);
                if best.as_ref().is_none_or(|(bd, _)| d > *bd) {
                    best = Some((d, format!("{spec}: x->{}, y->{}", g.describe(a), g.describe(b))));
                    if d >= 2 {
                        let images = BTreeMap::from([(1, a), (2, b)]);
                        add_quotient_floor(&mut db, &w, &Word::generator(1).commutator(&Word::generator(2)), 1, &g, &t, &images)?;
                    }
                }
            }
        }
    }
    let target = Quantity::cl(&w, Context::Free);
    r.derive(&mut db, &target, Expect::Within(Interval::new(int(1), Some(int(2)))?))?;
    match best {
        Some((d, at)) if d >= 2 => r.trace.push(format!("quotient floor 2 certified at {at}")),
        Some((d, at)) => r.trace.push(format!(
            "no quotient among the searched groups certifies cl >= 2 (best floor {d} at {at})"
        )),
        None => {}
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_shape() {
        assert!(REGISTRY.len() >= 8);
        let names: BTreeSet<_> = REGISTRY.iter().map(|e| e.name).collect();
        assert_eq!(names.len(), REGISTRY.len());
        assert!(REGISTRY.iter().all(|e| !e.citation.is_empty()));
        assert_eq!(list().len(), REGISTRY.len());
        assert!(list().iter().all(|l| l.contains("seeds:")));
    }

    #[test]
    fn unknown_names_suggest() {
        match run("xy_m") {
            Err(Error::UnknownExperiment { suggestions, .. }) => assert!(suggestions.contains(&"xy_n".to_string())),
            other => panic!("unexpected {other:?}"),
        }
        match run("gamma") {
            Err(Error::UnknownExperiment { suggestions, .. }) => assert!(suggestions.contains(&"gamma_n".to_string())),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_seed_is_reported() {
        assert!(matches!(run_with_seeds("xy_squared", ""), Err(Error::MissingSeed(_))));
        assert!(run_with_seeds("xy_n", "").unwrap().passed());
    }

    #[test]
    fn engine_experiments_pass_and_repeat() {
        for name in ["xy_n", "xy_squared", "gamma_n", "w_g", "comparison", "grope", "culler", "cover", "magnus"] {
            let a = run(name).unwrap();
            assert!(a.passed(), "{a}");
            assert_eq!(a.to_string(), run(name).unwrap().to_string());
        }
    }
}
