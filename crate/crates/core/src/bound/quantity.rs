//! Length quantities tracked by the bound engine.

use std::fmt;
use std::sync::LazyLock;

use crate::parse::Alphabet;
use crate::verbal::{beta_word, gamma_word, surface_word};
use crate::word::{Letter, Word};

/// Hypotheses about the ambient group of `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Context {
    Free,
    Perfect,
    PerfectSclZero,
}

impl Context {
    pub fn name(self) -> &'static str {
        match self {
            Context::Free => "FREE",
            Context::Perfect => "PERFECT",
            Context::PerfectSclZero => "PERFECT_SCL_ZERO",
        }
    }

    pub fn parse(s: &str) -> Option<Context> {
        match s.to_ascii_uppercase().as_str() {
            "FREE" => Some(Context::Free),
            "PERFECT" => Some(Context::Perfect),
            "PERFECT_SCL_ZERO" => Some(Context::PerfectSclZero),
            _ => None,
        }
    }
}

static GAMMA_BODIES: LazyLock<Vec<Word>> =
    LazyLock::new(|| (2..=16).map(|n| gamma_word(n).expect("gamma_n").body().clone()).collect());
static BETA_BODIES: LazyLock<Vec<Word>> =
    LazyLock::new(|| (1..=6).map(|n| beta_word(n).expect("beta_n").body().clone()).collect());

/// A single word `w` (identified up to automorphism) or the set of all
/// `Gamma_3`-words `[a, b]` with `b` in the commutator subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Template {
    Word(Word),
    Gamma3Set,
}

impl Template {
    pub fn word(w: &Word) -> Template {
        Template::Word(w.canonical_form())
    }

    pub fn commutator() -> Template {
        Template::Word(Word::generator(1).commutator(&Word::generator(2)))
    }

    pub fn body(&self) -> Option<&Word> {
        match self {
            Template::Word(w) => Some(w),
            Template::Gamma3Set => None,
        }
    }

    pub fn is_commutator(&self) -> bool {
        *self == Template::commutator()
    }

    /// `n` when this is `gamma_n`, `n >= 2`.
    pub fn gamma_index(&self) -> Option<usize> {
        let body = self.body()?;
        GAMMA_BODIES.iter().position(|t| t == body).map(|i| i + 2)
    }

    pub fn beta_index(&self) -> Option<usize> {
        let body = self.body()?;
        BETA_BODIES.iter().position(|t| t == body).map(|i| i + 1)
    }

    /// `g` when this is the product of `g` commutators in disjoint letters.
    pub fn surface_genus(&self) -> Option<usize> {
        let body = self.body()?;
        if body.len() % 4 != 0 || body.is_empty() {
            return None;
        }
        let g = body.len() / 4;
        surface_word(g).ok().filter(|t| t.body() == body).map(|_| g)
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        if self.is_commutator() {
            return format!("[{},{}]", alphabet.name(1), alphabet.name(2));
        }
        if let Some(k) = self.body().and_then(commutator_power).filter(|&k| k >= 2) {
            return format!("[{},{}]^{k}", alphabet.name(1), alphabet.name(2));
        }
        if let Some(n) = self.gamma_index() {
            return format!("gamma{n}");
        }
        if let Some(n) = self.beta_index().filter(|&n| n >= 2) {
            return format!("beta{n}");
        }
        if let Some(g) = self.surface_genus().filter(|&g| g >= 2) {
            return format!("surface{g}");
        }
        match self {
            Template::Word(w) => alphabet.format(w),
            Template::Gamma3Set => "Gamma3".into(),
        }
    }

    /// The form accepted back by the facts-file parser.
    pub fn to_spec(&self, alphabet: &Alphabet) -> String {
        match self {
            Template::Word(w) => format!("w:{}", alphabet.format(w)),
            Template::Gamma3Set => "Gamma3".into(),
        }
    }
}

/// `k` with `w = [x1,x2]^k`, `k >= 1`.
fn commutator_power(w: &Word) -> Option<usize> {
    let k = w.len() / 4;
    let c = Word::generator(1).commutator(&Word::generator(2));
    (k >= 1 && w.len().is_multiple_of(4) && c.pow(k as i64) == *w).then_some(k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    /// `l(g^n | t)`.
    L(u32),
    /// `sl(g | t)`.
    Sl,
}

/// `scl(g)` is `sl(g | [x,y])` and `cl(g)` is `l(g | [x,y])`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quantity {
    pub kind: Kind,
    pub context: Context,
    pub g: Word,
    pub template: Template,
}

impl Quantity {
    /// Words of free-context quantities are stored up to automorphism.
    fn normalize(g: &Word, context: Context) -> Word {
        if context == Context::Free {
            g.canonical_form()
        } else {
            g.clone()
        }
    }

    pub fn l(g: &Word, template: Template, n: u32, context: Context) -> Quantity {
        assert!(n >= 1, "l(g^n|w) needs n >= 1");
        Quantity {
            kind: Kind::L(n),
            context,
            g: Self::normalize(g, context),
            template,
        }
    }

    pub fn sl(g: &Word, template: Template, context: Context) -> Quantity {
        Quantity {
            kind: Kind::Sl,
            context,
            g: Self::normalize(g, context),
            template,
        }
    }

    pub fn scl(g: &Word, context: Context) -> Quantity {
        Quantity::sl(g, Template::commutator(), context)
    }

    pub fn cl(g: &Word, context: Context) -> Quantity {
        Quantity::l(g, Template::commutator(), 1, context)
    }

    /// `sl(w | w)` for a free word.
    pub fn self_sl(w: &Word) -> Quantity {
        Quantity::sl(w, Template::word(w), Context::Free)
    }

    pub fn is_integral(&self) -> bool {
        matches!(self.kind, Kind::L(_))
    }

    pub fn exponent(&self) -> Option<u32> {
        match self.kind {
            Kind::L(n) => Some(n),
            Kind::Sl => None,
        }
    }

    /// The word is the template body itself (up to automorphism).
    pub fn is_self(&self) -> bool {
        self.context == Context::Free && self.template.body() == Some(&self.g)
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        let commutator = self.template.is_commutator();
        let named = self.is_self() && !commutator;
        let g = if named { "w".to_string() } else { alphabet.format(&self.g) };
        let t = if named { "w".to_string() } else { self.template.render(alphabet) };
        let mut body = match (self.kind, commutator) {
            (Kind::Sl, true) => format!("scl({g})"),
            (Kind::L(1), true) => format!("cl({g})"),
            (Kind::Sl, false) => format!("sl({g} | {t})"),
            (Kind::L(1), false) => format!("l({g} | {t})"),
            (Kind::L(n), _) => format!("l(({g})^{n} | {t})"),
        };
        if named {
            body = format!("{body}, w = {}", self.template.render(alphabet));
        }
        match self.context {
            Context::Free => body,
            c => format!("{body} [{}]", c.name()),
        }
    }

    /// The facts-file spelling, without the bound.
    pub fn to_spec(&self, alphabet: &Alphabet) -> String {
        let g = alphabet.format(&self.g);
        let ctx = self.context.name();
        match (self.kind, self.template.is_commutator()) {
            (Kind::Sl, true) => format!("SCL {ctx} {g}"),
            (Kind::L(1), true) => format!("CL {ctx} {g}"),
            (Kind::Sl, false) => format!("SL {ctx} {g} | {}", self.template.to_spec(alphabet)),
            (Kind::L(n), _) => format!("L {ctx} {g} | {} ^ {n}", self.template.to_spec(alphabet)),
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&default_alphabet()))
    }
}

pub fn default_alphabet() -> Alphabet {
    Alphabet::with_names(&["x", "y", "z", "w", "u", "v"])
}

/// `(r, k)` with `g = r^k`, `k >= 1` maximal. The identity is its own root.
pub fn primitive_root(g: &Word) -> (Word, u32) {
    let letters = g.letters();
    let n = letters.len();
    // strip the conjugating prefix: g = u c u^-1 with c cyclically reduced
    let mut p = 0;
    while p < n / 2 && letters[p] == letters[n - 1 - p].inverse() {
        p += 1;
    }
    let core = &letters[p..n - p];
    let m = core.len();
    if m == 0 {
        return (g.clone(), 1);
    }
    let period = (1..=m)
        .find(|&d| m.is_multiple_of(d) && (0..m).all(|i| core[i] == core[i % d]))
        .unwrap_or(m);
    let mut root: Vec<Letter> = letters[..p].to_vec();
    root.extend_from_slice(&core[..period]);
    root.extend_from_slice(&letters[n - p..]);
    (crate::word::reduce(root), (m / period) as u32)
}

/// `u = [a, v]` with `a` a single letter that does not occur in `v`.
pub fn split_outer_commutator(u: &Word) -> Option<(Letter, Word)> {
    let letters = u.letters();
    let len = letters.len();
    if len < 4 || !len.is_multiple_of(2) {
        return None;
    }
    let a = letters[0];
    let v = Word::from_signed(&letters[1..len / 2].iter().map(|l| l.raw()).collect::<Vec<_>>());
    let candidate = Word::from_signed(&[a.raw()]).commutator(&v);
    (candidate == *u && !v.contains_generator(a.generator()) && !v.is_identity()).then_some((a, v))
}
