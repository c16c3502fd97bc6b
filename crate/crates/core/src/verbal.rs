//! Word families (`gamma_n`, `beta_n`, surface words, grope words), their
//! reflexivity and nested-bracket certificates, and enumeration of the
//! w-words of a finite group.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::group::{ElementId, FiniteGroup};
use crate::parse::{parse_expr, Alphabet, Expr};
use crate::word::{Substitution, Word};

/// Default cap on `|G|^variables` evaluations when enumerating w-words.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TemplateKind {
    Gamma(usize),
    Beta(usize),
    /// `[x1,y1]...[xg,yg]`.
    Surface(usize),
    User,
}

/// A word together with the ordered list of its variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WordTemplate {
    name: String,
    kind: TemplateKind,
    body: Word,
    variables: Vec<u32>,
}

impl WordTemplate {
    /// A user template. Every generator of `body` must be listed in `variables`.
    pub fn user(name: impl Into<String>, body: Word, variables: Vec<u32>) -> Result<Self> {
        for g in body.generators() {
            if !variables.contains(&g) {
                return Err(Error::InvalidArgument(format!(
                    "generator x{g} of the template body is not a declared variable"
                )));
            }
        }
        let mut seen = BTreeSet::new();
        if !variables.iter().all(|v| seen.insert(*v)) {
            return Err(Error::InvalidArgument("duplicate template variable".into()));
        }
        Ok(WordTemplate {
            name: name.into(),
            kind: TemplateKind::User,
            body,
            variables,
        })
    }

    /// Template over the generators of `body`, in increasing index order.
    pub fn from_word(name: impl Into<String>, body: Word) -> Self {
        let variables = body.generators().into_iter().collect();
        WordTemplate {
            name: name.into(),
            kind: TemplateKind::User,
            body,
            variables,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &TemplateKind {
        &self.kind
    }

    pub fn body(&self) -> &Word {
        &self.body
    }

    pub fn variables(&self) -> &[u32] {
        &self.variables
    }

    /// Body with images bound to the variables in order.
    pub fn instantiate(&self, images: &[Word]) -> Result<Word> {
        if images.len() != self.variables.len() {
            return Err(Error::InvalidArgument(format!(
                "template {} takes {} arguments, got {}",
                self.name,
                self.variables.len(),
                images.len()
            )));
        }
        self.body.substitute(&Substitution::zip(&self.variables, images))
    }
}

impl fmt::Display for WordTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

fn gamma_body(n: usize, first: u32) -> Word {
    if n == 1 {
        Word::generator(first)
    } else {
        Word::generator(first).commutator(&gamma_body(n - 1, first + 1))
    }
}

fn beta_body(n: usize, first: u32) -> Word {
    if n == 1 {
        Word::generator(first).commutator(&Word::generator(first + 1))
    } else {
        let half = 1u32 << (n - 1);
        beta_body(n - 1, first).commutator(&beta_body(n - 1, first + half))
    }
}

/// `gamma_1 = x1`, `gamma_n = [x1, gamma_{n-1}(x2..xn)]`.
pub fn gamma_word(n: usize) -> Result<WordTemplate> {
    if n < 1 {
        return Err(Error::InvalidArgument("gamma_n needs n >= 1".into()));
    }
    Ok(WordTemplate {
        name: format!("gamma{n}"),
        kind: TemplateKind::Gamma(n),
        body: gamma_body(n, 1),
        variables: (1..=n as u32).collect(),
    })
}

/// `beta_1 = [x1,x2]`, `beta_n = [beta_{n-1}, beta_{n-1}']` on disjoint variables.
pub fn beta_word(n: usize) -> Result<WordTemplate> {
    if n < 1 {
        return Err(Error::InvalidArgument("beta_n needs n >= 1".into()));
    }
    if n > 12 {
        return Err(Error::Resource {
            what: "beta_n variable count".into(),
            required: 1u128 << n,
            limit: 1 << 12,
        });
    }
    Ok(WordTemplate {
        name: format!("beta{n}"),
        kind: TemplateKind::Beta(n),
        body: beta_body(n, 1),
        variables: (1..=(1u32 << n)).collect(),
    })
}

/// `w_g = [x1,y1]...[xg,yg]` with `x_i = 2i-1`, `y_i = 2i`.
pub fn surface_word(g: usize) -> Result<WordTemplate> {
    if g < 1 {
        return Err(Error::InvalidArgument("surface word needs g >= 1".into()));
    }
    let body = (1..=g as u32).fold(Word::identity(), |acc, i| {
        acc.mul(&Word::generator(2 * i - 1).commutator(&Word::generator(2 * i)))
    });
    Ok(WordTemplate {
        name: format!("surface{g}"),
        kind: TemplateKind::Surface(g),
        body,
        variables: (1..=2 * g as u32).collect(),
    })
}

/// Names `x1, y1, ..., xg, yg` for the surface word.
pub fn surface_alphabet(g: usize) -> Alphabet {
    let names: Vec<String> = (1..=g)
        .flat_map(|i| [format!("x{i}"), format!("y{i}")])
        .collect();
    Alphabet::with_names(&names)
}

/// `w_n = [z, [x1,y1]...[xn,yn]]` with `z = 2n+1`.
pub fn grope_word(n: usize) -> Result<Word> {
    let surface = surface_word(n)?;
    Ok(Word::generator(2 * n as u32 + 1).commutator(surface.body()))
}

pub fn grope_alphabet(n: usize) -> Alphabet {
    let mut a = surface_alphabet(n);
    a.bind("z", 2 * n as u32 + 1);
    a
}

/// Resolve a template name as accepted on the command line: `gammaN`,
/// `betaN`, `surfaceG`, or `w:<word>` (optionally with declared variables).
pub fn template_by_name(spec: &str, vars: Option<&[String]>, alphabet: &mut Alphabet) -> Result<WordTemplate> {
    let numbered = |prefix: &str| -> Option<usize> {
        spec.strip_prefix(prefix)
            .filter(|rest| !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()))
            .and_then(|rest| rest.parse().ok())
    };
    if let Some(n) = numbered("gamma") {
        return gamma_word(n);
    }
    if let Some(n) = numbered("beta") {
        return beta_word(n);
    }
    if let Some(g) = numbered("surface") {
        return surface_word(g);
    }
    let Some(text) = spec.strip_prefix("w:") else {
        return Err(Error::InvalidArgument(format!(
            "unknown template '{spec}' (expected gammaN, betaN, surfaceG or w:<word>)"
        )));
    };
    match vars {
        Some(names) => {
            let variables: Vec<u32> = names.iter().map(|n| alphabet.intern(n)).collect();
            let body = alphabet.parse(text)?;
            WordTemplate::user(spec, body, variables)
        }
        None => {
            let body = alphabet.parse(text)?;
            Ok(WordTemplate::from_word(spec, body))
        }
    }
}

/// Outcome of a reflexivity search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reflexivity {
    /// `body.substitute(sigma) == body.inverse()`.
    Certified(Substitution),
    Unknown,
}

/// Substitution images realizing `gamma_n^-1` as a `gamma_n`-word.
fn gamma_inverse_images(n: usize, first: u32) -> Vec<Word> {
    if n == 1 {
        return vec![Word::generator(first).inverse()];
    }
    // [x, G]^-1 = [x^G, G^-1]
    let inner = gamma_body(n - 1, first + 1);
    let mut images = vec![Word::generator(first).conjugate(&inner)];
    images.extend(gamma_inverse_images(n - 1, first + 1));
    images
}

/// Certificate that `t.body^-1` is a `t`-word. Constructed inductively for
/// `gamma_n` and `beta_n`; otherwise a search over substitutions whose images
/// are words of length at most `max_image_len` in the template variables,
/// stopping after `budget` candidates.
pub fn reflexivity_certificate(t: &WordTemplate, max_image_len: usize, budget: u64) -> Reflexivity {
    let sigma = match t.kind {
        TemplateKind::Gamma(n) => Some(Substitution::from_images(gamma_inverse_images(n, 1))),
        TemplateKind::Beta(n) => {
            let half = 1u32 << (n - 1);
            let images = (1..=2 * half)
                .map(|v| Word::generator(if v <= half { v + half } else { v - half }))
                .collect();
            Some(Substitution::from_images(images))
        }
        _ => None,
    };
    if let Some(sigma) = sigma {
        debug_assert_eq!(t.body.substitute(&sigma).ok(), Some(t.body.inverse()));
        return Reflexivity::Certified(sigma);
    }
    search_reflexivity(t, max_image_len, budget)
}

/// All reduced words of length `1..=max_len` over `gens`, shortest first.
fn short_words(gens: &[u32], max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer = vec![Word::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &g in gens {
                for inv in [false, true] {
                    let l = Word::generator(g);
                    let l = if inv { l.inverse() } else { l };
                    let ext = w.mul(&l);
                    if ext.len() == w.len() + 1 {
                        next.push(ext);
                    }
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn search_reflexivity(t: &WordTemplate, max_image_len: usize, budget: u64) -> Reflexivity {
    let target = t.body.inverse();
    if t.body.is_identity() {
        return Reflexivity::Certified(Substitution::zip(
            &t.variables,
            &vec![Word::identity(); t.variables.len()],
        ));
    }
    let pool = short_words(&t.variables, max_image_len);
    let k = t.variables.len();
    if pool.is_empty() || k == 0 {
        return Reflexivity::Unknown;
    }
    let mut idx = vec![0usize; k];
    let mut tried = 0u64;
    loop {
        if tried >= budget {
            return Reflexivity::Unknown;
        }
        tried += 1;
        let images: Vec<Word> = idx.iter().map(|&i| pool[i].clone()).collect();
        let sigma = Substitution::zip(&t.variables, &images);
        if t.body.substitute(&sigma).ok().as_ref() == Some(&target) {
            return Reflexivity::Certified(sigma);
        }
        let mut pos = 0;
        loop {
            if pos == k {
                return Reflexivity::Unknown;
            }
            idx[pos] += 1;
            if idx[pos] < pool.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Iterated-commutator structure of a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BracketTree {
    Leaf(Word),
    Node(Box<BracketTree>, Box<BracketTree>),
}

impl BracketTree {
    pub fn leaf(w: Word) -> Self {
        BracketTree::Leaf(w)
    }

    pub fn node(a: BracketTree, b: BracketTree) -> Self {
        BracketTree::Node(Box::new(a), Box::new(b))
    }

    pub fn word(&self) -> Word {
        match self {
            BracketTree::Leaf(w) => w.clone(),
            BracketTree::Node(a, b) => a.word().commutator(&b.word()),
        }
    }

    pub fn leaves(&self) -> usize {
        match self {
            BracketTree::Leaf(_) => 1,
            BracketTree::Node(a, b) => a.leaves() + b.leaves(),
        }
    }

    /// Read the bracket structure off a parsed expression: every `[a,b]`
    /// becomes a node, anything else a leaf.
    pub fn from_expr(e: &Expr, alphabet: &mut Alphabet) -> BracketTree {
        match e.simplified() {
            Expr::Bracket(a, b) => BracketTree::node(
                BracketTree::from_expr(a, alphabet),
                BracketTree::from_expr(b, alphabet),
            ),
            other => BracketTree::Leaf(other.eval(alphabet)),
        }
    }

    pub fn parse(s: &str, alphabet: &mut Alphabet) -> Result<BracketTree> {
        Ok(BracketTree::from_expr(&parse_expr(s)?, alphabet))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NestedBracket {
    /// `gamma_n` with this substitution is freely equal to the word.
    Gamma { n: usize, substitution: Substitution },
    /// Some bracket has non-leaf entries on both sides.
    NotNested,
}

/// Images `x1..xn` with `gamma_n(images) == tree.word()`, if the tree is nested.
fn nested_images(tree: &BracketTree) -> Option<Vec<Word>> {
    match tree {
        BracketTree::Leaf(w) => Some(vec![w.clone()]),
        BracketTree::Node(a, b) => match (a.as_ref(), b.as_ref()) {
            (BracketTree::Leaf(u), rest) => {
                let mut images = vec![u.clone()];
                images.extend(nested_images(rest)?);
                Some(images)
            }
            (rest, BracketTree::Leaf(u)) => {
                // [R, u] = [u, R]^-1, and gamma_n^-1 is a gamma_n-word.
                let mut flipped = vec![u.clone()];
                flipped.extend(nested_images(rest)?);
                let n = flipped.len();
                let sigma = Substitution::from_images(flipped);
                let rho = Substitution::from_images(gamma_inverse_images(n, 1));
                let composed = rho.then(&sigma).ok()?;
                composed.images(&(1..=n as u32).collect::<Vec<_>>()).ok()
            }
            _ => None,
        },
    }
}

/// Certificate that `w` is a `gamma_n`-word, given its bracket structure.
pub fn nested_bracket_certificate(w: &Word, tree: &BracketTree) -> Result<NestedBracket> {
    if &tree.word() != w {
        return Err(Error::InvalidArgument(
            "bracket structure does not evaluate to the given word".into(),
        ));
    }
    let Some(images) = nested_images(tree) else {
        return Ok(NestedBracket::NotNested);
    };
    let n = images.len();
    let substitution = Substitution::from_images(images);
    debug_assert_eq!(
        gamma_word(n).unwrap().body().substitute(&substitution).ok().as_ref(),
        Some(w)
    );
    Ok(NestedBracket::Gamma { n, substitution })
}

/// Body compiled against variable positions for fast evaluation.
pub(crate) fn compile(t: &WordTemplate) -> Vec<(usize, bool)> {
    t.body
        .letters()
        .iter()
        .map(|l| {
            let pos = t
                .variables
                .iter()
                .position(|&v| v == l.generator())
                .expect("template invariant: body generators are variables");
            (pos, l.is_inverse())
        })
        .collect()
}

/// Every value of `t` on `G`, together with inverses. Assignments are
/// visited in lexicographic element order.
pub fn enumerate_w_words(g: &FiniteGroup, t: &WordTemplate, budget: u128) -> Result<BTreeSet<ElementId>> {
    let k = t.variables.len() as u32;
    let order = g.order() as u128;
    let required = order.checked_pow(k).unwrap_or(u128::MAX);
    if required > budget {
        return Err(Error::Resource {
            what: format!("w-word enumeration of {} on {}", t.name, g.spec()),
            required,
            limit: budget,
        });
    }
    let program = compile(t);
    let mut assignment = vec![0 as ElementId; k as usize];
    let mut found = BTreeSet::new();
    loop {
        let mut acc = g.identity();
        for &(pos, inv) in &program {
            let e = assignment[pos];
            acc = g.mul(acc, if inv { g.inverse(e) } else { e });
        }
        found.insert(acc);
        found.insert(g.inverse(acc));
        let mut pos = 0;
        loop {
            if pos == assignment.len() {
                return Ok(found);
            }
            assignment[pos] += 1;
            if (assignment[pos] as usize) < g.order() {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_shapes() {
        assert_eq!(gamma_word(1).unwrap().body(), &Word::generator(1));
        let g2 = gamma_word(2).unwrap();
        assert_eq!(g2.body(), &Word::from_signed(&[1, 2, -1, -2]));
        let mut a = Alphabet::with_names(&["x1", "x2", "x3", "x4"]);
        let expect = a.parse("[x1,[x2,[x3,x4]]]").unwrap();
        assert_eq!(gamma_word(4).unwrap().body(), &expect);
        assert_eq!(gamma_word(4).unwrap().variables().len(), 4);
        assert!(gamma_word(0).is_err());
    }

    #[test]
    fn beta_shapes() {
        let mut a = Alphabet::new();
        assert_eq!(beta_word(1).unwrap().body(), &a.parse("[x1,x2]").unwrap());
        let mut a = Alphabet::with_names(&["x", "y", "z", "w"]);
        assert_eq!(beta_word(2).unwrap().body(), &a.parse("[[x,y],[z,w]]").unwrap());
        let names = ["x", "y", "z", "w", "s", "t", "u", "v"];
        let mut a = Alphabet::with_names(&names);
        let b3 = beta_word(3).unwrap();
        assert_eq!(b3.variables().len(), 8);
        assert_eq!(b3.body(), &a.parse("[[[x,y],[z,w]],[[s,t],[u,v]]]").unwrap());
    }

    #[test]
    fn gamma2_reflexivity_swaps() {
        let Reflexivity::Certified(s) = reflexivity_certificate(&gamma_word(2).unwrap(), 0, 0) else {
            panic!("gamma2 is reflexive");
        };
        let g2 = gamma_word(2).unwrap();
        assert_eq!(g2.body().substitute(&s).unwrap(), g2.body().inverse());
    }

    #[test]
    fn search_finds_square_reflexivity() {
        let t = WordTemplate::from_word("sq", Word::generator(1).pow(2));
        let Reflexivity::Certified(s) = reflexivity_certificate(&t, 1, 100) else {
            panic!("x^2 is reflexive");
        };
        assert_eq!(s.get(1), Some(&Word::generator(1).inverse()));
    }

    #[test]
    fn search_gives_up() {
        // x^2 y^3 is not reflexive; a tiny budget must report unknown.
        let t = WordTemplate::from_word("w", Word::from_signed(&[1, 1, 2, 2, 2]));
        assert_eq!(reflexivity_certificate(&t, 1, 50), Reflexivity::Unknown);
    }

    #[test]
    fn nested_bracket_examples() {
        let mut a = Alphabet::new();
        let tree = BracketTree::parse("[[x,y],z]", &mut a).unwrap();
        let w = tree.word();
        match nested_bracket_certificate(&w, &tree).unwrap() {
            NestedBracket::Gamma { n, substitution } => {
                assert_eq!(n, 3);
                assert_eq!(gamma_word(3).unwrap().body().substitute(&substitution).unwrap(), w);
            }
            other => panic!("unexpected {other:?}"),
        }
        let tree = BracketTree::parse("x", &mut a).unwrap();
        assert!(matches!(
            nested_bracket_certificate(&tree.word(), &tree).unwrap(),
            NestedBracket::Gamma { n: 1, .. }
        ));
        let tree = BracketTree::parse("[[x,y],[z,w]]", &mut a).unwrap();
        assert_eq!(
            nested_bracket_certificate(&tree.word(), &tree).unwrap(),
            NestedBracket::NotNested
        );
        assert!(nested_bracket_certificate(&Word::generator(1), &tree).is_err());
    }

    #[test]
    fn grope_words() {
        let mut a = grope_alphabet(2);
        assert_eq!(grope_word(2).unwrap(), a.parse("[z,[x1,y1][x2,y2]]").unwrap());
        for n in 1..6 {
            assert!(grope_word(n).unwrap().is_in_commutator_subgroup());
        }
    }

    #[test]
    fn template_names() {
        let mut a = Alphabet::new();
        assert_eq!(template_by_name("gamma3", None, &mut a).unwrap().kind(), &TemplateKind::Gamma(3));
        assert_eq!(template_by_name("beta2", None, &mut a).unwrap().kind(), &TemplateKind::Beta(2));
        let vars = vec!["x".to_string(), "y".to_string()];
        let t = template_by_name("w:x^2 y", Some(&vars), &mut a).unwrap();
        assert_eq!(t.variables().len(), 2);
        let vars = vec!["x".to_string()];
        assert!(template_by_name("w:x y", Some(&vars), &mut a).is_err());
        assert!(template_by_name("delta", None, &mut a).is_err());
    }
}
