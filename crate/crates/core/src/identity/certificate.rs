//! Rewrite certificates: a target word written as an ordered product of
//! conjugated, role-tagged factors. A certificate is checked purely by free
//! reduction.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::parse::{format_letters, Alphabet};
use crate::verbal::{beta_word, gamma_word, WordTemplate};
use crate::word::{product, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorKind {
    /// Instance of an arbitrary template; `witness` binds its variables in order.
    WWord { template: WordTemplate, witness: Vec<Word> },
    /// Instance of `gamma_n`.
    GammaN { n: usize, witness: Vec<Word> },
    /// Instance of `beta_2 = [[x1,x2],[x3,x4]]`.
    Beta2 { witness: Vec<Word> },
    Commutator { a: Word, b: Word },
    Raw,
}

impl FactorKind {
    pub fn label(&self) -> String {
        match self {
            FactorKind::WWord { .. } => "W_WORD".into(),
            FactorKind::GammaN { n, .. } => format!("GAMMA_N_WORD[{n}]"),
            FactorKind::Beta2 { .. } => "BETA2_WORD".into(),
            FactorKind::Commutator { .. } => "COMMUTATOR".into(),
            FactorKind::Raw => "RAW".into(),
        }
    }

    /// The word the tag claims the base to be, if the tag carries a witness.
    pub fn expand(&self) -> Result<Option<Word>> {
        Ok(match self {
            FactorKind::WWord { template, witness } => Some(template.instantiate(witness)?),
            FactorKind::GammaN { n, witness } => Some(gamma_word(*n)?.instantiate(witness)?),
            FactorKind::Beta2 { witness } => Some(beta_word(2)?.instantiate(witness)?),
            FactorKind::Commutator { a, b } => Some(a.commutator(b)),
            FactorKind::Raw => None,
        })
    }
}

/// `conjugator · base · conjugator^-1`, with `base` described by `kind`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub kind: FactorKind,
    pub base: Word,
    pub conjugator: Word,
}

impl Factor {
    pub fn raw(base: Word) -> Factor {
        Factor {
            kind: FactorKind::Raw,
            base,
            conjugator: Word::identity(),
        }
    }

    pub fn commutator(a: Word, b: Word) -> Factor {
        Factor {
            base: a.commutator(&b),
            kind: FactorKind::Commutator { a, b },
            conjugator: Word::identity(),
        }
    }

    pub fn gamma(n: usize, witness: Vec<Word>) -> Result<Factor> {
        let base = gamma_word(n)?.instantiate(&witness)?;
        Ok(Factor {
            kind: FactorKind::GammaN { n, witness },
            base,
            conjugator: Word::identity(),
        })
    }

    pub fn beta2(witness: Vec<Word>) -> Result<Factor> {
        let base = beta_word(2)?.instantiate(&witness)?;
        Ok(Factor {
            kind: FactorKind::Beta2 { witness },
            base,
            conjugator: Word::identity(),
        })
    }

    pub fn w_word(template: WordTemplate, witness: Vec<Word>) -> Result<Factor> {
        let base = template.instantiate(&witness)?;
        Ok(Factor {
            kind: FactorKind::WWord { template, witness },
            base,
            conjugator: Word::identity(),
        })
    }

    pub fn conjugated(mut self, by: &Word) -> Factor {
        self.conjugator = by.mul(&self.conjugator);
        self
    }

    pub fn value(&self) -> Word {
        self.base.conjugate(&self.conjugator)
    }

    /// The tag's witness, when present, reproduces the base.
    pub fn witness_holds(&self) -> bool {
        match self.kind.expand() {
            Ok(Some(w)) => w == self.base,
            Ok(None) => true,
            Err(_) => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RewriteCertificate {
    pub target: Word,
    pub factors: Vec<Factor>,
    /// Free-form remarks carried with the certificate (e.g. hypotheses that
    /// were not met).
    pub notes: Vec<String>,
}

impl RewriteCertificate {
    pub fn new(target: Word, factors: Vec<Factor>) -> Self {
        RewriteCertificate {
            target,
            factors,
            notes: Vec::new(),
        }
    }

    pub fn product(&self) -> Word {
        let values: Vec<Word> = self.factors.iter().map(Factor::value).collect();
        product(values.iter())
    }

    /// Number of factors per kind label.
    pub fn counts(&self) -> BTreeMap<String, usize> {
        let mut c = BTreeMap::new();
        for f in &self.factors {
            *c.entry(f.kind.label()).or_insert(0) += 1;
        }
        c
    }

    pub fn count_of(&self, label: &str) -> usize {
        self.factors.iter().filter(|f| f.kind.label() == label).count()
    }

    /// Explain the first failure, if any.
    pub fn check(&self) -> std::result::Result<(), String> {
        for (i, f) in self.factors.iter().enumerate() {
            if !f.witness_holds() {
                return Err(format!("factor {i} ({}) does not match its witness", f.kind.label()));
            }
        }
        if self.product() != self.target {
            return Err("product of factors differs from the target".into());
        }
        Ok(())
    }

    pub fn verify(&self) -> bool {
        self.check().is_ok()
    }

    pub fn to_text(&self, alphabet: &Alphabet) -> String {
        let w = |x: &Word| format_letters(alphabet, x);
        let list = |ws: &[Word]| ws.iter().map(w).collect::<Vec<_>>().join(" ; ");
        let mut out = format!("TARGET {}\n", w(&self.target));
        for f in &self.factors {
            out.push_str(&format!(
                "FACTOR {} {} CONJ {}",
                f.kind.label(),
                w(&f.base),
                w(&f.conjugator)
            ));
            match &f.kind {
                FactorKind::WWord { template, witness } => {
                    out.push_str(&format!(" TEMPLATE {} WITNESS {}", w(template.body()), list(witness)));
                }
                FactorKind::GammaN { witness, .. } | FactorKind::Beta2 { witness } => {
                    out.push_str(&format!(" WITNESS {}", list(witness)));
                }
                FactorKind::Commutator { a, b } => {
                    out.push_str(&format!(" WITNESS {} ; {}", w(a), w(b)));
                }
                FactorKind::Raw => {}
            }
            out.push('\n');
        }
        for n in &self.notes {
            out.push_str(&format!("NOTE {n}\n"));
        }
        let counts: Vec<String> = self.counts().iter().map(|(k, v)| format!("{k}={v}")).collect();
        out.push_str(&format!("COUNTS {}\n", counts.join(" ")));
        out
    }

    pub fn from_text(text: &str, alphabet: &mut Alphabet) -> Result<Self> {
        let bad = |m: String| Error::Certificate(m);
        let mut target = None;
        let mut factors = Vec::new();
        let mut notes = Vec::new();
        let mut counts_line = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let at = |m: &str| bad(format!("line {}: {m}", lineno + 1));
            if let Some(rest) = line.strip_prefix("TARGET ") {
                target = Some(alphabet.parse(rest)?);
            } else if let Some(rest) = line.strip_prefix("FACTOR ") {
                factors.push(parse_factor(rest, alphabet).map_err(|e| at(&e.to_string()))?);
            } else if let Some(rest) = line.strip_prefix("NOTE ") {
                notes.push(rest.to_string());
            } else if let Some(rest) = line.strip_prefix("COUNTS") {
                counts_line = Some(rest.trim().to_string());
            } else {
                return Err(at("unrecognized line"));
            }
        }
        let cert = RewriteCertificate {
            target: target.ok_or_else(|| bad("missing TARGET line".into()))?,
            factors,
            notes,
        };
        if let Some(line) = counts_line {
            let mut declared = BTreeMap::new();
            for item in line.split_whitespace() {
                let (k, v) = item
                    .split_once('=')
                    .ok_or_else(|| bad(format!("bad COUNTS entry '{item}'")))?;
                let v: usize = v.parse().map_err(|_| bad(format!("bad COUNTS entry '{item}'")))?;
                declared.insert(k.to_string(), v);
            }
            if declared != cert.counts() {
                return Err(bad("COUNTS line does not match the factor list".into()));
            }
        }
        Ok(cert)
    }
}

fn parse_factor(rest: &str, alphabet: &mut Alphabet) -> Result<Factor> {
    let bad = |m: &str| Error::Certificate(m.to_string());
    let (label, rest) = rest.split_once(' ').ok_or_else(|| bad("missing factor word"))?;
    let (base_text, rest) = rest.split_once(" CONJ ").ok_or_else(|| bad("missing CONJ"))?;
    let (conj_text, witness_text) = match rest.split_once(" WITNESS ") {
        Some((c, w)) => (c, Some(w)),
        None => (rest, None),
    };
    let (conj_text, template_text) = match conj_text.split_once(" TEMPLATE ") {
        Some((c, t)) => (c, Some(t)),
        None => (conj_text, None),
    };
    let base = alphabet.parse(base_text)?;
    let conjugator = alphabet.parse(conj_text)?;
    let mut witness = Vec::new();
    if let Some(wt) = witness_text {
        for part in wt.split(" ; ") {
            witness.push(alphabet.parse(part)?);
        }
    }
    let kind = if label == "RAW" {
        FactorKind::Raw
    } else if label == "COMMUTATOR" {
        let [a, b]: [Word; 2] = witness
            .try_into()
            .map_err(|_| bad("COMMUTATOR needs two witness words"))?;
        FactorKind::Commutator { a, b }
    } else if label == "BETA2_WORD" {
        FactorKind::Beta2 { witness }
    } else if label == "W_WORD" {
        let body = alphabet.parse(template_text.ok_or_else(|| bad("W_WORD needs TEMPLATE"))?)?;
        FactorKind::WWord {
            template: WordTemplate::from_word("w", body),
            witness,
        }
    } else if let Some(n) = label
        .strip_prefix("GAMMA_N_WORD[")
        .and_then(|r| r.strip_suffix(']'))
        .and_then(|n| n.parse().ok())
    {
        FactorKind::GammaN { n, witness }
    } else {
        return Err(bad(&format!("unknown factor kind '{label}'")));
    };
    Ok(Factor {
        kind,
        base,
        conjugator,
    })
}

impl fmt::Display for RewriteCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(&Alphabet::new()))
    }
}

/// Either a plain word or a word known to be the commutator `[a, b]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Operand {
    Plain(Word),
    Bracket(Word, Word),
}

impl Operand {
    pub fn word(&self) -> Word {
        match self {
            Operand::Plain(w) => w.clone(),
            Operand::Bracket(a, b) => a.commutator(b),
        }
    }
}

/// Left-to-right sequence of uncollected words and factors.
pub(crate) enum Item {
    Head(Word),
    Factor(Factor),
}

/// Move every head to the front using `f r = r (r^-1 f r)`: returns the
/// product of the heads and the re-conjugated factors in order.
pub(crate) fn collect(items: Vec<Item>) -> (Word, Vec<Factor>) {
    let mut head = Word::identity();
    let mut factors: Vec<Factor> = Vec::new();
    for item in items {
        match item {
            Item::Head(r) => {
                let r_inv = r.inverse();
                for f in &mut factors {
                    f.conjugator = r_inv.mul(&f.conjugator);
                }
                head = head.mul(&r);
            }
            Item::Factor(f) => factors.push(f),
        }
    }
    (head, factors)
}
