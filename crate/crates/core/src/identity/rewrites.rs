//! Constructive rewrites. Each operation returns a certificate whose factors
//! carry explicit conjugators.

use super::certificate::{collect, Factor, Item, Operand, RewriteCertificate};
use crate::error::{Error, Result};
use crate::verbal::WordTemplate;
use crate::word::{product, Word};

fn require_positive(what: &str, n: i64) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidArgument(format!("{what} must be at least 1, got {n}")));
    }
    Ok(())
}

/// `g^n h^n = (gh)^n` times `n-1` conjugates of `[g^i, h]`, `i = n-1 .. 1`.
pub fn herd_powers(g: &Word, h: &Word, n: u32) -> Result<RewriteCertificate> {
    require_positive("n", n as i64)?;
    let gh = g.mul(h);
    let h_inv = h.inverse();
    // g^i h^i = gh . [g^(i-1), h]^(h^-1) . g^(i-1) h^(i-1)
    let mut items = Vec::new();
    for i in (1..n).rev() {
        items.push(Item::Head(gh.clone()));
        items.push(Item::Factor(Factor::commutator(g.pow(i as i64), h.clone()).conjugated(&h_inv)));
    }
    items.push(Item::Head(gh));
    let (head, factors) = collect(items);
    let mut all = vec![Factor::raw(head)];
    all.extend(factors);
    Ok(RewriteCertificate::new(g.pow(n as i64).mul(&h.pow(n as i64)), all))
}

/// `(w1 ... wm)^k = w1^k` times `(m-1)k` conjugates of the `w_j`, `j >= 2`.
pub fn rotate_product(ws: &[Word], k: u32) -> Result<RewriteCertificate> {
    if ws.is_empty() {
        return Err(Error::InvalidArgument("rotate_product needs at least one word".into()));
    }
    require_positive("k", k as i64)?;
    let mut items = Vec::new();
    for _ in 0..k {
        items.push(Item::Head(ws[0].clone()));
        items.extend(ws[1..].iter().map(|w| Item::Factor(Factor::raw(w.clone()))));
    }
    let (head, factors) = collect(items);
    let mut all = vec![Factor::raw(head)];
    all.extend(factors);
    Ok(RewriteCertificate::new(product(ws.iter()).pow(k as i64), all))
}

/// `(prod g_i^a_i)^-1 (prod g_i^b_i)` as `prod_i (g_i^(b_i - a_i))^*`, in
/// order `i = 1 .. m`.
pub fn telescope_line(gs: &[Word], a: &[i64], b: &[i64]) -> Result<RewriteCertificate> {
    if gs.len() != a.len() || gs.len() != b.len() {
        return Err(Error::InvalidArgument(format!(
            "telescope_line: length mismatch ({} words, {} and {} exponents)",
            gs.len(),
            a.len(),
            b.len()
        )));
    }
    if gs.is_empty() {
        return Err(Error::InvalidArgument("telescope_line needs at least one word".into()));
    }
    let m = gs.len();
    // left[j] = g_m^-a_m ... g_j^-a_j, left[m] = 1
    let mut left = vec![Word::identity(); m + 1];
    for j in (0..m).rev() {
        left[j] = left[j + 1].mul(&gs[j].pow(-a[j]));
    }
    let factors = (0..m)
        .map(|i| Factor::raw(gs[i].pow(b[i] - a[i])).conjugated(&left[i + 1]))
        .collect();
    let start: Vec<Word> = gs.iter().zip(a).map(|(g, &e)| g.pow(e)).collect();
    let end: Vec<Word> = gs.iter().zip(b).map(|(g, &e)| g.pow(e)).collect();
    let target = product(start.iter()).inverse().mul(&product(end.iter()));
    Ok(RewriteCertificate::new(target, factors))
}

/// `[a,b]^(2^n) = [a^(2^n), b]` times `2^n - 1` gamma_3-words.
pub fn square_to_gamma3(a: &Word, b: &Word, n: u32) -> Result<RewriteCertificate> {
    require_positive("n", n as i64)?;
    if n > 20 {
        return Err(Error::Resource {
            what: "square_to_gamma3 factor count".into(),
            required: (1u128 << n) - 1,
            limit: (1 << 20) - 1,
        });
    }
    let target = a.commutator(b).pow(1i64 << n);
    if a.commutator(b).is_identity() {
        return Ok(RewriteCertificate::new(target, Vec::new()));
    }
    let (head, factors) = doubling(a, b, n)?;
    let mut all = vec![Factor::commutator(head, b.clone())];
    all.extend(factors);
    let mut cert = RewriteCertificate::new(target, all);
    if !b.is_in_commutator_subgroup() {
        cert.notes.push("b is not in the commutator subgroup".into());
    }
    Ok(cert)
}

/// `[a,b]^(2^n) = [a^(2^n), b] . factors`.
fn doubling(a: &Word, b: &Word, n: u32) -> Result<(Word, Vec<Factor>)> {
    if n == 0 {
        return Ok((a.clone(), Vec::new()));
    }
    // [a,b]^2 = [a^2,b] [[a^b,b],a]
    let a2 = a.pow(2);
    let gamma = Factor::gamma(3, vec![a.conjugate(b), b.clone(), a.clone()])?;
    let mut items = Vec::new();
    for _ in 0..(1u64 << (n - 1)) {
        items.push(Item::Head(a2.commutator(b)));
        items.push(Item::Factor(gamma.clone()));
    }
    let (_, outer) = collect(items);
    let (head, mut inner) = doubling(&a2, b, n - 1)?;
    inner.extend(outer);
    Ok((head, inner))
}

/// `g^m k^m (gk)^-m` as `m(m-1)/2` conjugates of `[g,k]`.
pub fn gamma3_triangle(g: &Word, k: &Word, m: u32) -> Result<RewriteCertificate> {
    require_positive("m", m as i64)?;
    let herd = herd_powers(g, k, m)?;
    let outer = g.mul(k).pow(m as i64);
    let step = k.mul(g).mul(&k.inverse());
    let mut factors = Vec::new();
    // herd tail factors come in the order i = m-1, ..., 1
    for (idx, f) in herd.factors[1..].iter().enumerate() {
        let i = m as usize - 1 - idx;
        // [g^i,k] = [g,k] . [g^(i-1),k]^(k g k^-1)
        let conj = outer.mul(&f.conjugator);
        let mut inner = Word::identity();
        for _ in 0..i {
            factors.push(Factor::commutator(g.clone(), k.clone()).conjugated(&conj.mul(&inner)));
            inner = inner.mul(&step);
        }
    }
    let target = g.pow(m as i64).mul(&k.pow(m as i64)).mul(&g.mul(k).pow(-(m as i64)));
    Ok(RewriteCertificate::new(target, factors))
}

/// `[g,[a,b]] = [[b,z],a^z] [[z,a],b^a]` with `z = b^-1 g b`, from the
/// Hall-Witt identity. A factor is tagged as a beta_2-word when the
/// corresponding operand is a known commutator.
pub fn hall_witt_split(g: &Word, a: &Operand, b: &Operand) -> Result<RewriteCertificate> {
    let (aw, bw) = (a.word(), b.word());
    let target = g.commutator(&aw.commutator(&bw));
    if target.is_identity() && aw.commutator(&bw).is_identity() {
        return Ok(RewriteCertificate::new(target, Vec::new()));
    }
    let z = g.conjugate(&bw.inverse());
    let q = match a {
        Operand::Bracket(s, t) => Factor::beta2(vec![bw.clone(), z.clone(), s.conjugate(&z), t.conjugate(&z)])?,
        Operand::Plain(_) => Factor::raw(bw.commutator(&z).commutator(&aw.conjugate(&z))),
    };
    let r = match b {
        Operand::Bracket(s, t) => Factor::beta2(vec![z.clone(), aw.clone(), s.conjugate(&aw), t.conjugate(&aw)])?,
        Operand::Plain(_) => Factor::raw(z.commutator(&aw).commutator(&bw.conjugate(&aw))),
    };
    Ok(RewriteCertificate::new(target, vec![q, r]))
}

/// `[x,c][x,c^n] = [x,c^(n+1)] [[x,c^n],c]^([x,c^n]^-1)` with `c = [y,z]`.
pub fn oddball_step(x: &Word, y: &Word, z: &Word, n: u32) -> Result<RewriteCertificate> {
    require_positive("n", n as i64)?;
    let c = y.commutator(z);
    let target = x.commutator(&c).mul(&x.commutator(&c.pow(n as i64)));
    if c.is_identity() {
        return Ok(RewriteCertificate::new(target, Vec::new()));
    }
    let xcn = x.commutator(&c.pow(n as i64));
    let factors = vec![
        Factor::commutator(x.clone(), c.pow(n as i64 + 1)),
        Factor::beta2(vec![x.clone(), c.pow(n as i64), y.clone(), z.clone()])?.conjugated(&xcn.inverse()),
    ];
    Ok(RewriteCertificate::new(target, factors))
}

/// `[x,[y,z]]^n = [x,[y,z]^n]` times `n-1` beta_2-words.
pub fn oddball_power(x: &Word, y: &Word, z: &Word, n: u32) -> Result<RewriteCertificate> {
    require_positive("n", n as i64)?;
    let c = y.commutator(z);
    let target = x.commutator(&c).pow(n as i64);
    if c.is_identity() {
        return Ok(RewriteCertificate::new(target, Vec::new()));
    }
    // [x,c]^(k+1) = [x,c] [x,c^k] B_k = [x,c^(k+1)] beta_k B_k
    let mut betas: Vec<Factor> = Vec::new();
    for k in 1..n {
        let step = oddball_step(x, y, z, k)?;
        betas.insert(0, step.factors[1].clone());
    }
    let mut factors = vec![Factor::commutator(x.clone(), c.pow(n as i64))];
    factors.extend(betas);
    Ok(RewriteCertificate::new(target, factors))
}

fn x() -> Word {
    Word::generator(1)
}

fn y() -> Word {
    Word::generator(2)
}

/// The two sides of `[x,y]^3 = [y^x, x^(y^-1) x^-2] [x^(y^-1), y^2]`.
pub fn culler_identity() -> (Word, Word) {
    let (a, b) = culler_pairs();
    (x().commutator(&y()).pow(3), a.0.commutator(&a.1).mul(&b.0.commutator(&b.1)))
}

fn culler_pairs() -> ((Word, Word), (Word, Word)) {
    let y_inv = y().inverse();
    let x_bar = x().conjugate(&y_inv);
    (
        (y().conjugate(&x()), x_bar.mul(&x().pow(-2))),
        (x_bar, y().pow(2)),
    )
}

/// `[x,y]^3` as a product of two commutators.
pub fn culler_certificate() -> RewriteCertificate {
    let ((p, q), (r, s)) = culler_pairs();
    RewriteCertificate::new(
        x().commutator(&y()).pow(3),
        vec![Factor::commutator(p, q), Factor::commutator(r, s)],
    )
}

/// `[x, y^k]^3` as a product of two `[x1, x2^k]`-words.
pub fn culler_power_certificate(k: u32) -> Result<RewriteCertificate> {
    require_positive("k", k as i64)?;
    let k = k as i64;
    let template = WordTemplate::from_word(
        format!("[x,y^{k}]"),
        Word::generator(1).commutator(&Word::generator(2).pow(k)),
    );
    let x_bar = x().conjugate(&y().pow(-k));
    let big_x = x_bar.mul(&x().pow(-2));
    let a = y().conjugate(&x()).pow(k);
    // [A, X] = [X^A, A^-1] and A^-1 = ((y^x)^-1)^k
    let first = Factor::w_word(template.clone(), vec![big_x.conjugate(&a), y().conjugate(&x()).inverse()])?;
    let second = Factor::w_word(template, vec![x_bar, y().pow(2)])?;
    Ok(RewriteCertificate::new(
        x().commutator(&y().pow(k)).pow(3),
        vec![first, second],
    ))
}

/// `([x,y]^2)^6` as five `[x1,x2]^2`-words. With `a`, `b` the two
/// commutators of the cubic identity and `c = [b^-1, b^-1 a^-1 b^-1]` one has
/// `abab = a^2 b^2 c`, hence `(ab)^4 = a^2 b^2 c^2 (a^2)^(c^-1) (b^2)^(c^-1)`.
pub fn culler_chain_xy2() -> RewriteCertificate {
    let ((p, q), (r, s)) = culler_pairs();
    let a = p.commutator(&q);
    let b = r.commutator(&s);
    let b_inv = b.inverse();
    let c_pair = (b_inv.clone(), b_inv.mul(&a.inverse()).mul(&b_inv));
    let c_inv = c_pair.0.commutator(&c_pair.1).inverse();
    let template = WordTemplate::from_word(
        "[x,y]^2",
        Word::generator(1).commutator(&Word::generator(2)).pow(2),
    );
    let sq = |u: &Word, v: &Word| {
        Factor::w_word(template.clone(), vec![u.clone(), v.clone()]).expect("two-variable template")
    };
    let factors = vec![
        sq(&p, &q),
        sq(&r, &s),
        sq(&c_pair.0, &c_pair.1),
        sq(&p.conjugate(&c_inv), &q.conjugate(&c_inv)),
        sq(&r.conjugate(&c_inv), &s.conjugate(&c_inv)),
    ];
    RewriteCertificate::new(x().commutator(&y()).pow(2).pow(6), factors)
}

/// `[x,y]^3` in the shape used by the cover check:
/// `[X'^-1, y]^(x X') . [x^(y^-1), y^2]` with `X = x^(y^-1) x^-2`, `X' = x^-1 X x`.
pub fn culler_cover_shape() -> RewriteCertificate {
    let x_bar = x().conjugate(&y().inverse());
    let big_x = x_bar.mul(&x().pow(-2));
    let xp = big_x.conjugate(&x().inverse());
    RewriteCertificate::new(
        x().commutator(&y()).pow(3),
        vec![
            Factor::commutator(xp.inverse(), y()).conjugated(&x().mul(&xp)),
            Factor::commutator(x_bar, y().pow(2)),
        ],
    )
}
